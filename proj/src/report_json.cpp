#include "corput/report_json.hpp"

namespace corput {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

std::string_view to_string(CertificateStatus status) {
  switch (status) {
    case CertificateStatus::passed: return "passed";
    case CertificateStatus::failed: return "failed";
    case CertificateStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

Json to_json(const Witness& w) {
  Json j;
  j["rho"] = w.rho;
  j["omega"] = w.omega;
  j["nu"] = w.nu;
  j["x"] = w.x;
  j["value"] = w.value;
  return j;
}

Json to_json(const TaylorData& t) {
  Json j;
  j["gamma"] = t.gamma;
  j["mu"] = {{"omega", t.omega.vec()}, {"nu", t.nu.coords}};
  Json coeffs = Json::array();
  for (const auto& c : t.coeffs) coeffs.push_back(complex_json(c));
  j["coeffs"] = coeffs;
  j["remainder_const"] = t.remainder_const;
  return j;
}

Json to_json(const ConditionEntry& e) {
  Json j;
  j["passed"] = e.passed;
  j["witness"] = to_json(e.witness);
  j["constant"] = e.constant ? Json(*e.constant) : Json(nullptr);
  if (!e.per_order.empty()) j["per_order"] = e.per_order;
  j["note"] = e.note;
  return j;
}

Json to_json(const InequalityCertificate& c) {
  Json j;
  j["name"] = c.name;
  j["best_constant"] = c.best_constant;
  j["worst_point"] = to_json(c.worst_point);
  j["grid_spec"] = c.grid_spec;
  j["passed"] = c.passed;
  j["status"] = to_string(c.status);
  j["note"] = c.note;
  return j;
}

Json to_json(const ConditionReport& r) {
  Json j;
  j["instance"] = r.instance;
  j["all_passed"] = r.all_passed;
  Json conditions = Json::object();
  for (const auto& c : r.conditions) conditions[c.name] = to_json(c);
  j["conditions"] = conditions;
  Json certs = Json::array();
  for (const auto& c : r.certificates) certs.push_back(to_json(c));
  j["certificates"] = certs;
  j["sufficient_delta"] = r.sufficient_delta ? Json(*r.sufficient_delta) : Json(nullptr);
  j["grid"] = r.grid_spec;
  return j;
}

Json to_json(const DecayFit& f) {
  Json j;
  j["exponent"] = f.exponent;
  j["log_constant"] = f.log_constant;
  j["residual_rms"] = f.residual_rms;
  j["tail_fraction_used"] = f.tail_fraction_used;
  j["points_used"] = f.points_used;
  j["used_envelope"] = f.used_envelope;
  j["lambda_from"] = f.lambda_from;
  j["lambda_to"] = f.lambda_to;
  return j;
}

Json to_json(const BoundCertificate& c) {
  Json j;
  j["rate"] = c.rate;
  j["sup_product"] = c.sup_product;
  j["attained_at"] = {{"lambda", c.attained_lambda},
                      {"nu_index", c.attained_nu_index},
                      {"nu", c.attained_nu}};
  j["certified_range"] = {{"lambda_min", c.lambda_min},
                          {"lambda_max", c.lambda_max},
                          {"nu_samples", c.nu_count}};
  j["top_decade_slope"] = c.top_decade_slope;
  return j;
}

Json to_json(const SublevelEstimate& e) {
  Json j;
  j["t"] = e.t;
  j["measure"] = e.measure;
  j["std_error"] = e.std_error;
  j["method"] = to_string(e.method);
  j["sample_count"] = e.sample_count;
  return j;
}

Json to_json(const SublevelFit& f) {
  Json j;
  j["exponent"] = f.exponent;
  j["constant"] = f.constant;
  j["residual_rms"] = f.residual_rms;
  Json est = Json::array();
  for (const auto& e : f.estimates) est.push_back(to_json(e));
  j["estimates"] = est;
  j["unchecked_assumption"] = f.unchecked_assumption;
  return j;
}

Json to_json(const IbpTerm& t) {
  return Json{{"s", t.s}, {"p", t.p}, {"r", t.r}, {"coefficient", t.coefficient}};
}

Json integral_json(double lambda, const ParameterPoint& nu, const IntegralResult& r) {
  Json j;
  j["lambda"] = lambda;
  j["nu"] = nu.coords;
  j["method"] = to_string(r.method);
  j["value"] = complex_json(r.value);
  j["error"] = r.error_estimate;
  j["panels"] = r.panels_used;
  return j;
}

}  // namespace corput
