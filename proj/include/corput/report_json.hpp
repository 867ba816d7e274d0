#pragma once

#include <json.hpp>

#include "corput/decay_fitter.hpp"
#include "corput/hypothesis_checker.hpp"
#include "corput/osc_integrator.hpp"
#include "corput/radial_profile.hpp"
#include "corput/sublevel.hpp"

namespace corput {

using Json = nlohmann::ordered_json;

Json complex_json(Complex z);
Json to_json(const Witness& w);
Json to_json(const TaylorData& t);
Json to_json(const ConditionEntry& e);
Json to_json(const InequalityCertificate& c);
Json to_json(const ConditionReport& r);
Json to_json(const DecayFit& f);
Json to_json(const BoundCertificate& c);
Json to_json(const SublevelEstimate& e);
Json to_json(const SublevelFit& f);
Json to_json(const IbpTerm& t);

/// {lambda, nu, method, value: [re, im], error, panels}
Json integral_json(double lambda, const ParameterPoint& nu, const IntegralResult& r);

std::string_view to_string(CertificateStatus status);

}  // namespace corput
