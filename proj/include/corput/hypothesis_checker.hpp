#pragma once

#include <optional>
#include <string>
#include <vector>

#include "corput/phase_model.hpp"
#include "corput/radial_profile.hpp"

namespace corput {

/// Sample set used by every check. Rho samples exclude 0.
struct CheckGrid {
  std::vector<double> rhos;
  std::vector<SphereNode> directions;
  std::vector<ParameterPoint> nus;
  std::vector<Point> points;  // x samples with chi(x) > 0, for A2 and A4
  std::string description;
};

struct GridOptions {
  int rho_count = 256;
  double rho_min_fraction = 1e-4;  // rho_min = fraction * delta
  int sphere_resolution = 32;
  int lattice_per_axis = 0;        // 0 = automatic
};

/// Log-spaced rho in [fraction*delta, delta/2], sphere_grid directions, the
/// instance's parameter samples and a lattice of support points.
CheckGrid default_grid(const ProblemInstance& instance, const GridOptions& options = {});

/// `count` log-spaced points in [lo, hi].
std::vector<double> log_spaced(double lo, double hi, int count);

/// Where a sampled quantity was worst.
struct Witness {
  double rho = 0.0;
  std::vector<double> omega;
  std::vector<double> nu;
  std::vector<double> x;
  double value = 0.0;
};

struct ConditionEntry {
  std::string name;
  bool passed = false;
  Witness witness;
  std::optional<double> constant;
  std::vector<double> per_order;  // F4: sup |d^k F| for k = 0..max_order; A4: max per |alpha|
  std::string note;
};

enum class CertificateStatus { passed, failed, inconclusive };

struct InequalityCertificate {
  std::string name;
  double best_constant = 0.0;
  Witness worst_point;
  std::string grid_spec;
  bool passed = false;
  CertificateStatus status = CertificateStatus::failed;
  std::string note;
};

struct ConditionReport {
  std::string instance;
  std::vector<ConditionEntry> conditions;  // F1, F2, F3, F4, A1, A2, A4
  std::vector<InequalityCertificate> certificates;
  std::optional<double> sufficient_delta;
  std::string grid_spec;
  bool all_passed = false;

  const ConditionEntry& condition(const std::string& name) const;
  const InequalityCertificate* certificate(const std::string& name) const;
};

struct CheckOptions {
  double f1_tol = 1e-8;
  double c_min = 1e-3;
  /// Highest order for the smooth-extension certificates; 0 means gamma + 3.
  int smooth_max_order = 0;
  DerivativeOptions derivatives;
  GridOptions grid;
};

/// |a_0|, |a_1| <= tol.
ConditionEntry check_F1(const TaylorData& taylor, double tol);

/// min over mu of sum_{j>=2} |a_j(mu)| >= c_min.
ConditionEntry check_F2(const std::vector<TaylorData>& taylors, double c_min);

/// |dF| non-decreasing along the rho grid up to finite-difference slack.
ConditionEntry check_F3(const ProblemInstance& instance, const Direction& omega,
                        const ParameterPoint& nu, const std::vector<double>& rhos,
                        const DerivativeOptions& options = {});

/// Sampled sup |d^k F| for k <= max_order over the (rho, omega, nu) grid.
ConditionEntry check_F4(const ProblemInstance& instance, const CheckGrid& grid, int max_order,
                        const DerivativeOptions& options = {});

/// Finite-difference sup |d^alpha a| for |alpha| <= floor(N/gamma) + 1.
ConditionEntry check_amplitude_bounds(const ProblemInstance& instance, const CheckGrid& grid,
                                      double fd_tolerance = 1e-6);

/// Cutoff vanishes outside B_{delta/2}(0), lies in [0, 1], and is positive at z.
ConditionEntry check_A1(const ProblemInstance& instance, const CheckGrid& grid);

/// Im Phi >= -1e-12 on the support lattice for every sampled nu.
ConditionEntry check_A2(const ProblemInstance& instance, const CheckGrid& grid);

/// Taylor data for every (nu, omega) of the grid, nu-major.
std::vector<TaylorData> taylor_table(const ProblemInstance& instance, const CheckGrid& grid,
                                     const DerivativeOptions& options = {});

/// min |dF| / rho^{gamma-1}.
InequalityCertificate verify_derivative_lower_bound(const ProblemInstance& instance,
                                                    const CheckGrid& grid,
                                                    const DerivativeOptions& options = {});

/// max |d^m F| rho^{m-1} / |dF|. Throws singularity where dF = 0.
InequalityCertificate verify_derivative_upper_bound(const ProblemInstance& instance,
                                                    const CheckGrid& grid, int m,
                                                    const DerivativeOptions& options = {});

/// min |dF| / pi(rho, mu); `taylors` ordered as taylor_table.
InequalityCertificate verify_pi_lower_bound(const ProblemInstance& instance,
                                            const std::vector<TaylorData>& taylors,
                                            const CheckGrid& grid,
                                            const DerivativeOptions& options = {});

/// max |R_{m,gamma-m}| / rho^{gamma-m+1} with
/// R = d^m F - sum_{k=0}^{gamma-m} (k+m)!/k! a_{k+m} rho^k.
InequalityCertificate check_remainder_bound(const ProblemInstance& instance,
                                            const std::vector<TaylorData>& taylors,
                                            const CheckGrid& grid, int m,
                                            const DerivativeOptions& options = {});

/// For each gamma < m <= M: max |d^m F| rho^{m-2} / |dF|. Precision failures
/// give inconclusive certificates.
std::vector<InequalityCertificate> check_smooth_extension(const ProblemInstance& instance,
                                                          const CheckGrid& grid, int max_order,
                                                          const DerivativeOptions& options = {});

/// Largest of delta, delta/2, delta/4 for which the pi lower-bound constant
/// on [1e-4 delta', delta'/2] exceeds 0.1.
std::optional<double> sufficient_delta(const ProblemInstance& instance, const CheckGrid& grid,
                                       const std::vector<TaylorData>& taylors,
                                       const DerivativeOptions& options = {});

/// Runs every check and certificate.
ConditionReport analyze(const ProblemInstance& instance, const CheckOptions& options = {});

}  // namespace corput
