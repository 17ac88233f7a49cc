#pragma once

#include <functional>
#include <string>
#include <vector>

#include "entropic/box.hpp"
#include "entropic/entcone.hpp"
#include "entropic/optimize.hpp"

namespace entropic {

/// A parameterized box family together with the quantity to maximize.
struct Objective {
  std::string name;
  std::vector<std::string> parameters;
  std::vector<double> lower, upper;
  std::function<MarginalModel(const std::vector<double>&)> box;
  std::function<double(const MarginalModel&)> value;

  /// NaN when the parameters leave the family's domain.
  double operator()(const std::vector<double>& p) const;
};

/// CHSH_E over (alpha, four Y-Z plane angles).
Objective chsh_e_objective();
/// CHSH_E over (alpha, four (theta, phi) Bloch pairs).
Objective chsh_e_bloch_objective();
/// CHSH_E over the four angles at a fixed state.
Objective chsh_e_angles_objective(double alpha);
/// Entropic Klyachko (the n-cycle inequality on the 5-cycle) over (alpha, theta, phi).
Objective klyachko_e_objective();
/// Same, evaluated on the two-detector transform at efficiency eta.
Objective klyachko_e_two_detector_objective(double eta);
/// Max over the 2k cyclic variants on the chained box; alpha free, or
/// fixed when alpha > 0.
Objective chained_objective(int k, double alpha = 0);
/// One bilocality inequality over (theta1, phi1, theta2, phi2, A angles, C angles).
Objective bilocal_objective(const EntropicInequality& ineq, const std::string& name);

/// "chsh_e", "chsh_e_bloch", "klyachko_e", "chained:k".
Objective make_objective(const std::string& target);

OptimizationReport optimize(const Objective& obj, const NelderMeadOptions& options = {});

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string csv() const;
  std::size_t column(const std::string& name) const;
};

/// Evenly spaced points lo, lo + step, ... up to hi (inclusive within
/// a tolerance). Empty when step <= 0 or hi < lo.
std::vector<double> grid(double lo, double hi, double step);

/// Max CHSH_E over angles along an interior alpha grid, with CHSH at the
/// optimum and the closed-form quantum CHSH maximum.
Table scan_fig2a(double step, const NelderMeadOptions& options);
/// Max cyclic entropic violation on the chained box, k = 2..kmax, alpha = pi/4.
Table scan_fig2b(int kmax, const NelderMeadOptions& options);
/// Triangle family over (gamma, xi): chsh, chsh_e, q and wiring gains.
Table scan_fig3(double step);
/// d-outcome family, d = 2..dmax: q, wired q, gain and chsh_e against xi.
Table scan_fig4(double step, int dmax = 5);
/// NB family over (xi, gamma): row 7, marginal residual, locality flag.
Table scan_fig6(double step);
/// Entropic Klyachko at the quantum optimum under the single-detector
/// model, directly and by the linear law.
Table scan_eta_single(double step, const NelderMeadOptions& options);

struct EtaThreshold {
  double threshold = 0;
  Table trace;  // every bisection probe: eta, max violation
};

/// Bisects for the efficiency at which the optimized two-detector
/// Klyachko violation changes sign, re-optimizing at each probe from
/// the previous optimum.
EtaThreshold scan_eta_two(double lo, double hi, double tolerance, const NelderMeadOptions& options);

/// "fig2a", "fig2b", "fig3", "fig4", "fig6", "eta_single", "eta_two".
Table run_scan(const std::string& figure, double step, const NelderMeadOptions& options);

/// gnuplot script plotting the scan from `csv_path`.
std::string plot_script(const std::string& figure, const std::string& csv_path);

struct BilocalSearchReport {
  std::size_t grid_points = 0;
  std::size_t inequalities = 0;
  double grid_max = 0;                    // over all points and inequalities
  std::vector<double> class_optimum;      // per representative
  std::vector<OptimizationReport> reports;
  double max_violation() const;
};

/// Grid over source and measurement angles, evaluating every inequality
/// at each point, then seeded optimizer restarts per class representative.
BilocalSearchReport bilocal_quantum_search(const std::vector<EntropicInequality>& all,
                                           const std::vector<EntropicInequality>& representatives,
                                           int grid_per_axis, const NelderMeadOptions& options);

}  // namespace entropic
