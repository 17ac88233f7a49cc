#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "entropic/entcone.hpp"
#include "entropic/rational.hpp"
#include "entropic/scenario.hpp"

namespace entropic {

/// A marginal model: one joint distribution per maximal context.
///
/// Outcome tuples of a context are indexed in mixed radix over its members
/// in observable order, first member most significant. Tables may carry
/// exact rational values alongside the doubles.
class MarginalModel {
 public:
  MarginalModel() = default;
  explicit MarginalModel(MarginalScenario scenario);

  const MarginalScenario& scenario() const { return scenario_; }

  std::size_t table_size(ObsSet context) const;
  std::size_t encode(ObsSet context, const std::vector<int>& outcomes) const;
  std::vector<int> decode(ObsSet context, std::size_t index) const;

  void set_table(ObsSet maximal, std::vector<double> probs);
  void set_table(ObsSet maximal, std::vector<Rational> probs);

  bool has_table(ObsSet maximal) const { return tables_.count(maximal) != 0; }
  /// True when every maximal context carries an exact table.
  bool is_exact() const;
  const std::vector<double>& table(ObsSet maximal) const;
  const std::vector<Rational>& exact_table(ObsSet maximal) const;

  /// Distribution of any context, marginalized from the first maximal
  /// context containing it.
  std::vector<double> marginal(ObsSet subset) const;
  std::vector<Rational> exact_marginal(ObsSet subset) const;

  double prob(ObsSet context, const std::vector<int>& outcomes) const;

 private:
  ObsSet host(ObsSet subset) const;
  std::vector<std::size_t> projection_map(ObsSet from, ObsSet to) const;

  MarginalScenario scenario_;
  std::map<ObsSet, std::vector<double>> tables_;
  std::map<ObsSet, std::vector<Rational>> exact_;
};

/// Builds every maximal-context table from f(context, outcomes).
MarginalModel tabulate(const MarginalScenario& scenario,
                       const std::function<Rational(ObsSet, const std::vector<int>&)>& f);
MarginalModel tabulate_real(const MarginalScenario& scenario,
                            const std::function<double(ObsSet, const std::vector<int>&)>& f);

/// Bipartite box on bell(2, settings, d) from p(a, b, x, y).
MarginalModel bipartite(int settings, int outcomes, const std::function<Rational(int, int, int, int)>& p);
MarginalModel bipartite_real(int settings, int outcomes, const std::function<double(int, int, int, int)>& p);

/// Reads p(a,b|x,y) off a bell(2,m,d)-shaped box.
double bipartite_prob(const MarginalModel& box, int a, int b, int x, int y);

/// Empty when the box is valid: nonnegative, normalized and marginally
/// consistent (exactly for exact tables, within `tol` otherwise).
std::vector<std::string> validation_errors(const MarginalModel& box, double tol = 1e-10);
bool is_valid(const MarginalModel& box, double tol = 1e-10);

/// Convex combination sum w_i box_i of boxes on the same scenario.
MarginalModel mix(const std::vector<std::pair<Rational, MarginalModel>>& parts);

// Named boxes. CHSH-type boxes live on bell(2,2,2) with observables
// A0,A1,B0,B1; outcome index a = (1 - value) / 2.
MarginalModel pr_box();
MarginalModel isotropic_box(const Rational& c);
MarginalModel classical_box();
MarginalModel white_noise_box();
MarginalModel pmax_box();
MarginalModel pf_box();
/// gamma PR + xi P^c + (1 - gamma - xi) P^f.
MarginalModel triangle_box(const Rational& gamma, const Rational& xi);
MarginalModel pr_box_d(int d);
MarginalModel classical_box_d(int d);
/// xi PR_d + (1 - xi) P^c_d.
MarginalModel dfamily_box(const Rational& xi, int d);
/// Tripartite box on bilocality():
/// (1 + xi (-1)^(a+b+c+xz) + (1 - xi - gamma) (-1)^(a+b+c)) / 8.
MarginalModel nb_box(const Rational& xi, const Rational& gamma);

/// "pr", "iso:C", "classical", "white", "pmax", "pf", "triangle:g,x",
/// "prd:d", "classical_d:d", "dfamily:xi,d", "nb:xi,gamma".
/// Throws std::invalid_argument for unknown names or out-of-domain values.
MarginalModel named_box(const std::string& spec);

/// Shannon entropy in bits; entries below 1e-15 count as zero.
double shannon_entropy(const std::vector<double>& p);
double binary_entropy(double p);

EntropyVector entropy_vector(const MarginalModel& box);

/// <X Y> = sum (-1)^(a+b) P(a,b) for two binary observables in a context.
double correlator(const MarginalModel& box, std::size_t x, std::size_t y);

/// <A0B0> + <A0B1> + <A1B0> - <A1B1> on a bell(2,2,2)-shaped box.
double chsh(const MarginalModel& box);

/// I(A0:B0) + I(A0:B1) + I(A1:B0) - I(A1:B1) - H(A0) - H(B0) as a form
/// over the bell(2,2,d) coordinates.
EntropicInequality chsh_entropic_inequality(const MarginalScenario& scenario);
double chsh_entropic(const MarginalModel& box);

/// H(X_i X_{i+1}) + sum_{j != i, i+1} H(X_j) - sum_{j != i} H(X_j X_{j+1}),
/// with X_1..X_n the cycle_order of the scenario and i in 1..n.
EntropicInequality ncycle_inequality(const MarginalScenario& scenario, int i);
double ncycle_entropic(const MarginalModel& box, int i);

/// Sum of <X_i X_{i+1}> around the 5-cycle.
double klyachko_k5(const MarginalModel& box);

/// The ten class representatives of the bilocality cone, k = 1..10, in
/// the order used throughout (1-4 trivial). Coordinates of bilocality().
EntropicInequality bilocal_row_inequality(int k);
double bilocal_row(const MarginalModel& box, int k);

/// sum_b P(a,b,c|x,z) == P(a|x) P(c|z) for all a, c, x, z.
bool check_bilocal_marginal(const MarginalModel& box, double tol = 1e-10);
/// Largest deviation in the above.
double bilocal_marginal_residual(const MarginalModel& box);

/// Adds a no-click outcome (last index) per observable. Every maximal
/// context must be a pair.
MarginalModel single_detector(const MarginalModel& box, double eta);
MarginalModel two_detector(const MarginalModel& box, double eta);

/// Closed forms of the entropies of the transformed boxes in terms of the
/// original entropies. Pair entropies in the two-detector model need the
/// two single-observable entropies.
double single_detector_entropy(double h, double eta);
double two_detector_single_entropy(double h, double eta);
double two_detector_pair_entropy(double h_pair, double h_first, double h_second, double eta);

struct HiddenVariableCertificate {
  std::vector<double> joint;  // over global assignments, mixed radix, observable 0 most significant
};

struct NoncontextualityResult {
  bool noncontextual = false;
  /// Minimal total L1 distance between the box and any noncontextual model.
  double distance = 0;
  std::optional<HiddenVariableCertificate> certificate;
};

/// Exact LP over global-assignment weights. Real tables are rounded to
/// dyadic rationals first; such boxes count as noncontextual when the
/// distance is at most `tol`. Throws when the number of global
/// assignments exceeds 1e6.
NoncontextualityResult is_noncontextual(const MarginalModel& box, double tol = 1e-9);

/// Marginal model induced by a global joint distribution.
MarginalModel box_from_joint(const MarginalScenario& scenario, const std::vector<double>& joint);
MarginalModel sample_noncontextual(const MarginalScenario& scenario, std::mt19937_64& rng);
/// Random convex combination of the 24 extremal two-outcome CHSH boxes.
MarginalModel sample_nosignaling_chsh(std::mt19937_64& rng);

/// Relabels the outcomes of one observable by `perm`.
MarginalModel relabel_outcomes(const MarginalModel& box, std::size_t observable, const std::vector<int>& perm);

}  // namespace entropic
