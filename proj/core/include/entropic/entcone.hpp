#pragma once

#include <map>
#include <string>
#include <vector>

#include "entropic/linear.hpp"
#include "entropic/projection.hpp"
#include "entropic/rational.hpp"
#include "entropic/scenario.hpp"

namespace entropic {

/// Joint entropies in bits, keyed by context subset. H(empty) is implicit 0.
using EntropyVector = std::map<ObsSet, double, SubsetLess>;

/// sum_S coeffs[S] * H(S) <= 0 (or = 0 when used as an equation), with
/// integer coefficients of collective gcd 1.
struct EntropicInequality {
  std::map<ObsSet, Rational, SubsetLess> coeffs;

  Rational coeff(ObsSet s) const;
  bool empty() const { return coeffs.empty(); }
  friend bool operator==(const EntropicInequality&, const EntropicInequality&) = default;
};

/// Lexicographic over the fixed subset order (dense comparison).
bool operator<(const EntropicInequality& a, const EntropicInequality& b);

/// Scales to integers with gcd 1. Sign is kept. Throws on the zero form.
EntropicInequality canonical(EntropicInequality ineq);
EntropicInequality permuted(const EntropicInequality& ineq, const Permutation& p);

LinearExpr to_expr(const EntropicInequality& ineq, const MarginalScenario& scenario);
EntropicInequality from_expr(const LinearExpr& expr, const MarginalScenario& scenario);

/// Parses "A0 + C0 - A0,B,C1 - 2 A1,B,C0" style text (each term an optional
/// coefficient then a subset name, optionally wrapped as H(...)). A trailing
/// "<= 0", ">= 0" or "= 0" is accepted, so format_inequality output reads
/// back. The result is canonical.
EntropicInequality parse_inequality(const std::string& text, const MarginalScenario& scenario);
std::string format_inequality(const EntropicInequality& ineq, const MarginalScenario& scenario,
                              const char* sense = "<= 0");

/// Elemental Shannon inequalities over all 2^n - 1 nonempty subsets,
/// monotonicity first, then submodularity ordered by (i, j, S).
LinearSystem shannon_cone(const std::vector<std::string>& observables);
LinearSystem shannon_cone(const MarginalScenario& scenario);

/// H(S u T) - H(S) - H(T) = 0 for every S' in S, T' in T (nonempty),
/// deduplicated over all independence pairs.
std::vector<LinearExpr> independence_equations(const MarginalScenario& scenario);

struct ConeProjection {
  std::vector<ObsSet> coordinates;              // the scenario's contexts
  std::vector<EntropicInequality> equations;    // = 0; reduced echelon form
  std::vector<EntropicInequality> inequalities; // <= 0; sorted, reduced modulo equations
  std::vector<ProjectionProgress> progress;
};

/// Projects the Shannon cone (plus independence equations) onto the
/// context coordinates. Facets are reduced modulo the surviving equations
/// (each equation eliminates its largest coordinate) and sorted.
ConeProjection project(const MarginalScenario& scenario, const ProjectionOptions& options = {});

/// Rewrites `ineq` so that it does not use any pivot coordinate of the
/// (echelon-form) equations, then canonicalizes.
EntropicInequality reduce_modulo(const EntropicInequality& ineq, const std::vector<EntropicInequality>& equations);

struct InequalityClass {
  EntropicInequality representative;      // minimal element of the orbit
  std::vector<EntropicInequality> orbit;  // sorted, deduplicated
};

/// Orbits of the input under the group. Each image is re-reduced modulo
/// `equations` when given. Classes are ordered by representative.
std::vector<InequalityClass> classify(const std::vector<EntropicInequality>& inequalities, const SymmetryGroup& group,
                                      const std::vector<EntropicInequality>& equations = {});

/// Elemental inequalities of every maximal context plus the independence
/// equations whose terms are all contexts.
LinearSystem marginal_shannon_system(const MarginalScenario& scenario);

/// True when the inequality follows from marginal_shannon_system alone,
/// i.e. holds for every marginal model.
bool is_trivial(const EntropicInequality& ineq, const MarginalScenario& scenario);

/// sum coeffs[S] * H(S). Throws std::out_of_range on a missing coordinate.
double evaluate(const EntropicInequality& ineq, const EntropyVector& h);

}  // namespace entropic
