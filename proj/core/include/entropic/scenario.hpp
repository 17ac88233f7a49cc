#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace entropic {

/// Subset of a scenario's observables, bit i = observable i.
using ObsSet = std::uint32_t;

inline int subset_size(ObsSet s) { return __builtin_popcount(s); }

/// Fixed order on subsets used for coordinates, facet sorting and orbit
/// representatives: by size, then lexicographically by member indices.
bool subset_less(ObsSet a, ObsSet b);

struct SubsetLess {
  bool operator()(ObsSet a, ObsSet b) const { return subset_less(a, b); }
};

/// Every nonempty subset of {0..n-1}, in subset_less order.
std::vector<ObsSet> all_subsets(std::size_t n);

/// A pair of disjoint observable sets asserted mutually independent.
struct Independence {
  ObsSet first = 0;
  ObsSet second = 0;
  friend bool operator==(const Independence&, const Independence&) = default;
};

/// Observables, a down-closed family of jointly measurable subsets
/// (contexts), outcome counts, and independence assumptions.
class MarginalScenario {
 public:
  MarginalScenario() = default;
  MarginalScenario(std::vector<std::string> observables, const std::vector<ObsSet>& generating_contexts,
                   std::vector<int> cardinalities = {}, std::vector<Independence> independences = {});

  /// Name-based construction (the JSON shape).
  static MarginalScenario from_names(std::vector<std::string> observables,
                                     const std::vector<std::vector<std::string>>& maximal_contexts,
                                     const std::map<std::string, int>& cardinalities = {},
                                     const std::vector<std::pair<std::vector<std::string>,
                                                                 std::vector<std::string>>>& independences = {});

  const std::vector<std::string>& observables() const { return observables_; }
  std::size_t size() const { return observables_.size(); }
  ObsSet full_set() const { return size() == 32 ? ~ObsSet{0} : (ObsSet{1} << size()) - 1; }

  /// Inclusion-maximal contexts, in subset_less order.
  const std::vector<ObsSet>& maximal_contexts() const { return maximal_; }
  /// All nonempty contexts (the down-closure), in subset_less order.
  const std::vector<ObsSet>& contexts() const { return contexts_; }
  bool is_context(ObsSet s) const;

  int cardinality(std::size_t observable) const { return cardinalities_.at(observable); }
  const std::vector<int>& cardinalities() const { return cardinalities_; }
  const std::vector<Independence>& independences() const { return independences_; }

  std::size_t index_of(std::string_view name) const;
  /// "A0,B0" (members in observable order); "" for the empty set.
  std::string subset_name(ObsSet s) const;
  /// Inverse of subset_name; also accepts whitespace around names.
  ObsSet parse_subset(std::string_view text) const;
  std::vector<std::size_t> members(ObsSet s) const;

  MarginalScenario with_cardinalities(std::vector<int> cards) const;

  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }

  friend bool operator==(const MarginalScenario& a, const MarginalScenario& b) {
    return a.observables_ == b.observables_ && a.maximal_ == b.maximal_ &&
           a.cardinalities_ == b.cardinalities_ && a.independences_ == b.independences_;
  }

 private:
  std::vector<std::string> observables_;
  std::vector<ObsSet> maximal_;
  std::vector<ObsSet> contexts_;
  std::vector<int> cardinalities_;
  std::vector<Independence> independences_;
  std::string label_;
};

/// n-cycle: X1..Xn with maximal contexts {Xi, Xi+1} (cyclically). n >= 3.
MarginalScenario ncycle(int n, int outcomes = 2);

/// Bell scenario; observables A0..A(m-1), B0.., C0.. party-major. One
/// observable per party per maximal context.
MarginalScenario bell(int parties, int settings, int outcomes);

/// A0,A1,B,C0,C1 with maximal contexts {Ax,B,Cz} and ({A0,A1},{C0,C1})
/// independent. `b_outcomes` sets the cardinality of B.
MarginalScenario bilocality(int b_outcomes = 2);

/// Chained Bell scenario with k settings per party: A0..A(k-1), B0..B(k-1),
/// contexts {Ai,Bi}, {Bi,A(i+1)}, {B(k-1),A0}. k = 2 is the CHSH scenario.
MarginalScenario chained(int k, int outcomes = 2);

/// "ncycle:n", "chsh", "bell:parties,settings,outcomes", "bilocality",
/// "chained:k".
MarginalScenario named_scenario(const std::string& spec);

/// Observable order around the cycle when the maximal contexts form a
/// single cycle of pairs, starting at observable 0 and stepping to its
/// lower-indexed neighbour. Throws std::invalid_argument otherwise.
std::vector<std::size_t> cycle_order(const MarginalScenario& scenario);

/// Permutation of observables: image[i] is where observable i goes.
using Permutation = std::vector<std::size_t>;

ObsSet permute(const Permutation& p, ObsSet s);
Permutation compose(const Permutation& outer, const Permutation& inner);
Permutation inverse(const Permutation& p);

struct SymmetryGroup {
  std::vector<Permutation> elements;  // identity first, then lexicographic
  std::size_t order() const { return elements.size(); }
};

/// All observable permutations preserving contexts, outcome cardinalities
/// and the independence structure. Brute force over n! permutations.
SymmetryGroup symmetries(const MarginalScenario& scenario);

}  // namespace entropic
