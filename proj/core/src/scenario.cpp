#include "entropic/scenario.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace entropic {

bool subset_less(ObsSet a, ObsSet b) {
  int sa = subset_size(a), sb = subset_size(b);
  if (sa != sb) return sa < sb;
  // Same size: compare member lists lexicographically. The first differing
  // member decides, and the lowest differing bit marks it.
  ObsSet diff = a ^ b;
  if (diff == 0) return false;
  ObsSet low = diff & (~diff + 1);
  return (a & low) != 0;
}

std::vector<ObsSet> all_subsets(std::size_t n) {
  if (n >= 32) throw std::invalid_argument("too many observables");
  std::vector<ObsSet> out;
  for (ObsSet s = 1; s < (ObsSet{1} << n); ++s) out.push_back(s);
  std::sort(out.begin(), out.end(), subset_less);
  return out;
}

MarginalScenario::MarginalScenario(std::vector<std::string> observables,
                                   const std::vector<ObsSet>& generating_contexts, std::vector<int> cardinalities,
                                   std::vector<Independence> independences)
    : observables_(std::move(observables)),
      cardinalities_(std::move(cardinalities)),
      independences_(std::move(independences)) {
  const std::size_t n = observables_.size();
  if (n == 0 || n > 20) throw std::invalid_argument("scenario needs 1..20 observables");
  {
    std::set<std::string> names(observables_.begin(), observables_.end());
    if (names.size() != n) throw std::invalid_argument("duplicate observable name");
  }
  if (cardinalities_.empty()) cardinalities_.assign(n, 2);
  if (cardinalities_.size() != n) throw std::invalid_argument("cardinality list size mismatch");
  for (int c : cardinalities_)
    if (c < 2) throw std::invalid_argument("outcome cardinality must be >= 2");

  // Maximal elements of the generating family.
  std::set<ObsSet> gen;
  for (ObsSet s : generating_contexts) {
    if (s == 0) continue;
    if (s & ~full_set()) throw std::invalid_argument("context references an unknown observable");
    gen.insert(s);
  }
  for (ObsSet s : gen) {
    bool dominated = std::any_of(gen.begin(), gen.end(), [s](ObsSet t) { return t != s && (s & t) == s; });
    if (!dominated) maximal_.push_back(s);
  }
  std::sort(maximal_.begin(), maximal_.end(), subset_less);

  std::set<ObsSet> closure;
  for (ObsSet m : maximal_)
    for (ObsSet s = m; s; s = (s - 1) & m) closure.insert(s);
  contexts_.assign(closure.begin(), closure.end());
  std::sort(contexts_.begin(), contexts_.end(), subset_less);

  ObsSet covered = 0;
  for (ObsSet m : maximal_) covered |= m;
  if (covered != full_set()) throw std::invalid_argument("every observable must appear in some context");

  for (const auto& ind : independences_) {
    if (ind.first == 0 || ind.second == 0) throw std::invalid_argument("empty independence side");
    if (ind.first & ind.second) throw std::invalid_argument("independence pair must be disjoint");
    if ((ind.first | ind.second) & ~full_set()) throw std::invalid_argument("independence references unknown observable");
  }
}

MarginalScenario MarginalScenario::from_names(
    std::vector<std::string> observables, const std::vector<std::vector<std::string>>& maximal_contexts,
    const std::map<std::string, int>& cardinalities,
    const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& independences) {
  auto index = [&](const std::string& name) -> std::size_t {
    auto it = std::find(observables.begin(), observables.end(), name);
    if (it == observables.end()) throw std::invalid_argument("unknown observable: " + name);
    return static_cast<std::size_t>(it - observables.begin());
  };
  auto to_set = [&](const std::vector<std::string>& names) {
    ObsSet s = 0;
    for (const auto& nm : names) s |= ObsSet{1} << index(nm);
    return s;
  };
  std::vector<ObsSet> ctx;
  for (const auto& c : maximal_contexts) ctx.push_back(to_set(c));
  std::vector<int> cards(observables.size(), 2);
  for (const auto& [name, c] : cardinalities) cards[index(name)] = c;
  std::vector<Independence> inds;
  for (const auto& [a, b] : independences) inds.push_back({to_set(a), to_set(b)});
  return MarginalScenario(std::move(observables), ctx, std::move(cards), std::move(inds));
}

bool MarginalScenario::is_context(ObsSet s) const {
  if (s == 0) return true;
  return std::any_of(maximal_.begin(), maximal_.end(), [s](ObsSet m) { return (s & m) == s; });
}

std::size_t MarginalScenario::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < observables_.size(); ++i)
    if (observables_[i] == name) return i;
  throw std::invalid_argument("unknown observable: " + std::string(name));
}

std::string MarginalScenario::subset_name(ObsSet s) const {
  std::string out;
  for (std::size_t i = 0; i < observables_.size(); ++i) {
    if (!(s & (ObsSet{1} << i))) continue;
    if (!out.empty()) out += ',';
    out += observables_[i];
  }
  return out;
}

ObsSet MarginalScenario::parse_subset(std::string_view text) const {
  ObsSet s = 0;
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view tok = text.substr(0, comma);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (!tok.empty()) s |= ObsSet{1} << index_of(tok);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return s;
}

std::vector<std::size_t> MarginalScenario::members(ObsSet s) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < observables_.size(); ++i)
    if (s & (ObsSet{1} << i)) out.push_back(i);
  return out;
}

MarginalScenario MarginalScenario::with_cardinalities(std::vector<int> cards) const {
  MarginalScenario out(observables_, maximal_, std::move(cards), independences_);
  out.label_ = label_;
  return out;
}

MarginalScenario ncycle(int n, int outcomes) {
  if (n < 3) throw std::invalid_argument("n-cycle needs n >= 3");
  std::vector<std::string> names;
  std::vector<ObsSet> ctx;
  for (int i = 0; i < n; ++i) {
    names.push_back("X" + std::to_string(i + 1));
    ctx.push_back((ObsSet{1} << i) | (ObsSet{1} << ((i + 1) % n)));
  }
  MarginalScenario s(std::move(names), ctx, std::vector<int>(static_cast<std::size_t>(n), outcomes));
  s.set_label("ncycle:" + std::to_string(n));
  return s;
}

MarginalScenario bell(int parties, int settings, int outcomes) {
  if (parties < 1 || parties > 6) throw std::invalid_argument("bell scenario needs 1..6 parties");
  if (settings < 2 || outcomes < 2) throw std::invalid_argument("bell scenario needs >= 2 settings and outcomes");
  const auto m = static_cast<std::size_t>(settings);
  std::vector<std::string> names;
  for (int p = 0; p < parties; ++p)
    for (std::size_t x = 0; x < m; ++x) names.push_back(std::string(1, static_cast<char>('A' + p)) + std::to_string(x));
  // Every choice of one setting per party.
  std::vector<ObsSet> ctx{0};
  for (int p = 0; p < parties; ++p) {
    std::vector<ObsSet> next;
    for (ObsSet s : ctx)
      for (std::size_t x = 0; x < m; ++x) next.push_back(s | (ObsSet{1} << (static_cast<std::size_t>(p) * m + x)));
    ctx = std::move(next);
  }
  MarginalScenario s(std::move(names), ctx, std::vector<int>(static_cast<std::size_t>(parties) * m, outcomes));
  s.set_label("bell:" + std::to_string(parties) + "," + std::to_string(settings) + "," + std::to_string(outcomes));
  return s;
}

MarginalScenario bilocality(int b_outcomes) {
  // 0:A0 1:A1 2:B 3:C0 4:C1
  std::vector<ObsSet> ctx;
  for (ObsSet a : {0u, 1u})
    for (ObsSet c : {3u, 4u}) ctx.push_back((1u << a) | (1u << 2) | (1u << c));
  MarginalScenario s({"A0", "A1", "B", "C0", "C1"}, ctx, {2, 2, b_outcomes, 2, 2},
                     {Independence{0b00011, 0b11000}});
  s.set_label("bilocality");
  return s;
}

MarginalScenario chained(int k, int outcomes) {
  if (k < 2) throw std::invalid_argument("chained scenario needs k >= 2");
  const auto kk = static_cast<std::size_t>(k);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < kk; ++i) names.push_back("A" + std::to_string(i));
  for (std::size_t i = 0; i < kk; ++i) names.push_back("B" + std::to_string(i));
  auto A = [](std::size_t i) { return ObsSet{1} << i; };
  auto B = [kk](std::size_t i) { return ObsSet{1} << (kk + i); };
  std::vector<ObsSet> ctx;
  for (std::size_t i = 0; i < kk; ++i) {
    ctx.push_back(A(i) | B(i));
    ctx.push_back(B(i) | A((i + 1) % kk));
  }
  MarginalScenario s(std::move(names), ctx, std::vector<int>(2 * kk, outcomes));
  s.set_label("chained:" + std::to_string(k));
  return s;
}

std::vector<std::size_t> cycle_order(const MarginalScenario& scenario) {
  const std::size_t n = scenario.size();
  std::vector<std::vector<std::size_t>> nbr(n);
  for (ObsSet m : scenario.maximal_contexts()) {
    auto mem = scenario.members(m);
    if (mem.size() != 2) throw std::invalid_argument("not a cycle scenario: context of size != 2");
    nbr[mem[0]].push_back(mem[1]);
    nbr[mem[1]].push_back(mem[0]);
  }
  for (auto& v : nbr) {
    if (v.size() != 2) throw std::invalid_argument("not a cycle scenario: vertex degree != 2");
    std::sort(v.begin(), v.end());
  }
  std::vector<std::size_t> order{0};
  std::size_t prev = n, cur = 0;
  while (order.size() < n) {
    std::size_t next = nbr[cur][0] != prev ? nbr[cur][0] : nbr[cur][1];
    if (next == 0) throw std::invalid_argument("not a single cycle");
    order.push_back(next);
    prev = cur;
    cur = next;
  }
  if (std::find(nbr[cur].begin(), nbr[cur].end(), std::size_t{0}) == nbr[cur].end())
    throw std::invalid_argument("not a single cycle");
  return order;
}

ObsSet permute(const Permutation& p, ObsSet s) {
  ObsSet out = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (s & (ObsSet{1} << i)) out |= ObsSet{1} << p[i];
  return out;
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  Permutation out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
  return out;
}

Permutation inverse(const Permutation& p) {
  Permutation out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[p[i]] = i;
  return out;
}

SymmetryGroup symmetries(const MarginalScenario& scenario) {
  const std::size_t n = scenario.size();
  if (n > 10) throw std::invalid_argument("symmetry search limited to 10 observables");
  std::set<ObsSet> maximal(scenario.maximal_contexts().begin(), scenario.maximal_contexts().end());
  auto unordered = [](ObsSet a, ObsSet b) { return a < b ? std::pair{a, b} : std::pair{b, a}; };
  std::set<std::pair<ObsSet, ObsSet>> inds;
  for (const auto& ind : scenario.independences()) inds.insert(unordered(ind.first, ind.second));

  SymmetryGroup g;
  Permutation p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  do {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      if (scenario.cardinality(i) != scenario.cardinality(p[i])) ok = false;
    for (ObsSet m : maximal)
      if (ok && !maximal.count(permute(p, m))) ok = false;
    for (const auto& ind : scenario.independences()) {
      if (!ok) break;
      if (!inds.count(unordered(permute(p, ind.first), permute(p, ind.second)))) ok = false;
    }
    if (ok) g.elements.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return g;
}

MarginalScenario named_scenario(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::vector<int> args;
  if (colon != std::string::npos) {
    std::size_t pos = colon + 1;
    while (pos <= spec.size()) {
      const auto comma = std::min(spec.find(',', pos), spec.size());
      const std::string tok = spec.substr(pos, comma - pos);
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (tok.empty() || used != tok.size()) throw std::invalid_argument("bad scenario argument in: " + spec);
      args.push_back(v);
      pos = comma + 1;
    }
  }
  auto want = [&](std::size_t n) {
    if (args.size() != n) throw std::invalid_argument("wrong number of arguments for scenario: " + spec);
  };
  MarginalScenario sc;
  if (name == "ncycle") want(1), sc = ncycle(args[0]);
  else if (name == "chsh") want(0), sc = bell(2, 2, 2);
  else if (name == "bell") want(3), sc = bell(args[0], args[1], args[2]);
  else if (name == "bilocality") want(0), sc = bilocality();
  else if (name == "chained") want(1), sc = chained(args[0]);
  else throw std::invalid_argument("unknown scenario: " + spec);
  sc.set_label(spec);
  return sc;
}

}  // namespace entropic
