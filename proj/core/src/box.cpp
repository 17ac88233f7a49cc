#include "entropic/box.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "entropic/simplex.hpp"

namespace entropic {

MarginalModel::MarginalModel(MarginalScenario scenario) : scenario_(std::move(scenario)) {}

std::size_t MarginalModel::table_size(ObsSet context) const {
  std::size_t n = 1;
  for (std::size_t m : scenario_.members(context)) n *= static_cast<std::size_t>(scenario_.cardinality(m));
  return n;
}

std::size_t MarginalModel::encode(ObsSet context, const std::vector<int>& outcomes) const {
  auto mem = scenario_.members(context);
  if (mem.size() != outcomes.size()) throw std::invalid_argument("outcome tuple length mismatch");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < mem.size(); ++k) {
    const int c = scenario_.cardinality(mem[k]);
    if (outcomes[k] < 0 || outcomes[k] >= c) throw std::out_of_range("outcome index out of range");
    idx = idx * static_cast<std::size_t>(c) + static_cast<std::size_t>(outcomes[k]);
  }
  return idx;
}

std::vector<int> MarginalModel::decode(ObsSet context, std::size_t index) const {
  auto mem = scenario_.members(context);
  std::vector<int> out(mem.size());
  for (std::size_t k = mem.size(); k-- > 0;) {
    const auto c = static_cast<std::size_t>(scenario_.cardinality(mem[k]));
    out[k] = static_cast<int>(index % c);
    index /= c;
  }
  return out;
}

void MarginalModel::set_table(ObsSet maximal, std::vector<double> probs) {
  if (std::find(scenario_.maximal_contexts().begin(), scenario_.maximal_contexts().end(), maximal) ==
      scenario_.maximal_contexts().end())
    throw std::invalid_argument("not a maximal context: " + scenario_.subset_name(maximal));
  if (probs.size() != table_size(maximal)) throw std::invalid_argument("table size mismatch");
  tables_[maximal] = std::move(probs);
  exact_.erase(maximal);
}

void MarginalModel::set_table(ObsSet maximal, std::vector<Rational> probs) {
  std::vector<double> d(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) d[i] = probs[i].get_d();
  set_table(maximal, std::move(d));
  exact_[maximal] = std::move(probs);
}

bool MarginalModel::is_exact() const {
  for (ObsSet m : scenario_.maximal_contexts())
    if (!exact_.count(m)) return false;
  return true;
}

const std::vector<double>& MarginalModel::table(ObsSet maximal) const {
  auto it = tables_.find(maximal);
  if (it == tables_.end()) throw std::out_of_range("missing table for " + scenario_.subset_name(maximal));
  return it->second;
}

const std::vector<Rational>& MarginalModel::exact_table(ObsSet maximal) const {
  auto it = exact_.find(maximal);
  if (it == exact_.end()) throw std::out_of_range("no exact table for " + scenario_.subset_name(maximal));
  return it->second;
}

ObsSet MarginalModel::host(ObsSet subset) const {
  for (ObsSet m : scenario_.maximal_contexts())
    if ((subset & m) == subset) return m;
  throw std::invalid_argument("not a context: " + scenario_.subset_name(subset));
}

std::vector<std::size_t> MarginalModel::projection_map(ObsSet from, ObsSet to) const {
  const std::size_t n = table_size(from);
  auto from_mem = scenario_.members(from);
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < from_mem.size(); ++k)
    if (to & (ObsSet{1} << from_mem[k])) keep.push_back(k);
  std::vector<std::size_t> out(n);
  std::vector<int> sub(keep.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto o = decode(from, i);
    for (std::size_t k = 0; k < keep.size(); ++k) sub[k] = o[keep[k]];
    out[i] = encode(to, sub);
  }
  return out;
}

std::vector<double> MarginalModel::marginal(ObsSet subset) const {
  ObsSet m = host(subset);
  const auto& t = table(m);
  if (m == subset) return t;
  std::vector<double> out(table_size(subset), 0.0);
  auto map = projection_map(m, subset);
  for (std::size_t i = 0; i < t.size(); ++i) out[map[i]] += t[i];
  return out;
}

std::vector<Rational> MarginalModel::exact_marginal(ObsSet subset) const {
  ObsSet m = host(subset);
  const auto& t = exact_table(m);
  if (m == subset) return t;
  std::vector<Rational> out(table_size(subset), Rational(0));
  auto map = projection_map(m, subset);
  for (std::size_t i = 0; i < t.size(); ++i) out[map[i]] += t[i];
  return out;
}

double MarginalModel::prob(ObsSet context, const std::vector<int>& outcomes) const {
  return marginal(context)[encode(context, outcomes)];
}

MarginalModel tabulate(const MarginalScenario& scenario,
                       const std::function<Rational(ObsSet, const std::vector<int>&)>& f) {
  MarginalModel box(scenario);
  for (ObsSet m : scenario.maximal_contexts()) {
    std::vector<Rational> t(box.table_size(m));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = f(m, box.decode(m, i));
    box.set_table(m, std::move(t));
  }
  return box;
}

MarginalModel tabulate_real(const MarginalScenario& scenario,
                            const std::function<double(ObsSet, const std::vector<int>&)>& f) {
  MarginalModel box(scenario);
  for (ObsSet m : scenario.maximal_contexts()) {
    std::vector<double> t(box.table_size(m));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = f(m, box.decode(m, i));
    box.set_table(m, std::move(t));
  }
  return box;
}

namespace {

// (x, y) settings of a bipartite context on bell(2, m, d).
std::pair<int, int> settings_of(ObsSet ctx, int m) {
  int x = -1, y = -1;
  for (int i = 0; i < 2 * m; ++i) {
    if (!(ctx & (ObsSet{1} << i))) continue;
    if (i < m) x = i;
    else y = i - m;
  }
  return {x, y};
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

int sgn(int parity) { return parity % 2 == 0 ? 1 : -1; }

}  // namespace

MarginalModel bipartite(int settings, int outcomes, const std::function<Rational(int, int, int, int)>& p) {
  return tabulate(bell(2, settings, outcomes), [&](ObsSet ctx, const std::vector<int>& o) {
    auto [x, y] = settings_of(ctx, settings);
    return p(o[0], o[1], x, y);
  });
}

MarginalModel bipartite_real(int settings, int outcomes, const std::function<double(int, int, int, int)>& p) {
  return tabulate_real(bell(2, settings, outcomes), [&](ObsSet ctx, const std::vector<int>& o) {
    auto [x, y] = settings_of(ctx, settings);
    return p(o[0], o[1], x, y);
  });
}

double bipartite_prob(const MarginalModel& box, int a, int b, int x, int y) {
  const int m = static_cast<int>(box.scenario().size()) / 2;
  const ObsSet ctx = (ObsSet{1} << x) | (ObsSet{1} << (m + y));
  return box.prob(ctx, {a, b});
}

std::vector<std::string> validation_errors(const MarginalModel& box, double tol) {
  std::vector<std::string> errs;
  const auto& sc = box.scenario();
  for (ObsSet m : sc.maximal_contexts()) {
    if (!box.has_table(m)) {
      errs.push_back("missing table for context " + sc.subset_name(m));
      continue;
    }
    const auto& t = box.table(m);
    double sum = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!std::isfinite(t[i]) || t[i] < -tol) {
        std::ostringstream os;
        os << "negative or non-finite probability " << t[i] << " in context " << sc.subset_name(m);
        errs.push_back(os.str());
      }
      sum += t[i];
    }
    if (std::abs(sum - 1.0) > std::max(tol, 1e-12)) {
      std::ostringstream os;
      os << "context " << sc.subset_name(m) << " sums to " << sum;
      errs.push_back(os.str());
    }
  }
  if (!errs.empty()) return errs;
  const bool exact = box.is_exact();
  if (exact) {
    for (ObsSet m : sc.maximal_contexts()) {
      Rational s = 0;
      for (const auto& v : box.exact_table(m)) {
        if (v < 0) errs.push_back("negative exact probability in context " + sc.subset_name(m));
        s += v;
      }
      if (s != 1) errs.push_back("context " + sc.subset_name(m) + " does not sum to exactly 1");
    }
  }
  // Sheaf condition on every pairwise intersection.
  const auto& mx = sc.maximal_contexts();
  for (std::size_t i = 0; i < mx.size(); ++i) {
    for (std::size_t j = i + 1; j < mx.size(); ++j) {
      const ObsSet inter = mx[i] & mx[j];
      if (!inter) continue;
      auto project = [&](ObsSet from) {
        std::vector<double> out(box.table_size(inter), 0.0);
        const auto& t = box.table(from);
        for (std::size_t k = 0; k < t.size(); ++k) {
          auto o = box.decode(from, k);
          std::vector<int> sub;
          auto mem = sc.members(from);
          for (std::size_t q = 0; q < mem.size(); ++q)
            if (inter & (ObsSet{1} << mem[q])) sub.push_back(o[q]);
          out[box.encode(inter, sub)] += t[k];
        }
        return out;
      };
      auto pi = project(mx[i]), pj = project(mx[j]);
      double dev = 0;
      for (std::size_t k = 0; k < pi.size(); ++k) dev = std::max(dev, std::abs(pi[k] - pj[k]));
      bool bad = dev > tol;
      if (exact && !bad) {
        auto exact_project = [&](ObsSet from) {
          std::vector<Rational> out(box.table_size(inter), Rational(0));
          const auto& t = box.exact_table(from);
          auto mem = sc.members(from);
          for (std::size_t k = 0; k < t.size(); ++k) {
            auto o = box.decode(from, k);
            std::vector<int> sub;
            for (std::size_t q = 0; q < mem.size(); ++q)
              if (inter & (ObsSet{1} << mem[q])) sub.push_back(o[q]);
            out[box.encode(inter, sub)] += t[k];
          }
          return out;
        };
        bad = exact_project(mx[i]) != exact_project(mx[j]);
      }
      if (bad) {
        std::ostringstream os;
        os << "contexts " << sc.subset_name(mx[i]) << " and " << sc.subset_name(mx[j])
           << " disagree on " << sc.subset_name(inter) << " (max deviation " << dev << ")";
        errs.push_back(os.str());
      }
    }
  }
  return errs;
}

bool is_valid(const MarginalModel& box, double tol) { return validation_errors(box, tol).empty(); }

MarginalModel mix(const std::vector<std::pair<Rational, MarginalModel>>& parts) {
  if (parts.empty()) throw std::invalid_argument("empty mixture");
  const auto& sc = parts.front().second.scenario();
  MarginalModel out(sc);
  bool exact = std::all_of(parts.begin(), parts.end(), [](const auto& p) { return p.second.is_exact(); });
  for (ObsSet m : sc.maximal_contexts()) {
    if (exact) {
      std::vector<Rational> t(out.table_size(m), Rational(0));
      for (const auto& [w, b] : parts) {
        const auto& bt = b.exact_table(m);
        for (std::size_t i = 0; i < t.size(); ++i) t[i] += w * bt[i];
      }
      out.set_table(m, std::move(t));
    } else {
      std::vector<double> t(out.table_size(m), 0.0);
      for (const auto& [w, b] : parts) {
        const auto& bt = b.table(m);
        for (std::size_t i = 0; i < t.size(); ++i) t[i] += w.get_d() * bt[i];
      }
      out.set_table(m, std::move(t));
    }
  }
  return out;
}

MarginalModel pr_box() {
  return bipartite(2, 2, [](int a, int b, int x, int y) { return make_rational(1 + sgn(a ^ b ^ (x & y)), 4); });
}

MarginalModel isotropic_box(const Rational& c) {
  require(c >= 0 && c <= 1, "isotropic parameter C must lie in [0,1]");
  return bipartite(2, 2, [&](int a, int b, int x, int y) {
    Rational v = 1 + c * sgn(a ^ b ^ (x & y));
    return Rational(v / 4);
  });
}

MarginalModel classical_box() {
  return bipartite(2, 2, [](int a, int b, int, int) { return make_rational(1 + sgn(a ^ b), 4); });
}

MarginalModel white_noise_box() {
  return bipartite(2, 2, [](int, int, int, int) { return Rational(1, 4); });
}

MarginalModel pmax_box() { return mix({{Rational(1, 2), pr_box()}, {Rational(1, 2), classical_box()}}); }

MarginalModel pf_box() {
  return bipartite(2, 2, [](int a, int b, int x, int y) { return make_rational(2 + sgn(a ^ b ^ (x & y)), 8); });
}

MarginalModel triangle_box(const Rational& gamma, const Rational& xi) {
  require(gamma >= 0 && xi >= 0 && gamma + xi <= 1, "triangle family needs gamma, xi >= 0 and gamma + xi <= 1");
  return mix({{gamma, pr_box()}, {xi, classical_box()}, {1 - gamma - xi, pf_box()}});
}

MarginalModel pr_box_d(int d) {
  require(d >= 2, "outcome count d must be >= 2");
  return bipartite(2, d, [d](int a, int b, int x, int y) {
    return ((a - b - x * y) % d + d) % d == 0 ? Rational(1, d) : Rational(0);
  });
}

MarginalModel classical_box_d(int d) {
  require(d >= 2, "outcome count d must be >= 2");
  return bipartite(2, d, [d](int a, int b, int, int) { return a == b ? Rational(1, d) : Rational(0); });
}

MarginalModel dfamily_box(const Rational& xi, int d) {
  require(xi >= 0 && xi <= 1, "family parameter xi must lie in [0,1]");
  return mix({{xi, pr_box_d(d)}, {1 - xi, classical_box_d(d)}});
}

MarginalModel nb_box(const Rational& xi, const Rational& gamma) {
  require(xi >= 0 && gamma >= 0 && xi + gamma <= 1, "NB family needs xi, gamma >= 0 and xi + gamma <= 1");
  const MarginalScenario sc = bilocality();
  return tabulate(sc, [&](ObsSet ctx, const std::vector<int>& o) {
    const int x = (ctx & 0b00010) ? 1 : 0;
    const int z = (ctx & 0b10000) ? 1 : 0;
    const int a = o[0], b = o[1], c = o[2];
    Rational v = 1 + xi * sgn(a ^ b ^ c ^ (x & z)) + (1 - xi - gamma) * sgn(a ^ b ^ c);
    return Rational(v / 8);
  });
}

MarginalModel named_box(const std::string& spec) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::tolower(ch); });
  std::vector<std::string> args;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) args.push_back(tok);
  }
  auto want = [&](std::size_t n) {
    if (args.size() != n)
      throw std::invalid_argument("box '" + name + "' takes " + std::to_string(n) + " parameter(s)");
  };
  auto rat = [&](std::size_t i) { return parse_rational(args.at(i)); };
  auto integer = [&](std::size_t i) {
    Rational q = rat(i);
    if (q.get_den() != 1) throw std::invalid_argument("expected an integer parameter");
    return static_cast<int>(q.get_num().get_si());
  };
  if (name == "pr") return want(0), pr_box();
  if (name == "iso") return want(1), isotropic_box(rat(0));
  if (name == "classical" || name == "pc") return want(0), classical_box();
  if (name == "white" || name == "pw") return want(0), white_noise_box();
  if (name == "pmax") return want(0), pmax_box();
  if (name == "pf") return want(0), pf_box();
  if (name == "triangle") return want(2), triangle_box(rat(0), rat(1));
  if (name == "prd") return want(1), pr_box_d(integer(0));
  if (name == "classical_d") return want(1), classical_box_d(integer(0));
  if (name == "dfamily") return want(2), dfamily_box(rat(0), integer(1));
  if (name == "nb") return want(2), nb_box(rat(0), rat(1));
  throw std::invalid_argument("unknown box: " + spec);
}

double shannon_entropy(const std::vector<double>& p) {
  double h = 0;
  for (double v : p)
    if (v > 1e-15) h -= v * std::log2(v);
  return h;
}

double binary_entropy(double p) { return shannon_entropy({p, 1 - p}); }

EntropyVector entropy_vector(const MarginalModel& box) {
  EntropyVector h;
  for (ObsSet s : box.scenario().contexts()) h[s] = shannon_entropy(box.marginal(s));
  return h;
}

double correlator(const MarginalModel& box, std::size_t x, std::size_t y) {
  const auto& sc = box.scenario();
  if (sc.cardinality(x) != 2 || sc.cardinality(y) != 2) throw std::invalid_argument("correlators need binary observables");
  const ObsSet ctx = (ObsSet{1} << x) | (ObsSet{1} << y);
  auto p = box.marginal(ctx);
  double v = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto o = box.decode(ctx, i);
    v += sgn(o[0] + o[1]) * p[i];
  }
  return v;
}

namespace {

void require_chsh_shape(const MarginalScenario& sc, bool binary) {
  const std::vector<std::string> names{"A0", "A1", "B0", "B1"};
  if (sc.observables() != names || sc.maximal_contexts().size() != 4)
    throw std::invalid_argument("expected a two-party, two-setting box (A0,A1,B0,B1)");
  if (binary)
    for (int c : sc.cardinalities())
      if (c != 2) throw std::invalid_argument("expected two-outcome observables");
}

}  // namespace

double chsh(const MarginalModel& box) {
  require_chsh_shape(box.scenario(), true);
  return correlator(box, 0, 2) + correlator(box, 0, 3) + correlator(box, 1, 2) - correlator(box, 1, 3);
}

EntropicInequality chsh_entropic_inequality(const MarginalScenario& sc) {
  require_chsh_shape(sc, false);
  return parse_inequality("A0 + B0 - A0,B0 - A0,B1 - A1,B0 + A1,B1", sc);
}

double chsh_entropic(const MarginalModel& box) {
  return evaluate(chsh_entropic_inequality(box.scenario()), entropy_vector(box));
}

EntropicInequality ncycle_inequality(const MarginalScenario& sc, int i) {
  auto order = cycle_order(sc);
  const int n = static_cast<int>(order.size());
  if (i < 1 || i > n) throw std::out_of_range("cycle index out of range");
  auto X = [&](int j) { return ObsSet{1} << order[static_cast<std::size_t>((j - 1 + n) % n)]; };
  EntropicInequality e;
  e.coeffs[X(i) | X(i + 1)] += 1;
  for (int j = 1; j <= n; ++j) {
    if (j != i && j != i % n + 1) e.coeffs[X(j)] += 1;
    if (j != i) e.coeffs[X(j) | X(j + 1)] -= 1;
  }
  return e;
}

double ncycle_entropic(const MarginalModel& box, int i) {
  return evaluate(ncycle_inequality(box.scenario(), i), entropy_vector(box));
}

double klyachko_k5(const MarginalModel& box) {
  auto order = cycle_order(box.scenario());
  if (order.size() != 5) throw std::invalid_argument("expected a 5-cycle box");
  double v = 0;
  for (std::size_t j = 0; j < 5; ++j) v += correlator(box, order[j], order[(j + 1) % 5]);
  return v;
}

EntropicInequality bilocal_row_inequality(int k) {
  static const char* rows[] = {
      "-A0 - B + A0,B",
      "A0,B - A0,B,C0",
      "A0 + C0 - A0,B,C0",
      "B - A0,B - B,C0 + A0,B,C0",
      "A1 + C0 + A0,B - A1,B - A0,B,C0",
      "A1 + C1 + A0,B - A1,B + B,C0 - B,C1 - A0,B,C0",
      "A0 + C0 - A0,B,C1 - A1,B,C0 + A1,B,C1",
      "A0 + C0 - A0,B + A1,B - A0,B,C0 + A0,B,C1 - A1,B,C1",
      "A0 + C0 - A0,B + A1,B - B,C0 + B,C1 + A0,B,C0 - A0,B,C1 - A1,B,C0",
      "A0,B + B,C0 - A0,B,C0 - A0,B,C1 - A1,B,C0 + A1,B,C1",
  };
  if (k < 1 || k > 10) throw std::out_of_range("bilocality row must be 1..10");
  return parse_inequality(rows[k - 1], bilocality());
}

double bilocal_row(const MarginalModel& box, int k) {
  const auto& sc = box.scenario();
  if (sc.observables() != bilocality().observables()) throw std::invalid_argument("expected a bilocality-shaped box");
  return evaluate(bilocal_row_inequality(k), entropy_vector(box));
}

double bilocal_marginal_residual(const MarginalModel& box) {
  const auto& sc = box.scenario();
  if (sc.observables() != bilocality().observables()) throw std::invalid_argument("expected a bilocality-shaped box");
  double worst = 0;
  for (int x = 0; x < 2; ++x) {
    for (int z = 0; z < 2; ++z) {
      const ObsSet a = ObsSet{1} << x, c = ObsSet{1} << (3 + z);
      auto pac = box.marginal(a | c);
      auto pa = box.marginal(a), pc = box.marginal(c);
      for (std::size_t i = 0; i < pac.size(); ++i) {
        auto o = box.decode(a | c, i);
        worst = std::max(worst, std::abs(pac[i] - pa[static_cast<std::size_t>(o[0])] * pc[static_cast<std::size_t>(o[1])]));
      }
    }
  }
  return worst;
}

bool check_bilocal_marginal(const MarginalModel& box, double tol) { return bilocal_marginal_residual(box) <= tol; }

namespace {

MarginalModel detector_transform(const MarginalModel& box, double eta, bool two) {
  if (!(eta >= 0 && eta <= 1)) throw std::invalid_argument("efficiency eta must lie in [0,1]");
  const auto& sc = box.scenario();
  for (ObsSet m : sc.maximal_contexts())
    if (subset_size(m) != 2) throw std::invalid_argument("detector models need pairwise contexts");
  std::vector<int> cards = sc.cardinalities();
  for (int& c : cards) ++c;
  MarginalScenario out_sc = sc.with_cardinalities(cards);
  MarginalModel out(out_sc);
  for (ObsSet m : sc.maximal_contexts()) {
    auto mem = sc.members(m);
    const int ni = sc.cardinality(mem[0]), nj = sc.cardinality(mem[1]);
    const auto& t = box.table(m);
    auto pi = box.marginal(ObsSet{1} << mem[0]);
    auto pj = box.marginal(ObsSet{1} << mem[1]);
    std::vector<double> nt(out.table_size(m), 0.0);
    for (int a = 0; a <= ni; ++a) {
      for (int b = 0; b <= nj; ++b) {
        const bool ca = a < ni, cb = b < nj;
        double v = 0;
        if (!two) {
          if (ca && cb) v = eta * t[box.encode(m, {a, b})];
          else if (!ca && !cb) v = 1 - eta;
        } else {
          if (ca && cb) v = eta * eta * t[box.encode(m, {a, b})];
          else if (ca) v = eta * (1 - eta) * pi[static_cast<std::size_t>(a)];
          else if (cb) v = (1 - eta) * eta * pj[static_cast<std::size_t>(b)];
          else v = (1 - eta) * (1 - eta);
        }
        nt[out.encode(m, {a, b})] = v;
      }
    }
    out.set_table(m, std::move(nt));
  }
  return out;
}

}  // namespace

MarginalModel single_detector(const MarginalModel& box, double eta) { return detector_transform(box, eta, false); }
MarginalModel two_detector(const MarginalModel& box, double eta) { return detector_transform(box, eta, true); }

double single_detector_entropy(double h, double eta) { return eta * h + binary_entropy(eta); }
double two_detector_single_entropy(double h, double eta) { return eta * h + binary_entropy(eta); }
double two_detector_pair_entropy(double h_pair, double h_first, double h_second, double eta) {
  return eta * eta * h_pair + eta * (1 - eta) * (h_first + h_second) + 2 * binary_entropy(eta);
}

NoncontextualityResult is_noncontextual(const MarginalModel& box, double tol) {
  const auto& sc = box.scenario();
  double total = 1;
  for (int c : sc.cardinalities()) total *= c;
  if (total > 1e6) throw std::invalid_argument("too many global assignments for the noncontextuality LP");
  const auto g = static_cast<std::size_t>(total);
  const ObsSet all = sc.full_set();

  // Global assignment index in the same mixed radix as a context table
  // over all observables.
  MarginalScenario global_sc(sc.observables(), {all}, sc.cardinalities());
  MarginalModel global(global_sc);

  struct Block {
    ObsSet ctx;
    std::vector<std::size_t> map;  // global index -> context index
  };
  std::vector<Block> blocks;
  std::size_t rows = 0;
  for (ObsSet m : sc.maximal_contexts()) {
    Block b{m, std::vector<std::size_t>(g)};
    auto mem = sc.members(m);
    for (std::size_t k = 0; k < g; ++k) {
      auto o = global.decode(all, k);
      std::vector<int> sub;
      for (std::size_t q : mem) sub.push_back(o[q]);
      b.map[k] = box.encode(m, sub);
    }
    rows += box.table_size(m);
    blocks.push_back(std::move(b));
  }

  const bool exact = box.is_exact();
  // Columns: weights (g), then s+ and s- per row. Rows: marginal matching.
  StandardFormLP lp(rows, g + 2 * rows);
  std::size_t r = 0;
  for (const auto& b : blocks) {
    const std::size_t sz = box.table_size(b.ctx);
    for (std::size_t k = 0; k < g; ++k) lp.at(r + b.map[k], k) = 1;
    for (std::size_t i = 0; i < sz; ++i) {
      lp.at(r + i, g + r + i) = -1;
      lp.at(r + i, g + rows + r + i) = 1;
      lp.b[r + i] = exact ? box.exact_table(b.ctx)[i] : round_to_dyadic(box.table(b.ctx)[i]);
      lp.c[g + r + i] = 1;
      lp.c[g + rows + r + i] = 1;
    }
    r += sz;
  }
  auto sol = solve_standard_form(lp);
  NoncontextualityResult res;
  if (sol.status != LPStatus::optimal) throw std::runtime_error("noncontextuality LP did not reach an optimum");
  res.distance = sol.value.get_d();
  res.noncontextual = exact ? sol.value == 0 : res.distance <= tol;
  if (res.noncontextual) {
    HiddenVariableCertificate cert;
    cert.joint.resize(g);
    for (std::size_t k = 0; k < g; ++k) cert.joint[k] = sol.x[k].get_d();
    res.certificate = std::move(cert);
  }
  return res;
}

MarginalModel box_from_joint(const MarginalScenario& sc, const std::vector<double>& joint) {
  const ObsSet all = sc.full_set();
  MarginalModel global(MarginalScenario(sc.observables(), {all}, sc.cardinalities()));
  if (joint.size() != global.table_size(all)) throw std::invalid_argument("joint distribution size mismatch");
  MarginalModel out(sc);
  for (ObsSet m : sc.maximal_contexts()) {
    std::vector<double> t(out.table_size(m), 0.0);
    auto mem = sc.members(m);
    for (std::size_t k = 0; k < joint.size(); ++k) {
      auto o = global.decode(all, k);
      std::vector<int> sub;
      for (std::size_t q : mem) sub.push_back(o[q]);
      t[out.encode(m, sub)] += joint[k];
    }
    out.set_table(m, std::move(t));
  }
  return out;
}

MarginalModel sample_noncontextual(const MarginalScenario& sc, std::mt19937_64& rng) {
  std::size_t g = 1;
  for (int c : sc.cardinalities()) g *= static_cast<std::size_t>(c);
  std::exponential_distribution<double> ex(1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // Sparse-ish weights so that near-deterministic models are also drawn.
  const double sharpness = 1.0 + 4.0 * u(rng);
  std::vector<double> w(g);
  double s = 0;
  for (auto& v : w) {
    v = std::pow(ex(rng), sharpness);
    s += v;
  }
  for (auto& v : w) v /= s;
  return box_from_joint(sc, w);
}

MarginalModel sample_nosignaling_chsh(std::mt19937_64& rng) {
  std::vector<MarginalModel> extremal;
  for (int a0 = 0; a0 < 2; ++a0)
    for (int a1 = 0; a1 < 2; ++a1)
      for (int b0 = 0; b0 < 2; ++b0)
        for (int b1 = 0; b1 < 2; ++b1)
          extremal.push_back(bipartite(2, 2, [=](int a, int b, int x, int y) {
            return Rational((a == (x ? a1 : a0)) && (b == (y ? b1 : b0)) ? 1 : 0);
          }));
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be)
      for (int ga = 0; ga < 2; ++ga)
        extremal.push_back(bipartite(2, 2, [=](int a, int b, int x, int y) {
          return Rational((a ^ b) == ((x & y) ^ (al & x) ^ (be & y) ^ ga) ? 1 : 0, 2);
        }));
  std::exponential_distribution<double> ex(1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double sharpness = 1.0 + 6.0 * u(rng);
  std::vector<double> w(extremal.size());
  double s = 0;
  for (auto& v : w) {
    v = std::pow(ex(rng), sharpness);
    s += v;
  }
  MarginalModel out(extremal.front().scenario());
  for (ObsSet m : out.scenario().maximal_contexts()) {
    std::vector<double> t(4, 0.0);
    for (std::size_t k = 0; k < extremal.size(); ++k) {
      const auto& et = extremal[k].table(m);
      for (std::size_t i = 0; i < 4; ++i) t[i] += w[k] / s * et[i];
    }
    out.set_table(m, std::move(t));
  }
  return out;
}

MarginalModel relabel_outcomes(const MarginalModel& box, std::size_t observable, const std::vector<int>& perm) {
  const auto& sc = box.scenario();
  if (perm.size() != static_cast<std::size_t>(sc.cardinality(observable))) throw std::invalid_argument("bad relabeling");
  MarginalModel out(sc);
  for (ObsSet m : sc.maximal_contexts()) {
    auto mem = sc.members(m);
    auto pos = std::find(mem.begin(), mem.end(), observable);
    const bool exact = box.is_exact();
    std::vector<double> t(box.table_size(m));
    std::vector<Rational> et(exact ? box.table_size(m) : 0);
    for (std::size_t i = 0; i < t.size(); ++i) {
      auto o = box.decode(m, i);
      if (pos != mem.end()) {
        auto q = static_cast<std::size_t>(pos - mem.begin());
        o[q] = perm[static_cast<std::size_t>(o[q])];
      }
      const std::size_t j = box.encode(m, o);
      t[j] = box.table(m)[i];
      if (exact) et[j] = box.exact_table(m)[i];
    }
    if (exact) out.set_table(m, std::move(et));
    else out.set_table(m, std::move(t));
  }
  return out;
}

}  // namespace entropic
