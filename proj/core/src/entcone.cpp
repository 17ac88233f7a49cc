#include "entropic/entcone.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

namespace entropic {

namespace {

std::string join_names(const std::vector<std::string>& names, ObsSet s) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!(s & (ObsSet{1} << i))) continue;
    if (!out.empty()) out += ',';
    out += names[i];
  }
  return out;
}

// Adds the elemental inequalities of the subsets of `ground` to `sys`,
// naming coordinates through `name`.
template <class Name>
void add_elemental(LinearSystem& sys, const std::vector<std::size_t>& ground, Name name) {
  const std::size_t n = ground.size();
  ObsSet full = 0;
  for (std::size_t g : ground) full |= ObsSet{1} << g;
  auto term = [&](LinearExpr& e, ObsSet s, int c) {
    if (s) e.add(name(s), c);
  };
  for (std::size_t i = 0; i < n; ++i) {
    LinearExpr e;
    term(e, full & ~(ObsSet{1} << ground[i]), 1);
    term(e, full, -1);
    sys.add_inequality(e);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const ObsSet bi = ObsSet{1} << ground[i], bj = ObsSet{1} << ground[j];
      const ObsSet rest = full & ~bi & ~bj;
      // Every S within rest, in increasing numeric order of the subset.
      std::vector<ObsSet> subsets{0};
      for (ObsSet s = rest; s; s = (s - 1) & rest) subsets.push_back(s);
      std::sort(subsets.begin(), subsets.end(), subset_less);
      for (ObsSet s : subsets) {
        LinearExpr e;
        term(e, s | bi | bj, 1);
        term(e, s, 1);
        term(e, s | bi, -1);
        term(e, s | bj, -1);
        sys.add_inequality(e);
      }
    }
  }
}

Rational row_gcd_scale(const std::map<ObsSet, Rational, SubsetLess>& coeffs) {
  Integer g = 0, l = 1;
  for (const auto& [s, c] : coeffs) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  return make_rational(l, g);
}

}  // namespace

Rational EntropicInequality::coeff(ObsSet s) const {
  auto it = coeffs.find(s);
  return it == coeffs.end() ? Rational(0) : it->second;
}

bool operator<(const EntropicInequality& a, const EntropicInequality& b) {
  auto ia = a.coeffs.begin(), ib = b.coeffs.begin();
  while (ia != a.coeffs.end() || ib != b.coeffs.end()) {
    if (ib == b.coeffs.end() || (ia != a.coeffs.end() && subset_less(ia->first, ib->first))) {
      // b has 0 at ia->first.
      return ia->second < 0;
    }
    if (ia == a.coeffs.end() || subset_less(ib->first, ia->first)) return 0 < ib->second;
    if (ia->second != ib->second) return ia->second < ib->second;
    ++ia;
    ++ib;
  }
  return false;
}

EntropicInequality canonical(EntropicInequality ineq) {
  for (auto it = ineq.coeffs.begin(); it != ineq.coeffs.end();)
    it = it->second == 0 ? ineq.coeffs.erase(it) : std::next(it);
  if (ineq.coeffs.empty()) throw std::invalid_argument("cannot canonicalize the zero form");
  Rational scale = row_gcd_scale(ineq.coeffs);
  for (auto& [s, c] : ineq.coeffs) c *= scale;
  return ineq;
}

EntropicInequality permuted(const EntropicInequality& ineq, const Permutation& p) {
  EntropicInequality out;
  for (const auto& [s, c] : ineq.coeffs) out.coeffs[permute(p, s)] += c;
  return out;
}

LinearExpr to_expr(const EntropicInequality& ineq, const MarginalScenario& scenario) {
  LinearExpr e;
  for (const auto& [s, c] : ineq.coeffs) e.add(scenario.subset_name(s), c);
  return e;
}

EntropicInequality from_expr(const LinearExpr& expr, const MarginalScenario& scenario) {
  if (expr.constant() != 0) throw std::invalid_argument("entropic forms are homogeneous");
  EntropicInequality out;
  for (const auto& [name, c] : expr.coeffs()) out.coeffs[scenario.parse_subset(name)] += c;
  return out;
}

EntropicInequality parse_inequality(const std::string& input, const MarginalScenario& scenario) {
  EntropicInequality out;
  std::string text = input;
  int flip = 1;
  if (auto rel = text.find_first_of("<>="); rel != std::string::npos) {
    const std::string rhs = text.substr(text.find_first_not_of("<>=", rel));
    if (rhs.find_first_not_of(" \t") == std::string::npos || parse_rational(rhs.substr(rhs.find_first_not_of(" \t"))) != 0)
      throw std::invalid_argument("right-hand side must be 0: " + input);
    if (text[rel] == '>') flip = -1;
    text.resize(rel);
  }
  std::vector<std::pair<int, std::string>> terms;
  int sign = flip;
  std::string cur;
  auto flush = [&] {
    if (cur.find_first_not_of(" \t") != std::string::npos) terms.emplace_back(sign, cur);
    cur.clear();
  };
  for (char ch : text) {
    if (ch == '+' || ch == '-') {
      flush();
      sign = ch == '-' ? -flip : flip;
    } else {
      cur += ch;
    }
  }
  flush();
  for (auto& [sg, t] : terms) {
    Rational coef = 1;
    std::string body = t;
    if (auto star = body.find('*'); star != std::string::npos) {
      std::istringstream is(body.substr(0, star));
      std::string num;
      is >> num;
      coef = parse_rational(num);
      body = body.substr(star + 1);
    } else {
      std::istringstream is(body);
      std::string first, second;
      is >> first >> second;
      if (!second.empty() && (std::isdigit(static_cast<unsigned char>(first[0])) || first[0] == '.')) {
        coef = parse_rational(first);
        body = body.substr(body.find(first) + first.size());
      }
    }
    auto b = body.find_first_not_of(" \t");
    auto e = body.find_last_not_of(" \t");
    if (b == std::string::npos) throw std::invalid_argument("empty term in inequality");
    body = body.substr(b, e - b + 1);
    if (body.size() > 3 && body.rfind("H(", 0) == 0 && body.back() == ')') body = body.substr(2, body.size() - 3);
    ObsSet s = scenario.parse_subset(body);
    if (s == 0) throw std::invalid_argument("term without observables: " + t);
    out.coeffs[s] += sg * coef;
  }
  for (auto it = out.coeffs.begin(); it != out.coeffs.end();)
    it = it->second == 0 ? out.coeffs.erase(it) : std::next(it);
  if (out.empty()) throw std::invalid_argument("inequality has no terms: " + input);
  return canonical(out);
}

std::string format_inequality(const EntropicInequality& ineq, const MarginalScenario& scenario, const char* sense) {
  std::string out;
  for (const auto& [s, c] : ineq.coeffs) {
    const bool neg = c < 0;
    Rational mag = neg ? Rational(-c) : c;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (mag != 1) out += to_string(mag) + " ";
    out += "H(" + scenario.subset_name(s) + ")";
  }
  if (out.empty()) out = "0";
  return out + " " + sense;
}

LinearSystem shannon_cone(const std::vector<std::string>& observables) {
  const std::size_t n = observables.size();
  if (n < 1 || n > 6) throw std::invalid_argument("shannon_cone supports 1..6 observables");
  std::vector<std::string> coords;
  for (ObsSet s : all_subsets(n)) coords.push_back(join_names(observables, s));
  LinearSystem sys(coords);
  std::vector<std::size_t> ground(n);
  for (std::size_t i = 0; i < n; ++i) ground[i] = i;
  add_elemental(sys, ground, [&](ObsSet s) { return join_names(observables, s); });
  return sys;
}

LinearSystem shannon_cone(const MarginalScenario& scenario) { return shannon_cone(scenario.observables()); }

std::vector<LinearExpr> independence_equations(const MarginalScenario& scenario) {
  std::vector<LinearExpr> out;
  std::set<EntropicInequality> seen;
  for (const auto& ind : scenario.independences()) {
    std::vector<ObsSet> left, right;
    for (ObsSet s = ind.first; s; s = (s - 1) & ind.first) left.push_back(s);
    for (ObsSet t = ind.second; t; t = (t - 1) & ind.second) right.push_back(t);
    std::sort(left.begin(), left.end(), subset_less);
    std::sort(right.begin(), right.end(), subset_less);
    std::reverse(left.begin(), left.end());
    std::reverse(right.begin(), right.end());
    for (ObsSet s : left) {
      for (ObsSet t : right) {
        EntropicInequality e;
        e.coeffs[s | t] += 1;
        e.coeffs[s] -= 1;
        e.coeffs[t] -= 1;
        e = canonical(e);
        if (seen.insert(e).second) out.push_back(to_expr(e, scenario));
      }
    }
  }
  return out;
}

EntropicInequality reduce_modulo(const EntropicInequality& ineq, const std::vector<EntropicInequality>& equations) {
  EntropicInequality out = ineq;
  for (const auto& eq : equations) {
    // Pivot: the largest coordinate of the equation.
    const auto& [pivot, pc] = *eq.coeffs.rbegin();
    Rational f = out.coeff(pivot);
    if (f == 0) continue;
    f /= pc;
    for (const auto& [s, c] : eq.coeffs) out.coeffs[s] -= f * c;
  }
  for (auto it = out.coeffs.begin(); it != out.coeffs.end();)
    it = it->second == 0 ? out.coeffs.erase(it) : std::next(it);
  return out.coeffs.empty() ? out : canonical(out);
}

namespace {

// Reduced echelon form with pivots on the largest coordinates.
std::vector<EntropicInequality> echelon(std::vector<EntropicInequality> rows) {
  std::vector<EntropicInequality> done;
  while (!rows.empty()) {
    // Row whose largest coordinate is largest overall.
    std::size_t best = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].coeffs.empty()) continue;
      if (best == rows.size() || subset_less(rows[best].coeffs.rbegin()->first, rows[i].coeffs.rbegin()->first))
        best = i;
    }
    if (best == rows.size()) break;
    EntropicInequality p = rows[best];
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best));
    const auto [pivot, pc] = *p.coeffs.rbegin();
    for (auto& [s, c] : p.coeffs) c /= pc;
    for (auto* group : {&rows, &done}) {
      for (auto& r : *group) {
        Rational f = r.coeff(pivot);
        if (f == 0) continue;
        for (const auto& [s, c] : p.coeffs) r.coeffs[s] -= f * c;
        for (auto it = r.coeffs.begin(); it != r.coeffs.end();)
          it = it->second == 0 ? r.coeffs.erase(it) : std::next(it);
      }
    }
    done.push_back(std::move(p));
  }
  for (auto& r : done) r = canonical(r);
  std::sort(done.begin(), done.end(), [](const EntropicInequality& a, const EntropicInequality& b) {
    return subset_less(a.coeffs.rbegin()->first, b.coeffs.rbegin()->first);
  });
  return done;
}

}  // namespace

ConeProjection project(const MarginalScenario& scenario, const ProjectionOptions& options) {
  if (scenario.size() > 5) throw std::invalid_argument("projection limited to 5 observables");
  LinearSystem cone = shannon_cone(scenario);
  for (const auto& e : independence_equations(scenario)) cone.add_equation(e);

  std::vector<std::string> eliminate;
  for (ObsSet s : all_subsets(scenario.size()))
    if (!scenario.is_context(s)) eliminate.push_back(scenario.subset_name(s));

  ConeProjection out;
  out.coordinates = scenario.contexts();
  ProjectionOptions opts = options;
  opts.on_step = [&](const ProjectionProgress& p) {
    out.progress.push_back(p);
    if (options.on_step) options.on_step(p);
  };
  LinearSystem projected = project_out(cone, eliminate, opts);

  std::vector<EntropicInequality> eqs;
  for (const auto& e : projected.equations()) eqs.push_back(from_expr(e, scenario));
  if (!projected.trivially_infeasible()) {
    for (const auto& r : implicit_equations(projected)) eqs.push_back(from_expr(projected.to_expr(r), scenario));
  }
  out.equations = echelon(std::move(eqs));

  // Re-express over the non-pivot coordinates and drop what became redundant.
  LinearSystem reduced(projected.coordinates());
  for (const auto& e : out.equations) reduced.add_equation(to_expr(e, scenario));
  for (const auto& ie : projected.inequalities()) {
    EntropicInequality r = reduce_modulo(from_expr(ie, scenario), out.equations);
    if (!r.empty()) reduced.add_inequality(to_expr(r, scenario));
  }
  reduced = remove_redundant(reduced);
  for (const auto& ie : reduced.inequalities()) out.inequalities.push_back(canonical(from_expr(ie, scenario)));
  std::sort(out.inequalities.begin(), out.inequalities.end());
  return out;
}

std::vector<InequalityClass> classify(const std::vector<EntropicInequality>& inequalities, const SymmetryGroup& group,
                                      const std::vector<EntropicInequality>& equations) {
  std::vector<InequalityClass> out;
  std::set<EntropicInequality> assigned;
  for (const auto& ineq : inequalities) {
    if (assigned.count(ineq)) continue;
    std::set<EntropicInequality> orbit;
    for (const auto& g : group.elements) {
      EntropicInequality img = permuted(ineq, g);
      img = equations.empty() ? canonical(img) : reduce_modulo(img, equations);
      orbit.insert(img);
    }
    orbit.insert(ineq);
    InequalityClass c;
    c.orbit.assign(orbit.begin(), orbit.end());
    c.representative = c.orbit.front();
    assigned.insert(orbit.begin(), orbit.end());
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(),
            [](const InequalityClass& a, const InequalityClass& b) { return a.representative < b.representative; });
  return out;
}

LinearSystem marginal_shannon_system(const MarginalScenario& scenario) {
  std::vector<std::string> coords;
  for (ObsSet s : scenario.contexts()) coords.push_back(scenario.subset_name(s));
  LinearSystem sys(coords);
  auto name = [&](ObsSet s) { return scenario.subset_name(s); };
  for (ObsSet m : scenario.maximal_contexts()) add_elemental(sys, scenario.members(m), name);
  for (const auto& e : independence_equations(scenario)) {
    bool marginal = true;
    for (const auto& [c, v] : e.coeffs()) marginal = marginal && scenario.is_context(scenario.parse_subset(c));
    if (marginal) sys.add_equation(e);
  }
  return sys;
}

bool is_trivial(const EntropicInequality& ineq, const MarginalScenario& scenario) {
  return is_implied(to_expr(ineq, scenario), marginal_shannon_system(scenario));
}

double evaluate(const EntropicInequality& ineq, const EntropyVector& h) {
  double v = 0;
  for (const auto& [s, c] : ineq.coeffs) {
    auto it = h.find(s);
    if (it == h.end()) throw std::out_of_range("entropy vector lacks a coordinate used by the inequality");
    v += c.get_d() * it->second;
  }
  return v;
}

}  // namespace entropic
