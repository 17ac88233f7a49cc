#include "support.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <set>

#include "entropic/entcone.hpp"
#include "entropic/linear.hpp"
#include "entropic/projection.hpp"
#include "entropic/simplex.hpp"

using namespace entropic;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

LinearSystem system_of(std::vector<std::string> coords, std::vector<LinearExpr> ineqs,
                       std::vector<LinearExpr> eqs = {}) {
  LinearSystem s(std::move(coords));
  for (auto& e : ineqs) s.add_inequality(e);
  for (auto& e : eqs) s.add_equation(e);
  return s;
}

std::set<std::pair<std::map<std::string, Rational>, Rational>> as_set(const LinearSystem& s) {
  std::set<std::pair<std::map<std::string, Rational>, Rational>> out;
  for (const auto& e : s.inequalities()) out.insert({e.coeffs(), e.constant()});
  return out;
}

LinearSystem random_system(std::mt19937_64& rng, std::size_t dim, std::size_t count) {
  std::vector<std::string> coords;
  for (std::size_t i = 0; i < dim; ++i) coords.push_back("x" + std::to_string(i));
  LinearSystem s(coords);
  std::uniform_int_distribution<int> c(-3, 3);
  while (s.num_inequalities() < count) {
    LinearExpr e;
    for (const auto& n : coords) e.add(n, c(rng));
    e.set_constant(c(rng));
    if (e.coeffs().empty()) continue;
    s.add_inequality(e);
  }
  return s;
}

bool satisfies(const LinearSystem& s, const std::map<std::string, Rational>& point) {
  auto value = [&](const LinearExpr& e) {
    Rational v = e.constant();
    for (const auto& [k, c] : e.coeffs()) v += c * point.at(k);
    return v;
  };
  for (const auto& e : s.inequalities())
    if (value(e) > 0) return false;
  for (const auto& e : s.equations())
    if (value(e) != 0) return false;
  return true;
}

// Fix every coordinate but one and ask the LP whether a value for it exists.
bool extendable(const LinearSystem& s, const std::string& free, const std::map<std::string, Rational>& point) {
  LinearSystem t({free});
  for (const auto& e : s.inequalities()) {
    LinearExpr r;
    Rational k = e.constant();
    for (const auto& [name, c] : e.coeffs()) {
      if (name == free) r.add(name, c);
      else k += c * point.at(name);
    }
    r.set_constant(k);
    if (r.coeffs().empty()) {
      if (k > 0) return false;
      continue;
    }
    t.add_inequality(r);
  }
  return lp_solve(LinearExpr{}, Direction::maximize, t).status != LPStatus::infeasible;
}

// Solves the square system rows * x = rhs by Gauss-Jordan; false when singular.
bool solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> b, std::vector<Rational>& x) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return false;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("3/4") == q(3, 4));
  CHECK(parse_rational("-6/8") == q(-3, 4));
  CHECK(parse_rational("0.125") == q(1, 8));
  CHECK(parse_rational("1e-3") == q(1, 1000));
  CHECK(parse_rational("2.5E+2") == q(250));
  CHECK(to_string(q(6, 4)) == "3/2");
  CHECK(to_string(q(-4, 2)) == "-2");
  CHECK_THROWS_AS(make_rational(1, 0), std::invalid_argument);
  CHECK_THROWS(parse_rational("abc"));
  const Rational r = make_rational(10, -4);
  CHECK(r.get_den() > 0);
  CHECK(gcd(r.get_num(), r.get_den()) == 1);
  CHECK(round_to_dyadic(0.1, 10) == q(102, 1024));
}

TEST_CASE("canonicalize") {
  CHECK(canonicalize(LinearExpr{{"x", q(2, 3)}, {"y", q(-4, 3)}}) == LinearExpr{{"x", 1}, {"y", -2}});
  CHECK(canonicalize(LinearExpr{{"x", -5}}) == LinearExpr{{"x", -1}});
  CHECK(canonicalize(LinearExpr{{"x", 1}, {"y", 1}}) == LinearExpr{{"x", 1}, {"y", 1}});
  CHECK_THROWS_AS(canonicalize(LinearExpr{}), std::invalid_argument);
  LinearExpr e{{"x", 0}};
  CHECK(e.coeffs().empty());

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> c(-9, 9), pos(1, 9);
  for (int t = 0; t < 200; ++t) {
    LinearExpr f{{"x", c(rng)}, {"y", c(rng)}, {"z", c(rng)}};
    f.set_constant(c(rng));
    if (f.is_zero()) continue;
    const Rational s = make_rational(pos(rng), pos(rng));
    CHECK(canonicalize(s * f) == canonicalize(f));
  }
}

TEST_CASE("fm_eliminate examples") {
  auto seg = fm_eliminate(system_of({"x", "y"}, {LinearExpr({{"x", 1}}, -1), {{"x", -1}}}), "x");
  CHECK(seg.num_inequalities() == 0);
  CHECK(seg.coordinates() == std::vector<std::string>{"y"});

  auto chain = fm_eliminate(system_of({"x", "y", "z"}, {{{"y", 1}, {"x", -1}}, {{"x", 1}, {"z", -1}}}), "x");
  REQUIRE(chain.num_inequalities() == 1);
  CHECK(chain.inequality(0) == LinearExpr{{"y", 1}, {"z", -1}});

  auto sub = fm_eliminate(system_of({"x", "y"}, {LinearExpr({{"x", 1}}, -3)}, {{{"x", 1}, {"y", -1}}}), "x");
  REQUIRE(sub.num_inequalities() == 1);
  CHECK(sub.num_equations() == 0);
  CHECK(sub.inequality(0) == LinearExpr({{"y", 1}}, -3));
}

TEST_CASE("lp_solve examples") {
  auto r = lp_solve({{"x", 1}}, Direction::maximize, system_of({"x"}, {LinearExpr({{"x", 1}}, -3), {{"x", -1}}}));
  CHECK(r.status == LPStatus::optimal);
  CHECK(r.value == 3);
  CHECK(r.witness.at("x") == 3);

  auto sq = system_of({"x", "y"}, {LinearExpr({{"x", 1}}, -1), LinearExpr({{"y", 1}}, -1), {{"x", -1}}, {{"y", -1}}});
  r = lp_solve({{"x", 1}, {"y", 1}}, Direction::maximize, sq);
  CHECK(r.status == LPStatus::optimal);
  CHECK(r.value == 2);

  CHECK(lp_solve({{"x", 1}}, Direction::maximize, system_of({"x"}, {{{"x", -1}}})).status == LPStatus::unbounded);
  auto empty = system_of({"x"}, {LinearExpr({{"x", 1}}, 1), {{"x", -1}}});
  CHECK(lp_solve({{"x", 1}}, Direction::minimize, empty).status == LPStatus::infeasible);

  r = lp_solve(LinearExpr({{"x", 1}}, 5), Direction::minimize, sq);
  CHECK(r.value == 5);
}

TEST_CASE("simplex survives a cycling example") {
  // Beale's problem: cycles under the textbook largest-coefficient rule.
  StandardFormLP lp(3, 7);
  const Rational a[3][7] = {
      {1, 0, 0, q(1, 4), -60, q(-1, 25), 9}, {0, 1, 0, q(1, 2), -90, q(-1, 50), 3}, {0, 0, 1, 0, 0, 1, 0}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 7; ++j) lp.at(i, j) = a[i][j];
  lp.b = {0, 0, 1};
  lp.c = {0, 0, 0, q(-3, 4), 150, q(-1, 50), 6};
  const auto s = solve_standard_form(lp);
  REQUIRE(s.status == LPStatus::optimal);
  CHECK(s.value == q(-1, 20));
}

TEST_CASE("remove_redundant") {
  auto one = remove_redundant(system_of({"x"}, {LinearExpr({{"x", 1}}, -1), LinearExpr({{"x", 1}}, -2)}));
  REQUIRE(one.num_inequalities() == 1);
  CHECK(one.inequality(0) == LinearExpr({{"x", 1}}, -1));

  auto two = remove_redundant(system_of({"x", "y"}, {LinearExpr({{"x", 1}}, -1), LinearExpr({{"y", 1}}, -1),
                                                     LinearExpr({{"x", 1}, {"y", 1}}, -2)}));
  CHECK(as_set(two) == as_set(system_of({"x", "y"}, {LinearExpr({{"x", 1}}, -1), LinearExpr({{"y", 1}}, -1)})));

  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    auto s = random_system(rng, 3, 8);
    // Keep it bounded-ish so most instances are feasible.
    for (const char* n : {"x0", "x1", "x2"}) {
      s.add_inequality(LinearExpr({{n, 1}}, -4));
      s.add_inequality(LinearExpr({{n, -1}}, -4));
    }
    const auto r = remove_redundant(s);
    CHECK(as_set(remove_redundant(r)) == as_set(r));
    auto rows = s.inequalities();
    std::reverse(rows.begin(), rows.end());
    const auto r2 = remove_redundant(system_of(s.coordinates(), rows));
    CHECK(as_set(r2) == as_set(r));
    for (std::size_t i = 0; i < r.num_inequalities(); ++i) {
      std::vector<LinearExpr> others;
      for (std::size_t j = 0; j < r.num_inequalities(); ++j)
        if (j != i) others.push_back(r.inequality(j));
      CHECK_FALSE(is_implied(r.inequality(i), system_of(r.coordinates(), others)));
    }
  }
}

TEST_CASE("is_implied") {
  CHECK(is_implied({{"x", 1}}, system_of({"x"}, {LinearExpr({{"x", 1}}, 1)})));
  CHECK_FALSE(is_implied({{"x", 1}}, system_of({"x"}, {LinearExpr({{"x", 1}}, -1)})));
  const auto cone = shannon_cone({"X1", "X2"});
  CHECK(cone.num_inequalities() == 3);
  CHECK(is_implied({{"X1", 1}, {"X1,X2", -1}}, cone));
  CHECK(is_implied({{"X1", -1}}, cone));
  CHECK_FALSE(is_implied({{"X1", 1}, {"X2", -1}}, cone));
}

TEST_CASE("projection soundness on random systems") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(2, 4), cnt(2, 8), val(-3, 3);
  int agree_in = 0, agree_out = 0;
  for (int t = 0; t < 300; ++t) {
    const auto s = random_system(rng, static_cast<std::size_t>(dim(rng)), static_cast<std::size_t>(cnt(rng)));
    const std::string x = s.coordinates()[static_cast<std::size_t>(t) % s.dimension()];
    const auto p = fm_eliminate(s, x);
    for (const auto& e : p.inequalities()) CHECK(e.coeff(x) == 0);
    for (int k = 0; k < 10; ++k) {
      std::map<std::string, Rational> point;
      for (const auto& n : p.coordinates()) point[n] = make_rational(val(rng), 2);
      const bool in = satisfies(p, point);
      CHECK(in == extendable(s, x, point));
      (in ? agree_in : agree_out)++;
    }
  }
  CHECK(agree_in > 100);
  CHECK(agree_out > 100);
}

TEST_CASE("lp_solve agrees with vertex enumeration") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> c(-3, 3);
  for (std::size_t d : {2u, 3u}) {
    for (int t = 0; t < 80; ++t) {
      auto s = random_system(rng, d, 5);
      for (const auto& n : s.coordinates()) {
        s.add_inequality(LinearExpr({{n, 1}}, -5));
        s.add_inequality(LinearExpr({{n, -1}}, -5));
      }
      LinearExpr obj;
      for (const auto& n : s.coordinates()) obj.add(n, c(rng));
      const auto rows = s.inequalities();
      std::optional<Rational> best;
      std::vector<std::size_t> pick(d);
      std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == d) {
          std::vector<std::vector<Rational>> a;
          std::vector<Rational> b;
          for (std::size_t i : pick) {
            std::vector<Rational> row;
            for (const auto& n : s.coordinates()) row.push_back(rows[i].coeff(n));
            a.push_back(row);
            b.push_back(-rows[i].constant());
          }
          std::vector<Rational> x;
          if (!solve_square(a, b, x)) return;
          std::map<std::string, Rational> pt;
          for (std::size_t i = 0; i < d; ++i) pt[s.coordinates()[i]] = x[i];
          if (!satisfies(s, pt)) return;
          Rational v = 0;
          for (const auto& [n, k] : obj.coeffs()) v += k * pt.at(n);
          if (!best || v > *best) best = v;
          return;
        }
        for (std::size_t i = start; i < rows.size(); ++i) {
          pick[depth] = i;
          rec(i + 1, depth + 1);
        }
      };
      rec(0, 0);
      const auto r = lp_solve(obj, Direction::maximize, s);
      if (!best) {
        CHECK(r.status == LPStatus::infeasible);
        continue;
      }
      REQUIRE(r.status == LPStatus::optimal);
      CHECK(r.value == *best);
      CHECK(satisfies(s, r.witness));
    }
  }
}
