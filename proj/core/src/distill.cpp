#include "entropic/distill.hpp"

#include <cmath>
#include <stdexcept>

#include "entropic/simplex.hpp"

namespace entropic {

Wiring foster_wiring() {
  auto p = make_party_wiring(
      2, [](int x) { return x; }, [](int x, int) { return x; }, [](int, int a1, int a2) { return a1 ^ a2; });
  return {"foster", p, p};
}

Wiring cavalcanti_wiring() {
  auto a = make_party_wiring(
      2, [](int x) { return x; }, [](int x, int a1) { return x ^ a1 ^ 1; },
      [](int, int a1, int a2) { return a1 ^ a2 ^ 1; });
  auto b = make_party_wiring(
      2, [](int) { return 1; }, [](int y, int b1) { return y & b1; }, [](int, int b1, int b2) { return b1 ^ b2 ^ 1; });
  return {"cavalcanti", a, b};
}

Wiring cavalcanti_y_wiring() {
  Wiring w = cavalcanti_wiring();
  w.name = "cavalcanti_y";
  w.bob = make_party_wiring(
      2, [](int y) { return y; }, [](int y, int b1) { return y & b1; }, [](int, int b1, int b2) { return b1 ^ b2 ^ 1; });
  return w;
}

Wiring generalized_wiring(int d) {
  if (d < 2) throw std::invalid_argument("generalized wiring needs d >= 2");
  auto p = make_party_wiring(
      d, [](int x) { return x; }, [](int x, int a1) { return (x * a1) % 2; },
      [d](int, int a1, int a2) { return (a1 + a2) % d; });
  return {"generalized:" + std::to_string(d), p, p};
}

Wiring wiring_library(const std::string& name) {
  if (name == "foster") return foster_wiring();
  if (name == "cavalcanti") return cavalcanti_wiring();
  if (name == "cavalcanti_y") return cavalcanti_y_wiring();
  if (name.rfind("generalized:", 0) == 0) return generalized_wiring(std::stoi(name.substr(12)));
  if (name == "generalized") return generalized_wiring(2);
  throw std::invalid_argument("unknown wiring: " + name);
}

void validate(const Wiring& w) {
  for (const PartyWiring* p : {&w.alice, &w.bob}) {
    const int d = p->outcomes;
    if (p->first.size() != 2 || p->second.size() != static_cast<std::size_t>(2 * d) ||
        p->output.size() != static_cast<std::size_t>(2 * d * d))
      throw std::invalid_argument("wiring table sizes do not match the alphabets");
    for (int v : p->first)
      if (v < 0 || v > 1) throw std::invalid_argument("wiring input map leaves {0,1}");
    for (int v : p->second)
      if (v < 0 || v > 1) throw std::invalid_argument("wiring input map leaves {0,1}");
    for (int v : p->output)
      if (v < 0 || v >= d) throw std::invalid_argument("wiring output map leaves the outcome alphabet");
  }
  if (w.alice.outcomes != w.bob.outcomes) throw std::invalid_argument("parties disagree on the outcome count");
}

namespace {

int box_outcomes(const MarginalModel& box) {
  const auto& sc = box.scenario();
  if (sc.size() != 4 || sc.maximal_contexts().size() != 4 || sc.observables()[0] != "A0" ||
      sc.observables()[2] != "B0")
    throw std::invalid_argument("expected a two-party, two-setting box");
  const int d = sc.cardinality(0);
  for (int c : sc.cardinalities())
    if (c != d) throw std::invalid_argument("all observables must share the outcome count");
  return d;
}

ObsSet ctx_of(int x, int y) { return (ObsSet{1} << x) | (ObsSet{1} << (2 + y)); }

template <class T, class Get>
std::vector<std::vector<T>> wired_tables(const Wiring& w, int d, Get p) {
  std::vector<std::vector<T>> out(4, std::vector<T>(static_cast<std::size_t>(d * d), T(0)));
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      auto& t = out[static_cast<std::size_t>(2 * x + y)];
      const int x1 = w.alice.f1(x), y1 = w.bob.f1(y);
      for (int a1 = 0; a1 < d; ++a1) {
        for (int b1 = 0; b1 < d; ++b1) {
          const T p1 = p(a1, b1, x1, y1);
          if (p1 == 0) continue;
          const int x2 = w.alice.f2(x, a1), y2 = w.bob.f2(y, b1);
          for (int a2 = 0; a2 < d; ++a2) {
            for (int b2 = 0; b2 < d; ++b2) {
              const T p2 = p(a2, b2, x2, y2);
              if (p2 == 0) continue;
              const int a = w.alice.g(x, a1, a2), b = w.bob.g(y, b1, b2);
              t[static_cast<std::size_t>(a * d + b)] += p1 * p2;
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

MarginalModel wire(const MarginalModel& box, const Wiring& w) {
  validate(w);
  const int d = box_outcomes(box);
  if (d != w.alice.outcomes) throw std::invalid_argument("wiring and box outcome alphabets differ");
  MarginalModel out(box.scenario());
  if (box.is_exact()) {
    std::vector<std::vector<Rational>> tabs(4);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) tabs[static_cast<std::size_t>(2 * x + y)] = box.exact_table(ctx_of(x, y));
    auto t = wired_tables<Rational>(w, d, [&](int a, int b, int x, int y) {
      return tabs[static_cast<std::size_t>(2 * x + y)][static_cast<std::size_t>(a * d + b)];
    });
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) out.set_table(ctx_of(x, y), std::move(t[static_cast<std::size_t>(2 * x + y)]));
  } else {
    auto t = wired_tables<double>(w, d, [&](int a, int b, int x, int y) {
      return box.table(ctx_of(x, y))[static_cast<std::size_t>(a * d + b)];
    });
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) out.set_table(ctx_of(x, y), std::move(t[static_cast<std::size_t>(2 * x + y)]));
  }
  return out;
}

MarginalModel deterministic_box(int d, int a0, int a1, int b0, int b1) {
  return bipartite(2, d, [=](int a, int b, int x, int y) {
    return Rational(a == (x ? a1 : a0) && b == (y ? b1 : b0) ? 1 : 0);
  });
}

Decomposition nonlocal_content(const MarginalModel& box) {
  const int d = box_outcomes(box);
  const std::size_t dd = static_cast<std::size_t>(d);
  const std::size_t n_det = dd * dd * dd * dd;
  if (n_det > 10000) throw std::invalid_argument("too many deterministic boxes for the nonlocal content LP");
  const std::size_t rows = 4 * dd * dd;
  const bool exact = box.is_exact();

  // Row (x, y, a, b); columns: weights, then one slack per row.
  StandardFormLP lp(rows, n_det + rows);
  auto row_of = [&](int x, int y, int a, int b) {
    return static_cast<std::size_t>(((2 * x + y) * d + a) * d + b);
  };
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const ObsSet ctx = ctx_of(x, y);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          const auto i = static_cast<std::size_t>(a * d + b);
          lp.b[row_of(x, y, a, b)] = exact ? box.exact_table(ctx)[i] : round_to_dyadic(box.table(ctx)[i]);
        }
    }
  for (std::size_t k = 0; k < n_det; ++k) {
    const int a0 = static_cast<int>(k / (dd * dd * dd)), a1 = static_cast<int>(k / (dd * dd) % dd);
    const int b0 = static_cast<int>(k / dd % dd), b1 = static_cast<int>(k % dd);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) lp.at(row_of(x, y, x ? a1 : a0, y ? b1 : b0), k) = 1;
    lp.c[k] = -1;
  }
  for (std::size_t r = 0; r < rows; ++r) lp.at(r, n_det + r) = 1;

  auto sol = solve_standard_form(lp);
  if (sol.status != LPStatus::optimal) throw std::runtime_error("nonlocal content LP did not reach an optimum");
  Decomposition dec;
  dec.q_exact = 1 + sol.value;
  if (!exact && dec.q_exact < Rational(1, 1000000000)) dec.q_exact = 0;
  dec.q = dec.q_exact.get_d();
  dec.local_weights.resize(n_det);
  for (std::size_t k = 0; k < n_det; ++k) dec.local_weights[k] = sol.x[k].get_d();

  // Nonlocal part and reconstruction residual.
  if (dec.q_exact > 0) {
    MarginalModel nl(box.scenario());
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        std::vector<Rational> t(dd * dd);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) t[static_cast<std::size_t>(a * d + b)] = sol.x[n_det + row_of(x, y, a, b)] / dec.q_exact;
        if (exact) {
          nl.set_table(ctx_of(x, y), std::move(t));
        } else {
          std::vector<double> r(t.size());
          for (std::size_t i = 0; i < t.size(); ++i) r[i] = t[i].get_d();
          nl.set_table(ctx_of(x, y), std::move(r));
        }
      }
    dec.nonlocal_part = std::move(nl);
  }
  double res = 0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          double v = 0;
          for (std::size_t k = 0; k < n_det; ++k) {
            const int a0 = static_cast<int>(k / (dd * dd * dd)), a1 = static_cast<int>(k / (dd * dd) % dd);
            const int b0 = static_cast<int>(k / dd % dd), b1 = static_cast<int>(k % dd);
            if ((x ? a1 : a0) == a && (y ? b1 : b0) == b) v += dec.local_weights[k];
          }
          if (dec.q_exact > 0) v += dec.q * dec.nonlocal_part.table(ctx_of(x, y))[static_cast<std::size_t>(a * d + b)];
          res = std::max(res, std::abs(v - box.table(ctx_of(x, y))[static_cast<std::size_t>(a * d + b)]));
        }
  dec.residual = res;
  return dec;
}

double distillation_gain(const MarginalModel& box, const Wiring& w) {
  return nonlocal_content(wire(box, w)).q - nonlocal_content(box).q;
}

}  // namespace entropic
