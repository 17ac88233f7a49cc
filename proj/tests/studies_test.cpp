#include "support.hpp"

#include <cmath>

#include "entropic/quantum.hpp"
#include "entropic/studies.hpp"

using namespace entropic;
using support::oracles;

namespace {

NelderMeadOptions quick(int restarts = 4) {
  NelderMeadOptions o;
  o.restarts = restarts;
  o.max_evaluations = 2000;
  o.seed = 7;
  return o;
}

}  // namespace

TEST_CASE("grid") {
  CHECK(grid(0, 1, 0.25) == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(grid(0, 1, 0.1).size() == 11);
  CHECK(grid(0, 0.95, 0.1).size() == 10);
  CHECK(grid(0, 1, 0).empty());
  CHECK(grid(0, 1, -0.1).empty());
  CHECK(grid(1, 0, 0.1).empty());
  CHECK(grid(0.5, 0.5, 0.1) == std::vector<double>{0.5});
}

TEST_CASE("table csv") {
  Table t{{"x", "y"}, {{0.5, -0.0}, {1.0 / 3, 2}}};
  CHECK(t.csv() == "x,y\n0.5,0\n0.333333333333,2\n");
  CHECK(t.column("y") == 1);
  CHECK_THROWS_AS(t.column("z"), std::out_of_range);
  CHECK(Table{{"a"}, {}}.csv() == "a\n");
}

TEST_CASE("objectives") {
  const auto chsh_obj = make_objective("chsh_e");
  CHECK(chsh_obj.parameters.size() == 5);
  const auto& o = oracles()["chsh_e_optimum"];
  const auto p = o["params"].get<std::vector<double>>();
  CHECK(chsh_obj(p) == doctest::Approx(o["value"].get<double>()).epsilon(1e-9));
  CHECK(std::isnan(chsh_obj({-1, 0, 0, 0, 0})));

  // Two-setting chained box is the CHSH scenario.
  const auto ch2 = make_objective("chained:2");
  CHECK(ch2.parameters.size() == chsh_obj.parameters.size());
  for (const auto& q : {p, std::vector<double>{0.3, 0.1, 1.0, -0.4, 2.0}})
    CHECK(ch2(q) >= chsh_obj(q) - 1e-12);

  const auto k = make_objective("klyachko_e");
  const auto& kp = oracles()["klyachko_optimum"];
  CHECK(k(kp["params"].get<std::vector<double>>()) == doctest::Approx(kp["value"].get<double>()).epsilon(1e-9));
  CHECK(make_objective("chsh_e_bloch").parameters.size() == 9);
  CHECK_THROWS(make_objective("chained:1"));
  CHECK_THROWS(make_objective("bogus"));
}

TEST_CASE("optimization is reproducible") {
  const auto obj = make_objective("chsh_e");
  const auto a = optimize(obj, quick());
  const auto b = optimize(obj, quick());
  CHECK(a.best_params == b.best_params);
  CHECK(a.best_value == b.best_value);
  CHECK(a.evaluations == b.evaluations);
  CHECK(obj(a.best_params) == a.best_value);
  for (std::size_t i = 0; i < a.best_params.size(); ++i) {
    CHECK(a.best_params[i] >= obj.lower[i]);
    CHECK(a.best_params[i] <= obj.upper[i]);
  }
  auto other = quick();
  other.seed = 8;
  CHECK(optimize(obj, other).best_value <= oracles()["chsh_e_optimum"]["value"].get<double>() + 1e-9);
}

TEST_CASE("fig3 scan") {
  const auto t = scan_fig3(0.1);
  CHECK(t.rows.size() == 66);
  const auto cg = t.column("gamma"), cx = t.column("xi"), cq = t.column("q"), ce = t.column("chsh_e");
  for (const auto& r : t.rows) {
    CHECK(r.size() == t.header.size());
    CHECK(r[cg] + r[cx] <= 1 + 1e-12);
    CHECK(r[cq] >= 0);
    CHECK(r[cq] <= 1);
    CHECK(r[t.column("gain_cavalcanti")] <= 1e-12);
    CHECK(r[ce] <= 1 + 1e-12);
  }
  CHECK(t.csv() == scan_fig3(0.1).csv());
  CHECK(scan_fig3(0).rows.empty());
}

TEST_CASE("fig4 scan") {
  const auto t = scan_fig4(0.1, 4);
  CHECK(t.rows.size() == 33);
  for (const auto& r : t.rows) {
    CHECK(r[t.column("q")] == doctest::Approx(r[t.column("xi")]).epsilon(1e-9));
    CHECK(r[t.column("gain")] == doctest::Approx(r[t.column("q_wired")] - r[t.column("q")]));
  }
}

TEST_CASE("fig6 scan") {
  const auto t = scan_fig6(0.1);
  CHECK(t.rows.size() == 66);
  bool violating_local = false;
  for (const auto& r : t.rows) {
    CHECK(r[t.column("binosig_residual")] <= 1e-12);
    if (r[t.column("row7")] > 0 && r[t.column("tripartite_local")] == 1) violating_local = true;
  }
  CHECK(violating_local);
}

TEST_CASE("optimizer scans") {
  const auto a = scan_fig2a(M_PI / 8, quick(2));
  CHECK(a.rows.size() == 3);
  for (const auto& r : a.rows) {
    CHECK(r[a.column("chsh_quantum_max")] == doctest::Approx(2 * std::sqrt(1 + std::pow(std::sin(2 * r[0]), 2))));
    CHECK(r[a.column("chsh_e_max")] <= 1);
  }
  CHECK(a.csv() == scan_fig2a(M_PI / 8, quick(2)).csv());

  const auto b = scan_fig2b(3, quick(2));
  CHECK(b.rows.size() == 2);

  const auto e = scan_eta_single(0.25, quick(2));
  CHECK(e.rows.size() == 4);
  for (const auto& r : e.rows) CHECK(r[1] == doctest::Approx(r[2]).epsilon(1e-9));
}

TEST_CASE("run_scan and plot scripts") {
  CHECK(run_scan("fig3", 0.25, quick()).csv() == scan_fig3(0.25).csv());
  CHECK_THROWS(run_scan("fig99", 0.1, quick()));
  for (const char* f : {"fig2a", "fig2b", "fig3", "fig4", "fig6", "eta_single", "eta_two"}) {
    const auto s = plot_script(f, "out.csv");
    CHECK(s.find("'out.csv'") != std::string::npos);
    CHECK(s.find("plot ") != std::string::npos);
  }
  CHECK_THROWS(plot_script("fig99", "out.csv"));
  CHECK_THROWS(scan_eta_two(1, 0.9, 1e-3, quick()));
}
