#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>

#include "entropic/box.hpp"
#include "entropic/distill.hpp"
#include "entropic/studies.hpp"
#include "io.hpp"

using namespace entropic;
using io::json;

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidBox : std::invalid_argument {
  std::vector<std::string> details;
  explicit InvalidBox(std::vector<std::string> d) : std::invalid_argument("invalid box"), details(std::move(d)) {}
};

int fail(const std::string& kind, const std::string& message, json details = json::array(), int code = 1) {
  json e = {{"error", kind}, {"message", message}};
  if (!details.empty()) e["details"] = std::move(details);
  std::cout << e.dump(2) << std::endl;
  return code;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) std::cout << text;
  else io::write_file(out, text);
}

struct Common {
  std::string builtin, scenario_file, box_file, out;
  std::vector<std::string> ineqs;
  double grid = 0, tolerance = -1;
  std::uint64_t seed = 1;
  int restarts = -1;
  std::size_t max_rows = 250000;
  bool json_out = false;
};

MarginalScenario load_scenario(const Common& c) {
  if (c.builtin.empty() == c.scenario_file.empty()) throw UsageError("give exactly one of --builtin or --scenario");
  if (!c.builtin.empty()) return named_scenario(c.builtin);
  return io::scenario_from_json(io::read_file(c.scenario_file));
}

MarginalModel load_box(const Common& c) {
  if (c.builtin.empty() == c.box_file.empty()) throw UsageError("give exactly one of --builtin or --box");
  MarginalModel b = c.builtin.empty() ? io::box_from_json(io::read_file(c.box_file)) : named_box(c.builtin);
  auto errs = validation_errors(b, c.tolerance >= 0 ? c.tolerance : 1e-10);
  if (!errs.empty()) throw InvalidBox(std::move(errs));
  return b;
}

int run_derive(const Common& c) {
  const MarginalScenario sc = load_scenario(c);
  if (sc.size() > 5) throw UsageError("derivation supports at most 5 observables");
  ProjectionOptions opt;
  opt.max_rows = c.max_rows;
  const io::FacetReport r = io::derive(sc, opt);
  const std::string js = io::to_json(r).dump(2) + "\n";
  if (!c.out.empty()) {
    io::write_file(c.out, js);
    io::write_file(c.out + ".txt", io::facet_table(r));
    std::cout << json{{"equations", r.projection.equations.size()},
                      {"inequalities", r.projection.inequalities.size()},
                      {"classes", r.classes.size()},
                      {"json", c.out},
                      {"table", c.out + ".txt"}}
                     .dump()
              << std::endl;
  } else {
    std::cout << (c.json_out ? js : io::facet_table(r));
  }
  return 0;
}

struct Value {
  std::string name;
  double value;
  double bound;
  bool upper;  // value <= bound for noncontextual models
};

std::vector<Value> evaluate_selector(const std::string& sel, const MarginalModel& box) {
  const auto& sc = box.scenario();
  auto rest = [&](std::size_t n) { return std::stoi(sel.substr(n)); };
  if (sel == "chsh") return {{sel, chsh(box), 2, true}};
  if (sel == "chsh_e") return {{sel, chsh_entropic(box), 0, true}};
  if (sel == "k5") return {{sel, klyachko_k5(box), -3, false}};
  if (sel == "ke") return {{sel, ncycle_entropic(box, 5), 0, true}};
  if (sel.rfind("ncycle:", 0) == 0) return {{sel, ncycle_entropic(box, rest(7)), 0, true}};
  if (sel.rfind("bilocal:", 0) == 0) return {{sel, bilocal_row(box, rest(8)), 0, true}};
  if (sel == "binosig") return {{sel, bilocal_marginal_residual(box), 0, true}};
  if (sel == "q") return {{sel, nonlocal_content(box).q, 0, true}};
  if (sel == "facets") {
    const auto proj = project(sc);
    const EntropyVector h = entropy_vector(box);
    std::vector<Value> out;
    for (const auto& e : proj.inequalities) out.push_back({format_inequality(e, sc), evaluate(e, h), 0, true});
    for (const auto& e : proj.equations) out.push_back({format_inequality(e, sc, "= 0"), evaluate(e, h), 0, true});
    return out;
  }
  if (sel == "auto") {
    const std::string& l = sc.label();
    std::vector<Value> out;
    if (l == "bell:2,2,2") {
      for (const char* s : {"chsh", "chsh_e", "q"})
        for (auto& v : evaluate_selector(s, box)) out.push_back(v);
    } else if (l == "bilocality" || l == "bilocality:4") {
      for (int k = 1; k <= 10; ++k) out.push_back({"bilocal:" + std::to_string(k), bilocal_row(box, k), 0, true});
      out.push_back({"binosig", bilocal_marginal_residual(box), 0, true});
    } else if (l.rfind("ncycle:", 0) == 0 || l.rfind("chained:", 0) == 0) {
      const int n = static_cast<int>(cycle_order(sc).size());
      for (int i = 1; i <= n; ++i) out.push_back({"ncycle:" + std::to_string(i), ncycle_entropic(box, i), 0, true});
      if (n == 5) out.push_back({"k5", klyachko_k5(box), -3, false});
    } else {
      for (auto& v : evaluate_selector("facets", box)) out.push_back(v);
    }
    return out;
  }
  // Free-form inequality text, read as "<= 0".
  const auto e = parse_inequality(sel, sc);
  return {{sel, evaluate(e, entropy_vector(box)), 0, true}};
}

int run_eval(const Common& c) {
  const MarginalModel box = load_box(c);
  const double tol = c.tolerance >= 0 ? c.tolerance : 1e-9;
  json vals = json::array();
  for (const auto& sel : c.ineqs.empty() ? std::vector<std::string>{"auto"} : c.ineqs) {
    for (const auto& v : evaluate_selector(sel, box)) {
      const bool violated = v.upper ? v.value > v.bound + tol : v.value < v.bound - tol;
      vals.push_back({{"inequality", v.name}, {"value", v.value}, {"bound", v.bound}, {"violated", violated}});
    }
  }
  json out = {{"box", c.builtin.empty() ? c.box_file : c.builtin},
              {"scenario", box.scenario().label()},
              {"values", vals}};
  emit(out.dump(2) + "\n", c.out);
  return 0;
}

NelderMeadOptions nm_options(const Common& c, int default_restarts) {
  NelderMeadOptions o;
  o.seed = c.seed;
  o.restarts = c.restarts >= 0 ? c.restarts : default_restarts;
  if (c.tolerance > 0) o.tolerance = c.tolerance;
  return o;
}

int run_optimize(const Common& c, const std::string& target) {
  const Objective obj = make_objective(target);
  const NelderMeadOptions o = nm_options(c, 50);
  const auto rep = optimize(obj, o);
  emit(io::to_json(rep, obj, c.seed).dump(2) + "\n", c.out);
  return 0;
}

int run_scan(const Common& c, const std::string& figure) {
  NelderMeadOptions o = nm_options(c, 10);
  Table t;
  if (figure == "eta_two") {
    const auto r = scan_eta_two(0.98, 1.0, c.tolerance > 0 ? c.tolerance : 1e-5, o);
    t = r.trace;
    t.header.push_back("threshold");
    for (auto& row : t.rows) row.push_back(r.threshold);
  } else {
    o.tolerance = 1e-10;
    t = run_scan(figure, c.grid, o);
  }
  emit(t.csv(), c.out);
  if (!c.out.empty()) {
    const std::string gp = c.out + ".gp";
    io::write_file(gp, plot_script(figure, c.out));
    std::cout << json{{"figure", figure}, {"rows", t.rows.size()}, {"csv", c.out}, {"plot", gp}}.dump() << std::endl;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropic Bell, contextuality and bilocality inequalities"};
  app.require_subcommand(1);
  Common c;
  std::string target = "chsh_e", figure;

  auto* derive = app.add_subcommand("derive", "Project the Shannon cone onto a marginal scenario");
  derive->add_option("--builtin", c.builtin, "Scenario name: ncycle:n, chsh, bell:p,s,o, bilocality, chained:k");
  derive->add_option("--scenario", c.scenario_file, "Scenario JSON file");
  derive->add_option("--out", c.out, "Write the JSON report here and the table to <out>.txt");
  derive->add_option("--max-rows", c.max_rows, "Resource cap on candidate rows per elimination step")
      ->capture_default_str();
  derive->add_flag("--json", c.json_out, "Print JSON instead of the table");

  auto* eval = app.add_subcommand("eval", "Evaluate inequalities on a box");
  eval->add_option("--builtin", c.builtin,
                   "Box name: pr, iso:C, classical, white, pmax, pf, triangle:g,x, prd:d, classical_d:d, "
                   "dfamily:xi,d, nb:xi,gamma");
  eval->add_option("--box", c.box_file, "Box JSON file");
  eval->add_option("--ineq", c.ineqs,
                   "chsh, chsh_e, k5, ke, ncycle:i, bilocal:k, binosig, q, facets, auto, or inequality text "
                   "(default auto)");
  eval->add_option("--tolerance", c.tolerance, "Validation and violation tolerance (default 1e-10 / 1e-9)");
  eval->add_option("--out", c.out, "Write JSON here instead of stdout");

  auto* opt = app.add_subcommand("optimize", "Maximize an entropic violation over quantum models");
  opt->add_option("target", target, "chsh_e, chsh_e_bloch, klyachko_e, chained:k")->capture_default_str();
  opt->add_option("--seed", c.seed, "Base seed; restart r uses seed + r")->capture_default_str();
  opt->add_option("--restarts", c.restarts, "Random restarts (default 50)");
  opt->add_option("--tolerance", c.tolerance, "Simplex tolerance (default 1e-10)");
  opt->add_option("--out", c.out, "Write JSON here instead of stdout");

  auto* scan = app.add_subcommand("scan", "Emit figure data as CSV plus a gnuplot script");
  scan->add_option("figure", figure, "fig2a, fig2b, fig3, fig4, fig6, eta_single, eta_two")->required();
  scan->add_option("--grid", c.grid,
                   "Grid step (defaults: fig2a pi/100, fig3/fig4/fig6 0.01, eta_single 0.05)");
  scan->add_option("--seed", c.seed, "Optimizer seed")->capture_default_str();
  scan->add_option("--restarts", c.restarts, "Optimizer restarts per point (default 10)");
  scan->add_option("--tolerance", c.tolerance, "eta_two bisection tolerance (default 1e-5)");
  scan->add_option("--out", c.out, "CSV path; the plot script goes to <out>.gp");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), json::array(), 2);
  }

  try {
    if (*derive) return run_derive(c);
    if (*eval) return run_eval(c);
    if (*opt) return run_optimize(c, target);
    if (*scan) return run_scan(c, figure);
  } catch (const ResourceCapExceeded& e) {
    json log = json::array();
    for (const auto& p : e.progress())
      log.push_back({{"eliminated", p.eliminated}, {"combinations", p.combinations}, {"inequalities", p.inequalities}});
    return fail("resource_cap", e.what(), log, 3);
  } catch (const InvalidBox& e) {
    return fail("invalid_box", e.what(), e.details);
  } catch (const UsageError& e) {
    return fail("usage", e.what(), json::array(), 2);
  } catch (const std::exception& e) {
    return fail("failed", e.what());
  }
  return 1;
}
