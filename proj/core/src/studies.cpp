#include "entropic/studies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "entropic/distill.hpp"
#include "entropic/quantum.hpp"
#include "entropic/scenario.hpp"

namespace entropic {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double edge = 1e-6;

double max_over(const std::vector<EntropicInequality>& ineqs, const MarginalModel& box) {
  const EntropyVector h = entropy_vector(box);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& e : ineqs) best = std::max(best, evaluate(e, h));
  return best;
}

const EntropicInequality& klyachko_inequality() {
  static const EntropicInequality ke = ncycle_inequality(ncycle(5), 5);
  return ke;
}

// Number of steps when 1/step is (close to) an integer, else 0.
long exact_steps(double step) {
  if (!(step > 0)) return 0;
  const double n = 1.0 / step;
  const long r = std::lround(n);
  return (r > 0 && std::abs(n - static_cast<double>(r)) < 1e-9 * n) ? r : 0;
}

Rational grid_value(long i, long n, double step) {
  return n > 0 ? make_rational(i, n) : round_to_dyadic(static_cast<double>(i) * step);
}

long grid_count(double step, double hi) {
  if (!(step > 0) || hi < 0) return -1;
  return static_cast<long>(std::floor(hi / step + 1e-9));
}

}  // namespace

double Objective::operator()(const std::vector<double>& p) const {
  try {
    return value(box(p));
  } catch (const std::invalid_argument&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

Objective chsh_e_objective() {
  Objective o;
  o.name = "chsh_e";
  o.parameters = {"alpha", "theta_A0", "theta_A1", "theta_B0", "theta_B1"};
  o.lower = {edge, -pi, -pi, -pi, -pi};
  o.upper = {pi / 2 - edge, pi, pi, pi, pi};
  o.box = [](const std::vector<double>& p) { return chsh_quantum_box(p[0], {p[1], p[2], p[3], p[4]}); };
  o.value = [](const MarginalModel& b) { return chsh_entropic(b); };
  return o;
}

Objective chsh_e_bloch_objective() {
  Objective o;
  o.name = "chsh_e_bloch";
  o.parameters = {"alpha"};
  for (const char* n : {"A0", "A1", "B0", "B1"}) {
    o.parameters.push_back(std::string("theta_") + n);
    o.parameters.push_back(std::string("phi_") + n);
  }
  o.lower = {edge};
  o.upper = {pi / 2 - edge};
  for (int i = 0; i < 4; ++i) {
    o.lower.insert(o.lower.end(), {0.0, 0.0});
    o.upper.insert(o.upper.end(), {pi, 2 * pi});
  }
  o.box = [](const std::vector<double>& p) {
    return chsh_quantum_box_bloch(p[0], {p[1], p[2], p[3], p[4], p[5], p[6], p[7], p[8]});
  };
  o.value = [](const MarginalModel& b) { return chsh_entropic(b); };
  return o;
}

Objective chsh_e_angles_objective(double alpha) {
  Objective o;
  o.name = "chsh_e_angles";
  o.parameters = {"theta_A0", "theta_A1", "theta_B0", "theta_B1"};
  o.lower = {-pi, -pi, -pi, -pi};
  o.upper = {pi, pi, pi, pi};
  o.box = [alpha](const std::vector<double>& p) { return chsh_quantum_box(alpha, {p[0], p[1], p[2], p[3]}); };
  o.value = [](const MarginalModel& b) { return chsh_entropic(b); };
  return o;
}

Objective klyachko_e_objective() {
  Objective o;
  o.name = "klyachko_e";
  o.parameters = {"alpha", "theta", "phi"};
  o.lower = {0, 0, 0};
  o.upper = {pi / 2, pi / 2, pi / 2};
  o.box = [](const std::vector<double>& p) { return klyachko_quantum_box(p[0], p[1], p[2]); };
  o.value = [](const MarginalModel& b) { return evaluate(klyachko_inequality(), entropy_vector(b)); };
  return o;
}

Objective klyachko_e_two_detector_objective(double eta) {
  Objective o = klyachko_e_objective();
  o.name = "klyachko_e_two_detector";
  o.box = [eta](const std::vector<double>& p) { return two_detector(klyachko_quantum_box(p[0], p[1], p[2]), eta); };
  return o;
}

Objective chained_objective(int k, double alpha) {
  if (k < 2) throw std::invalid_argument("chained objective needs k >= 2");
  const MarginalScenario sc = chained(k);
  std::vector<EntropicInequality> ineqs;
  for (int i = 1; i <= 2 * k; ++i) ineqs.push_back(ncycle_inequality(sc, i));
  Objective o;
  o.name = "chained:" + std::to_string(k);
  const bool free_alpha = !(alpha > 0);
  if (free_alpha) {
    o.parameters.push_back("alpha");
    o.lower.push_back(edge);
    o.upper.push_back(pi / 2 - edge);
  }
  for (int i = 0; i < 2 * k; ++i) {
    o.parameters.push_back(sc.observables()[static_cast<std::size_t>(i)]);
    o.lower.push_back(-pi);
    o.upper.push_back(pi);
  }
  o.box = [k, alpha, free_alpha](const std::vector<double>& p) {
    if (free_alpha) return chained_quantum_box(p[0], k, std::vector<double>(p.begin() + 1, p.end()));
    return chained_quantum_box(alpha, k, p);
  };
  o.value = [ineqs](const MarginalModel& b) { return max_over(ineqs, b); };
  return o;
}

Objective bilocal_objective(const EntropicInequality& ineq, const std::string& name) {
  Objective o;
  o.name = name;
  o.parameters = {"theta1", "phi1", "theta2", "phi2", "a0_theta", "a0_phi", "a1_theta", "a1_phi",
                  "c0_theta", "c0_phi", "c1_theta", "c1_phi"};
  o.lower.assign(12, 0.0);
  o.upper = {pi / 2, 2 * pi, pi / 2, 2 * pi, pi, 2 * pi, pi, 2 * pi, pi, 2 * pi, pi, 2 * pi};
  o.box = [](const std::vector<double>& p) {
    return bilocal_quantum_box(p[0], p[1], p[2], p[3], {p[4], p[5], p[6], p[7]}, {p[8], p[9], p[10], p[11]});
  };
  o.value = [ineq](const MarginalModel& b) { return evaluate(ineq, entropy_vector(b)); };
  return o;
}

Objective make_objective(const std::string& target) {
  if (target == "chsh_e") return chsh_e_objective();
  if (target == "chsh_e_bloch") return chsh_e_bloch_objective();
  if (target == "klyachko_e") return klyachko_e_objective();
  if (target.rfind("chained:", 0) == 0) {
    std::size_t used = 0;
    const int k = std::stoi(target.substr(8), &used);
    if (used != target.size() - 8) throw std::invalid_argument("bad chained target: " + target);
    return chained_objective(k);
  }
  throw std::invalid_argument("unknown optimization target: " + target);
}

OptimizationReport optimize(const Objective& obj, const NelderMeadOptions& options) {
  return maximize([&](const std::vector<double>& p) { return obj(p); }, obj.lower, obj.upper, options);
}

std::string Table::csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  char buf[64];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.12g", row[i] == 0 ? 0.0 : row[i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::size_t Table::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::out_of_range("no column " + name);
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> g;
  if (!(step > 0) || hi < lo) return g;
  const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) g.push_back(lo + static_cast<double>(i) * step);
  return g;
}

Table scan_fig2a(double step, const NelderMeadOptions& options) {
  Table t{{"alpha", "chsh_e_max", "chsh_at_optimum", "chsh_quantum_max"}, {}};
  NelderMeadOptions opt = options;
  std::vector<double> prev;
  for (double alpha : grid(step, pi / 2 - step / 2, step)) {
    const Objective obj = chsh_e_angles_objective(alpha);
    opt.starts.clear();
    if (!prev.empty()) opt.starts.push_back(prev);
    const auto rep = optimize(obj, opt);
    prev = rep.best_params;
    const double s2 = std::sin(2 * alpha);
    t.rows.push_back({alpha, rep.best_value, chsh(obj.box(rep.best_params)), 2 * std::sqrt(1 + s2 * s2)});
  }
  return t;
}

Table scan_fig2b(int kmax, const NelderMeadOptions& options) {
  Table t{{"k", "chained_e_max"}, {}};
  for (int k = 2; k <= kmax; ++k) {
    const auto rep = optimize(chained_objective(k, pi / 4), options);
    t.rows.push_back({static_cast<double>(k), rep.best_value});
  }
  return t;
}

Table scan_fig3(double step) {
  Table t{{"gamma", "xi", "chsh", "chsh_e", "q", "gain_foster", "gain_cavalcanti", "gain_cavalcanti_y"}, {}};
  const long n = exact_steps(step);
  const long m = grid_count(step, 1.0);
  const Wiring wf = foster_wiring(), wc = cavalcanti_wiring(), wy = cavalcanti_y_wiring();
  for (long i = 0; i <= m; ++i) {
    for (long j = 0; i + j <= m; ++j) {
      const Rational g = grid_value(i, n, step), x = grid_value(j, n, step);
      if (g + x > 1) continue;
      const MarginalModel b = triangle_box(g, x);
      const double q = nonlocal_content(b).q;
      auto gain = [&](const Wiring& w) { return nonlocal_content(wire(b, w)).q - q; };
      t.rows.push_back({g.get_d(), x.get_d(), chsh(b), chsh_entropic(b), q, gain(wf), gain(wc), gain(wy)});
    }
  }
  return t;
}

Table scan_fig4(double step, int dmax) {
  Table t{{"d", "xi", "q", "q_wired", "gain", "chsh_e"}, {}};
  const long n = exact_steps(step);
  const long m = grid_count(step, 1.0);
  for (int d = 2; d <= dmax; ++d) {
    const Wiring w = generalized_wiring(d);
    for (long i = 0; i <= m; ++i) {
      const Rational x = grid_value(i, n, step);
      if (x > 1) continue;
      const MarginalModel b = dfamily_box(x, d);
      const double q = nonlocal_content(b).q, qw = nonlocal_content(wire(b, w)).q;
      t.rows.push_back({static_cast<double>(d), x.get_d(), q, qw, qw - q, chsh_entropic(b)});
    }
  }
  return t;
}

Table scan_fig6(double step) {
  Table t{{"xi", "gamma", "row7", "binosig_residual", "tripartite_local"}, {}};
  const long n = exact_steps(step);
  const long m = grid_count(step, 1.0);
  for (long i = 0; i <= m; ++i) {
    for (long j = 0; i + j <= m; ++j) {
      const Rational x = grid_value(i, n, step), g = grid_value(j, n, step);
      if (x + g > 1) continue;
      const MarginalModel b = nb_box(x, g);
      t.rows.push_back({x.get_d(), g.get_d(), bilocal_row(b, 7), bilocal_marginal_residual(b),
                        is_noncontextual(b).noncontextual ? 1.0 : 0.0});
    }
  }
  return t;
}

Table scan_eta_single(double step, const NelderMeadOptions& options) {
  Table t{{"eta", "klyachko_e_direct", "klyachko_e_linear"}, {}};
  const Objective obj = klyachko_e_objective();
  const auto rep = optimize(obj, options);
  const MarginalModel b = obj.box(rep.best_params);
  const double full = obj.value(b);
  for (double eta : grid(step, 1.0, step)) {
    const double direct = evaluate(klyachko_inequality(), entropy_vector(single_detector(b, eta)));
    t.rows.push_back({eta, direct, eta * full});
  }
  return t;
}

EtaThreshold scan_eta_two(double lo, double hi, double tolerance, const NelderMeadOptions& options) {
  if (!(lo < hi) || lo <= 0 || hi > 1) throw std::invalid_argument("need 0 < lo < hi <= 1");
  EtaThreshold out;
  out.trace.header = {"eta", "klyachko_e_max"};
  std::vector<double> prev;
  NelderMeadOptions first = options;
  // Re-optimizing near the previous optimum needs only a few fresh restarts.
  NelderMeadOptions later = options;
  later.restarts = std::max(1, options.restarts / 10);
  bool seeded = false;
  auto probe = [&](double eta) {
    NelderMeadOptions opt = seeded ? later : first;
    if (!prev.empty()) opt.starts = {prev};
    const auto rep = optimize(klyachko_e_two_detector_objective(eta), opt);
    seeded = true;
    prev = rep.best_params;
    out.trace.rows.push_back({eta, rep.best_value});
    return rep.best_value;
  };
  const double vhi = probe(hi);
  const double vlo = probe(lo);
  if (!(vhi > 0)) throw std::runtime_error("no violation at the upper efficiency");
  if (vlo > 0) throw std::runtime_error("violation persists at the lower efficiency");
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (probe(mid) > 0 ? hi : lo) = mid;
  }
  out.threshold = 0.5 * (lo + hi);
  return out;
}

Table run_scan(const std::string& figure, double step, const NelderMeadOptions& options) {
  auto pick = [&](double dflt) { return step > 0 ? step : dflt; };
  if (figure == "fig2a") return scan_fig2a(pick(pi / 100), options);
  if (figure == "fig2b") return scan_fig2b(10, options);
  if (figure == "fig3") return scan_fig3(pick(0.01));
  if (figure == "fig4") return scan_fig4(pick(0.01));
  if (figure == "fig6") return scan_fig6(pick(0.01));
  if (figure == "eta_single") return scan_eta_single(pick(0.05), options);
  if (figure == "eta_two") {
    auto r = scan_eta_two(0.98, 1.0, pick(1e-5), options);
    r.trace.header.push_back("threshold");
    for (auto& row : r.trace.rows) row.push_back(r.threshold);
    return r.trace;
  }
  throw std::invalid_argument("unknown figure: " + figure);
}

std::string plot_script(const std::string& figure, const std::string& csv_path) {
  std::ostringstream s;
  s << "set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 800,600\n";
  s << "set output '" << figure << ".png'\n";
  const std::string f = "'" + csv_path + "'";
  if (figure == "fig2a") {
    s << "set xlabel 'alpha'\nplot " << f << " using 1:2 with lines, " << f
      << " using 1:(($3)-2)/4 with lines title 'rescaled CHSH - 2'\n";
  } else if (figure == "fig2b") {
    s << "set xlabel 'k'\nplot " << f << " using 1:2 with linespoints\n";
  } else if (figure == "fig3") {
    s << "set xlabel 'gamma'\nset ylabel 'xi'\nset size ratio -1\n"
      << "plot " << f << " using 1:($4>0?$2:1/0) with points pt 7 ps 0.3 title 'CHSH_E > 0', "
      << f << " using 1:($6>1e-12?$2:1/0) with points pt 1 ps 0.5 title 'foster gain > 0', "
      << f << " using 1:($7>1e-12?$2:1/0) with points pt 2 ps 0.5 title 'cavalcanti gain > 0', "
      << f << " using 1:($8>1e-12?$2:1/0) with points pt 6 ps 0.5 title 'cavalcanti_y gain > 0'\n";
  } else if (figure == "fig4") {
    s << "set xlabel 'xi'\nset ylabel 'gain'\nplot for [d=2:5] " << f
      << " using 2:($1==d?$5:1/0) with lines title sprintf('d=%d', d)\n";
  } else if (figure == "fig6") {
    s << "set xlabel 'xi'\nset ylabel 'gamma'\nset size ratio -1\n"
      << "plot " << f << " using 1:($3>0?$2:1/0) with points pt 7 ps 0.3 title 'row 7 > 0', "
      << f << " using 1:($3>0&&$5>0?$2:1/0) with points pt 6 ps 0.6 title 'violating and local'\n";
  } else if (figure == "eta_single") {
    s << "set xlabel 'eta'\nplot " << f << " using 1:2 with linespoints, " << f << " using 1:3 with lines\n";
  } else if (figure == "eta_two") {
    s << "set xlabel 'eta'\nplot " << f << " using 1:2 with points pt 7\n";
  } else {
    throw std::invalid_argument("unknown figure: " + figure);
  }
  return s.str();
}

double BilocalSearchReport::max_violation() const {
  double m = grid_max;
  for (double v : class_optimum) m = std::max(m, v);
  return m;
}

BilocalSearchReport bilocal_quantum_search(const std::vector<EntropicInequality>& all,
                                           const std::vector<EntropicInequality>& representatives,
                                           int grid_per_axis, const NelderMeadOptions& options) {
  if (grid_per_axis < 2) throw std::invalid_argument("grid needs at least two points per axis");
  BilocalSearchReport rep;
  rep.inequalities = all.size();
  rep.grid_max = -std::numeric_limits<double>::infinity();
  const int g = grid_per_axis;
  auto at = [g](int i, double hi) { return hi * i / (g - 1); };
  // Sources in [0, pi/2], measurement polar angles in [0, pi], all phases 0.
  std::vector<int> idx(6, 0);
  for (;;) {
    const MarginalModel b = bilocal_quantum_box(at(idx[0], pi / 2), 0, at(idx[1], pi / 2), 0,
                                                {at(idx[2], pi), 0, at(idx[3], pi), 0},
                                                {at(idx[4], pi), 0, at(idx[5], pi), 0});
    const EntropyVector h = entropy_vector(b);
    for (const auto& e : all) rep.grid_max = std::max(rep.grid_max, evaluate(e, h));
    ++rep.grid_points;
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == g) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  for (std::size_t i = 0; i < representatives.size(); ++i) {
    const auto r = optimize(bilocal_objective(representatives[i], "class" + std::to_string(i + 1)), options);
    rep.class_optimum.push_back(r.best_value);
    rep.reports.push_back(r);
  }
  return rep;
}

}  // namespace entropic
