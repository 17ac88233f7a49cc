#include "entropic/projection.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "entropic/simplex.hpp"

namespace entropic {

namespace {

Row substitute(const Row& target, const Row& eq, std::size_t col) {
  // target - (target[col] / eq[col]) * eq, rescaled to keep target's sign.
  Row out = target;
  if (target.coeffs[col] == 0) return out;
  Rational f = target.coeffs[col] / eq.coeffs[col];
  for (std::size_t k = 0; k < out.coeffs.size(); ++k)
    if (eq.coeffs[k] != 0) out.coeffs[k] -= f * eq.coeffs[k];
  out.constant -= f * eq.constant;
  out.coeffs[col] = 0;
  return out;
}

Row combine(const Row& pos, const Row& neg, std::size_t col) {
  // pos[col] > 0 > neg[col]; the combination cancels col.
  Rational wp = -neg.coeffs[col], wn = pos.coeffs[col];
  Row out;
  out.coeffs.resize(pos.coeffs.size());
  for (std::size_t k = 0; k < pos.coeffs.size(); ++k) {
    if (pos.coeffs[k] == 0 && neg.coeffs[k] == 0) continue;
    out.coeffs[k] = wp * pos.coeffs[k] + wn * neg.coeffs[k];
  }
  out.coeffs[col] = 0;
  out.constant = wp * pos.constant + wn * neg.constant;
  return out;
}

void erase_column(std::vector<Row>& rows, std::size_t col) {
  for (auto& r : rows) r.coeffs.erase(r.coeffs.begin() + static_cast<std::ptrdiff_t>(col));
}

// Index of the equation used to substitute `col`: smallest support wins.
std::size_t pick_equation(const std::vector<Row>& eqs, std::size_t col) {
  std::size_t best = eqs.size(), best_support = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    if (eqs[i].coeffs[col] == 0) continue;
    std::size_t s = eqs[i].support_size();
    if (s < best_support) {
      best = i;
      best_support = s;
    }
  }
  return best;
}

using Bits = std::vector<std::uint64_t>;

Bits bits_union(const Bits& a, const Bits& b) {
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] | b[i];
  return out;
}

std::size_t bits_count(const Bits& a) {
  std::size_t n = 0;
  for (auto w : a) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

struct Working {
  std::vector<std::string> coords;
  std::vector<Row> ineqs;
  std::vector<Bits> history;
  std::vector<Row> eqs;
  bool infeasible = false;
};

// Adds a row unless trivially true; a trivially false row marks infeasibility.
// Duplicates keep the smaller history.
struct RowSink {
  Working& w;
  std::unordered_map<Row, std::size_t, RowHash> seen;

  explicit RowSink(Working& work) : w(work) {}

  void add(Row r, Bits h) {
    if (r.has_zero_coeffs()) {
      if (r.constant > 0) w.infeasible = true;
      return;
    }
    canonicalize(r);
    auto it = seen.find(r);
    if (it != seen.end()) {
      if (bits_count(h) < bits_count(w.history[it->second])) w.history[it->second] = std::move(h);
      return;
    }
    seen.emplace(r, w.ineqs.size());
    w.ineqs.push_back(std::move(r));
    w.history.push_back(std::move(h));
  }
};

void substitute_equation(Working& w, std::size_t col) {
  std::size_t ei = pick_equation(w.eqs, col);
  Row eq = w.eqs[ei];
  w.eqs.erase(w.eqs.begin() + static_cast<std::ptrdiff_t>(ei));
  for (auto& e : w.eqs) {
    e = substitute(e, eq, col);
  }
  std::vector<Row> eqs;
  for (auto& e : w.eqs) {
    if (e.has_zero_coeffs()) {
      if (e.constant != 0) w.infeasible = true;
      continue;
    }
    canonicalize(e);
    eqs.push_back(std::move(e));
  }
  w.eqs = std::move(eqs);

  std::vector<Row> old = std::move(w.ineqs);
  std::vector<Bits> old_h = std::move(w.history);
  w.ineqs.clear();
  w.history.clear();
  RowSink sink(w);
  for (std::size_t i = 0; i < old.size(); ++i) sink.add(substitute(old[i], eq, col), std::move(old_h[i]));
}

std::size_t combine_column(Working& w, std::size_t col, std::size_t fm_steps, const ProjectionOptions& opt,
                           const std::vector<ProjectionProgress>& log) {
  std::vector<std::size_t> pos, neg, zero;
  for (std::size_t i = 0; i < w.ineqs.size(); ++i) {
    const auto& c = w.ineqs[i].coeffs[col];
    if (c > 0) pos.push_back(i);
    else if (c < 0) neg.push_back(i);
    else zero.push_back(i);
  }
  if (pos.size() * neg.size() > opt.max_rows)
    throw ResourceCapExceeded("elimination of " + w.coords[col] + " needs " +
                                  std::to_string(pos.size() * neg.size()) + " combinations",
                              log);

  std::vector<Row> old = std::move(w.ineqs);
  std::vector<Bits> old_h = std::move(w.history);
  w.ineqs.clear();
  w.history.clear();
  RowSink sink(w);
  for (std::size_t i : zero) sink.add(std::move(old[i]), std::move(old_h[i]));
  const std::size_t limit = fm_steps + 1;  // fm_steps counts this step too
  std::size_t produced = 0;
  for (std::size_t p : pos) {
    for (std::size_t n : neg) {
      Bits h = bits_union(old_h[p], old_h[n]);
      if (opt.history_pruning && bits_count(h) > limit) continue;
      ++produced;
      sink.add(combine(old[p], old[n], col), std::move(h));
    }
  }
  return produced + zero.size();
}

StandardFormLP farkas_lp(const Row& candidate, const std::vector<const Row*>& rows,
                         const std::vector<Row>& equations) {
  const std::size_t d = candidate.coeffs.size();
  const std::size_t cols = rows.size() + 2 * equations.size() + 1;
  StandardFormLP lp(d + 1, cols);
  std::size_t j = 0;
  for (const Row* r : rows) {
    for (std::size_t k = 0; k < d; ++k)
      if (r->coeffs[k] != 0) lp.at(k, j) = r->coeffs[k];
    if (r->constant != 0) lp.at(d, j) = -r->constant;
    ++j;
  }
  for (const Row& e : equations) {
    for (std::size_t k = 0; k < d; ++k) {
      if (e.coeffs[k] == 0) continue;
      lp.at(k, j) = e.coeffs[k];
      lp.at(k, j + 1) = -e.coeffs[k];
    }
    if (e.constant != 0) {
      lp.at(d, j) = -e.constant;
      lp.at(d, j + 1) = e.constant;
    }
    j += 2;
  }
  lp.at(d, j) = 1;  // slack on the constant row
  for (std::size_t k = 0; k < d; ++k) lp.b[k] = candidate.coeffs[k];
  lp.b[d] = -candidate.constant;
  return lp;
}

Row infeasible_row(std::size_t d) {
  Row r;
  r.coeffs.assign(d, Rational(0));
  r.constant = 1;
  return r;
}

bool rows_feasible(const std::vector<const Row*>& rows, const std::vector<Row>& eqs, std::size_t d) {
  return !farkas_implied(infeasible_row(d), rows, eqs);
}

// Sequential LP pruning of w.ineqs.
void prune_redundant(Working& w) {
  std::vector<char> alive(w.ineqs.size(), 1);
  std::vector<const Row*> others;
  others.reserve(w.ineqs.size());
  for (std::size_t i = 0; i < w.ineqs.size(); ++i) {
    others.clear();
    for (std::size_t j = 0; j < w.ineqs.size(); ++j)
      if (j != i && alive[j]) others.push_back(&w.ineqs[j]);
    if (farkas_implied(w.ineqs[i], others, w.eqs)) alive[i] = 0;
  }
  std::vector<Row> rows;
  std::vector<Bits> hist;
  for (std::size_t i = 0; i < w.ineqs.size(); ++i) {
    if (!alive[i]) continue;
    rows.push_back(std::move(w.ineqs[i]));
    hist.push_back(std::move(w.history[i]));
  }
  w.ineqs = std::move(rows);
  w.history = std::move(hist);
}

LinearSystem to_system(Working& w) {
  LinearSystem out(w.coords);
  if (w.infeasible) {
    out.assign({infeasible_row(w.coords.size())}, {});
    return out;
  }
  out.assign(std::move(w.ineqs), std::move(w.eqs));
  return out;
}

Working from_system(const LinearSystem& s) {
  Working w;
  w.coords = s.coordinates();
  w.ineqs = s.inequality_rows();
  w.eqs = s.equation_rows();
  const std::size_t words = (w.ineqs.size() + 63) / 64;
  for (std::size_t i = 0; i < w.ineqs.size(); ++i) {
    Bits b(std::max<std::size_t>(words, 1), 0);
    b[i / 64] |= std::uint64_t{1} << (i % 64);
    w.history.push_back(std::move(b));
  }
  w.infeasible = s.trivially_infeasible();
  return w;
}

}  // namespace

bool farkas_implied(const Row& candidate, const std::vector<const Row*>& rows,
                    const std::vector<Row>& equations) {
  return standard_form_feasible(farkas_lp(candidate, rows, equations));
}

LinearSystem fm_eliminate(const LinearSystem& system, const std::string& coordinate) {
  const std::size_t col = system.index_of(coordinate);
  Working w = from_system(system);
  ProjectionOptions opt;
  opt.history_pruning = false;
  opt.max_rows = std::numeric_limits<std::size_t>::max();
  if (pick_equation(w.eqs, col) < w.eqs.size()) substitute_equation(w, col);
  else combine_column(w, col, 1, opt, {});
  erase_column(w.ineqs, col);
  erase_column(w.eqs, col);
  w.coords.erase(w.coords.begin() + static_cast<std::ptrdiff_t>(col));
  return to_system(w);
}

bool is_implied(const LinearExpr& expr, const LinearSystem& system) {
  LPResult r = lp_solve(expr, Direction::maximize, system);
  if (r.status == LPStatus::infeasible) return true;
  if (r.status == LPStatus::unbounded) return false;
  return r.value <= 0;
}

LinearSystem remove_redundant(const LinearSystem& system) {
  Working w = from_system(system);
  std::vector<const Row*> all;
  for (const auto& r : w.ineqs) all.push_back(&r);
  if (w.infeasible || !rows_feasible(all, w.eqs, w.coords.size())) {
    w.infeasible = true;
    return to_system(w);
  }
  prune_redundant(w);
  return to_system(w);
}

std::vector<Row> implicit_equations(const LinearSystem& system) {
  std::vector<Row> out;
  std::vector<const Row*> all;
  for (const auto& r : system.inequality_rows()) all.push_back(&r);
  for (const auto& r : system.inequality_rows()) {
    Row neg = r;
    for (auto& q : neg.coeffs) q = -q;
    neg.constant = -neg.constant;
    if (farkas_implied(neg, all, system.equation_rows())) out.push_back(r);
  }
  return out;
}

LinearSystem project_out(const LinearSystem& system, const std::vector<std::string>& eliminate,
                         const ProjectionOptions& options) {
  Working w = from_system(system);
  std::vector<std::string> pending = eliminate;
  for (const auto& name : pending) (void)system.index_of(name);
  std::vector<ProjectionProgress> log;
  std::size_t fm_steps = 0;

  {
    std::vector<const Row*> all;
    for (const auto& r : w.ineqs) all.push_back(&r);
    if (!w.infeasible && !rows_feasible(all, w.eqs, w.coords.size())) w.infeasible = true;
  }

  while (!pending.empty() && !w.infeasible) {
    auto col_of = [&](const std::string& name) {
      return static_cast<std::size_t>(std::find(w.coords.begin(), w.coords.end(), name) - w.coords.begin());
    };
    // Choose the next coordinate.
    std::size_t best_pending = 0, best_col = 0;
    bool best_has_eq = false;
    std::size_t best_cost = std::numeric_limits<std::size_t>::max();
    for (std::size_t pi = 0; pi < pending.size(); ++pi) {
      std::size_t col = col_of(pending[pi]);
      bool has_eq = pick_equation(w.eqs, col) < w.eqs.size();
      std::size_t np = 0, nn = 0;
      for (const auto& r : w.ineqs) {
        if (r.coeffs[col] > 0) ++np;
        else if (r.coeffs[col] < 0) ++nn;
      }
      std::size_t cost = np * nn;
      bool better = false;
      if (has_eq != best_has_eq) better = has_eq;
      else if (cost != best_cost) better = cost < best_cost;
      else better = col < best_col;
      if (pi == 0 || better) {
        best_pending = pi;
        best_col = col;
        best_has_eq = has_eq;
        best_cost = cost;
      }
    }

    ProjectionProgress step;
    step.eliminated = pending[best_pending];
    if (best_has_eq) {
      substitute_equation(w, best_col);
      step.combinations = w.ineqs.size();
    } else {
      ++fm_steps;
      step.combinations = combine_column(w, best_col, fm_steps, options, log);
    }
    erase_column(w.ineqs, best_col);
    erase_column(w.eqs, best_col);
    w.coords.erase(w.coords.begin() + static_cast<std::ptrdiff_t>(best_col));
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best_pending));

    if (options.redundancy_each_step && !w.infeasible && !best_has_eq) prune_redundant(w);

    step.remaining_coordinates = w.coords.size();
    step.inequalities = w.ineqs.size();
    step.equations = w.eqs.size();
    log.push_back(step);
    if (options.on_step) options.on_step(step);
  }
  if (options.redundancy_each_step && !w.infeasible) prune_redundant(w);
  return to_system(w);
}

}  // namespace entropic
