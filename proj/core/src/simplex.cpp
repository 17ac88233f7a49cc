#include "entropic/simplex.hpp"

#include <limits>
#include <optional>
#include <stdexcept>

namespace entropic {

const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::optimal: return "optimal";
    case LPStatus::unbounded: return "unbounded";
    case LPStatus::infeasible: return "infeasible";
  }
  return "?";
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Dense tableau. Row i holds the basic representation of constraint i with
// the right-hand side in the last slot; `cost` holds reduced costs and, in
// its last slot, minus the current objective value.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), rows_(rows, std::vector<Rational>(cols + 1, Rational(0))),
        cost_(cols + 1, Rational(0)), basis_(rows, kNone) {}

  std::vector<Rational>& row(std::size_t i) { return rows_[i]; }
  std::vector<Rational>& cost() { return cost_; }
  std::size_t& basic(std::size_t i) { return basis_[i]; }
  std::size_t num_rows() const { return m_; }
  std::size_t num_cols() const { return n_; }
  std::size_t pivots() const { return pivots_; }

  void pivot(std::size_t r, std::size_t c) {
    ++pivots_;
    auto& pr = rows_[r];
    if (pr[c] != 1) {
      Rational inv = 1 / pr[c];
      for (auto& v : pr)
        if (v != 0) v *= inv;
    }
    nz_.clear();
    for (std::size_t j = 0; j <= n_; ++j)
      if (pr[j] != 0) nz_.push_back(j);
    auto eliminate = [&](std::vector<Rational>& target) {
      if (target[c] == 0) return;
      f_ = target[c];
      for (std::size_t j : nz_) {
        tmp_ = f_ * pr[j];
        target[j] -= tmp_;
      }
    };
    for (std::size_t i = 0; i < m_; ++i)
      if (i != r) eliminate(rows_[i]);
    eliminate(cost_);
    basis_[r] = c;
  }

  // Runs primal simplex over the columns flagged in `allowed`.
  LPStatus optimize(const std::vector<char>& allowed) {
    for (;;) {
      std::size_t enter = kNone;
      for (std::size_t j = 0; j < n_; ++j) {
        if (allowed[j] && cost_[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == kNone) return LPStatus::optimal;
      std::size_t leave = kNone;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        const Rational& a = rows_[i][enter];
        if (a <= 0) continue;
        ratio_ = rows_[i][n_] / a;
        if (leave == kNone || ratio_ < best || (ratio_ == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio_;
        }
      }
      if (leave == kNone) return LPStatus::unbounded;
      pivot(leave, enter);
    }
  }

  void remove_row(std::size_t i) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
    --m_;
  }

 private:
  std::size_t m_, n_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> cost_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nz_;
  Rational f_, tmp_, ratio_;
  std::size_t pivots_ = 0;
};

struct PhaseOne {
  std::optional<Tableau> tableau;
  std::size_t structural = 0;  // columns below this index are the LP's own
  bool feasible = false;
};

// Builds the tableau with b >= 0, reusing existing unit columns as the
// starting basis and adding artificials only where needed, then drives
// the artificial sum to zero.
PhaseOne phase_one(const StandardFormLP& lp) {
  const std::size_t m = lp.rows, n = lp.cols;
  if (lp.A.size() != m * n || lp.b.size() != m || lp.c.size() != n)
    throw std::invalid_argument("standard form LP has inconsistent sizes");

  std::vector<int> sign(m, 1);
  for (std::size_t i = 0; i < m; ++i)
    if (lp.b[i] < 0) sign[i] = -1;

  // A column is a usable unit column for row i if it has +1 (after sign
  // flip) in row i and zeros elsewhere.
  std::vector<std::size_t> unit_for_row(m, kNone);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t hit = kNone;
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      const Rational& a = lp.at(i, j);
      if (a == 0) continue;
      if (hit != kNone || a * sign[i] != 1) ok = false;
      hit = i;
    }
    if (ok && hit != kNone && unit_for_row[hit] == kNone) unit_for_row[hit] = j;
  }
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (unit_for_row[i] == kNone) ++n_art;

  PhaseOne out;
  out.structural = n;
  out.tableau.emplace(m, n + n_art);
  Tableau& t = *out.tableau;
  std::size_t next_art = n;
  for (std::size_t i = 0; i < m; ++i) {
    auto& r = t.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& a = lp.at(i, j);
      if (a != 0) r[j] = sign[i] > 0 ? a : Rational(-a);
    }
    r[n + n_art] = sign[i] > 0 ? lp.b[i] : Rational(-lp.b[i]);
    if (unit_for_row[i] == kNone) {
      r[next_art] = 1;
      t.basic(i) = next_art++;
    } else {
      t.basic(i) = unit_for_row[i];
    }
  }

  std::vector<char> allowed(n + n_art, 1);
  if (n_art > 0) {
    // Phase-one cost: sum of artificials, expressed in reduced form.
    auto& cost = t.cost();
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basic(i) < n) continue;
      const auto& r = t.row(i);
      for (std::size_t j = 0; j <= n + n_art; ++j)
        if (r[j] != 0 && (j < n || j == n + n_art)) cost[j] -= r[j];
    }
    t.optimize(allowed);
    if (t.cost()[n + n_art] != 0) return out;  // artificial sum stays positive

    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < t.num_rows();) {
      if (t.basic(i) < n) {
        ++i;
        continue;
      }
      std::size_t col = kNone;
      for (std::size_t j = 0; j < n; ++j)
        if (t.row(i)[j] != 0) {
          col = j;
          break;
        }
      if (col == kNone) {
        t.remove_row(i);
        continue;
      }
      t.pivot(i, col);
      ++i;
    }
  }
  out.feasible = true;
  return out;
}

}  // namespace

bool standard_form_feasible(const StandardFormLP& lp, std::vector<Rational>* point) {
  PhaseOne p1 = phase_one(lp);
  if (!p1.feasible) return false;
  if (point) {
    Tableau& t = *p1.tableau;
    point->assign(lp.cols, Rational(0));
    const std::size_t rhs = t.num_cols();
    for (std::size_t i = 0; i < t.num_rows(); ++i)
      if (t.basic(i) < lp.cols) (*point)[t.basic(i)] = t.row(i)[rhs];
  }
  return true;
}

StandardFormSolution solve_standard_form(const StandardFormLP& lp) {
  StandardFormSolution sol;
  PhaseOne p1 = phase_one(lp);
  if (!p1.feasible) {
    sol.status = LPStatus::infeasible;
    sol.pivots = p1.tableau->pivots();
    return sol;
  }
  Tableau& t = *p1.tableau;
  const std::size_t n = lp.cols, total = t.num_cols();

  auto& cost = t.cost();
  for (auto& v : cost) v = 0;
  for (std::size_t j = 0; j < n; ++j) cost[j] = lp.c[j];
  for (std::size_t i = 0; i < t.num_rows(); ++i) {
    const std::size_t bj = t.basic(i);
    if (cost[bj] == 0) continue;
    Rational f = cost[bj];
    const auto& r = t.row(i);
    for (std::size_t j = 0; j <= total; ++j)
      if (r[j] != 0) cost[j] -= f * r[j];
  }
  std::vector<char> allowed(total, 0);
  for (std::size_t j = 0; j < n; ++j) allowed[j] = 1;

  sol.status = t.optimize(allowed);
  sol.pivots = t.pivots();
  if (sol.status != LPStatus::optimal) return sol;
  sol.value = -cost[total];
  sol.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < t.num_rows(); ++i)
    if (t.basic(i) < n) sol.x[t.basic(i)] = t.row(i)[total];
  return sol;
}

LPResult lp_solve(const LinearExpr& objective, Direction direction, const LinearSystem& system) {
  const auto& coords = system.coordinates();
  const std::size_t d = coords.size();
  const auto& ineqs = system.inequality_rows();
  const auto& eqs = system.equation_rows();
  Row obj = system.to_row(objective);

  // Columns: x+ (d), x- (d), one slack per inequality.
  const std::size_t m = ineqs.size() + eqs.size();
  StandardFormLP lp(m, 2 * d + ineqs.size());
  std::size_t r = 0;
  for (const auto& row : ineqs) {
    for (std::size_t k = 0; k < d; ++k) {
      if (row.coeffs[k] == 0) continue;
      lp.at(r, k) = row.coeffs[k];
      lp.at(r, d + k) = -row.coeffs[k];
    }
    lp.at(r, 2 * d + r) = 1;
    lp.b[r] = -row.constant;
    ++r;
  }
  for (const auto& row : eqs) {
    for (std::size_t k = 0; k < d; ++k) {
      if (row.coeffs[k] == 0) continue;
      lp.at(r, k) = row.coeffs[k];
      lp.at(r, d + k) = -row.coeffs[k];
    }
    lp.b[r] = -row.constant;
    ++r;
  }
  const int s = direction == Direction::maximize ? -1 : 1;
  for (std::size_t k = 0; k < d; ++k) {
    lp.c[k] = s * obj.coeffs[k];
    lp.c[d + k] = -s * obj.coeffs[k];
  }

  StandardFormSolution sol = solve_standard_form(lp);
  LPResult out;
  out.status = sol.status;
  if (sol.status != LPStatus::optimal) return out;
  out.value = s * sol.value + obj.constant;
  for (std::size_t k = 0; k < d; ++k) out.witness[coords[k]] = sol.x[k] - sol.x[d + k];
  return out;
}

}  // namespace entropic
