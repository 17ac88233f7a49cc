#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "entropic/linear.hpp"
#include "entropic/rational.hpp"

namespace entropic {

enum class LPStatus { optimal, unbounded, infeasible };

const char* to_string(LPStatus s);

/// minimize c.x  subject to  A x = b,  x >= 0.   A is row-major rows x cols.
struct StandardFormLP {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> A;
  std::vector<Rational> b;
  std::vector<Rational> c;

  StandardFormLP() = default;
  StandardFormLP(std::size_t r, std::size_t k)
      : rows(r), cols(k), A(r * k, Rational(0)), b(r, Rational(0)), c(k, Rational(0)) {}

  Rational& at(std::size_t r, std::size_t k) { return A[r * cols + k]; }
  const Rational& at(std::size_t r, std::size_t k) const { return A[r * cols + k]; }
};

struct StandardFormSolution {
  LPStatus status = LPStatus::infeasible;
  Rational value = 0;
  std::vector<Rational> x;  // filled when optimal
  std::size_t pivots = 0;
};

/// Exact two-phase primal simplex with Bland's rule, so pivoting is
/// deterministic and never cycles.
StandardFormSolution solve_standard_form(const StandardFormLP& lp);

/// Phase one only: is { A x = b, x >= 0 } nonempty? Returns a feasible x
/// through `point` when requested.
bool standard_form_feasible(const StandardFormLP& lp, std::vector<Rational>* point = nullptr);

enum class Direction { maximize, minimize };

struct LPResult {
  LPStatus status = LPStatus::infeasible;
  Rational value = 0;                       // objective incl. its constant, when optimal
  std::map<std::string, Rational> witness;  // every system coordinate, when optimal
};

/// Optimizes an affine objective over a LinearSystem (all coordinates free).
/// Infeasible and unbounded problems are reported via status.
LPResult lp_solve(const LinearExpr& objective, Direction direction, const LinearSystem& system);

}  // namespace entropic
