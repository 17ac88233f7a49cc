#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "entropic/linear.hpp"

namespace entropic {

/// One Fourier-Motzkin step. Equations that mention the coordinate are used
/// for Gaussian substitution first; only if none does are inequalities
/// combined pairwise. The result describes exactly the projection of the
/// input polyhedron along `coordinate`, which is removed from the system.
LinearSystem fm_eliminate(const LinearSystem& system, const std::string& coordinate);

/// True iff expr <= 0 holds on every point of the system (LP certificate).
/// An infeasible system implies everything.
bool is_implied(const LinearExpr& expr, const LinearSystem& system);

/// Same as is_implied, through a Farkas certificate on the dense rows.
/// Assumes `rows` is feasible.
bool farkas_implied(const Row& candidate, const std::vector<const Row*>& rows,
                    const std::vector<Row>& equations);

/// Removes every inequality implied by the others, one at a time in stored
/// order, each check an exact LP. The solution set is unchanged. An
/// infeasible system collapses to the single inequality 1 <= 0.
LinearSystem remove_redundant(const LinearSystem& system);

/// Inequalities that hold with equality on the whole polyhedron, returned
/// as equations; the input must be feasible.
std::vector<Row> implicit_equations(const LinearSystem& system);

struct ProjectionProgress {
  std::string eliminated;
  std::size_t remaining_coordinates = 0;
  std::size_t combinations = 0;  // rows produced before redundancy removal
  std::size_t inequalities = 0;  // rows kept after it
  std::size_t equations = 0;
};

struct ProjectionOptions {
  /// Drop combinations whose origin set exceeds (eliminated steps + 1);
  /// such rows are always redundant.
  bool history_pruning = true;
  /// LP-based redundancy removal after every elimination step.
  bool redundancy_each_step = true;
  /// Abort when one step produces more candidate rows than this.
  std::size_t max_rows = 250000;
  std::function<void(const ProjectionProgress&)> on_step;
};

class ResourceCapExceeded : public std::runtime_error {
 public:
  ResourceCapExceeded(const std::string& what, std::vector<ProjectionProgress> log)
      : std::runtime_error(what), log_(std::move(log)) {}
  const std::vector<ProjectionProgress>& progress() const { return log_; }

 private:
  std::vector<ProjectionProgress> log_;
};

/// Eliminates the given coordinates. Each step picks, among the remaining
/// ones, a coordinate present in some equation if there is one, otherwise
/// the coordinate minimizing (#positive) x (#negative) occurrences; ties go
/// to the earliest coordinate in system order.
LinearSystem project_out(const LinearSystem& system, const std::vector<std::string>& eliminate,
                         const ProjectionOptions& options = {});

}  // namespace entropic
