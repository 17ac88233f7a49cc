#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "entropic/rational.hpp"

namespace entropic {

/// Sparse affine expression sum_k coeffs[k] * x_k + constant over named
/// coordinates. Zero coefficients are never stored.
class LinearExpr {
 public:
  LinearExpr() = default;
  LinearExpr(std::initializer_list<std::pair<std::string, Rational>> terms,
             Rational constant = 0);

  void add(const std::string& coord, const Rational& c);
  void set_constant(Rational c) { constant_ = std::move(c); }

  const std::map<std::string, Rational>& coeffs() const { return coeffs_; }
  const Rational& constant() const { return constant_; }
  Rational coeff(const std::string& coord) const;
  bool is_zero() const { return coeffs_.empty() && constant_ == 0; }

  LinearExpr& operator+=(const LinearExpr& o);
  LinearExpr& operator-=(const LinearExpr& o);
  LinearExpr& operator*=(const Rational& s);

  friend bool operator==(const LinearExpr& a, const LinearExpr& b) {
    return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
  }

 private:
  std::map<std::string, Rational> coeffs_;
  Rational constant_ = 0;
};

LinearExpr operator*(const Rational& s, LinearExpr e);
LinearExpr operator-(LinearExpr e);

/// Scales by the unique positive rational that makes every entry
/// (coefficients and constant) an integer with collective gcd 1.
/// Throws std::invalid_argument on the identically-zero expression.
LinearExpr canonicalize(const LinearExpr& expr);

/// Dense row over a LinearSystem's coordinate list: coeffs . x + constant.
struct Row {
  std::vector<Rational> coeffs;
  Rational constant = 0;

  bool is_zero() const;
  bool has_zero_coeffs() const;
  std::size_t support_size() const;
  friend bool operator==(const Row& a, const Row& b) {
    return a.constant == b.constant && a.coeffs == b.coeffs;
  }
  friend bool operator<(const Row& a, const Row& b);
};

/// In-place canonical scaling of a dense row (same rule as the sparse form).
void canonicalize(Row& row);

struct RowHash {
  std::size_t operator()(const Row& r) const noexcept;
};

/// A polyhedron { x : ineq(x) <= 0 for every inequality, eq(x) = 0 for
/// every equation } over an ordered coordinate list.
///
/// Inequalities are stored canonically scaled; adding one that is already
/// present is a no-op. Equations are stored as given (canonically scaled).
class LinearSystem {
 public:
  LinearSystem() = default;
  explicit LinearSystem(std::vector<std::string> coordinates);

  const std::vector<std::string>& coordinates() const { return coords_; }
  std::size_t dimension() const { return coords_.size(); }
  bool has_coordinate(const std::string& name) const { return index_.count(name) != 0; }
  std::size_t index_of(const std::string& name) const;

  /// Returns false if the inequality was a duplicate or trivially true (0 <= c, c <= 0).
  bool add_inequality(const LinearExpr& expr);
  void add_equation(const LinearExpr& expr);
  bool add_inequality_row(Row row);
  void add_equation_row(Row row);

  std::size_t num_inequalities() const { return ineqs_.size(); }
  std::size_t num_equations() const { return eqs_.size(); }
  const std::vector<Row>& inequality_rows() const { return ineqs_; }
  const std::vector<Row>& equation_rows() const { return eqs_; }
  LinearExpr inequality(std::size_t i) const { return to_expr(ineqs_.at(i)); }
  LinearExpr equation(std::size_t i) const { return to_expr(eqs_.at(i)); }
  std::vector<LinearExpr> inequalities() const;
  std::vector<LinearExpr> equations() const;

  Row to_row(const LinearExpr& expr) const;
  LinearExpr to_expr(const Row& row) const;

  /// Replaces the rows wholesale (used by the elimination pipeline).
  void assign(std::vector<Row> ineqs, std::vector<Row> eqs);

  /// Drops a coordinate whose column is zero in every row.
  void drop_coordinate(std::size_t index);

  /// True when some stored inequality reads "c <= 0" with c > 0.
  bool trivially_infeasible() const;

 private:
  void reindex();

  std::vector<std::string> coords_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Row> ineqs_;
  std::vector<Row> eqs_;
  std::unordered_map<Row, std::size_t, RowHash> seen_;
};

}  // namespace entropic
