#include "entropic/linear.hpp"

#include <algorithm>
#include <stdexcept>

namespace entropic {

LinearExpr::LinearExpr(std::initializer_list<std::pair<std::string, Rational>> terms,
                       Rational constant)
    : constant_(std::move(constant)) {
  for (const auto& [name, c] : terms) add(name, c);
}

void LinearExpr::add(const std::string& coord, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = coeffs_.try_emplace(coord, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) coeffs_.erase(it);
  }
}

Rational LinearExpr::coeff(const std::string& coord) const {
  auto it = coeffs_.find(coord);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

LinearExpr& LinearExpr::operator+=(const LinearExpr& o) {
  for (const auto& [name, c] : o.coeffs_) add(name, c);
  constant_ += o.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& o) {
  for (const auto& [name, c] : o.coeffs_) add(name, -c);
  constant_ -= o.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator*=(const Rational& s) {
  if (s == 0) {
    coeffs_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& [name, c] : coeffs_) c *= s;
  constant_ *= s;
  return *this;
}

LinearExpr operator*(const Rational& s, LinearExpr e) { return e *= s; }
LinearExpr operator-(LinearExpr e) { return e *= Rational(-1); }

namespace {

// Positive scale that turns the given entries into coprime integers.
template <typename Range>
Rational canonical_scale(const Range& entries) {
  Integer den_lcm = 1, num_gcd = 0;
  bool any = false;
  for (const Rational* q : entries) {
    if (*q == 0) continue;
    any = true;
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q->get_den_mpz_t());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), q->get_num_mpz_t());
  }
  if (!any) throw std::invalid_argument("cannot canonicalize the zero expression");
  return make_rational(den_lcm, num_gcd);
}

}  // namespace

LinearExpr canonicalize(const LinearExpr& expr) {
  std::vector<const Rational*> entries;
  for (const auto& [name, c] : expr.coeffs()) entries.push_back(&c);
  entries.push_back(&expr.constant());
  Rational s = canonical_scale(entries);
  return s * expr;
}

bool Row::is_zero() const { return constant == 0 && has_zero_coeffs(); }

bool Row::has_zero_coeffs() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& q) { return q == 0; });
}

std::size_t Row::support_size() const {
  return static_cast<std::size_t>(
      std::count_if(coeffs.begin(), coeffs.end(), [](const Rational& q) { return q != 0; }));
}

bool operator<(const Row& a, const Row& b) {
  if (a.coeffs != b.coeffs) return a.coeffs < b.coeffs;
  return a.constant < b.constant;
}

void canonicalize(Row& row) {
  // Fast path: already integral with gcd 1 is the common case in elimination.
  Integer g = 0;
  bool integral = true;
  auto visit = [&](const Rational& q) {
    if (q == 0) return;
    if (q.get_den() != 1) integral = false;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), q.get_num_mpz_t());
  };
  for (const auto& q : row.coeffs) visit(q);
  visit(row.constant);
  if (g == 0) throw std::invalid_argument("cannot canonicalize the zero row");
  if (integral) {
    if (g == 1) return;
    for (auto& q : row.coeffs)
      if (q != 0) q /= g;
    row.constant /= g;
    return;
  }
  std::vector<const Rational*> entries;
  entries.reserve(row.coeffs.size() + 1);
  for (const auto& q : row.coeffs) entries.push_back(&q);
  entries.push_back(&row.constant);
  Rational s = canonical_scale(entries);
  for (auto& q : row.coeffs)
    if (q != 0) q *= s;
  row.constant *= s;
}

std::size_t RowHash::operator()(const Row& r) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](const Rational& q) {
    long v = mpz_get_si(q.get_num_mpz_t()) * 31 + mpz_get_si(q.get_den_mpz_t());
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (const auto& q : r.coeffs) mix(q);
  mix(r.constant);
  return h;
}

LinearSystem::LinearSystem(std::vector<std::string> coordinates) : coords_(std::move(coordinates)) {
  reindex();
  if (index_.size() != coords_.size()) throw std::invalid_argument("duplicate coordinate name");
}

void LinearSystem::reindex() {
  index_.clear();
  for (std::size_t i = 0; i < coords_.size(); ++i) index_.emplace(coords_[i], i);
}

std::size_t LinearSystem::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::invalid_argument("undeclared coordinate: " + name);
  return it->second;
}

Row LinearSystem::to_row(const LinearExpr& expr) const {
  Row r;
  r.coeffs.assign(coords_.size(), Rational(0));
  for (const auto& [name, c] : expr.coeffs()) r.coeffs[index_of(name)] = c;
  r.constant = expr.constant();
  return r;
}

LinearExpr LinearSystem::to_expr(const Row& row) const {
  LinearExpr e;
  for (std::size_t i = 0; i < row.coeffs.size(); ++i) e.add(coords_[i], row.coeffs[i]);
  e.set_constant(row.constant);
  return e;
}

bool LinearSystem::add_inequality(const LinearExpr& expr) { return add_inequality_row(to_row(expr)); }

void LinearSystem::add_equation(const LinearExpr& expr) { add_equation_row(to_row(expr)); }

bool LinearSystem::add_inequality_row(Row row) {
  if (row.coeffs.size() != coords_.size()) throw std::invalid_argument("row width mismatch");
  if (row.has_zero_coeffs() && row.constant <= 0) return false;
  canonicalize(row);
  if (seen_.count(row)) return false;
  seen_.emplace(row, ineqs_.size());
  ineqs_.push_back(std::move(row));
  return true;
}

void LinearSystem::add_equation_row(Row row) {
  if (row.coeffs.size() != coords_.size()) throw std::invalid_argument("row width mismatch");
  if (row.is_zero()) return;
  canonicalize(row);
  eqs_.push_back(std::move(row));
}

std::vector<LinearExpr> LinearSystem::inequalities() const {
  std::vector<LinearExpr> out;
  out.reserve(ineqs_.size());
  for (const auto& r : ineqs_) out.push_back(to_expr(r));
  return out;
}

std::vector<LinearExpr> LinearSystem::equations() const {
  std::vector<LinearExpr> out;
  out.reserve(eqs_.size());
  for (const auto& r : eqs_) out.push_back(to_expr(r));
  return out;
}

void LinearSystem::assign(std::vector<Row> ineqs, std::vector<Row> eqs) {
  ineqs_.clear();
  eqs_.clear();
  seen_.clear();
  for (auto& r : ineqs) add_inequality_row(std::move(r));
  for (auto& r : eqs) add_equation_row(std::move(r));
}

void LinearSystem::drop_coordinate(std::size_t index) {
  auto drop = [index](std::vector<Row>& rows) {
    for (auto& r : rows) {
      if (r.coeffs.at(index) != 0) throw std::logic_error("dropping a coordinate still in use");
      r.coeffs.erase(r.coeffs.begin() + static_cast<std::ptrdiff_t>(index));
    }
  };
  drop(ineqs_);
  drop(eqs_);
  coords_.erase(coords_.begin() + static_cast<std::ptrdiff_t>(index));
  reindex();
  seen_.clear();
  for (std::size_t i = 0; i < ineqs_.size(); ++i) seen_.emplace(ineqs_[i], i);
}

bool LinearSystem::trivially_infeasible() const {
  return std::any_of(ineqs_.begin(), ineqs_.end(),
                     [](const Row& r) { return r.has_zero_coeffs() && r.constant > 0; });
}

}  // namespace entropic
