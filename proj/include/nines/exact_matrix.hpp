#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nines/error.hpp"
#include "nines/rational.hpp"

namespace nines {

class ExactMatrix {
public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  ExactMatrix(std::initializer_list<std::initializer_list<Rational>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DomainError("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<Rational> multiply(std::span<const Rational> x) const {
    if (x.size() != cols_) throw DomainError("matrix-vector dimension mismatch");
    std::vector<Rational> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if ((*this)(r, c) != 0 && x[c] != 0) out[r] += (*this)(r, c) * x[c];
    return out;
  }

  void swap_rows(std::size_t r1, std::size_t r2) {
    if (r1 == r2) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(r1, c), (*this)(r2, c));
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

// In-place reduced row echelon form. Pivots are searched column by column in
// `column_order` (all columns, ascending, when empty); columns absent from the
// order never become pivots. Returns the pivot column of each leading row.
inline std::vector<std::size_t> rref(ExactMatrix& m, std::span<const std::size_t> column_order = {}) {
  std::vector<std::size_t> order(column_order.begin(), column_order.end());
  if (order.empty())
    for (std::size_t c = 0; c < m.cols(); ++c) order.push_back(c);
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col : order) {
    if (row == m.rows()) break;
    std::size_t p = row;
    while (p < m.rows() && m(p, col) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(row, p);
    const Rational inv = Rational(1) / m(row, col);
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (m(row, c) != 0) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      const Rational f = m(r, col);
      for (std::size_t c = 0; c < m.cols(); ++c)
        if (m(row, c) != 0) m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

struct SolveResult {
  enum class Kind { unique, inconsistent, underdetermined };

  Kind kind = Kind::inconsistent;
  // Particular solution (unique or underdetermined).
  std::vector<Rational> solution;
  // Basis of {x : A x = 0}; empty unless underdetermined.
  std::vector<std::vector<Rational>> nullspace;
};

// Gauss-Jordan elimination over Q.
inline SolveResult exact_solve(const ExactMatrix& a, std::span<const Rational> b) {
  if (b.size() != a.rows()) throw DomainError("exact_solve: right-hand side has wrong length");
  const std::size_t n = a.cols();
  ExactMatrix aug(a.rows(), n + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    aug(r, n) = b[r];
  }
  std::vector<std::size_t> order(n);
  for (std::size_t c = 0; c < n; ++c) order[c] = c;
  const auto pivots = rref(aug, order);

  SolveResult res;
  for (std::size_t r = pivots.size(); r < aug.rows(); ++r)
    if (aug(r, n) != 0) return res;

  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;

  res.solution.assign(n, Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) res.solution[pivots[r]] = aug(r, n);

  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(n, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -aug(r, free);
    res.nullspace.push_back(std::move(v));
  }
  res.kind = res.nullspace.empty() ? SolveResult::Kind::unique : SolveResult::Kind::underdetermined;
  return res;
}

}  // namespace nines
