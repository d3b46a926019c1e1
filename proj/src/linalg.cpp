#include "snacert/linalg.hpp"

#include <stdexcept>

namespace snacert::linalg {

RationalMatrix identity(std::size_t n) {
  RationalMatrix m = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

RationalMatrix zeros(std::size_t rows, std::size_t cols) {
  return RationalMatrix(rows, RationalVector(cols));
}

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.empty()) return {};
  const std::size_t inner = a.front().size();
  if (inner != b.size()) throw std::invalid_argument("multiply: shape mismatch");
  const std::size_t cols = b.empty() ? 0 : b.front().size();
  RationalMatrix c = zeros(a.size(), cols);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (!b[k][j].is_zero()) c[i][j] += a[i][k] * b[k][j];
      }
    }
  }
  return c;
}

RationalVector apply(const RationalMatrix& a, std::span<const Rational> x) {
  RationalVector y(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) y[i] = dot(a[i], x);
  return y;
}

RationalMatrix transpose(const RationalMatrix& a) {
  if (a.empty()) return {};
  RationalMatrix t = zeros(a.front().size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  }
  return t;
}

RationalMatrix subtract(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("subtract: shape mismatch");
  RationalMatrix c = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) throw std::invalid_argument("subtract: shape mismatch");
    for (std::size_t j = 0; j < a[i].size(); ++j) c[i][j] -= b[i][j];
  }
  return c;
}

bool is_zero(const RationalMatrix& a) {
  for (const auto& row : a) {
    for (const auto& x : row) {
      if (!x.is_zero()) return false;
    }
  }
  return true;
}

namespace {

// Reduces [a | b] to row echelon form in place; returns pivot columns.
std::vector<std::size_t> eliminate(RationalMatrix& a, RationalVector* b) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  const std::size_t rows = a.size();
  const std::size_t cols = a.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    if (b) std::swap((*b)[p], (*b)[r]);
    const Rational inv = Rational(1) / a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
    if (b) (*b)[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      const Rational f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) {
        if (!a[r][j].is_zero()) a[i][j].sub_mul(f, a[r][j]);
      }
      if (b) (*b)[i].sub_mul(f, (*b)[r]);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank(RationalMatrix a) { return eliminate(a, nullptr).size(); }

std::optional<RationalVector> solve(RationalMatrix a, RationalVector b) {
  if (a.size() != b.size()) throw std::invalid_argument("solve: shape mismatch");
  const std::size_t cols = a.empty() ? 0 : a.front().size();
  const auto pivots = eliminate(a, &b);
  for (std::size_t i = pivots.size(); i < b.size(); ++i) {
    if (!b[i].is_zero()) return std::nullopt;
  }
  RationalVector x(cols);
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = b[i];
  return x;
}

}  // namespace snacert::linalg
