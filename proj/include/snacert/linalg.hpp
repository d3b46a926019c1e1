#pragma once

#include "snacert/rational.hpp"

#include <optional>

// Dense exact linear algebra over Rational. Sizes here are tiny.
namespace snacert::linalg {

RationalMatrix identity(std::size_t n);
RationalMatrix zeros(std::size_t rows, std::size_t cols);
RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b);
RationalVector apply(const RationalMatrix& a, std::span<const Rational> x);
RationalMatrix transpose(const RationalMatrix& a);
RationalMatrix subtract(const RationalMatrix& a, const RationalMatrix& b);
bool is_zero(const RationalMatrix& a);

std::size_t rank(RationalMatrix a);

// Solves a x = b. Returns nullopt if inconsistent; free variables are set to 0.
std::optional<RationalVector> solve(RationalMatrix a, RationalVector b);

}  // namespace snacert::linalg
