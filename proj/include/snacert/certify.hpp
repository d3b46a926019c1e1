#pragma once

#include "snacert/freespace.hpp"
#include "snacert/lipschitz.hpp"

#include <optional>

// Exact certificates that a tuple of functionals spans an isometric l1^n or
// l_inf^m inside SNA(M).
//
// Both certificates rest on the difference-quotient vectors
//   w_xy = ((f_k(x) - f_k(y)) / d(x, y))_k,
// since ||sum a_k f_k|| = max_xy |<a, w_xy>|. The norm a -> max |<a, w_xy>| is
// l1 exactly when every w_xy lies in the (inf-)unit cube and every sign
// vertex +-eps is one of the w_xy; it is l_inf exactly when every w_xy lies
// in the l1 ball and every +-e_j occurs.
//
// The corner criterion is an independent route for l1: a norm N with
// N(a) <= ||a||_1 (which follows from ||f_k|| <= 1) and N(eps) = n at every
// sign vector is pinched to ||.||_1, because on each orthant ||.||_1 is
// linear and N is convex, so N >= ||.||_1 on the convex hull of that
// orthant's vertices (scaled), i.e. everywhere.
namespace snacert {

// Sign vectors of length n modulo global sign: 2^(n-1) of them, first entry
// +1, the rest read from the bits of the index (bit k-2 set means -1).
std::vector<std::vector<int>> sign_classes(std::size_t n);

struct QuotientVector {
  std::size_t x;  // x < y
  std::size_t y;
  RationalVector w;
};

// All unordered pairs, lexicographic. Throws PreconditionError if the basis
// is empty or lives on different spaces.
std::vector<QuotientVector> quotient_vectors(std::span<const LipFunctional> basis);

struct PairWitness {
  std::size_t x;
  std::size_t y;
  friend bool operator==(const PairWitness&, const PairWitness&) = default;
};

struct SignWitness {
  std::vector<int> sign;
  std::optional<PairWitness> pair;  // oriented so that w_xy = sign
};

struct L1IsometryCertificate {
  std::vector<LipFunctional> basis;
  std::vector<QuotientVector> quotients;
  std::optional<QuotientVector> cube_violation;
  std::vector<SignWitness> sign_witnesses;
  bool valid = false;
  std::string failure;
};

struct VertexWitness {
  std::size_t coordinate;
  std::optional<PairWitness> pair;  // oriented so that w_xy = +e_j
};

struct LinfIsometryCertificate {
  std::vector<LipFunctional> basis;
  std::vector<QuotientVector> quotients;
  std::optional<QuotientVector> ball_violation;
  std::vector<VertexWitness> vertex_witnesses;
  bool valid = false;
  std::string failure;
};

// Restricts which points may appear in witness pairs (cube and ball checks
// always range over the whole space).
using WitnessDomain = std::optional<std::vector<bool>>;

// ||sum a_k f_k|| computed as max over pairs of |<a, w_xy>|.
Rational combo_norm(std::span<const LipFunctional> basis, std::span<const Rational> a);

// Cube and sign-vertex criterion. The witness for each sign class is the
// lexicographically first unordered pair {x < y} with w_xy = +-eps, oriented.
L1IsometryCertificate l1_isometry_lip(std::vector<LipFunctional> basis, const WitnessDomain& domain = std::nullopt);

struct CornerCheck {
  bool valid = false;
  std::vector<Rational> unit_norms;    // combo_norm(e_k), must be 1
  std::vector<Rational> corner_norms;  // combo_norm(eps) per sign class, must be n
  std::optional<RationalVector> failing_coefficients;
};

CornerCheck l1_isometry_corner(std::span<const LipFunctional> basis);

FreeL1Check l1_isometry_free(std::span<const FreeVector> vectors);

LinfIsometryCertificate linf_isometry_lip(std::vector<LipFunctional> basis, const WitnessDomain& domain = std::nullopt);

}  // namespace snacert
