#pragma once

#include "snacert/lipschitz.hpp"
#include "snacert/lp.hpp"

#include <optional>

// Lipschitz-free space F(M) over a finite pointed metric space: the
// transportation-cost norm, molecules, operators and 1-complemented l1^m.
namespace snacert {

// Coordinates over the non-base points 1..n-1 (delta of the base is 0).
struct FreeVector {
  SpacePtr space;
  RationalVector coeffs;

  static FreeVector zero(const SpacePtr& space);
  static FreeVector delta(const SpacePtr& space, std::size_t x);

  // Coefficient on delta_x; zero for the base point.
  Rational at(std::size_t x) const { return x == 0 ? Rational(0) : coeffs[x - 1]; }

  friend FreeVector operator+(const FreeVector& a, const FreeVector& b);
  friend FreeVector operator-(const FreeVector& a, const FreeVector& b);
  friend FreeVector operator*(const Rational& c, const FreeVector& v);
  friend bool operator==(const FreeVector& a, const FreeVector& b) { return a.coeffs == b.coeffs; }
};

// (delta_x - delta_y) / d(x, y)
struct Molecule {
  std::size_t x;
  std::size_t y;

  FreeVector vector(const SpacePtr& space) const;
  friend bool operator==(const Molecule&, const Molecule&) = default;
  friend auto operator<=>(const Molecule&, const Molecule&) = default;
};

// The n(n-1)/2 molecules with x < y, lexicographic.
std::vector<Molecule> molecules(const PointedMetricSpace& space);

// <f, v> = sum_x v_x (f(x) - f(0)); invariant under rebasing f.
Rational pairing(const LipFunctional& f, const FreeVector& v);

struct TransportStep {
  std::size_t from;
  std::size_t to;
  Rational amount;  // coefficient of (delta_from - delta_to), positive
};

struct PrimalNorm {
  Rational value;
  std::vector<TransportStep> decomposition;
};

// min sum |a_xy| d(x,y) over v = sum a_xy (delta_x - delta_y).
PrimalNorm free_norm_primal(const FreeVector& v, const lp::SolveOptions& options = {});

struct DualNorm {
  Rational value;
  LipFunctional witness;  // 1-Lipschitz, <witness, v> = value
};

// max <f, v> over 1-Lipschitz f vanishing at the base.
DualNorm free_norm_dual(const FreeVector& v, const lp::SolveOptions& options = {});

inline Rational free_norm(const FreeVector& v) { return free_norm_primal(v).value; }

// Linear map on free-space coordinates: (n-1) x (n-1) matrix.
struct FreeOperator {
  SpacePtr space;
  RationalMatrix matrix;

  static FreeOperator identity(const SpacePtr& space);
  static FreeOperator zero(const SpacePtr& space);

  FreeVector operator()(const FreeVector& v) const;
  friend FreeOperator operator*(const FreeOperator& a, const FreeOperator& b);
};

struct OperatorNorm {
  Rational value;
  Molecule argmax{0, 1};  // lexicographically first maximiser
  std::vector<Rational> per_molecule;  // in molecules() order
};

OperatorNorm operator_norm(const FreeOperator& op);

// Result of checking that u_1..u_m span an isometric l1^m inside F(M).
struct FreeL1Check {
  bool valid = false;
  std::vector<Rational> basis_norms;                 // must all be 1
  std::vector<std::vector<int>> signs;                // mod global sign, first entry +1
  std::vector<Rational> corner_norms;                 // must all be m
  std::string failure;
};

struct ComplementationCertificate {
  std::vector<FreeVector> basis;
  FreeOperator projection;

  bool idempotent = false;
  RationalMatrix idempotency_residual;  // P*P - P
  bool fixes_basis = false;
  std::optional<std::size_t> unfixed_basis_index;
  std::size_t rank = 0;
  bool rank_matches = false;
  OperatorNorm norm;
  bool norm_one = false;
  FreeL1Check isometry;

  bool valid() const { return idempotent && fixes_basis && rank_matches && norm_one && isometry.valid; }
  std::string failure() const;
};

// Runs all four checks; failures are recorded, not thrown.
ComplementationCertificate verify_one_complemented(std::vector<FreeVector> basis, FreeOperator projection);

// How the constraint ||P(molecule)|| <= 1 enters the biorthogonality LP.
enum class NormEncoding {
  // With the basis already certified isometric to l1^m, ||sum c_j u_j|| is
  // sum |c_j|; epigraph variables bound each |c_j|.
  l1_epigraph,
  // Transport flows per molecule realise the free norm directly.
  transport_flow,
};

struct ComplementationSearchOptions {
  NormEncoding encoding = NormEncoding::l1_epigraph;
  std::size_t tuple_budget = 200000;  // tuples passing the pairwise filter
};

struct ComplementationSearch {
  std::optional<ComplementationCertificate> certificate;
  std::vector<Molecule> molecules;  // basis tuple when found
  std::size_t pairs_checked = 0;
  std::size_t compatible_pairs = 0;
  std::size_t tuples_tried = 0;
  std::size_t lp_probes = 0;
  bool budget_exhausted = false;
  std::string report;
};

// Searches molecule m-tuples in lexicographic order for a 1-complemented
// isometric l1^m. Precondition n >= 2m (PreconditionError otherwise).
ComplementationSearch search_one_complemented(const SpacePtr& space, std::size_t m,
                                              const ComplementationSearchOptions& options = {});

// Biorthogonal functionals g_1..g_m for the given basis under the norm-one
// constraint; nullopt if the LP is infeasible.
std::optional<std::vector<LipFunctional>> biorthogonal_functionals(const std::vector<FreeVector>& basis,
                                                                   NormEncoding encoding);

// P(v) = sum_j g_j(v) u_j
FreeOperator projection_from(const std::vector<FreeVector>& basis, const std::vector<LipFunctional>& dual);

}  // namespace snacert
