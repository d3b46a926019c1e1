#pragma once

#include "snacert/extension.hpp"

namespace snacert {

// --- Explicit ℓ1² on four points -------------------------------------------

struct FourPointLabeling {
  std::size_t x1, x2, x3, x4;  // x1 is the base unless `rebased`
  bool rebased = false;
};

struct FourPointBasis {
  LipFunctional f1;
  LipFunctional f2;
  FourPointLabeling labeling;
  L1IsometryCertificate certificate;
  std::size_t attempts = 0;  // labelings tried before the first valid one
};

// Labels the points so that d(x1,x4) + d(x2,x3) is minimal over the three
// pair-partitions and evaluates the closed-form pair f1, f2. Labelings are
// tried in a fixed order (lexicographic partitions, then x2/x3 swapped, then
// with the roles inside the base pair swapped and the result rebased).
// Throws PreconditionError unless the space has exactly 4 points; throws
// std::logic_error (with the space dumped) if no labeling certifies.
FourPointBasis four_point_basis(const SpacePtr& space);

// --- Rademacher sign matrix -------------------------------------------------

// 2^(n-1) x n matrix: column 0 all ones, column k >= 1 holds the sign
// pattern bit k-1 of the row index (set bit means -1).
std::vector<std::vector<int>> rademacher_embedding(std::size_t n);

// Exhaustive exact check that a -> max_r |sum_k a_k R[r][k]| equals ||a||_1
// at every unit vector and every sign vector.
bool rademacher_is_l1_isometric(const std::vector<std::vector<int>>& r);

// --- Duality lift and composition ------------------------------------------

struct DualityLift {
  std::vector<LipFunctional> basis;  // g_j = u_j^* o P
  bool biorthogonal = false;
  LinfIsometryCertificate certificate;
};

// Throws PreconditionError if the complementation certificate is invalid.
DualityLift duality_lift(const ComplementationCertificate& cert);

// f_k = sum_j R[j][k] g_j. Throws PreconditionError on dimension mismatch.
L1IsometryCertificate compose_l1_in_linf(const std::vector<LipFunctional>& linf_basis,
                                         const std::vector<std::vector<int>>& rademacher);

// --- Main pipeline -----------------------------------------------------------

// Greedy farthest-point sweep from the base; returned indices are sorted.
std::vector<std::size_t> select_subspace(const PointedMetricSpace& space, std::size_t count);

struct PipelineOptions {
  ComplementationSearchOptions search;
};

struct PipelineResult {
  std::size_t k = 0;
  std::vector<std::size_t> subspace;  // indices of K in M
  SpacePtr subspace_space;
  ComplementationSearch search;
  std::optional<DualityLift> lift;
  std::optional<L1IsometryCertificate> on_subspace;
  std::optional<ExtendedBasis> extended;
  bool witnesses_in_subspace = false;

  bool success() const { return extended && extended->certificate.valid && witnesses_in_subspace; }
};

// K of 2^k points -> 1-complemented l1^(2^(k-1)) in F(K) -> l_inf^(2^(k-1))
// in Lip_0(K) -> l1^k by the Rademacher matrix -> McShane extension to M.
// Complementation-search exhaustion is reported in the result, not thrown.
// Throws PreconditionError unless k >= 1 and |M| >= 2^k.
PipelineResult theorem_pipeline(const SpacePtr& space, std::size_t k, const PipelineOptions& options = {});

// --- Independent direct search -----------------------------------------------

// Node feasibility test. The constraints decouple per coordinate into
// difference constraints f(x) - f(y) <= w, so feasibility is the absence of a
// negative cycle; `lp` solves the same system with the simplex instead.
enum class NodeCheck { difference_graph, lp };

struct DirectSearchOptions {
  std::size_t probe_budget = 1'000'000;  // feasibility probes
  NodeCheck check = NodeCheck::difference_graph;
};

struct DirectSearch {
  std::optional<L1IsometryCertificate> certificate;
  std::vector<PairWitness> assignment;  // per sign class, in sign_classes order
  std::size_t probes = 0;
  bool budget_exhausted = false;
  std::string report;
};

// Depth-first search over witness-pair assignments for the 2^(k-1) sign
// classes (pairs by decreasing distance), each partial assignment checked for
// feasibility of the cube constraints plus the assigned witness equalities.
// Throws PreconditionError if k == 0.
DirectSearch direct_search_l1(const SpacePtr& space, std::size_t k, const DirectSearchOptions& options = {});

// --- Evaluation embedding -----------------------------------------------------

enum class EmbedKind { l1, linf };

struct EvaluationEmbedding {
  EmbedKind kind;
  std::size_t dimension;
  SpacePtr space;  // the dual unit ball's relevant points, 0 first
  std::vector<RationalVector> points;
  std::vector<LipFunctional> basis;  // evaluations at the unit vectors
  std::optional<L1IsometryCertificate> l1;
  std::optional<LinfIsometryCertificate> linf;
  // Every witness pair is (vertex, 0) with the vertex maximising the combination.
  bool designated_witnesses = false;

  bool valid() const { return designated_witnesses && (l1 ? l1->valid : linf && linf->valid); }
};

// kind l1: Y = l1^d, points 0 and the 2^d vertices of the l_inf ball.
// kind linf: Y = l_inf^d, points 0 and +-e_j under the l1 metric.
// Throws PreconditionError unless 1 <= d <= 6.
EvaluationEmbedding evaluation_embedding(EmbedKind kind, std::size_t d);

}  // namespace snacert
