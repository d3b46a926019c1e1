#pragma once

#include "snacert/rational.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace snacert {

struct Violation {
  enum class Kind { shape, diagonal, symmetry, positivity, triangle };
  Kind kind;
  std::vector<std::size_t> indices;  // pair or (i, j, k) triple
  std::string message;
};

std::string_view to_string(Violation::Kind kind);

// Checks the pointed-metric axioms on a square matrix. Empty result means valid.
std::vector<Violation> validate(const RationalMatrix& dist);

// Finite pointed metric space with exact distances. Index 0 is the base point.
// Instances always satisfy the metric axioms; construction validates.
class PointedMetricSpace {
 public:
  // Throws InputError listing the first violation.
  explicit PointedMetricSpace(RationalMatrix dist, std::vector<std::string> labels = {});

  static PointedMetricSpace equilateral(std::size_t n, const Rational& d = Rational(1));

  std::size_t size() const { return dist_.size(); }
  static constexpr std::size_t base() { return 0; }

  const Rational& operator()(std::size_t i, std::size_t j) const { return dist_[i][j]; }
  const RationalMatrix& matrix() const { return dist_; }
  const std::vector<std::string>& labels() const { return labels_; }

  // Every distance multiplied by c > 0.
  PointedMetricSpace scaled(const Rational& c) const;

  friend bool operator==(const PointedMetricSpace&, const PointedMetricSpace&) = default;

 private:
  RationalMatrix dist_;
  std::vector<std::string> labels_;
};

// A restricted space together with the map from its indices into the parent.
struct Subspace {
  PointedMetricSpace space;
  std::vector<std::size_t> parent_index;
};

// indices[0] becomes the new base. Throws PreconditionError on duplicate or
// out-of-range indices, or fewer than two.
Subspace restrict(const PointedMetricSpace& space, std::span<const std::size_t> indices);

enum class RandomMethod { range, euclidean };

// Deterministic in (n, seed, method).
//  range:     off-diagonal entries on the grid 1 + k/64, k in [0, 64].
//  euclidean: points on a 1/16 grid of [0,2]^3 under the l1 distance.
PointedMetricSpace random_space(std::size_t n, std::uint64_t seed, RandomMethod method);

// JSON file format: {"points": [labels...], "dist": [["0","1/2"], ...]}.
// Throws InputError for syntax or metric failures.
PointedMetricSpace parse_space(std::string_view text);
std::string serialize_space(const PointedMetricSpace& space);

}  // namespace snacert
