#pragma once

#include "snacert/metric.hpp"

#include <memory>

namespace snacert {

using SpacePtr = std::shared_ptr<const PointedMetricSpace>;

inline SpacePtr share(PointedMetricSpace space) {
  return std::make_shared<const PointedMetricSpace>(std::move(space));
}

// Element of Lip_0(M): a value per point, zero at the distinguished point.
// The distinguished point is the space's base unless the functional was
// rebased, in which case `base()` names the new one.
class LipFunctional {
 public:
  // Throws PreconditionError when the length is wrong or values[base] != 0.
  LipFunctional(SpacePtr space, RationalVector values, std::size_t base = PointedMetricSpace::base());

  static LipFunctional zero(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  const PointedMetricSpace& metric() const { return *space_; }
  std::size_t base() const { return base_; }
  const RationalVector& values() const { return values_; }
  const Rational& operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  // (f(x) - f(y)) / d(x, y)
  Rational quotient(std::size_t x, std::size_t y) const;

  bool is_zero() const;

  friend LipFunctional operator+(const LipFunctional& a, const LipFunctional& b);
  friend LipFunctional operator-(const LipFunctional& a, const LipFunctional& b);
  friend LipFunctional operator*(const Rational& c, const LipFunctional& f);

  friend bool operator==(const LipFunctional& a, const LipFunctional& b) {
    return a.base_ == b.base_ && a.values_ == b.values_ && *a.space_ == *b.space_;
  }

 private:
  SpacePtr space_;
  std::size_t base_;
  RationalVector values_;
};

// Ordered so that quotient = (f(x) - f(y)) / d(x, y) is the reported value.
struct WitnessPair {
  std::size_t x;
  std::size_t y;
  Rational quotient;

  friend bool operator==(const WitnessPair&, const WitnessPair&) = default;
};

struct LipNorm {
  Rational norm;
  // Every attaining pair, oriented to a positive quotient, sorted by (x, y).
  // Empty for the zero functional.
  std::vector<WitnessPair> witnesses;
};

LipNorm lip_norm(const LipFunctional& f);

// f - f(new_base), distinguished at new_base. Norm and witnesses unchanged.
LipFunctional rebase(const LipFunctional& f, std::size_t new_base);

// Inf-form McShane extension g(x) = min_{y in K} f(y) + L d(x, y) from the
// subspace K (f's space, embedded through parent_index) to parent, shifted so
// that g vanishes at the parent's base. Throws PreconditionError if
// L < lip_norm(f) or the embedding does not match the parent's distances.
LipFunctional mcshane_extend(const LipFunctional& f, const SpacePtr& parent,
                             std::span<const std::size_t> parent_index, const Rational& lipschitz_bound);

}  // namespace snacert
