#include "snacert/lipschitz.hpp"

#include "snacert/error.hpp"

#include <algorithm>

namespace snacert {

LipFunctional::LipFunctional(SpacePtr space, RationalVector values, std::size_t base)
    : space_(std::move(space)), base_(base), values_(std::move(values)) {
  if (!space_) throw PreconditionError("functional without a space");
  if (values_.size() != space_->size()) {
    throw PreconditionError("functional has " + std::to_string(values_.size()) + " values for " +
                            std::to_string(space_->size()) + " points");
  }
  if (base_ >= values_.size()) throw PreconditionError("functional base index out of range");
  if (!values_[base_].is_zero()) throw PreconditionError("functional must vanish at its base point");
}

LipFunctional LipFunctional::zero(SpacePtr space) {
  const std::size_t n = space->size();
  return LipFunctional(std::move(space), RationalVector(n));
}

Rational LipFunctional::quotient(std::size_t x, std::size_t y) const {
  return (values_[x] - values_[y]) / (*space_)(x, y);
}

bool LipFunctional::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](const Rational& v) { return v.is_zero(); });
}

namespace {

void require_compatible(const LipFunctional& a, const LipFunctional& b) {
  if (a.space() != b.space() && a.metric() != b.metric()) throw PreconditionError("functionals on different spaces");
  if (a.base() != b.base()) throw PreconditionError("functionals with different base points");
}

}  // namespace

LipFunctional operator+(const LipFunctional& a, const LipFunctional& b) {
  require_compatible(a, b);
  RationalVector v = a.values_;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += b.values_[i];
  return LipFunctional(a.space_, std::move(v), a.base_);
}

LipFunctional operator-(const LipFunctional& a, const LipFunctional& b) {
  require_compatible(a, b);
  RationalVector v = a.values_;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= b.values_[i];
  return LipFunctional(a.space_, std::move(v), a.base_);
}

LipFunctional operator*(const Rational& c, const LipFunctional& f) {
  RationalVector v = f.values_;
  for (auto& x : v) x *= c;
  return LipFunctional(f.space_, std::move(v), f.base_);
}

LipNorm lip_norm(const LipFunctional& f) {
  LipNorm out;
  const std::size_t n = f.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      Rational q = f.quotient(x, y);
      const Rational a = abs(q);
      if (a.is_zero() || a < out.norm) continue;
      if (a > out.norm) {
        out.norm = a;
        out.witnesses.clear();
      }
      if (q.sign() > 0) {
        out.witnesses.push_back({x, y, a});
      } else {
        out.witnesses.push_back({y, x, a});
      }
    }
  }
  std::sort(out.witnesses.begin(), out.witnesses.end(),
            [](const WitnessPair& a, const WitnessPair& b) { return std::tie(a.x, a.y) < std::tie(b.x, b.y); });
  return out;
}

LipFunctional rebase(const LipFunctional& f, std::size_t new_base) {
  if (new_base >= f.size()) throw PreconditionError("rebase: index out of range");
  RationalVector v = f.values();
  const Rational shift = v[new_base];
  for (auto& x : v) x -= shift;
  return LipFunctional(f.space(), std::move(v), new_base);
}

LipFunctional mcshane_extend(const LipFunctional& f, const SpacePtr& parent,
                             std::span<const std::size_t> parent_index, const Rational& lipschitz_bound) {
  const PointedMetricSpace& k = f.metric();
  if (parent_index.size() != k.size()) throw PreconditionError("mcshane_extend: index map has the wrong length");
  for (std::size_t a = 0; a < k.size(); ++a) {
    if (parent_index[a] >= parent->size()) throw PreconditionError("mcshane_extend: index map out of range");
    for (std::size_t b = 0; b < k.size(); ++b) {
      if ((*parent)(parent_index[a], parent_index[b]) != k(a, b)) {
        throw PreconditionError("mcshane_extend: subspace distances do not match the parent");
      }
    }
  }
  if (lipschitz_bound < lip_norm(f).norm) throw PreconditionError("mcshane_extend: L is below the Lipschitz norm");

  const std::size_t n = parent->size();
  RationalVector g(n);
  for (std::size_t x = 0; x < n; ++x) {
    bool first = true;
    for (std::size_t a = 0; a < k.size(); ++a) {
      Rational cand = f[a] + lipschitz_bound * (*parent)(x, parent_index[a]);
      if (first || cand < g[x]) {
        g[x] = std::move(cand);
        first = false;
      }
    }
  }
  const Rational shift = g[PointedMetricSpace::base()];
  for (auto& v : g) v -= shift;
  return LipFunctional(parent, std::move(g));
}

}  // namespace snacert
