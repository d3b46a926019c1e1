#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snacert/rational.hpp"

namespace snacert {

// Continuous piecewise-linear map on [0,1]: linear interpolation of values
// between strictly increasing breakpoints 0 = t_0 < ... < t_m = 1.
class PiecewiseLinear {
 public:
  PiecewiseLinear(RationalVector breakpoints, RationalVector values);

  static PiecewiseLinear constant(const Rational& c);

  const RationalVector& breakpoints() const { return t_; }
  const RationalVector& values() const { return v_; }
  std::size_t pieces() const { return t_.size() - 1; }
  Rational slope(std::size_t piece) const;
  RationalVector slopes() const;
  Rational operator()(const Rational& t) const;

  // Same function with collinear interior breakpoints removed.
  PiecewiseLinear simplified() const;
  // Same function sampled at the union of both breakpoint sets.
  PiecewiseLinear refined(std::span<const Rational> extra) const;

  friend PiecewiseLinear operator+(const PiecewiseLinear& a, const PiecewiseLinear& b);
  friend PiecewiseLinear operator-(const PiecewiseLinear& a, const PiecewiseLinear& b);
  friend PiecewiseLinear operator*(const Rational& c, const PiecewiseLinear& f);
  friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;

 private:
  RationalVector t_;
  RationalVector v_;
};

// Sorted union of breakpoint sets.
RationalVector common_refinement(std::span<const Rational> a, std::span<const Rational> b);

// An element of Lip_0([0,1]) with base point 0.
class PwlFunctional {
 public:
  // Throws PreconditionError unless values[0] == 0.
  explicit PwlFunctional(PiecewiseLinear f);
  PwlFunctional(RationalVector breakpoints, RationalVector values);

  static PwlFunctional identity();
  static PwlFunctional zero();

  const PiecewiseLinear& graph() const { return f_; }
  const RationalVector& breakpoints() const { return f_.breakpoints(); }
  const RationalVector& values() const { return f_.values(); }
  Rational operator()(const Rational& t) const { return f_(t); }

  friend PwlFunctional operator+(const PwlFunctional& a, const PwlFunctional& b) { return PwlFunctional(a.f_ + b.f_); }
  friend PwlFunctional operator-(const PwlFunctional& a, const PwlFunctional& b) { return PwlFunctional(a.f_ - b.f_); }
  friend PwlFunctional operator*(const Rational& c, const PwlFunctional& f) { return PwlFunctional(c * f.f_); }
  friend bool operator==(const PwlFunctional&, const PwlFunctional&) = default;

 private:
  PiecewiseLinear f_;
};

struct Piece {
  Rational left;
  Rational right;
  Rational slope;
  friend bool operator==(const Piece&, const Piece&) = default;
};

struct PwlNorm {
  Rational norm;
  // Every piece with |slope| = norm, left to right. Any two distinct points
  // of such a piece attain the norm; its endpoints are the designated pair.
  std::vector<Piece> attaining;
};

PwlNorm pwl_norm(const PwlFunctional& f);

struct StepDerivative {
  RationalVector breakpoints;
  RationalVector slopes;  // one per piece
  friend bool operator==(const StepDerivative&, const StepDerivative&) = default;
};

StepDerivative derivative_view(const PwlFunctional& f);
// Throws PreconditionError on malformed breakpoints or a slope count mismatch.
PwlFunctional integrate(const StepDerivative& s);

// Slope a_k on [1 - 1/k, 1 - 1/(k+1)) for k = 1..N, slope 0 on [N/(N+1), 1].
// Throws PreconditionError if a is empty.
PwlFunctional c0_block(std::span<const Rational> a);

struct Sample {
  Rational t;
  Rational y;
};

// g(t) = min_i y_i + L |t - t_i|, simplified. Samples must have distinct t in
// [0,1] with (0, 0) present; throws PreconditionError otherwise or if L is
// below the samples' Lipschitz constant.
PwlFunctional mcshane_pwl(std::vector<Sample> samples, const Rational& lipschitz_bound);

// --- Hybrid spaces M = [0,1] + finitely many extra points ----------------------

struct HybridSpace {
  std::vector<std::string> labels;        // one per extra point
  std::vector<PiecewiseLinear> profiles;  // d_z(t) = distance from extra z to t
  RationalMatrix extra_dist;              // distances among the extras

  std::size_t extras() const { return profiles.size(); }
};

struct HybridViolation {
  std::string check;
  std::string message;
};

std::vector<HybridViolation> hybrid_validate(const HybridSpace& h);

struct Retraction {
  RationalVector values;        // F(z) in [0,1] per extra point
  RationalVector unclamped;     // min_t t + d_z(t) before clamping
  bool one_lipschitz = false;   // re-verified exactly
  std::string failure;
};

// Throws PreconditionError if h is invalid.
Retraction retraction(const HybridSpace& h);

struct HybridFunctional {
  PwlFunctional interval;
  RationalVector extras;
  friend HybridFunctional operator+(const HybridFunctional& a, const HybridFunctional& b);
  friend bool operator==(const HybridFunctional&, const HybridFunctional&) = default;
};

// (f o F): agrees with f on [0,1] and takes f(F(z)) at extra z.
HybridFunctional compose_embed(const PwlFunctional& f, const HybridSpace& h);

struct HybridWitness {
  enum class Kind { none, interval, extra_extra, extra_interval };
  Kind kind = Kind::none;
  std::optional<Piece> piece;        // interval
  std::size_t z = 0;                 // extra_extra, extra_interval
  std::size_t w = 0;                 // extra_extra
  Rational t;                        // extra_interval
  friend bool operator==(const HybridWitness&, const HybridWitness&) = default;
};

std::string_view to_string(HybridWitness::Kind kind);

struct HybridNorm {
  Rational norm;
  HybridWitness witness;  // prefers interval, then extra-extra, on ties
  std::vector<Piece> interval_attaining;
};

HybridNorm hybrid_norm(const HybridFunctional& u, const HybridSpace& h);

// --- Generators and serialization ----------------------------------------------

// Profiles bounded below by 1/2 with slopes in {j/4 : |j| <= 4}; extra
// distances max(sup |d_z - d_w|, 1/2). Always valid.
HybridSpace random_hybrid(std::uint64_t seed, std::size_t max_extras = 3, std::size_t max_breakpoints = 8);
PwlFunctional random_pwl(std::uint64_t seed, std::size_t max_breakpoints = 8);

// {"breakpoints": [...], "values": [...]}
PwlFunctional parse_pwl(std::string_view text);
std::string serialize_pwl(const PwlFunctional& f);
// {"extras": [{"label": ..., "breakpoints": [...], "values": [...]}], "dist": [[...]]}
HybridSpace parse_hybrid(std::string_view text);
std::string serialize_hybrid(const HybridSpace& h);

}  // namespace snacert
