#include "snacert/interval.hpp"

#include <algorithm>
#include <sstream>

#include "snacert/error.hpp"
#include "snacert/json_util.hpp"
#include "snacert/rng.hpp"

namespace snacert {

namespace {

void check_breakpoints(const RationalVector& t) {
  if (t.size() < 2 || t.front() != Rational(0) || t.back() != Rational(1)) {
    throw PreconditionError("breakpoints must start at 0, end at 1 and have at least two entries");
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i - 1] < t[i])) throw PreconditionError("breakpoints must be strictly increasing");
  }
}

std::string point_str(const Rational& t) { return "t=" + t.str(); }

}  // namespace

PiecewiseLinear::PiecewiseLinear(RationalVector breakpoints, RationalVector values)
    : t_(std::move(breakpoints)), v_(std::move(values)) {
  check_breakpoints(t_);
  if (v_.size() != t_.size()) throw PreconditionError("one value per breakpoint required");
}

PiecewiseLinear PiecewiseLinear::constant(const Rational& c) { return PiecewiseLinear({Rational(0), Rational(1)}, {c, c}); }

Rational PiecewiseLinear::slope(std::size_t piece) const {
  return (v_[piece + 1] - v_[piece]) / (t_[piece + 1] - t_[piece]);
}

RationalVector PiecewiseLinear::slopes() const {
  RationalVector s;
  for (std::size_t i = 0; i < pieces(); ++i) s.push_back(slope(i));
  return s;
}

Rational PiecewiseLinear::operator()(const Rational& t) const {
  if (t < t_.front() || t > t_.back()) throw PreconditionError("evaluation point outside [0,1]: " + t.str());
  const auto it = std::lower_bound(t_.begin(), t_.end(), t);
  const auto i = static_cast<std::size_t>(it - t_.begin());
  if (*it == t) return v_[i];
  return v_[i - 1] + slope(i - 1) * (t - t_[i - 1]);
}

PiecewiseLinear PiecewiseLinear::simplified() const {
  RationalVector t{t_.front()}, v{v_.front()};
  for (std::size_t i = 1; i + 1 < t_.size(); ++i) {
    if (slope(i - 1) != slope(i)) {
      t.push_back(t_[i]);
      v.push_back(v_[i]);
    }
  }
  t.push_back(t_.back());
  v.push_back(v_.back());
  return PiecewiseLinear(std::move(t), std::move(v));
}

PiecewiseLinear PiecewiseLinear::refined(std::span<const Rational> extra) const {
  RationalVector t = common_refinement(t_, extra);
  RationalVector v;
  for (const auto& x : t) v.push_back((*this)(x));
  return PiecewiseLinear(std::move(t), std::move(v));
}

RationalVector common_refinement(std::span<const Rational> a, std::span<const Rational> b) {
  RationalVector out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PiecewiseLinear operator+(const PiecewiseLinear& a, const PiecewiseLinear& b) {
  PiecewiseLinear ra = a.refined(b.t_), rb = b.refined(a.t_);
  for (std::size_t i = 0; i < ra.v_.size(); ++i) ra.v_[i] += rb.v_[i];
  return ra;
}

PiecewiseLinear operator-(const PiecewiseLinear& a, const PiecewiseLinear& b) { return a + Rational(-1) * b; }

PiecewiseLinear operator*(const Rational& c, const PiecewiseLinear& f) {
  PiecewiseLinear out = f;
  for (auto& v : out.v_) v *= c;
  return out;
}

PwlFunctional::PwlFunctional(PiecewiseLinear f) : f_(std::move(f)) {
  if (!f_.values().front().is_zero()) throw PreconditionError("Lip_0 functional must vanish at 0");
}

PwlFunctional::PwlFunctional(RationalVector breakpoints, RationalVector values)
    : PwlFunctional(PiecewiseLinear(std::move(breakpoints), std::move(values))) {}

PwlFunctional PwlFunctional::identity() { return PwlFunctional({Rational(0), Rational(1)}, {Rational(0), Rational(1)}); }

PwlFunctional PwlFunctional::zero() { return PwlFunctional(PiecewiseLinear::constant(Rational(0))); }

PwlNorm pwl_norm(const PwlFunctional& f) {
  const auto& g = f.graph();
  PwlNorm out;
  for (std::size_t i = 0; i < g.pieces(); ++i) out.norm = max(out.norm, abs(g.slope(i)));
  for (std::size_t i = 0; i < g.pieces(); ++i) {
    const Rational s = g.slope(i);
    if (abs(s) == out.norm) out.attaining.push_back({g.breakpoints()[i], g.breakpoints()[i + 1], s});
  }
  return out;
}

StepDerivative derivative_view(const PwlFunctional& f) { return {f.breakpoints(), f.graph().slopes()}; }

PwlFunctional integrate(const StepDerivative& s) {
  check_breakpoints(s.breakpoints);
  if (s.slopes.size() + 1 != s.breakpoints.size()) throw PreconditionError("one slope per piece required");
  RationalVector v{Rational(0)};
  for (std::size_t i = 0; i < s.slopes.size(); ++i) {
    v.push_back(v.back() + s.slopes[i] * (s.breakpoints[i + 1] - s.breakpoints[i]));
  }
  return PwlFunctional(s.breakpoints, std::move(v));
}

PwlFunctional c0_block(std::span<const Rational> a) {
  if (a.empty()) throw PreconditionError("c0_block: need at least one block");
  const long n = static_cast<long>(a.size());
  StepDerivative s;
  for (long k = 1; k <= n + 1; ++k) s.breakpoints.push_back(Rational(1) - Rational(1, k));
  s.breakpoints.push_back(Rational(1));
  s.slopes.assign(a.begin(), a.end());
  s.slopes.push_back(Rational(0));
  return integrate(s);
}

PwlFunctional mcshane_pwl(std::vector<Sample> samples, const Rational& lipschitz_bound) {
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.t < b.t; });
  if (samples.empty() || samples.front().t != Rational(0) || !samples.front().y.is_zero()) {
    throw PreconditionError("mcshane_pwl: the sample (0, 0) is required");
  }
  if (samples.back().t > Rational(1)) throw PreconditionError("mcshane_pwl: samples must lie in [0,1]");
  const Rational& l = lipschitz_bound;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].t == samples[i - 1].t) throw PreconditionError("mcshane_pwl: duplicate sample point");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      if (abs(samples[j].y - samples[i].y) > l * (samples[j].t - samples[i].t)) {
        throw PreconditionError("mcshane_pwl: Lipschitz bound " + l.str() + " below the samples' constant");
      }
    }
  }
  // Between neighbouring samples only their two cones matter.
  RationalVector t{samples[0].t}, v{samples[0].y};
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const auto& [a, ya] = samples[i];
    const auto& [b, yb] = samples[i + 1];
    if (!l.is_zero()) {
      const Rational peak = (yb - ya + l * (a + b)) / (Rational(2) * l);
      if (a < peak && peak < b) {
        t.push_back(peak);
        v.push_back(ya + l * (peak - a));
      }
    }
    t.push_back(b);
    v.push_back(yb);
  }
  if (t.back() < Rational(1)) {
    v.push_back(v.back() + l * (Rational(1) - t.back()));
    t.push_back(Rational(1));
  }
  return PwlFunctional(PiecewiseLinear(std::move(t), std::move(v)).simplified());
}

std::vector<HybridViolation> hybrid_validate(const HybridSpace& h) {
  std::vector<HybridViolation> out;
  auto report = [&](std::string check, std::string message) { out.push_back({std::move(check), std::move(message)}); };
  const std::size_t e = h.extras();
  if (!h.labels.empty() && h.labels.size() != e) report("shape", "label count differs from extra count");
  if (h.extra_dist.size() != e) {
    report("shape", "extra distance matrix must be " + std::to_string(e) + "x" + std::to_string(e));
    return out;
  }
  for (const auto& row : h.extra_dist) {
    if (row.size() != e) {
      report("shape", "extra distance matrix is not square");
      return out;
    }
  }

  for (std::size_t z = 0; z < e; ++z) {
    const auto& d = h.profiles[z];
    const auto& t = d.breakpoints();
    const std::string name = "extra " + std::to_string(z);
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (d.values()[i].sign() <= 0) report("positivity", name + ": distance not positive at " + point_str(t[i]));
    }
    for (std::size_t i = 0; i < d.pieces(); ++i) {
      if (abs(d.slope(i)) > Rational(1)) {
        report("lipschitz", name + ": profile slope " + d.slope(i).str() + " on [" + t[i].str() + "," +
                                t[i + 1].str() + "] exceeds 1");
      }
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = i + 1; j < t.size(); ++j) {
        if (t[j] - t[i] > d.values()[i] + d.values()[j]) {
          report("interval-pair", name + ": |s-t| > d(z,s) + d(z,t) at s=" + t[i].str() + ", t=" + t[j].str());
        }
      }
    }
  }

  for (std::size_t z = 0; z < e; ++z) {
    if (!h.extra_dist[z][z].is_zero()) report("extra-metric", "nonzero self-distance at extra " + std::to_string(z));
    for (std::size_t w = 0; w < e; ++w) {
      if (w == z) continue;
      const std::string pair = "(" + std::to_string(z) + "," + std::to_string(w) + ")";
      if (h.extra_dist[z][w] != h.extra_dist[w][z]) report("extra-metric", "asymmetric distance at " + pair);
      if (h.extra_dist[z][w].sign() <= 0) report("extra-metric", "non-positive distance at " + pair);
      for (std::size_t x = 0; x < e; ++x) {
        if (h.extra_dist[z][x] > h.extra_dist[z][w] + h.extra_dist[w][x]) {
          report("extra-metric", "triangle inequality fails at (" + std::to_string(z) + "," + std::to_string(w) + "," +
                                     std::to_string(x) + ")");
        }
      }
      if (w < z) continue;
      const auto& dz = h.profiles[z];
      const auto& dw = h.profiles[w];
      for (const auto& t : common_refinement(dz.breakpoints(), dw.breakpoints())) {
        const Rational a = dz(t), b = dw(t);
        if (h.extra_dist[z][w] > a + b) report("extra-interval", "d(z,w) > d(z,t) + d(w,t) for " + pair + " at " + point_str(t));
        if (abs(a - b) > h.extra_dist[z][w]) report("extra-interval", "|d(z,t) - d(w,t)| > d(z,w) for " + pair + " at " + point_str(t));
      }
    }
  }
  return out;
}

namespace {

void require_valid(const HybridSpace& h, std::string_view what) {
  const auto v = hybrid_validate(h);
  if (!v.empty()) throw PreconditionError(std::string(what) + ": invalid hybrid space: " + v.front().message);
}

}  // namespace

Retraction retraction(const HybridSpace& h) {
  require_valid(h, "retraction");
  Retraction out;
  for (const auto& d : h.profiles) {
    Rational best = d.values()[0];
    for (std::size_t i = 0; i < d.breakpoints().size(); ++i) best = min(best, d.breakpoints()[i] + d.values()[i]);
    out.unclamped.push_back(best);
    out.values.push_back(min(max(best, Rational(0)), Rational(1)));
  }

  out.one_lipschitz = true;
  auto fail = [&](std::string message) {
    if (out.one_lipschitz) out.failure = std::move(message);
    out.one_lipschitz = false;
  };
  for (std::size_t z = 0; z < h.extras(); ++z) {
    const Rational& f = out.values[z];
    if (f < Rational(0) || f > Rational(1)) fail("F(z) outside [0,1] at extra " + std::to_string(z));
    // |F(z) - t| - d_z(t) is linear between the profile's breakpoints and F(z).
    const Rational kink[] = {f};
    for (const auto& t : common_refinement(h.profiles[z].breakpoints(), kink)) {
      if (abs(f - t) > h.profiles[z](t)) fail("|F(z) - t| > d(z,t) at extra " + std::to_string(z) + ", " + point_str(t));
    }
    for (std::size_t w = 0; w < h.extras(); ++w) {
      if (abs(f - out.values[w]) > h.extra_dist[z][w]) {
        fail("|F(z) - F(w)| > d(z,w) at (" + std::to_string(z) + "," + std::to_string(w) + ")");
      }
    }
  }
  return out;
}

HybridFunctional operator+(const HybridFunctional& a, const HybridFunctional& b) {
  if (a.extras.size() != b.extras.size()) throw PreconditionError("hybrid functionals on different spaces");
  HybridFunctional out{a.interval + b.interval, a.extras};
  for (std::size_t z = 0; z < out.extras.size(); ++z) out.extras[z] += b.extras[z];
  return out;
}

HybridFunctional compose_embed(const PwlFunctional& f, const HybridSpace& h) {
  const Retraction r = retraction(h);
  HybridFunctional out{f, {}};
  for (const auto& x : r.values) out.extras.push_back(f(x));
  return out;
}

std::string_view to_string(HybridWitness::Kind kind) {
  switch (kind) {
    case HybridWitness::Kind::none: return "none";
    case HybridWitness::Kind::interval: return "interval";
    case HybridWitness::Kind::extra_extra: return "extra-extra";
    case HybridWitness::Kind::extra_interval: return "extra-interval";
  }
  return "?";
}

HybridNorm hybrid_norm(const HybridFunctional& u, const HybridSpace& h) {
  if (u.extras.size() != h.extras()) throw PreconditionError("hybrid_norm: one value per extra point required");
  HybridNorm out;
  const auto interval = pwl_norm(u.interval);
  out.norm = interval.norm;
  out.interval_attaining = interval.attaining;
  if (!interval.norm.is_zero()) {
    out.witness.kind = HybridWitness::Kind::interval;
    out.witness.piece = interval.attaining.front();
  }
  for (std::size_t z = 0; z < h.extras(); ++z) {
    for (std::size_t w = z + 1; w < h.extras(); ++w) {
      const Rational q = abs(u.extras[z] - u.extras[w]) / h.extra_dist[z][w];
      if (q > out.norm) {
        out.norm = q;
        out.witness = {HybridWitness::Kind::extra_extra, std::nullopt, z, w, Rational(0)};
      }
    }
  }
  // On each common piece |u(z) - f(t)| / d_z(t) is a ratio of a linear
  // function's absolute value to a positive linear one: maximal at an end.
  for (std::size_t z = 0; z < h.extras(); ++z) {
    const auto& d = h.profiles[z];
    for (const auto& t : common_refinement(d.breakpoints(), u.interval.breakpoints())) {
      const Rational q = abs(u.extras[z] - u.interval(t)) / d(t);
      if (q > out.norm) {
        out.norm = q;
        out.witness = {HybridWitness::Kind::extra_interval, std::nullopt, z, 0, t};
      }
    }
  }
  return out;
}

namespace {

PiecewiseLinear random_profile(Rng& rng, std::size_t max_breakpoints) {
  const auto count = static_cast<std::size_t>(rng.uniform(2, static_cast<std::int64_t>(std::max<std::size_t>(2, max_breakpoints))));
  RationalVector t{Rational(0), Rational(1)};
  while (t.size() < count) {
    Rational x(rng.uniform(1, 59), 60);
    if (std::find(t.begin(), t.end(), x) == t.end()) t.push_back(x);
  }
  std::sort(t.begin(), t.end());
  RationalVector v{Rational(1, 2) + Rational(rng.uniform(0, 8), 8)};
  for (std::size_t i = 1; i < t.size(); ++i) {
    Rational s(rng.uniform(-4, 4), 4);
    Rational next = v.back() + s * (t[i] - t[i - 1]);
    if (next < Rational(1, 2)) next = v.back() - s * (t[i] - t[i - 1]);
    v.push_back(next);
  }
  return PiecewiseLinear(std::move(t), std::move(v));
}

}  // namespace

HybridSpace random_hybrid(std::uint64_t seed, std::size_t max_extras, std::size_t max_breakpoints) {
  Rng rng(seed ^ 0x6879627269645f31ULL);
  for (;;) {
    HybridSpace h;
    const auto e = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(max_extras)));
    for (std::size_t z = 0; z < e; ++z) {
      h.labels.push_back("z" + std::to_string(z));
      h.profiles.push_back(random_profile(rng, max_breakpoints));
    }
    h.extra_dist.assign(e, RationalVector(e));
    for (std::size_t z = 0; z < e; ++z) {
      for (std::size_t w = z + 1; w < e; ++w) {
        Rational sup(1, 2);
        for (const auto& t : common_refinement(h.profiles[z].breakpoints(), h.profiles[w].breakpoints())) {
          sup = max(sup, abs(h.profiles[z](t) - h.profiles[w](t)));
        }
        h.extra_dist[z][w] = h.extra_dist[w][z] = sup;
      }
    }
    if (hybrid_validate(h).empty()) return h;
  }
}

PwlFunctional random_pwl(std::uint64_t seed, std::size_t max_breakpoints) {
  Rng rng(seed ^ 0x70776c5f66756e63ULL);
  const auto count = static_cast<std::size_t>(rng.uniform(2, static_cast<std::int64_t>(std::max<std::size_t>(2, max_breakpoints))));
  StepDerivative s;
  s.breakpoints = {Rational(0), Rational(1)};
  while (s.breakpoints.size() < count) {
    Rational x(rng.uniform(1, 47), 48);
    if (std::find(s.breakpoints.begin(), s.breakpoints.end(), x) == s.breakpoints.end()) s.breakpoints.push_back(x);
  }
  std::sort(s.breakpoints.begin(), s.breakpoints.end());
  for (std::size_t i = 0; i + 1 < s.breakpoints.size(); ++i) s.slopes.emplace_back(rng.uniform(-8, 8), 4);
  return integrate(s);
}

namespace {

using json_util::json;

PiecewiseLinear pwl_from_json(const json& j) {
  if (!j.is_object() || !j.contains("breakpoints") || !j.contains("values")) {
    throw InputError("piecewise-linear object needs \"breakpoints\" and \"values\"");
  }
  try {
    return PiecewiseLinear(json_util::to_vector(j.at("breakpoints")), json_util::to_vector(j.at("values")));
  } catch (const PreconditionError& e) {
    throw InputError(e.what());
  }
}

json pwl_to_json(const PiecewiseLinear& f) {
  return {{"breakpoints", json_util::from_vector(f.breakpoints())}, {"values", json_util::from_vector(f.values())}};
}

}  // namespace

PwlFunctional parse_pwl(std::string_view text) {
  auto f = pwl_from_json(json_util::parse_document(text));
  if (!f.values().front().is_zero()) throw InputError("functional must vanish at 0");
  return PwlFunctional(std::move(f));
}

std::string serialize_pwl(const PwlFunctional& f) { return pwl_to_json(f.graph()).dump(); }

HybridSpace parse_hybrid(std::string_view text) {
  const json doc = json_util::parse_document(text);
  if (!doc.is_object() || !doc.contains("extras")) throw InputError("hybrid space needs an \"extras\" array");
  const json& extras = doc.at("extras");
  if (!extras.is_array()) throw InputError("\"extras\" must be an array");
  HybridSpace h;
  for (const auto& z : extras) {
    h.profiles.push_back(pwl_from_json(z));
    h.labels.push_back(z.contains("label") && z.at("label").is_string() ? z.at("label").get<std::string>()
                                                                         : "z" + std::to_string(h.labels.size()));
  }
  if (doc.contains("dist")) {
    h.extra_dist = json_util::to_matrix(doc.at("dist"));
  } else if (h.extras() <= 1) {
    h.extra_dist.assign(h.extras(), RationalVector(h.extras()));
  } else {
    throw InputError("hybrid space with several extras needs \"dist\"");
  }
  return h;
}

std::string serialize_hybrid(const HybridSpace& h) {
  json extras = json::array();
  for (std::size_t z = 0; z < h.extras(); ++z) {
    json item = pwl_to_json(h.profiles[z]);
    if (z < h.labels.size()) item["label"] = h.labels[z];
    extras.push_back(std::move(item));
  }
  return json{{"extras", std::move(extras)}, {"dist", json_util::from_matrix(h.extra_dist)}}.dump();
}

}  // namespace snacert
