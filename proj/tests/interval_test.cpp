#include "snacert/interval.hpp"
#include "snacert/error.hpp"
#include "snacert/rng.hpp"

#include <gtest/gtest.h>

using namespace snacert;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

RationalVector rv(std::initializer_list<Rational> xs) { return RationalVector(xs); }

// d_z(t) = 1/2 + |t - 1/4|
HybridSpace tent_hybrid() {
  HybridSpace h;
  h.labels = {"z"};
  h.profiles.emplace_back(rv({q(0), q(1, 4), q(1)}), rv({q(3, 4), q(1, 2), q(5, 4)}));
  h.extra_dist = {{q(0)}};
  return h;
}

// All random breakpoints are multiples of 1/60 or 1/48, hence of 1/240.
constexpr long kGrid = 240;

Rational grid_sup_ratio(const HybridFunctional& u, const HybridSpace& h) {
  Rational best = pwl_norm(u.interval).norm;
  for (std::size_t z = 0; z < h.extras(); ++z) {
    for (std::size_t w = z + 1; w < h.extras(); ++w) best = max(best, abs(u.extras[z] - u.extras[w]) / h.extra_dist[z][w]);
    for (long k = 0; k <= kGrid; ++k) {
      const Rational t(k, kGrid);
      best = max(best, abs(u.extras[z] - u.interval(t)) / h.profiles[z](t));
    }
  }
  return best;
}

}  // namespace

TEST(PiecewiseLinear, EvaluationAndArithmetic) {
  const PiecewiseLinear f(rv({q(0), q(1, 2), q(1)}), rv({q(0), q(1, 2), q(1, 4)}));
  EXPECT_EQ(f(q(1, 4)), q(1, 4));
  EXPECT_EQ(f(q(3, 4)), q(3, 8));
  EXPECT_EQ(f.slopes(), rv({q(1), q(-1, 2)}));
  const auto g = f + PiecewiseLinear(rv({q(0), q(1, 3), q(1)}), rv({q(0), q(1), q(0)}));
  EXPECT_EQ(g.breakpoints(), rv({q(0), q(1, 3), q(1, 2), q(1)}));
  EXPECT_EQ(g(q(1, 3)), q(4, 3));
  EXPECT_THROW(PiecewiseLinear(rv({q(0), q(1, 2)}), rv({q(0), q(0)})), PreconditionError);
  EXPECT_THROW(PiecewiseLinear(rv({q(0), q(1, 2), q(1, 2), q(1)}), rv({q(0), q(0), q(0), q(0)})), PreconditionError);
  EXPECT_THROW(f(q(2)), PreconditionError);
  const PiecewiseLinear collinear(rv({q(0), q(1, 2), q(1)}), rv({q(0), q(1), q(2)}));
  EXPECT_EQ(collinear.simplified().breakpoints(), rv({q(0), q(1)}));
}

TEST(PwlNorm, Examples) {
  const auto id = pwl_norm(PwlFunctional::identity());
  EXPECT_EQ(id.norm, q(1));
  EXPECT_EQ(id.attaining, (std::vector<Piece>{{q(0), q(1), q(1)}}));

  const PwlFunctional f(rv({q(0), q(1, 2), q(1)}), rv({q(0), q(1, 2), q(1, 4)}));
  const auto n = pwl_norm(f);
  EXPECT_EQ(n.norm, q(1));
  EXPECT_EQ(n.attaining, (std::vector<Piece>{{q(0), q(1, 2), q(1)}}));

  const PwlFunctional zero(rv({q(0), q(1, 3), q(1)}), rv({q(0), q(0), q(0)}));
  const auto z = pwl_norm(zero);
  EXPECT_EQ(z.norm, q(0));
  EXPECT_EQ(z.attaining.size(), 2u);
  EXPECT_THROW(PwlFunctional(rv({q(0), q(1)}), rv({q(1), q(1)})), PreconditionError);
}

TEST(Derivative, RoundTrips) {
  EXPECT_EQ(derivative_view(PwlFunctional::identity()).slopes, rv({q(1)}));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = random_pwl(seed);
    const auto s = derivative_view(f);
    ASSERT_EQ(integrate(s), f);
    ASSERT_EQ(derivative_view(integrate(s)), s);
    Rational m(0);
    for (const auto& x : s.slopes) m = max(m, abs(x));
    ASSERT_EQ(pwl_norm(f).norm, m);
  }
  EXPECT_THROW(integrate({rv({q(0), q(1)}), rv({q(1), q(2)})}), PreconditionError);
}

TEST(C0Block, Examples) {
  const RationalVector one{q(1)};
  const auto g = c0_block(one);
  EXPECT_EQ(g.breakpoints(), rv({q(0), q(1, 2), q(1)}));
  EXPECT_EQ(g.values(), rv({q(0), q(1, 2), q(1, 2)}));
  EXPECT_EQ(pwl_norm(g).norm, q(1));

  const RationalVector two{q(1), q(-1, 2)};
  const auto h = c0_block(two);
  EXPECT_EQ(h.breakpoints(), rv({q(0), q(1, 2), q(2, 3), q(1)}));
  EXPECT_EQ(h.values(), rv({q(0), q(1, 2), q(5, 12), q(5, 12)}));
  const auto n = pwl_norm(h);
  EXPECT_EQ(n.norm, q(1));
  EXPECT_EQ(n.attaining.front(), (Piece{q(0), q(1, 2), q(1)}));
  EXPECT_THROW(c0_block(RationalVector{}), PreconditionError);
}

TEST(C0Block, LinfIsometryProperty) {
  Rng rng(31);
  for (std::size_t n = 1; n <= 10; ++n) {
    std::vector<PwlFunctional> basis;
    for (std::size_t k = 0; k < n; ++k) {
      RationalVector e(n, q(0));
      e[k] = q(1);
      basis.push_back(c0_block(e));
    }
    for (int trial = 0; trial < 100; ++trial) {
      RationalVector a(n);
      for (auto& x : a) x = Rational(rng.uniform(-20, 20), rng.uniform(1, 6));
      PwlFunctional sum = PwlFunctional::zero();
      for (std::size_t k = 0; k < n; ++k) sum = sum + a[k] * basis[k];
      const auto norm = pwl_norm(sum);
      ASSERT_EQ(norm.norm, linf_norm(a));
      ASSERT_EQ(sum, c0_block(a));
      if (!norm.norm.is_zero()) {
        const auto first = std::find_if(a.begin(), a.end(), [&](const Rational& x) { return abs(x) == norm.norm; });
        const long k = 1 + (first - a.begin());
        ASSERT_EQ(norm.attaining.front().left, Rational(1) - Rational(1, k));
        ASSERT_EQ(norm.attaining.front().right, Rational(1) - Rational(1, k + 1));
      }
    }
  }
}

TEST(McShanePwl, Examples) {
  EXPECT_EQ(mcshane_pwl({{q(0), q(0)}, {q(1), q(1)}}, q(1)), PwlFunctional::identity());
  const auto tent = mcshane_pwl({{q(0), q(0)}, {q(1, 2), q(1, 2)}, {q(1), q(0)}}, q(1));
  EXPECT_EQ(tent.breakpoints(), rv({q(0), q(1, 2), q(1)}));
  EXPECT_EQ(tent.values(), rv({q(0), q(1, 2), q(0)}));
  const auto peak = mcshane_pwl({{q(0), q(0)}, {q(1), q(0)}}, q(1));
  EXPECT_EQ(peak.breakpoints(), rv({q(0), q(1, 2), q(1)}));
  EXPECT_EQ(peak(q(1, 2)), q(1, 2));
  EXPECT_THROW(mcshane_pwl({{q(0), q(0)}, {q(1, 2), q(1)}}, q(1)), PreconditionError);
  EXPECT_THROW(mcshane_pwl({{q(1, 2), q(0)}}, q(1)), PreconditionError);
  EXPECT_EQ(mcshane_pwl({{q(0), q(0)}, {q(1, 2), q(0)}}, q(0)), PwlFunctional::zero());
}

TEST(McShanePwl, MatchesPointwiseMinProperty) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Sample> samples{{q(0), q(0)}};
    const auto count = rng.uniform(1, 5);
    for (int i = 0; i < count; ++i) {
      const Rational t(rng.uniform(1, kGrid), kGrid);
      if (std::any_of(samples.begin(), samples.end(), [&](const Sample& s) { return s.t == t; })) continue;
      samples.push_back({t, Rational(rng.uniform(-20, 20), 40)});
    }
    Rational lip(0);
    for (const auto& a : samples) {
      for (const auto& b : samples) {
        if (a.t != b.t) lip = max(lip, abs(a.y - b.y) / abs(a.t - b.t));
      }
    }
    const Rational l = trial % 2 ? lip : lip + q(1, 2);
    const auto g = mcshane_pwl(samples, l);
    for (const auto& s : samples) ASSERT_EQ(g(s.t), s.y);
    ASSERT_EQ(pwl_norm(g).norm, l.is_zero() ? q(0) : l) << trial;
    for (long k = 0; k <= kGrid; ++k) {
      const Rational t(k, kGrid);
      Rational expect = samples[0].y + l * abs(t - samples[0].t);
      for (const auto& s : samples) expect = min(expect, s.y + l * abs(t - s.t));
      ASSERT_EQ(g(t), expect);
    }
  }
}

TEST(HybridValidate, Examples) {
  HybridSpace empty;
  EXPECT_TRUE(hybrid_validate(empty).empty());
  EXPECT_TRUE(hybrid_validate(tent_hybrid()).empty());

  HybridSpace steep = tent_hybrid();
  steep.profiles[0] = PiecewiseLinear(rv({q(0), q(1, 4), q(1)}), rv({q(1), q(3, 2), q(3, 2)}));
  const auto v = hybrid_validate(steep);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().check, "lipschitz");

  HybridSpace close = tent_hybrid();
  close.profiles[0] = PiecewiseLinear(rv({q(0), q(1)}), rv({q(1, 4), q(1, 4)}));
  EXPECT_EQ(hybrid_validate(close).front().check, "interval-pair");

  HybridSpace touching = tent_hybrid();
  touching.profiles[0] = PiecewiseLinear(rv({q(0), q(1)}), rv({q(0), q(1)}));
  EXPECT_EQ(hybrid_validate(touching).front().check, "positivity");

  HybridSpace two = tent_hybrid();
  two.labels.push_back("w");
  two.profiles.push_back(PiecewiseLinear::constant(q(1)));
  two.extra_dist = {{q(0), q(3)}, {q(3), q(0)}};
  EXPECT_EQ(hybrid_validate(two).front().check, "extra-interval");
  two.extra_dist = {{q(0), q(1, 2)}, {q(1, 2), q(0)}};
  EXPECT_TRUE(hybrid_validate(two).empty());
}

TEST(Retraction, Examples) {
  EXPECT_TRUE(retraction(HybridSpace{}).values.empty());
  const auto r = retraction(tent_hybrid());
  EXPECT_EQ(r.values, rv({q(3, 4)}));
  EXPECT_TRUE(r.one_lipschitz) << r.failure;

  HybridSpace far;
  far.labels = {"z"};
  far.profiles.emplace_back(rv({q(0), q(1)}), rv({q(2), q(1)}));
  far.extra_dist = {{q(0)}};
  const auto f = retraction(far);
  EXPECT_EQ(f.unclamped, rv({q(2)}));
  EXPECT_EQ(f.values, rv({q(1)}));
  EXPECT_TRUE(f.one_lipschitz);

  HybridSpace bad = tent_hybrid();
  bad.profiles[0] = PiecewiseLinear(rv({q(0), q(1)}), rv({q(0), q(1)}));
  EXPECT_THROW(retraction(bad), PreconditionError);
}

TEST(ComposeEmbed, Examples) {
  const auto h = tent_hybrid();
  const auto u = compose_embed(PwlFunctional::identity(), h);
  EXPECT_EQ(u.extras, rv({q(3, 4)}));
  const auto n = hybrid_norm(u, h);
  EXPECT_EQ(n.norm, q(1));
  EXPECT_EQ(n.witness.kind, HybridWitness::Kind::interval);

  const RationalVector a{q(1), q(-1, 2)};
  const auto v = compose_embed(c0_block(a), h);
  EXPECT_EQ(v.extras, rv({q(5, 12)}));
  const auto m = hybrid_norm(v, h);
  EXPECT_EQ(m.norm, q(1));
  EXPECT_EQ(*m.witness.piece, (Piece{q(0), q(1, 2), q(1)}));
}

TEST(HybridNorm, Examples) {
  HybridSpace h;
  h.labels = {"z"};
  h.profiles.emplace_back(rv({q(0), q(1, 2), q(1)}), rv({q(1), q(3, 2), q(1)}));
  h.extra_dist = {{q(0)}};
  ASSERT_TRUE(hybrid_validate(h).empty());
  const HybridFunctional u{PwlFunctional::zero(), {q(2)}};
  const auto n = hybrid_norm(u, h);
  EXPECT_EQ(n.norm, q(2));
  EXPECT_EQ(n.witness.kind, HybridWitness::Kind::extra_interval);
  EXPECT_EQ(n.witness.t, q(0));

  const HybridFunctional zero{PwlFunctional::zero(), {q(0)}};
  EXPECT_EQ(hybrid_norm(zero, h).norm, q(0));
  EXPECT_EQ(hybrid_norm(zero, h).witness.kind, HybridWitness::Kind::none);
}

TEST(HybridNorm, MatchesGridOracleProperty) {
  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto h = random_hybrid(seed);
    auto u = compose_embed(random_pwl(seed + 1000), h);
    for (auto& x : u.extras) x += Rational(rng.uniform(-6, 6), 4);
    ASSERT_EQ(hybrid_norm(u, h).norm, grid_sup_ratio(u, h)) << seed;
  }
}

TEST(ComposeEmbed, IsometryAndLinearityProperty) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto h = random_hybrid(seed);
    ASSERT_TRUE(hybrid_validate(h).empty());
    const auto r = retraction(h);
    ASSERT_TRUE(r.one_lipschitz) << r.failure;
    for (std::uint64_t j = 0; j < 20; ++j) {
      const auto f = random_pwl(seed * 100 + j);
      const auto g = random_pwl(seed * 100 + j + 50);
      const auto hn = hybrid_norm(compose_embed(f, h), h);
      const auto pn = pwl_norm(f);
      ASSERT_EQ(hn.norm, pn.norm);
      ASSERT_EQ(hn.interval_attaining, pn.attaining);
      if (!pn.norm.is_zero()) ASSERT_EQ(hn.witness.kind, HybridWitness::Kind::interval);
      ASSERT_EQ(compose_embed(f + g, h), compose_embed(f, h) + compose_embed(g, h));
    }
  }
}

TEST(IntervalSerialization, RoundTrips) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto h = random_hybrid(seed);
    const auto back = parse_hybrid(serialize_hybrid(h));
    EXPECT_EQ(back.profiles, h.profiles);
    EXPECT_EQ(back.extra_dist, h.extra_dist);
    EXPECT_EQ(back.labels, h.labels);
    const auto f = random_pwl(seed);
    EXPECT_EQ(parse_pwl(serialize_pwl(f)), f);
  }
  EXPECT_THROW(parse_pwl(R"({"breakpoints": ["0", "1"], "values": ["1", "1"]})"), InputError);
  EXPECT_THROW(parse_pwl(R"({"breakpoints": ["0", 0.5, "1"], "values": ["0", "1", "1"]})"), InputError);
  EXPECT_THROW(parse_hybrid(R"({"extras": [{"breakpoints": ["0", "1/2"], "values": ["1", "1"]}]})"), InputError);
}
