#include "snacert/error.hpp"
#include "snacert/metric.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace snacert;

namespace {

RationalMatrix from_ints(std::initializer_list<std::initializer_list<long>> rows) {
  RationalMatrix m;
  for (const auto& r : rows) {
    RationalVector v;
    for (long x : r) v.emplace_back(x);
    m.push_back(std::move(v));
  }
  return m;
}

// Test-side oracle: all ordered triples of distinct points.
std::size_t count_triangle_failures(const RationalMatrix& d) {
  std::size_t bad = 0;
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (i != j && j != k && i != k && d[i][k] > d[i][j] + d[j][k]) ++bad;
  return bad;
}

}  // namespace

TEST(Rational, ParseCanonicalForm) {
  EXPECT_EQ(Rational::parse("6/4").str(), "3/2");
  EXPECT_EQ(Rational::parse("-10/5").str(), "-2");
  EXPECT_EQ(Rational::parse("+7").str(), "7");
  EXPECT_EQ(Rational::parse("0/9").str(), "0");
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1.5"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1/-2"), std::invalid_argument);
  EXPECT_THROW(Rational::parse(""), std::invalid_argument);
}

TEST(Rational, ExactArithmetic) {
  const Rational third(1, 3);
  EXPECT_EQ(third + third + third, Rational(1));
  EXPECT_EQ(Rational(2, 3) * Rational(3, 4), Rational(1, 2));
  EXPECT_LT(Rational(-1, 2), Rational(1, 3));
  EXPECT_EQ(abs(Rational(-5, 7)), Rational(5, 7));
}

TEST(ParseSpace, MinimalTwoPointSpace) {
  const auto s = parse_space(R"({"dist": [["0","1"],["1","0"]]})");
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s(0, 1), Rational(1));
}

TEST(ParseSpace, FourPointTriangleBoundary) {
  const auto m = from_ints({{0, 1, 2, 2}, {1, 0, 2, 2}, {2, 2, 0, 3}, {2, 2, 3, 0}});
  EXPECT_EQ(count_triangle_failures(m), 0u);
  const auto s = parse_space(R"({"dist": [["0","1","2","2"],["1","0","2","2"],["2","2","0","3"],["2","2","3","0"]]})");
  EXPECT_EQ(s.size(), 4u);
  EXPECT_TRUE(validate(s.matrix()).empty());
}

TEST(ParseSpace, ReportsViolatingTriple) {
  try {
    parse_space(R"({"dist": [["0","1","5"],["1","0","1"],["5","1","0"]]})");
    FAIL() << "expected a metric violation";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("(0,1,2)"), std::string::npos) << e.what();
  }
}

TEST(ParseSpace, SyntaxErrors) {
  EXPECT_THROW(parse_space(R"({"dist": [["0","x"],["1","0"]]})"), InputError);
  EXPECT_THROW(parse_space(R"({"dist": [["0","1"],["1"]]})"), InputError);
  EXPECT_THROW(parse_space(R"({"dist": [["0",0.5],["0.5","0"]]})"), InputError);
  EXPECT_THROW(parse_space("not json"), InputError);
  EXPECT_THROW(parse_space(R"({"points": ["a"], "dist": [["0","1"],["1","0"]]})"), InputError);
}

TEST(Validate, EquilateralIsClean) {
  EXPECT_TRUE(validate(PointedMetricSpace::equilateral(4).matrix()).empty());
}

TEST(Validate, AsymmetryAndPositivity) {
  auto m = PointedMetricSpace::equilateral(4).matrix();
  m[1][2] = Rational(3, 2);
  auto v = validate(m);
  ASSERT_EQ(std::count_if(v.begin(), v.end(), [](const Violation& x) { return x.kind == Violation::Kind::symmetry; }), 1);
  EXPECT_EQ(v.front().indices, (std::vector<std::size_t>{1, 2}));

  auto z = PointedMetricSpace::equilateral(3).matrix();
  z[0][2] = z[2][0] = 0;
  v = validate(z);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().kind, Violation::Kind::positivity);
  EXPECT_EQ(v.front().indices, (std::vector<std::size_t>{0, 2}));
}

TEST(Validate, TooSmallAndRagged) {
  EXPECT_EQ(validate(from_ints({{0}})).front().kind, Violation::Kind::shape);
  EXPECT_EQ(validate(from_ints({{0, 1}, {1}})).front().kind, Violation::Kind::shape);
  EXPECT_EQ(validate(from_ints({{1, 1}, {1, 0}})).front().kind, Violation::Kind::diagonal);
}

TEST(RandomSpace, TwoPointRange) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = random_space(2, seed, RandomMethod::range);
    EXPECT_GE(s(0, 1), Rational(1));
    EXPECT_LE(s(0, 1), Rational(2));
  }
  EXPECT_THROW(random_space(1, 0, RandomMethod::range), PreconditionError);
}

TEST(RandomSpace, RangePropertyOverSeeds) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto s = random_space(4, seed, RandomMethod::range);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        if (i != j) {
          ASSERT_GE(s(i, j), Rational(1));
          ASSERT_LE(s(i, j), Rational(2));
          ASSERT_LE(s(i, j).denominator(), 64);
        }
    ASSERT_TRUE(validate(s.matrix()).empty());
    ASSERT_EQ(count_triangle_failures(s.matrix()), 0u);
  }
}

TEST(RandomSpace, EuclideanPropertyOverSeeds) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto s = random_space(5, seed, RandomMethod::euclidean);
    ASSERT_TRUE(validate(s.matrix()).empty());
    ASSERT_EQ(count_triangle_failures(s.matrix()), 0u);
  }
}

TEST(RandomSpace, Reproducible) {
  for (auto method : {RandomMethod::range, RandomMethod::euclidean}) {
    EXPECT_EQ(serialize_space(random_space(6, 42, method)), serialize_space(random_space(6, 42, method)));
    EXPECT_NE(serialize_space(random_space(6, 42, method)), serialize_space(random_space(6, 43, method)));
  }
}

TEST(Restrict, IdentityUnderFullIndexSet) {
  const auto s = random_space(5, 3, RandomMethod::range);
  std::vector<std::size_t> all(5);
  std::iota(all.begin(), all.end(), 0);
  const auto sub = restrict(s, all);
  EXPECT_EQ(sub.space, s);
  EXPECT_EQ(sub.parent_index, all);
  EXPECT_EQ(restrict(sub.space, all).space, s);
}

TEST(Restrict, EquilateralSubmatrix) {
  const std::vector<std::size_t> idx{0, 1, 2, 3};
  EXPECT_EQ(restrict(PointedMetricSpace::equilateral(6), idx).space, PointedMetricSpace::equilateral(4));
}

TEST(Restrict, NewBaseRemapsIndex) {
  const auto s = random_space(5, 11, RandomMethod::euclidean);
  const std::vector<std::size_t> idx{3, 0, 4};
  const auto sub = restrict(s, idx);
  EXPECT_EQ(sub.parent_index, idx);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(sub.space(a, b), s(idx[a], idx[b]));
}

TEST(Restrict, CommutesWithLabelPermutation) {
  const auto m = random_space(4, 5, RandomMethod::range).matrix();
  const PointedMetricSpace s(m, {"a", "b", "c", "d"});
  const std::vector<std::size_t> idx{0, 2, 3};
  const auto sub = restrict(s, idx);
  EXPECT_EQ(sub.space.labels(), (std::vector<std::string>{"a", "c", "d"}));
  // Permuting the parent and the index list together yields the same subspace.
  const std::vector<std::size_t> perm{0, 3, 1, 2};  // new position -> old index
  RationalMatrix pm(4, RationalVector(4));
  std::vector<std::string> pl(4);
  for (std::size_t a = 0; a < 4; ++a) {
    pl[a] = s.labels()[perm[a]];
    for (std::size_t b = 0; b < 4; ++b) pm[a][b] = m[perm[a]][perm[b]];
  }
  const PointedMetricSpace ps(pm, pl);
  const std::vector<std::size_t> pidx{0, 3, 1};  // positions of old 0, 2, 3
  EXPECT_EQ(restrict(ps, pidx).space, sub.space);
}

TEST(Restrict, Errors) {
  const auto s = PointedMetricSpace::equilateral(4);
  EXPECT_THROW(restrict(s, std::vector<std::size_t>{0, 0}), PreconditionError);
  EXPECT_THROW(restrict(s, std::vector<std::size_t>{0, 7}), PreconditionError);
  EXPECT_THROW(restrict(s, std::vector<std::size_t>{1}), PreconditionError);
}

TEST(Serialize, RoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = random_space(2 + seed % 6, seed, seed % 2 ? RandomMethod::range : RandomMethod::euclidean);
    const std::string text = serialize_space(s);
    const auto back = parse_space(text);
    ASSERT_EQ(back, s);
    ASSERT_EQ(serialize_space(back), text);
  }
  const PointedMetricSpace labelled(PointedMetricSpace::equilateral(3).matrix(), {"o", "p", "q"});
  EXPECT_EQ(parse_space(serialize_space(labelled)), labelled);
}
