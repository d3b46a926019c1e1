// Acceptance suite: one PASS/FAIL line per criterion, exact rational checks
// throughout. Exit status is the number of failing criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "oracles.hpp"
#include "snacert/document.hpp"
#include "snacert/linalg.hpp"

using namespace snacert;
using cert::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string summary;
  std::string reason;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      reason = why;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Documents emitted by criteria 1-12, re-verified by criterion 13 together with
// a generator that rebuilds each one for the byte-identity check.
struct Emitted {
  std::string criterion;
  json doc;
  std::function<json()> rebuild;
};
std::vector<Emitted> emitted;

// Complementation certificates from criteria 2-3 for criterion 8.
std::vector<ComplementationCertificate> complemented;

RandomMethod alternate(std::uint64_t s) { return s % 2 ? RandomMethod::euclidean : RandomMethod::range; }

FreeVector random_free_vector(const SpacePtr& s, Rng& rng) {
  FreeVector v = FreeVector::zero(s);
  for (auto& c : v.coeffs) c = Rational(rng.uniform(-12, 12), rng.uniform(1, 6));
  return v;
}

Outcome four_point() {
  Outcome o;
  const auto t0 = Clock::now();
  std::size_t valid = 0;
  for (auto method : {RandomMethod::range, RandomMethod::euclidean}) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const auto s = share(random_space(4, seed, method));
      const auto r = four_point_basis(s);
      const bool ok = r.certificate.valid && l1_isometry_corner(r.certificate.basis).valid;
      if (ok) ++valid;
      o.require(ok, "seed " + std::to_string(seed) + " failed to certify");
      emitted.push_back({"1", cert::l1_document(r.certificate),
                         [method, seed] { return cert::l1_document(four_point_basis(share(random_space(4, seed, method))).certificate); }});
    }
  }
  const double t = seconds_since(t0);
  o.require(t < 10.0, "runtime " + std::to_string(t) + " s exceeds 10 s");
  o.summary = std::to_string(valid) + "/2000 valid certificates (" + std::to_string(t).substr(0, 5) + " s)";
  return o;
}

Outcome pipeline_k2() {
  Outcome o;
  const auto t0 = Clock::now();
  std::size_t ok_count = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 4 + seed % 5;
    auto build = [n, seed] { return theorem_pipeline(share(random_space(n, 500 + seed, alternate(seed))), 2); };
    const auto r = build();
    const bool ok = r.success() && r.witnesses_in_subspace && l1_isometry_corner(r.extended->basis).valid;
    o.require(ok, "seed " + std::to_string(seed) + ": " + r.search.report);
    if (!ok) continue;
    ++ok_count;
    complemented.push_back(*r.search.certificate);
    emitted.push_back({"2", cert::pipeline_document(r), [build] { return cert::pipeline_document(build()); }});
  }
  const double t = seconds_since(t0);
  o.require(t < 60.0, "runtime " + std::to_string(t) + " s exceeds 60 s");
  o.summary = std::to_string(ok_count) + "/100 valid l1^2 certificates with witnesses in K (" +
              std::to_string(t).substr(0, 5) + " s)";
  return o;
}

Outcome k3() {
  Outcome o;
  auto t0 = Clock::now();
  std::size_t direct_ok = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto build = [seed] { return direct_search_l1(share(random_space(8, 700 + seed, alternate(seed))), 3); };
    const auto r = build();
    const bool ok = r.certificate && r.certificate->valid && l1_isometry_corner(r.certificate->basis).valid;
    o.require(ok, "direct search seed " + std::to_string(seed) + ": " + r.report);
    if (!ok) continue;
    ++direct_ok;
    emitted.push_back({"3", cert::l1_document(*r.certificate), [build] { return cert::l1_document(*build().certificate); }});
  }
  const double t_direct = seconds_since(t0);
  o.require(t_direct < 300.0, "direct search runtime " + std::to_string(t_direct) + " s exceeds 5 min");

  t0 = Clock::now();
  auto eq8 = [] { return theorem_pipeline(share(PointedMetricSpace::equilateral(8)), 3); };
  const auto r = eq8();
  const double t_eq = seconds_since(t0);
  o.require(r.success(), "pipeline on the equilateral 8-point space: " + r.search.report);
  o.require(t_eq < 600.0, "equilateral pipeline exceeded 10 min");
  if (r.success()) {
    complemented.push_back(*r.search.certificate);
    emitted.push_back({"3", cert::pipeline_document(r), [eq8] { return cert::pipeline_document(eq8()); }});
  }

  // Pipeline on the random spaces: reported as data.
  std::size_t random_ok = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto build = [seed] { return theorem_pipeline(share(random_space(8, 700 + seed, alternate(seed))), 3); };
    const auto p = build();
    if (!p.success()) continue;
    ++random_ok;
    complemented.push_back(*p.search.certificate);
    emitted.push_back({"3", cert::pipeline_document(p), [build] { return cert::pipeline_document(build()); }});
  }
  o.summary = "direct search " + std::to_string(direct_ok) + "/20 (" + std::to_string(t_direct).substr(0, 5) +
              " s); pipeline on equilateral 8 " + (r.success() ? "found l1^4" : "exhausted") + " (" +
              std::to_string(t_eq).substr(0, 5) + " s); pipeline on the random spaces " + std::to_string(random_ok) +
              "/20 (exhaustion reported, not failed)";
  return o;
}

Outcome dimension_boundary() {
  Outcome o;
  std::ostringstream s;
  for (std::size_t n = 2; n <= 6; ++n) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto space = share(seed == 0 ? PointedMetricSpace::equilateral(n) : random_space(n, seed, alternate(seed)));
      // Distance functionals rebased at 0 span the n - 1 free coordinates...
      RationalMatrix rows;
      for (std::size_t x = 1; x < n; ++x) {
        RationalVector r(n);
        for (std::size_t y = 0; y < n; ++y) r[y] = (*space)(y, x) - (*space)(0, x);
        rows.push_back(r);
      }
      o.require(linalg::rank(rows) == n - 1, "distance functionals do not span at n=" + std::to_string(n));
      // ...and every Lip_0 functional vanishes at the base, so n of them are dependent.
      Rng rng(seed + 10 * n);
      RationalVector extra(n);
      for (std::size_t y = 1; y < n; ++y) extra[y] = Rational(rng.uniform(-9, 9), rng.uniform(1, 4));
      rows.push_back(extra);
      RationalMatrix with_base = rows;
      o.require(linalg::rank(with_base) == n - 1, "n functionals independent at n=" + std::to_string(n));
      const auto r = direct_search_l1(space, n);
      o.require(!r.certificate, "an l1^n certificate on n points at n=" + std::to_string(n));
    }
    s << (n > 2 ? ", " : "") << "n=" << n << ": dim " << n - 1;
  }
  o.summary = "Lip_0 dimension n-1 by exact rank (" + s.str() + "); no l1^n basis found";
  return o;
}

Outcome free_duality() {
  Outcome o;
  const auto t0 = Clock::now();
  Rng rng(55);
  std::size_t agree = 0, molecules_checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const auto s = share(random_space(n, 3000 + trial, alternate(trial)));
    const auto v = random_free_vector(s, rng);
    const auto p = free_norm_primal(v);
    const auto d = free_norm_dual(v);
    if (p.value == d.value) ++agree;
    o.require(p.value == d.value, "primal/dual mismatch at trial " + std::to_string(trial));
    o.require(lip_norm(d.witness).norm <= Rational(1) && pairing(d.witness, v) == d.value, "bad dual witness");
    for (const auto& m : molecules(*s)) {
      ++molecules_checked;
      o.require(free_norm(m.vector(s)) == Rational(1), "molecule norm differs from 1");
    }
  }
  const double t = seconds_since(t0);
  o.require(t < 60.0, "runtime exceeds 60 s");
  o.summary = std::to_string(agree) + "/500 exact primal = dual; " + std::to_string(molecules_checked) +
              " molecules of norm 1 (" + std::to_string(t).substr(0, 5) + " s)";
  return o;
}

Outcome vertex_oracle() {
  Outcome o;
  Rng rng(66);
  std::size_t agree = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto s = share(random_space(n, 4000 + trial, alternate(trial)));
    const auto v = random_free_vector(s, rng);
    const bool ok = free_norm(v) == oracle::free_norm_by_vertices(v);
    if (ok) ++agree;
    o.require(ok, "LP and vertex enumeration disagree at trial " + std::to_string(trial));
  }
  o.summary = std::to_string(agree) + "/100 exact agreements (n <= 4)";
  return o;
}

Outcome cross_oracle() {
  Outcome o;
  Rng rng(8080);
  std::size_t agree = 0, valid = 0, mutated = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = share(random_space(3 + trial % 4, 5000 + trial, alternate(trial)));
    auto basis = generators::random_basis(s, 1 + trial % 3, rng);
    if (trial % 3 == 0) {
      basis = generators::mutate(std::move(basis), rng);
      ++mutated;
    }
    const auto lip = l1_isometry_lip(basis);
    const auto corner = l1_isometry_corner(basis);
    if (lip.valid == corner.valid) ++agree;
    o.require(lip.valid == corner.valid, "criteria disagree at trial " + std::to_string(trial));
    emitted.push_back({"7", cert::l1_document(lip), {}});
    if (!lip.valid) continue;
    ++valid;
    for (int r = 0; r < 100; ++r) {
      RationalVector a(basis.size());
      for (auto& x : a) x = Rational(rng.uniform(-9, 9), rng.uniform(1, 5));
      o.require(combo_norm(basis, a) == l1_norm(a), "soundness: combo norm differs from l1 norm");
    }
  }
  o.summary = std::to_string(agree) + "/1000 verdicts agree (" + std::to_string(valid) + " valid, " +
              std::to_string(1000 - valid) + " invalid, " + std::to_string(mutated) +
              " mutated); 100 soundness samples per valid basis";
  return o;
}

Outcome duality_lifts() {
  Outcome o;
  std::size_t ok_count = 0;
  for (const auto& c : complemented) {
    const auto lift = duality_lift(c);
    const bool ok = lift.biorthogonal && lift.certificate.valid;
    if (ok) ++ok_count;
    o.require(ok, "lift failed: " + lift.certificate.failure);
    emitted.push_back({"8", cert::linf_document(lift.certificate), [c] { return cert::linf_document(duality_lift(c).certificate); }});
  }
  o.require(!complemented.empty(), "no complementation certificates collected");
  o.summary = std::to_string(ok_count) + "/" + std::to_string(complemented.size()) +
              " lifts are exactly biorthogonal and l_inf^m-certified";
  return o;
}

Outcome rademacher() {
  Outcome o;
  for (std::size_t n = 1; n <= 5; ++n) {
    o.require(rademacher_is_l1_isometric(rademacher_embedding(n)), "corner check fails at n=" + std::to_string(n));
  }
  o.summary = "exhaustive corner checks pass for n = 1..5";
  return o;
}

Outcome evaluation() {
  Outcome o;
  std::size_t ok_count = 0;
  for (auto kind : {EmbedKind::l1, EmbedKind::linf}) {
    for (std::size_t d = 1; d <= 4; ++d) {
      const auto e = evaluation_embedding(kind, d);
      if (e.valid()) ++ok_count;
      o.require(e.valid(), std::string(kind == EmbedKind::l1 ? "l1" : "linf") + " d=" + std::to_string(d) +
                               (e.designated_witnesses ? " certificate invalid" : " missing (0, vertex) witness"));
      auto build = [kind, d] {
        const auto x = evaluation_embedding(kind, d);
        return x.l1 ? cert::l1_document(*x.l1) : cert::linf_document(*x.linf);
      };
      emitted.push_back({"10", build(), build});
    }
  }
  o.summary = std::to_string(ok_count) + "/8 embeddings valid with designated (0, vertex) witnesses";
  return o;
}

Outcome c0() {
  Outcome o;
  Rng rng(11);
  std::size_t checks = 0;
  std::string sample;
  for (std::size_t n = 1; n <= 10; ++n) {
    std::vector<PwlFunctional> g;
    for (std::size_t k = 0; k < n; ++k) {
      RationalVector e(n, Rational(0));
      e[k] = Rational(1);
      g.push_back(c0_block(e));
    }
    for (int t = 0; t < 100; ++t) {
      RationalVector a(n);
      for (auto& x : a) x = Rational(rng.uniform(-20, 20), rng.uniform(1, 6));
      PwlFunctional sum = PwlFunctional::zero();
      for (std::size_t k = 0; k < n; ++k) sum = sum + a[k] * g[k];
      const auto pn = pwl_norm(sum);
      ++checks;
      o.require(pn.norm == linf_norm(a), "norm differs from max |a_k|");
      o.require(pn.norm.is_zero() || !pn.attaining.empty(), "no attaining piece");
      if (n == 10 && t == 0) {
        sample = "e.g. N=10 norm " + pn.norm.str() + " attained on [" + pn.attaining.front().left.str() + "," +
                 pn.attaining.front().right.str() + "]";
      }
    }
  }
  o.summary = std::to_string(checks) + " exact identities pwl_norm(sum a_k G_k) = max|a_k| for N <= 10; " + sample;
  return o;
}

Outcome retraction_transfer() {
  Outcome o;
  std::size_t checks = 0, with_extras = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto h = random_hybrid(seed, 3, 8);
    o.require(hybrid_validate(h).empty(), "generated hybrid space is invalid");
    if (h.extras() > 0) ++with_extras;
    const auto r = retraction(h);
    o.require(r.one_lipschitz, "retraction check failed: " + r.failure);
    for (std::uint64_t j = 0; j < 20; ++j) {
      const auto f = random_pwl(seed * 100 + j, 8);
      const auto hn = hybrid_norm(compose_embed(f, h), h);
      const auto pn = pwl_norm(f);
      ++checks;
      o.require(hn.norm == pn.norm, "norm not preserved at seed " + std::to_string(seed));
      o.require(hn.interval_attaining == pn.attaining, "interval witnesses changed");
      o.require(pn.norm.is_zero() || hn.witness.kind == HybridWitness::Kind::interval, "witness left the interval");
      emitted.push_back({"12", cert::hybrid_document(h, f), [seed, j] {
                           return cert::hybrid_document(random_hybrid(seed, 3, 8), random_pwl(seed * 100 + j, 8));
                         }});
    }
  }
  o.summary = std::to_string(checks) + " exact isometries hybrid_norm = pwl_norm over 50 hybrid spaces (" +
              std::to_string(with_extras) + " with extra points)";
  return o;
}

Outcome reverification() {
  Outcome o;
  std::size_t reproduced = 0, rebuilt = 0;
  for (const auto& e : emitted) {
    const auto v = cert::verify(json::parse(e.doc.dump()));
    if (v.reproduced) ++reproduced;
    o.require(v.reproduced, "criterion " + e.criterion + " certificate: verdict not reproduced (" + v.failing_check + ")");
    if (e.rebuild) {
      ++rebuilt;
      o.require(e.rebuild().dump() == e.doc.dump(), "criterion " + e.criterion + " certificate is not byte-identical on rerun");
    }
  }
  o.summary = std::to_string(reproduced) + "/" + std::to_string(emitted.size()) + " verdicts reproduced by verify; " +
              std::to_string(rebuilt) + " certificates byte-identical on rerun";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"four-point construction", four_point},
      {"k=2 pipeline", pipeline_k2},
      {"k=3 search and pipeline", k3},
      {"dimension boundary", dimension_boundary},
      {"free-space duality", free_duality},
      {"vertex-enumeration oracle", vertex_oracle},
      {"certificate cross-oracle", cross_oracle},
      {"duality lift", duality_lifts},
      {"Rademacher embedding", rademacher},
      {"evaluation embedding", evaluation},
      {"interval c0 blocks", c0},
      {"retraction transfer", retraction_transfer},
      {"determinism and re-verification", reverification},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.reason = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu (%s): %s%s%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.summary.c_str(), o.pass ? "" : " -- ", o.pass ? "" : o.reason.c_str());
    std::fflush(stdout);
  }
  return failures;
}
