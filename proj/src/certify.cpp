#include "snacert/certify.hpp"

#include "snacert/error.hpp"

#include <sstream>

namespace snacert {

std::vector<std::vector<int>> sign_classes(std::size_t n) {
  if (n == 0) return {};
  std::vector<std::vector<int>> out;
  const std::size_t count = std::size_t{1} << (n - 1);
  for (std::size_t s = 0; s < count; ++s) {
    std::vector<int> eps(n, 1);
    for (std::size_t k = 1; k < n; ++k) {
      if ((s >> (k - 1)) & 1) eps[k] = -1;
    }
    out.push_back(std::move(eps));
  }
  return out;
}

namespace {

void require_common_space(std::span<const LipFunctional> basis) {
  if (basis.empty()) throw PreconditionError("empty basis");
  for (const auto& f : basis) {
    if (f.space() != basis.front().space() && f.metric() != basis.front().metric()) {
      throw PreconditionError("basis functionals live on different spaces");
    }
  }
}

std::string vector_str(std::span<const Rational> w) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
  os << ')';
  return os.str();
}

template <class Vec>
std::string signs_str(const Vec& eps) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < eps.size(); ++i) os << (i ? "," : "") << eps[i];
  os << ')';
  return os.str();
}

bool allowed(const WitnessDomain& domain, std::size_t x, std::size_t y) {
  return !domain || ((*domain)[x] && (*domain)[y]);
}

// +1 if w == target, -1 if w == -target, 0 otherwise.
template <class Target>
int matches(const RationalVector& w, const Target& target) {
  bool plus = true;
  bool minus = true;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Rational t(target[k]);
    if (w[k] != t) plus = false;
    if (w[k] != -t) minus = false;
  }
  return plus ? 1 : (minus ? -1 : 0);
}

std::optional<PairWitness> find_witness(const std::vector<QuotientVector>& quotients, const WitnessDomain& domain,
                                        const auto& target) {
  for (const auto& q : quotients) {
    if (!allowed(domain, q.x, q.y)) continue;
    const int m = matches(q.w, target);
    if (m > 0) return PairWitness{q.x, q.y};
    if (m < 0) return PairWitness{q.y, q.x};
  }
  return std::nullopt;
}

void check_domain(const WitnessDomain& domain, std::size_t n) {
  if (domain && domain->size() != n) throw PreconditionError("witness domain size does not match the space");
}

}  // namespace

std::vector<QuotientVector> quotient_vectors(std::span<const LipFunctional> basis) {
  require_common_space(basis);
  const PointedMetricSpace& s = basis.front().metric();
  std::vector<QuotientVector> out;
  for (std::size_t x = 0; x < s.size(); ++x) {
    for (std::size_t y = x + 1; y < s.size(); ++y) {
      QuotientVector q{x, y, RationalVector(basis.size())};
      for (std::size_t k = 0; k < basis.size(); ++k) q.w[k] = basis[k].quotient(x, y);
      out.push_back(std::move(q));
    }
  }
  return out;
}

Rational combo_norm(std::span<const LipFunctional> basis, std::span<const Rational> a) {
  if (a.size() != basis.size()) throw PreconditionError("combo_norm: coefficient count does not match the basis");
  Rational best;
  for (const auto& q : quotient_vectors(basis)) best = max(best, abs(dot(a, q.w)));
  return best;
}

L1IsometryCertificate l1_isometry_lip(std::vector<LipFunctional> basis, const WitnessDomain& domain) {
  L1IsometryCertificate cert;
  cert.quotients = quotient_vectors(basis);
  check_domain(domain, basis.front().size());
  for (const auto& q : cert.quotients) {
    if (linf_norm(q.w) > Rational(1)) {
      cert.cube_violation = q;
      break;
    }
  }
  for (auto& eps : sign_classes(basis.size())) {
    SignWitness sw{eps, find_witness(cert.quotients, domain, eps)};
    cert.sign_witnesses.push_back(std::move(sw));
  }
  cert.basis = std::move(basis);
  if (cert.cube_violation) {
    cert.failure = "cube check failed at pair (" + std::to_string(cert.cube_violation->x) + "," +
                   std::to_string(cert.cube_violation->y) + "): w = " + vector_str(cert.cube_violation->w);
    return cert;
  }
  for (const auto& sw : cert.sign_witnesses) {
    if (!sw.pair) {
      cert.failure = "no witness pair for sign vector " + signs_str(sw.sign);
      return cert;
    }
  }
  cert.valid = true;
  return cert;
}

CornerCheck l1_isometry_corner(std::span<const LipFunctional> basis) {
  CornerCheck out;
  const std::size_t n = basis.size();
  out.valid = true;
  for (std::size_t k = 0; k < n; ++k) {
    RationalVector e(n);
    e[k] = 1;
    out.unit_norms.push_back(combo_norm(basis, e));
    if (out.valid && out.unit_norms.back() != Rational(1)) {
      out.valid = false;
      out.failing_coefficients = e;
    }
  }
  const Rational target(static_cast<long>(n));
  for (const auto& eps : sign_classes(n)) {
    RationalVector a(eps.begin(), eps.end());
    out.corner_norms.push_back(combo_norm(basis, a));
    if (out.valid && out.corner_norms.back() != target) {
      out.valid = false;
      out.failing_coefficients = a;
    }
  }
  return out;
}

FreeL1Check l1_isometry_free(std::span<const FreeVector> vectors) {
  FreeL1Check out;
  if (vectors.empty()) throw PreconditionError("l1_isometry_free: empty family");
  const std::size_t m = vectors.size();
  out.valid = true;
  for (std::size_t k = 0; k < m; ++k) {
    out.basis_norms.push_back(free_norm(vectors[k]));
    if (out.valid && out.basis_norms.back() != Rational(1)) {
      out.valid = false;
      out.failure = "free norm of u" + std::to_string(k + 1) + " is " + out.basis_norms.back().str() + ", not 1";
    }
  }
  const Rational target(static_cast<long>(m));
  out.signs = sign_classes(m);
  for (const auto& eps : out.signs) {
    FreeVector sum = FreeVector::zero(vectors.front().space);
    for (std::size_t k = 0; k < m; ++k) sum = sum + Rational(eps[k]) * vectors[k];
    out.corner_norms.push_back(free_norm(sum));
    if (out.valid && out.corner_norms.back() != target) {
      out.valid = false;
      out.failure = "free norm at sign vector " + signs_str(eps) + " is " + out.corner_norms.back().str() +
                    ", not " + target.str();
    }
  }
  return out;
}

LinfIsometryCertificate linf_isometry_lip(std::vector<LipFunctional> basis, const WitnessDomain& domain) {
  LinfIsometryCertificate cert;
  cert.quotients = quotient_vectors(basis);
  check_domain(domain, basis.front().size());
  for (const auto& q : cert.quotients) {
    if (l1_norm(q.w) > Rational(1)) {
      cert.ball_violation = q;
      break;
    }
  }
  const std::size_t m = basis.size();
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<int> e(m, 0);
    e[j] = 1;
    cert.vertex_witnesses.push_back({j, find_witness(cert.quotients, domain, e)});
  }
  cert.basis = std::move(basis);
  if (cert.ball_violation) {
    cert.failure = "l1-ball check failed at pair (" + std::to_string(cert.ball_violation->x) + "," +
                   std::to_string(cert.ball_violation->y) + "): w = " + vector_str(cert.ball_violation->w);
    return cert;
  }
  for (const auto& vw : cert.vertex_witnesses) {
    if (!vw.pair) {
      cert.failure = "no witness pair for vertex e" + std::to_string(vw.coordinate + 1);
      return cert;
    }
  }
  cert.valid = true;
  return cert;
}

}  // namespace snacert
