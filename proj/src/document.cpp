#include "snacert/document.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>

#include "snacert/error.hpp"
#include "snacert/json_util.hpp"
#include "snacert/linalg.hpp"

namespace snacert::cert {

using json_util::from_matrix;
using json_util::from_vector;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

std::string space_digest(const PointedMetricSpace& space) { return sha256_hex(serialize_space(space)); }

std::string hybrid_digest(const HybridSpace& space) { return sha256_hex(serialize_hybrid(space)); }

namespace {

json header(std::string_view kind, json config) {
  return {{"kind", kind}, {"tool", {{"name", kToolName}, {"version", kToolVersion}}}, {"config", std::move(config)}};
}

void attach_space(json& doc, const PointedMetricSpace& space) {
  doc["space"] = json::parse(serialize_space(space));
  doc["space_digest"] = space_digest(space);
}

json basis_json(const std::vector<LipFunctional>& basis) {
  json out = json::array();
  for (const auto& f : basis) out.push_back(from_vector(f.values()));
  return out;
}

json pair_json(const std::optional<PairWitness>& p) { return p ? json::array({p->x, p->y}) : json(nullptr); }

json l1_witnesses(const L1IsometryCertificate& c) {
  json out = json::array();
  for (const auto& w : c.sign_witnesses) out.push_back({{"sign", w.sign}, {"pair", pair_json(w.pair)}});
  return out;
}

json linf_witnesses(const LinfIsometryCertificate& c) {
  json out = json::array();
  for (const auto& w : c.vertex_witnesses) out.push_back({{"coordinate", w.coordinate}, {"pair", pair_json(w.pair)}});
  return out;
}

json free_basis_json(const std::vector<FreeVector>& basis) {
  json out = json::array();
  for (const auto& u : basis) out.push_back(from_vector(u.coeffs));
  return out;
}

json complementation_json(const ComplementationCertificate& c) {
  return {{"basis", free_basis_json(c.basis)}, {"projection", from_matrix(c.projection.matrix)}};
}

std::string verdict(bool valid) { return valid ? "valid" : "invalid"; }

const SpacePtr& space_of(const std::vector<LipFunctional>& basis) {
  if (basis.empty()) throw PreconditionError("certificate document needs a nonempty basis");
  return basis.front().space();
}

}  // namespace

json l1_document(const L1IsometryCertificate& cert, json config) {
  json doc = header("l1-isometry", std::move(config));
  attach_space(doc, *space_of(cert.basis));
  doc["basis"] = basis_json(cert.basis);
  doc["witnesses"] = l1_witnesses(cert);
  doc["verdict"] = verdict(cert.valid);
  if (!cert.valid) doc["failure"] = cert.failure;
  return doc;
}

json linf_document(const LinfIsometryCertificate& cert, json config) {
  json doc = header("linf-isometry", std::move(config));
  attach_space(doc, *space_of(cert.basis));
  doc["basis"] = basis_json(cert.basis);
  doc["witnesses"] = linf_witnesses(cert);
  doc["verdict"] = verdict(cert.valid);
  if (!cert.valid) doc["failure"] = cert.failure;
  return doc;
}

json complementation_document(const ComplementationCertificate& cert, json config) {
  json doc = header("complementation", std::move(config));
  attach_space(doc, *cert.projection.space);
  doc.update(complementation_json(cert));
  doc["witnesses"] = {{"norm_argmax", {cert.norm.argmax.x, cert.norm.argmax.y}}};
  doc["verdict"] = verdict(cert.valid());
  if (!cert.valid()) doc["failure"] = cert.failure();
  return doc;
}

json pipeline_document(const PipelineResult& result, json config) {
  if (!result.success()) throw PreconditionError("pipeline_document: pipeline did not succeed");
  config["k"] = result.k;
  json doc = header("pipeline", std::move(config));
  const auto& cert = result.extended->certificate;
  attach_space(doc, *space_of(cert.basis));
  doc["subspace"] = result.subspace;
  doc["complementation"] = complementation_json(*result.search.certificate);
  doc["lift"] = basis_json(result.lift->basis);
  doc["subspace_basis"] = basis_json(result.on_subspace->basis);
  doc["basis"] = basis_json(cert.basis);
  doc["witnesses"] = l1_witnesses(cert);
  doc["verdict"] = verdict(cert.valid && result.witnesses_in_subspace);
  return doc;
}

json hybrid_document(const HybridSpace& space, const PwlFunctional& f, json config) {
  json doc = header("hybrid-embed", std::move(config));
  doc["hybrid"] = json::parse(serialize_hybrid(space));
  doc["space_digest"] = hybrid_digest(space);
  doc["functional"] = json::parse(serialize_pwl(f));
  const Retraction r = retraction(space);
  const HybridFunctional u = compose_embed(f, space);
  const HybridNorm hn = hybrid_norm(u, space);
  const PwlNorm pn = pwl_norm(f);
  doc["retraction"] = from_vector(r.values);
  doc["basis"] = json::array({from_vector(u.extras)});
  json w = {{"kind", to_string(hn.witness.kind)}};
  if (hn.witness.piece) {
    w["left"] = hn.witness.piece->left.str();
    w["right"] = hn.witness.piece->right.str();
  }
  doc["witnesses"] = json::array({w});
  doc["norm"] = hn.norm.str();
  const bool ok = r.one_lipschitz && hn.norm == pn.norm &&
                  (pn.norm.is_zero() || hn.witness.kind == HybridWitness::Kind::interval);
  doc["verdict"] = verdict(ok);
  return doc;
}

json Verification::to_json() const {
  json out = {{"kind", kind},
              {"stated_verdict", stated},
              {"verdict", verdict(valid)},
              {"reproduced", reproduced},
              {"checks_passed", passed}};
  if (!failing_check.empty()) {
    out["failing_check"] = failing_check;
    out["detail"] = detail;
  }
  return out;
}

// --- Verification --------------------------------------------------------------

namespace {

class Checks {
 public:
  explicit Checks(Verification& v) : v_(v) {}

  bool operator()(bool ok, const std::string& name, const std::string& detail = {}) {
    if (ok) {
      v_.passed.push_back(name);
    } else if (v_.failing_check.empty()) {
      v_.failing_check = name;
      v_.detail = detail.empty() ? name + " failed" : detail;
    }
    return ok;
  }

 private:
  Verification& v_;
};

const json& field(const json& doc, std::string_view key) {
  if (!doc.is_object() || !doc.contains(key)) throw InputError("certificate is missing \"" + std::string(key) + "\"");
  return doc.at(std::string(key));
}

std::size_t index_of(const json& j, std::size_t n, std::string_view what) {
  if (!j.is_number_unsigned() || j.get<std::size_t>() >= n) {
    throw InputError(std::string(what) + ": point index out of range: " + j.dump());
  }
  return j.get<std::size_t>();
}

RationalMatrix rows_of(const json& j, std::string_view what) {
  RationalMatrix m = json_util::to_matrix(j);
  if (m.empty()) throw InputError(std::string(what) + ": empty");
  return m;
}

// Quotient vector (f_1(x)-f_1(y), ..., f_k(x)-f_k(y)) / d(x,y).
RationalVector quotient(const PointedMetricSpace& d, const RationalMatrix& basis, std::size_t x, std::size_t y) {
  RationalVector w;
  for (const auto& f : basis) w.push_back((f[x] - f[y]) / d(x, y));
  return w;
}

PointedMetricSpace read_space(const json& doc, Checks& check) {
  const PointedMetricSpace space = parse_space(field(doc, "space").dump());
  const json& digest = field(doc, "space_digest");
  check(digest.is_string() && digest.get<std::string>() == space_digest(space), "space-digest",
        "space digest does not match the embedded space");
  return space;
}

bool basis_shape(const PointedMetricSpace& d, const RationalMatrix& basis, Checks& check, const std::string& name) {
  bool ok = !basis.empty();
  for (const auto& f : basis) ok = ok && f.size() == d.size() && f[0].is_zero();
  return check(ok, name, name + ": every functional needs one value per point and must vanish at the base");
}

std::optional<std::pair<std::size_t, std::size_t>> read_pair(const json& j, std::size_t n, std::string_view what) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || j.size() != 2) throw InputError(std::string(what) + ": pair must be [x, y]");
  return std::pair{index_of(j[0], n, what), index_of(j[1], n, what)};
}

std::vector<std::vector<int>> expected_signs(std::size_t k) {
  std::vector<std::vector<int>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << (k - 1)); ++mask) {
    std::vector<int> eps(k, 1);
    for (std::size_t j = 1; j < k; ++j) eps[j] = (mask >> (j - 1)) & 1 ? -1 : 1;
    out.push_back(std::move(eps));
  }
  return out;
}

// Cube check plus one stated witness per sign class. If `domain` is given the
// witnesses must lie inside it.
void check_l1(const PointedMetricSpace& d, const RationalMatrix& basis, const json& witnesses, Checks& check,
              const std::string& prefix, const std::vector<bool>* domain = nullptr) {
  if (!basis_shape(d, basis, check, prefix + "basis-shape")) return;
  const std::size_t n = d.size(), k = basis.size();
  std::string cube_detail;
  for (std::size_t x = 0; x < n && cube_detail.empty(); ++x) {
    for (std::size_t y = x + 1; y < n && cube_detail.empty(); ++y) {
      for (const auto& c : quotient(d, basis, x, y)) {
        if (abs(c) > Rational(1)) {
          cube_detail = "quotient vector at (" + std::to_string(x) + "," + std::to_string(y) + ") leaves the unit cube";
          break;
        }
      }
    }
  }
  check(cube_detail.empty(), prefix + "cube", cube_detail);
  const auto signs = expected_signs(k);
  if (!check(witnesses.is_array() && witnesses.size() == signs.size(), prefix + "sign-classes",
             "expected one witness per sign class (" + std::to_string(signs.size()) + ")")) {
    return;
  }
  for (std::size_t i = 0; i < signs.size(); ++i) {
    const std::string name = prefix + "witness[" + std::to_string(i) + "]";
    const json& w = witnesses[i];
    if (!w.is_object() || !w.contains("sign") || w.at("sign") != json(signs[i])) {
      check(false, name, name + ": sign pattern out of order");
      continue;
    }
    const auto p = read_pair(field(w, "pair"), n, name);
    if (!p) {
      check(false, name, name + ": no witness pair");
      continue;
    }
    const auto [x, y] = *p;
    bool ok = x != y;
    if (ok) {
      const auto q = quotient(d, basis, x, y);
      for (std::size_t j = 0; j < k; ++j) ok = ok && q[j] == Rational(signs[i][j]);
    }
    ok = ok && (!domain || ((*domain)[x] && (*domain)[y]));
    check(ok, name,
          name + ": pair (" + std::to_string(x) + "," + std::to_string(y) + ") does not realise its sign pattern" +
              (domain ? " inside the subspace" : ""));
  }
}

void check_linf(const PointedMetricSpace& d, const RationalMatrix& basis, const json* witnesses, Checks& check,
                const std::string& prefix) {
  if (!basis_shape(d, basis, check, prefix + "basis-shape")) return;
  const std::size_t n = d.size(), m = basis.size();
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> found(m);
  std::string ball_detail;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      const auto q = quotient(d, basis, x, y);
      if (l1_norm(q) > Rational(1) && ball_detail.empty()) {
        ball_detail = "quotient vector at (" + std::to_string(x) + "," + std::to_string(y) + ") leaves the l1 ball";
      }
      for (std::size_t j = 0; j < m; ++j) {
        if (!found[j] && q[j] == Rational(1) && l1_norm(q) == Rational(1)) found[j] = std::pair{x, y};
      }
    }
  }
  check(ball_detail.empty(), prefix + "ball", ball_detail);
  for (std::size_t j = 0; j < m; ++j) {
    const std::string name = prefix + "vertex[" + std::to_string(j) + "]";
    if (witnesses) {
      const json& w = (*witnesses)[j];
      const auto p = read_pair(field(w, "pair"), n, name);
      bool ok = p && p->first != p->second && field(w, "coordinate") == json(j);
      if (ok) {
        const auto q = quotient(d, basis, p->first, p->second);
        for (std::size_t i = 0; i < m; ++i) ok = ok && q[i] == Rational(i == j ? 1 : 0);
      }
      check(ok, name, name + ": stated pair does not realise +e_" + std::to_string(j));
    } else {
      check(found[j].has_value(), name, name + ": no pair realises +e_" + std::to_string(j));
    }
  }
}

// Checks a stated complementation (basis u_j in F(K), projection P) on K.
std::optional<std::pair<std::vector<FreeVector>, FreeOperator>> check_complementation(const SpacePtr& k,
                                                                                     const json& data, Checks& check,
                                                                                     const std::string& prefix) {
  const std::size_t dim = k->size() - 1;
  const RationalMatrix u = rows_of(field(data, "basis"), prefix + "basis");
  const RationalMatrix p = json_util::to_matrix(field(data, "projection"));
  bool shape = p.size() == dim;
  for (const auto& row : p) shape = shape && row.size() == dim;
  for (const auto& row : u) shape = shape && row.size() == dim;
  if (!check(shape && u.size() <= dim, prefix + "shape", prefix + "shape: basis/projection dimensions disagree with the space")) {
    return std::nullopt;
  }
  std::vector<FreeVector> basis;
  for (const auto& c : u) basis.push_back(FreeVector{k, c});
  const FreeOperator op{k, p};
  check(linalg::is_zero(linalg::subtract(linalg::multiply(p, p), p)), prefix + "idempotent", prefix + "idempotent: P*P != P");
  bool fixed = true;
  for (const auto& v : basis) fixed = fixed && op(v) == v;
  check(fixed, prefix + "fixes-basis", prefix + "fixes-basis: P u_j != u_j");
  check(linalg::rank(p) == basis.size(), prefix + "rank", prefix + "rank: rank P differs from the basis size");
  Rational norm(0);
  for (std::size_t x = 0; x <= dim; ++x) {
    for (std::size_t y = x + 1; y <= dim; ++y) {
      const FreeVector m = (Rational(1) / (*k)(x, y)) * (FreeVector::delta(k, x) - FreeVector::delta(k, y));
      norm = max(norm, free_norm(op(m)));
    }
  }
  check(norm == Rational(1), prefix + "norm-one", prefix + "norm-one: operator norm is " + norm.str());
  bool iso = true;
  for (const auto& v : basis) iso = iso && free_norm(v) == Rational(1);
  for (const auto& eps : expected_signs(basis.size())) {
    FreeVector sum = FreeVector::zero(k);
    for (std::size_t j = 0; j < basis.size(); ++j) sum = sum + Rational(eps[j]) * basis[j];
    iso = iso && free_norm(sum) == Rational(static_cast<long>(basis.size()));
  }
  check(iso, prefix + "l1-isometry", prefix + "l1-isometry: basis norms or sign-corner norms are wrong");
  return std::pair{std::move(basis), op};
}

bool stated_valid(const json& doc, Verification& v) {
  const json& s = field(doc, "verdict");
  if (!s.is_string() || (s != "valid" && s != "invalid")) throw InputError("verdict must be \"valid\" or \"invalid\"");
  v.stated = s.get<std::string>();
  return v.stated == "valid";
}

void verify_hybrid(const json& doc, Checks& check) {
  const HybridSpace h = parse_hybrid(field(doc, "hybrid").dump());
  const json& digest = field(doc, "space_digest");
  check(digest.is_string() && digest.get<std::string>() == hybrid_digest(h), "space-digest",
        "hybrid digest does not match the embedded description");
  const auto violations = hybrid_validate(h);
  if (!check(violations.empty(), "hybrid-valid", violations.empty() ? "" : violations.front().message)) return;
  const PwlFunctional f = parse_pwl(field(doc, "functional").dump());

  // F(z) = clamp(min_t t + d_z(t)) over the profile breakpoints.
  const RationalVector stated_f = json_util::to_vector(field(doc, "retraction"));
  bool f_ok = stated_f.size() == h.extras();
  for (std::size_t z = 0; f_ok && z < h.extras(); ++z) {
    const auto& d = h.profiles[z];
    Rational best = d.values()[0];
    for (std::size_t i = 0; i < d.breakpoints().size(); ++i) best = min(best, d.breakpoints()[i] + d.values()[i]);
    f_ok = stated_f[z] == min(max(best, Rational(0)), Rational(1));
  }
  if (!check(f_ok, "retraction", "stated retraction values differ from the recomputed ones")) return;

  const json& basis = field(doc, "basis");
  if (!basis.is_array() || basis.size() != 1) throw InputError("hybrid-embed basis must hold one extras vector");
  const RationalVector extras = json_util::to_vector(basis[0]);
  bool comp = extras.size() == h.extras();
  for (std::size_t z = 0; comp && z < h.extras(); ++z) comp = extras[z] == f(stated_f[z]);
  if (!check(comp, "composition", "extra values are not f(F(z))")) return;

  const Rational pn = pwl_norm(f).norm;
  Rational extra_sup(0);
  for (std::size_t z = 0; z < h.extras(); ++z) {
    for (std::size_t w = z + 1; w < h.extras(); ++w) {
      extra_sup = max(extra_sup, abs(extras[z] - extras[w]) / h.extra_dist[z][w]);
    }
    for (const auto& t : common_refinement(h.profiles[z].breakpoints(), f.breakpoints())) {
      extra_sup = max(extra_sup, abs(extras[z] - f(t)) / h.profiles[z](t));
    }
  }
  check(extra_sup <= pn, "isometry", "an extra-point quotient " + extra_sup.str() + " exceeds the interval norm " + pn.str());
  const json& witnesses = field(doc, "witnesses");
  if (!witnesses.is_array() || witnesses.size() != 1) throw InputError("hybrid-embed needs one witness entry");
  const json& w = witnesses[0];
  if (pn.is_zero()) {
    check(field(w, "kind") == "none", "witness", "zero functional should have no witness");
    return;
  }
  bool ok = field(w, "kind") == "interval";
  if (ok) {
    const Rational a = json_util::to_rational(field(w, "left")), b = json_util::to_rational(field(w, "right"));
    ok = Rational(0) <= a && a < b && b <= Rational(1);
    if (ok) {
      // A maximising piece: the function is linear on [a, b] with slope of modulus ||f||.
      const Rational slope = (f(b) - f(a)) / (b - a);
      ok = abs(slope) == pn;
      for (const auto& t : f.breakpoints()) {
        if (ok && a < t && t < b) ok = f(t) == f(a) + slope * (t - a);
      }
    }
  }
  check(ok, "witness", "stated witness piece does not attain the norm");
}

}  // namespace

Verification verify(const json& doc) {
  Verification v;
  const json& kind = field(doc, "kind");
  if (!kind.is_string()) throw InputError("kind must be a string");
  v.kind = kind.get<std::string>();
  const bool stated = stated_valid(doc, v);
  Checks check(v);

  try {
    if (v.kind == "hybrid-embed") {
      verify_hybrid(doc, check);
    } else {
      const PointedMetricSpace space = read_space(doc, check);
      const std::size_t n = space.size();
      if (v.kind == "l1-isometry") {
        check_l1(space, rows_of(field(doc, "basis"), "basis"), field(doc, "witnesses"), check, "");
      } else if (v.kind == "linf-isometry") {
        const RationalMatrix basis = rows_of(field(doc, "basis"), "basis");
        const json& w = field(doc, "witnesses");
        if (!w.is_array() || w.size() != basis.size()) throw InputError("expected one witness per coordinate");
        check_linf(space, basis, &w, check, "");
      } else if (v.kind == "complementation") {
        check_complementation(share(space), doc, check, "");
      } else if (v.kind == "pipeline") {
        std::vector<std::size_t> sub;
        for (const auto& i : field(doc, "subspace")) sub.push_back(index_of(i, n, "subspace"));
        const std::size_t k = field(field(doc, "config"), "k").get<std::size_t>();
        bool sub_ok = k >= 1 && k < 20 && sub.size() == (std::size_t{1} << k) && !sub.empty() && sub[0] == 0 &&
                      std::adjacent_find(sub.begin(), sub.end(), std::greater_equal<>()) == sub.end();
        if (!check(sub_ok, "subspace", "subspace must list 2^k increasing indices starting at the base")) {
          v.valid = false;
          v.reproduced = v.valid == stated;
          return v;
        }
        const auto ks = share(restrict(space, sub).space);
        const auto comp = check_complementation(ks, field(doc, "complementation"), check, "complementation.");
        const RationalMatrix g = rows_of(field(doc, "lift"), "lift");
        if (comp && basis_shape(*ks, g, check, "lift.basis-shape") && g.size() == comp->first.size()) {
          bool bio = true;
          for (std::size_t j = 0; j < g.size(); ++j) {
            const LipFunctional gj(ks, g[j]);
            for (std::size_t i = 0; i < g.size(); ++i) bio = bio && pairing(gj, comp->first[i]) == Rational(i == j ? 1 : 0);
          }
          check(bio, "lift.biorthogonal", "lift.biorthogonal: <g_j, u_i> != delta_ij");
          // g_j(x) is the j-th coefficient of P(delta_x).
          bool dual = true;
          for (std::size_t x = 1; x < ks->size(); ++x) {
            FreeVector sum = FreeVector::zero(ks);
            for (std::size_t j = 0; j < g.size(); ++j) sum = sum + g[j][x] * comp->first[j];
            dual = dual && sum == comp->second(FreeVector::delta(ks, x));
          }
          check(dual, "lift.dual-of-projection", "lift.dual-of-projection: sum_j g_j(x) u_j != P(delta_x)");
          check_linf(*ks, g, nullptr, check, "lift.");
        } else {
          check(false, "lift.shape", "lift basis does not match the complemented basis");
        }
        const RationalMatrix fk = rows_of(field(doc, "subspace_basis"), "subspace_basis");
        const auto r = rademacher_embedding(k);
        bool composed = fk.size() == k && g.size() == r.size();
        for (std::size_t c = 0; composed && c < k; ++c) {
          composed = fk[c].size() == ks->size();
          for (std::size_t x = 0; composed && x < ks->size(); ++x) {
            Rational s(0);
            for (std::size_t j = 0; j < r.size(); ++j) s += Rational(r[j][c]) * g[j][x];
            composed = fk[c][x] == s;
          }
        }
        check(composed, "composition", "subspace basis is not the sign-matrix image of the lift");
        const RationalMatrix fm = rows_of(field(doc, "basis"), "basis");
        bool restricts = fm.size() == fk.size();
        for (std::size_t c = 0; restricts && c < fm.size(); ++c) {
          restricts = fm[c].size() == n;
          for (std::size_t a = 0; restricts && a < sub.size(); ++a) restricts = fm[c][sub[a]] - fm[c][sub[0]] == fk[c][a];
        }
        check(restricts, "extension", "basis on the space does not restrict to the subspace basis");
        std::vector<bool> domain(n, false);
        for (std::size_t i : sub) domain[i] = true;
        check_l1(space, fm, field(doc, "witnesses"), check, "", &domain);
      } else {
        throw InputError("unknown certificate kind \"" + v.kind + "\"");
      }
    }
  } catch (const PreconditionError& e) {
    throw InputError(std::string("malformed certificate: ") + e.what());
  }
  v.valid = v.failing_check.empty();
  v.reproduced = v.valid == stated;
  return v;
}

}  // namespace snacert::cert
