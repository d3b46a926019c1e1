#include "snacert/construct.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "snacert/error.hpp"
#include "snacert/linalg.hpp"
#include "snacert/lp.hpp"

namespace snacert {

namespace {

struct Partition {
  std::array<std::size_t, 2> a;  // contains 0
  std::array<std::size_t, 2> b;
};

constexpr std::array<Partition, 3> kPartitions{{
    {{0, 1}, {2, 3}},
    {{0, 2}, {1, 3}},
    {{0, 3}, {1, 2}},
}};

std::pair<RationalVector, RationalVector> four_point_values(const PointedMetricSpace& d, const FourPointLabeling& l) {
  RationalVector f1(4), f2(4);
  f1[l.x1] = Rational(0);
  f1[l.x2] = d(l.x1, l.x4) - d(l.x2, l.x4);
  f1[l.x3] = d(l.x1, l.x4) - d(l.x2, l.x4) + d(l.x2, l.x3);
  f1[l.x4] = d(l.x1, l.x4);
  f2[l.x1] = Rational(0);
  f2[l.x2] = d(l.x1, l.x2);
  f2[l.x3] = d(l.x1, l.x2) - d(l.x2, l.x3);
  f2[l.x4] = d(l.x1, l.x4);
  if (l.rebased) {
    const Rational s1 = f1[0], s2 = f2[0];
    for (auto& v : f1) v -= s1;
    for (auto& v : f2) v -= s2;
  }
  return {f1, f2};
}

LipFunctional combine(const SpacePtr& space, const std::vector<LipFunctional>& basis, const std::vector<int>& coeffs) {
  LipFunctional out = LipFunctional::zero(space);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (coeffs[j] != 0) out = out + Rational(coeffs[j]) * basis[j];
  }
  return out;
}

}  // namespace

FourPointBasis four_point_basis(const SpacePtr& space) {
  if (space->size() != 4) throw PreconditionError("four_point_basis: need exactly 4 points");
  const auto& d = *space;
  std::array<Rational, 3> cost;
  for (std::size_t p = 0; p < 3; ++p) {
    const auto& [a, b] = kPartitions[p];
    cost[p] = d(a[0], a[1]) + d(b[0], b[1]);
  }
  const Rational best = std::min({cost[0], cost[1], cost[2]});

  std::vector<FourPointLabeling> order;
  for (std::size_t p = 0; p < 3; ++p) {
    if (cost[p] != best) continue;
    const auto& [a, b] = kPartitions[p];
    order.push_back({a[0], b[0], b[1], a[1]});
    order.push_back({a[0], b[1], b[0], a[1]});
  }
  for (std::size_t p = 0; p < 3; ++p) {
    if (cost[p] != best) continue;
    const auto& [a, b] = kPartitions[p];
    order.push_back({a[1], b[0], b[1], a[0], true});
    order.push_back({a[1], b[1], b[0], a[0], true});
  }

  std::size_t attempts = 0;
  for (const auto& l : order) {
    ++attempts;
    auto [v1, v2] = four_point_values(d, l);
    std::vector<LipFunctional> basis{LipFunctional(space, v1), LipFunctional(space, v2)};
    auto cert = l1_isometry_lip(basis);
    if (cert.valid) {
      return FourPointBasis{basis[0], basis[1], l, std::move(cert), attempts};
    }
  }
  throw std::logic_error("four_point_basis: no labeling certifies on space " + serialize_space(d));
}

std::vector<std::vector<int>> rademacher_embedding(std::size_t n) {
  if (n == 0) throw PreconditionError("rademacher_embedding: n must be positive");
  const std::size_t m = std::size_t{1} << (n - 1);
  std::vector<std::vector<int>> r(m, std::vector<int>(n, 1));
  for (std::size_t row = 0; row < m; ++row) {
    for (std::size_t k = 1; k < n; ++k) r[row][k] = (row >> (k - 1)) & 1 ? -1 : 1;
  }
  return r;
}

bool rademacher_is_l1_isometric(const std::vector<std::vector<int>>& r) {
  if (r.empty()) return false;
  const std::size_t n = r[0].size();
  auto sup = [&](const std::vector<int>& a) {
    long best = 0;
    for (const auto& row : r) {
      long s = 0;
      for (std::size_t k = 0; k < n; ++k) s += static_cast<long>(a[k]) * row[k];
      best = std::max(best, std::labs(s));
    }
    return best;
  };
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<int> e(n, 0);
    e[k] = 1;
    if (sup(e) != 1) return false;
  }
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<int> eps(n);
    for (std::size_t k = 0; k < n; ++k) eps[k] = (mask >> k) & 1 ? -1 : 1;
    if (sup(eps) != static_cast<long>(n)) return false;
  }
  return true;
}

DualityLift duality_lift(const ComplementationCertificate& cert) {
  if (!cert.valid()) throw PreconditionError("duality_lift: complementation certificate is not valid");
  const SpacePtr& space = cert.projection.space;
  const std::size_t n = space->size();
  const std::size_t m = cert.basis.size();
  RationalMatrix u(n - 1, RationalVector(m));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t r = 0; r + 1 < n; ++r) u[r][j] = cert.basis[j].coeffs[r];
  }
  std::vector<RationalVector> values(m, RationalVector(n));
  for (std::size_t x = 1; x < n; ++x) {
    const FreeVector image = cert.projection(FreeVector::delta(space, x));
    const auto c = linalg::solve(u, image.coeffs);
    if (!c) throw std::logic_error("duality_lift: P(delta_x) outside the span of the basis");
    for (std::size_t j = 0; j < m; ++j) values[j][x] = (*c)[j];
  }
  DualityLift out;
  for (auto& v : values) out.basis.emplace_back(space, std::move(v));
  out.biorthogonal = true;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      if (pairing(out.basis[j], cert.basis[i]) != Rational(i == j ? 1 : 0)) out.biorthogonal = false;
    }
  }
  out.certificate = linf_isometry_lip(out.basis);
  return out;
}

L1IsometryCertificate compose_l1_in_linf(const std::vector<LipFunctional>& linf_basis,
                                         const std::vector<std::vector<int>>& rademacher) {
  if (linf_basis.empty() || rademacher.size() != linf_basis.size()) {
    throw PreconditionError("compose_l1_in_linf: need one sign row per l_inf basis vector");
  }
  const std::size_t n = rademacher[0].size();
  const SpacePtr& space = linf_basis[0].space();
  std::vector<LipFunctional> f;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<int> column;
    for (const auto& row : rademacher) {
      if (row.size() != n) throw PreconditionError("compose_l1_in_linf: ragged sign matrix");
      column.push_back(row[k]);
    }
    f.push_back(combine(space, linf_basis, column));
  }
  return l1_isometry_lip(std::move(f));
}

std::vector<std::size_t> select_subspace(const PointedMetricSpace& space, std::size_t count) {
  const std::size_t n = space.size();
  if (count > n) throw PreconditionError("select_subspace: more points requested than available");
  std::vector<std::size_t> chosen{PointedMetricSpace::base()};
  std::vector<bool> used(n, false);
  used[0] = true;
  while (chosen.size() < count) {
    std::optional<std::size_t> pick;
    Rational pick_gap;
    for (std::size_t p = 0; p < n; ++p) {
      if (used[p]) continue;
      Rational gap = space(p, chosen[0]);
      for (std::size_t c : chosen) gap = min(gap, space(p, c));
      if (!pick || gap > pick_gap) {
        pick = p;
        pick_gap = gap;
      }
    }
    used[*pick] = true;
    chosen.push_back(*pick);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

PipelineResult theorem_pipeline(const SpacePtr& space, std::size_t k, const PipelineOptions& options) {
  if (k == 0 || k >= 63 || space->size() < (std::size_t{1} << k)) {
    throw PreconditionError("theorem_pipeline: need k >= 1 and at least 2^k points");
  }
  PipelineResult out;
  out.k = k;
  out.subspace = select_subspace(*space, std::size_t{1} << k);
  out.subspace_space = share(restrict(*space, out.subspace).space);
  out.search = search_one_complemented(out.subspace_space, std::size_t{1} << (k - 1), options.search);
  if (!out.search.certificate) return out;

  out.lift = duality_lift(*out.search.certificate);
  if (!out.lift->certificate.valid || !out.lift->biorthogonal) {
    throw std::logic_error("theorem_pipeline: duality lift failed: " + out.lift->certificate.failure);
  }
  out.on_subspace = compose_l1_in_linf(out.lift->basis, rademacher_embedding(k));
  if (!out.on_subspace->valid) {
    throw std::logic_error("theorem_pipeline: composition failed: " + out.on_subspace->failure);
  }
  out.extended = extend_basis(*out.on_subspace, space, out.subspace);
  std::vector<bool> in_k(space->size(), false);
  for (std::size_t i : out.subspace) in_k[i] = true;
  out.witnesses_in_subspace = true;
  for (const auto& w : out.extended->certificate.sign_witnesses) {
    if (!w.pair || !in_k[w.pair->x] || !in_k[w.pair->y]) out.witnesses_in_subspace = false;
  }
  return out;
}

namespace {

class DirectSearcher {
 public:
  DirectSearcher(const SpacePtr& space, std::size_t k, const DirectSearchOptions& options)
      : space_(space), n_(space->size()), k_(k), options_(options), classes_(sign_classes(k)) {
    const auto& d = *space_;
    for (std::size_t x = 0; x < n_; ++x) {
      for (std::size_t y = 0; y < n_; ++y) {
        if (x != y) candidates_.push_back({x, y});
      }
    }
    std::stable_sort(candidates_.begin(), candidates_.end(), [&](const PairWitness& a, const PairWitness& b) {
      return d(a.x, a.y) > d(b.x, b.y);
    });
    if (options_.check == NodeCheck::lp) build_cube_program();
  }

  void build_cube_program() {
    const auto& d = *space_;
    base_ = lp::LinearProgram(k_ * (n_ - 1));
    for (std::size_t x = 0; x < n_; ++x) {
      for (std::size_t y = x + 1; y < n_; ++y) {
        for (std::size_t j = 0; j < k_; ++j) {
          auto row = difference_row(j, x, y);
          base_.add(row, lp::Relation::le, d(x, y));
          base_.add(std::move(row), lp::Relation::ge, -d(x, y));
        }
      }
    }
  }

  DirectSearch run() {
    DirectSearch out;
    // Each sign class needs its own unordered pair.
    const bool enough_pairs = n_ * (n_ - 1) / 2 >= classes_.size();
    if (enough_pairs && descend(out)) {
      std::vector<LipFunctional> basis;
      for (std::size_t j = 0; j < k_; ++j) {
        RationalVector v(n_);
        for (std::size_t x = 1; x < n_; ++x) v[x] = solution_[var(j, x)];
        basis.emplace_back(space_, std::move(v));
      }
      auto cert = l1_isometry_lip(std::move(basis));
      if (!cert.valid) throw std::logic_error("direct_search_l1: feasible assignment failed to certify: " + cert.failure);
      out.certificate = std::move(cert);
      out.assignment = assignment_;
    }
    std::ostringstream report;
    report << "direct search k=" << k_ << " on " << n_ << " points: " << out.probes << " feasibility probes, ";
    if (out.certificate) {
      report << "found";
    } else if (out.budget_exhausted) {
      report << "probe budget exhausted";
    } else if (!enough_pairs) {
      report << "exhausted: fewer point pairs than sign classes";
    } else {
      report << "exhausted all assignments";
    }
    out.report = report.str();
    return out;
  }

 private:
  std::size_t var(std::size_t j, std::size_t x) const { return j * (n_ - 1) + (x - 1); }

  RationalVector difference_row(std::size_t j, std::size_t x, std::size_t y) const {
    RationalVector row(k_ * (n_ - 1));
    if (x != 0) row[var(j, x)] += Rational(1);
    if (y != 0) row[var(j, y)] -= Rational(1);
    return row;
  }

  bool pair_used(const PairWitness& p) const {
    return std::any_of(assignment_.begin(), assignment_.end(), [&](const PairWitness& q) {
      return (q.x == p.x && q.y == p.y) || (q.x == p.y && q.y == p.x);
    });
  }

  bool probe(DirectSearch& out) {
    ++out.probes;
    return options_.check == NodeCheck::lp ? probe_lp() : probe_graph();
  }

  bool probe_lp() {
    lp::LinearProgram prog = base_;
    const auto& d = *space_;
    for (std::size_t c = 0; c < assignment_.size(); ++c) {
      const auto& p = assignment_[c];
      for (std::size_t j = 0; j < k_; ++j) {
        prog.add(difference_row(j, p.x, p.y), lp::Relation::eq, Rational(classes_[c][j]) * d(p.x, p.y));
      }
    }
    auto result = lp::feasible(prog);
    if (result.feasible) solution_ = std::move(result.witness);
    return result.feasible;
  }

  // Edge u -> v of weight w encodes f(v) - f(u) <= w. Shortest-path closure
  // from the base is a solution whenever no cycle is negative.
  bool probe_graph() {
    const auto& d = *space_;
    RationalVector solution(k_ * (n_ - 1));
    for (std::size_t j = 0; j < k_; ++j) {
      RationalMatrix g = d.matrix();
      for (std::size_t c = 0; c < assignment_.size(); ++c) {
        const auto& p = assignment_[c];
        const Rational w = Rational(classes_[c][j]) * d(p.x, p.y);
        g[p.y][p.x] = min(g[p.y][p.x], w);
        g[p.x][p.y] = min(g[p.x][p.y], -w);
      }
      for (std::size_t m = 0; m < n_; ++m) {
        for (std::size_t a = 0; a < n_; ++a) {
          for (std::size_t b = 0; b < n_; ++b) {
            Rational via = g[a][m] + g[m][b];
            if (via < g[a][b]) g[a][b] = std::move(via);
          }
        }
      }
      for (std::size_t a = 0; a < n_; ++a) {
        if (g[a][a].sign() < 0) return false;
      }
      for (std::size_t x = 1; x < n_; ++x) solution[var(j, x)] = g[0][x];
    }
    solution_ = std::move(solution);
    return true;
  }

  bool descend(DirectSearch& out) {
    if (assignment_.size() == classes_.size()) return true;
    for (const auto& p : candidates_) {
      // Negating the whole basis swaps every orientation, so the first class
      // may be taken with x < y.
      if (assignment_.empty() && p.x > p.y) continue;
      if (pair_used(p)) continue;
      if (out.probes >= options_.probe_budget) {
        out.budget_exhausted = true;
        return false;
      }
      assignment_.push_back(p);
      if (probe(out) && descend(out)) return true;
      assignment_.pop_back();
      if (out.budget_exhausted) return false;
    }
    return false;
  }

  SpacePtr space_;
  std::size_t n_;
  std::size_t k_;
  DirectSearchOptions options_;
  std::vector<std::vector<int>> classes_;
  std::vector<PairWitness> candidates_;
  lp::LinearProgram base_;
  std::vector<PairWitness> assignment_;
  RationalVector solution_;
};

}  // namespace

DirectSearch direct_search_l1(const SpacePtr& space, std::size_t k, const DirectSearchOptions& options) {
  if (k == 0 || k >= 31) throw PreconditionError("direct_search_l1: k must be in [1, 30]");
  return DirectSearcher(space, k, options).run();
}

EvaluationEmbedding evaluation_embedding(EmbedKind kind, std::size_t d) {
  if (d == 0 || d > 6) throw PreconditionError("evaluation_embedding: d must be in [1, 6]");
  EvaluationEmbedding out{kind, d, nullptr, {}, {}, std::nullopt, std::nullopt, false};
  out.points.push_back(RationalVector(d, Rational(0)));
  if (kind == EmbedKind::l1) {
    for (std::size_t v = 0; v < (std::size_t{1} << d); ++v) {
      RationalVector p(d);
      for (std::size_t j = 0; j < d; ++j) p[j] = Rational((v >> (d - 1 - j)) & 1 ? -1 : 1);
      out.points.push_back(std::move(p));
    }
  } else {
    for (std::size_t j = 0; j < d; ++j) {
      for (int s : {1, -1}) {
        RationalVector p(d, Rational(0));
        p[j] = Rational(s);
        out.points.push_back(std::move(p));
      }
    }
  }
  const std::size_t n = out.points.size();
  RationalMatrix dist(n, RationalVector(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      RationalVector diff(d);
      for (std::size_t j = 0; j < d; ++j) diff[j] = out.points[a][j] - out.points[b][j];
      dist[a][b] = kind == EmbedKind::l1 ? linf_norm(diff) : l1_norm(diff);
    }
  }
  out.space = share(PointedMetricSpace(std::move(dist)));
  for (std::size_t j = 0; j < d; ++j) {
    RationalVector v(n);
    for (std::size_t p = 0; p < n; ++p) v[p] = out.points[p][j];
    out.basis.emplace_back(out.space, std::move(v));
  }

  // Designated witness for a sign/coordinate pattern a: the point y* in K
  // maximising <a, y*> paired with 0, value equal to the norm of a.
  auto designated = [&](const std::vector<int>& a, const std::optional<PairWitness>& pair, const Rational& norm) {
    if (!pair || pair->y != 0) return false;
    Rational value(0);
    for (std::size_t j = 0; j < d; ++j) value += Rational(a[j]) * out.points[pair->x][j];
    return value == norm && out.space->operator()(pair->x, 0) == Rational(1);
  };
  out.designated_witnesses = true;
  if (kind == EmbedKind::l1) {
    out.l1 = l1_isometry_lip(out.basis);
    for (const auto& w : out.l1->sign_witnesses) {
      if (!designated(w.sign, w.pair, Rational(static_cast<long>(d)))) out.designated_witnesses = false;
    }
  } else {
    out.linf = linf_isometry_lip(out.basis);
    for (const auto& w : out.linf->vertex_witnesses) {
      std::vector<int> e(d, 0);
      e[w.coordinate] = 1;
      if (!designated(e, w.pair, Rational(1))) out.designated_witnesses = false;
    }
  }
  return out;
}

}  // namespace snacert
