#include "snacert/freespace.hpp"

#include "snacert/certify.hpp"
#include "snacert/error.hpp"
#include "snacert/linalg.hpp"

#include <functional>
#include <sstream>

namespace snacert {

FreeVector FreeVector::zero(const SpacePtr& space) { return {space, RationalVector(space->size() - 1)}; }

FreeVector FreeVector::delta(const SpacePtr& space, std::size_t x) {
  if (x >= space->size()) throw PreconditionError("delta: point out of range");
  FreeVector v = zero(space);
  if (x != 0) v.coeffs[x - 1] = 1;
  return v;
}

namespace {

void require_same(const FreeVector& a, const FreeVector& b) {
  if (a.coeffs.size() != b.coeffs.size()) throw PreconditionError("free vectors over different spaces");
}

}  // namespace

FreeVector operator+(const FreeVector& a, const FreeVector& b) {
  require_same(a, b);
  FreeVector out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
  return out;
}

FreeVector operator-(const FreeVector& a, const FreeVector& b) {
  require_same(a, b);
  FreeVector out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs[i];
  return out;
}

FreeVector operator*(const Rational& c, const FreeVector& v) {
  FreeVector out = v;
  for (auto& x : out.coeffs) x *= c;
  return out;
}

FreeVector Molecule::vector(const SpacePtr& space) const {
  const Rational inv = Rational(1) / (*space)(x, y);
  return inv * (FreeVector::delta(space, x) - FreeVector::delta(space, y));
}

std::vector<Molecule> molecules(const PointedMetricSpace& space) {
  std::vector<Molecule> out;
  for (std::size_t x = 0; x < space.size(); ++x) {
    for (std::size_t y = x + 1; y < space.size(); ++y) out.push_back({x, y});
  }
  return out;
}

Rational pairing(const LipFunctional& f, const FreeVector& v) {
  if (v.coeffs.size() + 1 != f.size()) throw PreconditionError("pairing: dimension mismatch");
  Rational s;
  for (std::size_t x = 1; x < f.size(); ++x) {
    if (!v.coeffs[x - 1].is_zero()) s += v.coeffs[x - 1] * (f[x] - f[0]);
  }
  return s;
}

PrimalNorm free_norm_primal(const FreeVector& v, const lp::SolveOptions& options) {
  const PointedMetricSpace& s = *v.space;
  const std::size_t n = s.size();
  if (v.coeffs.size() != n - 1) throw PreconditionError("free vector has the wrong dimension");
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x != y) arcs.emplace_back(x, y);
    }
  }
  lp::LinearProgram prog(arcs.size(), lp::Bound::nonnegative());
  for (std::size_t a = 0; a < arcs.size(); ++a) prog.objective[a] = s(arcs[a].first, arcs[a].second);
  for (std::size_t p = 1; p < n; ++p) {
    RationalVector row(arcs.size());
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      if (arcs[a].first == p) row[a] = 1;
      if (arcs[a].second == p) row[a] = -1;
    }
    prog.add(std::move(row), lp::Relation::eq, v.coeffs[p - 1]);
  }
  const auto out = lp::solve(prog, lp::Sense::min, options);
  if (out.status != lp::Status::optimal) throw std::logic_error("transport LP is always feasible and bounded");
  PrimalNorm result{out.value, {}};
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    if (out.primal[a].sign() > 0) result.decomposition.push_back({arcs[a].first, arcs[a].second, out.primal[a]});
  }
  return result;
}

DualNorm free_norm_dual(const FreeVector& v, const lp::SolveOptions& options) {
  const PointedMetricSpace& s = *v.space;
  const std::size_t n = s.size();
  if (v.coeffs.size() != n - 1) throw PreconditionError("free vector has the wrong dimension");
  // Variables f(1..n-1); f(0) = 0 is substituted.
  lp::LinearProgram prog(n - 1);
  prog.objective = v.coeffs;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      RationalVector row(n - 1);
      if (x) row[x - 1] += 1;
      if (y) row[y - 1] -= 1;
      prog.add(std::move(row), lp::Relation::le, s(x, y));
    }
  }
  const auto out = lp::solve(prog, lp::Sense::max, options);
  if (out.status != lp::Status::optimal) throw std::logic_error("dual LP is always feasible and bounded");
  RationalVector values(n);
  for (std::size_t p = 1; p < n; ++p) values[p] = out.primal[p - 1];
  return {out.value, LipFunctional(v.space, std::move(values))};
}

FreeOperator FreeOperator::identity(const SpacePtr& space) { return {space, linalg::identity(space->size() - 1)}; }

FreeOperator FreeOperator::zero(const SpacePtr& space) {
  return {space, linalg::zeros(space->size() - 1, space->size() - 1)};
}

FreeVector FreeOperator::operator()(const FreeVector& v) const {
  if (v.coeffs.size() != matrix.size()) throw PreconditionError("operator applied to a vector of the wrong dimension");
  return {space, linalg::apply(matrix, v.coeffs)};
}

FreeOperator operator*(const FreeOperator& a, const FreeOperator& b) {
  return {a.space, linalg::multiply(a.matrix, b.matrix)};
}

OperatorNorm operator_norm(const FreeOperator& op) {
  OperatorNorm out;
  bool first = true;
  for (const Molecule& mol : molecules(*op.space)) {
    Rational v = free_norm(op(mol.vector(op.space)));
    if (first || v > out.value) {
      out.value = v;
      out.argmax = mol;
      first = false;
    }
    out.per_molecule.push_back(std::move(v));
  }
  return out;
}

std::string ComplementationCertificate::failure() const {
  if (!idempotent) return "projection is not idempotent (P*P - P != 0)";
  if (!fixes_basis) return "projection does not fix basis vector u" + std::to_string(*unfixed_basis_index + 1);
  if (!rank_matches) return "projection rank " + std::to_string(rank) + " differs from basis size " + std::to_string(basis.size());
  if (!norm_one) {
    return "operator norm is " + norm.value.str() + " (attained at molecule (" + std::to_string(norm.argmax.x) + "," +
           std::to_string(norm.argmax.y) + ")), not 1";
  }
  if (!isometry.valid) return "basis is not isometric to l1^m: " + isometry.failure;
  return {};
}

ComplementationCertificate verify_one_complemented(std::vector<FreeVector> basis, FreeOperator projection) {
  if (basis.empty()) throw PreconditionError("complementation needs a non-empty basis");
  ComplementationCertificate cert;
  cert.basis = std::move(basis);
  cert.projection = std::move(projection);
  const FreeOperator& p = cert.projection;
  const std::size_t dim = p.space->size() - 1;
  if (p.matrix.size() != dim) throw PreconditionError("projection matrix has the wrong shape");
  for (const auto& u : cert.basis) {
    if (u.coeffs.size() != dim) throw PreconditionError("basis vector has the wrong dimension");
  }

  cert.idempotency_residual = linalg::subtract((p * p).matrix, p.matrix);
  cert.idempotent = linalg::is_zero(cert.idempotency_residual);
  cert.fixes_basis = true;
  for (std::size_t i = 0; i < cert.basis.size(); ++i) {
    if (p(cert.basis[i]) != cert.basis[i]) {
      cert.fixes_basis = false;
      cert.unfixed_basis_index = i;
      break;
    }
  }
  cert.rank = linalg::rank(p.matrix);
  cert.rank_matches = cert.rank == cert.basis.size();
  cert.norm = operator_norm(p);
  cert.norm_one = cert.norm.value == Rational(1);
  cert.isometry = l1_isometry_free(cert.basis);
  return cert;
}

FreeOperator projection_from(const std::vector<FreeVector>& basis, const std::vector<LipFunctional>& dual) {
  if (basis.size() != dual.size() || basis.empty()) throw PreconditionError("projection_from: size mismatch");
  const SpacePtr& space = basis.front().space;
  const std::size_t dim = space->size() - 1;
  FreeOperator p = FreeOperator::zero(space);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    for (std::size_t r = 0; r < dim; ++r) {
      if (basis[j].coeffs[r].is_zero()) continue;
      for (std::size_t q = 0; q < dim; ++q) {
        const Rational g = dual[j][q + 1] - dual[j][0];
        if (!g.is_zero()) p.matrix[r][q] += basis[j].coeffs[r] * g;
      }
    }
  }
  return p;
}

std::optional<std::vector<LipFunctional>> biorthogonal_functionals(const std::vector<FreeVector>& basis,
                                                                   NormEncoding encoding) {
  if (basis.empty()) throw PreconditionError("biorthogonal_functionals: empty basis");
  const SpacePtr& space = basis.front().space;
  const PointedMetricSpace& s = *space;
  const std::size_t n = s.size();
  const std::size_t m = basis.size();
  const std::size_t dim = n - 1;
  const auto mols = molecules(s);

  // g_j(p) at column j * dim + (p - 1).
  auto g = [&](std::size_t j, std::size_t p) { return j * dim + (p - 1); };
  const std::size_t g_vars = m * dim;

  std::size_t extra = 0;
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  if (encoding == NormEncoding::l1_epigraph) {
    extra = mols.size() * m;
  } else {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (a != b) arcs.emplace_back(a, b);
    extra = mols.size() * arcs.size();
  }
  lp::LinearProgram prog(g_vars + extra);
  for (std::size_t k = g_vars; k < prog.num_vars(); ++k) prog.bounds[k] = lp::Bound::nonnegative();

  // <g_j, u_i> = [i == j]
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      RationalVector row(prog.num_vars());
      for (std::size_t p = 1; p < n; ++p) row[g(j, p)] = basis[i].coeffs[p - 1];
      prog.add(std::move(row), lp::Relation::eq, Rational(i == j ? 1 : 0));
    }
  }
  // g_j(x) - g_j(y) as a row; base values are zero.
  auto difference_row = [&](std::size_t j, std::size_t x, std::size_t y, const Rational& scale, RationalVector& row) {
    if (x) row[g(j, x)] += scale;
    if (y) row[g(j, y)] -= scale;
  };

  for (std::size_t e = 0; e < mols.size(); ++e) {
    const auto [x, y] = mols[e];
    if (encoding == NormEncoding::l1_epigraph) {
      RationalVector sum_row(prog.num_vars());
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t t = g_vars + e * m + j;
        for (int sign : {1, -1}) {
          RationalVector row(prog.num_vars());
          difference_row(j, x, y, Rational(sign), row);
          row[t] = -1;
          prog.add(std::move(row), lp::Relation::le, Rational(0));
        }
        sum_row[t] = 1;
      }
      prog.add(std::move(sum_row), lp::Relation::le, s(x, y));
    } else {
      // Flows for molecule e route P(mol) = sum_j c_j u_j with
      // c_j = (g_j(x) - g_j(y)) / d(x, y); total cost at most 1.
      const std::size_t base_col = g_vars + e * arcs.size();
      const Rational inv_d = Rational(1) / s(x, y);
      for (std::size_t p = 1; p < n; ++p) {
        RationalVector row(prog.num_vars());
        for (std::size_t a = 0; a < arcs.size(); ++a) {
          if (arcs[a].first == p) row[base_col + a] += 1;
          if (arcs[a].second == p) row[base_col + a] -= 1;
        }
        for (std::size_t j = 0; j < m; ++j) {
          const Rational& u = basis[j].coeffs[p - 1];
          if (!u.is_zero()) difference_row(j, x, y, -(u * inv_d), row);
        }
        prog.add(std::move(row), lp::Relation::eq, Rational(0));
      }
      RationalVector cost(prog.num_vars());
      for (std::size_t a = 0; a < arcs.size(); ++a) cost[base_col + a] = s(arcs[a].first, arcs[a].second);
      prog.add(std::move(cost), lp::Relation::le, Rational(1));
    }
  }

  const auto result = lp::feasible(prog);
  if (!result.feasible) return std::nullopt;
  std::vector<LipFunctional> out;
  for (std::size_t j = 0; j < m; ++j) {
    RationalVector values(n);
    for (std::size_t p = 1; p < n; ++p) values[p] = result.witness[g(j, p)];
    out.emplace_back(space, std::move(values));
  }
  return out;
}

ComplementationSearch search_one_complemented(const SpacePtr& space, std::size_t m,
                                              const ComplementationSearchOptions& options) {
  if (m == 0) throw PreconditionError("search_one_complemented: m must be positive");
  if (space->size() < 2 * m) {
    throw PreconditionError("search_one_complemented needs at least 2m = " + std::to_string(2 * m) + " points, got " +
                            std::to_string(space->size()));
  }
  ComplementationSearch out;
  const auto mols = molecules(*space);
  std::vector<FreeVector> vecs;
  for (const auto& mol : mols) vecs.push_back(mol.vector(space));

  // Pairwise l1^2 compatibility is necessary for every sub-pair of an l1^m
  // molecule basis; computed lazily.
  std::vector<std::vector<int>> compat(mols.size(), std::vector<int>(mols.size(), -1));
  auto compatible = [&](std::size_t a, std::size_t b) {
    if (compat[a][b] < 0) {
      ++out.pairs_checked;
      out.lp_probes += 2;
      const Rational two(2);
      const bool ok = free_norm(vecs[a] + vecs[b]) == two && free_norm(vecs[a] - vecs[b]) == two;
      compat[a][b] = compat[b][a] = ok;
      out.compatible_pairs += ok;
    }
    return compat[a][b] == 1;
  };

  std::vector<std::size_t> chosen;
  bool done = false;
  std::function<void(std::size_t)> extend = [&](std::size_t start) {
    if (done) return;
    if (chosen.size() == m) {
      if (out.tuples_tried >= options.tuple_budget) {
        out.budget_exhausted = true;
        done = true;
        return;
      }
      ++out.tuples_tried;
      std::vector<FreeVector> basis;
      for (auto i : chosen) basis.push_back(vecs[i]);
      if (m > 2) {
        out.lp_probes += std::size_t{1} << (m - 1);
        if (!l1_isometry_free(basis).valid) return;
      }
      ++out.lp_probes;
      auto dual = biorthogonal_functionals(basis, options.encoding);
      if (!dual) return;
      auto cert = verify_one_complemented(basis, projection_from(basis, *dual));
      if (!cert.valid()) throw std::logic_error("LP-derived projection failed verification: " + cert.failure());
      out.certificate = std::move(cert);
      for (auto i : chosen) out.molecules.push_back(mols[i]);
      done = true;
      return;
    }
    for (std::size_t c = start; c < mols.size() && !done; ++c) {
      bool ok = true;
      for (auto i : chosen) {
        if (!compatible(i, c)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      chosen.push_back(c);
      extend(c + 1);
      chosen.pop_back();
    }
  };
  extend(0);

  std::ostringstream report;
  if (out.certificate) {
    report << "found 1-complemented l1^" << m << " after " << out.tuples_tried << " tuple(s)";
  } else if (out.budget_exhausted) {
    report << "tuple budget of " << options.tuple_budget << " exhausted";
  } else {
    report << "exhausted all molecule tuples: " << out.tuples_tried << " tuple(s) tried";
  }
  report << "; " << out.pairs_checked << " molecule pairs checked, " << out.compatible_pairs << " compatible, "
         << out.lp_probes << " LP probes";
  out.report = report.str();
  return out;
}

}  // namespace snacert
