#include "snacert/lp.hpp"

#include "snacert/error.hpp"

#include <ostream>

namespace snacert::lp {

std::string_view to_string(Status status) {
  switch (status) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
  }
  return "unknown";
}

const Bound& LinearProgram::bound(std::size_t i) const {
  static const Bound free_bound{};
  return i < bounds.size() ? bounds[i] : free_bound;
}

namespace {

// x_orig = offset + sum(coef * column)
struct VarMap {
  Rational offset;
  std::vector<std::pair<std::size_t, Rational>> columns;
};

class Tableau {
 public:
  Tableau(const LinearProgram& lp, std::ostream* trace) : lp_(lp), trace_(trace) { build(); }

  LpOutcome run() {
    LpOutcome out;
    // Phase 1: minimise the sum of artificials.
    RationalVector phase1_cost(cols_);
    for (std::size_t j = first_artificial_; j < cols_; ++j) phase1_cost[j] = 1;
    set_costs(phase1_cost);
    log("phase 1");
    iterate(/*allow_artificial=*/true);
    if (objective_value().sign() > 0) {
      out.status = Status::infeasible;
      out.dual = original_duals(phase1_cost);
      out.pivots = pivots_;
      return out;
    }
    drive_out_artificials();

    // Phase 2 on the standardised objective.
    set_costs(cost_);
    log("phase 2");
    if (!iterate(/*allow_artificial=*/false)) {
      out.status = Status::unbounded;
      out.pivots = pivots_;
      return out;
    }
    out.status = Status::optimal;
    out.primal = original_primal();
    out.value = dot(lp_.objective, out.primal);
    out.dual = original_duals(cost_);
    out.pivots = pivots_;
    return out;
  }

 private:
  void build() {
    const std::size_t n = lp_.num_vars();
    for (const auto& c : lp_.constraints) {
      if (c.row.size() != n) throw PreconditionError("LP constraint row length does not match objective length");
    }
    vars_.resize(n);
    std::size_t next = 0;
    std::vector<std::pair<std::size_t, Rational>> upper_rows;  // column, u - l
    for (std::size_t i = 0; i < n; ++i) {
      const Bound& b = lp_.bound(i);
      if (b.lower && b.upper && *b.upper < *b.lower) throw PreconditionError("LP variable bound lower > upper");
      if (b.lower) {
        vars_[i] = {*b.lower, {{next, Rational(1)}}};
        if (b.upper) upper_rows.emplace_back(next, *b.upper - *b.lower);
        ++next;
      } else if (b.upper) {
        vars_[i] = {*b.upper, {{next, Rational(-1)}}};
        ++next;
      } else {
        vars_[i] = {Rational(0), {{next, Rational(1)}, {next + 1, Rational(-1)}}};
        next += 2;
      }
    }
    structural_ = next;
    const std::size_t m = lp_.constraints.size() + upper_rows.size();
    rows_ = m;

    // Standardised rows over structural columns, before slacks.
    std::vector<RationalVector> a(m, RationalVector(structural_));
    std::vector<Relation> rel(m);
    RationalVector rhs(m);
    for (std::size_t r = 0; r < lp_.constraints.size(); ++r) {
      const auto& c = lp_.constraints[r];
      rhs[r] = c.rhs;
      rel[r] = c.rel;
      for (std::size_t i = 0; i < n; ++i) {
        if (c.row[i].is_zero()) continue;
        rhs[r].sub_mul(c.row[i], vars_[i].offset);
        for (const auto& [col, coef] : vars_[i].columns) a[r][col] += c.row[i] * coef;
      }
    }
    for (std::size_t k = 0; k < upper_rows.size(); ++k) {
      const std::size_t r = lp_.constraints.size() + k;
      a[r][upper_rows[k].first] = 1;
      rel[r] = Relation::le;
      rhs[r] = upper_rows[k].second;
    }

    // Slack per inequality, then artificials for rows without a +1 slack.
    std::size_t slacks = 0;
    for (auto rr : rel) slacks += rr != Relation::eq;
    row_sign_.assign(m, 1);
    std::vector<std::size_t> slack_col(m, SIZE_MAX);
    std::size_t s = structural_;
    for (std::size_t r = 0; r < m; ++r) {
      if (rel[r] != Relation::eq) slack_col[r] = s++;
    }
    first_artificial_ = structural_ + slacks;
    std::vector<bool> needs_artificial(m);
    std::size_t artificials = 0;
    for (std::size_t r = 0; r < m; ++r) {
      const int slack_coef = rel[r] == Relation::le ? 1 : (rel[r] == Relation::ge ? -1 : 0);
      row_sign_[r] = rhs[r].sign() < 0 ? -1 : 1;
      needs_artificial[r] = slack_coef * row_sign_[r] != 1;
      artificials += needs_artificial[r];
    }
    cols_ = first_artificial_ + artificials;
    t_.assign(m, RationalVector(cols_));
    b_.resize(m);
    basis_.resize(m);
    initial_basic_.resize(m);
    std::size_t art = first_artificial_;
    for (std::size_t r = 0; r < m; ++r) {
      const Rational sign(row_sign_[r]);
      for (std::size_t j = 0; j < structural_; ++j) {
        if (!a[r][j].is_zero()) t_[r][j] = row_sign_[r] > 0 ? a[r][j] : -a[r][j];
      }
      if (slack_col[r] != SIZE_MAX) t_[r][slack_col[r]] = Rational(rel[r] == Relation::le ? 1 : -1) * sign;
      b_[r] = row_sign_[r] > 0 ? rhs[r] : -rhs[r];
      if (needs_artificial[r]) {
        t_[r][art] = 1;
        basis_[r] = art++;
      } else {
        basis_[r] = slack_col[r];
      }
      initial_basic_[r] = basis_[r];
    }

    // Standardised cost: c_orig . x_orig = const + cost_ . columns
    cost_.assign(cols_, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      if (lp_.objective[i].is_zero()) continue;
      for (const auto& [col, coef] : vars_[i].columns) cost_[col] += lp_.objective[i] * coef;
    }
  }

  void set_costs(const RationalVector& c) {
    d_ = c;
    z_ = Rational(0);
    for (std::size_t r = 0; r < rows_; ++r) {
      const Rational& cb = c[basis_[r]];
      if (cb.is_zero()) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!t_[r][j].is_zero()) d_[j].sub_mul(cb, t_[r][j]);
      }
      z_ += cb * b_[r];
    }
  }

  // Current value of the active (standardised) objective.
  const Rational& objective_value() const { return z_; }

  // Returns false when the objective is unbounded below.
  bool iterate(bool allow_artificial) {
    const std::size_t limit = allow_artificial ? cols_ : first_artificial_;
    for (;;) {
      std::size_t enter = SIZE_MAX;
      for (std::size_t j = 0; j < limit; ++j) {
        if (d_[j].sign() < 0) {
          enter = j;
          break;
        }
      }
      if (enter == SIZE_MAX) return true;
      std::size_t leave = SIZE_MAX;
      Rational best;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (t_[r][enter].sign() <= 0) continue;
        Rational ratio = b_[r] / t_[r][enter];
        if (leave == SIZE_MAX || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = std::move(ratio);
        }
      }
      if (leave == SIZE_MAX) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    ++pivots_;
    if (trace_) {
      *trace_ << "pivot " << pivots_ << ": enter col " << c << ", leave row " << r << " (basic col " << basis_[r]
              << "), objective " << z_ << "\n";
      if (rows_ * cols_ <= 400) dump();
    }
    const Rational inv = Rational(1) / t_[r][c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (!t_[r][j].is_zero()) {
        t_[r][j] *= inv;
        nz.push_back(j);
      }
    }
    b_[r] *= inv;
    auto eliminate = [&](RationalVector& row, Rational& rhs) {
      if (row[c].is_zero()) return;
      const Rational f = row[c];
      for (std::size_t j : nz) row[j].sub_mul(f, t_[r][j]);
      rhs.sub_mul(f, b_[r]);
    };
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i != r) eliminate(t_[i], b_[i]);
    }
    // Objective row: d_j and the value z (z tracks c_B . b).
    if (!d_[c].is_zero()) {
      const Rational f = d_[c];
      for (std::size_t j : nz) d_[j].sub_mul(f, t_[r][j]);
      z_ += f * b_[r];
    }
    basis_[r] = c;
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < first_artificial_) continue;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (!t_[r][j].is_zero()) {
          pivot(r, j);
          break;
        }
      }
      // Otherwise the row is redundant; its artificial stays basic at zero.
    }
  }

  RationalVector original_primal() const {
    RationalVector col_value(cols_);
    for (std::size_t r = 0; r < rows_; ++r) col_value[basis_[r]] = b_[r];
    RationalVector x(lp_.num_vars());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = vars_[i].offset;
      for (const auto& [col, coef] : vars_[i].columns) x[i] += coef * col_value[col];
    }
    return x;
  }

  // y_r = c_j - d_j for the row's initial identity column j, mapped back
  // through the row sign. Only the program's own constraints are reported.
  RationalVector original_duals(const RationalVector& c) const {
    RationalVector y(lp_.constraints.size());
    for (std::size_t r = 0; r < y.size(); ++r) {
      const std::size_t j = initial_basic_[r];
      Rational v = c[j] - d_[j];
      // Artificial identity columns carry +1; slack identity columns carry the
      // slack coefficient times the row sign, which is +1 by construction.
      y[r] = row_sign_[r] > 0 ? v : -v;
    }
    return y;
  }

  void log(const char* what) const {
    if (trace_) *trace_ << "-- " << what << ": " << rows_ << " rows, " << cols_ << " columns\n";
  }

  void dump() const {
    for (std::size_t r = 0; r < rows_; ++r) {
      *trace_ << "  [" << basis_[r] << "]";
      for (std::size_t j = 0; j < cols_; ++j) *trace_ << ' ' << t_[r][j];
      *trace_ << " | " << b_[r] << "\n";
    }
    *trace_ << "  d:";
    for (std::size_t j = 0; j < cols_; ++j) *trace_ << ' ' << d_[j];
    *trace_ << " | " << z_ << "\n";
  }

  const LinearProgram& lp_;
  std::ostream* trace_;
  std::vector<VarMap> vars_;
  std::size_t structural_ = 0;
  std::size_t first_artificial_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<RationalVector> t_;
  RationalVector b_;
  RationalVector cost_;
  RationalVector d_;
  Rational z_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> initial_basic_;
  std::vector<int> row_sign_;
  std::size_t pivots_ = 0;
};

LinearProgram negated_objective(const LinearProgram& lp) {
  LinearProgram neg = lp;
  for (auto& c : neg.objective) c = -c;
  return neg;
}

}  // namespace

LpOutcome solve(const LinearProgram& lp, Sense sense, const SolveOptions& options) {
  if (sense == Sense::min) return Tableau(lp, options.trace).run();
  const LinearProgram neg = negated_objective(lp);
  LpOutcome out = Tableau(neg, options.trace).run();
  if (out.status == Status::optimal) {
    out.value = -out.value;
    for (auto& y : out.dual) y = -y;
  }
  return out;
}

bool is_primal_feasible(const LinearProgram& lp, std::span<const Rational> x) {
  if (x.size() != lp.num_vars()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Bound& b = lp.bound(i);
    if (b.lower && x[i] < *b.lower) return false;
    if (b.upper && x[i] > *b.upper) return false;
  }
  for (const auto& c : lp.constraints) {
    const Rational lhs = dot(c.row, x);
    switch (c.rel) {
      case Relation::le: if (lhs > c.rhs) return false; break;
      case Relation::ge: if (lhs < c.rhs) return false; break;
      case Relation::eq: if (lhs != c.rhs) return false; break;
    }
  }
  return true;
}

namespace {

// Dual of  min c.x  s.t. rows, bounds.
DualCheck check_dual_min(const LinearProgram& lp, const RationalVector& c, std::span<const Rational> y) {
  DualCheck out;
  if (y.size() != lp.constraints.size()) {
    out.detail = "dual length mismatch";
    return out;
  }
  Rational obj;
  RationalVector reduced = c;
  for (std::size_t r = 0; r < y.size(); ++r) {
    const auto& con = lp.constraints[r];
    if ((con.rel == Relation::le && y[r].sign() > 0) || (con.rel == Relation::ge && y[r].sign() < 0)) {
      out.detail = "dual sign violated on constraint " + std::to_string(r);
      return out;
    }
    if (y[r].is_zero()) continue;
    obj += con.rhs * y[r];
    for (std::size_t i = 0; i < reduced.size(); ++i) {
      if (!con.row[i].is_zero()) reduced[i].sub_mul(con.row[i], y[r]);
    }
  }
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    const Bound& b = lp.bound(i);
    if (reduced[i].sign() > 0) {
      if (!b.lower) {
        out.detail = "positive reduced cost on variable " + std::to_string(i) + " without lower bound";
        return out;
      }
      obj += reduced[i] * *b.lower;
    } else if (reduced[i].sign() < 0) {
      if (!b.upper) {
        out.detail = "negative reduced cost on variable " + std::to_string(i) + " without upper bound";
        return out;
      }
      obj += reduced[i] * *b.upper;
    }
  }
  out.feasible = true;
  out.objective = obj;
  return out;
}

}  // namespace

DualCheck check_dual(const LinearProgram& lp, Sense sense, std::span<const Rational> y) {
  if (sense == Sense::min) return check_dual_min(lp, lp.objective, y);
  RationalVector c = lp.objective;
  for (auto& v : c) v = -v;
  RationalVector ny(y.begin(), y.end());
  for (auto& v : ny) v = -v;
  DualCheck out = check_dual_min(lp, c, ny);
  out.objective = -out.objective;
  return out;
}

bool certifies_optimality(const LinearProgram& lp, Sense sense, const LpOutcome& outcome) {
  if (outcome.status != Status::optimal) return false;
  if (!is_primal_feasible(lp, outcome.primal)) return false;
  if (dot(lp.objective, outcome.primal) != outcome.value) return false;
  const DualCheck d = check_dual(lp, sense, outcome.dual);
  return d.feasible && d.objective == outcome.value;
}

bool is_farkas_certificate(const LinearProgram& lp, std::span<const Rational> y) {
  const DualCheck d = check_dual_min(lp, RationalVector(lp.num_vars()), y);
  return d.feasible && d.objective.sign() > 0;
}

Feasibility feasible(const LinearProgram& lp, const SolveOptions& options) {
  LinearProgram zero = lp;
  std::fill(zero.objective.begin(), zero.objective.end(), Rational(0));
  const LpOutcome out = solve(zero, Sense::min, options);
  Feasibility f;
  f.feasible = out.status == Status::optimal;
  if (f.feasible) {
    f.witness = out.primal;
  } else {
    f.farkas = out.dual;
  }
  return f;
}

}  // namespace snacert::lp
