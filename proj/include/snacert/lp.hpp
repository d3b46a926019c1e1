#pragma once

#include "snacert/rational.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

// Exact rational linear programming: two-phase primal simplex with Bland's
// anti-cycling rule, returning primal and dual solutions that certify
// optimality as exact equalities.
namespace snacert::lp {

enum class Relation { le, eq, ge };
enum class Sense { min, max };
enum class Status { optimal, infeasible, unbounded };

std::string_view to_string(Status status);

struct Constraint {
  RationalVector row;
  Relation rel;
  Rational rhs;
};

struct Bound {
  std::optional<Rational> lower;
  std::optional<Rational> upper;

  static Bound free() { return {}; }
  static Bound nonnegative() { return {Rational(0), std::nullopt}; }
};

struct LinearProgram {
  RationalVector objective;
  std::vector<Constraint> constraints;
  std::vector<Bound> bounds;  // one per variable; missing entries are free

  LinearProgram() = default;
  explicit LinearProgram(std::size_t num_vars, Bound bound = Bound::free())
      : objective(num_vars), bounds(num_vars, bound) {}

  std::size_t num_vars() const { return objective.size(); }
  const Bound& bound(std::size_t i) const;

  void add(RationalVector row, Relation rel, Rational rhs) {
    constraints.push_back({std::move(row), rel, std::move(rhs)});
  }
};

struct LpOutcome {
  Status status = Status::infeasible;
  Rational value;
  RationalVector primal;  // original variables
  // Optimal: one multiplier per constraint (reduced costs against the bounds
  // follow from these). Infeasible: a Farkas ray in the same layout.
  RationalVector dual;
  std::size_t pivots = 0;
};

struct SolveOptions {
  std::ostream* trace = nullptr;  // pivot log and tableau dumps when set
};

// Throws PreconditionError on malformed programs (row length mismatch,
// lower bound above upper bound).
LpOutcome solve(const LinearProgram& lp, Sense sense, const SolveOptions& options = {});

// Independent re-substitution checks; never call into the solver.
bool is_primal_feasible(const LinearProgram& lp, std::span<const Rational> x);

struct DualCheck {
  bool feasible = false;
  Rational objective;  // dual objective in the program's own sense
  std::string detail;
};
DualCheck check_dual(const LinearProgram& lp, Sense sense, std::span<const Rational> y);

// True iff the outcome is optimal and primal/dual feasibility and a zero
// duality gap all hold exactly.
bool certifies_optimality(const LinearProgram& lp, Sense sense, const LpOutcome& outcome);

// y proves infeasibility: a dual ray of the zero-objective program with
// strictly positive dual objective.
bool is_farkas_certificate(const LinearProgram& lp, std::span<const Rational> y);

struct Feasibility {
  bool feasible = false;
  RationalVector witness;  // satisfies every constraint when feasible
  RationalVector farkas;   // infeasibility certificate otherwise
};

// The objective of lp is ignored.
Feasibility feasible(const LinearProgram& lp, const SolveOptions& options = {});

}  // namespace snacert::lp
