#ifndef VML_SOLVER_HPP
#define VML_SOLVER_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "problem.hpp"

namespace vml {

/// Concrete values for every parameter of a problem. Construction clamps
/// out-of-range inputs to their declared range and snaps them onto the
/// grid; affected names are recorded in `clamped`.
struct ContextSnapshot {
  Env values;
  std::vector<std::string> clamped;
};

/// Throws Error("missing-context") when a parameter has no value in `raw`.
/// Extra names in `raw` are ignored.
ContextSnapshot make_snapshot(const ConstraintProblem& cp,
                              const Env& raw);

/// Exact evaluates nonlinear definitions directly; Linearized substitutes
/// the chord surrogate where one exists, matching the emitted model.
enum class ObjectiveMode { Exact, Linearized };

struct Solution {
  enum class Status { Optimal, Infeasible };

  Status status = Status::Infeasible;
  double objective = 0.0;
  std::vector<std::pair<std::string, Value>> bindings;  // decision order
  std::vector<std::string> triggered;  // active rules/clauses under this context

  struct Stats {
    std::uint64_t nodes = 0;
    std::uint64_t evaluations = 0;
  } stats;
};

/// Cost of one complete assignment: sum over properties of
/// sign * weight(ctx) * value(vp). Throws Error("incomplete-binding") when
/// a decision variable is missing from `bindings`.
double evaluate_cost(const ConstraintProblem& cp, const ContextSnapshot& ctx,
                     const Env& bindings,
                     ObjectiveMode mode = ObjectiveMode::Linearized);

/// Branch-and-bound over the joint discretized domain. Constraints whose
/// guards hold under the snapshot are enforced; guards are decided by the
/// context alone, and single-variable consequences restrict domains before
/// search. Ties break lexicographically by declaration order, smallest
/// grid value first.
Solution solve(const ConstraintProblem& cp, const ContextSnapshot& ctx,
               ObjectiveMode mode = ObjectiveMode::Linearized);

/// Exhaustive enumeration with the same contract as solve(); the oracle.
/// Throws Error("domain-too-large") above kBruteForceCap joint points.
Solution brute_force(const ConstraintProblem& cp, const ContextSnapshot& ctx,
                     ObjectiveMode mode = ObjectiveMode::Linearized);

inline constexpr double kBruteForceCap = 1e7;

struct SweepRow {
  double context_value = 0.0;
  Solution solution;
};

/// One solve per grid point of the varying context, the others fixed.
std::vector<SweepRow> sweep(const ConstraintProblem& cp, const std::string& vary,
                            const Domain& grid, const Env& fixed,
                            ObjectiveMode mode = ObjectiveMode::Linearized);

/// Header: context_value,<varpoint...>,objective,status
std::string sweep_csv(const ConstraintProblem& cp, const Domain& grid,
                      const std::vector<SweepRow>& rows);

}  // namespace vml

#endif
