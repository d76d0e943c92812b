#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace vml {

ContextSnapshot make_snapshot(const ConstraintProblem& cp,
                              const Env& raw) {
  ContextSnapshot snapshot;
  for (const auto& param : cp.parameters) {
    auto it = raw.find(param.name);
    if (it == raw.end())
      throw Error("missing-context", "no value for context '" + param.name + "'");
    const Symbol* sym = param.symbol;
    Value v = it->second;
    if (sym && sym->domain) {
      double snapped = sym->domain->snap(v.as_number());
      if (std::fabs(snapped - v.as_number()) > 1e-12 * std::max(1.0, std::fabs(snapped)))
        snapshot.clamped.push_back(param.name);
      if (sym->domain->kind() == Domain::Kind::Enum)
        v = Value::of_enum(sym->domain->enum_type(), static_cast<int>(snapped));
      else if (sym->domain->kind() == Domain::Kind::Boolean)
        v = Value::of_bool(snapped >= 0.5);
      else
        v = Value::of_number(snapped);
    }
    snapshot.values[param.name] = v;
  }
  return snapshot;
}

namespace {

Value domain_value(const Domain& d, std::size_t i) {
  double v = d.value(i);
  switch (d.kind()) {
    case Domain::Kind::Enum:
      return Value::of_enum(d.enum_type(), static_cast<int>(v));
    case Domain::Kind::Boolean:
      return Value::of_bool(v >= 0.5);
    case Domain::Kind::Numeric:
      break;
  }
  return Value::of_number(v);
}

/// Shared cost semantics for solve, brute force, and evaluate_cost: the
/// weights are fixed by the snapshot, and per-term contributions are
/// summed in property declaration order. Terms over a single decision
/// variable are tabulated over its full grid so both searches read the
/// exact same doubles.
class CostModel {
 public:
  CostModel(const ConstraintProblem& cp, const ContextSnapshot& ctx, ObjectiveMode mode)
      : cp_(cp), mode_(mode), evaluator_(cp.model->evaluator()) {
    env_ = ctx.values;
    // General vars are functions of the context; evaluate in topo order.
    for (const VarDef* g : cp.model->general_order)
      if (g->init) env_[g->name] = evaluator_.eval(*g->init, env_);

    for (const ObjectiveTerm& term : cp.objective) {
      TermData data;
      data.term = &term;
      data.weight = compute_weight(term);

      std::set<std::size_t> vars;
      for (const NormalizedFn& def : term.definitions)
        for (const std::string& param : def.fn->params) {
          int idx = cp.decision_index(param);
          if (idx >= 0) vars.insert(static_cast<std::size_t>(idx));
        }
      data.vars.assign(vars.begin(), vars.end());

      if (data.vars.size() == 1) {
        const Domain& d = cp.decisions[data.vars[0]].domain;
        data.table.reserve(d.size());
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < d.size(); ++i) {
          double c = term_contribution_at(data, domain_value(d, i));
          data.table.push_back(c);
          best = std::min(best, c);
        }
        data.best = best;
      } else {
        // No tabulation; bound conservatively.
        data.best = -std::numeric_limits<double>::infinity();
        if (data.vars.empty()) data.best = 0.0;
      }
      terms_.push_back(std::move(data));
    }
  }

  const Env& base_env() const { return env_; }
  const Evaluator& evaluator() const { return evaluator_; }
  std::size_t term_count() const { return terms_.size(); }
  double weight(std::size_t t) const { return terms_[t].weight; }
  const std::vector<std::size_t>& term_vars(std::size_t t) const { return terms_[t].vars; }

  double contribution(std::size_t t, const std::vector<std::size_t>& idx) const {
    const TermData& data = terms_[t];
    if (data.table.size()) return data.table[idx[data.vars[0]]];
    return generic_contribution(data, idx);
  }

  /// Admissible per-term minimum over the full grid.
  double best_contribution(std::size_t t) const { return terms_[t].best; }

  /// Admissible minimum restricted to the allowed indices of each variable.
  double best_contribution_restricted(std::size_t t,
                                      const std::vector<std::vector<std::size_t>>& allowed) const {
    const TermData& data = terms_[t];
    if (data.table.size()) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i : allowed[data.vars[0]]) best = std::min(best, data.table[i]);
      return best;
    }
    return data.best;
  }

  double cost(const std::vector<std::size_t>& idx) const {
    double total = 0.0;
    for (std::size_t t = 0; t < terms_.size(); ++t) total += contribution(t, idx);
    return total;
  }

 private:
  struct TermData {
    const ObjectiveTerm* term = nullptr;
    double weight = 0.0;
    std::vector<std::size_t> vars;
    std::vector<double> table;  // single-variable fast path
    double best = 0.0;
  };

  double compute_weight(const ObjectiveTerm& term) const {
    double sum = 0.0;
    for (const NormalizedFn& pf : term.priorities) {
      double raw = evaluator_.eval(*pf.fn->body, env_).as_number();
      sum += (raw - pf.norm.min) / (pf.norm.max - pf.norm.min);
    }
    return term.priorities.size() <= 1 ? sum
                                       : sum / static_cast<double>(term.priorities.size());
  }

  double definition_value(const NormalizedFn& def, const Env& env) const {
    if (mode_ == ObjectiveMode::Linearized && def.surrogate) {
      double v = env.at(def.fn->params[0]).as_number();
      return def.surrogate->eval(v);
    }
    double raw = evaluator_.eval(*def.fn->body, env).as_number();
    return 100.0 * (raw - def.norm.min) / (def.norm.max - def.norm.min);
  }

  double term_contribution_at(const TermData& data, Value single_value) const {
    Env env = env_;
    for (const NormalizedFn& def : data.term->definitions)
      for (const std::string& param : def.fn->params) env[param] = single_value;
    return finish_contribution(data, env);
  }

  double generic_contribution(const TermData& data, const std::vector<std::size_t>& idx) const {
    Env env = env_;
    for (const NormalizedFn& def : data.term->definitions)
      for (const std::string& param : def.fn->params) {
        int d = cp_.decision_index(param);
        if (d >= 0) env[param] = domain_value(cp_.decisions[d].domain, idx[d]);
      }
    return finish_contribution(data, env);
  }

  double finish_contribution(const TermData& data, const Env& env) const {
    double sum = 0.0;
    for (const NormalizedFn& def : data.term->definitions)
      sum += definition_value(def, env);
    double p = data.term->definitions.size() <= 1
                   ? sum
                   : sum / static_cast<double>(data.term->definitions.size());
    double c = data.weight * p;
    return data.term->sign < 0 ? -c : c;
  }

  const ConstraintProblem& cp_;
  ObjectiveMode mode_;
  Evaluator evaluator_;
  Env env_;
  std::vector<TermData> terms_;
};

struct ActiveConstraint {
  const LoweredConstraint* src = nullptr;
  std::vector<std::size_t> vars;  // decision indices in the consequence
  int single = -1;                // fast path when exactly one variable
  std::vector<char> ok;           // per grid index, single fast path
  bool constant = false;          // consequence has no decision variables
  bool constant_ok = true;
};

std::vector<ActiveConstraint> prepare_active(const ConstraintProblem& cp,
                                             const CostModel& cm,
                                             std::vector<std::string>& triggered) {
  std::vector<ActiveConstraint> active;
  for (const LoweredConstraint& c : cp.constraints) {
    if (c.guard && !cm.evaluator().eval(*c.guard, cm.base_env()).as_bool()) continue;
    triggered.push_back(c.name);

    ActiveConstraint ac;
    ac.src = &c;
    std::set<std::string> refs;
    collect_variable_refs(*c.consequence, refs);
    for (const auto& name : refs) {
      int idx = cp.decision_index(name);
      if (idx >= 0) ac.vars.push_back(static_cast<std::size_t>(idx));
    }
    std::sort(ac.vars.begin(), ac.vars.end());

    if (ac.vars.empty()) {
      ac.constant = true;
      ac.constant_ok = cm.evaluator().eval(*c.consequence, cm.base_env()).as_bool();
    } else if (ac.vars.size() == 1) {
      ac.single = static_cast<int>(ac.vars[0]);
      const Domain& d = cp.decisions[ac.vars[0]].domain;
      const std::string& name = cp.decisions[ac.vars[0]].name;
      ac.ok.reserve(d.size());
      Env env = cm.base_env();
      for (std::size_t i = 0; i < d.size(); ++i) {
        env[name] = domain_value(d, i);
        ac.ok.push_back(cm.evaluator().eval(*c.consequence, env).as_bool() ? 1 : 0);
      }
    }
    active.push_back(std::move(ac));
  }
  return active;
}

Solution infeasible_solution(std::vector<std::string> triggered) {
  Solution s;
  s.status = Solution::Status::Infeasible;
  s.triggered = std::move(triggered);
  return s;
}

void fill_bindings(Solution& s, const ConstraintProblem& cp,
                   const std::vector<std::size_t>& idx) {
  for (std::size_t d = 0; d < cp.decisions.size(); ++d)
    s.bindings.emplace_back(cp.decisions[d].name,
                            domain_value(cp.decisions[d].domain, idx[d]));
}

class BranchAndBound {
 public:
  BranchAndBound(const ConstraintProblem& cp, const CostModel& cm,
                 const std::vector<ActiveConstraint>& active)
      : cp_(cp), cm_(cm), active_(active) {}

  Solution run(std::vector<std::string> triggered) {
    std::size_t m = cp_.decisions.size();

    for (const ActiveConstraint& ac : active_)
      if (ac.constant && !ac.constant_ok) return infeasible_solution(std::move(triggered));

    // Domain restriction from consequences over a single variable whose
    // guard already holds; this mirrors how the implications collapse once
    // the parameters are fixed.
    allowed_.resize(m);
    for (std::size_t d = 0; d < m; ++d) {
      const Domain& dom = cp_.decisions[d].domain;
      for (std::size_t i = 0; i < dom.size(); ++i) allowed_[d].push_back(i);
    }
    for (const ActiveConstraint& ac : active_) {
      if (ac.single < 0) continue;
      auto& list = allowed_[ac.single];
      std::vector<std::size_t> kept;
      for (std::size_t i : list)
        if (ac.ok[i]) kept.push_back(i);
      list = std::move(kept);
      if (list.empty()) return infeasible_solution(std::move(triggered));
    }

    // Multi-variable constraints get checked as soon as their last variable
    // is assigned.
    checks_at_.assign(m, {});
    for (std::size_t a = 0; a < active_.size(); ++a)
      if (active_[a].single < 0 && !active_[a].constant)
        checks_at_[active_[a].vars.back()].push_back(a);

    term_bounds_.resize(cm_.term_count());
    for (std::size_t t = 0; t < cm_.term_count(); ++t)
      term_bounds_[t] = cm_.best_contribution_restricted(t, allowed_);

    idx_.assign(m, 0);
    env_ = cm_.base_env();
    descend(0);

    if (!found_) return infeasible_solution(std::move(triggered));
    Solution s;
    s.status = Solution::Status::Optimal;
    s.objective = best_cost_;
    s.triggered = std::move(triggered);
    s.stats.nodes = nodes_;
    s.stats.evaluations = evals_;
    fill_bindings(s, cp_, best_idx_);
    return s;
  }

 private:
  // Lower bound with decisions [0, depth) assigned: exact contributions for
  // fully assigned terms, the precomputed per-term minimum otherwise.
  // Summation follows term order, so each summand is <= its exact
  // counterpart and the floating sum stays admissible.
  double bound(std::size_t depth) const {
    double total = 0.0;
    for (std::size_t t = 0; t < cm_.term_count(); ++t) {
      const auto& vars = cm_.term_vars(t);
      bool assigned = true;
      for (std::size_t v : vars)
        if (v >= depth) assigned = false;
      total += assigned ? cm_.contribution(t, idx_) : term_bounds_[t];
    }
    return total;
  }

  void descend(std::size_t depth) {
    ++nodes_;
    if (found_ && bound(depth) >= best_cost_) return;

    if (depth == cp_.decisions.size()) {
      double cost = cm_.cost(idx_);
      ++evals_;
      if (!found_ || cost < best_cost_) {
        found_ = true;
        best_cost_ = cost;
        best_idx_ = idx_;
      }
      return;
    }

    const std::string& name = cp_.decisions[depth].name;
    for (std::size_t i : allowed_[depth]) {
      idx_[depth] = i;
      env_[name] = domain_value(cp_.decisions[depth].domain, i);

      bool ok = true;
      for (std::size_t a : checks_at_[depth]) {
        if (!cm_.evaluator().eval(*active_[a].src->consequence, env_).as_bool()) {
          ok = false;
          break;
        }
      }
      if (ok) descend(depth + 1);
    }
  }

  const ConstraintProblem& cp_;
  const CostModel& cm_;
  const std::vector<ActiveConstraint>& active_;

  std::vector<std::vector<std::size_t>> allowed_;
  std::vector<std::vector<std::size_t>> checks_at_;
  std::vector<double> term_bounds_;
  std::vector<std::size_t> idx_;
  std::vector<std::size_t> best_idx_;
  Env env_;
  double best_cost_ = 0.0;
  bool found_ = false;
  std::uint64_t nodes_ = 0;
  std::uint64_t evals_ = 0;
};

}  // namespace

double evaluate_cost(const ConstraintProblem& cp, const ContextSnapshot& ctx,
                     const Env& bindings, ObjectiveMode mode) {
  CostModel cm(cp, ctx, mode);
  std::vector<std::size_t> idx(cp.decisions.size());
  for (std::size_t d = 0; d < cp.decisions.size(); ++d) {
    auto it = bindings.find(cp.decisions[d].name);
    if (it == bindings.end())
      throw Error("incomplete-binding",
                  "no value bound for variation point '" + cp.decisions[d].name + "'");
    idx[d] = cp.decisions[d].domain.index_of(it->second.as_number());
  }
  return cm.cost(idx);
}

Solution solve(const ConstraintProblem& cp, const ContextSnapshot& ctx, ObjectiveMode mode) {
  CostModel cm(cp, ctx, mode);
  std::vector<std::string> triggered;
  auto active = prepare_active(cp, cm, triggered);
  return BranchAndBound(cp, cm, active).run(std::move(triggered));
}

Solution brute_force(const ConstraintProblem& cp, const ContextSnapshot& ctx,
                     ObjectiveMode mode) {
  CostModel cm(cp, ctx, mode);
  std::vector<std::string> triggered;
  auto active = prepare_active(cp, cm, triggered);

  double total = 1.0;
  for (const auto& d : cp.decisions) total *= static_cast<double>(d.domain.size());
  if (total > kBruteForceCap)
    throw Error("domain-too-large",
                "joint domain of " + format_double(total) + " points exceeds the cap");

  std::size_t m = cp.decisions.size();
  std::vector<std::size_t> idx(m, 0);
  Env env = cm.base_env();

  bool found = false;
  double best_cost = 0.0;
  std::vector<std::size_t> best_idx;
  std::uint64_t evals = 0;

  bool running = true;
  while (running) {
    bool feasible = true;
    for (const ActiveConstraint& ac : active) {
      if (ac.constant) {
        feasible = ac.constant_ok;
      } else if (ac.single >= 0) {
        feasible = ac.ok[idx[ac.single]] != 0;
      } else {
        for (std::size_t v : ac.vars)
          env[cp.decisions[v].name] = domain_value(cp.decisions[v].domain, idx[v]);
        feasible = cm.evaluator().eval(*ac.src->consequence, env).as_bool();
      }
      if (!feasible) break;
    }

    if (feasible) {
      double cost = cm.cost(idx);
      ++evals;
      // Strict improvement keeps the lexicographically first optimum.
      if (!found || cost < best_cost) {
        found = true;
        best_cost = cost;
        best_idx = idx;
      }
    }

    if (m == 0) break;
    // Row-major odometer: last decision fastest = lexicographic order.
    std::size_t k = m;
    while (k > 0) {
      --k;
      if (++idx[k] < cp.decisions[k].domain.size()) break;
      idx[k] = 0;
      if (k == 0) running = false;
    }
  }

  if (!found) return infeasible_solution(std::move(triggered));
  Solution s;
  s.status = Solution::Status::Optimal;
  s.objective = best_cost;
  s.triggered = std::move(triggered);
  s.stats.evaluations = evals;
  s.stats.nodes = static_cast<std::uint64_t>(total);
  fill_bindings(s, cp, best_idx);
  return s;
}

std::vector<SweepRow> sweep(const ConstraintProblem& cp, const std::string& vary,
                            const Domain& grid, const Env& fixed,
                            ObjectiveMode mode) {
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double v = grid.value(i);
    Env raw = fixed;
    raw[vary] = Value::of_number(v);
    ContextSnapshot snapshot = make_snapshot(cp, raw);
    rows.push_back({v, solve(cp, snapshot, mode)});
  }
  return rows;
}

std::string sweep_csv(const ConstraintProblem& cp, const Domain& grid,
                      const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "context_value";
  for (const auto& d : cp.decisions) out << ',' << d.name;
  out << ",objective,status\n";

  for (const SweepRow& row : rows) {
    out << grid.format(row.context_value);
    if (row.solution.status == Solution::Status::Optimal) {
      for (std::size_t d = 0; d < cp.decisions.size(); ++d)
        out << ',' << cp.decisions[d].domain.format(row.solution.bindings[d].second.as_number());
      out << ',' << format_double(row.solution.objective) << ",optimal\n";
    } else {
      for (std::size_t d = 0; d < cp.decisions.size(); ++d) out << ',';
      out << ",,infeasible\n";
    }
  }
  return out.str();
}

}  // namespace vml
