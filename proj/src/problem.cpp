#include "problem.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace vml {

std::size_t PiecewiseLinear::segment_of(double x) const {
  if (slopes.empty()) return 0;
  if (x <= breakpoints.front()) return 0;
  if (x >= breakpoints.back()) return slopes.size() - 1;
  double width = (breakpoints.back() - breakpoints.front()) / slopes.size();
  auto idx = static_cast<std::size_t>((x - breakpoints.front()) / width);
  if (idx >= slopes.size()) idx = slopes.size() - 1;
  // Half-open [b_j, b_{j+1}): step back when rounding put us one too far.
  if (x < breakpoints[idx]) --idx;
  return idx;
}

double PiecewiseLinear::eval(double x) const {
  if (breakpoints.empty()) return 0.0;
  double clamped = std::clamp(x, breakpoints.front(), breakpoints.back());
  std::size_t j = segment_of(clamped);
  return slopes[j] * clamped + intercepts[j];
}

PiecewiseLinear piecewise_linearize(const Expr& body, const std::string& param,
                                    const Domain& domain, int segments,
                                    double norm_min, double norm_max,
                                    const Evaluator& evaluator) {
  if (segments < 1) throw Error("invalid-argument", "segment count must be >= 1");

  PiecewiseLinear pl;
  double lo = domain.lo();
  double hi = domain.hi();
  double span = hi - lo;
  double range = norm_max - norm_min;

  Env env;
  auto normalized_at = [&](double v) {
    env[param] = Value::of_number(v);
    double raw = evaluator.eval(body, env).as_number();
    return 100.0 * (raw - norm_min) / range;
  };

  std::vector<double> values;
  for (int j = 0; j <= segments; ++j) {
    double b = lo + span * j / segments;
    pl.breakpoints.push_back(b);
    values.push_back(normalized_at(b));
  }
  for (int j = 0; j < segments; ++j) {
    double slope = (values[j + 1] - values[j]) / (pl.breakpoints[j + 1] - pl.breakpoints[j]);
    pl.slopes.push_back(slope);
    pl.intercepts.push_back(values[j] - slope * pl.breakpoints[j]);
  }
  return pl;
}

const ConstraintProblem::Decision* ConstraintProblem::find_decision(
    std::string_view name) const {
  for (const auto& d : decisions)
    if (d.name == name) return &d;
  return nullptr;
}

int ConstraintProblem::decision_index(std::string_view name) const {
  for (std::size_t i = 0; i < decisions.size(); ++i)
    if (decisions[i].name == name) return static_cast<int>(i);
  return -1;
}

namespace {

bool contains_decision(const Expr& e, const TypedModel& tm) {
  if (e.kind == Expr::Kind::VarRef && e.info.symbol == SymbolKind::Varpoint) return true;
  for (const auto& a : e.args)
    if (contains_decision(*a, tm)) return true;
  return false;
}

}  // namespace

bool is_affine_in(const Expr& e, const TypedModel& tm) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return true;
    case Expr::Kind::VarRef:
      return true;
    case Expr::Kind::Unary:
      return e.uop == UnaryOp::Neg && is_affine_in(*e.args[0], tm);
    case Expr::Kind::Binary:
      switch (e.bop) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
          return is_affine_in(*e.args[0], tm) && is_affine_in(*e.args[1], tm);
        case BinaryOp::Mul:
          return (!contains_decision(*e.args[0], tm) && is_affine_in(*e.args[1], tm)) ||
                 (!contains_decision(*e.args[1], tm) && is_affine_in(*e.args[0], tm));
        case BinaryOp::Div:
          return is_affine_in(*e.args[0], tm) && !contains_decision(*e.args[1], tm);
        default:
          return false;
      }
    case Expr::Kind::Call:
      // A call free of decision variables is a constant.
      return !contains_decision(e, tm);
  }
  return false;
}

ConstraintProblem lower(std::shared_ptr<const TypedModel> tm,
                        const NormalizationInfo& normalization, int segments,
                        DiagnosticList& diags) {
  ConstraintProblem cp;
  cp.model = tm;
  cp.segments = segments;

  for (const VarDef* ctx : tm->contexts)
    cp.parameters.push_back({ctx->name, tm->find_symbol(ctx->name)});

  for (const VarDef* vp : tm->varpoints) {
    const Symbol* sym = tm->find_symbol(vp->name);
    if (!sym || !sym->domain) {
      diags.error(vp->span, "lowering",
                  "variation point '" + vp->name + "' has no usable domain");
      continue;
    }
    cp.decisions.push_back({vp->name, sym, *sym->domain});
  }

  for (const RuleDef& rule : tm->model->rules)
    cp.constraints.push_back(
        {rule.name, rule.impl.condition.get(), rule.impl.consequence.get()});
  for (const VarDef* vp : tm->varpoints)
    for (const Implication& clause : vp->clauses)
      cp.constraints.push_back(
          {vp->name, clause.condition.get(), clause.consequence.get()});

  Evaluator evaluator = tm->evaluator();
  for (const VarDef* prop : tm->properties) {
    auto norm_it = normalization.properties.find(prop->name);
    if (norm_it == normalization.properties.end() ||
        norm_it->second.priorities.size() != prop->priorities.size() ||
        norm_it->second.definitions.size() != prop->definitions.size()) {
      diags.error(prop->span, "lowering",
                  "property '" + prop->name + "' lacks normalization data");
      continue;
    }
    if (prop->direction == VarDef::Direction::Unspecified) {
      diags.error(prop->span, "missing-direction",
                  "property '" + prop->name +
                      "' needs 'minimized' or 'maximized' to enter the objective");
      continue;
    }

    ObjectiveTerm term;
    term.property = prop->name;
    term.sign = prop->direction == VarDef::Direction::Minimized ? 1 : -1;

    for (std::size_t i = 0; i < prop->priorities.size(); ++i) {
      NormalizedFn nf;
      nf.fn = &prop->priorities[i];
      nf.norm = norm_it->second.priorities[i];
      nf.affine = true;  // weights are parameter-only; never linearized
      term.priorities.push_back(std::move(nf));
    }
    for (std::size_t i = 0; i < prop->definitions.size(); ++i) {
      NormalizedFn nf;
      nf.fn = &prop->definitions[i];
      nf.norm = norm_it->second.definitions[i];
      nf.affine = is_affine_in(*nf.fn->body, *tm);
      if (!nf.affine && nf.fn->params.size() == 1) {
        const Domain* d = tm->domain_of(nf.fn->params[0]);
        if (d)
          nf.surrogate = piecewise_linearize(*nf.fn->body, nf.fn->params[0], *d,
                                             segments, nf.norm.min, nf.norm.max,
                                             evaluator);
      }
      term.definitions.push_back(std::move(nf));
    }
    cp.objective.push_back(std::move(term));
  }

  // A decision variable in no constraint and no objective can take any value.
  for (const auto& decision : cp.decisions) {
    bool used = false;
    for (const auto& c : cp.constraints) {
      std::set<std::string> refs;
      collect_variable_refs(*c.consequence, refs);
      if (refs.count(decision.name)) used = true;
    }
    for (const auto& term : cp.objective)
      for (const auto& def : term.definitions)
        if (std::find(def.fn->params.begin(), def.fn->params.end(), decision.name) !=
            def.fn->params.end())
          used = true;
    if (!used)
      diags.warning(decision.symbol->decl->span, "unbound-varpoint",
                    "variation point '" + decision.name +
                        "' is not constrained or optimized; its value is arbitrary");
  }

  return cp;
}

}  // namespace vml
