#include "analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace vml {

const Symbol* TypedModel::find_symbol(std::string_view name) const {
  auto it = symbols.find(std::string(name));
  return it == symbols.end() ? nullptr : &it->second;
}

const Domain* TypedModel::domain_of(std::string_view name) const {
  const Symbol* sym = find_symbol(name);
  if (!sym || !sym->domain) return nullptr;
  return &*sym->domain;
}

Evaluator TypedModel::evaluator() const {
  return Evaluator([this](std::string_view name) { return domain_of(name); });
}

namespace {

using TypeKind = ExprInfo::TypeKind;

class Analysis {
 public:
  Analysis(TypedModel& tm, DiagnosticList& diags) : tm_(tm), diags_(diags) {}

  void run() {
    collect_types();
    collect_symbols();
    order_general_vars();
    resolve_general_vars();
    resolve_rules_and_clauses();
    resolve_properties();
  }

  void resolve_standalone_condition(const Expr& e) {
    resolve_expr(e, ResolveContext::Condition);
    require_boolean(e, "subscription predicate");
  }

 private:
  void collect_types() {
    for (const TypeDef& def : tm_.model->types) {
      if (type_exists(def.name)) {
        diags_.error(def.span, "duplicate-type", "type '" + def.name + "' redeclared");
        continue;
      }
      switch (def.kind) {
        case TypeDef::Kind::Number: {
          NumericType nt{def.name, def.lo, def.hi, def.precision, std::nullopt};
          if (def.unit_text) {
            auto unit = lookup_unit(*def.unit_text);
            if (!unit) {
              diags_.error(def.span, "unknown-unit",
                           "unknown unit \"" + *def.unit_text + "\"");
            } else {
              nt.unit = *unit;
            }
          }
          if (!nt.valid()) continue;  // already reported by the parser
          tm_.numeric_types.emplace(def.name, std::move(nt));
          break;
        }
        case TypeDef::Kind::Enum: {
          EnumType et;
          et.name = def.name;
          std::set<std::string> names;
          std::set<int> codes;
          for (const auto& lit : def.literals) {
            if (!names.insert(lit.name).second)
              diags_.error(def.span, "duplicate-literal",
                           "literal '" + lit.name + "' repeated in '" + def.name + "'");
            if (!codes.insert(lit.code).second)
              diags_.error(def.span, "duplicate-code",
                           "code " + std::to_string(lit.code) + " repeated in '" +
                               def.name + "'");
            et.literals.push_back(lit);
          }
          auto [it, ok] = tm_.enum_types.emplace(def.name, std::move(et));
          if (ok) {
            for (const auto& lit : it->second.literals) {
              auto [lit_it, fresh] =
                  tm_.enum_literals.emplace(lit.name, std::make_pair(&it->second, lit.code));
              if (!fresh)
                diags_.error(def.span, "ambiguous-literal",
                             "literal '" + lit.name + "' already declared in '" +
                                 lit_it->second.first->name + "'");
            }
          }
          break;
        }
        case TypeDef::Kind::Bool:
          tm_.bool_types.emplace(def.name, BoolType{def.name});
          break;
      }
    }
  }

  bool type_exists(const std::string& name) const {
    return tm_.numeric_types.count(name) || tm_.enum_types.count(name) ||
           tm_.bool_types.count(name);
  }

  std::optional<VType> resolve_type_ref(const std::string& name, Span span) {
    if (auto it = tm_.numeric_types.find(name); it != tm_.numeric_types.end()) {
      VType t;
      t.kind = TypeKind::Number;
      t.numeric = &it->second;
      t.unit = it->second.unit.value_or(dimensionless_unit());
      return t;
    }
    if (auto it = tm_.enum_types.find(name); it != tm_.enum_types.end()) {
      VType t;
      t.kind = TypeKind::Enum;
      t.enum_type = &it->second;
      return t;
    }
    if (tm_.bool_types.count(name)) {
      VType t;
      t.kind = TypeKind::Boolean;
      return t;
    }
    diags_.error(span, "undeclared-type", "unknown type '" + name + "'");
    return std::nullopt;
  }

  void collect_symbols() {
    for (const VarDef& var : tm_.model->vars) {
      if (tm_.symbols.count(var.name) || tm_.enum_literals.count(var.name)) {
        diags_.error(var.span, "duplicate-variable",
                     "name '" + var.name + "' already declared");
        continue;
      }
      Symbol sym;
      sym.kind = var.kind;
      sym.decl = &var;

      if (!var.type_name.empty()) {
        if (auto t = resolve_type_ref(var.type_name, var.span)) sym.type = *t;
      }

      if (var.kind == VarKind::Context || var.kind == VarKind::Varpoint) {
        switch (sym.type.kind) {
          case TypeKind::Number:
            if (sym.type.numeric) sym.domain = discretize(*sym.type.numeric);
            break;
          case TypeKind::Enum:
            sym.domain = Domain::enumeration(sym.type.enum_type);
            break;
          case TypeKind::Boolean:
            sym.domain = Domain::boolean();
            break;
          default:
            break;
        }
      }

      auto [it, ok] = tm_.symbols.emplace(var.name, std::move(sym));
      (void)it;
      if (ok) {
        if (var.kind == VarKind::Context) tm_.contexts.push_back(&var);
        if (var.kind == VarKind::Varpoint) tm_.varpoints.push_back(&var);
        if (var.kind == VarKind::Property) tm_.properties.push_back(&var);
      }
    }
  }

  void order_general_vars() {
    // Dependencies among general vars; anything else is resolved data.
    std::vector<const VarDef*> generals;
    for (const VarDef& var : tm_.model->vars)
      if (var.kind == VarKind::General) generals.push_back(&var);

    std::map<std::string, const VarDef*> by_name;
    for (const VarDef* g : generals) by_name[g->name] = g;

    std::map<const VarDef*, int> state;  // 0 new, 1 visiting, 2 done
    std::function<bool(const VarDef*)> visit = [&](const VarDef* g) -> bool {
      int& s = state[g];
      if (s == 2) return true;
      if (s == 1) {
        diags_.error(g->span, "cyclic-definition",
                     "cyclic dependency through variable '" + g->name + "'");
        return false;
      }
      s = 1;
      std::set<std::string> refs;
      if (g->init) collect_var_refs(*g->init, refs);
      for (const auto& ref : refs) {
        auto it = by_name.find(ref);
        if (it != by_name.end() && it->second != g)
          if (!visit(it->second)) break;
        if (it != by_name.end() && it->second == g) {
          diags_.error(g->span, "cyclic-definition",
                       "variable '" + g->name + "' depends on itself");
          break;
        }
      }
      s = 2;
      tm_.general_order.push_back(g);
      return true;
    };
    for (const VarDef* g : generals) visit(g);
  }

  void resolve_general_vars() {
    for (const VarDef* g : tm_.general_order) {
      if (!g->init) continue;
      resolve_expr(*g->init, ResolveContext::GeneralVar);
      Symbol* sym = mutable_symbol(g->name);
      if (!sym) continue;
      VType inferred;
      inferred.kind = g->init->info.type;
      inferred.enum_type = g->init->info.enum_type;
      inferred.unit = g->init->info.unit;
      if (sym->type.kind == TypeKind::Unknown) {
        sym->type = inferred;
      } else if (sym->type.kind != inferred.kind && inferred.kind != TypeKind::Unknown) {
        diags_.error(g->span, "type-mismatch",
                     "definition of '" + g->name + "' does not match its declared type");
      }
    }
  }

  void resolve_rules_and_clauses() {
    for (const RuleDef& rule : tm_.model->rules)
      resolve_implication(rule.impl, rule.name);
    for (const VarDef& var : tm_.model->vars) {
      if (var.kind != VarKind::Varpoint) continue;
      for (const Implication& clause : var.clauses) {
        if (clause.condition) {
          resolve_implication(clause, var.name);
        } else {
          resolve_expr(*clause.consequence, ResolveContext::Consequence);
          require_boolean(*clause.consequence, "variation point invariant");
        }
      }
    }
  }

  void resolve_implication(const Implication& impl, const std::string& owner) {
    resolve_expr(*impl.condition, ResolveContext::Condition);
    require_boolean(*impl.condition, "condition of '" + owner + "'");
    resolve_expr(*impl.consequence, ResolveContext::Consequence);
    require_boolean(*impl.consequence, "consequence of '" + owner + "'");

    std::set<std::string> refs;
    collect_variable_refs(*impl.consequence, refs);
    bool touches_varpoint = false;
    for (const auto& ref : refs) {
      const Symbol* sym = tm_.find_symbol(ref);
      if (sym && sym->kind == VarKind::Varpoint) touches_varpoint = true;
    }
    if (!touches_varpoint)
      diags_.error(impl.consequence->span, "taxonomy",
                   "consequence of '" + owner + "' constrains no variation point");
  }

  void require_boolean(const Expr& e, const std::string& what) {
    if (e.info.type != TypeKind::Boolean && e.info.type != TypeKind::Unknown)
      diags_.error(e.span, "type-mismatch", what + " must be boolean");
  }

  void resolve_properties() {
    for (const VarDef& var : tm_.model->vars) {
      if (var.kind != VarKind::Property) continue;
      for (const FunctionDef& fn : var.priorities)
        resolve_function(fn, var, VarKind::Context, "priority");
      for (const FunctionDef& fn : var.definitions)
        resolve_function(fn, var, VarKind::Varpoint, "definition");
      if (var.priorities.empty())
        diags_.error(var.span, "missing-function",
                     "property '" + var.name + "' declares no priority function");
      if (var.definitions.empty())
        diags_.error(var.span, "missing-function",
                     "property '" + var.name + "' declares no definition function");
    }
  }

  void resolve_function(const FunctionDef& fn, const VarDef& prop, VarKind wanted,
                        const char* what) {
    for (const std::string& param : fn.params) {
      const Symbol* sym = tm_.find_symbol(param);
      if (!sym) {
        diags_.error(fn.span, "undeclared-variable",
                     "unknown variable '" + param + "' in " + what + " of '" +
                         prop.name + "'");
        continue;
      }
      if (sym->kind != wanted)
        diags_.error(fn.span, "taxonomy",
                     std::string(what) + " of '" + prop.name + "' must depend on " +
                         (wanted == VarKind::Context ? "context variables"
                                                     : "variation points") +
                         ", but '" + param + "' is not one");
    }

    resolve_expr(*fn.body, ResolveContext::FunctionBody);
    std::set<std::string> refs;
    collect_variable_refs(*fn.body, refs);
    for (const auto& ref : refs) {
      if (std::find(fn.params.begin(), fn.params.end(), ref) == fn.params.end())
        diags_.error(fn.body->span, "function-scope",
                     std::string(what) + " of '" + prop.name + "' uses '" + ref +
                         "' which is not a parameter");
    }
    if (fn.body->info.type == TypeKind::Boolean)
      diags_.error(fn.body->span, "type-mismatch",
                   std::string(what) + " of '" + prop.name + "' must be numeric");
  }

  enum class ResolveContext { Condition, Consequence, FunctionBody, GeneralVar };

  void resolve_expr(const Expr& e, ResolveContext rc) {
    auto& info = const_cast<Expr&>(e).info;
    info = ExprInfo{};

    switch (e.kind) {
      case Expr::Kind::Number:
        info.type = TypeKind::Number;
        return;

      case Expr::Kind::VarRef: {
        if (auto lit = tm_.enum_literals.find(e.name); lit != tm_.enum_literals.end()) {
          info.symbol = SymbolKind::EnumLiteral;
          info.enum_type = lit->second.first;
          info.literal_code = lit->second.second;
          info.type = TypeKind::Enum;
          return;
        }
        const Symbol* sym = tm_.find_symbol(e.name);
        if (!sym) {
          diags_.error(e.span, "undeclared-variable", "unknown variable '" + e.name + "'");
          return;
        }
        switch (sym->kind) {
          case VarKind::Context: info.symbol = SymbolKind::Context; break;
          case VarKind::Varpoint: info.symbol = SymbolKind::Varpoint; break;
          case VarKind::General: info.symbol = SymbolKind::GeneralVar; break;
          case VarKind::Property:
            diags_.error(e.span, "taxonomy",
                         "property '" + e.name + "' cannot be referenced in expressions");
            return;
        }
        info.type = sym->type.kind;
        info.enum_type = sym->type.enum_type;
        info.unit = sym->type.unit;

        if (rc == ResolveContext::Condition && sym->kind == VarKind::Varpoint)
          diags_.error(e.span, "taxonomy",
                       "condition references variation point '" + e.name + "'");
        if (rc == ResolveContext::Consequence &&
            (sym->kind == VarKind::Context || sym->kind == VarKind::General))
          diags_.error(e.span, "taxonomy",
                       "consequence references '" + e.name +
                           "', which is not a variation point");
        return;
      }

      case Expr::Kind::Unary: {
        resolve_expr(*e.args[0], rc);
        const ExprInfo& a = e.args[0]->info;
        if (e.uop == UnaryOp::Neg) {
          if (a.type == TypeKind::Boolean)
            diags_.error(e.span, "type-mismatch", "cannot negate a boolean");
          info.type = TypeKind::Number;
          info.unit = a.unit;
        } else {
          if (a.type != TypeKind::Boolean && a.type != TypeKind::Unknown)
            diags_.error(e.span, "type-mismatch", "'!' applies to booleans only");
          info.type = TypeKind::Boolean;
        }
        return;
      }

      case Expr::Kind::Binary: {
        resolve_expr(*e.args[0], rc);
        resolve_expr(*e.args[1], rc);
        const ExprInfo& a = e.args[0]->info;
        const ExprInfo& b = e.args[1]->info;

        auto numericish = [](const ExprInfo& x) {
          return x.type == TypeKind::Number || x.type == TypeKind::Enum ||
                 x.type == TypeKind::Unknown;
        };

        if (e.bop == BinaryOp::And || e.bop == BinaryOp::Or) {
          if ((a.type != TypeKind::Boolean && a.type != TypeKind::Unknown) ||
              (b.type != TypeKind::Boolean && b.type != TypeKind::Unknown))
            diags_.error(e.span, "type-mismatch",
                         "logical operators apply to booleans only");
          info.type = TypeKind::Boolean;
          return;
        }

        if (is_comparison(e.bop)) {
          info.type = TypeKind::Boolean;
          if (a.type == TypeKind::Boolean || b.type == TypeKind::Boolean) {
            if (a.type != b.type)
              diags_.error(e.span, "type-mismatch", "comparison mixes boolean and number");
            else if (e.bop != BinaryOp::Eq && e.bop != BinaryOp::Ne)
              diags_.error(e.span, "type-mismatch", "ordering comparison on booleans");
            return;
          }
          if (a.type == TypeKind::Enum && b.type == TypeKind::Enum &&
              a.enum_type != b.enum_type)
            diags_.error(e.span, "type-mismatch", "comparison mixes different enum types");
          info.unit_conflict = !additive_compatible(a.unit, b.unit);
          return;
        }

        // arithmetic
        if (!numericish(a) || !numericish(b))
          diags_.error(e.span, "type-mismatch",
                       "arithmetic applies to numbers and enumerators only");
        info.type = TypeKind::Number;

        switch (e.bop) {
          case BinaryOp::Add:
          case BinaryOp::Sub:
            if (!additive_compatible(a.unit, b.unit)) {
              info.unit_conflict = true;
            } else {
              info.unit = combine_additive(a.unit, b.unit);
            }
            return;
          case BinaryOp::Mul: {
            if (a.unit.is_dimensionless()) { info.unit = b.unit; return; }
            if (b.unit.is_dimensionless()) { info.unit = a.unit; return; }
            auto dim = multiply_dimensions(a.unit.dimension, b.unit.dimension);
            if (!dim) info.unit_conflict = true;
            else info.unit = si_unit(*dim);
            return;
          }
          case BinaryOp::Div: {
            if (b.unit.is_dimensionless()) { info.unit = a.unit; return; }
            if (a.unit.is_dimensionless()) { info.unit = dimensionless_unit(); return; }
            if (a.unit == b.unit) { info.unit = dimensionless_unit(); return; }
            auto dim = divide_dimensions(a.unit.dimension, b.unit.dimension);
            if (!dim) info.unit_conflict = true;
            else info.unit = si_unit(*dim);
            return;
          }
          default:
            return;
        }
      }

      case Expr::Kind::Call: {
        for (const auto& arg : e.args) resolve_expr(*arg, rc);
        info.type = TypeKind::Number;

        if (e.args.size() == 1 &&
            (e.builtin == Builtin::Min || e.builtin == Builtin::Max)) {
          // Range extremum: exactly one variable, and it must be a context.
          std::set<std::string> vars;
          collect_variable_refs(*e.args[0], vars);
          if (vars.size() != 1) {
            diags_.error(e.span, "extremum",
                         "range extremum requires exactly one variable, found " +
                             std::to_string(vars.size()));
          } else {
            const Symbol* sym = tm_.find_symbol(*vars.begin());
            if (sym && sym->kind != VarKind::Context)
              diags_.error(e.span, "extremum",
                           "range extremum is only supported over context variables");
          }
          info.unit = e.args[0]->info.unit;
          return;
        }

        if (e.builtin == Builtin::Exp) {
          info.unit = dimensionless_unit();
        } else if (e.builtin == Builtin::Abs) {
          info.unit = e.args[0]->info.unit;
        } else {
          // two-argument min/max
          info.unit_conflict =
              !additive_compatible(e.args[0]->info.unit, e.args[1]->info.unit);
          if (!info.unit_conflict)
            info.unit = combine_additive(e.args[0]->info.unit, e.args[1]->info.unit);
        }
        return;
      }
    }
  }

  static bool additive_compatible(const Unit& a, const Unit& b) {
    return a == b || a.is_dimensionless() || b.is_dimensionless() ||
           a.dimension == b.dimension;
  }

  // Unit of a sum/comparison after homogenization.
  static Unit combine_additive(const Unit& a, const Unit& b) {
    if (a == b) return a;
    if (a.is_dimensionless()) return b;
    if (b.is_dimensionless()) return a;
    return si_unit(a.dimension);
  }

  Symbol* mutable_symbol(const std::string& name) {
    auto it = tm_.symbols.find(name);
    return it == tm_.symbols.end() ? nullptr : &it->second;
  }

  TypedModel& tm_;
  DiagnosticList& diags_;
};

void report_unit_conflicts(const Expr& e, DiagnosticList& diags) {
  if (e.info.unit_conflict)
    diags.error(e.span, "unit-mismatch",
                "operand dimensions cannot be combined here");
  for (const auto& a : e.args) report_unit_conflicts(*a, diags);
}

}  // namespace

std::shared_ptr<TypedModel> resolve_and_typecheck(std::shared_ptr<Model> model,
                                                  DiagnosticList& diags) {
  auto tm = std::make_shared<TypedModel>();
  tm->model = std::move(model);
  Analysis(*tm, diags).run();
  return tm;
}

void check_units(const TypedModel& tm, DiagnosticList& diags) {
  for (const VarDef& var : tm.model->vars) {
    if (var.init) report_unit_conflicts(*var.init, diags);
    for (const Implication& clause : var.clauses) {
      if (clause.condition) report_unit_conflicts(*clause.condition, diags);
      report_unit_conflicts(*clause.consequence, diags);
    }
    for (const FunctionDef& fn : var.priorities) report_unit_conflicts(*fn.body, diags);
    for (const FunctionDef& fn : var.definitions) report_unit_conflicts(*fn.body, diags);
  }
  for (const RuleDef& rule : tm.model->rules) {
    report_unit_conflicts(*rule.impl.condition, diags);
    report_unit_conflicts(*rule.impl.consequence, diags);
  }
}

namespace {

// Walks the Cartesian grid of `domains`, coarsened to at most
// kNormalizationGridCap joint points; first and last grid point of every
// dimension are always visited.
void scan_grid(const std::vector<const Domain*>& domains,
               const std::function<void(const std::vector<std::size_t>&)>& visit,
               bool& coarsened) {
  std::size_t dims = domains.size();
  double total = 1.0;
  for (const Domain* d : domains) total *= static_cast<double>(d->size());

  std::vector<std::size_t> stride(dims, 1);
  coarsened = false;
  if (total > static_cast<double>(kNormalizationGridCap)) {
    coarsened = true;
    double factor = std::pow(total / kNormalizationGridCap, 1.0 / dims);
    for (std::size_t i = 0; i < dims; ++i)
      stride[i] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(factor)));
  }

  // per-dimension index lists (stride steps plus the endpoint)
  std::vector<std::vector<std::size_t>> steps(dims);
  for (std::size_t i = 0; i < dims; ++i) {
    std::size_t n = domains[i]->size();
    for (std::size_t j = 0; j < n; j += stride[i]) steps[i].push_back(j);
    if (steps[i].back() != n - 1) steps[i].push_back(n - 1);
  }

  std::vector<std::size_t> cursor(dims, 0);
  std::vector<std::size_t> point(dims, 0);
  while (true) {
    for (std::size_t i = 0; i < dims; ++i) point[i] = steps[i][cursor[i]];
    visit(point);
    std::size_t k = 0;
    while (k < dims) {
      if (++cursor[k] < steps[k].size()) break;
      cursor[k] = 0;
      ++k;
    }
    if (k == dims) break;
  }
}

}  // namespace

NormalizationInfo compute_normalization(const TypedModel& tm, DiagnosticList& diags) {
  NormalizationInfo info;
  Evaluator evaluator = tm.evaluator();

  auto normalize_fn = [&](const FunctionDef& fn, const std::string& prop)
      -> std::optional<FnNormalization> {
    std::vector<const Domain*> domains;
    for (const std::string& param : fn.params) {
      const Domain* d = tm.domain_of(param);
      if (!d) return std::nullopt;  // resolution already failed
      domains.push_back(d);
    }
    if (domains.empty()) return std::nullopt;

    FnNormalization result;
    bool first = true;
    bool failed = false;
    scan_grid(domains,
              [&](const std::vector<std::size_t>& point) {
                if (failed) return;
                Env env;
                for (std::size_t i = 0; i < domains.size(); ++i) {
                  double v = domains[i]->value(point[i]);
                  env[fn.params[i]] =
                      domains[i]->kind() == Domain::Kind::Enum
                          ? Value::of_enum(domains[i]->enum_type(), static_cast<int>(v))
                          : Value::of_number(v);
                }
                double y;
                try {
                  y = evaluator.eval(*fn.body, env).as_number();
                } catch (const Error& err) {
                  diags.error(fn.span, "evaluation-error",
                              "cannot normalize function in '" + prop +
                                  "': " + err.what());
                  failed = true;
                  return;
                }
                if (first || y < result.min) result.min = y;
                if (first || y > result.max) result.max = y;
                first = false;
              },
              result.coarsened);
    if (failed || first) return std::nullopt;

    if (result.min == result.max) {
      diags.error(fn.span, "constant-function",
                  "function in '" + prop +
                      "' is constant over its grid; normalization would divide by zero");
      return std::nullopt;
    }
    return result;
  };

  for (const VarDef* prop : tm.properties) {
    PropertyNormalization pn;
    for (const FunctionDef& fn : prop->priorities)
      if (auto r = normalize_fn(fn, prop->name)) pn.priorities.push_back(*r);
    for (const FunctionDef& fn : prop->definitions)
      if (auto r = normalize_fn(fn, prop->name)) pn.definitions.push_back(*r);
    info.properties.emplace(prop->name, std::move(pn));
  }
  return info;
}

AnalysisResult analyze(std::shared_ptr<Model> model) {
  AnalysisResult result;
  result.model = resolve_and_typecheck(std::move(model), result.diags);
  check_units(*result.model, result.diags);
  if (!result.diags.has_errors())
    result.normalization = compute_normalization(*result.model, result.diags);
  return result;
}

bool resolve_condition(const TypedModel& tm, Expr& e, DiagnosticList& diags) {
  std::size_t before = diags.error_count();
  Analysis(const_cast<TypedModel&>(tm), diags).resolve_standalone_condition(e);
  return diags.error_count() == before;
}

AdaptationPipeline link_models(std::vector<std::shared_ptr<const TypedModel>> models,
                               std::vector<LinkSpec> links, DiagnosticList& diags) {
  AdaptationPipeline pipeline;
  pipeline.models = std::move(models);
  pipeline.links = std::move(links);

  auto model_name = [&](std::size_t i) {
    return pipeline.models[i]->model->source_name;
  };

  for (const LinkSpec& link : pipeline.links) {
    if (link.producer_model >= pipeline.models.size() ||
        link.consumer_model >= pipeline.models.size()) {
      diags.error({}, "link", "link references an unknown model");
      continue;
    }
    const TypedModel& prod = *pipeline.models[link.producer_model];
    const TypedModel& cons = *pipeline.models[link.consumer_model];

    const Symbol* vp = prod.find_symbol(link.varpoint);
    const Symbol* ctx = cons.find_symbol(link.context);
    if (!vp || vp->kind != VarKind::Varpoint) {
      diags.error({}, "link", "'" + link.varpoint + "' is not a variation point of " +
                                  model_name(link.producer_model));
      continue;
    }
    if (!ctx || ctx->kind != VarKind::Context) {
      diags.error({}, "link", "'" + link.context + "' is not a context of " +
                                  model_name(link.consumer_model));
      continue;
    }

    if (vp->type.unit.dimension != ctx->type.unit.dimension) {
      diags.error({}, "unit-mismatch",
                  "link " + link.varpoint + " -> " + link.context +
                      " mixes dimensions " +
                      std::string(dimension_name(vp->type.unit.dimension)) + " and " +
                      std::string(dimension_name(ctx->type.unit.dimension)));
      continue;
    }
    if (vp->type.numeric && ctx->type.numeric) {
      double lo = convert_unit(vp->type.numeric->lo, vp->type.unit, ctx->type.unit);
      double hi = convert_unit(vp->type.numeric->hi, vp->type.unit, ctx->type.unit);
      double scale = std::max({1.0, std::fabs(lo), std::fabs(hi)});
      if (std::fabs(lo - ctx->type.numeric->lo) > 1e-9 * scale ||
          std::fabs(hi - ctx->type.numeric->hi) > 1e-9 * scale)
        diags.error({}, "range-mismatch",
                    "link " + link.varpoint + " -> " + link.context +
                        " connects incompatible value ranges");
    }
    if (vp->type.enum_type && ctx->type.enum_type &&
        vp->type.enum_type->name != ctx->type.enum_type->name)
      diags.error({}, "range-mismatch",
                  "link " + link.varpoint + " -> " + link.context +
                      " connects different enum types");
  }

  // Topological order over the model dependency graph.
  std::size_t n = pipeline.models.size();
  std::vector<std::vector<std::size_t>> consumers_of(n);
  for (const LinkSpec& link : pipeline.links) {
    if (link.producer_model < n && link.consumer_model < n)
      consumers_of[link.producer_model].push_back(link.consumer_model);
  }
  std::vector<int> state(n, 0);
  bool cycle = false;
  std::function<void(std::size_t)> visit = [&](std::size_t m) {
    if (state[m] == 2) return;
    if (state[m] == 1) {
      cycle = true;
      return;
    }
    state[m] = 1;
    for (std::size_t next : consumers_of[m]) visit(next);
    state[m] = 2;
    pipeline.solve_order.push_back(m);
  };
  for (std::size_t m = 0; m < n; ++m) visit(m);
  std::reverse(pipeline.solve_order.begin(), pipeline.solve_order.end());
  if (cycle) {
    diags.error({}, "link-cycle", "model links form a cycle");
    pipeline.solve_order.clear();
  }
  return pipeline;
}

}  // namespace vml
