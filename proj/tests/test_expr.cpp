#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "solver.hpp"

using namespace vml;
using vmltest::analyze_fixture;

namespace {

const TypedModel& coffee_model() {
  static AnalysisResult analysis = analyze_fixture("listing2.vml");
  REQUIRE(!analysis.diags.has_errors());
  return *analysis.model;
}

const Expr& general_var_init(const TypedModel& tm, std::string_view name) {
  for (const VarDef& v : tm.model->vars)
    if (v.name == name) return *v.init;
  FAIL("no such var");
  std::abort();
}

}  // namespace

TEST_CASE("travel time homogenizes meters against mm/s") {
  const TypedModel& tm = coffee_model();
  Evaluator ev = tm.evaluator();
  Env env;
  env["ctx_waitingTimeMachine_A"] = Value::of_number(100.0);  // s
  env["ctx_distanceMachine_A"] = Value::of_number(3.0);       // m
  env["ctx_maxAllowedVelocity"] = Value::of_number(600.0);    // mm/s

  Value v = ev.eval(general_var_init(tm, "timeMachine_A"), env);
  CHECK(v.as_number() == 105.0);  // 100 + 3000/600
}

TEST_CASE("range extremum scans the declared domain") {
  AnalysisResult analysis = vmltest::analyze_fixture("listing3.vml");
  REQUIRE(!analysis.diags.has_errors());
  const TypedModel& tm = *analysis.model;
  Evaluator ev = tm.evaluator();

  DiagnosticList diags;
  ExprPtr e = parse_expression("max(exp(-ctx_battery/15))", diags);
  REQUIRE(!diags.has_errors());
  DiagnosticList resolve_diags;  // flags the non-boolean type; annotations stand
  resolve_condition(tm, *e, resolve_diags);
  double got = ev.eval(*e, {}).as_number();

  // independent scan over the declared battery grid
  double expected = -1.0;
  for (int b = 5; b <= 100; ++b) expected = std::max(expected, std::exp(-b / 15.0));
  CHECK(got == expected);
  CHECK(got == doctest::Approx(0.7165).epsilon(1e-3));
}

TEST_CASE("extremum of monotone expressions sits at a domain endpoint") {
  AnalysisResult analysis = vmltest::analyze_fixture("listing3.vml");
  const TypedModel& tm = *analysis.model;
  Evaluator ev = tm.evaluator();

  for (const char* text : {"max(exp(-ctx_battery/15))", "min(exp(-ctx_battery/15))",
                           "max(ctx_battery)", "min(ctx_battery)",
                           "max(-ctx_battery)", "min(3 * ctx_battery + 1)"}) {
    DiagnosticList diags;
    ExprPtr e = parse_expression(text, diags);
    REQUIRE(!diags.has_errors());
    DiagnosticList resolve_diags;
    resolve_condition(tm, *e, resolve_diags);
    double got = ev.eval(*e, {}).as_number();

    // brute force over the grid, tracking the extremum and its location
    const Domain* d = tm.domain_of("ctx_battery");
    REQUIRE(d);
    bool is_max = text[1] == 'a';
    double best = 0.0;
    std::size_t arg = 0;
    Env env;
    for (std::size_t i = 0; i < d->size(); ++i) {
      env["ctx_battery"] = Value::of_number(d->value(i));
      double y = ev.eval(*e->args[0], env).as_number();
      if (i == 0 || (is_max ? y > best : y < best)) {
        best = y;
        arg = i;
      }
    }
    CHECK(got == best);
    bool at_endpoint = arg == 0 || arg == d->size() - 1;
    CHECK(at_endpoint);  // all probes are monotone
  }
}

TEST_CASE("boolean comparison") {
  DiagnosticList diags;
  ExprPtr e = parse_expression("ctx_noise < 20", diags);
  Evaluator ev;
  Env env;
  env["ctx_noise"] = Value::of_number(10.0);
  CHECK(ev.eval(*e, env).as_bool());
  env["ctx_noise"] = Value::of_number(25.0);
  CHECK(!ev.eval(*e, env).as_bool());
}

TEST_CASE("evaluation is pure") {
  DiagnosticList diags;
  ExprPtr e = parse_expression("exp(-x / 15) * 3.7 + abs(0 - x)", diags);
  Evaluator ev;
  Env env;
  env["x"] = Value::of_number(13.25);
  double a = ev.eval(*e, env).as_number();
  double b = ev.eval(*e, env).as_number();
  CHECK(a == b);  // bit-identical
}

TEST_CASE("evaluation faults") {
  Evaluator ev;
  DiagnosticList diags;

  ExprPtr div = parse_expression("1 / x", diags);
  Env env;
  env["x"] = Value::of_number(0.0);
  CHECK_THROWS_AS(ev.eval(*div, env), Error);

  ExprPtr unbound = parse_expression("y + 1", diags);
  CHECK_THROWS_AS(ev.eval(*unbound, {}), Error);

  ExprPtr extremum = parse_expression("max(x + 1)", diags);
  CHECK_THROWS_AS(ev.eval(*extremum, env), Error);  // no domain lookup wired
}

TEST_CASE("logic operators short-circuit") {
  Evaluator ev;
  DiagnosticList diags;
  ExprPtr e = parse_expression("x < 1 | 1 / x > 0", diags);
  Env env;
  env["x"] = Value::of_number(0.0);  // rhs would divide by zero
  CHECK(ev.eval(*e, env).as_bool());
}

TEST_CASE("clone and structural equality ignore spans") {
  DiagnosticList diags;
  ExprPtr e = parse_expression("exp(-a/15) - max(b, 2) * 3", diags);
  ExprPtr copy = e->clone();
  CHECK(structurally_equal(*e, *copy));
  copy->args[1]->args[1]->number = 99;  // mutate a literal deep in the tree
  CHECK(!structurally_equal(*e, *copy));
}
