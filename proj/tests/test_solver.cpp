#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "solver.hpp"

using namespace vml;
using vmltest::lower_fixture;
using vmltest::lower_text;

namespace {

Env ctx(std::initializer_list<std::pair<const char*, double>> values) {
  Env env;
  for (const auto& [name, v] : values) env[name] = Value::of_number(v);
  return env;
}

double binding(const Solution& s, std::string_view name) {
  for (const auto& [n, v] : s.bindings)
    if (n == name) return v.as_number();
  FAIL("no binding for ", name);
  return 0.0;
}

}  // namespace

TEST_CASE("cost evaluation matches the hand-computed weights") {
  auto lowered = lower_fixture("listing3.vml");
  const ConstraintProblem& cp = lowered.problem;

  SUBCASE("full battery, full speed: performance term only") {
    ContextSnapshot snap =
        make_snapshot(cp, ctx({{"ctx_battery", 100}, {"ctx_noise", 10}}));
    Env vp;
    vp["maximumVelocity"] = Value::of_number(600.0);
    vp["speakerVolume"] = Value::of_number(35.0);
    CHECK(evaluate_cost(cp, snap, vp, ObjectiveMode::Exact) == -100.0);
    CHECK(evaluate_cost(cp, snap, vp, ObjectiveMode::Linearized) == -100.0);
  }
  SUBCASE("full battery, minimum speed: both terms vanish") {
    ContextSnapshot snap =
        make_snapshot(cp, ctx({{"ctx_battery", 100}, {"ctx_noise", 10}}));
    Env vp;
    vp["maximumVelocity"] = Value::of_number(100.0);
    vp["speakerVolume"] = Value::of_number(35.0);
    CHECK(evaluate_cost(cp, snap, vp, ObjectiveMode::Exact) == 0.0);
  }
  SUBCASE("empty battery: energy only, minimized at the low end") {
    ContextSnapshot snap =
        make_snapshot(cp, ctx({{"ctx_battery", 5}, {"ctx_noise", 10}}));
    Solution s = solve(cp, snap, ObjectiveMode::Exact);
    REQUIRE(s.status == Solution::Status::Optimal);
    CHECK(binding(s, "maximumVelocity") == 100.0);
  }
  SUBCASE("missing bindings are a contract violation") {
    ContextSnapshot snap =
        make_snapshot(cp, ctx({{"ctx_battery", 50}, {"ctx_noise", 10}}));
    Env vp;
    vp["maximumVelocity"] = Value::of_number(100.0);
    CHECK_THROWS_AS(evaluate_cost(cp, snap, vp), Error);
  }
}

TEST_CASE("solving the velocity model at the paper's corner contexts") {
  auto lowered = lower_fixture("listing3.vml");
  const ConstraintProblem& cp = lowered.problem;

  for (ObjectiveMode mode : {ObjectiveMode::Exact, ObjectiveMode::Linearized}) {
    CAPTURE(static_cast<int>(mode));
    Solution high = solve(
        cp, make_snapshot(cp, ctx({{"ctx_battery", 100}, {"ctx_noise", 10}})), mode);
    REQUIRE(high.status == Solution::Status::Optimal);
    CHECK(binding(high, "maximumVelocity") == 600.0);
    CHECK(binding(high, "speakerVolume") == 35.0);

    Solution low = solve(
        cp, make_snapshot(cp, ctx({{"ctx_battery", 5}, {"ctx_noise", 80}})), mode);
    REQUIRE(low.status == Solution::Status::Optimal);
    CHECK(binding(low, "maximumVelocity") == 100.0);
    CHECK(binding(low, "speakerVolume") == 85.0);
  }
}

TEST_CASE("solving the coffee model selects machines by rule") {
  auto lowered = lower_fixture("listing2.vml");
  const ConstraintProblem& cp = lowered.problem;

  ContextSnapshot snap = make_snapshot(
      cp, ctx({{"ctx_battery", 10},
               {"ctx_distanceMachine_A", 2.0},
               {"ctx_distanceMachine_B", 5.0},
               {"ctx_waitingTimeMachine_A", 100},
               {"ctx_waitingTimeMachine_B", 10},
               {"ctx_maxAllowedVelocity", 600}}));
  Solution s = solve(cp, snap);
  REQUIRE(s.status == Solution::Status::Optimal);
  const EnumType* et = cp.decisions[0].domain.enum_type();
  REQUIRE(et);
  CHECK(et->by_code(static_cast<int>(binding(s, "coffeeMachine")))->name ==
        "COFFEE_MACHINE_A");
}

TEST_CASE("contradictory triggered rules are infeasible") {
  auto lowered = lower_text(
      "number t { range: [0,10]; precision: 1; }\n"
      "context c : t;\n"
      "varpoint v : t;\n"
      "rule r1: c > 1 => v = 1;\n"
      "rule r2: c > 2 => v = 2;\n");
  const ConstraintProblem& cp = lowered.problem;

  Solution bad = solve(cp, make_snapshot(cp, ctx({{"c", 5}})));
  CHECK(bad.status == Solution::Status::Infeasible);
  REQUIRE(bad.triggered.size() == 2);
  CHECK(bad.triggered[0] == "r1");
  CHECK(bad.triggered[1] == "r2");

  Solution ok = solve(cp, make_snapshot(cp, ctx({{"c", 2}})));
  CHECK(ok.status == Solution::Status::Optimal);
  CHECK(binding(ok, "v") == 1.0);
}

TEST_CASE("a lone minimized identity lands on the domain minimum") {
  auto lowered = lower_text(
      "number t { range: [3,10]; precision: 1; }\n"
      "context c : t;\n"
      "varpoint v : t;\n"
      "property p : t minimized { priorities: f(c) = c; definitions: f(v) = v; }\n");
  const ConstraintProblem& cp = lowered.problem;
  Solution s = solve(cp, make_snapshot(cp, ctx({{"c", 7}})));
  REQUIRE(s.status == Solution::Status::Optimal);
  CHECK(binding(s, "v") == 3.0);
}

TEST_CASE("branch and bound matches brute force on random snapshots") {
  std::mt19937_64 rng(2024);
  for (const char* fixture : {"listing3.vml", "listing2.vml", "listing2_prose.vml"}) {
    CAPTURE(fixture);
    auto lowered = lower_fixture(fixture);
    const ConstraintProblem& cp = lowered.problem;

    for (int i = 0; i < 25; ++i) {
      Env raw;
      for (const auto& param : cp.parameters) {
        const Domain& d = *param.symbol->domain;
        std::uniform_int_distribution<std::size_t> pick(0, d.size() - 1);
        raw[param.name] = Value::of_number(d.value(pick(rng)));
      }
      ContextSnapshot snap = make_snapshot(cp, raw);
      for (ObjectiveMode mode : {ObjectiveMode::Exact, ObjectiveMode::Linearized}) {
        Solution fast = solve(cp, snap, mode);
        Solution slow = brute_force(cp, snap, mode);
        REQUIRE(fast.status == slow.status);
        if (fast.status != Solution::Status::Optimal) continue;
        CHECK(fast.objective == slow.objective);  // bit-equal
        REQUIRE(fast.bindings.size() == slow.bindings.size());
        for (std::size_t b = 0; b < fast.bindings.size(); ++b)
          CHECK(fast.bindings[b].second.as_number() ==
                slow.bindings[b].second.as_number());
      }
    }
  }
}

TEST_CASE("triggered rule consequences hold in the returned bindings") {
  std::mt19937_64 rng(99);
  for (const char* fixture : {"listing3.vml", "listing2_prose.vml"}) {
    CAPTURE(fixture);
    auto lowered = lower_fixture(fixture);
    const ConstraintProblem& cp = lowered.problem;
    Evaluator ev = lowered.analysis.model->evaluator();

    for (int i = 0; i < 50; ++i) {
      Env raw;
      for (const auto& param : cp.parameters) {
        const Domain& d = *param.symbol->domain;
        std::uniform_int_distribution<std::size_t> pick(0, d.size() - 1);
        raw[param.name] = Value::of_number(d.value(pick(rng)));
      }
      ContextSnapshot snap = make_snapshot(cp, raw);
      Solution s = solve(cp, snap);
      REQUIRE(s.status == Solution::Status::Optimal);

      Env env = snap.values;
      for (const VarDef* g : lowered.analysis.model->general_order)
        env[g->name] = ev.eval(*g->init, env);
      for (const auto& [name, value] : s.bindings) env[name] = value;
      for (const auto& c : cp.constraints) {
        if (c.guard && !ev.eval(*c.guard, env).as_bool()) continue;
        CHECK(ev.eval(*c.consequence, env).as_bool());
      }
    }
  }
}

TEST_CASE("normalization is invariant under positive affine definition maps") {
  std::string text = vmltest::read_fixture("listing3.vml");
  auto base = lower_text(text);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> a_dist(0.3, 4.0);
  std::uniform_real_distribution<double> b_dist(-20.0, 20.0);
  std::uniform_int_distribution<int> battery(5, 100);
  std::uniform_int_distribution<int> noise(5, 100);

  for (int trial = 0; trial < 3; ++trial) {
    double a = a_dist(rng);
    double b = b_dist(rng);
    std::string variant = text;
    auto replace = [&](const std::string& from, const std::string& to) {
      auto pos = variant.find(from);
      REQUIRE(pos != std::string::npos);
      variant.replace(pos, from.size(), to);
    };
    std::string a_text = format_double(a);
    std::string b_text = format_double(b);
    replace("= maximumVelocity; }",
            "= " + a_text + " * (maximumVelocity) + " + b_text + "; }");
    replace("= exp(maximumVelocity / 150); }",
            "= " + a_text + " * (exp(maximumVelocity / 150)) + " + b_text + "; }");

    auto transformed = lower_text(variant);
    REQUIRE(!transformed.lower_diags.has_errors());

    for (int i = 0; i < 5; ++i) {
      Env raw = ctx({{"ctx_battery", double(battery(rng))},
                     {"ctx_noise", double(noise(rng))}});
      ContextSnapshot snap_base = make_snapshot(base.problem, raw);
      ContextSnapshot snap_tr = make_snapshot(transformed.problem, raw);
      for (ObjectiveMode mode : {ObjectiveMode::Exact, ObjectiveMode::Linearized}) {
        Solution s1 = solve(base.problem, snap_base, mode);
        Solution s2 = solve(transformed.problem, snap_tr, mode);
        REQUIRE(s1.status == Solution::Status::Optimal);
        REQUIRE(s2.status == Solution::Status::Optimal);
        for (std::size_t d = 0; d < s1.bindings.size(); ++d)
          CHECK(s1.bindings[d].second.as_number() ==
                s2.bindings[d].second.as_number());
      }
    }
  }
}

TEST_CASE("out-of-range context values are clamped with a note") {
  auto lowered = lower_fixture("listing3.vml");
  const ConstraintProblem& cp = lowered.problem;

  ContextSnapshot wild =
      make_snapshot(cp, ctx({{"ctx_battery", 150}, {"ctx_noise", -3}}));
  CHECK(wild.clamped.size() == 2);
  ContextSnapshot tame =
      make_snapshot(cp, ctx({{"ctx_battery", 100}, {"ctx_noise", 5}}));
  CHECK(tame.clamped.empty());

  Solution a = solve(cp, wild);
  Solution b = solve(cp, tame);
  CHECK(a.objective == b.objective);
  for (std::size_t d = 0; d < a.bindings.size(); ++d)
    CHECK(a.bindings[d].second.as_number() == b.bindings[d].second.as_number());
}

TEST_CASE("missing context values are rejected") {
  auto lowered = lower_fixture("listing3.vml");
  CHECK_THROWS_AS(make_snapshot(lowered.problem, ctx({{"ctx_battery", 50}})), Error);
}

TEST_CASE("sweeping the battery") {
  auto lowered = lower_fixture("listing3.vml");
  const ConstraintProblem& cp = lowered.problem;

  Domain grid = Domain::numeric(5, 100, 1);
  auto rows = sweep(cp, "ctx_battery", grid, ctx({{"ctx_noise", 10}}));
  REQUIRE(rows.size() == 96);

  double prev = 0.0;
  for (const SweepRow& row : rows) {
    REQUIRE(row.solution.status == Solution::Status::Optimal);
    double v = binding(row.solution, "maximumVelocity");
    CHECK(v >= prev);  // non-decreasing in battery
    prev = v;
  }
  CHECK(binding(rows.front().solution, "maximumVelocity") == 100.0);
  CHECK(binding(rows.back().solution, "maximumVelocity") == 600.0);

  std::string csv = sweep_csv(cp, grid, rows);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "context_value,maximumVelocity,speakerVolume,objective,status");
  std::size_t count = 0;
  std::string line;
  while (std::getline(lines, line))
    if (!line.empty()) ++count;
  CHECK(count == 96);
}

TEST_CASE("sweeping a context with constant weights gives identical solutions") {
  auto lowered = lower_fixture("listing3.vml");
  const ConstraintProblem& cp = lowered.problem;

  // noise within [20,70) pins the speaker volume and never touches weights
  Domain grid = Domain::numeric(20, 69, 1);
  auto rows = sweep(cp, "ctx_noise", grid, ctx({{"ctx_battery", 42}}));
  REQUIRE(rows.size() == 50);
  for (const SweepRow& row : rows) {
    CHECK(row.solution.objective == rows.front().solution.objective);
    for (std::size_t d = 0; d < row.solution.bindings.size(); ++d)
      CHECK(row.solution.bindings[d].second.as_number() ==
            rows.front().solution.bindings[d].second.as_number());
  }
}

TEST_CASE("brute force refuses oversized joint domains") {
  auto lowered = lower_text(
      "number wide { range: [0,1000000]; precision: 0.1; }\n"
      "number t { range: [0,10]; precision: 1; }\n"
      "context c : t;\n"
      "varpoint v : wide;\n"
      "varpoint w : wide;\n"
      "rule r: c > 1 => v = 5 & w = 5;\n");
  const ConstraintProblem& cp = lowered.problem;
  CHECK_THROWS_AS(brute_force(cp, make_snapshot(cp, ctx({{"c", 5}}))), Error);
}
