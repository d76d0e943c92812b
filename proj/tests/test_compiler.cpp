#include <cmath>

#include "doctest.h"
#include "helpers.hpp"

using namespace vml;
using vmltest::lower_fixture;
using vmltest::lower_text;

TEST_CASE("lowering the velocity model") {
  auto lowered = lower_fixture("listing3.vml");
  REQUIRE(!lowered.analysis.diags.has_errors());
  REQUIRE(!lowered.lower_diags.has_errors());
  const ConstraintProblem& cp = lowered.problem;

  CHECK(cp.parameters.size() == 2);
  CHECK(cp.decisions.size() == 2);
  CHECK(cp.constraints.size() == 3);
  REQUIRE(cp.objective.size() == 2);
  CHECK(cp.objective[0].property == "performance");
  CHECK(cp.objective[0].sign == -1);  // maximized
  CHECK(cp.objective[1].property == "energyConsumption");
  CHECK(cp.objective[1].sign == 1);  // minimized

  // identity definition is affine, exp is linearized
  CHECK(cp.objective[0].definitions[0].affine);
  CHECK(!cp.objective[0].definitions[0].surrogate);
  CHECK(!cp.objective[1].definitions[0].affine);
  REQUIRE(cp.objective[1].definitions[0].surrogate);
  CHECK(cp.objective[1].definitions[0].surrogate->segment_count() == 5);
}

TEST_CASE("lowering the coffee model") {
  auto lowered = lower_fixture("listing2.vml");
  REQUIRE(!lowered.analysis.diags.has_errors());
  const ConstraintProblem& cp = lowered.problem;
  CHECK(cp.parameters.size() == 6);
  REQUIRE(cp.decisions.size() == 1);
  CHECK(cp.decisions[0].domain.kind() == Domain::Kind::Enum);
  CHECK(cp.constraints.size() == 4);
  CHECK(cp.objective.empty());
}

TEST_CASE("an unconstrained variation point warns") {
  auto lowered = lower_text(
      "number t { range: [0,10]; precision: 1; }\n"
      "context c : t;\n"
      "varpoint v : t;\n");
  CHECK(lowered.lower_diags.count("unbound-varpoint") == 1);
}

TEST_CASE("objective properties need a direction") {
  auto lowered = lower_text(
      "number t { range: [0,10]; precision: 1; }\n"
      "context c : t;\n"
      "varpoint v : t;\n"
      "property p : t { priorities: f(c) = c; definitions: f(v) = v; }\n"
      "rule r: c > 1 => v = 2;\n");
  CHECK(lowered.lower_diags.count("missing-direction") == 1);
}

TEST_CASE("flipping a direction negates exactly that term") {
  std::string text = vmltest::read_fixture("listing3.vml");
  auto base = lower_text(text);
  std::string flipped_text = text;
  auto pos = flipped_text.find("maximized");
  REQUIRE(pos != std::string::npos);
  flipped_text.replace(pos, 9, "minimized");
  auto flipped = lower_text(flipped_text);

  REQUIRE(base.problem.objective.size() == 2);
  REQUIRE(flipped.problem.objective.size() == 2);
  CHECK(base.problem.objective[0].sign == -1);
  CHECK(flipped.problem.objective[0].sign == 1);
  CHECK(base.problem.objective[1].sign == flipped.problem.objective[1].sign);

  // nothing else moved
  CHECK(base.problem.constraints.size() == flipped.problem.constraints.size());
  for (std::size_t t = 0; t < 2; ++t) {
    CHECK(base.problem.objective[t].definitions[0].norm.min ==
          flipped.problem.objective[t].definitions[0].norm.min);
    CHECK(base.problem.objective[t].definitions[0].norm.max ==
          flipped.problem.objective[t].definitions[0].norm.max);
    CHECK(base.problem.objective[t].priorities[0].norm.min ==
          flipped.problem.objective[t].priorities[0].norm.min);
    CHECK(base.problem.objective[t].priorities[0].norm.max ==
          flipped.problem.objective[t].priorities[0].norm.max);
  }
}

namespace {

// Normalized image of exp(v/150) over [100,600], scaled to [0,100].
double normalized_exp(double v) {
  double lo = std::exp(100.0 / 150.0);
  double hi = std::exp(600.0 / 150.0);
  return 100.0 * (std::exp(v / 150.0) - lo) / (hi - lo);
}

PiecewiseLinear energy_surrogate(int segments) {
  auto lowered = lower_fixture("listing3.vml", segments);
  REQUIRE(!lowered.lower_diags.has_errors());
  REQUIRE(lowered.problem.objective[1].definitions[0].surrogate);
  return *lowered.problem.objective[1].definitions[0].surrogate;
}

}  // namespace

TEST_CASE("chord surrogate of the energy definition") {
  PiecewiseLinear pl = energy_surrogate(5);
  REQUIRE(pl.breakpoints.size() == 6);
  for (int j = 0; j <= 5; ++j)
    CHECK(pl.breakpoints[j] == doctest::Approx(100.0 + 100.0 * j).epsilon(1e-12));

  // exact at breakpoints
  for (double b : pl.breakpoints)
    CHECK(std::fabs(pl.eval(b) - normalized_exp(b)) <= 1e-9);
  CHECK(pl.eval(100.0) == doctest::Approx(0.0));
  CHECK(pl.eval(600.0) == doctest::Approx(100.0));

  // chords of a convex function overestimate in the interior
  CHECK(pl.eval(550.0) >= normalized_exp(550.0));
}

TEST_CASE("a single chord over the energy definition") {
  PiecewiseLinear pl = energy_surrogate(1);
  REQUIRE(pl.segment_count() == 1);
  CHECK(pl.slopes[0] == doctest::Approx((100.0 - 0.0) / (600.0 - 100.0)).epsilon(1e-12));
}

TEST_CASE("chords of a line have zero error at any segment count") {
  auto lowered = lower_fixture("listing3.vml", 7);
  const NormalizedFn& identity = lowered.problem.objective[0].definitions[0];
  CHECK(identity.affine);

  // build the surrogate explicitly for the affine definition and compare
  const Domain* d = lowered.analysis.model->domain_of("maximumVelocity");
  REQUIRE(d);
  Evaluator ev = lowered.analysis.model->evaluator();
  PiecewiseLinear pl =
      piecewise_linearize(*identity.fn->body, "maximumVelocity", *d, 7,
                          identity.norm.min, identity.norm.max, ev);
  for (std::size_t j = 1; j < pl.segment_count(); ++j)
    CHECK(pl.slopes[j] == doctest::Approx(pl.slopes[0]).epsilon(1e-9));
  for (std::size_t i = 0; i < d->size(); i += 37) {
    double v = d->value(i);
    double exact = 100.0 * (v - 100.0) / 500.0;
    CHECK(std::fabs(pl.eval(v) - exact) <= 1e-9);
  }
}

TEST_CASE("affinity classification") {
  auto lowered = lower_text(
      "number t { range: [0,10]; precision: 1; }\n"
      "context c : t;\n"
      "varpoint v : t;\n"
      "varpoint w : t;\n"
      "property p1 : t minimized { priorities: f(c) = c;"
      " definitions: f(v) = 3 * v + 1 - v / 2; }\n"
      "property p2 : t minimized { priorities: f(c) = c;"
      " definitions: f(v, w) = v * w; }\n"
      "rule r: c > 1 => v = 2 & w = 3;\n");
  REQUIRE(lowered.problem.objective.size() == 2);
  CHECK(lowered.problem.objective[0].definitions[0].affine);
  CHECK(!lowered.problem.objective[1].definitions[0].affine);
  CHECK(!lowered.problem.objective[1].definitions[0].surrogate);  // two variables
}
