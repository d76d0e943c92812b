#ifndef VML_PROBLEM_HPP
#define VML_PROBLEM_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "analyzer.hpp"

namespace vml {

/// Chord (secant) interpolation of a normalized definition function over
/// one decision variable. Segments are half-open [b_j, b_{j+1}) with the
/// last one closed; evaluation clamps to the covered interval.
struct PiecewiseLinear {
  std::vector<double> breakpoints;  // k+1 ascending
  std::vector<double> slopes;       // k
  std::vector<double> intercepts;   // k

  std::size_t segment_count() const { return slopes.size(); }
  std::size_t segment_of(double x) const;
  double eval(double x) const;
};

/// Builds the k-segment chord surrogate of the function body over `domain`,
/// with the image scaled to [0,100] via the (norm_min, norm_max) extrema.
/// Exact at breakpoints by construction.
PiecewiseLinear piecewise_linearize(const Expr& body, const std::string& param,
                                    const Domain& domain, int segments,
                                    double norm_min, double norm_max,
                                    const Evaluator& evaluator);

struct NormalizedFn {
  const FunctionDef* fn = nullptr;
  FnNormalization norm;
  bool affine = false;  // affine in the decision variables, no surrogate needed
  std::optional<PiecewiseLinear> surrogate;
};

/// One summand of the cost function: sign * weight(ctx) * value(vp), with
/// sign +1 for minimized and -1 for maximized properties.
struct ObjectiveTerm {
  std::string property;
  int sign = 1;
  std::vector<NormalizedFn> priorities;   // weight: mean, each scaled to [0,1]
  std::vector<NormalizedFn> definitions;  // value: mean, each scaled to [0,100]
};

struct LoweredConstraint {
  std::string name;              // owning rule or variation point
  const Expr* guard = nullptr;   // null: always active (invariant)
  const Expr* consequence = nullptr;
};

struct ConstraintProblem {
  std::shared_ptr<const TypedModel> model;

  struct Parameter {
    std::string name;
    const Symbol* symbol = nullptr;
  };
  struct Decision {
    std::string name;
    const Symbol* symbol = nullptr;
    Domain domain;
  };

  std::vector<Parameter> parameters;  // one per context, declaration order
  std::vector<Decision> decisions;    // one per variation point, declaration order
  std::vector<LoweredConstraint> constraints;
  std::vector<ObjectiveTerm> objective;  // one per property, declaration order
  int segments = 5;

  const Decision* find_decision(std::string_view name) const;
  int decision_index(std::string_view name) const;
};

/// Lowers an analyzed model: contexts become parameters, variation points
/// decision variables, rules and variation point clauses implication
/// constraints, properties weighted objective terms. Nonlinear one-variable
/// definitions get a chord surrogate with `segments` pieces.
ConstraintProblem lower(std::shared_ptr<const TypedModel> tm,
                        const NormalizationInfo& normalization, int segments,
                        DiagnosticList& diags);

/// True when the expression is affine in the given decision variables.
bool is_affine_in(const Expr& e, const TypedModel& tm);

}  // namespace vml

#endif
