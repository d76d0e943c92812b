#ifndef VML_RUNTIME_HPP
#define VML_RUNTIME_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "minizinc.hpp"
#include "solver.hpp"

namespace vml {

struct PipelineModel {
  std::string name;
  std::string path;
  std::shared_ptr<const TypedModel> typed;
  std::shared_ptr<const ConstraintProblem> problem;
};

/// Event subscription: when the predicate over the store flips from false
/// to true, the subscription fires; push-mode subscriptions re-solve their
/// model (and, through links, affected downstream models).
struct Subscription {
  std::size_t model = 0;
  std::string context;
  ExprPtr predicate;
  bool push = true;
  bool state = false;  // edge detection
};

struct RuntimePipeline {
  std::vector<PipelineModel> models;
  AdaptationPipeline linked;
  std::vector<Subscription> subscriptions;
  ObjectiveMode mode = ObjectiveMode::Linearized;

  int index_of(std::string_view model_name) const;
};

/// Loads a pipeline manifest: `[[model]]` sections with name/file,
/// `[[link]]` sections with from/to ("model.variable"), `[[subscription]]`
/// sections with model/context/predicate/mode (push|notify). Model files
/// are resolved relative to the manifest. Parse and analysis problems land
/// in `diags`.
RuntimePipeline load_pipeline(const std::string& manifest_path, DiagnosticList& diags,
                              int segments = 5);

/// Current value per context variable, shared across the pipeline models.
class ContextStore {
 public:
  void set(const std::string& name, Value v) { values_[name] = v; }
  bool has(const std::string& name) const { return values_.count(name) != 0; }
  const Env& values() const { return values_; }

 private:
  Env values_;
};

/// Clamps the value to the declaring model's range, stores it, and
/// evaluates subscription predicates on that variable; returns the indices
/// of subscriptions that fired (false -> true edge).
/// Throws Error("unknown-context") for undeclared names.
std::vector<std::size_t> update_context(RuntimePipeline& pipeline, ContextStore& store,
                                        const std::string& name, Value value);

struct TimelineRow {
  long tick = 0;
  std::string trigger;  // "query" | "push"
  std::string model;
  std::string bindings;  // name=value;... in declaration order
  std::string objective;
  std::string status;  // "optimal" | "infeasible"
};

struct BindingTimeline {
  std::vector<TimelineRow> rows;
  bool any_infeasible = false;
};

/// Synchronous solve of one model: upstream producers are solved first in
/// pipeline order and their variation points propagated into linked
/// contexts. Appends one row per solver invocation.
Solution trigger_query(RuntimePipeline& pipeline, ContextStore& store,
                       std::size_t model_index, BindingTimeline& timeline, long tick);

struct ScenarioEntry {
  long tick = 0;
  enum class Kind { Set, Query } kind = Kind::Set;
  std::string name;   // context (Set) or model (Query)
  std::string value;  // raw literal for Set
};

struct Scenario {
  std::vector<ScenarioEntry> entries;
};

/// Line-oriented script: `TICK set name=value` or `TICK query model`;
/// blank lines and '#' comments are skipped. Ticks must be non-decreasing.
Scenario parse_scenario(std::string_view text, DiagnosticList& diags);

/// Replays the script: set entries update the store and run push-mode
/// re-solves for fired subscriptions; query entries solve on demand.
BindingTimeline run_scenario(RuntimePipeline& pipeline, const Scenario& scenario);

/// Header: tick,trigger,model,bindings,objective,status
std::string timeline_csv(const BindingTimeline& timeline);

}  // namespace vml

#endif
