#include "runtime.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "parser.hpp"

namespace vml {

int RuntimePipeline::index_of(std::string_view model_name) const {
  for (std::size_t i = 0; i < models.size(); ++i)
    if (models[i].name == model_name) return static_cast<int>(i);
  return -1;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

struct ManifestEntry {
  std::string section;
  int line = 0;
  std::map<std::string, std::string> keys;
};

// Minimal TOML-like subset: [[section]] headers followed by key = "value"
// lines. '#' starts a comment.
std::vector<ManifestEntry> parse_manifest(std::string_view text, DiagnosticList& diags) {
  std::vector<ManifestEntry> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;

    if (line.size() > 4 && line.substr(0, 2) == "[[" &&
        line.substr(line.size() - 2) == "]]") {
      entries.push_back({trim(line.substr(2, line.size() - 4)), line_no, {}});
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos || entries.empty()) {
      diags.error({line_no, 1, 0, 0}, "manifest",
                  "expected [[section]] or key = value");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    entries.back().keys[key] = value;
  }
  return entries;
}

std::string read_file(const std::string& path, DiagnosticList& diags) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    diags.error({}, "io", "cannot open '" + path + "'");
    return "";
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool model_complete(const RuntimePipeline& pipeline, const ContextStore& store,
                    std::size_t idx) {
  for (const auto& param : pipeline.models[idx].problem->parameters)
    if (!store.has(param.name)) return false;
  return true;
}

Env snapshot_raw(const ContextStore& store) {
  return store.values();
}

void append_prefixed(DiagnosticList& dst, const DiagnosticList& src,
                     const std::string& prefix) {
  for (const auto& d : src.items()) {
    if (d.severity == Severity::Error)
      dst.error(d.span, d.code, prefix + ": " + d.message);
    else
      dst.warning(d.span, d.code, prefix + ": " + d.message);
  }
}

std::string bindings_text(const PipelineModel& pm, const Solution& solution) {
  std::string out;
  for (std::size_t d = 0; d < solution.bindings.size(); ++d) {
    if (d) out += ';';
    out += solution.bindings[d].first;
    out += '=';
    out += pm.problem->decisions[d].domain.format(solution.bindings[d].second.as_number());
  }
  return out;
}

class ScenarioRunner {
 public:
  ScenarioRunner(RuntimePipeline& pipeline, ContextStore& store, BindingTimeline& timeline)
      : pipeline_(pipeline), store_(store), timeline_(timeline) {}

  Solution solve_model(std::size_t idx, const char* trigger, long tick,
                       bool cascade_downstream, std::set<std::size_t>& visiting) {
    visiting.insert(idx);
    const PipelineModel& pm = pipeline_.models[idx];
    ContextSnapshot snapshot = make_snapshot(*pm.problem, snapshot_raw(store_));
    Solution solution = solve(*pm.problem, snapshot, pipeline_.mode);

    TimelineRow row;
    row.tick = tick;
    row.trigger = trigger;
    row.model = pm.name;
    if (solution.status == Solution::Status::Optimal) {
      row.bindings = bindings_text(pm, solution);
      row.objective = format_double(solution.objective);
      row.status = "optimal";
    } else {
      row.status = "infeasible";
      timeline_.any_infeasible = true;
    }
    timeline_.rows.push_back(std::move(row));

    if (solution.status == Solution::Status::Optimal)
      propagate(idx, solution, tick, cascade_downstream, visiting);
    visiting.erase(idx);
    return solution;
  }

  void propagate(std::size_t idx, const Solution& solution, long tick,
                 bool cascade_downstream, std::set<std::size_t>& visiting) {
    const PipelineModel& pm = pipeline_.models[idx];
    for (const LinkSpec& link : pipeline_.linked.links) {
      if (link.producer_model != idx) continue;
      const Value* bound = nullptr;
      for (const auto& [name, value] : solution.bindings)
        if (name == link.varpoint) bound = &value;
      if (!bound) continue;

      const Symbol* vp = pm.typed->find_symbol(link.varpoint);
      const Symbol* ctx =
          pipeline_.models[link.consumer_model].typed->find_symbol(link.context);
      double converted = bound->as_number();
      if (vp && ctx) converted = convert_unit(converted, vp->type.unit, ctx->type.unit);

      bool changed = true;
      if (store_.has(link.context)) {
        double previous = store_.values().at(link.context).as_number();
        changed = previous != converted;
      }
      auto fired = update_context(pipeline_, store_, link.context,
                                  Value::of_number(converted));
      handle_fired(fired, tick, visiting);

      if (cascade_downstream && changed && !visiting.count(link.consumer_model) &&
          model_complete(pipeline_, store_, link.consumer_model))
        solve_model(link.consumer_model, "push", tick, true, visiting);
    }
  }

  void handle_fired(const std::vector<std::size_t>& fired, long tick,
                    std::set<std::size_t>& visiting) {
    for (std::size_t s : fired) {
      const Subscription& sub = pipeline_.subscriptions[s];
      if (!sub.push || visiting.count(sub.model)) continue;
      // A push subscription on an unsolvable model is a wiring bug.
      if (!model_complete(pipeline_, store_, sub.model))
        throw Error("missing-context",
                    "push re-solve of '" + pipeline_.models[sub.model].name +
                        "' before all its contexts are bound");
      solve_model(sub.model, "push", tick, true, visiting);
    }
  }

  Solution query(std::size_t idx, long tick) {
    // Producers feeding this model, transitively.
    std::set<std::size_t> upstream;
    std::function<void(std::size_t)> gather = [&](std::size_t m) {
      for (const LinkSpec& link : pipeline_.linked.links)
        if (link.consumer_model == m && !upstream.count(link.producer_model)) {
          upstream.insert(link.producer_model);
          gather(link.producer_model);
        }
    };
    gather(idx);

    std::set<std::size_t> visiting;
    for (std::size_t m : pipeline_.linked.solve_order)
      if (upstream.count(m)) solve_model(m, "query", tick, false, visiting);
    return solve_model(idx, "query", tick, false, visiting);
  }

 private:
  RuntimePipeline& pipeline_;
  ContextStore& store_;
  BindingTimeline& timeline_;
};

}  // namespace

RuntimePipeline load_pipeline(const std::string& manifest_path, DiagnosticList& diags,
                              int segments) {
  RuntimePipeline pipeline;
  std::string text = read_file(manifest_path, diags);
  if (diags.has_errors()) return pipeline;

  auto entries = parse_manifest(text, diags);
  auto manifest_dir = std::filesystem::path(manifest_path).parent_path();

  std::vector<LinkSpec> links;
  std::vector<std::shared_ptr<const TypedModel>> typed_models;

  for (const ManifestEntry& entry : entries) {
    if (entry.section != "model") continue;
    auto name = entry.keys.find("name");
    auto file = entry.keys.find("file");
    if (name == entry.keys.end() || file == entry.keys.end()) {
      diags.error({entry.line, 1, 0, 0}, "manifest", "[[model]] needs name and file");
      continue;
    }
    std::string path = (manifest_dir / file->second).string();
    std::string source = read_file(path, diags);
    if (diags.has_errors()) return pipeline;

    ParseResult parsed = parse_model(source, file->second);
    AnalysisResult analysis;
    if (!parsed.diags.has_errors())
      analysis = analyze(std::make_shared<Model>(std::move(parsed.model)));
    append_prefixed(diags, parsed.diags, file->second);
    append_prefixed(diags, analysis.diags, file->second);
    if (parsed.diags.has_errors() || analysis.diags.has_errors()) continue;

    DiagnosticList lower_diags;
    auto problem = std::make_shared<ConstraintProblem>(
        lower(analysis.model, analysis.normalization, segments, lower_diags));
    append_prefixed(diags, lower_diags, file->second);

    PipelineModel pm;
    pm.name = name->second;
    pm.path = path;
    pm.typed = analysis.model;
    pm.problem = std::move(problem);
    typed_models.push_back(pm.typed);
    pipeline.models.push_back(std::move(pm));
  }

  for (const ManifestEntry& entry : entries) {
    if (entry.section != "link") continue;
    auto from = entry.keys.find("from");
    auto to = entry.keys.find("to");
    if (from == entry.keys.end() || to == entry.keys.end()) {
      diags.error({entry.line, 1, 0, 0}, "manifest", "[[link]] needs from and to");
      continue;
    }
    auto split = [&](const std::string& ref) -> std::pair<int, std::string> {
      auto dot = ref.find('.');
      if (dot == std::string::npos) return {-1, ""};
      return {pipeline.index_of(ref.substr(0, dot)), ref.substr(dot + 1)};
    };
    auto [pm, vp] = split(from->second);
    auto [cm, ctx] = split(to->second);
    if (pm < 0 || cm < 0) {
      diags.error({entry.line, 1, 0, 0}, "manifest",
                  "link endpoints must be model.variable with a declared model");
      continue;
    }
    links.push_back({static_cast<std::size_t>(pm), vp, static_cast<std::size_t>(cm), ctx});
  }

  for (const ManifestEntry& entry : entries) {
    if (entry.section != "subscription") continue;
    auto model = entry.keys.find("model");
    auto context = entry.keys.find("context");
    auto predicate = entry.keys.find("predicate");
    if (model == entry.keys.end() || context == entry.keys.end() ||
        predicate == entry.keys.end()) {
      diags.error({entry.line, 1, 0, 0}, "manifest",
                  "[[subscription]] needs model, context, and predicate");
      continue;
    }
    int idx = pipeline.index_of(model->second);
    if (idx < 0) {
      diags.error({entry.line, 1, 0, 0}, "manifest",
                  "unknown model '" + model->second + "'");
      continue;
    }
    Subscription sub;
    sub.model = static_cast<std::size_t>(idx);
    sub.context = context->second;
    DiagnosticList pred_diags;
    sub.predicate = parse_expression(predicate->second, pred_diags);
    if (!pred_diags.has_errors())
      resolve_condition(*pipeline.models[idx].typed, *sub.predicate, pred_diags);
    for (const auto& d : pred_diags.items())
      diags.error({entry.line, 1, 0, 0}, d.code,
                  "in predicate \"" + predicate->second + "\": " + d.message);
    auto mode = entry.keys.find("mode");
    sub.push = mode == entry.keys.end() || mode->second == "push";
    pipeline.subscriptions.push_back(std::move(sub));
  }

  if (!diags.has_errors())
    pipeline.linked = link_models(std::move(typed_models), std::move(links), diags);
  return pipeline;
}

std::vector<std::size_t> update_context(RuntimePipeline& pipeline, ContextStore& store,
                                        const std::string& name, Value value) {
  const Symbol* sym = nullptr;
  for (const auto& pm : pipeline.models) {
    const Symbol* candidate = pm.typed->find_symbol(name);
    if (candidate && candidate->kind == VarKind::Context) {
      sym = candidate;
      break;
    }
  }
  if (!sym) throw Error("unknown-context", "no model declares context '" + name + "'");

  Value stored = value;
  if (sym->domain) {
    double snapped = sym->domain->snap(value.as_number());
    if (sym->domain->kind() == Domain::Kind::Enum)
      stored = Value::of_enum(sym->domain->enum_type(), static_cast<int>(snapped));
    else if (sym->domain->kind() == Domain::Kind::Boolean)
      stored = Value::of_bool(snapped >= 0.5);
    else
      stored = Value::of_number(snapped);
  }
  store.set(name, stored);

  std::vector<std::size_t> fired;
  for (std::size_t s = 0; s < pipeline.subscriptions.size(); ++s) {
    Subscription& sub = pipeline.subscriptions[s];
    if (sub.context != name || !sub.predicate) continue;
    bool now = false;
    try {
      Evaluator evaluator = pipeline.models[sub.model].typed->evaluator();
      now = evaluator.eval(*sub.predicate, store.values()).as_bool();
    } catch (const Error&) {
      now = false;  // undetermined until all referenced contexts exist
    }
    if (now && !sub.state) fired.push_back(s);
    sub.state = now;
  }
  return fired;
}

Solution trigger_query(RuntimePipeline& pipeline, ContextStore& store,
                       std::size_t model_index, BindingTimeline& timeline, long tick) {
  ScenarioRunner runner(pipeline, store, timeline);
  return runner.query(model_index, tick);
}

Scenario parse_scenario(std::string_view text, DiagnosticList& diags) {
  Scenario scenario;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  long last_tick = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;

    std::istringstream fields(line);
    long tick = 0;
    std::string verb;
    if (!(fields >> tick >> verb)) {
      diags.error({line_no, 1, 0, 0}, "scenario", "expected 'TICK set|query ...'");
      continue;
    }
    if (!scenario.entries.empty() && tick < last_tick) {
      diags.error({line_no, 1, 0, 0}, "scenario", "ticks must be non-decreasing");
      continue;
    }

    ScenarioEntry entry;
    entry.tick = tick;
    if (verb == "set") {
      std::string assignment;
      if (!(fields >> assignment) || assignment.find('=') == std::string::npos) {
        diags.error({line_no, 1, 0, 0}, "scenario", "expected 'set name=value'");
        continue;
      }
      auto eq = assignment.find('=');
      entry.kind = ScenarioEntry::Kind::Set;
      entry.name = assignment.substr(0, eq);
      entry.value = assignment.substr(eq + 1);
    } else if (verb == "query") {
      entry.kind = ScenarioEntry::Kind::Query;
      if (!(fields >> entry.name)) {
        diags.error({line_no, 1, 0, 0}, "scenario", "expected 'query model'");
        continue;
      }
    } else {
      diags.error({line_no, 1, 0, 0}, "scenario", "unknown verb '" + verb + "'");
      continue;
    }
    last_tick = tick;
    scenario.entries.push_back(std::move(entry));
  }
  return scenario;
}

namespace {

Value scenario_value(const RuntimePipeline& pipeline, const std::string& literal) {
  const char* begin = literal.data();
  const char* end = begin + literal.size();
  double number = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, number);
  if (ec == std::errc() && ptr == end) return Value::of_number(number);

  for (const auto& pm : pipeline.models) {
    auto it = pm.typed->enum_literals.find(literal);
    if (it != pm.typed->enum_literals.end())
      return Value::of_enum(it->second.first, it->second.second);
  }
  throw Error("bad-value", "cannot interpret '" + literal + "' as a number or literal");
}

}  // namespace

BindingTimeline run_scenario(RuntimePipeline& pipeline, const Scenario& scenario) {
  BindingTimeline timeline;
  ContextStore store;
  // Fresh edge-detection state per replay keeps reruns byte-identical.
  for (Subscription& sub : pipeline.subscriptions) sub.state = false;
  ScenarioRunner runner(pipeline, store, timeline);

  for (const ScenarioEntry& entry : scenario.entries) {
    if (entry.kind == ScenarioEntry::Kind::Set) {
      auto fired = update_context(pipeline, store, entry.name,
                                  scenario_value(pipeline, entry.value));
      std::set<std::size_t> visiting;
      runner.handle_fired(fired, entry.tick, visiting);
    } else {
      int idx = pipeline.index_of(entry.name);
      if (idx < 0) throw Error("unknown-model", "no model named '" + entry.name + "'");
      runner.query(static_cast<std::size_t>(idx), entry.tick);
    }
  }
  return timeline;
}

std::string timeline_csv(const BindingTimeline& timeline) {
  std::ostringstream out;
  out << "tick,trigger,model,bindings,objective,status\n";
  for (const TimelineRow& row : timeline.rows)
    out << row.tick << ',' << row.trigger << ',' << row.model << ',' << row.bindings
        << ',' << row.objective << ',' << row.status << "\n";
  return out.str();
}

}  // namespace vml
