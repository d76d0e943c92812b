#include "vml/vml.h"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "analyzer.hpp"
#include "minizinc.hpp"
#include "parser.hpp"
#include "printer.hpp"
#include "runtime.hpp"
#include "solver.hpp"

using namespace vml;

namespace {

thread_local std::string g_last_error;

void set_last_error(const std::string& message) { g_last_error = message; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> render_diags(const DiagnosticList& diags,
                                      const std::string& file) {
  std::vector<std::string> out;
  out.reserve(diags.items().size());
  for (const auto& d : diags.items()) out.push_back(render(d, file));
  return out;
}

}  // namespace

struct vml_model {
  std::string source_name;
  std::shared_ptr<TypedModel> typed;
  NormalizationInfo normalization;
  DiagnosticList diags;
  std::vector<std::string> rendered;
  bool analyzed_ok = false;
};

struct vml_problem {
  std::shared_ptr<const TypedModel> typed;
  ConstraintProblem problem;
};

struct vml_solution {
  Solution solution;
  std::vector<std::string> texts;  // display form per binding
};

struct vml_pipeline {
  RuntimePipeline pipeline;
  DiagnosticList diags;
  std::vector<std::string> rendered;
  bool ok = false;
};

extern "C" {

const char* vml_last_error(void) { return g_last_error.c_str(); }

void vml_string_free(char* s) { std::free(s); }

static vml_status load_model_text(const std::string& text, const std::string& name,
                                  vml_model** out) {
  auto handle = std::make_unique<vml_model>();
  handle->source_name = name;

  ParseResult parsed = parse_model(text, name);
  handle->diags.append(parsed.diags);
  if (!parsed.diags.has_errors()) {
    AnalysisResult analysis = analyze(std::make_shared<Model>(std::move(parsed.model)));
    handle->typed = analysis.model;
    handle->normalization = std::move(analysis.normalization);
    handle->diags.append(analysis.diags);
    handle->analyzed_ok = !handle->diags.has_errors();
  }
  handle->rendered = render_diags(handle->diags, name);

  bool had_errors = handle->diags.has_errors();
  *out = handle.release();
  return had_errors ? VML_STATUS_DIAGNOSTICS : VML_STATUS_OK;
}

vml_status vml_model_load_file(const char* path, vml_model** out) {
  if (!path || !out) {
    set_last_error("null argument");
    return VML_STATUS_USAGE;
  }
  *out = nullptr;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    set_last_error(std::string("cannot open '") + path + "'");
    return VML_STATUS_IO;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model_text(buf.str(), path, out);
}

vml_status vml_model_load_text(const char* text, const char* display_name,
                               vml_model** out) {
  if (!text || !out) {
    set_last_error("null argument");
    return VML_STATUS_USAGE;
  }
  *out = nullptr;
  return load_model_text(text, display_name ? display_name : "<text>", out);
}

void vml_model_free(vml_model* m) { delete m; }

size_t vml_model_diagnostic_count(const vml_model* m) {
  return m ? m->rendered.size() : 0;
}

const char* vml_model_diagnostic(const vml_model* m, size_t index) {
  if (!m || index >= m->rendered.size()) return nullptr;
  return m->rendered[index].c_str();
}

size_t vml_model_error_count(const vml_model* m) {
  return m ? m->diags.error_count() : 0;
}

char* vml_model_pretty_print(const vml_model* m) {
  if (!m || !m->typed) return nullptr;
  return dup_string(pretty_print(*m->typed->model));
}

vml_status vml_problem_build(const vml_model* m, int segments, vml_problem** out) {
  if (!m || !out || segments < 1) {
    set_last_error("null argument or segment count < 1");
    return VML_STATUS_USAGE;
  }
  *out = nullptr;
  if (!m->analyzed_ok) {
    set_last_error("model has diagnostics; fix them before compiling");
    return VML_STATUS_DIAGNOSTICS;
  }
  try {
    auto handle = std::make_unique<vml_problem>();
    handle->typed = m->typed;
    DiagnosticList diags;
    handle->problem = lower(m->typed, m->normalization, segments, diags);
    if (diags.has_errors()) {
      set_last_error(diags.render_all(m->source_name));
      return VML_STATUS_DIAGNOSTICS;
    }
    *out = handle.release();
    return VML_STATUS_OK;
  } catch (const Error& e) {
    set_last_error(e.what());
    return VML_STATUS_RUNTIME;
  }
}

void vml_problem_free(vml_problem* p) { delete p; }

vml_status vml_problem_minizinc(const vml_problem* p, char** text_out) {
  if (!p || !text_out) {
    set_last_error("null argument");
    return VML_STATUS_USAGE;
  }
  try {
    *text_out = dup_string(emit_minizinc(p->problem));
    return VML_STATUS_OK;
  } catch (const Error& e) {
    set_last_error(e.what());
    return VML_STATUS_RUNTIME;
  }
}

static vml_status parse_context_values(const vml_problem* p, const char* const* names,
                                       const char* const* values, size_t count,
                                       Env& out) {
  for (size_t i = 0; i < count; ++i) {
    if (!names[i] || !values[i]) {
      set_last_error("null context name/value");
      return VML_STATUS_USAGE;
    }
    std::string value = values[i];
    double number = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), number);
    if (ec == std::errc() && ptr == value.data() + value.size()) {
      out[names[i]] = Value::of_number(number);
      continue;
    }
    auto lit = p->typed->enum_literals.find(value);
    if (lit == p->typed->enum_literals.end()) {
      set_last_error("cannot interpret '" + value + "' for context '" + names[i] + "'");
      return VML_STATUS_USAGE;
    }
    out[names[i]] = Value::of_enum(lit->second.first, lit->second.second);
  }
  return VML_STATUS_OK;
}

vml_status vml_problem_solve(const vml_problem* p, const char* const* names,
                             const char* const* values, size_t count,
                             int exact_objective, vml_solution** out) {
  if (!p || !out || (count && (!names || !values))) {
    set_last_error("null argument");
    return VML_STATUS_USAGE;
  }
  *out = nullptr;
  Env raw;
  if (vml_status s = parse_context_values(p, names, values, count, raw);
      s != VML_STATUS_OK)
    return s;
  try {
    ContextSnapshot snapshot = make_snapshot(p->problem, raw);
    auto handle = std::make_unique<vml_solution>();
    handle->solution = solve(p->problem, snapshot,
                             exact_objective ? ObjectiveMode::Exact
                                             : ObjectiveMode::Linearized);
    for (std::size_t d = 0; d < handle->solution.bindings.size(); ++d)
      handle->texts.push_back(p->problem.decisions[d].domain.format(
          handle->solution.bindings[d].second.as_number()));
    bool infeasible = handle->solution.status == Solution::Status::Infeasible;
    *out = handle.release();
    return infeasible ? VML_STATUS_INFEASIBLE : VML_STATUS_OK;
  } catch (const Error& e) {
    set_last_error(e.what());
    return e.code() == "missing-context" ? VML_STATUS_USAGE : VML_STATUS_RUNTIME;
  }
}

void vml_solution_free(vml_solution* s) { delete s; }

int vml_solution_is_optimal(const vml_solution* s) {
  return s && s->solution.status == Solution::Status::Optimal ? 1 : 0;
}

double vml_solution_objective(const vml_solution* s) {
  return s ? s->solution.objective : 0.0;
}

size_t vml_solution_binding_count(const vml_solution* s) {
  return s ? s->solution.bindings.size() : 0;
}

const char* vml_solution_binding_name(const vml_solution* s, size_t index) {
  if (!s || index >= s->solution.bindings.size()) return nullptr;
  return s->solution.bindings[index].first.c_str();
}

double vml_solution_binding_value(const vml_solution* s, size_t index) {
  if (!s || index >= s->solution.bindings.size()) return 0.0;
  return s->solution.bindings[index].second.as_number();
}

const char* vml_solution_binding_text(const vml_solution* s, size_t index) {
  if (!s || index >= s->texts.size()) return nullptr;
  return s->texts[index].c_str();
}

size_t vml_solution_triggered_count(const vml_solution* s) {
  return s ? s->solution.triggered.size() : 0;
}

const char* vml_solution_triggered_name(const vml_solution* s, size_t index) {
  if (!s || index >= s->solution.triggered.size()) return nullptr;
  return s->solution.triggered[index].c_str();
}

vml_status vml_problem_sweep_csv(const vml_problem* p, const char* vary, double from,
                                 double to, double step, const char* const* names,
                                 const char* const* values, size_t count,
                                 int exact_objective, char** csv_out) {
  if (!p || !vary || !csv_out || (count && (!names || !values))) {
    set_last_error("null argument");
    return VML_STATUS_USAGE;
  }
  if (!(from < to) || step <= 0.0) {
    set_last_error("sweep needs from < to and step > 0");
    return VML_STATUS_USAGE;
  }
  Env raw;
  if (vml_status s = parse_context_values(p, names, values, count, raw);
      s != VML_STATUS_OK)
    return s;
  try {
    Domain grid = Domain::numeric(from, to, step);
    auto rows = sweep(p->problem, vary, grid, raw,
                      exact_objective ? ObjectiveMode::Exact : ObjectiveMode::Linearized);
    *csv_out = dup_string(sweep_csv(p->problem, grid, rows));
    return VML_STATUS_OK;
  } catch (const Error& e) {
    set_last_error(e.what());
    return e.code() == "missing-context" ? VML_STATUS_USAGE : VML_STATUS_RUNTIME;
  }
}

vml_status vml_pipeline_load(const char* manifest_path, vml_pipeline** out) {
  if (!manifest_path || !out) {
    set_last_error("null argument");
    return VML_STATUS_USAGE;
  }
  *out = nullptr;
  auto handle = std::make_unique<vml_pipeline>();
  handle->pipeline = load_pipeline(manifest_path, handle->diags);
  handle->rendered = render_diags(handle->diags, manifest_path);
  handle->ok = !handle->diags.has_errors();
  if (handle->diags.count("io")) {
    set_last_error(handle->rendered.empty() ? "io error" : handle->rendered.front());
    return VML_STATUS_IO;
  }
  bool ok = handle->ok;
  *out = handle.release();
  return ok ? VML_STATUS_OK : VML_STATUS_DIAGNOSTICS;
}

void vml_pipeline_free(vml_pipeline* p) { delete p; }

size_t vml_pipeline_diagnostic_count(const vml_pipeline* p) {
  return p ? p->rendered.size() : 0;
}

const char* vml_pipeline_diagnostic(const vml_pipeline* p, size_t index) {
  if (!p || index >= p->rendered.size()) return nullptr;
  return p->rendered[index].c_str();
}

vml_status vml_pipeline_run_script(vml_pipeline* p, const char* script_path,
                                   char** csv_out, int* any_infeasible_out) {
  if (!p || !script_path || !csv_out) {
    set_last_error("null argument");
    return VML_STATUS_USAGE;
  }
  if (!p->ok) {
    set_last_error("pipeline has diagnostics; fix them before running");
    return VML_STATUS_DIAGNOSTICS;
  }
  std::ifstream in(script_path, std::ios::binary);
  if (!in) {
    set_last_error(std::string("cannot open '") + script_path + "'");
    return VML_STATUS_IO;
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  DiagnosticList script_diags;
  Scenario scenario = parse_scenario(buf.str(), script_diags);
  if (script_diags.has_errors()) {
    set_last_error(script_diags.render_all(script_path));
    return VML_STATUS_DIAGNOSTICS;
  }
  try {
    BindingTimeline timeline = run_scenario(p->pipeline, scenario);
    *csv_out = dup_string(timeline_csv(timeline));
    if (any_infeasible_out) *any_infeasible_out = timeline.any_infeasible ? 1 : 0;
    return VML_STATUS_OK;
  } catch (const Error& e) {
    set_last_error(e.what());
    return VML_STATUS_RUNTIME;
  }
}

}  // extern "C"
