// Command-line front end; links the public C API only.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vml/vml.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitUsage = 3;

void print_model_diagnostics(const vml_model* model) {
  for (size_t i = 0; i < vml_model_diagnostic_count(model); ++i)
    std::cerr << vml_model_diagnostic(model, i) << "\n";
}

int fail(vml_status status) {
  std::cerr << "vml: " << vml_last_error() << "\n";
  switch (status) {
    case VML_STATUS_USAGE: return kExitUsage;
    case VML_STATUS_INFEASIBLE: return kExitInfeasible;
    default: return kExitDiagnostics;
  }
}

struct ContextArgs {
  std::vector<std::string> names;
  std::vector<std::string> values;
  std::vector<const char*> name_ptrs;
  std::vector<const char*> value_ptrs;

  bool add_all(const std::vector<std::string>& assignments) {
    for (const auto& a : assignments) {
      auto eq = a.find('=');
      if (eq == std::string::npos) {
        std::cerr << "vml: --ctx expects name=value, got '" << a << "'\n";
        return false;
      }
      names.push_back(a.substr(0, eq));
      values.push_back(a.substr(eq + 1));
    }
    for (const auto& n : names) name_ptrs.push_back(n.c_str());
    for (const auto& v : values) value_ptrs.push_back(v.c_str());
    return true;
  }
};

bool write_output(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "vml: cannot write '" << path << "'\n";
    return false;
  }
  out << text;
  return true;
}

int run_check(const std::vector<std::string>& files) {
  size_t errors = 0;
  for (const auto& file : files) {
    vml_model* model = nullptr;
    vml_status status = vml_model_load_file(file.c_str(), &model);
    if (!model) return fail(status);
    print_model_diagnostics(model);
    errors += vml_model_error_count(model);
    vml_model_free(model);
  }
  return errors ? kExitDiagnostics : kExitOk;
}

int run_compile(const std::string& file, const std::string& output, int segments) {
  vml_model* model = nullptr;
  vml_status status = vml_model_load_file(file.c_str(), &model);
  if (!model) return fail(status);
  print_model_diagnostics(model);
  if (status != VML_STATUS_OK) {
    vml_model_free(model);
    return kExitDiagnostics;
  }

  vml_problem* problem = nullptr;
  status = vml_problem_build(model, segments, &problem);
  vml_model_free(model);
  if (status != VML_STATUS_OK) return fail(status);

  char* text = nullptr;
  status = vml_problem_minizinc(problem, &text);
  vml_problem_free(problem);
  if (status != VML_STATUS_OK) return fail(status);

  bool ok = write_output(output, text);
  vml_string_free(text);
  return ok ? kExitOk : kExitDiagnostics;
}

int run_solve(const std::string& file, const std::vector<std::string>& ctx,
              int segments, bool exact) {
  ContextArgs args;
  if (!args.add_all(ctx)) return kExitUsage;

  vml_model* model = nullptr;
  vml_status status = vml_model_load_file(file.c_str(), &model);
  if (!model) return fail(status);
  print_model_diagnostics(model);
  if (status != VML_STATUS_OK) {
    vml_model_free(model);
    return kExitDiagnostics;
  }

  vml_problem* problem = nullptr;
  status = vml_problem_build(model, segments, &problem);
  vml_model_free(model);
  if (status != VML_STATUS_OK) return fail(status);

  vml_solution* solution = nullptr;
  status = vml_problem_solve(problem, args.name_ptrs.data(), args.value_ptrs.data(),
                             args.name_ptrs.size(), exact ? 1 : 0, &solution);
  vml_problem_free(problem);
  if (status != VML_STATUS_OK && status != VML_STATUS_INFEASIBLE) return fail(status);

  if (vml_solution_is_optimal(solution)) {
    for (size_t i = 0; i < vml_solution_binding_count(solution); ++i)
      std::cout << vml_solution_binding_name(solution, i) << " = "
                << vml_solution_binding_text(solution, i) << "\n";
    std::printf("objective = %.17g\n", vml_solution_objective(solution));
    std::cout << "status = optimal\n";
    vml_solution_free(solution);
    return kExitOk;
  }

  std::cout << "status = infeasible\n";
  std::cerr << "vml: constraints conflict; triggered:";
  for (size_t i = 0; i < vml_solution_triggered_count(solution); ++i)
    std::cerr << ' ' << vml_solution_triggered_name(solution, i);
  std::cerr << "\n";
  vml_solution_free(solution);
  return kExitInfeasible;
}

int run_sweep(const std::string& file, const std::string& vary, double from, double to,
              double step, const std::vector<std::string>& ctx,
              const std::string& output, int segments, bool exact) {
  ContextArgs args;
  if (!args.add_all(ctx)) return kExitUsage;

  vml_model* model = nullptr;
  vml_status status = vml_model_load_file(file.c_str(), &model);
  if (!model) return fail(status);
  print_model_diagnostics(model);
  if (status != VML_STATUS_OK) {
    vml_model_free(model);
    return kExitDiagnostics;
  }

  vml_problem* problem = nullptr;
  status = vml_problem_build(model, segments, &problem);
  vml_model_free(model);
  if (status != VML_STATUS_OK) return fail(status);

  char* csv = nullptr;
  status = vml_problem_sweep_csv(problem, vary.c_str(), from, to, step,
                                 args.name_ptrs.data(), args.value_ptrs.data(),
                                 args.name_ptrs.size(), exact ? 1 : 0, &csv);
  vml_problem_free(problem);
  if (status != VML_STATUS_OK) return fail(status);

  bool ok = write_output(output, csv);
  vml_string_free(csv);
  return ok ? kExitOk : kExitDiagnostics;
}

int run_simulate(const std::string& manifest, const std::string& script,
                 const std::string& output) {
  vml_pipeline* pipeline = nullptr;
  vml_status status = vml_pipeline_load(manifest.c_str(), &pipeline);
  if (!pipeline) return fail(status);
  for (size_t i = 0; i < vml_pipeline_diagnostic_count(pipeline); ++i)
    std::cerr << vml_pipeline_diagnostic(pipeline, i) << "\n";
  if (status != VML_STATUS_OK) {
    vml_pipeline_free(pipeline);
    return kExitDiagnostics;
  }

  char* csv = nullptr;
  int any_infeasible = 0;
  status = vml_pipeline_run_script(pipeline, script.c_str(), &csv, &any_infeasible);
  vml_pipeline_free(pipeline);
  if (status != VML_STATUS_OK) return fail(status);

  bool ok = write_output(output, csv);
  vml_string_free(csv);
  if (!ok) return kExitDiagnostics;
  return any_infeasible ? kExitInfeasible : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VML toolchain: check, compile, solve, sweep, and simulate "
               "variability models"};
  app.require_subcommand(1);

  auto* check = app.add_subcommand("check", "Parse and analyze models");
  std::vector<std::string> check_files;
  check->add_option("files", check_files, "model files")->required()->expected(-1);

  auto* compile = app.add_subcommand("compile", "Emit a MiniZinc model");
  std::string compile_file, compile_out;
  int compile_segments = 5;
  compile->add_option("file", compile_file, "model file")->required();
  compile->add_option("-o,--output", compile_out, "output file (default stdout)");
  compile->add_option("--segments", compile_segments,
                      "chord segments for nonlinear definitions")
      ->check(CLI::PositiveNumber);

  auto* solve = app.add_subcommand("solve", "Bind variation points for a context");
  std::string solve_file;
  std::vector<std::string> solve_ctx;
  int solve_segments = 5;
  bool solve_exact = false;
  solve->add_option("file", solve_file, "model file")->required();
  solve->add_option("--ctx", solve_ctx, "context value name=value")->required();
  solve->add_option("--segments", solve_segments, "chord segments")
      ->check(CLI::PositiveNumber);
  solve->add_flag("--exact-objective", solve_exact,
                  "evaluate nonlinear definitions exactly instead of the "
                  "linearized surrogate");

  auto* sweep = app.add_subcommand("sweep", "Solve over a grid of one context");
  std::string sweep_file, sweep_vary, sweep_out;
  double sweep_from = 0.0, sweep_to = 0.0, sweep_step = 1.0;
  std::vector<std::string> sweep_ctx;
  int sweep_segments = 5;
  bool sweep_exact = false;
  sweep->add_option("file", sweep_file, "model file")->required();
  sweep->add_option("--vary", sweep_vary, "context to sweep")->required();
  sweep->add_option("--from", sweep_from, "start value")->required();
  sweep->add_option("--to", sweep_to, "end value")->required();
  sweep->add_option("--step", sweep_step, "grid step")->required();
  sweep->add_option("--ctx", sweep_ctx, "fixed context name=value");
  sweep->add_option("-o,--output", sweep_out, "output CSV (default stdout)");
  sweep->add_option("--segments", sweep_segments, "chord segments")
      ->check(CLI::PositiveNumber);
  sweep->add_flag("--exact-objective", sweep_exact, "exact nonlinear objective");

  auto* simulate = app.add_subcommand("simulate", "Replay a scenario script");
  std::string sim_manifest, sim_script, sim_out;
  simulate->add_option("manifest", sim_manifest, "pipeline manifest")->required();
  simulate->add_option("script", sim_script, "scenario script")->required();
  simulate->add_option("-o,--output", sim_out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (check->parsed()) return run_check(check_files);
  if (compile->parsed()) return run_compile(compile_file, compile_out, compile_segments);
  if (solve->parsed())
    return run_solve(solve_file, solve_ctx, solve_segments, solve_exact);
  if (sweep->parsed())
    return run_sweep(sweep_file, sweep_vary, sweep_from, sweep_to, sweep_step,
                     sweep_ctx, sweep_out, sweep_segments, sweep_exact);
  if (simulate->parsed()) return run_simulate(sim_manifest, sim_script, sim_out);
  return kExitUsage;
}
