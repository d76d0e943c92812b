/* Public C interface of the VML engine.
 *
 * The engine parses variability models, type-checks and normalizes them,
 * lowers them to a finite-domain constraint optimization problem, solves
 * that problem for concrete contexts, emits MiniZinc text, and replays
 * event-driven adaptation scenarios over linked models.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return vml_status; on VML_STATUS_DIAGNOSTICS the handle (when
 * one is returned) carries human-readable diagnostics. Other failures set
 * a thread-local message retrievable with vml_last_error().
 */
#ifndef VML_H
#define VML_H

#include <stddef.h>

#ifdef _WIN32
#define VML_API __declspec(dllexport)
#else
#define VML_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vml_status {
  VML_STATUS_OK = 0,
  VML_STATUS_DIAGNOSTICS = 1, /* parse/analysis errors; inspect diagnostics */
  VML_STATUS_INFEASIBLE = 2,  /* constraints conflict under this context */
  VML_STATUS_USAGE = 3,       /* invalid argument (null handle, bad name) */
  VML_STATUS_IO = 4,          /* file not readable/writable */
  VML_STATUS_RUNTIME = 5,     /* evaluation fault (see vml_last_error) */
} vml_status;

typedef struct vml_model vml_model;
typedef struct vml_problem vml_problem;
typedef struct vml_solution vml_solution;
typedef struct vml_pipeline vml_pipeline;

/* Thread-local message of the last failing call in this thread. */
VML_API const char *vml_last_error(void);

/* Strings returned as char* are owned by the caller. */
VML_API void vml_string_free(char *s);

/* -- models ------------------------------------------------------------- */

/* Parse and analyze a model. *out is set even when the model has
 * diagnostics (so they can be printed); it is NULL only on IO/usage
 * failures. */
VML_API vml_status vml_model_load_file(const char *path, vml_model **out);
VML_API vml_status vml_model_load_text(const char *text, const char *display_name,
                                       vml_model **out);
VML_API void vml_model_free(vml_model *m);

VML_API size_t vml_model_diagnostic_count(const vml_model *m);
/* Rendered as file:line:col: severity[code]: message. Valid until the
 * model is freed. */
VML_API const char *vml_model_diagnostic(const vml_model *m, size_t index);
VML_API size_t vml_model_error_count(const vml_model *m);

/* Canonical source text; parses back to the same model. */
VML_API char *vml_model_pretty_print(const vml_model *m);

/* -- compilation -------------------------------------------------------- */

/* Lowers the model to a constraint problem. `segments` is the piece count
 * for chord linearization of nonlinear definitions (>= 1; 5 matches the
 * usual emission). */
VML_API vml_status vml_problem_build(const vml_model *m, int segments,
                                     vml_problem **out);
VML_API void vml_problem_free(vml_problem *p);

/* MiniZinc text for the lowered problem. */
VML_API vml_status vml_problem_minizinc(const vml_problem *p, char **text_out);

/* -- solving ------------------------------------------------------------ */

/* Context values are strings: numeric literals or enum literal names.
 * `exact_objective` != 0 evaluates nonlinear definitions directly instead
 * of their linearized surrogate. Returns VML_STATUS_INFEASIBLE (with a
 * solution object reporting the triggered rules) when constraints
 * conflict. */
VML_API vml_status vml_problem_solve(const vml_problem *p, const char *const *names,
                                     const char *const *values, size_t count,
                                     int exact_objective, vml_solution **out);

VML_API void vml_solution_free(vml_solution *s);
VML_API int vml_solution_is_optimal(const vml_solution *s);
VML_API double vml_solution_objective(const vml_solution *s);
VML_API size_t vml_solution_binding_count(const vml_solution *s);
VML_API const char *vml_solution_binding_name(const vml_solution *s, size_t index);
VML_API double vml_solution_binding_value(const vml_solution *s, size_t index);
/* Display form: enum literal name, or the number at grid precision. */
VML_API const char *vml_solution_binding_text(const vml_solution *s, size_t index);

/* Rules/clauses whose guards held under the solved context; the set to
 * inspect when the status is infeasible. */
VML_API size_t vml_solution_triggered_count(const vml_solution *s);
VML_API const char *vml_solution_triggered_name(const vml_solution *s, size_t index);

/* One solve per grid point of `vary` in [from, to] stepped by `step`; the
 * remaining contexts come from names/values. Returns CSV with header
 * context_value,<varpoint...>,objective,status. */
VML_API vml_status vml_problem_sweep_csv(const vml_problem *p, const char *vary,
                                         double from, double to, double step,
                                         const char *const *names,
                                         const char *const *values, size_t count,
                                         int exact_objective, char **csv_out);

/* -- pipelines and scenarios -------------------------------------------- */

/* Loads a manifest listing models, links (producer varpoint -> consumer
 * context), and event subscriptions. As with models, *out carries
 * diagnostics when the status is VML_STATUS_DIAGNOSTICS. */
VML_API vml_status vml_pipeline_load(const char *manifest_path, vml_pipeline **out);
VML_API void vml_pipeline_free(vml_pipeline *p);
VML_API size_t vml_pipeline_diagnostic_count(const vml_pipeline *p);
VML_API const char *vml_pipeline_diagnostic(const vml_pipeline *p, size_t index);

/* Replays a scenario script (lines: `TICK set name=value` or
 * `TICK query model`) and returns the binding timeline as CSV with header
 * tick,trigger,model,bindings,objective,status. `any_infeasible_out` (may
 * be NULL) is set to 1 when any solver invocation was infeasible. */
VML_API vml_status vml_pipeline_run_script(vml_pipeline *p, const char *script_path,
                                           char **csv_out, int *any_infeasible_out);

#ifdef __cplusplus
}
#endif

#endif /* VML_H */
