#ifndef VML_ANALYZER_HPP
#define VML_ANALYZER_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ast.hpp"
#include "diagnostics.hpp"

namespace vml {

/// Resolved value space of a variable.
struct VType {
  ExprInfo::TypeKind kind = ExprInfo::TypeKind::Unknown;
  const NumericType* numeric = nullptr;  // null for inferred plain numbers
  const EnumType* enum_type = nullptr;
  Unit unit;
};

struct Symbol {
  VarKind kind = VarKind::Context;
  const VarDef* decl = nullptr;
  VType type;
  std::optional<Domain> domain;  // contexts and variation points
};

/// A model after name resolution and type/unit annotation. Expressions in
/// the underlying Model carry their inferred types and units; the tables
/// here give per-variable information. Immutable once analysis finishes.
class TypedModel {
 public:
  std::shared_ptr<Model> model;

  std::map<std::string, NumericType> numeric_types;
  std::map<std::string, EnumType> enum_types;
  std::map<std::string, BoolType> bool_types;
  std::map<std::string, Symbol> symbols;
  std::map<std::string, std::pair<const EnumType*, int>> enum_literals;

  std::vector<const VarDef*> contexts;    // declaration order
  std::vector<const VarDef*> varpoints;   // declaration order
  std::vector<const VarDef*> properties;  // declaration order
  std::vector<const VarDef*> general_order;  // topological order

  const Symbol* find_symbol(std::string_view name) const;
  const Domain* domain_of(std::string_view name) const;

  /// Evaluator wired to this model's declared domains.
  Evaluator evaluator() const;
};

std::shared_ptr<TypedModel> resolve_and_typecheck(std::shared_ptr<Model> model,
                                                  DiagnosticList& diags);

/// Reports a "unit-mismatch" diagnostic for every expression node whose
/// operand dimensions cannot be combined.
void check_units(const TypedModel& tm, DiagnosticList& diags);

struct FnNormalization {
  double min = 0.0;
  double max = 0.0;
  bool coarsened = false;  // grid was subsampled to honor the point cap
};

struct PropertyNormalization {
  std::vector<FnNormalization> priorities;   // scaled to [0, 1]
  std::vector<FnNormalization> definitions;  // scaled to [0, 100]
};

struct NormalizationInfo {
  std::map<std::string, PropertyNormalization> properties;
};

/// Extrema of every priority/definition function over the Cartesian grid
/// of its parameters, exhaustively up to `kNormalizationGridCap` joint
/// points and proportionally coarsened above (endpoints always included).
NormalizationInfo compute_normalization(const TypedModel& tm, DiagnosticList& diags);

inline constexpr std::size_t kNormalizationGridCap = 1000000;

/// Everything needed downstream of parsing, in one call.
struct AnalysisResult {
  std::shared_ptr<TypedModel> model;
  NormalizationInfo normalization;
  DiagnosticList diags;
};
AnalysisResult analyze(std::shared_ptr<Model> model);

/// Wiring between models: a producer's variation point feeds a consumer's
/// context variable.
struct LinkSpec {
  std::size_t producer_model = 0;
  std::string varpoint;
  std::size_t consumer_model = 0;
  std::string context;
};

struct AdaptationPipeline {
  std::vector<std::shared_ptr<const TypedModel>> models;
  std::vector<LinkSpec> links;
  std::vector<std::size_t> solve_order;  // topological, producers first
};

AdaptationPipeline link_models(std::vector<std::shared_ptr<const TypedModel>> models,
                               std::vector<LinkSpec> links, DiagnosticList& diags);

/// Resolves a standalone boolean expression over a model's contexts and
/// general vars (subscription predicates). Returns false when diagnostics
/// were added.
bool resolve_condition(const TypedModel& tm, Expr& e, DiagnosticList& diags);

}  // namespace vml

#endif
