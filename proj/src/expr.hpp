#ifndef VML_EXPR_HPP
#define VML_EXPR_HPP

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "types.hpp"
#include "units.hpp"

namespace vml {

enum class UnaryOp { Neg, Not };
enum class BinaryOp { Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

/// Builtin calls. min/max with one argument are range extremums: the
/// extremum of the expression over the referenced variable's domain.
enum class Builtin { Exp, Abs, Min, Max };

bool is_comparison(BinaryOp op);
std::string_view binary_op_text(BinaryOp op);

enum class SymbolKind { Unresolved, Context, Varpoint, GeneralVar, EnumLiteral };

/// Analyzer annotations; defaulted so plain dimensionless trees evaluate
/// without a prior analysis pass.
struct ExprInfo {
  enum class TypeKind { Unknown, Number, Boolean, Enum };
  TypeKind type = TypeKind::Unknown;
  Unit unit;
  const EnumType* enum_type = nullptr;
  SymbolKind symbol = SymbolKind::Unresolved;
  int literal_code = 0;     // when symbol == EnumLiteral
  bool unit_conflict = false;  // flagged during typecheck, reported by check_units
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  enum class Kind { Number, VarRef, Unary, Binary, Call };

  Kind kind = Kind::Number;
  Span span;

  double number = 0.0;
  bool number_is_int = false;  // lexical form, kept for faithful printing
  std::string name;            // VarRef
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  Builtin builtin = Builtin::Exp;
  std::vector<ExprPtr> args;   // operands / call arguments

  ExprInfo info;

  static ExprPtr make_number(double v, bool is_int, Span span = {});
  static ExprPtr make_var(std::string name, Span span = {});
  static ExprPtr make_unary(UnaryOp op, ExprPtr operand, Span span = {});
  static ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, Span span = {});
  static ExprPtr make_call(Builtin fn, std::vector<ExprPtr> call_args, Span span = {});

  ExprPtr clone() const;
};

/// Names of every VarRef in the tree, in no particular order. Includes
/// enum-literal references until analysis classifies them.
void collect_var_refs(const Expr& e, std::set<std::string>& out);

/// As collect_var_refs, but skips references resolved to enum literals.
void collect_variable_refs(const Expr& e, std::set<std::string>& out);

/// Structural equality ignoring spans and annotations.
bool structurally_equal(const Expr& a, const Expr& b);

using Env = std::map<std::string, Value, std::less<>>;

/// Pure expression evaluation. Unit handling follows the annotated units:
/// operands of one dimension in different units are homogenized to SI,
/// dimensionless operands adopt the other side's magnitude scale, and
/// division/multiplication derive their dimension from the closed table.
class Evaluator {
 public:
  using DomainLookup = std::function<const Domain*(std::string_view)>;

  Evaluator() = default;
  explicit Evaluator(DomainLookup lookup) : lookup_(std::move(lookup)) {}

  /// Throws Error on unbound variables, division by zero, or unit faults.
  Value eval(const Expr& e, const Env& env) const;

 private:
  DomainLookup lookup_;
};

Value eval_expr(const Expr& e, const Env& env, const Evaluator& evaluator);

}  // namespace vml

#endif
