#ifndef VML_TYPES_HPP
#define VML_TYPES_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "units.hpp"

namespace vml {

/// Declared interval of discrete values: [lo, hi] stepped by `precision`.
struct NumericType {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  double precision = 1.0;
  std::optional<Unit> unit;

  bool valid() const {
    return lo < hi && precision > 0.0 && precision <= hi - lo;
  }
};

struct EnumType {
  struct Literal {
    std::string name;
    int code = 0;
    bool explicit_code = false;  // printed back as NAME(code) when true
  };

  std::string name;
  std::vector<Literal> literals;

  const Literal* find(std::string_view literal_name) const;
  const Literal* by_code(int code) const;
};

struct BoolType {
  std::string name;
};

/// Finite value grid of a variable: the discretized numeric interval,
/// an enum's code list, or {false, true}.
class Domain {
 public:
  enum class Kind { Numeric, Enum, Boolean };

  static Domain numeric(double lo, double hi, double precision);
  static Domain enumeration(const EnumType* type);
  static Domain boolean();

  Kind kind() const { return kind_; }
  std::size_t size() const;
  /// i-th grid value (enum code / 0,1 for booleans). The last numeric
  /// point is pinned to `hi` when the step lands within half a precision.
  double value(std::size_t i) const;
  /// Clamp into [lo, hi] and snap to the nearest grid point.
  double snap(double x) const;
  bool contains(double x) const;
  /// Grid index of the nearest grid point.
  std::size_t index_of(double x) const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double precision() const { return precision_; }
  const EnumType* enum_type() const { return enum_type_; }

  /// Decimal digits needed to display grid values exactly.
  int display_decimals() const { return decimals_; }
  std::string format(double value) const;

  bool operator==(const Domain& other) const;

 private:
  Kind kind_ = Kind::Numeric;
  double lo_ = 0.0, hi_ = 0.0, precision_ = 1.0;
  std::size_t count_ = 0;
  int decimals_ = 0;
  const EnumType* enum_type_ = nullptr;
  std::vector<int> codes_;
};

Domain discretize(const NumericType& type);

/// A runtime value: number, boolean, or enum literal (type + code).
struct Value {
  enum class Kind { Number, Bool, Enum };

  Kind kind = Kind::Number;
  double number = 0.0;
  bool boolean = false;
  const EnumType* enum_type = nullptr;
  int code = 0;

  static Value of_number(double x) { return {Kind::Number, x, false, nullptr, 0}; }
  static Value of_bool(bool b) { return {Kind::Bool, 0.0, b, nullptr, 0}; }
  static Value of_enum(const EnumType* t, int c) { return {Kind::Enum, 0.0, false, t, c}; }

  bool is_number() const { return kind == Kind::Number; }
  bool is_bool() const { return kind == Kind::Bool; }
  bool is_enum() const { return kind == Kind::Enum; }

  /// Numeric magnitude; enums coerce to their integer code.
  double as_number() const;
  bool as_bool() const;
};

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

}  // namespace vml

#endif
