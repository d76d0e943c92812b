#ifndef VML_UNITS_HPP
#define VML_UNITS_HPP

#include <optional>
#include <string>
#include <string_view>

namespace vml {

enum class Dimension { Dimensionless, Length, Time, Speed };

/// A physical unit from the closed table supported by the language:
/// m, mm, cm, km, s, min, h, mm/s, m/s and the dimensionless unit.
/// `to_si` is the factor into the SI base of the dimension (m, s, m/s).
struct Unit {
  Dimension dimension = Dimension::Dimensionless;
  double to_si = 1.0;
  std::string name;  // empty for dimensionless

  bool is_dimensionless() const { return dimension == Dimension::Dimensionless; }
  bool operator==(const Unit& other) const {
    return dimension == other.dimension && name == other.name;
  }
};

Unit dimensionless_unit();
Unit si_unit(Dimension dim);
std::optional<Unit> lookup_unit(std::string_view name);
std::string_view dimension_name(Dimension dim);

/// Re-expresses `x` given in `from` in the unit `to`.
/// Throws Error("dimension-mismatch") when the dimensions differ.
double convert_unit(double x, const Unit& from, const Unit& to);

/// Derived dimension of a quotient, when the closed table supports it
/// (X/X, length/time, length/speed, X/dimensionless, dimensionless/X).
std::optional<Dimension> divide_dimensions(Dimension num, Dimension den);

/// Derived dimension of a product (dimensionless absorbs; speed*time=length).
std::optional<Dimension> multiply_dimensions(Dimension a, Dimension b);

}  // namespace vml

#endif
