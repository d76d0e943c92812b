#include "units.hpp"

#include <array>

#include "diagnostics.hpp"

namespace vml {

namespace {

struct UnitRow {
  std::string_view name;
  Dimension dim;
  double to_si;
};

constexpr std::array<UnitRow, 9> kUnits = {{
    {"m", Dimension::Length, 1.0},
    {"mm", Dimension::Length, 0.001},
    {"cm", Dimension::Length, 0.01},
    {"km", Dimension::Length, 1000.0},
    {"s", Dimension::Time, 1.0},
    {"min", Dimension::Time, 60.0},
    {"h", Dimension::Time, 3600.0},
    {"m/s", Dimension::Speed, 1.0},
    {"mm/s", Dimension::Speed, 0.001},
}};

}  // namespace

Unit dimensionless_unit() { return Unit{}; }

Unit si_unit(Dimension dim) {
  switch (dim) {
    case Dimension::Length: return {Dimension::Length, 1.0, "m"};
    case Dimension::Time: return {Dimension::Time, 1.0, "s"};
    case Dimension::Speed: return {Dimension::Speed, 1.0, "m/s"};
    case Dimension::Dimensionless: break;
  }
  return Unit{};
}

std::optional<Unit> lookup_unit(std::string_view name) {
  if (name.empty()) return dimensionless_unit();
  for (const auto& row : kUnits)
    if (row.name == name) return Unit{row.dim, row.to_si, std::string(row.name)};
  return std::nullopt;
}

std::string_view dimension_name(Dimension dim) {
  switch (dim) {
    case Dimension::Dimensionless: return "dimensionless";
    case Dimension::Length: return "length";
    case Dimension::Time: return "time";
    case Dimension::Speed: return "speed";
  }
  return "?";
}

double convert_unit(double x, const Unit& from, const Unit& to) {
  if (from.dimension != to.dimension)
    throw Error("dimension-mismatch",
                "cannot convert " + std::string(dimension_name(from.dimension)) +
                    " to " + std::string(dimension_name(to.dimension)));
  return x * (from.to_si / to.to_si);
}

std::optional<Dimension> divide_dimensions(Dimension num, Dimension den) {
  if (den == Dimension::Dimensionless) return num;
  if (num == den) return Dimension::Dimensionless;
  if (num == Dimension::Length && den == Dimension::Speed) return Dimension::Time;
  if (num == Dimension::Length && den == Dimension::Time) return Dimension::Speed;
  return std::nullopt;
}

std::optional<Dimension> multiply_dimensions(Dimension a, Dimension b) {
  if (a == Dimension::Dimensionless) return b;
  if (b == Dimension::Dimensionless) return a;
  if ((a == Dimension::Speed && b == Dimension::Time) ||
      (a == Dimension::Time && b == Dimension::Speed))
    return Dimension::Length;
  return std::nullopt;
}

}  // namespace vml
