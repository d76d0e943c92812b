#include "types.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "diagnostics.hpp"

namespace vml {

const EnumType::Literal* EnumType::find(std::string_view literal_name) const {
  for (const auto& lit : literals)
    if (lit.name == literal_name) return &lit;
  return nullptr;
}

const EnumType::Literal* EnumType::by_code(int code) const {
  for (const auto& lit : literals)
    if (lit.code == code) return &lit;
  return nullptr;
}

namespace {

// Decimal digits of a step like 0.1 or 0.25; capped at 9 for odd steps.
int decimals_for_step(double step) {
  for (int d = 0; d <= 9; ++d) {
    double scaled = step * std::pow(10.0, d);
    if (std::fabs(scaled - std::round(scaled)) < 1e-6 * std::max(1.0, scaled))
      return d;
  }
  return 9;
}

}  // namespace

Domain Domain::numeric(double lo, double hi, double precision) {
  Domain d;
  d.kind_ = Kind::Numeric;
  d.lo_ = lo;
  d.hi_ = hi;
  d.precision_ = precision;
  double steps = (hi - lo) / precision;
  // Guard against 500/0.1 = 4999.999... flooring one short of the grid end.
  d.count_ = static_cast<std::size_t>(std::floor(steps + std::max(1e-9, steps * 4e-12))) + 1;
  d.decimals_ = decimals_for_step(precision);
  return d;
}

Domain Domain::enumeration(const EnumType* type) {
  Domain d;
  d.kind_ = Kind::Enum;
  d.enum_type_ = type;
  for (const auto& lit : type->literals) d.codes_.push_back(lit.code);
  d.count_ = d.codes_.size();
  if (!d.codes_.empty()) {
    d.lo_ = d.codes_.front();
    d.hi_ = d.codes_.front();
    for (int c : d.codes_) {
      d.lo_ = std::min(d.lo_, static_cast<double>(c));
      d.hi_ = std::max(d.hi_, static_cast<double>(c));
    }
  }
  return d;
}

Domain Domain::boolean() {
  Domain d;
  d.kind_ = Kind::Boolean;
  d.lo_ = 0.0;
  d.hi_ = 1.0;
  d.count_ = 2;
  return d;
}

std::size_t Domain::size() const { return count_; }

double Domain::value(std::size_t i) const {
  switch (kind_) {
    case Kind::Numeric: {
      double v = lo_ + static_cast<double>(i) * precision_;
      if (i + 1 == count_ && std::fabs(v - hi_) <= precision_ / 2) return hi_;
      return v;
    }
    case Kind::Enum:
      return codes_[i];
    case Kind::Boolean:
      return i ? 1.0 : 0.0;
  }
  return 0.0;
}

double Domain::snap(double x) const {
  switch (kind_) {
    case Kind::Numeric: {
      if (x <= lo_) return lo_;
      if (x >= hi_) return value(count_ - 1);
      auto idx = static_cast<std::size_t>(std::llround((x - lo_) / precision_));
      if (idx >= count_) idx = count_ - 1;
      return value(idx);
    }
    case Kind::Enum: {
      // nearest declared code
      double best = codes_.empty() ? 0.0 : codes_[0];
      for (int c : codes_)
        if (std::fabs(c - x) < std::fabs(best - x)) best = c;
      return best;
    }
    case Kind::Boolean:
      return x >= 0.5 ? 1.0 : 0.0;
  }
  return x;
}

std::size_t Domain::index_of(double x) const {
  switch (kind_) {
    case Kind::Numeric: {
      if (x <= lo_) return 0;
      auto idx = static_cast<std::size_t>(std::llround((x - lo_) / precision_));
      return idx >= count_ ? count_ - 1 : idx;
    }
    case Kind::Enum: {
      std::size_t best = 0;
      for (std::size_t i = 0; i < codes_.size(); ++i)
        if (std::fabs(codes_[i] - x) < std::fabs(codes_[best] - x)) best = i;
      return best;
    }
    case Kind::Boolean:
      return x >= 0.5 ? 1 : 0;
  }
  return 0;
}

bool Domain::contains(double x) const {
  if (kind_ == Kind::Enum) {
    for (int c : codes_)
      if (c == std::llround(x)) return true;
    return false;
  }
  if (x < lo_ - precision_ / 2 || x > hi_ + precision_ / 2) return false;
  return std::fabs(snap(x) - x) <= precision_ / 2;
}

std::string Domain::format(double v) const {
  switch (kind_) {
    case Kind::Numeric: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.*f", decimals_, v);
      return buf;
    }
    case Kind::Enum: {
      if (enum_type_)
        if (const auto* lit = enum_type_->by_code(static_cast<int>(std::llround(v))))
          return lit->name;
      return format_double(v);
    }
    case Kind::Boolean:
      return v >= 0.5 ? "true" : "false";
  }
  return format_double(v);
}

bool Domain::operator==(const Domain& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ == Kind::Enum) return codes_ == other.codes_;
  return lo_ == other.lo_ && hi_ == other.hi_ && precision_ == other.precision_;
}

Domain discretize(const NumericType& type) {
  return Domain::numeric(type.lo, type.hi, type.precision);
}

double Value::as_number() const {
  switch (kind) {
    case Kind::Number: return number;
    case Kind::Bool: return boolean ? 1.0 : 0.0;
    case Kind::Enum: return code;
  }
  return 0.0;
}

bool Value::as_bool() const {
  if (kind != Kind::Bool)
    throw Error("type-mismatch", "boolean value expected");
  return boolean;
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace vml
