#include "diagnostics.hpp"

#include <sstream>

namespace vml {

std::string render(const Diagnostic& d, std::string_view file) {
  std::ostringstream out;
  out << file << ':' << d.span.line << ':' << d.span.column << ": "
      << (d.severity == Severity::Error ? "error" : "warning") << '[' << d.code
      << "]: " << d.message;
  return out.str();
}

void DiagnosticList::error(Span span, std::string code, std::string message) {
  items_.push_back({Severity::Error, span, std::move(code), std::move(message)});
}

void DiagnosticList::warning(Span span, std::string code, std::string message) {
  items_.push_back({Severity::Warning, span, std::move(code), std::move(message)});
}

bool DiagnosticList::has_errors() const { return error_count() > 0; }

std::size_t DiagnosticList::error_count() const {
  std::size_t n = 0;
  for (const auto& d : items_)
    if (d.severity == Severity::Error) ++n;
  return n;
}

std::size_t DiagnosticList::count(std::string_view code) const {
  std::size_t n = 0;
  for (const auto& d : items_)
    if (d.code == code) ++n;
  return n;
}

void DiagnosticList::append(const DiagnosticList& other) {
  items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

std::string DiagnosticList::render_all(std::string_view file) const {
  std::string out;
  for (const auto& d : items_) {
    out += render(d, file);
    out += '\n';
  }
  return out;
}

}  // namespace vml
