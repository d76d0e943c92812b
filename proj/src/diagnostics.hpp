#ifndef VML_DIAGNOSTICS_HPP
#define VML_DIAGNOSTICS_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vml {

/// Source location of a token or AST node. Lines and columns are 1-based;
/// offset/length address the raw byte range for span-coverage checks.
struct Span {
  int line = 0;
  int column = 0;
  int length = 0;
  std::size_t offset = 0;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  Span span;
  std::string code;     // stable machine-readable tag, e.g. "undeclared-type"
  std::string message;
};

/// Renders as "file:line:col: severity[code]: message".
std::string render(const Diagnostic& d, std::string_view file);

class DiagnosticList {
 public:
  void error(Span span, std::string code, std::string message);
  void warning(Span span, std::string code, std::string message);

  bool has_errors() const;
  std::size_t error_count() const;
  const std::vector<Diagnostic>& items() const { return items_; }
  bool empty() const { return items_.empty(); }

  /// Count of diagnostics carrying the given code.
  std::size_t count(std::string_view code) const;

  void append(const DiagnosticList& other);
  std::string render_all(std::string_view file) const;

 private:
  std::vector<Diagnostic> items_;
};

/// Contract violations surfaced from deep inside evaluation or solving
/// (dimension mismatch, division by zero, domain too large, ...).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace vml

#endif
