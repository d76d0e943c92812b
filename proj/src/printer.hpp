#ifndef VML_PRINTER_HPP
#define VML_PRINTER_HPP

#include <string>

#include "ast.hpp"

namespace vml {

/// Canonical source text for a model; parse(pretty_print(m)) is
/// structurally equal to m.
std::string pretty_print(const Model& model);

std::string print_expr(const Expr& e);

}  // namespace vml

#endif
