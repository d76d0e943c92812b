#ifndef VML_MINIZINC_HPP
#define VML_MINIZINC_HPP

#include <string>

#include "problem.hpp"

namespace vml {

/// Emits MiniZinc text for the lowered problem: one parameter per context,
/// one decision variable per variation point, one implication constraint
/// per rule or variation point clause, auxiliary variables with segment
/// constraints for chord-linearized definitions, and a final solve item.
/// Output is deterministic and ordered by declaration.
/// Throws Error("non-linearized-term") when a nonlinear definition over
/// several decision variables reaches emission.
std::string emit_minizinc(const ConstraintProblem& cp);

}  // namespace vml

#endif
