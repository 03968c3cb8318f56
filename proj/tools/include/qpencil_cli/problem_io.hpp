#pragma once

#include <string>

#include "qpencil/line_spectrum.hpp"
#include "qpencil/problem.hpp"

namespace qpencil::cli {

/// Reads a problem file:
///   {"geometry": {"whole_line": {}} | {"half_line": {"c", "side", "gamma"}}
///                | {"bounded": {"a", "b", "alpha", "beta"}},
///    "omega": {"atoms": [[x, mass], ...], "pieces": [[left, right, density], ...]},
///    "upsilon": {...}}
/// Throws ValidationError naming the offending field.
Problem parse_problem(const std::string& path);
Problem parse_problem_text(const std::string& text);

/// Serializes a problem in the format accepted by parse_problem_text.
std::string emit_problem(const Problem& problem);

/// Reads an element file:
///   {"nodes": [x, ...], "values": [v, ...], "second": [[x, v], ...]}
/// where each v is a number or a [re, im] pair.
HilbertElement parse_element(const std::string& path);
HilbertElement parse_element_text(const std::string& text);

}  // namespace qpencil::cli
