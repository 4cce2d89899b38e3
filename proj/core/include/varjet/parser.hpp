#pragma once

#include <string>

#include "varjet/bundle.hpp"
#include "varjet/expression.hpp"

namespace varjet {

/// Parses the expression grammar against the bundle's declared fields.
/// Throws ParseError with a byte position on malformed input.
Expression parse_expression(const std::string& text, const BundleSpec& bundle);

/// Canonical text form; parse(to_string(e)) is is_zero-equal to e whenever e
/// is free of internal formal atoms.
std::string to_string(const Expression& e, const BundleSpec& bundle);

} // namespace varjet
