#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "kuothom/polynomial.hpp"

namespace kuothom {

/// Polynomial grammar:
///
///   expr    := term (('+'|'-') term)*
///   term    := factor ('*' factor)*
///   factor  := ('+'|'-') factor | primary ['^' integer]
///   primary := integer ['/' integer] | variable | '(' expr ')'
///
/// Variables are x1..xn; x, y, z, w alias x1..x4. Whitespace is ignored.
///
/// `nvars` fixes the variable count; 0 infers it from the highest variable
/// index used (at least 1). `line` and `column_offset` shift reported error
/// positions when the text is a piece of a larger file.
Polynomial parse_polynomial(std::string_view text, std::size_t nvars = 0, std::size_t line = 1,
                            std::size_t column_offset = 0);

/// Univariate polynomial in t, same grammar with t as the only variable.
UniPoly parse_unipoly(std::string_view text, std::size_t line = 1, std::size_t column_offset = 0);

/// Name of variable `index` (0-based) in an ambient space of `nvars`
/// variables: x, y, z, w when nvars <= 4, x1..xn otherwise.
std::string variable_name(std::size_t index, std::size_t nvars);

/// Prints in the grammar above, terms in GradedOrder, e.g. "x - y^2" or
/// "16*x^4*y^2 + 16*x^2*y^4". Output re-parses to the same polynomial.
std::string to_string(const Polynomial& p);

/// Prints in powers of t, ascending, e.g. "t - 1/2*t^3".
std::string to_string(const UniPoly& q);

}  // namespace kuothom
