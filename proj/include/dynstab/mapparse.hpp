#pragma once

#include <string>

#include "dynstab/poly.hpp"

namespace dynstab {

// Human-readable polynomial expressions: sums and products of numbers,
// variables (x, y, z, w or x0..x3), `i`, parentheses and integer powers,
// e.g. "2*x^2 - i*y*z + (x+y)^2". Exact parsing accepts integers and p/q
// fractions (coefficients in Q(zeta_conductor), conductor divisible by 4 when
// `i` appears); decimal literals are rejected there.
Poly<CycloNumber> parse_expression_exact(const std::string& text, int nvars, int conductor = 4);
Poly<Complex> parse_expression_float(const std::string& text, int nvars);

// Comma-separated components; the variable count equals the component count.
PolyMap<CycloNumber> parse_map_exact(const std::string& text, int conductor = 4);
PolyMap<Complex> parse_map_float(const std::string& text);

}  // namespace dynstab
