#pragma once

#include <string>

namespace scatter {

// Extended-precision scalar used only while enumerating norms of lattices
// with irrational aspect parameters and while parsing aspect input.
// Quad precision keeps ~34 significant digits, so decimal inputs are
// honoured well past the 30 digits the norm-grouping logic relies on.
#if defined(__SIZEOF_FLOAT128__)
using BigFloat = __float128;
#else
using BigFloat = long double;
#endif

// Parses a plain decimal string ([+-]digits[.digits][eE[+-]digits]).
// Throws UsageError on malformed input.
BigFloat parse_decimal(const std::string& text);

double to_double(BigFloat v);

}  // namespace scatter
