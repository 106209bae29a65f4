#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace amc {

/// Exact nonnegative rational used for counts, probabilities and estimates.
using Count = mpq_class;

/// 2^e for any integer e (negative exponents give 1/2^-e).
Count pow2(std::int64_t e);

/// "123" for integers, "7/3" otherwise.
std::string to_string(const Count& c);

/// log2(c) as a double; -inf for zero.  Works far outside double range.
double log2(const Count& c);

bool is_integer(const Count& c);

/// Parses the format produced by to_string.
Count count_from_string(const std::string& s);

}  // namespace amc
