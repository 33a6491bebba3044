#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace secrecy {

using BigInt = mpz_class;

// log2 of a positive big integer; returns -inf for zero.
double log2_big(const BigInt& value);

// Number of bits needed to write any value in [0, count): ceil(log2 count),
// with 0 for count <= 1.
std::size_t index_width(const BigInt& count);
std::size_t index_width(std::uint64_t count);

// ceil(log2 value) for value >= 1.
std::size_t ceil_log2(std::uint64_t value);

BigInt big_from_u64(std::uint64_t value);
std::uint64_t big_to_u64(const BigInt& value);  // throws if it does not fit
std::string big_to_string(const BigInt& value);
BigInt big_from_string(const std::string& text);  // decimal; throws ValidationError

}  // namespace secrecy
