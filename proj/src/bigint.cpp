#include "secrecy/bigint.hpp"

#include <cmath>
#include <limits>

#include "secrecy/errors.hpp"

namespace secrecy {

double log2_big(const BigInt& value) {
    if (sgn(value) <= 0) return -std::numeric_limits<double>::infinity();
    long exponent = 0;
    const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
    return std::log2(mantissa) + static_cast<double>(exponent);
}

std::size_t index_width(const BigInt& count) {
    if (count <= 1) return 0;
    BigInt top = count - 1;
    return mpz_sizeinbase(top.get_mpz_t(), 2);
}

std::size_t index_width(std::uint64_t count) {
    if (count <= 1) return 0;
    return ceil_log2(count);
}

std::size_t ceil_log2(std::uint64_t value) {
    std::size_t bits = 0;
    while (bits < 64 && (std::uint64_t{1} << bits) < value) ++bits;
    return bits;
}

BigInt big_from_u64(std::uint64_t value) {
    BigInt out;
    mpz_import(out.get_mpz_t(), 1, -1, sizeof(value), 0, 0, &value);
    return out;
}

std::uint64_t big_to_u64(const BigInt& value) {
    if (sgn(value) < 0 || mpz_sizeinbase(value.get_mpz_t(), 2) > 64)
        throw BudgetError("integer " + value.get_str() + " does not fit in 64 bits");
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, value.get_mpz_t());
    return out;
}

std::string big_to_string(const BigInt& value) { return value.get_str(10); }

BigInt big_from_string(const std::string& text) {
    if (text.empty()) throw ValidationError("empty integer literal");
    for (char ch : text)
        if (ch < '0' || ch > '9') throw ValidationError("invalid integer literal '" + text + "'");
    return BigInt(text, 10);
}

}  // namespace secrecy
