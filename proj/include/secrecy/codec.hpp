#pragma once

#include <optional>

#include "secrecy/bigint.hpp"
#include "secrecy/bitstring.hpp"
#include "secrecy/type_class.hpp"

namespace secrecy {

// Lexicographic rank of x among the members of its class, and the inverse.
BigInt rank_in_type_class(const TypeClassDescriptor& desc, const SymbolSequence& x);
SymbolSequence unrank_in_type_class(const TypeClassDescriptor& desc, const BigInt& rank);

// Header: every count of the table in row-major order except the last, which
// is implied by the total, each in ceil(log2(n+1)) bits.
std::size_t header_count_width(std::size_t n);
BitString encode_header(const CountTable& counts, std::size_t n);
// Reads a header into a table of the given shape; IntegrityError when the
// counts cannot sum to `total`.
CountTable decode_header(BitReader& in, CountTable shape, std::size_t n, std::uint64_t total);

struct TwoPartCodeword {
    std::size_t n = 0;
    BitString header;
    BigInt payload_rank;
    std::size_t payload_bits = 0;  // ceil(log2 |class|)

    std::size_t declared_length() const noexcept { return header.size() + payload_bits; }
    // header || payload
    BitString bits() const;
};

TwoPartCodeword two_part_encode(const ClassSpec& spec, const SymbolSequence& x,
                                const std::optional<SymbolSequence>& y = std::nullopt);
// Decodes header || payload for a plaintext of length n. Uses only the class
// parameters, n and y; throws IntegrityError on a malformed stream.
SymbolSequence two_part_decode(const ClassSpec& spec, const Alphabet& alphabet, std::size_t n, const BitString& bits,
                               const std::optional<SymbolSequence>& y = std::nullopt);
SymbolSequence two_part_decode(const ClassSpec& spec, const Alphabet& alphabet, const TwoPartCodeword& cw,
                               const std::optional<SymbolSequence>& y = std::nullopt);

// Asymptotic codeword length: the empirical conditional entropy of the class
// plus (free parameters / 2) log2 of the number of counted items, e.g.
// n H(X|Z) + s(alpha-1)/2 log2 n for symbol-state classes and
// n H(X_l|X_0..X_{l-1}) + alpha^(l-1)(alpha-1)/2 log2 n for Markov classes.
double two_part_length_estimate(const SymbolSequence& x, const ClassSpec& spec,
                                const std::optional<SymbolSequence>& y = std::nullopt);

}  // namespace secrecy
