#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "secrecy/bigint.hpp"
#include "secrecy/bitstring.hpp"
#include "secrecy/type_class.hpp"

namespace secrecy {

enum class Scheme { raw_otp, lz78_otp, type_otp, block_type_otp, markov_type_otp, condlz_otp };

const char* to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);
// Modular pad on the rank inside a type class, header sent in the clear.
bool is_modular(Scheme scheme);

struct SchemeSpec {
    Scheme scheme = Scheme::raw_otp;
    std::optional<FsmSpec> fsm;  // type schemes; single-state machine when absent
    std::size_t order = 1;       // block length (BLOCK-TYPE) or Markov order (MARKOV-TYPE)
    bool side_info = false;      // TYPE / BLOCK-TYPE: count classes conditioned on y
    // RAW-OTP only: restrict the key space to this list instead of all
    // n ceil(log2 alpha)-bit strings.
    std::optional<std::vector<BitString>> key_list;

    bool needs_side_info() const noexcept { return scheme == Scheme::condlz_otp || side_info; }
};

// The type-class parameters a modular scheme works with.
ClassSpec class_spec(const SchemeSpec& spec);

using Key = std::variant<BitString, BigInt>;

std::string key_to_string(const Key& key);
// "<bits>:<hex>" for bit keys, a decimal number for modular keys.
Key key_from_string(const std::string& text);

struct KeySpace {
    enum class Kind { bits, modulus, list } kind = Kind::bits;
    std::size_t bits = 0;              // bits: key length
    BigInt modulus = 1;                // modulus: keys 0..M-1
    std::vector<BitString> list;       // list: explicit keys

    BigInt size() const;
    double log2_size() const;
    // Key number `index` in a fixed enumeration order.
    Key at(const BigInt& index) const;
    bool contains(const Key& key) const;
    // Uniform draw (rejection sampling for moduli that are not powers of two).
    Key draw(std::mt19937_64& rng) const;
    std::string describe() const;
};

struct Cryptogram {
    Scheme scheme = Scheme::raw_otp;
    std::size_t n = 0;
    BitString clear_header;  // modular schemes: the count table, unencrypted
    BitString body;          // padded payload; the residue (rank + k) mod M for modular schemes

    bool operator==(const Cryptogram&) const = default;
};

// Key space the encrypter consumes on x.
KeySpace key_space(const SchemeSpec& spec, const SymbolSequence& x,
                   const std::optional<SymbolSequence>& y = std::nullopt);
// Key space an observer of W must consider (determined by W alone).
KeySpace key_space_for(const SchemeSpec& spec, const Cryptogram& w, const Alphabet& alphabet,
                       const std::optional<SymbolSequence>& y = std::nullopt);

Cryptogram encrypt(const SchemeSpec& spec, const SymbolSequence& x, const std::optional<SymbolSequence>& y,
                   const Key& key);
// Throws IntegrityError when W does not decrypt under k, ValidationError when
// k is not in the key space.
SymbolSequence decrypt(const SchemeSpec& spec, const Cryptogram& w, const Alphabet& alphabet,
                       const std::optional<SymbolSequence>& y, const Key& key);

inline constexpr std::uint64_t default_key_budget = std::uint64_t{1} << 20;

struct PreimageSet {
    std::set<SymbolSequence> members;
    std::uint64_t keys_tried = 0;
    std::uint64_t undecodable = 0;  // keys under which W does not decrypt
};

// T^{-1}(W) = { decrypt(W, k) : k in the key space of W }.
PreimageSet preimage_set(const SchemeSpec& spec, const Cryptogram& w, const Alphabet& alphabet,
                         const std::optional<SymbolSequence>& y = std::nullopt,
                         std::uint64_t key_budget = default_key_budget);

// log2 |key space| / n for the key space the scheme consumes on x.
double key_rate(const SchemeSpec& spec, const SymbolSequence& x, const std::optional<SymbolSequence>& y = std::nullopt);

// Text file: a magic line, then "scheme", "n", "header" and "body" lines;
// bit fields are written as "<bits>:<hex>".
void write_cryptogram(std::ostream& out, const Cryptogram& w);
Cryptogram read_cryptogram(std::istream& in);

// Plaintext symbols as fixed-width bit groups (ceil(log2 alpha) bits each).
BitString symbols_to_bits(const SymbolSequence& x);
SymbolSequence bits_to_symbols(const BitString& bits, const Alphabet& alphabet, std::size_t n);

}  // namespace secrecy
