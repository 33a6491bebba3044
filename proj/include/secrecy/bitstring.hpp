#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "secrecy/bigint.hpp"

namespace secrecy {

// A finite string of bits, most significant bit first when numbers are
// appended. Serializes as "<bit count>:<hex>" with the bits packed MSB-first
// and the final nibble zero-padded.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t length, bool value = false) : bits_(length, value ? 1 : 0) {}

    // Parses a literal of '0'/'1' characters.
    static BitString from_binary(std::string_view text);
    static BitString from_hex(std::string_view length_prefixed);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool value) { bits_[i] = value ? 1 : 0; }

    void push_back(bool bit) { bits_.push_back(bit ? 1 : 0); }
    void append_uint(std::uint64_t value, std::size_t width);
    void append_big(const BigInt& value, std::size_t width);
    void append(const BitString& other);

    std::string to_binary() const;
    std::string to_hex() const;

    bool operator==(const BitString&) const = default;
    auto operator<=>(const BitString&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

// Sequential reader; every read past the end throws IntegrityError.
class BitReader {
public:
    explicit BitReader(const BitString& bits) : bits_(&bits) {}

    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bits_->size() - pos_; }
    bool read_bit();
    std::uint64_t read_uint(std::size_t width);
    BigInt read_big(std::size_t width);

private:
    const BitString* bits_;
    std::size_t pos_ = 0;
};

// Bitwise modulo-2 sum; throws ValidationError on a length mismatch.
BitString otp(const BitString& bits, const BitString& key);

}  // namespace secrecy
