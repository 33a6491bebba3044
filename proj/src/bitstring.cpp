#include "secrecy/bitstring.hpp"

#include <charconv>

#include "secrecy/errors.hpp"

namespace secrecy {

namespace {

int hex_value(char ch) {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
    return -1;
}

}  // namespace

BitString BitString::from_binary(std::string_view text) {
    BitString out;
    for (char ch : text) {
        if (ch != '0' && ch != '1')
            throw ValidationError("bit literal contains '" + std::string(1, ch) + "'");
        out.push_back(ch == '1');
    }
    return out;
}

BitString BitString::from_hex(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw IntegrityError("bitstring lacks a length prefix");
    std::size_t length = 0;
    const auto* first = text.data();
    const auto [ptr, ec] = std::from_chars(first, first + colon, length);
    if (ec != std::errc{} || ptr != first + colon)
        throw IntegrityError("bad bitstring length prefix");
    const std::string_view hex = text.substr(colon + 1);
    if (hex.size() != (length + 3) / 4)
        throw IntegrityError("bitstring hex payload has " + std::to_string(hex.size()) +
                             " digits, expected " + std::to_string((length + 3) / 4));
    BitString out;
    for (std::size_t i = 0; i < hex.size(); ++i) {
        const int v = hex_value(hex[i]);
        if (v < 0) throw IntegrityError("bitstring payload is not hex");
        for (int b = 3; b >= 0; --b) {
            const std::size_t idx = i * 4 + static_cast<std::size_t>(3 - b);
            const bool bit = ((v >> b) & 1) != 0;
            if (idx < length)
                out.push_back(bit);
            else if (bit)
                throw IntegrityError("bitstring padding bits are not zero");
        }
    }
    return out;
}

void BitString::append_uint(std::uint64_t value, std::size_t width) {
    for (std::size_t i = width; i-- > 0;) push_back(i < 64 && ((value >> i) & 1U) != 0);
}

void BitString::append_big(const BigInt& value, std::size_t width) {
    if (sgn(value) < 0 || mpz_sizeinbase(value.get_mpz_t(), 2) > std::max<std::size_t>(width, 1) ||
        (width == 0 && value != 0))
        throw ValidationError("value " + value.get_str() + " does not fit in " + std::to_string(width) + " bits");
    for (std::size_t i = width; i-- > 0;) push_back(mpz_tstbit(value.get_mpz_t(), i) != 0);
}

void BitString::append(const BitString& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

std::string BitString::to_binary() const {
    std::string out;
    out.reserve(bits_.size());
    for (auto b : bits_) out.push_back(b ? '1' : '0');
    return out;
}

std::string BitString::to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out = std::to_string(bits_.size()) + ":";
    for (std::size_t i = 0; i < bits_.size(); i += 4) {
        int v = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            v <<= 1;
            if (i + j < bits_.size() && bits_[i + j]) v |= 1;
        }
        out.push_back(digits[v]);
    }
    return out;
}

bool BitReader::read_bit() {
    if (pos_ >= bits_->size()) throw IntegrityError("bitstream truncated");
    return (*bits_)[pos_++];
}

std::uint64_t BitReader::read_uint(std::size_t width) {
    if (width > 64) throw IntegrityError("field wider than 64 bits");
    if (remaining() < width) throw IntegrityError("bitstream truncated");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) v = (v << 1) | ((*bits_)[pos_++] ? 1U : 0U);
    return v;
}

BigInt BitReader::read_big(std::size_t width) {
    if (remaining() < width) throw IntegrityError("bitstream truncated");
    BigInt v = 0;
    for (std::size_t i = 0; i < width; ++i) {
        v <<= 1;
        if ((*bits_)[pos_++]) v += 1;
    }
    return v;
}

BitString otp(const BitString& bits, const BitString& key) {
    if (bits.size() != key.size())
        throw ValidationError("one-time pad length mismatch: " + std::to_string(bits.size()) + " data bits, " +
                              std::to_string(key.size()) + " key bits");
    BitString out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) out.set(i, bits[i] != key[i]);
    return out;
}

}  // namespace secrecy
