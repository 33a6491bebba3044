#include "secrecy/crypto.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "secrecy/codec.hpp"
#include "secrecy/errors.hpp"
#include "secrecy/lz.hpp"

namespace secrecy {

const char* to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::raw_otp: return "RAW-OTP";
        case Scheme::lz78_otp: return "LZ78-OTP";
        case Scheme::type_otp: return "TYPE-OTP";
        case Scheme::block_type_otp: return "BLOCK-TYPE-OTP";
        case Scheme::markov_type_otp: return "MARKOV-TYPE-OTP";
        case Scheme::condlz_otp: return "CONDLZ-OTP";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& name) {
    for (auto s : {Scheme::raw_otp, Scheme::lz78_otp, Scheme::type_otp, Scheme::block_type_otp,
                   Scheme::markov_type_otp, Scheme::condlz_otp})
        if (name == to_string(s)) return s;
    throw ValidationError("unknown scheme '" + name + "'");
}

bool is_modular(Scheme scheme) {
    return scheme == Scheme::type_otp || scheme == Scheme::block_type_otp || scheme == Scheme::markov_type_otp;
}

ClassSpec class_spec(const SchemeSpec& spec) {
    ClassSpec c;
    c.fsm = spec.fsm;
    c.order = spec.order;
    switch (spec.scheme) {
        case Scheme::type_otp:
            c.kind = spec.side_info ? TypeClassKind::si_symbol_state : TypeClassKind::symbol_state;
            break;
        case Scheme::block_type_otp:
            c.kind = spec.side_info ? TypeClassKind::si_block : TypeClassKind::block;
            break;
        case Scheme::markov_type_otp: c.kind = TypeClassKind::markov; break;
        default: throw ValidationError(std::string(to_string(spec.scheme)) + " does not pad type-class ranks");
    }
    return c;
}

std::string key_to_string(const Key& key) {
    if (const auto* bits = std::get_if<BitString>(&key)) return bits->to_hex();
    return big_to_string(std::get<BigInt>(key));
}

Key key_from_string(const std::string& text) {
    if (text.find(':') != std::string::npos) return BitString::from_hex(text);
    return big_from_string(text);
}

BigInt KeySpace::size() const {
    switch (kind) {
        case Kind::bits: {
            BigInt out = 1;
            mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), bits);
            return out;
        }
        case Kind::modulus: return modulus;
        case Kind::list: return big_from_u64(list.size());
    }
    return 0;
}

double KeySpace::log2_size() const {
    switch (kind) {
        case Kind::bits: return static_cast<double>(bits);
        case Kind::modulus: return log2_big(modulus);
        case Kind::list: return list.empty() ? 0.0 : std::log2(static_cast<double>(list.size()));
    }
    return 0.0;
}

Key KeySpace::at(const BigInt& index) const {
    switch (kind) {
        case Kind::bits: {
            BitString k;
            k.append_big(index, bits);
            return k;
        }
        case Kind::modulus: return index;
        case Kind::list: return list.at(big_to_u64(index));
    }
    return BitString{};
}

bool KeySpace::contains(const Key& key) const {
    switch (kind) {
        case Kind::bits: {
            const auto* k = std::get_if<BitString>(&key);
            return k && k->size() == bits;
        }
        case Kind::modulus: {
            const auto* k = std::get_if<BigInt>(&key);
            return k && *k >= 0 && *k < modulus;
        }
        case Kind::list: {
            const auto* k = std::get_if<BitString>(&key);
            return k && std::find(list.begin(), list.end(), *k) != list.end();
        }
    }
    return false;
}

namespace {

BigInt random_bits(std::mt19937_64& rng, std::size_t width) {
    BitString b;
    for (std::size_t i = 0; i < width; i += 64) {
        const std::size_t chunk = std::min<std::size_t>(64, width - i);
        std::uint64_t v = rng();
        if (chunk < 64) v &= (std::uint64_t{1} << chunk) - 1;
        b.append_uint(v, chunk);
    }
    BigInt out = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        out <<= 1;
        if (b[i]) out += 1;
    }
    return out;
}

}  // namespace

Key KeySpace::draw(std::mt19937_64& rng) const {
    switch (kind) {
        case Kind::bits: {
            BitString k;
            for (std::size_t i = 0; i < bits; ++i) k.push_back(rng() & 1);
            return k;
        }
        case Kind::modulus: {
            const std::size_t w = index_width(modulus);
            while (true) {
                BigInt v = random_bits(rng, w);
                if (v < modulus) return v;
            }
        }
        case Kind::list: {
            if (list.empty()) throw ValidationError("cannot draw from an empty key list");
            std::uniform_int_distribution<std::size_t> pick(0, list.size() - 1);
            return list[pick(rng)];
        }
    }
    return BitString{};
}

std::string KeySpace::describe() const {
    switch (kind) {
        case Kind::bits: return std::to_string(bits) + "-bit strings";
        case Kind::modulus: return "residues modulo " + big_to_string(modulus);
        case Kind::list: return std::to_string(list.size()) + " listed keys";
    }
    return "?";
}

BitString symbols_to_bits(const SymbolSequence& x) {
    const std::size_t w = ceil_log2(x.alphabet_size());
    BitString out;
    for (std::size_t i = 0; i < x.size(); ++i) out.append_uint(x[i], w);
    return out;
}

SymbolSequence bits_to_symbols(const BitString& bits, const Alphabet& alphabet, std::size_t n) {
    const std::size_t w = ceil_log2(alphabet.size());
    if (bits.size() != n * w) throw IntegrityError("bit length does not match n symbols");
    BitReader in(bits);
    std::vector<Symbol> out(n);
    for (auto& s : out) {
        const std::uint64_t v = in.read_uint(w);
        if (v >= alphabet.size()) throw IntegrityError("decrypted symbol outside the alphabet");
        s = static_cast<Symbol>(v);
    }
    return SymbolSequence(alphabet, std::move(out));
}

namespace {

void require_side_info(const SchemeSpec& spec, std::size_t n, const std::optional<SymbolSequence>& y) {
    if (!spec.needs_side_info()) return;
    if (!y) throw ValidationError(std::string(to_string(spec.scheme)) + " needs side information");
    if (y->size() != n) throw ValidationError("side information length differs from sequence length");
}

std::optional<SymbolSequence> class_side_info(const SchemeSpec& spec, const std::optional<SymbolSequence>& y) {
    return spec.side_info ? y : std::nullopt;
}

KeySpace bit_space(std::size_t bits) {
    KeySpace k;
    k.kind = KeySpace::Kind::bits;
    k.bits = bits;
    return k;
}

KeySpace raw_space(const SchemeSpec& spec, std::size_t n, std::size_t alphabet_size) {
    const std::size_t bits = n * ceil_log2(alphabet_size);
    if (spec.key_list) {
        for (const auto& k : *spec.key_list)
            if (k.size() != bits)
                throw ValidationError("listed key has " + std::to_string(k.size()) + " bits, expected " +
                                      std::to_string(bits));
        KeySpace ks;
        ks.kind = KeySpace::Kind::list;
        ks.list = *spec.key_list;
        return ks;
    }
    return bit_space(bits);
}

KeySpace modular_space(BigInt modulus) {
    KeySpace k;
    k.kind = KeySpace::Kind::modulus;
    k.modulus = std::move(modulus);
    return k;
}


// Class named by a clear header, and the reader positioned after it.
TypeClassDescriptor header_class(const SchemeSpec& spec, const Cryptogram& w, const Alphabet& alphabet,
                                 const std::optional<SymbolSequence>& y) {
    const ClassSpec c = class_spec(spec);
    const auto cy = class_side_info(spec, y);
    BitReader in(w.clear_header);
    CountTable counts = decode_header(in, empty_counts(c, alphabet, w.n, cy), w.n, counted_items(c, w.n));
    if (in.remaining() != 0) throw IntegrityError("clear header has trailing bits");
    return describe_counts(c, alphabet, w.n, std::move(counts), cy);
}

void check_key(const KeySpace& ks, const Key& key) {
    if (!ks.contains(key)) throw ValidationError("key is not in the key space (" + ks.describe() + ")");
}

}  // namespace

KeySpace key_space(const SchemeSpec& spec, const SymbolSequence& x, const std::optional<SymbolSequence>& y) {
    require_side_info(spec, x.size(), y);
    switch (spec.scheme) {
        case Scheme::raw_otp: return raw_space(spec, x.size(), x.alphabet_size());
        case Scheme::lz78_otp: return bit_space(lz78_length(x));
        case Scheme::condlz_otp: return bit_space(conditional_lz_encode(x, *y).size());
        default: {
            const TypeClassDescriptor desc = describe(class_spec(spec), x, class_side_info(spec, y));
            return modular_space(type_class_size_exact(desc));
        }
    }
}

KeySpace key_space_for(const SchemeSpec& spec, const Cryptogram& w, const Alphabet& alphabet,
                       const std::optional<SymbolSequence>& y) {
    if (w.scheme != spec.scheme)
        throw IntegrityError(std::string("cryptogram was produced by ") + to_string(w.scheme) + ", not " +
                             to_string(spec.scheme));
    require_side_info(spec, w.n, y);
    switch (spec.scheme) {
        case Scheme::raw_otp: return raw_space(spec, w.n, alphabet.size());
        case Scheme::lz78_otp:
        case Scheme::condlz_otp: return bit_space(w.body.size());
        default: return modular_space(type_class_size_exact(header_class(spec, w, alphabet, y)));
    }
}

Cryptogram encrypt(const SchemeSpec& spec, const SymbolSequence& x, const std::optional<SymbolSequence>& y,
                   const Key& key) {
    require_side_info(spec, x.size(), y);
    Cryptogram w;
    w.scheme = spec.scheme;
    w.n = x.size();
    switch (spec.scheme) {
        case Scheme::raw_otp: {
            check_key(raw_space(spec, x.size(), x.alphabet_size()), key);
            w.body = otp(symbols_to_bits(x), std::get<BitString>(key));
            return w;
        }
        case Scheme::lz78_otp:
        case Scheme::condlz_otp: {
            const BitString code = spec.scheme == Scheme::lz78_otp ? lz78_encode(x) : conditional_lz_encode(x, *y);
            check_key(bit_space(code.size()), key);
            w.body = otp(code, std::get<BitString>(key));
            return w;
        }
        default: {
            const TypeClassDescriptor desc = describe(class_spec(spec), x, class_side_info(spec, y));
            ClassEnumerator e(desc);
            const BigInt modulus = e.size();
            check_key(modular_space(modulus), key);
            w.clear_header = encode_header(desc.counts, x.size());
            BigInt residue = e.rank(x) + std::get<BigInt>(key);
            if (residue >= modulus) residue -= modulus;
            w.body.append_big(residue, index_width(modulus));
            return w;
        }
    }
}

SymbolSequence decrypt(const SchemeSpec& spec, const Cryptogram& w, const Alphabet& alphabet,
                       const std::optional<SymbolSequence>& y, const Key& key) {
    if (w.scheme != spec.scheme)
        throw IntegrityError(std::string("cryptogram was produced by ") + to_string(w.scheme) + ", not " +
                             to_string(spec.scheme));
    require_side_info(spec, w.n, y);
    switch (spec.scheme) {
        case Scheme::raw_otp: {
            check_key(raw_space(spec, w.n, alphabet.size()), key);
            return bits_to_symbols(otp(w.body, std::get<BitString>(key)), alphabet, w.n);
        }
        case Scheme::lz78_otp: {
            check_key(bit_space(w.body.size()), key);
            SymbolSequence x = lz78_decode(otp(w.body, std::get<BitString>(key)), alphabet);
            if (x.size() != w.n) throw IntegrityError("decoded length differs from the declared n");
            return x;
        }
        case Scheme::condlz_otp: {
            check_key(bit_space(w.body.size()), key);
            return conditional_lz_decode(otp(w.body, std::get<BitString>(key)), *y, alphabet);
        }
        default: {
            const TypeClassDescriptor desc = header_class(spec, w, alphabet, y);
            ClassEnumerator e(desc);
            const BigInt modulus = e.size();
            if (modulus == 0) throw IntegrityError("clear header describes an empty type class");
            check_key(modular_space(modulus), key);
            if (w.body.size() != index_width(modulus)) throw IntegrityError("body width does not match the class size");
            BitReader in(w.body);
            const BigInt residue = in.read_big(w.body.size());
            if (residue >= modulus) throw IntegrityError("body residue exceeds the class size");
            BigInt rank = residue - std::get<BigInt>(key);
            if (rank < 0) rank += modulus;
            return e.unrank(rank);
        }
    }
}

PreimageSet preimage_set(const SchemeSpec& spec, const Cryptogram& w, const Alphabet& alphabet,
                         const std::optional<SymbolSequence>& y, std::uint64_t key_budget) {
    const KeySpace ks = key_space_for(spec, w, alphabet, y);
    const BigInt size = ks.size();
    if (size > big_from_u64(key_budget))
        throw BudgetError("key space of " + big_to_string(size) + " keys exceeds the budget of " +
                          std::to_string(key_budget));
    PreimageSet out;
    const std::uint64_t count = big_to_u64(size);
    for (std::uint64_t k = 0; k < count; ++k) {
        ++out.keys_tried;
        try {
            out.members.insert(decrypt(spec, w, alphabet, y, ks.at(big_from_u64(k))));
        } catch (const IntegrityError&) {
            ++out.undecodable;
        }
    }
    return out;
}

double key_rate(const SchemeSpec& spec, const SymbolSequence& x, const std::optional<SymbolSequence>& y) {
    if (x.empty()) return 0.0;
    return key_space(spec, x, y).log2_size() / static_cast<double>(x.size());
}

namespace {

constexpr const char* magic = "SECRECY-CRYPTOGRAM 1";

std::string expect_field(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line)) throw IntegrityError("cryptogram file ends before the '" + name + "' line");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string prefix = name + " ";
    if (line.rfind(prefix, 0) != 0) throw IntegrityError("cryptogram file: expected a '" + name + "' line");
    return line.substr(prefix.size());
}

}  // namespace

void write_cryptogram(std::ostream& out, const Cryptogram& w) {
    out << magic << '\n';
    out << "scheme " << to_string(w.scheme) << '\n';
    out << "n " << w.n << '\n';
    out << "header " << w.clear_header.to_hex() << '\n';
    out << "body " << w.body.to_hex() << '\n';
}

Cryptogram read_cryptogram(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IntegrityError("empty cryptogram file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != magic) throw IntegrityError("not a cryptogram file (bad magic line)");
    Cryptogram w;
    try {
        w.scheme = scheme_from_string(expect_field(in, "scheme"));
    } catch (const ValidationError& e) {
        throw IntegrityError(e.what());
    }
    const std::string n_text = expect_field(in, "n");
    std::size_t used = 0;
    try {
        w.n = std::stoull(n_text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != n_text.size()) throw IntegrityError("cryptogram file: malformed n");
    w.clear_header = BitString::from_hex(expect_field(in, "header"));
    w.body = BitString::from_hex(expect_field(in, "body"));
    return w;
}

}  // namespace secrecy
