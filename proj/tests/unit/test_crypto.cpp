#include "doctest.h"

#include <random>
#include <sstream>

#include "../support/oracles.hpp"
#include "secrecy/crypto.hpp"
#include "secrecy/errors.hpp"
#include "secrecy/lz.hpp"

using namespace secrecy;

namespace {

SchemeSpec scheme(Scheme s, std::size_t order = 1) {
    SchemeSpec spec;
    spec.scheme = s;
    spec.order = order;
    return spec;
}

std::vector<BitString> eight_keys() {
    std::vector<BitString> out;
    for (const char* k : {"1111", "1000", "1100", "1001", "0000", "0111", "0011", "0110"})
        out.push_back(BitString::from_binary(k));
    return out;
}

}  // namespace

TEST_SUITE("crypto") {

TEST_CASE("scheme names") {
    for (auto s : {Scheme::raw_otp, Scheme::lz78_otp, Scheme::type_otp, Scheme::block_type_otp,
                   Scheme::markov_type_otp, Scheme::condlz_otp})
        CHECK(scheme_from_string(to_string(s)) == s);
    CHECK_THROWS_AS(scheme_from_string("ROT13"), ValidationError);
}

TEST_CASE("eight-key pad cryptogram") {
    SchemeSpec spec = scheme(Scheme::raw_otp);
    spec.key_list = eight_keys();
    const auto x = SymbolSequence::binary("1111");
    const Cryptogram w = encrypt(spec, x, std::nullopt, BitString::from_binary("1111"));
    CHECK(w.body.to_binary() == "0000");
    const PreimageSet pre = preimage_set(spec, w, x.alphabet());
    CHECK(pre.members.size() == 8);
    CHECK(pre.undecodable == 0);
    CHECK_THROWS_AS(encrypt(spec, x, std::nullopt, BitString::from_binary("0101")), ValidationError);
}

TEST_CASE("roundtrip of every scheme, exhaustive at small n") {
    std::mt19937_64 rng(77);
    for (std::size_t n = 1; n <= 7; ++n) {
        std::bernoulli_distribution bit(0.5);
        oracle::Seq ys(n);
        for (auto& v : ys) v = bit(rng);
        const auto y = oracle::seq(ys);
        std::vector<SchemeSpec> specs{scheme(Scheme::raw_otp), scheme(Scheme::lz78_otp), scheme(Scheme::type_otp),
                                      scheme(Scheme::markov_type_otp, 1), scheme(Scheme::condlz_otp)};
        SchemeSpec type2 = scheme(Scheme::type_otp);
        type2.fsm = oracle::random_machine(rng, 2, 2);
        specs.push_back(type2);
        SchemeSpec si_type = scheme(Scheme::type_otp);
        si_type.side_info = true;
        specs.push_back(si_type);
        if (n % 2 == 0) specs.push_back(scheme(Scheme::block_type_otp, 2));
        for (const auto& spec : specs)
            for (const auto& xs : oracle::all_sequences(2, n)) {
                const auto x = oracle::seq(xs);
                const std::optional<SymbolSequence> yo = spec.needs_side_info() ? std::optional(y) : std::nullopt;
                const KeySpace ks = key_space(spec, x, yo);
                const Key k = ks.draw(rng);
                const Cryptogram w = encrypt(spec, x, yo, k);
                CHECK(decrypt(spec, w, x.alphabet(), yo, k) == x);
                const KeySpace observed = key_space_for(spec, w, x.alphabet(), yo);
                CHECK(observed.size() == ks.size());
            }
    }
}

TEST_CASE("key rates") {
    const auto x = SymbolSequence::binary("01100110");
    CHECK(key_rate(scheme(Scheme::raw_otp), x) == doctest::Approx(1.0));
    CHECK(key_rate(scheme(Scheme::lz78_otp), x) == doctest::Approx(lz78_length(x) / 8.0));
    CHECK(key_rate(scheme(Scheme::type_otp), x) == doctest::Approx(std::log2(70.0) / 8));
}

TEST_CASE("modular pad preimage is the type class") {
    const auto x = SymbolSequence::binary("011010");
    const SchemeSpec spec = scheme(Scheme::type_otp);
    for (int k = 0; k < 20; ++k) {
        const Cryptogram w = encrypt(spec, x, std::nullopt, BigInt(k));
        CHECK(w.clear_header.size() == 3);
        CHECK(w.body.size() == 5);
        const PreimageSet pre = preimage_set(spec, w, x.alphabet());
        CHECK(pre.members.size() == 20);
        for (const auto& m : pre.members) {
            std::size_t ones = 0;
            for (std::size_t i = 0; i < 6; ++i) ones += m[i];
            CHECK(ones == 3);
        }
    }
    CHECK_THROWS_AS(encrypt(spec, x, std::nullopt, BigInt(20)), ValidationError);
}

TEST_CASE("LZ78-OTP preimage excludes undecodable keys") {
    const auto x = SymbolSequence::binary("0110100");
    const SchemeSpec spec = scheme(Scheme::lz78_otp);
    const Cryptogram w = encrypt(spec, x, std::nullopt, BitString(lz78_length(x)));
    const PreimageSet pre = preimage_set(spec, w, x.alphabet());
    CHECK(pre.keys_tried == (std::uint64_t{1} << lz78_length(x)));
    CHECK(pre.members.size() + pre.undecodable <= pre.keys_tried);
    CHECK(pre.members.count(x) == 1);
    for (const auto& m : pre.members) CHECK(lz78_length(m) == lz78_length(x));
}

TEST_CASE("cryptogram files") {
    const auto x = SymbolSequence::binary("0110100111");
    for (auto s : {Scheme::raw_otp, Scheme::type_otp, Scheme::lz78_otp}) {
        const SchemeSpec spec = scheme(s);
        std::mt19937_64 rng(1);
        const Cryptogram w = encrypt(spec, x, std::nullopt, key_space(spec, x).draw(rng));
        std::stringstream buf;
        write_cryptogram(buf, w);
        CHECK(read_cryptogram(buf) == w);
    }
    std::stringstream bad("NOT A CRYPTOGRAM\n");
    CHECK_THROWS_AS(read_cryptogram(bad), IntegrityError);
}

TEST_CASE("key strings") {
    const Key bits = BitString::from_binary("10110");
    CHECK(std::get<BitString>(key_from_string(key_to_string(bits))) == std::get<BitString>(bits));
    const Key big = BigInt("98765432109876543210");
    CHECK(std::get<BigInt>(key_from_string(key_to_string(big))) == std::get<BigInt>(big));
}

TEST_CASE("side information is required where the scheme reads it") {
    const auto x = SymbolSequence::binary("0101");
    CHECK_THROWS_AS(key_space(scheme(Scheme::condlz_otp), x), ValidationError);
}

TEST_CASE("larger alphabets") {
    const auto x = SymbolSequence(Alphabet::numeric(3), {0, 2, 1, 1, 0, 2});
    for (auto s : {Scheme::raw_otp, Scheme::lz78_otp, Scheme::type_otp}) {
        const SchemeSpec spec = scheme(s);
        std::mt19937_64 rng(9);
        const Key k = key_space(spec, x).draw(rng);
        CHECK(decrypt(spec, encrypt(spec, x, std::nullopt, k), x.alphabet(), std::nullopt, k) == x);
    }
}

}
