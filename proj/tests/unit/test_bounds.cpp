#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "../support/oracles.hpp"
#include "secrecy/bounds.hpp"
#include "secrecy/crypto.hpp"
#include "secrecy/entropy.hpp"
#include "secrecy/errors.hpp"
#include "secrecy/lz.hpp"

using namespace secrecy;

namespace {

double term(const BoundRecord& b, const std::string& name) {
    for (const auto& [k, v] : b.terms)
        if (k == name) return v;
    FAIL("missing term " << name);
    return 0;
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("ziv bound on 000000") {
    const BoundRecord b = ziv_bound(SymbolSequence::binary("000000"), 1);
    const double l3 = std::log2(3.0);
    CHECK(b.raw == doctest::Approx((3 * l3 - 0 - 3 - 3 * l3) / 6));
    CHECK(b.raw == doctest::Approx(-0.5));
    CHECK(b.clamped == 0.0);
}

TEST_CASE("ziv bound stays below the LZ rate") {
    std::mt19937_64 rng(14);
    std::bernoulli_distribution bit(0.5);
    std::vector<Symbol> xs(1 << 14);
    for (auto& v : xs) v = bit(rng);
    const SymbolSequence x(Alphabet::numeric(2), xs);
    for (std::size_t s : {1, 2, 4})
        CHECK(ziv_bound(x, s).raw <= static_cast<double>(lz78_length(x)) / static_cast<double>(xs.size()));
}

TEST_CASE("counter bound on 0101") {
    const BoundRecord b = fsm_counter_bound(SymbolSequence::binary("0101"), single_state_fsm(2));
    CHECK(b.raw == doctest::Approx(1 - 0.5 * std::log2(8 * std::numbers::pi) / 4));
    CHECK(b.raw == doctest::Approx(0.4187).epsilon(1e-3));
    CHECK(fsm_counter_bound(SymbolSequence::binary("0000"), single_state_fsm(2)).clamped == 0.0);
}

TEST_CASE("shift-register bound on 0101") {
    const auto x = SymbolSequence::binary("0101");
    const BoundRecord b = shift_register_bound(x, 2, 4);
    REQUIRE(b.maximizer);
    CHECK(b.maximizer->second == 4);
    CHECK(b.raw == doctest::Approx(-1.0 / 5 - 2.0 / 8 * std::log2(8 * std::numbers::pi)));
    const BoundRecord s1 = shift_register_bound(x, 1, 4);
    CHECK(s1.raw == doctest::Approx(markov_cond_entropy(x, 1) - 1.0 / 8 * std::log2(8 * std::numbers::pi)));
}

TEST_CASE("periodic bound") {
    std::vector<Symbol> xs;
    for (int i = 0; i < 4; ++i) xs.insert(xs.end(), {0, 1, 1, 0});
    const SymbolSequence x(Alphabet::numeric(2), xs);
    const BoundRecord b = periodic_bound(x, 1, 1);
    CHECK(block_entropy(x, 4) == 0.0);
    double best = -1e300;
    for (std::size_t q : {1, 2, 4, 8, 16}) {
        const double l = static_cast<double>(q);
        best = std::max(best, block_entropy(x, q) - (l * std::pow(2.0, l) / 16) * std::log2(16 / l + 1));
    }
    CHECK(b.raw == doctest::Approx(best));
    CHECK_THROWS_AS(periodic_bound(SymbolSequence::binary("01101"), 1, 2), ValidationError);
}

TEST_CASE("side-information bounds") {
    const auto x = SymbolSequence::binary("0101"), y = SymbolSequence::binary("0011");
    CHECK(si_lz_bound(x, y, 1).raw == doctest::Approx(1.0));
    for (const auto& xs : oracle::all_sequences(2, 8)) {
        const auto xx = oracle::seq(xs);
        CHECK(si_lz_bound(xx, xx, 1).raw == doctest::Approx(0.0));
    }
    // A constant y over a one-symbol alphabet collapses to the periodic term.
    const auto z = SymbolSequence::binary("01101001");
    const SymbolSequence ones(Alphabet::numeric(1), std::vector<Symbol>(8, 0));
    for (std::size_t l : {1, 2, 4}) {
        const double ld = static_cast<double>(l);
        const double periodic_term = block_entropy(z, l) - (ld * std::pow(2.0, ld) / 8) * std::log2(8 / ld + 1);
        CHECK(si_block_bound(z, ones, 1, l).raw == doctest::Approx(periodic_term));
    }
    CHECK_THROWS_AS(si_block_bound(z, SymbolSequence::binary("0110"), 1, 2), ValidationError);
}

TEST_CASE("entropy level inference") {
    CHECK(infer_entropy_level(10, 8, 2) == doctest::Approx(1.0625));
    CHECK(infer_entropy_level(0.5 * std::log2(8.0), 8, 2) == doctest::Approx(0.0));
}

TEST_CASE("full report structure and determinism") {
    const auto x = SymbolSequence::binary("0101");
    const KeyRateReport r = full_report(x, std::nullopt);
    CHECK(r.bounds.size() >= 4);
    CHECK(r.schemes.size() >= 3);
    CHECK(report_to_json(r).dump() == report_to_json(full_report(x, std::nullopt)).dump());
    const auto j = report_to_json(full_report(SymbolSequence::binary("01101001"), SymbolSequence::binary("00110011")));
    std::set<std::string> names;
    for (const auto& b : j["bounds"]) names.insert(b["name"].get<std::string>());
    for (const char* n : {"ziv", "phrase-classes", "fsm-counter", "shift-register", "periodic", "si-lz", "si-block"})
        CHECK(names.count(n) == 1);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"input", "params", "bounds", "schemes", "diagnostics"});
}

TEST_CASE("clamping and bound-versus-rate ordering, exhaustive n <= 10") {
    for (std::size_t n = 1; n <= 10; ++n)
        for (const auto& xs : oracle::all_sequences(2, n)) {
            const auto x = oracle::seq(xs);
            ReportConfig config;
            config.max_order = 4;
            const KeyRateReport r = full_report(x, std::nullopt, config);
            for (const auto& b : r.bounds) CHECK(b.clamped == std::max(b.raw, 0.0));
            for (const auto& s : r.schemes)
                for (const auto& t : s.targets)
                    for (const auto& b : r.bounds)
                        if (b.name == t) {
                            INFO(x.to_string() << " " << s.name << " vs " << b.name);
                            CHECK(b.clamped <= s.key_rate + 1e-12);
                        }
        }
}

TEST_CASE("counter bound is below the TYPE-OTP rate on the same machine") {
    SchemeSpec type;
    type.scheme = Scheme::type_otp;
    for (const FsmSpec& m : {single_state_fsm(2), build_shift_register_fsm(1, 2), build_shift_register_fsm(2, 2)}) {
        type.fsm = m;
        for (std::size_t n = 1; n <= 10; ++n)
            for (const auto& xs : oracle::all_sequences(2, n)) {
                const auto x = oracle::seq(xs);
                CHECK(fsm_counter_bound(x, m).clamped <= key_rate(type, x) + 1e-12);
            }
    }
}

TEST_CASE("report terms itemize the slack") {
    const auto x = SymbolSequence::binary("0110100110010110");
    const BoundRecord z = ziv_bound(x, 2);
    CHECK(z.raw == doctest::Approx(term(z, "c log c / n") - term(z, "2 c log s / n") - term(z, "c / n") -
                                   term(z, "c log(n/c + 1) / n")));
    const BoundRecord f = fsm_counter_bound(x, build_shift_register_fsm(1, 2));
    CHECK(f.raw == doctest::Approx(term(f, "H(X|Z)") - term(f, "s(alpha-1)/2 log2(2 pi n) / n")));
}

}
