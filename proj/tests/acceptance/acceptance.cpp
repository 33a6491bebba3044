// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "../support/oracles.hpp"
#include "secrecy/bounds.hpp"
#include "secrecy/codec.hpp"
#include "secrecy/counts.hpp"
#include "secrecy/crypto.hpp"
#include "secrecy/entropy.hpp"
#include "secrecy/fsm_io.hpp"
#include "secrecy/lz.hpp"
#include "secrecy/type_class.hpp"
#include "secrecy/verifier.hpp"

using namespace secrecy;
using oracle::Seq;

namespace {

constexpr double tol = 1e-12;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v, int precision = 6) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

std::string bits(const Seq& x) {
    std::string s;
    for (auto v : x) s += static_cast<char>('0' + v);
    return s;
}

// Binary sequence number `mask` of length n, first symbol most significant.
void fill(Seq& x, std::uint32_t mask, std::size_t n) {
    x.resize(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> (n - 1 - i)) & 1;
}

std::uint64_t brute_output_count(const FsmSpec& m, std::size_t n, const Seq* y = nullptr) {
    std::uint64_t count = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        State z = m.initial_state();
        bool ok = true;
        for (std::size_t i = 0; i < n; ++i) {
            const Symbol xi = (mask >> (n - 1 - i)) & 1;
            const Symbol yi = y ? (*y)[i] : 0;
            if (m.output(z, xi, yi)) {
                ok = false;
                break;
            }
            z = m.next(z, xi, yi, i % m.period());
        }
        count += ok ? 1 : 0;
    }
    return count;
}

using CountKey = std::vector<std::uint8_t>;

// n(phase, z, y, x) along the trace, flattened.
CountKey counter_key(const FsmSpec& m, const Seq& x, const Seq* y = nullptr) {
    const std::size_t b1 = m.has_side_info() ? m.si_alphabet_size() : 1;
    CountKey key(m.period() * m.state_count() * b1 * 2, 0);
    State z = m.initial_state();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Symbol yi = y ? (*y)[i] : 0;
        const std::size_t phase = i % m.period();
        ++key[((phase * m.state_count() + z) * b1 + yi) * 2 + x[i]];
        z = m.next(z, x[i], yi, phase);
    }
    return key;
}

// Size of the counter class of every length-n binary x, indexed by mask.
std::vector<std::uint64_t> class_sizes(const FsmSpec& m, std::size_t n, const Seq* y = nullptr) {
    std::map<CountKey, std::uint64_t> sizes;
    std::vector<CountKey> keys(std::size_t{1} << n);
    Seq x;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        fill(x, mask, n);
        keys[mask] = counter_key(m, x, y);
        ++sizes[keys[mask]];
    }
    std::vector<std::uint64_t> out(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) out[i] = sizes[keys[i]];
    return out;
}

// bound <= log2|A_n| / n bookkeeping for one named bound.
struct Tally {
    std::uint64_t checks = 0;
    std::uint64_t violations = 0;
    std::uint64_t positive = 0;  // checks with a bound above zero
    double worst = -std::numeric_limits<double>::infinity();
    std::string first;

    void add(double bound, double rate, const std::function<std::string()>& where) {
        ++checks;
        positive += bound > 0 ? 1 : 0;
        worst = std::max(worst, bound - rate);
        if (bound > rate + tol) {
            if (violations == 0) first = where() + ": bound " + fmt(bound, 10) + " > " + fmt(rate, 10);
            ++violations;
        }
    }
};

Outcome summarize(const std::map<std::string, Tally>& tallies) {
    Outcome o;
    std::ostringstream s;
    std::uint64_t total = 0, bad = 0;
    for (const auto& [name, t] : tallies) {
        total += t.checks;
        bad += t.violations;
        s << " " << name << ": " << t.checks << " checks, " << t.positive << " positive, " << t.violations
          << " violations, worst margin " << fmt(t.worst, 4) << ";";
        if (t.violations) {
            o.pass = false;
            s << " [" << t.first << "]";
        }
    }
    o.detail = std::to_string(total) + " checks, " + std::to_string(bad) + " violations;" + s.str();
    return o;
}

double log2_rate(std::uint64_t size, std::size_t n) { return std::log2(static_cast<double>(size)) / static_cast<double>(n); }

// 1. (0,2) discriminator against an eight-key RAW-OTP
Outcome key_list_scenario() {
    const auto start = std::chrono::steady_clock::now();
    const Scenario sc = scenario_from_json(load_json(std::string(SECRECY_SOURCE_DIR) + "/scenarios/dk02_key_list.json"));
    const auto j = run_scenario(sc);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto& r = j["result"];
    Outcome o;
    o.pass = sc.x.to_string() == "1111" && sc.key && key_to_string(*sc.key) == key_to_string(BitString::from_binary("1111")) &&
             r["acceptance_size"] == 13 && r["preimage_size"] == 8 && r["verdict"] == "insecure" &&
             r["cryptogram"]["body"] == "4:0" && secs < 1.0;
    o.detail = "|A_4|=" + r["acceptance_size"].dump() + " |T^-1(W)|=" + r["preimage_size"].dump() +
               " verdict=" + r["verdict"].get<std::string>() + " W=" + r["cryptogram"]["body"].get<std::string>() +
               " in " + fmt(secs, 3) + " s";
    return o;
}

// 2. (d,k) machinery
Outcome dk_machinery() {
    Outcome o;
    std::ostringstream s;
    const FsmSpec dk = build_dk_discriminator(0, 2);
    const std::uint64_t expected[] = {2, 4, 7, 13};
    s << "counts";
    for (std::size_t n = 1; n <= 4; ++n) {
        const BigInt c = dk_count(0, 2, n);
        const std::uint64_t brute = brute_output_count(dk, n);
        s << " " << c.get_str();
        if (c != expected[n - 1] || brute != expected[n - 1]) o.pass = false;
    }
    const double c01 = dk_capacity(0, 1), c02 = dk_capacity(0, 2);
    if (std::abs(c01 - 0.694242) > 1e-6 || std::abs(c02 - 0.879146) > 1e-6) o.pass = false;
    if (std::abs(c01 - oracle::dk_capacity(0, 1)) > 1e-6 || std::abs(c02 - oracle::dk_capacity(0, 2)) > 1e-6) o.pass = false;
    const double r01 = log2_big(dk_count(0, 1, 24)) / 24, r02 = log2_big(dk_count(0, 2, 24)) / 24;
    if (std::abs(r01 - c01) > 0.02 || std::abs(r02 - c02) > 0.02) o.pass = false;
    s << "; C(0,1)=" << fmt(c01, 9) << " C(0,2)=" << fmt(c02, 9) << "; rate@24: " << fmt(r01, 5) << " "
      << fmt(r02, 5);
    o.detail = s.str();
    return o;
}

// 3. Soundness: clamped bounds never exceed log2|A_n|/n.
Outcome soundness() {
    std::map<std::string, Tally> t;
    std::mt19937_64 rng(2024);
    Seq x;

    // Output-table machines, s <= 4: the tight machine of each next-state
    // table has the smallest acceptance set containing x.
    std::vector<std::vector<FsmSpec>> tables(5);
    tables[1].push_back(single_state_fsm(2));
    for (std::size_t s = 2; s <= 4; ++s)
        for (int k = 0; k < 6; ++k) tables[s].push_back(oracle::random_machine(rng, 2, s));
    tables[2].push_back(build_shift_register_fsm(1, 2));
    tables[4].push_back(build_shift_register_fsm(2, 2));
    for (std::size_t n = 1; n <= 10; ++n)
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            fill(x, mask, n);
            const auto xs = oracle::seq(x);
            for (std::size_t s = 1; s <= 4; ++s) {
                const double ziv = ziv_bound(xs, s).clamped;
                for (const FsmSpec& g : tables[s]) {
                    const FsmSpec tight = oracle::tight_machine(g, x);
                    const double rate = log2_rate(brute_output_count(tight, n), n);
                    auto where = [&] { return bits(x) + " s=" + std::to_string(s); };
                    t["ziv"].add(ziv, rate, where);
                    t["phrase-classes"].add(phrase_class_bound(xs, tight).clamped, rate, where);
                }
            }
        }

    // Counter machines (random with s <= 4, shift registers of order <= 3)
    // and periodic machines with period <= 2.
    struct Counter {
        FsmSpec fsm;
        std::size_t s;
        bool shift_register;
    };
    std::vector<Counter> counters{{single_state_fsm(2), 1, true}};
    for (std::size_t s = 2; s <= 4; ++s)
        for (int k = 0; k < 8; ++k) counters.push_back({oracle::random_machine(rng, 2, s), s, false});
    for (std::size_t l = 1; l <= 3; ++l) counters.push_back({build_shift_register_fsm(l, 2), std::size_t{1} << l, true});
    std::vector<Counter> periodic{{oracle::random_machine(rng, 2, 1, false, 0, 2), 1, false}};
    for (std::size_t s = 2; s <= 4; ++s)
        for (int k = 0; k < 4; ++k) periodic.push_back({oracle::random_machine(rng, 2, s, false, 0, 2), s, false});
    for (std::size_t n = 1; n <= 10; ++n) {
        std::vector<std::vector<std::uint64_t>> sizes, psizes;
        for (const auto& c : counters) sizes.push_back(class_sizes(c.fsm, n));
        for (const auto& c : periodic) psizes.push_back(class_sizes(c.fsm, n));
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            fill(x, mask, n);
            const auto xs = oracle::seq(x);
            std::map<std::size_t, double> sr, per1, per2;
            for (std::size_t i = 0; i < counters.size(); ++i) {
                const auto& c = counters[i];
                const double rate = log2_rate(sizes[i][mask], n);
                auto where = [&] { return bits(x) + " s=" + std::to_string(c.s) + " machine " + std::to_string(i); };
                t["fsm-counter"].add(fsm_counter_bound(xs, c.fsm).clamped, rate, where);
                if (!sr.count(c.s)) sr[c.s] = shift_register_bound(xs, c.s, 6).clamped;
                t["shift-register"].add(sr[c.s], rate, where);
                // a time-invariant machine is periodic with l = 1
                if (!per1.count(c.s)) per1[c.s] = periodic_bound(xs, c.s, 1).clamped;
                t["periodic"].add(per1[c.s], rate, where);
            }
            if (n % 2 == 0)
                for (std::size_t i = 0; i < periodic.size(); ++i) {
                    const auto& c = periodic[i];
                    if (!per2.count(c.s)) per2[c.s] = periodic_bound(xs, c.s, 2).clamped;
                    t["periodic"].add(per2[c.s], log2_rate(psizes[i][mask], n),
                                      [&] { return bits(x) + " l=2 s=" + std::to_string(c.s); });
                }
        }
    }

    // Side-information machines, every y, n <= 8.
    std::vector<std::vector<FsmSpec>> si_tables(5), si_counters(5);
    si_tables[1].push_back(oracle::random_machine(rng, 2, 1, false, 2));
    si_counters[1].push_back(si_tables[1][0]);
    for (std::size_t s = 2; s <= 4; ++s)
        for (int k = 0; k < 3; ++k) {
            si_tables[s].push_back(oracle::random_machine(rng, 2, s, false, 2));
            si_counters[s].push_back(oracle::random_machine(rng, 2, s, false, 2));
        }
    Seq y;
    for (std::size_t n = 1; n <= 8; ++n)
        for (std::uint32_t ymask = 0; ymask < (1u << n); ++ymask) {
            fill(y, ymask, n);
            const auto ys = oracle::seq(y);
            std::vector<std::vector<std::vector<std::uint64_t>>> sizes(5);
            for (std::size_t s = 1; s <= 4; ++s)
                for (const auto& g : si_counters[s]) sizes[s].push_back(class_sizes(g, n, &y));
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                fill(x, mask, n);
                const auto xs = oracle::seq(x);
                for (std::size_t s = 1; s <= 4; ++s) {
                    auto where = [&] { return bits(x) + " y=" + bits(y) + " s=" + std::to_string(s); };
                    const double lz = si_lz_bound(xs, ys, s).clamped;
                    std::vector<double> block;
                    for (std::size_t l = 1; l <= 4; ++l)
                        if (n % l == 0) block.push_back(si_block_bound(xs, ys, s, l).clamped);
                    for (const auto& g : si_tables[s]) {
                        const double rate = log2_rate(brute_output_count(oracle::tight_machine(g, x, &y), n, &y), n);
                        t["si-lz"].add(lz, rate, where);
                    }
                    for (const auto& sz : sizes[s]) {
                        const double rate = log2_rate(sz[mask], n);
                        for (double b : block) t["si-block"].add(b, rate, where);
                    }
                }
            }
        }
    return summarize(t);
}

// 4. Chain inequality on cyclic counts.
Outcome chain_inequality() {
    std::mt19937_64 rng(4);
    std::vector<FsmSpec> machines;
    for (int i = 0; i < 200; ++i) machines.push_back(oracle::random_machine(rng, 2, 1 + i % 4));
    Tally t;
    Seq x;
    for (std::size_t n = 1; n <= 10; ++n)
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            fill(x, mask, n);
            const auto xs = oracle::seq(x);
            double markov[7];
            for (std::size_t l = 0; l <= 6; ++l) markov[l] = oracle::markov_entropy(x, l);
            for (const auto& g : machines) {
                const double h = cond_entropy(collect_counts(g, xs, std::nullopt, true));
                const double log_s = std::log2(static_cast<double>(g.state_count()));
                for (std::size_t l = 1; l <= 6; ++l)
                    t.add(markov[l] - log_s / static_cast<double>(l + 1), h,
                          [&] { return bits(x) + " l=" + std::to_string(l); });
            }
        }
    return summarize({{"chain", t}});
}

// 5. Type-class size lower bound; exact sizes against enumeration.
Outcome type_size_bound() {
    std::mt19937_64 rng(5);
    Outcome o;
    std::uint64_t classes = 0, checked = 0, mismatches = 0, violations = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 20; ++trial) {
        const FsmSpec g = oracle::random_machine(rng, 2, 2);
        for (std::size_t n = 1; n <= 12; ++n)
            for (const auto& [key, members] : oracle::classes(TypeClassKind::symbol_state, g, 1, 2, n)) {
                ++classes;
                const auto x = oracle::seq(members.front());
                const TypeClassDescriptor desc = describe(ClassSpec{TypeClassKind::symbol_state, g, 1}, x);
                const BigInt dp = type_class_size_exact(desc, CountingBackend::dp);
                const BigInt trail = type_class_size_exact(desc, CountingBackend::trail);
                if (dp != members.size() || trail != members.size()) {
                    ++mismatches;
                    o.pass = false;
                }
                bool all_positive = key.size() == 4;
                for (const auto& [k, c] : key) all_positive = all_positive && c >= 1;
                if (!all_positive) continue;
                ++checked;
                const double nd = static_cast<double>(n);
                const double lhs = nd * oracle::conditional_entropy(key) - std::log2(2 * std::numbers::pi * nd);
                const double rhs = std::log2(static_cast<double>(members.size()));
                worst = std::max(worst, lhs - rhs);
                const SizeLowerBound lb = type_class_size_lower_bound(collect_counts(g, x));
                if (lhs > rhs + 1e-9 || std::abs(lb.log2_value - lhs) > 1e-9 || !lb.condition_met) {
                    ++violations;
                    o.pass = false;
                }
            }
    }
    o.detail = std::to_string(classes) + " classes (dp/trail vs enumeration mismatches " + std::to_string(mismatches) +
               "), " + std::to_string(checked) + " with all n(x,z) >= 1, violations " + std::to_string(violations) +
               ", worst lhs - log2|T| " + fmt(worst, 4);
    return o;
}

// 6. Codec laws.
Outcome codec_laws() {
    std::mt19937_64 rng(6);
    std::bernoulli_distribution coin(0.5);
    Outcome o;
    std::uint64_t ranked = 0, two_part = 0, lz = 0, schemes = 0, randomized = 0, failures = 0;
    std::string first;
    auto fail = [&](const std::string& what) {
        if (failures++ == 0) first = what;
        o.pass = false;
    };

    // rank/unrank and two-part roundtrip, every x with n <= 12
    for (std::size_t n = 1; n <= 12; ++n) {
        struct Kind {
            ClassSpec spec;
            FsmSpec oracle_fsm;
            std::optional<Seq> y;
        };
        std::vector<Kind> kinds;
        kinds.push_back({ClassSpec{}, single_state_fsm(2), std::nullopt});
        const FsmSpec g2 = oracle::random_machine(rng, 2, 2);
        kinds.push_back({ClassSpec{TypeClassKind::symbol_state, g2, 1}, g2, std::nullopt});
        const FsmSpec sr = build_shift_register_fsm(1, 2);
        kinds.push_back({ClassSpec{TypeClassKind::symbol_state, sr, 1}, sr, std::nullopt});
        for (std::size_t l : {1, 2}) kinds.push_back({ClassSpec{TypeClassKind::markov, std::nullopt, l}, single_state_fsm(2), std::nullopt});
        for (std::size_t l : {2, 3, 4})
            if (n % l == 0) kinds.push_back({ClassSpec{TypeClassKind::block, std::nullopt, l}, single_state_fsm(2), std::nullopt});
        for (int k = 0; k < 2; ++k) {
            Seq y(n);
            for (auto& v : y) v = coin(rng);
            const FsmSpec si = oracle::random_machine(rng, 2, 2, false, 2);
            kinds.push_back({ClassSpec{TypeClassKind::si_symbol_state, si, 1}, si, y});
            if (n % 2 == 0) kinds.push_back({ClassSpec{TypeClassKind::si_block, si, 2}, si, y});
        }
        for (const auto& k : kinds) {
            const Seq* yp = k.y ? &*k.y : nullptr;
            std::optional<SymbolSequence> ys;
            if (k.y) ys = oracle::seq(*k.y);
            for (const auto& [key, members] : oracle::classes(k.spec.kind, k.oracle_fsm, k.spec.order, 2, n, yp)) {
                ClassEnumerator e(describe(k.spec, oracle::seq(members.front()), ys));
                if (e.size() != members.size()) fail(std::string("class size ") + to_string(k.spec.kind));
                for (std::size_t i = 0; i < members.size(); ++i) {
                    const auto x = oracle::seq(members[i]);
                    ++ranked;
                    if (e.rank(x) != i || e.unrank(i) != x) fail("rank " + x.to_string());
                    ++two_part;
                    const TwoPartCodeword cw = two_part_encode(k.spec, x, ys);
                    const BitString b = cw.bits();
                    if (b.size() != cw.declared_length() || two_part_decode(k.spec, x.alphabet(), n, b, ys) != x)
                        fail("two-part " + x.to_string());
                }
            }
        }
    }

    // LZ78 and every scheme, every x with n <= 8
    auto scheme_specs = [&](std::size_t n) {
        std::vector<SchemeSpec> specs;
        for (auto s : {Scheme::raw_otp, Scheme::lz78_otp, Scheme::type_otp, Scheme::markov_type_otp, Scheme::condlz_otp}) {
            SchemeSpec spec;
            spec.scheme = s;
            specs.push_back(spec);
        }
        SchemeSpec sr;
        sr.scheme = Scheme::type_otp;
        sr.fsm = build_shift_register_fsm(1, 2);
        specs.push_back(sr);
        SchemeSpec si;
        si.scheme = Scheme::type_otp;
        si.side_info = true;
        specs.push_back(si);
        if (n % 2 == 0) {
            SchemeSpec block;
            block.scheme = Scheme::block_type_otp;
            block.order = 2;
            specs.push_back(block);
        }
        return specs;
    };
    auto roundtrip = [&](const SchemeSpec& spec, const SymbolSequence& x, const SymbolSequence& y, const Key& k) {
        const std::optional<SymbolSequence> yo = spec.needs_side_info() ? std::optional(y) : std::nullopt;
        const Cryptogram w = encrypt(spec, x, yo, k);
        std::stringstream file;
        write_cryptogram(file, w);
        return decrypt(spec, read_cryptogram(file), x.alphabet(), yo, k) == x;
    };
    Seq x, y;
    for (std::size_t n = 1; n <= 8; ++n) {
        const auto specs = scheme_specs(n);
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            fill(x, mask, n);
            const auto xs = oracle::seq(x);
            ++lz;
            if (lz78_decode(lz78_encode(xs), xs.alphabet()) != xs) fail("lz78 " + xs.to_string());
            y.resize(n);
            for (auto& v : y) v = coin(rng);
            const auto ys = oracle::seq(y);
            for (const auto& spec : specs) {
                const KeySpace ks = key_space(spec, xs, spec.needs_side_info() ? std::optional(ys) : std::nullopt);
                for (const Key& k : {ks.at(0), ks.at(ks.size() - 1), ks.draw(rng)}) {
                    ++schemes;
                    if (!roundtrip(spec, xs, ys, k)) fail(std::string(to_string(spec.scheme)) + " " + xs.to_string());
                }
            }
        }
    }

    // 10^4 randomized cases at n = 1024, cycling through the codecs
    const std::size_t n = 1024;
    const auto specs = scheme_specs(n);
    std::uniform_real_distribution<double> bias(0.02, 0.98);
    for (int i = 0; i < 10000; ++i) {
        std::bernoulli_distribution b(bias(rng));
        x.resize(n);
        y.resize(n);
        for (auto& v : x) v = b(rng);
        for (auto& v : y) v = coin(rng);
        const auto xs = oracle::seq(x), ys = oracle::seq(y);
        ++randomized;
        const std::size_t pick = static_cast<std::size_t>(i) % (specs.size() + 1);
        if (pick == specs.size()) {
            if (lz78_decode(lz78_encode(xs), xs.alphabet()) != xs) fail("lz78 random case " + std::to_string(i));
            continue;
        }
        const SchemeSpec& spec = specs[pick];
        const KeySpace ks = key_space(spec, xs, spec.needs_side_info() ? std::optional(ys) : std::nullopt);
        if (!roundtrip(spec, xs, ys, ks.draw(rng))) fail("random case " + std::to_string(i));
    }
    o.detail = "rank/unrank " + std::to_string(ranked) + ", two-part " + std::to_string(two_part) + ", lz78 " +
               std::to_string(lz) + ", scheme roundtrips " + std::to_string(schemes) + ", randomized n=1024 " +
               std::to_string(randomized) + ", failures " + std::to_string(failures) + (first.empty() ? "" : " [" + first + "]");
    return o;
}

// 7. TYPE-OTP preimages are exactly the type class.
Outcome type_otp_secrecy() {
    Outcome o;
    std::uint64_t pairs = 0, failures = 0;
    std::string first;
    for (const FsmSpec& g : {single_state_fsm(2), build_shift_register_fsm(1, 2)}) {
        SchemeSpec spec;
        spec.scheme = Scheme::type_otp;
        spec.fsm = g;
        for (std::size_t n = 1; n <= 8; ++n)
            for (const auto& [key, members] : oracle::classes(TypeClassKind::symbol_state, g, 1, 2, n)) {
                std::set<SymbolSequence> cls;
                for (const auto& m : members) cls.insert(oracle::seq(m));
                for (const auto& m : members) {
                    const auto x = oracle::seq(m);
                    const KeySpace ks = key_space(spec, x);
                    for (BigInt k = 0; k < ks.size(); ++k) {
                        ++pairs;
                        const Cryptogram w = encrypt(spec, x, std::nullopt, Key{k});
                        const PreimageSet pre = preimage_set(spec, w, x.alphabet());
                        if (pre.members != cls || pre.undecodable != 0) {
                            if (failures++ == 0) first = x.to_string() + " key " + k.get_str();
                            o.pass = false;
                        }
                    }
                }
            }
    }
    o.detail = std::to_string(pairs) + " (x, key) pairs, " + std::to_string(failures) + " preimage sets differ from the class" +
               (first.empty() ? "" : " [" + first + "]");
    return o;
}

// 8. Achievability gaps at n = 2^6 .. 2^12.
Outcome achievability() {
    Outcome o;
    std::ostringstream s;
    const FsmSpec g = build_shift_register_fsm(1, 2);
    SchemeSpec type;
    type.scheme = Scheme::type_otp;
    type.fsm = g;
    SchemeSpec lz;
    lz.scheme = Scheme::lz78_otp;
    const double sa = static_cast<double>(g.state_count());
    std::mt19937_64 rng(8);
    std::bernoulli_distribution coin(0.5);
    for (const std::string name : {"(0110)^k", "pseudorandom"}) {
        double last_type = std::numeric_limits<double>::infinity(), last_lz = last_type;
        s << " " << name << ":";
        for (std::size_t n : {64, 256, 1024, 4096}) {
            std::vector<Symbol> xs(n);
            for (std::size_t i = 0; i < n; ++i) xs[i] = name == "pseudorandom" ? coin(rng) : (i % 4 == 1 || i % 4 == 2);
            const SymbolSequence x(Alphabet::numeric(2), xs);
            const double nd = static_cast<double>(n);
            const double type_gap = key_rate(type, x) - fsm_counter_bound(x, g).raw;
            const double limit = 2 * (sa / 2 + 1) * std::log2(nd) / nd + 8 / nd;
            const double lz_gap = key_rate(lz, x) - ziv_bound(x, 2).clamped;
            if (!(type_gap < last_type) || type_gap > limit || !(lz_gap > 0) || !(lz_gap < last_lz)) o.pass = false;
            s << " n=" << n << " type " << fmt(type_gap, 4) << "<=" << fmt(limit, 4) << " lz " << fmt(lz_gap, 4);
            last_type = type_gap;
            last_lz = lz_gap;
        }
    }
    o.detail = s.str().substr(1);
    return o;
}

// 9. Conditional LZ.
Outcome conditional_lz() {
    Outcome o;
    const JointParseResult jp = joint_parse(SymbolSequence::binary("0101"), SymbolSequence::binary("0011"));
    const double u = conditional_lz_length(jp);
    if (jp.c_xy != 4 || jp.c_y != 2 || u != 4.0) o.pass = false;
    std::uint64_t checked = 0, nonzero = 0;
    Seq x;
    for (std::size_t n = 1; n <= 10; ++n)
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            fill(x, mask, n);
            const auto xs = oracle::seq(x);
            ++checked;
            if (conditional_lz_length(joint_parse(xs, xs)) != 0.0) ++nonzero;
        }
    if (nonzero) o.pass = false;
    o.detail = "c(x,y)=" + std::to_string(jp.c_xy) + " c(y)=" + std::to_string(jp.c_y) + " u(x|y)=" + fmt(u) +
               "; u(x|x)=0 on " + std::to_string(checked - nonzero) + "/" + std::to_string(checked);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 (0,2) key-list scenario", key_list_scenario},
        {"2 (d,k) machinery", dk_machinery},
        {"3 soundness suite", soundness},
        {"4 chain inequality", chain_inequality},
        {"5 type-size lower bound", type_size_bound},
        {"6 codec laws", codec_laws},
        {"7 TYPE-OTP perfect secrecy", type_otp_secrecy},
        {"8 achievability gap trend", achievability},
        {"9 conditional LZ", conditional_lz},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << " (" << fmt(secs, 3) << " s): " << o.detail
                  << std::endl;
        failed += o.pass ? 0 : 1;
    }
    std::cout << (failed ? "FAILED " + std::to_string(failed) + " of 9" : std::string("ALL 9 PASSED")) << std::endl;
    return failed ? 1 : 0;
}
