#pragma once

// Brute-force reference computations used by the tests. Nothing here calls the
// library's counting, parsing or entropy code; machines are read only through
// FsmSpec::next / FsmSpec::output.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "secrecy/fsm.hpp"
#include "secrecy/sequence.hpp"
#include "secrecy/type_class.hpp"

namespace oracle {

using secrecy::FsmSpec;
using secrecy::State;
using secrecy::Symbol;
using Seq = std::vector<Symbol>;

inline std::vector<Seq> all_sequences(std::size_t alpha, std::size_t n) {
    std::vector<Seq> out;
    Seq s(n, 0);
    while (true) {
        out.push_back(s);
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++s[i] < alpha) break;
            s[i] = 0;
            if (i == 0) return out;
        }
        if (n == 0) return out;
    }
}

inline secrecy::SymbolSequence seq(const Seq& s, std::size_t alpha = 2) {
    return secrecy::SymbolSequence(secrecy::Alphabet::numeric(alpha), s);
}

// Random time-invariant machine; `beta` > 0 makes it read side information,
// `period` > 1 makes it periodically time-varying.
inline FsmSpec random_machine(std::mt19937_64& rng, std::size_t alpha, std::size_t states, bool with_output = false,
                              std::size_t beta = 0, std::size_t period = 1, double reject_rate = 0.3) {
    const std::size_t b1 = beta == 0 ? 1 : beta;
    std::uniform_int_distribution<State> pick(0, static_cast<State>(states - 1));
    std::vector<State> next(period * states * alpha * b1);
    for (auto& z : next) z = pick(rng);
    std::optional<std::vector<std::uint8_t>> output;
    if (with_output) {
        std::bernoulli_distribution bad(reject_rate);
        output.emplace(states * alpha * b1);
        for (auto& u : *output) u = bad(rng) ? 1 : 0;
    }
    std::optional<secrecy::Alphabet> si;
    if (beta > 0) si = secrecy::Alphabet::numeric(beta);
    return FsmSpec(secrecy::Alphabet::numeric(alpha), states, 0, period, si, std::move(next), std::move(output));
}

// Same transitions as `fsm`, output 0 exactly on the (z, x, y) triples that x
// (with y) visits: the smallest acceptance set this next-state table allows.
inline FsmSpec tight_machine(const FsmSpec& fsm, const Seq& x, const Seq* y = nullptr) {
    const std::size_t b1 = fsm.has_side_info() ? fsm.si_alphabet_size() : 1;
    std::vector<std::uint8_t> out(fsm.state_count() * fsm.alphabet_size() * b1, 1);
    State z = fsm.initial_state();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Symbol yi = y ? (*y)[i] : 0;
        out[(z * fsm.alphabet_size() + x[i]) * b1 + yi] = 0;
        z = fsm.next(z, x[i], yi, i % fsm.period());
    }
    return FsmSpec(fsm.alphabet(), fsm.state_count(), fsm.initial_state(), fsm.period(), fsm.si_alphabet(),
                   fsm.next_table(), out);
}

inline bool accepted(const FsmSpec& fsm, const Seq& x, const Seq* y = nullptr) {
    State z = fsm.initial_state();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Symbol yi = y ? (*y)[i] : 0;
        if (fsm.output(z, x[i], yi)) return false;
        z = fsm.next(z, x[i], yi, i % fsm.period());
    }
    return true;
}

inline std::uint64_t acceptance_count(const FsmSpec& fsm, std::size_t n, const Seq* y = nullptr) {
    std::uint64_t count = 0;
    for (const auto& x : all_sequences(fsm.alphabet_size(), n)) count += accepted(fsm, x, y) ? 1 : 0;
    return count;
}

// Counts n(phase, z, y, x) along the trace from the initial state, as a map.
inline std::map<std::vector<std::size_t>, std::uint64_t> trace_counts(const FsmSpec& fsm, const Seq& x,
                                                                      const Seq* y = nullptr) {
    std::map<std::vector<std::size_t>, std::uint64_t> out;
    State z = fsm.initial_state();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Symbol yi = y ? (*y)[i] : 0;
        const std::size_t phase = i % fsm.period();
        ++out[{phase, z, yi, x[i]}];
        z = fsm.next(z, x[i], yi, phase);
    }
    return out;
}

// Cyclic (l+1)-gram counts.
inline std::map<Seq, std::uint64_t> cyclic_grams(const Seq& x, std::size_t l) {
    std::map<Seq, std::uint64_t> out;
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        Seq g;
        for (std::size_t j = 0; j <= l; ++j) g.push_back(x[(i + n - l + j) % n]);
        ++out[g];
    }
    return out;
}

// Non-overlapping blocks of length l paired with the machine state before and
// after each block.
inline std::map<std::vector<std::size_t>, std::uint64_t> block_counts(const FsmSpec& fsm, const Seq& x, std::size_t l,
                                                                      const Seq* y = nullptr) {
    std::map<std::vector<std::size_t>, std::uint64_t> out;
    State z = fsm.initial_state();
    for (std::size_t b = 0; b * l < x.size(); ++b) {
        std::vector<std::size_t> key{z};
        for (std::size_t j = 0; j < l; ++j) {
            const std::size_t i = b * l + j;
            const Symbol yi = y ? (*y)[i] : 0;
            key.push_back(x[i]);
            key.push_back(yi);
            z = fsm.next(z, x[i], yi, i % fsm.period());
        }
        key.push_back(z);
        ++out[key];
    }
    return out;
}

// Entropy in bits of a list of counts.
template <typename Counts>
double entropy(const Counts& counts) {
    double total = 0;
    for (const auto c : counts) total += static_cast<double>(c);
    if (total == 0) return 0;
    double h = 0;
    for (const auto c : counts)
        if (c > 0) h -= static_cast<double>(c) / total * std::log2(static_cast<double>(c) / total);
    return h;
}

// H(last | rest) for keys whose last entry is the predicted symbol.
template <typename Key>
double conditional_entropy(const std::map<Key, std::uint64_t>& joint) {
    std::map<Key, std::uint64_t> ctx;
    std::vector<std::uint64_t> all;
    for (const auto& [k, c] : joint) {
        Key head(k.begin(), k.end() - 1);
        ctx[head] += c;
        all.push_back(c);
    }
    std::vector<std::uint64_t> marg;
    for (const auto& [k, c] : ctx) marg.push_back(c);
    return entropy(all) - entropy(marg);
}

using Key = std::map<std::vector<std::size_t>, std::uint64_t>;

// The statistic that defines a type class of the given kind, computed from
// scratch. Two sequences share a class iff their keys are equal.
inline Key class_key(secrecy::TypeClassKind kind, const FsmSpec& fsm, std::size_t order, const Seq& x,
                     const Seq* y = nullptr) {
    using K = secrecy::TypeClassKind;
    switch (kind) {
        case K::symbol_state: return trace_counts(fsm, x);
        case K::si_symbol_state: return trace_counts(fsm, x, y);
        case K::block: return block_counts(fsm, x, order);
        case K::si_block: return block_counts(fsm, x, order, y);
        case K::markov: {
            Key out;
            for (const auto& [g, c] : cyclic_grams(x, order)) out[std::vector<std::size_t>(g.begin(), g.end())] = c;
            return out;
        }
    }
    return {};
}

// Members of every class of length-n sequences, in lexicographic order.
inline std::map<Key, std::vector<Seq>> classes(secrecy::TypeClassKind kind, const FsmSpec& fsm, std::size_t order,
                                               std::size_t alpha, std::size_t n, const Seq* y = nullptr) {
    std::map<Key, std::vector<Seq>> out;
    for (const auto& x : all_sequences(alpha, n)) out[class_key(kind, fsm, order, x, y)].push_back(x);
    return out;
}

inline double markov_entropy(const Seq& x, std::size_t l) { return conditional_entropy(cyclic_grams(x, l)); }

// Greedy incremental parse spelled out with a set of strings.
struct Lz78 {
    std::vector<Seq> phrases;
    bool last_incomplete = false;
};

inline Lz78 lz78(const Seq& x) {
    Lz78 out;
    std::set<Seq> dict;
    Seq cur;
    for (const auto s : x) {
        cur.push_back(s);
        if (!dict.count(cur)) {
            dict.insert(cur);
            out.phrases.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) {
        out.phrases.push_back(cur);
        out.last_incomplete = true;
    }
    return out;
}

inline std::size_t ceil_log2(std::uint64_t v) {
    std::size_t w = 0;
    while ((std::uint64_t{1} << w) < v) ++w;
    return w;
}

// Code length of the pointer-plus-symbol encoding with an end flag.
inline std::size_t lz78_bits(const Seq& x, std::size_t alpha) {
    const Lz78 p = lz78(x);
    const std::size_t w = std::max<std::size_t>(1, ceil_log2(alpha));
    std::size_t bits = 0;
    const std::size_t complete = p.phrases.size() - (p.last_incomplete ? 1 : 0);
    for (std::size_t j = 0; j < complete; ++j) bits += ceil_log2(j + 1) + w;
    bits += 1;
    if (p.last_incomplete) bits += ceil_log2(complete + 1);
    return bits;
}

// Zero runs at most k long, and at least d long between two ones.
inline bool dk_ok(const Seq& x, std::size_t d, std::size_t k) {
    std::size_t run = 0;
    bool seen_one = false;
    for (const auto s : x) {
        if (s == 0) {
            if (++run > k) return false;
        } else {
            if (seen_one && run < d) return false;
            seen_one = true;
            run = 0;
        }
    }
    return true;
}

// log2 of the spectral radius of the run-length graph, by power iteration.
inline double dk_capacity(std::size_t d, std::size_t k) {
    const std::size_t m = k + 1;
    std::vector<double> v(m, 1.0);
    double lambda = 0;
    for (int it = 0; it < 20000; ++it) {
        std::vector<double> w(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            if (i + 1 < m) w[i + 1] += v[i];
            if (i >= d) w[0] += v[i];
        }
        double norm = 0;
        for (const auto e : w) norm = std::max(norm, e);
        if (norm == 0) return -INFINITY;
        for (auto& e : w) e /= norm;
        lambda = norm;
        v = w;
    }
    return std::log2(lambda);
}

inline double log2_multinomial(const std::vector<std::uint64_t>& parts) {
    std::uint64_t total = 0;
    double out = 0;
    for (const auto p : parts) {
        for (std::uint64_t i = 1; i <= p; ++i) out -= std::log2(static_cast<double>(i));
        total += p;
    }
    for (std::uint64_t i = 1; i <= total; ++i) out += std::log2(static_cast<double>(i));
    return out;
}

}  // namespace oracle
