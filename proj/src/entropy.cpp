#include "secrecy/entropy.hpp"

#include <cmath>
#include <map>
#include <string>

#include "secrecy/errors.hpp"

namespace secrecy {

EmpiricalLaw EmpiricalLaw::from(const CountTable& table) {
    EmpiricalLaw law;
    law.normalizer = table.total();
    law.p.assign(table.counts.size(), 0.0);
    if (law.normalizer == 0) return law;
    for (std::size_t i = 0; i < table.counts.size(); ++i)
        law.p[i] = static_cast<double>(table.counts[i]) / static_cast<double>(law.normalizer);
    return law;
}

double entropy_of_counts(std::span<const std::uint64_t> counts) {
    std::uint64_t total = 0;
    for (const auto c : counts) total += c;
    if (total == 0) return 0.0;
    // H = log2 N - (1/N) sum c log2 c keeps the terms exact for integer counts.
    const double n = static_cast<double>(total);
    double acc = 0;
    for (const auto c : counts)
        if (c > 0) acc += static_cast<double>(c) * std::log2(static_cast<double>(c));
    const double h = std::log2(n) - acc / n;
    return h < 0 ? 0.0 : h;
}

namespace {

// Entropy of the labels given the contexts: rows of width `row` hold one
// context each.
double conditional_rows(const std::vector<std::uint64_t>& counts, std::size_t row) {
    std::uint64_t total = 0;
    double acc = 0;
    for (std::size_t start = 0; start < counts.size(); start += row) {
        std::uint64_t rsum = 0;
        for (std::size_t j = 0; j < row; ++j) {
            const auto c = counts[start + j];
            rsum += c;
            if (c > 0) acc -= static_cast<double>(c) * std::log2(static_cast<double>(c));
        }
        if (rsum > 0) acc += static_cast<double>(rsum) * std::log2(static_cast<double>(rsum));
        total += rsum;
    }
    if (total == 0) return 0.0;
    const double h = acc / static_cast<double>(total);
    return h < 0 ? 0.0 : h;
}

}  // namespace

double cond_entropy(const CountTable& counts) {
    if (counts.counts.empty() || counts.total() == 0) throw ValidationError("conditional entropy of an empty table");
    return conditional_rows(counts.counts, counts.label_count());
}

double block_joint_entropy(const CountTable& counts) {
    if (!counts.is_block()) throw ValidationError("joint block entropy needs a block table");
    return entropy_of_counts(counts.counts);
}

double mutual_information(const CountTable& counts) {
    if (counts.kind != CountKind::symbol_state) throw ValidationError("mutual information needs a symbol-state table");
    const auto marginal = counts.symbol_marginal();
    const double mi = entropy_of_counts(marginal) - cond_entropy(counts);
    return mi < 0 ? 0.0 : mi;
}

double markov_cond_entropy(const SymbolSequence& x, std::size_t order) {
    const std::size_t n = x.size();
    if (n == 0) return 0.0;
    const auto xs = x.symbols();
    std::map<std::vector<Symbol>, std::map<Symbol, std::uint64_t>> table;
    std::vector<Symbol> ctx(order);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < order; ++j) {
            // position i - order + j, wrapped into [0, n)
            const std::size_t back = order - j;
            ctx[j] = xs[(i + n * (back / n + 1) - back) % n];
        }
        ++table[ctx][xs[i]];
    }
    double acc = 0;
    for (const auto& [c, row] : table) {
        std::uint64_t rsum = 0;
        for (const auto& [sym, v] : row) {
            rsum += v;
            acc -= static_cast<double>(v) * std::log2(static_cast<double>(v));
        }
        acc += static_cast<double>(rsum) * std::log2(static_cast<double>(rsum));
    }
    const double h = acc / static_cast<double>(n);
    return h < 0 ? 0.0 : h;
}

namespace {

void require_divides(std::size_t n, std::size_t l) {
    if (l == 0) throw ValidationError("block length must be positive");
    if (n % l != 0)
        throw ValidationError("block length " + std::to_string(l) + " does not divide n = " + std::to_string(n));
}

std::vector<Symbol> block_at(std::span<const Symbol> s, std::size_t start, std::size_t l) {
    return {s.begin() + static_cast<std::ptrdiff_t>(start), s.begin() + static_cast<std::ptrdiff_t>(start + l)};
}

template <typename Key>
double entropy_of_map(const std::map<Key, std::uint64_t>& m) {
    std::vector<std::uint64_t> v;
    v.reserve(m.size());
    for (const auto& [k, c] : m) v.push_back(c);
    return entropy_of_counts(v);
}

}  // namespace

double block_entropy(const SymbolSequence& x, std::size_t block_length) {
    require_divides(x.size(), block_length);
    std::map<std::vector<Symbol>, std::uint64_t> blocks;
    for (std::size_t i = 0; i < x.size(); i += block_length) ++blocks[block_at(x.symbols(), i, block_length)];
    return entropy_of_map(blocks) / static_cast<double>(block_length);
}

double conditional_block_entropy(const SymbolSequence& x, const SymbolSequence& y, std::size_t block_length) {
    if (x.size() != y.size()) throw ValidationError("side information length differs from sequence length");
    require_divides(x.size(), block_length);
    std::map<std::pair<std::vector<Symbol>, std::vector<Symbol>>, std::uint64_t> joint;
    std::map<std::vector<Symbol>, std::uint64_t> ys;
    for (std::size_t i = 0; i < x.size(); i += block_length) {
        auto yb = block_at(y.symbols(), i, block_length);
        ++joint[{block_at(x.symbols(), i, block_length), yb}];
        ++ys[yb];
    }
    const double h = (entropy_of_map(joint) - entropy_of_map(ys)) / static_cast<double>(block_length);
    return h < 0 ? 0.0 : h;
}

}  // namespace secrecy
