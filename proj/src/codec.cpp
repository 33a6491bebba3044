#include "secrecy/codec.hpp"

#include <cmath>
#include <map>

#include "secrecy/entropy.hpp"
#include "secrecy/errors.hpp"

namespace secrecy {

BigInt rank_in_type_class(const TypeClassDescriptor& desc, const SymbolSequence& x) {
    ClassEnumerator e(desc);
    return e.rank(x);
}

SymbolSequence unrank_in_type_class(const TypeClassDescriptor& desc, const BigInt& rank) {
    ClassEnumerator e(desc);
    return e.unrank(rank);
}

std::size_t header_count_width(std::size_t n) { return index_width(std::uint64_t{n} + 1); }

BitString encode_header(const CountTable& counts, std::size_t n) {
    const std::size_t w = header_count_width(n);
    BitString out;
    for (std::size_t i = 0; i + 1 < counts.counts.size(); ++i) out.append_uint(counts.counts[i], w);
    return out;
}

CountTable decode_header(BitReader& in, CountTable shape, std::size_t n, std::uint64_t total) {
    const std::size_t w = header_count_width(n);
    std::uint64_t sum = 0;
    auto& c = shape.counts;
    if (c.empty()) throw IntegrityError("empty count table");
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        c[i] = in.read_uint(w);
        sum += c[i];
        if (sum > total) throw IntegrityError("header counts exceed the number of counted items");
    }
    c.back() = total - sum;
    return shape;
}

BitString TwoPartCodeword::bits() const {
    BitString out = header;
    out.append_big(payload_rank, payload_bits);
    return out;
}

TwoPartCodeword two_part_encode(const ClassSpec& spec, const SymbolSequence& x, const std::optional<SymbolSequence>& y) {
    const TypeClassDescriptor desc = describe(spec, x, y);
    ClassEnumerator e(desc);
    TwoPartCodeword cw;
    cw.n = x.size();
    cw.header = encode_header(desc.counts, cw.n);
    cw.payload_rank = e.rank(x);
    cw.payload_bits = index_width(e.size());
    return cw;
}

SymbolSequence two_part_decode(const ClassSpec& spec, const Alphabet& alphabet, std::size_t n, const BitString& bits,
                               const std::optional<SymbolSequence>& y) {
    BitReader in(bits);
    const CountTable counts =
        decode_header(in, empty_counts(spec, alphabet, n, y), n, counted_items(spec, n));
    const TypeClassDescriptor desc = describe_counts(spec, alphabet, n, counts, y);
    ClassEnumerator e(desc);
    const BigInt size = e.size();
    if (size == 0) throw IntegrityError("header describes an empty type class");
    const BigInt rank = in.read_big(index_width(size));
    if (rank >= size) throw IntegrityError("payload rank exceeds the type-class size");
    if (in.remaining() != 0) throw IntegrityError("codeword has trailing bits");
    return e.unrank(rank);
}

SymbolSequence two_part_decode(const ClassSpec& spec, const Alphabet& alphabet, const TwoPartCodeword& cw,
                               const std::optional<SymbolSequence>& y) {
    return two_part_decode(spec, alphabet, cw.n, cw.bits(), y);
}

namespace {

// Entropy of the whole table minus the entropy of the groups named by `key`.
template <typename Key>
double grouped_entropy(const CountTable& t, Key&& key) {
    std::map<std::size_t, std::uint64_t> groups;
    for (std::size_t i = 0; i < t.counts.size(); ++i) groups[key(i)] += t.counts[i];
    std::vector<std::uint64_t> g;
    for (const auto& [k, v] : groups) g.push_back(v);
    const double h = entropy_of_counts(t.counts) - entropy_of_counts(g);
    return h < 0 ? 0.0 : h;
}

}  // namespace

double two_part_length_estimate(const SymbolSequence& x, const ClassSpec& spec, const std::optional<SymbolSequence>& y) {
    const std::size_t n = x.size();
    if (n == 0) return 0.0;
    const TypeClassDescriptor desc = describe(spec, x, y);
    const CountTable& t = desc.counts;
    const double alpha = static_cast<double>(x.alphabet_size());
    const double s = static_cast<double>(desc.fsm.state_count());
    const double nd = static_cast<double>(n);
    switch (spec.kind) {
        case TypeClassKind::symbol_state: return nd * cond_entropy(t) + s * (alpha - 1) / 2 * std::log2(nd);
        case TypeClassKind::si_symbol_state: {
            const double beta = static_cast<double>(y->alphabet_size());
            return nd * cond_entropy(t) + s * beta * (alpha - 1) / 2 * std::log2(nd);
        }
        case TypeClassKind::markov: {
            const double contexts = spec.order == 0 ? 1.0 : std::pow(alpha, static_cast<double>(spec.order) - 1);
            return nd * markov_cond_entropy(x, spec.order) + contexts * (alpha - 1) / 2 * std::log2(nd);
        }
        case TypeClassKind::block:
        case TypeClassKind::si_block: {
            const double l = static_cast<double>(spec.order);
            const double m = nd / l;
            const double labels = std::pow(alpha, l);
            const std::size_t per_state = t.counts.size() / t.states;
            if (spec.kind == TypeClassKind::block) {
                const double h = grouped_entropy(t, [&](std::size_t i) { return i / per_state; });
                return m * h + s * (labels - 1) / 2 * std::log2(m);
            }
            const double contexts = std::pow(static_cast<double>(y->alphabet_size()), l);
            const std::size_t lab = t.label_count(), ctx = t.context_count();
            const double h = grouped_entropy(t, [&](std::size_t i) {
                return (i / per_state) * ctx + (i / lab) % ctx;
            });
            return m * h + s * contexts * (labels - 1) / 2 * std::log2(m);
        }
    }
    return 0.0;
}

}  // namespace secrecy
