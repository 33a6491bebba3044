#include "secrecy/lz.hpp"

#include <algorithm>
#include <cmath>

#include "secrecy/errors.hpp"

namespace secrecy {

std::optional<std::size_t> PhraseTrie::child(std::size_t node, Symbol s) const {
    const auto& kids = nodes_[node].children;
    const auto it = kids.find(s);
    if (it == kids.end()) return std::nullopt;
    return it->second;
}

std::size_t PhraseTrie::add(std::size_t parent, Symbol s) {
    const std::size_t id = nodes_.size();
    Node node;
    node.parent = parent;
    node.symbol = s;
    node.depth = nodes_[parent].depth + 1;
    nodes_.push_back(std::move(node));
    nodes_[parent].children.emplace(s, id);
    return id;
}

std::vector<Symbol> PhraseTrie::spell(std::size_t node) const {
    std::vector<Symbol> out(nodes_[node].depth);
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = nodes_[node].symbol;
        node = nodes_[node].parent;
    }
    return out;
}

ParseResult lz78_parse(std::span<const Symbol> x) {
    ParseResult result;
    std::size_t pos = 0;
    while (pos < x.size()) {
        std::size_t node = 0;
        std::size_t len = 0;
        while (pos + len < x.size()) {
            const auto next = result.dictionary.child(node, x[pos + len]);
            if (!next) break;
            node = *next;
            ++len;
        }
        Phrase phrase;
        phrase.start = pos;
        if (pos + len == x.size()) {
            // Input ran out inside an existing phrase.
            phrase.length = len;
            phrase.node = node;
            phrase.parent = result.dictionary.parent(node);
            phrase.last = x[pos + len - 1];
            result.phrases.push_back(phrase);
            result.last_incomplete = true;
            break;
        }
        phrase.length = len + 1;
        phrase.parent = node;
        phrase.last = x[pos + len];
        phrase.node = result.dictionary.add(node, phrase.last);
        result.phrases.push_back(phrase);
        pos += phrase.length;
    }
    return result;
}

ParseResult lz78_parse(const SymbolSequence& x) { return lz78_parse(x.symbols()); }

std::size_t lz78_symbol_width(std::size_t alphabet_size) {
    return std::max<std::size_t>(1, ceil_log2(alphabet_size));
}

std::size_t lz78_length(const ParseResult& parse, std::size_t alphabet_size) {
    const std::size_t w = lz78_symbol_width(alphabet_size);
    std::size_t bits = 0;
    const std::size_t complete = parse.complete_count();
    for (std::size_t i = 0; i < complete; ++i) bits += index_width(std::uint64_t{i + 1}) + w;
    bits += 1;
    if (parse.last_incomplete) bits += index_width(std::uint64_t{complete + 1});
    return bits;
}

std::size_t lz78_length(const SymbolSequence& x) { return lz78_length(lz78_parse(x), x.alphabet_size()); }

BitString lz78_encode(const SymbolSequence& x) {
    const ParseResult parse = lz78_parse(x);
    const std::size_t w = lz78_symbol_width(x.alphabet_size());
    BitString out;
    const std::size_t complete = parse.complete_count();
    for (std::size_t i = 0; i < complete; ++i) {
        const Phrase& p = parse.phrases[i];
        out.append_uint(p.parent, index_width(std::uint64_t{i + 1}));
        out.append_uint(p.last, w);
    }
    out.push_back(parse.last_incomplete);
    if (parse.last_incomplete)
        out.append_uint(parse.phrases.back().node, index_width(std::uint64_t{complete + 1}));
    return out;
}

SymbolSequence lz78_decode(const BitString& bits, const Alphabet& alphabet) {
    const std::size_t w = lz78_symbol_width(alphabet.size());
    BitReader in(bits);
    PhraseTrie dict;
    std::vector<Symbol> out;
    while (true) {
        const std::size_t j = dict.size();
        const std::size_t ptr = index_width(std::uint64_t{j});
        const std::size_t left = in.remaining();
        if (left == 0) throw IntegrityError("LZ78 stream truncated: missing end flag");
        if (left == 1) {
            if (in.read_bit()) throw IntegrityError("LZ78 stream truncated after end flag");
            break;
        }
        if (left == 1 + ptr) {
            // A complete phrase needs at least ptr + 2 bits, so this is the tail.
            if (!in.read_bit()) throw IntegrityError("LZ78 stream has trailing bits after end flag");
            const std::uint64_t node = in.read_uint(ptr);
            if (node == 0 || node >= j) throw IntegrityError("LZ78 incomplete-phrase pointer out of range");
            const auto tail = dict.spell(node);
            out.insert(out.end(), tail.begin(), tail.end());
            break;
        }
        if (left < ptr + w + 1) throw IntegrityError("LZ78 stream truncated inside a phrase");
        const std::uint64_t parent = in.read_uint(ptr);
        if (parent >= j) throw IntegrityError("LZ78 phrase pointer out of range");
        const std::uint64_t symbol = in.read_uint(w);
        if (symbol >= alphabet.size()) throw IntegrityError("LZ78 symbol out of range");
        if (dict.child(parent, static_cast<Symbol>(symbol)))
            throw IntegrityError("LZ78 stream repeats a dictionary phrase");
        const std::size_t node = dict.add(parent, static_cast<Symbol>(symbol));
        const auto phrase = dict.spell(node);
        out.insert(out.end(), phrase.begin(), phrase.end());
    }
    return SymbolSequence(alphabet, std::move(out));
}

JointParseResult joint_parse(const SymbolSequence& x, const SymbolSequence& y) {
    if (x.size() != y.size()) throw ValidationError("side information length differs from sequence length");
    JointParseResult jp;
    jp.alphabet_size = x.alphabet_size();
    jp.si_alphabet_size = y.alphabet_size();
    const std::size_t beta = jp.si_alphabet_size;
    std::vector<Symbol> pairs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) pairs[i] = static_cast<Symbol>(x[i] * beta + y[i]);
    jp.joint = lz78_parse(pairs);

    std::map<std::vector<Symbol>, std::size_t> ids;
    jp.c_xy = jp.joint.complete_count();
    for (std::size_t i = 0; i < jp.c_xy; ++i) {
        const Phrase& p = jp.joint.phrases[i];
        std::vector<Symbol> yp(y.symbols().begin() + static_cast<std::ptrdiff_t>(p.start),
                               y.symbols().begin() + static_cast<std::ptrdiff_t>(p.start + p.length));
        auto [it, inserted] = ids.emplace(yp, jp.y_phrases.size());
        if (inserted) {
            jp.y_phrases.push_back(std::move(yp));
            jp.c_l.push_back(0);
        }
        jp.y_phrase_index.push_back(it->second);
        ++jp.c_l[it->second];
    }
    jp.c_y = jp.y_phrases.size();
    return jp;
}

namespace {

double xlogx(double v) { return v > 0 ? v * std::log2(v) : 0.0; }

}  // namespace

double conditional_lz_length(const JointParseResult& jp) {
    double total = 0;
    for (const auto c : jp.c_l) total += xlogx(static_cast<double>(c));
    return total;
}

std::uint64_t PhraseClassTable::total() const {
    std::uint64_t t = 0;
    for (const auto& [key, c] : classes) t += c;
    return t;
}

double PhraseClassTable::joint_entropy() const {
    const double c = static_cast<double>(total());
    if (c == 0) return 0.0;
    double h = 0;
    for (const auto& [key, v] : classes) {
        const double q = static_cast<double>(v) / c;
        h -= q * std::log2(q);
    }
    return h;
}

namespace {

PhraseClassTable classify(const std::vector<Phrase>& phrases, std::size_t complete,
                          const std::vector<std::size_t>* keys, std::span<const Symbol> xs,
                          std::span<const Symbol> ys, const FsmSpec& fsm) {
    if (!fsm.time_invariant()) throw ValidationError("phrase classification needs a time-invariant machine");
    const auto states = run_states(fsm, xs, fsm.has_side_info() ? ys : std::span<const Symbol>{},
                                   fsm.initial_state());
    PhraseClassTable table;
    table.side_info = keys != nullptr;
    for (std::size_t i = 0; i < complete; ++i) {
        const Phrase& p = phrases[i];
        const std::size_t key = keys ? (*keys)[i] : p.length;
        ++table.classes[{key, states[p.start], states[p.start + p.length]}];
    }
    return table;
}

}  // namespace

PhraseClassTable classify_phrases(const ParseResult& parse, const SymbolSequence& x, const FsmSpec& fsm) {
    check_inputs(fsm, x, nullptr);
    return classify(parse.phrases, parse.complete_count(), nullptr, x.symbols(), {}, fsm);
}

PhraseClassTable classify_phrases(const JointParseResult& jp, const SymbolSequence& x, const SymbolSequence& y,
                                  const FsmSpec& fsm) {
    if (fsm.has_side_info())
        check_inputs(fsm, x, &y);
    else
        check_inputs(fsm, x, nullptr);
    if (x.size() != y.size()) throw ValidationError("side information length differs from sequence length");
    return classify(jp.joint.phrases, jp.c_xy, &jp.y_phrase_index, x.symbols(), y.symbols(), fsm);
}

double phrase_replacement_bound(const PhraseClassTable& table) {
    double total = 0;
    for (const auto& [key, c] : table.classes) total += xlogx(static_cast<double>(c));
    return total;
}

namespace {

// Joint-trie nodes whose y-part spells y[pos, pos+depth) with pos+depth <= n,
// in creation order (node ids grow with creation).
std::vector<std::size_t> condlz_candidates(const PhraseTrie& dict, std::span<const Symbol> ys, std::size_t beta,
                                           std::size_t pos) {
    std::vector<std::size_t> out;
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
        const std::size_t node = stack.back();
        stack.pop_back();
        out.push_back(node);
        const std::size_t at = pos + dict.depth(node);
        if (at >= ys.size()) continue;
        for (const auto& [pair, kid] : dict.children(node))
            if (pair % beta == ys[at]) stack.push_back(kid);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

BitString conditional_lz_encode(const SymbolSequence& x, const SymbolSequence& y) {
    if (x.size() != y.size()) throw ValidationError("side information length differs from sequence length");
    const std::size_t beta = y.alphabet_size();
    const std::size_t w = ceil_log2(x.alphabet_size());
    const auto xs = x.symbols();
    const auto ys = y.symbols();
    PhraseTrie dict;
    BitString out;
    std::size_t pos = 0;
    while (pos < xs.size()) {
        std::size_t node = 0;
        std::size_t len = 0;
        while (pos + len < xs.size()) {
            const auto next = dict.child(node, static_cast<Symbol>(xs[pos + len] * beta + ys[pos + len]));
            if (!next) break;
            node = *next;
            ++len;
        }
        const auto candidates = condlz_candidates(dict, ys, beta, pos);
        const auto it = std::lower_bound(candidates.begin(), candidates.end(), node);
        out.append_uint(static_cast<std::uint64_t>(it - candidates.begin()), index_width(candidates.size()));
        if (pos + len == xs.size()) break;
        out.append_uint(xs[pos + len], w);
        dict.add(node, static_cast<Symbol>(xs[pos + len] * beta + ys[pos + len]));
        pos += len + 1;
    }
    return out;
}

SymbolSequence conditional_lz_decode(const BitString& bits, const SymbolSequence& y, const Alphabet& alphabet) {
    const std::size_t beta = y.alphabet_size();
    const std::size_t w = ceil_log2(alphabet.size());
    const auto ys = y.symbols();
    const std::size_t n = ys.size();
    BitReader in(bits);
    PhraseTrie dict;
    std::vector<Symbol> out;
    out.reserve(n);
    std::size_t pos = 0;
    auto emit = [&](std::size_t node) {
        for (const Symbol pair : dict.spell(node)) out.push_back(static_cast<Symbol>(pair / beta));
    };
    while (pos < n) {
        const auto candidates = condlz_candidates(dict, ys, beta, pos);
        const std::uint64_t idx = in.read_uint(index_width(candidates.size()));
        if (idx >= candidates.size()) throw IntegrityError("conditional LZ phrase index out of range");
        const std::size_t node = candidates[idx];
        const std::size_t len = dict.depth(node);
        if (pos + len == n) {
            if (node == 0) throw IntegrityError("conditional LZ stream ends on an empty phrase");
            emit(node);
            pos = n;
            break;
        }
        const std::uint64_t symbol = in.read_uint(w);
        if (symbol >= alphabet.size()) throw IntegrityError("conditional LZ symbol out of range");
        const Symbol pair = static_cast<Symbol>(symbol * beta + ys[pos + len]);
        if (dict.child(node, pair)) throw IntegrityError("conditional LZ stream repeats a dictionary phrase");
        emit(dict.add(node, pair));
        pos += len + 1;
    }
    if (in.remaining() != 0) throw IntegrityError("conditional LZ stream has trailing bits");
    return SymbolSequence(alphabet, std::move(out));
}

}  // namespace secrecy
