#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "secrecy/bitstring.hpp"
#include "secrecy/fsm.hpp"
#include "secrecy/sequence.hpp"

namespace secrecy {

// One phrase of an incremental parse. `node` is the dictionary entry that
// spells the phrase and `parent` the entry of its prefix (0 is the empty root).
struct Phrase {
    std::size_t start = 0;
    std::size_t length = 0;
    std::size_t node = 0;
    std::size_t parent = 0;
    Symbol last = 0;
};

// Dictionary trie built by the parse. Node 0 is the empty phrase; node i >= 1
// is the i-th complete phrase.
class PhraseTrie {
public:
    PhraseTrie() : nodes_(1) {}

    std::size_t size() const noexcept { return nodes_.size(); }
    std::optional<std::size_t> child(std::size_t node, Symbol s) const;
    std::size_t add(std::size_t parent, Symbol s);
    std::size_t parent(std::size_t node) const { return nodes_[node].parent; }
    Symbol symbol(std::size_t node) const { return nodes_[node].symbol; }
    std::size_t depth(std::size_t node) const { return nodes_[node].depth; }
    std::vector<Symbol> spell(std::size_t node) const;
    const std::map<Symbol, std::size_t>& children(std::size_t node) const { return nodes_[node].children; }

private:
    struct Node {
        std::map<Symbol, std::size_t> children;
        std::size_t parent = 0;
        Symbol symbol = 0;
        std::size_t depth = 0;
    };
    std::vector<Node> nodes_;
};

struct ParseResult {
    std::vector<Phrase> phrases;  // includes a trailing incomplete phrase, if any
    bool last_incomplete = false;
    PhraseTrie dictionary;

    // Number of phrases, counting a trailing incomplete one.
    std::size_t c() const noexcept { return phrases.size(); }
    // Number of complete (pairwise distinct) phrases.
    std::size_t complete_count() const noexcept { return phrases.size() - (last_incomplete ? 1 : 0); }
};

// Greedy incremental (LZ78) parse: each phrase is the shortest prefix of the
// remaining input that is not yet in the dictionary. The input may end in the
// middle of a dictionary phrase, which then becomes an incomplete last phrase.
ParseResult lz78_parse(std::span<const Symbol> x);
ParseResult lz78_parse(const SymbolSequence& x);

// Bits used for one symbol field: ceil(log2 alpha), but 1 for a unary alphabet
// so that the end of the stream stays unambiguous.
std::size_t lz78_symbol_width(std::size_t alphabet_size);

// Bitstream: per complete phrase, the prefix pointer in ceil(log2 j) bits
// (j = dictionary size including the root, so the first phrase spends 0 bits)
// followed by the new symbol; then a 1-bit flag, and if the flag is set the
// pointer of the trailing incomplete phrase.
BitString lz78_encode(const SymbolSequence& x);
SymbolSequence lz78_decode(const BitString& bits, const Alphabet& alphabet);
// LZ(x): length of lz78_encode(x) in bits, computed from the parse.
std::size_t lz78_length(const ParseResult& parse, std::size_t alphabet_size);
std::size_t lz78_length(const SymbolSequence& x);

// Incremental parse of the pair sequence ((x_0,y_0), ..., (x_{n-1},y_{n-1})).
// Only complete joint phrases enter the counts: c_xy of them, whose
// y-projections take c_y distinct values; c_l[l] counts the joint phrases
// whose y-projection is the l-th distinct one (in order of first appearance).
struct JointParseResult {
    ParseResult joint;                     // parse over the alphabet alpha * beta, pair = x * beta + y
    std::size_t alphabet_size = 0;         // alpha
    std::size_t si_alphabet_size = 0;      // beta
    std::vector<std::size_t> y_phrase_index;  // per complete joint phrase
    std::vector<std::vector<Symbol>> y_phrases;
    std::vector<std::uint64_t> c_l;
    std::size_t c_xy = 0;
    std::size_t c_y = 0;
};

JointParseResult joint_parse(const SymbolSequence& x, const SymbolSequence& y);

// u(x|y) = sum_l c_l log2 c_l, with 0 log 0 = 0.
double conditional_lz_length(const JointParseResult& jp);

// Counts c_{l z z'} of complete phrases by (key, start state, end state), where
// the key is the phrase length, or the y-phrase id for a joint parse.
struct PhraseClassTable {
    bool side_info = false;
    std::map<std::tuple<std::size_t, State, State>, std::uint64_t> classes;

    std::uint64_t total() const;
    // H(L,Z,Z') of the empirical law Q(l,z,z') = c_{lzz'} / c.
    double joint_entropy() const;
};

// Tags each complete phrase with (length, z at its first symbol, z after its
// last symbol) under a single left-to-right run of the machine over x.
PhraseClassTable classify_phrases(const ParseResult& parse, const SymbolSequence& x, const FsmSpec& fsm);
// Side-information variant: key is the y-phrase id of each joint phrase; the
// machine may or may not read y.
PhraseClassTable classify_phrases(const JointParseResult& jp, const SymbolSequence& x, const SymbolSequence& y,
                                  const FsmSpec& fsm);

// sum c_{lzz'} log2 c_{lzz'}: a lower bound on log2 of the acceptance-set size.
double phrase_replacement_bound(const PhraseClassTable& table);

// Conditional LZ code for x given y (y known to the decoder). Phrases come
// from the joint incremental parse; each phrase sends the index of its prefix
// among the dictionary entries whose y-part matches y at the current position
// and fits before the end, then the new x symbol. A prefix reaching exactly the
// end marks the trailing incomplete phrase, so no flag is needed.
BitString conditional_lz_encode(const SymbolSequence& x, const SymbolSequence& y);
SymbolSequence conditional_lz_decode(const BitString& bits, const SymbolSequence& y, const Alphabet& alphabet);

}  // namespace secrecy
