#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace secrecy {

using Symbol = std::uint32_t;

// Ordered list of distinct symbol names. Symbols elsewhere are indices into it,
// so the index order is also the lexicographic order used for ranking.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> names);

    // One single-character symbol per character of `chars`, e.g. "01".
    static Alphabet from_chars(std::string_view chars);
    // Symbols "0", "1", ..., "size-1".
    static Alphabet numeric(std::size_t size);
    // The 256 byte values.
    static Alphabet bytes();

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(Symbol s) const { return names_.at(s); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    // Throws ValidationError when the name is not a member.
    Symbol index_of(std::string_view name) const;
    bool contains(std::string_view name) const;

    bool operator==(const Alphabet&) const = default;

private:
    std::vector<std::string> names_;
};

// A finite plaintext or side-information sequence over a declared alphabet.
class SymbolSequence {
public:
    SymbolSequence() : alphabet_(Alphabet::numeric(2)) {}
    SymbolSequence(Alphabet alphabet, std::vector<Symbol> symbols);

    // Binary sequence from a literal such as "0110".
    static SymbolSequence binary(std::string_view bits);
    // Each character of `text` must be a single-character symbol of `alphabet`.
    static SymbolSequence parse(const Alphabet& alphabet, std::string_view text);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t alphabet_size() const noexcept { return alphabet_.size(); }
    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }
    Symbol operator[](std::size_t i) const { return symbols_[i]; }
    std::span<const Symbol> symbols() const noexcept { return symbols_; }

    // Concatenated symbol names.
    std::string to_string() const;

    bool operator==(const SymbolSequence& other) const {
        return alphabet_.size() == other.alphabet_.size() && symbols_ == other.symbols_;
    }
    bool operator<(const SymbolSequence& other) const { return symbols_ < other.symbols_; }

private:
    Alphabet alphabet_;
    std::vector<Symbol> symbols_;
};

// All alpha^n sequences of length n in lexicographic order, as index vectors.
// Intended for desk-scale enumeration; calls `visit` once per sequence.
template <typename Visit>
void for_each_sequence(std::size_t alpha, std::size_t n, Visit&& visit) {
    std::vector<Symbol> seq(n, 0);
    while (true) {
        visit(std::span<const Symbol>(seq));
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++seq[i] < alpha) break;
            seq[i] = 0;
            if (i == 0) return;
        }
        if (n == 0) return;
    }
}

}  // namespace secrecy
