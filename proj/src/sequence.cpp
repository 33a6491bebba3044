#include "secrecy/sequence.hpp"

#include <algorithm>
#include <set>

#include "secrecy/errors.hpp"

namespace secrecy {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw ValidationError("alphabet must contain at least one symbol");
    std::set<std::string> seen;
    for (const auto& n : names_)
        if (!seen.insert(n).second) throw ValidationError("alphabet symbol '" + n + "' is repeated");
}

Alphabet Alphabet::from_chars(std::string_view chars) {
    std::vector<std::string> names;
    for (char ch : chars) names.emplace_back(1, ch);
    return Alphabet(std::move(names));
}

Alphabet Alphabet::numeric(std::size_t size) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < size; ++i) names.push_back(std::to_string(i));
    return Alphabet(std::move(names));
}

Alphabet Alphabet::bytes() {
    std::vector<std::string> names;
    for (int i = 0; i < 256; ++i) names.emplace_back(1, static_cast<char>(i));
    return Alphabet(std::move(names));
}

Symbol Alphabet::index_of(std::string_view name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw ValidationError("symbol '" + std::string(name) + "' is not in the alphabet");
    return static_cast<Symbol>(it - names_.begin());
}

bool Alphabet::contains(std::string_view name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

SymbolSequence::SymbolSequence(Alphabet alphabet, std::vector<Symbol> symbols)
    : alphabet_(std::move(alphabet)), symbols_(std::move(symbols)) {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i] >= alphabet_.size())
            throw ValidationError("symbol index " + std::to_string(symbols_[i]) + " at position " +
                                  std::to_string(i) + " exceeds alphabet size " +
                                  std::to_string(alphabet_.size()));
}

SymbolSequence SymbolSequence::binary(std::string_view bits) {
    return parse(Alphabet::from_chars("01"), bits);
}

SymbolSequence SymbolSequence::parse(const Alphabet& alphabet, std::string_view text) {
    std::vector<Symbol> symbols;
    symbols.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const std::string_view one = text.substr(i, 1);
        if (!alphabet.contains(one))
            throw ValidationError("symbol '" + std::string(one) + "' at offset " + std::to_string(i) +
                                  " is not in the alphabet");
        symbols.push_back(alphabet.index_of(one));
    }
    return SymbolSequence(alphabet, std::move(symbols));
}

std::string SymbolSequence::to_string() const {
    std::string out;
    for (Symbol s : symbols_) out += alphabet_.name(s);
    return out;
}

}  // namespace secrecy
