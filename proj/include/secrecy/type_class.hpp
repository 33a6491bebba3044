#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "secrecy/bigint.hpp"
#include "secrecy/counts.hpp"
#include "secrecy/fsm.hpp"
#include "secrecy/sequence.hpp"

namespace secrecy {

// Which statistics define the class:
//   symbol_state     n(x,z) under the machine (periodic machines are unrolled)
//   block            m(z,z',x^l) over non-overlapping l-blocks
//   markov           cyclic (l+1)-gram counts, i.e. cyclic counts under the
//                    order-l shift register
//   si_symbol_state  n(x,y,z) for a fixed side-information sequence y
//   si_block         m(z,z',x^l,y^l) for a fixed y
enum class TypeClassKind { symbol_state, block, markov, si_symbol_state, si_block };

const char* to_string(TypeClassKind kind);
TypeClassKind type_class_kind_from_string(const std::string& name);
bool uses_side_info(TypeClassKind kind);

// Single-state machine over an alphabet of the given size.
FsmSpec single_state_fsm(std::size_t alphabet_size);

struct ClassSpec {
    TypeClassKind kind = TypeClassKind::symbol_state;
    std::optional<FsmSpec> fsm;  // ignored by markov; single-state machine when absent
    std::size_t order = 1;       // block length, or Markov order
};

// T_g(x): every length-n sequence whose count table (of the given kind, under
// the given machine, with the given y) equals `counts`.
struct TypeClassDescriptor {
    TypeClassKind kind = TypeClassKind::symbol_state;
    FsmSpec fsm = single_state_fsm(2);  // the machine the counts were taken with (unrolled / shift register)
    Alphabet alphabet;
    std::size_t order = 1;
    std::size_t n = 0;
    CountTable counts;
    std::optional<SymbolSequence> y;
    std::optional<BigInt> exact_size;
};

// Descriptor of the class containing x.
TypeClassDescriptor describe(const ClassSpec& spec, const SymbolSequence& x,
                             const std::optional<SymbolSequence>& y = std::nullopt);
// Descriptor from a count table (e.g. read from a header). The machine is
// prepared exactly as in describe().
TypeClassDescriptor describe_counts(const ClassSpec& spec, const Alphabet& alphabet, std::size_t n,
                                    CountTable counts, const std::optional<SymbolSequence>& y = std::nullopt);
// Empty count table of the right shape for (spec, alphabet, y).
CountTable empty_counts(const ClassSpec& spec, const Alphabet& alphabet, std::size_t n,
                        const std::optional<SymbolSequence>& y = std::nullopt);

// Number of items a table of this kind counts: n, or n/l for the block kinds.
std::uint64_t counted_items(const ClassSpec& spec, std::size_t n);

// Count table of x taken the same way as the descriptor's.
CountTable counts_of(const TypeClassDescriptor& desc, const SymbolSequence& x);
bool in_class(const TypeClassDescriptor& desc, const SymbolSequence& x);

enum class CountingBackend {
    automatic,  // product when the state path ignores the symbols, else trail when context free, else dp
    dp,         // residual-count dynamic programming
    trail,      // matrix-tree (BEST) count of Euler trails; context-free kinds only
    product,    // multinomial product per (state, context) row; label-independent state paths only
};

inline constexpr std::uint64_t default_dp_budget = 100'000'000;

// Members of a class in lexicographic order (alphabet index order). Counting,
// ranking and unranking share one engine so they agree by construction.
class ClassEnumerator {
public:
    explicit ClassEnumerator(const TypeClassDescriptor& desc, CountingBackend backend = CountingBackend::automatic,
                             std::uint64_t dp_budget = default_dp_budget);
    ~ClassEnumerator();
    ClassEnumerator(ClassEnumerator&&) noexcept;
    ClassEnumerator& operator=(ClassEnumerator&&) noexcept;

    const BigInt& size();
    // Throws ValidationError when x is not a member.
    BigInt rank(const SymbolSequence& x);
    // Throws ValidationError when r is outside [0, size).
    SymbolSequence unrank(const BigInt& r);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// |T_g(x)|. Throws BudgetError when the dp budget (product over non-zero
// entries of count + 1) would be exceeded.
BigInt type_class_size_exact(const TypeClassDescriptor& desc, CountingBackend backend = CountingBackend::automatic,
                             std::uint64_t dp_budget = default_dp_budget);

struct SizeLowerBound {
    double log2_value = 0;       // may be negative
    bool condition_met = false;  // every n(x,z) >= 1
};

// n H(X|Z) - (s(alpha-1)/2) log2(2 pi n) for a symbol_state table.
SizeLowerBound type_class_size_lower_bound(const CountTable& counts);

// n [H(X^l)/l - 2 log2 s / l - (l s^2 alpha^l / n) log2(n/l + 1)] for a block
// table, with H(X^l) taken from the block marginal.
double block_type_size_lower_bound(const CountTable& counts, std::size_t s, std::size_t alphabet_size,
                                   std::size_t block_length, std::size_t n);

}  // namespace secrecy
