#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "secrecy/fsm.hpp"
#include "secrecy/sequence.hpp"

namespace secrecy {

enum class CountKind { symbol_state, si_symbol_state, block, si_block };

const char* to_string(CountKind kind);

inline constexpr std::size_t default_table_budget = std::size_t{1} << 24;

// Dense occurrence counts collected by a counter machine. Layouts (row-major):
//
//   symbol_state     n(x,z)            [z][x]
//   si_symbol_state  n(x,y,z)          [z][y][x]
//   block            m(z,z',x^l)       [z][z'][block]
//   si_block         m(z,z',x^l,y^l)   [z][z'][y-block][x-block]
//
// Blocks are numbered lexicographically: b = sum_j x_j * alpha^(l-1-j).
struct CountTable {
    CountKind kind = CountKind::symbol_state;
    std::size_t alphabet_size = 0;
    std::size_t states = 0;
    std::size_t si_alphabet_size = 0;  // 0 for the SI-free kinds
    std::size_t block_length = 1;      // 1 for the symbol kinds
    std::size_t passes = 1;            // periods of the cyclic orbit that were counted (cyclic mode)
    bool cyclic = false;
    std::vector<std::uint64_t> counts;

    static CountTable zeros(CountKind kind, std::size_t alphabet_size, std::size_t states,
                            std::size_t si_alphabet_size = 0, std::size_t block_length = 1,
                            std::size_t budget = default_table_budget);

    std::uint64_t total() const;
    bool is_block() const noexcept { return kind == CountKind::block || kind == CountKind::si_block; }
    bool has_side_info() const noexcept {
        return kind == CountKind::si_symbol_state || kind == CountKind::si_block;
    }
    // alpha^l (symbol kinds: alpha), and beta^l (symbol kinds: beta, SI-free: 1).
    std::size_t label_count() const noexcept;
    std::size_t context_count() const noexcept;

    std::size_t symbol_index(State z, Symbol x) const { return z * alphabet_size + x; }
    std::size_t si_symbol_index(State z, Symbol y, Symbol x) const {
        return (z * si_alphabet_size + y) * alphabet_size + x;
    }
    std::size_t block_index(State z, State z2, std::size_t block) const {
        return (z * states + z2) * label_count() + block;
    }
    std::size_t si_block_index(State z, State z2, std::size_t y_block, std::size_t x_block) const {
        return ((z * states + z2) * context_count() + y_block) * label_count() + x_block;
    }

    std::uint64_t at_symbol(State z, Symbol x) const { return counts[symbol_index(z, x)]; }

    // n(z) and n(x) for the symbol kinds.
    std::vector<std::uint64_t> state_marginal() const;
    std::vector<std::uint64_t> symbol_marginal() const;
    // m(z,z') for the block kinds.
    std::vector<std::uint64_t> state_pair_marginal() const;

    bool operator==(const CountTable&) const = default;
};

// n(x,z) (or n(x,y,z) with side information) for i = 0..n-1 along the state
// trace from the initial state. The machine must be time-invariant.
//
// In cyclic mode the trace is closed into a periodic orbit: starting from the
// initial state, the map z -> (state after reading x from z) is iterated until
// it cycles, and the counts are taken over the `passes` = p readings of x that
// make up that cycle. For a shift register (and any machine whose map has a
// fixed point on the way) p = 1 and z_0 = g(z_{n-1}, x_{n-1}).
CountTable collect_counts(const FsmSpec& fsm, const SymbolSequence& x,
                          const std::optional<SymbolSequence>& y = std::nullopt, bool cyclic = false);

// m(z,z',x^l) over the n/l non-overlapping l-blocks; with side information the
// aligned y-block is an extra key. `block_length` must divide n and be a
// multiple of the machine period.
CountTable collect_block_counts(const FsmSpec& fsm, const SymbolSequence& x, std::size_t block_length,
                                const std::optional<SymbolSequence>& y = std::nullopt,
                                std::size_t budget = default_table_budget);

// Whether every non-zero block count m(z,z',b) has z' equal to the state the
// machine reaches from z on block b.
bool block_counts_consistent(const FsmSpec& fsm, const CountTable& table);

// State reached from `z` after reading block number `block` (and y-block
// `y_block` when the machine reads side information), starting at phase 0.
State block_transition(const FsmSpec& fsm, State z, std::size_t block, std::size_t block_length,
                       std::size_t y_block = 0);

// Symbols of block number `block`.
std::vector<Symbol> block_symbols(std::size_t block, std::size_t alphabet_size, std::size_t block_length);

}  // namespace secrecy
