#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "secrecy/counts.hpp"
#include "secrecy/sequence.hpp"

namespace secrecy {

// A count table normalized by its total (n for the symbol kinds, m = n/l for
// the block kinds).
struct EmpiricalLaw {
    std::vector<double> p;
    std::uint64_t normalizer = 0;

    static EmpiricalLaw from(const CountTable& table);
};

// Entropy in bits of the distribution proportional to `counts` (0 log 0 = 0).
double entropy_of_counts(std::span<const std::uint64_t> counts);

// H(X|Z) for symbol_state tables, H(X|Y,Z) for si_symbol_state tables, and
// H(X^l|Z,Z') (per block, not per symbol) for the block kinds, with
// H(X^l|Y^l,Z,Z') for si_block. Throws ValidationError on an empty table.
double cond_entropy(const CountTable& counts);

// H(Z,Z',X^l) of a block table, in bits per block.
double block_joint_entropy(const CountTable& counts);

// Empirical mutual information I(X;Z) of a symbol_state table.
double mutual_information(const CountTable& counts);

// H(X_l | X_0..X_{l-1}) under the cyclic (l+1)-gram law of x: each position i
// contributes the pair (x_{i-l..i-1}, x_i) with indices taken modulo n.
double markov_cond_entropy(const SymbolSequence& x, std::size_t order);

// H(X^l)/l over the n/l non-overlapping l-blocks; l must divide n.
double block_entropy(const SymbolSequence& x, std::size_t block_length);
// H(X^l|Y^l)/l with y-blocks aligned to x-blocks.
double conditional_block_entropy(const SymbolSequence& x, const SymbolSequence& y, std::size_t block_length);

}  // namespace secrecy
