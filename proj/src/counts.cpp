#include "secrecy/counts.hpp"

#include <map>
#include <numeric>
#include <string>

#include "secrecy/errors.hpp"

namespace secrecy {

const char* to_string(CountKind kind) {
    switch (kind) {
        case CountKind::symbol_state: return "symbol-state";
        case CountKind::si_symbol_state: return "si-symbol-state";
        case CountKind::block: return "block";
        case CountKind::si_block: return "si-block";
    }
    return "?";
}

namespace {

std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t budget) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        if (base != 0 && out > budget / base) throw BudgetError("count table exceeds the size budget");
        out *= base;
    }
    return out;
}

}  // namespace

CountTable CountTable::zeros(CountKind kind, std::size_t alphabet_size, std::size_t states,
                             std::size_t si_alphabet_size, std::size_t block_length, std::size_t budget) {
    CountTable t;
    t.kind = kind;
    t.alphabet_size = alphabet_size;
    t.states = states;
    t.si_alphabet_size = t.has_side_info() ? si_alphabet_size : 0;
    t.block_length = t.is_block() ? block_length : 1;
    if (t.has_side_info() && si_alphabet_size == 0) throw ValidationError("side-information kind needs beta >= 1");
    const std::size_t labels = checked_power(alphabet_size, t.block_length, budget);
    const std::size_t contexts = t.has_side_info() ? checked_power(si_alphabet_size, t.block_length, budget) : 1;
    std::size_t size = labels;
    auto grow = [&](std::size_t factor) {
        if (factor != 0 && size > budget / factor) throw BudgetError("count table exceeds the size budget");
        size *= factor;
    };
    grow(contexts);
    grow(states);
    if (t.is_block()) grow(states);
    t.counts.assign(size, 0);
    return t;
}

std::uint64_t CountTable::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

std::size_t CountTable::label_count() const noexcept {
    std::size_t out = 1;
    for (std::size_t i = 0; i < block_length; ++i) out *= alphabet_size;
    return out;
}

std::size_t CountTable::context_count() const noexcept {
    if (!has_side_info()) return 1;
    std::size_t out = 1;
    for (std::size_t i = 0; i < block_length; ++i) out *= si_alphabet_size;
    return out;
}

std::vector<std::uint64_t> CountTable::state_marginal() const {
    std::vector<std::uint64_t> out(states, 0);
    const std::size_t per_state = counts.size() / states;
    for (std::size_t i = 0; i < counts.size(); ++i) out[i / per_state] += counts[i];
    return out;
}

std::vector<std::uint64_t> CountTable::symbol_marginal() const {
    std::vector<std::uint64_t> out(label_count(), 0);
    for (std::size_t i = 0; i < counts.size(); ++i) out[i % label_count()] += counts[i];
    return out;
}

std::vector<std::uint64_t> CountTable::state_pair_marginal() const {
    if (!is_block()) throw ValidationError("state-pair marginal needs a block table");
    std::vector<std::uint64_t> out(states * states, 0);
    const std::size_t per_pair = counts.size() / (states * states);
    for (std::size_t i = 0; i < counts.size(); ++i) out[i / per_pair] += counts[i];
    return out;
}

CountTable collect_counts(const FsmSpec& fsm, const SymbolSequence& x, const std::optional<SymbolSequence>& y,
                          bool cyclic) {
    if (!fsm.time_invariant())
        throw ValidationError("symbol-state counts need a time-invariant machine; unroll the periodic machine first");
    if (y && !fsm.has_side_info()) {
        // Side information keys the counts but does not drive the machine.
        check_inputs(fsm, x, nullptr);
        if (y->size() != x.size()) throw ValidationError("side information length differs from sequence length");
    } else {
        check_inputs(fsm, x, y ? &*y : nullptr);
    }
    const auto xs = x.symbols();
    const auto ys = y ? y->symbols() : std::span<const Symbol>{};
    const auto machine_ys = fsm.has_side_info() ? ys : std::span<const Symbol>{};

    CountTable table = y ? CountTable::zeros(CountKind::si_symbol_state, fsm.alphabet_size(), fsm.state_count(),
                                             y->alphabet_size())
                         : CountTable::zeros(CountKind::symbol_state, fsm.alphabet_size(), fsm.state_count());
    table.cyclic = cyclic;

    State start = fsm.initial_state();
    std::size_t passes = 1;
    if (cyclic) {
        std::map<State, std::size_t> seen;
        std::vector<State> orbit;
        State z = fsm.initial_state();
        while (!seen.contains(z)) {
            seen[z] = orbit.size();
            orbit.push_back(z);
            z = final_state(fsm, xs, machine_ys, z);
        }
        start = z;
        passes = orbit.size() - seen[z];
    }
    table.passes = passes;

    State z = start;
    for (std::size_t pass = 0; pass < passes; ++pass)
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const Symbol yi = ys.empty() ? 0 : ys[i];
            const std::size_t idx = y ? table.si_symbol_index(z, yi, xs[i]) : table.symbol_index(z, xs[i]);
            ++table.counts[idx];
            z = fsm.next(z, xs[i], machine_ys.empty() ? 0 : yi);
        }
    return table;
}

std::vector<Symbol> block_symbols(std::size_t block, std::size_t alphabet_size, std::size_t block_length) {
    std::vector<Symbol> out(block_length);
    for (std::size_t j = block_length; j-- > 0;) {
        out[j] = static_cast<Symbol>(block % alphabet_size);
        block /= alphabet_size;
    }
    return out;
}

State block_transition(const FsmSpec& fsm, State z, std::size_t block, std::size_t block_length,
                       std::size_t y_block) {
    const auto xs = block_symbols(block, fsm.alphabet_size(), block_length);
    if (fsm.has_side_info()) {
        const auto ys = block_symbols(y_block, fsm.si_alphabet_size(), block_length);
        return final_state(fsm, xs, ys, z);
    }
    return final_state(fsm, xs, {}, z);
}

CountTable collect_block_counts(const FsmSpec& fsm, const SymbolSequence& x, std::size_t block_length,
                                const std::optional<SymbolSequence>& y, std::size_t budget) {
    if (block_length == 0) throw ValidationError("block length must be positive");
    if (x.size() % block_length != 0)
        throw ValidationError("block length " + std::to_string(block_length) + " does not divide n = " +
                              std::to_string(x.size()));
    if (block_length % fsm.period() != 0)
        throw ValidationError("block length " + std::to_string(block_length) + " is not a multiple of the period " +
                              std::to_string(fsm.period()));
    const bool with_si = y.has_value();
    if (with_si) {
        if (y->size() != x.size()) throw ValidationError("side information length differs from sequence length");
        if (fsm.has_side_info() && y->alphabet_size() != fsm.si_alphabet_size())
            throw ValidationError("side-information alphabet size mismatch");
    } else if (fsm.has_side_info()) {
        throw ValidationError("machine reads side information but none was supplied");
    }
    if (x.alphabet_size() != fsm.alphabet_size()) throw ValidationError("sequence alphabet size mismatch");

    const std::size_t beta = with_si ? y->alphabet_size() : 0;
    CountTable table = CountTable::zeros(with_si ? CountKind::si_block : CountKind::block, fsm.alphabet_size(),
                                         fsm.state_count(), beta, block_length, budget);
    const auto xs = x.symbols();
    const auto ys = with_si ? y->symbols() : std::span<const Symbol>{};
    const auto machine_ys = fsm.has_side_info() ? ys : std::span<const Symbol>{};
    State z = fsm.initial_state();
    for (std::size_t start = 0; start < xs.size(); start += block_length) {
        std::size_t xb = 0, yb = 0;
        for (std::size_t j = 0; j < block_length; ++j) {
            xb = xb * fsm.alphabet_size() + xs[start + j];
            if (with_si) yb = yb * beta + ys[start + j];
        }
        const State z2 = final_state(fsm, xs.subspan(start, block_length),
                                     machine_ys.empty() ? machine_ys : machine_ys.subspan(start, block_length), z);
        const std::size_t idx = with_si ? table.si_block_index(z, z2, yb, xb) : table.block_index(z, z2, xb);
        ++table.counts[idx];
        z = z2;
    }
    return table;
}

bool block_counts_consistent(const FsmSpec& fsm, const CountTable& table) {
    if (!table.is_block()) throw ValidationError("consistency check needs a block table");
    const std::size_t labels = table.label_count();
    const std::size_t contexts = table.context_count();
    for (State z = 0; z < table.states; ++z)
        for (State z2 = 0; z2 < table.states; ++z2)
            for (std::size_t yb = 0; yb < contexts; ++yb)
                for (std::size_t xb = 0; xb < labels; ++xb) {
                    const std::size_t idx = table.kind == CountKind::si_block ? table.si_block_index(z, z2, yb, xb)
                                                                              : table.block_index(z, z2, xb);
                    if (table.counts[idx] == 0) continue;
                    const std::size_t machine_yb = fsm.has_side_info() ? yb : 0;
                    if (block_transition(fsm, z, xb, table.block_length, machine_yb) != z2) return false;
                }
    return true;
}

}  // namespace secrecy
