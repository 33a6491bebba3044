#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "secrecy/bigint.hpp"
#include "secrecy/sequence.hpp"

namespace secrecy {

using State = std::uint32_t;

inline constexpr std::size_t default_state_budget = std::size_t{1} << 20;

// A deterministic finite-state machine, optionally periodically time-varying
// and optionally driven by a side-information symbol:
//
//     z[i+1] = next(z[i], x[i], y[i], i mod period)
//     u[i]   = output(z[i], x[i], y[i])
//
// With period 1 and no side-information alphabet this is the plain
// time-invariant machine. The output table is optional; machines without one
// are used as counters.
class FsmSpec {
public:
    // `next` is indexed ((phase * states + z) * alpha + x) * beta1 + y and
    // `output` (z * alpha + x) * beta1 + y, where beta1 = max(si size, 1).
    FsmSpec(Alphabet alphabet, std::size_t states, State initial, std::size_t period,
            std::optional<Alphabet> si_alphabet, std::vector<State> next,
            std::optional<std::vector<std::uint8_t>> output = std::nullopt);

    // Time-invariant, side-information-free machine from a transition rule.
    static FsmSpec from_rule(Alphabet alphabet, std::size_t states, State initial,
                             const std::function<State(State, Symbol)>& next,
                             const std::function<bool(State, Symbol)>& output = {});

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t alphabet_size() const noexcept { return alphabet_.size(); }
    std::size_t state_count() const noexcept { return states_; }
    State initial_state() const noexcept { return initial_; }
    std::size_t period() const noexcept { return period_; }
    bool has_side_info() const noexcept { return si_alphabet_.has_value(); }
    const std::optional<Alphabet>& si_alphabet() const noexcept { return si_alphabet_; }
    std::size_t si_alphabet_size() const noexcept { return si_alphabet_ ? si_alphabet_->size() : 0; }
    bool has_output() const noexcept { return output_.has_value(); }
    bool time_invariant() const noexcept { return period_ == 1; }

    State next(State z, Symbol x, Symbol y = 0, std::size_t phase = 0) const {
        return next_[((phase * states_ + z) * alphabet_.size() + x) * beta1() + y];
    }
    bool output(State z, Symbol x, Symbol y = 0) const {
        return (*output_)[(z * alphabet_.size() + x) * beta1() + y] != 0;
    }

    const std::vector<State>& next_table() const noexcept { return next_; }
    const std::optional<std::vector<std::uint8_t>>& output_table() const noexcept { return output_; }

    // Same transitions, different initial state.
    FsmSpec with_initial(State initial) const;
    // Same transitions, output table removed.
    FsmSpec without_output() const;

private:
    std::size_t beta1() const noexcept { return si_alphabet_ ? si_alphabet_->size() : 1; }

    Alphabet alphabet_;
    std::size_t states_;
    State initial_;
    std::size_t period_;
    std::optional<Alphabet> si_alphabet_;
    std::vector<State> next_;
    std::optional<std::vector<std::uint8_t>> output_;
};

enum class Verdict { accept, reject };

// Response of a discriminator to one candidate sequence. `states` holds
// z_0..z_n (one more than the input length); `outputs` holds u_0..u_{n-1}.
struct StateTrace {
    std::vector<State> states;
    std::vector<std::uint8_t> outputs;
    Verdict verdict = Verdict::accept;
    std::optional<std::size_t> first_violation;  // index of the first u_i = 1
};

// Checks that x (and y, when the machine reads side information) fit the
// machine; throws ValidationError otherwise.
void check_inputs(const FsmSpec& fsm, const SymbolSequence& x, const SymbolSequence* y);

// State sequence z_0..z_n starting from `start`.
std::vector<State> run_states(const FsmSpec& fsm, std::span<const Symbol> x, std::span<const Symbol> y,
                              State start);
State final_state(const FsmSpec& fsm, std::span<const Symbol> x, std::span<const Symbol> y, State start,
                  std::size_t phase0 = 0);

// Full evaluation of the output recursion; the verdict is reject iff some u_i = 1.
StateTrace run_discriminator(const FsmSpec& fsm, const SymbolSequence& x,
                             const std::optional<SymbolSequence>& y = std::nullopt);

// Early-exit acceptance test on raw symbol spans (no validation).
bool accepts(const FsmSpec& fsm, std::span<const Symbol> x, std::span<const Symbol> y = {});

// Time-invariant machine with states * period states indexed phase * states + z
// that reproduces the state trace of a periodic machine.
FsmSpec unroll_periodic(const FsmSpec& fsm);

// Machine whose state is the last `order` symbols (oldest first, as a base-alpha
// number). Starts from the all-zero history.
FsmSpec build_shift_register_fsm(std::size_t order, std::size_t alphabet_size,
                                 std::size_t state_budget = default_state_budget);

// Output-table machine over {0,1} that accepts exactly the strings whose runs
// of zeroes are at most k long and, between two ones, at least d long. A
// leading run may be shorter than d. For (0,2) this is the three-state machine
// z -> (z+1) mod 3 on 0, z -> 0 on 1, rejecting a 0 read in state 2.
FsmSpec build_dk_discriminator(std::size_t d, std::size_t k);

// log2 of the Perron-Frobenius eigenvalue of the (k+1)-state run-length graph.
double dk_capacity(std::size_t d, std::size_t k);

// Number of length-n strings accepted by build_dk_discriminator(d, k), counted
// with the transfer matrix of the machine.
BigInt dk_count(std::size_t d, std::size_t k, std::size_t n);

// Number of length-n strings accepted by an arbitrary output-table machine
// (no side information), by transfer matrix.
BigInt count_accepted(const FsmSpec& fsm, std::size_t n);

}  // namespace secrecy
