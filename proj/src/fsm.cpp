#include "secrecy/fsm.hpp"

#include <cmath>
#include <string>

#include "secrecy/errors.hpp"

namespace secrecy {

FsmSpec::FsmSpec(Alphabet alphabet, std::size_t states, State initial, std::size_t period,
                 std::optional<Alphabet> si_alphabet, std::vector<State> next,
                 std::optional<std::vector<std::uint8_t>> output)
    : alphabet_(std::move(alphabet)),
      states_(states),
      initial_(initial),
      period_(period),
      si_alphabet_(std::move(si_alphabet)),
      next_(std::move(next)),
      output_(std::move(output)) {
    if (alphabet_.size() == 0) throw ValidationError("machine alphabet is empty");
    if (states_ == 0) throw ValidationError("machine needs at least one state");
    if (period_ == 0) throw ValidationError("period must be at least 1");
    if (initial_ >= states_)
        throw ValidationError("initial state " + std::to_string(initial_) + " out of range");
    const std::size_t cells = states_ * alphabet_.size() * beta1();
    if (next_.size() != period_ * cells)
        throw ValidationError("next-state table has " + std::to_string(next_.size()) + " entries, expected " +
                              std::to_string(period_ * cells));
    for (std::size_t i = 0; i < next_.size(); ++i)
        if (next_[i] >= states_)
            throw ValidationError("next-state entry " + std::to_string(i) + " is " + std::to_string(next_[i]) +
                                  ", out of range for " + std::to_string(states_) + " states");
    if (output_) {
        if (output_->size() != cells)
            throw ValidationError("output table has " + std::to_string(output_->size()) + " entries, expected " +
                                  std::to_string(cells));
        for (std::size_t i = 0; i < output_->size(); ++i)
            if ((*output_)[i] > 1) throw ValidationError("output entry " + std::to_string(i) + " is not a bit");
    }
}

FsmSpec FsmSpec::from_rule(Alphabet alphabet, std::size_t states, State initial,
                           const std::function<State(State, Symbol)>& next,
                           const std::function<bool(State, Symbol)>& output) {
    const std::size_t alpha = alphabet.size();
    std::vector<State> table(states * alpha);
    std::optional<std::vector<std::uint8_t>> out;
    if (output) out.emplace(states * alpha);
    for (State z = 0; z < states; ++z)
        for (Symbol x = 0; x < alpha; ++x) {
            table[z * alpha + x] = next(z, x);
            if (output) (*out)[z * alpha + x] = output(z, x) ? 1 : 0;
        }
    return FsmSpec(std::move(alphabet), states, initial, 1, std::nullopt, std::move(table), std::move(out));
}

FsmSpec FsmSpec::with_initial(State initial) const {
    return FsmSpec(alphabet_, states_, initial, period_, si_alphabet_, next_, output_);
}

FsmSpec FsmSpec::without_output() const {
    return FsmSpec(alphabet_, states_, initial_, period_, si_alphabet_, next_, std::nullopt);
}

void check_inputs(const FsmSpec& fsm, const SymbolSequence& x, const SymbolSequence* y) {
    if (x.alphabet_size() != fsm.alphabet_size())
        throw ValidationError("sequence alphabet has " + std::to_string(x.alphabet_size()) +
                              " symbols but the machine reads " + std::to_string(fsm.alphabet_size()));
    if (fsm.has_side_info()) {
        if (y == nullptr) throw ValidationError("machine reads side information but none was supplied");
        if (y->size() != x.size())
            throw ValidationError("side information length " + std::to_string(y->size()) +
                                  " differs from sequence length " + std::to_string(x.size()));
        if (y->alphabet_size() != fsm.si_alphabet_size())
            throw ValidationError("side-information alphabet size mismatch");
    } else if (y != nullptr) {
        throw ValidationError("side information supplied to a machine that does not read it");
    }
}

std::vector<State> run_states(const FsmSpec& fsm, std::span<const Symbol> x, std::span<const Symbol> y,
                              State start) {
    std::vector<State> states;
    states.reserve(x.size() + 1);
    State z = start;
    states.push_back(z);
    const std::size_t period = fsm.period();
    for (std::size_t i = 0; i < x.size(); ++i) {
        z = fsm.next(z, x[i], y.empty() ? 0 : y[i], i % period);
        states.push_back(z);
    }
    return states;
}

State final_state(const FsmSpec& fsm, std::span<const Symbol> x, std::span<const Symbol> y, State start,
                  std::size_t phase0) {
    State z = start;
    const std::size_t period = fsm.period();
    for (std::size_t i = 0; i < x.size(); ++i) z = fsm.next(z, x[i], y.empty() ? 0 : y[i], (phase0 + i) % period);
    return z;
}

StateTrace run_discriminator(const FsmSpec& fsm, const SymbolSequence& x, const std::optional<SymbolSequence>& y) {
    if (!fsm.has_output()) throw ValidationError("discriminator has no output table");
    check_inputs(fsm, x, y ? &*y : nullptr);
    const auto ys = y ? y->symbols() : std::span<const Symbol>{};
    StateTrace trace;
    trace.states = run_states(fsm, x.symbols(), ys, fsm.initial_state());
    trace.outputs.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const bool u = fsm.output(trace.states[i], x[i], ys.empty() ? 0 : ys[i]);
        trace.outputs[i] = u ? 1 : 0;
        if (u && !trace.first_violation) trace.first_violation = i;
    }
    trace.verdict = trace.first_violation ? Verdict::reject : Verdict::accept;
    return trace;
}

bool accepts(const FsmSpec& fsm, std::span<const Symbol> x, std::span<const Symbol> y) {
    State z = fsm.initial_state();
    const std::size_t period = fsm.period();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Symbol yi = y.empty() ? 0 : y[i];
        if (fsm.output(z, x[i], yi)) return false;
        z = fsm.next(z, x[i], yi, i % period);
    }
    return true;
}

FsmSpec unroll_periodic(const FsmSpec& fsm) {
    const std::size_t s = fsm.state_count();
    const std::size_t l = fsm.period();
    const std::size_t alpha = fsm.alphabet_size();
    const std::size_t beta1 = std::max<std::size_t>(fsm.si_alphabet_size(), 1);
    const std::size_t states = s * l;
    std::vector<State> next(states * alpha * beta1);
    std::optional<std::vector<std::uint8_t>> out;
    if (fsm.has_output()) out.emplace(states * alpha * beta1);
    for (std::size_t phase = 0; phase < l; ++phase)
        for (State z = 0; z < s; ++z) {
            const State combined = static_cast<State>(phase * s + z);
            for (Symbol x = 0; x < alpha; ++x)
                for (Symbol y = 0; y < beta1; ++y) {
                    const std::size_t cell = (combined * alpha + x) * beta1 + y;
                    next[cell] = static_cast<State>(((phase + 1) % l) * s + fsm.next(z, x, y, phase));
                    if (out) (*out)[cell] = fsm.output(z, x, y) ? 1 : 0;
                }
        }
    return FsmSpec(fsm.alphabet(), states, fsm.initial_state(), 1, fsm.si_alphabet(), std::move(next),
                   std::move(out));
}

FsmSpec build_shift_register_fsm(std::size_t order, std::size_t alphabet_size, std::size_t state_budget) {
    if (alphabet_size == 0) throw ValidationError("alphabet size must be at least 1");
    std::size_t states = 1;
    for (std::size_t i = 0; i < order; ++i) {
        if (states > state_budget / alphabet_size)
            throw BudgetError("shift register of order " + std::to_string(order) + " over " +
                              std::to_string(alphabet_size) + " symbols exceeds the state budget");
        states *= alphabet_size;
    }
    const std::size_t modulus = states;
    return FsmSpec::from_rule(Alphabet::numeric(alphabet_size), states, 0, [&](State z, Symbol x) {
        return static_cast<State>((static_cast<std::size_t>(z) * alphabet_size + x) % modulus);
    });
}

FsmSpec build_dk_discriminator(std::size_t d, std::size_t k) {
    if (d > k) throw ValidationError("(d,k) constraint needs d <= k");
    // States 0..k count zeroes since the last one. States k+1..k+d count the
    // zeroes of a leading run that is still shorter than d.
    const std::size_t states = k + 1 + d;
    const State initial = d == 0 ? 0 : static_cast<State>(k + 1);
    auto leading = [k](State z) { return z > k; };
    auto run_length = [k, leading](State z) -> std::size_t { return leading(z) ? z - (k + 1) : z; };
    auto next = [=](State z, Symbol x) -> State {
        const std::size_t r = run_length(z);
        if (x == 1) return 0;
        if (leading(z)) return r + 1 < d ? z + 1 : static_cast<State>(r + 1);
        return r < k ? z + 1 : 0;
    };
    auto output = [=](State z, Symbol x) -> bool {
        const std::size_t r = run_length(z);
        if (x == 0) return r >= k;
        return !leading(z) && r < d;
    };
    return FsmSpec::from_rule(Alphabet::from_chars("01"), states, initial, next, output);
}

double dk_capacity(std::size_t d, std::size_t k) {
    if (d > k) throw ValidationError("(d,k) constraint needs d <= k");
    const std::size_t n = k + 1;
    // Power iteration on A + I, whose dominant eigenvalue is strictly dominant
    // even when the run-length graph is periodic.
    // The min and max of the ratios (Av)_i / v_i bracket the eigenvalue
    // (Collatz-Wielandt); iterate until the bracket is narrower than the tolerance.
    std::vector<double> v(n, 1.0), w(n);
    double lambda = 0.0;
    constexpr double tolerance = 1e-9;
    constexpr std::size_t max_iterations = 1'000'000;
    for (std::size_t it = 0; it < max_iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = v[i];
            if (i < k) acc += v[i + 1];
            if (i >= d) acc += v[0];
            w[i] = acc;
        }
        double lo = w[0] / v[0], hi = lo, norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            lo = std::min(lo, w[i] / v[i]);
            hi = std::max(hi, w[i] / v[i]);
            norm = std::max(norm, w[i]);
        }
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
        lambda = 0.5 * (lo + hi);
        if (hi - lo < tolerance) break;
    }
    return std::log2(lambda - 1.0);
}

BigInt count_accepted(const FsmSpec& fsm, std::size_t n) {
    if (!fsm.has_output()) throw ValidationError("discriminator has no output table");
    if (fsm.has_side_info()) throw ValidationError("counting needs a machine without side information");
    std::vector<BigInt> ways(fsm.state_count(), 0), next_ways(fsm.state_count());
    ways[fsm.initial_state()] = 1;
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& w : next_ways) w = 0;
        for (State z = 0; z < fsm.state_count(); ++z) {
            if (ways[z] == 0) continue;
            for (Symbol x = 0; x < fsm.alphabet_size(); ++x)
                if (!fsm.output(z, x)) next_ways[fsm.next(z, x, 0, i % fsm.period())] += ways[z];
        }
        ways.swap(next_ways);
    }
    BigInt total = 0;
    for (const auto& w : ways) total += w;
    return total;
}

BigInt dk_count(std::size_t d, std::size_t k, std::size_t n) {
    return count_accepted(build_dk_discriminator(d, k), n);
}

}  // namespace secrecy
