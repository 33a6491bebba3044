#include "secrecy/type_class.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "secrecy/entropy.hpp"
#include "secrecy/errors.hpp"

namespace secrecy {

const char* to_string(TypeClassKind kind) {
    switch (kind) {
        case TypeClassKind::symbol_state: return "symbol-state";
        case TypeClassKind::block: return "block";
        case TypeClassKind::markov: return "markov";
        case TypeClassKind::si_symbol_state: return "si-symbol-state";
        case TypeClassKind::si_block: return "si-block";
    }
    return "?";
}

TypeClassKind type_class_kind_from_string(const std::string& name) {
    for (auto kind : {TypeClassKind::symbol_state, TypeClassKind::block, TypeClassKind::markov,
                      TypeClassKind::si_symbol_state, TypeClassKind::si_block})
        if (name == to_string(kind)) return kind;
    throw ValidationError("unknown type-class kind '" + name + "'");
}

bool uses_side_info(TypeClassKind kind) {
    return kind == TypeClassKind::si_symbol_state || kind == TypeClassKind::si_block;
}

FsmSpec single_state_fsm(std::size_t alphabet_size) { return build_shift_register_fsm(0, alphabet_size); }

namespace {

bool is_block_kind(TypeClassKind kind) { return kind == TypeClassKind::block || kind == TypeClassKind::si_block; }

FsmSpec prepare_machine(const ClassSpec& spec, std::size_t alphabet_size) {
    if (spec.kind == TypeClassKind::markov) return build_shift_register_fsm(spec.order, alphabet_size);
    FsmSpec fsm = spec.fsm ? *spec.fsm : single_state_fsm(alphabet_size);
    if (fsm.alphabet_size() != alphabet_size)
        throw ValidationError("machine reads " + std::to_string(fsm.alphabet_size()) + " symbols but the alphabet has " +
                              std::to_string(alphabet_size));
    if (fsm.has_side_info() && !uses_side_info(spec.kind))
        throw ValidationError(std::string("machine reads side information; use the si variant of the ") +
                              to_string(spec.kind) + " kind");
    if (is_block_kind(spec.kind)) {
        if (spec.order == 0) throw ValidationError("block length must be positive");
        return fsm;
    }
    return fsm.time_invariant() ? fsm : unroll_periodic(fsm);
}

void check_side_info(const ClassSpec& spec, std::size_t n, const std::optional<SymbolSequence>& y) {
    if (uses_side_info(spec.kind)) {
        if (!y) throw ValidationError(std::string(to_string(spec.kind)) + " classes need side information");
        if (y->size() != n) throw ValidationError("side information length differs from sequence length");
    }
}

}  // namespace

CountTable empty_counts(const ClassSpec& spec, const Alphabet& alphabet, std::size_t n,
                        const std::optional<SymbolSequence>& y) {
    check_side_info(spec, n, y);
    const FsmSpec fsm = prepare_machine(spec, alphabet.size());
    const std::size_t alpha = alphabet.size();
    const std::size_t s = fsm.state_count();
    switch (spec.kind) {
        case TypeClassKind::symbol_state: return CountTable::zeros(CountKind::symbol_state, alpha, s);
        case TypeClassKind::si_symbol_state:
            return CountTable::zeros(CountKind::si_symbol_state, alpha, s, y->alphabet_size());
        case TypeClassKind::block: return CountTable::zeros(CountKind::block, alpha, s, 0, spec.order);
        case TypeClassKind::si_block:
            return CountTable::zeros(CountKind::si_block, alpha, s, y->alphabet_size(), spec.order);
        case TypeClassKind::markov: {
            CountTable t = CountTable::zeros(CountKind::symbol_state, alpha, s);
            t.cyclic = true;
            return t;
        }
    }
    throw ValidationError("unknown type-class kind");
}

TypeClassDescriptor describe(const ClassSpec& spec, const SymbolSequence& x, const std::optional<SymbolSequence>& y) {
    check_side_info(spec, x.size(), y);
    TypeClassDescriptor desc;
    desc.kind = spec.kind;
    desc.fsm = prepare_machine(spec, x.alphabet_size());
    desc.alphabet = x.alphabet();
    desc.order = spec.order;
    desc.n = x.size();
    if (uses_side_info(spec.kind)) desc.y = y;
    desc.counts = counts_of(desc, x);
    return desc;
}

TypeClassDescriptor describe_counts(const ClassSpec& spec, const Alphabet& alphabet, std::size_t n, CountTable counts,
                                    const std::optional<SymbolSequence>& y) {
    const CountTable shape = empty_counts(spec, alphabet, n, y);
    if (counts.kind != shape.kind || counts.counts.size() != shape.counts.size() ||
        counts.states != shape.states || counts.alphabet_size != shape.alphabet_size ||
        counts.block_length != shape.block_length || counts.si_alphabet_size != shape.si_alphabet_size)
        throw ValidationError("count table does not have the shape of a " + std::string(to_string(spec.kind)) +
                              " table for this machine");
    TypeClassDescriptor desc;
    desc.kind = spec.kind;
    desc.fsm = prepare_machine(spec, alphabet.size());
    desc.alphabet = alphabet;
    desc.order = spec.order;
    desc.n = n;
    if (uses_side_info(spec.kind)) desc.y = y;
    counts.cyclic = shape.cyclic;
    desc.counts = std::move(counts);
    return desc;
}

std::uint64_t counted_items(const ClassSpec& spec, std::size_t n) {
    if (is_block_kind(spec.kind)) {
        if (spec.order == 0 || n % spec.order != 0) throw ValidationError("block length does not divide n");
        return n / spec.order;
    }
    return n;
}

CountTable counts_of(const TypeClassDescriptor& desc, const SymbolSequence& x) {
    if (x.size() != desc.n) throw ValidationError("sequence length differs from the class length");
    switch (desc.kind) {
        case TypeClassKind::symbol_state: return collect_counts(desc.fsm, x);
        case TypeClassKind::si_symbol_state: return collect_counts(desc.fsm, x, desc.y);
        case TypeClassKind::block: return collect_block_counts(desc.fsm, x, desc.order);
        case TypeClassKind::si_block: return collect_block_counts(desc.fsm, x, desc.order, desc.y);
        case TypeClassKind::markov: return collect_counts(desc.fsm, x, std::nullopt, true);
    }
    throw ValidationError("unknown type-class kind");
}

bool in_class(const TypeClassDescriptor& desc, const SymbolSequence& x) {
    if (x.size() != desc.n || x.alphabet_size() != desc.alphabet.size()) return false;
    return counts_of(desc, x).counts == desc.counts.counts;
}

namespace {

// Class members as walks through a labelled graph: at step i the walk sits in
// state z, sees context c_i (the y symbol or y-block, 0 without side
// information) and takes label a (a symbol or an l-block), which uses up one
// unit of edge (z, c_i, a) and moves to next(z, c_i, a). A member uses every
// edge exactly `target` times. Markov classes are closed walks, one family
// per starting context.
struct WalkModel {
    std::size_t states = 0;
    std::size_t labels = 0;
    std::size_t contexts = 1;
    std::size_t steps = 0;
    std::size_t block_length = 1;
    std::size_t alphabet_size = 0;
    std::vector<std::size_t> step_context;
    std::vector<State> next;
    std::vector<std::uint64_t> target;
    std::vector<std::pair<State, std::optional<State>>> starts;
    bool empty = false;

    std::size_t index(State z, std::size_t c, std::size_t a) const { return (z * contexts + c) * labels + a; }
    std::size_t context_at(std::size_t step) const { return step_context.empty() ? 0 : step_context[step]; }
    State source(std::size_t idx) const { return static_cast<State>(idx / (labels * contexts)); }
};

std::size_t checked_pow(std::size_t base, std::size_t e) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < e; ++i) {
        if (base != 0 && out > default_table_budget / base) throw BudgetError("type class exceeds the table budget");
        out *= base;
    }
    return out;
}

WalkModel build_model(const TypeClassDescriptor& desc) {
    WalkModel m;
    const FsmSpec& fsm = desc.fsm;
    const std::size_t alpha = desc.alphabet.size();
    m.states = fsm.state_count();
    m.alphabet_size = alpha;
    const bool block = is_block_kind(desc.kind);
    const bool si = uses_side_info(desc.kind);
    const std::size_t beta = si ? desc.y->alphabet_size() : 1;
    m.block_length = block ? desc.order : 1;
    if (block && desc.n % m.block_length != 0) throw ValidationError("block length does not divide n");
    m.labels = checked_pow(alpha, m.block_length);
    m.contexts = si ? checked_pow(beta, m.block_length) : 1;
    m.steps = desc.n / m.block_length;
    if (si) {
        m.step_context.resize(m.steps);
        for (std::size_t i = 0; i < m.steps; ++i) {
            std::size_t c = 0;
            for (std::size_t j = 0; j < m.block_length; ++j) c = c * beta + (*desc.y)[i * m.block_length + j];
            m.step_context[i] = c;
        }
    }
    const std::size_t cells = m.states * m.contexts * m.labels;
    if (cells > default_table_budget) throw BudgetError("type class exceeds the table budget");
    m.next.resize(cells);
    m.target.assign(cells, 0);
    const bool machine_si = fsm.has_side_info();
    for (State z = 0; z < m.states; ++z)
        for (std::size_t c = 0; c < m.contexts; ++c)
            for (std::size_t a = 0; a < m.labels; ++a) {
                const std::size_t idx = m.index(z, c, a);
                if (block)
                    m.next[idx] = block_transition(fsm, z, a, m.block_length, machine_si ? c : 0);
                else
                    m.next[idx] = fsm.next(z, static_cast<Symbol>(a), machine_si ? static_cast<Symbol>(c) : 0);
            }

    const CountTable& t = desc.counts;
    if (block) {
        for (State z = 0; z < m.states; ++z)
            for (State z2 = 0; z2 < m.states; ++z2)
                for (std::size_t c = 0; c < m.contexts; ++c)
                    for (std::size_t a = 0; a < m.labels; ++a) {
                        const auto v = si ? t.counts[t.si_block_index(z, z2, c, a)] : t.counts[t.block_index(z, z2, a)];
                        if (v == 0) continue;
                        const std::size_t idx = m.index(z, c, a);
                        if (m.next[idx] != z2) m.empty = true;
                        m.target[idx] += v;
                    }
    } else {
        // symbol_state [z][x] and si_symbol_state [z][y][x] share the walk layout.
        for (std::size_t i = 0; i < cells; ++i) m.target[i] = t.counts[i];
    }
    std::uint64_t total = 0;
    for (const auto v : m.target) total += v;
    if (total != m.steps) m.empty = true;
    if (si) {
        // Every step must find its own context among the counts.
        std::vector<std::uint64_t> per_context(m.contexts, 0), need(m.contexts, 0);
        for (std::size_t i = 0; i < cells; ++i) per_context[(i / m.labels) % m.contexts] += m.target[i];
        for (const auto c : m.step_context) ++need[c];
        if (per_context != need) m.empty = true;
    }

    if (desc.kind == TypeClassKind::markov) {
        for (State z = 0; z < m.states; ++z) {
            std::uint64_t out = 0;
            for (std::size_t a = 0; a < m.labels; ++a) out += m.target[m.index(z, 0, a)];
            if (out > 0) m.starts.emplace_back(z, z);
        }
        if (m.starts.empty()) m.starts.emplace_back(fsm.initial_state(), fsm.initial_state());
    } else {
        m.starts.emplace_back(fsm.initial_state(), std::nullopt);
    }
    return m;
}

std::vector<std::size_t> to_labels(const WalkModel& m, const SymbolSequence& x) {
    std::vector<std::size_t> out(m.steps);
    for (std::size_t i = 0; i < m.steps; ++i) {
        std::size_t b = 0;
        for (std::size_t j = 0; j < m.block_length; ++j) b = b * m.alphabet_size + x[i * m.block_length + j];
        out[i] = b;
    }
    return out;
}

struct Cursor {
    State z = 0;
    std::optional<State> end;
    std::vector<std::uint64_t> residual;
    bool alive = true;
    BigInt weight;            // trail engine: multinomial product of the residual rows
    std::uint64_t code = 0;   // dp engine: mixed-radix residual index
};

class Engine {
public:
    explicit Engine(const WalkModel& m) : m_(m) {
        for (std::size_t i = 0; i < m.target.size(); ++i)
            if (m.target[i] > 0) entries_.push_back(i);
    }
    virtual ~Engine() = default;
    virtual void init(Cursor& c) = 0;
    // Completions of the walk after the cursor takes edge `idx` at `step`.
    virtual BigInt after(const Cursor& c, std::size_t step, std::size_t idx) = 0;
    virtual BigInt total(const Cursor& c, std::size_t step) = 0;
    virtual void advance(Cursor& c, std::size_t idx) {
        --c.residual[idx];
        c.z = m_.next[idx];
    }

protected:
    const WalkModel& m_;
    std::vector<std::size_t> entries_;  // cells with a non-zero target
};

// Memoized count over (state, residual counts); the step is implied by the
// number of units already used.
class DpEngine final : public Engine {
public:
    DpEngine(const WalkModel& m, std::uint64_t budget) : Engine(m), slot_(m.target.size(), npos) {
        std::uint64_t product = 1;
        for (std::size_t k = 0; k < entries_.size(); ++k) {
            const std::uint64_t radix = m.target[entries_[k]] + 1;
            if (product > budget / radix)
                throw BudgetError("exact counting needs more than " + std::to_string(budget) +
                                  " residual tables; reduce n or the class size");
            stride_.push_back(product);
            product *= radix;
            slot_[entries_[k]] = k;
        }
        memo_.resize(m.states + 1);
    }

    void init(Cursor& c) override { c.code = code_of(c.residual); }

    BigInt after(const Cursor& c, std::size_t step, std::size_t idx) override {
        return go(m_.next[idx], step + 1, c.code - stride_[slot_[idx]], c.end);
    }
    BigInt total(const Cursor& c, std::size_t step) override { return go(c.z, step, c.code, c.end); }
    void advance(Cursor& c, std::size_t idx) override {
        c.code -= stride_[slot_[idx]];
        Engine::advance(c, idx);
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::uint64_t code_of(const std::vector<std::uint64_t>& residual) const {
        std::uint64_t code = 0;
        for (std::size_t k = 0; k < entries_.size(); ++k) code += residual[entries_[k]] * stride_[k];
        return code;
    }
    std::uint64_t residual_at(std::uint64_t code, std::size_t k) const {
        return (code / stride_[k]) % (m_.target[entries_[k]] + 1);
    }

    BigInt go(State z, std::size_t step, std::uint64_t code, std::optional<State> end) {
        if (step == m_.steps) return BigInt(code == 0 && (!end || *end == z) ? 1 : 0);
        auto& memo = memo_[end ? *end : m_.states];
        const std::uint64_t key = code * m_.states + z;
        if (const auto it = memo.find(key); it != memo.end()) return it->second;
        BigInt sum = 0;
        const std::size_t c = m_.context_at(step);
        for (std::size_t a = 0; a < m_.labels; ++a) {
            const std::size_t idx = m_.index(z, c, a);
            const std::size_t k = slot_[idx];
            if (k == npos || residual_at(code, k) == 0) continue;
            sum += go(m_.next[idx], step + 1, code - stride_[k], end);
        }
        memo.emplace(key, sum);
        return sum;
    }

    std::vector<std::size_t> slot_;
    std::vector<std::uint64_t> stride_;
    std::vector<std::unordered_map<std::uint64_t, BigInt>> memo_;
};

// Determinant by fraction-free Gaussian elimination.
BigInt bareiss_det(std::vector<std::vector<BigInt>> a) {
    const std::size_t n = a.size();
    if (n == 0) return 1;
    BigInt sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                BigInt v = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                a[i][j] = std::move(v);
            }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

// Walks that use a given multiset of labelled edges are Euler trails of the
// multigraph. By the BEST theorem, counted through last-exit arborescences,
// the number of such label sequences from u to w is
//
//   t_w * d(w)! * prod_{v != w} (d(v) - 1)! / prod_e R(e)!
//   = t_w * F / prod_{v != w, d(v) > 0} d(v),
//
// where d is the out-degree, t_w the number of spanning in-trees rooted at w
// (a Laplacian minor) and F = prod_v multinomial(d(v); R(v, .)). F changes by
// R(z,a)/d(z) per step, so cursors carry it along.
class TrailEngine final : public Engine {
public:
    explicit TrailEngine(const WalkModel& m) : Engine(m) {
        if (m.contexts != 1) throw ValidationError("trail counting needs a class without side information");
        std::uint64_t top = 0;
        for (const auto v : m.target) top += v;
        fact_.resize(top + 1);
        fact_[0] = 1;
        for (std::uint64_t i = 1; i <= top; ++i) fact_[i] = fact_[i - 1] * static_cast<unsigned long>(i);
        // Local numbering of the vertices any walk can touch.
        local_.assign(m.states, npos);
        auto touch = [&](State v) {
            if (local_[v] == npos) {
                local_[v] = vertices_.size();
                vertices_.push_back(v);
            }
        };
        for (const auto& [start, end] : m.starts) {
            touch(start);
            if (end) touch(*end);
        }
        for (const auto idx : entries_) {
            touch(m.source(idx));
            touch(m.next[idx]);
        }
    }

    void init(Cursor& c) override {
        const std::size_t k = vertices_.size();
        std::vector<std::uint64_t> dout(k, 0);
        BigInt den = 1;
        for (const auto idx : entries_) {
            dout[local_[m_.source(idx)]] += c.residual[idx];
            den *= fact_[c.residual[idx]];
        }
        BigInt num = 1;
        for (const auto d : dout) num *= fact_[d];
        mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        c.weight = std::move(num);
    }

    BigInt after(const Cursor& c, std::size_t, std::size_t idx) override {
        const std::uint64_t r = c.residual[idx];
        const std::uint64_t d = out_degree(c, m_.source(idx));
        BigInt w = c.weight * static_cast<unsigned long>(r);
        mpz_divexact_ui(w.get_mpz_t(), w.get_mpz_t(), static_cast<unsigned long>(d));
        return count(m_.next[idx], c.end, c.residual, idx, w);
    }
    BigInt total(const Cursor& c, std::size_t) override {
        return count(c.z, c.end, c.residual, npos, c.weight);
    }
    void advance(Cursor& c, std::size_t idx) override {
        const std::uint64_t d = out_degree(c, m_.source(idx));
        c.weight *= static_cast<unsigned long>(c.residual[idx]);
        mpz_divexact_ui(c.weight.get_mpz_t(), c.weight.get_mpz_t(), static_cast<unsigned long>(d));
        Engine::advance(c, idx);
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::uint64_t out_degree(const Cursor& c, State v) const {
        std::uint64_t d = 0;
        for (std::size_t a = 0; a < m_.labels; ++a) d += c.residual[m_.index(v, 0, a)];
        return d;
    }

    BigInt count(State u, std::optional<State> end, const std::vector<std::uint64_t>& residual, std::size_t removed,
                 const BigInt& weight) const {
        const std::size_t k = vertices_.size();
        auto r_of = [&](std::size_t idx) { return residual[idx] - (idx == removed ? 1 : 0); };
        std::vector<std::int64_t> dout(k, 0), din(k, 0);
        std::uint64_t total = 0;
        for (const auto idx : entries_) {
            const auto r = static_cast<std::int64_t>(r_of(idx));
            if (r == 0) continue;
            dout[local_[m_.source(idx)]] += r;
            din[local_[m_.next[idx]]] += r;
            total += static_cast<std::uint64_t>(r);
        }
        if (total == 0) return BigInt(!end || *end == u ? 1 : 0);
        const std::size_t lu = local_[u];
        if (lu == npos || dout[lu] == 0) return 0;

        // End vertex from the degree balance d_in - d_out = [v = w] - [v = u].
        std::size_t lw = npos;
        if (end) {
            lw = local_[*end];
            if (lw == npos) return 0;
        } else {
            lw = lu;
            for (std::size_t v = 0; v < k; ++v) {
                const std::int64_t excess = din[v] - dout[v] + (v == lu ? 1 : 0);
                if (excess == 1 && v != lu) {
                    lw = v;
                    break;
                }
            }
        }
        for (std::size_t v = 0; v < k; ++v)
            if (din[v] - dout[v] != (v == lw ? 1 : 0) - (v == lu ? 1 : 0)) return 0;

        // Laplacian minor over the vertices with out-edges, root w removed.
        std::vector<std::size_t> row(k, npos);
        std::size_t dim = 0;
        for (std::size_t v = 0; v < k; ++v)
            if (v != lw && dout[v] > 0) row[v] = dim++;
        std::vector<std::vector<BigInt>> lap(dim, std::vector<BigInt>(dim, 0));
        for (const auto idx : entries_) {
            const auto r = r_of(idx);
            if (r == 0) continue;
            const std::size_t a = local_[m_.source(idx)], b = local_[m_.next[idx]];
            if (a == b || row[a] == npos) continue;
            const long rr = static_cast<long>(r);
            lap[row[a]][row[a]] += rr;
            if (row[b] != npos) lap[row[a]][row[b]] -= rr;
        }
        BigInt trees = bareiss_det(std::move(lap));
        if (trees == 0) return 0;
        BigInt result = weight * trees;
        BigInt den = 1;
        for (std::size_t v = 0; v < k; ++v)
            if (row[v] != npos) den *= static_cast<unsigned long>(dout[v]);
        mpz_divexact(result.get_mpz_t(), result.get_mpz_t(), den.get_mpz_t());
        return result;
    }

    std::vector<BigInt> fact_;
    std::vector<std::size_t> local_;
    std::vector<State> vertices_;
};

// For machines whose state path ignores the labels (any single-state machine,
// with or without side information) the class is a product of multinomials,
// one per (state, context) row.
class ProductEngine final : public Engine {
public:
    explicit ProductEngine(const WalkModel& m) : Engine(m) {
        if (!fixed_path(m)) throw ValidationError("product counting needs a state path that ignores the symbols");
        std::uint64_t top = 0;
        for (const auto v : m.target) top += v;
        fact_.resize(top + 1);
        fact_[0] = 1;
        for (std::uint64_t i = 1; i <= top; ++i) fact_[i] = fact_[i - 1] * static_cast<unsigned long>(i);
    }

    static bool fixed_path(const WalkModel& m) {
        for (State z = 0; z < m.states; ++z)
            for (std::size_t c = 0; c < m.contexts; ++c)
                for (std::size_t a = 1; a < m.labels; ++a)
                    if (m.next[m.index(z, c, a)] != m.next[m.index(z, c, 0)]) return false;
        return true;
    }

    void init(Cursor& c) override {
        std::vector<std::uint64_t> visits(m_.states * m_.contexts, 0);
        State z = c.z;
        for (std::size_t i = 0; i < m_.steps; ++i) {
            const std::size_t ctx = m_.context_at(i);
            ++visits[z * m_.contexts + ctx];
            z = m_.next[m_.index(z, ctx, 0)];
        }
        c.weight = c.end && *c.end != z ? 0 : 1;
        for (std::size_t row = 0; row < visits.size() && c.weight != 0; ++row) {
            std::uint64_t d = 0;
            for (std::size_t a = 0; a < m_.labels; ++a) d += c.residual[row * m_.labels + a];
            if (d != visits[row]) {
                c.weight = 0;
                break;
            }
            BigInt w = fact_[d];
            for (std::size_t a = 0; a < m_.labels; ++a)
                mpz_divexact(w.get_mpz_t(), w.get_mpz_t(), fact_[c.residual[row * m_.labels + a]].get_mpz_t());
            c.weight *= w;
        }
    }

    BigInt after(const Cursor& c, std::size_t, std::size_t idx) override { return shrink(c, idx); }
    BigInt total(const Cursor& c, std::size_t) override { return c.weight; }
    void advance(Cursor& c, std::size_t idx) override {
        c.weight = shrink(c, idx);
        Engine::advance(c, idx);
    }

private:
    BigInt shrink(const Cursor& c, std::size_t idx) const {
        const std::size_t row = idx / m_.labels;
        std::uint64_t d = 0;
        for (std::size_t a = 0; a < m_.labels; ++a) d += c.residual[row * m_.labels + a];
        BigInt w = c.weight * static_cast<unsigned long>(c.residual[idx]);
        mpz_divexact_ui(w.get_mpz_t(), w.get_mpz_t(), static_cast<unsigned long>(d));
        return w;
    }

    std::vector<BigInt> fact_;
};

}  // namespace

struct ClassEnumerator::Impl {
    TypeClassDescriptor desc;
    WalkModel model;
    std::unique_ptr<Engine> engine;
    std::optional<BigInt> size;

    std::vector<Cursor> fresh_cursors() {
        std::vector<Cursor> out;
        for (const auto& [start, end] : model.starts) {
            Cursor c;
            c.z = start;
            c.end = end;
            c.residual = model.target;
            engine->init(c);
            out.push_back(std::move(c));
        }
        return out;
    }

    void step_all(std::vector<Cursor>& cursors, std::size_t step, std::size_t label) {
        const std::size_t ctx = model.context_at(step);
        for (auto& c : cursors) {
            if (!c.alive) continue;
            const std::size_t idx = model.index(c.z, ctx, label);
            if (c.residual[idx] == 0)
                c.alive = false;
            else
                engine->advance(c, idx);
        }
    }
};

ClassEnumerator::ClassEnumerator(const TypeClassDescriptor& desc, CountingBackend backend, std::uint64_t dp_budget)
    : impl_(std::make_unique<Impl>()) {
    impl_->desc = desc;
    impl_->model = build_model(desc);
    const bool context_free = impl_->model.contexts == 1;
    const bool automatic = backend == CountingBackend::automatic;
    if (backend == CountingBackend::product || (automatic && ProductEngine::fixed_path(impl_->model)))
        impl_->engine = std::make_unique<ProductEngine>(impl_->model);
    else if (backend == CountingBackend::trail || (automatic && context_free))
        impl_->engine = std::make_unique<TrailEngine>(impl_->model);
    else
        impl_->engine = std::make_unique<DpEngine>(impl_->model, dp_budget);
}

ClassEnumerator::~ClassEnumerator() = default;
ClassEnumerator::ClassEnumerator(ClassEnumerator&&) noexcept = default;
ClassEnumerator& ClassEnumerator::operator=(ClassEnumerator&&) noexcept = default;

const BigInt& ClassEnumerator::size() {
    if (!impl_->size) {
        BigInt total = 0;
        if (!impl_->model.empty)
            for (auto& c : impl_->fresh_cursors()) total += impl_->engine->total(c, 0);
        impl_->size = total;
    }
    return *impl_->size;
}

BigInt ClassEnumerator::rank(const SymbolSequence& x) {
    if (impl_->model.empty || !in_class(impl_->desc, x))
        throw ValidationError("sequence is not a member of the type class");
    const WalkModel& m = impl_->model;
    const auto labels = to_labels(m, x);
    auto cursors = impl_->fresh_cursors();
    BigInt rank = 0;
    for (std::size_t i = 0; i < m.steps; ++i) {
        const std::size_t ctx = m.context_at(i);
        for (const auto& c : cursors) {
            if (!c.alive) continue;
            for (std::size_t a = 0; a < labels[i]; ++a) {
                const std::size_t idx = m.index(c.z, ctx, a);
                if (c.residual[idx] > 0) rank += impl_->engine->after(c, i, idx);
            }
        }
        impl_->step_all(cursors, i, labels[i]);
    }
    return rank;
}

SymbolSequence ClassEnumerator::unrank(const BigInt& r) {
    if (r < 0 || r >= size()) throw ValidationError("rank " + big_to_string(r) + " outside the type class");
    const WalkModel& m = impl_->model;
    auto cursors = impl_->fresh_cursors();
    BigInt rest = r;
    std::vector<Symbol> out;
    out.reserve(impl_->desc.n);
    for (std::size_t i = 0; i < m.steps; ++i) {
        const std::size_t ctx = m.context_at(i);
        std::size_t chosen = m.labels;
        for (std::size_t a = 0; a < m.labels && chosen == m.labels; ++a) {
            BigInt here = 0;
            for (const auto& c : cursors) {
                if (!c.alive) continue;
                const std::size_t idx = m.index(c.z, ctx, a);
                if (c.residual[idx] > 0) here += impl_->engine->after(c, i, idx);
            }
            if (rest < here)
                chosen = a;
            else
                rest -= here;
        }
        if (chosen == m.labels) throw ValidationError("rank outside the type class");
        impl_->step_all(cursors, i, chosen);
        const auto block = block_symbols(chosen, m.alphabet_size, m.block_length);
        out.insert(out.end(), block.begin(), block.end());
    }
    return SymbolSequence(impl_->desc.alphabet, std::move(out));
}

BigInt type_class_size_exact(const TypeClassDescriptor& desc, CountingBackend backend, std::uint64_t dp_budget) {
    ClassEnumerator e(desc, backend, dp_budget);
    return e.size();
}

SizeLowerBound type_class_size_lower_bound(const CountTable& counts) {
    if (counts.kind != CountKind::symbol_state) throw ValidationError("size bound needs a symbol-state table");
    SizeLowerBound out;
    const std::uint64_t n = counts.total();
    out.condition_met = std::all_of(counts.counts.begin(), counts.counts.end(), [](auto c) { return c >= 1; });
    if (n == 0) return out;
    const double nd = static_cast<double>(n);
    const double s = static_cast<double>(counts.states);
    const double alpha = static_cast<double>(counts.alphabet_size);
    out.log2_value = nd * cond_entropy(counts) - s * (alpha - 1) / 2 * std::log2(2 * std::numbers::pi * nd);
    return out;
}

double block_type_size_lower_bound(const CountTable& counts, std::size_t s, std::size_t alphabet_size,
                                   std::size_t block_length, std::size_t n) {
    if (!counts.is_block()) throw ValidationError("block size bound needs a block table");
    if (n == 0) return 0.0;
    const auto marginal = counts.symbol_marginal();
    const double l = static_cast<double>(block_length);
    const double nd = static_cast<double>(n);
    const double sd = static_cast<double>(s);
    const double h = entropy_of_counts(marginal) / l;
    const double labels = std::pow(static_cast<double>(alphabet_size), l);
    return nd * (h - 2 * std::log2(sd) / l - (l * sd * sd * labels / nd) * std::log2(nd / l + 1));
}

}  // namespace secrecy
