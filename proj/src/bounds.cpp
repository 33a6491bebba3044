#include "secrecy/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "secrecy/counts.hpp"
#include "secrecy/crypto.hpp"
#include "secrecy/entropy.hpp"
#include "secrecy/errors.hpp"
#include "secrecy/lz.hpp"

namespace secrecy {

namespace {

double log2s(std::size_t s) { return std::log2(static_cast<double>(s)); }

void finish(BoundRecord& b) { b.clamped = std::max(b.raw, 0.0); }

void require_states(std::size_t s) {
    if (s == 0) throw ValidationError("number of states must be at least 1");
}

}  // namespace

BoundRecord ziv_bound(const SymbolSequence& x, std::size_t s) {
    require_states(s);
    BoundRecord b;
    b.name = "ziv";
    b.derivation =
        "incremental-parse phrases grouped by (length, start state, end state); product of per-class counts, "
        "with the entropy of the length variable bounded by 1 + log(n/c + 1)";
    const ParseResult parse = lz78_parse(x);
    const double c = static_cast<double>(parse.complete_count());
    const double n = static_cast<double>(x.size());
    b.terms.emplace_back("c", c);
    if (x.empty() || c == 0) {
        b.raw = 0;
        finish(b);
        return b;
    }
    const double lead = c * std::log2(c) / n;
    const double state_penalty = 2 * c * log2s(s) / n;
    const double phrase_penalty = c / n;
    const double length_penalty = c * std::log2(n / c + 1) / n;
    b.terms.emplace_back("c log c / n", lead);
    b.terms.emplace_back("2 c log s / n", state_penalty);
    b.terms.emplace_back("c / n", phrase_penalty);
    b.terms.emplace_back("c log(n/c + 1) / n", length_penalty);
    b.raw = lead - state_penalty - phrase_penalty - length_penalty;
    finish(b);
    return b;
}

BoundRecord phrase_class_bound(const SymbolSequence& x, const FsmSpec& fsm) {
    BoundRecord b;
    b.name = "phrase-classes";
    b.derivation =
        "permuting complete phrases within each (length, start state, end state) class keeps the discriminator "
        "response; sum of c log c over the classes of this machine";
    const PhraseClassTable table = classify_phrases(lz78_parse(x), x, fsm);
    b.terms.emplace_back("classes", static_cast<double>(table.classes.size()));
    b.terms.emplace_back("H(L,Z,Z')", table.joint_entropy());
    b.raw = x.empty() ? 0.0 : phrase_replacement_bound(table) / static_cast<double>(x.size());
    finish(b);
    return b;
}

BoundRecord fsm_counter_bound(const SymbolSequence& x, const FsmSpec& fsm) {
    if (!fsm.time_invariant()) throw ValidationError("counter bound needs a time-invariant machine");
    BoundRecord b;
    b.name = "fsm-counter";
    b.derivation =
        "the acceptance set of a counter discriminator contains the finite-state type class; its size is at least "
        "2^{n H(X|Z)} over the polynomial factor (2 pi n)^{s(alpha-1)/2}";
    if (x.empty()) {
        finish(b);
        return b;
    }
    const CountTable counts = collect_counts(fsm, x);
    const double n = static_cast<double>(x.size());
    const double h = cond_entropy(counts);
    const double s = static_cast<double>(fsm.state_count());
    const double alpha = static_cast<double>(x.alphabet_size());
    const double penalty = s * (alpha - 1) / 2 * std::log2(2 * std::numbers::pi * n) / n;
    b.terms.emplace_back("H(X|Z)", h);
    b.terms.emplace_back("s(alpha-1)/2 log2(2 pi n) / n", penalty);
    b.flags.emplace_back("condition_met",
                         std::all_of(counts.counts.begin(), counts.counts.end(), [](auto c) { return c >= 1; }));
    b.raw = h - penalty;
    finish(b);
    return b;
}

BoundRecord shift_register_bound(const SymbolSequence& x, std::size_t s, std::size_t l_max) {
    require_states(s);
    if (l_max == 0) throw ValidationError("maximal order must be at least 1");
    BoundRecord b;
    b.name = "shift-register";
    b.derivation =
        "any s-state machine's cyclic conditional entropy dominates the order-l Markov conditional entropy "
        "less log s/(l+1); maximized over the order";
    if (x.empty()) {
        b.maximizer = {"order", 1};
        finish(b);
        return b;
    }
    const double n = static_cast<double>(x.size());
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 1;
    for (std::size_t l = 1; l <= l_max; ++l) {
        const double h = markov_cond_entropy(x, l);
        const double term = h - log2s(s) / static_cast<double>(l + 1);
        b.terms.emplace_back("H(X_l|X_0..X_{l-1}), l=" + std::to_string(l), h);
        if (term > best) {
            best = term;
            arg = l;
        }
    }
    const double alpha = static_cast<double>(x.alphabet_size());
    const double penalty = static_cast<double>(s) * (alpha - 1) / (2 * n) * std::log2(2 * std::numbers::pi * n);
    b.terms.emplace_back("log s / (l+1) at maximizer", log2s(s) / static_cast<double>(arg + 1));
    b.terms.emplace_back("s(alpha-1)/(2n) log2(2 pi n)", penalty);
    b.raw = best - penalty;
    b.maximizer = {"order", arg};
    finish(b);
    return b;
}

BoundRecord periodic_bound(const SymbolSequence& x, std::size_t s, std::size_t period) {
    require_states(s);
    if (period == 0) throw ValidationError("period must be at least 1");
    const std::size_t n = x.size();
    if (n == 0 || n % period != 0)
        throw ValidationError("no block length q*l with l = " + std::to_string(period) + " divides n = " +
                              std::to_string(n));
    BoundRecord b;
    b.name = "periodic";
    b.derivation =
        "block-level type class of the period-l machine read in blocks of q*l symbols; the s^2 alpha^{ql} block "
        "counts cost at most (m+1) choices each; maximized over q";
    const double nd = static_cast<double>(n);
    const double alpha = static_cast<double>(x.alphabet_size());
    const double sd = static_cast<double>(s);
    double best = -std::numeric_limits<double>::max();
    std::size_t arg = 1;
    double best_state = 0, best_count = 0;
    for (std::size_t q = 1; q * period <= n; ++q) {
        const std::size_t ql = q * period;
        if (n % ql != 0) continue;
        const double l = static_cast<double>(ql);
        const double count_penalty = (l * sd * sd * std::pow(alpha, l) / nd) * std::log2(nd / l + 1);
        if (!std::isfinite(count_penalty)) continue;
        const double state_penalty = 2 * log2s(s) / l;
        const double term = block_entropy(x, ql) - state_penalty - count_penalty;
        if (term > best) {
            best = term;
            arg = q;
            best_state = state_penalty;
            best_count = count_penalty;
        }
    }
    b.terms.emplace_back("H(X^{ql})/(ql) at maximizer", block_entropy(x, arg * period));
    b.terms.emplace_back("2 log s/(ql)", best_state);
    b.terms.emplace_back("(ql s^2 alpha^{ql}/n) log2(n/(ql) + 1)", best_count);
    b.raw = best;
    b.maximizer = {"q", arg};
    finish(b);
    return b;
}

BoundRecord si_lz_bound(const SymbolSequence& x, const SymbolSequence& y, std::size_t s) {
    require_states(s);
    BoundRecord b;
    b.name = "si-lz";
    b.derivation =
        "joint-parse phrases grouped by y-phrase and (start state, end state); sum of c_l log c_l less two "
        "log s per joint phrase; eps_n instantiated from the joint phrase count";
    const JointParseResult jp = joint_parse(x, y);
    const double n = static_cast<double>(x.size());
    const double c = static_cast<double>(jp.c_xy);
    b.terms.emplace_back("c(x,y)", c);
    b.terms.emplace_back("c(y)", static_cast<double>(jp.c_y));
    if (x.empty()) {
        finish(b);
        return b;
    }
    const double u = conditional_lz_length(jp);
    const double penalty = 2 * c * log2s(s) / n;
    b.terms.emplace_back("u(x|y) / n", u / n);
    b.terms.emplace_back("2 c(x,y) log s / n", penalty);
    if (n > 1 && c > 0) b.terms.emplace_back("eps_n", 1 - n / (c * std::log2(n)));
    b.flags.emplace_back("eps_n_instantiated", true);
    b.raw = u / n - penalty;
    finish(b);
    return b;
}

BoundRecord si_block_bound(const SymbolSequence& x, const SymbolSequence& y, std::size_t s, std::size_t block_length) {
    require_states(s);
    BoundRecord b;
    b.name = "si-block";
    b.derivation =
        "conditional block type class given the aligned y-blocks; s^2 (alpha beta)^l block counts cost at most "
        "(m+1) choices each";
    const double h = conditional_block_entropy(x, y, block_length);
    b.maximizer = {"block_length", block_length};
    if (x.empty()) {
        finish(b);
        return b;
    }
    const double n = static_cast<double>(x.size());
    const double l = static_cast<double>(block_length);
    const double sd = static_cast<double>(s);
    const double ab = std::pow(static_cast<double>(x.alphabet_size()) * static_cast<double>(y.alphabet_size()), l);
    const double state_penalty = 2 * log2s(s) / l;
    double count_penalty = (l * sd * sd * ab / n) * std::log2(n / l + 1);
    if (!std::isfinite(count_penalty)) count_penalty = std::numeric_limits<double>::max();
    b.terms.emplace_back("H(X^l|Y^l)/l", h);
    b.terms.emplace_back("2 log s / l", state_penalty);
    b.terms.emplace_back("(l s^2 alpha^l beta^l / n) log2(n/l + 1)", count_penalty);
    b.raw = h - state_penalty - count_penalty;
    finish(b);
    return b;
}

double infer_entropy_level(double length_bits, std::size_t n, std::size_t alphabet_size) {
    if (n == 0) throw ValidationError("entropy level needs n >= 1");
    const double nd = static_cast<double>(n);
    return (length_bits - (static_cast<double>(alphabet_size) - 1) / 2 * std::log2(nd)) / nd;
}

namespace {

SchemeSpec plain(Scheme scheme) {
    SchemeSpec spec;
    spec.scheme = scheme;
    return spec;
}

FsmSpec default_counter(std::size_t states, std::size_t alpha) {
    std::size_t order = 0, size = 1;
    while (alpha > 1 && size * alpha <= states) {
        size *= alpha;
        ++order;
    }
    return build_shift_register_fsm(order, alpha);
}

}  // namespace

KeyRateReport full_report(const SymbolSequence& x, const std::optional<SymbolSequence>& y, const ReportConfig& config) {
    if (y && y->size() != x.size()) throw ValidationError("side information length differs from sequence length");
    KeyRateReport r;
    r.n = x.size();
    r.alphabet_size = x.alphabet_size();
    r.alphabet = x.alphabet().names();
    r.side_info = y.has_value();
    r.config = config;
    const std::size_t s = config.states;
    require_states(s);

    FsmSpec counter = config.fsm ? *config.fsm : default_counter(s, x.alphabet_size());
    if (!counter.time_invariant()) counter = unroll_periodic(counter);
    if (counter.has_side_info()) throw ValidationError("the report's counter machine must not read side information");
    r.counter_machine = config.fsm ? "supplied machine (" + std::to_string(counter.state_count()) + " states)"
                                   : "shift register with " + std::to_string(counter.state_count()) + " states";

    r.bounds.push_back(ziv_bound(x, s));
    r.bounds.push_back(phrase_class_bound(x, counter));
    r.bounds.push_back(fsm_counter_bound(x, counter));
    r.bounds.push_back(shift_register_bound(x, s, config.max_order));
    if (!x.empty() && x.size() % config.period == 0) r.bounds.push_back(periodic_bound(x, s, config.period));
    if (y) {
        r.bounds.push_back(si_lz_bound(x, *y, s));
        for (const auto l : config.si_block_lengths)
            if (l > 0 && x.size() % l == 0) r.bounds.push_back(si_block_bound(x, *y, s, l));
    }

    auto add_scheme = [&](const SchemeSpec& spec, std::vector<std::string> targets) {
        SchemeRate rate;
        rate.name = to_string(spec.scheme);
        const KeySpace ks = key_space(spec, x, spec.needs_side_info() ? y : std::nullopt);
        rate.key_bits = ks.log2_size();
        rate.key_rate = x.empty() ? 0.0 : rate.key_bits / static_cast<double>(x.size());
        rate.targets = std::move(targets);
        r.schemes.push_back(std::move(rate));
    };
    add_scheme(plain(Scheme::raw_otp), {});
    add_scheme(plain(Scheme::lz78_otp), {"ziv", "phrase-classes"});
    SchemeSpec type = plain(Scheme::type_otp);
    type.fsm = counter;
    add_scheme(type, {"fsm-counter"});
    SchemeSpec markov = plain(Scheme::markov_type_otp);
    markov.order = config.markov_order;
    add_scheme(markov, {"shift-register"});
    if (config.block_length > 0 && x.size() % config.block_length == 0) {
        SchemeSpec block = plain(Scheme::block_type_otp);
        block.order = config.block_length;
        add_scheme(block, {"periodic"});
    }
    if (y) add_scheme(plain(Scheme::condlz_otp), {"si-lz"});

    const ParseResult parse = lz78_parse(x);
    const std::size_t lz = lz78_length(parse, x.alphabet_size());
    auto& d = r.diagnostics;
    d["phrases"] = parse.c();
    d["complete_phrases"] = parse.complete_count();
    d["last_phrase_incomplete"] = parse.last_incomplete;
    d["lz_bits"] = lz;
    d["lz_rate"] = x.empty() ? 0.0 : static_cast<double>(lz) / static_cast<double>(x.size());
    d["lz78_otp_reveals_length"] = true;
    d["modular_key_spaces"] = "type schemes use exact, not power-of-two, key-space sizes";
    d["eps_n"] = "si-lz sets eps_n so that n / ((1 - eps_n) log2 n) equals the joint phrase count";
    return r;
}

nlohmann::ordered_json bound_to_json(const BoundRecord& b) {
    nlohmann::ordered_json j;
    j["name"] = b.name;
    j["derivation"] = b.derivation;
    j["raw"] = b.raw;
    j["clamped"] = b.clamped;
    nlohmann::ordered_json terms = nlohmann::ordered_json::object();
    for (const auto& [k, v] : b.terms) terms[k] = v;
    j["slack"] = std::move(terms);
    nlohmann::ordered_json flags = nlohmann::ordered_json::object();
    for (const auto& [k, v] : b.flags) flags[k] = v;
    j["flags"] = std::move(flags);
    if (b.maximizer)
        j["maximizer"] = {{b.maximizer->first, b.maximizer->second}};
    else
        j["maximizer"] = nullptr;
    return j;
}

nlohmann::ordered_json report_to_json(const KeyRateReport& r) {
    nlohmann::ordered_json j;
    j["input"] = {{"n", r.n}, {"alphabet_size", r.alphabet_size}, {"alphabet", r.alphabet}, {"side_information", r.side_info}};
    j["params"] = {{"states", r.config.states},
                   {"max_order", r.config.max_order},
                   {"period", r.config.period},
                   {"counter_machine", r.counter_machine},
                   {"block_length", r.config.block_length},
                   {"markov_order", r.config.markov_order},
                   {"si_block_lengths", r.config.si_block_lengths},
                   {"seed", r.config.seed}};
    nlohmann::ordered_json bounds = nlohmann::ordered_json::array();
    for (const auto& b : r.bounds) bounds.push_back(bound_to_json(b));
    j["bounds"] = std::move(bounds);
    nlohmann::ordered_json schemes = nlohmann::ordered_json::array();
    for (const auto& s : r.schemes)
        schemes.push_back({{"name", s.name}, {"key_rate", s.key_rate}, {"key_bits", s.key_bits}, {"targets", s.targets}});
    j["schemes"] = std::move(schemes);
    j["diagnostics"] = r.diagnostics;
    return j;
}

}  // namespace secrecy
