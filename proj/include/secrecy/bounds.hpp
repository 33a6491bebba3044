#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "secrecy/fsm.hpp"
#include "secrecy/sequence.hpp"

namespace secrecy {

// One lower bound on the key rate, in bits per symbol. `raw` may be negative;
// `clamped` = max(raw, 0). Slack terms are the subtracted penalties, itemized
// in bits per symbol.
struct BoundRecord {
    std::string name;
    std::string derivation;
    double raw = 0;
    double clamped = 0;
    std::vector<std::pair<std::string, double>> terms;
    std::vector<std::pair<std::string, bool>> flags;
    std::optional<std::pair<std::string, std::size_t>> maximizer;
};

// [c log c - 2c log s - c - c log(n/c + 1)] / n over the c complete phrases of
// the incremental parse; holds for every output-table machine with s states.
BoundRecord ziv_bound(const SymbolSequence& x, std::size_t s);

// sum c_{lzz'} log c_{lzz'} / n for the phrase classes of one machine.
BoundRecord phrase_class_bound(const SymbolSequence& x, const FsmSpec& fsm);

// H(X|Z) - (s(alpha-1)/2) log2(2 pi n)/n for a time-invariant counter machine.
BoundRecord fsm_counter_bound(const SymbolSequence& x, const FsmSpec& fsm);

// max over 1 <= l <= l_max of [H(X_l|X_0..X_{l-1}) - log s/(l+1)]
// - (s(alpha-1)/(2n)) log2(2 pi n).
BoundRecord shift_register_bound(const SymbolSequence& x, std::size_t s, std::size_t l_max);

// max over q with q l | n of [H(X^{ql})/(ql) - 2 log s/(ql)
// - (ql s^2 alpha^{ql}/n) log2(n/(ql) + 1)]. ValidationError when no q fits.
BoundRecord periodic_bound(const SymbolSequence& x, std::size_t s, std::size_t period);

// [sum_l c_l log c_l - 2 c(x,y) log s] / n. The phrase-count penalty
// 2n log s / ((1 - eps_n) log n) is instantiated with eps_n chosen so that
// n / ((1 - eps_n) log n) = c(x,y); eps_n is reported as a term.
BoundRecord si_lz_bound(const SymbolSequence& x, const SymbolSequence& y, std::size_t s);

// H(X^l|Y^l)/l - 2 log s/l - (l s^2 alpha^l beta^l/n) log2(n/l + 1).
BoundRecord si_block_bound(const SymbolSequence& x, const SymbolSequence& y, std::size_t s, std::size_t block_length);

// Entropy level an observer infers from a two-part code length L:
// (L - ((alpha-1)/2) log2 n) / n.
double infer_entropy_level(double length_bits, std::size_t n, std::size_t alphabet_size);

struct ReportConfig {
    std::size_t states = 2;      // s for the machine-independent bounds
    std::size_t max_order = 6;   // l_max
    std::size_t period = 1;      // l for the periodic bound
    // Counter machine for the counter bound, the phrase-class bound and
    // TYPE-OTP. Default: the largest shift register with at most `states` states.
    std::optional<FsmSpec> fsm;
    std::size_t block_length = 2;   // BLOCK-TYPE-OTP
    std::size_t markov_order = 1;   // MARKOV-TYPE-OTP
    std::vector<std::size_t> si_block_lengths{1, 2};
    std::uint64_t seed = 1;
};

struct SchemeRate {
    std::string name;
    double key_rate = 0;
    double key_bits = 0;
    std::vector<std::string> targets;  // bounds describing the discriminator class the scheme is matched to
};

struct KeyRateReport {
    std::size_t n = 0;
    std::size_t alphabet_size = 0;
    std::vector<std::string> alphabet;
    bool side_info = false;
    ReportConfig config;
    std::string counter_machine;
    std::vector<BoundRecord> bounds;
    std::vector<SchemeRate> schemes;
    nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
};

// Every applicable bound and every scheme's key rate for x (and y).
KeyRateReport full_report(const SymbolSequence& x, const std::optional<SymbolSequence>& y,
                          const ReportConfig& config = {});

// {input, params, bounds, schemes, diagnostics} with a fixed field order.
nlohmann::ordered_json report_to_json(const KeyRateReport& report);
nlohmann::ordered_json bound_to_json(const BoundRecord& bound);

}  // namespace secrecy
