#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "secrecy/crypto.hpp"
#include "secrecy/fsm.hpp"
#include "secrecy/type_class.hpp"

namespace secrecy {

inline constexpr std::uint64_t default_sequence_budget = std::uint64_t{1} << 24;

// A finite-state device that accepts or rejects a candidate plaintext.
//
//   accept_all  every sequence
//   output_fsm  the output recursion of `fsm` (may read y); reject iff some u_i = 1
//   counter     the count table of the candidate under `counter` satisfies the
//               predicate: equal to `target`, or conditional empirical entropy
//               equal to `entropy` (within 1e-9)
struct Discriminator {
    enum class Kind { accept_all, output_fsm, counter } kind = Kind::accept_all;
    enum class Predicate { counts_equal, entropy_equal } predicate = Predicate::counts_equal;
    std::optional<FsmSpec> fsm;
    ClassSpec counter;
    std::optional<CountTable> target;
    double entropy = 0;

    static Discriminator accept_all();
    static Discriminator output(FsmSpec fsm);
    // Counts equal to those of `reference`.
    static Discriminator same_type(const ClassSpec& spec, const SymbolSequence& reference,
                                   const std::optional<SymbolSequence>& y = std::nullopt);
    static Discriminator entropy_level(const ClassSpec& spec, double entropy);

    std::string describe() const;
};

struct VerifierOptions {
    std::uint64_t sequence_budget = default_sequence_budget;
    std::uint64_t key_budget = default_key_budget;
    unsigned jobs = 1;
};

// Prepared discriminator for repeated evaluation on candidates of one length.
class Acceptor {
public:
    Acceptor(const Discriminator& disc, const Alphabet& alphabet, std::size_t n,
             const std::optional<SymbolSequence>& y = std::nullopt);
    bool operator()(const SymbolSequence& x) const;
    bool operator()(std::span<const Symbol> x) const;

private:
    Discriminator disc_;
    Alphabet alphabet_;
    std::size_t n_;
    std::optional<SymbolSequence> y_;
    std::optional<TypeClassDescriptor> desc_;
};

// A_n: every length-n sequence the discriminator accepts. The sequence space is
// cut into `jobs` contiguous shards enumerated on separate threads and merged
// by union. BudgetError when alpha^n exceeds the sequence budget.
std::set<SymbolSequence> enumerate_acceptance_set(const Discriminator& disc, const Alphabet& alphabet, std::size_t n,
                                                  const std::optional<SymbolSequence>& y = std::nullopt,
                                                  const VerifierOptions& options = {});
// |A_n| without materializing the set.
std::uint64_t count_acceptance_set(const Discriminator& disc, const Alphabet& alphabet, std::size_t n,
                                   const std::optional<SymbolSequence>& y = std::nullopt,
                                   const VerifierOptions& options = {});

struct SecrecyVerdict {
    std::uint64_t acceptance_size = 0;   // |A_n|
    std::uint64_t preimage_size = 0;     // |T^{-1}(W)|
    std::uint64_t intersection_size = 0; // |A_n(W)| = |A_n and T^{-1}(W)|
    bool perfectly_secure = false;
    std::optional<SymbolSequence> witness;  // smallest member of A_n \ T^{-1}(W)
    Cryptogram cryptogram;
    std::uint64_t keys_tried = 0;
    std::uint64_t undecodable = 0;
    // Whether every key tried on x gave the same preimage set; absent when
    // the key space is larger than `key_check_limit`.
    std::optional<bool> preimage_key_independent;
};

inline constexpr std::uint64_t default_key_check_limit = 256;

// Encrypts x under `key` (key number 0 when absent), computes T^{-1}(W),
// intersects it with A_n and issues the verdict. ValidationError when the
// discriminator rejects x.
SecrecyVerdict check_perfect_secrecy(const Discriminator& disc, const SchemeSpec& spec, const SymbolSequence& x,
                                     const std::optional<SymbolSequence>& y = std::nullopt,
                                     const std::optional<Key>& key = std::nullopt, const VerifierOptions& options = {},
                                     std::uint64_t key_check_limit = default_key_check_limit);

struct GuessCandidate {
    SymbolSequence plaintext;
    BigInt first_key;       // index of the first key that produced it
    std::uint64_t hits = 0; // keys that produced it
};

struct GuessingResult {
    std::vector<GuessCandidate> accepted;  // in order of first_key
    std::uint64_t keys_tried = 0;
    std::uint64_t undecodable = 0;
    std::uint64_t rejected = 0;
};

// The eavesdropper loop: decrypt W under each key in turn, run the
// discriminator, keep what it accepts.
GuessingResult guessing_attack(const SchemeSpec& spec, const Cryptogram& w, const Alphabet& alphabet,
                               const Discriminator& disc, const std::optional<SymbolSequence>& y = std::nullopt,
                               const VerifierOptions& options = {});

// Scenario file:
//
//   { "alphabet": "01",                       // or a list of symbol names
//     "x": "1111", "y": "0011",               // y optional
//     "si_alphabet": "01",                    // defaults to "alphabet"
//     "discriminator": {"type": "dk", "d": 0, "k": 2}
//                    | {"type": "fsm", "fsm": {...}}
//                    | {"type": "accept-all"}
//                    | {"type": "counter", "class": "symbol-state", "fsm": {...},
//                       "order": 1, "target": "0110"}        // or "entropy": 1.0
//     "scheme": {"name": "RAW-OTP", "keys": ["1111", ...], "fsm": {...},
//                "order": 1, "side_info": false},
//     "key": "1111",                          // binary for bit keys, decimal for modular
//     "budgets": {"sequences": 16777216, "keys": 1048576} }
struct Scenario {
    Alphabet alphabet;
    SymbolSequence x;
    std::optional<SymbolSequence> y;
    Discriminator discriminator;
    SchemeSpec scheme;
    std::optional<Key> key;
    VerifierOptions options;
};

Scenario scenario_from_json(const nlohmann::json& doc);
Discriminator discriminator_from_json(const nlohmann::json& doc, const Alphabet& alphabet,
                                      const std::optional<SymbolSequence>& y);
SchemeSpec scheme_from_json(const nlohmann::json& doc);

nlohmann::ordered_json verdict_to_json(const SecrecyVerdict& verdict);
nlohmann::ordered_json guesses_to_json(const GuessingResult& result);

// Verdict and guessing loop for a scenario, as one JSON document.
nlohmann::ordered_json run_scenario(const Scenario& scenario);

}  // namespace secrecy
