#include "secrecy/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "secrecy/entropy.hpp"
#include "secrecy/errors.hpp"
#include "secrecy/fsm_io.hpp"

namespace secrecy {

Discriminator Discriminator::accept_all() { return Discriminator{}; }

Discriminator Discriminator::output(FsmSpec fsm) {
    if (!fsm.has_output()) throw ValidationError("an output discriminator needs an output table");
    Discriminator d;
    d.kind = Kind::output_fsm;
    d.fsm = std::move(fsm);
    return d;
}

Discriminator Discriminator::same_type(const ClassSpec& spec, const SymbolSequence& reference,
                                       const std::optional<SymbolSequence>& y) {
    Discriminator d;
    d.kind = Kind::counter;
    d.predicate = Predicate::counts_equal;
    d.counter = spec;
    d.target = secrecy::describe(spec, reference, y).counts;
    return d;
}

Discriminator Discriminator::entropy_level(const ClassSpec& spec, double entropy) {
    Discriminator d;
    d.kind = Kind::counter;
    d.predicate = Predicate::entropy_equal;
    d.counter = spec;
    d.entropy = entropy;
    return d;
}

std::string Discriminator::describe() const {
    switch (kind) {
        case Kind::accept_all: return "accept-all";
        case Kind::output_fsm:
            return "output-fsm(s=" + std::to_string(fsm->state_count()) + (fsm->has_side_info() ? ", si" : "") + ")";
        case Kind::counter:
            return std::string("counter(") + to_string(counter.kind) +
                   (predicate == Predicate::counts_equal ? ", counts-equal)" : ", entropy-equal)");
    }
    return "?";
}

Acceptor::Acceptor(const Discriminator& disc, const Alphabet& alphabet, std::size_t n,
                   const std::optional<SymbolSequence>& y)
    : disc_(disc), alphabet_(alphabet), n_(n), y_(y) {
    if (y_ && y_->size() != n) throw ValidationError("side information length differs from n");
    switch (disc_.kind) {
        case Discriminator::Kind::accept_all: break;
        case Discriminator::Kind::output_fsm: {
            const FsmSpec& fsm = *disc_.fsm;
            if (!fsm.has_output()) throw ValidationError("an output discriminator needs an output table");
            if (fsm.alphabet_size() != alphabet.size())
                throw ValidationError("discriminator alphabet size " + std::to_string(fsm.alphabet_size()) +
                                      " differs from the plaintext alphabet size " + std::to_string(alphabet.size()));
            if (fsm.has_side_info() && !y_) throw ValidationError("discriminator reads side information but no y was given");
            if (fsm.has_side_info() && y_->alphabet_size() != fsm.si_alphabet_size())
                throw ValidationError("side information alphabet does not match the discriminator");
            break;
        }
        case Discriminator::Kind::counter: {
            if (disc_.predicate == Discriminator::Predicate::counts_equal) {
                if (!disc_.target) throw ValidationError("counts-equal discriminator without a target table");
                desc_ = describe_counts(disc_.counter, alphabet, n, *disc_.target, y_);
            } else {
                desc_ = describe_counts(disc_.counter, alphabet, n, empty_counts(disc_.counter, alphabet, n, y_), y_);
            }
            break;
        }
    }
}

bool Acceptor::operator()(std::span<const Symbol> x) const {
    switch (disc_.kind) {
        case Discriminator::Kind::accept_all: return true;
        case Discriminator::Kind::output_fsm:
            return accepts(*disc_.fsm, x, y_ ? y_->symbols() : std::span<const Symbol>{});
        case Discriminator::Kind::counter:
            return (*this)(SymbolSequence(alphabet_, std::vector<Symbol>(x.begin(), x.end())));
    }
    return false;
}

bool Acceptor::operator()(const SymbolSequence& x) const {
    if (x.size() != n_) return false;
    switch (disc_.kind) {
        case Discriminator::Kind::accept_all: return true;
        case Discriminator::Kind::output_fsm: return (*this)(x.symbols());
        case Discriminator::Kind::counter: {
            const CountTable t = counts_of(*desc_, x);
            if (disc_.predicate == Discriminator::Predicate::counts_equal) return t.counts == desc_->counts.counts;
            if (t.total() == 0) return std::abs(disc_.entropy) <= 1e-9;
            return std::abs(cond_entropy(t) - disc_.entropy) <= 1e-9;
        }
    }
    return false;
}

namespace {

std::uint64_t sequence_space(std::size_t alpha, std::size_t n, std::uint64_t budget) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha != 0 && total > budget / alpha)
            throw BudgetError(std::to_string(alpha) + "^" + std::to_string(n) +
                              " sequences exceed the budget of " + std::to_string(budget));
        total *= alpha;
    }
    if (total > budget)
        throw BudgetError(std::to_string(alpha) + "^" + std::to_string(n) + " sequences exceed the budget of " +
                          std::to_string(budget));
    return total;
}

// Calls visit(span) for the sequences with numbers lo..hi-1 (base alpha,
// first symbol most significant).
template <typename Visit>
void visit_range(std::size_t alpha, std::size_t n, std::uint64_t lo, std::uint64_t hi, Visit&& visit) {
    std::vector<Symbol> seq(n, 0);
    std::uint64_t v = lo;
    for (std::size_t i = n; i > 0; --i) {
        seq[i - 1] = static_cast<Symbol>(v % alpha);
        v /= alpha;
    }
    for (std::uint64_t k = lo; k < hi; ++k) {
        visit(std::span<const Symbol>(seq));
        for (std::size_t i = n; i > 0; --i) {
            if (++seq[i - 1] < alpha) break;
            seq[i - 1] = 0;
        }
    }
}

template <typename Result, typename Shard>
std::vector<Result> run_shards(std::uint64_t total, unsigned jobs, Shard&& shard) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t parts = std::min<std::uint64_t>(jobs, std::max<std::uint64_t>(total, 1));
    std::vector<Result> results(parts);
    std::vector<std::exception_ptr> errors(parts);
    auto work = [&](std::uint64_t p) {
        try {
            results[p] = shard(total * p / parts, total * (p + 1) / parts);
        } catch (...) {
            errors[p] = std::current_exception();
        }
    };
    if (parts == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (std::uint64_t p = 0; p < parts; ++p) threads.emplace_back(work, p);
        for (auto& t : threads) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

}  // namespace

std::set<SymbolSequence> enumerate_acceptance_set(const Discriminator& disc, const Alphabet& alphabet, std::size_t n,
                                                  const std::optional<SymbolSequence>& y,
                                                  const VerifierOptions& options) {
    const std::uint64_t total = sequence_space(alphabet.size(), n, options.sequence_budget);
    const Acceptor accept(disc, alphabet, n, y);
    auto shard = [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<std::vector<Symbol>> found;
        visit_range(alphabet.size(), n, lo, hi, [&](std::span<const Symbol> x) {
            if (accept(x)) found.emplace_back(x.begin(), x.end());
        });
        return found;
    };
    std::set<SymbolSequence> out;
    for (auto& part : run_shards<std::vector<std::vector<Symbol>>>(total, options.jobs, shard))
        for (auto& x : part) out.insert(out.end(), SymbolSequence(alphabet, std::move(x)));
    return out;
}

std::uint64_t count_acceptance_set(const Discriminator& disc, const Alphabet& alphabet, std::size_t n,
                                   const std::optional<SymbolSequence>& y, const VerifierOptions& options) {
    const std::uint64_t total = sequence_space(alphabet.size(), n, options.sequence_budget);
    const Acceptor accept(disc, alphabet, n, y);
    auto shard = [&](std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t count = 0;
        visit_range(alphabet.size(), n, lo, hi, [&](std::span<const Symbol> x) { count += accept(x) ? 1 : 0; });
        return count;
    };
    std::uint64_t out = 0;
    for (auto c : run_shards<std::uint64_t>(total, options.jobs, shard)) out += c;
    return out;
}

SecrecyVerdict check_perfect_secrecy(const Discriminator& disc, const SchemeSpec& spec, const SymbolSequence& x,
                                     const std::optional<SymbolSequence>& y, const std::optional<Key>& key,
                                     const VerifierOptions& options, std::uint64_t key_check_limit) {
    const Alphabet& alphabet = x.alphabet();
    const Acceptor accept(disc, alphabet, x.size(), y);
    if (!accept(x)) throw ValidationError("the discriminator rejects x, so the scenario is inconsistent");

    const KeySpace ks = key_space(spec, x, y);
    if (ks.size() == 0) throw ValidationError("the key space is empty");
    const Key k0 = key ? *key : ks.at(0);

    SecrecyVerdict v;
    v.cryptogram = encrypt(spec, x, y, k0);
    const PreimageSet pre = preimage_set(spec, v.cryptogram, alphabet, y, options.key_budget);
    v.preimage_size = pre.members.size();
    v.keys_tried = pre.keys_tried;
    v.undecodable = pre.undecodable;

    const std::set<SymbolSequence> a = enumerate_acceptance_set(disc, alphabet, x.size(), y, options);
    v.acceptance_size = a.size();
    for (const auto& s : a) {
        if (pre.members.count(s)) {
            ++v.intersection_size;
        } else if (!v.witness) {
            v.witness = s;
        }
    }
    v.perfectly_secure = v.intersection_size == v.acceptance_size;

    if (ks.size() <= big_from_u64(key_check_limit)) {
        bool same = true;
        const std::uint64_t count = big_to_u64(ks.size());
        for (std::uint64_t i = 0; i < count && same; ++i) {
            const Cryptogram w = encrypt(spec, x, y, ks.at(big_from_u64(i)));
            same = preimage_set(spec, w, alphabet, y, options.key_budget).members == pre.members;
        }
        v.preimage_key_independent = same;
    }
    return v;
}

GuessingResult guessing_attack(const SchemeSpec& spec, const Cryptogram& w, const Alphabet& alphabet,
                               const Discriminator& disc, const std::optional<SymbolSequence>& y,
                               const VerifierOptions& options) {
    const KeySpace ks = key_space_for(spec, w, alphabet, y);
    const BigInt size = ks.size();
    if (size > big_from_u64(options.key_budget))
        throw BudgetError("key space of " + big_to_string(size) + " keys exceeds the budget of " +
                          std::to_string(options.key_budget));
    const Acceptor accept(disc, alphabet, w.n, y);
    GuessingResult out;
    std::map<SymbolSequence, std::size_t> seen;
    const std::uint64_t count = big_to_u64(size);
    for (std::uint64_t k = 0; k < count; ++k) {
        ++out.keys_tried;
        std::optional<SymbolSequence> x;
        try {
            x = decrypt(spec, w, alphabet, y, ks.at(big_from_u64(k)));
        } catch (const IntegrityError&) {
            ++out.undecodable;
            continue;
        }
        if (!accept(*x)) {
            ++out.rejected;
            continue;
        }
        auto [it, fresh] = seen.emplace(*x, out.accepted.size());
        if (fresh) out.accepted.push_back({*x, big_from_u64(k), 0});
        ++out.accepted[it->second].hits;
    }
    return out;
}

namespace {

Alphabet alphabet_from_json(const nlohmann::json& doc, const char* field) {
    if (doc.is_string()) return Alphabet::from_chars(doc.get<std::string>());
    if (doc.is_array()) {
        std::vector<std::string> names;
        for (const auto& e : doc) {
            if (!e.is_string()) throw ValidationError(std::string(field) + " entries must be strings");
            names.push_back(e.get<std::string>());
        }
        return Alphabet(std::move(names));
    }
    throw ValidationError(std::string(field) + " must be a string or a list of symbols");
}

SymbolSequence sequence_from_json(const nlohmann::json& doc, const Alphabet& alphabet, const char* field) {
    if (doc.is_string()) return SymbolSequence::parse(alphabet, doc.get<std::string>());
    if (doc.is_array()) {
        std::vector<Symbol> symbols;
        for (const auto& e : doc) {
            if (!e.is_string()) throw ValidationError(std::string(field) + " entries must be symbol names");
            symbols.push_back(alphabet.index_of(e.get<std::string>()));
        }
        return SymbolSequence(alphabet, std::move(symbols));
    }
    throw ValidationError(std::string(field) + " must be a string or a list of symbols");
}

template <typename T>
T get_field(const nlohmann::json& doc, const char* name, const char* where) {
    if (!doc.contains(name)) throw ValidationError(std::string(where) + " lacks \"" + name + "\"");
    try {
        return doc.at(name).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError(std::string(where) + "." + name + " has the wrong type");
    }
}

BitString bits_from_text(const std::string& text) {
    if (text.find(':') != std::string::npos) return BitString::from_hex(text);
    return BitString::from_binary(text);
}

}  // namespace

Discriminator discriminator_from_json(const nlohmann::json& doc, const Alphabet& alphabet,
                                      const std::optional<SymbolSequence>& y) {
    if (!doc.is_object()) throw ValidationError("discriminator must be an object");
    const auto type = get_field<std::string>(doc, "type", "discriminator");
    if (type == "accept-all") return Discriminator::accept_all();
    if (type == "dk") {
        return Discriminator::output(build_dk_discriminator(get_field<std::size_t>(doc, "d", "discriminator"),
                                                            get_field<std::size_t>(doc, "k", "discriminator")));
    }
    if (type == "fsm") {
        if (!doc.contains("fsm")) throw ValidationError("discriminator lacks \"fsm\"");
        return Discriminator::output(fsm_from_json(doc.at("fsm")));
    }
    if (type == "counter") {
        ClassSpec spec;
        spec.kind = type_class_kind_from_string(doc.value("class", std::string("symbol-state")));
        if (doc.contains("fsm")) spec.fsm = fsm_from_json(doc.at("fsm"));
        spec.order = doc.value("order", std::size_t{1});
        if (doc.contains("target"))
            return Discriminator::same_type(spec, sequence_from_json(doc.at("target"), alphabet, "target"), y);
        if (doc.contains("entropy")) return Discriminator::entropy_level(spec, get_field<double>(doc, "entropy", "discriminator"));
        throw ValidationError("counter discriminator needs \"target\" or \"entropy\"");
    }
    throw ValidationError("unknown discriminator type '" + type + "'");
}

SchemeSpec scheme_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ValidationError("scheme must be an object");
    SchemeSpec spec;
    spec.scheme = scheme_from_string(get_field<std::string>(doc, "name", "scheme"));
    if (doc.contains("fsm")) spec.fsm = fsm_from_json(doc.at("fsm"));
    spec.order = doc.value("order", std::size_t{1});
    spec.side_info = doc.value("side_info", false);
    if (doc.contains("keys")) {
        std::vector<BitString> keys;
        for (const auto& k : doc.at("keys")) {
            if (!k.is_string()) throw ValidationError("scheme.keys entries must be bit strings");
            keys.push_back(bits_from_text(k.get<std::string>()));
        }
        spec.key_list = std::move(keys);
    }
    return spec;
}

Scenario scenario_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ValidationError("scenario must be a JSON object");
    Scenario sc;
    sc.alphabet = doc.contains("alphabet") ? alphabet_from_json(doc.at("alphabet"), "alphabet") : Alphabet::from_chars("01");
    if (!doc.contains("x")) throw ValidationError("scenario lacks \"x\"");
    sc.x = sequence_from_json(doc.at("x"), sc.alphabet, "x");
    if (doc.contains("y")) {
        const Alphabet si = doc.contains("si_alphabet") ? alphabet_from_json(doc.at("si_alphabet"), "si_alphabet")
                                                         : sc.alphabet;
        sc.y = sequence_from_json(doc.at("y"), si, "y");
    }
    if (!doc.contains("discriminator")) throw ValidationError("scenario lacks \"discriminator\"");
    sc.discriminator = discriminator_from_json(doc.at("discriminator"), sc.alphabet, sc.y);
    if (!doc.contains("scheme")) throw ValidationError("scenario lacks \"scheme\"");
    sc.scheme = scheme_from_json(doc.at("scheme"));
    if (doc.contains("key")) {
        const auto text = get_field<std::string>(doc, "key", "scenario");
        if (is_modular(sc.scheme.scheme))
            sc.key = big_from_string(text);
        else
            sc.key = bits_from_text(text);
    }
    if (doc.contains("budgets")) {
        const auto& b = doc.at("budgets");
        sc.options.sequence_budget = b.value("sequences", default_sequence_budget);
        sc.options.key_budget = b.value("keys", default_key_budget);
    }
    return sc;
}

namespace {

nlohmann::ordered_json cryptogram_json(const Cryptogram& w) {
    nlohmann::ordered_json j;
    j["scheme"] = to_string(w.scheme);
    j["n"] = w.n;
    j["header"] = w.clear_header.to_hex();
    j["body"] = w.body.to_hex();
    j["length_bits"] = w.clear_header.size() + w.body.size();
    return j;
}

}  // namespace

nlohmann::ordered_json verdict_to_json(const SecrecyVerdict& v) {
    nlohmann::ordered_json j;
    j["verdict"] = v.perfectly_secure ? "secure" : "insecure";
    j["acceptance_size"] = v.acceptance_size;
    j["preimage_size"] = v.preimage_size;
    j["intersection_size"] = v.intersection_size;
    j["perfectly_secure"] = v.perfectly_secure;
    j["witness"] = v.witness ? nlohmann::ordered_json(v.witness->to_string()) : nlohmann::ordered_json(nullptr);
    j["cryptogram"] = cryptogram_json(v.cryptogram);
    j["keys_tried"] = v.keys_tried;
    j["undecodable_keys"] = v.undecodable;
    j["preimage_key_independent"] = v.preimage_key_independent ? nlohmann::ordered_json(*v.preimage_key_independent)
                                                               : nlohmann::ordered_json(nullptr);
    return j;
}

nlohmann::ordered_json guesses_to_json(const GuessingResult& r) {
    nlohmann::ordered_json j;
    j["keys_tried"] = r.keys_tried;
    j["undecodable"] = r.undecodable;
    j["rejected"] = r.rejected;
    auto list = nlohmann::ordered_json::array();
    for (const auto& c : r.accepted) {
        nlohmann::ordered_json e;
        e["plaintext"] = c.plaintext.to_string();
        e["first_key"] = big_to_string(c.first_key);
        e["hits"] = c.hits;
        list.push_back(std::move(e));
    }
    j["accepted"] = std::move(list);
    return j;
}

nlohmann::ordered_json run_scenario(const Scenario& sc) {
    const SecrecyVerdict v = check_perfect_secrecy(sc.discriminator, sc.scheme, sc.x, sc.y, sc.key, sc.options);
    const GuessingResult g = guessing_attack(sc.scheme, v.cryptogram, sc.alphabet, sc.discriminator, sc.y, sc.options);
    nlohmann::ordered_json j;
    nlohmann::ordered_json s;
    s["n"] = sc.x.size();
    s["x"] = sc.x.to_string();
    s["y"] = sc.y ? nlohmann::ordered_json(sc.y->to_string()) : nlohmann::ordered_json(nullptr);
    s["discriminator"] = sc.discriminator.describe();
    s["scheme"] = to_string(sc.scheme.scheme);
    s["key"] = sc.key ? nlohmann::ordered_json(key_to_string(*sc.key)) : nlohmann::ordered_json(nullptr);
    j["scenario"] = std::move(s);
    j["result"] = verdict_to_json(v);
    j["guessing"] = guesses_to_json(g);
    return j;
}

}  // namespace secrecy
