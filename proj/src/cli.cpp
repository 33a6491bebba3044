#include "secrecy/cli.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "secrecy/bounds.hpp"
#include "secrecy/crypto.hpp"
#include "secrecy/errors.hpp"
#include "secrecy/fsm_io.hpp"
#include "secrecy/lz.hpp"
#include "secrecy/verifier.hpp"

namespace secrecy::cli {

Alphabet alphabet_from_option(const std::string& alphabet) {
    if (alphabet == "bytes") return Alphabet::bytes();
    if (alphabet.empty()) throw UsageError("--alphabet must name at least one symbol");
    return Alphabet::from_chars(alphabet);
}

SymbolSequence parse_plaintext(const std::string& bytes, const Alphabet& alphabet, bool keep_newlines) {
    std::array<int, 256> index;
    index.fill(-1);
    for (Symbol s = 0; s < alphabet.size(); ++s) {
        const std::string& name = alphabet.name(s);
        if (name.size() != 1) throw UsageError("plaintext files need single-character symbols");
        index[static_cast<unsigned char>(name[0])] = static_cast<int>(s);
    }
    std::vector<Symbol> symbols;
    symbols.reserve(bytes.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        const auto b = static_cast<unsigned char>(bytes[i]);
        if (!keep_newlines && (b == '\n' || b == '\r')) continue;
        if (index[b] < 0) {
            char hex[8];
            std::snprintf(hex, sizeof hex, "0x%02x", b);
            throw ValidationError("byte " + std::string(hex) + " at byte offset " + std::to_string(i) +
                                  " is not in the alphabet");
        }
        symbols.push_back(static_cast<Symbol>(index[b]));
    }
    return SymbolSequence(alphabet, std::move(symbols));
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path.string());
    out << data;
}

}  // namespace

SymbolSequence read_plaintext(const std::filesystem::path& path, const Alphabet& alphabet, bool keep_newlines) {
    return parse_plaintext(read_file(path), alphabet, keep_newlines);
}

void write_plaintext(const std::filesystem::path& path, const SymbolSequence& x) { write_file(path, x.to_string()); }

namespace {

struct Options {
    std::string in;
    std::string alphabet = "01";
    bool keep_newlines = false;
    std::string si;
    std::string si_alphabet;
    std::string out;
    std::uint64_t seed = 1;
    unsigned jobs = 1;

    // bounds
    std::size_t states = 2;
    std::size_t max_order = 6;
    std::size_t period = 1;
    std::string fsm;
    std::size_t block_length = 2;
    std::size_t markov_order = 1;
    std::vector<std::size_t> si_block_lengths{1, 2};

    // encrypt / decrypt
    std::string scheme;
    std::size_t order = 1;
    bool side_info = false;
    std::string key;
    std::string key_file;
    std::string key_out;

    // parse
    bool phrases = false;

    // verify
    std::string scenario;

    // capacity
    std::size_t d = 0;
    std::size_t k = 1;
    std::size_t n = 0;
};

void emit(const nlohmann::ordered_json& doc, const Options& o, std::ostream& out) {
    const std::string text = doc.dump(2) + "\n";
    if (o.out.empty())
        out << text;
    else
        write_file(o.out, text);
}

std::optional<SymbolSequence> read_side_info(const Options& o) {
    if (o.si.empty()) return std::nullopt;
    const Alphabet a = alphabet_from_option(o.si_alphabet.empty() ? o.alphabet : o.si_alphabet);
    return read_plaintext(o.si, a, o.keep_newlines);
}

SchemeSpec scheme_options(const Options& o, Scheme scheme) {
    SchemeSpec spec;
    spec.scheme = scheme;
    if (!o.fsm.empty()) spec.fsm = load_fsm(o.fsm);
    spec.order = o.order;
    spec.side_info = o.side_info;
    return spec;
}

Key key_from_text(Scheme scheme, std::string text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
    if (text.empty()) throw UsageError("empty key");
    if (is_modular(scheme)) return big_from_string(text);
    if (text.find(':') != std::string::npos) return BitString::from_hex(text);
    return BitString::from_binary(text);
}

int cmd_bounds(const Options& o, std::ostream& out) {
    const SymbolSequence x = read_plaintext(o.in, alphabet_from_option(o.alphabet), o.keep_newlines);
    ReportConfig config;
    config.states = o.states;
    config.max_order = o.max_order;
    config.period = o.period;
    if (!o.fsm.empty()) config.fsm = load_fsm(o.fsm);
    config.block_length = o.block_length;
    config.markov_order = o.markov_order;
    config.si_block_lengths = o.si_block_lengths;
    config.seed = o.seed;
    emit(report_to_json(full_report(x, read_side_info(o), config)), o, out);
    return 0;
}

int cmd_encrypt(const Options& o, std::ostream& out) {
    const SymbolSequence x = read_plaintext(o.in, alphabet_from_option(o.alphabet), o.keep_newlines);
    const auto y = read_side_info(o);
    const SchemeSpec spec = scheme_options(o, scheme_from_string(o.scheme));
    const KeySpace ks = key_space(spec, x, y);
    Key key;
    if (!o.key.empty()) {
        key = key_from_text(spec.scheme, o.key);
    } else if (!o.key_file.empty()) {
        key = key_from_text(spec.scheme, read_file(o.key_file));
    } else {
        std::mt19937_64 rng(o.seed);
        key = ks.draw(rng);
    }
    const Cryptogram w = encrypt(spec, x, y, key);
    if (!o.key_out.empty()) write_file(o.key_out, key_to_string(key) + "\n");
    if (o.out.empty()) {
        write_cryptogram(out, w);
        return 0;
    }
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw UsageError("cannot write " + o.out);
    write_cryptogram(file, w);
    nlohmann::ordered_json j;
    j["scheme"] = to_string(spec.scheme);
    j["n"] = x.size();
    j["key_space"] = ks.describe();
    j["key_rate"] = x.empty() ? 0.0 : ks.log2_size() / static_cast<double>(x.size());
    j["header_bits"] = w.clear_header.size();
    j["body_bits"] = w.body.size();
    j["seed"] = o.seed;
    j["key"] = key_to_string(key);
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_decrypt(const Options& o, std::ostream& out) {
    std::ifstream in(o.in, std::ios::binary);
    if (!in) throw UsageError("cannot open " + o.in);
    const Cryptogram w = read_cryptogram(in);
    if (!o.scheme.empty() && scheme_from_string(o.scheme) != w.scheme)
        throw ValidationError(std::string("cryptogram was produced by ") + to_string(w.scheme));
    const SchemeSpec spec = scheme_options(o, w.scheme);
    if (o.key.empty() && o.key_file.empty()) throw UsageError("decrypt needs --key or --key-file");
    const Key key = key_from_text(w.scheme, o.key.empty() ? read_file(o.key_file) : o.key);
    const SymbolSequence x = decrypt(spec, w, alphabet_from_option(o.alphabet), read_side_info(o), key);
    if (o.out.empty())
        out << x.to_string();
    else
        write_plaintext(o.out, x);
    return 0;
}

int cmd_parse(const Options& o, std::ostream& out) {
    const SymbolSequence x = read_plaintext(o.in, alphabet_from_option(o.alphabet), o.keep_newlines);
    const ParseResult p = lz78_parse(x);
    const std::size_t bits = lz78_length(p, x.alphabet_size());
    nlohmann::ordered_json j;
    j["n"] = x.size();
    j["alphabet_size"] = x.alphabet_size();
    j["c"] = p.c();
    j["complete_phrases"] = p.complete_count();
    j["last_incomplete"] = p.last_incomplete;
    j["lz_bits"] = bits;
    j["lz_rate"] = x.empty() ? 0.0 : static_cast<double>(bits) / static_cast<double>(x.size());
    if (o.phrases) {
        auto list = nlohmann::ordered_json::array();
        for (const auto& ph : p.phrases) {
            std::string s;
            for (std::size_t i = 0; i < ph.length; ++i) s += x.alphabet().name(x[ph.start + i]);
            list.push_back(s);
        }
        j["phrases"] = std::move(list);
    }
    if (const auto y = read_side_info(o)) {
        const JointParseResult jp = joint_parse(x, *y);
        j["c_xy"] = jp.c_xy;
        j["c_y"] = jp.c_y;
        j["u_x_given_y"] = conditional_lz_length(jp);
        j["condlz_bits"] = conditional_lz_encode(x, *y).size();
    }
    emit(j, o, out);
    return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
    Scenario sc = scenario_from_json(load_json(o.scenario));
    sc.options.jobs = o.jobs;
    emit(run_scenario(sc), o, out);
    return 0;
}

int cmd_capacity(const Options& o, std::ostream& out) {
    const double cap = dk_capacity(o.d, o.k);
    if (o.n == 0) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(6) << cap << "\n";
        out << s.str();
        return 0;
    }
    nlohmann::ordered_json j;
    j["d"] = o.d;
    j["k"] = o.k;
    j["capacity"] = cap;
    auto counts = nlohmann::ordered_json::array();
    for (std::size_t m = 1; m <= o.n; ++m) {
        const BigInt c = dk_count(o.d, o.k, m);
        nlohmann::ordered_json e;
        e["n"] = m;
        e["count"] = big_to_string(c);
        e["rate"] = log2_big(c) / static_cast<double>(m);
        counts.push_back(std::move(e));
    }
    j["counts"] = std::move(counts);
    emit(j, o, out);
    return 0;
}

int cmd_fsm_validate(const Options& o, std::ostream& out) {
    const FsmSpec fsm = load_fsm(o.fsm);
    nlohmann::ordered_json j;
    j["valid"] = true;
    j["states"] = fsm.state_count();
    j["alphabet_size"] = fsm.alphabet_size();
    j["period"] = fsm.period();
    j["side_info"] = fsm.has_side_info();
    j["output"] = fsm.has_output();
    j["initial"] = fsm.initial_state();
    emit(j, o, out);
    return 0;
}

void error_record(std::ostream& err, const std::string& kind, const std::string& message, int code) {
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    j["exit_code"] = code;
    err << j.dump() << "\n";
}

void plaintext_options(CLI::App* app, Options& o) {
    app->add_option("--in", o.in, "input file")->required()->check(CLI::ExistingFile);
    app->add_option("--alphabet", o.alphabet, "symbol characters, or 'bytes'")->capture_default_str();
    app->add_flag("--keep-newlines", o.keep_newlines, "treat newline bytes as symbols");
    app->add_option("--si", o.si, "side-information file")->check(CLI::ExistingFile);
    app->add_option("--si-alphabet", o.si_alphabet, "side-information alphabet (default: --alphabet)");
}

void scheme_flags(CLI::App* app, Options& o) {
    app->add_option("--fsm", o.fsm, "counter machine (JSON)")->check(CLI::ExistingFile);
    app->add_option("--order", o.order, "block length or Markov order")->capture_default_str();
    app->add_flag("--side-info", o.side_info, "condition the type class on the side information");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Key-rate bounds and secrecy checks for individual sequences", "secrecy"};
    app.require_subcommand(1);

    auto* bounds = app.add_subcommand("bounds", "key-rate lower bounds and scheme rates as JSON");
    plaintext_options(bounds, o);
    bounds->add_option("--states", o.states, "number of discriminator states s")->capture_default_str();
    bounds->add_option("--max-order", o.max_order, "largest shift-register order")->capture_default_str();
    bounds->add_option("--period", o.period, "period l of the time-varying machines")->capture_default_str();
    bounds->add_option("--fsm", o.fsm, "counter machine (JSON)")->check(CLI::ExistingFile);
    bounds->add_option("--block-length", o.block_length, "BLOCK-TYPE-OTP block length")->capture_default_str();
    bounds->add_option("--markov-order", o.markov_order, "MARKOV-TYPE-OTP order")->capture_default_str();
    bounds->add_option("--si-block-lengths", o.si_block_lengths, "block lengths for the side-information bound");
    bounds->add_option("--seed", o.seed, "random seed")->capture_default_str();
    bounds->add_option("--out", o.out, "output file");

    auto* enc = app.add_subcommand("encrypt", "encrypt a plaintext file");
    plaintext_options(enc, o);
    enc->add_option("--scheme", o.scheme, "RAW-OTP, LZ78-OTP, TYPE-OTP, BLOCK-TYPE-OTP, MARKOV-TYPE-OTP, CONDLZ-OTP")
        ->required();
    scheme_flags(enc, o);
    enc->add_option("--key", o.key, "key (bits, <bits>:<hex>, or decimal for modular schemes)");
    enc->add_option("--key-file", o.key_file, "file holding the key")->check(CLI::ExistingFile);
    enc->add_option("--key-out", o.key_out, "write the key used to this file");
    enc->add_option("--seed", o.seed, "seed for drawing the key")->capture_default_str();
    enc->add_option("--out", o.out, "cryptogram file (stdout when absent)");

    auto* dec = app.add_subcommand("decrypt", "decrypt a cryptogram file");
    dec->add_option("--in", o.in, "cryptogram file")->required()->check(CLI::ExistingFile);
    dec->add_option("--alphabet", o.alphabet, "symbol characters, or 'bytes'")->capture_default_str();
    dec->add_flag("--keep-newlines", o.keep_newlines, "treat newline bytes as symbols (side information)");
    dec->add_option("--si", o.si, "side-information file")->check(CLI::ExistingFile);
    dec->add_option("--si-alphabet", o.si_alphabet, "side-information alphabet (default: --alphabet)");
    dec->add_option("--scheme", o.scheme, "expected scheme");
    scheme_flags(dec, o);
    dec->add_option("--key", o.key, "key");
    dec->add_option("--key-file", o.key_file, "file holding the key")->check(CLI::ExistingFile);
    dec->add_option("--out", o.out, "plaintext file (stdout when absent)");

    auto* parse = app.add_subcommand("parse", "incremental parse statistics");
    plaintext_options(parse, o);
    parse->add_flag("--phrases", o.phrases, "list the phrases");
    parse->add_option("--out", o.out, "output file");

    auto* verify = app.add_subcommand("verify", "perfect-secrecy verdict for a scenario file");
    verify->add_option("--scenario", o.scenario, "scenario (JSON)")->required()->check(CLI::ExistingFile);
    verify->add_option("--jobs", o.jobs, "enumeration threads (0: all cores)")->capture_default_str();
    verify->add_option("--out", o.out, "output file");

    auto* cap = app.add_subcommand("capacity", "capacity of the (d,k) constraint");
    cap->add_option("--d", o.d, "minimum zero run between ones")->capture_default_str();
    cap->add_option("--k", o.k, "maximum zero run")->capture_default_str();
    cap->add_option("--n", o.n, "also list transfer-matrix counts for lengths 1..n");
    cap->add_option("--out", o.out, "output file");

    auto* fsm = app.add_subcommand("fsm-validate", "check a machine description file");
    fsm->add_option("--fsm", o.fsm, "machine (JSON)")->required()->check(CLI::ExistingFile);
    fsm->add_option("--out", o.out, "output file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        error_record(err, "usage", e.what(), 1);
        return 1;
    }

    try {
        if (bounds->parsed()) return cmd_bounds(o, out);
        if (enc->parsed()) return cmd_encrypt(o, out);
        if (dec->parsed()) return cmd_decrypt(o, out);
        if (parse->parsed()) return cmd_parse(o, out);
        if (verify->parsed()) return cmd_verify(o, out);
        if (cap->parsed()) return cmd_capacity(o, out);
        if (fsm->parsed()) return cmd_fsm_validate(o, out);
    } catch (const Error& e) {
        error_record(err, e.kind(), e.what(), e.exit_code());
        return e.exit_code();
    } catch (const std::exception& e) {
        error_record(err, "error", e.what(), 1);
        return 1;
    }
    error_record(err, "usage", "no subcommand", 1);
    return 1;
}

}  // namespace secrecy::cli
