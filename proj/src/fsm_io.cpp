#include "secrecy/fsm_io.hpp"

#include <fstream>
#include <sstream>

#include "secrecy/errors.hpp"

namespace secrecy {

using nlohmann::json;

namespace {

std::string indexed(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& expect_array(const json& node, const std::string& path, std::size_t size) {
    if (!node.is_array()) throw ValidationError(path + ": expected an array");
    if (node.size() != size)
        throw ValidationError(path + ": expected " + std::to_string(size) + " entries, found " +
                              std::to_string(node.size()));
    return node;
}

std::uint64_t expect_uint(const json& node, const std::string& path) {
    if (!node.is_number_integer() || node.get<std::int64_t>() < 0)
        throw ValidationError(path + ": expected a non-negative integer");
    return node.get<std::uint64_t>();
}

Alphabet read_alphabet(const json& node, const std::string& path) {
    if (!node.is_array() || node.empty()) throw ValidationError(path + ": expected a non-empty list of symbols");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_string()) throw ValidationError(indexed(path, i) + ": expected a string");
        names.push_back(node[i].get<std::string>());
    }
    return Alphabet(std::move(names));
}

}  // namespace

FsmSpec fsm_from_json(const json& doc) {
    if (!doc.is_object()) throw ValidationError("machine description must be a JSON object");
    for (const char* required : {"alphabet", "states", "initial", "next"})
        if (!doc.contains(required)) throw ValidationError(std::string("missing field '") + required + "'");

    Alphabet alphabet = read_alphabet(doc.at("alphabet"), "alphabet");
    const std::uint64_t states = expect_uint(doc.at("states"), "states");
    if (states == 0) throw ValidationError("states: must be at least 1");
    const std::uint64_t initial = expect_uint(doc.at("initial"), "initial");
    if (initial >= states) throw ValidationError("initial: state " + std::to_string(initial) + " out of range");
    const std::uint64_t period = doc.contains("period") ? expect_uint(doc.at("period"), "period") : 1;
    if (period == 0) throw ValidationError("period: must be at least 1");
    std::optional<Alphabet> si;
    if (doc.contains("si_alphabet") && !doc.at("si_alphabet").is_null())
        si = read_alphabet(doc.at("si_alphabet"), "si_alphabet");

    const std::size_t alpha = alphabet.size();
    const std::size_t beta = si ? si->size() : 0;
    const std::size_t beta1 = std::max<std::size_t>(beta, 1);

    // Walks the optional si level below a (state, symbol) cell.
    auto read_cells = [&](const json& cell, const std::string& path, auto&& store, std::uint64_t limit,
                          const char* what) {
        auto check = [&](const json& v, const std::string& p) {
            const std::uint64_t value = expect_uint(v, p);
            if (value >= limit)
                throw ValidationError(p + ": " + what + " " + std::to_string(value) + " out of range");
            return value;
        };
        if (si) {
            expect_array(cell, path, beta);
            for (std::size_t y = 0; y < beta; ++y) store(y, check(cell[y], indexed(path, y)));
        } else {
            store(0, check(cell, path));
        }
    };

    std::vector<State> next(period * states * alpha * beta1);
    const json& next_doc = doc.at("next");
    for (std::size_t phase = 0; phase < period; ++phase) {
        std::string phase_path = "next";
        const json* phase_node = &next_doc;
        if (period > 1) {
            expect_array(next_doc, "next", period);
            phase_node = &next_doc[phase];
            phase_path = indexed("next", phase);
        }
        expect_array(*phase_node, phase_path, states);
        for (std::size_t z = 0; z < states; ++z) {
            const std::string zp = indexed(phase_path, z);
            expect_array((*phase_node)[z], zp, alpha);
            for (std::size_t x = 0; x < alpha; ++x) {
                read_cells((*phase_node)[z][x], indexed(zp, x),
                           [&](std::size_t y, std::uint64_t v) {
                               next[((phase * states + z) * alpha + x) * beta1 + y] = static_cast<State>(v);
                           },
                           states, "state");
            }
        }
    }

    std::optional<std::vector<std::uint8_t>> output;
    if (doc.contains("output") && !doc.at("output").is_null()) {
        output.emplace(states * alpha * beta1);
        const json& out_doc = doc.at("output");
        expect_array(out_doc, "output", states);
        for (std::size_t z = 0; z < states; ++z) {
            const std::string zp = indexed("output", z);
            expect_array(out_doc[z], zp, alpha);
            for (std::size_t x = 0; x < alpha; ++x)
                read_cells(out_doc[z][x], indexed(zp, x),
                           [&](std::size_t y, std::uint64_t v) {
                               (*output)[(z * alpha + x) * beta1 + y] = static_cast<std::uint8_t>(v);
                           },
                           2, "bit");
        }
    }

    return FsmSpec(std::move(alphabet), states, static_cast<State>(initial), period, std::move(si), std::move(next),
                   std::move(output));
}

json fsm_to_json(const FsmSpec& fsm) {
    const std::size_t alpha = fsm.alphabet_size();
    const std::size_t beta = fsm.si_alphabet_size();
    auto cell = [&](auto&& value_at) {
        if (!fsm.has_side_info()) return json(value_at(0));
        json arr = json::array();
        for (std::size_t y = 0; y < beta; ++y) arr.push_back(value_at(y));
        return arr;
    };
    json next_doc = json::array();
    for (std::size_t phase = 0; phase < fsm.period(); ++phase) {
        json per_phase = json::array();
        for (State z = 0; z < fsm.state_count(); ++z) {
            json row = json::array();
            for (Symbol x = 0; x < alpha; ++x)
                row.push_back(cell([&](std::size_t y) { return fsm.next(z, x, static_cast<Symbol>(y), phase); }));
            per_phase.push_back(std::move(row));
        }
        if (fsm.period() == 1)
            next_doc = std::move(per_phase);
        else
            next_doc.push_back(std::move(per_phase));
    }
    json doc = json::object();
    doc["alphabet"] = fsm.alphabet().names();
    doc["states"] = fsm.state_count();
    doc["initial"] = fsm.initial_state();
    doc["period"] = fsm.period();
    if (fsm.has_side_info()) doc["si_alphabet"] = fsm.si_alphabet()->names();
    doc["next"] = std::move(next_doc);
    if (fsm.has_output()) {
        json out = json::array();
        for (State z = 0; z < fsm.state_count(); ++z) {
            json row = json::array();
            for (Symbol x = 0; x < alpha; ++x)
                row.push_back(cell([&](std::size_t y) { return fsm.output(z, x, static_cast<Symbol>(y)) ? 1 : 0; }));
            out.push_back(std::move(row));
        }
        doc["output"] = std::move(out);
    }
    return doc;
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

FsmSpec load_fsm(const std::filesystem::path& path) { return fsm_from_json(load_json(path)); }

}  // namespace secrecy
