#pragma once

#include <filesystem>

#include "json.hpp"
#include "secrecy/fsm.hpp"

namespace secrecy {

// Machine description file:
//
//   { "alphabet": ["0","1"], "states": 3, "initial": 0, "period": 1,
//     "si_alphabet": ["a","b"],             // optional
//     "next":   [phase][state][symbol][si], // phase level only when period > 1,
//                                           // si level only with si_alphabet
//     "output": [state][symbol][si] }       // optional, entries 0/1
//
// Any malformed or out-of-range entry raises ValidationError naming the index
// path of the offending entry, e.g. "next[1][2]".
FsmSpec fsm_from_json(const nlohmann::json& doc);
nlohmann::json fsm_to_json(const FsmSpec& fsm);
FsmSpec load_fsm(const std::filesystem::path& path);

// Reads a whole file as JSON; ValidationError on parse failure.
nlohmann::json load_json(const std::filesystem::path& path);

}  // namespace secrecy
