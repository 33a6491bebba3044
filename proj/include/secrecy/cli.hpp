#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "secrecy/sequence.hpp"

namespace secrecy::cli {

// Plaintext ingestion. `alphabet` is "bytes" (all 256 byte values) or the
// characters of a declared character alphabet, e.g. "01". Without
// keep_newlines every '\n' and '\r' byte is dropped before validation; with it
// they are ordinary symbols and must belong to the alphabet. ValidationError
// names the byte offset of the first symbol outside the alphabet.
Alphabet alphabet_from_option(const std::string& alphabet);
SymbolSequence read_plaintext(const std::filesystem::path& path, const Alphabet& alphabet, bool keep_newlines);
SymbolSequence parse_plaintext(const std::string& bytes, const Alphabet& alphabet, bool keep_newlines);
// Concatenated symbol names, written verbatim.
void write_plaintext(const std::filesystem::path& path, const SymbolSequence& x);

// Runs one command line (without the program name). Structured results go to
// `out`; failures go to `err` as a one-line JSON record
// {"error": kind, "message": ..., "exit_code": n}. Returns the exit code:
// 0 success, 1 usage, 2 validation, 3 budget, 4 integrity.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace secrecy::cli
