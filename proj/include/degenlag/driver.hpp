#pragma once

#include <string>

#include "degenlag/problem.hpp"
#include "json.hpp"

namespace degenlag {

enum class Setting { SkinnerRusk, Lagrangian, Hamiltonian };
/// "sr", "lag", "ham"; throws InputError otherwise.
Setting parse_setting(const std::string& text);
const char* to_string(Setting s);

/// Process exit codes.
enum ExitCode : int { kPass = 0, kFail = 1, kIndeterminate = 2, kInputError = 3 };

/// Fail dominates indeterminate, which dominates pass.
int combine_exit(int a, int b);

/// Result of one command: human text, JSON document and exit code.
struct CommandResult {
    int exit_code = kPass;
    std::string text;
    nlohmann::ordered_json json;
};

CommandResult run_analyze(const Problem& p);
CommandResult run_chain(const Problem& p, Setting setting);
CommandResult run_hj_check(const Problem& p, const std::string& section, Setting setting);
/// Writes <section>_base.csv, <section>_lifted.csv and <section>_integral.csv
/// into `out_dir`.
CommandResult run_simulate(const Problem& p, const std::string& out_dir);
/// Markdown aggregating all of the above; `timestamp` goes into the header
/// line only (empty: omitted).
CommandResult run_report(const Problem& p, const std::string& out_dir, const std::string& timestamp);

/// Hamiltonian input of a problem: the file's block (validated) or derived.
HamiltonianInput hamiltonian_input(const Problem& p);

/// Writes via a temporary file and rename.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace degenlag
