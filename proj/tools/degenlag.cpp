// degenlag: command-line front end over the library (no analysis logic here).
#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "degenlag/driver.hpp"

using namespace degenlag;

namespace {

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int emit(const CommandResult& r, const std::string& json_path, const std::string& text_path) {
    if (text_path.empty()) {
        std::cout << r.text;
    } else {
        write_atomic(text_path, r.text);
    }
    if (!json_path.empty()) write_atomic(json_path, r.json.dump(2) + "\n");
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constraint chains and Hamilton-Jacobi checks for degenerate Lagrangians"};
    app.require_subcommand(1);
    std::string file, json_path, setting = "sr", section, out_dir = ".", report_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("file", file, "problem file (JSON, schema degenlag/1)")->required();
        cmd->add_option("--json", json_path, "write the JSON result document to this path");
    };
    CLI::App* analyze = app.add_subcommand("analyze", "Legendre map, energy, Omega_L and Hessian verdict");
    add_common(analyze);
    CLI::App* chain = app.add_subcommand("chain", "constraint chain and status");
    add_common(chain);
    chain->add_option("--setting", setting, "sr, lag or ham")->check(CLI::IsMember({"sr", "lag", "ham"}));
    CLI::App* hj = app.add_subcommand("hj-check", "Hamilton-Jacobi conditions for a section");
    add_common(hj);
    hj->add_option("--section", section, "section name from the problem file")->required();
    hj->add_option("--setting", setting, "sr, lag or ham")->check(CLI::IsMember({"sr", "lag", "ham"}));
    CLI::App* simulate = app.add_subcommand("simulate", "integrate, lift and check the lifted curve");
    add_common(simulate);
    simulate->add_option("--out-dir", out_dir, "directory for trajectory CSVs");
    CLI::App* report = app.add_subcommand("report", "markdown report of all analyses");
    add_common(report);
    report->add_option("--out", report_path, "markdown output path (default: stdout)");
    report->add_option("--out-dir", out_dir, "directory for trajectory CSVs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        const Problem problem = load_problem(file);
        if (*analyze) return emit(run_analyze(problem), json_path, "");
        if (*chain) return emit(run_chain(problem, parse_setting(setting)), json_path, "");
        if (*hj) return emit(run_hj_check(problem, section, parse_setting(setting)), json_path, "");
        if (*simulate) return emit(run_simulate(problem, out_dir), json_path, "");
        return emit(run_report(problem, out_dir, utc_now()), json_path, report_path);
    } catch (const NonConstantRank& e) {
        std::cerr << "indeterminate: " << e.what() << '\n';
        return kIndeterminate;
    } catch (const IndeterminateZeroTest& e) {
        std::cerr << "indeterminate: " << e.what() << '\n';
        return kIndeterminate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
}
