// dke: batch driver for the difference kinetic equation.
//
//   dke verify-basis --cells M --nmax N
//   dke simulate --config FILE [--output-dir DIR]
//   dke limit-study --config FILE --levels L [--output-dir DIR]
//
// Exit codes: 0 ok, 1 check or run failure, 2 usage or invalid input.
// Failures print one line "ERROR <CODE>: <message>" to stderr.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "dke/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

int fail(const char* code, std::string message, int status) {
    for (auto& c : message) {
        if (c == '\n') c = ';';
    }
    std::cerr << "ERROR " << code << ": " << message << '\n';
    return status;
}

std::string join_issues(const dke::ConfigError& e) {
    std::string out;
    for (const auto& issue : e.issues()) out += (out.empty() ? "" : "; ") + issue.to_string();
    return out;
}

int run_verify(int cells, int nmax, double corrupt_scale) {
    const dke::GridSpec spec(1.0, cells, nmax);
    dke::VerifyOptions options;
    options.prefactor_scale = corrupt_scale;
    const auto report = dke::verify_basis(spec, options);
    int failed = 0;
    for (const auto& check : report.checks) {
        std::printf("%s  %-52s max_defect=%.3e\n", check.passed ? "PASS" : "FAIL", check.name.c_str(), check.defect);
        if (!check.passed) ++failed;
    }
    if (failed > 0) {
        return fail("CHECK_FAILED", std::to_string(failed) + " of " + std::to_string(report.checks.size()) +
                                        " basis checks failed", kFailure);
    }
    std::printf("verify-basis: %zu checks passed (M=%d, n_max=%d, %zu states)\n", report.checks.size(), cells, nmax,
                spec.num_states());
    return kOk;
}

int run_simulate(const std::string& config_path, const std::optional<std::string>& output_dir) {
    const auto config = dke::load_config(config_path);
    const std::string dir = output_dir.value_or(config.output_dir);
    const auto result = dke::simulate(config, dir);
    const auto& first = result.trajectory.front().diagnostics;
    const auto& last = result.trajectory.back().diagnostics;
    std::printf("simulate: %zu snapshots, dt=%.6g (bound %.6g), total number %.17g -> %.17g, written to %s\n",
                result.trajectory.size(), result.dt_used, result.dt_bound, first.total_number, last.total_number,
                dir.c_str());
    return kOk;
}

int run_limit_study(const std::string& config_path, int levels, const std::optional<std::string>& output_dir) {
    const auto config = dke::load_config(config_path);
    const std::string dir = output_dir.value_or(config.output_dir);
    const auto rows = dke::limit_study(config, levels, dir);
    std::printf("level  d             n_max  defect\n");
    for (const auto& r : rows) std::printf("%-6d %-13.6g %-6d %.6e\n", r.level, r.d, r.n_max, r.defect);
    std::printf("limit-study: wrote %s/limit_study.csv\n", dir.c_str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Difference kinetic equation on a quantized phase-space lattice"};
    app.require_subcommand(1);

    int cells = 0;
    int nmax = 0;
    double corrupt_scale = 1.0;
    auto* verify = app.add_subcommand("verify-basis", "Check orthonormality and completeness of the wavelet basis");
    verify->add_option("--cells", cells, "Number of position cells M (even, >= 2)")->required();
    verify->add_option("--nmax", nmax, "Largest momentum index (>= 1)")->required();
    // Test hook: scales the closed-form coefficients so the checker must fail.
    verify->add_option("--test-corrupt-prefactor", corrupt_scale)->group("");

    std::string config_path;
    std::optional<std::string> output_dir;
    auto* simulate = app.add_subcommand("simulate", "Integrate a scenario and write CSV output");
    simulate->add_option("--config", config_path, "Scenario config file")->required();
    simulate->add_option("--output-dir", output_dir, "Override [output] dir");

    int levels = 0;
    auto* limit = app.add_subcommand("limit-study", "Compare difference and differential right-hand sides under refinement");
    limit->add_option("--config", config_path, "Base scenario config file")->required();
    limit->add_option("--levels", levels, "Number of refinement levels")->required()->check(CLI::Range(2, 5));
    limit->add_option("--output-dir", output_dir, "Override [output] dir");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("USAGE", e.what(), kUsage);
    }

    try {
        if (*verify) return run_verify(cells, nmax, corrupt_scale);
        if (*simulate) return run_simulate(config_path, output_dir);
        return run_limit_study(config_path, levels, output_dir);
    } catch (const dke::ConfigError& e) {
        return fail("CONFIG", join_issues(e), kUsage);
    } catch (const dke::InputError& e) {
        return fail("IO", e.what(), kUsage);
    } catch (const dke::StepBoundError& e) {
        return fail("STEP_BOUND", e.what(), kUsage);
    } catch (const dke::PositivityError& e) {
        return fail("POSITIVITY", e.what(), kFailure);
    } catch (const std::invalid_argument& e) {
        return fail("USAGE", e.what(), kUsage);
    } catch (const std::exception& e) {
        return fail("RUNTIME", e.what(), kFailure);
    }
}
