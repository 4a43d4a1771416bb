#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dke/evolution.hpp"

namespace dke {

struct GridConfig {
    double d = 0.0;
    int num_cells = 0;
    int n_max = 0;

    GridSpec spec() const { return {d, num_cells, n_max}; }

    friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

enum class PotentialKind { zero, uniform_field, harmonic, custom_table };

struct PotentialConfig {
    PotentialKind kind = PotentialKind::zero;
    double E0 = 0.0;
    double k_spring = 0.0;
    std::string file;

    friend bool operator==(const PotentialConfig&, const PotentialConfig&) = default;
};

enum class InitialKind { uniform, gaussian_rk, fermi_dirac };

struct InitialConfig {
    InitialKind kind = InitialKind::uniform;
    double n0 = 0.0;
    // gaussian_rk: centre in lattice coordinates (cell index, momentum index),
    // widths in physical units; sigma_k = 0 fills the single column center_n.
    double center_m = 0.0;
    double center_n = 0.0;
    double sigma_r = 0.0;
    double sigma_k = 0.0;
    double amplitude = 1.0;
    double mu = 0.0;
    double T = 0.0;

    friend bool operator==(const InitialConfig&, const InitialConfig&) = default;
};

struct CollisionConfig {
    CollisionKind kind = CollisionKind::none;
    // user_table
    std::string file;
    std::optional<double> T;
    bool check_detailed_balance = false;
    // static_screened_coulomb (T shared with user_table)
    double eps = 0.0;
    double eta = 0.05;
    int q_max = 0;

    friend bool operator==(const CollisionConfig&, const CollisionConfig&) = default;
};

struct ScenarioConfig {
    GridConfig grid;
    PotentialConfig potential;
    InitialConfig initial;
    CollisionConfig collision;
    IntegratorConfig integrator{0.01, 1.0, Scheme::rk4, 10, PositivityPolicy::abort};
    std::string output_dir = "output";

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct ConfigIssue {
    int line = 0;  // 0 when the problem has no single source line
    std::string key;
    std::string message;

    std::string to_string() const;
};

/// Every problem found in a config text.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

/// A file named by a config (or the config itself) is missing, unreadable
/// or malformed.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses the sectioned `key = value` format:
///
///   [grid]        d, num_cells, n_max                       (required)
///   [potential]   kind = zero | uniform_field (E0) | harmonic (k_spring)
///                        | custom_table (file)
///   [initial]     kind = uniform (n0)
///                        | gaussian_rk (center_m, center_n, sigma_r, sigma_k, amplitude)
///                        | fermi_dirac (mu, T)
///   [collision]   kind = none | user_table (file, T, check_detailed_balance)
///                        | static_screened_coulomb (eps, T, eta, q_max)
///   [integrator]  dt, t_end, scheme = rk4 | euler, snapshot_every,
///                 positivity = abort | record
///   [output]      dir
///
/// `#` starts a comment. Throws ConfigError listing every violation.
ScenarioConfig parse_config(std::string_view text);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

/// Reads and parses a file; relative table paths are resolved against the
/// file's directory. Throws InputError if the file cannot be read.
ScenarioConfig load_config(const std::filesystem::path& path);

std::string_view to_string(PotentialKind kind);
std::string_view to_string(InitialKind kind);
std::string_view to_string(CollisionKind kind);
std::string_view to_string(Scheme scheme);
std::string_view to_string(PositivityPolicy policy);

}  // namespace dke
