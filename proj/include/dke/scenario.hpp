#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dke/config.hpp"

namespace dke {

/// Potential for the configured kind; custom_table reads a CSV of `m,V` rows
/// (E from centred differences).
PotentialProfile build_profile(const ScenarioConfig& config, const GridSpec& spec);

DistributionField build_initial(const ScenarioConfig& config, const GridSpec& spec);

/// Collision model for the configured kind; user_table reads a CSV of
/// `m,n,m1,n1,rate` rows meaning W((m,n) <- (m1,n1)) = rate.
CollisionModel build_collision(const ScenarioConfig& config, const GridSpec& spec);

struct SimulationResult {
    std::vector<DistributionSnapshot> trajectory;
    double dt_used = 0.0;
    double dt_bound = 0.0;
};

/// Runs the scenario and writes snapshots.csv, diagnostics.csv and run_meta
/// into output_dir (created if needed). Output is byte-identical for
/// identical configs. Evolution errors propagate.
SimulationResult simulate(const ScenarioConfig& config, const std::filesystem::path& output_dir);

struct LimitStudyRow {
    int level = 0;
    double d = 0.0;
    int n_max = 0;
    double defect = 0.0;
};

/// Refinement study of max|dbe_rhs - classical_rhs| at t = 0. Level l halves
/// d, doubles num_cells and n_max l times and re-samples the same physical
/// initial data and potential. Needs levels in [2, 5], a gaussian_rk initial
/// state with sigma_k > 0 and an analytic potential. The collision term is
/// identical in both right-hand sides and is left out. Writes limit_study.csv.
std::vector<LimitStudyRow> limit_study(const ScenarioConfig& config, int levels,
                                       const std::filesystem::path& output_dir);

struct VerifyOptions {
    /// Multiplies the closed-form plane-wave coefficients; 1 except in tests
    /// of the checker itself.
    double prefactor_scale = 1.0;
    double tolerance = 1e-10;
};

struct BasisCheck {
    std::string name;
    double defect = 0.0;
    bool passed = false;
};

struct BasisReport {
    std::vector<BasisCheck> checks;
    bool passed() const;
};

/// Exhaustive basis checks on a small grid (at most 512 states):
/// orthonormality by quadrature, plane-wave coefficients against their
/// quadrature oracle, on-grid plane-wave reconstruction, closure of a
/// band-limited field, and the phase matrix element.
BasisReport verify_basis(const GridSpec& spec, const VerifyOptions& options = {});

}  // namespace dke
