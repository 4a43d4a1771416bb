// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dke/basis.hpp"
#include "dke/scenario.hpp"
#include "dke/spectral.hpp"
#include "oracles.hpp"

using namespace dke;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool passed = true;
    std::string detail;

    // Records one measured quantity against its limit.
    void require(bool ok, const std::string& what, double value) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s%s=%.3e%s", detail.empty() ? "" : ", ", what.c_str(), value,
                      ok ? "" : " (over limit)");
        detail += buf;
        passed = passed && ok;
    }
};

fs::path out_root() { return fs::current_path() / "acceptance_output"; }

std::string preset(const char* name) { return (fs::path(DKE_PRESET_DIR) / (std::string(name) + ".cfg")).string(); }

int run_cli(const std::string& args) {
    const std::string cmd = std::string("'") + DKE_CLI_PATH + "' " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

IntegratorConfig with_dt(IntegratorConfig c, double dt) {
    c.dt = dt;
    c.snapshot_every = 1 << 30;
    return c;
}

// 1. Completeness of the wavelet basis.
Verdict basis_completeness() {
    Verdict v;
    for (const auto& spec : {GridSpec(1.0, 4, 8), GridSpec(1.0, 8, 16)}) {
        double inner = 0.0;
        for (std::size_t i = 0; i < spec.num_states(); ++i) {
            for (std::size_t j = 0; j < spec.num_states(); ++j) {
                const auto a = spec.unflat(i);
                const auto b = spec.unflat(j);
                if (a.m != b.m) continue;  // disjoint supports: both routes return exact zero
                inner = std::max(inner, std::abs(inner_product(spec, a, b) - inner_product_quadrature(spec, a, b, 64)));
            }
        }
        double recon = 0.0;
        for (int n0 = -spec.n_max(); n0 <= spec.n_max(); ++n0) {
            const double k = spec.momentum(n0);
            const LatticeField coeffs = expand_plane_wave(spec, k);
            for (int s = 0; s < 257; ++s) {
                const double x = -0.5 * spec.length() + (s + 0.5) * spec.length() / 257.0;
                recon = std::max(recon, std::abs(reconstruct(coeffs, x) - std::polar(1.0 / std::sqrt(spec.length()), k * x)));
            }
        }
        const std::string tag = "(M=" + std::to_string(spec.num_cells()) + ",N=" + std::to_string(spec.n_max()) + ")";
        v.require(inner < 1e-12, "inner" + tag, inner);
        v.require(recon < 1e-10, "recon" + tag, recon);
    }
    const double sigma = 6.4;
    auto gaussian = [&](double x) { return Complex(std::exp(-x * x / (2.0 * sigma * sigma)), 0.0); };
    std::vector<double> defects;
    for (int nmax : {16, 32, 64}) {
        const GridSpec spec(1.0, 64, nmax);
        std::vector<double> xs;
        for (int m = 0; m < spec.num_cells(); ++m) xs.push_back(spec.position(m));
        defects.push_back(closure_defect(spec, gaussian, xs));
    }
    const bool monotone = defects[1] < defects[0] && defects[2] < defects[1];
    v.require(monotone, "closure16", defects[0]);
    v.require(monotone, "closure32", defects[1]);
    v.require(monotone, "closure64", defects[2]);
    return v;
}

// 2. Plane-wave coefficients against direct quadrature, and the rejected √(L/d) prefactor.
Verdict prefactor() {
    Verdict v;
    const GridSpec spec(0.8, 6, 5);
    std::mt19937_64 rng(oracle::seed());
    std::uniform_real_distribution<double> kdist(-1.5 * spec.max_momentum(), 1.5 * spec.max_momentum());
    std::uniform_int_distribution<std::size_t> state(0, spec.num_states() - 1);
    const double L = spec.length();
    const double d = spec.cell_width();
    double worst = 0.0;
    double misprint = std::numeric_limits<double>::infinity();
    int samples = 0;
    for (; samples < 240; ++samples) {
        const auto idx = spec.unflat(state(rng));
        const double k = samples % 4 == 0 ? spec.momentum(idx.n) : kdist(rng);
        const Complex quad = plane_wave_overlap_quadrature(spec, idx, k);
        const double dk = k - spec.momentum(idx.n);
        const Complex phase = std::polar(1.0, dk * spec.position(idx.m)) * sinc(0.5 * d * dk);
        const Complex stated = std::sqrt(d / L) * phase;
        worst = std::max(worst, std::abs(quad - stated));
        worst = std::max(worst, std::abs(expand_plane_wave(spec, k)(idx) - quad));
        if (std::abs(phase) > 0.1) misprint = std::min(misprint, std::abs(quad - std::sqrt(L / d) * phase));
    }
    v.require(worst < 1e-12, "sqrt(d/L) defect over " + std::to_string(samples) + " samples", worst);
    v.require(misprint > 0.1, "sqrt(L/d) smallest miss", misprint);
    return v;
}

// 3. Drift stencil equals spectral differentiation in K.
Verdict drift_spectral() {
    Verdict v;
    for (int nmax : {16, 32}) {
        const GridSpec spec(1.0, 2, nmax);
        const double dk = spec.momentum_step();
        double worst = 0.0;
        for (double width : {2.0, 3.0, 4.0}) {
            const double sigma = width * dk;
            DistributionField n(spec);
            for (int m = 0; m < 2; ++m) {
                for (int k = -nmax; k <= nmax; ++k) {
                    const double K = spec.momentum(k) - 0.3 * dk;
                    n(m, k) = std::exp(-K * K / (2.0 * sigma * sigma));
                }
            }
            const std::vector<double> E = {1.0, -0.5};
            const RealField out = drift_apply(n, std::span<const double>(E));
            for (int m = 0; m < 2; ++m) {
                std::vector<double> row(n.row(m).begin(), n.row(m).end());
                const auto ref = oracle::naive_dft_derivative(row, spec.num_momenta() * dk);
                for (int j = 0; j < spec.num_momenta(); ++j) worst = std::max(worst, std::abs(out.at(m, j) + E[m] * ref[j]));
            }
        }
        v.require(worst < 1e-8, std::to_string(2 * nmax + 1) + "pts", worst);
    }
    return v;
}

// 4. Particle-number conservation.
Verdict conservation() {
    Verdict v;
    for (const char* name : {"free_streaming", "uniform_drift"}) {
        const auto config = load_config(preset(name));
        const auto result = simulate(config, out_root() / name);
        const double n0 = result.trajectory.front().diagnostics.total_number;
        double worst = 0.0;
        for (const auto& snap : result.trajectory) worst = std::max(worst, std::abs(snap.diagnostics.total_number - n0) / n0);
        const long steps = config.integrator.num_steps();
        v.require(worst < 1e-10 && steps == 1000, std::string(name) + " (" + std::to_string(steps) + " steps)", worst);
    }
    std::mt19937_64 rng(oracle::seed() + 1);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const GridSpec spec(1.0 + trial % 3, 2 + 2 * (trial % 2), 1 + trial % 4);
        const auto model = CollisionModel::from_table(spec, oracle::random_rates(spec, rng, 0.5, 3.0));
        const auto n = oracle::random_occupation(spec, rng);
        const RealField rhs = collision_rhs(n, model);
        double sum = 0.0;
        double scale = 0.0;
        for (double x : rhs.values()) {
            sum += x;
            scale += std::abs(x);
        }
        worst = std::max(worst, std::abs(sum) / std::max(scale, 1e-300));
    }
    v.require(worst < 1e-12, "collision sum (100 instances)", worst);
    return v;
}

// 5. Hermiticity and trace of the mean-field right-hand side.
Verdict hermiticity_trace() {
    Verdict v;
    std::mt19937_64 rng(oracle::seed() + 2);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const std::vector<GridSpec> grids = {GridSpec(2.0, 2, 7), GridSpec(2.0, 4, 3), GridSpec(3.0, 6, 2),
                                         GridSpec(1.0, 2, 4), GridSpec(4.0, 10, 1)};
    double herm = 0.0;
    double trace = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const GridSpec& spec = grids[trial % grids.size()];
        std::vector<double> V;
        for (int m = 0; m < spec.num_cells(); ++m) V.push_back(unit(rng));
        const auto profile = PotentialProfile::from_potential(spec, V);
        const auto coupling = trial % 2 == 0 ? KineticCoupling::diagonal : KineticCoupling::full;
        const auto P = oracle::random_hermitian(rng, static_cast<Eigen::Index>(spec.num_states()));
        const auto rhs = meanfield_rhs(spec, P, profile, coupling);
        herm = std::max(herm, hermiticity_defect(rhs));
        trace = std::max(trace, std::abs(rhs.trace()) / P.cwiseAbs().maxCoeff());
    }
    v.require(herm < 1e-12, "hermiticity", herm);
    v.require(trace < 1e-12, "trace/|P|", trace);
    double drift = 0.0;
    for (const auto& spec : {GridSpec(2.0, 2, 7), GridSpec(2.0, 4, 3)}) {
        std::vector<double> V;
        for (int m = 0; m < spec.num_cells(); ++m) V.push_back(0.5 * unit(rng));
        const auto profile = PotentialProfile::from_potential(spec, V);
        const auto P0 = oracle::random_hermitian(rng, static_cast<Eigen::Index>(spec.num_states()));
        const double dt = 0.9 * polarization_dt_bound(meanfield_generator(spec, profile));
        const auto traj = run_polarization(spec, P0, profile, {dt, 1000 * dt, Scheme::rk4, 100});
        for (const auto& snap : traj) drift = std::max(drift, std::abs(snap.P.trace() - P0.trace()));
    }
    v.require(drift < 1e-10, "trace drift (1000 steps)", drift);
    return v;
}

// 6. Fermi-Dirac stationarity and relaxation.
Verdict equilibrium() {
    Verdict v;
    double stationary = 0.0;
    for (const auto& spec : {GridSpec(6.0, 2, 3), GridSpec(4.0, 4, 4), GridSpec(8.0, 2, 6)}) {
        for (double T : {0.5, 1.0, 3.0}) {
            const auto model = build_screened_coulomb_rates(spec, 1.5, T, 0.3);
            const auto fd = fermi_dirac_field(spec, 0.7 * T, T);
            stationary = std::max(stationary, max_abs(collision_rhs(fd, model)));
        }
    }
    v.require(stationary < 1e-10, "|collision_rhs(FD)|", stationary);

    const auto config = load_config(preset("relaxation"));
    const auto result = simulate(config, out_root() / "relaxation");
    const auto& last = result.trajectory.back().n;
    const auto spec = config.grid.spec();
    double per_cell = 0.0;
    for (double x : result.trajectory.front().n.row(0)) per_cell += x;
    const double T = *config.collision.T;
    const auto fd = fermi_dirac_field(spec, chemical_potential_for(spec, per_cell, T), T);
    v.require(max_abs_difference(last, fd) < 1e-4, "relaxation preset vs FD", max_abs_difference(last, fd));
    return v;
}

// 7. Free streaming moves the centre of mass at K0.
Verdict free_streaming() {
    Verdict v;
    const auto config = load_config(preset("free_streaming"));
    const auto spec = config.grid.spec();
    const int column = static_cast<int>(config.initial.center_n);
    const double K0 = spec.momentum(column);
    const auto n0 = build_initial(config, spec);
    const double x0 = oracle::centre_of_mass(n0, column);
    const double traversal = K0 * config.integrator.t_end / spec.length();
    const auto traj = run_distribution(n0, build_profile(config, spec), CollisionModel::none(spec), config.integrator);
    double worst = 0.0;
    for (const auto& snap : traj) worst = std::max(worst, std::abs(oracle::centre_of_mass(snap.n, column) - x0 - K0 * snap.t));
    v.require(std::abs(traversal - 0.25) < 1e-12, "traversed fraction of L", traversal);
    v.require(worst < 0.01 * spec.cell_width(), "centre-of-mass error / d", worst / spec.cell_width());
    return v;
}

// 8. Difference equation approaches the differential one.
Verdict classical_limit() {
    Verdict v;
    const fs::path dir = out_root() / "limit_study";
    const int status = run_cli("limit-study --config " + preset("limit_study_base") + " --levels 3 --output-dir '" +
                               dir.string() + "'");
    v.require(status == 0, "exit status", status);
    std::ifstream in(dir / "limit_study.csv");
    std::string line;
    std::getline(in, line);
    std::vector<double> defects;
    while (std::getline(in, line)) defects.push_back(std::stod(line.substr(line.rfind(',') + 1)));
    v.require(defects.size() == 3, "levels", static_cast<double>(defects.size()));
    for (std::size_t i = 1; i < defects.size(); ++i) {
        const double ratio = defects[i - 1] / defects[i];
        v.require(ratio >= 2.0, "ratio" + std::to_string(i), ratio);
    }
    return v;
}

// 9. RK4 convergence order on the free-streaming scenario.
Verdict rk4_order() {
    Verdict v;
    const auto config = load_config(preset("free_streaming"));
    const auto spec = config.grid.spec();
    const auto n0 = build_initial(config, spec);
    const auto profile = build_profile(config, spec);
    const auto none = CollisionModel::none(spec);
    const double dt = config.integrator.dt;
    auto final_state = [&](double h) { return run_distribution(n0, profile, none, with_dt(config.integrator, h)).back().n; };
    const auto reference = final_state(dt / 16.0);
    const double e1 = max_abs_difference(final_state(dt), reference);
    const double e2 = max_abs_difference(final_state(dt / 2.0), reference);
    v.require(e1 > 1e-12, "error(dt)", e1);
    v.require(e1 / e2 >= 12.0, "factor", e1 / e2);
    return v;
}

// 10. Repeated CLI runs produce byte-identical CSVs.
Verdict determinism() {
    Verdict v;
    double mismatches = 0.0;
    for (const char* name : {"free_streaming", "uniform_drift", "relaxation"}) {
        const fs::path a = out_root() / "det_a";
        const fs::path b = out_root() / "det_b";
        const int sa = run_cli("simulate --config " + preset(name) + " --output-dir '" + a.string() + "'");
        const int sb = run_cli("simulate --config " + preset(name) + " --output-dir '" + b.string() + "'");
        v.require(sa == 0 && sb == 0, std::string(name) + " exit", sa + sb);
        for (const char* f : {"snapshots.csv", "diagnostics.csv"}) {
            const std::string x = read_file(a / f);
            if (x.empty() || x != read_file(b / f)) mismatches += 1.0;
        }
    }
    v.require(mismatches == 0.0, "differing files", mismatches);
    return v;
}

}  // namespace

int main() {
    fs::remove_all(out_root());
    fs::create_directories(out_root());
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"basis completeness", basis_completeness},
        {"plane-wave prefactor", prefactor},
        {"drift-spectral equivalence", drift_spectral},
        {"conservation", conservation},
        {"hermiticity and trace", hermiticity_trace},
        {"equilibrium stationarity", equilibrium},
        {"free streaming", free_streaming},
        {"classical limit", classical_limit},
        {"RK4 order", rk4_order},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.passed = false;
            v.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %2zu %s: %s [%.1fs]\n", v.passed ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str(),
                    secs);
        std::fflush(stdout);
        if (!v.passed) ++failed;
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
