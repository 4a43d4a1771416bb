#include "dke/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dke/basis.hpp"
#include "dke/quadrature.hpp"

namespace dke {

namespace {

struct CsvRow {
    int line = 0;
    std::vector<double> values;
};

std::vector<CsvRow> read_numeric_csv(const std::string& path, std::size_t columns, const char* what) {
    std::ifstream in(path);
    if (!in) throw InputError(std::string("cannot open ") + what + " " + path);
    std::vector<CsvRow> rows;
    std::string line;
    int line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> values;
        std::stringstream fields(line);
        std::string field;
        bool numeric = true;
        while (std::getline(fields, field, ',')) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(field, &used));
                if (field.find_first_not_of(" \t\r", used) != std::string::npos) numeric = false;
            } catch (const std::exception&) {
                numeric = false;
            }
        }
        if (!numeric && first) {
            first = false;
            continue;  // header
        }
        first = false;
        if (!numeric || values.size() != columns) {
            throw InputError(std::string(what) + " " + path + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(columns) + " numeric columns");
        }
        rows.push_back({line_no, std::move(values)});
    }
    return rows;
}

int as_index(double v, const std::string& path, int line) {
    if (v != std::round(v)) {
        throw InputError(path + ":" + std::to_string(line) + ": index " + format_double(v) +
                                 " is not an integer");
    }
    return static_cast<int>(v);
}

DistributionField gaussian_field(const GridSpec& spec, double xc, double kc, double sigma_r, double sigma_k,
                                 double amplitude) {
    DistributionField n(spec);
    for (int m = 0; m < spec.num_cells(); ++m) {
        const double dx = spec.position(m) - xc;
        const double gr = amplitude * std::exp(-dx * dx / (2.0 * sigma_r * sigma_r));
        for (int k = -spec.n_max(); k <= spec.n_max(); ++k) {
            if (sigma_k == 0.0) {
                n(m, k) = spec.momentum(k) == kc ? gr : 0.0;
                continue;
            }
            const double dk = spec.momentum(k) - kc;
            n(m, k) = gr * std::exp(-dk * dk / (2.0 * sigma_k * sigma_k));
        }
    }
    return n;
}

PotentialProfile analytic_profile(const PotentialConfig& config, const GridSpec& spec) {
    switch (config.kind) {
        case PotentialKind::zero: return PotentialProfile::zero(spec);
        case PotentialKind::uniform_field: return PotentialProfile::uniform_field(spec, config.E0);
        case PotentialKind::harmonic: return PotentialProfile::harmonic(spec, config.k_spring);
        case PotentialKind::custom_table: break;
    }
    throw std::logic_error("analytic_profile: tabulated potential");
}

class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path) : path_(path) {}

    void header(std::string_view text) {
        buffer_ += text;
        buffer_ += '\n';
    }

    template <class... Ts>
    void row(const Ts&... fields) {
        bool first = true;
        ((buffer_ += (first ? "" : ","), buffer_ += field(fields), first = false), ...);
        buffer_ += '\n';
    }

    void flush() const {
        std::ofstream out(path_, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + path_.string());
        out << buffer_;
        if (!out) throw InputError("write failed for " + path_.string());
    }

private:
    static std::string field(double v) { return format_double(v); }
    static std::string field(int v) { return std::to_string(v); }

    std::filesystem::path path_;
    std::string buffer_;
};

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
}

}  // namespace

PotentialProfile build_profile(const ScenarioConfig& config, const GridSpec& spec) {
    if (config.potential.kind != PotentialKind::custom_table) return analytic_profile(config.potential, spec);
    const auto& path = config.potential.file;
    std::vector<double> V(static_cast<std::size_t>(spec.num_cells()), 0.0);
    std::vector<bool> seen(V.size(), false);
    for (const auto& row : read_numeric_csv(path, 2, "potential table")) {
        const int m = as_index(row.values[0], path, row.line);
        if (m < 0 || m >= spec.num_cells()) {
            throw InputError(path + ":" + std::to_string(row.line) + ": cell " + std::to_string(m) +
                                     " outside the grid");
        }
        if (seen[m]) throw InputError(path + ":" + std::to_string(row.line) + ": cell listed twice");
        seen[m] = true;
        V[m] = row.values[1];
    }
    for (int m = 0; m < spec.num_cells(); ++m) {
        if (!seen[m]) throw InputError(path + ": no value for cell " + std::to_string(m));
    }
    return PotentialProfile::from_potential(spec, std::move(V));
}

DistributionField build_initial(const ScenarioConfig& config, const GridSpec& spec) {
    const auto& c = config.initial;
    switch (c.kind) {
        case InitialKind::uniform: return DistributionField(spec, c.n0);
        case InitialKind::fermi_dirac: return fermi_dirac_field(spec, c.mu, c.T);
        case InitialKind::gaussian_rk:
            return gaussian_field(spec, spec.position(0) + c.center_m * spec.cell_width(),
                                  c.center_n * spec.momentum_step(), c.sigma_r, c.sigma_k, c.amplitude);
    }
    throw std::logic_error("build_initial: unknown kind");
}

CollisionModel build_collision(const ScenarioConfig& config, const GridSpec& spec) {
    const auto& c = config.collision;
    switch (c.kind) {
        case CollisionKind::none: return CollisionModel::none(spec);
        case CollisionKind::static_screened_coulomb:
            return build_screened_coulomb_rates(spec, c.eps, c.T.value_or(0.0), c.eta, c.q_max);
        case CollisionKind::user_table: {
            std::vector<RateEntry> entries;
            for (const auto& row : read_numeric_csv(c.file, 5, "rate table")) {
                const WaveletIndex to{as_index(row.values[0], c.file, row.line),
                                      as_index(row.values[1], c.file, row.line)};
                const WaveletIndex from{as_index(row.values[2], c.file, row.line),
                                        as_index(row.values[3], c.file, row.line)};
                entries.push_back({to, from, row.values[4]});
            }
            return CollisionModel::from_table(spec, entries, c.T, c.check_detailed_balance);
        }
    }
    throw std::logic_error("build_collision: unknown kind");
}

SimulationResult simulate(const ScenarioConfig& config, const std::filesystem::path& output_dir) {
    const GridSpec spec = config.grid.spec();
    const PotentialProfile profile = build_profile(config, spec);
    const DistributionField n0 = build_initial(config, spec);
    const CollisionModel model = build_collision(config, spec);

    SimulationResult result;
    result.dt_bound = distribution_dt_bound(spec, profile, model);
    result.trajectory = run_distribution(n0, profile, model, config.integrator);
    result.dt_used = config.integrator.t_end / static_cast<double>(config.integrator.num_steps());

    ensure_directory(output_dir);

    CsvWriter snapshots(output_dir / "snapshots.csv");
    snapshots.header("t,m,n,value");
    for (const auto& snap : result.trajectory) {
        for (int m = 0; m < spec.num_cells(); ++m) {
            for (int k = -spec.n_max(); k <= spec.n_max(); ++k) snapshots.row(snap.t, m, k, snap.n(m, k));
        }
    }
    snapshots.flush();

    CsvWriter diagnostics(output_dir / "diagnostics.csv");
    diagnostics.header("t,total_number,min_n,max_n,entropy");
    for (const auto& snap : result.trajectory) {
        const auto& g = snap.diagnostics;
        diagnostics.row(snap.t, g.total_number, g.min_n, g.max_n, g.entropy);
    }
    diagnostics.flush();

    ScenarioConfig resolved = config;
    resolved.output_dir = output_dir.string();
    std::string meta = serialize_config(resolved);
    meta += "\n[run]\n";
    meta += "steps = " + std::to_string(config.integrator.num_steps()) + "\n";
    meta += "dt_used = " + format_double(result.dt_used) + "\n";
    meta += "dt_bound = " + format_double(result.dt_bound) + "\n";
    meta += "dt_bound_transport = " + format_double(transport_dt_bound(spec)) + "\n";
    meta += "dt_bound_drift = " + format_double(drift_dt_bound(spec, profile)) + "\n";
    meta += "dt_bound_collision = " + format_double(model.dt_bound()) + "\n";
    meta += "snapshots = " + std::to_string(result.trajectory.size()) + "\n";
    std::ofstream out(output_dir / "run_meta", std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + (output_dir / "run_meta").string());
    out << meta;
    return result;
}

std::vector<LimitStudyRow> limit_study(const ScenarioConfig& config, int levels,
                                       const std::filesystem::path& output_dir) {
    if (levels < 2 || levels > 5) throw std::invalid_argument("limit-study: levels must lie in [2, 5]");
    std::vector<ConfigIssue> issues;
    if (config.initial.kind != InitialKind::gaussian_rk || config.initial.sigma_k <= 0.0) {
        issues.push_back({0, "initial.kind", "limit-study needs kind = gaussian_rk with sigma_k > 0"});
    }
    if (config.potential.kind == PotentialKind::custom_table) {
        issues.push_back({0, "potential.kind", "limit-study cannot re-sample a tabulated potential"});
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));

    const GridSpec base = config.grid.spec();
    const auto& init = config.initial;
    const double xc = base.position(0) + init.center_m * base.cell_width();
    const double kc = init.center_n * base.momentum_step();

    std::vector<LimitStudyRow> rows;
    for (int level = 0; level < levels; ++level) {
        const int factor = 1 << level;
        const GridSpec spec(base.cell_width() / factor, base.num_cells() * factor, base.n_max() * factor);
        const DistributionField n = gaussian_field(spec, xc, kc, init.sigma_r, init.sigma_k, init.amplitude);
        const PotentialProfile profile = analytic_profile(config.potential, spec);
        const CollisionModel none = CollisionModel::none(spec);
        const double defect = max_abs_difference(dbe_rhs(n, profile, none), classical_rhs(n, profile, none));
        rows.push_back({level, spec.cell_width(), spec.n_max(), defect});
    }

    ensure_directory(output_dir);
    CsvWriter csv(output_dir / "limit_study.csv");
    csv.header("level,d,n_max,defect");
    for (const auto& r : rows) csv.row(r.level, r.d, r.n_max, r.defect);
    csv.flush();
    return rows;
}

bool BasisReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const BasisCheck& c) { return c.passed; });
}

BasisReport verify_basis(const GridSpec& spec, const VerifyOptions& options) {
    if (spec.num_states() > 512) {
        throw std::invalid_argument("verify-basis: grid has " + std::to_string(spec.num_states()) +
                                    " states, limit is 512");
    }
    const int M = spec.num_cells();
    const int nmax = spec.n_max();
    const double d = spec.cell_width();
    const double L = spec.length();
    BasisReport report;
    auto record = [&](std::string name, double defect) {
        report.checks.push_back({std::move(name), defect, defect <= options.tolerance});
    };

    double worst = 0.0;
    for (int m = 0; m < M; ++m) {
        for (int a = -nmax; a <= nmax; ++a) {
            for (int m1 = 0; m1 < M; ++m1) {
                for (int b = -nmax; b <= nmax; ++b) {
                    const WaveletIndex i{m, a};
                    const WaveletIndex j{m1, b};
                    const Complex exact = (i == j) ? 1.0 : 0.0;
                    const Complex closed = inner_product(spec, i, j);
                    const Complex quad = inner_product_quadrature(spec, i, j, 64);
                    worst = std::max({worst, std::abs(closed - exact), std::abs(quad - closed)});
                }
            }
        }
    }
    record("orthonormality (closed form vs quadrature)", worst);

    // Off-grid and on-grid momenta across the band.
    std::vector<double> ks;
    for (int j = -nmax; j <= nmax; ++j) {
        ks.push_back(spec.momentum(j));
        ks.push_back(spec.momentum(j) + 0.37 * spec.momentum_step());
    }
    worst = 0.0;
    for (double k : ks) {
        LatticeField coeffs = expand_plane_wave(spec, k);
        coeffs *= options.prefactor_scale;
        for (int m = 0; m < M; ++m) {
            for (int n = -nmax; n <= nmax; ++n) {
                worst = std::max(worst, std::abs(coeffs(m, n) - plane_wave_overlap_quadrature(spec, {m, n}, k)));
            }
        }
    }
    record("plane-wave coefficients (closed form vs quadrature)", worst);

    worst = 0.0;
    const int samples_per_cell = 7;
    for (int j = -nmax; j <= nmax; ++j) {
        const double k = spec.momentum(j);
        LatticeField coeffs = expand_plane_wave(spec, k);
        coeffs *= options.prefactor_scale;
        for (int m = 0; m < M; ++m) {
            for (int s = 0; s < samples_per_cell; ++s) {
                const double x = spec.position(m) - 0.5 * d + d * s / samples_per_cell;
                const Complex expected = std::polar(1.0 / std::sqrt(L), k * x);
                worst = std::max(worst, std::abs(reconstruct(coeffs, x) - expected));
            }
        }
    }
    record("on-grid plane-wave reconstruction", worst);

    LatticeField band(spec);
    for (int m = 0; m < M; ++m) {
        for (int n = -nmax; n <= nmax; ++n) {
            band(m, n) = Complex(std::cos(1.3 * m + 0.7 * n), std::sin(0.4 * m * n + 0.2)) / (1.0 + n * n);
        }
    }
    const LatticeField projected = project(spec, [&](double x) { return reconstruct(band, x); });
    record("closure of a band-limited field", max_abs_difference(projected, band));

    worst = 0.0;
    const auto& rule = gauss_legendre(64);
    const double dq = kTwoPi / L;
    for (int m : {0, M - 1}) {
        const double lo = spec.position(m) - 0.5 * d;
        for (int a = -nmax; a <= nmax; ++a) {
            for (int b = std::max(-nmax, a - 4); b <= std::min(nmax, a + 4); ++b) {
                for (int j = -2 * M; j <= 2 * M; ++j) {
                    const double q = j * dq;
                    const WaveletIndex ia{m, a};
                    const WaveletIndex ib{m, b};
                    const int panels = 1 + static_cast<int>(std::ceil(
                                               std::abs(spec.momentum(a) + q - spec.momentum(b)) * d / kTwoPi));
                    const Complex integral = rule.integrate(
                        [&](double x) {
                            return wavelet_eval(spec, ia, x) * std::polar(1.0, q * x) * std::conj(wavelet_eval(spec, ib, x));
                        },
                        lo, lo + d, panels);
                    const Complex closed = phase_matrix_element(spec, q, ia, ib);
                    const double defect =
                        a == b ? std::abs(closed - integral) : std::abs(std::abs(closed) - std::abs(integral));
                    worst = std::max(worst, defect);
                }
            }
        }
    }
    record("phase matrix element (closed form vs quadrature)", worst);
    return report;
}

}  // namespace dke
