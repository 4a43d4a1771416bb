#include "dke/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>


namespace dke {

namespace {

constexpr double kRunTolerance = 1e-9;
constexpr double kHermiticityLimit = 1e-8;

std::optional<std::size_t> first_out_of_range(std::span<const double> values) {
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!(values[k] >= -kRunTolerance && values[k] <= 1.0 + kRunTolerance)) return k;
    }
    return std::nullopt;
}

bool is_snapshot_step(long step, long steps, int every) { return step == steps || step % every == 0; }

}  // namespace

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("integrator: dt must be positive");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("integrator: t_end must be positive");
    if (snapshot_every < 1) throw std::invalid_argument("integrator: snapshot_every must be >= 1");
}

long IntegratorConfig::num_steps() const {
    const double ratio = t_end / dt;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) return std::max(1L, static_cast<long>(nearest));
    return static_cast<long>(std::ceil(ratio));
}

StepBoundError::StepBoundError(double dt, double bound)
    : std::invalid_argument("dt = " + format_double(dt) + " exceeds the stability bound " + format_double(bound)),
      bound_(bound) {}

PositivityError::PositivityError(long step, double t, WaveletIndex where, double value)
    : std::runtime_error("occupation " + format_double(value) + " at (m=" + std::to_string(where.m) +
                         ", n=" + std::to_string(where.n) + ") left [0, 1] at step " + std::to_string(step) +
                         " (t = " + format_double(t) + ")"),
      step_(step) {}

HermiticityError::HermiticityError(long step, double defect)
    : std::runtime_error("Hermiticity defect " + format_double(defect) + " exceeds 1e-8 at step " +
                         std::to_string(step)),
      step_(step) {}

double transport_dt_bound(const GridSpec& spec) { return 0.5 * spec.cell_width() / spec.max_momentum(); }

double drift_dt_bound(const GridSpec& spec, const PotentialProfile& profile) {
    const double e = profile.max_abs_field();
    if (e == 0.0) return std::numeric_limits<double>::infinity();
    return 0.5 * spec.momentum_step() / (std::numbers::pi * e);
}

double distribution_dt_bound(const GridSpec& spec, const PotentialProfile& profile, const CollisionModel& model) {
    return std::min({transport_dt_bound(spec), drift_dt_bound(spec, profile), model.dt_bound()});
}

double polarization_dt_bound(const Eigen::SparseMatrix<Complex>& generator) {
    std::vector<double> radius(static_cast<std::size_t>(generator.rows()), 0.0);
    for (Eigen::Index k = 0; k < generator.outerSize(); ++k) {
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(generator, k); it; ++it) {
            radius[static_cast<std::size_t>(it.row())] += std::abs(it.value());
        }
    }
    const double rho = radius.empty() ? 0.0 : *std::max_element(radius.begin(), radius.end());
    if (rho == 0.0) return std::numeric_limits<double>::infinity();
    return 0.5 / rho;
}

double occupation_entropy(std::span<const double> n) {
    auto term = [](double p) { return p > 0.0 ? p * std::log(p) : 0.0; };
    double s = 0.0;
    for (double v : n) {
        const double p = std::clamp(v, 0.0, 1.0);
        s -= term(p) + term(1.0 - p);
    }
    return s;
}

Diagnostics diagnose(const DistributionField& n) {
    Diagnostics out;
    auto v = n.values();
    for (double x : v) out.total_number += x;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    out.min_n = *lo;
    out.max_n = *hi;
    out.entropy = occupation_entropy(v);
    return out;
}

Diagnostics diagnose(const GridSpec& spec, const PolarizationMatrix& P) {
    Diagnostics out = diagnose(occupation_of(spec, P));
    out.hermiticity_defect = hermiticity_defect(P);
    return out;
}

std::vector<DistributionSnapshot> run_distribution(const DistributionField& n0, const PotentialProfile& profile,
                                                   const CollisionModel& model, const IntegratorConfig& config) {
    config.validate();
    const GridSpec& spec = n0.spec();
    if (!(spec == model.spec())) throw std::invalid_argument("run_distribution: model and field use different grids");
    if (auto bad = first_out_of_range(n0.values())) {
        throw std::invalid_argument("run_distribution: initial occupation outside [0, 1] at flat index " +
                                    std::to_string(*bad));
    }
    const bool record = config.positivity == PositivityPolicy::record;
    if (record && !model.empty()) {
        throw std::invalid_argument("run_distribution: positivity = record needs a model without collisions");
    }
    const double bound = distribution_dt_bound(spec, profile, model);
    if (config.dt > bound) throw StepBoundError(config.dt, bound);

    const long steps = config.num_steps();
    const double dt = config.t_end / static_cast<double>(steps);
    long current = 0;
    auto check = [&](const DistributionField& n, double t) {
        if (record) return;
        if (auto bad = first_out_of_range(n.values())) {
            throw PositivityError(current, t, spec.unflat(*bad), n.values()[*bad]);
        }
    };
    double t_stage = 0.0;
    auto rhs = [&](const DistributionField& n) {
        check(n, t_stage);
        RealField out = streaming_term(n);
        out += drift_apply(n, std::span<const double>(profile.E));
        if (!model.empty()) out += collision_rhs(n, model, kRunTolerance);
        return out;
    };

    std::vector<DistributionSnapshot> trajectory;
    trajectory.push_back({0.0, n0, diagnose(n0)});
    DistributionField n = n0;
    for (current = 1; current <= steps; ++current) {
        t_stage = (current - 1) * dt;
        n = advance(n, rhs, config.scheme, dt);
        const double t = current == steps ? config.t_end : current * dt;
        check(n, t);
        if (is_snapshot_step(current, steps, config.snapshot_every)) trajectory.push_back({t, n, diagnose(n)});
    }
    return trajectory;
}

std::vector<PolarizationSnapshot> run_polarization(const GridSpec& spec, const PolarizationMatrix& P0,
                                                   const PotentialProfile& profile, const IntegratorConfig& config,
                                                   KineticCoupling coupling) {
    config.validate();
    const auto N = static_cast<Eigen::Index>(spec.num_states());
    if (P0.rows() != N || P0.cols() != N) throw std::invalid_argument("run_polarization: P0 size does not match the grid");
    if (hermiticity_defect(P0) > 1e-10) throw std::invalid_argument("run_polarization: P0 is not Hermitian");
    for (Eigen::Index k = 0; k < N; ++k) {
        const double v = P0(k, k).real();
        if (!(v >= -1e-12 && v <= 1.0 + 1e-12)) {
            throw std::invalid_argument("run_polarization: diagonal of P0 outside [0, 1] at flat index " +
                                        std::to_string(k));
        }
    }
    const auto generator = meanfield_generator(spec, profile, coupling);
    const double bound = polarization_dt_bound(generator);
    if (config.dt > bound) throw StepBoundError(config.dt, bound);

    const long steps = config.num_steps();
    const double dt = config.t_end / static_cast<double>(steps);
    auto rhs = [&](const PolarizationMatrix& P) -> PolarizationMatrix { return meanfield_rhs(generator, P); };

    std::vector<PolarizationSnapshot> trajectory;
    trajectory.push_back({0.0, P0, diagnose(spec, P0)});
    PolarizationMatrix P = P0;
    for (long current = 1; current <= steps; ++current) {
        P = advance(P, rhs, config.scheme, dt);
        const double defect = hermiticity_defect(P);
        if (defect > kHermiticityLimit) throw HermiticityError(current, defect);
        if (is_snapshot_step(current, steps, config.snapshot_every)) {
            const double t = current == steps ? config.t_end : current * dt;
            trajectory.push_back({t, P, diagnose(spec, P)});
        }
    }
    return trajectory;
}

}  // namespace dke
