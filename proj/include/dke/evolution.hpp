#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dke/kinetic.hpp"

namespace dke {

enum class Scheme { euler, rk4 };

/// "%.17g": round-trips every double.
std::string format_double(double x);

/// What run_distribution does when an occupation leaves [-1e-9, 1 + 1e-9].
/// `record` keeps integrating (the excursion shows in min_n / max_n) and is
/// only accepted without a collision term, whose Pauli factors need [0, 1].
enum class PositivityPolicy { abort, record };

struct IntegratorConfig {
    double dt = 0.0;
    double t_end = 0.0;
    Scheme scheme = Scheme::rk4;
    int snapshot_every = 1;
    PositivityPolicy positivity = PositivityPolicy::abort;

    /// Throws std::invalid_argument unless dt > 0, t_end > 0 and snapshot_every >= 1.
    void validate() const;

    /// Number of uniform steps covering [0, t_end] with a step no larger than dt.
    long num_steps() const;

    friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

struct Diagnostics {
    double total_number = 0.0;
    double hermiticity_defect = 0.0;
    double min_n = 0.0;
    double max_n = 0.0;
    double entropy = 0.0;
};

/// Thrown when dt exceeds the stability/positivity bound; carries the bound.
class StepBoundError : public std::invalid_argument {
public:
    StepBoundError(double dt, double bound);
    double bound() const { return bound_; }

private:
    double bound_;
};

/// Thrown by run_distribution when an occupation leaves [-1e-9, 1 + 1e-9].
class PositivityError : public std::runtime_error {
public:
    PositivityError(long step, double t, WaveletIndex where, double value);
    long step() const { return step_; }

private:
    long step_;
};

/// Thrown by run_polarization when the Hermiticity defect exceeds 1e-8.
class HermiticityError : public std::runtime_error {
public:
    HermiticityError(long step, double defect);
    long step() const { return step_; }

private:
    long step_;
};

/// One explicit step of size dt. State needs `State + double * State`.
template <class State, class Rhs>
State advance(const State& y, Rhs&& rhs, Scheme scheme, double dt) {
    if (scheme == Scheme::euler) {
        State next = y + dt * rhs(y);
        return next;
    }
    const State k1 = rhs(y);
    const State y2 = y + (0.5 * dt) * k1;
    const State k2 = rhs(y2);
    const State y3 = y + (0.5 * dt) * k2;
    const State k3 = rhs(y3);
    const State y4 = y + dt * k3;
    const State k4 = rhs(y4);
    State next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return next;
}

/// One step with config.dt; throws StepBoundError if config.dt > dt_bound.
template <class State, class Rhs>
State step(const State& y, Rhs&& rhs, const IntegratorConfig& config,
           double dt_bound = std::numeric_limits<double>::infinity()) {
    if (config.dt > dt_bound) throw StepBoundError(config.dt, dt_bound);
    return advance(y, std::forward<Rhs>(rhs), config.scheme, config.dt);
}

/// dt <= 0.5 d / K_max.
double transport_dt_bound(const GridSpec& spec);

/// dt <= 0.5 ΔK / (π max|E|); +inf without a field.
double drift_dt_bound(const GridSpec& spec, const PotentialProfile& profile);

/// Smallest of the transport, drift and collision bounds.
double distribution_dt_bound(const GridSpec& spec, const PotentialProfile& profile, const CollisionModel& model);

/// dt <= 0.5 / ρ with ρ the Gershgorin bound on the generator's spectrum.
double polarization_dt_bound(const Eigen::SparseMatrix<Complex>& generator);

/// -Σ [n ln n + (1-n) ln(1-n)] with 0 ln 0 = 0; n is clamped to [0, 1].
double occupation_entropy(std::span<const double> n);

Diagnostics diagnose(const DistributionField& n);
Diagnostics diagnose(const GridSpec& spec, const PolarizationMatrix& P);

struct DistributionSnapshot {
    double t = 0.0;
    DistributionField n;
    Diagnostics diagnostics;
};

struct PolarizationSnapshot {
    double t = 0.0;
    PolarizationMatrix P;
    Diagnostics diagnostics;
};

/// Integrates dn/dt = dbe_rhs(n) on [0, t_end]. Snapshots at t = 0, every
/// snapshot_every steps and at t_end. Throws StepBoundError if config.dt
/// exceeds distribution_dt_bound, PositivityError on an occupation outside
/// [-1e-9, 1 + 1e-9] unless config.positivity is `record`.
std::vector<DistributionSnapshot> run_distribution(const DistributionField& n0, const PotentialProfile& profile,
                                                   const CollisionModel& model, const IntegratorConfig& config);

/// Integrates dP/dt = meanfield_rhs(P) (no collision term). Throws
/// std::invalid_argument for an invalid P0, StepBoundError if config.dt
/// exceeds polarization_dt_bound, HermiticityError if the defect exceeds 1e-8.
std::vector<PolarizationSnapshot> run_polarization(const GridSpec& spec, const PolarizationMatrix& P0,
                                                   const PotentialProfile& profile, const IntegratorConfig& config,
                                                   KineticCoupling coupling = KineticCoupling::diagonal);

}  // namespace dke
