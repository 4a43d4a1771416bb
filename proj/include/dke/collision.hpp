#pragma once

#include <Eigen/SparseCore>

#include <optional>
#include <vector>

#include "dke/lattice_field.hpp"

namespace dke {

enum class CollisionKind { none, user_table, static_screened_coulomb };

/// One entry W(to, from) of a transition-rate table.
struct RateEntry {
    WaveletIndex to;
    WaveletIndex from;
    double rate = 0.0;
};

/// Transition rates W(k, k') >= 0 for k' -> k over flat lattice indices.
/// Immutable after construction.
class CollisionModel {
public:
    using RateMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

    /// No scattering.
    static CollisionModel none(const GridSpec& spec);

    /// Rates from a table. Entries with the same (to, from) accumulate;
    /// self-transitions are dropped. When check_detailed_balance is set the
    /// temperature is required and every pair must satisfy
    /// W(k,k')/W(k',k) = exp((ε_k' - ε_k)/T) to 1e-10 relative.
    static CollisionModel from_table(const GridSpec& spec, const std::vector<RateEntry>& entries,
                                     std::optional<double> temperature = std::nullopt,
                                     bool check_detailed_balance = false);

    const GridSpec& spec() const { return spec_; }
    CollisionKind kind() const { return kind_; }
    const RateMatrix& rates() const { return rates_; }
    bool empty() const { return rates_.nonZeros() == 0; }
    std::optional<double> temperature() const { return temperature_; }
    double epsilon_static() const { return epsilon_static_; }
    double eta() const { return eta_; }
    int q_max() const { return q_max_; }

    double rate(std::size_t to, std::size_t from) const { return rates_.coeff(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from)); }

    /// Largest |W(k,k')/(W(k',k) e^{(ε_k'-ε_k)/T}) - 1| over pairs; a one-way
    /// nonzero rate counts as defect 1. Requires a temperature.
    double detailed_balance_defect() const;

    /// 0.5 / max_k Σ_{k1} (W(k,k1) + W(k1,k)); +inf without rates.
    double dt_bound() const;

    /// Smallest positive rate, +inf without rates.
    double min_positive_rate() const;

private:
    friend CollisionModel build_screened_coulomb_rates(const GridSpec&, double, double, double, int);

    explicit CollisionModel(const GridSpec& spec) : spec_(spec), rates_(static_cast<Eigen::Index>(spec.num_states()), static_cast<Eigen::Index>(spec.num_states())) {}

    GridSpec spec_;
    CollisionKind kind_ = CollisionKind::none;
    RateMatrix rates_;
    std::optional<double> temperature_;
    double epsilon_static_ = 0.0;
    double eta_ = 0.0;
    int q_max_ = 0;
};

/// Bose occupation 1/(e^{ω/T} - 1).
double bose_occupation(double omega, double temperature);

/// Normalized Lorentzian (η/π)/(ω² + η²).
double lorentzian(double omega, double eta);

/// Golden-rule rates with a static dielectric constant and a Lorentzian of
/// width eta in place of the energy delta:
///
///   W(k,k') = 2 Σ_q (V_q/ε_s) |<k|e^{iqr}|k'>|² B(ε_k' - ε_k) L_η(ε_k' - ε_k),
///   V_q = 4π/(L q²),  q = 2πj/L,  1 <= |j| <= q_max (0 selects 4 n_max).
///
/// B is [n(|ω|)+1] for downhill transfers and n(|ω|) uphill, with |ω| floored
/// at eta inside the Bose factor; the uphill weight is formed as the downhill
/// one times e^{-|ω|/T}, so detailed balance holds exactly. Only same-cell
/// pairs couple. Throws std::invalid_argument for nonpositive eps, T or eta.
CollisionModel build_screened_coulomb_rates(const GridSpec& spec, double epsilon_static, double temperature,
                                            double eta, int q_max = 0);

/// Pauli master equation:
/// Σ_{k1} [W(k,k1) n_{k1}(1 - n_k) - W(k1,k)(1 - n_{k1}) n_k].
/// Throws std::invalid_argument if n leaves [-tolerance, 1 + tolerance].
RealField collision_rhs(const DistributionField& n, const CollisionModel& model, double tolerance = 1e-12);

/// 1/(e^{(ε - μ)/T} + 1).
double fermi_dirac(double energy, double mu, double temperature);

/// Fermi-Dirac occupation of K²/2, homogeneous in R.
DistributionField fermi_dirac_field(const GridSpec& spec, double mu, double temperature);

/// Chemical potential whose Fermi-Dirac occupation over the momentum column
/// set sums to `particles` (0 < particles < 2 n_max + 1), by bisection.
double chemical_potential_for(const GridSpec& spec, double particles, double temperature);

}  // namespace dke
