#include "dke/collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dke/basis.hpp"

namespace dke {

namespace {

using Triplet = Eigen::Triplet<double>;

double state_energy(const GridSpec& spec, std::size_t k) { return kinetic_energy(spec.momentum(spec.unflat(k))); }

std::string describe(WaveletIndex idx) {
    return "(" + std::to_string(idx.m) + ", " + std::to_string(idx.n) + ")";
}

}  // namespace

CollisionModel CollisionModel::none(const GridSpec& spec) { return CollisionModel(spec); }

CollisionModel CollisionModel::from_table(const GridSpec& spec, const std::vector<RateEntry>& entries,
                                          std::optional<double> temperature, bool check_detailed_balance) {
    if (temperature && !(*temperature > 0.0)) {
        throw std::invalid_argument("collision table: temperature must be positive");
    }
    if (check_detailed_balance && !temperature) {
        throw std::invalid_argument("collision table: detailed-balance check needs a temperature");
    }
    std::vector<Triplet> triplets;
    triplets.reserve(entries.size());
    for (const auto& e : entries) {
        if (!spec.contains(e.to) || !spec.contains(e.from)) {
            throw std::invalid_argument("collision table: state " + describe(spec.contains(e.to) ? e.from : e.to) +
                                        " is outside the grid");
        }
        if (!std::isfinite(e.rate) || e.rate < 0.0) {
            throw std::invalid_argument("collision table: rate " + describe(e.from) + " -> " + describe(e.to) +
                                        " must be finite and nonnegative");
        }
        if (e.to == e.from || e.rate == 0.0) continue;
        triplets.emplace_back(static_cast<Eigen::Index>(spec.flat(e.to)), static_cast<Eigen::Index>(spec.flat(e.from)),
                              e.rate);
    }
    CollisionModel model(spec);
    model.kind_ = CollisionKind::user_table;
    model.temperature_ = temperature;
    model.rates_.setFromTriplets(triplets.begin(), triplets.end());
    model.rates_.makeCompressed();
    if (check_detailed_balance) {
        const double defect = model.detailed_balance_defect();
        if (defect > 1e-10) {
            throw std::invalid_argument("collision table: detailed balance violated (relative defect " +
                                        std::to_string(defect) + ")");
        }
    }
    return model;
}

double CollisionModel::detailed_balance_defect() const {
    if (!temperature_) throw std::logic_error("detailed_balance_defect: model has no temperature");
    const double T = *temperature_;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < rates_.outerSize(); ++k) {
        for (RateMatrix::InnerIterator it(rates_, k); it; ++it) {
            const auto to = static_cast<std::size_t>(it.row());
            const auto from = static_cast<std::size_t>(it.col());
            const double reverse = rate(from, to);
            if (reverse == 0.0) {
                worst = std::max(worst, 1.0);
                continue;
            }
            const double expected = reverse * std::exp((state_energy(spec_, from) - state_energy(spec_, to)) / T);
            worst = std::max(worst, std::abs(it.value() / expected - 1.0));
        }
    }
    return worst;
}

double CollisionModel::dt_bound() const {
    if (empty()) return std::numeric_limits<double>::infinity();
    std::vector<double> total(spec_.num_states(), 0.0);
    for (Eigen::Index k = 0; k < rates_.outerSize(); ++k) {
        for (RateMatrix::InnerIterator it(rates_, k); it; ++it) {
            total[static_cast<std::size_t>(it.row())] += it.value();
            total[static_cast<std::size_t>(it.col())] += it.value();
        }
    }
    return 0.5 / *std::max_element(total.begin(), total.end());
}

double CollisionModel::min_positive_rate() const {
    double smallest = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < rates_.outerSize(); ++k) {
        for (RateMatrix::InnerIterator it(rates_, k); it; ++it) {
            if (it.value() > 0.0) smallest = std::min(smallest, it.value());
        }
    }
    return smallest;
}

double bose_occupation(double omega, double temperature) { return 1.0 / std::expm1(omega / temperature); }

double lorentzian(double omega, double eta) { return (eta / std::numbers::pi) / (omega * omega + eta * eta); }

CollisionModel build_screened_coulomb_rates(const GridSpec& spec, double epsilon_static, double temperature,
                                            double eta, int q_max) {
    if (!(epsilon_static > 0.0)) throw std::invalid_argument("screened Coulomb: eps must be positive");
    if (!(temperature > 0.0)) throw std::invalid_argument("screened Coulomb: T must be positive");
    if (!(eta > 0.0)) throw std::invalid_argument("screened Coulomb: eta must be positive");
    if (q_max < 0) throw std::invalid_argument("screened Coulomb: q_max must be nonnegative");
    if (q_max == 0) q_max = 4 * spec.n_max();

    const double L = spec.length();
    const double dq = kTwoPi / L;
    const int cols = spec.num_momenta();

    // The q-sum depends only on the momentum pair and is shared by all cells.
    std::vector<double> weight(static_cast<std::size_t>(cols * cols), 0.0);
    for (int a = 0; a < cols; ++a) {
        for (int b = 0; b < cols; ++b) {
            if (a == b) continue;
            const WaveletIndex to{0, a - spec.n_max()};
            const WaveletIndex from{0, b - spec.n_max()};
            double coupling = 0.0;
            for (int j = -q_max; j <= q_max; ++j) {
                if (j == 0) continue;
                const double q = j * dq;
                const double vq = 2.0 * kTwoPi / (L * q * q);
                coupling += (vq / epsilon_static) * std::norm(phase_matrix_element(spec, q, to, from));
            }
            const double delta = kinetic_energy(spec.momentum(from)) - kinetic_energy(spec.momentum(to));
            const double gap = std::max(std::abs(delta), eta);
            double occupation = bose_occupation(gap, temperature) + 1.0;
            if (delta < 0.0) occupation *= std::exp(delta / temperature);
            weight[static_cast<std::size_t>(a * cols + b)] = 2.0 * coupling * occupation * lorentzian(delta, eta);
        }
    }

    std::vector<Triplet> triplets;
    for (int m = 0; m < spec.num_cells(); ++m) {
        for (int a = 0; a < cols; ++a) {
            for (int b = 0; b < cols; ++b) {
                const double w = weight[static_cast<std::size_t>(a * cols + b)];
                if (w <= 0.0) continue;
                triplets.emplace_back(static_cast<Eigen::Index>(m * cols + a), static_cast<Eigen::Index>(m * cols + b),
                                      w);
            }
        }
    }

    CollisionModel model(spec);
    model.kind_ = CollisionKind::static_screened_coulomb;
    model.temperature_ = temperature;
    model.epsilon_static_ = epsilon_static;
    model.eta_ = eta;
    model.q_max_ = q_max;
    model.rates_.setFromTriplets(triplets.begin(), triplets.end());
    model.rates_.makeCompressed();
    return model;
}

RealField collision_rhs(const DistributionField& n, const CollisionModel& model, double tolerance) {
    const GridSpec& spec = n.spec();
    if (!(spec == model.spec())) throw std::invalid_argument("collision_rhs: model and field use different grids");
    auto values = n.values();
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!(values[k] >= -tolerance && values[k] <= 1.0 + tolerance)) {
            const auto idx = spec.unflat(k);
            throw std::invalid_argument("collision_rhs: occupation " + std::to_string(values[k]) + " at " +
                                        describe(idx) + " outside [0, 1]");
        }
    }
    RealField out(spec);
    auto rhs = out.values();
    const auto& W = model.rates();
    for (Eigen::Index k = 0; k < W.outerSize(); ++k) {
        const double blocked = 1.0 - values[static_cast<std::size_t>(k)];
        for (CollisionModel::RateMatrix::InnerIterator it(W, k); it; ++it) {
            const auto k1 = static_cast<std::size_t>(it.col());
            const double flux = it.value() * values[k1] * blocked;
            rhs[static_cast<std::size_t>(k)] += flux;
            rhs[k1] -= flux;
        }
    }
    return out;
}

double fermi_dirac(double energy, double mu, double temperature) {
    const double x = (energy - mu) / temperature;
    if (x > 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

DistributionField fermi_dirac_field(const GridSpec& spec, double mu, double temperature) {
    if (!(temperature > 0.0)) throw std::invalid_argument("fermi_dirac_field: T must be positive");
    DistributionField n(spec);
    for (int m = 0; m < spec.num_cells(); ++m) {
        for (int k = -spec.n_max(); k <= spec.n_max(); ++k) {
            n(m, k) = fermi_dirac(kinetic_energy(spec.momentum(k)), mu, temperature);
        }
    }
    return n;
}

double chemical_potential_for(const GridSpec& spec, double particles, double temperature) {
    if (!(temperature > 0.0)) throw std::invalid_argument("chemical_potential_for: T must be positive");
    if (!(particles > 0.0 && particles < spec.num_momenta())) {
        throw std::invalid_argument("chemical_potential_for: particle number must lie in (0, 2 n_max + 1)");
    }
    auto count = [&](double mu) {
        double total = 0.0;
        for (int k = -spec.n_max(); k <= spec.n_max(); ++k) {
            total += fermi_dirac(kinetic_energy(spec.momentum(k)), mu, temperature);
        }
        return total;
    };
    double lo = -temperature;
    double hi = kinetic_energy(spec.max_momentum()) + temperature;
    while (count(lo) > particles) lo -= 2.0 * (hi - lo);
    while (count(hi) < particles) hi += 2.0 * (hi - lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo) + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (count(mid) < particles ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace dke
