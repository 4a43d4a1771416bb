#include "dke/kinetic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dke/spectral.hpp"

namespace dke {

namespace {

using Triplet = Eigen::Triplet<Complex>;

void check_profile(const GridSpec& spec, const PotentialProfile& profile) {
    if (static_cast<int>(profile.V.size()) != spec.num_cells() ||
        static_cast<int>(profile.E.size()) != spec.num_cells()) {
        throw std::invalid_argument("potential profile length does not match the grid");
    }
}

void add_collision(RealField& out, const DistributionField& n, const CollisionModel& model) {
    if (model.empty()) return;
    out += collision_rhs(n, model);
}

}  // namespace

RealField streaming_term(const DistributionField& n) {
    RealField out = centered_difference_x(n);
    for (int m = 0; m < out.rows(); ++m) {
        auto row = out.row(m);
        for (int j = 0; j < out.cols(); ++j) row[j] *= -n.spec().momentum(j - n.spec().n_max());
    }
    return out;
}

RealField dbe_rhs(const DistributionField& n, const PotentialProfile& profile, const CollisionModel& model) {
    check_profile(n.spec(), profile);
    RealField out = streaming_term(n);
    out += drift_apply(n, std::span<const double>(profile.E));
    add_collision(out, n, model);
    return out;
}

RealField classical_rhs(const DistributionField& n, const PotentialProfile& profile, const CollisionModel& model) {
    const GridSpec& spec = n.spec();
    check_profile(spec, profile);
    RealField out = spectral_derivative_x(n);
    const RealField dk = spectral_derivative_k(n);
    for (int m = 0; m < out.rows(); ++m) {
        for (int j = 0; j < out.cols(); ++j) {
            const double K = spec.momentum(j - spec.n_max());
            out.at(m, j) = -K * out.at(m, j) - profile.E[m] * dk.at(m, j);
        }
    }
    add_collision(out, n, model);
    return out;
}

Eigen::SparseMatrix<Complex> meanfield_generator(const GridSpec& spec, const PotentialProfile& profile,
                                                 KineticCoupling coupling) {
    check_profile(spec, profile);
    const int M = spec.num_cells();
    const int nmax = spec.n_max();
    const double d = spec.cell_width();
    const double inv2d = 0.5 / d;
    const double invd2 = 1.0 / (d * d);
    const Complex I(0.0, 1.0);

    std::vector<Triplet> triplets;
    auto add = [&](int m, int n, int m1, int n1, Complex value) {
        const auto row = spec.flat({m, n});
        const auto col = spec.flat({(m1 + M) % M, n1});
        triplets.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), value);
    };

    for (int m = 0; m < M; ++m) {
        for (int n = -nmax; n <= nmax; ++n) {
            const double K = spec.momentum(n);
            add(m, n, m, n, profile.V[m] + kinetic_energy(K));
            for (int n1 = -nmax; n1 <= nmax; ++n1) {
                const double K1 = spec.momentum(n1);
                const double c = std::cos(0.5 * d * (K1 - K));
                if (n1 != n && profile.E[m] != 0.0) add(m, n, m, n1, I * profile.E[m] * c / (K - K1));
                if (n1 != n && coupling == KineticCoupling::diagonal) continue;
                // -c/2 [Lap - 2i A], A = K D_{-R} - K1 D_R.
                const Complex a_here = inv2d * (K - K1);
                const Complex a_prev = -inv2d * K;
                const Complex a_next = inv2d * K1;
                add(m, n, m, n1, -0.5 * c * (-2.0 * invd2 - 2.0 * I * a_here));
                add(m, n, m - 1, n1, -0.5 * c * (invd2 - 2.0 * I * a_prev));
                add(m, n, m + 1, n1, -0.5 * c * (invd2 - 2.0 * I * a_next));
            }
        }
    }
    const auto N = static_cast<Eigen::Index>(spec.num_states());
    Eigen::SparseMatrix<Complex> G(N, N);
    G.setFromTriplets(triplets.begin(), triplets.end());
    G.makeCompressed();
    return G;
}

PolarizationMatrix meanfield_rhs(const Eigen::SparseMatrix<Complex>& generator, const PolarizationMatrix& P) {
    if (P.rows() != generator.rows() || P.cols() != generator.cols()) {
        throw std::invalid_argument("meanfield_rhs: P has size " + std::to_string(P.rows()) + "x" +
                                    std::to_string(P.cols()) + ", expected " + std::to_string(generator.rows()));
    }
    const double defect = hermiticity_defect(P);
    if (defect > 1e-10) {
        throw std::invalid_argument("meanfield_rhs: P is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    const PolarizationMatrix X = Complex(0.0, 1.0) * (generator * P);
    return X + X.adjoint();
}

PolarizationMatrix meanfield_rhs(const GridSpec& spec, const PolarizationMatrix& P, const PotentialProfile& profile,
                                 KineticCoupling coupling) {
    return meanfield_rhs(meanfield_generator(spec, profile, coupling), P);
}

double hermiticity_defect(const PolarizationMatrix& P) {
    if (P.rows() != P.cols()) return std::numeric_limits<double>::infinity();
    if (P.size() == 0) return 0.0;
    return (P - P.adjoint()).cwiseAbs().maxCoeff();
}

DistributionField occupation_of(const GridSpec& spec, const PolarizationMatrix& P) {
    if (P.rows() != static_cast<Eigen::Index>(spec.num_states()) || P.cols() != P.rows()) {
        throw std::invalid_argument("occupation_of: matrix size does not match the grid");
    }
    DistributionField n(spec);
    auto v = n.values();
    for (std::size_t k = 0; k < v.size(); ++k) {
        v[k] = P(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real();
    }
    return n;
}

PolarizationMatrix diagonal_polarization(const DistributionField& n) {
    const auto N = static_cast<Eigen::Index>(n.size());
    PolarizationMatrix P = PolarizationMatrix::Zero(N, N);
    auto v = n.values();
    for (Eigen::Index k = 0; k < N; ++k) P(k, k) = v[static_cast<std::size_t>(k)];
    return P;
}

}  // namespace dke
