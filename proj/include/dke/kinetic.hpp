#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "dke/collision.hpp"
#include "dke/difference_ops.hpp"
#include "dke/potential.hpp"

namespace dke {

/// Streaming term of the difference Boltzmann equation for the diagonal
/// K1 = K: -K (D_{-R} - D_R) n = -K (n(m+1) - n(m-1)) / 2d.
RealField streaming_term(const DistributionField& n);

/// Right-hand side of the difference Boltzmann equation:
/// streaming_term(n) + drift_apply(n, E) + collision_rhs(n, model).
/// The drift uses DriftStencil::for_grid; the collision term is skipped for
/// a model without rates.
RealField dbe_rhs(const DistributionField& n, const PotentialProfile& profile, const CollisionModel& model);

/// Differential Boltzmann equation with spectral gradients on the periodic
/// lattice: -K ∂n/∂R - E ∂n/∂K + collision_rhs(n, model).
RealField classical_rhs(const DistributionField& n, const PotentialProfile& profile, const CollisionModel& model);

/// Complex Hermitian N x N matrix P_{kk'} over flat lattice indices.
using PolarizationMatrix = Eigen::MatrixXcd;

/// How the kinetic-energy part couples momenta.
enum class KineticCoupling {
    /// Only K1 = K: per momentum, K²/2 - D²_R/2 + i K (centred difference).
    diagonal,
    /// All K1 in the same or neighbouring cells, weighted by cos(d(K1 - K)/2).
    full,
};

/// Hermitian generator G of the mean-field motion, dP/dt = i (G P - P G).
///
/// Matrix elements use the cell-centred phase convention (each wavelet's
/// phase referenced to its own cell centre); relative to the global phase
/// e^{iKx} of wavelet_eval this is the diagonal unitary diag((-1)^n).
///
/// V part (dipole approximation, same cell only):
///   G[(R,K),(R,K1)] = V(R) δ_{KK1} + i E(R) cos(d(K-K1)/2)/(K-K1)   (K1 != K)
/// T part:
///   G[(R,K),(R1,K1)] = K²/2 δ δ - c(K,K1)/2 [Lap_{RR1} - 2i A_{(R,K),(R1,K1)}]
///   A = K D_{-R} - K1 D_R,  c = cos(d(K1-K)/2)
/// restricted to K1 = K for KineticCoupling::diagonal.
Eigen::SparseMatrix<Complex> meanfield_generator(const GridSpec& spec, const PotentialProfile& profile,
                                                 KineticCoupling coupling = KineticCoupling::diagonal);

/// dP/dt = i (G P - P G) for Hermitian P, evaluated as X + X† with X = i G P
/// so that the result is Hermitian to the last bit. Throws
/// std::invalid_argument if P is not Hermitian to 1e-10 or has the wrong size.
PolarizationMatrix meanfield_rhs(const GridSpec& spec, const PolarizationMatrix& P, const PotentialProfile& profile,
                                 KineticCoupling coupling = KineticCoupling::diagonal);

/// Same, with a prebuilt generator.
PolarizationMatrix meanfield_rhs(const Eigen::SparseMatrix<Complex>& generator, const PolarizationMatrix& P);

/// max |P - P†|.
double hermiticity_defect(const PolarizationMatrix& P);

/// Diagonal of P as a distribution field.
DistributionField occupation_of(const GridSpec& spec, const PolarizationMatrix& P);

/// Diagonal matrix carrying n on its diagonal.
PolarizationMatrix diagonal_polarization(const DistributionField& n);

}  // namespace dke
