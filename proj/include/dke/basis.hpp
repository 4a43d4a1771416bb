#pragma once

#include <functional>
#include <span>

#include "dke/grid.hpp"
#include "dke/lattice_field.hpp"

namespace dke {

using ScalarFunction = std::function<Complex(double)>;

/// sin(u)/u with the removable point at u = 0.
double sinc(double u);

/// sin(πt)/(πt). Returns exactly 0 when t is a nonzero integer up to rounding
/// (|t - round(t)| <= 8 eps max(1, |t|)), exactly 1 when t rounds to 0.
double sinc_pi(double t);

/// e^{iKx}/√d on [center - d/2, center + d/2), zero elsewhere. The left edge
/// belongs to the support and the right edge does not, so neighbouring cells
/// tile the line without overlap.
Complex plane_wavelet(double center, double momentum, double width, double x);

Complex wavelet_eval(const GridSpec& spec, WaveletIndex idx, double x);

/// <a|b> in closed form: δ_{mm'} sinc(d(K - K')/2). On the lattice this is
/// exactly δ_{mm'} δ_{nn'}.
Complex inner_product(const GridSpec& spec, WaveletIndex a, WaveletIndex b);

/// <a|b> by composite Gauss-Legendre over the shared cell, quad_points nodes
/// per panel and one panel per oscillation of the integrand. Disjoint cells
/// return exactly 0. Throws std::invalid_argument for quad_points < 64.
Complex inner_product_quadrature(const GridSpec& spec, WaveletIndex a, WaveletIndex b, int quad_points);

/// Coefficients of the normalized plane wave e^{ikx}/√L:
/// a[m][n] = √(d/L) e^{i(k - K_n) X_m} sinc(d(k - K_n)/2).
LatticeField expand_plane_wave(const GridSpec& spec, double k);

/// <X, K | k> for one basis state, integrated numerically (independent route
/// to the closed form used by expand_plane_wave).
Complex plane_wave_overlap_quadrature(const GridSpec& spec, WaveletIndex idx, double k, int quad_points = 64);

/// Projects fn onto every basis state: a[m][n] = ∫ Ψ*_{mn}(x) fn(x) dx.
LatticeField project(const GridSpec& spec, const ScalarFunction& fn, int quad_points = 64);

/// Σ_{m,n} a[m][n] Ψ_{mn}(x). Only the cell containing x contributes.
Complex reconstruct(const LatticeField& coeffs, double x);

/// Matrix element of e^{iqx} between states a = (m, K) and b = (m', K1):
/// e^{iqX} δ_{mm'} sinc(d(K + q - K1)/2).
Complex phase_matrix_element(const GridSpec& spec, double q, WaveletIndex a, WaveletIndex b);

/// max over sample_xs of |reconstruct(project(fn))(x) - fn(x)|.
double closure_defect(const GridSpec& spec, const ScalarFunction& fn, std::span<const double> sample_xs,
                      int quad_points = 64);

}  // namespace dke
