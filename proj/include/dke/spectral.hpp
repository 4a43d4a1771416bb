#pragma once

#include <span>
#include <vector>

#include "dke/lattice_field.hpp"

namespace dke {

/// Spectral derivative of periodic samples: forward DFT, multiply mode j by
/// i 2πj/period with j in the symmetric range, inverse DFT. For even lengths
/// the Nyquist mode is dropped. Throws std::invalid_argument for length < 4.
std::vector<Complex> dft_derivative_oracle(std::span<const Complex> samples, double period);

/// Real-input convenience overload; returns the real part.
std::vector<double> dft_derivative_oracle(std::span<const double> samples, double period);

/// ∂f/∂X column by column (period L).
RealField spectral_derivative_x(const RealField& f);

/// ∂f/∂K row by row (period (2 n_max + 1) ΔK).
RealField spectral_derivative_k(const RealField& f);

}  // namespace dke
