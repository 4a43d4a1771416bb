#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>

namespace dke {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A single plane-wavelet state |X, K>: position cell m and momentum index n.
struct WaveletIndex {
    int m = 0;
    int n = 0;

    friend bool operator==(const WaveletIndex&, const WaveletIndex&) = default;
};

/// Quantized phase-space lattice.
///
/// Cells have width d and centres X(m) = (m - (M-1)/2) d for m = 0..M-1, so the
/// lattice covers [-L/2, L/2) with L = M d. Momenta are K(n) = n 2π/d for
/// n = -n_max..n_max. Natural units (ħ = m = q = 1) throughout.
class GridSpec {
public:
    /// Throws std::invalid_argument unless d > 0, M >= 2 is even and n_max >= 1.
    GridSpec(double cell_width, int num_cells, int n_max);

    double cell_width() const { return d_; }
    int num_cells() const { return num_cells_; }
    int n_max() const { return n_max_; }
    int num_momenta() const { return 2 * n_max_ + 1; }
    std::size_t num_states() const {
        return static_cast<std::size_t>(num_cells_) * static_cast<std::size_t>(num_momenta());
    }

    double length() const { return d_ * num_cells_; }
    double momentum_step() const { return kTwoPi / d_; }
    double max_momentum() const { return n_max_ * momentum_step(); }

    double position(int m) const { return (m - 0.5 * (num_cells_ - 1)) * d_; }
    double momentum(int n) const { return n * momentum_step(); }
    double position(WaveletIndex idx) const { return position(idx.m); }
    double momentum(WaveletIndex idx) const { return momentum(idx.n); }

    bool contains(WaveletIndex idx) const {
        return idx.m >= 0 && idx.m < num_cells_ && idx.n >= -n_max_ && idx.n <= n_max_;
    }

    /// Row-major flat index: m * (2 n_max + 1) + (n + n_max).
    std::size_t flat(WaveletIndex idx) const;
    WaveletIndex unflat(std::size_t k) const;

    /// Cell whose support [X - d/2, X + d/2) contains x, if any.
    std::optional<int> cell_of(double x) const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    double d_;
    int num_cells_;
    int n_max_;
};

/// Free-particle energy K²/2.
inline double kinetic_energy(double momentum) { return 0.5 * momentum * momentum; }

}  // namespace dke
