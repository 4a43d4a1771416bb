#include "dke/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dke {

GridSpec::GridSpec(double cell_width, int num_cells, int n_max) : d_(cell_width), num_cells_(num_cells), n_max_(n_max) {
    if (!(cell_width > 0.0) || !std::isfinite(cell_width)) {
        throw std::invalid_argument("grid: cell width d must be a positive finite number");
    }
    if (num_cells < 2 || num_cells % 2 != 0) {
        throw std::invalid_argument("grid: num_cells must be even and >= 2, got " + std::to_string(num_cells));
    }
    if (n_max < 1) {
        throw std::invalid_argument("grid: n_max must be >= 1, got " + std::to_string(n_max));
    }
}

std::size_t GridSpec::flat(WaveletIndex idx) const {
    if (!contains(idx)) throw std::out_of_range("grid: wavelet index outside the lattice");
    return static_cast<std::size_t>(idx.m) * static_cast<std::size_t>(num_momenta()) +
           static_cast<std::size_t>(idx.n + n_max_);
}

WaveletIndex GridSpec::unflat(std::size_t k) const {
    if (k >= num_states()) throw std::out_of_range("grid: flat index outside the lattice");
    const auto cols = static_cast<std::size_t>(num_momenta());
    return {static_cast<int>(k / cols), static_cast<int>(k % cols) - n_max_};
}

std::optional<int> GridSpec::cell_of(double x) const {
    // Cell edges sit at integer values of t; snapping a few ulps keeps the
    // edge itself in the cell to its right.
    double t = x / d_ + 0.5 * num_cells_;
    const double r = std::round(t);
    if (std::abs(t - r) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) t = r;
    const double m = std::floor(t);
    if (m < 0.0 || m >= num_cells_) return std::nullopt;
    return static_cast<int>(m);
}

}  // namespace dke
