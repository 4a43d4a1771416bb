#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dke/lattice_field.hpp"

namespace dke {

// Shifts and stencils are periodic on both axes. shift_k(f, s) moves content
// from column n to column n + s, so the shift operator T^s f(K) = f(K + sΔK)
// is shift_k(f, -s); likewise T_X = shift_x(f, -1).

template <class T>
BasicLatticeField<T> shift_k(const BasicLatticeField<T>& f, int steps) {
    const int cols = f.cols();
    if (std::abs(steps) > cols) throw std::invalid_argument("shift_k: |steps| exceeds 2 n_max + 1");
    const int s = ((steps % cols) + cols) % cols;
    BasicLatticeField<T> out(f.spec());
    for (int m = 0; m < f.rows(); ++m) {
        for (int j = 0; j < cols; ++j) out.at(m, (j + s) % cols) = f.at(m, j);
    }
    return out;
}

template <class T>
BasicLatticeField<T> shift_x(const BasicLatticeField<T>& f, int steps) {
    const int rows = f.rows();
    if (std::abs(steps) > rows) throw std::invalid_argument("shift_x: |steps| exceeds num_cells");
    const int s = ((steps % rows) + rows) % rows;
    BasicLatticeField<T> out(f.spec());
    for (int m = 0; m < rows; ++m) {
        auto src = f.row(m);
        auto dst = out.row((m + s) % rows);
        std::copy(src.begin(), src.end(), dst.begin());
    }
    return out;
}

/// Antisymmetric momentum stencil: D f(K) = Σ_{n=1}^{N_s} c_n [f(K - nΔK) - f(K + nΔK)].
struct DriftStencil {
    std::vector<double> coefficients;  // c_1 .. c_{N_s}

    int half_width() const { return static_cast<int>(coefficients.size()); }

    /// The shift series cut after N_s terms: c_n = (-1)^n / (n ΔK).
    static DriftStencil truncated(int half_width, double dk);

    /// The same series with every shift order folded onto a ring of
    /// num_points momenta (num_points odd): c_j = Σ_{n ≡ ±j} (-1)^n/(nΔK)
    /// = (-1)^j π / (num_points ΔK sin(π j / num_points)). This is the
    /// periodic spectral derivative; c_j -> (-1)^j/(jΔK) as num_points grows.
    static DriftStencil periodic(int num_points, double dk);

    /// Ring-folded stencil over the momentum axis of the grid.
    static DriftStencil for_grid(const GridSpec& spec);
};

/// -E(X_m) Σ_n c_n [f(m, K - nΔK) - f(m, K + nΔK)] row by row; approximates
/// -E ∂f/∂K. Throws std::invalid_argument when E has the wrong length or the
/// stencil is wider than the momentum ring.
template <class T>
BasicLatticeField<T> drift_apply(const BasicLatticeField<T>& f, std::span<const double> field_strength,
                                 const DriftStencil& stencil) {
    const int rows = f.rows();
    const int cols = f.cols();
    if (static_cast<int>(field_strength.size()) != rows) {
        throw std::invalid_argument("drift_apply: field profile has " + std::to_string(field_strength.size()) +
                                    " entries, grid has " + std::to_string(rows) + " cells");
    }
    if (2 * stencil.half_width() + 1 > cols) {
        throw std::invalid_argument("drift_apply: stencil half-width exceeds the momentum ring");
    }
    BasicLatticeField<T> out(f.spec());
    for (int m = 0; m < rows; ++m) {
        const double e = field_strength[m];
        if (e == 0.0) continue;
        auto in = f.row(m);
        auto res = out.row(m);
        for (int j = 0; j < cols; ++j) {
            T acc{};
            for (int s = 1; s <= stencil.half_width(); ++s) {
                const int lower = (j - s + cols) % cols;
                const int upper = (j + s) % cols;
                acc += stencil.coefficients[s - 1] * (in[lower] - in[upper]);
            }
            res[j] = -e * acc;
        }
    }
    return out;
}

template <class T>
BasicLatticeField<T> drift_apply(const BasicLatticeField<T>& f, std::span<const double> field_strength) {
    return drift_apply(f, field_strength, DriftStencil::for_grid(f.spec()));
}

/// D_R: (1/(2d)) (f(m) - f(m+1)), periodic in m.
template <class T>
BasicLatticeField<T> stream_d(const BasicLatticeField<T>& f) {
    const int rows = f.rows();
    const double scale = 0.5 / f.spec().cell_width();
    BasicLatticeField<T> out(f.spec());
    for (int m = 0; m < rows; ++m) {
        auto here = f.row(m);
        auto next = f.row((m + 1) % rows);
        auto res = out.row(m);
        for (int j = 0; j < f.cols(); ++j) res[j] = scale * (here[j] - next[j]);
    }
    return out;
}

/// D_{-R}: (1/(2d)) (f(m) - f(m-1)), periodic in m.
template <class T>
BasicLatticeField<T> stream_d_reverse(const BasicLatticeField<T>& f) {
    const int rows = f.rows();
    const double scale = 0.5 / f.spec().cell_width();
    BasicLatticeField<T> out(f.spec());
    for (int m = 0; m < rows; ++m) {
        auto here = f.row(m);
        auto prev = f.row((m + rows - 1) % rows);
        auto res = out.row(m);
        for (int j = 0; j < f.cols(); ++j) res[j] = scale * (here[j] - prev[j]);
    }
    return out;
}

/// D²_R: (1/d²) (f(m+1) + f(m-1) - 2 f(m)), periodic in m.
template <class T>
BasicLatticeField<T> stream_d2(const BasicLatticeField<T>& f) {
    const int rows = f.rows();
    const double scale = 1.0 / (f.spec().cell_width() * f.spec().cell_width());
    BasicLatticeField<T> out(f.spec());
    for (int m = 0; m < rows; ++m) {
        auto here = f.row(m);
        auto next = f.row((m + 1) % rows);
        auto prev = f.row((m + rows - 1) % rows);
        auto res = out.row(m);
        for (int j = 0; j < f.cols(); ++j) res[j] = scale * ((next[j] + prev[j]) - 2.0 * here[j]);
    }
    return out;
}

/// D_{-R} - D_R = (f(m+1) - f(m-1)) / (2d): the centred first difference.
template <class T>
BasicLatticeField<T> centered_difference_x(const BasicLatticeField<T>& f) {
    const int rows = f.rows();
    const double scale = 0.5 / f.spec().cell_width();
    BasicLatticeField<T> out(f.spec());
    for (int m = 0; m < rows; ++m) {
        auto next = f.row((m + 1) % rows);
        auto prev = f.row((m + rows - 1) % rows);
        auto res = out.row(m);
        for (int j = 0; j < f.cols(); ++j) res[j] = scale * (next[j] - prev[j]);
    }
    return out;
}

}  // namespace dke
