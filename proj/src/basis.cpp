#include "dke/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dke/quadrature.hpp"

namespace dke {

namespace {

constexpr int kMinQuadPoints = 64;

// Panels needed so that each holds at most about one period of e^{i w x}
// over an interval of the given width.
int panels_for(double angular_frequency, double width) {
    return 1 + static_cast<int>(std::ceil(std::abs(angular_frequency) * width / kTwoPi));
}

}  // namespace

double sinc(double u) {
    if (std::abs(u) < 1e-8) return 1.0 - u * u / 6.0;
    return std::sin(u) / u;
}

double sinc_pi(double t) {
    const double r = std::round(t);
    if (std::abs(t - r) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
        return r == 0.0 ? 1.0 : 0.0;
    }
    return sinc(std::numbers::pi * t);
}

Complex plane_wavelet(double center, double momentum, double width, double x) {
    double t = (x - center) / width + 0.5;
    const double r = std::round(t);
    if (std::abs(t - r) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) t = r;
    if (t < 0.0 || t >= 1.0) return {0.0, 0.0};
    return std::polar(1.0 / std::sqrt(width), momentum * x);
}

Complex wavelet_eval(const GridSpec& spec, WaveletIndex idx, double x) {
    const auto cell = spec.cell_of(x);
    if (!cell || *cell != idx.m) return {0.0, 0.0};
    return std::polar(1.0 / std::sqrt(spec.cell_width()), spec.momentum(idx.n) * x);
}

Complex inner_product(const GridSpec&, WaveletIndex a, WaveletIndex b) {
    if (a.m != b.m) return {0.0, 0.0};
    // d(K - K')/2 = π(n - n'), so the sinc argument in units of π is n - n'.
    return {sinc_pi(static_cast<double>(a.n - b.n)), 0.0};
}

Complex inner_product_quadrature(const GridSpec& spec, WaveletIndex a, WaveletIndex b, int quad_points) {
    if (quad_points < kMinQuadPoints) {
        throw std::invalid_argument("inner_product_quadrature: quad_points must be >= 64");
    }
    if (a.m != b.m) return {0.0, 0.0};
    const double d = spec.cell_width();
    const double lo = spec.position(a.m) - 0.5 * d;
    const double hi = lo + d;
    const auto& rule = gauss_legendre(quad_points);
    const int panels = panels_for(spec.momentum(b.n) - spec.momentum(a.n), d);
    return rule.integrate(
        [&](double x) { return std::conj(wavelet_eval(spec, a, x)) * wavelet_eval(spec, b, x); }, lo, hi, panels);
}

LatticeField expand_plane_wave(const GridSpec& spec, double k) {
    LatticeField a(spec);
    const double d = spec.cell_width();
    const double prefactor = std::sqrt(d / spec.length());
    for (int n = -spec.n_max(); n <= spec.n_max(); ++n) {
        const double dk = k - spec.momentum(n);
        const double envelope = prefactor * sinc_pi(d * dk / kTwoPi);
        for (int m = 0; m < spec.num_cells(); ++m) {
            a(m, n) = envelope == 0.0 ? Complex{0.0, 0.0} : envelope * std::polar(1.0, dk * spec.position(m));
        }
    }
    return a;
}

Complex plane_wave_overlap_quadrature(const GridSpec& spec, WaveletIndex idx, double k, int quad_points) {
    if (quad_points < kMinQuadPoints) {
        throw std::invalid_argument("plane_wave_overlap_quadrature: quad_points must be >= 64");
    }
    const double d = spec.cell_width();
    const double lo = spec.position(idx.m) - 0.5 * d;
    const double inv_sqrt_l = 1.0 / std::sqrt(spec.length());
    const auto& rule = gauss_legendre(quad_points);
    const int panels = panels_for(k - spec.momentum(idx.n), d);
    return rule.integrate(
        [&](double x) { return std::conj(wavelet_eval(spec, idx, x)) * std::polar(inv_sqrt_l, k * x); }, lo, lo + d,
        panels);
}

LatticeField project(const GridSpec& spec, const ScalarFunction& fn, int quad_points) {
    if (quad_points < kMinQuadPoints) throw std::invalid_argument("project: quad_points must be >= 64");
    const auto& rule = gauss_legendre(quad_points);
    const double d = spec.cell_width();
    const double inv_sqrt_d = 1.0 / std::sqrt(d);
    const double dk = spec.momentum_step();
    const int panels = 2 + spec.n_max();
    const double h = d / panels;

    std::vector<double> xs;
    std::vector<Complex> weighted;
    xs.reserve(static_cast<std::size_t>(panels * rule.size()));
    weighted.reserve(xs.capacity());

    LatticeField a(spec);
    for (int m = 0; m < spec.num_cells(); ++m) {
        xs.clear();
        weighted.clear();
        const double lo = spec.position(m) - 0.5 * d;
        for (int p = 0; p < panels; ++p) {
            const double mid = lo + (p + 0.5) * h;
            for (int i = 0; i < rule.size(); ++i) {
                const double x = mid + 0.5 * h * rule.nodes()[i];
                xs.push_back(x);
                weighted.push_back(0.5 * h * rule.weights()[i] * inv_sqrt_d * fn(x));
            }
        }
        for (int n = -spec.n_max(); n <= spec.n_max(); ++n) {
            const double kn = n * dk;
            Complex sum{0.0, 0.0};
            for (std::size_t i = 0; i < xs.size(); ++i) sum += std::polar(1.0, -kn * xs[i]) * weighted[i];
            a(m, n) = sum;
        }
    }
    return a;
}

Complex reconstruct(const LatticeField& coeffs, double x) {
    const GridSpec& spec = coeffs.spec();
    const auto cell = spec.cell_of(x);
    if (!cell) return {0.0, 0.0};
    Complex sum{0.0, 0.0};
    for (int n = -spec.n_max(); n <= spec.n_max(); ++n) {
        sum += coeffs(*cell, n) * wavelet_eval(spec, {*cell, n}, x);
    }
    return sum;
}

Complex phase_matrix_element(const GridSpec& spec, double q, WaveletIndex a, WaveletIndex b) {
    if (a.m != b.m) return {0.0, 0.0};
    const double mismatch = spec.momentum(a.n) + q - spec.momentum(b.n);
    const double envelope = sinc_pi(spec.cell_width() * mismatch / kTwoPi);
    if (envelope == 0.0) return {0.0, 0.0};
    return std::polar(1.0, q * spec.position(a.m)) * envelope;
}

double closure_defect(const GridSpec& spec, const ScalarFunction& fn, std::span<const double> sample_xs,
                      int quad_points) {
    const LatticeField coeffs = project(spec, fn, quad_points);
    double worst = 0.0;
    for (double x : sample_xs) worst = std::max(worst, std::abs(reconstruct(coeffs, x) - fn(x)));
    return worst;
}

}  // namespace dke
