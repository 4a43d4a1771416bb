#include "dke/difference_ops.hpp"

namespace dke {

DriftStencil DriftStencil::truncated(int half_width, double dk) {
    if (half_width < 1) throw std::invalid_argument("drift stencil: half-width must be >= 1");
    if (!(dk > 0.0)) throw std::invalid_argument("drift stencil: momentum step must be positive");
    DriftStencil s;
    s.coefficients.resize(static_cast<std::size_t>(half_width));
    for (int n = 1; n <= half_width; ++n) s.coefficients[n - 1] = (n % 2 == 0 ? 1.0 : -1.0) / (n * dk);
    return s;
}

DriftStencil DriftStencil::periodic(int num_points, double dk) {
    if (num_points < 3 || num_points % 2 == 0) {
        throw std::invalid_argument("drift stencil: periodic ring needs an odd number of points >= 3");
    }
    if (!(dk > 0.0)) throw std::invalid_argument("drift stencil: momentum step must be positive");
    DriftStencil s;
    const int half = (num_points - 1) / 2;
    s.coefficients.resize(static_cast<std::size_t>(half));
    for (int j = 1; j <= half; ++j) {
        const double sign = j % 2 == 0 ? 1.0 : -1.0;
        s.coefficients[j - 1] = sign * std::numbers::pi / (num_points * dk * std::sin(std::numbers::pi * j / num_points));
    }
    return s;
}

DriftStencil DriftStencil::for_grid(const GridSpec& spec) {
    return periodic(spec.num_momenta(), spec.momentum_step());
}

}  // namespace dke
