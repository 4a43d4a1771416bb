#pragma once

#include <cstddef>
#include <vector>

namespace dke {

/// Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on P_n.
class GaussLegendre {
public:
    explicit GaussLegendre(int num_points);

    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    /// Composite rule: [a, b] split into equal panels, each integrated with this rule.
    template <class F>
    auto integrate(F&& f, double a, double b, int panels = 1) const {
        using R = decltype(f(a));
        R total{};
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double lo = a + p * h;
            const double mid = lo + 0.5 * h;
            R panel{};
            for (std::size_t i = 0; i < nodes_.size(); ++i) panel += weights_[i] * f(mid + 0.5 * h * nodes_[i]);
            total += 0.5 * h * panel;
        }
        return total;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Shared rule for a given order; rules are built once and cached.
const GaussLegendre& gauss_legendre(int num_points);

}  // namespace dke
