#include "dke/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dke {

namespace {

void check_length(const GridSpec& spec, const std::vector<double>& values, const char* what) {
    if (static_cast<int>(values.size()) != spec.num_cells()) {
        throw std::invalid_argument(std::string("potential profile: ") + what + " has " +
                                    std::to_string(values.size()) + " entries, grid has " +
                                    std::to_string(spec.num_cells()) + " cells");
    }
}

double centered_field(const std::vector<double>& V, int m, double d) {
    const int M = static_cast<int>(V.size());
    return -(V[(m + 1) % M] - V[(m + M - 1) % M]) / (2.0 * d);
}

}  // namespace

PotentialProfile PotentialProfile::zero(const GridSpec& spec) {
    return {std::vector<double>(spec.num_cells(), 0.0), std::vector<double>(spec.num_cells(), 0.0)};
}

PotentialProfile PotentialProfile::from_potential(const GridSpec& spec, std::vector<double> V) {
    check_length(spec, V, "V");
    std::vector<double> E(V.size());
    for (int m = 0; m < spec.num_cells(); ++m) E[m] = centered_field(V, m, spec.cell_width());
    return {std::move(V), std::move(E)};
}

PotentialProfile PotentialProfile::from_both(const GridSpec& spec, std::vector<double> V, std::vector<double> E,
                                             double tol) {
    check_length(spec, V, "V");
    check_length(spec, E, "E");
    double scale = 1.0;
    for (double e : E) scale = std::max(scale, std::abs(e));
    for (int m = 1; m + 1 < spec.num_cells(); ++m) {
        const double defect = std::abs(E[m] - centered_field(V, m, spec.cell_width()));
        if (defect > tol * scale) {
            throw std::invalid_argument("potential profile: E inconsistent with V at cell " + std::to_string(m) +
                                        " (defect " + std::to_string(defect) + ")");
        }
    }
    return {std::move(V), std::move(E)};
}

PotentialProfile PotentialProfile::uniform_field(const GridSpec& spec, double E0) {
    PotentialProfile p;
    for (int m = 0; m < spec.num_cells(); ++m) {
        p.V.push_back(-E0 * spec.position(m));
        p.E.push_back(E0);
    }
    return p;
}

PotentialProfile PotentialProfile::harmonic(const GridSpec& spec, double k_spring) {
    PotentialProfile p;
    for (int m = 0; m < spec.num_cells(); ++m) {
        const double x = spec.position(m);
        p.V.push_back(0.5 * k_spring * x * x);
        p.E.push_back(-k_spring * x);
    }
    return p;
}

double PotentialProfile::max_abs_field() const {
    double worst = 0.0;
    for (double e : E) worst = std::max(worst, std::abs(e));
    return worst;
}

}  // namespace dke
