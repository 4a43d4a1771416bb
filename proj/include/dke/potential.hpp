#pragma once

#include <vector>

#include "dke/grid.hpp"

namespace dke {

/// Potential energy V(R) and field E(R) = -∇V (unit charge) at cell centres.
struct PotentialProfile {
    std::vector<double> V;
    std::vector<double> E;

    static PotentialProfile zero(const GridSpec& spec);

    /// E from periodic centred differences of V.
    static PotentialProfile from_potential(const GridSpec& spec, std::vector<double> V);

    /// Both supplied. E is checked against centred differences of V on interior
    /// cells (the periodic seam is skipped, so non-periodic V such as a uniform
    /// field is accepted): |E + (V(m+1) - V(m-1))/2d| <= tol max(1, max|E|).
    static PotentialProfile from_both(const GridSpec& spec, std::vector<double> V, std::vector<double> E,
                                      double tol = 1e-9);

    /// V = -E0 X, E = E0.
    static PotentialProfile uniform_field(const GridSpec& spec, double E0);

    /// V = k X²/2, E = -k X.
    static PotentialProfile harmonic(const GridSpec& spec, double k_spring);

    double max_abs_field() const;
};

}  // namespace dke
