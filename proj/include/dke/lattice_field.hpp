#pragma once

#include <algorithm>
#include <cassert>
#include <span>
#include <stdexcept>
#include <vector>

#include "dke/grid.hpp"

namespace dke {

/// Values on the M x (2 n_max + 1) lattice, stored row-major by position cell.
///
/// Momentum columns are addressed either by the signed momentum index n
/// (operator()) or by the column offset j = n + n_max (at()).
template <class T>
class BasicLatticeField {
public:
    using value_type = T;

    explicit BasicLatticeField(const GridSpec& spec, T fill = T{})
        : spec_(spec), values_(spec.num_states(), fill) {}

    BasicLatticeField(const GridSpec& spec, std::vector<T> values) : spec_(spec), values_(std::move(values)) {
        if (values_.size() != spec_.num_states()) {
            throw std::invalid_argument("lattice field: value count does not match the grid");
        }
    }

    const GridSpec& spec() const { return spec_; }
    int rows() const { return spec_.num_cells(); }
    int cols() const { return spec_.num_momenta(); }
    std::size_t size() const { return values_.size(); }

    T& operator()(int m, int n) { return values_[offset(m, n + spec_.n_max())]; }
    const T& operator()(int m, int n) const { return values_[offset(m, n + spec_.n_max())]; }
    T& operator()(WaveletIndex idx) { return (*this)(idx.m, idx.n); }
    const T& operator()(WaveletIndex idx) const { return (*this)(idx.m, idx.n); }

    T& at(int m, int j) { return values_[offset(m, j)]; }
    const T& at(int m, int j) const { return values_[offset(m, j)]; }

    std::span<T> row(int m) { return {values_.data() + offset(m, 0), static_cast<std::size_t>(cols())}; }
    std::span<const T> row(int m) const {
        return {values_.data() + offset(m, 0), static_cast<std::size_t>(cols())};
    }

    std::span<T> values() { return values_; }
    std::span<const T> values() const { return values_; }

    BasicLatticeField& operator+=(const BasicLatticeField& other) {
        check_same_grid(other);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
        return *this;
    }
    BasicLatticeField& operator-=(const BasicLatticeField& other) {
        check_same_grid(other);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
        return *this;
    }
    BasicLatticeField& operator*=(double s) {
        for (auto& v : values_) v *= s;
        return *this;
    }

    friend BasicLatticeField operator+(BasicLatticeField a, const BasicLatticeField& b) { return a += b; }
    friend BasicLatticeField operator-(BasicLatticeField a, const BasicLatticeField& b) { return a -= b; }
    friend BasicLatticeField operator*(double s, BasicLatticeField a) { return a *= s; }
    friend BasicLatticeField operator*(BasicLatticeField a, double s) { return a *= s; }

    friend bool operator==(const BasicLatticeField& a, const BasicLatticeField& b) {
        return a.spec_ == b.spec_ && a.values_ == b.values_;
    }

    void check_same_grid(const BasicLatticeField& other) const {
        if (!(spec_ == other.spec_)) throw std::invalid_argument("lattice fields live on different grids");
    }

private:
    std::size_t offset(int m, int j) const {
        assert(m >= 0 && m < rows() && j >= 0 && j < cols());
        return static_cast<std::size_t>(m) * static_cast<std::size_t>(cols()) + static_cast<std::size_t>(j);
    }

    GridSpec spec_;
    std::vector<T> values_;
};

using LatticeField = BasicLatticeField<Complex>;
using RealField = BasicLatticeField<double>;
/// Occupation numbers n(R, K), expected to lie in [0, 1].
using DistributionField = RealField;

/// Largest |a - b| over the lattice.
template <class T>
double max_abs_difference(const BasicLatticeField<T>& a, const BasicLatticeField<T>& b) {
    a.check_same_grid(b);
    double worst = 0.0;
    auto va = a.values();
    auto vb = b.values();
    for (std::size_t i = 0; i < va.size(); ++i) worst = std::max(worst, static_cast<double>(std::abs(va[i] - vb[i])));
    return worst;
}

template <class T>
double max_abs(const BasicLatticeField<T>& a) {
    double worst = 0.0;
    for (const auto& v : a.values()) worst = std::max(worst, static_cast<double>(std::abs(v)));
    return worst;
}

}  // namespace dke
