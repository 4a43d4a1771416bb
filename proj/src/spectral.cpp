#include "dke/spectral.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace dke {

namespace {

// The FFTW planner is not re-entrant; plan creation and destruction are serialized.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class Plan {
public:
    Plan(int n, fftw_complex* in, fftw_complex* out, int sign) {
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_1d(n, in, out, sign, FFTW_ESTIMATE);
        if (!plan_) throw std::runtime_error("FFTW failed to create a plan");
    }
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_ = nullptr;
};

}  // namespace

std::vector<Complex> dft_derivative_oracle(std::span<const Complex> samples, double period) {
    const int n = static_cast<int>(samples.size());
    if (n < 4) throw std::invalid_argument("dft_derivative_oracle: need at least 4 samples");
    if (!(period > 0.0)) throw std::invalid_argument("dft_derivative_oracle: period must be positive");

    std::vector<Complex> buffer(samples.begin(), samples.end());
    std::vector<Complex> spectrum(static_cast<std::size_t>(n));
    auto* in = reinterpret_cast<fftw_complex*>(buffer.data());
    auto* out = reinterpret_cast<fftw_complex*>(spectrum.data());
    Plan forward(n, in, out, FFTW_FORWARD);
    Plan backward(n, out, in, FFTW_BACKWARD);

    forward.execute();
    const double base = kTwoPi / period;
    for (int j = 0; j < n; ++j) {
        const int mode = j <= n / 2 ? j : j - n;
        if (n % 2 == 0 && j == n / 2) {
            spectrum[j] = 0.0;
            continue;
        }
        spectrum[j] *= Complex(0.0, base * mode) / static_cast<double>(n);
    }
    backward.execute();
    return buffer;
}

std::vector<double> dft_derivative_oracle(std::span<const double> samples, double period) {
    std::vector<Complex> z(samples.begin(), samples.end());
    const auto dz = dft_derivative_oracle(std::span<const Complex>(z), period);
    std::vector<double> out(dz.size());
    for (std::size_t i = 0; i < dz.size(); ++i) out[i] = dz[i].real();
    return out;
}

RealField spectral_derivative_x(const RealField& f) {
    const GridSpec& spec = f.spec();
    RealField out(spec);
    std::vector<double> column(static_cast<std::size_t>(f.rows()));
    for (int j = 0; j < f.cols(); ++j) {
        for (int m = 0; m < f.rows(); ++m) column[m] = f.at(m, j);
        const auto d = dft_derivative_oracle(std::span<const double>(column), spec.length());
        for (int m = 0; m < f.rows(); ++m) out.at(m, j) = d[m];
    }
    return out;
}

RealField spectral_derivative_k(const RealField& f) {
    const GridSpec& spec = f.spec();
    RealField out(spec);
    const double period = spec.num_momenta() * spec.momentum_step();
    for (int m = 0; m < f.rows(); ++m) {
        const auto d = dft_derivative_oracle(f.row(m), period);
        std::copy(d.begin(), d.end(), out.row(m).begin());
    }
    return out;
}

}  // namespace dke
