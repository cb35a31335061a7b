#include "wptwave/signal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wptwave {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double FrequencyGrid::omega(std::size_t n) const {
    return kTwoPi * frequency(n);
}

std::int64_t FrequencyGrid::harmonic_index(std::size_t n) const {
    return std::llround(frequency(n) / delta_f);
}

FrequencyGrid build_grid(double f_min, double f_max, std::size_t n_tones) {
    if (!(f_min > 0.0) || !(f_max > f_min)) {
        throw std::invalid_argument("build_grid: require f_max > f_min > 0");
    }
    if (n_tones == 0) {
        throw std::invalid_argument("build_grid: require n_tones >= 1");
    }
    FrequencyGrid g;
    g.f_min = f_min;
    g.f_max = f_max;
    g.n_tones = n_tones;
    g.delta_f = (f_max - f_min) / static_cast<double>(n_tones);
    g.f0 = std::ceil(f_min / g.delta_f) * g.delta_f;
    const double f_last = g.f0 + static_cast<double>(n_tones - 1) * g.delta_f;
    if (f_last > f_max * (1.0 + 1e-12)) {
        throw std::logic_error("build_grid: constructed grid exceeds f_max");
    }
    return g;
}

double wrap_phase(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod of a tiny negative value can round back up to 2*pi
    if (r >= kTwoPi) r = 0.0;
    return r;
}

MultisineWaveform make_waveform(const FrequencyGrid& grid, ArrayXd amplitudes, ArrayXd phases) {
    const auto n = static_cast<Eigen::Index>(grid.n_tones);
    if (amplitudes.size() != n || phases.size() != n) {
        throw std::invalid_argument("make_waveform: amplitude/phase length must equal n_tones");
    }
    if ((amplitudes < 0.0).any()) {
        throw std::invalid_argument("make_waveform: amplitudes must be nonnegative");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        phases[i] = wrap_phase(phases[i]);
    }
    return MultisineWaveform{grid, std::move(amplitudes), std::move(phases)};
}

double transmit_power(const MultisineWaveform& w) {
    return w.amplitudes.square().sum();
}

double eval_transmit(const MultisineWaveform& w, double t) {
    const double sqrt2 = std::numbers::sqrt2;
    double x = 0.0;
    for (std::size_t n = 0; n < w.grid.n_tones; ++n) {
        x += sqrt2 * w.amplitudes[static_cast<Eigen::Index>(n)] *
             std::cos(w.grid.omega(n) * t + w.phases[static_cast<Eigen::Index>(n)]);
    }
    return x;
}

double papr(const MultisineWaveform& w, std::size_t n_samples) {
    if (n_samples < 2) {
        throw std::invalid_argument("papr: require at least 2 samples");
    }
    const double p_t = transmit_power(w);
    if (p_t <= 0.0) {
        throw std::invalid_argument("papr: undefined for a zero-amplitude waveform");
    }
    const double T = w.grid.period();
    double peak = 0.0;
    for (std::size_t q = 0; q < n_samples; ++q) {
        const double t = T * static_cast<double>(q) / static_cast<double>(n_samples);
        const double x = eval_transmit(w, t);
        peak = std::max(peak, x * x);
    }
    return peak / p_t;
}

}  // namespace wptwave
