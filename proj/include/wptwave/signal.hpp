#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>

namespace wptwave {

using Eigen::ArrayXd;

// Uniform tone grid over the band [f_min, f_max]:
//   delta_f = (f_max - f_min) / n_tones
//   f0      = ceil(f_min / delta_f) * delta_f
// Every tone frequency is an integer multiple of delta_f, so any multisine on
// the grid is periodic with T = 1 / delta_f.
struct FrequencyGrid {
    double f_min = 0.0;
    double f_max = 0.0;
    std::size_t n_tones = 0;
    double delta_f = 0.0;
    double f0 = 0.0;

    double frequency(std::size_t n) const { return f0 + static_cast<double>(n) * delta_f; }
    double omega(std::size_t n) const;
    double period() const { return 1.0 / delta_f; }
    double carrier() const { return 0.5 * (f_min + f_max); }

    // Tone index nu_n = f_n / delta_f, an exact small integer by construction.
    // Quadrature code uses these to reduce cosine arguments modulo one period.
    std::int64_t harmonic_index(std::size_t n) const;

    bool operator==(const FrequencyGrid&) const = default;
};

FrequencyGrid build_grid(double f_min, double f_max, std::size_t n_tones);

// Multisine x(t) = sum_n sqrt(2) s_n cos(w_n t + phi_n). Amplitudes in
// sqrt(W), phases stored wrapped to [0, 2*pi). Construct through
// make_waveform, which validates and wraps.
struct MultisineWaveform {
    FrequencyGrid grid;
    ArrayXd amplitudes;
    ArrayXd phases;
};

MultisineWaveform make_waveform(const FrequencyGrid& grid, ArrayXd amplitudes, ArrayXd phases);

double wrap_phase(double phi);

// Total transmit power sum_n s_n^2.
double transmit_power(const MultisineWaveform& w);

double eval_transmit(const MultisineWaveform& w, double t);

// Peak-to-average power ratio max_t x(t)^2 / P_T over one period, sampled at
// n_samples uniformly spaced points. Throws for an all-zero waveform.
double papr(const MultisineWaveform& w, std::size_t n_samples);

}  // namespace wptwave
