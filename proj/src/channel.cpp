#include "wptwave/channel.hpp"

#include "wptwave/rng.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace wptwave {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

MultipathChannel make_channel(std::vector<MultipathTap> taps) {
    if (taps.empty()) {
        throw std::invalid_argument("make_channel: require at least one tap");
    }
    for (auto& tap : taps) {
        if (!(tap.alpha >= 0.0) || !(tap.tau >= 0.0)) {
            throw std::invalid_argument("make_channel: tap gains and delays must be nonnegative");
        }
        tap.xi = wrap_phase(tap.xi);
    }
    return MultipathChannel{std::move(taps)};
}

MultipathChannel generate_channel(std::uint64_t seed, std::size_t n_taps, double total_gain_db,
                                  double delay_max) {
    if (n_taps == 0) {
        throw std::invalid_argument("generate_channel: require at least one tap");
    }
    if (!(delay_max > 0.0)) {
        throw std::invalid_argument("generate_channel: require delay_max > 0");
    }
    const double gain = std::pow(10.0, -total_gain_db / 10.0);
    const double alpha = std::sqrt(gain / static_cast<double>(n_taps));

    UniformRng rng(seed);
    std::vector<MultipathTap> taps(n_taps);
    for (auto& tap : taps) {
        tap.alpha = alpha;
        tap.tau = rng.next() * delay_max;
    }
    for (auto& tap : taps) {
        tap.xi = rng.next() * kTwoPi;
    }
    return MultipathChannel{std::move(taps)};
}

ChannelResponse frequency_response(const MultipathChannel& ch, const FrequencyGrid& grid) {
    const auto n_tones = static_cast<Eigen::Index>(grid.n_tones);
    ArrayXd h(n_tones);
    ArrayXd psi(n_tones);
    for (Eigen::Index n = 0; n < n_tones; ++n) {
        const double w_n = grid.omega(static_cast<std::size_t>(n));
        std::complex<double> acc{0.0, 0.0};
        for (const auto& tap : ch.taps) {
            acc += std::polar(tap.alpha, -w_n * tap.tau + tap.xi);
        }
        h[n] = std::abs(acc);
        psi[n] = wrap_phase(std::arg(acc));
    }
    return ChannelResponse{grid, std::move(h), std::move(psi)};
}

double eval_received(const MultisineWaveform& w, const ChannelResponse& ch, double t) {
    if (!(w.grid == ch.grid)) {
        throw std::invalid_argument("eval_received: waveform and channel response use different grids");
    }
    const double sqrt2 = std::numbers::sqrt2;
    double y = 0.0;
    for (std::size_t n = 0; n < w.grid.n_tones; ++n) {
        const auto i = static_cast<Eigen::Index>(n);
        y += sqrt2 * w.amplitudes[i] * ch.h[i] * std::cos(w.grid.omega(n) * t + ch.psi[i] + w.phases[i]);
    }
    return y;
}

}  // namespace wptwave
