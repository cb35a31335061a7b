#pragma once

#include "wptwave/signal.hpp"

#include <cstdint>
#include <vector>

namespace wptwave {

struct MultipathTap {
    double alpha = 0.0;  // amplitude gain, >= 0
    double tau = 0.0;    // delay, seconds, >= 0
    double xi = 0.0;     // phase, rad, wrapped to [0, 2*pi)
};

struct MultipathChannel {
    std::vector<MultipathTap> taps;
};

MultipathChannel make_channel(std::vector<MultipathTap> taps);

// Equal-power random channel: L taps with alpha_l = sqrt(G/L) where
// G = 10^(-total_gain_db/10), delays uniform on [0, delay_max], phases
// uniform on [0, 2*pi). Draw order is fixed (all delays, then all phases,
// taps in index order) so realizations are reproducible across builds.
MultipathChannel generate_channel(std::uint64_t seed, std::size_t n_taps, double total_gain_db,
                                  double delay_max);

// Per-tone frequency response h_n e^{j psi_n} = sum_l alpha_l e^{j(-w_n tau_l + xi_l)}.
struct ChannelResponse {
    FrequencyGrid grid;
    ArrayXd h;    // magnitudes, >= 0
    ArrayXd psi;  // phases, wrapped to [0, 2*pi)
};

ChannelResponse frequency_response(const MultipathChannel& ch, const FrequencyGrid& grid);

// y(t) = sum_n sqrt(2) s_n h_n cos(w_n t + psi_n + phi_n)
double eval_received(const MultisineWaveform& w, const ChannelResponse& ch, double t);

}  // namespace wptwave
