#pragma once

#include "wptwave/channel.hpp"
#include "wptwave/rectenna.hpp"
#include "wptwave/signal.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace wptwave {

// Phases that make every received tone peak together: phi_n = (-psi_n) mod 2*pi.
ArrayXd align_phases(const ChannelResponse& ch);

// All power on the strongest tone (ties broken by the lowest index), aligned phases.
MultisineWaveform single_tone(const ChannelResponse& ch, double p_t);

// Amplitudes proportional to channel gains: s_n = h_n sqrt(P_T / sum_k h_k^2),
// aligned phases. Throws when every h_n is zero.
MultisineWaveform frequency_mrt(const ChannelResponse& ch, double p_t);

// Equal allocation s_n = sqrt(P_T / N), aligned phases.
MultisineWaveform equal_power(const ChannelResponse& ch, double p_t);

// Sampled linearization of the rectifier average around the aligned-phase
// iterate s: with z(t) = exp(sqrt(2 r_s) sum_n s_n h_n cos(w_n t) / (eta v_0)),
//   beta0  = (1/Q) sum_q z(t_q)
//   beta_n = (1/Q) sum_q (sqrt(2 r_s)/(eta v_0)) h_n cos(w_n t_q) z(t_q).
// beta_n is the exact partial derivative of beta0 with respect to s_n.
std::pair<double, ArrayXd> scp_coefficients(const ArrayXd& s, const ChannelResponse& ch,
                                            const RectennaParams& p, const QuadratureSpec& quad);

// Closed-form maximizer of sum_n beta_n s_n over {s >= 0, sum s_n^2 <= p_t}:
// negative coefficients are clamped to zero (their s_n = 0 bound is active),
// the rest scale to the power sphere. Throws when every coefficient is <= 0.
ArrayXd qclp_step(const ArrayXd& betas, double p_t);

struct ScpConfig {
    double epsilon = 1e-3;
    std::size_t max_iters = 500;
    QuadratureSpec quad = QuadratureSpec::algorithm();
};

struct ScpIteration {
    std::size_t m = 0;
    ArrayXd s;
    double beta0 = 0.0;
    ArrayXd betas;
    double delta = 0.0;  // |beta0^(m) - beta0^(m-1)| / beta0^(m-1); NaN for m = 1
};

struct ScpTrace {
    std::vector<ScpIteration> iterations;
    bool converged = false;
    MultisineWaveform final_waveform;

    const ScpIteration& last() const { return iterations.back(); }
};

// Successive convex programming with the closed-form QCLP subproblem:
// start from equal power, recompute the linearization at each new iterate,
// stop when delta <= epsilon or after max_iters iterations.
ScpTrace scp_qclp(const ChannelResponse& ch, const RectennaParams& p, double p_t,
                  const ScpConfig& cfg);

// Relative spread (max - min) / mean of beta_n / s_n over the active tones
// s_n > active_cut * max(s). Zero when at most one tone is active. A point is
// stationary on the power sphere exactly when the active ratios share one value.
double kkt_spread(const ArrayXd& s, const ArrayXd& betas, double active_cut = 1e-4);

}  // namespace wptwave
