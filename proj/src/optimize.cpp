#include "wptwave/optimize.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace wptwave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Cosine table for the aligned-phase sampled objective: cosm(q, n) =
// cos(w_n t_q) at t_q = q T / Q, q = 1..Q. Shared across SCP iterations.
struct SampledEnv {
    Eigen::MatrixXd cosm;
    ArrayXd gain;  // k2 * h_n with k2 = sqrt(2 r_s) / (eta v_0)
    double max_exponent = 700.0;

    SampledEnv(const ChannelResponse& ch, const RectennaParams& p, const QuadratureSpec& quad) {
        const std::size_t q_count = quad.samples_for(ch.grid);
        const auto rows = static_cast<Eigen::Index>(q_count);
        const auto cols = static_cast<Eigen::Index>(ch.grid.n_tones);
        cosm.resize(rows, cols);
        const auto q_total = static_cast<std::int64_t>(q_count);
        for (Eigen::Index n = 0; n < cols; ++n) {
            const std::int64_t nu = ch.grid.harmonic_index(static_cast<std::size_t>(n));
            for (Eigen::Index q = 0; q < rows; ++q) {
                const std::int64_t qi = q + 1;
                const double frac = static_cast<double>((nu * qi) % q_total) / static_cast<double>(q_total);
                cosm(q, n) = std::cos(kTwoPi * frac);
            }
        }
        const double k2 = std::sqrt(2.0 * p.r_s) / p.diode_scale();
        gain = k2 * ch.h;
        max_exponent = quad.max_exponent;
    }

    std::pair<double, ArrayXd> coefficients(const ArrayXd& s) const {
        const Eigen::VectorXd weights = (s * gain).matrix();
        const ArrayXd exponent = (cosm * weights).array();
        const double peak = exponent.abs().maxCoeff();
        if (peak > max_exponent) {
            std::ostringstream msg;
            msg << "scp_coefficients: peak exponent " << peak << " exceeds the cap " << max_exponent;
            throw std::runtime_error(msg.str());
        }
        const ArrayXd z = exponent.exp();
        const double q_count = static_cast<double>(cosm.rows());
        const double beta0 = z.sum() / q_count;
        const ArrayXd betas = gain * (cosm.transpose() * z.matrix()).array() / q_count;
        return {beta0, betas};
    }
};

}  // namespace

ArrayXd align_phases(const ChannelResponse& ch) {
    ArrayXd phi(ch.psi.size());
    for (Eigen::Index i = 0; i < phi.size(); ++i) {
        phi[i] = wrap_phase(-ch.psi[i]);
    }
    return phi;
}

MultisineWaveform single_tone(const ChannelResponse& ch, double p_t) {
    if (!(p_t >= 0.0)) {
        throw std::invalid_argument("single_tone: require p_t >= 0");
    }
    Eigen::Index best = 0;
    ch.h.maxCoeff(&best);  // Eigen returns the first maximizer, the lowest index
    ArrayXd s = ArrayXd::Zero(ch.h.size());
    s[best] = std::sqrt(p_t);
    return make_waveform(ch.grid, std::move(s), align_phases(ch));
}

MultisineWaveform frequency_mrt(const ChannelResponse& ch, double p_t) {
    if (!(p_t >= 0.0)) {
        throw std::invalid_argument("frequency_mrt: require p_t >= 0");
    }
    const double norm2 = ch.h.square().sum();
    if (!(norm2 > 0.0)) {
        throw std::invalid_argument("frequency_mrt: all channel gains are zero; allocation is undefined");
    }
    ArrayXd s = ch.h * std::sqrt(p_t / norm2);
    return make_waveform(ch.grid, std::move(s), align_phases(ch));
}

MultisineWaveform equal_power(const ChannelResponse& ch, double p_t) {
    if (!(p_t >= 0.0)) {
        throw std::invalid_argument("equal_power: require p_t >= 0");
    }
    const double s_n = std::sqrt(p_t / static_cast<double>(ch.grid.n_tones));
    return make_waveform(ch.grid, ArrayXd::Constant(ch.h.size(), s_n), align_phases(ch));
}

std::pair<double, ArrayXd> scp_coefficients(const ArrayXd& s, const ChannelResponse& ch,
                                            const RectennaParams& p, const QuadratureSpec& quad) {
    validate(p);
    if (s.size() != ch.h.size()) {
        throw std::invalid_argument("scp_coefficients: amplitude length must match the channel response");
    }
    if ((s < 0.0).any()) {
        throw std::invalid_argument("scp_coefficients: amplitudes must be nonnegative");
    }
    return SampledEnv(ch, p, quad).coefficients(s);
}

ArrayXd qclp_step(const ArrayXd& betas, double p_t) {
    if (!(p_t >= 0.0)) {
        throw std::invalid_argument("qclp_step: require p_t >= 0");
    }
    if (!(betas.maxCoeff() > 0.0)) {
        throw std::runtime_error("qclp_step: every linearization coefficient is <= 0; subproblem is degenerate");
    }
    const ArrayXd clamped = betas.max(0.0);
    return clamped * std::sqrt(p_t / clamped.square().sum());
}

ScpTrace scp_qclp(const ChannelResponse& ch, const RectennaParams& p, double p_t,
                  const ScpConfig& cfg) {
    validate(p);
    if (!(p_t >= 0.0)) {
        throw std::invalid_argument("scp_qclp: require p_t >= 0");
    }
    if (!(cfg.epsilon >= 0.0) || cfg.max_iters < 1) {
        throw std::invalid_argument("scp_qclp: require epsilon >= 0 and max_iters >= 1");
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();

    ScpTrace trace;
    if (p_t == 0.0) {
        // the objective is constant at zero power; report the trivial point
        ArrayXd zero = ArrayXd::Zero(ch.h.size());
        auto [beta0, betas] = scp_coefficients(zero, ch, p, cfg.quad);
        trace.iterations.push_back({1, zero, beta0, betas, nan});
        trace.converged = true;
        trace.final_waveform = make_waveform(ch.grid, std::move(zero), align_phases(ch));
        return trace;
    }

    const SampledEnv env(ch, p, cfg.quad);
    ArrayXd s = ArrayXd::Constant(ch.h.size(), std::sqrt(p_t / static_cast<double>(ch.grid.n_tones)));
    auto [beta0, betas] = env.coefficients(s);
    trace.iterations.push_back({1, s, beta0, betas, nan});

    while (trace.iterations.size() < cfg.max_iters) {
        ArrayXd s_next = qclp_step(trace.last().betas, p_t);
        auto [beta0_next, betas_next] = env.coefficients(s_next);
        const double delta = std::abs(beta0_next - trace.last().beta0) / trace.last().beta0;
        trace.iterations.push_back(
            {trace.iterations.size() + 1, std::move(s_next), beta0_next, std::move(betas_next), delta});
        if (delta <= cfg.epsilon) {
            trace.converged = true;
            break;
        }
    }

    trace.final_waveform = make_waveform(ch.grid, trace.last().s, align_phases(ch));
    return trace;
}

double kkt_spread(const ArrayXd& s, const ArrayXd& betas, double active_cut) {
    if (s.size() != betas.size()) {
        throw std::invalid_argument("kkt_spread: mismatched lengths");
    }
    const double cut = active_cut * s.maxCoeff();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s[i] > cut) {
            const double ratio = betas[i] / s[i];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            sum += ratio;
            ++count;
        }
    }
    if (count <= 1) return 0.0;
    return (hi - lo) / (sum / static_cast<double>(count));
}

}  // namespace wptwave
