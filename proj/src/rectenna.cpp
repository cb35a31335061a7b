#include "wptwave/rectenna.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace wptwave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Samples y(t) at n_samples uniform points t = (first_index + j) T / n_samples.
// Cosine arguments are reduced with integer arithmetic on the harmonic
// indices, so full-scale grids (GHz carriers) lose no precision.
ArrayXd sample_received(const MultisineWaveform& w, const ChannelResponse& ch,
                        std::size_t n_samples, std::size_t first_index) {
    if (!(w.grid == ch.grid)) {
        throw std::invalid_argument("sample_received: waveform and channel response use different grids");
    }
    const auto q_total = static_cast<std::int64_t>(n_samples);
    ArrayXd y = ArrayXd::Zero(static_cast<Eigen::Index>(n_samples));
    const double sqrt2 = std::numbers::sqrt2;
    for (std::size_t n = 0; n < w.grid.n_tones; ++n) {
        const auto i = static_cast<Eigen::Index>(n);
        const double amp = sqrt2 * w.amplitudes[i] * ch.h[i];
        if (amp == 0.0) continue;
        const double theta = ch.psi[i] + w.phases[i];
        const std::int64_t nu = w.grid.harmonic_index(n);
        for (std::size_t j = 0; j < n_samples; ++j) {
            const auto q = static_cast<std::int64_t>(first_index + j);
            const double frac = static_cast<double>((nu * q) % q_total) / static_cast<double>(q_total);
            y[static_cast<Eigen::Index>(j)] += amp * std::cos(kTwoPi * frac + theta);
        }
    }
    return y;
}

double guarded_peak_exponent(const ArrayXd& exponents, double cap, const char* who) {
    const double peak = exponents.abs().maxCoeff();
    if (peak > cap) {
        std::ostringstream msg;
        msg << who << ": peak exponent " << peak << " exceeds the cap " << cap;
        throw std::runtime_error(msg.str());
    }
    return peak;
}

}  // namespace

void validate(const RectennaParams& p, bool require_capacitance) {
    if (!(p.r_s > 0.0) || !(p.r_l > 0.0) || !(p.i_0 > 0.0) || !(p.v_0 > 0.0) || !(p.eta > 0.0)) {
        throw std::invalid_argument("RectennaParams: circuit constants must be strictly positive");
    }
    if (require_capacitance && !(p.c > 0.0)) {
        throw std::invalid_argument("RectennaParams: capacitance must be set for transient simulation");
    }
}

std::size_t QuadratureSpec::samples_for(const FrequencyGrid& grid) const {
    std::size_t q = n_samples;
    if (q == 0) {
        q = static_cast<std::size_t>(std::ceil(rate_x_carrier * grid.carrier() / grid.delta_f));
    }
    if (q < 2) {
        throw std::invalid_argument("QuadratureSpec: need at least 2 samples per period");
    }
    return q;
}

double rectifier_rhs(const MultisineWaveform& w, const ChannelResponse& ch, const RectennaParams& p,
                     const QuadratureSpec& quad) {
    validate(p);
    const std::size_t q_count = quad.samples_for(w.grid);
    const ArrayXd y = sample_received(w, ch, q_count, 1);
    const ArrayXd e = (std::sqrt(p.r_s) / p.diode_scale()) * y;
    guarded_peak_exponent(e, quad.max_exponent, "rectifier_rhs");
    // sum exp(e - e_max) so the accumulator stays <= Q even at the cap
    const double e_max = e.maxCoeff();
    double acc = 0.0;
    for (Eigen::Index j = 0; j < e.size(); ++j) {
        acc += std::exp(e[j] - e_max);
    }
    return std::exp(e_max) * (acc / static_cast<double>(q_count));
}

DcOperatingPoint solve_dc(double rhs, const RectennaParams& p, double tol) {
    validate(p);
    if (!(tol > 0.0)) {
        throw std::invalid_argument("solve_dc: require tol > 0");
    }
    if (!(rhs >= 1.0)) {
        throw std::invalid_argument("solve_dc: rhs must be >= 1 (zero-mean input keeps the average above 1)");
    }
    const double ev = p.diode_scale();
    const double gl = p.r_l * p.i_0;
    const double log_rhs = std::log(rhs);

    DcOperatingPoint op;
    op.rhs_value = rhs;
    if (log_rhs == 0.0) {
        return op;  // v = 0 solves the equation exactly
    }

    // F(v) = v/ev + log1p(v/gl) - log(rhs); F is strictly increasing,
    // F(0) < 0 and F(ev log(rhs)) >= 0.
    const auto f = [&](double v) { return v / ev + std::log1p(v / gl) - log_rhs; };

    double lo = 0.0;
    double hi = ev * log_rhs;
    while (hi - lo > tol * ev) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Newton polish in the log domain until the residual of the original
    // equation, |lhs - rhs| / rhs = |expm1(F)|, drops below tol.
    double v = 0.5 * (lo + hi);
    double resid = std::abs(std::expm1(f(v)));
    for (int k = 0; k < 60 && resid > tol; ++k) {
        const double fv = f(v);
        const double dfv = 1.0 / ev + 1.0 / (gl + v);
        double next = v - fv / dfv;
        if (!(next > lo) || !(next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (f(next) < 0.0) {
            lo = next;
        } else {
            hi = next;
        }
        v = next;
        resid = std::abs(std::expm1(f(v)));
    }

    op.v_out = v;
    op.p_out = v * v / p.r_l;
    op.bisection_residual = resid;
    return op;
}

DcOperatingPoint harvested_power(const MultisineWaveform& w, const ChannelResponse& ch,
                                 const RectennaParams& p, const QuadratureSpec& quad, double tol) {
    return solve_dc(rectifier_rhs(w, ch, p, quad), p, tol);
}

double taylor_rhs(const MultisineWaveform& w, const ChannelResponse& ch, const RectennaParams& p,
                  std::size_t order, const QuadratureSpec& quad) {
    validate(p);
    const std::size_t q_count = quad.samples_for(w.grid);
    const ArrayXd y = sample_received(w, ch, q_count, 1);
    const double c = std::sqrt(p.r_s) / p.diode_scale();
    double acc = 0.0;
    for (Eigen::Index j = 0; j < y.size(); ++j) {
        const double cy = c * y[j];
        double term = 1.0;
        double sum = 1.0;
        for (std::size_t k = 1; k <= order; ++k) {
            term *= cy / static_cast<double>(k);
            sum += term;
        }
        acc += sum;
    }
    return acc / static_cast<double>(q_count);
}

TransientResult simulate_transient(const MultisineWaveform& w, const ChannelResponse& ch,
                                   const RectennaParams& p, double step, std::size_t n_periods) {
    validate(p, /*require_capacitance=*/true);
    if (!(step > 0.0)) {
        throw std::invalid_argument("simulate_transient: require step > 0");
    }
    if (n_periods < 20) {
        throw std::invalid_argument("simulate_transient: need at least 20 periods for the steady-state windows");
    }
    const double T = w.grid.period();
    const auto steps_per_period = static_cast<std::size_t>(std::llround(T / step));
    if (steps_per_period < 1000) {
        throw std::invalid_argument("simulate_transient: step too coarse; need at least 1000 steps per period");
    }
    const double h = T / static_cast<double>(steps_per_period);
    const double ev = p.diode_scale();

    // v_in at half-step resolution over one period; the signal is periodic so
    // the table covers the whole run
    const std::size_t table_size = 2 * steps_per_period;
    const ArrayXd v_in = std::sqrt(p.r_s) * sample_received(w, ch, table_size, 0);

    const double v_in_max = v_in.maxCoeff();
    if (v_in_max / ev > 700.0) {
        std::ostringstream msg;
        msg << "simulate_transient: peak forward bias " << v_in_max / ev << " overflows the diode exponential";
        throw std::runtime_error(msg.str());
    }
    // Explicit RK4 is stable for h * |df/dv| up to about 2.785 on the real
    // axis; the Jacobian is largest at v = 0 under peak forward bias.
    const double lambda_max = (p.i_0 * std::exp(v_in_max / ev) / ev + 1.0 / p.r_l) / p.c;
    if (h * lambda_max > 2.5) {
        std::ostringstream msg;
        msg << "simulate_transient: step fails the stability bound, h*lambda = " << h * lambda_max
            << " > 2.5; reduce the step or the peak input";
        throw std::runtime_error(msg.str());
    }

    const auto dv = [&](double v, double vin) {
        return (p.i_0 * std::expm1((vin - v) / ev) - v / p.r_l) / p.c;
    };

    const std::size_t total_steps = n_periods * steps_per_period;
    const std::size_t window = 10 * steps_per_period;
    const std::size_t record_start = total_steps - window;
    const std::size_t mean1_start = total_steps - 2 * window;

    TransientResult result;
    result.time.reserve(window + 1);
    result.v_out.reserve(window + 1);

    double v = 0.0;
    double acc1 = 0.0;
    double acc2 = 0.0;
    for (std::size_t i = 0; i < total_steps; ++i) {
        if (i >= record_start) {
            result.time.push_back(static_cast<double>(i) * h);
            result.v_out.push_back(v);
            acc2 += v;
        } else if (i >= mean1_start) {
            acc1 += v;
        }
        const std::size_t j = (2 * i) % table_size;
        const double vin0 = v_in[static_cast<Eigen::Index>(j)];
        const double vin1 = v_in[static_cast<Eigen::Index>((j + 1) % table_size)];
        const double vin2 = v_in[static_cast<Eigen::Index>((j + 2) % table_size)];
        const double k1 = dv(v, vin0);
        const double k2 = dv(v + 0.5 * h * k1, vin1);
        const double k3 = dv(v + 0.5 * h * k2, vin1);
        const double k4 = dv(v + h * k3, vin2);
        v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    result.time.push_back(static_cast<double>(total_steps) * h);
    result.v_out.push_back(v);

    const double mean1 = acc1 / static_cast<double>(window);
    const double mean2 = acc2 / static_cast<double>(window);
    const double scale = std::max(std::abs(mean2), 1e-300);
    if (std::abs(mean2 - mean1) / scale > 0.01) {
        std::ostringstream msg;
        msg << "simulate_transient: not steady after " << n_periods << " periods; last two window means "
            << mean1 << " and " << mean2 << " differ by more than 1%";
        throw std::runtime_error(msg.str());
    }

    result.steady_mean = mean2;
    double v_min = result.v_out[0];
    double v_max = result.v_out[0];
    for (double value : result.v_out) {
        v_min = std::min(v_min, value);
        v_max = std::max(v_max, value);
    }
    result.ripple_fraction = v_max > 0.0 ? (v_max - v_min) / v_max : 0.0;
    return result;
}

}  // namespace wptwave
