#pragma once

#include "wptwave/channel.hpp"
#include "wptwave/signal.hpp"

#include <cstddef>
#include <vector>

namespace wptwave {

// Circuit constants of the diode rectifier with low-pass filter. c is used
// only by the transient simulator; a common choice is c = 50 T / r_l, which
// keeps the output ripple near 2%.
struct RectennaParams {
    double r_s = 50.0;     // antenna/source resistance, ohm
    double r_l = 1600.0;   // load resistance, ohm
    double i_0 = 5e-6;     // diode saturation current, A
    double v_0 = 0.02586;  // thermal voltage, V
    double eta = 1.05;     // diode ideality factor
    double c = 0.0;        // LPF capacitance, F (set before transient use)

    double diode_scale() const { return eta * v_0; }
};

void validate(const RectennaParams& p, bool require_capacitance = false);

// Periodic time averages are computed as the plain mean of Q samples at
// t = q T / Q, q = 1..Q (the trapezoidal rule on a periodic integrand).
// Sample counts derive from a sampling rate expressed as a multiple of the
// carrier f_c = (f_min + f_max)/2: Q = ceil(rate_x_carrier * f_c / delta_f).
// A nonzero n_samples overrides the rate rule.
struct QuadratureSpec {
    double rate_x_carrier = 20.0;
    std::size_t n_samples = 0;
    double max_exponent = 700.0;

    std::size_t samples_for(const FrequencyGrid& grid) const;

    static QuadratureSpec algorithm() { return QuadratureSpec{20.0, 0, 700.0}; }
    static QuadratureSpec evaluation() { return QuadratureSpec{100.0, 0, 700.0}; }
};

struct DcOperatingPoint {
    double v_out = 0.0;              // DC output voltage, V
    double p_out = 0.0;              // DC power v_out^2 / r_l, W
    double rhs_value = 0.0;          // time-averaged exponential driving term
    double bisection_residual = 0.0; // |lhs(v_out) - rhs| / rhs at the returned root
};

// (1/T) int_T exp(sqrt(r_s) y(t) / (eta v_0)) dt for the received signal of
// (w, ch). Throws if the peak exponent exceeds quad.max_exponent.
double rectifier_rhs(const MultisineWaveform& w, const ChannelResponse& ch, const RectennaParams& p,
                     const QuadratureSpec& quad);

// Root of exp(v/(eta v_0)) (1 + v/(r_l i_0)) = rhs. The left side is strictly
// increasing, so the root is unique; it is bracketed by [0, eta v_0 ln(rhs)]
// and found by bisection, then polished to |lhs - rhs| <= tol * rhs. Both
// sides are handled in log form so rhs values up to exp(max_exponent) are fine.
DcOperatingPoint solve_dc(double rhs, const RectennaParams& p, double tol = 1e-10);

DcOperatingPoint harvested_power(const MultisineWaveform& w, const ChannelResponse& ch,
                                 const RectennaParams& p, const QuadratureSpec& quad,
                                 double tol = 1e-10);

// Truncated-Taylor counterpart of rectifier_rhs:
// (1/T) int_T sum_{k=0}^{order} (c_k / k!) y(t)^k dt with c_k = (sqrt(r_s)/(eta v_0))^k.
// Typical orders are 2, 4, 6; any order >= 0 is accepted (large orders
// converge to rectifier_rhs for small signals).
double taylor_rhs(const MultisineWaveform& w, const ChannelResponse& ch, const RectennaParams& p,
                  std::size_t order, const QuadratureSpec& quad);

struct TransientResult {
    // last 10 periods of the run, one entry per integration step
    std::vector<double> time;
    std::vector<double> v_out;
    double steady_mean = 0.0;
    double ripple_fraction = 0.0;  // (max - min) / max over the stored window
};

// Integrates C dv/dt = i_0 (exp((v_in(t) - v)/(eta v_0)) - 1) - v / r_l with
// v_in(t) = sqrt(r_s) y(t) and v(0) = 0 by the classical fixed-step
// fourth-order Runge-Kutta scheme. step is rounded to an integer number of
// steps per period. Throws if the step fails the forward-bias stability
// bound, and if the last two 10-period windows disagree by more than 1%
// (steady state not reached).
TransientResult simulate_transient(const MultisineWaveform& w, const ChannelResponse& ch,
                                   const RectennaParams& p, double step, std::size_t n_periods = 200);

}  // namespace wptwave
