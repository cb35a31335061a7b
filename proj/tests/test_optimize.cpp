#include "wptwave/channel.hpp"
#include "wptwave/optimize.hpp"
#include "wptwave/rectenna.hpp"
#include "wptwave/rng.hpp"
#include "wptwave/signal.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace wptwave;

namespace {

constexpr double kPi = std::numbers::pi;

ChannelResponse response_with(std::initializer_list<double> gains,
                              std::initializer_list<double> phases = {}) {
    ChannelResponse resp;
    resp.grid = build_grid(19e3, 21e3, gains.size());
    resp.h = ArrayXd(static_cast<Eigen::Index>(gains.size()));
    Eigen::Index i = 0;
    for (double g : gains) resp.h[i++] = g;
    resp.psi = ArrayXd::Zero(resp.h.size());
    i = 0;
    for (double p : phases) resp.psi[i++] = p;
    return resp;
}

ChannelResponse toy_flat() {
    return frequency_response(make_channel({{7e-3, 0.0, 0.0}}), build_grid(19e3, 21e3, 4));
}

ChannelResponse toy_selective(std::uint64_t seed) {
    return frequency_response(generate_channel(seed, 18, 51.67, 1.5e-3), build_grid(19e3, 21e3, 4));
}

}  // namespace

TEST_SUITE("optimize") {

TEST_CASE("phase alignment") {
    const auto zero = response_with({1.0, 1.0, 1.0});
    CHECK((align_phases(zero) == 0.0).all());

    const auto resp = response_with({1.0, 1.0}, {kPi / 3.0, kPi / 3.0});
    const ArrayXd phi = align_phases(resp);
    CHECK(phi[0] == doctest::Approx(5.0 * kPi / 3.0).epsilon(1e-14));
    CHECK(phi[1] == doctest::Approx(5.0 * kPi / 3.0).epsilon(1e-14));
}

TEST_CASE("aligned phases dominate random ones") {
    // strong two-tap channel so the averages separate well above rounding
    const auto resp = frequency_response(
        make_channel({{0.6, 1.1e-5, 0.7}, {0.4, 2.9e-5, 4.1}}), build_grid(19e3, 21e3, 4));
    const RectennaParams p;
    const QuadratureSpec quad = QuadratureSpec::algorithm();
    UniformRng rng(41);
    ArrayXd s(4);
    // small amplitudes keep the peak exponent of this near-unity channel under the cap
    for (Eigen::Index i = 0; i < 4; ++i) s[i] = 0.02 * rng.next();
    const double aligned =
        rectifier_rhs(make_waveform(resp.grid, s, align_phases(resp)), resp, p, quad);
    for (int trial = 0; trial < 100; ++trial) {
        ArrayXd phi(4);
        for (Eigen::Index i = 0; i < 4; ++i) phi[i] = rng.next(0.0, 2.0 * kPi);
        const double shuffled =
            rectifier_rhs(make_waveform(resp.grid, s, phi), resp, p, quad);
        CHECK(aligned >= shuffled * (1.0 - 1e-12));
    }
}

TEST_CASE("single tone picks the strongest gain") {
    const auto resp = response_with({1.0, 3.0, 2.0});
    const auto w = single_tone(resp, 4.0);
    CHECK(w.amplitudes[0] == 0.0);
    CHECK(w.amplitudes[1] == 2.0);
    CHECK(w.amplitudes[2] == 0.0);
}

TEST_CASE("single tone breaks ties toward the lowest index") {
    const auto resp = response_with({2.0, 2.0, 2.0, 2.0});
    const auto w = single_tone(resp, 9.0);
    CHECK(w.amplitudes[0] == 3.0);
    CHECK(w.amplitudes.tail(3).maxCoeff() == 0.0);
}

TEST_CASE("single tone argmax ignores a channel-wide rescale") {
    const auto base = response_with({0.5, 1.5, 0.9, 1.2});
    auto scaled = base;
    scaled.h *= 7.25;
    const auto a = single_tone(base, 1.0);
    const auto b = single_tone(scaled, 1.0);
    for (Eigen::Index i = 0; i < 4; ++i) CHECK((a.amplitudes[i] > 0.0) == (b.amplitudes[i] > 0.0));
}

TEST_CASE("mrt closed form") {
    const auto a = frequency_mrt(response_with({1.0, 0.0}), 9.0);
    CHECK(a.amplitudes[0] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(a.amplitudes[1] == 0.0);

    const auto b = frequency_mrt(response_with({1.0, 2.0, 2.0}), 9.0);
    CHECK(b.amplitudes[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b.amplitudes[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(b.amplitudes[2] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("mrt on a flat channel splits power equally") {
    const auto w = frequency_mrt(toy_flat(), 1.0);
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(w.amplitudes[i] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(transmit_power(w) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mrt spends the power budget exactly") {
    const auto resp = toy_selective(3);
    for (double p_t : {0.5, 2.0, 10.0}) {
        CHECK(transmit_power(frequency_mrt(resp, p_t)) == doctest::Approx(p_t).epsilon(1e-12));
    }
}

TEST_CASE("mrt allocation ignores a channel-wide rescale") {
    const auto base = response_with({0.5, 1.5, 0.9, 1.2});
    auto doubled = base;
    doubled.h *= 2.0;  // power-of-two scale: the normalization cancels exactly
    const auto a = frequency_mrt(base, 4.0);
    const auto b = frequency_mrt(doubled, 4.0);
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(a.amplitudes[i] == b.amplitudes[i]);

    auto tripled = base;
    tripled.h *= 3.0;
    const auto c = frequency_mrt(tripled, 4.0);
    for (Eigen::Index i = 0; i < 4; ++i) {
        CHECK(c.amplitudes[i] == doctest::Approx(a.amplitudes[i]).epsilon(1e-14));
    }
}

TEST_CASE("mrt rejects a dead channel") {
    CHECK_THROWS_AS(frequency_mrt(response_with({0.0, 0.0, 0.0}), 1.0), std::invalid_argument);
}

TEST_CASE("equal power split") {
    const auto w = equal_power(toy_flat(), 1.0);
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(w.amplitudes[i] == 0.5);
}

TEST_CASE("linearization at zero amplitude") {
    const auto [beta0, betas] =
        scp_coefficients(ArrayXd::Zero(4), toy_flat(), RectennaParams{}, QuadratureSpec::algorithm());
    CHECK(beta0 == 1.0);
    CHECK(betas.abs().maxCoeff() <= 1e-12);
}

TEST_CASE("linearization equals the rectifier average under aligned phases") {
    const auto resp = toy_selective(5);
    const RectennaParams p;
    const QuadratureSpec quad = QuadratureSpec::algorithm();
    UniformRng rng(43);
    ArrayXd s(4);
    for (Eigen::Index i = 0; i < 4; ++i) s[i] = rng.next();
    const auto [beta0, betas] = scp_coefficients(s, resp, p, quad);
    const double rhs = rectifier_rhs(make_waveform(resp.grid, s, align_phases(resp)), resp, p, quad);
    CHECK(beta0 == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("linearization coefficients are the sampled gradient") {
    const RectennaParams p;
    const QuadratureSpec quad = QuadratureSpec::algorithm();
    const double delta = 1e-6;
    UniformRng rng(47);
    for (const auto& resp : {toy_flat(), toy_selective(2), toy_selective(6)}) {
        ArrayXd s(4);
        for (Eigen::Index i = 0; i < 4; ++i) s[i] = rng.next();
        s *= std::sqrt(1.0 / s.square().sum());
        const auto [beta0, betas] = scp_coefficients(s, resp, p, quad);
        for (Eigen::Index n = 0; n < 4; ++n) {
            ArrayXd up = s, down = s;
            up[n] += delta;
            down[n] -= delta;
            const double fd = (scp_coefficients(up, resp, p, quad).first -
                               scp_coefficients(down, resp, p, quad).first) /
                              (2.0 * delta);
            CHECK(std::abs(betas[n] - fd) <= 1e-5);
        }
    }
}

TEST_CASE("linearization input validation") {
    CHECK_THROWS_AS(
        scp_coefficients(ArrayXd::Zero(3), toy_flat(), RectennaParams{}, QuadratureSpec::algorithm()),
        std::invalid_argument);
    ArrayXd s = ArrayXd::Zero(4);
    s[1] = -0.2;
    CHECK_THROWS_AS(scp_coefficients(s, toy_flat(), RectennaParams{}, QuadratureSpec::algorithm()),
                    std::invalid_argument);
}

TEST_CASE("qclp step closed form") {
    ArrayXd b1(2);
    b1 << 3.0, 4.0;
    const ArrayXd s1 = qclp_step(b1, 25.0);
    CHECK(s1[0] == 3.0);
    CHECK(s1[1] == 4.0);

    ArrayXd b2(3);
    b2 << 1.0, 0.0, 0.0;
    const ArrayXd s2 = qclp_step(b2, 4.0);
    CHECK(s2[0] == 2.0);
    CHECK(s2[1] == 0.0);
    CHECK(s2[2] == 0.0);
}

TEST_CASE("qclp step clamps negative coefficients") {
    ArrayXd b(2);
    b << -1.0, 2.0;
    const ArrayXd s = qclp_step(b, 4.0);
    CHECK(s[0] == 0.0);
    CHECK(s[1] == doctest::Approx(2.0).epsilon(1e-15));

    ArrayXd dead(2);
    dead << -1.0, 0.0;
    CHECK_THROWS_AS(qclp_step(dead, 4.0), std::runtime_error);
}

TEST_CASE("qclp step maximizes the linear objective on the quarter disk") {
    UniformRng rng(53);
    for (int trial = 0; trial < 5; ++trial) {
        ArrayXd b(2);
        b << rng.next(0.1, 2.0), rng.next(0.1, 2.0);
        const double p_t = 25.0;
        const ArrayXd s = qclp_step(b, p_t);
        CHECK(s.square().sum() == doctest::Approx(p_t).epsilon(1e-12));
        const double closed = (b * s).sum();

        const double radius = std::sqrt(p_t);
        double grid_best = 0.0;
        const int levels = 2000;
        for (int i = 0; i < levels; ++i) {
            for (int j = 0; j < levels; ++j) {
                const double s1 = radius * i / (levels - 1.0);
                const double s2 = radius * j / (levels - 1.0);
                if (s1 * s1 + s2 * s2 > p_t * (1.0 + 1e-12)) continue;
                grid_best = std::max(grid_best, b[0] * s1 + b[1] * s2);
            }
        }
        CHECK(closed >= grid_best * (1.0 - 1e-12));
        // one grid cell of slack at this resolution
        const double cell = radius / (levels - 1.0);
        CHECK(closed - grid_best <= (b[0] + b[1]) * cell);
    }
}

TEST_CASE("scp preserves flat-channel mirror symmetry") {
    // A flat channel is symmetric under reflecting the tone index, so every
    // iterate must be palindromic. Interior tones take part in more
    // intermodulation products than edge tones, so the coefficients are not
    // all equal and the optimizer shifts power toward the middle of the band.
    const auto trace = scp_qclp(toy_flat(), RectennaParams{}, 1.0, ScpConfig{});
    CHECK(trace.converged);
    CHECK(trace.iterations.size() <= 5);
    for (const auto& it : trace.iterations) {
        const auto n = it.s.size();
        for (Eigen::Index i = 0; i < n / 2; ++i) {
            CHECK(it.s[i] == doctest::Approx(it.s[n - 1 - i]).epsilon(1e-9));
            CHECK(it.betas[i] == doctest::Approx(it.betas[n - 1 - i]).epsilon(1e-9));
        }
    }
    const ArrayXd final_s = trace.last().s;
    CHECK(final_s[1] > final_s[0]);
    CHECK(final_s[2] > final_s[3]);

    // with two tones the mirror pairs coincide, so the iterates stay equal
    const auto resp2 = frequency_response(make_channel({{7e-3, 0.0, 0.0}}),
                                          build_grid(19e3, 21e3, 2));
    const auto trace2 = scp_qclp(resp2, RectennaParams{}, 1.0, ScpConfig{});
    CHECK(trace2.converged);
    for (const auto& it : trace2.iterations) {
        CHECK(it.s[0] == doctest::Approx(it.s[1]).epsilon(1e-9));
    }
}

TEST_CASE("scp trace bookkeeping") {
    const auto trace = scp_qclp(toy_selective(4), RectennaParams{}, 2.0, ScpConfig{});
    REQUIRE(!trace.iterations.empty());
    CHECK(trace.iterations.front().m == 1);
    CHECK(std::isnan(trace.iterations.front().delta));
    for (std::size_t k = 0; k < trace.iterations.size(); ++k) {
        CHECK(trace.iterations[k].m == k + 1);
        if (k > 0) CHECK(!std::isnan(trace.iterations[k].delta));
    }
    CHECK((trace.final_waveform.amplitudes == trace.last().s).all());
    const ArrayXd aligned = align_phases(toy_selective(4));
    CHECK((trace.final_waveform.phases == aligned).all());
}

TEST_CASE("scp ascends and stays feasible on random channels") {
    const RectennaParams p;
    ScpConfig cfg;
    cfg.epsilon = 0.0;  // run to a fixed point or the cap
    cfg.max_iters = 40;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto resp = toy_selective(seed);
        const double p_t = 5.0;
        const auto trace = scp_qclp(resp, p, p_t, cfg);
        for (std::size_t k = 0; k < trace.iterations.size(); ++k) {
            CHECK(trace.iterations[k].s.square().sum() <= p_t * (1.0 + 1e-12));
            if (k > 0) {
                CHECK(trace.iterations[k].beta0 >=
                      trace.iterations[k - 1].beta0 * (1.0 - 1e-9));
            }
        }
        CHECK(trace.last().beta0 >= trace.iterations.front().beta0 * (1.0 - 1e-9));
        CHECK(trace.last().s.square().sum() == doctest::Approx(p_t).epsilon(1e-12));
    }
}

TEST_CASE("scp at zero power returns the trivial point") {
    const auto trace = scp_qclp(toy_selective(4), RectennaParams{}, 0.0, ScpConfig{});
    CHECK(trace.converged);
    CHECK(trace.iterations.size() == 1);
    CHECK(trace.last().beta0 == 1.0);
    CHECK(trace.last().s.maxCoeff() == 0.0);
}

TEST_CASE("scp input validation") {
    ScpConfig bad;
    bad.max_iters = 0;
    CHECK_THROWS_AS(scp_qclp(toy_flat(), RectennaParams{}, 1.0, bad), std::invalid_argument);
    CHECK_THROWS_AS(scp_qclp(toy_flat(), RectennaParams{}, -1.0, ScpConfig{}), std::invalid_argument);
}

TEST_CASE("kkt spread") {
    ArrayXd s(3), b(3);
    s << 0.0, 2.0, 0.0;
    b << 0.4, 1.0, 0.1;
    CHECK(kkt_spread(s, b) == 0.0);  // a single active tone is trivially stationary

    s << 1.0, 1.0, 0.0;
    b << 1.0, 1.001, 0.3;
    CHECK(kkt_spread(s, b) == doctest::Approx(0.001 / 1.0005).epsilon(1e-12));

    s << 1.0, 2.0, 4.0;
    b = 0.7 * s;
    CHECK(kkt_spread(s, b) <= 1e-15);
}

TEST_CASE("full-scale ordering on the pinned realization") {
    const auto resp = frequency_response(generate_channel(1, 18, 51.67, 0.3e-6),
                                         build_grid(910e6, 920e6, 16));
    const RectennaParams p;
    const QuadratureSpec eval = QuadratureSpec::evaluation();
    const double p_t = 10.0;
    const auto trace = scp_qclp(resp, p, p_t, ScpConfig{});
    CHECK(trace.converged);
    const double p_scp = harvested_power(trace.final_waveform, resp, p, eval).p_out;
    const double p_mrt = harvested_power(frequency_mrt(resp, p_t), resp, p, eval).p_out;
    const double p_st = harvested_power(single_tone(resp, p_t), resp, p, eval).p_out;
    CHECK(p_scp >= p_mrt * (1.0 - 1e-9));
    CHECK(p_mrt > p_st);
    CHECK(p_st == doctest::Approx(5.66219609298e-07).epsilon(1e-9));
}

}
