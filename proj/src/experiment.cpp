#include "wptwave/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace wptwave {

MultipathChannel ChannelSpec::realize() const {
    if (use_taps) {
        return make_channel(taps);
    }
    return generate_channel(seed, n_taps, total_gain_db, delay_max_s);
}

bool ChannelSpec::operator==(const ChannelSpec& other) const {
    if (use_taps != other.use_taps) return false;
    if (use_taps) {
        if (taps.size() != other.taps.size()) return false;
        for (std::size_t i = 0; i < taps.size(); ++i) {
            if (taps[i].alpha != other.taps[i].alpha || taps[i].tau != other.taps[i].tau ||
                taps[i].xi != other.taps[i].xi) {
                return false;
            }
        }
        return true;
    }
    return seed == other.seed && n_taps == other.n_taps &&
           total_gain_db == other.total_gain_db && delay_max_s == other.delay_max_s;
}

bool ExperimentConfig::operator==(const ExperimentConfig& other) const {
    auto quad_equal = [](const QuadratureSpec& a, const QuadratureSpec& b) {
        return a.rate_x_carrier == b.rate_x_carrier && a.n_samples == b.n_samples &&
               a.max_exponent == b.max_exponent;
    };
    auto rect_equal = [](const RectennaParams& a, const RectennaParams& b) {
        return a.r_s == b.r_s && a.r_l == b.r_l && a.i_0 == b.i_0 && a.v_0 == b.v_0 &&
               a.eta == b.eta && a.c == b.c;
    };
    return system == other.system && rect_equal(rectenna, other.rectenna) &&
           channel == other.channel && sweep == other.sweep && methods == other.methods &&
           scp.epsilon == other.scp.epsilon && scp.max_iters == other.scp.max_iters &&
           quad_equal(scp.quad, other.scp.quad) && output_dir == other.output_dir;
}

ExperimentConfig make_default_config(bool fast) {
    ExperimentConfig cfg;
    if (fast) {
        cfg.system = SystemSpec{19e3, 21e3, 4};
        // keep delay_max * B = 3.0 as at full scale
        cfg.channel.delay_max_s = 1.5e-3;
    }
    return cfg;
}

WaveformReport design_waveform(const ChannelResponse& response, const RectennaParams& rectenna,
                               const ScpConfig& scp, const std::string& method, double p_t) {
    WaveformReport report;
    if (method == "single_tone") {
        report.waveform = single_tone(response, p_t);
    } else if (method == "mrt") {
        report.waveform = frequency_mrt(response, p_t);
    } else if (method == "equal") {
        report.waveform = equal_power(response, p_t);
    } else if (method == "scp_qclp") {
        ScpTrace trace = scp_qclp(response, rectenna, p_t, scp);
        report.waveform = trace.final_waveform;
        report.iterations = trace.iterations.size();
    } else {
        throw std::invalid_argument("unknown method: " + method);
    }
    report.dc = harvested_power(report.waveform, response, rectenna, QuadratureSpec::evaluation());
    const std::size_t samples = QuadratureSpec::evaluation().samples_for(response.grid);
    report.papr = transmit_power(report.waveform) > 0.0 ? papr(report.waveform, samples)
                                                        : std::numeric_limits<double>::quiet_NaN();
    return report;
}

namespace {

struct SweepTask {
    double value = 0.0;
    std::string method;
};

std::vector<SweepRow> run_sweep_tasks(const ExperimentConfig& cfg, bool tone_sweep,
                                      double tone_sweep_pt, std::size_t workers) {
    const MultipathChannel channel = cfg.channel.realize();

    std::vector<SweepTask> tasks;
    for (double value : cfg.sweep.values) {
        for (const auto& method : cfg.methods) {
            tasks.push_back({value, method});
        }
    }

    std::vector<SweepRow> rows(tasks.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            const SweepTask& task = tasks[i];
            SweepRow& row = rows[i];
            row.sweep_value = task.value;
            row.method = task.method;
            try {
                FrequencyGrid grid;
                double p_t;
                if (tone_sweep) {
                    const auto n = static_cast<std::size_t>(std::llround(task.value));
                    if (n < 1 || static_cast<double>(n) != task.value) {
                        throw std::invalid_argument("tone sweep values must be positive integers");
                    }
                    grid = build_grid(cfg.system.f_min, cfg.system.f_max, n);
                    p_t = tone_sweep_pt;
                } else {
                    grid = build_grid(cfg.system.f_min, cfg.system.f_max, cfg.system.n_tones);
                    p_t = task.value;
                }
                const ChannelResponse response = frequency_response(channel, grid);
                const WaveformReport report =
                    design_waveform(response, cfg.rectenna, cfg.scp, task.method, p_t);
                row.v_out = report.dc.v_out;
                row.p_out = report.dc.p_out;
                row.iterations = report.iterations;
                row.objective = report.dc.rhs_value;
            } catch (const std::exception& e) {
                row.error = e.what();
                row.v_out = std::numeric_limits<double>::quiet_NaN();
                row.p_out = std::numeric_limits<double>::quiet_NaN();
                row.objective = std::numeric_limits<double>::quiet_NaN();
            }
        }
    };

    const std::size_t n_threads = std::max<std::size_t>(1, std::min(workers, tasks.size()));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.sweep_value != b.sweep_value) return a.sweep_value < b.sweep_value;
        return a.method < b.method;
    });
    return rows;
}

}  // namespace

std::vector<SweepRow> run_power_sweep(const ExperimentConfig& cfg, std::size_t workers) {
    if (cfg.sweep.variable != "p_t") {
        throw std::invalid_argument("run_power_sweep: sweep variable must be p_t");
    }
    return run_sweep_tasks(cfg, /*tone_sweep=*/false, 0.0, workers);
}

std::vector<SweepRow> run_tone_sweep(const ExperimentConfig& cfg, double p_t, std::size_t workers) {
    if (cfg.sweep.variable != "n_tones") {
        throw std::invalid_argument("run_tone_sweep: sweep variable must be n_tones");
    }
    return run_sweep_tasks(cfg, /*tone_sweep=*/true, p_t, workers);
}

std::vector<RippleRow> run_ripple_check(const ExperimentConfig& cfg,
                                        const std::vector<double>& multipliers, double p_t) {
    const FrequencyGrid grid = build_grid(cfg.system.f_min, cfg.system.f_max, cfg.system.n_tones);
    const ChannelResponse response = frequency_response(cfg.channel.realize(), grid);
    const MultisineWaveform w = equal_power(response, p_t);
    const double T = grid.period();

    std::vector<RippleRow> rows;
    for (double k : multipliers) {
        RippleRow row;
        row.c_rl_over_t = k;
        try {
            RectennaParams p = cfg.rectenna;
            p.c = k * T / p.r_l;
            // the RC settling time grows with k, so scale the horizon with it
            const auto n_periods =
                std::max<std::size_t>(200, static_cast<std::size_t>(std::lround(4.0 * k)));
            const TransientResult tr = simulate_transient(w, response, p, T / 20000.0, n_periods);
            const DcOperatingPoint dc = harvested_power(w, response, p, QuadratureSpec::evaluation());
            row.ripple_fraction = tr.ripple_fraction;
            row.steady_mean = tr.steady_mean;
            row.v_out_bisection = dc.v_out;
            row.relative_gap = std::abs(tr.steady_mean - dc.v_out) / dc.v_out;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace wptwave
