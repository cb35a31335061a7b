#include "wptwave/io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace wptwave;

namespace {

std::string artifact_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

std::ofstream open_artifact(const std::string& dir, const std::string& name) {
    const std::string path = artifact_path(dir, name);
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot write " + path);
    }
    return os;
}

std::string papr_text(double papr) {
    if (std::isnan(papr)) {
        return "undefined (zero-amplitude waveform)";
    }
    return format_number(papr);
}

void print_grid(const ExperimentConfig& cfg) {
    const FrequencyGrid g = build_grid(cfg.system.f_min, cfg.system.f_max, cfg.system.n_tones);
    std::printf("n_tones=%zu delta_f_hz=%s f0_hz=%s period_s=%s\n", g.n_tones,
                format_number(g.delta_f).c_str(), format_number(g.f0).c_str(),
                format_number(g.period()).c_str());
    for (std::size_t n = 0; n < g.n_tones; ++n) {
        std::printf("tone %zu: f_hz=%s harmonic=%zu\n", n, format_number(g.frequency(n)).c_str(),
                    g.harmonic_index(n));
    }
}

void write_channel_json(const ExperimentConfig& cfg) {
    auto os = open_artifact(cfg.output_dir, "channel.json");
    os << to_json(cfg.channel.realize()).dump(2) << '\n';
    std::printf("wrote %s\n", artifact_path(cfg.output_dir, "channel.json").c_str());
}

ChannelResponse response_for(const ExperimentConfig& cfg) {
    const FrequencyGrid g = build_grid(cfg.system.f_min, cfg.system.f_max, cfg.system.n_tones);
    return frequency_response(cfg.channel.realize(), g);
}

void write_response(const ExperimentConfig& cfg) {
    auto os = open_artifact(cfg.output_dir, "response.csv");
    write_response_csv(os, response_for(cfg));
    std::printf("wrote %s\n", artifact_path(cfg.output_dir, "response.csv").c_str());
}

void write_waveform_report(const ExperimentConfig& cfg, const ChannelResponse& resp,
                           const std::string& method, const WaveformReport& report) {
    const std::string amp_name = "waveform_" + method + "_amplitudes.csv";
    auto amp = open_artifact(cfg.output_dir, amp_name);
    write_amplitudes_csv(amp, report.waveform);

    const std::string sig_name = "waveform_" + method + "_signal.csv";
    auto sig = open_artifact(cfg.output_dir, sig_name);
    write_signal_csv(sig, report.waveform, QuadratureSpec::evaluation().samples_for(resp.grid));

    std::printf("%s: v_out_v=%s p_out_w=%s iterations=%zu papr=%s\n", method.c_str(),
                format_number(report.dc.v_out).c_str(), format_number(report.dc.p_out).c_str(),
                report.iterations, papr_text(report.papr).c_str());
    std::printf("wrote %s\n", artifact_path(cfg.output_dir, amp_name).c_str());
    std::printf("wrote %s\n", artifact_path(cfg.output_dir, sig_name).c_str());
}

void run_optimize(const ExperimentConfig& cfg, const std::string& method, double p_t) {
    const ChannelResponse resp = response_for(cfg);
    const WaveformReport report = design_waveform(resp, cfg.rectenna, cfg.scp, method, p_t);
    write_waveform_report(cfg, resp, method, report);
    if (method == "scp_qclp") {
        const ScpTrace trace = scp_qclp(resp, cfg.rectenna, p_t, cfg.scp);
        auto csv = open_artifact(cfg.output_dir, "scp_trace.csv");
        write_trace_csv(csv, trace);
        auto js = open_artifact(cfg.output_dir, "scp_trace.json");
        js << to_json(trace).dump(2) << '\n';
        std::printf("wrote %s\n", artifact_path(cfg.output_dir, "scp_trace.csv").c_str());
        std::printf("wrote %s\n", artifact_path(cfg.output_dir, "scp_trace.json").c_str());
    }
}

void run_waveform_reports(const ExperimentConfig& cfg, double p_t) {
    const ChannelResponse resp = response_for(cfg);
    for (const std::string& method : cfg.methods) {
        write_waveform_report(cfg, resp, method,
                              design_waveform(resp, cfg.rectenna, cfg.scp, method, p_t));
    }
}

void run_sweep(ExperimentConfig cfg, bool tones, double p_t, std::size_t workers) {
    const char* variable = tones ? "n_tones" : "p_t";
    if (cfg.sweep.variable != variable) {
        // the configured values belong to the other sweep; fall back to defaults
        cfg.sweep.variable = variable;
        cfg.sweep.values = tones ? std::vector<double>{1.0, 2.0, 4.0, 8.0, 16.0, 32.0}
                                 : SweepSpec{}.values;
    }
    const std::vector<SweepRow> rows = tones ? run_tone_sweep(cfg, p_t, workers)
                                             : run_power_sweep(cfg, workers);
    const std::string name = tones ? "sweep_tones.csv" : "sweep_power.csv";
    auto os = open_artifact(cfg.output_dir, name);
    write_sweep_csv(os, rows, tones ? "n_tones" : "p_t_w");
    std::printf("wrote %s (%zu rows)\n", artifact_path(cfg.output_dir, name).c_str(), rows.size());
}

void run_ripple(const ExperimentConfig& cfg, const std::vector<double>& multipliers, double p_t) {
    const std::vector<RippleRow> rows = run_ripple_check(cfg, multipliers, p_t);
    auto os = open_artifact(cfg.output_dir, "ripple.csv");
    write_ripple_csv(os, rows);
    std::printf("wrote %s (%zu rows)\n", artifact_path(cfg.output_dir, "ripple.csv").c_str(),
                rows.size());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multisine waveform design and rectenna experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool fast = false;
    std::size_t workers = 1;
    app.add_option("--config", config_path, "JSON config overlaying the defaults");
    CLI::Option* seed_opt =
        app.add_option("--seed", seed, "channel realization seed (overrides the config)");
    app.add_option("--out", out_dir, "output directory (overrides the config)");
    app.add_flag("--fast", fast, "low-frequency profile (20 kHz carrier) for quick runs");
    app.add_option("--workers", workers, "concurrent sweep workers")->default_val(1);

    CLI::App* grid_cmd = app.add_subcommand("grid", "print the frequency grid");

    CLI::App* channel_cmd = app.add_subcommand("channel", "channel artifacts");
    channel_cmd->require_subcommand(1);
    CLI::App* channel_gen = channel_cmd->add_subcommand("gen", "write channel.json");
    CLI::App* channel_resp =
        channel_cmd->add_subcommand("response", "write the per-tone response.csv");

    CLI::App* optimize_cmd =
        app.add_subcommand("optimize", "design a waveform with one method and report it");
    std::string method;
    optimize_cmd->add_option("method", method, "single_tone | mrt | scp_qclp | equal")->required();
    double optimize_pt = 10.0;
    optimize_cmd->add_option("--pt", optimize_pt, "transmit power budget, W")->default_val(10.0);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run an experiment sweep");
    sweep_cmd->require_subcommand(1);
    CLI::App* sweep_power = sweep_cmd->add_subcommand("power", "P_T sweep at the configured N");
    CLI::App* sweep_tones = sweep_cmd->add_subcommand("tones", "tone-count sweep at fixed P_T");
    double sweep_pt = 10.0;
    sweep_tones->add_option("--pt", sweep_pt, "transmit power budget, W")->default_val(10.0);

    CLI::App* waveform_cmd =
        app.add_subcommand("waveform", "amplitude and signal reports for every configured method");
    double waveform_pt = 10.0;
    waveform_cmd->add_option("--pt", waveform_pt, "transmit power budget, W")->default_val(10.0);

    CLI::App* ripple_cmd =
        app.add_subcommand("ripple", "transient ripple vs the capacitance multiplier");
    std::vector<double> multipliers{50.0, 100.0};
    ripple_cmd->add_option("--multipliers", multipliers, "values of C R_L / T")
        ->default_val(std::vector<double>{50.0, 100.0});
    double ripple_pt = 1.0;
    ripple_cmd->add_option("--pt", ripple_pt, "transmit power budget, W")->default_val(1.0);

    // let global flags appear after the subcommand as well
    for (CLI::App* sub : {grid_cmd, channel_cmd, channel_gen, channel_resp, optimize_cmd,
                          sweep_cmd, sweep_power, sweep_tones, waveform_cmd, ripple_cmd}) {
        sub->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg = make_default_config(fast);
        if (!config_path.empty()) {
            std::ifstream is(config_path, std::ios::binary);
            if (!is) {
                throw std::invalid_argument("cannot read config: " + config_path);
            }
            cfg = config_from_json(json::parse(is), cfg);
        }
        if (seed_opt->count() > 0) {
            cfg.channel.use_taps = false;
            cfg.channel.seed = seed;
        }
        if (!out_dir.empty()) {
            cfg.output_dir = out_dir;
        }

        if (grid_cmd->parsed()) {
            print_grid(cfg);
        } else if (channel_gen->parsed()) {
            write_channel_json(cfg);
        } else if (channel_resp->parsed()) {
            write_response(cfg);
        } else if (optimize_cmd->parsed()) {
            run_optimize(cfg, method, optimize_pt);
        } else if (sweep_power->parsed()) {
            run_sweep(cfg, false, 0.0, workers);
        } else if (sweep_tones->parsed()) {
            run_sweep(cfg, true, sweep_pt, workers);
        } else if (waveform_cmd->parsed()) {
            run_waveform_reports(cfg, waveform_pt);
        } else if (ripple_cmd->parsed()) {
            run_ripple(cfg, multipliers, ripple_pt);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
