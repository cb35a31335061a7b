#pragma once

#include "wptwave/channel.hpp"
#include "wptwave/optimize.hpp"
#include "wptwave/rectenna.hpp"
#include "wptwave/signal.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wptwave {

// Seed of the default channel realization used when none is configured.
inline constexpr std::uint64_t kDefaultSeed = 10;

struct SystemSpec {
    double f_min = 910e6;
    double f_max = 920e6;
    std::size_t n_tones = 16;

    bool operator==(const SystemSpec&) const = default;
};

// Either a seeded generated channel or explicit taps.
struct ChannelSpec {
    bool use_taps = false;
    std::uint64_t seed = kDefaultSeed;
    std::size_t n_taps = 18;
    double total_gain_db = 51.67;
    double delay_max_s = 0.3e-6;
    std::vector<MultipathTap> taps;

    MultipathChannel realize() const;
    bool operator==(const ChannelSpec&) const;
};

struct SweepSpec {
    std::string variable = "p_t";  // "p_t" or "n_tones"
    std::vector<double> values = {0.5, 1.0, 2.0, 5.0, 10.0, 20.0};

    bool operator==(const SweepSpec&) const = default;
};

struct ExperimentConfig {
    SystemSpec system;
    RectennaParams rectenna;
    ChannelSpec channel;
    SweepSpec sweep;
    std::vector<std::string> methods = {"single_tone", "mrt", "scp_qclp", "equal"};
    ScpConfig scp;
    std::string output_dir = "out";

    bool operator==(const ExperimentConfig&) const;
};

// Full-scale defaults, or the low-frequency profile (20 kHz carrier, 2 kHz
// band) when fast is set. The fast profile scales the delay spread so that
// delay_max * bandwidth stays at the full-scale value of 3.0, preserving the
// frequency selectivity of generated channels.
ExperimentConfig make_default_config(bool fast = false);

struct SweepRow {
    double sweep_value = 0.0;
    std::string method;
    double v_out = 0.0;
    double p_out = 0.0;
    std::size_t iterations = 0;
    double objective = 0.0;  // evaluation-grade rectifier average (the quantity optimized)
    std::string error;       // empty on success
};

// One row per (sweep value, method), sorted by value then method name.
// Failures are recorded in the error column, not thrown. The tone sweep
// rebuilds the grid for each N and designs at the fixed power p_t.
std::vector<SweepRow> run_power_sweep(const ExperimentConfig& cfg, std::size_t workers = 1);
std::vector<SweepRow> run_tone_sweep(const ExperimentConfig& cfg, double p_t = 10.0,
                                     std::size_t workers = 1);

struct WaveformReport {
    MultisineWaveform waveform;
    double papr = 0.0;
    std::size_t iterations = 0;
    DcOperatingPoint dc;
};

// Designs the waveform for one method at one (grid, P_T) point and evaluates
// it at evaluation-grade quadrature. method is one of single_tone, mrt,
// scp_qclp, equal.
WaveformReport design_waveform(const ChannelResponse& response, const RectennaParams& rectenna,
                               const ScpConfig& scp, const std::string& method, double p_t);

struct RippleRow {
    double c_rl_over_t = 0.0;
    double ripple_fraction = 0.0;
    double steady_mean = 0.0;
    double v_out_bisection = 0.0;
    double relative_gap = 0.0;
    std::string error;
};

// Transient-vs-steady-state comparison for each capacitance multiplier k,
// with C = k T / r_l, on the equal-power waveform at p_t. The simulated
// horizon is max(200, 4 k) periods since the RC settling time grows with k.
std::vector<RippleRow> run_ripple_check(const ExperimentConfig& cfg,
                                        const std::vector<double>& multipliers, double p_t);

}  // namespace wptwave
