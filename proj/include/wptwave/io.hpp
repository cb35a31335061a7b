#pragma once

#include "wptwave/channel.hpp"
#include "wptwave/experiment.hpp"
#include "wptwave/optimize.hpp"
#include "wptwave/rectenna.hpp"
#include "wptwave/signal.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace wptwave {

using nlohmann::json;

// Floating-point CSV cells use 12 significant digits; NaN prints as "nan".
std::string format_number(double value);

json to_json(const FrequencyGrid& grid);
FrequencyGrid grid_from_json(const json& j);

json to_json(const MultisineWaveform& w);
MultisineWaveform waveform_from_json(const json& j);

json to_json(const MultipathChannel& ch);
MultipathChannel channel_from_json(const json& j);

json to_json(const RectennaParams& p);
RectennaParams rectenna_from_json(const json& j, const RectennaParams& base = {});

json to_json(const ExperimentConfig& cfg);
// Reads present keys over the provided base config (missing keys keep base values).
ExperimentConfig config_from_json(const json& j, const ExperimentConfig& base = {});

json to_json(const ScpTrace& trace);

void write_response_csv(std::ostream& os, const ChannelResponse& response);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                     const std::string& value_column);
void write_trace_csv(std::ostream& os, const ScpTrace& trace);
void write_amplitudes_csv(std::ostream& os, const MultisineWaveform& w);
void write_signal_csv(std::ostream& os, const MultisineWaveform& w, std::size_t n_samples);
void write_ripple_csv(std::ostream& os, const std::vector<RippleRow>& rows);
void write_transient_csv(std::ostream& os, const TransientResult& result);

}  // namespace wptwave
