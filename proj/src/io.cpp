#include "wptwave/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace wptwave {

namespace {

ArrayXd array_from_json(const json& j) {
    ArrayXd a(static_cast<Eigen::Index>(j.size()));
    Eigen::Index i = 0;
    for (const auto& v : j) a[i++] = v.get<double>();
    return a;
}

json array_to_json(const ArrayXd& a) {
    json j = json::array();
    for (Eigen::Index i = 0; i < a.size(); ++i) j.push_back(a[i]);
    return j;
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

json to_json(const FrequencyGrid& grid) {
    return json{{"f_min", grid.f_min}, {"f_max", grid.f_max}, {"n_tones", grid.n_tones}};
}

FrequencyGrid grid_from_json(const json& j) {
    return build_grid(j.at("f_min").get<double>(), j.at("f_max").get<double>(),
                      j.at("n_tones").get<std::size_t>());
}

json to_json(const MultisineWaveform& w) {
    return json{{"grid", to_json(w.grid)},
                {"amplitudes", array_to_json(w.amplitudes)},
                {"phases", array_to_json(w.phases)}};
}

MultisineWaveform waveform_from_json(const json& j) {
    return make_waveform(grid_from_json(j.at("grid")), array_from_json(j.at("amplitudes")),
                         array_from_json(j.at("phases")));
}

json to_json(const MultipathChannel& ch) {
    json taps = json::array();
    for (const auto& tap : ch.taps) {
        taps.push_back({{"alpha", tap.alpha}, {"tau_s", tap.tau}, {"xi_rad", tap.xi}});
    }
    return json{{"taps", std::move(taps)}};
}

MultipathChannel channel_from_json(const json& j) {
    std::vector<MultipathTap> taps;
    for (const auto& t : j.at("taps")) {
        taps.push_back({t.at("alpha").get<double>(), t.at("tau_s").get<double>(),
                        t.at("xi_rad").get<double>()});
    }
    return make_channel(std::move(taps));
}

json to_json(const RectennaParams& p) {
    return json{{"r_s_ohm", p.r_s}, {"r_l_ohm", p.r_l}, {"i_0_a", p.i_0},
                {"v_0_v", p.v_0},   {"eta", p.eta},     {"c_f", p.c}};
}

RectennaParams rectenna_from_json(const json& j, const RectennaParams& base) {
    RectennaParams p = base;
    p.r_s = j.value("r_s_ohm", p.r_s);
    p.r_l = j.value("r_l_ohm", p.r_l);
    p.i_0 = j.value("i_0_a", p.i_0);
    p.v_0 = j.value("v_0_v", p.v_0);
    p.eta = j.value("eta", p.eta);
    p.c = j.value("c_f", p.c);
    return p;
}

json to_json(const ExperimentConfig& cfg) {
    json channel;
    if (cfg.channel.use_taps) {
        channel = to_json(make_channel(cfg.channel.taps));
    } else {
        channel = json{{"seed", cfg.channel.seed},
                       {"L", cfg.channel.n_taps},
                       {"total_gain_db", cfg.channel.total_gain_db},
                       {"delay_max_s", cfg.channel.delay_max_s}};
    }
    return json{
        {"system",
         {{"f_min", cfg.system.f_min}, {"f_max", cfg.system.f_max}, {"n_tones", cfg.system.n_tones}}},
        {"rectenna", to_json(cfg.rectenna)},
        {"channel", std::move(channel)},
        {"sweep", {{"variable", cfg.sweep.variable}, {"values", cfg.sweep.values}}},
        {"methods", cfg.methods},
        {"scp",
         {{"epsilon", cfg.scp.epsilon},
          {"max_iters", cfg.scp.max_iters},
          {"quad",
           {{"rate_x_carrier", cfg.scp.quad.rate_x_carrier},
            {"n_samples", cfg.scp.quad.n_samples},
            {"max_exponent", cfg.scp.quad.max_exponent}}}}},
        {"output_dir", cfg.output_dir}};
}

ExperimentConfig config_from_json(const json& j, const ExperimentConfig& base) {
    ExperimentConfig cfg = base;
    if (j.contains("system")) {
        const json& s = j.at("system");
        cfg.system.f_min = s.value("f_min", cfg.system.f_min);
        cfg.system.f_max = s.value("f_max", cfg.system.f_max);
        cfg.system.n_tones = s.value("n_tones", cfg.system.n_tones);
    }
    if (j.contains("rectenna")) {
        cfg.rectenna = rectenna_from_json(j.at("rectenna"), cfg.rectenna);
    }
    if (j.contains("channel")) {
        const json& c = j.at("channel");
        if (c.contains("taps")) {
            cfg.channel.use_taps = true;
            cfg.channel.taps = channel_from_json(c).taps;
        } else {
            cfg.channel.use_taps = false;
            cfg.channel.seed = c.value("seed", cfg.channel.seed);
            cfg.channel.n_taps = c.value("L", cfg.channel.n_taps);
            cfg.channel.total_gain_db = c.value("total_gain_db", cfg.channel.total_gain_db);
            cfg.channel.delay_max_s = c.value("delay_max_s", cfg.channel.delay_max_s);
        }
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        cfg.sweep.variable = s.value("variable", cfg.sweep.variable);
        if (s.contains("values")) {
            cfg.sweep.values = s.at("values").get<std::vector<double>>();
        }
    }
    if (j.contains("methods")) {
        cfg.methods = j.at("methods").get<std::vector<std::string>>();
        if (cfg.methods.empty()) {
            throw std::invalid_argument("config: methods must be non-empty");
        }
    }
    if (j.contains("scp")) {
        const json& s = j.at("scp");
        cfg.scp.epsilon = s.value("epsilon", cfg.scp.epsilon);
        cfg.scp.max_iters = s.value("max_iters", cfg.scp.max_iters);
        if (s.contains("quad")) {
            const json& q = s.at("quad");
            cfg.scp.quad.rate_x_carrier = q.value("rate_x_carrier", cfg.scp.quad.rate_x_carrier);
            cfg.scp.quad.n_samples = q.value("n_samples", cfg.scp.quad.n_samples);
            cfg.scp.quad.max_exponent = q.value("max_exponent", cfg.scp.quad.max_exponent);
        }
    }
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    for (double v : cfg.sweep.values) {
        if (!(v > 0.0)) {
            throw std::invalid_argument("config: sweep values must be positive");
        }
    }
    return cfg;
}

json to_json(const ScpTrace& trace) {
    json iterations = json::array();
    for (const auto& it : trace.iterations) {
        iterations.push_back({{"m", it.m},
                              {"beta0", it.beta0},
                              {"delta", std::isnan(it.delta) ? json() : json(it.delta)},
                              {"s", array_to_json(it.s)},
                              {"betas", array_to_json(it.betas)}});
    }
    return json{{"converged", trace.converged},
                {"iterations", std::move(iterations)},
                {"final_waveform", to_json(trace.final_waveform)}};
}

void write_response_csv(std::ostream& os, const ChannelResponse& response) {
    os << "tone_index,f_hz,h,psi_rad\n";
    for (std::size_t n = 0; n < response.grid.n_tones; ++n) {
        const auto i = static_cast<Eigen::Index>(n);
        os << n << ',' << format_number(response.grid.frequency(n)) << ','
           << format_number(response.h[i]) << ',' << format_number(response.psi[i]) << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                     const std::string& value_column) {
    os << value_column << ",method,v_out_v,p_out_w,iterations,objective,error\n";
    for (const auto& row : rows) {
        os << format_number(row.sweep_value) << ',' << row.method << ','
           << format_number(row.v_out) << ',' << format_number(row.p_out) << ','
           << row.iterations << ',' << format_number(row.objective) << ',' << row.error << '\n';
    }
}

void write_trace_csv(std::ostream& os, const ScpTrace& trace) {
    os << "m,beta0,delta";
    const auto n = trace.iterations.empty() ? 0 : trace.iterations.front().s.size();
    for (Eigen::Index i = 1; i <= n; ++i) os << ",s_" << i;
    os << '\n';
    for (const auto& it : trace.iterations) {
        os << it.m << ',' << format_number(it.beta0) << ',' << format_number(it.delta);
        for (Eigen::Index i = 0; i < it.s.size(); ++i) os << ',' << format_number(it.s[i]);
        os << '\n';
    }
}

void write_amplitudes_csv(std::ostream& os, const MultisineWaveform& w) {
    os << "tone_index,f_hz,amplitude_sqrt_w,phase_rad\n";
    for (std::size_t n = 0; n < w.grid.n_tones; ++n) {
        const auto i = static_cast<Eigen::Index>(n);
        os << n << ',' << format_number(w.grid.frequency(n)) << ','
           << format_number(w.amplitudes[i]) << ',' << format_number(w.phases[i]) << '\n';
    }
}

void write_signal_csv(std::ostream& os, const MultisineWaveform& w, std::size_t n_samples) {
    os << "t_s,x_v\n";
    const double T = w.grid.period();
    for (std::size_t q = 0; q < n_samples; ++q) {
        const double t = T * static_cast<double>(q) / static_cast<double>(n_samples);
        os << format_number(t) << ',' << format_number(eval_transmit(w, t)) << '\n';
    }
}

void write_ripple_csv(std::ostream& os, const std::vector<RippleRow>& rows) {
    os << "c_rl_over_t,ripple_fraction,steady_mean_v,v_out_bisection_v,relative_gap,error\n";
    for (const auto& row : rows) {
        os << format_number(row.c_rl_over_t) << ',' << format_number(row.ripple_fraction) << ','
           << format_number(row.steady_mean) << ',' << format_number(row.v_out_bisection) << ','
           << format_number(row.relative_gap) << ',' << row.error << '\n';
    }
}

void write_transient_csv(std::ostream& os, const TransientResult& result) {
    os << "t_s,v_out_v\n";
    for (std::size_t i = 0; i < result.time.size(); ++i) {
        os << format_number(result.time[i]) << ',' << format_number(result.v_out[i]) << '\n';
    }
}

}  // namespace wptwave
