#include "launcher/lab/experiment.hpp"

#include <charconv>

#include "launcher/error.hpp"

namespace launcher::lab {

LauncherState default_experiment_state()
{
    LauncherState s;
    s.wheels = {38.0, 38.0, 38.0};
    s.azimuth_deg = 0.0;
    s.altitude_deg = 19.9;
    return s;
}

ExperimentResult run_accuracy_experiment(LaunchSource& source, const LauncherState& state,
                                         int n_launches, const ExperimentOptions& options)
{
    if (n_launches <= 0)
        throw RangeError("an accuracy experiment needs at least one launch");
    state.validate();
    LauncherState displaced = state;
    displaced.azimuth_deg = jump_azimuth_deg;
    displaced.altitude_deg = jump_altitude_deg;

    ExperimentResult result;
    source.set_state(state);
    for (int i = 0; i < n_launches; ++i) {
        if (options.orientation_jump) {
            source.set_state(displaced);
            source.set_state(state);
        }
        const Preprocessed p = preprocess(source.launch(), options.pipeline);
        ++result.launched;
        result.report.add(p);
        if (p.kept && p.rebound.verdict == ReboundVerdict::on_table)
            result.landings.push_back(p.rebound.landing);
    }
    result.stats = compute_stats(result.landings);
    return result;
}

SweepParam parse_sweep_param(const std::string& name)
{
    if (name == "ramp_up")
        return SweepParam::ramp_up;
    if (name == "stroke_gain")
        return SweepParam::stroke_gain;
    if (name == "pinch")
        return SweepParam::pinch;
    throw RangeError("unknown sweep parameter '" + name + "' (ramp_up, stroke_gain, pinch)");
}

std::string to_string(SweepParam p)
{
    switch (p) {
    case SweepParam::ramp_up: return "ramp_up";
    case SweepParam::stroke_gain: return "stroke_gain";
    case SweepParam::pinch: return "pinch";
    }
    return "?";
}

LauncherState with_sweep_value(LauncherState state, SweepParam param, const std::string& value)
{
    if (param == SweepParam::ramp_up && value == "continuous") {
        state.ramp_up = RampUp::continuous();
        return state;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw RangeError("sweep value '" + value + "' is not a number");
    switch (param) {
    case SweepParam::ramp_up: state.ramp_up = RampUp::seconds(v); break;
    case SweepParam::stroke_gain: state.stroke_gain = v; break;
    case SweepParam::pinch: state.pinch_diameter_mm = v; break;
    }
    state.validate();
    return state;
}

std::vector<SweepSeries> run_sweep(const sim::SimConfig& cfg, const LauncherState& base,
                                   SweepParam param, const std::vector<std::string>& values,
                                   int n_launches, const ExperimentOptions& options)
{
    if (values.empty())
        throw RangeError("a sweep needs at least one value");
    std::vector<LauncherState> states;
    for (const auto& v : values)
        states.push_back(with_sweep_value(base, param, v));
    std::vector<SweepSeries> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sim::SimConfig c = cfg;
        c.rng_seed = cfg.rng_seed + 7919 * static_cast<std::uint64_t>(i);
        sim::SimLauncher sim(c);
        SimLaunchSource source(sim);
        out.push_back({values[i], run_accuracy_experiment(source, states[i], n_launches, options)});
    }
    return out;
}

std::vector<StatsRow> sweep_rows(SweepParam param, const std::vector<SweepSeries>& series)
{
    std::vector<StatsRow> rows;
    for (const auto& s : series)
        rows.push_back({to_string(param) + "=" + s.value, s.result.stats});
    return rows;
}

} // namespace launcher::lab
