#include "launcher/lab/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "launcher/error.hpp"
#include "launcher/lab/filters.hpp"
#include "launcher/lab/reference_tables.hpp"
#include "launcher/lab/trajectory_io.hpp"
#include "launcher/sim/flight.hpp"
#include "launcher/sim/launch_model.hpp"
#include "launcher/sim/sim_launcher.hpp"

namespace launcher::lab {

namespace {

constexpr double altitude_low = 6.4;
constexpr double altitude_medium = 19.9;
constexpr double altitude_high = 37.1;

WheelActuation wheels_for(double mean, double spin)
{
    return {mean - 2.0 * spin / 3.0, mean + spin / 3.0, mean + spin / 3.0};
}

bool feasible(const WheelActuation& w)
{
    for (double v : {w.bottom, w.top_left, w.top_right})
        if (v < limits::actuation_min || v > limits::actuation_max)
            return false;
    return true;
}

/// Noise-free on-table windows of the mean actuation over an
/// (altitude, spin) grid, interpolated bilinearly.
class WindowTable
{
public:
    explicit WindowTable(const sim::SimConfig& cfg)
    {
        for (std::size_t a = 0; a < altitudes_.size(); ++a)
            for (std::size_t s = 0; s < spins_.size(); ++s)
                windows_[a][s] = scan(cfg, altitudes_[a], spins_[s]);
    }

    std::pair<double, double> window(double altitude, double spin) const
    {
        const auto [a, fa] = locate(altitudes_, altitude);
        const auto [s, fs] = locate(spins_, spin);
        const auto lerp = [&](auto pick) {
            const double v00 = pick(windows_[a][s]), v01 = pick(windows_[a][s + 1]);
            const double v10 = pick(windows_[a + 1][s]), v11 = pick(windows_[a + 1][s + 1]);
            return (1 - fa) * ((1 - fs) * v00 + fs * v01) + fa * ((1 - fs) * v10 + fs * v11);
        };
        return {lerp([](const auto& w) { return w.first; }),
                lerp([](const auto& w) { return w.second; })};
    }

private:
    static constexpr std::size_t n_alt = 6;
    static constexpr std::size_t n_spin = 7;

    template <std::size_t N>
    static std::pair<std::size_t, double> locate(const std::array<double, N>& grid, double v)
    {
        v = std::clamp(v, grid.front(), grid.back());
        std::size_t i = 0;
        while (i + 2 < N && v > grid[i + 1])
            ++i;
        return {i, (v - grid[i]) / (grid[i + 1] - grid[i])};
    }

    static std::pair<double, double> scan(const sim::SimConfig& cfg, double altitude, double spin)
    {
        double lo = -1.0, hi = -1.0;
        for (double mean = 10.0; mean <= 100.0; mean += 0.5) {
            LauncherState s;
            s.wheels = wheels_for(mean, spin);
            if (!feasible(s.wheels))
                continue;
            s.altitude_deg = altitude;
            s.ramp_up = RampUp::continuous();
            const auto flight = sim::simulate_flight(sim::compute_launch(s, cfg, 1.0), cfg);
            if (flight.crossing && flight.crossing->on_table) {
                if (lo < 0)
                    lo = mean;
                hi = mean;
            }
        }
        if (lo < 0)
            throw CalibrationError("no on-table launch for altitude " + std::to_string(altitude)
                                   + " and spin offset " + std::to_string(spin));
        return {lo, hi};
    }

    std::array<double, n_alt> altitudes_{6.4, 12.0, 19.9, 25.0, 31.0, 37.1};
    std::array<double, n_spin> spins_{-10.0, 0.0, 10.0, 20.0, 30.0, 40.0, 50.0};
    std::array<std::array<std::pair<double, double>, n_spin>, n_alt> windows_{};
};

} // namespace

std::array<Regime, 6> default_regimes()
{
    const auto groups = reference::dataset_groups();
    std::array<Regime, 6> r{};
    // spin none-low, equal wheels, various altitudes: the target-shooting set.
    r[0] = {1, 0, 0.0, 0.0, 0.0, 1.0, 17.0, 23.0, 15.0};
    // high spin at high speeds.
    r[1] = {2, 0, 30.0, 45.0, 0.6, 1.0, altitude_low, altitude_high, 10.0};
    // low to medium spin at low speeds.
    r[2] = {3, 0, -8.0, 25.0, 0.0, 0.4, altitude_low, altitude_high, 10.0};
    // low to high spin, various speeds, high altitude.
    r[3] = {4, 0, -8.0, 45.0, 0.0, 1.0, altitude_high, altitude_high, 10.0};
    // low to medium spin, various speeds, medium altitude.
    r[4] = {5, 0, -8.0, 25.0, 0.0, 1.0, altitude_medium, altitude_medium, 10.0};
    // low spin, various speeds, low altitude.
    r[5] = {6, 0, -8.0, 12.0, 0.0, 1.0, altitude_low, altitude_low, 10.0};
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i].trajectories = groups[i].trajectories;
    return r;
}

std::vector<int> scale_group_sizes(int n, const std::array<Regime, 6>& regimes)
{
    if (n < 0)
        throw RangeError("dataset size must not be negative");
    const int total = std::accumulate(regimes.begin(), regimes.end(), 0,
                                      [](int acc, const Regime& r) { return acc + r.trajectories; });
    std::vector<int> sizes(regimes.size());
    std::vector<std::pair<long long, std::size_t>> remainders;
    int assigned = 0;
    for (std::size_t i = 0; i < regimes.size(); ++i) {
        const long long scaled = static_cast<long long>(n) * regimes[i].trajectories;
        sizes[i] = static_cast<int>(scaled / total);
        assigned += sizes[i];
        remainders.push_back({scaled % total, i});
    }
    // Largest remainder first; ties go to the earlier group.
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned)
        ++sizes[remainders[k].second];
    return sizes;
}

DatasetSummary generate_dataset(const DatasetOptions& options,
                                const std::function<void(const GeneratedTrajectory&)>& sink)
{
    if (options.aimed_miss_fraction < 0.0 || options.aimed_miss_fraction > 1.0)
        throw RangeError("aimed miss fraction must lie in [0, 1]");
    sim::SimConfig cfg = sim::calibrated(options.sim);
    cfg.rng_seed = options.seed;
    const WindowTable windows(cfg);
    const auto regimes = default_regimes();
    const auto sizes = scale_group_sizes(options.n, regimes);

    sim::SimLauncher launcher(cfg);
    sim::Rng rng(options.seed ^ 0x5deece66dULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const PipelineOptions pipeline;

    DatasetSummary summary;
    int index = 0;
    for (std::size_t g = 0; g < regimes.size(); ++g) {
        const Regime& regime = regimes[g];
        for (int k = 0; k < sizes[g]; ++k) {
            LauncherState state;
            WheelActuation wheels;
            do {
                state.altitude_deg =
                    regime.altitude_min + unit(rng) * (regime.altitude_max - regime.altitude_min);
                state.azimuth_deg = (2.0 * unit(rng) - 1.0) * regime.azimuth_span;
                const double spin = regime.spin_min + unit(rng) * (regime.spin_max - regime.spin_min);
                const auto [lo, hi] = windows.window(state.altitude_deg, spin);
                const double width = hi - lo;
                double mean = 0.0;
                if (unit(rng) < options.aimed_miss_fraction) {
                    const double beyond = (0.05 + 0.25 * unit(rng)) * std::max(width, 4.0);
                    mean = unit(rng) < 0.5 ? lo - beyond : hi + beyond;
                } else {
                    mean = lo + width * (regime.speed_lo + unit(rng) * (regime.speed_hi - regime.speed_lo));
                }
                wheels = wheels_for(mean, spin);
            } while (!feasible(wheels));
            state.wheels = wheels;
            state.validate();
            launcher.apply_state(state);

            GeneratedTrajectory out;
            out.trajectory = launcher.fire().observed;
            char id[32];
            std::snprintf(id, sizeof id, "traj_%06d", ++index);
            out.trajectory.id = id;
            out.group = regime.group;
            out.on_table = preprocess(out.trajectory, pipeline).rebound.verdict
                           == ReboundVerdict::on_table;
            ++summary.total;
            ++summary.per_group[g];
            if (out.on_table)
                ++summary.on_table;
            sink(out);
        }
    }
    return summary;
}

DatasetSummary write_dataset(const DatasetOptions& options, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    return generate_dataset(options, [&](const GeneratedTrajectory& g) {
        save_trajectory(dir / (g.trajectory.id + ".jsonl"), g.trajectory, {{"group", g.group}});
    });
}

} // namespace launcher::lab
