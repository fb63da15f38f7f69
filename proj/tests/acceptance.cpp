// Acceptance suite: one PASS/FAIL line per primary criterion.
//
// Every criterion runs even when an earlier one fails; the exit status is
// non-zero when any line is FAIL. Oracles are independent of the code under
// test: published constants are re-typed here, the landing oracle is the
// integrator's exact table crossing, and gradients are checked by finite
// differences.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/asio.hpp>

#include "launcher/error.hpp"
#include "launcher/lab/dataset.hpp"
#include "launcher/lab/experiment.hpp"
#include "launcher/lab/filters.hpp"
#include "launcher/lab/landing.hpp"
#include "launcher/lab/reference_tables.hpp"
#include "launcher/lab/stats.hpp"
#include "launcher/net/client.hpp"
#include "launcher/net/controller.hpp"
#include "launcher/net/server.hpp"
#include "launcher/shooting/target_shooting.hpp"
#include "launcher/shooting/train.hpp"
#include "launcher/sim/camera.hpp"
#include "launcher/sim/flight.hpp"
#include "launcher/sim/launch_model.hpp"
#include "launcher/sim/motor_curve.hpp"

using namespace launcher;
namespace asio = boost::asio;

namespace {

struct Verdict
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- 1. statistics regression ------------------------------------------

Verdict statistics_regression()
{
    using lab::reference::AccuracyRow;
    int rows = 0, bad = 0;
    double worst = 0.0;
    for (auto table : {lab::reference::ramp_up_table(), lab::reference::stroke_gain_table(),
                       lab::reference::pinching_table()}) {
        for (const AccuracyRow& row : table) {
            ++rows;
            const double area = lab::stats_from_sigmas(row.sigma_x, row.sigma_y).area_sigma;
            const double rel = std::abs(area - row.area_sigma) / row.area_sigma;
            const double direct = std::numbers::pi * row.sigma_x * row.sigma_y;
            worst = std::max(worst, rel);
            bad += rel > 0.02 || std::abs(direct - area) > 1e-15;
        }
    }
    const bool sizes = lab::reference::ramp_up_table().size() == 9
                       && lab::reference::stroke_gain_table().size() == 8
                       && lab::reference::pinching_table().size() == 6;

    // Figure tick data: t_ramp = 0.5 s plots 21.13 mm and 15.00 mm.
    bool spot = false;
    for (const auto& p : lab::reference::ramp_up_figure())
        if (p.parameter == 0.5) {
            const auto s = lab::stats_from_sigmas(p.sigma_x_mm, p.sigma_y_mm);
            spot = std::round(p.sigma_x_mm * 100) == 2113 && std::round(p.sigma_y_mm * 100) == 1500
                   && std::abs(s.sigma_norm - std::hypot(p.sigma_x_mm, p.sigma_y_mm)) < 1e-12
                   && std::abs(s.sigma_norm - std::hypot(21.13, 15.00)) < 0.01
                   && std::abs(s.sigma_avg() - p.sigma_avg_mm) < 1e-9;
        }
    // Figure against the table row of the same setting. Informational: the
    // published 8 s point plots sigma_x = 23.73 mm while its table row,
    // consistent with its own area, prints 24.7 mm.
    int fig_checked = 0, fig_bad = 0;
    for (const auto& p : lab::reference::ramp_up_figure())
        for (const auto& row : lab::reference::ramp_up_table())
            if (row.setting == fmt("%.2f", p.parameter)) {
                // Tables print 0.1 mm, the figure 0.01 mm.
                ++fig_checked;
                fig_bad += std::abs(row.sigma_x * 1e3 - p.sigma_x_mm) > 0.05 + 1e-9
                           || std::abs(row.sigma_y * 1e3 - p.sigma_y_mm) > 0.05 + 1e-9;
            }
    return {bad == 0 && sizes && spot && fig_checked == 8,
            fmt("%d rows, worst area deviation %.3f %%; t_ramp=0.5 spot check %s; %d/%d figure points match "
                "their table rows (informational)",
                rows, 100.0 * worst, spot ? "ok" : "MISMATCH", fig_checked - fig_bad, fig_checked)};
}

// ---- 2. motor curves ---------------------------------------------------

Verdict motor_curves()
{
    // Speeds in rev/min at 0, 5, ..., 100 % actuation.
    const std::array<std::pair<const char*, std::array<double, 21>>, 6> published{{
        {"MN5008-bottom", {0, 0, 0, 0, 0, 0, 524, 1291, 1900, 2369, 2722, 2977, 3184, 3331, 3435, 3529,
                           3613, 3681, 3933, 3957, 3960}},
        {"MN5008-top-right", {0, 0, 0, 0, 0, 0, 470, 1250, 1828, 2325, 2667, 2939, 3149, 3299, 3418, 3509,
                              3600, 3678, 3937, 3961, 3963}},
        {"MN5008-top-left", {0, 0, 0, 0, 0, 0, 489, 1278, 1865, 2354, 2694, 2959, 3170, 3321, 3434, 3524,
                             3615, 3688, 3931, 3968, 3970}},
        {"MN4004-bottom", {0, 0, 0, 0, 183, 603, 1260, 1780, 2275, 2665, 3043, 3305, 3527, 3706, 3865, 4046,
                           4210, 4484, 4763, 4962, 4964}},
        {"MN4004-top-right", {0, 0, 0, 0, 0, 253, 963, 1460, 1952, 2346, 2724, 2984, 3235, 3429, 3587, 3744,
                              3871, 3977, 4115, 4385, 4597}},
        {"MN4004-top-left", {0, 0, 0, 0, 200, 747, 1430, 1892, 2373, 2669, 3018, 3238, 3440, 3601, 3781, 3870,
                             3950, 4170, 4437, 4615, 4616}},
    }};
    int knots = 0, bad = 0;
    for (const auto& [id, speeds] : published) {
        const auto& curve = sim::builtin_curve(id);
        for (int i = 0; i <= 20; ++i) {
            ++knots;
            bad += sim::interpolate_motor_speed(curve, 5.0 * i) != speeds[i];
        }
    }
    const double mid = sim::interpolate_motor_speed(sim::builtin_curve("MN5008-bottom"), 32.5);
    const double expected = 524.0 + (1291.0 - 524.0) * 0.5;
    const bool mid_ok = std::abs(mid - expected) < 1e-9 && expected == 907.5;
    return {bad == 0 && mid_ok && sim::builtin_motor_curves().size() == 6,
            fmt("%d/%d knots exact over six curves; MN5008-bottom(32.5 %%) = %.4f rev/min", knots - bad, knots,
                mid)};
}

// ---- 3. calibration ----------------------------------------------------

Verdict calibration()
{
    const auto cfg = sim::calibrated(sim::SimConfig{});
    // Continuous ramp-up: the wheels are at their commanded speed.
    LauncherState full;
    full.ramp_up = RampUp::continuous();
    full.wheels = {100.0, 100.0, 100.0};
    const auto fast = sim::compute_launch(full, cfg, 5.0);
    LauncherState spin = full;
    spin.wheels = {0.0, 100.0, 100.0};
    const auto top = sim::compute_launch(spin, cfg, 5.0);
    const double v = fast.v0.norm(), w = top.omega0.norm();
    return {std::abs(v - 15.4) < 1e-9 && std::abs(w - 192.0) < 1e-9,
            fmt("full equal actuation %.12f m/s, full differential %.12f rev/s", v, w)};
}

// ---- 4. landing estimation oracle --------------------------------------

sim::SimConfig noise_free_config()
{
    sim::SimConfig cfg;
    cfg.actuation_noise_sd = 0.0;
    cfg.settle_tau_jitter = 0.0;
    cfg.feed_timing_jitter = 0.0;
    cfg.orientation_repeatability_deg = 0.0;
    cfg.camera.per_meter = Vec3::Zero();
    cfg.camera.jitter_sd = 0.0;
    cfg.camera.outlier_rate = 0.0;
    return sim::calibrated(cfg);
}

Verdict landing_oracle()
{
    const auto cfg = noise_free_config();
    std::mt19937_64 rng(3);
    const int n = 100;
    int valid = 0, within = 0;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        LauncherState s;
        s.altitude_deg = limits::altitude_min_deg + (limits::altitude_max_deg - limits::altitude_min_deg) * i / (n - 1);
        s.azimuth_deg = -8.0 + 16.0 * ((i * 37) % n) / (n - 1);
        const double spin = (i % 3 == 0) ? 0.0 : (i % 3 == 1 ? 8.0 : -4.0);
        // Aim at a landing point: x cycles over the table length, and the
        // mean actuation whose true crossing lands closest to it is used.
        const double aim_x = 0.5 + 2.0 * ((i * 7) % 10) / 9.0;
        double a = -1.0, best = 1e9;
        for (double cand = 20.0; cand <= 92.0; cand += 0.25) {
            s.wheels = {cand - spin, cand + spin / 2, cand + spin / 2};
            const auto flight = sim::simulate_flight(sim::compute_launch(s, cfg, 5.0), cfg);
            if (flight.bounced() && std::abs(flight.crossing->position.x() - aim_x) < best) {
                best = std::abs(flight.crossing->position.x() - aim_x);
                a = cand;
            }
        }
        if (a < 0.0)
            continue;
        s.wheels = {a - spin, a + spin / 2, a + spin / 2};
        const auto flight = sim::simulate_flight(sim::compute_launch(s, cfg, 5.0), cfg);
        const auto observed = sim::observe(flight, cfg.camera, Vec3::Zero(), rng);
        lab::LandingPoint est;
        try {
            est = lab::estimate_landing(observed);
        } catch (const NoReboundError&) {
            std::cerr << fmt("  no rebound found: altitude %.2f deg, actuation %.2f %%, spin offset %+.0f\n",
                             s.altitude_deg, a, spin);
            continue;
        }
        if (!est.valid)
            continue;
        ++valid;
        const double err = std::hypot(est.x - flight.crossing->position.x(), est.y - flight.crossing->position.y());
        worst = std::max(worst, err);
        within += err < 0.005;
    }
    return {valid == n && within == n,
            fmt("%d/%d flights with a valid estimate, %d within 5 mm, worst %.2f mm", valid, n, within, 1e3 * worst)};
}

// ---- 5. filter defect injection ----------------------------------------

Verdict filter_injection()
{
    lab::DatasetOptions options;
    options.n = 1000;
    options.seed = 5;
    std::vector<Trajectory> trajectories;
    lab::generate_dataset(options, [&](const lab::GeneratedTrajectory& g) { trajectories.push_back(g.trajectory); });

    std::mt19937_64 rng(17);
    int gaps_dropped = 0, outliers_removed = 0, false_traj = 0, clean_dropped = 0;
    std::size_t false_samples = 0, samples = 0;
    for (const auto& clean : trajectories) {
        const std::size_t n = clean.samples.size();
        samples += n;
        if (!lab::filter_time_jump(clean))
            ++clean_dropped;
        const auto r = lab::filter_position_jump(clean);
        false_samples += r.removed.size();
        false_traj += !r.removed.empty();

        Trajectory gap = clean;
        const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
        const double dt = std::uniform_real_distribution<double>(0.501, 3.0)(rng);
        for (std::size_t i = k; i < n; ++i)
            gap.samples[i].t += dt;
        gaps_dropped += !lab::filter_time_jump(gap);

        Trajectory bad = clean;
        const std::size_t j = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        std::normal_distribution<double> g(0.0, 1.0);
        const Vec3 dir = Vec3(g(rng), g(rng), g(rng)).normalized();
        bad.samples[j].position += dir * std::uniform_real_distribution<double>(0.10, 0.30)(rng);
        const auto removed = lab::filter_position_jump(bad).removed;
        outliers_removed += std::find(removed.begin(), removed.end(), j) != removed.end();
    }
    const int total = static_cast<int>(trajectories.size());
    const double false_rate = static_cast<double>(false_traj) / total;
    return {total == 1000 && gaps_dropped == total && outliers_removed == total && clean_dropped == 0
                && false_rate < 0.005,
            fmt("gaps dropped %d/%d, outliers removed %d/%d, clean trajectories touched %d/%d (%.2f %%; %zu of %zu "
                "samples)",
                gaps_dropped, total, outliers_removed, total, false_traj, total, 100.0 * false_rate, false_samples,
                samples)};
}

// ---- 6. ramp-up trend --------------------------------------------------

Verdict ramp_trend()
{
    sim::SimConfig cfg;
    cfg.rng_seed = 1;
    const auto base = lab::default_experiment_state();
    const auto ramp = lab::run_sweep(cfg, base, lab::SweepParam::ramp_up, {"0.1", "2"}, 200);
    const auto& fast = ramp[0].result;
    const auto& slow = ramp[1].result;
    const auto iv = lab::bootstrap_sigma_avg_difference(fast.landings, slow.landings, 0.95, 2000, 11);

    // Orientation-jump A/B: 20 launches without and 20 with the displaced
    // orientation visited in between, same seed.
    lab::ExperimentOptions jump;
    jump.orientation_jump = true;
    sim::SimLauncher a_sim(cfg), b_sim(cfg);
    lab::SimLaunchSource a_src(a_sim), b_src(b_sim);
    const auto a = lab::run_accuracy_experiment(a_src, base, 20);
    const auto b = lab::run_accuracy_experiment(b_src, base, 20, jump);
    const auto ab = lab::bootstrap_sigma_avg_difference(b.landings, a.landings, 0.95, 2000, 12);

    return {iv.lo > 0.0 && ab.contains(0.0),
            fmt("sigma_avg 0.1 s = %.2f mm vs 2 s = %.2f mm, 95%% CI of difference [%.2f, %.2f] mm; jump A/B %.2f vs "
                "%.2f mm, CI [%.2f, %.2f] mm",
                1e3 * fast.stats.sigma_avg(), 1e3 * slow.stats.sigma_avg(), 1e3 * iv.lo, 1e3 * iv.hi,
                1e3 * a.stats.sigma_avg(), 1e3 * b.stats.sigma_avg(), 1e3 * ab.lo, 1e3 * ab.hi)};
}

// ---- 7. protocol and latency -------------------------------------------

// Raw socket that can send anything and read newline-terminated replies.
struct RawClient
{
    asio::io_context io;
    asio::ip::tcp::socket socket{io};
    asio::streambuf buffer;

    explicit RawClient(std::uint16_t port) { socket.connect({asio::ip::make_address("127.0.0.1"), port}); }
    void send(const std::string& bytes) { asio::write(socket, asio::buffer(bytes)); }
    std::optional<std::string> read_line()
    {
        boost::system::error_code ec;
        asio::read_until(socket, buffer, '\n', ec);
        if (ec)
            return std::nullopt;
        std::istream in(&buffer);
        std::string line;
        std::getline(in, line);
        return line;
    }
};

struct ScheduleOutcome
{
    int launched = 0;
    int starved = 0;
    int late = 0;
    double worst_offset = 0.0;
};

// The control state machine on a simulated clock: 100 launch_at requests at
// irregular 0.8-5 s spacing, each sent 0.75 s ahead, with the stirrer on.
ScheduleOutcome scheduled_launches()
{
    sim::SimConfig sim;
    sim.rng_seed = 11;
    net::Controller ctl(std::make_unique<net::SimBackend>(sim), net::ControllerConfig{}, 0.0);
    double now = 0.0;
    std::int64_t id = 1;
    std::vector<net::Outbound> out;
    const auto send = [&](nlohmann::json body) {
        body["id"] = id++;
        auto r = ctl.handle_frame(body.dump(), 1, now);
        for (auto& o : ctl.take_outbox())
            out.push_back(std::move(o));
        return r;
    };
    const double tick = ctl.backend().tick();
    const auto run_until = [&](double t) {
        while (now + tick <= t + 1e-12) {
            now += tick;
            ctl.advance(now);
            for (auto& o : ctl.take_outbox())
                out.push_back(std::move(o));
        }
    };

    ScheduleOutcome result;
    send({{"cmd", "configure"}, {"ramp_up_time", "continuous"}});
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> gap(0.8, 5.0);
    double t = now + 1.0;
    for (int i = 0; i < 100; ++i) {
        t += gap(rng);
        run_until(t - 0.75);
        const auto r = send({{"cmd", "launch_at"}, {"t_monotonic_s", t}});
        result.late += r["ok"] != true || r["launch"]["best_effort"] == true;
    }
    run_until(t + 1.0);
    for (const auto& o : out) {
        if (!o.frame.contains("event"))
            continue;
        const auto ev = net::parse_event(o.frame["event"]);
        if (ev.type == net::EventType::launched) {
            ++result.launched;
            result.worst_offset = std::max(result.worst_offset, std::abs(ev.t_monotonic_s - ev.target_s.value_or(1e9)));
        } else if (ev.type == net::EventType::feed_starved) {
            ++result.starved;
        }
    }
    return result;
}

Verdict protocol_latency()
{
    net::ServerConfig cfg;
    cfg.tcp_port = 0;
    cfg.gateway = false;
    net::Server server(cfg);

    std::vector<double> ms;
    {
        net::Session s({"127.0.0.1", server.tcp_port()});
        for (int i = 0; i < 1000; ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            s.ping();
            ms.push_back(1e3 * seconds_since(t0));
        }
    }
    std::sort(ms.begin(), ms.end());
    const double p99 = ms[static_cast<std::size_t>(0.99 * (ms.size() - 1))];

    // Fuzz: random bytes, truncated and mistyped JSON, then a valid ping.
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> byte(0, 255), len(1, 300), kind(0, 3);
    const std::vector<std::string> shapes = {
        R"({"id":1,"cmd":"set_wheels","bottom":1e308,"top_left":"x","top_right":null})",
        R"({"id":"s","cmd":"launch_at","t_unix_s":-1})",
        R"({"id":2,"cmd":"configure","ramp_up_time":[1,2]})",
        R"([1,2,3])",
        R"({"id":3,"cmd":"set_orientation","azimuth_deg":99,"altitude_deg":0})",
        R"({"id":4)",
    };
    int answered = 0, sent = 0;
    bool alive = true;
    {
        RawClient raw(server.tcp_port());
        for (int i = 0; i < 1000; ++i) {
            std::string frame;
            if (kind(rng) == 0) {
                frame = shapes[static_cast<std::size_t>(i) % shapes.size()];
            } else {
                const int n = len(rng);
                for (int k = 0; k < n; ++k) {
                    char c = static_cast<char>(byte(rng));
                    frame.push_back(c == '\n' ? '{' : c);
                }
            }
            if (frame.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            raw.send(frame + "\n");
            ++sent;
        }
        raw.send("{\"id\":424242,\"cmd\":\"ping\"}\n");
        for (;;) {
            const auto line = raw.read_line();
            if (!line) {
                alive = false;
                break;
            }
            const auto j = nlohmann::json::parse(*line, nullptr, false);
            if (!j.is_discarded() && j.contains("id") && j["id"] == 424242) {
                alive = j["ok"] == true;
                break;
            }
            ++answered;
        }
    }
    // An oversized frame drops only its own connection.
    {
        RawClient big(server.tcp_port());
        big.send(std::string(net::max_frame_bytes + 10, 'x'));
        alive = alive && !big.read_line();
    }
    try {
        net::Session after({"127.0.0.1", server.tcp_port()});
        after.ping();
    } catch (const std::exception&) {
        alive = false;
    }
    server.stop();

    const auto sched = scheduled_launches();
    const bool pass = p99 < 500.0 && alive && answered == sent && sched.launched == 100 && sched.starved == 0
                      && sched.late == 0 && sched.worst_offset <= 0.05;
    return {pass, fmt("1000 pings: median %.3f ms, p99 %.3f ms; fuzz: %d/%d frames answered, server %s; schedule: "
                      "%d/100 launched, %d starved, worst release offset %.1f ms",
                      ms[ms.size() / 2], p99, answered, sent, alive ? "alive" : "DOWN", sched.launched,
                      sched.starved, 1e3 * sched.worst_offset)};
}

// ---- 8 + 9. dataset and target shooting ---------------------------------

struct DatasetRun
{
    lab::DatasetSummary summary;
    std::vector<Trajectory> equal_wheels;
    double seconds = 0.0;
};

DatasetRun& default_dataset()
{
    static DatasetRun run = [] {
        DatasetRun r;
        const auto t0 = std::chrono::steady_clock::now();
        r.summary = lab::generate_dataset(lab::DatasetOptions{}, [&](const lab::GeneratedTrajectory& g) {
            if (g.trajectory.control.wheels.equal())
                r.equal_wheels.push_back(g.trajectory);
        });
        r.seconds = seconds_since(t0);
        return r;
    }();
    return run;
}

Verdict dataset_generator()
{
    const auto& run = default_dataset();
    const std::array<int, 6> published{415, 64, 364, 1103, 1385, 430};
    const double frac = run.summary.on_table_fraction();
    return {run.summary.per_group == published && run.summary.total == 3761 && frac >= 0.80 && frac <= 0.95,
            fmt("groups %d/%d/%d/%d/%d/%d = %d, on-table %d (%.1f %%), %.1f s", run.summary.per_group[0],
                run.summary.per_group[1], run.summary.per_group[2], run.summary.per_group[3],
                run.summary.per_group[4], run.summary.per_group[5], run.summary.total, run.summary.on_table,
                100.0 * frac, run.seconds)};
}

double worst_gradient_error(const std::vector<int>& layers)
{
    shooting::Mlp m(layers, 21);
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n(0.0, 1.0);
    for (auto& b : m.biases())
        for (Eigen::Index k = 0; k < b.size(); ++k)
            b(k) = 0.3 * n(rng);
    Eigen::MatrixXd x(8, 3), y(8, 3);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        x.data()[i] = n(rng);
        y.data()[i] = n(rng);
    }
    shooting::Gradients g;
    m.loss(x, y, &g);
    const double h = 1e-6;
    double worst = 0.0;
    const auto check = [&](double& p, double analytic) {
        const double keep = p;
        p = keep + h;
        const double up = m.loss(x, y);
        p = keep - h;
        const double down = m.loss(x, y);
        p = keep;
        const double numeric = (up - down) / (2 * h);
        worst = std::max(worst, std::abs(numeric - analytic)
                                    / std::max({std::abs(numeric), std::abs(analytic), 1e-8}));
    };
    for (std::size_t l = 0; l < m.layers(); ++l) {
        for (Eigen::Index k = 0; k < m.weights()[l].size(); ++k)
            check(m.weights()[l].data()[k], g.weights[l].data()[k]);
        for (Eigen::Index k = 0; k < m.biases()[l].size(); ++k)
            check(m.biases()[l](k), g.biases[l](k));
    }
    return worst;
}

Verdict target_shooting()
{
    const auto& data = default_dataset();
    const auto set = shooting::build_training_set(data.equal_wheels, true);
    const auto cfg = shooting::desk_train_config();

    const auto t0 = std::chrono::steady_clock::now();
    const auto first = shooting::train(set.inputs, set.targets, cfg);
    const double train_s = seconds_since(t0);
    const auto second = shooting::train(set.inputs, set.targets, cfg);
    bool reproducible = first.history.size() == second.history.size();
    for (std::size_t i = 0; reproducible && i < first.history.size(); ++i)
        reproducible = first.history[i].loss == second.history[i].loss;
    for (std::size_t l = 0; reproducible && l < first.model.layers(); ++l)
        reproducible = first.model.weights()[l] == second.model.weights()[l]
                       && first.model.biases()[l] == second.model.biases()[l];

    // Shoot with the tracking session that recorded the training data.
    sim::SimConfig sim_cfg;
    sim_cfg.rng_seed = 77;
    sim_cfg.camera_seed = lab::DatasetOptions{}.seed;
    sim::SimLauncher sim(sim_cfg);
    lab::SimLaunchSource source(sim);
    const auto report = shooting::evaluate_grid(first.model, source, shooting::target_grid(20, sim_cfg.table_height));

    const double grad = worst_gradient_error({3, 12, 8, 6, 3});
    const bool enough = data.equal_wheels.size() >= 400;
    return {enough && report.mean_error <= 0.15 && grad < 1e-4 && reproducible,
            fmt("%zu equal-wheel trajectories, %ld samples, trained in %.1f s; mean landing error %.3f m over %zu "
                "targets; gradient rel. error %.2e; retrain %s",
                data.equal_wheels.size(), static_cast<long>(set.size()), train_s, report.mean_error,
                report.results.size(), grad, reproducible ? "bit-identical" : "DIFFERS")};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"statistics regression", statistics_regression},
        {"motor curves", motor_curves},
        {"calibration", calibration},
        {"landing estimation oracle", landing_oracle},
        {"filter defect injection", filter_injection},
        {"ramp-up trend", ramp_trend},
        {"protocol/latency", protocol_latency},
        {"target shooting", target_shooting},
        {"dataset generator", dataset_generator},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::cout << (v.pass ? "PASS" : "FAIL") << "  " << name << " (" << fmt("%.1f", seconds_since(t0))
                  << " s): " << v.detail << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria pass" : fmt("%d criteria failing", failed)) << std::endl;
    return failed == 0 ? 0 : 1;
}
