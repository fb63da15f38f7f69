// launcherctl: run the control server, drive simulated experiments,
// generate datasets, and train / evaluate target shooting.
//
// Exit codes: 0 success, 2 usage error, 3 runtime error.

#include <algorithm>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/asio/io_context.hpp>
#include <boost/asio/signal_set.hpp>

#include "CLI11.hpp"
#include "launcher/error.hpp"
#include "launcher/lab/dataset.hpp"
#include "launcher/lab/experiment.hpp"
#include "launcher/lab/trajectory_io.hpp"
#include "launcher/net/client.hpp"
#include "launcher/net/server.hpp"
#include "launcher/shooting/target_shooting.hpp"
#include "launcher/shooting/train.hpp"

namespace {

using namespace launcher;

constexpr int exit_usage = 2;
constexpr int exit_runtime = 3;

/// Bad combination of otherwise well-formed flags.
class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

net::ServerConfig load_config(const std::string& path)
{
    net::ServerConfig cfg;
    if (path.empty())
        return cfg;
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot read config file " + path);
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded())
        throw FormatError("config file " + path + " is not valid JSON");
    return j.get<net::ServerConfig>();
}

/// Writes to the file, or stdout when the path is empty or "-".
template <class Fn>
void write_output(const std::string& path, Fn&& fn)
{
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw FormatError("cannot write " + path);
    fn(out);
    if (!out)
        throw FormatError("failed writing " + path);
}

net::Endpoint resolve_endpoint(const std::string& flag)
{
    return flag.empty() ? net::endpoint_from_env() : net::Endpoint::parse(flag);
}

std::string fixed(double v, int digits)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

// ---- serve -------------------------------------------------------------

struct ServeArgs
{
    std::optional<std::uint16_t> port;
    std::optional<std::uint16_t> gateway_port;
    std::optional<std::uint64_t> sim_seed;
    std::optional<std::string> bind;
    std::optional<std::string> static_dir;
    std::optional<std::string> supervision;
    bool no_gateway = false;
};

void apply_serve_flags(net::ServerConfig& cfg, const ServeArgs& a)
{
    if (a.port)
        cfg.tcp_port = *a.port;
    if (a.gateway_port)
        cfg.gateway_port = *a.gateway_port;
    if (a.sim_seed)
        cfg.sim.rng_seed = *a.sim_seed;
    if (a.bind)
        cfg.bind_address = *a.bind;
    if (a.static_dir)
        cfg.static_dir = *a.static_dir;
    if (a.supervision)
        cfg.controller.supervision = net::parse_supervision_mode(*a.supervision);
    if (a.no_gateway)
        cfg.gateway = false;
    cfg.validate();
}

int cmd_serve(const net::ServerConfig& cfg)
{
    net::Server server(cfg);
    std::cout << "launcher control server listening on " << cfg.bind_address << ':'
              << server.tcp_port();
    if (cfg.gateway)
        std::cout << ", console gateway on http://" << cfg.bind_address << ':' << server.gateway_port()
                  << "/";
    std::cout << " (supervision " << net::to_string(cfg.controller.supervision) << ")" << std::endl;

    boost::asio::io_context signals_io;
    boost::asio::signal_set signals(signals_io, SIGINT, SIGTERM);
    signals.async_wait([&](const boost::system::error_code& ec, int) {
        if (!ec)
            server.stop();
    });
    std::thread waiter([&] {
        server.wait();
        signals_io.stop();
    });
    signals_io.run();
    server.stop();
    waiter.join();
    std::cout << "launcher control server stopped" << std::endl;
    return 0;
}

// ---- sweep -------------------------------------------------------------

struct SweepArgs
{
    std::string param;
    std::vector<std::string> values;
    int launches = 200;
    std::string out;
    std::uint64_t seed = 1;
    bool jump = false;
    std::string endpoint;
    bool remote = false;
};

int cmd_sweep(const net::ServerConfig& cfg, const SweepArgs& a)
{
    std::vector<std::string> values;
    for (const auto& v : a.values)
        if (!v.empty())
            values.push_back(v);
    if (values.empty())
        throw UsageError("--values needs at least one value");
    if (a.launches < 2)
        throw UsageError("--launches must be at least 2");
    const auto param = lab::parse_sweep_param(a.param);
    lab::ExperimentOptions options;
    options.orientation_jump = a.jump;
    const auto base = lab::default_experiment_state();

    std::vector<lab::SweepSeries> series;
    if (a.remote || !a.endpoint.empty()) {
        net::Session session(resolve_endpoint(a.endpoint));
        net::ClientLaunchSource source(session);
        for (const auto& v : values) {
            const auto state = lab::with_sweep_value(base, param, v);
            series.push_back({v, lab::run_accuracy_experiment(source, state, a.launches, options)});
        }
    } else {
        auto sim = cfg.sim;
        sim.rng_seed = a.seed;
        series = lab::run_sweep(sim, base, param, values, a.launches, options);
    }

    const auto rows = lab::sweep_rows(param, series);
    write_output(a.out, [&](std::ostream& out) { lab::write_stats_csv(out, rows); });
    if (!a.out.empty() && a.out != "-") {
        for (const auto& s : series) {
            const auto& st = s.result.stats;
            std::cout << lab::to_string(param) << '=' << s.value << ": n=" << st.n
                      << " sigma_x=" << fixed(st.sigma_x * 1e3, 2) << " mm"
                      << " sigma_y=" << fixed(st.sigma_y * 1e3, 2) << " mm"
                      << " sigma_avg=" << fixed((st.sigma_x + st.sigma_y) * 500.0, 2) << " mm\n";
        }
        std::cout << "wrote " << rows.size() << " rows to " << a.out << '\n';
    }
    return 0;
}

// ---- dataset -----------------------------------------------------------

struct DatasetArgs
{
    int n = 3761;
    std::string out;
    std::uint64_t seed = 1;
    double miss_fraction = 0.10;
};

int cmd_dataset(const net::ServerConfig& cfg, const DatasetArgs& a)
{
    if (a.n < 1)
        throw UsageError("--n must be at least 1");
    if (a.miss_fraction < 0.0 || a.miss_fraction > 1.0)
        throw UsageError("--miss-fraction must be in [0, 1]");
    lab::DatasetOptions options;
    options.n = a.n;
    options.seed = a.seed;
    options.aimed_miss_fraction = a.miss_fraction;
    options.sim = cfg.sim;
    const auto summary = lab::write_dataset(options, a.out);
    std::cout << "wrote " << summary.total << " trajectories to " << a.out << '\n';
    for (std::size_t g = 0; g < summary.per_group.size(); ++g)
        std::cout << "  group " << g + 1 << ": " << summary.per_group[g] << '\n';
    std::cout << "on-table landings: " << summary.on_table << " / " << summary.total << " ("
              << fixed(100.0 * summary.on_table_fraction(), 1) << " %)\n";
    return 0;
}

// ---- train -------------------------------------------------------------

struct TrainArgs
{
    std::string data;
    std::string model = "model.json";
    std::string loss_csv;
    bool published_net = false;
    std::optional<int> epochs;
    std::uint64_t seed = 1;
    bool all_wheels = false;
};

int cmd_train(const TrainArgs& a)
{
    auto cfg = a.published_net ? shooting::published_train_config() : shooting::desk_train_config();
    if (a.epochs)
        cfg.epochs = *a.epochs;
    cfg.seed = a.seed;
    cfg.validate();

    const auto trajectories = lab::load_trajectory_dir(a.data);
    const auto set = shooting::build_training_set(trajectories, !a.all_wheels);
    std::cout << "training on " << set.size() << " samples from " << trajectories.size()
              << " trajectories (" << (a.published_net ? "published" : "desk") << " network, "
              << cfg.epochs << " epochs)" << std::endl;
    const auto t0 = std::chrono::steady_clock::now();
    const auto result = shooting::train(set.inputs, set.targets, cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    shooting::save_model(a.model, result.model);
    if (!a.loss_csv.empty())
        write_output(a.loss_csv, [&](std::ostream& out) { shooting::write_loss_csv(out, result.history); });
    std::cout << "final loss " << result.history.back().loss << " after " << fixed(seconds, 1)
              << " s; model written to " << a.model << '\n';
    return 0;
}

// ---- eval --------------------------------------------------------------

struct EvalArgs
{
    std::string model;
    int grid = 20;
    std::string out;
    std::uint64_t seed = 77;
    std::uint64_t camera_seed = 1;
    std::string endpoint;
    bool remote = false;
};

int cmd_eval(const net::ServerConfig& cfg, const EvalArgs& a)
{
    if (a.grid != 1 && a.grid != 20)
        throw UsageError("--grid must be 1 or 20");
    const auto model = shooting::load_model(a.model);
    const auto targets = shooting::target_grid(a.grid, cfg.sim.table_height);

    shooting::GridReport report;
    if (a.remote || !a.endpoint.empty()) {
        net::Session session(resolve_endpoint(a.endpoint));
        net::ClientLaunchSource source(session);
        report = shooting::evaluate_grid(model, source, targets);
    } else {
        auto sim_cfg = cfg.sim;
        sim_cfg.rng_seed = a.seed;
        sim_cfg.camera_seed = a.camera_seed;
        sim::SimLauncher sim(sim_cfg);
        lab::SimLaunchSource source(sim);
        report = shooting::evaluate_grid(model, source, targets);
    }
    write_output(a.out, [&](std::ostream& out) { shooting::write_grid_csv(out, report); });
    if (!a.out.empty() && a.out != "-")
        std::cout << "mean landing error " << fixed(report.mean_error, 4) << " m over "
                  << report.results.size() << " targets\n";
    return 0;
}

// ---- client commands ---------------------------------------------------

int cmd_ping(const std::string& endpoint, int count, int timeout_ms)
{
    if (count < 1)
        throw UsageError("--count must be at least 1");
    const auto ep = resolve_endpoint(endpoint);
    net::Session session(ep, std::chrono::milliseconds(timeout_ms));
    std::vector<double> ms;
    LauncherState state;
    for (int i = 0; i < count; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        state = session.ping();
        ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    std::sort(ms.begin(), ms.end());
    const auto pct = [&](double p) { return ms[static_cast<std::size_t>(p * (ms.size() - 1))]; };
    std::cout << "pong from " << ep.to_string() << ": " << count << " round trips, median "
              << fixed(pct(0.5), 3) << " ms, p99 " << fixed(pct(0.99), 3) << " ms\n"
              << nlohmann::json(state).dump() << '\n';
    return 0;
}

int cmd_launch(const std::string& endpoint, std::optional<double> in_seconds)
{
    net::Session session(resolve_endpoint(endpoint));
    net::LaunchTicket ticket;
    if (in_seconds) {
        if (*in_seconds < 0.0)
            throw UsageError("--in must not be negative");
        const double now_unix =
            std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();
        ticket = session.launch_at_unix(now_unix + *in_seconds);
    } else {
        ticket = session.launch();
    }
    const auto ev = session.wait_launch(ticket);
    nlohmann::json out = net::event_frame(ev)["event"];
    out["best_effort"] = ticket.best_effort;
    std::cout << out.dump() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Three-wheel table tennis ball launcher: control server, experiments and target shooting"};
    app.require_subcommand(0, 1);

    std::string config_path;
    bool dump_config = false;
    app.add_option("--config", config_path, "JSON config file (server, supervision and sim sections)")
        ->check(CLI::ExistingFile);
    app.add_flag("--dump-config", dump_config, "Print the effective configuration as JSON and exit");

    ServeArgs serve;
    auto* serve_cmd = app.add_subcommand("serve", "Run the control server on the simulator until SIGINT/SIGTERM or a shutdown request");
    serve_cmd->add_option("--port", serve.port, "TCP port for the JSON protocol (default 5555)");
    serve_cmd->add_option("--gateway-port", serve.gateway_port, "HTTP/WebSocket port for consoles (default 8080)");
    serve_cmd->add_option("--sim-seed", serve.sim_seed, "Simulator seed");
    serve_cmd->add_option("--bind", serve.bind, "Bind address (default 127.0.0.1)");
    serve_cmd->add_option("--static-dir", serve.static_dir, "Console assets served from /");
    serve_cmd->add_option("--supervision", serve.supervision, "Stirrer supervision: off, sensor, after_launch")
        ->check(CLI::IsMember({"off", "sensor", "after_launch"}));
    serve_cmd->add_flag("--no-gateway", serve.no_gateway, "Serve only the TCP protocol");

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Landing-accuracy sweep over one system parameter; writes stats CSV");
    sweep_cmd->add_option("--param", sweep.param, "ramp_up, stroke_gain or pinch")
        ->required()
        ->check(CLI::IsMember({"ramp_up", "stroke_gain", "pinch"}));
    sweep_cmd->add_option("--values", sweep.values, "Comma-separated values (ramp_up also takes 'continuous')")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--launches", sweep.launches, "Launches per value")->capture_default_str();
    sweep_cmd->add_option("--out", sweep.out, "Output CSV (default stdout)");
    sweep_cmd->add_option("--seed", sweep.seed, "Simulator seed")->capture_default_str();
    sweep_cmd->add_flag("--jump", sweep.jump, "Visit the displaced orientation before every launch");
    sweep_cmd->add_option("--endpoint", sweep.endpoint, "Run against a server at host:port instead of the simulator");
    sweep_cmd->add_flag("--remote", sweep.remote, "Run against the server named by LAUNCHER_ENDPOINT");

    DatasetArgs dataset;
    auto* dataset_cmd = app.add_subcommand("dataset", "Generate the simulated training data set (one JSONL file per trajectory)");
    dataset_cmd->add_option("--n", dataset.n, "Number of trajectories")->capture_default_str();
    dataset_cmd->add_option("--out", dataset.out, "Output directory")->required();
    dataset_cmd->add_option("--seed", dataset.seed, "Generator seed")->capture_default_str();
    dataset_cmd->add_option("--miss-fraction", dataset.miss_fraction, "Share aimed just off the table")
        ->capture_default_str();

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "Train the target-shooting network on a trajectory directory");
    train_cmd->add_option("--data", train.data, "Trajectory directory (.jsonl / .csv)")->required()->check(CLI::ExistingDirectory);
    train_cmd->add_option("--model", train.model, "Model file to write")->capture_default_str();
    train_cmd->add_option("--loss-csv", train.loss_csv, "Per-epoch loss CSV");
    train_cmd->add_flag("--published-net", train.published_net, "Published network and hyperparameters instead of the desk preset");
    train_cmd->add_option("--epochs", train.epochs, "Override the preset's epoch count");
    train_cmd->add_option("--seed", train.seed, "Training seed")->capture_default_str();
    train_cmd->add_flag("--all-wheels", train.all_wheels, "Also use trajectories with unequal wheel speeds");

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Shoot at the target grid with a trained model; writes a grid CSV");
    eval_cmd->add_option("--model", eval.model, "Model file")->required();
    eval_cmd->add_option("--grid", eval.grid, "Targets: 20 (5 x 4 grid) or 1 (centre)")->capture_default_str();
    eval_cmd->add_option("--out", eval.out, "Output CSV (default stdout)");
    eval_cmd->add_option("--seed", eval.seed, "Launcher noise seed")->capture_default_str();
    eval_cmd->add_option("--camera-seed", eval.camera_seed,
                         "Tracking-system session; the dataset seed to measure with the training camera")
        ->capture_default_str();
    eval_cmd->add_option("--endpoint", eval.endpoint, "Shoot on a server at host:port instead of the simulator");
    eval_cmd->add_flag("--remote", eval.remote, "Shoot on the server named by LAUNCHER_ENDPOINT");

    std::string ping_endpoint;
    int ping_count = 1;
    int ping_timeout = 500;
    auto* ping_cmd = app.add_subcommand("ping", "Round-trip check against a running server");
    ping_cmd->add_option("--endpoint", ping_endpoint, "host:port (default LAUNCHER_ENDPOINT or 127.0.0.1:5555)");
    ping_cmd->add_option("--count", ping_count, "Number of pings")->capture_default_str();
    ping_cmd->add_option("--timeout-ms", ping_timeout, "Per-request timeout")->capture_default_str();

    std::string launch_endpoint;
    std::optional<double> launch_in;
    auto* launch_cmd = app.add_subcommand("launch", "Fire one ball on a running server and print the launched event");
    launch_cmd->add_option("--endpoint", launch_endpoint, "host:port (default LAUNCHER_ENDPOINT or 127.0.0.1:5555)");
    launch_cmd->add_option("--in", launch_in, "Schedule the release this many seconds from now");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        auto cfg = load_config(config_path);
        if (serve_cmd->parsed())
            apply_serve_flags(cfg, serve);
        if (dump_config) {
            std::cout << nlohmann::json(cfg).dump(2) << '\n';
            return 0;
        }
        if (app.get_subcommands().empty())
            throw UsageError("a subcommand is required");
        if (serve_cmd->parsed())
            return cmd_serve(cfg);
        if (sweep_cmd->parsed())
            return cmd_sweep(cfg, sweep);
        if (dataset_cmd->parsed())
            return cmd_dataset(cfg, dataset);
        if (train_cmd->parsed())
            return cmd_train(train);
        if (eval_cmd->parsed())
            return cmd_eval(cfg, eval);
        if (ping_cmd->parsed())
            return cmd_ping(ping_endpoint, ping_count, ping_timeout);
        if (launch_cmd->parsed())
            return cmd_launch(launch_endpoint, launch_in);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\nRun with --help for more information.\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_usage;
}
