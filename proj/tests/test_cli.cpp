#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <boost/asio/ip/tcp.hpp>

#include "launcher/net/server.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult
{
    int code = -1;
    std::string out;
};

// Runs launcherctl through the shell, capturing stdout (stderr discarded).
RunResult run(const std::string& args)
{
    const std::string cmd = std::string("\"") + LAUNCHERCTL_PATH + "\" " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0)
        r.out.append(buf, n);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir
{
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() / ("launcherctl-test-" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("usage errors exit with 2")
{
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("sweep --param ramp_up").code == 2);
    CHECK(run("sweep --param wobble --values 1").code == 2);
    CHECK(run("sweep --param ramp_up --values \"\"").code == 2);
    CHECK(run("eval").code == 2);
    CHECK(run("eval --model m.json --grid 7").code == 2);
    CHECK(run("dataset --n 0 --out x").code == 2);
    CHECK(run("--help").code == 0);
}

TEST_CASE("runtime errors exit with 3")
{
    TempDir tmp;
    SUBCASE("missing model")
    {
        CHECK(run("eval --model " + (tmp.path / "absent.json").string()).code == 3);
    }
    SUBCASE("occupied port")
    {
        boost::asio::io_context io;
        boost::asio::ip::tcp::acceptor busy(io, {boost::asio::ip::make_address("127.0.0.1"), 0});
        const auto port = busy.local_endpoint().port();
        CHECK(run("serve --no-gateway --port " + std::to_string(port)).code == 3);
    }
    SUBCASE("malformed config")
    {
        const auto cfg = tmp.path / "bad.json";
        std::ofstream(cfg) << "{\"tcp_port\": \"five\"}";
        CHECK(run("--config " + cfg.string() + " --dump-config").code == 3);
    }
    SUBCASE("no server to ping")
    {
        boost::asio::io_context io;
        boost::asio::ip::tcp::acceptor probe(io, {boost::asio::ip::make_address("127.0.0.1"), 0});
        const auto port = probe.local_endpoint().port();
        probe.close();
        CHECK(run("ping --endpoint 127.0.0.1:" + std::to_string(port)).code == 3);
    }
}

TEST_CASE("dump-config round-trips through --config")
{
    TempDir tmp;
    const auto first = run("--dump-config");
    REQUIRE(first.code == 0);
    const auto cfg = nlohmann::json::parse(first.out).get<launcher::net::ServerConfig>();
    CHECK(cfg.tcp_port == launcher::net::default_tcp_port);
    CHECK(cfg.gateway_port == launcher::net::default_gateway_port);

    const auto file = tmp.path / "cfg.json";
    std::ofstream(file) << first.out;
    const auto second = run("--config " + file.string() + " --dump-config");
    REQUIRE(second.code == 0);
    CHECK(second.out == first.out);

    const auto flags = run("--config " + file.string()
                           + " --dump-config serve --port 6001 --supervision after_launch --no-gateway");
    REQUIRE(flags.code == 0);
    const auto j = nlohmann::json::parse(flags.out);
    CHECK(j["tcp_port"] == 6001);
    CHECK(j["gateway"] == false);
    CHECK(j["supervision"]["mode"] == "after_launch");
}

TEST_CASE("sweep output is byte-identical across reruns and changes with the seed")
{
    TempDir tmp;
    const auto a = tmp.path / "a.csv", b = tmp.path / "b.csv", c = tmp.path / "c.csv";
    const std::string common = "sweep --param ramp_up --values 1,continuous --launches 12 ";
    REQUIRE(run(common + "--seed 9 --out " + a.string()).code == 0);
    REQUIRE(run(common + "--seed 9 --out " + b.string()).code == 0);
    REQUIRE(run(common + "--seed 10 --out " + c.string()).code == 0);
    const auto text = slurp(a);
    CHECK(text == slurp(b));
    CHECK(text != slurp(c));
    CHECK(text.rfind("series,n,", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("dataset, train and eval chain through files")
{
    TempDir tmp;
    const auto one = tmp.path / "one";
    REQUIRE(run("dataset --n 1 --out " + one.string()).code == 0);
    CHECK(std::distance(fs::directory_iterator(one), fs::directory_iterator{}) == 1);

    const auto data = tmp.path / "data";
    REQUIRE(run("dataset --n 30 --seed 4 --out " + data.string()).code == 0);
    CHECK(std::distance(fs::directory_iterator(data), fs::directory_iterator{}) == 30);

    const auto model = tmp.path / "model.json";
    const auto loss = tmp.path / "loss.csv";
    REQUIRE(run("train --data " + data.string() + " --epochs 5 --model " + model.string() + " --loss-csv "
                + loss.string())
                .code
            == 0);
    CHECK(fs::exists(model));
    const auto loss_text = slurp(loss);
    CHECK(std::count(loss_text.begin(), loss_text.end(), '\n') == 6); // header + 5 epochs

    const auto grid = run("eval --grid 20 --camera-seed 4 --model " + model.string());
    REQUIRE(grid.code == 0);
    CHECK(grid.out.rfind("target_x,", 0) == 0);
    CHECK(std::count(grid.out.begin(), grid.out.end(), '\n') == 21);
    CHECK(run("eval --grid 20 --camera-seed 4 --model " + model.string()).out == grid.out);
}
