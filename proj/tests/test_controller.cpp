#include "doctest.h"

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "launcher/error.hpp"
#include "launcher/net/controller.hpp"
#include "launcher/sim/feed.hpp"

using namespace launcher;
using namespace launcher::net;

namespace {

// Simulator backend that records what the state machine did and when.
class RecordingBackend final : public Backend
{
public:
    explicit RecordingBackend(sim::SimConfig cfg) : inner_(std::move(cfg)) {}

    void apply_state(const LauncherState& s) override { inner_.apply_state(s); }
    void start_ramp(double now) override
    {
        ramp_starts.push_back(now);
        inner_.start_ramp(now);
    }
    std::vector<FeedEventKind> feed_tick(double now, bool stroke) override
    {
        auto events = inner_.feed_tick(now, stroke);
        if (!inner_.read_sensor() && !empty_since)
            empty_since = now;
        if (inner_.read_sensor())
            empty_since.reset();
        for (auto e : events)
            if (e == FeedEventKind::ball_released)
                releases.push_back(now);
        return events;
    }
    bool read_sensor() const override { return inner_.read_sensor(); }
    void stir() override
    {
        stirs.push_back(now_hint());
        if (empty_since && !first_stir_delay)
            first_stir_delay = now_hint() - *empty_since;
        inner_.stir();
    }
    double tick() const override { return inner_.tick(); }
    double stroke_duration(double gain) const override { return inner_.stroke_duration(gain); }
    std::optional<Trajectory> last_trajectory() const override { return inner_.last_trajectory(); }

    sim::SimLauncher& sim() { return inner_.sim(); }

    // The controller calls stir() from inside a pass; the test tracks the
    // clock it is driving.
    double clock = 0.0;
    double now_hint() const { return clock; }

    std::vector<double> ramp_starts;
    std::vector<double> releases;
    std::vector<double> stirs;
    std::optional<double> empty_since;
    std::optional<double> first_stir_delay;

private:
    SimBackend inner_;
};

struct Rig
{
    RecordingBackend* backend = nullptr;
    std::optional<Controller> ctl;
    double now = 0.0;
    std::int64_t next_id = 1;
    std::vector<Outbound> events;

    explicit Rig(ControllerConfig cfg = {}, sim::SimConfig sim = {})
    {
        auto b = std::make_unique<RecordingBackend>(std::move(sim));
        backend = b.get();
        ctl.emplace(std::move(b), cfg, now);
    }

    nlohmann::json send(nlohmann::json body, SessionId from = 1)
    {
        body["id"] = next_id++;
        backend->clock = now;
        auto r = ctl->handle_frame(body.dump(), from, now);
        collect();
        return r;
    }

    // Steps the simulated clock one control pass at a time.
    void run_until(double t)
    {
        const double tick = ctl->backend().tick();
        while (now + tick <= t + 1e-12) {
            now += tick;
            backend->clock = now;
            ctl->advance(now);
            collect();
        }
    }

    void collect()
    {
        for (auto& o : ctl->take_outbox())
            events.push_back(std::move(o));
    }

    int count(std::string_view type) const
    {
        int n = 0;
        for (const auto& e : events)
            n += e.frame["event"]["type"] == type;
        return n;
    }
};

sim::SimConfig clogging_sim(double clog_probability)
{
    sim::SimConfig cfg;
    cfg.rng_seed = 11;
    cfg.feed.clog_probability = clog_probability;
    return cfg;
}

} // namespace

TEST_CASE("ping echoes the id and the current state")
{
    Rig rig;
    const auto r = rig.send({{"cmd", "ping"}});
    CHECK(r["id"] == 1);
    CHECK(r["ok"] == true);
    CHECK(r["pong"] == true);
    CHECK(r["state"]["altitude_deg"] == doctest::Approx(19.9));
    CHECK(r.contains("t_unix_s"));
}

TEST_CASE("undecodable frames get an error response with a null id")
{
    Rig rig;
    for (const char* frame : {"", "not json", "[1,2]", "{\"cmd\":\"ping\"}", "{\"id\":\"7\",\"cmd\":\"ping\"}",
                              "{\"id\":1.5,\"cmd\":\"ping\"}", "{\"id\":18446744073709551615,\"cmd\":\"ping\"}"}) {
        const auto r = rig.ctl->handle_frame(frame, 1, 0.0);
        CHECK(r["ok"] == false);
        CHECK(r["id"].is_null());
        CHECK(r["error"].is_string());
    }
}

TEST_CASE("unknown commands and unexpected fields are rejected with the id echoed")
{
    Rig rig;
    auto r = rig.ctl->handle_frame(R"({"id":42,"cmd":"dance"})", 1, 0.0);
    CHECK(r["id"] == 42);
    CHECK(r["ok"] == false);
    r = rig.send({{"cmd", "set_wheels"}, {"bottom", 1}, {"top_left", 1}, {"top_right", 1}, {"speed", 3}});
    CHECK(r["ok"] == false);
    CHECK(rig.ctl->state().wheels.bottom == 0.0);
}

TEST_CASE("set_wheels and set_orientation validate before changing anything")
{
    Rig rig;
    auto r = rig.send({{"cmd", "set_wheels"}, {"bottom", 40.0}, {"top_left", 40.0}, {"top_right", 40.0}});
    CHECK(r["ok"] == true);
    CHECK(r["state"]["wheels"]["top_right"] == 40.0);

    r = rig.send({{"cmd", "set_orientation"}, {"azimuth_deg", 0.0}, {"altitude_deg", 50.0}});
    CHECK(r["ok"] == false);
    CHECK(r["state"]["altitude_deg"] == doctest::Approx(19.9));

    r = rig.send({{"cmd", "set_wheels"}, {"bottom", 40.0}, {"top_left", 140.0}, {"top_right", 40.0}});
    CHECK(r["ok"] == false);
    CHECK(rig.ctl->state().wheels.top_left == 40.0);

    r = rig.send({{"cmd", "set_wheels"}, {"bottom", "40"}, {"top_left", 40.0}, {"top_right", 40.0}});
    CHECK(r["ok"] == false);
}

TEST_CASE("interleaved writers: last writer wins, both acknowledged")
{
    Rig rig;
    const auto a = rig.send({{"cmd", "set_wheels"}, {"bottom", 10.0}, {"top_left", 10.0}, {"top_right", 10.0}}, 1);
    const auto b = rig.send({{"cmd", "set_wheels"}, {"bottom", 20.0}, {"top_left", 20.0}, {"top_right", 20.0}}, 2);
    CHECK(a["ok"] == true);
    CHECK(b["ok"] == true);
    CHECK(rig.ctl->state().wheels.bottom == 20.0);
}

TEST_CASE("configure accepts seconds or continuous and rejects bad values")
{
    Rig rig;
    auto r = rig.send({{"cmd", "configure"}, {"ramp_up_time", "continuous"}, {"stroke_gain", 10.0}});
    CHECK(r["ok"] == true);
    CHECK(r["state"]["ramp_up_time"] == "continuous");
    CHECK(rig.backend->ramp_starts.size() == 1);
    r = rig.send({{"cmd", "configure"}, {"ramp_up_time", 1.5}});
    CHECK(r["state"]["ramp_up_time"] == 1.5);
    r = rig.send({{"cmd", "configure"}, {"ramp_up_time", "forever"}});
    CHECK(r["ok"] == false);
    r = rig.send({{"cmd", "configure"}, {"pinch_diameter_mm", 41.0}});
    CHECK(r["ok"] == false);
    r = rig.send({{"cmd", "configure"}, {"stroke_gain", 0.0}});
    CHECK(r["ok"] == false);
    CHECK(rig.ctl->state().stroke_gain == 10.0);
}

TEST_CASE("random request streams never break state validity or id pairing")
{
    Rig rig;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> wide(-200.0, 200.0);
    std::uniform_int_distribution<int> pick(0, 5);
    for (int i = 0; i < 2000; ++i) {
        nlohmann::json body;
        switch (pick(rng)) {
        case 0:
            body = {{"cmd", "set_wheels"}, {"bottom", wide(rng)}, {"top_left", wide(rng) / 2}, {"top_right", 50.0}};
            break;
        case 1:
            body = {{"cmd", "set_orientation"}, {"azimuth_deg", wide(rng) / 8}, {"altitude_deg", wide(rng) / 4}};
            break;
        case 2:
            body = {{"cmd", "configure"}, {"stroke_gain", wide(rng)}, {"pinch_diameter_mm", 30.0 + wide(rng) / 20}};
            break;
        case 3:
            body = {{"cmd", "get_state"}};
            break;
        case 4:
            body = {{"cmd", "configure"}, {"ramp_up_time", wide(rng) / 50}};
            break;
        default:
            body = {{"cmd", "ping"}};
            break;
        }
        const auto expected_id = rig.next_id;
        const auto r = rig.send(body);
        REQUIRE(r["id"] == expected_id);
        CHECK_NOTHROW(rig.ctl->state().validate());
        LauncherState echoed = r["state"].get<LauncherState>();
        CHECK(echoed == rig.ctl->state());
    }
}

TEST_CASE("launch_at starts the ramp one lead time early and releases on target")
{
    Rig rig;
    rig.send({{"cmd", "set_wheels"}, {"bottom", 38.0}, {"top_left", 38.0}, {"top_right", 38.0}});
    rig.send({{"cmd", "configure"}, {"ramp_up_time", 3.0}});
    const double target = rig.now + 5.0;
    const auto r = rig.send({{"cmd", "launch_at"}, {"t_monotonic_s", target}});
    REQUIRE(r["ok"] == true);
    CHECK(r["launch"]["best_effort"] == false);

    const double stroke = sim::stroke_time(5.0, sim::FeedParams{});
    rig.run_until(target + 1.0);
    REQUIRE(rig.backend->ramp_starts.size() == 1);
    CHECK(std::abs(rig.backend->ramp_starts[0] - (target - 3.0 - stroke)) <= 0.02);
    REQUIRE(rig.backend->releases.size() == 1);
    CHECK(std::abs(rig.backend->releases[0] - target) <= 0.05);
    REQUIRE(rig.count("launched") == 1);
    const auto& ev = rig.events.back().frame["event"];
    CHECK(ev["request_id"] == r["id"]);
    CHECK(ev["target_s"] == doctest::Approx(target));
}

TEST_CASE("launch_at accepts wall-clock targets and rejects past ones")
{
    Rig rig;
    const double offset = 1.7e9;
    auto r = rig.ctl->handle_frame(
        nlohmann::json{{"id", 1}, {"cmd", "launch_at"}, {"t_unix_s", offset - 1.0}}.dump(), 1, 0.0, offset);
    CHECK(r["ok"] == false);
    r = rig.ctl->handle_frame(nlohmann::json{{"id", 2}, {"cmd", "launch_at"}, {"t_monotonic_s", -1.0}}.dump(), 1, 0.0,
                              offset);
    CHECK(r["ok"] == false);
    r = rig.ctl->handle_frame(
        nlohmann::json{{"id", 3}, {"cmd", "launch_at"}, {"t_unix_s", offset + 4.0}}.dump(), 1, 0.0, offset);
    CHECK(r["ok"] == true);
    CHECK(r["launch"]["target_s"] == doctest::Approx(4.0));
    r = rig.ctl->handle_frame(
        nlohmann::json{{"id", 4}, {"cmd", "launch_at"}, {"t_unix_s", 1.0}, {"t_monotonic_s", 1.0}}.dump(), 1, 0.0,
        offset);
    CHECK(r["ok"] == false);
}

TEST_CASE("a target closer than the lead time launches at once and is flagged best effort")
{
    Rig rig;
    const auto r = rig.send({{"cmd", "launch_at"}, {"t_monotonic_s", rig.now + 0.5}});
    REQUIRE(r["ok"] == true);
    CHECK(r["launch"]["best_effort"] == true);
    rig.run_until(4.0);
    CHECK(rig.count("launched") == 1);
}

TEST_CASE("launch from the default state is announced within ramp + stroke + 0.5 s")
{
    Rig rig;
    const auto r = rig.send({{"cmd", "launch"}, {"trajectory", true}});
    REQUIRE(r["ok"] == true);
    const double budget = 2.0 + sim::stroke_time(5.0, sim::FeedParams{}) + 0.5;
    CHECK(r["launch"]["delay_s"].get<double>() < budget);
    rig.run_until(budget);
    REQUIRE(rig.count("launched") == 1);
    const auto ev = parse_event(rig.events.back().frame["event"]);
    CHECK(ev.request_id == r["id"].get<std::int64_t>());
    REQUIRE(ev.trajectory);
    CHECK(ev.trajectory->samples.size() > 50);
    CHECK(rig.events.back().to == 1);
}

TEST_CASE("queued launches fire in order with non-decreasing release times")
{
    Rig rig;
    rig.send({{"cmd", "configure"}, {"ramp_up_time", 0.5}});
    std::vector<std::int64_t> ids;
    for (int i = 0; i < 5; ++i)
        ids.push_back(rig.send({{"cmd", "launch"}})["id"].get<std::int64_t>());
    rig.run_until(10.0);
    REQUIRE(rig.count("launched") == 5);
    double last = -1.0;
    for (std::size_t i = 0; i < 5; ++i) {
        const auto ev = parse_event(rig.events[i].frame["event"]);
        CHECK(ev.request_id == ids[i]);
        CHECK(ev.t_monotonic_s > last);
        last = ev.t_monotonic_s;
    }
}

TEST_CASE("a full queue rejects further launches")
{
    ControllerConfig cfg;
    cfg.max_pending_launches = 3;
    Rig rig(cfg);
    for (int i = 0; i < 3; ++i)
        CHECK(rig.send({{"cmd", "launch"}})["ok"] == true);
    CHECK(rig.send({{"cmd", "launch"}})["ok"] == false);
}

TEST_CASE("supervision: a filled channel is never stirred")
{
    Rig rig;
    rig.run_until(10.0);
    CHECK(rig.backend->stirs.empty());
    CHECK(rig.ctl->stats().stirs == 0);
}

TEST_CASE("supervision: a clogged feed is stirred within 300 ms of the sensor going empty")
{
    Rig rig({}, clogging_sim(1.0));
    rig.send({{"cmd", "configure"}, {"ramp_up_time", "continuous"}});
    for (int i = 0; i < 3; ++i) {
        rig.send({{"cmd", "launch"}});
        rig.run_until(rig.now + 0.8);
    }
    rig.run_until(rig.now + 1.0);
    REQUIRE(rig.backend->first_stir_delay);
    CHECK(*rig.backend->first_stir_delay <= 0.3);
    CHECK(rig.count("clog_resolved") >= 1);
}

TEST_CASE("supervision: after-launch mode stirs exactly once per launch")
{
    ControllerConfig cfg;
    cfg.supervision = SupervisionMode::after_launch;
    Rig rig(cfg, clogging_sim(0.3));
    rig.send({{"cmd", "configure"}, {"ramp_up_time", "continuous"}});
    for (int i = 0; i < 10; ++i) {
        rig.send({{"cmd", "launch"}});
        rig.run_until(rig.now + 1.5);
    }
    CHECK(rig.ctl->stats().launched == 10);
    CHECK(rig.backend->stirs.size() == 10);
}

TEST_CASE("without the stirrer a clogged feed starves and the launch reports it")
{
    ControllerConfig cfg;
    cfg.supervision = SupervisionMode::off;
    Rig rig(cfg, clogging_sim(1.0));
    rig.send({{"cmd", "configure"}, {"ramp_up_time", "continuous"}});
    for (int i = 0; i < 7; ++i) {
        rig.send({{"cmd", "launch"}});
        rig.run_until(rig.now + 1.0);
    }
    CHECK(rig.count("launched") == 5);
    CHECK(rig.count("feed_starved") == 2);
    const auto ev = parse_event(rig.events.back().frame["event"]);
    CHECK(ev.type == EventType::feed_starved);
    CHECK(ev.request_id.has_value());
}

TEST_CASE("100 launches at irregular 0.8-5 s intervals complete without starvation")
{
    Rig rig({}, clogging_sim(0.02));
    rig.send({{"cmd", "configure"}, {"ramp_up_time", "continuous"}});
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> gap(0.8, 5.0);
    double t = rig.now + 1.0;
    int late = 0;
    for (int i = 0; i < 100; ++i) {
        t += gap(rng);
        rig.run_until(t - 0.75);
        const auto r = rig.send({{"cmd", "launch_at"}, {"t_monotonic_s", t}});
        REQUIRE(r["ok"] == true);
        late += r["launch"]["best_effort"] == true;
    }
    rig.run_until(t + 1.0);
    CHECK(late == 0);
    CHECK(rig.ctl->stats().launched == 100);
    CHECK(rig.ctl->stats().feed_starved == 0);
    for (const auto& o : rig.events) {
        const auto ev = parse_event(o.frame["event"]);
        if (ev.type == EventType::launched)
            CHECK(std::abs(ev.t_monotonic_s - *ev.target_s) <= 0.05);
    }
}

TEST_CASE("shutdown is acknowledged and flagged")
{
    Rig rig;
    CHECK_FALSE(rig.ctl->shutdown_requested());
    CHECK(rig.send({{"cmd", "shutdown"}})["ok"] == true);
    CHECK(rig.ctl->shutdown_requested());
}

TEST_CASE("supervision mode names round-trip")
{
    for (auto m : {SupervisionMode::off, SupervisionMode::sensor, SupervisionMode::after_launch})
        CHECK(parse_supervision_mode(to_string(m)) == m);
    CHECK_THROWS_AS(parse_supervision_mode("sometimes"), RangeError);
}

TEST_CASE("event frames round-trip")
{
    Event e;
    e.type = EventType::launched;
    e.request_id = 9;
    e.t_monotonic_s = 12.5;
    e.t_unix_s = 1.7e9;
    e.target_s = 12.49;
    e.landing = EventLanding{2.1, -0.3, 12.9, true};
    Trajectory traj;
    traj.samples.push_back({0.1, Vec3(1, 2, 3)});
    e.trajectory = traj;
    const auto back = parse_event(event_frame(e)["event"]);
    CHECK(back.request_id == 9);
    CHECK(back.target_s == doctest::Approx(12.49));
    REQUIRE(back.landing);
    CHECK(back.landing->on_table);
    CHECK(back.landing->y == -0.3);
    REQUIRE(back.trajectory);
    CHECK(back.trajectory->samples[0].position.z() == 3.0);
    CHECK_THROWS_AS(parse_event(nlohmann::json{{"type", "exploded"}}), FormatError);
}
