#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "launcher/error.hpp"
#include "launcher/shooting/target_shooting.hpp"
#include "launcher/shooting/train.hpp"

using namespace launcher;
using namespace launcher::shooting;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed, double scale = 1.0)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, scale);
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i)
            m(i, j) = n(rng);
    return m;
}

struct LinearProblem
{
    Eigen::MatrixXd x, y;
};

LinearProblem linear_problem(Eigen::Index rows = 512)
{
    Eigen::Matrix3d a;
    a << 0.5, -1.0, 0.2, 0.3, 0.8, -0.6, -0.4, 0.1, 0.9;
    LinearProblem p;
    p.x = random_matrix(rows, 3, 11);
    p.y = p.x * a.transpose();
    return p;
}

TrainConfig small_config(int epochs)
{
    TrainConfig c;
    c.layers = {3, 16, 3};
    c.epochs = epochs;
    c.batch_size = 64;
    c.learning_rate = 1e-2;
    c.min_learning_rate = 1e-4;
    c.dropout = 0.0;
    c.seed = 5;
    return c;
}

double relative_error(double a, double b)
{
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8});
}

// Trajectory with `before` samples descending to the table and 8 after.
Trajectory bounce_trajectory(int before, double percent, bool equal = true)
{
    Trajectory t;
    t.id = "b";
    t.control.wheels = {percent, percent, equal ? percent : percent + 5.0};
    const double dt = 0.005, t0 = before * dt - 0.002;
    for (int i = 0; i < before + 8; ++i) {
        const double ti = i * dt;
        const double z = ti < t0 ? 0.76 - 3.0 * (ti - t0) : 0.76 + 2.5 * (ti - t0);
        t.samples.push_back({ti, Vec3(1.0 + 4.0 * ti, 0.0, z)});
    }
    return t;
}

} // namespace

TEST_CASE("standardize: mean 0 and sd 1, round trip, constant column")
{
    Eigen::MatrixXd rows = random_matrix(200, 3, 1, 3.0);
    rows.col(0).array() += 10.0;
    rows.col(2).setConstant(4.2);
    const Normalizer n = Normalizer::fit(rows);
    const Eigen::MatrixXd z = n.normalize(rows);
    CHECK(std::abs(z.col(0).mean()) < 1e-9);
    CHECK(std::sqrt(z.col(1).array().square().mean()) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(n.sd(2) == 1.0);
    CHECK(z.col(2).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((n.denormalize(z) - rows).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(Normalizer::fit(Eigen::MatrixXd(0, 3)), TrainingError);
}

TEST_CASE("zero-weight model outputs the target means")
{
    Mlp m({3, 8, 3}, 1);
    for (auto& w : m.weights())
        w.setZero();
    m.output_norm = {Eigen::Vector3d(1.0, 20.0, 38.0), Eigen::Vector3d(2.0, 3.0, 4.0)};
    const Eigen::MatrixXd out = m.predict(random_matrix(4, 3, 2));
    for (Eigen::Index i = 0; i < out.rows(); ++i)
        CHECK((out.row(i) - Eigen::RowVector3d(1.0, 20.0, 38.0)).norm() < 1e-15);
}

TEST_CASE("inference is deterministic")
{
    Mlp m({3, 16, 8, 3}, 7);
    const Eigen::MatrixXd x = random_matrix(5, 3, 3);
    CHECK(m.predict(x) == m.predict(x));
}

TEST_CASE("output change is bounded by the weight-norm Lipschitz constant")
{
    Mlp m({3, 32, 16, 3}, 9);
    m.input_norm = {Eigen::Vector3d(1, 0, 0.8), Eigen::Vector3d(0.5, 0.3, 0.2)};
    m.output_norm = {Eigen::Vector3d(0, 20, 38), Eigen::Vector3d(5, 4, 2)};
    double lipschitz = m.output_norm.sd.maxCoeff() / m.input_norm.sd.minCoeff();
    for (std::size_t l = 0; l < m.layers(); ++l) {
        lipschitz *= m.weights()[l].operatorNorm();
        if (l + 1 < m.layers())
            lipschitz *= 0.25; // max slope of the sigmoid
    }
    const Eigen::MatrixXd x = random_matrix(20, 3, 4);
    const Eigen::MatrixXd dx = random_matrix(20, 3, 5);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const Eigen::RowVectorXd step = dx.row(i).normalized() * 1e-6;
        const double change = (m.predict(x.row(i) + step) - m.predict(x.row(i))).norm();
        CHECK(change <= lipschitz * 1e-6 * (1.0 + 1e-6));
    }
}

TEST_CASE("backpropagation matches central finite differences")
{
    for (bool with_dropout : {false, true}) {
        Mlp m({3, 7, 5, 4, 3}, 21);
        for (auto& b : m.biases())
            b = random_matrix(b.size(), 1, 8, 0.3);
        const Eigen::MatrixXd x = random_matrix(10, 3, 12);
        const Eigen::MatrixXd y = random_matrix(10, 3, 13);
        std::mt19937_64 rng(2);
        const DropoutMasks masks = m.draw_masks(10, 0.1, rng);
        const DropoutMasks* mp = with_dropout ? &masks : nullptr;

        Gradients g;
        m.loss(x, y, &g, mp);
        const double h = 1e-6;
        double worst = 0.0;
        for (std::size_t l = 0; l < m.layers(); ++l) {
            for (Eigen::Index k = 0; k < m.weights()[l].size(); ++k) {
                double& p = m.weights()[l].data()[k];
                const double keep = p;
                p = keep + h;
                const double up = m.loss(x, y, nullptr, mp);
                p = keep - h;
                const double down = m.loss(x, y, nullptr, mp);
                p = keep;
                worst = std::max(worst, relative_error((up - down) / (2 * h), g.weights[l].data()[k]));
            }
            for (Eigen::Index k = 0; k < m.biases()[l].size(); ++k) {
                double& p = m.biases()[l](k);
                const double keep = p;
                p = keep + h;
                const double up = m.loss(x, y, nullptr, mp);
                p = keep - h;
                const double down = m.loss(x, y, nullptr, mp);
                p = keep;
                worst = std::max(worst, relative_error((up - down) / (2 * h), g.biases[l](k)));
            }
        }
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("a tiny network learns a linear map")
{
    const auto p = linear_problem();
    const auto r = train(p.x, p.y, small_config(500));
    CHECK(r.history.back().loss < 1e-3);
    // Loss averaged over consecutive 50-epoch windows never increases.
    double previous = INFINITY;
    for (std::size_t w = 0; w + 50 <= r.history.size(); w += 50) {
        double sum = 0.0;
        for (std::size_t e = w; e < w + 50; ++e)
            sum += r.history[e].loss;
        CHECK(sum / 50 <= previous);
        previous = sum / 50;
    }
}

TEST_CASE("training is bit-reproducible for a fixed seed, dropout included")
{
    const auto p = linear_problem(200);
    TrainConfig c = small_config(30);
    c.dropout = 0.1;
    const auto a = train(p.x, p.y, c);
    const auto b = train(p.x, p.y, c);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i)
        CHECK(a.history[i].loss == b.history[i].loss);
    CHECK(a.model.weights()[0] == b.model.weights()[0]);
}

TEST_CASE("shifting the inputs leaves the normalized loss history unchanged")
{
    const auto p = linear_problem(200);
    Eigen::MatrixXd shifted = p.x;
    shifted.rowwise() += Eigen::RowVector3d(100.0, -3.0, 0.5);
    const auto a = train(p.x, p.y, small_config(20));
    const auto b = train(shifted, p.y, small_config(20));
    for (std::size_t i = 0; i < a.history.size(); ++i)
        CHECK(b.history[i].loss == doctest::Approx(a.history[i].loss).epsilon(1e-9));
}

TEST_CASE("learning rate decays from the start value to the floor")
{
    const TrainConfig c = published_train_config();
    CHECK(learning_rate_at(c, 0) == doctest::Approx(1e-3));
    CHECK(learning_rate_at(c, c.epochs - 1) == doctest::Approx(1e-4));
    CHECK(learning_rate_at(c, 700) < learning_rate_at(c, 100));
    CHECK(c.layers == published_layers);
    CHECK(c.batch_size == 4096);
    CHECK(c.dropout == 0.1);
}

TEST_CASE("invalid training input")
{
    const auto p = linear_problem(50);
    TrainConfig c = small_config(5);
    c.epochs = 0;
    CHECK_THROWS_AS(train(p.x, p.y, c), RangeError);
    Eigen::MatrixXd bad = p.x;
    bad(3, 1) = NAN;
    bad.col(1).setConstant(NAN);
    CHECK_THROWS_AS(train(bad, p.y, small_config(5)), TrainingError);
    CHECK_THROWS_AS(train(p.x.leftCols(2), p.y, small_config(5)), TrainingError);
}

TEST_CASE("model JSON round trip and rejection of malformed files")
{
    Mlp m({3, 6, 3}, 3);
    m.input_norm = {Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(1, 1, 2)};
    const nlohmann::json j = m;
    const Mlp back = j.get<Mlp>();
    const Eigen::MatrixXd x = random_matrix(4, 3, 6);
    CHECK(back.predict(x) == m.predict(x));
    // Weights are stored row-major: row i of layer 0 belongs to input i.
    CHECK(j["layers"][0]["weights"][1].get<double>() == m.weights()[0](0, 1));

    nlohmann::json broken = j;
    broken["layers"][0]["weights"].erase(0);
    CHECK_THROWS_AS(broken.get<Mlp>(), FormatError);
    CHECK_THROWS_AS(nlohmann::json::parse(R"({"sizes":[3,3]})").get<Mlp>(), FormatError);
}

TEST_CASE("loss report CSV round trip")
{
    std::vector<EpochLoss> h = {{0, 1.5, 1e-3}, {1, 0.75, 5.5e-4}};
    std::stringstream ss;
    write_loss_csv(ss, h);
    const auto back = read_loss_csv(ss);
    REQUIRE(back.size() == 2);
    CHECK(back[1].loss == 0.75);
    CHECK(back[1].lr == 5.5e-4);
}

TEST_CASE("training rows come from samples before the rebound")
{
    const std::vector<Trajectory> one = {bounce_trajectory(10, 40.0)};
    const auto set = build_training_set(one, true);
    CHECK(set.size() == 10);
    CHECK(set.targets(0, 2) == 40.0);
    CHECK(set.targets(0, 1) == doctest::Approx(19.9));

    const std::vector<Trajectory> mixed = {bounce_trajectory(10, 40.0, false)};
    CHECK_THROWS_AS(build_training_set(mixed, true), TrainingError);
    CHECK(build_training_set(mixed, false).size() == 10);
    CHECK_THROWS_AS(build_training_set({}, false), TrainingError);
}

TEST_CASE("target grid covers the far half")
{
    const auto g = target_grid(20, 0.76);
    REQUIRE(g.size() == 20);
    CHECK(g.front().x() == doctest::Approx(1.57));
    CHECK(g.front().y() == doctest::Approx(-0.55));
    CHECK(g.back().x() == doctest::Approx(2.60));
    CHECK(g.back().y() == doctest::Approx(0.55));
    for (const auto& p : g)
        CHECK(p.z() == 0.76);
    const auto c = target_grid(1, 0.76);
    REQUIRE(c.size() == 1);
    CHECK(c[0].y() == 0.0);
    CHECK_THROWS_AS(target_grid(7, 0.76), RangeError);
}

TEST_CASE("predicted controls are clamped to the actuator ranges")
{
    Mlp m({3, 4, 3}, 1);
    for (auto& w : m.weights())
        w.setZero();
    m.output_norm = {Eigen::Vector3d(-40.0, 80.0, 150.0), Eigen::Vector3d(1, 1, 1)};
    const LauncherState s = predict_control(m, Vec3(2, 0, 0.76));
    CHECK(s.azimuth_deg == limits::azimuth_min_deg);
    CHECK(s.altitude_deg == limits::altitude_max_deg);
    CHECK(s.wheels.bottom == 100.0);
    CHECK(s.wheels.equal());
}
