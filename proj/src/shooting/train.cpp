#include "launcher/shooting/train.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "launcher/error.hpp"

namespace launcher::shooting {

namespace {

struct AdamState
{
    std::vector<Eigen::MatrixXd> mw, vw;
    std::vector<Eigen::VectorXd> mb, vb;
    long step = 0;

    explicit AdamState(const Mlp& m)
    {
        for (std::size_t l = 0; l < m.layers(); ++l) {
            mw.push_back(Eigen::MatrixXd::Zero(m.weights()[l].rows(), m.weights()[l].cols()));
            vw.push_back(mw.back());
            mb.push_back(Eigen::VectorXd::Zero(m.biases()[l].size()));
            vb.push_back(mb.back());
        }
    }

    template <typename P, typename G>
    static void update(P& param, const G& grad, P& m, P& v, double lr, double c1, double c2,
                       const TrainConfig& cfg)
    {
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
        param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.epsilon);
    }

    void apply(Mlp& model, const Gradients& g, double lr, const TrainConfig& cfg)
    {
        ++step;
        const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
        for (std::size_t l = 0; l < model.layers(); ++l) {
            update(model.weights()[l], g.weights[l], mw[l], vw[l], lr, c1, c2, cfg);
            update(model.biases()[l], g.biases[l], mb[l], vb[l], lr, c1, c2, cfg);
        }
    }
};

Eigen::MatrixXd gather(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& idx,
                       std::size_t first, std::size_t count)
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(count), m.cols());
    for (std::size_t r = 0; r < count; ++r)
        out.row(static_cast<Eigen::Index>(r)) = m.row(idx[first + r]);
    return out;
}

} // namespace

void TrainConfig::validate() const
{
    if (layers.size() < 2 || layers.front() < 1 || layers.back() < 1)
        throw RangeError("network needs input and output layers");
    if (epochs < 1)
        throw RangeError("epochs must be at least 1");
    if (batch_size < 1)
        throw RangeError("batch size must be at least 1");
    if (!(learning_rate > 0.0) || !(min_learning_rate > 0.0) || min_learning_rate > learning_rate)
        throw RangeError("learning rates must satisfy 0 < min <= start");
    if (!(dropout >= 0.0 && dropout < 1.0))
        throw RangeError("dropout must lie in [0, 1)");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(epsilon > 0.0))
        throw RangeError("Adam constants out of range");
}

TrainConfig published_train_config()
{
    return TrainConfig{};
}

TrainConfig desk_train_config()
{
    TrainConfig c;
    c.layers = desk_layers;
    c.epochs = 200;
    c.batch_size = 512;
    c.learning_rate = 3e-3;
    c.dropout = 0.0;
    return c;
}

double learning_rate_at(const TrainConfig& cfg, int epoch)
{
    if (cfg.epochs <= 1)
        return cfg.learning_rate;
    const double progress = static_cast<double>(epoch) / (cfg.epochs - 1);
    return cfg.min_learning_rate
           + 0.5 * (cfg.learning_rate - cfg.min_learning_rate) * (1.0 + std::cos(std::numbers::pi * progress));
}

TrainResult train(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                  const TrainConfig& cfg)
{
    cfg.validate();
    if (inputs.rows() == 0)
        throw TrainingError("no training rows");
    if (inputs.rows() != targets.rows())
        throw TrainingError("inputs and targets differ in row count");
    if (inputs.cols() != cfg.layers.front() || targets.cols() != cfg.layers.back())
        throw TrainingError("row dimensions do not match the network's input and output layers");

    TrainResult result;
    result.model = Mlp(cfg.layers, cfg.seed);
    Mlp& model = result.model;
    model.input_norm = Normalizer::fit(inputs);
    model.output_norm = Normalizer::fit(targets);
    const Eigen::MatrixXd x = model.input_norm.normalize(inputs);
    const Eigen::MatrixXd y = model.output_norm.normalize(targets);

    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    AdamState adam(model);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(x.rows()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const auto rows = order.size();
    const auto batch = static_cast<std::size_t>(cfg.batch_size);
    Gradients grads;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        // Fisher-Yates with an explicit draw so the order is portable.
        for (std::size_t i = rows; i > 1; --i) {
            std::uniform_int_distribution<std::size_t> pick(0, i - 1);
            std::swap(order[i - 1], order[pick(rng)]);
        }
        const double lr = learning_rate_at(cfg, epoch);
        double loss_sum = 0.0;
        for (std::size_t first = 0, b = 0; first < rows; first += batch, ++b) {
            const std::size_t count = std::min(batch, rows - first);
            const Eigen::MatrixXd xb = gather(x, order, first, count);
            const Eigen::MatrixXd yb = gather(y, order, first, count);
            DropoutMasks masks;
            if (cfg.dropout > 0.0)
                masks = model.draw_masks(xb.rows(), cfg.dropout, rng);
            const double loss = model.loss(xb, yb, &grads, cfg.dropout > 0.0 ? &masks : nullptr);
            if (!std::isfinite(loss))
                throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + ", batch "
                                    + std::to_string(b) + " (lr " + std::to_string(lr) + ")");
            loss_sum += loss * static_cast<double>(count);
            adam.apply(model, grads, lr, cfg);
        }
        result.history.push_back({epoch, loss_sum / static_cast<double>(rows), lr});
    }
    if (!model.finite())
        throw TrainingError("training produced non-finite parameters");
    return result;
}

void write_loss_csv(std::ostream& out, const std::vector<EpochLoss>& history)
{
    out << "epoch,loss,lr\n";
    out.precision(17);
    for (const auto& e : history)
        out << e.epoch << ',' << e.loss << ',' << e.lr << '\n';
}

std::vector<EpochLoss> read_loss_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != "epoch,loss,lr")
        throw FormatError("expected header 'epoch,loss,lr'");
    std::vector<EpochLoss> out;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ss(line);
        EpochLoss e;
        char c1 = 0, c2 = 0;
        if (!(ss >> e.epoch >> c1 >> e.loss >> c2 >> e.lr) || c1 != ',' || c2 != ',')
            throw FormatError("bad loss row: " + line);
        out.push_back(e);
    }
    return out;
}

} // namespace launcher::shooting
