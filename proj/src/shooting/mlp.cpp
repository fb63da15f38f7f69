#include "launcher/shooting/mlp.hpp"

#include <cmath>
#include <fstream>

#include "launcher/error.hpp"

namespace launcher::shooting {

namespace {

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z)
{
    return (1.0 + (-z.array()).exp()).inverse().matrix();
}

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Row-major order, as stored in model files.
std::vector<double> flatten(const Eigen::MatrixXd& m)
{
    const RowMajor r = m;
    return std::vector<double>(r.data(), r.data() + r.size());
}

Eigen::MatrixXd unflatten(const std::vector<double>& v, Eigen::Index rows, Eigen::Index cols)
{
    if (static_cast<Eigen::Index>(v.size()) != rows * cols)
        throw FormatError("model parameter block has the wrong size");
    return Eigen::Map<const RowMajor>(v.data(), rows, cols);
}

} // namespace

Normalizer Normalizer::fit(const Eigen::MatrixXd& rows)
{
    if (rows.rows() == 0)
        throw TrainingError("cannot standardize an empty set");
    Normalizer n;
    n.mean = rows.colwise().mean().transpose();
    n.sd.resize(rows.cols());
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
        const double var = (rows.col(c).array() - n.mean(c)).square().mean();
        const double sd = std::sqrt(var);
        n.sd(c) = sd > 1e-12 ? sd : 1.0;
    }
    return n;
}

Normalizer Normalizer::identity(Eigen::Index dims)
{
    return {Eigen::VectorXd::Zero(dims), Eigen::VectorXd::Ones(dims)};
}

Eigen::MatrixXd Normalizer::normalize(const Eigen::MatrixXd& rows) const
{
    return ((rows.rowwise() - mean.transpose()).array().rowwise() / sd.transpose().array()).matrix();
}

Eigen::MatrixXd Normalizer::denormalize(const Eigen::MatrixXd& rows) const
{
    return ((rows.array().rowwise() * sd.transpose().array()).matrix().rowwise() + mean.transpose());
}

Mlp::Mlp(std::vector<int> sizes, std::uint64_t seed) : sizes_(std::move(sizes))
{
    if (sizes_.size() < 2)
        throw TrainingError("a network needs at least an input and an output layer");
    for (int s : sizes_)
        if (s < 1)
            throw TrainingError("layer sizes must be positive");
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        const double limit = std::sqrt(6.0 / (sizes_[l] + sizes_[l + 1]));
        std::uniform_real_distribution<double> u(-limit, limit);
        Eigen::MatrixXd w(sizes_[l], sizes_[l + 1]);
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            for (Eigen::Index i = 0; i < w.rows(); ++i)
                w(i, j) = u(rng);
        weights_.push_back(std::move(w));
        biases_.push_back(Eigen::VectorXd::Zero(sizes_[l + 1]));
    }
    input_norm = Normalizer::identity(sizes_.front());
    output_norm = Normalizer::identity(sizes_.back());
}

Eigen::MatrixXd Mlp::forward_normalized(const Eigen::MatrixXd& x, const DropoutMasks* masks) const
{
    Eigen::MatrixXd a = x;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        Eigen::MatrixXd z = (a * weights_[l]).rowwise() + biases_[l].transpose();
        if (l + 1 == weights_.size())
            return z;
        a = sigmoid(z);
        if (masks)
            a.array() *= (*masks)[l].array();
    }
    return a;
}

Eigen::MatrixXd Mlp::predict(const Eigen::MatrixXd& inputs) const
{
    return output_norm.denormalize(forward_normalized(input_norm.normalize(inputs)));
}

double Mlp::loss(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, Gradients* grads,
                 const DropoutMasks* masks) const
{
    const std::size_t L = weights_.size();
    // activations[l] is the input to layer l (after dropout).
    std::vector<Eigen::MatrixXd> activations{x};
    std::vector<Eigen::MatrixXd> hidden; // sigmoid outputs before dropout
    Eigen::MatrixXd out;
    for (std::size_t l = 0; l < L; ++l) {
        Eigen::MatrixXd z = (activations.back() * weights_[l]).rowwise() + biases_[l].transpose();
        if (l + 1 == L) {
            out = std::move(z);
            break;
        }
        hidden.push_back(sigmoid(z));
        Eigen::MatrixXd a = hidden.back();
        if (masks)
            a.array() *= (*masks)[l].array();
        activations.push_back(std::move(a));
    }
    const Eigen::MatrixXd diff = out - y;
    const double n = static_cast<double>(diff.size());
    const double value = diff.squaredNorm() / n;
    if (!grads)
        return value;

    grads->weights.assign(L, {});
    grads->biases.assign(L, {});
    Eigen::MatrixXd delta = (2.0 / n) * diff; // dLoss/dz of the output layer
    for (std::size_t l = L; l-- > 0;) {
        grads->weights[l] = activations[l].transpose() * delta;
        grads->biases[l] = delta.colwise().sum().transpose();
        if (l == 0)
            break;
        Eigen::MatrixXd da = delta * weights_[l].transpose();
        if (masks)
            da.array() *= (*masks)[l - 1].array();
        const Eigen::MatrixXd& h = hidden[l - 1];
        delta = (da.array() * h.array() * (1.0 - h.array())).matrix();
    }
    return value;
}

DropoutMasks Mlp::draw_masks(Eigen::Index rows, double rate, std::mt19937_64& rng) const
{
    DropoutMasks masks;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double keep_scale = 1.0 / (1.0 - rate);
    for (std::size_t l = 0; l + 1 < weights_.size(); ++l) {
        Eigen::MatrixXd m(rows, sizes_[l + 1]);
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                m(i, j) = u(rng) < rate ? 0.0 : keep_scale;
        masks.push_back(std::move(m));
    }
    return masks;
}

bool Mlp::finite() const
{
    for (const auto& w : weights_)
        if (!w.allFinite())
            return false;
    for (const auto& b : biases_)
        if (!b.allFinite())
            return false;
    return input_norm.mean.allFinite() && input_norm.sd.allFinite()
           && output_norm.mean.allFinite() && output_norm.sd.allFinite();
}

void to_json(nlohmann::json& j, const Normalizer& n)
{
    j = {{"mean", flatten(n.mean)}, {"sd", flatten(n.sd)}};
}

void from_json(const nlohmann::json& j, Normalizer& n)
{
    const auto mean = j.at("mean").get<std::vector<double>>();
    const auto sd = j.at("sd").get<std::vector<double>>();
    if (mean.size() != sd.size())
        throw FormatError("normalizer mean and sd differ in length");
    n.mean = unflatten(mean, static_cast<Eigen::Index>(mean.size()), 1);
    n.sd = unflatten(sd, static_cast<Eigen::Index>(sd.size()), 1);
    if ((n.sd.array() <= 0.0).any())
        throw FormatError("normalizer sd must be positive");
}

void to_json(nlohmann::json& j, const Mlp& m)
{
    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t l = 0; l < m.layers(); ++l)
        layers.push_back({{"weights", flatten(m.weights()[l])}, {"biases", flatten(m.biases()[l])}});
    j = {{"format", "launcher-mlp"},
         {"version", 1},
         {"sizes", m.sizes()},
         {"hidden_activation", "sigmoid"},
         {"output_activation", "identity"},
         {"input_norm", m.input_norm},
         {"output_norm", m.output_norm},
         {"layers", layers}};
}

void from_json(const nlohmann::json& j, Mlp& m)
{
    try {
        if (j.value("format", std::string()) != "launcher-mlp" || j.value("version", 0) != 1)
            throw FormatError("not a version 1 launcher-mlp model");
        const auto sizes = j.at("sizes").get<std::vector<int>>();
        Mlp out(sizes, 0);
        const auto& layers = j.at("layers");
        if (layers.size() != out.layers())
            throw FormatError("model layer count does not match its sizes");
        for (std::size_t l = 0; l < out.layers(); ++l) {
            out.weights()[l] = unflatten(layers[l].at("weights").get<std::vector<double>>(),
                                         sizes[l], sizes[l + 1]);
            out.biases()[l] = unflatten(layers[l].at("biases").get<std::vector<double>>(),
                                        sizes[l + 1], 1);
        }
        out.input_norm = j.at("input_norm").get<Normalizer>();
        out.output_norm = j.at("output_norm").get<Normalizer>();
        if (out.input_norm.mean.size() != sizes.front() || out.output_norm.mean.size() != sizes.back())
            throw FormatError("normalizer dimensions do not match the network");
        if (!out.finite())
            throw FormatError("model contains non-finite parameters");
        m = std::move(out);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed model: ") + e.what());
    } catch (const TrainingError& e) {
        throw FormatError(std::string("malformed model: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const Mlp& model)
{
    std::ofstream out(path);
    if (!out)
        throw FormatError("cannot write model file " + path.string());
    out << nlohmann::json(model).dump(1) << '\n';
    if (!out)
        throw FormatError("failed writing model file " + path.string());
}

Mlp load_model(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot read model file " + path.string());
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded())
        throw FormatError("model file " + path.string() + " is not JSON");
    return j.get<Mlp>();
}

} // namespace launcher::shooting
