#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace launcher::shooting {

/// Per-dimension z-score. Rows are samples, columns dimensions. A constant
/// column gets sd 1 so it maps to 0 instead of dividing by zero.
struct Normalizer
{
    Eigen::VectorXd mean;
    Eigen::VectorXd sd;

    static Normalizer fit(const Eigen::MatrixXd& rows);
    static Normalizer identity(Eigen::Index dims);

    Eigen::MatrixXd normalize(const Eigen::MatrixXd& rows) const;
    Eigen::MatrixXd denormalize(const Eigen::MatrixXd& rows) const;
};

/// Dropout keep-masks, one per hidden layer (samples x units), already
/// scaled by 1 / (1 - rate).
using DropoutMasks = std::vector<Eigen::MatrixXd>;

struct Gradients
{
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

/// Fully connected network: sigmoid hidden layers, identity output.
/// Weights of layer l map sizes[l] inputs to sizes[l + 1] outputs; samples
/// are rows. Normalizers translate between physical and network units.
class Mlp
{
public:
    Mlp() = default;
    /// Xavier-uniform weights, zero biases, identity normalizers.
    Mlp(std::vector<int> sizes, std::uint64_t seed);

    const std::vector<int>& sizes() const noexcept { return sizes_; }
    std::size_t layers() const noexcept { return weights_.size(); }

    std::vector<Eigen::MatrixXd>& weights() noexcept { return weights_; }
    const std::vector<Eigen::MatrixXd>& weights() const noexcept { return weights_; }
    std::vector<Eigen::VectorXd>& biases() noexcept { return biases_; }
    const std::vector<Eigen::VectorXd>& biases() const noexcept { return biases_; }

    Normalizer input_norm;
    Normalizer output_norm;

    /// Network-unit forward pass; masks (if given) apply dropout after each
    /// hidden activation.
    Eigen::MatrixXd forward_normalized(const Eigen::MatrixXd& x,
                                       const DropoutMasks* masks = nullptr) const;

    /// Physical-unit inference without dropout.
    Eigen::MatrixXd predict(const Eigen::MatrixXd& inputs) const;

    /// Mean squared error over all outputs in network units and, when
    /// `grads` is given, its gradient by reverse-mode accumulation.
    double loss(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, Gradients* grads = nullptr,
                const DropoutMasks* masks = nullptr) const;

    /// Random inverted-dropout masks for a batch of `rows` samples.
    DropoutMasks draw_masks(Eigen::Index rows, double rate, std::mt19937_64& rng) const;

    bool finite() const;

private:
    std::vector<int> sizes_;
    std::vector<Eigen::MatrixXd> weights_;
    std::vector<Eigen::VectorXd> biases_;
};

void to_json(nlohmann::json& j, const Normalizer& n);
void from_json(const nlohmann::json& j, Normalizer& n);
void to_json(nlohmann::json& j, const Mlp& m);
void from_json(const nlohmann::json& j, Mlp& m);

/// Model file: the JSON form above. Throws FormatError when the file is
/// missing, unreadable or not a model.
void save_model(const std::filesystem::path& path, const Mlp& model);
Mlp load_model(const std::filesystem::path& path);

} // namespace launcher::shooting
