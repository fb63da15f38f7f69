#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "launcher/shooting/mlp.hpp"

namespace launcher::shooting {

/// Hidden layer sizes of the published network.
inline const std::vector<int> published_layers{3, 2048, 512, 128, 3};
/// Desk-scale network used by default; trains in seconds on one core.
inline const std::vector<int> desk_layers{3, 64, 32, 16, 3};

/// Defaults are the published hyperparameters.
struct TrainConfig
{
    std::vector<int> layers = published_layers;
    int epochs = 1400;
    int batch_size = 4096;
    double learning_rate = 1e-3;     ///< start of the cosine schedule
    double min_learning_rate = 1e-4; ///< floor reached at the last epoch
    double dropout = 0.1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Published network and hyperparameters.
TrainConfig published_train_config();

/// Small network for a single core: smaller batches and a higher start rate
/// give it enough optimizer steps, and no dropout since 64 units underfit
/// rather than overfit.
TrainConfig desk_train_config();

/// Cosine decay from learning_rate to min_learning_rate over the epochs.
double learning_rate_at(const TrainConfig& cfg, int epoch);

struct EpochLoss
{
    int epoch = 0;
    double loss = 0.0; ///< mean training MSE in normalized units
    double lr = 0.0;
};

struct TrainResult
{
    Mlp model;
    std::vector<EpochLoss> history;
};

/// Standardizes inputs and targets, then trains with Adam on shuffled
/// minibatches. Deterministic for a given seed. TrainingError on a
/// non-finite loss, with the epoch and batch in the message.
TrainResult train(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                  const TrainConfig& cfg);

/// CSV `epoch,loss,lr`.
void write_loss_csv(std::ostream& out, const std::vector<EpochLoss>& history);
std::vector<EpochLoss> read_loss_csv(std::istream& in);

} // namespace launcher::shooting
