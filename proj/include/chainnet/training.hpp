#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "chainnet/annotation_json.hpp"
#include "chainnet/biaffine.hpp"
#include "chainnet/mpd.hpp"
#include "chainnet/nn.hpp"
#include "chainnet/parsers.hpp"
#include "chainnet/rng.hpp"

namespace chainnet {

struct TrainConfig {
    std::size_t batch_size = 32;
    double learning_rate = 5e-5;
    double beta1 = 0.9;
    double beta2 = 0.9;
    double weight_decay = 0.01;
    int patience = 8;
    int lr_drops = 1;
    double lr_divisor = 10.0;
    double dropout = 0.33;
    int max_epochs = 10000;  // per phase; a safety cap, the schedule normally stops first
    std::uint64_t seed = 1;

    bool operator==(const TrainConfig&) const = default;
};

Json to_json(const TrainConfig& config);
/// Missing keys keep their defaults; throws DataError on invalid values.
TrainConfig train_config_from_json(const Json& doc);

/// Reduce-on-plateau with early stopping. After `patience` epochs without a
/// strict improvement the best model is restored and the learning rate
/// divided; the stagnation after the last drop ends training.
class PlateauSchedule {
public:
    enum class Action { Continue, Improved, DropLearningRate, Stop };

    PlateauSchedule(int patience, int drops);

    Action observe(double dev_loss);

    int epoch() const { return epoch_; }
    int best_epoch() const { return best_epoch_; }
    double best() const { return best_; }
    int drops_taken() const { return drops_taken_; }

private:
    int patience_;
    int drops_;
    int epoch_ = 0;
    int best_epoch_ = 0;
    int stale_ = 0;
    int drops_taken_ = 0;
    double best_ = INFINITY;
};

struct EpochRecord {
    std::string phase;
    int epoch = 0;
    double train_loss = 0;
    double dev_loss = 0;
    double learning_rate = 0;
    std::string event;

    bool operator==(const EpochRecord&) const = default;
};

struct TrainingLog {
    std::vector<EpochRecord> epochs;
    std::string to_text() const;
    Json to_json() const;
};

/// Loss over a batch; adds gradients into the gradient model when given and
/// applies dropout when an Rng is given.
template <class Model>
using BatchLoss = std::function<double(const Model&, const std::vector<const Example*>&, Model*, Rng*)>;

template <class Model>
using ParameterView = std::function<std::vector<Parameter>(Model&)>;

namespace detail {
void check_finite(double loss, const std::string& phase, int epoch);
std::vector<std::vector<const Example*>> make_batches(const std::vector<Example>& data, std::size_t size, Rng& rng);
std::vector<const Example*> all_of(const std::vector<Example>& data);
}  // namespace detail

/// One optimisation problem: minibatch AdamW over the parameters selected by
/// `view`, with the plateau schedule driven by the dev loss.
template <class Model>
void train_phase(Model& model, const std::string& phase, const ParameterView<Model>& view, const BatchLoss<Model>& loss,
                 const std::vector<Example>& train, const std::vector<Example>& dev, const TrainConfig& config,
                 std::uint64_t stream, TrainingLog& log) {
    AdamW optimizer(view(model), {config.learning_rate, config.beta1, config.beta2, 1e-8, config.weight_decay});
    PlateauSchedule schedule(config.patience, config.lr_drops);
    Rng order = Rng::stream(config.seed, stream);
    Rng dropout = Rng::stream(config.seed, stream + 1);
    Model best = model;
    const auto dev_batch = detail::all_of(dev);
    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        double train_total = 0;
        std::size_t seen = 0;
        for (const auto& batch : detail::make_batches(train, config.batch_size, order)) {
            Model grad = model.zeros_like();
            const double value = loss(model, batch, &grad, &dropout);
            detail::check_finite(value, phase, epoch);
            optimizer.step(view(grad));
            train_total += value * static_cast<double>(batch.size());
            seen += batch.size();
        }
        const double dev_loss = loss(model, dev_batch, nullptr, nullptr);
        detail::check_finite(dev_loss, phase, epoch);
        EpochRecord record{phase, epoch, train_total / static_cast<double>(seen), dev_loss, optimizer.learning_rate(), ""};
        const auto action = schedule.observe(dev_loss);
        if (action == PlateauSchedule::Action::Improved) {
            best = model;
            record.event = "best";
        } else if (action == PlateauSchedule::Action::DropLearningRate) {
            model = best;
            optimizer.set_learning_rate(optimizer.learning_rate() / config.lr_divisor);
            optimizer.reset();
            record.event = "restore best (epoch " + std::to_string(schedule.best_epoch()) + "), lr drop";
        } else if (action == PlateauSchedule::Action::Stop) {
            model = best;
            record.event = "restore best (epoch " + std::to_string(schedule.best_epoch()) + "), stop";
        }
        if (epoch == config.max_epochs && action != PlateauSchedule::Action::Stop) {
            model = best;
            record.event += record.event.empty() ? "epoch limit" : "; epoch limit";
        }
        log.epochs.push_back(record);
        if (action == PlateauSchedule::Action::Stop) break;
    }
}

struct TrainedMpd {
    MpdModel model;
    TrainingLog log;
};

struct TrainedBiaffine {
    BiaffineModel model;
    TrainingLog log;
};

/// Throws UsageError when train or dev is empty, DataError on a non-finite loss.
TrainedMpd train_mpd(const TrainConfig& config, const std::vector<Example>& train, const std::vector<Example>& dev);

/// The edge scorer and the label scorer are optimised one after the other,
/// each with its own optimiser and schedule. config.dropout overrides the
/// model's dropout rate.
TrainedBiaffine train_biaffine(BiaffineConfig model_config, const TrainConfig& config,
                               const std::vector<Example>& train, const std::vector<Example>& dev);

}  // namespace chainnet
