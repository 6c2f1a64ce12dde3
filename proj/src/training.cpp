#include "chainnet/training.hpp"

#include <charconv>
#include <sstream>

namespace chainnet {

Json to_json(const TrainConfig& c) {
    return Json{{"batch_size", c.batch_size}, {"learning_rate", c.learning_rate}, {"beta1", c.beta1},
                {"beta2", c.beta2},           {"weight_decay", c.weight_decay},   {"patience", c.patience},
                {"lr_drops", c.lr_drops},     {"lr_divisor", c.lr_divisor},       {"dropout", c.dropout},
                {"max_epochs", c.max_epochs}, {"seed", c.seed}};
}

TrainConfig train_config_from_json(const Json& doc) {
    TrainConfig c;
    c.batch_size = doc.value("batch_size", c.batch_size);
    c.learning_rate = doc.value("learning_rate", c.learning_rate);
    c.beta1 = doc.value("beta1", c.beta1);
    c.beta2 = doc.value("beta2", c.beta2);
    c.weight_decay = doc.value("weight_decay", c.weight_decay);
    c.patience = doc.value("patience", c.patience);
    c.lr_drops = doc.value("lr_drops", c.lr_drops);
    c.lr_divisor = doc.value("lr_divisor", c.lr_divisor);
    c.dropout = doc.value("dropout", c.dropout);
    c.max_epochs = doc.value("max_epochs", c.max_epochs);
    c.seed = doc.value("seed", c.seed);
    if (c.batch_size < 1 || c.learning_rate <= 0 || c.patience < 1 || c.lr_drops < 0 || c.lr_divisor <= 1 ||
        c.max_epochs < 1 || c.weight_decay < 0) {
        throw DataError("training configuration has out-of-range values");
    }
    if (c.beta1 < 0 || c.beta1 >= 1 || c.beta2 < 0 || c.beta2 >= 1) throw DataError("Adam betas must lie in [0, 1)");
    if (c.dropout < 0 || c.dropout >= 1) throw DataError("dropout must lie in [0, 1)");
    return c;
}

PlateauSchedule::PlateauSchedule(int patience, int drops) : patience_(patience), drops_(drops) {
    if (patience < 1) throw UsageError("patience must be at least 1");
    if (drops < 0) throw UsageError("the number of learning-rate drops cannot be negative");
}

PlateauSchedule::Action PlateauSchedule::observe(double dev_loss) {
    ++epoch_;
    if (dev_loss < best_) {
        best_ = dev_loss;
        best_epoch_ = epoch_;
        stale_ = 0;
        return Action::Improved;
    }
    if (++stale_ < patience_) return Action::Continue;
    stale_ = 0;
    if (drops_taken_ < drops_) {
        ++drops_taken_;
        return Action::DropLearningRate;
    }
    return Action::Stop;
}

namespace {

std::string exact(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string TrainingLog::to_text() const {
    std::ostringstream out;
    out << "phase\tepoch\ttrain_loss\tdev_loss\tlr\tevent\n";
    for (const auto& e : epochs) {
        out << e.phase << '\t' << e.epoch << '\t' << exact(e.train_loss) << '\t' << exact(e.dev_loss) << '\t'
            << exact(e.learning_rate) << '\t' << e.event << '\n';
    }
    return out.str();
}

Json TrainingLog::to_json() const {
    Json arr = Json::array();
    for (const auto& e : epochs) {
        arr.push_back(Json{{"phase", e.phase},
                           {"epoch", e.epoch},
                           {"train_loss", e.train_loss},
                           {"dev_loss", e.dev_loss},
                           {"learning_rate", e.learning_rate},
                           {"event", e.event}});
    }
    return arr;
}

namespace detail {

void check_finite(double loss, const std::string& phase, int epoch) {
    if (!std::isfinite(loss)) {
        throw DataError("non-finite " + phase + " loss at epoch " + std::to_string(epoch) +
                        "; lower the learning rate or check the embeddings");
    }
}

std::vector<std::vector<const Example*>> make_batches(const std::vector<Example>& data, std::size_t size, Rng& rng) {
    auto order = all_of(data);
    rng.shuffle(order);
    std::vector<std::vector<const Example*>> out;
    for (std::size_t i = 0; i < order.size(); i += size) {
        out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                         order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), i + size)));
    }
    return out;
}

std::vector<const Example*> all_of(const std::vector<Example>& data) {
    std::vector<const Example*> out;
    out.reserve(data.size());
    for (const auto& ex : data) out.push_back(&ex);
    return out;
}

}  // namespace detail

namespace {

void require_data(const std::vector<Example>& train, const std::vector<Example>& dev) {
    if (train.empty()) throw UsageError("training set is empty");
    if (dev.empty()) throw UsageError("development set is empty");
}

Eigen::Index dimension_of(const std::vector<Example>& data) {
    for (const auto& ex : data) {
        if (!ex.input.embeddings.empty()) return ex.input.embeddings.front().size();
    }
    throw UsageError("training data has no embeddings");
}

}  // namespace

TrainedMpd train_mpd(const TrainConfig& config, const std::vector<Example>& train, const std::vector<Example>& dev) {
    require_data(train, dev);
    Rng init = Rng::stream(config.seed, 0);
    TrainedMpd out{MpdModel::create(dimension_of(train), init), {}};
    train_phase<MpdModel>(
        out.model, "mpd", [](MpdModel& m) { return m.parameters(); },
        [](const MpdModel& m, const std::vector<const Example*>& batch, MpdModel* grad, Rng*) {
            return mpd_loss(m, batch, grad);
        },
        train, dev, config, 10, out.log);
    return out;
}

TrainedBiaffine train_biaffine(BiaffineConfig model_config, const TrainConfig& config,
                               const std::vector<Example>& train, const std::vector<Example>& dev) {
    require_data(train, dev);
    model_config.dimension = dimension_of(train);
    model_config.dropout = config.dropout;
    Rng init = Rng::stream(config.seed, 0);
    TrainedBiaffine out{BiaffineModel::create(model_config, init), {}};
    train_phase<BiaffineModel>(
        out.model, "edge", [](BiaffineModel& m) { return m.edge_parameters(); }, biaffine_edge_loss, train, dev,
        config, 20, out.log);
    train_phase<BiaffineModel>(
        out.model, "label", [](BiaffineModel& m) { return m.label_parameters(); }, biaffine_label_loss, train, dev,
        config, 30, out.log);
    return out;
}

}  // namespace chainnet
