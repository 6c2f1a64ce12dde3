#include "doctest.h"

#include <fstream>

#include "chainnet/checkpoint.hpp"
#include "chainnet/training.hpp"
#include "fixtures.hpp"
#include "synthetic.hpp"

using namespace chainnet;
using namespace chainnet::testing;

namespace {

struct SmallData {
    std::vector<Example> train;
    std::vector<Example> dev;
};

SmallData small_data() {
    SyntheticOptions options;
    options.words = 60;
    options.code_size = 4;
    options.max_senses = 4;
    options.noise = 0.05;
    const auto corpus = make_synthetic_corpus(options);
    auto examples = make_examples(corpus.gold, corpus.table).examples;
    SmallData d;
    for (std::size_t i = 0; i < examples.size(); ++i) (i % 5 == 0 ? d.dev : d.train).push_back(examples[i]);
    return d;
}

TrainConfig quick_config() {
    TrainConfig c;
    c.batch_size = 8;
    c.learning_rate = 0.02;
    c.patience = 3;
    c.max_epochs = 15;
    c.seed = 3;
    return c;
}

bool same_parameters(std::vector<Parameter> a, std::vector<Parameter> b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != b[i].name || *a[i].value != *b[i].value) return false;
    }
    return true;
}

std::vector<const Example*> pointers(const std::vector<Example>& xs) {
    std::vector<const Example*> out;
    for (const auto& x : xs) out.push_back(&x);
    return out;
}

}  // namespace

TEST_CASE("training config JSON round trip and validation") {
    TrainConfig c;
    c.batch_size = 7;
    c.learning_rate = 1e-3;
    c.seed = 99;
    CHECK(train_config_from_json(to_json(c)) == c);
    CHECK(train_config_from_json(Json::object()) == TrainConfig{});
    CHECK(train_config_from_json(Json{{"patience", 3}}).patience == 3);
    CHECK_THROWS_AS(train_config_from_json(Json{{"batch_size", 0}}), DataError);
    CHECK_THROWS_AS(train_config_from_json(Json{{"learning_rate", -1.0}}), DataError);
    CHECK_THROWS_AS(train_config_from_json(Json{{"beta2", 1.0}}), DataError);
    CHECK_THROWS_AS(train_config_from_json(Json{{"dropout", 1.0}}), DataError);
    CHECK_THROWS_AS(train_config_from_json(Json{{"lr_divisor", 1.0}}), DataError);
}

TEST_CASE("MPD training lowers the dev loss and keeps the best epoch") {
    const auto data = small_data();
    const auto config = quick_config();
    const auto trained = train_mpd(config, data.train, data.dev);
    REQUIRE(!trained.log.epochs.empty());
    Rng init = Rng::stream(config.seed, 0);
    const auto start = MpdModel::create(data.train.front().input.embeddings.front().size(), init);
    const auto dev = pointers(data.dev);
    const double before = mpd_loss(start, dev, nullptr);
    const double after = mpd_loss(trained.model, dev, nullptr);
    CHECK(after < before);
    double best = INFINITY;
    for (const auto& e : trained.log.epochs) {
        CHECK(e.phase == "mpd");
        best = std::min(best, e.dev_loss);
    }
    CHECK(after == doctest::Approx(best).epsilon(1e-12));

    const auto again = train_mpd(config, data.train, data.dev);
    CHECK(again.model.weight == trained.model.weight);
    CHECK(again.log.to_text() == trained.log.to_text());
}

TEST_CASE("biaffine training runs the edge phase then the label phase") {
    const auto data = small_data();
    auto config = quick_config();
    config.max_epochs = 6;
    BiaffineConfig model;
    model.edge_hidden = 8;
    model.label_hidden = 4;
    const auto trained = train_biaffine(model, config, data.train, data.dev);
    CHECK(trained.model.config.dimension == static_cast<Eigen::Index>(data.train[0].input.embeddings[0].size()));
    CHECK(trained.model.config.dropout == config.dropout);
    bool seen_label = false;
    for (const auto& e : trained.log.epochs) {
        if (e.phase == "label") seen_label = true;
        else CHECK_FALSE(seen_label);
    }
    CHECK(seen_label);
    const auto& first = trained.log.epochs.front();
    const auto dev = pointers(data.dev);
    CHECK(biaffine_edge_loss(trained.model, dev, nullptr, nullptr) <= first.dev_loss + 1e-12);
    const auto text = trained.log.to_text();
    CHECK(text.rfind("phase\tepoch\ttrain_loss", 0) == 0);
    CHECK(trained.log.to_json().size() == trained.log.epochs.size());
}

TEST_CASE("the plateau schedule restores the best model and drops the learning rate") {
    const auto data = small_data();
    auto config = quick_config();
    config.learning_rate = 5.0;  // overshoots quickly so the schedule fires
    config.patience = 1;
    config.max_epochs = 40;
    const auto trained = train_mpd(config, data.train, data.dev);
    bool dropped = false;
    for (const auto& e : trained.log.epochs) {
        if (e.event.find("lr drop") != std::string::npos) dropped = true;
        if (dropped && e.event.find("lr drop") == std::string::npos) CHECK(e.learning_rate == doctest::Approx(0.5));
    }
    CHECK(dropped);
    CHECK(trained.log.epochs.back().event.find("stop") != std::string::npos);
}

TEST_CASE("training rejects empty data") {
    const auto data = small_data();
    CHECK_THROWS_AS(train_mpd(quick_config(), {}, data.dev), UsageError);
    CHECK_THROWS_AS(train_mpd(quick_config(), data.train, {}), UsageError);
}

TEST_CASE("checkpoints round trip exactly") {
    TempDir dir;
    Rng rng(4);
    auto mpd = MpdModel::create(5, rng);
    save_mpd(dir / "mpd.bin", mpd);
    auto back = load_mpd(dir / "mpd.bin");
    CHECK(same_parameters(back.parameters(), mpd.parameters()));

    BiaffineConfig config;
    config.dimension = 5;
    config.edge_hidden = 6;
    config.label_hidden = 3;
    config.activation = Activation::Relu;
    auto biaffine = BiaffineModel::create(config, rng);
    save_biaffine(dir / "bi.bin", biaffine);
    auto bback = load_biaffine(dir / "bi.bin");
    CHECK(bback.config == config);
    CHECK(same_parameters(bback.parameters(), biaffine.parameters()));

    CHECK(load_parser(dir / "mpd.bin")->name() == "mpd+mst");
    CHECK(load_parser(dir / "bi.bin")->name() == "biaffine");
    CHECK_THROWS_AS(load_mpd(dir / "bi.bin"), DataError);
}

TEST_CASE("damaged checkpoints are rejected") {
    TempDir dir;
    Rng rng(5);
    save_mpd(dir / "m.bin", MpdModel::create(3, rng));
    const auto bytes = read_file(dir / "m.bin");

    write_file(dir / "short.bin", bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(load_checkpoint(dir / "short.bin"), DataError);

    auto magic = bytes;
    magic[0] = 'X';
    write_file(dir / "magic.bin", magic);
    CHECK_THROWS_AS(load_checkpoint(dir / "magic.bin"), DataError);

    auto version = bytes;
    version[8] = 7;
    write_file(dir / "version.bin", version);
    CHECK_THROWS_AS(load_checkpoint(dir / "version.bin"), DataError);

    // Flip a character inside the config text so the fingerprint no longer matches.
    auto config = bytes;
    const auto at = config.find("dimension");
    REQUIRE(at != std::string::npos);
    config[at] = 'D';
    write_file(dir / "config.bin", config);
    CHECK_THROWS_AS(load_checkpoint(dir / "config.bin"), DataError);

    CHECK_THROWS_AS(load_checkpoint(dir / "missing.bin"), DataError);
}
