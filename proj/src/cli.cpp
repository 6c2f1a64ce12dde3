#include "chainnet/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "chainnet/agreement.hpp"
#include "chainnet/annotation_json.hpp"
#include "chainnet/biaffine.hpp"
#include "chainnet/checkpoint.hpp"
#include "chainnet/combinatorics.hpp"
#include "chainnet/dataset.hpp"
#include "chainnet/embeddings.hpp"
#include "chainnet/evaluation.hpp"
#include "chainnet/inventory.hpp"
#include "chainnet/mpd.hpp"
#include "chainnet/preprocess.hpp"
#include "chainnet/service/http.hpp"
#include "chainnet/training.hpp"
#include "chainnet/validate.hpp"

namespace chainnet {

namespace {

/// Raised by a subcommand that ran to completion but found invalid data.
struct DataViolations {};

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::trunc);
    if (!file) throw DataError("cannot write " + path);
    file << text;
}

std::vector<std::string> read_word_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        words.push_back(line.substr(first, last - first + 1));
    }
    return words;
}

std::vector<WordAnnotation> load_all(const std::vector<std::string>& paths) {
    std::vector<WordAnnotation> out;
    for (const auto& p : paths) {
        auto part = load_annotations(p);
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
}

Distance parse_distance(const std::string& text) {
    if (text == "euclidean") return Distance::Euclidean;
    if (text == "cosine") return Distance::Cosine;
    throw UsageError("unknown distance '" + text + "'");
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

Metric parse_metric(const std::string& text) {
    if (text == "los") return Metric::Los;
    if (text == "uuas") return Metric::Uuas;
    if (text == "ulas") return Metric::Ulas;
    throw UsageError("unknown metric '" + text + "' (expected los, uuas or ulas)");
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
    std::vector<std::string> files;
    bool json = false;
};

void add_validate(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    auto args = std::make_shared<ValidateArgs>();
    auto* cmd = app.add_subcommand("validate", "Check annotation files against every structural and slippage rule");
    cmd->add_option("files", args->files, "Annotation files (JSON, JSON array or JSONL)")->required();
    cmd->add_flag("--json", args->json, "Print the report as JSON");
    cmd->callback([&action, &out, args] {
        action = [&out, args] {
            Json report = Json::array();
            std::size_t bad = 0, total = 0;
            for (const auto& file : args->files) {
                for (const auto& a : load_annotations(file)) {
                    ++total;
                    const auto violations = validate(a);
                    if (violations.empty()) continue;
                    ++bad;
                    for (const auto& v : violations) {
                        if (args->json) {
                            report.push_back(Json{{"file", file},
                                                  {"word", a.word},
                                                  {"annotator", a.annotator},
                                                  {"kind", std::string(to_string(v.kind))},
                                                  {"message", v.message}});
                        } else {
                            out << file << ": " << a.word << (a.annotator.empty() ? "" : " [" + a.annotator + "]")
                                << ": " << describe(v) << "\n";
                        }
                    }
                }
            }
            if (args->json) {
                out << Json{{"annotations", total}, {"invalid", bad}, {"violations", report}}.dump(2) << "\n";
            } else {
                out << total << " annotation(s), " << bad << " invalid\n";
            }
            if (bad > 0) throw DataViolations{};
        };
    });
}

// ---------------------------------------------------------------- stats

struct StatsArgs {
    std::vector<std::string> annotations;
    std::string inventory;
    std::string out;
};

void add_stats(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    auto args = std::make_shared<StatsArgs>();
    auto* cmd = app.add_subcommand("stats", "Corpus statistics for annotations and/or an inventory");
    cmd->add_option("--annotations", args->annotations, "Annotation files");
    cmd->add_option("--inventory", args->inventory, "Inventory JSON or WordNet dict directory");
    cmd->add_option("--out", args->out, "Write JSON here instead of stdout");
    cmd->callback([&action, &out, args] {
        action = [&out, args] {
            if (args->annotations.empty() && args->inventory.empty()) {
                throw UsageError("stats needs --annotations and/or --inventory");
            }
            Json j;
            if (!args->inventory.empty()) {
                const auto inv = load_inventory(args->inventory);
                std::size_t senses = 0;
                for (const auto& [lemma, list] : inv.words()) senses += list.size();
                const auto kept = filter_words(inv);
                std::map<std::size_t, std::size_t> by_count;
                for (const auto& w : kept) ++by_count[inv.find(w)->size()];
                Json hist = Json::object();
                for (const auto& [n, c] : by_count) hist[std::to_string(n)] = c;
                j["inventory"] = Json{{"lemmas", inv.size()},
                                      {"senses", senses},
                                      {"eligible_lemmas", kept.size()},
                                      {"eligible_by_sense_count", hist}};
            }
            if (!args->annotations.empty()) {
                const auto corpus = load_all(args->annotations);
                std::array<std::size_t, kLabelCount> labels{};
                std::size_t senses = 0, conduits = 0, virtuals = 0, splits = 0, invalid = 0, clusters = 0, features = 0;
                std::set<std::string> annotators, words;
                for (const auto& a : corpus) {
                    annotators.insert(a.annotator);
                    words.insert(a.word);
                    if (!is_valid(a)) ++invalid;
                    clusters += partition_unchecked(a).clusters.size();
                    for (const auto& s : a.senses) {
                        ++senses;
                        ++labels[static_cast<std::size_t>(s.label.kind)];
                        conduits += s.conduit ? 1 : 0;
                        virtuals += s.sense.is_virtual ? 1 : 0;
                        splits += s.sense.is_split_half ? 1 : 0;
                        features += s.features.size();
                    }
                }
                const double n = corpus.empty() ? 1.0 : static_cast<double>(corpus.size());
                j["annotations"] = Json{{"documents", corpus.size()},
                                        {"words", words.size()},
                                        {"annotators", annotators.size()},
                                        {"invalid", invalid},
                                        {"senses", senses},
                                        {"prototype", labels[0]},
                                        {"metaphor", labels[1]},
                                        {"metonymy", labels[2]},
                                        {"conduits", conduits},
                                        {"virtual_senses", virtuals},
                                        {"split_halves", splits},
                                        {"features", features},
                                        {"mean_clusters_per_word", static_cast<double>(clusters) / n}};
            }
            write_output(args->out, j.dump(2) + "\n", out);
        };
    });
}

// ---------------------------------------------------------------- count

struct CountArgs {
    int senses = 0;
    int labels = 2;
    int ceiling = kDefaultCountCeiling;
    bool enumerate = false;
    bool constructible = false;
    bool json = false;
};

void add_count(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    auto args = std::make_shared<CountArgs>();
    auto* cmd = app.add_subcommand("count", "Number of possible annotations of a word with n senses");
    cmd->add_option("--senses,-n", args->senses, "Number of senses")->required();
    cmd->add_option("--labels,-k", args->labels, "Number of edge labels")->capture_default_str();
    cmd->add_option("--ceiling", args->ceiling, "Largest n accepted")->capture_default_str();
    cmd->add_flag("--enumerate", args->enumerate, "Also count by brute-force enumeration (n <= 6)");
    cmd->add_flag("--constructible", args->constructible,
                  "Also count forests buildable without conduits (metaphor/metonymy labels only)");
    cmd->add_flag("--json", args->json, "Print JSON");
    cmd->callback([&action, &out, args] {
        action = [&out, args] {
            const auto single = count_single_root(args->senses, args->labels);
            const auto total = count_total(args->senses, args->labels, args->ceiling);
            Json j{{"senses", args->senses},
                   {"labels", args->labels},
                   {"single_root", single.str()},
                   {"total", total.str()},
                   {"rounded", round_to_three_figures(total).to_string()}};
            if (args->enumerate) {
                ForestEnumerator e(args->senses, args->labels);
                LabelledForest f;
                std::uint64_t n = 0;
                while (e.next(f)) ++n;
                j["enumerated"] = n;
            }
            if (args->constructible) {
                if (args->labels != 2) throw UsageError("--constructible assumes the two labels metaphor and metonymy");
                j["constructible"] = count_constructible_total(args->senses, args->ceiling).str();
            }
            if (args->json) {
                out << j.dump(2) << "\n";
                return;
            }
            out << total.str() << "\n";
            out << "single-root: " << single.str() << "\n";
            out << "rounded: " << j["rounded"].get<std::string>() << "\n";
            if (j.contains("enumerated")) out << "enumerated: " << j["enumerated"].get<std::uint64_t>() << "\n";
            if (j.contains("constructible")) out << "constructible: " << j["constructible"].get<std::string>() << "\n";
        };
    });
}

// ---------------------------------------------------------------- agree

struct AgreeArgs {
    std::vector<std::string> annotations;
    std::string filters = "all,ap,ac";
    std::vector<std::string> clusters;
    std::string out;
};

void add_agree(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    auto args = std::make_shared<AgreeArgs>();
    auto* cmd = app.add_subcommand("agree", "Inter-annotator agreement, or cluster granularity comparison");
    cmd->add_option("--annotations", args->annotations, "One annotation file per annotator");
    cmd->add_option("--filters", args->filters, "Comma-separated subset of all,ap,ac")->capture_default_str();
    cmd->add_option("--clusters", args->clusters, "Two cluster files (lemma<TAB>1,2;3) to compare instead")
        ->expected(2);
    cmd->add_option("--out", args->out, "Write the JSON report here");
    cmd->callback([&action, &out, args] {
        action = [&out, args] {
            if (!args->clusters.empty()) {
                const auto a = load_clusters(args->clusters[0]);
                const auto b = load_clusters(args->clusters[1]);
                const auto g = compare_granularity(a, b);
                const Json j{{"words", g.words},
                             {"fraction_differing", g.fraction_differing},
                             {"mean_clusters_a", g.mean_clusters_a},
                             {"mean_clusters_b", g.mean_clusters_b},
                             {"fraction_finer", g.fraction_finer ? Json(*g.fraction_finer) : Json(nullptr)}};
                if (!args->out.empty()) write_output(args->out, j.dump(2) + "\n", out);
                out << j.dump(2) << "\n";
                return;
            }
            if (args->annotations.size() < 2) throw UsageError("agree needs at least two --annotations files");
            std::vector<std::vector<WordAnnotation>> corpora;
            for (const auto& f : args->annotations) corpora.push_back(load_annotations(f));
            std::vector<Filter> filters;
            for (const auto& f : split_commas(args->filters)) filters.push_back(parse_filter(f));
            const auto report = agreement_report(corpora, filters);
            if (!args->out.empty()) write_output(args->out, to_json(report).dump(2) + "\n", out);
            out << format_report(report);
        };
    });
}

// ---------------------------------------------------------------- preprocess

struct PreprocessArgs {
    std::vector<std::string> annotations;
    std::string out;
};

void add_preprocess(CLI::App& app, std::function<void()>& action, std::ostream& out, std::ostream& err) {
    auto args = std::make_shared<PreprocessArgs>();
    auto* cmd = app.add_subcommand("preprocess", "Merge split senses and strip virtual senses");
    cmd->add_option("--annotations", args->annotations, "Annotation files")->required();
    cmd->add_option("--out", args->out, "Output JSONL (stdout by default)");
    cmd->callback([&action, &out, &err, args] {
        action = [&out, &err, args] {
            std::vector<WordAnnotation> result;
            bool invalid = false;
            for (const auto& a : load_all(args->annotations)) {
                if (!is_valid(a)) {
                    err << "skipping invalid annotation of '" << a.word << "'\n";
                    invalid = true;
                    continue;
                }
                auto r = preprocess(a);
                for (const auto& w : r.warnings) err << "warning: " << w << "\n";
                result.push_back(std::move(r.annotation));
            }
            write_output(args->out, to_jsonl(result), out);
            if (invalid) throw DataViolations{};
        };
    });
}

// ---------------------------------------------------------------- split

struct SplitArgs {
    std::vector<std::string> annotations;
    std::string words;
    std::string inventory;
    std::uint64_t seed = 1;
    std::string out;
};

void add_split(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    auto args = std::make_shared<SplitArgs>();
    auto* cmd = app.add_subcommand("split", "80:10:10 train/dev/test split of the word list");
    auto* a = cmd->add_option("--annotations", args->annotations, "Take words from these annotation files");
    auto* w = cmd->add_option("--words", args->words, "Take words from a one-per-line file");
    auto* i = cmd->add_option("--inventory", args->inventory, "Take the eligible words of an inventory");
    a->excludes(w)->excludes(i);
    w->excludes(i);
    cmd->add_option("--seed", args->seed, "Shuffle seed")->capture_default_str();
    cmd->add_option("--out", args->out, "Output split JSON")->required();
    cmd->callback([&action, &out, args] {
        action = [&out, args] {
            std::vector<std::string> words;
            if (!args->annotations.empty()) {
                for (const auto& an : load_all(args->annotations)) words.push_back(an.word);
            } else if (!args->words.empty()) {
                words = read_word_list(args->words);
            } else if (!args->inventory.empty()) {
                words = filter_words(load_inventory(args->inventory));
            } else {
                throw UsageError("split needs --annotations, --words or --inventory");
            }
            const auto split = split_dataset(words, args->seed);
            save_split(args->out, split, args->seed);
            out << "train " << split.train.size() << ", dev " << split.dev.size() << ", test " << split.test.size()
                << " (seed " << args->seed << ")\n";
        };
    });
}

// ---------------------------------------------------------------- train

struct TrainArgs {
    std::string model = "biaffine";
    std::vector<std::string> annotations;
    std::string embeddings;
    std::string split;
    std::string out;
    std::string log;
    std::uint64_t seed = 1;
    TrainConfig config;
    BiaffineConfig biaffine;
    std::string activation = "leaky_relu";
};

void add_train(CLI::App& app, std::function<void()>& action, std::ostream& out, std::ostream& err) {
    auto args = std::make_shared<TrainArgs>();
    auto* cmd = app.add_subcommand("train", "Train the MPD classifier or the biaffine parser");
    cmd->add_option("--model", args->model, "mpd or biaffine")
        ->check(CLI::IsMember({"mpd", "biaffine"}))
        ->capture_default_str();
    cmd->add_option("--annotations", args->annotations, "Gold annotation files")->required();
    cmd->add_option("--embeddings", args->embeddings, "Sense embedding file")->required();
    cmd->add_option("--split", args->split, "Split JSON from the split subcommand")->required();
    cmd->add_option("--out", args->out, "Checkpoint path")->required();
    cmd->add_option("--log", args->log, "Write the per-epoch log (TSV) here");
    cmd->add_option("--seed", args->seed, "Seed for initialisation, shuffling and dropout")->capture_default_str();
    cmd->add_option("--batch-size", args->config.batch_size)->capture_default_str();
    cmd->add_option("--learning-rate", args->config.learning_rate)->capture_default_str();
    cmd->add_option("--weight-decay", args->config.weight_decay)->capture_default_str();
    cmd->add_option("--beta1", args->config.beta1)->capture_default_str();
    cmd->add_option("--beta2", args->config.beta2)->capture_default_str();
    cmd->add_option("--patience", args->config.patience)->capture_default_str();
    cmd->add_option("--lr-drops", args->config.lr_drops)->capture_default_str();
    cmd->add_option("--max-epochs", args->config.max_epochs)->capture_default_str();
    cmd->add_option("--dropout", args->config.dropout)->capture_default_str();
    cmd->add_option("--edge-hidden", args->biaffine.edge_hidden, "k' of the edge scorer")->capture_default_str();
    cmd->add_option("--label-hidden", args->biaffine.label_hidden, "k' of the label scorer")->capture_default_str();
    cmd->add_option("--activation", args->activation, "leaky_relu, relu or identity")->capture_default_str();
    cmd->callback([&action, &out, &err, args] {
        action = [&out, &err, args] {
            auto config = train_config_from_json(to_json(args->config));
            config.seed = args->seed;
            args->biaffine.activation = parse_activation(args->activation);
            const auto split = load_split(args->split);
            const auto gold = load_all(args->annotations);
            const auto table = load_embeddings(args->embeddings);
            auto train = make_examples(gold, table, split.train);
            auto dev = make_examples(gold, table, split.dev);
            for (const auto* set : {&train, &dev}) {
                for (const auto& w : set->warnings) err << "warning: " << w << "\n";
                for (const auto& w : set->excluded) err << "excluded (missing embeddings): " << w << "\n";
            }
            TrainingLog log;
            if (args->model == "mpd") {
                auto trained = train_mpd(config, train.examples, dev.examples);
                save_mpd(args->out, trained.model);
                log = std::move(trained.log);
            } else {
                auto trained = train_biaffine(args->biaffine, config, train.examples, dev.examples);
                save_biaffine(args->out, trained.model);
                log = std::move(trained.log);
            }
            if (!args->log.empty()) write_output(args->log, log.to_text(), out);
            out << Json{{"model", args->model},
                        {"checkpoint", args->out},
                        {"train_words", train.examples.size()},
                        {"dev_words", dev.examples.size()},
                        {"epochs", log.epochs.size()},
                        {"config", to_json(config)}}
                       .dump(2)
                << "\n";
        };
    });
}

// ---------------------------------------------------------------- parse / evaluate

struct ModelArgs {
    std::string model;
    bool random = false;
    std::uint64_t seed = 1;
    std::string distance = "euclidean";
};

void add_model_options(CLI::App* cmd, ModelArgs& m) {
    auto* model = cmd->add_option("--model", m.model, "Checkpoint from the train subcommand");
    auto* random = cmd->add_flag("--random", m.random, "Use the random baseline");
    model->excludes(random);
    cmd->add_option("--seed", m.seed, "Seed of the random baseline")->capture_default_str();
    cmd->add_option("--distance", m.distance, "MST distance for mpd: euclidean or cosine")->capture_default_str();
}

std::unique_ptr<PolysemyParser> make_parser(const ModelArgs& m) {
    if (m.random) return std::make_unique<RandomParser>(m.seed);
    if (m.model.empty()) throw UsageError("give --model or --random");
    return load_parser(m.model, parse_distance(m.distance));
}

struct ParseArgs {
    ModelArgs model;
    std::vector<std::string> annotations;
    std::string inventory;
    std::string words;
    std::string embeddings;
    std::string out;
    bool n_best = false;
};

void add_parse(CLI::App& app, std::function<void()>& action, std::ostream& out, std::ostream& err) {
    auto args = std::make_shared<ParseArgs>();
    auto* cmd = app.add_subcommand("parse", "Predict sense forests");
    add_model_options(cmd, args->model);
    cmd->add_option("--annotations", args->annotations, "Parse the words (and senses) of these annotations");
    cmd->add_option("--inventory", args->inventory, "Inventory to take senses from (with --words)");
    cmd->add_option("--words", args->words, "One word per line");
    cmd->add_option("--embeddings", args->embeddings, "Sense embedding file");
    cmd->add_option("--out", args->out, "Output JSONL (stdout by default)");
    cmd->add_flag("--n-best", args->n_best, "Emit all n-best variants per word");
    cmd->callback([&action, &out, &err, args] {
        action = [&out, &err, args] {
            const auto parser = make_parser(args->model);
            EmbeddingTable table;
            if (!args->embeddings.empty()) table = load_embeddings(args->embeddings);
            std::vector<WordInput> inputs;
            auto add = [&](const std::string& word, const std::vector<SenseIndex>& senses) {
                WordInput in{word, senses, {}};
                for (const auto& s : senses) {
                    const auto* v = table.find({word, s});
                    if (!v) break;
                    in.embeddings.push_back(*v);
                }
                if (!args->model.random && in.embeddings.size() != senses.size()) {
                    err << "skipping '" << word << "': missing embeddings\n";
                    return;
                }
                inputs.push_back(std::move(in));
            };
            if (!args->annotations.empty()) {
                for (const auto& a : load_all(args->annotations)) {
                    const auto prepared = preprocess(a).annotation;
                    std::vector<SenseIndex> senses;
                    for (const auto& s : prepared.senses) senses.push_back(s.id());
                    add(a.word, senses);
                }
            } else if (!args->inventory.empty() && !args->words.empty()) {
                const auto inv = load_inventory(args->inventory);
                for (const auto& w : read_word_list(args->words)) {
                    const auto* list = inv.find(w);
                    if (!list) throw DataError("word '" + w + "' is not in the inventory");
                    std::vector<SenseIndex> senses;
                    for (const auto& s : *list) senses.push_back(s.record.id);
                    add(w, senses);
                }
            } else {
                throw UsageError("parse needs --annotations, or --inventory with --words");
            }
            std::string text;
            std::vector<std::string> warnings;
            for (const auto& in : inputs) {
                if (args->n_best) {
                    Json variants = Json::array();
                    for (const auto& p : parser->n_best(in, in.size(), &warnings)) variants.push_back(to_json(p));
                    text += Json{{"word", in.word}, {"model", parser->name()}, {"variants", variants}}.dump() + "\n";
                } else {
                    Json j = to_json(parser->predict(in));
                    j["model"] = parser->name();
                    text += j.dump() + "\n";
                }
            }
            for (const auto& w : warnings) err << "warning: " << w << "\n";
            write_output(args->out, text, out);
        };
    });
}

struct EvaluateArgs {
    ModelArgs model;
    std::vector<std::string> annotations;
    std::string embeddings;
    std::string split;
    std::string protocol = "both";
    std::string out;
};

void add_evaluate(CLI::App& app, std::function<void()>& action, std::ostream& out, std::ostream& err) {
    auto args = std::make_shared<EvaluateArgs>();
    auto* cmd = app.add_subcommand("evaluate", "Score a model against gold annotations (LOS/UUAS/ULAS)");
    add_model_options(cmd, args->model);
    cmd->add_option("--annotations", args->annotations, "Gold annotation files")->required();
    cmd->add_option("--embeddings", args->embeddings, "Sense embedding file");
    cmd->add_option("--split", args->split, "Evaluate on the test words of this split (default: all words)");
    cmd->add_option("--protocol", args->protocol, "1-best, n-best or both")
        ->check(CLI::IsMember({"1-best", "n-best", "both"}))
        ->capture_default_str();
    cmd->add_option("--out", args->out, "Write the JSON report here");
    cmd->callback([&action, &out, &err, args] {
        action = [&out, &err, args] {
            const auto parser = make_parser(args->model);
            std::vector<std::string> words;
            if (!args->split.empty()) words = load_split(args->split).test;
            EmbeddingTable table;
            if (!args->embeddings.empty()) {
                table = load_embeddings(args->embeddings);
            } else if (!args->model.random) {
                throw UsageError("--embeddings is required for trained models");
            }
            ExampleSet data;
            if (args->model.random && args->embeddings.empty()) {
                const std::set<std::string> wanted(words.begin(), words.end());
                for (const auto& a : load_all(args->annotations)) {
                    if (!wanted.empty() && !wanted.contains(a.word)) continue;
                    auto prepared = preprocess(a);
                    Example ex;
                    ex.gold = parse_from_annotation(prepared.annotation);
                    ex.input = {a.word, ex.gold.senses, {}};
                    data.examples.push_back(std::move(ex));
                }
            } else {
                data = make_examples(load_all(args->annotations), table, words);
            }
            for (const auto& w : data.excluded) err << "excluded (missing embeddings): " << w << "\n";
            std::vector<EvalResult> results;
            if (args->protocol != "n-best") results.push_back(evaluate(*parser, data.examples, Protocol::OneBest));
            if (args->protocol != "1-best") results.push_back(evaluate(*parser, data.examples, Protocol::NBest));
            Json list = Json::array();
            for (const auto& r : results) list.push_back(to_json(r));
            const Json report{{"model", parser->name()},
                              {"checkpoint", args->model.model},
                              {"seed", args->model.seed},
                              {"distance", args->model.distance},
                              {"words", data.examples.size()},
                              {"excluded", data.excluded},
                              {"n_best_selection", "oracle: variant with the highest UUAS against gold"},
                              {"results", list}};
            if (!args->out.empty()) write_output(args->out, report.dump(2) + "\n", out);
            out << format_table(results);
        };
    });
}

// ---------------------------------------------------------------- significance

struct SignificanceArgs {
    std::vector<std::string> results;
    std::string metrics = "los,uuas,ulas";
    std::size_t resamples = 10000;
    double alpha = 0.01;
    std::uint64_t seed = 1;
    std::string out;
};

void add_significance(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    auto args = std::make_shared<SignificanceArgs>();
    auto* cmd = app.add_subcommand("significance", "Paired permutation tests between evaluated models");
    cmd->add_option("--results", args->results, "Reports written by evaluate --out")->required();
    cmd->add_option("--metrics", args->metrics, "Comma-separated subset of los,uuas,ulas")->capture_default_str();
    cmd->add_option("--resamples", args->resamples)->capture_default_str();
    cmd->add_option("--alpha", args->alpha)->capture_default_str();
    cmd->add_option("--seed", args->seed)->capture_default_str();
    cmd->add_option("--out", args->out, "Write the JSON report here");
    cmd->callback([&action, &out, args] {
        action = [&out, args] {
            std::vector<EvalResult> results;
            for (const auto& path : args->results) {
                std::ifstream in(path);
                if (!in) throw DataError("cannot open " + path);
                Json doc;
                try {
                    doc = Json::parse(in);
                } catch (const Json::parse_error& e) {
                    throw DataError(path + ": " + e.what());
                }
                const Json& list = doc.contains("results") ? doc.at("results") : doc;
                if (list.is_array()) {
                    for (const auto& r : list) results.push_back(eval_result_from_json(r));
                } else {
                    results.push_back(eval_result_from_json(list));
                }
            }
            if (results.size() < 2) throw UsageError("significance needs at least two evaluated models");
            std::vector<Metric> metrics;
            for (const auto& m : split_commas(args->metrics)) metrics.push_back(parse_metric(m));
            const auto tests = compare_models(results, metrics, args->resamples, args->alpha, args->seed);
            Json list = Json::array();
            for (const auto& t : tests) list.push_back(to_json(t));
            const Json report{{"seed", args->seed}, {"tests", list}};
            if (!args->out.empty()) write_output(args->out, report.dump(2) + "\n", out);
            for (const auto& t : tests) {
                out << std::left << std::setw(20) << t.model_a << " vs " << std::setw(20) << t.model_b
                    << std::setw(6) << to_string(t.metric) << " p=" << std::setprecision(4) << t.p_value
                    << (t.significant ? "  *" : "") << "\n";
            }
            if (!tests.empty()) {
                out << "* significant at alpha " << args->alpha << " / " << tests.front().comparisons
                    << " comparisons\n";
            }
        };
    });
}

// ---------------------------------------------------------------- serve

struct ServeArgs {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string inventory;
    std::string words;
    std::string store_dir;
    std::string annotators;
    int replicas = 1;
};

void add_serve(CLI::App& app, std::function<void()>& action, std::ostream& out) {
    auto args = std::make_shared<ServeArgs>();
    auto* cmd = app.add_subcommand("serve", "Run the annotation HTTP service");
    cmd->add_option("--host", args->host)->capture_default_str();
    cmd->add_option("--port", args->port)->capture_default_str();
    cmd->add_option("--inventory", args->inventory, "Inventory JSON or WordNet dict directory")->required();
    cmd->add_option("--words", args->words, "Queue order, one word per line (default: eligible inventory words)");
    cmd->add_option("--store-dir", args->store_dir, "Directory for the event log and snapshots")->required();
    cmd->add_option("--annotators", args->annotators, "File of 'token annotator' lines")->required();
    cmd->add_option("--replicas", args->replicas, "Annotators per word")->capture_default_str();
    cmd->callback([&action, &out, args] {
        action = [&out, args] {
            auto inventory = load_inventory(args->inventory);
            const auto words = args->words.empty() ? filter_words(inventory) : read_word_list(args->words);
            auto tokens = load_tokens(args->annotators);
            AnnotationService service(std::move(inventory), words, {args->store_dir, args->replicas, 100});
            out << "serving " << service.task_count() << " task(s) on " << args->host << ":" << args->port
                << std::endl;
            serve(service, std::move(tokens), args->host, args->port);
        };
    });
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"chainnet: sense-forest annotation, agreement and polysemy parsing"};
    app.name("chainnet");
    app.set_config("--config", "", "Read options from a TOML/INI file");
    app.require_subcommand(1);
    std::function<void()> action;
    add_validate(app, action, out);
    add_stats(app, action, out);
    add_count(app, action, out);
    add_agree(app, action, out);
    add_preprocess(app, action, out, err);
    add_split(app, action, out);
    add_train(app, action, out, err);
    add_parse(app, action, out, err);
    add_evaluate(app, action, out, err);
    add_significance(app, action, out);
    add_serve(app, action, out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << "chainnet 1.0.0\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        if (!app.get_subcommands().empty()) {
            err << "run 'chainnet " << app.get_subcommands().front()->get_name() << " --help' for usage\n";
        }
        return kExitUsage;
    }
    try {
        action();
    } catch (const DataViolations&) {
        return kExitData;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const Json::exception& e) {
        err << "error: malformed JSON: " << e.what() << "\n";
        return kExitData;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}

}  // namespace chainnet
