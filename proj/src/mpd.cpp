#include "chainnet/mpd.hpp"

#include <cmath>
#include <limits>

namespace chainnet {

MpdModel MpdModel::create(Eigen::Index k, Rng& rng) {
    MpdModel m;
    m.weight = init_uniform(kLabelCount, k, k, rng);
    m.bias = init_uniform(kLabelCount, 1, k, rng);
    return m;
}

MpdModel MpdModel::zeros_like() const {
    return {Eigen::MatrixXd::Zero(weight.rows(), weight.cols()), Eigen::MatrixXd::Zero(bias.rows(), 1)};
}

std::vector<Parameter> MpdModel::parameters() { return {{"mpd.weight", &weight}, {"mpd.bias", &bias}}; }

LabelProbabilities mpd_probabilities(const MpdModel& model, const Eigen::VectorXd& embedding) {
    if (embedding.size() != model.dimension()) throw UsageError("embedding dimension does not match the model");
    const Eigen::VectorXd logits = model.weight * embedding + model.bias.col(0);
    const double norm = log_sum_exp(logits);
    LabelProbabilities p{};
    for (std::size_t c = 0; c < kLabelCount; ++c) p[c] = std::exp(logits(static_cast<Eigen::Index>(c)) - norm);
    return p;
}

std::vector<LabelKind> mpd_labels(const std::vector<LabelProbabilities>& probabilities) {
    const auto n = probabilities.size();
    if (n == 0) throw UsageError("no senses to label");
    constexpr auto P = static_cast<std::size_t>(LabelKind::Prototype);
    constexpr auto M = static_cast<std::size_t>(LabelKind::Metaphor);
    constexpr auto Me = static_cast<std::size_t>(LabelKind::Metonymy);
    std::size_t proto = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (probabilities[i][P] > probabilities[proto][P]) proto = i;
    }
    std::vector<LabelKind> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == proto) {
            labels[i] = LabelKind::Prototype;
        } else {
            labels[i] = probabilities[i][Me] > probabilities[i][M] ? LabelKind::Metonymy : LabelKind::Metaphor;
        }
    }
    return labels;
}

namespace {

struct MpdDecoded {
    std::vector<LabelKind> labels;
    std::vector<LabelProbabilities> probabilities;
    Eigen::MatrixXd distances;
};

MpdDecoded mpd_decode(const MpdModel& model, const WordInput& word, Distance metric) {
    if (word.embeddings.size() != word.size()) throw UsageError("'" + word.word + "' is missing embeddings");
    MpdDecoded d;
    for (const auto& e : word.embeddings) d.probabilities.push_back(mpd_probabilities(model, e));
    d.labels = mpd_labels(d.probabilities);
    d.distances = distance_matrix(word.embeddings, metric);
    return d;
}

}  // namespace

Parse mpd_predict(const MpdModel& model, const WordInput& word, Distance metric) {
    const auto d = mpd_decode(model, word, metric);
    const auto tree = minimum_spanning_tree(d.distances);
    return orient_and_label(word.word, word.senses, *tree, d.labels, d.probabilities);
}

double mpd_loss(const MpdModel& model, const std::vector<const Example*>& batch, MpdModel* grad) {
    std::size_t count = 0;
    for (const auto* ex : batch) count += ex->gold.size();
    if (count == 0) return 0.0;
    const double scale = 1.0 / static_cast<double>(count);
    double loss = 0;
    for (const auto* ex : batch) {
        for (std::size_t i = 0; i < ex->gold.size(); ++i) {
            const auto& x = ex->input.embeddings[i];
            const Eigen::VectorXd logits = model.weight * x + model.bias.col(0);
            const double norm = log_sum_exp(logits);
            const auto gold = static_cast<Eigen::Index>(ex->gold.labels[i]);
            loss += (norm - logits(gold)) * scale;
            if (grad) {
                Eigen::VectorXd d = (logits.array() - norm).exp().matrix();
                d(gold) -= 1.0;
                d *= scale;
                grad->weight.noalias() += d * x.transpose();
                grad->bias.col(0) += d;
            }
        }
    }
    return loss;
}

Parse MpdParser::predict(const WordInput& word) const { return mpd_predict(model_, word, metric_); }

std::vector<Parse> MpdParser::n_best(const WordInput& word, std::size_t n, std::vector<std::string>* warnings) const {
    const auto d = mpd_decode(model_, word, metric_);
    const auto best = orient_and_label(word.word, word.senses, *minimum_spanning_tree(d.distances), d.labels,
                                       d.probabilities);
    auto redecode = [&](const ParseEdge& edge) -> std::optional<Parse> {
        Eigen::MatrixXd banned = d.distances;
        const auto a = static_cast<Eigen::Index>(*edge.head);
        const auto b = static_cast<Eigen::Index>(edge.dependent);
        banned(a, b) = banned(b, a) = std::numeric_limits<double>::infinity();
        const auto tree = minimum_spanning_tree(banned);
        if (!tree) return std::nullopt;
        return orient_and_label(word.word, word.senses, *tree, d.labels, d.probabilities);
    };
    return n_best_variants(best, n, redecode, false, warnings);
}

}  // namespace chainnet
