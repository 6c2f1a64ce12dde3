#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "chainnet/decoding.hpp"
#include "chainnet/nn.hpp"
#include "chainnet/parsers.hpp"

namespace chainnet {

/// Most-probable-label classifier: a linear layer and softmax mapping a
/// sense embedding to prototype/metaphor/metonymy.
struct MpdModel {
    Eigen::MatrixXd weight;  // 3 x k
    Eigen::MatrixXd bias;    // 3 x 1

    static MpdModel create(Eigen::Index k, Rng& rng);
    MpdModel zeros_like() const;
    Eigen::Index dimension() const { return weight.cols(); }
    std::vector<Parameter> parameters();
};

using LabelProbabilities = std::array<double, kLabelCount>;

LabelProbabilities mpd_probabilities(const MpdModel& model, const Eigen::VectorXd& embedding);

/// Exactly one prototype: the sense with the highest prototype probability
/// (lower index on ties). Other senses take their argmax with prototype
/// masked out.
std::vector<LabelKind> mpd_labels(const std::vector<LabelProbabilities>& probabilities);

/// Labels from mpd_labels, structure from the undirected MST oriented away
/// from the prototype.
Parse mpd_predict(const MpdModel& model, const WordInput& word, Distance metric = Distance::Euclidean);

/// Mean cross-entropy of the gold labels over every sense in the batch.
/// Adds the gradient into `grad` when given.
double mpd_loss(const MpdModel& model, const std::vector<const Example*>& batch, MpdModel* grad);

class MpdParser : public PolysemyParser {
public:
    explicit MpdParser(MpdModel model, Distance metric = Distance::Euclidean)
        : model_(std::move(model)), metric_(metric) {}
    std::string name() const override { return "mpd+mst"; }
    Parse predict(const WordInput& word) const override;
    /// Variants recompute the MST with one sense-sense edge removed.
    std::vector<Parse> n_best(const WordInput& word, std::size_t n,
                              std::vector<std::string>* warnings = nullptr) const override;
    const MpdModel& model() const { return model_; }

private:
    MpdModel model_;
    Distance metric_;
};

}  // namespace chainnet
