#pragma once

#include <vector>

#include <Eigen/Dense>

#include "chainnet/annotation_json.hpp"
#include "chainnet/decoding.hpp"
#include "chainnet/nn.hpp"
#include "chainnet/parsers.hpp"

namespace chainnet {

struct BiaffineConfig {
    Eigen::Index dimension = 0;       // k, the embedding size
    Eigen::Index edge_hidden = 2048;  // k' of the edge scorer
    Eigen::Index label_hidden = 100;  // k' of the label scorer
    Activation activation = Activation::LeakyRelu;
    double dropout = 0.33;

    bool operator==(const BiaffineConfig&) const = default;
};

Json to_json(const BiaffineConfig& config);
BiaffineConfig biaffine_config_from_json(const Json& doc);

/// MLP_head and MLP_dep followed by one biaffine form per output class:
///   s_c(h, d) = h' U_c d + w_head_c . h + w_dep_c . d + b_c
/// where h = MLP_head(e_h) and d = MLP_dep(e_d).
struct BiaffineScorer {
    Mlp head;
    Mlp dep;
    std::vector<Eigen::MatrixXd> u;  // per class, k' x k'
    Eigen::MatrixXd w_head;          // k' x classes
    Eigen::MatrixXd w_dep;           // k' x classes
    Eigen::MatrixXd bias;            // 1 x classes

    static BiaffineScorer create(Eigen::Index in, Eigen::Index hidden, std::size_t classes, Rng& rng);
    BiaffineScorer zeros_like() const;
    std::size_t classes() const { return u.size(); }
    void append_parameters(const std::string& prefix, std::vector<Parameter>& out);
};

/// Forward pass of a scorer over the columns of X, used as both heads and
/// dependents. scores[c](i, j) is class c's score for head i, dependent j.
struct ScorerPass {
    MlpPass head;
    MlpPass dep;
    std::vector<Eigen::MatrixXd> u_dep;  // U_c D
    std::vector<Eigen::MatrixXd> scores;

    static ScorerPass run(const BiaffineScorer& scorer, const Eigen::MatrixXd& x, Activation activation, double rate,
                          Rng* dropout);
    void backward(const BiaffineScorer& scorer, const Eigen::MatrixXd& x, const std::vector<Eigen::MatrixXd>& d_scores,
                  Activation activation, BiaffineScorer& grad) const;
};

/// Edge scorer (one class) and label scorer (metaphor, metonymy), trained
/// as separate optimisation problems.
struct BiaffineModel {
    BiaffineConfig config;
    BiaffineScorer edge;
    BiaffineScorer label;

    static BiaffineModel create(const BiaffineConfig& config, Rng& rng);
    BiaffineModel zeros_like() const;
    std::vector<Parameter> parameters();
    std::vector<Parameter> edge_parameters();
    std::vector<Parameter> label_parameters();
};

/// Columns: the word root (mean of the sense embeddings), then the senses.
Eigen::MatrixXd node_matrix(const WordInput& word);

/// Evaluation-mode edge scores over root + senses. Self-loops and edges into
/// the root are kForbidden.
ScoreMatrix biaffine_edge_scores(const BiaffineModel& model, const WordInput& word);

/// Label logits: element c is an n x n matrix over sense positions with
/// c = 0 metaphor, c = 1 metonymy.
std::vector<Eigen::MatrixXd> biaffine_label_logits(const BiaffineModel& model, const WordInput& word);

/// Maximum arborescence over the scores; root children become prototypes
/// and every other edge takes the argmax label (metaphor on ties).
Parse biaffine_decode(const WordInput& word, const ScoreMatrix& scores, const std::vector<Eigen::MatrixXd>& label_logits);

Parse biaffine_predict(const BiaffineModel& model, const WordInput& word);

/// Mean over senses of -log softmax(column of candidate heads)[gold head].
/// Dropout is applied when `dropout` is given. Gradients are added into the
/// edge scorer of `grad`.
double biaffine_edge_loss(const BiaffineModel& model, const std::vector<const Example*>& batch, BiaffineModel* grad,
                          Rng* dropout);

/// Mean cross-entropy of metaphor/metonymy over gold sense-to-sense edges.
/// Gradients are added into the label scorer of `grad`.
double biaffine_label_loss(const BiaffineModel& model, const std::vector<const Example*>& batch, BiaffineModel* grad,
                           Rng* dropout);

class BiaffineParser : public PolysemyParser {
public:
    explicit BiaffineParser(BiaffineModel model) : model_(std::move(model)) {}
    std::string name() const override { return "biaffine"; }
    Parse predict(const WordInput& word) const override;
    /// Variants re-decode with one directed edge (root edges included) forbidden.
    std::vector<Parse> n_best(const WordInput& word, std::size_t n,
                              std::vector<std::string>* warnings = nullptr) const override;
    const BiaffineModel& model() const { return model_; }

private:
    BiaffineModel model_;
};

}  // namespace chainnet
