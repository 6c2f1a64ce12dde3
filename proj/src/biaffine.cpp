#include "chainnet/biaffine.hpp"

#include <cmath>

namespace chainnet {

Json to_json(const BiaffineConfig& config) {
    return Json{{"dimension", config.dimension},
                {"edge_hidden", config.edge_hidden},
                {"label_hidden", config.label_hidden},
                {"activation", std::string(to_string(config.activation))},
                {"dropout", config.dropout}};
}

BiaffineConfig biaffine_config_from_json(const Json& doc) {
    BiaffineConfig c;
    c.dimension = doc.at("dimension").get<Eigen::Index>();
    c.edge_hidden = doc.value("edge_hidden", c.edge_hidden);
    c.label_hidden = doc.value("label_hidden", c.label_hidden);
    c.activation = parse_activation(doc.value("activation", std::string("leaky_relu")));
    c.dropout = doc.value("dropout", c.dropout);
    if (c.dimension < 1 || c.edge_hidden < 1 || c.label_hidden < 1) throw DataError("biaffine sizes must be positive");
    if (c.dropout < 0 || c.dropout >= 1) throw DataError("dropout must lie in [0, 1)");
    return c;
}

BiaffineScorer BiaffineScorer::create(Eigen::Index in, Eigen::Index hidden, std::size_t classes, Rng& rng) {
    BiaffineScorer s;
    s.head = Mlp::create(in, hidden, rng);
    s.dep = Mlp::create(in, hidden, rng);
    for (std::size_t c = 0; c < classes; ++c) s.u.push_back(init_uniform(hidden, hidden, hidden, rng));
    const auto cls = static_cast<Eigen::Index>(classes);
    s.w_head = init_uniform(hidden, cls, 2 * hidden, rng);
    s.w_dep = init_uniform(hidden, cls, 2 * hidden, rng);
    s.bias = Eigen::MatrixXd::Zero(1, cls);
    return s;
}

BiaffineScorer BiaffineScorer::zeros_like() const {
    BiaffineScorer s;
    s.head = head.zeros_like();
    s.dep = dep.zeros_like();
    for (const auto& m : u) s.u.push_back(Eigen::MatrixXd::Zero(m.rows(), m.cols()));
    s.w_head = Eigen::MatrixXd::Zero(w_head.rows(), w_head.cols());
    s.w_dep = Eigen::MatrixXd::Zero(w_dep.rows(), w_dep.cols());
    s.bias = Eigen::MatrixXd::Zero(bias.rows(), bias.cols());
    return s;
}

void BiaffineScorer::append_parameters(const std::string& prefix, std::vector<Parameter>& out) {
    head.append_parameters(prefix + ".mlp_head", out);
    dep.append_parameters(prefix + ".mlp_dep", out);
    for (std::size_t c = 0; c < u.size(); ++c) out.push_back({prefix + ".u" + std::to_string(c), &u[c]});
    out.push_back({prefix + ".w_head", &w_head});
    out.push_back({prefix + ".w_dep", &w_dep});
    out.push_back({prefix + ".bias", &bias});
}

ScorerPass ScorerPass::run(const BiaffineScorer& scorer, const Eigen::MatrixXd& x, Activation activation, double rate,
                           Rng* dropout) {
    ScorerPass pass;
    pass.head = MlpPass::run(scorer.head, x, activation, rate, dropout);
    pass.dep = MlpPass::run(scorer.dep, x, activation, rate, dropout);
    const auto& h = pass.head.out;
    const auto& d = pass.dep.out;
    for (std::size_t c = 0; c < scorer.classes(); ++c) {
        const auto col = static_cast<Eigen::Index>(c);
        pass.u_dep.push_back(scorer.u[c] * d);
        Eigen::MatrixXd s = h.transpose() * pass.u_dep.back();
        s.colwise() += h.transpose() * scorer.w_head.col(col);
        s.rowwise() += (d.transpose() * scorer.w_dep.col(col)).transpose();
        s.array() += scorer.bias(0, col);
        pass.scores.push_back(std::move(s));
    }
    return pass;
}

void ScorerPass::backward(const BiaffineScorer& scorer, const Eigen::MatrixXd& x,
                          const std::vector<Eigen::MatrixXd>& d_scores, Activation activation,
                          BiaffineScorer& grad) const {
    const auto& h = head.out;
    const auto& d = dep.out;
    Eigen::MatrixXd dh = Eigen::MatrixXd::Zero(h.rows(), h.cols());
    Eigen::MatrixXd dd = Eigen::MatrixXd::Zero(d.rows(), d.cols());
    for (std::size_t c = 0; c < scorer.classes(); ++c) {
        const auto col = static_cast<Eigen::Index>(c);
        const auto& ds = d_scores[c];
        const Eigen::VectorXd row_sum = ds.rowwise().sum();  // per head
        const Eigen::VectorXd col_sum = ds.colwise().sum().transpose();  // per dependent
        grad.u[c].noalias() += h * ds * d.transpose();
        dh.noalias() += u_dep[c] * ds.transpose();
        dh.noalias() += scorer.w_head.col(col) * row_sum.transpose();
        dd.noalias() += scorer.u[c].transpose() * (h * ds);
        dd.noalias() += scorer.w_dep.col(col) * col_sum.transpose();
        grad.w_head.col(col) += h * row_sum;
        grad.w_dep.col(col) += d * col_sum;
        grad.bias(0, col) += ds.sum();
    }
    head.backward(x, dh, activation, grad.head);
    dep.backward(x, dd, activation, grad.dep);
}

BiaffineModel BiaffineModel::create(const BiaffineConfig& config, Rng& rng) {
    if (config.dimension < 1) throw UsageError("biaffine model needs a positive embedding dimension");
    BiaffineModel m;
    m.config = config;
    m.edge = BiaffineScorer::create(config.dimension, config.edge_hidden, 1, rng);
    m.label = BiaffineScorer::create(config.dimension, config.label_hidden, 2, rng);
    return m;
}

BiaffineModel BiaffineModel::zeros_like() const { return {config, edge.zeros_like(), label.zeros_like()}; }

std::vector<Parameter> BiaffineModel::parameters() {
    auto out = edge_parameters();
    for (auto& p : label_parameters()) out.push_back(p);
    return out;
}

std::vector<Parameter> BiaffineModel::edge_parameters() {
    std::vector<Parameter> out;
    edge.append_parameters("edge", out);
    return out;
}

std::vector<Parameter> BiaffineModel::label_parameters() {
    std::vector<Parameter> out;
    label.append_parameters("label", out);
    return out;
}

namespace {

Eigen::MatrixXd sense_matrix(const WordInput& word) {
    if (word.embeddings.size() != word.size() || word.size() == 0) {
        throw UsageError("'" + word.word + "' needs one embedding per sense");
    }
    Eigen::MatrixXd x(word.embeddings.front().size(), static_cast<Eigen::Index>(word.size()));
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (word.embeddings[i].size() != x.rows()) throw UsageError("embedding dimensions differ within '" + word.word + "'");
        x.col(static_cast<Eigen::Index>(i)) = word.embeddings[i];
    }
    return x;
}

void mask_unusable(ScoreMatrix& s) {
    s.col(0).setConstant(kForbidden);
    s.diagonal().setConstant(kForbidden);
}

std::size_t label_class(LabelKind kind) { return kind == LabelKind::Metonymy ? 1 : 0; }

}  // namespace

Eigen::MatrixXd node_matrix(const WordInput& word) {
    const auto senses = sense_matrix(word);
    Eigen::MatrixXd x(senses.rows(), senses.cols() + 1);
    x.col(0) = senses.rowwise().mean();
    x.rightCols(senses.cols()) = senses;
    return x;
}

ScoreMatrix biaffine_edge_scores(const BiaffineModel& model, const WordInput& word) {
    auto pass = ScorerPass::run(model.edge, node_matrix(word), model.config.activation, 0.0, nullptr);
    ScoreMatrix s = std::move(pass.scores.front());
    mask_unusable(s);
    return s;
}

std::vector<Eigen::MatrixXd> biaffine_label_logits(const BiaffineModel& model, const WordInput& word) {
    return ScorerPass::run(model.label, sense_matrix(word), model.config.activation, 0.0, nullptr).scores;
}

Parse biaffine_decode(const WordInput& word, const ScoreMatrix& scores,
                      const std::vector<Eigen::MatrixXd>& label_logits) {
    const auto tree = max_arborescence(scores);
    Parse p;
    p.word = word.word;
    p.senses = word.senses;
    for (std::size_t i = 0; i < word.size(); ++i) {
        const int head = tree.head[i + 1];
        if (head == 0) {
            p.labels.push_back(LabelKind::Prototype);
            p.heads.push_back(std::nullopt);
            continue;
        }
        const auto h = static_cast<Eigen::Index>(head - 1);
        const auto d = static_cast<Eigen::Index>(i);
        p.labels.push_back(label_logits[1](h, d) > label_logits[0](h, d) ? LabelKind::Metonymy : LabelKind::Metaphor);
        p.heads.push_back(static_cast<std::size_t>(head - 1));
    }
    return p;
}

Parse biaffine_predict(const BiaffineModel& model, const WordInput& word) {
    return biaffine_decode(word, biaffine_edge_scores(model, word), biaffine_label_logits(model, word));
}

double biaffine_edge_loss(const BiaffineModel& model, const std::vector<const Example*>& batch, BiaffineModel* grad,
                          Rng* dropout) {
    std::size_t count = 0;
    for (const auto* ex : batch) count += ex->gold.size();
    if (count == 0) return 0.0;
    const double scale = 1.0 / static_cast<double>(count);
    double loss = 0;
    for (const auto* ex : batch) {
        const auto x = node_matrix(ex->input);
        const auto pass = ScorerPass::run(model.edge, x, model.config.activation, model.config.dropout, dropout);
        const auto& s = pass.scores.front();
        Eigen::MatrixXd ds = Eigen::MatrixXd::Zero(s.rows(), s.cols());
        for (Eigen::Index d = 1; d < s.cols(); ++d) {
            Eigen::VectorXd column = s.col(d);
            column(d) = kForbidden;
            const double norm = log_sum_exp(column);
            const auto& gold_head = ex->gold.heads[static_cast<std::size_t>(d - 1)];
            const Eigen::Index g = gold_head ? static_cast<Eigen::Index>(*gold_head) + 1 : 0;
            loss += (norm - column(g)) * scale;
            if (grad) {
                for (Eigen::Index h = 0; h < s.rows(); ++h) {
                    if (h != d) ds(h, d) = std::exp(column(h) - norm) * scale;
                }
                ds(g, d) -= scale;
            }
        }
        if (grad) pass.backward(model.edge, x, {ds}, model.config.activation, grad->edge);
    }
    return loss;
}

double biaffine_label_loss(const BiaffineModel& model, const std::vector<const Example*>& batch, BiaffineModel* grad,
                           Rng* dropout) {
    std::size_t count = 0;
    for (const auto* ex : batch) {
        for (const auto& h : ex->gold.heads) count += h ? 1 : 0;
    }
    if (count == 0) return 0.0;
    const double scale = 1.0 / static_cast<double>(count);
    double loss = 0;
    for (const auto* ex : batch) {
        const auto& gold = ex->gold;
        if (gold.prototype_count() == gold.size()) continue;
        const auto x = sense_matrix(ex->input);
        const auto pass = ScorerPass::run(model.label, x, model.config.activation, model.config.dropout, dropout);
        std::vector<Eigen::MatrixXd> ds(2, Eigen::MatrixXd::Zero(x.cols(), x.cols()));
        for (std::size_t i = 0; i < gold.size(); ++i) {
            if (!gold.heads[i]) continue;
            const auto h = static_cast<Eigen::Index>(*gold.heads[i]);
            const auto d = static_cast<Eigen::Index>(i);
            Eigen::VectorXd logits(2);
            logits << pass.scores[0](h, d), pass.scores[1](h, d);
            const double norm = log_sum_exp(logits);
            const auto y = label_class(gold.labels[i]);
            loss += (norm - logits(static_cast<Eigen::Index>(y))) * scale;
            if (grad) {
                for (std::size_t c = 0; c < 2; ++c) {
                    ds[c](h, d) = (std::exp(logits(static_cast<Eigen::Index>(c)) - norm) - (c == y ? 1.0 : 0.0)) * scale;
                }
            }
        }
        if (grad) pass.backward(model.label, x, ds, model.config.activation, grad->label);
    }
    return loss;
}

Parse BiaffineParser::predict(const WordInput& word) const { return biaffine_predict(model_, word); }

std::vector<Parse> BiaffineParser::n_best(const WordInput& word, std::size_t n,
                                          std::vector<std::string>* warnings) const {
    const auto scores = biaffine_edge_scores(model_, word);
    const auto labels = biaffine_label_logits(model_, word);
    const auto best = biaffine_decode(word, scores, labels);
    auto redecode = [&](const ParseEdge& edge) -> std::optional<Parse> {
        ScoreMatrix banned = scores;
        const auto h = edge.head ? static_cast<Eigen::Index>(*edge.head) + 1 : 0;
        banned(h, static_cast<Eigen::Index>(edge.dependent) + 1) = kForbidden;
        try {
            return biaffine_decode(word, banned, labels);
        } catch (const UsageError&) {
            return std::nullopt;
        }
    };
    return n_best_variants(best, n, redecode, true, warnings);
}

}  // namespace chainnet
