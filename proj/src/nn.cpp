#include "chainnet/nn.hpp"

#include <cmath>
#include <limits>

#include "chainnet/sense.hpp"

namespace chainnet {

namespace {
constexpr double kLeak = 0.1;
}

std::string_view to_string(Activation activation) {
    switch (activation) {
        case Activation::LeakyRelu: return "leaky_relu";
        case Activation::Relu: return "relu";
        case Activation::Identity: return "identity";
    }
    return "?";
}

Activation parse_activation(std::string_view text) {
    if (text == "leaky_relu") return Activation::LeakyRelu;
    if (text == "relu") return Activation::Relu;
    if (text == "identity") return Activation::Identity;
    throw UsageError("unknown activation '" + std::string(text) + "'");
}

Eigen::MatrixXd activate(const Eigen::MatrixXd& z, Activation activation) {
    switch (activation) {
        case Activation::LeakyRelu: return z.unaryExpr([](double x) { return x > 0 ? x : kLeak * x; });
        case Activation::Relu: return z.cwiseMax(0.0);
        case Activation::Identity: return z;
    }
    return z;
}

Eigen::MatrixXd activation_slope(const Eigen::MatrixXd& z, Activation activation) {
    switch (activation) {
        case Activation::LeakyRelu: return z.unaryExpr([](double x) { return x > 0 ? 1.0 : kLeak; });
        case Activation::Relu: return z.unaryExpr([](double x) { return x > 0 ? 1.0 : 0.0; });
        case Activation::Identity: return Eigen::MatrixXd::Ones(z.rows(), z.cols());
    }
    return Eigen::MatrixXd::Ones(z.rows(), z.cols());
}

Eigen::MatrixXd init_uniform(Eigen::Index rows, Eigen::Index cols, Eigen::Index fan_in, Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<Eigen::Index>(fan_in, 1)));
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.uniform(-bound, bound);
    }
    return m;
}

Mlp Mlp::create(Eigen::Index in, Eigen::Index out, Rng& rng) {
    Mlp mlp;
    mlp.weight = init_uniform(out, in, in, rng);
    mlp.bias = init_uniform(out, 1, in, rng);
    return mlp;
}

Mlp Mlp::zeros_like() const {
    return {Eigen::MatrixXd::Zero(weight.rows(), weight.cols()), Eigen::MatrixXd::Zero(bias.rows(), 1)};
}

void Mlp::append_parameters(const std::string& prefix, std::vector<Parameter>& out) {
    out.push_back({prefix + ".weight", &weight});
    out.push_back({prefix + ".bias", &bias});
}

MlpPass MlpPass::run(const Mlp& mlp, const Eigen::MatrixXd& input, Activation activation, double rate, Rng* dropout) {
    MlpPass pass;
    pass.pre = (mlp.weight * input).colwise() + mlp.bias.col(0);
    pass.out = activate(pass.pre, activation);
    if (dropout && rate > 0) {
        pass.mask.resize(pass.out.rows(), pass.out.cols());
        const double keep = 1.0 - rate;
        for (Eigen::Index j = 0; j < pass.mask.cols(); ++j) {
            for (Eigen::Index i = 0; i < pass.mask.rows(); ++i) {
                pass.mask(i, j) = dropout->uniform() < rate ? 0.0 : 1.0 / keep;
            }
        }
        pass.out = pass.out.cwiseProduct(pass.mask);
    }
    return pass;
}

void MlpPass::backward(const Eigen::MatrixXd& input, const Eigen::MatrixXd& d_out, Activation activation,
                       Mlp& grad) const {
    Eigen::MatrixXd d = mask.size() ? d_out.cwiseProduct(mask) : d_out;
    d = d.cwiseProduct(activation_slope(pre, activation));
    grad.weight.noalias() += d * input.transpose();
    grad.bias.col(0) += d.rowwise().sum();
}

double log_sum_exp(const Eigen::VectorXd& values) {
    double top = -std::numeric_limits<double>::infinity();
    for (double v : values) top = std::max(top, v);
    if (!std::isfinite(top)) return top;
    double sum = 0;
    for (double v : values) {
        if (std::isfinite(v)) sum += std::exp(v - top);
    }
    return top + std::log(sum);
}

AdamW::AdamW(const std::vector<Parameter>& parameters, Options options)
    : parameters_(parameters), options_(options) {
    reset();
}

void AdamW::reset() {
    m_.clear();
    v_.clear();
    for (const auto& p : parameters_) {
        m_.push_back(Eigen::MatrixXd::Zero(p.value->rows(), p.value->cols()));
        v_.push_back(Eigen::MatrixXd::Zero(p.value->rows(), p.value->cols()));
    }
    steps_ = 0;
}

void AdamW::step(const std::vector<Parameter>& gradients) {
    if (gradients.size() != parameters_.size()) throw UsageError("gradient list does not match parameters");
    ++steps_;
    const double b1 = options_.beta1;
    const double b2 = options_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
    const double lr = options_.learning_rate;
    for (std::size_t i = 0; i < parameters_.size(); ++i) {
        auto& w = *parameters_[i].value;
        const auto& g = *gradients[i].value;
        m_[i] = b1 * m_[i] + (1.0 - b1) * g;
        v_[i] = b2 * v_[i] + (1.0 - b2) * g.cwiseAbs2();
        w *= 1.0 - lr * options_.weight_decay;
        w.array() -= lr * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + options_.epsilon);
    }
}

}  // namespace chainnet
