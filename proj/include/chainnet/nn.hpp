#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "chainnet/rng.hpp"

namespace chainnet {

/// A named, trainable tensor. Vectors are stored as one-column matrices and
/// scalars as 1x1 matrices so every parameter shares one representation.
struct Parameter {
    std::string name;
    Eigen::MatrixXd* value;
};

struct ConstParameter {
    std::string name;
    const Eigen::MatrixXd* value;
};

enum class Activation { LeakyRelu, Relu, Identity };

std::string_view to_string(Activation activation);
Activation parse_activation(std::string_view text);

Eigen::MatrixXd activate(const Eigen::MatrixXd& z, Activation activation);
/// Elementwise derivative of the activation evaluated at the pre-activation z.
Eigen::MatrixXd activation_slope(const Eigen::MatrixXd& z, Activation activation);

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)).
Eigen::MatrixXd init_uniform(Eigen::Index rows, Eigen::Index cols, Eigen::Index fan_in, Rng& rng);

/// One affine layer followed by a nonlinearity: x (k) -> act(W x + b) (k').
struct Mlp {
    Eigen::MatrixXd weight;  // k' x k
    Eigen::MatrixXd bias;    // k' x 1

    static Mlp create(Eigen::Index in, Eigen::Index out, Rng& rng);
    Mlp zeros_like() const;
    void append_parameters(const std::string& prefix, std::vector<Parameter>& out);
};

/// Cached forward pass of an Mlp over the columns of an input matrix.
struct MlpPass {
    Eigen::MatrixXd pre;   // W X + b
    Eigen::MatrixXd mask;  // inverted-dropout scale per unit; empty when off
    Eigen::MatrixXd out;

    /// Forward. When `dropout` is given, units are zeroed with probability
    /// `rate` and survivors scaled by 1/(1-rate).
    static MlpPass run(const Mlp& mlp, const Eigen::MatrixXd& input, Activation activation, double rate, Rng* dropout);

    /// Accumulates parameter gradients into `grad` from d(loss)/d(out).
    void backward(const Eigen::MatrixXd& input, const Eigen::MatrixXd& d_out, Activation activation, Mlp& grad) const;
};

/// Numerically stable log-sum-exp over a vector's finite entries.
double log_sum_exp(const Eigen::VectorXd& values);

/// Adam with decoupled weight decay.
class AdamW {
public:
    struct Options {
        double learning_rate = 5e-5;
        double beta1 = 0.9;
        double beta2 = 0.9;
        double epsilon = 1e-8;
        double weight_decay = 0.01;
    };

    AdamW(const std::vector<Parameter>& parameters, Options options);

    void step(const std::vector<Parameter>& gradients);

    double learning_rate() const { return options_.learning_rate; }
    void set_learning_rate(double lr) { options_.learning_rate = lr; }
    /// Forgets the moment estimates (used after restoring a checkpoint).
    void reset();

private:
    std::vector<Parameter> parameters_;
    Options options_;
    std::vector<Eigen::MatrixXd> m_;
    std::vector<Eigen::MatrixXd> v_;
    long steps_ = 0;
};

}  // namespace chainnet
