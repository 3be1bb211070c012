#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

namespace sunlit {

/// Fully connected network with tanh hidden layers and a linear output.
/// Inputs are laid out one sample per column.
class Mlp {
 public:
  Mlp() = default;
  /// `sizes` = {inputs, hidden..., outputs}; at least two entries.
  explicit Mlp(std::vector<int> sizes);

  /// Orthogonal initialization; hidden layers use `hidden_gain`, the output
  /// layer `output_gain`. Biases start at zero.
  void initialize(std::mt19937_64& rng, double hidden_gain, double output_gain);

  struct Cache {
    // activations[0] is the input; activations[i] the output of layer i.
    std::vector<Eigen::MatrixXd> activations;
  };

  Eigen::MatrixXd forward(const Eigen::MatrixXd& input) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input, Cache& cache) const;

  /// Accumulates dLoss/dparams into `grad` (flat, same order as flatten()).
  void backward(const Cache& cache, const Eigen::MatrixXd& grad_output,
                Eigen::VectorXd& grad) const;

  std::size_t parameter_count() const;
  Eigen::VectorXd flatten() const;
  void assign(const Eigen::VectorXd& flat);

  const std::vector<int>& sizes() const { return sizes_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  const std::vector<Eigen::VectorXd>& biases() const { return biases_; }
  bool all_finite() const;

 private:
  std::vector<int> sizes_;
  std::vector<Eigen::MatrixXd> weights_;  // out x in
  std::vector<Eigen::VectorXd> biases_;
};

/// Adam with bias correction over a flat parameter vector.
struct AdamState {
  Eigen::VectorXd first;
  Eigen::VectorXd second;
  long steps = 0;

  void resize(std::size_t n);
};

struct AdamConfig {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grad,
               AdamState& state, const AdamConfig& cfg);

}  // namespace sunlit
