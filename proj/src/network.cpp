#include "sunlit/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sunlit/error.hpp"

namespace sunlit {

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) {
    throw Error(ErrorKind::Training, "network needs input and output sizes");
  }
  for (const int s : sizes_) {
    if (s < 1) throw Error(ErrorKind::Training, "layer sizes must be >= 1");
  }
  for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) {
    weights_.emplace_back(Eigen::MatrixXd::Zero(sizes_[i + 1], sizes_[i]));
    biases_.emplace_back(Eigen::VectorXd::Zero(sizes_[i + 1]));
  }
}

void Mlp::initialize(std::mt19937_64& rng, double hidden_gain,
                     double output_gain) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const auto rows = weights_[l].rows();
    const auto cols = weights_[l].cols();
    const auto big = std::max(rows, cols);
    const auto small = std::min(rows, cols);
    Eigen::MatrixXd g(big, small);
    for (Eigen::Index j = 0; j < small; ++j) {
      for (Eigen::Index i = 0; i < big; ++i) g(i, j) = normal(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q =
        qr.householderQ() * Eigen::MatrixXd::Identity(big, small);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(small);
    for (Eigen::Index j = 0; j < small; ++j) {
      if (r(j, j) < 0.0) q.col(j) *= -1.0;
    }
    const double gain = l + 1 == weights_.size() ? output_gain : hidden_gain;
    weights_[l] = gain * (rows >= cols ? q : Eigen::MatrixXd(q.transpose()));
    biases_[l].setZero();
  }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input) const {
  Eigen::MatrixXd x = input;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd y = weights_[l] * x;
    y.colwise() += biases_[l];
    if (l + 1 < weights_.size()) y = y.array().tanh();
    x = std::move(y);
  }
  return x;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input, Cache& cache) const {
  cache.activations.resize(weights_.size() + 1);
  cache.activations[0] = input;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd y = weights_[l] * cache.activations[l];
    y.colwise() += biases_[l];
    if (l + 1 < weights_.size()) y = y.array().tanh();
    cache.activations[l + 1] = std::move(y);
  }
  return cache.activations.back();
}

void Mlp::backward(const Cache& cache, const Eigen::MatrixXd& grad_output,
                   Eigen::VectorXd& grad) const {
  if (grad.size() != static_cast<Eigen::Index>(parameter_count())) {
    grad = Eigen::VectorXd::Zero(parameter_count());
  }
  // Offsets of each layer inside the flat vector.
  std::vector<Eigen::Index> offset(weights_.size());
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    offset[l] = pos;
    pos += weights_[l].size() + biases_[l].size();
  }

  Eigen::MatrixXd delta = grad_output;
  for (std::size_t l = weights_.size(); l-- > 0;) {
    if (l + 1 < weights_.size()) {
      delta.array() *= 1.0 - cache.activations[l + 1].array().square();
    }
    const auto rows = weights_[l].rows();
    const auto cols = weights_[l].cols();
    Eigen::Map<Eigen::MatrixXd> dw(grad.data() + offset[l], rows, cols);
    dw.noalias() += delta * cache.activations[l].transpose();
    grad.segment(offset[l] + rows * cols, rows) += delta.rowwise().sum();
    if (l > 0) delta = weights_[l].transpose() * delta;
  }
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    n += weights_[l].size() + biases_[l].size();
  }
  return n;
}

Eigen::VectorXd Mlp::flatten() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    flat.segment(pos, weights_[l].size()) =
        Eigen::Map<const Eigen::VectorXd>(weights_[l].data(), weights_[l].size());
    pos += weights_[l].size();
    flat.segment(pos, biases_[l].size()) = biases_[l];
    pos += biases_[l].size();
  }
  return flat;
}

void Mlp::assign(const Eigen::VectorXd& flat) {
  if (flat.size() != static_cast<Eigen::Index>(parameter_count())) {
    throw Error(ErrorKind::Training,
                "parameter vector has " + std::to_string(flat.size()) +
                    " entries, network expects " +
                    std::to_string(parameter_count()));
  }
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::Map<Eigen::VectorXd>(weights_[l].data(), weights_[l].size()) =
        flat.segment(pos, weights_[l].size());
    pos += weights_[l].size();
    biases_[l] = flat.segment(pos, biases_[l].size());
    pos += biases_[l].size();
  }
}

bool Mlp::all_finite() const {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    if (!weights_[l].allFinite() || !biases_[l].allFinite()) return false;
  }
  return true;
}

void AdamState::resize(std::size_t n) {
  first = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  second = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  steps = 0;
}

void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grad,
               AdamState& state, const AdamConfig& cfg) {
  if (state.first.size() != params.size()) {
    state.resize(static_cast<std::size_t>(params.size()));
  }
  ++state.steps;
  state.first = cfg.beta1 * state.first + (1.0 - cfg.beta1) * grad;
  state.second =
      cfg.beta2 * state.second + (1.0 - cfg.beta2) * grad.array().square().matrix();
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.steps));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.steps));
  params.array() -= cfg.learning_rate * (state.first.array() / c1) /
                    ((state.second.array() / c2).sqrt() + cfg.epsilon);
}

}  // namespace sunlit
