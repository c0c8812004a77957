#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mcs/core/rng.hpp"

namespace mcs {

// Fully connected network with rectifier hidden layers and a linear output,
// one output per action.
class QNet {
 public:
  struct Gradient {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
  };

  QNet() = default;
  // layer_sizes = {inputs, hidden..., outputs}; He-normal weights, zero biases.
  QNet(std::vector<int> layer_sizes, SeededRng& rng);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int inputs() const { return sizes_.front(); }
  int outputs() const { return sizes_.back(); }
  std::size_t parameter_count() const;

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  // One sample per column; returns outputs x samples.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x) const;

  // Loss = mean_i w_i (y_i - Q(x_i, a_i))^2 and its gradient.
  double loss_and_gradient(const Eigen::MatrixXd& x, std::span<const int> actions, const Eigen::VectorXd& targets,
                           const Eigen::VectorXd& weights, Gradient* grad) const;

  // Parameters flattened layer by layer: weights row-major, then biases.
  std::vector<double> flat() const;
  void set_flat(std::span<const double> values);

  std::vector<Eigen::MatrixXd>& weights() { return w_; }
  std::vector<Eigen::VectorXd>& biases() { return b_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return w_; }
  const std::vector<Eigen::VectorXd>& biases() const { return b_; }

  bool all_finite() const;
  bool operator==(const QNet& o) const;

  // Binary body: "MCSQNET1", uint32 layer count, uint32 sizes, then the flat
  // parameters as little-endian float64. The JSON sidecar repeats the shape
  // and carries a checksum of the body.
  void save(const std::filesystem::path& bin, const std::filesystem::path& meta) const;
  static QNet load(const std::filesystem::path& bin);

 private:
  std::vector<int> sizes_;
  std::vector<Eigen::MatrixXd> w_;  // layer l: sizes_[l+1] x sizes_[l]
  std::vector<Eigen::VectorXd> b_;
};

class RmsProp {
 public:
  RmsProp() = default;
  RmsProp(const QNet& net, double lr, double decay = 0.99, double eps = 1e-8);
  void apply(QNet& net, const QNet::Gradient& g);

 private:
  double lr_ = 1e-3;
  double decay_ = 0.99;
  double eps_ = 1e-8;
  std::vector<Eigen::MatrixXd> sq_w_;
  std::vector<Eigen::VectorXd> sq_b_;
};

}  // namespace mcs
