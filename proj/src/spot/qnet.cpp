#include "mcs/spot/qnet.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "mcs/core/errors.hpp"
#include "mcs/core/scenario_json.hpp"

namespace mcs {

namespace {

constexpr char kMagic[8] = {'M', 'C', 'S', 'Q', 'N', 'E', 'T', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

void put_f64(std::string& out, double d) {
  auto v = std::bit_cast<std::uint64_t>(d);
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

std::uint32_t get_u32(std::string_view in, std::size_t& at) {
  if (at + 4 > in.size()) throw ParseError("truncated network file", 0);
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + k])) << (8 * k);
  at += 4;
  return v;
}

double get_f64(std::string_view in, std::size_t& at) {
  if (at + 8 > in.size()) throw ParseError("truncated network file", 0);
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + k])) << (8 * k);
  at += 8;
  return std::bit_cast<double>(v);
}

Eigen::MatrixXd relu(const Eigen::MatrixXd& z) { return z.cwiseMax(0.0); }

}  // namespace

QNet::QNet(std::vector<int> layer_sizes, SeededRng& rng) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw ConfigError("a network needs an input and an output layer");
  for (int n : sizes_)
    if (n < 1) throw ConfigError("layer sizes must be positive");
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / sizes_[l]));
    Eigen::MatrixXd w(sizes_[l + 1], sizes_[l]);
    for (int r = 0; r < w.rows(); ++r)
      for (int c = 0; c < w.cols(); ++c) w(r, c) = normal(rng.engine());
    w_.push_back(std::move(w));
    b_.push_back(Eigen::VectorXd::Zero(sizes_[l + 1]));
  }
}

std::size_t QNet::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < w_.size(); ++l) n += w_[l].size() + b_[l].size();
  return n;
}

Eigen::VectorXd QNet::forward(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd out = forward_batch(x);
  return out.col(0);
}

Eigen::MatrixXd QNet::forward_batch(const Eigen::MatrixXd& x) const {
  if (x.rows() != inputs()) throw ContractViolation("input width does not match the network");
  Eigen::MatrixXd a = x;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    Eigen::MatrixXd z = (w_[l] * a).colwise() + b_[l];
    a = l + 1 < w_.size() ? relu(z) : z;
  }
  return a;
}

double QNet::loss_and_gradient(const Eigen::MatrixXd& x, std::span<const int> actions, const Eigen::VectorXd& targets,
                               const Eigen::VectorXd& weights, Gradient* grad) const {
  const auto n = x.cols();
  if (n == 0) throw ContractViolation("empty batch");
  if (static_cast<Eigen::Index>(actions.size()) != n || targets.size() != n || weights.size() != n)
    throw ContractViolation("batch arrays disagree in length");

  std::vector<Eigen::MatrixXd> act{x};
  std::vector<Eigen::MatrixXd> pre;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    Eigen::MatrixXd z = (w_[l] * act.back()).colwise() + b_[l];
    pre.push_back(z);
    act.push_back(l + 1 < w_.size() ? relu(z) : z);
  }

  const Eigen::MatrixXd& q = act.back();
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(q.rows(), n);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int a = actions[i];
    if (a < 0 || a >= outputs()) throw ContractViolation("action out of range");
    const double err = targets(i) - q(a, i);
    loss += weights(i) * err * err;
    delta(a, i) = -2.0 * weights(i) * err / static_cast<double>(n);
  }
  loss /= static_cast<double>(n);
  if (grad == nullptr) return loss;

  grad->weights.resize(w_.size());
  grad->biases.resize(b_.size());
  for (std::size_t l = w_.size(); l-- > 0;) {
    grad->weights[l] = delta * act[l].transpose();
    grad->biases[l] = delta.rowwise().sum();
    if (l == 0) break;
    Eigen::MatrixXd back = w_[l].transpose() * delta;
    delta = back.cwiseProduct((pre[l - 1].array() > 0.0).cast<double>().matrix());
  }
  return loss;
}

std::vector<double> QNet::flat() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (std::size_t l = 0; l < w_.size(); ++l) {
    for (int r = 0; r < w_[l].rows(); ++r)
      for (int c = 0; c < w_[l].cols(); ++c) out.push_back(w_[l](r, c));
    for (int r = 0; r < b_[l].size(); ++r) out.push_back(b_[l](r));
  }
  return out;
}

void QNet::set_flat(std::span<const double> values) {
  if (values.size() != parameter_count()) throw ContractViolation("parameter count mismatch");
  std::size_t k = 0;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    for (int r = 0; r < w_[l].rows(); ++r)
      for (int c = 0; c < w_[l].cols(); ++c) w_[l](r, c) = values[k++];
    for (int r = 0; r < b_[l].size(); ++r) b_[l](r) = values[k++];
  }
}

bool QNet::all_finite() const {
  for (std::size_t l = 0; l < w_.size(); ++l)
    if (!w_[l].allFinite() || !b_[l].allFinite()) return false;
  return true;
}

bool QNet::operator==(const QNet& o) const { return sizes_ == o.sizes_ && flat() == o.flat(); }

void QNet::save(const std::filesystem::path& bin, const std::filesystem::path& meta) const {
  std::string body(kMagic, sizeof kMagic);
  put_u32(body, static_cast<std::uint32_t>(sizes_.size()));
  for (int n : sizes_) put_u32(body, static_cast<std::uint32_t>(n));
  for (double v : flat()) put_f64(body, v);

  std::ofstream out(bin, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + bin.string());
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw ConfigError("failed writing " + bin.string());

  std::ostringstream checksum;
  checksum << std::hex << hash_name(body);
  nlohmann::json j = {{"schema_version", kSchemaVersion},
                      {"format", "mcs-qnet"},
                      {"layer_sizes", sizes_},
                      {"activation", "relu"},
                      {"parameter_count", parameter_count()},
                      {"byte_order", "little"},
                      {"binary", bin.filename().string()},
                      {"fnv1a64", checksum.str()}};
  write_json_file(j, meta);
}

QNet QNet::load(const std::filesystem::path& bin) {
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + bin.string());
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (body.size() < sizeof kMagic || std::memcmp(body.data(), kMagic, sizeof kMagic) != 0)
    throw ParseError("not a network file: " + bin.string(), 0);
  std::size_t at = sizeof kMagic;
  const std::uint32_t layers = get_u32(body, at);
  if (layers < 2 || layers > 64) throw ParseError("implausible layer count in " + bin.string(), 0);
  QNet net;
  for (std::uint32_t k = 0; k < layers; ++k) net.sizes_.push_back(static_cast<int>(get_u32(body, at)));
  for (std::size_t l = 0; l + 1 < net.sizes_.size(); ++l) {
    net.w_.emplace_back(Eigen::MatrixXd::Zero(net.sizes_[l + 1], net.sizes_[l]));
    net.b_.emplace_back(Eigen::VectorXd::Zero(net.sizes_[l + 1]));
  }
  std::vector<double> values(net.parameter_count());
  for (double& v : values) v = get_f64(body, at);
  if (at != body.size()) throw ParseError("trailing bytes in " + bin.string(), 0);
  net.set_flat(values);
  return net;
}

RmsProp::RmsProp(const QNet& net, double lr, double decay, double eps) : lr_(lr), decay_(decay), eps_(eps) {
  if (!(lr > 0.0)) throw ConfigError("learning rate must be positive");
  for (const auto& w : net.weights()) sq_w_.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  for (const auto& b : net.biases()) sq_b_.push_back(Eigen::VectorXd::Zero(b.size()));
}

void RmsProp::apply(QNet& net, const QNet::Gradient& g) {
  auto& w = net.weights();
  auto& b = net.biases();
  for (std::size_t l = 0; l < w.size(); ++l) {
    sq_w_[l] = decay_ * sq_w_[l] + (1.0 - decay_) * g.weights[l].cwiseAbs2();
    sq_b_[l] = decay_ * sq_b_[l] + (1.0 - decay_) * g.biases[l].cwiseAbs2();
    w[l].array() -= lr_ * g.weights[l].array() / (sq_w_[l].array().sqrt() + eps_);
    b[l].array() -= lr_ * g.biases[l].array() / (sq_b_[l].array().sqrt() + eps_);
  }
}

}  // namespace mcs
