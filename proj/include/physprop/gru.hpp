#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace physprop {

/// Gated recurrent unit with scalar input and a sigmoid-squashed linear
/// head, 64-bit floats throughout.
///
/// Recurrence (h_0 = 0):
///   z_t = sigmoid(Wz x_t + Uz h_{t-1} + bz)        update gate
///   r_t = sigmoid(Wr x_t + Ur h_{t-1} + br)        reset gate
///   g_t = tanh(Wh x_t + Uh (r_t . h_{t-1}) + bh)   candidate state
///   h_t = (1 - z_t) . h_{t-1} + z_t . g_t
///   y   = sigmoid(w . h_T + b)
struct GruParams {
  int hidden = 0;  // 0 = uninitialized (no trained model)
  Eigen::VectorXd w_update, w_reset, w_cand;  // input weights, H
  Eigen::MatrixXd u_update, u_reset, u_cand;  // recurrent weights, H x H
  Eigen::VectorXd b_update, b_reset, b_cand;  // biases, H
  Eigen::VectorXd w_head;                     // output head, H
  double b_head = 0.0;
};

inline constexpr int kDefaultHidden = 32;

/// Zero-initialized parameters of the given width.
GruParams make_gru_zero(int hidden);

/// Uniform(-1/sqrt(H), 1/sqrt(H)) weights, zero biases and head.
GruParams make_gru(int hidden, std::uint64_t seed);

/// Per-step activations captured by the forward pass for BPTT.
struct GruCache {
  std::vector<double> inputs;
  std::vector<Eigen::VectorXd> h;  // h[0] = 0, h[t] after step t
  std::vector<Eigen::VectorXd> z, r, g;
  double head_out = 0.0;    // w . h_T + b
  double prediction = 0.0;  // sigmoid(head_out)
};

/// Run the recurrence; returns the prediction in (0, 1). Throws
/// std::invalid_argument on an empty sequence, ModelNotTrainedError when
/// params.hidden == 0.
double gru_forward(const GruParams& params, const Eigen::VectorXd& sequence,
                   GruCache* cache = nullptr);

struct GruGradients {
  Eigen::VectorXd w_update, w_reset, w_cand;
  Eigen::MatrixXd u_update, u_reset, u_cand;
  Eigen::VectorXd b_update, b_reset, b_cand;
  Eigen::VectorXd w_head;
  double b_head = 0.0;
};

/// Exact reverse-mode gradients of a scalar loss with respect to every
/// parameter, given dL/dprediction. Throws std::invalid_argument when the
/// cache does not match the parameter shapes.
GruGradients gru_backward(const GruParams& params, const GruCache& cache, double loss_grad);

enum class LossKind { kL1, kLogL1, kBce };

struct TrainConfig {
  double learning_rate = 1e-3;
  double lr_decay = 1.0;  // multiplicative per-epoch schedule; 1 = constant
  int batch_size = 128;
  int epochs = 50;
  std::uint64_t seed = 0;
  LossKind loss = LossKind::kL1;
  int hidden = kDefaultHidden;
};

struct TrainSample {
  Eigen::VectorXd sequence;
  double target = 0.0;
};

struct TrainResult {
  GruParams params;
  std::vector<double> epoch_losses;  // mean loss per epoch, pre-update
};

/// Mini-batch SGD with a seed-fixed shuffle per epoch. Deterministic per
/// config. Throws std::invalid_argument on an empty dataset.
TrainResult train_gru(const TrainConfig& config, const std::vector<TrainSample>& dataset);

double loss_value(LossKind kind, double prediction, double target);
double loss_gradient(LossKind kind, double prediction, double target);

/// Versioned JSON checkpoint; numbers round-trip exactly.
void save_gru(const GruParams& params, const std::filesystem::path& path);
GruParams load_gru(const std::filesystem::path& path);

}  // namespace physprop
