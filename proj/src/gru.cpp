#include "physprop/gru.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "physprop/errors.hpp"
#include "physprop/rng.hpp"

namespace physprop {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Eigen::VectorXd sigmoid(const Eigen::VectorXd& x) {
  return x.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

void check_shapes(const GruParams& p) {
  const int h = p.hidden;
  if (h <= 0) throw ModelNotTrainedError("GRU parameters are empty");
  const bool ok = p.w_update.size() == h && p.w_reset.size() == h && p.w_cand.size() == h &&
                  p.u_update.rows() == h && p.u_update.cols() == h &&
                  p.u_reset.rows() == h && p.u_reset.cols() == h &&
                  p.u_cand.rows() == h && p.u_cand.cols() == h &&
                  p.b_update.size() == h && p.b_reset.size() == h && p.b_cand.size() == h &&
                  p.w_head.size() == h;
  if (!ok) throw std::invalid_argument("GRU parameter shapes inconsistent with hidden size");
}

}  // namespace

GruParams make_gru_zero(int hidden) {
  if (hidden <= 0) throw std::invalid_argument("hidden size must be positive");
  GruParams p;
  p.hidden = hidden;
  p.w_update = Eigen::VectorXd::Zero(hidden);
  p.w_reset = Eigen::VectorXd::Zero(hidden);
  p.w_cand = Eigen::VectorXd::Zero(hidden);
  p.u_update = Eigen::MatrixXd::Zero(hidden, hidden);
  p.u_reset = Eigen::MatrixXd::Zero(hidden, hidden);
  p.u_cand = Eigen::MatrixXd::Zero(hidden, hidden);
  p.b_update = Eigen::VectorXd::Zero(hidden);
  p.b_reset = Eigen::VectorXd::Zero(hidden);
  p.b_cand = Eigen::VectorXd::Zero(hidden);
  p.w_head = Eigen::VectorXd::Zero(hidden);
  p.b_head = 0.0;
  return p;
}

GruParams make_gru(int hidden, std::uint64_t seed) {
  GruParams p = make_gru_zero(hidden);
  Rng rng(mix_seed(seed, 0x42f0));
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  auto fill = [&](auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-bound, bound);
  };
  fill(p.w_update);
  fill(p.w_reset);
  fill(p.w_cand);
  fill(p.u_update);
  fill(p.u_reset);
  fill(p.u_cand);
  fill(p.w_head);
  // Update gate biased shut so the state is carried across long quiet
  // stretches at initialization; training opens it where inputs matter.
  p.b_update.setConstant(-4.0);
  return p;
}

double gru_forward(const GruParams& params, const Eigen::VectorXd& sequence, GruCache* cache) {
  check_shapes(params);
  const int t_len = static_cast<int>(sequence.size());
  if (t_len < 1) throw std::invalid_argument("empty input sequence");

  Eigen::VectorXd h = Eigen::VectorXd::Zero(params.hidden);
  if (cache) {
    cache->inputs.assign(sequence.data(), sequence.data() + t_len);
    cache->h.clear();
    cache->z.clear();
    cache->r.clear();
    cache->g.clear();
    cache->h.push_back(h);
  }
  for (int t = 0; t < t_len; ++t) {
    const double x = sequence[t];
    const Eigen::VectorXd z = sigmoid(params.w_update * x + params.u_update * h + params.b_update);
    const Eigen::VectorXd r = sigmoid(params.w_reset * x + params.u_reset * h + params.b_reset);
    const Eigen::VectorXd g =
        (params.w_cand * x + params.u_cand * (r.cwiseProduct(h)) + params.b_cand)
            .array()
            .tanh();
    h = (Eigen::VectorXd::Ones(params.hidden) - z).cwiseProduct(h) + z.cwiseProduct(g);
    if (cache) {
      cache->z.push_back(z);
      cache->r.push_back(r);
      cache->g.push_back(g);
      cache->h.push_back(h);
    }
  }
  const double head_out = params.w_head.dot(h) + params.b_head;
  const double prediction = sigmoid(head_out);
  if (cache) {
    cache->head_out = head_out;
    cache->prediction = prediction;
  }
  return prediction;
}

GruGradients gru_backward(const GruParams& params, const GruCache& cache, double loss_grad) {
  check_shapes(params);
  const int t_len = static_cast<int>(cache.inputs.size());
  if (t_len < 1 || cache.h.size() != static_cast<std::size_t>(t_len) + 1 ||
      cache.z.size() != static_cast<std::size_t>(t_len) ||
      cache.h[0].size() != params.hidden)
    throw std::invalid_argument("cache does not match the forward pass");

  GruGradients grad;
  const int h_size = params.hidden;
  grad.w_update = Eigen::VectorXd::Zero(h_size);
  grad.w_reset = Eigen::VectorXd::Zero(h_size);
  grad.w_cand = Eigen::VectorXd::Zero(h_size);
  grad.u_update = Eigen::MatrixXd::Zero(h_size, h_size);
  grad.u_reset = Eigen::MatrixXd::Zero(h_size, h_size);
  grad.u_cand = Eigen::MatrixXd::Zero(h_size, h_size);
  grad.b_update = Eigen::VectorXd::Zero(h_size);
  grad.b_reset = Eigen::VectorXd::Zero(h_size);
  grad.b_cand = Eigen::VectorXd::Zero(h_size);
  grad.w_head = Eigen::VectorXd::Zero(h_size);

  // Head: prediction = sigmoid(w . h_T + b).
  const double d_out = loss_grad * cache.prediction * (1.0 - cache.prediction);
  grad.w_head = d_out * cache.h[t_len];
  grad.b_head = d_out;

  Eigen::VectorXd dh = d_out * params.w_head;
  for (int t = t_len - 1; t >= 0; --t) {
    const double x = cache.inputs[t];
    const Eigen::VectorXd& h_prev = cache.h[t];
    const Eigen::VectorXd& z = cache.z[t];
    const Eigen::VectorXd& r = cache.r[t];
    const Eigen::VectorXd& g = cache.g[t];

    const Eigen::VectorXd dz = dh.cwiseProduct(g - h_prev);
    const Eigen::VectorXd dg = dh.cwiseProduct(z);
    Eigen::VectorXd dh_prev = dh.cwiseProduct(Eigen::VectorXd::Ones(h_size) - z);

    const Eigen::VectorXd da_g = dg.cwiseProduct(
        (Eigen::VectorXd::Ones(h_size) - g.cwiseProduct(g)));
    grad.w_cand += da_g * x;
    grad.b_cand += da_g;
    grad.u_cand += da_g * (r.cwiseProduct(h_prev)).transpose();
    const Eigen::VectorXd d_rh = params.u_cand.transpose() * da_g;
    const Eigen::VectorXd dr = d_rh.cwiseProduct(h_prev);
    dh_prev += d_rh.cwiseProduct(r);

    const Eigen::VectorXd da_r =
        dr.cwiseProduct(r.cwiseProduct(Eigen::VectorXd::Ones(h_size) - r));
    grad.w_reset += da_r * x;
    grad.b_reset += da_r;
    grad.u_reset += da_r * h_prev.transpose();
    dh_prev += params.u_reset.transpose() * da_r;

    const Eigen::VectorXd da_z =
        dz.cwiseProduct(z.cwiseProduct(Eigen::VectorXd::Ones(h_size) - z));
    grad.w_update += da_z * x;
    grad.b_update += da_z;
    grad.u_update += da_z * h_prev.transpose();
    dh_prev += params.u_update.transpose() * da_z;

    dh = std::move(dh_prev);
  }
  return grad;
}

double loss_value(LossKind kind, double prediction, double target) {
  switch (kind) {
    case LossKind::kL1: return std::abs(prediction - target);
    case LossKind::kLogL1: return std::abs(std::log(prediction) - std::log(target));
    case LossKind::kBce:
      return -(target * std::log(prediction) + (1.0 - target) * std::log(1.0 - prediction));
  }
  return 0;
}

double loss_gradient(LossKind kind, double prediction, double target) {
  switch (kind) {
    case LossKind::kL1: {
      const double d = prediction - target;
      return d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
    }
    case LossKind::kLogL1: {
      const double d = std::log(prediction) - std::log(target);
      return (d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0)) / prediction;
    }
    case LossKind::kBce:
      return -target / prediction + (1.0 - target) / (1.0 - prediction);
  }
  return 0;
}

namespace {

void axpy(GruParams& p, const GruGradients& g, double step) {
  p.w_update -= step * g.w_update;
  p.w_reset -= step * g.w_reset;
  p.w_cand -= step * g.w_cand;
  p.u_update -= step * g.u_update;
  p.u_reset -= step * g.u_reset;
  p.u_cand -= step * g.u_cand;
  p.b_update -= step * g.b_update;
  p.b_reset -= step * g.b_reset;
  p.b_cand -= step * g.b_cand;
  p.w_head -= step * g.w_head;
  p.b_head -= step * g.b_head;
}

}  // namespace

TrainResult train_gru(const TrainConfig& config, const std::vector<TrainSample>& dataset) {
  if (dataset.empty()) throw std::invalid_argument("empty training dataset");
  if (!(config.learning_rate > 0)) throw std::invalid_argument("learning rate must be > 0");
  if (config.batch_size < 1) throw std::invalid_argument("batch size must be >= 1");

  TrainResult result;
  result.params = make_gru(config.hidden, config.seed);

  const int n = static_cast<int>(dataset.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(mix_seed(config.seed, 0x5d9f));

  double lr = config.learning_rate;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Seed-fixed shuffle per epoch.
    for (int i = n - 1; i > 0; --i)
      std::swap(order[i], order[static_cast<int>(rng.below(i + 1))]);

    double epoch_loss = 0.0;
    for (int start = 0; start < n; start += config.batch_size) {
      const int end = std::min(n, start + config.batch_size);
      GruGradients batch_grad;
      bool first = true;
      for (int k = start; k < end; ++k) {
        const TrainSample& sample = dataset[order[k]];
        GruCache cache;
        const double pred = gru_forward(result.params, sample.sequence, &cache);
        epoch_loss += loss_value(config.loss, pred, sample.target);
        const GruGradients g =
            gru_backward(result.params, cache, loss_gradient(config.loss, pred, sample.target));
        if (first) {
          batch_grad = g;
          first = false;
        } else {
          batch_grad.w_update += g.w_update;
          batch_grad.w_reset += g.w_reset;
          batch_grad.w_cand += g.w_cand;
          batch_grad.u_update += g.u_update;
          batch_grad.u_reset += g.u_reset;
          batch_grad.u_cand += g.u_cand;
          batch_grad.b_update += g.b_update;
          batch_grad.b_reset += g.b_reset;
          batch_grad.b_cand += g.b_cand;
          batch_grad.w_head += g.w_head;
          batch_grad.b_head += g.b_head;
        }
      }
      axpy(result.params, batch_grad, lr / (end - start));
    }
    result.epoch_losses.push_back(epoch_loss / n);
    lr *= config.lr_decay;
  }
  return result;
}

namespace {

nlohmann::json to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.size();
  const auto cols = rows ? j[0].size() : 0;
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  return m;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

constexpr int kCheckpointVersion = 1;

}  // namespace

void save_gru(const GruParams& params, const std::filesystem::path& path) {
  check_shapes(params);
  nlohmann::json j;
  j["format"] = "physprop-gru";
  j["version"] = kCheckpointVersion;
  j["hidden"] = params.hidden;
  j["w_update"] = to_json(params.w_update);
  j["w_reset"] = to_json(params.w_reset);
  j["w_cand"] = to_json(params.w_cand);
  j["u_update"] = to_json(params.u_update);
  j["u_reset"] = to_json(params.u_reset);
  j["u_cand"] = to_json(params.u_cand);
  j["b_update"] = to_json(params.b_update);
  j["b_reset"] = to_json(params.b_reset);
  j["b_cand"] = to_json(params.b_cand);
  j["w_head"] = to_json(params.w_head);
  j["b_head"] = params.b_head;
  std::ofstream out(path);
  if (!out) throw DataError("cannot open checkpoint for writing: " + path.string());
  out << j.dump(1) << "\n";
}

GruParams load_gru(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
  if (j.value("format", "") != "physprop-gru" || j.value("version", -1) != kCheckpointVersion)
    throw DataError("unsupported checkpoint format/version");
  GruParams p;
  p.hidden = j.at("hidden").get<int>();
  p.w_update = vector_from_json(j.at("w_update"));
  p.w_reset = vector_from_json(j.at("w_reset"));
  p.w_cand = vector_from_json(j.at("w_cand"));
  p.u_update = matrix_from_json(j.at("u_update"));
  p.u_reset = matrix_from_json(j.at("u_reset"));
  p.u_cand = matrix_from_json(j.at("u_cand"));
  p.b_update = vector_from_json(j.at("b_update"));
  p.b_reset = vector_from_json(j.at("b_reset"));
  p.b_cand = vector_from_json(j.at("b_cand"));
  p.w_head = vector_from_json(j.at("w_head"));
  p.b_head = j.at("b_head").get<double>();
  check_shapes(p);
  return p;
}

}  // namespace physprop
