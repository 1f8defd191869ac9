#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "physprop/errors.hpp"
#include "physprop/gru.hpp"
#include "physprop/rng.hpp"

using namespace physprop;

namespace {

// Flattened view over every parameter for finite-difference probing.
std::vector<double*> param_entries(GruParams& p) {
  std::vector<double*> out;
  auto add = [&](auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) out.push_back(m.data() + i);
  };
  add(p.w_update);
  add(p.w_reset);
  add(p.w_cand);
  add(p.u_update);
  add(p.u_reset);
  add(p.u_cand);
  add(p.b_update);
  add(p.b_reset);
  add(p.b_cand);
  add(p.w_head);
  out.push_back(&p.b_head);
  return out;
}

std::vector<double> grad_entries(const GruGradients& g) {
  std::vector<double> out;
  auto add = [&](const auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) out.push_back(m.data()[i]);
  };
  add(g.w_update);
  add(g.w_reset);
  add(g.w_cand);
  add(g.u_update);
  add(g.u_reset);
  add(g.u_cand);
  add(g.b_update);
  add(g.b_reset);
  add(g.b_cand);
  add(g.w_head);
  out.push_back(g.b_head);
  return out;
}

}  // namespace

TEST_SUITE("gru") {

TEST_CASE("all-zero weights predict one half") {
  const GruParams p = make_gru_zero(16);
  Eigen::VectorXd x(5);
  x << 0.2, -0.4, 1.0, 0.0, 0.7;
  CHECK(gru_forward(p, x) == 0.5);
}

TEST_CASE("H=1 forward matches a hand recurrence over three steps") {
  GruParams p = make_gru_zero(1);
  p.w_update[0] = 0.3;
  p.u_update(0, 0) = -0.2;
  p.b_update[0] = 0.1;
  p.w_reset[0] = 0.5;
  p.u_reset(0, 0) = 0.4;
  p.b_reset[0] = -0.3;
  p.w_cand[0] = 0.7;
  p.u_cand(0, 0) = -0.6;
  p.b_cand[0] = 0.2;
  p.w_head[0] = 1.1;
  p.b_head = -0.05;

  const double xs[3] = {1.0, 0.5, -0.25};
  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  double h = 0.0;
  for (const double x : xs) {
    const double z = sig(0.3 * x - 0.2 * h + 0.1);
    const double r = sig(0.5 * x + 0.4 * h - 0.3);
    const double g = std::tanh(0.7 * x - 0.6 * (r * h) + 0.2);
    h = (1.0 - z) * h + z * g;
  }
  const double expected = sig(1.1 * h - 0.05);

  Eigen::VectorXd x(3);
  x << xs[0], xs[1], xs[2];
  CHECK(gru_forward(p, x) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("prediction stays in (0,1) and finite for lengths 1..300") {
  const GruParams p = make_gru(kDefaultHidden, 77);
  Rng rng(99);
  for (int len : {1, 2, 3, 10, 50, 150, 300}) {
    Eigen::VectorXd x(len);
    for (int i = 0; i < len; ++i) x[i] = rng.uniform(-2.0, 2.0);
    const double y = gru_forward(p, x);
    CHECK(std::isfinite(y));
    CHECK(y > 0.0);
    CHECK(y < 1.0);
  }
}

TEST_CASE("empty sequences and shape mismatches are rejected") {
  const GruParams p = make_gru(4, 1);
  CHECK_THROWS_AS(gru_forward(p, Eigen::VectorXd()), std::invalid_argument);
  CHECK_THROWS_AS(gru_forward(GruParams{}, Eigen::VectorXd::Ones(3)), ModelNotTrainedError);
  GruCache cache;
  Eigen::VectorXd x(3);
  x << 0.1, 0.2, 0.3;
  gru_forward(p, x, &cache);
  const GruParams q = make_gru(5, 1);
  CHECK_THROWS_AS(gru_backward(q, cache, 1.0), std::invalid_argument);
}

TEST_CASE("analytic gradients match central finite differences") {
  // Squared loss keeps the probe smooth; epsilon = 1e-5, tolerance 1e-4.
  const double eps = 1e-5;
  int draws_checked = 0;
  for (std::uint64_t draw = 0; draw < 20; ++draw) {
    Rng rng(mix_seed(1234, draw));
    GruParams p = make_gru(6, mix_seed(7, draw));
    const int len = 3 + static_cast<int>(rng.below(30));
    Eigen::VectorXd x(len);
    for (int i = 0; i < len; ++i) x[i] = rng.gauss();
    const double target = rng.uniform(0.1, 0.9);

    GruCache cache;
    const double pred = gru_forward(p, x, &cache);
    const GruGradients analytic = gru_backward(p, cache, pred - target);
    const std::vector<double> a = grad_entries(analytic);
    std::vector<double*> entries = param_entries(p);
    REQUIRE(a.size() == entries.size());

    for (std::size_t k = 0; k < entries.size(); ++k) {
      const double saved = *entries[k];
      *entries[k] = saved + eps;
      const double up = gru_forward(p, x);
      *entries[k] = saved - eps;
      const double dn = gru_forward(p, x);
      *entries[k] = saved;
      const double loss_up = 0.5 * (up - target) * (up - target);
      const double loss_dn = 0.5 * (dn - target) * (dn - target);
      const double fd = (loss_up - loss_dn) / (2 * eps);
      const double rel = std::abs(a[k] - fd) / std::max({std::abs(a[k]), std::abs(fd), 1e-6});
      CHECK(rel < 1e-4);
    }
    ++draws_checked;
  }
  CHECK(draws_checked >= 20);
}

TEST_CASE("zero loss gradient gives zero parameter gradients") {
  GruParams p = make_gru(5, 3);
  Eigen::VectorXd x(7);
  x.setLinSpaced(7, -0.5, 0.5);
  GruCache cache;
  gru_forward(p, x, &cache);
  const GruGradients g = gru_backward(p, cache, 0.0);
  for (const double v : grad_entries(g)) CHECK(v == 0.0);
}

TEST_CASE("training is deterministic per seed") {
  std::vector<TrainSample> data;
  Rng rng(8);
  for (int i = 0; i < 12; ++i) {
    Eigen::VectorXd x(20);
    for (int k = 0; k < 20; ++k) x[k] = rng.uniform(0.0, 1.0);
    data.push_back({x, rng.uniform(0.2, 0.8)});
  }
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 4;
  cfg.seed = 42;
  cfg.hidden = 8;
  const TrainResult a = train_gru(cfg, data);
  const TrainResult b = train_gru(cfg, data);
  CHECK(a.params.u_cand == b.params.u_cand);
  CHECK(a.params.w_head == b.params.w_head);
  CHECK(a.epoch_losses == b.epoch_losses);
}

TEST_CASE("training loss decreases on clean data") {
  // Targets are a smooth function of the sequence mean.
  std::vector<TrainSample> data;
  Rng rng(31);
  for (int i = 0; i < 32; ++i) {
    Eigen::VectorXd x(25);
    for (int k = 0; k < 25; ++k) x[k] = rng.uniform(0.0, 1.0);
    data.push_back({x, 0.2 + 0.6 * x.mean()});
  }
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.batch_size = 8;
  cfg.learning_rate = 0.02;
  cfg.seed = 5;
  cfg.hidden = 8;
  const TrainResult r = train_gru(cfg, data);
  CHECK(r.epoch_losses.back() < r.epoch_losses.front());
  for (std::size_t e = 1; e < r.epoch_losses.size(); ++e)
    CHECK(r.epoch_losses[e] < r.epoch_losses[e - 1] * 1.05 + 1e-9);
}

TEST_CASE("a single example is overfit below 1e-3 within 2000 steps") {
  Eigen::VectorXd x(30);
  x.setLinSpaced(30, 1.0, 0.0);
  const std::vector<TrainSample> data{{x, 0.73}};
  TrainConfig cfg;
  cfg.epochs = 2000;  // batch of one: one step per epoch
  cfg.batch_size = 1;
  cfg.learning_rate = 0.05;
  cfg.seed = 11;
  const TrainResult r = train_gru(cfg, data);
  const double final_loss = std::abs(gru_forward(r.params, x) - 0.73);
  CHECK(final_loss < 1e-3);
}

TEST_CASE("checkpoints reload to identical predictions") {
  const GruParams p = make_gru(kDefaultHidden, 2718);
  const auto path = std::filesystem::temp_directory_path() / "physprop_gru_test.json";
  save_gru(p, path);
  const GruParams q = load_gru(path);
  std::filesystem::remove(path);
  CHECK(p.hidden == q.hidden);
  CHECK(p.u_update == q.u_update);
  CHECK(p.w_head == q.w_head);
  Eigen::VectorXd x(40);
  x.setLinSpaced(40, 0.0, 1.0);
  CHECK(gru_forward(p, x) == gru_forward(q, x));
}

TEST_CASE("loss kinds: values and gradients") {
  CHECK(loss_value(LossKind::kL1, 0.7, 0.5) == doctest::Approx(0.2));
  CHECK(loss_gradient(LossKind::kL1, 0.7, 0.5) == 1.0);
  CHECK(loss_gradient(LossKind::kL1, 0.3, 0.5) == -1.0);
  CHECK(loss_value(LossKind::kLogL1, 1.0, std::exp(1.0)) == doctest::Approx(1.0));
  CHECK(loss_value(LossKind::kBce, 0.5, 1.0) == doctest::Approx(std::log(2.0)));
  // BCE gradient at the target is zero-crossing: below target -> negative.
  CHECK(loss_gradient(LossKind::kBce, 0.4, 1.0) < 0.0);
}

}  // TEST_SUITE
