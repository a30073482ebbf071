#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "mca/errors.hpp"
#include "mca/nn.hpp"
#include "mca/rng.hpp"

using namespace mca::nn;
using mca::Rng;

namespace {

void randomize(Mlp& net, Rng& rng, double scale = 0.5) {
  for (auto& w : net.weights)
    for (double& v : w) v = scale * rng.gaussian();
  for (auto& b : net.biases)
    for (double& v : b) v = scale * rng.gaussian();
  for (double& v : net.log_std) v = -1.0 + 0.2 * rng.gaussian();
}

// independent dense oracle with a column-major accumulation order
std::vector<double> forward_oracle(const Mlp& net, const std::vector<double>& input) {
  std::vector<double> cur = input;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const int rows = net.sizes[l + 1], cols = net.sizes[l];
    std::vector<double> next(net.biases[l]);
    for (int c = 0; c < cols; ++c)
      for (int r = 0; r < rows; ++r) next[r] += net.weights[l][r * cols + c] * cur[c];
    if (l + 1 < net.layer_count())
      for (double& v : next) v = std::max(0.0, v);
    cur = next;
  }
  return cur;
}

// scalar probe loss: fixed random projection of the outputs
double probe_loss(const Mlp& net, const std::vector<double>& input,
                  const std::vector<double>& proj) {
  const auto out = forward(net, input);
  double s = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) s += proj[i] * out[i];
  return s;
}

}  // namespace

TEST_CASE("all-zero weights pass the bias through") {
  Mlp net = Mlp::zeros({3, 4, 2});
  net.biases[1] = {0.5, -1.5};
  const auto out = forward(net, std::vector<double>{1.0, 2.0, 3.0});
  CHECK(out[0] == 0.5);
  CHECK(out[1] == -1.5);
}

TEST_CASE("relu zeroes negative pre-activations") {
  Mlp net = Mlp::zeros({1, 1, 1});
  net.weights[0] = {1.0};
  net.weights[1] = {1.0};
  net.biases[0] = {-2.0};
  // hidden pre-activation = 1 - 2 = -1 -> relu -> 0
  const auto out = forward(net, std::vector<double>{1.0});
  CHECK(out[0] == 0.0);
}

TEST_CASE("forward matches an independent loop-order oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    Mlp net = Mlp::zeros({5, 16, 16, 4});
    randomize(net, rng);
    std::vector<double> input(5);
    for (double& v : input) v = rng.gaussian();
    const auto got = forward(net, input);
    const auto want = forward_oracle(net, input);
    for (int i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
  }
}

TEST_CASE("shape mismatch is rejected") {
  Mlp net = Mlp::zeros({3, 4, 2});
  CHECK_THROWS_AS(forward(net, std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("backward matches central finite differences") {
  Rng rng(47);
  Mlp net = Mlp::zeros({4, 12, 12, 3});
  randomize(net, rng);
  std::vector<double> input(4), proj(3);
  for (double& v : input) v = rng.gaussian();
  for (double& v : proj) v = rng.gaussian();

  ForwardCache cache;
  std::vector<double> out(3);
  forward(net, input, out, &cache);
  Grads grads = Grads::zeros_like(net);
  backward(net, cache, proj, grads);

  const double h = 1e-5;
  auto check_param = [&](double& p, double analytic) {
    const double saved = p;
    p = saved + h;
    const double up = probe_loss(net, input, proj);
    p = saved - h;
    const double down = probe_loss(net, input, proj);
    p = saved;
    const double fd = (up - down) / (2.0 * h);
    const double denom = std::max({1.0, std::fabs(fd), std::fabs(analytic)});
    CHECK(std::fabs(fd - analytic) / denom <= 1e-5);
  };
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    for (std::size_t i = 0; i < net.weights[l].size(); i += 5)
      check_param(net.weights[l][i], grads.weights[l][i]);
    for (std::size_t i = 0; i < net.biases[l].size(); ++i)
      check_param(net.biases[l][i], grads.biases[l][i]);
  }
}

TEST_CASE("zero output gradient produces zero parameter gradients") {
  Rng rng(3);
  Mlp net = Mlp::zeros({3, 8, 2});
  randomize(net, rng);
  ForwardCache cache;
  std::vector<double> out(2);
  forward(net, std::vector<double>{0.1, -0.2, 0.3}, out, &cache);
  Grads grads = Grads::zeros_like(net);
  backward(net, cache, std::vector<double>{0.0, 0.0}, grads);
  for (const auto& w : grads.weights)
    for (double v : w) CHECK(v == 0.0);
}

TEST_CASE("backward is linear in the output gradient") {
  Rng rng(5);
  Mlp net = Mlp::zeros({3, 8, 2});
  randomize(net, rng);
  ForwardCache cache;
  std::vector<double> out(2);
  const std::vector<double> input{0.4, 0.2, -0.7};
  forward(net, input, out, &cache);

  Grads g1 = Grads::zeros_like(net), g3 = Grads::zeros_like(net);
  backward(net, cache, std::vector<double>{0.3, -0.1}, g1);
  backward(net, cache, std::vector<double>{0.9, -0.3}, g3);
  for (std::size_t l = 0; l < net.layer_count(); ++l)
    for (std::size_t i = 0; i < g1.weights[l].size(); ++i)
      CHECK(g3.weights[l][i] == doctest::Approx(3.0 * g1.weights[l][i]).epsilon(1e-12));
}

TEST_CASE("gaussian policy head") {
  SUBCASE("vanishing stddev collapses the sample onto the mean") {
    Rng rng(9);
    const std::vector<double> mean{0.3, -0.7}, log_std{-20.0, -20.0};
    std::vector<double> action(2);
    gaussian_sample(mean, log_std, rng, action);
    CHECK(std::fabs(action[0] - 0.3) < 1e-7);
    CHECK(std::fabs(action[1] + 0.7) < 1e-7);
  }

  SUBCASE("log density of the mean with unit sigma in 2d is -log(2 pi)") {
    const std::vector<double> mean{1.0, -2.0}, log_std{0.0, 0.0};
    CHECK(gaussian_logprob(mean, log_std, mean) ==
          doctest::Approx(-1.8378770664093453).epsilon(1e-12));
  }

  SUBCASE("monte carlo sample statistics match the parameters") {
    Rng rng(1234);
    const std::vector<double> mean{0.5}, log_std{std::log(0.8)};
    const int n = 100000;
    double sum = 0.0, sq = 0.0;
    std::vector<double> a(1);
    for (int i = 0; i < n; ++i) {
      gaussian_sample(mean, log_std, rng, a);
      sum += a[0];
      sq += a[0] * a[0];
    }
    const double m = sum / n;
    const double sd = std::sqrt(sq / n - m * m);
    CHECK(std::fabs(m - 0.5) < 0.02 * 0.8 + 0.01);
    CHECK(std::fabs(sd - 0.8) / 0.8 < 0.02);
  }

  SUBCASE("entropy closed form") {
    const std::vector<double> log_std{0.0, -1.0};
    const double expect = (0.5 * (1.0 + std::log(2.0 * M_PI))) * 2.0 - 1.0;
    CHECK(gaussian_entropy(log_std) == doctest::Approx(expect).epsilon(1e-12));
  }

  SUBCASE("logprob gradient matches finite differences") {
    const std::vector<double> mean{0.2, -0.4}, log_std{-0.5, 0.3}, action{0.6, -0.9};
    std::vector<double> dmean(2), dls(2);
    gaussian_logprob_backward(mean, log_std, action, 1.0, dmean, dls);
    const double h = 1e-6;
    for (int i = 0; i < 2; ++i) {
      auto m_up = mean, m_dn = mean;
      m_up[i] += h;
      m_dn[i] -= h;
      const double fd_mean =
          (gaussian_logprob(m_up, log_std, action) - gaussian_logprob(m_dn, log_std, action)) /
          (2 * h);
      CHECK(dmean[i] == doctest::Approx(fd_mean).epsilon(1e-6));
      auto s_up = log_std, s_dn = log_std;
      s_up[i] += h;
      s_dn[i] -= h;
      const double fd_ls =
          (gaussian_logprob(mean, s_up, action) - gaussian_logprob(mean, s_dn, action)) / (2 * h);
      CHECK(dls[i] == doctest::Approx(fd_ls).epsilon(1e-6));
    }
  }
}

TEST_CASE("adam") {
  SUBCASE("first step moves each parameter by about the learning rate") {
    Mlp net = Mlp::zeros({1, 1});
    net.weights[0] = {1.0};
    net.biases[0] = {2.0};
    AdamConfig cfg;
    cfg.lr = 0.01;
    AdamState state = AdamState::init(net, cfg);
    Grads g = Grads::zeros_like(net);
    g.weights[0][0] = 0.37;
    g.biases[0][0] = -4.1;
    adam_step(net, g, state);
    CHECK(net.weights[0][0] == doctest::Approx(1.0 - 0.01).epsilon(1e-6));
    CHECK(net.biases[0][0] == doctest::Approx(2.0 + 0.01).epsilon(1e-6));
  }

  SUBCASE("zero gradients leave parameters unchanged") {
    Rng rng(77);
    Mlp net = Mlp::zeros({2, 4, 1});
    randomize(net, rng);
    const Mlp before = net;
    AdamState state = AdamState::init(net);
    const Grads g = Grads::zeros_like(net);
    for (int i = 0; i < 10; ++i) adam_step(net, g, state);
    CHECK(net.weights == before.weights);
    CHECK(net.biases == before.biases);
  }

  SUBCASE("quadratic bowl reaches the minimum") {
    Mlp net = Mlp::zeros({1, 1});
    net.weights[0] = {2.0};  // minimize w^2
    AdamConfig cfg;
    cfg.lr = 0.05;
    AdamState state = AdamState::init(net, cfg);
    Grads g = Grads::zeros_like(net);
    for (int i = 0; i < 2000; ++i) {
      g.weights[0][0] = 2.0 * net.weights[0][0];
      adam_step(net, g, state);
      if (std::fabs(net.weights[0][0]) < 1e-3) break;
    }
    CHECK(std::fabs(net.weights[0][0]) < 1e-3);
  }
}

TEST_CASE("orthogonal initialization yields orthonormal columns scaled by the gain") {
  Rng rng(15);
  Mlp net = Mlp::zeros({8, 64, 64, 2}, true);
  orthogonal_init(net, rng, std::sqrt(2.0), 0.01);

  // first layer 64x8: columns orthonormal before the gain
  const auto& w = net.weights[0];
  for (int c1 = 0; c1 < 8; ++c1)
    for (int c2 = 0; c2 <= c1; ++c2) {
      double dot = 0.0;
      for (int r = 0; r < 64; ++r) dot += w[r * 8 + c1] * w[r * 8 + c2];
      CHECK(dot == doctest::Approx(c1 == c2 ? 2.0 : 0.0).epsilon(1e-9));
    }
  // small output gain
  double out_norm = 0.0;
  for (double v : net.weights[2]) out_norm += v * v;
  CHECK(std::sqrt(out_norm) < 0.05);
}

TEST_CASE("save and load round trip bit-exactly") {
  Rng rng(21);
  Mlp net = Mlp::zeros({8, 64, 64, 2}, true);
  randomize(net, rng);
  const auto path = (std::filesystem::temp_directory_path() / "mca_weights_rt.bin").string();
  save_weights(net, path);
  const Mlp back = load_weights(path);
  CHECK(back.sizes == net.sizes);
  CHECK(back.weights == net.weights);
  CHECK(back.biases == net.biases);
  CHECK(back.log_std == net.log_std);

  std::vector<double> input(8);
  for (double& v : input) v = rng.gaussian();
  CHECK(forward(net, input) == forward(back, input));
  std::filesystem::remove(path);
}

TEST_CASE("weight loader rejects corrupt files") {
  namespace fs = std::filesystem;
  const auto path = (fs::temp_directory_path() / "mca_weights_bad.bin").string();
  {
    std::ofstream out(path, std::ios::binary);
    out << "NOTAWNET00000000";
  }
  CHECK_THROWS_AS(load_weights(path), mca::ConfigError);
  CHECK_THROWS_AS(load_weights("/nonexistent/none.bin"), mca::ConfigError);
  fs::remove(path);
}
