#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mca/rng.hpp"

namespace mca::nn {

// Dense MLP with ReLU hidden layers and a linear output. Weights are
// row-major (out x in). An optional state-independent log_std vector turns
// the net into the mean of a diagonal Gaussian policy.
struct Mlp {
  std::vector<int> sizes;  // e.g. {8, 64, 64, 2}
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
  std::vector<double> log_std;  // empty for plain nets

  static Mlp zeros(std::vector<int> sizes, bool with_log_std = false);

  int in_dim() const { return sizes.front(); }
  int out_dim() const { return sizes.back(); }
  std::size_t layer_count() const { return weights.size(); }
  std::size_t param_count() const;
};

// activations captured during forward, consumed by backward
struct ForwardCache {
  std::vector<std::vector<double>> act;  // act[0] = input, act[L] = output
  std::vector<std::vector<double>> pre;  // pre-activations per layer
};

void forward(const Mlp& net, std::span<const double> input, std::span<double> output,
             ForwardCache* cache = nullptr);
std::vector<double> forward(const Mlp& net, std::span<const double> input);

// gradient container mirroring Mlp shapes; supports in-place accumulation
struct Grads {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
  std::vector<double> log_std;

  static Grads zeros_like(const Mlp& net);
  void set_zero();
  void add(const Grads& other);
  void scale(double s);
  bool all_finite() const;
};

// Exact reverse-mode gradients of the forward map, accumulated into `into`
// (so per-sample gradients of a minibatch sum without extra buffers).
// output_grad is dLoss/dOutput; the input gradient is returned if requested.
void backward(const Mlp& net, const ForwardCache& cache, std::span<const double> output_grad,
              Grads& into, std::span<double> input_grad = {});

// --- diagonal Gaussian policy head ---

double gaussian_logprob(std::span<const double> mean, std::span<const double> log_std,
                        std::span<const double> action);
void gaussian_sample(std::span<const double> mean, std::span<const double> log_std, Rng& rng,
                     std::span<double> action_out);
double gaussian_entropy(std::span<const double> log_std);
// d logprob / d mean and d logprob / d log_std, scaled by upstream dlogp
void gaussian_logprob_backward(std::span<const double> mean, std::span<const double> log_std,
                               std::span<const double> action, double dlogp,
                               std::span<double> dmean_out, std::span<double> dlog_std_out);

// --- Adam ---

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig config;
  Grads m, v;
  long long step_count = 0;

  static AdamState init(const Mlp& net, AdamConfig config = {});
};

void adam_step(Mlp& params, const Grads& grads, AdamState& state);

// orthogonal-style initialization; small output gain keeps initial policy
// actions near zero
void orthogonal_init(Mlp& net, Rng& rng, double hidden_gain, double output_gain);

// --- persistence (binary container, documented in the README) ---

void save_weights(const Mlp& net, const std::string& path);
Mlp load_weights(const std::string& path);

}  // namespace mca::nn
