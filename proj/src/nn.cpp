#include "mca/nn.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "mca/errors.hpp"

namespace mca::nn {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)
constexpr char kMagic[8] = {'M', 'C', 'A', 'W', 'N', 'E', 'T', '1'};

void check_span(std::size_t got, std::size_t want, const char* what) {
  if (got != want) throw std::invalid_argument(std::string("nn: size mismatch in ") + what);
}

}  // namespace

Mlp Mlp::zeros(std::vector<int> sizes, bool with_log_std) {
  if (sizes.size() < 2) throw std::invalid_argument("Mlp: need at least input and output layer");
  for (int s : sizes)
    if (s <= 0) throw std::invalid_argument("Mlp: layer sizes must be positive");
  Mlp net;
  net.sizes = std::move(sizes);
  for (std::size_t l = 0; l + 1 < net.sizes.size(); ++l) {
    net.weights.emplace_back(static_cast<std::size_t>(net.sizes[l + 1]) * net.sizes[l], 0.0);
    net.biases.emplace_back(net.sizes[l + 1], 0.0);
  }
  if (with_log_std) net.log_std.assign(net.sizes.back(), 0.0);
  return net;
}

std::size_t Mlp::param_count() const {
  std::size_t n = log_std.size();
  for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
  return n;
}

void forward(const Mlp& net, std::span<const double> input, std::span<double> output,
             ForwardCache* cache) {
  check_span(input.size(), static_cast<std::size_t>(net.in_dim()), "forward input");
  check_span(output.size(), static_cast<std::size_t>(net.out_dim()), "forward output");

  if (cache) {
    cache->act.assign(net.layer_count() + 1, {});
    cache->pre.assign(net.layer_count(), {});
    cache->act[0].assign(input.begin(), input.end());
  }

  std::vector<double> cur(input.begin(), input.end());
  std::vector<double> next;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const int rows = net.sizes[l + 1], cols = net.sizes[l];
    next.assign(rows, 0.0);
    const double* w = net.weights[l].data();
    for (int r = 0; r < rows; ++r) {
      double s = net.biases[l][r];
      const double* wr = w + static_cast<std::size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) s += wr[c] * cur[c];
      next[r] = s;
    }
    if (cache) cache->pre[l] = next;
    const bool last = l + 1 == net.layer_count();
    if (!last)
      for (double& v : next) v = v > 0.0 ? v : 0.0;
    if (cache) cache->act[l + 1] = next;
    cur.swap(next);
  }
  std::copy(cur.begin(), cur.end(), output.begin());
}

std::vector<double> forward(const Mlp& net, std::span<const double> input) {
  std::vector<double> out(net.out_dim());
  forward(net, input, out);
  return out;
}

Grads Grads::zeros_like(const Mlp& net) {
  Grads g;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    g.weights.emplace_back(net.weights[l].size(), 0.0);
    g.biases.emplace_back(net.biases[l].size(), 0.0);
  }
  g.log_std.assign(net.log_std.size(), 0.0);
  return g;
}

void Grads::set_zero() {
  for (auto& w : weights) std::fill(w.begin(), w.end(), 0.0);
  for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
  std::fill(log_std.begin(), log_std.end(), 0.0);
}

void Grads::add(const Grads& other) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (std::size_t i = 0; i < weights[l].size(); ++i) weights[l][i] += other.weights[l][i];
    for (std::size_t i = 0; i < biases[l].size(); ++i) biases[l][i] += other.biases[l][i];
  }
  for (std::size_t i = 0; i < log_std.size(); ++i) log_std[i] += other.log_std[i];
}

void Grads::scale(double s) {
  for (auto& w : weights)
    for (double& v : w) v *= s;
  for (auto& b : biases)
    for (double& v : b) v *= s;
  for (double& v : log_std) v *= s;
}

bool Grads::all_finite() const {
  for (const auto& w : weights)
    for (double v : w)
      if (!std::isfinite(v)) return false;
  for (const auto& b : biases)
    for (double v : b)
      if (!std::isfinite(v)) return false;
  for (double v : log_std)
    if (!std::isfinite(v)) return false;
  return true;
}

void backward(const Mlp& net, const ForwardCache& cache, std::span<const double> output_grad,
              Grads& into, std::span<double> input_grad) {
  check_span(output_grad.size(), static_cast<std::size_t>(net.out_dim()), "backward output_grad");
  if (cache.act.size() != net.layer_count() + 1)
    throw std::invalid_argument("nn: backward called without a matching forward cache");

  std::vector<double> delta(output_grad.begin(), output_grad.end());
  std::vector<double> prev_delta;
  for (std::size_t li = net.layer_count(); li-- > 0;) {
    const int rows = net.sizes[li + 1], cols = net.sizes[li];
    // output layer is linear, hidden layers gate through ReLU'
    if (li + 1 != net.layer_count())
      for (int r = 0; r < rows; ++r)
        if (cache.pre[li][r] <= 0.0) delta[r] = 0.0;

    const auto& below = cache.act[li];
    double* gw = into.weights[li].data();
    for (int r = 0; r < rows; ++r) {
      const double d = delta[r];
      if (d != 0.0) {
        double* gwr = gw + static_cast<std::size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) gwr[c] += d * below[c];
      }
      into.biases[li][r] += d;
    }

    if (li > 0 || !input_grad.empty()) {
      prev_delta.assign(cols, 0.0);
      const double* w = net.weights[li].data();
      for (int r = 0; r < rows; ++r) {
        const double d = delta[r];
        if (d == 0.0) continue;
        const double* wr = w + static_cast<std::size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) prev_delta[c] += wr[c] * d;
      }
      delta.swap(prev_delta);
    }
  }
  if (!input_grad.empty()) {
    check_span(input_grad.size(), static_cast<std::size_t>(net.in_dim()), "backward input_grad");
    for (std::size_t i = 0; i < input_grad.size(); ++i) input_grad[i] = delta[i];
  }
}

double gaussian_logprob(std::span<const double> mean, std::span<const double> log_std,
                        std::span<const double> action) {
  check_span(log_std.size(), mean.size(), "gaussian_logprob log_std");
  check_span(action.size(), mean.size(), "gaussian_logprob action");
  double lp = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double inv_std = std::exp(-log_std[i]);
    const double z = (action[i] - mean[i]) * inv_std;
    lp += -0.5 * z * z - log_std[i] - 0.5 * kLog2Pi;
  }
  return lp;
}

void gaussian_sample(std::span<const double> mean, std::span<const double> log_std, Rng& rng,
                     std::span<double> action_out) {
  check_span(action_out.size(), mean.size(), "gaussian_sample output");
  for (std::size_t i = 0; i < mean.size(); ++i)
    action_out[i] = mean[i] + std::exp(log_std[i]) * rng.gaussian();
}

double gaussian_entropy(std::span<const double> log_std) {
  double h = 0.0;
  for (double ls : log_std) h += ls + 0.5 * (1.0 + kLog2Pi);
  return h;
}

void gaussian_logprob_backward(std::span<const double> mean, std::span<const double> log_std,
                               std::span<const double> action, double dlogp,
                               std::span<double> dmean_out, std::span<double> dlog_std_out) {
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double inv_var = std::exp(-2.0 * log_std[i]);
    const double diff = action[i] - mean[i];
    dmean_out[i] = dlogp * diff * inv_var;
    dlog_std_out[i] = dlogp * (diff * diff * inv_var - 1.0);
  }
}

AdamState AdamState::init(const Mlp& net, AdamConfig config) {
  AdamState s;
  s.config = config;
  s.m = Grads::zeros_like(net);
  s.v = Grads::zeros_like(net);
  return s;
}

namespace {

void adam_update(std::span<double> p, std::span<const double> g, std::span<double> m,
                 std::span<double> v, const AdamConfig& c, double bc1, double bc2) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    p[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
  }
}

}  // namespace

void adam_step(Mlp& params, const Grads& grads, AdamState& state) {
  ++state.step_count;
  const auto& c = state.config;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step_count));
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    adam_update(params.weights[l], grads.weights[l], state.m.weights[l], state.v.weights[l], c,
                bc1, bc2);
    adam_update(params.biases[l], grads.biases[l], state.m.biases[l], state.v.biases[l], c, bc1,
                bc2);
  }
  if (!params.log_std.empty())
    adam_update(params.log_std, grads.log_std, state.m.log_std, state.v.log_std, c, bc1, bc2);
}

void orthogonal_init(Mlp& net, Rng& rng, double hidden_gain, double output_gain) {
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const int rows = net.sizes[l + 1], cols = net.sizes[l];
    auto& w = net.weights[l];
    for (double& v : w) v = rng.gaussian();

    // Gram-Schmidt over the shorter dimension: orthonormal rows if rows <=
    // cols, orthonormal columns otherwise.
    const bool by_rows = rows <= cols;
    const int vecs = by_rows ? rows : cols;
    const int len = by_rows ? cols : rows;
    auto at = [&](int vec, int k) -> double& {
      return by_rows ? w[static_cast<std::size_t>(vec) * cols + k]
                     : w[static_cast<std::size_t>(k) * cols + vec];
    };
    for (int i = 0; i < vecs; ++i) {
      for (int j = 0; j < i; ++j) {
        double dot = 0.0;
        for (int k = 0; k < len; ++k) dot += at(i, k) * at(j, k);
        for (int k = 0; k < len; ++k) at(i, k) -= dot * at(j, k);
      }
      double norm = 0.0;
      for (int k = 0; k < len; ++k) norm += at(i, k) * at(i, k);
      norm = std::sqrt(norm);
      if (norm < 1e-12) norm = 1.0;
      for (int k = 0; k < len; ++k) at(i, k) /= norm;
    }

    const double gain = (l + 1 == net.layer_count()) ? output_gain : hidden_gain;
    for (double& v : w) v *= gain;
    std::fill(net.biases[l].begin(), net.biases[l].end(), 0.0);
  }
}

namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

void put_f64_array(std::ofstream& out, std::span<const double> a) {
  for (double d : a) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
  }
}

void get_f64_array(std::ifstream& in, std::span<double> a) {
  for (double& d : a) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    std::memcpy(&d, &bits, 8);
  }
}

}  // namespace

void save_weights(const Mlp& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out.write(kMagic, 8);
  put_u32(out, static_cast<std::uint32_t>(net.layer_count()));
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    put_u32(out, static_cast<std::uint32_t>(net.sizes[l]));
    put_u32(out, static_cast<std::uint32_t>(net.sizes[l + 1]));
    put_u32(out, l + 1 == net.layer_count() ? 1u : 0u);  // 0 = relu, 1 = linear
  }
  put_u32(out, net.log_std.empty() ? 0u : 1u);
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    put_f64_array(out, net.weights[l]);
    put_f64_array(out, net.biases[l]);
  }
  if (!net.log_std.empty()) put_f64_array(out, net.log_std);
  if (!out) throw ConfigError("write failed: " + path);
}

Mlp load_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open weight file: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw ConfigError("weight file: bad magic in " + path);

  const std::uint32_t layers = get_u32(in);
  if (layers == 0 || layers > 64) throw ConfigError("weight file: implausible layer count");
  std::vector<int> sizes;
  for (std::uint32_t l = 0; l < layers; ++l) {
    const std::uint32_t in_dim = get_u32(in);
    const std::uint32_t out_dim = get_u32(in);
    const std::uint32_t act = get_u32(in);
    const std::uint32_t expect_act = (l + 1 == layers) ? 1u : 0u;
    if (act != expect_act) throw ConfigError("weight file: unexpected activation tag");
    if (l == 0) sizes.push_back(static_cast<int>(in_dim));
    if (!sizes.empty() && sizes.back() != static_cast<int>(in_dim))
      throw ConfigError("weight file: inconsistent layer sizes");
    sizes.push_back(static_cast<int>(out_dim));
  }
  const bool has_log_std = get_u32(in) != 0;

  Mlp net = Mlp::zeros(sizes, has_log_std);
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    get_f64_array(in, net.weights[l]);
    get_f64_array(in, net.biases[l]);
  }
  if (has_log_std) get_f64_array(in, net.log_std);
  if (!in) throw ConfigError("weight file: truncated " + path);
  return net;
}

}  // namespace mca::nn
