#pragma once

#include <span>
#include <vector>

#include "mca/linear_filter.hpp"

namespace mca::testsupport {

namespace detail {

template <class InputAt>
std::vector<double> rk4_run(const linear_filter::ContinuousSS& ss, std::size_t samples, double dt,
                            int substeps, InputAt&& input_at) {
  const int n = ss.n;
  std::vector<double> x(n, 0.0), k1(n), k2(n), k3(n), k4(n), tmp(n), out(samples);
  const double h = dt / substeps;

  auto deriv = [&](const std::vector<double>& state, double u, std::vector<double>& o) {
    for (int i = 0; i < n; ++i) {
      double s = ss.b[i] * u;
      for (int j = 0; j < n; ++j) s += ss.a[i * n + j] * state[j];
      o[i] = s;
    }
  };

  for (std::size_t k = 0; k < samples; ++k) {
    double y = ss.d * input_at(k, 0.0);
    for (int i = 0; i < n; ++i) y += ss.c[i] * x[i];
    out[k] = y;
    if (k + 1 == samples) break;

    for (int s = 0; s < substeps; ++s) {
      const double ua = input_at(k, static_cast<double>(s) / substeps);
      const double um = input_at(k, (static_cast<double>(s) + 0.5) / substeps);
      const double ub = input_at(k, (static_cast<double>(s) + 1.0) / substeps);
      deriv(x, ua, k1);
      for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
      deriv(tmp, um, k2);
      for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
      deriv(tmp, um, k3);
      for (int i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
      deriv(tmp, ub, k4);
      for (int i = 0; i < n; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  return out;
}

}  // namespace detail

// Dense RK4 oracle holding the input constant over each coarse sample period.
inline std::vector<double> integrate_dense(const linear_filter::ContinuousSS& ss,
                                           std::span<const double> input, double dt,
                                           int substeps = 100) {
  return detail::rk4_run(ss, input.size(), dt, substeps,
                         [&](std::size_t k, double) { return input[k]; });
}

// Dense RK4 oracle driving the continuous system with the piecewise-linear
// interpolation of the samples, the signal the trapezoidal (bilinear)
// discretization integrates. Independent of the code path it checks.
inline std::vector<double> integrate_dense_pl(const linear_filter::ContinuousSS& ss,
                                              std::span<const double> input, double dt,
                                              int substeps = 100) {
  return detail::rk4_run(ss, input.size(), dt, substeps, [&](std::size_t k, double frac) {
    const double next = k + 1 < input.size() ? input[k + 1] : input[k];
    return input[k] + (next - input[k]) * frac;
  });
}

// product of two transfer functions (cascade), coefficients ascending in s
inline linear_filter::ContinuousTF tf_multiply(const linear_filter::ContinuousTF& a,
                                               const linear_filter::ContinuousTF& b) {
  auto conv = [](const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
  };
  return {conv(a.num, b.num), conv(a.den, b.den)};
}

}  // namespace mca::testsupport
