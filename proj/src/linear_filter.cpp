#include "mca/linear_filter.hpp"

#include <cmath>
#include <stdexcept>

#include "mca/errors.hpp"

namespace mca::linear_filter {

namespace {

// Solve M X = R for X, M n x n, R n x m, both row-major. Partial pivoting.
std::vector<double> solve(std::vector<double> m, std::vector<double> r, int n, int cols) {
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::fabs(m[i * n + k]) > std::fabs(m[piv * n + k])) piv = i;
    if (std::fabs(m[piv * n + k]) < 1e-300)
      throw NumericalError("linear_filter: singular system in discretization");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
      for (int j = 0; j < cols; ++j) std::swap(r[k * cols + j], r[piv * cols + j]);
    }
    const double inv = 1.0 / m[k * n + k];
    for (int i = k + 1; i < n; ++i) {
      const double factor = m[i * n + k] * inv;
      if (factor == 0.0) continue;
      for (int j = k; j < n; ++j) m[i * n + j] -= factor * m[k * n + j];
      for (int j = 0; j < cols; ++j) r[i * cols + j] -= factor * r[k * cols + j];
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    const double inv = 1.0 / m[k * n + k];
    for (int j = 0; j < cols; ++j) {
      double s = r[k * cols + j];
      for (int i = k + 1; i < n; ++i) s -= m[k * n + i] * r[i * cols + j];
      r[k * cols + j] = s * inv;
    }
  }
  return r;
}

}  // namespace

StateSpaceFilter::StateSpaceFilter(std::vector<double> a, std::vector<double> b,
                                   std::vector<double> c, double d)
    : n_(static_cast<int>(b.size())), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(d) {
  if (a_.size() != static_cast<std::size_t>(n_) * n_ || c_.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("StateSpaceFilter: inconsistent shapes");
  state_.assign(n_, 0.0);
  scratch_.assign(n_, 0.0);
}

double StateSpaceFilter::step(double u) {
  double y = d_ * u;
  for (int i = 0; i < n_; ++i) y += c_[i] * state_[i];
  for (int i = 0; i < n_; ++i) {
    double s = b_[i] * u;
    for (int j = 0; j < n_; ++j) s += a_[i * n_ + j] * state_[j];
    scratch_[i] = s;
  }
  state_.swap(scratch_);
  return y;
}

void StateSpaceFilter::reset() { state_.assign(n_, 0.0); }

std::vector<double> StateSpaceFilter::run(std::span<const double> input) {
  std::vector<double> out(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) out[i] = step(input[i]);
  return out;
}

double StateSpaceFilter::dc_gain() const {
  // C (I - A)^-1 B + D
  std::vector<double> m(static_cast<std::size_t>(n_) * n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m[i * n_ + j] = (i == j ? 1.0 : 0.0) - a_[i * n_ + j];
  std::vector<double> x = solve(std::move(m), b_, n_, 1);
  double g = d_;
  for (int i = 0; i < n_; ++i) g += c_[i] * x[i];
  return g;
}

ContinuousSS to_state_space(const ContinuousTF& tf) {
  if (tf.den.empty() || tf.den.back() == 0.0)
    throw std::invalid_argument("ContinuousTF: zero leading denominator coefficient");
  if (tf.num.size() > tf.den.size())
    throw std::invalid_argument("ContinuousTF: improper transfer function");

  const int n = static_cast<int>(tf.den.size()) - 1;
  const double lead = tf.den.back();
  std::vector<double> a_norm(n), b_norm(n + 1, 0.0);
  for (int i = 0; i < n; ++i) a_norm[i] = tf.den[i] / lead;
  for (std::size_t i = 0; i < tf.num.size(); ++i) b_norm[i] = tf.num[i] / lead;

  ContinuousSS ss;
  ss.n = n;
  ss.a.assign(static_cast<std::size_t>(n) * n, 0.0);
  ss.b.assign(n, 0.0);
  ss.c.assign(n, 0.0);
  ss.d = b_norm[n];
  if (n == 0) return ss;

  // controllable canonical form: companion matrix, B = e_n
  for (int i = 0; i + 1 < n; ++i) ss.a[i * n + i + 1] = 1.0;
  for (int j = 0; j < n; ++j) ss.a[(n - 1) * n + j] = -a_norm[j];
  ss.b[n - 1] = 1.0;
  for (int i = 0; i < n; ++i) ss.c[i] = b_norm[i] - a_norm[i] * ss.d;
  return ss;
}

StateSpaceFilter bilinear(const ContinuousTF& tf, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("bilinear: dt must be positive");
  const ContinuousSS ss = to_state_space(tf);
  const int n = ss.n;
  if (n == 0) return StateSpaceFilter({}, {}, {}, ss.d);

  // M = (I - dt/2 A)^-1:
  //   Ad = M (I + dt/2 A),  Bd = M B dt,  Cd = C M,  Dd = D + dt/2 C M B
  const double h = 0.5 * dt;
  std::vector<double> lhs(static_cast<std::size_t>(n) * n);
  std::vector<double> rhs(static_cast<std::size_t>(n) * (n + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      lhs[i * n + j] = (i == j ? 1.0 : 0.0) - h * ss.a[i * n + j];
      rhs[i * (n + 1) + j] = (i == j ? 1.0 : 0.0) + h * ss.a[i * n + j];
    }
    rhs[i * (n + 1) + n] = ss.b[i];
  }
  std::vector<double> sol = solve(std::move(lhs), std::move(rhs), n, n + 1);

  std::vector<double> ad(static_cast<std::size_t>(n) * n), bd(n), cd(n, 0.0);
  std::vector<double> mb(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) ad[i * n + j] = sol[i * (n + 1) + j];
    mb[i] = sol[i * (n + 1) + n];
    bd[i] = mb[i] * dt;
  }
  // Cd = C M: need M itself; M B is available, M columns are not. Use
  // M^T C^T = solve((I - h A)^T, C).
  std::vector<double> lhs_t(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lhs_t[i * n + j] = (i == j ? 1.0 : 0.0) - h * ss.a[j * n + i];
  cd = solve(std::move(lhs_t), ss.c, n, 1);

  double dd = ss.d;
  for (int i = 0; i < n; ++i) dd += h * cd[i] * ss.b[i];
  // note: C M B == (M^T C^T)^T B, so reuse cd here

  return StateSpaceFilter(std::move(ad), std::move(bd), std::move(cd), dd);
}

}  // namespace mca::linear_filter
