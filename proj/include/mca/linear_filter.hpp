#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mca::linear_filter {

// Continuous-time transfer function with coefficients ascending in s:
//   H(s) = (num[0] + num[1] s + ...) / (den[0] + den[1] s + ...)
// deg(num) <= deg(den), den leading coefficient nonzero.
struct ContinuousTF {
  std::vector<double> num;
  std::vector<double> den;
};

// Discrete single-input single-output state-space filter
//   y_k = C x_k + D u_k;  x_{k+1} = A x_k + B u_k
class StateSpaceFilter {
 public:
  StateSpaceFilter() = default;
  StateSpaceFilter(std::vector<double> a, std::vector<double> b, std::vector<double> c, double d);

  double step(double u);
  void reset();
  std::vector<double> run(std::span<const double> input);

  int order() const { return n_; }
  double dc_gain() const;

 private:
  int n_ = 0;
  std::vector<double> a_, b_, c_;  // a_ row-major n x n
  double d_ = 0.0;
  std::vector<double> state_, scratch_;
};

// Tustin (trapezoidal) discretization at sample period dt. Realizes the TF in
// controllable canonical form first so the state dimension equals deg(den).
// Preserves DC gain exactly.
StateSpaceFilter bilinear(const ContinuousTF& tf, double dt);

// dense continuous realization of tf, for integration oracles in tests
struct ContinuousSS {
  int n = 0;
  std::vector<double> a, b, c;  // a row-major n x n
  double d = 0.0;
};
ContinuousSS to_state_space(const ContinuousTF& tf);

}  // namespace mca::linear_filter
