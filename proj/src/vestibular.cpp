#include "mca/vestibular.hpp"

namespace mca::vestibular {

linear_filter::ContinuousTF otolith_tf(const Coefficients& c) {
  // K (tau1 s + 1) / (tau2 tau3 s^2 + (tau2 + tau3) s + 1)
  return {{c.k_oto, c.k_oto * c.tau1}, {1.0, c.tau2 + c.tau3, c.tau2 * c.tau3}};
}

linear_filter::ContinuousTF semicircular_tf(const Coefficients& c) {
  return {{0.0, c.tau4 * c.tau5}, {1.0, c.tau4 + c.tau5, c.tau4 * c.tau5}};
}

linear_filter::StateSpaceFilter make_otolith(double dt, const Coefficients& c) {
  return linear_filter::bilinear(otolith_tf(c), dt);
}

linear_filter::StateSpaceFilter make_semicircular(double dt, const Coefficients& c) {
  return linear_filter::bilinear(semicircular_tf(c), dt);
}

std::vector<double> sense_translation(std::span<const double> specific_force, double dt,
                                      const Coefficients& c) {
  return make_otolith(dt, c).run(specific_force);
}

std::vector<double> sense_rotation(std::span<const double> roll_rate, double dt,
                                   const Coefficients& c) {
  return make_semicircular(dt, c).run(roll_rate);
}

}  // namespace mca::vestibular
