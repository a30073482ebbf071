#pragma once

#include <span>
#include <vector>

#include "mca/linear_filter.hpp"

namespace mca::vestibular {

// Otolith / semicircular-canal transfer function coefficients (lateral axis).
struct Coefficients {
  double k_oto = 0.4;
  double tau1 = 5.0;    // s
  double tau2 = 0.016;  // s
  double tau3 = 10.0;   // s
  double tau4 = 5.73;   // s
  double tau5 = 80.0;   // s
};

// TF_oto = K (tau1 s + 1) / ((tau2 s + 1)(tau3 s + 1))
linear_filter::ContinuousTF otolith_tf(const Coefficients& c = {});
// TF_scc = tau4 tau5 s / ((tau4 s + 1)(tau5 s + 1))
linear_filter::ContinuousTF semicircular_tf(const Coefficients& c = {});

linear_filter::StateSpaceFilter make_otolith(double dt, const Coefficients& c = {});
linear_filter::StateSpaceFilter make_semicircular(double dt, const Coefficients& c = {});

// filter a whole signal from zero initial state
std::vector<double> sense_translation(std::span<const double> specific_force, double dt,
                                      const Coefficients& c = {});
std::vector<double> sense_rotation(std::span<const double> roll_rate, double dt,
                                   const Coefficients& c = {});

}  // namespace mca::vestibular
