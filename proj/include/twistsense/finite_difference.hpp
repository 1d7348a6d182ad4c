#pragma once

#include <functional>

#include "twistsense/spin_core.hpp"

namespace twistsense {

/// Central difference in w with one Richardson step:
///   D(h) = (f(h) - f(-h)) / 2h,   R = (4 D(h/2) - D(h)) / 3.
inline Vector richardson_derivative(const std::function<Vector(double)>& f, double h = 1e-5) {
  const auto central = [&](double step) -> Vector { return (f(step) - f(-step)) / (2.0 * step); };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

inline double relative_norm_error(const Vector& value, const Vector& reference) {
  const double scale = std::max(reference.norm(), 1e-300);
  return (value - reference).norm() / scale;
}

}  // namespace twistsense
