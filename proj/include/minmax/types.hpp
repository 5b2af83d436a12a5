#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "minmax/errors.hpp"

namespace minmax {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Points are plain coordinate vectors; the owning set fixes the dimension.
using Point = Eigen::VectorXd;

inline void require_dim(const Vector& v, Eigen::Index expected, const char* what) {
  if (v.size() != expected) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) + ", got " +
                         std::to_string(v.size()));
  }
}

inline bool all_finite(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) return false;
  }
  return true;
}

/// Left-to-right dot product; fixed summation order keeps results reproducible.
inline double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace minmax
