#pragma once

// Shared helpers for the unit suites: deterministic random draws plus small
// brute-force reference implementations that the fast library code is checked
// against. Everything here favours clarity over speed.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mis/geometry.hpp"

namespace test_support {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline mis::Complex random_phase(std::mt19937_64& rng) {
  const double t = 2.0 * std::numbers::pi * uniform01(rng);
  return {std::cos(t), std::sin(t)};
}

inline mis::CVec random_phase_vector(std::mt19937_64& rng, Eigen::Index n) {
  mis::CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = random_phase(rng);
  return v;
}

inline mis::CVec random_complex_vector(std::mt19937_64& rng, Eigen::Index n,
                                       double scale = 1.0) {
  mis::CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = scale * mis::Complex(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
  }
  return v;
}

/// Beam gain evaluated the slow way: materialize the rank-1 coupling matrix
/// conj(c) c^T and take the quadratic form v^H G v.
inline double dense_beam_gain(const mis::CVec& v, const mis::CVec& c) {
  const mis::CMat g = c.conjugate() * c.transpose();
  return (v.adjoint() * g * v)(0, 0).real();
}

/// Euclidean projection onto the probability simplex by exhaustive KKT support
/// search: try every support set, solve for the shift, keep the candidate
/// whose multipliers are feasible. O(2^n), for n <= ~12 only.
inline Eigen::VectorXd simplex_project_kkt(const Eigen::VectorXd& y) {
  const int n = static_cast<int>(y.size());
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        sum += y[i];
        ++count;
      }
    }
    const double tau = (sum - 1.0) / count;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        x[i] = y[i] - tau;
        if (x[i] <= 0.0) ok = false;
      } else if (y[i] - tau > 0.0) {
        ok = false;  // an excluded coordinate would want to be positive
      }
    }
    if (ok) return x;
  }
  // Unreachable for finite input: the singleton support of the largest entry
  // is always feasible.
  return Eigen::VectorXd::Zero(n);
}

}  // namespace test_support
