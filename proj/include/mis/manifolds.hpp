#pragma once

#include <stdexcept>

#include "mis/geometry.hpp"

namespace mis {

/// Strict positivity floor for scheduling weights: rows of xi stay on the
/// interior of the simplex so SINR-weighted sums never lose a pattern
/// entirely.
inline constexpr double kSimplexFloor = 1e-12;

/// A point of the search space: eta is the worst-SINR proxy (free scalar),
/// phi / theta are unit-modulus phase vectors, xi holds one scheduling-weight
/// row per target (each row sums to one, entries strictly positive).
struct ProductPoint {
  double eta = 0.0;
  CVec phi;
  CVec theta;
  RMat xi;
};

/// A displacement with the same shape as ProductPoint. Used both for ambient
/// (unconstrained) gradients and for tangent vectors; project_tangent maps the
/// former onto the latter.
struct ProductTangent {
  double eta = 0.0;
  CVec phi;
  CVec theta;
  RMat xi;
};

/// Thrown by retract when a requested circle step lands exactly on the origin
/// and cannot be renormalized; the caller should shrink the step.
struct DegenerateStepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Zero displacement with shapes matching z.
ProductTangent zero_tangent(const ProductPoint& z);

/// Orthogonal projection of an ambient displacement onto the tangent space at
/// z: circle components lose their radial part, xi rows are centered to sum
/// zero, eta passes through.
ProductTangent project_tangent(const ProductPoint& z,
                               const ProductTangent& ambient);

/// Euclidean projection onto the probability simplex, then a strict floor at
/// kSimplexFloor (mass taken from the largest entry so the sum stays one).
RVec simplex_project(const RVec& y);

/// Move from z along d with the given step: circle entries renormalize,
/// xi rows re-project onto the simplex, eta moves linearly.
ProductPoint retract(const ProductPoint& z, const ProductTangent& d,
                     double step);

/// Carry a tangent vector to the tangent space at z_new. On circles this is
/// re-projection; xi rows are re-centered; eta is unchanged. Coincides with
/// project_tangent at z_new.
ProductTangent transport(const ProductPoint& z_new, const ProductTangent& d);

/// Riemannian metric: real parts of the complex inner products plus the
/// Frobenius pairing of the xi blocks plus the eta product.
double inner(const ProductTangent& a, const ProductTangent& b);

double tangent_norm(const ProductTangent& a);

/// Flat distance between two points (used for the outer stopping rule).
double point_distance(const ProductPoint& a, const ProductPoint& b);

}  // namespace mis
