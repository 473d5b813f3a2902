#include "mis/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace mis {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

void check_shapes(const ProductPoint& z, const ProductTangent& d) {
  require(d.phi.size() == z.phi.size() && d.theta.size() == z.theta.size() &&
              d.xi.rows() == z.xi.rows() && d.xi.cols() == z.xi.cols(),
          "manifold: displacement shape does not match the point");
}

/// Remove the radial component of g at the unit-modulus point x, entrywise.
CVec project_circle(const CVec& x, const CVec& g) {
  CVec t(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double radial = (g[i] * std::conj(x[i])).real();
    t[i] = g[i] - radial * x[i];
  }
  return t;
}

RMat center_rows(const RMat& g) {
  RMat t = g;
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    t.row(r).array() -= t.row(r).mean();
  }
  return t;
}

}  // namespace

ProductTangent zero_tangent(const ProductPoint& z) {
  ProductTangent t;
  t.eta = 0.0;
  t.phi = CVec::Zero(z.phi.size());
  t.theta = CVec::Zero(z.theta.size());
  t.xi = RMat::Zero(z.xi.rows(), z.xi.cols());
  return t;
}

ProductTangent project_tangent(const ProductPoint& z,
                               const ProductTangent& ambient) {
  check_shapes(z, ambient);
  ProductTangent t;
  t.eta = ambient.eta;
  t.phi = project_circle(z.phi, ambient.phi);
  t.theta = project_circle(z.theta, ambient.theta);
  t.xi = center_rows(ambient.xi);
  return t;
}

RVec simplex_project(const RVec& y) {
  require(y.size() >= 1, "simplex_project: empty input");
  require(y.allFinite(), "simplex_project: non-finite input");
  const Eigen::Index n = y.size();

  // Sort-and-threshold projection: find the largest support whose common
  // shift keeps every kept entry positive.
  std::vector<double> sorted(y.data(), y.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double running = 0.0;
  double tau = sorted[0] - 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    running += sorted[static_cast<size_t>(j)];
    const double candidate = (running - 1.0) / static_cast<double>(j + 1);
    if (sorted[static_cast<size_t>(j)] - candidate > 0.0) {
      tau = candidate;
    } else {
      break;
    }
  }

  RVec x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = std::max(y[i] - tau, 0.0);

  // Strict interior: lift floored entries and take the surplus from the
  // largest one, which keeps the total at one without re-scaling.
  Eigen::Index top = 0;
  for (Eigen::Index i = 1; i < n; ++i) {
    if (x[i] > x[top]) top = i;
  }
  double surplus = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (x[i] < kSimplexFloor) {
      surplus += kSimplexFloor - x[i];
      x[i] = kSimplexFloor;
    }
  }
  x[top] -= surplus;
  return x;
}

ProductPoint retract(const ProductPoint& z, const ProductTangent& d,
                     double step) {
  check_shapes(z, d);
  require(std::isfinite(step), "retract: step must be finite");

  ProductPoint out;
  out.eta = z.eta + step * d.eta;

  auto renormalize = [step](const CVec& x, const CVec& t) {
    CVec w(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const Complex moved = x[i] + step * t[i];
      const double mag = std::abs(moved);
      if (mag < 1e-300) {
        throw DegenerateStepError(
            "retract: circle step cancelled an element; shrink the step");
      }
      w[i] = moved / mag;
    }
    return w;
  };
  out.phi = renormalize(z.phi, d.phi);
  out.theta = renormalize(z.theta, d.theta);

  out.xi.resize(z.xi.rows(), z.xi.cols());
  for (Eigen::Index r = 0; r < z.xi.rows(); ++r) {
    const RVec moved = z.xi.row(r).transpose() + step * d.xi.row(r).transpose();
    out.xi.row(r) = simplex_project(moved).transpose();
  }
  return out;
}

ProductTangent transport(const ProductPoint& z_new, const ProductTangent& d) {
  return project_tangent(z_new, d);
}

double inner(const ProductTangent& a, const ProductTangent& b) {
  require(a.phi.size() == b.phi.size() && a.theta.size() == b.theta.size() &&
              a.xi.rows() == b.xi.rows() && a.xi.cols() == b.xi.cols(),
          "inner: shape mismatch");
  double value = a.eta * b.eta;
  value += a.phi.dot(b.phi).real();
  value += a.theta.dot(b.theta).real();
  value += (a.xi.array() * b.xi.array()).sum();
  return value;
}

double tangent_norm(const ProductTangent& a) {
  return std::sqrt(std::max(inner(a, a), 0.0));
}

double point_distance(const ProductPoint& a, const ProductPoint& b) {
  const double de = a.eta - b.eta;
  double sq = de * de;
  sq += (a.phi - b.phi).squaredNorm();
  sq += (a.theta - b.theta).squaredNorm();
  sq += (a.xi - b.xi).squaredNorm();
  return std::sqrt(sq);
}

}  // namespace mis
