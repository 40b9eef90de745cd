// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "supereig/recovery.hpp"

namespace supereig {

/// Scalar quadratic in coordinates centered at the element centroid:
/// c0 + c1 xi1 + c2 xi2 + c3 xi1^2 + c4 xi1 xi2 + c5 xi2^2.
struct LocalQuadratic {
  Eigen::Matrix<double, 6, 1> c = Eigen::Matrix<double, 6, 1>::Zero();

  double eval(const Vec2& xi) const {
    return c[0] + c[1] * xi.x() + c[2] * xi.y() + c[3] * xi.x() * xi.x() +
           c[4] * xi.x() * xi.y() + c[5] * xi.y() * xi.y();
  }
};

/// Affine vector field a + L xi in centered coordinates.
struct LocalAffineVector {
  Vec2 a = Vec2::Zero();
  Eigen::Matrix2d l = Eigen::Matrix2d::Zero();

  Vec2 eval(const Vec2& xi) const { return a + l * xi; }
};

/// Per-element Taylor-expansion ingredients: the interpolation remainders of
/// the centered quadratic/linear basis functions and the Gram matrix of the
/// RT remainders.
struct TaylorBasis {
  Vec2 centroid;
  double area = 0.0;
  double A_K = 0.0, B_K = 0.0, H_K = 0.0;
  LocalQuadratic iphi1, iphi2;  // (I - Pi^ECR) phi_1/2
  LocalQuadratic phi3;          // phi_3 (already a local bubble)
  LocalAffineVector irt1, irt2;  // (I - Pi^RT) phi^RT_1/2
  Eigen::Matrix2d c_rt;          // Gram matrix of irt1, irt2

  static TaylorBasis build(const Triangulation& t, int k);
};

enum class ExpansionKind { CR, ECR, RT };

LocalQuadratic taylor_P(ExpansionKind kind, const Eigen::Matrix2d& hess, const TaylorBasis& tb);
LocalAffineVector taylor_P_rt(const Eigen::Matrix2d& hess, const TaylorBasis& tb);

/// Closed-form value of the squared L2 norm of the RT expansion term,
///   1/4 c11 (h11 - h22)^2 + c22 h12^2 + c12 (h11 - h22) h12,
/// with h12 the symmetrized mixed entry.
double rt_expansion_norm(const Eigen::Matrix2d& hess, const TaylorBasis& tb);

struct EstimatorReport {
  double lambda_h = 0.0;
  double term_gradient = 0.0;  // || recovered - broken gradient ||^2
  double term_interp = 0.0;    // -2 lambda_h sum_K (P_K(..), u_h)_K
  // Nonconforming kinds: F = term_gradient + term_interp (lower bounds are
  // corrected upwards). Conforming kind: F = -term_gradient (upper bounds are
  // corrected downwards).
  double F = 0.0;
  double lambda_rea = 0.0;
};

enum class EstimatorKind { CR, ECR, Conforming };

EstimatorReport estimator_F(const FEFunction& u_h, double lambda_h,
                            const RecoveredGradient& recovered, EstimatorKind kind);
/// Conforming (P1-style) variant: only the gradient term.
EstimatorReport estimator_F(const FEFunction& u_h, double lambda_h, const NodalGradient& recovered);
/// P1*-style variant: gradient term between a recovered CR gradient and a
/// conforming function's gradient.
EstimatorReport estimator_F_against(const FEFunction& u_conforming, double lambda_h,
                                    const RecoveredGradient& recovered);

double recovering_eigenvalue(double lambda_h, double f);
double combining_eigenvalue(double lambda1, double f1, double lambda2, double f2);
double extrapolate(double lambda_h, double lambda_2h);

}  // namespace supereig
