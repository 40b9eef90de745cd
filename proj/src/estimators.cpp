// SPDX-License-Identifier: Apache-2.0

#include "supereig/estimators.hpp"

#include <cmath>

#include "supereig/error.hpp"
#include "supereig/quadrature.hpp"

namespace supereig {

namespace {

double edge_mean_simpson(const LocalQuadratic& q, const Vec2& a, const Vec2& b) {
  const Vec2 m = 0.5 * (a + b);
  return (q.eval(a) + 4.0 * q.eval(m) + q.eval(b)) / 6.0;
}

// Subtracts the local canonical ECR interpolation from a centered quadratic.
LocalQuadratic ecr_remainder(const Triangulation& t, int k, const TaylorBasis& tb,
                             const LocalQuadratic& phi) {
  const auto& tri = t.triangles[k];
  Eigen::Vector4d dofs;
  for (int i = 0; i < 3; ++i) {
    const Vec2 a = t.vertices[tri[(i + 1) % 3]] - tb.centroid;
    const Vec2 b = t.vertices[tri[(i + 2) % 3]] - tb.centroid;
    dofs[i] = edge_mean_simpson(phi, a, b);
  }
  dofs[3] = integrate(t, k, [&](const Vec2& x) { return phi.eval(x - tb.centroid); }) / tb.area;
  const Eigen::Vector4d mono = ecr_monomial_coeffs(t, k, dofs);
  LocalQuadratic r = phi;
  r.c[0] -= mono[0];
  r.c[1] -= mono[1];
  r.c[2] -= mono[2];
  r.c[3] -= mono[3];
  r.c[5] -= mono[3];
  return r;
}

// Subtracts the local Fortin interpolation from a linear vector field a + L xi.
LocalAffineVector rt_remainder(const Triangulation& t, int k, const TaylorBasis& tb,
                               const LocalAffineVector& phi) {
  const ElementGeometry g = element_geometry(t, k);
  const auto& tri = t.triangles[k];
  LocalAffineVector r = phi;
  for (int i = 0; i < 3; ++i) {
    const Vec2 a = t.vertices[tri[(i + 1) % 3]];
    const Vec2 b = t.vertices[tri[(i + 2) % 3]];
    const Vec2 m = 0.5 * (a + b) - tb.centroid;
    // Normal-flux mean over the edge, exact for the linear field.
    const double coef = phi.eval(m).dot(g.normal[i]);
    r.a -= coef * (tb.centroid - t.vertices[tri[i]]) / g.height[i];
    r.l -= (coef / g.height[i]) * Eigen::Matrix2d::Identity();
  }
  return r;
}

struct HessianCoefficients {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
};

HessianCoefficients coefficients(const Eigen::Matrix2d& hess, const TaylorBasis& tb) {
  HessianCoefficients c;
  const double h11 = hess(0, 0);
  const double h22 = hess(1, 1);
  const double h12 = 0.5 * (hess(0, 1) + hess(1, 0));
  c.c1 = 0.25 * (h11 - h22);
  c.c2 = h12;
  c.c3 = -(tb.A_K + tb.H_K) / 144.0 * h11 - (tb.H_K - tb.A_K) / 144.0 * h22 - tb.B_K / 36.0 * h12;
  return c;
}

using RecoveredValue = std::function<Vec2(int, const Vec2&)>;
using RecoveredHessian = std::function<Eigen::Matrix2d(int)>;

EstimatorReport estimator_core(const FEFunction& u_h, double lambda_h,
                               const RecoveredValue& rec, const RecoveredHessian& hess,
                               EstimatorKind kind) {
  const Triangulation& t = u_h.mesh();
  EstimatorReport rep;
  rep.lambda_h = lambda_h;
  for (int k = 0; k < t.num_triangles(); ++k) {
    rep.term_gradient += integrate(
        t, k, [&](const Vec2& x) { return (rec(k, x) - u_h.gradient(k, x)).squaredNorm(); });
    if (kind != EstimatorKind::Conforming) {
      const TaylorBasis tb = TaylorBasis::build(t, k);
      const LocalQuadratic p = taylor_P(
          kind == EstimatorKind::CR ? ExpansionKind::CR : ExpansionKind::ECR, hess(k), tb);
      rep.term_interp -= 2.0 * lambda_h *
                         integrate(t, k, [&](const Vec2& x) {
                           return p.eval(x - tb.centroid) * u_h.value(k, x);
                         });
    }
  }
  // Nonconforming eigenvalues are lower bounds and are corrected upwards;
  // conforming Rayleigh quotients are upper bounds and are corrected down by
  // the negated gradient mismatch.
  rep.F = kind == EstimatorKind::Conforming ? -rep.term_gradient
                                            : rep.term_gradient + rep.term_interp;
  rep.lambda_rea = rep.lambda_h + rep.F;
  return rep;
}

}  // namespace

TaylorBasis TaylorBasis::build(const Triangulation& t, int k) {
  const ElementGeometry g = element_geometry(t, k);
  TaylorBasis tb;
  tb.centroid = g.centroid;
  tb.area = g.area;
  tb.A_K = g.A_K;
  tb.B_K = g.B_K;
  tb.H_K = g.H_K;

  LocalQuadratic phi1, phi2;
  phi1.c[3] = 1.0;
  phi1.c[5] = -1.0;
  phi2.c[4] = 1.0;
  tb.phi3.c[0] = 2.0;
  tb.phi3.c[3] = tb.phi3.c[5] = -36.0 / g.H_K;
  tb.iphi1 = ecr_remainder(t, k, tb, phi1);
  tb.iphi2 = ecr_remainder(t, k, tb, phi2);

  LocalAffineVector rt1, rt2;
  rt1.l << 1, 0, 0, -1;
  rt2.l << 0, 1, 1, 0;
  tb.irt1 = rt_remainder(t, k, tb, rt1);
  tb.irt2 = rt_remainder(t, k, tb, rt2);

  const LocalAffineVector* r[2] = {&tb.irt1, &tb.irt2};
  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j) {
      tb.c_rt(i, j) = integrate(t, k, [&](const Vec2& x) {
        const Vec2 xi = x - tb.centroid;
        return r[i]->eval(xi).dot(r[j]->eval(xi));
      });
      tb.c_rt(j, i) = tb.c_rt(i, j);
    }
  return tb;
}

LocalQuadratic taylor_P(ExpansionKind kind, const Eigen::Matrix2d& hess, const TaylorBasis& tb) {
  if (kind == ExpansionKind::RT) throw Error("taylor_P: use taylor_P_rt for the RT expansion");
  const HessianCoefficients c = coefficients(hess, tb);
  LocalQuadratic out;
  out.c = c.c1 * tb.iphi1.c + c.c2 * tb.iphi2.c;
  if (kind == ExpansionKind::CR) out.c += c.c3 * tb.phi3.c;
  return out;
}

LocalAffineVector taylor_P_rt(const Eigen::Matrix2d& hess, const TaylorBasis& tb) {
  const HessianCoefficients c = coefficients(hess, tb);
  LocalAffineVector out;
  out.a = 2.0 * c.c1 * tb.irt1.a + c.c2 * tb.irt2.a;
  out.l = 2.0 * c.c1 * tb.irt1.l + c.c2 * tb.irt2.l;
  return out;
}

double rt_expansion_norm(const Eigen::Matrix2d& hess, const TaylorBasis& tb) {
  const double h11 = hess(0, 0);
  const double h22 = hess(1, 1);
  const double h12 = 0.5 * (hess(0, 1) + hess(1, 0));
  return 0.25 * tb.c_rt(0, 0) * (h11 - h22) * (h11 - h22) + tb.c_rt(1, 1) * h12 * h12 +
         tb.c_rt(0, 1) * (h11 * h12 - h22 * h12);
}

EstimatorReport estimator_F(const FEFunction& u_h, double lambda_h,
                            const RecoveredGradient& recovered, EstimatorKind kind) {
  if (recovered.mesh != &u_h.mesh()) throw Error("estimator_F: mesh mismatch");
  return estimator_core(
      u_h, lambda_h, [&](int k, const Vec2& x) { return recovered.value(k, x); },
      [&](int k) { return recovered.element_gradient(k); }, kind);
}

EstimatorReport estimator_F(const FEFunction& u_h, double lambda_h,
                            const NodalGradient& recovered) {
  if (recovered.mesh != &u_h.mesh()) throw Error("estimator_F: mesh mismatch");
  return estimator_core(
      u_h, lambda_h, [&](int k, const Vec2& x) { return recovered.value(k, x); },
      [&](int k) { return recovered.element_gradient(k); }, EstimatorKind::Conforming);
}

EstimatorReport estimator_F_against(const FEFunction& u_conforming, double lambda_h,
                                    const RecoveredGradient& recovered) {
  return estimator_F(u_conforming, lambda_h, recovered, EstimatorKind::Conforming);
}

double recovering_eigenvalue(double lambda_h, double f) { return lambda_h + f; }

double combining_eigenvalue(double lambda1, double f1, double lambda2, double f2) {
  const double gap = f2 - f1;
  const double scale = std::max(std::abs(f1), std::abs(f2));
  if (std::abs(gap) <= 1e-14 * std::max(1.0, scale))
    throw Error("combining_eigenvalue: estimators coincide, weights degenerate");
  return (f2 * lambda1 - f1 * lambda2) / gap;
}

double extrapolate(double lambda_h, double lambda_2h) {
  return (4.0 * lambda_h - lambda_2h) / 3.0;
}

}  // namespace supereig
