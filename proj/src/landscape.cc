// Copyright 2026 The lpmc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lpmc/landscape.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lpmc/errors.h"
#include "lpmc/rng.h"

namespace lpmc {

namespace {

constexpr double kIdentityTolerance = 1e-8;

Matrix GaussianMatrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = rng.Normal();
  }
  return out;
}

// Sum over observed (i, j) of a(i, j) * b(i, j).
double MaskInner(const ObservationMask& mask, const Matrix& a, const Matrix& b) {
  double total = 0.0;
  for (const Index& idx : mask.indices()) total += a(idx.row, idx.col) * b(idx.row, idx.col);
  return total;
}

double MaskNormSq(const ObservationMask& mask, const Matrix& a) {
  return MaskInner(mask, a, a);
}

double PolynomialPart(const ObjectiveSpec& spec, const Vector& theta) {
  const ObjectiveTerms terms = FTerms(spec, theta);
  return terms.fit + terms.balance;
}

}  // namespace

GroundTruthProfile Profile(const Matrix& m_star, int r) {
  if (r < 1) throw ArgumentError("profile: r must be positive");
  const ReducedSvd svd = ComputeReducedSvd(m_star);
  if (svd.rank() < r) {
    throw DegeneracyError("profile: numerical rank " + std::to_string(svd.rank()) +
                          " is below r = " + std::to_string(r));
  }
  GroundTruthProfile out;
  out.r = r;
  out.sigma1 = svd.sigma(0);
  out.sigma_r = svd.sigma(r - 1);
  out.kappa = out.sigma1 / out.sigma_r;
  out.u_star = svd.u.leftCols(r);
  out.v_star = svd.v.leftCols(r);
  const double n1 = static_cast<double>(m_star.rows());
  const double n2 = static_cast<double>(m_star.cols());
  const double tu = TwoInfNorm(out.u_star);
  const double tv = TwoInfNorm(out.v_star);
  out.mu = std::max(n1 / r * tu * tu, n2 / r * tv * tv);
  return out;
}

double AuxKf(const ObjectiveSpec& spec, const Matrix& x, const Matrix& y,
             const Matrix& dx, const Matrix& dy) {
  if (dx.rows() != x.rows() || dx.cols() != x.cols() || dy.rows() != y.rows() ||
      dy.cols() != y.cols()) {
    throw ArgumentError("aux_kf: direction shape mismatch");
  }
  const ObservationMask& mask = spec.mask();
  const double inv_p = 1.0 / spec.p_hat();
  const Matrix residual = x * y.transpose() - spec.observed();
  const Matrix first = dx * y.transpose() + x * dy.transpose();
  const Matrix second = dx * dy.transpose();
  const double data_quad =
      inv_p * (MaskNormSq(mask, first) + 2.0 * MaskInner(mask, residual, second));

  const Matrix b0 = x.transpose() * x - y.transpose() * y;
  const Matrix b1 = dx.transpose() * x + x.transpose() * dx - dy.transpose() * y -
                    y.transpose() * dy;
  const Matrix b2 = dx.transpose() * dx - dy.transpose() * dy;
  const double balance_quad = 0.125 * (2.0 * b1.squaredNorm() + 4.0 * Inner(b0, b2));

  double reg_quad = 0.0;
  if (spec.lambda() > 0.0) {
    reg_quad = spec.lambda() * (RegularizerHessianForm(x, dx, spec.alpha()) +
                                RegularizerHessianForm(y, dy, spec.alpha()));
  }
  const auto [gx, gy] = FGradXY(spec, x, y);
  return data_quad + balance_quad + reg_quad - 4.0 * (Inner(gx, dx) + Inner(gy, dy));
}

double AuxKtilde(const ObjectiveSpec& spec, const Vector& theta, const Vector& delta) {
  const LinearParam& param = spec.param();
  if (theta.size() != param.dim() || delta.size() != param.dim()) {
    throw ArgumentError("aux_ktilde: vector length mismatch");
  }
  const double delta_norm = delta.norm();
  if (delta_norm == 0.0) return 0.0;
  const double gradient_term = delta.dot(FGrad(spec, theta));

  // Fit + balance is a quartic in t along delta, so this stencil is exact up
  // to rounding; a step comparable to ||theta|| keeps the cancellation small.
  const double h = std::max(1.0, theta.norm() / delta_norm);
  const double f0 = PolynomialPart(spec, theta);
  const double fp1 = PolynomialPart(spec, theta + h * delta);
  const double fm1 = PolynomialPart(spec, theta - h * delta);
  const double fp2 = PolynomialPart(spec, theta + 2.0 * h * delta);
  const double fm2 = PolynomialPart(spec, theta - 2.0 * h * delta);
  const double poly_quad =
      (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);

  double reg_quad = 0.0;
  if (spec.lambda() > 0.0) {
    reg_quad = spec.lambda() *
               (RegularizerHessianForm(param.X(theta), param.X(delta), spec.alpha()) +
                RegularizerHessianForm(param.Y(theta), param.Y(delta), spec.alpha()));
  }
  return poly_quad + reg_quad - 4.0 * gradient_term;
}

bool KReport::identity_holds() const {
  return std::abs(k_tilde - k_f) <= kIdentityTolerance * (1.0 + std::abs(k_f));
}

bool KReport::bound_holds() const {
  return k_tilde <= bound() + kIdentityTolerance * scale;
}

KReport KDecomposition(const ObjectiveSpec& spec, const Vector& theta, const Vector& xi,
                       const Matrix& m_star, const Matrix& noise) {
  const LinearParam& param = spec.param();
  if (noise.rows() != param.n1() || noise.cols() != param.n2()) {
    throw ArgumentError("k_decomposition: noise shape mismatch");
  }
  const WitnessCertificate cert = Certify(param, theta, xi, m_star);
  if (!cert.passes()) {
    throw ContractViolation("k_decomposition: xi does not certify for m_star");
  }
  const ObservationMask& mask = spec.mask();
  const double p = spec.p_hat();
  const Vector delta = theta - xi;
  const Matrix x = param.X(theta), y = param.Y(theta);
  const Matrix u = param.X(xi), v = param.Y(xi);
  const Matrix dx = param.X(delta), dy = param.Y(delta);

  Matrix z(x.rows() + y.rows(), x.cols()), w(z.rows(), z.cols()), dz(z.rows(), z.cols());
  z << x, y;
  w << u, v;
  dz << dx, dy;

  KReport report;
  report.k1 = 0.25 * ((dz * dz.transpose()).squaredNorm() -
                      3.0 * (z * z.transpose() - w * w.transpose()).squaredNorm());

  const Matrix dd = dx * dy.transpose();
  const Matrix gap = x * y.transpose() - u * v.transpose();
  report.k2 = (MaskNormSq(mask, dd) / p - dd.squaredNorm()) -
              (3.0 / p * MaskNormSq(mask, gap) - 3.0 * gap.squaredNorm());

  if (spec.lambda() > 0.0) {
    const double a = spec.alpha();
    report.k3 = spec.lambda() *
                (RegularizerHessianForm(x, dx, a) - 4.0 * Inner(RegularizerGrad(x, a), dx) +
                 RegularizerHessianForm(y, dy, a) - 4.0 * Inner(RegularizerGrad(y, a), dy));
  }

  report.k4 = 6.0 / p * MaskInner(mask, dd, noise) +
              4.0 / p * MaskInner(mask, u * dy.transpose() + dx * v.transpose(), noise);

  report.k_tilde = AuxKtilde(spec, theta, delta);
  report.k_f = AuxKf(spec, x, y, dx, dy);
  report.scale = 1.0 + std::abs(report.k_tilde) + std::abs(report.k1) +
                 std::abs(report.k2) + std::abs(report.k3) + std::abs(report.k4);
  return report;
}

double PsiSurrogate(const ObservationMask& mask, const Matrix& noise,
                    const LinearParam& param) {
  const Matrix sampled = ProjectOmega(noise, mask);
  if (param.kind() == ParamKind::kSubspace) {
    return SpectralNorm(param.basis_u().transpose() * sampled * param.basis_v());
  }
  return SpectralNorm(sampled);
}

bool RateReport::all_pass() const {
  return std::all_of(lines.begin(), lines.end(), [](const RateLine& l) { return l.pass; });
}

RateReport RateConditions(const GroundTruthProfile& profile, double p, double lambda,
                          double alpha, int n1, int n2, double c1, double c2) {
  if (!(p > 0.0) || n1 < 1 || n2 < 1 || !(c1 > 0.0) || !(c2 > 0.0)) {
    throw ArgumentError("rate_conditions: inputs must be positive");
  }
  const double n_max = std::max(n1, n2), n_min = std::min(n1, n2);
  const double mu = profile.mu, r = profile.r, kappa = profile.kappa;
  const double inf = std::numeric_limits<double>::infinity();

  RateReport report;
  const double log_term = mu * r * std::log(n_max) / n_min;
  const double kappa_term = n_max * mu * mu * r * r * kappa * kappa / (n_min * n_min);
  RateLine& rate = report.lines[0];
  rate.name = "sampling-rate";
  rate.value = p;
  rate.lower = c1 * std::max(log_term, kappa_term);
  rate.upper = inf;
  rate.binding = log_term >= kappa_term ? "mu r log(n_max) / n_min"
                                        : "n_max mu^2 r^2 kappa^2 / n_min^2";
  rate.pass = p >= rate.lower;

  const double lambda_unit = c2 * std::sqrt(n_max / p);
  RateLine& lam = report.lines[1];
  lam.name = "lambda";
  lam.value = lambda;
  lam.lower = lambda_unit;
  lam.upper = 10.0 * lambda_unit;
  lam.binding = "C2 sqrt(n_max / p)";
  lam.pass = lambda >= lam.lower && lambda <= lam.upper;

  const double alpha_unit = c2 * std::sqrt(mu * r * profile.sigma1 / n_min);
  RateLine& al = report.lines[2];
  al.name = "alpha";
  al.value = alpha;
  al.lower = alpha_unit;
  al.upper = 10.0 * alpha_unit;
  al.binding = "C2 sqrt(mu r sigma1 / n_min)";
  al.pass = alpha >= al.lower && alpha <= al.upper;
  return report;
}

bool ConcentrationReport::all_hold() const {
  return std::all_of(trials.begin(), trials.end(),
                     [](const ConcentrationTrial& t) { return t.holds; });
}

double ConcentrationReport::max_ratio() const {
  double out = 0.0;
  for (const auto& t : trials) out = std::max(out, t.ratio);
  return out;
}

ConcentrationReport ConcentrationSpotchecks(const ObservationMask& mask, int trials, int r,
                                            std::uint64_t seed) {
  if (trials < 1 || r < 1) throw ArgumentError("concentration_spotchecks: bad counts");
  const int n1 = mask.rows(), n2 = mask.cols();
  const double p = mask.nominal_p();
  const Matrix gap_matrix = mask.Indicator() - Matrix::Constant(n1, n2, p);
  const double omega_gap = SpectralNorm(gap_matrix);
  const double n_max = std::max(n1, n2);

  ConcentrationReport report;
  const Rng base(seed);
  for (int t = 0; t < trials; ++t) {
    Rng rng = base.Split(static_cast<std::uint64_t>(t));
    const Matrix a = GaussianMatrix(n1, r, rng), b = GaussianMatrix(n1, r, rng);
    const Matrix c = GaussianMatrix(n2, r, rng), d = GaussianMatrix(n2, r, rng);
    const Matrix ac = a * c.transpose(), bd = b * d.transpose();
    const double row_ab = (a.rowwise().squaredNorm().array() *
                           b.rowwise().squaredNorm().array()).sum();
    const double row_cd = (c.rowwise().squaredNorm().array() *
                           d.rowwise().squaredNorm().array()).sum();
    ConcentrationTrial trial;
    trial.omega_gap = omega_gap;
    trial.lhs = std::abs(MaskInner(mask, ac, bd) - p * Inner(ac, bd));
    trial.middle = omega_gap * std::sqrt(row_ab) * std::sqrt(row_cd);
    trial.rhs = 0.5 * omega_gap * (row_ab + row_cd);
    trial.ratio = p > 0.0 ? omega_gap / std::sqrt(n_max * p) : 0.0;
    // Rounding slack: the sums are O(n r^2) terms of size ~ |ac| |bd|.
    const double slack = 1e-12 * (ac.norm() * bd.norm() + row_ab + row_cd);
    trial.holds = trial.lhs <= trial.middle * (1.0 + 1e-9) + slack &&
                  trial.middle <= trial.rhs * (1.0 + 1e-12) + slack;
    report.trials.push_back(trial);
  }
  return report;
}

double RipDeviation(const ObservationMask& mask, const GroundTruthProfile& profile,
                    int trials, std::uint64_t seed) {
  const double p = mask.nominal_p();
  if (!(p > 0.0)) throw ArgumentError("rip_deviation: nominal p must be > 0");
  const Rng base(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = base.Split(static_cast<std::uint64_t>(t));
    const Matrix a = GaussianMatrix(mask.cols(), profile.r, rng);
    const Matrix b = GaussianMatrix(mask.rows(), profile.r, rng);
    const Matrix m = profile.u_star * a.transpose() + b * profile.v_star.transpose();
    const double full = m.squaredNorm();
    worst = std::max(worst, std::abs(MaskNormSq(mask, m) / p - full) / full);
  }
  return worst;
}

bool BasicPropertiesReport::passes() const {
  const double tol = 1e-8;
  const double root1 = sqrt_sigma1;
  return std::abs(sigma_max_u - root1) <= tol * root1 &&
         std::abs(sigma_max_v - root1) <= tol * root1 &&
         std::abs(sigma_r_u - sqrt_sigma_r) <= tol * root1 &&
         std::abs(sigma_r_v - sqrt_sigma_r) <= tol * root1 &&
         row_u <= row_bound_u * (1.0 + tol) && row_v <= row_bound_v * (1.0 + tol) &&
         colspan_gap <= tol * root1;
}

BasicPropertiesReport BasicProperties(const LinearParam& param, const Vector& xi,
                                      const GroundTruthProfile& profile) {
  const Matrix u = param.X(xi), v = param.Y(xi);
  const int r = profile.r;
  Eigen::JacobiSVD<Matrix> su(u), sv(v);
  BasicPropertiesReport out;
  out.sqrt_sigma1 = std::sqrt(profile.sigma1);
  out.sqrt_sigma_r = std::sqrt(profile.sigma_r);
  out.sigma_max_u = su.singularValues()(0);
  out.sigma_max_v = sv.singularValues()(0);
  out.sigma_r_u = su.singularValues()(r - 1);
  out.sigma_r_v = sv.singularValues()(r - 1);
  out.row_u = std::pow(TwoInfNorm(u), 2);
  out.row_v = std::pow(TwoInfNorm(v), 2);
  out.row_bound_u = profile.mu * r * profile.sigma1 / param.n1();
  out.row_bound_v = profile.mu * r * profile.sigma1 / param.n2();
  const Matrix& us = profile.u_star;
  const Matrix& vs = profile.v_star;
  out.colspan_gap = std::max((u - us * (us.transpose() * u)).norm(),
                             (v - vs * (vs.transpose() * v)).norm());
  return out;
}

}  // namespace lpmc
