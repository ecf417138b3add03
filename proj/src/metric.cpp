#include "tale/metric.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>

namespace tale {

double fd_step(const Vec& p) { return std::max(1e-4, 1e-4 * p.norm()); }

std::pair<Mat, Vec> DeckPresentation::motion(const Word& word) const {
  const int n = gens_.empty() ? 0 : gens_[0].rot.rows();
  Mat Q = Mat::Identity(n, n);
  Vec v = Vec::Zero(n);
  for (int g = 0; g < rank(); ++g) {
    const int k = word[g];
    if (k == 0) continue;
    Mat R = gens_[g].rot;
    Vec t = gens_[g].trans;
    if (k < 0) {
      // inverse generator: p -> R^{-1}(p - t)
      R = gens_[g].rot.transpose().eval();
      t = (-R * gens_[g].trans).eval();
    }
    for (int i = 0; i < std::abs(k); ++i) {
      Q = R * Q;
      v = R * v + t;
    }
  }
  return {Q, v};
}

Vec DeckPresentation::apply(const Word& word, const Vec& p) const {
  auto [Q, v] = motion(word);
  return Q * p + v;
}

std::vector<Word> DeckPresentation::words_within(const Vec& q, double radius) const {
  std::vector<Word> out;
  if (radius <= 0) return out;
  if (kind_ == Kind::FlatCyclic || kind_ == Kind::FiberPeriod) {
    // Displacement grows at least linearly in |k| along the invariant axis.
    const Vec& t = gens_[0].trans;
    double axis_step = t.norm();
    // Rotational generators move the axis component only by the translation;
    // the rotation-invariant component of t is a per-power lower bound.
    if (kind_ == Kind::FlatCyclic) {
      Vec fixed = Vec::Zero(t.size());
      Eigen::JacobiSVD<Mat> svd(gens_[0].rot - Mat::Identity(t.size(), t.size()),
                                Eigen::ComputeFullV);
      for (int i = 0; i < t.size(); ++i)
        if (svd.singularValues()(i) < 1e-12) {
          Vec dir = svd.matrixV().col(i);
          fixed += dir.dot(t) * dir;
        }
      axis_step = fixed.norm();
    }
    int kmax = axis_step > 1e-12 ? static_cast<int>(std::ceil(radius / axis_step)) + 1 : 4096;
    for (int k = -kmax; k <= kmax; ++k) {
      if (k == 0) continue;
      Word w(1);
      w[0] = k;
      if ((apply(w, q) - q).norm() < radius) out.push_back(w);
    }
    return out;
  }
  // Lattice of pure translations: |sum k_i t_i| >= |k|_inf / ||B^+||.
  const int m = rank();
  const int n = gens_[0].trans.size();
  Mat B(n, m);
  for (int g = 0; g < m; ++g) B.col(g) = gens_[g].trans;
  Mat pinv = (B.transpose() * B).inverse() * B.transpose();
  std::vector<int> bound(m);
  for (int g = 0; g < m; ++g)
    bound[g] = static_cast<int>(std::ceil(radius * pinv.row(g).norm())) + 1;
  Word w = Word::Zero(m);
  std::function<void(int)> rec = [&](int g) {
    if (g == m) {
      if (w.isZero()) return;
      if ((B * w.cast<double>()).norm() < radius) out.push_back(w);
      return;
    }
    for (int k = -bound[g]; k <= bound[g]; ++k) {
      w[g] = k;
      rec(g + 1);
    }
    w[g] = 0;
  };
  rec(0);
  return out;
}

void MetricModel::metric_derivatives(const Vec& p, std::vector<Mat>& dg) const {
  // 4th-order central stencil.
  const double h = fd_step(p);
  dg.assign(n_, Mat::Zero(n_, n_));
  for (int k = 0; k < n_; ++k) {
    Vec pp = p;
    pp[k] = p[k] + 2 * h;
    if (!in_domain(pp)) throw FDUnstable(name_ + ": FD stencil leaves valid domain");
    Mat g2p = metric(pp);
    pp[k] = p[k] + h;
    Mat g1p = metric(pp);
    pp[k] = p[k] - h;
    Mat g1m = metric(pp);
    pp[k] = p[k] - 2 * h;
    if (!in_domain(pp)) throw FDUnstable(name_ + ": FD stencil leaves valid domain");
    Mat g2m = metric(pp);
    dg[k] = (-g2p + 8 * g1p - 8 * g1m + g2m) / (12 * h);
  }
}

void MetricModel::metric_second_derivatives(const Vec& p,
                                            std::vector<std::vector<Mat>>& d2g) const {
  const double h = fd_step(p);
  d2g.assign(n_, std::vector<Mat>(n_, Mat::Zero(n_, n_)));
  for (int k = 0; k < n_; ++k) {
    Vec pp = p;
    std::vector<Mat> dp, dm, dp2, dm2;
    pp[k] = p[k] + h;
    metric_derivatives(pp, dp);
    pp[k] = p[k] - h;
    metric_derivatives(pp, dm);
    pp[k] = p[k] + 2 * h;
    metric_derivatives(pp, dp2);
    pp[k] = p[k] - 2 * h;
    metric_derivatives(pp, dm2);
    for (int l = 0; l < n_; ++l)
      d2g[k][l] = (-dp2[l] + 8 * dp[l] - 8 * dm[l] + dm2[l]) / (12 * h);
  }
}

std::vector<Mat> MetricModel::christoffel(const Vec& p) const {
  return christoffel(p, has_analytic_derivatives() ? ChristoffelMode::Analytic
                                                   : ChristoffelMode::FiniteDifference);
}

std::vector<Mat> MetricModel::christoffel(const Vec& p, ChristoffelMode mode) const {
  require_domain(p);
  if (flat_chart()) return std::vector<Mat>(n_, Mat::Zero(n_, n_));
  std::vector<Mat> dg;
  if (mode == ChristoffelMode::Analytic && has_analytic_derivatives()) {
    metric_derivatives(p, dg);
  } else {
    MetricModel::metric_derivatives(p, dg);
  }
  Mat ginv = metric(p).inverse();
  std::vector<Mat> gamma(n_, Mat::Zero(n_, n_));
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) {
        double s = 0;
        for (int l = 0; l < n_; ++l)
          s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        gamma[k](i, j) = 0.5 * s;
        gamma[k](j, i) = gamma[k](i, j);
      }
  return gamma;
}

CurvatureData MetricModel::riemann(const Vec& p) const {
  return riemann(p, has_analytic_derivatives() ? ChristoffelMode::Analytic
                                               : ChristoffelMode::FiniteDifference);
}

CurvatureData MetricModel::riemann(const Vec& p, ChristoffelMode mode) const {
  require_domain(p);
  const int n = n_;
  CurvatureData out;
  out.riemann = Tensor4(n);
  out.ricci = Mat::Zero(n, n);

  Mat g = metric(p);
  Mat ginv = g.inverse();

  // R^r_{s mu nu} = d_mu G^r_{nu s} - d_nu G^r_{mu s} + G^r_{mu l} G^l_{nu s} - G^r_{nu l} G^l_{mu s}
  std::vector<Mat> gamma = christoffel(p, mode);
  std::vector<std::vector<Mat>> dgamma(n, std::vector<Mat>(n, Mat::Zero(n, n)));

  bool analytic = (mode == ChristoffelMode::Analytic) && has_analytic_derivatives();
  if (flat_chart()) {
    // all zero
  } else if (analytic) {
    std::vector<Mat> dg;
    std::vector<std::vector<Mat>> d2g;
    metric_derivatives(p, dg);
    metric_second_derivatives(p, d2g);
    std::vector<Mat> dginv(n);
    for (int m = 0; m < n; ++m) dginv[m] = -ginv * dg[m] * ginv;
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) {
            double s = 0;
            for (int l = 0; l < n; ++l) {
              s += dginv[m](k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
              s += ginv(k, l) * (d2g[m][i](j, l) + d2g[m][j](i, l) - d2g[m][l](i, j));
            }
            dgamma[m][k](i, j) = 0.5 * s;
            dgamma[m][k](j, i) = dgamma[m][k](i, j);
          }
  } else {
    const double h = fd_step(p);
    for (int m = 0; m < n; ++m) {
      Vec pp = p;
      pp[m] = p[m] + 2 * h;
      if (!in_domain(pp)) throw FDUnstable(name_ + ": FD stencil leaves valid domain");
      auto g2p = christoffel(pp, mode);
      pp[m] = p[m] + h;
      auto g1p = christoffel(pp, mode);
      pp[m] = p[m] - h;
      auto g1m = christoffel(pp, mode);
      pp[m] = p[m] - 2 * h;
      if (!in_domain(pp)) throw FDUnstable(name_ + ": FD stencil leaves valid domain");
      auto g2m = christoffel(pp, mode);
      for (int k = 0; k < n; ++k)
        dgamma[m][k] = (-g2p[k] + 8 * g1p[k] - 8 * g1m[k] + g2m[k]) / (12 * h);
    }
  }

  Tensor4 rup(n);  // R^r_{s mu nu}
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s)
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) {
          double v = dgamma[mu][r](nu, s) - dgamma[nu][r](mu, s);
          for (int l = 0; l < n; ++l)
            v += gamma[r](mu, l) * gamma[l](nu, s) - gamma[r](nu, l) * gamma[l](mu, s);
          rup(r, s, mu, nu) = v;
        }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = 0;
          for (int a = 0; a < n; ++a) v += g(i, a) * rup(a, j, k, l);
          out.riemann(i, j, k, l) = v;
        }

  for (int s = 0; s < n; ++s)
    for (int nu = 0; nu < n; ++nu) {
      double v = 0;
      for (int mu = 0; mu < n; ++mu) v += rup(mu, s, mu, nu);
      out.ricci(s, nu) = v;
    }

  // Orthonormal-frame components for norms.
  Mat E = frame(p);
  Tensor4 rf(n);
  double scale = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = 0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                  v += out.riemann(i, j, k, l) * E(i, a) * E(j, b) * E(k, c) * E(l, d);
          rf(a, b, c, d) = v;
          scale = std::max(scale, std::abs(v));
        }

  double frob2 = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) frob2 += rf(a, b, c, d) * rf(a, b, c, d);
  out.norm_frobenius = std::sqrt(frob2);

  // Curvature operator on 2-forms (orthonormal pair basis).
  int npairs = n * (n - 1) / 2;
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.push_back({a, b});
  Mat op(npairs, npairs);
  for (int u = 0; u < npairs; ++u)
    for (int v = 0; v < npairs; ++v)
      op(u, v) = rf(pairs[u].first, pairs[u].second, pairs[v].first, pairs[v].second);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (op + op.transpose()));
  out.norm_operator = es.eigenvalues().cwiseAbs().maxCoeff();

  // Symmetry residuals (relative to the largest frame component).
  double worst = 0;
  if (scale > 0) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            worst = std::max(worst, std::abs(rf(a, b, c, d) + rf(b, a, c, d)));
            worst = std::max(worst, std::abs(rf(a, b, c, d) + rf(a, b, d, c)));
            worst = std::max(worst, std::abs(rf(a, b, c, d) - rf(c, d, a, b)));
            worst = std::max(worst,
                             std::abs(rf(a, b, c, d) + rf(a, c, d, b) + rf(a, d, b, c)));
          }
    worst /= scale;
  }
  out.symmetry_residual = worst;

  Mat ric_f = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double v = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v += out.ricci(i, j) * E(i, a) * E(j, b);
      ric_f(a, b) = v;
    }
  out.ricci_norm = ric_f.norm();
  return out;
}

Mat MetricModel::frame(const Vec& p) const {
  if (flat_chart()) return Mat::Identity(n_, n_);
  Eigen::LLT<Mat> llt(metric(p));
  if (llt.info() != Eigen::Success)
    throw OutOfDomain(name_ + ": metric not positive definite at sample point");
  Mat L = llt.matrixL();
  return L.transpose().inverse();
}

Mat MetricModel::frame_inverse(const Vec& p) const {
  if (flat_chart()) return Mat::Identity(n_, n_);
  Eigen::LLT<Mat> llt(metric(p));
  if (llt.info() != Eigen::Success)
    throw OutOfDomain(name_ + ": metric not positive definite at sample point");
  Mat L = llt.matrixL();
  return L.transpose();
}

double MetricModel::norm(const Vec& p, const Vec& v) const {
  return std::sqrt(std::max(0.0, inner(p, v, v)));
}

double MetricModel::inner(const Vec& p, const Vec& v, const Vec& w) const {
  if (flat_chart()) return v.dot(w);
  return v.dot(metric(p) * w);
}

}  // namespace tale
