#include "tale/geodesic.hpp"

#include <cmath>

namespace tale {

namespace {

// Dormand-Prince RK5(4) coefficients.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

struct GeodesicState {
  // y = (point, velocity, frame columns...)
  Vec y;
  int n;
  int frame_cols;
};

Vec rhs(const MetricModel& model, const Vec& y, int n, int cols) {
  Vec p = y.head(n);
  Vec v = y.segment(n, n);
  Vec dy(y.size());
  dy.head(n) = v;
  if (model.flat_chart()) {
    dy.tail(dy.size() - n).setZero();
    return dy;
  }
  std::vector<Mat> gamma = model.christoffel(p);
  Vec acc = Vec::Zero(n);
  for (int k = 0; k < n; ++k) acc[k] = -v.dot(gamma[k] * v);
  dy.segment(n, n) = acc;
  for (int c = 0; c < cols; ++c) {
    Vec f = y.segment(2 * n + c * n, n);
    Vec df = Vec::Zero(n);
    for (int k = 0; k < n; ++k) df[k] = -v.dot(gamma[k] * f);
    dy.segment(2 * n + c * n, n) = df;
  }
  return dy;
}

CurvePath integrate_core(const MetricModel& model, const Vec& p, const Vec& v,
                         double length, const Mat* frame, Mat* frame_out,
                         const IntegrationOptions& opt) {
  const int n = model.dim();
  model.require_domain(p);
  const double vn = model.norm(p, v);
  if (!(vn > 0)) throw Error("integrate_geodesic: zero initial velocity");

  const int cols = frame ? static_cast<int>(frame->cols()) : 0;
  Vec y(2 * n + cols * n);
  y.head(n) = p;
  y.segment(n, n) = v / vn;  // unit speed, arc-length parameter
  for (int c = 0; c < cols; ++c) y.segment(2 * n + c * n, n) = frame->col(c);

  CurvePath path;
  path.model = &model;
  path.tolerance_used = opt.tol;
  path.is_geodesic = true;
  path.arc_length = length;
  path.samples.push_back({0.0, y.head(n), y.segment(n, n)});

  double t = 0;
  double dir = length >= 0 ? 1.0 : -1.0;
  double remaining = std::abs(length);
  if (remaining == 0) {
    if (frame_out) *frame_out = *frame;
    return path;
  }

  double h = std::min(remaining, std::max(1e-3, remaining / 16));
  if (opt.max_step > 0) h = std::min(h, opt.max_step);
  Vec k1 = rhs(model, y, n, cols);
  int steps = 0;
  while (remaining > 0) {
    if (++steps > opt.max_steps) throw Error("integrate_geodesic: step budget exhausted");
    h = std::min(h, remaining);
    if (h < 1e-14 * std::max(1.0, std::abs(length)))
      throw StepUnderflow("integrate_geodesic: step size underflow");
    const double hd = dir * h;
    Vec ynew, k7;
    Vec k2, k3, k4, k5, k6;
    try {
      k2 = rhs(model, y + hd * A21 * k1, n, cols);
      k3 = rhs(model, y + hd * (A31 * k1 + A32 * k2), n, cols);
      k4 = rhs(model, y + hd * (A41 * k1 + A42 * k2 + A43 * k3), n, cols);
      k5 = rhs(model, y + hd * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4), n, cols);
      k6 = rhs(model, y + hd * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5),
               n, cols);
      ynew = y + hd * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
      k7 = rhs(model, ynew, n, cols);
    } catch (const OutOfDomain&) {
      throw LeftDomain(t + hd);  // a stage point crossed the chart boundary
    }
    Vec err = hd * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
    double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
    double errnorm = err.cwiseAbs().maxCoeff() / scale;
    if (errnorm <= opt.tol) {
      if (!model.in_domain(ynew.head(n))) throw LeftDomain(t + hd);
      y = ynew;
      k1 = k7;
      t += hd;
      remaining -= h;
      path.samples.push_back({t, y.head(n), y.segment(n, n)});
    }
    double factor = errnorm > 0 ? 0.9 * std::pow(opt.tol / errnorm, 0.2) : 5.0;
    factor = std::clamp(factor, 0.2, 5.0);
    h *= factor;
    if (opt.max_step > 0) h = std::min(h, opt.max_step);
  }
  if (frame_out) {
    frame_out->resize(n, cols);
    for (int c = 0; c < cols; ++c) frame_out->col(c) = y.segment(2 * n + c * n, n);
  }
  return path;
}

}  // namespace

double CurvePath::speed_drift() const {
  if (!is_geodesic || samples.empty()) return 0;
  double drift = 0;
  for (const auto& s : samples) {
    double sp = model->norm(s.point, s.velocity);
    drift = std::max(drift, std::abs(sp - 1.0));
  }
  return drift;
}

Vec CurvePath::point_at(double t) const {
  const auto& ss = samples;
  if (t <= ss.front().t) return ss.front().point;
  if (t >= ss.back().t) return ss.back().point;
  size_t hi = 1;
  while (ss[hi].t < t) ++hi;
  const auto& a = ss[hi - 1];
  const auto& b = ss[hi];
  const double dt = b.t - a.t;
  const double s = (t - a.t) / dt;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s),
               h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * a.point + h10 * dt * a.velocity + h01 * b.point + h11 * dt * b.velocity;
}

Vec CurvePath::velocity_at(double t) const {
  const auto& ss = samples;
  if (t <= ss.front().t) return ss.front().velocity;
  if (t >= ss.back().t) return ss.back().velocity;
  size_t hi = 1;
  while (ss[hi].t < t) ++hi;
  const auto& a = ss[hi - 1];
  const auto& b = ss[hi];
  const double dt = b.t - a.t;
  const double s = (t - a.t) / dt;
  const double d00 = 6 * s * (s - 1) / dt, d10 = (1 - s) * (1 - 3 * s),
               d01 = -6 * s * (s - 1) / dt, d11 = s * (3 * s - 2);
  return d00 * a.point + d10 * a.velocity + d01 * b.point + d11 * b.velocity;
}

CurvePath CurvePath::from_function(const MetricModel& model,
                                   const std::function<Vec(double)>& gamma, double t0,
                                   double t1, int nsamples) {
  CurvePath path;
  path.model = &model;
  path.is_geodesic = false;
  const double h = 1e-6 * std::max(1.0, std::abs(t1 - t0));
  for (int i = 0; i < nsamples; ++i) {
    double t = t0 + (t1 - t0) * i / (nsamples - 1);
    Vec p = gamma(t);
    model.require_domain(p);
    Vec v = (gamma(t + h) - gamma(t - h)) / (2 * h);
    path.samples.push_back({t, p, v});
  }
  double len = 0;
  for (size_t i = 1; i < path.samples.size(); ++i) {
    const auto& a = path.samples[i - 1];
    const auto& b = path.samples[i];
    Vec mid = 0.5 * (a.point + b.point);
    len += model.norm(mid, b.point - a.point);
  }
  path.arc_length = len;
  return path;
}

CurvePath integrate_geodesic(const MetricModel& model, const Vec& p, const Vec& v,
                             double length, const IntegrationOptions& opt) {
  return integrate_core(model, p, v, length, nullptr, nullptr, opt);
}

CurvePath integrate_geodesic_with_frame(const MetricModel& model, const Vec& p,
                                        const Vec& v, double length, const Mat& frame,
                                        Mat& frame_out, const IntegrationOptions& opt) {
  return integrate_core(model, p, v, length, &frame, &frame_out, opt);
}

Vec exp_map(const MetricModel& model, const Vec& p, const Vec& v,
            const IntegrationOptions& opt) {
  const double L = model.norm(p, v);
  if (L == 0) return p;
  if (model.flat_chart()) return p + v;
  return integrate_core(model, p, v, L, nullptr, nullptr, opt).end();
}

namespace {

// Single Gauss-Newton run; returns tangent vector or nullopt.
std::optional<Vec> shoot(const MetricModel& model, const Vec& p, const Vec& q,
                         Vec u, const LogOptions& opt) {
  const int n = model.dim();
  IntegrationOptions iopt;
  iopt.tol = std::min(1e-10, opt.tol * 1e-2);
  double scale = std::max(1.0, (q - p).norm());
  for (int it = 0; it < opt.max_iterations; ++it) {
    Vec r;
    try {
      r = exp_map(model, p, u, iopt) - q;
    } catch (const LeftDomain&) {
      return std::nullopt;
    }
    if (r.norm() <= opt.tol) return u;
    Mat J(n, n);
    const double h = 1e-7 * std::max(1.0, u.norm());
    for (int i = 0; i < n; ++i) {
      Vec up = u;
      up[i] += h;
      Vec rp;
      try {
        rp = exp_map(model, p, up, iopt) - q;
      } catch (const LeftDomain&) {
        return std::nullopt;
      }
      J.col(i) = (rp - r) / h;
    }
    Vec du = J.colPivHouseholderQr().solve(r);
    // crude damping for far-off starts
    double lim = 0.5 * std::max(scale, u.norm());
    if (du.norm() > lim) du *= lim / du.norm();
    u -= du;
  }
  return std::nullopt;
}

}  // namespace

Vec log_map(const MetricModel& model, const Vec& p, const Vec& q_target,
            const std::optional<Vec>& initial_guess, const LogOptions& opt) {
  model.require_domain(p);
  model.require_domain(q_target);
  if (model.flat_chart()) return q_target - p;
  if ((q_target - p).norm() == 0) return Vec::Zero(model.dim());

  if (initial_guess) {
    auto r = shoot(model, p, q_target, *initial_guess, opt);
    if (!r) throw NoConvergence(opt.max_iterations, -1.0);
    return *r;
  }

  const int n = model.dim();
  Vec chord = q_target - p;
  std::vector<Vec> found;
  std::mt19937_64 rng(0x7a1e5eed);  // fixed start lattice
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int s = 0; s < std::max(1, opt.multistart); ++s) {
    Vec u = chord;
    if (s > 0) {
      Vec noise(n);
      for (int i = 0; i < n; ++i) noise[i] = gauss(rng);
      u += 0.15 * chord.norm() * noise / std::max(1e-12, noise.norm());
    }
    auto r = shoot(model, p, q_target, u, opt);
    if (!r) continue;
    bool fresh = true;
    for (const Vec& v : found) {
      double cosang = v.dot(*r) / std::max(1e-300, v.norm() * r->norm());
      double ang = std::acos(std::clamp(cosang, -1.0, 1.0));
      if (ang > 1e-3 && v.norm() > 1e-6 && r->norm() > 1e-6)
        throw AmbiguousSolution("log_map: two shooting starts found distinct geodesics");
      if (ang <= 1e-3) fresh = false;
    }
    if (fresh || found.empty()) found.push_back(*r);
  }
  if (found.empty()) throw NoConvergence(opt.max_iterations, -1.0);
  // ties broken by smallest |v|_g
  Vec best = found[0];
  for (const Vec& v : found)
    if (model.norm(p, v) < model.norm(p, best)) best = v;
  return best;
}

FrameTransport parallel_transport(const MetricModel& model, const CurvePath& path,
                                  const Mat& frame) {
  FrameTransport out;
  out.path = path;
  out.initial_frame = frame;
  const int n = model.dim();
  if (model.flat_chart()) {
    out.transported_frame = frame;
    out.orthonormality_defect = 0;
    return out;
  }
  Mat F = frame;
  auto deriv = [&](double t, const Mat& Fc) {
    Vec p = path.point_at(t);
    Vec v = path.velocity_at(t);
    std::vector<Mat> gamma = model.christoffel(p);
    Mat dF(n, Fc.cols());
    for (int c = 0; c < Fc.cols(); ++c)
      for (int k = 0; k < n; ++k) dF(k, c) = -v.dot(gamma[k] * Fc.col(c));
    return dF;
  };
  for (size_t i = 1; i < path.samples.size(); ++i) {
    const double t0 = path.samples[i - 1].t;
    const double t1 = path.samples[i].t;
    const double seg = t1 - t0;
    int sub = std::max(4, static_cast<int>(std::ceil(std::abs(seg) / 0.05)));
    const double h = seg / sub;
    double t = t0;
    for (int s = 0; s < sub; ++s) {
      Mat K1 = deriv(t, F);
      Mat K2 = deriv(t + 0.5 * h, F + 0.5 * h * K1);
      Mat K3 = deriv(t + 0.5 * h, F + 0.5 * h * K2);
      Mat K4 = deriv(t + h, F + h * K3);
      F += (h / 6.0) * (K1 + 2 * K2 + 2 * K3 + K4);
      t += h;
    }
  }
  out.transported_frame = F;
  Mat g_end = model.metric(path.end());
  out.orthonormality_defect = (F.transpose() * g_end * F -
                               frame.transpose() * model.metric(path.start()) * frame)
                                  .cwiseAbs()
                                  .maxCoeff();
  return out;
}

}  // namespace tale
