#include "tale/asymptotics.hpp"

#include <cmath>
#include <limits>

namespace tale {

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol)
    return left + right + (left + right - whole) / 15;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int max_depth) {
  if (a == b) return 0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

DecayProfile DecayProfile::power(double e) {
  if (e <= 0) throw ConfigError("decay profile: power exponent must be positive");
  return DecayProfile(Form::Power, [e](double s) { return std::pow(s, -e); }, e);
}

DecayProfile DecayProfile::power_shifted(double e) {
  if (e <= 0) throw ConfigError("decay profile: power exponent must be positive");
  return DecayProfile(Form::PowerShifted, [e](double s) { return std::pow(1 + s, -e); },
                      e);
}

DecayProfile DecayProfile::log_squared() {
  return DecayProfile(Form::LogSq,
                      [](double s) {
                        const double l = 1 + std::log1p(s);
                        return 1.0 / (l * l);
                      },
                      0);
}

DecayProfile DecayProfile::constant(double v) {
  return DecayProfile(Form::Constant, [v](double) { return v; }, 0);
}

DecayProfile DecayProfile::custom(std::function<double(double)> k, double tail_exponent) {
  return DecayProfile(Form::Custom, std::move(k), tail_exponent);
}

double DecayProfile::tail(double T, int extra_power) const {
  // bound on int_T^inf K(s) / s^{1+extra} ds
  switch (form_) {
    case Form::Power:
    case Form::Custom: {
      const double e = exponent_ + extra_power;
      if (e <= 0) throw IntegralDiverges("decay profile: tail integral diverges");
      return std::pow(T, -e) / e;
    }
    case Form::PowerShifted: {
      const double e = exponent_ + extra_power;
      if (e <= 0) throw IntegralDiverges("decay profile: tail integral diverges");
      return std::pow(T, -e) / e;  // (1+s)^-e <= s^-e
    }
    case Form::LogSq: {
      if (extra_power == 0) return 1.0 / (1 + std::log1p(T));
      return k_(T) / (extra_power * std::pow(T, extra_power));
    }
    case Form::Constant:
      if (extra_power == 0)
        throw IntegralDiverges("decay profile: constant K has divergent K0");
      return k_(T) / (extra_power * std::pow(T, extra_power));
  }
  return 0;
}

double DecayProfile::K0(double t) const {
  if (t <= 0) throw OutOfRange("K0: need t > 0");
  const double T = std::max(1e6, 1e4 * t);
  const double head =
      integrate([this](double u) { return k_(std::exp(u)); }, std::log(t), std::log(T));
  return head + tail(T, 0);
}

double DecayProfile::K1(double t) const {
  if (t <= 0) throw OutOfRange("K1: need t > 0");
  const double T = std::max(1e6, 1e4 * t);
  const double head = integrate(
      [this](double u) { return k_(std::exp(u)) * std::exp(-u); }, std::log(t),
      std::log(T));
  return head + tail(T, 1);
}

double DecayProfile::af_constant(const MetricModel& model,
                                 const std::vector<Vec>& points) const {
  double sup = 0;
  for (const Vec& p : points) {
    const double r = model.radial_coordinate(p);
    const double rm = model.riemann(p).norm_frobenius;
    sup = std::max(sup, r * r * rm / std::max(1e-300, k_(r)));
  }
  return sup;
}

namespace {

JacobiReport run_jacobi(const std::function<double(double)>& coeff, double t0, double J0,
                        double Jp0, double t_end,
                        const std::function<double(double)>& lower,
                        double envelope_constant,
                        const std::function<double(double)>& upper_shape) {
  JacobiReport rep;
  rep.envelope_constant = envelope_constant;
  double t = t0, J = J0, Jp = Jp0;
  double h = 1e-4;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0;
  auto record = [&](double tt, double JJ) {
    rep.t.push_back(tt);
    rep.J.push_back(JJ);
    const double lo = lower(tt);
    if (lo > 1e-9) rep.min_ratio = std::min(rep.min_ratio, JJ / lo);
    const double up = upper_shape(tt);
    if (up > 1e-9) rep.max_ratio = std::max(rep.max_ratio, JJ / up);
  };
  record(t, J);
  // classic RK4 with mild step growth; the ODE is linear and benign
  while (t < t_end) {
    h = std::min(h * 1.05, std::min(0.25, t_end - t));
    auto f = [&](double tt, double JJ, double JJp) {
      return std::pair<double, double>(JJp, coeff(tt) * JJ);
    };
    auto [k1, l1] = f(t, J, Jp);
    auto [k2, l2] = f(t + h / 2, J + h / 2 * k1, Jp + h / 2 * l1);
    auto [k3, l3] = f(t + h / 2, J + h / 2 * k2, Jp + h / 2 * l2);
    auto [k4, l4] = f(t + h, J + h * k3, Jp + h * l3);
    J += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    Jp += h / 6 * (l1 + 2 * l2 + 2 * l3 + l4);
    t += h;
    record(t, J);
  }
  rep.bounds_hold = rep.min_ratio >= 1.0 - 1e-7 && rep.max_ratio <= envelope_constant * (1 + 1e-7);
  return rep;
}

}  // namespace

JacobiReport jacobi_compare(const DecayProfile& profile, double C0, double t_end) {
  // C1 = exp(C0 int_0^inf t K(t)/(1+t)^2 dt)
  const double T = 1e8;
  const double integral =
      integrate(
          [&](double u) {
            const double t = std::exp(u);
            return C0 * t * t * profile.K(t) / ((1 + t) * (1 + t));
          },
          std::log(1e-12), std::log(T)) +
      (profile.K(T) > 0 ? C0 * profile.K0(T) : 0.0);  // tail: t K/(1+t)^2 <= K/t
  const double C1 = std::exp(integral);
  const double t0 = 1e-8;
  return run_jacobi([&](double t) { return C0 * profile.K(t) / ((1 + t) * (1 + t)); },
                    t0, t0, 1.0, t_end, [](double t) { return t; }, C1,
                    [](double t) { return t; });
}

JacobiReport jacobi_compare_halfscale(const DecayProfile& profile, double t_end) {
  // log J'(inf) <= int_1^inf 4 K(t/2)(t-1)/t^2 dt
  const double T = 1e8;
  const double integral = integrate(
                              [&](double u) {
                                const double t = std::exp(u);
                                return 4.0 * profile.K(t / 2) * (t - 1) / t;
                              },
                              0.0, std::log(T)) +
                          (profile.K(T / 2) > 0 ? 4.0 * profile.K0(T / 2) : 0.0);
  const double C = std::exp(integral);
  return run_jacobi([&](double t) { return 4.0 * profile.K(t / 2) / (t * t); }, 1.0, 0.0,
                    1.0, t_end, [](double t) { return t - 1; }, C,
                    [](double t) { return t; });
}

GronwallVerdict gronwall_oracle(const std::vector<std::pair<double, double>>& x_samples,
                                const DecayProfile& k_profile) {
  GronwallVerdict v;
  if (x_samples.size() < 3) throw HypothesisViolated("need at least 3 samples");
  const double x1 = x_samples.front().second;
  if (x_samples.front().first != 1.0)
    throw HypothesisViolated("samples must start at t = 1");
  if (x1 <= 0) throw HypothesisViolated("x must be positive");

  v.kappa = k_profile.K0(1.0);
  if (v.kappa >= 0.1) {
    v.violated = "int k/s >= 1/10";
    return v;
  }

  const size_t n = x_samples.size();
  // x(t) <= t x(1)
  for (const auto& [t, x] : x_samples) {
    if (x <= 0) {
      v.violated = "x not positive";
      return v;
    }
    if (x > t * x1 * (1 + 1e-9)) {
      v.violated = "x(t) <= t x(1) fails at t = " + std::to_string(t);
      return v;
    }
  }
  // x'(t) <= int_t^inf x k/s^2 (sampled integral + sublinear tail)
  const double t_last = x_samples.back().first;
  auto tail_int = [&](double from) {
    // int over samples, then x <= s x1 tail: x1 * K1-style remainder
    double acc = 0;
    for (size_t i = 0; i + 1 < n; ++i) {
      const auto& [ta, xa] = x_samples[i];
      const auto& [tb, xb] = x_samples[i + 1];
      if (tb <= from) continue;
      const double lo = std::max(from, ta);
      const double mid = 0.5 * (lo + tb);
      const double xm = xa + (xb - xa) * (mid - ta) / (tb - ta);
      acc += xm * k_profile.K(mid) / (mid * mid) * (tb - lo);
    }
    acc += x1 * k_profile.K0(t_last) / 1.0;  // x <= s x1: int x k/s^2 <= x1 int k/s
    return acc;
  };
  // forward differences: the mean of x' over [t_i, t_{i+1}] is below the
  // nonincreasing cap at t_i whenever the pointwise hypothesis holds
  for (size_t i = 0; i + 1 < n; ++i) {
    const double dx = (x_samples[i + 1].second - x_samples[i].second) /
                      (x_samples[i + 1].first - x_samples[i].first);
    const double cap = tail_int(x_samples[i].first);
    if (dx > cap + 1e-7 * std::max(1.0, std::abs(x1))) {
      v.violated = "x'(t) bound fails at t = " + std::to_string(x_samples[i].first);
      return v;
    }
  }
  v.hypotheses_ok = true;
  v.lemma_constant = 2.0 * std::exp(5.0 * v.kappa / (1.0 - 5.0 * v.kappa));
  double sup = 0;
  for (const auto& [t, x] : x_samples) sup = std::max(sup, x / x1);
  v.observed_sup = sup;
  v.bound_holds = sup <= v.lemma_constant * (1 + 1e-9);
  return v;
}

DecayFit decay_fit(const MetricModel& model, const std::function<Vec(double)>& ray_point,
                   double r_min, double r_max, int samples) {
  if (samples < 20) throw ConfigError("decay_fit: need at least 20 samples");
  DecayFit fit;
  fit.model = model.name();
  fit.r_min = r_min;
  fit.r_max = r_max;
  fit.samples = samples;
  std::vector<double> lr, lv, rv;
  for (int i = 0; i < samples; ++i) {
    const double r =
        r_min * std::pow(r_max / r_min, static_cast<double>(i) / (samples - 1));
    const Vec p = ray_point(r);
    const double rm = model.riemann(p).norm_frobenius;
    if (rm <= 1e-14)
      throw CurvatureUnderflow("decay_fit: |Rm| below 1e-14 at r = " + std::to_string(r));
    fit.data.push_back({r, rm});
    lr.push_back(std::log(r));
    lv.push_back(std::log(rm));
    rv.push_back(r);
  }
  auto ols = [](const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
      sx += x[i];
      sy += y[i];
      sxx += x[i] * x[i];
      sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icept = (sy - slope * sx) / n;
    double resid = 0;
    for (size_t i = 0; i < n; ++i)
      resid = std::max(resid, std::abs(y[i] - slope * x[i] - icept));
    return std::pair<double, double>(slope, resid);
  };
  auto [slope, resid] = ols(lr, lv);
  fit.slope = slope;
  fit.residual = resid;
  fit.exponential_rate = -ols(rv, lv).first;
  return fit;
}

double min_chord_distance(double theta, double r, double w, int kmax) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = -kmax; k <= kmax; ++k) {
    const double ang = w - 2 * M_PI * k * theta;
    const double chord = 2.0 * r * std::abs(std::sin(0.5 * ang));
    best = std::min(best, std::sqrt(static_cast<double>(k) * k + chord * chord));
  }
  return best;
}

TangentConeProbe tangent_cone_probe(double theta, const std::vector<double>& radii,
                                    int angular_samples, uint64_t seed) {
  TangentConeProbe probe;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uw(0.0, 2 * M_PI);
  std::vector<double> ws;
  for (int i = 0; i < angular_samples; ++i) ws.push_back(uw(rng));
  for (double r : radii) {
    const int kmax = static_cast<int>(std::ceil(20.0 * std::sqrt(r)));
    TangentConeProbe::Row row;
    row.radius = r;
    row.max_min_distance = 0;
    for (double w : ws)
      row.max_min_distance =
          std::max(row.max_min_distance, min_chord_distance(theta, r, w, kmax));
    row.ratio_to_sqrt_r = row.max_min_distance / std::sqrt(r);
    probe.max_ratio = std::max(probe.max_ratio, row.ratio_to_sqrt_r);
    probe.rows.push_back(row);
  }
  return probe;
}

HardyReport hardy_check(const std::function<double(double)>& phi,
                        const std::function<double(double)>& dphi, double a, double b,
                        double delta, double R0) {
  if (delta == -1) throw ConfigError("hardy_check: delta = -1 is excluded");
  if (R0 >= a) throw SupportViolation("hardy_check: support must lie right of R0");
  const double scale = std::max({std::abs(phi(0.5 * (a + b))), 1e-12});
  if (std::abs(phi(a)) > 1e-10 * scale || std::abs(phi(b)) > 1e-10 * scale ||
      std::abs(dphi(a)) > 1e-8 * scale || std::abs(dphi(b)) > 1e-8 * scale)
    throw SupportViolation("hardy_check: phi or phi' does not vanish at the ends");
  HardyReport rep;
  rep.lhs = integrate(
      [&](double t) { return phi(t) * phi(t) * std::pow(t - R0, delta); }, a, b, 1e-12);
  rep.rhs = integrate(
      [&](double t) { return dphi(t) * dphi(t) * std::pow(t - R0, delta + 2); }, a, b,
      1e-12);
  rep.ratio = rep.lhs / std::max(1e-300, rep.rhs);
  rep.bound = 4.0 / ((delta + 1) * (delta + 1));
  rep.holds = rep.ratio <= rep.bound + 1e-3;
  return rep;
}

double folded_angle(double w) {
  w = std::fmod(w, 2 * M_PI);
  if (w < 0) w += 2 * M_PI;
  return std::min(w, 2 * M_PI - w);
}

}  // namespace tale
