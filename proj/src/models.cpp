#include "tale/models.hpp"

#include <cmath>

namespace tale {

namespace {
Mat rot_z(double angle, int n) {
  Mat R = Mat::Identity(n, n);
  R(0, 0) = std::cos(angle);
  R(0, 1) = -std::sin(angle);
  R(1, 0) = std::sin(angle);
  R(1, 1) = std::cos(angle);
  return R;
}
}  // namespace

EuclideanModel::EuclideanModel(int n) : MetricModel("euclidean", n) {
  if (n < 2) throw ConfigError("model dimension must be >= 2");
  set_mode(ChristoffelMode::Analytic);
}

Vec EuclideanModel::sample_domain(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  Vec p(n_);
  for (int i = 0; i < n_; ++i) p[i] = u(rng);
  return p;
}

ScrewQuotientModel::ScrewQuotientModel(double theta) : EuclideanModel(3), theta_(theta) {
  name_ = "screw";
  DeckGenerator tau{rot_z(2.0 * M_PI * theta, 3), Vec::Zero(3)};
  tau.trans[2] = 1.0;
  set_deck(DeckPresentation(DeckPresentation::Kind::FlatCyclic, {tau}));
}

Vec ScrewQuotientModel::sample_domain(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  Vec p(3);
  do {
    for (int i = 0; i < 3; ++i) p[i] = u(rng);
  } while (std::hypot(p[0], p[1]) < 0.2);
  return p;
}

FlatTorusModel::FlatTorusModel(int n, const std::vector<Vec>& lattice) : EuclideanModel(n) {
  name_ = "flat-torus";
  std::vector<DeckGenerator> gens;
  for (const Vec& v : lattice) {
    if (v.size() != n) throw ConfigError("flat-torus: lattice vector dimension mismatch");
    gens.push_back({Mat::Identity(n, n), v});
  }
  if (gens.empty()) throw ConfigError("flat-torus: empty lattice");
  set_deck(DeckPresentation(DeckPresentation::Kind::FlatLattice, std::move(gens)));
}

SchwarzschildModel::SchwarzschildModel(double mass)
    : MetricModel("schwarzschild", 4), mass_(mass) {
  if (mass <= 0) throw ConfigError("schwarzschild: mass must be positive");
  set_mode(ChristoffelMode::Analytic);
  DeckGenerator fiber{Mat::Identity(4, 4), Vec::Zero(4)};
  fiber.trans[0] = fiber_period();
  set_deck(DeckPresentation(DeckPresentation::Kind::FiberPeriod, {fiber}));
}

Mat SchwarzschildModel::metric(const Vec& p) const {
  const double r = p[1], u = p[2];
  const double f = 1.0 - 2.0 * mass_ / r;
  Mat g = Mat::Zero(4, 4);
  g(0, 0) = f;
  g(1, 1) = 1.0 / f;
  g(2, 2) = r * r;
  g(3, 3) = r * r * std::sin(u) * std::sin(u);
  return g;
}

bool SchwarzschildModel::in_domain(const Vec& p) const {
  if (p.size() != 4) return false;
  const double r = p[1], u = p[2];
  return r >= 1.05 * horizon_radius() && u >= 0.05 && u <= M_PI - 0.05;
}

void SchwarzschildModel::metric_derivatives(const Vec& p, std::vector<Mat>& dg) const {
  const double r = p[1], u = p[2];
  const double fp = 2.0 * mass_ / (r * r);
  const double f = 1.0 - 2.0 * mass_ / r;
  dg.assign(4, Mat::Zero(4, 4));
  dg[1](0, 0) = fp;
  dg[1](1, 1) = -fp / (f * f);
  dg[1](2, 2) = 2.0 * r;
  dg[1](3, 3) = 2.0 * r * std::sin(u) * std::sin(u);
  dg[2](3, 3) = r * r * std::sin(2.0 * u);
}

void SchwarzschildModel::metric_second_derivatives(const Vec& p,
                                                   std::vector<std::vector<Mat>>& d2g) const {
  const double r = p[1], u = p[2];
  const double f = 1.0 - 2.0 * mass_ / r;
  const double fp = 2.0 * mass_ / (r * r);
  const double fpp = -4.0 * mass_ / (r * r * r);
  d2g.assign(4, std::vector<Mat>(4, Mat::Zero(4, 4)));
  d2g[1][1](0, 0) = fpp;
  d2g[1][1](1, 1) = (2.0 * fp * fp - f * fpp) / (f * f * f);
  d2g[1][1](2, 2) = 2.0;
  d2g[1][1](3, 3) = 2.0 * std::sin(u) * std::sin(u);
  d2g[1][2](3, 3) = 2.0 * r * std::sin(2.0 * u);
  d2g[2][1](3, 3) = d2g[1][2](3, 3);
  d2g[2][2](3, 3) = 2.0 * r * r * std::cos(2.0 * u);
}

Vec SchwarzschildModel::sample_domain(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> ur(1.5 * horizon_radius(), 100.0);
  std::uniform_real_distribution<double> uu(0.3, M_PI - 0.3);
  std::uniform_real_distribution<double> uv(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> ut(0.0, fiber_period());
  Vec p(4);
  p << ut(rng), ur(rng), uu(rng), uv(rng);
  return p;
}

struct MultiTaubNutModel::Fields {
  double V = 0;
  Vec dV = Vec::Zero(3);
  Mat d2V = Mat::Zero(3, 3);
  double wx = 0, wy = 0;
  Vec dwx = Vec::Zero(3), dwy = Vec::Zero(3);
  Mat d2wx = Mat::Zero(3, 3), d2wy = Mat::Zero(3, 3);
};

MultiTaubNutModel::MultiTaubNutModel(double mass, std::vector<double> center_heights)
    : MetricModel(center_heights.size() > 1 ? "multi-taub-nut" : "taub-nut", 4),
      mass_(mass), zs_(std::move(center_heights)) {
  if (mass <= 0) throw ConfigError("taub-nut: mass must be positive");
  if (zs_.empty()) throw ConfigError("taub-nut: need at least one center");
  set_mode(ChristoffelMode::Analytic);
  DeckGenerator fiber{Mat::Identity(4, 4), Vec::Zero(4)};
  fiber.trans[3] = fiber_period();
  set_deck(DeckPresentation(DeckPresentation::Kind::FiberPeriod, {fiber}));
}

double MultiTaubNutModel::potential(const Vec& p) const {
  double V = 1.0;
  for (double zj : zs_) {
    const double rho = std::sqrt(p[0] * p[0] + p[1] * p[1] + (p[2] - zj) * (p[2] - zj));
    V += 2.0 * mass_ / rho;
  }
  return V;
}

MultiTaubNutModel::Fields MultiTaubNutModel::fields(double x, double y, double z,
                                                    int order) const {
  Fields f;
  f.V = 1.0;
  const double R2 = x * x + y * y;
  double S = 0;
  Vec dS = Vec::Zero(3);
  Mat d2S = Mat::Zero(3, 3);
  for (double zj : zs_) {
    const double w = z - zj;
    Vec r(3);
    r << x, y, w;
    const double rho2 = R2 + w * w;
    const double rho = std::sqrt(rho2);
    const double i3 = 1.0 / (rho2 * rho);
    const double i5 = i3 / rho2;
    f.V += 2.0 * mass_ / rho;
    S += w / rho;
    if (order >= 1) {
      f.dV -= 2.0 * mass_ * i3 * r;
      dS[0] += -w * x * i3;
      dS[1] += -w * y * i3;
      dS[2] += R2 * i3;
    }
    if (order >= 2) {
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          f.d2V(a, b) += 2.0 * mass_ * (3.0 * r[a] * r[b] * i5 - (a == b ? i3 : 0.0));
          double v = 3.0 * w * r[a] * r[b] * i5 - (a == b ? w * i3 : 0.0);
          if (a == 2) v -= r[b] * i3;
          if (b == 2) v -= r[a] * i3;
          d2S(a, b) += v;
        }
    }
  }
  // omega = A (x dy - y dx), A = 2m S / R^2.
  const double invR2 = 1.0 / R2;
  const double A = 2.0 * mass_ * S * invR2;
  f.wx = -A * y;
  f.wy = A * x;
  if (order >= 1) {
    Vec dinv(3);
    dinv << -2.0 * x * invR2 * invR2, -2.0 * y * invR2 * invR2, 0.0;
    Vec dA = 2.0 * mass_ * (dS * invR2 + S * dinv);
    f.dwx = -dA * y;
    f.dwx[1] -= A;
    f.dwy = dA * x;
    f.dwy[0] += A;
    if (order >= 2) {
      Mat d2inv = Mat::Zero(3, 3);
      const double invR6 = invR2 * invR2 * invR2;
      d2inv(0, 0) = (-2.0 * R2 + 8.0 * x * x) * invR6;
      d2inv(1, 1) = (-2.0 * R2 + 8.0 * y * y) * invR6;
      d2inv(0, 1) = d2inv(1, 0) = 8.0 * x * y * invR6;
      Mat d2A = 2.0 * mass_ *
                (d2S * invR2 + dS * dinv.transpose() + dinv * dS.transpose() + S * d2inv);
      f.d2wx = -d2A * y;
      f.d2wy = d2A * x;
      for (int a = 0; a < 3; ++a) {
        f.d2wx(a, 1) -= dA[a];
        f.d2wx(1, a) -= dA[a];
        f.d2wy(a, 0) += dA[a];
        f.d2wy(0, a) += dA[a];
      }
    }
  }
  return f;
}

Mat MultiTaubNutModel::metric(const Vec& p) const {
  Fields f = fields(p[0], p[1], p[2], 0);
  const double W = 1.0 / f.V;
  Vec omega(3);
  omega << f.wx, f.wy, 0.0;
  Mat g = Mat::Zero(4, 4);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) g(a, b) = (a == b ? f.V : 0.0) + W * omega[a] * omega[b];
    g(a, 3) = g(3, a) = W * omega[a];
  }
  g(3, 3) = W;
  return g;
}

bool MultiTaubNutModel::in_domain(const Vec& p) const {
  if (p.size() != 4) return false;
  if (std::hypot(p[0], p[1]) < axis_margin_) return false;
  for (double zj : zs_) {
    const double rho =
        std::sqrt(p[0] * p[0] + p[1] * p[1] + (p[2] - zj) * (p[2] - zj));
    if (rho < center_margin_) return false;
  }
  return true;
}

void MultiTaubNutModel::metric_derivatives(const Vec& p, std::vector<Mat>& dg) const {
  Fields f = fields(p[0], p[1], p[2], 1);
  const double W = 1.0 / f.V;
  Vec dW = -W * W * f.dV;
  Vec omega(3);
  omega << f.wx, f.wy, 0.0;
  Mat domega = Mat::Zero(3, 3);  // domega(c,a) = d_c omega_a
  domega.col(0) = f.dwx;
  domega.col(1) = f.dwy;
  dg.assign(4, Mat::Zero(4, 4));
  for (int c = 0; c < 3; ++c) {
    Mat& m = dg[c];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b)
        m(a, b) = (a == b ? f.dV[c] : 0.0) + dW[c] * omega[a] * omega[b] +
                  W * (domega(c, a) * omega[b] + omega[a] * domega(c, b));
      m(a, 3) = m(3, a) = dW[c] * omega[a] + W * domega(c, a);
    }
    m(3, 3) = dW[c];
  }
}

void MultiTaubNutModel::metric_second_derivatives(const Vec& p,
                                                  std::vector<std::vector<Mat>>& d2g) const {
  Fields f = fields(p[0], p[1], p[2], 2);
  const double W = 1.0 / f.V;
  Vec dW = -W * W * f.dV;
  Mat d2W = 2.0 * W * W * W * f.dV * f.dV.transpose() - W * W * f.d2V;
  Vec omega(3);
  omega << f.wx, f.wy, 0.0;
  Mat domega = Mat::Zero(3, 3);
  domega.col(0) = f.dwx;
  domega.col(1) = f.dwy;
  std::vector<Mat> d2omega(3, Mat::Zero(3, 3));  // d2omega[a](c,d)
  d2omega[0] = f.d2wx;
  d2omega[1] = f.d2wy;
  d2g.assign(4, std::vector<Mat>(4, Mat::Zero(4, 4)));
  for (int c = 0; c < 3; ++c)
    for (int d = 0; d < 3; ++d) {
      Mat& m = d2g[c][d];
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b)
          m(a, b) = (a == b ? f.d2V(c, d) : 0.0) + d2W(c, d) * omega[a] * omega[b] +
                    dW[c] * (domega(d, a) * omega[b] + omega[a] * domega(d, b)) +
                    dW[d] * (domega(c, a) * omega[b] + omega[a] * domega(c, b)) +
                    W * (d2omega[a](c, d) * omega[b] + domega(c, a) * domega(d, b) +
                         domega(d, a) * domega(c, b) + omega[a] * d2omega[b](c, d));
        m(a, 3) = m(3, a) = d2W(c, d) * omega[a] + dW[c] * domega(d, a) +
                            dW[d] * domega(c, a) + W * d2omega[a](c, d);
      }
      m(3, 3) = d2W(c, d);
    }
}

Vec MultiTaubNutModel::sample_domain(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> shell(3.0, 60.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> cosu(-0.9, 0.9);
  std::uniform_real_distribution<double> tau(0.0, fiber_period());
  Vec p(4);
  while (true) {
    const double rho = shell(rng), phi = angle(rng), cu = cosu(rng);
    const double su = std::sqrt(1.0 - cu * cu);
    p << rho * su * std::cos(phi), rho * su * std::sin(phi), rho * cu, tau(rng);
    if (in_domain(p)) return p;
  }
}

std::shared_ptr<MetricModel> make_model(const std::string& name,
                                        const std::map<std::string, double>& params) {
  auto get = [&](const std::string& key, double dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
  };
  if (name == "euclidean") {
    return std::make_shared<EuclideanModel>(static_cast<int>(get("n", 3)));
  }
  if (name == "screw") {
    return std::make_shared<ScrewQuotientModel>(get("theta", 1.0 / 3.0));
  }
  if (name == "flat-torus") {
    const int n = static_cast<int>(get("n", 4));
    const int m = static_cast<int>(get("m", 2));
    const double side = get("side", 1.0);
    if (m < 1 || m > n) throw ConfigError("flat-torus: need 1 <= m <= n");
    std::vector<Vec> lattice;
    for (int i = 0; i < m; ++i) {
      Vec v = Vec::Zero(n);
      v[n - m + i] = side;
      lattice.push_back(v);
    }
    return std::make_shared<FlatTorusModel>(n, lattice);
  }
  if (name == "schwarzschild") {
    if (params.count("n") && static_cast<int>(params.at("n")) != 4)
      throw ConfigError("schwarzschild: only the 4-dimensional chart is provided");
    return std::make_shared<SchwarzschildModel>(get("m", 1.0));
  }
  if (name == "taub-nut") {
    return std::make_shared<MultiTaubNutModel>(get("m", 1.0), std::vector<double>{0.0});
  }
  if (name == "multi-taub-nut") {
    const int k = static_cast<int>(get("centers", 2));
    const double spacing = get("spacing", 1.0);
    std::vector<double> zs;
    for (int i = 0; i < k; ++i) zs.push_back(spacing * (2.0 * i - (k - 1)));
    return std::make_shared<MultiTaubNutModel>(get("m", 1.0), zs);
  }
  throw ConfigError("unknown model: " + name);
}

}  // namespace tale
