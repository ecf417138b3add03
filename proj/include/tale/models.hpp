#ifndef TALE_MODELS_HPP
#define TALE_MODELS_HPP

#include <map>
#include <memory>

#include "tale/metric.hpp"

namespace tale {

// Flat R^n.
class EuclideanModel : public MetricModel {
 public:
  explicit EuclideanModel(int n);
  Mat metric(const Vec& p) const override { return Mat::Identity(n_, n_); }
  bool in_domain(const Vec& p) const override { return p.size() == n_; }
  bool flat_chart() const override { return true; }
  bool has_analytic_derivatives() const override { return true; }
  void metric_derivatives(const Vec&, std::vector<Mat>& dg) const override {
    dg.assign(n_, Mat::Zero(n_, n_));
  }
  void metric_second_derivatives(const Vec&, std::vector<std::vector<Mat>>& d2g) const override {
    d2g.assign(n_, std::vector<Mat>(n_, Mat::Zero(n_, n_)));
  }
  Vec sample_domain(std::mt19937_64& rng) const override;
};

// Quotient of flat R^3 = C x R by the screw motion (z,t) -> (e^{2 pi theta i} z, t+1).
// The chart is the covering space; the deck group is cyclic.
class ScrewQuotientModel : public EuclideanModel {
 public:
  explicit ScrewQuotientModel(double theta);
  double theta() const { return theta_; }
  // Distance to the axis, the scale r in the loop-length formula.
  double radial_coordinate(const Vec& p) const override {
    return std::hypot(p[0], p[1]);
  }
  Vec sample_domain(std::mt19937_64& rng) const override;

 private:
  double theta_;
};

// Flat R^k x T^m presented on the covering chart R^{k+m}; the torus lattice is
// spanned by translation vectors.
class FlatTorusModel : public EuclideanModel {
 public:
  FlatTorusModel(int n, const std::vector<Vec>& lattice);
};

// Euclidean Schwarzschild in dimension 4:
//   g = f dtheta^2 + f^{-1} dr^2 + r^2 (du^2 + sin^2 u dv^2),  f = 1 - 2m/r.
// Chart order (theta, r, u, v); theta has period 8 pi m (deck generator).
class SchwarzschildModel : public MetricModel {
 public:
  explicit SchwarzschildModel(double mass);
  double mass() const { return mass_; }
  double horizon_radius() const { return 2.0 * mass_; }
  double fiber_period() const { return 8.0 * M_PI * mass_; }

  Mat metric(const Vec& p) const override;
  bool in_domain(const Vec& p) const override;
  double radial_coordinate(const Vec& p) const override { return p[1]; }
  bool has_analytic_derivatives() const override { return true; }
  void metric_derivatives(const Vec& p, std::vector<Mat>& dg) const override;
  void metric_second_derivatives(const Vec& p, std::vector<std::vector<Mat>>& d2g) const override;
  Vec sample_domain(std::mt19937_64& rng) const override;

 private:
  double mass_;
};

// Multi-Taub-NUT through the Gibbons-Hawking ansatz on R^3 x S^1:
//   g = V dx.dx + V^{-1} (dtau + omega)^2,
//   V = 1 + sum_j 2m/|x - x_j|,   omega = sum_j 2m ((z - z_j)/rho_j) dphi,
// centers x_j on the z-axis, tau period 8 pi m. Chart order (x, y, z, tau).
// The Dirac string along the axis is excluded by the domain guard.
class MultiTaubNutModel : public MetricModel {
 public:
  MultiTaubNutModel(double mass, std::vector<double> center_heights);
  double mass() const { return mass_; }
  double fiber_period() const { return 8.0 * M_PI * mass_; }
  int centers() const { return static_cast<int>(zs_.size()); }

  // V at a chart point (base coordinates only matter).
  double potential(const Vec& p) const;

  Mat metric(const Vec& p) const override;
  bool in_domain(const Vec& p) const override;
  double radial_coordinate(const Vec& p) const override {
    return p.head(3).norm();
  }
  bool has_analytic_derivatives() const override { return true; }
  void metric_derivatives(const Vec& p, std::vector<Mat>& dg) const override;
  void metric_second_derivatives(const Vec& p, std::vector<std::vector<Mat>>& d2g) const override;
  Vec sample_domain(std::mt19937_64& rng) const override;

 private:
  // Value, gradient and Hessian of V, omega_x, omega_y at base point (x,y,z).
  struct Fields;
  Fields fields(double x, double y, double z, int order) const;

  double mass_;
  std::vector<double> zs_;
  double axis_margin_ = 0.2;
  double center_margin_ = 0.5;
};

// Model factory for the CLI: name + parameter map.
std::shared_ptr<MetricModel> make_model(const std::string& name,
                                        const std::map<std::string, double>& params);

}  // namespace tale

#endif
