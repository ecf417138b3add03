#ifndef TALE_ASYMPTOTICS_HPP
#define TALE_ASYMPTOTICS_HPP

#include <functional>

#include "tale/geodesic.hpp"

namespace tale {

// Nonincreasing curvature-decay profile K with its tail integrals
//   K0(t) = int_t^inf K(s)/s ds,   K1(t) = int_t^inf K(s)/s^2 ds.
// Declared tail forms keep the improper integrals honest: quadrature runs to a
// cutoff and the remainder is bounded analytically.
class DecayProfile {
 public:
  enum class Form { Power, PowerShifted, LogSq, Constant, Custom };

  static DecayProfile power(double exponent);          // K(s) = s^-e (s > 0)
  static DecayProfile power_shifted(double exponent);  // K(s) = (1+s)^-e
  static DecayProfile log_squared();                   // K(s) = 1/(1+log(1+s))^2
  static DecayProfile constant(double value);
  static DecayProfile custom(std::function<double(double)> k, double tail_exponent);

  double K(double s) const { return k_(s); }
  double K0(double t) const;
  double K1(double t) const;
  // fitted sup of r^2 |Rm| / K(r) over a sample set
  double af_constant(const MetricModel& model, const std::vector<Vec>& points) const;

  Form form() const { return form_; }

 private:
  DecayProfile(Form f, std::function<double(double)> k, double e)
      : form_(f), k_(std::move(k)), exponent_(e) {}
  double tail(double T, int extra_power) const;  // bound on int_T^inf K/s^{1+extra}
  Form form_;
  std::function<double(double)> k_;
  double exponent_ = 0;
};

// Adaptive Simpson quadrature (shared small utility).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10, int max_depth = 48);

struct JacobiReport {
  std::vector<double> t;
  std::vector<double> J;
  double envelope_constant = 0;  // C with lower(t) <= J <= C * upper_shape(t)
  double min_ratio = 0;          // min J / lower envelope
  double max_ratio = 0;          // max J / t
  bool bounds_hold = false;
};

// J'' = C0 K(t)/(1+t)^2 J, J(0)=0, J'(0)=1; asserts t <= J <= C1 t with
// C1 = exp(C0 int_0^inf t K/(1+t)^2 dt).
JacobiReport jacobi_compare(const DecayProfile& profile, double C0, double t_end = 1e3);

// J'' = 4 t^{-2} K(t/2) J, J(1)=0, J'(1)=1; asserts t-1 <= J <= C t.
JacobiReport jacobi_compare_halfscale(const DecayProfile& profile, double t_end = 1e3);

struct GronwallVerdict {
  bool hypotheses_ok = false;
  std::string violated;
  double kappa = 0;          // int_1^inf k/s ds
  double lemma_constant = 0; // certified sup bound: 2 exp(5 kappa / (1 - 5 kappa))
  double observed_sup = 0;   // sup x(t) / x(1)
  bool bound_holds = false;
};

// Gronwall-type lemma oracle on sampled x(t): checks x(t) <= t x(1),
// x'(t) <= int_t^inf x k / s^2 ds, int k/s < 1/10, then certifies
// sup x <= C x(1) with the explicit iteration constant.
GronwallVerdict gronwall_oracle(const std::vector<std::pair<double, double>>& x_samples,
                                const DecayProfile& k_profile);

struct DecayFit {
  std::string model;
  double r_min = 0, r_max = 0;
  int samples = 0;
  double slope = 0;          // log|Rm| vs log r
  double residual = 0;       // max abs fit residual
  double exponential_rate = 0;  // delta of log|Rm| vs r (reported, optional use)
  std::vector<std::pair<double, double>> data;  // (r, |Rm|)
};

// Least-squares decay exponent of |Rm| along a radial ray sampled log-spaced.
// ray_point(r) must produce a chart point with radial coordinate r.
DecayFit decay_fit(const MetricModel& model, const std::function<Vec(double)>& ray_point,
                   double r_min, double r_max, int samples = 40);

struct TangentConeProbe {
  struct Row {
    double radius;
    double max_min_distance;  // max over angle pairs of min_k chord distance
    double ratio_to_sqrt_r;
  };
  std::vector<Row> rows;
  double max_ratio = 0;
};

// min over |k| <= kmax of sqrt(k^2 + r^2 |e^{i(w - 2 pi k theta)} - 1|^2).
double min_chord_distance(double theta, double r, double w, int kmax);

// Chord-distance probe of the blow-down geometry of the screw quotient:
// d((r,0),(r e^{iw}, 0)) <= min_k chord distance, kmax = ceil(20 sqrt r).
TangentConeProbe tangent_cone_probe(double theta, const std::vector<double>& radii,
                                    int angular_samples, uint64_t seed);

struct HardyReport {
  double lhs = 0;   // int phi^2 (t-R0)^delta
  double rhs = 0;   // int (phi')^2 (t-R0)^{delta+2}
  double ratio = 0;
  double bound = 0;  // 4/(delta+1)^2
  bool holds = false;
};

// Hardy-inequality check for a compactly supported C^2 bump on [a, b].
HardyReport hardy_check(const std::function<double(double)>& phi,
                        const std::function<double(double)>& dphi, double a, double b,
                        double delta, double R0);

// Power-loop mechanism of the HC => HC' upgrade on flat quotients: the k-th
// power of a loop folds its rotation angle exactly (mod 2 pi).
double folded_angle(double w);

}  // namespace tale

#endif
