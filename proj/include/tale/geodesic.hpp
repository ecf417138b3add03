#ifndef TALE_GEODESIC_HPP
#define TALE_GEODESIC_HPP

#include <functional>

#include "tale/metric.hpp"

namespace tale {

struct PathSample {
  double t;  // arc-length (geodesics) or curve parameter
  Vec point;
  Vec velocity;
};

// Sampled curve on a model. Geodesic paths are arc-length parametrized with
// unit speed; synthetic paths carry whatever parametrization they were built with.
struct CurvePath {
  const MetricModel* model = nullptr;
  std::vector<PathSample> samples;
  double arc_length = 0;
  double tolerance_used = 0;
  bool is_geodesic = false;

  const Vec& start() const { return samples.front().point; }
  const Vec& end() const { return samples.back().point; }
  double speed_drift() const;  // max relative |gamma'|_g deviation over samples

  // Cubic Hermite interpolation between stored samples.
  Vec point_at(double t) const;
  Vec velocity_at(double t) const;

  static CurvePath from_function(const MetricModel& model,
                                 const std::function<Vec(double)>& gamma, double t0,
                                 double t1, int samples);
};

struct FrameTransport {
  CurvePath path;
  Mat initial_frame;      // chart components, columns
  Mat transported_frame;  // chart components at path end
  double orthonormality_defect = 0;
};

struct IntegrationOptions {
  double tol = 1e-10;
  double max_step = 0.0;      // 0 = no cap
  int max_steps = 2'000'000;
};

// Arc-length geodesic integration from p with initial direction v (any nonzero
// g-norm; direction is normalized). Optionally transports frame columns in the
// same pass. Throws LeftDomain / StepUnderflow.
CurvePath integrate_geodesic(const MetricModel& model, const Vec& p, const Vec& v,
                             double length, const IntegrationOptions& opt = {});
CurvePath integrate_geodesic_with_frame(const MetricModel& model, const Vec& p,
                                        const Vec& v, double length, const Mat& frame,
                                        Mat& frame_out,
                                        const IntegrationOptions& opt = {});

// exp_p(v): endpoint of the geodesic with initial velocity v and length |v|_g.
Vec exp_map(const MetricModel& model, const Vec& p, const Vec& v,
            const IntegrationOptions& opt = {});

struct LogOptions {
  double tol = 1e-9;
  int max_iterations = 60;
  int multistart = 8;  // used only when no initial guess is supplied
};

// Shooting inverse of exp_map. With an initial guess a single Gauss-Newton run
// is used; otherwise multistart over perturbed chord directions, surfacing
// AmbiguousSolution when distinct solutions appear.
Vec log_map(const MetricModel& model, const Vec& p, const Vec& q_target,
            const std::optional<Vec>& initial_guess = std::nullopt,
            const LogOptions& opt = {});

// Parallel transport of an orthonormal frame along a sampled path (RK4 over
// Hermite-interpolated segments; exact for flat charts).
FrameTransport parallel_transport(const MetricModel& model, const CurvePath& path,
                                  const Mat& frame);

}  // namespace tale

#endif
