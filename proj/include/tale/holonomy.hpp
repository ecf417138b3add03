#ifndef TALE_HOLONOMY_HPP
#define TALE_HOLONOMY_HPP

#include <functional>

#include "tale/geodesic.hpp"

namespace tale {

// Geodesic loop with its holonomy motion. rotation is the parallel transport
// around the loop expressed in the fixed orthonormal frame at the base point;
// translation = rotation * (frame components of the initial velocity).
struct GeodesicLoop {
  Vec base;
  Vec initial_velocity;  // chart components, |.|_g = length
  double length = 0;
  Mat rotation;          // frame components, orthogonal
  Vec translation;       // frame components, |.|_2 = length
  std::optional<Word> word;

  bool is_identity() const { return length == 0; }
};

struct HolonomyConfig {
  double kappa = 0.25;                 // loop-length fraction of r, in (0, 1/2)
  double C_H = M_PI / 2;               // scaled-rotation constant
  double Theta_H = 1.5;                // flat-norm threshold, < pi/2 is the paper regime
  std::function<double(double)> epsilon_profile = [](double r) {
    return 1.0 / std::sqrt(r);
  };
  double Lambda = 0.0;                 // curvature sup scale (0 = derive per model)
  double epsilon0 = M_PI / 100;

  void validate() const {
    if (!(kappa > 0 && kappa < 0.5)) throw ConfigError("holonomy config: kappa must lie in (0, 1/2)");
    if (!(Theta_H > 0 && Theta_H < M_PI / 2)) throw ConfigError("holonomy config: Theta_H must lie in (0, pi/2)");
    if (!(C_H > 0)) throw ConfigError("holonomy config: C_H must be positive");
  }
};

// Maximal principal rotation angle in [0, pi] (largest |arg| over eigenvalues).
// Angles below 1e-12 are clamped to 0. Throws NotOrthogonal.
double rotation_angle_norm(const Mat& r);

// |r - I| = max over unit v of |rv - v| (largest singular value of r - I).
double matrix_deviation(const Mat& r);

// Loop realized by the word's deck transformation: geodesic from the lift of q
// to its deck image, rotation = (deck differential)^{-1} o parallel transport.
GeodesicLoop loop_from_deck(const MetricModel& model, const Vec& q, const Word& word,
                            double tol = 1e-10);

enum class LoopSearchStrategy { DeckEnumeration, ShootingSearch };

struct LoopSearchResult {
  std::vector<GeodesicLoop> loops;
  bool complete = true;          // deck enumeration on flat covers is complete
  std::string incomplete_note;   // IncompleteSearch warning payload
};

// All nontrivial loops at q of length < radius (deck strategy), or a
// best-effort list (shooting). The identity loop is not included.
LoopSearchResult find_loops(const MetricModel& model, const Vec& q, double radius,
                            LoopSearchStrategy strategy = LoopSearchStrategy::DeckEnumeration);

struct HolonomyConditionRow {
  double radius = 0;
  int loop_count = 0;
  double sup_rot_norm = 0;      // sup ||r(gamma)||
  double sup_scaled = 0;        // sup r ||r|| / L
  bool hc_pass = true;          // sup ||r|| <= Theta_H
  bool hcprime_pass = true;     // sup r||r||/L <= C_H
  bool shc_pass = true;         // sup ||r|| <= epsilon(r)
};

struct HolonomyConditionReport {
  std::vector<HolonomyConditionRow> rows;
  bool hc_pass = true, hcprime_pass = true, shc_pass = true;
};

// Evaluates (HC), (HC'), (SHC) along a ray: at each radius the base point is
// the ray point at that radial coordinate and loops of length < kappa*r are
// examined.
HolonomyConditionReport check_holonomy_conditions(const MetricModel& model,
                                                  const CurvePath& ray,
                                                  const HolonomyConfig& config,
                                                  const std::vector<double>& radii);

// Verifies the loop invariants (|t| = L, rotation orthogonal, loop closes up)
// and returns the worst defect.
double loop_consistency_defect(const MetricModel& model, const GeodesicLoop& loop);

}  // namespace tale

#endif
