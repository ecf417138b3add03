#ifndef TALE_PSEUDOGROUP_HPP
#define TALE_PSEUDOGROUP_HPP

#include <map>

#include "tale/holonomy.hpp"

namespace tale {

// Fundamental pseudo-group at a base point: the identity plus all geodesic
// loops of length < radius, with Gromov's product realized through deck words.
class PseudoGroup {
 public:
  PseudoGroup(const MetricModel& model, Vec base, double radius,
              LoopSearchStrategy strategy = LoopSearchStrategy::DeckEnumeration);

  const MetricModel& model() const { return *model_; }
  const Vec& base() const { return base_; }
  double radius() const { return radius_; }
  size_t size() const { return elements_.size(); }
  const GeodesicLoop& element(size_t i) const { return elements_[i]; }
  const std::vector<GeodesicLoop>& elements() const { return elements_; }
  size_t identity_index() const { return identity_; }
  bool search_complete() const { return complete_; }

  // Gromov product a*b ("b followed by a"); nullopt when the composition
  // leaves the radius. Results are cached.
  std::optional<size_t> product(size_t a, size_t b) const;
  std::optional<size_t> inverse(size_t a) const;
  std::optional<size_t> commutator(size_t a, size_t b) const;

  // Index of the element with the given word, constructing it if its loop
  // stays within the radius.
  std::optional<size_t> index_of_word(const Word& w) const;

  struct AbelianReport {
    bool abelian = true;
    double worst_commutator_translation = 0;
  };
  AbelianReport abelian_report() const;

 private:
  const MetricModel* model_;
  Vec base_;
  double radius_;
  bool complete_ = true;
  std::vector<GeodesicLoop> elements_;
  size_t identity_ = 0;
  mutable std::map<std::vector<int>, size_t> word_index_;
  mutable std::map<std::pair<size_t, size_t>, std::optional<size_t>> product_cache_;
};

struct TraceSample {
  double t;
  Vec base;
  double l;              // loop length
  double rot_norm;       // ||r(t)||
  Mat rot_transported;   // rotation in the frame transported along the curve
  Vec translation;       // frame components at the current point
};

struct SlidingTrace {
  const MetricModel* model = nullptr;
  std::optional<Word> word;
  std::vector<TraceSample> samples;
  bool radius_guard_satisfied = true;  // l(t) < kappa_guard * r(t) everywhere

  double max_rot_norm_drift() const;
  // Least-squares fit l(t) ~ L + c/t over the trailing fraction of the trace;
  // returns (L, max residual).
  std::pair<double, double> fitted_length_limit(double tail_fraction = 0.5) const;
};

struct SlideOptions {
  int samples = 200;
  double kappa_guard = 0.45;   // regime condition l(t) < kappa_guard * r(t)
  bool abort_on_guard = false; // throw LoopEscapedRadius instead of tracking
  double tol = 1e-10;
  bool with_rotation = true;   // rotation transport can be disabled for speed
};

// Sliding of a deck-word loop along a curve: at each curve point the loop is
// the geodesic from the lift to its deck image (exact lift bookkeeping in the
// covering chart).
SlidingTrace slide(const MetricModel& model, const GeodesicLoop& loop,
                   const CurvePath& curve, const SlideOptions& opt = {});

// Pairwise angle between the translations of two traces sampled on the same grid.
std::vector<std::pair<double, double>> pairwise_angles(const SlidingTrace& a,
                                                       const SlidingTrace& b);

// Endpoint check of Prop-style product preservation: slide(a)*slide(b) vs
// slide(a*b), compared through the holonomy motions at the end of the curve.
struct ProductSlideReport {
  bool holds = true;
  double rotation_defect = 0;
  double translation_defect = 0;
};
ProductSlideReport slide_preserves_product(const MetricModel& model,
                                           const GeodesicLoop& a, const GeodesicLoop& b,
                                           const CurvePath& curve,
                                           const SlideOptions& opt = {});

// Transitivity check: re-slides from an interior sample and compares endpoints.
double sliding_transitivity_defect(const MetricModel& model, const GeodesicLoop& loop,
                                   const CurvePath& curve, const SlideOptions& opt = {});

}  // namespace tale

#endif
