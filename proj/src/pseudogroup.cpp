#include "tale/pseudogroup.hpp"

#include <algorithm>
#include <cmath>

namespace tale {

namespace {
std::vector<int> key_of(const Word& w) {
  return std::vector<int>(w.data(), w.data() + w.size());
}
}  // namespace

PseudoGroup::PseudoGroup(const MetricModel& model, Vec base, double radius,
                         LoopSearchStrategy strategy)
    : model_(&model), base_(std::move(base)), radius_(radius) {
  GeodesicLoop id;
  const int n = model.dim();
  id.base = base_;
  id.initial_velocity = Vec::Zero(n);
  id.length = 0;
  id.rotation = Mat::Identity(n, n);
  id.translation = Vec::Zero(n);
  if (model.deck()) id.word = Word::Zero(model.deck()->rank());
  elements_.push_back(std::move(id));
  identity_ = 0;

  if (model.deck()) {
    auto search = find_loops(model, base_, radius, strategy);
    complete_ = search.complete;
    for (auto& loop : search.loops) elements_.push_back(std::move(loop));
  }
  for (size_t i = 0; i < elements_.size(); ++i)
    if (elements_[i].word) word_index_[key_of(*elements_[i].word)] = i;
}

std::optional<size_t> PseudoGroup::index_of_word(const Word& w) const {
  auto it = word_index_.find(key_of(w));
  if (it != word_index_.end()) return it->second;
  GeodesicLoop loop = loop_from_deck(*model_, base_, w);
  if (loop.length >= radius_) return std::nullopt;
  // Completes lazily for incomplete searches; enumeration order stays fixed.
  auto& self = const_cast<PseudoGroup&>(*this);
  self.elements_.push_back(std::move(loop));
  word_index_[key_of(w)] = elements_.size() - 1;
  return elements_.size() - 1;
}

std::optional<size_t> PseudoGroup::product(size_t a, size_t b) const {
  auto key = std::make_pair(a, b);
  auto cached = product_cache_.find(key);
  if (cached != product_cache_.end()) return cached->second;
  std::optional<size_t> result;
  const auto& ea = elements_[a];
  const auto& eb = elements_[b];
  if (ea.word && eb.word) {
    Word w = *ea.word + *eb.word;
    result = index_of_word(w);
  } else if (a == identity_) {
    result = b;
  } else if (b == identity_) {
    result = a;
  }
  product_cache_[key] = result;
  return result;
}

std::optional<size_t> PseudoGroup::inverse(size_t a) const {
  const auto& ea = elements_[a];
  if (!ea.word) return a == identity_ ? std::optional<size_t>(identity_) : std::nullopt;
  Word w = -*ea.word;
  return index_of_word(w);
}

std::optional<size_t> PseudoGroup::commutator(size_t a, size_t b) const {
  auto ab = product(a, b);
  if (!ab) throw OutOfRadius("commutator: a*b leaves the pseudo-group radius");
  auto ai = inverse(a);
  auto bi = inverse(b);
  if (!ai || !bi) throw OutOfRadius("commutator: inverse leaves the pseudo-group radius");
  auto p = product(*ab, *ai);
  if (!p) throw OutOfRadius("commutator: a*b*a^-1 leaves the pseudo-group radius");
  auto q = product(*p, *bi);
  if (!q) throw OutOfRadius("commutator: a*b*a^-1*b^-1 leaves the pseudo-group radius");
  return q;
}

PseudoGroup::AbelianReport PseudoGroup::abelian_report() const {
  AbelianReport rep;
  const size_t N = elements_.size();  // commutators may append lazily
  for (size_t a = 0; a < N; ++a)
    for (size_t b = a + 1; b < N; ++b) {
      std::optional<size_t> c;
      try {
        c = commutator(a, b);
      } catch (const OutOfRadius&) {
        continue;
      }
      if (!c) continue;
      const double tn = elements_[*c].translation.norm();
      rep.worst_commutator_translation = std::max(rep.worst_commutator_translation, tn);
      if (*c != identity_) rep.abelian = false;
    }
  return rep;
}

namespace {

// One sliding step: loop data of `word` at chart point a.
struct SlidResult {
  Vec v;       // chart initial velocity of the loop geodesic
  double l;
  Mat r_chart; // holonomy in chart components
};

SlidResult slide_at(const MetricModel& model, const Word& word, const Vec& a,
                    const std::optional<Vec>& guess, bool with_rotation, double tol) {
  const auto* deck = model.deck();
  const int n = model.dim();
  SlidResult out;
  const Vec target = deck->apply(word, a);
  auto [Q, tv] = deck->motion(word);
  (void)tv;
  if (model.flat_chart()) {
    out.v = target - a;
    out.l = out.v.norm();
    out.r_chart = Q.transpose();
    return out;
  }
  LogOptions lopt;
  lopt.tol = tol;
  out.v = log_map(model, a, target, guess ? guess : std::optional<Vec>(target - a), lopt);
  out.l = model.norm(a, out.v);
  if (with_rotation) {
    Mat f1;
    IntegrationOptions iopt;
    iopt.tol = std::min(1e-10, tol);
    integrate_geodesic_with_frame(model, a, out.v, out.l, Mat::Identity(n, n), f1, iopt);
    out.r_chart = Q.transpose() * f1;
  } else {
    out.r_chart = Mat::Identity(n, n);
  }
  return out;
}

}  // namespace

SlidingTrace slide(const MetricModel& model, const GeodesicLoop& loop,
                   const CurvePath& curve, const SlideOptions& opt) {
  if (!loop.word || !model.deck())
    throw NoDeckGroup("slide: loop carries no deck word (sliding runs in the cover)");
  const Word word = *loop.word;
  const int n = model.dim();

  SlidingTrace trace;
  trace.model = &model;
  trace.word = word;

  const double t0 = curve.samples.front().t;
  const double t1 = curve.samples.back().t;
  std::optional<Vec> guess;
  Mat phi = model.frame(curve.point_at(t0));  // frame transported along the curve
  Vec prev_point = curve.point_at(t0);

  for (int i = 0; i < opt.samples; ++i) {
    const double t = t0 + (t1 - t0) * i / (opt.samples - 1);
    const Vec a = curve.point_at(t);

    if (i > 0 && !model.flat_chart() && opt.with_rotation) {
      // advance the transported frame over [prev, a]
      CurvePath seg;
      seg.model = &model;
      seg.is_geodesic = false;
      seg.samples.push_back({0.0, prev_point, curve.velocity_at(
          t0 + (t1 - t0) * (i - 1) / (opt.samples - 1))});
      seg.samples.push_back({t - (t0 + (t1 - t0) * (i - 1) / (opt.samples - 1)),
                             a, curve.velocity_at(t)});
      phi = parallel_transport(model, seg, phi).transported_frame;
    }
    prev_point = a;

    SlidResult s = slide_at(model, word, a, guess, opt.with_rotation, opt.tol);
    guess = s.v;

    // Convexity-regime condition l < kappa * r: tracked on every trace,
    // fatal only on request (the model families here keep the continuation
    // log_map on the correct branch well past the paper's regime).
    const double r_here = model.radial_coordinate(a);
    if (s.l >= opt.kappa_guard * r_here) {
      trace.radius_guard_satisfied = false;
      if (opt.abort_on_guard) throw LoopEscapedRadius(t);
    }

    TraceSample sample;
    sample.t = t;
    sample.base = a;
    sample.l = s.l;
    const Mat Einv = model.frame_inverse(a);
    const Mat E = model.frame(a);
    Mat r_frame = Einv * s.r_chart * E;
    sample.rot_norm = opt.with_rotation ? rotation_angle_norm(r_frame) : 0.0;
    sample.rot_transported = phi.fullPivLu().solve(s.r_chart * phi);
    sample.translation = r_frame * (Einv * s.v);
    trace.samples.push_back(std::move(sample));
  }
  return trace;
}

double SlidingTrace::max_rot_norm_drift() const {
  double lo = samples.front().rot_norm, hi = lo;
  for (const auto& s : samples) {
    lo = std::min(lo, s.rot_norm);
    hi = std::max(hi, s.rot_norm);
  }
  return hi - lo;
}

std::pair<double, double> SlidingTrace::fitted_length_limit(double tail_fraction) const {
  // l(t) = L + c/t over the trailing samples, ordinary least squares
  const size_t m = samples.size();
  const size_t from = static_cast<size_t>(m * (1.0 - tail_fraction));
  double s11 = 0, s1x = 0, sxx = 0, s1y = 0, sxy = 0;
  for (size_t i = from; i < m; ++i) {
    const double x = 1.0 / std::max(1e-12, model->radial_coordinate(samples[i].base));
    const double y = samples[i].l;
    s11 += 1;
    s1x += x;
    sxx += x * x;
    s1y += y;
    sxy += x * y;
  }
  const double det = s11 * sxx - s1x * s1x;
  double L, c;
  if (std::abs(det) < 1e-300) {
    L = s1y / s11;
    c = 0;
  } else {
    L = (sxx * s1y - s1x * sxy) / det;
    c = (s11 * sxy - s1x * s1y) / det;
  }
  double resid = 0;
  for (size_t i = from; i < m; ++i) {
    const double x = 1.0 / std::max(1e-12, model->radial_coordinate(samples[i].base));
    resid = std::max(resid, std::abs(samples[i].l - L - c * x));
  }
  return {L, resid};
}

std::vector<std::pair<double, double>> pairwise_angles(const SlidingTrace& a,
                                                       const SlidingTrace& b) {
  std::vector<std::pair<double, double>> out;
  const size_t m = std::min(a.samples.size(), b.samples.size());
  for (size_t i = 0; i < m; ++i) {
    const Vec& u = a.samples[i].translation;
    const Vec& v = b.samples[i].translation;
    double c = u.dot(v) / std::max(1e-300, u.norm() * v.norm());
    out.push_back({a.samples[i].t, std::acos(std::clamp(c, -1.0, 1.0))});
  }
  return out;
}

ProductSlideReport slide_preserves_product(const MetricModel& model,
                                           const GeodesicLoop& a, const GeodesicLoop& b,
                                           const CurvePath& curve,
                                           const SlideOptions& opt) {
  if (!a.word || !b.word) throw NoDeckGroup("slide_preserves_product: need deck words");
  GeodesicLoop ab;
  {
    Word w = *a.word + *b.word;
    ab = loop_from_deck(model, curve.start(), w);
  }
  SlidingTrace ta = slide(model, a, curve, opt);
  SlidingTrace tb = slide(model, b, curve, opt);
  SlidingTrace tab = slide(model, ab, curve, opt);

  const Vec end = curve.end();
  GeodesicLoop ea = loop_from_deck(model, end, *a.word);
  GeodesicLoop eb = loop_from_deck(model, end, *b.word);
  GeodesicLoop eab = loop_from_deck(model, end, *ab.word);
  (void)ta;
  (void)tb;
  (void)tab;

  ProductSlideReport rep;
  rep.rotation_defect = (ea.rotation * eb.rotation - eab.rotation).cwiseAbs().maxCoeff();
  rep.translation_defect =
      (ea.rotation * eb.translation + ea.translation - eab.translation).norm();
  rep.holds = rep.rotation_defect <= 1e-6 && rep.translation_defect <= 1e-6;
  return rep;
}

double sliding_transitivity_defect(const MetricModel& model, const GeodesicLoop& loop,
                                   const CurvePath& curve, const SlideOptions& opt) {
  SlidingTrace full = slide(model, loop, curve, opt);
  const size_t mid = full.samples.size() / 2;
  const double tmid = full.samples[mid].t;
  const double tend = full.samples.back().t;

  // loop at the midpoint, then slide along the remaining arc
  GeodesicLoop lmid = loop_from_deck(model, full.samples[mid].base, *loop.word);
  CurvePath tail;
  tail.model = &model;
  tail.is_geodesic = false;
  const int nseg = std::max(2, static_cast<int>(full.samples.size() - mid));
  for (int i = 0; i < nseg; ++i) {
    double t = tmid + (tend - tmid) * i / (nseg - 1);
    tail.samples.push_back({t, curve.point_at(t), curve.velocity_at(t)});
  }
  SlideOptions topt = opt;
  topt.samples = nseg;
  SlidingTrace retr = slide(model, lmid, tail, topt);

  const auto& s1 = full.samples.back();
  const auto& s2 = retr.samples.back();
  double defect = std::abs(s1.l - s2.l);
  defect = std::max(defect, (s1.translation - s2.translation).norm());
  defect = std::max(defect, std::abs(s1.rot_norm - s2.rot_norm));
  return defect;
}

}  // namespace tale
