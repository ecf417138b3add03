#include "tale/holonomy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace tale {

double rotation_angle_norm(const Mat& r) {
  const int n = r.rows();
  if ((r.transpose() * r - Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-8)
    throw NotOrthogonal("rotation_angle_norm: matrix is not orthogonal");
  Eigen::EigenSolver<Mat> es(r);
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    const auto ev = es.eigenvalues()(i);
    worst = std::max(worst, std::abs(std::atan2(ev.imag(), ev.real())));
  }
  return worst < 1e-12 ? 0.0 : worst;
}

double matrix_deviation(const Mat& r) {
  Eigen::JacobiSVD<Mat> svd(r - Mat::Identity(r.rows(), r.cols()));
  double d = svd.singularValues()(0);
  return d < 1e-14 ? 0.0 : d;
}

GeodesicLoop loop_from_deck(const MetricModel& model, const Vec& q, const Word& word,
                            double tol) {
  const auto* deck = model.deck();
  if (!deck) throw NoDeckGroup(model.name() + ": model has no deck group");
  model.require_domain(q);

  GeodesicLoop loop;
  loop.base = q;
  loop.word = word;
  const int n = model.dim();

  if (word.isZero()) {
    loop.initial_velocity = Vec::Zero(n);
    loop.length = 0;
    loop.rotation = Mat::Identity(n, n);
    loop.translation = Vec::Zero(n);
    return loop;
  }

  auto [Q, tv] = deck->motion(word);
  const Vec target = Q * q + tv;

  Vec v;
  Mat P;
  if (model.flat_chart()) {
    v = target - q;
    P = Mat::Identity(n, n);
  } else {
    LogOptions lopt;
    lopt.tol = tol;
    v = log_map(model, q, target, target - q, lopt);
    Mat frame0 = Mat::Identity(n, n);
    Mat frame1;
    IntegrationOptions iopt;
    iopt.tol = std::min(tol, 1e-10);
    integrate_geodesic_with_frame(model, q, v, model.norm(q, v), frame0, frame1, iopt);
    P = frame1;
  }

  loop.initial_velocity = v;
  loop.length = model.norm(q, v);
  const Mat Einv = model.frame_inverse(q);  // chart -> frame components
  const Mat E = model.frame(q);
  loop.rotation = Einv * Q.transpose() * P * E;
  loop.translation = loop.rotation * (Einv * v);
  return loop;
}

LoopSearchResult find_loops(const MetricModel& model, const Vec& q, double radius,
                            LoopSearchStrategy strategy) {
  LoopSearchResult out;
  const auto* deck = model.deck();

  if (strategy == LoopSearchStrategy::DeckEnumeration) {
    if (!deck) {
      out.complete = true;  // simply connected chart: no loops
      return out;
    }
    if (deck->kind() == DeckPresentation::Kind::FiberPeriod && !model.flat_chart()) {
      // Curved chart: true loop lengths must be computed; lengths grow
      // monotonically in |k| away from the centers, so stop once past radius.
      out.complete = false;
      out.incomplete_note =
          "fiber-period enumeration uses a computed-length cutoff; completeness "
          "holds only in the monotone regime";
      for (int sign : {1, -1}) {
        for (int k = 1; k < 64; ++k) {
          Word w(1);
          w[0] = sign * k;
          GeodesicLoop loop = loop_from_deck(model, q, w);
          if (loop.length < radius)
            out.loops.push_back(std::move(loop));
          else
            break;
        }
      }
    } else {
      for (const Word& w : deck->words_within(q, radius)) {
        GeodesicLoop loop = loop_from_deck(model, q, w);
        if (loop.length < radius) out.loops.push_back(std::move(loop));
      }
    }
    std::sort(out.loops.begin(), out.loops.end(),
              [](const GeodesicLoop& a, const GeodesicLoop& b) {
                if (a.length != b.length) return a.length < b.length;
                return std::lexicographical_compare(
                    a.word->data(), a.word->data() + a.word->size(), b.word->data(),
                    b.word->data() + b.word->size());
              });
    return out;
  }

  // Shooting search: deterministic direction/length lattice, Gauss-Newton
  // refinement of exp(q, L d) toward the nearest deck image (or q itself).
  out.complete = false;
  out.incomplete_note = "shooting search is best-effort";
  const int n = model.dim();
  std::vector<Vec> dirs;
  if (n == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < 64; ++i) {
      double zc = 1.0 - 2.0 * (i + 0.5) / 64.0;
      double rc = std::sqrt(1.0 - zc * zc);
      double ph = golden * i;
      Vec d(3);
      d << rc * std::cos(ph), rc * std::sin(ph), zc;
      dirs.push_back(d);
    }
  } else {
    std::mt19937_64 rng(1729);  // fixed lattice
    std::normal_distribution<double> gauss;
    for (int i = 0; i < 64; ++i) {
      Vec d(n);
      for (int j = 0; j < n; ++j) d[j] = gauss(rng);
      dirs.push_back(d / d.norm());
    }
  }
  std::vector<Vec> images;
  if (deck)
    for (const Word& w : deck->words_within(q, 2 * radius)) images.push_back(deck->apply(w, q));
  auto nearest_image = [&](const Vec& p) {
    Vec best = q;
    double bd = (p - q).norm();
    for (const Vec& im : images)
      if ((p - im).norm() < bd) {
        bd = (p - im).norm();
        best = im;
      }
    return best;
  };
  std::vector<GeodesicLoop> found;
  for (const Vec& d0 : dirs) {
    for (int ls = 0; ls < 16; ++ls) {
      double L0 = radius * (ls + 0.5) / 16.0;
      Vec u = L0 * d0;
      bool ok = false;
      for (int it = 0; it < 40 && !ok; ++it) {
        Vec e;
        try {
          e = exp_map(model, q, u);
        } catch (const LeftDomain&) {
          break;
        }
        Vec target = nearest_image(e);
        if ((target - q).norm() < 1e-9) break;  // refined toward the base point itself
        Vec r = e - target;
        if (r.norm() < 1e-6 * std::max(1.0, u.norm())) {
          ok = true;
          break;
        }
        Mat J(n, n);
        const double h = 1e-6 * std::max(1.0, u.norm());
        for (int i = 0; i < n; ++i) {
          Vec up = u;
          up[i] += h;
          J.col(i) = (exp_map(model, q, up) - e) / h;
        }
        Vec du = J.colPivHouseholderQr().solve(r);
        if (du.norm() > 0.5 * radius) du *= 0.5 * radius / du.norm();
        u -= du;
      }
      if (!ok) continue;
      double L = model.norm(q, u);
      if (L <= 1e-9 || L >= radius) continue;
      bool dup = false;
      for (const auto& g : found)
        if ((g.initial_velocity - u).norm() < 1e-5 * std::max(1.0, L)) dup = true;
      if (dup) continue;
      GeodesicLoop loop;
      loop.base = q;
      loop.initial_velocity = u;
      loop.length = L;
      Mat P;
      if (model.flat_chart()) {
        P = Mat::Identity(n, n);
      } else {
        Mat f1;
        integrate_geodesic_with_frame(model, q, u, L, Mat::Identity(n, n), f1, {});
        P = f1;
      }
      // identify which deck image was hit to undo its differential
      Vec e = exp_map(model, q, u);
      Mat Q = Mat::Identity(n, n);
      if (deck) {
        double bd = std::numeric_limits<double>::infinity();
        for (const Word& w : deck->words_within(q, 2 * radius)) {
          Vec im = deck->apply(w, q);
          if ((e - im).norm() < bd) {
            bd = (e - im).norm();
            Q = deck->motion(w).first;
          }
        }
      }
      const Mat Einv = model.frame_inverse(q);
      const Mat E = model.frame(q);
      loop.rotation = Einv * Q.transpose() * P * E;
      loop.translation = loop.rotation * (Einv * u);
      found.push_back(std::move(loop));
    }
  }
  std::sort(found.begin(), found.end(), [](const GeodesicLoop& a, const GeodesicLoop& b) {
    return a.length < b.length;
  });
  out.loops = std::move(found);
  return out;
}

HolonomyConditionReport check_holonomy_conditions(const MetricModel& model,
                                                  const CurvePath& ray,
                                                  const HolonomyConfig& config,
                                                  const std::vector<double>& radii) {
  config.validate();
  HolonomyConditionReport rep;
  for (double r : radii) {
    // base point: ray sample with radial coordinate closest to r
    const PathSample* best = &ray.samples.front();
    for (const auto& s : ray.samples)
      if (std::abs(model.radial_coordinate(s.point) - r) <
          std::abs(model.radial_coordinate(best->point) - r))
        best = &s;
    const Vec q = best->point;
    const double rq = model.radial_coordinate(q);
    HolonomyConditionRow row;
    row.radius = rq;
    auto search = find_loops(model, q, config.kappa * rq);
    row.loop_count = static_cast<int>(search.loops.size());
    for (const auto& loop : search.loops) {
      const double rot = rotation_angle_norm(loop.rotation);
      row.sup_rot_norm = std::max(row.sup_rot_norm, rot);
      if (loop.length > 0)
        row.sup_scaled = std::max(row.sup_scaled, rq * rot / loop.length);
    }
    row.hc_pass = row.sup_rot_norm <= config.Theta_H;
    row.hcprime_pass = row.sup_scaled <= config.C_H;
    row.shc_pass = row.sup_rot_norm <= config.epsilon_profile(rq);
    rep.hc_pass = rep.hc_pass && row.hc_pass;
    rep.hcprime_pass = rep.hcprime_pass && row.hcprime_pass;
    rep.shc_pass = rep.shc_pass && row.shc_pass;
    rep.rows.push_back(row);
  }
  return rep;
}

double loop_consistency_defect(const MetricModel& model, const GeodesicLoop& loop) {
  double defect = 0;
  const int n = model.dim();
  defect = std::max(defect,
                    (loop.rotation.transpose() * loop.rotation - Mat::Identity(n, n))
                        .cwiseAbs()
                        .maxCoeff());
  if (loop.length > 0)
    defect = std::max(defect,
                      std::abs(loop.translation.norm() - loop.length) / loop.length);
  // loop closes up modulo the deck group
  Vec e = exp_map(model, loop.base, loop.initial_velocity);
  double close = (e - loop.base).norm();
  if (const auto* deck = model.deck()) {
    if (loop.word) {
      close = (e - deck->apply(*loop.word, loop.base)).norm();
    } else {
      for (const Word& w : deck->words_within(loop.base, 2 * loop.length + 1))
        close = std::min(close, (e - deck->apply(w, loop.base)).norm());
    }
  }
  defect = std::max(defect, close);
  return defect;
}

}  // namespace tale
