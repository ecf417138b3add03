#include <doctest.h>

#include "oracles.hpp"
#include "tale/models.hpp"
#include "tale/geodesic.hpp"

using namespace tale;

TEST_CASE("flat geodesics are straight lines") {
  EuclideanModel r3(3);
  Vec p = Vec::Zero(3), v = Vec::Unit(3, 0);
  CurvePath path = integrate_geodesic(r3, p, v, 5.0);
  CHECK((path.end() - Vec(5.0 * Vec::Unit(3, 0))).norm() <= 1e-12);
  CHECK(path.speed_drift() <= 1e-12);
}

TEST_CASE("Schwarzschild radial geodesic endpoint matches the quadrature oracle") {
  SchwarzschildModel sch(1.0);
  Vec p(4);
  p << 0.0, 10.0, M_PI / 2, 1.0;
  Vec v = Vec::Zero(4);
  v[1] = 1.0;  // outward radial
  CurvePath path = integrate_geodesic(sch, p, v, 5.0, {});
  const double r_expected = oracles::schwarzschild_radial_endpoint(1.0, 10.0, 5.0);
  CHECK(path.end()[1] == doctest::Approx(r_expected).epsilon(1e-8 / r_expected));
  CHECK(std::abs(path.end()[0] - p[0]) <= 1e-10);
  CHECK(std::abs(path.end()[2] - p[2]) <= 1e-10);
  CHECK(path.speed_drift() <= 10 * path.tolerance_used);
}

TEST_CASE("screw-quotient chord of length sqrt(13) reaches the deck image") {
  ScrewQuotientModel screw(1.0 / 3.0);
  Vec p(3);
  p << 2, 0, 0;
  Word w(1);
  w << 1;
  const Vec target = screw.deck()->apply(w, p);
  const Vec v = target - p;
  CHECK(v.norm() == doctest::Approx(std::sqrt(13.0)).epsilon(1e-14));
  CurvePath path = integrate_geodesic(screw, p, v, std::sqrt(13.0));
  CHECK((path.end() - target).norm() <= 1e-10);
}

TEST_CASE("exp_map basics") {
  EuclideanModel r3(3);
  Vec p(3);
  p << 1, 2, 3;
  CHECK((exp_map(r3, p, Vec::Zero(3)) - p).norm() == 0.0);
  Vec v(3);
  v << 0.5, -1, 2;
  CHECK((exp_map(r3, p, v) - (p + v)).norm() == 0.0);
}

TEST_CASE("Taub-NUT fiber-directed unit vector advances tau by V^{1/2}") {
  MultiTaubNutModel tn(1.0, {0.0});
  Vec p(4);
  p << 20.0, 0.0, 0.0, 0.0;
  const double V = tn.potential(p);
  Vec v = Vec::Zero(4);
  v[3] = std::sqrt(V);  // |v|_g = 1 along the fiber
  CHECK(tn.norm(p, v) == doctest::Approx(1.0).epsilon(1e-12));
  IntegrationOptions opt;
  opt.tol = 1e-12;
  const Vec q = exp_map(tn, p, v, opt);
  // the outward drift contributes V0^{-1/2} int dV = -1.64e-6 at rho = 20;
  // the closed-form value is exact up to that second-order term
  CHECK(std::abs(q[3] - std::sqrt(V)) <= 2e-6);

  Vec p30(4);
  p30 << 30.0, 0.0, 0.0, 0.0;
  Vec v30 = Vec::Zero(4);
  v30[3] = std::sqrt(tn.potential(p30));
  const Vec q30 = exp_map(tn, p30, v30, opt);
  CHECK(std::abs(q30[3] - std::sqrt(tn.potential(p30))) <= 1e-6);
}

TEST_CASE("log_map on flat charts is the chord") {
  EuclideanModel r3(3);
  Vec p(3), q(3);
  p << 0, 1, 0;
  q << 2, 2, 2;
  CHECK((log_map(r3, p, q) - (q - p)).norm() == 0.0);
  CHECK(log_map(r3, p, p).norm() == 0.0);
}

TEST_CASE("log_map inverts the radial Schwarzschild geodesic") {
  SchwarzschildModel sch(1.0);
  Vec p(4), q(4);
  p << 0.0, 10.0, M_PI / 2, 1.0;
  q << 0.0, 12.0, M_PI / 2, 1.0;
  const Vec v = log_map(sch, p, q);
  const double expected = oracles::schwarzschild_radial_length(1.0, 10.0, 12.0);
  CHECK(sch.norm(p, v) == doctest::Approx(expected).epsilon(1e-8));
  // direction is radial
  CHECK(std::abs(v[0]) <= 1e-8);
  CHECK(std::abs(v[2]) <= 1e-8);
  CHECK(std::abs(v[3]) <= 1e-8);
}

TEST_CASE("exp/log round trip within 100x tolerance") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss;
  for (auto model : {std::shared_ptr<MetricModel>(new SchwarzschildModel(1.0)),
                     std::shared_ptr<MetricModel>(new MultiTaubNutModel(1.0, {0.0}))}) {
    for (int trial = 0; trial < 6; ++trial) {
      const Vec p = model->sample_domain(rng);
      Vec v(model->dim());
      for (int i = 0; i < model->dim(); ++i) v[i] = gauss(rng);
      v *= 0.5 / model->norm(p, v);
      Vec q;
      try {
        q = exp_map(*model, p, v);
      } catch (const LeftDomain&) {
        continue;
      }
      LogOptions lopt;
      lopt.tol = 1e-9;
      const Vec w = log_map(*model, p, q, v, lopt);
      CHECK((w - v).norm() <= 100 * lopt.tol);
    }
  }
}

TEST_CASE("log_map without a guess multistarts and agrees with the chord seed") {
  SchwarzschildModel sch(1.0);
  Vec p(4), q(4);
  p << 0.0, 15.0, M_PI / 2, 1.0;
  q << 0.2, 16.0, M_PI / 2 + 0.05, 1.1;
  const Vec v = log_map(sch, p, q);
  CHECK((exp_map(sch, p, v) - q).norm() <= 1e-8);
}

TEST_CASE("parallel transport is trivial on flat charts and reversible elsewhere") {
  EuclideanModel r3(3);
  // closed triangle in the chart
  std::vector<Vec> pts;
  Vec a(3), b(3), c(3);
  a << 0, 0, 0;
  b << 1, 0, 0;
  c << 0.3, 1.2, 0.1;
  CurvePath tri = CurvePath::from_function(
      r3,
      [&](double t) -> Vec {
        if (t < 1.0) return a + t * (b - a);
        if (t < 2.0) return b + (t - 1) * (c - b);
        return c + (t - 2) * (a - c);
      },
      0.0, 3.0, 91);
  auto ft = parallel_transport(r3, tri, Mat::Identity(3, 3));
  CHECK((ft.transported_frame - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);

  SchwarzschildModel sch(1.0);
  Vec p(4);
  p << 0.0, 10.0, M_PI / 2, 1.0;
  Vec v(4);
  v << 0.2, 1.0, 0.1, -0.05;
  IntegrationOptions opt;
  opt.tol = 1e-11;
  Mat fwd;
  CurvePath path =
      integrate_geodesic_with_frame(sch, p, v, 4.0, Mat::Identity(4, 4), fwd, opt);
  // transport back along the reversed path
  Mat back;
  integrate_geodesic_with_frame(sch, path.end(), -path.samples.back().velocity, 4.0, fwd,
                                back, opt);
  CHECK((back - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() <= 10 * 1e-7);

  // orthonormality against g is preserved
  const Mat g_end = sch.metric(path.end());
  const Mat gram = fwd.transpose() * g_end * fwd;
  const Mat gram0 = sch.metric(p);
  CHECK((gram - gram0).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("transport preserves orientation") {
  SchwarzschildModel sch(1.0);
  Vec p(4);
  p << 0.0, 12.0, M_PI / 2, 0.5;
  Vec v(4);
  v << 0.1, 1.0, 0.08, 0.02;
  Mat out;
  const Mat E = sch.frame(p);
  integrate_geodesic_with_frame(sch, p, v, 6.0, E, out, {});
  const Vec q_end = exp_map(sch, p, v * (6.0 / sch.norm(p, v)));
  const Mat Einv_end = sch.frame_inverse(q_end);
  const Mat rot = Einv_end * out;  // frame-to-frame transport matrix
  CHECK(rot.determinant() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("geodesics stop at the domain boundary with LeftDomain") {
  SchwarzschildModel sch(1.0);
  Vec p(4);
  p << 0.0, 3.0, M_PI / 2, 1.0;
  Vec v = Vec::Zero(4);
  v[1] = -1.0;  // inward, toward the horizon guard
  CHECK_THROWS_AS(integrate_geodesic(sch, p, v, 4.0), LeftDomain);
}

TEST_CASE("curve paths interpolate their samples") {
  EuclideanModel r2(2);
  CurvePath path = CurvePath::from_function(
      r2,
      [](double t) {
        Vec p(2);
        p << std::cos(t), std::sin(t);
        return p;
      },
      0.0, 3.0, 200);
  const Vec mid = path.point_at(1.234);
  CHECK(mid[0] == doctest::Approx(std::cos(1.234)).epsilon(1e-8));
  CHECK(mid[1] == doctest::Approx(std::sin(1.234)).epsilon(1e-8));
  CHECK(path.arc_length == doctest::Approx(3.0).epsilon(1e-4));
}
