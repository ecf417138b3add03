#include <doctest.h>

#include <Eigen/QR>

#include "oracles.hpp"
#include "tale/models.hpp"
#include "tale/holonomy.hpp"

using namespace tale;

namespace {
Mat rot2_embedded(int n, int i, int j, double angle) {
  Mat R = Mat::Identity(n, n);
  R(i, i) = std::cos(angle);
  R(j, j) = std::cos(angle);
  R(i, j) = -std::sin(angle);
  R(j, i) = std::sin(angle);
  return R;
}

Mat random_special_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
  Eigen::HouseholderQR<Mat> qr(A);
  Mat Q = qr.householderQ();
  if (Q.determinant() < 0) Q.col(0) *= -1;
  return Q;
}
}  // namespace

TEST_CASE("rotation_angle_norm from eigenvalue arguments") {
  CHECK(rotation_angle_norm(Mat::Identity(3, 3)) == 0.0);
  CHECK(rotation_angle_norm(rot2_embedded(3, 0, 1, 2 * M_PI / 3)) ==
        doctest::Approx(2 * M_PI / 3).epsilon(1e-12));
  Mat block = rot2_embedded(4, 0, 1, 0.3) * rot2_embedded(4, 2, 3, 1.1);
  CHECK(rotation_angle_norm(block) == doctest::Approx(1.1).epsilon(1e-12));
  Mat bad = Mat::Identity(3, 3);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(rotation_angle_norm(bad), NotOrthogonal);
}

TEST_CASE("matrix_deviation equals 2 sin(theta/2) on rotations") {
  CHECK(matrix_deviation(Mat::Identity(2, 2)) == 0.0);
  CHECK(matrix_deviation(rot2_embedded(2, 0, 1, M_PI)) == doctest::Approx(2.0));
  CHECK(matrix_deviation(rot2_embedded(3, 0, 1, 2 * M_PI / 3)) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("norm comparability (2/pi)||r|| <= |r - I| <= ||r|| on 1000 random rotations") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + static_cast<int>(i % 3);
    const Mat Q = random_special_orthogonal(n, rng);
    const double ang = rotation_angle_norm(Q);
    const double dev = matrix_deviation(Q);
    CHECK(dev <= ang + 1e-12);
    CHECK(dev >= (2.0 / M_PI) * ang - 1e-12);
  }
}

TEST_CASE("loop_from_deck reproduces the screw loop formula") {
  ScrewQuotientModel screw(1.0 / 3.0);
  Vec q(3);
  q << 2, 0, 0;
  Word w(1);
  w << 1;
  GeodesicLoop loop = loop_from_deck(screw, q, w);
  CHECK(loop.length == doctest::Approx(std::sqrt(13.0)).epsilon(1e-12));
  CHECK(rotation_angle_norm(loop.rotation) ==
        doctest::Approx(2 * M_PI / 3).epsilon(1e-12));
  CHECK(loop.translation.norm() == doctest::Approx(loop.length).epsilon(1e-10));
  CHECK(loop_consistency_defect(screw, loop) <= 1e-8);

  Word w3(1);
  w3 << 3;
  GeodesicLoop cube = loop_from_deck(screw, q, w3);
  CHECK(cube.length == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(rotation_angle_norm(cube.rotation) <= 1e-12);
}

TEST_CASE("flat torus loops are pure translations") {
  auto torus = make_model("flat-torus", {{"n", 4}, {"m", 3}, {"side", 1.0}});
  Vec q = Vec::Zero(4);
  q[0] = 5.0;
  Word w = Word::Zero(3);
  w << 1, -2, 1;
  GeodesicLoop loop = loop_from_deck(*torus, q, w);
  CHECK((loop.rotation - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(loop.length == doctest::Approx(std::sqrt(6.0)));
}

TEST_CASE("Taub-NUT fiber loop length approximates the Killing-fiber circumference") {
  MultiTaubNutModel tn(1.0, {0.0});
  Vec q(4);
  q << 50.0, 0.0, 0.0, 0.0;
  Word w(1);
  w << 1;
  GeodesicLoop loop = loop_from_deck(tn, q, w, 1e-9);
  const double expected = 8 * M_PI / std::sqrt(1.0 + 2.0 / 50.0);  // ~24.64
  CHECK(loop.length == doctest::Approx(expected).epsilon(2e-3));
  CHECK(loop_consistency_defect(tn, loop) <= 1e-6);
}

TEST_CASE("find_loops enumerates the screw loops exactly") {
  ScrewQuotientModel screw(1.0 / 3.0);
  Vec q(3);
  q << 2, 0, 0;
  auto res = find_loops(screw, q, 4.0);
  REQUIRE(res.complete);
  std::vector<int> ks;
  for (const auto& loop : res.loops) ks.push_back((*loop.word)[0]);
  std::sort(ks.begin(), ks.end());
  CHECK(ks == std::vector<int>({-3, -1, 1, 3}));
  std::vector<double> lengths;
  for (const auto& loop : res.loops) lengths.push_back(loop.length);
  std::sort(lengths.begin(), lengths.end());
  CHECK(lengths[0] == doctest::Approx(3.0));
  CHECK(lengths[1] == doctest::Approx(3.0));
  CHECK(lengths[2] == doctest::Approx(std::sqrt(13.0)));
  CHECK(lengths[3] == doctest::Approx(std::sqrt(13.0)));

  // completeness against the brute-force word bound
  for (double radius : {2.0, 3.5, 6.0, 9.0}) {
    auto got = find_loops(screw, q, radius);
    auto expect = oracles::screw_loop_words(2.0, 1.0 / 3.0, radius);
    CHECK(got.loops.size() == expect.size());
  }
}

TEST_CASE("find_loops is empty on simply connected charts") {
  EuclideanModel r4(4);
  Vec q = Vec::Zero(4);
  auto res = find_loops(r4, q, 10.0);
  CHECK(res.loops.empty());
  CHECK(res.complete);
}

TEST_CASE("Taub-NUT fiber loops at rho = 50 within radius 30") {
  MultiTaubNutModel tn(1.0, {0.0});
  Vec q(4);
  q << 50.0, 0.0, 0.0, 0.0;
  auto res = find_loops(tn, q, 30.0);
  CHECK(res.loops.size() == 2);  // k = +1 and k = -1
  for (const auto& loop : res.loops)
    CHECK(loop.length == doctest::Approx(24.64).epsilon(2e-3));
}

TEST_CASE("shooting search rediscovers the deck loops on the screw model") {
  ScrewQuotientModel screw(1.0 / 3.0);
  Vec q(3);
  q << 2, 0, 0;
  auto res = find_loops(screw, q, 4.0, LoopSearchStrategy::ShootingSearch);
  CHECK_FALSE(res.complete);  // best-effort contract
  REQUIRE(res.loops.size() >= 2);
  // the shortest loops (k = ±3, length 3) must be present
  CHECK(res.loops.front().length == doctest::Approx(3.0).epsilon(1e-5));
}

TEST_CASE("SU(2)-type rotations act with constant displacement (eq gra1 pattern)") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss;
  for (double ang : {0.1, 0.7, 2.0}) {
    const Mat R = rot2_embedded(4, 0, 1, ang) * rot2_embedded(4, 2, 3, ang);
    const double dev = matrix_deviation(R);
    for (int i = 0; i < 100; ++i) {
      Vec v(4);
      for (int k = 0; k < 4; ++k) v[k] = gauss(rng);
      v.normalize();
      CHECK(((R - Mat::Identity(4, 4)) * v).norm() ==
            doctest::Approx(dev).epsilon(1e-10));
    }
  }
}

TEST_CASE("holonomy condition report: flat torus passes everything") {
  auto torus = make_model("flat-torus", {{"n", 4}, {"m", 2}, {"side", 1.0}});
  CurvePath ray = CurvePath::from_function(
      *torus,
      [&](double r) {
        Vec p = Vec::Zero(4);
        p[0] = r;
        return p;
      },
      5.0, 200.0, 64);
  HolonomyConfig cfg;
  auto rep = check_holonomy_conditions(*torus, ray, cfg, {10.0, 50.0, 150.0});
  CHECK(rep.hc_pass);
  CHECK(rep.hcprime_pass);
  CHECK(rep.shc_pass);
  for (const auto& row : rep.rows) CHECK(row.sup_rot_norm == 0.0);
}

TEST_CASE("holonomy conditions on the screw model: HC' passes, golden SHC fails") {
  {
    ScrewQuotientModel screw(1.0 / 3.0);
    CurvePath ray = CurvePath::from_function(
        screw,
        [&](double r) {
          Vec p(3);
          p << r, 0, 0;
          return p;
        },
        5.0, 1200.0, 256);
    HolonomyConfig cfg;
    cfg.C_H = M_PI / 2;
    auto rep = check_holonomy_conditions(screw, ray, cfg, {10.0, 100.0, 1000.0});
    CHECK(rep.hcprime_pass);  // ||r|| <= (pi/2r) L for every loop
  }
  {
    ScrewQuotientModel screw((std::sqrt(5.0) - 1.0) / 2.0);
    CurvePath ray = CurvePath::from_function(
        screw,
        [&](double r) {
          Vec p(3);
          p << r, 0, 0;
          return p;
        },
        50.0, 1200.0, 256);
    HolonomyConfig cfg;
    cfg.C_H = M_PI / 2;
    cfg.epsilon_profile = [](double r) { return 1.0 / std::sqrt(r); };
    auto rep = check_holonomy_conditions(screw, ray, cfg, {100.0, 1000.0});
    CHECK(rep.hcprime_pass);
    CHECK_FALSE(rep.shc_pass);  // rotations stay bounded away from zero
  }
}

TEST_CASE("invalid holonomy configs are rejected") {
  HolonomyConfig cfg;
  cfg.kappa = 0.7;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  HolonomyConfig cfg2;
  cfg2.Theta_H = 2.0;
  CHECK_THROWS_AS(cfg2.validate(), ConfigError);
}
