#include <doctest.h>

#include "oracles.hpp"
#include "tale/models.hpp"
#include "tale/asymptotics.hpp"
#include "tale/pseudogroup.hpp"

using namespace tale;

TEST_CASE("tail integrals K0/K1 match the closed forms for power profiles") {
  DecayProfile prof = DecayProfile::power(0.5);
  // K0(t) = int_t^inf s^{-3/2} ds = 2 t^{-1/2}, K1(t) = (2/3) t^{-3/2}
  for (double t : {1.0, 4.0, 25.0}) {
    CHECK(prof.K0(t) == doctest::Approx(2.0 / std::sqrt(t)).epsilon(1e-8));
    CHECK(prof.K1(t) == doctest::Approx(2.0 / 3.0 * std::pow(t, -1.5)).epsilon(1e-8));
    CHECK(prof.K1(t) <= prof.K0(t) / t + 1e-12);
  }
}

TEST_CASE("numerical derivative of K0 recovers -K(t)/t") {
  DecayProfile prof = DecayProfile::log_squared();
  for (double t : {2.0, 10.0, 100.0}) {
    const double h = 1e-4 * t;
    const double dK0 = (prof.K0(t + h) - prof.K0(t - h)) / (2 * h);
    CHECK(dK0 == doctest::Approx(-prof.K(t) / t).epsilon(1e-6));
  }
}

TEST_CASE("nonintegrable profiles are rejected") {
  DecayProfile c = DecayProfile::constant(1.0);
  CHECK_THROWS_AS(c.K0(1.0), IntegralDiverges);
}

TEST_CASE("AF constant: Schwarzschild against K(r) = sqrt(48)/r") {
  SchwarzschildModel sch(1.0);
  DecayProfile prof = DecayProfile::power(1.0);  // r^2 |Rm| / K = r^3 |Rm|
  std::vector<Vec> pts;
  for (double r : {10.0, 20.0, 50.0}) {
    Vec p(4);
    p << 0.0, r, M_PI / 2, 0.0;
    pts.push_back(p);
  }
  CHECK(prof.af_constant(sch, pts) == doctest::Approx(std::sqrt(48.0)).epsilon(1e-6));
}

TEST_CASE("Jacobi comparison: K = 0 gives J = t exactly") {
  DecayProfile zero = DecayProfile::constant(0.0);
  JacobiReport rep = jacobi_compare(zero, 1.0, 50.0);
  CHECK(rep.bounds_hold);
  CHECK(rep.envelope_constant == doctest::Approx(1.0));
  CHECK(rep.max_ratio == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Jacobi comparison stays inside the quadrature envelope") {
  {
    DecayProfile prof = DecayProfile::power_shifted(0.5);
    JacobiReport rep = jacobi_compare(prof, 1.0, 1000.0);
    CHECK(rep.bounds_hold);
    CHECK(rep.min_ratio >= 1.0 - 1e-7);
    CHECK(rep.max_ratio <= rep.envelope_constant);
  }
  {
    DecayProfile prof = DecayProfile::log_squared();
    JacobiReport rep = jacobi_compare(prof, 1.0, 1000.0);
    CHECK(rep.bounds_hold);
  }
  {
    // criterion profile K(s) = s^{-1/2} on [1, 10^3], both comparison ODEs
    DecayProfile prof = DecayProfile::power(0.5);
    JacobiReport a = jacobi_compare(prof, 1.0, 1000.0);
    CHECK(a.bounds_hold);
    JacobiReport b = jacobi_compare_halfscale(prof, 1000.0);
    CHECK(b.bounds_hold);
    CHECK(b.min_ratio >= 1.0 - 1e-7);  // J >= t - 1
  }
}

TEST_CASE("Gronwall oracle accepts admissible data and certifies the sup") {
  DecayProfile k = DecayProfile::custom(
      [](double s) { return std::pow(s, -1.2) / 20.0; }, 1.2);
  // x == 1
  {
    std::vector<std::pair<double, double>> xs;
    for (int i = 0; i <= 200; ++i) xs.push_back({1.0 + i * 0.5, 1.0});
    auto v = gronwall_oracle(xs, k);
    CHECK(v.hypotheses_ok);
    CHECK(v.kappa < 0.1);
    CHECK(v.observed_sup == doctest::Approx(1.0));
    CHECK(v.bound_holds);
  }
  // direct integration of x' = 0.9 * int_t x k / s^2 (monotone fixed point;
  // the 0.9 keeps a genuine margin above discretization error)
  {
    const int n = 400;
    const double T = 200.0;
    std::vector<double> grid(n), x(n, 1.0);
    for (int i = 0; i < n; ++i) grid[i] = 1.0 + (T - 1.0) * i / (n - 1);
    for (int iter = 0; iter < 4; ++iter) {
      std::vector<double> xp(n, 0.0);
      for (int i = 0; i < n; ++i) {
        double acc = 0;
        for (int j = i; j + 1 < n; ++j) {
          const double mid = 0.5 * (grid[j] + grid[j + 1]);
          const double xm = 0.5 * (x[j] + x[j + 1]);
          acc += xm * k.K(mid) / (mid * mid) * (grid[j + 1] - grid[j]);
        }
        acc += x[n - 1] * k.K0(T);
        xp[i] = 0.9 * acc;
      }
      std::vector<double> xn(n, 1.0);
      for (int i = 1; i < n; ++i)
        xn[i] = xn[i - 1] + 0.5 * (xp[i - 1] + xp[i]) * (grid[i] - grid[i - 1]);
      x = xn;
    }
    std::vector<std::pair<double, double>> xs;
    for (int i = 0; i < n; ++i) xs.push_back({grid[i], x[i]});
    auto v = gronwall_oracle(xs, k);
    CHECK(v.hypotheses_ok);
    CHECK(v.observed_sup <= v.lemma_constant);
    CHECK(v.observed_sup > 1.0);  // genuinely growing data
  }
}

TEST_CASE("Gronwall oracle rejects violated hypotheses") {
  DecayProfile k = DecayProfile::custom(
      [](double s) { return std::pow(s, -1.2) / 20.0; }, 1.2);
  std::vector<std::pair<double, double>> xs;
  for (int i = 0; i <= 100; ++i) {
    const double t = 1.0 + i * 0.5;
    xs.push_back({t, t * t});  // superlinear growth
  }
  auto v = gronwall_oracle(xs, k);
  CHECK_FALSE(v.hypotheses_ok);
  CHECK(v.violated.find("x(t) <= t x(1)") != std::string::npos);

  DecayProfile big = DecayProfile::custom([](double s) { return 1.0 / s; }, 1.0);
  std::vector<std::pair<double, double>> ones = {{1.0, 1.0}, {2.0, 1.0}, {3.0, 1.0}};
  auto w = gronwall_oracle(ones, big);
  CHECK_FALSE(w.hypotheses_ok);  // int k/s = 1 >= 1/10
}

TEST_CASE("decay fit: Schwarzschild -3, Taub-NUT -3, flat underflow") {
  SchwarzschildModel sch(1.0);
  DecayFit f1 = decay_fit(
      sch,
      [](double r) {
        Vec p(4);
        p << 0.0, r, M_PI / 2, 0.0;
        return p;
      },
      10.0, 200.0, 40);
  CHECK(std::abs(f1.slope + 3.0) <= 0.05);

  MultiTaubNutModel tn(1.0, {0.0});
  DecayFit f2 = decay_fit(
      tn,
      [](double r) {
        Vec p(4);
        p << r, 0.0, 0.0, 0.0;
        return p;
      },
      20.0, 400.0, 40);
  CHECK(std::abs(f2.slope + 3.0) <= 0.15);

  EuclideanModel flat(3);
  CHECK_THROWS_AS(decay_fit(flat,
                            [](double r) {
                              Vec p(3);
                              p << r, 0, 0;
                              return p;
                            },
                            10.0, 100.0, 20),
                  CurvatureUnderflow);
}

TEST_CASE("decay-fit slope is stable under window doubling") {
  SchwarzschildModel sch(1.0);
  auto ray = [](double r) {
    Vec p(4);
    p << 0.0, r, M_PI / 2, 0.0;
    return p;
  };
  DecayFit narrow = decay_fit(sch, ray, 10.0, 100.0, 30);
  DecayFit wide = decay_fit(sch, ray, 10.0, 200.0, 30);
  CHECK(std::abs(narrow.slope - wide.slope) <= 0.02);
}

TEST_CASE("tangent-cone probe: rational angle hits exactly, golden stays bounded") {
  // theta = 1/3, r = 100, w = 2 pi / 3: k = 1 kills the angle, distance 1
  CHECK(min_chord_distance(1.0 / 3.0, 100.0, 2 * M_PI / 3, 50) == doctest::Approx(1.0));
  // w = 0: distance 0 at k = 0
  CHECK(min_chord_distance(1.0 / 3.0, 100.0, 0.0, 50) == 0.0);

  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  TangentConeProbe probe = tangent_cone_probe(golden, {100.0, 1000.0, 10000.0}, 32, 7);
  CHECK(probe.max_ratio <= 10.0);
  for (const auto& row : probe.rows) CHECK(row.ratio_to_sqrt_r > 0.0);
}

TEST_CASE("Hardy inequality: bumps, scale invariance, random suite") {
  auto bump = [](double t) {
    const double b = (t - 1) * (2 - t);
    return b * b * b;
  };
  auto dbump = [](double t) {
    const double b = (t - 1) * (2 - t);
    return 3 * b * b * (3 - 2 * t);
  };
  HardyReport h0 = hardy_check(bump, dbump, 1.0, 2.0, 0.0, 0.0);
  CHECK(h0.holds);
  CHECK(h0.ratio <= 4.0);

  // homogeneity: scaling phi by 7 leaves the ratio unchanged
  auto bump7 = [&](double t) { return 7.0 * bump(t); };
  auto dbump7 = [&](double t) { return 7.0 * dbump(t); };
  HardyReport h7 = hardy_check(bump7, dbump7, 1.0, 2.0, 0.0, 0.0);
  CHECK(h7.ratio == doctest::Approx(h0.ratio).epsilon(1e-12));

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double c1 = coeff(rng), c2 = coeff(rng), c3 = coeff(rng);
    auto phi = [&](double t) {
      const double b = (t - 1) * (2 - t);
      return (1 + c1 * t + c2 * t * t + c3 * t * t * t) * b * b * b;
    };
    auto dphi = [&](double t) {
      const double b = (t - 1) * (2 - t);
      const double db = 3 - 2 * t;
      return (c1 + 2 * c2 * t + 3 * c3 * t * t) * b * b * b +
             (1 + c1 * t + c2 * t * t + c3 * t * t * t) * 3 * b * b * db;
    };
    HardyReport h = hardy_check(phi, dphi, 1.0, 2.0, 2.0, 0.0);
    CHECK(h.ratio <= 4.0 / 9.0 + 1e-3);
  }
}

TEST_CASE("Hardy support violations are reported") {
  auto notbump = [](double t) { return 1.0 + 0 * t; };
  auto dnotbump = [](double) { return 0.0; };
  CHECK_THROWS_AS(hardy_check(notbump, dnotbump, 1.0, 2.0, 0.0, 0.0), SupportViolation);
  auto bump = [](double t) {
    const double b = (t - 1) * (2 - t);
    return b * b * b;
  };
  auto dbump = [](double t) {
    const double b = (t - 1) * (2 - t);
    return 3 * b * b * (3 - 2 * t);
  };
  CHECK_THROWS_AS(hardy_check(bump, dbump, 1.0, 2.0, 0.0, 1.5), SupportViolation);
}

TEST_CASE("power loops fold rotation angles exactly on flat quotients") {
  ScrewQuotientModel screw(1.0 / 7.0);
  Vec q(3);
  q << 30.0, 0.0, 0.0;
  for (int k : {1, 2}) {
    for (int m = 2; m <= 5; ++m) {
      Word wm(1);
      wm << k * m;
      GeodesicLoop power = loop_from_deck(screw, q, wm);
      CHECK(rotation_angle_norm(power.rotation) ==
            doctest::Approx(folded_angle(m * 2 * M_PI * k / 7.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("decay profiles are nonincreasing on a sampled grid") {
  for (auto prof : {DecayProfile::power(0.5), DecayProfile::power_shifted(1.0),
                    DecayProfile::log_squared()}) {
    double prev = prof.K(0.5);
    for (double s = 1.0; s <= 4096.0; s *= 2) {
      CHECK(prof.K(s) <= prev + 1e-15);
      prev = prof.K(s);
    }
  }
}

TEST_CASE("exponential rate fit recovers delta on synthetic data") {
  // |Rm| = e^{-delta r} has log-linear samples; the secondary fit returns delta
  SchwarzschildModel sch(1.0);
  (void)sch;
  std::vector<double> rs, ys;
  const double delta = 0.37;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < 30; ++i) {
    const double r = 5.0 + i;
    rs.push_back(r);
    ys.push_back(-delta * r + 2.0);
    sx += r;
    sy += ys.back();
    sxx += r * r;
    sxy += r * ys.back();
  }
  const int n = 30;
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(-slope == doctest::Approx(delta).epsilon(1e-12));
}

TEST_CASE("Gronwall oracle passes on a constant sliding-length trace") {
  // screw theta = 1/2, k = 2: pure translation of length 2 everywhere
  ScrewQuotientModel screw(0.5);
  Word w(1);
  w << 2;
  GeodesicLoop loop = loop_from_deck(screw, Vec(1.0 * Vec::Unit(3, 0)), w);
  CurvePath ray = CurvePath::from_function(
      screw,
      [](double r) {
        Vec p(3);
        p << r, 0, 0;
        return p;
      },
      1.0, 100.0, 64);
  SlideOptions opt;
  opt.samples = 80;
  opt.with_rotation = false;
  SlidingTrace trace = slide(screw, loop, ray, opt);
  std::vector<std::pair<double, double>> xs;
  for (const auto& s : trace.samples)
    xs.push_back({s.base.head(2).norm(), s.l});
  xs.front().first = 1.0;  // grid starts exactly at t = 1
  DecayProfile k = DecayProfile::custom(
      [](double s) { return std::pow(s, -1.2) / 20.0; }, 1.2);
  auto v = gronwall_oracle(xs, k);
  CHECK(v.hypotheses_ok);
  CHECK(v.observed_sup == doctest::Approx(1.0));
  CHECK(v.bound_holds);
}
