// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, not configurable.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "oracles.hpp"
#include "tale/asymptotics.hpp"
#include "tale/models.hpp"
#include "tale/scenario.hpp"
#include "tale/shortbasis.hpp"
#include "tale/topology.hpp"

using namespace tale;

namespace {

int failures = 0;
std::vector<std::string> notes;

void report(int number, const std::string& label, bool pass,
            const std::string& detail = "") {
  std::printf("[%s] %2d. %s%s%s\n", pass ? "PASS" : "FAIL", number, label.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++failures;
}

CurvePath model_ray(const MetricModel& model, double r0, double r1, int samples = 96) {
  return CurvePath::from_function(
      model, [&](double r) { return standard_ray_point(model, r); }, r0, r1, samples);
}

// 1. screw loop formula; 2. the pi/(2r) holonomy bound
void criteria_1_2() {
  double worst_len = 0, worst_rot = 0, worst_bound = -1e300;
  int pi4_violations = 0;
  for (double theta : {0.5, 1.0 / 3.0, 0.4}) {
    ScrewQuotientModel screw(theta);
    for (double r : {2.0, 10.0, 100.0}) {
      Vec q(3);
      q << r, 0.0, 0.0;
      for (int k = -20; k <= 20; ++k) {
        if (k == 0) continue;
        Word w(1);
        w << k;
        GeodesicLoop loop = loop_from_deck(screw, q, w);
        const double rot = rotation_angle_norm(loop.rotation);
        worst_len =
            std::max(worst_len, std::abs(loop.length - oracles::screw_length(r, theta, k)));
        worst_rot = std::max(worst_rot, std::abs(rot - oracles::screw_rotation(theta, k)));
        worst_bound = std::max(worst_bound, rot - M_PI / (2.0 * r) * loop.length);
        if (rot > M_PI / (4.0 * r) * loop.length + 1e-12) ++pi4_violations;
      }
    }
  }
  {
    std::ostringstream d;
    d << "max |L - oracle| = " << worst_len << ", max |rot - oracle| = " << worst_rot;
    report(1, "screw-quotient loop formula (theta in {1/2,1/3,2/5}, r in {2,10,100}, |k|<=20)",
           worst_len <= 1e-8 && worst_rot <= 1e-10, d.str());
  }
  {
    std::ostringstream d;
    d << "sup(rot - (pi/2r) L) = " << worst_bound << "; pi/4 form violated "
      << pi4_violations << " times (documented deviation)";
    report(2, "holonomy bound ||r|| <= (pi/2r) L", worst_bound <= 1e-12 && pi4_violations > 0,
           d.str());
  }
}

// 3. flat sliding along radial rays
void criterion_3() {
  ScrewQuotientModel screw(1.0 / 3.0);
  Word w(1);
  w << 1;
  GeodesicLoop loop = loop_from_deck(screw, standard_ray_point(screw, 2.0), w);
  CurvePath ray = model_ray(screw, 2.0, 50.0, 128);
  SlideOptions opt;
  opt.samples = 200;
  SlidingTrace trace = slide(screw, loop, ray, opt);
  double worst_l = 0;
  for (const auto& s : trace.samples) {
    const double r = s.base.head(2).norm();
    worst_l = std::max(worst_l, std::abs(s.l - oracles::screw_length(r, 1.0 / 3.0, 1)));
  }
  std::ostringstream d;
  d << "max |l - closed form| = " << worst_l << ", rot drift = " << trace.max_rot_norm_drift();
  report(3, "flat sliding: l(t) closed form (1e-7), ||r(t)|| drift (1e-9) on t in [2,50]",
         worst_l <= 1e-7 && trace.max_rot_norm_drift() <= 1e-9, d.str());
}

// 4. discrete T:hol(i) inequality on Taub-NUT rays, rho in [20, 200]
void criterion_4() {
  MultiTaubNutModel tn(1.0, {0.0});
  Word w(1);
  w << 1;
  GeodesicLoop loop = loop_from_deck(tn, standard_ray_point(tn, 20.0), w);
  CurvePath ray = model_ray(tn, 20.0, 200.0, 128);
  SlideOptions opt;
  opt.samples = 1801;  // h = 0.1 along the ray
  SlidingTrace trace = slide(tn, loop, ray, opt);
  bool ok = true;
  double tightest = 1e300;
  for (size_t i = 1; i < trace.samples.size(); ++i) {
    const auto& s0 = trace.samples[i - 1];
    const auto& s1 = trace.samples[i];
    const double h = (s1.base.head(3) - s0.base.head(3)).norm();
    const double dev = std::max(matrix_deviation(s0.rot_transported),
                                matrix_deviation(s1.rot_transported));
    const double margin = h * dev + 10 * h * h - std::abs(s1.l - s0.l);
    tightest = std::min(tightest, margin);
    ok = ok && margin >= -1e-12;
  }
  std::ostringstream d;
  d << trace.samples.size() - 1 << " steps, min margin = " << tightest;
  report(4, "curved sliding: |dl| <= h max|r-I| + 10h^2 at every step (Taub-NUT)", ok,
         d.str());
}

// 5. Ricci-flatness of Schwarzschild and 2-center multi-Taub-NUT
void criterion_5() {
  double worst = 0;
  {
    SchwarzschildModel sch(1.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ur(5.0, 100.0), uu(0.3, M_PI - 0.3),
        uv(0.0, 2 * M_PI), ut(0.0, sch.fiber_period());
    for (int i = 0; i < 50; ++i) {
      Vec p(4);
      p << ut(rng), ur(rng), uu(rng), uv(rng);
      worst = std::max(worst, sch.riemann(p).ricci_norm);
    }
  }
  double worst_tn = 0;
  {
    MultiTaubNutModel tn(1.0, {-1.0, 1.0});
    std::mt19937_64 rng(8);
    for (int i = 0; i < 50; ++i)
      worst_tn = std::max(worst_tn, tn.riemann(tn.sample_domain(rng)).ricci_norm);
  }
  std::ostringstream d;
  d << "max |Ric|: schwarzschild " << worst << ", multi-taub-nut " << worst_tn;
  report(5, "Ricci-flat validation: |Ric| <= 1e-6 at 50 points per model",
         worst <= 1e-6 && worst_tn <= 1e-6, d.str());
}

// 6. decay exponents
void criterion_6() {
  SchwarzschildModel sch(1.0);
  DecayFit f1 = decay_fit(
      sch, [&](double r) { return standard_ray_point(sch, r); }, 10.0, 200.0, 40);
  MultiTaubNutModel tn(1.0, {0.0});
  DecayFit f2 = decay_fit(
      tn, [&](double r) { return standard_ray_point(tn, r); }, 20.0, 400.0, 40);
  std::ostringstream d;
  d << "schwarzschild slope " << f1.slope << ", taub-nut slope " << f2.slope;
  report(6, "decay exponents: schwarzschild -3 +- 0.05, taub-nut -3 +- 0.15",
         std::abs(f1.slope + 3.0) <= 0.05 && std::abs(f2.slope + 3.0) <= 0.15, d.str());
}

// 7. exact short bases on Z^2, hexagonal, and 10 random rational lattices
void criterion_7() {
  bool ok = true;
  std::string detail;
  {
    std::vector<std::vector<Rat>> cols = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
    auto basis = standard_short_basis(rational_lattice_subset(cols, 3000.0), 1.0 / 20000,
                                      9000.0);
    ok = ok && basis.m() == 2 && basis.lambda2 == Rat(1);
    ok = ok && verify_basis_properties(basis, basis.rho_bar, true).all_pass();
  }
  {
    auto basis =
        standard_short_basis(hexagonal_lattice_subset(10000.0), 1.0 / 20000, 30000.0);
    const bool lambda_exact = basis.lambda2 == Quad<3>(Rat(4, 3));
    ok = ok && basis.m() == 2 && lambda_exact;
    ok = ok && verify_basis_properties(basis, basis.rho_bar, true).all_pass();
    detail = lambda_exact ? "hexagonal lambda = 2/sqrt(3) exactly" : "hexagonal lambda wrong";
  }
  {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> num(-2, 2);
    std::uniform_int_distribution<int> den(1, 3);
    int built = 0;
    while (built < 10) {
      const int dim = 2 + (built % 2);
      std::vector<std::vector<Rat>> cols(dim, std::vector<Rat>(dim));
      for (int c = 0; c < dim; ++c)
        for (int r = 0; r < dim; ++r) cols[c][r] = Rat(num(rng), den(rng));
      Mat B(dim, dim);
      for (int c = 0; c < dim; ++c)
        for (int r = 0; r < dim; ++r) B(r, c) = to_double(cols[c][r]);
      if (std::abs(B.determinant()) < 1e-9) continue;
      Eigen::JacobiSVD<Mat> svd(B);
      if (svd.singularValues().minCoeff() < 0.45) continue;
      double maxlen = 0;
      for (int c = 0; c < dim; ++c) maxlen = std::max(maxlen, B.col(c).norm());
      const double rho1 = (dim == 2 ? 1728.0 : 97600.0) * maxlen;
      auto basis = standard_short_basis(rational_lattice_subset(cols, rho1), 1.0 / 20000,
                                        3.0 * rho1);
      ok = ok && basis.m() == dim;
      ok = ok && verify_basis_properties(basis, basis.rho_bar, true).all_pass();
      ++built;
    }
  }
  report(7, "short-basis exactness (Z^2, hexagonal, 10 random rational lattices)", ok,
         detail);
}

// 8. theta-perturbed robustness across 100 seeds
void criterion_8() {
  Mat B = Mat::Identity(2, 2);
  bool ok = true;
  for (uint64_t seed = 1; seed <= 100 && ok; ++seed) {
    auto spec = perturbed_lattice_subset(B, 1.0 / 200, 1000.0, seed);
    ok = ok && verify_subset_axioms(spec, 8.0).empty();  // P:norm(ii)/(iii) bounds
    auto basis = standard_short_basis(spec, 1.0 / 20000, 3000.0);
    ok = ok && basis.m() == 2;
    ok = ok && verify_basis_properties(basis, 8.0, true).all_pass();  // P:basis(iv)
  }
  report(8, "theta = 1/200 perturbed lattices pass P:norm(ii)-(iii), P:basis(iv) (100 seeds)",
         ok);
}

// 9. Hitchin-Thorpe table
void criterion_9() {
  bool ok = true;
  auto cyc = [](int chi, int tau, int e) {
    EndDescriptor d;
    d.end_type = EndType::ALF_Cyclic;
    d.chi = chi;
    d.tau = tau;
    d.euler_number = e;
    return d;
  };
  ok = ok && std::abs(hitchin_thorpe(cyc(1, 0, -1)).slack) <= 1e-12;
  for (int k = 0; k <= 5; ++k)
    ok = ok && std::abs(hitchin_thorpe(cyc(k + 1, -k, -k - 1)).slack) <= 1e-12;
  for (int k = 2; k <= 6; ++k) {
    EndDescriptor d;
    d.end_type = EndType::ALF_Dihedral;
    d.chi = k + 1;
    d.tau = -k;
    d.euler_number = 2 - k;
    ok = ok && std::abs(hitchin_thorpe(d).slack) <= 1e-12;
  }
  ok = ok && std::abs(hitchin_thorpe(cyc(2, 0, 0)).slack - 4.0) <= 1e-12;
  const std::vector<int> orders = {1, 2, 3, 4, 6};
  const std::vector<double> etas = {0.0, 0.0, -2.0 / 3.0, -1.0, -4.0 / 3.0};
  for (size_t i = 0; i < orders.size(); ++i) {
    EndDescriptor d;
    d.end_type = EndType::ALG;
    d.monodromy_order = orders[i];
    ok = ok && std::abs(eta_lambda(d).first - etas[i]) <= 1e-15;
  }
  report(9, "Hitchin-Thorpe table: Taub-NUT, ALF-A_k, ALF-D_k equalities; Schwarzschild slack 4; ALG eta row",
         ok);
}

// 10. monodromy classification
void criterion_10() {
  bool ok = true;
  std::array<Eigen::Matrix2i, 5> reps;
  reps[0] << 1, 0, 0, 1;
  reps[1] << -1, 0, 0, -1;
  reps[2] << 0, -1, 1, -1;
  reps[3] << 0, -1, 1, 0;
  reps[4] << 1, -1, 1, 0;
  const std::array<int, 5> orders = {1, 2, 3, 4, 6};
  for (int i = 0; i < 5; ++i) ok = ok && monodromy_class(reps[i]).order == orders[i];
  Eigen::Matrix2i shear;
  shear << 1, 1, 0, 1;
  bool rejected = false;
  try {
    monodromy_class(shear);
  } catch (const InfiniteOrder&) {
    rejected = true;
  }
  report(10, "monodromy: L_1..L_5 classify to orders (1,2,3,4,6); shear rejected",
         ok && rejected);
}

// 11. G(A) enumeration with closure
void criterion_11() {
  bool ok = enumerate_G(Mat::Identity(2, 2), 1).size() == 8;
  Mat hex(2, 2);
  hex << 1.0, 0.5, 0.0, std::sqrt(3.0) / 2.0;
  ok = ok && enumerate_G(hex, 2).size() == 12;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  Mat A(2, 2);
  A << u(rng), 0.3 * u(rng), 0.0, u(rng);
  ok = ok && enumerate_G(A, 8).size() == 2;
  report(11, "G(A): |G(I_2)| = 8, |G(hexagonal)| = 12, |G(generic)| = 2, group-closed", ok);
}

// 12. tangent-cone probe for the golden rotation
void criterion_12() {
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  TangentConeProbe probe = tangent_cone_probe(golden, {1e2, 1e3, 1e4}, 32, 7);
  std::ostringstream d;
  d << "max ratio = " << probe.max_ratio;
  report(12, "tangent-cone probe: max min-chord / sqrt(r) <= 10 at r in {1e2,1e3,1e4}",
         probe.max_ratio <= 10.0, d.str());
}

// 13. Hardy inequality over 50 random bumps x delta in {0,1,2}
void criterion_13() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  bool ok = true;
  double worst_excess = -1e300;
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
    for (double delta : {0.0, 1.0, 2.0}) {
      HardyReport h = hardy_check(phi, dphi, 1.0, 2.0, delta, 0.0);
      worst_excess = std::max(worst_excess, h.ratio - h.bound);
      ok = ok && h.ratio <= h.bound + 1e-3;
    }
  }
  std::ostringstream d;
  d << "worst ratio - bound = " << worst_excess;
  report(13, "Hardy inequality: 50 bumps x delta in {0,1,2}, ratio <= 4/(delta+1)^2 + 1e-3",
         ok, d.str());
}

// 14. Jacobi comparison envelopes on [1, 1e3] for K(s) = s^{-1/2}
void criterion_14() {
  DecayProfile prof = DecayProfile::power(0.5);
  JacobiReport vola = jacobi_compare(prof, 1.0, 1000.0);
  JacobiReport half = jacobi_compare_halfscale(prof, 1000.0);
  std::ostringstream d;
  d << "t<=J<=C1 t with C1 = " << vola.envelope_constant << " (max ratio "
    << vola.max_ratio << "); t-1<=J<=Ct with C = " << half.envelope_constant;
  report(14, "Jacobi comparisons: volume ODE and half-scale ODE envelopes",
         vola.bounds_hold && half.bounds_hold, d.str());
}

// 15. torus at infinity: Taub-NUT fiber limit and flat Gram recovery
void criterion_15() {
  bool ok = true;
  std::ostringstream d;
  {
    MultiTaubNutModel tn(1.0, {0.0});
    Word w(1);
    w << 1;
    GeodesicLoop loop = loop_from_deck(tn, standard_ray_point(tn, 20.0), w);
    CurvePath ray = model_ray(tn, 20.0, 1000.0, 128);
    SlideOptions opt;
    opt.samples = 96;
    opt.with_rotation = false;
    SlidingTrace trace = slide(tn, loop, ray, opt);
    FlatTorusAtInfinity tinf = torus_at_infinity({trace});
    const double err = std::abs(tinf.lengths[0] - 8 * M_PI);
    d << "fiber length limit error = " << err;
    ok = ok && err <= 1e-3;
  }
  {
    auto torus = make_model("flat-torus", {{"n", 4}, {"m", 2}, {"side", 2.0}});
    Word wa(2), wb(2);
    wa << 1, 0;
    wb << 0, 1;
    Vec q = Vec::Zero(4);
    q[0] = 5.0;
    CurvePath ray = model_ray(*torus, 5.0, 60.0, 64);
    SlideOptions opt;
    opt.samples = 50;
    std::vector<SlidingTrace> traces = {
        slide(*torus, loop_from_deck(*torus, q, wa), ray, opt),
        slide(*torus, loop_from_deck(*torus, q, wb), ray, opt)};
    FlatTorusAtInfinity tinf = torus_at_infinity(traces);
    ok = ok && (tinf.gram - 4.0 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-10;
    ok = ok && tinf.G_infinity.size() == 8;
  }
  report(15, "torus at infinity: Taub-NUT fiber -> 8 pi m (1e-3 at rho = 1e3); flat Gram exact",
         ok, d.str());
}

// 16. determinism of verify-all under a fixed seed
void criterion_16() {
  RunOptions opt;
  opt.seed = 7;
  opt.with_timestamp = false;
  const Json a = run_verify_all(nullptr, opt);
  const Json b = run_verify_all(nullptr, opt);
  bool ok = a.dump() == b.dump() && a["pass"].get<bool>();

  // and through the CLI, byte-for-byte on disk
  const std::string base = "/tmp/tale_acceptance_det";
  const std::string cmd_a = std::string(TALE_CLI_EXE) +
                            " verify-all --seed 7 --no-timestamp --out " + base +
                            "_a > /dev/null 2>&1";
  const std::string cmd_b = std::string(TALE_CLI_EXE) +
                            " verify-all --seed 7 --no-timestamp --out " + base +
                            "_b > /dev/null 2>&1";
  ok = ok && std::system(cmd_a.c_str()) == 0 && std::system(cmd_b.c_str()) == 0;
  auto slurp = [](const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string ja = slurp(base + "_a/verify-all.json");
  const std::string jb = slurp(base + "_b/verify-all.json");
  ok = ok && !ja.empty() && ja == jb;
  report(16, "determinism: verify-all twice with seed 7 is byte-identical", ok);
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criteria_1_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  criterion_13();
  criterion_14();
  criterion_15();
  criterion_16();
  if (failures == 0) {
    std::printf("all 16 criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", failures);
  return 1;
}
