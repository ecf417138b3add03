#include "tale/scenario.hpp"

#include <array>
#include <cmath>
#include <filesystem>

#include "tale/asymptotics.hpp"
#include "tale/shortbasis.hpp"
#include "tale/topology.hpp"

namespace tale {

namespace {

double screw_loop_length(double r, double theta, int k) {
  const double s = std::sin(M_PI * k * theta);
  return std::sqrt(static_cast<double>(k) * k + 4.0 * r * r * s * s);
}

double screw_rot_oracle(double theta, int k) { return folded_angle(2 * M_PI * k * theta); }

}  // namespace

DecayProfile profile_from_table(const toml::Table& t) {
  const std::string form = t.string_or("form", "power");
  if (form == "power") return DecayProfile::power(t.number_or("exponent", 0.5));
  if (form == "power-shifted")
    return DecayProfile::power_shifted(t.number_or("exponent", 0.5));
  if (form == "log-squared") return DecayProfile::log_squared();
  if (form == "constant") return DecayProfile::constant(t.number_or("value", 1.0));
  throw ConfigError("unknown decay profile form: " + form);
}

Vec standard_ray_point(const MetricModel& model, double r) {
  const std::string& n = model.name();
  if (n == "schwarzschild") {
    Vec p(4);
    p << 0.0, r, M_PI / 2, 0.0;
    return p;
  }
  if (n == "taub-nut" || n == "multi-taub-nut") {
    Vec p(4);
    p << r, 0.0, 0.0, 0.0;
    return p;
  }
  Vec p = Vec::Zero(model.dim());
  p[0] = r;
  return p;
}

std::shared_ptr<MetricModel> model_from_table(const toml::Table& cfg) {
  const toml::Table* mt = cfg.table("model");
  if (!mt) throw ConfigError("scenario: missing [model] table");
  const std::string name = mt->string_or("name", "");
  if (name.empty()) throw ConfigError("scenario: model name missing");
  std::map<std::string, double> params;
  for (const auto& [k, v] : mt->values)
    if (k != "name" && v.is_number()) params[k] = v.as_double();
  return make_model(name, params);
}

Json run_curvature_decay(const toml::Table& cfg, const RunOptions& opt) {
  auto model = model_from_table(cfg);
  const toml::Table* t = cfg.table("task");
  const double r_min = t ? t->number_or("r_min", 10.0) : 10.0;
  const double r_max = t ? t->number_or("r_max", 200.0) : 200.0;
  const int samples = t ? static_cast<int>(t->int_or("samples", 40)) : 40;
  const double expected = t ? t->number_or("expected_slope", -3.0) : -3.0;
  const double tolerance = t ? t->number_or("slope_tol", 0.05) : 0.05;

  DecayFit fit = decay_fit(
      *model, [&](double r) { return standard_ray_point(*model, r); }, r_min, r_max,
      samples);

  Json j = report_envelope("curvature-decay", opt.with_timestamp);
  j["model"] = model->name();
  j["r_min"] = r_min;
  j["r_max"] = r_max;
  j["samples"] = samples;
  j["slope"] = fit.slope;
  j["residual"] = fit.residual;
  j["expected_slope"] = expected;
  j["pass"] = std::abs(fit.slope - expected) <= tolerance;
  if (!opt.out_dir.empty()) {
    std::vector<std::vector<double>> rows;
    for (auto& [r, v] : fit.data) rows.push_back({r, v});
    write_csv(opt.out_dir + "/decay_" + model->name() + ".csv", {"r", "rm_norm"}, rows);
  }
  return j;
}

Json run_loops(const toml::Table& cfg, const RunOptions& opt) {
  auto model = model_from_table(cfg);
  const toml::Table* t = cfg.table("task");
  const double r = t ? t->number_or("r", 2.0) : 2.0;
  const double radius = t ? t->number_or("radius", 4.0) : 4.0;
  const Vec q = standard_ray_point(*model, r);

  auto search = find_loops(*model, q, radius);
  Json j = report_envelope("loops", opt.with_timestamp);
  j["model"] = model->name();
  j["base_radius"] = r;
  j["search_radius"] = radius;
  j["complete"] = search.complete;
  Json rows = Json::array();
  bool ok = true;
  for (const auto& loop : search.loops) {
    Json row;
    if (loop.word) {
      std::vector<int> w(loop.word->data(), loop.word->data() + loop.word->size());
      row["word"] = w;
    }
    row["length"] = loop.length;
    row["rot_norm"] = rotation_angle_norm(loop.rotation);
    row["translation_norm"] = loop.translation.norm();
    ok = ok && loop_consistency_defect(*model, loop) <= 1e-6;
    rows.push_back(row);
  }
  j["loops"] = rows;

  // per-radius holonomy condition report when radii are supplied
  if (t && t->has("condition_radii")) {
    const std::vector<double> radii = t->at("condition_radii").as_double_array();
    const double lo = *std::min_element(radii.begin(), radii.end());
    const double hi = *std::max_element(radii.begin(), radii.end());
    CurvePath ray = CurvePath::from_function(
        *model, [&](double rr) { return standard_ray_point(*model, rr); }, 0.8 * lo,
        1.2 * hi, 96);
    HolonomyConfig config;
    auto rep = check_holonomy_conditions(*model, ray, config, radii);
    Json crows = Json::array();
    for (const auto& row : rep.rows) {
      Json cj;
      cj["radius"] = row.radius;
      cj["sup_rot_norm"] = row.sup_rot_norm;
      cj["sup_scaled"] = row.sup_scaled;
      cj["hc_pass"] = row.hc_pass;
      cj["hcprime_pass"] = row.hcprime_pass;
      cj["shc_pass"] = row.shc_pass;
      crows.push_back(cj);
    }
    j["conditions"] = crows;
  }
  j["pass"] = ok;
  return j;
}

Json run_slide(const toml::Table& cfg, const RunOptions& opt) {
  auto model = model_from_table(cfg);
  const toml::Table* t = cfg.table("task");
  const double r0 = t ? t->number_or("r_min", 2.0) : 2.0;
  const double r1 = t ? t->number_or("r_max", 50.0) : 50.0;
  const int samples = t ? static_cast<int>(t->int_or("samples", 200)) : 200;
  const int k = t ? static_cast<int>(t->int_or("word", 1)) : 1;

  const auto* deck = model->deck();
  if (!deck) throw NoDeckGroup("slide: model has no deck group");
  Word w = Word::Zero(deck->rank());
  w[0] = k;
  GeodesicLoop loop = loop_from_deck(*model, standard_ray_point(*model, r0), w);

  CurvePath ray = CurvePath::from_function(
      *model, [&](double r) { return standard_ray_point(*model, r); }, r0, r1,
      std::max(64, samples));
  SlideOptions sopt;
  sopt.samples = samples;
  SlidingTrace trace = slide(*model, loop, ray, sopt);

  auto [L, resid] = trace.fitted_length_limit();
  Json j = report_envelope("slide", opt.with_timestamp);
  j["model"] = model->name();
  j["word"] = k;
  j["r_min"] = r0;
  j["r_max"] = r1;
  j["samples"] = samples;
  j["rot_norm_drift"] = trace.max_rot_norm_drift();
  j["fitted_length_limit"] = L;
  j["fit_residual"] = resid;
  j["pass"] = true;
  if (!opt.out_dir.empty()) {
    std::vector<std::vector<double>> rows;
    for (const auto& s : trace.samples)
      rows.push_back({s.t, s.l, s.rot_norm});
    write_csv(opt.out_dir + "/slide_" + model->name() + ".csv", {"t", "l", "rot_norm"},
              rows);
    // the underlying curve samples (t, point, velocity)
    std::vector<std::string> header = {"t"};
    for (int i = 0; i < model->dim(); ++i) header.push_back("p" + std::to_string(i));
    for (int i = 0; i < model->dim(); ++i) header.push_back("v" + std::to_string(i));
    std::vector<std::vector<double>> crows;
    for (const auto& s : ray.samples) {
      std::vector<double> row = {s.t};
      for (int i = 0; i < model->dim(); ++i) row.push_back(s.point[i]);
      for (int i = 0; i < model->dim(); ++i) row.push_back(s.velocity[i]);
      crows.push_back(row);
    }
    write_csv(opt.out_dir + "/ray_" + model->name() + ".csv", header, crows);
  }
  return j;
}

Json run_short_basis(const toml::Table& cfg, const RunOptions& opt) {
  const toml::Table* t = cfg.table("task");
  const std::string lattice = t ? t->string_or("lattice", "hexagonal") : "hexagonal";
  const double rho0 = t ? t->number_or("rho0", 30000.0) : 30000.0;

  Json j = report_envelope("short-basis", opt.with_timestamp);
  j["lattice"] = lattice;
  j["rho0"] = rho0;

  auto emit = [&](auto basis) {
    j["m"] = basis.m();
    Json sig = Json::array(), vecs = Json::array();
    for (int i = 0; i < basis.m(); ++i) {
      sig.push_back(std::sqrt(to_double(basis.sigma2[i])));
      vecs.push_back(to_doubleS(basis.vectors[i]));
    }
    j["sigma"] = sig;
    j["vectors"] = vecs;
    j["lambda"] = std::sqrt(to_double(basis.lambda2));
    j["rho_bar"] = basis.rho_bar;
    Json sc = Json::array();
    for (int i = 0; i < basis.m(); ++i)
      for (int k2 = 0; k2 < basis.m(); ++k2)
        for (long long v : basis.structure_constants[i][k2])
          sc.push_back(v);
    j["structure_constants"] = sc;
    auto rep = verify_basis_properties(basis, basis.rho_bar, true);
    Json checks = Json::array();
    bool pass = true;
    for (const auto& c : rep.checks) {
      Json cj;
      cj["name"] = c.name;
      cj["pass"] = c.pass;
      if (!c.witness.empty()) cj["witness"] = c.witness;
      checks.push_back(cj);
      pass = pass && c.pass;
    }
    j["properties"] = checks;
    j["pass"] = pass;
  };

  if (lattice == "hexagonal") {
    emit(standard_short_basis(hexagonal_lattice_subset(rho0 / 3.0), 1.0 / 20000, rho0));
  } else if (lattice == "z2") {
    std::vector<std::vector<Rat>> cols = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
    emit(standard_short_basis(rational_lattice_subset(cols, rho0 / 3.0), 1.0 / 20000,
                              rho0));
  } else if (lattice == "custom") {
    // exact rational columns: flat column-major `columns` over `denominator`
    if (!t || !t->has("columns"))
      throw ConfigError("short-basis: custom lattice needs task.columns");
    const std::vector<double> flat = t->at("columns").as_double_array();
    const long long den = t->int_or("denominator", 1);
    const int dim = static_cast<int>(t->int_or("dim", 2));
    if (dim < 1 || dim > 3 || flat.size() != static_cast<size_t>(dim) * dim)
      throw ConfigError("short-basis: columns must hold dim*dim entries, dim <= 3");
    std::vector<std::vector<Rat>> cols(dim, std::vector<Rat>(dim));
    for (int c = 0; c < dim; ++c)
      for (int r = 0; r < dim; ++r)
        cols[c][r] = Rat(static_cast<long long>(std::llround(flat[c * dim + r] * den)), den);
    emit(standard_short_basis(rational_lattice_subset(cols, rho0 / 3.0), 1.0 / 20000,
                              rho0));
  } else {
    throw ConfigError("short-basis: unknown lattice " + lattice);
  }
  return j;
}

Json run_tangent_cone(const toml::Table& cfg, const RunOptions& opt) {
  const toml::Table* t = cfg.table("task");
  double theta = (std::sqrt(5.0) - 1.0) / 2.0;
  if (t && t->has("theta")) theta = t->at("theta").as_double();
  std::vector<double> radii = {100.0, 1000.0, 10000.0};
  if (t && t->has("radii")) radii = t->at("radii").as_double_array();
  const int angles = t ? static_cast<int>(t->int_or("angles", 32)) : 32;
  const double cap = t ? t->number_or("ratio_cap", 10.0) : 10.0;

  TangentConeProbe probe = tangent_cone_probe(theta, radii, angles, opt.seed);
  Json j = report_envelope("tangent-cone", opt.with_timestamp);
  j["theta"] = theta;
  j["angles"] = angles;
  Json rows = Json::array();
  for (const auto& row : probe.rows) {
    Json rj;
    rj["radius"] = row.radius;
    rj["max_min_distance"] = row.max_min_distance;
    rj["ratio_to_sqrt_r"] = row.ratio_to_sqrt_r;
    rows.push_back(rj);
  }
  j["rows"] = rows;
  j["max_ratio"] = probe.max_ratio;
  j["pass"] = probe.max_ratio <= cap;
  if (!opt.out_dir.empty()) {
    std::vector<std::vector<double>> csv;
    for (const auto& row : probe.rows)
      csv.push_back({row.radius, row.max_min_distance, cap * std::sqrt(row.radius),
                     row.ratio_to_sqrt_r <= cap ? 1.0 : 0.0});
    write_csv(opt.out_dir + "/tangent_cone.csv", {"radius", "value", "bound", "pass"}, csv);
  }
  return j;
}

Json run_hitchin_thorpe(const toml::Table& cfg, const RunOptions& opt) {
  const toml::Table* t = cfg.table("task");
  if (!t) throw ConfigError("hitchin-thorpe: missing [task] table");
  EndDescriptor d;
  d.end_type = end_type_from_name(t->string_or("type", "alf-cyclic"));
  d.chi = static_cast<int>(t->int_or("chi", 0));
  d.tau = static_cast<int>(t->int_or("tau", 0));
  d.euler_number = static_cast<int>(t->int_or("euler", 0));
  d.gamma_order = static_cast<int>(t->int_or("gamma_order", 1));
  d.monodromy_order = static_cast<int>(t->int_or("monodromy", 1));
  if (t->has("eta")) d.eta_ale = t->at("eta").as_double();
  if (d.end_type == EndType::ALE && !d.eta_ale && t->bool_or("derive_eta", false))
    d.eta_ale = ale_eta_from_equality(d.chi, d.tau, d.gamma_order);

  HTReport rep = hitchin_thorpe(d);
  Json j = report_envelope("hitchin-thorpe", opt.with_timestamp);
  j["type"] = end_type_name(d.end_type);
  j["chi"] = d.chi;
  j["tau"] = d.tau;
  if (d.end_type == EndType::ALF_Cyclic || d.end_type == EndType::ALF_Dihedral)
    j["euler"] = d.euler_number;
  j["eta"] = rep.eta;
  j["lambda"] = rep.lambda;
  j["slack"] = rep.slack;
  j["equality"] = rep.equality;
  j["boundary"] = classify_boundary(d);
  if (t->bool_or("tables", false))
    j["tables"] = Json::parse(classification_tables_json());
  j["pass"] = true;  // report-only task
  return j;
}

namespace {

Json check_entry(const std::string& name, bool pass, Json details = Json::object()) {
  Json j;
  j["name"] = name;
  j["pass"] = pass;
  if (!details.empty()) j["details"] = details;
  return j;
}

// Built-in verification catalog: fast versions of the acceptance checks.
std::vector<Json> builtin_catalog(const RunOptions& opt) {
  std::vector<Json> checks;

  {  // screw loop formula + holonomy bound
    double worstL = 0, worstR = 0, worst_bound = 0;
    int paper_constant_violations = 0;
    for (double theta : {0.5, 1.0 / 3.0, 0.4}) {
      ScrewQuotientModel screw(theta);
      for (double r : {2.0, 10.0}) {
        Vec q(3);
        q << r, 0.0, 0.0;
        for (int k = -8; k <= 8; ++k) {
          if (k == 0) continue;
          Word w(1);
          w[0] = k;
          GeodesicLoop loop = loop_from_deck(screw, q, w);
          const double rot = rotation_angle_norm(loop.rotation);
          worstL = std::max(worstL, std::abs(loop.length - screw_loop_length(r, theta, k)));
          worstR = std::max(worstR, std::abs(rot - screw_rot_oracle(theta, k)));
          worst_bound = std::max(worst_bound, rot - M_PI / (2 * r) * loop.length);
          if (rot > M_PI / (4 * r) * loop.length + 1e-12) ++paper_constant_violations;
        }
      }
    }
    Json d;
    d["max_length_error"] = worstL;
    d["max_rotation_error"] = worstR;
    d["pi_over_4_violations"] = paper_constant_violations;
    checks.push_back(check_entry("screw-loop-formula", worstL <= 1e-8 && worstR <= 1e-10, d));
    checks.push_back(check_entry("holonomy-bound-pi-over-2r", worst_bound <= 1e-12, d));
  }

  {  // flat sliding along a radial ray
    ScrewQuotientModel screw(1.0 / 3.0);
    Word w(1);
    w[0] = 1;
    GeodesicLoop loop = loop_from_deck(screw, standard_ray_point(screw, 2.0), w);
    CurvePath ray = CurvePath::from_function(
        screw, [&](double r) { return standard_ray_point(screw, r); }, 2.0, 20.0, 64);
    SlideOptions sopt;
    sopt.samples = 60;
    SlidingTrace trace = slide(screw, loop, ray, sopt);
    double worst = 0;
    for (const auto& s : trace.samples)
      worst = std::max(worst,
                       std::abs(s.l - screw_loop_length(s.base.head(2).norm(), 1.0 / 3.0, 1)));
    Json d;
    d["max_l_error"] = worst;
    d["rot_norm_drift"] = trace.max_rot_norm_drift();
    checks.push_back(check_entry(
        "flat-sliding", worst <= 1e-7 && trace.max_rot_norm_drift() <= 1e-9, d));
  }

  {  // Schwarzschild Ricci-flatness and decay slope
    SchwarzschildModel sch(1.0);
    std::mt19937_64 rng(opt.seed);
    double worst = 0;
    for (int i = 0; i < 12; ++i) {
      Vec p = sch.sample_domain(rng);
      worst = std::max(worst, sch.riemann(p).ricci_norm);
    }
    DecayFit fit = decay_fit(
        sch, [&](double r) { return standard_ray_point(sch, r); }, 10.0, 100.0, 25);
    Json d;
    d["max_ricci"] = worst;
    d["slope"] = fit.slope;
    checks.push_back(
        check_entry("schwarzschild-ricci-decay",
                    worst <= 1e-6 && std::abs(fit.slope + 3.0) <= 0.05, d));
  }

  {  // hexagonal short basis, exact
    auto basis = standard_short_basis(hexagonal_lattice_subset(10000.0), 1.0 / 20000,
                                      30000.0);
    const bool sig_ok = basis.m() == 2 && basis.sigma2[0] == Quad<3>(Rat(1)) &&
                        basis.sigma2[1] == Quad<3>(Rat(3, 4));
    const bool lam_ok = basis.lambda2 == Quad<3>(Rat(4, 3));
    Json d;
    d["m"] = basis.m();
    d["lambda"] = std::sqrt(to_double(basis.lambda2));
    checks.push_back(check_entry("hexagonal-short-basis", sig_ok && lam_ok, d));
  }

  {  // Hitchin-Thorpe table
    bool ok = true;
    EndDescriptor tn;
    tn.end_type = EndType::ALF_Cyclic;
    tn.chi = 1;
    tn.tau = 0;
    tn.euler_number = -1;
    ok = ok && std::abs(hitchin_thorpe(tn).slack) <= 1e-12;
    for (int k = 0; k <= 5; ++k) {
      EndDescriptor a;
      a.end_type = EndType::ALF_Cyclic;
      a.chi = k + 1;
      a.tau = -k;
      a.euler_number = -k - 1;
      ok = ok && std::abs(hitchin_thorpe(a).slack) <= 1e-12;
    }
    for (int k = 2; k <= 6; ++k) {
      EndDescriptor dk;
      dk.end_type = EndType::ALF_Dihedral;
      dk.chi = k + 1;
      dk.tau = -k;
      dk.euler_number = 2 - k;
      ok = ok && std::abs(hitchin_thorpe(dk).slack) <= 1e-12;
    }
    EndDescriptor sch;
    sch.end_type = EndType::ALF_Cyclic;
    sch.chi = 2;
    sch.tau = 0;
    sch.euler_number = 0;
    ok = ok && std::abs(hitchin_thorpe(sch).slack - 4.0) <= 1e-12;
    const std::array<double, 5> alg_expect = {0.0, 0.0, -2.0 / 3.0, -1.0, -4.0 / 3.0};
    const std::array<int, 5> orders = {1, 2, 3, 4, 6};
    for (int i = 0; i < 5; ++i) {
      EndDescriptor g;
      g.end_type = EndType::ALG;
      g.monodromy_order = orders[i];
      ok = ok && std::abs(eta_lambda(g).first - alg_expect[i]) <= 1e-15;
    }
    checks.push_back(check_entry("hitchin-thorpe-table", ok));
  }

  {  // monodromy classification
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
    try {
      monodromy_class(shear);
      ok = false;
    } catch (const InfiniteOrder&) {
    }
    checks.push_back(check_entry("monodromy-classification", ok));
  }

  {  // G(A) enumeration
    bool ok = enumerate_G(Mat::Identity(2, 2), 1).size() == 8;
    Mat hex(2, 2);
    hex << 1.0, 0.5, 0.0, std::sqrt(3.0) / 2.0;
    ok = ok && enumerate_G(hex, 2).size() == 12;
    checks.push_back(check_entry("gA-enumeration", ok));
  }

  {  // tangent-cone probe (golden rotation)
    TangentConeProbe probe =
        tangent_cone_probe((std::sqrt(5.0) - 1.0) / 2.0, {100.0}, 8, opt.seed);
    Json d;
    d["max_ratio"] = probe.max_ratio;
    checks.push_back(check_entry("tangent-cone-probe", probe.max_ratio <= 10.0, d));
  }

  {  // Hardy inequality
    bool ok = true;
    std::mt19937_64 rng(opt.seed + 13);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (double delta : {0.0, 1.0, 2.0}) {
      for (int rep = 0; rep < 3; ++rep) {
        const double c1 = coeff(rng), c2 = coeff(rng);
        auto phi = [c1, c2](double t) {
          const double b = (t - 1) * (2 - t);
          return (1 + c1 * t + c2 * t * t) * b * b * b;
        };
        auto dphi = [c1, c2](double t) {
          const double b = (t - 1) * (2 - t);
          const double db = (2 - t) - (t - 1);
          return (c1 + 2 * c2 * t) * b * b * b +
                 (1 + c1 * t + c2 * t * t) * 3 * b * b * db;
        };
        HardyReport h = hardy_check(phi, dphi, 1.0, 2.0, delta, 0.0);
        ok = ok && h.holds;
      }
    }
    checks.push_back(check_entry("hardy-inequality", ok));
  }

  {  // Jacobi comparison envelopes, K(s) = s^{-1/2}
    DecayProfile prof = DecayProfile::power(0.5);
    JacobiReport a = jacobi_compare(prof, 1.0, 100.0);
    JacobiReport b = jacobi_compare_halfscale(prof, 100.0);
    Json d;
    d["vola_max_ratio"] = a.max_ratio;
    d["vola_envelope"] = a.envelope_constant;
    d["halfscale_max_ratio"] = b.max_ratio;
    checks.push_back(check_entry("jacobi-envelopes", a.bounds_hold && b.bounds_hold, d));
  }

  return checks;
}

}  // namespace

Json run_verify_all(const toml::Table* cfg, const RunOptions& opt) {
  Json j = report_envelope("verify-all", opt.with_timestamp);
  j["seed"] = opt.seed;
  Json checks = Json::array();
  bool pass = true;

  if (cfg && cfg->table_arrays.count("scenario")) {
    for (const toml::Table& sc : cfg->table_arrays.at("scenario")) {
      const toml::Table* task = sc.table("task");
      const std::string kind = task ? task->string_or("kind", "") : "";
      if (kind.empty()) throw ConfigError("verify-all: scenario without task.kind");
      Json r = run_task(kind, sc, opt);
      pass = pass && report_passed(r);
      checks.push_back(r);
    }
  } else if (!cfg) {
    for (Json& c : builtin_catalog(opt)) {
      pass = pass && c["pass"].get<bool>();
      checks.push_back(std::move(c));
    }
  }
  j["checks"] = checks;
  j["pass"] = pass;
  return j;
}

Json run_task(const std::string& kind, const toml::Table& cfg, const RunOptions& opt) {
  if (kind == "curvature-decay") return run_curvature_decay(cfg, opt);
  if (kind == "loops") return run_loops(cfg, opt);
  if (kind == "slide") return run_slide(cfg, opt);
  if (kind == "short-basis") return run_short_basis(cfg, opt);
  if (kind == "tangent-cone") return run_tangent_cone(cfg, opt);
  if (kind == "hitchin-thorpe") return run_hitchin_thorpe(cfg, opt);
  if (kind == "verify-all") return run_verify_all(&cfg, opt);
  throw ConfigError("unknown task: " + kind);
}

bool report_passed(const Json& j) {
  return j.contains("pass") ? j["pass"].get<bool>() : true;
}

}  // namespace tale
