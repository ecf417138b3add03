// tale - batch front end for the asymptotic-geometry verification lab.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "tale/scenario.hpp"

namespace {

using tale::Json;
using tale::RunOptions;

struct CommonFlags {
  std::string config;
  std::string out_dir;
  uint64_t seed = 7;
  double tol = 1e-9;
  bool no_timestamp = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "scenario TOML file");
  cmd->add_option("--out", f.out_dir, "output directory for reports");
  cmd->add_option("--seed", f.seed, "seed for randomized suites");
  cmd->add_option("--tol", f.tol, "numeric tolerance override");
  cmd->add_flag("--no-timestamp", f.no_timestamp, "omit timestamps (byte-stable reports)");
}

RunOptions options_from(const CommonFlags& f) {
  RunOptions opt;
  opt.seed = f.seed;
  opt.tol = f.tol;
  opt.with_timestamp = !f.no_timestamp;
  if (!f.out_dir.empty()) {
    std::filesystem::create_directories(f.out_dir);
    opt.out_dir = f.out_dir;
  }
  return opt;
}

std::pair<double, double> parse_range(const std::string& s, double lo, double hi) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return {lo, hi};
  return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
}

int emit(const Json& report, const CommonFlags& flags, const std::string& name) {
  std::cout << report.dump(2) << std::endl;
  if (!flags.out_dir.empty())
    tale::write_json(flags.out_dir + "/" + name + ".json", report);
  return tale::report_passed(report) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tale: holonomy, short-basis and Hitchin-Thorpe verification lab"};
  app.require_subcommand(1);

  CommonFlags flags;

  std::string model_name = "schwarzschild";
  double model_m = 1.0, model_theta = 1.0 / 3.0, model_side = 1.0, model_spacing = 1.0;
  int model_n = 4, model_rank = 2, model_centers = 2;
  auto add_model_flags = [&](CLI::App* cmd) {
    cmd->add_option("--model", model_name, "model name");
    cmd->add_option("--n", model_n, "chart dimension");
    cmd->add_option("--m", model_m, "mass parameter");
    cmd->add_option("--theta", model_theta, "screw rotation parameter");
    cmd->add_option("--side", model_side, "flat-torus lattice spacing");
    cmd->add_option("--torus-rank", model_rank, "flat-torus rank");
    cmd->add_option("--centers", model_centers, "multi-taub-nut center count");
    cmd->add_option("--spacing", model_spacing, "multi-taub-nut center spacing");
  };
  auto model_table = [&](tale::toml::Table& t) {
    tale::toml::Table m;
    m.values["name"] = tale::toml::Value{model_name};
    m.values["n"] = tale::toml::Value{static_cast<long long>(model_n)};
    m.values["m"] = tale::toml::Value{model_m};
    m.values["theta"] = tale::toml::Value{model_theta};
    m.values["side"] = tale::toml::Value{model_side};
    m.values["centers"] = tale::toml::Value{static_cast<long long>(model_centers)};
    m.values["spacing"] = tale::toml::Value{model_spacing};
    t.tables["model"] = m;
  };

  // curvature-decay
  auto* decay = app.add_subcommand("curvature-decay", "fit the decay exponent of |Rm|");
  std::string range = "10:200";
  int samples = 40;
  double expected_slope = -3.0, slope_tol = 0.05;
  add_common(decay, flags);
  add_model_flags(decay);
  decay->add_option("--range", range, "radial range lo:hi");
  decay->add_option("--samples", samples, "sample count (log-spaced)");
  decay->add_option("--expected-slope", expected_slope, "expected log-log slope");
  decay->add_option("--slope-tol", slope_tol, "slope tolerance");

  // loops
  auto* loops = app.add_subcommand("loops", "enumerate geodesic loops at a base point");
  double base_r = 2.0, search_radius = 4.0;
  add_common(loops, flags);
  add_model_flags(loops);
  loops->add_option("--r", base_r, "base point radial coordinate");
  loops->add_option("--radius", search_radius, "loop search radius");
  std::string condition_radii;
  loops->add_option("--condition-radii", condition_radii,
                    "comma-separated radii for the HC/HC'/SHC report");

  // slide
  auto* slide_cmd = app.add_subcommand("slide", "slide a loop along the standard ray");
  std::string ray = "2:50";
  int slide_samples = 200, word_k = 1;
  add_common(slide_cmd, flags);
  add_model_flags(slide_cmd);
  slide_cmd->add_option("--ray", ray, "ray range lo:hi");
  slide_cmd->add_option("--samples", slide_samples, "trace samples");
  slide_cmd->add_option("--word", word_k, "deck word exponent");

  // short-basis
  auto* basis = app.add_subcommand("short-basis", "construct and verify a short basis");
  std::string lattice = "hexagonal";
  double rho0 = 30000.0;
  add_common(basis, flags);
  basis->add_option("--lattice", lattice, "z2 | hexagonal");
  basis->add_option("--rho0", rho0, "pseudo-group radius rho_0");

  // tangent-cone
  auto* cone = app.add_subcommand("tangent-cone", "chord-distance probe of the blow-down");
  std::string cone_theta = "golden";
  std::string radii = "100,1000,10000";
  int angles = 32;
  add_common(cone, flags);
  cone->add_option("--theta", cone_theta, "rotation parameter or 'golden'");
  cone->add_option("--radii", radii, "comma-separated radii");
  cone->add_option("--angles", angles, "angle samples per radius");

  // hitchin-thorpe
  auto* ht = app.add_subcommand("hitchin-thorpe", "eta/lambda/slack for an end descriptor");
  std::string end_type = "alf-cyclic";
  int chi = 0, tau = 0, euler = 0, gamma_order = 1, monodromy = 1;
  double eta_in = 0;
  bool eta_set = false, derive_eta = false;
  add_common(ht, flags);
  ht->add_option("--type", end_type, "ale | alf-cyclic | alf-dihedral | alg | alh");
  ht->add_option("--chi", chi, "Euler characteristic");
  ht->add_option("--tau", tau, "signature");
  ht->add_option("--euler", euler, "circle-fibration Euler number (ALF)");
  ht->add_option("--gamma-order", gamma_order, "|Gamma| (ALE)");
  ht->add_option("--monodromy", monodromy, "T^2 monodromy order (ALG)");
  ht->add_option("--eta", eta_in, "eta invariant (ALE)")->each([&](const std::string&) {
    eta_set = true;
  });
  ht->add_flag("--derive-eta", derive_eta, "solve the hyperkaehler equality for eta");
  bool show_tables = false;
  ht->add_flag("--tables", show_tables, "attach the embedded classification tables");

  // verify-all
  auto* verify = app.add_subcommand("verify-all", "run the verification suite");
  add_common(verify, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_name() == "CallForHelp" ? 0 : 2;  // flag/subcommand errors
  }

  try {
    const RunOptions opt = options_from(flags);
    tale::toml::Table cfg;
    std::optional<tale::toml::Table> file_cfg;
    if (!flags.config.empty()) file_cfg = tale::toml::parse_file(flags.config);

    if (decay->parsed()) {
      if (file_cfg) return emit(tale::run_task("curvature-decay", *file_cfg, opt), flags,
                                "curvature-decay");
      model_table(cfg);
      auto [lo, hi] = parse_range(range, 10, 200);
      tale::toml::Table t;
      t.values["r_min"] = tale::toml::Value{lo};
      t.values["r_max"] = tale::toml::Value{hi};
      t.values["samples"] = tale::toml::Value{static_cast<long long>(samples)};
      t.values["expected_slope"] = tale::toml::Value{expected_slope};
      t.values["slope_tol"] = tale::toml::Value{slope_tol};
      cfg.tables["task"] = t;
      return emit(tale::run_curvature_decay(cfg, opt), flags, "curvature-decay");
    }
    if (loops->parsed()) {
      if (file_cfg) return emit(tale::run_task("loops", *file_cfg, opt), flags, "loops");
      model_table(cfg);
      tale::toml::Table t;
      t.values["r"] = tale::toml::Value{base_r};
      t.values["radius"] = tale::toml::Value{search_radius};
      if (!condition_radii.empty()) {
        std::vector<double> rs;
        std::stringstream ss(condition_radii);
        std::string item;
        while (std::getline(ss, item, ',')) rs.push_back(std::stod(item));
        t.values["condition_radii"] = tale::toml::Value{rs};
      }
      cfg.tables["task"] = t;
      return emit(tale::run_loops(cfg, opt), flags, "loops");
    }
    if (slide_cmd->parsed()) {
      if (file_cfg) return emit(tale::run_task("slide", *file_cfg, opt), flags, "slide");
      model_table(cfg);
      auto [lo, hi] = parse_range(ray, 2, 50);
      tale::toml::Table t;
      t.values["r_min"] = tale::toml::Value{lo};
      t.values["r_max"] = tale::toml::Value{hi};
      t.values["samples"] = tale::toml::Value{static_cast<long long>(slide_samples)};
      t.values["word"] = tale::toml::Value{static_cast<long long>(word_k)};
      cfg.tables["task"] = t;
      return emit(tale::run_slide(cfg, opt), flags, "slide");
    }
    if (basis->parsed()) {
      if (file_cfg)
        return emit(tale::run_task("short-basis", *file_cfg, opt), flags, "short-basis");
      tale::toml::Table t;
      t.values["lattice"] = tale::toml::Value{lattice};
      t.values["rho0"] = tale::toml::Value{rho0};
      cfg.tables["task"] = t;
      return emit(tale::run_short_basis(cfg, opt), flags, "short-basis");
    }
    if (cone->parsed()) {
      if (file_cfg)
        return emit(tale::run_task("tangent-cone", *file_cfg, opt), flags, "tangent-cone");
      tale::toml::Table t;
      if (cone_theta != "golden")
        t.values["theta"] = tale::toml::Value{std::stod(cone_theta)};
      std::vector<double> rs;
      std::stringstream ss(radii);
      std::string item;
      while (std::getline(ss, item, ',')) rs.push_back(std::stod(item));
      t.values["radii"] = tale::toml::Value{rs};
      t.values["angles"] = tale::toml::Value{static_cast<long long>(angles)};
      cfg.tables["task"] = t;
      return emit(tale::run_tangent_cone(cfg, opt), flags, "tangent-cone");
    }
    if (ht->parsed()) {
      if (file_cfg)
        return emit(tale::run_task("hitchin-thorpe", *file_cfg, opt), flags,
                    "hitchin-thorpe");
      tale::toml::Table t;
      t.values["type"] = tale::toml::Value{end_type};
      t.values["chi"] = tale::toml::Value{static_cast<long long>(chi)};
      t.values["tau"] = tale::toml::Value{static_cast<long long>(tau)};
      t.values["euler"] = tale::toml::Value{static_cast<long long>(euler)};
      t.values["gamma_order"] = tale::toml::Value{static_cast<long long>(gamma_order)};
      t.values["monodromy"] = tale::toml::Value{static_cast<long long>(monodromy)};
      if (eta_set) t.values["eta"] = tale::toml::Value{eta_in};
      t.values["derive_eta"] = tale::toml::Value{derive_eta};
      t.values["tables"] = tale::toml::Value{show_tables};
      cfg.tables["task"] = t;
      return emit(tale::run_hitchin_thorpe(cfg, opt), flags, "hitchin-thorpe");
    }
    if (verify->parsed()) {
      const Json report =
          tale::run_verify_all(file_cfg ? &*file_cfg : nullptr, opt);
      std::cout << report.dump(2) << std::endl;
      if (!flags.out_dir.empty())
        tale::write_json(flags.out_dir + "/verify-all.json", report);
      return tale::report_passed(report) ? 0 : 1;
    }
  } catch (const tale::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const tale::OutOfDomain& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const tale::LeftDomain& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const tale::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
