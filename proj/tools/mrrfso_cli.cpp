// mrrfso command-line front end.
//
// Exit status: 0 when every comparison stayed within tolerance, 1 when a
// tolerance flag was raised, 2 on bad input or a failed run.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "mrrfso.hpp"

namespace xp = mrrfso::experiments;
using mrrfso::kDegree;

namespace {

constexpr std::size_t kPaperScaleSamples = 50000000;

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  bool paper_scale = false;
  std::string out;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::string pointing_exponent;
  std::string regime;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "RNG seed");
  app->add_option("--samples", c.samples, "Monte-Carlo sample count");
  app->add_flag("--paper-scale", c.paper_scale, "Use 5e7 samples for Monte-Carlo and sector fits");
  app->add_option("--out", c.out, "Output file (CSV; a .json sidecar is written next to it)");
  app->add_option("--workers", c.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
  app->add_option("--pointing-exponent", c.pointing_exponent, "printed|consistent")
      ->check(CLI::IsMember({"printed", "consistent"}));
  app->add_option("--regime", c.regime, "auto|weak|strong")->check(CLI::IsMember({"auto", "weak", "strong"}));
}

void apply_common(const Common& c, xp::ExperimentSpec& s) {
  if (c.paper_scale) {
    s.samples = kPaperScaleSamples;
    s.sector_samples = kPaperScaleSamples;
  }
  if (c.samples) s.samples = *c.samples;
  if (c.seed) s.seed = *c.seed;
  if (!c.out.empty()) s.output_path = c.out;
  if (c.pointing_exponent == "consistent") s.pointing_exponent = mrrfso::PointingExponent::Consistent;
  if (c.pointing_exponent == "printed") s.pointing_exponent = mrrfso::PointingExponent::Printed;
  if (c.regime == "weak") s.regime = xp::RegimeChoice::Weak;
  if (c.regime == "strong") s.regime = xp::RegimeChoice::Strong;
  if (c.regime == "auto") s.regime = xp::RegimeChoice::Auto;
}

xp::ModelOptions model_from(const Common& c, xp::RegimeChoice fallback) {
  xp::ExperimentSpec s;
  s.regime = fallback;
  apply_common(c, s);
  return xp::model_options(s, c.workers);
}

int run_spec(xp::ExperimentSpec s, const Common& c) {
  apply_common(c, s);
  const xp::RunResult r = xp::run_experiment(s, {c.workers});
  xp::write_result(r, s.output_path);
  std::fprintf(stderr, "%s: %zu rows, %zu tolerance flags, %zu row errors -> %s\n", s.name.c_str(), r.rows.size(),
               r.flags, r.errors, s.output_path.c_str());
  return r.flags == 0 ? 0 : 1;
}

// Writes to --out when given, else stdout.
void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    xp::write_text(out, text);
  }
}

std::string num(double v) { return xp::format_number(v); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MRR UAV-to-ground FSO link: analytics, Monte Carlo and figure recipes"};
  app.require_subcommand(1);

  Common common;

  auto* run = app.add_subcommand("run", "Run an experiment file");
  std::string spec_file;
  run->add_option("spec-file", spec_file, "Experiment file")->required()->check(CLI::ExistingFile);
  add_common(run, common);

  auto* rec = app.add_subcommand("recipe", "Run a built-in figure recipe");
  std::string recipe_name;
  rec->add_option("name", recipe_name, "fig7 ... fig15")->required()->check(CLI::IsMember(xp::recipe_names()));
  add_common(rec, common);

  auto* opt = app.add_subcommand("optimize", "Optimal divergence angle for each link length");
  std::vector<double> opt_Z = {800, 1000, 1200, 1400};
  double opt_pt_dbm = 20.0, opt_se_urad = 100.0, opt_so_deg = 5.0, opt_lo = 0.1, opt_hi = 2.0;
  std::string objective = "outage";
  opt->add_option("--Z", opt_Z, "Link lengths in m");
  opt->add_option("--pt", opt_pt_dbm, "Transmit power in dBm");
  opt->add_option("--sigma-e", opt_se_urad, "Tracking-error SD in urad");
  opt->add_option("--sigma-o", opt_so_deg, "Orientation SD in deg");
  opt->add_option("--lo", opt_lo, "Bracket low edge in mrad");
  opt->add_option("--hi", opt_hi, "Bracket high edge in mrad");
  opt->add_option("--objective", objective, "outage|ber")->check(CLI::IsMember({"outage", "ber"}));
  add_common(opt, common);

  auto* hm = app.add_subcommand("heatmap", "Objective over sigma_theta_e x w_z");
  std::vector<double> hm_se = {50, 75, 100, 125, 150, 175, 200};
  std::vector<double> hm_wz;
  for (int i = 0; i <= 30; ++i) hm_wz.push_back(10.0 + 2.0 * i);
  double hm_pt_dbm = 25.0, hm_so_deg = 5.0, hm_Z = 1000.0;
  hm->add_option("--sigma-e", hm_se, "Tracking-error SDs in urad");
  hm->add_option("--wz", hm_wz, "Beamwidths in cm");
  hm->add_option("--pt", hm_pt_dbm, "Transmit power in dBm");
  hm->add_option("--sigma-o", hm_so_deg, "Orientation SD in deg");
  hm->add_option("--Z", hm_Z, "Link length in m");
  hm->add_option("--objective", objective, "outage|ber")->check(CLI::IsMember({"outage", "ber"}));
  add_common(hm, common);

  auto* tab = app.add_subcommand("mc-tables", "Regenerate the h_MRR moment and sector tables");
  add_common(tab, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*run) return run_spec(xp::parse_config(spec_file), common);
    if (*rec) return run_spec(xp::recipe(recipe_name), common);

    const xp::Objective obj = objective == "ber" ? xp::Objective::ber : xp::Objective::outage;

    if (*opt) {
      xp::OptimizeOptions o;
      o.model = model_from(common, xp::RegimeChoice::Weak);
      std::ostringstream os;
      os << "Z,theta_opt,value,interior\n";
      int status = 0;
      for (double Z : opt_Z) {
        mrrfso::LinkConfig c;
        c.Z = Z;
        c.P_t = mrrfso::dbm_to_watt(opt_pt_dbm);
        c.sigma_theta_e = opt_se_urad * 1e-6;
        c.sigma_theta_o = opt_so_deg * kDegree;
        const auto r = xp::optimize_divergence(c, obj, {opt_lo * 1e-3, opt_hi * 1e-3}, o);
        os << num(Z) << ',' << num(r.theta) << ',' << num(r.value) << ',' << (r.interior ? "yes" : "no") << '\n';
        if (!r.interior) {
          std::fprintf(stderr, "NoInteriorMinimum at Z = %g m: objective is monotone on the bracket\n", Z);
          status = 1;
        }
      }
      emit(common.out, os.str());
      return status;
    }

    if (*hm) {
      mrrfso::LinkConfig c;
      c.Z = hm_Z;
      c.P_t = mrrfso::dbm_to_watt(hm_pt_dbm);
      c.sigma_theta_o = hm_so_deg * kDegree;
      std::vector<double> se, wz;
      for (double v : hm_se) se.push_back(v * 1e-6);
      for (double v : hm_wz) wz.push_back(v * 1e-2);
      const auto h = xp::heatmap(c, se, wz, obj, model_from(common, xp::RegimeChoice::Weak));
      std::ostringstream os;
      os << "sigma_theta_e,w_z,value,row_min,error\n";
      for (std::size_t i = 0; i < se.size(); ++i) {
        const std::size_t k = h.argmin(i);
        for (std::size_t j = 0; j < wz.size(); ++j) {
          os << num(se[i]) << ',' << num(wz[j]) << ',' << num(h.values[i][j]) << ',' << (j == k ? 1 : 0) << ','
             << h.errors[i * wz.size() + j] << '\n';
        }
      }
      emit(common.out, os.str());
      return 0;
    }

    if (*tab) {
      std::size_t n = common.paper_scale ? kPaperScaleSamples : 5000000;
      if (common.samples) n = *common.samples;
      const std::uint64_t seed = common.seed.value_or(1);
      const auto t2 = xp::regenerate_moment_table(n, seed, common.workers);
      const auto t3 = xp::regenerate_sector_table(n, seed, common.workers);
      std::ostringstream os;
      os << "table,sigma_deg,quantity,value,reference,ok\n";
      std::size_t bad = 0;
      for (const auto& r : t2) {
        os << "moments," << num(r.sigma_deg) << ",mu," << num(r.mu) << ',' << num(r.mu_ref) << ',' << r.ok << '\n';
        os << "moments," << num(r.sigma_deg) << ",sd," << num(r.sd) << ',' << num(r.sd_ref) << ',' << r.ok << '\n';
        bad += !r.ok;
      }
      for (const auto& r : t3) {
        for (int k = 0; k < 8; ++k) {
          os << "sectors," << num(r.sigma_deg) << ",B" << k + 1 << ',' << num(r.fitted.B[k]) << ','
             << num(r.B_ref_unit[k]) << ',' << r.ok << '\n';
        }
        bad += !r.ok;
      }
      emit(common.out, os.str());
      std::fprintf(stderr, "mc-tables: %zu of %zu rows outside tolerance\n", bad, t2.size() + t3.size());
      return bad == 0 ? 0 : 1;
    }
  } catch (const mrrfso::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
