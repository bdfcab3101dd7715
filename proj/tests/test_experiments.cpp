#include <gtest/gtest.h>

#include <string>

#include "mrrfso.hpp"

using namespace mrrfso;
using namespace mrrfso::experiments;

namespace {

const char* kMinimal = R"(
sweep = Pt
grid = 0:20:10 dBm
metrics = outage
engines = analytic
)";

std::string with(const std::string& extra) { return std::string(kMinimal) + extra + "\n"; }

ErrorCode code_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ErrorCode::InvalidSpec;
}

ExperimentSpec small_run() {
  ExperimentSpec s = parse_config_text(R"(
name = small
Cn2 = 5e-15
sigma_theta_o = 3 deg
regime = weak
sweep = Pt
grid = 5, 15, 25 dBm
series = Z: 800, 1200 m
metrics = outage, ber, cdf_h
engines = analytic, montecarlo
samples = 20000
eval_points = 0.2, 0.5, 0.8
)");
  return s;
}

}  // namespace

TEST(Config, UnitsConvertToSi) {
  const auto s = parse_config_text(with("theta_div = 0.4 mrad\nPt = 20 dBm\nA_r = 2 cm2\nsigma_theta_o = 5 deg"));
  EXPECT_DOUBLE_EQ(s.base.theta_div, 4e-4);
  EXPECT_NEAR(s.base.P_t, 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(s.base.A_r, 2e-4);
  EXPECT_NEAR(s.base.sigma_theta_o, 5.0 * kDegree, 1e-15);
  ASSERT_EQ(s.grid.size(), 3u);
  EXPECT_NEAR(s.grid[2], 0.1, 1e-15);
  EXPECT_EQ(s.output_path, "experiment.csv");
}

TEST(Config, GluedUnitsAndLists) {
  const auto v = parse_quantity("20dBm", Dim::Power, 1);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NEAR(v[0], 0.1, 1e-15);
  const auto l = parse_quantity("1, 2, 4 km", Dim::Length, 1);
  EXPECT_EQ(l, (std::vector<double>{1000.0, 2000.0, 4000.0}));
  EXPECT_EQ(parse_quantity("0.5", Dim::Length, 1).front(), 0.5);
}

TEST(Config, UnknownKeyNamesLine) {
  try {
    parse_config_text(with("\nfoo = 1"), "demo.cfg");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownKey);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("demo.cfg"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 7"), std::string::npos) << msg;
    EXPECT_NE(msg.find("foo"), std::string::npos) << msg;
  }
}

TEST(Config, ErrorsByKind) {
  EXPECT_EQ(code_of(with("theta_div = 3 m")), ErrorCode::UnitMismatch);
  EXPECT_EQ(code_of(with("Z = 1 parsec")), ErrorCode::UnitMismatch);
  EXPECT_EQ(code_of("grid = 1, 2\nmetrics = outage\nengines = analytic\n"), ErrorCode::MissingRequired);
  EXPECT_EQ(code_of("sweep = Pt\ngrid = 1, 2\nengines = analytic\n"), ErrorCode::MissingRequired);
  EXPECT_EQ(code_of(with("Z")), ErrorCode::ParseError);
  EXPECT_EQ(code_of(with("Z = abc m")), ErrorCode::ParseError);
  EXPECT_EQ(code_of("sweep = Pt\ngrid = 3, 2, 1 dBm\nmetrics = outage\nengines = analytic\n"),
            ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(with("series = Pt: 1, 2 dBm")), ErrorCode::InvalidSpec);
  EXPECT_THROW(parse_config_text(with("engines =")), Error);
  EXPECT_THROW(parse_config("/nonexistent/file.cfg"), Error);
}

TEST(Config, ValidateRejectsEmptyEngines) {
  ExperimentSpec s = recipe("fig12");
  s.engines.clear();
  EXPECT_THROW(validate(s), Error);
}

TEST(Recipes, AllValidate) {
  for (const auto& n : recipe_names()) {
    EXPECT_NO_THROW(validate(recipe(n))) << n;
  }
  try {
    recipe("fig99");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownKey);
  }
}

TEST(Runner, RowsCoverProduct) {
  const auto r = run_experiment(small_run());
  // 2 series x 3 grid x (outage + ber + 3 cdf points) x 2 engines.
  EXPECT_EQ(r.rows.size(), 2u * 3u * 5u * 2u);
  EXPECT_EQ(r.errors, 0u);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.regime, "weak");
    EXPECT_FALSE(std::isnan(row.value));
  }
}

TEST(Runner, CsvIndependentOfWorkers) {
  const std::string ref = to_csv(run_experiment(small_run(), {1}));
  EXPECT_EQ(to_csv(run_experiment(small_run(), {4})), ref);
  EXPECT_EQ(to_csv(run_experiment(small_run(), {8})), ref);
}

TEST(Runner, SidecarHoldsResolvedSpec) {
  const auto r = run_experiment(small_run());
  const auto j = sidecar(r);
  EXPECT_EQ(j["spec"]["name"], "small");
  EXPECT_EQ(j["spec"]["samples"], 20000);
  EXPECT_EQ(j["rows"], r.rows.size());
  EXPECT_EQ(j["version"], kVersion);
}

TEST(Runner, PdfSimpleInWeakRegimeIsRowError) {
  ExperimentSpec s = small_run();
  s.metrics = {Metric::pdf_h_simple};
  s.engines = {Engine::analytic};
  const auto r = run_experiment(s);
  EXPECT_GT(r.errors, 0u);
  for (const auto& row : r.rows) EXPECT_NE(row.error.find("RegimeMismatch"), std::string::npos) << row.error;
}

TEST(Output, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1e-300), "1e-300");
  EXPECT_EQ(format_number(std::nan("")), "");
}

TEST(Optimize, BracketErrors) {
  LinkConfig c;
  c.cn2_0 = 5e-15;
  OptimizeOptions o;
  o.model.regime = RegimeChoice::Weak;
  EXPECT_THROW(optimize_divergence(c, Objective::outage, {0.05e-3, 1e-3}, o), Error);
  EXPECT_THROW(optimize_divergence(c, Objective::outage, {1e-3, 3e-3}, o), Error);
  EXPECT_THROW(optimize_divergence(c, Objective::outage, {1e-3, 0.5e-3}, o), Error);
  try {
    optimize_divergence(c, Objective::outage, {0.1e-3, 3e-3}, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfRange);
  }
}

TEST(Optimize, InteriorOptimumBeatsNeighbours) {
  LinkConfig c;
  c.Z = 1000.0;
  c.P_t = dbm_to_watt(20.0);
  c.sigma_theta_o = 5.0 * kDegree;
  OptimizeOptions o;
  o.model.regime = RegimeChoice::Weak;
  const auto r = optimize_divergence(c, Objective::outage, {0.1e-3, 2e-3}, o);
  ASSERT_TRUE(r.interior);
  SectorCache cache;
  for (double f : {0.9, 1.1}) {
    LinkConfig n = c;
    n.theta_div = r.theta * f;
    EXPECT_GT(objective_value(n, Objective::outage, o.model, cache), r.value);
  }
}

TEST(Optimize, HeatmapCellMatchesStandaloneEvaluation) {
  LinkConfig c;
  c.P_t = dbm_to_watt(25.0);
  c.sigma_theta_o = 5.0 * kDegree;
  ModelOptions o;
  o.regime = RegimeChoice::Weak;
  o.workers = 4;
  const std::vector<double> se = {50e-6, 150e-6};
  const std::vector<double> wz = {0.2, 0.3, 0.4};
  const Heatmap h = heatmap(c, se, wz, Objective::outage, o);
  LinkConfig cell = c;
  cell.sigma_theta_e = se[1];
  cell.theta_div = wz[2] / c.Z;
  SectorCache cache;
  ModelOptions one = o;
  one.workers = 1;
  EXPECT_EQ(h.values[1][2], objective_value(cell, Objective::outage, one, cache));
  EXPECT_THROW(heatmap(c, {}, wz, Objective::outage, o), Error);
}

TEST(Orderings, Fig12BerGrowsWithDistance) {
  ExperimentSpec s = recipe("fig12");
  s.engines = {Engine::analytic};
  s.grid = {dbm_to_watt(10.0), dbm_to_watt(20.0)};
  const auto r = run_experiment(s);
  // Rows: for each Z, for each Pt.
  ASSERT_EQ(r.rows.size(), 8u);
  for (std::size_t p = 0; p < 2; ++p) {
    for (std::size_t z = 1; z < 4; ++z) {
      EXPECT_GT(r.rows[z * 2 + p].value, r.rows[(z - 1) * 2 + p].value) << "Pt index " << p << " Z index " << z;
    }
  }
}

TEST(Orderings, Fig9Cn2OrderingFlipsInDeepOutage) {
  // Stronger turbulence raises outage once the median SNR clears the
  // threshold, but lowers it when the median sits below (heavier upper tail).
  ExperimentSpec s = recipe("fig9");
  s.engines = {Engine::analytic};
  s.grid = {dbm_to_watt(6.0), dbm_to_watt(16.0), dbm_to_watt(26.0)};
  s.sector_samples = 200000;
  const auto r = run_experiment(s, {4});
  ASSERT_EQ(r.rows.size(), 9u);
  auto at = [&](std::size_t cn2, std::size_t pt) { return r.rows[cn2 * 3 + pt].value; };
  for (std::size_t pt : {1u, 2u}) {
    EXPECT_LT(at(0, pt), at(1, pt));
    EXPECT_LT(at(1, pt), at(2, pt));
  }
  EXPECT_GT(at(0, 0), at(1, 0));
  EXPECT_GT(at(1, 0), at(2, 0));
}
