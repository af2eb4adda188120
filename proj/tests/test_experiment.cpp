#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sgnet/error.hpp"
#include "sgnet/experiment.hpp"
#include "sgnet/validate.hpp"

namespace sgnet {
namespace {

namespace fs = std::filesystem;

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return ExperimentConfig::parse(in);
}

// {line, column} of the ConfigError, or {0, 0} if parsing succeeded.
std::pair<std::size_t, std::size_t> error_position(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return {e.line(), e.column()};
  }
  return {0, 0};
}

using Pos = std::pair<std::size_t, std::size_t>;

const std::string kSeeds = "seed_weights = 1\nseed_sobol = 2\nseed_mc = 3\n";

TEST(Config, ParsesListsRangesAndDefaults) {
  const auto c = parse("# sweep\nexperiment = exp1\nN = 1\nP = 0..4:2, 7\nmethod = both\nwidth = 8\n"
                       "lr = 5e-3\ncoupled_oracle = yes\n" + kSeeds);
  EXPECT_EQ(c.experiment, ExperimentKind::Exp1);
  EXPECT_EQ(c.P, (std::vector<int>{0, 2, 4, 7}));
  EXPECT_EQ(c.methods, (std::vector<LossKind>{LossKind::Galerkin, LossKind::Ritz}));
  EXPECT_EQ(c.width, 8);
  EXPECT_EQ(c.depth, 4);
  EXPECT_EQ(c.train.lr0, 5e-3);
  EXPECT_TRUE(c.coupled_oracle);
  EXPECT_EQ(c.seed_validation, 4u);
  EXPECT_EQ(c.train.seed_sobol, 2u);
  EXPECT_EQ(c.resolved_fem_cells(), 512);

  const auto two = parse("experiment = exp2\nN = 1..3\n" + kSeeds);
  EXPECT_EQ(two.P, std::vector<int>{1});
  EXPECT_EQ(two.N, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(two.spatial_dim(), 2);
  EXPECT_EQ(two.resolved_coupled_cells(), 32);
}

TEST(Config, ErrorsCarryLineAndColumn) {
  EXPECT_EQ(error_position("experiment = exp9\n" + kSeeds), Pos(1, 14));
  EXPECT_EQ(error_position("experiment = exp1\n  colour = red\n" + kSeeds), Pos(2, 3));
  EXPECT_EQ(error_position("experiment = exp1\nP = 1, x\n" + kSeeds), Pos(2, 8));
  EXPECT_EQ(error_position("experiment = exp1\nP = 4..2\n" + kSeeds).first, 2u);
  EXPECT_EQ(error_position("experiment = exp1\nP = 1,,2\n" + kSeeds).first, 2u);
  EXPECT_EQ(error_position("experiment = exp1\nwidth\n" + kSeeds), Pos(2, 1));
  EXPECT_EQ(error_position("experiment = exp1\nwidth =\n" + kSeeds).first, 2u);
  EXPECT_EQ(error_position("experiment = exp1\nexperiment = exp2\n" + kSeeds).first, 2u);
  EXPECT_EQ(error_position("experiment = exp1\nseed_mc = -1\nseed_weights = 1\nseed_sobol = 2\n").first, 2u);
  EXPECT_EQ(error_position("experiment = exp2\nP = 2\n" + kSeeds).first, 2u);
  EXPECT_EQ(error_position("experiment = exp1\nmethod = galerkin\nactivation = relu\n" + kSeeds).first, 3u);
  EXPECT_EQ(error_position("experiment = exp1\nmethod = ritz\nactivation = relu\n" + kSeeds).first, 0u);
  EXPECT_EQ(error_position("experiment = exp1\ncoupled_oracle = maybe\n" + kSeeds).first, 2u);
  EXPECT_EQ(error_position("experiment = exp2\ncoupled_oracle = true\n" + kSeeds).first, 2u);
  // all seeds are mandatory
  EXPECT_NE(error_position("experiment = exp1\nseed_weights = 1\nseed_sobol = 2\n").first, 0u);
  EXPECT_NE(error_position("experiment = exp1\nbatch_size = 0\n" + kSeeds).first, 0u);
}

TEST(Sweep, CartesianOrder) {
  const auto c = parse("experiment = exp1\nP = 0, 2, 4\nmethod = both\n" + kSeeds);
  const auto specs = expand_sweep(c);
  ASSERT_EQ(specs.size(), 6u);
  EXPECT_EQ(specs[0].P, 0);
  EXPECT_EQ(specs[0].method, LossKind::Galerkin);
  EXPECT_EQ(specs[1].method, LossKind::Ritz);
  EXPECT_EQ(specs[5].P, 4);
  EXPECT_EQ(specs[5].basis_size, 5u);
  EXPECT_EQ(run_name(specs[3]), "exp1_ritz_N1_P2");

  const auto grid = expand_sweep(parse("experiment = exp3\nN = 1, 2\nP = 1, 2\n" + kSeeds));
  ASSERT_EQ(grid.size(), 4u);
  EXPECT_EQ(grid[2].N, 2);
  EXPECT_EQ(grid[2].P, 1);
  EXPECT_EQ(grid[3].basis_size, 6u);
}

TEST(ResultsCsv, RoundTripIsExact) {
  ResultsRow r;
  r.experiment = "exp3";
  r.method = "ritz";
  r.N = 2;
  r.P = 2;
  r.M_plus_1 = 6;
  r.rel_error = 0.1 + 0.2;
  r.numerator = 1.0 / 3.0;
  r.denominator = 5e-310;
  r.train_seconds = 12.25;
  r.epochs = 17;
  r.final_risk = -0.0123456789012345678;
  r.final_validation = std::numeric_limits<double>::quiet_NaN();
  r.seed_weights = 18446744073709551615ull;
  r.seed_sobol = 0;
  r.seed_mc = 9;
  std::stringstream csv;
  for (std::size_t i = 0; i < kResultsColumns.size(); ++i) csv << (i ? "," : "") << kResultsColumns[i];
  csv << '\n' << format_row(r) << '\n';
  const auto rows = read_results(csv);
  ASSERT_EQ(rows.size(), 1u);
  const auto& b = rows[0];
  EXPECT_EQ(b.experiment, r.experiment);
  EXPECT_EQ(b.method, r.method);
  EXPECT_EQ(b.M_plus_1, r.M_plus_1);
  EXPECT_EQ(b.rel_error, r.rel_error);
  EXPECT_EQ(b.numerator, r.numerator);
  EXPECT_EQ(b.denominator, r.denominator);
  EXPECT_EQ(b.final_risk, r.final_risk);
  EXPECT_TRUE(std::isnan(b.final_validation));
  EXPECT_EQ(b.seed_weights, r.seed_weights);
  EXPECT_EQ(format_row(b), format_row(r));
}

TEST(ResultsCsv, MissingColumnsAndBadValues) {
  std::istringstream missing("experiment,method,N,P\nexp1,galerkin,1,0\n");
  EXPECT_THROW(read_results(missing), InvalidArgument);
  std::istringstream empty("");
  EXPECT_THROW(read_results(empty), InvalidArgument);
  std::ostringstream header;
  for (std::size_t i = 0; i < kResultsColumns.size(); ++i) header << (i ? "," : "") << kResultsColumns[i];
  std::istringstream only_header(header.str() + "\n");
  EXPECT_TRUE(read_results(only_header).empty());
  std::istringstream bad(header.str() + "\nexp1,galerkin,1,0,1,abc,0,0,0,1,0,0,1,2,3\n");
  EXPECT_THROW(read_results(bad), InvalidArgument);
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("sgnet_experiment_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string tiny_config(const fs::path& out, const std::string& extra = {}) {
  return "experiment = exp1\nP = 0, 2, 4\nmethod = both\nwidth = 4\ndepth = 1\nbatch_size = 32\n"
         "steps_per_epoch = 5\nmax_epochs = 3\nvalidation_interval = 2\nvalidation_samples = 64\n"
         "n_mc = 200\ngrid_points = 65\ncheckpoint_interval = 2\noutput_dir = " +
         out.string() + "\n" + extra + kSeeds;
}

std::vector<std::vector<std::string>> numeric_fields(const fs::path& csv) {
  std::ifstream in(csv);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);
  const auto seconds =
      static_cast<std::size_t>(std::find(kResultsColumns.begin(), kResultsColumns.end(), "train_seconds") -
                               kResultsColumns.begin());
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    fields.erase(fields.begin() + static_cast<std::ptrdiff_t>(seconds));
    rows.push_back(fields);
  }
  return rows;
}

TEST(Runner, SweepWritesArtifactsDeterministically) {
  const auto dir = scratch("run");
  std::vector<std::vector<std::vector<std::string>>> runs;
  for (const std::string tag : {"a", "b", "parallel"}) {
    const auto cfg = dir / (tag + ".cfg");
    std::ofstream(cfg) << tiny_config(dir / tag, tag == "parallel" ? "jobs = 2\n" : "");
    std::ostringstream log;
    ASSERT_EQ(run_experiment(cfg.string(), log), kExitOk) << log.str();
    runs.push_back(numeric_fields(dir / tag / "results.csv"));
  }
  ASSERT_EQ(runs[0].size(), 6u);
  EXPECT_EQ(runs[0], runs[1]);
  EXPECT_EQ(runs[0], runs[2]);

  const auto rows = read_results_file((dir / "a" / "results.csv").string());
  EXPECT_EQ(rows[0].method, "galerkin");
  EXPECT_EQ(rows[5].P, 4);
  EXPECT_EQ(rows[5].M_plus_1, 5u);
  EXPECT_EQ(rows[0].seed_mc, 3u);
  for (const auto& r : rows) {
    EXPECT_GT(r.rel_error, 0.0);
    EXPECT_EQ(r.epochs, 3u);
    EXPECT_NEAR(r.rel_error, std::sqrt(r.numerator / r.denominator), 1e-12);
  }
  EXPECT_TRUE(fs::exists(dir / "a" / "history" / "exp1_ritz_N1_P4.csv"));
  EXPECT_TRUE(fs::exists(dir / "a" / "nets" / "exp1_galerkin_N1_P0.sgnc"));
  EXPECT_TRUE(fs::exists(dir / "a" / "checkpoints" / "exp1_galerkin_N1_P2" / "epoch_000002.sgnc"));
  fs::remove_all(dir);
}

TEST(Runner, CoupledOracleColumns) {
  const auto dir = scratch("coupled");
  auto c = parse(tiny_config(dir / "out", "coupled_oracle = true\ncoupled_cells = 64\n"));
  c.P = {2};
  c.methods = {LossKind::Ritz};
  std::ostringstream log;
  ASSERT_EQ(run_experiment(c, log), kExitOk) << log.str();
  std::ifstream in(dir / "out" / "coupled.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header.rfind("experiment,method,N,P,M_plus_1,", 0), 0u);
  EXPECT_EQ(row.rfind("exp1,ritz,1,2,3,", 0), 0u);
  fs::remove_all(dir);
}

TEST(Runner, ExitCodes) {
  const auto dir = scratch("exit");
  std::ostringstream log;
  std::ofstream(dir / "bad.cfg") << "experiment = exp7\n" << kSeeds;
  EXPECT_EQ(run_experiment((dir / "bad.cfg").string(), log), kExitConfig);
  EXPECT_NE(log.str().find("line 1, column 14"), std::string::npos) << log.str();
  EXPECT_EQ(run_experiment((dir / "absent.cfg").string(), log), kExitIo);

  // a learning rate this large overflows the network on the first step
  std::ofstream(dir / "diverge.cfg") << tiny_config(dir / "div", "lr = 1e300\n");
  EXPECT_EQ(run_experiment((dir / "diverge.cfg").string(), log), kExitAborted);
  EXPECT_TRUE(fs::exists(dir / "div" / "results.csv"));

  // output directory blocked by a regular file
  std::ofstream(dir / "blocked") << "x";
  std::ofstream(dir / "io.cfg") << tiny_config(dir / "blocked" / "sub");
  EXPECT_EQ(run_experiment((dir / "io.cfg").string(), log), kExitIo);
  fs::remove_all(dir);
}

TEST(Config, ShippedConfigsParse) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(fs::path(SGNET_SOURCE_DIR) / "configs")) {
    if (e.path().extension() != ".cfg") continue;
    EXPECT_NO_THROW(ExperimentConfig::parse_file(e.path().string())) << e.path();
    ++n;
  }
  EXPECT_GE(n, 4u);
}

TEST(PropertySuite, AllChecksPass) {
  const auto results = run_property_checks();
  EXPECT_EQ(results.size(), property_checks().size());
  std::ostringstream out;
  EXPECT_EQ(report_property_checks(results, out), 0) << out.str();
  EXPECT_EQ(run_property_checks("tensor.").size(), 2u);
}

}  // namespace
}  // namespace sgnet
