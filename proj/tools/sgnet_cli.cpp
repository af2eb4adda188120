// sgnet command line: run sweeps, plot results, dump tensors, self-check.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "sgnet/error.hpp"
#include "sgnet/experiment.hpp"
#include "sgnet/plot.hpp"
#include "sgnet/spectral.hpp"
#include "sgnet/validate.hpp"

namespace {

int dump_tensor(int N, int P, const std::string& family, const std::string& out) {
  const auto fam = sgnet::parse_family(family);
  const auto G = sgnet::galerkin_tensor(sgnet::OrderedBasis(N, P, fam));
  const auto parent = std::filesystem::path(out).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream os(out, std::ios::binary);
  if (!os) throw sgnet::IoError("cannot write '" + out + "'");
  sgnet::write_tensor(os, G, fam);
  if (!os) throw sgnet::IoError("failed writing '" + out + "'");
  std::cout << "wrote " << G.dim() << "^3 tensor to " << out << '\n';
  return sgnet::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Galerkin solvers with neural surrogates for the spectral coefficients"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "Run an experiment sweep from a config file");
  run->add_option("config", config, "Config file (key = value)")->required();

  std::string csv, kind = "error_vs_dim", svg;
  auto* plot = app.add_subcommand("plot", "Render results.csv as an SVG convergence plot");
  plot->add_option("csv", csv, "results.csv from a run")->required();
  plot->add_option("--kind", kind, "error_vs_dim or time_vs_dim")
      ->check(CLI::IsMember({"error_vs_dim", "time_vs_dim"}))
      ->capture_default_str();
  plot->add_option("--out", svg, "Output SVG path")->required();

  int N = 1, P = 0;
  std::string family, tensor_out;
  auto* tensor = app.add_subcommand("tensor", "Precompute the Galerkin tensor and dump it");
  tensor->add_option("N", N, "Stochastic dimension")->required()->check(CLI::Range(1, 64));
  tensor->add_option("P", P, "Total degree")->required()->check(CLI::NonNegativeNumber);
  tensor->add_option("family", family, "hermite or legendre")
      ->required()
      ->check(CLI::IsMember({"hermite", "legendre"}));
  tensor->add_option("--out", tensor_out, "Output binary path")->required();

  std::string filter;
  auto* validate = app.add_subcommand("validate", "Run the built-in property checks");
  validate->add_option("--filter", filter, "Only checks whose name contains this text");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return sgnet::run_experiment(config, std::cerr);
    if (*plot) {
      sgnet::plot_results(csv, sgnet::parse_plot_kind(kind), svg);
      std::cout << "wrote " << svg << '\n';
      return sgnet::kExitOk;
    }
    if (*tensor) return dump_tensor(N, P, family, tensor_out);
    if (*validate) {
      const auto results = sgnet::run_property_checks(filter);
      if (results.empty()) {
        std::cerr << "no check matches '" << filter << "'\n";
        return sgnet::kExitOther;
      }
      return sgnet::report_property_checks(results, std::cout) == 0 ? sgnet::kExitOk : sgnet::kExitOther;
    }
  } catch (const sgnet::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return sgnet::kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return sgnet::kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sgnet::kExitOther;
  }
  return sgnet::kExitOther;
}
