#include "sgnet/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "sgnet/error.hpp"
#include "sgnet/reference.hpp"

namespace sgnet {

int ExperimentConfig::resolved_fem_cells() const {
  if (fem_cells > 0) return fem_cells;
  return spatial_dim() == 1 ? 512 : 64;
}

int ExperimentConfig::resolved_coupled_cells() const {
  if (coupled_cells > 0) return coupled_cells;
  return spatial_dim() == 1 ? 256 : 32;
}

namespace {

struct Token {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;  // 1-based
};

[[noreturn]] void fail(const Token& t, const std::string& what) { throw ConfigError(what, t.line, t.column); }

std::string_view trim(std::string_view s, std::size_t& offset) {
  std::size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  std::size_t e = s.size();
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  offset += b;
  return s.substr(b, e - b);
}

// Splits on commas; each piece keeps its column.
std::vector<Token> split_list(const Token& value) {
  std::vector<Token> out;
  std::size_t start = 0;
  const std::string& s = value.text;
  while (true) {
    const std::size_t comma = s.find(',', start);
    const std::size_t end = comma == std::string::npos ? s.size() : comma;
    std::size_t offset = start;
    const auto piece = trim(std::string_view(s).substr(start, end - start), offset);
    if (piece.empty()) fail({"", value.line, value.column + offset}, "empty list entry");
    out.push_back({std::string(piece), value.line, value.column + offset});
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
T parse_number(const Token& t) {
  T v{};
  const char* b = t.text.data();
  const char* e = b + t.text.size();
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) fail(t, "expected a number, got '" + t.text + "'");
  return v;
}

template <class T>
T parse_nonneg(const Token& t) {
  if (!t.text.empty() && t.text[0] == '-') fail(t, "value must be non-negative");
  return parse_number<T>(t);
}

// "1, 2, 5", "0..10" or "0..10:2".
std::vector<int> parse_int_list(const Token& value) {
  std::vector<int> out;
  for (const Token& piece : split_list(value)) {
    const auto dots = piece.text.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_number<int>(piece));
      continue;
    }
    const Token lo{piece.text.substr(0, dots), piece.line, piece.column};
    std::string rest = piece.text.substr(dots + 2);
    int step = 1;
    const auto colon = rest.find(':');
    if (colon != std::string::npos) {
      step = parse_number<int>({rest.substr(colon + 1), piece.line, piece.column + dots + 3 + colon});
      rest = rest.substr(0, colon);
      if (step <= 0) fail(piece, "range step must be positive");
    }
    const int a = parse_number<int>(lo);
    const int b = parse_number<int>({rest, piece.line, piece.column + dots + 2});
    if (b < a) fail(piece, "empty range '" + piece.text + "'");
    for (int v = a; v <= b; v += step) out.push_back(v);
  }
  return out;
}

bool parse_bool(const Token& t) {
  if (t.text == "true" || t.text == "on" || t.text == "yes" || t.text == "1") return true;
  if (t.text == "false" || t.text == "off" || t.text == "no" || t.text == "0") return false;
  fail(t, "expected true or false, got '" + t.text + "'");
}

template <class F>
auto parse_enum(const Token& t, F&& f) -> decltype(f(std::string_view())) {
  try {
    return f(t.text);
  } catch (const InvalidArgument& e) {
    fail(t, e.what());
  }
}

const std::set<std::string> kKeys = {
    "experiment",      "N",           "P",           "method",          "width",         "depth",
    "activation_first", "activation", "batch_size",  "steps_per_epoch", "max_epochs",    "lr",
    "gamma",           "decay_interval", "patience", "risk_threshold",  "validation_interval",
    "validation_samples", "checkpoint_interval", "weighting", "output_scale", "quad_nodes", "n_mc",
    "grid_points",     "fem_cells",   "coupled_oracle", "coupled_2d",   "coupled_cells", "output_dir",
    "save_nets",       "jobs",        "seed_weights", "seed_sobol",     "seed_mc",       "seed_validation"};

const char* const kRequired[] = {"experiment", "seed_weights", "seed_sobol", "seed_mc"};

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  std::map<std::string, Token> entries;
  std::map<std::string, Token> keys;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string body = raw.substr(0, hash);
    std::size_t offset = 0;
    if (trim(body, offset).empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no, offset + 1);
    std::size_t key_off = 0;
    const auto key = trim(std::string_view(body).substr(0, eq), key_off);
    if (key.empty()) throw ConfigError("missing key before '='", line_no, eq + 1);
    std::size_t val_off = eq + 1;
    const auto value = trim(std::string_view(body).substr(eq + 1), val_off);
    const Token key_tok{std::string(key), line_no, key_off + 1};
    if (!kKeys.count(key_tok.text)) fail(key_tok, "unknown key '" + key_tok.text + "'");
    if (entries.count(key_tok.text)) fail(key_tok, "duplicate key '" + key_tok.text + "'");
    if (value.empty()) throw ConfigError("missing value for '" + key_tok.text + "'", line_no, eq + 2);
    entries[key_tok.text] = {std::string(value), line_no, val_off + 1};
    keys[key_tok.text] = key_tok;
  }
  for (const char* k : kRequired)
    if (!entries.count(k)) throw ConfigError(std::string("missing required key '") + k + "'", line_no + 1, 1);

  ExperimentConfig c;
  auto has = [&](const char* k) { return entries.count(k) > 0; };
  auto tok = [&](const char* k) -> const Token& { return entries.at(k); };

  c.experiment = parse_enum(tok("experiment"), parse_experiment);
  if (has("N")) c.N = parse_int_list(tok("N"));
  if (has("P")) c.P = parse_int_list(tok("P"));
  else if (c.experiment == ExperimentKind::Exp2) c.P = {1};
  if (has("method")) {
    const std::string& m = tok("method").text;
    if (m == "both") c.methods = {LossKind::Galerkin, LossKind::Ritz};
    else c.methods = {parse_enum(tok("method"), parse_loss)};
  }
  if (has("width")) c.width = parse_number<int>(tok("width"));
  if (has("depth")) c.depth = parse_number<int>(tok("depth"));
  if (has("activation_first")) c.first_activation = parse_enum(tok("activation_first"), parse_activation);
  if (has("activation")) c.hidden_activation = parse_enum(tok("activation"), parse_activation);

  TrainConfig& t = c.train;
  if (has("batch_size")) t.batch_size = parse_nonneg<std::size_t>(tok("batch_size"));
  if (has("steps_per_epoch")) t.steps_per_epoch = parse_nonneg<std::size_t>(tok("steps_per_epoch"));
  if (has("max_epochs")) t.max_epochs = parse_nonneg<std::size_t>(tok("max_epochs"));
  if (has("lr")) t.lr0 = parse_number<double>(tok("lr"));
  if (has("gamma")) t.gamma = parse_number<double>(tok("gamma"));
  if (has("decay_interval")) t.decay_interval = parse_nonneg<std::uint64_t>(tok("decay_interval"));
  if (has("patience")) t.patience = parse_nonneg<std::size_t>(tok("patience"));
  if (has("risk_threshold")) t.risk_threshold = parse_number<double>(tok("risk_threshold"));
  if (has("validation_interval")) t.validation_interval = parse_nonneg<std::size_t>(tok("validation_interval"));
  if (has("checkpoint_interval")) t.checkpoint_interval = parse_nonneg<std::size_t>(tok("checkpoint_interval"));
  if (has("validation_samples")) c.validation_samples = parse_nonneg<std::size_t>(tok("validation_samples"));
  if (has("weighting")) c.weighting = parse_enum(tok("weighting"), parse_weighting);
  if (has("output_scale")) c.output_scale = parse_number<double>(tok("output_scale"));
  if (has("quad_nodes")) c.quad_nodes = parse_number<int>(tok("quad_nodes"));
  if (has("n_mc")) c.n_mc = parse_nonneg<std::size_t>(tok("n_mc"));
  if (has("grid_points")) c.grid_points = parse_number<int>(tok("grid_points"));
  if (has("fem_cells")) c.fem_cells = parse_number<int>(tok("fem_cells"));
  if (has("coupled_oracle")) c.coupled_oracle = parse_bool(tok("coupled_oracle"));
  if (has("coupled_2d")) c.coupled_2d = parse_bool(tok("coupled_2d"));
  if (has("coupled_cells")) c.coupled_cells = parse_number<int>(tok("coupled_cells"));
  if (has("output_dir")) c.output_dir = tok("output_dir").text;
  if (has("save_nets")) c.save_nets = parse_bool(tok("save_nets"));
  if (has("jobs")) c.jobs = parse_nonneg<std::size_t>(tok("jobs"));
  c.seed_weights = parse_nonneg<std::uint64_t>(tok("seed_weights"));
  c.seed_sobol = parse_nonneg<std::uint64_t>(tok("seed_sobol"));
  t.seed_sobol = c.seed_sobol;
  c.seed_mc = parse_nonneg<std::uint64_t>(tok("seed_mc"));
  c.seed_validation = has("seed_validation") ? parse_nonneg<std::uint64_t>(tok("seed_validation")) : c.seed_mc + 1;

  // semantic checks, reported at the value that breaks them
  auto value_or_key = [&](const char* k) -> Token { return has(k) ? tok(k) : keys.at("experiment"); };
  for (int n : c.N) {
    if (n < 1) fail(value_or_key("N"), "N must be at least 1");
    try {
      make_field_model(c.experiment, n);
    } catch (const InvalidArgument& e) {
      fail(value_or_key("N"), e.what());
    }
  }
  for (int p : c.P)
    if (p < 0) fail(value_or_key("P"), "P must be non-negative");
  if (c.experiment == ExperimentKind::Exp2 && (c.P.size() != 1 || c.P[0] != 1))
    fail(value_or_key("P"), "exp2 is affine in y and requires P = 1");
  if (c.width < 1) fail(value_or_key("width"), "width must be positive");
  if (c.depth < 0) fail(value_or_key("depth"), "depth must be non-negative");
  if (!(c.output_scale > 0.0)) fail(value_or_key("output_scale"), "output_scale must be positive");
  if (c.quad_nodes < 2) fail(value_or_key("quad_nodes"), "quad_nodes must be at least 2");
  if (c.n_mc == 0) fail(value_or_key("n_mc"), "n_mc must be positive");
  if (c.grid_points < 2) fail(value_or_key("grid_points"), "grid_points must be at least 2");
  if (has("fem_cells") && c.fem_cells < 2) fail(tok("fem_cells"), "fem_cells must be at least 2");
  if (has("coupled_cells") && c.coupled_cells < 2) fail(tok("coupled_cells"), "coupled_cells must be at least 2");
  if (c.jobs == 0) fail(value_or_key("jobs"), "jobs must be positive");
  if (c.validation_samples == 0) fail(value_or_key("validation_samples"), "validation_samples must be positive");
  if (c.coupled_oracle && c.spatial_dim() == 2 && !c.coupled_2d)
    fail(value_or_key("coupled_oracle"), "the 2-D coupled oracle needs coupled_2d = true");
  const bool strong = std::find(c.methods.begin(), c.methods.end(), LossKind::Galerkin) != c.methods.end();
  if (strong && (!is_twice_differentiable(c.first_activation) || !is_twice_differentiable(c.hidden_activation)))
    fail(value_or_key(has("activation") ? "activation" : "activation_first"),
         "the strong loss needs twice differentiable activations");
  try {
    t.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what(), line_no + 1, 1);
  }
  if (t.checkpoint_interval > 0) t.checkpoint_dir = "checkpoints";
  return c;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  return parse(in);
}

std::vector<RunSpec> expand_sweep(const ExperimentConfig& config) {
  std::vector<RunSpec> out;
  for (int N : config.N)
    for (int P : config.P)
      for (LossKind m : config.methods) out.push_back({config.experiment, m, N, P, basis_dim(N, P)});
  return out;
}

std::string run_name(const RunSpec& spec) {
  return std::string(to_string(spec.experiment)) + "_" + std::string(to_string(spec.method)) + "_N" +
         std::to_string(spec.N) + "_P" + std::to_string(spec.P);
}

RunResult run_single(const ExperimentConfig& config, const RunSpec& spec) {
  namespace fs = std::filesystem;
  const int d = config.spatial_dim();
  auto model = make_field_model(spec.experiment, spec.N);
  const OrderedBasis basis(spec.N, spec.P, model->family());
  FieldOptions opts;
  opts.weighting = config.weighting;
  opts.quad_nodes = config.quad_nodes;
  opts.output_scale = config.output_scale;
  auto field = make_spectral_field(model, basis, opts);
  const GalerkinTensor G = galerkin_tensor(basis);
  const LossAssembler loss(*field, G);

  const auto branch = make_branch_spec(d, std::vector<int>(static_cast<std::size_t>(config.depth), config.width),
                                       config.first_activation, config.hidden_activation);
  MultiBranchNet net(replicate_spec(branch, static_cast<int>(basis.size())), config.seed_weights);
  const ValidationSet validation(*field, ValidationSet::default_points(d), config.validation_samples,
                                 config.seed_validation);

  const fs::path out(config.output_dir);
  const std::string name = run_name(spec);
  TrainConfig tc = config.train;
  tc.seed_sobol = config.seed_sobol;
  tc.history_path = (out / "history" / (name + ".csv")).string();
  if (tc.checkpoint_interval > 0) tc.checkpoint_dir = (out / "checkpoints" / name).string();

  RunResult result;
  result.spec = spec;
  result.training = train(net, spec.method, loss, tc, &validation);
  if (config.save_nets) {
    fs::create_directories(out / "nets");
    net.save((out / "nets" / (name + ".sgnc")).string());
  }

  if (spec.experiment == ExperimentKind::Exp1) {
    result.error = rel_h1_error(Exp1Reference(), net, config.output_scale, basis, config.n_mc,
                                trapezoid_grid(1, config.grid_points), config.seed_mc);
  } else if (d == 1) {
    const Mesh1D mesh(config.resolved_fem_cells());
    result.error = rel_h1_error(FemReference(model, mesh), net, config.output_scale, basis, config.n_mc,
                                fem_grid(mesh), config.seed_mc);
  } else {
    const Mesh2D mesh(config.resolved_fem_cells());
    result.error = rel_h1_error(FemReference(model, mesh), net, config.output_scale, basis, config.n_mc,
                                fem_grid(mesh), config.seed_mc);
  }

  if (config.coupled_oracle) {
    const bool energy = config.weighting != Weighting::None;
    if (d == 1) {
      const Mesh1D mesh(config.resolved_coupled_cells());
      const auto grid = fem_grid(mesh);
      const auto sol = sga_fem_coupled(mesh, *field, G, energy);
      result.coupled = spectral_h1_distance(tabulate(net, grid, config.output_scale), tabulate(sol, grid), grid);
    } else {
      const Mesh2D mesh(config.resolved_coupled_cells());
      const auto grid = fem_grid(mesh);
      const auto sol = sga_fem_coupled(mesh, *field, G, energy);
      result.coupled = spectral_h1_distance(tabulate(net, grid, config.output_scale), tabulate(sol, grid), grid);
    }
  }
  return result;
}

const std::vector<std::string> kResultsColumns = {
    "experiment", "method", "N", "P", "M_plus_1", "rel_error", "numerator", "denominator", "train_seconds",
    "epochs", "final_risk", "final_validation", "seed_weights", "seed_sobol", "seed_mc"};

ResultsRow make_row(const ExperimentConfig& config, const RunResult& result) {
  ResultsRow r;
  r.experiment = std::string(to_string(result.spec.experiment));
  r.method = std::string(to_string(result.spec.method));
  r.N = result.spec.N;
  r.P = result.spec.P;
  r.M_plus_1 = result.spec.basis_size;
  r.rel_error = result.error.rel_error;
  r.numerator = result.error.numerator;
  r.denominator = result.error.denominator;
  r.train_seconds = result.training.seconds;
  r.epochs = result.training.epochs;
  r.final_risk = result.training.final_risk;
  r.final_validation = result.training.final_validation;
  r.seed_weights = config.seed_weights;
  r.seed_sobol = config.seed_sobol;
  r.seed_mc = config.seed_mc;
  return r;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s, const std::string& column) {
  if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw InvalidArgument("malformed value '" + s + "' in column " + column);
  return v;
}

template <class T>
T to_integer(const std::string& s, const std::string& column) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw InvalidArgument("malformed value '" + s + "' in column " + column);
  return v;
}

}  // namespace

std::string format_row(const ResultsRow& r) {
  std::ostringstream os;
  os << r.experiment << ',' << r.method << ',' << r.N << ',' << r.P << ',' << r.M_plus_1 << ',' << fmt(r.rel_error)
     << ',' << fmt(r.numerator) << ',' << fmt(r.denominator) << ',' << fmt(r.train_seconds) << ',' << r.epochs << ','
     << fmt(r.final_risk) << ',' << fmt(r.final_validation) << ',' << r.seed_weights << ',' << r.seed_sobol << ','
     << r.seed_mc;
  return os.str();
}

std::vector<ResultsRow> read_results(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw InvalidArgument("results file is empty");
  const auto header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const auto& name : kResultsColumns)
    if (!col.count(name)) throw InvalidArgument("results file lacks column '" + name + "'");

  std::vector<ResultsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw InvalidArgument("row " + std::to_string(rows.size() + 1) + " has " + std::to_string(cells.size()) +
                            " cells, header has " + std::to_string(header.size()));
    auto get = [&](const char* name) -> const std::string& { return cells[col.at(name)]; };
    ResultsRow r;
    r.experiment = get("experiment");
    r.method = get("method");
    r.N = to_integer<int>(get("N"), "N");
    r.P = to_integer<int>(get("P"), "P");
    r.M_plus_1 = to_integer<std::size_t>(get("M_plus_1"), "M_plus_1");
    r.rel_error = to_double(get("rel_error"), "rel_error");
    r.numerator = to_double(get("numerator"), "numerator");
    r.denominator = to_double(get("denominator"), "denominator");
    r.train_seconds = to_double(get("train_seconds"), "train_seconds");
    r.epochs = to_integer<std::size_t>(get("epochs"), "epochs");
    r.final_risk = to_double(get("final_risk"), "final_risk");
    r.final_validation = to_double(get("final_validation"), "final_validation");
    r.seed_weights = to_integer<std::uint64_t>(get("seed_weights"), "seed_weights");
    r.seed_sobol = to_integer<std::uint64_t>(get("seed_sobol"), "seed_sobol");
    r.seed_mc = to_integer<std::uint64_t>(get("seed_mc"), "seed_mc");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultsRow> read_results_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read results file '" + path + "'");
  return read_results(in);
}

namespace {

class ResultsWriter {
 public:
  explicit ResultsWriter(const std::filesystem::path& dir, bool coupled) {
    std::filesystem::create_directories(dir);
    open(results_, dir / "results.csv");
    for (std::size_t i = 0; i < kResultsColumns.size(); ++i) results_ << (i ? "," : "") << kResultsColumns[i];
    results_ << '\n';
    check(results_);
    if (coupled) {
      open(coupled_, dir / "coupled.csv");
      coupled_ << "experiment,method,N,P,M_plus_1," << ErrorReport::csv_header() << '\n';
      check(coupled_);
    }
  }

  void write(const ExperimentConfig& config, const RunResult& r) {
    results_ << format_row(make_row(config, r)) << '\n';
    check(results_);
    if (r.coupled) {
      coupled_ << to_string(r.spec.experiment) << ',' << to_string(r.spec.method) << ',' << r.spec.N << ','
               << r.spec.P << ',' << r.spec.basis_size << ',' << r.coupled->csv_row() << '\n';
      check(coupled_);
    }
  }

 private:
  static void open(std::ofstream& os, const std::filesystem::path& p) {
    os.open(p);
    if (!os) throw IoError("cannot write '" + p.string() + "'");
  }
  static void check(std::ofstream& os) {
    os.flush();
    if (!os) throw IoError("write failed");
  }

  std::ofstream results_;
  std::ofstream coupled_;
};

}  // namespace

int run_experiment(const ExperimentConfig& config, std::ostream& log) {
  const auto specs = expand_sweep(config);
  try {
    ResultsWriter writer(config.output_dir, config.coupled_oracle);
    auto report = [&](const RunResult& r) {
      writer.write(config, r);
      log << run_name(r.spec) << ": rel_error " << r.error.rel_error << ", " << r.training.epochs << " epochs, "
          << r.training.seconds << " s (" << r.training.stop_reason << ")";
      if (r.coupled) log << ", coupled distance " << r.coupled->rel_error;
      log << std::endl;
    };
    for (std::size_t start = 0; start < specs.size(); start += config.jobs) {
      const std::size_t end = std::min(specs.size(), start + config.jobs);
      if (config.jobs == 1) {
        report(run_single(config, specs[start]));
        continue;
      }
      std::vector<std::future<RunResult>> batch;
      for (std::size_t i = start; i < end; ++i)
        batch.push_back(std::async(std::launch::async, [&config, &specs, i] { return run_single(config, specs[i]); }));
      // rows are written in sweep order; a failure stops after the rows before it
      for (auto& f : batch) report(f.get());
    }
  } catch (const TrainingAborted& e) {
    log << "training aborted: " << e.what() << std::endl;
    return kExitAborted;
  } catch (const IoError& e) {
    log << "io error: " << e.what() << std::endl;
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "io error: " << e.what() << std::endl;
    return kExitIo;
  } catch (const Error& e) {
    log << "error: " << e.what() << std::endl;
    return kExitOther;
  }
  return kExitOk;
}

int run_experiment(const std::string& config_path, std::ostream& log) {
  ExperimentConfig config;
  try {
    config = ExperimentConfig::parse_file(config_path);
  } catch (const ConfigError& e) {
    log << config_path << ": " << e.what() << std::endl;
    return kExitConfig;
  } catch (const IoError& e) {
    log << "io error: " << e.what() << std::endl;
    return kExitIo;
  }
  return run_experiment(config, log);
}

}  // namespace sgnet
