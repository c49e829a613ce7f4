#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "expfit/classify.hpp"
#include "expfit/dataset.hpp"
#include "expfit/errors.hpp"
#include "expfit/global_fit.hpp"
#include "expfit/minimax.hpp"
#include "expfit/quartet.hpp"
#include "expfit/report.hpp"
#include "expfit/tac.hpp"

namespace expfit::cli {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// small helpers

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string digest_string(std::string_view bytes) {
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setfill('0') << std::setw(16) << fnv1a64(bytes);
  return os.str();
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Plain numeric series: one value per row.  A single leading non-numeric row
// is treated as a header; blank lines are skipped.
std::vector<double> parse_series(const std::string& bytes) {
  std::vector<double> values;
  std::istringstream in(bytes);
  std::string line;
  std::size_t row = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++row;
    std::size_t a = line.find_first_not_of(" \t\r\n,;");
    if (a == std::string::npos) continue;
    std::size_t b = line.find_last_not_of(" \t\r\n,;");
    std::string_view tok(line.data() + a, b - a + 1);
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size()) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      std::ostringstream os;
      os << "row " << row << ": expected a single numeric value, got '" << tok << "'";
      throw InputError(os.str());
    }
    header_allowed = false;
    values.push_back(v);
  }
  if (values.size() < 2) throw InputError("series needs at least 2 values");
  return values;
}

// Grid override syntax: name=lo:hi[:points]
GridAxis parse_grid_axis(const std::string& text) {
  auto fail = [&]() -> InputError {
    return InputError("bad grid spec '" + text + "' (expected name=lo:hi[:points])");
  };
  std::size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw fail();
  GridAxis axis;
  axis.name = text.substr(0, eq);
  std::string rest = text.substr(eq + 1);
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t colon = rest.find(':', start);
    if (colon == std::string::npos) {
      parts.push_back(rest.substr(start));
      break;
    }
    parts.push_back(rest.substr(start, colon - start));
    start = colon + 1;
  }
  if (parts.size() < 2 || parts.size() > 3) throw fail();
  auto number = [&](const std::string& s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw fail();
    return v;
  };
  axis.lo = number(parts[0]);
  axis.hi = number(parts[1]);
  axis.points = 10;
  if (parts.size() == 3) {
    double p = number(parts[2]);
    if (p < 2 || p != std::floor(p)) throw fail();
    axis.points = static_cast<int>(p);
  }
  return axis;
}

GridSpec apply_grid_overrides(GridSpec grid, const std::vector<std::string>& overrides) {
  for (const auto& text : overrides) {
    GridAxis axis = parse_grid_axis(text);
    bool found = false;
    for (auto& existing : grid.axes) {
      if (existing.name == axis.name) {
        existing = axis;
        found = true;
        break;
      }
    }
    if (!found) {
      std::string known;
      for (const auto& existing : grid.axes) {
        if (!known.empty()) known += ", ";
        known += existing.name;
      }
      throw InputError("unknown grid axis '" + axis.name + "' (expected one of: " + known + ")");
    }
  }
  return grid;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("EXPFIT_SEED")) {
    std::string_view s(env);
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && p == s.data() + s.size()) return v;
    throw InputError("EXPFIT_SEED must be an unsigned integer");
  }
  return 1;
}

void require_norm(const std::string& norm, const std::string& expected, const std::string& command) {
  if (norm != expected) {
    throw InputError(command + " minimizes the " + expected +
                     " norm; --norm " + norm + " is not available here");
  }
}

// ---------------------------------------------------------------------------
// JSON builders

json taxonomy_json(const Taxonomy& tax) {
  json j;
  j["tag"] = to_string(tax.tag);
  j["reflect_t"] = tax.orientation.reflect_t;
  j["negate_T"] = tax.orientation.negate_T;
  j["witness"] = tax.witness;
  return j;
}

json model_json(const ExponentialModel& m) {
  json j;
  switch (m.kind) {
    case ModelKind::Exponential:
      j["kind"] = "exponential";
      j["a"] = m.a;
      j["k"] = m.k;
      j["b"] = m.b;
      break;
    case ModelKind::Line:
      j["kind"] = "line";
      j["slope"] = m.a;
      j["intercept"] = m.b;
      break;
    case ModelKind::Constant:
      j["kind"] = "constant";
      j["value"] = m.b;
      break;
  }
  return j;
}

json certificate_json(const AlternationCertificate& cert) {
  json j;
  j["indices"] = cert.indices;
  j["delta"] = cert.delta;
  j["error"] = cert.error;
  return j;
}

json band_json(const Band& band) {
  json j;
  j["upper"] = band.upper;
  j["lower"] = band.lower;
  return j;
}

json report_json(const FitReport& rep, const Dataset& data) {
  json j;
  j["taxonomy"] = taxonomy_json(rep.taxonomy);
  if (rep.has_model()) {
    j["model"] = model_json(rep.model_value());
  } else {
    json lim;
    lim["kind"] = "limit_vector";
    lim["values"] = rep.limit_value().values;
    j["model"] = lim;
  }
  j["error"] = rep.error;
  j["certificate"] = certificate_json(rep.certificate);
  if (rep.quartet) j["quartet"] = *rep.quartet;
  Band b = rep.has_model() ? band(rep.model_value(), data) : band(rep.limit_value().values, data);
  j["band"] = band_json(b);
  json diag;
  diag["evals"] = rep.evals;
  diag["k_bracket"] = rep.k_bracket;
  if (std::isfinite(rep.k_search)) diag["k_search"] = rep.k_search;
  if (std::isfinite(rep.k_quartet)) diag["k_quartet"] = rep.k_quartet;
  diag["bracket_warning"] = rep.bracket_warning;
  j["diagnostics"] = diag;
  return j;
}

std::vector<double> fitted_values(const FitReport& rep, const Dataset& data) {
  if (rep.has_model()) return evaluate(rep.model_value(), data.t());
  return rep.limit_value().values;
}

// ---------------------------------------------------------------------------
// output sinks

void emit_text(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw InputError("cannot open output file: " + out_path);
  f << text;
}

void emit_json(const json& j, const std::string& out_path, std::ostream& out) {
  emit_text(j.dump(2) + "\n", out_path, out);
}

// Plot table: whitespace-delimited columns with a '#'-prefixed header row.
void write_plot(const std::string& path, const Dataset& data, const std::vector<double>& fit,
                const std::vector<std::size_t>& extremal, const Band& band) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open plot file: " + path);
  f << "# t T fit residual extremal upper lower\n";
  f << std::setprecision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    bool ex = false;
    for (std::size_t idx : extremal) {
      if (idx == i) {
        ex = true;
        break;
      }
    }
    f << data.t()[i] << ' ' << data.T()[i] << ' ' << fit[i] << ' ' << (data.T()[i] - fit[i])
      << ' ' << (ex ? 1 : 0) << ' ' << band.upper[i] << ' ' << band.lower[i] << '\n';
  }
}

void write_xy_plot(const std::string& path, const std::vector<double>& x,
                   const std::vector<double>& y, const std::vector<double>& fit) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open plot file: " + path);
  f << "# x y fit residual\n";
  f << std::setprecision(17);
  for (std::size_t i = 0; i < x.size(); ++i) {
    f << x[i] << ' ' << y[i] << ' ' << fit[i] << ' ' << (y[i] - fit[i]) << '\n';
  }
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

json grid_json(const GridSpec& grid) {
  json axes = json::array();
  for (const auto& axis : grid.axes) {
    json a;
    a["name"] = axis.name;
    a["lo"] = axis.lo;
    a["hi"] = axis.hi;
    a["points"] = axis.points;
    axes.push_back(a);
  }
  return axes;
}

json tac_details_json(const SeparableFit& fit) {
  json d;
  d["levels"] = fit.levels;
  d["nodes_evaluated"] = fit.nodes_evaluated;
  d["rank_deficient_nodes"] = fit.rank_deficient_nodes;
  d["rss_trace"] = fit.rss_trace;
  return d;
}

// ---------------------------------------------------------------------------
// option bundles

struct FitArgs {
  std::string input;
  std::string out_path;
  std::string plot_path;
  std::string norm = "max";
  double tol = 1e-10;
  std::optional<double> k_min;
  std::optional<double> k_max;
};

struct TacArgs {
  std::string input;
  std::string model;
  std::string out_path;
  std::string plot_path;
  std::string norm = "l2";
  double tol = 1e-7;
  std::vector<std::string> grids;
};

struct BandArgs {
  std::string input;
  std::string out_path;
  std::string plot_path;
  std::optional<double> a;
  std::optional<double> k;
  std::optional<double> b;
};

struct DemandSimArgs {
  std::size_t n = 15;
  double q0 = 48.0;
  double k = 3.42;
  double alpha = 0.006;
  double c_step = 1.0;
  double noise = 0.1;
  std::optional<std::uint64_t> seed;
  std::string out_path;
};

struct ExpArSimArgs {
  std::size_t count = 100;
  double noise = 0.0;
  ExpArParams params{-1.49, 1.65, -0.44, 0.54, -0.84, 1.3, 2.52, 3.86};
  double x1 = 2.75;
  double x2 = 3.1;
  std::optional<std::uint64_t> seed;
  std::string out_path;
};

// ---------------------------------------------------------------------------
// subcommand handlers

int run_fit_minimax(const FitArgs& args, std::ostream& out) {
  require_norm(args.norm, "max", "fit-minimax");
  Timer timer;
  std::string bytes = read_file_bytes(args.input);
  std::istringstream in(bytes);
  Dataset data = Dataset::load(in);
  FitOptions options;
  options.tol = args.tol;
  options.k_min = args.k_min;
  options.k_max = args.k_max;
  FitReport rep = fit(data, options);
  json j = report_json(rep, data);
  j["command"] = "fit-minimax";
  j["input_digest"] = digest_string(bytes);
  j["timing"] = {{"elapsed_seconds", timer.seconds()}};
  if (!args.plot_path.empty()) {
    Band b = rep.has_model() ? band(rep.model_value(), data) : band(rep.limit_value().values, data);
    write_plot(args.plot_path, data, fitted_values(rep, data), rep.certificate.indices, b);
  }
  emit_json(j, args.out_path, out);
  return 0;
}

int run_fit_line(const FitArgs& args, std::ostream& out) {
  require_norm(args.norm, "max", "fit-line");
  Timer timer;
  std::string bytes = read_file_bytes(args.input);
  std::istringstream in(bytes);
  Dataset data = Dataset::load(in);
  auto [model, cert] = fit_line_minimax(data);
  std::vector<double> fitted = evaluate(model, data.t());
  Band b = band(model, data);
  json j;
  j["command"] = "fit-line";
  j["input_digest"] = digest_string(bytes);
  j["model"] = model_json(model);
  j["error"] = cert.error;
  j["certificate"] = certificate_json(cert);
  j["band"] = band_json(b);
  j["timing"] = {{"elapsed_seconds", timer.seconds()}};
  if (!args.plot_path.empty()) write_plot(args.plot_path, data, fitted, cert.indices, b);
  emit_json(j, args.out_path, out);
  return 0;
}

int run_fit_quartet(const FitArgs& args, std::ostream& out) {
  require_norm(args.norm, "max", "fit-quartet");
  Timer timer;
  std::string bytes = read_file_bytes(args.input);
  std::istringstream in(bytes);
  Dataset data = Dataset::load(in);
  FitReport rep = fit_quartet(data);
  json j = report_json(rep, data);
  j["command"] = "fit-quartet";
  j["input_digest"] = digest_string(bytes);
  j["timing"] = {{"elapsed_seconds", timer.seconds()}};
  if (!args.plot_path.empty()) {
    Band b = rep.has_model() ? band(rep.model_value(), data) : band(rep.limit_value().values, data);
    write_plot(args.plot_path, data, fitted_values(rep, data), rep.certificate.indices, b);
  }
  emit_json(j, args.out_path, out);
  return 0;
}

int run_classify(const FitArgs& args, std::ostream& out) {
  Timer timer;
  std::string bytes = read_file_bytes(args.input);
  std::istringstream in(bytes);
  Dataset data = Dataset::load(in);
  Taxonomy tax = classify(data);
  json j;
  j["command"] = "classify";
  j["input_digest"] = digest_string(bytes);
  j["taxonomy"] = taxonomy_json(tax);
  j["timing"] = {{"elapsed_seconds", timer.seconds()}};
  emit_json(j, args.out_path, out);
  return 0;
}

int run_band(const BandArgs& args, std::ostream& out) {
  Timer timer;
  std::string bytes = read_file_bytes(args.input);
  std::istringstream in(bytes);
  Dataset data = Dataset::load(in);
  json j;
  j["command"] = "band";
  j["input_digest"] = digest_string(bytes);

  int given = int(args.a.has_value()) + int(args.k.has_value()) + int(args.b.has_value());
  if (given != 0 && given != 3) {
    throw InputError("band needs either all of --a/--k/--b or none of them");
  }
  Band b;
  std::vector<double> fitted;
  std::vector<std::size_t> extremal;
  if (given == 3) {
    ExponentialModel model = (*args.a == 0.0 || *args.k == 0.0)
                                 ? ExponentialModel::constant(*args.a + *args.b)
                                 : ExponentialModel::exponential(*args.a, *args.k, *args.b);
    b = band(model, data);
    fitted = evaluate(model, data.t());
    j["model"] = model_json(model);
    double err = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i)
      err = std::max(err, std::abs(data.T()[i] - fitted[i]));
    j["error"] = err;
  } else {
    FitReport rep = fit(data, FitOptions{});
    b = rep.has_model() ? band(rep.model_value(), data) : band(rep.limit_value().values, data);
    fitted = fitted_values(rep, data);
    extremal = rep.certificate.indices;
    j["taxonomy"] = taxonomy_json(rep.taxonomy);
    if (rep.has_model()) {
      j["model"] = model_json(rep.model_value());
    } else {
      json lim;
      lim["kind"] = "limit_vector";
      lim["values"] = rep.limit_value().values;
      j["model"] = lim;
    }
    j["error"] = rep.error;
  }
  j["band"] = band_json(b);
  j["timing"] = {{"elapsed_seconds", timer.seconds()}};
  if (!args.plot_path.empty()) write_plot(args.plot_path, data, fitted, extremal, b);
  emit_json(j, args.out_path, out);
  return 0;
}

int run_fit_tac(const TacArgs& args, std::ostream& out) {
  require_norm(args.norm, "l2", "fit-tac");
  Timer timer;
  std::string bytes = read_file_bytes(args.input);
  SeparableOptions options;
  options.tol = args.tol;
  json j;
  j["command"] = "fit-tac";
  j["input_digest"] = digest_string(bytes);

  if (args.model == "demand") {
    std::istringstream in(bytes);
    Dataset data = Dataset::load(in);
    GridSpec grid;
    grid.axes = {GridAxis{"d", -2.0, -1e-4, 10}};
    grid = apply_grid_overrides(grid, args.grids);
    DemandFit fit = fit_demand(data, grid, options);
    j["pattern"] = "demand";
    j["params"] = {{"Q0", fit.params.Q0}, {"k", fit.params.k}, {"alpha", fit.params.alpha}};
    j["internal"] = {{"a", fit.internal.a}, {"d", fit.internal.d}, {"b", fit.internal.b}};
    j["rss"] = fit.rss;
    j["mse"] = fit.mse;
    j["grid"] = grid_json(grid);
    j["details"] = tac_details_json(fit.details);
    if (!args.plot_path.empty()) {
      std::vector<double> fitted(data.size());
      for (std::size_t i = 0; i < data.size(); ++i) {
        double y = fit.internal.a * std::exp(fit.internal.d * data.t()[i]) + fit.internal.b;
        fitted[i] = std::pow(10.0, y);
      }
      write_xy_plot(args.plot_path, data.t(), data.T(), fitted);
    }
  } else if (args.model == "expar") {
    std::vector<double> series = parse_series(bytes);
    GridSpec grid;
    grid.axes = {GridAxis{"gamma", 0.5, 2.0, 10}, GridAxis{"z1", 1.0, 4.0, 10},
                 GridAxis{"z2", 2.0, 5.0, 10}};
    grid = apply_grid_overrides(grid, args.grids);
    ExpArFit fit = expar_fit(series, grid, options);
    j["pattern"] = "expar";
    j["params"] = {{"c0", fit.params.c0},       {"c1", fit.params.c1}, {"pi1", fit.params.pi1},
                   {"c2", fit.params.c2},       {"pi2", fit.params.pi2},
                   {"gamma", fit.params.gamma}, {"z1", fit.params.z1}, {"z2", fit.params.z2}};
    j["rss"] = fit.rss;
    j["mse"] = fit.mse;
    j["grid"] = grid_json(grid);
    j["details"] = tac_details_json(fit.details);
    if (!args.plot_path.empty()) {
      std::vector<double> x(series.size() - 2), y(series.size() - 2), fitted(series.size() - 2);
      for (std::size_t i = 2; i < series.size(); ++i) {
        double l1 = series[i - 1];
        double l2 = series[i - 2];
        double w1 = std::exp(-fit.params.gamma * (l2 - fit.params.z1) * (l2 - fit.params.z1));
        double w2 = std::exp(-fit.params.gamma * (l2 - fit.params.z2) * (l2 - fit.params.z2));
        x[i - 2] = static_cast<double>(i);
        y[i - 2] = series[i];
        fitted[i - 2] = fit.params.c0 + (fit.params.c1 + fit.params.pi1 * w1) * l1 +
                        (fit.params.c2 + fit.params.pi2 * w2) * l2;
      }
      write_xy_plot(args.plot_path, x, y, fitted);
    }
  } else if (args.model == "exp") {
    std::istringstream in(bytes);
    Dataset data = Dataset::load(in);
    double range = data.t().back() - data.t().front();
    GridSpec grid;
    // Symmetric rate grid; the d == 0 node duplicates the intercept column and
    // is discarded by the rank check, so growth and decay are both covered.
    grid.axes = {GridAxis{"d", -16.0 / range, 16.0 / range, 11}};
    grid = apply_grid_overrides(grid, args.grids);
    SeparablePattern pattern;
    pattern.nonlinear_names = {"d"};
    pattern.linear_names = {"a", "b"};
    pattern.basis = [](std::span<const double> theta,
                       const std::vector<std::vector<double>>& regressors,
                       std::vector<std::vector<double>>& columns) {
      const double d = theta[0];
      const std::vector<double>& t = regressors[0];
      columns.assign(2, std::vector<double>(t.size()));
      for (std::size_t i = 0; i < t.size(); ++i) {
        double arg = d * t[i];
        columns[0][i] = std::abs(arg) > 700.0 ? std::numeric_limits<double>::quiet_NaN()
                                              : std::exp(arg);
        columns[1][i] = 1.0;
      }
    };
    SeparableFit fit = fit_separable(pattern, {data.t()}, data.T(), grid, options);
    j["pattern"] = "exp";
    j["params"] = {{"a", fit.linear[0]}, {"d", fit.nonlinear[0]}, {"b", fit.linear[1]}};
    j["rss"] = fit.rss;
    j["mse"] = fit.mse;
    j["grid"] = grid_json(grid);
    j["details"] = tac_details_json(fit);
    if (!args.plot_path.empty()) {
      std::vector<double> fitted(data.size());
      for (std::size_t i = 0; i < data.size(); ++i)
        fitted[i] = fit.linear[0] * std::exp(fit.nonlinear[0] * data.t()[i]) + fit.linear[1];
      write_xy_plot(args.plot_path, data.t(), data.T(), fitted);
    }
  } else {
    throw InputError("unknown --model '" + args.model + "' (expected demand, expar, or exp)");
  }
  j["timing"] = {{"elapsed_seconds", timer.seconds()}};
  emit_json(j, args.out_path, out);
  return 0;
}

int run_simulate_demand(const DemandSimArgs& args, std::ostream& out) {
  std::uint64_t seed = args.seed ? *args.seed : default_seed();
  DemandParams params{args.q0, args.k, args.alpha};
  Dataset data = simulate_demand(params, args.n, args.c_step, args.noise, seed);
  std::ostringstream os;
  os << "C,Q\n" << std::setprecision(17);
  for (std::size_t i = 0; i < data.size(); ++i) os << data.t()[i] << ',' << data.T()[i] << '\n';
  emit_text(os.str(), args.out_path, out);
  return 0;
}

int run_simulate_expar(const ExpArSimArgs& args, std::ostream& out) {
  std::uint64_t seed = args.seed ? *args.seed : default_seed();
  std::vector<double> series = expar_generate(args.params, args.x1, args.x2, args.count,
                                              args.noise, seed);
  std::ostringstream os;
  os << std::setprecision(17);
  for (double v : series) os << v << '\n';
  emit_text(os.str(), args.out_path, out);
  return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uniform and separable least-squares fitting of shifted exponentials"};
  app.require_subcommand(1);

  FitArgs fit_args;
  auto add_fit_options = [&](CLI::App* sub, bool rate_options) {
    sub->add_option("input", fit_args.input, "Input data file (two columns: t,T)")->required();
    sub->add_option("--out", fit_args.out_path, "Write the JSON report to this file");
    sub->add_option("--plot", fit_args.plot_path, "Write a plot-friendly data table to this file");
    sub->add_option("--norm", fit_args.norm, "Norm to minimize (max)")->capture_default_str();
    if (rate_options) {
      sub->add_option("--tol", fit_args.tol, "Rate-search tolerance")->capture_default_str();
      sub->add_option("--k-min", fit_args.k_min, "Lower bound for the rate search");
      sub->add_option("--k-max", fit_args.k_max, "Upper bound for the rate search");
    }
  };

  CLI::App* fit_minimax = app.add_subcommand(
      "fit-minimax", "Best uniform fit by a*exp(k*t)+b with taxonomy fallbacks");
  add_fit_options(fit_minimax, true);

  CLI::App* fit_line = app.add_subcommand("fit-line", "Best uniform fit by a straight line");
  add_fit_options(fit_line, false);

  CLI::App* fit_quartet = app.add_subcommand(
      "fit-quartet", "Closed-form uniform fit for exactly four points");
  add_fit_options(fit_quartet, false);

  CLI::App* classify_cmd = app.add_subcommand(
      "classify", "Report the solvability taxonomy of a dataset");
  add_fit_options(classify_cmd, false);

  BandArgs band_args;
  CLI::App* band_cmd = app.add_subcommand(
      "band", "Uniform error band around a fitted or supplied model");
  band_cmd->add_option("input", band_args.input, "Input data file (two columns: t,T)")->required();
  band_cmd->add_option("--out", band_args.out_path, "Write the JSON report to this file");
  band_cmd->add_option("--plot", band_args.plot_path, "Write a plot-friendly data table to this file");
  band_cmd->add_option("--a", band_args.a, "Model amplitude (with --k and --b)");
  band_cmd->add_option("--k", band_args.k, "Model rate (with --a and --b)");
  band_cmd->add_option("--b", band_args.b, "Model offset (with --a and --k)");

  TacArgs tac_args;
  CLI::App* fit_tac = app.add_subcommand(
      "fit-tac", "Separable grid-search least squares (demand, expar, exp)");
  fit_tac->add_option("input", tac_args.input, "Input data file")->required();
  fit_tac->add_option("--model", tac_args.model, "Model pattern: demand, expar, or exp")
      ->required();
  fit_tac->add_option("--grid", tac_args.grids,
                      "Override a grid axis: name=lo:hi[:points] (repeatable)");
  fit_tac->add_option("--tol", tac_args.tol, "Grid-shrink convergence tolerance")
      ->capture_default_str();
  fit_tac->add_option("--norm", tac_args.norm, "Norm to minimize (l2)")->capture_default_str();
  fit_tac->add_option("--out", tac_args.out_path, "Write the JSON report to this file");
  fit_tac->add_option("--plot", tac_args.plot_path,
                      "Write a plot-friendly data table to this file");

  DemandSimArgs demand_args;
  CLI::App* sim_demand = app.add_subcommand(
      "simulate-demand", "Generate a synthetic demand-curve dataset (CSV on stdout)");
  sim_demand->add_option("--n", demand_args.n, "Number of price points")->capture_default_str();
  sim_demand->add_option("--q0", demand_args.q0, "Consumption at price zero")
      ->capture_default_str();
  sim_demand->add_option("--k", demand_args.k, "Curve span parameter")->capture_default_str();
  sim_demand->add_option("--alpha", demand_args.alpha, "Elasticity-decay parameter")
      ->capture_default_str();
  sim_demand->add_option("--c-step", demand_args.c_step, "Price increment between points")
      ->capture_default_str();
  sim_demand->add_option("--noise", demand_args.noise, "Noise level on the log-consumption scale")
      ->capture_default_str();
  sim_demand->add_option("--seed", demand_args.seed, "Random seed (default: EXPFIT_SEED or 1)");
  sim_demand->add_option("--out", demand_args.out_path, "Write the CSV to this file");

  ExpArSimArgs expar_args;
  CLI::App* sim_expar = app.add_subcommand(
      "simulate-expar", "Generate an amplitude-dependent autoregressive series");
  sim_expar->add_option("--count", expar_args.count, "Series length")->capture_default_str();
  sim_expar->add_option("--noise", expar_args.noise, "Innovation standard deviation")
      ->capture_default_str();
  sim_expar->add_option("--c0", expar_args.params.c0, "Intercept")->capture_default_str();
  sim_expar->add_option("--c1", expar_args.params.c1, "Linear lag-1 coefficient")
      ->capture_default_str();
  sim_expar->add_option("--pi1", expar_args.params.pi1, "Amplitude lag-1 coefficient")
      ->capture_default_str();
  sim_expar->add_option("--c2", expar_args.params.c2, "Linear lag-2 coefficient")
      ->capture_default_str();
  sim_expar->add_option("--pi2", expar_args.params.pi2, "Amplitude lag-2 coefficient")
      ->capture_default_str();
  sim_expar->add_option("--gamma", expar_args.params.gamma, "Amplitude decay rate")
      ->capture_default_str();
  sim_expar->add_option("--z1", expar_args.params.z1, "First amplitude center")
      ->capture_default_str();
  sim_expar->add_option("--z2", expar_args.params.z2, "Second amplitude center")
      ->capture_default_str();
  sim_expar->add_option("--x1", expar_args.x1, "First seed value")->capture_default_str();
  sim_expar->add_option("--x2", expar_args.x2, "Second seed value")->capture_default_str();
  sim_expar->add_option("--seed", expar_args.seed, "Random seed (default: EXPFIT_SEED or 1)");
  sim_expar->add_option("--out", expar_args.out_path, "Write the series to this file");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("expfit");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(fit_minimax)) return run_fit_minimax(fit_args, out);
    if (app.got_subcommand(fit_line)) return run_fit_line(fit_args, out);
    if (app.got_subcommand(fit_quartet)) return run_fit_quartet(fit_args, out);
    if (app.got_subcommand(classify_cmd)) return run_classify(fit_args, out);
    if (app.got_subcommand(band_cmd)) return run_band(band_args, out);
    if (app.got_subcommand(fit_tac)) return run_fit_tac(tac_args, out);
    if (app.got_subcommand(sim_demand)) return run_simulate_demand(demand_args, out);
    if (app.got_subcommand(sim_expar)) return run_simulate_expar(expar_args, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

} // namespace expfit::cli
