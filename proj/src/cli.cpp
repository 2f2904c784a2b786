#include "quadconc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "quadconc/bernstein.hpp"
#include "quadconc/bounds.hpp"
#include "quadconc/distribution_io.hpp"
#include "quadconc/errors.hpp"
#include "quadconc/matrix_io.hpp"
#include "quadconc/montecarlo.hpp"
#include "quadconc/version.hpp"

namespace quadconc {

namespace {

using nlohmann::json;

double parse_double_str(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ValidationError(std::string(what) + ": not a number: '" + s + "'");
  }
}

struct KChoice {
  bool auto_mode = false;
  double value = 0.0;
};

KChoice parse_k_choice(const std::string& text) {
  if (text == "auto") return {true, 0.0};
  KChoice kc;
  kc.value = parse_double_str(text, "--K");
  if (!std::isfinite(kc.value) || kc.value <= 0.0) {
    throw ValidationError("--K must be a positive number or 'auto'");
  }
  return kc;
}

std::string iso8601_utc_now() {
  const std::time_t tt =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Manifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // (path, digest)
  std::optional<std::uint64_t> seed;
  std::string timestamp;
};

Manifest make_manifest(std::string command, const std::vector<std::string>& input_paths,
                       std::optional<std::uint64_t> seed) {
  Manifest m;
  m.command = std::move(command);
  m.timestamp = iso8601_utc_now();
  m.seed = seed;
  for (const auto& p : input_paths) m.inputs.emplace_back(p, fnv1a64_file_hex(p));
  return m;
}

json manifest_json(const Manifest& m) {
  json inputs = json::array();
  for (const auto& in : m.inputs) {
    inputs.push_back({{"path", in.first}, {"fnv1a64", in.second}});
  }
  json j;
  j["command"] = m.command;
  j["inputs"] = inputs;
  j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
  j["timestamp"] = m.timestamp;
  j["tool"] = kToolName;
  j["tool_version"] = kToolVersion;
  return j;
}

using Meta = std::vector<std::pair<std::string, std::string>>;

void write_csv_report(std::ostream& os, const Manifest& m, const Meta& meta,
                      const std::string& columns_line,
                      const std::vector<std::string>& rows) {
  os << "# " << kToolName << " " << kToolVersion << "\n";
  os << "# command: " << m.command << "\n";
  os << "# timestamp: " << m.timestamp << "\n";
  for (const auto& in : m.inputs) {
    os << "# input: " << in.first << " fnv1a64=" << in.second << "\n";
  }
  if (m.seed) os << "# seed: " << *m.seed << "\n";
  for (const auto& kv : meta) os << "# " << kv.first << ": " << kv.second << "\n";
  os << columns_line << "\n";
  for (const auto& r : rows) os << r << "\n";
}

void write_json_report(std::ostream& os, const Manifest& m, const json& data) {
  json root;
  root["data"] = data;
  root["manifest"] = manifest_json(m);
  os << root.dump(2) << "\n";
}

struct OutputOpts {
  std::string format = "csv";
  std::string out_path;
};

struct ReportCtx {
  std::string command;
  OutputOpts opts;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

void emit_report(const ReportCtx& ctx, const std::vector<std::string>& input_paths,
                 std::optional<std::uint64_t> seed, const Meta& meta,
                 const std::string& columns_line, const std::vector<std::string>& rows,
                 const json& data) {
  const Manifest m = make_manifest(ctx.command, input_paths, seed);
  const auto writer = [&](std::ostream& os) {
    if (ctx.opts.format == "json") {
      write_json_report(os, m, data);
    } else {
      write_csv_report(os, m, meta, columns_line, rows);
    }
  };
  if (ctx.opts.out_path.empty()) {
    writer(*ctx.out);
    return;
  }
  std::ofstream f(ctx.opts.out_path, std::ios::binary);
  if (!f) throw ValidationError("cannot open --out path for writing: " + ctx.opts.out_path);
  writer(f);
  if (!f.good()) throw ValidationError("failed writing to " + ctx.opts.out_path);
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

Meta norms_meta(const NormStats& n) {
  return {
      {"hs_norm", format_double17(n.hs)},
      {"op_norm", format_double17(n.op)},
      {"hs_right_scaled", format_double17(n.hs_right_scaled)},
      {"hs_double_scaled", format_double17(n.hs_double_scaled)},
      {"op_double_scaled", format_double17(n.op_double_scaled)},
  };
}

json norms_json(const NormStats& n) {
  json j;
  j["hs"] = n.hs;
  j["op"] = n.op;
  j["hs_right_scaled"] = n.hs_right_scaled;
  j["hs_double_scaled"] = n.hs_double_scaled;
  j["op_double_scaled"] = n.op_double_scaled;
  return j;
}

void note_default_hw_c(std::ostream& err) {
  err << "note: using Hanson-Wright constant c = 1; the inequality only "
         "asserts existence of some c > 0 (override with --hw-c)\n";
}

// ---- certify ---------------------------------------------------------------

void run_certify(const ReportCtx& ctx, const std::string& dist_path,
                 const std::string& k_text, int p_max) {
  const DistributionSpec d = load_distribution(dist_path);
  const KChoice kc = parse_k_choice(k_text);
  std::optional<MinimalK> mk;
  double k = kc.value;
  if (kc.auto_mode) {
    mk = minimal_k(d, p_max);
    k = mk->value;
    *ctx.err << "note: --K auto derived K = " << format_double17(k)
             << " (ratio maximized at p = " << mk->argmax_p << ")\n";
  }
  const BernsteinCertificate cert = check_bernstein(d, k, p_max);

  Meta meta{
      {"kind", d.kind_name()},
      {"sigma2", format_double17(cert.sigma2)},
      {"K", format_double17(cert.k)},
      {"K_source", kc.auto_mode ? "auto" : "given"},
      {"p_min", std::to_string(cert.p_min)},
      {"p_max", std::to_string(cert.p_max)},
      {"satisfied", bool_str(cert.satisfied)},
      {"argmax_p", std::to_string(cert.argmax_p)},
  };
  if (cert.indeterminate_from_p > 0) {
    meta.emplace_back("indeterminate_from_p", std::to_string(cert.indeterminate_from_p));
  }
  if (mk) {
    meta.emplace_back("minimal_K", format_double17(mk->value));
    meta.emplace_back("minimal_K_argmax_p", std::to_string(mk->argmax_p));
    meta.emplace_back("minimal_K_lower_bound_only", bool_str(mk->lower_bound_only));
  }

  std::vector<std::string> rows;
  json jrows = json::array();
  for (std::size_t i = 0; i < cert.ratios.size(); ++i) {
    const int p = cert.p_min + static_cast<int>(i);
    rows.push_back(std::to_string(p) + "," + format_double17(cert.ratios[i]));
    jrows.push_back({{"p", p}, {"ratio", cert.ratios[i]}});
  }

  json data;
  data["kind"] = d.kind_name();
  data["sigma2"] = cert.sigma2;
  data["k"] = cert.k;
  data["k_source"] = kc.auto_mode ? "auto" : "given";
  data["p_min"] = cert.p_min;
  data["p_max"] = cert.p_max;
  data["satisfied"] = cert.satisfied;
  data["argmax_p"] = cert.argmax_p;
  data["indeterminate_from_p"] =
      cert.indeterminate_from_p > 0 ? json(cert.indeterminate_from_p) : json(nullptr);
  if (mk) {
    data["minimal_k"] = {{"value", mk->value},
                         {"argmax_p", mk->argmax_p},
                         {"lower_bound_only", mk->lower_bound_only}};
  }
  data["ratios"] = jrows;

  emit_report(ctx, {dist_path}, std::nullopt, meta, "p,ratio", rows, data);
}

// ---- mgf-verify ------------------------------------------------------------

void run_mgf_verify(const ReportCtx& ctx, const std::string& dist_path,
                    const std::string& k_text, const std::string& which,
                    const std::string& s_grid_text, int p_max) {
  const DistributionSpec d = load_distribution(dist_path);
  const KChoice kc = parse_k_choice(k_text);
  double k = kc.value;
  if (kc.auto_mode) {
    k = minimal_k(d, p_max).value;
    *ctx.err << "note: --K auto derived K = " << format_double17(k) << "\n";
  }

  std::vector<double> grid;
  if (!s_grid_text.empty()) {
    grid = parse_grid(s_grid_text);
  } else if (which == "subgaussian") {
    grid = default_subgaussian_grid(k);
  } else {
    grid = default_square_grid(k);
  }

  MgfCheckReport report;
  if (which == "subgaussian") {
    report = verify_mgf_subgaussian(d, k, grid);
  } else if (which == "centered-square") {
    report = verify_mgf_square(d, k, grid, /*centered=*/true);
  } else {
    report = verify_mgf_square(d, k, grid, /*centered=*/false);
  }
  const std::string inequality =
      which == "centered-square" ? "centered_square" : which;

  double min_margin = std::numeric_limits<double>::infinity();
  for (double m : report.margins) min_margin = std::min(min_margin, m);

  Meta meta{
      {"kind", d.kind_name()},
      {"inequality", inequality},
      {"K", format_double17(k)},
      {"K_source", kc.auto_mode ? "auto" : "given"},
      {"grid_points", std::to_string(grid.size())},
      {"all_nonnegative", bool_str(report.all_nonnegative)},
      {"min_margin", format_double17(min_margin)},
  };

  std::vector<std::string> rows;
  json jrows = json::array();
  for (std::size_t i = 0; i < report.s_grid.size(); ++i) {
    rows.push_back(format_double17(report.s_grid[i]) + "," +
                   format_double17(report.margins[i]));
    jrows.push_back({{"s", report.s_grid[i]}, {"margin", report.margins[i]}});
  }

  json data;
  data["kind"] = d.kind_name();
  data["inequality"] = inequality;
  data["k"] = k;
  data["k_source"] = kc.auto_mode ? "auto" : "given";
  data["all_nonnegative"] = report.all_nonnegative;
  data["min_margin"] = min_margin;
  data["margins"] = jrows;

  emit_report(ctx, {dist_path}, std::nullopt, meta, "s,margin", rows, data);
}

// ---- bounds ----------------------------------------------------------------

void run_bounds(const ReportCtx& ctx, const std::string& matrix_path,
                const std::string& sigmas_path, double k, double hw_c,
                bool hw_c_given, const std::string& t_grid_text,
                const std::string& x_grid_text) {
  if (t_grid_text.empty() == x_grid_text.empty()) {
    throw ValidationError("bounds: pass exactly one of --t-grid or --x-grid");
  }
  if (!hw_c_given) note_default_hw_c(*ctx.err);
  const SquareMatrix a = load_matrix(matrix_path);
  const SigmaDiag sig = load_sigmas(sigmas_path);
  const NormStats norms = scaled_norm_stats(a, sig);
  const BoundInputs inputs(norms, k, hw_c);

  Meta meta{
      {"n", std::to_string(a.dim())},
      {"K", format_double17(k)},
      {"hw_constant_c", format_double17(hw_c)},
  };
  const Meta nm = norms_meta(norms);
  meta.insert(meta.end(), nm.begin(), nm.end());

  json data;
  data["n"] = a.dim();
  data["k"] = k;
  data["hw_constant_c"] = hw_c;
  data["norms"] = norms_json(norms);

  std::vector<std::string> rows;
  json jrows = json::array();
  std::string columns;
  if (!t_grid_text.empty()) {
    const std::vector<double> grid = parse_grid(t_grid_text);
    const TailBoundCurve bern = tail_curve(inputs, grid, TailBoundKind::bernstein_improved);
    const TailBoundCurve hw = tail_curve(inputs, grid, TailBoundKind::hanson_wright);
    const TailBoundCurve gc = tail_curve(inputs, grid, TailBoundKind::gaussian_chaos_implied);
    columns = "t,bernstein_improved,hanson_wright,gaussian_chaos_implied";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      rows.push_back(format_double17(grid[i]) + "," + format_double17(bern.probs[i]) +
                     "," + format_double17(hw.probs[i]) + "," +
                     format_double17(gc.probs[i]));
      jrows.push_back({{"t", grid[i]},
                       {"bernstein_improved", bern.probs[i]},
                       {"hanson_wright", hw.probs[i]},
                       {"gaussian_chaos_implied", gc.probs[i]}});
    }
    data["curve"] = "tail";
  } else {
    const std::vector<double> grid = parse_grid(x_grid_text);
    const DeviationCurve bern =
        deviation_curve(inputs, grid, TailBoundKind::bernstein_improved);
    const DeviationCurve hw = deviation_curve(inputs, grid, TailBoundKind::hanson_wright);
    const DeviationCurve gc =
        deviation_curve(inputs, grid, TailBoundKind::gaussian_chaos_implied);
    columns = "x,bernstein_improved,hanson_wright,gaussian_chaos";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      rows.push_back(format_double17(grid[i]) + "," + format_double17(bern.values[i]) +
                     "," + format_double17(hw.values[i]) + "," +
                     format_double17(gc.values[i]));
      jrows.push_back({{"x", grid[i]},
                       {"bernstein_improved", bern.values[i]},
                       {"hanson_wright", hw.values[i]},
                       {"gaussian_chaos", gc.values[i]}});
    }
    data["curve"] = "deviation";
  }
  data["rows"] = jrows;

  emit_report(ctx, {matrix_path, sigmas_path}, std::nullopt, meta, columns, rows, data);
}

// ---- simulate --------------------------------------------------------------

void run_simulate(const ReportCtx& ctx, const std::string& matrix_path,
                  const std::string& dists_path, const std::string& t_grid_text,
                  const SimConfig& cfg, unsigned workers) {
  const SquareMatrix a = load_matrix(matrix_path);
  const std::vector<DistributionSpec> dists = load_distributions(dists_path, a.dim());
  const std::vector<double> grid = parse_grid(t_grid_text);
  const std::vector<TailEstimate> ests = simulate_tail(a, dists, cfg, grid, workers);
  const double mean = exact_mean(a, sigmas_of(dists));

  Meta meta{
      {"n", std::to_string(a.dim())},
      {"sample_count", std::to_string(cfg.sample_count)},
      {"chunk_size", std::to_string(cfg.chunk_size)},
      {"confidence", format_double17(cfg.confidence)},
      {"mean", format_double17(mean)},
  };

  std::vector<std::string> rows;
  json jrows = json::array();
  for (const TailEstimate& e : ests) {
    rows.push_back(format_double17(e.t) + "," + std::to_string(e.exceed_count) + "," +
                   format_double17(e.p_hat) + "," + format_double17(e.ci_low) + "," +
                   format_double17(e.ci_high));
    jrows.push_back({{"t", e.t},
                     {"exceed_count", e.exceed_count},
                     {"p_hat", e.p_hat},
                     {"ci_low", e.ci_low},
                     {"ci_high", e.ci_high}});
  }

  json data;
  data["n"] = a.dim();
  data["sample_count"] = cfg.sample_count;
  data["seed"] = cfg.seed;
  data["chunk_size"] = cfg.chunk_size;
  data["confidence"] = cfg.confidence;
  data["mean"] = mean;
  data["rows"] = jrows;

  emit_report(ctx, {matrix_path, dists_path}, cfg.seed, meta,
              "t,exceed_count,p_hat,ci_low,ci_high", rows, data);
}

// ---- compare ---------------------------------------------------------------

void run_compare(const ReportCtx& ctx, const std::string& matrix_path,
                 const std::string& dists_path, const std::string& x_grid_text,
                 const std::string& k_text, double hw_c, bool hw_c_given,
                 const SimConfig& cfg, unsigned workers) {
  if (!hw_c_given) note_default_hw_c(*ctx.err);
  const SquareMatrix a = load_matrix(matrix_path);
  const std::vector<DistributionSpec> dists = load_distributions(dists_path, a.dim());
  const std::vector<double> grid = parse_grid(x_grid_text);
  const KChoice kc = parse_k_choice(k_text);
  const CompareReport report =
      compare_bounds(a, dists, cfg, grid,
                     kc.auto_mode ? std::nullopt : std::optional<double>(kc.value),
                     hw_c, workers);
  if (report.k_auto) {
    *ctx.err << "note: --K auto per-coordinate minimal K:";
    for (double ki : report.per_coordinate_k) *ctx.err << " " << format_double17(ki);
    *ctx.err << "\nnote: using global K = " << format_double17(report.k) << " (max)\n";
  }

  Meta meta{
      {"n", std::to_string(a.dim())},
      {"K", format_double17(report.k)},
      {"K_source", report.k_auto ? "auto" : "given"},
      {"hw_constant_c", format_double17(report.hw_constant_c)},
      {"degenerate", bool_str(report.degenerate)},
      {"all_gaussian", bool_str(report.all_gaussian)},
      {"sample_count", std::to_string(cfg.sample_count)},
      {"chunk_size", std::to_string(cfg.chunk_size)},
      {"confidence", format_double17(cfg.confidence)},
  };
  if (report.k_auto) {
    std::string ks;
    for (std::size_t i = 0; i < report.per_coordinate_k.size(); ++i) {
      if (i > 0) ks += ",";
      ks += format_double17(report.per_coordinate_k[i]);
    }
    meta.emplace_back("per_coordinate_K", ks);
  }
  const Meta nm = norms_meta(report.norms);
  meta.insert(meta.end(), nm.begin(), nm.end());

  std::vector<std::string> rows;
  json jrows = json::array();
  for (const CompareRow& r : report.rows) {
    rows.push_back(format_double17(r.x) + "," + format_double17(r.quantile) + "," +
                   format_double17(r.quantile_ucb) + "," + format_double17(r.bernstein) +
                   "," + format_double17(r.hanson_wright) + "," +
                   format_double17(r.gaussian_chaos));
    jrows.push_back({{"x", r.x},
                     {"quantile", r.quantile},
                     {"quantile_ucb", r.quantile_ucb},
                     {"bernstein", r.bernstein},
                     {"hanson_wright", r.hanson_wright},
                     {"gaussian_chaos", r.gaussian_chaos}});
  }

  json data;
  data["n"] = a.dim();
  data["k"] = report.k;
  data["k_source"] = report.k_auto ? "auto" : "given";
  if (report.k_auto) data["per_coordinate_k"] = report.per_coordinate_k;
  data["hw_constant_c"] = report.hw_constant_c;
  data["degenerate"] = report.degenerate;
  data["all_gaussian"] = report.all_gaussian;
  data["sample_count"] = cfg.sample_count;
  data["seed"] = cfg.seed;
  data["chunk_size"] = cfg.chunk_size;
  data["confidence"] = cfg.confidence;
  data["norms"] = norms_json(report.norms);
  data["rows"] = jrows;

  emit_report(ctx, {matrix_path, dists_path}, cfg.seed, meta,
              "x,quantile,quantile_ucb,bernstein,hanson_wright,gaussian_chaos", rows,
              data);
}

// ---- enumerate -------------------------------------------------------------

void run_enumerate(const ReportCtx& ctx, const std::string& matrix_path,
                   const std::string& dists_path, const std::string& t_grid_text) {
  const SquareMatrix a = load_matrix(matrix_path);
  const std::vector<DistributionSpec> dists = load_distributions(dists_path, a.dim());
  const std::vector<double> grid = parse_grid(t_grid_text);
  const std::vector<double> tails = exact_tail_enumerate(a, dists, grid);
  const double mean = exact_mean(a, sigmas_of(dists));
  std::uint64_t states = 1;
  for (const auto& d : dists) states *= discrete_support(d).size();

  Meta meta{
      {"n", std::to_string(a.dim())},
      {"states", std::to_string(states)},
      {"mean", format_double17(mean)},
  };

  std::vector<std::string> rows;
  json jrows = json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rows.push_back(format_double17(grid[i]) + "," + format_double17(tails[i]));
    jrows.push_back({{"t", grid[i]}, {"prob", tails[i]}});
  }

  json data;
  data["n"] = a.dim();
  data["states"] = states;
  data["mean"] = mean;
  data["rows"] = jrows;

  emit_report(ctx, {matrix_path, dists_path}, std::nullopt, meta, "t,prob", rows, data);
}

std::string join_args(const std::vector<std::string>& args) {
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) s += " ";
    s += args[i];
  }
  return s;
}

void add_output_opts(CLI::App* sub, OutputOpts& oo) {
  sub->add_option("--format", oo.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--out", oo.out_path, "Write the report to this path instead of stdout");
}

void add_sim_opts(CLI::App* sub, SimConfig& cfg, unsigned& workers) {
  sub->add_option("--n-samples", cfg.sample_count, "Monte Carlo sample count")
      ->capture_default_str();
  sub->add_option("--seed", cfg.seed, "RNG seed; fully determines the data section")
      ->capture_default_str();
  sub->add_option("--chunk-size", cfg.chunk_size,
                  "Samples per RNG sub-stream (affects scheduling only, never output)")
      ->capture_default_str();
  sub->add_option("--confidence", cfg.confidence,
                  "One-sided confidence level for binomial/quantile bounds")
      ->capture_default_str();
  sub->add_option("--workers", workers,
                  "Worker threads; 0 = QUADCONC_THREADS env or hardware default")
      ->capture_default_str();
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t c = text.find(':', pos);
    if (c == std::string::npos) {
      parts.push_back(text.substr(pos));
      break;
    }
    parts.push_back(text.substr(pos, c - pos));
    pos = c + 1;
  }
  if (parts.size() != 4 || (parts[0] != "geom" && parts[0] != "lin")) {
    throw ValidationError(
        "grid must be geom:start:stop:count or lin:start:stop:count; got '" + text +
        "'");
  }
  const double start = parse_double_str(parts[1], "grid start");
  const double stop = parse_double_str(parts[2], "grid stop");
  if (!std::isfinite(start) || !std::isfinite(stop)) {
    throw ValidationError("grid endpoints must be finite");
  }
  unsigned long count = 0;
  try {
    std::size_t used = 0;
    count = std::stoul(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw ValidationError("grid count: not a positive integer: '" + parts[3] + "'");
  }
  if (count < 1 || count > 1000000) {
    throw ValidationError("grid count must lie in [1, 1000000]");
  }
  if (count == 1) {
    if (start != stop) {
      throw ValidationError("a 1-point grid needs start == stop");
    }
    return {start};
  }
  if (!(stop > start)) throw ValidationError("grid needs stop > start");
  std::vector<double> g(count);
  if (parts[0] == "geom") {
    if (!(start > 0.0)) throw ValidationError("geometric grid needs start > 0");
    const double step = (std::log(stop) - std::log(start)) / static_cast<double>(count - 1);
    for (unsigned long i = 0; i < count; ++i) {
      g[i] = start * std::exp(static_cast<double>(i) * step);
    }
  } else {
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (unsigned long i = 0; i < count; ++i) {
      g[i] = start + static_cast<double>(i) * step;
    }
  }
  g.front() = start;
  g.back() = stop;
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!(g[i] > g[i - 1])) {
      throw ValidationError("grid collapsed under rounding; reduce count or widen range");
    }
  }
  return g;
}

std::string fnv1a64_file_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read input file: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[65536];
  for (;;) {
    in.read(buf, sizeof buf);
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (got < static_cast<std::streamsize>(sizeof buf)) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Concentration bounds for quadratic forms of independent random "
               "variables: certify moment conditions, evaluate tail/deviation "
               "bounds, and verify them by simulation and exact enumeration."};
  app.name(kToolName);
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  // certify
  std::string c_dist, c_k;
  int c_pmax = kDefaultPMax;
  OutputOpts c_out;
  CLI::App* certify = app.add_subcommand(
      "certify",
      "Certify the moment growth condition E|X|^{2p} <= (1/2) p! sigma^2 K^{2(p-1)} "
      "for p in [2, p-max]. Columns: p,ratio (ratio <= 1 means the p-th moment "
      "complies).");
  certify->add_option("--dist", c_dist, "Distribution JSON file")->required();
  certify->add_option("--K", c_k, "Scale K, or 'auto' for the minimal certified K")
      ->required();
  certify->add_option("--p-max", c_pmax, "Largest moment order checked")
      ->check(CLI::Range(2, 200))
      ->capture_default_str();
  add_output_opts(certify, c_out);

  // mgf-verify
  std::string m_dist, m_k, m_which, m_grid;
  int m_pmax = kDefaultPMax;
  OutputOpts m_out;
  CLI::App* mgf = app.add_subcommand(
      "mgf-verify",
      "Numerically verify an MGF consequence of the certified moment condition: "
      "subgaussian (E e^{sX} <= e^{s^2 K^2}), centered-square "
      "(E e^{s X^2 - s sigma^2} <= e^{s^2 sigma^2 K^2}), or square "
      "(E e^{s X^2} <= e^{1.5 s sigma^2}), the square forms for 0 <= 2sK^2 <= 1. "
      "Columns: s,margin (margin = log RHS - log LHS; nonnegative = verified).");
  mgf->add_option("--dist", m_dist, "Distribution JSON file")->required();
  mgf->add_option("--K", m_k, "Scale K, or 'auto'")->required();
  mgf->add_option("--which", m_which, "Inequality to check")
      ->check(CLI::IsMember({"subgaussian", "centered-square", "square"}))
      ->required();
  mgf->add_option("--s-grid", m_grid,
                  "Grid for s as geom:start:stop:count or lin:start:stop:count "
                  "(default: a dense grid over the inequality's admissible range)");
  mgf->add_option("--p-max", m_pmax, "Moment order cap for --K auto")
      ->check(CLI::Range(2, 200))
      ->capture_default_str();
  add_output_opts(mgf, m_out);

  // bounds
  std::string b_matrix, b_sigmas, b_tgrid, b_xgrid;
  double b_k = 0.0, b_hwc = 1.0;
  OutputOpts b_out;
  CLI::App* bounds = app.add_subcommand(
      "bounds",
      "Evaluate the analytic bounds for xi^T A xi - E[xi^T A xi]. With --t-grid: "
      "tail probabilities at each t, columns t,bernstein_improved,hanson_wright,"
      "gaussian_chaos_implied. With --x-grid: deviations at confidence 1-e^{-x}, "
      "columns x,bernstein_improved,hanson_wright,gaussian_chaos. The gaussian_chaos "
      "columns are valid for Gaussian coordinates only.");
  bounds->add_option("--matrix", b_matrix, "Matrix file (.csv or .json)")->required();
  bounds->add_option("--sigmas", b_sigmas, "Per-coordinate sigma JSON file")->required();
  bounds->add_option("--K", b_k, "Bernstein scale K")
      ->check(CLI::PositiveNumber)
      ->required();
  CLI::Option* b_hwc_opt =
      bounds->add_option("--hw-c", b_hwc,
                         "Hanson-Wright absolute constant c (the classical bound "
                         "never fixes it)")
          ->check(CLI::PositiveNumber)
          ->capture_default_str();
  bounds->add_option("--t-grid", b_tgrid, "Tail grid, geom:start:stop:count or lin:...");
  bounds->add_option("--x-grid", b_xgrid, "Deviation grid");
  add_output_opts(bounds, b_out);

  // simulate
  std::string s_matrix, s_dists, s_tgrid;
  SimConfig s_cfg;
  s_cfg.sample_count = 100000;
  unsigned s_workers = 0;
  OutputOpts s_out;
  CLI::App* simulate = app.add_subcommand(
      "simulate",
      "Monte Carlo tail frequencies of xi^T A xi - mean with exact one-sided "
      "binomial confidence bounds. Columns: t,exceed_count,p_hat,ci_low,ci_high. "
      "Byte-identical data for a fixed seed regardless of worker count.");
  simulate->add_option("--matrix", s_matrix, "Matrix file (.csv or .json)")->required();
  simulate->add_option("--dists", s_dists,
                       "Distributions JSON (array of n, or one object for all "
                       "coordinates)")
      ->required();
  simulate->add_option("--t-grid", s_tgrid, "Tail grid")->required();
  add_sim_opts(simulate, s_cfg, s_workers);
  add_output_opts(simulate, s_out);

  // compare
  std::string p_matrix, p_dists, p_xgrid, p_k = "auto";
  double p_hwc = 1.0;
  SimConfig p_cfg;
  p_cfg.sample_count = 100000;
  unsigned p_workers = 0;
  OutputOpts p_out;
  CLI::App* compare = app.add_subcommand(
      "compare",
      "Empirical (1-e^{-x})-quantiles of xi^T A xi - mean against the analytic "
      "deviation bounds. Columns: x,quantile,quantile_ucb,bernstein,hanson_wright,"
      "gaussian_chaos (gaussian_chaos is NaN unless every coordinate is Gaussian).");
  compare->add_option("--matrix", p_matrix, "Matrix file (.csv or .json)")->required();
  compare->add_option("--dists", p_dists, "Distributions JSON")->required();
  compare->add_option("--x-grid", p_xgrid, "Confidence grid (x > 0)")->required();
  compare->add_option("--K", p_k, "Bernstein scale K, or 'auto' (per-coordinate "
                      "minimal K, maximized)")
      ->capture_default_str();
  CLI::Option* p_hwc_opt = compare->add_option("--hw-c", p_hwc,
                                               "Hanson-Wright absolute constant c")
                               ->check(CLI::PositiveNumber)
                               ->capture_default_str();
  add_sim_opts(compare, p_cfg, p_workers);
  add_output_opts(compare, p_out);

  // enumerate
  std::string e_matrix, e_dists, e_tgrid;
  OutputOpts e_out;
  CLI::App* enumerate = app.add_subcommand(
      "enumerate",
      "Exact tail probabilities P[xi^T A xi - mean > t] for finite-support "
      "coordinates by full enumeration (state space capped at 2^24). "
      "Columns: t,prob.");
  enumerate->add_option("--matrix", e_matrix, "Matrix file (.csv or .json)")->required();
  enumerate->add_option("--dists", e_dists, "Distributions JSON (finite support)")
      ->required();
  enumerate->add_option("--t-grid", e_tgrid, "Tail grid")->required();
  add_output_opts(enumerate, e_out);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  ReportCtx ctx;
  ctx.command = join_args(args);
  ctx.out = &out;
  ctx.err = &err;

  try {
    if (certify->parsed()) {
      ctx.opts = c_out;
      run_certify(ctx, c_dist, c_k, c_pmax);
    } else if (mgf->parsed()) {
      ctx.opts = m_out;
      run_mgf_verify(ctx, m_dist, m_k, m_which, m_grid, m_pmax);
    } else if (bounds->parsed()) {
      ctx.opts = b_out;
      run_bounds(ctx, b_matrix, b_sigmas, b_k, b_hwc, b_hwc_opt->count() > 0, b_tgrid,
                 b_xgrid);
    } else if (simulate->parsed()) {
      ctx.opts = s_out;
      run_simulate(ctx, s_matrix, s_dists, s_tgrid, s_cfg, s_workers);
    } else if (compare->parsed()) {
      ctx.opts = p_out;
      run_compare(ctx, p_matrix, p_dists, p_xgrid, p_k, p_hwc, p_hwc_opt->count() > 0,
                  p_cfg, p_workers);
    } else if (enumerate->parsed()) {
      ctx.opts = e_out;
      run_enumerate(ctx, e_matrix, e_dists, e_tgrid);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, out, err);
}

}  // namespace quadconc
