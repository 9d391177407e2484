#include "warpkit/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "json_writer.hpp"
#include "warpkit/averaging.hpp"
#include "warpkit/benchstats.hpp"
#include "warpkit/clustering.hpp"
#include "warpkit/distances.hpp"
#include "warpkit/error.hpp"
#include "warpkit/filters.hpp"
#include "warpkit/genmetrics.hpp"
#include "warpkit/io.hpp"

namespace warpkit::cli {
namespace fs = std::filesystem;

namespace {

struct Common {
  std::size_t threads = 1;
};

Dataset load_input(const std::string& path) {
  if (fs::is_directory(path)) return load_multivariate_dir(path);
  return load_ucr_dataset(path);
}

void save_output(const fs::path& path, const Dataset& ds) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  if (ds.channels() > 1) save_multivariate_dir(path, ds);
  else save_ucr_dataset(path, ds);
}

fs::path run_json_beside(const fs::path& output) {
  return output.has_parent_path() ? output.parent_path() / "run.json" : fs::path("run.json");
}

Json run_record(const std::string& subcommand, Json config, Json inputs, Json outputs) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["subcommand"] = subcommand;
  j["config"] = std::move(config);
  j["inputs"] = std::move(inputs);
  j["outputs"] = std::move(outputs);
  return j;
}

Json barycenter_json(const BarycenterOptions& b) {
  Json j;
  j["max_iters"] = b.max_iters;
  j["tol"] = b.tol ? Json(*b.tol) : Json("1e-6 * initial objective");
  j["guard_increase"] = b.guard_increase;
  return j;
}

std::vector<std::size_t> parse_lengths(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (const std::exception&) {
      throw ArgumentError("bad filter length '" + item + "'");
    }
    if (pos != item.size() || v <= 0) throw ArgumentError("bad filter length '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw ArgumentError("no filter lengths given");
  return out;
}

std::vector<std::string> parse_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------- distance

struct DistanceArgs {
  std::string kind = "dtw";
  double gamma = 1.0;
  double msm_cost = 0.5;
  std::size_t reach = 15;
  bool path = false;
  std::size_t row_a = 0;
  std::size_t row_b = 0;
  std::string a;
  std::string b;
  std::string out_dir;
};

void add_distance(CLI::App& app, DistanceArgs& a) {
  auto* sub = app.add_subcommand("distance", "Distance between two series");
  sub->add_option("--kind", a.kind, "ed, dtw, softdtw, msm or shapedtw")
      ->check(CLI::IsMember({"ed", "euclidean", "dtw", "softdtw", "msm", "shapedtw"}))
      ->capture_default_str();
  sub->add_option("--gamma", a.gamma, "SoftDTW smoothing")->capture_default_str();
  sub->add_option("--msm-cost", a.msm_cost, "MSM split/merge cost")->capture_default_str();
  sub->add_option("--reach", a.reach, "ShapeDTW reach")->capture_default_str();
  sub->add_flag("--path", a.path, "Print the warping path as JSON (dtw, shapedtw)");
  sub->add_option("--row-a", a.row_a, "Sample index in the first file")->capture_default_str();
  sub->add_option("--row-b", a.row_b, "Sample index in the second file")->capture_default_str();
  sub->add_option("-o,--out", a.out_dir, "Directory for distance.json and run.json");
  sub->add_option("a", a.a, "First series file")->required();
  sub->add_option("b", a.b, "Second series file")->required();
}

int run_distance(const DistanceArgs& a, std::ostream& out) {
  const auto da = load_input(a.a);
  const auto db = load_input(a.b);
  if (a.row_a >= da.size()) throw ArgumentError("--row-a out of range for " + a.a);
  if (a.row_b >= db.size()) throw ArgumentError("--row-b out of range for " + a.b);
  const auto& x = da.samples[a.row_a];
  const auto& y = db.samples[a.row_b];

  DistanceConfig cfg;
  cfg.kind = parse_distance_kind(a.kind);
  cfg.gamma = a.gamma;
  cfg.msm_cost = a.msm_cost;
  cfg.reach = a.reach;
  cfg.validate();

  std::optional<Alignment> aligned;
  double cost = 0.0;
  if (cfg.kind == DistanceKind::dtw) {
    aligned = dtw(x, y);
    cost = aligned->cost;
  } else if (cfg.kind == DistanceKind::shapedtw) {
    aligned = shape_dtw(x, y, cfg.reach);
    cost = aligned->cost;
  } else {
    if (a.path) throw ArgumentError("--path is available for dtw and shapedtw only");
    cost = distance(cfg, x, y);
  }

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["kind"] = to_string(cfg.kind);
  report["cost"] = cost;
  if (aligned) {
    Json path = Json::array();
    for (const auto& s : aligned->path.steps()) path.push_back(Json::array({s.i + 1, s.j + 1}));
    report["path"] = path;
  }
  if (a.path) out << to_json_text(report);
  else out << format_double(cost) << '\n';

  if (!a.out_dir.empty()) {
    const fs::path dir(a.out_dir);
    write_text(dir / "distance.json", to_json_text(report));
    Json cfgj;
    cfgj["kind"] = to_string(cfg.kind);
    cfgj["gamma"] = cfg.gamma;
    cfgj["msm_cost"] = cfg.msm_cost;
    cfgj["reach"] = cfg.reach;
    cfgj["path"] = a.path;
    cfgj["row_a"] = a.row_a;
    cfgj["row_b"] = a.row_b;
    write_text(dir / "run.json", to_json_text(run_record("distance", cfgj, Json::array({a.a, a.b}),
                                                         Json::array({(dir / "distance.json").string()}))));
  }
  return 0;
}

// ----------------------------------------------------------------- average

struct AverageArgs {
  std::string method = "dba";
  std::size_t reach = 15;
  std::size_t max_iters = 30;
  std::optional<double> tol;
  std::string init = "medoid";
  std::uint64_t seed = 0;
  bool pooled = false;
  std::string input;
  std::string output;
};

void add_average(CLI::App& app, AverageArgs& a) {
  auto* sub = app.add_subcommand("average", "Prototype per class (mean, DBA or ShapeDBA)");
  sub->add_option("--method", a.method)->check(CLI::IsMember({"mean", "dba", "shapedba"}))->capture_default_str();
  sub->add_option("--reach", a.reach, "ShapeDTW reach")->capture_default_str();
  sub->add_option("--max-iters", a.max_iters)->capture_default_str();
  sub->add_option("--tol", a.tol, "Stop when the objective drops by no more than this");
  sub->add_option("--init", a.init, "medoid or random")->check(CLI::IsMember({"medoid", "random"}))->capture_default_str();
  sub->add_option("--seed", a.seed, "Seed for --init random")->capture_default_str();
  sub->add_flag("--pooled", a.pooled, "One prototype for the whole set, ignoring labels");
  sub->add_option("input", a.input, "UCR file or multivariate directory")->required();
  sub->add_option("-o,--out", a.output, "Output prototype file")->required();
}

int run_average(const AverageArgs& a, const Common& common, std::ostream& out) {
  const auto ds = load_input(a.input);
  ds.validate();
  const auto method = parse_averaging_method(a.method);
  BarycenterOptions bary;
  bary.max_iters = a.max_iters;
  bary.tol = a.tol;
  bary.threads = common.threads;

  std::map<double, std::vector<std::size_t>> groups;
  const bool by_class = ds.has_labels() && !a.pooled;
  for (std::size_t i = 0; i < ds.size(); ++i) groups[by_class ? ds.labels[i] : 0.0].push_back(i);

  Dataset result;
  result.name = ds.name + "_prototypes";
  result.label_kind = by_class ? ds.label_kind : LabelKind::integer;
  Json summaries = Json::array();
  for (const auto& [label, members] : groups) {
    std::vector<TimeSeries> set;
    for (auto i : members) set.push_back(ds.samples[i]);
    Prototype p;
    if (method == AveragingMethod::mean) {
      p = arithmetic_mean(set);
    } else {
      const TimeSeries init = a.init == "random" ? random_init(set, a.seed) : set[dtw_medoid(set, common.threads)];
      p = method == AveragingMethod::dba ? dba(set, init, bary) : shape_dba(set, a.reach, init, bary);
    }
    Json s;
    s["label"] = label;
    s["members"] = members.size();
    s["iterations"] = p.iterations;
    s["converged"] = p.converged;
    s["rejected_steps"] = p.rejected_steps;
    s["objective_trace"] = p.objective_trace;
    summaries.push_back(s);
    result.samples.push_back(std::move(p.series));
    result.labels.push_back(label);
  }
  const fs::path output(a.output);
  save_output(output, result);
  out << "wrote " << result.size() << " prototype(s) to " << output.string() << '\n';

  Json cfg;
  cfg["method"] = a.method;
  cfg["reach"] = a.reach;
  cfg["init"] = a.init;
  cfg["seed"] = a.seed;
  cfg["pooled"] = a.pooled;
  cfg["threads"] = common.threads;
  cfg["barycenter"] = barycenter_json(bary);
  Json rec = run_record("average", cfg, Json::array({a.input}), Json::array({output.string()}));
  rec["prototypes"] = summaries;
  write_text(run_json_beside(output), to_json_text(rec));
  return 0;
}

// ------------------------------------------------------------------ extend

struct ExtendArgs {
  std::size_t neighbors = 5;
  std::size_t reach = 15;
  std::size_t max_iters = 30;
  std::optional<double> tol;
  std::string input;
  std::string output;
};

void add_extend(CLI::App& app, ExtendArgs& a) {
  auto* sub = app.add_subcommand("extend", "Append weighted-ShapeDBA samples with blended labels");
  sub->add_option("--neighbors", a.neighbors)->capture_default_str();
  sub->add_option("--reach", a.reach)->capture_default_str();
  sub->add_option("--max-iters", a.max_iters)->capture_default_str();
  sub->add_option("--tol", a.tol);
  sub->add_option("input", a.input, "Labelled UCR file or multivariate directory")->required();
  sub->add_option("-o,--out", a.output, "Output dataset")->required();
}

int run_extend(const ExtendArgs& a, const Common& common, std::ostream& out) {
  const auto ds = load_input(a.input);
  ExtendOptions opts;
  opts.neighbors = a.neighbors;
  opts.reach = a.reach;
  opts.barycenter.max_iters = a.max_iters;
  opts.barycenter.tol = a.tol;
  opts.barycenter.threads = common.threads;
  const auto extended = extend_dataset(ds, opts);
  const fs::path output(a.output);
  save_output(output, extended);
  out << "wrote " << extended.size() << " samples (" << ds.size() << " synthetic) to " << output.string() << '\n';

  Json cfg;
  cfg["neighbors"] = a.neighbors;
  cfg["reach"] = a.reach;
  cfg["threads"] = common.threads;
  cfg["barycenter"] = barycenter_json(opts.barycenter);
  write_text(run_json_beside(output),
             to_json_text(run_record("extend", cfg, Json::array({a.input}), Json::array({output.string()}))));
  return 0;
}

// ----------------------------------------------------------------- cluster

struct ClusterArgs {
  std::size_t k = 2;
  std::string distance = "dtw";
  std::string avg = "dba";
  std::size_t reach = 15;
  std::size_t max_iters = 50;
  double eps = 1e-6;
  std::size_t bary_iters = 30;
  std::uint64_t seed = 0;
  std::string ari;
  std::string input;
  std::string output;
};

void add_cluster(CLI::App& app, ClusterArgs& a) {
  auto* sub = app.add_subcommand("cluster", "k-means with elastic barycenter averaging");
  sub->add_option("--k", a.k)->capture_default_str();
  sub->add_option("--distance", a.distance)->check(CLI::IsMember({"ed", "euclidean", "dtw", "shapedtw"}))->capture_default_str();
  sub->add_option("--avg", a.avg)->check(CLI::IsMember({"mean", "dba", "shapedba"}))->capture_default_str();
  sub->add_option("--reach", a.reach)->capture_default_str();
  sub->add_option("--max-iters", a.max_iters)->capture_default_str();
  sub->add_option("--eps", a.eps, "Stop when inertia changes by less than this")->capture_default_str();
  sub->add_option("--bary-iters", a.bary_iters, "Barycenter iterations per update")->capture_default_str();
  sub->add_option("--seed", a.seed)->capture_default_str();
  sub->add_option("--ari", a.ari, "True labels, one per line; prints the ARI");
  sub->add_option("input", a.input)->required();
  sub->add_option("-o,--out", a.output, "Result JSON")->required();
}

int run_cluster(const ClusterArgs& a, const Common& common, std::ostream& out) {
  const auto ds = load_input(a.input);
  ds.validate();
  KMeansOptions opts;
  opts.k = a.k;
  opts.distance.kind = parse_distance_kind(a.distance);
  opts.distance.reach = a.reach;
  opts.averaging = parse_averaging_method(a.avg);
  opts.max_iters = a.max_iters;
  opts.eps = a.eps;
  opts.seed = a.seed;
  opts.barycenter.max_iters = a.bary_iters;
  opts.threads = common.threads;
  std::optional<std::vector<long long>> truth;
  if (!a.ari.empty()) {
    truth = load_int_labels(a.ari);
    if (truth->size() != ds.size())
      throw DataError(a.ari + ": " + std::to_string(truth->size()) + " labels for " + std::to_string(ds.size()) +
                      " samples");
  }
  const auto res = kmeans_eba(ds.samples, opts);

  const fs::path output(a.output);
  const fs::path centroid_path = output.parent_path() / (output.stem().string() + "_centroids.tsv");
  Dataset centroids;
  centroids.label_kind = LabelKind::integer;
  for (std::size_t c = 0; c < res.centroids.size(); ++c) {
    centroids.samples.push_back(res.centroids[c].series);
    centroids.labels.push_back(static_cast<double>(c));
  }
  save_output(centroid_path, centroids);

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["k"] = a.k;
  report["assignments"] = res.assignments;
  report["inertia"] = res.inertia;
  report["inertia_trace"] = res.inertia_trace;
  report["iterations"] = res.iterations;
  report["converged"] = res.converged;
  report["initial_indices"] = res.initial_indices;
  report["centroids"] = centroid_path.string();
  if (truth) {
    std::vector<long long> predicted(res.assignments.begin(), res.assignments.end());
    const double ari = adjusted_rand_index(*truth, predicted);
    report["ari"] = ari;
    out << "ARI " << format_double(ari) << '\n';
  }
  write_text(output, to_json_text(report));
  out << "inertia " << format_double(res.inertia) << " after " << res.iterations << " sweep(s)\n";

  Json cfg;
  cfg["k"] = a.k;
  cfg["distance"] = to_string(opts.distance.kind);
  cfg["avg"] = a.avg;
  cfg["reach"] = a.reach;
  cfg["max_iters"] = a.max_iters;
  cfg["eps"] = a.eps;
  cfg["bary_iters"] = a.bary_iters;
  cfg["seed"] = a.seed;
  cfg["threads"] = common.threads;
  Json inputs = Json::array({a.input});
  if (!a.ari.empty()) inputs.push_back(a.ari);
  write_text(run_json_beside(output),
             to_json_text(run_record("cluster", cfg, inputs, Json::array({output.string(), centroid_path.string()}))));
  return 0;
}

// ----------------------------------------------------------------- filters

struct FiltersArgs {
  std::string lengths = "4,8,16";
  std::string input;
  std::string output;
};

void add_filters(CLI::App& app, FiltersArgs& a) {
  auto* sub = app.add_subcommand("filters", "Hand-crafted trend and peak filter features");
  sub->add_option("--lengths", a.lengths, "Comma-separated even filter lengths")->capture_default_str();
  sub->add_option("input", a.input, "Univariate UCR file")->required();
  sub->add_option("-o,--out", a.output, "Feature table (TSV)")->required();
}

int run_filters(const FiltersArgs& a, std::ostream& out) {
  const auto ds = load_input(a.input);
  const auto lengths = parse_lengths(a.lengths);
  std::ostringstream table;
  std::vector<FeatureChannel> channels;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto bank = handcrafted_bank(ds.samples[i], lengths);
    if (i == 0) {
      channels = bank.channels;
      table << "sample\tt";
      for (const auto& c : channels) table << '\t' << to_string(c.kind) << '_' << c.length;
      table << '\n';
    }
    for (std::size_t t = 0; t < bank.features.length(); ++t) {
      table << i << '\t' << t;
      for (std::size_t c = 0; c < bank.features.channels(); ++c) table << '\t' << format_double(bank.features(t, c));
      table << '\n';
    }
  }
  const fs::path output(a.output);
  write_text(output, table.str());
  out << "wrote " << channels.size() << " feature channel(s) for " << ds.size() << " sample(s) to " << output.string()
      << '\n';

  Json cfg;
  cfg["lengths"] = lengths;
  Json meta = Json::array();
  for (const auto& c : channels) {
    Json m;
    m["kind"] = to_string(c.kind);
    m["length"] = c.length;
    m["valid_length"] = c.valid_length;
    meta.push_back(m);
  }
  Json rec = run_record("filters", cfg, Json::array({a.input}), Json::array({output.string()}));
  rec["channels"] = meta;
  write_text(run_json_beside(output), to_json_text(rec));
  return 0;
}

// ---------------------------------------------------------------- eval-gen

struct EvalArgs {
  std::string real;
  std::string gen;
  std::string labels_real;
  std::string labels_gen;
  std::string pred_gen;
  std::string raw_real;
  std::string raw_gen;
  std::size_t k = 5;
  std::size_t s = 20;
  std::size_t r = 10;
  std::uint64_t seed = 0;
  std::string output;
};

void add_eval(CLI::App& app, EvalArgs& a) {
  auto* sub = app.add_subcommand("eval-gen", "Fidelity and diversity metrics for generated samples");
  sub->add_option("--real", a.real, "Real latent vectors (CSV)")->required();
  sub->add_option("--gen", a.gen, "Generated latent vectors (CSV)")->required();
  sub->add_option("--labels-real", a.labels_real, "Class of each real row");
  sub->add_option("--labels-gen", a.labels_gen, "Class each generated row was conditioned on");
  sub->add_option("--pred-gen", a.pred_gen, "Classifier predictions on generated rows (for AOG)");
  sub->add_option("--raw-real", a.raw_real, "Real series for WPD");
  sub->add_option("--raw-gen", a.raw_gen, "Generated series for WPD");
  sub->add_option("--k", a.k)->capture_default_str();
  sub->add_option("--s", a.s, "Subset size for APD, ACPD and WPD")->capture_default_str();
  sub->add_option("--r", a.r, "Repetitions")->capture_default_str();
  sub->add_option("--seed", a.seed)->capture_default_str();
  sub->add_option("-o,--out", a.output, "Report JSON")->required();
}

int run_eval(const EvalArgs& a, const Common& common, std::ostream& out, std::ostream& err) {
  EvaluationInput in;
  std::vector<long long> lr;
  std::vector<long long> lg;
  if (!a.labels_real.empty()) lr = load_int_labels(a.labels_real);
  if (!a.labels_gen.empty()) lg = load_int_labels(a.labels_gen);
  try {
    in.real = LatentSet::from_rows(load_matrix(a.real), lr);
    in.generated = LatentSet::from_rows(load_matrix(a.gen), lg);
  } catch (const ArgumentError& e) {
    throw DataError(e.what());
  }
  if (!a.pred_gen.empty()) in.predicted = load_int_labels(a.pred_gen);
  if (!a.raw_real.empty()) in.raw_real = load_input(a.raw_real).samples;
  if (!a.raw_gen.empty()) in.raw_generated = load_input(a.raw_gen).samples;

  EvaluationOptions opts;
  opts.k = a.k;
  opts.subset = a.s;
  opts.repetitions = a.r;
  opts.seed = a.seed;
  opts.threads = common.threads;
  std::vector<std::string> notes;
  const auto report = evaluate_generation(in, opts, &notes);
  for (const auto& n : notes) err << "warning: " << n << '\n';

  Json metrics;
  for (const auto& [name, e] : report) {
    Json m;
    m["value"] = e.value;
    m["real_reference"] = e.real_reference ? Json(*e.real_reference) : Json(nullptr);
    Json params = Json::object();
    for (const auto& [k, v] : e.params) params[k] = v;
    m["params"] = params;
    metrics[name] = m;
    out << name << ' ' << format_double(e.value);
    if (e.real_reference) out << " (real " << format_double(*e.real_reference) << ')';
    out << '\n';
  }
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["metrics"] = metrics;
  doc["notes"] = notes;
  const fs::path output(a.output);
  write_text(output, to_json_text(doc));

  Json cfg;
  cfg["k"] = a.k;
  cfg["s"] = a.s;
  cfg["r"] = a.r;
  cfg["seed"] = a.seed;
  cfg["threads"] = common.threads;
  Json inputs = Json::array({a.real, a.gen});
  for (const auto* p : {&a.labels_real, &a.labels_gen, &a.pred_gen, &a.raw_real, &a.raw_gen})
    if (!p->empty()) inputs.push_back(*p);
  write_text(run_json_beside(output), to_json_text(run_record("eval-gen", cfg, inputs, Json::array({output.string()}))));
  return 0;
}

// --------------------------------------------------------------------- mcm

struct McmArgs {
  std::string input;
  std::string rows;
  std::string cols;
  double alpha = 0.05;
  bool lower_is_better = false;
  std::string out_dir;
};

void add_mcm(CLI::App& app, McmArgs& a) {
  auto* sub = app.add_subcommand("mcm", "Multi-Comparison Matrix and benchmark statistics");
  sub->add_option("input", a.input, "Results CSV: dataset column, then one column per comparate")->required();
  sub->add_option("--rows", a.rows, "Comma-separated row comparates");
  sub->add_option("--cols", a.cols, "Comma-separated column comparates");
  sub->add_option("--alpha", a.alpha)->capture_default_str();
  sub->add_flag("--lower-is-better", a.lower_is_better, "Scores are errors rather than accuracies");
  sub->add_option("-o,--out", a.out_dir, "Output directory")->required();
}

int run_mcm(const McmArgs& a, std::ostream& out) {
  auto table = load_results_csv(a.input);
  table.higher_is_better = !a.lower_is_better;
  const auto mcm = build_mcm(table, parse_names(a.rows), parse_names(a.cols), a.alpha);

  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["higher_is_better"] = table.higher_is_better;
  doc["alpha"] = a.alpha;
  doc["datasets"] = table.n();
  auto axis = [](const std::vector<std::string>& names, const std::vector<double>& means) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < names.size(); ++i) arr.push_back(Json{{"name", names[i]}, {"mean", means[i]}});
    return arr;
  };
  doc["rows"] = axis(mcm.rows, mcm.row_means);
  doc["cols"] = axis(mcm.cols, mcm.col_means);
  Json cells = Json::array();
  for (std::size_t r = 0; r < mcm.rows.size(); ++r) {
    for (std::size_t c = 0; c < mcm.cols.size(); ++c) {
      const auto& cell = mcm.cell(r, c);
      if (cell.empty) continue;
      Json j;
      j["row"] = mcm.rows[r];
      j["col"] = mcm.cols[c];
      j["mean_diff"] = cell.mean_diff;
      j["wins"] = cell.wins;
      j["ties"] = cell.ties;
      j["losses"] = cell.losses;
      j["p_value"] = cell.p_value;
      j["bold"] = cell.bold;
      cells.push_back(j);
    }
  }
  doc["cells"] = cells;

  const auto rk = ranks(table);
  Json ar;
  for (std::size_t i = 0; i < table.m(); ++i) ar[table.comparates[i]] = rk.average_ranks[i];
  doc["average_ranks"] = ar;
  if (table.n() >= 2) {
    const auto f = friedman(table);
    doc["friedman"] = Json{{"statistic", f.statistic}, {"p_value", f.p_value}, {"dof", f.dof}};
  }
  if (table.m() <= 20 && (std::abs(a.alpha - 0.05) < 1e-12 || std::abs(a.alpha - 0.10) < 1e-12))
    doc["nemenyi_cd"] = nemenyi_cd(table.m(), table.n(), a.alpha);
  const auto ph = pairwise_holm(table, a.alpha);
  Json holm = Json::array();
  for (std::size_t k = 0; k < ph.pairs.size(); ++k) {
    holm.push_back(Json{{"a", table.comparates[ph.pairs[k].first]},
                        {"b", table.comparates[ph.pairs[k].second]},
                        {"p_value", ph.p_values[k]},
                        {"threshold", ph.holm.thresholds[k]},
                        {"rejected", static_cast<bool>(ph.holm.rejected[k])}});
  }
  doc["holm"] = holm;

  const fs::path dir(a.out_dir);
  const auto text = mcm_to_text(mcm);
  write_text(dir / "mcm.json", to_json_text(doc));
  write_text(dir / "mcm.csv", mcm_to_csv(mcm));
  write_text(dir / "mcm.txt", text);
  out << text;

  Json cfg;
  cfg["rows"] = parse_names(a.rows);
  cfg["cols"] = parse_names(a.cols);
  cfg["alpha"] = a.alpha;
  cfg["lower_is_better"] = a.lower_is_better;
  write_text(dir / "run.json",
             to_json_text(run_record("mcm", cfg, Json::array({a.input}),
                                     Json::array({(dir / "mcm.json").string(), (dir / "mcm.csv").string(),
                                                  (dir / "mcm.txt").string()}))));
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"warpkit: elastic distances, prototypes, clustering and benchmark statistics"};
  app.name("warpkit");
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  DistanceArgs distance_args;
  AverageArgs average_args;
  ExtendArgs extend_args;
  ClusterArgs cluster_args;
  FiltersArgs filters_args;
  EvalArgs eval_args;
  McmArgs mcm_args;
  add_distance(app, distance_args);
  add_average(app, average_args);
  add_extend(app, extend_args);
  add_cluster(app, cluster_args);
  add_filters(app, filters_args);
  add_eval(app, eval_args);
  add_mcm(app, mcm_args);
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const auto name = sub->get_name();
    if (name == "distance") return run_distance(distance_args, out);
    if (name == "average") return run_average(average_args, common, out);
    if (name == "extend") return run_extend(extend_args, common, out);
    if (name == "cluster") return run_cluster(cluster_args, common, out);
    if (name == "filters") return run_filters(filters_args, out);
    if (name == "eval-gen") return run_eval(eval_args, common, out, err);
    if (name == "mcm") return run_mcm(mcm_args, out);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  err << "error: unknown subcommand\n";
  return 1;
}

}  // namespace warpkit::cli
