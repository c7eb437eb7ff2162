// Command-line frontend: generate, fit, bapc, sbapc, window-scan, ig, lime,
// airpassengers-demo. Exit codes: 0 ok, 2 config error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bapc/artifacts.hpp"
#include "bapc/attribution.hpp"
#include "bapc/dataset.hpp"
#include "bapc/engine.hpp"
#include "bapc/errors.hpp"
#include "bapc/lime.hpp"
#include "bapc/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigBinder {
  std::vector<std::pair<CLI::Option*, std::function<void(const json&)>>> entries;

  template <typename T>
  void bind(CLI::Option* opt, const std::string& key, T& var) {
    entries.emplace_back(opt, [key, &var](const json& cfg) {
      if (cfg.contains(key)) var = cfg.at(key).get<T>();
    });
  }

  void apply(const json& cfg) {
    for (auto& [opt, fn] : entries) {
      if (opt->count() == 0) fn(cfg);
    }
  }
};

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string config_path;
};

struct DataOptions {
  std::string dataset;  // step | ramp | sinacp | sinfcp | airpassengers
  std::string data_path;
  int length = 0;        // --m: series length for synthetic sweeps
  int change_index = 0;  // 0 = derive from the kind defaults / length
  double u0 = std::numeric_limits<double>::quiet_NaN();
  double v0 = std::numeric_limits<double>::quiet_NaN();
  double force = std::numeric_limits<double>::quiet_NaN();
  double t_star = std::numeric_limits<double>::quiet_NaN();
  double omega = std::numeric_limits<double>::quiet_NaN();
  double nu = std::numeric_limits<double>::quiet_NaN();
  bool raw_grid = false;
};

struct ModelOptions {
  std::string base = "constant";
  double period = 12.0;
  std::vector<std::string> fixed;  // name=value
  std::string correction = "nn1";
  int order = 12;
  int hidden = 16;
  int epochs = 500;
  double learning_rate = 0.01;
};

void add_data_options(CLI::App* cmd, DataOptions* opts, ConfigBinder* binder,
                      bool with_length) {
  binder->bind(cmd->add_option("--dataset", opts->dataset,
                               "Synthetic kind (step|ramp|sinacp|sinfcp) or 'airpassengers'"),
               "dataset", opts->dataset);
  binder->bind(cmd->add_option("--data", opts->data_path, "CSV input path"), "data",
               opts->data_path);
  if (with_length) {
    binder->bind(cmd->add_option("--m", opts->length, "Synthetic series length"), "m",
                 opts->length);
  }
  binder->bind(cmd->add_option("--change-index", opts->change_index,
                               "First affected sample of the synthetic change"),
               "change-index", opts->change_index);
  binder->bind(cmd->add_option("--u0", opts->u0, "Initial level"), "u0", opts->u0);
  binder->bind(cmd->add_option("--v0", opts->v0, "Initial velocity (ramp)"), "v0", opts->v0);
  binder->bind(cmd->add_option("--force", opts->force, "Impulse size F"), "force", opts->force);
  binder->bind(cmd->add_option("--t-star", opts->t_star, "Impulse time of the raw grid"),
               "t-star", opts->t_star);
  binder->bind(cmd->add_option("--omega", opts->omega, "Angular frequency"), "omega",
               opts->omega);
  binder->bind(cmd->add_option("--nu", opts->nu, "Post-change angular frequency (sinfcp)"),
               "nu", opts->nu);
  binder->bind(cmd->add_flag("--raw-grid", opts->raw_grid,
                             "Sample y_t = u(t-1) with the literal t_star"),
               "raw-grid", opts->raw_grid);
}

void add_model_options(CLI::App* cmd, ModelOptions* opts, ConfigBinder* binder) {
  binder->bind(cmd->add_option("--base", opts->base,
                               "Base family: constant|linear|polyseasonal|sinusoid|ar2|ar2-robust"),
               "base", opts->base);
  binder->bind(cmd->add_option("--period", opts->period, "Seasonal period (polyseasonal)"),
               "period", opts->period);
  binder->bind(cmd->add_option("--fix", opts->fixed,
                               "Pin a sinusoid parameter, e.g. --fix beta=0"),
               "fix", opts->fixed);
  binder->bind(cmd->add_option("--correction", opts->correction, "Correction model: nn1|arnet"),
               "correction", opts->correction);
  binder->bind(cmd->add_option("--p", opts->order, "Autoregressive order of the correction"),
               "p", opts->order);
  binder->bind(cmd->add_option("--hidden", opts->hidden, "Hidden units of the correction net"),
               "hidden", opts->hidden);
  binder->bind(cmd->add_option("--epochs", opts->epochs, "Training epochs of the correction net"),
               "epochs", opts->epochs);
  binder->bind(cmd->add_option("--lr", opts->learning_rate, "Learning rate of the correction net"),
               "lr", opts->learning_rate);
}

bapc::SyntheticSpec resolve_spec(const DataOptions& opts, const std::string& kind_name,
                                 int length_override) {
  using bapc::SyntheticKind;
  const SyntheticKind kind = bapc::synthetic_kind_from_string(kind_name);
  bapc::SyntheticSpec spec = bapc::SyntheticSpec::defaults(kind);
  if (length_override > 0 && length_override != spec.n) {
    spec.n = length_override;
    if ((kind == SyntheticKind::Step || kind == SyntheticKind::Ramp) &&
        opts.change_index == 0) {
      spec.change_index = length_override / 2 + 1;
      spec.t_star = length_override / 2 + 0.5;
    }
  }
  if (opts.change_index > 0) spec.change_index = opts.change_index;
  if (!std::isnan(opts.u0)) spec.u0 = opts.u0;
  if (!std::isnan(opts.v0)) spec.v0 = opts.v0;
  if (!std::isnan(opts.force)) spec.force = opts.force;
  if (!std::isnan(opts.t_star)) spec.t_star = opts.t_star;
  if (!std::isnan(opts.omega)) spec.omega = opts.omega;
  if (!std::isnan(opts.nu)) spec.nu = opts.nu;
  spec.raw_grid = opts.raw_grid;
  return spec;
}

struct ResolvedData {
  bapc::TimeSeries series = bapc::TimeSeries({0.0});
  std::string description;
  std::optional<bapc::SyntheticSpec> spec;
};

ResolvedData load_dataset(const DataOptions& opts, const GlobalOptions& globals,
                          int length_override) {
  ResolvedData out;
  if (!opts.dataset.empty() && opts.dataset != "airpassengers") {
    const bapc::SyntheticSpec spec = resolve_spec(opts, opts.dataset, length_override);
    out.series = bapc::generate(spec);
    out.description = "synthetic:" + opts.dataset;
    out.spec = spec;
    return out;
  }
  if (opts.dataset == "airpassengers") {
    out.series = opts.data_path.empty() ? bapc::air_passengers()
                                        : bapc::load_air_passengers(opts.data_path);
    out.description = opts.data_path.empty() ? "airpassengers:builtin"
                                             : "airpassengers:" + opts.data_path;
    return out;
  }
  std::string path = opts.data_path;
  if (path.empty()) {
    const fs::path fallback = fs::path(globals.out_dir) / "data.csv";
    if (fs::exists(fallback)) {
      path = fallback.string();
    } else {
      throw bapc::ConfigError("no input: pass --dataset or --data (no " +
                              fallback.string() + " found)");
    }
  }
  out.series = bapc::read_series_csv(path);
  out.description = "csv:" + path;
  return out;
}

bapc::Family parse_family(const std::string& name) { return bapc::family_from_string(name); }

bapc::FitConfig build_fit_config(const ModelOptions& opts, const GlobalOptions& globals) {
  bapc::FitConfig config;
  config.seed = globals.seed;
  config.period = opts.period;
  config.robust = opts.base == "ar2-robust";
  for (const std::string& entry : opts.fixed) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) {
      throw bapc::ConfigError("--fix expects name=value, got '" + entry + "'");
    }
    const std::string name = entry.substr(0, eq);
    try {
      config.fixed_params[name] = std::stod(entry.substr(eq + 1));
    } catch (const std::exception&) {
      throw bapc::ConfigError("--fix " + entry + ": value is not a number");
    }
  }
  return config;
}

bapc::CorrectionKind parse_correction(const std::string& name) {
  if (name == "nn1") return bapc::CorrectionKind::NearestNeighbor1;
  if (name == "arnet") return bapc::CorrectionKind::AutoregressiveNet;
  throw bapc::ConfigError("unknown correction kind '" + name + "'");
}

bapc::CorrectionOptions build_correction_options(const ModelOptions& opts,
                                                 const GlobalOptions& globals) {
  bapc::CorrectionOptions out;
  out.order = opts.order;
  out.hidden = opts.hidden;
  out.epochs = opts.epochs;
  out.learning_rate = opts.learning_rate;
  out.seed = globals.seed;
  return out;
}

void describe_data(bapc::JsonObject* manifest, const ResolvedData& data) {
  manifest->put("input", data.description);
  manifest->put("length", static_cast<int>(data.series.size()));
  if (data.spec) {
    bapc::JsonObject spec;
    spec.put("kind", bapc::synthetic_kind_name(data.spec->kind))
        .put("u0", data.spec->u0)
        .put("v0", data.spec->v0)
        .put("force", data.spec->force)
        .put("t_star", data.spec->t_star)
        .put("omega", data.spec->omega)
        .put("nu", data.spec->nu)
        .put("n", data.spec->n)
        .put("change_index", data.spec->change_index)
        .put("raw_grid", data.spec->raw_grid);
    std::string raw = spec.str();
    raw.pop_back();
    manifest->put_raw("synthetic_spec", raw);
  }
}

void describe_model(bapc::JsonObject* manifest, const ModelOptions& model,
                    const bapc::FitConfig& fit_config, bapc::CorrectionKind correction,
                    const bapc::CorrectionOptions& correction_options) {
  manifest->put("base", model.base);
  manifest->put("period", model.period);
  if (!fit_config.fixed_params.empty()) {
    bapc::JsonObject fixed;
    for (const auto& [name, value] : fit_config.fixed_params) fixed.put(name, value);
    std::string raw = fixed.str();
    raw.pop_back();
    manifest->put_raw("fixed_params", raw);
  }
  manifest->put_raw("correction",
                    bapc::correction_metadata_json(correction, correction_options));
  manifest->put("max_iterations", fit_config.max_iterations);
  manifest->put("convergence_tolerance", fit_config.convergence_tolerance);
  manifest->put("robust_k", fit_config.robust_k);
}

void write_manifest(const GlobalOptions& globals, const bapc::JsonObject& manifest) {
  bapc::write_text_atomic(fs::path(globals.out_dir) / "manifest.json", manifest.str());
}

void write_heatmap_artifacts(const GlobalOptions& globals, const bapc::SbapcResult& sweep) {
  const fs::path dir(globals.out_dir);
  bapc::write_text_atomic(dir / "surrogate_matrix.csv", bapc::surrogate_matrix_csv(sweep));
  const bapc::IgHeatmaps maps = bapc::ig_heatmaps(sweep);
  for (std::size_t k = 0; k < maps.names.size(); ++k) {
    bapc::write_text_atomic(dir / ("ig_" + maps.names[k] + ".csv"),
                            bapc::heatmap_csv(maps, k));
  }
  bapc::write_text_atomic(dir / "completeness.csv", bapc::completeness_csv(maps));
  if (!maps.cell_failures.empty()) {
    std::string lines;
    for (const auto& failure : maps.cell_failures) lines += failure + "\n";
    bapc::write_text_atomic(dir / "attribution_failures.txt", lines);
  }
}

std::string anchors_json(const bapc::SbapcResult& sweep, std::uint64_t seed) {
  std::string out = "[";
  bool first = true;
  for (std::size_t i = 0; i < sweep.anchors.size(); ++i) {
    if (!sweep.per_anchor[i]) continue;
    const auto& result = *sweep.per_anchor[i];
    bapc::JsonObject entry;
    entry.put("s", sweep.anchors[i]);
    const auto& names = bapc::param_names(result.base_family);
    entry.put_named_numbers("theta0", names, result.theta0.params);
    entry.put_named_numbers("theta_r", names, result.theta_r.params);
    entry.put_named_numbers("delta_theta", names, result.delta_theta);
    std::string raw = entry.str();
    raw.pop_back();
    if (!first) out += ",\n ";
    out += raw;
    first = false;
  }
  out += "]";
  bapc::JsonObject doc;
  doc.put_raw("anchors", out);
  doc.put("seed", seed);
  if (!sweep.failures.empty()) {
    std::string failures = "[";
    for (std::size_t i = 0; i < sweep.failures.size(); ++i) {
      bapc::JsonObject failure;
      failure.put("s", sweep.failures[i].s);
      failure.put("message", sweep.failures[i].message);
      std::string raw = failure.str();
      raw.pop_back();
      failures += raw;
      if (i + 1 < sweep.failures.size()) failures += ", ";
    }
    failures += "]";
    doc.put_raw("failures", failures);
  }
  return doc.str();
}

// ---------------------------------------------------------------------------
// subcommand runners
// ---------------------------------------------------------------------------

int run_generate(const GlobalOptions& globals, const DataOptions& data, int n_flag,
                 const std::string& out_name) {
  if (data.dataset.empty() || data.dataset == "airpassengers") {
    throw bapc::ConfigError("generate needs --kind step|ramp|sinacp|sinfcp");
  }
  const bapc::SyntheticSpec spec = resolve_spec(data, data.dataset, n_flag);
  const bapc::TimeSeries series = bapc::generate(spec);
  const fs::path out_path = fs::path(globals.out_dir) / out_name;
  bapc::write_text_atomic(out_path, bapc::series_csv(series));

  bapc::JsonObject manifest;
  manifest.put("command", "generate");
  ResolvedData resolved;
  resolved.series = series;
  resolved.description = "synthetic:" + data.dataset;
  resolved.spec = spec;
  describe_data(&manifest, resolved);
  manifest.put("seed", globals.seed);
  manifest.put("out", out_path.string());
  write_manifest(globals, manifest);
  std::cout << "wrote " << out_path.string() << " (" << series.size() << " samples)\n";
  return 0;
}

int run_fit(const GlobalOptions& globals, const DataOptions& data, const ModelOptions& model,
            int n_flag) {
  const ResolvedData resolved = load_dataset(data, globals, n_flag);
  const bapc::Family family = parse_family(model.base);
  const bapc::FitConfig fit_config = build_fit_config(model, globals);

  bapc::JsonObject manifest;
  manifest.put("command", "fit");
  describe_data(&manifest, resolved);
  manifest.put("base", model.base);
  manifest.put("seed", globals.seed);
  write_manifest(globals, manifest);

  std::string removed;
  bapc::BaseModel fitted;
  if (family == bapc::Family::AR2 && fit_config.robust) {
    const bapc::RobustAr2Fit robust = bapc::fit_ar2_robust(resolved.series, fit_config);
    fitted = robust.model;
    for (int index : robust.removed_indices) {
      removed += (removed.empty() ? "" : ", ") + std::to_string(index);
    }
  } else {
    fitted = bapc::fit(family, resolved.series, fit_config);
  }
  std::string payload = bapc::to_json(fitted);
  if (!removed.empty()) {
    payload.pop_back();  // strip '}'
    payload += ", \"removed_indices\": [" + removed + "]}";
  }
  payload += "\n";
  bapc::write_text_atomic(fs::path(globals.out_dir) / "model.json", payload);
  std::cout << payload;
  return 0;
}

int run_bapc(const GlobalOptions& globals, const DataOptions& data, const ModelOptions& model,
             int n_flag, int r_flag) {
  ResolvedData resolved = load_dataset(data, globals, n_flag);
  const int n = n_flag > 0 ? n_flag : static_cast<int>(resolved.series.size());

  bapc::BapcConfig config;
  config.base_family = parse_family(model.base);
  config.correction = parse_correction(model.correction);
  config.window = bapc::WindowConfig{n, r_flag};
  config.fit = build_fit_config(model, globals);
  config.correction_options = build_correction_options(model, globals);

  bapc::JsonObject manifest;
  manifest.put("command", "bapc");
  describe_data(&manifest, resolved);
  describe_model(&manifest, model, config.fit, config.correction, config.correction_options);
  manifest.put("n", n);
  manifest.put("r", r_flag);
  manifest.put("seed", globals.seed);
  write_manifest(globals, manifest);

  const bapc::BapcResult result = bapc::bapc(resolved.series, config);
  const fs::path dir(globals.out_dir);
  bapc::write_text_atomic(dir / "bapc_result.json",
                          bapc::bapc_result_json(result, globals.seed,
                                                 config.correction_options, config.correction));
  bapc::write_text_atomic(dir / "modified.csv", bapc::series_csv(result.modified_series));
  const auto& names = bapc::param_names(result.base_family);
  std::cout << "delta_theta:";
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::cout << " " << names[k] << "=" << bapc::format_double(result.delta_theta[k]);
  }
  std::cout << "\n";
  return 0;
}

int run_sbapc(const GlobalOptions& globals, const DataOptions& data, const ModelOptions& model,
              int n_flag, int r_flag, bool with_heatmaps) {
  if (n_flag < 1) {
    throw bapc::ConfigError("sbapc requires a positive --n training window size");
  }
  ResolvedData resolved = load_dataset(data, globals, data.length);
  bapc::BapcConfig config;
  config.base_family = parse_family(model.base);
  config.correction = parse_correction(model.correction);
  config.window = bapc::WindowConfig{n_flag, r_flag};
  config.fit = build_fit_config(model, globals);
  config.correction_options = build_correction_options(model, globals);

  bapc::JsonObject manifest;
  manifest.put("command", with_heatmaps ? "ig-heatmap" : "sbapc");
  describe_data(&manifest, resolved);
  describe_model(&manifest, model, config.fit, config.correction, config.correction_options);
  manifest.put("n", n_flag);
  manifest.put("r", r_flag);
  manifest.put("seed", globals.seed);
  write_manifest(globals, manifest);

  const bapc::SbapcResult sweep = bapc::sbapc(resolved.series, config);
  const fs::path dir(globals.out_dir);
  bapc::write_text_atomic(dir / "surrogate_matrix.csv", bapc::surrogate_matrix_csv(sweep));
  bapc::write_text_atomic(dir / "anchors.json", anchors_json(sweep, globals.seed));
  if (with_heatmaps) {
    write_heatmap_artifacts(globals, sweep);
  }
  std::cout << "anchors: " << sweep.anchors.size() << ", failures: " << sweep.failures.size()
            << "\n";
  return 0;
}

int run_window_scan(const GlobalOptions& globals, const DataOptions& data,
                    const ModelOptions& model, int n_flag, int t_eval) {
  if (t_eval == 0) {
    throw bapc::ConfigError("window-scan requires --t-eval");
  }
  ResolvedData resolved = load_dataset(data, globals, n_flag);
  const bapc::FitConfig fit_config = build_fit_config(model, globals);
  const bapc::CorrectionOptions correction_options = build_correction_options(model, globals);

  bapc::JsonObject manifest;
  manifest.put("command", "window-scan");
  describe_data(&manifest, resolved);
  describe_model(&manifest, model, fit_config, parse_correction(model.correction),
                 correction_options);
  manifest.put("t_eval", t_eval);
  manifest.put("seed", globals.seed);

  const bapc::WindowScanResult scan =
      bapc::window_scan(resolved.series, parse_family(model.base),
                        parse_correction(model.correction), t_eval, fit_config,
                        correction_options);
  manifest.put("argmax_r", scan.argmax_r);
  write_manifest(globals, manifest);
  bapc::write_text_atomic(fs::path(globals.out_dir) / "window_scan.csv",
                          bapc::window_scan_csv(scan));
  std::cout << "argmax |delta_f(" << t_eval << ")| at r = " << scan.argmax_r << "\n";
  return 0;
}

int run_ig(const GlobalOptions& globals, const DataOptions& data, const ModelOptions& model,
           int n_flag, int r_flag, int t_flag, bool heatmap) {
  if (heatmap) {
    return run_sbapc(globals, data, model, n_flag, r_flag, true);
  }
  if (t_flag == 0) {
    throw bapc::ConfigError("ig requires --t (or --heatmap)");
  }
  ResolvedData resolved = load_dataset(data, globals, n_flag);
  const int n = n_flag > 0 ? n_flag : static_cast<int>(resolved.series.size());
  bapc::BapcConfig config;
  config.base_family = parse_family(model.base);
  config.correction = parse_correction(model.correction);
  config.window = bapc::WindowConfig{n, r_flag};
  config.fit = build_fit_config(model, globals);
  config.correction_options = build_correction_options(model, globals);

  bapc::JsonObject manifest;
  manifest.put("command", "ig");
  describe_data(&manifest, resolved);
  describe_model(&manifest, model, config.fit, config.correction, config.correction_options);
  manifest.put("n", n);
  manifest.put("r", r_flag);
  manifest.put("t", t_flag);
  manifest.put("seed", globals.seed);
  write_manifest(globals, manifest);

  const bapc::BapcResult result = bapc::bapc(resolved.series, config);
  const bapc::Attribution attribution = bapc::attribute(result, t_flag);
  bapc::JsonObject out;
  out.put("t", t_flag);
  out.put_named_numbers("ig", attribution.names, attribution.values);
  out.put("delta_f", attribution.delta_f);
  out.put("completeness_residual", attribution.completeness_residual);
  bapc::write_text_atomic(fs::path(globals.out_dir) / "ig.json", out.str());
  std::cout << out.str();
  return 0;
}

int run_lime(const GlobalOptions& globals, const DataOptions& data, const ModelOptions& model,
             int n_flag, int t_flag, int segment_size, int num_samples, double ridge_lambda) {
  if (t_flag == 0) {
    throw bapc::ConfigError("lime requires --t");
  }
  ResolvedData resolved = load_dataset(data, globals, n_flag);
  const bapc::Family family = parse_family(model.base);
  const bapc::FitConfig fit_config = build_fit_config(model, globals);
  const bapc::CorrectionOptions correction_options = build_correction_options(model, globals);

  bapc::JsonObject manifest;
  manifest.put("command", "lime");
  describe_data(&manifest, resolved);
  describe_model(&manifest, model, fit_config, bapc::CorrectionKind::AutoregressiveNet,
                 correction_options);
  manifest.put("t", t_flag);
  manifest.put("segment_size", segment_size);
  manifest.put("k", num_samples);
  manifest.put("ridge_lambda", ridge_lambda);
  manifest.put("seed", globals.seed);
  write_manifest(globals, manifest);

  // Step-1/Step-2 pipeline to obtain residuals and a fitted black box
  const bapc::BaseModel theta0 = family == bapc::Family::AR2
                                     ? bapc::fit_ar2_robust(resolved.series, fit_config).model
                                     : bapc::fit(family, resolved.series, fit_config);
  std::vector<double> residual_values;
  residual_values.reserve(resolved.series.size());
  for (int t = resolved.series.start_index(); t <= resolved.series.last_index(); ++t) {
    residual_values.push_back(resolved.series.at(t) -
                              bapc::eval_on_window(theta0, t, resolved.series.start_index()));
  }
  const bapc::TimeSeries residuals(residual_values, resolved.series.start_index());
  const bapc::CorrectionModel net = bapc::fit_correction(
      bapc::CorrectionKind::AutoregressiveNet, residuals, correction_options);

  bapc::LimeOptions lime_options;
  lime_options.segment_size = segment_size;
  lime_options.num_samples = num_samples;
  lime_options.ridge_lambda = ridge_lambda;
  lime_options.seed = globals.seed;
  const bapc::LimeExplanation explanation =
      bapc::lime_explain(net, residuals, t_flag, correction_options.order, lime_options);
  bapc::write_text_atomic(fs::path(globals.out_dir) / "lime.csv", bapc::lime_csv(explanation));
  std::cout << "wrote lime.csv (placeholder " << bapc::format_double(explanation.placeholder)
            << ")\n";
  return 0;
}

int run_air_demo(const GlobalOptions& globals, const std::string& data_path,
                 const ModelOptions& net) {
  DataOptions data;
  data.dataset = "airpassengers";
  data.data_path = data_path;
  ModelOptions model = net;
  model.base = "polyseasonal";
  model.correction = "arnet";
  return run_sbapc(globals, data, model, 48, 12, true);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explainable time-series correction via base-model parameter comparison"};
  app.require_subcommand(1);

  GlobalOptions globals;
  ConfigBinder binder;
  binder.bind(app.add_option("--seed", globals.seed, "Base RNG seed"), "seed",
              globals.seed);
  binder.bind(app.add_option("--out-dir", globals.out_dir, "Artifact output directory"),
              "out-dir", globals.out_dir);
  app.add_option("--config", globals.config_path, "JSON file with defaults for any option");

  // generate
  auto* cmd_generate = app.add_subcommand("generate", "Write a synthetic dataset CSV");
  DataOptions generate_data;
  int generate_n = 0;
  std::string generate_out = "data.csv";
  binder.bind(cmd_generate->add_option("--kind", generate_data.dataset,
                                       "step|ramp|sinacp|sinfcp"),
              "kind", generate_data.dataset);
  binder.bind(cmd_generate->add_option("--n", generate_n, "Series length"), "n", generate_n);
  binder.bind(cmd_generate->add_option("--out", generate_out, "Output CSV name"), "out",
              generate_out);
  {
    DataOptions* d = &generate_data;
    binder.bind(cmd_generate->add_option("--change-index", d->change_index,
                                         "First affected sample"),
                "change-index", d->change_index);
    binder.bind(cmd_generate->add_option("--u0", d->u0, "Initial level"), "u0", d->u0);
    binder.bind(cmd_generate->add_option("--v0", d->v0, "Initial velocity"), "v0", d->v0);
    binder.bind(cmd_generate->add_option("--force", d->force, "Impulse size F"), "force",
                d->force);
    binder.bind(cmd_generate->add_option("--t-star", d->t_star, "Raw-grid impulse time"),
                "t-star", d->t_star);
    binder.bind(cmd_generate->add_option("--omega", d->omega, "Angular frequency"), "omega",
                d->omega);
    binder.bind(cmd_generate->add_option("--nu", d->nu, "Post-change frequency"), "nu", d->nu);
    binder.bind(cmd_generate->add_flag("--raw-grid", d->raw_grid, "Literal u(t-1) sampling"),
                "raw-grid", d->raw_grid);
  }

  // fit
  auto* cmd_fit = app.add_subcommand("fit", "Fit a base model and write model.json");
  DataOptions fit_data;
  ModelOptions fit_model;
  int fit_n = 0;
  add_data_options(cmd_fit, &fit_data, &binder, false);
  add_model_options(cmd_fit, &fit_model, &binder);
  binder.bind(cmd_fit->add_option("--n", fit_n, "Synthetic length override"), "n", fit_n);

  // bapc
  auto* cmd_bapc = app.add_subcommand("bapc", "Run the three steps on one window");
  DataOptions bapc_data;
  ModelOptions bapc_model;
  int bapc_n = 0, bapc_r = 0;
  add_data_options(cmd_bapc, &bapc_data, &binder, false);
  add_model_options(cmd_bapc, &bapc_model, &binder);
  binder.bind(cmd_bapc->add_option("--n", bapc_n, "Training window size"), "n", bapc_n);
  binder.bind(cmd_bapc->add_option("--r", bapc_r, "Correction window size"), "r", bapc_r);

  // sbapc
  auto* cmd_sbapc = app.add_subcommand("sbapc", "Sliding-window sweep");
  DataOptions sbapc_data;
  ModelOptions sbapc_model;
  int sbapc_n = 0, sbapc_r = 0;
  add_data_options(cmd_sbapc, &sbapc_data, &binder, true);
  add_model_options(cmd_sbapc, &sbapc_model, &binder);
  binder.bind(cmd_sbapc->add_option("--n", sbapc_n, "Training window size"), "n",
              sbapc_n);
  binder.bind(cmd_sbapc->add_option("--r", sbapc_r, "Correction window size"), "r", sbapc_r);

  // window-scan
  auto* cmd_scan = app.add_subcommand("window-scan", "Surrogate correction for r = 0..n");
  DataOptions scan_data;
  ModelOptions scan_model;
  int scan_n = 0, scan_t = 0;
  add_data_options(cmd_scan, &scan_data, &binder, false);
  add_model_options(cmd_scan, &scan_model, &binder);
  binder.bind(cmd_scan->add_option("--n", scan_n, "Synthetic length override"), "n", scan_n);
  binder.bind(cmd_scan->add_option("--t-eval", scan_t, "Evaluation index"), "t-eval",
              scan_t);

  // ig
  auto* cmd_ig = app.add_subcommand("ig", "Integrated-gradient attribution");
  DataOptions ig_data;
  ModelOptions ig_model;
  int ig_n = 0, ig_r = 0, ig_t = 0;
  bool ig_heatmap = false;
  add_data_options(cmd_ig, &ig_data, &binder, true);
  add_model_options(cmd_ig, &ig_model, &binder);
  binder.bind(cmd_ig->add_option("--n", ig_n, "Training window size"), "n", ig_n);
  binder.bind(cmd_ig->add_option("--r", ig_r, "Correction window size"), "r", ig_r);
  binder.bind(cmd_ig->add_option("--t", ig_t, "Attribution time (single-point mode)"), "t",
              ig_t);
  binder.bind(cmd_ig->add_flag("--heatmap", ig_heatmap, "Full (s,t) heatmap export"),
              "heatmap", ig_heatmap);

  // lime
  auto* cmd_lime = app.add_subcommand("lime", "Segment-perturbation LIME baseline");
  DataOptions lime_data;
  ModelOptions lime_model;
  int lime_n = 0, lime_t = 0, lime_segment = 3, lime_k = 1000;
  double lime_lambda = 1e-3;
  add_data_options(cmd_lime, &lime_data, &binder, false);
  add_model_options(cmd_lime, &lime_model, &binder);
  binder.bind(cmd_lime->add_option("--n", lime_n, "Synthetic length override"), "n", lime_n);
  binder.bind(cmd_lime->add_option("--t", lime_t, "Explained prediction index"), "t",
              lime_t);
  binder.bind(cmd_lime->add_option("--segment-size", lime_segment, "Lags per mask segment"),
              "segment-size", lime_segment);
  binder.bind(cmd_lime->add_option("--k", lime_k, "Perturbation samples"), "k", lime_k);
  binder.bind(cmd_lime->add_option("--lambda", lime_lambda, "Ridge regularization"),
              "lambda", lime_lambda);

  // airpassengers-demo
  auto* cmd_air = app.add_subcommand("airpassengers-demo",
                                     "Full sweep + attribution heatmaps on the monthly data");
  std::string air_data_path;
  ModelOptions air_model;
  binder.bind(cmd_air->add_option("--data", air_data_path, "Optional CSV path"), "data",
              air_data_path);
  binder.bind(cmd_air->add_option("--p", air_model.order, "Correction autoregressive order"),
              "p", air_model.order);
  binder.bind(cmd_air->add_option("--hidden", air_model.hidden, "Correction hidden units"),
              "hidden", air_model.hidden);
  binder.bind(cmd_air->add_option("--epochs", air_model.epochs, "Correction training epochs"),
              "epochs", air_model.epochs);
  binder.bind(cmd_air->add_option("--lr", air_model.learning_rate, "Correction learning rate"),
              "lr", air_model.learning_rate);

  for (CLI::App* sub :
       {cmd_generate, cmd_fit, cmd_bapc, cmd_sbapc, cmd_scan, cmd_ig, cmd_lime, cmd_air}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!globals.config_path.empty()) {
      std::ifstream in(globals.config_path);
      if (!in) {
        throw bapc::ConfigError("cannot open --config file: " + globals.config_path);
      }
      json cfg = json::parse(in, nullptr, true, true);
      if (!cfg.is_object()) {
        throw bapc::ConfigError("--config must contain a JSON object");
      }
      binder.apply(cfg);
    }

    if (cmd_generate->parsed()) {
      return run_generate(globals, generate_data, generate_n, generate_out);
    }
    if (cmd_fit->parsed()) {
      return run_fit(globals, fit_data, fit_model, fit_n);
    }
    if (cmd_bapc->parsed()) {
      return run_bapc(globals, bapc_data, bapc_model, bapc_n, bapc_r);
    }
    if (cmd_sbapc->parsed()) {
      return run_sbapc(globals, sbapc_data, sbapc_model, sbapc_n, sbapc_r, false);
    }
    if (cmd_scan->parsed()) {
      return run_window_scan(globals, scan_data, scan_model, scan_n, scan_t);
    }
    if (cmd_ig->parsed()) {
      return run_ig(globals, ig_data, ig_model, ig_n, ig_r, ig_t, ig_heatmap);
    }
    if (cmd_lime->parsed()) {
      return run_lime(globals, lime_data, lime_model, lime_n, lime_t, lime_segment, lime_k,
                      lime_lambda);
    }
    if (cmd_air->parsed()) {
      return run_air_demo(globals, air_data_path, air_model);
    }
    throw bapc::ConfigError("no subcommand selected");
  } catch (const bapc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const bapc::FitError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const bapc::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
