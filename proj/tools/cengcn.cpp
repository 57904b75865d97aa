// cengcn command-line front end.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cengcn/checkpoint.hpp"
#include "cengcn/error.hpp"
#include "cengcn/generate.hpp"
#include "cengcn/io.hpp"
#include "cengcn/log.hpp"
#include "cengcn/pipeline.hpp"
#include "cengcn/powerlaw.hpp"

namespace fs = std::filesystem;
using namespace cengcn;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitIo = 5;

// Shortest text that round-trips.
std::string format_value(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return kExitConfig;
    case ErrorKind::data: return kExitData;
    case ErrorKind::numeric: return kExitNumeric;
    case ErrorKind::io: return kExitIo;
  }
  return 1;
}

// Flags shared by every pipeline command. Values stay as text and go
// through RunConfig::set so the manifest echoes exactly what was given.
struct CommonFlags {
  std::string config_path;
  std::vector<std::string> overrides;
  std::map<std::string, std::string> values;  // config key -> text
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("-c,--config", flags.config_path, "Config file ([section] key = value)");
  cmd->add_option("--set", flags.overrides, "Override a config key: section.key=value")->take_all();
  const std::pair<const char*, const char*> mirrored[] = {
      {"--edges", "data.edges"},        {"--features", "data.features"},   {"--labels", "data.labels"},
      {"--delimiter", "data.delimiter"}, {"--generator", "data.generator"}, {"--centrality", "transform.centrality"},
      {"--r", "transform.r"},           {"--p", "transform.p"},           {"--q", "transform.q"},
      {"--t", "transform.t"},           {"--ablation", "transform.variant"}, {"--task", "model.task"},
      {"--layers", "model.layers"},     {"--hidden", "model.hidden"},     {"--output-dim", "model.output"},
      {"--lr", "model.lr"},             {"--iterations", "model.iterations"}, {"--seed", "model.seed"},
      {"--split-seed", "split.seed"},   {"--out", "output.dir"},
  };
  for (const auto& [flag, key] : mirrored) {
    cmd->add_option_function<std::string>(
        flag, [&flags, key = std::string(key)](const std::string& v) { flags.values[key] = v; },
        "Sets " + std::string(key));
  }
}

RunConfig assemble(const CommonFlags& flags) {
  RunConfig config = flags.config_path.empty() ? RunConfig{} : RunConfig::load(flags.config_path);
  for (const auto& [key, value] : flags.values) config.set(key, value);
  for (const std::string& item : flags.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + item + "'");
    config.set(item.substr(0, eq), item.substr(eq + 1));
  }
  if (config.out_dir.empty()) {
    const char* env = std::getenv("CENGCN_OUTPUT_DIR");
    config.out_dir = env != nullptr && *env != '\0' ? env : "cengcn_out";
  }
  return config;
}

fs::path out_dir(const RunConfig& config) {
  const fs::path dir = config.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

void write_manifest(const fs::path& dir, const std::string& command, const RunConfig& config,
                    const std::vector<std::string>& notes = {}) {
  std::ostringstream text;
  text << "# cengcn " << command << "\n";
  for (const std::string& note : notes) text << "# " << note << "\n";
  text << config.to_text();
  write_text(dir / "manifest.ini", text.str());
}

std::string identity_note(const Dataset& data) {
  return std::string("identity_features = ") + (data.identity_features ? "true" : "false");
}

int cmd_transform(const CommonFlags& flags) {
  const RunConfig config = assemble(flags).resolved();
  const Dataset data = load_dataset(config);
  const TransformStage stage = run_transform(data.graph, config);
  const fs::path dir = out_dir(config);
  save_transformed(stage.adjacency, data.graph, dir / "adjacency.tsv", dir / "diagonal.tsv");
  if (stage.profile) save_profile(*stage.profile, data.graph, dir / "centrality.tsv");
  if (stage.labels) save_label_matrix(*stage.labels, data.graph, dir / "label_matrix.tsv");
  if (stage.signs) save_signs(*stage.signs, data.graph, dir / "signs.tsv");
  write_manifest(dir, "transform", config, {identity_note(data)});
  std::cout << "vertices " << data.graph.num_vertices() << ", edges " << data.graph.num_edges();
  if (stage.profile) std::cout << ", hubs " << stage.profile->hubs.size();
  std::cout << "\nwrote " << dir.string() << "\n";
  return 0;
}

int cmd_train(const CommonFlags& flags) {
  const PreparedRun run = prepare_run(assemble(flags));
  const TrainResult result = train_run(run);
  const fs::path dir = out_dir(run.config);
  save_checkpoint(dir / "checkpoint.txt", result.model, run.config);
  save_history(dir / "history.csv", result.history);
  write_manifest(dir, "train", run.config, {identity_note(run.data)});
  std::cout << "iterations " << result.history.size() << ", best iteration " << result.best_iteration;
  if (std::isfinite(result.best_val_metric)) std::cout << ", validation accuracy " << result.best_val_metric;
  std::cout << "\nwrote " << dir.string() << "\n";
  return 0;
}

void write_report(const fs::path& dir, const EvalReport& report, const PreparedRun& run) {
  std::ostringstream csv;
  csv << "task,metric,value,seed\n"
      << to_string(report.task) << ',' << report.metric_name << ',' << format_value(report.metric_value) << ','
      << report.seed << '\n';
  write_text(dir / "report.csv", csv.str());

  std::ostringstream txt;
  txt << "task    " << to_string(report.task) << "\n"
      << "metric  " << report.metric_name << "\n"
      << "value   " << format_value(report.metric_value) << "\n"
      << "seed    " << report.seed << "\n\n"
      << report.config_text;
  write_text(dir / "report.txt", txt.str());

  export_embeddings(report.embeddings, run.data.graph.ids(), dir / "embeddings.tsv");
  if (!report.assignment.empty()) {
    std::ostringstream a;
    for (std::size_t i = 0; i < report.assignment.size(); ++i) {
      a << run.data.graph.ids()[i] << ' ' << report.assignment[i] << '\n';
    }
    write_text(dir / "assignments.tsv", a.str());
  }
}

int cmd_eval(const CommonFlags& flags, const std::string& checkpoint_path, const std::string& task_text) {
  const RunConfig requested = assemble(flags);
  const fs::path ckpt_path = checkpoint_path.empty() ? fs::path(requested.out_dir) / "checkpoint.txt"
                                                     : fs::path(checkpoint_path);
  Checkpoint ckpt = load_checkpoint(ckpt_path);
  RunConfig config = ckpt.config;
  config.out_dir = requested.out_dir;
  const Task task = task_text.empty() ? config.task : parse_task(task_text);
  if (task != config.task) {
    throw ConfigError("checkpoint was trained for '" + std::string(to_string(config.task)) + "', cannot run '" +
                      std::string(to_string(task)) + "'");
  }
  const PreparedRun run = prepare_run(config);
  const EvalReport report = evaluate_run(run, ckpt.model, task);
  const fs::path dir = out_dir(run.config);
  write_report(dir, report, run);
  write_manifest(dir, "eval", run.config, {identity_note(run.data), "checkpoint = " + ckpt_path.string()});
  std::cout << report.metric_name << ' ' << format_value(report.metric_value) << "\n";
  return 0;
}

int cmd_sweep(const CommonFlags& flags, const std::string& param, const std::vector<std::string>& values) {
  static const std::map<std::string, std::string> keys{
      {"r", "transform.r"}, {"p", "transform.p"}, {"q", "transform.q"}, {"layers", "model.layers"}};
  const auto it = keys.find(param);
  if (it == keys.end()) throw ConfigError("sweep parameter must be one of r, p, q, layers");
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  const RunConfig base = assemble(flags);

  std::vector<RunConfig> points;
  for (const std::string& v : values) {
    RunConfig c = base;
    c.set(it->second, v);
    try {
      points.push_back(c.resolved());
    } catch (const ConfigError& e) {
      throw ConfigError("sweep value " + param + " = " + v + " rejected: " + e.what());
    }
  }

  const fs::path dir = out_dir(base);
  std::ostringstream csv;
  csv << "param,value,metric,metric_value,seed\n";
  for (std::size_t k = 0; k < points.size(); ++k) {
    const PreparedRun run = prepare_run(points[k]);
    const EvalReport report = evaluate_run(run, train_run(run).model, run.config.task);
    csv << param << ',' << values[k] << ',' << report.metric_name << ',' << format_value(report.metric_value) << ','
        << report.seed << '\n';
    std::cout << param << " = " << values[k] << ": " << report.metric_name << ' '
              << format_value(report.metric_value) << std::endl;
  }
  write_text(dir / "sweep.csv", csv.str());
  write_manifest(dir, "sweep " + param, base.resolved());
  return 0;
}

int cmd_generate(const CommonFlags& flags) {
  RunConfig config = assemble(flags);
  if (config.generator == "none") config.generator = "planted";
  config = config.resolved();
  const Dataset data = load_dataset(config);
  const fs::path dir = out_dir(config);
  save_edge_list(data.graph, dir / "edges.txt");
  if (data.labels) save_labels(*data.labels, data.graph, dir / "labels.txt");
  write_manifest(dir, "generate", config);
  std::cout << "vertices " << data.graph.num_vertices() << ", edges " << data.graph.num_edges() << "\nwrote "
            << dir.string() << "\n";
  return 0;
}

int cmd_diagnose(const CommonFlags& flags, double d_min) {
  RunConfig config = assemble(flags);
  config = config.resolved();
  const Dataset data = load_dataset(config);
  const Graph& g = data.graph;
  std::map<double, Index> histogram;
  for (Index i = 0; i < g.num_vertices(); ++i) ++histogram[g.degree()[i]];

  std::cout << "vertices   " << g.num_vertices() << "\n"
            << "edges      " << g.num_edges() << "\n"
            << "components " << g.component_count() << "\n"
            << "max degree " << g.degree().maxCoeff() << "\n"
            << "degree distribution (degree count):\n";
  for (const auto& [degree, count] : histogram) std::cout << "  " << degree << ' ' << count << "\n";
  const Vector& d = g.degree();
  const std::span<const double> degrees(d.data(), static_cast<std::size_t>(d.size()));
  const double alpha = d_min > 0.0 ? estimate_power_law_alpha(degrees, d_min) : estimate_power_law_alpha(degrees);
  std::cout << "alpha_hat  " << format_value(alpha) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Centrality-aware graph convolution: transform, train, evaluate"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* transform = app.add_subcommand("transform", "Centrality, label propagation and reweighted adjacency");
  auto* train = app.add_subcommand("train", "Transform (if needed) and train a model");
  auto* eval = app.add_subcommand("eval", "Evaluate a trained checkpoint");
  auto* sweep = app.add_subcommand("sweep", "Train and evaluate once per parameter value");
  auto* generate = app.add_subcommand("generate", "Write a synthetic scale-free graph");
  auto* diagnose = app.add_subcommand("diagnose", "Degree distribution and power-law exponent");
  for (auto* cmd : {transform, train, eval, sweep, generate, diagnose}) add_common(cmd, flags);

  std::string checkpoint;
  std::string eval_task;
  eval->add_option("--checkpoint", checkpoint, "Checkpoint file (default: <out>/checkpoint.txt)");
  eval->add_option("--eval-task", eval_task, "Task to run; must match the checkpoint");

  std::string param;
  std::vector<std::string> values;
  sweep->add_option("--param", param, "r | p | q | layers")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');

  double d_min = 0.0;
  diagnose->add_option("--d-min", d_min, "Lower cutoff for the power-law fit (default: smallest degree >= 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*transform) return cmd_transform(flags);
    if (*train) return cmd_train(flags);
    if (*eval) return cmd_eval(flags, checkpoint, eval_task);
    if (*sweep) return cmd_sweep(flags, param, values);
    if (*generate) return cmd_generate(flags);
    if (*diagnose) return cmd_diagnose(flags, d_min);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
