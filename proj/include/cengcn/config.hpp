#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cengcn/centrality.hpp"
#include "cengcn/gcn.hpp"
#include "cengcn/transform.hpp"

namespace cengcn {

enum class Task { classify, cluster, link };

/// Model variants: the full model and its ablations (transform only,
/// attention only, forced increase, forced decrease) plus the plain GCN
/// baseline (A + I, no attention).
enum class Variant { full, transform_only, attention_only, increase, decrease, gcn };

std::string_view to_string(Task task);
std::string_view to_string(Variant variant);
Task parse_task(std::string_view text);

/// Every run parameter. Zero-valued "auto" fields (hidden, output, lr,
/// iterations) are filled by resolved() from the task.
///
/// Text form: "[section]" headers and "key = value" lines; keys are
/// addressed as "section.key". '#' starts a comment.
struct RunConfig {
  // [data]
  std::string edges;
  std::string delimiter = "auto";
  std::string features;
  std::string labels;
  std::string generator = "none";  // none | scale_free | planted
  Index gen_n = 400;
  Index gen_m = 2;
  Index gen_communities = 2;
  double gen_mixing = 0.1;
  Seed gen_seed = 1;

  // [transform]
  CentralityMeasure centrality = CentralityMeasure::degree;
  double r = 0.02;  // hub fraction; 0.02 = top 2%
  double p = 1.0;
  double q = -1.0;
  int t = 5;
  Variant variant = Variant::full;
  Normalization normalization = Normalization::row;
  double eig_tol = 1e-10;
  int eig_max_iter = 10000;

  // [model]
  Task task = Task::classify;
  int layers = 2;
  Index hidden = 0;
  Index output = 0;
  double lr = 0.0;
  int iterations = 0;
  double dropout_keep = 0.5;
  double alpha = 5e-4;
  double rho = 100.0;
  double tolerance = 1e-6;
  Seed seed = 1;

  // [split]
  double train_frac = 0.1;
  double val_frac = 0.1;
  double hide_frac = 0.5;
  Seed split_seed = 1;

  // [eval]
  int kmeans_restarts = 10;
  double logreg_lr = 0.5;
  int logreg_iters = 500;

  // [output]
  std::string out_dir;

  /// Sets "section.key" from text. Variant suffixes (TD, AE, ...) also set
  /// the centrality measure. Throws ConfigError on unknown keys or bad values.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  static const std::vector<std::string>& keys();

  /// Range checks on every field; throws ConfigError.
  void validate() const;

  /// Copy with task-dependent defaults filled in.
  RunConfig resolved() const;

  /// Attention and transform switches implied by the variant.
  bool attention_enabled() const;
  bool transform_enabled() const;
  WeightBranch weight_branch() const;

  std::string to_text() const;
  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::filesystem::path& path);
};

}  // namespace cengcn
