#pragma once

#include <filesystem>
#include <vector>

#include "cengcn/config.hpp"
#include "cengcn/gcn.hpp"
#include "cengcn/train.hpp"

namespace cengcn {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  Model model;
  RunConfig config;
};

/// Text container: header, model flags, the run config, then every weight
/// matrix row-major with 17 significant digits (float64).
void save_checkpoint(const std::filesystem::path& path, const Model& model, const RunConfig& config);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// "iteration,train_loss,val_metric" with an empty metric when absent.
void save_history(const std::filesystem::path& path, const std::vector<HistoryRow>& history);

}  // namespace cengcn
