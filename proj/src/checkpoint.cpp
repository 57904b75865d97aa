#include "cengcn/checkpoint.hpp"

#include <sstream>
#include <string>

#include "cengcn/error.hpp"
#include "text_util.hpp"

namespace cengcn {
namespace {

constexpr std::string_view kMagic = "cengcn-checkpoint";

std::string expect(std::istream& in, std::string_view keyword, const std::filesystem::path& path) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) break;
  }
  if (line.rfind(std::string(keyword) + " ", 0) != 0 && line != keyword) {
    throw DataError(path.string() + ": expected '" + std::string(keyword) + "' record");
  }
  return line.size() > keyword.size() ? line.substr(keyword.size() + 1) : std::string();
}

long long int_value(const std::string& text, const std::filesystem::path& path) {
  const auto v = detail::parse_int(text);
  if (!v) throw DataError(path.string() + ": bad integer '" + text + "'");
  return *v;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Model& model, const RunConfig& config) {
  auto out = detail::open_output(path);
  const ModelConfig& mc = model.config();
  out << kMagic << ' ' << kCheckpointVersion << '\n';
  out << "precision float64\n";
  out << "layers " << mc.layers() << '\n';
  out << "widths";
  for (Index w : mc.widths) out << ' ' << w;
  out << '\n';
  out << "attention " << (mc.attention ? 1 : 0) << '\n';
  out << "transform " << (mc.transform ? 1 : 0) << '\n';
  out << "output " << (mc.output == Activation::softmax ? "softmax" : "tanh") << '\n';
  out << "dropout_keep " << detail::format_double(mc.dropout_keep) << '\n';
  out << "seed " << mc.seed << '\n';
  const std::string text = config.to_text();
  std::size_t lines = 0;
  for (char ch : text) lines += ch == '\n' ? 1 : 0;
  out << "config " << lines << '\n' << text;
  for (int k = 0; k < mc.layers(); ++k) {
    const Matrix& w = model.weights()[k];
    out << "weight " << k << ' ' << w.rows() << ' ' << w.cols() << '\n';
    for (Index r = 0; r < w.rows(); ++r) {
      for (Index c = 0; c < w.cols(); ++c) out << (c ? " " : "") << detail::format_double(w(r, c));
      out << '\n';
    }
  }
  out << "end\n";
  detail::finish_output(out, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  const std::string version = expect(in, kMagic, path);
  if (int_value(version, path) != kCheckpointVersion) {
    throw DataError(path.string() + ": unsupported checkpoint version " + version);
  }
  if (expect(in, "precision", path) != "float64") throw DataError(path.string() + ": unsupported precision");
  const auto layers = int_value(expect(in, "layers", path), path);

  ModelConfig mc;
  std::istringstream widths(expect(in, "widths", path));
  for (std::string token; widths >> token;) mc.widths.push_back(int_value(token, path));
  if (static_cast<long long>(mc.widths.size()) != layers + 1) throw DataError(path.string() + ": width count mismatch");
  mc.attention = expect(in, "attention", path) == "1";
  mc.transform = expect(in, "transform", path) == "1";
  const std::string output = expect(in, "output", path);
  if (output != "softmax" && output != "tanh") throw DataError(path.string() + ": unknown output activation");
  mc.output = output == "softmax" ? Activation::softmax : Activation::tanh;
  const auto keep = detail::parse_double(expect(in, "dropout_keep", path));
  if (!keep) throw DataError(path.string() + ": bad dropout_keep");
  mc.dropout_keep = *keep;
  const std::string seed_text = expect(in, "seed", path);
  mc.seed = static_cast<Seed>(std::stoull(seed_text));

  const auto config_lines = int_value(expect(in, "config", path), path);
  std::string config_text;
  std::string line;
  for (long long i = 0; i < config_lines; ++i) {
    if (!std::getline(in, line)) throw DataError(path.string() + ": truncated config block");
    config_text += line + '\n';
  }

  std::vector<Matrix> weights;
  for (long long k = 0; k < layers; ++k) {
    std::istringstream header(expect(in, "weight", path));
    long long index = -1, rows = -1, cols = -1;
    header >> index >> rows >> cols;
    if (index != k || rows < 1 || cols < 1) throw DataError(path.string() + ": bad weight header");
    Matrix w(rows, cols);
    for (long long r = 0; r < rows; ++r) {
      if (!std::getline(in, line)) throw DataError(path.string() + ": truncated weight " + std::to_string(k));
      const auto tokens = detail::tokenize(line);
      if (static_cast<long long>(tokens.size()) != cols) throw DataError(path.string() + ": bad weight row");
      for (long long c = 0; c < cols; ++c) {
        const auto v = detail::parse_double(tokens[c]);
        if (!v) throw DataError(path.string() + ": bad weight value");
        w(r, c) = *v;
      }
    }
    weights.push_back(std::move(w));
  }
  expect(in, "end", path);
  return {Model(std::move(mc), std::move(weights)), RunConfig::parse(config_text)};
}

void save_history(const std::filesystem::path& path, const std::vector<HistoryRow>& history) {
  auto out = detail::open_output(path);
  out << "iteration,train_loss,val_metric\n";
  for (const HistoryRow& row : history) {
    out << row.iteration << ',' << detail::format_double(row.train_loss) << ',';
    if (std::isfinite(row.val_metric)) out << detail::format_double(row.val_metric);
    out << '\n';
  }
  detail::finish_output(out, path);
}

}  // namespace cengcn
