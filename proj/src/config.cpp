#include "cengcn/config.hpp"

#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "cengcn/error.hpp"
#include "text_util.hpp"

namespace cengcn {
namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
}

double to_double(std::string_view key, std::string_view value) {
  const auto v = detail::parse_double(value);
  if (!v || !std::isfinite(*v)) bad_value(key, value);
  return *v;
}

long long to_int(std::string_view key, std::string_view value) {
  const auto v = detail::parse_int(value);
  if (!v) bad_value(key, value);
  return *v;
}

Seed to_seed(std::string_view key, std::string_view value) {
  Seed seed = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, seed);
  if (ec != std::errc() || ptr != end) bad_value(key, value);
  return seed;
}

struct Field {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

template <typename T>
Field text_field(std::string key, T RunConfig::*member) {
  return {key, [member](const RunConfig& c) { return std::string(c.*member); },
          [member](RunConfig& c, std::string_view v) { c.*member = std::string(v); }};
}

Field real_field(std::string key, double RunConfig::*member) {
  return {key, [member](const RunConfig& c) { return detail::format_double(c.*member); },
          [key, member](RunConfig& c, std::string_view v) { c.*member = to_double(key, v); }};
}

template <typename T>
Field int_field(std::string key, T RunConfig::*member) {
  return {key, [member](const RunConfig& c) { return std::to_string(c.*member); },
          [key, member](RunConfig& c, std::string_view v) { c.*member = static_cast<T>(to_int(key, v)); }};
}

Field seed_field(std::string key, Seed RunConfig::*member) {
  return {key, [member](const RunConfig& c) { return std::to_string(c.*member); },
          [key, member](RunConfig& c, std::string_view v) { c.*member = to_seed(key, v); }};
}

void set_variant(RunConfig& c, std::string_view v) {
  std::string_view base = v;
  if (v.size() == 2 && (v[1] == 'D' || v[1] == 'E')) {
    c.centrality = v[1] == 'D' ? CentralityMeasure::degree : CentralityMeasure::eigenvector;
    base = v.substr(0, 1);
  } else if (v == "D" || v == "E") {
    c.centrality = v == "D" ? CentralityMeasure::degree : CentralityMeasure::eigenvector;
    base = "full";
  }
  if (base == "full") c.variant = Variant::full;
  else if (base == "T" || base == "transform_only") c.variant = Variant::transform_only;
  else if (base == "A" || base == "attention_only") c.variant = Variant::attention_only;
  else if (base == "W" || base == "increase") c.variant = Variant::increase;
  else if (base == "I" || base == "decrease") c.variant = Variant::decrease;
  else if (base == "gcn") c.variant = Variant::gcn;
  else bad_value("transform.variant", v);
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(text_field("data.edges", &RunConfig::edges));
    f.push_back(text_field("data.delimiter", &RunConfig::delimiter));
    f.push_back(text_field("data.features", &RunConfig::features));
    f.push_back(text_field("data.labels", &RunConfig::labels));
    f.push_back(text_field("data.generator", &RunConfig::generator));
    f.push_back(int_field("data.gen_n", &RunConfig::gen_n));
    f.push_back(int_field("data.gen_m", &RunConfig::gen_m));
    f.push_back(int_field("data.gen_communities", &RunConfig::gen_communities));
    f.push_back(real_field("data.gen_mixing", &RunConfig::gen_mixing));
    f.push_back(seed_field("data.gen_seed", &RunConfig::gen_seed));

    f.push_back({"transform.centrality", [](const RunConfig& c) { return std::string(to_string(c.centrality)); },
                 [](RunConfig& c, std::string_view v) { c.centrality = parse_centrality(v); }});
    f.push_back(real_field("transform.r", &RunConfig::r));
    f.push_back(real_field("transform.p", &RunConfig::p));
    f.push_back(real_field("transform.q", &RunConfig::q));
    f.push_back(int_field("transform.t", &RunConfig::t));
    f.push_back({"transform.variant", [](const RunConfig& c) { return std::string(to_string(c.variant)); },
                 set_variant});
    f.push_back({"transform.normalization",
                 [](const RunConfig& c) { return std::string(c.normalization == Normalization::row ? "row" : "symmetric"); },
                 [](RunConfig& c, std::string_view v) {
                   if (v == "row") c.normalization = Normalization::row;
                   else if (v == "symmetric") c.normalization = Normalization::symmetric;
                   else bad_value("transform.normalization", v);
                 }});
    f.push_back(real_field("transform.eig_tol", &RunConfig::eig_tol));
    f.push_back(int_field("transform.eig_max_iter", &RunConfig::eig_max_iter));

    f.push_back({"model.task", [](const RunConfig& c) { return std::string(to_string(c.task)); },
                 [](RunConfig& c, std::string_view v) { c.task = parse_task(v); }});
    f.push_back(int_field("model.layers", &RunConfig::layers));
    f.push_back(int_field("model.hidden", &RunConfig::hidden));
    f.push_back(int_field("model.output", &RunConfig::output));
    f.push_back(real_field("model.lr", &RunConfig::lr));
    f.push_back(int_field("model.iterations", &RunConfig::iterations));
    f.push_back(real_field("model.dropout_keep", &RunConfig::dropout_keep));
    f.push_back(real_field("model.alpha", &RunConfig::alpha));
    f.push_back(real_field("model.rho", &RunConfig::rho));
    f.push_back(real_field("model.tolerance", &RunConfig::tolerance));
    f.push_back(seed_field("model.seed", &RunConfig::seed));

    f.push_back(real_field("split.train_frac", &RunConfig::train_frac));
    f.push_back(real_field("split.val_frac", &RunConfig::val_frac));
    f.push_back(real_field("split.hide_frac", &RunConfig::hide_frac));
    f.push_back(seed_field("split.seed", &RunConfig::split_seed));

    f.push_back(int_field("eval.kmeans_restarts", &RunConfig::kmeans_restarts));
    f.push_back(real_field("eval.logreg_lr", &RunConfig::logreg_lr));
    f.push_back(int_field("eval.logreg_iters", &RunConfig::logreg_iters));

    f.push_back(text_field("output.dir", &RunConfig::out_dir));
    return f;
  }();
  return table;
}

const Field& field(std::string_view key) {
  for (const Field& f : fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

}  // namespace

std::string_view to_string(Task task) {
  switch (task) {
    case Task::classify: return "classify";
    case Task::cluster: return "cluster";
    case Task::link: return "link";
  }
  return "?";
}

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::full: return "full";
    case Variant::transform_only: return "T";
    case Variant::attention_only: return "A";
    case Variant::increase: return "W";
    case Variant::decrease: return "I";
    case Variant::gcn: return "gcn";
  }
  return "?";
}

Task parse_task(std::string_view text) {
  if (text == "classify" || text == "classification") return Task::classify;
  if (text == "cluster" || text == "clustering") return Task::cluster;
  if (text == "link" || text == "link_prediction") return Task::link;
  throw ConfigError("unknown task '" + std::string(text) + "'");
}

void RunConfig::set(std::string_view key, std::string_view value) { field(key).set(*this, trim(value)); }

std::string RunConfig::get(std::string_view key) const { return field(key).get(*this); }

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const Field& f : fields()) out.push_back(f.key);
    return out;
  }();
  return names;
}

void RunConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(generator == "none" || generator == "scale_free" || generator == "planted",
          "data.generator must be none, scale_free or planted");
  require(delimiter == "auto" || delimiter == "tab" || delimiter == "space" || delimiter.size() == 1,
          "data.delimiter must be auto, tab, space or a single character");
  require(gen_n > gen_m && gen_m >= 1, "generator needs gen_n > gen_m >= 1");
  require(gen_communities >= 1, "data.gen_communities must be >= 1");
  require(gen_mixing >= 0.0 && gen_mixing <= 1.0, "data.gen_mixing must lie in [0, 1]");
  require(r > 0.0 && r < 1.0, "transform.r is a fraction in (0, 1)");
  require(p > 0.0, "transform.p must be > 0");
  require(q < 0.0, "transform.q must be < 0");
  require(t >= 1, "transform.t must be >= 1");
  require(eig_tol > 0.0 && eig_max_iter >= 1, "eigenvector options must be positive");
  require(layers >= 1, "model.layers must be >= 1");
  require(hidden >= 0 && output >= 0, "model widths must be >= 0 (0 = auto)");
  require(lr >= 0.0 && iterations >= 0, "model.lr and model.iterations must be >= 0 (0 = auto)");
  require(dropout_keep > 0.0 && dropout_keep <= 1.0, "model.dropout_keep must lie in (0, 1]");
  require(alpha >= 0.0, "model.alpha must be >= 0");
  require(rho > 1.0, "model.rho must be > 1");
  require(tolerance >= 0.0, "model.tolerance must be >= 0");
  require(train_frac > 0.0 && val_frac >= 0.0 && train_frac + val_frac < 1.0,
          "split fractions need train_frac > 0 and train_frac + val_frac < 1");
  require(hide_frac > 0.0 && hide_frac < 1.0, "split.hide_frac must lie in (0, 1)");
  require(kmeans_restarts >= 1 && logreg_iters >= 0 && logreg_lr > 0.0, "eval options out of range");
}

RunConfig RunConfig::resolved() const {
  RunConfig c = *this;
  const bool classify = task == Task::classify;
  if (c.hidden == 0) c.hidden = classify ? 16 : 512;
  if (c.output == 0 && !classify) c.output = 128;
  if (c.lr == 0.0) c.lr = task == Task::cluster ? 0.001 : 0.01;
  if (c.iterations == 0) c.iterations = classify ? 1000 : 150;
  c.validate();
  return c;
}

bool RunConfig::attention_enabled() const {
  return variant != Variant::transform_only && variant != Variant::gcn;
}

bool RunConfig::transform_enabled() const {
  return variant != Variant::attention_only && variant != Variant::gcn;
}

WeightBranch RunConfig::weight_branch() const {
  if (variant == Variant::increase) return WeightBranch::increase_only;
  if (variant == Variant::decrease) return WeightBranch::decrease_only;
  return WeightBranch::by_sign;
}

std::string RunConfig::to_text() const {
  std::ostringstream out;
  std::string section;
  for (const Field& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string s = f.key.substr(0, dot);
    if (s != section) {
      if (!section.empty()) out << '\n';
      out << '[' << s << "]\n";
      section = s;
    }
    out << f.key.substr(dot + 1) << " = " << f.get(*this) << '\n';
  }
  return out.str();
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig config;
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(line_no) + ": bad section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.find('.') == std::string::npos) {
      if (section.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": key outside a section");
      key = section + "." + key;
    }
    config.set(key, std::string_view(line).substr(eq + 1));
  }
  return config;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

}  // namespace cengcn
