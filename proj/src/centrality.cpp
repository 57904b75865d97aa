#include "cengcn/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cengcn/error.hpp"
#include "cengcn/io.hpp"
#include "text_util.hpp"

namespace cengcn {

std::string_view to_string(CentralityMeasure measure) {
  return measure == CentralityMeasure::degree ? "degree" : "eigenvector";
}

CentralityMeasure parse_centrality(std::string_view text) {
  if (text == "degree" || text == "D") return CentralityMeasure::degree;
  if (text == "eigenvector" || text == "E") return CentralityMeasure::eigenvector;
  throw ConfigError("unknown centrality measure '" + std::string(text) + "'");
}

Vector degree_centrality(const Graph& graph) { return graph.degree().cwiseMax(1.0); }

Vector eigenvector_centrality(const Graph& graph, const EigenvectorOptions& options) {
  const Index n = graph.num_vertices();
  if (n == 1) return Vector::Ones(1);
  if (graph.component_count() != 1) {
    throw DataError("eigenvector centrality needs a connected graph (found " +
                    std::to_string(graph.component_count()) +
                    " components); use degree centrality or the largest component");
  }
  const SparseMatrix& a = graph.adjacency();
  Vector v = Vector::Ones(n);
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int it = 0; it < options.max_iter; ++it) {
    const Vector av = a * v;
    const double lambda = v.dot(av) / v.squaredNorm();
    residual = (av - lambda * v).cwiseAbs().maxCoeff() / v.cwiseAbs().maxCoeff();
    Vector next = av + v;
    next /= next.cwiseAbs().maxCoeff();
    const double diff = (next - v).cwiseAbs().maxCoeff();
    if (diff < options.tol && residual < options.tol) {
      converged = true;
      break;
    }
    v = std::move(next);
  }
  if (!converged) {
    throw NumericError("eigenvector centrality did not converge in " + std::to_string(options.max_iter) +
                       " iterations (residual " + std::to_string(residual) + ")");
  }
  const Vector magnitude = v.cwiseAbs();
  const double smallest = magnitude.minCoeff();
  if (!(smallest > 0.0)) throw NumericError("eigenvector centrality has a zero component");
  return magnitude / smallest;
}

Index hub_count(Index n, double rate_percent) {
  if (!(rate_percent > 0.0 && rate_percent < 100.0)) {
    throw ConfigError("hub rate must lie in (0, 100) percent, got " + std::to_string(rate_percent));
  }
  const auto count = static_cast<Index>(std::floor(static_cast<double>(n) * rate_percent / 100.0 + 1e-9));
  return std::max<Index>(1, count);
}

std::vector<Index> select_hubs(const Vector& c, double rate_percent) {
  const Index n = c.size();
  const Index count = hub_count(n, rate_percent);
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return c[a] > c[b]; });
  std::vector<Index> hubs(order.begin(), order.begin() + count);
  std::sort(hubs.begin(), hubs.end());
  return hubs;
}

CentralityProfile make_profile(Vector c, CentralityMeasure measure, double rate_percent) {
  if ((c.array() < 1.0).any() || !c.allFinite()) throw DataError("centrality indices must be finite and >= 1");
  CentralityProfile profile;
  profile.measure = measure;
  profile.rate_percent = rate_percent;
  profile.hubs = select_hubs(c, rate_percent);
  profile.is_hub.assign(c.size(), false);
  profile.fc = Vector::Ones(c.size());
  for (Index h : profile.hubs) {
    profile.is_hub[h] = true;
    profile.fc[h] = c[h];
  }
  profile.c = std::move(c);
  return profile;
}

CentralityProfile make_profile(const Graph& graph, CentralityMeasure measure, double rate_percent,
                               const EigenvectorOptions& options) {
  Vector c = measure == CentralityMeasure::degree ? degree_centrality(graph)
                                                  : eigenvector_centrality(graph, options);
  return make_profile(std::move(c), measure, rate_percent);
}

void save_profile(const CentralityProfile& profile, const Graph& graph, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  for (Index i = 0; i < profile.num_vertices(); ++i) {
    out << graph.ids()[i] << ' ' << detail::format_double(profile.c[i]) << ' ' << (profile.is_hub[i] ? 1 : 0)
        << '\n';
  }
  detail::finish_output(out, path);
}

CentralityProfile load_profile(const std::filesystem::path& path, const Graph& graph,
                               CentralityMeasure measure, double rate_percent) {
  auto in = detail::open_input(path);
  const auto index = id_index(graph);
  const Index n = graph.num_vertices();
  Vector c = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
  std::vector<bool> is_hub(n, false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    const auto it = tokens.size() == 3 ? index.find(std::string(tokens[0])) : index.end();
    const auto value = tokens.size() == 3 ? detail::parse_double(tokens[1]) : std::nullopt;
    if (it == index.end() || !value || (tokens[2] != "0" && tokens[2] != "1")) {
      throw DataError(detail::where(path, line_no) + ": expected 'id c is_hub'");
    }
    c[it->second] = *value;
    is_hub[it->second] = tokens[2] == "1";
  }
  if (!c.allFinite()) throw DataError(path.string() + ": profile does not cover every vertex");

  CentralityProfile profile;
  profile.measure = measure;
  profile.rate_percent = rate_percent;
  profile.fc = Vector::Ones(n);
  for (Index i = 0; i < n; ++i) {
    if (is_hub[i]) {
      profile.hubs.push_back(i);
      profile.fc[i] = c[i];
    }
  }
  if (profile.hubs.empty()) throw DataError(path.string() + ": profile has no hubs");
  profile.is_hub = std::move(is_hub);
  profile.c = std::move(c);
  return profile;
}

}  // namespace cengcn
