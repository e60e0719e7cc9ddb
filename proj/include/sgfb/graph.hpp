#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sgfb/error.hpp"

namespace sgfb {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted undirected graph without self-loops. Edges are stored once with
/// u < v; the implied adjacency matrix is symmetric.
class Graph {
 public:
  Graph() = default;

  Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto& e : edges_) {
      if (e.u >= n_ || e.v >= n_) {
        throw DimensionError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                             ") references a vertex >= n=" + std::to_string(n_));
      }
      if (e.u == e.v) {
        throw ParseError("self-loop at vertex " + std::to_string(e.u));
      }
      if (!(e.w > 0.0) || !std::isfinite(e.w)) {
        throw ParseError("edge weight must be positive and finite");
      }
      if (e.u > e.v) std::swap(e.u, e.v);
      if (!seen.emplace(e.u, e.v).second) {
        throw ParseError("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
      }
    }
  }

  std::size_t n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::vector<double> degrees() const {
    std::vector<double> d(n_, 0.0);
    for (const auto& e : edges_) {
      d[e.u] += e.w;
      d[e.v] += e.w;
    }
    return d;
  }

  std::vector<std::vector<std::size_t>> neighbors() const {
    std::vector<std::vector<std::size_t>> adj(n_);
    for (const auto& e : edges_) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    return adj;
  }

  std::size_t component_count() const {
    if (n_ == 0) return 0;
    const auto adj = neighbors();
    std::vector<bool> seen(n_, false);
    std::size_t count = 0;
    for (std::size_t s = 0; s < n_; ++s) {
      if (seen[s]) continue;
      ++count;
      std::queue<std::size_t> q;
      q.push(s);
      seen[s] = true;
      while (!q.empty()) {
        const auto x = q.front();
        q.pop();
        for (auto y : adj[x]) {
          if (!seen[y]) {
            seen[y] = true;
            q.push(y);
          }
        }
      }
    }
    return count;
  }

  bool connected() const { return component_count() == 1; }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::size_t parse_index(const std::string& tok, std::size_t line_no) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError("line " + std::to_string(line_no) + ": bad vertex index '" + tok + "'");
  }
  return static_cast<std::size_t>(std::stoull(tok));
}

}  // namespace detail

/// Parses the edge-list format:
///   n <count>
///   u v [w]      (0-based, w defaults to 1.0)
/// Lines starting with '#' and blank lines are skipped; CRLF is accepted.
inline Graph load_graph(std::string_view text) {
  std::size_t n = 0;
  bool have_n = false;
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = detail::trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    std::istringstream in{std::string(line)};
    std::vector<std::string> tok;
    for (std::string t; in >> t;) tok.push_back(t);

    if (!have_n) {
      if (tok.size() != 2 || tok[0] != "n") {
        throw ParseError("line " + std::to_string(line_no) + ": expected header 'n <count>'");
      }
      n = detail::parse_index(tok[1], line_no);
      have_n = true;
      continue;
    }
    if (tok.size() < 2 || tok.size() > 3) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'u v [w]'");
    }
    Edge e;
    e.u = detail::parse_index(tok[0], line_no);
    e.v = detail::parse_index(tok[1], line_no);
    if (tok.size() == 3) {
      std::size_t used = 0;
      try {
        e.w = std::stod(tok[2], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok[2].size()) {
        throw ParseError("line " + std::to_string(line_no) + ": bad weight '" + tok[2] + "'");
      }
      if (!(e.w > 0.0)) {
        throw ParseError("line " + std::to_string(line_no) + ": weight must be positive");
      }
    }
    if (e.u == e.v) {
      throw ParseError("line " + std::to_string(line_no) + ": self-loop");
    }
    if (e.u >= n || e.v >= n) {
      throw ParseError("line " + std::to_string(line_no) + ": vertex index out of range");
    }
    edges.push_back(e);
  }
  if (!have_n) throw ParseError("missing 'n <count>' header");
  return Graph(n, std::move(edges));
}

inline Graph gen_path_graph(std::size_t n) {
  if (n < 2) throw DimensionError("path graph needs n >= 2");
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  return Graph(n, std::move(edges));
}

struct SensorGraph {
  Graph graph;
  std::vector<std::pair<double, double>> coords;
  std::uint64_t seed_used = 0;
};

namespace detail {

inline SensorGraph sensor_attempt(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, double>> pts(n);
  for (auto& p : pts) {
    p.first = unit(rng);
    p.second = unit(rng);
  }

  std::vector<std::vector<std::pair<double, std::size_t>>> knn(n);
  double dist_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> d;
    d.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = pts[i].first - pts[j].first;
      const double dy = pts[i].second - pts[j].second;
      d.emplace_back(std::sqrt(dx * dx + dy * dy), j);
    }
    std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
    d.resize(k);
    for (const auto& [dist, j] : d) dist_sum += dist;
    knn[i] = std::move(d);
  }
  const double theta = dist_sum / static_cast<double>(n * k);

  std::set<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [dist, j] : knn[i]) {
      const auto key = std::minmax(i, j);
      if (!pairs.insert(key).second) continue;
      const double w = std::exp(-dist * dist / (2.0 * theta * theta));
      edges.push_back({key.first, key.second, std::max(w, std::numeric_limits<double>::min())});
    }
  }
  return {Graph(n, std::move(edges)), std::move(pts), seed};
}

}  // namespace detail

/// Random sensor network: n points uniform in the unit square, k-NN edges
/// (symmetrized), Gaussian weights exp(-d^2 / 2 theta^2) with theta the mean
/// k-NN distance. Reseeds with seed+1, seed+2, ... until connected.
inline SensorGraph gen_random_sensor_graph_with_coords(std::size_t n, std::size_t k,
                                                       std::uint64_t seed) {
  if (n < 2) throw DimensionError("sensor graph needs n >= 2");
  if (k < 1 || k >= n) throw DimensionError("sensor graph needs 1 <= k < n");
  constexpr int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    auto g = detail::sensor_attempt(n, k, seed + static_cast<std::uint64_t>(attempt));
    if (g.graph.connected()) return g;
  }
  throw NumericError("random sensor graph still disconnected after 100 attempts");
}

inline Graph gen_random_sensor_graph(std::size_t n, std::size_t k, std::uint64_t seed) {
  return gen_random_sensor_graph_with_coords(n, k, seed).graph;
}

}  // namespace sgfb
