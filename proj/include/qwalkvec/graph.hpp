#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <iostream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qwalkvec {

using node_id = std::uint32_t;

// Thrown for malformed input files. Carries the 1-based line number when known.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct load_report {
  std::size_t edges_read = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
  std::size_t comment_lines = 0;
};

// Immutable simple undirected graph. Node ids are 0..N-1; original_ids()[i]
// holds the id node i had in the input.
class Graph {
 public:
  Graph() = default;

  // Builds a graph on `node_count` nodes from an edge list over 0..node_count-1.
  // Self-loops and repeated edges are dropped and counted in report().
  Graph(std::size_t node_count, std::span<const std::pair<node_id, node_id>> edges,
        std::vector<std::int64_t> original_ids = {})
      : adjacency_(node_count), original_ids_(std::move(original_ids)) {
    if (original_ids_.empty()) {
      original_ids_.resize(node_count);
      for (std::size_t i = 0; i < node_count; ++i) original_ids_[i] = static_cast<std::int64_t>(i);
    }
    if (original_ids_.size() != node_count)
      throw std::invalid_argument("original id table size does not match node count");
    for (auto [u, v] : edges) {
      if (u >= node_count || v >= node_count) throw std::out_of_range("edge endpoint out of range");
      ++report_.edges_read;
      if (u == v) {
        ++report_.self_loops_dropped;
        continue;
      }
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
    }
    std::size_t directed = 0;
    for (auto& nbrs : adjacency_) {
      std::sort(nbrs.begin(), nbrs.end());
      auto before = nbrs.size();
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
      report_.duplicates_dropped += before - nbrs.size();
      directed += nbrs.size();
    }
    // every duplicate undirected edge was counted once from each end
    report_.duplicates_dropped /= 2;
    edge_count_ = directed / 2;
  }

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t degree(node_id i) const { return adjacency_.at(i).size(); }

  std::span<const node_id> neighbors(node_id i) const { return adjacency_.at(i); }

  bool has_edge(node_id i, node_id j) const {
    const auto& nbrs = adjacency_.at(i);
    return std::binary_search(nbrs.begin(), nbrs.end(), j);
  }

  // Nodes with at least one neighbor.
  std::size_t active_node_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(adjacency_.begin(), adjacency_.end(), [](const auto& n) { return !n.empty(); }));
  }

  const std::vector<std::int64_t>& original_ids() const noexcept { return original_ids_; }
  std::int64_t original_id(node_id i) const { return original_ids_.at(i); }

  std::optional<node_id> find_original(std::int64_t original) const {
    auto it = std::find(original_ids_.begin(), original_ids_.end(), original);
    if (it == original_ids_.end()) return std::nullopt;
    return static_cast<node_id>(it - original_ids_.begin());
  }

  const load_report& report() const noexcept { return report_; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.adjacency_ == b.adjacency_ && a.original_ids_ == b.original_ids_;
  }

 private:
  std::vector<std::vector<node_id>> adjacency_;
  std::vector<std::int64_t> original_ids_;
  std::size_t edge_count_ = 0;
  load_report report_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// Splits on whitespace and commas.
inline std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    auto start = i;
    while (i < line.size() && !is_sep(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline std::int64_t parse_nonneg_int(std::string_view tok, std::size_t line) {
  if (tok.empty()) throw parse_error("empty token", line);
  std::int64_t v = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') throw parse_error("malformed integer '" + std::string(tok) + "'", line);
    if (v > (INT64_MAX - (c - '0')) / 10) throw parse_error("integer overflow", line);
    v = v * 10 + (c - '0');
  }
  return v;
}

inline std::int64_t parse_int(std::string_view tok, std::size_t line) {
  if (!tok.empty() && tok.front() == '-') return -parse_nonneg_int(tok.substr(1), line);
  return parse_nonneg_int(tok, line);
}

template <typename Fn>
void for_each_data_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++line_no;
    auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    if (line.empty()) continue;
    fn(line, line_no);
    if (nl == text.size()) break;
  }
}

}  // namespace detail

// Parses "u v" lines ('#' comments, blank lines allowed). Ids are remapped to
// 0..N-1 in order of first appearance.
inline Graph load_edge_list(std::string_view text, load_report* report = nullptr) {
  std::unordered_map<std::int64_t, node_id> remap;
  std::vector<std::int64_t> originals;
  std::vector<std::pair<node_id, node_id>> edges;
  std::size_t comments = 0;
  auto intern = [&](std::int64_t id) {
    auto [it, inserted] = remap.try_emplace(id, static_cast<node_id>(originals.size()));
    if (inserted) originals.push_back(id);
    return it->second;
  };
  detail::for_each_data_line(text, [&](std::string_view line, std::size_t line_no) {
    if (line.front() == '#') {
      ++comments;
      return;
    }
    auto toks = detail::tokenize(line);
    if (toks.size() != 2) throw parse_error("expected two node ids", line_no);
    auto u = detail::parse_nonneg_int(toks[0], line_no);
    auto v = detail::parse_nonneg_int(toks[1], line_no);
    auto a = intern(u);
    auto b = intern(v);
    edges.emplace_back(a, b);
  });
  if (edges.empty()) throw data_error("edge list contains no edges");
  const auto node_count = originals.size();
  Graph g(node_count, edges, std::move(originals));
  if (g.edge_count() == 0) throw data_error("edge list contains only self-loops");
  if (report) {
    *report = g.report();
    report->comment_lines = comments;
  }
  return g;
}

// Writes the graph back as an edge list using original ids, each edge once.
// Lines are ordered so that reloading assigns the same internal ids: node k is
// introduced by an edge to an earlier node, or together with k+1.
inline std::string serialize_edge_list(const Graph& g) {
  std::ostringstream os;
  const auto n = g.node_count();
  std::vector<std::vector<bool>> written(n);
  for (node_id i = 0; i < n; ++i) written[i].assign(g.degree(i), false);
  auto emit = [&](node_id a, node_id b) {
    auto mark = [&](node_id x, node_id y) {
      auto nbrs = g.neighbors(x);
      written[x][std::lower_bound(nbrs.begin(), nbrs.end(), y) - nbrs.begin()] = true;
    };
    mark(a, b);
    mark(b, a);
    os << g.original_id(a) << ' ' << g.original_id(b) << '\n';
  };
  std::vector<bool> seen(n, false);
  for (node_id k = 0; k < n; ++k) {
    if (seen[k] || g.degree(k) == 0) continue;
    auto nbrs = g.neighbors(k);
    if (nbrs.front() < k) {
      emit(nbrs.front(), k);
      seen[nbrs.front()] = true;
    } else if (k + 1 < n && g.has_edge(k, k + 1)) {
      emit(k, k + 1);
      seen[k + 1] = true;
    } else {
      emit(k, nbrs.front());
      seen[nbrs.front()] = true;
    }
    seen[k] = true;
  }
  for (node_id i = 0; i < n; ++i) {
    auto nbrs = g.neighbors(i);
    for (std::size_t p = 0; p < nbrs.size(); ++p)
      if (i < nbrs[p] && !written[i][p]) emit(i, nbrs[p]);
  }
  return os.str();
}

inline void print_load_report(std::ostream& os, const load_report& r) {
  os << "load report: " << r.edges_read << " edge lines, " << r.self_loops_dropped
     << " self-loops dropped, " << r.duplicates_dropped << " duplicate edges dropped\n";
}

// One integer label per node, densified to 0..M-1 in ascending order of the raw label.
struct LabelMap {
  std::vector<int> labels;
  int label_count = 0;

  std::size_t size() const noexcept { return labels.size(); }
  int operator[](std::size_t i) const { return labels[i]; }
};

// Parses "node label" lines against a list of known node ids (row i <-> node_ids[i]).
inline LabelMap load_labels(std::string_view text, std::span<const std::int64_t> node_ids) {
  std::unordered_map<std::int64_t, std::size_t> row_of;
  for (std::size_t i = 0; i < node_ids.size(); ++i) row_of.emplace(node_ids[i], i);
  std::vector<std::optional<std::int64_t>> raw(node_ids.size());
  detail::for_each_data_line(text, [&](std::string_view line, std::size_t line_no) {
    if (line.front() == '#') return;
    auto toks = detail::tokenize(line);
    if (toks.size() != 2) throw parse_error("expected 'node label'", line_no);
    auto node = detail::parse_nonneg_int(toks[0], line_no);
    auto label = detail::parse_int(toks[1], line_no);
    auto it = row_of.find(node);
    if (it == row_of.end()) throw parse_error("unknown node id " + std::to_string(node), line_no);
    if (raw[it->second]) throw parse_error("duplicate label for node " + std::to_string(node), line_no);
    raw[it->second] = label;
  });
  std::vector<std::int64_t> distinct;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!raw[i]) throw data_error("missing label for node " + std::to_string(node_ids[i]));
    distinct.push_back(*raw[i]);
  }
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) throw data_error("label file must contain at least two distinct labels");
  LabelMap out;
  out.label_count = static_cast<int>(distinct.size());
  out.labels.reserve(raw.size());
  for (const auto& r : raw)
    out.labels.push_back(static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), *r) - distinct.begin()));
  return out;
}

inline LabelMap load_labels(std::string_view text, const Graph& g) { return load_labels(text, g.original_ids()); }

// BFS hop distances from one source; std::nullopt marks unreachable nodes.
struct DistanceVector {
  node_id source = 0;
  std::vector<std::optional<std::uint32_t>> dist;

  bool reachable(node_id i) const { return dist[i].has_value(); }
};

inline DistanceVector bfs_distances(const Graph& g, node_id source) {
  if (source >= g.node_count()) throw std::out_of_range("bfs source out of range");
  DistanceVector out{source, std::vector<std::optional<std::uint32_t>>(g.node_count())};
  out.dist[source] = 0;
  std::deque<node_id> frontier{source};
  while (!frontier.empty()) {
    auto u = frontier.front();
    frontier.pop_front();
    for (auto v : g.neighbors(u)) {
      if (out.dist[v]) continue;
      out.dist[v] = *out.dist[u] + 1;
      frontier.push_back(v);
    }
  }
  return out;
}

}  // namespace qwalkvec
