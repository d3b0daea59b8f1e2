#pragma once

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lcol/graph.hpp"

namespace lcol {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Text format: optional '#' comment lines, then "n m", then m lines "u v"
// with u < v.
inline void write_graph(std::ostream& os, const Graph& g) {
  os << g.node_count() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

inline std::string graph_to_text(const Graph& g) {
  std::ostringstream os;
  write_graph(os, g);
  return os.str();
}

inline Graph read_graph(std::istream& is) {
  std::string line;
  auto next_data_line = [&](std::string& out) {
    while (std::getline(is, out)) {
      if (!out.empty() && out.back() == '\r') out.pop_back();
      if (out.empty() || out[0] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_data_line(line)) throw Error(ErrorKind::ParseError, "missing header line");
  long long n = -1, m = -1;
  {
    std::istringstream hs(line);
    if (!(hs >> n >> m) || n < 0 || m < 0) throw Error(ErrorKind::ParseError, "bad header: " + line);
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!next_data_line(line)) throw Error(ErrorKind::ParseError, "expected " + std::to_string(m) + " edges");
    std::istringstream es(line);
    long long u, v;
    if (!(es >> u >> v)) throw Error(ErrorKind::ParseError, "bad edge line: " + line);
    if (u < 0 || v < 0 || u >= n || v >= n) throw Error(ErrorKind::OutOfRange, "edge outside range: " + line);
    if (u >= v) throw Error(ErrorKind::ParseError, "edge must satisfy u < v: " + line);
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return build_graph(static_cast<NodeId>(n), std::move(edges));
}

inline Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  return read_graph(in);
}

// Sidecar label file: a JSON object mapping decimal ids to label strings.
inline Json labels_to_json(const Graph& g) {
  Json j = Json::object();
  for (NodeId v = 0; v < g.node_count(); ++v) j[std::to_string(v)] = g.label(v);
  return j;
}

inline Graph attach_labels(const Graph& g, const Json& j) {
  std::vector<std::string> labels(static_cast<std::size_t>(g.node_count()));
  for (NodeId v = 0; v < g.node_count(); ++v) labels[v] = std::to_string(v);
  for (auto it = j.begin(); it != j.end(); ++it) {
    long long id = std::stoll(it.key());
    if (id < 0 || id >= g.node_count()) throw Error(ErrorKind::OutOfRange, "label id " + it.key());
    labels[id] = it.value().get<std::string>();
  }
  return with_labels(g, std::move(labels));
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

// Hash of the canonical text serialization.
inline std::string graph_sha256(const Graph& g) { return sha256_hex(graph_to_text(g)); }

inline Json node_set_to_json(const NodeSet& s) { return Json(s.ids()); }

}  // namespace lcol
