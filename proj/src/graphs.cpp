// Copyright 2026 The DGCL Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dgcl/graphs.hpp"

#include <stdexcept>
#include <unordered_map>

#include "dgcl/random.hpp"
#include "json.hpp"

namespace dgcl {

std::size_t StarGraph::satellite_edge_count() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < satellite_index; ++i) {
    count += adjacency(satellite_index, i) != 0.0;
    count += adjacency(i, satellite_index) != 0.0;
  }
  return count;
}

std::pair<Matrix, Matrix> in_out_from_adjacency(const Matrix& adjacency, bool normalize) {
  const std::size_t n = adjacency.rows();
  Matrix out = adjacency;
  Matrix in = transpose(adjacency);
  if (!normalize) return {std::move(out), std::move(in)};
  for (Matrix* m : {&out, &in}) {
    for (std::size_t i = 0; i < n; ++i) {
      double degree = 0.0;
      for (std::size_t j = 0; j < n; ++j) degree += (*m)(i, j);
      if (degree == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) (*m)(i, j) /= degree;
    }
  }
  return {std::move(out), std::move(in)};
}

SessionGraph build_session_graph(const Session& session, bool normalize) {
  if (session.items.empty()) throw std::invalid_argument("build_session_graph: empty session");
  SessionGraph g;
  std::unordered_map<ItemIndex, std::size_t> node_of;
  for (ItemIndex item : session.items) {
    auto [it, inserted] = node_of.try_emplace(item, g.nodes.size());
    if (inserted) g.nodes.push_back(item);
    g.alias.push_back(it->second);
  }
  const std::size_t n = g.nodes.size();
  g.adjacency = Matrix(n, n);
  for (std::size_t p = 0; p + 1 < g.alias.size(); ++p) g.adjacency(g.alias[p], g.alias[p + 1]) = 1.0;
  std::tie(g.adj_out, g.adj_in) = in_out_from_adjacency(g.adjacency, normalize);
  return g;
}

ag::Var factor_cosine(const SessionGraph& graph, ag::Var factor_embeddings) {
  require_shape(factor_embeddings.value(), graph.node_count(), factor_embeddings.cols(), "factor embeddings");
  return ag::masked_row_cosine(factor_embeddings, graph.adjacency);
}

FactorAdjacency build_factor_adjacency(const SessionGraph& graph, const Matrix& factor_embeddings, std::size_t k) {
  ag::Tape tape;
  const ag::Var cos = factor_cosine(graph, tape.constant(factor_embeddings));
  return FactorAdjacency{k, cos.value()};
}

FactorChannelAdjacency factor_channel_adjacency(const SessionGraph& graph, ag::Var cosine) {
  ag::Tape& t = *cosine.tape();
  const ag::Var out = ag::hadamard(cosine, t.constant(graph.adj_out));
  const ag::Var in = ag::hadamard(ag::transpose(cosine), t.constant(graph.adj_in));
  return {out, in};
}

StarGraph sample_star_graph(const SessionGraph& graph, double theta, std::uint64_t seed, bool normalize) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("star graph: theta must lie in [0, 1]");
  if (graph.node_count() == 0) throw std::invalid_argument("star graph: no nodes");
  const std::size_t n = graph.node_count();
  StarGraph star;
  star.base = graph;
  star.satellite_index = n;
  star.theta = theta;
  star.seed = seed;
  star.adjacency = Matrix(n + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) star.adjacency(i, j) = graph.adjacency(i, j);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.bernoulli(theta)) star.adjacency(n, i) = 1.0;
    if (rng.bernoulli(theta)) star.adjacency(i, n) = 1.0;
  }
  std::tie(star.adj_out, star.adj_in) = in_out_from_adjacency(star.adjacency, normalize);
  return star;
}

StarBuild build_star_graph(const SessionGraph& graph, const Matrix& node_embeddings, double theta, std::uint64_t seed,
                           bool normalize) {
  require_shape(node_embeddings, graph.node_count(), node_embeddings.cols(), "star graph node embeddings");
  StarBuild out{sample_star_graph(graph, theta, seed, normalize), Matrix(1, node_embeddings.cols())};
  for (std::size_t node : graph.alias)
    for (std::size_t c = 0; c < node_embeddings.cols(); ++c) out.satellite_embedding(0, c) += node_embeddings(node, c);
  for (std::size_t c = 0; c < node_embeddings.cols(); ++c)
    out.satellite_embedding(0, c) /= static_cast<double>(graph.alias.size());
  return out;
}

DropoutGraph build_dropout_graph(const SessionGraph& graph, double edge_p, double node_p, std::uint64_t seed,
                                 bool normalize) {
  const std::size_t n = graph.node_count();
  Rng rng(seed);
  DropoutGraph out;
  out.kept.assign(n, true);
  const std::size_t last = graph.alias.back();
  for (std::size_t i = 0; i < n; ++i)
    if (i != last && rng.bernoulli(node_p)) out.kept[i] = false;
  Matrix adjacency = graph.adjacency;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (adjacency(i, j) == 0.0) continue;
      const bool drop_edge = rng.bernoulli(edge_p);
      if (drop_edge || !out.kept[i] || !out.kept[j]) adjacency(i, j) = 0.0;
    }
  std::tie(out.adj_out, out.adj_in) = in_out_from_adjacency(adjacency, normalize);
  return out;
}

std::string graph_to_json(const SessionGraph& graph) {
  nlohmann::json j;
  j["nodes"] = graph.nodes;
  j["alias"] = graph.alias;
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < graph.node_count(); ++k)
      if (graph.adjacency(i, k) != 0.0) row.push_back({{"to", k}, {"out_weight", graph.adj_out(i, k)}});
    edges.push_back(row);
  }
  j["out_edges"] = edges;
  return j.dump();
}

}  // namespace dgcl
