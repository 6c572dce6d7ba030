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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dgcl/autograd.hpp"
#include "dgcl/dataio.hpp"
#include "dgcl/matrix.hpp"

namespace dgcl {

// Directed graph of one session. Nodes are the unique items in order of
// first occurrence; `alias[p]` is the node of sequence position p.
struct SessionGraph {
  std::vector<ItemIndex> nodes;
  std::vector<std::size_t> alias;
  Matrix adjacency;  // 0/1, repeated transitions collapse to 1
  Matrix adj_out;    // row i: outgoing edges of node i
  Matrix adj_in;     // row i: incoming edges of node i

  std::size_t node_count() const { return nodes.size(); }
};

// Cosine similarities of one factor's embeddings at the session's edges.
struct FactorAdjacency {
  std::size_t k = 0;
  Matrix weights;  // n x n, non-zero only where the session graph has an edge
};

// The session graph plus a satellite node (index node_count()) randomly
// linked to the real nodes.
struct StarGraph {
  SessionGraph base;
  std::size_t satellite_index = 0;
  Matrix adjacency;  // (n+1) x (n+1), 0/1
  Matrix adj_out;
  Matrix adj_in;
  double theta = 0.0;
  std::uint64_t seed = 0;

  std::size_t satellite_edge_count() const;
};

// Edge/node dropout view used in place of the star graph by the
// dropout ablation. Rows stay aligned with the base graph.
struct DropoutGraph {
  Matrix adj_out;
  Matrix adj_in;
  std::vector<bool> kept;  // false for dropped nodes, whose features are zeroed
};

// Row-normalised (out, in) matrices for a 0/1 adjacency. With
// `normalize` false the raw adjacency and its transpose are returned.
std::pair<Matrix, Matrix> in_out_from_adjacency(const Matrix& adjacency, bool normalize);

SessionGraph build_session_graph(const Session& session, bool normalize = true);

// `factor_embeddings` holds one row per graph node.
FactorAdjacency build_factor_adjacency(const SessionGraph& graph, const Matrix& factor_embeddings, std::size_t k);

// Differentiable variant: cosine weights at edge positions of `graph`.
ag::Var factor_cosine(const SessionGraph& graph, ag::Var factor_embeddings);

// Propagation matrices of a factor channel: the cosine weights take the
// place of the 0/1 entries of the session graph's (possibly normalised)
// out- and in-matrices.
struct FactorChannelAdjacency {
  ag::Var adj_out;
  ag::Var adj_in;
};
FactorChannelAdjacency factor_channel_adjacency(const SessionGraph& graph, ag::Var cosine);

struct StarBuild {
  StarGraph graph;
  Matrix satellite_embedding;  // 1 x d
};

// Satellite embedding is the mean of the item embeddings over sequence
// positions. Each direction of each satellite edge is drawn independently
// with probability theta from a generator seeded with `seed`.
StarBuild build_star_graph(const SessionGraph& graph, const Matrix& node_embeddings, double theta, std::uint64_t seed,
                           bool normalize = true);

StarGraph sample_star_graph(const SessionGraph& graph, double theta, std::uint64_t seed, bool normalize = true);

// Drops each edge with probability edge_p and each node except the last
// clicked one with probability node_p.
DropoutGraph build_dropout_graph(const SessionGraph& graph, double edge_p, double node_p, std::uint64_t seed,
                                 bool normalize = true);

// Adjacency-list dump for inspection; no format stability promised.
std::string graph_to_json(const SessionGraph& graph);

}  // namespace dgcl
