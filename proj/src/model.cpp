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

#include "dgcl/model.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "dgcl/contrast.hpp"
#include "dgcl/disentangle.hpp"
#include "dgcl/encoder.hpp"
#include "dgcl/graphs.hpp"
#include "dgcl/propagation.hpp"
#include "dgcl/random.hpp"

namespace dgcl {

LossValues values_of(const BatchLossVars& v) {
  return LossValues{v.prediction.scalar(), v.item_cl.scalar(),      v.factor_cl.scalar(),
                    v.contrastive.scalar(), v.independence.scalar(), v.total.scalar()};
}

Model::Model(TrainConfig config, ParameterSet params) : config_(std::move(config)), params_(std::move(params)) {
  config_.validate();
}

Model Model::initialize(const TrainConfig& config, std::size_t num_items) {
  if (num_items == 0) throw std::invalid_argument("model: empty catalog");
  return Model(config, init_parameters(config, num_items, config.seed));
}

namespace {

// Original and factor channels of one session; shared by training and
// inference.
struct SessionChannels {
  SessionGraph graph;
  ag::Var x0;                       // raw node embeddings
  ag::Var original;                 // original view output
  std::vector<ag::Var> factor_out;  // factor channel outputs
};

SessionChannels run_channels(const TrainConfig& cfg, const BoundParameters& p, const Session& prefix) {
  SessionChannels s;
  s.graph = build_session_graph(prefix, cfg.normalize_adjacency);
  s.x0 = ag::gather_rows(p.embedding, s.graph.nodes);
  s.original = run_original(s.graph, s.x0, p.original, cfg.layers);
  const auto raw_factors = project(p.projection, s.x0, cfg.bias_inside);
  for (std::size_t k = 0; k < raw_factors.size(); ++k) {
    const ag::Var cosine = factor_cosine(s.graph, raw_factors[k]);
    s.factor_out.push_back(run_factor(s.graph, cosine, raw_factors[k], p.factor[k], cfg.layers));
  }
  return s;
}

AttentionOptions attention_options(const TrainConfig& cfg) { return AttentionOptions{cfg.normalize_attention}; }

}  // namespace

BatchLossVars Model::forward(ag::Tape& tape, std::span<const Example> batch, std::span<const std::size_t> example_ids,
                             std::size_t epoch) {
  if (batch.empty()) throw std::invalid_argument("forward: empty batch");
  if (example_ids.size() != batch.size()) throw std::invalid_argument("forward: one id per example required");
  const TrainConfig& cfg = config_;
  const BoundParameters p = bind(tape, params_, cfg.discriminator);
  const ContrastConfig contrast = cfg.contrast();
  const bool factor_cl_active = cfg.variant != Variant::kFcl;

  // Independence penalty over the distinct items of the batch.
  std::vector<ItemIndex> unique_items;
  for (const auto& ex : batch) unique_items.insert(unique_items.end(), ex.prefix.items.begin(), ex.prefix.items.end());
  std::sort(unique_items.begin(), unique_items.end());
  unique_items.erase(std::unique(unique_items.begin(), unique_items.end()), unique_items.end());
  const ag::Var batch_items = ag::gather_rows(p.embedding, unique_items);
  const ag::Var independence = independence_loss(tape, project(p.projection, batch_items, cfg.bias_inside));

  std::vector<ag::Var> session_item, session_factor, item_terms, factor_terms;
  std::vector<ItemIndex> targets;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const Example& ex = batch[b];
    const std::size_t id = example_ids[b];
    if (ex.target >= num_items()) throw std::out_of_range("forward: target outside catalog");
    targets.push_back(ex.target);
    SessionChannels s = run_channels(cfg, p, ex.prefix);
    const std::size_t n = s.graph.node_count();

    ag::Var augmented;
    if (cfg.variant == Variant::kStar) {
      const auto drop = build_dropout_graph(s.graph, cfg.dropout_edge, cfg.dropout_node,
                                            derive_seed(cfg.seed, Stream::kDropout, epoch, id), cfg.normalize_adjacency);
      Matrix keep(n, cfg.d);
      for (std::size_t i = 0; i < n; ++i)
        if (drop.kept[i]) std::fill(keep.row(i).begin(), keep.row(i).end(), 1.0);
      const ag::Var x = ag::hadamard(s.x0, tape.constant(std::move(keep)));
      augmented = propagate(x, tape.constant(drop.adj_in), tape.constant(drop.adj_out), p.star, cfg.layers);
    } else {
      const StarGraph star = sample_star_graph(s.graph, cfg.theta, derive_seed(cfg.seed, Stream::kStar, epoch, id),
                                               cfg.normalize_adjacency);
      const ag::Var satellite = ag::mean_rows(ag::gather_rows(s.x0, s.graph.alias));
      const std::array<ag::Var, 2> rows{s.x0, satellite};
      augmented = run_star(star, ag::concat_rows(rows), p.star, cfg.layers);
    }

    const std::uint64_t neg_seed = derive_seed(cfg.seed, Stream::kNegatives, epoch, id);
    if (auto term = item_cl_loss(s.original, augmented, p.item_disc, contrast, neg_seed)) item_terms.push_back(*term);
    if (factor_cl_active) {
      const auto reembedded = factor_view_of_original(s.original, p.projection, cfg.bias_inside);
      if (auto term = factor_cl_loss(reembedded, s.factor_out, p.factor_disc, contrast, splitmix64(neg_seed))) {
        factor_terms.push_back(*term);
      }
    }

    session_item.push_back(encode_item_level(s.original, s.graph.alias, p.item_attention, attention_options(cfg)));
    if (uses_factor_head()) {
      session_factor.push_back(encode_factor_level(s.factor_out, s.graph.alias, p.factor_attention, attention_options(cfg)));
    }
  }

  ag::Var factor_state, catalog_f;
  if (uses_factor_head()) {
    factor_state = ag::concat_rows(session_factor);
    catalog_f = catalog_factor_embeddings(p.embedding, p.projection, cfg.bias_inside);
  }
  const ScoreVars scores = score(ag::concat_rows(session_item), factor_state, p.embedding, catalog_f);

  auto average = [&](const std::vector<ag::Var>& terms) {
    return terms.empty() ? tape.constant(Matrix(1, 1)) : ag::mean(ag::concat_rows(terms));
  };

  BatchLossVars out;
  out.prediction = prediction_loss(scores.combined, targets);
  out.item_cl = average(item_terms);
  out.factor_cl = average(factor_terms);
  out.contrastive = mix(out.item_cl, out.factor_cl, contrast.alpha);
  out.independence = independence;
  out.total = ag::add(out.prediction, ag::add(ag::scale(out.contrastive, cfg.beta1), ag::scale(out.independence, cfg.beta2)));
  return out;
}

Matrix Model::catalog_factor() const {
  if (!uses_factor_head()) return Matrix();
  const auto proj = params_.projection.map([](const Parameter& q) { return q.value; });
  return catalog_factor_embeddings(params_.embedding.value, proj, config_.bias_inside);
}

ScoreVector Model::predict(const Session& prefix, const Matrix& factor_catalog) const {
  ag::Tape tape;
  // No backward runs on this tape, so the parameters are only read.
  auto& params = const_cast<ParameterSet&>(params_);
  const BoundParameters p = bind(tape, params, config_.discriminator);
  const SessionChannels s = run_channels(config_, p, prefix);
  const ag::Var item = encode_item_level(s.original, s.graph.alias, p.item_attention, attention_options(config_));
  ag::Var factor, catalog_f;
  if (uses_factor_head()) {
    if (factor_catalog.rows() != num_items()) throw std::invalid_argument("predict: factor catalog has the wrong size");
    factor = encode_factor_level(s.factor_out, s.graph.alias, p.factor_attention, attention_options(config_));
    catalog_f = tape.constant(factor_catalog);
  }
  const ScoreVars scores = score(item, factor, p.embedding, catalog_f);
  ScoreVector out;
  out.item = scores.item.value();
  if (scores.factor.valid()) out.factor = scores.factor.value();
  out.combined = scores.combined.value();
  return out;
}

}  // namespace dgcl
