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

#include "dgcl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "dgcl/random.hpp"

namespace dgcl {

Adam::Adam(double learning_rate, double beta1, double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {}

void Adam::step(ParameterSet& params, bool with_discriminator) {
  ++t_;
  const double correction1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double correction2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  std::size_t slot = 0;
  params.for_each(
      [&](const std::string&, const std::string&, Parameter& p) {
        if (slot == m_.size()) {
          m_.emplace_back(p.value.rows(), p.value.cols());
          v_.emplace_back(p.value.rows(), p.value.cols());
        }
        Matrix& m = m_[slot];
        Matrix& v = v_[slot];
        ++slot;
        if (!p.grad.same_shape(p.value)) return;
        for (std::size_t i = 0; i < p.value.size(); ++i) {
          const double g = p.grad[i];
          m[i] = beta1_ * m[i] + (1.0 - beta1_) * g;
          v[i] = beta2_ * v[i] + (1.0 - beta2_) * g * g;
          const double m_hat = m[i] / correction1;
          const double v_hat = v[i] / correction2;
          p.value[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
        }
      },
      with_discriminator);
}

Trainer::Trainer(Model model) : model_(std::move(model)), adam_(model_.config().learning_rate) {}

namespace {

bool all_finite(const LossValues& v) {
  return std::isfinite(v.prediction) && std::isfinite(v.contrastive) && std::isfinite(v.independence) && std::isfinite(v.total);
}

}  // namespace

LossValues Trainer::step(std::span<const Example> batch, std::span<const std::size_t> example_ids, std::size_t epoch) {
  const bool bilinear = model_.config().discriminator == DiscriminatorForm::kBilinear;
  model_.params().zero_grad(bilinear);
  ag::Tape tape;
  const BatchLossVars losses = model_.forward(tape, batch, example_ids, epoch);
  const LossValues values = values_of(losses);
  if (!all_finite(values)) {
    throw NumericalError("non-finite loss at epoch " + std::to_string(epoch) + ": L_p=" + format_double(values.prediction) +
                         " L_c=" + format_double(values.contrastive) + " L_d=" + format_double(values.independence));
  }
  tape.backward(losses.total);
  adam_.step(model_.params(), bilinear);
  return values;
}

RankingReport evaluate(const Model& model, const std::vector<Example>& test, std::vector<std::size_t> ks, std::size_t epoch) {
  validate_examples(test, model.num_items());
  RankingAccumulator acc(std::move(ks));
  const Matrix factor_catalog = model.catalog_factor();
  for (const auto& ex : test) {
    const ScoreVector scores = model.predict(ex.prefix, factor_catalog);
    acc.add(rank_of(scores.combined.row(0), ex.target), ex.prefix.length());
  }
  return acc.report(epoch);
}

namespace {

std::vector<std::size_t> shuffled(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  return order;
}

std::size_t selection_cutoff(const std::vector<std::size_t>& ks) {
  return std::find(ks.begin(), ks.end(), 20) != ks.end() ? 20 : ks.back();
}

}  // namespace

TrainResult train(const TrainConfig& config, const std::vector<Example>& train_examples, std::size_t num_items,
                  const std::vector<Example>* test, std::vector<std::size_t> ks, const EpochCallback& on_epoch) {
  config.validate();
  if (train_examples.empty()) throw DataError("train: no training examples");
  validate_examples(train_examples, num_items);

  // Early stopping holds out the tail of the training data.
  std::vector<Example> fit_set;
  std::vector<Example> validation;
  const std::vector<Example>* fit = &train_examples;
  if (config.early_stopping) {
    const auto held = std::max<std::size_t>(1, static_cast<std::size_t>(config.validation_fraction * static_cast<double>(train_examples.size())));
    if (held >= train_examples.size()) throw DataError("train: too few examples for a validation split");
    fit_set.assign(train_examples.begin(), train_examples.end() - static_cast<std::ptrdiff_t>(held));
    validation.assign(train_examples.end() - static_cast<std::ptrdiff_t>(held), train_examples.end());
    fit = &fit_set;
  }

  Trainer trainer(Model::initialize(config, num_items));
  TrainResult result{trainer.model(), {}, {}, false, 0};
  double best_score = -1.0;
  std::size_t since_best = 0;
  std::optional<ParameterSet> best_params;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto order = shuffled(fit->size(), derive_seed(config.seed, Stream::kShuffle, epoch));
    EpochLog log;
    log.epoch = epoch;
    std::vector<Example> batch;
    std::vector<std::size_t> ids;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      ids.assign(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(end));
      for (std::size_t id : ids) batch.push_back((*fit)[id]);
      const LossValues v = trainer.step(batch, ids, epoch);
      const double w = static_cast<double>(batch.size());
      log.loss.prediction += w * v.prediction;
      log.loss.item_cl += w * v.item_cl;
      log.loss.factor_cl += w * v.factor_cl;
      log.loss.contrastive += w * v.contrastive;
      log.loss.independence += w * v.independence;
      log.loss.total += w * v.total;
      ++log.steps;
    }
    const double n = static_cast<double>(order.size());
    for (double* f : {&log.loss.prediction, &log.loss.item_cl, &log.loss.factor_cl, &log.loss.contrastive,
                      &log.loss.independence, &log.loss.total})
      *f /= n;
    result.losses.push_back(log);

    std::optional<RankingReport> report;
    if (test != nullptr) {
      report = evaluate(trainer.model(), *test, ks, epoch);
      result.reports.push_back(*report);
    }
    if (on_epoch) on_epoch(log, report ? &*report : nullptr);

    if (config.early_stopping) {
      const double score = evaluate(trainer.model(), validation, ks, epoch).precision_at(selection_cutoff(ks));
      if (score > best_score) {
        best_score = score;
        best_params = trainer.model().params();
        result.best_epoch = epoch;
        since_best = 0;
      } else if (++since_best >= config.patience) {
        result.stopped_early = true;
        break;
      }
    } else {
      result.best_epoch = epoch;
    }
  }

  result.model = trainer.model();
  if (best_params) result.model.params() = *best_params;
  return result;
}

std::vector<AblationResult> ablate(const TrainConfig& config, std::span<const Variant> variants,
                                   const std::vector<Example>& train_examples, std::size_t num_items,
                                   const std::vector<Example>& test, std::vector<std::size_t> ks,
                                   const std::function<void(Variant, const EpochLog&, const RankingReport*)>& on_epoch) {
  if (variants.empty()) throw std::invalid_argument("ablate: no variants requested");
  std::vector<AblationResult> out;
  for (Variant v : variants) {
    TrainConfig cfg = config;
    cfg.variant = v;
    EpochCallback cb;
    if (on_epoch) cb = [&](const EpochLog& log, const RankingReport* r) { on_epoch(v, log, r); };
    out.push_back(AblationResult{v, train(cfg, train_examples, num_items, &test, ks, cb)});
  }
  return out;
}

std::string loss_csv_header() { return "variant,seed,epoch,steps,L_p,L_c_item,L_c_factor,L_c,L_d,L"; }

void write_loss_row(std::ostream& out, const std::string& variant, const std::string& seed, const EpochLog& log) {
  out << variant << ',' << seed << ',' << log.epoch << ',' << log.steps << ',' << format_double(log.loss.prediction) << ','
      << format_double(log.loss.item_cl) << ',' << format_double(log.loss.factor_cl) << ','
      << format_double(log.loss.contrastive) << ',' << format_double(log.loss.independence) << ','
      << format_double(log.loss.total) << '\n';
}

}  // namespace dgcl
