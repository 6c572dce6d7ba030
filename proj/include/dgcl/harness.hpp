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
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dgcl/config.hpp"
#include "dgcl/dataio.hpp"
#include "dgcl/metrics.hpp"
#include "dgcl/model.hpp"

namespace dgcl {

// A loss or gradient became NaN or infinite.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Adam {
 public:
  explicit Adam(double learning_rate, double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8);
  void step(ParameterSet& params, bool with_discriminator);
  std::size_t steps() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  std::size_t t_ = 0;
  std::vector<Matrix> m_, v_;
};

struct EpochLog {
  std::size_t epoch = 0;
  LossValues loss;  // means over the epoch's batches, weighted by batch size
  std::size_t steps = 0;
};

// One optimisation step at a time over caller-chosen batches.
class Trainer {
 public:
  explicit Trainer(Model model);
  // Forward, backward and one Adam update. Returns the losses before the
  // update.
  LossValues step(std::span<const Example> batch, std::span<const std::size_t> example_ids, std::size_t epoch);
  Model& model() { return model_; }
  const Model& model() const { return model_; }

 private:
  Model model_;
  Adam adam_;
};

struct TrainResult {
  Model model;
  std::vector<EpochLog> losses;
  std::vector<RankingReport> reports;  // one per epoch when test data is given
  bool stopped_early = false;
  std::size_t best_epoch = 0;
};

using EpochCallback = std::function<void(const EpochLog&, const RankingReport*)>;

// Shuffled mini-batch training from config.seed. With `test`, the model is
// evaluated after every epoch.
TrainResult train(const TrainConfig& config, const std::vector<Example>& train_examples, std::size_t num_items,
                  const std::vector<Example>* test = nullptr, std::vector<std::size_t> ks = {10, 20},
                  const EpochCallback& on_epoch = {});

// Ranks every catalog item for each example.
RankingReport evaluate(const Model& model, const std::vector<Example>& test, std::vector<std::size_t> ks = {10, 20},
                       std::size_t epoch = 0);

struct AblationResult {
  Variant variant;
  TrainResult run;
};

// Trains and evaluates each variant with otherwise identical settings.
std::vector<AblationResult> ablate(const TrainConfig& config, std::span<const Variant> variants,
                                   const std::vector<Example>& train_examples, std::size_t num_items,
                                   const std::vector<Example>& test, std::vector<std::size_t> ks = {10, 20},
                                   const std::function<void(Variant, const EpochLog&, const RankingReport*)>& on_epoch = {});

// Loss log CSV: variant,seed,epoch,steps,L_p,L_c_item,L_c_factor,L_c,L_d,L
std::string loss_csv_header();
void write_loss_row(std::ostream& out, const std::string& variant, const std::string& seed, const EpochLog& log);

}  // namespace dgcl
