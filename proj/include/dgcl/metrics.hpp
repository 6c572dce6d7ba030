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
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dgcl/dataio.hpp"

namespace dgcl {

// Prefixes of at least this many items count as long sessions.
inline constexpr std::size_t kLongSessionThreshold = 5;

struct MetricRow {
  std::size_t count = 0;
  std::vector<double> precision;  // P@k per cutoff
  std::vector<double> mrr;        // M@k per cutoff
};

struct RankingReport {
  std::vector<std::size_t> ks;
  MetricRow overall;
  MetricRow short_sessions;
  MetricRow long_sessions;
  std::size_t epoch = 0;

  double precision_at(std::size_t k) const;
  double mrr_at(std::size_t k) const;
};

// 1-based rank of `target`: one plus the number of items scoring higher,
// with ties broken towards the lower index.
std::size_t rank_of(std::span<const double> scores, ItemIndex target);

class RankingAccumulator {
 public:
  explicit RankingAccumulator(std::vector<std::size_t> ks);
  void add(std::size_t rank, std::size_t prefix_length);
  RankingReport report(std::size_t epoch = 0) const;

 private:
  struct Sums {
    std::size_t count = 0;
    std::vector<double> hits;
    std::vector<double> reciprocal;
  };
  void add_to(Sums& s, std::size_t rank) const;
  MetricRow finish(const Sums& s) const;

  std::vector<std::size_t> ks_;
  Sums overall_, short_, long_;
};

// Empty string if M@k <= P@k <= 1 everywhere and P@k is non-decreasing in
// k; otherwise a description of the first violation.
std::string check_report(const RankingReport& report);

// Metrics CSV: dataset,variant,seed,epoch,P@k,M@k...,bucket with one row
// per bucket (all, short, long).
std::string metrics_csv_header(std::span<const std::size_t> ks);
void write_metrics_rows(std::ostream& out, const std::string& dataset, const std::string& variant, const std::string& seed,
                        const RankingReport& report);

std::string format_double(double v);

}  // namespace dgcl
