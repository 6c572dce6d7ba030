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

#include "dgcl/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace dgcl {

namespace {

std::size_t index_of_k(const std::vector<std::size_t>& ks, std::size_t k) {
  const auto it = std::find(ks.begin(), ks.end(), k);
  if (it == ks.end()) throw std::out_of_range("report has no cutoff " + std::to_string(k));
  return static_cast<std::size_t>(it - ks.begin());
}

}  // namespace

double RankingReport::precision_at(std::size_t k) const { return overall.precision[index_of_k(ks, k)]; }
double RankingReport::mrr_at(std::size_t k) const { return overall.mrr[index_of_k(ks, k)]; }

std::size_t rank_of(std::span<const double> scores, ItemIndex target) {
  if (target >= scores.size()) throw std::out_of_range("rank_of: target outside score vector");
  const double s = scores[target];
  std::size_t rank = 1;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > s || (scores[i] == s && i < target)) ++rank;
  }
  return rank;
}

RankingAccumulator::RankingAccumulator(std::vector<std::size_t> ks) : ks_(std::move(ks)) {
  if (ks_.empty()) throw std::invalid_argument("ranking: at least one cutoff required");
  for (std::size_t k : ks_)
    if (k == 0) throw std::invalid_argument("ranking: cutoffs must be positive");
  for (Sums* s : {&overall_, &short_, &long_}) {
    s->hits.assign(ks_.size(), 0.0);
    s->reciprocal.assign(ks_.size(), 0.0);
  }
}

void RankingAccumulator::add_to(Sums& s, std::size_t rank) const {
  ++s.count;
  for (std::size_t i = 0; i < ks_.size(); ++i) {
    if (rank <= ks_[i]) {
      s.hits[i] += 1.0;
      s.reciprocal[i] += 1.0 / static_cast<double>(rank);
    }
  }
}

void RankingAccumulator::add(std::size_t rank, std::size_t prefix_length) {
  if (rank == 0) throw std::invalid_argument("ranking: ranks are 1-based");
  add_to(overall_, rank);
  add_to(prefix_length >= kLongSessionThreshold ? long_ : short_, rank);
}

MetricRow RankingAccumulator::finish(const Sums& s) const {
  MetricRow row;
  row.count = s.count;
  for (std::size_t i = 0; i < ks_.size(); ++i) {
    const double n = s.count == 0 ? 1.0 : static_cast<double>(s.count);
    row.precision.push_back(s.hits[i] / n);
    row.mrr.push_back(s.reciprocal[i] / n);
  }
  return row;
}

RankingReport RankingAccumulator::report(std::size_t epoch) const {
  RankingReport r;
  r.ks = ks_;
  r.overall = finish(overall_);
  r.short_sessions = finish(short_);
  r.long_sessions = finish(long_);
  r.epoch = epoch;
  return r;
}

std::string check_report(const RankingReport& report) {
  const std::pair<const char*, const MetricRow*> rows[] = {
      {"all", &report.overall}, {"short", &report.short_sessions}, {"long", &report.long_sessions}};
  for (const auto& [name, row] : rows) {
    for (std::size_t i = 0; i < report.ks.size(); ++i) {
      const std::string at = std::string(name) + " @" + std::to_string(report.ks[i]);
      if (row->mrr[i] < 0.0) return at + ": M@K negative";
      if (row->mrr[i] > row->precision[i]) return at + ": M@K exceeds P@K";
      if (row->precision[i] > 1.0) return at + ": P@K exceeds 1";
      for (std::size_t j = 0; j < report.ks.size(); ++j) {
        if (report.ks[j] > report.ks[i] && row->precision[j] < row->precision[i]) return at + ": P@K decreases with K";
      }
    }
  }
  return {};
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string metrics_csv_header(std::span<const std::size_t> ks) {
  std::string h = "dataset,variant,seed,epoch";
  for (std::size_t k : ks) h += ",P@" + std::to_string(k) + ",M@" + std::to_string(k);
  return h + ",bucket";
}

void write_metrics_rows(std::ostream& out, const std::string& dataset, const std::string& variant, const std::string& seed,
                        const RankingReport& report) {
  const std::pair<const char*, const MetricRow*> rows[] = {
      {"all", &report.overall}, {"short", &report.short_sessions}, {"long", &report.long_sessions}};
  for (const auto& [bucket, row] : rows) {
    out << dataset << ',' << variant << ',' << seed << ',' << report.epoch;
    for (std::size_t i = 0; i < report.ks.size(); ++i) out << ',' << format_double(row->precision[i]) << ',' << format_double(row->mrr[i]);
    out << ',' << bucket << '\n';
  }
}

}  // namespace dgcl
