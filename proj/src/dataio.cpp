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

#include "dgcl/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string_view>

#include "json.hpp"

namespace dgcl {

ItemCatalog::ItemCatalog(std::vector<std::string> raw_ids) {
  for (auto& id : raw_ids) {
    if (contains(id)) throw DataError("catalog: duplicate raw id '" + id + "'");
    add(id);
  }
}

ItemIndex ItemCatalog::add(const std::string& raw_id) {
  auto [it, inserted] = index_.try_emplace(raw_id, raw_ids_.size());
  if (inserted) raw_ids_.push_back(raw_id);
  return it->second;
}

ItemIndex ItemCatalog::index_of(const std::string& raw_id) const {
  auto it = index_.find(raw_id);
  if (it == index_.end()) throw DataError("catalog: unknown item '" + raw_id + "'");
  return it->second;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_event(std::string_view line, char delim, RawEvent& out) {
  std::string_view fields[3];
  for (int f = 0; f < 3; ++f) {
    const auto pos = line.find(delim);
    if (f < 2 && pos == std::string_view::npos) return false;
    fields[f] = trim(line.substr(0, pos));
    line = pos == std::string_view::npos ? std::string_view{} : line.substr(pos + 1);
  }
  if (fields[0].empty() || fields[1].empty() || fields[2].empty()) return false;
  double ts = 0.0;
  const auto [ptr, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), ts);
  if (ec != std::errc() || ptr != fields[1].data() + fields[1].size()) return false;
  if (!std::isfinite(ts) || ts < 0.0) return false;
  out.session_id.assign(fields[0]);
  out.timestamp = ts;
  out.item_id.assign(fields[2]);
  return true;
}

}  // namespace

IngestResult ingest_stream(std::istream& in, const IngestOptions& options) {
  IngestResult result;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first && options.header) {
      first = false;
      continue;
    }
    first = false;
    if (trim(line).empty()) continue;
    RawEvent ev;
    if (parse_event(line, options.delimiter, ev)) {
      result.events.push_back(std::move(ev));
    } else {
      ++result.malformed;
    }
  }
  return result;
}

IngestResult ingest(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open event file: " + path.string());
  return ingest_stream(in, options);
}

Corpus preprocess(const std::vector<RawEvent>& events, const PreprocessOptions& options) {
  if (options.min_item_freq < 1) throw std::invalid_argument("preprocess: min_item_freq must be >= 1");
  if (options.min_session_len < 2) throw std::invalid_argument("preprocess: min_session_len must be >= 2");

  // Group by session in order of first appearance, then order by time.
  std::unordered_map<std::string, std::size_t> session_slot;
  std::vector<std::vector<const RawEvent*>> grouped;
  for (const auto& ev : events) {
    auto [it, inserted] = session_slot.try_emplace(ev.session_id, grouped.size());
    if (inserted) grouped.emplace_back();
    grouped[it->second].push_back(&ev);
  }
  struct Pending {
    std::vector<const std::string*> items;
    double last_timestamp;
  };
  std::vector<Pending> pending;
  pending.reserve(grouped.size());
  for (auto& g : grouped) {
    std::stable_sort(g.begin(), g.end(), [](const RawEvent* a, const RawEvent* b) { return a->timestamp < b->timestamp; });
    Pending p{{}, g.back()->timestamp};
    for (const RawEvent* ev : g) p.items.push_back(&ev->item_id);
    pending.push_back(std::move(p));
  }

  for (bool changed = true; changed;) {
    changed = false;
    std::unordered_map<std::string_view, std::size_t> freq;
    for (const auto& p : pending)
      for (const auto* id : p.items) ++freq[*id];
    for (auto& p : pending) {
      const auto before = p.items.size();
      std::erase_if(p.items, [&](const std::string* id) { return freq[*id] < options.min_item_freq; });
      changed = changed || p.items.size() != before;
    }
    const auto before = pending.size();
    std::erase_if(pending, [&](const Pending& p) { return p.items.size() < options.min_session_len; });
    changed = changed || pending.size() != before;
  }

  if (pending.empty()) {
    throw DataError("preprocess: no sessions survive filtering (events=" + std::to_string(events.size()) +
                    ", sessions=" + std::to_string(grouped.size()) +
                    ", min_item_freq=" + std::to_string(options.min_item_freq) +
                    ", min_session_len=" + std::to_string(options.min_session_len) + ")");
  }

  Corpus corpus;
  corpus.sessions.reserve(pending.size());
  for (const auto& p : pending) {
    Session s;
    s.last_timestamp = p.last_timestamp;
    auto begin = p.items.begin();
    if (options.max_length > 0 && p.items.size() > options.max_length) begin = p.items.end() - static_cast<std::ptrdiff_t>(options.max_length);
    for (auto it = begin; it != p.items.end(); ++it) s.items.push_back(corpus.catalog.add(**it));
    corpus.sessions.push_back(std::move(s));
  }
  return corpus;
}

std::vector<RawEvent> to_events(const std::vector<Session>& sessions, const ItemCatalog& catalog) {
  std::vector<RawEvent> out;
  for (std::size_t s = 0; s < sessions.size(); ++s) {
    const auto& items = sessions[s].items;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const double offset = static_cast<double>(items.size() - 1 - i);
      out.push_back({"s" + std::to_string(s), sessions[s].last_timestamp - offset, catalog.raw_id(items[i])});
    }
  }
  return out;
}

double boundary_from_days(const std::vector<Session>& sessions, double days) {
  if (sessions.empty()) throw DataError("split: no sessions");
  double latest = sessions.front().last_timestamp;
  for (const auto& s : sessions) latest = std::max(latest, s.last_timestamp);
  return latest - days * 86400.0;
}

SplitResult split(const Corpus& corpus, double boundary, std::size_t min_session_len) {
  SplitResult result;
  std::vector<const Session*> train_src;
  std::vector<const Session*> test_src;
  for (const auto& s : corpus.sessions) (s.last_timestamp > boundary ? test_src : train_src).push_back(&s);

  if (!corpus.sessions.empty()) {
    const auto [lo, hi] = std::minmax_element(corpus.sessions.begin(), corpus.sessions.end(),
                                              [](const Session& a, const Session& b) { return a.last_timestamp < b.last_timestamp; });
    if (boundary < lo->last_timestamp || boundary >= hi->last_timestamp) {
      result.warnings.push_back("split boundary lies outside the data range; one side is empty");
    }
  }
  if (train_src.empty()) throw DataError("split: boundary leaves no training sessions");

  std::vector<ItemIndex> remap(corpus.catalog.size(), corpus.catalog.size());
  for (const Session* s : train_src) {
    Session out;
    out.last_timestamp = s->last_timestamp;
    for (ItemIndex item : s->items) {
      if (remap[item] == corpus.catalog.size()) remap[item] = result.catalog.add(corpus.catalog.raw_id(item));
      out.items.push_back(remap[item]);
    }
    result.train.push_back(std::move(out));
  }
  std::size_t dropped = 0;
  for (const Session* s : test_src) {
    Session out;
    out.last_timestamp = s->last_timestamp;
    for (ItemIndex item : s->items)
      if (remap[item] != corpus.catalog.size()) out.items.push_back(remap[item]);
    if (out.items.size() < min_session_len) {
      ++dropped;
      continue;
    }
    result.test.push_back(std::move(out));
  }
  if (dropped > 0) result.warnings.push_back(std::to_string(dropped) + " test sessions dropped after removing unseen items");
  return result;
}

std::vector<Example> prefix_augment(const std::vector<Session>& sessions) {
  std::vector<Example> out;
  for (const auto& s : sessions) {
    for (std::size_t end = 1; end < s.items.size(); ++end) {
      Example ex;
      ex.prefix.items.assign(s.items.begin(), s.items.begin() + static_cast<std::ptrdiff_t>(end));
      ex.prefix.last_timestamp = s.last_timestamp;
      ex.target = s.items[end];
      out.push_back(std::move(ex));
    }
  }
  return out;
}

CorpusStats stats(const std::vector<Session>& train, const std::vector<Session>& test, const ItemCatalog& catalog) {
  CorpusStats s;
  for (const auto& x : train) s.interactions += x.length();
  for (const auto& x : test) s.interactions += x.length();
  s.training_sessions = train.size();
  s.test_sessions = test.size();
  s.items = catalog.size();
  const std::size_t sessions = train.size() + test.size();
  s.avg_length = sessions == 0 ? 0.0 : static_cast<double>(s.interactions) / static_cast<double>(sessions);
  return s;
}

void write_examples(const std::filesystem::path& path, const std::vector<Example>& examples) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& ex : examples) {
    nlohmann::json j;
    j["session"] = ex.prefix.items;
    j["target"] = ex.target;
    out << j.dump() << '\n';
  }
}

std::vector<Example> read_examples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open example file: " + path.string());
  std::vector<Example> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      Example ex;
      ex.prefix.items = j.at("session").get<std::vector<ItemIndex>>();
      ex.target = j.at("target").get<ItemIndex>();
      if (ex.prefix.items.empty()) throw DataError("empty session");
      out.push_back(std::move(ex));
    } catch (const std::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_catalog(const std::filesystem::path& path, const ItemCatalog& catalog) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  nlohmann::json j;
  j["items"] = catalog.raw_ids();
  out << j.dump() << '\n';
}

ItemCatalog read_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open catalog file: " + path.string());
  try {
    const auto j = nlohmann::json::parse(in);
    return ItemCatalog(j.at("items").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_stats(const std::filesystem::path& path, const CorpusStats& s) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  nlohmann::json j;
  j["interactions"] = s.interactions;
  j["training_sessions"] = s.training_sessions;
  j["test_sessions"] = s.test_sessions;
  j["items"] = s.items;
  j["avg_length"] = s.avg_length;
  out << j.dump(2) << '\n';
}

void validate_examples(const std::vector<Example>& examples, std::size_t catalog_size) {
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    const bool bad = ex.target >= catalog_size ||
                     std::any_of(ex.prefix.items.begin(), ex.prefix.items.end(), [&](ItemIndex v) { return v >= catalog_size; });
    if (bad || ex.prefix.items.empty()) {
      throw DataError("example " + std::to_string(i) + " references an item outside the catalog of " +
                      std::to_string(catalog_size));
    }
  }
}

}  // namespace dgcl
