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
#include <filesystem>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace dgcl {

using ItemIndex = std::size_t;

// Raised for unreadable inputs and for filters that leave nothing behind.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RawEvent {
  std::string session_id;
  double timestamp = 0.0;  // seconds since epoch
  std::string item_id;
};

struct Session {
  std::vector<ItemIndex> items;
  double last_timestamp = 0.0;

  std::size_t length() const { return items.size(); }
};

// Bijection between raw item ids and dense indices [0, N).
class ItemCatalog {
 public:
  ItemCatalog() = default;
  explicit ItemCatalog(std::vector<std::string> raw_ids);

  std::size_t size() const { return raw_ids_.size(); }
  // Returns the existing index if the id is already present.
  ItemIndex add(const std::string& raw_id);
  bool contains(const std::string& raw_id) const { return index_.count(raw_id) != 0; }
  ItemIndex index_of(const std::string& raw_id) const;
  const std::string& raw_id(ItemIndex index) const { return raw_ids_.at(index); }
  const std::vector<std::string>& raw_ids() const { return raw_ids_; }

 private:
  std::vector<std::string> raw_ids_;
  std::unordered_map<std::string, ItemIndex> index_;
};

// A prefix of a session and the item that followed it.
struct Example {
  Session prefix;
  ItemIndex target = 0;
};

struct CorpusStats {
  std::size_t interactions = 0;
  std::size_t training_sessions = 0;
  std::size_t test_sessions = 0;
  std::size_t items = 0;
  double avg_length = 0.0;
};

struct IngestOptions {
  char delimiter = ',';
  bool header = false;
};

struct IngestResult {
  std::vector<RawEvent> events;
  std::size_t malformed = 0;
};

// Reads `session_id,timestamp,item_id` lines. Extra trailing fields are
// ignored; lines that do not parse are counted in `malformed`.
IngestResult ingest(const std::filesystem::path& path, const IngestOptions& options = {});
IngestResult ingest_stream(std::istream& in, const IngestOptions& options = {});

struct PreprocessOptions {
  std::size_t min_item_freq = 5;
  std::size_t min_session_len = 2;
  // Keep only the most recent max_length items of each session; 0 keeps all.
  std::size_t max_length = 0;
};

struct Corpus {
  std::vector<Session> sessions;
  ItemCatalog catalog;
};

// Groups events into time-ordered sessions and filters rare items and short
// sessions until neither filter removes anything more.
Corpus preprocess(const std::vector<RawEvent>& events, const PreprocessOptions& options = {});

// Inverse of preprocess's grouping: one event per session item, timestamps
// ending at the session's last_timestamp.
std::vector<RawEvent> to_events(const std::vector<Session>& sessions, const ItemCatalog& catalog);

struct SplitResult {
  std::vector<Session> train;
  std::vector<Session> test;
  ItemCatalog catalog;  // training items only, re-indexed densely
  std::vector<std::string> warnings;
};

// Sessions whose last event is strictly after `boundary` form the test side.
// Test items unseen in training are removed and short test sessions dropped.
SplitResult split(const Corpus& corpus, double boundary, std::size_t min_session_len = 2);

// Boundary that puts the final `days` days of activity on the test side.
double boundary_from_days(const std::vector<Session>& sessions, double days);

std::vector<Example> prefix_augment(const std::vector<Session>& sessions);

CorpusStats stats(const std::vector<Session>& train, const std::vector<Session>& test, const ItemCatalog& catalog);

// JSON-lines example files: {"session":[...],"target":k} per line.
void write_examples(const std::filesystem::path& path, const std::vector<Example>& examples);
std::vector<Example> read_examples(const std::filesystem::path& path);

// Catalog sidecar: {"items":["raw id of index 0", ...]}.
void write_catalog(const std::filesystem::path& path, const ItemCatalog& catalog);
ItemCatalog read_catalog(const std::filesystem::path& path);

void write_stats(const std::filesystem::path& path, const CorpusStats& s);

// Throws DataError if any prefix item or target is outside the catalog.
void validate_examples(const std::vector<Example>& examples, std::size_t catalog_size);

}  // namespace dgcl
