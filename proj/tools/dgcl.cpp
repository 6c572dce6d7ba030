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


// Command-line front end: preprocess, synth, train, eval, ablate.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dgcl/checkpoint.hpp"
#include "dgcl/dataio.hpp"
#include "dgcl/harness.hpp"
#include "dgcl/kernels.hpp"
#include "dgcl/synthetic.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace dgcl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

constexpr const char* kVersion = "0.1.0";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Options shared by train, eval and ablate. They live on the top-level
// app so that a --config file can set them without sections.
struct Shared {
  TrainConfig cfg;
  std::string variant = "full";
  std::string discriminator = "dot";
  std::string factor_negatives = "within_view";
  std::vector<std::size_t> ks{10, 20};
  std::size_t repeats = 1;
  std::string dataset;
  bool quiet = false;

  void resolve() {
    cfg.variant = parse_variant(variant);
    cfg.discriminator = parse_discriminator(discriminator);
    cfg.factor_negatives = parse_factor_negatives(factor_negatives);
    cfg.validate();
    if (ks.empty()) throw UsageError("at least one --k is required");
    if (repeats == 0) throw UsageError("--repeats must be positive");
  }
};

void add_shared_options(CLI::App& app, Shared& s) {
  TrainConfig& c = s.cfg;
  auto* g = app.add_option_group("model and training");
  g->add_option("--d", c.d, "embedding width")->capture_default_str();
  g->add_option("-K,--factors", c.factors, "number of latent factors")->capture_default_str();
  g->add_option("--layers", c.layers, "propagation layers")->capture_default_str();
  g->add_option("--theta", c.theta, "satellite edge probability")->capture_default_str();
  g->add_option("--alpha", c.alpha, "item-level share of the contrastive loss")->capture_default_str();
  g->add_option("--beta1", c.beta1, "contrastive loss weight")->capture_default_str();
  g->add_option("--beta2", c.beta2, "independence loss weight")->capture_default_str();
  g->add_option("--lr", c.learning_rate, "Adam learning rate")->capture_default_str();
  g->add_option("--epochs", c.epochs)->capture_default_str();
  g->add_option("--batch-size", c.batch_size)->capture_default_str();
  g->add_option("--seed", c.seed, "run seed")->capture_default_str();
  g->add_option("--variant", s.variant, "full, fcl, star or fp")->capture_default_str();
  g->add_option("--discriminator", s.discriminator, "dot or bilinear")->capture_default_str();
  g->add_option("--factor-negatives", s.factor_negatives, "within_view or cross_view")->capture_default_str();
  g->add_option("--negatives", c.negatives_per_positive, "negatives per positive pair")->capture_default_str();
  g->add_option("--normalize-adjacency", c.normalize_adjacency)->capture_default_str();
  g->add_option("--bias-inside", c.bias_inside, "apply the factor bias inside the sigmoid")->capture_default_str();
  g->add_option("--normalize-attention", c.normalize_attention, "softmax the attention scores")->capture_default_str();
  g->add_option("--share-factor-attention", c.share_factor_attention)->capture_default_str();
  g->add_option("--dropout-edge", c.dropout_edge, "edge drop rate of the star ablation")->capture_default_str();
  g->add_option("--dropout-node", c.dropout_node, "node drop rate of the star ablation")->capture_default_str();
  g->add_option("--early-stopping", c.early_stopping)->capture_default_str();
  g->add_option("--patience", c.patience)->capture_default_str();
  g->add_option("--validation-fraction", c.validation_fraction)->capture_default_str();
  g->add_option("--k", s.ks, "ranking cutoff; repeatable")->capture_default_str();
  g->add_option("--repeats", s.repeats, "runs with seeds seed, seed+1, ...")->capture_default_str();
  g->add_option("--dataset", s.dataset, "dataset label for the metrics CSV");
  g->add_flag("-q,--quiet", s.quiet, "no per-epoch progress on stderr");
}

// ---------------------------------------------------------------------------
// Data directories hold train.jsonl, test.jsonl, catalog.json and stats.json.

struct DataFiles {
  std::string dir;
  std::string train;
  std::string test;
  std::string catalog;

  void add_to(CLI::App& sub, bool need_train) {
    sub.add_option("--data", dir, "directory written by preprocess or synth");
    if (need_train) sub.add_option("--train", train, "training examples (JSON lines)");
    sub.add_option("--test", test, "test examples (JSON lines)");
    sub.add_option("--catalog", catalog, "catalog JSON");
  }

  std::string path(const std::string& explicit_path, const char* name) const {
    if (!explicit_path.empty()) return explicit_path;
    if (dir.empty()) return {};
    const fs::path p = fs::path(dir) / name;
    return fs::exists(p) ? p.string() : std::string();
  }
};

struct LoadedData {
  std::vector<Example> train;
  std::vector<Example> test;
  std::size_t num_items = 0;
  nlohmann::json stats = nlohmann::json::object();
  std::string label;
};

std::size_t max_index_plus_one(const std::vector<Example>& examples) {
  std::size_t n = 0;
  for (const auto& ex : examples) {
    n = std::max(n, ex.target + 1);
    for (ItemIndex i : ex.prefix.items) n = std::max(n, i + 1);
  }
  return n;
}

LoadedData load_data(const DataFiles& files, bool need_train) {
  LoadedData d;
  if (!files.dir.empty() && !fs::is_directory(files.dir)) throw DataError("no such data directory: " + files.dir);
  const std::string train_path = files.path(files.train, "train.jsonl");
  const std::string test_path = files.path(files.test, "test.jsonl");
  const std::string catalog_path = files.path(files.catalog, "catalog.json");
  if (need_train) {
    if (train_path.empty()) throw UsageError("no training data: pass --data DIR or --train FILE");
    d.train = read_examples(train_path);
  }
  if (!test_path.empty()) d.test = read_examples(test_path);
  if (!catalog_path.empty()) {
    d.num_items = read_catalog(catalog_path).size();
  } else {
    d.num_items = std::max(max_index_plus_one(d.train), max_index_plus_one(d.test));
  }
  validate_examples(d.train, d.num_items);
  validate_examples(d.test, d.num_items);
  if (!files.dir.empty()) {
    const fs::path stats = fs::path(files.dir) / "stats.json";
    if (fs::exists(stats)) {
      std::ifstream in(stats);
      d.stats = nlohmann::json::parse(in, nullptr, false);
      if (d.stats.is_discarded()) throw DataError("unreadable " + stats.string());
    }
    d.label = fs::path(files.dir).filename().string();
    if (d.label.empty()) d.label = fs::path(files.dir).parent_path().filename().string();
  }
  d.stats["train_examples"] = d.train.size();
  d.stats["test_examples"] = d.test.size();
  d.stats["catalog_items"] = d.num_items;
  if (d.label.empty()) d.label = "data";
  return d;
}

void write_corpus(const fs::path& out, const std::vector<Session>& train, const std::vector<Session>& test,
                  const ItemCatalog& catalog) {
  fs::create_directories(out);
  write_examples(out / "train.jsonl", prefix_augment(train));
  write_examples(out / "test.jsonl", prefix_augment(test));
  write_catalog(out / "catalog.json", catalog);
  write_stats(out / "stats.json", stats(train, test, catalog));
}

// ---------------------------------------------------------------------------

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DataError("cannot write " + p.string());
  return out;
}

nlohmann::json manifest_base(const std::string& command, const Shared& s, const LoadedData& data) {
  nlohmann::json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["config"] = to_json(s.cfg);
  m["seed"] = s.cfg.seed;
  m["ks"] = s.ks;
  m["corpus"] = data.stats;
  m["dataset"] = data.label;
  m["kernel_isa"] = std::string(kernels::isa_name(kernels::active().isa));
  m["libraries"] = {{"CLI11", CLI11_VERSION},
                    {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                          std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                          std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  return m;
}

void write_manifest(const fs::path& out, nlohmann::json m, std::chrono::steady_clock::time_point start) {
  m["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  open_out(out / "manifest.json") << m.dump(2) << '\n';
}

EpochCallback progress(const Shared& s, const std::string& label) {
  if (s.quiet) return {};
  return [label](const EpochLog& log, const RankingReport* r) {
    std::cerr << label << " epoch " << log.epoch << " L=" << format_double(log.loss.total)
              << " L_p=" << format_double(log.loss.prediction) << " L_c=" << format_double(log.loss.contrastive)
              << " L_d=" << format_double(log.loss.independence);
    if (r != nullptr) {
      for (std::size_t i = 0; i < r->ks.size(); ++i)
        std::cerr << " P@" << r->ks[i] << "=" << format_double(r->overall.precision[i]);
    }
    std::cerr << '\n';
  };
}

// Mean and sample standard deviation over repeats of the final reports.
void write_summary_rows(std::ostream& out, const std::string& dataset, const std::string& variant,
                        const std::vector<RankingReport>& finals) {
  if (finals.size() < 2) return;
  const auto& ks = finals.front().ks;
  const MetricRow RankingReport::*buckets[] = {&RankingReport::overall, &RankingReport::short_sessions,
                                              &RankingReport::long_sessions};
  const char* names[] = {"all", "short", "long"};
  for (const char* stat : {"mean", "std"}) {
    for (int b = 0; b < 3; ++b) {
      out << dataset << ',' << variant << ',' << stat << ',' << finals.front().epoch;
      for (std::size_t i = 0; i < ks.size(); ++i) {
        for (bool mrr : {false, true}) {
          double sum = 0.0, sq = 0.0;
          for (const auto& r : finals) {
            const MetricRow& row = r.*buckets[b];
            const double v = mrr ? row.mrr[i] : row.precision[i];
            sum += v;
            sq += v * v;
          }
          const double n = static_cast<double>(finals.size());
          const double mean = sum / n;
          const double var = std::max(0.0, (sq - n * mean * mean) / (n - 1.0));
          out << ',' << format_double(std::string(stat) == "mean" ? mean : std::sqrt(var));
        }
      }
      out << ',' << names[b] << '\n';
    }
  }
}

// ---------------------------------------------------------------------------

struct PreprocessArgs {
  std::string input, out;
  char delimiter = ',';
  bool header = false;
  PreprocessOptions opts;
  double test_days = 1.0;
  std::optional<double> boundary;
};

int run_preprocess(const PreprocessArgs& a) {
  const auto ingested = ingest(a.input, IngestOptions{a.delimiter, a.header});
  if (ingested.malformed > 0) std::cerr << "warning: skipped " << ingested.malformed << " malformed lines\n";
  const Corpus corpus = preprocess(ingested.events, a.opts);
  const double boundary = a.boundary ? *a.boundary : boundary_from_days(corpus.sessions, a.test_days);
  const SplitResult s = split(corpus, boundary, a.opts.min_session_len);
  for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
  write_corpus(a.out, s.train, s.test, s.catalog);
  const auto st = stats(s.train, s.test, s.catalog);
  std::cerr << "sessions " << st.training_sessions << " train / " << st.test_sessions << " test, items " << st.items
            << ", interactions " << st.interactions << '\n';
  return kExitOk;
}

struct SynthArgs {
  std::string out;
  PlantedSpec spec;
};

int run_synth(const SynthArgs& a) {
  const PlantedCorpus c = make_planted_corpus(a.spec);
  write_corpus(a.out, c.train_sessions, c.test_sessions, c.catalog);
  std::ofstream clusters = open_out(fs::path(a.out) / "clusters.json");
  clusters << nlohmann::json{{"cluster_of", c.cluster_of}}.dump() << '\n';
  return kExitOk;
}

struct RunArgs {
  DataFiles files;
  std::string out;
  std::string checkpoint;
  std::string variants = "full,fcl,star,fp";
};

int run_train(Shared& s, const RunArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  const LoadedData data = load_data(a.files, true);
  const std::string dataset = s.dataset.empty() ? data.label : s.dataset;
  const fs::path out(a.out);
  fs::create_directories(out);
  std::ofstream metrics = open_out(out / "metrics.csv");
  std::ofstream losses = open_out(out / "losses.csv");
  metrics << metrics_csv_header(s.ks) << '\n';
  losses << loss_csv_header() << '\n';

  const std::string variant(to_string(s.cfg.variant));
  nlohmann::json runs = nlohmann::json::array();
  std::vector<RankingReport> finals;
  for (std::size_t r = 0; r < s.repeats; ++r) {
    TrainConfig cfg = s.cfg;
    cfg.seed = s.cfg.seed + r;
    const std::string seed = std::to_string(cfg.seed);
    const TrainResult res = train(cfg, data.train, data.num_items, data.test.empty() ? nullptr : &data.test, s.ks,
                                  progress(s, variant + " seed " + seed));
    for (const auto& log : res.losses) write_loss_row(losses, variant, seed, log);
    for (const auto& rep : res.reports) write_metrics_rows(metrics, dataset, variant, seed, rep);
    if (!res.reports.empty()) finals.push_back(res.reports.back());
    if (r == 0) {
      Model model = res.model;
      save_checkpoint(out / "checkpoint", model.config(), model.params());
    }
    runs.push_back({{"seed", cfg.seed}, {"epochs_run", res.losses.size()}, {"best_epoch", res.best_epoch},
                    {"stopped_early", res.stopped_early}});
  }
  write_summary_rows(metrics, dataset, variant, finals);

  auto m = manifest_base("train", s, data);
  m["repeats"] = s.repeats;
  m["runs"] = runs;
  m["outputs"] = {{"metrics", "metrics.csv"}, {"losses", "losses.csv"}, {"checkpoint", "checkpoint.json"}};
  write_manifest(out, m, start);
  return kExitOk;
}

int run_eval(Shared& s, const RunArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  if (a.checkpoint.empty()) throw UsageError("eval needs --checkpoint STEM");
  Checkpoint ck = load_checkpoint(a.checkpoint);
  LoadedData data = load_data(a.files, false);
  if (data.test.empty()) throw UsageError("no test data: pass --data DIR or --test FILE");
  if (data.num_items != ck.params.num_items()) {
    throw DataError("checkpoint has " + std::to_string(ck.params.num_items()) + " items, data has " +
                    std::to_string(data.num_items));
  }
  const std::string dataset = s.dataset.empty() ? data.label : s.dataset;
  Model model(ck.config, std::move(ck.params));
  const RankingReport report = evaluate(model, data.test, s.ks, ck.config.epochs);
  if (const auto bad = check_report(report); !bad.empty()) throw NumericalError("inconsistent report: " + bad);

  const fs::path out(a.out);
  fs::create_directories(out);
  std::ofstream metrics = open_out(out / "metrics.csv");
  metrics << metrics_csv_header(s.ks) << '\n';
  write_metrics_rows(metrics, dataset, std::string(to_string(model.config().variant)), std::to_string(model.config().seed),
                     report);
  Shared resolved = s;
  resolved.cfg = model.config();
  auto m = manifest_base("eval", resolved, data);
  m["checkpoint"] = a.checkpoint;
  m["outputs"] = {{"metrics", "metrics.csv"}};
  write_manifest(out, m, start);
  return kExitOk;
}

std::vector<Variant> parse_variant_list(const std::string& list) {
  std::vector<Variant> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(parse_variant(item));
  }
  if (out.empty()) throw UsageError("--variants is empty");
  return out;
}

int run_ablate(Shared& s, const RunArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  const LoadedData data = load_data(a.files, true);
  if (data.test.empty()) throw UsageError("ablate needs test data");
  const auto variants = parse_variant_list(a.variants);
  const std::string dataset = s.dataset.empty() ? data.label : s.dataset;
  const fs::path out(a.out);
  fs::create_directories(out);
  std::ofstream metrics = open_out(out / "metrics.csv");
  std::ofstream losses = open_out(out / "losses.csv");
  metrics << metrics_csv_header(s.ks) << '\n';
  losses << loss_csv_header() << '\n';

  nlohmann::json order = nlohmann::json::array();
  for (std::size_t r = 0; r < s.repeats; ++r) {
    TrainConfig cfg = s.cfg;
    cfg.seed = s.cfg.seed + r;
    const std::string seed = std::to_string(cfg.seed);
    for (Variant v : variants) {
      TrainConfig vc = cfg;
      vc.variant = v;
      const std::string name(to_string(v));
      const TrainResult res = train(vc, data.train, data.num_items, &data.test, s.ks, progress(s, name + " seed " + seed));
      for (const auto& log : res.losses) write_loss_row(losses, name, seed, log);
      for (const auto& rep : res.reports) write_metrics_rows(metrics, dataset, name, seed, rep);
      const auto& last = res.reports.back();
      order.push_back({{"variant", name}, {"seed", vc.seed}, {"epoch", last.epoch}, {"metrics", [&] {
                         nlohmann::json j;
                         for (std::size_t i = 0; i < last.ks.size(); ++i) {
                           j["P@" + std::to_string(last.ks[i])] = last.overall.precision[i];
                           j["M@" + std::to_string(last.ks[i])] = last.overall.mrr[i];
                         }
                         return j;
                       }()}});
    }
  }
  auto m = manifest_base("ablate", s, data);
  m["repeats"] = s.repeats;
  m["variants"] = order;  // logged for comparison, never asserted
  m["outputs"] = {{"metrics", "metrics.csv"}, {"losses", "losses.csv"}};
  write_manifest(out, m, start);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Session-based recommendation with dual-granularity contrastive learning"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file of model and training options; flags override it");
  app.set_version_flag("--version", kVersion);

  Shared shared;
  add_shared_options(app, shared);

  PreprocessArgs pre;
  auto* p = app.add_subcommand("preprocess", "raw click events to train/test example files");
  p->add_option("--input", pre.input, "session_id,timestamp,item_id lines")->required();
  p->add_option("--out", pre.out, "output directory")->required();
  p->add_option("--delimiter", pre.delimiter)->capture_default_str();
  p->add_flag("--header", pre.header, "skip the first line");
  p->add_option("--min-item-freq", pre.opts.min_item_freq)->capture_default_str();
  p->add_option("--min-session-len", pre.opts.min_session_len)->capture_default_str();
  p->add_option("--max-length", pre.opts.max_length, "keep the most recent items; 0 keeps all")->capture_default_str();
  p->add_option("--test-days", pre.test_days, "final days of activity used for testing")->capture_default_str();
  p->add_option("--boundary", pre.boundary, "explicit split timestamp; overrides --test-days");

  SynthArgs syn;
  auto* sy = app.add_subcommand("synth", "generate the planted-cluster corpus");
  sy->add_option("--out", syn.out, "output directory")->required();
  sy->add_option("--items", syn.spec.items)->capture_default_str();
  sy->add_option("--clusters", syn.spec.clusters)->capture_default_str();
  sy->add_option("--session-length", syn.spec.session_length)->capture_default_str();
  sy->add_option("--train-examples", syn.spec.train_examples)->capture_default_str();
  sy->add_option("--test-examples", syn.spec.test_examples)->capture_default_str();
  sy->add_option("--corpus-seed", syn.spec.seed)->capture_default_str();

  RunArgs tr, ev, ab;
  auto* t = app.add_subcommand("train", "train, evaluating on the test set after every epoch");
  tr.files.add_to(*t, true);
  t->add_option("--out", tr.out, "output directory")->required();

  auto* e = app.add_subcommand("eval", "evaluate a checkpoint");
  ev.files.add_to(*e, false);
  e->add_option("--checkpoint", ev.checkpoint, "checkpoint stem (without .json/.bin)")->required();
  e->add_option("--out", ev.out, "output directory")->required();

  auto* a = app.add_subcommand("ablate", "train and evaluate several variants");
  ab.files.add_to(*a, true);
  a->add_option("--out", ab.out, "output directory")->required();
  a->add_option("--variants", ab.variants, "comma-separated variant list")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*p) return run_preprocess(pre);
    if (*sy) return run_synth(syn);
    shared.resolve();
    if (*t) return run_train(shared, tr);
    if (*e) return run_eval(shared, ev);
    if (*a) return run_ablate(shared, ab);
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << "\nrun with --help for usage\n";
    return kExitUsage;
  } catch (const std::invalid_argument& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const DataError& err) {
    std::cerr << "data error: " << err.what() << '\n';
    return kExitData;
  } catch (const NumericalError& err) {
    std::cerr << "numerical failure: " << err.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
