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


// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if
// any criterion fails.
//
//   acceptance --cli PATH --workdir DIR [--readme PATH]

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dgcl/contrast.hpp"
#include "dgcl/disentangle.hpp"
#include "dgcl/encoder.hpp"
#include "dgcl/graphs.hpp"
#include "dgcl/harness.hpp"
#include "dgcl/metrics.hpp"
#include "dgcl/predictor.hpp"
#include "dgcl/propagation.hpp"
#include "dgcl/synthetic.hpp"
#include "fixtures.hpp"
#include "model_gradcheck.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace dgcl;
using dgcl::testing::max_abs_diff;
using dgcl::testing::random_matrix;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  double budget_seconds;  // 0 for no time limit
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

// Reports gathered from every training run, checked by criterion 8.
std::vector<RankingReport> g_reports;
std::vector<fs::path> g_metric_files;

// ---------------------------------------------------------------------------

Outcome paper_scale(const fs::path& readme) {
  std::ifstream in(readme);
  if (!in) return {false, "cannot read " + readme.string()};
  std::stringstream ss;
  ss << in.rdbuf();
  const bool stated = ss.str().find("not reproducible") != std::string::npos;
  return {stated, stated ? "paper-scale numbers are documented as not reproducible; reference targets only"
                         : "README lacks the non-reproducibility statement"};
}

// ---------------------------------------------------------------------------

GgnnWeights random_ggnn(std::size_t w, Rng& rng, double scale = 0.6) {
  auto out = zero_ggnn_weights(w);
  out.visit([&](const char*, Matrix& m) { m = random_matrix(m.rows(), m.cols(), rng, scale); });
  return out;
}

AttentionWeights random_attention(std::size_t w, Rng& rng) {
  auto a = zero_attention_weights(w);
  a.visit([&](const char*, Matrix& m) { m = random_matrix(m.rows(), m.cols(), rng, 0.8); });
  return a;
}

Outcome oracle_equivalence() {
  Rng rng(2026);
  std::map<std::string, double> worst;
  auto note = [&](const std::string& what, double err) { worst[what] = std::max(worst[what], err); };

  for (int trial = 0; trial < 5; ++trial) {
    const auto w = random_ggnn(4, rng);
    const auto g = build_session_graph(Session{{0, 1, 2, 1, 3}, 0.0});
    const Matrix x = random_matrix(4, 4, rng);
    Matrix ref = x;
    for (int l = 0; l < 2; ++l) ref = oracle::ggnn_step(ref, g.adj_in, g.adj_out, w);
    note("ggnn", max_abs_diff(run_original(g, x, w, 2), ref));

    const auto aw = random_attention(4, rng);
    const Matrix nodes = random_matrix(4, 4, rng);
    const std::vector<std::size_t> alias{0, 1, 2, 1, 3};
    note("attention", max_abs_diff(encode_item_level(nodes, alias, aw),
                                   Matrix::row_vector(oracle::attend(oracle::gather(nodes, alias), aw))));
    AttentionOptions norm;
    norm.normalize_scores = true;
    note("attention", max_abs_diff(encode_item_level(nodes, alias, aw, norm),
                                   Matrix::row_vector(oracle::attend(oracle::gather(nodes, alias), aw, true))));

    const Matrix catalog = random_matrix(5, 6, rng);
    FactorProjection proj;
    for (int k = 0; k < 2; ++k) {
      proj.weights.push_back(random_matrix(6, 3, rng));
      proj.biases.push_back(random_matrix(1, 3, rng));
    }
    const Matrix si = random_matrix(1, 6, rng);
    const Matrix sf = random_matrix(1, 6, rng);
    const ScoreVector s = score(si, sf, catalog, proj);
    const auto factors = oracle::project(catalog, proj);
    Matrix cf(5, 6);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t j = 0; j < 3; ++j) cf(i, 3 * k + j) = factors[k](i, j);
    const auto yi = oracle::head(std::vector<double>(si.flat().begin(), si.flat().end()), catalog);
    const auto yf = oracle::head(std::vector<double>(sf.flat().begin(), sf.flat().end()), cf);
    oracle::Vec combined(5);
    for (std::size_t i = 0; i < 5; ++i) {
      combined[i] = 0.5 * (yi[i] + yf[i]);
      note("score", std::abs(s.combined(0, i) - combined[i]));
    }
    note("loss", std::abs(prediction_loss(s.combined, 3) - oracle::bce(combined, 3)));

    const Matrix o = random_matrix(4, 4, rng);
    const Matrix a = random_matrix(4, 4, rng);
    const Matrix bil = random_matrix(4, 4, rng);
    ContrastConfig cfg;
    cfg.negatives_per_positive = 2;
    note("item_cl", std::abs(*item_cl_loss(o, a, DiscriminatorForm::kDot, Matrix(), cfg, 40 + trial) -
                             oracle::item_contrast(o, a, 2, 40 + trial)));
    note("item_cl", std::abs(*item_cl_loss(o, a, DiscriminatorForm::kBilinear, bil, cfg, 50 + trial) -
                             oracle::item_contrast(o, a, 2, 50 + trial, &bil)));
    std::vector<Matrix> fo, fa;
    for (int k = 0; k < 3; ++k) {
      fo.push_back(random_matrix(4, 2, rng));
      fa.push_back(random_matrix(4, 2, rng));
    }
    cfg.negatives_per_positive = 1;
    note("factor_cl", std::abs(*factor_cl_loss(fo, fa, DiscriminatorForm::kDot, Matrix(), cfg, 60 + trial) -
                               oracle::factor_contrast(fo, fa, 1, 60 + trial, true)));
    cfg.factor_negatives = FactorNegatives::kCrossView;
    note("factor_cl", std::abs(*factor_cl_loss(fo, fa, DiscriminatorForm::kDot, Matrix(), cfg, 70 + trial) -
                               oracle::factor_contrast(fo, fa, 1, 70 + trial, false)));

    const Matrix dx = random_matrix(7, 3, rng);
    const Matrix dy = random_matrix(7, 2, rng);
    note("dcor", std::abs(dcor(dx, dy) - oracle::dcor(dx, dy)));
  }
  double overall = 0.0;
  std::string detail;
  for (const auto& [name, err] : worst) {
    overall = std::max(overall, err);
    detail += name + "=" + fmt(err) + " ";
  }
  return {overall <= 1e-10, "max abs error " + detail};
}

// ---------------------------------------------------------------------------

Outcome gradient_checks() {
  using namespace dgcl::testing;
  std::vector<TrainConfig> configs{toy_config()};
  {
    auto c = toy_config();
    c.discriminator = DiscriminatorForm::kDot;
    c.factor_negatives = FactorNegatives::kCrossView;
    c.normalize_attention = true;
    c.layers = 1;
    configs.push_back(c);
  }
  {
    auto c = toy_config();
    c.variant = Variant::kStar;
    c.share_factor_attention = true;
    c.bias_inside = true;
    configs.push_back(c);
  }
  double worst = 0.0;
  std::string where;
  std::size_t pairs = 0;
  std::set<std::string> groups;
  for (const auto& cfg : configs) {
    for (const auto& r : check_model_gradients(cfg, kToyItems, toy_batch())) {
      ++pairs;
      groups.insert(r.group);
      if (r.worst >= worst) {
        worst = r.worst;
        where = r.loss + "/" + r.group;
      }
    }
  }
  return {worst < kGradientTolerance && pairs > 0,
          std::to_string(pairs) + " (loss, group) pairs over " + std::to_string(groups.size()) +
              " groups; worst rel err " + fmt(worst) + " at " + where};
}

// ---------------------------------------------------------------------------

Outcome star_equivalence() {
  Rng rng(404);
  std::size_t identical = 0;
  const std::size_t trials = 100;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t len = 1 + rng.below(9);
    std::vector<ItemIndex> items(len);
    for (auto& i : items) i = rng.below(6);
    const auto g = build_session_graph(Session{items, 0.0});
    const std::size_t n = g.node_count();
    const std::size_t w = 2 + rng.below(5);
    const auto weights = random_ggnn(w, rng);
    const Matrix x = random_matrix(n, w, rng);
    const auto star = build_star_graph(g, x, 0.0, rng.next());
    Matrix with_sat(n + 1, w);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < w; ++c) with_sat(i, c) = x(i, c);
    for (std::size_t c = 0; c < w; ++c) with_sat(n, c) = star.satellite_embedding(0, c);
    const std::size_t layers = 1 + rng.below(3);
    if (run_star(star.graph, with_sat, weights, layers) == run_original(g, x, weights, layers)) ++identical;
  }
  return {identical == trials, std::to_string(identical) + "/" + std::to_string(trials) + " sessions bit-identical"};
}

// ---------------------------------------------------------------------------

Outcome dcor_properties() {
  Rng rng(505);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 3 + rng.below(10);
    const Matrix x = random_matrix(n, 1 + rng.below(5), rng, 2.0);
    const Matrix y = random_matrix(n, 1 + rng.below(5), rng, 2.0);
    const double c = 0.1 + 10.0 * rng.uniform();
    Matrix cx = x;
    for (auto& v : cx.flat()) v *= c;
    Matrix constant(n, y.cols());
    for (auto& v : constant.flat()) v = 3.25;
    worst = std::max({worst, std::abs(dcor(x, x) - 1.0), std::abs(dcor(x, cx) - 1.0),
                      std::abs(dcor(x, y) - dcor(y, x)), std::abs(dcor(x, constant)), std::abs(dcor(constant, x))});
  }
  return {worst <= 1e-9, "100 random matrices; worst deviation " + fmt(worst)};
}

// ---------------------------------------------------------------------------

Outcome calibration() {
  const double target = 2.0 * std::log(2.0);
  Rng rng(606);
  double worst = 0.0;
  ContrastConfig cfg;
  for (int t = 0; t < 20; ++t) {
    const Matrix o = random_matrix(5, 4, rng, 3.0);
    const Matrix a = random_matrix(5, 4, rng, 3.0);
    worst = std::max(worst, std::abs(*item_cl_loss(o, a, DiscriminatorForm::kBilinear, Matrix(4, 4), cfg, t) - target));
    const std::vector<Matrix> fo{random_matrix(5, 2, rng)};
    const std::vector<Matrix> fa{random_matrix(5, 2, rng)};
    worst = std::max(worst,
                     std::abs(*factor_cl_loss(fo, fa, DiscriminatorForm::kBilinear, Matrix(2, 2), cfg, t) - target));
  }

  // Through the full model: zero the bilinear discriminators.
  auto mc = dgcl::testing::toy_config();
  ParameterSet params = init_parameters(mc, dgcl::testing::kToyItems, 5);
  params.for_each([](const std::string& channel, const std::string&, Parameter& p) {
    if (channel == "discriminator") p.value.fill(0.0);
  }, true);
  Model model(mc, std::move(params));
  const auto batch = dgcl::testing::toy_batch();
  const std::vector<std::size_t> ids{0, 1, 2};
  ag::Tape tape;
  const auto v = model.forward(tape, batch, ids, 1);
  const double item = v.item_cl.scalar();
  const double factor_per_channel = v.factor_cl.scalar() / static_cast<double>(mc.factors);
  worst = std::max({worst, std::abs(item - target), std::abs(factor_per_channel - target)});
  return {worst <= 1e-9, "L^I_c=" + fmt(item) + ", L^F_c per factor=" + fmt(factor_per_channel) +
                             " vs 2 ln 2; worst deviation " + fmt(worst)};
}

// ---------------------------------------------------------------------------

TrainConfig learnability_config(std::uint64_t seed) {
  TrainConfig cfg;
  cfg.d = 32;
  cfg.epochs = 10;
  cfg.seed = seed;
  return cfg;
}

Outcome learnability() {
  const PlantedCorpus corpus = make_planted_corpus(PlantedSpec{});
  const std::size_t epochs = 10;
  std::vector<double> mean_curve(epochs, 0.0);
  const std::array<std::uint64_t, 3> seeds{1, 2, 3};
  for (std::uint64_t seed : seeds) {
    const TrainResult r = train(learnability_config(seed), corpus.train, corpus.catalog.size(), &corpus.test);
    for (std::size_t e = 0; e < r.reports.size() && e < epochs; ++e) {
      mean_curve[e] += r.reports[e].precision_at(10) / static_cast<double>(seeds.size());
      g_reports.push_back(r.reports[e]);
    }
  }
  std::size_t reached = 0;
  double best = 0.0;
  for (std::size_t e = 0; e < epochs; ++e) {
    best = std::max(best, mean_curve[e]);
    if (reached == 0 && mean_curve[e] >= 0.3) reached = e + 1;
  }
  std::string detail = "seed-mean P@10 by epoch:";
  for (double v : mean_curve) detail += " " + fmt(v);
  detail += reached > 0 ? "; >= 0.3 at epoch " + std::to_string(reached) : "; never reached 0.3";
  return {reached > 0, detail + " (random baseline 0.1)"};
}

// ---------------------------------------------------------------------------

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

// Every metrics row must satisfy M@k <= P@k and P@10 <= P@20.
std::string check_metric_file(const fs::path& p) {
  const auto rows = read_csv(p);
  if (rows.empty()) return p.string() + ": empty";
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 9) return p.string() + ": row " + std::to_string(r) + " has " + std::to_string(row.size()) + " fields";
    double p10, m10, p20, m20;
    if (!parse_number(row[4], p10) || !parse_number(row[5], m10) || !parse_number(row[6], p20) ||
        !parse_number(row[7], m20))
      return p.string() + ": row " + std::to_string(r) + " has a non-numeric metric";
    if (m10 > p10 || m20 > p20 || p10 > p20) return p.string() + ": row " + std::to_string(r) + " breaks ordering";
  }
  return {};
}

Outcome metric_oracle() {
  const auto fx = fixtures::ranking_fixture();
  RankingAccumulator acc({10, 20});
  double hit10 = 0, rr10 = 0, hit20 = 0, rr20 = 0;
  bool ranks_match = true;
  for (const auto& ex : fx) {
    const std::size_t r = fixtures::exhaustive_rank(ex);
    ranks_match = ranks_match && rank_of(ex.scores, ex.target) == r;
    acc.add(rank_of(ex.scores, ex.target), ex.prefix_length);
    if (r <= 10) hit10 += 1.0, rr10 += 1.0 / static_cast<double>(r);
    if (r <= 20) hit20 += 1.0, rr20 += 1.0 / static_cast<double>(r);
  }
  const auto rep = acc.report();
  const bool exact = ranks_match && rep.precision_at(10) == hit10 / 20.0 && rep.mrr_at(10) == rr10 / 20.0 &&
                     rep.precision_at(20) == hit20 / 20.0 && rep.mrr_at(20) == rr20 / 20.0 &&
                     rep.precision_at(10) == 0.6 && rep.precision_at(20) == 17.0 / 20.0;
  if (!exact) return {false, "fixture metrics differ from the exhaustive computation"};

  std::size_t checked = 1;
  if (auto bad = check_report(rep); !bad.empty()) return {false, "fixture report: " + bad};
  for (const auto& r : g_reports) {
    ++checked;
    if (auto bad = check_report(r); !bad.empty()) return {false, "training report: " + bad};
  }
  std::size_t files = 0;
  for (const auto& f : g_metric_files) {
    if (!fs::exists(f)) continue;
    ++files;
    if (auto bad = check_metric_file(f); !bad.empty()) return {false, bad};
  }
  return {true, "fixture exact (P@10=0.6, P@20=0.85); ordering holds on " + std::to_string(checked) + " reports and " +
                    std::to_string(files) + " CSV files"};
}

// ---------------------------------------------------------------------------

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Small settings keep the CLI runs quick; they do not change what is compared.
const char* kCliTraining = " --d 16 --epochs 2 --factors 2 -q";

Outcome ensure_corpus(const std::string& cli, const fs::path& dir) {
  if (fs::exists(dir / "train.jsonl")) return {true, ""};
  const int code = run_command(quote(cli) + " synth --out " + quote(dir) + " --corpus-seed 7");
  return {code == 0, "synth exited " + std::to_string(code)};
}

Outcome determinism(const std::string& cli, const fs::path& work) {
  const fs::path data = work / "planted";
  if (auto c = ensure_corpus(cli, data); !c.pass) return c;
  std::array<fs::path, 2> runs{work / "seed7_a", work / "seed7_b"};
  for (const auto& r : runs) {
    fs::remove_all(r);
    const int code = run_command(quote(cli) + " train --seed 7" + kCliTraining + " --data " + quote(data) + " --out " +
                                 quote(r));
    if (code != 0) return {false, "train exited " + std::to_string(code)};
    g_metric_files.push_back(r / "metrics.csv");
  }
  const bool losses = slurp(runs[0] / "losses.csv") == slurp(runs[1] / "losses.csv");
  const bool metrics = slurp(runs[0] / "metrics.csv") == slurp(runs[1] / "metrics.csv");
  const bool nonempty = !slurp(runs[0] / "losses.csv").empty() && !slurp(runs[0] / "metrics.csv").empty();
  return {losses && metrics && nonempty, std::string("loss logs ") + (losses ? "identical" : "differ") +
                                             ", metrics CSVs " + (metrics ? "identical" : "differ")};
}

Outcome ablation(const std::string& cli, const fs::path& work) {
  const fs::path data = work / "planted";
  if (auto c = ensure_corpus(cli, data); !c.pass) return c;
  const fs::path out = work / "ablate";
  fs::remove_all(out);
  const int code = run_command(quote(cli) + " ablate --seed 3" + kCliTraining + " --data " + quote(data) + " --out " +
                               quote(out) + " --variants full,fcl,star,fp");
  if (code != 0) return {false, "ablate exited " + std::to_string(code)};
  g_metric_files.push_back(out / "metrics.csv");

  const std::vector<std::size_t> ks{10, 20};
  const auto rows = read_csv(out / "metrics.csv");
  std::ifstream header_in(out / "metrics.csv");
  std::string header;
  std::getline(header_in, header);
  if (header != metrics_csv_header(ks)) return {false, "unexpected header: " + header};
  if (auto bad = check_metric_file(out / "metrics.csv"); !bad.empty()) return {false, bad};
  std::map<std::string, std::size_t> per_variant;
  const std::set<std::string> buckets{"all", "short", "long"};
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    double seed, epoch;
    if (row[0].empty() || !parse_number(row[2], seed) || !parse_number(row[3], epoch) || epoch < 1 ||
        buckets.count(row[8]) == 0)
      return {false, "row " + std::to_string(r) + " is malformed"};
    ++per_variant[row[1]];
  }
  const std::set<std::string> expected{"full", "fcl", "star", "fp"};
  std::set<std::string> seen;
  std::string counts;
  for (const auto& [v, n] : per_variant) {
    seen.insert(v);
    counts += v + ":" + std::to_string(n) + " ";
  }
  const auto loss_rows = read_csv(out / "losses.csv");
  const bool loss_ok = !loss_rows.empty() && loss_rows.size() == 1 + 4 * 2;
  const bool pass = seen == expected && loss_ok;
  return {pass, "rows per variant " + counts + (loss_ok ? "; loss log complete" : "; loss log incomplete") +
                    "; ordering recorded in manifest.json"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::string cli;
  std::string workdir = "acceptance_work";
  std::string readme = DGCL_README_PATH;
  app.add_option("--cli", cli, "path to the dgcl executable")->required();
  app.add_option("--workdir", workdir, "scratch directory")->capture_default_str();
  app.add_option("--readme", readme)->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  const fs::path work(workdir);
  fs::create_directories(work);

  const std::vector<Criterion> criteria{
      {1, 0, [&] { return paper_scale(readme); }},
      {2, 10, oracle_equivalence},
      {3, 60, gradient_checks},
      {4, 5, star_equivalence},
      {5, 5, dcor_properties},
      {6, 0, calibration},
      {7, 300, learnability},
      {9, 0, [&] { return determinism(cli, work); }},
      {10, 0, [&] { return ablation(cli, work); }},
      {8, 0, metric_oracle},  // last: it audits the reports produced above
  };

  std::map<int, std::string> lines;
  bool all = true;
  for (const auto& c : criteria) {
    std::cerr << "running criterion " << c.id << "...\n";
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_time = c.budget_seconds <= 0 || secs < c.budget_seconds;
    const bool pass = o.pass && in_time;
    all = all && pass;
    std::ostringstream line;
    line << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << "  " << o.detail << " [" << fmt(secs) << " s";
    if (c.budget_seconds > 0) line << " of " << fmt(c.budget_seconds) << " s";
    line << "]";
    lines[c.id] = line.str();
  }
  for (const auto& [id, line] : lines) std::cout << line << '\n';
  std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << '\n';
  return all ? 0 : 1;
}
