/*
 * Copyright 2026 The walkjoin Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "walkjoin/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "walkjoin/encoder.hpp"
#include "walkjoin/graph.hpp"
#include "walkjoin/metrics.hpp"
#include "walkjoin/pipeline.hpp"
#include "walkjoin/query_io.hpp"
#include "walkjoin/sampler.hpp"
#include "walkjoin/store.hpp"
#include "walkjoin/throughput.hpp"

namespace walkjoin::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

/// Value of `--config` in args, if present.
std::string config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

bool given(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

/**
 * Appends the keys of a flat JSON object as flags, skipping any option
 * already on the command line so explicit flags win. Arrays become
 * comma-joined values; `false` drops a flag.
 */
std::vector<std::string> merge_config(std::vector<std::string> args) {
  const std::string path = config_path(args);
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw CLI::ConversionError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
  std::vector<std::string> extra;
  auto text = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    if (key == "config" || given(args, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back(flag);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) joined += (joined.empty() ? "" : ",") + text(v);
      extra.push_back(flag);
      extra.push_back(joined);
    } else if (!value.is_null()) {
      extra.push_back(flag);
      extra.push_back(text(value));
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

int default_threads() { return std::max(1, omp_get_num_procs()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
  if (!out) throw Error("write to " + path.string() + " failed");
}

json scalar(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  try {
    std::size_t used = 0;
    long long i = std::stoll(s, &used);
    if (used == s.size()) return i;
    double d = std::stod(s, &used);
    if (used == s.size()) return d;
  } catch (const std::exception&) {
  }
  return s;
}

/// Every option of `sub` with its final value (given, from --config, or default).
json resolved_config(const CLI::App& sub) {
  json cfg;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    std::vector<std::string> values = opt->results();
    if (values.empty() && !opt->get_default_str().empty()) values.push_back(opt->get_default_str());
    if (values.empty() && opt->get_type_size() == 0) values.push_back("false");
    if (values.empty()) {
      cfg[name] = nullptr;
    } else if (opt->get_expected_max() > 1) {
      json arr = json::array();
      for (const auto& v : values) arr.push_back(scalar(v));
      cfg[name] = arr;
    } else {
      cfg[name] = scalar(values.back());
    }
  }
  return cfg;
}

void write_sidecar(const CLI::App& sub, const fs::path& path, json result, double seconds) {
  json j;
  j["command"] = sub.get_name();
  j["config"] = resolved_config(sub);
  j["result"] = std::move(result);
  j["wall_seconds"] = seconds;
  write_text(path, j.dump(2));
}

std::vector<Query> load_queries(const std::string& path, const SubgraphStore& store, bool labeled) {
  auto in = open_in(path);
  try {
    return read_queries(in, store.id_map(), store.num_nodes(), labeled);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.detail());
  }
}

struct Grouped {
  std::vector<Query> positives;
  std::vector<std::vector<Query>> negatives;
};

/// Ranking metrics pair each positive with the negatives that follow it;
/// AUC only needs the pooled scores.
Grouped group_for_metric(const std::vector<Query>& labeled, const MetricSpec& metric) {
  Grouped g;
  if (metric.is_ranking()) {
    for (RankedGroup& rg : group_ranked(labeled)) {
      g.positives.push_back(std::move(rg.positive));
      g.negatives.push_back(std::move(rg.negatives));
    }
    return g;
  }
  std::vector<Query> negs;
  for (const Query& q : labeled) (q.label == 1 ? g.positives : negs).push_back(q);
  if (g.positives.empty()) throw InvalidArgument("query file has no positives");
  g.negatives.resize(g.positives.size());
  g.negatives.front() = std::move(negs);
  return g;
}

std::size_t negatives_per_positive(const Grouped& g) {
  std::size_t k = 0;
  for (const auto& n : g.negatives) k = std::max(k, n.size());
  return k;
}

// ---- preprocess -----------------------------------------------------------

struct PreprocessArgs {
  std::string input, hyperedges, out, stats, split_dir, sidecar;
  std::uint32_t M = 200, m = 4;
  std::uint64_t seed = 0;
  int threads = default_threads();
  double train_frac = 0.8, query_frac = 0.05;
  std::size_t k_neg = 50;
  bool directed = false;
};

void add_walk_options(CLI::App* sub, std::uint32_t& M, std::uint32_t& m, std::uint64_t& seed,
                      int& threads) {
  sub->add_option("--M", M, "walks per node")->check(CLI::PositiveNumber);
  sub->add_option("--m", m, "steps per walk")->check(CLI::PositiveNumber);
  sub->add_option("--seed", seed, "global seed");
  sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
}

void run_preprocess(const CLI::App& sub, const PreprocessArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  Graph g;
  if (!a.hyperedges.empty()) {
    auto in = open_in(a.hyperedges);
    g = project_hyperedges(in);
  } else {
    auto in = open_in(a.input);
    g = load_edge_list(in, !a.directed);
  }
  std::optional<QuerySplit> split;
  if (!a.split_dir.empty()) {
    split = split_link_queries(g, a.train_frac, a.k_neg, a.seed, a.query_frac);
  }
  const Graph& base = split ? split->train_graph : g;
  const auto tp = std::chrono::steady_clock::now();
  SubgraphStore store = preprocess(base, a.M, a.m, a.seed, a.threads);
  const double preprocess_seconds = seconds_since(tp);
  save_store(store, a.out);

  const StoreStats s = store.stats();
  json stats;
  stats["n"] = s.num_nodes;
  stats["edges"] = base.num_edges();
  stats["M"] = s.num_walks;
  stats["m"] = s.steps;
  stats["table"] = s.table_size;
  stats["walk_slots"] = s.walk_slots;
  stats["dict_entries"] = s.dict_entries;
  stats["dict_slots"] = s.dict_slots;
  stats["walk_bytes"] = s.walk_bytes;
  stats["table_bytes"] = s.table_bytes;
  stats["dict_bytes"] = s.dict_bytes;
  stats["undeduplicated_table_bytes"] = s.undeduplicated_table_bytes;
  stats["dedup_ratio"] =
      s.table_bytes == 0 ? 0.0 : static_cast<double>(s.undeduplicated_table_bytes) / s.table_bytes;
  stats["singleton_fraction"] =
      s.dict_entries == 0 ? 0.0 : static_cast<double>(s.singleton_entries) / s.dict_entries;
  stats["self_loops_dropped"] = g.ingest_report().self_loops;
  stats["duplicates_dropped"] = g.ingest_report().duplicates;
  stats["preprocess_seconds"] = preprocess_seconds;
  stats["threads"] = a.threads;

  if (split) {
    const IdMap& ids = base.id_map();
    const fs::path dir(a.split_dir);
    fs::create_directories(dir);
    auto dump = [&](const std::string& name, const std::vector<Query>& qs) {
      std::ostringstream buf;
      write_queries(buf, ids, qs);
      write_text(dir / name, buf.str());
    };
    std::vector<Query> train = split->train_pos;
    for (Query& q : train) q.label = 1;
    dump("train.txt", train);
    dump("valid.txt", flatten_ranked(split->valid_pos, split->valid_neg));
    dump("test.txt", flatten_ranked(split->test_pos, split->test_neg));
    stats["train_queries"] = split->train_pos.size();
    stats["valid_queries"] = split->valid_pos.size();
    stats["test_queries"] = split->test_pos.size();
  }
  const std::string stats_path = a.stats.empty() ? a.out + ".stats.json" : a.stats;
  write_text(stats_path, stats.dump(2));
  out << stats.dump(2) << '\n';
  write_sidecar(sub, a.sidecar.empty() ? a.out + ".run.json" : a.sidecar, stats, seconds_since(t0));
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  std::string store, train, valid, out, history, metric = "mrr", sidecar;
  TrainConfig cfg;
  bool quiet = false;
};

void run_train(const CLI::App& sub, TrainArgs a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  a.cfg.metric = MetricSpec::parse(a.metric);
  const SubgraphStore store = load_store(a.store);
  QuerySplit split;
  for (Query& q : load_queries(a.train, store, true)) {
    (q.label == 1 ? split.train_pos : split.train_neg).push_back(std::move(q));
  }
  if (!a.valid.empty()) {
    Grouped v = group_for_metric(load_queries(a.valid, store, true), a.cfg.metric);
    split.valid_pos = std::move(v.positives);
    split.valid_neg = std::move(v.negatives);
  }
  TrainResult result = train(store, split, a.cfg, a.quiet ? nullptr : &out);
  save_checkpoint(result.best, a.out);
  const std::string history = history_json(result);
  write_text(a.history.empty() ? a.out + ".history.json" : a.history, history);
  json summary;
  summary["best_epoch"] = result.best_epoch;
  summary["epochs_run"] = result.history.size();
  summary["metric"] = result.metric;
  summary["best_valid_metric"] = result.history.empty()
                                     ? 0.0
                                     : result.history[result.best_epoch - 1].valid_metric;
  summary["parameters"] = result.best.params.parameter_count();
  write_sidecar(sub, a.sidecar.empty() ? a.out + ".run.json" : a.sidecar, summary, seconds_since(t0));
}

// ---- eval / infer ---------------------------------------------------------

struct EvalArgs {
  std::string store, model, queries, metric = "mrr", out, sidecar;
  int threads = default_threads();
};

void run_eval(const CLI::App& sub, const EvalArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const MetricSpec metric = MetricSpec::parse(a.metric);
  const SubgraphStore store = load_store(a.store);
  const Checkpoint ckpt = load_checkpoint(a.model);
  const Grouped g = group_for_metric(load_queries(a.queries, store, true), metric);
  const auto results = score_ranked(store, ckpt.params, g.positives, g.negatives, a.threads);
  const double value = compute_metric(metric, results);
  const std::string report =
      metrics_report_json(metric.name(), value, g.positives.size(), negatives_per_positive(g));
  if (!a.out.empty()) write_text(a.out, report);
  out << report << '\n';
  const std::string sidecar =
      !a.sidecar.empty() ? a.sidecar : (a.out.empty() ? a.model : a.out) + ".eval.run.json";
  write_sidecar(sub, sidecar, json::parse(report), seconds_since(t0));
}

struct InferArgs {
  std::string store, model, queries, out, sidecar;
  bool labeled = false;
  int threads = default_threads();
};

void run_infer(const CLI::App& sub, const InferArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const SubgraphStore store = load_store(a.store);
  const Checkpoint ckpt = load_checkpoint(a.model);
  const std::vector<Query> queries = load_queries(a.queries, store, a.labeled);
  const std::vector<double> scores = infer(store, ckpt.params, queries, a.threads);
  std::ostringstream buf;
  buf.precision(17);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    for (NodeId u : queries[i].nodes) buf << store.id_map().original(u) << ' ';
    buf << scores[i] << '\n';
  }
  if (a.out.empty()) {
    out << buf.str();
  } else {
    write_text(a.out, buf.str());
  }
  json result;
  result["queries"] = queries.size();
  const std::string sidecar =
      !a.sidecar.empty() ? a.sidecar : (a.out.empty() ? a.model : a.out) + ".infer.run.json";
  write_sidecar(sub, sidecar, result, seconds_since(t0));
}

// ---- bench ----------------------------------------------------------------

struct BenchArgs {
  std::string input, out, sidecar;
  std::size_t nodes = 100000, blocks = 10, queries = 20000, repeats = 3, arity = 2;
  double avg_degree = 10.0;
  std::uint32_t M = 50, m = 3;
  std::uint64_t seed = 0;
  std::vector<int> threads{1, 2, 4, 8};
};

Graph bench_graph(const BenchArgs& a) {
  if (!a.input.empty()) {
    auto in = open_in(a.input);
    return load_edge_list(in);
  }
  if (a.blocks < 1 || a.nodes < 2 * a.blocks) throw InvalidArgument("need >= 2 nodes per block");
  const std::size_t npb = a.nodes / a.blocks;
  const double n = static_cast<double>(npb * a.blocks);
  const double p_in = std::min(1.0, 0.8 * a.avg_degree / static_cast<double>(npb - 1));
  const double p_out =
      a.blocks > 1 ? std::min(1.0, 0.2 * a.avg_degree / (n - static_cast<double>(npb))) : 0.0;
  return generate_sbm(a.blocks, npb, p_in, p_out, a.seed);
}

void run_bench(const CLI::App& sub, const BenchArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const Graph g = bench_graph(a);
  const auto queries = random_queries(g.num_nodes(), a.queries, a.arity, a.seed);
  const ThroughputReport report =
      measure_throughput(g, WalkShape{a.M, a.m}, a.seed, queries, a.threads, a.repeats);
  const std::string text = throughput_json(report);
  if (!a.out.empty()) write_text(a.out, text);
  out << text << '\n';
  const std::string sidecar =
      !a.sidecar.empty() ? a.sidecar : (a.out.empty() ? "bench" : a.out) + ".run.json";
  write_sidecar(sub, sidecar, json::parse(text), seconds_since(t0));
}

// ---- gen-synthetic --------------------------------------------------------

struct GenArgs {
  std::string kind = "sbm", out_graph, out_queries, sidecar;
  std::size_t blocks = 2, nodes_per_block = 200, hyperedges = 600, hyperedge_size = 3;
  std::size_t arity = 2, per_class = 200;
  double p_in = 0.05, p_out = 0.001;
  std::uint64_t seed = 0;
};

void run_gen(const CLI::App& sub, const GenArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  Graph g;
  std::ostringstream graph_text;
  if (a.kind == "sbm") {
    g = generate_sbm(a.blocks, a.nodes_per_block, a.p_in, a.p_out, a.seed);
    for (const Edge& e : g.edges()) graph_text << e.first << ' ' << e.second << '\n';
  } else if (a.kind == "hyper") {
    const auto hs =
        generate_block_hyperedges(a.blocks, a.nodes_per_block, a.hyperedges, a.hyperedge_size, a.seed);
    g = project_hyperedges(static_cast<NodeId>(a.blocks * a.nodes_per_block), hs);
    for (const auto& h : hs) {
      for (std::size_t i = 0; i < h.size(); ++i) graph_text << (i ? " " : "") << h[i];
      graph_text << '\n';
    }
  } else {
    throw InvalidArgument("unknown --kind '" + a.kind + "' (expected sbm or hyper)");
  }
  write_text(a.out_graph, graph_text.str());
  json result;
  result["nodes"] = g.num_nodes();
  result["edges"] = g.num_edges();
  if (!a.out_queries.empty()) {
    const auto qs = make_common_neighbor_queries(g, a.arity, a.per_class, a.seed);
    std::ostringstream buf;
    write_queries(buf, g.id_map(), qs);
    write_text(a.out_queries, buf.str());
    result["queries"] = qs.size();
  }
  out << result.dump(2) << '\n';
  write_sidecar(sub, a.sidecar.empty() ? a.out_graph + ".run.json" : a.sidecar, result,
                seconds_since(t0));
}

// ---- store-info -----------------------------------------------------------

struct InfoArgs {
  std::string store, sidecar;
};

void run_store_info(const CLI::App& sub, const InfoArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const SubgraphStore store = load_store(a.store);
  const StoreStats s = store.stats();
  json j;
  j["n"] = s.num_nodes;
  j["M"] = s.num_walks;
  j["m"] = s.steps;
  j["seed"] = store.params().seed;
  j["table"] = s.table_size;
  j["walk_slots"] = s.walk_slots;
  j["dict_entries"] = s.dict_entries;
  j["dict_slots"] = s.dict_slots;
  j["walk_bytes"] = s.walk_bytes;
  j["table_bytes"] = s.table_bytes;
  j["dict_bytes"] = s.dict_bytes;
  j["undeduplicated_table_bytes"] = s.undeduplicated_table_bytes;
  j["dedup_ratio"] =
      s.table_bytes == 0 ? 0.0 : static_cast<double>(s.undeduplicated_table_bytes) / s.table_bytes;
  j["singleton_fraction"] =
      s.dict_entries == 0 ? 0.0 : static_cast<double>(s.singleton_entries) / s.dict_entries;
  j["file_bytes"] = fs::file_size(a.store);
  out << j.dump(2) << '\n';
  write_sidecar(sub, a.sidecar.empty() ? a.store + ".info.json" : a.sidecar, j, seconds_since(t0));
}

void print_error(std::ostream& err, const std::string& kind, const std::string& message) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  err << j.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"walkjoin: walk-based subgraph learning for link and higher-order queries"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  std::string config_file;
  auto add_sub = [&](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_file, "JSON file of option values; command-line flags win");
    return sub;
  };

  PreprocessArgs pre;
  CLI::App* s_pre = add_sub("preprocess", "sample walks and build the subgraph store");
  auto* in_opt = s_pre->add_option("--input", pre.input, "edge list, one 'u v' per line");
  auto* hy_opt = s_pre->add_option("--hyperedges", pre.hyperedges, "hyperedges, one per line");
  in_opt->excludes(hy_opt);
  s_pre->add_option("--out", pre.out, "store file")->required();
  s_pre->add_option("--stats", pre.stats, "stats JSON (default <out>.stats.json)");
  add_walk_options(s_pre, pre.M, pre.m, pre.seed, pre.threads);
  s_pre->add_flag("--directed", pre.directed, "keep edge direction");
  s_pre->add_option("--split-dir", pre.split_dir, "also write train/valid/test link queries here");
  s_pre->add_option("--train-frac", pre.train_frac, "training share of edges")->check(CLI::Range(0.0, 1.0));
  s_pre->add_option("--query-frac", pre.query_frac, "share of training edges used as queries")
      ->check(CLI::Range(0.0, 1.0));
  s_pre->add_option("--k-neg", pre.k_neg, "negatives per validation/test positive");

  TrainArgs tr;
  CLI::App* s_train = add_sub("train", "train the encoder");
  s_train->add_option("--store", tr.store)->required();
  s_train->add_option("--train", tr.train, "labelled training queries")->required();
  s_train->add_option("--valid", tr.valid, "labelled validation queries");
  s_train->add_option("--out", tr.out, "checkpoint file")->required();
  s_train->add_option("--history", tr.history, "history JSON (default <out>.history.json)");
  s_train->add_option("--hidden", tr.cfg.hidden)->check(CLI::PositiveNumber);
  s_train->add_option("--lr", tr.cfg.lr)->check(CLI::PositiveNumber);
  s_train->add_option("--epochs", tr.cfg.max_epochs)->check(CLI::PositiveNumber);
  s_train->add_option("--patience", tr.cfg.patience);
  s_train->add_option("--B1", tr.cfg.batch_capacity, "seed-set node limit")->check(CLI::PositiveNumber);
  s_train->add_option("--B2", tr.cfg.batch_size, "queries per batch")->check(CLI::PositiveNumber);
  s_train->add_option("--k-neg", tr.cfg.k_neg, "sampled negatives per positive")->check(CLI::PositiveNumber);
  s_train->add_option("--initial-seeds", tr.cfg.initial_seeds)->check(CLI::PositiveNumber);
  s_train->add_option("--dropout", tr.cfg.dropout)->check(CLI::Range(0.0, 0.999));
  s_train->add_option("--metric", tr.metric, "mrr, auc or hits@K");
  s_train->add_option("--seed", tr.cfg.seed);
  tr.cfg.threads = default_threads();
  s_train->add_option("--threads", tr.cfg.threads)->check(CLI::PositiveNumber);
  s_train->add_flag("--quiet", tr.quiet, "no per-epoch log");

  EvalArgs ev;
  CLI::App* s_eval = add_sub("eval", "score labelled queries and report a metric");
  s_eval->add_option("--store", ev.store)->required();
  s_eval->add_option("--model", ev.model)->required();
  s_eval->add_option("--queries", ev.queries, "each positive followed by its negatives")->required();
  s_eval->add_option("--metric", ev.metric, "mrr, auc or hits@K");
  s_eval->add_option("--out", ev.out, "metrics JSON");
  s_eval->add_option("--threads", ev.threads)->check(CLI::PositiveNumber);

  InferArgs inf;
  CLI::App* s_infer = add_sub("infer", "score queries");
  s_infer->add_option("--store", inf.store)->required();
  s_infer->add_option("--model", inf.model)->required();
  s_infer->add_option("--queries", inf.queries)->required();
  s_infer->add_flag("--labeled", inf.labeled, "query lines start with a label");
  s_infer->add_option("--out", inf.out, "scores file (default stdout)");
  s_infer->add_option("--threads", inf.threads)->check(CLI::PositiveNumber);

  BenchArgs be;
  CLI::App* s_bench = add_sub("bench", "sampling and joining throughput per thread count");
  s_bench->add_option("--input", be.input, "edge list (default: synthetic SBM)");
  s_bench->add_option("--nodes", be.nodes);
  s_bench->add_option("--blocks", be.blocks);
  s_bench->add_option("--avg-degree", be.avg_degree);
  s_bench->add_option("--queries", be.queries);
  s_bench->add_option("--arity", be.arity);
  s_bench->add_option("--repeats", be.repeats);
  s_bench->add_option("--M", be.M)->check(CLI::PositiveNumber);
  s_bench->add_option("--m", be.m)->check(CLI::PositiveNumber);
  s_bench->add_option("--seed", be.seed);
  s_bench->add_option("--threads", be.threads, "thread counts")->delimiter(',');
  s_bench->add_option("--out", be.out, "throughput JSON");

  GenArgs ge;
  CLI::App* s_gen = add_sub("gen-synthetic", "write a synthetic graph and common-neighbor queries");
  s_gen->add_option("--kind", ge.kind, "sbm or hyper");
  s_gen->add_option("--blocks", ge.blocks);
  s_gen->add_option("--nodes-per-block", ge.nodes_per_block);
  s_gen->add_option("--p-in", ge.p_in);
  s_gen->add_option("--p-out", ge.p_out);
  s_gen->add_option("--hyperedges", ge.hyperedges, "hyperedge count (hyper)");
  s_gen->add_option("--hyperedge-size", ge.hyperedge_size);
  s_gen->add_option("--arity", ge.arity);
  s_gen->add_option("--per-class", ge.per_class);
  s_gen->add_option("--seed", ge.seed);
  s_gen->add_option("--out-graph", ge.out_graph)->required();
  s_gen->add_option("--out-queries", ge.out_queries);

  InfoArgs info;
  CLI::App* s_info = add_sub("store-info", "print store sizes");
  s_info->add_option("--store", info.store)->required();

  for (CLI::App* sub : {s_pre, s_train, s_eval, s_infer, s_bench, s_gen, s_info}) {
    std::string* sidecar = sub == s_pre     ? &pre.sidecar
                           : sub == s_train ? &tr.sidecar
                           : sub == s_eval  ? &ev.sidecar
                           : sub == s_infer ? &inf.sidecar
                           : sub == s_bench ? &be.sidecar
                           : sub == s_gen   ? &ge.sidecar
                                            : &info.sidecar;
    sub->add_option("--sidecar", *sidecar, "run record JSON path");
  }

  try {
    const std::vector<std::string> merged = merge_config(args);
    app.parse(std::vector<std::string>(merged.rbegin(), merged.rend() - (merged.empty() ? 0 : 1)));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", e.what());
    return 2;
  }

  try {
    if (s_pre->parsed()) {
      if (pre.input.empty() && pre.hyperedges.empty()) {
        throw InvalidArgument("one of --input or --hyperedges is required");
      }
      run_preprocess(*s_pre, pre, out);
    } else if (s_train->parsed()) {
      run_train(*s_train, tr, out);
    } else if (s_eval->parsed()) {
      run_eval(*s_eval, ev, out);
    } else if (s_infer->parsed()) {
      run_infer(*s_infer, inf, out);
    } else if (s_bench->parsed()) {
      run_bench(*s_bench, be, out);
    } else if (s_gen->parsed()) {
      run_gen(*s_gen, ge, out);
    } else if (s_info->parsed()) {
      run_store_info(*s_info, info, out);
    }
  } catch (const ParseError& e) {
    print_error(err, "parse", e.what());
    return 1;
  } catch (const FormatError& e) {
    print_error(err, "format", e.what());
    return 1;
  } catch (const InvalidArgument& e) {
    print_error(err, "invalid_argument", e.what());
    return 1;
  } catch (const ResourceError& e) {
    print_error(err, "resource", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error(err, "error", e.what());
    return 1;
  }
  return 0;
}

}  // namespace walkjoin::cli
