// Command-line front end: pretrain, partition, train, evaluate, unlearn, bench.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>

#include "shardrec/config.hpp"
#include "shardrec/unlearn.hpp"

namespace fs = std::filesystem;
using namespace shardrec;

namespace {

struct SplitFiles {
  Dataset train, validation, test;
};

void write_meta(const PipelineConfig& cfg, const Dataset& d) {
  std::ofstream out(fs::path(cfg.out_dir) / "meta.txt");
  out << d.num_users << ' ' << d.num_items << '\n';
}

std::pair<int, int> read_meta(const PipelineConfig& cfg) {
  std::ifstream in(fs::path(cfg.out_dir) / "meta.txt");
  int m = 0, n = 0;
  if (!(in >> m >> n)) {
    throw std::runtime_error("missing " + (fs::path(cfg.out_dir) / "meta.txt").string() +
                             " (run pretrain first)");
  }
  return {m, n};
}

// Splits are stored as internal index pairs; entity counts come from meta.txt.
Dataset load_index_dataset(const fs::path& path, int m, int n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " (run pretrain first)");
  std::vector<Interaction> ys;
  int u, v;
  while (in >> u >> v) ys.push_back({u, v});
  return Dataset::from_interactions(m, n, std::move(ys));
}

SplitFiles load_splits(const PipelineConfig& cfg) {
  auto [m, n] = read_meta(cfg);
  fs::path dir(cfg.out_dir);
  return {load_index_dataset(dir / "train.tsv", m, n),
          load_index_dataset(dir / "validation.tsv", m, n),
          load_index_dataset(dir / "test.tsv", m, n)};
}

SplitFiles make_splits(const PipelineConfig& cfg, bool persist) {
  if (cfg.dataset_path.empty()) throw CLI::ValidationError("--dataset or config 'dataset' required");
  Dataset d = load_interactions(cfg.dataset_path, cfg.separator, cfg.rating_threshold);
  auto parts = split(d, {cfg.train_fraction, cfg.validation_fraction_of_train, cfg.seed});
  std::cout << "dataset: " << d.num_users << " users, " << d.num_items << " items, "
            << d.size() << " interactions\n";
  std::cout << "split: " << parts.train.size() << " train / " << parts.validation.size()
            << " validation / " << parts.test.size() << " test\n";
  if (persist) {
    fs::create_directories(cfg.out_dir);
    write_meta(cfg, d);
    fs::path dir(cfg.out_dir);
    save_dataset(parts.train, dir / "train.tsv");
    save_dataset(parts.validation, dir / "validation.tsv");
    save_dataset(parts.test, dir / "test.tsv");
  }
  return {std::move(parts.train), std::move(parts.validation), std::move(parts.test)};
}

PretrainedEmbeddings load_pretrain(const PipelineConfig& cfg) {
  EmbeddingTable t = load_table(fs::path(cfg.out_dir) / "pretrain.bin");
  return {std::move(t.user_vecs), std::move(t.item_vecs), t.dim};
}

void print_shard_histogram(const ShardAssignment& a) {
  std::size_t mx = 0;
  for (const auto& s : a.shards) mx = std::max(mx, s.size());
  std::cout << "shard sizes (capacity " << a.capacity << "):\n";
  for (int i = 0; i < a.num_shards; ++i) {
    const std::size_t len = a.shards[i].size();
    const int bars = mx == 0 ? 0 : static_cast<int>(40.0 * static_cast<double>(len) /
                                                    static_cast<double>(mx));
    std::cout << "  " << std::setw(3) << i << " " << std::setw(8) << len << "  "
              << std::string(bars, '#') << '\n';
  }
}

void print_metrics(const MetricBundle& m) {
  std::cout << std::fixed << std::setprecision(4);
  std::cout << "metric";
  for (const auto& [n, v] : m.recall) std::cout << "\t@" << n;
  std::cout << "\nrecall";
  for (const auto& [n, v] : m.recall) std::cout << '\t' << v;
  std::cout << "\nndcg  ";
  for (const auto& [n, v] : m.ndcg) std::cout << '\t' << v;
  std::cout << "\n(" << m.num_users_evaluated << " users)\n";
  std::cout.unsetf(std::ios::fixed);
}

PipelineState build_pipeline(const PipelineConfig& cfg, const SplitFiles& splits,
                             const ShardAssignment& assignment) {
  return train_pipeline(splits.train, &splits.validation, assignment, cfg.base_train_config(),
                        cfg.agg_train_config(), cfg.agg_mode, cfg.attention_dim, cfg.agg_l2);
}

PipelineState load_pipeline(const PipelineConfig& cfg, const SplitFiles& splits) {
  fs::path dir(cfg.out_dir);
  PipelineState state;
  state.train = splits.train;
  state.validation = splits.validation;
  state.assignment = load_assignment(dir / "assignment.tsv");
  state.base_cfg = cfg.base_train_config();
  state.agg_cfg = cfg.agg_train_config();
  state.agg_mode = cfg.agg_mode;
  state.attention_dim = cfg.attention_dim;
  state.agg_l2 = cfg.agg_l2;

  const int kk = state.assignment.num_shards;
  state.shard_data.reserve(kk);
  state.submodels.reserve(kk);
  for (int i = 0; i < kk; ++i) {
    state.shard_data.push_back(Dataset::from_interactions(
        state.train.num_users, state.train.num_items, state.assignment.shards[i]));
    state.submodels.push_back(load_table(dir / ("submodel_" + std::to_string(i) + ".bin")));
  }
  std::vector<const EmbeddingTable*> tables;
  for (const auto& t : state.submodels) tables.push_back(&t);
  state.aggregator = load_aggregator(dir / "aggregator.bin", std::move(tables));
  state.aggregated = aggregate(state.aggregator);
  return state;
}

void save_pipeline(const PipelineConfig& cfg, const PipelineState& state) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  save_assignment(state.assignment, dir / "assignment.tsv");
  for (std::size_t i = 0; i < state.submodels.size(); ++i) {
    save_table(state.submodels[i], cfg.model, state.base_cfg.seed + i,
               dir / ("submodel_" + std::to_string(i) + ".bin"));
  }
  save_aggregator(state.aggregator, dir / "aggregator.bin");
}

void print_unlearn_report(const UnlearnReport& r) {
  std::cout << std::fixed << std::setprecision(3);
  std::cout << "shard " << r.shard << ": shard retrain " << r.shard_retrain_seconds
            << "s, aggregator retrain " << r.aggregator_retrain_seconds << "s, total "
            << r.total_seconds << "s\n";
  if (r.full_retrain_seconds) {
    std::cout << "full retrain baseline: " << *r.full_retrain_seconds << "s (speedup "
              << *r.full_retrain_seconds / std::max(r.total_seconds, 1e-9) << "x)\n";
  }
  std::cout.unsetf(std::ios::fixed);
}

std::vector<UnlearnRequest> pick_targets(const Dataset& train, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_int_distribution<std::size_t> pick(0, train.size() - 1);
  std::vector<UnlearnRequest> reqs;
  std::set<std::size_t> used;
  while (static_cast<int>(reqs.size()) < count) {
    std::size_t i = pick(rng);
    if (!used.insert(i).second) continue;
    reqs.push_back({train.interactions[i], SeedPolicy::reuse_original});
  }
  return reqs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharded recommender training with exact interaction unlearning"};
  app.require_subcommand(1);

  PipelineConfig cfg;
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file (key value lines)");
    // overrides applied after the config file loads
    sub->add_option_function<std::string>("--dataset",
                                          [&](const std::string& v) { cfg.set("dataset", v); });
    sub->add_option_function<std::string>("--out",
                                          [&](const std::string& v) { cfg.set("out", v); });
    sub->add_option_function<std::string>("--seed",
                                          [&](const std::string& v) { cfg.set("seed", v); });
    sub->add_option_function<std::string>("--shards",
                                          [&](const std::string& v) { cfg.set("shards", v); });
    sub->add_option_function<std::string>(
        "--strategy", [&](const std::string& v) { cfg.set("strategy", v); },
        "user | item | interaction | random");
    sub->add_option_function<std::string>(
        "--agg", [&](const std::string& v) { cfg.set("agg", v); },
        "attention | mean | static");
    sub->add_option_function<std::string>(
        "--model", [&](const std::string& v) { cfg.set("model", v); },
        "bpr | wmf | lightgcn");
    sub->add_option_function<std::string>("--dim",
                                          [&](const std::string& v) { cfg.set("dim", v); });
    sub->add_option_function<std::string>(
        "--max-epochs", [&](const std::string& v) { cfg.set("max_epochs", v); });
    sub->preparse_callback([&](std::size_t) {
      // load the file before option callbacks run, so flags win
      for (int i = 1; i < argc - 1; ++i) {
        if (std::string(argv[i]) == "--config") cfg = load_config(argv[i + 1]);
      }
    });
  };

  auto* cmd_pretrain = app.add_subcommand(
      "pretrain", "Split the dataset and train partition embeddings");
  add_common(cmd_pretrain);

  auto* cmd_partition = app.add_subcommand(
      "partition", "Assign training interactions to shards");
  add_common(cmd_partition);

  auto* cmd_train = app.add_subcommand(
      "train", "Train shard submodels and the aggregator, then evaluate");
  add_common(cmd_train);

  auto* cmd_evaluate = app.add_subcommand("evaluate", "Score saved models on the test split");
  add_common(cmd_evaluate);
  std::string eval_table;
  cmd_evaluate->add_option("--table", eval_table,
                           "checkpoint to evaluate instead of the aggregate");

  auto* cmd_unlearn = app.add_subcommand("unlearn", "Remove interactions and retrain");
  add_common(cmd_unlearn);
  int ul_user = -1, ul_item = -1, ul_count = 0;
  bool ul_baseline = false;
  cmd_unlearn->add_option("--user", ul_user, "user index of the target interaction");
  cmd_unlearn->add_option("--item", ul_item, "item index of the target interaction");
  cmd_unlearn->add_option("--count", ul_count, "unlearn this many random interactions");
  cmd_unlearn->add_flag("--baseline", ul_baseline, "also time a full retrain for comparison");

  auto* cmd_bench = app.add_subcommand(
      "bench", "Sweep shard counts and compare unlearning cost");
  add_common(cmd_bench);
  std::vector<int> bench_shards{5, 10, 20};
  int bench_count = 3;
  cmd_bench->add_option("--shard-counts", bench_shards, "shard counts to sweep");
  cmd_bench->add_option("--count", bench_count, "unlearn requests per setting");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_pretrain->parsed()) {
      SplitFiles splits = make_splits(cfg, true);
      TrainConfig tc = cfg.base_train_config();
      PretrainedEmbeddings emb = pretrain_for_partition(splits.train, tc);
      EmbeddingTable t{std::move(emb.user_vecs), std::move(emb.item_vecs), emb.dim};
      save_table(t, ModelKind::wmf, cfg.seed, fs::path(cfg.out_dir) / "pretrain.bin");
      std::cout << "wrote " << (fs::path(cfg.out_dir) / "pretrain.bin").string() << '\n';
    } else if (cmd_partition->parsed()) {
      SplitFiles splits = load_splits(cfg);
      PretrainedEmbeddings emb;
      const PretrainedEmbeddings* embp = nullptr;
      if (cfg.strategy != PartitionKind::random) {
        emb = load_pretrain(cfg);
        embp = &emb;
      }
      ShardAssignment a =
          make_partition(cfg.strategy, splits.train, embp, cfg.partition_config());
      save_assignment(a, fs::path(cfg.out_dir) / "assignment.tsv");
      print_shard_histogram(a);
      std::cout << "wrote " << (fs::path(cfg.out_dir) / "assignment.tsv").string() << '\n';
    } else if (cmd_train->parsed()) {
      SplitFiles splits = load_splits(cfg);
      ShardAssignment a = load_assignment(fs::path(cfg.out_dir) / "assignment.tsv");
      PipelineState state = build_pipeline(cfg, splits, a);
      save_pipeline(cfg, state);
      MetricBundle m = evaluate(state.aggregated, state.train, splits.test, cfg.cutoffs);
      print_metrics(m);
      save_metrics(m, fs::path(cfg.out_dir) / "metrics.tsv");
    } else if (cmd_evaluate->parsed()) {
      SplitFiles splits = load_splits(cfg);
      EmbeddingTable table;
      if (!eval_table.empty()) {
        table = load_table(eval_table);
      } else {
        PipelineState state = load_pipeline(cfg, splits);
        table = state.aggregated;
      }
      MetricBundle m = evaluate(table, splits.train, splits.test, cfg.cutoffs);
      print_metrics(m);
    } else if (cmd_unlearn->parsed()) {
      SplitFiles splits = load_splits(cfg);
      PipelineState state = load_pipeline(cfg, splits);
      std::vector<UnlearnRequest> reqs;
      if (ul_count > 0) {
        reqs = pick_targets(state.train, ul_count, cfg.seed);
      } else {
        if (ul_user < 0 || ul_item < 0) {
          throw CLI::ValidationError("give --user and --item, or --count");
        }
        reqs.push_back({{ul_user, ul_item}, SeedPolicy::reuse_original});
      }
      for (const auto& req : reqs) {
        std::cout << "unlearn (" << req.target.user << "," << req.target.item << ")\n";
        std::optional<double> baseline_seconds;
        if (ul_baseline) {
          baseline_seconds = full_retrain_baseline(state, req, nullptr).full_retrain_seconds;
        }
        UnlearnReport rep = unlearn(state, req, &splits.test);
        rep.full_retrain_seconds = baseline_seconds;
        print_unlearn_report(rep);
      }
      save_pipeline(cfg, state);
      save_dataset(state.train, fs::path(cfg.out_dir) / "train.tsv");
      if (reqs.back().seed_policy == SeedPolicy::reuse_original) {
        MetricBundle m = evaluate(state.aggregated, state.train, splits.test, cfg.cutoffs);
        print_metrics(m);
      }
    } else if (cmd_bench->parsed()) {
      SplitFiles splits = make_splits(cfg, false);
      TrainConfig tc = cfg.base_train_config();
      PretrainedEmbeddings emb = pretrain_for_partition(splits.train, tc);
      std::cout << "\nshards\tunlearn_s\tfull_retrain_s\trecall@20\n";
      for (int k : bench_shards) {
        PipelineConfig kcfg = cfg;
        kcfg.num_shards = k;
        const PretrainedEmbeddings* embp =
            kcfg.strategy == PartitionKind::random ? nullptr : &emb;
        ShardAssignment a =
            make_partition(kcfg.strategy, splits.train, embp, kcfg.partition_config());
        PipelineState state = build_pipeline(kcfg, splits, a);
        auto reqs = pick_targets(state.train, bench_count, kcfg.seed);
        double unlearn_total = 0.0;
        for (const auto& req : reqs) unlearn_total += unlearn(state, req).total_seconds;
        UnlearnReport base = full_retrain_baseline(state, pick_targets(state.train, 1,
                                                                       kcfg.seed + 1)[0]);
        MetricBundle m = evaluate(state.aggregated, state.train, splits.test, {20});
        std::cout << k << '\t' << std::fixed << std::setprecision(3)
                  << unlearn_total / bench_count << '\t' << *base.full_retrain_seconds << '\t'
                  << std::setprecision(4) << m.recall.at(20) << '\n';
        std::cout.unsetf(std::ios::fixed);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
