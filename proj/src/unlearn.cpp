#include "shardrec/unlearn.hpp"

#include <chrono>
#include <random>

namespace shardrec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void rebind_aggregator(PipelineState& state) {
  for (std::size_t i = 0; i < state.submodels.size(); ++i) {
    state.aggregator.submodels[i] = &state.submodels[i];
  }
}

/// Validation set used while training shard i's submodel.
Dataset submodel_validation(const PipelineState& state, const Dataset& shard_train) {
  if (!state.base_cfg.shard_local_validation) return state.validation;
  // Shard-local: keep only validation interactions whose user appears in the
  // shard's training data.
  std::vector<Interaction> kept;
  for (const auto& y : state.validation.interactions) {
    if (!shard_train.user_adjacency[y.user].empty()) kept.push_back(y);
  }
  return Dataset::from_interactions(state.validation.num_users, state.validation.num_items,
                                    std::move(kept));
}

EmbeddingTable train_submodel(const PipelineState& state, int shard, std::uint64_t seed) {
  TrainConfig cfg = state.base_cfg;
  cfg.seed = seed;
  const Dataset& data = state.shard_data[shard];
  if (data.size() == 0) {
    // A fully emptied shard contributes its initialization only.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 0.01);
    EmbeddingTable t{Mat(state.train.num_users, cfg.dim), Mat(state.train.num_items, cfg.dim),
                     cfg.dim};
    for (int i = 0; i < t.user_vecs.rows(); ++i) {
      for (int j = 0; j < cfg.dim; ++j) t.user_vecs(i, j) = dist(rng);
    }
    for (int i = 0; i < t.item_vecs.rows(); ++i) {
      for (int j = 0; j < cfg.dim; ++j) t.item_vecs(i, j) = dist(rng);
    }
    return t;
  }
  Dataset val = submodel_validation(state, data);
  return train_model(data, cfg, val.size() > 0 ? &val : nullptr);
}

void retrain_aggregator(PipelineState& state, std::uint64_t seed) {
  std::vector<const EmbeddingTable*> tables;
  tables.reserve(state.submodels.size());
  for (const auto& t : state.submodels) tables.push_back(&t);
  state.aggregator = make_aggregator(std::move(tables), state.agg_mode, state.attention_dim,
                                     seed, state.agg_l2);
  if (state.agg_mode != AggMode::mean) {
    AggTrainConfig cfg = state.agg_cfg;
    cfg.seed = seed;
    cfg.base = state.base_cfg.model;
    cfg.negative_weight = state.base_cfg.negative_weight;
    train_aggregator(state.aggregator, state.train, cfg,
                     state.validation.size() > 0 ? &state.validation : nullptr);
  }
  state.aggregated = aggregate(state.aggregator);
}

std::uint64_t pick_seed(SeedPolicy policy, std::uint64_t original) {
  if (policy == SeedPolicy::reuse_original) return original;
  return std::random_device{}();
}

}  // namespace

PipelineState train_pipeline(const Dataset& train, const Dataset* validation,
                             ShardAssignment assignment, const TrainConfig& base_cfg,
                             const AggTrainConfig& agg_cfg, AggMode agg_mode,
                             int attention_dim, double agg_l2) {
  PipelineState state;
  state.train = train;
  if (validation != nullptr) state.validation = *validation;
  state.assignment = std::move(assignment);
  state.base_cfg = base_cfg;
  state.agg_cfg = agg_cfg;
  state.agg_mode = agg_mode;
  state.attention_dim = attention_dim;
  state.agg_l2 = agg_l2;

  const int kk = state.assignment.num_shards;
  state.shard_data.reserve(kk);
  for (int i = 0; i < kk; ++i) {
    state.shard_data.push_back(Dataset::from_interactions(
        train.num_users, train.num_items, state.assignment.shards[i]));
  }
  state.submodels.reserve(kk);
  for (int i = 0; i < kk; ++i) {
    state.submodels.push_back(
        train_submodel(state, i, base_cfg.seed + static_cast<std::uint64_t>(i)));
  }
  retrain_aggregator(state, agg_cfg.seed);
  return state;
}

UnlearnReport unlearn(PipelineState& state, const UnlearnRequest& req, const Dataset* test) {
  rebind_aggregator(state);
  if (!state.train.contains(req.target)) {
    throw std::runtime_error("unlearn: target (" + std::to_string(req.target.user) + "," +
                             std::to_string(req.target.item) + ") not in training data");
  }
  const int shard = state.assignment.locate(req.target);

  UnlearnReport report;
  report.shard = shard;

  state.shard_data[shard] = remove_interaction(state.shard_data[shard], req.target);
  state.train = remove_interaction(state.train, req.target);

  auto t0 = Clock::now();
  state.submodels[shard] = train_submodel(
      state, shard,
      pick_seed(req.seed_policy, state.base_cfg.seed + static_cast<std::uint64_t>(shard)));
  report.shard_retrain_seconds = seconds_since(t0);

  auto t1 = Clock::now();
  retrain_aggregator(state, pick_seed(req.seed_policy, state.agg_cfg.seed));
  report.aggregator_retrain_seconds = seconds_since(t1);
  report.total_seconds = report.shard_retrain_seconds + report.aggregator_retrain_seconds;

  if (test != nullptr && test->size() > 0) {
    report.utility_after = evaluate(state.aggregated, state.train, *test);
  }
  return report;
}

UnlearnReport full_retrain_baseline(const PipelineState& state, const UnlearnRequest& req,
                                    const Dataset* test) {
  if (!state.train.contains(req.target)) {
    throw std::runtime_error("full_retrain_baseline: target not in training data");
  }
  Dataset reduced = remove_interaction(state.train, req.target);
  TrainConfig cfg = state.base_cfg;
  cfg.seed = pick_seed(req.seed_policy, state.base_cfg.seed);

  UnlearnReport report;
  auto t0 = Clock::now();
  EmbeddingTable table = train_model(
      reduced, cfg, state.validation.size() > 0 ? &state.validation : nullptr);
  report.full_retrain_seconds = seconds_since(t0);
  report.total_seconds = *report.full_retrain_seconds;
  if (test != nullptr && test->size() > 0) {
    report.utility_after = evaluate(table, reduced, *test);
  }
  return report;
}

std::vector<UnlearnReport> batch_unlearn(PipelineState& state,
                                         const std::vector<UnlearnRequest>& requests,
                                         bool coalesce_same_shard, const Dataset* test) {
  rebind_aggregator(state);
  std::vector<UnlearnReport> reports;
  std::size_t idx = 0;
  while (idx < requests.size()) {
    if (!coalesce_same_shard) {
      try {
        reports.push_back(unlearn(state, requests[idx], test));
      } catch (const std::runtime_error& e) {
        throw BatchUnlearnError(std::string("batch_unlearn aborted at request ") +
                                    std::to_string(idx) + ": " + e.what(),
                                std::move(reports));
      }
      ++idx;
      continue;
    }
    // Collect the run of consecutive requests hitting one shard.
    try {
      if (!state.train.contains(requests[idx].target)) {
        throw std::runtime_error("target not in training data");
      }
      const int shard = state.assignment.locate(requests[idx].target);
      std::size_t end = idx;
      while (end < requests.size() && state.train.contains(requests[end].target) &&
             state.assignment.locate(requests[end].target) == shard) {
        state.shard_data[shard] = remove_interaction(state.shard_data[shard],
                                                     requests[end].target);
        state.train = remove_interaction(state.train, requests[end].target);
        ++end;
      }
      UnlearnReport report;
      report.shard = shard;
      auto t0 = Clock::now();
      state.submodels[shard] = train_submodel(
          state, shard,
          pick_seed(requests[idx].seed_policy,
                    state.base_cfg.seed + static_cast<std::uint64_t>(shard)));
      report.shard_retrain_seconds = seconds_since(t0);
      auto t1 = Clock::now();
      retrain_aggregator(state, pick_seed(requests[idx].seed_policy, state.agg_cfg.seed));
      report.aggregator_retrain_seconds = seconds_since(t1);
      report.total_seconds =
          report.shard_retrain_seconds + report.aggregator_retrain_seconds;
      if (test != nullptr && test->size() > 0) {
        report.utility_after = evaluate(state.aggregated, state.train, *test);
      }
      reports.push_back(std::move(report));
      idx = end;
    } catch (const BatchUnlearnError&) {
      throw;
    } catch (const std::runtime_error& e) {
      throw BatchUnlearnError(std::string("batch_unlearn aborted at request ") +
                                  std::to_string(idx) + ": " + e.what(),
                              std::move(reports));
    }
  }
  return reports;
}

}  // namespace shardrec
