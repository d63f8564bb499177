#pragma once

#include <optional>
#include <vector>

#include "shardrec/aggregation.hpp"
#include "shardrec/dataset.hpp"
#include "shardrec/eval.hpp"
#include "shardrec/models.hpp"
#include "shardrec/partition.hpp"

namespace shardrec {

enum class SeedPolicy { reuse_original, fresh };

struct UnlearnRequest {
  Interaction target;
  SeedPolicy seed_policy = SeedPolicy::reuse_original;
};

struct UnlearnReport {
  int shard = -1;
  double shard_retrain_seconds = 0.0;
  double aggregator_retrain_seconds = 0.0;
  double total_seconds = 0.0;
  std::optional<double> full_retrain_seconds;
  MetricBundle utility_after;
};

/// Trained pipeline: global data, partition, per-shard data and submodels,
/// and the aggregator over them. Submodel RNG streams are seeded as
/// base_cfg.seed + shard index.
struct PipelineState {
  Dataset train;
  Dataset validation;  // may be empty (size 0)
  ShardAssignment assignment;
  std::vector<Dataset> shard_data;
  std::vector<EmbeddingTable> submodels;
  Aggregator aggregator;
  EmbeddingTable aggregated;
  TrainConfig base_cfg;
  AggTrainConfig agg_cfg;
  AggMode agg_mode = AggMode::attention;
  int attention_dim = 32;
  double agg_l2 = 1e-5;
};

/// Builds shard datasets, trains all submodels and the aggregator.
PipelineState train_pipeline(const Dataset& train, const Dataset* validation,
                             ShardAssignment assignment, const TrainConfig& base_cfg,
                             const AggTrainConfig& agg_cfg, AggMode agg_mode,
                             int attention_dim = 32, double agg_l2 = 1e-5);

/// Removes the target from the owning shard and the global training data,
/// retrains that submodel from scratch, and retrains the aggregator. All
/// other submodels and the partition are untouched.
UnlearnReport unlearn(PipelineState& state, const UnlearnRequest& req,
                      const Dataset* test = nullptr);

/// Retrains the base model on the full reduced data; timing/utility reference.
UnlearnReport full_retrain_baseline(const PipelineState& state, const UnlearnRequest& req,
                                    const Dataset* test = nullptr);

/// Sequential unlearning. With coalesce_same_shard, consecutive requests that
/// hit the same shard share one shard retrain and one aggregator retrain.
/// A missing target aborts the batch, returning the reports produced so far
/// inside the thrown error's partial results.
std::vector<UnlearnReport> batch_unlearn(PipelineState& state,
                                         const std::vector<UnlearnRequest>& requests,
                                         bool coalesce_same_shard = false,
                                         const Dataset* test = nullptr);

struct BatchUnlearnError : std::runtime_error {
  std::vector<UnlearnReport> partial;
  BatchUnlearnError(const std::string& what, std::vector<UnlearnReport> partial_)
      : std::runtime_error(what), partial(std::move(partial_)) {}
};

}  // namespace shardrec
