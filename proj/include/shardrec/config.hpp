#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "shardrec/aggregation.hpp"
#include "shardrec/models.hpp"
#include "shardrec/partition.hpp"

namespace shardrec {

/// Full pipeline configuration. File format is flat "key value" (or
/// "key=value") lines, '#' comments; unknown keys are rejected. CLI flags
/// override file values which override defaults.
struct PipelineConfig {
  std::string dataset_path;
  std::optional<std::string> separator;
  std::optional<double> rating_threshold;

  double train_fraction = 0.8;
  double validation_fraction_of_train = 0.1;

  ModelKind model = ModelKind::bpr;
  PartitionKind strategy = PartitionKind::interaction;
  AggMode agg_mode = AggMode::attention;

  int num_shards = 10;
  int capacity = 0;  // 0 = auto
  int partition_max_iterations = 50;
  double partition_tolerance = 1e-6;

  // Base model training.
  int dim = 64;
  double learning_rate = 0.05;
  int batch_size = 512;
  int max_epochs = 1000;
  int early_stop_patience = 10;
  double l2_reg = 1e-4;
  double negative_weight = 0.05;
  int num_layers = 2;
  int validate_every = 1;
  bool shard_local_validation = false;

  // Aggregator training.
  int attention_dim = 32;
  int agg_epochs = 10;
  double agg_learning_rate = 0.05;
  std::size_t agg_batch_size = 100000;
  double agg_sample_fraction = 1.0;
  double agg_l2 = 1e-5;
  bool train_transfer = true;

  std::vector<int> cutoffs = {10, 20, 50};
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  int threads = 0;  // 0 = min(K, hardware)
  bool coalesce_same_shard = false;
  bool repartition_on_unlearn = false;

  TrainConfig base_train_config() const;
  AggTrainConfig agg_train_config() const;
  PartitionConfig partition_config() const;

  /// Applies one key/value pair; throws on unknown key or bad value.
  void set(const std::string& key, const std::string& value);
};

PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace shardrec
