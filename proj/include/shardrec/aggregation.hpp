#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "shardrec/dataset.hpp"
#include "shardrec/models.hpp"
#include "shardrec/types.hpp"

namespace shardrec {

enum class AggMode { attention, mean, static_weights };

std::string to_string(AggMode mode);
AggMode agg_mode_from_string(const std::string& name);

/// Per-shard affine maps aligning submodel embedding spaces.
struct TransferParams {
  std::vector<Mat> weight;  // K matrices, d x d
  std::vector<Vec> bias;    // K vectors, d
};

struct AttentionParams {
  Mat w1;  // k x d, user attention
  Vec b1, h1;
  Mat w2;  // k x d, item attention
  Vec b2, h2;
  int attention_dim = 32;
};

/// Combines K frozen submodel tables into one predictive table.
struct Aggregator {
  TransferParams transfer;
  AttentionParams attention;
  AggMode mode = AggMode::attention;
  Vec static_logits;  // static mode; weights = softmax(static_logits)
  double l2_reg = 1e-5;
  std::vector<const EmbeddingTable*> submodels;
  int dim = 0;
  bool train_transfer = true;
  bool beta_over_user_rows = false;  // see attention_weights
};

/// Identity transfers, Gaussian(0, 0.01) attention parameters, zero static
/// logits. Submodel tables are referenced, never copied or modified.
Aggregator make_aggregator(std::vector<const EmbeddingTable*> submodels, AggMode mode,
                           int attention_dim, std::uint64_t seed, double l2_reg = 1e-5);

/// Applies shard i's affine map to every user and item row of `table`.
EmbeddingTable transfer_table(const Aggregator& agg, int shard, const EmbeddingTable& table);

/// Softmax attention weights for one entity given its K transferred user rows
/// and K transferred item rows. Beta is computed over the item rows unless
/// agg.beta_over_user_rows is set.
std::pair<Vec, Vec> attention_weights(const Aggregator& agg, const Mat& transferred_user_rows,
                                      const Mat& transferred_item_rows);

/// Weighted sum of the transferred submodel tables, per entity.
EmbeddingTable aggregate(const Aggregator& agg);

/// Gradients for every trainable tensor of an Aggregator.
struct AggregatorGradients {
  std::vector<Mat> transfer_weight;
  std::vector<Vec> transfer_bias;
  Mat w1, w2;
  Vec b1, h1, b2, h2;
  Vec static_logits;

  explicit AggregatorGradients(const Aggregator& agg);
};

/// Base-loss value (BPR pairwise) plus l2 over the trainable parameters,
/// evaluated on an explicit triple list.
double aggregator_loss(const Aggregator& agg, const std::vector<BprTriple>& triples);

AggregatorGradients aggregator_gradients(const Aggregator& agg,
                                         const std::vector<BprTriple>& triples);

struct AggTrainConfig {
  double learning_rate = 0.05;
  int max_epochs = 10;
  int early_stop_patience = 10;
  std::size_t batch_size = 100000;  // triples per update
  double sample_fraction = 1.0;     // fraction of train interactions used per epoch
  std::uint64_t seed = 0;
  ModelKind base = ModelKind::bpr;  // loss family of the base model
  double negative_weight = 0.05;    // c0 when base == wmf
};

/// Trains transfer + attention parameters (or static logits) with the base
/// model's loss over the aggregated table; submodel embeddings stay frozen.
void train_aggregator(Aggregator& agg, const Dataset& train, const AggTrainConfig& cfg,
                      const Dataset* val = nullptr);

void save_aggregator(const Aggregator& agg, const std::filesystem::path& path);

/// Loads parameters; submodel table references must be supplied by the caller.
Aggregator load_aggregator(const std::filesystem::path& path,
                           std::vector<const EmbeddingTable*> submodels);

}  // namespace shardrec
