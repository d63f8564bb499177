#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shardrec/dataset.hpp"
#include "shardrec/types.hpp"

namespace shardrec {

enum class ModelKind { bpr, wmf, lightgcn };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

/// Dense user/item factor matrices (rows are entities).
struct EmbeddingTable {
  Mat user_vecs;  // m x d
  Mat item_vecs;  // n x d
  int dim = 0;
};

/// Pre-trained embeddings used only for data partition.
struct PretrainedEmbeddings {
  Mat user_vecs;
  Mat item_vecs;
  int dim = 0;
};

struct TrainConfig {
  ModelKind model = ModelKind::bpr;
  int dim = 64;
  double learning_rate = 0.05;
  int batch_size = 512;
  int max_epochs = 1000;
  int early_stop_patience = 10;
  double l2_reg = 1e-4;
  double negative_weight = 0.05;  // c0 for WMF
  int num_layers = 2;             // LightGCN depth
  int validate_every = 1;         // epochs between validation passes
  std::uint64_t seed = 0;
  bool shard_local_validation = false;  // else: global val restricted to shard users
};

double score(const EmbeddingTable& table, int u, int v);

EmbeddingTable train_bpr(const Dataset& train, const TrainConfig& cfg,
                         const Dataset* val = nullptr);
EmbeddingTable train_wmf(const Dataset& train, const TrainConfig& cfg,
                         const Dataset* val = nullptr);
EmbeddingTable train_lightgcn(const Dataset& train, const TrainConfig& cfg,
                              const Dataset* val = nullptr);

/// Dispatches on cfg.model.
EmbeddingTable train_model(const Dataset& train, const TrainConfig& cfg,
                           const Dataset* val = nullptr);

/// WMF on the full training set, relabelled as partition embeddings.
PretrainedEmbeddings pretrain_for_partition(const Dataset& train, const TrainConfig& cfg);

/// Checkpoint: text header "model d m n seed\n" followed by row-major
/// little-endian float32 user matrix then item matrix; text sidecar at
/// <path>.meta.
void save_table(const EmbeddingTable& table, ModelKind kind, std::uint64_t seed,
                const std::filesystem::path& path);
EmbeddingTable load_table(const std::filesystem::path& path);

struct BprTriple {
  int user;
  int pos;
  int neg;
};

// Loss/gradient primitives shared by the training loops and the gradient
// test-suites.
double bpr_loss(const EmbeddingTable& table, const std::vector<BprTriple>& triples,
                double l2_reg);
void bpr_grad(const EmbeddingTable& table, const std::vector<BprTriple>& triples,
              double l2_reg, Mat& grad_user, Mat& grad_item);

/// Whole-data weighted squared loss via the Gram reformulation:
/// sum_obs (1 - yhat)^2 + c0 * sum_unobs yhat^2 + l2 * (|P|^2 + |Q|^2),
/// evaluated in O(|Y| d + (m + n) d^2).
double wmf_loss(const EmbeddingTable& table, const Dataset& data, double c0, double l2_reg);
void wmf_grad(const EmbeddingTable& table, const Dataset& data, double c0, double l2_reg,
              Mat& grad_user, Mat& grad_item);

/// Mean of layers 0..L of degree-normalized bipartite propagation.
EmbeddingTable propagate_lightgcn(const EmbeddingTable& base, const Dataset& data,
                                  int num_layers);

/// Recall@10 of `table` on val, restricted to users that are present in
/// `train` (used for early stopping).
double validation_recall10(const EmbeddingTable& table, const Dataset& train,
                           const Dataset& val);

}  // namespace shardrec
