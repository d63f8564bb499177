#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "shardrec/dataset.hpp"
#include "shardrec/models.hpp"
#include "shardrec/types.hpp"

namespace shardrec {

enum class PartitionKind { user, item, interaction, random };

std::string to_string(PartitionKind kind);
PartitionKind partition_kind_from_string(const std::string& name);

struct PartitionConfig {
  int num_shards = 10;
  int capacity = 0;  // 0: auto = ceil(units / num_shards)
  int max_iterations = 50;
  std::uint64_t seed = 0;
  double tolerance = 1e-6;     // max anchor row movement considered "unchanged"
  bool sum_distance = false;   // experimental: sum instead of product in Eq.-style pair distance
};

struct ShardAssignment {
  PartitionKind kind = PartitionKind::random;
  int num_shards = 0;
  int capacity = 0;
  std::uint64_t seed = 0;
  int num_items = 0;  // key stride for member_of
  std::vector<std::vector<Interaction>> shards;
  std::unordered_map<std::int64_t, int> member_of;

  void index_members();
  int locate(const Interaction& y) const;  // throws if unknown
};

/// Euclidean distance between two embedding rows.
double user_distance(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                     const Eigen::Ref<const Eigen::RowVectorXd>& b);

/// Product of the user-side and item-side Euclidean distances.
double interaction_distance(const Eigen::Ref<const Eigen::RowVectorXd>& anchor_user,
                            const Eigen::Ref<const Eigen::RowVectorXd>& anchor_item,
                            const Eigen::Ref<const Eigen::RowVectorXd>& user_vec,
                            const Eigen::Ref<const Eigen::RowVectorXd>& item_vec);

/// Balanced partition keyed on user embedding similarity: a user's whole
/// interaction set lands in one shard; capacity is counted in users.
ShardAssignment ubp_partition(const Dataset& train, const PretrainedEmbeddings& emb,
                              const PartitionConfig& cfg);

/// Item-side analogue of ubp_partition.
ShardAssignment ibp_partition(const Dataset& train, const PretrainedEmbeddings& emb,
                              const PartitionConfig& cfg);

/// Balanced partition of individual interactions with (user-center,
/// item-center) anchor pairs; capacity is counted in interactions.
ShardAssignment inbp_partition(const Dataset& train, const PretrainedEmbeddings& emb,
                               const PartitionConfig& cfg);

/// Seeded shuffle dealt round-robin; shard sizes balanced within 1.
ShardAssignment random_partition(const Dataset& train, const PartitionConfig& cfg);

ShardAssignment make_partition(PartitionKind kind, const Dataset& train,
                               const PretrainedEmbeddings* emb, const PartitionConfig& cfg);

int locate_shard(const ShardAssignment& assignment, const Interaction& y);

/// Text format: header "kind K t seed", then "user\titem\tshard" lines.
void save_assignment(const ShardAssignment& assignment, const std::filesystem::path& path);
ShardAssignment load_assignment(const std::filesystem::path& path);

}  // namespace shardrec
