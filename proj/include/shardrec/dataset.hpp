#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "shardrec/types.hpp"

namespace shardrec {

/// Implicit-feedback interaction set with user/item index maps and
/// adjacency views. Immutable after construction; mutating operations
/// return a new Dataset.
struct Dataset {
  int num_users = 0;
  int num_items = 0;
  std::vector<Interaction> interactions;          // sorted by (user, item)
  std::vector<std::vector<int>> user_adjacency;   // sorted item lists
  std::vector<std::vector<int>> item_adjacency;   // sorted user lists
  std::vector<std::string> user_ids;              // original tokens (may be empty)
  std::vector<std::string> item_ids;

  std::size_t size() const { return interactions.size(); }
  bool contains(const Interaction& y) const;

  /// Builds adjacency and canonical ordering from a raw interaction list.
  /// Duplicates are removed.
  static Dataset from_interactions(int num_users, int num_items,
                                   std::vector<Interaction> interactions);
};

struct SplitSpec {
  double train_fraction = 0.8;
  double validation_fraction_of_train = 0.1;
  std::uint64_t seed = 0;
};

struct SplitResult {
  Dataset train;
  Dataset validation;
  Dataset test;
};

/// Loads delimiter-separated interaction rows: user<sep>item[<sep>rating[<sep>ts]].
/// Separator is auto-detected from "::", tab, and comma unless given.
/// Indices are assigned in first-appearance order. Rows with a rating below
/// rating_threshold are dropped when a threshold is given.
Dataset load_interactions(const std::filesystem::path& path,
                          const std::optional<std::string>& separator = std::nullopt,
                          std::optional<double> rating_threshold = std::nullopt);

/// Global random split into train/validation/test. Deterministic under seed.
/// Test size = |Y| - floor(|Y| * train_fraction); validation is carved out of
/// the train portion.
SplitResult split(const Dataset& dataset, const SplitSpec& spec);

/// Returns the dataset without y. Throws if y is absent.
Dataset remove_interaction(const Dataset& dataset, const Interaction& y);

/// Returns the dataset with y added. Throws if y is already present.
Dataset add_interaction(const Dataset& dataset, const Interaction& y);

/// Canonical dump: sorted "user\titem" lines, plus "<path>.ids" sidecar with
/// original_id -> index maps when the dataset carries original tokens.
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

}  // namespace shardrec
