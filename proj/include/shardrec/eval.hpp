#pragma once

#include <map>
#include <unordered_set>
#include <vector>

#include "shardrec/dataset.hpp"
#include "shardrec/models.hpp"

namespace shardrec {

struct MetricBundle {
  std::map<int, double> recall;  // cutoff -> value
  std::map<int, double> ndcg;
  int num_users_evaluated = 0;
};

/// All items not in `exclude`, sorted by score(u, .) descending; ties broken
/// by ascending item index.
std::vector<int> rank_items(const EmbeddingTable& table, int u,
                            const std::unordered_set<int>& exclude);

double recall_at_n(const std::vector<int>& ranked, const std::unordered_set<int>& relevant,
                   int n);

double ndcg_at_n(const std::vector<int>& ranked, const std::unordered_set<int>& relevant,
                 int n);

/// Full-ranking protocol: per user, rank all items except the user's train
/// positives, then average Recall@N / NDCG@N over users with nonempty test
/// sets.
MetricBundle evaluate(const EmbeddingTable& table, const Dataset& train, const Dataset& test,
                      const std::vector<int>& cutoffs = {10, 20, 50});

void save_metrics(const MetricBundle& metrics, const std::filesystem::path& path);

}  // namespace shardrec
