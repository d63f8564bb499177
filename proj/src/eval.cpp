#include "shardrec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace shardrec {

std::vector<int> rank_items(const EmbeddingTable& table, int u,
                            const std::unordered_set<int>& exclude) {
  const int n = static_cast<int>(table.item_vecs.rows());
  if (u < 0 || u >= table.user_vecs.rows()) throw std::out_of_range("rank_items: bad user");
  Vec scores = table.item_vecs * table.user_vecs.row(u).transpose();
  std::vector<int> items;
  items.reserve(n);
  for (int v = 0; v < n; ++v) {
    if (!exclude.count(v)) items.push_back(v);
  }
  std::sort(items.begin(), items.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  return items;
}

double recall_at_n(const std::vector<int>& ranked, const std::unordered_set<int>& relevant,
                   int n) {
  if (relevant.empty()) throw std::invalid_argument("recall_at_n: empty relevant set");
  int hits = 0;
  const int top = std::min<int>(n, static_cast<int>(ranked.size()));
  for (int r = 0; r < top; ++r) {
    if (relevant.count(ranked[r])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(relevant.size());
}

double ndcg_at_n(const std::vector<int>& ranked, const std::unordered_set<int>& relevant,
                 int n) {
  if (relevant.empty()) throw std::invalid_argument("ndcg_at_n: empty relevant set");
  double dcg = 0.0;
  const int top = std::min<int>(n, static_cast<int>(ranked.size()));
  for (int r = 0; r < top; ++r) {
    if (relevant.count(ranked[r])) dcg += 1.0 / std::log2(r + 2.0);
  }
  const int ideal = std::min<int>(n, static_cast<int>(relevant.size()));
  double idcg = 0.0;
  for (int r = 0; r < ideal; ++r) idcg += 1.0 / std::log2(r + 2.0);
  return dcg / idcg;
}

MetricBundle evaluate(const EmbeddingTable& table, const Dataset& train, const Dataset& test,
                      const std::vector<int>& cutoffs) {
  if (test.size() == 0) throw std::runtime_error("evaluate: empty test set");
  if (cutoffs.empty()) throw std::invalid_argument("evaluate: no cutoffs");
  for (int n : cutoffs) {
    if (n <= 0) throw std::invalid_argument("evaluate: cutoffs must be positive");
  }
  MetricBundle out;
  for (int n : cutoffs) {
    out.recall[n] = 0.0;
    out.ndcg[n] = 0.0;
  }
  const int m = static_cast<int>(table.user_vecs.rows());
  for (int u = 0; u < m; ++u) {
    if (u >= test.num_users || test.user_adjacency[u].empty()) continue;
    std::unordered_set<int> exclude;
    if (u < train.num_users) {
      exclude.insert(train.user_adjacency[u].begin(), train.user_adjacency[u].end());
    }
    std::unordered_set<int> relevant(test.user_adjacency[u].begin(),
                                     test.user_adjacency[u].end());
    auto ranked = rank_items(table, u, exclude);
    for (int n : cutoffs) {
      out.recall[n] += recall_at_n(ranked, relevant, n);
      out.ndcg[n] += ndcg_at_n(ranked, relevant, n);
    }
    ++out.num_users_evaluated;
  }
  if (out.num_users_evaluated == 0) throw std::runtime_error("evaluate: no evaluable users");
  for (int n : cutoffs) {
    out.recall[n] /= out.num_users_evaluated;
    out.ndcg[n] /= out.num_users_evaluated;
  }
  return out;
}

void save_metrics(const MetricBundle& metrics, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(6);
  for (const auto& [n, v] : metrics.recall) out << "recall\t" << n << '\t' << v << '\n';
  for (const auto& [n, v] : metrics.ndcg) out << "ndcg\t" << n << '\t' << v << '\n';
  out << "users\t-\t" << metrics.num_users_evaluated << '\n';
}

}  // namespace shardrec
