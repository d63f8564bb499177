#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "shardrec/dataset.hpp"
#include "shardrec/types.hpp"

namespace shardrec::testsupport {

/// Cluster-structured implicit feedback: users and items fall into aligned
/// latent groups, so embedding-similar users share item preferences. Each
/// user interacts with roughly `per_user` items drawn from its affinity
/// scores via Gumbel top-k.
inline Dataset clustered_dataset(int num_users, int num_items, int groups, int per_user,
                                 std::uint64_t seed, double noise = 0.4,
                                 double sharpness = 0.25) {
  const int latent = 8;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  Mat centers(groups, latent);
  for (int g = 0; g < groups; ++g) {
    for (int j = 0; j < latent; ++j) centers(g, j) = 2.0 * unit(rng);
  }
  Mat users(num_users, latent), items(num_items, latent);
  for (int u = 0; u < num_users; ++u) {
    const int g = u % groups;
    for (int j = 0; j < latent; ++j) users(u, j) = centers(g, j) + noise * unit(rng);
  }
  for (int v = 0; v < num_items; ++v) {
    const int g = v % groups;
    for (int j = 0; j < latent; ++j) items(v, j) = centers(g, j) + noise * unit(rng);
  }

  std::uniform_real_distribution<double> uni(1e-12, 1.0);
  std::vector<Interaction> interactions;
  std::vector<std::pair<double, int>> scored(num_items);
  for (int u = 0; u < num_users; ++u) {
    Vec affinity = items * users.row(u).transpose();
    for (int v = 0; v < num_items; ++v) {
      const double gumbel = -std::log(-std::log(uni(rng)));
      scored[v] = {affinity[v] * sharpness + gumbel, v};
    }
    const int k = std::min(per_user, num_items);
    std::partial_sort(scored.begin(), scored.begin() + k, scored.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
    for (int i = 0; i < k; ++i) interactions.push_back({u, scored[i].second});
  }
  return Dataset::from_interactions(num_users, num_items, std::move(interactions));
}

/// Uniform random interactions without structure.
inline Dataset random_dataset(int num_users, int num_items, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> du(0, num_users - 1), dv(0, num_items - 1);
  std::set<Interaction> unique;
  while (static_cast<int>(unique.size()) < count) {
    unique.insert({du(rng), dv(rng)});
  }
  return Dataset::from_interactions(num_users, num_items,
                                    std::vector<Interaction>(unique.begin(), unique.end()));
}

}  // namespace shardrec::testsupport
