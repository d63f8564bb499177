#include "shardrec/partition.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace shardrec {

namespace {

struct Entry {
  double dist;
  int shard;
  int entity;
};

void sort_entries(std::vector<Entry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.shard != b.shard) return a.shard < b.shard;
    return a.entity < b.entity;
  });
}

/// Greedy capacity-bounded scan of the ascending distance list.
std::vector<int> greedy_assign(const std::vector<Entry>& sorted, int num_entities,
                               int num_shards, int capacity) {
  std::vector<int> assignment(num_entities, -1);
  std::vector<int> counts(num_shards, 0);
  int assigned = 0;
  for (const auto& e : sorted) {
    if (assigned == num_entities) break;
    if (assignment[e.entity] == -1 && counts[e.shard] < capacity) {
      assignment[e.entity] = e.shard;
      ++counts[e.shard];
      ++assigned;
    }
  }
  if (assigned != num_entities) {
    throw std::logic_error("greedy assignment left entities unassigned");
  }
  return assignment;
}

std::vector<int> sample_distinct(int population, int k, std::mt19937_64& rng) {
  std::vector<int> idx(population);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(k);
  return idx;
}

int resolve_capacity(const PartitionConfig& cfg, std::size_t units, const char* what) {
  const int k = cfg.num_shards;
  if (k < 1) throw std::invalid_argument("num_shards must be >= 1");
  int t = cfg.capacity;
  if (t == 0) {
    t = static_cast<int>((units + k - 1) / static_cast<std::size_t>(k));
  }
  if (static_cast<std::size_t>(t) * static_cast<std::size_t>(k) < units) {
    throw std::runtime_error(std::string("infeasible capacity for ") + what +
                             " partition: need t >= " +
                             std::to_string((units + k - 1) / static_cast<std::size_t>(k)));
  }
  return t;
}

/// Shared UBP/IBP engine over one embedding space. Returns entity -> shard.
std::vector<int> balanced_entity_partition(const Mat& vecs, int num_shards, int capacity,
                                           int max_iterations, double tolerance,
                                           std::mt19937_64& rng) {
  const int count = static_cast<int>(vecs.rows());
  Mat anchors(num_shards, vecs.cols());
  const auto anchor_idx = sample_distinct(count, num_shards, rng);
  for (int i = 0; i < num_shards; ++i) anchors.row(i) = vecs.row(anchor_idx[i]);

  std::vector<int> assignment;
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(num_shards) * count);
  for (int iter = 0; iter < max_iterations; ++iter) {
    entries.clear();
    for (int i = 0; i < num_shards; ++i) {
      for (int e = 0; e < count; ++e) {
        entries.push_back({(anchors.row(i) - vecs.row(e)).norm(), i, e});
      }
    }
    sort_entries(entries);
    assignment = greedy_assign(entries, count, num_shards, capacity);

    Mat next = Mat::Zero(num_shards, vecs.cols());
    std::vector<int> sizes(num_shards, 0);
    for (int e = 0; e < count; ++e) {
      next.row(assignment[e]) += vecs.row(e);
      ++sizes[assignment[e]];
    }
    double movement = 0.0;
    for (int i = 0; i < num_shards; ++i) {
      if (sizes[i] == 0) {
        next.row(i) = anchors.row(i);  // empty shard keeps its anchor
      } else {
        next.row(i) /= sizes[i];
      }
      movement = std::max(movement, (next.row(i) - anchors.row(i)).norm());
    }
    anchors = next;
    if (movement < tolerance) break;
  }
  return assignment;
}

ShardAssignment grouped_assignment(PartitionKind kind, const Dataset& train,
                                   const std::vector<int>& entity_shard, int num_shards,
                                   int capacity, std::uint64_t seed) {
  ShardAssignment out;
  out.kind = kind;
  out.num_shards = num_shards;
  out.capacity = capacity;
  out.seed = seed;
  out.num_items = train.num_items;
  out.shards.assign(num_shards, {});
  for (const auto& y : train.interactions) {
    const int entity = (kind == PartitionKind::user) ? y.user : y.item;
    out.shards[entity_shard[entity]].push_back(y);
  }
  out.index_members();
  return out;
}

}  // namespace

std::string to_string(PartitionKind kind) {
  switch (kind) {
    case PartitionKind::user: return "user";
    case PartitionKind::item: return "item";
    case PartitionKind::interaction: return "interaction";
    case PartitionKind::random: return "random";
  }
  throw std::logic_error("bad PartitionKind");
}

PartitionKind partition_kind_from_string(const std::string& name) {
  if (name == "user" || name == "ubp") return PartitionKind::user;
  if (name == "item" || name == "ibp") return PartitionKind::item;
  if (name == "interaction" || name == "inbp") return PartitionKind::interaction;
  if (name == "random") return PartitionKind::random;
  throw std::invalid_argument("unknown partition strategy '" + name + "'");
}

void ShardAssignment::index_members() {
  member_of.clear();
  for (int i = 0; i < num_shards; ++i) {
    for (const auto& y : shards[i]) {
      member_of.emplace(static_cast<std::int64_t>(y.user) * num_items + y.item, i);
    }
  }
}

int ShardAssignment::locate(const Interaction& y) const {
  auto it = member_of.find(static_cast<std::int64_t>(y.user) * num_items + y.item);
  if (it == member_of.end()) {
    throw std::runtime_error("locate_shard: interaction (" + std::to_string(y.user) + "," +
                             std::to_string(y.item) + ") not in any shard");
  }
  return it->second;
}

double user_distance(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                     const Eigen::Ref<const Eigen::RowVectorXd>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("user_distance: dimension mismatch");
  return (a - b).norm();
}

double interaction_distance(const Eigen::Ref<const Eigen::RowVectorXd>& anchor_user,
                            const Eigen::Ref<const Eigen::RowVectorXd>& anchor_item,
                            const Eigen::Ref<const Eigen::RowVectorXd>& user_vec,
                            const Eigen::Ref<const Eigen::RowVectorXd>& item_vec) {
  return user_distance(anchor_user, user_vec) * user_distance(anchor_item, item_vec);
}

ShardAssignment ubp_partition(const Dataset& train, const PretrainedEmbeddings& emb,
                              const PartitionConfig& cfg) {
  if (emb.user_vecs.rows() != train.num_users) {
    throw std::invalid_argument("ubp_partition: embedding row count != num_users");
  }
  const int t = resolve_capacity(cfg, static_cast<std::size_t>(train.num_users), "user");
  std::mt19937_64 rng(cfg.seed);
  auto entity_shard = balanced_entity_partition(emb.user_vecs, cfg.num_shards, t,
                                                cfg.max_iterations, cfg.tolerance, rng);
  return grouped_assignment(PartitionKind::user, train, entity_shard, cfg.num_shards, t,
                            cfg.seed);
}

ShardAssignment ibp_partition(const Dataset& train, const PretrainedEmbeddings& emb,
                              const PartitionConfig& cfg) {
  if (emb.item_vecs.rows() != train.num_items) {
    throw std::invalid_argument("ibp_partition: embedding row count != num_items");
  }
  const int t = resolve_capacity(cfg, static_cast<std::size_t>(train.num_items), "item");
  std::mt19937_64 rng(cfg.seed);
  auto entity_shard = balanced_entity_partition(emb.item_vecs, cfg.num_shards, t,
                                                cfg.max_iterations, cfg.tolerance, rng);
  return grouped_assignment(PartitionKind::item, train, entity_shard, cfg.num_shards, t,
                            cfg.seed);
}

ShardAssignment inbp_partition(const Dataset& train, const PretrainedEmbeddings& emb,
                               const PartitionConfig& cfg) {
  if (emb.user_vecs.rows() != train.num_users || emb.item_vecs.rows() != train.num_items) {
    throw std::invalid_argument("inbp_partition: embedding shape mismatch");
  }
  const int count = static_cast<int>(train.size());
  const int k = cfg.num_shards;
  const int t = resolve_capacity(cfg, train.size(), "interaction");
  std::mt19937_64 rng(cfg.seed);

  Mat anchor_u(k, emb.dim), anchor_i(k, emb.dim);
  const auto anchor_idx = sample_distinct(count, k, rng);
  for (int i = 0; i < k; ++i) {
    const Interaction& y = train.interactions[anchor_idx[i]];
    anchor_u.row(i) = emb.user_vecs.row(y.user);
    anchor_i.row(i) = emb.item_vecs.row(y.item);
  }

  std::vector<int> assignment;
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(k) * count);
  // Per-anchor distance tables to all users / items; the pair distance of an
  // interaction factorizes over them.
  Mat du(k, train.num_users), dv(k, train.num_items);
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    for (int i = 0; i < k; ++i) {
      for (int u = 0; u < train.num_users; ++u) {
        du(i, u) = (anchor_u.row(i) - emb.user_vecs.row(u)).norm();
      }
      for (int v = 0; v < train.num_items; ++v) {
        dv(i, v) = (anchor_i.row(i) - emb.item_vecs.row(v)).norm();
      }
    }
    entries.clear();
    for (int i = 0; i < k; ++i) {
      for (int e = 0; e < count; ++e) {
        const Interaction& y = train.interactions[e];
        const double d = cfg.sum_distance ? du(i, y.user) + dv(i, y.item)
                                          : du(i, y.user) * dv(i, y.item);
        entries.push_back({d, i, e});
      }
    }
    sort_entries(entries);
    assignment = greedy_assign(entries, count, k, t);

    Mat next_u = Mat::Zero(k, emb.dim), next_i = Mat::Zero(k, emb.dim);
    std::vector<int> sizes(k, 0);
    for (int e = 0; e < count; ++e) {
      const Interaction& y = train.interactions[e];
      next_u.row(assignment[e]) += emb.user_vecs.row(y.user);
      next_i.row(assignment[e]) += emb.item_vecs.row(y.item);
      ++sizes[assignment[e]];
    }
    double movement = 0.0;
    for (int i = 0; i < k; ++i) {
      if (sizes[i] == 0) {
        next_u.row(i) = anchor_u.row(i);
        next_i.row(i) = anchor_i.row(i);
      } else {
        next_u.row(i) /= sizes[i];
        next_i.row(i) /= sizes[i];
      }
      movement = std::max(movement, (next_u.row(i) - anchor_u.row(i)).norm());
      movement = std::max(movement, (next_i.row(i) - anchor_i.row(i)).norm());
    }
    anchor_u = next_u;
    anchor_i = next_i;
    if (movement < cfg.tolerance) break;
  }

  ShardAssignment out;
  out.kind = PartitionKind::interaction;
  out.num_shards = k;
  out.capacity = t;
  out.seed = cfg.seed;
  out.num_items = train.num_items;
  out.shards.assign(k, {});
  for (int e = 0; e < count; ++e) {
    out.shards[assignment[e]].push_back(train.interactions[e]);
  }
  out.index_members();
  return out;
}

ShardAssignment random_partition(const Dataset& train, const PartitionConfig& cfg) {
  const int t = resolve_capacity(cfg, train.size(), "random");
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  ShardAssignment out;
  out.kind = PartitionKind::random;
  out.num_shards = cfg.num_shards;
  out.capacity = t;
  out.seed = cfg.seed;
  out.num_items = train.num_items;
  out.shards.assign(cfg.num_shards, {});
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.shards[i % cfg.num_shards].push_back(train.interactions[order[i]]);
  }
  out.index_members();
  return out;
}

ShardAssignment make_partition(PartitionKind kind, const Dataset& train,
                               const PretrainedEmbeddings* emb, const PartitionConfig& cfg) {
  if (kind == PartitionKind::random) return random_partition(train, cfg);
  if (emb == nullptr) {
    throw std::invalid_argument("make_partition: embedding-based strategy needs embeddings");
  }
  switch (kind) {
    case PartitionKind::user: return ubp_partition(train, *emb, cfg);
    case PartitionKind::item: return ibp_partition(train, *emb, cfg);
    case PartitionKind::interaction: return inbp_partition(train, *emb, cfg);
    default: throw std::logic_error("bad PartitionKind");
  }
}

int locate_shard(const ShardAssignment& assignment, const Interaction& y) {
  return assignment.locate(y);
}

void save_assignment(const ShardAssignment& assignment, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_string(assignment.kind) << ' ' << assignment.num_shards << ' '
      << assignment.capacity << ' ' << assignment.seed << '\n';
  for (int i = 0; i < assignment.num_shards; ++i) {
    for (const auto& y : assignment.shards[i]) {
      out << y.user << '\t' << y.item << '\t' << i << '\n';
    }
  }
}

ShardAssignment load_assignment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string kind;
  ShardAssignment out;
  if (!(hs >> kind >> out.num_shards >> out.capacity >> out.seed)) {
    throw std::runtime_error(path.string() + ": bad assignment header");
  }
  out.kind = partition_kind_from_string(kind);
  out.shards.assign(out.num_shards, {});
  int max_item = -1;
  std::string line;
  std::size_t lineno = 1;
  std::vector<std::tuple<int, int, int>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    int u, v, s;
    if (!(ls >> u >> v >> s) || s < 0 || s >= out.num_shards) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": malformed assignment row");
    }
    rows.emplace_back(u, v, s);
    max_item = std::max(max_item, v);
  }
  out.num_items = max_item + 1;
  for (const auto& [u, v, s] : rows) out.shards[s].push_back({u, v});
  out.index_members();
  return out;
}

}  // namespace shardrec
