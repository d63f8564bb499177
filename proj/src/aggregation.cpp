#include "shardrec/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace shardrec {

namespace {

constexpr double kAdagradEps = 1e-8;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Vec softmax(const Vec& x) {
  const double mx = x.maxCoeff();
  Vec e = (x.array() - mx).exp();
  return e / e.sum();
}

/// Row-wise softmax of a B x K score matrix.
Mat softmax_rows(const Mat& scores) {
  Mat out(scores.rows(), scores.cols());
  for (int r = 0; r < scores.rows(); ++r) {
    Vec row = scores.row(r).transpose();
    out.row(r) = softmax(row).transpose();
  }
  return out;
}

struct SideCache {
  std::vector<Mat> transferred;  // K matrices, B x d
  std::vector<Mat> hidden;       // K matrices, B x k, post-ReLU
  Mat weights;                   // B x K
};

using AggGrads = AggregatorGradients;

/// Forward pass over gathered base rows (one B x d matrix per shard).
/// `user_side` selects the (W1, b1, h1) vs (W2, b2, h2) attention head.
SideCache forward_side(const Aggregator& agg, const std::vector<Mat>& base_rows,
                       bool user_side, Mat& aggregated) {
  const int kk = static_cast<int>(agg.submodels.size());
  const int rows = static_cast<int>(base_rows[0].rows());
  SideCache cache;
  cache.transferred.resize(kk);
  for (int i = 0; i < kk; ++i) {
    cache.transferred[i] = base_rows[i] * agg.transfer.weight[i].transpose();
    cache.transferred[i].rowwise() += agg.transfer.bias[i].transpose();
  }
  if (agg.mode == AggMode::attention) {
    const Mat& w = user_side ? agg.attention.w1 : agg.attention.w2;
    const Vec& b = user_side ? agg.attention.b1 : agg.attention.b2;
    const Vec& h = user_side ? agg.attention.h1 : agg.attention.h2;
    Mat scores(rows, kk);
    cache.hidden.resize(kk);
    for (int i = 0; i < kk; ++i) {
      Mat z = cache.transferred[i] * w.transpose();
      z.rowwise() += b.transpose();
      cache.hidden[i] = z.cwiseMax(0.0);
      scores.col(i) = cache.hidden[i] * h;
    }
    cache.weights = softmax_rows(scores);
  } else if (agg.mode == AggMode::static_weights) {
    Vec w = softmax(agg.static_logits);
    cache.weights = w.transpose().replicate(rows, 1);
  } else {
    cache.weights = Mat::Constant(rows, kk, 1.0 / kk);
  }
  aggregated = Mat::Zero(rows, agg.dim);
  for (int i = 0; i < kk; ++i) {
    aggregated += cache.weights.col(i).asDiagonal() * cache.transferred[i];
  }
  return cache;
}

/// Backpropagates d(loss)/d(aggregated rows) into the trainable tensors.
void backward_side(const Aggregator& agg, const SideCache& cache,
                   const std::vector<Mat>& base_rows, const Mat& grad_aggregated,
                   bool user_side, AggGrads& grads) {
  const int kk = static_cast<int>(agg.submodels.size());
  const int rows = static_cast<int>(grad_aggregated.rows());

  Mat dot(rows, kk);  // per-row <grad, transferred_i>
  for (int i = 0; i < kk; ++i) {
    dot.col(i) = (grad_aggregated.array() * cache.transferred[i].array()).rowwise().sum();
  }

  Mat dscore;
  const bool learned_weights = agg.mode != AggMode::mean;
  if (learned_weights) {
    // softmax backward, row-wise
    Vec rowsum = (cache.weights.array() * dot.array()).rowwise().sum();
    dscore = cache.weights.array() * (dot.colwise() - rowsum).array();
  }

  const Mat* w = nullptr;
  const Vec* h = nullptr;
  Mat* dw = nullptr;
  Vec* db = nullptr;
  Vec* dh = nullptr;
  if (agg.mode == AggMode::attention) {
    w = user_side ? &agg.attention.w1 : &agg.attention.w2;
    h = user_side ? &agg.attention.h1 : &agg.attention.h2;
    dw = user_side ? &grads.w1 : &grads.w2;
    db = user_side ? &grads.b1 : &grads.b2;
    dh = user_side ? &grads.h1 : &grads.h2;
  }

  for (int i = 0; i < kk; ++i) {
    Mat dtr = cache.weights.col(i).asDiagonal() * grad_aggregated;
    if (agg.mode == AggMode::attention) {
      *dh += cache.hidden[i].transpose() * dscore.col(i);
      Mat dz = dscore.col(i) * h->transpose();  // rows x k
      dz = ((cache.hidden[i].array() > 0.0).cast<double>() * dz.array()).matrix();
      *dw += dz.transpose() * cache.transferred[i];
      *db += dz.colwise().sum().transpose();
      dtr += dz * (*w);
    } else if (agg.mode == AggMode::static_weights) {
      grads.static_logits[i] += dscore.col(i).sum();
    }
    if (agg.train_transfer) {
      grads.transfer_weight[i] += dtr.transpose() * base_rows[i];
      grads.transfer_bias[i] += dtr.colwise().sum().transpose();
    }
  }
}

std::vector<Mat> gather_rows(const std::vector<const EmbeddingTable*>& submodels,
                             const std::vector<int>& ids, bool users) {
  std::vector<Mat> out(submodels.size());
  for (std::size_t i = 0; i < submodels.size(); ++i) {
    const Mat& src = users ? submodels[i]->user_vecs : submodels[i]->item_vecs;
    out[i].resize(static_cast<int>(ids.size()), src.cols());
    for (std::size_t r = 0; r < ids.size(); ++r) out[i].row(r) = src.row(ids[r]);
  }
  return out;
}

double theta_squared_norm(const Aggregator& agg) {
  double s = 0.0;
  if (agg.train_transfer) {
    for (const auto& w : agg.transfer.weight) s += w.squaredNorm();
    for (const auto& b : agg.transfer.bias) s += b.squaredNorm();
  }
  if (agg.mode == AggMode::attention) {
    s += agg.attention.w1.squaredNorm() + agg.attention.b1.squaredNorm() +
         agg.attention.h1.squaredNorm() + agg.attention.w2.squaredNorm() +
         agg.attention.b2.squaredNorm() + agg.attention.h2.squaredNorm();
  } else if (agg.mode == AggMode::static_weights) {
    s += agg.static_logits.squaredNorm();
  }
  return s;
}

void add_l2(const Aggregator& agg, AggGrads& grads) {
  const double c = 2.0 * agg.l2_reg;
  if (agg.train_transfer) {
    for (std::size_t i = 0; i < grads.transfer_weight.size(); ++i) {
      grads.transfer_weight[i] += c * agg.transfer.weight[i];
      grads.transfer_bias[i] += c * agg.transfer.bias[i];
    }
  }
  if (agg.mode == AggMode::attention) {
    grads.w1 += c * agg.attention.w1;
    grads.b1 += c * agg.attention.b1;
    grads.h1 += c * agg.attention.h1;
    grads.w2 += c * agg.attention.w2;
    grads.b2 += c * agg.attention.b2;
    grads.h2 += c * agg.attention.h2;
  } else if (agg.mode == AggMode::static_weights) {
    grads.static_logits += c * agg.static_logits;
  }
}

struct AdaState {
  AggGrads acc;
  explicit AdaState(const Aggregator& agg) : acc(agg) {}
};

template <typename T>
void ada_step(T& param, const T& grad, T& acc, double lr) {
  acc.array() += grad.array().square();
  param.array() -= lr * grad.array() / (acc.array().sqrt() + kAdagradEps);
}

void apply_update(Aggregator& agg, const AggGrads& grads, AdaState& state, double lr) {
  if (agg.train_transfer) {
    for (std::size_t i = 0; i < grads.transfer_weight.size(); ++i) {
      ada_step(agg.transfer.weight[i], grads.transfer_weight[i],
               state.acc.transfer_weight[i], lr);
      ada_step(agg.transfer.bias[i], grads.transfer_bias[i], state.acc.transfer_bias[i], lr);
    }
  }
  if (agg.mode == AggMode::attention) {
    ada_step(agg.attention.w1, grads.w1, state.acc.w1, lr);
    ada_step(agg.attention.b1, grads.b1, state.acc.b1, lr);
    ada_step(agg.attention.h1, grads.h1, state.acc.h1, lr);
    ada_step(agg.attention.w2, grads.w2, state.acc.w2, lr);
    ada_step(agg.attention.b2, grads.b2, state.acc.b2, lr);
    ada_step(agg.attention.h2, grads.h2, state.acc.h2, lr);
  } else if (agg.mode == AggMode::static_weights) {
    ada_step(agg.static_logits, grads.static_logits, state.acc.static_logits, lr);
  }
}

struct ParamSnapshot {
  TransferParams transfer;
  AttentionParams attention;
  Vec static_logits;
};

ParamSnapshot snapshot(const Aggregator& agg) {
  return {agg.transfer, agg.attention, agg.static_logits};
}

void restore(Aggregator& agg, const ParamSnapshot& snap) {
  agg.transfer = snap.transfer;
  agg.attention = snap.attention;
  agg.static_logits = snap.static_logits;
}

}  // namespace

AggregatorGradients::AggregatorGradients(const Aggregator& agg) {
  const int kk = static_cast<int>(agg.submodels.size());
  const int d = agg.dim;
  const int ad = agg.attention.attention_dim;
  transfer_weight.assign(kk, Mat::Zero(d, d));
  transfer_bias.assign(kk, Vec::Zero(d));
  w1 = Mat::Zero(ad, d);
  w2 = Mat::Zero(ad, d);
  b1 = Vec::Zero(ad);
  h1 = Vec::Zero(ad);
  b2 = Vec::Zero(ad);
  h2 = Vec::Zero(ad);
  static_logits = Vec::Zero(kk);
}

std::string to_string(AggMode mode) {
  switch (mode) {
    case AggMode::attention: return "attention";
    case AggMode::mean: return "mean";
    case AggMode::static_weights: return "static";
  }
  throw std::logic_error("bad AggMode");
}

AggMode agg_mode_from_string(const std::string& name) {
  if (name == "attention") return AggMode::attention;
  if (name == "mean") return AggMode::mean;
  if (name == "static") return AggMode::static_weights;
  throw std::invalid_argument("unknown aggregation mode '" + name + "'");
}

Aggregator make_aggregator(std::vector<const EmbeddingTable*> submodels, AggMode mode,
                           int attention_dim, std::uint64_t seed, double l2_reg) {
  if (submodels.empty()) throw std::invalid_argument("make_aggregator: no submodels");
  const int d = submodels[0]->dim;
  for (const auto* t : submodels) {
    if (t == nullptr || t->dim != d) {
      throw std::invalid_argument("make_aggregator: inconsistent submodel tables");
    }
  }
  Aggregator agg;
  agg.mode = mode;
  agg.dim = d;
  agg.l2_reg = l2_reg;
  agg.submodels = std::move(submodels);
  const int kk = static_cast<int>(agg.submodels.size());
  agg.transfer.weight.assign(kk, Mat::Identity(d, d));
  agg.transfer.bias.assign(kk, Vec::Zero(d));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 0.01);
  auto init_mat = [&](int r, int c) {
    Mat m(r, c);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < c; ++j) m(i, j) = dist(rng);
    }
    return m;
  };
  if (attention_dim < 1) throw std::invalid_argument("make_aggregator: bad attention_dim");
  agg.attention.attention_dim = attention_dim;
  agg.attention.w1 = init_mat(attention_dim, d);
  agg.attention.b1 = init_mat(attention_dim, 1).col(0);
  agg.attention.h1 = init_mat(attention_dim, 1).col(0);
  agg.attention.w2 = init_mat(attention_dim, d);
  agg.attention.b2 = init_mat(attention_dim, 1).col(0);
  agg.attention.h2 = init_mat(attention_dim, 1).col(0);
  agg.static_logits = Vec::Zero(kk);
  return agg;
}

EmbeddingTable transfer_table(const Aggregator& agg, int shard, const EmbeddingTable& table) {
  if (shard < 0 || shard >= static_cast<int>(agg.transfer.weight.size())) {
    throw std::out_of_range("transfer_table: bad shard index");
  }
  if (table.dim != agg.dim) throw std::invalid_argument("transfer_table: dim mismatch");
  EmbeddingTable out;
  out.dim = agg.dim;
  out.user_vecs = table.user_vecs * agg.transfer.weight[shard].transpose();
  out.user_vecs.rowwise() += agg.transfer.bias[shard].transpose();
  out.item_vecs = table.item_vecs * agg.transfer.weight[shard].transpose();
  out.item_vecs.rowwise() += agg.transfer.bias[shard].transpose();
  return out;
}

std::pair<Vec, Vec> attention_weights(const Aggregator& agg, const Mat& transferred_user_rows,
                                      const Mat& transferred_item_rows) {
  const int kk = static_cast<int>(transferred_user_rows.rows());
  if (kk < 1) throw std::invalid_argument("attention_weights: need K >= 1 rows");
  if (!transferred_user_rows.allFinite() || !transferred_item_rows.allFinite()) {
    throw std::invalid_argument("attention_weights: non-finite input");
  }
  auto head = [&](const Mat& rows, const Mat& w, const Vec& b, const Vec& h) {
    Vec scores(rows.rows());
    for (int i = 0; i < rows.rows(); ++i) {
      Vec z = (w * rows.row(i).transpose() + b).cwiseMax(0.0);
      scores[i] = h.dot(z);
    }
    return softmax(scores);
  };
  Vec alpha = head(transferred_user_rows, agg.attention.w1, agg.attention.b1, agg.attention.h1);
  const Mat& beta_rows = agg.beta_over_user_rows ? transferred_user_rows : transferred_item_rows;
  Vec beta = head(beta_rows, agg.attention.w2, agg.attention.b2, agg.attention.h2);
  return {alpha, beta};
}

EmbeddingTable aggregate(const Aggregator& agg) {
  if (agg.submodels.empty()) throw std::runtime_error("aggregate: no submodel tables");
  const int m = static_cast<int>(agg.submodels[0]->user_vecs.rows());
  const int n = static_cast<int>(agg.submodels[0]->item_vecs.rows());
  for (const auto* t : agg.submodels) {
    if (t->user_vecs.rows() != m || t->item_vecs.rows() != n) {
      throw std::runtime_error("aggregate: inconsistent submodel shapes");
    }
  }
  std::vector<Mat> user_rows(agg.submodels.size()), item_rows(agg.submodels.size());
  for (std::size_t i = 0; i < agg.submodels.size(); ++i) {
    user_rows[i] = agg.submodels[i]->user_vecs;
    item_rows[i] = agg.submodels[i]->item_vecs;
  }
  EmbeddingTable out;
  out.dim = agg.dim;
  forward_side(agg, user_rows, true, out.user_vecs);
  forward_side(agg, item_rows, false, out.item_vecs);
  return out;
}

namespace {

/// Full forward + BPR gradient + backward over one set of triples.
/// Entities are gathered so each unique row is transferred once.
double triples_pass(const Aggregator& agg, const std::vector<BprTriple>& triples,
                    AggGrads* grads) {
  std::unordered_map<int, int> user_local, item_local;
  std::vector<int> users, items;
  auto intern = [](std::unordered_map<int, int>& map, std::vector<int>& list, int id) {
    auto [it, inserted] = map.try_emplace(id, static_cast<int>(list.size()));
    if (inserted) list.push_back(id);
    return it->second;
  };
  struct LocalTriple {
    int u, p, n;
  };
  std::vector<LocalTriple> local;
  local.reserve(triples.size());
  for (const auto& t : triples) {
    local.push_back({intern(user_local, users, t.user), intern(item_local, items, t.pos),
                     intern(item_local, items, t.neg)});
  }

  auto user_base = gather_rows(agg.submodels, users, true);
  auto item_base = gather_rows(agg.submodels, items, false);
  Mat agg_users, agg_items;
  SideCache user_cache = forward_side(agg, user_base, true, agg_users);
  SideCache item_cache = forward_side(agg, item_base, false, agg_items);

  double loss = 0.0;
  Mat gu = Mat::Zero(agg_users.rows(), agg.dim);
  Mat gi = Mat::Zero(agg_items.rows(), agg.dim);
  for (const auto& t : local) {
    const auto pu = agg_users.row(t.u);
    const auto qp = agg_items.row(t.p);
    const auto qn = agg_items.row(t.n);
    const double x = pu.dot(qp - qn);
    loss += std::log1p(std::exp(-std::abs(x))) + std::max(-x, 0.0);
    if (grads != nullptr) {
      const double coeff = -sigmoid(-x);
      gu.row(t.u) += coeff * (qp - qn);
      gi.row(t.p) += coeff * pu;
      gi.row(t.n) += -coeff * pu;
    }
  }
  if (grads != nullptr) {
    backward_side(agg, user_cache, user_base, gu, true, *grads);
    backward_side(agg, item_cache, item_base, gi, false, *grads);
    add_l2(agg, *grads);
  }
  return loss + agg.l2_reg * theta_squared_norm(agg);
}

}  // namespace

double aggregator_loss(const Aggregator& agg, const std::vector<BprTriple>& triples) {
  return triples_pass(agg, triples, nullptr);
}

AggregatorGradients aggregator_gradients(const Aggregator& agg,
                                         const std::vector<BprTriple>& triples) {
  AggregatorGradients grads(agg);
  triples_pass(agg, triples, &grads);
  return grads;
}

void train_aggregator(Aggregator& agg, const Dataset& train, const AggTrainConfig& cfg,
                      const Dataset* val) {
  if (agg.mode == AggMode::mean) {
    throw std::invalid_argument("train_aggregator: mean mode has no trainable parameters");
  }
  if (train.size() == 0) throw std::runtime_error("train_aggregator: empty dataset");
  const int n = train.num_items;
  std::mt19937_64 rng(cfg.seed);
  AdaState state(agg);

  double best = -1.0;
  int since_best = 0;
  ParamSnapshot best_params = snapshot(agg);

  if (cfg.base == ModelKind::wmf) {
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
      EmbeddingTable table = aggregate(agg);
      Mat gp, gq;
      wmf_grad(table, train, cfg.negative_weight, 0.0, gp, gq);
      AggGrads grads(agg);
      std::vector<Mat> user_rows(agg.submodels.size()), item_rows(agg.submodels.size());
      for (std::size_t i = 0; i < agg.submodels.size(); ++i) {
        user_rows[i] = agg.submodels[i]->user_vecs;
        item_rows[i] = agg.submodels[i]->item_vecs;
      }
      Mat agg_users, agg_items;
      SideCache uc = forward_side(agg, user_rows, true, agg_users);
      SideCache ic = forward_side(agg, item_rows, false, agg_items);
      backward_side(agg, uc, user_rows, gp, true, grads);
      backward_side(agg, ic, item_rows, gq, false, grads);
      add_l2(agg, grads);
      apply_update(agg, grads, state, cfg.learning_rate);
      if (val != nullptr && val->size() > 0) {
        const double r10 = validation_recall10(aggregate(agg), train, *val);
        if (r10 > best) {
          best = r10;
          best_params = snapshot(agg);
          since_best = 0;
        } else if (++since_best >= cfg.early_stop_patience) {
          restore(agg, best_params);
          return;
        }
      }
    }
    if (val != nullptr && val->size() > 0 && best >= 0.0) restore(agg, best_params);
    return;
  }

  // BPR-family base loss: sampled (u, pos, neg) triples over the aggregated
  // table, processed in large batches.
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::uniform_int_distribution<int> item_dist(0, n - 1);
  const std::size_t per_epoch = std::max<std::size_t>(
      1, static_cast<std::size_t>(static_cast<double>(train.size()) * cfg.sample_fraction));

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<BprTriple> batch;
    batch.reserve(std::min(cfg.batch_size, per_epoch));
    for (std::size_t idx = 0; idx < per_epoch; ++idx) {
      const Interaction y = train.interactions[order[idx % order.size()]];
      const auto& adj = train.user_adjacency[y.user];
      if (static_cast<int>(adj.size()) >= n) continue;
      int neg;
      do {
        neg = item_dist(rng);
      } while (std::binary_search(adj.begin(), adj.end(), neg));
      batch.push_back({y.user, y.item, neg});
      if (batch.size() >= cfg.batch_size || idx + 1 == per_epoch) {
        AggGrads grads(agg);
        triples_pass(agg, batch, &grads);
        apply_update(agg, grads, state, cfg.learning_rate);
        batch.clear();
      }
    }
    if (val != nullptr && val->size() > 0) {
      const double r10 = validation_recall10(aggregate(agg), train, *val);
      if (r10 > best) {
        best = r10;
        best_params = snapshot(agg);
        since_best = 0;
      } else if (++since_best >= cfg.early_stop_patience) {
        restore(agg, best_params);
        return;
      }
    }
  }
  if (val != nullptr && val->size() > 0 && best >= 0.0) restore(agg, best_params);
}

void save_aggregator(const Aggregator& agg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const int kk = static_cast<int>(agg.submodels.size());
  out << to_string(agg.mode) << ' ' << kk << ' ' << agg.dim << ' '
      << agg.attention.attention_dim << '\n';
  auto write_mat = [&out](const Mat& m) {
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) {
        const float v = static_cast<float>(m(i, j));
        out.write(reinterpret_cast<const char*>(&v), sizeof(v));
      }
    }
  };
  auto write_vec = [&out](const Vec& v) {
    for (int i = 0; i < v.size(); ++i) {
      const float f = static_cast<float>(v[i]);
      out.write(reinterpret_cast<const char*>(&f), sizeof(f));
    }
  };
  for (int i = 0; i < kk; ++i) {
    write_mat(agg.transfer.weight[i]);
    write_vec(agg.transfer.bias[i]);
  }
  write_mat(agg.attention.w1);
  write_vec(agg.attention.b1);
  write_vec(agg.attention.h1);
  write_mat(agg.attention.w2);
  write_vec(agg.attention.b2);
  write_vec(agg.attention.h2);
  if (agg.mode == AggMode::static_weights) write_vec(agg.static_logits);
}

Aggregator load_aggregator(const std::filesystem::path& path,
                           std::vector<const EmbeddingTable*> submodels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string mode;
  int kk, d, ad;
  if (!(hs >> mode >> kk >> d >> ad)) {
    throw std::runtime_error(path.string() + ": bad aggregator header");
  }
  if (static_cast<int>(submodels.size()) != kk) {
    throw std::runtime_error(path.string() + ": checkpoint expects " + std::to_string(kk) +
                             " submodels");
  }
  Aggregator agg = make_aggregator(std::move(submodels), agg_mode_from_string(mode), ad, 0);
  auto read_mat = [&in, &path](Mat& m) {
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) {
        float v;
        in.read(reinterpret_cast<char*>(&v), sizeof(v));
        if (!in) throw std::runtime_error(path.string() + ": truncated aggregator checkpoint");
        m(i, j) = v;
      }
    }
  };
  auto read_vec = [&in, &path](Vec& v) {
    for (int i = 0; i < v.size(); ++i) {
      float f;
      in.read(reinterpret_cast<char*>(&f), sizeof(f));
      if (!in) throw std::runtime_error(path.string() + ": truncated aggregator checkpoint");
      v[i] = f;
    }
  };
  for (int i = 0; i < kk; ++i) {
    read_mat(agg.transfer.weight[i]);
    read_vec(agg.transfer.bias[i]);
  }
  read_mat(agg.attention.w1);
  read_vec(agg.attention.b1);
  read_vec(agg.attention.h1);
  read_mat(agg.attention.w2);
  read_vec(agg.attention.b2);
  read_vec(agg.attention.h2);
  if (agg.mode == AggMode::static_weights) read_vec(agg.static_logits);
  return agg;
}

}  // namespace shardrec
