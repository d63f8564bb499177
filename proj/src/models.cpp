#include "shardrec/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "shardrec/eval.hpp"

namespace shardrec {

namespace {

constexpr double kAdagradEps = 1e-8;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Mat gaussian_init(int rows, int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 0.01);
  Mat m(rows, dim);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = dist(rng);
  }
  return m;
}

/// Per-coordinate Adagrad state for one parameter matrix.
struct Adagrad {
  Mat acc;
  double lr;

  Adagrad(int rows, int cols, double lr_) : acc(Mat::Zero(rows, cols)), lr(lr_) {}

  void update_row(Mat& param, int row, const Eigen::Ref<const Eigen::RowVectorXd>& grad) {
    for (int j = 0; j < param.cols(); ++j) {
      const double g = grad[j];
      acc(row, j) += g * g;
      param(row, j) -= lr * g / (std::sqrt(acc(row, j)) + kAdagradEps);
    }
  }

  void update_all(Mat& param, const Mat& grad) {
    acc.array() += grad.array().square();
    param.array() -= lr * grad.array() / (acc.array().sqrt() + kAdagradEps);
  }
};

void check_finite(const EmbeddingTable& t, int epoch) {
  if (!t.user_vecs.allFinite() || !t.item_vecs.allFinite()) {
    throw std::runtime_error("training produced non-finite parameters at epoch " +
                             std::to_string(epoch));
  }
}

std::vector<double> inv_sqrt_degrees(const std::vector<std::vector<int>>& adj) {
  std::vector<double> out(adj.size(), 0.0);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    if (!adj[i].empty()) out[i] = 1.0 / std::sqrt(static_cast<double>(adj[i].size()));
  }
  return out;
}

/// One degree-normalized bipartite propagation step.
void propagate_step(const Dataset& data, const std::vector<double>& du,
                    const std::vector<double>& dv, const Mat& in_user, const Mat& in_item,
                    Mat& out_user, Mat& out_item) {
  out_user.setZero();
  out_item.setZero();
  for (const auto& y : data.interactions) {
    const double w = du[y.user] * dv[y.item];
    out_user.row(y.user) += w * in_item.row(y.item);
    out_item.row(y.item) += w * in_user.row(y.user);
  }
}

struct EarlyStopper {
  int patience;
  double best = -1.0;
  int since_best = 0;
  EmbeddingTable best_table;

  explicit EarlyStopper(int patience_) : patience(patience_) {}

  // Returns true when training should stop.
  bool observe(double metric, const EmbeddingTable& table) {
    if (metric > best) {
      best = metric;
      best_table = table;
      since_best = 0;
    } else {
      ++since_best;
    }
    return since_best >= patience;
  }
};

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::bpr: return "bpr";
    case ModelKind::wmf: return "wmf";
    case ModelKind::lightgcn: return "lightgcn";
  }
  throw std::logic_error("bad ModelKind");
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "bpr") return ModelKind::bpr;
  if (name == "wmf") return ModelKind::wmf;
  if (name == "lightgcn") return ModelKind::lightgcn;
  throw std::invalid_argument("unknown model '" + name + "'");
}

double score(const EmbeddingTable& table, int u, int v) {
  if (u < 0 || u >= table.user_vecs.rows() || v < 0 || v >= table.item_vecs.rows()) {
    throw std::out_of_range("score: index out of range");
  }
  return table.user_vecs.row(u).dot(table.item_vecs.row(v));
}

double bpr_loss(const EmbeddingTable& table, const std::vector<BprTriple>& triples,
                double l2_reg) {
  double loss = 0.0;
  for (const auto& t : triples) {
    const double x = table.user_vecs.row(t.user).dot(table.item_vecs.row(t.pos) -
                                                     table.item_vecs.row(t.neg));
    // -ln sigmoid(x), written to stay stable for large |x|
    loss += std::log1p(std::exp(-std::abs(x))) + std::max(-x, 0.0);
    loss += l2_reg * (table.user_vecs.row(t.user).squaredNorm() +
                      table.item_vecs.row(t.pos).squaredNorm() +
                      table.item_vecs.row(t.neg).squaredNorm());
  }
  return loss;
}

void bpr_grad(const EmbeddingTable& table, const std::vector<BprTriple>& triples,
              double l2_reg, Mat& grad_user, Mat& grad_item) {
  grad_user = Mat::Zero(table.user_vecs.rows(), table.dim);
  grad_item = Mat::Zero(table.item_vecs.rows(), table.dim);
  for (const auto& t : triples) {
    const auto pu = table.user_vecs.row(t.user);
    const auto qp = table.item_vecs.row(t.pos);
    const auto qn = table.item_vecs.row(t.neg);
    const double x = pu.dot(qp - qn);
    const double coeff = -sigmoid(-x);
    grad_user.row(t.user) += coeff * (qp - qn) + 2.0 * l2_reg * pu;
    grad_item.row(t.pos) += coeff * pu + 2.0 * l2_reg * qp;
    grad_item.row(t.neg) += -coeff * pu + 2.0 * l2_reg * qn;
  }
}

double wmf_loss(const EmbeddingTable& table, const Dataset& data, double c0, double l2_reg) {
  const Mat& P = table.user_vecs;
  const Mat& Q = table.item_vecs;
  // c0 * sum_all yhat^2 = c0 * tr((P^T P)(Q^T Q))
  const Mat sp = P.transpose() * P;
  const Mat sq = Q.transpose() * Q;
  double loss = c0 * (sp.array() * sq.array()).sum();
  for (const auto& y : data.interactions) {
    const double yhat = P.row(y.user).dot(Q.row(y.item));
    loss += (1.0 - yhat) * (1.0 - yhat) - c0 * yhat * yhat;
  }
  loss += l2_reg * (P.squaredNorm() + Q.squaredNorm());
  return loss;
}

namespace {

// d/dP of the WMF loss at fixed Q (and symmetrically for Q at fixed P).
Mat wmf_grad_users(const Mat& P, const Mat& Q, const Dataset& data, double c0, double l2_reg) {
  const Mat sq = Q.transpose() * Q;
  Mat grad = 2.0 * c0 * P * sq + 2.0 * l2_reg * P;
  for (const auto& y : data.interactions) {
    const double yhat = P.row(y.user).dot(Q.row(y.item));
    grad.row(y.user) += (2.0 * (yhat - 1.0) - 2.0 * c0 * yhat) * Q.row(y.item);
  }
  return grad;
}

Mat wmf_grad_items(const Mat& P, const Mat& Q, const Dataset& data, double c0, double l2_reg) {
  const Mat sp = P.transpose() * P;
  Mat grad = 2.0 * c0 * Q * sp + 2.0 * l2_reg * Q;
  for (const auto& y : data.interactions) {
    const double yhat = P.row(y.user).dot(Q.row(y.item));
    grad.row(y.item) += (2.0 * (yhat - 1.0) - 2.0 * c0 * yhat) * P.row(y.user);
  }
  return grad;
}

}  // namespace

void wmf_grad(const EmbeddingTable& table, const Dataset& data, double c0, double l2_reg,
              Mat& grad_user, Mat& grad_item) {
  grad_user = wmf_grad_users(table.user_vecs, table.item_vecs, data, c0, l2_reg);
  grad_item = wmf_grad_items(table.user_vecs, table.item_vecs, data, c0, l2_reg);
}

EmbeddingTable propagate_lightgcn(const EmbeddingTable& base, const Dataset& data,
                                  int num_layers) {
  if (num_layers <= 0) return base;
  const auto du = inv_sqrt_degrees(data.user_adjacency);
  const auto dv = inv_sqrt_degrees(data.item_adjacency);
  Mat cur_u = base.user_vecs, cur_i = base.item_vecs;
  Mat sum_u = base.user_vecs, sum_i = base.item_vecs;
  Mat next_u(cur_u.rows(), cur_u.cols()), next_i(cur_i.rows(), cur_i.cols());
  for (int l = 0; l < num_layers; ++l) {
    propagate_step(data, du, dv, cur_u, cur_i, next_u, next_i);
    cur_u.swap(next_u);
    cur_i.swap(next_i);
    sum_u += cur_u;
    sum_i += cur_i;
  }
  const double scale = 1.0 / (num_layers + 1);
  return {scale * sum_u, scale * sum_i, base.dim};
}

double validation_recall10(const EmbeddingTable& table, const Dataset& train,
                           const Dataset& val) {
  const int m = static_cast<int>(table.user_vecs.rows());
  const int n = static_cast<int>(table.item_vecs.rows());
  double sum = 0.0;
  int users = 0;
  const int chunk = 256;
  std::vector<int> eligible;
  for (int u = 0; u < m; ++u) {
    if (u < val.num_users && !val.user_adjacency[u].empty() && u < train.num_users &&
        !train.user_adjacency[u].empty()) {
      eligible.push_back(u);
    }
  }
  std::vector<std::pair<double, int>> top;
  for (std::size_t start = 0; start < eligible.size(); start += chunk) {
    const int count = static_cast<int>(std::min<std::size_t>(chunk, eligible.size() - start));
    Mat block(count, table.dim);
    for (int i = 0; i < count; ++i) block.row(i) = table.user_vecs.row(eligible[start + i]);
    Mat scores = block * table.item_vecs.transpose();  // count x n
    for (int i = 0; i < count; ++i) {
      const int u = eligible[start + i];
      for (int vv : train.user_adjacency[u]) {
        scores(i, vv) = -std::numeric_limits<double>::infinity();
      }
      top.clear();
      for (int v = 0; v < n; ++v) top.emplace_back(-scores(i, v), v);
      const int k = std::min(10, n);
      std::partial_sort(top.begin(), top.begin() + k, top.end());
      const auto& rel = val.user_adjacency[u];
      int hits = 0;
      for (int r = 0; r < k; ++r) {
        if (std::binary_search(rel.begin(), rel.end(), top[r].second)) ++hits;
      }
      sum += static_cast<double>(hits) / static_cast<double>(rel.size());
      ++users;
    }
  }
  return users > 0 ? sum / users : 0.0;
}

namespace {

/// Shared BPR / LightGCN training loop. num_layers == 0 is plain BPR on the
/// base embeddings; num_layers > 0 scores with propagated embeddings and
/// backpropagates through the (linear) propagation.
EmbeddingTable train_pairwise(const Dataset& train, const TrainConfig& cfg, const Dataset* val,
                              int num_layers) {
  if (train.size() == 0) throw std::runtime_error("train: empty dataset");
  const int m = train.num_users;
  const int n = train.num_items;
  std::mt19937_64 rng(cfg.seed);
  EmbeddingTable base{gaussian_init(m, cfg.dim, rng), gaussian_init(n, cfg.dim, rng), cfg.dim};
  Adagrad opt_u(m, cfg.dim, cfg.learning_rate), opt_i(n, cfg.dim, cfg.learning_rate);

  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::uniform_int_distribution<int> item_dist(0, n - 1);

  const auto du = inv_sqrt_degrees(train.user_adjacency);
  const auto dv = inv_sqrt_degrees(train.item_adjacency);

  // Dense batch-gradient scratch (reset per batch via the touched lists).
  Mat gu = Mat::Zero(m, cfg.dim), gi = Mat::Zero(n, cfg.dim);
  std::vector<int> touched_u, touched_i;
  std::vector<char> seen_u(m, 0), seen_i(n, 0);

  EarlyStopper stopper(cfg.early_stop_patience);

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));

      const EmbeddingTable* scored = &base;
      EmbeddingTable propagated;
      if (num_layers > 0) {
        propagated = propagate_lightgcn(base, train, num_layers);
        scored = &propagated;
      }

      touched_u.clear();
      touched_i.clear();
      for (std::size_t idx = start; idx < stop; ++idx) {
        const Interaction y = train.interactions[order[idx]];
        const auto& adj = train.user_adjacency[y.user];
        if (static_cast<int>(adj.size()) >= n) continue;  // no negative available
        int neg;
        do {
          neg = item_dist(rng);
        } while (std::binary_search(adj.begin(), adj.end(), neg));

        const auto pu = scored->user_vecs.row(y.user);
        const auto qp = scored->item_vecs.row(y.item);
        const auto qn = scored->item_vecs.row(neg);
        const double x = pu.dot(qp - qn);
        const double coeff = -sigmoid(-x);
        if (!seen_u[y.user]) { seen_u[y.user] = 1; touched_u.push_back(y.user); }
        if (!seen_i[y.item]) { seen_i[y.item] = 1; touched_i.push_back(y.item); }
        if (!seen_i[neg]) { seen_i[neg] = 1; touched_i.push_back(neg); }
        gu.row(y.user) += coeff * (qp - qn);
        gi.row(y.item) += coeff * pu;
        gi.row(neg) += -coeff * pu;
        // L2 acts on the base (ego) embeddings of the sampled rows.
        gu.row(y.user) += 2.0 * cfg.l2_reg * base.user_vecs.row(y.user);
        gi.row(y.item) += 2.0 * cfg.l2_reg * base.item_vecs.row(y.item);
        gi.row(neg) += 2.0 * cfg.l2_reg * base.item_vecs.row(neg);
      }

      if (num_layers > 0) {
        // grad_base = (1/(L+1)) * sum_l A^l * grad_final; A is symmetric.
        Mat cur_u = gu, cur_i = gi;
        Mat sum_u = gu, sum_i = gi;
        Mat next_u(m, cfg.dim), next_i(n, cfg.dim);
        for (int l = 0; l < num_layers; ++l) {
          propagate_step(train, du, dv, cur_u, cur_i, next_u, next_i);
          cur_u.swap(next_u);
          cur_i.swap(next_i);
          sum_u += cur_u;
          sum_i += cur_i;
        }
        const double scale = 1.0 / (num_layers + 1);
        sum_u *= scale;
        sum_i *= scale;
        // All rows may now carry gradient; update densely.
        for (int u = 0; u < m; ++u) opt_u.update_row(base.user_vecs, u, sum_u.row(u));
        for (int v = 0; v < n; ++v) opt_i.update_row(base.item_vecs, v, sum_i.row(v));
        gu.setZero();
        gi.setZero();
        std::fill(seen_u.begin(), seen_u.end(), 0);
        std::fill(seen_i.begin(), seen_i.end(), 0);
      } else {
        for (int u : touched_u) {
          opt_u.update_row(base.user_vecs, u, gu.row(u));
          gu.row(u).setZero();
          seen_u[u] = 0;
        }
        for (int v : touched_i) {
          opt_i.update_row(base.item_vecs, v, gi.row(v));
          gi.row(v).setZero();
          seen_i[v] = 0;
        }
      }
    }
    check_finite(base, epoch);
    if (val != nullptr && val->size() > 0 && (epoch + 1) % std::max(1, cfg.validate_every) == 0) {
      EmbeddingTable out = propagate_lightgcn(base, train, num_layers);
      if (stopper.observe(validation_recall10(out, train, *val), out)) {
        return stopper.best_table;
      }
    }
  }
  if (val != nullptr && val->size() > 0 && stopper.best >= 0.0) return stopper.best_table;
  return propagate_lightgcn(base, train, num_layers);
}

}  // namespace

EmbeddingTable train_bpr(const Dataset& train, const TrainConfig& cfg, const Dataset* val) {
  return train_pairwise(train, cfg, val, 0);
}

EmbeddingTable train_lightgcn(const Dataset& train, const TrainConfig& cfg, const Dataset* val) {
  return train_pairwise(train, cfg, val, cfg.num_layers);
}

EmbeddingTable train_wmf(const Dataset& train, const TrainConfig& cfg, const Dataset* val) {
  if (train.size() == 0) throw std::runtime_error("train_wmf: empty dataset");
  const int m = train.num_users;
  const int n = train.num_items;
  std::mt19937_64 rng(cfg.seed);
  EmbeddingTable t{gaussian_init(m, cfg.dim, rng), gaussian_init(n, cfg.dim, rng), cfg.dim};
  Adagrad opt_u(m, cfg.dim, cfg.learning_rate), opt_i(n, cfg.dim, cfg.learning_rate);
  EarlyStopper stopper(cfg.early_stop_patience);

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    // Alternating full-batch Adagrad steps on the Gram-reformulated loss.
    Mat gp = wmf_grad_users(t.user_vecs, t.item_vecs, train, cfg.negative_weight, cfg.l2_reg);
    opt_u.update_all(t.user_vecs, gp);
    Mat gq = wmf_grad_items(t.user_vecs, t.item_vecs, train, cfg.negative_weight, cfg.l2_reg);
    opt_i.update_all(t.item_vecs, gq);
    check_finite(t, epoch);
    if (val != nullptr && val->size() > 0 && (epoch + 1) % std::max(1, cfg.validate_every) == 0) {
      if (stopper.observe(validation_recall10(t, train, *val), t)) return stopper.best_table;
    }
  }
  if (val != nullptr && val->size() > 0 && stopper.best >= 0.0) return stopper.best_table;
  return t;
}

EmbeddingTable train_model(const Dataset& train, const TrainConfig& cfg, const Dataset* val) {
  switch (cfg.model) {
    case ModelKind::bpr: return train_bpr(train, cfg, val);
    case ModelKind::wmf: return train_wmf(train, cfg, val);
    case ModelKind::lightgcn: return train_lightgcn(train, cfg, val);
  }
  throw std::logic_error("bad ModelKind");
}

PretrainedEmbeddings pretrain_for_partition(const Dataset& train, const TrainConfig& cfg) {
  TrainConfig wmf_cfg = cfg;
  wmf_cfg.model = ModelKind::wmf;
  EmbeddingTable t = train_wmf(train, wmf_cfg, nullptr);
  return {std::move(t.user_vecs), std::move(t.item_vecs), t.dim};
}

void save_table(const EmbeddingTable& table, ModelKind kind, std::uint64_t seed,
                const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const int m = static_cast<int>(table.user_vecs.rows());
  const int n = static_cast<int>(table.item_vecs.rows());
  out << to_string(kind) << ' ' << table.dim << ' ' << m << ' ' << n << ' ' << seed << '\n';
  auto write_matrix = [&out](const Mat& mat) {
    for (int i = 0; i < mat.rows(); ++i) {
      for (int j = 0; j < mat.cols(); ++j) {
        const float v = static_cast<float>(mat(i, j));
        out.write(reinterpret_cast<const char*>(&v), sizeof(v));
      }
    }
  };
  write_matrix(table.user_vecs);
  write_matrix(table.item_vecs);

  std::ofstream meta(path.string() + ".meta");
  meta << "model\t" << to_string(kind) << "\ndim\t" << table.dim << "\nusers\t" << m
       << "\nitems\t" << n << "\nseed\t" << seed << "\nlayout\tfloat32-le-row-major\n";
}

EmbeddingTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string model;
  int dim, m, n;
  std::uint64_t seed;
  if (!(hs >> model >> dim >> m >> n >> seed)) {
    throw std::runtime_error(path.string() + ": bad checkpoint header");
  }
  model_kind_from_string(model);  // validates
  EmbeddingTable t{Mat(m, dim), Mat(n, dim), dim};
  auto read_matrix = [&in, &path](Mat& mat) {
    for (int i = 0; i < mat.rows(); ++i) {
      for (int j = 0; j < mat.cols(); ++j) {
        float v;
        in.read(reinterpret_cast<char*>(&v), sizeof(v));
        if (!in) throw std::runtime_error(path.string() + ": truncated checkpoint");
        mat(i, j) = v;
      }
    }
  };
  read_matrix(t.user_vecs);
  read_matrix(t.item_vecs);
  return t;
}

}  // namespace shardrec
