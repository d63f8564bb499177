#include "shardrec/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace shardrec {

namespace {

void check_indices(const Dataset& d, const Interaction& y) {
  if (y.user < 0 || y.user >= d.num_users || y.item < 0 || y.item >= d.num_items) {
    throw std::out_of_range("interaction (" + std::to_string(y.user) + "," +
                            std::to_string(y.item) + ") out of range");
  }
}

std::string detect_separator(const std::string& line) {
  if (line.find("::") != std::string::npos) return "::";
  if (line.find('\t') != std::string::npos) return "\t";
  if (line.find(',') != std::string::npos) return ",";
  throw std::runtime_error("could not detect separator (expected '::', tab, or comma)");
}

std::vector<std::string> split_fields(const std::string& line, const std::string& sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = line.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + sep.size();
  }
  return out;
}

Dataset subset(const Dataset& parent, std::vector<Interaction> members) {
  Dataset d = Dataset::from_interactions(parent.num_users, parent.num_items, std::move(members));
  d.user_ids = parent.user_ids;
  d.item_ids = parent.item_ids;
  return d;
}

}  // namespace

bool Dataset::contains(const Interaction& y) const {
  if (y.user < 0 || y.user >= num_users) return false;
  const auto& adj = user_adjacency[y.user];
  return std::binary_search(adj.begin(), adj.end(), y.item);
}

Dataset Dataset::from_interactions(int num_users, int num_items,
                                   std::vector<Interaction> interactions) {
  Dataset d;
  d.num_users = num_users;
  d.num_items = num_items;
  std::sort(interactions.begin(), interactions.end());
  interactions.erase(std::unique(interactions.begin(), interactions.end()),
                     interactions.end());
  d.user_adjacency.assign(num_users, {});
  d.item_adjacency.assign(num_items, {});
  for (const auto& y : interactions) {
    check_indices(d, y);
    d.user_adjacency[y.user].push_back(y.item);
    d.item_adjacency[y.item].push_back(y.user);
  }
  d.interactions = std::move(interactions);
  return d;
}

Dataset load_interactions(const std::filesystem::path& path,
                          const std::optional<std::string>& separator,
                          std::optional<double> rating_threshold) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  std::unordered_map<std::string, int> user_index, item_index;
  std::vector<std::string> user_ids, item_ids;
  std::vector<Interaction> interactions;
  std::string sep = separator.value_or("");

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (sep.empty()) sep = detect_separator(line);
    auto fields = split_fields(line, sep);
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": malformed row (need user and item columns)");
    }
    if (rating_threshold && fields.size() >= 3) {
      double rating = 0.0;
      try {
        rating = std::stod(fields[2]);
      } catch (const std::exception&) {
        throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                 ": malformed rating column");
      }
      if (rating < *rating_threshold) continue;
    }
    auto intern = [](std::unordered_map<std::string, int>& index,
                     std::vector<std::string>& ids, const std::string& token) {
      auto [it, inserted] = index.try_emplace(token, static_cast<int>(ids.size()));
      if (inserted) ids.push_back(token);
      return it->second;
    };
    int u = intern(user_index, user_ids, fields[0]);
    int v = intern(item_index, item_ids, fields[1]);
    interactions.push_back({u, v});
  }
  if (interactions.empty()) {
    throw std::runtime_error(path.string() + ": empty dataset");
  }
  Dataset d = Dataset::from_interactions(static_cast<int>(user_ids.size()),
                                         static_cast<int>(item_ids.size()),
                                         std::move(interactions));
  d.user_ids = std::move(user_ids);
  d.item_ids = std::move(item_ids);
  return d;
}

SplitResult split(const Dataset& dataset, const SplitSpec& spec) {
  if (dataset.size() == 0) throw std::runtime_error("split: empty dataset");
  if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0 ||
      spec.validation_fraction_of_train <= 0.0 || spec.validation_fraction_of_train >= 1.0) {
    throw std::invalid_argument("split: fractions must lie in (0, 1)");
  }
  const std::size_t total = dataset.size();
  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  std::mt19937_64 rng(spec.seed);
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t train_pool =
      static_cast<std::size_t>(std::floor(static_cast<double>(total) * spec.train_fraction));
  std::size_t n_val = static_cast<std::size_t>(
      std::floor(static_cast<double>(train_pool) * spec.validation_fraction_of_train));
  if (n_val == 0 && train_pool >= 2) n_val = 1;  // never an empty validation set
  if (train_pool <= n_val) throw std::runtime_error("split: fractions yield empty train set");

  std::vector<Interaction> train_v, val_v, test_v;
  for (std::size_t i = 0; i < total; ++i) {
    const Interaction& y = dataset.interactions[order[i]];
    if (i < train_pool - n_val) {
      train_v.push_back(y);
    } else if (i < train_pool) {
      val_v.push_back(y);
    } else {
      test_v.push_back(y);
    }
  }
  return {subset(dataset, std::move(train_v)), subset(dataset, std::move(val_v)),
          subset(dataset, std::move(test_v))};
}

Dataset remove_interaction(const Dataset& dataset, const Interaction& y) {
  if (!dataset.contains(y)) {
    throw std::runtime_error("remove_interaction: (" + std::to_string(y.user) + "," +
                             std::to_string(y.item) + ") not in dataset");
  }
  std::vector<Interaction> kept;
  kept.reserve(dataset.size() - 1);
  for (const auto& yy : dataset.interactions) {
    if (yy != y) kept.push_back(yy);
  }
  Dataset d = Dataset::from_interactions(dataset.num_users, dataset.num_items, std::move(kept));
  d.user_ids = dataset.user_ids;
  d.item_ids = dataset.item_ids;
  return d;
}

Dataset add_interaction(const Dataset& dataset, const Interaction& y) {
  if (dataset.contains(y)) {
    throw std::runtime_error("add_interaction: interaction already present");
  }
  std::vector<Interaction> all = dataset.interactions;
  all.push_back(y);
  Dataset d = Dataset::from_interactions(dataset.num_users, dataset.num_items, std::move(all));
  d.user_ids = dataset.user_ids;
  d.item_ids = dataset.item_ids;
  return d;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& y : dataset.interactions) {
    out << y.user << '\t' << y.item << '\n';
  }
  if (!dataset.user_ids.empty() || !dataset.item_ids.empty()) {
    std::ofstream ids(path.string() + ".ids");
    if (!ids) throw std::runtime_error("cannot write " + path.string() + ".ids");
    for (std::size_t i = 0; i < dataset.user_ids.size(); ++i) {
      ids << "user\t" << dataset.user_ids[i] << '\t' << i << '\n';
    }
    for (std::size_t i = 0; i < dataset.item_ids.size(); ++i) {
      ids << "item\t" << dataset.item_ids[i] << '\t' << i << '\n';
    }
  }
}

}  // namespace shardrec
