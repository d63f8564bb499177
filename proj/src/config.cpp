#include "shardrec/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace shardrec {

namespace {

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("expected boolean, got '" + v + "'");
}

std::vector<int> parse_int_list(const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoi(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

}  // namespace

TrainConfig PipelineConfig::base_train_config() const {
  TrainConfig cfg;
  cfg.model = model;
  cfg.dim = dim;
  cfg.learning_rate = learning_rate;
  cfg.batch_size = batch_size;
  cfg.max_epochs = max_epochs;
  cfg.early_stop_patience = early_stop_patience;
  cfg.l2_reg = l2_reg;
  cfg.negative_weight = negative_weight;
  cfg.num_layers = num_layers;
  cfg.validate_every = validate_every;
  cfg.seed = seed;
  cfg.shard_local_validation = shard_local_validation;
  return cfg;
}

AggTrainConfig PipelineConfig::agg_train_config() const {
  AggTrainConfig cfg;
  cfg.learning_rate = agg_learning_rate;
  cfg.max_epochs = agg_epochs;
  cfg.early_stop_patience = early_stop_patience;
  cfg.batch_size = agg_batch_size;
  cfg.sample_fraction = agg_sample_fraction;
  cfg.seed = seed;
  cfg.base = model;
  cfg.negative_weight = negative_weight;
  return cfg;
}

PartitionConfig PipelineConfig::partition_config() const {
  PartitionConfig cfg;
  cfg.num_shards = num_shards;
  cfg.capacity = capacity;
  cfg.max_iterations = partition_max_iterations;
  cfg.seed = seed;
  cfg.tolerance = partition_tolerance;
  return cfg;
}

void PipelineConfig::set(const std::string& key, const std::string& value) {
  bool known = true;
  try {
    if (key == "dataset") dataset_path = value;
    else if (key == "separator") separator = value;
    else if (key == "rating_threshold") rating_threshold = std::stod(value);
    else if (key == "train_fraction") train_fraction = std::stod(value);
    else if (key == "val_fraction") validation_fraction_of_train = std::stod(value);
    else if (key == "model") model = model_kind_from_string(value);
    else if (key == "strategy") strategy = partition_kind_from_string(value);
    else if (key == "agg") agg_mode = agg_mode_from_string(value);
    else if (key == "shards") num_shards = std::stoi(value);
    else if (key == "capacity") capacity = std::stoi(value);
    else if (key == "partition_max_iterations") partition_max_iterations = std::stoi(value);
    else if (key == "partition_tolerance") partition_tolerance = std::stod(value);
    else if (key == "dim") dim = std::stoi(value);
    else if (key == "learning_rate") learning_rate = std::stod(value);
    else if (key == "batch_size") batch_size = std::stoi(value);
    else if (key == "max_epochs") max_epochs = std::stoi(value);
    else if (key == "patience") early_stop_patience = std::stoi(value);
    else if (key == "l2_reg") l2_reg = std::stod(value);
    else if (key == "negative_weight") negative_weight = std::stod(value);
    else if (key == "num_layers") num_layers = std::stoi(value);
    else if (key == "validate_every") validate_every = std::stoi(value);
    else if (key == "shard_local_validation") shard_local_validation = parse_bool(value);
    else if (key == "attention_dim") attention_dim = std::stoi(value);
    else if (key == "agg_epochs") agg_epochs = std::stoi(value);
    else if (key == "agg_learning_rate") agg_learning_rate = std::stod(value);
    else if (key == "agg_batch_size") agg_batch_size = std::stoul(value);
    else if (key == "agg_sample_fraction") agg_sample_fraction = std::stod(value);
    else if (key == "agg_l2") agg_l2 = std::stod(value);
    else if (key == "train_transfer") train_transfer = parse_bool(value);
    else if (key == "cutoffs") cutoffs = parse_int_list(value);
    else if (key == "seed") seed = std::stoull(value);
    else if (key == "out") out_dir = value;
    else if (key == "threads") threads = std::stoi(value);
    else if (key == "coalesce_same_shard") coalesce_same_shard = parse_bool(value);
    else if (key == "repartition") repartition_on_unlearn = parse_bool(value);
    else known = false;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad value '" + value + "' for config key '" + key + "'");
  }
  if (!known) throw std::invalid_argument("unknown config key '" + key + "'");
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  PipelineConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string key, value;
    std::istringstream ls(line);
    if (!(ls >> key)) continue;  // blank line
    const auto eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.erase(eq);
      if (value.empty()) ls >> value;
    } else {
      ls >> value;
    }
    if (value.empty()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": missing value for key '" + key + "'");
    }
    try {
      cfg.set(key, value);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

}  // namespace shardrec
