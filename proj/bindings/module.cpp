#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "shardrec/config.hpp"
#include "shardrec/unlearn.hpp"

namespace py = pybind11;
using namespace shardrec;

namespace {

// PipelineState owns the submodel tables its aggregator points into, so the
// aggregator pointers must be refreshed whenever Python copies the state.
PretrainedEmbeddings as_pretrained(const EmbeddingTable& t) {
  return {t.user_vecs, t.item_vecs, t.dim};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sharded recommender training with exact interaction unlearning";

  py::class_<Interaction>(m, "Interaction")
      .def(py::init<int, int>(), py::arg("user"), py::arg("item"))
      .def_readwrite("user", &Interaction::user)
      .def_readwrite("item", &Interaction::item)
      .def("__eq__", [](const Interaction& a, const Interaction& b) { return a == b; })
      .def("__hash__", [](const Interaction& y) { return std::hash<std::int64_t>()(
                                                      (std::int64_t)y.user << 32 | y.item); })
      .def("__repr__", [](const Interaction& y) {
        return "Interaction(" + std::to_string(y.user) + ", " + std::to_string(y.item) + ")";
      });

  py::class_<Dataset>(m, "Dataset")
      .def_static("from_interactions", &Dataset::from_interactions, py::arg("num_users"),
                  py::arg("num_items"), py::arg("interactions"))
      .def_readonly("num_users", &Dataset::num_users)
      .def_readonly("num_items", &Dataset::num_items)
      .def_readonly("interactions", &Dataset::interactions)
      .def_readonly("user_adjacency", &Dataset::user_adjacency)
      .def_readonly("item_adjacency", &Dataset::item_adjacency)
      .def("contains", &Dataset::contains)
      .def("__len__", [](const Dataset& d) { return d.size(); });

  m.def("load_interactions", &load_interactions, py::arg("path"),
        py::arg("separator") = std::nullopt, py::arg("rating_threshold") = std::nullopt);
  m.def("remove_interaction", &remove_interaction);
  m.def("add_interaction", &add_interaction);
  m.def("save_dataset", &save_dataset);

  py::class_<SplitSpec>(m, "SplitSpec")
      .def(py::init([](double train_fraction, double validation_fraction_of_train,
                       std::uint64_t seed) {
             return SplitSpec{train_fraction, validation_fraction_of_train, seed};
           }),
           py::arg("train_fraction") = 0.8, py::arg("validation_fraction_of_train") = 0.1,
           py::arg("seed") = 0);
  m.def("split", [](const Dataset& d, const SplitSpec& spec) {
    auto r = split(d, spec);
    return py::make_tuple(std::move(r.train), std::move(r.validation), std::move(r.test));
  });

  py::enum_<ModelKind>(m, "ModelKind")
      .value("bpr", ModelKind::bpr)
      .value("wmf", ModelKind::wmf)
      .value("lightgcn", ModelKind::lightgcn);
  py::enum_<PartitionKind>(m, "PartitionKind")
      .value("user", PartitionKind::user)
      .value("item", PartitionKind::item)
      .value("interaction", PartitionKind::interaction)
      .value("random", PartitionKind::random);
  py::enum_<AggMode>(m, "AggMode")
      .value("attention", AggMode::attention)
      .value("mean", AggMode::mean)
      .value("static_weights", AggMode::static_weights);
  py::enum_<SeedPolicy>(m, "SeedPolicy")
      .value("reuse_original", SeedPolicy::reuse_original)
      .value("fresh", SeedPolicy::fresh);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("model", &TrainConfig::model)
      .def_readwrite("dim", &TrainConfig::dim)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("max_epochs", &TrainConfig::max_epochs)
      .def_readwrite("early_stop_patience", &TrainConfig::early_stop_patience)
      .def_readwrite("l2_reg", &TrainConfig::l2_reg)
      .def_readwrite("negative_weight", &TrainConfig::negative_weight)
      .def_readwrite("num_layers", &TrainConfig::num_layers)
      .def_readwrite("validate_every", &TrainConfig::validate_every)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("shard_local_validation", &TrainConfig::shard_local_validation);

  py::class_<EmbeddingTable>(m, "EmbeddingTable")
      .def_readonly("user_vecs", &EmbeddingTable::user_vecs)
      .def_readonly("item_vecs", &EmbeddingTable::item_vecs)
      .def_readonly("dim", &EmbeddingTable::dim);
  m.def("score", &score);
  m.def("train_model", &train_model, py::arg("train"), py::arg("config"),
        py::arg("validation") = nullptr, py::call_guard<py::gil_scoped_release>());
  m.def("save_table", &save_table);
  m.def("load_table", &load_table);

  py::class_<PartitionConfig>(m, "PartitionConfig")
      .def(py::init<>())
      .def_readwrite("num_shards", &PartitionConfig::num_shards)
      .def_readwrite("capacity", &PartitionConfig::capacity)
      .def_readwrite("max_iterations", &PartitionConfig::max_iterations)
      .def_readwrite("seed", &PartitionConfig::seed)
      .def_readwrite("tolerance", &PartitionConfig::tolerance);

  py::class_<ShardAssignment>(m, "ShardAssignment")
      .def_readonly("kind", &ShardAssignment::kind)
      .def_readonly("num_shards", &ShardAssignment::num_shards)
      .def_readonly("capacity", &ShardAssignment::capacity)
      .def_readonly("shards", &ShardAssignment::shards)
      .def("locate", &ShardAssignment::locate);

  m.def(
      "make_partition",
      [](PartitionKind kind, const Dataset& train, const PartitionConfig& cfg,
         const EmbeddingTable* emb) {
        if (emb == nullptr) return make_partition(kind, train, nullptr, cfg);
        PretrainedEmbeddings pe = as_pretrained(*emb);
        return make_partition(kind, train, &pe, cfg);
      },
      py::arg("kind"), py::arg("train"), py::arg("config"), py::arg("embeddings") = nullptr,
      py::call_guard<py::gil_scoped_release>());
  m.def("pretrain_for_partition",
        [](const Dataset& train, const TrainConfig& cfg) {
          PretrainedEmbeddings emb = pretrain_for_partition(train, cfg);
          return EmbeddingTable{std::move(emb.user_vecs), std::move(emb.item_vecs), emb.dim};
        },
        py::call_guard<py::gil_scoped_release>());
  m.def("save_assignment", &save_assignment);
  m.def("load_assignment", &load_assignment);

  py::class_<AggTrainConfig>(m, "AggTrainConfig")
      .def(py::init<>())
      .def_readwrite("learning_rate", &AggTrainConfig::learning_rate)
      .def_readwrite("max_epochs", &AggTrainConfig::max_epochs)
      .def_readwrite("early_stop_patience", &AggTrainConfig::early_stop_patience)
      .def_readwrite("batch_size", &AggTrainConfig::batch_size)
      .def_readwrite("sample_fraction", &AggTrainConfig::sample_fraction)
      .def_readwrite("seed", &AggTrainConfig::seed);

  py::class_<MetricBundle>(m, "MetricBundle")
      .def_readonly("recall", &MetricBundle::recall)
      .def_readonly("ndcg", &MetricBundle::ndcg)
      .def_readonly("num_users_evaluated", &MetricBundle::num_users_evaluated);
  m.def("evaluate", &evaluate, py::arg("table"), py::arg("train"), py::arg("test"),
        py::arg("cutoffs") = std::vector<int>{10, 20, 50},
        py::call_guard<py::gil_scoped_release>());

  py::class_<PipelineState>(m, "PipelineState")
      .def_readonly("train", &PipelineState::train)
      .def_readonly("assignment", &PipelineState::assignment)
      .def_readonly("submodels", &PipelineState::submodels)
      .def_readonly("aggregated", &PipelineState::aggregated);

  m.def(
      "train_pipeline",
      [](const Dataset& train, const ShardAssignment& assignment, const TrainConfig& base_cfg,
         const Dataset* validation, const AggTrainConfig& agg_cfg, AggMode agg_mode,
         int attention_dim, double agg_l2) {
        return train_pipeline(train, validation, assignment, base_cfg, agg_cfg, agg_mode,
                              attention_dim, agg_l2);
      },
      py::arg("train"), py::arg("assignment"), py::arg("base_config"),
      py::arg("validation") = nullptr, py::arg("agg_config") = AggTrainConfig{},
      py::arg("agg_mode") = AggMode::attention, py::arg("attention_dim") = 32,
      py::arg("agg_l2") = 1e-5, py::call_guard<py::gil_scoped_release>());

  py::class_<UnlearnReport>(m, "UnlearnReport")
      .def_readonly("shard", &UnlearnReport::shard)
      .def_readonly("shard_retrain_seconds", &UnlearnReport::shard_retrain_seconds)
      .def_readonly("aggregator_retrain_seconds", &UnlearnReport::aggregator_retrain_seconds)
      .def_readonly("total_seconds", &UnlearnReport::total_seconds)
      .def_readonly("full_retrain_seconds", &UnlearnReport::full_retrain_seconds)
      .def_readonly("utility_after", &UnlearnReport::utility_after);

  m.def(
      "unlearn",
      [](PipelineState& state, const Interaction& target, SeedPolicy policy,
         const Dataset* test) {
        return unlearn(state, {target, policy}, test);
      },
      py::arg("state"), py::arg("target"), py::arg("seed_policy") = SeedPolicy::reuse_original,
      py::arg("test") = nullptr, py::call_guard<py::gil_scoped_release>());
  m.def(
      "full_retrain_baseline",
      [](const PipelineState& state, const Interaction& target, SeedPolicy policy,
         const Dataset* test) {
        return full_retrain_baseline(state, {target, policy}, test);
      },
      py::arg("state"), py::arg("target"), py::arg("seed_policy") = SeedPolicy::reuse_original,
      py::arg("test") = nullptr, py::call_guard<py::gil_scoped_release>());
  m.def(
      "batch_unlearn",
      [](PipelineState& state, const std::vector<Interaction>& targets,
         bool coalesce_same_shard, SeedPolicy policy, const Dataset* test) {
        std::vector<UnlearnRequest> reqs;
        for (const auto& t : targets) reqs.push_back({t, policy});
        return batch_unlearn(state, reqs, coalesce_same_shard, test);
      },
      py::arg("state"), py::arg("targets"), py::arg("coalesce_same_shard") = false,
      py::arg("seed_policy") = SeedPolicy::reuse_original, py::arg("test") = nullptr,
      py::call_guard<py::gil_scoped_release>());
}
