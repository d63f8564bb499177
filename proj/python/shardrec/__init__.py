"""Sharded recommender training with exact interaction unlearning."""

from shardrec._core import (  # noqa: F401
    AggMode,
    AggTrainConfig,
    Dataset,
    EmbeddingTable,
    Interaction,
    MetricBundle,
    ModelKind,
    PartitionConfig,
    PartitionKind,
    PipelineState,
    SeedPolicy,
    ShardAssignment,
    SplitSpec,
    TrainConfig,
    UnlearnReport,
    add_interaction,
    batch_unlearn,
    evaluate,
    full_retrain_baseline,
    load_assignment,
    load_interactions,
    load_table,
    make_partition,
    pretrain_for_partition,
    remove_interaction,
    save_assignment,
    save_dataset,
    save_table,
    score,
    split,
    train_model,
    train_pipeline,
    unlearn,
)

__all__ = [name for name in dir() if not name.startswith("_")]
