"""Dataset ingestion and pool construction."""

from leadopt.data.dataset import (
    ActivityRecord,
    TargetDataset,
    load_dataset,
    save_dataset,
)
from leadopt.data.pools import (
    ClusterProfile,
    cluster_records,
    prepare_pools,
    profile_clusters,
)

__all__ = [
    "ActivityRecord",
    "ClusterProfile",
    "TargetDataset",
    "cluster_records",
    "load_dataset",
    "prepare_pools",
    "profile_clusters",
    "save_dataset",
]
