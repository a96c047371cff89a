"""Iterative context-expansion campaigns and batch metrics."""

from leadopt.campaign.context import (
    Context,
    ContextEntry,
    EXPERIMENTAL,
    GENERATED,
    init_context,
    percentile,
    percentile_cutoff,
)
from leadopt.campaign.filtering import (
    AcceptedCandidate,
    FilterResult,
    RejectedCandidate,
    consensus_verdict,
    filter_and_label,
)
from leadopt.campaign.loop import (
    CampaignConfig,
    CampaignState,
    IterationReport,
    run_campaign,
    run_iteration,
)
from leadopt.campaign.metrics import (
    DescriptorScaler,
    EvalMetrics,
    eval_batch,
    frechet_distance,
    frechet_from_features,
    internal_diversity,
)

__all__ = [
    "AcceptedCandidate",
    "CampaignConfig",
    "CampaignState",
    "Context",
    "ContextEntry",
    "DescriptorScaler",
    "EXPERIMENTAL",
    "EvalMetrics",
    "FilterResult",
    "GENERATED",
    "IterationReport",
    "RejectedCandidate",
    "consensus_verdict",
    "eval_batch",
    "filter_and_label",
    "frechet_distance",
    "frechet_from_features",
    "init_context",
    "internal_diversity",
    "percentile",
    "percentile_cutoff",
    "run_campaign",
    "run_iteration",
]
