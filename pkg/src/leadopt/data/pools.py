"""Dataset pools: top-cluster actives, lead structures, and the remainder.

Records are clustered on circular fingerprints; clusters are scored by the
mean activity of their five most active members (robust to cluster size).
The highest-scoring cluster donates its twenty most active molecules as the
experimental-test pool; the fifty most active molecules outside that cluster
become the lead pool; everything except the top twenty forms the remainder.
Ties always break by canonical SMILES so pooling is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from leadopt.data.dataset import TargetDataset
from leadopt.errors import InsufficientDataError
from leadopt.features import FragmentVocabulary, butina_cluster, circular_fingerprint
from leadopt.molgraph import parse_smiles
from leadopt.properties import crippen_logp, ertl_tpsa, molecular_weight, sa_score

DEFAULT_CLUSTER_THRESHOLD = 0.65
BEST_POOL_SIZE = 20
LEAD_POOL_SIZE = 50
TOP_MEMBERS_FOR_SCORE = 5


@dataclass(frozen=True)
class ClusterProfile:
    cluster_id: int
    members: tuple[int, ...]
    mean_activity: float
    max_activity: float
    mean_mw: float
    mean_sa: float
    mean_tpsa: float
    mean_logp: float

    @property
    def size(self) -> int:
        return len(self.members)


def _activity_order(ds: TargetDataset, indices) -> list[int]:
    return sorted(indices, key=lambda i: (-ds.records[i].activity, ds.records[i].smiles))


def cluster_records(ds: TargetDataset, threshold: float) -> list[int]:
    fps = [circular_fingerprint(parse_smiles(r.smiles)) for r in ds.records]
    return butina_cluster(fps, threshold)


def _cluster_score(ds: TargetDataset, members: list[int]) -> float:
    top = _activity_order(ds, members)[:TOP_MEMBERS_FOR_SCORE]
    return sum(ds.records[i].activity for i in top) / len(top)


def prepare_pools(
    ds: TargetDataset,
    vocab: FragmentVocabulary | None = None,
    threshold: float = DEFAULT_CLUSTER_THRESHOLD,
) -> TargetDataset:
    """Assign best20 / pool50 / allminus20 index pools in place.

    The vocabulary is only needed when cluster profiling is requested
    downstream; pooling itself runs on fingerprints and activities.
    """
    n = len(ds.records)
    if n < BEST_POOL_SIZE + LEAD_POOL_SIZE:
        raise InsufficientDataError(
            f"pooling needs at least {BEST_POOL_SIZE + LEAD_POOL_SIZE} records, got {n}"
        )
    assignment = cluster_records(ds, threshold)
    clusters: dict[int, list[int]] = {}
    for idx, cid in enumerate(assignment):
        clusters.setdefault(cid, []).append(idx)

    scored = sorted(
        clusters.items(),
        key=lambda item: (-_cluster_score(ds, item[1]), item[0]),
    )
    top_cluster_id, top_members = scored[0]

    best = _activity_order(ds, top_members)[:BEST_POOL_SIZE]
    if len(best) < BEST_POOL_SIZE:
        # Degenerate clustering: fill from the most active outsiders.
        outside = _activity_order(
            ds, [i for i in range(n) if assignment[i] != top_cluster_id]
        )
        best = best + outside[:BEST_POOL_SIZE - len(best)]

    best_set = set(best)
    lead_candidates = [
        i for i in range(n)
        if assignment[i] != top_cluster_id and i not in best_set
    ]
    pool50 = _activity_order(ds, lead_candidates)[:LEAD_POOL_SIZE]

    ds.best20 = best
    ds.pool50 = pool50
    ds.allminus20 = [i for i in range(n) if i not in best_set]
    return ds


def profile_clusters(
    ds: TargetDataset,
    assignment: list[int],
    vocab: FragmentVocabulary,
) -> list[ClusterProfile]:
    """Per-cluster aggregates of activity and the property profile."""
    clusters: dict[int, list[int]] = {}
    for idx, cid in enumerate(assignment):
        clusters.setdefault(cid, []).append(idx)

    out = []
    for cid in sorted(clusters):
        members = clusters[cid]
        mols = [parse_smiles(ds.records[i].smiles) for i in members]
        activities = [ds.records[i].activity for i in members]
        k = len(members)
        out.append(ClusterProfile(
            cluster_id=cid,
            members=tuple(members),
            mean_activity=sum(activities) / k,
            max_activity=max(activities),
            mean_mw=sum(molecular_weight(m) for m in mols) / k,
            mean_sa=sum(sa_score(m, vocab) for m in mols) / k,
            mean_tpsa=sum(ertl_tpsa(m) for m in mols) / k,
            mean_logp=sum(crippen_logp(m) for m in mols) / k,
        ))
    return out
