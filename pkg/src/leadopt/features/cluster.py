"""Leader-style (Butina) clustering on fingerprint similarity."""

from __future__ import annotations

from leadopt.errors import ValidationError
from leadopt.features.fingerprint import Fingerprint, tanimoto_similarity


def butina_cluster(fps: list[Fingerprint], threshold: float) -> list[int]:
    """Cluster id per molecule.

    Candidates are ordered by neighbour count at >= threshold (ties by
    index); each unassigned candidate founds a cluster and claims its
    unassigned neighbours. Every input lands in exactly one cluster.
    """
    if not fps:
        raise ValidationError("clustering needs at least one fingerprint")
    n = len(fps)
    neighbors: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if tanimoto_similarity(fps[i], fps[j]) >= threshold:
                neighbors[i].append(j)
                neighbors[j].append(i)

    order = sorted(range(n), key=lambda i: (-len(neighbors[i]), i))
    assignment = [-1] * n
    next_cluster = 0
    for i in order:
        if assignment[i] != -1:
            continue
        assignment[i] = next_cluster
        for j in neighbors[i]:
            if assignment[j] == -1:
                assignment[j] = next_cluster
        next_cluster += 1
    return assignment
