"""Circular atom-environment identifiers.

Each atom gets a 64-bit identifier per radius, computed by iterative
neighbourhood hashing: radius 0 hashes the atom's local invariant tuple
(atomic number, heavy degree, hydrogen count, formal charge, aromaticity);
radius r hashes the previous identifier together with the sorted list of
(bond order, neighbour identifier) pairs. The hash is BLAKE2b over a fixed
big-endian byte encoding, so identifiers are stable across platforms and
runs. An atom with no neighbours keeps its radius-0 identifier at every
radius (its environment cannot grow).

These identifiers serve three consumers: folded into bit fingerprints,
used as fragment tokens for the embedding vocabulary, and counted for the
synthesis-difficulty score.
"""

from __future__ import annotations

import hashlib
import struct
from collections import deque

from leadopt.errors import MultiFragmentError
from leadopt.molgraph import MolGraph


def stable_hash64(data: bytes) -> int:
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "big")


def _initial_identifier(mol: MolGraph, idx: int) -> int:
    atom = mol.atoms[idx]
    payload = struct.pack(
        ">4sIiiii",
        b"ENV0",
        atom.atomic_number,
        mol.heavy_degree(idx),
        atom.implicit_h_count,
        atom.formal_charge,
        1 if atom.is_aromatic else 0,
    )
    return stable_hash64(payload)


def _require_single_fragment(mol: MolGraph) -> None:
    if mol.fragment_count > 1:
        raise MultiFragmentError(
            "featurization requires a single-fragment molecule"
        )


def atom_identifiers(mol: MolGraph, radius: int) -> list[list[int]]:
    """identifiers[r][atom] for r in 0..radius."""
    _require_single_fragment(mol)
    n = len(mol.atoms)
    current = [_initial_identifier(mol, i) for i in range(n)]
    rounds = [list(current)]
    for r in range(1, radius + 1):
        nxt: list[int] = []
        for i in range(n):
            if not mol.adjacency[i]:
                nxt.append(current[i])
                continue
            nbrs = sorted(
                (mol.bonds[bidx].order, current[nbr])
                for nbr, bidx in mol.adjacency[i]
            )
            payload = struct.pack(">4sIQ", b"ENVr", r, current[i])
            payload += b"".join(struct.pack(">IQ", o, h) for o, h in nbrs)
            nxt.append(stable_hash64(payload))
        current = nxt
        rounds.append(list(current))
    return rounds


def _distances_from(mol: MolGraph, start: int) -> dict[int, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nbr, _ in mol.adjacency[cur]:
            if nbr not in dist:
                dist[nbr] = dist[cur] + 1
                queue.append(nbr)
    return dist


def fingerprint_identifiers(mol: MolGraph, radius: int) -> set[int]:
    """Deduplicated identifier set for fingerprinting.

    Radius-0 identifiers are all kept. At radius >= 1 an identifier is
    dropped when its environment (the set of bonds within the radius) was
    already registered by an earlier radius or, within the same radius, by a
    smaller identifier — the structural-duplicate rule of circular
    fingerprints, applied in identifier order so the result is independent
    of input atom order.
    """
    rounds = atom_identifiers(mol, radius)
    n = len(mol.atoms)
    dist = [_distances_from(mol, i) for i in range(n)]

    kept: set[int] = set(rounds[0])
    seen_envs: set[frozenset[int]] = {frozenset()}
    for r in range(1, len(rounds)):
        candidates = []
        for i in range(n):
            env = frozenset(
                bidx for bidx, bond in enumerate(mol.bonds)
                if min(dist[i].get(bond.a, 1 << 30), dist[i].get(bond.b, 1 << 30)) <= r - 1
            )
            candidates.append((rounds[r][i], env))
        candidates.sort(key=lambda t: t[0])
        for ident, env in candidates:
            if env in seen_envs:
                continue
            seen_envs.add(env)
            kept.add(ident)
    return kept


def fragment_tokens(mol: MolGraph, radius: int) -> list[int]:
    """Fragment token sequence, radius-major (all radius-0 identifiers in
    atom order, then radius-1, ...). Repeats are kept: token multiplicity
    carries information for both embeddings and frequency statistics."""
    rounds = atom_identifiers(mol, radius)
    return [ident for round_ids in rounds for ident in round_ids]
