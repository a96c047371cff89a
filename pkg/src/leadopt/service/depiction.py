"""Server-side 2-D coordinates for molecule depiction.

Ring systems start from regular-polygon templates (fused rings are built
outward from shared edges); chains grow in alternating 60-degree zigzags;
a short deterministic force-directed pass relaxes overlaps. Quality is
best-effort by design — every client renders the same server-supplied
coordinates, so there is exactly one structure-handling implementation.
"""

from __future__ import annotations

import math

from leadopt.molgraph import MolGraph

BOND_LENGTH = 1.0
RELAX_STEPS = 60


def _place_ring(ring: tuple[int, ...], coords: dict[int, tuple[float, float]]) -> None:
    n = len(ring)
    placed = [a for a in ring if a in coords]
    if len(placed) >= 2:
        # Build on the first shared edge, on the side away from the
        # already-placed centroid.
        anchor = None
        for i in range(n):
            a, b = ring[i], ring[(i + 1) % n]
            if a in coords and b in coords:
                anchor = (i, a, b)
                break
        if anchor is None:
            a = placed[0]
            base = coords[a]
            cx, cy = base[0] + BOND_LENGTH, base[1]
        else:
            i, a, b = anchor
            ax, ay = coords[a]
            bx, by = coords[b]
            others = [coords[p] for p in coords if p not in (a, b)]
            mx, my = (ax + bx) / 2, (ay + by) / 2
            ex, ey = bx - ax, by - ay
            # unit normal, pointed away from existing geometry
            nx, ny = -ey, ex
            norm = math.hypot(nx, ny) or 1.0
            nx, ny = nx / norm, ny / norm
            if others:
                ox = sum(p[0] for p in others) / len(others)
                oy = sum(p[1] for p in others) / len(others)
                if (mx - ox) * nx + (my - oy) * ny < 0:
                    nx, ny = -nx, -ny
            radius = BOND_LENGTH / (2 * math.sin(math.pi / n))
            apothem = radius * math.cos(math.pi / n)
            cx, cy = mx + nx * apothem, my + ny * apothem
            start_angle = math.atan2(ay - cy, ax - cx)
            direction = ring.index(b) - ring.index(a)
            step = 2 * math.pi / n * (1 if direction in (1, 1 - n) else -1)
            for k in range(n):
                atom = ring[(ring.index(a) + k) % n]
                if atom not in coords:
                    angle = start_angle + step * k
                    coords[atom] = (
                        cx + radius * math.cos(angle),
                        cy + radius * math.sin(angle),
                    )
            return
    else:
        cx, cy = (0.0, 0.0) if not placed else (
            coords[placed[0]][0], coords[placed[0]][1] + BOND_LENGTH,
        )
    radius = BOND_LENGTH / (2 * math.sin(math.pi / n))
    for k, atom in enumerate(ring):
        if atom not in coords:
            angle = 2 * math.pi * k / n + math.pi / 2
            coords[atom] = (
                cx + radius * math.cos(angle),
                cy + radius * math.sin(angle),
            )


def _grow_chains(mol: MolGraph, coords: dict[int, tuple[float, float]]) -> None:
    pending = [i for i in range(len(mol.atoms)) if i not in coords]
    if not coords and pending:
        coords[pending[0]] = (0.0, 0.0)
    flip = 1.0
    progress = True
    while progress:
        progress = False
        for idx in range(len(mol.atoms)):
            if idx in coords:
                continue
            anchors = [n for n, _ in mol.adjacency[idx] if n in coords]
            if not anchors:
                continue
            anchor = anchors[0]
            ax, ay = coords[anchor]
            back = [n for n, _ in mol.adjacency[anchor] if n in coords and n != idx]
            if back:
                bx, by = coords[back[0]]
                base_angle = math.atan2(ay - by, ax - bx)
            else:
                base_angle = 0.0
            sibling_count = sum(
                1 for n, _ in mol.adjacency[anchor] if n in coords and n != anchor
            )
            angle = base_angle + flip * math.pi / 3 * (1 + 0.35 * sibling_count)
            flip = -flip
            coords[idx] = (
                ax + BOND_LENGTH * math.cos(angle),
                ay + BOND_LENGTH * math.sin(angle),
            )
            progress = True
    # Disconnected fragments line up left to right.
    placedless = [i for i in range(len(mol.atoms)) if i not in coords]
    offset = 0.0
    if placedless and coords:
        offset = max(x for x, _ in coords.values()) + 2.0
    for i in placedless:
        coords[i] = (offset, 0.0)
        offset += 1.5


def _relax(mol: MolGraph, coords: dict[int, tuple[float, float]]) -> None:
    ring_atoms = {a for ring in mol.rings for a in ring}
    n = len(mol.atoms)
    for _ in range(RELAX_STEPS):
        forces = {i: [0.0, 0.0] for i in range(n)}
        for bond in mol.bonds:
            ax, ay = coords[bond.a]
            bx, by = coords[bond.b]
            dx, dy = bx - ax, by - ay
            dist = math.hypot(dx, dy) or 1e-9
            pull = 0.3 * (dist - BOND_LENGTH) / dist
            forces[bond.a][0] += pull * dx
            forces[bond.a][1] += pull * dy
            forces[bond.b][0] -= pull * dx
            forces[bond.b][1] -= pull * dy
        for i in range(n):
            for j in range(i + 1, n):
                if mol.bond_between(i, j) is not None:
                    continue
                ax, ay = coords[i]
                bx, by = coords[j]
                dx, dy = bx - ax, by - ay
                dist2 = dx * dx + dy * dy
                if dist2 < 4.0:
                    dist = math.sqrt(dist2) or 1e-9
                    push = 0.12 / (dist2 + 0.1)
                    forces[i][0] -= push * dx / dist
                    forces[i][1] -= push * dy / dist
                    forces[j][0] += push * dx / dist
                    forces[j][1] += push * dy / dist
        for i in range(n):
            if i in ring_atoms:
                continue  # templates stay put
            x, y = coords[i]
            coords[i] = (x + forces[i][0], y + forces[i][1])


def depict(mol: MolGraph) -> dict:
    """Planar coordinates payload: atoms with positions, bonds with orders."""
    coords: dict[int, tuple[float, float]] = {}
    for ring in sorted(mol.rings, key=len, reverse=True):
        _place_ring(ring, coords)
    _grow_chains(mol, coords)
    _relax(mol, coords)

    xs = [coords[i][0] for i in range(len(mol.atoms))]
    ys = [coords[i][1] for i in range(len(mol.atoms))]
    cx = sum(xs) / len(xs) if xs else 0.0
    cy = sum(ys) / len(ys) if ys else 0.0

    return {
        "atoms": [
            {
                "index": atom.index,
                "element": atom.element,
                "aromatic": atom.is_aromatic,
                "charge": atom.formal_charge,
                "h_count": atom.implicit_h_count,
                "x": round(coords[atom.index][0] - cx, 4),
                "y": round(coords[atom.index][1] - cy, 4),
            }
            for atom in mol.atoms
        ],
        "bonds": [
            {"a": b.a, "b": b.b, "order": b.order}
            for b in mol.bonds
        ],
    }
