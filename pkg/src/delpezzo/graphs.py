"""Canonical labeling of small weighted graphs.

The configurations this engine compares are tiny (a handful of weighted
vertices, forest-shaped in practice), so canonicalization is done by
refining vertex colours Weisfeiler-Lehman style and then brute-forcing
permutations inside the remaining colour classes, keeping the
lexicographically smallest encoding.  Degree-zero vertices never need
permuting: with equal weights their order cannot change the encoding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

_PERM_CAP = 2_000_000


class CanonicalizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class WeightedGraph:
    weights: tuple[tuple[int, ...], ...]
    edges: frozenset[frozenset[int]]

    @staticmethod
    def build(weights, edge_pairs) -> "WeightedGraph":
        return WeightedGraph(
            tuple(tuple(w) for w in weights),
            frozenset(frozenset(e) for e in edge_pairs),
        )

    @property
    def order(self) -> int:
        return len(self.weights)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def neighbours(self, v: int) -> list[int]:
        out = []
        for e in self.edges:
            if v in e:
                (w,) = e - {v}
                out.append(w)
        return sorted(out)


def _stable_colours(g: WeightedGraph) -> list[tuple]:
    colours: list[tuple] = [(g.weights[v], g.degree(v)) for v in range(g.order)]
    while True:
        refined = [
            (colours[v], tuple(sorted(colours[u] for u in g.neighbours(v))))
            for v in range(g.order)
        ]
        if len(set(refined)) == len(set(colours)):
            return refined
        colours = refined


def canonical_key(g: WeightedGraph) -> tuple:
    """A complete isomorphism invariant of the weighted graph."""
    n = g.order
    if n == 0:
        return ((), ())
    colours = _stable_colours(g)
    order_by_colour = sorted(range(n), key=lambda v: (colours[v], v))
    groups: list[list[int]] = []
    for v in order_by_colour:
        if groups and colours[groups[-1][0]] == colours[v]:
            groups[-1].append(v)
        else:
            groups.append([v])

    # Degree-zero classes are inert: any ordering gives the same encoding.
    fixed: list[list[int]] = []
    movable: list[list[int]] = []
    total = 1
    for grp in groups:
        if len(grp) == 1 or all(g.degree(v) == 0 for v in grp):
            fixed.append(grp)
            movable.append([])
        else:
            fixed.append([])
            movable.append(grp)
            for t in range(2, len(grp) + 1):
                total *= t
            if total > _PERM_CAP:
                raise CanonicalizationError(
                    f"too many candidate labelings ({total}) for a graph on {n} vertices"
                )

    best = None
    perm_sets = [
        itertools.permutations(grp) if grp else ((),) for grp in movable
    ]
    for choice in itertools.product(*perm_sets):
        order: list[int] = []
        for grp_fixed, grp_perm in zip(fixed, choice):
            order.extend(grp_fixed if grp_fixed else grp_perm)
        pos = {v: i for i, v in enumerate(order)}
        enc_weights = tuple(g.weights[v] for v in order)
        enc_edges = tuple(sorted(tuple(sorted((pos[a], pos[b]))) for a, b in map(tuple, g.edges)))
        enc = (enc_weights, enc_edges)
        if best is None or enc < best:
            best = enc
    return best


def isomorphic(g1: WeightedGraph, g2: WeightedGraph) -> bool:
    return canonical_key(g1) == canonical_key(g2)
