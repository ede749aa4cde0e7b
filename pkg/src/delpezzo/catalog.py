"""The built-in catalog of large-volume types.

Each entry names a family of fundamental multiplets: a top Hirzebruch
surface, a divisor on it, and the admissible subscheme data per level.  A
single entry can cover several point configurations (splitting a subscheme
of given degree on a curve into points of various multiplicities); the
configurations descend to basic pairs that may or may not be isomorphic,
but they share the entry's volume and index, and the entry stores the
canonical key of every one of them.

The two degree-two configurations on the section get separate entries
("II_1" with one point, "II_2" with two) because their surfaces have
distinct toric models.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .elimination import NodeDatum, OnCurveDatum, Subscheme
from .lattice import Divisor, SurfaceModel
from .multiplet import Ladder, build_ladder


def _partitions(n: int, cap: int | None = None) -> list[tuple[int, ...]]:
    """Partitions of n into nonincreasing positive parts, each at most cap."""
    if cap is None:
        cap = n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, cap), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return out


def _on_sigma(parts: tuple[int, ...]) -> Subscheme:
    return Subscheme(tuple(OnCurveDatum("sigma", m, m) for m in parts))


def _on_fiber(parts: tuple[int, ...]) -> Subscheme:
    return Subscheme(tuple(OnCurveDatum("l_1", m, m) for m in parts))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    base_n: int
    eb: tuple[tuple[str, int], ...]  # (curve name, coefficient); fibers are tracked
    configs: tuple[tuple[Subscheme, ...], ...]  # per config: deltas, top level first
    volume: Fraction


def _length(a: int) -> int:
    return (a + 1) // 2


def _sigma_series(a: int, name: str, degree: int) -> CatalogEntry:
    """The five principal families: all data of degree d sit on the section."""
    b = _length(a)
    configs = []
    for parts in _partitions(degree):
        deltas = [Subscheme(()) for _ in range(b - 1)] + [_on_sigma(parts)]
        configs.append(tuple(deltas))
    if degree == 0:
        configs = [tuple(Subscheme(()) for _ in range(b))]
    return CatalogEntry(
        name,
        2 * a - degree,
        (("sigma", a - 1),),
        tuple(configs),
        Fraction(2 * a * a + (4 - degree) * a + 2, a),
    )


def catalog_entries(a: int) -> list[CatalogEntry]:
    """All catalog entries applicable at the given index."""
    if a < 2:
        raise ValueError("catalog starts at index 2")
    b = _length(a)
    entries = [
        _sigma_series(a, "O", 0),
        _sigma_series(a, "I", 1),
        CatalogEntry(
            "II_1",
            2 * a - 2,
            (("sigma", a - 1),),
            (tuple([Subscheme(()) for _ in range(b - 1)] + [_on_sigma((2,))]),),
            Fraction(2 * a * a + 2 * a + 2, a),
        ),
        CatalogEntry(
            "II_2",
            2 * a - 2,
            (("sigma", a - 1),),
            (tuple([Subscheme(()) for _ in range(b - 1)] + [_on_sigma((1, 1))]),),
            Fraction(2 * a * a + 2 * a + 2, a),
        ),
        _sigma_series(a, "III", 3),
        _sigma_series(a, "IV", 4),
    ]
    if a == 5:
        entries.append(
            CatalogEntry(
                "A5",
                8,
                (("sigma", 4), ("l_1", 2)),
                tuple(
                    tuple([_on_fiber(parts), Subscheme(()), Subscheme(())])
                    for parts in _partitions(2)
                ),
                Fraction(54, 5),
            )
        )
    if a == 4:
        entries.append(
            CatalogEntry(
                "B4",
                4,
                (("sigma", 3),),
                ((Subscheme((OnCurveDatum("sigma", 2, 3),)), Subscheme(())),),
                Fraction(8),
            )
        )
        entries.append(
            CatalogEntry(
                "C4",
                5,
                (("sigma", 3), ("l_1", 2)),
                (
                    (
                        Subscheme((OnCurveDatum("l_1", 1, 1),)),
                        Subscheme((NodeDatum("sigma", "l_1", 3, 3),)),
                    ),
                ),
                Fraction(8),
            )
        )
    return entries


def top_model(entry: CatalogEntry) -> tuple[SurfaceModel, Divisor]:
    model = SurfaceModel.hirzebruch(entry.base_n)
    coeffs = {}
    for name, c in entry.eb:
        if name != "sigma":
            model, _ = model.add_fiber(name)
        coeffs[model.curve_by_name(name).id] = c
    return model, Divisor.from_dict(coeffs)


def build_entry_ladder(entry: CatalogEntry, a: int, config: int = 0) -> Ladder:
    model, eb = top_model(entry)
    return build_ladder(a, model, eb, list(entry.configs[config]))


def entry_by_name(a: int, name: str) -> CatalogEntry:
    for e in catalog_entries(a):
        if e.name == name:
            return e
    raise KeyError(f"no catalog entry {name!r} at index {a}")


# CLI-facing type names; "II" expands to both configurations.
TYPE_NAMES = ("O", "I", "II", "III", "IV", "A5", "B4", "C4")


def entries_for_type(a: int, type_name: str) -> list[CatalogEntry]:
    if type_name == "II":
        return [entry_by_name(a, "II_1"), entry_by_name(a, "II_2")]
    return [entry_by_name(a, type_name)]
