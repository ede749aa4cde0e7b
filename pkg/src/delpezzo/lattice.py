"""Picard lattices of blown-up rational surfaces, with exact integer arithmetic.

A ``SurfaceModel`` is a base surface (the projective plane, or a Hirzebruch
surface F_n) together with an ordered tape of point blow-ups.  Divisor
classes are integer vectors over the basis ``(h)`` resp. ``(sigma, l)`` plus
one exceptional class per tape entry; the intersection form is ``h^2 = 1``
resp. ``sigma^2 = -n, sigma.l = 1, l^2 = 0`` with exceptional classes of
square -1 orthogonal to everything else.

Curves are tracked symbolically, by incidence only.  Every tracked curve is
a smooth rational curve, two tracked curves meet transversally in at most
one point, and a blow-up centre is described by which tracked curves pass
through it (none, one, or a node of two).  Under these conventions the
divisor class of a strict transform determines all intersection numbers,
so no coordinates are ever needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class StructuralError(ValueError):
    """Raised when lattice data from different or incompatible models meet."""


class InvalidPointError(StructuralError):
    """Raised for a blow-up centre that the incidence conventions forbid."""


@dataclass(frozen=True)
class DivisorClass:
    """Integer vector in the lattice basis: base part plus exceptional part."""

    base: tuple[int, ...]
    exc: tuple[int, ...] = ()

    def _check_compatible(self, other: "DivisorClass") -> None:
        if len(self.base) != len(other.base) or len(self.exc) != len(other.exc):
            raise StructuralError(
                f"divisor classes live in different lattices: "
                f"({len(self.base)},{len(self.exc)}) vs ({len(other.base)},{len(other.exc)})"
            )

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._check_compatible(other)
        return DivisorClass(
            tuple(a + b for a, b in zip(self.base, other.base)),
            tuple(a + b for a, b in zip(self.exc, other.exc)),
        )

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._check_compatible(other)
        return DivisorClass(
            tuple(a - b for a, b in zip(self.base, other.base)),
            tuple(a - b for a, b in zip(self.exc, other.exc)),
        )

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-a for a in self.base), tuple(-a for a in self.exc))

    def __rmul__(self, c: int) -> "DivisorClass":
        return DivisorClass(tuple(c * a for a in self.base), tuple(c * a for a in self.exc))

    __mul__ = __rmul__

    def pad(self, exc_len: int) -> "DivisorClass":
        """Extend the exceptional part with zeros (pullback to a later model)."""
        if exc_len < len(self.exc):
            raise StructuralError("cannot shrink the exceptional part")
        return DivisorClass(self.base, self.exc + (0,) * (exc_len - len(self.exc)))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.base) and all(a == 0 for a in self.exc)


# Blow-up centre specifications.  ``GenericPoint`` lies on no tracked curve,
# ``OnCurvePoint`` on exactly one (at a generic point of it), ``NodePoint``
# at the unique intersection point of two tracked curves.


@dataclass(frozen=True)
class GenericPoint:
    pass


@dataclass(frozen=True)
class OnCurvePoint:
    curve: int


@dataclass(frozen=True)
class NodePoint:
    curve1: int
    curve2: int


BlowUpPoint = GenericPoint | OnCurvePoint | NodePoint


@dataclass(frozen=True)
class CurveRecord:
    """A tracked curve: opaque id, printable name, current strict-transform class."""

    id: int
    name: str
    cls: DivisorClass
    alive: bool = True


@dataclass(frozen=True)
class BlowUpRecord:
    point: BlowUpPoint
    incident: tuple[int, ...]  # ids of tracked curves through the centre


@dataclass(frozen=True)
class Divisor:
    """Formal integer combination of tracked curves, stored as sorted (id, coeff) pairs."""

    items: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def from_dict(coeffs: dict[int, int]) -> "Divisor":
        return Divisor(tuple(sorted((c, v) for c, v in coeffs.items() if v != 0)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def coeff(self, curve_id: int) -> int:
        for c, v in self.items:
            if c == curve_id:
                return v
        return 0

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(c for c, _ in self.items)

    def is_effective(self) -> bool:
        return all(v >= 0 for _, v in self.items)

    def is_zero(self) -> bool:
        return not self.items

    def __add__(self, other: "Divisor") -> "Divisor":
        out = self.as_dict()
        for c, v in other.items:
            out[c] = out.get(c, 0) + v
        return Divisor.from_dict(out)

    def __rmul__(self, c: int) -> "Divisor":
        return Divisor.from_dict({k: c * v for k, v in self.items})

    __mul__ = __rmul__

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-1) * other

    def class_in(self, model: "SurfaceModel") -> DivisorClass:
        cls = model.zero_class()
        for c, v in self.items:
            cls = cls + v * model.curve(c).cls
        return cls


@dataclass(frozen=True)
class DualVertex:
    name: str
    self_intersection: int
    coeff: int | None = None


@dataclass(frozen=True)
class DualGraph:
    """Dual graph of a curve configuration; vertices in creation order."""

    vertices: tuple[DualVertex, ...]
    edges: tuple[tuple[int, int], ...]

    def to_dot(self) -> str:
        lines = ["graph dual {"]
        for i, v in enumerate(self.vertices):
            if v.coeff is None:
                label = f"{v.name}\\n(s={v.self_intersection})"
            else:
                label = f"{v.name}\\n(s={v.self_intersection}, c={v.coeff})"
            lines.append(f'  v{i} [label="{label}"];')
        for i, j in self.edges:
            lines.append(f"  v{i} -- v{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SurfaceModel:
    """A base surface plus a blow-up tape and the table of tracked curves.

    Immutable; ``blow_up`` and ``add_fiber`` return new models.  Curve ids
    are indices into ``curves`` and stay valid in every later model.
    """

    base_kind: str  # "P2" or "Fn"
    n: int
    tape: tuple[BlowUpRecord, ...] = ()
    curves: tuple[CurveRecord, ...] = ()
    next_point_index: int = 1

    @staticmethod
    def projective_plane() -> "SurfaceModel":
        return SurfaceModel("P2", 0)

    @staticmethod
    def hirzebruch(n: int) -> "SurfaceModel":
        """F_n with the minimal section already tracked (named ``sigma``)."""
        if n < 0:
            raise StructuralError("Hirzebruch degree must be nonnegative")
        sigma = CurveRecord(0, "sigma", DivisorClass((1, 0)))
        return SurfaceModel("Fn", n, curves=(sigma,))

    # -- basic lattice data ------------------------------------------------

    @property
    def base_rank(self) -> int:
        return 1 if self.base_kind == "P2" else 2

    @property
    def exc_count(self) -> int:
        return len(self.tape)

    @property
    def picard_rank(self) -> int:
        return self.base_rank + self.exc_count

    def zero_class(self) -> DivisorClass:
        return DivisorClass((0,) * self.base_rank, (0,) * self.exc_count)

    def base_class(self, *coords: int) -> DivisorClass:
        if len(coords) != self.base_rank:
            raise StructuralError("wrong number of base coordinates")
        return DivisorClass(tuple(coords), (0,) * self.exc_count)

    def exc_class(self, j: int) -> DivisorClass:
        exc = [0] * self.exc_count
        exc[j] = 1
        return DivisorClass((0,) * self.base_rank, tuple(exc))

    def sigma_class(self) -> DivisorClass:
        return self.base_class(1, 0)

    def fiber_class(self) -> DivisorClass:
        return self.base_class(0, 1)

    def line_class(self) -> DivisorClass:
        return self.base_class(1)

    def _check_class(self, d: DivisorClass) -> None:
        if len(d.base) != self.base_rank or len(d.exc) != self.exc_count:
            raise StructuralError(
                f"class of shape ({len(d.base)},{len(d.exc)}) does not live on this "
                f"model of shape ({self.base_rank},{self.exc_count})"
            )

    def intersect(self, d1: DivisorClass, d2: DivisorClass) -> int:
        self._check_class(d1)
        self._check_class(d2)
        if self.base_kind == "P2":
            val = d1.base[0] * d2.base[0]
        else:
            p1, q1 = d1.base
            p2, q2 = d2.base
            val = -self.n * p1 * p2 + p1 * q2 + q1 * p2
        return val - sum(a * b for a, b in zip(d1.exc, d2.exc))

    def canonical_class(self) -> DivisorClass:
        if self.base_kind == "P2":
            base = (-3,)
        else:
            base = (-2, -(self.n + 2))
        return DivisorClass(base, (1,) * self.exc_count)

    # -- tracked curves ----------------------------------------------------

    def curve(self, curve_id: int) -> CurveRecord:
        try:
            return self.curves[curve_id]
        except IndexError:
            raise StructuralError(f"no tracked curve with id {curve_id}") from None

    def curve_by_name(self, name: str) -> CurveRecord:
        for rec in self.curves:
            if rec.name == name:
                return rec
        raise StructuralError(f"no tracked curve named {name!r}")

    def resolve(self, ref: int | str) -> int:
        return self.curve_by_name(ref).id if isinstance(ref, str) else self.curve(ref).id

    def self_intersection(self, curve_id: int) -> int:
        c = self.curve(curve_id).cls
        return self.intersect(c, c)

    def intersection(self, id1: int, id2: int) -> int:
        return self.intersect(self.curve(id1).cls, self.curve(id2).cls)

    def add_fiber(self, name: str | None = None) -> tuple["SurfaceModel", CurveRecord]:
        """Track one more fiber of F_n (all fibers are disjoint, each meets sigma once)."""
        if self.base_kind != "Fn":
            raise StructuralError("fibers only exist on Hirzebruch models")
        if name is None:
            k = sum(1 for r in self.curves if r.name.startswith("l_")) + 1
            name = f"l_{k}"
        rec = CurveRecord(len(self.curves), name, self.fiber_class().pad(self.exc_count))
        return (
            SurfaceModel(self.base_kind, self.n, self.tape, self.curves + (rec,), self.next_point_index),
            rec,
        )

    def blow_up(
        self, point: BlowUpPoint, name: str | None = None
    ) -> tuple["SurfaceModel", CurveRecord]:
        """Blow up one point; returns the new model and the new exceptional curve.

        Strict transforms of the tracked curves through the centre drop by the
        new exceptional class.  A ``NodePoint`` requires the two curves to meet
        (intersection number exactly one); blowing it up separates them.
        """
        if isinstance(point, GenericPoint):
            incident: tuple[int, ...] = ()
        elif isinstance(point, OnCurvePoint):
            rec = self.curve(point.curve)
            if not rec.alive:
                raise InvalidPointError(f"curve {rec.name} is not alive")
            incident = (rec.id,)
        elif isinstance(point, NodePoint):
            r1, r2 = self.curve(point.curve1), self.curve(point.curve2)
            if r1.id == r2.id:
                raise InvalidPointError("a node needs two distinct curves")
            if self.intersection(r1.id, r2.id) != 1:
                raise InvalidPointError(
                    f"curves {r1.name} and {r2.name} do not meet in a single node"
                )
            incident = (r1.id, r2.id)
        else:
            raise InvalidPointError(f"unknown point specification {point!r}")

        j = self.exc_count
        new_exc = len(self.tape) + 1
        curves = []
        for rec in self.curves:
            cls = rec.cls.pad(new_exc)
            if rec.id in incident:
                exc = list(cls.exc)
                exc[j] = -1
                cls = DivisorClass(cls.base, tuple(exc))
            curves.append(CurveRecord(rec.id, rec.name, cls, rec.alive))
        if name is None:
            name = f"e_{new_exc}"
        exc_cls = DivisorClass((0,) * self.base_rank, (0,) * j + (1,))
        new_rec = CurveRecord(len(curves), name, exc_cls)
        curves.append(new_rec)
        model = SurfaceModel(
            self.base_kind,
            self.n,
            self.tape + (BlowUpRecord(point, incident),),
            tuple(curves),
            self.next_point_index,
        )
        return model, new_rec

    def bump_point_index(self, count: int = 1) -> "SurfaceModel":
        return SurfaceModel(
            self.base_kind, self.n, self.tape, self.curves, self.next_point_index + count
        )

    # -- base-cone tests (valid on the minimal surface only) ----------------

    def nef_on_base(self, d: DivisorClass) -> bool:
        """Closed nef criterion on the minimal base; requires an empty tape."""
        self._check_class(d)
        if any(a != 0 for a in d.exc):
            raise StructuralError("nef criterion only applies to pullback-free classes")
        if self.base_kind == "P2":
            return d.base[0] >= 0
        p, q = d.base
        return p >= 0 and q >= self.n * p

    def effective_on_base(self, d: DivisorClass) -> bool:
        """Effectivity on the minimal base: the effective cone is spanned by the basis."""
        self._check_class(d)
        if any(a != 0 for a in d.exc):
            raise StructuralError("effectivity test only applies to pullback-free classes")
        return all(a >= 0 for a in d.base)

    # -- dual graphs ---------------------------------------------------------

    def dual_graph(
        self, support: tuple[int, ...] | list[int], coeffs: dict[int, int] | None = None
    ) -> DualGraph:
        ids = sorted(set(support))
        vertices = tuple(
            DualVertex(
                self.curve(c).name,
                self.self_intersection(c),
                None if coeffs is None else coeffs.get(c, 0),
            )
            for c in ids
        )
        edges = []
        for a, b in itertools.combinations(range(len(ids)), 2):
            v = self.intersection(ids[a], ids[b])
            if v not in (0, 1):
                raise StructuralError(
                    f"tracked curves {ids[a]} and {ids[b]} meet {v} times; "
                    "dual graphs need pairwise intersection 0 or 1"
                )
            if v == 1:
                edges.append((a, b))
        return DualGraph(vertices, tuple(edges))
