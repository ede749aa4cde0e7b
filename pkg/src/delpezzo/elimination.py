"""Curvilinear subschemes and their eliminations.

A zero-dimensional subscheme in which every point has order one sits on a
smooth local arc, so combinatorially a point of it is just a multiplicity
``m`` together with contact orders against the tracked curves through it.
Three kinds of local data cover everything this engine needs:

* ``OnCurveDatum(curve, k, m)``: a point on one tracked curve, meeting it
  with contact ``k`` (``1 <= k <= m``);
* ``NodeDatum(curve1, curve2, k2, m)``: a point at the node of two tracked
  curves, contact 1 along the first branch and ``k2`` along the second;
* ``FreeDatum(m)``: a point on no tracked curve.

The elimination of a subscheme blows the points up into straight chains:
``m`` blow-ups per point, the first ``k`` following the host curve, the
rest free on the last exceptional.  Each chain consists of (-2)-curves
ending in a single (-1)-curve, and the relative canonical divisor carries
coefficient ``i`` on the i-th chain curve.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import (
    Divisor,
    DivisorClass,
    GenericPoint,
    NodePoint,
    OnCurvePoint,
    StructuralError,
    SurfaceModel,
)


@dataclass(frozen=True)
class OnCurveDatum:
    curve: int | str
    k: int
    m: int

    def __post_init__(self) -> None:
        if not (1 <= self.k <= self.m):
            raise StructuralError(f"contact order must satisfy 1 <= k <= m, got k={self.k}, m={self.m}")


@dataclass(frozen=True)
class NodeDatum:
    curve1: int | str
    curve2: int | str
    k2: int
    m: int

    def __post_init__(self) -> None:
        if not (1 <= self.k2 <= self.m):
            raise StructuralError(f"contact order must satisfy 1 <= k2 <= m, got k2={self.k2}, m={self.m}")


@dataclass(frozen=True)
class FreeDatum:
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise StructuralError("multiplicity must be positive")


LocalDatum = OnCurveDatum | NodeDatum | FreeDatum


@dataclass(frozen=True)
class Subscheme:
    points: tuple[LocalDatum, ...] = ()

    @property
    def degree(self) -> int:
        return sum(p.m for p in self.points)

    def is_empty(self) -> bool:
        return not self.points

    def contact(self, curve_id: int) -> int:
        """Total contact order against one tracked curve, summed over points."""
        total = 0
        for p in self.points:
            if isinstance(p, OnCurveDatum) and p.curve == curve_id:
                total += p.k
            elif isinstance(p, NodeDatum):
                if p.curve1 == curve_id:
                    total += 1
                if p.curve2 == curve_id:
                    total += p.k2
        return total


@dataclass(frozen=True)
class EliminationStep:
    exc_index: int  # index of the new exceptional class in the final lattice
    incident: tuple[int, ...]  # tracked-curve ids through the centre
    new_curve: int  # id of the new exceptional curve record


@dataclass(frozen=True)
class EliminationResult:
    """The blown-up model together with the chain bookkeeping.

    ``chains`` lists, per subscheme point, the curve ids of its exceptional
    chain in creation order (the last entry is the (-1)-curve).
    """

    model: SurfaceModel
    subscheme: Subscheme
    chains: tuple[tuple[int, ...], ...]
    steps: tuple[EliminationStep, ...]
    base_exc_count: int  # exceptional classes before the elimination

    @property
    def new_exc_indices(self) -> tuple[int, ...]:
        return tuple(range(self.base_exc_count, self.model.exc_count))

    def pullback_class(self, cls: DivisorClass) -> DivisorClass:
        return cls.pad(self.model.exc_count)

    def relative_canonical_class(self) -> DivisorClass:
        cls = self.model.zero_class()
        for j in self.new_exc_indices:
            cls = cls + self.model.exc_class(j)
        return cls

    def transform_class(self, cls: DivisorClass, s: int) -> DivisorClass:
        """Pull the class back and subtract ``s`` times the relative canonical class."""
        return self.pullback_class(cls) - s * self.relative_canonical_class()

    def relative_canonical(self) -> Divisor:
        """The relative canonical divisor in terms of strict transforms."""
        coeffs: dict[int, int] = {}
        for step in self.steps:
            coeffs[step.new_curve] = 1 + sum(coeffs.get(c, 0) for c in step.incident)
        return Divisor.from_dict(coeffs)


def eliminate(model: SurfaceModel, subscheme: Subscheme) -> EliminationResult:
    """Realize the elimination of a curvilinear subscheme as a blow-up tape.

    Points are processed in order.  For a point of multiplicity ``m`` with
    contact ``k`` along a host curve the first blow-up sits on the curve and
    the next ``k-1`` on the node of the last exceptional with the host's
    strict transform; the remaining ``m-k`` centres are free points of the
    last exceptional.  Node data start at the node instead, with the same
    continuation rule along the second branch.
    """
    resolved = []
    for datum in subscheme.points:
        if isinstance(datum, OnCurveDatum):
            resolved.append(OnCurveDatum(model.resolve(datum.curve), datum.k, datum.m))
        elif isinstance(datum, NodeDatum):
            resolved.append(
                NodeDatum(model.resolve(datum.curve1), model.resolve(datum.curve2), datum.k2, datum.m)
            )
        elif isinstance(datum, FreeDatum):
            resolved.append(datum)
        else:
            raise StructuralError(f"unknown local datum {datum!r}")
    subscheme = Subscheme(tuple(resolved))

    base_exc = model.exc_count
    chains: list[tuple[int, ...]] = []
    steps: list[EliminationStep] = []

    for datum in subscheme.points:
        tag = f"P{model.next_point_index}"
        model = model.bump_point_index()
        chain: list[int] = []

        def _blow(point, position):
            nonlocal model
            model, rec = model.blow_up(point, name=f"Gamma_{tag}_{position}")
            steps.append(EliminationStep(model.exc_count - 1, model.tape[-1].incident, rec.id))
            chain.append(rec.id)
            return rec.id

        if isinstance(datum, FreeDatum):
            _blow(GenericPoint(), 1)
            for j in range(2, datum.m + 1):
                _blow(OnCurvePoint(chain[-1]), j)
        elif isinstance(datum, OnCurveDatum):
            host = datum.curve
            _blow(OnCurvePoint(host), 1)
            for j in range(2, datum.k + 1):
                _blow(NodePoint(chain[-1], host), j)
            for j in range(datum.k + 1, datum.m + 1):
                _blow(OnCurvePoint(chain[-1]), j)
        else:
            c1, c2 = datum.curve1, datum.curve2
            _blow(NodePoint(c1, c2), 1)
            for j in range(2, datum.k2 + 1):
                _blow(NodePoint(chain[-1], c2), j)
            for j in range(datum.k2 + 1, datum.m + 1):
                _blow(OnCurvePoint(chain[-1]), j)

        chains.append(tuple(chain))

    return EliminationResult(model, subscheme, tuple(chains), tuple(steps), base_exc)


def transform(E: Divisor, result: EliminationResult, s: int) -> Divisor:
    """Transform a divisor through an elimination: pullback minus ``s`` times
    the relative canonical divisor.

    Coefficients on strict transforms persist; the coefficient a new
    exceptional curve picks up in the pullback is the sum of the coefficients
    of the curves through its centre.  Negative output coefficients are
    allowed, callers test effectivity.
    """
    coeffs = E.as_dict()
    for step in result.steps:
        coeffs[step.new_curve] = sum(coeffs.get(c, 0) for c in step.incident)
    kyx = result.relative_canonical()
    for c, v in kyx.items:
        coeffs[c] = coeffs.get(c, 0) - s * v
    return Divisor.from_dict(coeffs)


def check_psi_nef(result: EliminationResult) -> bool:
    """True iff the anticanonical class meets every chain curve nonnegatively.

    Holds for every output of ``eliminate`` by the chain shape; exposed so
    tests can falsify it on hand-built tapes that break the shape.
    """
    model = result.model
    mk = -1 * model.canonical_class()
    for chain in result.chains:
        for cid in chain:
            if model.intersect(mk, model.curve(cid).cls) < 0:
                return False
    return True


# Closed-form chain coefficients for the transform of a divisor supported on
# the curves through a single point.  These are the independent cross-check
# for the tape arithmetic in ``transform`` and double as fast effectivity
# filters during enumeration.


def on_curve_coefficients(e: int, s: int, m: int, k: int) -> list[int]:
    """Chain coefficients of ``(e C)^{Delta,s}`` for one point with contact k."""
    if not (1 <= k <= m):
        raise StructuralError("need 1 <= k <= m")
    return [i * (e - s) for i in range(1, k + 1)] + [e * k - s * i for i in range(k + 1, m + 1)]


def node_coefficients(e1: int, e2: int, s: int, m: int, k2: int) -> list[int]:
    """Chain coefficients of ``(e1 C1 + e2 C2)^{Delta,s}`` for one node point."""
    if not (1 <= k2 <= m):
        raise StructuralError("need 1 <= k2 <= m")
    return [i * (e2 - s) + e1 for i in range(1, k2 + 1)] + [
        e1 + k2 * e2 - i * s for i in range(k2 + 1, m + 1)
    ]
