"""Morse germs along the n-sphere: labelled critical points, the graded
integral boundary operator, the gauge group G(f) and its action.

The boundary is stored sparsely as ``{(source_id, target_id): coeff}``;
matrices are produced on demand in the *natural order* of each degree:
plus points by descending value, then minus points by descending value.
Rows of ``boundary_matrix(k)`` follow ``natural_order(k - 1)`` and its
columns follow ``natural_order(k)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    ChainConditionError,
    GaugeError,
    InvalidGermError,
    NotApplicableError,
    ShapeError,
    SlideUnavailableError,
)
from .intmat import IntMatrix, elementary, identity, snf, zeros

PLUS = "+"
MINUS = "-"
LABELS = (PLUS, MINUS)

__all__ = [
    "PLUS",
    "MINUS",
    "CriticalPoint",
    "GermComplex",
    "GaugeElement",
    "ValidationIssue",
    "ValidationReport",
    "Blocks",
    "validate_germ",
    "require_valid",
    "natural_order",
    "block_decompose",
    "join_blocks",
    "free_positions",
    "gauge_membership",
    "conjugate",
    "handle_slide",
    "chain_homology",
    "homology_Z",
    "sphere_homology",
    "opposite_germ",
    "curley_graph",
    "trivial_germ",
]


@dataclass(frozen=True)
class CriticalPoint:
    id: str
    index: int
    label: str
    value: Fraction

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"label must be '+' or '-', got {self.label!r}")
        object.__setattr__(self, "value", Fraction(self.value))

    @property
    def is_plus(self) -> bool:
        return self.label == PLUS


@dataclass(frozen=True, eq=False)
class GermComplex:
    n: int
    points: tuple[CriticalPoint, ...]
    boundary: Mapping[tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "boundary", {k: int(v) for k, v in self.boundary.items() if v})
        object.__setattr__(self, "_by_id", {p.id: p for p in self.points})

    def __eq__(self, other):
        if not isinstance(other, GermComplex):
            return NotImplemented
        return (self.n == other.n and set(self.points) == set(other.points)
                and self.boundary == other.boundary)

    def point(self, pid: str) -> CriticalPoint:
        return self._by_id[pid]

    def points_of(self, k: int) -> list[CriticalPoint]:
        return [p for p in self.points if p.index == k]

    def natural_order(self, k: int) -> list[CriticalPoint]:
        pts = self.points_of(k)
        plus = sorted((p for p in pts if p.is_plus), key=lambda p: p.value, reverse=True)
        minus = sorted((p for p in pts if not p.is_plus), key=lambda p: p.value, reverse=True)
        return plus + minus

    def p(self, k: int) -> int:
        """Number of plus points of index ``k``."""
        return sum(1 for pt in self.points if pt.index == k and pt.is_plus)

    def q(self, k: int) -> int:
        """Number of minus points of index ``k``."""
        return sum(1 for pt in self.points if pt.index == k and not pt.is_plus)

    def size(self, k: int) -> int:
        return sum(1 for pt in self.points if pt.index == k)

    def coeff(self, source: str, target: str) -> int:
        return self.boundary.get((source, target), 0)

    def boundary_matrix(self, k: int) -> IntMatrix:
        """Matrix of the boundary from degree ``k`` to degree ``k - 1``."""
        rows = self.natural_order(k - 1)
        cols = self.natural_order(k)
        return IntMatrix(([self.coeff(c.id, r.id) for c in cols] for r in rows), cols=len(cols))

    def with_boundary_matrices(self, mats: Mapping[int, IntMatrix]) -> "GermComplex":
        """Copy with the boundary of the given degrees replaced."""
        bd = {key: v for key, v in self.boundary.items()
              if self.point(key[0]).index not in mats}
        for k, M in mats.items():
            rows = self.natural_order(k - 1)
            cols = self.natural_order(k)
            if M.shape != (len(rows), len(cols)):
                raise ShapeError(f"degree {k}: expected {len(rows)}x{len(cols)}, got {M.rows}x{M.cols}")
            for i, r in enumerate(rows):
                for j, c in enumerate(cols):
                    if M[i, j]:
                        bd[(c.id, r.id)] = M[i, j]
        return GermComplex(self.n, self.points, bd)

    @classmethod
    def from_matrices(cls, n: int, points: Iterable[CriticalPoint],
                      mats: Mapping[int, IntMatrix]) -> "GermComplex":
        """Build from boundary matrices given in natural order."""
        return cls(n, tuple(points)).with_boundary_matrices(mats)

    @property
    def connected_level_sets(self) -> bool:
        """True when there is exactly one local maximum and one local minimum."""
        return self.size(self.n) == 1 and self.size(0) == 1

    def summary(self) -> dict:
        return {
            "n": self.n,
            "p": [self.p(k) for k in range(self.n + 1)],
            "q": [self.q(k) for k in range(self.n + 1)],
        }


def trivial_germ(n: int, top: Fraction = Fraction(1), bottom: Fraction = Fraction(-1)) -> GermComplex:
    """Maximum labelled plus, minimum labelled minus, zero boundary."""
    return GermComplex(n, (CriticalPoint("max", n, PLUS, top), CriticalPoint("min", 0, MINUS, bottom)))


# -- validation ------------------------------------------------------------

@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str

    def __str__(self):
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...]

    @property
    def valid(self) -> bool:
        return not self.issues

    def codes(self) -> set[str]:
        return {i.code for i in self.issues}

    def __bool__(self):
        return self.valid


def validate_germ(G: GermComplex) -> ValidationReport:
    """Check the standing hypotheses and report every violation.

    Codes: ``points`` (ids, indices, count), ``excellence`` (repeated
    critical values), ``shape`` (boundary entries between the wrong
    degrees or unknown points), ``chain`` (the boundary does not square to
    zero) and ``homology`` (not the homology of the sphere).
    """
    issues: list[ValidationIssue] = []
    add = lambda code, msg: issues.append(ValidationIssue(code, msg))  # noqa: E731

    if G.n < 1:
        add("points", f"dimension n must be at least 1, got {G.n}")
    seen = set()
    for pt in G.points:
        if pt.id in seen:
            add("points", f"duplicate id {pt.id!r}")
        seen.add(pt.id)
        if not 0 <= pt.index <= G.n:
            add("points", f"{pt.id!r} has index {pt.index} outside [0, {G.n}]")
    if len(G.points) < 2:
        add("points", f"a Morse function on a sphere has at least two critical points, got {len(G.points)}")

    by_value: dict[Fraction, str] = {}
    for pt in G.points:
        if pt.value in by_value:
            add("excellence", f"{by_value[pt.value]!r} and {pt.id!r} share value {pt.value}")
        else:
            by_value[pt.value] = pt.id

    shape_ok = True
    for (s, t), c in sorted(G.boundary.items()):
        if s not in G._by_id or t not in G._by_id:
            add("shape", f"boundary entry {s!r}->{t!r} names an unknown point")
            shape_ok = False
            continue
        if G.point(s).index != G.point(t).index + 1:
            add("shape", f"boundary entry {s!r}->{t!r} does not lower the index by one")
            shape_ok = False

    if shape_ok and not any(i.code == "points" for i in issues):
        for k in range(1, G.n):
            prod = G.boundary_matrix(k) @ G.boundary_matrix(k + 1)
            if not prod.is_zero():
                add("chain", f"boundary_{k} o boundary_{k + 1} = {prod.to_list()} is not zero")
        if not any(i.code == "chain" for i in issues):
            if homology_Z(G) != sphere_homology(G.n):
                add("homology", "the complex does not have the homology of the sphere")
    return ValidationReport(tuple(issues))


def require_valid(G: GermComplex) -> None:
    report = validate_germ(G)
    if not report.valid:
        raise InvalidGermError(report)


# -- blocks and the gauge group --------------------------------------------

def natural_order(G: GermComplex, k: int) -> list[CriticalPoint]:
    """Plus points by descending value, then minus points by descending value."""
    return G.natural_order(k)


@dataclass(frozen=True)
class Blocks:
    """``pp``: plus->plus, ``pm``: minus->plus, ``mp``: plus->minus, ``mm``: minus->minus.

    Each block maps the sources named by its second letter to the targets
    named by its first.
    """

    pp: IntMatrix
    pm: IntMatrix
    mp: IntMatrix
    mm: IntMatrix

    def __iter__(self):
        return iter((self.pp, self.pm, self.mp, self.mm))


def _split(M: IntMatrix, prow: int, pcol: int) -> Blocks:
    r, c = M.shape
    top, bottom = range(prow), range(prow, r)
    left, right = range(pcol), range(pcol, c)
    return Blocks(M.submatrix(top, left), M.submatrix(top, right),
                  M.submatrix(bottom, left), M.submatrix(bottom, right))


def block_decompose(G: GermComplex, k: int) -> Blocks:
    """The four blocks of the boundary from degree ``k`` to ``k - 1``."""
    return _split(G.boundary_matrix(k), G.p(k - 1), G.p(k))


def join_blocks(b: Blocks) -> IntMatrix:
    top = [list(x) + list(y) for x, y in zip(b.pp, b.pm)]
    bottom = [list(x) + list(y) for x, y in zip(b.mp, b.mm)]
    return IntMatrix(top + bottom, cols=b.pp.cols + b.pm.cols)


def free_positions(G: GermComplex, k: int) -> list[tuple[int, int]]:
    """Entries ``(i, j)`` of ``N_k`` allowed to be nonzero.

    ``i`` runs over minus points and ``j`` over plus points of index ``k``,
    both in natural order; the entry is free iff the plus point lies
    strictly above the minus point.
    """
    order = G.natural_order(k)
    pk = G.p(k)
    plus, minus = order[:pk], order[pk:]
    return [(i, j) for i, b in enumerate(minus) for j, a in enumerate(plus) if a.value > b.value]


@dataclass(frozen=True)
class GaugeElement:
    """Down-left blocks ``N_k`` (shape ``q_k x p_k``) of an element of G(f)."""

    blocks: Mapping[int, IntMatrix]

    @classmethod
    def identity(cls, G: GermComplex) -> "GaugeElement":
        return cls({k: zeros(G.q(k), G.p(k)) for k in range(G.n + 1)})

    def block(self, k: int, G: GermComplex | None = None) -> IntMatrix:
        if k in self.blocks:
            return self.blocks[k]
        if G is None:
            raise KeyError(k)
        return zeros(G.q(k), G.p(k))

    def compose(self, other: "GaugeElement") -> "GaugeElement":
        keys = set(self.blocks) | set(other.blocks)
        out = {}
        for k in keys:
            if k in self.blocks and k in other.blocks:
                out[k] = self.blocks[k] + other.blocks[k]
            else:
                out[k] = self.blocks.get(k, other.blocks.get(k))
        return GaugeElement(out)

    def inverse(self) -> "GaugeElement":
        return GaugeElement({k: -v for k, v in self.blocks.items()})

    def is_identity(self) -> bool:
        return all(v.is_zero() for v in self.blocks.values())

    def matrix(self, k: int, G: GermComplex) -> IntMatrix:
        """The full unipotent ``M_k = [[I, 0], [N_k, I]]``."""
        pk, qk = G.p(k), G.q(k)
        N = self.block(k, G)
        rows = [[int(i == j) for j in range(pk + qk)] for i in range(pk)]
        for i in range(qk):
            rows.append(list(N.row(i)) + [int(i == j) for j in range(qk)])
        return IntMatrix(rows, cols=pk + qk)

    def to_json(self) -> dict:
        return {str(k): v.to_list() for k, v in sorted(self.blocks.items()) if v.rows and v.cols}


def _check_shapes(G: GermComplex, g: GaugeElement) -> None:
    for k, N in g.blocks.items():
        if not 0 <= k <= G.n:
            raise ShapeError(f"gauge block for degree {k} outside [0, {G.n}]")
        if N.shape != (G.q(k), G.p(k)):
            raise ShapeError(f"N_{k} must be {G.q(k)}x{G.p(k)}, got {N.rows}x{N.cols}")


def gauge_membership(G: GermComplex, g: GaugeElement) -> bool:
    """True iff every ``N_k`` vanishes outside the plus-above-minus pattern."""
    _check_shapes(G, g)
    for k, N in g.blocks.items():
        allowed = set(free_positions(G, k))
        for i in range(N.rows):
            for j in range(N.cols):
                if N[i, j] and (i, j) not in allowed:
                    return False
    return True


def conjugate(G: GermComplex, g: GaugeElement) -> GermComplex:
    """Boundary ``M d M^-1``, degree by degree as ``M_{k-1} d_k M_k^-1``."""
    if not gauge_membership(G, g):
        raise GaugeError("gauge element violates the critical-value nullity pattern")
    inv = g.inverse()
    mats = {}
    for k in range(1, G.n + 1):
        mats[k] = g.matrix(k - 1, G) @ G.boundary_matrix(k) @ inv.matrix(k, G)
    return G.with_boundary_matrices(mats)


def handle_slide(G: GermComplex, k: int, l: int, i: int, s: int) -> GermComplex:
    """Slide the ``i``-th point of index ``k`` over the ``l``-th (1-based, natural order).

    ``d_{k+1} <- (I + s E_{l,i}) d_{k+1}`` and ``d_k <- d_k (I - s E_{l,i})``.
    Only the critical-value order is enforced: the sliding point must lie
    above the point it slides over.
    """
    order = G.natural_order(k)
    if len(order) < 2:
        raise SlideUnavailableError(f"index {k} has fewer than two critical points")
    if not (1 <= l <= len(order) and 1 <= i <= len(order)) or l == i:
        raise SlideUnavailableError(f"positions ({l}, {i}) are not two distinct points of index {k}")
    if order[i - 1].value <= order[l - 1].value:
        raise SlideUnavailableError(
            f"{order[i - 1].id!r} is not above {order[l - 1].id!r}")
    E = elementary(len(order), l, i, s)
    Einv = elementary(len(order), l, i, -s)
    mats = {}
    if k + 1 <= G.n:
        mats[k + 1] = E @ G.boundary_matrix(k + 1)
    if k >= 1:
        mats[k] = G.boundary_matrix(k) @ Einv
    return G.with_boundary_matrices(mats)


# -- homology --------------------------------------------------------------

def chain_homology(dims: list[int], boundaries: Mapping[int, IntMatrix]):
    """Homology of ``0 <- C_0 <- C_1 <- ... <- C_top <- 0``.

    ``boundaries[k]`` maps degree ``k`` to ``k - 1``; missing degrees are
    zero. Returns ``[(betti, torsion), ...]`` for every degree, torsion as
    a tuple of divisors greater than one.
    """
    top = len(dims) - 1
    ranks = {}
    torsion = {}
    for k in range(1, top + 1):
        M = boundaries.get(k)
        if M is None or M.rows == 0 or M.cols == 0:
            ranks[k], torsion[k] = 0, ()
            continue
        if M.shape != (dims[k - 1], dims[k]):
            raise ShapeError(f"boundary {k} must be {dims[k - 1]}x{dims[k]}")
        divs = [s for s in snf(M).elementary_divisors if s]
        ranks[k] = len(divs)
        torsion[k] = tuple(s for s in divs if s > 1)
    out = []
    for k in range(top + 1):
        r_out = ranks.get(k, 0)
        r_in = ranks.get(k + 1, 0)
        out.append((dims[k] - r_out - r_in, torsion.get(k + 1, ())))
    return out


def sphere_homology(n: int):
    if n == 0:
        return [(2, ())]
    return [(1, ())] + [(0, ())] * (n - 1) + [(1, ())]


def homology_Z(G: GermComplex):
    """Integral homology per degree as ``(betti, torsion)`` pairs."""
    for k in range(1, G.n):
        if not (G.boundary_matrix(k) @ G.boundary_matrix(k + 1)).is_zero():
            raise ChainConditionError(f"boundary_{k} o boundary_{k + 1} is not zero")
    dims = [G.size(k) for k in range(G.n + 1)]
    return chain_homology(dims, {k: G.boundary_matrix(k) for k in range(1, G.n + 1)})


# -- opposite germ and the Curley graph ------------------------------------

def opposite_germ(G: GermComplex) -> GermComplex:
    """The germ of ``-f``: index ``k -> n - k``, labels flipped, values negated.

    The coefficient of ``a -> b`` becomes the coefficient of ``b -> a``, so
    every boundary matrix is transposed; in the natural orders of ``-f``
    this is the transposed block matrix with ``++`` and ``--`` exchanged.
    """
    require_valid(G)
    pts = tuple(
        CriticalPoint(p.id, G.n - p.index, MINUS if p.is_plus else PLUS, -p.value)
        for p in G.points
    )
    bd = {(t, s): c for (s, t), c in G.boundary.items()}
    return GermComplex(G.n, pts, bd)


@dataclass(frozen=True)
class CurleyVertex:
    id: str
    index: int
    label: str
    value: Fraction


def curley_graph(G: GermComplex) -> list[CurleyVertex]:
    """Linear labelled Reeb graph: vertices by descending value.

    Only defined for one maximum and one minimum, where the level sets are
    connected and consecutive vertices are joined by an edge.
    """
    if not G.connected_level_sets:
        raise NotApplicableError("the Curley graph is linear only with one maximum and one minimum")
    return [CurleyVertex(p.id, p.index, p.label, p.value)
            for p in sorted(G.points, key=lambda p: p.value, reverse=True)]
