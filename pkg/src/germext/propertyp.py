"""Deciding property (P) and its mirror (P-) for a germ.

Blocks of ``d_j`` are written ``A`` (++), ``B`` (+-), ``C`` (-+) and
``D`` (--). After conjugation by ``{N_j}`` the -+ block in degree ``j`` is

    C - D N_j + N_{j-1} A - N_{j-1} B N_j,

the ++ block is ``A - B N_j`` and the -- block is ``D + N_{j-1} B``.

Three layers, tried in order:

1. gauge-independent Euler obstructions,
2. an exact shortcut when the non-extremal points occupy two adjacent
   indices with every gauge entry free (reduces to Problem Omega),
3. a bounded search: the -+ equations are linear in ``N_{j-1}`` once
   ``N_j`` is fixed (top-down for P, bottom-up for P-), so each level is a
   rational linear solve; only genuinely free variables are enumerated.

Whatever the search finds is re-verified through ``conjugate`` and
``chain_homology`` before it is returned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .errors import ImplementationFault, NotApplicableError
from .intmat import IntMatrix, inverse_unimodular, snf, zeros
from .morse import (
    GaugeElement,
    GermComplex,
    block_decompose,
    chain_homology,
    conjugate,
    free_positions,
    require_valid,
)
from .omega import OmegaInstance, omega_construct

SATISFIED = "Satisfied"
VIOLATED = "Violated"
UNKNOWN = "Unknown"

DEFAULT_MAX_NODES = 200_000

__all__ = [
    "SATISFIED",
    "VIOLATED",
    "UNKNOWN",
    "PObstruction",
    "PropertyPVerdict",
    "check_property_P",
    "check_property_P_minus",
    "two_index_check",
    "verify_witness",
]


@dataclass(frozen=True)
class PObstruction:
    """Structured reason for a Violated verdict.

    ``kind`` is one of ``euler_characteristic``, ``rank_mismatch``,
    ``not_surjective``, ``determinant_residue`` or ``exhausted``.
    """

    kind: str
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {"kind": self.kind, **self.details}


@dataclass(frozen=True)
class PropertyPVerdict:
    status: str
    witness: Optional[GaugeElement] = None
    obstruction: Optional[PObstruction] = None
    search_bound: Optional[int] = None
    method: str = ""

    def __post_init__(self):
        if self.status not in (SATISFIED, VIOLATED, UNKNOWN):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == SATISFIED and self.witness is None:
            raise ValueError("Satisfied needs a witness")
        if self.status == VIOLATED and self.obstruction is None:
            raise ValueError("Violated needs an obstruction")

    def to_json(self):
        return {
            "status": self.status,
            "method": self.method,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "obstruction": self.obstruction.to_json() if self.obstruction is not None else None,
            "search_bound": self.search_bound,
        }


# -- verification ----------------------------------------------------------

def _target_homology(n: int, top: bool):
    zero = [(0, ())] * (n + 1)
    zero[n if top else 0] = (1, ())
    return zero


def verify_witness(G: GermComplex, g: GaugeElement, minus: bool = False) -> bool:
    """Recompute ``M d M^-1`` and test the defining conditions.

    For P the ++ complex must have homology Z in degree n and 0 below; for
    P- the -- complex must have Z in degree 0 and 0 above.
    """
    H = conjugate(G, g)
    n = G.n
    blocks = {j: block_decompose(H, j) for j in range(1, n + 1)}
    if any(not b.mp.is_zero() for b in blocks.values()):
        return False
    if minus:
        dims = [G.q(j) for j in range(n + 1)]
        maps = {j: b.mm for j, b in blocks.items()}
    else:
        dims = [G.p(j) for j in range(n + 1)]
        maps = {j: b.pp for j, b in blocks.items()}
    return chain_homology(dims, maps) == _target_homology(n, top=not minus)


def _satisfied(G, g, minus, method):
    if not verify_witness(G, g, minus):
        raise ImplementationFault(f"{method} produced a witness that fails verification")
    return PropertyPVerdict(SATISFIED, g, None, None, method)


# -- Euler obstruction -----------------------------------------------------

def _euler(G: GermComplex, minus: bool) -> Optional[PObstruction]:
    count = G.q if minus else G.p
    chi = sum((-1) ** j * count(j) for j in range(G.n + 1))
    want = 1 if minus else (-1) ** G.n
    if chi != want:
        return PObstruction("euler_characteristic", {"value": chi, "required": want})
    return None


# -- two-index shortcut ----------------------------------------------------

def _middle_indices(G: GermComplex) -> set[int]:
    return {p.index for p in G.points if 0 < p.index < G.n}


def _fully_free(G: GermComplex, k: int) -> bool:
    return len(free_positions(G, k)) == G.p(k) * G.q(k)


def _two_index_degree(G: GermComplex) -> Optional[int]:
    """The ``k`` of a two-index germ in the relaxed algebraic sense, else None."""
    n = G.n
    if G.size(n) != 1 or G.size(0) != 1:
        return None
    top = G.points_of(n)[0]
    bottom = G.points_of(0)[0]
    if not top.is_plus or bottom.is_plus:
        return None
    mids = _middle_indices(G)
    if not mids:
        return None
    k = min(mids)
    if not mids <= {k, k + 1} or k < 1 or k + 1 > n - 1:
        return None
    for j in range(1, n + 1):
        if j != k + 1 and not G.boundary_matrix(j).is_zero():
            return None
    if not (_fully_free(G, k) and _fully_free(G, k + 1)):
        return None
    return k


def _omega_obstruction(obs, degree) -> PObstruction:
    d = obs.to_json()
    kind = d.pop("kind")
    d["degree"] = degree
    return PObstruction(kind, d)


def _shortcut(G: GermComplex, k: int, minus: bool) -> PropertyPVerdict:
    method = "two_index_minus" if minus else "two_index"
    A, B, C, D = block_decompose(G, k + 1)
    gauge = GaugeElement.identity(G).blocks
    if minus:
        if G.q(k + 1) != G.q(k):
            return PropertyPVerdict(VIOLATED, None, PObstruction(
                "rank_mismatch", {"degree": k, "q_upper": G.q(k + 1), "q_lower": G.q(k)}), None, method)
        verdict = omega_construct(OmegaInstance(D.T, B.T))
        if not verdict.decided_yes:
            return PropertyPVerdict(VIOLATED, None, _omega_obstruction(verdict.obstruction, k + 1), None, method)
        Nk = verdict.witness.T
        D2 = D + Nk @ B
        Nk1 = inverse_unimodular(D2) @ (C + Nk @ A)
    else:
        if G.p(k + 1) != G.p(k):
            return PropertyPVerdict(VIOLATED, None, PObstruction(
                "rank_mismatch", {"degree": k, "p_upper": G.p(k + 1), "p_lower": G.p(k)}), None, method)
        verdict = omega_construct(OmegaInstance(A, B))
        if not verdict.decided_yes:
            return PropertyPVerdict(VIOLATED, None, _omega_obstruction(verdict.obstruction, k + 1), None, method)
        Nk1 = -verdict.witness
        A2 = A - B @ Nk1
        Nk = -((C - D @ Nk1) @ inverse_unimodular(A2))
    gauge = dict(gauge)
    gauge[k], gauge[k + 1] = Nk, Nk1
    return _satisfied(G, GaugeElement(gauge), minus, method)


def two_index_check(G: GermComplex) -> PropertyPVerdict:
    """Exact test for one max, one min and all other points in indices k, k+1.

    Requires ``n >= 6``, ``2 <= k <= n - 2`` and every plus point of index
    k and k+1 above every minus point of the same index. Raises
    ``NotApplicableError`` otherwise.
    """
    require_valid(G)
    n = G.n
    if n < 6:
        raise NotApplicableError(f"needs n >= 6, got {n}")
    if not G.connected_level_sets:
        raise NotApplicableError("needs exactly one maximum and one minimum")
    top, bottom = G.points_of(n)[0], G.points_of(0)[0]
    if not top.is_plus or bottom.is_plus:
        raise NotApplicableError("the maximum must be labelled + and the minimum -")
    mids = _middle_indices(G)
    if not mids:
        g = GaugeElement.identity(G)
        return _satisfied(G, g, False, "two_index")
    k = min(mids)
    if not mids <= {k, k + 1}:
        raise NotApplicableError(f"critical points occupy indices {sorted(mids)}")
    if k + 1 not in mids:
        # single middle index: pick the adjacent pair inside [2, n-2]
        k = k - 1 if k - 1 >= 2 else k
    if not 2 <= k <= n - 2:
        raise NotApplicableError(f"k = {k} outside [2, {n - 2}]")
    for j in (k, k + 1):
        if not _fully_free(G, j):
            raise NotApplicableError(f"some minus point of index {j} lies above a plus point")
    return _shortcut(G, k, minus=False)


# -- bounded search --------------------------------------------------------

def _solve_vec(vectors: list[tuple], target: tuple, bound: int):
    """Integer ``y`` with ``sum_u y_u vectors[u] == target``.

    Returns ``(solutions, exhaustive)``; ``exhaustive`` is False when free
    variables were enumerated only within ``[-bound, bound]``.
    """
    m = len(vectors)
    if m == 0:
        return ([()] if not any(target) else []), True
    rows = len(target)
    # augmented system: rows x (m + 1)
    aug = [[Fraction(vectors[u][i]) for u in range(m)] + [Fraction(target[i])] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, rows) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if any(aug[i][m] for i in range(r, rows)):
        return [], True
    free = [c for c in range(m) if c not in pivots]
    sols = []
    ranges = [range(-bound, bound + 1)] * len(free)
    for vals in itertools.product(*ranges):
        y = [Fraction(0)] * m
        for c, v in zip(free, vals):
            y[c] = Fraction(v)
        ok = True
        for i, c in enumerate(pivots):
            val = aug[i][m] - sum(aug[i][f] * y[f] for f in free)
            if val.denominator != 1:
                ok = False
                break
            y[c] = val
        if ok:
            sols.append(tuple(int(v) for v in y))
    return sols, not free


class _Budget(Exception):
    pass


class _Search:
    def __init__(self, G: GermComplex, bound: int, minus: bool, max_nodes: int):
        self.G, self.bound, self.minus = G, bound, minus
        self.max_nodes = max_nodes
        self.nodes = 0
        self.exhaustive = True
        self.blocks = {j: block_decompose(G, j) for j in range(1, G.n + 1)}
        self.free = {j: free_positions(G, j) for j in range(G.n + 1)}

    def tick(self):
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise _Budget

    def solve_rows(self, j: int, A: IntMatrix, R: IntMatrix) -> Iterator[IntMatrix]:
        """All allowed ``N_j`` with ``N_j A == R`` (rows solved independently)."""
        q, p = self.G.q(j), self.G.p(j)
        per_row = []
        for i in range(q):
            cols = [b for (a, b) in self.free[j] if a == i]
            sols, exh = _solve_vec([A.row(c) for c in cols], R.row(i) if R.cols else (), self.bound)
            self.exhaustive &= exh
            if not sols:
                return
            per_row.append([(cols, s) for s in sols])
        for choice in itertools.product(*per_row):
            self.tick()
            rows = [[0] * p for _ in range(q)]
            for i, (cols, s) in enumerate(choice):
                for c, v in zip(cols, s):
                    rows[i][c] = v
            yield IntMatrix(rows, cols=p)

    def solve_cols(self, j: int, D: IntMatrix, R: IntMatrix) -> Iterator[IntMatrix]:
        """All allowed ``N_j`` with ``D N_j == R`` (columns solved independently)."""
        q, p = self.G.q(j), self.G.p(j)
        per_col = []
        for c in range(p):
            rows = [a for (a, b) in self.free[j] if b == c]
            sols, exh = _solve_vec([D.col(i) for i in rows], R.col(c) if R.rows else (), self.bound)
            self.exhaustive &= exh
            if not sols:
                return
            per_col.append([(rows, s) for s in sols])
        for choice in itertools.product(*per_col):
            self.tick()
            out = [[0] * p for _ in range(q)]
            for c, (rows, s) in enumerate(choice):
                for i, v in zip(rows, s):
                    out[i][c] = v
            yield IntMatrix(out, cols=p)


def _homology_ok(dim: int, out_map: Optional[IntMatrix], in_map: Optional[IntMatrix], want: int) -> bool:
    rank_out = 0
    if out_map is not None and out_map.rows and out_map.cols:
        rank_out = sum(1 for s in snf(out_map).elementary_divisors if s)
    rank_in, torsion = 0, False
    if in_map is not None and in_map.rows and in_map.cols:
        divs = [s for s in snf(in_map).elementary_divisors if s]
        rank_in = len(divs)
        torsion = any(s > 1 for s in divs)
    return not torsion and dim - rank_out - rank_in == want


def _search_P(S: _Search) -> Optional[GaugeElement]:
    G, n = S.G, S.G.n

    def plus_map(j, N):
        if j < 1 or j > n:
            return None
        A, B, _, _ = S.blocks[j]
        return A - B @ N

    def rec(j, chosen, A_above):
        # chosen holds N_n..N_j; A_above is the ++ map out of degree j+1
        A_here = plus_map(j, chosen[j])
        if not _homology_ok(G.p(j), A_here, A_above, 1 if j == n else 0):
            return None
        if j == 0:
            return GaugeElement(dict(chosen))
        A, B, C, D = S.blocks[j]
        rhs = D @ chosen[j] - C
        for N in S.solve_rows(j - 1, A_here, rhs):
            chosen[j - 1] = N
            found = rec(j - 1, chosen, A_here)
            if found is not None:
                return found
        chosen.pop(j - 1, None)
        return None

    for Nn in S.solve_rows(n, zeros(G.p(n), 0), zeros(G.q(n), 0)):
        found = rec(n, {n: Nn}, None)
        if found is not None:
            return found
    return None


def _search_P_minus(S: _Search) -> Optional[GaugeElement]:
    G, n = S.G, S.G.n

    def minus_map(j, N_below):
        if j < 1 or j > n:
            return None
        _, B, _, D = S.blocks[j]
        return D + N_below @ B

    def rec(j, chosen, D_here):
        # chosen holds N_0..N_j; D_here is the -- map out of degree j
        D_above = minus_map(j + 1, chosen[j])
        if not _homology_ok(G.q(j), D_here, D_above, 1 if j == 0 else 0):
            return None
        if j == n:
            return GaugeElement(dict(chosen))
        A, B, C, D = S.blocks[j + 1]
        rhs = C + chosen[j] @ A
        for N in S.solve_cols(j + 1, D_above, rhs):
            chosen[j + 1] = N
            found = rec(j + 1, chosen, D_above)
            if found is not None:
                return found
        chosen.pop(j + 1, None)
        return None

    for N0 in S.solve_cols(0, zeros(0, G.q(0)), zeros(0, G.p(0))):
        found = rec(0, {0: N0}, None)
        if found is not None:
            return found
    return None


def _check(G: GermComplex, search_bound: int, minus: bool, max_nodes: int,
           use_shortcut: bool = True) -> PropertyPVerdict:
    if search_bound < 0:
        raise ValueError("search_bound must be nonnegative")
    require_valid(G)
    obs = _euler(G, minus)
    if obs is not None:
        return PropertyPVerdict(VIOLATED, None, obs, None, "euler")
    k = _two_index_degree(G) if use_shortcut else None
    if k is not None:
        return _shortcut(G, k, minus)
    S = _Search(G, search_bound, minus, max_nodes)
    try:
        g = _search_P_minus(S) if minus else _search_P(S)
    except _Budget:
        return PropertyPVerdict(UNKNOWN, None, None, search_bound, "search")
    if g is not None:
        return _satisfied(G, g, minus, "search")
    if S.exhaustive:
        return PropertyPVerdict(VIOLATED, None, PObstruction(
            "exhausted", {"note": "no gauge element solves the -+ equations with the required homology"}),
            None, "search")
    return PropertyPVerdict(UNKNOWN, None, None, search_bound, "search")


def check_property_P(G: GermComplex, search_bound: int = 3, max_nodes: int = DEFAULT_MAX_NODES,
                     use_shortcut: bool = True) -> PropertyPVerdict:
    """Property (P): -+ blocks killed, ++ complex with the homology of a point in degree n.

    ``use_shortcut=False`` forces the bounded search even on two-index germs.
    """
    return _check(G, search_bound, False, max_nodes, use_shortcut)


def check_property_P_minus(G: GermComplex, search_bound: int = 3, max_nodes: int = DEFAULT_MAX_NODES,
                           use_shortcut: bool = True) -> PropertyPVerdict:
    """Property (P-): -+ blocks killed, -- complex with the homology of a point in degree 0."""
    return _check(G, search_bound, True, max_nodes, use_shortcut)
