"""Field-coefficient canonical form and the FMC reduction search.

The canonical pairing is the persistence pairing of the filtered Morse
complex: generators are filtered by critical value, each boundary column
may absorb columns of *lower* value, and a column's pivot is its
highest-valued nonzero entry.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import SearchSpaceError, StateError
from .morse import MINUS, PLUS, GermComplex


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    characteristic: int = 0

    def __post_init__(self):
        c = self.characteristic
        if c != 0 and not _is_prime(c):
            raise ValueError(f"characteristic must be 0 or a prime, got {c}")

    def coerce(self, x: int):
        return Fraction(x) if self.characteristic == 0 else x % self.characteristic

    def div(self, a, b):
        if self.characteristic == 0:
            return a / b
        return a * pow(b, -1, self.characteristic) % self.characteristic

    def sub(self, a, b):
        return a - b if self.characteristic == 0 else (a - b) % self.characteristic

    def mul(self, a, b):
        return a * b if self.characteristic == 0 else a * b % self.characteristic

    def add(self, a, b):
        return a + b if self.characteristic == 0 else (a + b) % self.characteristic


@dataclass(frozen=True)
class CanonicalForm:
    """``pairs`` maps a generator to the one-lower-index generator it bounds."""

    pairs: tuple[tuple[str, str], ...]
    unpaired: tuple[str, ...]

    def as_dict(self) -> dict:
        return dict(self.pairs)

    def to_json(self):
        return {"pairs": [list(p) for p in self.pairs], "unpaired": list(self.unpaired)}


def _reduce_degree(cols, rows_rank, field: FieldSpec, rng: Optional[random.Random]):
    """Column-reduce one boundary matrix in place.

    ``cols`` is a list of sparse columns (dict row -> coeff) ordered by
    ascending value; ``rows_rank`` maps a row id to its value rank.
    Returns ``{column position: pivot row}``.
    """

    def low(col):
        live = [r for r, c in col.items() if c]
        return max(live, key=rows_rank.__getitem__) if live else None

    def axpy(dst, src, t):
        for r, c in src.items():
            dst[r] = field.sub(dst.get(r, field.coerce(0)), field.mul(t, c))
            if not dst[r]:
                del dst[r]

    if rng is not None:
        # random legal change of basis: add lower-valued columns to higher ones
        for j in range(len(cols)):
            for i in range(j):
                if rng.random() < 0.5:
                    axpy(cols[j], cols[i], field.coerce(rng.randint(-3, 3)))
        while True:
            lows = [low(c) for c in cols]
            clashes = [(i, j) for j in range(len(cols)) for i in range(j)
                       if lows[i] is not None and lows[i] == lows[j]]
            if not clashes:
                break
            i, j = rng.choice(clashes)
            r = lows[j]
            axpy(cols[j], cols[i], field.div(cols[j][r], cols[i][r]))
    else:
        owner = {}
        for j, col in enumerate(cols):
            r = low(col)
            while r is not None and r in owner:
                i = owner[r]
                axpy(col, cols[i], field.div(col[r], cols[i][r]))
                r = low(col)
            if r is not None:
                owner[r] = j
    return {j: low(c) for j, c in enumerate(cols) if low(c) is not None}


def canonical_form(G: GermComplex, field: FieldSpec | int = 0, rng: Optional[random.Random] = None) -> CanonicalForm:
    """Canonical pairing over ``field``.

    With ``rng`` the reduction applies a random triangular change of basis
    and resolves pivot clashes in random order; the result must not change.
    """
    if not isinstance(field, FieldSpec):
        field = FieldSpec(field)
    rank = {p.id: p.value for p in G.points}
    pairs = []
    paired = set()
    for j in range(1, G.n + 1):
        sources = sorted(G.points_of(j), key=lambda p: p.value)
        cols = [dict() for _ in sources]
        for (s, t), c in G.boundary.items():
            if G.point(s).index == j:
                v = field.coerce(c)
                if v:
                    cols[[p.id for p in sources].index(s)][t] = v
        piv = _reduce_degree(cols, rank, field, rng)
        for pos, target in piv.items():
            pairs.append((sources[pos].id, target))
            paired.update((sources[pos].id, target))
    unpaired = tuple(sorted((p for p in G.points if p.id not in paired), key=lambda p: -p.value))
    pairs.sort(key=lambda st: -rank[st[0]])
    return CanonicalForm(tuple(pairs), tuple(p.id for p in unpaired))


# -- FMC states ------------------------------------------------------------

@dataclass(frozen=True)
class FmcVertex:
    id: str
    index: int
    label: str


@dataclass(frozen=True)
class FmcState:
    """Vertices listed from top to bottom; ``partner[i]`` is a position or None."""

    n: int
    vertices: tuple[FmcVertex, ...]
    partner: tuple[Optional[int], ...]

    def key(self):
        return tuple((v.index, v.label, p) for v, p in zip(self.vertices, self.partner))

    def check(self) -> None:
        if len(self.partner) != len(self.vertices):
            raise StateError("partner list and vertex list differ in length")
        for i, j in enumerate(self.partner):
            if j is None:
                continue
            if not 0 <= j < len(self.vertices) or j == i or self.partner[j] != i:
                raise StateError(f"pairing at position {i} is not a symmetric matching")
            if abs(self.vertices[i].index - self.vertices[j].index) != 1:
                raise StateError(f"paired vertices {self.vertices[i].id!r}, {self.vertices[j].id!r}"
                                 " do not have consecutive indices")
            if self.vertices[i].label not in (PLUS, MINUS):
                raise StateError(f"bad label at position {i}")

    def is_trivial(self) -> bool:
        if len(self.vertices) != 2 or any(p is not None for p in self.partner):
            return False
        top, bottom = self.vertices
        return top.index == self.n and top.label == PLUS and bottom.index == 0 and bottom.label == MINUS

    def to_json(self):
        return [{"id": v.id, "index": v.index, "label": v.label,
                 "partner": self.vertices[p].id if p is not None else None}
                for v, p in zip(self.vertices, self.partner)]


def fmc_from_germ(G: GermComplex, field: FieldSpec | int = 0) -> FmcState:
    form = canonical_form(G, field)
    order = sorted(G.points, key=lambda p: p.value, reverse=True)
    pos = {p.id: i for i, p in enumerate(order)}
    partner: list[Optional[int]] = [None] * len(order)
    for s, t in form.pairs:
        partner[pos[s]], partner[pos[t]] = pos[t], pos[s]
    return FmcState(G.n, tuple(FmcVertex(p.id, p.index, p.label) for p in order), tuple(partner))


_INF = float("inf")


def _rewire_allowed(st: FmcState, u: int, w: int) -> bool:
    """Same-index crossing of ``u`` (upper) over ``w``: may partners be exchanged?"""
    V, P = st.vertices, st.partner
    k = V[u].index

    def role(x):
        if P[x] is None:
            return "free"
        return "source" if V[P[x]].index < k else "target"

    ru, rw = role(u), role(w)
    if ru == "source" and rw == "source":
        return P[u] > P[w]
    if ru != "source" and rw != "source":
        pu = _INF if P[u] is None else P[u]
        pw = _INF if P[w] is None else P[w]
        return pu > pw
    return ru != "source" and rw == "source"


def _successors(st: FmcState):
    V, P = st.vertices, st.partner
    for i in range(len(V) - 1):
        u, w = i, i + 1
        if P[u] == w:
            if V[u].label == V[w].label:
                keep = [x for x in range(len(V)) if x not in (u, w)]
                remap = {old: new for new, old in enumerate(keep)}
                nv = tuple(V[x] for x in keep)
                npar = tuple(None if P[x] is None else remap[P[x]] for x in keep)
                yield {"move": "death", "ids": [V[u].id, V[w].id]}, FmcState(st.n, nv, npar)
            continue
        if not (V[u].label == PLUS or V[w].label == MINUS):
            continue
        moved = V[u].id if V[u].label == PLUS else V[w].id
        options = [False]
        if V[u].index == V[w].index and _rewire_allowed(st, u, w):
            options.append(True)
        for rewire in options:
            par = list(P)
            if rewire:
                pu, pw = P[u], P[w]
                par[u], par[w] = pw, pu
                if pw is not None:
                    par[pw] = u
                if pu is not None:
                    par[pu] = w
            # then exchange the two positions
            swap = {u: w, w: u}
            par = [None if par[swap.get(x, x)] is None else swap.get(par[swap.get(x, x)], par[swap.get(x, x)])
                   for x in range(len(par))]
            nv = list(V)
            nv[u], nv[w] = nv[w], nv[u]
            yield ({"move": "cross", "upper": V[u].id, "lower": V[w].id, "moved": moved,
                    "rewire": rewire}, FmcState(st.n, tuple(nv), tuple(par)))


def reduce_to_trivial(start: FmcState, field: FieldSpec | int = 0,
                      max_states: Optional[int] = None) -> tuple[bool, list[dict]]:
    """Breadth-first search for a path of crossings and deaths to the trivial state.

    ``field`` only labels the run: the pairing is already part of ``start``.
    Returns ``(reducible, trace)`` where ``trace`` is a shortest move list.
    """
    start.check()
    parent = {start.key(): None}
    queue = deque([start])
    while queue:
        st = queue.popleft()
        if st.is_trivial():
            trace = []
            key = st.key()
            while parent[key] is not None:
                prev, move = parent[key]
                trace.append(move)
                key = prev
            return True, trace[::-1]
        for move, nxt in _successors(st):
            k = nxt.key()
            if k in parent:
                continue
            parent[k] = (st.key(), move)
            if max_states is not None and len(parent) > max_states:
                raise SearchSpaceError(f"more than {max_states} FMC states explored")
            queue.append(nxt)
    return False, []
