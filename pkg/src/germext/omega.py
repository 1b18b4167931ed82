"""Problem Omega: find an integer ``N`` making ``B + C N`` unimodular.

``B`` is ``p x p``, ``C`` is ``p x r`` (``r`` may be 0) and ``N`` is ``r x p``.
A solution exists iff

* ``[B C]`` is surjective (``d_p([B C]) == 1``), and
* ``det(B) = +-1`` modulo ``d_1(C)``, where congruence modulo 0 is equality.

``omega_construct`` builds a witness by reducing ``C`` to Smith form and
``B`` to Hermite form, diagonalising with Bezout column/row operations,
collapsing the diagonal into one corner and finally correcting the corner.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

from .errors import ImplementationFault, SearchSpaceError, ShapeError
from .intmat import (
    IntMatrix,
    det,
    determinantal_divisor,
    egcd,
    hconcat,
    hnf,
    inverse_unimodular,
    snf,
    zeros,
)

__all__ = [
    "OmegaInstance",
    "OmegaVerdict",
    "NotSurjective",
    "DeterminantResidue",
    "omega_decide",
    "omega_construct",
    "omega_bruteforce",
    "BRUTEFORCE_MAX_ENTRIES",
]

BRUTEFORCE_MAX_ENTRIES = 9


@dataclass(frozen=True)
class OmegaInstance:
    B: IntMatrix
    C: IntMatrix

    def __post_init__(self):
        if not self.B.is_square():
            raise ShapeError(f"B must be square, got {self.B.rows}x{self.B.cols}")
        if self.C.rows != self.B.rows:
            raise ShapeError(f"C has {self.C.rows} rows, B has {self.B.rows}")

    @property
    def p(self) -> int:
        return self.B.rows

    @property
    def r(self) -> int:
        return self.C.cols


@dataclass(frozen=True)
class NotSurjective:
    """``[B C]`` is not onto; ``dp`` is ``d_p([B C])``."""

    dp: int
    kind = "not_surjective"

    def to_json(self):
        return {"kind": self.kind, "dp": self.dp}


@dataclass(frozen=True)
class DeterminantResidue:
    """``det(B)`` is not ``+-1`` modulo ``modulus = d_1(C)``."""

    det: int
    modulus: int
    residue: int
    kind = "determinant_residue"

    def to_json(self):
        return {"kind": self.kind, "det": self.det, "modulus": self.modulus,
                "residue": self.residue}


Obstruction = Union[NotSurjective, DeterminantResidue]


@dataclass(frozen=True)
class OmegaVerdict:
    decided_yes: bool
    witness: Optional[IntMatrix] = None
    obstruction: Optional[Obstruction] = None

    def __post_init__(self):
        if self.decided_yes and self.obstruction is not None:
            raise ValueError("a positive verdict carries no obstruction")
        if not self.decided_yes and (self.obstruction is None or self.witness is not None):
            raise ValueError("a negative verdict carries exactly one obstruction and no witness")

    def to_json(self):
        return {
            "extendable_direction": self.decided_yes,
            "witness": self.witness.to_list() if self.witness is not None else None,
            "obstruction": self.obstruction.to_json() if self.obstruction is not None else None,
        }


def _as_instance(inst_or_B, C=None) -> OmegaInstance:
    if isinstance(inst_or_B, OmegaInstance):
        return inst_or_B
    return OmegaInstance(inst_or_B, C)


def _congruent_to_unit(d: int, modulus: int) -> bool:
    if modulus == 0:
        return d in (1, -1)
    return (d - 1) % modulus == 0 or (d + 1) % modulus == 0


def _obstruction(inst: OmegaInstance) -> Optional[Obstruction]:
    p = inst.p
    dp = determinantal_divisor(hconcat(inst.B, inst.C), p)
    if dp != 1:
        return NotSurjective(dp)
    c1 = determinantal_divisor(inst.C, 1)
    d = det(inst.B)
    if not _congruent_to_unit(d, c1):
        return DeterminantResidue(d, c1, d % c1 if c1 else d)
    return None


def omega_decide(inst, C=None) -> OmegaVerdict:
    """Decision only; accepts an ``OmegaInstance`` or ``(B, C)``."""
    inst = _as_instance(inst, C)
    obs = _obstruction(inst)
    if obs is not None:
        return OmegaVerdict(False, None, obs)
    return OmegaVerdict(True)


def _verify(inst: OmegaInstance, N: IntMatrix) -> bool:
    return det(inst.B + inst.C @ N) in (1, -1)


class _Reducer:
    """Tracks ``B_cur = P (B + C Y) Q`` and ``C_cur = P C W``.

    Only ``Y``, ``W`` and ``Q^-1`` are needed to pull a solution back: adding
    ``C_cur Z`` to ``B_cur`` is the same as ``Y += W Z Q^-1``.
    """

    def __init__(self, inst: OmegaInstance):
        p, r = inst.p, inst.r
        self.p, self.r = p, r
        sC = snf(inst.C)
        self.C = sC.S.to_list()
        self.W = sC.V.to_list()
        B1 = sC.U @ inst.B
        h = hnf(B1)
        self.B = h.H.to_list()
        self.Qinv = inverse_unimodular(h.U).to_list()
        self.Y = [[0] * p for _ in range(r)]

    def c(self, j):
        return self.C[j][j] if j < self.r else 0

    # B_cur column ops: Q <- Q X, Qinv <- X^-1 Qinv
    def b_col_add(self, dst, src, t):
        """col_dst(B) += t col_src(B)"""
        if not t:
            return
        for row in self.B:
            row[dst] += t * row[src]
        # X = I + t E[src, dst]; X^-1 = I - t E[src, dst]: row_src(Qinv) -= t row_dst(Qinv)
        rs, rd = self.Qinv[src], self.Qinv[dst]
        for k in range(self.p):
            rs[k] -= t * rd[k]

    def b_col_swap(self, i, j):
        for row in self.B:
            row[i], row[j] = row[j], row[i]
        self.Qinv[i], self.Qinv[j] = self.Qinv[j], self.Qinv[i]

    def row_add(self, dst, src, t):
        """row_dst += t row_src on both B_cur and C_cur (left action)."""
        if not t:
            return
        for M in (self.B, self.C):
            rs, rd = M[src], M[dst]
            for k in range(len(rd)):
                rd[k] += t * rs[k]

    def c_col_add(self, dst, src, t):
        """col_dst(C) += t col_src(C); W <- W (I + t E[src, dst])."""
        if not t:
            return
        for M in (self.C, self.W):
            for row in M:
                row[dst] += t * row[src]

    def add_cz(self, j, col, z):
        """B_cur += C_cur Z where Z has the single entry ``z`` at ``(j, col)``.

        ``C_cur`` must be diagonal in column ``j``.
        """
        if not z:
            return
        if j >= self.r:
            raise ImplementationFault("C has no column to absorb the correction")
        cj = self.c(j)
        self.B[j][col] += cj * z
        # Y += W Z Qinv: Z = z e_j e_col^T
        wcol = [self.W[i][j] for i in range(self.r)]
        qrow = self.Qinv[col]
        for i in range(self.r):
            if wcol[i]:
                yi = self.Y[i]
                f = z * wcol[i]
                for k in range(self.p):
                    yi[k] += f * qrow[k]


def omega_construct(inst, C=None) -> OmegaVerdict:
    """Decide and, when possible, return a verified witness ``N``."""
    inst = _as_instance(inst, C)
    obs = _obstruction(inst)
    if obs is not None:
        return OmegaVerdict(False, None, obs)
    p, r = inst.p, inst.r
    if p == 0:
        return OmegaVerdict(True, zeros(r, 0))

    red = _Reducer(inst)
    B = red.B

    # Diagonalise the triangular B row by row.
    for j in range(p):
        bj, cj = B[j][j], red.c(j)
        g, u, v = egcd(bj, cj)
        if g != 1:
            raise ImplementationFault(f"gcd(b_{j}, c_{j}) = {g} after surjectivity test")
        for m in range(j + 1, p):
            x = B[j][m]
            if x:
                red.b_col_add(m, j, -u * x)
                red.add_cz(j, m, -v * x)
        if any(B[j][m] for m in range(j + 1, p)):
            raise ImplementationFault("row clearing left off-diagonal entries")

    # Collapse the diagonal into the top-left corner, bottom up.
    for t in range(p - 1, 0, -1):
        s = t - 1
        bt, ct = B[t][t], red.c(t)
        g, u, v = egcd(bt, ct)
        if g != 1:
            raise ImplementationFault(f"gcd lost during corner reduction at {t}")
        # B[t][s] = u bt + v ct = 1
        red.b_col_add(s, t, u)
        red.add_cz(t, s, v)
        bs = B[s][s]
        red.row_add(s, t, -bs)
        # column s is now e_t; cancel b_t in column t, then swap
        red.b_col_add(t, s, -B[t][t])
        red.b_col_swap(s, t)
        # restore the Smith diagonal of C (c_s divides c_t)
        if t < r and red.C[s][t]:
            cs = red.C[s][s]
            if cs == 0 or red.C[s][t] % cs:
                raise ImplementationFault("divisibility chain broken while restoring C")
            red.c_col_add(t, s, -(red.C[s][t] // cs))

    beta = B[0][0]
    c1 = red.c(0)
    if beta not in (1, -1):
        for eps in (1, -1):
            if c1 and (beta - eps) % c1 == 0:
                red.add_cz(0, 0, -((beta - eps) // c1))
                break
        else:
            raise ImplementationFault(f"corner {beta} is not +-1 modulo {c1}")

    N = IntMatrix(red.Y, cols=p)
    if not _verify(inst, N):
        raise ImplementationFault("constructed witness failed determinant check")
    return OmegaVerdict(True, N)


def omega_bruteforce(inst, C=None, bound: int = 0) -> Optional[IntMatrix]:
    """First ``N`` (lexicographic over ``[-bound, bound]``) with ``det(B + C N) = +-1``.

    Enumerates at most ``BRUTEFORCE_MAX_ENTRIES`` unknowns.
    """
    if isinstance(inst, OmegaInstance):
        if C is not None:
            bound = C
    else:
        inst = OmegaInstance(inst, C)
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    p, r = inst.p, inst.r
    if r * p > BRUTEFORCE_MAX_ENTRIES:
        raise SearchSpaceError(f"{r}x{p} unknowns exceed the brute-force guard of {BRUTEFORCE_MAX_ENTRIES}")
    values = range(-bound, bound + 1)
    for flat in itertools.product(values, repeat=r * p):
        N = IntMatrix.from_flat(r, p, flat)
        if _verify(inst, N):
            return N
    return None
