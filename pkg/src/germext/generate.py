"""Random two-index germs with sphere homology by construction."""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import SlideUnavailableError
from .morse import MINUS, PLUS, CriticalPoint, GermComplex, handle_slide

SCALE = 1000


def gen(seed: int, n: int, k: int, pair_count: int = 2, slide_count: int = 4,
        separated: bool = False) -> GermComplex:
    """Start from the trivial germ, insert ``pair_count`` cancelling pairs
    ``a -> +-b`` (index k+1 over index k), then apply ``slide_count`` random
    handle slides in degrees k and k+1.

    With ``separated`` every plus point of a degree lies above every minus
    point of that degree, so the whole gauge group is available.
    """
    if not 2 <= k <= n - 2:
        raise ValueError(f"need 2 <= k <= n - 2, got n={n}, k={k}")
    if pair_count < 0 or slide_count < 0:
        raise ValueError("counts must be nonnegative")
    rng = random.Random(seed)
    used = set()

    def fresh(lo, hi):
        while True:
            v = Fraction(rng.randint(lo * SCALE + 1, hi * SCALE - 1), SCALE)
            if v not in used:
                used.add(v)
                return v

    points = [CriticalPoint("max", n, PLUS, Fraction(SCALE)), CriticalPoint("min", 0, MINUS, Fraction(-SCALE))]
    boundary = {}
    for i in range(pair_count):
        la, lb = rng.choice((PLUS, MINUS)), rng.choice((PLUS, MINUS))
        if separated:
            va = fresh(0, SCALE) if la == PLUS else fresh(-SCALE, 0)
            vb = fresh(0, SCALE) if lb == PLUS else fresh(-SCALE, 0)
        else:
            x, y = fresh(-SCALE, SCALE), fresh(-SCALE, SCALE)
            va, vb = max(x, y), min(x, y)
        a, b = f"a{i}", f"b{i}"
        points += [CriticalPoint(a, k + 1, la, va), CriticalPoint(b, k, lb, vb)]
        boundary[(a, b)] = rng.choice((1, -1))

    G = GermComplex(n, tuple(points), boundary)
    for _ in range(slide_count):
        deg = rng.choice((k, k + 1))
        order = G.natural_order(deg)
        if len(order) < 2:
            continue
        l, i = rng.sample(range(1, len(order) + 1), 2)
        if order[i - 1].value < order[l - 1].value:
            l, i = i, l
        try:
            G = handle_slide(G, deg, l, i, rng.choice((1, -1)))
        except SlideUnavailableError:  # pragma: no cover - order fixed above
            continue
    return G
