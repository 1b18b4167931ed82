import random

import pytest

from germext.errors import InvalidGermError, NotApplicableError
from germext.generate import gen
from germext.intmat import IntMatrix
from germext.morse import CriticalPoint, GaugeElement, GermComplex, opposite_germ, trivial_germ
from germext.propertyp import (
    SATISFIED,
    UNKNOWN,
    VIOLATED,
    check_property_P,
    check_property_P_minus,
    two_index_check,
    verify_witness,
)

from oracles import f0, random_sl2, two_index_germ

ARRANGEMENTS = [(4, 3, 2, 1), (3, 4, 2, 1), (4, 3, 1, 2), (3, 4, 1, 2)]


def brute_P(M, values, bound=6):
    """Scalar form of the two conditions for the 2+2 family.

    In natural order (a, b) over (c, d), with a, c plus: the ++ block
    7-like entry must become +-1 and the -+ entry must vanish.
    """
    (A, B), (C, D) = M
    free4 = values[0] > values[1]
    free3 = values[2] > values[3]
    for n4 in range(-bound, bound + 1) if free4 else [0]:
        for n3 in range(-bound, bound + 1) if free3 else [0]:
            if A - B * n4 in (1, -1) and C - D * n4 + n3 * A - n3 * B * n4 == 0:
                return True
    return False


def test_f0_violated_everywhere():
    G = f0()
    v = two_index_check(G)
    assert v.status == VIOLATED
    assert v.obstruction.kind == "determinant_residue"
    assert (v.obstruction.details["det"], v.obstruction.details["modulus"],
            v.obstruction.details["residue"]) == (7, 5, 2)
    assert check_property_P(G).status == VIOLATED
    assert check_property_P_minus(G).status == VIOLATED
    assert check_property_P(opposite_germ(G)).status == VIOLATED


def test_trivial_germ_satisfied():
    G = trivial_germ(6)
    for check in (check_property_P, check_property_P_minus, two_index_check):
        v = check(G)
        assert v.status == SATISFIED and v.witness.is_identity()


def test_satisfied_two_index_instance():
    G = two_index_germ([[7, 2], [-3, -1]])
    v = two_index_check(G)
    assert v.status == SATISFIED
    assert v.witness.blocks[4] == IntMatrix([[3]])
    assert v.witness.blocks[3] == IntMatrix([[0]])
    assert check_property_P(G).status == SATISFIED
    assert check_property_P_minus(G).status == SATISFIED


def test_rank_mismatch():
    pts = (CriticalPoint("max", 6, "+", 10), CriticalPoint("a", 4, "+", 4), CriticalPoint("b", 4, "-", 3),
           CriticalPoint("c", 3, "-", 2), CriticalPoint("d", 3, "-", 1), CriticalPoint("min", 0, "-", -10))
    G = GermComplex(6, pts, {("a", "c"): 1, ("b", "d"): 1})
    v = check_property_P(G)
    assert v.status == VIOLATED and v.obstruction.kind in ("rank_mismatch", "euler_characteristic")


def test_two_index_preconditions():
    with pytest.raises(NotApplicableError):
        two_index_check(two_index_germ([[7, 5], [-3, -2]], n=5, k=2))
    with pytest.raises(NotApplicableError):
        two_index_check(two_index_germ([[7, 5], [-3, -2]], values=(3, 4, 2, 1)))
    with pytest.raises(NotApplicableError):
        two_index_check(two_index_germ([[7, 5], [-3, -2]], k=1))
    with pytest.raises(NotApplicableError):
        two_index_check(GermComplex(8, (
            CriticalPoint("max", 8, "+", 9), CriticalPoint("x", 5, "+", 2), CriticalPoint("y", 4, "+", 1),
            CriticalPoint("u", 3, "+", 0), CriticalPoint("v", 2, "+", -1), CriticalPoint("min", 0, "-", -9)),
            {("x", "y"): 1, ("u", "v"): 1}))


def test_invalid_germ_rejected():
    G = GermComplex(3, (CriticalPoint("max", 3, "+", 1), CriticalPoint("min", 0, "-", 1)))
    with pytest.raises(InvalidGermError):
        check_property_P(G)


def test_negative_bound_rejected():
    with pytest.raises(ValueError):
        check_property_P(f0(), -1)


def test_verify_witness_rejects_wrong_gauge():
    G = two_index_germ([[7, 2], [-3, -1]])
    assert verify_witness(G, GaugeElement({4: IntMatrix([[3]]), 3: IntMatrix([[0]])}))
    assert not verify_witness(G, GaugeElement({4: IntMatrix([[2]]), 3: IntMatrix([[0]])}))


@pytest.mark.parametrize("seed", range(40))
def test_two_index_family_against_brute_force(seed):
    rng = random.Random(seed)
    M = random_sl2(rng)
    for values in ARRANGEMENTS:
        G = two_index_germ(M, values)
        found = brute_P(M, values, bound=12)
        v = check_property_P(G)
        if v.status == SATISFIED:
            (A, B), (C, D) = M
            n4, n3 = v.witness.blocks[4][0, 0], v.witness.blocks[3][0, 0]
            assert A - B * n4 in (1, -1) and C - D * n4 + n3 * A - n3 * B * n4 == 0
        for w in (v, check_property_P(opposite_germ(G)), check_property_P_minus(G)):
            if w.status == VIOLATED:
                assert not found
        if values == (4, 3, 2, 1):
            assert (two_index_check(G).status == SATISFIED) == found


@pytest.mark.parametrize("seed", range(30))
def test_two_index_check_agrees_with_general_search(seed):
    rng = random.Random(seed)
    G = gen(seed, rng.randint(6, 9), 3, rng.randint(0, 4), rng.randint(0, 8), separated=True)
    try:
        exact = two_index_check(G)
    except NotApplicableError:
        pytest.skip("preconditions not met")
    for check in (check_property_P, check_property_P_minus):
        general = check(G, search_bound=4, use_shortcut=False)
        assert general.method in ("search", "euler")
        if general.status != UNKNOWN:
            assert general.status == exact.status


def test_unknown_carries_bound():
    # minus point above the plus point in degree k: search cannot be exhaustive
    G = two_index_germ([[0, 1], [1, 0]], values=(4, 3, 1, 2))
    v = check_property_P(G, search_bound=2)
    assert v.status == UNKNOWN and v.search_bound == 2


def test_node_budget_gives_unknown():
    G = two_index_germ([[1, 1], [0, 1]], values=(3, 4, 2, 1))
    assert check_property_P(G, 3, max_nodes=0).status == UNKNOWN


def test_witness_json():
    v = two_index_check(two_index_germ([[7, 2], [-3, -1]]))
    assert v.to_json()["witness"] == {"3": [[0]], "4": [[3]]}
