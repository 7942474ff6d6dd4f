import random
from collections import Counter
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from divcodes import gf
from divcodes.codes import (
    LinearCode,
    code_from_multiset,
    format_matrix,
    is_projective,
    is_spanning_code,
    multiset_from_code,
    parse_matrix,
    weight_distribution,
    weight_divisibility,
)
from divcodes.geometry import PointMultiset, enumerate_points, hyperoval, is_divisible, two_lines_construction

from helpers import random_divisible, random_multiset

FIXTURES = Path(__file__).parent / "fixtures"
REFERENCE_CODES = {  # file: (q, n, divisor)
    "f8_n12.txt": (8, 12, 2),
    "f8_n13.txt": (8, 13, 2),
    "f8_n14.txt": (8, 14, 2),
    "f8_n15.txt": (8, 15, 2),
    "f8_n17.txt": (8, 17, 2),
    "f9_n27.txt": (9, 27, 3),
    "f9_n31.txt": (9, 31, 3),
}


def brute_weights(C):
    F = C.field
    G = C.generator
    out = Counter()
    for msg in np.ndindex(*([F.q] * C.k)):
        word = np.zeros(C.n, dtype=np.int64)
        for coef, row in zip(msg, G):
            word = F.add[word, F.mul[coef, row]]
        out[int(np.count_nonzero(word))] += 1
    return dict(out)


@pytest.mark.parametrize("name", sorted(REFERENCE_CODES))
def test_fixture_codes(name):
    q, n, d = REFERENCE_CODES[name]
    C = parse_matrix((FIXTURES / name).read_text())
    assert C.field.q == q and C.k == 3 and C.n == n == C.effective_length
    assert weight_divisibility(C) % d == 0
    assert is_projective(C) and is_spanning_code(C)
    assert is_divisible(multiset_from_code(C), d)


def test_n12_first_row_and_distribution():
    C = parse_matrix((FIXTURES / "f8_n12.txt").read_text())
    assert format_matrix(C).splitlines()[0] == "111111111100"
    assert weight_distribution(C) == {0: 1, 8: 21, 10: 336, 12: 154}


def test_parse_variants():
    C = parse_matrix("1", q=5)
    assert C.k == C.n == 1 and C.generator.tolist() == [[1]]
    C2 = parse_matrix("( 1 0 2 )\n[0 1 1]\n", q=3)
    assert C2.generator.tolist() == [[1, 0, 2], [0, 1, 1]]
    assert parse_matrix(format_matrix(C2, header=True)) == C2
    hexed = parse_matrix("q=16 k=1 n=3\nfa1\n")
    assert hexed.generator.tolist() == [[15, 10, 1]]
    with pytest.raises(ValueError):
        parse_matrix("12\n1\n", q=3)  # ragged
    with pytest.raises(ValueError):
        parse_matrix("13\n", q=3)  # digit out of range
    with pytest.raises(ValueError):
        parse_matrix("q=8 k=2 n=3\n111\n")  # shape
    with pytest.raises(ValueError):
        parse_matrix("111\n")  # no field


@pytest.mark.parametrize("q,k,n", [(2, 4, 9), (3, 3, 7), (4, 3, 6), (8, 2, 9), (9, 2, 5)])
def test_weight_distribution_brute(q, k, n):
    rng = np.random.default_rng(q * k + n)
    C = LinearCode(gf.GF(q), rng.integers(0, q, size=(k, n)))
    assert weight_distribution(C) == brute_weights(C)


def test_blocked_enumeration(monkeypatch):
    import divcodes.codes as codes

    C = parse_matrix((FIXTURES / "f9_n31.txt").read_text())
    full = weight_distribution(C)
    monkeypatch.setattr(codes, "_BLOCK", 40)
    assert weight_distribution(C) == full


def test_round_trip_multiset_code():
    S = hyperoval(8)
    C = code_from_multiset(S)
    assert C.n == 10 and multiset_from_code(C) == S
    assert weight_divisibility(C) == 2
    assert weight_divisibility(code_from_multiset(two_lines_construction(8, 2))) % 4 == 0
    with pytest.raises(ValueError):
        code_from_multiset(PointMultiset(8, 3))


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_weights_invariant_under_monomial_maps(seed):
    rng = random.Random(seed)
    name = rng.choice(sorted(REFERENCE_CODES))
    C = parse_matrix((FIXTURES / name).read_text())
    F = C.field
    perm = list(range(C.n))
    rng.shuffle(perm)
    scal = np.array([rng.randrange(1, F.q) for _ in range(C.n)])
    G = F.mul[C.generator[:, perm], scal[None, :]]
    C2 = LinearCode(F, G)
    assert weight_distribution(C2) == weight_distribution(C)


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_geometric_and_weight_divisibility_agree(seed):
    rng = random.Random(seed)
    q = rng.choice([2, 3, 4, 8, 9])
    v = rng.randint(2, 3 if q > 4 else 4)
    if rng.random() < 0.5:
        M = random_divisible(rng, q, v, gf.GF(q).p * rng.choice([1, q]))
    else:
        M = random_multiset(rng, q, v, rng.randint(1, 10))
    g = weight_divisibility(code_from_multiset(M))
    for delta in (2, 3, 4, 8, 9):
        assert is_divisible(M, delta) == (g % delta == 0)


def test_operation_examples():
    F4 = gf.GF(4)
    line = PointMultiset.from_points(F4, 2, enumerate_points(2, F4))
    C = code_from_multiset(line)
    assert (C.k, C.n) == (2, 5) and set(weight_distribution(C)) == {0, 4}
    triple = code_from_multiset(PointMultiset(F4, 2, {(1, 0): 3}))
    assert triple.generator.T.tolist() == [[1, 0]] * 3
    assert weight_divisibility(LinearCode(gf.GF(5), np.ones((1, 7), dtype=int))) == 7
    Z = parse_matrix("1023\n0111\n", q=4)
    Z0 = LinearCode(F4, np.concatenate([Z.generator, np.zeros((2, 1), dtype=int)], axis=1))
    assert Z0.effective_length == Z0.n - 1 == 4
    assert multiset_from_code(Z0).cardinality == 4
    doubled = LinearCode(F4, np.array([[1, 2], [0, 0]]))
    assert not is_projective(doubled) and not is_spanning_code(doubled)
    assert is_projective(parse_matrix((FIXTURES / "f8_n17.txt").read_text()))
    from divcodes.expansion import DivParams
    from divcodes.geometry import construct_from_expansion

    assert not is_projective(code_from_multiset(construct_from_expansion(1049, DivParams(8, 2, 1))))


def test_enumeration_guard():
    with pytest.raises(ValueError):
        weight_distribution(LinearCode(gf.GF(16), np.eye(8, dtype=int)))
