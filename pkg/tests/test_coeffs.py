import itertools

import pytest

from nervecover.coeffs import (CHI, CHI_REL, FACE_COUNT, c_bruteforce, c_chi, c_chi_rel,
                               c_face_count, coefficient_column, coefficient_table)
from nervecover.simplicial import (EMPTY, Subcomplex, enumerate_subcomplexes, euler_char,
                                   face_from_vertices as F, is_subcomplex, relative_euler_char)


def cx(*faces, n=3):
    return Subcomplex.from_faces([F(f) for f in faces], n, close=True)


def test_chi_examples():
    assert c_chi(cx((1,), (2,)), 2) == 2
    assert c_chi(cx((1, 2)), 3) == 1 - 2 ** 3
    assert c_chi(cx((1, 2, 3)), 3) == 1
    assert c_chi(EMPTY(3), 0) == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_chi_matches_bruteforce(n):
    for s in enumerate_subcomplexes(n):
        if len(s.faces) > 16:
            continue
        for k in range(7):
            assert c_chi(s, k) == c_bruteforce(CHI, s, k), (s, k)


@pytest.mark.parametrize("d", [0, 1, 2])
def test_face_count_matches_bruteforce(d):
    for s in enumerate_subcomplexes(4):
        if len(s.faces) > 16:
            continue
        for k in range(5):
            assert c_face_count(s, d, k) == c_bruteforce(FACE_COUNT(d), s, k)


def test_face_count_examples():
    assert c_face_count(cx((1, 2)), 1, 1) == 1
    assert c_face_count(cx((1, 2), (2, 3)), 1, 2) == 2
    assert c_face_count(cx((1, 2), (3,)), 1, 2) == 0


def test_k_zero_vanishes_off_empty():
    for s in enumerate_subcomplexes(3):
        want = 1 if s.bits == 0 else 0
        assert c_chi(s, 0) == want
        assert c_bruteforce(CHI, s, 0) == want


def test_relative_reduces_to_absolute():
    fam = enumerate_subcomplexes(3)
    for s in fam:
        for k in range(7):
            assert c_chi_rel(s, EMPTY(3), k) == c_chi(s, k)
    assert c_chi_rel(EMPTY(3), EMPTY(3), 0) == 1


def test_relative_matches_bruteforce():
    fam = enumerate_subcomplexes(3)
    for s, r in itertools.product(fam, fam):
        if not is_subcomplex(r, s) or len(s.faces) > 5:
            continue
        for k in range(4):
            assert c_chi_rel(s, r, k) == c_bruteforce(CHI_REL, s, k, r), (s, r, k)
    v = cx((1,))
    assert c_chi_rel(v, v, 2) == c_bruteforce(CHI_REL, v, 2, v)


def test_relative_zero_off_lattice():
    assert c_chi_rel(cx((1,)), cx((2,)), 1) == 0


@pytest.mark.parametrize("k", [1, 2, 3])
def test_expansion_reproduces_powers(k):
    # sum over subcomplexes of coefficient * [s in N] equals chi(N)^k for every N
    fam = enumerate_subcomplexes(3)
    col = coefficient_column(CHI, 3, k)
    for N in fam:
        val = sum(c for s, c in zip(fam, col) if is_subcomplex(s, N))
        assert val == euler_char(N) ** k


def test_relative_expansion_reproduces_powers():
    fam = enumerate_subcomplexes(2)
    for N in fam:
        for B in fam:
            if not is_subcomplex(B, N):
                continue
            for k in range(4):
                val = sum(c_chi_rel(s, r, k) for s in fam for r in fam
                          if is_subcomplex(s, N) and is_subcomplex(r, B) and is_subcomplex(r, s))
                assert val == relative_euler_char(N, B) ** k


def test_table_rows():
    rows = list(coefficient_table(FACE_COUNT(1), 2, 2).rows())
    assert len(rows) == 6
    assert all(k == 2 for _, k, _ in rows)
