import pytest

from nervecover.errors import ConfigurationError
from nervecover.simplicial import (DEDEKIND, EMPTY, EMPTY_SIMPLEX, Subcomplex,
                                   antichain_to_chain, chain_to_antichain,
                                   enumerate_bruteforce, enumerate_subcomplexes, euler_char,
                                   face_count, face_from_vertices as F, face_profile,
                                   full_simplex, is_downset, is_subcomplex, parse,
                                   relative_euler_char, to_text)


def cx(*faces, n=3):
    return Subcomplex.from_faces([F(f) for f in faces], n, close=True)


FULL = cx((1, 2, 3))
HOLLOW = cx((1, 2), (1, 3), (2, 3))
EDGE = cx((1, 2))
TWO_VERTS = cx((1,), (2,))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_dedekind_counts(n):
    assert len(enumerate_subcomplexes(n)) == DEDEKIND[n]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_enumeration_matches_bruteforce(n):
    fam = enumerate_subcomplexes(n)
    assert sorted(s.bits for s in fam) == sorted(enumerate_bruteforce(n))


def test_family_is_canonically_ordered_and_indexed():
    fam = enumerate_subcomplexes(3)
    keys = [s.sort_key for s in fam]
    assert keys == sorted(keys)
    assert fam[0] == EMPTY(3)
    assert fam[1] == EMPTY_SIMPLEX(3)
    for i, s in enumerate(fam):
        assert fam.ordinal(s) == i
        assert is_downset(s.bits, 3)


def test_antichain_roundtrip_examples():
    assert chain_to_antichain(FULL) == [F((1, 2, 3))]
    assert chain_to_antichain(EMPTY(3)) == []
    assert sorted(chain_to_antichain(HOLLOW)) == sorted(F(e) for e in ((1, 2), (1, 3), (2, 3)))
    assert antichain_to_chain([F((1, 2, 3))], 3) == FULL
    assert len(FULL.faces) == 7
    assert antichain_to_chain([], 3) == EMPTY(3)
    assert antichain_to_chain([F((1, 2)), F((3,))], 3) == cx((1, 2), (3,))
    assert len(cx((1, 2), (3,)).faces) == 4


@pytest.mark.parametrize("n", [2, 3, 4])
def test_antichain_roundtrip_all(n):
    for s in enumerate_subcomplexes(n):
        assert antichain_to_chain(chain_to_antichain(s), n) == s


def test_antichain_rejects_comparable_faces():
    with pytest.raises(ConfigurationError):
        antichain_to_chain([F((1, 2)), F((1,))], 3)


def test_euler_characteristic():
    assert euler_char(EMPTY(3)) == 0
    assert euler_char(FULL) == 1
    assert euler_char(HOLLOW) == 0
    assert euler_char(TWO_VERTS) == 2


def test_relative_euler_characteristic():
    assert relative_euler_char(FULL, EMPTY(3)) == 1
    assert relative_euler_char(EDGE, TWO_VERTS) == -1
    for s in enumerate_subcomplexes(3):
        assert relative_euler_char(s, s) == 0
    # pair outside the lattice
    assert relative_euler_char(TWO_VERTS, EDGE) == 0


def test_face_counts_and_profile():
    assert face_count(HOLLOW, 1) == 3
    assert face_count(HOLLOW, 2) == 0
    assert face_count(FULL, 0) == 3
    p = face_profile(FULL)
    assert (p.top_even, p.top_odd, p.low_even, p.low_odd) == (1, 0, 3, 3)
    assert (p.top, p.low, p.total) == (1, 6, 7)
    p = face_profile(HOLLOW)
    assert (p.top_even, p.top_odd, p.low_even, p.low_odd, p.top, p.low, p.total) == (0, 3, 3, 0, 3, 3, 6)
    p = face_profile(cx((1,)))
    assert (p.top_even, p.top_odd, p.low_even, p.low_odd) == (1, 0, 0, 0)


def test_text_roundtrip():
    for s in enumerate_subcomplexes(4):
        assert parse(to_text(s), 4) == s
    assert to_text(EMPTY(3)) == "0"
    assert to_text(EMPTY_SIMPLEX(3)) == "{}"


def test_subcomplex_order():
    assert is_subcomplex(EDGE, FULL)
    assert not is_subcomplex(FULL, HOLLOW)
    assert EMPTY(3) <= EMPTY_SIMPLEX(3) <= TWO_VERTS <= EDGE <= HOLLOW <= FULL == full_simplex(3)


def test_from_faces_requires_closure():
    with pytest.raises(ConfigurationError):
        Subcomplex.from_faces([F((1, 2))], 3)
