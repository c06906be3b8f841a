import pytest
from hypothesis import given
from hypothesis import strategies as st

from seshadri.lattice import (
    CurveGeneratorSet,
    IntersectionLattice,
    LatticeError,
    extend_blowup,
    is_nef_against,
    is_strictly_positive_against,
    lift,
    pair,
    pushforward,
)

P2 = IntersectionLattice(rank=1, gram=((1,),), basis_labels=("H",))
F1 = IntersectionLattice(rank=2, gram=((1, 0), (0, -1)), basis_labels=("H", "E"))


def test_pair_plane():
    assert pair(P2.divisor((3,)), P2.divisor((2,))) == 6


def test_pair_f1_by_hand():
    # (3H - E).(H - E) = 3*1 - 1*1 = 2
    assert pair(F1.divisor((3, -1)), F1.divisor((1, -1))) == 2


def test_pair_zero_class():
    zero = F1.divisor((0, 0))
    assert pair(F1.divisor((5, -3)), zero) == 0


def test_pair_lattice_mismatch():
    with pytest.raises(LatticeError):
        pair(P2.divisor((1,)), F1.divisor((1, 0)))


def test_gram_must_be_symmetric():
    with pytest.raises(LatticeError):
        IntersectionLattice(rank=2, gram=((0, 1), (2, 0)), basis_labels=("a", "b"))


def test_labels_must_be_distinct():
    with pytest.raises(LatticeError):
        IntersectionLattice(rank=2, gram=((1, 0), (0, 1)), basis_labels=("a", "a"))


@given(
    st.lists(st.integers(-5, 5), min_size=2, max_size=2),
    st.lists(st.integers(-5, 5), min_size=2, max_size=2),
    st.lists(st.integers(-5, 5), min_size=2, max_size=2),
    st.integers(-4, 4),
)
def test_pair_symmetric_bilinear(u, v, w, k):
    U, V, W = F1.divisor(u), F1.divisor(v), F1.divisor(w)
    assert pair(U, V) == pair(V, U)
    assert pair(U + k * V, W) == pair(U, W) + k * pair(V, W)


def test_nef_f1_hyperplane():
    gens = CurveGeneratorSet(
        generators=(("E", F1.divisor((0, 1))), ("H-E", F1.divisor((1, -1))))
    )
    assert is_nef_against(F1.divisor((1, 0)), gens)


def test_nef_f1_negative_case():
    gens = CurveGeneratorSet(
        generators=(("E", F1.divisor((0, 1))), ("H-E", F1.divisor((1, -1))))
    )
    # (2H - 3E).(H - E) = 2 - 3 = -1
    assert not is_nef_against(F1.divisor((2, -3)), gens)


def test_nef_zero_class():
    gens = CurveGeneratorSet(generators=(("E", F1.divisor((0, 1))),))
    assert is_nef_against(F1.divisor((0, 0)), gens)


def test_nef_requires_completeness():
    gens = CurveGeneratorSet(
        generators=(("E", F1.divisor((0, 1))),), completeness_assertion=False
    )
    with pytest.raises(LatticeError):
        is_nef_against(F1.divisor((1, 0)), gens)


def test_generator_set_rejects_zero_class():
    with pytest.raises(LatticeError):
        CurveGeneratorSet(generators=(("zero", F1.divisor((0, 0))),))


def test_strict_positivity_gate():
    L = F1.divisor((3, -1))
    assert is_strictly_positive_against(L, [F1.divisor((0, 1)), F1.divisor((1, -1))])
    # E itself fails the self-intersection part
    assert not is_strictly_positive_against(F1.divisor((0, 1)), [])
    # H is only semipositive against E
    assert is_strictly_positive_against(F1.divisor((1, 0)), [F1.divisor((1, -1))])
    assert not is_strictly_positive_against(F1.divisor((1, 0)), [F1.divisor((0, 1))])


def test_extend_blowup_plane():
    ext = extend_blowup(P2, "Ex")
    assert ext.rank == 2
    assert ext.gram == ((1, 0), (0, -1))
    assert ext.basis_labels == ("H", "Ex")


def test_extend_blowup_f1():
    ext = extend_blowup(F1, "Ex")
    assert ext.rank == 3
    assert ext.gram == ((1, 0, 0), (0, -1, 0), (0, 0, -1))


def test_extend_blowup_duplicate_label():
    with pytest.raises(LatticeError):
        extend_blowup(F1, "E")


@given(
    st.lists(st.integers(-5, 5), min_size=2, max_size=2),
    st.lists(st.integers(-5, 5), min_size=2, max_size=2),
)
def test_blowup_preserves_old_pairings(u, v):
    ext = extend_blowup(F1, "Ex")
    U, V = F1.divisor(u), F1.divisor(v)
    assert pair(lift(ext, U), lift(ext, V)) == pair(U, V)
    e = ext.basis_vector("Ex")
    assert pair(e, e) == -1
    assert pair(e, lift(ext, U)) == 0


def test_pushforward_inverts_lift():
    ext = extend_blowup(F1, "Ex")
    D = F1.divisor((2, -1))
    assert pushforward(F1, lift(ext, D)) == D
