import random

import pytest
from hypothesis import given, settings, strategies as st

from sysrep.errors import (
    InfiniteOrder,
    NegativeTimeForSemigroup,
    NotPeriodic,
    SingularMatrix,
    UnsupportedGroup,
    WrongTimeGroup,
)
from sysrep.fields import QQ, PrimeField
from sysrep.matrix import Matrix, mat_pow, minimal_polynomial
from sysrep.poly import Poly
from sysrep.representation import (
    Representation,
    TimeGroup,
    check_homomorphism,
    from_module_action,
    induce_quotient,
    module_action,
    poly_action,
)

from corpus import random_invertible

F2, F3, F5 = PrimeField(2), PrimeField(3), PrimeField(5)
FIB = Matrix(F2, [[1, 1], [1, 0]])
ROT3 = Matrix(F3, [[0, -1], [1, 0]])  # companion(x^2 + 1)


def Z(A):
    return Representation(TimeGroup.integers(), A)


def test_rho_examples():
    assert Z(FIB).rho(0).is_identity()
    assert Z(FIB).rho(3).is_identity()
    rep = Representation(TimeGroup.cyclic(4), ROT3)
    assert rep.rho(6) == rep.rho(2)
    assert rep.rho(2) == Matrix.identity(F3, 2).scale(2)


def test_evolve_examples():
    assert Z(FIB).evolve((0, 0), 17) == (0, 0)
    # [[0, -1], [1, 0]] sends the column e_1 to e_2
    assert Z(ROT3).evolve((1, 0), 1) == (0, 1)
    assert Z(ROT3).evolve((1, 0), -1) == (0, 2)


def test_group_validation():
    with pytest.raises(SingularMatrix):
        Z(Matrix(F5, [[1, 1], [1, 1]]))
    with pytest.raises(NotPeriodic):
        Representation(TimeGroup.cyclic(3), ROT3)
    with pytest.raises(UnsupportedGroup):
        TimeGroup("reals")
    semi = Representation(TimeGroup.naturals(), Matrix(F5, [[1, 1], [1, 1]]))
    assert semi.rho(2) == Matrix(F5, [[2, 2], [2, 2]])
    with pytest.raises(NegativeTimeForSemigroup):
        semi.rho(-1)


def test_homomorphism_pass_and_negative_control():
    rep = Z(FIB)
    assert check_homomorphism(rep).passed
    ident = Z(Matrix.identity(F5, 3))
    assert check_homomorphism(ident, trials=32).passed

    def corrupted(t):
        M = rep.rho(t)
        return M if t % 7 else M @ FIB  # a wrong table entry at multiples of 7

    res = check_homomorphism(rep, trials=256, rho_fn=corrupted)
    assert not res.passed and res.counterexample is not None


def test_poly_action_examples():
    rep = Z(ROT3)
    v = (1, 2)
    assert poly_action(rep, Poly.one(F3), v) == v
    assert poly_action(rep, Poly.x(F3), v) == ROT3.apply(v)
    m = minimal_polynomial(ROT3)
    assert poly_action(rep, m, v) == (0, 0)


def test_module_action_examples():
    T = 4
    rep = Representation(TimeGroup.cyclic(T), ROT3)
    v = (2, 1)
    assert module_action(rep, Poly.monomial(F3, T), v) == v
    g = Poly(F3, [1] * T)
    assert module_action(rep, Poly(F3, [-1, 1]) * g, v) == (0, 0)
    with pytest.raises(WrongTimeGroup):
        module_action(Z(ROT3), Poly.x(F3), v)


def test_induce_quotient_examples():
    assert induce_quotient(Z(Matrix.identity(F5, 2))).group == TimeGroup.cyclic(1)
    assert induce_quotient(Z(FIB)).group == TimeGroup.cyclic(3)
    with pytest.raises(InfiniteOrder):
        induce_quotient(Z(Matrix(QQ, [[1, 1], [0, 1]])))


def test_from_module_action_examples():
    trivial = from_module_action(F5, 1, Matrix.identity(F5, 2))
    assert trivial.group == TimeGroup.cyclic(1)
    assert from_module_action(F3, 4, ROT3).generator == ROT3
    with pytest.raises(NotPeriodic):
        from_module_action(F3, 3, ROT3)


@given(st.sampled_from([2, 3, 5, 13]), st.integers(1, 5), st.integers(0, 10**6),
       st.integers(-500, 500), st.integers(-500, 500))
@settings(max_examples=60, deadline=None)
def test_homomorphism_law_property(p, n, seed, t1, t2):
    A = random_invertible(PrimeField(p), n, random.Random(seed))
    rep = Z(A)
    assert rep.rho(t1 + t2) == rep.rho(t1) @ rep.rho(t2)
    assert rep.rho(t1) == (mat_pow(A, t1))


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_rational_rotation_powers(t1, t2):
    rep = Z(Matrix(QQ, [[0, 1], [-1, 0]]))
    assert rep.rho(t1 + t2) == rep.rho(t1) @ rep.rho(t2)
    assert rep.rho(4 * t1).is_identity()
