import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from macdo.exact import RatFunc
from macdo.factorise import (
    AWParams,
    BranchError,
    ContourError,
    QuadratureConfig,
    apply_M_n3,
    apply_M_n3_inverse,
    apply_M_xi,
    apply_M_xi_inverse,
    aw_contour_integral,
    aw_integral,
    c_n2,
    c_n3,
    convergence_pair,
    integer_g_check,
    integer_g_inverse,
    macdonald_side,
    orthogonality_n2,
    roundtrip_n2,
    roundtrip_n3,
    separated_side_n2,
    separated_side_n3,
    theorem1,
    theorem2_direct,
    theorem3,
    theorem4_direct,
)
from macdo.qseries import poch_inf_numeric
from macdo.separated import phi_via_chi
from macdo.weights import DominantWeight, SymmetricPoly

W = DominantWeight.parse
P_ = RatFunc.parse
Q, T = 0.2, 0.5
N2 = [W(s) for s in ("0,0", "0,1", "0,2", "1,2")]
N3 = [W(s) for s in ("0,0,0", "0,0,1", "0,1,1", "0,0,2")]


def rel(got, want):
    return abs(got - want) / max(abs(want), 1e-300)


# Askey-Wilson integral

def test_aw_zero_parameters():
    lhs, rhs = aw_integral(AWParams(0, 0, 0, 0, 0.5))
    assert abs(rhs - 2 / poch_inf_numeric(0.5, 0.5)) < 1e-12
    assert abs(rhs - 6.9254932389) < 1e-9
    assert rel(lhs, rhs) < 1e-9


def test_aw_real_parameters():
    lhs, rhs = aw_integral(AWParams(0.3, 0.2, 0.1, 0.05, 0.4))
    assert rel(lhs, rhs) < 1e-9


def test_aw_outside_circle_is_rejected():
    with pytest.raises(ContourError):
        aw_integral(AWParams(1.2, 0.2, 0.1, 0.05, 0.4))


def test_aw_deformed_contour():
    lhs, rhs = aw_integral(AWParams(1.2, 0.2, 0.1, 0.05, 0.4), deform=True)
    assert rel(lhs, rhs) < 1e-9
    lhs, rhs = aw_integral(AWParams(3.0, 0.2, 0.1, 0.05, 0.4), deform=True)
    assert rel(lhs, rhs) < 1e-9


def test_pole_near_circle_rejected():
    with pytest.raises(ContourError):
        aw_integral(AWParams(1.0001, 0.2, 0.1, 0.05, 0.4), deform=True)


def test_aw_moment_is_zero_for_odd_polynomial():
    # the weight is invariant under z -> 1/z, so z - 1/z integrates to zero
    p = AWParams(0.3, 0.2, 0.1, 0.05, 0.4)
    v = aw_contour_integral(lambda z: z - 1 / z, p)
    assert abs(v) < 1e-13


draw = st.complex_numbers(max_magnitude=0.85, allow_nan=False, allow_infinity=False)


@settings(max_examples=15)
@given(draw, draw, draw, draw, st.sampled_from([0.3, 0.5]))
def test_aw_random(a, b, c, d, q):
    p = AWParams(a, b, c, d, q)
    lhs, rhs = aw_integral(p)
    assert rel(lhs, rhs) < 1e-9


# n = 2 operators

def test_M_xi_on_constant():
    assert abs(apply_M_xi(lambda a, b: 1.0, 0.5, 0.5, 1.0, Q, T) - 1) < 1e-8


def test_M_xi_on_P01():
    got = apply_M_xi(lambda a, b: a + b, 0.5, 0.5, 1.0, Q, T)
    c = T / (1 + T)
    phi = phi_via_chi(W("0,1")).evaluate(0.5, Q, T)
    assert abs(c_n2(W("0,1")).eval_complex({"q": Q, "t": T}) - c) < 1e-15
    assert rel(got, c * phi * phi) < 1e-8


def test_branch_error():
    with pytest.raises(BranchError):
        apply_M_xi(lambda a, b: 1.0, 0.5 + 0.1j, 0.5, 1.0, Q, T)
    with pytest.raises(BranchError):
        apply_M_n3(lambda a, b, c: 1.0, 0.5, -0.5, 0.8, Q, T)


def test_forward_regime_preflight():
    # y_+ above t^(1/2) puts t^(-1/2) y_+ outside the circle
    with pytest.raises(ContourError):
        apply_M_xi(lambda a, b: 1.0, 0.9, 0.9, 1.0, Q, T)


@pytest.mark.parametrize("lam", N2)
@pytest.mark.parametrize("q,t,xi", [(0.2, 0.5, 1.0), (0.3, 0.4, 0.6 + 0.3j)])
def test_theorem1(lam, q, t, xi):
    got, want = theorem1(lam, 0.5, 0.5, xi, q, t)
    assert rel(got, want) < 1e-8


def test_c_n2_at_zero():
    assert c_n2(W("0,0")) == RatFunc(1)
    assert c_n2(W("1,1"), 2) == P_("4/t")


@pytest.mark.parametrize("lam", N2)
def test_theorem2_direct(lam):
    got, want = theorem2_direct(lam, 0.77, 0.636, 1.0, Q, T)
    assert rel(got, want) < 1e-6


def test_inverse_on_trivial_and_02():
    f = separated_side_n2(W("0,0"), 1.0, Q, T)
    assert abs(apply_M_xi_inverse(f, 0.8, 0.6, 1.0, Q, T) - 1) < 1e-8
    f = separated_side_n2(W("0,2"), 1.0, Q, T)
    want = macdonald_side(W("0,2"), Q, T)(0.8, 0.6)
    assert rel(apply_M_xi_inverse(f, 0.8, 0.6, 1.0, Q, T), want) < 1e-6


@pytest.mark.slow
@pytest.mark.parametrize("lam", [W("0,1"), W("1,2")])
def test_roundtrip_n2(lam):
    got, want = roundtrip_n2(lam, 0.8, 0.6, 1.0, Q, T)
    assert rel(got, want) < 1e-6


# n = 3 operators

def test_M_n3_examples():
    assert abs(apply_M_n3(lambda a, b, c: 1.0, 0.5, 0.5, 0.8, Q, T) - 1) < 1e-8
    c = (1 - T ** 2) ** 2 / ((1 - T ** 3) * (1 - T))
    assert abs(c_n3(W("0,0,1")).eval_complex({"q": Q, "t": T}) - c) < 1e-14
    phi = phi_via_chi(W("0,0,1")).evaluate(0.5, Q, T)
    got = apply_M_n3(lambda a, b, x: a + b + x, 0.5, 0.5, 0.8, Q, T)
    assert rel(got, c * 0.8 * phi * phi) < 1e-6


@pytest.mark.parametrize("lam", N3)
def test_theorem3(lam):
    got, want = theorem3(lam, 0.5, 0.5, 0.8, Q, T)
    assert rel(got, want) < 1e-6


@pytest.mark.parametrize("lam", N3)
def test_theorem4_direct(lam):
    got, want = theorem4_direct(lam, 0.9, 0.6, 0.75, Q, T)
    assert rel(got, want) < 1e-6


def test_n3_inverse_examples():
    f = separated_side_n3(W("0,0,0"), Q, T)
    assert abs(apply_M_n3_inverse(f, 0.9, 0.6, 0.75, Q, T) - 1) < 1e-8
    f = separated_side_n3(W("0,0,1"), Q, T)
    assert rel(apply_M_n3_inverse(f, 0.9, 0.6, 0.75, Q, T), 0.9 + 0.6 + 0.75) < 1e-6


@pytest.mark.slow
def test_roundtrip_n3():
    got, want = roundtrip_n3(W("0,1,1"), 0.9, 0.6, 0.75, Q, T)
    assert rel(got, want) < 1e-6


# integer g

def test_integer_g_examples():
    assert integer_g_inverse(1, W("0,0,0")) == RatFunc(1)
    got, want, ok = integer_g_check(1, W("0,0,1"))
    assert ok and got == SymmetricPoly.monomial(W("0,0,1"))
    got, want, ok = integer_g_check(1, W("0,0,2"))
    assert ok
    assert got == SymmetricPoly(3, {W("0,0,2"): 1, W("0,1,1"): 1})


@pytest.mark.parametrize("g", [1, 2])
@pytest.mark.parametrize("lam", ["0,0,0", "0,0,1", "0,1,1", "1,1,1", "0,0,2", "0,1,2", "1,1,2", "0,2,2", "1,2,2",
                                 "2,2,2"])
def test_integer_g_exact(g, lam):
    got, want, ok = integer_g_check(g, W(lam))
    assert ok, (got, want)


def test_integer_g_needs_k_zero():
    # without the k = 0 term the operator does not reproduce P
    for lam in ("0,0,0", "0,0,1"):
        _, _, ok = integer_g_check(1, W(lam), k_start=1)
        assert not ok


def test_integer_g_rejects_bad_input():
    with pytest.raises(ValueError):
        integer_g_inverse(0, W("0,0,1"))
    with pytest.raises(ValueError):
        integer_g_inverse(1, W("0,1"))


# orthogonality

def test_orthogonality_examples():
    mass = orthogonality_n2(W("0,0"), W("0,0"), 0.4, 0.5)
    assert mass.real > 0 and abs(mass.imag) < 1e-12
    for a, b in (("0,0", "0,1"), ("0,1", "0,2"), ("0,2", "1,1")):
        na = orthogonality_n2(W(a), W(a), 0.4, 0.5).real
        nb = orthogonality_n2(W(b), W(b), 0.4, 0.5).real
        assert abs(orthogonality_n2(W(a), W(b), 0.4, 0.5)) < 1e-7 * math.sqrt(na * nb)


def test_orthogonality_needs_real_parameters():
    with pytest.raises(ValueError):
        orthogonality_n2(W("0,0"), W("0,1"), 0.4, 1.5)


# convergence

def test_convergence_pair():
    lam = W("0,2")
    a, b = convergence_pair(lambda cfg: theorem1(lam, 0.5, 0.5, 1.0, Q, T, cfg)[0], QuadratureConfig())
    assert rel(a, b) < 1e-12


def test_quadrature_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(points=1000)
    assert QuadratureConfig(points=64, trunc=10).doubled() == QuadratureConfig(points=128, trunc=20)
