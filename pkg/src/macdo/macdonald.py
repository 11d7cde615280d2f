"""Macdonald-Ruijsenaars operators H_k and the polynomials P_lambda.

H_k = sum_{|J|=k} prod_{j in J, l not in J} v_{jl} prod_{j in J} T_{q,x_j},
v_{jl} = (tau x_j - tau^-1 x_l) / (x_j - x_l),  t = tau^2.

Operators are applied to monomial symmetric functions over the ring of
rational functions in x: every term is multiplied by the Vandermonde
product, summed, and the product is divided out again with an exact
remainder check.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, List

from .exact import LaurentPoly, RatFunc
from .weights import (
    DominantWeight,
    SymmetricPoly,
    as_weight,
    dominance_leq,
    monomial_expand,
    to_monomial_basis,
    weights_below,
    xvars,
)


class CancellationError(ArithmeticError):
    """The Vandermonde denominator did not cancel (arithmetic bug)."""


class DegenerateEigenvalueError(ArithmeticError):
    pass


_TAU = LaurentPoly.var("tau")
_TAU_INV = LaurentPoly.var("tau", -1)
_Q = LaurentPoly.var("q")


@dataclass(frozen=True)
class EigenvalueVector:
    weight: DominantWeight
    values: tuple  # h_1 .. h_n as RatFunc

    def h(self, k: int) -> RatFunc:
        if k == 0:
            return RatFunc(1)
        return self.values[k - 1]


def spectral_mu(lam) -> List[LaurentPoly]:
    """mu_j = q^{lam_j} t^{j-(n+1)/2} = q^{lam_j} tau^{2j-n-1}."""
    lam = as_weight(lam)
    n = lam.n
    return [LaurentPoly.monomial({"q": lam[j - 1], "tau": 2 * j - n - 1}) for j in range(1, n + 1)]


def eigenvalues(lam) -> EigenvalueVector:
    lam = as_weight(lam)
    mus = spectral_mu(lam)
    # elementary symmetric polynomials by the usual recurrence
    e = [LaurentPoly.constant(1)] + [LaurentPoly.constant(0)] * lam.n
    for m in mus:
        for k in range(lam.n, 0, -1):
            e[k] = e[k] + e[k - 1] * m
    return EigenvalueVector(lam, tuple(RatFunc(v) for v in e[1:]))


def _divide_by_difference(p: LaurentPoly, xa: str, xb: str) -> LaurentPoly:
    """Exact quotient p / (xa - xb); raises if the remainder is nonzero."""
    groups = p.coeffs_in((xa,))
    remainder = LaurentPoly.constant(0)
    quotient = LaurentPoly.constant(0)
    for (e,), c in groups.items():
        if e < 0:
            raise CancellationError(f"negative power of {xa}")
        remainder = remainder + c * LaurentPoly.var(xb, e)
        for i in range(e):
            quotient = quotient + c * LaurentPoly.monomial({xa: i, xb: e - 1 - i})
    if not remainder.is_zero():
        raise CancellationError(f"({xa} - {xb}) does not divide the numerator")
    return quotient


@lru_cache(maxsize=None)
def _subset_coefficients(n: int, k: int):
    """For each |J| = k: Vandermonde * prod v_{jl}, as a Laurent polynomial."""
    xs = [LaurentPoly.var(x) for x in xvars(n)]
    out = []
    for J in combinations(range(n), k):
        Jset = set(J)
        coef = LaurentPoly.constant(1)
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if (a in Jset) == (b in Jset):
                    coef = coef * (xs[a] - xs[b])
        for j in J:
            for l in range(n):
                if l in Jset:
                    continue
                coef = coef * (_TAU * xs[j] - _TAU_INV * xs[l])
                if j > l:
                    sign = -sign
        out.append((J, coef * sign))
    return tuple(out)


@lru_cache(maxsize=None)
def _H_on_reduced_monomial(n: int, k: int, mu: DominantWeight) -> Dict[DominantWeight, LaurentPoly]:
    names = xvars(n)
    f = monomial_expand(mu)
    numerator = LaurentPoly.constant(0)
    for J, coef in _subset_coefficients(n, k):
        shifted = f.subs({names[j]: _Q * LaurentPoly.var(names[j]) for j in J})
        numerator = numerator + coef * shifted
    for a in range(n):
        for b in range(a + 1, n):
            numerator = _divide_by_difference(numerator, names[a], names[b])
    sym = to_monomial_basis(numerator, n)
    out = {}
    for nu, c in sym.coeffs.items():
        if not c.is_polynomial():
            raise CancellationError("unexpected denominator in H_k m_mu")
        out[nu] = c.num
    return out


def H_on_monomial(n: int, k: int, mu) -> Dict[DominantWeight, LaurentPoly]:
    """H_k m_mu in the monomial basis, coefficients Laurent in (q, tau).

    Uses H_k (x_1...x_n)^a f = q^{ka} (x_1...x_n)^a H_k f.
    """
    mu = as_weight(mu)
    if not 0 <= k <= n or mu.n != n:
        raise ValueError("bad operator level or weight length")
    if k == 0:
        return {mu: LaurentPoly.constant(1)}
    a = mu[0]
    base = _H_on_reduced_monomial(n, k, mu.shift(-a))
    if a == 0:
        return base
    factor = LaurentPoly.var("q", k * a)
    return {nu.shift(a): c * factor for nu, c in base.items()}


@dataclass(frozen=True)
class MacdonaldOperator:
    n: int
    i: int

    def __post_init__(self):
        if not 1 <= self.i <= self.n:
            raise ValueError(f"operator level {self.i} outside 1..{self.n}")

    def __call__(self, f: SymmetricPoly) -> SymmetricPoly:
        return apply_H(self, f)


def apply_H(op: MacdonaldOperator, f: SymmetricPoly) -> SymmetricPoly:
    if not isinstance(f, SymmetricPoly):
        f = to_monomial_basis(f, op.n)
    if f.n != op.n:
        raise ValueError(f"operator acts on {op.n} variables, got {f.n}")
    acc: Dict[DominantWeight, RatFunc] = {}
    for mu, c in f.coeffs.items():
        for nu, v in H_on_monomial(op.n, op.i, mu).items():
            acc[nu] = acc.get(nu, RatFunc()) + c * RatFunc(v)
    return SymmetricPoly(op.n, acc)


def macdonald_P(lam, check: bool = True) -> SymmetricPoly:
    """P_lambda by back substitution in the triangular H_1 eigenproblem."""
    lam = as_weight(lam)
    return _macdonald_P(lam, check)


@lru_cache(maxsize=None)
def _macdonald_P(lam: DominantWeight, check: bool) -> SymmetricPoly:
    n = lam.n
    a = lam[0]
    top = lam.shift(-a)
    basis = weights_below(top)
    columns = {nu: H_on_monomial(n, 1, nu) for nu in basis}
    for nu, col in columns.items():
        for rho in col:
            if not dominance_leq(rho, nu):
                raise CancellationError(f"H_1 m_{nu} leaves the dominance interval ({rho})")
    h = {nu: eigenvalues(nu) for nu in basis}
    target = h[top]
    kappa: Dict[DominantWeight, RatFunc] = {top: RatFunc(1)}
    for nu in basis[1:]:
        for level in range(1, n + 1):
            diff = target.h(level) - h[nu].h(level)
            if not diff.is_zero():
                break
        else:
            raise DegenerateEigenvalueError(f"h_k({nu}) = h_k({top}) for every k")
        if level == 1:
            cols = columns
        else:
            cols = {rho: H_on_monomial(n, level, rho) for rho in kappa}
        rhs = RatFunc()
        for rho, kr in kappa.items():
            v = cols[rho].get(nu)
            if v is not None:
                rhs = rhs + kr * RatFunc(v)
        kappa[nu] = rhs / diff
    P = SymmetricPoly(n, {nu.shift(a): c for nu, c in kappa.items()})
    if check and n >= 2:
        ev = eigenvalues(lam)
        if apply_H(MacdonaldOperator(n, 2), P) != P.scale(ev.h(2)):
            raise CancellationError(f"P_{lam} is not an eigenfunction of H_2")
    return P


def eigen_residual(lam, k: int) -> SymmetricPoly:
    """H_k P_lambda - h_{k;lambda} P_lambda (the zero polynomial when correct)."""
    lam = as_weight(lam)
    P = macdonald_P(lam)
    return apply_H(MacdonaldOperator(lam.n, k), P) - P.scale(eigenvalues(lam).h(k))


def verify_commutators(i: int, j: int, f: SymmetricPoly) -> bool:
    Hi, Hj = MacdonaldOperator(f.n, i), MacdonaldOperator(f.n, j)
    return apply_H(Hi, apply_H(Hj, f)) == apply_H(Hj, apply_H(Hi, f))
