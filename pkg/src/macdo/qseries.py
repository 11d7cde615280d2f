"""q-Pochhammer symbols, basic hypergeometric series and q-Gamma/q-Beta.

Exact routines work over :class:`~macdo.exact.RatFunc`; numeric ones over
complex doubles (scalars or numpy arrays).  Series follow the Gasper-Rahman
convention

    r_phi_s(a; b; q, z) = sum_k (a;q)_k / ((q;q)_k (b;q)_k)
                          * ((-1)^k q^(k(k-1)/2))^(1+s-r) z^k.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from .exact import LaurentPoly, PoleError, RatFunc, _coerce_rf

# factors 1 - a q^i with |a q^i| below this are 1 to double precision
NEGLIGIBLE = 1e-18
DEFAULT_TRUNC = 300


class NonTerminatingError(ValueError):
    pass


class TruncationError(RuntimeError):
    """A truncated infinite product/series cannot meet its tolerance."""


# ----------------------------------------------------------------------
# exact


def _q_power(k: int) -> LaurentPoly:
    return LaurentPoly.var("q", k) if k else LaurentPoly.constant(1)


def poch_exact(a, k: int) -> RatFunc:
    """(a;q)_k for any integer k; (a;q)_{-k} = 1/(a q^{-k};q)_k."""
    a = _coerce_rf(a)
    if a.is_polynomial():
        base = a.num * Fraction(a.den.constant_value()) ** -1
        acc = LaurentPoly.constant(1)
        if k >= 0:
            for i in range(k):
                f = 1 - base * _q_power(i)
                acc = acc * f
            return RatFunc(acc)
        for i in range(1, -k + 1):
            f = 1 - base * _q_power(-i)
            if f.is_zero():
                raise PoleError(f"(a;q)_{k} has a vanishing factor at i={i}")
            acc = acc * f
        return RatFunc(1, acc)
    acc = RatFunc(1)
    if k >= 0:
        for i in range(k):
            acc = acc * (1 - a * RatFunc(_q_power(i)))
        return acc
    for i in range(1, -k + 1):
        f = 1 - a * RatFunc(_q_power(-i))
        if f.is_zero():
            raise PoleError(f"(a;q)_{k} has a vanishing factor at i={i}")
        acc = acc * f
    return acc.inverse()


def poch_exact_multi(params: Sequence, k: int) -> RatFunc:
    out = RatFunc(1)
    for a in params:
        out = out * poch_exact(a, k)
    return out


def termination_index(param) -> int | None:
    """m if param is exactly q^(-m) (m >= 0), else None."""
    p = _coerce_rf(param)
    if not p.is_monomial():
        return None
    if p.num.gens not in ((), ("q",)):
        return None
    (e, c), = p.num.terms.items()
    if c * 1 != p.den.constant_value():
        return None
    k = e[0] if e else 0
    return -k if k <= 0 else None


@dataclass
class SeriesSpec:
    upper: List = field(default_factory=list)
    lower: List = field(default_factory=list)
    argument: object = 1

    def __post_init__(self):
        self.upper = [_coerce_rf(a) for a in self.upper]
        self.lower = [_coerce_rf(b) for b in self.lower]
        self.argument = _coerce_rf(self.argument)

    def terminating_order(self) -> int | None:
        orders = [m for m in (termination_index(a) for a in self.upper) if m is not None]
        return min(orders) if orders else None


def phi_terminating(spec: SeriesSpec) -> RatFunc:
    """Exact value of a terminating r_phi_s (some upper parameter is q^(-m))."""
    m = spec.terminating_order()
    if m is None:
        raise NonTerminatingError("no upper parameter of the form q^(-m)")
    r, s = len(spec.upper), len(spec.lower)
    sign_power = 1 + s - r
    qv = RatFunc.var("q")
    total = RatFunc(1)
    term = RatFunc(1)
    for k in range(m):
        qk = RatFunc(_q_power(k))
        num = RatFunc(1)
        for a in spec.upper:
            num = num * (1 - a * qk)
        den = (1 - qv * qk)
        for b in spec.lower:
            f = 1 - b * qk
            if f.is_zero():
                raise PoleError(f"lower parameter {b} gives a vanishing factor at k={k}")
            den = den * f
        step = num / den * spec.argument
        if sign_power:
            step = step * ((-1) ** sign_power) * RatFunc(_q_power(k * sign_power))
        term = term * step
        total = total + term
    return total


def gauss_binomial(g: int, k: int) -> RatFunc:
    """[g choose k]_q as a polynomial in q."""
    if not 0 <= k <= g:
        raise ValueError(f"q-binomial out of range: g={g}, k={k}")
    qv = RatFunc.var("q")
    return poch_exact(qv, g) / (poch_exact(qv, k) * poch_exact(qv, g - k))


# ----------------------------------------------------------------------
# numeric


def _tail_bound(amax: float, qabs: float, trunc: int) -> float:
    return amax * qabs ** trunc / (1 - qabs)


def poch_inf_numeric(a, q, trunc: int = DEFAULT_TRUNC, tol: float = 1e-14, skip: int | None = None):
    """(a;q)_inf truncated to ``trunc`` factors, vectorised over ``a``.

    Raises TruncationError if the bound |a||q|^trunc/(1-|q|) on the log of
    the neglected tail exceeds ``tol``.  ``skip`` omits one factor (used for
    residues at simple poles).
    """
    qabs = abs(q)
    if qabs >= 1:
        raise ValueError("need |q| < 1")
    arr = np.asarray(a, dtype=complex)
    amax = float(np.max(np.abs(arr))) if arr.size else 0.0
    if _tail_bound(amax, qabs, trunc) > tol:
        raise TruncationError(f"tail bound {_tail_bound(amax, qabs, trunc):.3g} > tol {tol:.3g} at trunc={trunc}")
    out = np.ones_like(arr)
    qi = 1.0 + 0j
    for i in range(trunc):
        if amax * abs(qi) < NEGLIGIBLE and (skip is None or i > skip):
            break
        if i != skip:
            out *= 1 - arr * qi
        qi *= q
    return out if out.ndim else complex(out)


def poch_numeric(a, q, k: int):
    """Finite (a;q)_k for integer k (negative allowed)."""
    arr = np.asarray(a, dtype=complex)
    out = np.ones_like(arr)
    if k >= 0:
        for i in range(k):
            out *= 1 - arr * q ** i
    else:
        for i in range(1, -k + 1):
            out *= 1 - arr * q ** (-i)
        out = 1 / out
    return out if out.ndim else complex(out)


def poch_general_numeric(a, q, alpha: float, trunc: int = DEFAULT_TRUNC, tol: float = 1e-14):
    """(a;q)_alpha = (a;q)_inf / (a q^alpha;q)_inf for real alpha."""
    a = np.asarray(a, dtype=complex)
    return poch_inf_numeric(a, q, trunc, tol) / poch_inf_numeric(a * q ** alpha, q, trunc, tol)


def phi_series_numeric(upper: Sequence[complex], lower: Sequence[complex], q, z,
                       trunc: int = 2000, tol: float = 1e-15) -> complex:
    """Truncated r_phi_s; stops once the geometric tail estimate is below tol."""
    r, s = len(upper), len(lower)
    sign_power = 1 + s - r
    total = 1 + 0j
    term = 1 + 0j
    for k in range(trunc):
        qk = q ** k
        num = 1 + 0j
        for a in upper:
            num *= 1 - a * qk
        den = 1 - q * qk
        for b in lower:
            den *= 1 - b * qk
        if den == 0:
            raise PoleError(f"lower parameter pole at k={k}")
        ratio = num / den * z
        if sign_power:
            ratio *= ((-1) ** sign_power) * qk ** sign_power
        term = term * ratio
        total += term
        if term == 0:
            return total
        # ratio of consecutive terms tends to z (or 0); use it as a geometric tail estimate
        nxt = abs(ratio)
        if nxt < 1 and abs(term) * nxt / (1 - nxt) <= tol * max(1.0, abs(total)) and k > 2:
            return total
    raise TruncationError(f"series did not converge within {trunc} terms")


def q_binomial_numeric(a, q, y, trunc: int = DEFAULT_TRUNC) -> complex:
    """1_phi_0(a;-;q,y) via the q-binomial theorem: (ay;q)_inf/(y;q)_inf."""
    return poch_inf_numeric(a * y, q, trunc) / poch_inf_numeric(y, q, trunc)


def order_reduce_numeric(a: Sequence[complex], b: Sequence[complex], m: int, q, y,
                         trunc: int = 2000, tol: float = 1e-10, return_both: bool = False):
    """Order reduction of p_phi_{p-1}(a_1..a_{p-1}, b_{p-1} q^m; b_1..b_{p-1}; q, y).

    ``a`` holds a_1..a_{p-1}; ``b`` holds b_1..b_{p-1}.  The right-hand side is
    the finite sum over k=0..m of lower-order (p-1)_phi_(p-2) series.  Both
    sides are evaluated and compared; the reduced form is returned.
    """
    if abs(y) >= 1 or abs(q) >= 1:
        raise ValueError("need |y| < 1 and |q| < 1")
    if m < 0:
        raise ValueError("m must be a nonnegative integer")
    a = list(a)
    b = list(b)
    if len(a) != len(b) or not a:
        raise ValueError("need p-1 >= 1 upper and lower parameters")
    lhs = phi_series_numeric(a + [b[-1] * q ** m], b, q, y, trunc=trunc)
    rhs = 0j
    coeff = 1 + 0j
    for k in range(m + 1):
        if k:
            i = k - 1
            num = (1 - q ** (-m) * q ** i)
            for aj in a:
                num *= 1 - aj * q ** i
            den = (1 - q ** (i + 1))
            for bj in b:
                den *= 1 - bj * q ** i
            coeff *= num / den
        pref = coeff * (-y * q ** m) ** k * q ** (-(k * (k - 1) // 2))
        upper_k = [aj * q ** k for aj in a]
        lower_k = [bj * q ** k for bj in b[:-1]]
        arg = y * q ** (m - k)
        if lower_k:
            inner = phi_series_numeric(upper_k, lower_k, q, arg, trunc=trunc)
        else:
            inner = q_binomial_numeric(upper_k[0], q, arg)
        rhs += pref * inner
    diff = abs(lhs - rhs)
    if diff > tol * max(1.0, abs(lhs)):
        raise TruncationError(f"order reduction mismatch {diff:.3g} exceeds tol {tol:.3g}")
    return (lhs, rhs) if return_both else rhs


def q_gamma(x: float, q: float, trunc: int = DEFAULT_TRUNC) -> float:
    """Gamma_q(x) = (1-q)^(1-x) (q;q)_inf / (q^x;q)_inf, 0 < q < 1."""
    if not 0 < q < 1:
        raise ValueError("need 0 < q < 1")
    if x <= 0 and float(x).is_integer():
        raise PoleError(f"q-Gamma pole at x={x}")
    val = (1 - q) ** (1 - x) * poch_inf_numeric(q, q, trunc) / poch_inf_numeric(q ** x, q, trunc)
    return float(np.real(val))


def q_beta(a: float, b: float, q: float, trunc: int = DEFAULT_TRUNC) -> float:
    return q_gamma(a, q, trunc) * q_gamma(b, q, trunc) / q_gamma(a + b, q, trunc)


def q_beta_product(a: float, b: float, q: float, trunc: int = DEFAULT_TRUNC) -> float:
    """B_q(a,b) as a single product ratio (1-q)(q, q^(a+b);q)_inf/(q^a, q^b;q)_inf."""
    num = (1 - q) * poch_inf_numeric(q, q, trunc) * poch_inf_numeric(q ** (a + b), q, trunc)
    return float(np.real(num / (poch_inf_numeric(q ** a, q, trunc) * poch_inf_numeric(q ** b, q, trunc))))


def g_from(q: float, t: float) -> float:
    """The coupling g with t = q^g."""
    return math.log(t) / math.log(q)
