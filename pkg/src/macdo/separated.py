"""Separated one-variable polynomials phi_lambda(y) and the product Phi_lambda.

phi_lambda(y) = sum_{k=lambda_1}^{lambda_n} chi_k y^k.  Exact constructions:

* ``phi_via_chi``: each chi_k as a prefactor times a terminating
  (n+1)phi(n) at argument q;
* ``phi_via_lauricella``: the finite multiple sum coming from the
  q-Lauricella phi_D representation;
* ``phi_via_definition``: the defining y^{lambda_1} (y;q)_{1-ng} nphi(n-1)
  expanded as a formal power series in y (exact, with a check that the
  series really stops at degree lambda_n).

Numeric evaluation of the defining product/series lives in
``phi_numeric_definition``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Dict, List, Sequence

import numpy as np

from .exact import LaurentPoly, RatFunc
from .macdonald import eigenvalues
from .qseries import (
    SeriesSpec,
    phi_series_numeric,
    phi_terminating,
    poch_exact,
    poch_inf_numeric,
)
from .weights import DominantWeight, as_weight


class ParityError(ArithmeticError):
    """A coefficient carries an odd power of tau (an index-convention bug)."""


def qt(qe: int = 0, te: int = 0) -> RatFunc:
    """The monomial q^qe t^te (te may be half-integral in steps of 1/2)."""
    tau_e = 2 * te
    if tau_e != int(tau_e):
        raise ValueError("t exponent must be a multiple of 1/2")
    return RatFunc(LaurentPoly.monomial({"q": qe, "tau": int(tau_e)}))


_Y = RatFunc.var("y")


def _check_parity(r: RatFunc, what: str) -> RatFunc:
    if not r.tau_parity_even():
        raise ParityError(f"{what} has an odd power of t^(1/2): {r}")
    return r


@dataclass(frozen=True)
class SeparationParams:
    lam: DominantWeight
    m: tuple  # m_j = lam_{j+1} - lam_j
    b: tuple  # b_1 .. b_{n-1}
    a: tuple  # a_1 .. a_n

    @property
    def n(self) -> int:
        return self.lam.n

    @classmethod
    def of(cls, lam) -> "SeparationParams":
        lam = as_weight(lam)
        n = lam.n
        if n < 2:
            raise ValueError("separated polynomials need n >= 2")
        m = tuple(lam[j] - lam[j - 1] for j in range(1, n))
        b = tuple(qt(lam[0] - lam[j] + 1, -j) for j in range(1, n))
        a = tuple(b[j] * qt(m[j]) for j in range(n - 1)) + (qt(lam[0] - lam[-1] + 1, -n),)
        return cls(lam, m, b, a)

    def numeric(self, q: float, t: float):
        """(a, b) evaluated at real q, t."""
        asg = {"q": q, "t": t}
        return ([complex(x.eval_complex(asg)) for x in self.a],
                [complex(x.eval_complex(asg)) for x in self.b])


class SeparatedPoly:
    """phi_lambda(y) = sum_k chi[k] y^k over the window [lambda_1, lambda_n]."""

    __slots__ = ("lam", "chi")

    def __init__(self, lam, chi: Dict[int, RatFunc]):
        self.lam = as_weight(lam)
        lo, hi = self.lam[0], self.lam[-1]
        clean = {}
        for k, c in chi.items():
            if c.is_zero():
                continue
            if not lo <= k <= hi:
                raise ValueError(f"y^{k} lies outside the degree window [{lo}, {hi}]")
            clean[k] = c
        self.chi = clean

    def coefficient(self, k: int) -> RatFunc:
        return self.chi.get(k, RatFunc())

    def as_ratfunc(self, var: str = "y") -> RatFunc:
        return RatFunc.from_coeffs(var, self.chi)

    def at(self, y) -> RatFunc:
        """Exact value at an exact argument, e.g. t^n or q^k y."""
        y = y if isinstance(y, RatFunc) else RatFunc(y)
        out = RatFunc()
        for k, c in self.chi.items():
            out = out + c * y ** k
        return out

    def evaluate(self, y, q: float, t: float):
        asg = {"q": q, "t": t}
        y = np.asarray(y, dtype=complex)
        out = np.zeros_like(y)
        for k, c in self.chi.items():
            out = out + complex(c.eval_complex(asg)) * y ** k
        return out if out.ndim else complex(out)

    def __eq__(self, other):
        if not isinstance(other, SeparatedPoly):
            return NotImplemented
        return self.lam == other.lam and self.chi == other.chi

    def __hash__(self):
        return hash((self.lam, frozenset(self.chi.items())))

    def to_string(self, pretty: bool = True) -> str:
        parts = []
        for k in sorted(self.chi):
            c = self.chi[k]
            cs = c.pretty() if pretty else c.to_string()
            if k == 0:
                parts.append(cs if c != RatFunc(1) else "1")
            else:
                mono = "y" if k == 1 else f"y^{k}"
                parts.append(mono if c == RatFunc(1) else f"({cs})*{mono}")
        return " + ".join(parts) if parts else "0"

    __str__ = to_string

    def __repr__(self):
        return f"SeparatedPoly({self.lam}, {self.to_string()})"


def _from_poly_in_y(lam, poly: RatFunc, what: str) -> SeparatedPoly:
    chi = {k: _check_parity(c, f"{what} chi_{k}") for k, c in poly.coeffs_in("y").items()}
    return SeparatedPoly(lam, chi)


def phi_via_chi(lam) -> SeparatedPoly:
    """Coefficients as prefactor times a terminating (n+1)phi(n) at argument q."""
    p = SeparationParams.of(lam)
    lam, n = p.lam, p.n
    base = qt(-1, n)  # q^-1 t^n
    chi = {}
    for k in range(lam[0], lam[-1] + 1):
        m = k - lam[0]
        pref = base ** (-m) * poch_exact(base, m) / poch_exact(qt(1), m)
        spec = SeriesSpec(upper=[qt(-m)] + list(p.a),
                          lower=[qt(-m + 2, -n)] + list(p.b),
                          argument=qt(1))
        chi[k] = _check_parity(pref * phi_terminating(spec), f"chi_{k}")
    if chi[lam[0]] != RatFunc(1):
        raise ArithmeticError(f"chi at the bottom of the window is {chi[lam[0]]}, not 1")
    return SeparatedPoly(lam, chi)


def phi_via_lauricella(lam) -> SeparatedPoly:
    """The explicit finite multiple sum (one index per gap lambda_{j+1} - lambda_j)."""
    lam = as_weight(lam)
    n = lam.n
    if n < 2:
        raise ValueError("separated polynomials need n >= 2")
    L = lambda i: lam[i - 1]  # 1-based access
    span = L(n) - L(1)
    norm = RatFunc(1)
    for j in range(1, n):
        norm = norm * poch_exact(qt(L(1) - L(n - j + 1) + 1, j - n), L(n - j + 1) - L(n - j))
    ranges = [range(L(n - j + 1) - L(n - j) + 1) for j in range(1, n)]
    total = RatFunc()
    for ks in iproduct(*ranges):
        K = sum(ks)
        term = poch_exact(qt(1 + L(1) - L(n) + K, -n) * _Y, span - K) * poch_exact(_Y, K)
        for j, kj in enumerate(ks, start=1):
            if kj == 0:
                continue
            term = term * poch_exact(qt(L(n - j) - L(n - j + 1)), kj) \
                * qt(1 + L(1) - L(n - j), j - n) ** kj / poch_exact(qt(1), kj)
        total = total + term
    poly = total * _Y ** L(1) / norm
    return _from_poly_in_y(lam, poly, "Lauricella")


def _series_coefficients(upper: Sequence[RatFunc], lower: Sequence[RatFunc], order: int) -> List[RatFunc]:
    """Coefficients of y^0..y^order in r_phi_{r-1}(upper; lower; q, y) (balanced case)."""
    out = [RatFunc(1)]
    term = RatFunc(1)
    for k in range(order):
        qk = qt(k)
        num = RatFunc(1)
        for a in upper:
            num = num * (1 - a * qk)
        den = 1 - qt(1) * qk
        for b in lower:
            den = den * (1 - b * qk)
        term = term * num / den
        out.append(term)
    return out


def phi_via_definition(lam, upper=None, lower=None, extra: int = 2) -> SeparatedPoly:
    """Expand y^{lam_1} (y;q)_{1-ng} nphi(n-1)[upper; lower; q, y] as a power series.

    (y;q)_{1-ng} = (y;q)_inf/(q t^-n y;q)_inf = sum_i (t^n/q;q)_i/(q;q)_i (q t^-n y)^i
    by the q-binomial theorem.  The product is computed ``extra`` orders
    past the expected degree and the surplus coefficients must vanish.
    By default the parameters are b_j q^{m_j}, a_n over b_j.
    """
    p = SeparationParams.of(lam)
    lam, n = p.lam, p.n
    if upper is None:
        upper = list(p.a)
    if lower is None:
        lower = list(p.b)
    span = lam[-1] - lam[0]
    order = span + extra
    series = _series_coefficients(upper, lower, order)
    pref = [poch_exact(qt(-1, n), i) / poch_exact(qt(1), i) * qt(i, -n * i) for i in range(order + 1)]
    chi = {}
    for j in range(order + 1):
        c = RatFunc()
        for i in range(j + 1):
            c = c + pref[i] * series[j - i]
        if j > span:
            if not c.is_zero():
                raise ArithmeticError(f"power series does not stop: y^{lam[0] + j} coefficient {c}")
            continue
        chi[lam[0] + j] = _check_parity(c, f"definition chi_{lam[0] + j}")
    return SeparatedPoly(lam, chi)


def theorem3_parameters(lam):
    """Upper/lower parameters of the explicit 3phi2 form used for the n=3 factorisation."""
    lam = as_weight(lam)
    if lam.n != 3:
        raise ValueError("the n=3 parameter list needs a 3-part weight")
    l31, l21 = lam.diff(3, 1), lam.diff(2, 1)
    upper = [qt(1 - l31, -3), qt(1 - l21, -2), qt(1, -1)]
    lower = [qt(1 - l31, -2), qt(1 - l21, -1)]
    return upper, lower


def phi_consistency(lam) -> bool:
    """The explicit n=3 3phi2 parameters give the same polynomial as phi_via_chi."""
    upper, lower = theorem3_parameters(lam)
    return phi_via_definition(lam, upper, lower) == phi_via_chi(lam)


def chi_closed_forms(lam):
    """(chi_{lambda_1}, chi_{lambda_n}) from the closed product formula."""
    lam = as_weight(lam)
    n = lam.n
    L = lambda i: lam[i - 1]
    top = qt(0, n * L(1) - lam.size)
    for j in range(1, n):
        tj = qt(0, j)
        top = top * poch_exact(tj, L(j) - L(1)) * poch_exact(tj, L(n) - L(n - j)) \
            / (poch_exact(tj, L(j + 1) - L(1)) * poch_exact(tj, L(n) - L(n - j + 1)))
    return RatFunc(1), top


def phi_at_tn(lam) -> RatFunc:
    """phi_lambda(t^n) by the closed product."""
    lam = as_weight(lam)
    n = lam.n
    L = lambda i: lam[i - 1]
    out = qt(0, n * L(1)) * poch_exact(qt(0, n), L(n) - L(1))
    for j in range(1, n):
        tj = qt(0, j)
        out = out * poch_exact(tj, L(j) - L(1)) / poch_exact(tj, L(j + 1) - L(1))
    return out


def phi_numeric_definition(lam, y: complex, q: float, t: float, trunc: int = 2000,
                           tol: float = 1e-15) -> complex:
    """y^{lam_1} (y;q)_inf/(q t^-n y;q)_inf * nphi(n-1)[a; b; q, y] numerically."""
    p = SeparationParams.of(lam)
    if not abs(y) < 1:
        raise ValueError("need |y| < 1 for the defining series")
    a, b = p.numeric(q, t)
    upper = [b[j] * q ** p.m[j] for j in range(p.n - 1)] + [a[-1]]
    pref = poch_inf_numeric(y, q) / poch_inf_numeric(q * t ** (-p.n) * y, q)
    return y ** p.lam[0] * pref * phi_series_numeric(upper, b, q, y, trunc=trunc, tol=tol)


def separation_residual(lam, phi: SeparatedPoly | None = None) -> RatFunc:
    """Left side of the separation q-difference equation; zero when phi is right."""
    lam = as_weight(lam)
    n = lam.n
    if phi is None:
        phi = phi_via_chi(lam)
    h = eigenvalues(lam)
    out = RatFunc()
    for k in range(n + 1):
        coef = qt(0, -(n - 1) * k / 2) * (1 - qt(k, -k) * _Y) * poch_exact(_Y, k) \
            * poch_exact(qt(k + 1, -n) * _Y, n - k) * h.h(n - k)
        if k % 2:
            coef = -coef
        out = out + coef * phi.at(qt(k) * _Y)
    return out


class ProductEigenfunction:
    """Phi_lambda(y_1..y_n) = y_n^{|lambda|} prod_{k<n} phi_lambda(y_k)."""

    def __init__(self, lam, phi: SeparatedPoly | None = None):
        self.lam = as_weight(lam)
        self.phi = phi if phi is not None else phi_via_chi(self.lam)
        self.n = self.lam.n

    def names(self):
        return tuple(f"y{k}" for k in range(1, self.n + 1))

    def expand(self, shifts: Dict[int, int] | None = None) -> RatFunc:
        """Exact Phi with y_j replaced by q^{shifts[j]} y_j."""
        shifts = shifts or {}
        names = self.names()
        out = (qt(shifts.get(self.n, 0)) * RatFunc.var(names[-1])) ** self.lam.size
        for k in range(1, self.n):
            out = out * self.phi.at(qt(shifts.get(k, 0)) * RatFunc.var(names[k - 1]))
        return out

    def evaluate(self, ys, q: float, t: float):
        ys = list(ys)
        out = ys[-1] ** self.lam.size
        for y in ys[:-1]:
            out = out * self.phi.evaluate(y, q, t)
        return out


def spectral_problem_check(lam) -> bool:
    """Phi_lambda(.., q y_n) = h_n Phi_lambda and the separation equation in each y_j."""
    lam = as_weight(lam)
    n = lam.n
    Phi = ProductEigenfunction(lam)
    h = eigenvalues(lam)
    base = Phi.expand()
    if Phi.expand({n: 1}) != base * h.h(n):
        return False
    for j in range(1, n):
        yj = RatFunc.var(f"y{j}")
        total = RatFunc()
        for k in range(n + 1):
            coef = qt(0, -(n - 1) * k / 2) * (1 - qt(k, -k) * yj) * poch_exact(yj, k) \
                * poch_exact(qt(k + 1, -n) * yj, n - k) * h.h(n - k)
            if k % 2:
                coef = -coef
            total = total + coef * Phi.expand({j: k})
        if not total.is_zero():
            return False
    return True
