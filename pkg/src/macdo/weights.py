"""Dominant weights, the dominance order and the monomial basis.

Weights follow the weakly *increasing* convention
``0 <= lam_1 <= lam_2 <= ... <= lam_n`` throughout the package.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping

import numpy as np

from .exact import LaurentPoly, NotSymmetricError, RatFunc, _coerce_rf


class DominantWeight(tuple):
    """Weakly increasing tuple of nonnegative integers."""

    def __new__(cls, parts: Iterable[int]):
        parts = tuple(int(p) for p in parts)
        if not parts:
            raise ValueError("a weight needs at least one part")
        if parts[0] < 0 or any(a > b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"{parts} is not a dominant weight (weakly increasing, >= 0)")
        return super().__new__(cls, parts)

    @classmethod
    def parse(cls, text: str) -> "DominantWeight":
        return cls(int(p) for p in text.replace(" ", "").split(","))

    @property
    def n(self) -> int:
        return len(self)

    @property
    def size(self) -> int:
        return sum(self)

    def diff(self, i: int, j: int) -> int:
        """lam_i - lam_j with 1-based indices."""
        return self[i - 1] - self[j - 1]

    def shift(self, k: int) -> "DominantWeight":
        return DominantWeight(p + k for p in self)

    def __str__(self):
        return ",".join(str(p) for p in self)

    def __repr__(self):
        return f"DominantWeight({str(self)!r})"


def as_weight(lam) -> DominantWeight:
    if isinstance(lam, DominantWeight):
        return lam
    if isinstance(lam, str):
        return DominantWeight.parse(lam)
    return DominantWeight(lam)


def tail_sums(lam) -> tuple:
    """(sum_{j>=n} lam_j, sum_{j>=n-1} lam_j, ..., sum_{j>=2} lam_j)."""
    out = []
    acc = 0
    for p in reversed(lam[1:]):
        acc += p
        out.append(acc)
    return tuple(out)


def dominance_leq(a, b) -> bool:
    a, b = as_weight(a), as_weight(b)
    if a.n != b.n:
        raise ValueError(f"weights of different length: {a} vs {b}")
    if a.size != b.size:
        return False
    return all(x <= y for x, y in zip(tail_sums(a), tail_sums(b)))


def _increasing_partitions(total: int, n: int, lo: int = 0):
    if n == 1:
        if total >= lo:
            yield (total,)
        return
    for first in range(lo, total // n + 1):
        for rest in _increasing_partitions(total - first, n - 1, first):
            yield (first,) + rest


def weights_of_size(size: int, n: int) -> List[DominantWeight]:
    return [DominantWeight(p) for p in _increasing_partitions(size, n)]


def dominance_sort_key(lam):
    # linear extension: mu strictly above nu implies a larger key
    return tail_sums(lam)


@lru_cache(maxsize=None)
def _weights_below(lam: DominantWeight):
    found = [mu for mu in weights_of_size(lam.size, lam.n) if dominance_leq(mu, lam)]
    found.sort(key=dominance_sort_key, reverse=True)
    return tuple(found)


def weights_below(lam) -> List[DominantWeight]:
    """All mu with mu <= lam in dominance order, highest first."""
    return list(_weights_below(as_weight(lam)))


def xvars(n: int) -> tuple:
    return tuple(f"x{i}" for i in range(1, n + 1))


@lru_cache(maxsize=None)
def _monomial_exponents(mu: DominantWeight):
    return tuple(sorted(set(itertools.permutations(mu))))


def monomial_exponents(mu) -> tuple:
    """Distinct permutations of mu, i.e. the exponent vectors of m_mu."""
    return _monomial_exponents(as_weight(mu))


def monomial_expand(mu) -> LaurentPoly:
    mu = as_weight(mu)
    return LaurentPoly(xvars(mu.n), {e: 1 for e in monomial_exponents(mu)})


class SymmetricPoly:
    """sum_mu coeffs[mu] * m_mu(x_1..x_n) with exact rational-function coefficients."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Mapping | None = None):
        self.n = n
        clean: Dict[DominantWeight, RatFunc] = {}
        for mu, c in (coeffs or {}).items():
            mu = as_weight(mu)
            if mu.n != n:
                raise ValueError(f"weight {mu} does not have {n} parts")
            c = _coerce_rf(c)
            if not c.is_zero():
                clean[mu] = c
        self.coeffs = clean

    @classmethod
    def monomial(cls, mu) -> "SymmetricPoly":
        mu = as_weight(mu)
        return cls(mu.n, {mu: 1})

    def support(self) -> List[DominantWeight]:
        return sorted(self.coeffs, key=lambda mu: (mu.size, dominance_sort_key(mu)), reverse=True)

    def __getitem__(self, mu) -> RatFunc:
        return self.coeffs.get(as_weight(mu), RatFunc())

    def is_zero(self) -> bool:
        return not self.coeffs

    def _combine(self, other, sign):
        if self.n != other.n:
            raise ValueError("variable counts differ")
        out = dict(self.coeffs)
        for mu, c in other.coeffs.items():
            out[mu] = out.get(mu, RatFunc()) + (c if sign > 0 else -c)
        return SymmetricPoly(self.n, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c) -> "SymmetricPoly":
        c = _coerce_rf(c)
        return SymmetricPoly(self.n, {mu: v * c for mu, v in self.coeffs.items()})

    def __mul__(self, c):
        if isinstance(c, SymmetricPoly):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SymmetricPoly):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    def map_coeffs(self, fn) -> "SymmetricPoly":
        return SymmetricPoly(self.n, {mu: fn(c) for mu, c in self.coeffs.items()})

    def expand(self) -> RatFunc:
        """The polynomial in x_1..x_n as a single rational function."""
        out = RatFunc()
        for mu, c in self.coeffs.items():
            out = out + c * RatFunc(monomial_expand(mu))
        return out

    def evaluate(self, xs, q, t):
        """Numeric value at points xs = (x_1, ..., x_n) (scalars or arrays)."""
        if len(xs) != self.n:
            raise ValueError(f"need {self.n} coordinates")
        xs = [np.asarray(x, dtype=complex) for x in xs]
        assignment = {"q": q, "t": t}
        total = 0
        for mu, c in self.coeffs.items():
            cv = complex(c.eval_complex(assignment))
            acc = 0
            for e in monomial_exponents(mu):
                term = 1
                for x, k in zip(xs, e):
                    if k:
                        term = term * x ** k
                acc = acc + term
            total = total + cv * acc
        return total

    def to_string(self, pretty: bool = True) -> str:
        parts = []
        for mu in self.support():
            c = self.coeffs[mu]
            label = f"m[{mu}]"
            if c == RatFunc(1):
                parts.append(label)
            else:
                cs = c.pretty() if pretty else c.to_string()
                parts.append(f"({cs})*{label}")
        return " + ".join(parts) if parts else "0"

    __str__ = to_string

    def __repr__(self):
        return f"SymmetricPoly(n={self.n}, {self.to_string()})"


def to_monomial_basis(p, n: int) -> SymmetricPoly:
    """Rewrite a symmetric polynomial in x_1..x_n in the m_mu basis.

    ``p`` may be a LaurentPoly or a RatFunc whose denominator is free of x.
    """
    r = _coerce_rf(p)
    names = xvars(n)
    extra = [g for g in r.gens if g.startswith("x") and g not in names]
    if extra:
        raise ValueError(f"unexpected variables {extra} for n={n}")
    if any(g in names for g in r.den.gens):
        raise ValueError("denominator depends on x; not a polynomial in x")
    groups = r.num.coeffs_in(names)
    for e in groups:
        if any(k < 0 for k in e):
            raise ValueError(f"negative exponent {e} in x")
    for i in range(n - 1):
        for e, c in groups.items():
            sw = list(e)
            sw[i], sw[i + 1] = sw[i + 1], sw[i]
            other = groups.get(tuple(sw))
            if other is None or other != c:
                raise NotSymmetricError(f"not symmetric under x{i + 1} <-> x{i + 2}")
    out = {}
    for e, c in groups.items():
        if list(e) == sorted(e):
            out[DominantWeight(e)] = RatFunc(c, r.den)
    return SymmetricPoly(n, out)
