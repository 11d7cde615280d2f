"""Exact arithmetic over Q(q, tau) extended by Laurent variables.

``t`` is never a generator: it is always stored as ``tau**2`` so that the
half-integer powers of ``t`` appearing in the Macdonald operators stay
integral.  Three types live here:

* exact scalars are plain ``int`` / :class:`fractions.Fraction` values;
* :class:`LaurentPoly` is a sparse map from integer exponent vectors to
  scalars over an ordered tuple of generator names;
* :class:`RatFunc` is a quotient of two Laurent polynomials kept in a
  canonical form (coprime numerator/denominator, denominator free of
  monomial factors, primitive, with positive leading coefficient).

The numeric bridge is one-way: :meth:`RatFunc.eval_complex`.
"""

from __future__ import annotations

import math
import numbers
import re
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple

import numpy as np

Exps = Tuple[int, ...]

TAU = "tau"


class PoleError(ZeroDivisionError):
    """A denominator vanishes (identically, or at a numeric assignment)."""


class NotSymmetricError(ValueError):
    pass


_NAME_RE = re.compile(r"([A-Za-z_]+?)(\d*)")


@lru_cache(maxsize=None)
def gen_key(name: str):
    """Global generator order: q < tau < everything else (prefix, index)."""
    if name == "q":
        return (0, "", 0)
    if name == TAU:
        return (1, "", 0)
    m = _NAME_RE.fullmatch(name)
    if m is None:
        raise ValueError(f"bad generator name {name!r}")
    return (2, m.group(1), int(m.group(2)) if m.group(2) else -1)


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _check_scalar(c):
    if isinstance(c, bool) or not isinstance(c, numbers.Rational):
        raise TypeError(f"exact scalar expected, got {type(c).__name__}")
    return _norm(Fraction(c)) if not isinstance(c, int) else c


def _merge_gens(a: Tuple[str, ...], b: Tuple[str, ...]) -> Tuple[str, ...]:
    if a == b:
        return a
    return tuple(sorted(set(a) | set(b), key=gen_key))


def _remap(terms: Dict[Exps, object], old, new) -> Dict[Exps, object]:
    if old == new:
        return terms
    pos = [new.index(g) for g in old]
    size = len(new)
    out = {}
    for e, c in terms.items():
        v = [0] * size
        for i, p in enumerate(pos):
            v[p] = e[i]
        out[tuple(v)] = c
    return out


def _tau_str(k: int) -> str:
    if k % 2 == 0:
        m = k // 2
        return "t" if m == 1 else f"t^{m}"
    return f"t^({k}/2)"


def _monomial_str(gens, e) -> str:
    parts = []
    for g, k in zip(gens, e):
        if k == 0:
            continue
        if g == TAU:
            parts.append(_tau_str(k))
        else:
            parts.append(g if k == 1 else f"{g}^{k}")
    return "*".join(parts)


def _coeff_str(c) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class LaurentPoly:
    """Sparse Laurent polynomial with exact rational coefficients.

    Generators not actually used by any term are pruned, so two equal
    polynomials always have identical ``gens`` and ``terms``.
    """

    __slots__ = ("gens", "terms", "_hash")

    def __init__(self, gens: Iterable[str] = (), terms: Mapping[Exps, object] | None = None):
        gens = tuple(gens)
        if list(gens) != sorted(gens, key=gen_key) or len(set(gens)) != len(gens):
            raise ValueError(f"generators {gens} not in canonical order")
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != len(gens):
                raise ValueError("exponent vector length does not match generators")
            c = _check_scalar(c)
            if c != 0:
                clean[e] = c
        self._set(gens, clean)

    def _set(self, gens, terms):
        used = [i for i in range(len(gens)) if any(e[i] for e in terms)]
        if len(used) != len(gens):
            gens = tuple(gens[i] for i in used)
            terms = {tuple(e[i] for i in used): c for e, c in terms.items()}
        self.gens = gens
        self.terms = terms
        self._hash = None

    @classmethod
    def _raw(cls, gens, terms) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._set(gens, {e: c for e, c in terms.items() if c != 0})
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        c = _check_scalar(c)
        return cls._raw((), {(): c} if c else {})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "LaurentPoly":
        gen_key(name)
        return cls._raw((name,), {(power,): 1})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff=1) -> "LaurentPoly":
        gens = tuple(sorted(exps, key=gen_key))
        return cls._raw(gens, {tuple(exps[g] for g in gens): _check_scalar(coeff)})

    @staticmethod
    def coerce(x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, numbers.Rational) and not isinstance(x, bool):
            return LaurentPoly.constant(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    # predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.gens

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self):
        if not self.gens:
            return self.terms.get((), 0)
        raise ValueError("not a constant")

    def exponents_of(self, name: str):
        if name not in self.gens:
            return [0]
        i = self.gens.index(name)
        return [e[i] for e in self.terms]

    # arithmetic -------------------------------------------------------
    def _binary_terms(self, other):
        gens = _merge_gens(self.gens, other.gens)
        return gens, _remap(self.terms, self.gens, gens), _remap(other.terms, other.gens, gens)

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, numbers.Rational):
                other = LaurentPoly.constant(other)
            else:
                return NotImplemented
        gens, a, b = self._binary_terms(other)
        out = dict(a)
        for e, c in b.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return LaurentPoly._raw(gens, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.gens, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, numbers.Rational):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, numbers.Rational) and not isinstance(other, bool):
            if other == 0:
                return LaurentPoly.constant(0)
            return LaurentPoly._raw(self.gens, {e: _norm(c * other) for e, c in self.terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        gens, a, b = self._binary_terms(other)
        out: Dict[Exps, object] = {}
        if len(a) > len(b):
            a, b = b, a
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                out[e] = v
        return LaurentPoly._raw(gens, {e: _norm(c) for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial Laurent polynomial")
            (e, c), = self.terms.items()
            return LaurentPoly._raw(self.gens, {tuple(x * k for x in e): _norm(Fraction(c) ** k)})
        result = LaurentPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def divide_monomial(self, mono: "LaurentPoly") -> "LaurentPoly":
        if not mono.is_monomial():
            raise ValueError("divisor is not a monomial")
        return self * mono ** -1

    def __eq__(self, other):
        if isinstance(other, numbers.Rational) and not isinstance(other, bool):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.gens == other.gens and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.gens, frozenset(self.terms.items())))
        return self._hash

    # structure --------------------------------------------------------
    def min_exponents(self) -> Exps:
        return tuple(min(col) for col in zip(*self.terms)) if self.terms else ()

    def max_exponents(self) -> Exps:
        return tuple(max(col) for col in zip(*self.terms)) if self.terms else ()

    def _order_key(self, e):
        # graded lex with q < tau < ...: later generators are more significant
        return (sum(e), e[::-1])

    def sorted_terms(self, reverse=False):
        return sorted(self.terms.items(), key=lambda kv: self._order_key(kv[0]), reverse=reverse)

    def leading_term(self):
        return max(self.terms.items(), key=lambda kv: self._order_key(kv[0]))

    def content(self) -> Fraction:
        """Positive rational c with self/c having coprime integer coefficients."""
        nums = 0
        dens = 1
        for c in self.terms.values():
            c = Fraction(c)
            nums = math.gcd(nums, c.numerator)
            dens = dens * c.denominator // math.gcd(dens, c.denominator)
        return Fraction(nums, dens) if nums else Fraction(1)

    def coeffs_in(self, names: Iterable[str]) -> Dict[Exps, "LaurentPoly"]:
        """Split into ``{exponents of names: coefficient in the other generators}``."""
        names = tuple(names)
        idx = [self.gens.index(g) if g in self.gens else None for g in names]
        rest = tuple(i for i, g in enumerate(self.gens) if g not in names)
        rest_gens = tuple(self.gens[i] for i in rest)
        groups: Dict[Exps, Dict[Exps, object]] = {}
        for e, c in self.terms.items():
            key = tuple(e[i] if i is not None else 0 for i in idx)
            groups.setdefault(key, {})[tuple(e[i] for i in rest)] = c
        return {k: LaurentPoly._raw(rest_gens, v) for k, v in groups.items()}

    def subs(self, mapping: Mapping[str, object]) -> "LaurentPoly":
        """Substitute generators by Laurent polynomials (monomials for negative powers)."""
        mapping = {k: LaurentPoly.coerce(v) for k, v in mapping.items() if k in self.gens}
        if not mapping:
            return self
        if all(v.is_monomial() or v.is_zero() for v in mapping.values()):
            return self._subs_monomial(mapping)
        keep = tuple(g for g in self.gens if g not in mapping)
        out = LaurentPoly.constant(0)
        cache = {}
        for e, c in self.terms.items():
            term = LaurentPoly._raw(keep, {tuple(k for g, k in zip(self.gens, e) if g not in mapping): c})
            for g, k in zip(self.gens, e):
                if g in mapping and k:
                    key = (g, k)
                    if key not in cache:
                        cache[key] = mapping[g] ** k
                    term = term * cache[key]
            out = out + term
        return out

    def _subs_monomial(self, mapping):
        keep = [g for g in self.gens if g not in mapping]
        extra = set()
        for v in mapping.values():
            extra.update(v.gens)
        gens = tuple(sorted(set(keep) | extra, key=gen_key))
        pos_keep = {g: gens.index(g) for g in keep}
        images = {}
        for g, v in mapping.items():
            if v.is_zero():
                images[g] = None
            else:
                (ev, cv), = v.terms.items()
                vec = [0] * len(gens)
                for name, k in zip(v.gens, ev):
                    vec[gens.index(name)] = k
                images[g] = (vec, cv)
        out: Dict[Exps, object] = {}
        for e, c in self.terms.items():
            vec = [0] * len(gens)
            coeff = Fraction(c)
            dead = False
            for g, k in zip(self.gens, e):
                if g in images:
                    if k == 0:
                        continue
                    img = images[g]
                    if img is None:
                        if k < 0:
                            raise PoleError(f"substituting {g}=0 into negative power")
                        dead = True
                        break
                    iv, ic = img
                    coeff *= Fraction(ic) ** k
                    for j, kk in enumerate(iv):
                        vec[j] += kk * k
                else:
                    vec[pos_keep[g]] += k
            if dead:
                continue
            key = tuple(vec)
            out[key] = out.get(key, 0) + coeff
        return LaurentPoly._raw(gens, {e: _norm(c) for e, c in out.items() if c})

    def map_exponents(self, fn) -> "LaurentPoly":
        """Apply ``fn(gens, exps) -> (gens2, exps2)`` termwise (must be injective)."""
        out = {}
        new_gens = None
        for e, c in self.terms.items():
            g2, e2 = fn(self.gens, e)
            if new_gens is None:
                new_gens = g2
            out[e2] = out.get(e2, 0) + c
        return LaurentPoly._raw(new_gens if new_gens is not None else (), {e: _norm(c) for e, c in out.items() if c})

    # numeric bridge ---------------------------------------------------
    def eval_complex(self, assignment: Mapping[str, object]):
        values = _resolve_assignment(self.gens, assignment)
        total = 0
        powers = {}
        for e, c in self.terms.items():
            term = complex(c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = values[i] ** k
                    term = term * powers[key]
            total = total + term
        return total

    # printing ---------------------------------------------------------
    def to_string(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for i, (e, c) in enumerate(self.sorted_terms()):
            mono = _monomial_str(self.gens, e)
            c = Fraction(c)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono:
                body = mono if a == 1 else f"{_coeff_str(a)}*{mono}"
            else:
                body = _coeff_str(a)
            if i == 0:
                out.append(("-" if sign == "-" else "") + body)
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    __str__ = to_string

    def __repr__(self):
        return f"LaurentPoly({self.to_string()!r})"


def _resolve_assignment(gens, assignment):
    vals = []
    for g in gens:
        if g in assignment:
            vals.append(assignment[g])
        elif g == TAU and "t" in assignment:
            t = assignment["t"]
            vals.append(np.sqrt(t) if np.iscomplexobj(t) or np.any(np.real(t) < 0) else np.sqrt(np.asarray(t, dtype=float)))
        else:
            raise ValueError(f"assignment does not cover generator {g!r}")
    return vals


# ----------------------------------------------------------------------
# gcd backend: sympy's sparse polynomial rings over ZZ


@lru_cache(maxsize=None)
def _zz_ring(gens: Tuple[str, ...]):
    from sympy import ZZ
    from sympy.polys.rings import ring

    return ring(",".join(gens), ZZ)[0]


def _cancel_integer_polys(gens, num: Dict[Exps, int], den: Dict[Exps, int]):
    R = _zz_ring(gens)
    p, q = R.from_dict(num).cancel(R.from_dict(den))
    return ({tuple(e): int(c) for e, c in p.items()}, {tuple(e): int(c) for e, c in q.items()})


def _canonicalise(num: LaurentPoly, den: LaurentPoly):
    if den.is_zero():
        raise PoleError("division by zero rational function")
    if num.is_zero():
        return LaurentPoly.constant(0), LaurentPoly.constant(1)
    if den.is_monomial():
        return num * den ** -1, LaurentPoly.constant(1)
    gens, a, b = num._binary_terms(den)
    dmin = tuple(min(col) for col in zip(*b))
    nmin = tuple(min(col) for col in zip(*a))
    shift = tuple(-min(x - y, 0) for x, y in zip(nmin, dmin))
    # num * x^-dmin + shift is polynomial; den * x^-dmin is polynomial without monomial factor
    a = {tuple(x - y + s for x, y, s in zip(e, dmin, shift)): c for e, c in a.items()}
    b = {tuple(x - y for x, y in zip(e, dmin)): c for e, c in b.items()}
    scale = 1
    for c in list(a.values()) + list(b.values()):
        if isinstance(c, Fraction):
            scale = scale * c.denominator // math.gcd(scale, c.denominator)
    if scale != 1:
        a = {e: _norm(c * scale) for e, c in a.items()}
        b = {e: _norm(c * scale) for e, c in b.items()}
    if len(a) > 1:
        a, b = _cancel_integer_polys(gens, a, b)
    else:
        # monomial numerator: only the integer content can be shared
        (ea, ca), = a.items()
        g = 0
        for c in b.values():
            g = math.gcd(g, c)
        g = math.gcd(g, ca)
        if g > 1:
            a = {ea: ca // g}
            b = {e: c // g for e, c in b.items()}
    n = LaurentPoly._raw(gens, a)
    d = LaurentPoly._raw(gens, b)
    # the cancellation may leave a monomial factor in d only if a had one; strip it
    dmin2 = d.min_exponents()
    if any(dmin2):
        mono = LaurentPoly._raw(d.gens, {dmin2: 1})
        d = d * mono ** -1
        n = n * mono ** -1
    if shift and any(shift):
        n = n * LaurentPoly._raw(gens, {tuple(-s for s in shift): 1})
    cont = d.content()
    lead = d.leading_term()[1]
    factor = cont if lead > 0 else -cont
    if factor != 1:
        inv = 1 / factor
        d = d * inv
        n = n * inv
    if d.is_constant():
        return n * Fraction(d.constant_value()) ** -1, LaurentPoly.constant(1)
    return n, d


def _coerce_rf(x) -> "RatFunc":
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, LaurentPoly):
        return RatFunc(x)
    if isinstance(x, numbers.Rational) and not isinstance(x, bool):
        return RatFunc(LaurentPoly.constant(x))
    if isinstance(x, str):
        return RatFunc.parse(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to RatFunc")


class RatFunc:
    """Canonical quotient of Laurent polynomials.

    Canonical form: ``num/den`` coprime, ``den`` a polynomial with no
    monomial factor, primitive integer coefficients and positive leading
    coefficient in graded-lex order.  Under these rules structural equality
    coincides with equality of rational functions.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1, *, _canonical=False):
        if isinstance(num, RatFunc) or isinstance(den, RatFunc):
            r = _coerce_rf(num) / _coerce_rf(den)
            num, den, _canonical = r.num, r.den, True
        num = LaurentPoly.coerce(num)
        den = LaurentPoly.coerce(den)
        if not _canonical:
            num, den = _canonicalise(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def var(cls, name: str, power: int = 1) -> "RatFunc":
        return cls(LaurentPoly.var(name, power), _canonical=False)

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff=1) -> "RatFunc":
        return cls(LaurentPoly.monomial(exps, coeff))

    @property
    def gens(self) -> Tuple[str, ...]:
        return _merge_gens(self.num.gens, self.den.gens)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_monomial(self) -> bool:
        return self.den.is_constant() and self.num.is_monomial()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.constant_value()

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            other = _coerce_rf(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        try:
            other = _coerce_rf(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = _coerce_rf(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RatFunc()
        if other.is_constant():
            return RatFunc(self.num * other.constant_value(), self.den, _canonical=True)
        if self.is_constant():
            return RatFunc(other.num * self.constant_value(), other.den, _canonical=True)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = _coerce_rf(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            raise PoleError("division by the zero rational function")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce_rf(other) * self.inverse()

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise PoleError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** -k
        if k == 0:
            return RatFunc(1)
        if self.den.is_constant():
            return RatFunc(self.num ** k, _canonical=True)
        return RatFunc(self.num ** k, self.den ** k, _canonical=True)

    def equal(self, other) -> bool:
        """Equality decided by cross-multiplication."""
        other = _coerce_rf(other)
        return self.num * other.den == other.num * self.den

    def __eq__(self, other):
        try:
            other = _coerce_rf(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # transformations --------------------------------------------------
    def subs(self, mapping: Mapping[str, object]) -> "RatFunc":
        """Substitute generators by rational functions."""
        mapping = {k: _coerce_rf(v) for k, v in mapping.items()}
        if all(v.is_polynomial() and (v.num.is_monomial() or v.num.is_zero()) for v in mapping.values()):
            m = {k: v.num * Fraction(v.den.constant_value()) ** -1 for k, v in mapping.items()}
            return RatFunc(self.num.subs(m), self.den.subs(m))
        return _subs_general(self.num, mapping) / _subs_general(self.den, mapping)

    def tau_parity_even(self) -> bool:
        return all(k % 2 == 0 for k in self.num.exponents_of(TAU) + self.den.exponents_of(TAU))

    def specialize_t(self, g: int) -> "RatFunc":
        """Set t = q**g (g integer); requires only even powers of tau."""
        if not self.tau_parity_even():
            raise ValueError("odd power of tau: t = q^g would need q^(1/2)")

        def fn(gens, e):
            if TAU not in gens:
                return gens, e
            i = gens.index(TAU)
            new = list(e)
            k = new.pop(i)
            rest = tuple(x for x in gens if x != TAU)
            if "q" in rest:
                new[rest.index("q")] += g * k // 2
                return rest, tuple(new)
            gens2 = ("q",) + rest
            return gens2, (g * k // 2,) + tuple(new)

        return RatFunc(self.num.map_exponents(fn), self.den.map_exponents(fn))

    def coeffs_in(self, name: str) -> Dict[int, "RatFunc"]:
        """Coefficients of a polynomial in ``name`` (den must not involve it)."""
        if name in self.den.gens:
            raise ValueError(f"denominator depends on {name}")
        return {k[0]: RatFunc(v, self.den) for k, v in self.num.coeffs_in((name,)).items()}

    @classmethod
    def from_coeffs(cls, name: str, coeffs: Mapping[int, "RatFunc"]) -> "RatFunc":
        out = RatFunc()
        for k, c in coeffs.items():
            out = out + _coerce_rf(c) * RatFunc(LaurentPoly.var(name, k))
        return out

    # numeric bridge ---------------------------------------------------
    def eval_complex(self, assignment: Mapping[str, object]):
        d = self.den.eval_complex(assignment)
        if np.any(np.asarray(d) == 0):
            raise PoleError(f"denominator vanishes at {dict(assignment)}")
        return self.num.eval_complex(assignment) / d

    # printing / parsing -----------------------------------------------
    def to_string(self) -> str:
        if self.den.is_constant():
            return self.num.to_string()
        return f"({self.num.to_string()})/({self.den.to_string()})"

    __str__ = to_string

    def __repr__(self):
        return f"RatFunc({self.to_string()!r})"

    def to_sympy(self):
        import sympy as sp

        syms = {g: sp.Symbol(g) for g in self.gens}
        syms[TAU] = sp.sqrt(sp.Symbol("t", positive=True))

        def conv(p):
            return sp.Add(*[sp.Rational(Fraction(c).numerator, Fraction(c).denominator)
                            * sp.Mul(*[syms[g] ** k for g, k in zip(p.gens, e)])
                            for e, c in p.terms.items()])

        return conv(self.num) / conv(self.den)

    def pretty(self) -> str:
        """Factored human-readable form, e.g. ``(1-t)*(1+q)/(1-q*t)``."""
        return factored_string(self)

    @classmethod
    def parse(cls, text: str) -> "RatFunc":
        """Parse canonical strings (or any expression in q, t, and named variables)."""
        import sympy as sp
        from sympy.parsing.sympy_parser import parse_expr

        expr_text = text.replace("^", "**")
        names = set(re.findall(r"[A-Za-z_][A-Za-z_0-9]*", expr_text))
        tau = sp.Symbol(TAU, positive=True)
        local = {n: sp.Symbol(n) for n in names if n not in ("t", TAU)}
        local["t"] = tau ** 2
        local[TAU] = tau
        return from_sympy(parse_expr(expr_text, local_dict=local))


def _subs_general(p: LaurentPoly, mapping: Mapping[str, RatFunc]) -> RatFunc:
    out = RatFunc()
    keep = tuple(g for g in p.gens if g not in mapping)
    for e, c in p.terms.items():
        term = RatFunc(LaurentPoly._raw(keep, {tuple(k for g, k in zip(p.gens, e) if g not in mapping): c}))
        for g, k in zip(p.gens, e):
            if g in mapping and k:
                term = term * mapping[g] ** k
        out = out + term
    return out


def from_sympy(expr) -> RatFunc:
    """Convert a sympy rational expression (symbols q, tau/t, x1, ...) to RatFunc."""
    import sympy as sp

    tau = sp.Symbol(TAU, positive=True)
    repl = {}
    for s in expr.free_symbols:
        if s.name == "t":
            repl[s] = tau ** 2
        elif s.name == TAU and s != tau:
            repl[s] = tau
    if repl:
        expr = expr.xreplace(repl)
    num, den = sp.fraction(sp.together(sp.expand(expr) if not expr.is_Mul else expr))
    syms = sorted(expr.free_symbols, key=lambda s: gen_key(s.name))

    def conv(e):
        e = sp.expand(e)
        if not syms:
            r = sp.Rational(e)
            return LaurentPoly.constant(Fraction(int(r.p), int(r.q)))
        poly = sp.Poly(e, *syms)
        terms = {}
        for mon, c in poly.terms():
            c = sp.Rational(c)
            terms[mon] = Fraction(int(c.p), int(c.q))
        return LaurentPoly(tuple(s.name for s in syms), terms)

    return RatFunc(conv(num), conv(den))


def factored_string(r: RatFunc) -> str:
    """Render with factored numerator/denominator, constants first (1-t, 1+q)."""
    import sympy as sp

    if r.is_zero():
        return "0"
    if r.tau_parity_even():
        r = RatFunc(_tau_to_t(r.num), _tau_to_t(r.den), _canonical=True)

    def poly_factors(p: LaurentPoly):
        mins = p.min_exponents()
        mono = LaurentPoly._raw(p.gens, {mins: 1}) if p.gens else LaurentPoly.constant(1)
        core = p * mono ** -1
        if core.is_constant():
            return Fraction(core.constant_value()), mono, []
        syms = [sp.Symbol(g) for g in core.gens]
        expr = sp.Add(*[sp.Rational(Fraction(c).numerator, Fraction(c).denominator) * sp.Mul(*[s ** k for s, k in zip(syms, e)])
                        for e, c in core.terms.items()])
        c, facs = sp.factor_list(expr, *syms)
        c = Fraction(int(sp.Rational(c).p), int(sp.Rational(c).q))
        out = []
        for f, mult in facs:
            if not f.free_symbols:
                continue
            fp = _sym_to_lp(f, syms, core.gens)
            const = fp.terms.get(tuple([0] * len(fp.gens)), 0)
            if const < 0 or (const == 0 and fp.sorted_terms()[0][1] < 0):
                fp = -fp
                c *= (-1) ** mult
            out.append((fp, mult))
        return c, mono, out

    cn, mn, fn = poly_factors(r.num)
    cd, md, fd = poly_factors(r.den)
    coeff = cn / cd
    mono = mn * md ** -1

    def render(factors):
        parts = []
        for fp, mult in sorted(factors, key=lambda fm: (len(fm[0].terms), fm[0].to_string())):
            s = fp.to_string().replace(" ", "")
            s = f"({s})" if len(fp.terms) > 1 else s
            parts.append(s if mult == 1 else f"{s}^{mult}")
        return "*".join(parts)

    top = render(fn)
    mono_s = mono.to_string() if not mono.is_constant() else ""
    head = ""
    if coeff != 1 or (not top and not mono_s):
        head = "-" if coeff == -1 and (top or mono_s) else _coeff_str(coeff)
    pieces = [p for p in (mono_s, top) if p]
    body = "*".join(pieces)
    if head in ("", "-"):
        numer = head + body if body else "1"
    else:
        numer = head + ("*" + body if body else "")
    bottom = render(fd)
    if not bottom:
        return numer
    return f"{numer}/{bottom}" if (len(fd) == 1 and fd[0][1] == 1) else f"{numer}/({bottom})"


def _tau_to_t(p: LaurentPoly) -> LaurentPoly:
    # display only: tau^(2m) -> t^m with t an ordinary generator
    if TAU not in p.gens:
        return p
    i = p.gens.index(TAU)
    gens = p.gens[:i] + ("t",) + p.gens[i + 1:]
    return LaurentPoly._raw(gens, {e[:i] + (e[i] // 2,) + e[i + 1:]: c for e, c in p.terms.items()})


def _sym_to_lp(expr, syms, gens) -> LaurentPoly:
    import sympy as sp

    poly = sp.Poly(expr, *syms)
    return LaurentPoly(gens, {m: Fraction(int(sp.Rational(c).p), int(sp.Rational(c).q)) for m, c in poly.terms()})


# convenience constants ------------------------------------------------
def const(c) -> RatFunc:
    return RatFunc(LaurentPoly.constant(c), _canonical=True)


q = RatFunc.var("q")
tau = RatFunc.var(TAU)
t = tau ** 2
ONE = const(1)
ZERO = const(0)


def ratfunc_arith(a, b, op: str) -> RatFunc:
    a, b = _coerce_rf(a), _coerce_rf(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def ratfunc_equal(a, b) -> bool:
    return _coerce_rf(a).equal(_coerce_rf(b))


def eval_complex(p, assignment: Mapping[str, object]):
    return _coerce_rf(p).eval_complex(assignment)
