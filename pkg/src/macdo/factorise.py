"""Askey-Wilson integrals and the factorising operators for n = 2, 3.

All four integral operators have the shape

    (1/2 pi i) \\oint dz/z  C * w(z; a,b,c,d) * f(s z, s/z, ...)

where w is the Askey-Wilson weight (z^2, z^-2;q)_inf / prod_p (p z, p/z;q)_inf
and the constant C is assembled from Lambda-products and a q-Beta value.
The contour integral is a trapezoid mean over |z| = 1.  When some |p q^k| > 1
the contour is deformed: the circle is kept and the residues at p q^k and
1/(p q^k) are added explicitly (``deform=True``).  The forward operators run
on the plain circle; the inverse operators always need the deformation
since their induced quadruple has |a b| = 1/t > 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .exact import LaurentPoly, RatFunc
from .macdonald import macdonald_P
from .qseries import (
    DEFAULT_TRUNC,
    gauss_binomial,
    poch_exact,
    poch_inf_numeric,
    q_beta,
    g_from,
)
from .separated import phi_via_chi, qt
from .weights import SymmetricPoly, as_weight, to_monomial_basis, xvars


class ContourError(ValueError):
    """The induced parameters leave the regime the contour can handle."""


class BranchError(ValueError):
    """Square roots of the inputs are ambiguous (inputs must be positive reals)."""


class HalfPowerError(ArithmeticError):
    pass


class DegenerateDenominatorError(ArithmeticError):
    pass


@dataclass(frozen=True)
class QuadratureConfig:
    points: int = 2048
    trunc: int = DEFAULT_TRUNC
    tol: float = 1e-9

    def __post_init__(self):
        if self.points < 8 or self.points & (self.points - 1):
            raise ValueError("points must be a power of two >= 8")

    def doubled(self) -> "QuadratureConfig":
        return QuadratureConfig(self.points * 2, self.trunc * 2, self.tol)


@dataclass(frozen=True)
class AWParams:
    a: complex
    b: complex
    c: complex
    d: complex
    q: float

    @property
    def quad(self):
        return (self.a, self.b, self.c, self.d)

    def moduli(self):
        return tuple(abs(p) for p in self.quad)

    def in_unit_circle_regime(self) -> bool:
        return max(self.moduli() + (abs(self.q),)) < 1


# ----------------------------------------------------------------------
# weight, closed form, contour


def aw_weight(z, p: AWParams, trunc: int = DEFAULT_TRUNC, omit=None):
    """Askey-Wilson weight at z; ``omit=(i, sign, k)`` drops the factor
    1 - p_i q^k z^sign (used for residues)."""
    z = np.asarray(z, dtype=complex)
    q = p.q
    num = poch_inf_numeric(z * z, q, trunc) * poch_inf_numeric(1 / (z * z), q, trunc)
    den = 1
    for i, par in enumerate(p.quad):
        for sign, arg in ((1, par * z), (-1, par / z)):
            skip = omit[2] if omit is not None and omit[0] == i and omit[1] == sign else None
            den = den * poch_inf_numeric(arg, q, trunc, skip=skip)
    return num / den


def aw_rhs(p: AWParams, trunc: int = DEFAULT_TRUNC) -> complex:
    a, b, c, d = p.quad
    q = p.q
    den = poch_inf_numeric(q, q, trunc)
    for x in (a * b, a * c, a * d, b * c, b * d, c * d):
        den = den * poch_inf_numeric(x, q, trunc)
    return complex(2 * poch_inf_numeric(a * b * c * d, q, trunc) / den)


def _outside_poles(p: AWParams):
    """(i, k, p_i q^k) for every |p_i q^k| > 1."""
    out = []
    for i, par in enumerate(p.quad):
        k = 0
        while abs(par) * p.q ** k > 1:
            out.append((i, k, par * p.q ** k))
            k += 1
    return out


def _check_poles(p: AWParams, residues, gap: float = 1e-3, sep: float = 1e-8):
    """Poles must stay off the unit circle and the encircled ones must be simple."""
    every = []
    for par in p.quad:
        for k in range(80):
            v = par * p.q ** k
            if abs(v) < 1e-12:
                break
            every.extend([v, 1 / v])
    for v in every:
        if abs(abs(v) - 1) < gap:
            raise ContourError(f"pole at |z| = {abs(v):.6g} is too close to the unit circle")
    for _, _, z0 in residues:
        for target in (z0, 1 / z0):
            hits = sum(1 for v in every if abs(v - target) <= sep * max(1.0, abs(target)))
            if hits != 1:
                raise ContourError(f"pole at {target} is not simple (coincides with another)")


def aw_contour_integral(Q: Callable | None, p: AWParams, cfg: QuadratureConfig = QuadratureConfig(),
                        deform: bool = False) -> complex:
    """(1/2 pi i) \\oint dz/z w(z) Q(z) over the Askey-Wilson contour.

    With ``deform=False`` only the unit-circle regime is accepted.
    """
    if not 0 < p.q < 1:
        raise ContourError("need 0 < q < 1")
    residues = _outside_poles(p)
    if residues and not deform:
        raise ContourError(f"contour is not the unit circle: moduli {tuple(round(m, 6) for m in p.moduli())}")
    _check_poles(p, residues)
    nodes = np.exp(2j * np.pi * np.arange(cfg.points) / cfg.points)
    vals = aw_weight(nodes, p, cfg.trunc)
    if Q is not None:
        vals = vals * Q(nodes)
    total = complex(np.mean(vals))
    for i, k, z0 in residues:
        z1 = 1 / z0
        r0 = complex(aw_weight(z0, p, cfg.trunc, omit=(i, -1, k)))
        r1 = complex(aw_weight(z1, p, cfg.trunc, omit=(i, 1, k)))
        if Q is not None:
            r0 *= complex(Q(np.asarray([z0]))[0])
            r1 *= complex(Q(np.asarray([z1]))[0])
        total += r0 + r1
    return total


def aw_integral(p: AWParams, cfg: QuadratureConfig = QuadratureConfig(), deform: bool = False):
    """(lhs, rhs) of the Askey-Wilson integral identity."""
    lhs = aw_contour_integral(None, p, cfg, deform)
    return lhs, aw_rhs(p, cfg.trunc)


# ----------------------------------------------------------------------
# kernels


def lambda_product(nu, x, y, q, trunc: int = DEFAULT_TRUNC) -> complex:
    """(nu x y, nu x/y, nu y/x, nu/(x y); q)_inf."""
    out = 1
    for v in (nu * x * y, nu * x / y, nu * y / x, nu / (x * y)):
        out = out * poch_inf_numeric(v, q, trunc)
    return complex(out)


@dataclass(frozen=True)
class KernelSpec:
    case: str
    params: AWParams
    const: complex
    scale: complex  # the integrand uses f(scale z, scale / z, *extra)
    extra: tuple = field(default=())

    def integrate(self, f: Callable, cfg: QuadratureConfig, deform: bool = False) -> complex:
        s = self.scale
        extra = self.extra

        def Q(z):
            return np.asarray(f(s * z, s / z, *extra), dtype=complex) * np.ones_like(z)

        return self.const * aw_contour_integral(Q, self.params, cfg, deform)

    def integrate_Q(self, Q: Callable, cfg: QuadratureConfig, deform: bool = False) -> complex:
        return self.const * aw_contour_integral(Q, self.params, cfg, deform)


def _normaliser(q, lam_val, alpha, beta, trunc):
    qq = poch_inf_numeric(q, q, trunc)
    return (1 - q) * qq * qq * lam_val / (2 * q_beta(alpha, beta, q, trunc))


def kernel_n2_forward(yp, ym, xi, q, t, trunc=DEFAULT_TRUNC) -> KernelSpec:
    tau = math.sqrt(t)
    g = g_from(q, t)
    p = AWParams(tau * ym, tau / ym, yp / tau, tau ** 3 / yp, q)
    const = _normaliser(q, lambda_product(t, ym, yp / t, q, trunc), g, g, trunc)
    return KernelSpec("n2_forward", p, const, xi * yp / tau)


def kernel_n2_inverse(xp, xm, xi, q, t, trunc=DEFAULT_TRUNC) -> KernelSpec:
    tau = math.sqrt(t)
    g = g_from(q, t)
    w = xp / (tau * xi)
    p = AWParams(xm / tau, 1 / (tau * xm), t * w, t / w, q)
    const = _normaliser(q, lambda_product(tau, xm, w, q, trunc), -g, 2 * g, trunc)
    return KernelSpec("n2_inverse", p, const, tau * xp / xi)


def kernel_n3_forward(yp, ym, y3, q, t, trunc=DEFAULT_TRUNC) -> KernelSpec:
    tau = math.sqrt(t)
    g = g_from(q, t)
    w = yp / tau ** 3
    p = AWParams(tau * ym, tau / ym, t * w, t / w, q)
    const = _normaliser(q, lambda_product(tau ** 3, ym, w, q, trunc), g, 2 * g, trunc)
    return KernelSpec("n3_forward", p, const, y3 * w, (y3,))


def kernel_n3_inverse(xp, xm, x3, q, t, trunc=DEFAULT_TRUNC) -> KernelSpec:
    tau = math.sqrt(t)
    g = g_from(q, t)
    p = AWParams(xm / tau, 1 / (tau * xm), tau ** 3 * xp, tau ** 3 / xp, q)
    const = _normaliser(q, lambda_product(t, xm, xp, q, trunc), -g, 3 * g, trunc)
    return KernelSpec("n3_inverse", p, const, tau ** 3 * xp, (x3,))


def _positive(*vals):
    for v in vals:
        if isinstance(v, complex) and v.imag != 0 or not np.isreal(v) or float(np.real(v)) <= 0:
            raise BranchError(f"input {v} is not a positive real; square-root branches are ambiguous")
    return [float(np.real(v)) for v in vals]


def induced_kernel(case: str, coords: Sequence[float], q: float, t: float, xi: complex = 1.0,
                   trunc: int = DEFAULT_TRUNC) -> KernelSpec:
    """Kernel for the given case at positive real sample coordinates."""
    if case == "n2_forward":
        y1, y2 = _positive(*coords)
        return kernel_n2_forward(math.sqrt(y1 * y2), math.sqrt(y1 / y2), xi, q, t, trunc)
    if case == "n2_inverse":
        x1, x2 = _positive(*coords)
        return kernel_n2_inverse(math.sqrt(x1 * x2), math.sqrt(x1 / x2), xi, q, t, trunc)
    if case == "n3_forward":
        y1, y2, y3 = _positive(*coords)
        return kernel_n3_forward(math.sqrt(y1 * y2), math.sqrt(y1 / y2), y3, q, t, trunc)
    if case == "n3_inverse":
        x1, x2, x3 = _positive(*coords)
        return kernel_n3_inverse(math.sqrt(x1 * x2) / x3, math.sqrt(x1 / x2), x3, q, t, trunc)
    raise ValueError(f"unknown kernel case {case!r}")


def apply_M_xi(f, y1, y2, xi, q, t, cfg: QuadratureConfig = QuadratureConfig(), deform: bool = False) -> complex:
    return induced_kernel("n2_forward", (y1, y2), q, t, xi, cfg.trunc).integrate(f, cfg, deform)


def apply_M_xi_inverse(f, x1, x2, xi, q, t, cfg: QuadratureConfig = QuadratureConfig(), deform: bool = True) -> complex:
    return induced_kernel("n2_inverse", (x1, x2), q, t, xi, cfg.trunc).integrate(f, cfg, deform)


def apply_M_n3(f, y1, y2, y3, q, t, cfg: QuadratureConfig = QuadratureConfig(), deform: bool = False) -> complex:
    return induced_kernel("n3_forward", (y1, y2, y3), q, t, 1.0, cfg.trunc).integrate(f, cfg, deform)


def apply_M_n3_inverse(f, x1, x2, x3, q, t, cfg: QuadratureConfig = QuadratureConfig(), deform: bool = True) -> complex:
    return induced_kernel("n3_inverse", (x1, x2, x3), q, t, 1.0, cfg.trunc).integrate(f, cfg, deform)


# ----------------------------------------------------------------------
# normalisations and right-hand sides


def c_n2(lam, xi=1) -> RatFunc:
    """c_{lambda,xi} for n = 2 (xi an exact number)."""
    lam = as_weight(lam)
    d = lam.diff(2, 1)
    xi = xi if isinstance(xi, RatFunc) else RatFunc(Fraction(xi))
    return qt(0, -2 * lam[0] + lam[1]) * xi ** lam.size * poch_exact(qt(0, 1), d) / poch_exact(qt(0, 2), d)


def c_n2_numeric(lam, xi, q, t) -> complex:
    lam = as_weight(lam)
    base = c_n2(lam, 1).eval_complex({"q": q, "t": t})
    return complex(base) * xi ** lam.size


def c_n3(lam) -> RatFunc:
    lam = as_weight(lam)
    l31, l32, l21 = lam.diff(3, 1), lam.diff(3, 2), lam.diff(2, 1)
    t1, t2, t3 = qt(0, 1), qt(0, 2), qt(0, 3)
    return qt(0, lam[1] - 4 * lam[0]) * poch_exact(t2, l31) * poch_exact(t2, l32) * poch_exact(t1, l21) \
        / (poch_exact(t3, l31) * poch_exact(t1, l32) * poch_exact(t2, l21))


def separated_side_n2(lam, xi, q, t):
    """(y1, y2) -> c_{lambda,xi} phi(y1) phi(y2), numerically."""
    phi = phi_via_chi(lam)
    c = c_n2_numeric(lam, xi, q, t)
    return lambda y1, y2: c * phi.evaluate(y1, q, t) * phi.evaluate(y2, q, t)


def separated_side_n3(lam, q, t):
    """(y1, y2, y3) -> c_lambda y3^{|lambda|} phi(y1) phi(y2), numerically."""
    lam = as_weight(lam)
    phi = phi_via_chi(lam)
    c = complex(c_n3(lam).eval_complex({"q": q, "t": t}))
    return lambda y1, y2, y3: c * y3 ** lam.size * phi.evaluate(y1, q, t) * phi.evaluate(y2, q, t)


def macdonald_side(lam, q, t):
    P = macdonald_P(lam)
    return lambda *xs: P.evaluate(list(xs), q, t)


# ----------------------------------------------------------------------
# theorem checks (value, expected) pairs


def theorem1(lam, y1, y2, xi, q, t, cfg=QuadratureConfig()):
    got = apply_M_xi(macdonald_side(lam, q, t), y1, y2, xi, q, t, cfg)
    return got, complex(separated_side_n2(lam, xi, q, t)(y1, y2))


def theorem3(lam, y1, y2, y3, q, t, cfg=QuadratureConfig()):
    got = apply_M_n3(macdonald_side(lam, q, t), y1, y2, y3, q, t, cfg)
    return got, complex(separated_side_n3(lam, q, t)(y1, y2, y3))


def theorem2_direct(lam, x1, x2, xi, q, t, cfg=QuadratureConfig()):
    got = apply_M_xi_inverse(separated_side_n2(lam, xi, q, t), x1, x2, xi, q, t, cfg)
    return got, complex(macdonald_side(lam, q, t)(x1, x2))


def theorem4_direct(lam, x1, x2, x3, q, t, cfg=QuadratureConfig()):
    got = apply_M_n3_inverse(separated_side_n3(lam, q, t), x1, x2, x3, q, t, cfg)
    return got, complex(macdonald_side(lam, q, t)(x1, x2, x3))


def roundtrip_n2(lam, x1, x2, xi, q, t, cfg=QuadratureConfig(points=512)):
    """M_xi^{-1} M_xi P_lambda at (x1, x2), both integrals done numerically.

    The inner operator is parameterised by (y_+, y_-) directly, so it can be
    evaluated at the complex outer nodes and residue points.
    """
    x1, x2 = _positive(x1, x2)
    outer = kernel_n2_inverse(math.sqrt(x1 * x2), math.sqrt(x1 / x2), xi, q, t, cfg.trunc)
    yp = outer.scale  # y_+ of the inner point, y_- is the outer variable
    P = macdonald_side(lam, q, t)

    def Q(zs):
        return np.array([kernel_n2_forward(yp, z, xi, q, t, cfg.trunc).integrate(P, cfg, deform=True)
                         for z in zs])

    return outer.integrate_Q(Q, cfg, deform=True), complex(P(x1, x2))


def roundtrip_n3(lam, x1, x2, x3, q, t, cfg=QuadratureConfig(points=512)):
    """M^{-1} M P_lambda at (x1, x2, x3) for n = 3."""
    x1, x2, x3 = _positive(x1, x2, x3)
    outer = kernel_n3_inverse(math.sqrt(x1 * x2) / x3, math.sqrt(x1 / x2), x3, q, t, cfg.trunc)
    yp = outer.scale
    P = macdonald_side(lam, q, t)

    def Q(zs):
        return np.array([kernel_n3_forward(yp, z, x3, q, t, cfg.trunc).integrate(P, cfg, deform=True)
                         for z in zs])

    return outer.integrate_Q(Q, cfg, deform=True), complex(P(x1, x2, x3))


# ----------------------------------------------------------------------
# integer g: the inverse as a q-difference operator (n = 3)


def _halve_roots(r: RatFunc) -> RatFunc:
    """Rewrite s1, s2 (square roots of x1, x2) as x1, x2; exponents must be even."""
    def conv(p: LaurentPoly) -> LaurentPoly:
        out = LaurentPoly.constant(0)
        for e, c in p.terms.items():
            exps = {}
            for name, k in zip(p.gens, e):
                if name in ("s1", "s2"):
                    if k % 2:
                        raise HalfPowerError(f"half-integer power of x in {name}^{k}")
                    name, k = "x" + name[1], k // 2
                exps[name] = exps.get(name, 0) + k
            out = out + LaurentPoly.monomial(exps, c)
        return out
    return RatFunc(conv(r.num), conv(r.den))


def _specialise(r: RatFunc, g: int, what: str) -> RatFunc:
    out_num = RatFunc(r.num).specialize_t(g)
    out_den = RatFunc(r.den).specialize_t(g)
    if out_den.is_zero():
        raise DegenerateDenominatorError(f"{what} has a vanishing denominator at t = q^{g}")
    return out_num / out_den


def difference_coefficients(g: int, k_start: int = 0):
    """xi_k(r, y) for k = k_start..g with r = (x1 x2)^(1/2)/x3, y = (x1/x2)^(1/2), t = q^g."""
    tt = qt(0, 1)
    s1, s2, x3 = RatFunc.var("s1"), RatFunc.var("s2"), RatFunc.var("x3")
    r = s1 * s2 / x3
    y = s1 / s2
    out = {}
    for k in range(k_start, g + 1):
        sign = -1 if k % 2 else 1
        qpow = RatFunc(LaurentPoly.var("q", -(k * (k - 1) // 2))) if k > 1 else RatFunc(1)
        val = sign * qpow * gauss_binomial(g, k) * y ** (-2 * k) * (1 - qt(g - 2 * k) * y ** -2) \
            * poch_exact(tt * r * y, k) * poch_exact(tt * y / r, k) \
            * poch_exact(tt * r / y, g - k) * poch_exact(tt / (r * y), g - k) \
            / (poch_exact(qt(0, 2), g) * poch_exact(qt(-k) * y ** -2, g + 1))
        out[k] = _specialise(_halve_roots(val), g, f"xi_{k}")
    return out


def integer_g_inverse(g: int, lam, k_start: int = 0) -> RatFunc:
    """Apply the order-g difference operator to c_lambda y3^{|lambda|} phi(y1) phi(y2), exactly.

    The sum runs over k = 0..g; the k = 0 term is required (starting at
    k = 1 does not reproduce P_lambda, see ``k_start``).  The result is a rational function of x1, x2, x3
    over Q(q) and should equal P_lambda(x; q, q^g).
    """
    lam = as_weight(lam)
    if lam.n != 3:
        raise ValueError("the difference-operator inverse is for n = 3")
    if g < 1:
        raise ValueError("g must be a positive integer")
    phi = phi_via_chi(lam)
    chi = {k: _specialise(c, g, f"chi_{k}") for k, c in phi.chi.items()}
    c = _specialise(c_n3(lam), g, "c_lambda")
    x1, x2, x3 = (RatFunc.var(v) for v in xvars(3))

    def phi_at(y):
        out = RatFunc()
        for k, ck in chi.items():
            out = out + ck * y ** k
        return out

    total = RatFunc()
    for k, xik in difference_coefficients(g, k_start).items():
        y1 = qt(g + k) * x1 / x3
        y2 = qt(2 * g - k) * x2 / x3
        total = total + xik * c * x3 ** lam.size * phi_at(y1) * phi_at(y2)
    return total


def integer_g_check(g: int, lam, k_start: int = 0):
    """(result, expected P_lambda at t = q^g, equal?); result is a SymmetricPoly when polynomial."""
    lam = as_weight(lam)
    got = integer_g_inverse(g, lam, k_start)
    expected = macdonald_P(lam).map_coeffs(lambda c: _specialise(c, g, "P coefficient"))
    if any(v in got.den.gens for v in xvars(3)):
        # not even a polynomial in x
        return got, expected, False
    got_sym = to_monomial_basis(got, 3)
    return got_sym, expected, got_sym == expected


# ----------------------------------------------------------------------
# orthogonality for n = 2


def torus_weight_n2(x1, x2, q, t, trunc=DEFAULT_TRUNC):
    """prod_{j != k} (x_j/x_k;q)_inf / (t x_j/x_k;q)_inf."""
    out = 1
    for r in (x1 / x2, x2 / x1):
        out = out * poch_inf_numeric(r, q, trunc) / poch_inf_numeric(t * r, q, trunc)
    return out


def _torus(q, t, points):
    if not (0 < q < 1 and 0 < t < 1):
        raise ValueError("need real 0 < q, t < 1 so that conj(x) = 1/x")
    z = np.exp(2j * np.pi * np.arange(points) / points)
    return np.meshgrid(z, z, indexing="ij")


def orthogonality_n2(lam, lam2, q, t, points: int = 512, trunc: int = DEFAULT_TRUNC) -> complex:
    """<P_lam, P_lam2> = torus mean of P_lam(1/x) P_lam2(x) Delta(x)."""
    x1, x2 = _torus(q, t, points)
    P = macdonald_P(lam)
    P2 = macdonald_P(lam2)
    vals = P.evaluate([1 / x1, 1 / x2], q, t) * P2.evaluate([x1, x2], q, t) * torus_weight_n2(x1, x2, q, t, trunc)
    return complex(np.mean(vals))


def gram_n2(lams, q, t, points: int = 512, trunc: int = DEFAULT_TRUNC) -> np.ndarray:
    """All inner products <P_a, P_b> for a, b in lams (each P evaluated once)."""
    x1, x2 = _torus(q, t, points)
    delta = torus_weight_n2(x1, x2, q, t, trunc)
    vals = [macdonald_P(l).evaluate([x1, x2], q, t) for l in lams]
    # with real q, t and |x| = 1, P(1/x) is the complex conjugate of P(x)
    out = np.empty((len(lams), len(lams)), dtype=complex)
    for i, a in enumerate(vals):
        for j, b in enumerate(vals):
            out[i, j] = np.mean(np.conj(a) * b * delta)
    return out


def convergence_pair(fn: Callable[[QuadratureConfig], complex], cfg: QuadratureConfig):
    """Value at cfg and at doubled nodes and truncation."""
    return fn(cfg), fn(cfg.doubled())
