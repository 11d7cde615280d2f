"""Command line: ``macdo compute|verify|eval``.

Exit status is 0 when every case of a verify suite passes, 1 otherwise.
Suite cases run on a thread pool whose width is read from MACDO_THREADS.
"""

from __future__ import annotations

import argparse
import cmath
import itertools
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List

from . import factorise as fz
from .macdonald import (
    MacdonaldOperator,
    apply_H,
    eigen_residual,
    eigenvalues,
    macdonald_P,
)
from .separated import (
    chi_closed_forms,
    phi_at_tn,
    phi_consistency,
    phi_via_chi,
    phi_via_definition,
    phi_via_lauricella,
    qt,
    separation_residual,
    spectral_problem_check,
)
from .weights import DominantWeight, SymmetricPoly, weights_of_size

# ----------------------------------------------------------------------
# reports


@dataclass
class Case:
    name: str
    status: str  # pass | fail | error
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self):
        return {"name": self.name, "status": self.status, "detail": self.detail,
                "seconds": round(self.seconds, 4)}


@dataclass
class RunReport:
    command: List[str]
    cases: List[Case] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status == "pass" for c in self.cases)

    def to_json(self):
        return {"command": self.command, "ok": self.ok, "cases": [c.to_json() for c in self.cases]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def lines(self):
        for c in self.cases:
            extra = ""
            if "rel_err" in c.detail:
                extra = f"  rel_err={c.detail['rel_err']:.3g} tol={c.detail['tol']:g}"
            elif "error" in c.detail:
                extra = f"  {c.detail['error']}"
            yield f"{c.status.upper():5s} {c.name}{extra}  ({c.seconds:.2f}s)"
        n_pass = sum(c.status == "pass" for c in self.cases)
        yield f"{n_pass}/{len(self.cases)} cases passed"


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("MACDO_THREADS", "1")))
    except ValueError:
        return 1


def _run_case(name: str, fn: Callable[[], dict]) -> Case:
    t0 = time.perf_counter()
    try:
        detail = fn()
        status = "pass" if detail.pop("ok") else "fail"
    except Exception as exc:  # regime violations etc. are case-level errors
        detail, status = {"error": f"{type(exc).__name__}: {exc}"}, "error"
    return Case(name, status, detail, time.perf_counter() - t0)


def run_cases(jobs) -> List[Case]:
    jobs = list(jobs)
    width = _threads()
    if width == 1:
        return [_run_case(n, f) for n, f in jobs]
    with ThreadPoolExecutor(max_workers=width) as pool:
        futures = [pool.submit(_run_case, n, f) for n, f in jobs]
        return [f.result() for f in futures]


def _numeric(got: complex, expected: complex, tol: float, cfg: fz.QuadratureConfig, **extra) -> dict:
    err = abs(got - expected) / max(abs(expected), 1e-300)
    out = {"ok": err < tol, "value": [got.real, got.imag], "expected": [expected.real, expected.imag],
           "rel_err": err, "tol": tol, "points": cfg.points, "trunc": cfg.trunc}
    out.update(extra)
    return out


# ----------------------------------------------------------------------
# canonical JSON for computed objects


def sym_json(obj: str, lam: DominantWeight, P: SymmetricPoly) -> dict:
    return {"object": obj, "n": lam.n, "lambda": list(lam), "basis": "monomial",
            "terms": [{"key": str(mu), "coeff": P.coeffs[mu].to_string()} for mu in P.support()]}


def phi_json(obj: str, lam, phi) -> dict:
    return {"object": obj, "n": lam.n, "lambda": list(lam), "basis": "power-of-y",
            "terms": [{"key": k, "coeff": phi.chi[k].to_string()} for k in sorted(phi.chi)]}


def eigen_json(lam, ev) -> dict:
    return {"object": "eigen", "n": lam.n, "lambda": list(lam), "basis": "eigenvalues",
            "terms": [{"key": f"h{k}", "coeff": ev.h(k).to_string()} for k in range(1, lam.n + 1)]}


def _weight_type(text: str) -> DominantWeight:
    try:
        return DominantWeight.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad weight {text!r}: {exc}") from None


def _floats_type(text: str) -> list:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from None


def _weight_arg(args) -> DominantWeight:
    if args.lam is None:
        raise SystemExit("error: --lambda is required")
    lam = args.lam
    if args.n is not None and args.n != lam.n:
        raise SystemExit(f"error: --lambda has {lam.n} parts but --n is {args.n}")
    return lam


def cmd_compute(args) -> int:
    lam = _weight_arg(args)
    if args.kind == "P":
        P = macdonald_P(lam)
        text, js = P.to_string(), sym_json("P", lam, P)
    elif args.kind == "phi":
        phi = phi_via_chi(lam)
        text, js = phi.to_string(), phi_json("phi", lam, phi)
    elif args.kind == "chi":
        phi = phi_via_chi(lam)
        text = "\n".join(f"chi_{k} = {phi.chi[k].pretty()}" for k in sorted(phi.chi))
        js = phi_json("chi", lam, phi)
    else:
        ev = eigenvalues(lam)
        text = "\n".join(f"h{k} = {ev.h(k).pretty()}" for k in range(1, lam.n + 1))
        js = eigen_json(lam, ev)
    print(json.dumps(js, sort_keys=True) if args.json else text)
    return 0


def cmd_eval(args) -> int:
    lam = _weight_arg(args)
    if args.at is None:
        raise SystemExit("error: --at is required")
    pts = args.at
    q, t = args.q if args.q is not None else 0.3, args.t if args.t is not None else 0.5
    if args.kind == "P":
        if len(pts) != lam.n:
            raise SystemExit(f"error: --at needs {lam.n} coordinates")
        val = complex(macdonald_P(lam).evaluate(pts, q, t))
    else:
        if len(pts) != 1:
            raise SystemExit("error: --at needs one coordinate for phi")
        val = complex(phi_via_chi(lam).evaluate(pts[0], q, t))
    out = {"object": args.kind, "lambda": list(lam), "q": q, "t": t, "at": pts, "value": [val.real, val.imag]}
    print(json.dumps(out, sort_keys=True) if args.json else repr(val.real if val.imag == 0 else val))
    return 0


# ----------------------------------------------------------------------
# suites


def _weights(n: int, max_size: int):
    for s in range(max_size + 1):
        yield from weights_of_size(s, n)


def _weights_max_part(n: int, max_part: int):
    for parts in itertools.combinations_with_replacement(range(max_part + 1), n):
        yield DominantWeight(parts)


def suite_eigen(args):
    sizes = {2: 4, 3: 4, 4: 3}
    ns = [args.n] if args.n else [2, 3, 4]
    for n in ns:
        top = args.max_size if args.max_size is not None else sizes.get(n, 3)
        for lam in _weights(n, top):
            def job(lam=lam):
                bad = [k for k in range(1, lam.n + 1) if not eigen_residual(lam, k).is_zero()]
                return {"ok": not bad, "failing_levels": bad}
            yield f"eigen n={n} lambda={lam}", job


def suite_commute(args):
    n = args.n or 3
    top = args.max_size if args.max_size is not None else 3
    for mu in _weights(n, top):
        for i, j in itertools.combinations(range(1, n + 1), 2):
            def job(mu=mu, i=i, j=j):
                f = SymmetricPoly.monomial(mu)
                Hi, Hj = MacdonaldOperator(n, i), MacdonaldOperator(n, j)
                return {"ok": apply_H(Hi, apply_H(Hj, f)) == apply_H(Hj, apply_H(Hi, f))}
            yield f"commute H{i} H{j} on m[{mu}]", job


def suite_sepeq(args):
    ns = [args.n] if args.n else [2, 3]
    top = args.max_part if args.max_part is not None else 3
    for n in ns:
        for lam in _weights_max_part(n, top):
            yield f"sepeq lambda={lam}", (lambda lam=lam: {"ok": separation_residual(lam).is_zero()})


def suite_spectral(args):
    ns = [args.n] if args.n else [2, 3]
    top = args.max_part if args.max_part is not None else 3
    for n in ns:
        for lam in _weights_max_part(n, top):
            yield f"spectral lambda={lam}", (lambda lam=lam: {"ok": spectral_problem_check(lam)})


def suite_phi_consistency(args):
    ns = [args.n] if args.n else [2, 3, 4]
    top = args.max_part if args.max_part is not None else 4
    for n in ns:
        for lam in _weights_max_part(n, top):
            def job(lam=lam):
                phi = phi_via_chi(lam)
                checks = {
                    "lauricella": phi_via_lauricella(lam) == phi,
                    "definition": phi_via_definition(lam) == phi,
                    "chi_closed": chi_closed_forms(lam) == (phi.coefficient(lam[0]), phi.coefficient(lam[-1])),
                    "phi_at_tn": phi_at_tn(lam) == phi.at(qt(0, lam.n)),
                }
                if lam.n == 3:
                    checks["n3_parameters"] = phi_consistency(lam)
                return {"ok": all(checks.values()), "checks": checks}
            yield f"phi-consistency lambda={lam}", job


def _cfg(args, default_tol):
    return fz.QuadratureConfig(points=args.points, trunc=args.trunc,
                               tol=args.tol if args.tol is not None else default_tol)


def suite_aw(args):
    cfg = _cfg(args, 1e-9)
    rng = random.Random(args.seed)
    qs = [args.q] if args.q is not None else [0.3, 0.5]
    for q in qs:
        for i in range(args.draws):
            quad = [rng.uniform(0, 0.9) * cmath.exp(1j * rng.uniform(-cmath.pi, cmath.pi)) for _ in range(4)]
            p = fz.AWParams(*quad, q)

            def job(p=p):
                lhs, rhs = fz.aw_integral(p, cfg)
                return _numeric(lhs, rhs, cfg.tol, cfg, params=[[z.real, z.imag] for z in p.quad], q=p.q)
            yield f"aw q={q} draw={i}", job


def _qt_args(args, q, t):
    return (args.q if args.q is not None else q, args.t if args.t is not None else t)


def _point(args, default):
    return list(args.at) if args.at else default


def _lams(args, default):
    return [args.lam] if args.lam else [DominantWeight(l) for l in default]


def _moduli(kernel):
    return [round(m, 6) for m in kernel.params.moduli()]


def suite_thm1(args):
    cfg = _cfg(args, 1e-8)
    q, t = _qt_args(args, 0.2, 0.5)
    xi = args.xi
    y = _point(args, [0.5, 0.5])
    for lam in _lams(args, [(0, 0), (0, 1), (0, 2), (1, 2)]):
        def job(lam=lam):
            k = fz.induced_kernel("n2_forward", y, q, t, xi)
            got, exp = fz.theorem1(lam, *y, xi, q, t, cfg)
            return _numeric(got, exp, cfg.tol, cfg, induced_moduli=_moduli(k))
        yield f"thm1 lambda={lam} y={y}", job


def suite_thm2(args):
    cfg = _cfg(args, 1e-6)
    q, t = _qt_args(args, 0.2, 0.5)
    xi = args.xi
    x = _point(args, [0.8, 0.6])
    rt_cfg = fz.QuadratureConfig(points=min(cfg.points, 512), trunc=cfg.trunc, tol=cfg.tol)
    for lam in _lams(args, [(0, 0), (0, 1), (0, 2), (1, 2)]):
        def direct(lam=lam):
            k = fz.induced_kernel("n2_inverse", x, q, t, xi)
            got, exp = fz.theorem2_direct(lam, *x, xi, q, t, cfg)
            return _numeric(got, exp, cfg.tol, cfg, induced_moduli=_moduli(k), contour="deformed")
        yield f"thm2 direct lambda={lam} x={x}", direct

        def roundtrip(lam=lam):
            got, exp = fz.roundtrip_n2(lam, *x, xi, q, t, rt_cfg)
            return _numeric(got, exp, cfg.tol, rt_cfg, contour="deformed")
        yield f"thm2 roundtrip lambda={lam} x={x}", roundtrip


def suite_thm3(args):
    cfg = _cfg(args, 1e-6)
    q, t = _qt_args(args, 0.2, 0.5)
    y = _point(args, [0.5, 0.5, 0.8])
    for lam in _lams(args, [(0, 0, 0), (0, 0, 1), (0, 1, 1), (0, 0, 2)]):
        def job(lam=lam):
            k = fz.induced_kernel("n3_forward", y, q, t)
            got, exp = fz.theorem3(lam, *y, q, t, cfg)
            return _numeric(got, exp, cfg.tol, cfg, induced_moduli=_moduli(k))
        yield f"thm3 lambda={lam} y={y}", job


def suite_thm4(args):
    cfg = _cfg(args, 1e-6)
    q, t = _qt_args(args, 0.2, 0.5)
    x = _point(args, [0.9, 0.6, 0.75])
    rt_cfg = fz.QuadratureConfig(points=min(cfg.points, 512), trunc=cfg.trunc, tol=cfg.tol)
    for lam in _lams(args, [(0, 0, 0), (0, 0, 1), (0, 1, 1), (0, 0, 2)]):
        def direct(lam=lam):
            k = fz.induced_kernel("n3_inverse", x, q, t)
            got, exp = fz.theorem4_direct(lam, *x, q, t, cfg)
            return _numeric(got, exp, cfg.tol, cfg, induced_moduli=_moduli(k), contour="deformed")
        yield f"thm4 direct lambda={lam} x={x}", direct

        def roundtrip(lam=lam):
            got, exp = fz.roundtrip_n3(lam, *x, q, t, rt_cfg)
            return _numeric(got, exp, cfg.tol, rt_cfg, contour="deformed")
        yield f"thm4 roundtrip lambda={lam} x={x}", roundtrip


def suite_integer_g(args):
    gs = [args.g] if args.g else [1, 2]
    lams = _lams(args, list(_weights_max_part(3, 2)))
    for g in gs:
        for lam in lams:
            def job(g=g, lam=lam):
                got, exp, ok = fz.integer_g_check(g, lam)
                return {"ok": ok, "result": got.to_string() if ok else str(got)}
            yield f"integer-g g={g} lambda={lam}", job


def suite_orthogonality(args):
    q, t = _qt_args(args, 0.4, 0.5)
    tol = args.tol if args.tol is not None else 1e-7
    points = min(args.points, 512)
    lams = [l for l in _weights(2, 3)]
    norms = {}

    def norm(lam):
        if lam not in norms:
            norms[lam] = fz.orthogonality_n2(lam, lam, q, t, points, args.trunc)
        return norms[lam]

    for a, b in itertools.combinations(lams, 2):
        def job(a=a, b=b):
            v = fz.orthogonality_n2(a, b, q, t, points, args.trunc)
            scale = abs(norm(a) * norm(b)) ** 0.5
            r = abs(v) / scale
            return {"ok": r < tol, "rel_err": r, "tol": tol, "points": points, "trunc": args.trunc,
                    "value": [v.real, v.imag]}
        yield f"orthogonality {a} vs {b}", job


SUITES = {
    "eigen": suite_eigen,
    "commute": suite_commute,
    "sepeq": suite_sepeq,
    "spectral": suite_spectral,
    "phi-consistency": suite_phi_consistency,
    "aw": suite_aw,
    "thm1": suite_thm1,
    "thm2": suite_thm2,
    "thm3": suite_thm3,
    "thm4": suite_thm4,
    "integer-g": suite_integer_g,
    "orthogonality": suite_orthogonality,
}


def cmd_verify(args, argv) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    jobs = []
    for name in names:
        jobs.extend(SUITES[name](args))
    report = RunReport(command=list(argv), cases=run_cases(jobs))
    if args.json:
        print(report.dumps())
    else:
        for line in report.lines():
            print(line)
    return 0 if report.ok else 1


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="macdo", description="Macdonald polynomials and their separation of variables")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--n", type=int)
        p.add_argument("--lambda", dest="lam", type=_weight_type, help="comma separated weakly increasing parts, e.g. 0,0,2")
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("compute", help="compute an exact object")
    p.add_argument("kind", choices=["P", "phi", "eigen", "chi"])
    common(p)

    p = sub.add_parser("eval", help="evaluate P or phi numerically")
    p.add_argument("kind", choices=["P", "phi"])
    common(p)
    p.add_argument("--q", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--at", type=_floats_type, help="comma separated coordinates")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=list(SUITES) + ["all"])
    common(p)
    p.add_argument("--g", type=int)
    p.add_argument("--q", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--xi", type=float, default=1.0)
    p.add_argument("--at", type=_floats_type, help="comma separated sample point")
    p.add_argument("--points", type=int, default=2048)
    p.add_argument("--trunc", type=int, default=300)
    p.add_argument("--tol", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--draws", type=int, default=25)
    p.add_argument("--max-part", type=int)
    p.add_argument("--max-size", type=int)
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    if args.command == "compute":
        return cmd_compute(args)
    if args.command == "eval":
        return cmd_eval(args)
    return cmd_verify(args, argv)


if __name__ == "__main__":
    sys.exit(main())
