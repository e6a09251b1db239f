"""Named, self-contained checks shared by the command line and the test suite.

A *task* is ``(name, thunk)``; calling the thunk returns a list of
:class:`Check`.  Tasks are independent, so a runner may execute them in any
order or in parallel; :func:`run_tasks` returns checks sorted by name.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from gmpy2 import mpq

from . import classical, identities, numerics, systems
from .ratpoly import Poly, sturm_count_roots, symbol
from .systems import Params, SystemKind

EXACT_ZERO = "exact-zero"
NOT_COMPUTED = "not-computed"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    residual: float | str
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_json(self) -> dict:
        r = self.residual
        if not isinstance(r, str):
            r = float(r) if math.isfinite(r) else NOT_COMPUTED
        return {"name": self.name, "status": self.status, "residual": r, "detail": self.detail}


Task = tuple[str, Callable[[], list[Check]]]


def exact_check(name: str, residual: Poly, detail: str = "") -> Check:
    if not residual.coeffs:
        return Check(name, "pass", EXACT_ZERO, detail)
    msg = f"nonzero residual, degree {residual.degree}, {residual.total_terms()} terms"
    return Check(name, "fail", residual.max_abs_coeff(), f"{detail}; {msg}" if detail else msg)


def bound_check(name: str, value: float, tol: float, detail: str = "") -> Check:
    ok = math.isfinite(value) and value < tol
    return Check(name, "pass" if ok else "fail", float(value), detail or f"tolerance {tol:g}")


def run_tasks(tasks: list[Task], jobs: int = 1) -> list[Check]:
    def run(task: Task) -> list[Check]:
        name, thunk = task
        try:
            return list(thunk())
        except Exception as exc:  # a crashing check is a failing check
            return [Check(name, "fail", NOT_COMPUTED, f"{type(exc).__name__}: {exc}")]

    if jobs > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, tasks))
    else:
        results = [run(t) for t in tasks]
    return sorted((c for r in results for c in r), key=lambda c: c.name)


# ---------------------------------------------------------------- helpers
def to_rational(text) -> mpq:
    """Exact rational from "p/q", an integer or a decimal literal."""
    fr = Fraction(str(text).strip())
    return mpq(fr.numerator, fr.denominator)


def fmt_q(v) -> str:
    v = mpq(v)
    return f"{v.numerator}/{v.denominator}"


def fmt_params(kind: SystemKind, params: Params) -> str:
    if kind is SystemKind.RADIAL:
        return f"g={fmt_q(params.g)}"
    return f"g={fmt_q(params.g)},h={fmt_q(params.h)}"


def sample_params(kind, rng: np.random.Generator, ell: int = 0, n_max: int = 0) -> Params:
    """A random admissible rational parameter point.

    For the hyperbolic system the gap h - g is large enough that levels
    n <= n_max of the ell-deformed system are bound.
    """
    kind = SystemKind.parse(kind)
    g = mpq(int(rng.integers(1, 60)), int(rng.integers(1, 7)))
    if kind is SystemKind.RADIAL:
        return Params(g)
    gap = mpq(int(rng.integers(1, 40)), int(rng.integers(1, 7)))
    if kind is SystemKind.HYP:
        gap += 2 * (ell + n_max) + 2
    return Params(g, g + gap)


def draws(kind, count: int, seed: int, ell: int = 0, n_max: int = 0) -> list[Params]:
    rng = np.random.default_rng([seed, list(SystemKind).index(SystemKind.parse(kind))])
    return [sample_params(kind, rng, ell, n_max) for _ in range(count)]


def interior_samples(kind, count: int) -> np.ndarray:
    kind = SystemKind.parse(kind)
    hi = {SystemKind.RADIAL: 3.0, SystemKind.TRIG: math.pi / 2, SystemKind.HYP: 3.0}[kind]
    return np.linspace(0.0, hi, count + 2)[1:-1]


# ----------------------------------------------------------- task builders
def lemma_tasks(n_max: int, family: str = "all") -> list[Task]:
    tags = {"laguerre": "AB", "jacobi": "CD", "all": "ABCD"}[family]
    tasks = []
    for tag in tags:
        for n in range(n_max + 1):
            name = f"lemma-{tag}/n={n:02d}"
            tasks.append((name, lambda tag=tag, n=n, name=name: [
                exact_check(name, identities.lemma_residual(tag, n), "symbolic parameters")
            ]))
    return tasks


def cubic_tasks(family: str, ell_max: int, mode: str = "symbolic") -> list[Task]:
    ells = range(1, ell_max + 1) if ell_max >= 1 else [0]
    tasks = []
    for ell in ells:
        if mode in ("symbolic", "both"):
            name = f"cubic-{family}/symbolic/ell={ell:02d}"
            if family == "laguerre":
                fn = lambda ell=ell: identities.cubic_laguerre_residual(ell)
            else:
                fn = lambda ell=ell: identities.cubic_jacobi_residual(ell)
            tasks.append((name, lambda fn=fn, name=name: [exact_check(name, fn(), "symbolic parameters")]))
        if mode in ("grid", "both"):
            name = f"cubic-{family}/grid/ell={ell:02d}"
            pit = identities.laguerre_pit if family == "laguerre" else identities.jacobi_pit
            tasks.append((name, lambda pit=pit, ell=ell, name=name: _pit_check(name, pit(ell))))
    return tasks


def _pit_check(name: str, report) -> list[Check]:
    detail = f"parameter grid covers degree bound {report.degree_bound}"
    return [exact_check(name, report.residual, detail)]


def shape_tasks(kind, ell: int, params_list: list[Params], samples: int = 20,
                tol: float = 1e-9, symbolic: bool = False) -> list[Task]:
    kind = SystemKind.parse(kind)
    tasks = []
    for i, params in enumerate(params_list):
        stem = f"shape/{kind.value}/ell={ell:02d}/draw={i:02d}"

        def thunk(params=params, stem=stem):
            rep = identities.shape_invariance_residual(kind, ell, params)
            out = [exact_check(stem + "/exact", rep.residual, fmt_params(kind, params))]
            xs = interior_samples(kind, samples)
            delta = float(np.max(np.abs(systems.delta_pointwise(kind, ell, params, xs))))
            out.append(bound_check(stem + "/pointwise", delta, tol, f"max |Delta| over {samples} x samples"))
            return out

        tasks.append((stem, thunk))
    if symbolic:
        name = f"shape/{kind.value}/ell={ell:02d}/symbolic"
        sym = Params(symbol("g")) if kind is SystemKind.RADIAL else Params(symbol("g"), symbol("h"))
        tasks.append((name, lambda: [exact_check(
            name, identities.shape_invariance_residual(kind, ell, sym).residual, "symbolic g, h")]))
    return tasks


def reduction_tasks(ells) -> list[Task]:
    tasks = []
    for ell in ells:
        name = f"trig-hyp-reduction/ell={ell:02d}"

        def thunk(ell=ell, name=name):
            alpha, beta = identities.dpt_alpha_beta(SystemKind.TRIG, ell, Params.of(mpq(3, 2), mpq(17, 5)))
            trig, hyp = identities.trig_hyp_reduction(ell, alpha, beta)
            diff = sum((a - b for a, b in zip(trig, hyp)), Poly([], "eta"))
            same = len(trig) == len(hyp) and all(a == b for a, b in zip(trig, hyp))
            detail = f"alpha={fmt_q(alpha)}, beta={fmt_q(beta)}; summands divided by -/+(ell+alpha+beta+1)"
            chk = exact_check(name, diff, detail)
            if not same and chk.passed:
                chk = Check(name, "fail", NOT_COMPUTED, detail + "; summand lists differ")
            return [chk]

        tasks.append((name, thunk))
    return tasks


def ode_tasks(kind, ells, params) -> list[Task]:
    kind = SystemKind.parse(kind)
    tasks = []
    for ell in ells:
        name = f"xi-ode/{kind.value}/ell={ell:02d}"
        tasks.append((name, lambda ell=ell, name=name: [exact_check(
            name, systems.xi_ode_residual(kind, ell, params),
            "symbolic parameters" if params.symbolic else fmt_params(kind, params))]))
    return tasks


def positivity_tasks(kind, ell: int, params_list: list[Params]) -> list[Task]:
    kind = SystemKind.parse(kind)
    tasks = []
    for i, params in enumerate(params_list):
        name = f"positivity/{kind.value}/ell={ell:02d}/draw={i:02d}"

        def thunk(params=params, name=name):
            cert = systems.xi_positivity_certificate(kind, ell, params)
            lo, hi = systems.eta_domain(kind)
            roots = sturm_count_roots(systems.xi_poly(kind, ell, params), lo, hi)
            detail = (f"{fmt_params(kind, params)}; {len(cert.coefficients)} positive coefficients "
                      f"in {cert.variable}; {roots} roots in domain")
            if roots:
                return [Check(name, "fail", float(roots), detail)]
            return [Check(name, "pass", EXACT_ZERO, detail)]

        tasks.append((name, thunk))
    return tasks


def zeros_tasks(kind, ell: int, n_max: int, params: Params) -> list[Task]:
    kind = SystemKind.parse(kind)
    tasks = []
    for n in range(n_max + 1):
        name = f"zeros/{kind.value}/ell={ell:02d}/n={n:02d}"

        def thunk(n=n, name=name):
            p = systems.xell_poly(kind, ell, n, params)
            count = p.zeros_in_domain()
            detail = f"{fmt_params(kind, params)}; degree {p.degree}, {count} zeros in domain"
            if count == n:
                return [Check(name, "pass", EXACT_ZERO, detail)]
            return [Check(name, "fail", float(abs(count - n)), detail)]

        tasks.append((name, thunk))
    return tasks


def orthogonality_tasks(kind, ell: int, n_max: int, params: Params, tol: float = 1e-8) -> list[Task]:
    kind = SystemKind.parse(kind)
    stem = f"orthogonality/{kind.value}/ell={ell:02d}/{fmt_params(kind, params)}"

    def thunk():
        gram = numerics.orthogonality_gram(kind, ell, params, n_max)
        where = f"order {gram.order}" + (f", {gram.detail}" if gram.detail else "")
        diag = np.diag(gram.raw)
        out = [bound_check(stem + "/offdiag", gram.max_offdiag, tol, f"normalised; {where}")]
        ok = bool(np.all(diag > 0))
        out.append(Check(stem + "/diag-positive", "pass" if ok else "fail", float(diag.min()),
                         f"smallest diagonal; {where}"))
        return out

    return [(stem, thunk)]


def rodrigues_tasks(kind, n_max: int, params: Params) -> list[Task]:
    kind = SystemKind.parse(kind)
    tasks = []
    for n in range(n_max + 1):
        name = f"rodrigues/{kind.value}/n={n:02d}"

        def thunk(n=n, name=name):
            rod = systems.rodrigues_polynomial(kind, n, params)
            cls = systems.classical_poly(kind, params, n)
            ratio = rod.leading() / cls.leading()
            return [exact_check(name, rod - cls * ratio,
                                f"{fmt_params(kind, params)}; ratio {fmt_q(ratio)}")]

        tasks.append((name, thunk))
    return tasks


def limit_tasks(n: int, alpha, beta_start, xs=(mpq(1, 2), mpq(1), mpq(5, 2)),
                doublings: int = 3, window=(1.8, 2.2)) -> list[Task]:
    tasks = []
    for x in xs:
        name = f"limit/n={n:02d}/x={fmt_q(x)}"

        def thunk(x=x, name=name):
            betas = [mpq(beta_start) * 2**k for k in range(doublings)]
            errs = [classical.jacobi_laguerre_limit_error(n, alpha, b, x) for b in betas]
            if n == 0 or errs[-1] == 0:
                return [Check(name, "skip", EXACT_ZERO, "difference vanishes identically")]
            ratios = [a / b for a, b in zip(errs, errs[1:])]
            ok = all(window[0] <= r <= window[1] for r in ratios)
            detail = "errors " + ", ".join(f"{e:.3e}" for e in errs) + "; ratios " + ", ".join(
                f"{r:.4f}" for r in ratios)
            return [Check(name, "pass" if ok else "fail", errs[0], detail)]

        tasks.append((name, thunk))
    return tasks


def normalization_tasks(kind, ell: int, params: Params, scales=(mpq(7, 3), mpq(-5, 11)),
                        samples: int = 20, tol: float = 1e-12) -> list[Task]:
    kind = SystemKind.parse(kind)
    name = f"normalization/{kind.value}/ell={ell:02d}"

    def thunk():
        xs = interior_samples(kind, samples)
        u = systems.deformed_potential(kind, ell, params, xs)
        v = systems.deformed_potential(kind, ell, params, xs, xi_scales=scales)
        err = float(np.max(np.abs(u - v) / np.maximum(1.0, np.abs(u))))
        return [bound_check(name, err, tol, f"xi scaled by {fmt_q(scales[0])}, {fmt_q(scales[1])}; "
                                            f"relative change of U over {samples} samples")]

    return [(name, thunk)]


SPECTRUM_TOL = {
    SystemKind.RADIAL: ("absolute", 1e-2),
    SystemKind.TRIG: ("relative", 1e-2),
    SystemKind.HYP: ("relative", 1e-1),
}


def spectrum_checks(kind, ell: int, params: Params, values) -> list[Check]:
    kind = SystemKind.parse(kind)
    exact = numerics.closed_form_levels(kind, ell, params, len(values))
    mode, tol = SPECTRUM_TOL[kind]
    out = []
    for n, (num, ref) in enumerate(zip(values, exact)):
        err = abs(float(num) - ref)
        # the ground state sits at zero, where only an absolute test makes sense
        if mode == "relative" and ref:
            err /= abs(ref)
            used = f"relative, tolerance {tol:g}"
        else:
            used = f"absolute, tolerance {1e-2 if n == 0 else tol:g}"
        limit = 1e-2 if n == 0 else tol
        out.append(bound_check(f"spectrum/{kind.value}/ell={ell:02d}/n={n:02d}", err, limit,
                               f"numeric {float(num):.6f} vs closed form {ref:g}; {used}"))
    return out


def spectrum_tasks(kind, ell: int, params: Params, levels: int, grid=None) -> list[Task]:
    kind = SystemKind.parse(kind)
    name = f"spectrum/{kind.value}/ell={ell:02d}"

    def thunk():
        vals = numerics.fd_spectrum(kind, ell, params, grid, levels)
        return spectrum_checks(kind, ell, params, vals)

    return [(name, thunk)]


# ------------------------------------------------------------ acceptance
@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    build: Callable[[bool, int], list[Task]]
    budget_s: float | None = None


KINDS = (SystemKind.RADIAL, SystemKind.TRIG, SystemKind.HYP)


def _c1(quick, seed):
    return cubic_tasks("laguerre", 4 if quick else 10) + cubic_tasks("laguerre", 0)


def _c2(quick, seed):
    return cubic_tasks("jacobi", 3 if quick else 8) + cubic_tasks("jacobi", 0)


def _c3(quick, seed):
    return lemma_tasks(10 if quick else 30)


def _c4(quick, seed):
    tasks = []
    for kind in KINDS:
        for ell in range(1, (3 if quick else 6) + 1):
            tasks += shape_tasks(kind, ell, draws(kind, 2 if quick else 5, seed, ell), symbolic=not quick)
    return tasks


def _c5(quick, seed):
    return reduction_tasks(range(1, (2 if quick else 4) + 1))


def _c6(quick, seed):
    tasks = []
    for kind in KINDS:
        sym = Params(symbol("g")) if kind is SystemKind.RADIAL else Params(symbol("g"), symbol("h"))
        tasks += ode_tasks(kind, range(0, (3 if quick else 6) + 1), sym)
    return tasks


def _c7(quick, seed):
    tasks = []
    for kind in KINDS:
        for ell in range(1, (3 if quick else 6) + 1):
            tasks += positivity_tasks(kind, ell, draws(kind, 3 if quick else 10, seed + ell, ell))
    return tasks


def _c8(quick, seed):
    n_max = 4 if quick else 8
    tasks = []
    for kind in KINDS:
        for ell in range(0, 4):
            (params,) = draws(kind, 1, seed + 100 + ell, ell, n_max)
            tasks += zeros_tasks(kind, ell, n_max, params)
    return tasks


def _c9(quick, seed):
    fixed = {SystemKind.RADIAL: Params.of(1), SystemKind.TRIG: Params.of(1, 2),
             SystemKind.HYP: Params.of(1, 30)}
    tasks = []
    for kind in KINDS:
        for ell in range(0, 4):
            tasks += orthogonality_tasks(kind, ell, 3 if quick else 5, fixed[kind])
    return tasks


def _c10(quick, seed):
    return (
        spectrum_tasks(SystemKind.RADIAL, 1, Params.of(1), 3, numerics.Grid(1e-3, 12.0, 4000))
        + spectrum_tasks(SystemKind.TRIG, 1, Params.of(1, 2), 2)
        + spectrum_tasks(SystemKind.HYP, 1, Params.of(1, 12), 2)
    )


def _c11(quick, seed):
    tasks = []
    for kind in KINDS:
        (params,) = draws(kind, 1, seed + 200, 0, 5)
        tasks += rodrigues_tasks(kind, 5, params)
    return tasks


def _c12(quick, seed):
    tasks = []
    for n in range(1, 5):
        tasks += [(f"{name}/alpha=1/2", t) for name, t in limit_tasks(n, mpq(1, 2), 10**4)]
    return tasks


def _c13(quick, seed):
    tasks = []
    for kind in KINDS:
        for ell in range(1, 4):
            (params,) = draws(kind, 1, seed + 300 + ell, ell)
            tasks += normalization_tasks(kind, ell, params)
    return tasks


CRITERIA = (
    Criterion(1, "cubic Laguerre identity, exact, ell = 0..10", _c1, 10),
    Criterion(2, "cubic Jacobi identity, exact, ell = 0..8", _c2, 60),
    Criterion(3, "lemmas A-D, exact, n = 0..30", _c3, 5),
    Criterion(4, "shape invariance, exact and pointwise, ell = 1..6", _c4, 60),
    Criterion(5, "trig/hyp reduction to one identity, ell = 1..4", _c5),
    Criterion(6, "xi_ell differential equation, exact, ell = 0..6", _c6),
    Criterion(7, "xi_ell positivity certificates, ell <= 6", _c7),
    Criterion(8, "oscillation: P_{ell,n} has n zeros, ell <= 3, n <= 8", _c8),
    Criterion(9, "orthogonality Gram matrices, ell <= 3, n <= 5", _c9, 60),
    Criterion(10, "finite-difference spectra vs closed forms", _c10, 120),
    Criterion(11, "Rodrigues ladder collinearity, n <= 5", _c11),
    Criterion(12, "Jacobi -> Laguerre limit, O(1/beta) doubling ratio", _c12),
    Criterion(13, "U_ell independent of xi normalisation", _c13),
)


def acceptance_tasks(criterion: Criterion, quick: bool = False, seed: int = 0) -> list[Task]:
    prefix = f"criterion-{criterion.number:02d}/"
    return [(prefix + name, _prefixed(prefix, thunk)) for name, thunk in criterion.build(quick, seed)]


def _prefixed(prefix: str, thunk):
    def run():
        return [Check(prefix + c.name, c.status, c.residual, c.detail) for c in thunk()]
    return run
