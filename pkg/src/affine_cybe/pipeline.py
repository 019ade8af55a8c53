"""Certification stages over one (algebra, bivector, symplectic form) input.

Each stage returns a ``StageResult``; ``ok`` is False only for a failed
mathematical certification. Stages that need data the input lacks are
reported as skipped rather than failed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg as la
from . import poisson_poly as pp
from .affine_lsa import (compatible, completeness, dual_lsa, eta_check, image_lsa, lsa_check,
                         symplectic_lsa, transport_check)
from .double_manin import (build_double, coadjoint_linked_data, complex_structure, cotangent_lsa_report,
                           double_completeness, double_lsa, linked_bracket, linked_check, linked_product,
                           split_ideals, xi_iso)
from .lie_core import LieAlgebra, bracket, unimodular
from .rmatrix import (Bivector, SymplecticForm, center_condition, dual_bracket, graph_check,
                      omega_closed_witness, q_map, r_from_omega, schouten_invariant, schouten_rr,
                      theta_iso)
from .serialization import algebra_to_json, lsa_to_json, poisson_to_json


class ExactnessError(ValueError):
    """Exact mode was requested but a series does not terminate."""


@dataclass(frozen=True)
class Settings:
    tol: float = pp.RESIDUAL_TOL
    rank_threshold: float = pp.RANK_THRESHOLD
    K: int = pp.DEFAULT_K
    seed: int = 0
    samples: int = 20
    exact_only: bool = False

    def __post_init__(self):
        if not self.tol > 0 or not self.rank_threshold > 0:
            raise ValueError("tolerances must be positive")
        if self.K < 1:
            raise ValueError("truncation order K must be >= 1")
        if self.samples < 1:
            raise ValueError("sample count must be >= 1")


@dataclass(frozen=True)
class StageResult:
    name: str
    ok: bool
    report: dict = field(default_factory=dict)
    skipped: str | None = None

    def as_dict(self) -> dict:
        if self.skipped:
            return {"ok": True, "skipped": self.skipped}
        return {"ok": self.ok, **self.report}


@dataclass(frozen=True, eq=False)
class Inputs:
    L: LieAlgebra
    r: Bivector | None = None
    omega: SymplecticForm | None = None

    def __post_init__(self):
        if self.r is None and self.omega is not None:
            object.__setattr__(self, "r", r_from_omega(self.L, self.omega))

    @property
    def cybe_ok(self) -> bool:
        return self.r is not None and schouten_rr(self.L, self.r).cybe_ok


def _skip(name, why):
    return StageResult(name, True, skipped=why)


def _need_r(fn):
    def wrapped(inp: Inputs, cfg: Settings) -> StageResult:
        name = fn.__name__.removeprefix("stage_").replace("_", "-")
        if inp.r is None:
            return _skip(name, "needs a bivector or symplectic form")
        return fn(inp, cfg)
    wrapped.__name__ = fn.__name__
    return wrapped


def _need_omega(fn):
    def wrapped(inp: Inputs, cfg: Settings) -> StageResult:
        name = fn.__name__.removeprefix("stage_").replace("_", "-")
        if inp.omega is None:
            return _skip(name, "needs a symplectic form")
        return fn(inp, cfg)
    wrapped.__name__ = fn.__name__
    return wrapped


def stage_jacobi(inp: Inputs, cfg: Settings) -> StageResult:
    rep = inp.L.jacobi
    return StageResult("jacobi", rep.ok, {**rep.as_dict(), "dim": inp.L.dim, "unimodular": unimodular(inp.L)})


@_need_r
def stage_cybe(inp: Inputs, cfg: Settings) -> StageResult:
    L, r = inp.L, inp.r
    sch = schouten_rr(L, r)
    graph = graph_check(L, r)
    centre = center_condition(L, r)
    rep = {
        "skew": r.skew,
        "rank": la.rank(r.r),
        **sch.as_dict(),
        "graph": graph.as_dict(),
        "graph_agrees": graph.subalgebra == sch.cybe_ok,
        "center_condition": centre.as_dict(),
    }
    if inp.omega is not None:
        rep["omega_closed"] = omega_closed_witness(L, inp.omega) is None
    ok = r.skew and sch.cybe_ok and graph.lagrangian and rep["graph_agrees"]
    return StageResult("cybe", ok, rep)


@_need_r
def stage_dual(inp: Inputs, cfg: Settings) -> StageResult:
    dual = dual_bracket(inp.L, inp.r)
    jac = dual.jacobi
    rep = {"dual_algebra": algebra_to_json(dual), "jacobi": jac.as_dict(),
           "schouten_invariant": schouten_invariant(inp.L, inp.r),
           "eta_witness": list(w) if (w := eta_check(inp.L, inp.r)) else None}
    return StageResult("dual", jac.ok, rep)


@_need_r
def stage_lsa(inp: Inputs, cfg: Settings) -> StageResult:
    L, r = inp.L, inp.r
    if not inp.cybe_ok:
        return _skip("lsa", "bivector does not solve the CYBE")
    D = dual_lsa(L, r)
    dual_rep = lsa_check(D)
    dual_compat = compatible(D, dual_bracket(L, r))
    img = image_lsa(L, r)
    rep = {"dual_lsa": {**dual_rep.as_dict(), "compatible": dual_compat, "products": lsa_to_json(D)},
           "image_lsa": img.as_dict()}
    ok = dual_rep.ok and dual_compat and all(img.checks.values())
    if inp.omega is not None:
        S = symplectic_lsa(L, inp.omega)
        s_rep = lsa_check(S)
        tr = transport_check(L, inp.omega)
        rep["symplectic_lsa"] = {**s_rep.as_dict(), "compatible": compatible(S, L), "products": lsa_to_json(S)}
        rep["transport"] = tr.as_dict()
        ok = ok and s_rep.ok and compatible(S, L) and tr.ok
    return StageResult("lsa", ok, rep)


@_need_r
def stage_completeness(inp: Inputs, cfg: Settings) -> StageResult:
    rep = completeness(inp.L, inp.r)
    out = rep.as_dict()
    ok = rep.cybe_ok and rep.consistent
    if inp.r.invertible and rep.cybe_ok:
        dc = double_completeness(inp.L, inp.r)
        out["double"] = dc.as_dict()
        ok = ok and dc.consistent
    return StageResult("completeness", ok, out)


@_need_r
def stage_double(inp: Inputs, cfg: Settings) -> StageResult:
    D = build_double(inp.L, inp.r)
    checks = D.checks()
    invariant = schouten_invariant(inp.L, inp.r)
    rep = {"checks": checks, "schouten_invariant": invariant,
           "jacobi_iff_invariant": checks["jacobi_ok"] == invariant}
    ok = all(checks.values()) and rep["jacobi_iff_invariant"]
    if inp.r.invertible and checks["cybe_ok"]:
        P = double_lsa(inp.L, inp.r)
        lrep = lsa_check(P)
        rep["double_lsa"] = {**lrep.as_dict(), "commutator_is_double_bracket": compatible(P, D.alg)}
        ok = ok and lrep.ok and compatible(P, D.alg)
    return StageResult("double", ok, rep)


@_need_r
def stage_xi(inp: Inputs, cfg: Settings) -> StageResult:
    if not inp.cybe_ok:
        return _skip("xi", "bivector does not solve the CYBE")
    xi = xi_iso(inp.L, inp.r)
    th = theta_iso(inp.L, inp.r)
    return StageResult("xi", xi.ok and th.ok, {"xi": xi.as_dict(), "theta": th.as_dict()})


@_need_r
def stage_linked(inp: Inputs, cfg: Settings) -> StageResult:
    L, r = inp.L, inp.r
    if not (r.invertible and inp.cybe_ok):
        return _skip("linked", "needs an invertible solution of the CYBE")
    data = coadjoint_linked_data(L, r)
    rep = linked_check(data)
    out = {"coadjoint": rep.as_dict()}
    ok = rep.ok
    if rep.ok:
        P = linked_product(data)
        D = double_lsa(L, r)
        n = L.dim
        eye = la.eye(2 * n)
        split = split_ideals(D, eye[:n], eye[n:])
        back = split.reconstruct()
        out["product_equals_double_lsa"] = P.equals(D)
        out["bracket_equals_double"] = bool(np.all(linked_bracket(data).c == build_double(L, r).alg.c))
        out["split_roundtrip"] = back.equals(D)
        out["split_data_linked"] = linked_check(split.data).ok
        ok = ok and all(v for k, v in out.items() if k != "coadjoint")
    return StageResult("linked", ok, out)


@_need_omega
def stage_complex(inp: Inputs, cfg: Settings) -> StageResult:
    rep = complex_structure(inp.L, inp.omega)
    return StageResult("complex", rep.ok, rep.as_dict())


@_need_omega
def stage_cotangent_lsa(inp: Inputs, cfg: Settings) -> StageResult:
    rep = cotangent_lsa_report(inp.L, inp.omega)
    return StageResult("cotangent-lsa", all(rep.values()), rep)


def random_covectors(dim: int, count: int, seed: int) -> list[np.ndarray]:
    """Seeded exact rational covectors with small numerators and denominators."""
    rng = random.Random(seed)
    return [la.qarray([Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(dim)])
            for _ in range(count)]


def bracket_from_formula(L: LieAlgebra, r: Bivector, x, y, xi) -> Fraction:
    """{x, y}(xi) = -<xi, [x, y]> - r(ad*_x xi, ad*_y xi), evaluated directly."""
    return la.frac(-(xi @ bracket(L, x, y)) - r(L.coad(x) @ xi, L.coad(y) @ xi))


def formula_matrix(L: LieAlgebra, r: Bivector, xi) -> np.ndarray:
    """All brackets {e_i, e_j}(xi) from the direct formula."""
    coads = [L.coad(e) @ xi for e in la.eye(L.dim)]
    e = la.eye(L.dim)
    out = la.zeros(L.dim, L.dim)
    for i, j in itertools.combinations(range(L.dim), 2):
        v = la.frac(-(xi @ bracket(L, e[i], e[j])) - r(coads[i], coads[j]))
        out[i, j], out[j, i] = v, -v
    return out


@_need_omega
def stage_poisson(inp: Inputs, cfg: Settings) -> StageResult:
    L, w = inp.L, inp.omega
    P = pp.poly_tensor(L, w)
    r = r_from_omega(L, w)
    pts = random_covectors(L.dim, cfg.samples, cfg.seed)
    e = la.eye(L.dim)
    formula_ok = all(
        np.all(P.evaluate(xi) == formula_matrix(L, r, xi)) for xi in pts)
    sharp_ok = all(pp.sharp_consistent(L, w, xi, tensor=P) for xi in pts)
    rep = {
        "tensor": poisson_to_json(P),
        "constant_zero": la.is_zero(P.constant),
        "degree": P.degree(),
        "antisymmetric": P.antisymmetric(),
        "formula_matches_coefficients": formula_ok,
        "sharp_consistent": sharp_ok,
        "sample_count": len(pts),
    }
    ok = rep["constant_zero"] and P.degree() <= 2 and P.antisymmetric() and formula_ok and sharp_ok
    return StageResult("poisson", ok, rep)


@_need_omega
def stage_schouten(inp: Inputs, cfg: Settings) -> StageResult:
    T = pp.schouten_poly(pp.poly_tensor(inp.L, inp.omega))
    return StageResult("schouten", T.jacobi_ok, T.as_dict())


def _check_exact(point_exact: bool, cfg: Settings):
    if cfg.exact_only and not point_exact:
        raise ExactnessError("the exponential series does not terminate; exact mode cannot certify this point")


@_need_omega
def stage_leaf_rank(inp: Inputs, cfg: Settings) -> StageResult:
    pts = pp.sample_points(inp.L.dim, cfg.samples, cfg.seed)
    reports = [pp.leaf_rank(inp.L, inp.omega, a, cfg.K, cfg.rank_threshold) for a in pts]
    for rep in reports:
        _check_exact(rep.point.exact, cfg)
    failures = sum(not r.equal for r in reports)
    indeterminate = sum(r.indeterminate for r in reports)
    out = {"samples": [r.as_dict() for r in reports], "failures": failures,
           "indeterminate": indeterminate, "count": len(reports)}
    ok = failures == 0 and indeterminate < 0.05 * len(reports)
    return StageResult("leaf-rank", ok, out)


@_need_omega
def stage_cocycle(inp: Inputs, cfg: Settings) -> StageResult:
    L, w = inp.L, inp.omega
    wit = pp.cocycle_check(L, q_map(w))
    closed = omega_closed_witness(L, w) is None
    pts = pp.sample_points(L.dim, cfg.samples, cfg.seed)
    coh = [pp.cohomology_check(L, w, a, cfg.K, cfg.tol) for a in pts]
    for c in coh:
        _check_exact(c.exact, cfg)
    out = {"q_is_cocycle": wit is None, "witness": list(wit) if wit else None,
           "agrees_with_closedness": (wit is None) == closed,
           "cohomology": [c.as_dict() for c in coh],
           "max_residual": max(c.residual for c in coh)}
    ok = wit is None and closed and all(c.ok for c in coh)
    return StageResult("cocycle", ok, out)


STAGES = {
    "jacobi": stage_jacobi,
    "cybe": stage_cybe,
    "dual": stage_dual,
    "lsa": stage_lsa,
    "completeness": stage_completeness,
    "double": stage_double,
    "xi": stage_xi,
    "linked": stage_linked,
    "complex": stage_complex,
    "cotangent-lsa": stage_cotangent_lsa,
    "poisson": stage_poisson,
    "schouten": stage_schouten,
    "leaf-rank": stage_leaf_rank,
    "cocycle": stage_cocycle,
}


def run_stage(name: str, inp: Inputs, cfg: Settings) -> StageResult:
    res = STAGES[name](inp, cfg)
    return StageResult(name, res.ok, res.report, res.skipped)


def run_all(inp: Inputs, cfg: Settings) -> list[StageResult]:
    """Every stage in dependency order; later stages still run after a failure."""
    return [run_stage(name, inp, cfg) for name in STAGES]
