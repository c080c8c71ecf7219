"""Replay of the worked examples as named pass/fail fixtures.

``run_fixtures(overrides={"ising": datum})`` swaps a built-in datum for a
caller-supplied one, which is how a broken datum is shown to be caught.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .galois import builtin_group, character_degree_check, enumerate_subgroups, degree_ledger
from .modular_data import (
    BUILTIN_LATTICES,
    build_affine_sl2,
    build_ising,
    build_minimal_model,
    builtin_lattice,
    min_weight_label,
    validate,
)
from .qdim import affine_qdim_weyl, affine_sl2_crosscheck, all_qdims, global_dimension, is_simple_current
from .qseries import (
    all_limits,
    eta_quotient_series,
    generic_c1_character,
    l1_fusion_check,
    lattice_theta_series,
    limit_abel,
    limit_partial_sum_ratio,
    virasoro_c1_character,
)
from .spectral import bipartite_double, spectral_radius, verify_possible_values
from .verlinde import fusion_from_smatrix, tensor_decompose

__all__ = ["FixtureResult", "FIXTURES", "run_fixtures"]

PHI = 2 * math.cos(math.pi / 5)


@dataclass(frozen=True)
class FixtureResult:
    key: str
    topic: str
    passed: bool
    detail: str
    seconds: float


class _Context:
    def __init__(self, overrides=None, truncation=800):
        self.overrides = dict(overrides or {})
        self.truncation = truncation
        self._cache = {}

    def datum(self, key):
        if key in self.overrides:
            return self.overrides[key]
        if key not in self._cache:
            kind, *args = key.split(":")
            if kind == "ising":
                md = build_ising()
            elif kind == "minimal":
                md = build_minimal_model(int(args[0]), int(args[1]))
            elif kind == "sl2":
                md = build_affine_sl2(int(args[0]))
            else:
                md = builtin_lattice(args[0])
            self._cache[key] = md
        return self._cache[key]


def _close(a, b, tol):
    return abs(float(a) - float(b)) < tol


def _ising_smatrix(ctx):
    md = ctx.datum("ising")
    s = md.s_matrix
    ok = _close(s[0, 2].real, math.sqrt(2) / 2, 1e-12) and validate(md, 1e-12).passed
    return ok, f"S[0][2]={float(s[0, 2].real):.10f}"


def _ising_qdim(ctx):
    dims = [float(d) for d in all_qdims(ctx.datum("ising"))]
    ok = all(_close(x, y, 1e-10) for x, y in zip(dims, (1, 1, math.sqrt(2))))
    return ok, f"dims={[round(d, 10) for d in dims]}"


def _ising_qdim_fusion(ctx):
    md = ctx.datum("ising")
    ft = fusion_from_smatrix(md)
    sigma = md.index("1/16")
    # sigma x sigma = 1 + eps, both simple currents of dimension 1
    parts = tensor_decompose(ft, sigma, sigma)
    value = math.sqrt(len(parts))
    return _close(value, math.sqrt(2), 1e-10) and parts == [0, md.index("1/2")], f"sqrt({len(parts)})"


def _ising_fusion(ctx):
    md = ctx.datum("ising")
    ft = fusion_from_smatrix(md)
    v, e, s = 0, md.index("1/2"), md.index("1/16")
    rules = [
        np.array_equal(ft.entries[v], np.eye(3, dtype=int)),
        tensor_decompose(ft, e, e) == [v],
        tensor_decompose(ft, e, s) == [s],
        tensor_decompose(ft, s, s) == [v, e],
    ]
    return all(rules), f"rules={rules}"


def _ising_global(ctx):
    g = global_dimension(ctx.datum("ising"))
    return _close(g.value, 4, 1e-10) and g.residual < 1e-10, f"glob={float(g.value)}"


def _lee_yang(ctx):
    md = ctx.datum("minimal:2:5")
    k = min_weight_label(md)
    s = md.s_matrix
    expected = (math.sqrt(4 / 5) * math.sin(4 * math.pi / 5), -math.sqrt(4 / 5) * math.sin(8 * math.pi / 5))
    ok = (md.weights == (0, Fraction(-1, 5)) and md.labels[k] == "(1,2)"
          and _close(s[0, k].real, expected[0], 1e-12) and _close(s[1, k].real, expected[1], 1e-12))
    return ok, f"weights={[str(w) for w in md.weights]} min={md.labels[k]}"


def _lee_yang_qdim(ctx):
    d = all_qdims(ctx.datum("minimal:2:5"))
    ok = _close(d[0].value, 1, 1e-9) and _close(d[1].value, PHI, 1e-9) and d[1].tag == "TwoCosPiOver(5)"
    return ok, f"qdim={float(d[1].value):.10f} {d[1].tag}"


def _m35(ctx):
    md = ctx.datum("minimal:3:5")
    k = min_weight_label(md)
    s = md.s_matrix
    c = math.sqrt(8 / 15) * math.sin(5 * math.pi / 3)
    expected = [c * math.sin(6 * math.pi / 5), -c * math.sin(12 * math.pi / 5),
                c * math.sin(18 * math.pi / 5), -c * math.sin(24 * math.pi / 5)]
    ok = (md.weights == (0, Fraction(-1, 20), Fraction(1, 5), Fraction(3, 4)) and md.labels[k] == "(1,2)"
          and all(_close(s[i, k].real, expected[i], 1e-12) for i in range(4)))
    return ok, f"weights={[str(w) for w in md.weights]}"


def _m35_qdim(ctx):
    md = ctx.datum("minimal:3:5")
    d = [float(x) for x in all_qdims(md)]
    ok = all(_close(x, y, 1e-9) for x, y in zip(d, (1, PHI, PHI, 1)))
    currents = [is_simple_current(md, i) for i in range(4)]
    return ok and currents == [True, False, False, True], f"dims={[round(x, 9) for x in d]}"


def _sl2(ctx):
    worst = 0.0
    for k in range(1, 21):
        w = affine_qdim_weyl(1, k, [1]).value
        worst = max(worst, abs(float(w) - 2 * math.cos(math.pi / (k + 2))))
        if affine_sl2_crosscheck(k, 1) >= 1e-9:
            return False, f"S-ratio mismatch at k={k}"
    return worst < 1e-10, f"max|weyl-2cos|={worst:.2e}"


def _a2_level1(ctx):
    vals = [float(affine_qdim_weyl(2, 1, lam).value) for lam in ([0, 0], [1, 0], [0, 1])]
    return all(_close(v, 1, 1e-12) for v in vals), f"values={vals}"


def _lattice_qdims(ctx):
    for name in BUILTIN_LATTICES:
        md = ctx.datum(f"lattice:{name}")
        if not all(_close(d.value, 1, 1e-9) for d in all_qdims(md)):
            return False, f"{name} has a non-unit dimension"
    return True, f"{len(BUILTIN_LATTICES)} lattices"


def _lattice_theta(ctx):
    t0 = lattice_theta_series([[2]], [0], 2000)
    t1 = lattice_theta_series([[2]], [Fraction(1, 2)], 2000)
    est = limit_partial_sum_ratio(t1, t0)
    return _close(est.value, 1, 0.05) and est.converged, f"partial-sum={est.value:.4f}"


def _heisenberg(ctx):
    n = ctx.truncation
    vals = []
    for d in (1, 2, 3):
        est = limit_abel(eta_quotient_series(d, n, Fraction(d, 2)), eta_quotient_series(d, n))
        vals.append(est.value)
    return all(v == 1.0 for v in vals), f"abel={vals}"


def _c1_quarter_squares(ctx):
    n = ctx.truncation
    vac = virasoro_c1_character(0, n)
    worst = 0.0
    for m in range(7):
        ests = all_limits(virasoro_c1_character(m, n), vac)
        worst = max(worst, *(abs(e.value - (m + 1)) for e in ests))
    return worst < 0.05, f"max|est-(m+1)|={worst:.2e}"


def _c1_generic(ctx):
    n = ctx.truncation
    ests = all_limits(generic_c1_character(n), virasoro_c1_character(0, n))
    return not any(e.converged for e in ests), f"values={[round(e.value, 2) for e in ests]}"


def _c1_fusion(ctx):
    cases = [(1, 1), (2, 1), (2, 0), (3, 0)]
    res = [l1_fusion_check(m, n, ctx.truncation) for m, n in cases]
    return all(res), f"{dict(zip(map(str, cases), res))}"


def _possible_values(ctx):
    out = []
    for key, label, n in (("ising", "1/16", 4), ("minimal:2:5", "(1,2)", 5), ("sl2:3", "j=1", 5)):
        md = ctx.datum(key)
        rep = verify_possible_values(md, fusion_from_smatrix(md))
        row = rep.rows[md.index(label)]
        out.append(rep.passed and row["coxeter"] == n and row["tag"] == f"TwoCosPiOver({n})")
    return all(out), f"{out}"


def _spectral_ising(ctx):
    md = ctx.datum("ising")
    ft = fusion_from_smatrix(md)
    rho = spectral_radius(bipartite_double(ft.entries[md.index("1/16")]))
    return _close(rho, math.sqrt(2), 1e-10), f"rho={rho:.12f}"


def _galois(ctx):
    g = builtin_group("S3")
    subs = enumerate_subgroups(g)
    order3 = next(s for s in subs if s.order == 3)
    led = degree_ledger(g, order3)
    q8 = enumerate_subgroups(builtin_group("Q8"))
    ok = (len(subs) == 6 and sum(s.is_normal for s in subs) == 3
          and (led.deg_V_over_VH, led.deg_VH_over_VG) == (3, 2)
          and all(s.is_normal for s in q8)
          and character_degree_check(g, [1, 1, 2]))
    return ok, f"S3: {len(subs)} subgroups, {sum(s.is_normal for s in subs)} Galois"


FIXTURES = [
    ("ising-smatrix", "Ising S-matrix", _ising_smatrix),
    ("ising-qdim", "Ising quantum dimensions via S", _ising_qdim),
    ("ising-qdim-fusion", "Ising sigma dimension via fusion", _ising_qdim_fusion),
    ("ising-fusion", "Ising fusion rules", _ising_fusion),
    ("ising-global", "Ising global dimension", _ising_global),
    ("ising-spectral", "Ising sigma as Perron-Frobenius radius", _spectral_ising),
    ("lee-yang-data", "(2,5) weights and S entries", _lee_yang),
    ("lee-yang-qdim", "(2,5) quantum dimension", _lee_yang_qdim),
    ("m35-data", "(3,5) weights and S entries", _m35),
    ("m35-qdim", "(3,5) quantum dimensions and simple currents", _m35_qdim),
    ("sl2-qdim", "affine sl2 fundamental weight, k = 1..20", _sl2),
    ("a2-level1", "affine sl3 level 1 simple currents", _a2_level1),
    ("lattice-qdim", "lattice modules are simple currents", _lattice_qdims),
    ("lattice-theta", "theta quotient limit for A1", _lattice_theta),
    ("heisenberg-qdim", "Heisenberg modules have dimension 1", _heisenberg),
    ("c1-quarter-square", "L(1, m^2/4) has dimension m+1", _c1_quarter_squares),
    ("c1-generic", "L(1, h) generic has infinite dimension", _c1_generic),
    ("c1-fusion", "L(1, m^2) fusion is multiplicative", _c1_fusion),
    ("possible-values", "2cos(pi/n) values match ADE graphs", _possible_values),
    ("galois-ledger", "orbifold degrees and Galois flags", _galois),
]


def run_fixtures(overrides=None, truncation: int = 800) -> list:
    ctx = _Context(overrides, truncation)
    results = []
    for key, topic, fn in FIXTURES:
        t0 = time.perf_counter()
        try:
            ok, detail = fn(ctx)
        except Exception as exc:  # a fixture crashing is a failed fixture
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(FixtureResult(key, topic, bool(ok), detail, time.perf_counter() - t0))
    return results
