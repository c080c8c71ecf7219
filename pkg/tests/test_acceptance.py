"""Release gate: one pass/fail line per acceptance criterion (printed in the
pytest terminal summary, and to stdout when run as a script)."""
import itertools
import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from catalog import MINIMAL_PQ, build, family_specs, is_unitary_spec, sympy_radius
from fusionkit.cli import main
from fusionkit.galois import builtin_group, character_degree_check, enumerate_subgroups, galois_report
from fusionkit.modular_data import BUILTIN_LATTICES, min_weight_label, validate
from fusionkit.qdim import (
    TWO_COS,
    affine_qdim_weyl,
    affine_sl2_crosscheck,
    all_qdims,
    check_multiplicativity,
    global_dimension,
    is_simple_current,
)
from fusionkit.qseries import (
    all_limits,
    eta_quotient_series,
    generic_c1_character,
    lattice_theta_series,
    limit_abel,
    limit_partial_sum_ratio,
    virasoro_c1_character,
)
from fusionkit.spectral import bipartite_double, fusion_matrix_radius, spectral_radius, verify_possible_values
from fusionkit.verlinde import check_fusion_axioms, fusion_from_smatrix, tensor_decompose

RESULTS = {}
PHI = 2 * math.cos(math.pi / 5)


def record(n, ok, detail):
    RESULTS[n] = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    assert ok, RESULTS[n]


@pytest.fixture(scope="module", autouse=True)
def warm_kernels():
    # compile (or load cached) numba kernels so timings measure the computation
    md = build("minimal:3:5")
    fusion_from_smatrix(md)
    spectral_radius(np.eye(2))
    lattice_theta_series([[2]], [0], 4)


def _quiet_main(capsys, *argv):
    code = main(list(argv))
    out, _ = capsys.readouterr()
    return code, out


def test_c01_ising_qdims(capsys):
    t0 = time.perf_counter()
    code, out = _quiet_main(capsys, "qdim", "ising", "--format", "json")
    md = build("ising")
    parts = tensor_decompose(fusion_from_smatrix(md), 2, 2)
    via_fusion = math.sqrt(sum(float(all_qdims(md)[k].value) for k in parts))
    elapsed = time.perf_counter() - t0
    dims = [float(d.value) for d in all_qdims(md)]
    err = max(abs(x - y) for x, y in zip(dims, (1, 1, math.sqrt(2))))
    ok = (code == 0 and err < 1e-10 and abs(via_fusion - math.sqrt(2)) < 1e-10 and elapsed < 1
          and [r["qdim"] for r in json.loads(out)["rows"]][2] == 1.4142135623731)
    record(1, ok, f"max err {err:.1e}, fusion route {via_fusion:.12f}, {elapsed:.3f} s")


def test_c02_ising_fusion():
    t0 = time.perf_counter()
    md = build("ising")
    ft = fusion_from_smatrix(md)
    v, e, s = 0, md.index("1/2"), md.index("1/16")
    rules = [all(tensor_decompose(ft, v, j) == [j] for j in range(3)),
             tensor_decompose(ft, e, e) == [v],
             tensor_decompose(ft, e, s) == [s],
             tensor_decompose(ft, s, s) == [v, e]]
    elapsed = time.perf_counter() - t0
    record(2, all(rules) and ft.entries.dtype == np.int64 and elapsed < 1, f"rules {rules}, {elapsed:.3f} s")


def test_c03_lee_yang():
    md = build("minimal:2:5")
    k = min_weight_label(md)
    d = all_qdims(md)[md.index("(1,2)")]
    err = abs(float(d.value) - PHI)
    record(3, md.labels[k] == "(1,2)" and err < 1e-9 and d.tag == "TwoCosPiOver(5)",
           f"min row {md.labels[k]}, err {err:.1e}, {d.tag}")


def test_c04_m35():
    md = build("minimal:3:5")
    dims = [float(d.value) for d in all_qdims(md)]
    err = max(abs(x - y) for x, y in zip(dims, (1, PHI, PHI, 1)))
    currents = [md.labels[i] for i in range(md.size) if is_simple_current(md, i)]
    weights = sorted(str(md.weights[md.index(lab)]) for lab in currents)
    record(4, err < 1e-9 and weights == ["0", "3/4"], f"err {err:.1e}, simple currents {currents}")


def test_c05_affine_sl2():
    weyl = max(abs(float(affine_qdim_weyl(1, k, [1]).value) - 2 * math.cos(math.pi / (k + 2))) for k in range(1, 21))
    cross = max(affine_sl2_crosscheck(k, 1) for k in range(1, 21))
    record(5, weyl < 1e-10 and cross < 1e-9, f"q-Weyl err {weyl:.1e}, S-ratio err {cross:.1e}")


def test_c06_global_dimension():
    g = global_dimension(build("ising"))
    worst = max(global_dimension(build(s)).residual for s in family_specs() if is_unitary_spec(s))
    ok = abs(float(g.value) - 4) < 1e-10 and g.residual < 1e-10 and worst < 1e-8
    record(6, ok, f"Ising glob {float(g.value)}, worst unitary residual {worst:.1e}")


def test_c07_multiplicativity():
    specs = ["ising"] + [f"minimal:{p}:{q}" for p, q in MINIMAL_PQ] + [f"sl2:{k}" for k in range(1, 11)]
    worst = max(check_multiplicativity(build(s), fusion_from_smatrix(build(s))) for s in specs)
    record(7, worst < 1e-8, f"{len(specs)} families, worst residual {worst:.1e}")


def test_c08_spectral_agreement():
    worst_q = worst_d = 0.0
    labels = 0
    for spec in family_specs():
        md = build(spec)
        ft = fusion_from_smatrix(md)
        for i, d in enumerate(all_qdims(md)):
            rho_n = fusion_matrix_radius(ft.entries[i])
            rho_d = spectral_radius(bipartite_double(ft.entries[i]))
            worst_q = max(worst_q, abs(rho_n - float(d.value)))
            worst_d = max(worst_d, abs(rho_d - rho_n))
            labels += 1
    record(8, worst_q < 1e-8 and worst_d < 1e-8,
           f"{labels} labels, |rho(N)-qdim| {worst_q:.1e}, |rho(double)-rho(N)| {worst_d:.1e}")


def test_c09_possible_values():
    below_two, strays, violations = 0, [], []
    for spec in family_specs():
        md = build(spec)
        rep = verify_possible_values(md, fusion_from_smatrix(md))
        violations += list(rep.violations)
        for d, lab in zip(all_qdims(md), md.labels):
            x = float(d.value)
            if x < 2 - 1e-9:
                below_two += 1
                in_family = d.kind == TWO_COS or abs(x - 1) < 1e-9
                if not in_family:
                    strays.append(f"{spec}:{lab}")
    record(9, not violations and not strays,
           f"{below_two} values below 2, {len(strays)} outside 2cos, {len(violations)} ADE violations")


def test_c10_character_limits():
    t0 = time.perf_counter()
    vac = virasoro_c1_character(0, 800)
    worst, spread, conv = 0.0, 0.0, True
    for n in range(7):
        ests = all_limits(virasoro_c1_character(n, 800), vac)
        values = [e.value for e in ests]
        worst = max(worst, *(abs(v - (n + 1)) for v in values))
        spread = max(spread, max(values) - min(values))
        conv = conv and all(e.converged for e in ests)
    heis = [limit_abel(eta_quotient_series(d, 800, Fraction(1, 2)), eta_quotient_series(d, 800)).value
            for d in (1, 2)]
    generic = all_limits(generic_c1_character(800), vac)
    diverges = not any(e.converged for e in generic)
    elapsed = time.perf_counter() - t0
    ok = worst < 0.05 and spread < 0.1 and conv and heis == [1.0, 1.0] and diverges and elapsed < 30
    record(10, ok, f"max err {worst:.1e}, spread {spread:.1e}, Heisenberg {heis}, "
                   f"generic diverges {diverges}, {elapsed:.2f} s")


def test_c11_lattice():
    est = limit_partial_sum_ratio(lattice_theta_series([[2]], [Fraction(1, 2)], 2000),
                                  lattice_theta_series([[2]], [0], 2000))
    worst = max(abs(float(d.value) - 1) for name in BUILTIN_LATTICES for d in all_qdims(build(f"lattice:{name}")))
    record(11, abs(est.value - 1) < 0.05 and worst < 1e-9,
           f"A1 partial-sum {est.value:.4f}, worst lattice qdim err {worst:.1e}")


def _subset_count(g):
    e, n = g.identity, g.order
    others = [x for x in range(n) if x != e]
    count = 0
    for size in (d for d in range(1, n + 1) if n % d == 0):
        for rest in itertools.combinations(others, size - 1):
            h = {e, *rest}
            count += all(g.mul(a, b) in h for a in h for b in h)
    return count


def test_c12_galois():
    names = ["S3", "D4", "Q8", "A4"] + [f"Z{n}" for n in range(1, 13)]
    ok = True
    for name in names:
        g = builtin_group(name)
        subs = enumerate_subgroups(g)
        ok &= len(subs) == _subset_count(g)
        ok &= all(r["deg_V_over_VH"] * r["deg_VH_over_VG"] == g.order and r["galois_extension"] == r["is_normal"]
                  for r in galois_report(g))
    s3 = enumerate_subgroups(builtin_group("S3"))
    ok &= len(s3) == 6 and sum(s.is_normal for s in s3) == 3
    ok &= character_degree_check(builtin_group("S3"), [1, 1, 2])
    record(12, ok, f"{len(names)} groups checked against the subset oracle")


def test_c13_property_suites():
    bad = []
    matrices = {}
    for spec in family_specs():
        md = build(spec)
        if not validate(md).passed:
            bad.append(f"{spec}: S axioms")
        ft = fusion_from_smatrix(md)
        if not all(check_fusion_axioms(ft, md.conjugation).values()):
            bad.append(f"{spec}: fusion axioms")
        if any(d.value < 1 - 1e-12 for d in all_qdims(md)):
            bad.append(f"{spec}: qdim < 1")
        for ni in ft.entries:
            for m in (ni.T @ ni, bipartite_double(ni).entries):
                if len(m) <= 12:
                    matrices[m.tobytes() + bytes([len(m)])] = m
    rng = np.random.default_rng(20261019)
    randoms = []
    for _ in range(200):
        n = int(rng.integers(1, 13))
        m = rng.integers(0, 4, size=(n, n)) * (rng.random((n, n)) < 0.4)
        randoms.append(np.triu(m) + np.triu(m, 1).T)
    worst = max(abs(spectral_radius(m) - sympy_radius(m)) for m in list(matrices.values()) + randoms)
    record(13, not bad and worst < 1e-9,
           f"{len(bad)} axiom failures, {len(matrices)}+200 matrices vs charpoly, worst {worst:.1e}")


def test_c14_fixture_replay(capsys):
    t0 = time.perf_counter()
    code, out = _quiet_main(capsys, "fixtures", "--format", "json")
    elapsed = time.perf_counter() - t0
    data = json.loads(out)
    failed = [f["fixture"] for f in data["fixtures"] if f["status"] != "PASS"]
    record(14, code == 0 and not failed and elapsed < 60,
           f"{len(data['fixtures'])} fixtures, failed {failed}, {elapsed:.1f} s")


if __name__ == "__main__":
    import sys
    code = pytest.main([__file__, "-q"])
    sys.exit(code)
