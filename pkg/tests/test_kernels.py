"""The numba and numpy paths must agree on every kernel."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from catalog import build
from fusionkit import kernels
from fusionkit._accel import NUMBA_AVAILABLE
from fusionkit.modular_data import BUILTIN_LATTICES, dual_cosets
from fusionkit.verlinde import fusion_from_smatrix

needs_numba = pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba not installed")


@needs_numba
@pytest.mark.parametrize("spec", ["ising", "minimal:3:5", "minimal:5:12", "sl2:7", "lattice:G12"])
def test_verlinde_parity(spec):
    md = build(spec)
    s = md.s_matrix.astype(np.complex128)
    s_inv = md.s_inverse().astype(np.complex128)
    np.testing.assert_allclose(kernels.verlinde_tensor_jit(s, s_inv),
                               kernels.verlinde_tensor_numpy(s, s_inv), atol=1e-12)


@needs_numba
@given(st.integers(0, 10**6))
@settings(max_examples=50, deadline=None)
def test_power_iteration_parity(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 15))
    m = rng.integers(0, 3, size=(n, n)).astype(float)
    m = np.triu(m) + np.triu(m, 1).T
    a = kernels.power_iteration_jit(m, 1.0, 1e-14, 100_000)
    b = kernels.power_iteration_numpy(m, 1.0, 1e-14, 100_000)
    assert abs(a[0] - b[0]) < 1e-12 and a[2] == b[2]


@needs_numba
@pytest.mark.parametrize("name", sorted(BUILTIN_LATTICES))
def test_theta_parity(name):
    gram = np.array(BUILTIN_LATTICES[name], dtype=np.int64)
    det = int(round(np.linalg.det(gram)))
    for coset in dual_cosets(BUILTIN_LATTICES[name]):
        den = int(np.lcm.reduce([x.denominator for x in coset]))
        numer = np.array([int(x * den) for x in coset], dtype=np.int64)
        bounds = np.full(len(gram), 6, dtype=np.int64)
        a = kernels.theta_slot_counts_jit(gram, numer, np.int64(den), np.int64(det), bounds, 80)
        b = kernels.theta_slot_counts_numpy(gram, numer, np.int64(den), np.int64(det), bounds, 80)
        np.testing.assert_array_equal(a[0], b[0])
        assert a[1] == b[1]


@needs_numba
@pytest.mark.parametrize("spec", ["ising", "minimal:4:7", "sl2:9", "lattice:A1A1A1"])
def test_associativity_parity(spec):
    n = fusion_from_smatrix(build(spec)).entries
    d = len(n)
    triples = np.array([(i, j, k) for i in range(d) for j in range(d) for k in range(d)], dtype=np.int64)
    assert kernels.associativity_defect_jit(n, triples) == kernels.associativity_defect_numpy(n, triples) == 0
    bad = n.copy()
    bad[1, 1] = np.roll(bad[1, 1], 1)
    assert kernels.associativity_defect_jit(bad, triples) == kernels.associativity_defect_numpy(bad, triples)


def test_backend_flag():
    assert kernels.BACKEND in ("numba", "numpy")
