import itertools

import numpy as np
import pytest

from catalog import MINIMAL_PQ, build, family_specs, sl2_fusion
from fusionkit.errors import NonIntegerFusion
from fusionkit.modular_data import kac_labels
from fusionkit.verlinde import (
    FusionTensor,
    check_fusion_axioms,
    fusion_csv,
    fusion_from_smatrix,
    fusion_matrix,
    tensor_decompose,
    verify_diagonalization,
)


def test_ising_rules():
    md = build("ising")
    ft = fusion_from_smatrix(md)
    v, e, s = 0, md.index("1/2"), md.index("1/16")
    assert tensor_decompose(ft, e, e) == [v]
    assert tensor_decompose(ft, e, s) == [s]
    assert tensor_decompose(ft, s, s) == [v, e]
    assert ft.entries.dtype == np.int64


@pytest.mark.parametrize("k", range(1, 11))
def test_sl2_matches_oracle(k):
    ft = fusion_from_smatrix(build(f"sl2:{k}"))
    oracle = np.array([[[sl2_fusion(k, a, b, c) for c in range(k + 1)] for b in range(k + 1)]
                       for a in range(k + 1)])
    np.testing.assert_array_equal(ft.entries, oracle)


@pytest.mark.parametrize("p,q", MINIMAL_PQ)
def test_minimal_matches_oracle(p, q):
    # N = sl2_{p-2} x sl2_{q-2} rule, summed over both Kac representatives of the target
    md = build(f"minimal:{p}:{q}")
    labels = kac_labels(p, q)
    ft = fusion_from_smatrix(md)

    def n(a, b, c):
        (m1, n1), (m2, n2), (m3, n3) = a, b, c
        return sum(sl2_fusion(p - 2, m1 - 1, m2 - 1, x - 1) * sl2_fusion(q - 2, n1 - 1, n2 - 1, y - 1)
                   for x, y in ((m3, n3), (p - m3, q - n3)))

    oracle = np.array([[[n(a, b, c) for c in labels] for b in labels] for a in labels])
    np.testing.assert_array_equal(ft.entries, oracle)


@pytest.mark.parametrize("spec", family_specs())
def test_axioms(spec):
    md = build(spec)
    ft = fusion_from_smatrix(md)
    result = check_fusion_axioms(ft, md.conjugation)
    assert all(result.values()), result
    assert ft.max_residual < 1e-9


@pytest.mark.parametrize("spec", ["ising", "minimal:3:5", "sl2:5", "lattice:A3", "minimal:5:12"])
def test_s_diagonalizes_fusion_matrices(spec):
    md = build(spec)
    ft = fusion_from_smatrix(md)
    assert max(verify_diagonalization(md, ft, i) for i in range(md.size)) < 1e-10


def test_lattice_fusion_is_group_law():
    md = build("lattice:Z6")
    ft = fusion_from_smatrix(md)
    for i, j in itertools.product(range(6), repeat=2):
        assert len(tensor_decompose(ft, i, j)) == 1


def test_fusion_matrix_row():
    ft = fusion_from_smatrix(build("ising"))
    np.testing.assert_array_equal(fusion_matrix(ft, 2), [[0, 0, 1], [0, 0, 1], [1, 1, 0]])


def test_non_integer_fusion_detected():
    md = build("ising")
    s = md.s_matrix.copy()
    s[1, 2] *= 0.9
    s[2, 1] *= 0.9
    with pytest.raises(NonIntegerFusion) as info:
        fusion_from_smatrix(md.with_s_matrix(s))
    assert "N_" in str(info.value) or info.value.args


def test_round_trip_and_csv():
    ft = fusion_from_smatrix(build("minimal:3:5"))
    back = FusionTensor.from_dict(ft.to_dict())
    np.testing.assert_array_equal(back.entries, ft.entries)
    assert back.labels == ft.labels
    lines = fusion_csv(ft).strip().splitlines()
    assert lines[0].startswith("i,j")
    assert len(lines) == 1 + 4 * 4
