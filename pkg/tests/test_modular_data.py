import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from catalog import build, family_specs
from fusionkit.errors import (
    AmbiguousMinimalWeight,
    InvalidCoset,
    MalformedDatum,
    NotCoprime,
    NotEvenLattice,
    NotPositiveDefinite,
    OutOfRange,
    WrongCosetCount,
)
from fusionkit.modular_data import (
    ModularDatum,
    build_lattice,
    build_minimal_model,
    datum_from_json,
    dual_cosets,
    kac_labels,
    kac_weight,
    min_weight_label,
    minimal_central_charge,
    validate,
)


@pytest.mark.parametrize("spec", family_specs())
def test_builtin_validates(spec):
    md = build(spec)
    report = validate(md)
    assert report.passed, report.failures()
    assert report.max_residual < 1e-12


@pytest.mark.parametrize("spec", family_specs())
def test_s_matrix_unitary_and_symmetric(spec):
    s = build(spec).s_matrix.astype(complex)
    assert_allclose(s, s.T, atol=1e-14)
    assert_allclose(s @ s.conj().T, np.eye(len(s)), atol=1e-13)


def test_ising_matrix():
    s = build("ising").s_matrix.astype(complex)
    r = math.sqrt(2)
    expected = 0.5 * np.array([[1, 1, r], [1, 1, -r], [r, -r, 0]])
    assert_allclose(s, expected, atol=1e-15)


def test_minimal_model_kac_table():
    md = build_minimal_model(3, 4)
    assert md.central_charge == Fraction(1, 2)
    assert sorted(md.weights) == [0, Fraction(1, 16), Fraction(1, 2)]
    assert md.size == 3


@given(st.integers(2, 9), st.integers(3, 12))
@settings(max_examples=60, deadline=None)
def test_kac_table_size_and_symmetry(p, q):
    if math.gcd(p, q) != 1:
        with pytest.raises(NotCoprime):
            build_minimal_model(p, q)
        return
    p, q = min(p, q), max(p, q)
    labels = kac_labels(p, q)
    assert len(labels) == (p - 1) * (q - 1) // 2
    for m, n in labels:
        assert kac_weight(p, q, m, n) == kac_weight(p, q, p - m, q - n)
    assert minimal_central_charge(p, q) == 1 - Fraction(6 * (p - q) ** 2, p * q)


def test_lee_yang_min_weight_row():
    md = build("minimal:2:5")
    assert md.weights == (0, Fraction(-1, 5))
    assert md.labels[min_weight_label(md)] == "(1,2)"


def test_lattice_true_weights_break_ties():
    md = build("lattice:A2")
    # both non-trivial cosets have weight 1/3; the vacuum still wins
    assert min_weight_label(md) == 0


def test_ambiguous_min_weight():
    md = build("ising")
    tied = ModularDatum(md.labels, (Fraction(0), Fraction(0), Fraction(1, 16)), md.central_charge,
                        md.s_matrix, md.conjugation)
    with pytest.raises(AmbiguousMinimalWeight):
        min_weight_label(tied)


@pytest.mark.parametrize("spec", ["ising", "minimal:3:5", "sl2:4", "lattice:A2", "lattice:G7"])
def test_json_round_trip(spec):
    md = build(spec)
    back = datum_from_json(md.to_json())
    assert back.labels == md.labels and back.weights == md.weights
    assert back.conjugation == md.conjugation
    assert_allclose(back.s_matrix.astype(complex), md.s_matrix.astype(complex), rtol=1e-14, atol=1e-15)
    assert validate(back).passed


def test_perturbed_datum_fails_validation():
    md = build("ising")
    s = md.s_matrix.copy()
    s[0, 2] += 1e-3
    s[2, 0] += 1e-3
    report = validate(md.with_s_matrix(s))
    assert not report.passed
    assert "s_squared_is_conjugation" in [c.name for c in report.failures()]


def test_malformed_json():
    with pytest.raises(MalformedDatum):
        datum_from_json('{"labels": ["0"]}')


@pytest.mark.parametrize("gram,err", [
    ([[1]], NotEvenLattice),
    ([[2, 3], [3, 2]], NotPositiveDefinite),
    ([[2, 1], [0, 2]], NotPositiveDefinite),
])
def test_bad_gram(gram, err):
    with pytest.raises(err):
        build_lattice(gram)


def test_lattice_coset_errors():
    with pytest.raises(WrongCosetCount):
        build_lattice([[4]], [[0], [Fraction(1, 4)]])
    with pytest.raises(InvalidCoset):
        build_lattice([[4]], [[0], [Fraction(1, 3)], [Fraction(1, 2)], [Fraction(3, 4)]])


@pytest.mark.parametrize("gram,det", [([[2]], 2), ([[2, -1], [-1, 2]], 3), ([[4, 2], [2, 4]], 12),
                                      ([[2, 0, 0], [0, 2, -1], [0, -1, 2]], 6)])
def test_dual_cosets_count(gram, det):
    assert len(dual_cosets(gram)) == det


def test_lattice_s_entries_are_phases():
    md = build("lattice:G12")
    s = md.s_matrix.astype(complex)
    assert_allclose(np.abs(s), np.full(s.shape, 1 / math.sqrt(12)), atol=1e-15)
