from catalog import build
from fusionkit.fixtures import FIXTURES, run_fixtures


def test_fresh_build_passes():
    results = run_fixtures()
    assert [r.key for r in results] == [k for k, _, _ in FIXTURES]
    failed = [(r.key, r.detail) for r in results if not r.passed]
    assert not failed


def test_perturbed_ising_is_caught():
    md = build("ising")
    s = md.s_matrix.copy()
    s[2, 0] = s[0, 2] = s[0, 2] * 1.01
    results = {r.key: r for r in run_fixtures(overrides={"ising": md.with_s_matrix(s)})}
    assert not results["ising-qdim"].passed
    assert results["lee-yang-qdim"].passed
