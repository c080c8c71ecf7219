import itertools

import numpy as np
import pytest

from fusionkit.errors import (
    NoIdentity,
    NotAssociative,
    NotLatinSquare,
    NotSubgroup,
    OrderTooLarge,
)
from fusionkit.galois import (
    BUILTIN_GROUPS,
    builtin_group,
    character_degree_check,
    conjugacy_classes,
    degree_ledger,
    enumerate_subgroups,
    format_group_table,
    galois_report,
    load_group,
    read_group_file,
)


def direct_product(g, h):
    n, m = g.order, h.order
    table = [[g.mul(a // m, b // m) * m + h.mul(a % m, b % m) for b in range(n * m)] for a in range(n * m)]
    return load_group(table)


def subset_oracle(g):
    """Every subset containing e whose size divides |G| and that is closed under the product."""
    e, n = g.identity, g.order
    others = [x for x in range(n) if x != e]
    found = []
    for size in (d for d in range(1, n + 1) if n % d == 0):
        for rest in itertools.combinations(others, size - 1):
            h = {e, *rest}
            if all(g.mul(a, b) in h for a in h for b in h):
                found.append(tuple(sorted(h)))
    return sorted(found, key=lambda t: (len(t), t))


def normal_oracle(g, h):
    return all(g.mul(g.mul(x, a), g.inverses[x]) in h for x in range(g.order) for a in h)


GROUPS = sorted(BUILTIN_GROUPS)


@pytest.mark.parametrize("name", GROUPS)
def test_subgroups_match_oracle(name):
    g = builtin_group(name)
    subs = enumerate_subgroups(g)
    assert [s.elements for s in subs] == subset_oracle(g)
    for s in subs:
        assert s.is_normal == normal_oracle(g, set(s.elements))


@pytest.mark.parametrize("name,total,normal", [
    ("S3", 6, 3), ("D4", 10, 6), ("Q8", 6, 6), ("A4", 10, 3),
    ("Z4", 3, 3), ("Z2xZ2", 5, 5), ("Z12", 6, 6), ("Z1", 1, 1),
])
def test_known_counts(name, total, normal):
    subs = enumerate_subgroups(builtin_group(name))
    assert len(subs) == total
    assert sum(s.is_normal for s in subs) == normal


@pytest.mark.parametrize("n", range(1, 13))
def test_cyclic_subgroups_are_divisors(n):
    subs = enumerate_subgroups(builtin_group(f"Z{n}"))
    assert sorted(s.order for s in subs) == [d for d in range(1, n + 1) if n % d == 0]


def test_order_16_product_matches_oracle():
    g = direct_product(builtin_group("Z4"), builtin_group("Z4"))
    assert [s.elements for s in enumerate_subgroups(g)] == subset_oracle(g)
    assert len(enumerate_subgroups(g)) == 15


def test_order_16_nonabelian():
    g = direct_product(builtin_group("D4"), builtin_group("Z2"))
    subs = enumerate_subgroups(g)
    assert [s.elements for s in subs] == subset_oracle(g)
    assert any(not s.is_normal for s in subs)


@pytest.mark.parametrize("name", GROUPS)
def test_degree_ledger(name):
    g = builtin_group(name)
    for row in galois_report(g):
        assert row["deg_V_over_VH"] * row["deg_VH_over_VG"] == g.order
        assert row["galois_extension"] == row["is_normal"]
        if row["is_normal"]:
            assert row["gal_VH_over_VG_order"] == row["index"]


def test_not_subgroup():
    g = builtin_group("S3")
    with pytest.raises(NotSubgroup):
        degree_ledger(g, [0, 1, 3])


@pytest.mark.parametrize("name,degrees", [("S3", [1, 1, 2]), ("Q8", [1, 1, 1, 1, 2]),
                                          ("A4", [1, 1, 1, 3]), ("Z5", [1] * 5), ("D4", [1, 1, 1, 1, 2])])
def test_character_degrees(name, degrees):
    assert character_degree_check(builtin_group(name), degrees)


def test_character_degree_rejects():
    g = builtin_group("S3")
    assert not character_degree_check(g, [1, 1, 1, 1, 1, 1])
    assert not character_degree_check(g, [1, 1, 1])
    assert character_degree_check(g, [2, 1, 1])
    assert len(conjugacy_classes(g)) == 3


@pytest.mark.parametrize("table,err", [
    ([[0, 1], [0, 1]], NotLatinSquare),
    ([[1, 2, 0], [0, 1, 2], [2, 0, 1]], NoIdentity),
    ([[0, 1, 2], [1, 0]], NotLatinSquare),
])
def test_bad_tables(table, err):
    with pytest.raises(err):
        load_group(table)


def test_non_associative_latin_square():
    # a loop (quasigroup with identity) of order 5 that is not a group
    table = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(NotAssociative):
        load_group(table)


def test_order_limit():
    g = load_group(np.add.outer(np.arange(65), np.arange(65)) % 65)
    with pytest.raises(OrderTooLarge):
        enumerate_subgroups(g)


def test_file_round_trip(tmp_path):
    g = builtin_group("D4")
    path = tmp_path / "d4.txt"
    path.write_text(format_group_table(g))
    back = read_group_file(path)
    np.testing.assert_array_equal(back.table, g.table)
