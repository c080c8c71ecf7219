"""Finite-group side of the orbifold Galois correspondence.

Groups are multiplication tables on ``0..n-1``. Subgroups are enumerated by
closing generator sets; the VOA-side objects ``V^H`` are represented only by
their degrees ``[V : V^H] = |H|`` and ``[V^H : V^G] = [G : H]``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    InputError,
    MissingInverse,
    NoIdentity,
    NotAssociative,
    NotLatinSquare,
    NotSubgroup,
    OrderTooLarge,
)

__all__ = [
    "FiniteGroupTable",
    "SubgroupRecord",
    "DegreeLedger",
    "load_group",
    "read_group_file",
    "format_group_table",
    "builtin_group",
    "BUILTIN_GROUPS",
    "enumerate_subgroups",
    "degree_ledger",
    "galois_report",
    "conjugacy_classes",
    "character_degree_check",
]

MAX_ORDER = 64


@dataclass(frozen=True, eq=False)
class FiniteGroupTable:
    table: np.ndarray
    identity: int
    inverses: tuple
    names: tuple = ()

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])


@dataclass(frozen=True)
class SubgroupRecord:
    elements: tuple
    order: int
    is_normal: bool
    index_in_G: int


@dataclass(frozen=True)
class DegreeLedger:
    deg_V_over_VH: int
    deg_VH_over_VG: int


def load_group(table, names=None) -> FiniteGroupTable:
    """Validate a Cayley table exhaustively (associativity is O(n^3))."""
    try:
        t = np.array(table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise NotLatinSquare(f"table is not an integer array: {exc}") from exc
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotLatinSquare(f"table must be square and non-empty, got shape {t.shape}")
    n = t.shape[0]
    full = np.arange(n)
    for row in range(n):
        if not np.array_equal(np.sort(t[row]), full) or not np.array_equal(np.sort(t[:, row]), full):
            raise NotLatinSquare(f"row or column {row} is not a permutation of 0..{n - 1}")
    ids = [e for e in range(n) if np.array_equal(t[e], full) and np.array_equal(t[:, e], full)]
    if not ids:
        raise NoIdentity("no two-sided identity element")
    e = ids[0]
    # (ab)c == a(bc) for all a, b, c
    lhs = t[t[:, :, None], full[None, None, :]]
    rhs = t[full[:, None, None], t[None, :, :]]
    if not np.array_equal(lhs, rhs):
        a, b, c = (int(x) for x in np.argwhere(lhs != rhs)[0])
        raise NotAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})")
    inverses = []
    for a in range(n):
        inv = [b for b in range(n) if t[a, b] == e and t[b, a] == e]
        if not inv:
            raise MissingInverse(f"element {a} has no two-sided inverse")
        inverses.append(inv[0])
    t.setflags(write=False)
    return FiniteGroupTable(t, e, tuple(inverses), tuple(names) if names else tuple(str(i) for i in range(n)))


def read_group_file(path) -> FiniteGroupTable:
    """Plain-text table: first line the order n, then n rows of n 0-based indices."""
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    try:
        n = int(lines[0][0])
        rows = [[int(x) for x in ln] for ln in lines[1:]]
    except (IndexError, ValueError) as exc:
        raise InputError(f"cannot parse group table {path}: {exc}") from exc
    if len(rows) != n or any(len(r) != n for r in rows):
        raise NotLatinSquare(f"expected {n} rows of {n} entries")
    return load_group(rows)


def format_group_table(g: FiniteGroupTable) -> str:
    rows = [" ".join(str(int(x)) for x in row) for row in g.table]
    return "\n".join([str(g.order)] + rows) + "\n"


# --- built-in groups --------------------------------------------------------------

def _from_elements(elements, mul, names=None) -> FiniteGroupTable:
    index = {x: i for i, x in enumerate(elements)}
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    return load_group(table, names)


def _perm_group(gens) -> FiniteGroupTable:
    """Closure of permutation generators; composition ``(a*b)(x) = a(b(x))``."""
    ident = tuple(range(len(gens[0])))
    elems = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(x[g[i]] for i in range(len(g)))
                if y not in seen:
                    seen.add(y)
                    elems.append(y)
                    nxt.append(y)
        frontier = nxt
    return _from_elements(elems, lambda a, b: tuple(a[b[i]] for i in range(len(b))),
                          ["".join(map(str, p)) for p in elems])


def _cyclic(n: int) -> FiniteGroupTable:
    return load_group([[(a + b) % n for b in range(n)] for a in range(n)])


def _quaternion() -> FiniteGroupTable:
    # unit quaternions as (sign, axis) with axis in 1, i, j, k
    basis = {("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
             ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
             ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
             ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1")}
    elems = [(s, u) for u in "1ijk" for s in (1, -1)]

    def mul(a, b):
        s, u = basis[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    names = [("" if s > 0 else "-") + u for s, u in elems]
    return _from_elements(elems, mul, names)


BUILTIN_GROUPS = {
    **{f"Z{n}": (lambda n=n: _cyclic(n)) for n in range(1, 13)},
    "S3": lambda: _perm_group([(1, 0, 2), (1, 2, 0)]),
    "D4": lambda: _perm_group([(1, 2, 3, 0), (0, 3, 2, 1)]),
    "Q8": _quaternion,
    "A4": lambda: _perm_group([(1, 2, 0, 3), (1, 0, 3, 2)]),
    "Z2xZ2": lambda: _perm_group([(1, 0, 2, 3), (0, 1, 3, 2)]),
}


def builtin_group(name: str) -> FiniteGroupTable:
    try:
        return BUILTIN_GROUPS[name]()
    except KeyError:
        raise InputError(f"unknown group {name!r}; built-ins: {sorted(BUILTIN_GROUPS)}") from None


# --- subgroups ---------------------------------------------------------------------

def _closure(g: FiniteGroupTable, gens) -> frozenset:
    elems = {g.identity}
    frontier = [g.identity]
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = int(g.table[x, s])
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elems)


def _is_normal(g: FiniteGroupTable, h: frozenset) -> bool:
    t = g.table
    return all(int(t[t[x, a], g.inverses[x]]) in h for x in range(g.order) for a in h)


def _record(g: FiniteGroupTable, h: frozenset) -> SubgroupRecord:
    return SubgroupRecord(tuple(sorted(h)), len(h), _is_normal(g, h), g.order // len(h))


def enumerate_subgroups(g: FiniteGroupTable) -> list:
    """All subgroups, sorted by (order, elements).

    Starts from the cyclic subgroups and keeps adjoining one more generator
    to every subgroup found in the previous round until a round adds nothing.
    """
    if g.order > MAX_ORDER:
        raise OrderTooLarge(f"order {g.order} exceeds {MAX_ORDER}")
    found = {frozenset([g.identity])}
    layer = {_closure(g, [x]) for x in range(g.order)}
    found |= layer
    while layer:
        nxt = set()
        for h in layer:
            for x in range(g.order):
                if x not in h:
                    k = _closure(g, itertools.chain(h, [x]))
                    if k not in found:
                        nxt.add(k)
        found |= nxt
        layer = nxt
    return sorted((_record(g, h) for h in found), key=lambda r: (r.order, r.elements))


def degree_ledger(g: FiniteGroupTable, h) -> DegreeLedger:
    elems = frozenset(h.elements if isinstance(h, SubgroupRecord) else h)
    if (not elems or g.identity not in elems or any(not 0 <= x < g.order for x in elems)
            or _closure(g, elems) != elems):
        raise NotSubgroup(f"{sorted(elems)} is not a subgroup")
    return DegreeLedger(len(elems), g.order // len(elems))


def galois_report(g: FiniteGroupTable) -> list:
    """One dict per subgroup ``H``: degrees, normality, and the Galois data.

    ``V^H`` over ``V^G`` is flagged Galois exactly when ``H`` is normal, with
    group ``G/H``; ``Gal(V/V^H)`` is ``H`` itself.
    """
    rows = []
    for rec in enumerate_subgroups(g):
        led = degree_ledger(g, rec)
        rows.append({
            "elements": list(rec.elements),
            "order": rec.order,
            "index": rec.index_in_G,
            "is_normal": rec.is_normal,
            "deg_V_over_VH": led.deg_V_over_VH,
            "deg_VH_over_VG": led.deg_VH_over_VG,
            "galois_extension": rec.is_normal,
            "gal_VH_over_VG_order": rec.index_in_G if rec.is_normal else None,
            "gal_V_over_VH_order": rec.order,
        })
    return rows


def conjugacy_classes(g: FiniteGroupTable) -> list:
    t = g.table
    left = set(range(g.order))
    classes = []
    while left:
        a = min(left)
        cls = {int(t[t[x, a], g.inverses[x]]) for x in range(g.order)}
        classes.append(sorted(cls))
        left -= cls
    return classes


def character_degree_check(g: FiniteGroupTable, degrees) -> bool:
    """``sum d^2 == |G|`` and one degree per conjugacy class."""
    degrees = [int(d) for d in degrees]
    if any(d < 1 for d in degrees):
        return False
    return sum(d * d for d in degrees) == g.order and len(degrees) == len(conjugacy_classes(g))
