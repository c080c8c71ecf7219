"""Perron-Frobenius radii of fusion matrices and ADE classification of the
graphs they define."""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NoConvergence
from .modular_data import ModularDatum, _fmt
from .qdim import TWO_COS, qdim_from_smatrix
from .verlinde import FusionTensor

__all__ = [
    "SymmetricGraphMatrix",
    "AdeComponent",
    "AdeClassification",
    "bipartite_double",
    "spectral_radius",
    "fusion_matrix_radius",
    "ade_classify",
    "ade_adjacency",
    "coxeter_number",
    "verify_possible_values",
    "to_dot",
]

NOT_ADE = "NotADE"


@dataclass(frozen=True, eq=False)
class SymmetricGraphMatrix:
    entries: np.ndarray
    names: tuple = ()

    def __post_init__(self):
        e = np.array(self.entries, dtype=np.int64)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError(f"adjacency matrix must be square, got shape {e.shape}")
        if not np.array_equal(e, e.T):
            raise ValueError("adjacency matrix must be symmetric")
        if np.any(e < 0):
            raise ValueError("adjacency matrix must be non-negative")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)
        if not self.names:
            object.__setattr__(self, "names", tuple(str(i) for i in range(e.shape[0])))

    @property
    def size(self) -> int:
        return self.entries.shape[0]


def bipartite_double(ni) -> SymmetricGraphMatrix:
    """``[[0, N], [N^T, 0]]`` with vertices ``row:j`` then ``col:k``."""
    n = np.asarray(ni, dtype=np.int64)
    if n.ndim != 2 or n.shape[0] != n.shape[1]:
        raise ValueError("fusion matrix must be square")
    d = n.shape[0]
    z = np.zeros((d, d), dtype=np.int64)
    names = tuple(f"row:{j}" for j in range(d)) + tuple(f"col:{k}" for k in range(d))
    return SymmetricGraphMatrix(np.block([[z, n], [n.T, z]]), names)


def spectral_radius(m, tol: float = 1e-14, max_iter: int = 100_000) -> float:
    """Perron-Frobenius eigenvalue of a non-negative symmetric matrix.

    Deterministic power iteration on ``M + I`` from the all-ones vector; the
    shift breaks the ``+-rho`` tie that bipartite spectra have.
    """
    a = m.entries if isinstance(m, SymmetricGraphMatrix) else np.asarray(m)
    if a.size == 0:
        return 0.0
    value, _, ok = kernels.power_iteration(a, 1.0, tol, max_iter)
    if not ok:
        raise NoConvergence(f"power iteration did not settle within {max_iter} steps")
    return value


def fusion_matrix_radius(ni) -> float:
    """``rho(N)`` for a normal ``N``, as ``sqrt(rho(N^T N))``."""
    n = np.asarray(ni, dtype=np.int64)
    return math.sqrt(spectral_radius(n.T @ n))


# --- ADE catalog ------------------------------------------------------------------

def coxeter_number(kind: str, n: int | None = None) -> int:
    if kind == "A":
        return n + 1
    if kind == "D":
        return 2 * n - 2
    return {"E6": 12, "E7": 18, "E8": 30}[kind]


def ade_adjacency(kind: str, n: int | None = None) -> np.ndarray:
    """Adjacency matrix of the Dynkin diagram ``A_n`` (n >= 1), ``D_n`` (n >= 4) or ``E6/E7/E8``."""
    if kind == "A":
        edges = [(i, i + 1) for i in range(n - 1)]
        size = n
    elif kind == "D":
        # path 0..n-2 with an extra leaf n-1 attached to vertex n-3
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
        size = n
    elif kind in ("E6", "E7", "E8"):
        size = int(kind[1])
        edges = [(i, i + 1) for i in range(size - 2)] + [(2, size - 1)]
    else:
        raise ValueError(f"unknown Dynkin type {kind!r}")
    a = np.zeros((size, size), dtype=np.int64)
    for i, j in edges:
        a[i, j] = a[j, i] = 1
    return a


@dataclass(frozen=True)
class AdeComponent:
    kind: str
    n: int | None
    vertices: tuple
    norm: float

    @property
    def name(self) -> str:
        if self.kind in ("A", "D"):
            return f"{self.kind}({self.n})"
        return self.kind

    @property
    def coxeter(self) -> int | None:
        if self.kind == NOT_ADE:
            return None
        return coxeter_number(self.kind, self.n)


@dataclass(frozen=True)
class AdeClassification:
    components: tuple

    @property
    def all_ade(self) -> bool:
        return all(c.kind != NOT_ADE for c in self.components)

    def largest(self) -> AdeComponent:
        return max(self.components, key=lambda c: c.norm)

    def names(self) -> list:
        return sorted(c.name for c in self.components)


def _components(a: np.ndarray) -> list:
    n = a.shape[0]
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        comp, queue = [], deque([s])
        seen[s] = True
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in np.nonzero(a[v])[0]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(int(w))
        out.append(sorted(comp))
    return out


def _shape(sub: np.ndarray):
    """Match a connected simple graph against the A/D/E catalog by structure."""
    v = sub.shape[0]
    deg = sub.sum(axis=1)
    if int(sub.sum()) // 2 != v - 1:
        return None  # contains a cycle
    if v == 1 or deg.max() <= 2:
        return "A", v
    branch = np.nonzero(deg >= 3)[0]
    if deg.max() > 3 or len(branch) != 1:
        return None
    c = int(branch[0])
    arms = []
    for start in np.nonzero(sub[c])[0]:
        prev, cur, length = c, int(start), 1
        while True:
            nxt = [int(w) for w in np.nonzero(sub[cur])[0] if w != prev]
            if not nxt:
                break
            prev, cur, length = cur, nxt[0], length + 1
        arms.append(length)
    arms = tuple(sorted(arms))
    if arms[:2] == (1, 1):
        return "D", v
    return {(1, 2, 2): ("E6", None), (1, 2, 3): ("E7", None), (1, 2, 4): ("E8", None)}.get(arms)


def ade_classify(g) -> AdeClassification:
    """Split into connected components and name each one.

    Components with a multiple edge (norm at least 2) or a loop are ``NotADE``
    straight away; loops cannot occur in a bipartite double. Simple
    components are matched structurally.
    """
    if not isinstance(g, SymmetricGraphMatrix):
        g = SymmetricGraphMatrix(g)
    a = g.entries
    comps = []
    for verts in _components(a):
        sub = a[np.ix_(verts, verts)]
        names = tuple(g.names[v] for v in verts)
        shape = None
        if sub.max(initial=0) <= 1 and not np.any(np.diag(sub)):
            shape = _shape(sub)
        if shape is None:
            comps.append(AdeComponent(NOT_ADE, None, names, spectral_radius(sub)))
        else:
            kind, n = shape
            h = coxeter_number(kind, n)
            comps.append(AdeComponent(kind, n, names, 2 * math.cos(math.pi / h)))
    return AdeClassification(tuple(comps))


# --- possible values ------------------------------------------------------------

@dataclass(frozen=True)
class PossibleValuesReport:
    rows: tuple
    violations: tuple

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"passed": self.passed, "rows": list(self.rows), "violations": list(self.violations)}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def verify_possible_values(md: ModularDatum, ft: FusionTensor, tol: float = 1e-8,
                           classify_tol: float = 1e-6) -> PossibleValuesReport:
    """For each label compare the Perron-Frobenius radius of its fusion matrix
    with the S-ratio quantum dimension, and below 2 check that the graph is a
    union of ADE diagrams whose Coxeter number matches the ``2cos(pi/n)`` tag."""
    rows, violations = [], []
    for i in range(md.size):
        ni = ft.entries[i]
        dbl = bipartite_double(ni)
        rho = spectral_radius(dbl)
        rho_n = fusion_matrix_radius(ni)
        qd = qdim_from_smatrix(md, i, classify_tol)
        row = {
            "label": md.labels[i],
            "qdim": _fmt(qd.value),
            "tag": qd.tag,
            "rho_double": _fmt(rho),
            "rho_fusion": _fmt(rho_n),
            "components": None,
            "coxeter": None,
        }
        if abs(rho - float(qd.value)) >= tol:
            violations.append(f"{md.labels[i]}: rho={rho} differs from qdim={float(qd.value)}")
        if abs(rho - rho_n) >= tol:
            violations.append(f"{md.labels[i]}: rho(double)={rho} differs from rho(N)={rho_n}")
        if rho < 2 - classify_tol:
            cls = ade_classify(dbl)
            row["components"] = cls.names()
            if not cls.all_ade:
                violations.append(f"{md.labels[i]}: non-ADE component below norm 2: {cls.names()}")
            else:
                h = cls.largest().coxeter
                row["coxeter"] = h
                if abs(2 * math.cos(math.pi / h) - float(qd.value)) >= tol:
                    violations.append(f"{md.labels[i]}: 2cos(pi/{h}) does not match qdim")
                if qd.kind == TWO_COS and qd.order != h:
                    violations.append(f"{md.labels[i]}: tag {qd.tag} but Coxeter number {h}")
        rows.append(row)
    return PossibleValuesReport(tuple(rows), tuple(violations))


def to_dot(g: SymmetricGraphMatrix, name: str = "G") -> str:
    """Undirected DOT graph; multi-edges carry a ``label``."""
    lines = [f'graph "{name}" {{']
    for v in g.names:
        lines.append(f'  "{v}";')
    a = g.entries
    for i in range(g.size):
        for j in range(i, g.size):
            m = int(a[i, j])
            if m:
                attr = f' [label="{m}"]' if m > 1 else ""
                lines.append(f'  "{g.names[i]}" -- "{g.names[j]}"{attr};')
    lines.append("}")
    return "\n".join(lines) + "\n"
