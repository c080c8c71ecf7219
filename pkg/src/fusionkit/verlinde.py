"""Fusion rules from the S-matrix (Verlinde formula) and fusion-ring checks."""
from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import EmptyFusionProduct, NegativeFusion, NonIntegerFusion, OutOfRange
from .modular_data import ModularDatum

__all__ = [
    "FusionTensor",
    "fusion_from_smatrix",
    "fusion_matrix",
    "verify_diagonalization",
    "tensor_decompose",
    "check_fusion_axioms",
    "fusion_csv",
    "DEFAULT_FUSION_TOL",
]

DEFAULT_FUSION_TOL = 1e-6
_EXHAUSTIVE_MAX_DIM = 12
_SAMPLED_TRIPLES = 4000


@dataclass(frozen=True, eq=False)
class FusionTensor:
    """Integer fusion rules ``entries[i, j, k] = N_{i,j}^k``.

    ``residuals`` holds ``|N_float - round(N_float)|`` per entry when the
    tensor came out of the Verlinde formula.
    """

    entries: np.ndarray
    labels: tuple = ()
    residuals: np.ndarray | None = None

    def __post_init__(self):
        e = np.array(self.entries, dtype=np.int64)
        if e.ndim != 3 or not (e.shape[0] == e.shape[1] == e.shape[2]):
            raise ValueError(f"fusion tensor must be d x d x d, got shape {e.shape}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(e.shape[0])))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def max_residual(self) -> float:
        return 0.0 if self.residuals is None else float(np.max(self.residuals))

    def to_dict(self) -> dict:
        nz = np.argwhere(self.entries)
        return {
            "dim": self.dim,
            "labels": list(self.labels),
            "entries": [[int(i), int(j), int(k), int(self.entries[i, j, k])] for i, j, k in nz],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "FusionTensor":
        n = int(d["dim"])
        e = np.zeros((n, n, n), dtype=np.int64)
        for i, j, k, v in d["entries"]:
            e[i, j, k] = v
        return cls(e, tuple(d.get("labels", ())))


def fusion_from_smatrix(md: ModularDatum, tol: float = DEFAULT_FUSION_TOL) -> FusionTensor:
    """Round the Verlinde sums to integers, raising if any sum is not near one."""
    raw = kernels.verlinde_tensor(md.s_matrix, md.s_inverse())
    rounded = np.rint(raw.real)
    resid = np.abs(raw - rounded)
    bad = np.argwhere(resid >= tol)
    if len(bad):
        i, j, k = (int(x) for x in bad[0])
        raise NonIntegerFusion(i, j, k, complex(raw[i, j, k]))
    if np.any(rounded < 0):
        i, j, k = (int(x) for x in np.argwhere(rounded < 0)[0])
        raise NegativeFusion(f"N[{i},{j}]^{k} = {int(rounded[i, j, k])} < 0")
    return FusionTensor(rounded.astype(np.int64), md.labels, resid)


def fusion_matrix(ft: FusionTensor, i: int) -> np.ndarray:
    """``N(i)``: rows indexed by ``j``, columns by ``k``."""
    if not 0 <= i < ft.dim:
        raise OutOfRange(f"label {i} out of range 0..{ft.dim - 1}")
    return ft.entries[i].copy()


def verify_diagonalization(md: ModularDatum, ft: FusionTensor, i: int) -> float:
    """Max entrywise residual of ``S^{-1} N(i) S - diag(S[i,s]/S[0,s])``."""
    s = md.s_matrix
    n = fusion_matrix(ft, i).astype(np.longdouble)
    lhs = md.s_inverse() @ n @ s
    return float(np.max(np.abs(lhs - np.diag(s[i] / s[0]))))


def tensor_decompose(ft: FusionTensor, i: int, j: int) -> list:
    """``M^i x M^j`` as a sorted list of label indices, repeated by multiplicity."""
    for x in (i, j):
        if not 0 <= x < ft.dim:
            raise OutOfRange(f"label {x} out of range 0..{ft.dim - 1}")
    row = ft.entries[i, j]
    out = [k for k in range(ft.dim) for _ in range(int(row[k]))]
    if not out:
        raise EmptyFusionProduct(f"{ft.labels[i]} x {ft.labels[j]} has no summands")
    return out


def _triples(d, rng_seed=0):
    if d <= _EXHAUSTIVE_MAX_DIM:
        return np.array(list(itertools.product(range(d), repeat=3)), dtype=np.int64)
    rng = np.random.default_rng(rng_seed)
    return rng.integers(0, d, size=(_SAMPLED_TRIPLES, 3))


def check_fusion_axioms(ft: FusionTensor, conjugation) -> dict:
    """Exact integer checks of the fusion-ring axioms.

    Returns ``{axiom: bool}`` for ``unit``, ``commutative``,
    ``transpose_conjugate`` (``N(i)^T = N(i')``) and ``associative``
    (exhaustive up to dimension 12, seeded random triples above).
    """
    n = ft.entries
    d = ft.dim
    conj = list(conjugation)
    return {
        "unit": bool(np.array_equal(n[0], np.eye(d, dtype=np.int64))),
        "commutative": bool(np.array_equal(n, n.transpose(1, 0, 2))),
        "transpose_conjugate": all(np.array_equal(n[i].T, n[conj[i]]) for i in range(d)),
        "associative": kernels.associativity_defect(n, _triples(d)) == 0,
    }


def fusion_csv(ft: FusionTensor) -> str:
    """One row per ordered pair ``(i, j)`` with the decomposition string."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "j", "decomposition"])
    for i in range(ft.dim):
        for j in range(ft.dim):
            parts = []
            for k in range(ft.dim):
                m = int(ft.entries[i, j, k])
                if m:
                    parts.append(ft.labels[k] if m == 1 else f"{m}*{ft.labels[k]}")
            w.writerow([ft.labels[i], ft.labels[j], " + ".join(parts)])
    return buf.getvalue()
