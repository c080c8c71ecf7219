"""Quantum dimensions: S-matrix ratios, classification, global dimension,
simple currents and the type-A q-Weyl product."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import (
    BelowOne,
    ComplexRatio,
    LevelExceeded,
    NotDominant,
    NotPositive,
    RankUnsupported,
)
from .modular_data import ModularDatum, _fmt, build_affine_sl2, min_weight_label
from .verlinde import FusionTensor

__all__ = [
    "DimensionValue",
    "GlobalDimension",
    "classify_dimension",
    "qdim_from_smatrix",
    "all_qdims",
    "global_dimension",
    "is_simple_current",
    "check_multiplicativity",
    "affine_qdim_weyl",
    "affine_sl2_crosscheck",
    "qdim_csv",
    "CLASSIFY_TOL",
]

CLASSIFY_TOL = 1e-6
IMAG_TOL = 1e-9
_MAX_N = 10**6

INTEGER = "Integer"
TWO_COS = "TwoCosPiOver"
GENERIC = "GenericAlgebraic"


@dataclass(frozen=True)
class DimensionValue:
    value: np.longdouble
    kind: str
    order: int | None = None
    residual: float = 0.0

    @property
    def tag(self) -> str:
        return self.kind if self.order is None else f"{self.kind}({self.order})"

    def __float__(self):
        return float(self.value)

    def to_dict(self) -> dict:
        return {"value": _fmt(self.value), "tag": self.tag, "residual": _fmt(self.residual)}


def classify_dimension(x, tol: float = CLASSIFY_TOL) -> DimensionValue:
    """Tag ``x`` as an integer, as ``2cos(pi/n)`` (n >= 3), or as generic.

    Integers take precedence, so 1 is ``Integer(1)`` and sqrt(2) is
    ``TwoCosPiOver(4)``. Values at or above ``2 - tol`` are never given the
    cosine tag.
    """
    xv = np.longdouble(x)
    if not xv > 0:
        raise NotPositive(f"quantum dimension must be positive, got {float(xv)}")
    if xv < 1 - tol:
        raise BelowOne(f"quantum dimension {float(xv)} < 1")
    if xv < 1:
        return DimensionValue(xv, INTEGER, 1, float(1 - xv))
    m = int(np.rint(xv))
    if m >= 1 and abs(xv - m) < tol:
        return DimensionValue(xv, INTEGER, m, float(abs(xv - m)))
    if xv < 2 - tol:
        n = int(round(math.pi / math.acos(float(xv) / 2)))
        if 3 <= n <= _MAX_N:
            exact = 2 * math.cos(math.pi / n)
            if abs(xv - exact) < tol:
                return DimensionValue(xv, TWO_COS, n, float(abs(xv - exact)))
    return DimensionValue(xv, GENERIC, None, 0.0)


def _ratio(md: ModularDatum, i: int, k: int) -> np.longdouble:
    z = md.s_matrix[i, k] / md.s_matrix[0, k]
    if abs(z.imag) >= IMAG_TOL:
        raise ComplexRatio(
            f"S[{i},{k}]/S[0,{k}] = {complex(z)} has an imaginary part; check conjugation/normalisation"
        )
    return z.real


def qdim_from_smatrix(md: ModularDatum, i, tol: float = CLASSIFY_TOL) -> DimensionValue:
    """``S[i,k] / S[0,k]`` with ``k`` the minimal-weight label (``k = 0`` when unitary)."""
    i = md.index(i)
    return classify_dimension(_ratio(md, i, min_weight_label(md)), tol)


def all_qdims(md: ModularDatum, tol: float = CLASSIFY_TOL) -> list:
    k = min_weight_label(md)
    return [classify_dimension(_ratio(md, i, k), tol) for i in range(md.size)]


@dataclass(frozen=True)
class GlobalDimension:
    value: np.longdouble
    per_module: tuple
    inverse_s00_squared: np.longdouble | None = None
    residual: float | None = None

    def to_dict(self) -> dict:
        return {
            "value": _fmt(self.value),
            "per_module": [d.to_dict() for d in self.per_module],
            "inverse_s00_squared": None if self.inverse_s00_squared is None else _fmt(self.inverse_s00_squared),
            "residual": None if self.residual is None else _fmt(self.residual),
        }


def _is_unitary(md: ModularDatum) -> bool:
    weights = md.true_weights if md.true_weights is not None else md.weights
    return all(w > 0 for w in weights[1:])


def global_dimension(md: ModularDatum, tol: float = CLASSIFY_TOL) -> GlobalDimension:
    """Sum of squared quantum dimensions; in the unitary case also ``1/S00^2``."""
    dims = tuple(all_qdims(md, tol))
    value = sum((d.value ** 2 for d in dims), np.longdouble(0))
    if _is_unitary(md):
        s00 = md.s_matrix[0, 0]
        inv = 1 / abs(s00) ** 2
        return GlobalDimension(value, dims, inv, float(abs(value - inv)))
    return GlobalDimension(value, dims)


def is_simple_current(md: ModularDatum, i, tol: float = 1e-9) -> bool:
    return bool(abs(qdim_from_smatrix(md, i).value - 1) < tol)


def check_multiplicativity(md: ModularDatum, ft: FusionTensor) -> float:
    """``max_{i,j} |sum_k N_ij^k d_k - d_i d_j|``."""
    d = np.array([x.value for x in all_qdims(md)], dtype=np.longdouble)
    lhs = ft.entries.astype(np.longdouble) @ d
    return float(np.max(np.abs(lhs - np.outer(d, d))))


def _qnumber(n: int, q) -> mpmath.mpc:
    return (q ** n - q ** (-n)) / (q - q ** (-1))


def affine_qdim_weyl(rank: int, k: int, lam) -> DimensionValue:
    """Quantum dimension of the level-``k`` integrable module of type ``A_rank``.

    ``lam`` holds Dynkin labels. Product over positive roots ``e_i - e_j`` of
    ``[<lam+rho, alpha>]_q / [<rho, alpha>]_q`` with ``q = exp(i pi/(k+rank+1))``.
    """
    if not 1 <= rank <= 8:
        raise RankUnsupported(f"type A rank must be in 1..8, got {rank}")
    lam = [int(x) for x in lam]
    if len(lam) != rank or any(x < 0 for x in lam):
        raise NotDominant(f"need {rank} non-negative Dynkin labels, got {lam}")
    if k < 1:
        raise LevelExceeded(f"level must be positive, got {k}")
    if sum(lam) > k:
        raise LevelExceeded(f"<lambda, theta> = {sum(lam)} exceeds level {k}")
    with mpmath.workdps(30):
        q = mpmath.expjpi(mpmath.mpf(1) / (k + rank + 1))
        val = mpmath.mpc(1)
        for i in range(rank):
            for j in range(i + 1, rank + 1):
                # <mu, e_i - e_j> = sum of Dynkin labels i..j-1
                num = sum(lam[i:j]) + (j - i)
                val *= _qnumber(num, q) / _qnumber(j - i, q)
        if abs(val.imag) > 1e-20:
            raise ComplexRatio(f"q-Weyl product {val} is not real")
        real = np.longdouble(mpmath.nstr(val.real, 25))
    return classify_dimension(real)


def affine_sl2_crosscheck(k: int, j: int) -> float:
    """|q-Weyl product - S-ratio| for the spin-``j/2`` module at level ``k``."""
    weyl = affine_qdim_weyl(1, k, [j]).value
    ratio = qdim_from_smatrix(build_affine_sl2(k), j).value
    return float(abs(weyl - ratio))


def qdim_csv(md: ModularDatum, tol: float = CLASSIFY_TOL) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "weight", "qdim", "tag", "simple_current"])
    for i, d in enumerate(all_qdims(md, tol)):
        w.writerow([md.labels[i], str(md.weights[i]), repr(_fmt(d.value)), d.tag, abs(d.value - 1) < 1e-9])
    return buf.getvalue()
