"""Modular data (labels, conformal weights, central charge, S-matrix,
conjugation) for the built-in rational VOA families.

Conformal weights and central charges are exact :class:`fractions.Fraction`
values. S-matrix entries are evaluated with mpmath and stored as
``numpy.clongdouble`` (64-bit significand on x86-64 Linux).
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .errors import (
    AmbiguousMinimalWeight,
    InvalidCoset,
    MalformedDatum,
    NotCoprime,
    NotEvenLattice,
    NotPositiveDefinite,
    OutOfRange,
    WrongCosetCount,
)

__all__ = [
    "ModularDatum",
    "ValidationReport",
    "build_minimal_model",
    "build_ising",
    "build_affine_sl2",
    "build_lattice",
    "builtin_lattice",
    "BUILTIN_LATTICES",
    "dual_cosets",
    "kac_labels",
    "kac_weight",
    "minimal_central_charge",
    "validate",
    "min_weight_label",
    "datum_from_dict",
    "datum_from_json",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-9
_MP_DPS = 30


def _ld(x) -> np.longdouble:
    """mpmath number -> longdouble without a float64 detour."""
    return np.longdouble(mpmath.nstr(mpmath.mpf(x), 25, strip_zeros=False))


def _sinpi(x: Fraction) -> np.longdouble:
    # exact reduction mod 2 keeps the argument small and makes zeros exact
    x = x - 2 * math.floor(x / 2)
    if x.denominator == 1:
        return np.longdouble(0)
    with mpmath.workdps(_MP_DPS):
        return _ld(mpmath.sinpi(mpmath.mpf(x.numerator) / x.denominator))


def _cospi(x: Fraction) -> np.longdouble:
    return _sinpi(x + Fraction(1, 2))


def _sqrt_ratio(num: int, den: int) -> np.longdouble:
    with mpmath.workdps(_MP_DPS):
        return _ld(mpmath.sqrt(mpmath.mpf(num) / den))


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, eq=False)
class ModularDatum:
    """Modular data of a rational VOA.

    ``weights`` are the conformal weights used for minimal-weight selection.
    For lattice data they are reduced mod 1 and the actual lowest weights of
    the cosets are kept in ``true_weights``.
    """

    labels: tuple
    weights: tuple
    central_charge: Fraction
    s_matrix: np.ndarray
    conjugation: tuple
    name: str = ""
    vacuum_index: int = 0
    true_weights: tuple | None = None

    def __post_init__(self):
        n = len(self.labels)
        s = np.array(self.s_matrix, dtype=np.clongdouble)
        if n < 1 or s.shape != (n, n):
            raise MalformedDatum(f"S-matrix shape {s.shape} does not match {n} labels")
        if len(self.weights) != n:
            raise MalformedDatum("one weight per label required")
        conj = tuple(int(c) for c in self.conjugation)
        if sorted(conj) != list(range(n)):
            raise MalformedDatum(f"conjugation {conj} is not a permutation")
        if any(conj[conj[i]] != i for i in range(n)):
            raise MalformedDatum("conjugation must be an involution")
        if self.vacuum_index != 0:
            raise MalformedDatum("the vacuum module must be label 0")
        weights = tuple(Fraction(w) for w in self.weights)
        if weights[0] != 0:
            raise MalformedDatum("label 0 must have conformal weight 0")
        if conj[0] != 0:
            raise MalformedDatum("the vacuum module must be self-conjugate")
        s.setflags(write=False)
        object.__setattr__(self, "s_matrix", s)
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "central_charge", Fraction(self.central_charge))
        object.__setattr__(self, "conjugation", conj)
        if self.true_weights is not None:
            object.__setattr__(self, "true_weights", tuple(Fraction(w) for w in self.true_weights))

    @property
    def size(self) -> int:
        return len(self.labels)

    def s_inverse(self) -> np.ndarray:
        """``S^{-1}[i, j] = S[i, j']`` (no numeric inversion)."""
        return self.s_matrix[:, list(self.conjugation)]

    def conjugation_matrix(self) -> np.ndarray:
        n = self.size
        c = np.zeros((n, n))
        c[np.arange(n), list(self.conjugation)] = 1
        return c

    def index(self, label) -> int:
        """Label index from an int or a display string."""
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.size:
                raise OutOfRange(f"label index {label} out of range 0..{self.size - 1}")
            return int(label)
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise OutOfRange(f"unknown label {label!r}; have {list(self.labels)}") from None

    def with_s_matrix(self, s) -> "ModularDatum":
        """Copy with a replaced S-matrix (used to build deliberately broken data)."""
        return ModularDatum(
            labels=self.labels, weights=self.weights, central_charge=self.central_charge,
            s_matrix=np.array(s, dtype=np.clongdouble), conjugation=self.conjugation,
            name=self.name, true_weights=self.true_weights,
        )

    def to_dict(self) -> dict:
        def rat(x):
            return {"num": x.numerator, "den": x.denominator}

        out = {
            "name": self.name,
            "labels": list(self.labels),
            "weights": [rat(w) for w in self.weights],
            "central_charge": rat(self.central_charge),
            "s_matrix": [[[_fmt(z.real), _fmt(z.imag)] for z in row] for row in self.s_matrix],
            "conjugation": list(self.conjugation),
            "vacuum_index": self.vacuum_index,
        }
        if self.true_weights is not None:
            out["true_weights"] = [rat(w) for w in self.true_weights]
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _fmt(x) -> float:
    """Round to 15 significant digits; ``json`` then prints the shortest repr."""
    v = float(format(float(x), ".15g"))
    return 0.0 if v == 0 else v


def datum_from_dict(d: dict) -> ModularDatum:
    def rat(x):
        return Fraction(int(x["num"]), int(x["den"]))

    try:
        s = np.array([[complex(re, im) for re, im in row] for row in d["s_matrix"]], dtype=np.clongdouble)
        return ModularDatum(
            labels=tuple(d["labels"]),
            weights=tuple(rat(w) for w in d["weights"]),
            central_charge=rat(d["central_charge"]),
            s_matrix=s,
            conjugation=tuple(d["conjugation"]),
            name=d.get("name", ""),
            vacuum_index=d.get("vacuum_index", 0),
            true_weights=tuple(rat(w) for w in d["true_weights"]) if "true_weights" in d else None,
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, MalformedDatum):
            raise
        raise MalformedDatum(f"cannot read modular datum: {exc}") from exc


def datum_from_json(text: str) -> ModularDatum:
    return datum_from_dict(json.loads(text))


# --- validation ---------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    residual: float
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple
    tol: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max(c.residual for c in self.checks if c.name != "min_weight_row_nonvanishing")

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "tol": self.tol,
            "checks": [
                {"name": c.name, "passed": c.passed, "residual": _fmt(c.residual), "detail": c.detail}
                for c in self.checks
            ],
        }


def validate(md: ModularDatum, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check the S-matrix axioms of ``md``; failures are reported, never raised."""
    s = md.s_matrix
    n = md.size
    checks = []

    sym = float(np.max(np.abs(s - s.T)))
    checks.append(Check("symmetry", sym < tol, sym))

    sq = float(np.max(np.abs(s @ s - md.conjugation_matrix())))
    checks.append(Check("s_squared_is_conjugation", sq < tol, sq))

    inv = float(np.max(np.abs(s @ md.s_inverse() - np.eye(n))))
    checks.append(Check("inverse_via_conjugation", inv < tol, inv))

    try:
        k = min_weight_label(md)
    except AmbiguousMinimalWeight as exc:
        checks.append(Check("min_weight_row_nonvanishing", False, 0.0, str(exc)))
    else:
        smallest = float(np.min(np.abs(s[k])))
        checks.append(Check("min_weight_row_nonvanishing", smallest > tol, smallest, f"row {k}"))
    return ValidationReport(tuple(checks), tol)


def min_weight_label(md: ModularDatum) -> int:
    """Index of the unique label of minimal conformal weight (exact comparison)."""
    weights = md.true_weights if md.true_weights is not None else md.weights
    lo = min(weights)
    hits = [i for i, w in enumerate(weights) if w == lo]
    if len(hits) > 1:
        raise AmbiguousMinimalWeight(
            f"minimal weight {lo} attained by labels {[md.labels[i] for i in hits]}"
        )
    return hits[0]


# --- Virasoro minimal models ---------------------------------------------------

def minimal_central_charge(p: int, q: int) -> Fraction:
    return 1 - Fraction(6 * (p - q) ** 2, p * q)


def kac_weight(p: int, q: int, m: int, n: int) -> Fraction:
    return Fraction((n * p - m * q) ** 2 - (p - q) ** 2, 4 * p * q)


def kac_labels(p: int, q: int) -> list:
    """Canonical Kac-table representatives, sorted; (1, 1) comes first."""
    out = []
    for m in range(1, p):
        for n in range(1, q):
            mm, nn = p - m, q - n
            if m * q + n <= mm * q + nn:
                out.append((m, n))
    return out


def _check_pq(p, q):
    if p < 2 or q < 2:
        raise OutOfRange(f"minimal model needs p, q >= 2 (got {p}, {q})")
    if math.gcd(p, q) != 1:
        raise NotCoprime(f"p={p} and q={q} are not coprime")


def build_minimal_model(p: int, q: int) -> ModularDatum:
    _check_pq(p, q)
    labels = kac_labels(p, q)
    pref = _sqrt_ratio(8, p * q)
    size = len(labels)
    s = np.zeros((size, size), dtype=np.clongdouble)
    for a, (m, n) in enumerate(labels):
        for b, (m2, n2) in enumerate(labels):
            sign = -1 if (m2 * n + n2 * m + 1) % 2 else 1
            s[a, b] = sign * pref * _sinpi(Fraction(m * m2 * q, p)) * _sinpi(Fraction(n * n2 * p, q))
    return ModularDatum(
        labels=tuple(f"({m},{n})" for m, n in labels),
        weights=tuple(kac_weight(p, q, m, n) for m, n in labels),
        central_charge=minimal_central_charge(p, q),
        s_matrix=s,
        conjugation=tuple(range(size)),
        name=f"minimal:{p}:{q}",
    )


def build_ising() -> ModularDatum:
    half = np.longdouble(1) / 2
    r = np.sqrt(np.longdouble(2)) / 2
    s = np.array([[half, half, r], [half, half, -r], [r, -r, 0]], dtype=np.clongdouble)
    return ModularDatum(
        labels=("0", "1/2", "1/16"),
        weights=(Fraction(0), Fraction(1, 2), Fraction(1, 16)),
        central_charge=Fraction(1, 2),
        s_matrix=s,
        conjugation=(0, 1, 2),
        name="ising",
    )


# --- affine sl2 ---------------------------------------------------------------

def build_affine_sl2(k: int) -> ModularDatum:
    if k < 1:
        raise OutOfRange(f"level must be >= 1 (got {k})")
    pref = _sqrt_ratio(2, k + 2)
    s = np.zeros((k + 1, k + 1), dtype=np.clongdouble)
    for a in range(k + 1):
        for b in range(k + 1):
            s[a, b] = pref * _sinpi(Fraction((a + 1) * (b + 1), k + 2))
    return ModularDatum(
        labels=tuple(f"j={j}" for j in range(k + 1)),
        weights=tuple(Fraction(j * (j + 2), 4 * (k + 2)) for j in range(k + 1)),
        central_charge=Fraction(3 * k, k + 2),
        s_matrix=s,
        conjugation=tuple(range(k + 1)),
        name=f"sl2:{k}",
    )


# --- lattices -------------------------------------------------------------------

def _det(mat) -> Fraction:
    a = [[Fraction(x) for x in row] for row in mat]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for cc in range(c, n):
                    a[r][cc] -= f * a[c][cc]
    return det


def _inverse(mat):
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def _pair(gram, u, v) -> Fraction:
    return sum(Fraction(u[i]) * gram[i][j] * v[j] for i in range(len(u)) for j in range(len(v)))


def check_gram(gram, even: bool = True) -> list:
    """Validate an integral positive-definite (by default even) Gram matrix;
    returns it as nested int lists."""
    try:
        g = [[int(x) for x in row] for row in gram]
    except (TypeError, ValueError) as exc:
        raise NotEvenLattice(f"Gram matrix must be an integer matrix: {exc}") from exc
    n = len(g)
    if n == 0 or any(len(row) != n for row in g):
        raise NotPositiveDefinite("Gram matrix must be square and non-empty")
    if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
        raise NotPositiveDefinite("Gram matrix must be symmetric")
    if even and any(g[i][i] % 2 for i in range(n)):
        raise NotEvenLattice("Gram matrix diagonal must be even")
    # Sylvester: all leading principal minors positive
    for r in range(1, n + 1):
        if _det([row[:r] for row in g[:r]]) <= 0:
            raise NotPositiveDefinite(f"leading {r}x{r} minor is not positive")
    return g


def _reduce(mu) -> tuple:
    return tuple(Fraction(x) - math.floor(Fraction(x)) for x in mu)


def dual_cosets(gram) -> list:
    """Representatives of L°/L in basis coordinates, reduced to [0, 1), zero first."""
    g = check_gram(gram)
    n = len(g)
    det = int(_det(g))
    ginv = _inverse(g)
    seen = {}
    for w in itertools.product(range(det), repeat=n):
        mu = _reduce([sum(ginv[i][j] * w[j] for j in range(n)) for i in range(n)])
        seen.setdefault(mu, None)
    reps = sorted(seen, key=lambda m: (m != tuple([Fraction(0)] * n), m))
    return [list(m) for m in reps]


def _coset_min_norm(g, mu) -> Fraction:
    """min over alpha in L + mu of (alpha, alpha)/2, by exact box enumeration."""
    n = len(g)
    mu = _reduce(mu)
    ginv = _inverse(g)
    best = _pair(g, mu, mu)
    bounds = [math.isqrt(int(math.ceil(best * ginv[i][i]))) + 2 for i in range(n)]
    for v in itertools.product(*(range(-b - 1, b + 1) for b in bounds)):
        a = [v[i] + mu[i] for i in range(n)]
        best = min(best, _pair(g, a, a))
    return best / 2


def _coset_label(mu) -> str:
    return "[" + ",".join(_frac_str(x) for x in mu) + "]"


def build_lattice(gram, cosets=None, name: str = "") -> ModularDatum:
    """Modular data of the lattice VOA ``V_L`` for an even positive-definite Gram matrix.

    ``cosets`` are representatives of the dual quotient in basis coordinates
    (zero first); computed when omitted.
    """
    g = check_gram(gram)
    n = len(g)
    det = int(_det(g))
    if cosets is None:
        cosets = dual_cosets(g)
    reps = []
    for mu in cosets:
        mu = [Fraction(x) for x in mu]
        if len(mu) != n:
            raise InvalidCoset(f"coset vector {mu} has wrong length (rank {n})")
        if any(sum(g[i][j] * mu[j] for j in range(n)).denominator != 1 for i in range(n)):
            raise InvalidCoset(f"{_coset_label(mu)} is not in the dual lattice")
        reps.append(_reduce(mu))
    if len(reps) != det or len(set(reps)) != len(reps):
        raise WrongCosetCount(f"need {det} distinct coset representatives, got {len(set(reps))} of {len(reps)}")
    if any(reps[0]):
        raise InvalidCoset("the first coset must be the lattice itself (zero vector)")

    index = {mu: i for i, mu in enumerate(reps)}
    conj = tuple(index[_reduce([-x for x in mu])] for mu in reps)
    pref = _sqrt_ratio(1, det)
    s = np.zeros((det, det), dtype=np.clongdouble)
    for a, mu in enumerate(reps):
        for b, nu in enumerate(reps):
            x = 2 * (_pair(g, mu, nu) % 1)
            s[a, b] = pref * (_cospi(x) - 1j * _sinpi(x))
    true = tuple(_coset_min_norm(g, mu) for mu in reps)
    return ModularDatum(
        labels=tuple(_coset_label(mu) for mu in reps),
        weights=tuple(w - math.floor(w) for w in true),
        central_charge=Fraction(n),
        s_matrix=s,
        conjugation=conj,
        name=name or "lattice",
        true_weights=true,
    )


BUILTIN_LATTICES = {
    "A1": [[2]],
    "A2": [[2, -1], [-1, 2]],
    "A3": [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
    "A1A1": [[2, 0], [0, 2]],
    "A1A2": [[2, 0, 0], [0, 2, -1], [0, -1, 2]],
    "A1A1A1": [[2, 0, 0], [0, 2, 0], [0, 0, 2]],
    "Z4": [[4]],
    "Z6": [[6]],
    "G7": [[2, 1], [1, 4]],
    "G11": [[2, 1], [1, 6]],
    "G12": [[4, 2], [2, 4]],
}


def builtin_lattice(name: str) -> ModularDatum:
    try:
        gram = BUILTIN_LATTICES[name]
    except KeyError:
        raise OutOfRange(f"unknown lattice {name!r}; built-ins: {sorted(BUILTIN_LATTICES)}") from None
    return build_lattice(gram, name=f"lattice:{name}")
