"""Truncated q-characters and three numerical routes to their q -> 1 ratio.

Coefficients are exact Python integers. Ratios are formed in floating point
only after exact accumulation.

Convergence acceleration
------------------------
Ratios of partition-type coefficients approach their limit like a power
series in ``n**-1/2``; at truncation 800 the raw ratio is still several
percent off. For dense series (all coefficients positive in the fitting
window) the coefficient-ratio and partial-sum routes therefore fit a
degree-4 polynomial in ``n**-1/2`` over ``[n/2, n]`` and report its value at
``n = infinity``. Sparse series (theta functions) have no such expansion and
are reported raw. The Abel route extrapolates the ``y``-dependence with
Neville's polynomial scheme through the last ``order`` admissible points.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import kernels
from .errors import AllZeroDenominator, InputError, InvalidCoset, NoAdmissiblePoints, RankUnsupported
from .modular_data import BUILTIN_LATTICES, _det, _fmt, check_gram, dual_cosets

__all__ = [
    "GradedSeries",
    "LimitEstimate",
    "partition_numbers",
    "eta_quotient_series",
    "virasoro_c1_character",
    "generic_c1_character",
    "lattice_theta_series",
    "limit_coefficient_ratio",
    "limit_partial_sum_ratio",
    "limit_abel",
    "all_limits",
    "l1_fusion_check",
    "series_from_spec",
    "DEFAULT_Y_SEQUENCE",
]

COEFFICIENT_RATIO = "CoefficientRatio"
PARTIAL_SUM_RATIO = "PartialSumRatio"
ABEL_LIMIT = "AbelLimit"

LIMIT_TOL = 1e-2
_FIT_DEGREE = 4
_MIN_FIT_N = 16
DEFAULT_Y_SEQUENCE = tuple(0.2 * 0.9 ** j for j in range(80))
_TAIL_REL = 1e-9


@dataclass(frozen=True)
class GradedSeries:
    """``q**leading_exponent * sum_j coefficients[j] * q**(j*grading_step)``."""

    leading_exponent: Fraction
    coefficients: tuple
    grading_step: Fraction = Fraction(1)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "leading_exponent", Fraction(self.leading_exponent))
        object.__setattr__(self, "grading_step", Fraction(self.grading_step))
        coeffs = tuple(int(c) for c in self.coefficients)
        if any(c < 0 for c in coeffs):
            raise ValueError("graded dimensions must be non-negative")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def truncation(self) -> int:
        return len(self.coefficients) - 1

    def exponent(self, j: int) -> Fraction:
        return self.leading_exponent + j * self.grading_step

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["slot", "exponent", "coefficient"])
        for j, c in enumerate(self.coefficients):
            e = self.exponent(j)
            w.writerow([j, str(e), c])
        return buf.getvalue()


@dataclass(frozen=True)
class LimitEstimate:
    """Result of one limit route.

    ``trace`` holds ``(parameter, estimate)`` pairs (checkpoint index, or
    ``y`` for the Abel route) of the reported estimator; ``raw`` holds the
    unaccelerated ratios. If ``converged`` the last two trace estimates are
    within ``tolerance``.
    """

    route: str
    value: float
    trace: tuple
    converged: bool
    tolerance: float
    raw: tuple = field(default=(), repr=False)
    skipped: tuple = ()
    accelerated: bool = False

    def to_dict(self) -> dict:
        return {
            "route": self.route,
            "value": _fmt(self.value),
            "converged": self.converged,
            "tolerance": self.tolerance,
            "accelerated": self.accelerated,
            "trace": [[_fmt(p), _fmt(v)] for p, v in self.trace],
            "skipped": [_fmt(y) for y in self.skipped],
        }

    def trace_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["route", "kind", "parameter", "estimate"])
        for kind, rows in (("trace", self.trace), ("raw", self.raw)):
            for p, v in rows:
                w.writerow([self.route, kind, repr(_fmt(p)), repr(_fmt(v))])
        return buf.getvalue()


# --- series constructors -----------------------------------------------------

_PARTITIONS = [1]


def partition_numbers(n: int) -> list:
    """``[p(0), ..., p(n)]`` via Euler's pentagonal-number recurrence (cached)."""
    p = _PARTITIONS
    for m in range(len(p), n + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p.append(total)
    return p[: n + 1]


def eta_quotient_series(d: int, N: int, weight=Fraction(0)) -> GradedSeries:
    """Coefficients of ``prod_{n>=1} (1 - q^n)^(-d)`` up to ``q^N``.

    ``weight`` is the lowest exponent, ``(lambda, lambda)/2`` for the
    Heisenberg module ``M(1, lambda)``.
    """
    if d < 1 or N < 0:
        raise InputError(f"need d >= 1 and N >= 0 (got d={d}, N={N})")
    c = [0] * (N + 1)
    c[0] = 1
    for n in range(1, N + 1):
        for _ in range(d):
            for j in range(n, N + 1):
                c[j] += c[j - n]
    return GradedSeries(Fraction(weight), c, name=f"heis:{d}:{Fraction(weight)}")


def virasoro_c1_character(n: int, N: int) -> GradedSeries:
    """Character of ``L(1, n^2/4)`` without the ``q^(-1/24)`` prefactor:
    ``a_j = p(j) - p(j - n - 1)``."""
    if n < 0 or N < 0:
        raise InputError(f"need n >= 0 and N >= 0 (got n={n}, N={N})")
    p = partition_numbers(N)
    coeffs = [p[j] - (p[j - n - 1] if j >= n + 1 else 0) for j in range(N + 1)]
    return GradedSeries(Fraction(n * n, 4), coeffs, name=f"l1:{n}")


def _is_quarter_square(h: Fraction) -> bool:
    x = 4 * h
    if x.denominator != 1 or x < 0:
        return False
    r = math.isqrt(x.numerator)
    return r * r == x.numerator


def generic_c1_character(N: int, h=Fraction(1, 3)) -> GradedSeries:
    """Character of ``L(1, h)`` for ``h`` not of the form ``n^2/4``: ``a_j = p(j)``."""
    h = Fraction(h)
    if _is_quarter_square(h):
        raise InputError(f"h = {h} is n^2/4; use virasoro_c1_character")
    if N < 0:
        raise InputError("N must be >= 0")
    return GradedSeries(h, partition_numbers(N), name=f"generic:{h}")


def lattice_theta_series(gram, shift, N: int) -> GradedSeries:
    """Theta series of ``L + shift`` on the grid ``j / (2 det gram)``, slots ``0..N``.

    ``shift`` is in basis coordinates. Slot ``j`` counts vectors with
    ``(alpha, alpha)/2 = j * grading_step``; the leading exponent is 0 so that
    series of different cosets line up slot by slot.
    """
    g = check_gram(gram, even=False)
    r = len(g)
    if r > 3:
        raise RankUnsupported(f"theta series enumeration supports rank <= 3, got {r}")
    if not 0 <= N <= 10**4:
        raise InputError(f"N must be in 0..10000, got {N}")
    shift = [Fraction(x) for x in shift]
    if len(shift) != r:
        raise InvalidCoset(f"shift has length {len(shift)}, lattice rank is {r}")
    det = int(_det(g))
    step = Fraction(1, 2 * det)
    den = math.lcm(*(x.denominator for x in shift))
    numer = np.array([int(x * den) for x in shift], dtype=np.int64)
    # (alpha, alpha) <= 2*N*step and (alpha, alpha) >= lam_min * |alpha|^2
    lam_min = float(np.linalg.eigvalsh(np.array(g, dtype=float))[0])
    radius = math.sqrt(2 * float(N * step) / lam_min) * (1 + 1e-9)
    bounds = np.array([int(radius + abs(x)) + 1 for x in shift], dtype=np.int64)
    counts, bad = kernels.theta_slot_counts(np.array(g), numer, den, det, bounds, N)
    if bad:
        raise InvalidCoset(f"norms of L + {shift} do not lie on the grid 1/(2 det)")
    label = ",".join(str(x) for x in shift)
    return GradedSeries(Fraction(0), [int(c) for c in counts], step, name=f"theta[{label}]")


# --- limit routes -------------------------------------------------------------

def _compatible(a: GradedSeries, b: GradedSeries):
    if a.truncation != b.truncation or a.grading_step != b.grading_step:
        raise InputError(
            f"series must share truncation and grading step "
            f"({a.truncation}/{a.grading_step} vs {b.truncation}/{b.grading_step})"
        )


def _checkpoints(n_max: int) -> list:
    pts = sorted({max(1, n_max // 8), max(1, n_max // 4), max(1, n_max // 2), n_max})
    return pts


def _extrapolate_sqrt(ns, values) -> float:
    """Fit ``values`` as a polynomial in ``n**-1/2`` and evaluate at ``n = inf``."""
    x = np.asarray(ns, dtype=float) ** -0.5
    deg = min(_FIT_DEGREE, len(ns) - 1)
    return float(np.polynomial.polynomial.polyfit(x, np.asarray(values, dtype=float), deg)[0])


def _accelerated(ns_all, ratio_of, checkpoints):
    trace = []
    for c in checkpoints:
        window = [n for n in ns_all if c // 2 <= n <= c]
        if len(window) < _FIT_DEGREE + 2:
            trace.append((c, ratio_of(c)))
        else:
            trace.append((c, _extrapolate_sqrt(window, [ratio_of(n) for n in window])))
    return trace


def _dense(a, b, lo) -> bool:
    return all(x > 0 for x in a[lo:]) and all(x > 0 for x in b[lo:])


def limit_coefficient_ratio(a: GradedSeries, b: GradedSeries, window: int | None = None,
                            tol: float = LIMIT_TOL) -> LimitEstimate:
    """Estimate ``lim a_n / b_n``.

    ``window`` (default ``max(10, N/20)``) sets the number of trailing indices
    with ``b_n != 0`` whose spread decides convergence; a sparse series whose
    support is not contained in the support of ``b`` never converges.
    """
    _compatible(a, b)
    A, B = a.coefficients, b.coefficients
    N = a.truncation
    ns = [n for n in range(N + 1) if B[n] != 0]
    if not ns:
        raise AllZeroDenominator("denominator series has no non-zero coefficient")
    window = window or max(10, N // 20)
    thr = 10 * tol
    ratio = {n: A[n] / B[n] for n in ns}
    raw = tuple((n, ratio[n]) for n in ns)
    if A == B:
        return LimitEstimate(COEFFICIENT_RATIO, 1.0, ((N, 1.0), (N, 1.0)), True, thr, raw)

    tail = ns[-window:]
    spread = max(ratio[n] for n in tail) - min(ratio[n] for n in tail)
    lo = tail[0]
    support_ok = all(B[n] != 0 or A[n] == 0 for n in range(lo, N + 1))
    checkpoints = [c for c in _checkpoints(N) if any(n <= c for n in ns)]

    dense = _dense(A, B, N // 16) and N >= 2 * _MIN_FIT_N
    if dense:
        trace = _accelerated(ns, lambda n: ratio[n], checkpoints)
    else:
        trace = []
        for c in checkpoints:
            last = [n for n in ns if n <= c][-window:]
            trace.append((c, sum(ratio[n] for n in last) / len(last)))
    stable = len(trace) < 2 or abs(trace[-1][1] - trace[-2][1]) < thr
    converged = support_ok and spread < thr and stable
    value = trace[-1][1] if converged or not dense else ratio[ns[-1]]
    return LimitEstimate(COEFFICIENT_RATIO, float(value), tuple(trace), converged, thr, raw,
                         accelerated=dense)


def limit_partial_sum_ratio(a: GradedSeries, b: GradedSeries, tol: float = LIMIT_TOL) -> LimitEstimate:
    """Estimate ``lim sum_{i<=n} a_i / sum_{i<=n} b_i`` at checkpoints N/8, N/4, N/2, N."""
    _compatible(a, b)
    A, B = a.coefficients, b.coefficients
    N = a.truncation
    ca, cb = [], []
    sa = sb = 0
    for x, y in zip(A, B):
        sa += x
        sb += y
        ca.append(sa)
        cb.append(sb)
    ns = [n for n in range(N + 1) if cb[n] != 0]
    if not ns:
        raise AllZeroDenominator("denominator series has no non-zero coefficient")
    thr = 10 * tol
    raw = tuple((n, ca[n] / cb[n]) for n in ns)
    if A == B:
        return LimitEstimate(PARTIAL_SUM_RATIO, 1.0, ((N, 1.0), (N, 1.0)), True, thr, raw)
    checkpoints = [c for c in _checkpoints(N) if cb[c] != 0]
    dense = _dense(A, B, N // 16) and N >= 2 * _MIN_FIT_N
    if dense:
        trace = _accelerated(ns, lambda n: ca[n] / cb[n], checkpoints)
    else:
        trace = [(c, ca[c] / cb[c]) for c in checkpoints]
    converged = len(trace) >= 2 and abs(trace[-1][1] - trace[-2][1]) < thr
    value = trace[-1][1] if converged or not dense else ca[N] / cb[N]
    return LimitEstimate(PARTIAL_SUM_RATIO, float(value), tuple(trace), converged, thr, raw,
                         accelerated=dense)


def _neville_at_zero(xs, ys) -> float:
    p = list(ys)
    n = len(xs)
    for level in range(1, n):
        for i in range(n - level):
            j = i + level
            p[i] = (xs[j] * p[i] - xs[i] * p[i + 1]) / (xs[j] - xs[i])
    return p[0]


def _series_value(coeffs: np.ndarray, exps: np.ndarray, q: float) -> float:
    return float(np.sum(coeffs * q ** exps))


def limit_abel(a: GradedSeries, b: GradedSeries, y_sequence=DEFAULT_Y_SEQUENCE,
               order: int = 10, tol: float = LIMIT_TOL) -> LimitEstimate:
    """Estimate ``lim_{q -> 1^-} ch_q(a) / ch_q(b)`` with ``q = exp(-2 pi y)``.

    A ``y`` is admissible when the geometric tail bound
    ``a* q^(N step) / (1 - q^step)`` (``a*`` the largest of the last few
    coefficients) is below ``1e-9`` of the truncated sum, for both series.
    The prefactor ``q^(lead_a - lead_b)`` enters the raw ratios; it tends to
    1, so the extrapolation to ``y = 0`` is done on the series ratio alone.
    """
    _compatible(a, b)
    ys = [float(y) for y in y_sequence]
    if any(y <= 0 for y in ys) or any(y2 >= y1 for y1, y2 in zip(ys, ys[1:])):
        raise InputError("y_sequence must be positive and strictly decreasing")
    N = a.truncation
    step = float(a.grading_step)
    exps = np.arange(N + 1, dtype=float) * step
    ca = np.array([float(x) for x in a.coefficients])
    cb = np.array([float(x) for x in b.coefficients])
    k = max(1, N // 20)
    a_tail, b_tail = ca[-k:].max(), cb[-k:].max()
    delta = float(a.leading_exponent - b.leading_exponent)
    identical = a.coefficients == b.coefficients

    points, raw, skipped = [], [], []
    for y in ys:
        q = math.exp(-2 * math.pi * y)
        qs = q ** step
        bound = q ** (N * step) / (1 - qs)
        va = _series_value(ca, exps, q)
        vb = _series_value(cb, exps, q)
        if vb == 0 or a_tail * bound >= _TAIL_REL * va or b_tail * bound >= _TAIL_REL * vb:
            skipped.append(y)
            continue
        r = 1.0 if identical else va / vb
        points.append((y, r))
        raw.append((y, q ** delta * r))
    if not points:
        raise NoAdmissiblePoints("every y fails the truncation tail bound; increase N or y")
    thr = 10 * tol
    if len({r for _, r in points}) == 1:
        v = points[0][1]
        trace = ((points[-1][0], v), (points[-1][0], v))
        return LimitEstimate(ABEL_LIMIT, v, trace, True, thr, tuple(raw), tuple(skipped), False)
    trace = []
    for t in range(1, len(points)):
        window = points[max(0, t + 1 - order): t + 1]
        trace.append((points[t][0], _neville_at_zero([p[0] for p in window], [p[1] for p in window])))
    if not trace:
        trace = [points[0]]
    converged = len(trace) >= 2 and abs(trace[-1][1] - trace[-2][1]) < thr
    value = trace[-1][1] if converged else raw[-1][1]
    return LimitEstimate(ABEL_LIMIT, float(value), tuple(trace), converged, thr, tuple(raw),
                         tuple(skipped), True)


def all_limits(a: GradedSeries, b: GradedSeries, tol: float = LIMIT_TOL) -> tuple:
    """The three route estimates for one pair, in the order coefficient, partial-sum, Abel."""
    return (
        limit_coefficient_ratio(a, b, tol=tol),
        limit_partial_sum_ratio(a, b, tol=tol),
        limit_abel(a, b, tol=tol),
    )


def l1_fusion_check(m: int, n: int, N: int = 800) -> bool:
    """Check ``L(1,m^2) x L(1,n^2) = sum_{k=m-n}^{m+n} L(1,k^2)`` at the level of
    quantum dimensions: the exact integer identity and the numerical estimates."""
    if not m >= n >= 0:
        raise InputError(f"need m >= n >= 0 (got m={m}, n={n})")
    if sum(2 * k + 1 for k in range(m - n, m + n + 1)) != (2 * m + 1) * (2 * n + 1):
        return False
    vac = virasoro_c1_character(0, N)

    def est(j):
        return limit_coefficient_ratio(virasoro_c1_character(2 * j, N), vac).value

    lhs = sum(est(k) for k in range(m - n, m + n + 1))
    return abs(lhs - est(m) * est(n)) < 0.1


def _lattice_gram(name: str):
    if name in BUILTIN_LATTICES:
        return BUILTIN_LATTICES[name]
    path = Path(name)
    if path.exists():
        return json.loads(path.read_text())["gram"]
    raise InputError(f"unknown lattice {name!r}")


def series_from_spec(spec: str, N: int) -> GradedSeries:
    """Parse a named character.

    ``l1:n`` (``L(1, n^2/4)``), ``generic:h`` (``L(1, h)``), ``heis:d[:w]``
    (Heisenberg rank ``d``, lowest weight ``w``), ``theta:<lattice>:<coset>``
    (coset index into the sorted dual-coset list of a built-in lattice or a
    lattice JSON file).
    """
    kind, _, rest = spec.partition(":")
    args = rest.split(":") if rest else []
    try:
        if kind == "l1" and len(args) == 1:
            return virasoro_c1_character(int(args[0]), N)
        if kind == "generic" and len(args) == 1:
            return generic_c1_character(N, Fraction(args[0]))
        if kind == "heis" and len(args) in (1, 2):
            w = Fraction(args[1]) if len(args) == 2 else Fraction(0)
            return eta_quotient_series(int(args[0]), N, w)
        if kind == "theta" and len(args) == 2:
            gram = _lattice_gram(args[0])
            cosets = dual_cosets(gram)
            idx = int(args[1])
            if not 0 <= idx < len(cosets):
                raise InputError(f"coset index {idx} out of range 0..{len(cosets) - 1}")
            return lattice_theta_series(gram, cosets[idx], N)
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"cannot parse series {spec!r}: {exc}") from exc
    raise InputError(f"cannot parse series {spec!r}")
