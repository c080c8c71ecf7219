"""Numeric inner loops.

Every kernel exists twice: a numba-compiled loop (``*_jit``) and a vectorised
numpy version (``*_numpy``). The public name dispatches on
:data:`fusionkit._accel.USE_NUMBA`; ``benchmarks/bench_kernels.py`` times
both paths against each other.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

__all__ = [
    "verlinde_tensor",
    "power_iteration",
    "theta_slot_counts",
    "associativity_defect",
    "BACKEND",
]

BACKEND = "numba" if USE_NUMBA else "numpy"


# --- Verlinde sum -----------------------------------------------------------

def verlinde_tensor_numpy(s, s_inv):
    """``N[i,j,k] = sum_s S[i,s] S[j,s] S_inv[s,k] / S[0,s]`` as a complex array."""
    w = s_inv / s[0][:, None]
    return np.einsum("is,js,sk->ijk", s, s, w)


@njit
def verlinde_tensor_jit(s, s_inv):
    n = s.shape[0]
    out = np.zeros((n, n, n), dtype=np.complex128)
    w = np.empty((n, n), dtype=np.complex128)
    for a in range(n):
        for k in range(n):
            w[a, k] = s_inv[a, k] / s[0, a]
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                acc = 0j
                for a in range(n):
                    acc += s[i, a] * s[j, a] * w[a, k]
                out[i, j, k] = acc
                out[j, i, k] = acc
    return out


def verlinde_tensor(s, s_inv):
    s = np.ascontiguousarray(s, dtype=np.complex128)
    s_inv = np.ascontiguousarray(s_inv, dtype=np.complex128)
    if USE_NUMBA:
        return verlinde_tensor_jit(s, s_inv)
    return verlinde_tensor_numpy(s, s_inv)


# --- shifted power iteration ------------------------------------------------

def power_iteration_numpy(m, shift, tol, max_iter):
    """Power iteration on ``m + shift*I`` from the all-ones vector.

    Stops once successive Rayleigh quotients differ by less than
    ``tol * max(1, |rq|)``. Returns ``(rq - shift, iterations, converged)``.
    """
    n = m.shape[0]
    a = m + shift * np.eye(n)
    x = np.ones(n) / np.sqrt(n)
    prev = np.inf
    for it in range(1, max_iter + 1):
        y = a @ x
        rq = float(x @ y)
        norm = np.sqrt(y @ y)
        if norm == 0.0:
            return 0.0, it, True
        x = y / norm
        if abs(rq - prev) < tol * max(1.0, abs(rq)):
            return rq - shift, it, True
        prev = rq
    return prev - shift, max_iter, False


@njit
def power_iteration_jit(m, shift, tol, max_iter):
    n = m.shape[0]
    x = np.ones(n) / np.sqrt(n)
    y = np.empty(n)
    prev = np.inf
    for it in range(1, max_iter + 1):
        rq = 0.0
        norm2 = 0.0
        for i in range(n):
            acc = shift * x[i]
            for j in range(n):
                acc += m[i, j] * x[j]
            y[i] = acc
            rq += x[i] * acc
            norm2 += acc * acc
        if norm2 == 0.0:
            return 0.0, it, True
        norm = np.sqrt(norm2)
        for i in range(n):
            x[i] = y[i] / norm
        if abs(rq - prev) < tol * max(1.0, abs(rq)):
            return rq - shift, it, True
        prev = rq
    return prev - shift, max_iter, False


def power_iteration(m, shift=1.0, tol=1e-14, max_iter=100_000):
    m = np.ascontiguousarray(m, dtype=np.float64)
    if USE_NUMBA:
        value, it, ok = power_iteration_jit(m, float(shift), float(tol), int(max_iter))
    else:
        value, it, ok = power_iteration_numpy(m, float(shift), float(tol), int(max_iter))
    return float(value), int(it), bool(ok)


# --- lattice point counting ---------------------------------------------------

def theta_slot_counts_numpy(gram, numer, den, scale, bounds, n_slots):
    """Count lattice points of ``L + numer/den`` by graded slot.

    A point ``alpha = v + numer/den`` (``v`` integral, basis coordinates) lands
    in slot ``scale * (alpha, alpha) = scale * u^T G u / den**2`` with
    ``u = den*v + numer``. Returns ``(counts, bad)`` where ``bad`` counts points
    whose slot is not an integer (the caller treats that as an input error).
    """
    axes = [np.arange(-b, b + 1, dtype=np.int64) for b in bounds]
    grids = np.meshgrid(*axes, indexing="ij")
    v = np.stack([g.ravel() for g in grids], axis=1)
    u = den * v + numer[None, :]
    quad = np.einsum("ti,ij,tj->t", u, gram, u) * scale
    d2 = den * den
    bad = int(np.count_nonzero(quad % d2))
    slots = quad // d2
    slots = slots[slots <= n_slots]
    counts = np.bincount(slots, minlength=n_slots + 1).astype(np.int64)
    return counts, bad


@njit
def theta_slot_counts_jit(gram, numer, den, scale, bounds, n_slots):
    r = gram.shape[0]
    counts = np.zeros(n_slots + 1, dtype=np.int64)
    v = np.empty(r, dtype=np.int64)
    u = np.empty(r, dtype=np.int64)
    for i in range(r):
        v[i] = -bounds[i]
    d2 = den * den
    bad = 0
    while True:
        for i in range(r):
            u[i] = den * v[i] + numer[i]
        quad = 0
        for i in range(r):
            for j in range(r):
                quad += u[i] * gram[i, j] * u[j]
        quad *= scale
        if quad % d2 != 0:
            bad += 1
        else:
            slot = quad // d2
            if slot <= n_slots:
                counts[slot] += 1
        # odometer step
        i = r - 1
        while i >= 0:
            v[i] += 1
            if v[i] <= bounds[i]:
                break
            v[i] = -bounds[i]
            i -= 1
        if i < 0:
            break
    return counts, bad


def theta_slot_counts(gram, numer, den, scale, bounds, n_slots):
    gram = np.ascontiguousarray(gram, dtype=np.int64)
    numer = np.ascontiguousarray(numer, dtype=np.int64)
    bounds = np.ascontiguousarray(bounds, dtype=np.int64)
    args = (gram, numer, np.int64(den), np.int64(scale), bounds, int(n_slots))
    if USE_NUMBA:
        counts, bad = theta_slot_counts_jit(*args)
    else:
        counts, bad = theta_slot_counts_numpy(*args)
    return counts, int(bad)


# --- fusion associativity -----------------------------------------------------

def associativity_defect_numpy(n, triples):
    """Max over ``(i,j,k)`` in ``triples`` and all ``l`` of
    ``|sum_s N[i,j,s] N[s,k,l] - sum_s N[j,k,s] N[i,s,l]|``."""
    if len(triples) == 0:
        return 0
    i, j, k = triples[:, 0], triples[:, 1], triples[:, 2]
    lhs = np.einsum("ts,tsl->tl", n[i, j, :], np.transpose(n[:, k, :], (1, 0, 2)))
    rhs = np.einsum("ts,tsl->tl", n[j, k, :], n[i, :, :])
    return int(np.max(np.abs(lhs - rhs)))


@njit
def associativity_defect_jit(n, triples):
    d = n.shape[0]
    worst = 0
    for t in range(triples.shape[0]):
        i = triples[t, 0]
        j = triples[t, 1]
        k = triples[t, 2]
        for l in range(d):
            lhs = 0
            rhs = 0
            for s in range(d):
                lhs += n[i, j, s] * n[s, k, l]
                rhs += n[j, k, s] * n[i, s, l]
            diff = abs(lhs - rhs)
            if diff > worst:
                worst = diff
    return worst


def associativity_defect(n, triples):
    n = np.ascontiguousarray(n, dtype=np.int64)
    triples = np.ascontiguousarray(triples, dtype=np.int64).reshape(-1, 3)
    if USE_NUMBA:
        return int(associativity_defect_jit(n, triples))
    return associativity_defect_numpy(n, triples)
