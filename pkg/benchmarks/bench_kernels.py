"""Time the numba kernels against their numpy counterparts.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each jitted kernel is called once before timing so compilation (or the
on-disk cache load) is not counted.
"""
import argparse
import timeit

import numpy as np

from fusionkit import kernels
from fusionkit._accel import NUMBA_AVAILABLE
from fusionkit.modular_data import build_affine_sl2, build_minimal_model
from fusionkit.verlinde import fusion_from_smatrix


def cases():
    md = build_minimal_model(7, 12)
    s = md.s_matrix.astype(np.complex128)
    s_inv = md.s_inverse().astype(np.complex128)
    yield "verlinde (33 labels)", (s, s_inv), kernels.verlinde_tensor_jit, kernels.verlinde_tensor_numpy

    n = fusion_from_smatrix(build_affine_sl2(30)).entries
    dbl = np.block([[np.zeros_like(n[1]), n[1]], [n[1].T, np.zeros_like(n[1])]]).astype(np.float64)
    args = (dbl, 1.0, 1e-14, 100_000)
    yield "power iteration (62x62)", args, kernels.power_iteration_jit, kernels.power_iteration_numpy

    gram = np.array([[2, -1, 0], [-1, 2, -1], [0, -1, 2]], dtype=np.int64)
    args = (gram, np.array([1, 2, 3], dtype=np.int64), np.int64(4), np.int64(4),
            np.full(3, 30, dtype=np.int64), 4000)
    yield "theta counts (A3, 61^3 points)", args, kernels.theta_slot_counts_jit, kernels.theta_slot_counts_numpy

    d = len(n)
    triples = np.array([(i, j, k) for i in range(d) for j in range(d) for k in range(d)], dtype=np.int64)
    yield f"associativity ({len(triples)} triples)", (n, triples), kernels.associativity_defect_jit, \
        kernels.associativity_defect_numpy


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'kernel':34s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for name, call_args, jit, ref in cases():
        jit(*call_args)
        t_jit = min(timeit.repeat(lambda: jit(*call_args), number=1, repeat=args.repeat))
        t_ref = min(timeit.repeat(lambda: ref(*call_args), number=1, repeat=args.repeat))
        print(f"{name:34s} {1e3 * t_jit:10.3f} {1e3 * t_ref:10.3f} {t_ref / t_jit:8.1f}x")


if __name__ == "__main__":
    main()
