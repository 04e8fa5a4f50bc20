"""Benchmark the fermionic bit kernels: numba jit path vs numpy fallback.

Times sector-mask enumeration and creation-operator triplet generation on
full-space problems around n_modes = 16..22, where the 2**n scaling starts
to matter. Run with SUSYBLOCKS_NO_NUMBA=1 to confirm the fallback alone;
in that mode there is nothing to compare and only numpy numbers print.

Usage: python benchmarks/bench_kernels.py [--modes 16 18 20 22] [--repeat 5]
"""

import argparse
import time

import numpy as np

from susyblocks._kernels import (
    creation_triplets,
    creation_triplets_numpy,
    sector_masks,
    sector_masks_numpy,
    using_numba,
)


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def check_agreement(n_modes, sector):
    masks_a = sector_masks(n_modes, sector)
    masks_b = sector_masks_numpy(n_modes, sector)
    if not np.array_equal(masks_a, masks_b):
        raise AssertionError(f"mask mismatch at n_modes={n_modes} sector={sector}")
    src = masks_a
    tgt = sector_masks(n_modes, sector + 1)
    for bit in (0, n_modes // 2, n_modes - 1):
        got = creation_triplets(src, tgt, bit)
        ref = creation_triplets_numpy(src, tgt, bit)
        for a, b in zip(got, ref):
            if not np.array_equal(a, b):
                raise AssertionError(
                    f"triplet mismatch at n_modes={n_modes} bit={bit}"
                )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--modes", type=int, nargs="+", default=[16, 18, 20, 22])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    jit_on = using_numba()
    print(f"numba path active: {jit_on}")
    if jit_on:
        # first call includes compilation; keep it out of the timings
        sector_masks(8, 3)
        creation_triplets(sector_masks(8, 3), sector_masks(8, 4), 2)

    header = f"{'n_modes':>7} {'sector':>6} {'size':>9}"
    if jit_on:
        header += f" {'masks jit':>10} {'masks np':>10} {'trip jit':>10} {'trip np':>10} {'speedup':>8}"
    else:
        header += f" {'masks np':>10} {'trip np':>10}"
    print(header)

    for n_modes in args.modes:
        sector = n_modes // 2
        check_agreement(min(n_modes, 14), min(sector, 6))

        t_mask_np = best_of(sector_masks_numpy, (n_modes, sector), args.repeat)
        src = sector_masks_numpy(n_modes, sector)
        tgt = sector_masks_numpy(n_modes, sector + 1)
        t_trip_np = best_of(
            creation_triplets_numpy, (src, tgt, n_modes // 2), args.repeat
        )

        row = f"{n_modes:>7} {sector:>6} {src.size:>9}"
        if jit_on:
            t_mask = best_of(sector_masks, (n_modes, sector), args.repeat)
            t_trip = best_of(creation_triplets, (src, tgt, n_modes // 2), args.repeat)
            speed = (t_mask_np + t_trip_np) / max(t_mask + t_trip, 1e-12)
            row += (
                f" {t_mask * 1e3:>8.2f}ms {t_mask_np * 1e3:>8.2f}ms"
                f" {t_trip * 1e3:>8.2f}ms {t_trip_np * 1e3:>8.2f}ms {speed:>7.1f}x"
            )
        else:
            row += f" {t_mask_np * 1e3:>8.2f}ms {t_trip_np * 1e3:>8.2f}ms"
        print(row)


if __name__ == "__main__":
    main()
