"""Time the compiled stepping kernels against the numpy reference.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each case is a realistic call: 4096 steps, one record per step.
"""

import argparse
import timeit

import numpy as np

from hiqe import kernels
from hiqe.dynamics import su2_exponential


def cases(rng):
    k = 4096
    a = rng.normal(size=(2 * k + 1, 2, 2)) + 1j * rng.normal(size=(2 * k + 1, 2, 2))
    hs = np.ascontiguousarray((a + a.conj().transpose(0, 2, 1)) / 2)
    steps = np.ascontiguousarray(su2_exponential(hs[:k], 1.0 / k))
    psi2 = np.ascontiguousarray([[1.0 + 0j], [0.0]])
    n = 256
    basis, _ = np.linalg.qr(rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2)))
    basis = np.ascontiguousarray(basis)
    psi_n = np.full(n, 1 / np.sqrt(n), dtype=np.complex128)
    return {
        "evolve_block d=2": lambda m: m.evolve_block(steps, psi2, 1),
        "rk4_block d=2": lambda m: m.rk4_block(hs, psi2, 1.0 / k, 1),
        "evolve_embedded N=256": lambda m: m.evolve_embedded(steps, basis, psi_n, 1),
        "rk4_embedded N=256": lambda m: m.rk4_embedded(hs, basis, psi_n, 1.0 / k, 1),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("compiled kernels not built; timing the python backend only")
    print(f"{'kernel':<24}" + "".join(f"{b + ' ms':>14}" for b in backends) + ("   speedup" if len(backends) == 2 else ""))
    for name, call in cases(np.random.default_rng(0)).items():
        times = []
        for backend in backends:
            module = kernels.load_backend(backend)
            times.append(min(timeit.repeat(lambda: call(module), number=1, repeat=args.repeat)) * 1e3)
        line = f"{name:<24}" + "".join(f"{t:>14.2f}" for t in times)
        if len(times) == 2:
            line += f"{times[1] / times[0]:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
