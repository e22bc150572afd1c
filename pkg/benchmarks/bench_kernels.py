"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from spinlogic import _backend


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def cases(rng):
    for n in (4, 8):
        h = random_hermitian(rng, n)
        yield f"jacobi_eigh {n}x{n}", "jacobi_eigh", (h,)
    amps = rng.normal(size=16) + 1j * rng.normal(size=16)
    omegas = rng.uniform(-2e3, 2e3, size=16)
    yield "fid_accumulate 16 lines x 4096", "fid_accumulate", (amps, omegas, 1e-3, 4096, 60.0)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    backends = _backend.available()
    print(f"active backend: {_backend.BACKEND}")
    print(f"{'kernel':34s}" + "".join(f"{b:>14s}" for b in backends) + ("       speedup" if len(backends) == 2 else ""))
    for label, fn, fargs in cases(np.random.default_rng(args.seed)):
        times, results = [], []
        for name in backends:
            f = getattr(_backend.kernels(name), fn)
            number, _ = timeit.Timer(lambda: f(*fargs)).autorange()
            best = min(timeit.repeat(lambda: f(*fargs), number=number, repeat=args.repeat)) / number
            times.append(best)
            results.append(f(*fargs))
        if len(results) == 2:
            # eigenvalues for jacobi_eigh, the FID itself otherwise
            a, b = (r[0] if isinstance(r, tuple) else r for r in results)
            assert np.allclose(a, b, atol=1e-9), f"{label}: backends disagree"
        row = f"{label:34s}" + "".join(f"{t * 1e6:11.1f} us" for t in times)
        if len(times) == 2:
            row += f"{times[1] / times[0]:13.1f}x"
        print(row)


if __name__ == "__main__":
    main()
