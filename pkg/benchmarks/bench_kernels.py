"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from cmrmatrix import kernels
from cmrmatrix.potentials import PotentialKind
from cmrmatrix.rmatrix import constant_R


def flow_case(n, steps):
    q = np.linspace(-n / 2, n / 2, n)
    p = np.linspace(-1, 1, n)
    kind = PotentialKind("hyperbolic", 1.0)
    return lambda impl: impl.cm_flow(q, p, kind.code, kind.a, 1e-3, steps, 1e-8)


def cybe_case(n):
    r = constant_R(n)
    return lambda impl: impl.cybe_int(r)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    backends = {"python": kernels.get_backend("python")}
    try:
        backends["native"] = kernels.get_backend("native")
    except ImportError:
        print("compiled kernels unavailable; timing the fallback only")

    cases = [
        ("cm_flow n=3, 10k steps", flow_case(3, 10_000)),
        ("cm_flow n=6, 10k steps", flow_case(6, 10_000)),
        ("cybe_int n=4", cybe_case(4)),
        ("cybe_int n=6", cybe_case(6)),
    ]
    print(f"{'case':<26}" + "".join(f"{name:>12}" for name in backends) + f"{'speedup':>10}")
    for label, fn in cases:
        times = {name: min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat))
                 for name, impl in backends.items()}
        row = f"{label:<26}" + "".join(f"{t * 1e3:>10.1f}ms" for t in times.values())
        if "native" in times:
            row += f"{times['python'] / times['native']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
