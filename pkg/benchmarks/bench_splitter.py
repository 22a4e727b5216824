"""Time tree and forest fitting with the compiled and the numpy split search.

    python benchmarks/bench_splitter.py [--rows 2000] [--repeat 3]
"""
import argparse
import time

from ecomrec.classifiers import _backend, dumps
from ecomrec.classifiers.forest import train_rf
from ecomrec.classifiers.tree import train_dt
from ecomrec.data import encode_dataset
from ecomrec.ingest import SynthConfig, generate_synthetic


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=2000)
    ap.add_argument("--products", type=int, default=10)
    ap.add_argument("--noise", type=float, default=0.05)
    ap.add_argument("--trees", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    ds = encode_dataset(generate_synthetic(SynthConfig(args.rows, args.products, args.noise, seed=0)))
    X, y, cat = ds.features, ds.target, ds.categorical
    jobs = {
        "dt": lambda: train_dt(X, y, categorical=cat),
        f"rf x{args.trees}": lambda: train_rf(X, y, n_trees=args.trees, seed=0, categorical=cat),
    }
    if "cython" not in _backend.BACKENDS:
        print("compiled kernel not built; only the numpy backend is available")

    print(f"{args.rows} rows, {X.shape[1]} features, best of {args.repeat}")
    print(f"{'job':<10} " + " ".join(f"{name:>10}" for name in _backend.BACKENDS) + "   speedup  same")
    saved = _backend.impl
    try:
        for job, fn in jobs.items():
            times, models = {}, {}
            for name, impl in _backend.BACKENDS.items():
                _backend.impl = impl
                times[name], models[name] = timed(fn, args.repeat)
            cells = " ".join(f"{times[n]:>9.3f}s" for n in _backend.BACKENDS)
            if len(times) == 2:
                speed = f"{times['python'] / times['cython']:>8.1f}x"
                same = "yes" if dumps(models["python"]) == dumps(models["cython"]) else "NO"
            else:
                speed, same = "       -", "-"
            print(f"{job:<10} {cells} {speed}  {same:>4}")
    finally:
        _backend.impl = saved


if __name__ == "__main__":
    main()
