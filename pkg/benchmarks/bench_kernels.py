"""Time the compiled kernels against the numpy fallback on the same inputs.

    python benchmarks/bench_kernels.py [--repeat N]

Each workload is run once per backend to check that the results agree, then
timed; the best of N runs is reported.
"""

import argparse
import time

import numpy as np

from affineflag import census_group, field_of_order, gamma_Gc, named_group, relation_graph
from affineflag.kernels import available_backends, load_backend


def workloads():
    G = named_group("AGammaL", n=3, q=3)
    skew = relation_graph(3, field_of_order(3), "skew")
    perms = np.ascontiguousarray(G.flag_perms)
    F = perms.shape[1]
    seed = int(skew.arc_codes[0])

    census = census_group(7, 6)
    cperms = np.ascontiguousarray(census.flag_perms)
    mask = np.ascontiguousarray(census.space.compatible_matrix().ravel().astype(np.uint8))

    big = gamma_Gc(9, (1, 0, 1), 1)
    csr = (big.indptr, big.indices)

    return [
        ("pair orbit, skew arcs of AG(3,3)", "pair_orbit_closure",
         lambda: (perms, seed, np.zeros(F * F, dtype=np.uint8))),
        ("orbital labels, census p=7", "pair_orbit_labels", lambda: (cperms, mask)),
        ("eccentricities, 810 vertices, valency 576", "bfs_eccentricity", lambda: csr),
        ("girth, 810 vertices", "girth", lambda: csr),
        ("triangle counts, 810 vertices", "triangle_counts", lambda: csr),
    ]


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = {name: load_backend(name) for name in available_backends()}
    if "compiled" not in backends:
        print("compiled extension not built; timing the numpy fallback only")
    print(f"{'workload':44s}" + "".join(f"{name:>12s}" for name in backends) + "     speedup")
    for title, fn_name, make_args in workloads():
        results, best = {}, {}
        for name, mod in backends.items():
            fn = getattr(mod, fn_name)
            results[name] = fn(*make_args())
            times = []
            for _ in range(args.repeat):
                call_args = make_args()
                start = time.perf_counter()
                fn(*call_args)
                times.append(time.perf_counter() - start)
            best[name] = min(times)
        if len(results) == 2 and not _same(*results.values()):
            raise SystemExit(f"backends disagree on {title}")
        speed = f"{best['python'] / best['compiled']:10.1f}x" if "compiled" in best else ""
        print(f"{title:44s}" + "".join(f"{best[n] * 1e3:10.1f}ms" for n in backends) + "  " + speed)


if __name__ == "__main__":
    main()
