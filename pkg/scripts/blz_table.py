"""Reduced Betti numbers and eta of the matching complexes M(K_{n,n})."""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from topmatch.complexes import matching_complex
from topmatch.graphcore import complete_bipartite
from topmatch.homology import eta, reduced_betti_numbers


@dataclass
class Config:
    n_max: int = 5


def main(cfg: Config) -> None:
    print(f"{'n':>2}  {'f-vector':<32} {'reduced betti (from -1)':<28} eta  floor(2n/3)  secs")
    for n in range(1, cfg.n_max + 1):
        t0 = time.perf_counter()
        c = matching_complex(complete_bipartite(n, n))
        betti = reduced_betti_numbers(c)
        print(f"{n:>2}  {str(c.f_vector()):<32} {str(betti):<28} {eta(c):>3}  {2 * n // 3:>11}  "
              f"{time.perf_counter() - t0:.2f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n-max", type=int, default=Config.n_max)
    main(Config(**vars(p.parse_args())))
