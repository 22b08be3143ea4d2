"""Distribution of maximum rainbow matching sizes over seeded random
colourings of K_{n,n} into n classes of size n."""

from __future__ import annotations

import argparse
from collections import Counter
from dataclasses import dataclass

from topmatch.rainbow import _ceil, bound_stein23, max_rainbow_matching, random_stein_instance, stein_colors
from topmatch.verify import derive_seed


@dataclass
class Config:
    ns: tuple[int, ...] = (3, 4, 5, 6)
    samples: int = 500
    seed: int = 0


def main(cfg: Config) -> int:
    discoveries = 0
    for n in cfg.ns:
        hist: Counter[int] = Counter()
        for i in range(cfg.samples):
            inst = random_stein_instance(n, derive_seed(cfg.seed, "stein", n, i))
            size, _ = max_rainbow_matching(inst)
            hist[size] += 1
            if size < n - 1:
                discoveries += 1
                print(f"  n={n} instance {i} has max rainbow matching {size}: {stein_colors(inst)}")
        sizes = ", ".join(f"{s}: {hist[s]}" for s in sorted(hist))
        print(f"n={n}  guaranteed {_ceil(bound_stein23(n))}  observed {{{sizes}}}")
    return 1 if discoveries else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--ns", type=int, nargs="+", default=list(Config.ns))
    p.add_argument("--samples", type=int, default=Config.samples)
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    raise SystemExit(main(Config(tuple(a.ns), a.samples, a.seed)))
