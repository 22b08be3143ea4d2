"""Enumerate graphs on k vertices where eta(I(G)) < nu(G)/2 and report the
smallest ones by edge count."""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from topmatch.graphcore import all_labeled_graphs, canonical_key, max_matching
from topmatch.homology import eta_independence


@dataclass
class Config:
    vertices: int = 6
    show: int = 5


def main(cfg: Config) -> None:
    seen: dict[bytes, tuple] = {}
    total = 0
    for g in all_labeled_graphs(cfg.vertices):
        nu = max_matching(g)
        e = eta_independence(g)
        if 2 * e < nu:
            total += 1
            key = canonical_key(g, canonical=True)
            seen.setdefault(key, (g.num_edges, sorted(g.edge_list[x] for x in g.alive), nu, e))
    print(f"{total} labelled graphs on {cfg.vertices} vertices, {len(seen)} up to isomorphism")
    for m, edges, nu, e in sorted(seen.values())[: cfg.show]:
        print(f"  {m} edges  nu={nu}  eta={e}  {edges}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--vertices", type=int, default=Config.vertices)
    p.add_argument("--show", type=int, default=Config.show)
    main(Config(**vars(p.parse_args())))
