"""Exhaustive and random audits of CON's sequence strategy on K_{n,n}."""

from __future__ import annotations

import argparse
from collections import Counter
from dataclasses import dataclass

from topmatch.graphcore import complete_bipartite, line_graph
from topmatch.game import psi
from topmatch.homology import INFINITY
from topmatch.strategy import all_playouts, audit_transcript, con_strategy_play, random_adversary


@dataclass
class Config:
    exhaustive: tuple[int, ...] = (2, 3, 4)
    random_n: int = 5
    random_games: int = 2000
    seed: int = 0


def summarise(label: str, transcripts) -> int:
    ts: Counter = Counter()
    failures = Counter()
    for tr in transcripts:
        ts[tr.value] += 1
        for c in audit_transcript(tr).failures():
            failures[c.name] += 1
    values = ", ".join(f"{'inf' if v == INFINITY else v}: {ts[v]}" for v in sorted(ts))
    print(f"{label:<22} playouts {sum(ts.values()):>6}  values {{{values}}}  failed checks {dict(failures) or 0}")
    return sum(failures.values())


def main(cfg: Config) -> int:
    bad = 0
    for n in cfg.exhaustive:
        g = complete_bipartite(n, n)
        extra = f" psi(L)={psi(line_graph(g))}" if n <= 3 else ""
        bad += summarise(f"K_{n},{n} exhaustive{extra}", all_playouts(g))
    g = complete_bipartite(cfg.random_n, cfg.random_n)
    games = (con_strategy_play(g, random_adversary(cfg.seed * 1_000_003 + i, 0.7)) for i in range(cfg.random_games))
    bad += summarise(f"K_{cfg.random_n},{cfg.random_n} random", games)
    return 1 if bad else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--exhaustive", type=int, nargs="+", default=list(Config.exhaustive))
    p.add_argument("--random-n", type=int, default=Config.random_n)
    p.add_argument("--random-games", type=int, default=Config.random_games)
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    raise SystemExit(main(Config(tuple(a.exhaustive), a.random_n, a.random_games, a.seed)))
