"""Runnable checks of the theorems, conjectures and fixtures this package
encodes, producing a :class:`VerificationReport`.

Every check is split into units (one per order n or vertex count). Units are
pure functions of their parameters and the derived seeds, so their results
are cached and can be computed on a process pool.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import config
from .cache import ResultCache
from .errors import InputError
from .game import psi
from .graphcore import Graph, all_labeled_graphs, complete_bipartite, graph_from_mask, igamma, max_matching
from .homology import INFINITY, eta_independence, eta_matching
from .latin import (
    cyclic_latin,
    max_partial_transversal,
    random_equi_array,
    random_latin,
    stein_array,
)
from .rainbow import (
    _ceil,
    average_distinct_symbols,
    bound_stein23,
    isr_exists,
    jin_yuster,
    max_rainbow_matching,
    multigraph_example,
    random_stein_instance,
    stein_average_bound,
    stein_colors,
    verify_equirep,
)


def derive_seed(seed: int, *parts) -> int:
    """Independent, reproducible RNG seed for one instance of a sweep."""
    blob = ":".join(map(str, (seed, *parts))).encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


@dataclass
class CheckOutcome:
    name: str
    kind: str  # theorem | conjecture | remark | fixture
    outcome: str  # pass | fail | discovery | vacuous | mismatch
    detail: str
    counterexamples: list = field(default_factory=list)

    @property
    def label(self) -> str:
        if self.outcome == "fail":
            return "THEOREM VIOLATION" if self.kind in ("theorem", "fixture") else "FAIL"
        if self.outcome == "discovery":
            return "DISCOVERY"
        return self.outcome.upper()


@dataclass
class VerificationReport:
    command: str
    parameters: dict
    seed: int
    checks: list[CheckOutcome] = field(default_factory=list)
    wall_clock: float = 0.0
    engine_version: str = config.ENGINE_VERSION
    cache_hits: int = 0

    @property
    def exit_code(self) -> int:
        return 1 if any(c.outcome in ("fail", "discovery") for c in self.checks) else 0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["exit_code"] = self.exit_code
        for c, d in zip(self.checks, out["checks"]):
            d["label"] = c.label
        return out

    def table(self) -> str:
        width = max((len(c.name) for c in self.checks), default=4)
        lines = [f"{self.command}  seed={self.seed}  params={self.parameters}"]
        for c in self.checks:
            lines.append(f"  {c.name:<{width}}  {c.kind:<10}  {c.label:<17}  {c.detail}")
            if c.counterexamples:
                lines.append(f"    first counterexample: {json.dumps(c.counterexamples[0], default=str)}")
        lines.append(f"  ({self.wall_clock:.2f}s, cache hits {self.cache_hits})")
        return "\n".join(lines)


class Runner:
    """Evaluates units through the cache, optionally on a process pool."""

    def __init__(self, cache: ResultCache | None = None, threads: int = 1, seed: int = 0):
        self.cache = cache or ResultCache(None)
        self.threads = max(1, threads)
        self.seed = seed

    def units(self, op: str, jobs: list[tuple]) -> list:
        """``jobs`` are (fn, *args); returns results in order."""
        results: list = [None] * len(jobs)
        todo = []
        for i, (fn, *args) in enumerate(jobs):
            hit = self.cache.get(op, fn.__name__, args)
            if hit is None:
                todo.append(i)
            else:
                results[i] = hit
        if self.threads > 1 and len(todo) > 1:
            with ProcessPoolExecutor(self.threads) as pool:
                futs = {i: pool.submit(jobs[i][0], *jobs[i][1:]) for i in todo}
                for i, fut in futs.items():
                    results[i] = fut.result()
        else:
            for i in todo:
                results[i] = jobs[i][0](*jobs[i][1:])
        for i in todo:
            self.cache.put(op, jobs[i][0].__name__, list(jobs[i][1:]), results[i])
        return results


def _fmt(v) -> str:
    return "inf" if v == INFINITY else str(v)


# -- units (top level so they pickle) ------------------------------------------


def unit_eta_all(k: int) -> list:
    return [eta_independence(g) for g in all_labeled_graphs(k)]


def unit_psi_all(k: int) -> list:
    return [psi(g) for g in all_labeled_graphs(k)]


def unit_igamma_nu_all(k: int) -> list:
    out = []
    for g in all_labeled_graphs(k):
        ig = None if g.has_isolated_vertex() and g.vertices else igamma(g)
        out.append([ig, max_matching(g)])
    return out


def random_graph(seed: int, i: int) -> Graph:
    rng = random.Random(derive_seed(seed, "graph", i))
    k = rng.choice([6, 7])
    return graph_from_mask(k, rng.getrandbits(k * (k - 1) // 2))


def unit_etapsi_sample(seed: int, samples: int) -> dict:
    bad = []
    for i in range(samples):
        g = random_graph(seed, i)
        p, e = psi(g), eta_independence(g)
        if p > e:
            bad.append({"graph": g.to_dict(), "psi": p, "eta": e})
    return {"checked": samples, "violations": bad}


def unit_blz(n: int) -> dict:
    return {"eta": eta_matching(complete_bipartite(n, n))}


def theorem_eta_bound(n: int, size: int) -> Fraction:
    return Fraction(size, n) - Fraction(n, 3) - Fraction(1, 2)


def unit_theorem_eta(n: int, seed: int, samples: int) -> dict:
    kn = complete_bipartite(n, n)
    if n <= 2:
        masks = range(1 << (n * n))
    else:
        rng = random.Random(derive_seed(seed, "theorem-eta", n))
        masks = [rng.getrandbits(n * n) for _ in range(samples)]
    bad = []
    memo: dict[int, object] = {}
    checked = 0
    for mask in masks:
        checked += 1
        edges = [kn.edge_list[e] for e in range(n * n) if mask >> e & 1]
        bound = theorem_eta_bound(n, len(edges))
        need = max(_ceil(bound), 0)
        if need == 0:
            continue
        if mask not in memo:
            memo[mask] = eta_matching(Graph.from_edges(2 * n, edges), cap=need)
        if memo[mask] < bound:
            bad.append({"edges": edges, "eta": memo[mask], "bound": str(bound)})
    return {"checked": checked, "violations": bad}


def unit_stein23(n: int, seed: int, samples: int) -> dict:
    sizes, below_n1 = [], []
    for i in range(samples):
        inst = random_stein_instance(n, derive_seed(seed, "stein", n, i))
        size, _ = max_rainbow_matching(inst)
        sizes.append(size)
        if size < n - 1:
            below_n1.append({"colors": stein_colors(inst), "size": size})
    return {"sizes": sizes, "below_n_minus_1": below_n1}


def unit_stein_average(n: int, seed: int, samples: int) -> dict:
    bound = stein_average_bound(n)
    worst, bad = None, []
    for i in range(samples):
        arr = random_equi_array(n, derive_seed(seed, "equi", n, i))
        avg = average_distinct_symbols(arr)
        worst = avg if worst is None else min(worst, avg)
        if avg < bound:
            bad.append({"cells": [list(r) for r in arr.cells], "average": str(avg)})
    return {"bound": str(bound), "min_average": str(worst), "violations": bad}


def unit_latin_sizes(n: int, seed: int, samples: int, kind: str) -> list:
    out = []
    for i in range(samples):
        s = derive_seed(seed, kind, n, i)
        arr = random_latin(n, s) if kind == "latin" else random_equi_array(n, s)
        out.append([max_partial_transversal(arr).size, [list(r) for r in arr.cells]])
    return out


def random_cell_partition(n: int, seed: int) -> list[list[tuple[int, int]]]:
    rng = random.Random(seed)
    m = rng.randint(1, n)
    classes: list[list[tuple[int, int]]] = [[] for _ in range(m)]
    for i in range(n):
        for j in range(n):
            classes[rng.randrange(m)].append((i, j))
    return [c for c in classes if c]


def unit_equirep(n: int, seed: int, samples: int) -> dict:
    bad = []
    for i in range(samples):
        classes = random_cell_partition(n, derive_seed(seed, "equirep", n, i))
        ok, rep = verify_equirep(n, classes)
        if not ok:
            bad.append({"classes": classes, "report": rep})
    return {"checked": samples, "counterexamples": bad}


# -- checks --------------------------------------------------------------------


def _violations(name, kind, checked, bad, what):
    if bad:
        return CheckOutcome(name, kind, "fail" if kind == "theorem" else "discovery",
                            f"{len(bad)} of {checked} {what} violate the bound", bad[:5])
    return CheckOutcome(name, kind, "pass", f"{checked} {what}, zero violations")


def check_etapsi(run: Runner, vertices: int = 5, samples: int = 500) -> list[CheckOutcome]:
    out = []
    ks = list(range(1, vertices + 1))
    etas = run.units("eta-all", [(unit_eta_all, k) for k in ks])
    psis = run.units("psi-all", [(unit_psi_all, k) for k in ks])
    for k, es, ps in zip(ks, etas, psis):
        bad = [{"graph": graph_from_mask(k, m).to_dict(), "psi": p, "eta": e}
               for m, (e, p) in enumerate(zip(es, ps)) if p > e]
        out.append(_violations(f"psi<=eta k={k}", "theorem", len(es), bad, "labeled graphs"))
    if samples:
        (res,) = run.units("etapsi-sample", [(unit_etapsi_sample, run.seed, samples)])
        out.append(_violations("psi<=eta k=6..7", "theorem", res["checked"], res["violations"], "seeded graphs"))
    return out


def _domination_checks(run: Runner, vertices: int, which: str) -> list[CheckOutcome]:
    out = []
    ks = list(range(1, vertices + 1))
    etas = run.units("eta-all", [(unit_eta_all, k) for k in ks])
    params = run.units("igamma-nu-all", [(unit_igamma_nu_all, k) for k in ks])
    for k, es, ps in zip(ks, etas, params):
        bad = []
        vacuous = 0
        for m, (e, (ig, nu)) in enumerate(zip(es, ps)):
            if which == "igamma":
                if ig is None:
                    # an isolated vertex makes I(G) a cone
                    vacuous += 1
                    if e != INFINITY:
                        bad.append({"graph": graph_from_mask(k, m).to_dict(), "eta": e, "note": "cone not acyclic"})
                elif ig > e:
                    bad.append({"graph": graph_from_mask(k, m).to_dict(), "igamma": ig, "eta": e})
            elif Fraction(nu, 2) > e:
                bad.append({"graph": graph_from_mask(k, m).to_dict(), "nu": nu, "eta": e})
        name = f"igamma<=eta k={k}" if which == "igamma" else f"nu/2<=eta k={k}"
        o = _violations(name, "theorem", len(es), bad, "labeled graphs")
        if vacuous and not bad:
            o.detail += f" ({vacuous} with an isolated vertex: eta = inf)"
        out.append(o)
    return out


def check_igamma(run: Runner, vertices: int = 6) -> list[CheckOutcome]:
    return _domination_checks(run, vertices, "igamma")


def check_nu2(run: Runner, vertices: int = 6) -> list[CheckOutcome]:
    return _domination_checks(run, vertices, "nu")


def check_blz(run: Runner, ns=(2, 3, 4, 5)) -> list[CheckOutcome]:
    out = []
    res = run.units("blz", [(unit_blz, n) for n in ns])
    for n, r in zip(ns, res):
        e, floor = r["eta"], (2 * n) // 3
        out.append(CheckOutcome(f"blz n={n}", "theorem", "pass" if e >= floor else "fail",
                                f"eta(M(K_{n},{n})) = {_fmt(e)} >= floor(2n/3) = {floor}"))
        out.append(CheckOutcome(f"blz-equality n={n}", "remark", "pass" if e == floor else "mismatch",
                                f"eta = {_fmt(e)} vs floor(2n/3) = {floor} (rational coefficients)"))
    return out


def check_theorem_eta(run: Runner, ns=(2, 3), samples: int = 2000) -> list[CheckOutcome]:
    res = run.units("theorem-eta", [(unit_theorem_eta, n, run.seed, samples) for n in ns])
    return [_violations(f"theorem-eta n={n}", "theorem", r["checked"], r["violations"], "edge sets F")
            for n, r in zip(ns, res)]


def check_stein23(run: Runner, ns=(3, 4, 5), samples: int = 500) -> list[CheckOutcome]:
    out = []
    res = run.units("stein23", [(unit_stein23, n, run.seed, samples) for n in ns])
    for n, r in zip(ns, res):
        need = _ceil(bound_stein23(n))
        bad = [s for s in r["sizes"] if s < need]
        low = min(r["sizes"])
        out.append(CheckOutcome(f"stein23 n={n}", "theorem", "fail" if bad else "pass",
                                f"min observed {low} >= ceil(2n/3 - 1/2) = {need} over {samples} instances"))
        k = len(r["below_n_minus_1"])
        out.append(CheckOutcome(f"steinknn n={n}", "conjecture", "discovery" if k else "pass",
                                f"{k} of {samples} instances below n-1 = {n - 1}", r["below_n_minus_1"][:5]))
    return out


def check_stein_average(run: Runner, ns=(3, 4, 5), samples: int = 50) -> list[CheckOutcome]:
    res = run.units("stein-average", [(unit_stein_average, n, run.seed, samples) for n in ns])
    out = []
    for n, r in zip(ns, res):
        o = _violations(f"stein-average n={n}", "theorem", samples, r["violations"], "equi-n arrays")
        o.detail += f"; min average {r['min_average']} vs bound {r['bound']}"
        out.append(o)
    return out


def check_koksma(run: Runner, ns=(4, 5, 6, 7), samples: int = 100) -> list[CheckOutcome]:
    res = run.units("latin-sizes", [(unit_latin_sizes, n, run.seed, samples, "latin") for n in ns])
    out = []
    for n, r in zip(ns, res):
        need = -(-2 * n // 3)
        bad = [{"cells": cells, "size": s} for s, cells in r if s < need]
        o = _violations(f"koksma n={n}", "theorem", samples, bad, "Latin squares")
        o.detail += f"; min {min(s for s, _ in r)} vs ceil(2n/3) = {need}"
        out.append(o)
    return out


def check_ryser(run: Runner, ns=(3, 5, 7), samples: int = 100) -> list[CheckOutcome]:
    ns = [n for n in ns if n % 2]
    res = run.units("latin-sizes", [(unit_latin_sizes, n, run.seed, samples, "latin") for n in ns])
    return [_violations(f"ryser n={n}", "conjecture", samples,
                        [{"cells": c, "size": s} for s, c in r if s < n], "odd Latin squares")
            for n, r in zip(ns, res)]


def check_stein_brualdi(run: Runner, ns=(2, 3, 4, 5, 6), samples: int = 100) -> list[CheckOutcome]:
    out = []
    for kind, label in (("latin", "Latin squares"), ("equi", "equi-n arrays")):
        res = run.units("latin-sizes", [(unit_latin_sizes, n, run.seed, samples, kind) for n in ns])
        for n, r in zip(ns, res):
            bad = [{"cells": c, "size": s} for s, c in r if s < n - 1]
            out.append(_violations(f"stein-brualdi {kind} n={n}", "conjecture", samples, bad, label))
    return out


def check_equirep(run: Runner, ns=(2, 3, 4), samples: int = 100) -> list[CheckOutcome]:
    res = run.units("equirep", [(unit_equirep, n, run.seed, samples) for n in ns])
    return [_violations(f"equirep n={n}", "conjecture", r["checked"], r["counterexamples"], "partitions")
            for n, r in zip(ns, res)]


def check_fixtures(run: Runner) -> list[CheckOutcome]:
    out = []
    _, jy = jin_yuster()
    ok, _ = isr_exists(jy)
    out.append(CheckOutcome("jin-yuster", "fixture", "fail" if ok else "pass", "no ISR (81 choices)"))
    for k in (2, 3):
        _, inst = multigraph_example(k)
        size, _ = max_rainbow_matching(inst)
        out.append(CheckOutcome(f"multigraph k={k}", "fixture", "pass" if size < inst.m else "fail",
                                f"max rainbow matching {size} < {inst.m} classes"))
    for n in (2, 4, 6):
        r = max_partial_transversal(cyclic_latin(n))
        out.append(CheckOutcome(f"cyclic-latin n={n}", "fixture", "pass" if r.size == n - 1 else "fail",
                                f"max partial transversal {r.size} (expected {n - 1})"))
    for n in range(2, 7):
        r = max_partial_transversal(stein_array(n))
        out.append(CheckOutcome(f"stein-array n={n}", "fixture", "pass" if r.size == n - 1 else "fail",
                                f"max partial transversal {r.size} (expected {n - 1})"))
    return out


CHECKS = {
    "etaPsi": check_etapsi,
    "igamma": check_igamma,
    "nu2": check_nu2,
    "blz": check_blz,
    "theorem-eta": check_theorem_eta,
    "stein23": check_stein23,
    "stein-average": check_stein_average,
    "koksma": check_koksma,
    "ryser": check_ryser,
    "stein-brualdi": check_stein_brualdi,
    "equirep": check_equirep,
    "fixtures": check_fixtures,
}


def run_check(name: str, run: Runner, **params) -> VerificationReport:
    if name not in CHECKS:
        raise InputError(f"unknown check {name!r}")
    params = {k: v for k, v in params.items() if v is not None}
    start = time.perf_counter()
    hits0 = run.cache.hits
    checks = CHECKS[name](run, **params)
    rep = VerificationReport(f"verify {name}", params, run.seed, checks)
    rep.wall_clock = time.perf_counter() - start
    rep.cache_hits = run.cache.hits - hits0
    return rep
