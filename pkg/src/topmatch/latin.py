"""Latin squares, equi-n symbol arrays and partial transversals."""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass

from .errors import InputError
from .rainbow import ColorPartition, stein_from_colors


@dataclass(frozen=True)
class SymbolArray:
    n: int
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.cells) != self.n or any(len(r) != self.n for r in self.cells):
            raise InputError(f"array must be {self.n}x{self.n}")

    @classmethod
    def from_rows(cls, rows) -> SymbolArray:
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        return cls(len(rows), rows)

    def symbols(self) -> set[int]:
        return {x for r in self.cells for x in r}

    def to_text(self) -> str:
        return f"{self.n}\n" + "\n".join(" ".join(map(str, r)) for r in self.cells) + "\n"

    @classmethod
    def from_text(cls, text: str) -> SymbolArray:
        lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        try:
            n = int(lines[0][0])
            arr = cls.from_rows(lines[1 : n + 1])
        except (IndexError, ValueError) as exc:
            raise InputError(f"bad array text: {exc}") from exc
        if arr.n != n:
            raise InputError(f"header says {n} rows, found {arr.n}")
        return arr

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "cells": [list(r) for r in self.cells]})

    @classmethod
    def from_json(cls, text: str) -> SymbolArray:
        data = json.loads(text)
        arr = cls.from_rows(data["cells"])
        if arr.n != data["n"]:
            raise InputError("n does not match the cell rows")
        return arr


def is_latin(arr: SymbolArray) -> bool:
    alphabet = set(range(arr.n))
    rows_ok = all(set(r) == alphabet for r in arr.cells)
    cols_ok = all({arr.cells[i][j] for i in range(arr.n)} == alphabet for j in range(arr.n))
    return rows_ok and cols_ok


def is_equi_n(arr: SymbolArray) -> bool:
    counts = Counter(x for r in arr.cells for x in r)
    return all(c == arr.n for c in counts.values())


def cyclic_latin(n: int) -> SymbolArray:
    if n < 1:
        raise InputError("n must be positive")
    return SymbolArray.from_rows([[(i + j) % n for j in range(n)] for i in range(n)])


def stein_array(n: int) -> SymbolArray:
    """Row i is constant i except the last column, which holds i+1 mod n."""
    if n < 1:
        raise InputError("n must be positive")
    return SymbolArray.from_rows([[i] * (n - 1) + [(i + 1) % n] for i in range(n)])


@dataclass
class TransversalResult:
    size: int
    cells: list[tuple[int, int]]
    exact: bool = True


def max_partial_transversal(arr: SymbolArray, exact_limit: int = 9, node_budget: int = 5_000_000) -> TransversalResult:
    """Largest set of cells with distinct rows, columns and symbols.

    Rows are visited in order; a row contributes one free cell (columns
    ascending) or is skipped. Branches that cannot beat the incumbent with the
    remaining rows are cut, so the first optimum found is the
    lexicographically least one. Above ``exact_limit`` (or once
    ``node_budget`` nodes are spent) the result is only a lower bound and is
    flagged ``exact=False``.
    """
    n = arr.n
    cells = arr.cells
    syms = {x: k for k, x in enumerate(sorted(arr.symbols()))}
    code = [[syms[x] for x in r] for r in cells]
    cap = min(n, len(syms))
    best: list = [-1, []]
    chosen: list[tuple[int, int]] = []
    nodes = [0]
    budget = node_budget if n <= exact_limit else min(node_budget, 200_000)

    class _Out(Exception):
        pass

    def go(i: int, cols: int, used: int) -> None:
        nodes[0] += 1
        if nodes[0] > budget:
            raise _Out
        if len(chosen) + (n - i) <= best[0] or best[0] == cap:
            return
        if i == n:
            best[0], best[1] = len(chosen), list(chosen)
            return
        row = code[i]
        for j in range(n):
            if not cols >> j & 1 and not used >> row[j] & 1:
                chosen.append((i, j))
                go(i + 1, cols | 1 << j, used | 1 << row[j])
                chosen.pop()
        go(i + 1, cols, used)

    exact = n <= exact_limit
    try:
        go(0, 0, 0)
    except _Out:
        exact = False
    return TransversalResult(best[0], best[1], exact)


def random_equi_array(n: int, seed: int) -> SymbolArray:
    """Each symbol 0..n-1 exactly n times, shuffled into the grid."""
    rng = random.Random(seed)
    pool = [s for s in range(n) for _ in range(n)]
    rng.shuffle(pool)
    return SymbolArray.from_rows([pool[i * n : (i + 1) * n] for i in range(n)])


def random_latin(n: int, seed: int) -> SymbolArray:
    """Random row, column and symbol permutation of the cyclic square. This is
    not uniform over Latin squares: every output is isotopic to cyclic_latin(n)."""
    rng = random.Random(seed)
    rows, cols, syms = list(range(n)), list(range(n)), list(range(n))
    rng.shuffle(rows)
    rng.shuffle(cols)
    rng.shuffle(syms)
    return SymbolArray.from_rows([[syms[(rows[i] + cols[j]) % n] for j in range(n)] for i in range(n)])


def array_to_color_partition(arr: SymbolArray) -> ColorPartition:
    """Cell (i, j) with symbol s becomes edge (row i, column j) of K_{n,n}
    coloured s; transversals become rainbow matchings."""
    if not is_equi_n(arr):
        raise InputError("array is not equi-n")
    return stein_from_colors(arr.n, [[i, j, arr.cells[i][j]] for i in range(arr.n) for j in range(arr.n)])
