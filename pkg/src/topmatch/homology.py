"""Reduced rational homology of simplicial complexes and the connectivity
parameter eta.

Ranks are computed by sparse fraction-free column reduction over the
integers: each step replaces a column by ``b*col - a*pivot_col`` and divides
out the content, so no floating point or rational arithmetic is involved and
the rank is exact over Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .complexes import DEFAULT_FACE_BUDGET, Face, SimplicialComplex, independence_complex, matching_complex
from .errors import InputError
from .graphcore import Graph, line_graph

INFINITY = math.inf


@dataclass(frozen=True)
class BoundaryMatrix:
    """Signed incidence matrix of the augmented chain complex in degree ``dim``.

    ``columns[c]`` maps row index to a ±1 entry. For ``dim == 0`` the single
    row is the empty face and every entry is +1.
    """

    dim: int
    rows: tuple[Face, ...]
    cols: tuple[Face, ...]
    columns: tuple[dict[int, int], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    @cached_property
    def rank(self) -> int:
        return integer_rank(self.columns)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * len(self.cols) for _ in self.rows]
        for c, col in enumerate(self.columns):
            for r, v in col.items():
                out[r][c] = v
        return out

    def triplets(self) -> str:
        """One ``row col value`` line per nonzero, column-major."""
        lines = []
        for c, col in enumerate(self.columns):
            for r in sorted(col):
                lines.append(f"{r} {c} {col[r]}")
        return "\n".join(lines) + ("\n" if lines else "")


def boundary_matrix(c: SimplicialComplex, j: int) -> BoundaryMatrix:
    if j < 0 or j > c.top_dim + 1:
        raise InputError(f"boundary degree {j} outside 0..{c.top_dim + 1}")
    if not c.is_complete_through(j):
        raise InputError(f"complex truncated at dimension {c.max_dim}; cannot form boundary {j}")
    rows = c.faces(j - 1)
    cols = c.faces(j)
    index = {f: i for i, f in enumerate(rows)}
    columns = []
    for f in cols:
        col = {}
        for i in range(len(f)):
            col[index[f[:i] + f[i + 1 :]]] = -1 if i % 2 else 1
        columns.append(col)
    return BoundaryMatrix(j, rows, cols, tuple(columns))


def integer_rank(columns) -> int:
    """Rank over Q of a sparse integer matrix given as a list of columns
    (dicts row -> value). Sparsest columns are reduced first, ties broken by
    column index; the pivot of a column is its largest row index."""
    order = sorted(range(len(columns)), key=lambda i: (len(columns[i]), i))
    pivots: dict[int, dict[int, int]] = {}
    for ci in order:
        col = {r: v for r, v in columns[ci].items() if v}
        while col:
            low = max(col)
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = col
                break
            a, b = col[low], piv[low]
            g = math.gcd(a, b)
            ma, mb = b // g, a // g
            if ma != 1:
                col = {r: v * ma for r, v in col.items()}
            for r, v in piv.items():
                x = col.get(r, 0) - mb * v
                if x:
                    col[r] = x
                else:
                    col.pop(r, None)
            if col:
                content = 0
                for v in col.values():
                    content = math.gcd(content, v)
                    if content == 1:
                        break
                if content > 1:
                    col = {r: v // content for r, v in col.items()}
    return len(pivots)


class _Ranks:
    """Lazily computed ranks of the boundary maps of one complex."""

    def __init__(self, c: SimplicialComplex):
        self.c = c
        self._rank: dict[int, int] = {}

    def __call__(self, j: int) -> int:
        if j < 0 or j > self.c.top_dim + 1:
            return 0
        if j not in self._rank:
            self._rank[j] = boundary_matrix(self.c, j).rank
        return self._rank[j]

    def betti(self, j: int) -> int:
        if not self.c.is_complete_through(j + 1):
            raise InputError(
                f"reduced Betti number {j} needs faces through dimension {j + 1}; "
                f"complex truncated at {self.c.max_dim}"
            )
        return len(self.c.faces(j)) - self(j) - self(j + 1)


def reduced_betti(c: SimplicialComplex, j: int) -> int:
    if j < -1:
        raise InputError("reduced homology starts at degree -1")
    return _Ranks(c).betti(j)


def reduced_betti_numbers(c: SimplicialComplex) -> list[int]:
    """[β̃_{-1}, β̃_0, ..., β̃_top] for a complete complex."""
    r = _Ranks(c)
    return [r.betti(j) for j in range(-1, c.top_dim + 1)]


def eta(c: SimplicialComplex, cap: int | None = None):
    """Homological connectivity: the least j >= -1 with β̃_j != 0, plus one
    (equivalently the largest k with β̃_j = 0 for -1 <= j <= k, plus 2).

    Returns ``INFINITY`` when every reduced Betti number vanishes and 0 for
    the void complex. With ``cap`` the result is ``min(eta, cap)``: the
    search stops once vanishing through degree ``cap - 2`` is established, so
    only faces through dimension ``cap - 1`` are needed.
    """
    if not c.includes_empty_face and not c.faces_by_dim:
        return 0
    if cap is not None and cap <= 0:
        return cap
    ranks = _Ranks(c)
    j = -1
    while True:
        if cap is not None and j + 1 >= cap:
            return cap
        if j > c.top_dim:
            if c.max_dim is not None:
                raise InputError("truncated complex: connectivity undetermined")
            return INFINITY if cap is None else cap
        if ranks.betti(j):
            return j + 1
        j += 1


def eta_independence(g: Graph, cap: int | None = None, budget: int = DEFAULT_FACE_BUDGET):
    """eta of the independence complex of ``g``, building only the faces needed."""
    max_dim = None if cap is None else max(cap - 1, 0)
    return eta(independence_complex(g, max_dim=max_dim, budget=budget), cap)


def eta_matching(h: Graph, cap: int | None = None, budget: int = DEFAULT_FACE_BUDGET):
    h.require_simple()
    return eta_independence(line_graph(h), cap=cap, budget=budget)


def euler_characteristic(c: SimplicialComplex) -> int:
    """Reduced Euler characteristic, counting the empty face in degree -1."""
    total = -1 if c.includes_empty_face else 0
    for d, fs in enumerate(c.faces_by_dim):
        total += (-1) ** d * len(fs)
    return total


__all__ = [
    "INFINITY",
    "BoundaryMatrix",
    "boundary_matrix",
    "integer_rank",
    "reduced_betti",
    "reduced_betti_numbers",
    "eta",
    "eta_independence",
    "eta_matching",
    "euler_characteristic",
    "matching_complex",
]
