"""Independence and matching complexes as explicit, lexicographically sorted
face lists."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable

from .errors import InputError, SizeError
from .graphcore import Graph, _bits, line_graph

Face = tuple[int, ...]

DEFAULT_FACE_BUDGET = 5_000_000


@dataclass(frozen=True)
class SimplicialComplex:
    """``faces_by_dim[d]`` lists the d-dimensional faces (sorted vertex tuples
    of length d+1) in lexicographic order. ``max_dim`` is set when the
    complex was truncated and higher faces may exist but were not built."""

    ground_size: int
    vertices: tuple[int, ...]
    faces_by_dim: tuple[tuple[Face, ...], ...]
    includes_empty_face: bool = True
    max_dim: int | None = None

    @property
    def top_dim(self) -> int:
        """Dimension of the largest materialised face; -1 for {∅}, -2 for the void complex."""
        if self.faces_by_dim:
            return len(self.faces_by_dim) - 1
        return -1 if self.includes_empty_face else -2

    def faces(self, d: int) -> tuple[Face, ...]:
        if d == -1:
            return ((),) if self.includes_empty_face else ()
        if 0 <= d < len(self.faces_by_dim):
            return self.faces_by_dim[d]
        return ()

    def f_vector(self) -> list[int]:
        return [len(fs) for fs in self.faces_by_dim]

    def is_complete_through(self, d: int) -> bool:
        return self.max_dim is None or d <= self.max_dim

    def maximal_faces(self) -> list[Face]:
        out = []
        for d, fs in enumerate(self.faces_by_dim):
            above = set(self.faces(d + 1))
            covered = set()
            for f in above:
                for i in range(len(f)):
                    covered.add(f[:i] + f[i + 1 :])
            out.extend(f for f in fs if f not in covered)
        if not out and self.includes_empty_face:
            out.append(())
        return out

    def to_dict(self) -> dict:
        return {"ground": self.ground_size, "faces": [list(f) for f in self.maximal_faces()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_maximal_faces(cls, ground_size: int, faces: Iterable[Iterable[int]]) -> SimplicialComplex:
        by_dim: dict[int, set[Face]] = {}
        any_face = False
        for f in faces:
            f = tuple(sorted(set(f)))
            any_face = True
            for r in range(1, len(f) + 1):
                for sub in itertools.combinations(f, r):
                    by_dim.setdefault(r - 1, set()).add(sub)
        top = max(by_dim, default=-1)
        faces_by_dim = tuple(tuple(sorted(by_dim.get(d, ()))) for d in range(top + 1))
        verts = tuple(v for (v,) in faces_by_dim[0]) if faces_by_dim else ()
        return cls(ground_size, verts, faces_by_dim, includes_empty_face=any_face)

    @classmethod
    def from_dict(cls, data: dict) -> SimplicialComplex:
        return cls.from_maximal_faces(data["ground"], data["faces"])


def independence_complex(
    g: Graph, max_dim: int | None = None, budget: int = DEFAULT_FACE_BUDGET
) -> SimplicialComplex:
    """All independent sets of ``g`` of size at most ``max_dim + 1``."""
    g.require_simple()
    adj = g.adjacency
    verts = tuple(sorted(g.vertices))
    level: list[tuple[Face, int]] = [((v,), ~adj[v] & ~((1 << (v + 1)) - 1)) for v in verts]
    allowed = 0
    for v in verts:
        allowed |= 1 << v
    level = [(f, cand & allowed) for f, cand in level]
    faces_by_dim: list[tuple[Face, ...]] = []
    total = 0
    d = 0
    while level and (max_dim is None or d <= max_dim):
        total += len(level)
        if total > budget:
            raise SizeError(f"face budget {budget} exceeded at dimension {d}")
        faces_by_dim.append(tuple(f for f, _ in level))
        nxt = []
        for f, cand in level:
            for w in _bits(cand):
                nxt.append((f + (w,), cand & ~adj[w] & ~((1 << (w + 1)) - 1)))
        level = nxt
        d += 1
    truncated = max_dim is not None and bool(level)
    return SimplicialComplex(
        g.n, verts, tuple(faces_by_dim), True, max_dim if truncated else None
    )


def matching_complex(
    h: Graph, max_dim: int | None = None, budget: int = DEFAULT_FACE_BUDGET
) -> SimplicialComplex:
    """Faces are the matchings of ``h``, over its edge ids."""
    h.require_simple()
    return independence_complex(line_graph(h), max_dim=max_dim, budget=budget)


def void_complex(ground_size: int = 0) -> SimplicialComplex:
    return SimplicialComplex(ground_size, (), (), includes_empty_face=False)


def check_downward_closed(c: SimplicialComplex) -> bool:
    for d in range(1, len(c.faces_by_dim)):
        lower = set(c.faces(d - 1))
        for f in c.faces(d):
            for i in range(len(f)):
                if f[:i] + f[i + 1 :] not in lower:
                    return False
    if c.faces_by_dim and not c.includes_empty_face:
        raise InputError("nonempty complex without the empty face")
    return True
