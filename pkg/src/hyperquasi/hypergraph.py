"""k-uniform hypergraphs with optional loop edges.

Edges are k-multisets of vertex ids in ``range(n)``, stored as sorted tuples.
A "loop" edge is one with a repeated vertex; such edges are only accepted
when ``loops_allowed`` is set.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Hypergraph",
    "HypergraphFormatError",
    "new_hypergraph",
    "gen_random",
    "gen_coregular_sum",
    "complete_hypergraph",
    "degree_profile",
    "is_coregular",
    "ordered_edge_count",
    "edge_density_q",
    "read_hypergraph",
    "write_hypergraph",
    "format_hypergraph",
    "parse_hypergraph",
]


class HypergraphFormatError(ValueError):
    """Raised for malformed hypergraph text input; carries the line number."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Hypergraph:
    """Immutable k-uniform hypergraph on vertices ``0..n-1``.

    Use :func:`new_hypergraph` (or the constructor, which does the same
    validation) to build one; edges are canonicalized to sorted tuples,
    deduplicated, and kept in lexicographic order.
    """

    k: int
    n: int
    edges: tuple[tuple[int, ...], ...]
    loops_allowed: bool = False
    _edge_set: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"uniformity k must be >= 2, got {self.k}")
        if self.n < 1:
            raise ValueError(f"vertex count n must be >= 1, got {self.n}")
        canon = set()
        for raw in self.edges:
            e = tuple(sorted(int(v) for v in raw))
            if len(e) != self.k:
                raise ValueError(f"edge {tuple(raw)} has {len(e)} entries, expected k={self.k}")
            if e[0] < 0 or e[-1] >= self.n:
                raise ValueError(f"edge {tuple(raw)} has a vertex outside [0, {self.n})")
            if not self.loops_allowed and len(set(e)) != self.k:
                raise ValueError(f"edge {tuple(raw)} repeats a vertex but loops are not allowed")
            canon.add(e)
        object.__setattr__(self, "edges", tuple(sorted(canon)))
        object.__setattr__(self, "_edge_set", frozenset(canon))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, multiset: Iterable[int]) -> bool:
        return tuple(sorted(multiset)) in self._edge_set

    def adjacency_tensor(self) -> np.ndarray:
        """Dense symmetric 0/1 array of shape ``(n,)*k``; one at every ordering of every edge."""
        T = np.zeros((self.n,) * self.k)
        for e in self.edges:
            for perm in set(itertools.permutations(e)):
                T[perm] = 1.0
        return T

    def adjacency_matrix(self) -> np.ndarray:
        if self.k != 2:
            raise ValueError("adjacency_matrix is only defined for k = 2")
        return self.adjacency_tensor()

    def induced_edge_count(self, U: Iterable[int]) -> int:
        Uset = set(U)
        return sum(1 for e in self.edges if all(v in Uset for v in e))


def new_hypergraph(k: int, n: int, edges: Iterable[Sequence[int]], loops_allowed: bool = False) -> Hypergraph:
    return Hypergraph(k, n, tuple(tuple(e) for e in edges), loops_allowed)


def complete_hypergraph(k: int, n: int, loops: bool = False) -> Hypergraph:
    """All k-subsets (or all k-multisets when ``loops``) of ``range(n)``."""
    gen = itertools.combinations_with_replacement if loops else itertools.combinations
    return Hypergraph(k, n, tuple(gen(range(n), k)), loops)


def gen_random(k: int, n: int, p: float, seed: int) -> Hypergraph:
    """Binomial random hypergraph: each k-subset kept independently with probability p.

    Subsets are visited in lexicographic (rank) order and the r-th subset is
    decided by the r-th draw of a Philox stream keyed by ``seed``, so the
    output depends only on ``(k, n, p, seed)``.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    subsets = list(itertools.combinations(range(n), k))
    rng = np.random.Generator(np.random.Philox(key=seed))
    draws = rng.random(len(subsets))
    kept = tuple(s for s, u in zip(subsets, draws) if u < p)
    return Hypergraph(k, n, kept, False)


def gen_coregular_sum(k: int, n: int, residues: Iterable[int]) -> Hypergraph:
    """All k-multisets whose entry sum mod n lies in ``residues``.

    Any (k-1)-multiset S extends to exactly one edge per residue (the missing
    entry is forced), so the result is ``len(set(residues))``-coregular.
    """
    R = {int(r) % n for r in residues}
    if not R:
        raise ValueError("residue set must be non-empty")
    edges = tuple(e for e in itertools.combinations_with_replacement(range(n), k) if sum(e) % n in R)
    return Hypergraph(k, n, edges, True)


def degree_profile(h: Hypergraph) -> dict[tuple[int, ...], int]:
    """Number of edges containing each (k-1)-multiset as a sub-multiset.

    Every (k-1)-multiset over the vertex set appears as a key, including
    those of degree zero.
    """
    prof = dict.fromkeys(itertools.combinations_with_replacement(range(h.n), h.k - 1), 0)
    for e in h.edges:
        for sub in {e[:i] + e[i + 1:] for i in range(h.k)}:
            prof[sub] += 1
    return prof


def is_coregular(h: Hypergraph) -> int | None:
    """Return d if every (k-1)-multiset lies in exactly d edges, else None."""
    degrees = set(degree_profile(h).values())
    if len(degrees) == 1:
        return degrees.pop()
    return None


def ordered_edge_count(h: Hypergraph) -> int:
    """Number of ordered k-tuples whose underlying multiset is an edge.

    Equals ``k! * |E|`` when no edge repeats a vertex; a loop edge with
    multiplicities m_1, m_2, ... contributes ``k! / (m_1! m_2! ...)``.
    """
    total = 0
    kf = math.factorial(h.k)
    for e in h.edges:
        denom = 1
        for m in Counter(e).values():
            denom *= math.factorial(m)
        total += kf // denom
    return total


def edge_density_q(h: Hypergraph) -> float:
    """Ordered edge density ``ordered_edge_count(h) / n**k``.

    For loopless hypergraphs this is ``k! |E| / n**k``; for a d-coregular
    hypergraph with loops it is exactly ``d / n``.
    """
    return ordered_edge_count(h) / h.n ** h.k


def format_hypergraph(h: Hypergraph) -> str:
    lines = [f"k={h.k} n={h.n} loops={int(h.loops_allowed)}"]
    lines.extend(" ".join(map(str, e)) for e in h.edges)
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> Hypergraph:
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            try:
                fields = dict(tok.split("=", 1) for tok in line.split())
                header = (int(fields["k"]), int(fields["n"]), bool(int(fields.get("loops", "0"))))
            except (ValueError, KeyError) as exc:
                raise HypergraphFormatError(f"bad header {line!r}; expected 'k=<int> n=<int> loops=<0|1>'", lineno) from exc
            continue
        try:
            edge = tuple(int(tok) for tok in line.split())
        except ValueError as exc:
            raise HypergraphFormatError(f"non-integer vertex id in {line!r}", lineno) from exc
        k, n, loops = header
        if len(edge) != k:
            raise HypergraphFormatError(f"edge {line!r} has {len(edge)} entries, expected k={k}", lineno)
        if min(edge) < 0 or max(edge) >= n:
            raise HypergraphFormatError(f"vertex id out of range [0, {n}) in {line!r}", lineno)
        if not loops and len(set(edge)) != k:
            raise HypergraphFormatError(f"repeated vertex in {line!r} but loops=0", lineno)
        edges.append(edge)
    if header is None:
        raise HypergraphFormatError("missing header line")
    k, n, loops = header
    return Hypergraph(k, n, tuple(edges), loops)


def read_hypergraph(path: str | os.PathLike) -> Hypergraph:
    with open(path) as fh:
        return parse_hypergraph(fh.read())


def write_hypergraph(h: Hypergraph, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        fh.write(format_hypergraph(h))
