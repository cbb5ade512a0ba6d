"""Pattern hypergraphs built from binary-code labelings.

Every template vertex carries a :class:`Label` ``(part, code, z, copy)``:
``part`` names the block (``"A"``, ``"B2"``, ... for steps; ``"A1"``, ...,
``"B<j>"`` for partial steps; ``"D<i>"`` for the direct four-cycle), ``code``
is its binary string, ``z`` the 1-based expansion index within the block's
part size, and ``copy`` the step copy it came from in paths and cycles.

Within a block, vertices are always listed by code (lexicographic) and then
by expansion index. Attach tuples use the same order; every gluing and every
tensor index convention downstream relies on it.
"""

from __future__ import annotations

import itertools
import json
import os
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .hypergraph import Hypergraph, format_hypergraph
from .partitions import OrderedPartition, PartitionLike, as_partition

__all__ = [
    "Label",
    "Template",
    "CapExceeded",
    "build_step",
    "build_partial_step",
    "build_path",
    "build_cycle",
    "build_cycle4_direct",
    "single_edge",
    "are_isomorphic",
    "is_pi_linear",
    "LinearityWitness",
    "check_linearity_witness",
    "export_template",
]

DEFAULT_ISO_CAP = 16
DEFAULT_LINEAR_CAP = 12


class CapExceeded(ValueError):
    """An exhaustive search was asked to run beyond its configured size cap."""


class Label(NamedTuple):
    part: str
    code: str
    z: int
    copy: int = 0


@dataclass(frozen=True)
class Template:
    name: str
    pi: OrderedPartition
    labels: tuple[Label, ...]
    edges: tuple[tuple[int, ...], ...]
    attach: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    @property
    def k(self) -> int:
        return self.pi.k

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    @property
    def hypergraph(self) -> Hypergraph:
        return Hypergraph(self.k, len(self.labels), self.edges, False)

    def block(self, part: str, copy: int | None = None) -> list[int]:
        """Vertex indices of one block, ordered by code then expansion index."""
        idx = [i for i, lab in enumerate(self.labels) if lab.part == part and (copy is None or lab.copy == copy)]
        return sorted(idx, key=lambda i: (self.labels[i].code, self.labels[i].z))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "pi": list(self.pi),
            "k": self.k,
            "labels": [lab._asdict() for lab in self.labels],
            "edges": [list(e) for e in self.edges],
            "attach": None if self.attach is None else [list(a) for a in self.attach],
        }


def _codes(length: int) -> list[str]:
    if length < 0:
        return []
    return ["".join(bits) for bits in itertools.product("01", repeat=length)]


def _drop_bit(code: str, j: int) -> str:
    """Remove the j-th bit (1-based)."""
    return code[: j - 1] + code[j:]


class _Builder:
    def __init__(self):
        self.labels: list[Label] = []
        self.index: dict[Label, int] = {}
        self.edges: list[tuple[int, ...]] = []

    def block(self, part: str, codes: list[str], size: int, copy: int = 0) -> None:
        for c in sorted(codes):
            for z in range(1, size + 1):
                lab = Label(part, c, z, copy)
                self.index[lab] = len(self.labels)
                self.labels.append(lab)

    def expanded(self, part: str, code: str, size: int, copy: int = 0) -> list[int]:
        return [self.index[Label(part, code, z, copy)] for z in range(1, size + 1)]

    def add_edge(self, verts: list[int]) -> None:
        self.edges.append(tuple(sorted(verts)))


def build_step(pi: PartitionLike) -> Template:
    """The step of type ``pi``.

    Block A holds codes of length t-1 (each expanded k_1 times), block B_j
    codes of length t-2 (expanded k_j times). For each A-code a there is one
    edge; its B_{j+1} vertex carries the code of a with the j-th bit removed.
    """
    pi = as_partition(pi)
    t = pi.t
    b = _Builder()
    b.block("A", _codes(t - 1), pi[0])
    for j in range(2, t + 1):
        b.block(f"B{j}", _codes(t - 2), pi[j - 1])
    for a in _codes(t - 1):
        verts = b.expanded("A", a, pi[0])
        for j in range(1, t):
            verts += b.expanded(f"B{j + 1}", _drop_bit(a, j), pi[j])
        b.add_edge(verts)
    attach0 = tuple(b.index[Label("A", c, z)] for c in _codes(t - 1) if c.endswith("0") for z in range(1, pi[0] + 1))
    attach1 = tuple(b.index[Label("A", c, z)] for c in _codes(t - 1) if c.endswith("1") for z in range(1, pi[0] + 1))
    return Template(f"S_{pi}", pi, tuple(b.labels), tuple(b.edges), (attach0, attach1))


def build_partial_step(pi: PartitionLike, s: int) -> Template:
    """The intermediate hypergraph D_{pi,s} counted by the 2^s-th power.

    Blocks A_1..A_{t-s} carry codes of length s, blocks B_{t-s+1}..B_t codes
    of length s-1. Each length-s code c gives one edge: all A_i vertices with
    code c, plus the B_{t-s+j} vertex whose code is c without its j-th bit.
    """
    pi = as_partition(pi)
    t = pi.t
    if not 0 <= s <= t - 1:
        raise ValueError(f"s must lie in [0, {t - 1}], got {s}")
    b = _Builder()
    for i in range(1, t - s + 1):
        b.block(f"A{i}", _codes(s), pi[i - 1])
    for j in range(1, s + 1):
        b.block(f"B{t - s + j}", _codes(s - 1), pi[t - s + j - 1])
    for c in _codes(s):
        verts = []
        for i in range(1, t - s + 1):
            verts += b.expanded(f"A{i}", c, pi[i - 1])
        for j in range(1, s + 1):
            verts += b.expanded(f"B{t - s + j}", _drop_bit(c, j), pi[t - s + j - 1])
        b.add_edge(verts)
    attach = None
    if s == t - 1:
        a1 = [i for i in range(len(b.labels)) if b.labels[i].part == "A1"]
        attach = tuple(tuple(i for i in a1 if b.labels[i].code.endswith(bit)) for bit in "01")
    return Template(f"D_{pi},{s}", pi, tuple(b.labels), tuple(b.edges), attach)


def _glue(step: Template, ell: int, cyclic: bool, name: str) -> Template:
    nv = step.num_vertices
    parent = list(range(nv * ell))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            # keep the smaller id as representative so the earlier copy's label wins
            parent[max(rx, ry)] = min(rx, ry)

    a0, a1 = step.attach
    joins = [(i, i + 1) for i in range(ell - 1)]
    if cyclic:
        joins.append((ell - 1, 0))
    for i, j in joins:
        for u, v in zip(a1, a0):
            union(i * nv + u, j * nv + v)

    reps = sorted({find(x) for x in range(nv * ell)})
    new_id = {r: i for i, r in enumerate(reps)}
    labels = tuple(step.labels[r % nv]._replace(copy=r // nv) for r in reps)
    edges = []
    for i in range(ell):
        for e in step.edges:
            img = tuple(sorted(new_id[find(i * nv + v)] for v in e))
            if len(set(img)) != len(img):
                raise ValueError(f"gluing produced a degenerate edge in {name}")
            edges.append(img)
    if len(set(edges)) != len(edges):
        raise ValueError(f"gluing produced a repeated edge in {name}")
    attach = None
    if not cyclic:
        attach = (
            tuple(new_id[find(v)] for v in a0),
            tuple(new_id[find((ell - 1) * nv + v)] for v in a1),
        )
    return Template(name, step.pi, labels, tuple(edges), attach)


def build_path(pi: PartitionLike, ell: int) -> Template:
    """ell copies of the step with attach tuple A^(1)_i glued to A^(0)_{i+1}."""
    if ell < 1:
        raise ValueError(f"ell must be >= 1, got {ell}")
    pi = as_partition(pi)
    return _glue(build_step(pi), ell, cyclic=False, name=f"P_{pi},{2 * ell}")


def build_cycle(pi: PartitionLike, ell: int, ordered: bool = False) -> Template:
    """The cycle C_{pi,2*ell}: the path of length 2*ell with its attach tuples glued.

    Unless ``ordered`` is set, the nondecreasing ordering of ``pi`` is used;
    all orderings give isomorphic cycles.
    """
    if ell < 2:
        raise ValueError(f"cycles need ell >= 2, got {ell}")
    pi = as_partition(pi)
    if not ordered:
        pi = pi.canonical()
    return _glue(build_step(pi), ell, cyclic=True, name=f"C_{pi},{2 * ell}")


def build_cycle4_direct(pi: PartitionLike) -> Template:
    """Four-cycle from blocks D_1..D_t of (t-1)-bit codes.

    For every t-bit string s, the vertices of D_i coded by s-without-bit-i
    form an edge (after expanding D_i vertices k_i times).
    """
    pi = as_partition(pi)
    t = pi.t
    b = _Builder()
    for i in range(1, t + 1):
        b.block(f"D{i}", _codes(t - 1), pi[i - 1])
    for s in _codes(t):
        verts = []
        for i in range(1, t + 1):
            verts += b.expanded(f"D{i}", _drop_bit(s, i), pi[i - 1])
        b.add_edge(verts)
    return Template(f"C4direct_{pi}", pi, tuple(b.labels), tuple(b.edges))


def single_edge(pi: PartitionLike) -> Template:
    pi = as_partition(pi)
    return build_partial_step(pi, 0)


def export_template(tpl: Template, prefix: str | os.PathLike) -> tuple[str, str]:
    """Write ``<prefix>.txt`` (hypergraph text format) and ``<prefix>.json`` (labels, attach tuples)."""
    prefix = os.fspath(prefix)
    txt, js = prefix + ".txt", prefix + ".json"
    with open(txt, "w") as fh:
        fh.write(format_hypergraph(tpl.hypergraph))
    with open(js, "w") as fh:
        json.dump(tpl.to_json(), fh, indent=2)
    return txt, js


# ---------------------------------------------------------------------------
# isomorphism


def _as_hypergraph(x) -> Hypergraph:
    return x.hypergraph if isinstance(x, Template) else x


def _refine_colors(hs: Sequence[Hypergraph]) -> list[list[int]]:
    """Joint color refinement; equal colors across graphs mean equal invariants."""
    incident = []
    for h in hs:
        inc = defaultdict(list)
        for e in h.edges:
            for v in e:
                inc[v].append(e)
        incident.append(inc)
    colors = [[len(incident[g][v]) for v in range(h.n)] for g, h in enumerate(hs)]
    while True:
        sigs = []
        for g, h in enumerate(hs):
            col = colors[g]
            sigs.append([
                (col[v], tuple(sorted(tuple(sorted(col[u] for u in e if u != v)) for e in incident[g][v])))
                for v in range(h.n)
            ])
        palette = {sig: i for i, sig in enumerate(sorted({s for sg in sigs for s in sg}))}
        new = [[palette[s] for s in sg] for sg in sigs]
        if all(len(set(n_)) == len(set(c)) for n_, c in zip(new, colors)):
            return new
        colors = new


def _pair_counts(h: Hypergraph) -> dict[tuple[int, int], int]:
    pc: Counter = Counter()
    for e in h.edges:
        for u, v in itertools.combinations(sorted(set(e)), 2):
            pc[(u, v)] += 1
    return pc


def are_isomorphic(f, g, cap: int = DEFAULT_ISO_CAP) -> tuple[bool, dict[int, int] | None]:
    """Exhaustive isomorphism test for small simple hypergraphs.

    Returns ``(True, mapping)`` with ``mapping[v_f] = v_g`` when an
    edge-set-preserving bijection exists, else ``(False, None)``.
    """
    f, g = _as_hypergraph(f), _as_hypergraph(g)
    if max(f.n, g.n) > cap:
        raise CapExceeded(f"isomorphism search capped at {cap} vertices, got {max(f.n, g.n)}")
    if f.k != g.k or f.n != g.n or f.num_edges != g.num_edges:
        return False, None
    cf, cg = _refine_colors([f, g])
    if Counter(cf) != Counter(cg):
        return False, None

    gedges = set(g.edges)
    gsubs = {sub for e in g.edges for r in range(1, g.k + 1) for sub in itertools.combinations(e, r)}
    pf, pg = _pair_counts(f), _pair_counts(g)
    f_inc = defaultdict(list)
    for e in f.edges:
        for v in e:
            f_inc[v].append(e)

    # rare colors first, then stay adjacent to already-placed vertices
    order = []
    placed = set()
    class_size = Counter(cf)
    while len(order) < f.n:
        cand = [v for v in range(f.n) if v not in placed]
        v = min(cand, key=lambda v: (-sum(1 for e in f_inc[v] for u in e if u in placed), class_size[cf[v]], v))
        order.append(v)
        placed.add(v)

    mapping: dict[int, int] = {}
    used = set()

    def consistent(v, w) -> bool:
        for u, x in mapping.items():
            a, b = (u, v) if u < v else (v, u)
            c, d = (x, w) if x < w else (w, x)
            if pf.get((a, b), 0) != pg.get((c, d), 0):
                return False
        for e in f_inc[v]:
            img = [mapping[u] if u != v else w for u in e if u in mapping or u == v]
            img = tuple(sorted(img))
            if len(img) == f.k:
                if img not in gedges:
                    return False
            elif img not in gsubs:
                return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in range(g.n):
            if w in used or cg[w] != cf[v]:
                continue
            if consistent(v, w):
                mapping[v] = w
                used.add(w)
                if search(i + 1):
                    return True
                del mapping[v]
                used.discard(w)
        return False

    if search(0):
        return True, dict(sorted(mapping.items()))
    return False, None


# ---------------------------------------------------------------------------
# pi-linearity


class LinearityWitness(NamedTuple):
    """Edge ordering plus, per edge, its split into blocks of sizes k_1..k_t."""

    order: tuple[tuple[int, ...], ...]
    blocks: tuple[tuple[tuple[int, ...], ...], ...]


def _split_edge(edge: tuple[int, ...], pieces: list[set[int]], pi: OrderedPartition):
    """Partition ``edge`` into blocks of sizes pi so every piece sits inside one block."""
    # merge overlapping pieces: they must share a block
    parent = {v: v for v in edge}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for piece in pieces:
        piece = sorted(piece)
        for u in piece[1:]:
            parent[find(u)] = find(piece[0])
    comps = defaultdict(list)
    for v in edge:
        comps[find(v)].append(v)
    groups = sorted(comps.values(), key=lambda c: (-len(c), c))
    sizes = list(pi)
    bins: list[list[int]] = [[] for _ in sizes]

    def place(i: int) -> bool:
        if i == len(groups):
            return True
        tried = set()
        for j, cap in enumerate(sizes):
            key = (cap - len(bins[j]), len(bins[j]) == 0)
            if len(groups[i]) <= cap - len(bins[j]) and key not in tried:
                tried.add(key)
                bins[j].extend(groups[i])
                if place(i + 1):
                    return True
                del bins[j][-len(groups[i]):]
        return False

    if place(0):
        return tuple(tuple(sorted(b)) for b in bins)
    return None


def is_pi_linear(f, pi: PartitionLike, cap: int = DEFAULT_LINEAR_CAP) -> LinearityWitness | None:
    """Find a pi-linearity witness for the simple hypergraph ``f``, or return None.

    An edge that can be split compatibly with *all* other remaining edges may
    always be placed last: moving it to the end of any valid ordering only
    removes constraints from the other edges. Peeling such edges greedily is
    therefore exact.
    """
    f = _as_hypergraph(f)
    pi = as_partition(pi)
    if pi.k != f.k:
        raise ValueError(f"partition {pi} is not a partition of k={f.k}")
    if f.num_edges > cap:
        raise CapExceeded(f"pi-linearity search capped at {cap} edges, got {f.num_edges}")
    remaining = list(f.edges)
    tail: list[tuple[tuple[int, ...], tuple]] = []
    while remaining:
        for e in remaining:
            pieces = [set(e) & set(o) for o in remaining if o != e]
            split = _split_edge(e, [p for p in pieces if p], pi)
            if split is not None:
                tail.append((e, split))
                remaining.remove(e)
                break
        else:
            return None
    tail.reverse()
    return LinearityWitness(tuple(e for e, _ in tail), tuple(s for _, s in tail))


def check_linearity_witness(f, pi: PartitionLike, w: LinearityWitness) -> bool:
    """Independent verification of a witness against the definition."""
    f = _as_hypergraph(f)
    pi = as_partition(pi)
    if sorted(w.order) != sorted(f.edges):
        return False
    for i, (e, blocks) in enumerate(zip(w.order, w.blocks)):
        if tuple(len(b) for b in blocks) != tuple(pi) or sorted(v for b in blocks for v in b) != sorted(e):
            return False
        for prev in w.order[:i]:
            inter = set(prev) & set(e)
            if not any(inter <= set(b) for b in blocks):
                return False
    return True
