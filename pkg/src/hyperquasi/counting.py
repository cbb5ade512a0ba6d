"""Exact counts of copies, circuits and partite edges.

Edge-preservation is multiset-based throughout: a vertex map is
edge-preserving iff the image of every edge, read as a multiset, is an edge
of H. Injective maps are labeled copies; arbitrary maps are homomorphisms
(possibly degenerate copies), which only differ when H has loop edges or the
map collapses vertices onto a loop.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .hypergraph import Hypergraph, new_hypergraph
from .multilinear import adjacency_map, flatten_matrix, group, indicator_tensor, power, set_indicator, tuple_index
from .partitions import PartitionLike, as_partition
from .templates import CapExceeded, Template, build_partial_step, build_path, is_pi_linear

__all__ = [
    "CountResult",
    "count_labeled_copies",
    "count_homomorphisms",
    "count_circuits_trace",
    "count_partite_edges",
    "count_via_extension",
    "count_extension_oracle",
    "count_extension_tensor",
    "count_walks_brute",
    "count_walks_matrix",
    "TraceResidualError",
]

DEFAULT_VERTEX_CAP = 12
# backtracking is used when n^|V(F)| is at most this, tensor contraction otherwise
BRUTE_FORCE_LIMIT = 2_000_000
EXACT_TRACE_MAX_DIM = 512
TRACE_RESIDUAL_TOL = 1e-6


class TraceResidualError(ArithmeticError):
    """A floating-point trace was too far from an integer to round safely."""


@dataclass
class CountResult:
    count: int
    method: str
    seconds: float | None = None

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("counts are nonnegative")

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["seconds"] is None:
            del d["seconds"]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _as_hypergraph(f) -> Hypergraph:
    return f.hypergraph if isinstance(f, Template) else f


def _sub_multisets(h: Hypergraph) -> set[tuple[int, ...]]:
    subs = set()
    for e in h.edges:
        for r in range(1, h.k + 1):
            subs.update(itertools.combinations(e, r))
    return subs


def _search_order(f: Hypergraph, fixed: Mapping[int, int]) -> list[int]:
    """Fixed vertices first, then greedily the vertex touching most placed edges."""
    incident = [[e for e in f.edges if v in e] for v in range(f.n)]
    order = [v for v in range(f.n) if v in fixed]
    placed = set(order)
    rest = [v for v in range(f.n) if v not in fixed]
    while rest:
        def score(v):
            return (sum(1 for e in incident[v] for u in e if u in placed), len(incident[v]), -v)

        v = max(rest, key=score)
        order.append(v)
        placed.add(v)
        rest.remove(v)
    return order


def _maps(f: Hypergraph, h: Hypergraph, injective: bool, fixed: Mapping[int, int] | None = None) -> Iterator[list[int]]:
    """Yield every edge-preserving map V(F) -> V(H) extending ``fixed``, as a list."""
    fixed = dict(fixed or {})
    if f.num_edges and (h.num_edges == 0 or f.k != h.k):
        return
    order = _search_order(f, fixed)
    pos = {v: i for i, v in enumerate(order)}
    subs = _sub_multisets(h)
    # edges that become complete at step i, and edges that are partially placed
    full_at = [[] for _ in order]
    part_at = [[] for _ in order]
    for e in f.edges:
        last = max(pos[v] for v in e)
        full_at[last].append(e)
        for v in set(e):
            if pos[v] < last:
                part_at[pos[v]].append(e)
    img = [-1] * f.n
    used = [False] * h.n

    def ok(i: int) -> bool:
        for e in full_at[i]:
            if not h.has_edge(img[u] for u in e):
                return False
        for e in part_at[i]:
            if tuple(sorted(img[u] for u in e if pos[u] <= i)) not in subs:
                return False
        return True

    def rec(i: int):
        if i == len(order):
            yield list(img)
            return
        v = order[i]
        cands = [fixed[v]] if v in fixed else range(h.n)
        for w in cands:
            if injective and used[w]:
                continue
            img[v] = w
            used[w] = True
            if ok(i):
                yield from rec(i + 1)
            used[w] = False
        img[v] = -1

    # a fixed assignment can itself clash with injectivity
    if injective and len(set(fixed.values())) != len(fixed):
        return
    yield from rec(0)


def _check_cap(f: Hypergraph, cap: int) -> None:
    if f.n > cap:
        raise CapExceeded(f"pattern has {f.n} vertices, above the cap of {cap}")


def count_labeled_copies(f, h: Hypergraph, cap: int = DEFAULT_VERTEX_CAP) -> int:
    """Number of edge-preserving injections V(F) -> V(H)."""
    f = _as_hypergraph(f)
    _check_cap(f, cap)
    if f.n > h.n:
        return 0
    return sum(1 for _ in _maps(f, h, injective=True))


# largest intermediate tensor (in elements) the contraction path may create
CONTRACTION_MEMORY_LIMIT = 2 ** 24


def _contract_homomorphisms(f: Hypergraph, h: Hypergraph) -> int:
    """Sum over all vertex maps of the product of edge indicators, as one einsum."""
    T = h.adjacency_tensor().astype(np.int64)
    if f.n > 52:  # einsum subscript limit
        raise CapExceeded("too many pattern vertices for a contraction")
    ops = []
    for e in f.edges:
        ops.append(T)
        ops.append(list(e))
    touched = {v for e in f.edges for v in e}
    if not ops:
        return h.n ** f.n
    # an explicit limit: with a bare "greedy" numpy caps intermediates at the
    # largest input size, which rules out every pairwise contraction here
    total = np.einsum(*ops, [], optimize=("greedy", CONTRACTION_MEMORY_LIMIT))
    return int(total) * h.n ** (f.n - len(touched))


def count_homomorphisms(f, h: Hypergraph, cap: int = DEFAULT_VERTEX_CAP, method: str = "auto") -> CountResult:
    """Number of (not necessarily injective) edge-preserving maps V(F) -> V(H).

    ``method`` is ``"backtracking"``, ``"contraction"`` (einsum over one
    adjacency tensor per pattern edge, exact in int64) or ``"auto"``, which
    backtracks when ``n^|V(F)|`` is small and contracts otherwise.
    """
    f = _as_hypergraph(f)
    _check_cap(f, cap)
    if method == "auto":
        method = "backtracking" if h.n ** f.n <= BRUTE_FORCE_LIMIT else "contraction"
    if method == "backtracking":
        return CountResult(sum(1 for _ in _maps(f, h, injective=False)), "backtracking")
    if method == "contraction":
        if h.n ** f.n >= 2 ** 62:
            raise CapExceeded("homomorphism count could overflow int64")
        return CountResult(_contract_homomorphisms(f, h), "contraction")
    raise ValueError(f"unknown method {method!r}")


def _exact_matrix_trace_power(a: np.ndarray, ell: int) -> int:
    m = np.rint(a)
    if np.max(np.abs(a - m), initial=0.0) > 1e-9:
        raise TraceResidualError("flat matrix has non-integer entries")
    bound = float(np.max(np.abs(m).sum(axis=1), initial=0.0)) ** ell * m.shape[0]
    if bound < 2 ** 62:
        p = np.linalg.matrix_power(m.astype(np.int64), ell)
        return int(np.trace(p))
    mo = m.astype(np.int64).astype(object)
    p = mo
    for _ in range(ell - 1):
        p = p.dot(mo)
    return int(sum(p[i, i] for i in range(p.shape[0])))


def count_circuits_trace(h: Hypergraph, pi: PartitionLike, ell: int, cap: int | None = None) -> CountResult:
    """Labeled circuits of type ``pi`` and length ``2 ell``: ``Tr A^ell`` for the flat matrix A.

    Exact integer arithmetic is used up to side 512; beyond, the float trace
    is rounded and rejected if it is further than ``1e-6 * max(1, |trace|)``
    from an integer.
    """
    if ell < 2:
        raise ValueError(f"circuits need ell >= 2, got {ell}")
    pi = as_partition(pi)
    if pi.k != h.k:
        raise ValueError(f"partition {pi} is not a partition of k={h.k}")
    a = flatten_matrix(adjacency_map(h), pi, cap=cap).entries
    if a.shape[0] <= EXACT_TRACE_MAX_DIM:
        return CountResult(_exact_matrix_trace_power(a, ell), "trace")
    x = float(np.trace(np.linalg.matrix_power(a, ell)))
    r = round(x)
    if abs(x - r) > TRACE_RESIDUAL_TOL * max(1.0, abs(x)):
        raise TraceResidualError(f"trace {x!r} is not close to an integer")
    return CountResult(int(r), "trace")


def _family_sizes(family: Sequence[Sequence[Sequence[int]]], pi: PartitionLike | None) -> tuple[int, ...]:
    if pi is not None:
        return tuple(as_partition(pi))
    sizes = []
    for S in family:
        S = list(S)
        if not S:
            raise ValueError("cannot infer part sizes from an empty set; pass pi")
        sizes.append(len(S[0]))
    return tuple(sizes)


def count_partite_edges(
    h: Hypergraph,
    family: Sequence[Sequence[Sequence[int]]],
    pi: PartitionLike | None = None,
    method: str = "tensor",
) -> int:
    """Number of tuples ``(s_1, ..., s_t)`` in ``S_1 x ... x S_t`` whose multiset union is an edge.

    The tensor route evaluates ``tau_pi`` on the indicator tensors of the
    S_i; the direct route enumerates the product.
    """
    sizes = _family_sizes(family, pi)
    if len(sizes) != len(family):
        raise ValueError(f"{len(family)} sets given for {len(sizes)} parts")
    if sum(sizes) != h.k:
        raise ValueError(f"part sizes {sizes} do not sum to k={h.k}")
    family = [[tuple(sorted(int(v) for v in s)) for s in S] for S in family]
    for S, size in zip(family, sizes):
        for s in S:
            if len(s) != size:
                raise ValueError(f"element {s} does not have {size} entries")
            if s and (s[0] < 0 or s[-1] >= h.n):
                raise ValueError(f"element {s} has a vertex outside [0, {h.n})")
    if any(not S for S in family):
        return 0
    if method == "direct":
        sets = [sorted(set(S)) for S in family]
        return sum(1 for combo in itertools.product(*sets) if h.has_edge(v for s in combo for v in s))
    if method != "tensor":
        raise ValueError(f"unknown method {method!r}")
    phi = group(adjacency_map(h), sizes)
    chis = [set_indicator(S, h.n, size) for S, size in zip(family, sizes)]
    return int(round(phi(*chis)))


def count_via_extension(f, pi: PartitionLike, h: Hypergraph, cap: int = DEFAULT_VERTEX_CAP) -> int:
    """Labeled copies of a pi-linear F via the last-edge extension recursion.

    With E the last edge of a pi-linearity witness, split into blocks
    A_1..A_t, and F_* the rest of F: every labeled copy Q_* of F_* extends to
    ``e(S_1, ..., S_t) * prod_i Delta_i`` copies of F, where S_i holds the
    k_i-sets that contain ``Q_*(A_i & V(F_*))`` and are otherwise disjoint
    from the image of Q_*, and ``Delta_i = |A_i - V(F_*)|!`` counts the
    bijections of A_i onto such a set fixing V(F_*). The partite count runs
    on the loopless edges of H, which forces the chosen sets to be disjoint.
    """
    f = _as_hypergraph(f)
    pi = as_partition(pi)
    _check_cap(f, cap)
    witness = is_pi_linear(f, pi)
    if witness is None:
        raise ValueError(f"pattern is not {pi}-linear")
    if f.n > h.n:
        return 0
    last, blocks = witness.order[-1], witness.blocks[-1]
    rest_edges = witness.order[:-1]
    star_vertices = sorted({v for e in rest_edges for v in e} | (set(range(f.n)) - set(last)))
    relabel = {v: i for i, v in enumerate(star_vertices)}
    f_star = new_hypergraph(f.k, max(1, len(star_vertices)), [[relabel[v] for v in e] for e in rest_edges])
    h_simple = new_hypergraph(h.k, h.n, [e for e in h.edges if len(set(e)) == h.k])
    in_star = set(star_vertices)
    deltas = [math.factorial(sum(1 for v in b if v not in in_star)) for b in blocks]
    weight = math.prod(deltas)

    if star_vertices:
        copies = _maps(f_star, h, injective=True)
    else:
        copies = iter([[]])
    total = 0
    for q in copies:
        image = {q[relabel[v]] for v in star_vertices}
        free = [w for w in range(h.n) if w not in image]
        family = []
        for b in blocks:
            anchor = [q[relabel[v]] for v in b if v in in_star]
            extra = len(b) - len(anchor)
            family.append([tuple(sorted(anchor + list(z))) for z in itertools.combinations(free, extra)])
        total += count_partite_edges(h_simple, family, pi=[len(b) for b in blocks]) * weight
    return total


def _delta_map(tpl: Template, delta) -> dict[int, int]:
    """Normalize ``delta`` to {template vertex: H vertex} over all A-block vertices."""
    a_vertices = [i for i, lab in enumerate(tpl.labels) if lab.part.startswith("A")]
    if isinstance(delta, Mapping):
        out = {int(k): int(v) for k, v in delta.items()}
    else:
        delta = list(delta)
        if len(delta) != len(a_vertices):
            raise ValueError(f"expected {len(a_vertices)} images for the A blocks, got {len(delta)}")
        out = dict(zip(a_vertices, (int(x) for x in delta)))
    if set(out) != set(a_vertices):
        raise ValueError("delta must assign exactly the A-block vertices")
    return out


def count_extension_oracle(pi: PartitionLike, s: int, h: Hypergraph, delta) -> int:
    """Brute force: edge-preserving maps of D_{pi,s} into H agreeing with ``delta`` on A blocks.

    ``delta`` is a mapping from template vertex to H vertex, or a sequence of
    images listed block by block (A1, A2, ...) in template order.
    """
    tpl = build_partial_step(pi, s)
    fixed = _delta_map(tpl, delta)
    return sum(1 for _ in _maps(tpl.hypergraph, h, injective=False, fixed=fixed))


def count_extension_tensor(pi: PartitionLike, s: int, h: Hypergraph, delta) -> int:
    """Tensor twin: ``tau_pi^(2^s)`` evaluated on the indicator tensors of ``delta``."""
    pi = as_partition(pi)
    tpl = build_partial_step(pi, s)
    fixed = _delta_map(tpl, delta)
    phi = power(group(adjacency_map(h), pi), s)
    chis = []
    for i in range(1, pi.t - s + 1):
        verts = tpl.block(f"A{i}")
        chis.append(indicator_tensor([fixed[v] for v in verts], h.n))
    return int(round(phi(*chis)))


def count_walks_brute(h: Hypergraph, pi: PartitionLike, ell: int, start: Sequence[int], end: Sequence[int]) -> int:
    """Homomorphic images of the path P_{pi,2 ell} with its attach tuples sent to ``start`` and ``end``."""
    tpl = build_path(pi, ell)
    a0, a1 = tpl.attach
    if len(start) != len(a0) or len(end) != len(a1):
        raise ValueError(f"attach tuples have length {len(a0)}")
    fixed = dict(zip(a0, start))
    for v, w in zip(a1, end):
        if fixed.get(v, w) != w:
            return 0
        fixed[v] = w
    return sum(1 for _ in _maps(tpl.hypergraph, h, injective=False, fixed=fixed))


def count_walks_matrix(h: Hypergraph, pi: PartitionLike, ell: int, start: Sequence[int], end: Sequence[int]) -> int:
    """The (start, end) entry of the ell-th power of the flat matrix."""
    a = flatten_matrix(adjacency_map(h), pi).entries
    m = np.linalg.matrix_power(np.rint(a).astype(np.int64), ell)
    n = h.n
    return int(m[tuple_index(start, n), tuple_index(end, n)])
