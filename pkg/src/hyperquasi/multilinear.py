"""Dense multilinear maps and the algebra built on them.

A t-linear map is stored as its coefficient array on standard basis
vectors, of shape ``dims``. Index conventions that the counting identities
depend on:

* ``W^{(x)m}`` (m-fold tensor power of an n-dimensional space) is indexed by
  m-tuples of vertices read as base-n numerals, first entry most
  significant. :func:`tuple_index` computes this.
* :func:`group` reshapes a k-linear map into a t-linear one over
  ``W^{(x)k_1} x ... x W^{(x)k_t}``; consecutive arguments are merged in
  order, so it is a pure reshape.
* :func:`star_product` returns a map whose i-th argument space is
  ``V_i (x) V_i`` with index ``u * dim(V_i) + v``: the first factor feeds
  the left map, the second the right map.
* :func:`flatten_matrix` reads the single argument of ``phi^(2^(t-1))`` as
  a sequence of ``2^(t-1)`` factors ``u_1 v_1 u_2 v_2 ...`` (each in V_1)
  and returns the matrix with rows indexed by ``u_1 ... u_m`` and columns
  by ``v_1 ... v_m``, ``m = 2^(t-2)``.

Under these conventions a factor at position r of a 2^s-fold power
corresponds to the binary code of r (length s, most significant bit
first), which is how template vertices are ordered.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ._config import DimensionCapExceeded, dimension_cap
from .hypergraph import Hypergraph
from .linalg import SYMMETRY_TOL, symmetric_eigs
from .partitions import PartitionLike, as_partition

__all__ = [
    "MultilinearMap",
    "FlatMatrix",
    "HopmResult",
    "adjacency_map",
    "all_ones_map",
    "evaluate",
    "group",
    "star_product",
    "power",
    "flatten_matrix",
    "hopm_estimate",
    "tuple_index",
    "indicator_tensor",
    "set_indicator",
    "unit_ones",
    "symmetric_eigs",
    "dump_coeffs",
    "load_coeffs",
]


class MultilinearMap:
    """A real t-linear map on spaces of dimensions ``dims``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.ndim < 1:
            raise ValueError("a multilinear map needs at least one argument")
        self.coeffs = coeffs

    @property
    def arity(self) -> int:
        return self.coeffs.ndim

    @property
    def dims(self) -> tuple[int, ...]:
        return self.coeffs.shape

    def __call__(self, *args) -> float:
        return evaluate(self, args)

    def __add__(self, other: "MultilinearMap") -> "MultilinearMap":
        _same_shape(self, other)
        return MultilinearMap(self.coeffs + other.coeffs)

    def __sub__(self, other: "MultilinearMap") -> "MultilinearMap":
        _same_shape(self, other)
        return MultilinearMap(self.coeffs - other.coeffs)

    def __mul__(self, scalar: float) -> "MultilinearMap":
        return MultilinearMap(self.coeffs * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "MultilinearMap":
        return MultilinearMap(-self.coeffs)

    def __repr__(self) -> str:
        return f"MultilinearMap(dims={self.dims})"


def _same_shape(a: MultilinearMap, b: MultilinearMap) -> None:
    if a.dims != b.dims:
        raise ValueError(f"shape mismatch: {a.dims} vs {b.dims}")


@dataclass(frozen=True)
class FlatMatrix:
    """Square symmetric matrix obtained by flattening a top power."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        scale = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
        if a.size and np.max(np.abs(a - a.T)) > SYMMETRY_TOL * scale:
            raise ValueError("flattened matrix is not symmetric")
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def adjacency_map(h: Hypergraph) -> MultilinearMap:
    return MultilinearMap(h.adjacency_tensor())


def all_ones_map(k: int, n: int) -> MultilinearMap:
    return MultilinearMap(np.ones((n,) * k))


def evaluate(phi: MultilinearMap, args: Sequence) -> float:
    """Value of the multilinear extension at ``args`` (one vector per argument)."""
    if len(args) != phi.arity:
        raise ValueError(f"expected {phi.arity} arguments, got {len(args)}")
    res = phi.coeffs
    for i, x in enumerate(reversed(args)):
        x = np.asarray(x, dtype=float)
        expected = phi.dims[phi.arity - 1 - i]
        if x.shape != (expected,):
            raise ValueError(f"argument {phi.arity - 1 - i} has shape {x.shape}, expected ({expected},)")
        res = res @ x
    return float(res)


def group(phi: MultilinearMap, pi: PartitionLike) -> MultilinearMap:
    """Merge consecutive arguments of a k-linear map into blocks of sizes ``pi``."""
    pi = as_partition(pi)
    if phi.arity != pi.k:
        raise ValueError(f"map has arity {phi.arity} but partition {pi} sums to {pi.k}")
    dims = []
    pos = 0
    for part in pi:
        dims.append(math.prod(phi.dims[pos:pos + part]))
        pos += part
    return MultilinearMap(phi.coeffs.reshape(dims))


def star_product(phi: MultilinearMap, psi: MultilinearMap) -> MultilinearMap:
    """Contract two t-linear maps over their last argument.

    ``(phi * psi)(u_1 (x) v_1, ..., u_{t-1} (x) v_{t-1})
    = sum_j phi(u_1, ..., u_{t-1}, b_j) psi(v_1, ..., v_{t-1}, b_j)``.
    """
    _same_shape(phi, psi)
    t = phi.arity
    if t < 2:
        raise ValueError("star product needs maps of arity >= 2")
    lead = phi.dims[:-1]
    prod = np.tensordot(phi.coeffs, psi.coeffs, axes=([t - 1], [t - 1]))
    # axes are (u_1..u_{t-1}, v_1..v_{t-1}); interleave to (u_1, v_1, u_2, v_2, ...)
    order = [ax for i in range(t - 1) for ax in (i, t - 1 + i)]
    return MultilinearMap(prod.transpose(order).reshape([d * d for d in lead]))


def power(phi: MultilinearMap, s: int) -> MultilinearMap:
    """``phi^(2^s)`` by repeated star-squaring; arity drops from t to t - s."""
    if not 0 <= s <= phi.arity - 1:
        raise ValueError(f"s must lie in [0, {phi.arity - 1}], got {s}")
    for _ in range(s):
        phi = star_product(phi, phi)
    return phi


def flatten_matrix(phi: MultilinearMap, pi: PartitionLike | None = None, cap: int | None = None) -> FlatMatrix:
    """Square matrix of ``phi^(2^(t-1))`` with interleaved row/column factors.

    If ``pi`` is given, ``phi`` is first grouped by it. The matrix side is
    ``dim(V_1)^(2^(t-2))``; exceeding the dimension cap raises DimensionCapExceeded.
    """
    if pi is not None:
        phi = group(phi, pi)
    t = phi.arity
    if t < 2:
        raise ValueError("flattening needs a map of arity >= 2")
    d1 = phi.dims[0]
    m = 2 ** (t - 2)
    side = d1 ** m
    limit = dimension_cap(cap)
    if side > limit:
        raise DimensionCapExceeded("flattened matrix", side, limit)
    top = power(phi, t - 1).coeffs.reshape((d1,) * (2 * m))
    order = list(range(0, 2 * m, 2)) + list(range(1, 2 * m, 2))
    return FlatMatrix(top.transpose(order).reshape(side, side))


def tuple_index(tup: Sequence[int], n: int) -> int:
    """Basis index of ``e_{v_1} (x) ... (x) e_{v_m}`` in the m-fold power of an n-dim space."""
    idx = 0
    for v in tup:
        idx = idx * n + int(v)
    return idx


def indicator_tensor(tup: Sequence[int], n: int) -> np.ndarray:
    x = np.zeros(n ** len(tup))
    x[tuple_index(tup, n)] = 1.0
    return x


def set_indicator(family, n: int, size: int) -> np.ndarray:
    """Indicator tensor of a set of ``size``-multisets: one term per multiset, sorted representative."""
    x = np.zeros(n ** size)
    for s in family:
        s = tuple(sorted(s))
        if len(s) != size:
            raise ValueError(f"element {s} does not have {size} entries")
        x[tuple_index(s, n)] = 1.0
    return x


def unit_ones(dim: int) -> np.ndarray:
    return np.full(dim, 1.0 / math.sqrt(dim))


class HopmResult(NamedTuple):
    value: float
    witnesses: tuple[np.ndarray, ...]
    converged: bool


def _contract_except(T: np.ndarray, xs: Sequence[np.ndarray], skip: int) -> np.ndarray:
    ops = [T, list(range(T.ndim))]
    for j, x in enumerate(xs):
        if j != skip:
            ops += [x, [j]]
    return np.einsum(*ops, [skip])


def hopm_estimate(
    phi: MultilinearMap,
    restarts: int = 32,
    iters: int = 200,
    tol: float = 1e-12,
    seed: int = 0,
    starts: Sequence[Sequence[np.ndarray]] = (),
) -> HopmResult:
    """Lower bound on the spectral norm by alternating unit-vector maximization.

    Each restart draws Gaussian unit vectors from ``default_rng([seed, r])``
    and cycles ``x_i <- grad_i / |grad_i|``, which never decreases
    ``|phi(x)|``. Extra deterministic ``starts`` are tried first. The best
    value over all runs is returned with its unit witnesses; ``converged``
    reports whether that run met ``tol`` before ``iters`` sweeps.
    """
    T = phi.coeffs
    t = phi.arity
    best = HopmResult(0.0, tuple(unit_ones(d) for d in phi.dims), True)
    if not np.any(T):
        return best
    inits = [[np.asarray(x, dtype=float) for x in s] for s in starts]
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        inits.append([rng.standard_normal(d) for d in phi.dims])
    found = False
    for xs in inits:
        xs = [x / np.linalg.norm(x) if np.linalg.norm(x) > 0 else unit_ones(len(x)) for x in xs]
        value = abs(evaluate(phi, xs))
        converged = False
        for _ in range(iters):
            for i in range(t):
                g = _contract_except(T, xs, i)
                norm = np.linalg.norm(g)
                if norm > 0:
                    xs[i] = g / norm
            new = abs(evaluate(phi, xs))
            if abs(new - value) < tol:
                value = new
                converged = True
                break
            value = new
        if not found or value > best.value:
            best = HopmResult(value, tuple(xs), converged)
            found = True
    return best


def dump_coeffs(phi: MultilinearMap, prefix: str | os.PathLike) -> tuple[str, str]:
    """Debug dump: ``<prefix>.bin`` (little-endian float64, C order) and ``<prefix>.json`` (shape)."""
    prefix = os.fspath(prefix)
    binp, jsp = prefix + ".bin", prefix + ".json"
    phi.coeffs.astype("<f8").tofile(binp)
    with open(jsp, "w") as fh:
        json.dump({"dims": list(phi.dims), "dtype": "<f8", "order": "C"}, fh)
    return binp, jsp


def load_coeffs(prefix: str | os.PathLike) -> MultilinearMap:
    prefix = os.fspath(prefix)
    with open(prefix + ".json") as fh:
        header = json.load(fh)
    data = np.fromfile(prefix + ".bin", dtype=header["dtype"])
    return MultilinearMap(data.reshape(header["dims"]))
