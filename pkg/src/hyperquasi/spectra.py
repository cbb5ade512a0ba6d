"""First and second eigenvalues of a hypergraph with respect to a partition.

For a partition pi = (k_1, ..., k_t) of k:

* ``lambda_1 = ||tau_pi||`` and ``lambda_2 = ||tau_pi - q J_pi||`` where
  ``||.||`` is the multilinear spectral norm (sup over unit arguments).
* Lower bounds come from HOPM (alternating maximization); every witness is
  a feasible point, so the value is certified from below.
* Upper bounds come from ``||phi||^(2^(t-1)) <= lambda_max(A[phi^(2^(t-1))])``.
  For t = 2 the flat matrix is ``M M^T`` and the bound is the exact norm.
* For a d-coregular H the all-ones vectors attain lambda_1 = d n^(k/2-1),
  and lambda_2 is at most the 2^(t-1)-th root of the second eigenvalue
  (in absolute value) of ``A[tau_pi^(2^(t-1))]``.

``q`` defaults to the ordered edge density (see
:func:`~hyperquasi.hypergraph.edge_density_q`); a target density may be
passed instead.
"""

from __future__ import annotations

import json
import time
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from ._config import dimension_cap
from .hypergraph import Hypergraph, edge_density_q, is_coregular
from .linalg import symmetric_eigs
from .multilinear import (
    FlatMatrix,
    adjacency_map,
    all_ones_map,
    flatten_matrix,
    group,
    hopm_estimate,
    unit_ones,
)
from .partitions import PartitionLike, as_partition

__all__ = [
    "SpectralReport",
    "GraphCrossCheck",
    "PerronWarning",
    "flat_top_eigenvalue",
    "lambda1",
    "lambda2",
    "coregular_lambda2_upper",
    "spectral_report",
    "graph_crosscheck",
]

# an interval narrower than this is reported as a single value
EXACT_WIDTH = 1e-9
ROWSUM_TOL = 1e-9


class PerronWarning(UserWarning):
    """The top eigenvalue of a coregular flat matrix is not simple."""


@dataclass
class SpectralReport:
    k: int
    n: int
    pi: str
    q: float
    density_source: str = "empirical"
    coregular_d: int | None = None
    lambda1_lower: float | None = None
    lambda1_upper: float | None = None
    lambda1_exact: float | None = None
    lambda2_lower: float | None = None
    lambda2_upper: float | None = None
    lambda2_upper_power: float | None = None
    lambda2_exact: float | None = None
    perron_simple: bool | None = None
    witnesses: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    timings: dict | None = None

    @property
    def lambda1_best(self) -> float | None:
        return _best(self.lambda1_exact, self.lambda1_lower, self.lambda1_upper)

    @property
    def lambda2_best(self) -> float | None:
        return _best(self.lambda2_exact, self.lambda2_lower, self.lambda2_upper_bound)

    @property
    def lambda2_upper_bound(self) -> float | None:
        """Tightest available upper bound on lambda_2."""
        ups = [u for u in (self.lambda2_upper, self.lambda2_upper_power) if u is not None]
        return min(ups) if ups else None

    @property
    def lambda1_width(self) -> float | None:
        return _width(self.lambda1_exact, self.lambda1_lower, self.lambda1_upper)

    @property
    def lambda2_width(self) -> float | None:
        return _width(self.lambda2_exact, self.lambda2_lower, self.lambda2_upper_bound)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(
            lambda1_best=self.lambda1_best,
            lambda2_best=self.lambda2_best,
            lambda1_width=self.lambda1_width,
            lambda2_width=self.lambda2_width,
        )
        if d["timings"] is None:
            del d["timings"]
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)


def _best(exact, lower, upper):
    if exact is not None:
        return exact
    if lower is None:
        return upper
    if upper is None:
        return lower
    if upper - lower < EXACT_WIDTH:
        return upper
    return (lower + upper) / 2


def _width(exact, lower, upper):
    if exact is not None:
        return 0.0
    if lower is None or upper is None:
        return None
    return max(0.0, upper - lower)


def _vec(x) -> list[float]:
    return [float(v) for v in np.asarray(x).ravel()]


def flat_top_eigenvalue(a: FlatMatrix) -> tuple[float, np.ndarray | None]:
    """Largest |eigenvalue| of a flat matrix, and the full spectrum if it was needed.

    A nonnegative symmetric matrix with constant row sums r has spectral
    radius exactly r, which skips the eigensolve in the coregular case.
    """
    m = a.entries
    rows = m.sum(axis=1)
    if m.size and np.all(m >= 0) and np.ptp(rows) <= ROWSUM_TOL * max(1.0, abs(rows[0])):
        return float(rows.mean()), None
    w = symmetric_eigs(m)
    return (float(abs(w[0])) if w.size else 0.0), w


def _root(value: float, t: int) -> float:
    return max(value, 0.0) ** (1.0 / 2 ** (t - 1))


def _config(pi, restarts, iters, seed, cap) -> dict:
    return {"pi": str(pi), "restarts": restarts, "iters": iters, "seed": seed, "cap": dimension_cap(cap)}


def lambda1(
    h: Hypergraph,
    pi: PartitionLike,
    restarts: int = 32,
    iters: int = 200,
    seed: int = 0,
    cap: int | None = None,
    report: SpectralReport | None = None,
) -> SpectralReport:
    """Bounds on ``||tau_pi||``; exact for coregular H and for two-part pi."""
    pi = as_partition(pi)
    if pi.k != h.k:
        raise ValueError(f"partition {pi} is not a partition of k={h.k}")
    t = pi.t
    if report is None:
        report = SpectralReport(h.k, h.n, str(pi), edge_density_q(h), coregular_d=is_coregular(h))
        report.config = _config(pi, restarts, iters, seed, cap)
    tau = adjacency_map(h)

    # the norm does not depend on the ordering, so search the canonical one
    grouped = group(tau, pi.canonical())
    ones = [unit_ones(d) for d in grouped.dims]
    est = hopm_estimate(grouped, restarts=restarts, iters=iters, seed=seed, starts=[ones])
    at_ones = abs(grouped(*ones))
    if at_ones >= est.value:
        report.lambda1_lower, wit = at_ones, ones
    else:
        report.lambda1_lower, wit = est.value, list(est.witnesses)
    report.witnesses["lambda1"] = {"ordering": str(pi.canonical()), "vectors": [_vec(x) for x in wit], "converged": est.converged}

    top, _ = flat_top_eigenvalue(flatten_matrix(tau, pi, cap=cap))
    report.lambda1_upper = _root(top, t)

    d = report.coregular_d
    if d is not None:
        report.lambda1_exact = d * h.n ** ((h.k - 2) / 2)
        report.witnesses["lambda1_exact"] = "all-ones unit vectors"
    elif t == 2:
        report.lambda1_exact = report.lambda1_upper
    return report


def lambda2(
    h: Hypergraph,
    pi: PartitionLike,
    density: float | None = None,
    restarts: int = 32,
    iters: int = 200,
    seed: int = 0,
    cap: int | None = None,
    report: SpectralReport | None = None,
) -> SpectralReport:
    """Bounds on ``||tau_pi - q J_pi||``.

    ``lambda2_upper_power`` (root of the top eigenvalue of the flat matrix of
    ``sigma = tau - q J``) is valid for every H. ``lambda2_upper`` (root of
    the second eigenvalue of the flat matrix of ``tau``) is only emitted for
    coregular H at the empirical density.
    """
    pi = as_partition(pi)
    if pi.k != h.k:
        raise ValueError(f"partition {pi} is not a partition of k={h.k}")
    t = pi.t
    q_emp = edge_density_q(h)
    q = q_emp if density is None else float(density)
    if report is None:
        report = SpectralReport(h.k, h.n, str(pi), q, coregular_d=is_coregular(h))
        report.config = _config(pi, restarts, iters, seed, cap)
    report.q = q
    report.density_source = "empirical" if density is None else "target"
    tau = adjacency_map(h)
    sigma = tau - q * all_ones_map(h.k, h.n)

    grouped = group(sigma, pi.canonical())
    starts = []
    if "lambda1" in report.witnesses and report.witnesses["lambda1"]["ordering"] == str(pi.canonical()):
        starts.append([np.array(v) for v in report.witnesses["lambda1"]["vectors"]])
    est = hopm_estimate(grouped, restarts=restarts, iters=iters, seed=seed, starts=starts)
    report.lambda2_lower = est.value
    report.witnesses["lambda2"] = {
        "ordering": str(pi.canonical()),
        "vectors": [_vec(x) for x in est.witnesses],
        "converged": est.converged,
    }

    top, _ = flat_top_eigenvalue(flatten_matrix(sigma, pi, cap=cap))
    report.lambda2_upper_power = _root(top, t)
    if t == 2:
        report.lambda2_exact = report.lambda2_upper_power

    if report.coregular_d is not None and abs(q - q_emp) <= 1e-15:
        report.lambda2_upper, report.perron_simple = coregular_lambda2_upper(h, pi, cap=cap, warn=False)
        if not report.perron_simple:
            msg = "top eigenvalue of the flat matrix is not simple"
            report.warnings.append(msg)
            warnings.warn(msg, PerronWarning, stacklevel=2)
    return report


def coregular_lambda2_upper(h: Hypergraph, pi: PartitionLike, cap: int | None = None, warn: bool = True) -> tuple[float, bool]:
    """Upper bound on lambda_2 for coregular H, and whether the Perron eigenvalue is simple.

    Removes one copy of the top eigenvalue (the common row sum) from the
    spectrum of ``A[tau_pi^(2^(t-1))]`` and takes the 2^(t-1)-th root of the
    largest remaining |eigenvalue|.
    """
    pi = as_partition(pi)
    if is_coregular(h) is None:
        raise ValueError("the second-eigenvalue bound needs a coregular hypergraph")
    w = symmetric_eigs(flatten_matrix(adjacency_map(h), pi, cap=cap))
    perron = float(w[0]) if w.size else 0.0
    rest = w[1:]
    mu2 = float(abs(rest[0])) if rest.size else 0.0
    simple = bool(perron <= 0 or mu2 < perron * (1 - 1e-9))
    if warn and not simple:
        warnings.warn(f"top eigenvalue {perron:.6g} of the flat matrix is not simple", PerronWarning, stacklevel=2)
    return _root(mu2, pi.t), simple


def spectral_report(
    h: Hypergraph,
    pi: PartitionLike,
    density: float | None = None,
    restarts: int = 32,
    iters: int = 200,
    seed: int = 0,
    cap: int | None = None,
    timings: bool = False,
) -> SpectralReport:
    """Both eigenvalues; ``timings`` adds wall-clock seconds (off for reproducible output)."""
    t0 = time.perf_counter()
    rep = lambda1(h, pi, restarts=restarts, iters=iters, seed=seed, cap=cap)
    t1 = time.perf_counter()
    rep = lambda2(h, pi, density=density, restarts=restarts, iters=iters, seed=seed, cap=cap, report=rep)
    t2 = time.perf_counter()
    if timings:
        rep.timings = {"lambda1": t1 - t0, "lambda2": t2 - t1}
    return rep


@dataclass
class GraphCrossCheck:
    lambda1_pipeline: float
    lambda1_direct: float
    regular_d: int | None
    lambda2_pipeline: float
    lambda2_direct: float | None = None
    lambda2_centered: float | None = None
    tol1: float = 1e-8
    tol2: float = 1e-6

    @property
    def lambda1_match(self) -> bool:
        return abs(self.lambda1_pipeline - self.lambda1_direct) <= self.tol1

    @property
    def lambda2_match(self) -> bool | None:
        if self.lambda2_direct is None:
            return None
        return (
            abs(self.lambda2_pipeline - self.lambda2_direct) <= self.tol2
            and abs(self.lambda2_pipeline - self.lambda2_centered) <= self.tol2
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(lambda1_match=self.lambda1_match, lambda2_match=self.lambda2_match)
        return d


def graph_crosscheck(g: Hypergraph, restarts: int = 8, seed: int = 0) -> GraphCrossCheck:
    """Compare the pipeline on a graph with a direct eigensolve of its adjacency matrix.

    For a d-regular graph, lambda_2 is also compared with the second largest
    |eigenvalue| of A (one copy of d removed) and with the largest
    |eigenvalue| of A - (d/n) J.
    """
    if g.k != 2:
        raise ValueError(f"graph cross-check needs k = 2, got k = {g.k}")
    rep = spectral_report(g, (1, 1), restarts=restarts, seed=seed)
    adj = g.adjacency_matrix()
    w = symmetric_eigs(adj)
    direct1 = float(abs(w[0])) if w.size else 0.0
    degrees = adj.sum(axis=1)
    regular = int(degrees[0]) if np.all(degrees == degrees[0]) else None
    out = GraphCrossCheck(rep.lambda1_best, direct1, regular, rep.lambda2_best)
    if regular is not None:
        rest = np.delete(w, int(np.argmin(np.abs(w - regular))))
        out.lambda2_direct = float(np.max(np.abs(rest))) if rest.size else 0.0
        centered = symmetric_eigs(adj - regular / g.n * np.ones_like(adj))
        out.lambda2_centered = float(abs(centered[0]))
    return out
