"""Finite-size residuals for the quasirandom properties of a hypergraph.

Each check returns a scale-free residual: a count gap divided by the natural
order of magnitude of the count (n^k for edge counts, n^f for copies of an
f-vertex pattern, n^(k/2) for eigenvalues). A property "passes" at
threshold eps when its residual is at most eps. The cycle properties are
upper bounds on counts, so their verdict uses the signed residual and only
counts that exceed the expectation fail.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import time
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .counting import count_circuits_trace, count_labeled_copies
from .hypergraph import (
    Hypergraph,
    edge_density_q,
    gen_coregular_sum,
    gen_random,
    read_hypergraph,
)
from .multilinear import adjacency_map, all_ones_map, group, hopm_estimate, set_indicator, tuple_index
from .partitions import OrderedPartition, PartitionLike, as_partition, proper_partitions
from .spectra import spectral_report
from .templates import CapExceeded, Template, build_cycle, is_pi_linear, single_edge

__all__ = [
    "QuasiReport",
    "ExperimentConfig",
    "ExperimentReport",
    "CycleResidual",
    "PROPERTIES",
    "check_disc",
    "check_expand",
    "check_count",
    "check_cycle",
    "check_eig",
    "default_count_templates",
    "run_experiment",
]

PROPERTIES = ("disc", "expand", "count", "cycle", "eig")
DEFAULT_EPS = 0.15
# injective counts are skipped when about this many maps would be visited
DEFAULT_COUNT_BUDGET = 2_000_000


def _rng(seed: int, tag: int) -> np.random.Generator:
    return np.random.default_rng([seed, tag])


def _k_sets(h: Hypergraph, size: int) -> list[tuple[int, ...]]:
    gen = itertools.combinations_with_replacement if h.loops_allowed else itertools.combinations
    return list(gen(range(h.n), size))


def _possible_edges(h: Hypergraph, u: int) -> int:
    """Number of potential edges inside a u-vertex set."""
    return math.comb(u + h.k - 1, h.k) if h.loops_allowed else math.comb(u, h.k)


def check_disc(h: Hypergraph, p: float, samples: int = 64, seed: int = 0) -> float:
    """max over sampled U of ``| |E(H[U])| - p * C(|U|, k) | / n^k``.

    U is drawn at sizes n/4, n/2 and 3n/4 and as a uniform random subset.
    With loops allowed, ``C(|U|, k)`` counts k-multisets.
    """
    n = h.n
    rng = _rng(seed, 1)
    sizes = [max(1, round(n * f)) for f in (0.25, 0.5, 0.75)]
    worst = 0.0
    candidates: list[np.ndarray] = [np.arange(n)]
    for i in range(samples):
        if i % 4 < 3:
            candidates.append(rng.choice(n, size=sizes[i % 4], replace=False))
        else:
            candidates.append(np.flatnonzero(rng.random(n) < 0.5))
    for U in candidates:
        gap = abs(h.induced_edge_count(U.tolist()) - p * _possible_edges(h, len(U)))
        worst = max(worst, gap / n ** h.k)
    return worst


def _sample_family(universe: list, rng: np.random.Generator) -> list:
    total = len(universe)
    size = int(np.clip(round(math.exp(rng.uniform(0.0, math.log(total)))), 1, total))
    idx = rng.choice(total, size=size, replace=False)
    return [universe[i] for i in sorted(idx)]


def _witness_families(h: Hypergraph, pi: OrderedPartition, q: float, seed: int) -> list[list[list]]:
    """Sign patterns of an approximate top singular tuple of tau - qJ.

    For each argument the positive and negative supports (over sorted
    representatives) give two candidate sets; all 2^t combinations are
    returned. These find structured discrepancies that random sets miss.
    """
    sigma = group(adjacency_map(h) - q * all_ones_map(h.k, h.n), pi)
    est = hopm_estimate(sigma, restarts=8, seed=seed)
    options = []
    for x, size in zip(est.witnesses, pi):
        universe = _k_sets(h, size)
        pos = [s for s in universe if x[tuple_index(s, h.n)] > 1e-12]
        neg = [s for s in universe if x[tuple_index(s, h.n)] < -1e-12]
        options.append([c for c in (pos, neg) if c])
    return [list(combo) for combo in itertools.product(*options)]


def check_expand(
    h: Hypergraph,
    pi: PartitionLike,
    p: float,
    samples: int = 64,
    seed: int = 0,
    adversarial: bool = True,
) -> float:
    """max over sampled families of ``|e(S_1, ..., S_t) - p * prod |S_i|| / n^k``.

    Families are drawn with log-uniform sizes; with ``adversarial`` the sign
    supports of an approximate lambda_2 witness are added.
    """
    pi = as_partition(pi)
    if pi.k != h.k:
        raise ValueError(f"partition {pi} is not a partition of k={h.k}")
    tau = group(adjacency_map(h), pi)
    universes = [_k_sets(h, size) for size in pi]
    rng = _rng(seed, 2)
    families = [[_sample_family(U, rng) for U in universes] for _ in range(samples)]
    families.append(universes)
    if adversarial and h.num_edges:
        families += _witness_families(h, pi, edge_density_q(h), seed)
    worst = 0.0
    for fam in families:
        chis = [set_indicator(S, h.n, size) for S, size in zip(fam, pi)]
        e = tau(*chis)
        gap = abs(e - p * math.prod(len(S) for S in fam))
        worst = max(worst, gap / h.n ** h.k)
    return worst


def _template_name(f, i: int) -> str:
    return f.name if isinstance(f, Template) else f"F{i}"


def _as_hypergraph(f) -> Hypergraph:
    return f.hypergraph if isinstance(f, Template) else f


def _expected_work(h: Hypergraph, f: Hypergraph, p: float) -> float:
    density = max(p, edge_density_q(h), 1.0 / h.n ** h.k)
    return h.n ** f.n * density ** max(f.num_edges - 1, 0)


def check_count(
    h: Hypergraph,
    pi: PartitionLike,
    p: float,
    templates: Sequence,
    budget: float | None = DEFAULT_COUNT_BUDGET,
) -> tuple[dict[str, float], list[str]]:
    """Per pattern F: ``|#{F in H} - p^m n^f| / n^f`` with m edges and f vertices.

    Every pattern must be pi-linear. Patterns whose search would exceed
    ``budget`` maps are skipped; their names are returned second.
    """
    pi = as_partition(pi)
    residuals: dict[str, float] = {}
    skipped: list[str] = []
    for i, tpl in enumerate(templates):
        f = _as_hypergraph(tpl)
        name = _template_name(tpl, i)
        if is_pi_linear(f, pi) is None:
            raise ValueError(f"template {name} is not {pi}-linear")
        if budget is not None and _expected_work(h, f, p) > budget:
            skipped.append(name)
            continue
        try:
            count = count_labeled_copies(f, h)
        except CapExceeded:
            skipped.append(name)
            continue
        residuals[name] = abs(count - p ** f.num_edges * h.n ** f.n) / h.n ** f.n
    return residuals, skipped


@dataclass
class CycleResidual:
    ell: int
    circuits: int
    circuit_residual: float
    copies: int | None = None
    copy_residual: float | None = None


def check_cycle(
    h: Hypergraph,
    pi: PartitionLike,
    p: float,
    ell: int = 2,
    injective: bool = True,
    budget: float | None = DEFAULT_COUNT_BUDGET,
) -> CycleResidual:
    """Signed residuals ``(count - p^m n^|V|) / n^|V|`` for the cycle C_{pi,2 ell}.

    ``ell`` must be even (cycle lengths are multiples of four). The circuit
    count comes from the trace identity; the labeled-copy count from
    backtracking, unless disabled or over budget.
    """
    if ell < 2 or ell % 2:
        raise ValueError(f"cycle checks need an even ell >= 2, got {ell}")
    pi = as_partition(pi)
    tpl = build_cycle(pi, ell)
    m, f = len(tpl.edges), tpl.num_vertices
    scale = h.n ** f
    expected = p ** m * scale
    circuits = count_circuits_trace(h, pi, ell).count
    out = CycleResidual(ell, circuits, (circuits - expected) / scale)
    if injective and (budget is None or _expected_work(h, tpl.hypergraph, p) <= budget):
        try:
            out.copies = count_labeled_copies(tpl, h)
            out.copy_residual = (out.copies - expected) / scale
        except CapExceeded:
            pass
    return out


def check_eig(h: Hypergraph, pi: PartitionLike, p: float, restarts: int = 16, seed: int = 0, cap: int | None = None):
    """``(|lambda_1 / n^(k/2) - p|, lambda_2 / n^(k/2))`` plus the report they came from.

    The best estimate is the certified value when available (coregular H,
    two-part pi) and the midpoint of the bound interval otherwise.
    """
    rep = spectral_report(h, pi, restarts=restarts, seed=seed, cap=cap)
    scale = h.n ** (h.k / 2)
    return (abs(rep.lambda1_best / scale - p), rep.lambda2_best / scale), rep


def default_count_templates(pi: PartitionLike, cap: int = 12) -> list[Template]:
    """The single edge and the four-cycle of type pi, when the latter is pi-linear and small."""
    pi = as_partition(pi)
    out = [single_edge(pi)]
    c4 = build_cycle(pi, 2, ordered=True)
    if c4.num_vertices <= cap and is_pi_linear(c4.hypergraph, pi) is not None:
        out.append(c4)
    return out


@dataclass
class QuasiReport:
    p: float
    pi: str
    eps: float
    disc_residual: float | None = None
    expand_residual: float | None = None
    count_residuals: dict = field(default_factory=dict)
    count_skipped: list = field(default_factory=list)
    cycle4_residual: float | None = None
    cycle4l_residuals: dict = field(default_factory=dict)
    cycle_signed: dict = field(default_factory=dict)
    eig_residuals: list | None = None
    eig_widths: list | None = None
    spectral: dict | None = None
    verdicts: dict = field(default_factory=dict)
    timings: dict | None = None

    def decide(self) -> dict:
        """Recompute verdicts from residuals; properties that were not run are omitted."""
        eps = self.eps
        v = {}
        if self.disc_residual is not None:
            v["disc"] = self.disc_residual <= eps
        if self.expand_residual is not None:
            v["expand"] = self.expand_residual <= eps
        if self.count_residuals:
            v["count"] = max(self.count_residuals.values()) <= eps
        if self.cycle4_residual is not None:
            v["cycle4"] = self.cycle4_residual <= eps
        for ell, r in self.cycle4l_residuals.items():
            v[f"cycle{2 * int(ell)}"] = r <= eps
        if self.eig_residuals is not None:
            v["eig"] = max(self.eig_residuals) <= eps
        self.verdicts = {k: ("pass" if ok else "fail") for k, ok in v.items()}
        return self.verdicts

    @property
    def passed(self) -> bool:
        return all(x == "pass" for x in self.verdicts.values())

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["timings"] is None:
            del d["timings"]
        return d


@dataclass
class ExperimentConfig:
    """Inputs of one experiment: the hypergraph source, the partitions and the checks."""

    k: int | None = None
    n: int | None = None
    source: str = "random"  # "random", "coregular" or "file"
    gen_p: float = 0.5
    d: int | None = None
    input: str | None = None
    p: float | None = None
    pis: list | None = None
    props: list = field(default_factory=lambda: list(PROPERTIES))
    eps: float = DEFAULT_EPS
    samples: int = 64
    seed: int = 0
    ells: list = field(default_factory=lambda: [2])
    cap: int | None = None
    budget: float | None = DEFAULT_COUNT_BUDGET
    timings: bool = False  # off by default so reports are byte-identical

    def validate(self) -> None:
        if self.source not in ("random", "coregular", "file"):
            raise ValueError(f"unknown source {self.source!r}")
        if self.source == "file" and not self.input:
            raise ValueError("source 'file' needs an input path")
        if self.source != "file" and (self.k is None or self.n is None):
            raise ValueError("generated hypergraphs need k and n")
        if self.source == "coregular" and not self.d:
            raise ValueError("coregular generation needs d >= 1")
        unknown = set(self.props) - set(PROPERTIES)
        if unknown:
            raise ValueError(f"unknown properties {sorted(unknown)}; choose from {', '.join(PROPERTIES)}")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        for ell in self.ells:
            if ell < 2 or ell % 2:
                raise ValueError(f"cycle ell values must be even and >= 2, got {ell}")

    def hypergraph(self) -> Hypergraph:
        if self.source == "file":
            return read_hypergraph(self.input)
        if self.source == "coregular":
            return gen_coregular_sum(self.k, self.n, range(self.d))
        return gen_random(self.k, self.n, self.gen_p, self.seed)


@dataclass
class ExperimentReport:
    config: dict
    k: int
    n: int
    num_edges: int
    q: float
    p: float
    reports: list

    @property
    def passed(self) -> bool:
        return all(all(v == "pass" for v in r["verdicts"].values()) for r in self.reports)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def run_experiment(config: ExperimentConfig, h: Hypergraph | None = None) -> ExperimentReport:
    """Run the selected checks for each partition and collect the reports.

    Partitions default to every proper partition of k in canonical form.
    The target density defaults to the empirical ordered density of H.
    """
    config.validate()
    if h is None:
        h = config.hypergraph()
    q = edge_density_q(h)
    p = q if config.p is None else config.p
    pis = [as_partition(x) for x in config.pis] if config.pis else list(proper_partitions(h.k))
    props = set(config.props)
    t0 = time.perf_counter()
    disc = check_disc(h, p, config.samples, config.seed) if "disc" in props else None
    disc_seconds = time.perf_counter() - t0
    reports = []
    for pi in pis:
        if pi.k != h.k:
            raise ValueError(f"partition {pi} is not a partition of k={h.k}")
        rep = QuasiReport(p=p, pi=str(pi), eps=config.eps, disc_residual=disc)
        clock = {"disc": disc_seconds} if disc is not None else {}
        t0 = time.perf_counter()
        if "expand" in props:
            rep.expand_residual = check_expand(h, pi, p, config.samples, config.seed)
            clock["expand"], t0 = time.perf_counter() - t0, time.perf_counter()
        if "count" in props:
            rep.count_residuals, rep.count_skipped = check_count(
                h, pi, p, default_count_templates(pi), budget=config.budget
            )
            clock["count"], t0 = time.perf_counter() - t0, time.perf_counter()
        if "cycle" in props:
            for ell in config.ells:
                cyc = check_cycle(h, pi, p, ell, budget=config.budget)
                rep.cycle_signed[str(ell)] = asdict(cyc)
                if ell == 2:
                    rep.cycle4_residual = max(0.0, cyc.circuit_residual)
                else:
                    rep.cycle4l_residuals[str(ell)] = max(0.0, cyc.circuit_residual)
            clock["cycle"], t0 = time.perf_counter() - t0, time.perf_counter()
        if "eig" in props:
            (r1, r2), sr = check_eig(h, pi, p, seed=config.seed, cap=config.cap)
            rep.eig_residuals = [r1, r2]
            scale = h.n ** (h.k / 2)
            rep.eig_widths = [sr.lambda1_width / scale, (sr.lambda2_width or 0.0) / scale]
            bounds = sr.to_dict()
            bounds.pop("witnesses", None)
            rep.spectral = bounds
            clock["eig"] = time.perf_counter() - t0
        if config.timings:
            rep.timings = clock
        rep.decide()
        reports.append(rep.to_dict())
    cfg = asdict(config)
    if cfg["input"]:
        cfg["input"] = os.fspath(cfg["input"])
    return ExperimentReport(cfg, h.k, h.n, h.num_edges, q, p, reports)
