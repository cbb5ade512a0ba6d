"""Residuals of a random graph and of a complete bipartite graph at equal density.

Both have edge density about 1/2. The bipartite graph shows up in the
expansion residual (its witness families are the two sides) and in lambda_2,
while a sampled discrepancy check can miss it.
"""

from hyperquasi import ExperimentConfig, gen_random, new_hypergraph, run_experiment


def bipartite(n: int):
    half = n // 2
    return new_hypergraph(2, n, [(u, v) for u in range(half) for v in range(half, n)])


def main() -> None:
    n = 32
    cfg = ExperimentConfig(k=2, n=n, p=0.5, samples=32, props=["disc", "expand", "cycle", "eig"])
    for name, h in [("G(32, 1/2)", gen_random(2, n, 0.5, 0)), ("K_16,16", bipartite(n))]:
        rep = run_experiment(cfg, h=h).reports[0]
        print(
            f"{name:11} disc {rep['disc_residual']:.3f}  expand {rep['expand_residual']:.3f}  "
            f"cycle4 {rep['cycle4_residual']:.3f}  eig {rep['eig_residuals'][0]:.3f}/{rep['eig_residuals'][1]:.3f}"
        )


if __name__ == "__main__":
    main()
