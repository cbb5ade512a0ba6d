"""Eigenvalue bounds of sum-construction hypergraphs against their closed form.

A d-coregular k-graph has lambda_1 = d n^((k-2)/2) for every partition of k;
this prints the HOPM lower bound, the flat-matrix upper bound and lambda_2.
"""

from hyperquasi import gen_coregular_sum, proper_partitions, spectral_report


def main() -> None:
    for k, n, d in [(2, 12, 3), (3, 7, 2), (4, 5, 2)]:
        h = gen_coregular_sum(k, n, range(d))
        print(f"k={k} n={n} d={d}: closed form {d * n ** ((k - 2) / 2):.6f}")
        for pi in proper_partitions(k):
            rep = spectral_report(h, pi, restarts=4)
            print(
                f"  pi={pi!s:9} lambda1 in [{rep.lambda1_lower:.6f}, {rep.lambda1_upper:.6f}]"
                f"  lambda2 <= {rep.lambda2_upper_bound:.6f}"
            )


if __name__ == "__main__":
    main()
