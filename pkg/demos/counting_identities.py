"""Three routes to the same counts on a random 3-graph.

Circuits from the trace of a flat matrix against direct homomorphism counts,
and labeled copies of C_{1+2,4} from the extension recursion against backtracking.
"""

from hyperquasi import (
    build_cycle,
    count_circuits_trace,
    count_homomorphisms,
    count_labeled_copies,
    count_via_extension,
    gen_random,
    proper_partitions,
)


def main() -> None:
    h = gen_random(3, 7, 0.5, 1)
    print(f"H: k=3 n=7 with {h.num_edges} edges")
    for pi in proper_partitions(3):
        trace = count_circuits_trace(h, pi, 2).count
        hom = count_homomorphisms(build_cycle(pi, 2), h)
        print(f"  circuits of type {pi}: trace {trace}, {hom.method} {hom.count}")
    c = build_cycle("1+2", 2)
    print(f"  copies of {c.name}: extension {count_via_extension(c, '1+2', h)}, backtracking {count_labeled_copies(c, h)}")


if __name__ == "__main__":
    main()
