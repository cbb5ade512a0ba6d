"""Command-line interface: ``hyperquasi <command> ...``.

Exit codes: 0 success (for ``check``: every verdict passed), 1 some verdict
failed, 2 invalid arguments or input, 3 a dimension or search cap was hit.
"""

from __future__ import annotations

import argparse
import json
import sys

from ._config import DimensionCapExceeded
from .counting import count_circuits_trace, count_homomorphisms, count_labeled_copies
from .hypergraph import HypergraphFormatError, format_hypergraph, gen_coregular_sum, gen_random, read_hypergraph
from .partitions import as_partition, proper_partitions
from .quasicheck import DEFAULT_EPS, PROPERTIES, ExperimentConfig, run_experiment
from .spectra import spectral_report
from .templates import (
    CapExceeded,
    build_cycle,
    build_cycle4_direct,
    build_partial_step,
    build_path,
    build_step,
    export_template,
    single_edge,
)

EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_CAP = 3


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _split_list(values, conv=str) -> list:
    out = []
    for v in values or []:
        out += [conv(x) for x in str(v).split(",") if x]
    return out


def cmd_gen(args) -> int:
    if args.kind == "random":
        h = gen_random(args.k, args.n, args.p, args.seed)
    else:
        residues = _split_list(args.residues, int) if args.residues else list(range(args.d))
        h = gen_coregular_sum(args.k, args.n, residues)
    _emit(format_hypergraph(h), args.out)
    return 0


def _load_or_generate(args):
    if args.input:
        return read_hypergraph(args.input)
    if args.k is None or args.n is None:
        raise ValueError("give --input or both --k and --n")
    if args.d:
        return gen_coregular_sum(args.k, args.n, range(args.d))
    return gen_random(args.k, args.n, args.gen_p, args.seed)


def cmd_check(args) -> int:
    config = ExperimentConfig(
        k=args.k,
        n=args.n,
        source="file" if args.input else ("coregular" if args.d else "random"),
        gen_p=args.gen_p,
        d=args.d,
        input=args.input,
        p=args.p,
        pis=_split_list(args.pi) or None,
        props=_split_list(args.props) or list(PROPERTIES),
        eps=args.eps,
        samples=args.samples,
        seed=args.seed,
        ells=_split_list(args.ell, int) or [2],
        cap=args.cap,
        timings=args.timings,
    )
    report = run_experiment(config)
    _emit(report.to_json(), args.out)
    return 0 if report.passed else EXIT_FAIL


def cmd_spectra(args) -> int:
    h = _load_or_generate(args)
    pis = _split_list(args.pi) or [str(p) for p in proper_partitions(h.k)]
    reports = [
        spectral_report(
            h, pi, density=args.p, restarts=args.restarts, seed=args.seed, cap=args.cap, timings=args.timings
        ).to_dict()
        for pi in pis
    ]
    _emit(_json(reports if len(reports) > 1 else reports[0]), args.out)
    return 0


def cmd_count(args) -> int:
    h = _load_or_generate(args)
    out = {}
    if args.pattern:
        f = read_hypergraph(args.pattern)
        out["labeled_copies"] = {"count": count_labeled_copies(f, h), "method": "backtracking"}
        if args.homomorphisms:
            out["homomorphisms"] = count_homomorphisms(f, h).to_dict()
    else:
        if not args.pi:
            raise ValueError("give --pattern or --pi (with --ell) to count circuits")
        for pi in _split_list(args.pi):
            for ell in _split_list(args.ell, int) or [2]:
                res = count_circuits_trace(h, pi, ell, cap=args.cap).to_dict()
                res.update(pi=pi, ell=ell)
                if args.homomorphisms:
                    res["homomorphisms"] = count_homomorphisms(build_cycle(pi, ell), h).to_dict()
                out.setdefault("circuits", []).append(res)
    _emit(_json(out), args.out)
    return 0


def cmd_partitions(args) -> int:
    parts = [str(p) for p in proper_partitions(args.k)]
    if args.json:
        _emit(_json(parts), args.out)
    else:
        _emit("\n".join(parts), args.out)
    return 0


def cmd_templates_export(args) -> int:
    pi = as_partition(args.pi)
    builders = {
        "step": lambda: build_step(pi),
        "path": lambda: build_path(pi, args.ell),
        "cycle": lambda: build_cycle(pi, args.ell, ordered=True),
        "cycle4": lambda: build_cycle4_direct(pi),
        "partial": lambda: build_partial_step(pi, args.s),
        "edge": lambda: single_edge(pi),
    }
    tpl = builders[args.kind]()
    prefix = args.out or f"{args.kind}_{str(pi).replace('+', '-')}"
    txt, js = export_template(tpl, prefix)
    print(_json({"name": tpl.name, "vertices": tpl.num_vertices, "edges": len(tpl.edges), "files": [txt, js]}))
    return 0


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", "-i", help="hypergraph text file; otherwise one is generated from --k/--n")
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int, help="generate a d-coregular sum construction")
    p.add_argument("--gen-p", type=float, default=0.5, help="edge probability for a generated random hypergraph")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, help="dimension cap for flattened matrices (default 4096)")
    p.add_argument("--out", "-o", help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperquasi", description="Quasirandomness checks for k-uniform hypergraphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a hypergraph in the text format")
    gsub = gen.add_subparsers(dest="kind", required=True)
    gr = gsub.add_parser("random", help="binomial random k-graph")
    gr.add_argument("--k", type=int, required=True)
    gr.add_argument("--n", type=int, required=True)
    gr.add_argument("--p", type=float, default=0.5)
    gr.add_argument("--seed", type=int, default=0)
    gr.add_argument("--out", "-o")
    gc = gsub.add_parser("coregular", help="k-multisets with entry sum in a residue set mod n")
    gc.add_argument("--k", type=int, required=True)
    gc.add_argument("--n", type=int, required=True)
    grp = gc.add_mutually_exclusive_group(required=True)
    grp.add_argument("--d", type=int, help="use residues 0..d-1")
    grp.add_argument("--residues", action="append", help="explicit residues, comma separated")
    gc.add_argument("--out", "-o")
    gen.set_defaults(func=cmd_gen)

    chk = sub.add_parser("check", help="run the quasirandom property checks and write a JSON report")
    _add_source(chk)
    chk.add_argument("--pi", action="append", help="partition such as 1+2 (repeatable; default all)")
    chk.add_argument("--p", type=float, help="target density (default: ordered edge density)")
    chk.add_argument("--eps", type=float, default=DEFAULT_EPS)
    chk.add_argument("--props", action="append", help=f"comma separated subset of {','.join(PROPERTIES)}")
    chk.add_argument("--samples", type=int, default=64)
    chk.add_argument("--ell", action="append", help="even cycle parameters (default 2)")
    chk.add_argument("--timings", action="store_true", help="record wall-clock seconds per check")
    chk.set_defaults(func=cmd_check)

    spc = sub.add_parser("spectra", help="eigenvalue bounds with respect to partitions")
    _add_source(spc)
    spc.add_argument("--pi", action="append")
    spc.add_argument("--p", type=float, help="density for lambda_2 (default: ordered edge density)")
    spc.add_argument("--restarts", type=int, default=32)
    spc.add_argument("--timings", action="store_true", help="record wall-clock seconds per bound")
    spc.set_defaults(func=cmd_spectra)

    cnt = sub.add_parser("count", help="exact copy, homomorphism and circuit counts")
    _add_source(cnt)
    cnt.add_argument("--pattern", help="pattern hypergraph file for copy counts")
    cnt.add_argument("--pi", action="append", help="count circuits of this type")
    cnt.add_argument("--ell", action="append")
    cnt.add_argument("--homomorphisms", action="store_true", help="also count homomorphisms directly")
    cnt.set_defaults(func=cmd_count)

    par = sub.add_parser("partitions", help="list the proper partitions of k")
    par.add_argument("--k", type=int, required=True)
    par.add_argument("--json", action="store_true")
    par.add_argument("--out", "-o")
    par.set_defaults(func=cmd_partitions)

    tpl = sub.add_parser("templates", help="pattern hypergraphs")
    tsub = tpl.add_subparsers(dest="action", required=True)
    tex = tsub.add_parser("export", help="write a template as <out>.txt and <out>.json")
    tex.add_argument("--pi", required=True)
    tex.add_argument("--kind", choices=["step", "path", "cycle", "cycle4", "partial", "edge"], default="cycle")
    tex.add_argument("--ell", type=int, default=2)
    tex.add_argument("--s", type=int, default=0)
    tex.add_argument("--out", "-o", help="output prefix")
    tex.set_defaults(func=cmd_templates_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DimensionCapExceeded, CapExceeded) as exc:
        print(f"hyperquasi: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (HypergraphFormatError, ValueError, OSError) as exc:
        print(f"hyperquasi: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
