"""Command line interface.

Subcommands: solve, verify, reduce, lift, gen, bench.  Exit codes: 0 for a
decided instance or a valid certificate, 1 for an invalid certificate, 2
for usage and semantic errors, 3 for malformed input text, 4 when an
instance exceeds a solver cap or the machine's memory.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .bench import run_bench
from .core import is_complete, positive_part, verify_embedding
from .errors import (
    CapExceededError,
    LineEmbedError,
    ParseError,
)
from .formats import (
    instance_kind,
    parse_assignment_cert,
    parse_cnf,
    parse_digraph,
    parse_mapping,
    parse_model_cert,
    parse_ordering_cert,
    parse_partition_cert,
    parse_set_system,
    parse_signed_graph,
    parse_splitter_cert,
    serialize_assignment_cert,
    serialize_cnf,
    serialize_digraph,
    serialize_mapping,
    serialize_model_cert,
    serialize_ordering_cert,
    serialize_partition_cert,
    serialize_set_system,
    serialize_signed_graph,
    serialize_splitter_cert,
)
from .generators import (
    gen_planted_complete,
    gen_random_cnf,
    gen_random_signed_graph,
)
from .intervals import model_intersection_graph, ordering_to_model, solve_complete
from .reductions import (
    AdpToLceMapping,
    SatToLceMapping,
    SatToSsMapping,
    SsToAdpMapping,
    adp_to_lce,
    adp_violation,
    eval_cnf,
    lift_adp_to_setsplitting,
    lift_lce_to_adp,
    lift_lce_to_sat,
    lift_setsplitting_to_sat,
    sat_to_lce,
    sat_to_setsplitting,
    setsplitting_to_adp,
    unsplit_set_index,
    verify_adp,
    verify_setsplitting,
)
from .solvers import solve_bruteforce, solve_subset_dp


class UsageError(LineEmbedError):
    """Semantically wrong invocation (wrong kinds, impossible request)."""


def _read(path: str) -> tuple[str, str]:
    try:
        return Path(path).read_text(), path
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _cert_kind(text: str, source: str) -> str:
    for raw in text.split("\n"):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        if tokens[0] in ("o", "i", "x", "part", "v"):
            return tokens[0]
        raise ParseError(f"unknown certificate line kind {tokens[0]!r}", source)
    raise ParseError("empty certificate", source)


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def _cmd_solve(args: argparse.Namespace) -> int:
    text, source = _read(args.instance)
    g = parse_signed_graph(text, source)
    algo = args.algo
    if algo == "auto":
        algo = "complete" if is_complete(g) else "dp"
    if algo == "complete":
        if not is_complete(g):
            raise UsageError("--algo complete needs a complete signed graph")
        ordering = solve_complete(g)
    elif algo == "brute":
        ordering = (
            solve_bruteforce(g) if args.cap is None else solve_bruteforce(g, cap=args.cap)
        )
    else:
        ordering = (
            solve_subset_dp(g) if args.cap is None else solve_subset_dp(g, cap=args.cap)
        )
    if ordering is not None:
        # Independent re-check before anything is printed.
        res = verify_embedding(g, ordering)
        assert res.valid, f"solver returned a bad ordering: {res.violation}"
    if args.model is not None:
        if not is_complete(g):
            raise UsageError("--model needs a complete signed graph")
        if ordering is None:
            raise UsageError("--model needs a feasible instance")
        _emit(serialize_model_cert(ordering_to_model(g, ordering)), args.model)
    _emit(serialize_ordering_cert(ordering), args.out)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verify_ordering(g, cert_text: str, cert_source: str) -> int:
    ordering = parse_ordering_cert(cert_text, cert_source)
    if ordering is None:
        raise UsageError(
            "an infeasibility claim cannot be checked against the instance"
        )
    if len(ordering) != g.n:
        raise ParseError(
            f"ordering lists {len(ordering)} vertices, instance has {g.n}",
            cert_source,
        )
    res = verify_embedding(g, ordering)
    if res.valid:
        print("VALID")
        return 0
    vio = res.violation
    print(
        f"INVALID: vertex {vio.u} sees positive neighbour {vio.u1} beyond "
        f"negative neighbour {vio.u2} on its {vio.side}"
    )
    return 1


def _verify_model(g, cert_text: str, cert_source: str) -> int:
    model = parse_model_cert(cert_text, cert_source)
    if model.n != g.n:
        raise ParseError(
            f"model covers {model.n} vertices, instance has {g.n}", cert_source
        )
    if not is_complete(g):
        print("INVALID: instance is not a complete signed graph")
        return 1
    if model_intersection_graph(model) != positive_part(g):
        print("INVALID: interval intersections do not match the positive edges")
        return 1
    print("VALID")
    return 0


def _verify_splitter(sys_inst, cert_text: str, cert_source: str) -> int:
    x = parse_splitter_cert(cert_text, cert_source)
    try:
        missed = unsplit_set_index(sys_inst, x)
    except LineEmbedError as exc:
        print(f"INVALID: {exc}")
        return 1
    if missed is None:
        print("VALID")
        return 0
    print(f"INVALID: set {missed} is not split")
    return 1


def _verify_partition(digraph, cert_text: str, cert_source: str) -> int:
    part = parse_partition_cert(cert_text, cert_source)
    if len(part.part1) + len(part.part2) != digraph.n:
        raise ParseError(
            f"partition covers {len(part.part1) + len(part.part2)} vertices, "
            f"instance has {digraph.n}",
            cert_source,
        )
    vio = adp_violation(digraph, part)
    if vio is None:
        print("VALID")
        return 0
    side, cycle = vio
    print(
        f"INVALID: part {side} contains the cycle "
        + " ".join(str(v) for v in cycle)
    )
    return 1


def _verify_assignment(cnf, cert_text: str, cert_source: str) -> int:
    assignment = parse_assignment_cert(cert_text, cert_source)
    if len(assignment.values) != cnf.num_vars:
        raise ParseError(
            f"assignment covers {len(assignment.values)} variables, "
            f"instance has {cnf.num_vars}",
            cert_source,
        )
    for idx, clause in enumerate(cnf.clauses, start=1):
        if not any((lit > 0) == assignment.value(abs(lit)) for lit in clause):
            print(f"INVALID: clause {idx} is falsified")
            return 1
    print("VALID")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    inst_text, inst_source = _read(args.instance)
    cert_text, cert_source = _read(args.cert)
    kind = instance_kind(inst_text, inst_source)
    cert = _cert_kind(cert_text, cert_source)
    if kind == "sg" and cert == "o":
        return _verify_ordering(
            parse_signed_graph(inst_text, inst_source), cert_text, cert_source
        )
    if kind == "sg" and cert == "i":
        return _verify_model(
            parse_signed_graph(inst_text, inst_source), cert_text, cert_source
        )
    if kind == "ss" and cert == "x":
        return _verify_splitter(
            parse_set_system(inst_text, inst_source), cert_text, cert_source
        )
    if kind == "dg" and cert == "part":
        return _verify_partition(
            parse_digraph(inst_text, inst_source), cert_text, cert_source
        )
    if kind == "cnf" and cert == "v":
        return _verify_assignment(
            parse_cnf(inst_text, inst_source), cert_text, cert_source
        )
    raise UsageError(
        f"certificate kind {cert!r} does not apply to instance kind {kind!r}"
    )


# ---------------------------------------------------------------------------
# reduce
# ---------------------------------------------------------------------------


def _cmd_reduce(args: argparse.Namespace) -> int:
    text, source = _read(args.instance)
    kind = instance_kind(text, source)
    stage = args.stage
    expected = {"sat2ss": "cnf", "ss2adp": "ss", "adp2lce": "dg", "sat2lce": "cnf"}
    if kind != expected[stage]:
        raise UsageError(
            f"stage {stage} starts from a {expected[stage]} instance, got {kind}"
        )
    if stage == "sat2ss":
        out_obj, mapping = sat_to_setsplitting(parse_cnf(text, source))
        out_text = serialize_set_system(out_obj)
    elif stage == "ss2adp":
        out_obj, mapping = setsplitting_to_adp(parse_set_system(text, source))
        out_text = serialize_digraph(out_obj)
    elif stage == "adp2lce":
        out_obj, mapping = adp_to_lce(parse_digraph(text, source))
        out_text = serialize_signed_graph(out_obj)
    else:
        out_obj, mapping = sat_to_lce(parse_cnf(text, source))
        out_text = serialize_signed_graph(out_obj)
    _emit(out_text, args.out)
    if args.map is not None:
        _emit(serialize_mapping(mapping), args.map)
    return 0


# ---------------------------------------------------------------------------
# lift
# ---------------------------------------------------------------------------


def _cmd_lift(args: argparse.Namespace) -> int:
    map_text, map_source = _read(args.mapping)
    cert_text, cert_source = _read(args.cert)
    mapping = parse_mapping(map_text, map_source)
    cert = _cert_kind(cert_text, cert_source)

    if isinstance(mapping, SatToSsMapping):
        if cert != "x":
            raise UsageError("a sat2ss mapping lifts a splitter certificate")
        x = parse_splitter_cert(cert_text, cert_source)
        sys_inst, _ = sat_to_setsplitting(mapping.formula())
        try:
            ok = verify_setsplitting(sys_inst, x)
        except LineEmbedError:
            ok = False
        if not ok:
            print("INVALID: certificate does not split the gadget system")
            return 1
        _emit(serialize_assignment_cert(lift_setsplitting_to_sat(x, mapping)), args.out)
        return 0

    if isinstance(mapping, SsToAdpMapping):
        if cert != "part":
            raise UsageError("a ss2adp mapping lifts a partition certificate")
        part = parse_partition_cert(cert_text, cert_source)
        digraph = mapping.gadget_digraph()
        if len(part.part1) + len(part.part2) != digraph.n:
            raise ParseError(
                f"partition covers {len(part.part1) + len(part.part2)} "
                f"vertices, gadget has {digraph.n}",
                cert_source,
            )
        if not verify_adp(digraph, part):
            print("INVALID: a part of the certificate is cyclic in the gadget")
            return 1
        _emit(serialize_splitter_cert(lift_adp_to_setsplitting(part, mapping)), args.out)
        return 0

    # adp2lce and the composed chain both lift an ordering certificate.
    if cert != "o":
        raise UsageError("this mapping lifts an ordering certificate")
    ordering = parse_ordering_cert(cert_text, cert_source)
    if ordering is None:
        raise UsageError("an infeasibility claim cannot be lifted")
    adp_map = mapping.adp2lce if isinstance(mapping, SatToLceMapping) else mapping
    gadget = adp_map.gadget_graph()
    if len(ordering) != gadget.n:
        raise ParseError(
            f"ordering lists {len(ordering)} vertices, gadget has {gadget.n}",
            cert_source,
        )
    if not verify_embedding(gadget, ordering).valid:
        print("INVALID: certificate is not a feasible ordering of the gadget")
        return 1
    if isinstance(mapping, SatToLceMapping):
        _emit(serialize_assignment_cert(lift_lce_to_sat(ordering, mapping)), args.out)
    else:
        _emit(serialize_partition_cert(lift_lce_to_adp(ordering, mapping)), args.out)
    return 0


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "random-sg":
        g = gen_random_signed_graph(args.n, args.p_pos, args.p_neg, args.seed)
        comment = (
            f"c random-sg n={args.n} p-pos={args.p_pos} "
            f"p-neg={args.p_neg} seed={args.seed}\n"
        )
        body = serialize_signed_graph(g)
    elif args.kind == "planted-complete":
        spread = args.spread if args.spread is not None else max(args.n / 4.0, 1.0)
        g = gen_planted_complete(args.n, spread, args.seed)
        comment = (
            f"c planted-complete n={args.n} spread={spread} seed={args.seed}\n"
        )
        body = serialize_signed_graph(g)
    else:
        cnf = gen_random_cnf(args.vars, args.clauses, args.seed)
        comment = (
            f"c random-cnf vars={args.vars} clauses={args.clauses} "
            f"seed={args.seed}\n"
        )
        body = serialize_cnf(cnf)
    _emit(comment + body, args.out)
    return 0


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def _cmd_bench(args: argparse.Namespace) -> int:
    if args.max_n < args.min_n:
        raise UsageError("--max-n must be at least --min-n")
    report = run_bench(
        sizes=tuple(range(args.min_n, args.max_n + 1)),
        per_size=args.per_size,
        seed=args.seed,
        p_pos=args.p_pos,
        p_neg=args.p_neg,
    )
    medians = report.median_seconds()
    for n, times, median in zip(report.sizes, report.per_size_seconds, medians):
        print(
            f"bench n={n} runs={len(times)} "
            f"median_ms={median * 1000:.3f} max_ms={max(times) * 1000:.3f}"
        )
    if len(report.sizes) > 1:
        print(f"bench ratio-median={report.ratio_median():.3f}")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lineembed",
        description="Solvers, reductions and certificate tools for line "
        "cluster embeddings of signed graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="decide an instance, print a certificate")
    p_solve.add_argument("instance", help="signed graph file")
    p_solve.add_argument(
        "--algo",
        choices=("auto", "dp", "brute", "complete"),
        default="auto",
        help="auto picks the complete-graph route when it applies, else dp",
    )
    p_solve.add_argument("--cap", type=int, help="override the solver size cap")
    p_solve.add_argument("--out", help="write the ordering certificate here")
    p_solve.add_argument(
        "--model", help="also write an interval model certificate here"
    )
    p_solve.set_defaults(func=_cmd_solve)

    p_verify = sub.add_parser("verify", help="check a certificate, exit 0/1")
    p_verify.add_argument("instance", help="instance file")
    p_verify.add_argument("cert", help="certificate file")
    p_verify.set_defaults(func=_cmd_verify)

    p_reduce = sub.add_parser("reduce", help="translate an instance one stage down")
    p_reduce.add_argument(
        "stage", choices=("sat2ss", "ss2adp", "adp2lce", "sat2lce")
    )
    p_reduce.add_argument("instance", help="source instance file")
    p_reduce.add_argument("--out", help="write the produced instance here")
    p_reduce.add_argument("--map", help="write the reduction mapping here")
    p_reduce.set_defaults(func=_cmd_reduce)

    p_lift = sub.add_parser(
        "lift", help="pull a certificate back through a reduction mapping"
    )
    p_lift.add_argument("mapping", help="mapping file written by reduce --map")
    p_lift.add_argument("cert", help="certificate for the reduced instance")
    p_lift.add_argument("--out", help="write the lifted certificate here")
    p_lift.set_defaults(func=_cmd_lift)

    p_gen = sub.add_parser("gen", help="generate an instance deterministically")
    gen_sub = p_gen.add_subparsers(dest="kind", required=True)
    g_sg = gen_sub.add_parser("random-sg", help="independent random signed pairs")
    g_sg.add_argument("--n", type=int, required=True)
    g_sg.add_argument("--p-pos", type=float, default=0.25)
    g_sg.add_argument("--p-neg", type=float, default=0.25)
    g_sg.add_argument("--seed", type=int, default=0)
    g_sg.add_argument("--out")
    g_sg.set_defaults(func=_cmd_gen)
    g_pc = gen_sub.add_parser(
        "planted-complete", help="complete instance with a planted solution"
    )
    g_pc.add_argument("--n", type=int, required=True)
    g_pc.add_argument("--spread", type=float, help="default n/4")
    g_pc.add_argument("--seed", type=int, default=0)
    g_pc.add_argument("--out")
    g_pc.set_defaults(func=_cmd_gen)
    g_cnf = gen_sub.add_parser("random-cnf", help="random clauses of width 1..3")
    g_cnf.add_argument("--vars", type=int, required=True)
    g_cnf.add_argument("--clauses", type=int, required=True)
    g_cnf.add_argument("--seed", type=int, default=0)
    g_cnf.add_argument("--out")
    g_cnf.set_defaults(func=_cmd_gen)

    p_bench = sub.add_parser("bench", help="time the subset DP on random instances")
    p_bench.add_argument("--min-n", type=int, default=14)
    p_bench.add_argument("--max-n", type=int, default=20)
    p_bench.add_argument("--per-size", type=int, default=5)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--p-pos", type=float, default=0.25)
    p_bench.add_argument("--p-neg", type=float, default=0.25)
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except MemoryError:
        # The subset DP table is 2^n entries; the 64-vertex cap is a bitmask
        # width limit, not a promise that the table fits in memory.
        print(
            "error: instance needs more memory than is available",
            file=sys.stderr,
        )
        return 4
    except LineEmbedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
