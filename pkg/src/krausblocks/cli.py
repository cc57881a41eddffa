"""Command-line front end.

One machine-readable JSON report goes to stdout, a short human summary to
stderr. Exit codes: 0 success, 1 channel-validation failure, 2 parse or
argument error, 3 tolerance or convergence failure. Reports embed the schema
version and the tolerance set and are byte-identical for identical inputs.
"""

from __future__ import annotations

import argparse
import sys

from .capacity import (
    coherent_information,
    ent_assisted_capacity,
    min_output_renyi,
    reduce_over_blocks,
)
from .channel import KrausChannel, standard_channel, validate_kraus
from .decomposition import IrisDecomposition, iris_decompose, match_decompositions, restrict
from .errors import (
    InvalidMeasurement,
    InvalidParameter,
    KrausBlocksError,
    MultisetMismatch,
    NonConvergence,
    NotFixed,
    ParseError,
    ToleranceFailure,
    ValidationError,
)
from .fixed_points import BlockMixture, classify_fixed_state, commutant_basis
from .linalg import Tolerances
from .measurement import (
    StructuralDecomposition,
    measurement_preserved,
)
from .serialize import (
    SCHEMA_VERSION,
    channel_to_document,
    dumps_report,
    matrix_to_wire,
    parse_channel_ops,
    parse_measurement,
    parse_operator,
    tolerances_to_document,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="krausblocks",
        description="Analyze unital quantum channels: block structure, fixed "
        "states, measurement preservation, entropic quantities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, seed: bool = True):
        p.add_argument("--tol-residual", type=float, default=1e-9)
        p.add_argument("--tol-eigencluster", type=float, default=1e-7)
        if seed:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("validate", help="check the unital trace-preserving conditions")
    p.add_argument("channel")
    add_common(p, seed=False)

    p = sub.add_parser("decompose", help="irreducible invariant block decomposition")
    p.add_argument("channel")
    add_common(p)

    p = sub.add_parser("restrict", help="restrict the channel to one decomposition block")
    p.add_argument("channel")
    p.add_argument("--block", type=int, required=True)
    add_common(p)

    p = sub.add_parser("match", help="match two decompositions of the same channel")
    p.add_argument("channel")
    p.add_argument("--seeds", type=int, nargs=2, default=[0, 1], metavar=("A", "B"))
    add_common(p, seed=False)

    p = sub.add_parser("fixed-states", help="fixed-point structure; classify a state")
    p.add_argument("channel")
    p.add_argument("--state", help="operator document with a density matrix")
    add_common(p)

    p = sub.add_parser("check-measurement", help="measurement statistics preservation")
    p.add_argument("channel")
    p.add_argument("measurement")
    add_common(p, seed=False)

    p = sub.add_parser("capacity", help="entropic quantities with block reduction")
    p.add_argument("channel", nargs="?")
    p.add_argument("--quantity", choices=("smin", "ce", "coh", "combine"), required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--values", type=float, nargs="+", help="per-block bits for combine")
    p.add_argument("--max-iters", type=int, default=5000)
    add_common(p)

    p = sub.add_parser("gen", help="write a standard-channel document")
    p.add_argument("--kind", required=True,
                   choices=("identity", "depolarizing", "dephasing", "unitary", "random_unital"))
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--p", type=float, help="depolarizing strength")
    p.add_argument("--n-unitaries", type=int, default=3)
    p.add_argument("--unitary", help="operator document holding the unitary")
    add_common(p)

    return parser


def _tol(args) -> Tolerances:
    return Tolerances(
        residual=args.tol_residual,
        eigencluster=args.tol_eigencluster,
    )


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}", "$")


def _load_channel(path: str, tol: Tolerances) -> tuple[KrausChannel, dict]:
    _, ops = parse_channel_ops(_read(path))
    report = validate_kraus(ops, tol)
    vdoc = {
        "is_trace_preserving": report.is_trace_preserving,
        "is_unital": report.is_unital,
        "tp_residual": report.tp_residual,
        "unital_residual": report.unital_residual,
    }
    if not (report.is_trace_preserving and report.is_unital):
        raise ValidationError("channel is not unital trace-preserving", report=report)
    return KrausChannel.from_kraus(ops, tol), vdoc


def _subspace_doc(s) -> dict:
    return {"dim": s.dim, "basis": matrix_to_wire(s.basis)}


def _decomposition_doc(dec: IrisDecomposition) -> dict:
    return {
        "block_dims": list(dec.block_dims),
        "certificates": list(dec.irreducibility_certificates),
        "blocks": [_subspace_doc(s) for s in dec.blocks],
    }


def _report_head(command: str, tol: Tolerances) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "tolerances": tolerances_to_document(tol),
    }


# ---------------------------------------------------------------------------
# command handlers: each returns (report_dict, human_lines)
# ---------------------------------------------------------------------------


def _cmd_validate(args, tol):
    _, ops = parse_channel_ops(_read(args.channel))
    report = validate_kraus(ops, tol)
    out = _report_head("validate", tol)
    out["dim"] = ops[0].shape[0]
    out["n_kraus"] = len(ops)
    out["validation"] = {
        "is_trace_preserving": report.is_trace_preserving,
        "is_unital": report.is_unital,
        "tp_residual": report.tp_residual,
        "unital_residual": report.unital_residual,
    }
    ok = report.is_trace_preserving and report.is_unital
    human = [
        f"dim={ops[0].shape[0]} kraus={len(ops)} "
        f"trace_preserving={report.is_trace_preserving} unital={report.is_unital}"
    ]
    return out, human, 0 if ok else 1


def _cmd_decompose(args, tol):
    ch, vdoc = _load_channel(args.channel, tol)
    dec = iris_decompose(ch, tol, seed=args.seed)
    cb = commutant_basis(ch, tol)
    out = _report_head("decompose", tol)
    out["seed"] = args.seed
    out["validation"] = vdoc
    out["commutant_count"] = cb.count
    out["decomposition"] = _decomposition_doc(dec)
    human = [f"blocks: {list(dec.block_dims)} (commutant count {cb.count})"]
    return out, human, 0


def _cmd_restrict(args, tol):
    ch, vdoc = _load_channel(args.channel, tol)
    dec = iris_decompose(ch, tol, seed=args.seed)
    if not 0 <= args.block < dec.n_blocks:
        raise InvalidParameter(
            f"--block must be in [0, {dec.n_blocks - 1}] for this decomposition"
        )
    sub = dec.blocks[args.block]
    restricted = restrict(ch, sub, tol)
    out = _report_head("restrict", tol)
    out["seed"] = args.seed
    out["validation"] = vdoc
    out["block_index"] = args.block
    out["block_dim"] = sub.dim
    out["block_basis"] = matrix_to_wire(sub.basis)
    out["channel"] = channel_to_document(restricted)
    human = [f"restricted to block {args.block} (dim {sub.dim} of {ch.dim})"]
    return out, human, 0


def _cmd_match(args, tol):
    ch, vdoc = _load_channel(args.channel, tol)
    d1 = iris_decompose(ch, tol, seed=args.seeds[0])
    d2 = iris_decompose(ch, tol, seed=args.seeds[1])
    matching = match_decompositions(d1, d2, tol)
    out = _report_head("match", tol)
    out["seeds"] = list(args.seeds)
    out["validation"] = vdoc
    out["left_dims"] = list(d1.block_dims)
    out["right_dims"] = list(d2.block_dims)
    out["components"] = [
        {
            "left": list(c.left_block_indices),
            "right": list(c.right_block_indices),
            "dims": list(c.common_dimension_multiset),
        }
        for c in matching.components
    ]
    out["bijection"] = [list(pair) for pair in matching.bijection]
    human = [
        f"matched {d1.n_blocks} blocks across {len(matching.components)} component(s)"
    ]
    return out, human, 0


def _cmd_fixed_states(args, tol):
    ch, vdoc = _load_channel(args.channel, tol)
    dec = iris_decompose(ch, tol, seed=args.seed)
    cb = commutant_basis(ch, tol)
    out = _report_head("fixed-states", tol)
    out["seed"] = args.seed
    out["validation"] = vdoc
    out["commutant_count"] = cb.count
    out["decomposition"] = _decomposition_doc(dec)
    out["building_blocks"] = [
        {"dim": s.dim, "uniform_weight": s.dim / ch.dim} for s in dec.blocks
    ]
    human = [f"{cb.count} fixed-point dimension(s), blocks {list(dec.block_dims)}"]
    if args.state:
        rho = parse_operator(_read(args.state))
        try:
            result = classify_fixed_state(ch, rho, dec, tol)
        except NotFixed as exc:
            out["classification"] = {
                "fixed": False,
                "type": "not_fixed",
                "fix_residual": exc.residual,
            }
            human.append(f"state not fixed (residual {exc.residual:.3e})")
        else:
            if isinstance(result, BlockMixture):
                out["classification"] = {
                    "fixed": True,
                    "type": "block_mixture",
                    "weights": list(result.weights),
                    "fit_residual": result.residual,
                }
                human.append(f"state = block mixture, weights {list(result.weights)}")
            else:
                out["classification"] = {
                    "fixed": True,
                    "type": "degenerate",
                    "fit_residual": result.residual,
                    "commutant_projection": matrix_to_wire(result.commutant_projection),
                }
                human.append("state fixed but not a mixture over this decomposition")
    return out, human, 0


def _cmd_check_measurement(args, tol):
    ch, vdoc = _load_channel(args.channel, tol)
    m = parse_measurement(_read(args.measurement))
    report = measurement_preserved(ch, m, tol)
    out = _report_head("check-measurement", tol)
    out["validation"] = vdoc
    out["measurement_type"] = "projective" if report.commute is not None else "povm"
    elements = []
    for er in report.elements:
        edoc = {"preserved": er.preserved, "residual": er.residual}
        if isinstance(er.structure, StructuralDecomposition):
            edoc["terms"] = [
                {"weight": t.weight, "dim": t.subspace.dim, "basis": matrix_to_wire(t.subspace.basis)}
                for t in er.structure.terms
            ]
        else:
            w = er.structure.witness_subspace
            edoc["witness"] = {"dim": w.dim, "basis": matrix_to_wire(w.basis)}
        elements.append(edoc)
    out["elements"] = elements
    out["all_preserved"] = report.all_preserved
    if report.commute is not None:
        out["channels_commute"] = {
            "commute": report.commute.commute,
            "residual": report.commute.residual,
        }
        out["ranges_invariant"] = report.ranges_invariant
    human = [
        f"{len(elements)} element(s), all_preserved={report.all_preserved}"
    ]
    return out, human, 0


def _cmd_capacity(args, tol):
    out = _report_head("capacity", tol)
    if args.quantity == "combine":
        if not args.values:
            raise InvalidParameter("--quantity combine needs --values")
        combined = reduce_over_blocks("classical_capacity", args.values)
        out["quantity"] = {
            "kind": "classical_capacity",
            "method": "combined",
            "per_block": [float(v) for v in args.values],
            "combined_bits": combined,
        }
        return out, [f"combined classical capacity: {combined:.6f} bits"], 0

    if not args.channel:
        raise InvalidParameter("this quantity needs a channel document")
    ch, vdoc = _load_channel(args.channel, tol)
    dec = iris_decompose(ch, tol, seed=args.seed)
    out["seed"] = args.seed
    out["validation"] = vdoc
    out["block_dims"] = list(dec.block_dims)

    kind = {"smin": "min_output_renyi", "ce": "ent_assisted_capacity",
            "coh": "coherent_information"}[args.quantity]
    per_block = []
    for s in dec.blocks:
        sub = restrict(ch, s, tol)
        if kind == "min_output_renyi":
            q = min_output_renyi(sub, args.alpha, restarts=args.restarts, seed=args.seed, tol=tol)
        elif kind == "ent_assisted_capacity":
            q = ent_assisted_capacity(sub, tol, max_iters=args.max_iters)
        else:
            q = coherent_information(sub, restarts=args.restarts, seed=args.seed, tol=tol)
        per_block.append(q.value)
    combined = reduce_over_blocks(kind, per_block)
    qdoc = {
        "kind": kind,
        "method": "combined",
        "per_block": per_block,
        "combined_bits": combined,
    }
    if kind == "min_output_renyi":
        qdoc["alpha"] = args.alpha
    if kind != "ent_assisted_capacity":
        qdoc["restarts"] = args.restarts
    out["quantity"] = qdoc
    return out, [f"{kind}: {combined:.6f} bits over blocks {list(dec.block_dims)}"], 0


def _cmd_gen(args, tol):
    params = {}
    construction = args.kind
    if args.kind == "depolarizing":
        if args.p is None:
            raise InvalidParameter("depolarizing needs --p")
        params["p"] = args.p
        construction = f"depolarizing(p={args.p})"
    if args.kind == "unitary":
        if not args.unitary:
            raise InvalidParameter("unitary kind needs --unitary")
        params["unitary"] = parse_operator(_read(args.unitary))
    if args.kind == "random_unital":
        params["n_unitaries"] = args.n_unitaries
        params["seed"] = args.seed
        construction = f"random_unital(n={args.n_unitaries}, seed={args.seed})"
    ch = standard_channel(args.kind, args.dim, **params)
    doc = channel_to_document(
        ch,
        metadata={
            "name": args.kind,
            "seed": args.seed,
            "construction": construction,
            "tolerances": tolerances_to_document(tol),
        },
    )
    return doc, [f"generated {construction} on dim {args.dim}"], 0


_HANDLERS = {
    "validate": _cmd_validate,
    "decompose": _cmd_decompose,
    "restrict": _cmd_restrict,
    "match": _cmd_match,
    "fixed-states": _cmd_fixed_states,
    "check-measurement": _cmd_check_measurement,
    "capacity": _cmd_capacity,
    "gen": _cmd_gen,
}


def _error_report(command: str, exc: Exception, extra: dict | None = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "error": {"type": type(exc).__name__, "message": str(exc)},
    }
    if extra:
        doc["error"].update(extra)
    return doc


def run_command(argv) -> int:
    """Run one CLI invocation; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    command = args.command
    try:
        tol = _tol(args)
    except ValueError as exc:
        print(dumps_report(_error_report(command, exc)))
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        report, human, code = _HANDLERS[command](args, tol)
    except ParseError as exc:
        print(dumps_report(_error_report(command, exc, {"path": exc.path})))
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except InvalidParameter as exc:
        print(dumps_report(_error_report(command, exc)))
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        extra = {}
        if exc.report is not None:
            extra["validation"] = {
                "is_trace_preserving": exc.report.is_trace_preserving,
                "is_unital": exc.report.is_unital,
                "tp_residual": exc.report.tp_residual,
                "unital_residual": exc.report.unital_residual,
            }
        print(dumps_report(_error_report(command, exc, extra)))
        print(f"validation failure: {exc}", file=sys.stderr)
        return 1
    except InvalidMeasurement as exc:
        print(dumps_report(_error_report(command, exc)))
        print(f"validation failure: {exc}", file=sys.stderr)
        return 1
    except (ToleranceFailure, NonConvergence, MultisetMismatch) as exc:
        print(dumps_report(_error_report(command, exc)))
        print(f"tolerance failure: {exc}", file=sys.stderr)
        return 3
    except KrausBlocksError as exc:
        print(dumps_report(_error_report(command, exc)))
        print(f"error: {exc}", file=sys.stderr)
        return 3

    print(dumps_report(report))
    for line in human:
        print(line, file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
