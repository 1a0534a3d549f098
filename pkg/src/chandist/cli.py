"""Command-line interface: channel ingestion, analyses, machine-readable output.

Subcommands read channel JSON files (or one JSON object from stdin with
``--stdin``) and print a single JSON document to stdout.  Exit codes:
0 success, 1 usage or malformed input, 2 numerical failure.  With a fixed
``--seed`` each command's output is byte-identical across runs.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .channels import SuperOp, difference
from .discriminate import optimal_input, verify
from .families import run_example_sweep
from .linalg import rank_eps
from .metrics import SolverOptions, dnorm, fmax
from .oracle import brute_dnorm
from .rankred import reduce_preimage
from .serialize import (
    REPR_CHOI,
    REPR_KRAUS,
    REPR_STINESPRING,
    SCHEMA_VERSION,
    SchemaError,
    channel_from_json,
    channel_to_json,
    dump_json,
    matrix_to_json,
    state_from_json,
    vector_to_json,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class NumericalFailure(RuntimeError):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_solver_flags(sub):
    sub.add_argument("--tol", type=float, default=1e-6,
                     help="solver tolerance (default 1e-6)")
    sub.add_argument("--restarts", type=int, default=16,
                     help="random restarts for nonconvex solves (default 16)")
    sub.add_argument("--seed", type=int, default=0,
                     help="random seed (default 0)")
    sub.add_argument("--threads", type=int, default=1,
                     help="worker count; 1 keeps runs bit-reproducible "
                          "(restarts run sequentially in this build)")
    sub.add_argument("--verbose", action="store_true",
                     help="include solver traces in the output")


def build_parser() -> _Parser:
    parser = _Parser(prog="chandist",
                     description="Distinguishability of quantum channels.")
    subs = parser.add_subparsers(dest="command", required=True,
                                 parser_class=_Parser)

    conv = subs.add_parser("convert", help="convert a channel between representations")
    conv.add_argument("channel", nargs="?", help="channel JSON file")
    conv.add_argument("--to", required=True, dest="target",
                      choices=[REPR_KRAUS, REPR_CHOI, REPR_STINESPRING])
    conv.add_argument("--stdin", action="store_true",
                      help="read the channel JSON from stdin")

    dn = subs.add_parser("dnorm", help="diamond norm of a channel difference")
    dn.add_argument("phi0", nargs="?", help="first channel JSON file")
    dn.add_argument("phi1", nargs="?", help="second channel JSON file")
    dn.add_argument("--stdin", action="store_true",
                    help='read {"phi0": ..., "phi1": ...} from stdin')
    _add_solver_flags(dn)

    disc = subs.add_parser("discriminate",
                           help="construct an optimal discriminating input")
    disc.add_argument("phi0", nargs="?")
    disc.add_argument("phi1", nargs="?")
    disc.add_argument("--stdin", action="store_true",
                      help='read {"phi0": ..., "phi1": ...} from stdin')
    disc.add_argument("--out", help="write the result JSON to this file")
    _add_solver_flags(disc)

    ex = subs.add_parser("example", help="reproduce a worked channel family")
    ex.add_argument("--family", required=True, choices=["werner", "pauli"])
    ex.add_argument("--n", type=int, default=2, help="input dimension")
    ex.add_argument("--k-list", default=None,
                    help="comma-separated ancilla dimensions (default 1..n)")
    _add_solver_flags(ex)

    rr = subs.add_parser("rank-reduce",
                         help="low-rank preimage with the same channel output")
    rr.add_argument("phi", nargs="?", help="channel JSON file")
    rr.add_argument("rho", nargs="?", help="state JSON file")
    rr.add_argument("--stdin", action="store_true",
                    help='read {"phi": ..., "rho": ...} from stdin')
    rr.add_argument("--verbose", action="store_true",
                    help="include the per-step reduction trace")

    od = subs.add_parser("oracle",
                         help="brute-force diamond norm (test pipelines only)")
    od.add_argument("phi0", nargs="?")
    od.add_argument("phi1", nargs="?",
                    help="optional; when given the difference is used")
    od.add_argument("--stdin", action="store_true",
                    help='read {"phi0": ..., "phi1": ...} from stdin')
    od.add_argument("--restarts", type=int, default=64)
    od.add_argument("--seed", type=int, default=0)
    return parser


def _load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _load_stdin():
    try:
        return json.load(sys.stdin)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"stdin: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _channel_inputs(args, parser, names):
    """Load the named channel/state documents from files or stdin."""
    if args.stdin:
        doc = _load_stdin()
        if not isinstance(doc, dict):
            raise SchemaError("stdin: expected an object")
        missing = [n for n in names if n not in doc]
        if missing:
            raise SchemaError(f"stdin: missing field(s) {', '.join(missing)}")
        return [doc[n] for n in names]
    paths = [getattr(args, n) for n in names]
    if any(p is None for p in paths):
        parser.error(f"expected {len(names)} file argument(s) or --stdin")
    return [_load_json_file(p) for p in paths]


def _solver_options(args) -> SolverOptions:
    return SolverOptions(tol=args.tol, restarts=args.restarts, seed=args.seed)


def _cmd_convert(args, parser) -> dict:
    if args.stdin:
        doc = _load_stdin()
    else:
        if args.channel is None:
            parser.error("expected a channel file argument or --stdin")
        doc = _load_json_file(args.channel)
    phi = channel_from_json(doc)
    return channel_to_json(phi, args.target)


def _cmd_dnorm(args, parser) -> dict:
    doc0, doc1 = _channel_inputs(args, parser, ["phi0", "phi1"])
    phi0 = channel_from_json(doc0, "phi0")
    phi1 = channel_from_json(doc1, "phi1")
    opts = _solver_options(args)
    delta = difference(phi0, phi1)
    rank = rank_eps(delta.choi)
    if rank == 0:
        value = 0.0
        converged = True
    else:
        from .channels import complementary_pair, kraus_from_choi

        ka, kb = kraus_from_choi(delta.choi, delta.dim_in, delta.dim_out)
        psi_a, psi_b = complementary_pair(
            SuperOp(ka, kb, delta.dim_in, delta.dim_out))
        res = fmax(psi_a, psi_b, opts)
        value, converged = res.value, res.converged
    if not converged:
        raise NumericalFailure(
            f"fidelity maximization did not certify convergence at tol {opts.tol}")
    return {
        "schema_version": SCHEMA_VERSION,
        "dnorm": value,
        "success_probability": 0.5 + value / 4.0,
        "choi_rank": rank,
    }


def _cmd_discriminate(args, parser) -> dict:
    doc0, doc1 = _channel_inputs(args, parser, ["phi0", "phi1"])
    phi0 = channel_from_json(doc0, "phi0")
    phi1 = channel_from_json(doc1, "phi1")
    opts = _solver_options(args)
    result = optimal_input(phi0, phi1, opts)
    report = verify(result, phi0, phi1)
    if not result.diagnostics.get("trivial") and not result.diagnostics.get(
            "fmax_converged", True):
        raise NumericalFailure("fidelity maximization did not converge")
    doc = {
        "schema_version": SCHEMA_VERSION,
        "input_vector": vector_to_json(result.input_vector),
        "ancilla_dim": result.ancilla_dim,
        "achieved_value": result.achieved_value,
        "dnorm_value": result.dnorm_value,
        "choi_rank": result.choi_rank_k,
        "success_probability": result.measurement.success_probability,
        "measurement_projector": matrix_to_json(result.measurement.projector),
        "verification": report,
    }
    if args.verbose:
        doc["diagnostics"] = _jsonable(result.diagnostics)
    return doc


def _cmd_example(args, parser) -> list:
    if args.family == "werner" and args.n < 2:
        parser.error("--n must be at least 2 for the werner family")
    if args.family == "pauli":
        args.n = 2
    if args.k_list is None:
        ks = list(range(1, args.n + 1))
    else:
        try:
            ks = [int(x) for x in args.k_list.split(",") if x.strip()]
        except ValueError:
            parser.error("--k-list must be comma-separated integers")
        if not ks:
            parser.error("--k-list must name at least one dimension")
    opts = _solver_options(args)
    try:
        reports = run_example_sweep(args.family, args.n, ks, opts)
    except ValueError as exc:
        parser.error(str(exc))
    return [{
        "schema_version": SCHEMA_VERSION,
        "family": args.family,
        "n": r.n,
        "k": r.k,
        "dnorm_ref": r.dnorm_ref,
        "ancilla_value": r.ancilla_value_computed,
        "upper_bound": r.upper_bound,
        "success_probability": r.success_probability,
    } for r in reports]


def _cmd_rank_reduce(args, parser) -> dict:
    doc_phi, doc_rho = _channel_inputs(args, parser, ["phi", "rho"])
    phi = channel_from_json(doc_phi, "phi")
    rho = state_from_json(doc_rho, "rho")
    rank_before = rank_eps(rho)
    reduced, trace = reduce_preimage(phi, rho)
    residual = float(np.linalg.norm(phi(reduced) - phi(rho)))
    doc = {
        "schema_version": SCHEMA_VERSION,
        "rho_reduced": matrix_to_json(reduced),
        "rank_before": rank_before,
        "rank_after": rank_eps(reduced),
        "residual": residual,
    }
    if args.verbose:
        doc["trace"] = [[int(r), float(t), float(res)]
                        for r, t, res in trace.steps]
    return doc


def _cmd_oracle(args, parser) -> dict:
    if args.stdin:
        doc = _load_stdin()
        if not isinstance(doc, dict) or "phi0" not in doc:
            raise SchemaError('stdin: expected {"phi0": ..., "phi1": ...?}')
        phi0 = channel_from_json(doc["phi0"], "phi0")
        phi1 = channel_from_json(doc["phi1"], "phi1") if doc.get("phi1") else None
    else:
        if args.phi0 is None:
            parser.error("expected at least one channel file or --stdin")
        phi0 = channel_from_json(_load_json_file(args.phi0), "phi0")
        phi1 = (channel_from_json(_load_json_file(args.phi1), "phi1")
                if args.phi1 else None)
    target = difference(phi0, phi1) if phi1 is not None else phi0
    value = brute_dnorm(target, restarts=args.restarts, seed=args.seed)
    return {"schema_version": SCHEMA_VERSION, "value": value}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


_COMMANDS = {
    "convert": _cmd_convert,
    "dnorm": _cmd_dnorm,
    "discriminate": _cmd_discriminate,
    "example": _cmd_example,
    "rank-reduce": _cmd_rank_reduce,
    "oracle": _cmd_oracle,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = _COMMANDS[args.command](args, parser)
    except SchemaError as exc:
        print(f"chandist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as exc:
        print(f"chandist: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"chandist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = dump_json(doc)
    out_path = getattr(args, "out", None)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
