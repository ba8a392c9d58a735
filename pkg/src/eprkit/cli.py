"""Command-line harness.

Exit codes: 0 success, 1 invariant or verification failure, 2 usage error,
3 parse error.  Machine-readable output (the ``eprkit/1`` format, or CSV
for sweeps) goes to stdout; ``--pretty`` prints tables instead.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from . import io
from . import modular as md
from . import smap as sm
from . import teleport as tp
from .channel import apply_channel, channel_from_density, dual_channel, lueders_update
from .linalg import DimensionError, InvariantError, NotPSDError, PureState
from .states import bell_basis
from .verify import run_all

EXIT_FAIL, EXIT_USAGE, EXIT_PARSE = 1, 2, 3


class UsageError(Exception):
    pass


def _default_seed() -> int:
    return int(os.environ.get("EPRKIT_SEED", "0"))


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _short(x) -> str:
    return format(float(x), ".12g")


def _emit(args, value, kind=None, dims=None, meta=None, table=None):
    if args.pretty and table is not None:
        for row in table:
            print("  ".join(str(c) for c in row))
    else:
        sys.stdout.write(io.dumps(value, kind, dims, meta))


def _bipartite_input(obj: io.SerializedObject):
    """A pure state, or a density with two-factor dims."""
    if obj.kind == "pure_state":
        return obj.value
    if obj.kind == "density":
        if len(obj.dims) != 2:
            raise UsageError("density input needs two factor dims")
        return obj.value
    raise UsageError(f"expected a pure_state or density file, got {obj.kind}")


def cmd_schmidt(args):
    psi = io.read(args.state).value
    if not isinstance(psi, PureState):
        raise UsageError("schmidt needs a pure_state file")
    dec = sm.schmidt(psi)
    cls = sm.entanglement_class(psi).value
    table = [("j", "p_j")] + [(j, _short(p)) for j, p in enumerate(dec.coefficients)]
    table.append(("class", cls))
    _emit(args, dec, meta={"entanglement_class": cls}, table=table)


def cmd_smap(args):
    psi = io.read(args.state).value
    if not isinstance(psi, PureState):
        raise UsageError("smap needs a pure_state file")
    s = sm.smap_from_vector(psi, args.direction)
    table = [(" ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in row),) for row in s.kmatrix]
    _emit(args, s, meta={"direction": args.direction.upper()}, table=table)


def cmd_channel(args):
    if args.channel_cmd == "build":
        obj = io.read(args.density)
        if obj.kind != "density" or len(obj.dims) != 2:
            raise UsageError("channel build needs a density file with two factor dims")
        ch = channel_from_density(obj.value, obj.dims, args.direction)
        table = [("kraus", len(ch.kraus)), ("src_dim", ch.src_dim), ("dst_dim", ch.dst_dim)]
        _emit(args, ch, table=table)
        return
    ch = io.read(args.channel).value
    op = io.read(args.op).value
    out = apply_channel(ch, op) if args.channel_cmd == "apply" else dual_channel(ch, op)
    table = [(" ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in row),) for row in out]
    _emit(args, out, kind="operator", dims=[out.shape[0]], table=table)


def cmd_measure(args):
    state_obj = io.read(args.state)
    target = _bipartite_input(state_obj)
    phi = np.asarray(io.read(args.vector).value, dtype=complex).ravel()
    if isinstance(target, PureState):
        prob, prepared = sm.measure_update_vector(target, phi)
        post = prepared.density()
        dims = target.dims
    else:
        dims = state_obj.dims
        prob, post = lueders_update(target, phi, dims)
    report = {"probability": prob, "post_state": post, "dims": list(dims)}
    _emit(args, report, kind="report", table=[("probability", _short(prob))])


def _load_ancilla(path):
    obj = io.read(path)
    if obj.kind == "pure_state":
        return obj.value, None
    if obj.kind == "density" and len(obj.dims) == 2:
        return obj.value, obj.dims
    raise UsageError("ancilla must be a pure_state or a two-factor density")


def cmd_teleport(args):
    if args.teleport_cmd == "sweep":
        rows = tp.werner_sweep(args.werner_p, seed=args.seed)
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(tp.SWEEP_COLUMNS)
        for r in rows:
            w.writerow(
                [_fmt(r["p"]), r["outcome"]]
                + [_fmt(r[k]) for k in tp.SWEEP_COLUMNS[2:]]
            )
        return

    source = io.read(args.input).value
    ancilla, anc_dims = _load_ancilla(args.ancilla)
    basis = bell_basis() if args.basis == "bell" else io.read(args.basis).value
    if not isinstance(basis, tp.MeasurementBasis):
        raise UsageError("--basis must be 'bell' or a basis file")
    if args.corrections is None:
        corr = None
    elif args.corrections == "bell":
        corr = tp.bell_corrections()
    else:
        corr = io.read(args.corrections).value
    rep = tp.run_protocol(
        source, ancilla, basis, corr, ancilla_dims=anc_dims, samples=args.samples, seed=args.seed
    )
    report = {
        "seed": args.seed,
        "average_fidelity": rep.average_fidelity if corr is not None else None,
        "outcomes": [
            {
                "index": o.index,
                "probability": o.probability,
                "fidelity": o.fidelity,
                "trace_norm": o.trace_norm,
                "sqrt_fidelity": o.sqrt_fidelity,
                "output": o.raw_output,
            }
            for o in rep.outcomes
        ],
        "counts": rep.counts,
    }
    table = [("outcome", "probability", "fidelity", "count")] + [
        (
            o.index,
            _short(o.probability),
            "-" if o.fidelity is None else _short(o.fidelity),
            "-" if rep.counts is None else rep.counts[o.index],
        )
        for o in rep.outcomes
    ]
    _emit(args, report, kind="report", meta={"seed": args.seed}, table=table)


def cmd_modular(args):
    psi = io.read(args.state).value
    if not isinstance(psi, PureState):
        raise UsageError("modular needs a pure_state file")
    ds = md.verify_ds_relations(psi)
    residuals = dict(vars(ds))
    report = {
        "J": md.modular_conjugation(psi).kmatrix,
        "Delta": md.modular_operator(psi),
        "S": md.s_operator(psi).kmatrix,
        "ds_residuals": residuals,
    }
    table = [("relation", "max_residual")] + [(k, f"{v:.3e}") for k, v in residuals.items()]
    _emit(args, report, kind="report", table=table)


def cmd_verify(args):
    if len(args.dims) != 2:
        raise UsageError("--dims takes two factor dimensions")
    results = run_all(tuple(args.dims), args.trials, args.seed)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAIL if failed else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable tables")
    p = argparse.ArgumentParser(prog="eprkit", description="EPR channel maps and teleportation")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("schmidt", parents=[common], help="Schmidt coefficients and entanglement class")
    s.add_argument("state")
    s.set_defaults(func=cmd_schmidt)

    s = sub.add_parser("smap", parents=[common], help="antilinear map of a bipartite state")
    s.add_argument("state")
    s.add_argument("--direction", choices=["ba", "ab", "BA", "AB"], default="ba")
    s.set_defaults(func=cmd_smap)

    s = sub.add_parser("channel", help="build, apply or dualize channel maps")
    csub = s.add_subparsers(dest="channel_cmd", required=True)
    c = csub.add_parser("build", parents=[common])
    c.add_argument("density")
    c.add_argument("--direction", choices=["BA", "AB"], default="BA")
    c = csub.add_parser("apply", parents=[common])
    c.add_argument("channel")
    c.add_argument("op")
    c = csub.add_parser("dual", parents=[common])
    c.add_argument("channel")
    c.add_argument("op")
    s.set_defaults(func=cmd_channel)

    s = sub.add_parser("measure", parents=[common], help="Lueders update for a projection on factor A")
    s.add_argument("state")
    s.add_argument("--vector", required=True)
    s.set_defaults(func=cmd_measure)

    s = sub.add_parser("teleport", help="teleportation runs and Werner sweeps")
    tsub = s.add_subparsers(dest="teleport_cmd", required=True)
    t = tsub.add_parser("run", parents=[common])
    t.add_argument("--input", required=True)
    t.add_argument("--ancilla", required=True)
    t.add_argument("--basis", default="bell")
    t.add_argument("--corrections", help="'bell' or an operator_list file")
    t.add_argument("--seed", type=int, default=None)
    t.add_argument("--samples", type=int, default=0)
    t = tsub.add_parser("sweep", parents=[common])
    t.add_argument("--werner-p", type=_float_list, required=True)
    t.add_argument("--seed", type=int, default=None)
    s.set_defaults(func=cmd_teleport)

    s = sub.add_parser("modular", parents=[common], help="J, Delta, S and their relations")
    s.add_argument("state")
    s.set_defaults(func=cmd_modular)

    s = sub.add_parser("verify", parents=[common], help="run the invariant suites")
    s.add_argument("what", choices=["all"])
    s.add_argument("--dims", type=_int_list, default=[2, 2])
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=None)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "seed", 0) is None:
        args.seed = _default_seed()
    try:
        return args.func(args) or 0
    except io.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InvariantError, NotPSDError) as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, DimensionError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
