"""Command-line interface.

Machine-readable results (JSON or CSV) go to ``--out`` or standard output;
human-readable summaries go to standard error. Exit status is 0 on success,
1 on a domain error and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile

import numpy as np

from qchansim import fixtures, reproduce
from qchansim.channels import channel_from_json, channel_to_json
from qchansim.decomposer import DecomposeConfig, decompose
from qchansim.extreme import Decomposition17
from qchansim.geometry import DEFAULT_SAMPLES, image_cloud
from qchansim.metrics import compare
from qchansim.noise_presets import NoiseKind, preset_decomposition
from qchansim.numerics import PSD_TOL
from qchansim.randomgen import random_channel
from qchansim.tomography import EXACT, QptConfig, simulate_qpt
from qchansim.waveplates import compile_decomposition, compile_rotation
from qchansim.weakmeas import Strategy

log = logging.getLogger("qchansim")

REPRODUCE_TARGETS = ("table1", "table2", "tables3-6", "fig5")


class DomainError(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(out))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _csv(header, rows, comment: str | None = None) -> str:
    buf = io.StringIO()
    if comment:
        buf.write(f"# {comment}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _shots(value: str):
    if value == EXACT:
        return EXACT
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'exact', got {value!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("shots must be positive")
    return n


def _seed(value: str) -> int:
    n = int(value)
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return n


# -- subcommands -------------------------------------------------------------

def cmd_decompose(args) -> str:
    target = channel_from_json(_read_json(args.inp))
    init = Decomposition17.from_json(_read_json(args.init)) if args.init else None
    cfg = DecomposeConfig(args.tol, args.restarts, args.max_iter, args.seed)
    res = decompose(target, cfg, init=init)
    log.info(
        "achieved error %.3e after %d evaluations (restart %d, converged=%s)",
        res.achieved_error, res.objective_evals, res.restart_index, res.converged,
    )
    return _dump(res.to_json())


def cmd_preset(args) -> str:
    kind = NoiseKind(args.kind)
    d = preset_decomposition(kind, args.lam)
    doc = d.to_json()
    doc["circuit_angles"] = {
        name: {"gamma1": g.gamma1, "gamma2": g.gamma2}
        for name, g in (("e1", d.e1.circuit_angles()), ("e2", d.e2.circuit_angles()))
    }
    rows = [r for r in fixtures.noise_rows(kind.value) if math.isclose(r["lambda"], args.lam)]
    if rows:
        doc["printed_row"] = rows[0]
        doc["matches_print"] = reproduce.row_matches(kind.value, d, rows[0])
    return _dump(doc)


def cmd_random(args) -> str:
    return _dump(channel_to_json(random_channel(args.seed)))


def cmd_compare(args) -> str:
    a, b = (channel_from_json(_read_json(p)) for p in args.inp)
    return _dump(compare(a, b, psd_tol=args.psd_tol).to_json())


def cmd_qpt(args) -> str:
    ch = channel_from_json(_read_json(args.inp))
    chi = simulate_qpt(ch, QptConfig(shots=args.shots, seed=args.seed))
    return _dump(channel_to_json(chi))


def cmd_weakmeas(args) -> str:
    strategies = reproduce.FIG5_STRATEGIES
    if args.strategy:
        strategies = (Strategy(args.strategy),)
    header = ["lambda"]
    header += [f"fidelity_{s.value}" for s in strategies]
    header += [f"succ_{s.value}" for s in strategies]
    grid = np.linspace(0.0, 1.0, args.samples)
    rows = reproduce.weakmeas_rows(args.state, args.p1, grid, strategies)
    return _csv(header, [list(map(repr, r)) for r in rows], comment=f"input |{args.state}>, p1={args.p1}")


def cmd_bloch(args) -> str:
    ch = channel_from_json(_read_json(args.inp))
    xin, xout = image_cloud(ch, args.samples)
    rows = [[i, *map(repr, map(float, a)), *map(repr, map(float, b))] for i, (a, b) in enumerate(zip(xin, xout))]
    header = ["index", "x_in", "y_in", "z_in", "x_out", "y_out", "z_out"]
    return _csv(header, rows, comment="Bloch convention rho=(I+v.sigma)/2, |H> at +z")


def cmd_compile(args) -> str:
    if args.inp:
        return _dump(compile_decomposition(Decomposition17.from_json(_read_json(args.inp))))
    if args.axis is None or args.angle is None:
        raise DomainError("compile needs --in DECOMPOSITION.json or both --axis and --angle")
    axis = np.asarray(args.axis, dtype=float)
    norm = np.linalg.norm(axis)
    if norm == 0:
        raise DomainError("rotation axis must be non-zero")
    stack = compile_rotation(axis / norm, args.angle)
    return _dump({"axis": list(axis / norm), "two_theta": args.angle, "plates": stack.to_json()})


def cmd_reproduce(args) -> str:
    what = args.target
    if what == "table1":
        rows = reproduce.table1_report(refine=args.refine, seed=args.seed)
        for r in rows:
            log.info("%s: objective %.4f (printed epsilon %.4f)", r["channel"], r["objective"], r["printed_epsilon"])
        return _dump(rows)
    if what == "table2":
        return _dump(reproduce.table2_report())
    if what == "tables3-6":
        rows = reproduce.tables36_report()
        for r in rows:
            log.info(
                "%s lambda=%g consistent=%s matches=%s",
                r["kind"], r["lambda"], r["printed_consistent"], r["matches_print"],
            )
        return _dump(rows)
    grid = np.linspace(0.0, 1.0, args.samples)
    rows = []
    for state in fixtures.load()["fig5"]["inputs"]:
        for row in reproduce.weakmeas_rows(state, args.p1, grid):
            rows.append([state, *map(repr, row)])
    return _csv(["state", *reproduce.FIG5_COLUMNS], rows, comment=f"p1={args.p1}")


# -- parser ------------------------------------------------------------------

def _common(p, *flags):
    p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS, help="log progress to standard error")
    if "out" in flags:
        p.add_argument("--out", metavar="PATH", help="output file (default: standard output)")
    if "in" in flags:
        p.add_argument("--in", dest="inp", metavar="PATH", required=True, help="channel JSON")
    if "seed" in flags:
        p.add_argument("--seed", type=_seed, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qchansim", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to standard error")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="fit a two-extreme-channel mixture to a channel")
    _common(p, "in", "out", "seed")
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--max-iter", type=int, default=4000)
    p.add_argument("--init", metavar="PATH", help="decomposition JSON to start restart 0 from")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("preset", help="closed-form decomposition of a noise channel")
    _common(p, "out")
    p.add_argument("--kind", required=True, choices=[k.value for k in NoiseKind])
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("random", help="seeded random channel")
    _common(p, "out", "seed")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("compare", help="fidelity and distance metrics between two channels")
    _common(p, "out")
    p.add_argument("--in", dest="inp", metavar="PATH", nargs=2, required=True, help="two channel JSON files")
    p.add_argument("--psd-tol", type=float, default=PSD_TOL, help="tolerated negative Choi eigenvalue")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("qpt", help="simulated process tomography")
    _common(p, "in", "out", "seed")
    p.add_argument("--shots", type=_shots, default=EXACT, help="shots per setting, or 'exact'")
    p.set_defaults(func=cmd_qpt)

    p = sub.add_parser("weakmeas", help="weak-measurement protection sweep (CSV)")
    _common(p, "out")
    p.add_argument("--p1", type=float, default=0.8)
    p.add_argument("--strategy", choices=[s.value for s in Strategy], help="only this strategy")
    p.add_argument("--state", choices=["H", "V", "D", "A", "L", "R"], default="V")
    p.add_argument("--samples", type=int, default=21, help="number of lambda grid points")
    p.set_defaults(func=cmd_weakmeas)

    p = sub.add_parser("bloch", help="Bloch-sphere image of a channel (CSV)")
    _common(p, "in", "out")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.set_defaults(func=cmd_bloch)

    p = sub.add_parser("compile", help="wave-plate settings for a rotation or decomposition")
    _common(p, "out")
    p.add_argument("--in", dest="inp", metavar="PATH", help="decomposition JSON")
    p.add_argument("--axis", type=float, nargs=3, metavar=("X", "Y", "Z"))
    p.add_argument("--angle", type=float, help="rotation angle 2*theta in radians")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("reproduce", help="compare against the printed reference tables")
    _common(p, "out", "seed")
    p.add_argument("target", choices=REPRODUCE_TARGETS)
    p.add_argument("--refine", action="store_true", help="table1: also re-optimize from the printed parameters")
    p.add_argument("--p1", type=float, default=0.8)
    p.add_argument("--samples", type=int, default=21)
    p.set_defaults(func=cmd_reproduce)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        text = args.func(args)
        _emit(text, getattr(args, "out", None))
    except (DomainError, ValueError, ArithmeticError, KeyError) as exc:
        print(f"qchansim {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
