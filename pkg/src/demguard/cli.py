"""Command-line entry point ``demguard``.

Exit codes: 0 success, 2 usage or input-format error, 3 domain or
feasibility error, 4 numerical failure (no root, no convergence), 5 I/O
error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
import warnings
from pathlib import Path
from typing import Sequence

from . import __version__, attacks, keyrates
from .channels import (
    eta_brute_force,
    eta_from_blocks,
    eta_from_curves,
    eta_lower_bound_measured,
)
from .errors import DomainError, InputFormatError, NumericalError
from .io import (
    emit_region_csv,
    load_block_model,
    load_efficiency_csv,
    region_csv_text,
    write_manifest,
    write_report,
)
from .mathcore import grid as make_grid
from .oracle import FockOpSpec, simulate_faked_states, simulate_time_shift, verify_vacuum_commutation

log = logging.getLogger("demguard")

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4, 5
DEFAULT_GRID = "0.005:0.25:0.005"


class UsageError(Exception):
    pass


def parse_grid(text: str) -> list[float]:
    try:
        lo, hi, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"--grid expects lo:hi:step, got {text!r}") from None
    return make_grid(lo, hi, step)


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".10g")
    return "" if v is None else str(v)


def _emit(values: dict, args, argv, params: dict) -> None:
    for k, v in values.items():
        print(f"{k}={_fmt(v)}")
    if args.out:
        write_report(args.out, values)
        write_manifest(args.out, args.command, argv, params)


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise UsageError(f"{args.command} --model {getattr(args, 'model', '')} needs {flags}")


def cmd_rate(args, argv):
    params = {"model": args.model}
    if args.model in ("simplified", "single_photon"):
        _require(args, "qber", "eta")
        fn = keyrates.simplified_rate if args.model == "simplified" else keyrates.single_photon_eve_rate
        values = {"R": fn(args.qber, args.eta)}
        params.update(qber=args.qber, eta=args.eta)
    elif args.model == "koashi":
        _require(args, "uncertainty", "qber")
        values = {"R": keyrates.koashi_rate(args.uncertainty, args.qber)}
        params.update(uncertainty=args.uncertainty, qber=args.qber)
    elif args.model == "amplification":
        _require(args, "e1_x", "eta")
        values = {"e_star": keyrates.error_amplification_bound(args.e1_x, args.eta)}
        params.update(e1_x=args.e1_x, eta=args.eta)
    else:
        names = ("e_z", "e_x", "q_z", "q_x", "q1_x", "q1_z", "e1_x", "e1_z", "eta_z", "eta_x")
        _require(args, *names)
        inputs = keyrates.RateInputs(**{n: getattr(args, n) for n in names})
        for msg in inputs.side_condition_violations():
            log.warning("side condition violated: %s", msg)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", keyrates.SideConditionWarning)
            rep = keyrates.secure_rate(inputs, tight=args.tight)
        values = {"R_Z": rep.rate_z, "R_X": rep.rate_x, "e_star_x": rep.e_star_x, "e_star_z": rep.e_star_z}
        params.update({n: getattr(args, n) for n in names}, tight=args.tight)
    _emit(values, args, argv, params)


def cmd_attack(args, argv):
    fn = attacks.combined_attack if args.kind == "combined" else attacks.improved_attack_rate
    rep = fn(args.eta, args.qber)
    values = {
        "qber": rep.qber,
        "attacked_fraction": rep.attacked_fraction,
        "mutual_ab": rep.mutual_ab,
        "mutual_ae": rep.mutual_ae,
        "R": rep.rate,
        "success_prob": rep.success_prob,
    }
    _emit(values, args, argv, {"kind": args.kind, "eta": args.eta, "qber": args.qber})


def cmd_boundary(args, argv):
    if args.crossover:
        eta = attacks.attack_crossover()
        values = {"eta_crossover": eta, "qber_crossover": attacks.attack_qber_boundary("improved", eta)}
        _emit(values, args, argv, {"crossover": True, "inner_tol": 1e-6, "outer_tol": 1e-4})
        return
    if (args.attack is None) == (args.model is None):
        raise UsageError("boundary needs exactly one of --attack, --model or --crossover")
    if args.qber is None:
        raise UsageError("boundary needs --qber")
    if args.attack:
        eta = attacks.attack_boundary(args.attack, args.qber)
        params = {"attack": args.attack}
    else:
        model = "single_photon_eve" if args.model == "single_photon" else args.model
        eta = keyrates.proof_boundary(model, args.qber)
        params = {"model": args.model}
    params.update(qber=args.qber, tol=1e-6)
    _emit({"eta*": eta}, args, argv, params)


def region_curves(qber_grid: Sequence[float]) -> dict:
    return {
        "combined": attacks.attack_region("combined", qber_grid),
        "improved": attacks.attack_region("improved", qber_grid),
        "general": keyrates.proof_region("general", qber_grid),
        "single_photon": keyrates.proof_region("single_photon_eve", qber_grid),
    }


def cmd_region(args, argv):
    qber_grid = parse_grid(args.grid)
    if not all(0.0 < e < 0.5 for e in qber_grid):
        raise DomainError("region grid must lie inside (0, 1/2)")
    curves = region_curves(qber_grid)
    if not args.out:
        sys.stdout.write(region_csv_text(curves))
        return
    emit_region_csv(curves, args.out)
    write_manifest(args.out, "region", argv, {"grid": args.grid, "boundary_tol": 1e-6, "eta_bracket": "1e-06:1"})
    print(f"wrote {args.out}")


def cmd_eta(args, argv):
    path = Path(args.input)
    params = {"in": str(path)}
    if path.suffix.lower() == ".json":
        model = load_block_model(path)
        res = eta_from_blocks(model)
        values = {"eta": res.eta, "no_key": str(res.no_key).lower()}
        if args.brute_force:
            values["eta_brute_force"] = eta_brute_force(model, n_samples=args.samples, seed=args.seed)
            params.update(samples=args.samples, seed=args.seed)
    else:
        curve = load_efficiency_csv(path)
        if args.delta is not None:
            effs = [v for s in curve.samples for v in s[1:]]
            values = {"eta_lower_bound": eta_lower_bound_measured(effs, args.delta)}
            params["delta"] = args.delta
        else:
            eta_z, eta_x = eta_from_curves(curve, args.mode)
            values = {"eta_z": eta_z, "eta_x": eta_x}
            params["mode"] = args.mode
    _emit(values, args, argv, params)


def cmd_simulate(args, argv):
    fn = simulate_faked_states if args.attack == "faked_states" else simulate_time_shift
    stats = fn(args.eta, args.trials, args.seed, workers=args.workers)
    values = {
        "trials": stats.trials,
        "sifted": stats.sifted,
        "detected": stats.detected,
        "errors": stats.errors,
        "qber": stats.qber_estimate,
        "qber_stderr": stats.stderr,
        "detection_fraction": stats.detection_fraction,
    }
    if stats.posterior_estimate is not None:
        values["posterior"] = stats.posterior_estimate
        values["posterior_stderr"] = stats.posterior_stderr
    if stats.mutual_info_estimate is not None:
        values["mutual_info"] = stats.mutual_info_estimate
    values["seed"] = stats.seed
    _emit(values, args, argv, {"attack": args.attack, "eta": args.eta, "trials": args.trials,
                               "seed": args.seed, "workers": args.workers})


def cmd_verify(args, argv):
    params = tuple(args.param) if args.param else ()
    if args.op == "loss_to_ancilla" and not params:
        params = (0.3,)
    spec = FockOpSpec(args.modes, args.cutoff, args.op, params)
    dev = verify_vacuum_commutation(spec, args.trials, seed=args.seed)
    _emit({"max_deviation": dev}, args, argv, {"op": args.op, "modes": args.modes, "cutoff": args.cutoff,
                                               "parameters": " ".join(map(str, params)),
                                               "states": args.trials, "seed": args.seed})


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="demguard",
        description="Key-rate bounds and attacks for BB84 with detector efficiency mismatch.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def out_flag(sp):
        sp.add_argument("--out", default=None, metavar="PATH", help="also write results and a manifest")

    rate = sub.add_parser("rate", help="evaluate a proof-side key rate")
    rate.add_argument("--model", required=True,
                      choices=["simplified", "single_photon", "secure", "koashi", "amplification"])
    rate.add_argument("--qber", type=float)
    rate.add_argument("--eta", type=float)
    rate.add_argument("--uncertainty", type=float, help="H/(N Q_Z) for --model koashi")
    for name in ("e_z", "e_x", "q_z", "q_x", "q1_x", "q1_z", "e1_x", "e1_z", "eta_z", "eta_x"):
        rate.add_argument("--" + name.replace("_", "-"), dest=name, type=float)
    rate.add_argument("--tight", action="store_true", help="use e/(eta(1-e)+e) inside the entropy")
    out_flag(rate)

    att = sub.add_parser("attack", help="evaluate an attack at (eta, E)")
    att.add_argument("--kind", required=True, choices=["combined", "improved"])
    att.add_argument("--qber", type=float, required=True)
    att.add_argument("--eta", type=float, required=True)
    out_flag(att)

    bnd = sub.add_parser("boundary", help="eta at which a rate crosses zero")
    bnd.add_argument("--attack", choices=["combined", "improved", "pure_faked_states"])
    bnd.add_argument("--model", choices=["general", "single_photon"])
    bnd.add_argument("--crossover", action="store_true", help="intersection of the two attack curves")
    bnd.add_argument("--qber", type=float)
    out_flag(bnd)

    reg = sub.add_parser("region", help="boundary curves over a QBER grid as CSV")
    reg.add_argument("--grid", default=DEFAULT_GRID, metavar="LO:HI:STEP")
    out_flag(reg)

    eta = sub.add_parser("eta", help="mismatch parameter from a curve CSV or block-model JSON")
    eta.add_argument("--in", dest="input", required=True, metavar="PATH")
    eta.add_argument("--mode", choices=["basis_independent", "general"], default="basis_independent")
    eta.add_argument("--delta", type=float, help="mode-coupling bound; gives a measured lower bound")
    eta.add_argument("--brute-force", action="store_true")
    eta.add_argument("--samples", type=int, default=2000)
    eta.add_argument("--seed", type=int, default=0)
    out_flag(eta)

    sim = sub.add_parser("simulate", help="Monte Carlo attack simulation")
    sim.add_argument("--attack", required=True, choices=["faked_states", "time_shift"])
    sim.add_argument("--eta", type=float, required=True)
    sim.add_argument("--trials", type=int, default=1_000_000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--workers", type=int, default=1)
    out_flag(sim)

    ver = sub.add_parser("verify", help="vacuum-measurement redundancy check on a Fock space")
    ver.add_argument("--op", required=True,
                     choices=["number_preserving_unitary", "loss_to_ancilla", "vacuum_violating_test"])
    ver.add_argument("--param", type=float, action="append")
    ver.add_argument("--modes", type=int, default=2)
    ver.add_argument("--cutoff", type=int, default=3)
    ver.add_argument("--trials", type=int, default=100, help="number of random input states")
    ver.add_argument("--seed", type=int, default=0)
    out_flag(ver)
    return p


COMMANDS = {
    "rate": cmd_rate,
    "attack": cmd_attack,
    "boundary": cmd_boundary,
    "region": cmd_region,
    "eta": cmd_eta,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    start = time.perf_counter()
    try:
        COMMANDS[args.command](args, argv)
    except (UsageError, InputFormatError) as exc:
        print(f"demguard {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ZeroDivisionError) as exc:
        print(f"demguard {args.command}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalError as exc:
        print(f"demguard {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"demguard {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    log.debug("%s finished in %.3f s", args.command, time.perf_counter() - start)
    return EXIT_OK


def main() -> None:
    sys.exit(run())
