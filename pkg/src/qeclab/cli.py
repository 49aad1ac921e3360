"""Command-line front end: ``qeclab {codes,demo,rate,scan,ftcheck,prep}``.

Exit codes: 0 success, 1 runtime error, 2 usage or config error, 3 a check
ran and failed.
"""
from __future__ import annotations

import argparse
import configparser
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import codes as _codes
from . import decode, ftsim, harness
from .codes import CodeError, SurfaceLattice
from .noise import NoiseError, PauliChannel, channel_from_config
from .pauli import PauliError, format_pauli, parse

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, EXIT_CHECK = 0, 1, 2, 3
WORKERS_ENV = "QECLAB_WORKERS"


class UsageError(Exception):
    """Bad flags, config or input; maps to exit code 2."""


# -- config -------------------------------------------------------------------------

_ALLOWED = {
    "code": {"name"},
    "channel": {"type", "p", "px", "py", "pz", "gamma", "gamma_z", "t"},
    "run": {"trials", "seed", "decoder", "workers", "format", "output"},
    "scan": {"n", "p"},
}


@dataclass
class ExperimentConfig:
    code: str = "rep3"
    channel: dict = field(default_factory=lambda: {"type": "bitflip", "p": "0.1"})
    decoder: str | None = None
    trials: int = 10_000
    seed: int = 0
    N_list: list[int] = field(default_factory=lambda: [3, 4, 5])
    p_list: list[float] = field(default_factory=lambda: [0.05])
    workers: int | None = None
    output: str | None = None

    def validate(self, need_channel: bool = True) -> None:
        try:
            code = _codes.builtin(self.code)
            if need_channel:
                channel_from_config(self.channel)
        except (CodeError, NoiseError) as exc:
            raise UsageError(str(exc)) from None
        if self.decoder is not None and self.decoder not in ("lookup", "mwpm"):
            raise UsageError(f"unknown decoder {self.decoder!r}")
        if self.trials < 1:
            raise UsageError("trials must be >= 1")
        if any(N < 2 for N in self.N_list):
            raise UsageError("surface sizes must be >= 2")
        if any(not 0 <= p <= 1 for p in self.p_list):
            raise UsageError("probabilities must lie in [0, 1]")
        del code

    def summary(self) -> dict:
        return {"code": self.code, "channel": dict(self.channel), "decoder": self.decoder, "trials": self.trials,
                "seed": self.seed}


def load_config(path: str | Path, cfg: ExperimentConfig | None = None) -> ExperimentConfig:
    """Read a key = value file with [code], [channel], [run] and [scan] sections."""
    cfg = cfg or ExperimentConfig()
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    except configparser.Error as exc:
        raise UsageError(f"bad config: {exc}") from None
    for section in parser.sections():
        if section not in _ALLOWED:
            raise UsageError(f"unknown config section [{section}]")
        extra = set(parser[section]) - _ALLOWED[section]
        if extra:
            raise UsageError(f"unknown key(s) in [{section}]: {', '.join(sorted(extra))}")
    try:
        if parser.has_section("code"):
            cfg.code = parser["code"].get("name", cfg.code)
        if parser.has_section("channel"):
            cfg.channel = dict(parser["channel"])
        if parser.has_section("run"):
            run = parser["run"]
            cfg.trials = run.getint("trials", cfg.trials)
            cfg.seed = run.getint("seed", cfg.seed)
            cfg.decoder = run.get("decoder", cfg.decoder)
            cfg.workers = run.getint("workers", cfg.workers)
            cfg.output = run.get("output", cfg.output)
        if parser.has_section("scan"):
            sc = parser["scan"]
            if "n" in sc:
                cfg.N_list = [int(v) for v in sc["n"].split(",")]
            if "p" in sc:
                cfg.p_list = [float(v) for v in sc["p"].split(",")]
    except ValueError as exc:
        raise UsageError(f"bad config value: {exc}") from None
    return cfg


# -- output helpers ------------------------------------------------------------------------

def _emit(text: str, out) -> None:
    out.write(text if text.endswith("\n") else text + "\n")


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _params(code) -> str:
    return f"[[{code.n},{code.k},{code.d}]]"


# -- commands --------------------------------------------------------------------------

_DEFAULT_INSTANCES = {"bacon_shor": (3, 3), "surface": (3,), "parity_loss": (2,)}


def cmd_codes(args, out) -> int:
    if args.action == "list":
        rows = []
        for fam in _codes.FAMILIES:
            code = _codes.builtin(fam, *_DEFAULT_INSTANCES.get(fam, ()))
            rows.append({"family": fam, "example": code.name, "n": code.n, "k": code.k, "d": code.d})
        if args.format == "json":
            _emit(_dump_json(rows), out)
        elif args.format == "csv":
            _emit("family,example,n,k,d\n" + "\n".join(
                f"{r['family']},\"{r['example']}\",{r['n']},{r['k']},{r['d']}" for r in rows), out)
        else:
            _emit("\n".join(f"{r['family']:<12} {r['example']:<16} [[{r['n']},{r['k']},{r['d']}]]" for r in rows), out)
        return EXIT_OK
    if not args.name:
        raise UsageError("codes show needs a code name")
    try:
        code = _codes.builtin(args.name, *args.params)
    except CodeError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        _emit(_codes.catalog_json(code), out)
        return EXIT_OK
    if args.format == "csv":
        raise UsageError("codes show supports text and json")
    lines = [f"{code.name} {_params(code)}", "stabilizers:"]
    lines += [f"  {format_pauli(s, plus=True)}" for s in code.stabilizers]
    if code.gauge:
        lines += ["gauge:"] + [f"  {format_pauli(g, plus=True)}" for g in code.gauge]
    lines += ["logical X:"] + [f"  {format_pauli(s, plus=True)}" for s in code.logical_x]
    lines += ["logical Z:"] + [f"  {format_pauli(s, plus=True)}" for s in code.logical_z]
    _emit("\n".join(lines), out)
    return EXIT_OK


def cmd_demo(args, out) -> int:
    try:
        code = _codes.builtin(args.code, *args.params)
    except CodeError as exc:
        raise UsageError(str(exc)) from None
    try:
        error = parse(args.error)
    except PauliError as exc:
        raise UsageError(f"bad Pauli string: {exc}") from None
    if error.n != code.n:
        raise UsageError(f"{code.name} has {code.n} qubits, error has {error.n}")
    syn = decode.syndrome_of(code, error)
    report = {"seed": args.seed, "code": code.name, "error": format_pauli(error), "syndrome": str(syn)}
    if code.detection_only or code.d < 3:
        report["detection"] = decode.detect_only(code, syn).value
    else:
        if isinstance(code, SurfaceLattice):
            corr = (decode.mwpm_decode(code, code.defects(error, "X"), "X").correction
                    * decode.mwpm_decode(code, code.defects(error, "Z"), "Z").correction)
        else:
            corr = decode.build_lookup(code, complete=True).correction(syn.bits)
        residual = (error * corr).with_phase(0)
        report.update(correction=format_pauli(corr), correction_support=_support_label(corr),
                      residual=format_pauli(residual), outcome=decode.classify_residual(code, residual).value)
    if args.format == "json":
        _emit(_dump_json(report), out)
    elif args.format == "csv":
        raise UsageError("demo supports text and json")
    else:
        _emit("\n".join(f"{k}: {v}" for k, v in report.items()), out)
    return EXIT_OK


def _support_label(p) -> str:
    if p.weight == 0:
        return "none"
    return " ".join(f"{p.letter(q)}{q + 1}" for q in p.support)


def _resolve(args) -> ExperimentConfig:
    cfg = load_config(args.config) if getattr(args, "config", None) else ExperimentConfig()
    if getattr(args, "code", None):
        cfg.code = args.code
    if getattr(args, "channel", None) or getattr(args, "p", None) is not None:
        kind = args.channel or cfg.channel.get("type", "bitflip")
        p = args.p if args.p is not None else cfg.channel.get("p")
        if p is None:
            raise UsageError("channel needs --p")
        cfg.channel = {"type": kind, "p": str(p)}
    if getattr(args, "decoder", None):
        cfg.decoder = args.decoder
    if getattr(args, "trials", None) is not None:
        cfg.trials = args.trials
    if args.seed is not None:
        cfg.seed = args.seed
    if args.workers is not None:
        cfg.workers = args.workers
    if getattr(args, "sizes", None):
        cfg.N_list = list(args.sizes)
    if getattr(args, "probs", None):
        cfg.p_list = list(args.probs)
    if getattr(args, "output", None):
        cfg.output = args.output
    # scans always use bit-flip noise at the [scan] probabilities
    cfg.validate(need_channel=args.command != "scan")
    return cfg


def _write(text: str, cfg: ExperimentConfig, out) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        _emit(text, out)


def cmd_rate(args, out) -> int:
    cfg = _resolve(args)
    code = _codes.builtin(cfg.code)
    channel = channel_from_config(cfg.channel)
    decoder = cfg.decoder or harness.default_decoder(code)
    try:
        est = harness.logical_error_rate(code, channel, decoder, cfg.trials, cfg.seed, cfg.workers or 1)
    except decode.DecodeError as exc:
        raise UsageError(str(exc)) from None
    if args.trace:
        with open(args.trace, "w") as fh:
            for rec in harness.iter_trials(code, channel, decoder, min(cfg.trials, args.trace_limit), cfg.seed):
                fh.write(decode.trace_line(rec.trial, rec.syndrome, rec.correction, rec.outcome) + "\n")
    N = code.N if isinstance(code, SurfaceLattice) else code.n
    row = harness.ScanRow(code.name, N, channel.p, est, cfg.seed)
    if args.format == "csv":
        _write(harness.ScanResult((row,), ()).to_csv(), cfg, out)
    elif args.format == "json":
        _write(_dump_json({"config": cfg.summary(), "decoder": decoder, "estimate": est.to_json()}), cfg, out)
    else:
        lo, hi = est.interval
        _write(f"# seed={cfg.seed} code={code.name} channel={cfg.channel} decoder={decoder}\n"
               f"trials={est.trials} failures={est.failures} rate={est.rate:.6g} ci95=[{lo:.6g}, {hi:.6g}]",
               cfg, out)
    return EXIT_OK


def cmd_scan(args, out) -> int:
    cfg = _resolve(args)
    res = harness.surface_scaling_scan(cfg.N_list, cfg.p_list, cfg.trials, cfg.seed, cfg.workers or 1)
    if args.format == "csv":
        _write(res.to_csv(), cfg, out)
    elif args.format == "json":
        _write(_dump_json({"seed": cfg.seed, "rows": [dict(zip(harness.CSV_COLUMNS, r.as_csv())) for r in res.rows],
                           "diagnostics": list(res.diagnostics)}), cfg, out)
    else:
        lines = [f"# seed={cfg.seed} trials={cfg.trials}"]
        lines += [f"{r.code:<12} p={r.p:<8g} rate={r.estimate.rate:.5f} ci95=[{r.estimate.interval[0]:.5f}, "
                  f"{r.estimate.interval[1]:.5f}]" for r in res.rows]
        lines += [f"warning: {d}" for d in res.diagnostics]
        _write("\n".join(lines), cfg, out)
    return EXIT_OK


_BUILTIN_CIRCUITS = {"fanout": ftsim.fanout_copy_circuit, "pairwise": ftsim.pairwise_copy_circuit}


def cmd_ftcheck(args, out) -> int:
    if args.circuit in _BUILTIN_CIRCUITS:
        circuit = _BUILTIN_CIRCUITS[args.circuit]()
    else:
        try:
            text = Path(args.circuit).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read circuit: {exc}") from None
        try:
            circuit = ftsim.parse_circuit(text)
        except ftsim.FTError as exc:
            raise UsageError(str(exc)) from None
    try:
        report = ftsim.check_fault_tolerance(circuit)
    except ftsim.FTError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        _emit(report.dumps(), out)
    else:
        lines = [f"verdict: {'pass' if report.passed else 'fail'}",
                 f"faults checked: {report.faults_checked}", f"failing faults: {report.failures}"]
        if report.worst is not None:
            w = report.worst
            blocks = ", ".join(f"{k}={v}" for k, v in w.block_weights.items())
            lines += [f"worst fault: {w.fault}", f"residual: {format_pauli(w.residual)} (weight {w.residual.weight})",
                      f"per block: {blocks}"]
        _emit("\n".join(lines), out)
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_prep(args, out) -> int:
    seed = args.seed if args.seed is not None else 0
    if args.scan:
        rep = ftsim.prep_fault_scan(seed, args.max_rounds)
        data = {"seed": seed, **rep.to_json()}
        ok = rep.strict_pass
    else:
        noise = PauliChannel.depolarizing(args.p) if args.p else None
        try:
            res = ftsim.ft_steane_prep(np.random.default_rng(seed), noise, args.max_rounds)
        except ftsim.ProtocolAborted as exc:
            _emit(_dump_json({"seed": seed, "aborted": str(exc), "diagnostics": exc.diagnostics}), out)
            return EXIT_RUNTIME
        data = {"seed": seed, **res.to_json()}
        ok = True
    if args.format == "json":
        _emit(_dump_json(data), out)
    elif args.format == "csv":
        raise UsageError("prep supports text and json")
    else:
        _emit("\n".join(f"{k}: {v}" for k, v in data.items()), out)
    return EXIT_OK if ok else EXIT_CHECK


# -- parser --------------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--workers", type=int, default=None,
                   help=f"worker processes (default: ${WORKERS_ENV} or available cores)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="qeclab", description="Stabilizer-code experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("codes", parents=[common], help="list or show builtin codes")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.add_argument("params", nargs="*", type=int)
    p.set_defaults(func=cmd_codes)

    p = sub.add_parser("demo", parents=[common], help="decode one error and print the trace")
    p.add_argument("code")
    p.add_argument("params", nargs="*", type=int)
    p.add_argument("--error", required=True)
    p.set_defaults(func=cmd_demo)

    for name, func, helptext in (("rate", cmd_rate, "logical error rate"), ("scan", cmd_scan, "surface scan")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--config")
        p.add_argument("--trials", type=int)
        p.add_argument("--output")
        if name == "rate":
            p.add_argument("--code")
            p.add_argument("--channel", choices=("bitflip", "phaseflip", "depolarizing"))
            p.add_argument("--p", type=float)
            p.add_argument("--decoder", choices=("lookup", "mwpm"))
            p.add_argument("--trace", help="write JSON-lines trial traces here")
            p.add_argument("--trace-limit", type=int, default=1000)
        else:
            p.add_argument("--N", dest="sizes", type=int, nargs="+")
            p.add_argument("--p", dest="probs", type=float, nargs="+")
        p.set_defaults(func=func)

    p = sub.add_parser("ftcheck", parents=[common], help="single-fault check of a circuit file")
    p.add_argument("circuit", help="circuit file, or 'fanout' / 'pairwise'")
    p.set_defaults(func=cmd_ftcheck)

    p = sub.add_parser("prep", parents=[common], help="fault-tolerant Steane |0> preparation")
    p.add_argument("--p", type=float, default=0.0, help="depolarizing gate noise")
    p.add_argument("--max-rounds", type=int, default=20)
    p.add_argument("--scan", action="store_true", help="inject every single fault instead")
    p.set_defaults(func=cmd_prep)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.workers is None:
        args.workers = harness.default_workers() if args.command in ("rate", "scan") else 1
    if args.seed is None and args.command not in ("rate", "scan"):
        args.seed = 0
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - any other failure is a runtime error
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
