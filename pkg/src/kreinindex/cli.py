"""Command-line front end.

Subcommands ``analyze | sweep | pencil | validate`` each accept an
optional TOML config file plus flag overrides.  Exit codes: 0 success,
2 config error, 3 numerical failure, 4 validation failure.
"""

from __future__ import annotations

import argparse
import sys
import time

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import potentials as pots
from .errors import ConfigError, KreinIndexError
from .potentials import Potential, ProblemParams, load_sampled_csv
from .report import FAULT_NAMES, RunConfig, analyze, emit, pencil_run, sweep, validate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VALIDATION = 4

_MODES = {"analyze": analyze, "sweep": sweep, "pencil": pencil_run, "validate": validate}


def potential_from_dict(d: dict) -> Potential:
    """Build a potential from a config table (recursive for sum/scaled)."""
    if "kind" not in d:
        raise ConfigError(f"potential table needs a 'kind': {d!r}")
    kind = d["kind"]
    try:
        if kind == "poschl_teller":
            return pots.PoschlTeller(nu=float(d.get("nu", 2.0)), scale=_opt_float(d, "scale"))
        if kind == "gaussian_well":
            return pots.GaussianWell(
                depth=float(d["depth"]), width=float(d["width"]), center=float(d.get("center", 0.0))
            )
        if kind == "square_well":
            return pots.SquareWell(depth=float(d["depth"]), half_width=float(d["half_width"]))
        if kind == "sampled":
            return load_sampled_csv(d["path"])
        if kind == "sum":
            return pots.Sum(parts=tuple(potential_from_dict(q) for q in d["parts"]))
        if kind == "scaled":
            return pots.Scaled(base=potential_from_dict(d["base"]), s=float(d["s"]))
        if kind == "zero":
            return pots.ZeroPotential()
    except KeyError as exc:
        raise ConfigError(f"potential kind {kind!r} is missing field {exc}") from exc
    raise ConfigError(f"unknown potential kind {kind!r}")


def _opt_float(d: dict, key: str) -> float | None:
    return float(d[key]) if key in d else None


def potential_from_string(spec: str) -> Potential:
    """Parse ``kind:key=val,key=val`` (also ``zero`` and ``csv:PATH``)."""
    spec = spec.strip()
    if spec == "zero":
        return pots.ZeroPotential()
    if spec.startswith("csv:"):
        return load_sampled_csv(spec[len("csv:"):])
    kind, _, rest = spec.partition(":")
    table: dict = {"kind": kind}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            if not _:
                raise ConfigError(f"bad potential spec fragment {item!r}")
            table[key.strip()] = float(val)
    return potential_from_dict(table)


def load_config(path: str | None, args: argparse.Namespace, mode: str) -> RunConfig:
    """Merge config file tables with command-line overrides."""
    raw: dict = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                raw = tomllib.load(fh)
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config file {path}: {exc}") from exc

    # the subcommand is the mode; a --mode flag or file entry may only agree
    if args.mode is not None and args.mode != mode:
        raise ConfigError(f"--mode {args.mode!r} conflicts with subcommand {mode!r}")

    if args.potential is not None:
        potential = potential_from_string(args.potential)
    elif "potential" in raw:
        potential = potential_from_dict(raw["potential"])
    else:
        raise ConfigError("no potential given (config [potential] table or --potential)")

    p = raw.get("params", {})
    params = ProblemParams(
        b=args.b if args.b is not None else float(p.get("b", 1.0)),
        c=args.c if args.c is not None else float(p.get("c", 1.0)),
    )
    g = raw.get("grid", {})
    t = raw.get("tolerances", {})
    s = raw.get("sweep", {})
    try:
        return RunConfig(
            potential=potential,
            params=params,
            half_width=args.half_width if args.half_width is not None else float(g.get("half_width", 20.0)),
            n_fd=args.points if args.points is not None else int(g.get("n_fd", 2000)),
            n_fourier=args.modes if args.modes is not None else int(g.get("n_fourier", 512)),
            kernel_tol=args.kernel_tol if args.kernel_tol is not None else float(t.get("kernel_tol", 1e-4)),
            degeneracy_tol=float(t.get("degeneracy_tol", 0.0)),
            tol_class=float(t.get("tol_class", 1e-8)),
            mode=mode,
            out=args.out if args.out is not None else raw.get("out"),
            emit_csv=bool(getattr(args, "emit_csv", False)),
            s_min=args.s_min if getattr(args, "s_min", None) is not None else float(s.get("s_min", 1.0)),
            s_max=args.s_max if getattr(args, "s_max", None) is not None else float(s.get("s_max", 9.0)),
            branch=args.branch if getattr(args, "branch", None) is not None else int(s.get("branch", 1)),
            bisect_tol=args.bisect_tol
            if getattr(args, "bisect_tol", None) is not None
            else float(s.get("bisect_tol", 1e-8)),
            coarse_points=int(s.get("coarse_points", 33)),
            inject_fault=getattr(args, "inject_fault", None),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}") from exc


def _add_common(sp: argparse.ArgumentParser):
    sp.add_argument("config", nargs="?", help="TOML config file")
    sp.add_argument("--potential", help="inline potential, e.g. poschl_teller:nu=2,scale=-6")
    sp.add_argument("--b", type=float, help="mass-like constant b > 0")
    sp.add_argument("--c", type=float, help="wave-speed-like constant c > 0")
    sp.add_argument("--half-width", type=float, dest="half_width", help="domain half width X")
    sp.add_argument("--points", type=int, help="interior finite-difference points")
    sp.add_argument("--modes", type=int, help="Fourier modes (even)")
    sp.add_argument("--kernel-tol", type=float, dest="kernel_tol", help="kernel window / 2bc")
    sp.add_argument("--mode", help="must match the subcommand when given")
    sp.add_argument("--out", help="output prefix; writes <out>.json (and CSVs with --emit-csv)")
    sp.add_argument("--emit-csv", action="store_true", dest="emit_csv", help="also write spectra CSVs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="krein-index",
        description="Spectral stability via the instability index, computed two independent ways.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("analyze", "negative count, kernel, constraint scalar, bounds, verdict"),
        ("sweep", "locate kernel crossings of an eigenvalue branch over s*V"),
        ("pencil", "diagonalize and classify the indefinite pencil spectrum"),
        ("validate", "cross-check the index formula against the pencil; exit 4 on failure"),
    ]:
        sp = sub.add_parser(name, help=help_text)
        _add_common(sp)
        if name == "sweep":
            sp.add_argument("--s-min", type=float, dest="s_min")
            sp.add_argument("--s-max", type=float, dest="s_max")
            sp.add_argument("--branch", type=int, help="0-based eigenvalue branch index")
            sp.add_argument("--bisect-tol", type=float, dest="bisect_tol")
        if name == "validate":
            sp.add_argument(
                "--inject-fault",
                dest="inject_fault",
                choices=FAULT_NAMES,
                help="deliberately corrupt one step (validator self-test)",
            )
    return parser


def _summary_lines(report) -> list[str]:
    idx = report.index
    lines = [
        f"kappa_minus = {idx['kappa_minus']}  kernel_dim = {idx['kernel_dim']}",
        f"d_v = {idx['d_v']}  kappa_ham = {idx['kappa_ham']}  verdict = {idx['verdict']}",
    ]
    if report.pencil is not None:
        counts = report.pencil["counts"]
        lines.append(
            "pencil: kappa_ham_direct = {kappa_ham_direct} "
            "(imag+ {kappa_imag_pos}, quadrant I {kappa_quadrant_1}, "
            "real+ Krein- {kappa_real_pos_neg_krein})".format(**counts)
        )
    if report.validation is not None:
        for ch in report.validation["checks"]:
            status = "PASS" if ch["passed"] else "FAIL"
            lines.append(f"  [{status}] {ch['name']}: {ch['detail']}")
        lines.append(f"validation all_passed = {report.validation['all_passed']}")
    if report.crossings is not None:
        lines.append(f"crossings found: {len(report.crossings)}")
        for cr in report.crossings:
            lines.append(
                f"  s* = {cr['s']:.9f}  branch eig = {cr['branch_eigenvalue']:.3e}  "
                f"verdict = {cr['verdict']}"
            )
    return lines


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    mode = args.command
    try:
        cfg = load_config(args.config, args, mode)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    t0 = time.perf_counter()
    try:
        report = _MODES[mode](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KreinIndexError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    elapsed = time.perf_counter() - t0

    for line in _summary_lines(report):
        print(line)
    print(f"elapsed: {elapsed:.2f} s", file=sys.stderr)

    if cfg.out:
        for path in emit(report, cfg.out, emit_csv=cfg.emit_csv):
            print(f"wrote {path}", file=sys.stderr)

    if report.validation is not None and not report.validation["all_passed"]:
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
