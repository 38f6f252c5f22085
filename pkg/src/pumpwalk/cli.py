"""Command-line front end.

Curve subcommands (walk, yield, ef, mc) default to CSV; report
subcommands (werner, pipeline) default to JSON; either can be forced
with --format.  Exit codes: 0 success, 1 usage error, 2 verification
failure, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from dataclasses import asdict, dataclass
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from .channel import (
    DephasingChannel,
    Protocol,
    WalkSpec,
    kink_probability,
    step_up_probability,
)
from .errors import ConvergenceError, OracleCheckError
from .fidelity import DEFAULT_DELTA_MAX, expected_fidelity, optimal_delta_h
from .montecarlo import DEFAULT_TRIALS, estimate_success_curve
from .oracle import bell_weights, bilateral_distill_step, verify_parity_map
from .walk import DEFAULT_ROUND_CAP, DEFAULT_TAIL, halting_distribution
from .werner import (
    bell_state_density,
    coefficients_after,
    full_pipeline,
    recursion_step,
    residual_xy,
    residual_z,
    rounds_for_target,
    werner_coefficients,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_NONCONVERGENCE = 3

_META = frozenset({"subcommand", "format", "out", "config"})

# Pairs where setting one flag on the command line must also silence the
# other in a config file, or the exactly-one validation would reject the
# merge even though the command line is supposed to win.
_EXCLUSIVE: dict[str, tuple[tuple[str, str], ...]] = {
    "walk": (("delta-h", "target-fidelity"),),
    "yield": (("delta-h", "target-fidelity"),),
    "mc": (("delta-h", "target-fidelity"),),
    "ef": (("delta-h", "optimize"), ("epsilon", "grid")),
    "werner": (("rounds", "target-xy"),),
}


@dataclass(frozen=True)
class RunConfig:
    """Frozen record of one invocation.

    Equal configs produce byte-identical output, so this is the unit
    callers should cache or compare on.
    """

    subcommand: str
    options: tuple[tuple[str, Any], ...]
    fmt: str | None
    out: str | None

    def get(self, name: str, default: Any = None) -> Any:
        for key, value in self.options:
            if key == name:
                return value
        return default


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the contract wants 1.
    def error(self, message: str):  # noqa: ANN201 - argparse API
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(
    parser: argparse.ArgumentParser,
    *,
    tail: bool = False,
    t_max: bool = False,
    seed: bool = False,
) -> None:
    parser.add_argument(
        "--format",
        choices=("csv", "json"),
        default=None,
        help="output format (default: csv for curves, json for reports)",
    )
    parser.add_argument("--out", metavar="PATH", default=None, help="write here instead of stdout")
    parser.add_argument(
        "--config",
        metavar="FILE",
        default=None,
        help="key=value file pre-populating flags; command line wins",
    )
    if tail:
        parser.add_argument(
            "--tail",
            type=float,
            default=DEFAULT_TAIL,
            help="truncate the halting table once this much mass is unresolved",
        )
    if t_max:
        parser.add_argument(
            "--t-max",
            type=int,
            default=DEFAULT_ROUND_CAP,
            help="abort rather than tabulate past this many rounds",
        )
    if seed:
        parser.add_argument("--seed", type=int, default=0, help="64-bit master seed")


def _add_walk_flags(parser: argparse.ArgumentParser, protocols: Sequence[str]) -> None:
    parser.add_argument("--epsilon", type=float, default=None, help="dephasing probability")
    parser.add_argument("--delta-h", type=int, default=None, help="halting magnitude")
    parser.add_argument(
        "--target-fidelity",
        type=float,
        default=None,
        help="derive the smallest halting magnitude reaching this fidelity",
    )
    parser.add_argument("--protocol", choices=tuple(protocols), default="nps")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = _Parser(prog="pumpwalk", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    table: dict[str, argparse.ArgumentParser] = {}

    p = subs.add_parser("walk", help="exact halting-round table per protocol")
    _add_walk_flags(p, ("nps", "ps", "both"))
    _add_common(p, tail=True, t_max=True)
    table["walk"] = p

    p = subs.add_parser("yield", help="mean rounds and yield per protocol")
    _add_walk_flags(p, ("nps", "ps", "both"))
    _add_common(p, tail=True, t_max=True)
    table["yield"] = p

    p = subs.add_parser("ef", help="expected fidelity under local errors")
    p.add_argument("--eta", type=float, default=None, help="per-round local error rate")
    p.add_argument("--epsilon", type=float, default=None, help="single dephasing probability")
    p.add_argument("--grid", default=None, metavar="LO:HI:N", help="sweep epsilon over N points")
    p.add_argument("--delta-h", type=int, default=None, help="fixed halting magnitude")
    p.add_argument("--optimize", action="store_true", help="sweep delta_h for the best E(F)")
    p.add_argument("--delta-max", type=int, default=DEFAULT_DELTA_MAX)
    _add_common(p, tail=True, t_max=True)
    table["ef"] = p

    p = subs.add_parser("werner", help="twirled-source preprocessing residuals")
    p.add_argument("--f0", type=float, default=None, help="raw pair fidelity in (0.5, 1]")
    p.add_argument("--rounds", type=int, default=None, help="preprocessing depth")
    p.add_argument(
        "--target-xy",
        type=float,
        default=None,
        help="choose the depth that brings X+Y noise at or below this",
    )
    _add_common(p)
    table["werner"] = p

    p = subs.add_parser("pipeline", help="preprocessing chained into the optimized walk")
    p.add_argument("--f0", type=float, default=None, help="raw pair fidelity in (0.5, 1]")
    p.add_argument("--target-xy", type=float, default=None)
    p.add_argument("--delta-max", type=int, default=DEFAULT_DELTA_MAX)
    _add_common(p, tail=True, t_max=True)
    table["pipeline"] = p

    p = subs.add_parser("mc", help="Monte Carlo halting-round tally")
    _add_walk_flags(p, ("nps", "ps"))
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    _add_common(p, t_max=True, seed=True)
    table["mc"] = p

    p = subs.add_parser("verify", help="run the invariant suites")
    p.add_argument(
        "--case",
        choices=_VERIFY_ORDER,
        default=None,
        help="run one suite instead of all of them",
    )
    p.add_argument("--epsilon", type=float, default=None, help="override the default grid")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    _add_common(p, seed=True)
    table["verify"] = p

    return parser, table


def _cli_flag_names(tokens: Sequence[str]) -> set[str]:
    names = set()
    for token in tokens:
        if token.startswith("--"):
            names.add(token[2:].split("=", 1)[0])
    return names


def _config_args(
    path: str,
    parser: argparse.ArgumentParser,
    cli_tail: Sequence[str],
    subcommand: str,
) -> list[str]:
    """Translate a key=value file into argv tokens, dropping overridden keys."""
    overridden = _cli_flag_names(cli_tail)
    for pair in _EXCLUSIVE.get(subcommand, ()):
        if overridden & set(pair):
            overridden |= set(pair)
    actions: dict[str, argparse.Action] = {}
    for action in parser._actions:  # noqa: SLF001 - argparse keeps no public registry
        for opt in action.option_strings:
            if opt.startswith("--"):
                actions[opt[2:]] = action
    args: list[str] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, raw_line in enumerate(handle, start=1):
            line = raw_line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key = key.strip().replace("_", "-")
            value = value.strip()
            if key == "config":
                raise ValueError(f"{path}:{lineno}: config files cannot nest")
            action = actions.get(key)
            if action is None:
                raise ValueError(f"{path}:{lineno}: unknown option {key!r} for {subcommand!r}")
            if key in overridden:
                continue
            if action.nargs == 0:
                lowered = value.lower()
                if lowered in ("1", "true", "yes", "on"):
                    args.append("--" + key)
                elif lowered not in ("0", "false", "no", "off"):
                    raise ValueError(f"{path}:{lineno}: {key!r} wants a boolean, got {value!r}")
            else:
                args.extend(("--" + key, value))
    return args


def _fmt_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _csv_table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt_cell(cell) for cell in row])
    return buffer.getvalue()


def _json_text(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _require(config: RunConfig, name: str) -> Any:
    value = config.get(name)
    if value is None:
        flag = "--" + name.replace("_", "-")
        raise ValueError(f"{flag} is required for {config.subcommand!r}")
    return value


def _check_seed(seed: int) -> int:
    if not (0 <= seed < 2**64):
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def _parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must look like LO:HI:N, got {text!r}")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError(f"grid needs at least one point, got {count}")
    return np.linspace(lo, hi, count)


def _format_or(config: RunConfig, default: str) -> str:
    return config.fmt or default


def _protocols(config: RunConfig) -> tuple[Protocol, ...]:
    name = config.get("protocol") or "nps"
    if name == "both":
        return (Protocol.NPS, Protocol.PS)
    return (Protocol(name),)


def _spec_for(config: RunConfig, protocol: Protocol) -> WalkSpec:
    channel = DephasingChannel(float(_require(config, "epsilon")))
    delta_h = config.get("delta_h")
    target = config.get("target_fidelity")
    if (delta_h is None) == (target is None):
        raise ValueError("supply exactly one of --delta-h or --target-fidelity")
    return WalkSpec(
        channel=channel,
        delta_h=None if delta_h is None else int(delta_h),
        protocol=protocol,
        target_fidelity=None if target is None else float(target),
    )


def cmd_walk(config: RunConfig) -> tuple[str, int]:
    tail = float(config.get("tail", DEFAULT_TAIL))
    t_cap = int(config.get("t_max", DEFAULT_ROUND_CAP))
    rows: list[tuple[Any, ...]] = []
    blocks: list[dict[str, Any]] = []
    for protocol in _protocols(config):
        spec = _spec_for(config, protocol)
        dist = halting_distribution(spec, tail, t_cap)
        walk_yield = 1.0 / dist.mean_rounds
        table = [
            (protocol.value, int(t), float(p), float(c))
            for t, p, c in zip(dist.rounds, dist.probabilities, dist.cumulative)
        ]
        rows.extend(table)
        rows.append((protocol.value, "mean_rounds", dist.mean_rounds, None))
        rows.append((protocol.value, "yield", walk_yield, None))
        blocks.append(
            {
                "protocol": protocol.value,
                "epsilon": spec.channel.epsilon,
                "delta_h": int(spec.delta_h),
                "halting_fidelity": spec.halting_fidelity,
                "mean_rounds": dist.mean_rounds,
                "yield": walk_yield,
                "tail_bound": dist.tail_bound,
                "rows": [
                    {"t": t, "p_halt": p, "p_cumulative": c}
                    for _, t, p, c in table
                ],
            }
        )
    if _format_or(config, "csv") == "json":
        return _json_text({"command": "walk", "protocols": blocks}), EXIT_OK
    return _csv_table(("protocol", "T", "p_halt", "p_cumulative"), rows), EXIT_OK


def cmd_yield(config: RunConfig) -> tuple[str, int]:
    tail = float(config.get("tail", DEFAULT_TAIL))
    t_cap = int(config.get("t_max", DEFAULT_ROUND_CAP))
    rows = []
    for protocol in _protocols(config):
        spec = _spec_for(config, protocol)
        dist = halting_distribution(spec, tail, t_cap)
        rows.append(
            (protocol.value, int(spec.delta_h), dist.mean_rounds, 1.0 / dist.mean_rounds)
        )
    if _format_or(config, "csv") == "json":
        payload = [
            {"protocol": r[0], "delta_h": r[1], "mean_rounds": r[2], "yield": r[3]}
            for r in rows
        ]
        return _json_text({"command": "yield", "protocols": payload}), EXIT_OK
    return _csv_table(("protocol", "delta_h", "mean_rounds", "yield"), rows), EXIT_OK


def cmd_ef(config: RunConfig) -> tuple[str, int]:
    eta = float(_require(config, "eta"))
    optimize = bool(config.get("optimize"))
    delta_h = config.get("delta_h")
    if optimize == (delta_h is not None):
        raise ValueError("supply exactly one of --delta-h or --optimize")
    grid_text = config.get("grid")
    eps_single = config.get("epsilon")
    if (grid_text is None) == (eps_single is None):
        raise ValueError("supply exactly one of --epsilon or --grid")
    epsilons = _parse_grid(grid_text) if grid_text is not None else [float(eps_single)]
    delta_max = int(config.get("delta_max", DEFAULT_DELTA_MAX))
    tail = float(config.get("tail", DEFAULT_TAIL))
    t_cap = int(config.get("t_max", DEFAULT_ROUND_CAP))

    rows: list[tuple[float, int, float, float]] = []
    for eps in epsilons:
        try:
            channel = DephasingChannel(float(eps))
            if optimize:
                report = optimal_delta_h(
                    channel, eta, delta_max, tail_threshold=tail, t_cap=t_cap
                )
            else:
                spec = WalkSpec(channel=channel, delta_h=int(delta_h))
                report = expected_fidelity(spec, eta, tail, t_cap)
        except (ValueError, ConvergenceError) as exc:
            if len(epsilons) == 1:
                raise
            # Grid sweeps survive bad cells so the rest of the curve lands.
            print(f"pumpwalk: ef: skipped epsilon={eps!r}: {exc}", file=sys.stderr)
            continue
        rows.append(
            (
                float(eps),
                int(report.spec.delta_h),
                report.expected_fidelity,
                report.expected_infidelity,
            )
        )
    if _format_or(config, "csv") == "json":
        payload = [
            {
                "epsilon": r[0],
                "delta_h": r[1],
                "expected_fidelity": r[2],
                "expected_infidelity": r[3],
            }
            for r in rows
        ]
        return _json_text({"command": "ef", "eta": eta, "rows": payload}), EXIT_OK
    header = ("epsilon", "delta_h", "expected_fidelity", "expected_infidelity")
    return _csv_table(header, rows), EXIT_OK


def cmd_werner(config: RunConfig) -> tuple[str, int]:
    f0 = float(_require(config, "f0"))
    rounds = config.get("rounds")
    target = config.get("target_xy")
    if (rounds is None) == (target is None):
        raise ValueError("supply exactly one of --rounds or --target-xy")
    n = int(rounds) if rounds is not None else rounds_for_target(f0, float(target))
    coeffs = coefficients_after(f0, n)
    scaled = coeffs.rescaled()
    payload = {
        "command": "werner",
        "f0": f0,
        "rounds": n,
        "target_xy": None if target is None else float(target),
        "survival_weight": coeffs.total,
        "coefficients": {"a": coeffs.a, "b": coeffs.b, "c": coeffs.c, "d": coeffs.d},
        "normalized": {"a": scaled.a, "b": scaled.b, "c": scaled.c, "d": scaled.d},
        "residual_xy": residual_xy(f0, n),
        "residual_z": residual_z(f0, n),
    }
    if _format_or(config, "json") == "csv":
        rows = [
            ("f0", f0),
            ("rounds", n),
            ("target_xy", payload["target_xy"]),
            ("survival_weight", payload["survival_weight"]),
            ("coefficient_a", coeffs.a),
            ("coefficient_b", coeffs.b),
            ("coefficient_c", coeffs.c),
            ("coefficient_d", coeffs.d),
            ("normalized_a", scaled.a),
            ("normalized_b", scaled.b),
            ("normalized_c", scaled.c),
            ("normalized_d", scaled.d),
            ("residual_xy", payload["residual_xy"]),
            ("residual_z", payload["residual_z"]),
        ]
        return _csv_table(("key", "value"), rows), EXIT_OK
    return _json_text(payload), EXIT_OK


def cmd_pipeline(config: RunConfig) -> tuple[str, int]:
    f0 = float(_require(config, "f0"))
    target = float(_require(config, "target_xy"))
    report = full_pipeline(
        f0,
        target,
        delta_max=int(config.get("delta_max", DEFAULT_DELTA_MAX)),
        tail_threshold=float(config.get("tail", DEFAULT_TAIL)),
        t_cap=int(config.get("t_max", DEFAULT_ROUND_CAP)),
    )
    payload = asdict(report)
    payload["success_probabilities"] = list(report.success_probabilities)
    payload["command"] = "pipeline"
    if _format_or(config, "json") == "csv":
        rows = [(key, payload[key]) for key in sorted(payload) if key != "command"]
        flat = []
        for key, value in rows:
            if isinstance(value, list):
                flat.extend((f"{key}_{i + 1}", v) for i, v in enumerate(value))
            else:
                flat.append((key, value))
        return _csv_table(("key", "value"), flat), EXIT_OK
    return _json_text(payload), EXIT_OK


def cmd_mc(config: RunConfig) -> tuple[str, int]:
    (protocol,) = _protocols(config)
    spec = _spec_for(config, protocol)
    trials = int(config.get("trials", DEFAULT_TRIALS))
    seed = _check_seed(int(config.get("seed", 0)))
    t_cap = int(config.get("t_max", DEFAULT_ROUND_CAP))
    curve = estimate_success_curve(spec, trials, seed, t_cap)
    table = [
        (int(t), int(c), float(f), float(se))
        for t, c, f, se in zip(curve.rounds, curve.counts, curve.frequency, curve.std_error)
    ]
    if _format_or(config, "csv") == "json":
        payload = {
            "command": "mc",
            "protocol": protocol.value,
            "epsilon": spec.channel.epsilon,
            "delta_h": int(spec.delta_h),
            "trials": trials,
            "seed": seed,
            "mean_rounds": curve.mean_rounds,
            "rows": [
                {"t": t, "halts": c, "p_cumulative": f, "std_error": se}
                for t, c, f, se in table
            ],
        }
        return _json_text(payload), EXIT_OK
    rows: list[tuple[Any, ...]] = list(table)
    rows.append(("mean_rounds", None, curve.mean_rounds, None))
    return _csv_table(("T", "halts", "p_cumulative", "std_error"), rows), EXIT_OK


def _epsilon_grid(config: RunConfig, fallback: tuple[float, ...]) -> tuple[float, ...]:
    override = config.get("epsilon")
    return fallback if override is None else (float(override),)


def _verify_kink(config: RunConfig) -> tuple[float, float]:
    grid = _epsilon_grid(config, tuple(np.arange(1, 51) * (0.5 / 51.0)))
    worst = 0.0
    for eps in grid:
        channel = DephasingChannel(float(eps))
        kink = kink_probability(channel)
        for d in range(21):
            up_here = step_up_probability(channel, d)
            up_next = step_up_probability(channel, d + 1)
            worst = max(worst, abs(up_here * (1.0 - up_next) - kink))
    return worst, 1e-12


def _verify_parity_map(config: RunConfig) -> tuple[float, float]:
    grid = _epsilon_grid(config, (0.05, 0.2, 0.4))
    worst = 0.0
    for eps in grid:
        for length in (1, 2, 3):
            for outcomes in itertools.product((1, -1), repeat=length):
                worst = max(worst, verify_parity_map(float(eps), outcomes))
    return worst, 1e-10


def _verify_werner_step(config: RunConfig) -> tuple[float, float]:
    worst = 0.0
    for f0 in (0.6, 0.75, 0.85, 0.95):
        fresh = werner_coefficients(f0)
        rho = bell_state_density(fresh)
        out, success = bilateral_distill_step(rho, rho)
        predicted = recursion_step(fresh, f0)
        expected = np.array([predicted.a, predicted.b, predicted.c, predicted.d])
        worst = max(worst, float(np.max(np.abs(bell_weights(out) - expected / predicted.total))))
        worst = max(worst, abs(success - predicted.total))
    return worst, 1e-12


def _verify_mc(config: RunConfig) -> tuple[float, float]:
    eps = float(config.get("epsilon") or 0.2)
    spec = WalkSpec(channel=DephasingChannel(eps), delta_h=3, protocol=Protocol.NPS)
    trials = int(config.get("trials", DEFAULT_TRIALS))
    seed = _check_seed(int(config.get("seed", 0)))
    exact = halting_distribution(spec)
    curve = estimate_success_curve(spec, trials, seed)
    worst = 0.0
    for t, mass, cum in zip(exact.rounds, exact.probabilities, exact.cumulative):
        if mass < 1e-5:
            continue
        idx = int(np.searchsorted(curve.rounds, t, side="right"))
        empirical = float(curve.frequency[idx - 1]) if idx > 0 else 0.0
        stderr = float(np.sqrt(cum * (1.0 - cum) / trials))
        worst = max(worst, abs(empirical - cum) / stderr)
    second_moment = float((exact.rounds.astype(float) ** 2) @ exact.probabilities)
    total = float(exact.probabilities.sum())
    variance = second_moment / total - (exact.mean_rounds) ** 2
    mean_stderr = float(np.sqrt(variance / trials))
    worst = max(worst, abs(curve.mean_rounds - exact.mean_rounds) / mean_stderr)
    return worst, 4.0


def _verify_dominance(config: RunConfig) -> tuple[float, float]:
    grid = _epsilon_grid(config, (0.05, 0.2, 0.4))
    worst = -np.inf
    for eps in grid:
        channel = DephasingChannel(float(eps))
        for delta_h in range(2, 9):
            nps = halting_distribution(WalkSpec(channel, delta_h, Protocol.NPS))
            ps = halting_distribution(WalkSpec(channel, delta_h, Protocol.PS))
            horizon = int(max(nps.rounds[-1], ps.rounds[-1]))
            for t in range(1, horizon + 1):
                worst = max(worst, ps.cumulative_by(t) - nps.cumulative_by(t))
            worst = max(worst, (1.0 / ps.mean_rounds) - (1.0 / nps.mean_rounds))
    return float(worst), 1e-12


_VERIFY_DRIVERS: dict[str, Callable[[RunConfig], tuple[float, float]]] = {
    "kink": _verify_kink,
    "parity-map": _verify_parity_map,
    "werner-step": _verify_werner_step,
    "mc-vs-exact": _verify_mc,
    "dominance": _verify_dominance,
}
_VERIFY_ORDER = ("kink", "parity-map", "werner-step", "mc-vs-exact", "dominance")


def cmd_verify(config: RunConfig) -> tuple[str, int]:
    wanted = config.get("case")
    names = (wanted,) if wanted else _VERIFY_ORDER
    results = []
    for name in names:
        deviation, tolerance = _VERIFY_DRIVERS[name](config)
        status = "pass" if deviation < tolerance else "fail"
        results.append((name, deviation, tolerance, status))
    failed = any(status == "fail" for _, _, _, status in results)
    if _format_or(config, "csv") == "json":
        payload = [
            {"case": n, "max_deviation": d, "tolerance": tol, "status": s}
            for n, d, tol, s in results
        ]
        text = _json_text({"command": "verify", "cases": payload})
    else:
        text = _csv_table(("case", "max_deviation", "tolerance", "status"), results)
    return text, (EXIT_VERIFY if failed else EXIT_OK)


_HANDLERS: dict[str, Callable[[RunConfig], tuple[str, int]]] = {
    "walk": cmd_walk,
    "yield": cmd_yield,
    "ef": cmd_ef,
    "werner": cmd_werner,
    "pipeline": cmd_pipeline,
    "mc": cmd_mc,
    "verify": cmd_verify,
}


def run(config: RunConfig) -> tuple[str, int]:
    return _HANDLERS[config.subcommand](config)


def main(argv: Sequence[str] | None = None) -> int:
    raw = list(sys.argv[1:] if argv is None else argv)
    parser, table = build_parser()
    try:
        args = parser.parse_args(raw)
        if getattr(args, "config", None):
            extra = _config_args(args.config, table[args.subcommand], raw[1:], args.subcommand)
            args = parser.parse_args([args.subcommand] + extra + raw[1:])
    except SystemExit as exc:
        return int(exc.code or 0)
    except OSError as exc:
        print(f"pumpwalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"pumpwalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    config = RunConfig(
        subcommand=args.subcommand,
        options=tuple(sorted((k, v) for k, v in vars(args).items() if k not in _META)),
        fmt=args.format,
        out=args.out,
    )
    try:
        text, code = run(config)
    except ValueError as exc:
        print(f"pumpwalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OracleCheckError as exc:
        print(f"pumpwalk: verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ConvergenceError as exc:
        print(f"pumpwalk: failed to converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    _emit(text, config.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
