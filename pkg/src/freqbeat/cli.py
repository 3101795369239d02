"""Command-line front end.

Subcommands regenerate the data behind each figure and table of the
analysis as CSV or JSON:

    beat-curve   outcome probability densities over a frequency grid
    fisher-scan  information vs delay for the frequency-resolved scheme
                 and the direct-detection baseline
    simulate     Monte Carlo convergence study with the 1 + a/N fit
    budget       CRB-limited timing precision for a campaign

Every numeric value is written with 17 significant digits so files
round-trip losslessly. Exit codes: 0 success, 1 numerical failure,
2 invalid arguments. A JSON config file (--config) may supply any flag
by its destination name; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys

from .direct_detection import DetectionGrid, trd_fisher_binned, trd_fisher_unbinned
from .errors import NonIdentifiableError, QuadratureError, UnboundedVarianceError
from .estimation import fit_inverse_n, monte_carlo_study, report_to_dict
from .fisher import fisher_partial, precision_budget, quantum_limit
from .interference import ExperimentConfig, Outcome, Port, joint_probability
from .spectral import SpectralProfile

_FMT = "{:.17g}"

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2


def _fmt(x) -> str:
    return _FMT.format(float(x))


def _write_rows(path, header, rows, fmt):
    if fmt == "csv":
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(v) if isinstance(v, (int, float)) else str(v)
                                  for v in row))
        text = "\n".join(lines) + "\n"
    else:
        records = [dict(zip(header, row)) for row in rows]
        text = json.dumps(records, indent=2) + "\n"
    _write_text(path, text)


def _write_text(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _parse_float_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _parse_int_list(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv",
                   help="output format")
    p.add_argument("--seed", type=int, default=0, help="master seed (64-bit)")
    p.add_argument("--workers", type=int, default=None,
                   help="thread count for parallel trials")
    p.add_argument("--config", default=None,
                   help="JSON file of flag values; explicit flags override")
    p.add_argument("--sigma-t", type=float, default=1.0, dest="sigma_t",
                   help="temporal width (the unit of time; default 1)")


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(
        prog="freqbeat",
        description="Frequency-resolved two-photon interference toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    by_name = {}

    p = by_name["beat-curve"] = sub.add_parser(
        "beat-curve", help="outcome densities over a frequency grid"
    )
    _add_common(p)
    p.add_argument("--delta-t", type=float, default=8.0,
                   help="delay in units of sigma_t (default 8)")
    p.add_argument("--nu", type=float, default=1.0, help="indistinguishability")
    p.add_argument("--eta", type=float, default=1.0, help="detection efficiency")
    p.add_argument("--tau-r", type=float, default=0.0, dest="tau_r",
                   help="reference offset from the emission centroid")
    p.add_argument("--omega-max", type=float, default=6.0,
                   help="grid half-width in units of sigma_omega")
    p.add_argument("--points", type=int, default=1201, help="grid size")

    p = by_name["fisher-scan"] = sub.add_parser(
        "fisher-scan", help="information vs delay, all methods"
    )
    _add_common(p)
    p.add_argument("--nu-values", default="1,0.98,0.95",
                   help="comma list of nu values for the frequency-resolved scan")
    p.add_argument("--trd-resolutions", default="5,10",
                   help="comma list of binned detector resolutions, units of sigma_t")
    p.add_argument("--delta-t-max", type=float, default=6.0)
    p.add_argument("--points", type=int, default=61)
    p.add_argument("--eta", type=float, default=1.0)

    p = by_name["simulate"] = sub.add_parser(
        "simulate", help="Monte Carlo convergence study + 1+a/N fit"
    )
    _add_common(p)
    p.add_argument("--delta-t", type=float, required=True,
                   help="true delay in units of sigma_t")
    p.add_argument("--nu", type=float, default=1.0)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--n-list", default="1000,2000,5000,10000",
                   help="comma list of sample counts")
    p.add_argument("--trials", type=int, default=4000)
    p.add_argument("--search-max", type=float, default=None,
                   help="upper end of the delay search (default 10 sigma_t)")

    p = by_name["budget"] = sub.add_parser(
        "budget", help="CRB-limited timing precision"
    )
    _add_common(p)
    p.add_argument("--rate-hz", type=float, required=True,
                   help="emitted pair rate, pairs per second")
    p.add_argument("--duration-s", type=float, required=True,
                   help="integration time, seconds")
    p.add_argument("--sigma-t-fs", type=float, required=True,
                   help="photon temporal width, femtoseconds")
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--nu", type=float, default=1.0)
    return parser, by_name


def _apply_config(parser, by_name, argv):
    """Parse argv, letting a --config JSON supply defaults under the flags."""
    first = parser.parse_args(argv)
    if getattr(first, "config", None) is None:
        return first
    with open(first.config) as fh:
        overrides = json.load(fh)
    if not isinstance(overrides, dict):
        raise ValueError("config file must hold a JSON object")
    subparser = by_name[first.command]
    valid = {a.dest for a in subparser._actions if a.dest != "help"}
    defaults = {}
    for key, value in overrides.items():
        k = key.replace("-", "_")
        if k not in valid:
            raise ValueError(f"unknown config key {key!r}")
        defaults[k] = value
    # config values become subcommand defaults; explicit flags still win
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def _cmd_beat_curve(args) -> int:
    profile = SpectralProfile(args.sigma_t)
    cfg = ExperimentConfig(profile, delta_t=args.delta_t * args.sigma_t,
                           nu=args.nu, eta=args.eta,
                           tau_r=args.tau_r * args.sigma_t)
    if args.points < 2:
        raise ValueError("need at least 2 grid points")
    sw = profile.sigma_omega
    rows = []
    for i in range(args.points):
        x = -args.omega_max + 2.0 * args.omega_max * i / (args.points - 1)
        dw = x * sw
        pa = joint_probability(cfg, Outcome(dw, Port.A))
        pb = joint_probability(cfg, Outcome(dw, Port.B))
        rows.append((x, pa, pb))
    _write_rows(args.out, ["delta_omega_over_sigma_omega", "p_coincidence",
                           "p_bunching"], rows, args.format)
    return EXIT_OK


def _cmd_fisher_scan(args) -> int:
    profile = SpectralProfile(args.sigma_t)
    q = quantum_limit(profile).value
    nus = _parse_float_list(args.nu_values)
    resolutions = _parse_float_list(args.trd_resolutions)
    if args.points < 2:
        raise ValueError("need at least 2 grid points")
    dts = [args.delta_t_max * i / (args.points - 1) for i in range(args.points)]
    rows = []
    for dt_units in dts:
        dt = dt_units * args.sigma_t
        for nu in nus:
            cfg = ExperimentConfig(profile, delta_t=dt, nu=nu, eta=args.eta)
            f = fisher_partial(cfg).value
            rows.append((dt_units, "fr", f"nu={nu:g}", f / q))
        f = trd_fisher_unbinned(profile, dt).value
        rows.append((dt_units, "trd_unbinned", "T=0", f / q))
        for res in resolutions:
            grid = DetectionGrid(resolution=res * args.sigma_t)
            f = trd_fisher_binned(profile, dt, grid).value
            rows.append((dt_units, "trd_binned", f"T={res:g}sigma_t", f / q))
    _write_rows(args.out, ["delta_t_over_sigma_t", "series", "label", "f_over_q"],
                rows, args.format)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    profile = SpectralProfile(args.sigma_t)
    cfg = ExperimentConfig(profile, delta_t=args.delta_t * args.sigma_t,
                           nu=args.nu, eta=args.eta)
    report = monte_carlo_study(
        cfg, _parse_int_list(args.n_list), args.trials, seed=args.seed,
        search_max=args.search_max, workers=args.workers,
    )
    fit = fit_inverse_n(report)
    if args.format == "json":
        _write_text(args.out, json.dumps(report_to_dict(report, fit), indent=2) + "\n")
    else:
        header = ["n", "trials", "mean_estimate", "variance", "variance_over_crb",
                  "mean_over_truth", "ci_halfwidth"]
        rows = [(r.n, r.trials, r.mean_estimate, r.variance, r.variance_over_crb,
                 r.mean_over_truth, r.ci_halfwidth) for r in report.per_n]
        _write_rows(args.out, header, rows, "csv")
    return EXIT_OK


def _cmd_budget(args) -> int:
    std = precision_budget(args.rate_hz, args.duration_s,
                           args.sigma_t_fs * 1e-15, eta=args.eta, nu=args.nu)
    doc = {
        "pairs": args.rate_hz * args.duration_s,
        "std_seconds": std,
        "std_attoseconds": std * 1e18,
    }
    if args.format == "json":
        _write_text(args.out, json.dumps(doc, indent=2) + "\n")
    else:
        _write_rows(args.out, ["pairs", "std_seconds", "std_attoseconds"],
                    [(doc["pairs"], doc["std_seconds"], doc["std_attoseconds"])],
                    "csv")
    return EXIT_OK


_COMMANDS = {
    "beat-curve": _cmd_beat_curve,
    "fisher-scan": _cmd_fisher_scan,
    "simulate": _cmd_simulate,
    "budget": _cmd_budget,
}


def main(argv=None) -> int:
    parser, by_name = build_parser()
    try:
        args = _apply_config(parser, by_name, argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code) if exc.code else EXIT_OK
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, NonIdentifiableError, UnboundedVarianceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
