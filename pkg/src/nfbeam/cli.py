"""Command-line entry point.

Subcommands: pattern, train, nmse, rate-single, rate-multi, overhead,
codebook-dump. Scenario values come from an optional flat key=value
config file; command-line flags override file values, and the resolved
configuration is embedded in every output header. Exit codes: 0 success,
2 configuration error, 3 runtime failure.

The default output directory is taken from NFBEAM_OUT (falling back to
the current directory).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import fields
from pathlib import Path

from .beampattern import exact_gain, normalized_pattern, raw_pattern
from .channel import PolarPoint
from .codebooks import build_dft_codebook, build_polar_codebook, export_codebook_csv
from .errors import EmptyGridError, EmptyMainSetError, SingularChannelError
from .numerics import NoiseModel
from .simharness import (
    ScenarioConfig,
    calibrate_noise,
    collect_estimates,
    multiuser_breakdown,
    overhead_report,
    run_nmse_experiment,
    run_rate_experiment,
    write_breakdown_csv,
    write_estimates_csv,
    write_overhead_csv,
    write_records_csv,
)
from .svgplot import line_plot_svg

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

_SCENARIO_FIELDS = {f.name: f for f in fields(ScenarioConfig)}


class ConfigError(Exception):
    pass


def _parse_value(name: str, raw: str):
    """Coerce a config-file string to the ScenarioConfig field type."""
    raw = raw.strip()
    if name in ("snr_ref_db_grid",):
        return tuple(float(x) for x in raw.split(",") if x.strip())
    if name in ("schemes",):
        return tuple(x.strip() for x in raw.split(",") if x.strip())
    if name in ("theta_range", "r_range"):
        lo, hi = (float(x) for x in raw.split(","))
        return (lo, hi)
    if name in ("n_antennas", "trials", "seed", "m_users", "k", "cluster_gap",
                "z_mu_size", "workers"):
        return int(raw)
    if name in ("carrier_hz", "rho2_fraction", "beta_polar"):
        return float(raw)
    if name in ("reference_mode", "distance_rule"):
        return raw
    raise ConfigError(f"unknown config key: {name}")


def load_config_file(path: str) -> dict:
    values = {}
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, raw = line.split("=", 1)
        key = key.strip()
        if key not in _SCENARIO_FIELDS:
            raise ConfigError(f"{path}:{lineno}: unknown config key: {key}")
        values[key] = _parse_value(key, raw)
    return values


def _scenario_from_args(args) -> ScenarioConfig:
    values = {}
    if args.config:
        values.update(load_config_file(args.config))
    overrides = {
        "n_antennas": args.N,
        "carrier_hz": args.fc,
        "trials": args.trials,
        "seed": args.seed,
        "k": args.k,
        "workers": args.workers,
        "reference_mode": args.reference_mode,
        "m_users": getattr(args, "M", None),
    }
    if getattr(args, "snr_db", None):
        overrides["snr_ref_db_grid"] = tuple(args.snr_db)
    if getattr(args, "theta_range", None):
        overrides["theta_range"] = tuple(args.theta_range)
    if getattr(args, "r_range", None):
        overrides["r_range"] = tuple(args.r_range)
    if getattr(args, "schemes", None):
        overrides["schemes"] = tuple(args.schemes.split(","))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ScenarioConfig(**values)


def _out_dir(args) -> Path:
    base = args.out or os.environ.get("NFBEAM_OUT") or "."
    p = Path(base)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _add_common(sub):
    sub.add_argument("--config", help="flat key=value scenario file")
    sub.add_argument("--out", help="output directory (default: $NFBEAM_OUT or .)")
    sub.add_argument("--N", type=int, help="antenna count")
    sub.add_argument("--fc", type=float, help="carrier frequency in Hz")
    sub.add_argument("--trials", type=int)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--k", type=int, help="refinement candidate count")
    sub.add_argument("--workers", type=int)
    sub.add_argument("--reference-mode", choices=["total-energy", "per-antenna"],
                     dest="reference_mode")
    sub.add_argument("--snr-db", type=float, nargs="+", dest="snr_db",
                     help="reference SNR grid in dB")
    sub.add_argument("--theta-range", type=float, nargs=2, dest="theta_range")
    sub.add_argument("--r-range", type=float, nargs=2, dest="r_range")
    sub.add_argument("--schemes", help="comma list out of proposed,joint,fast,exhaustive")
    sub.add_argument("--svg", action="store_true", help="also write an SVG plot")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nfbeam",
                                 description="near-field DFT beam training simulations")
    sp = ap.add_subparsers(dest="command", required=True)

    pat = sp.add_parser("pattern", help="dump a sweep beam pattern")
    _add_common(pat)
    pat.add_argument("--theta", type=float, required=True)
    pat.add_argument("--r", type=float, required=True)

    tr = sp.add_parser("train", help="run one beam training")
    _add_common(tr)
    tr.add_argument("--theta", type=float, required=True)
    tr.add_argument("--r", type=float, required=True)
    tr.add_argument("--scheme", default="proposed",
                    choices=["proposed", "joint", "fast", "exhaustive"])
    tr.add_argument("--snr-ref-db", type=float, default=30.0)

    for name in ("nmse", "rate-single", "rate-multi"):
        s = sp.add_parser(name, help=f"run the {name} experiment")
        _add_common(s)
        if name == "nmse":
            s.add_argument("--dump-estimates", action="store_true",
                           dest="dump_estimates",
                           help="also write per-trial estimates as CSV")
        if name == "rate-multi":
            s.add_argument("--M", type=int, help="users per group")
            s.add_argument("--dump-users", metavar="SCHEME", dest="dump_users",
                           help="also write a per-user rate breakdown CSV for "
                                "this scheme (trial 0)")

    ov = sp.add_parser("overhead", help="pilot overhead and complexity table")
    _add_common(ov)

    cd = sp.add_parser("codebook-dump", help="export a codebook as CSV")
    _add_common(cd)
    cd.add_argument("--kind", choices=["dft", "polar"], default="dft")
    cd.add_argument("--beta-polar", type=float, default=1.6, dest="beta_polar")
    return ap


def _cmd_pattern(args) -> int:
    sc = _scenario_from_args(args)
    cfg = sc.array()
    p = PolarPoint(args.theta, args.r)
    book = build_dft_codebook(cfg)
    raw = raw_pattern(cfg, p, book)
    norm = normalized_pattern(cfg, p, book)
    out = _out_dir(args) / f"pattern_N{cfg.n_antennas}_theta{args.theta}_r{args.r}.csv"
    header = sc.as_header_dict()
    header.update({"theta": repr(args.theta), "r": repr(args.r),
                   "central_gain": repr(exact_gain(cfg, p, p.theta))})
    with open(out, "w", encoding="utf-8", newline="\n") as f:
        for key in sorted(header):
            f.write(f"# {key}={header[key]}\n")
        f.write("phi,gain_raw,gain_normalized\n")
        for phi, g, gn in zip(raw.grid, raw.gains, norm.gains):
            f.write(f"{float(phi)!r},{float(g)!r},{float(gn)!r}\n")
    print(f"wrote {out}")
    if args.svg:
        svg = line_plot_svg(
            {"raw": (raw.grid, raw.gains), "normalized": (norm.grid, norm.gains)},
            xlabel="spatial angle phi", ylabel="gain",
            title=f"sweep pattern, N={cfg.n_antennas}, theta={args.theta}, r={args.r} m")
        out_svg = out.with_suffix(".svg")
        out_svg.write_text(svg, encoding="utf-8")
        print(f"wrote {out_svg}")
    return EXIT_OK


def _cmd_train(args) -> int:
    from .estimators import (exhaustive_training, fast_training, joint_training,
                             proposed_training, default_z_mu_grid)

    sc = _scenario_from_args(args)
    cfg = sc.array()
    ec = sc.estimator()
    p = PolarPoint(args.theta, args.r)
    sigma2 = calibrate_noise(cfg, args.snr_ref_db, sc.reference_mode)
    noise = NoiseModel(sigma2, (sc.seed, 1, 0))
    if args.scheme == "proposed":
        est = proposed_training(cfg, p, noise, ec)
    elif args.scheme == "joint":
        est = joint_training(cfg, p, noise, ec, default_z_mu_grid(cfg, sc.z_mu_size))
    elif args.scheme == "fast":
        est = fast_training(cfg, p, noise, ec, build_polar_codebook(cfg, sc.beta_polar))
    else:
        est = exhaustive_training(cfg, p, noise, build_polar_codebook(cfg, sc.beta_polar))
    print(f"scheme={est.scheme} theta={p.theta!r} r={p.r!r} "
          f"theta_hat={est.theta_hat!r} r_hat={est.r_hat!r} pilots={est.pilot_count}")
    return EXIT_OK


def _records_svg(records, ykey, ylabel, path, log_y):
    series = {}
    for r in records:
        y = getattr(r, ykey)
        if y is None:
            continue
        series.setdefault(r.scheme, ([], []))
        series[r.scheme][0].append(r.snr_ref_db)
        series[r.scheme][1].append(y)
    path.write_text(line_plot_svg(series, xlabel="reference SNR (dB)", ylabel=ylabel,
                                  title=ylabel, log_y=log_y), encoding="utf-8")


def _cmd_experiment(args, which: str) -> int:
    sc = _scenario_from_args(args)
    out = _out_dir(args)
    if which == "nmse":
        records = run_nmse_experiment(sc)
        path = out / f"nmse_N{sc.n_antennas}_seed{sc.seed}.csv"
        write_records_csv(path, records, sc.as_header_dict())
        print(f"wrote {path}")
        if args.svg:
            _records_svg(records, "nmse_r", "distance NMSE", path.with_suffix(".svg"), True)
            print(f"wrote {path.with_suffix('.svg')}")
        if getattr(args, "dump_estimates", False):
            est_path = out / f"estimates_N{sc.n_antennas}_seed{sc.seed}.csv"
            write_estimates_csv(est_path, collect_estimates(sc), sc.as_header_dict())
            print(f"wrote {est_path}")
    else:
        mode = "single" if which == "rate-single" else "multi"
        records = run_rate_experiment(sc, mode)
        path = out / f"rate_{mode}_N{sc.n_antennas}_seed{sc.seed}.csv"
        write_records_csv(path, records, sc.as_header_dict())
        print(f"wrote {path}")
        if args.svg:
            _records_svg(records, "mean_rate", "achievable rate (bits/s/Hz)",
                         path.with_suffix(".svg"), False)
            print(f"wrote {path.with_suffix('.svg')}")
        scheme = getattr(args, "dump_users", None)
        if mode == "multi" and scheme:
            if scheme not in sc.schemes:
                raise ConfigError(f"--dump-users scheme {scheme!r} not in {sc.schemes}")
            bk_path = out / f"rate_users_{scheme}_N{sc.n_antennas}_seed{sc.seed}.csv"
            write_breakdown_csv(bk_path, multiuser_breakdown(sc, scheme),
                                sc.as_header_dict())
            print(f"wrote {bk_path}")
    return EXIT_OK


def _cmd_overhead(args) -> int:
    sc = _scenario_from_args(args)
    rows = overhead_report(sc)
    out = _out_dir(args) / f"overhead_N{sc.n_antennas}_k{sc.k}.csv"
    write_overhead_csv(out, rows, sc.as_header_dict())
    for r in rows:
        print(f"{r.scheme}: {r.pilots_measured} pilots ({r.pilots_formula} = "
              f"{r.pilots_expected}), distance-stage evals {r.distance_stage_evals}")
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_codebook_dump(args) -> int:
    sc = _scenario_from_args(args)
    cfg = sc.array()
    if args.kind == "dft":
        book = build_dft_codebook(cfg)
        out = _out_dir(args) / f"codebook_dft_N{cfg.n_antennas}.csv"
    else:
        book = build_polar_codebook(cfg, args.beta_polar)
        out = _out_dir(args) / f"codebook_polar_N{cfg.n_antennas}_beta{args.beta_polar}.csv"
        print(f"ring scale Z = {book.z_delta!r} m, "
              f"S = {book.avg_samples_per_angle!r} samples/angle")
    export_codebook_csv(book, out)
    print(f"wrote {out}")
    return EXIT_OK


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed the diagnostic
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "pattern":
            return _cmd_pattern(args)
        if args.command == "train":
            return _cmd_train(args)
        if args.command in ("nmse", "rate-single", "rate-multi"):
            return _cmd_experiment(args, args.command)
        if args.command == "overhead":
            return _cmd_overhead(args)
        if args.command == "codebook-dump":
            return _cmd_codebook_dump(args)
        print(f"unknown command {args.command!r}", file=sys.stderr)
        return EXIT_CONFIG
    except (EmptyMainSetError, EmptyGridError, SingularChannelError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
