"""Monte-Carlo harness: scenario configuration, reference-SNR
calibration, NMSE and achievable-rate experiments, and the training
overhead report.

Reproducibility contract: every random stream is keyed by (seed, lane,
trial [, user]) so results are bit-identical across runs and invariant
to the worker count; the noise key omits the SNR index on purpose, so
one trial sees the same scaled noise at every SNR point (common random
numbers across the SNR grid). Each scheme receives a fresh stream with
the same key, which makes the schemes see identical sweep noise within
a trial.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .beamforming import multiuser_precode, multiuser_rate, single_user_rate
from .channel import ArrayConfig, PolarPoint, channel_gain, los_channel, region_boundaries
from .codebooks import build_dft_codebook, build_polar_codebook
from .errors import EmptyMainSetError
from .estimators import (
    EstimatorConfig,
    LocationEstimate,
    default_z_mu_grid,
    exhaustive_training,
    fast_training,
    joint_training,
    proposed_training,
)
from .numerics import NoiseModel

REFERENCE_POINT = PolarPoint(0.0, 5.0)  # calibration user for the reference SNR

TOTAL_ENERGY = "total-energy"
PER_ANTENNA = "per-antenna"

SCHEMES = ("proposed", "joint", "fast", "exhaustive")
FULL_CSI = "full-csi"


def calibrate_noise(cfg: ArrayConfig, snr_ref_db: float, mode: str = TOTAL_ENERGY) -> float:
    """Noise power realizing the requested reference SNR.

    total-energy: sigma^2 = ||h(ref)||^2 / SNR = N g(5m)^2 / SNR.
    per-antenna:  sigma^2 = g(5m)^2 / SNR (differs by a fixed N factor).
    """
    g = channel_gain(cfg, REFERENCE_POINT.r)
    snr = 10.0 ** (snr_ref_db / 10.0)
    if mode == TOTAL_ENERGY:
        return cfg.n_antennas * g * g / snr
    if mode == PER_ANTENNA:
        return g * g / snr
    raise ValueError(f"unknown reference mode {mode!r}")


@dataclass(frozen=True)
class UserSampler:
    theta_range: tuple[float, float]
    r_range: tuple[float, float]

    def sample(self, rng: np.random.Generator) -> PolarPoint:
        t = rng.uniform(*self.theta_range)
        r = rng.uniform(*self.r_range)
        return PolarPoint(float(t), float(r))

    @property
    def theta_variance(self) -> float:
        a, b = self.theta_range
        return (b - a) ** 2 / 12.0

    @property
    def r_variance(self) -> float:
        a, b = self.r_range
        return (b - a) ** 2 / 12.0


@dataclass(frozen=True)
class ScenarioConfig:
    n_antennas: int = 256
    carrier_hz: float = 100e9
    snr_ref_db_grid: tuple[float, ...] = tuple(range(4, 31, 2))
    trials: int = 200
    seed: int = 0
    theta_range: tuple[float, float] = (-0.8, 0.8)
    r_range: tuple[float, float] | None = None   # None: [R_Fre, min(100 m, R_Ray)]
    m_users: int = 10
    schemes: tuple[str, ...] = SCHEMES
    reference_mode: str = TOTAL_ENERGY
    k: int = 3
    cluster_gap: int = 8
    rho2_fraction: float = 0.65
    distance_rule: str = "inverse-width"
    beta_polar: float = 1.6
    z_mu_size: int = 64
    workers: int = 1

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.m_users < 1:
            raise ValueError(f"m_users must be >= 1, got {self.m_users}")
        unknown = set(self.schemes) - set(SCHEMES)
        if unknown:
            raise ValueError(f"unknown schemes: {sorted(unknown)}")

    def array(self) -> ArrayConfig:
        return ArrayConfig(self.n_antennas, self.carrier_hz)

    def estimator(self) -> EstimatorConfig:
        return EstimatorConfig(k=self.k, cluster_gap=self.cluster_gap,
                               rho2_fraction=self.rho2_fraction,
                               distance_rule=self.distance_rule)

    def sampler(self) -> UserSampler:
        cfg = self.array()
        r_fre, r_ray = region_boundaries(cfg)
        rr = self.r_range if self.r_range is not None else (r_fre, min(100.0, r_ray))
        if not (r_fre - 1e-9 <= rr[0] < rr[1] <= r_ray + 1e-9):
            raise ValueError(f"r range {rr} must lie within [{r_fre:.3f}, {r_ray:.3f}]")
        return UserSampler(theta_range=self.theta_range, r_range=rr)

    def as_header_dict(self) -> dict:
        from . import __version__

        cfg = self.array()
        s = self.sampler()
        r_fre, r_ray = region_boundaries(cfg)
        return {
            "artifact_version": __version__,
            "n_antennas": self.n_antennas,
            "carrier_hz": repr(self.carrier_hz),
            "snr_ref_db_grid": ",".join(repr(float(x)) for x in self.snr_ref_db_grid),
            "trials": self.trials,
            "seed": self.seed,
            "theta_range": f"{s.theta_range[0]!r}..{s.theta_range[1]!r}",
            "r_range": f"{s.r_range[0]!r}..{s.r_range[1]!r}",
            "m_users": self.m_users,
            "schemes": ",".join(self.schemes),
            "reference_mode": self.reference_mode,
            "k": self.k,
            "cluster_gap": self.cluster_gap,
            "rho2_fraction": repr(self.rho2_fraction),
            "distance_rule": self.distance_rule,
            "beta_polar": repr(self.beta_polar),
            "z_mu_size": self.z_mu_size,
            "workers": self.workers,
            "fresnel_m": repr(r_fre),
            "rayleigh_m": repr(r_ray),
        }


@dataclass
class MetricsRecord:
    scheme: str
    snr_ref_db: float
    nmse_theta: float | None = None
    nmse_r: float | None = None
    mean_rate: float | None = None
    outage_count: int = 0
    mean_pilot_count: float | None = None
    n_trials: int = 0


def user_rng_key(seed: int, trial: int) -> tuple:
    return (seed, 0, trial)


def noise_key(seed: int, trial: int, user: int | None = None) -> tuple:
    return (seed, 1, trial) if user is None else (seed, 1, trial, user)


class _Runner:
    """Shared per-experiment state: codebooks built once, scheme closures."""

    def __init__(self, sc: ScenarioConfig):
        self.sc = sc
        self.cfg = sc.array()
        self.ec = sc.estimator()
        self.codebook = build_dft_codebook(self.cfg)
        self.polar = (build_polar_codebook(self.cfg, sc.beta_polar)
                      if any(s in ("fast", "exhaustive") for s in sc.schemes) else None)
        self.z_mu = default_z_mu_grid(self.cfg, sc.z_mu_size)
        self.sampler = sc.sampler()

    def train(self, scheme: str, p: PolarPoint, noise: NoiseModel) -> LocationEstimate:
        if scheme == "proposed":
            return proposed_training(self.cfg, p, noise, self.ec, self.codebook)
        if scheme == "joint":
            return joint_training(self.cfg, p, noise, self.ec, self.z_mu, self.codebook)
        if scheme == "fast":
            return fast_training(self.cfg, p, noise, self.ec, self.polar, self.codebook)
        if scheme == "exhaustive":
            return exhaustive_training(self.cfg, p, noise, self.polar)
        raise ValueError(f"unknown scheme {scheme!r}")

    def map_trials(self, fn: Callable[[int], object]) -> list:
        trials = range(self.sc.trials)
        if self.sc.workers <= 1:
            return [fn(t) for t in trials]
        with ThreadPoolExecutor(max_workers=self.sc.workers) as pool:
            return list(pool.map(fn, trials))


def run_nmse_experiment(sc: ScenarioConfig) -> list[MetricsRecord]:
    """Angle and distance NMSE per (scheme, reference SNR).

    The NMSE denominators are the closed-form variances of the uniform
    samplers, not empirical ones, so the normalization is deterministic.
    Outage trials (empty main set) are excluded from the error sums and
    counted separately.
    """
    runner = _Runner(sc)
    var_t = runner.sampler.theta_variance
    var_r = runner.sampler.r_variance
    records = []
    for snr_db in sc.snr_ref_db_grid:
        sigma2 = calibrate_noise(runner.cfg, snr_db, sc.reference_mode)

        def one_trial(t: int):
            rng = np.random.default_rng(user_rng_key(sc.seed, t))
            p = runner.sampler.sample(rng)
            out = {}
            for scheme in sc.schemes:
                noise = NoiseModel(sigma2, noise_key(sc.seed, t))
                try:
                    est = runner.train(scheme, p, noise)
                except EmptyMainSetError:
                    out[scheme] = None
                    continue
                out[scheme] = ((p.theta - est.theta_hat) ** 2,
                               (p.r - est.r_hat) ** 2,
                               est.pilot_count)
            return out

        results = runner.map_trials(one_trial)
        for scheme in sc.schemes:
            vals = [r[scheme] for r in results]
            ok = [v for v in vals if v is not None]
            n_out = len(vals) - len(ok)
            if ok:
                se_t = float(np.sum([v[0] for v in ok]))
                se_r = float(np.sum([v[1] for v in ok]))
                pilots = float(np.mean([v[2] for v in ok]))
                records.append(MetricsRecord(
                    scheme=scheme, snr_ref_db=float(snr_db),
                    nmse_theta=se_t / len(ok) / var_t,
                    nmse_r=se_r / len(ok) / var_r,
                    outage_count=n_out, mean_pilot_count=pilots, n_trials=len(ok)))
            else:
                records.append(MetricsRecord(scheme=scheme, snr_ref_db=float(snr_db),
                                             outage_count=n_out, n_trials=0))
    return records


def run_rate_experiment(sc: ScenarioConfig, mode: str = "single") -> list[MetricsRecord]:
    """Achievable rate per (scheme, reference SNR), plus the full-CSI
    baseline, in single-user or multi-user (RZF, M users) mode."""
    if mode not in ("single", "multi"):
        raise ValueError(f"mode must be 'single' or 'multi', got {mode!r}")
    runner = _Runner(sc)
    records = []
    for snr_db in sc.snr_ref_db_grid:
        sigma2 = calibrate_noise(runner.cfg, snr_db, sc.reference_mode)

        if mode == "single":
            def one_trial(t: int):
                rng = np.random.default_rng(user_rng_key(sc.seed, t))
                p = runner.sampler.sample(rng)
                h_beam = los_channel(runner.cfg, p)
                full = single_user_rate(
                    runner.cfg, p, h_beam.h / np.linalg.norm(h_beam.h), sigma2)
                out = {FULL_CSI: (full, 0.0)}
                for scheme in sc.schemes:
                    noise = NoiseModel(sigma2, noise_key(sc.seed, t))
                    try:
                        est = runner.train(scheme, p, noise)
                    except EmptyMainSetError:
                        out[scheme] = None
                        continue
                    out[scheme] = (single_user_rate(runner.cfg, p, est.codeword.w, sigma2),
                                   est.pilot_count)
                return out
        else:
            def one_trial(t: int):
                rng = np.random.default_rng(user_rng_key(sc.seed, t))
                users = [runner.sampler.sample(rng) for _ in range(sc.m_users)]
                vf = multiuser_precode(runner.cfg, users, sigma2)
                out = {FULL_CSI: (float(np.mean(multiuser_rate(runner.cfg, users, vf, sigma2))), 0.0)}
                for scheme in sc.schemes:
                    ests = []
                    pilots = 0
                    failed = False
                    for u, p in enumerate(users):
                        noise = NoiseModel(sigma2, noise_key(sc.seed, t, u))
                        try:
                            est = runner.train(scheme, p, noise)
                        except EmptyMainSetError:
                            failed = True
                            break
                        ests.append(PolarPoint(est.theta_hat, est.r_hat))
                        pilots += est.pilot_count
                    if failed:
                        out[scheme] = None
                        continue
                    v = multiuser_precode(runner.cfg, ests, sigma2)
                    out[scheme] = (float(np.mean(multiuser_rate(runner.cfg, users, v, sigma2))),
                                   pilots / sc.m_users)
                return out

        results = runner.map_trials(one_trial)
        for scheme in (FULL_CSI,) + tuple(sc.schemes):
            vals = [r[scheme] for r in results]
            ok = [v for v in vals if v is not None]
            n_out = len(vals) - len(ok)
            if ok:
                records.append(MetricsRecord(
                    scheme=scheme, snr_ref_db=float(snr_db),
                    mean_rate=float(np.sum([v[0] for v in ok]) / len(ok)),
                    outage_count=n_out,
                    mean_pilot_count=float(np.mean([v[1] for v in ok])),
                    n_trials=len(ok)))
            else:
                records.append(MetricsRecord(scheme=scheme, snr_ref_db=float(snr_db),
                                             outage_count=n_out, n_trials=0))
    return records


@dataclass(frozen=True)
class EstimateRow:
    """One training outcome, for per-trial CSV dumps."""

    snr_ref_db: float
    trial: int
    scheme: str
    theta: float
    r: float
    theta_hat: float | None
    r_hat: float | None
    pilot_count: int | None


def collect_estimates(sc: ScenarioConfig) -> list[EstimateRow]:
    """Per-trial estimates for every (scheme, SNR, trial), using the same
    stream keys as the experiments; outage trials carry empty estimates."""
    runner = _Runner(sc)
    rows = []
    for snr_db in sc.snr_ref_db_grid:
        sigma2 = calibrate_noise(runner.cfg, snr_db, sc.reference_mode)

        def one_trial(t: int):
            rng = np.random.default_rng(user_rng_key(sc.seed, t))
            p = runner.sampler.sample(rng)
            out = []
            for scheme in sc.schemes:
                noise = NoiseModel(sigma2, noise_key(sc.seed, t))
                try:
                    est = runner.train(scheme, p, noise)
                except EmptyMainSetError:
                    out.append(EstimateRow(float(snr_db), t, scheme, p.theta, p.r,
                                           None, None, None))
                    continue
                out.append(EstimateRow(float(snr_db), t, scheme, p.theta, p.r,
                                       est.theta_hat, est.r_hat, est.pilot_count))
            return out

        for chunk in runner.map_trials(one_trial):
            rows.extend(chunk)
    return rows


def write_estimates_csv(path, rows: Sequence[EstimateRow], header: dict) -> None:
    def fmt(x):
        if x is None:
            return ""
        if isinstance(x, float):
            return repr(float(x))
        return str(x)

    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for key in sorted(header):
            f.write(f"# {key}={header[key]}\n")
        f.write("snr_ref_db,trial,scheme,theta,r,theta_hat,r_hat,pilot_count\n")
        for r in rows:
            f.write(",".join(fmt(v) for v in (
                r.snr_ref_db, r.trial, r.scheme, r.theta, r.r,
                r.theta_hat, r.r_hat, r.pilot_count)) + "\n")


@dataclass(frozen=True)
class UserRateRow:
    """Per-user rate breakdown of one multi-user trial."""

    snr_ref_db: float
    user: int
    theta: float
    r: float
    theta_hat: float
    r_hat: float
    sinr: float
    rate: float


def multiuser_breakdown(sc: ScenarioConfig, scheme: str, trial: int = 0) -> list[UserRateRow]:
    """Per-user SINRs and rates for one trial of one scheme."""
    runner = _Runner(sc)
    rows = []
    for snr_db in sc.snr_ref_db_grid:
        sigma2 = calibrate_noise(runner.cfg, snr_db, sc.reference_mode)
        rng = np.random.default_rng(user_rng_key(sc.seed, trial))
        users = [runner.sampler.sample(rng) for _ in range(sc.m_users)]
        ests = []
        for u, p in enumerate(users):
            est = runner.train(scheme, p, NoiseModel(sigma2, noise_key(sc.seed, trial, u)))
            ests.append(est)
        v = multiuser_precode(runner.cfg,
                              [PolarPoint(e.theta_hat, e.r_hat) for e in ests], sigma2)
        rates = multiuser_rate(runner.cfg, users, v, sigma2)
        for u, (p, est) in enumerate(zip(users, ests)):
            sinr = 2.0 ** rates[u] - 1.0
            rows.append(UserRateRow(float(snr_db), u, p.theta, p.r,
                                    est.theta_hat, est.r_hat, float(sinr), float(rates[u])))
    return rows


def write_breakdown_csv(path, rows: Sequence[UserRateRow], header: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for key in sorted(header):
            f.write(f"# {key}={header[key]}\n")
        f.write("snr_ref_db,user,theta,r,theta_hat,r_hat,sinr,rate\n")
        for r in rows:
            f.write(",".join(repr(float(v)) if isinstance(v, float) else str(v)
                             for v in (r.snr_ref_db, r.user, r.theta, r.r,
                                       r.theta_hat, r.r_hat, r.sinr, r.rate)) + "\n")


@dataclass(frozen=True)
class OverheadRow:
    scheme: str
    pilots_measured: int
    pilots_formula: str
    pilots_expected: int
    distance_stage_evals: int


def overhead_report(sc: ScenarioConfig) -> list[OverheadRow]:
    """Measured pilot counts and distance-stage operation counts for a
    canonical noiseless training of each scheme.

    The probe user sits on a grid angle near broadside at a range with a
    wide plateau, so every scheme reaches its full candidate budget and
    the Table-style formulas are exercised exactly.
    """
    runner = _Runner(sc)
    cfg = runner.cfg
    _, r_ray = region_boundaries(cfg)
    theta0 = float(runner.codebook.angle_grid[cfg.n_antennas // 2])
    probe = PolarPoint(theta0, 0.03 * r_ray)
    polar = runner.polar if runner.polar is not None else build_polar_codebook(cfg, sc.beta_polar)
    k = sc.k
    rows = []
    for scheme in sc.schemes:
        noise = NoiseModel(0.0, (sc.seed,))
        if scheme == "exhaustive":
            est = exhaustive_training(cfg, probe, noise, polar)
        elif scheme == "fast":
            est = fast_training(cfg, probe, noise, runner.ec, polar, runner.codebook)
        else:
            est = runner.train(scheme, probe, noise)
        n = cfg.n_antennas
        if scheme in ("proposed", "joint"):
            formula, expected = "N+k", n + k
        elif scheme == "fast":
            per_cand = est.distance_stage_evals  # distance pilots actually swept
            formula, expected = "N+k*S_cand", n + per_cand
        else:
            formula, expected = "N*S", len(polar)
        rows.append(OverheadRow(
            scheme=scheme,
            pilots_measured=est.pilot_count,
            pilots_formula=formula,
            pilots_expected=expected,
            distance_stage_evals=est.distance_stage_evals,
        ))
    return rows


def write_records_csv(path, records: Sequence[MetricsRecord], header: dict) -> None:
    """CSV with a '# key=value' provenance block; full-precision floats."""
    def fmt(x):
        if x is None:
            return ""
        if isinstance(x, float):
            return repr(float(x))  # plain-float repr even for numpy scalars
        return str(x)

    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for key in sorted(header):
            f.write(f"# {key}={header[key]}\n")
        f.write("scheme,snr_ref_db,nmse_theta,nmse_r,mean_rate,outage_count,"
                "mean_pilot_count,n_trials\n")
        for r in records:
            f.write(",".join(fmt(v) for v in (
                r.scheme, r.snr_ref_db, r.nmse_theta, r.nmse_r, r.mean_rate,
                r.outage_count, r.mean_pilot_count, r.n_trials)) + "\n")


def write_overhead_csv(path, rows: Sequence[OverheadRow], header: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for key in sorted(header):
            f.write(f"# {key}={header[key]}\n")
        f.write("scheme,pilots_measured,pilots_formula,pilots_expected,distance_stage_evals\n")
        for r in rows:
            f.write(f"{r.scheme},{r.pilots_measured},{r.pilots_formula},"
                    f"{r.pilots_expected},{r.distance_stage_evals}\n")
