"""
Command-line experiment runner.

Usage::

    qwline [run] --initial pair --k 1 --phase plus --steps 1000 --out out/
    qwline compare --initial localized --steps 1000 --out cmp/
    qwline --initial pair --k 2 --phase minus --dump-config > cfg.json
    qwline --config cfg.json --steps 2000

``run`` evolves the walk and writes CSV time series, profile snapshots and a
power-law fit report. ``compare`` puts the exact survival probability next to
the Bessel-sum prediction and fits both.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 fit failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .analytic import MAX_ENTRIES, AnalyticInitial, analytic_survival
from .core import (
    Custom,
    InitialCondition,
    Localized,
    NormalizationError,
    SymmetricPair,
    initial_sites,
    make_initial,
    trajectory,
)
from .observables import (
    DEFAULT_SMOOTHING,
    DecayFit,
    FitError,
    TimeSeries,
    asymptotic_entropy,
    coin_density,
    entanglement_entropy,
    fit_decay_exponent,
    probability_profile,
    survival,
    variance,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_FIT = 4

EMIT_CHOICES = ("survival", "entropy", "variance", "profile", "analytic_survival", "fit_report")
DEFAULT_EMIT = ("survival", "entropy", "variance", "profile", "fit_report")
DEFAULT_STEPS = 1000
DEFAULT_FIT_MIN = 100
DEFAULT_OUT = "qwline_out"

FIT_HEADER = ("series", "t_min", "t_max", "smoothing", "exponent", "intercept", "rms_residual")

_SQRT_HALF = 1.0 / math.sqrt(2.0)

# flat config keys in the order they are dumped
_KEYS = (
    "initial", "alpha_re", "alpha_im", "beta_re", "beta_im", "k", "phase", "custom_file",
    "steps", "s", "fit_min", "fit_max", "smooth", "record_every", "snapshot", "emit", "out",
)


class ConfigError(Exception):
    """Invalid configuration; ``key`` names the offending setting."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class ExperimentConfig:
    initial: InitialCondition
    steps: int = DEFAULT_STEPS
    survival_s: int = 0
    fit_window: tuple[int, int] = (DEFAULT_FIT_MIN, DEFAULT_STEPS)
    smoothing_width: int = DEFAULT_SMOOTHING
    record_every: int = 1
    snapshot_times: tuple[int, ...] = (DEFAULT_STEPS,)
    output_dir: str = DEFAULT_OUT
    emit: frozenset[str] = field(default_factory=lambda: frozenset(DEFAULT_EMIT))
    custom_file: str | None = None

    def __post_init__(self):
        t_min, t_max = self.fit_window
        if self.steps < 1:
            raise ConfigError("steps", f"must be >= 1 (got {self.steps})")
        if self.survival_s < 0:
            raise ConfigError("s", f"must be >= 0 (got {self.survival_s})")
        if not 1 <= t_min < t_max <= self.steps:
            raise ConfigError(
                "fit_min" if t_min < 1 or t_min >= t_max else "fit_max",
                f"fit window [{t_min}, {t_max}] must satisfy 1 <= fit_min < fit_max <= steps",
            )
        if self.smoothing_width < 1:
            raise ConfigError("smooth", f"must be >= 1 (got {self.smoothing_width})")
        if self.record_every < 1:
            raise ConfigError("record_every", f"must be >= 1 (got {self.record_every})")
        bad = [t for t in self.snapshot_times if not 0 <= t <= self.steps]
        if bad:
            raise ConfigError("snapshot", f"times {bad} are outside [0, {self.steps}]")
        unknown = set(self.emit) - set(EMIT_CHOICES)
        if unknown:
            raise ConfigError("emit", f"unknown outputs {sorted(unknown)}")

    def to_dict(self) -> dict[str, Any]:
        """Flat mapping that :func:`config_from_mapping` turns back into this config."""
        d: dict[str, Any] = {}
        cond = self.initial
        if isinstance(cond, Localized):
            alpha, beta = complex(cond.alpha), complex(cond.beta)
            d.update(initial="localized", alpha_re=alpha.real, alpha_im=alpha.imag,
                     beta_re=beta.real, beta_im=beta.imag)
        elif isinstance(cond, SymmetricPair):
            d.update(initial="pair", k=cond.k, phase="plus" if cond.sign == 1 else "minus")
        else:
            d.update(initial="custom", custom_file=self.custom_file)
        d.update(
            steps=self.steps,
            s=self.survival_s,
            fit_min=self.fit_window[0],
            fit_max=self.fit_window[1],
            smooth=self.smoothing_width,
            record_every=self.record_every,
            snapshot=list(self.snapshot_times),
            emit=[e for e in EMIT_CHOICES if e in self.emit],
            out=self.output_dir,
        )
        return d


def read_custom_file(path: str | Path) -> Custom:
    """
    Read ``x,a_re,a_im,b_re,b_im`` rows (header required) into a Custom condition.

    Raises OSError if the file cannot be read and ConfigError if its content is
    malformed.
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["x", "a_re", "a_im", "b_re", "b_im"]:
        raise ConfigError("custom_file", f"{path}: expected header x,a_re,a_im,b_re,b_im")
    entries = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or not "".join(row).strip():
            continue
        if len(row) != 5:
            raise ConfigError("custom_file", f"{path}:{lineno}: expected 5 columns")
        try:
            x = int(row[0])
            a_re, a_im, b_re, b_im = (float(v) for v in row[1:])
        except ValueError as exc:
            raise ConfigError("custom_file", f"{path}:{lineno}: {exc}") from None
        entries.append((x, complex(a_re, a_im), complex(b_re, b_im)))
    return Custom(entries)


def _typed(raw: dict[str, Any], key: str, kind: type, default: Any = None) -> Any:
    if key not in raw or raw[key] is None:
        return default
    v = raw[key]
    if kind is int:
        if isinstance(v, bool) or not isinstance(v, int):
            raise ConfigError(key, f"expected an integer (got {v!r})")
    elif kind is float:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(key, f"expected a number (got {v!r})")
        v = float(v)
    elif kind is str:
        if not isinstance(v, str):
            raise ConfigError(key, f"expected a string (got {v!r})")
    return v


def _int_list(raw: dict[str, Any], key: str) -> list[int] | None:
    if key not in raw or raw[key] is None:
        return None
    v = raw[key]
    if isinstance(v, int) and not isinstance(v, bool):
        v = [v]
    if not isinstance(v, list) or any(isinstance(i, bool) or not isinstance(i, int) for i in v):
        raise ConfigError(key, f"expected a list of integers (got {v!r})")
    return v


def _emit_set(raw: dict[str, Any]) -> frozenset[str]:
    v = raw.get("emit")
    if v is None:
        return frozenset(DEFAULT_EMIT)
    if isinstance(v, str):
        v = [p.strip() for p in v.split(",") if p.strip()]
    if not isinstance(v, list) or not all(isinstance(i, str) for i in v):
        raise ConfigError("emit", f"expected a list of output names (got {v!r})")
    unknown = sorted(set(v) - set(EMIT_CHOICES))
    if unknown:
        raise ConfigError("emit", f"unknown outputs {unknown}; choose from {', '.join(EMIT_CHOICES)}")
    return frozenset(v)


def config_from_mapping(raw: dict[str, Any]) -> ExperimentConfig:
    """Validate a flat settings mapping (config file merged with flags)."""
    unknown = sorted(set(raw) - set(_KEYS))
    if unknown:
        raise ConfigError(unknown[0], "unknown setting")

    kind = _typed(raw, "initial", str, "localized")
    if kind not in ("localized", "pair", "custom"):
        raise ConfigError("initial", f"must be localized, pair or custom (got {kind!r})")
    if kind != "pair":
        for key in ("phase", "k"):
            if raw.get(key) is not None:
                raise ConfigError(key, "only valid with initial = pair")
    if kind != "localized":
        for key in ("alpha_re", "alpha_im", "beta_re", "beta_im"):
            if raw.get(key) is not None:
                raise ConfigError(key, "only valid with initial = localized")
    if kind != "custom" and raw.get("custom_file") is not None:
        raise ConfigError("custom_file", "only valid with initial = custom")

    custom_file = None
    cond: InitialCondition
    if kind == "localized":
        alpha = complex(_typed(raw, "alpha_re", float, 0.0), _typed(raw, "alpha_im", float, _SQRT_HALF))
        beta = complex(_typed(raw, "beta_re", float, _SQRT_HALF), _typed(raw, "beta_im", float, 0.0))
        cond = Localized(alpha, beta)
        default_s = 0
    elif kind == "pair":
        k = _typed(raw, "k", int, 1)
        if k < 1:
            raise ConfigError("k", f"pair separation must be a positive integer (got {k})")
        phase = _typed(raw, "phase", str, "plus")
        if phase not in ("plus", "minus"):
            raise ConfigError("phase", f"must be plus or minus (got {phase!r})")
        cond = SymmetricPair(k, 1 if phase == "plus" else -1)
        default_s = k
    else:
        custom_file = _typed(raw, "custom_file", str)
        if custom_file is None:
            raise ConfigError("custom_file", "required with initial = custom")
        cond = read_custom_file(custom_file)
        default_s = 0

    try:
        initial_sites(cond)
    except NormalizationError as exc:
        key = "alpha_re/alpha_im/beta_re/beta_im" if kind == "localized" else "custom_file"
        raise ConfigError(key, str(exc)) from None
    except ValueError as exc:
        raise ConfigError("custom_file", str(exc)) from None

    steps = _typed(raw, "steps", int, DEFAULT_STEPS)
    fit_max = _typed(raw, "fit_max", int, steps)
    fit_min = _typed(raw, "fit_min", int, DEFAULT_FIT_MIN if steps > DEFAULT_FIT_MIN else 1)
    record_every = _typed(raw, "record_every", int, 1 if steps <= 2000 else 4)
    snapshots = _int_list(raw, "snapshot")
    return ExperimentConfig(
        initial=cond,
        steps=steps,
        survival_s=_typed(raw, "s", int, default_s),
        fit_window=(fit_min, fit_max),
        smoothing_width=_typed(raw, "smooth", int, DEFAULT_SMOOTHING),
        record_every=record_every,
        snapshot_times=tuple(snapshots) if snapshots is not None else (steps,),
        output_dir=_typed(raw, "out", str, DEFAULT_OUT),
        emit=_emit_set(raw),
        custom_file=custom_file,
    )


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qwline",
        description="Hadamard quantum walk on the line: survival decay and coin entanglement.",
        argument_default=argparse.SUPPRESS,
        allow_abbrev=False,
    )
    p.add_argument("command", nargs="?", choices=("run", "compare"), default="run",
                   help="run an experiment (default) or compare exact and Bessel-sum survival")
    p.add_argument("--config", action="append", metavar="PATH",
                   help="JSON settings file; repeat for a batch run")
    p.add_argument("--initial", choices=("localized", "pair", "custom"))
    p.add_argument("--alpha-re", dest="alpha_re", type=float)
    p.add_argument("--alpha-im", dest="alpha_im", type=float)
    p.add_argument("--beta-re", dest="beta_re", type=float)
    p.add_argument("--beta-im", dest="beta_im", type=float)
    p.add_argument("--k", type=int, help="pair separation: sites -k and +k")
    p.add_argument("--phase", choices=("plus", "minus"))
    p.add_argument("--custom-file", dest="custom_file", metavar="PATH",
                   help="CSV with header x,a_re,a_im,b_re,b_im")
    p.add_argument("--steps", type=int)
    p.add_argument("--s", type=int, help="survival window half-width")
    p.add_argument("--fit-min", dest="fit_min", type=int)
    p.add_argument("--fit-max", dest="fit_max", type=int)
    p.add_argument("--smooth", type=int, help="samples per averaging block before fitting")
    p.add_argument("--record-every", dest="record_every", type=int)
    p.add_argument("--snapshot", action="append", type=int, metavar="T")
    p.add_argument("--emit", help=f"comma-separated subset of {','.join(EMIT_CHOICES)}")
    p.add_argument("--out")
    p.add_argument("--dump-config", dest="dump_config", action="store_true", default=False)
    p.add_argument("--jobs", type=int, default=1)
    return p


@dataclass
class Invocation:
    command: str
    configs: list[ExperimentConfig]
    dump: bool
    jobs: int


def _load_config_file(path: str) -> dict[str, Any]:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"{path}: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict):
        raise ConfigError("config", f"{path}: expected a JSON object")
    return data


def parse_invocation(argv: Sequence[str] | None = None) -> Invocation:
    """
    Parse command-line tokens. Flags override values from ``--config`` files.

    Raises ConfigError on invalid settings; argparse itself exits with status 2
    on unknown flags or malformed values.
    """
    ns = vars(build_parser().parse_args(argv))
    command = ns.pop("command")
    files = ns.pop("config", None) or [None]
    dump = ns.pop("dump_config")
    jobs = ns.pop("jobs")
    if jobs < 1:
        raise ConfigError("jobs", f"must be >= 1 (got {jobs})")

    configs = []
    for path in files:
        raw = _load_config_file(path) if path else {}
        raw.update(ns)
        try:
            configs.append(config_from_mapping(raw))
        except OSError as exc:
            raise ConfigError("custom_file", f"cannot read {exc.filename}: {exc.strerror}") from None
    outs = [c.output_dir for c in configs]
    if len(set(outs)) != len(outs):
        raise ConfigError("out", "batch configs must use distinct output directories")
    if dump and len(configs) != 1:
        raise ConfigError("dump_config", "needs exactly one configuration")
    return Invocation(command, configs, dump, jobs)


def parse_config(argv: Sequence[str] | None = None) -> ExperimentConfig:
    """Parse tokens describing a single experiment."""
    inv = parse_invocation(argv)
    if len(inv.configs) != 1:
        raise ConfigError("config", "expected a single configuration")
    return inv.configs[0]


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _write_csv(path: Path, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _series_rows(series: TimeSeries):
    return ([str(int(t)), _fmt(v)] for t, v in zip(series.t, series.values))


def _fit_row(name: str, fit: DecayFit | None, cfg: ExperimentConfig) -> list[str]:
    if fit is None:
        nan = "nan"
        return [name, str(cfg.fit_window[0]), str(cfg.fit_window[1]), str(cfg.smoothing_width),
                nan, nan, nan]
    return [name, str(fit.window[0]), str(fit.window[1]), str(fit.smoothing_width),
            _fmt(fit.exponent), _fmt(fit.intercept), _fmt(fit.rms_residual)]


def _try_fit(series: TimeSeries, cfg: ExperimentConfig) -> tuple[DecayFit | None, str | None]:
    try:
        return fit_decay_exponent(series, cfg.fit_window, cfg.smoothing_width), None
    except FitError as exc:
        return None, f"{series.label}: {exc}"


def _analytic_initial(cfg: ExperimentConfig) -> AnalyticInitial:
    sites = initial_sites(cfg.initial)
    if len(sites) > MAX_ENTRIES:
        raise ConfigError("custom_file", f"{len(sites)} sites is too many for the Bessel sum")
    return AnalyticInitial(sites)


def simulate(cfg: ExperimentConfig):
    """
    Evolve the configured walk and collect series and snapshots.

    Returns ``(series, profiles)`` where ``series`` maps ``p_surv``,
    ``entropy_bits`` and ``variance`` to TimeSeries sampled on the record grid.
    """
    state0 = make_initial(cfg.initial, t_max=cfg.steps)
    cone = make_initial(cfg.initial)
    snaps = set(cfg.snapshot_times)
    times, surv, ent, var = [], [], [], []
    profiles = {}
    for st in trajectory(state0, cfg.steps):
        t = st.t
        if t % cfg.record_every == 0 or t == cfg.steps:
            times.append(t)
            surv.append(survival(st, cfg.survival_s))
            ent.append(entanglement_entropy(coin_density(st)))
            var.append(variance(st))
        if t in snaps:
            prof = probability_profile(st)
            lo, hi = cone.x_min - t, cone.x_max + t
            sel = (prof.x >= lo) & (prof.x <= hi)
            profiles[t] = (prof.x[sel], prof.p[sel])
    t_arr = np.array(times)
    series = {
        "p_surv": TimeSeries(t_arr, np.array(surv), "p_surv"),
        "entropy_bits": TimeSeries(t_arr, np.array(ent), "entropy_bits"),
        "variance": TimeSeries(t_arr, np.array(var), "variance"),
    }
    return series, profiles


def _trailing_window(steps: int) -> tuple[int, int]:
    return (math.ceil(0.9 * steps), steps)


def run_experiment(cfg: ExperimentConfig) -> int:
    """Run one experiment and write its outputs; returns the process exit code."""
    out = Path(cfg.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"qwline: cannot create output directory {out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO

    analytic_init = _analytic_initial(cfg) if "analytic_survival" in cfg.emit else None
    series, profiles = simulate(cfg)
    analytic = None
    if analytic_init is not None:
        surv = series["p_surv"]
        grid = surv.t[surv.t >= 1]
        analytic = TimeSeries(
            grid, analytic_survival(analytic_init, cfg.survival_s, grid), "p_surv_analytic"
        )

    fits: list[tuple[str, DecayFit | None]] = []
    errors: list[str] = []
    to_fit = []
    if "fit_report" in cfg.emit:
        to_fit.append(series["p_surv"])
        if analytic is not None:
            to_fit.append(analytic)
        if "variance" in cfg.emit:
            to_fit.append(series["variance"])
    for s in to_fit:
        fit, err = _try_fit(s, cfg)
        fits.append((s.label, fit))
        if err:
            errors.append(err)

    ent_window = _trailing_window(cfg.steps)
    summary = {
        "config": cfg.to_dict(),
        "asymptotic_entropy_window": list(ent_window),
        "asymptotic_entropy_bits": asymptotic_entropy(series["entropy_bits"], ent_window),
        "final_survival": float(series["p_surv"].values[-1]),
        "fits": {
            name: None if fit is None else {"exponent": fit.exponent, "intercept": fit.intercept,
                                             "rms_residual": fit.rms_residual}
            for name, fit in fits
        },
        "fit_errors": errors,
    }

    try:
        if "survival" in cfg.emit:
            _write_csv(out / "survival.csv", ("t", "p_surv"), _series_rows(series["p_surv"]))
        if "entropy" in cfg.emit:
            _write_csv(out / "entropy.csv", ("t", "entropy_bits"), _series_rows(series["entropy_bits"]))
        if "variance" in cfg.emit:
            _write_csv(out / "variance.csv", ("t", "variance"), _series_rows(series["variance"]))
        if analytic is not None:
            _write_csv(out / "analytic_survival.csv", ("t", "p_surv_analytic"), _series_rows(analytic))
        if "profile" in cfg.emit:
            for t in sorted(profiles):
                xs, ps = profiles[t]
                _write_csv(out / f"profile_t{t}.csv", ("x", "p"),
                           ([str(int(x)), _fmt(p)] for x, p in zip(xs, ps)))
        if "fit_report" in cfg.emit:
            _write_csv(out / "fit_report.csv", FIT_HEADER, (_fit_row(n, f, cfg) for n, f in fits))
        with open(out / "summary.json", "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        print(f"qwline: cannot write to {out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO

    line = f"{out}: T={cfg.steps} s={cfg.survival_s}"
    if fits:
        surv_fit = fits[0][1]
        line += f" p_surv exponent={'failed' if surv_fit is None else f'{surv_fit.exponent:.4f}'}"
    line += f" S_E[{ent_window[0]},{ent_window[1]}]={summary['asymptotic_entropy_bits']:.4f}"
    print(line)
    for err in errors:
        print(f"qwline: fit failed for {err}", file=sys.stderr)
    return EXIT_FIT if errors else EXIT_OK


def compare_exact_analytic(cfg: ExperimentConfig) -> int:
    """
    Write exact vs Bessel-sum survival side by side, plus both fitted exponents.

    Files: ``compare.csv`` (``t,p_surv,p_surv_analytic,ratio``), ``compare_fit.csv``
    (fit report rows for both series) and ``compare_summary.csv``
    (``exponent_exact,exponent_analytic,exponent_difference,mean_ratio``).
    ``mean_ratio`` is the mean exact survival over the fit window divided by the
    mean Bessel-sum survival over the same samples.
    """
    out = Path(cfg.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"qwline: cannot create output directory {out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO

    analytic_init = _analytic_initial(cfg)
    series, _ = simulate(cfg)
    exact = series["p_surv"].in_window(1, cfg.steps)
    analytic = TimeSeries(
        exact.t, analytic_survival(analytic_init, cfg.survival_s, exact.t), "p_surv_analytic"
    )
    fit_e, err_e = _try_fit(exact, cfg)
    fit_a, err_a = _try_fit(analytic, cfg)
    errors = [e for e in (err_e, err_a) if e]

    win = exact.in_window(*cfg.fit_window)
    win_a = analytic.in_window(*cfg.fit_window)
    mean_ratio = float(win.values.mean() / win_a.values.mean()) if len(win) else float("nan")
    diff = (fit_e.exponent - fit_a.exponent) if fit_e and fit_a else float("nan")

    try:
        _write_csv(
            out / "compare.csv",
            ("t", "p_surv", "p_surv_analytic", "ratio"),
            ([str(int(t)), _fmt(e), _fmt(a), _fmt(e / a) if a != 0 else "nan"]
             for t, e, a in zip(exact.t, exact.values, analytic.values)),
        )
        _write_csv(out / "compare_fit.csv", FIT_HEADER,
                   [_fit_row("p_surv", fit_e, cfg), _fit_row("p_surv_analytic", fit_a, cfg)])
        _write_csv(
            out / "compare_summary.csv",
            ("exponent_exact", "exponent_analytic", "exponent_difference", "mean_ratio"),
            [[_fmt(fit_e.exponent) if fit_e else "nan", _fmt(fit_a.exponent) if fit_a else "nan",
              _fmt(diff), _fmt(mean_ratio)]],
        )
    except OSError as exc:
        print(f"qwline: cannot write to {out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO

    print(f"{out}: exponent exact={_fmt(fit_e.exponent) if fit_e else 'failed'} "
          f"analytic={_fmt(fit_a.exponent) if fit_a else 'failed'} "
          f"difference={diff:.4f} mean_ratio={mean_ratio:.4f}")
    for err in errors:
        print(f"qwline: fit failed for {err}", file=sys.stderr)
    return EXIT_FIT if errors else EXIT_OK


def _dispatch(command: str, cfg: ExperimentConfig) -> int:
    try:
        if command == "compare":
            return compare_exact_analytic(cfg)
        return run_experiment(cfg)
    except ConfigError as exc:
        print(f"qwline: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main(argv: Sequence[str] | None = None) -> int:
    try:
        inv = parse_invocation(argv)
    except ConfigError as exc:
        print(f"qwline: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # argparse
        return int(exc.code) if isinstance(exc.code, int) else EXIT_CONFIG

    if inv.dump:
        json.dump(inv.configs[0].to_dict(), sys.stdout, indent=2)
        sys.stdout.write("\n")
        return EXIT_OK

    if inv.jobs == 1 or len(inv.configs) == 1:
        codes = [_dispatch(inv.command, cfg) for cfg in inv.configs]
    else:
        with ProcessPoolExecutor(max_workers=inv.jobs) as pool:
            codes = list(pool.map(_dispatch, [inv.command] * len(inv.configs), inv.configs))
    return next((c for c in codes if c != EXIT_OK), EXIT_OK)


if __name__ == "__main__":
    sys.exit(main())
