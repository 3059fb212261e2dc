"""Run driver: flat-file/flag configuration, observable sampling, CSV and plots.

A run is configured by a flat ``key = value`` document (and/or mirroring
``--key value`` flags; flags win).  For every point of the scaled-time grid
the analytic state is evolved and the requested diagnostics are sampled:

    entropy            -> S_F        (atom-field entanglement entropy)
    entropy_squeezing  -> E_x_sq, E_p_sq  (normalized entropic measures)
    mandel             -> Q          ("NA" where the mean photon number is 0)
    quadrature         -> V_x, V_p   (variance parameters)

Output is a deterministic CSV (12 significant digits, LF endings) plus an
optional SVG line plot per observable and a JSON metadata sidecar echoing the
resolved configuration.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import schrodinger
from .entanglement import entanglement_entropy
from .entropic import QuadratureGrid, entropy_pair
from .errors import ConfigParseError, SimulationError, UndefinedStatisticError
from .evolution import evolve
from .fieldstats import mandel_q, quadrature_squeezing
from .model import (
    CustomTable,
    Harmonious,
    Identity,
    ModelParams,
    Motion,
    PoschlTeller,
    TrappedIon,
    coherent_amplitudes,
)

OBSERVABLES = ("entropy", "entropy_squeezing", "mandel", "quadrature")
MOTIONS = ("moving", "static")
NONLINEARITIES = ("identity", "trapped_ion", "harmonious", "poschl_teller", "custom")

# Column layout of emitted CSVs; only requested columns appear, in this order.
CSV_COLUMNS = ("tau", "S_F", "E_x_sq", "E_p_sq", "Q", "V_x", "V_p")

VERIFY_SAMPLES = 5
VERIFY_STEP = 0.005
VERIFY_TOL = 1e-5

DEFAULTS = {
    "alpha_sq": "10",
    "alpha_phase": "0",
    "lambda": "1",
    "p": "1",
    "motion": "moving",
    "nonlinearity": "identity",
    "eta": "0.2",
    "nu": "1",
    "n_max": "0",
    "tau_start": "0",
    "tau_end": "30",
    "tau_step": "0.01",
    "observables": ",".join(OBSERVABLES),
    "sweep_p": "",
    "custom_g": "",
    "output": "observables.csv",
    "plot": "false",
}


@dataclass(frozen=True)
class RunConfig:
    """Validated run description: physics, time grid, outputs."""

    params: ModelParams
    tau_start: float
    tau_end: float
    tau_step: float
    observables: tuple[str, ...]
    sweep_p: tuple[int, ...]
    output: str
    emit_plot: bool
    settings: dict

    def tau_grid(self) -> np.ndarray:
        count = int(math.floor((self.tau_end - self.tau_start) / self.tau_step + 1e-9)) + 1
        return self.tau_start + self.tau_step * np.arange(count)


@dataclass(frozen=True)
class ObservableSeries:
    """Sampled diagnostics over the time grid, plus the config that made them.

    Columns are plain lists so an undefined Mandel sample can be carried as
    None (emitted as the "NA" sentinel) without smuggling NaNs around.
    """

    tau: np.ndarray
    S_F: list | None
    bigE_x: list | None
    bigE_p: list | None
    Q: list | None
    V_x: list | None
    V_p: list | None
    config: RunConfig

    def columns(self) -> list[tuple[str, list]]:
        present = {
            "S_F": self.S_F,
            "E_x_sq": self.bigE_x,
            "E_p_sq": self.bigE_p,
            "Q": self.Q,
            "V_x": self.V_x,
            "V_p": self.V_p,
        }
        return [(name, present[name]) for name in CSV_COLUMNS[1:] if present[name] is not None]


def _fail(key: str, line: int | None, message: str) -> ConfigParseError:
    where = f"key '{key}'" if line is None else f"key '{key}' (line {line})"
    return ConfigParseError(f"{where}: {message}")


def _parse_float(key, raw, line, *, minimum=None, strict_min=None):
    try:
        value = float(raw)
    except ValueError:
        raise _fail(key, line, f"expected a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise _fail(key, line, f"value must be finite, got {raw!r}")
    if minimum is not None and value < minimum:
        raise _fail(key, line, f"value must be >= {minimum}, got {value:g}")
    if strict_min is not None and value <= strict_min:
        raise _fail(key, line, f"value must be > {strict_min}, got {value:g}")
    return value


def _parse_int(key, raw, line, *, minimum):
    try:
        value = int(raw)
    except ValueError:
        raise _fail(key, line, f"expected an integer, got {raw!r}") from None
    if value < minimum:
        raise _fail(key, line, f"value must be >= {minimum}, got {value}")
    return value


def _parse_bool(key, raw, line):
    lowered = raw.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise _fail(key, line, f"expected true/false, got {raw!r}")


def _parse_choice(key, raw, line, choices):
    lowered = raw.strip().lower()
    if lowered not in choices:
        raise _fail(key, line, f"expected one of {'|'.join(choices)}, got {raw!r}")
    return lowered


def _parse_list(key, raw):
    return [item.strip() for item in raw.split(",") if item.strip()]


def parse_document(text: str) -> dict[str, tuple[str, int]]:
    """Flat ``key = value`` lines -> {key: (value, line_no)}; '#' starts a comment."""
    entries: dict[str, tuple[str, int]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigParseError(f"line {line_no}: expected 'key = value', got {line.rstrip()!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key not in DEFAULTS:
            raise ConfigParseError(f"line {line_no}: unknown key '{key}'")
        entries[key] = (value.strip(), line_no)
    return entries


def build_config(entries: dict[str, tuple[str, int]]) -> RunConfig:
    """Resolve defaults + entries into a validated RunConfig."""

    def get(key):
        value, line = entries.get(key, (DEFAULTS[key], None))
        return value, line

    alpha_sq = _parse_float("alpha_sq", *get("alpha_sq"), minimum=0.0)
    alpha_phase = _parse_float("alpha_phase", *get("alpha_phase"))
    lam = _parse_float("lambda", *get("lambda"), strict_min=0.0)
    p = _parse_int("p", *get("p"), minimum=1)
    motion = Motion(_parse_choice("motion", *get("motion"), MOTIONS))
    kind_name = _parse_choice("nonlinearity", *get("nonlinearity"), NONLINEARITIES)
    eta = _parse_float("eta", *get("eta"))
    nu = _parse_float("nu", *get("nu"), strict_min=0.0)
    n_max = _parse_int("n_max", *get("n_max"), minimum=0)
    tau_start = _parse_float("tau_start", *get("tau_start"), minimum=0.0)
    tau_end = _parse_float("tau_end", *get("tau_end"))
    tau_step = _parse_float("tau_step", *get("tau_step"), strict_min=0.0)
    if tau_end <= tau_start:
        raise _fail("tau_end", get("tau_end")[1], f"must exceed tau_start={tau_start:g}")

    raw_obs, obs_line = get("observables")
    requested = _parse_list("observables", raw_obs)
    for name in requested:
        if name not in OBSERVABLES:
            raise _fail("observables", obs_line, f"unknown observable '{name}'")
    observables = tuple(name for name in OBSERVABLES if name in requested)

    raw_sweep, sweep_line = get("sweep_p")
    sweep_p = tuple(
        _parse_int("sweep_p", item, sweep_line, minimum=1)
        for item in _parse_list("sweep_p", raw_sweep)
    )

    raw_custom, custom_line = get("custom_g")
    if kind_name == "custom":
        values = [_parse_float("custom_g", item, custom_line) for item in _parse_list("custom_g", raw_custom)]
        if not values:
            raise _fail("custom_g", custom_line, "nonlinearity=custom requires a custom_g value list")
        kind = CustomTable(tuple(values))
    else:
        kind = {
            "identity": Identity(),
            "trapped_ion": TrappedIon(eta),
            "harmonious": Harmonious(),
            "poschl_teller": PoschlTeller(nu),
        }[kind_name]

    alpha = math.sqrt(alpha_sq) * cmath.exp(1j * alpha_phase)
    try:
        params = ModelParams(
            lam=lam,
            p=p,
            alpha=alpha,
            nonlinearity=kind,
            n_max=None if n_max == 0 else n_max,
            motion=motion,
        )
    except SimulationError as exc:
        raise ConfigParseError(f"invalid model parameters: {exc}") from exc

    output, _ = get("output")
    emit = _parse_bool("plot", *get("plot"))

    settings = {key: get(key)[0] for key in DEFAULTS}
    settings["n_max"] = str(params.n_max)  # echo the resolved truncation
    return RunConfig(
        params=params,
        tau_start=tau_start,
        tau_end=tau_end,
        tau_step=tau_step,
        observables=observables,
        sweep_p=sweep_p,
        output=output,
        emit_plot=emit,
        settings=settings,
    )


def parse_config(text: str) -> RunConfig:
    """Parse a flat config document into a validated RunConfig."""
    return build_config(parse_document(text))


def expand_sweep(config: RunConfig) -> list[RunConfig]:
    """One config per sweep_p entry (suffixed outputs), or [config] if no sweep."""
    if not config.sweep_p:
        return [config]
    out = []
    base = Path(config.output)
    for p in config.sweep_p:
        params = replace(config.params, p=p)
        settings = dict(config.settings, p=str(p), sweep_p="")
        output = str(base.with_name(f"{base.stem}_p{p}{base.suffix}"))
        out.append(
            replace(config, params=params, sweep_p=(), output=output, settings=settings)
        )
    return out


def run(config: RunConfig) -> ObservableSeries:
    """Sample every requested observable over the scaled-time grid.

    Pure function of the config: identical configs produce bit-identical
    series (and CSV bytes) on the same platform.
    """
    params = config.params
    q = coherent_amplitudes(params.alpha, params.n_max)
    taus = config.tau_grid()
    want = set(config.observables)
    grid = QuadratureGrid.for_params(params) if "entropy_squeezing" in want else None

    cols: dict[str, list] = {name: [] for name in want}
    for tau in taus:
        state = evolve(params, q, float(tau))
        try:
            if "entropy" in want:
                cols["entropy"].append(entanglement_entropy(state))
            if "entropy_squeezing" in want:
                pair = entropy_pair(state, grid)
                cols["entropy_squeezing"].append((pair.bigE_x, pair.bigE_p))
            if "mandel" in want:
                try:
                    cols["mandel"].append(mandel_q(state))
                except UndefinedStatisticError:
                    cols["mandel"].append(None)
            if "quadrature" in want:
                cols["quadrature"].append(quadrature_squeezing(state))
        except SimulationError as exc:
            raise type(exc)(f"at tau={tau:.6g}: {exc}") from exc

    squeezing = cols.get("entropy_squeezing")
    quad = cols.get("quadrature")
    return ObservableSeries(
        tau=taus,
        S_F=cols.get("entropy"),
        bigE_x=[v[0] for v in squeezing] if squeezing is not None else None,
        bigE_p=[v[1] for v in squeezing] if squeezing is not None else None,
        Q=cols.get("mandel"),
        V_x=[v[0] for v in quad] if quad is not None else None,
        V_p=[v[1] for v in quad] if quad is not None else None,
        config=config,
    )


def _format_value(value) -> str:
    return "NA" if value is None else format(value, ".12g")


def emit_csv(series: ObservableSeries, path) -> None:
    """Write the series as UTF-8, LF-terminated CSV with 12-significant-digit values."""
    columns = series.columns()
    lines = [",".join(["tau"] + [name for name, _ in columns])]
    for i, tau in enumerate(series.tau):
        row = [_format_value(float(tau))] + [_format_value(col[i]) for _, col in columns]
        lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_metadata(series: ObservableSeries, csv_path) -> Path:
    """JSON sidecar echoing the resolved configuration of an emitted CSV."""
    path = Path(csv_path).with_suffix(".meta.json")
    payload = {
        "settings": series.config.settings,
        "observables": list(series.config.observables),
        "samples": len(series.tau),
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


_PLOT_GROUPS = {
    # group -> (series columns, y label, draw zero reference line)
    "entropy": (("S_F",), "S_F", False),
    "entropy_squeezing": (("E_x_sq", "E_p_sq"), "entropy squeezing", True),
    "mandel": (("Q",), "Q", True),
    "quadrature": (("V_x", "V_p"), "V", True),
}


def emit_plot(series: ObservableSeries, base_path) -> list[Path]:
    """One SVG per requested observable: the quantity against scaled time tau."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    available = dict(series.columns())
    base = Path(base_path)
    written = []
    for group in series.config.observables:
        names, ylabel, zero_line = _PLOT_GROUPS[group]
        if any(name not in available for name in names):
            continue
        fig, ax = plt.subplots(figsize=(7, 4))
        for name in names:
            values = np.array(
                [np.nan if v is None else v for v in available[name]], dtype=float
            )
            ax.plot(series.tau, values, lw=1.0, label=name)
        if zero_line:
            ax.axhline(0.0, color="0.4", lw=0.8, ls="--")
        ax.set_xlabel(r"scaled time $\tau$")
        ax.set_ylabel(ylabel)
        if len(names) > 1:
            ax.legend(frameon=False)
        fig.tight_layout()
        path = base.with_name(f"{base.stem}_{group}.svg")
        fig.savefig(path)
        plt.close(fig)
        written.append(path)
    return written


def verify_run(config: RunConfig) -> list[tuple[float, float]]:
    """Integrator spot-check at evenly spaced times; returns (tau, deviation) pairs."""
    params = config.params
    q = coherent_amplitudes(params.alpha, params.n_max)
    taus = np.linspace(config.tau_start, config.tau_end, VERIFY_SAMPLES)
    results = []
    for tau in taus:
        numeric = schrodinger.integrate(params, q, float(tau), dtau=VERIFY_STEP)
        deviation = schrodinger.compare(numeric, evolve(params, q, float(tau)))
        results.append((float(tau), deviation))
    return results


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lambda-jcm",
        description="Moving three-level atom in a cavity: nonclassicality diagnostics over time.",
    )
    parser.add_argument("--config", type=Path, help="flat key = value configuration file")
    parser.add_argument(
        "--verify",
        action="store_true",
        help="spot-check the closed-form state against the RK4 integrator",
    )
    for key in DEFAULTS:
        parser.add_argument(f"--{key}", dest=f"opt_{key}", metavar="VALUE")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        entries = {}
        if args.config is not None:
            try:
                text = Path(args.config).read_text(encoding="utf-8")
            except OSError as exc:
                raise ConfigParseError(f"cannot read config file: {exc}") from exc
            entries = parse_document(text)
        for key in DEFAULTS:
            value = getattr(args, f"opt_{key}")
            if value is not None:
                entries[key] = (value, None)
        config = build_config(entries)

        failed = False
        for cfg in expand_sweep(config):
            series = run(cfg)
            emit_csv(series, cfg.output)
            meta = write_metadata(series, cfg.output)
            print(f"wrote {cfg.output} ({len(series.tau)} samples) and {meta}")
            if cfg.emit_plot:
                for path in emit_plot(series, cfg.output):
                    print(f"wrote {path}")
            if args.verify:
                for tau, deviation in verify_run(cfg):
                    status = "ok" if deviation <= VERIFY_TOL else "FAIL"
                    print(f"verify tau={tau:g}: max deviation {deviation:.3e} [{status}]")
                    failed = failed or deviation > VERIFY_TOL
        if failed:
            print(f"verification failed: deviation exceeded {VERIFY_TOL:g}", file=sys.stderr)
            return 1
        return 0
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
