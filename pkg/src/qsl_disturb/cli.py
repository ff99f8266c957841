"""Command-line front end: ``qsl-disturb {traj,nonmark,qsl,validate}``.

Values are layered: explicit flags override ``--config`` file entries, which
override ``--preset`` recipes, which override built-in defaults.

Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 numerical warnings
under ``--strict``.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import presets
from .dynamics import ModelConfig, QubitState, coherence_trajectory, fmt
from .nonmarkov import EPS_ONSET, SWEEP_AXES, SWEEP_COLUMNS, NonMarkovResult, measure, sweep
from .qsl import QslResult, qsl_sweep, write_qsl_csv
from .spectral import DisturbanceConfig, Lorentzian, Ohmic, QuadratureError
from .validation import lorentzian_audit, ohmic_oracle_cases

log = logging.getLogger("qsl_disturb")

COMMANDS = ("traj", "nonmark", "qsl", "validate")
OHMIC_KEYS = ("eta", "s", "omega-c")
LORENTZ_KEYS = ("gamma", "lambda", "delta", "delta-over-lambda", "backend")
FLAG_KEYS = ("paired", "plot", "strict")

DEFAULTS = {
    "bath": "ohmic", "eta": 1.0, "s": 1.0, "omega-c": 1.0,
    "gamma": 10.0, "lambda": 1.0, "delta": 0.0, "backend": "closed",
    "omega-s": 0.0, "t-max": 20.0, "n-steps": 4000, "tau": 0.0, "tau-d": 1.0,
}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    start: float
    stop: float
    step: float

    @classmethod
    def parse(cls, text: str) -> "SweepSpec":
        parts = text.split(":")
        if len(parts) != 4:
            raise UsageError(f"--sweep expects name:start:stop:step, got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts[1:])
        except ValueError as exc:
            raise UsageError(f"--sweep has a non-numeric bound in {text!r}") from exc
        if not step > 0:
            raise UsageError("--sweep step must be > 0")
        if stop < start:
            raise UsageError("--sweep stop must be >= start")
        return cls(parts[0].replace("-", "_"), start, stop, step)

    def values(self) -> list[float]:
        n = int(np.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(self.start + k * self.step, 12) for k in range(n)]


@dataclass
class RunConfig:
    command: str
    model: ModelConfig
    initial: QubitState
    t_max: float = 20.0
    n_steps: int = 4000
    tau: float = 0.0
    tau_d: float = 1.0
    sweep: Optional[SweepSpec] = None
    out: Optional[Path] = None
    plot: bool = False
    paired: bool = False
    jobs: int = 1
    strict: bool = False
    warnings: list = field(default_factory=list)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qsl-disturb",
        description="Dephasing qubit in a bath disturbed by an auxiliary qubit: "
        "coherence trajectories, non-Markovianity sweeps, speed limits and oracle checks.",
        argument_default=argparse.SUPPRESS,
    )
    # an explicit None default: argparse validates a suppressed positional against choices
    p.add_argument("command", nargs="?", choices=COMMANDS, default=None)
    p.add_argument("--config", help="file of 'key = value' lines using the long flag names")
    p.add_argument("--preset", choices=sorted(presets.PRESETS))
    p.add_argument("--bath", action="append", choices=("ohmic", "lorentzian"))
    g = p.add_argument_group("Ohmic bath")
    g.add_argument("--eta", type=float)
    g.add_argument("--s", type=float)
    g.add_argument("--omega-c", type=float)
    g = p.add_argument_group("Lorentzian bath")
    g.add_argument("--gamma", type=float)
    g.add_argument("--lambda", type=float)
    g.add_argument("--delta", type=float)
    g.add_argument("--delta-over-lambda", type=float)
    g.add_argument("--backend", choices=("closed", "quadrature"))
    g = p.add_argument_group("disturbance")
    g.add_argument("--sz-a", type=float, help="<sigma_z> of the auxiliary qubit; enables the disturbance")
    g.add_argument("--ta", type=float, help="duration of the auxiliary interaction (default: calibrated)")
    g = p.add_argument_group("run")
    g.add_argument("--omega-s", type=float)
    g.add_argument("--bloch", help="initial Bloch vector r1,r2,r3 (default maximally coherent)")
    g.add_argument("--t-max", type=float)
    g.add_argument("--n-steps", type=int)
    g.add_argument("--tau", type=float)
    g.add_argument("--tau-d", type=float)
    g.add_argument("--sweep", help="name:start:stop:step")
    g.add_argument("--out", help="output CSV (stdout if omitted)")
    g.add_argument("--plot", action="store_true", help="also write a gnuplot script next to --out")
    g.add_argument("--paired", action="store_true", help="also compute the undisturbed reference")
    g.add_argument("--jobs", type=int)
    g.add_argument("--strict", action="store_true", help="exit 3 on numerical warnings")
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def read_config_file(path: str) -> dict[str, str]:
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for n, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected 'key = value'")
            key, value = (x.strip() for x in line.split("=", 1))
            entries[key.lstrip("-").replace("_", "-")] = value
    return entries


def _normalise_file_entries(entries: dict[str, str], parser: argparse.ArgumentParser) -> dict:
    """Type-convert config-file values by running them through the parser."""
    argv = []
    for key, value in entries.items():
        if key in FLAG_KEYS:
            if value.lower() in ("1", "true", "yes", "on"):
                argv.append(f"--{key}")
            elif value.lower() not in ("0", "false", "no", "off"):
                raise UsageError(f"config key {key!r} expects a boolean")
        elif key == "command":
            argv.insert(0, value)
        else:
            argv += [f"--{key}", value]
    ns = parser.parse_args(argv)
    return _namespace_to_dict(ns)


def _namespace_to_dict(ns: argparse.Namespace) -> dict:
    d = {k.replace("_", "-"): v for k, v in vars(ns).items() if v is not None}
    if "bath" in d:
        if len(d["bath"]) > 1:
            raise UsageError("--bath given more than once; choose exactly one bath")
        d["bath"] = d["bath"][0]
    return d


def parse_args(argv: Sequence[str]) -> RunConfig:
    """Parse and validate ``argv``; usage problems exit with status 2."""
    parser = _build_parser()
    try:
        explicit = _namespace_to_dict(parser.parse_args(list(argv)))
        layers = [DEFAULTS]
        if "preset" in explicit:
            layers.append(presets.PRESETS[explicit["preset"]])
        if "config" in explicit:
            try:
                file_vals = _normalise_file_entries(read_config_file(explicit["config"]), parser)
            except OSError as exc:
                raise UsageError(f"--config: cannot read {explicit['config']}: {exc}") from exc
            if "preset" in file_vals and "preset" not in explicit:
                layers.append(presets.PRESETS[file_vals["preset"]])
            layers.append(file_vals)
        layers.append(explicit)
        return _build_run_config(layers)
    except UsageError as exc:
        parser.error(str(exc))


def _lookup(layers, key, default=None):
    for layer in reversed(layers):
        if key in layer:
            return layer[key]
    return default


def _given(layers, key) -> bool:
    # defaults do not count as "given"
    return any(key in layer for layer in layers[1:])


def _build_run_config(layers: list[dict]) -> RunConfig:
    get = lambda k, d=None: _lookup(layers, k, d)  # noqa: E731
    command = get("command")
    if command is None:
        raise UsageError("a command is required: one of " + ", ".join(COMMANDS))

    kind = get("bath")
    foreign = LORENTZ_KEYS if kind == "ohmic" else OHMIC_KEYS
    for key in foreign:
        if _given(layers, key):
            raise UsageError(f"--{key} does not apply to a {kind} bath")
    if any("delta" in layer and "delta-over-lambda" in layer for layer in layers[1:]):
        raise UsageError("--delta and --delta-over-lambda are mutually exclusive")

    try:
        if kind == "ohmic":
            bath = Ohmic(get("eta"), get("s"), get("omega-c"))
        else:
            lam = get("lambda")
            # whichever of delta / delta-over-lambda comes from the higher layer wins
            delta = get("delta")
            for layer in reversed(layers):
                if "delta-over-lambda" in layer:
                    delta = layer["delta-over-lambda"] * lam
                    break
                if "delta" in layer:
                    break
            bath = Lorentzian(get("gamma"), lam, delta, get("backend"))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    if _given(layers, "ta") and not _given(layers, "sz-a"):
        raise UsageError("--ta requires --sz-a (the disturbance is switched on by --sz-a)")
    try:
        if _given(layers, "sz-a"):
            dist = DisturbanceConfig(True, get("ta", presets.default_ta(kind)), get("sz-a"))
        else:
            dist = DisturbanceConfig()
        model = ModelConfig(bath, dist, get("omega-s"))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    initial = QubitState.maximally_coherent()
    if get("bloch") is not None:
        try:
            r = [float(x) for x in str(get("bloch")).split(",")]
            if len(r) != 3:
                raise ValueError("need three components")
            initial = QubitState.from_bloch(*r)
        except ValueError as exc:
            raise UsageError(f"--bloch: {exc}") from exc

    spec = SweepSpec.parse(get("sweep")) if get("sweep") is not None else None
    if spec is not None:
        allowed = {"nonmark": SWEEP_AXES, "qsl": ("tau",)}.get(command, ())
        if spec.axis not in allowed:
            raise UsageError(f"--sweep axis {spec.axis!r} is not valid for {command}")

    t_max, n_steps, tau_d = get("t-max"), get("n-steps"), get("tau-d")
    if not t_max > 0:
        raise UsageError("--t-max must be > 0")
    if n_steps < 8:
        raise UsageError("--n-steps must be >= 8")
    if not tau_d > 0:
        raise UsageError("--tau-d must be > 0")
    if get("tau") < 0:
        raise UsageError("--tau must be >= 0")

    jobs = get("jobs")
    if jobs is None:
        env = os.environ.get("QSL_DISTURB_JOBS")
        try:
            jobs = int(env) if env else (os.cpu_count() or 1)
        except ValueError as exc:
            raise UsageError(f"QSL_DISTURB_JOBS must be an integer, got {env!r}") from exc
    if jobs < 1:
        raise UsageError("--jobs must be >= 1")

    out = Path(get("out")) if get("out") is not None else None
    if get("plot", False) and out is None:
        raise UsageError("--plot needs --out")

    return RunConfig(
        command=command, model=model, initial=initial, t_max=t_max, n_steps=n_steps,
        tau=get("tau"), tau_d=tau_d, sweep=spec, out=out, plot=bool(get("plot", False)),
        paired=bool(get("paired", False)), jobs=jobs, strict=bool(get("strict", False)),
    )


# --------------------------------------------------------------------------- output


def _open_out(path: Optional[Path]):
    if path is None:
        return _Stdout()
    return open(path, "w", newline="", encoding="utf-8")


class _Stdout:
    def __enter__(self):
        return sys.stdout

    def __exit__(self, *exc):
        sys.stdout.flush()
        return False


def _reference_path(path: Path) -> Path:
    return path.with_name(path.stem + ".reference" + path.suffix)


def _run_traj(cfg: RunConfig) -> None:
    traj = coherence_trajectory(cfg.model, cfg.initial, cfg.t_max, cfg.n_steps)
    with _open_out(cfg.out) as fh:
        traj.write_csv(fh)
    if cfg.paired and cfg.out is not None:
        ref = coherence_trajectory(cfg.model.undisturbed(), cfg.initial, cfg.t_max, cfg.n_steps)
        ref.to_csv(_reference_path(cfg.out))
    if cfg.plot:
        ref = _reference_path(cfg.out) if cfg.paired else None
        _write_plot(cfg.out, "t", "C_l1", 1, 7, ref_file=ref, ref_col=7)


def _nonmark_rows(cfg: RunConfig, model: ModelConfig) -> list[tuple[Optional[float], NonMarkovResult]]:
    if cfg.sweep is None:
        return [(None, measure(model, cfg.t_max, cfg.n_steps))]
    return sweep(model, cfg.sweep.axis, cfg.sweep.values(), cfg.t_max, cfg.n_steps, jobs=cfg.jobs)


def _run_nonmark(cfg: RunConfig) -> None:
    rows = _nonmark_rows(cfg, cfg.model)
    ref = _nonmark_rows(cfg, cfg.model.undisturbed()) if cfg.paired else None
    remaining = max(r.remaining_fraction for _, r in rows + (ref or []))
    print(f"qsl-disturb: largest coherence fraction left at t_max = {remaining:.3g}", file=sys.stderr)
    header = list(SWEEP_COLUMNS)
    if ref is not None:
        header += ["n_value_reference", "n_revivals_reference", "onset_flag_reference"]
    with _open_out(cfg.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for k, (v, r) in enumerate(rows):
            line = ["" if v is None else fmt(v), fmt(r.n_value), r.n_revivals, int(r.n_value > EPS_ONSET)]
            if ref is not None:
                rr = ref[k][1]
                line += [fmt(rr.n_value), rr.n_revivals, int(rr.n_value > EPS_ONSET)]
            w.writerow(line)
    hits = [v for v, r in rows if v is not None and r.n_value > EPS_ONSET]
    if cfg.sweep is not None:
        onset = f"{min(hits):g}" if hits else "none"
        log.info("onset %s = %s (grid step %g)", cfg.sweep.axis, onset, cfg.sweep.step)
    if cfg.plot:
        xlabel = cfg.sweep.axis if cfg.sweep is not None else "run"
        _write_plot(cfg.out, xlabel, "N", 1, 2, ref_col=5 if ref is not None else None)


def _run_qsl(cfg: RunConfig) -> None:
    taus = cfg.sweep.values() if cfg.sweep is not None else [cfg.tau]
    rows = qsl_sweep(cfg.model, cfg.initial, taus, cfg.tau_d, cfg.n_steps, jobs=cfg.jobs)
    ref = None
    if cfg.paired:
        ref = qsl_sweep(cfg.model.undisturbed(), cfg.initial, taus, cfg.tau_d, cfg.n_steps, jobs=cfg.jobs)
    for tau, res in rows + (ref or []):
        _flag_qsl(cfg, tau, res)
    with _open_out(cfg.out) as fh:
        write_qsl_csv(rows, fh, ref)
    if cfg.plot:
        _write_plot(cfg.out, "tau", "tau_QSL", 1, 2, ref_col=3 if ref is not None else None)


def _flag_qsl(cfg: RunConfig, tau: float, res: QslResult) -> None:
    if res.frozen:
        cfg.warnings.append(f"frozen dynamics at tau={tau:g}")
    if res.exceeds_window:
        cfg.warnings.append(f"tau_qsl={res.tau_qsl:.6g} exceeds tau_d at tau={tau:g}")


def _run_validate(cfg: RunConfig) -> bool:
    cases = ohmic_oracle_cases()
    lines = [f"{'PASS' if c.passed else 'FAIL'} {c.label}: max rel err {c.max_rel_error:.3e}" for c in cases]
    audit = lorentzian_audit()
    lines += list(audit.lines())
    lines.append("lorentzian closed form matches quadrature over: "
                 + (", ".join(audit.matching_domains("closed")) or "neither"))
    lines.append("lorentzian printed form matches quadrature over: "
                 + (", ".join(audit.matching_domains("printed")) or "neither"))
    text = "\n".join(lines) + "\n"
    if cfg.out is not None:
        cfg.out.write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return all(c.passed for c in cases)


def _write_plot(csv_path: Path, xlabel: str, ylabel: str, xcol: int, ycol: int,
                ref_col: Optional[int] = None, ref_file: Optional[Path] = None) -> Path:
    """Gnuplot script: disturbed curve solid black, undisturbed reference dashed red."""
    script = csv_path.with_suffix(".gp")
    png = csv_path.with_suffix(".png").name
    data = csv_path.name
    lines = [
        "# generated by qsl-disturb; render with: gnuplot " + script.name,
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set terminal pngcairo size 800,600",
        f"set output '{png}'",
        f"set xlabel '{xlabel}'",
        f"set ylabel '{ylabel}'",
        "set style line 1 lc rgb 'black' lw 2 dt 1",
        "set style line 2 lc rgb 'red' lw 2 dt 2",
    ]
    plot = f"plot '{data}' using {xcol}:{ycol} with lines ls 1 title 'disturbed'"
    if ref_col is not None:
        src = ref_file.name if ref_file is not None else data
        plot += f", \\\n     '{src}' using {xcol}:{ref_col} with lines ls 2 title 'no disturbance'"
    lines.append(plot)
    script.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return script


def run(cfg: RunConfig) -> int:
    try:
        if cfg.command == "traj":
            _run_traj(cfg)
        elif cfg.command == "nonmark":
            _run_nonmark(cfg)
        elif cfg.command == "qsl":
            _run_qsl(cfg)
        elif not _run_validate(cfg):
            print("qsl-disturb: oracle mismatch in Ohmic cases", file=sys.stderr)
            return 3
    except OSError as exc:
        print(f"qsl-disturb: {exc}", file=sys.stderr)
        return 1
    except QuadratureError as exc:
        cfg.warnings.append(f"quadrature failure: {exc}")
    if cfg.warnings:
        uniq = list(dict.fromkeys(cfg.warnings))
        print(f"qsl-disturb: {len(uniq)} numerical warning(s): " + "; ".join(uniq[:5]), file=sys.stderr)
        if cfg.strict:
            return 3
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    logging.basicConfig(level=logging.INFO if ("-v" in argv or "--verbose" in argv) else logging.WARNING,
                        format="%(message)s")
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
