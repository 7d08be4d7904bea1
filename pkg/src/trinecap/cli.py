"""Command-line front end.

Every command accepts ``--config FILE`` (flat ``key = value`` lines, keys as
the long option names with dashes or underscores), ``--output PATH`` and
``--format csv|json``. Flags override the config file. Every output embeds
the effective parameters: ``# key=value`` lines ahead of the CSV header, or a
``config`` object in JSON.

Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import coding, experiment, measure, pwcode
from .qstate import basis_state, trine_state

log = logging.getLogger("trinecap")

EXIT_USAGE = 2
EXIT_NUMERICAL = 3

LETTER_SETS = {
    "trine": lambda: [trine_state(x) for x in range(3)],
    "orthogonal-pair": lambda: [basis_state(0), basis_state(1)],
    "binary-trine": lambda: [trine_state(0), trine_state(1)],
}

COMMON = {"seed": 0, "format": "csv", "output": None}
DEFAULTS = {
    "capacity": {"letters": "trine", "restarts": 16},
    "superadd": {},
    "sweep": {
        "from": -60.0, "to": 60.0, "step": 5.0, "ideal": False,
        "visibility": 0.98, "background": None, "dark": 100.0, "extinction": 1.0,
        "duration": experiment.DEFAULT_DURATION, "rate": experiment.DEFAULT_RATE,
        "replicas": experiment.DEFAULT_REPLICAS,
    },
    "simulate": {
        "codeword": "all", "offset": 0.0, "duration": experiment.DEFAULT_DURATION,
        "rate": experiment.DEFAULT_RATE, "visibility": 0.98, "background": None, "dark": 100.0,
        "extinction": 1.0, "histogram": None, "format": "json",
    },
    "exponent": {"scheme": "qchc", "rate": 0.62, "pe": None},
    "blocklength": {"scheme": "qchc", "rate": 0.62, "pe": 1e-9},
}
TYPES = {
    "restarts": int, "seed": int, "replicas": int, "ideal": lambda s: str(s).lower() in ("1", "true", "yes", "on"),
    "from": float, "to": float, "step": float, "visibility": float, "background": float, "dark": float,
    "extinction": float, "duration": float, "rate": float, "offset": float, "pe": float,
}


class UsageError(Exception):
    pass


def read_config(path) -> dict:
    """Parse a flat ``key = value`` file. ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value.strip("\"'")
    return out


def effective_config(command: str, args: argparse.Namespace) -> dict:
    cfg = dict(COMMON)
    cfg.update(DEFAULTS[command])
    if args.config:
        for key, value in read_config(args.config).items():
            key = "from" if key == "from_" else key
            if key not in cfg:
                raise UsageError(f"unknown config key {key!r} for {command}")
            cfg[key] = TYPES.get(key, str)(value) if value != "" else None
    for key in cfg:
        value = getattr(args, key.replace("from", "from_") if key == "from" else key, None)
        if value is not None:
            cfg[key] = value
    return cfg


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".10g")
    return str(value)


# Where output goes is not a run parameter, so it is left out of the embedded config.
NOT_EMBEDDED = ("output", "histogram")


def run_parameters(cfg: dict) -> dict:
    return {k: v for k, v in cfg.items() if k not in NOT_EMBEDDED}


def render_csv(cfg: dict, header, rows) -> str:
    buf = io.StringIO()
    for key, value in run_parameters(cfg).items():
        buf.write(f"# {key}={fmt(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def render_json(cfg: dict, payload: dict) -> str:
    payload = dict(payload)
    payload["config"] = run_parameters(cfg)
    return json.dumps(payload, indent=2, default=_jsonable) + "\n"


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit(text: str, path) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def noise_from(cfg: dict) -> experiment.NoiseConfig:
    return experiment.NoiseConfig(
        visibility=cfg["visibility"], background_rate=cfg["background"], dark_rate=cfg["dark"],
        pbs_extinction=cfg["extinction"],
    )


# -- commands -------------------------------------------------------------------------


def cmd_capacity(cfg: dict) -> int:
    if cfg["letters"] not in LETTER_SETS:
        raise UsageError(f"unknown letter set {cfg['letters']!r}")
    res = measure.optimize_c1(LETTER_SETS[cfg["letters"]](), restarts=cfg["restarts"], seed=cfg["seed"])
    angles = np.degrees(res.povm_angles)
    if cfg["format"] == "json":
        emit(render_json(cfg, {
            "c1_bits": res.value, "priors": res.optimal_priors, "povm_angles": angles,
            "iterations": res.iterations, "converged": res.converged,
        }), cfg["output"])
    else:
        rows = [("c1_bits", res.value)]
        rows += [(f"prior_{i}", p) for i, p in enumerate(res.optimal_priors)]
        rows += [(f"povm_angle_deg_{i}", a) for i, a in enumerate(angles)]
        rows += [("iterations", res.iterations)]
        emit(render_csv(cfg, ("quantity", "value"), rows), cfg["output"])
    if not res.converged:
        log.error("optimizer did not converge; best value %.6f bits", res.value)
        return EXIT_NUMERICAL
    return 0


def cmd_superadd(cfg: dict) -> int:
    rec = pwcode.superadditive_gain(seed=cfg["seed"])
    values = {"i2": rec.i2, "per_letter": rec.per_letter, "c1": rec.c1, "gain": rec.gain, "two_c1": 2 * rec.c1}
    if cfg["format"] == "json":
        emit(render_json(cfg, values), cfg["output"])
    else:
        emit(render_csv(cfg, ("quantity", "bits"), values.items()), cfg["output"])
    return 0


def sweep_offsets_deg(start: float, stop: float, step: float) -> np.ndarray:
    if step <= 0:
        raise UsageError("--step must be positive")
    if start > stop:
        raise UsageError("--from must not exceed --to")
    count = math.floor((stop - start) / step + 1e-9) + 1
    return start + step * np.arange(count)


def cmd_sweep(cfg: dict) -> int:
    offsets_deg = sweep_offsets_deg(cfg["from"], cfg["to"], cfg["step"])
    offsets = np.radians(offsets_deg)
    ideal = pwcode.ideal_sweep(offsets)
    if cfg["ideal"]:
        sim = [None] * len(offsets)
    else:
        sim = experiment.run_sweep_experiment(
            offsets, noise_from(cfg), cfg["duration"], cfg["rate"], cfg["seed"], cfg["replicas"])
    rows = []
    for deg, (_, mi), point in zip(offsets_deg, ideal, sim):
        rows.append((deg, mi, point.mi if point else None, point.stderr if point else None))
    header = ("offset_deg", "mi_ideal_bits", "mi_sim_bits", "mi_sim_stderr")
    if cfg["format"] == "json":
        emit(render_json(cfg, {"rows": [dict(zip(header, r)) for r in rows]}), cfg["output"])
    else:
        emit(render_csv(cfg, header, rows), cfg["output"])
    return 0


def cmd_simulate(cfg: dict) -> int:
    labels = experiment.LABELS
    if cfg["codeword"] == "all":
        rows = (0, 1, 2)
    elif cfg["codeword"] in labels:
        rows = (labels.index(cfg["codeword"]),)
    else:
        raise UsageError(f"unknown codeword {cfg['codeword']!r}; expected 00, 11, 22 or all")
    rec = experiment.simulate_counts(math.radians(cfg["offset"]), noise_from(cfg), cfg["duration"],
                                     cfg["rate"], cfg["seed"], rows=rows)
    hist = [(labels[x], labels[y], int(rec.counts[x, y])) for x in rows for y in range(3)]
    hist_csv = render_csv(cfg, ("sent", "detected", "count"), hist)
    if cfg["histogram"]:
        Path(cfg["histogram"]).write_text(hist_csv, encoding="utf-8")
    if cfg["format"] == "json":
        emit(render_json(cfg, {
            "counts": rec.counts, "duration_s": rec.duration, "rate_cps": rec.total_rate, "seed": cfg["seed"],
        }), cfg["output"])
    else:
        emit(hist_csv, cfg["output"])
    return 0


def _coding_rows(cfg: dict):
    scheme = cfg["scheme"].upper()
    if scheme not in coding.SCHEMES:
        raise UsageError(f"unknown scheme {cfg['scheme']!r}; expected qchc or acc")
    if cfg["rate"] < 0:
        raise UsageError("--rate must be non-negative")
    res = coding.scheme_exponent(scheme, cfg["rate"])
    n = None
    if cfg["pe"] is not None:
        if not 0 < cfg["pe"] <= 1:
            raise UsageError("--pe must lie in (0, 1]")
        bl = coding.required_blocklength(scheme, cfg["rate"], cfg["pe"])
        n = bl.n if bl.attainable else "unattainable"
    return scheme, res, n


def cmd_exponent(cfg: dict) -> int:
    scheme, res, n = _coding_rows(cfg)
    header = ("scheme", "rate_bits_per_letter", "exponent", "blocklength_n")
    row = (scheme, cfg["rate"], res.exponent, n)
    if cfg["format"] == "json":
        emit(render_json(cfg, dict(zip(header, row)) | {"optimizing_rho": res.optimizing_rho}), cfg["output"])
    else:
        emit(render_csv(cfg, header, [row]), cfg["output"])
    return 0


def cmd_blocklength(cfg: dict) -> int:
    if cfg["pe"] is None:
        raise UsageError("--pe is required")
    return cmd_exponent(cfg)


COMMANDS = {
    "capacity": cmd_capacity,
    "superadd": cmd_superadd,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "exponent": cmd_exponent,
    "blocklength": cmd_blocklength,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trinecap", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="flat key = value parameter file")
        p.add_argument("--seed", type=int)
        p.add_argument("--output", "-o", help="write here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"))
        return p

    p = add("capacity", "single-letter capacity C1")
    p.add_argument("--letters", choices=sorted(LETTER_SETS))
    p.add_argument("--restarts", type=int)

    add("superadd", "pair-code information and super-additive gain")

    def noise_flags(p):
        p.add_argument("--visibility", type=float)
        p.add_argument("--background", type=float, help="stray counts/s per detector (default: 2%% rule)")
        p.add_argument("--dark", type=float, help="dark counts/s per detector")
        p.add_argument("--extinction", type=float, help="PBS extinction, 1 = ideal")
        p.add_argument("--duration", type=float, help="seconds per codeword")
        p.add_argument("--rate", type=float, help="photons/s entering the decoder")

    p = add("sweep", "mutual information against codeword rotation (degrees)")
    p.add_argument("--from", dest="from_", type=float)
    p.add_argument("--to", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--ideal", action="store_const", const=True)
    p.add_argument("--replicas", type=int)
    noise_flags(p)

    p = add("simulate", "photon counts for the channel-matrix histogram")
    p.add_argument("--codeword", help="00, 11, 22 or all")
    p.add_argument("--offset", type=float, help="codeword rotation in degrees")
    p.add_argument("--histogram", help="also write the histogram CSV here")
    noise_flags(p)

    for name, text in (("exponent", "random-coding error exponent"), ("blocklength", "code length for a target error")):
        p = add(name, text)
        p.add_argument("--scheme", type=str.lower, choices=("qchc", "acc"))
        p.add_argument("--rate", type=float, help="bits per letter")
        p.add_argument("--pe", type=float, help="target block error probability")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = effective_config(args.command, args)
        return COMMANDS[args.command](cfg)
    except (experiment.EstimationError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"trinecap {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, OSError, ValueError) as exc:
        print(f"trinecap {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
