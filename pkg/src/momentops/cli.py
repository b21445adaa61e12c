"""Configuration-driven runs: moments, classification, profiles, spectra.

A run is described by one JSON document (strict: unknown keys are rejected
so configs stay reproducible), executed task by task, and emitted as
``report.json`` plus CSV profile files with 17-significant-digit values so
regression runs round-trip exactly.

Exit codes: 0 success, 2 invalid configuration, 3 a requested operator was
classified not well defined (the report is still written), 4 numeric
failure.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._validation import check_index, check_positive, check_real
from .criteria import (Verdict, boundedness_profile, carleson_check,
                       classify_growth, hankel_section_svd, lpq_row_norms,
                       moment_decay_fit, nuclear_bound_wiener, _jsonable)
from .exceptions import (ConfigurationError, NotWellDefinedError,
                         QuadratureError)
from .measures import DEFAULT_TRUNCATION, Measure
from .operators import integral_apply
from .solid import hull_mapping_check, solid_core_norm, solid_hull_norm
from .spaces import (MAX_LEVEL, RadialGrid, TaylorPolynomial, Weight,
                     growth_witness)

TASKS = ("moments", "classify", "profile", "svd", "solid", "nuclear")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NOT_WELL_DEFINED = 3
EXIT_NUMERIC = 4


@dataclass
class RunConfig:
    """Validated run configuration."""

    measure: Measure
    gamma: float = None
    delta: float = 0.0
    p: float = 2.0
    q: float = 2.0
    truncation: int = DEFAULT_TRUNCATION
    levels: int = MAX_LEVEL
    angles: int = 64
    svd_size: int = 256
    tasks: tuple = ("moments", "classify")
    output_dir: str = "."
    seed: int = 0
    witness_samples: int = 0
    tolerances: dict = field(default_factory=dict)

    def echo(self):
        return {
            "measure": self.measure.spec_dict(),
            "space": {"gamma": self.gamma, "delta": self.delta},
            "sequence": {"p": self.p, "q": self.q},
            "truncation": self.truncation,
            "grid": {"levels": self.levels, "angles": self.angles},
            "svd_size": self.svd_size,
            "tasks": list(self.tasks),
            "output_dir": self.output_dir,
            "seed": self.seed,
            "witness_samples": self.witness_samples,
            "tolerances": dict(self.tolerances),
        }


def _take(mapping, allowed, where):
    unknown = set(mapping) - set(allowed)
    if unknown:
        raise ConfigurationError(
            f"unknown keys in {where}: {sorted(unknown)}")


def parse_config(text):
    """Parse and validate a JSON run configuration."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(
            f"malformed JSON at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ConfigurationError("configuration must be a JSON object")
    _take(doc, {"measure", "space", "sequence", "truncation", "grid",
                "svd_size", "tasks", "output_dir", "seed",
                "witness_samples", "tolerances"}, "configuration")
    if "measure" not in doc:
        raise ConfigurationError("configuration needs a 'measure' entry")
    cfg = RunConfig(measure=Measure.from_spec(doc["measure"]))

    space = doc.get("space", {})
    _take(space, {"gamma", "delta"}, "space")
    if "gamma" in space:
        cfg.gamma = check_positive(space["gamma"], "space.gamma")
    if "delta" in space:
        cfg.delta = check_real(space["delta"], "space.delta")

    seq = doc.get("sequence", {})
    _take(seq, {"p", "q"}, "sequence")
    cfg.p = check_real(seq.get("p", cfg.p), "sequence.p")
    cfg.q = check_real(seq.get("q", cfg.q), "sequence.q")
    if cfg.p < 1 or cfg.q < 1:
        raise ConfigurationError("sequence exponents must be >= 1")

    cfg.truncation = check_index(doc.get("truncation", cfg.truncation),
                                 "truncation", minimum=8)
    grid = doc.get("grid", {})
    _take(grid, {"levels", "angles"}, "grid")
    cfg.levels = check_index(grid.get("levels", cfg.levels), "grid.levels",
                             minimum=4)
    if cfg.levels > MAX_LEVEL:
        raise ConfigurationError(f"grid.levels capped at {MAX_LEVEL}")
    cfg.angles = check_index(grid.get("angles", cfg.angles), "grid.angles",
                             minimum=1)
    cfg.svd_size = check_index(doc.get("svd_size", cfg.svd_size), "svd_size",
                               minimum=2)

    tasks = doc.get("tasks", list(cfg.tasks))
    if not isinstance(tasks, list) or not tasks:
        raise ConfigurationError("tasks must be a non-empty list")
    for t in tasks:
        if t not in TASKS:
            raise ConfigurationError(
                f"unknown task {t!r}; available: {', '.join(TASKS)}")
    cfg.tasks = tuple(dict.fromkeys(tasks))

    out = doc.get("output_dir", cfg.output_dir)
    if not isinstance(out, str):
        raise ConfigurationError("output_dir must be a string")
    cfg.output_dir = out
    cfg.seed = check_index(doc.get("seed", 0), "seed")
    cfg.witness_samples = check_index(doc.get("witness_samples", 0),
                                      "witness_samples")
    tol = doc.get("tolerances", {})
    _take(tol, {"abel_rel", "quadrature_rtol"}, "tolerances")
    for k, v in tol.items():
        cfg.tolerances[k] = check_positive(v, f"tolerances.{k}")

    if ("classify" in cfg.tasks or "profile" in cfg.tasks
            or "solid" in cfg.tasks) and cfg.gamma is None:
        raise ConfigurationError(
            "tasks classify/profile/solid need space.gamma")
    if cfg.gamma is not None and cfg.delta <= -cfg.gamma:
        raise ConfigurationError("space.delta must exceed -space.gamma")
    return cfg


def _write_csv(path, left, right):
    lines = ["grid_value,criterion_value"]
    lines += [f"{float(a):.17g},{float(b):.17g}" for a, b in zip(left, right)]
    path.write_text("\n".join(lines) + "\n")
    return path.name


def run(cfg, out_dir=None):
    """Execute the configured tasks; returns (report dict, exit code)."""
    out = Path(out_dir if out_dir is not None else cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = {"config": cfg.echo(), "results": {}, "files": []}
    exit_code = EXIT_OK

    ms = cfg.measure.moments(max(cfg.truncation, 2 * cfg.svd_size))
    for task in cfg.tasks:
        if task == "moments":
            report["results"]["moments"] = _task_moments(cfg, ms, out, report)
        elif task == "classify":
            res = _task_classify(cfg)
            report["results"]["classify"] = res
            if res["well_defined"] == "no":
                exit_code = EXIT_NOT_WELL_DEFINED
        elif task == "profile":
            res = _task_profile(cfg, out, report)
            report["results"]["profile"] = res
            if res.get("well_defined") == "no":
                exit_code = EXIT_NOT_WELL_DEFINED
        elif task == "svd":
            report["results"]["svd"] = _task_svd(cfg, ms, out, report)
        elif task == "solid":
            report["results"]["solid"] = _task_solid(cfg, ms, out, report)
        elif task == "nuclear":
            report["results"]["nuclear"] = _task_nuclear(cfg, ms)

    report["exit_code"] = exit_code
    (out / "report.json").write_text(
        json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n")
    return report, exit_code


def _task_moments(cfg, ms, out, report):
    n = np.arange(cfg.truncation + 1)
    name = _write_csv(out / "moments.csv", n, ms.values[:cfg.truncation + 1])
    report["files"].append(name)
    summary = {
        "truncation": cfg.truncation,
        "total_mass": ms.total_mass,
        "quadrature_error_bound": ms.quadrature_error_bound,
        "first": ms.values[:8].tolist(),
        "last": float(ms.values[cfg.truncation]),
    }
    try:
        fit = moment_decay_fit(ms, window=(16, cfg.truncation))
        summary["decay"] = {"exponent": fit.exponent,
                            "amplitude": fit.amplitude,
                            "residual": fit.residual}
    except ConfigurationError:
        summary["decay"] = None
    return summary


def _task_classify(cfg):
    rep = classify_growth(cfg.measure, cfg.gamma, cfg.delta,
                          truncation=cfg.truncation)
    return rep.to_dict()


def _task_profile(cfg, out, report):
    v = Weight.standard(cfg.gamma)
    target = cfg.gamma + cfg.delta
    w = Weight.standard(target) if target > 0 else Weight.constant_one()
    res = {"gamma": cfg.gamma, "delta": cfg.delta}
    try:
        prof = boundedness_profile(cfg.measure, v, w, levels=cfg.levels)
    except NotWellDefinedError as exc:
        res["well_defined"] = "no"
        res["evidence"] = {"graded_partials": exc.evidence.partials.tolist()}
        return res
    res["well_defined"] = "yes"
    name = _write_csv(out / "profile_boundedness.csv", prof.radii, prof.values)
    report["files"].append(name)
    res["boundedness"] = {"sup": prof.sup, "last": prof.last,
                          "tail_slope": prof.tail_slope,
                          "file": name}
    car = carleson_check(cfg.measure, 1.0 - cfg.delta)
    name = _write_csv(out / "profile_carleson.csv",
                      car.profile.radii, car.profile.values)
    report["files"].append(name)
    res["carleson"] = {"s": car.s, "constant": car.constant,
                       "bounded": car.bounded.value,
                       "vanishing": car.vanishing_verdict.value,
                       "file": name}
    if cfg.witness_samples > 0:
        res["witness_max_ratio"] = _witness_ratio(cfg, v, w, prof)
    return res


def _witness_ratio(cfg, v, w, prof):
    """Largest grid ratio ||I f||_w / (||f||_v * sup profile) over random
    non-negative test functions; stays below 1 up to quadrature slack."""
    rng = np.random.default_rng(cfg.seed)
    grid = RadialGrid(levels=min(cfg.levels, 12))
    radii = grid.radii
    fine = np.linspace(0.0, radii[-1], 4096)
    worst = 0.0
    for _ in range(cfg.witness_samples):
        f = TaylorPolynomial(rng.random(33), nonneg=True)
        norm = float(np.max(v.value(fine) * f.eval(fine)))
        img = integral_apply(cfg.measure, f, radii)
        val = float(np.max(w.value(radii) * np.abs(img)))
        worst = max(worst, val / (norm * prof.sup))
    return worst


def _task_svd(cfg, ms, out, report):
    sv = hankel_section_svd(ms, cfg.svd_size)
    name = _write_csv(out / "profile_spectrum.csv",
                      np.arange(1, len(sv) + 1), sv)
    report["files"].append(name)
    return {"section_size": cfg.svd_size, "trace": float(sv.sum()),
            "top": sv[:8].tolist(), "file": name}


def _task_solid(cfg, ms, out, report):
    witness = growth_witness(cfg.gamma, cfg.truncation // 2)
    hull = solid_hull_norm(witness.coeffs, cfg.gamma)
    core = solid_core_norm(witness.coeffs, cfg.gamma)
    res = {"witness_gamma": cfg.gamma,
           "hull_sup": hull.sup, "core_sup": core.sup}
    name = _write_csv(out / "profile_solid_hull.csv", hull.block_starts,
                      hull.values)
    report["files"].append(name)
    res["hull_file"] = name
    name = _write_csv(out / "profile_solid_core.csv", core.block_starts,
                      core.values)
    report["files"].append(name)
    res["core_file"] = name
    if cfg.gamma >= 0.5:
        chk = hull_mapping_check(ms, witness.coeffs[:len(ms) // 2 + 1],
                                 cfg.gamma)
        res["mapping"] = {"weighted_l1": chk.weighted_l1,
                          "bound_ok": chk.bound_ok,
                          "image_block_sup": chk.image_blocks.sup}
    return res


def _task_nuclear(cfg, ms):
    bound = nuclear_bound_wiener(ms)
    rows = lpq_row_norms(ms, cfg.p, cfg.q)
    return {
        "moment_sum": bound.partial,
        "tail_estimate": None if math.isinf(bound.tail_estimate)
        else bound.tail_estimate,
        "converged": bound.verdict.value,
        "row_norms": {
            "p": cfg.p, "q": cfg.q,
            "q_summable": rows.verdict.value,
            "decay_exponent": rows.decay_exponent,
            "condition_value": rows.condition_value,
            "condition_ok": rows.condition_ok,
        },
    }


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="momentops",
        description="Moment-kernel operator toolkit: classification and "
                    "profile runs driven by a JSON configuration.")
    parser.add_argument("--config", required=True, help="path to the JSON run configuration")
    parser.add_argument("--out", default=None, help="output directory (overrides the config)")
    parser.add_argument("--task", action="append", default=None,
                        help="task to run (repeatable; overrides the config)")
    parser.add_argument("--truncation", type=int, default=None,
                        help="moment truncation override")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for randomized witness fixtures")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = parse_config(text)
        if args.task:
            for t in args.task:
                if t not in TASKS:
                    raise ConfigurationError(f"unknown task {t!r}")
            cfg.tasks = tuple(dict.fromkeys(args.task))
        if args.truncation is not None:
            cfg.truncation = check_index(args.truncation, "truncation",
                                         minimum=8)
        if args.seed is not None:
            cfg.seed = check_index(args.seed, "seed")
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        _, code = run(cfg, out_dir=args.out)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return code


if __name__ == "__main__":
    sys.exit(main())
