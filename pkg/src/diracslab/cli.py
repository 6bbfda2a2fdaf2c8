"""Command-line front end.

    python3 -m diracslab spectrum --config run.json --output table.csv
    python3 -m diracslab oracle-check --seed 0 --draws 1000

The configuration is a JSON object.  Angles are given in units of pi
(``0.5`` means pi/2).  Recognised keys::

    variant           "OnePhase(3)", "FourPhase", ...
    phases            list of independent angles, or {"rho", "mu", "sigma", "nu"}
    mass, energy, k, field, p_x, a_slab
    landau_level      Landau index n (spectrum: LandauLevel parameterization)
    fixed_energy      energy for the FixedEpsilon parameterization
    k_window          [k_min, k_max]
    root_selector     index of the tracked root, or null for all
    grid_points       initial k grid for the spectrum
    root_index        which K root a ``mode`` is built on
    landau_index      transverse level of a ``mode``
    y_points, z_points  grid of a ``mode``
    sweep             {"parameter": "field" | "a_slab", "values": [...]}
    seed, draws       randomized checks

Exit codes: 0 success, 2 bad configuration, 3 domain error, 4 failed
consistency check.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .boundary import numeric_roots, quartic_from_samples
from .catalog import closed_form_roots, multiset_distance
from .core import ONE_PHASE, PhaseConfig, PhysicalParams, VariantId
from .errors import ConsistencyError, DiracSlabError, DomainError, NotARootError
from .modes import assemble_phi, boundary_residual, certify_mode, current_Jz, default_y_grid
from .spectrum import (FixedEpsilon, LandauLevel, QuantizationProblem, SpectrumTable,
                       allowed_k, spectrum_sweep)
from .verify import oracle_check_all

COMMANDS = ("roots", "oracle-check", "spectrum", "mode", "sweep", "selftest")
SPECTRUM_HEADER = ["branch", "root_index", "k", "epsilon", "re_root", "im_root", "residual"]

KNOWN_KEYS = {
    "command", "variant", "phases", "mass", "energy", "k", "field", "p_x", "a_slab",
    "landau_level", "fixed_energy", "k_window", "root_selector", "grid_points",
    "root_index", "landau_index", "y_points", "z_points", "sweep", "seed", "draws",
}

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_CHECK = 0, 2, 3, 4


class ConfigError(Exception):
    """Malformed or unrecognised configuration."""


def fmt(x) -> str:
    """Round-trip representation with 17 significant digits."""
    return "%.17g" % (x + 0.0)  # no negative zero


# ----------------------------------------------------------------------------
# configuration

def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(cfg) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return cfg


def _num(cfg, key, default=None, kind=float):
    if key not in cfg or cfg[key] is None:
        if default is None:
            raise ConfigError(f"missing config key {key!r}")
        return default
    val = cfg[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{key!r} must be a number, got {val!r}")
    if kind is int:
        if float(val) != int(val):
            raise ConfigError(f"{key!r} must be an integer, got {val!r}")
        return int(val)
    return float(val)


def parse_variant(cfg) -> VariantId:
    text = cfg.get("variant", "OnePhase(1)")
    if not isinstance(text, str):
        raise ConfigError(f"variant must be a string, got {text!r}")
    try:
        return VariantId.parse(text)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def parse_phases(cfg, variant: VariantId) -> PhaseConfig:
    raw = cfg.get("phases", [0.0] * variant.n_params)
    if isinstance(raw, dict):
        if set(raw) != {"rho", "mu", "sigma", "nu"}:
            raise ConfigError("phases object needs exactly rho, mu, sigma, nu")
        vals = [raw[s] for s in ("rho", "mu", "sigma", "nu")]
        _check_numbers(vals, "phases")
        return PhaseConfig(*(math.pi * v for v in vals), variant=variant)
    if not isinstance(raw, list):
        raise ConfigError("phases must be a list or an object")
    _check_numbers(raw, "phases")
    return PhaseConfig.for_variant(variant, *(math.pi * v for v in raw))


def _check_numbers(vals, key):
    for v in vals:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{key!r} entries must be numbers, got {v!r}")


def parse_params(cfg) -> PhysicalParams:
    return PhysicalParams(
        mass=_num(cfg, "mass", 1.0), energy=_num(cfg, "energy", 2.0), k=_num(cfg, "k", 0.5),
        a_slab=_num(cfg, "a_slab", 1.0), p_x=_num(cfg, "p_x", 0.0), field=_num(cfg, "field", 1.0))


def parse_problem(cfg) -> QuantizationProblem:
    variant = parse_variant(cfg)
    phases = parse_phases(cfg, variant)
    if "fixed_energy" in cfg and "landau_level" in cfg:
        raise ConfigError("give either fixed_energy or landau_level, not both")
    if "fixed_energy" in cfg:
        par = FixedEpsilon(_num(cfg, "fixed_energy"))
    else:
        par = LandauLevel(_num(cfg, "landau_level", 1, kind=int))
    window = cfg.get("k_window", [0.05, 10.0])
    if not (isinstance(window, list) and len(window) == 2):
        raise ConfigError("k_window must be a two-element list")
    _check_numbers(window, "k_window")
    sel = cfg.get("root_selector")
    if sel is not None:
        sel = _num(cfg, "root_selector", kind=int)
    return QuantizationProblem(
        variant, phases, _num(cfg, "mass", 1.0), field=_num(cfg, "field", 1.0),
        parameterization=par, a_slab=_num(cfg, "a_slab", 1.0),
        k_window=(float(window[0]), float(window[1])), root_selector=sel)


# ----------------------------------------------------------------------------
# serialization

def spectrum_rows(table: SpectrumTable):
    for r in table.rows:
        yield [str(r.branch), str(r.root_index), fmt(r.k), fmt(r.epsilon),
               fmt(r.root_value.real), fmt(r.root_value.imag), fmt(r.residual)]


def _table_json(table: SpectrumTable) -> dict:
    return {
        "rows": [dict(zip(SPECTRUM_HEADER, row)) for row in spectrum_rows(table)],
        "excluded": [{"k": fmt(k), "reason": why} for k, why in table.excluded],
        "rejected": [fmt(k) for k in table.rejected],
        "error": table.error,
    }


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ----------------------------------------------------------------------------
# commands; each returns (text, exit status)

def cmd_roots(cfg, fmt_out):
    variant = parse_variant(cfg)
    phases = parse_phases(cfg, variant)
    params = parse_params(cfg)
    roots = closed_form_roots(variant, params, phases)
    cat = roots.k_roots()
    orc = numeric_roots(quartic_from_samples(params, phases))
    # pair each catalog root with its nearest oracle root, greedily
    pool = list(orc)
    pairs = []
    for c in cat:
        j = int(np.argmin([abs(c - o) for o in pool]))
        pairs.append((c, pool.pop(j)))
    dist = multiset_distance(cat, orc)
    status = EXIT_OK if dist < 1e-8 else EXIT_CHECK
    if fmt_out == "json":
        return _json({
            "variant": str(variant),
            "kind": roots.kind.value,
            "entries": [{"re": fmt(e.value.real), "im": fmt(e.value.imag),
                         "multiplicity": e.multiplicity} for e in roots.entries],
            "pairs": [{"catalog": [fmt(c.real), fmt(c.imag)], "oracle": [fmt(o.real), fmt(o.imag)],
                       "distance": fmt(abs(c - o))} for c, o in pairs],
            "max_distance": fmt(dist),
        }), status
    rows = [[str(i), fmt(c.real), fmt(c.imag), fmt(o.real), fmt(o.imag), fmt(abs(c - o))]
            for i, (c, o) in enumerate(pairs)]
    return _csv(["index", "re_catalog", "im_catalog", "re_oracle", "im_oracle", "distance"],
                rows), status


def cmd_oracle_check(cfg, fmt_out, seed, draws):
    stats = oracle_check_all(draws, seed)
    status = EXIT_OK if all(s.passed for s in stats) else EXIT_CHECK
    worst = max(s.max_root_distance for s in stats)
    verdict = "<" if status == EXIT_OK else "exceeds"
    summary = f"max root deviation {worst:.3e} {verdict} tolerance over {draws} draws per variant"
    if fmt_out == "json":
        return _json({
            "seed": seed, "draws": draws, "summary": summary,
            "variants": [{"variant": str(s.variant), "max_root_distance": fmt(s.max_root_distance),
                          "max_unit_deviation": fmt(s.max_unit_deviation),
                          "max_det_ratio": fmt(s.max_det_ratio), "root_tol": fmt(s.root_tol),
                          "passed": s.passed} for s in stats],
        }), status, summary
    rows = [[str(s.variant), fmt(s.max_root_distance), fmt(s.max_unit_deviation),
             fmt(s.max_det_ratio), fmt(s.root_tol), "pass" if s.passed else "FAIL"]
            for s in stats]
    text = _csv(["variant", "max_root_distance", "max_unit_deviation", "max_det_ratio",
                 "root_tol", "status"], rows)
    return text, status, summary


def cmd_spectrum(cfg, fmt_out):
    problem = parse_problem(cfg)
    table = allowed_k(problem, _num(cfg, "grid_points", 256, kind=int))
    if fmt_out == "json":
        return _json(_table_json(table)), EXIT_OK
    return _csv(SPECTRUM_HEADER, spectrum_rows(table)), EXIT_OK


def cmd_sweep(cfg, fmt_out):
    problem = parse_problem(cfg)
    sweep = cfg.get("sweep")
    if not isinstance(sweep, dict) or set(sweep) != {"parameter", "values"}:
        raise ConfigError('sweep needs {"parameter": ..., "values": [...]}')
    values = sweep["values"]
    if not isinstance(values, list):
        raise ConfigError("sweep values must be a list")
    _check_numbers(values, "sweep.values")
    tables = spectrum_sweep(problem, sweep["parameter"], values,
                            _num(cfg, "grid_points", 256, kind=int))
    if fmt_out == "json":
        return _json([{"parameter": sweep["parameter"], "value": fmt(v), **_table_json(t)}
                      for v, t in zip(values, tables)]), EXIT_OK
    rows = []
    for i, (v, t) in enumerate(zip(values, tables)):
        for r in spectrum_rows(t):
            rows.append([str(i), fmt(v)] + r)
    return _csv(["sweep_index", "sweep_value"] + SPECTRUM_HEADER, rows), EXIT_OK


def cmd_mode(cfg, fmt_out):
    variant = parse_variant(cfg)
    phases = parse_phases(cfg, variant)
    params = parse_params(cfg)
    roots = closed_form_roots(variant, params, phases).k_roots()
    idx = _num(cfg, "root_index", 0, kind=int)
    if not 0 <= idx < len(roots):
        raise DomainError(f"root_index must be in 0..{len(roots) - 1}", field="root_index")
    mode = certify_mode(params, phases, roots[idx], _num(cfg, "landau_index", 0, kind=int))
    y = default_y_grid(mode, _num(cfg, "y_points", 41, kind=int))
    z = np.linspace(-mode.a_slab, mode.a_slab, _num(cfg, "z_points", 21, kind=int))
    Y, Z = np.meshgrid(y, z, indexing="ij")
    phi = assemble_phi(mode, Y, Z)
    jz = current_Jz(mode, Y, Z)
    report = boundary_residual(mode)
    status = EXIT_OK if report.residual < 1e-8 else EXIT_CHECK
    if fmt_out == "json":
        return _json({
            "variant": str(variant), "K_root": [fmt(mode.K_root.real), fmt(mode.K_root.imag)],
            "a_slab": fmt(mode.a_slab),
            "A": [[fmt(a.real), fmt(a.imag)] for a in mode.A],
            "boundary_residual": fmt(report.residual),
            "interior_zero": report.interior_zero, "lower_zero": report.lower_zero,
            "grid": [{"y": fmt(Y[i, j]), "z": fmt(Z[i, j]),
                      "phi": [[fmt(phi[c, i, j].real), fmt(phi[c, i, j].imag)] for c in range(4)],
                      "jz": fmt(jz[i, j])}
                     for i in range(Y.shape[0]) for j in range(Y.shape[1])],
        }), status
    header = ["y", "z"] + [f"{part}_phi{c}" for c in range(1, 5) for part in ("re", "im")] + ["jz"]
    rows = []
    for i in range(Y.shape[0]):
        for j in range(Y.shape[1]):
            row = [fmt(Y[i, j]), fmt(Z[i, j])]
            for c in range(4):
                row += [fmt(phi[c, i, j].real), fmt(phi[c, i, j].imag)]
            rows.append(row + [fmt(jz[i, j])])
    return _csv(header, rows), status


def selftest(seed: int = 0, draws: int = 50):
    """Quick end-to-end checks; returns a list of ``(name, passed, detail)``."""
    results = []
    stats = oracle_check_all(draws, seed)
    for s in stats:
        results.append((f"oracle {s.variant}", s.passed,
                        f"root {s.max_root_distance:.2e}, unit {s.max_unit_deviation:.2e}"))
    prob = QuantizationProblem(ONE_PHASE[0], PhaseConfig.for_variant(ONE_PHASE[0], 0.3), 1.0,
                               field=1.0, k_window=(0.1, 10 * math.pi + 0.5), root_selector=0)
    ks = allowed_k(prob).ks()
    dev = float(np.max(np.abs(ks - math.pi * np.arange(1, 11)))) if len(ks) == 10 else math.inf
    results.append(("spectrum k = pi n", dev < 1e-10, f"max deviation {dev:.2e}"))
    rng = np.random.default_rng(seed)
    from .verify import random_draw
    worst = 0.0
    for variant in (ONE_PHASE[0], ONE_PHASE[1], VariantId.parse("FourPhase")):
        for n in range(3):
            params, phases = random_draw(rng, variant)
            params = params.replace(field=1.0)
            K = closed_form_roots(variant, params, phases).k_roots()[0]
            worst = max(worst, boundary_residual(certify_mode(params, phases, K, n)).residual)
    results.append(("wall current", worst < 1e-8, f"max residual {worst:.2e}"))
    return results


def cmd_selftest(cfg, fmt_out, seed, draws):
    results = selftest(seed, draws)
    status = EXIT_OK if all(ok for _, ok, _ in results) else EXIT_CHECK
    if fmt_out == "json":
        return _json([{"check": n, "passed": ok, "detail": d} for n, ok, d in results]), status
    return _csv(["check", "status", "detail"],
                [[n, "pass" if ok else "FAIL", d] for n, ok, d in results]), status


# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diracslab", description=__doc__.split("\n")[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON configuration file")
    ap.add_argument("--output", help="write results here instead of stdout")
    ap.add_argument("--format", choices=("csv", "json"), default=None)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--draws", type=int, default=None)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        cfg = load_config(args.config)
        if "command" in cfg and cfg["command"] != args.command:
            raise ConfigError(f"config command {cfg['command']!r} differs from {args.command!r}")
        seed = args.seed if args.seed is not None else _num(cfg, "seed", 0, kind=int)
        draws = args.draws if args.draws is not None else _num(cfg, "draws", 1000, kind=int)
        if seed < 0 or draws < 1:
            raise ConfigError("seed must be >= 0 and draws >= 1")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    fmt_out = args.format or "csv"
    summary = None
    try:
        if args.command == "roots":
            text, status = cmd_roots(cfg, fmt_out)
        elif args.command == "oracle-check":
            text, status, summary = cmd_oracle_check(cfg, fmt_out, seed, draws)
        elif args.command == "spectrum":
            text, status = cmd_spectrum(cfg, fmt_out)
        elif args.command == "sweep":
            text, status = cmd_sweep(cfg, fmt_out)
        elif args.command == "mode":
            text, status = cmd_mode(cfg, fmt_out)
        else:
            text, status = cmd_selftest(cfg, fmt_out, seed,
                                        args.draws if args.draws is not None else 50)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as exc:
        print(f"domain error in {exc.field or 'input'}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConsistencyError, NotARootError) as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except DiracSlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if summary:
        print(summary, file=sys.stderr if not args.output else sys.stdout)
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
