"""Scan runners: delay response, pump-energy scan, and Monte Carlo g2 scan.

Each run writes CSV data files plus a manifest.json recording the config
snapshot, code version, timestamps, output files with row counts, and
per-scan diagnostics.  Data files are byte-identical across reruns with the
same config and seed; only the manifest timestamps differ.

CSV headers:
    delay scan   tau_ps,efficiency
    energy scan  energy_nJ,efficiency,noise_per_pulse
    g2 scan      energy_nJ,g2,g2_err,g2_expected,g2_input,status
                 plus a counts.csv with the flat per-point tally records.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

import numpy as np

from ._version import __version__
from .config import Scenario
from .errors import CurveShapeError, InsufficientStatisticsError
from .estimators import expected_g2_mixture, heralded_g2
from .expectations import expected_heralded_g2, expected_heralded_rates
from .montecarlo import chunk_seed, flat_record, simulate_pulses
from .shutter import ResponseCurve
from .shutter import energy_scan as shutter_energy_scan
from .shutter import fwhm, nonlinear_phase, switching_efficiency, total_response

MANIFEST_SCHEMA_VERSION = 1


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".12g")


def _write_csv(path, header, rows) -> int:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return len(rows)


def _write_manifest(out_dir, scenario: Scenario, started_at, outputs, diagnostics) -> str:
    manifest = {
        "schema_version": MANIFEST_SCHEMA_VERSION,
        "code_version": __version__,
        "scan_type": scenario.scan.type,
        "started_at": started_at,
        "finished_at": datetime.now(timezone.utc).isoformat(),
        "config": scenario.raw,
        "outputs": outputs,
        "diagnostics": diagnostics,
    }
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return path


def _prepare(scenario: Scenario, out_dir):
    out = out_dir if out_dir is not None else scenario.output_directory
    os.makedirs(out, exist_ok=True)
    return out, datetime.now(timezone.utc).isoformat()


def _split_indices(n: int, parts: int):
    bounds = np.linspace(0, n, parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def run_delay_scan(scenario: Scenario, out_dir=None, threads: int = 1) -> dict:
    """Total delay response over the configured grid; reports the FWHM."""
    out, started = _prepare(scenario, out_dir)
    scan = scenario.scan
    delays = scan.grid

    if threads > 1 and delays.size > 1:
        # per-element quadrature freezing makes the split bit-identical to one call
        chunks = _split_indices(delays.size, threads)
        eff = np.empty(delays.size)
        meta = {}
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                (a, b, pool.submit(
                    total_response, scenario.shutter, delays[a:b], scan.rel_tol, scenario.imperfection
                ))
                for a, b in chunks
            ]
            for a, b, fut in futures:
                part = fut.result()
                eff[a:b] = part.efficiency
                meta = part.metadata
        curve = ResponseCurve(delays, eff, meta)
    else:
        curve = total_response(scenario.shutter, delays, scan.rel_tol, scenario.imperfection)

    rows = [(tau * 1e12, e) for tau, e in zip(curve.delays_s, curve.efficiency)]
    csv_path = os.path.join(out, "response.csv")
    n_rows = _write_csv(csv_path, ["tau_ps", "efficiency"], rows)

    try:
        width_ps = fwhm(curve) * 1e12
    except CurveShapeError:
        width_ps = None
    diagnostics = {
        "fwhm_ps": width_ps,
        "peak_efficiency": float(curve.efficiency.max()) if curve.efficiency.size else 0.0,
        "rel_tol": scan.rel_tol,
        "walkoff_s_per_m": scenario.shutter.walkoff_s_per_m(),
    }
    manifest_path = _write_manifest(
        out, scenario, started, [{"path": "response.csv", "rows": n_rows}], diagnostics
    )
    return {"csv": csv_path, "manifest": manifest_path, "diagnostics": diagnostics}


def run_energy_scan(scenario: Scenario, out_dir=None, threads: int = 1) -> dict:
    """Switching efficiency and noise rate vs pump energy at zero delay."""
    out, started = _prepare(scenario, out_dir)
    scan = scenario.scan
    result = shutter_energy_scan(
        scenario.shutter, scan.grid, tau_s=0.0, rel_tol=scan.rel_tol,
        imperfection=scenario.imperfection,
    )
    noise = [scenario.noise.at(float(e)) for e in scan.grid]

    rows = [
        (e * 1e9, eff, nu)
        for e, eff, nu in zip(result.energies_j, result.efficiency, noise)
    ]
    csv_path = os.path.join(out, "energy_scan.csv")
    n_rows = _write_csv(csv_path, ["energy_nJ", "efficiency", "noise_per_pulse"], rows)

    diagnostics = {
        "kappa_rad_per_nj": result.kappa_rad_per_j * 1e-9,
        "rel_tol": scan.rel_tol,
        "imperfection": scenario.imperfection,
    }
    manifest_path = _write_manifest(
        out, scenario, started, [{"path": "energy_scan.csv", "rows": n_rows}], diagnostics
    )
    return {"csv": csv_path, "manifest": manifest_path, "diagnostics": diagnostics}


def _g2_noise_value(scenario: Scenario) -> float:
    if scenario.source.noise_statistics == "thermal":
        return 1.0 + 1.0 / scenario.source.noise_modes
    return 1.0


def _g2_point(scenario: Scenario, index: int, energy_j: float, g2_input: float):
    """One grid point of the g2 scan: Monte Carlo plus the mixture-model column."""
    scan = scenario.scan
    shutter = scenario.shutter
    cfg = dataclasses.replace(
        shutter, pump=dataclasses.replace(shutter.pump, energy_j=float(energy_j))
    )
    if energy_j > 0:
        phase = nonlinear_phase(cfg, 0.0, scan.rel_tol)
    else:
        phase = 0.0
    eta = scenario.imperfection * switching_efficiency(shutter.theta_deg, phase)
    nu = scenario.noise.at(float(energy_j))

    model = dataclasses.replace(
        scenario.source,
        signal_transmission=scenario.source.signal_transmission * eta,
        noise_mean=nu,
    )
    counts = simulate_pulses(model, scan.n_pulses, chunk_seed(scan.seed, index))

    n_si, n_noise_i = expected_heralded_rates(model)
    if n_si + n_noise_i > 0:
        g2_expected = expected_g2_mixture(n_si, n_noise_i, g2_input, _g2_noise_value(scenario))
    else:
        g2_expected = None

    try:
        estimate = heralded_g2(counts)
        row = (energy_j * 1e9, estimate.value, estimate.std_error, g2_expected, g2_input, "ok")
        estimates = {"g2": estimate.value, "g2_err": estimate.std_error}
    except InsufficientStatisticsError:
        row = (energy_j * 1e9, None, None, g2_expected, g2_input, "insufficient_statistics")
        estimates = {"g2": None, "g2_err": None}

    record = flat_record(counts, seed=None, model=model, estimates=estimates)
    record = {"energy_nJ": energy_j * 1e9, **record}
    return row, record


def run_g2_scan(scenario: Scenario, out_dir=None, threads: int = 1) -> dict:
    """Monte Carlo heralded g2 vs pump energy with the analytic mixture column.

    Grid point i draws from the sub-seed (seed, i); rerunning with the same
    config and seed reproduces the CSV outputs byte for byte.  Points with
    too few coincidences are flagged and the run continues.
    """
    out, started = _prepare(scenario, out_dir)
    scan = scenario.scan
    baseline_model = dataclasses.replace(scenario.source, noise_mean=0.0)
    g2_input = expected_heralded_g2(baseline_model)

    points = list(enumerate(scan.grid))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(
                pool.map(lambda item: _g2_point(scenario, item[0], item[1], g2_input), points)
            )
    else:
        results = [_g2_point(scenario, i, e, g2_input) for i, e in points]

    rows = [row for row, _ in results]
    records = [rec for _, rec in results]

    csv_path = os.path.join(out, "g2_scan.csv")
    n_rows = _write_csv(
        csv_path, ["energy_nJ", "g2", "g2_err", "g2_expected", "g2_input", "status"], rows
    )
    counts_path = os.path.join(out, "counts.csv")
    counts_header = list(records[0].keys())
    n_counts = _write_csv(counts_path, counts_header, [tuple(r.values()) for r in records])

    flagged = sum(1 for row in rows if row[-1] != "ok")
    diagnostics = {
        "mean_pairs": scenario.source.mean_pairs,
        "g2_input": g2_input,
        "g2_noise": _g2_noise_value(scenario),
        "seed": scan.seed,
        "n_pulses_per_point": scan.n_pulses,
        "flagged_points": flagged,
    }
    manifest_path = _write_manifest(
        out,
        scenario,
        started,
        [
            {"path": "g2_scan.csv", "rows": n_rows},
            {"path": "counts.csv", "rows": n_counts},
        ],
        diagnostics,
    )
    if flagged == len(rows):
        raise InsufficientStatisticsError(
            f"every grid point was starved of coincidences; tallies written to {counts_path}"
        )
    return {"csv": csv_path, "counts": counts_path, "manifest": manifest_path, "diagnostics": diagnostics}


def run_scan(scenario: Scenario, out_dir=None, threads: int = 1) -> dict:
    """Dispatch on the configured scan type."""
    runner = {
        "delay": run_delay_scan,
        "energy": run_energy_scan,
        "g2": run_g2_scan,
    }[scenario.scan.type]
    return runner(scenario, out_dir=out_dir, threads=threads)
