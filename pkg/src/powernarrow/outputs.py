"""CSV/JSON artifact writers and readers.

All files speak ordinary frequency in MHz.  CSV files carry a header row,
decimal points, LF line endings, and probabilities to 9 significant digits.
JSON files embed full-precision floats, so parse(write(x)) is exact there.

Every artifact carries provenance: JSON documents embed a ``metadata`` block
with the resolved run configuration and a sha256 over the canonical ``data``
payload; CSV files get a ``<name>.meta.json`` sidecar with the same config
and the sha256 of the CSV bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path

import numpy as np

from .spectro import Landscape, SpectralProfile
from .units import radns_to_mhz


def _sig9(value: float) -> str:
    return f"{value:.9g}"


def _sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _write_csv_with_sidecar(path, header, rows, config, schema) -> Path:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    text = buf.getvalue()
    out = _write_text(path, text)
    meta = {
        "schema": schema,
        "config": config or {},
        "content_sha256": _sha256_bytes(text.encode("utf-8")),
    }
    _write_text(out.with_suffix(out.suffix + ".meta.json"),
                json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return out


def write_json_document(path, data: dict, config=None, schema: str = "") -> Path:
    """Write {"metadata": {...}, "data": ...} with a payload hash embedded."""
    doc = {
        "metadata": {
            "schema": schema,
            "config": config or {},
            "content_sha256": _sha256_bytes(_canonical_json(data).encode("utf-8")),
        },
        "data": data,
    }
    return _write_text(path, json.dumps(doc, indent=2) + "\n")


def read_json_document(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return doc["data"]


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------

def profile_rows(profile: SpectralProfile, area_over_pi: float):
    d_mhz = radns_to_mhz(profile.detunings)
    return [(_sig9(area_over_pi), _sig9(d), _sig9(p))
            for d, p in zip(d_mhz, profile.probabilities)]


def write_profiles_csv(path, labeled_profiles, config=None) -> Path:
    """labeled_profiles: iterable of (area_over_pi, SpectralProfile)."""
    rows = []
    for area_over_pi, profile in labeled_profiles:
        rows.extend(profile_rows(profile, area_over_pi))
    return _write_csv_with_sidecar(path, ["area_over_pi", "delta_MHz", "p"],
                                   rows, config, "profile")


def profiles_payload(labeled_profiles) -> dict:
    out = []
    for area_over_pi, profile in labeled_profiles:
        out.append({
            "area_over_pi": float(area_over_pi),
            "area_rad": float(profile.area),
            "delta_MHz": [float(x) for x in radns_to_mhz(profile.detunings)],
            "p": [float(x) for x in profile.probabilities],
        })
    return {"profiles": out}


def write_profiles_json(path, labeled_profiles, config=None) -> Path:
    return write_json_document(path, profiles_payload(labeled_profiles),
                               config, "profile")


def read_profiles_json(path):
    data = read_json_document(path)
    return [(entry["area_over_pi"],
             np.asarray(entry["delta_MHz"]), np.asarray(entry["p"]))
            for entry in data["profiles"]]


def read_profiles_csv(path):
    """Returns a list of (area_over_pi, delta_MHz array, p array)."""
    groups: dict = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            key = float(row["area_over_pi"])
            groups.setdefault(key, []).append((float(row["delta_MHz"]), float(row["p"])))
    out = []
    for key, pairs in groups.items():
        d = np.array([a for a, _ in pairs])
        p = np.array([b for _, b in pairs])
        out.append((key, d, p))
    return out


# ---------------------------------------------------------------------------
# Landscapes and slices
# ---------------------------------------------------------------------------

def write_landscape_csv(path, landscape: Landscape, config=None) -> Path:
    r_mhz = radns_to_mhz(landscape.rabi_amplitudes)
    d_mhz = radns_to_mhz(landscape.detunings)
    rows = []
    for i, r in enumerate(r_mhz):
        for j, d in enumerate(d_mhz):
            rows.append((_sig9(r), _sig9(d), _sig9(landscape.probabilities[i, j])))
    return _write_csv_with_sidecar(path, ["omega0_MHz", "delta_MHz", "p"],
                                   rows, config, "landscape")


def landscape_payload(landscape: Landscape) -> dict:
    return {
        "omega0_MHz": [float(x) for x in radns_to_mhz(landscape.rabi_amplitudes)],
        "delta_MHz": [float(x) for x in radns_to_mhz(landscape.detunings)],
        "p": [[float(x) for x in row] for row in landscape.probabilities],
    }


def write_landscape_json(path, landscape: Landscape, config=None) -> Path:
    return write_json_document(path, landscape_payload(landscape), config, "landscape")


def read_landscape_csv(path):
    """Returns (omega0_MHz array, delta_MHz array, probability matrix)."""
    triples = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            triples.append((float(row["omega0_MHz"]), float(row["delta_MHz"]),
                            float(row["p"])))
    r = np.unique([t[0] for t in triples])
    d = np.unique([t[1] for t in triples])
    mat = np.full((r.size, d.size), np.nan)
    ri = {v: i for i, v in enumerate(r)}
    di = {v: i for i, v in enumerate(d)}
    for rv, dv, p in triples:
        mat[ri[rv], di[dv]] = p
    return r, d, mat


def write_slice_csv(path, rabi_amplitudes, probabilities, config=None) -> Path:
    r_mhz = radns_to_mhz(np.asarray(rabi_amplitudes))
    rows = [(_sig9(r), _sig9(p)) for r, p in zip(r_mhz, probabilities)]
    return _write_csv_with_sidecar(path, ["omega0_MHz", "p"], rows, config, "slice")


# ---------------------------------------------------------------------------
# Width tables and scaling fits
# ---------------------------------------------------------------------------

def write_fwhm_table_csv(path, rows, config=None) -> Path:
    """rows: iterable of dicts with keys n, area_over_pi, fwhm_MHz,
    ratio_pi_over_7pi (ratio repeated on every row of its n)."""
    table = [(_sig9(r["n"]), _sig9(r["area_over_pi"]), _sig9(r["fwhm_MHz"]),
              _sig9(r["ratio_pi_over_7pi"])) for r in rows]
    return _write_csv_with_sidecar(
        path, ["n", "area_over_pi", "fwhm_MHz", "ratio_pi_over_7pi"],
        table, config, "fwhm_table")


def read_fwhm_table_csv(path):
    out = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            out.append({k: float(v) for k, v in row.items()})
    return out


def scaling_payload(entries) -> dict:
    """entries: iterable of (n, points[(omega0, fwhm)], ScalingFit), rad/ns in."""
    fits = []
    for n, points, fit in entries:
        fits.append({
            "n": float(n),
            "nu_hat": fit.exponent,
            "intercept": fit.intercept,
            "r_squared": fit.r_squared,
            "points": [{"omega0_MHz": float(radns_to_mhz(a)),
                        "fwhm_MHz": float(radns_to_mhz(w))} for a, w in points],
        })
    return {"fits": fits}


def write_scaling_json(path, entries, config=None) -> Path:
    return write_json_document(path, scaling_payload(entries), config, "scaling")


def write_scaling_points_csv(path, rows, config=None) -> Path:
    """rows: dicts with keys n, area_over_pi, omega0_MHz, fwhm_MHz."""
    table = [(_sig9(r["n"]), _sig9(r["area_over_pi"]), _sig9(r["omega0_MHz"]),
              _sig9(r["fwhm_MHz"])) for r in rows]
    return _write_csv_with_sidecar(
        path, ["n", "area_over_pi", "omega0_MHz", "fwhm_MHz"],
        table, config, "scaling_points")


def write_cutoff_summary_csv(path, rows, config=None) -> Path:
    """rows: dicts with keys eps_cut, area_over_pi, fwhm_MHz."""
    table = [(_sig9(r["eps_cut"]), _sig9(r["area_over_pi"]), _sig9(r["fwhm_MHz"]))
             for r in rows]
    return _write_csv_with_sidecar(path, ["eps_cut", "area_over_pi", "fwhm_MHz"],
                                   table, config, "cutoff_study")


# ---------------------------------------------------------------------------
# Hardware waveform export
# ---------------------------------------------------------------------------

def samples_payload(waveform, scale: float, shape_name: str, n, width: float,
                    cutoff_fraction: float, area_rad: float) -> dict:
    amplitudes = np.asarray(waveform.samples, dtype=float) / scale
    return {
        "dt_ns": waveform.dt,
        "samples": [float(a) for a in amplitudes],
        "metadata": {
            "shape": shape_name,
            "n": None if n is None else float(n),
            "T_ns": float(width),
            "cut": float(cutoff_fraction),
            "area_rad": float(area_rad),
            "scale_radns": float(scale),
            "start_time_ns": float(waveform.start_time),
        },
    }


def write_samples_json(path, payload: dict, config=None) -> Path:
    return write_json_document(path, payload, config, "samples")


def read_samples_json(path) -> dict:
    return read_json_document(path)
