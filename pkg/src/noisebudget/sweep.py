"""Sweep configuration, deterministic evaluation, and table serialization.

The config format is a flat key = value text document (UTF-8, '#' comments).
Documented keys:

    rho_min, rho_max      grid bounds (log-symmetric: bounds on |rho|, > 0)
    rho_count             number of grid points (>= 2)
    rho_spacing           linear (default) | log-symmetric
    powers                comma-separated normalized powers, each > 0
    angles_deg            comma-separated homodyne angles in degrees
    epsilon               quantum efficiency (default 1)
    n_th                  thermal occupation (default 0)
    readout               homodyne (default) | synodyne | variational | stitched
    beta, synodyne_phi_deg   synodyne LO ratio and phase
    stitch_angles_deg     candidate angles for stitched readout
    c_aa, c_pp            fractional classical noise (default 0)
    kappa_hz, omega_m_hz, gamma_hz   cavity/mode frequencies in Hz,
                          required only when classical noise is nonzero

Angles and ordinary frequencies (Hz) are converted to radians and rad/s at
this boundary; everything below works in angular units.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import __version__
from .core import Detection, MechanicalMode, OpticalCavity, omega_from_rho
from .errors import ParameterError
from .limits import fixed_angle_spectrum, phi_opt, sql_psd, stitch_quadratures
from .spectra import (
    ClassicalNoise,
    SpectrumComponents,
    classical_noise_displacement,
    displacement_psd,
)
from .synodyne import SynodyneLO, synodyne_components

NORMALIZATION_STATEMENT = (
    "dimensionless displacement PSD: zero-point motion contributes 1 on "
    "mechanical resonance; probe power p is normalized to the on-resonance "
    "SQL power; total_over_sql divides by the SQL added noise "
    "1/sqrt(1+rho^2)"
)

COLUMNS = (
    "rho",
    "phi_used",
    "p",
    "s_m",
    "s_ii",
    "s_ff",
    "s_corr",
    "s_ln",
    "total",
    "total_over_sql",
)

READOUTS = ("homodyne", "synodyne", "variational", "stitched")
SPACINGS = ("linear", "log-symmetric")


@dataclass(frozen=True)
class SweepSpec:
    """Validated sweep description; see the module docstring for the schema."""

    rho_min: float
    rho_max: float
    rho_count: int
    rho_spacing: str = "linear"
    powers: tuple = ()
    angles_deg: tuple = ()
    epsilon: float = 1.0
    n_th: float = 0.0
    readout: str = "homodyne"
    beta: Optional[float] = None
    synodyne_phi_deg: float = 0.0
    stitch_angles_deg: tuple = ()
    c_aa: float = 0.0
    c_pp: float = 0.0
    kappa_hz: Optional[float] = None
    omega_m_hz: Optional[float] = None
    gamma_hz: Optional[float] = None

    def validate(self):
        if self.rho_count < 2:
            raise ParameterError(f"rho_count must be >= 2, got {self.rho_count}")
        if self.rho_spacing not in SPACINGS:
            raise ParameterError(
                f"rho_spacing must be one of {SPACINGS}, got {self.rho_spacing!r}"
            )
        if self.rho_spacing == "linear" and not self.rho_min < self.rho_max:
            raise ParameterError("rho_min must be < rho_max")
        if self.rho_spacing == "log-symmetric" and not 0 < self.rho_min < self.rho_max:
            raise ParameterError(
                "log-symmetric grids need 0 < rho_min < rho_max (bounds on |rho|)"
            )
        if not self.powers:
            raise ParameterError("powers must list at least one value")
        if any(p <= 0 for p in self.powers):
            raise ParameterError("all powers must be > 0")
        if not 0 < self.epsilon <= 1:
            raise ParameterError(f"epsilon must be in (0, 1], got {self.epsilon}")
        if self.n_th < 0:
            raise ParameterError(f"n_th must be >= 0, got {self.n_th}")
        if self.readout not in READOUTS:
            raise ParameterError(
                f"readout must be one of {READOUTS}, got {self.readout!r}"
            )
        if self.readout == "homodyne" and not self.angles_deg:
            raise ParameterError("homodyne readout needs a non-empty angles_deg")
        if self.readout == "synodyne" and self.beta is None:
            raise ParameterError("synodyne readout needs beta")
        if self.readout == "stitched" and len(self.stitch_angles_deg) < 2:
            raise ParameterError("stitched readout needs >= 2 stitch_angles_deg")
        if self.c_aa < 0 or self.c_pp < 0:
            raise ParameterError("c_aa and c_pp must be >= 0")
        if (self.c_aa > 0 or self.c_pp > 0) and not self._has_cavity():
            raise ParameterError(
                "classical noise needs kappa_hz, omega_m_hz and gamma_hz"
            )
        return self

    def _has_cavity(self) -> bool:
        return None not in (self.kappa_hz, self.omega_m_hz, self.gamma_hz)

    def rho_grid(self) -> np.ndarray:
        if self.rho_spacing == "linear":
            return np.linspace(self.rho_min, self.rho_max, self.rho_count)
        half = self.rho_count // 2
        pos = np.logspace(
            math.log10(self.rho_min), math.log10(self.rho_max), half
        )
        parts = [-pos[::-1], pos]
        if self.rho_count % 2:
            parts.insert(1, np.zeros(1))
        return np.concatenate(parts)

    def to_text(self) -> str:
        """Serialize back to the flat key = value format (round-trips
        through parse_config)."""
        lines = [
            f"rho_min = {self.rho_min:.17g}",
            f"rho_max = {self.rho_max:.17g}",
            f"rho_count = {self.rho_count}",
            f"rho_spacing = {self.rho_spacing}",
            "powers = " + ",".join(f"{p:.17g}" for p in self.powers),
        ]
        if self.angles_deg:
            lines.append(
                "angles_deg = " + ",".join(f"{a:.17g}" for a in self.angles_deg)
            )
        lines += [
            f"epsilon = {self.epsilon:.17g}",
            f"n_th = {self.n_th:.17g}",
            f"readout = {self.readout}",
        ]
        if self.beta is not None:
            lines.append(f"beta = {self.beta:.17g}")
            lines.append(f"synodyne_phi_deg = {self.synodyne_phi_deg:.17g}")
        if self.stitch_angles_deg:
            lines.append(
                "stitch_angles_deg = "
                + ",".join(f"{a:.17g}" for a in self.stitch_angles_deg)
            )
        if self.c_aa or self.c_pp:
            lines.append(f"c_aa = {self.c_aa:.17g}")
            lines.append(f"c_pp = {self.c_pp:.17g}")
        if self._has_cavity():
            lines.append(f"kappa_hz = {self.kappa_hz:.17g}")
            lines.append(f"omega_m_hz = {self.omega_m_hz:.17g}")
            lines.append(f"gamma_hz = {self.gamma_hz:.17g}")
        return "\n".join(lines) + "\n"

    def metadata(self) -> dict:
        return {
            "artifact_version": __version__,
            "normalization": NORMALIZATION_STATEMENT,
            "spec": {
                k: (list(v) if isinstance(v, tuple) else v)
                for k, v in self.__dict__.items()
            },
        }


_FLOAT_KEYS = {
    "rho_min",
    "rho_max",
    "epsilon",
    "n_th",
    "beta",
    "synodyne_phi_deg",
    "c_aa",
    "c_pp",
    "kappa_hz",
    "omega_m_hz",
    "gamma_hz",
}
_LIST_KEYS = {"powers", "angles_deg", "stitch_angles_deg"}
_INT_KEYS = {"rho_count"}
_STR_KEYS = {"rho_spacing", "readout"}
_ALL_KEYS = _FLOAT_KEYS | _LIST_KEYS | _INT_KEYS | _STR_KEYS
_REQUIRED = ("rho_min", "rho_max", "rho_count", "powers")


def read_key_values(text: str) -> dict:
    """Parse 'key = value' lines; '#' starts a comment.  Returns key ->
    (value, line_number)."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ParameterError(f"line {lineno}: empty key")
        if key in out:
            raise ParameterError(f"line {lineno}: duplicate key {key!r}")
        out[key] = (value, lineno)
    return out


def parse_config(text: str, strict: bool = False) -> SweepSpec:
    """Parse and validate a sweep config document.

    Unknown keys are ignored unless strict is set, in which case they are
    rejected with the offending key name and line.
    """
    kv = read_key_values(text)
    fields = {}
    for key, (value, lineno) in kv.items():
        if key not in _ALL_KEYS:
            if strict:
                raise ParameterError(f"line {lineno}: unknown key {key!r}")
            continue
        try:
            if key in _FLOAT_KEYS:
                fields[key] = float(value)
            elif key in _INT_KEYS:
                fields[key] = int(value)
            elif key in _LIST_KEYS:
                fields[key] = tuple(
                    float(v) for v in value.split(",") if v.strip()
                )
            else:
                fields[key] = value
        except ValueError as exc:
            raise ParameterError(
                f"line {lineno}: bad value for {key!r}: {value!r} ({exc})"
            ) from None
    for key in _REQUIRED:
        if key not in fields:
            raise ParameterError(f"missing required key {key!r}")
    return SweepSpec(**fields).validate()


@dataclass(frozen=True)
class Row:
    rho: float
    phi_used: float  # degrees, matching the config boundary convention
    p: float
    s_m: float
    s_ii: float
    s_ff: float
    s_corr: float
    s_ln: float
    total: float
    total_over_sql: float


@dataclass
class SpectrumTable:
    metadata: dict
    rows: List[Row] = field(default_factory=list)


def _row(rho: float, phi_deg: float, p: float, comps: SpectrumComponents) -> Row:
    return Row(
        rho=rho,
        phi_used=phi_deg,
        p=p,
        s_m=comps.s_m,
        s_ii=comps.s_ii,
        s_ff=comps.s_ff,
        s_corr=comps.s_corr,
        s_ln=comps.s_ln,
        total=comps.total,
        total_over_sql=comps.total / float(sql_psd(rho)),
    )


def run_sweep(spec: SweepSpec) -> SpectrumTable:
    """Evaluate the sweep, rho-major then power then angle, deterministically.

    Every grid point is an independent pure evaluation, so any parallel
    execution of points yields bit-identical tables; this implementation is
    sequential.
    """
    spec.validate()
    det = Detection(spec.epsilon)
    # omega_m is only needed when cavity-referenced classical noise is on;
    # otherwise a placeholder high-Q mode carries (n_th, gamma-free) context.
    if spec._has_cavity():
        mode = MechanicalMode(
            omega_m=2 * math.pi * spec.omega_m_hz,
            gamma=2 * math.pi * spec.gamma_hz,
            n_th=spec.n_th,
        )
        cav = OpticalCavity(kappa=2 * math.pi * spec.kappa_hz)
    else:
        mode = MechanicalMode(omega_m=1.0, gamma=1e-6, n_th=spec.n_th)
        cav = None
    noise = ClassicalNoise(spec.c_aa, spec.c_pp)

    grid = spec.rho_grid()
    rows: List[Row] = []

    def s_ln_at(rho: float, phi: float, p: float) -> float:
        if noise.is_zero or cav is None:
            return 0.0
        omega = float(omega_from_rho(rho, mode))
        return classical_noise_displacement(omega, phi, p, det, cav, noise)

    if spec.readout == "homodyne":
        for rho in grid:
            for p in spec.powers:
                for phi_deg in spec.angles_deg:
                    phi = math.radians(phi_deg)
                    comps = displacement_psd(
                        rho, p, phi, det, mode, s_ln=s_ln_at(rho, phi, p)
                    )
                    rows.append(_row(float(rho), phi_deg, p, comps))
    elif spec.readout == "variational":
        for rho in grid:
            for p in spec.powers:
                phi = phi_opt(float(rho), p, det)
                comps = displacement_psd(
                    rho, p, phi, det, mode, s_ln=s_ln_at(rho, phi, p)
                )
                rows.append(_row(float(rho), math.degrees(phi), p, comps))
    elif spec.readout == "synodyne":
        lo = SynodyneLO(spec.beta, math.radians(spec.synodyne_phi_deg))
        for rho in grid:
            for p in spec.powers:
                comps = synodyne_components(float(rho), p, lo, det, mode)
                rows.append(_row(float(rho), spec.synodyne_phi_deg, p, comps))
    else:  # stitched
        for p in spec.powers:
            curves = [
                fixed_angle_spectrum(grid, p, math.radians(a), det, mode)
                for a in spec.stitch_angles_deg
            ]
            stitched = stitch_quadratures(curves)
            for i, rho in enumerate(grid):
                phi = float(stitched.chosen_phi[i])
                comps = displacement_psd(
                    float(rho), p, phi, det, mode, s_ln=s_ln_at(rho, phi, p)
                )
                rows.append(_row(float(rho), math.degrees(phi), p, comps))
        # restore rho-major ordering across powers
        rows.sort(key=lambda r: (r.rho, r.p))

    return SpectrumTable(metadata=spec.metadata(), rows=rows)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def emit_table(table: SpectrumTable, fmt: str, destination):
    """Serialize a table as CSV or JSON-lines.

    destination is a path or a text file object.  CSV carries the metadata
    as '# key: json' comment lines before the header; floats use 17
    significant digits so a re-ingested table is bit-identical.
    """
    if fmt not in ("csv", "jsonl"):
        raise ParameterError(f"format must be csv or jsonl, got {fmt!r}")
    own = isinstance(destination, (str, bytes)) or hasattr(destination, "__fspath__")
    fh = open(destination, "w", newline="") if own else destination
    try:
        if fmt == "csv":
            for key, value in table.metadata.items():
                fh.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
            fh.write(",".join(COLUMNS) + "\n")
            for r in table.rows:
                fh.write(",".join(_fmt(getattr(r, c)) for c in COLUMNS) + "\n")
        else:
            fh.write(json.dumps({"metadata": table.metadata}, sort_keys=True) + "\n")
            for r in table.rows:
                obj = {c: getattr(r, c) for c in COLUMNS}
                fh.write(json.dumps(obj, sort_keys=True) + "\n")
    finally:
        if own:
            fh.close()


def table_to_string(table: SpectrumTable, fmt: str) -> str:
    buf = io.StringIO()
    emit_table(table, fmt, buf)
    return buf.getvalue()


def load_table_csv(path) -> SpectrumTable:
    """Re-ingest a CSV table written by emit_table (values bit-identical)."""
    metadata = {}
    rows = []
    header_seen = False
    with open(path, newline="") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("# "):
                key, _, value = line[2:].partition(": ")
                metadata[key] = json.loads(value)
                continue
            if not header_seen:
                if line != ",".join(COLUMNS):
                    raise ParameterError(f"{path}: unexpected header {line!r}")
                header_seen = True
                continue
            values = [float(v) for v in line.split(",")]
            rows.append(Row(*values))
    if not header_seen:
        raise ParameterError(f"{path}: missing header row")
    return SpectrumTable(metadata=metadata, rows=rows)
