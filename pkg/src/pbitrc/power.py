"""Static I^2 R dissipation budget of a single p-bit node.

Units follow the device tables: lengths in nm, resistivity in uOhm*cm,
RA product in Ohm*um^2, pull-up resistance in kOhm, current in uA,
voltage in V and power in uW.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import DomainError

__all__ = ["DeviceParams", "PowerBreakdown", "resistance_from_geometry", "mtj_resistance", "power_report", "format_table"]


@dataclass(frozen=True)
class DeviceParams:
    spm_barrier: float = 1.0  # kT, metadata only
    spm_radius: float = 50.0
    spm_thickness: float = 1.0  # metadata only
    gshe_theta: float = 0.33  # metadata only
    gshe_length: float = 50.0
    gshe_width: float = 50.0
    gshe_thickness: float = 2.0
    gshe_resistivity: float = 170.0
    mtj_tmr: float = 1.0
    mtj_ra: float = 100.0
    r_up: float = 15.0
    i_write: float = 15.0
    vdd: float = 0.8
    buffer_power: float = 150.0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if name == "mtj_tmr":
                ok = value >= 0
            elif name in ("i_write", "buffer_power"):
                ok = value >= 0
            else:
                ok = value > 0
            if not (ok and math.isfinite(value)):
                raise DomainError(f"device parameter {name} has invalid value {value}")


@dataclass(frozen=True)
class PowerBreakdown:
    mtj_reader: float
    gshe_writer: float
    spintronic_total: float
    r_up: float
    buffer: float
    silicon_total: float
    node_total: float
    mtj_state_band: tuple
    r_up_state_band: tuple

    def to_dict(self):
        d = asdict(self)
        d["mtj_state_band"] = list(self.mtj_state_band)
        d["r_up_state_band"] = list(self.r_up_state_band)
        return d


def resistance_from_geometry(resistivity: float, length: float, width: float, thickness: float) -> float:
    """Bar resistance ``rho L / (W t)`` in Ohm (resistivity in uOhm*cm, sizes in nm)."""
    if min(length, width, thickness) <= 0 or resistivity <= 0:
        raise DomainError("resistivity and all dimensions must be positive")
    rho_si = resistivity * 1e-8  # Ohm*m
    return rho_si * (length * 1e-9) / ((width * 1e-9) * (thickness * 1e-9))


def mtj_resistance(ra: float, radius: float, tmr: float):
    """Parallel and antiparallel resistance (Ohm) of a circular junction."""
    if radius <= 0 or ra <= 0:
        raise DomainError("RA product and radius must be positive")
    if tmr < 0:
        raise DomainError("TMR must be non-negative")
    area_um2 = math.pi * (radius * 1e-3) ** 2
    r_p = ra / area_um2
    return r_p, r_p * (1.0 + tmr)


def _divider(vdd, r_mtj, r_up):
    i = vdd / (r_mtj + r_up)
    return i * i * r_mtj * 1e6, i * i * r_up * 1e6


def power_report(params: DeviceParams) -> PowerBreakdown:
    """Headline numbers use the parallel MTJ state; the bands give (P, AP)."""
    r_gshe = resistance_from_geometry(params.gshe_resistivity, params.gshe_length, params.gshe_width, params.gshe_thickness)
    gshe = (params.i_write * 1e-6) ** 2 * r_gshe * 1e6
    r_p, r_ap = mtj_resistance(params.mtj_ra, params.spm_radius, params.mtj_tmr)
    r_up = params.r_up * 1e3
    mtj_p, up_p = _divider(params.vdd, r_p, r_up)
    mtj_ap, up_ap = _divider(params.vdd, r_ap, r_up)
    spin = mtj_p + gshe
    silicon = up_p + params.buffer_power
    return PowerBreakdown(
        mtj_reader=mtj_p,
        gshe_writer=gshe,
        spintronic_total=spin,
        r_up=up_p,
        buffer=params.buffer_power,
        silicon_total=silicon,
        node_total=spin + silicon,
        mtj_state_band=(mtj_p, mtj_ap),
        r_up_state_band=(up_p, up_ap),
    )


def format_table(report: PowerBreakdown) -> str:
    rows = [
        ("MTJ Reader", report.mtj_reader, "P/AP %.2f / %.2f" % report.mtj_state_band),
        ("GSHE Writer", report.gshe_writer, ""),
        ("Spintronic Total", report.spintronic_total, ""),
        ("R_up", report.r_up, "P/AP %.2f / %.2f" % report.r_up_state_band),
        ("Buffer (dual inverter)", report.buffer, ""),
        ("Silicon Total", report.silicon_total, ""),
        ("Node Total", report.node_total, ""),
    ]
    lines = [f"{'Component':<24}{'Power (uW)':>12}  Note", "-" * 56]
    lines += [f"{name:<24}{value:>12.3f}  {note}".rstrip() for name, value, note in rows]
    return "\n".join(lines)
