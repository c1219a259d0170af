"""Rectangular scans of the simplex for Figure-1 style plots."""
from __future__ import annotations

import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

from .descriptors import delta_h, energy
from .simplex import DomainSpec, Region, SimplexPoint, classify, weights_from_omega_n
from .species_io import csv_line

SCAN_HEADER = ("x", "omega_n", "w_minus", "w_plus", "region", "energy", "delta_h")

# rows where the horizontal gap to gamma+- is defined
_DELTA_H_REGIONS = {
    Region.InteriorAcceptor, Region.InteriorDonor, Region.NeutralAxis, Region.Origin,
}


@dataclass(frozen=True)
class ScanRow:
    x: float
    w_zero: float
    w_minus: float | None
    w_plus: float | None
    region: Region
    energy: float | None
    delta_h: float | None


def grid_coords(grid: int, i: int, j: int) -> tuple[float, float]:
    # (2i - grid)/grid is exactly antisymmetric under i -> grid - i
    return (2 * i - grid) / grid, j / grid


def scan_row(domain: DomainSpec, x: float, w: float) -> ScanRow:
    region = classify(SimplexPoint(x, w))
    if region is Region.Outside:
        return ScanRow(x, w, None, None, region, None, None)
    wv = weights_from_omega_n(x, w)
    dh = None
    if region in _DELTA_H_REGIONS:
        q = domain.q
        nu0 = q * (1.0 - w) if x >= 0 else -q * (1.0 - w)
        dh = delta_h(domain, x * q, nu0)
    return ScanRow(x, w, wv.w_minus, wv.w_plus, region, energy(domain, wv), dh)


def _scan_line(domain: DomainSpec, grid: int, j: int) -> list[ScanRow]:
    return [scan_row(domain, *grid_coords(grid, i, j)) for i in range(grid + 1)]


def scan_rows(domain: DomainSpec, grid: int, workers: int = 1) -> list[ScanRow]:
    """All ``(grid + 1)**2`` lattice rows, omega_n outer and x fastest."""
    if grid < 2:
        raise ValueError("grid must be >= 2")
    line = partial(_scan_line, domain, grid)
    if workers <= 1:
        lines = map(line, range(grid + 1))
        return [row for rows in lines for row in rows]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        lines = pool.map(line, range(grid + 1), chunksize=max(1, (grid + 1) // (4 * workers)))
        return [row for rows in lines for row in rows]


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, Region):
        return v.value
    return repr(float(v))


def scan_csv(rows: list[ScanRow]) -> bytes:
    lines = [csv_line(SCAN_HEADER)]
    for r in rows:
        lines.append(csv_line(_cell(v) for v in (r.x, r.w_zero, r.w_minus, r.w_plus, r.region, r.energy, r.delta_h)))
    return "".join(lines).encode("utf-8")


def atomic_write(path, data: bytes) -> None:
    """Write through a temporary sibling file and rename into place."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
