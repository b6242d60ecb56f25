"""1D momentum-space wavefunctions: analytic Gaussians and sampled grids.

Two representations coexist on purpose.  The analytic Gaussian gives exact
closed forms (moments, overlaps, displacement), so every grid result can be
checked against it; the grid generalizes to the non-Gaussian superpositions
that postselection produces.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import TextIO, Union

import numpy as np

DEFAULT_GRID_POINTS = 2048
DEFAULT_HALFSPAN_SIGMAS = 10.0  # Gaussian mass outside +/-10 sigma < 1e-22


@dataclass(frozen=True)
class GaussianPacket:
    """Normalized Gaussian psi(p) ~ exp(-(p - center)^2 W^2 / (4 hbar^2)).

    The momentum standard deviation is exactly hbar/width.
    """

    center: float
    width: float = 1.0
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if self.width <= 0:
            raise ValueError(f"width parameter must be positive, got {self.width}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")

    @property
    def sigma(self) -> float:
        return self.hbar / self.width

    def __call__(self, p: np.ndarray) -> np.ndarray:
        """Evaluate the (real, positive) normalized amplitude at momenta p."""
        s = self.sigma
        return (2.0 * math.pi * s * s) ** (-0.25) * np.exp(-((p - self.center) ** 2) / (4.0 * s * s))


@dataclass(frozen=True, eq=False)
class GridPacket:
    """Complex amplitudes sampled on a uniform momentum grid."""

    p: np.ndarray
    amps: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.p, dtype=float)
        amps = np.asarray(self.amps, dtype=complex)
        if p.ndim != 1 or p.size < 16:
            raise ValueError("grid needs at least 16 points")
        if amps.shape != p.shape:
            raise ValueError("amplitude array must match the momentum grid")
        dp = np.diff(p)
        if dp[0] <= 0 or not np.allclose(dp, dp[0], rtol=1e-9, atol=0.0):
            raise ValueError("momentum grid must be uniform and increasing")
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(amps))):
            raise ValueError("grid samples must be finite")
        p.setflags(write=False)
        amps.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "amps", amps)

    @property
    def dp(self) -> float:
        return float(self.p[1] - self.p[0])

    @property
    def span(self) -> float:
        return float(self.p[-1] - self.p[0])


Wavepacket = Union[GaussianPacket, GridPacket]


@dataclass(frozen=True)
class Moments:
    norm: float  # L2 norm, sqrt(integral |psi|^2 dp)
    mean: float
    std: float


def gaussian(center: float = 0.0, width: float = 1.0, hbar: float = 1.0) -> GaussianPacket:
    """Normalized Gaussian wavepacket with mean `center` and std hbar/width."""
    return GaussianPacket(center=center, width=width, hbar=hbar)


def to_grid(
    psi: Wavepacket,
    p_min: float | None = None,
    p_max: float | None = None,
    n: int = DEFAULT_GRID_POINTS,
) -> GridPacket:
    """Sample a wavepacket onto a uniform grid (default: mean +/- 10 sigma)."""
    if isinstance(psi, GridPacket):
        if p_min is None and p_max is None:
            return psi
        raise ValueError("resampling a grid packet onto a new range is not supported")
    if p_min is None:
        p_min = psi.center - DEFAULT_HALFSPAN_SIGMAS * psi.sigma
    if p_max is None:
        p_max = psi.center + DEFAULT_HALFSPAN_SIGMAS * psi.sigma
    if p_min >= p_max:
        raise ValueError("p_min must be below p_max")
    p = np.linspace(p_min, p_max, n)
    return GridPacket(p=p, amps=psi(p).astype(complex))


def displace(psi: Wavepacket, delta: float) -> Wavepacket:
    """Return psi(p - delta).

    Gaussians shift their center exactly.  Grid packets are shifted by a
    spectral phase ramp, which is exact for band-limited data; the shift is
    limited to a quarter of the grid span to guard against wrap-around.
    """
    if isinstance(psi, GaussianPacket):
        return GaussianPacket(center=psi.center + delta, width=psi.width, hbar=psi.hbar)
    if abs(delta) >= psi.span / 4.0:
        raise ValueError(
            f"grid displacement {delta!r} exceeds the guard range (span/4 = {psi.span / 4.0!r})"
        )
    if delta == 0.0:
        return psi
    spectrum = np.fft.fft(psi.amps)
    xi = np.fft.fftfreq(psi.p.size, d=psi.dp)
    shifted = np.fft.ifft(spectrum * np.exp(-2j * math.pi * xi * delta))
    return GridPacket(p=psi.p, amps=shifted)


def _same_grid(a: GridPacket, b: GridPacket) -> bool:
    return a.p.size == b.p.size and np.allclose(a.p, b.p, rtol=1e-12, atol=0.0)


def overlap(psi1: Wavepacket, psi2: Wavepacket) -> complex:
    """Inner product integral conj(psi1) * psi2 dp.

    Two Gaussians use the closed form; any grid operand uses the composite
    trapezoid rule on its grid.
    """
    if isinstance(psi1, GaussianPacket) and isinstance(psi2, GaussianPacket):
        s1, s2 = psi1.sigma, psi2.sigma
        d = psi1.center - psi2.center
        ssum = s1 * s1 + s2 * s2
        return complex(math.sqrt(2.0 * s1 * s2 / ssum) * math.exp(-d * d / (4.0 * ssum)))
    if isinstance(psi1, GridPacket) and isinstance(psi2, GridPacket):
        if not _same_grid(psi1, psi2):
            raise ValueError("grid packets must share the same momentum grid")
        return complex(np.trapezoid(np.conj(psi1.amps) * psi2.amps, psi1.p))
    # mixed: evaluate the analytic one on the grid
    if isinstance(psi1, GridPacket):
        return complex(np.trapezoid(np.conj(psi1.amps) * psi2(psi1.p), psi1.p))
    return complex(np.trapezoid(np.conj(psi1(psi2.p)) * psi2.amps, psi2.p))


def moments(psi: Wavepacket) -> Moments:
    """L2 norm, mean momentum and momentum standard deviation."""
    if isinstance(psi, GaussianPacket):
        return Moments(norm=1.0, mean=psi.center, std=psi.sigma)
    w = np.abs(psi.amps) ** 2
    norm2 = float(np.trapezoid(w, psi.p))
    if norm2 <= 0.0:
        raise ValueError("cannot take moments of an identically zero wavepacket")
    mean = float(np.trapezoid(psi.p * w, psi.p)) / norm2
    var = float(np.trapezoid((psi.p - mean) ** 2 * w, psi.p)) / norm2
    return Moments(norm=math.sqrt(norm2), mean=mean, std=math.sqrt(max(var, 0.0)))


def normalize(psi: Wavepacket) -> Wavepacket:
    if isinstance(psi, GaussianPacket):
        return psi
    nrm = moments(psi).norm
    return GridPacket(p=psi.p, amps=psi.amps / nrm)


def superpose(
    terms: list[tuple[complex, Wavepacket]],
    n: int = DEFAULT_GRID_POINTS,
) -> GridPacket:
    """Linear combination sum_i c_i psi_i rendered on a common grid (unnormalized).

    Grid terms must already share one grid; analytic terms are evaluated on
    it.  With only analytic terms the grid covers the hull of their
    +/- 10 sigma supports.
    """
    if not terms:
        raise ValueError("superpose needs at least one term")
    grids = [psi for _, psi in terms if isinstance(psi, GridPacket)]
    if grids:
        base = grids[0]
        for g in grids[1:]:
            if not _same_grid(base, g):
                raise ValueError("grid packets must share the same momentum grid")
        p = base.p
    else:
        lo = min(psi.center - DEFAULT_HALFSPAN_SIGMAS * psi.sigma for _, psi in terms)
        hi = max(psi.center + DEFAULT_HALFSPAN_SIGMAS * psi.sigma for _, psi in terms)
        p = np.linspace(lo, hi, n)
    amps = np.zeros(p.size, dtype=complex)
    for coeff, psi in terms:
        amps += coeff * (psi.amps if isinstance(psi, GridPacket) else psi(p))
    return GridPacket(p=p, amps=amps)


# --- CSV serialization (header `p,re,im`, metadata comment line) ---


def to_csv(psi: Wavepacket, dest: TextIO | str, units: str = "natural", width: float = 1.0) -> None:
    """Write a wavepacket as CSV rows `p,re,im` with a unit metadata comment."""
    grid = to_grid(psi)
    if units not in ("natural", "si"):
        raise ValueError(f"units must be 'natural' or 'si', got {units!r}")
    buf = io.StringIO()
    buf.write(f"# units={units}, W={float(width)!r}\n")
    buf.write("p,re,im\n")
    for p, a in zip(grid.p.tolist(), grid.amps.tolist()):
        buf.write(f"{p!r},{a.real!r},{a.imag!r}\n")
    if isinstance(dest, str):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        dest.write(buf.getvalue())


def from_csv(src: TextIO | str) -> tuple[GridPacket, dict]:
    """Read a wavepacket written by `to_csv`; returns (packet, metadata)."""
    if isinstance(src, str):
        with open(src, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    else:
        lines = src.read().splitlines()
    meta: dict = {}
    rows = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            for part in line.lstrip("#").split(","):
                if "=" in part:
                    key, val = part.split("=", 1)
                    meta[key.strip()] = val.strip()
            continue
        if line.startswith("p,"):
            continue
        rows.append([float(x) for x in line.split(",")])
    if "W" in meta:
        meta["W"] = float(meta["W"])
    data = np.asarray(rows, dtype=float)
    if data.size == 0:
        raise ValueError("no samples found in wavepacket CSV")
    return GridPacket(p=data[:, 0], amps=data[:, 1] + 1j * data[:, 2]), meta
