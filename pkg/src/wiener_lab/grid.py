"""Uniform grids on [-L, L]^n and the continuous Fourier transform convention.

The forward transform approximated here is

    F(xi) = integral f(x) exp(-i <xi, x>) dx,

discretised by the rectangle rule on the centred grid x_j = -L + j*h,
h = 2L/N, and evaluated at the frequencies xi_m = pi*m/L with
m = -N/2, ..., N/2 - 1 per axis.  With this pairing the FFT computes the
quadrature exactly up to a per-axis alternating sign:

    F(xi_m) = h^n * (-1)^(m_1 + ... + m_n) * FFT(f)_m.

The inverse carries the (2pi)^{-n} factor so that ``inverse_fourier``
composed with ``fourier_transform`` is the identity map; the discrete
round trip is exact to machine precision.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as _fft


class WienerLabError(ValueError):
    """Base class for domain errors raised by this package."""


class GridMismatchError(WienerLabError):
    """Two fields living on different grids were combined."""


class SamplingError(WienerLabError):
    """A requested construction is not resolvable on the given grid."""


def _workers() -> int:
    """FFT worker count; WIENER_LAB_THREADS never changes numerical output."""
    try:
        return max(1, int(os.environ.get("WIENER_LAB_THREADS", os.cpu_count() or 1)))
    except ValueError:
        return 1


@dataclass(frozen=True)
class Grid:
    """Uniform sampling of the cube [-L, L]^n with N points per axis.

    N must be a power of two (>= 8) so that dyadic resampling and FFTs are
    exact; h = 2L/N satisfies h*N = 2L identically.
    """

    n: int
    L: float
    N: int

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise WienerLabError(f"dimension must be 1, 2 or 3, got {self.n}")
        if not self.L > 0:
            raise WienerLabError(f"half-width L must be positive, got {self.L}")
        if self.N < 8 or self.N & (self.N - 1) != 0:
            raise WienerLabError(f"N must be a power of two >= 8, got {self.N}")

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.n

    @property
    def size(self) -> int:
        return self.N**self.n

    @property
    def nyquist(self) -> float:
        """Largest resolvable frequency magnitude per axis, pi*N/(2L)."""
        return np.pi * self.N / (2.0 * self.L)

    @property
    def dxi(self) -> float:
        """Frequency spacing pi/L."""
        return np.pi / self.L

    def x_axis(self) -> np.ndarray:
        return -self.L + self.h * np.arange(self.N)

    def xi_axis(self) -> np.ndarray:
        """Frequencies pi*m/L, m = -N/2 .. N/2-1, ascending."""
        return self.dxi * (np.arange(self.N) - self.N // 2)

    def _broadcast_axes(self, axis_1d: np.ndarray) -> list[np.ndarray]:
        out = []
        for ax in range(self.n):
            shape = [1] * self.n
            shape[ax] = self.N
            out.append(axis_1d.reshape(shape))
        return out

    def x_radius(self) -> np.ndarray:
        """|x| at every grid point, shape ``self.shape``."""
        axes = self._broadcast_axes(self.x_axis())
        r2 = sum(a.astype(float) ** 2 for a in axes)
        return np.sqrt(r2)

    def xi_radius(self) -> np.ndarray:
        """|xi| at every frequency point, shape ``self.shape``."""
        axes = self._broadcast_axes(self.xi_axis())
        r2 = sum(a.astype(float) ** 2 for a in axes)
        return np.sqrt(r2)

    def x_points(self) -> list[np.ndarray]:
        """Coordinate arrays (broadcastable) for each axis."""
        return self._broadcast_axes(self.x_axis())


def make_grid(n: int, L: float, N: int) -> Grid:
    """Validated Grid constructor; see Grid for the invariants."""
    return Grid(n=n, L=float(L), N=int(N))


@dataclass(frozen=True, eq=False)
class SampledField:
    """Complex samples of a function at x_j = -L + j*h per axis.

    ``model`` optionally records the symbolic constructor that produced the
    samples; dilation re-evaluates through it instead of interpolating.
    """

    grid: Grid
    values: np.ndarray
    label: str = ""
    model: object | None = field(default=None, compare=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != self.grid.shape:
            v = v.reshape(self.grid.shape)
        if not np.all(np.isfinite(v.view(np.float64))):
            raise WienerLabError(f"non-finite samples in field {self.label!r}")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Samples of the continuous transform at xi_m = pi*m/L, ascending per axis."""

    grid: Grid
    values: np.ndarray
    normalization: str = "integral exp(-i<xi,x>)"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != self.grid.shape:
            v = v.reshape(self.grid.shape)
        object.__setattr__(self, "values", v)

    @property
    def nyquist(self) -> float:
        return self.grid.nyquist


def _alternating_sign(grid: Grid) -> np.ndarray:
    """(-1)^(j_1+...+j_n) in FFT storage order, broadcast to the grid shape.

    Because N is divisible by 4 the pattern is invariant under fftshift, so
    the same array serves in either ordering.
    """
    s = np.where(np.arange(grid.N) % 2 == 0, 1.0, -1.0)
    out = np.ones((), dtype=float)
    for ax in grid._broadcast_axes(s):
        out = out * ax
    return out


def fourier_transform(f: SampledField) -> Spectrum:
    """Rectangle-rule transform, spectrally accurate for smooth decaying f."""
    g = f.grid
    V = _fft.fftn(f.values, workers=_workers())
    F = (g.h**g.n) * _alternating_sign(g) * V
    return Spectrum(grid=g, values=_fft.fftshift(F))


def inverse_fourier(F: Spectrum) -> SampledField:
    """Exact inverse of ``fourier_transform`` (includes the (2pi)^{-n} factor)."""
    g = F.grid
    V = _fft.ifftshift(F.values) * _alternating_sign(g) / (g.h**g.n)
    v = _fft.ifftn(V, workers=_workers())
    return SampledField(grid=g, values=v, label="ifft")


def spectrum_map(F: Spectrum, symbol: np.ndarray) -> Spectrum:
    """Multiply a spectrum by a (broadcastable) symbol array."""
    return Spectrum(grid=F.grid, values=F.values * symbol, normalization=F.normalization)


_POINTWISE_OPS = ("add", "mul", "scale", "conj", "abs_pow")


def pointwise(op: str, a: SampledField, b=None, p: float | None = None) -> SampledField:
    """Elementwise field arithmetic: add, mul, scale, conj, abs_pow(p)."""
    if op not in _POINTWISE_OPS:
        raise WienerLabError(f"unknown pointwise op {op!r}; expected one of {_POINTWISE_OPS}")
    if op in ("add", "mul"):
        if not isinstance(b, SampledField):
            raise WienerLabError(f"op {op!r} needs a second field")
        if b.grid != a.grid:
            raise GridMismatchError("pointwise operands live on different grids")
        vals = a.values + b.values if op == "add" else a.values * b.values
    elif op == "scale":
        vals = a.values * complex(b)
    elif op == "conj":
        vals = np.conj(a.values)
    else:  # abs_pow
        if p is None:
            p = b
        if p is None:
            raise WienerLabError("abs_pow needs the exponent p")
        vals = np.abs(a.values) ** float(p) + 0j
    return SampledField(grid=a.grid, values=vals, label=f"{op}({a.label})")


def l1_mass(f: SampledField) -> float:
    """Rectangle-rule value of the absolute integral of f."""
    return float(f.grid.h**f.grid.n * np.abs(f.values).sum())


MASS_RETENTION_MIN = 0.99


def _upsample_axis(v: np.ndarray, axis: int) -> np.ndarray:
    """Double the sampling rate along one axis by trigonometric interpolation."""
    N = v.shape[axis]
    V = _fft.fft(v, axis=axis, workers=_workers())
    V = _fft.fftshift(V, axes=axis)
    pad = [(0, 0)] * v.ndim
    pad[axis] = (N // 2, N // 2)
    V = np.pad(V, pad)
    V = _fft.ifftshift(V, axes=axis)
    return _fft.ifft(V, axis=axis, workers=_workers()) * 2.0


def dilate(f: SampledField, m: int) -> SampledField:
    """Samples of x -> f(2^m x) on the same grid.

    Fields carrying a symbolic model are re-evaluated exactly; otherwise
    m > 0 subsamples (with periodic extension, exact for band-limited
    fields) and m < 0 upsamples by zero-padding the spectrum.  Errors out
    when less than 99% of the absolute mass survives the move.
    """
    m = int(m)
    g = f.grid
    if m == 0:
        return SampledField(grid=g, values=f.values.copy(), label=f.label, model=f.model)
    if f.model is not None and hasattr(f.model, "evaluate_scaled"):
        vals = f.model.evaluate_scaled(g, 2.0**m)
        return SampledField(grid=g, values=vals, label=f"{f.label}|dilate {m}", model=None)

    lam = 2**abs(m)
    v = f.values
    if m > 0:
        idx = (lam * np.arange(g.N) - (lam - 1) * (g.N // 2)) % g.N
        for ax in range(g.n):
            v = np.take(v, idx, axis=ax)
    else:
        for _ in range(abs(m)):
            for ax in range(g.n):
                v = _upsample_axis(v, axis=ax)
        sl = slice((lam - 1) * g.N // 2, (lam - 1) * g.N // 2 + g.N)
        v = v[(sl,) * g.n]

    out = SampledField(grid=g, values=v, label=f"{f.label}|dilate {m}")
    old_mass = l1_mass(f)
    if old_mass > 0:
        retained = (2.0 ** (m * g.n)) * l1_mass(out) / old_mass
        if retained < MASS_RETENTION_MIN:
            raise SamplingError(
                f"dilation by 2^{m} retains only {retained:.3f} of the absolute mass"
            )
    return out


# ---------------------------------------------------------------------------
# Binary field dump: magic "WLF1", little-endian u32 n, u32 N, f64 L, then
# N^n complex samples as interleaved f64 (re, im), C order, first axis slowest.
# ---------------------------------------------------------------------------

_MAGIC = b"WLF1"
_HEADER = struct.Struct("<4sIId")


def write_field(f: SampledField, path: str | os.PathLike) -> None:
    g = f.grid
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, g.n, g.N, g.L))
        fh.write(np.ascontiguousarray(f.values, dtype="<c16").tobytes())


def read_field(path: str | os.PathLike) -> SampledField:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) < _HEADER.size:
            raise WienerLabError("field dump too short for header")
        magic, n, N, L = _HEADER.unpack(head)
        if magic != _MAGIC:
            raise WienerLabError(f"bad magic {magic!r}, expected {_MAGIC!r}")
        g = make_grid(int(n), float(L), int(N))
        payload = fh.read()
    expect = g.size * 16
    if len(payload) != expect:
        raise WienerLabError(
            f"truncated or oversized payload: got {len(payload)} bytes, expected {expect}"
        )
    vals = np.frombuffer(payload, dtype="<c16").reshape(g.shape)
    return SampledField(grid=g, values=vals.astype(np.complex128), label=str(path))


def plancherel_defect(f: SampledField) -> float:
    """Relative gap between h^n*sum|f|^2 and (2pi)^-n (pi/L)^n sum|F|^2."""
    g = f.grid
    lhs = g.h**g.n * float(np.sum(np.abs(f.values) ** 2))
    F = fourier_transform(f)
    rhs = (g.dxi / (2.0 * np.pi)) ** g.n * float(np.sum(np.abs(F.values) ** 2))
    denom = max(lhs, rhs)
    return 0.0 if denom == 0 else abs(lhs - rhs) / denom
