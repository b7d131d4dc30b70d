"""Seeded field ensembles shared by the inequality audits and the tests.

Everything here is deterministic: fields derive from the versioned
manifest in data/ensembles.json plus explicit integer seeds.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .grid import Grid, SampledField, Spectrum, inverse_fourier
from .models import ModelField

_MANIFEST = os.path.join(os.path.dirname(__file__), "data", "ensembles.json")


def load_manifest() -> dict:
    with open(_MANIFEST, "r", encoding="utf-8") as fh:
        return json.load(fh)


def oracle_fields(g: Grid, manifest: dict | None = None) -> list[SampledField]:
    man = manifest or load_manifest()
    out = []
    for desc in man["oracle_fields"]:
        m = ModelField.from_json(desc)
        out.append(SampledField(g, m.evaluate_scaled(g), label=json.dumps(desc, sort_keys=True),
                                model=m))
    return out


def wave_packet(g: Grid, shell_k: int, seed: int, width_ratio: float = 12.0,
                modes: int = 24) -> SampledField:
    """Gaussian-envelope random oscillation with frequencies near 2^shell_k.

    Decays in space (so dilation keeps its mass) while its spectrum stays
    concentrated around the dyadic shell: the workhorse of the dilation and
    embedding ensembles.
    """
    rng = np.random.default_rng(seed)
    w = g.L / width_ratio
    axes = g.x_points()
    r2 = sum(np.asarray(a, dtype=float) ** 2 for a in axes)
    env = np.exp(-r2 / (2.0 * w * w))
    osc = np.zeros(g.shape, dtype=np.complex128)
    base = 2.0**shell_k
    for _ in range(modes):
        direction = rng.normal(size=g.n)
        direction /= np.linalg.norm(direction)
        freq = base * rng.uniform(0.92, 1.08)
        amp = rng.normal() + 1j * rng.normal()
        phase = np.zeros(g.shape)
        for d, a in zip(direction, axes):
            phase = phase + freq * d * np.asarray(a, dtype=float)
        osc = osc + amp * np.exp(1j * phase)
    return SampledField(g, env * osc, label=f"packet(k={shell_k},seed={seed})")


def band_limited_field(g: Grid, seed: int, lo: float, hi: float) -> SampledField:
    """Field synthesised from a random spectrum supported on lo <= |xi| <= hi."""
    rng = np.random.default_rng(seed)
    r = g.xi_radius()
    mask = (r >= lo) & (r <= hi)
    F = np.zeros(g.shape, dtype=np.complex128)
    F[mask] = rng.normal(size=int(mask.sum())) + 1j * rng.normal(size=int(mask.sum()))
    f = inverse_fourier(Spectrum(grid=g, values=F))
    return SampledField(g, f.values, label=f"bandlimited(seed={seed},[{lo:g},{hi:g}])")


def shell_field(g: Grid, k: int, seed: int, rel_width: float = 0.03) -> SampledField:
    """Field whose spectrum sits on the thin shell |xi| = 2^k (1 +- rel_width),
    where the dyadic bump for block k is indistinguishable from 1."""
    base = 2.0**k
    return band_limited_field(g, seed, base * (1 - rel_width), base * (1 + rel_width))
