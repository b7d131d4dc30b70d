"""Model functions: smooth cutoffs, oscillating multipliers, transform oracles.

The oscillating model family is

    m(x)   = rho(|x|) * exp(i|x|^alpha) / |x|^beta          ("chirp")
    mu(x)  = m(x) / log|x|                                  ("chirp_log")
    nu_a   = mu with beta = n*alpha/2                       ("nu")

where rho is a C-infinity radial cutoff vanishing for |x| <= inner and
equal to 1 for |x| >= outer, realised from the classic mollifier
g(u) = exp(-1/u) (u > 0):

    rho(t) = g(t - inner) / (g(t - inner) + g(outer - t)).

The Gaussian family carries closed-form transforms and serves as the
oracle set for transform accuracy tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import Grid, SampledField, Spectrum, SamplingError, WienerLabError

# Phase advance of exp(i|x|^alpha) allowed per half grid cell at the domain
# boundary; beyond it the oscillation is considered under-sampled.
MAX_PHASE_STEP_PER_HALF_CELL = np.pi / 4


@dataclass(frozen=True)
class CutoffSpec:
    """Radii of the smooth step: 0 on [0, inner], 1 on [outer, inf)."""

    inner: float = 1.0
    outer: float = 2.0

    def __post_init__(self):
        if not (0 < self.inner < self.outer):
            raise WienerLabError(f"need 0 < inner < outer, got {self.inner}, {self.outer}")


@dataclass(frozen=True)
class ChirpParams:
    alpha: float
    beta: float
    n: int = 1

    def __post_init__(self):
        if not self.alpha > 0 or self.alpha == 1.0:
            raise WienerLabError(f"alpha must be positive and != 1, got {self.alpha}")
        if not self.beta > 0:
            raise WienerLabError(f"beta must be positive, got {self.beta}")


def _mollifier_g(u: np.ndarray) -> np.ndarray:
    out = np.zeros_like(u, dtype=float)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def cutoff_rho(spec: CutoffSpec, t) -> np.ndarray | float:
    """C-infinity monotone step in [0,1]: 0 for t<=inner, 1 for t>=outer."""
    arr = np.asarray(t, dtype=float)
    ga = _mollifier_g(arr - spec.inner)
    gb = _mollifier_g(spec.outer - arr)
    with np.errstate(invalid="ignore"):
        val = np.where(ga + gb > 0, ga / np.where(ga + gb > 0, ga + gb, 1.0), 1.0)
    # ga+gb == 0 only for t <= inner touching underflow; there rho is 0
    val = np.where(arr <= spec.inner, 0.0, val)
    val = np.where(arr >= spec.outer, 1.0, val)
    if np.ndim(t) == 0:
        return float(val)
    return val


def check_chirp_sampling(p: ChirpParams, g: Grid, allow_undersampled: bool = False) -> float:
    """Phase increment of exp(i|x|^alpha) per half cell at the box boundary.

    The fastest local oscillation sits at |x| = L with instantaneous
    frequency alpha*L^(alpha-1); a half-cell step h/2 must advance the
    phase by at most pi/4.
    """
    step = p.alpha * g.L ** (p.alpha - 1.0) * g.h / 2.0
    if step > MAX_PHASE_STEP_PER_HALF_CELL and not allow_undersampled:
        raise SamplingError(
            f"chirp alpha={p.alpha} under-sampled on L={g.L}, N={g.N}: "
            f"phase step {step:.3f} per half cell exceeds {MAX_PHASE_STEP_PER_HALF_CELL:.3f}"
        )
    return step


def adequate_chirp_box(alpha: float, N: int) -> float:
    """Largest power-of-two half-width L resolving exp(i|x|^alpha) at N samples."""
    lmax = (np.pi * N / (4.0 * alpha)) ** (1.0 / alpha)
    return float(2.0 ** math.floor(math.log2(lmax)))


def _chirp_values(r: np.ndarray, alpha: float, beta: float, c: CutoffSpec,
                  log_divide: bool, scale: float = 1.0) -> np.ndarray:
    rr = scale * r
    rho = cutoff_rho(c, rr)
    vals = np.zeros(r.shape, dtype=np.complex128)
    mask = rr > c.inner
    rm = rr[mask]
    amp = rho[mask] / rm**beta
    if log_divide:
        lg = np.log(rm)
        # rho vanishes to infinite order at inner, so amp/log -> 0 there
        with np.errstate(divide="ignore", invalid="ignore"):
            amp = np.where(lg != 0, amp / np.where(lg != 0, lg, 1.0), 0.0)
        amp = np.where(np.isfinite(amp), amp, 0.0)
    vals[mask] = amp * np.exp(1j * rm**alpha)
    return vals


@dataclass(frozen=True)
class ModelField:
    """Serialisable descriptor of a model function.

    kinds: gaussian, modulated_gaussian, chirp, chirp_log, nu,
    radial_profile, product, weighted.  ``params`` holds plain JSON data
    (weights appear as their own descriptors).
    """

    kind: str
    params: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.params}

    @staticmethod
    def from_json(obj: dict) -> "ModelField":
        obj = dict(obj)
        kind = obj.pop("kind")
        return ModelField(kind=kind, params=obj)

    # -- evaluation -------------------------------------------------------

    def evaluate_scaled(self, g: Grid, scale: float = 1.0) -> np.ndarray:
        """Samples of x -> model(scale * x) on g."""
        k, p = self.kind, self.params
        if k == "gaussian":
            a = float(p.get("a", 0.5))
            center = p.get("center")
            freq = p.get("freq")
            axes = g.x_points()
            r2 = np.zeros(g.shape)
            phase = np.zeros(g.shape)
            for i, ax in enumerate(axes):
                xi_ = scale * ax
                c = (center[i] if center else 0.0)
                r2 = r2 + (xi_ - c) ** 2
                if freq:
                    phase = phase + freq[i] * xi_
            vals = np.exp(-a * r2).astype(np.complex128)
            if freq:
                vals = vals * np.exp(1j * phase)
            return vals
        if k == "modulated_gaussian":
            a = float(p.get("a", 0.5))
            omega = p["omega"]
            axes = g.x_points()
            r2 = np.zeros(g.shape)
            carrier = np.zeros(g.shape)
            om = omega if isinstance(omega, (list, tuple)) else [omega] * g.n
            for i, ax in enumerate(axes):
                xi_ = scale * ax
                r2 = r2 + xi_**2
                carrier = carrier + om[i] * xi_
            return (np.exp(-a * r2) * np.cos(carrier)).astype(np.complex128)
        if k in ("chirp", "chirp_log", "nu"):
            alpha = float(p["alpha"])
            beta = float(p["beta"]) if k != "nu" else g.n * alpha / 2.0
            c = CutoffSpec(*p.get("cutoff", (1.0, 2.0)))
            r = g.x_radius()
            return _chirp_values(r, alpha, beta, c, log_divide=(k != "chirp"), scale=scale)
        if k == "radial_profile":
            rho_ax = np.asarray(p["rho"], dtype=float)
            prof = np.asarray(p["values"], dtype=np.complex128)
            r = scale * g.x_radius()
            re = np.interp(r, rho_ax, prof.real, right=0.0)
            im = np.interp(r, rho_ax, prof.imag, right=0.0)
            return re + 1j * im
        if k == "product":
            out = np.ones(g.shape, dtype=np.complex128)
            for sub in p["factors"]:
                out = out * ModelField.from_json(sub).evaluate_scaled(g, scale)
            return out
        if k == "weighted":
            from .weights import WeightSpec, weight_eval

            base = ModelField.from_json(p["base"]).evaluate_scaled(g, scale)
            w = WeightSpec.from_json(p["weight"])
            return base * weight_eval(w, scale * g.x_radius())
        raise WienerLabError(f"unknown model kind {k!r}")

    # -- closed-form transform -------------------------------------------

    def closed_form_ft(self, g: Grid) -> np.ndarray | None:
        """Exact transform samples on g's frequency grid, when known."""
        k, p = self.kind, self.params
        if k == "gaussian":
            a = float(p.get("a", 0.5))
            center = p.get("center")
            freq = p.get("freq")
            axes = g._broadcast_axes(g.xi_axis())
            amp = (np.pi / a) ** (g.n / 2.0)
            out = np.full(g.shape, amp, dtype=np.complex128)
            for i, ax in enumerate(axes):
                xi_ = ax - (freq[i] if freq else 0.0)
                out = out * np.exp(-(xi_**2) / (4.0 * a))
                if center:
                    out = out * np.exp(-1j * xi_ * center[i])
            return out
        if k == "modulated_gaussian":
            a = float(p.get("a", 0.5))
            omega = p["omega"]
            om = omega if isinstance(omega, (list, tuple)) else [omega] * g.n
            axes = g._broadcast_axes(g.xi_axis())
            amp = (np.pi / a) ** (g.n / 2.0)
            plus = np.full(g.shape, 1.0, dtype=np.complex128)
            minus = np.full(g.shape, 1.0, dtype=np.complex128)
            for i, ax in enumerate(axes):
                plus = plus * np.exp(-((ax - om[i]) ** 2) / (4.0 * a))
                minus = minus * np.exp(-((ax + om[i]) ** 2) / (4.0 * a))
            return 0.5 * amp * (plus + minus)
        return None


def gaussian(g: Grid, a: float = 0.5, center=None, freq=None, label: str = "") -> SampledField:
    params: dict = {"a": a}
    if center is not None:
        params["center"] = list(center)
    if freq is not None:
        params["freq"] = list(freq)
    m = ModelField("gaussian", params)
    return SampledField(g, m.evaluate_scaled(g), label or f"gaussian(a={a})", model=m)


def modulated_gaussian(g: Grid, a: float, omega, label: str = "") -> SampledField:
    m = ModelField("modulated_gaussian", {"a": a, "omega": omega})
    return SampledField(g, m.evaluate_scaled(g), label or f"mod_gaussian(a={a})", model=m)


def chirp(p: ChirpParams, c: CutoffSpec, g: Grid, allow_undersampled: bool = False) -> SampledField:
    """Oscillating multiplier rho(|x|) exp(i|x|^alpha) |x|^-beta."""
    if p.n != g.n:
        raise WienerLabError(f"chirp dimension {p.n} != grid dimension {g.n}")
    check_chirp_sampling(p, g, allow_undersampled)
    m = ModelField("chirp", {"alpha": p.alpha, "beta": p.beta, "cutoff": (c.inner, c.outer)})
    return SampledField(g, m.evaluate_scaled(g), f"chirp(a={p.alpha},b={p.beta})", model=m)


def chirp_log(p: ChirpParams, c: CutoffSpec, g: Grid, allow_undersampled: bool = False) -> SampledField:
    """chirp divided by log|x|, extended by 0 for |x| <= inner."""
    if p.n != g.n:
        raise WienerLabError(f"chirp dimension {p.n} != grid dimension {g.n}")
    check_chirp_sampling(p, g, allow_undersampled)
    m = ModelField("chirp_log", {"alpha": p.alpha, "beta": p.beta, "cutoff": (c.inner, c.outer)})
    return SampledField(g, m.evaluate_scaled(g), f"chirp_log(a={p.alpha},b={p.beta})", model=m)


def nu(alpha: float, c: CutoffSpec, g: Grid, allow_undersampled: bool = False) -> SampledField:
    """chirp_log at the borderline decay beta = n*alpha/2."""
    p = ChirpParams(alpha=alpha, beta=g.n * alpha / 2.0, n=g.n)
    f = chirp_log(p, c, g, allow_undersampled)
    m = ModelField("nu", {"alpha": alpha, "cutoff": (c.inner, c.outer)})
    return SampledField(g, f.values, f"nu(a={alpha})", model=m)


_ORACLE_KINDS = ("gaussian", "modulated_gaussian", "shifted_gaussian")


def oracle_pair(kind: str, params: dict, g: Grid) -> tuple[SampledField, Spectrum]:
    """Field together with its exact closed-form transform on g."""
    if kind == "shifted_gaussian":
        m = ModelField("gaussian", {"a": params.get("a", 0.5), "center": list(params["center"])})
    elif kind in ("gaussian", "modulated_gaussian"):
        m = ModelField(kind, dict(params))
    else:
        raise WienerLabError(f"no oracle for kind {kind!r}; known: {_ORACLE_KINDS}")
    f = SampledField(g, m.evaluate_scaled(g), f"oracle:{kind}", model=m)
    exact = m.closed_form_ft(g)
    return f, Spectrum(grid=g, values=exact)


def field_from_model(m: ModelField, g: Grid, label: str = "") -> SampledField:
    return SampledField(g, m.evaluate_scaled(g), label or m.kind, model=m)
