"""Radial weight families and empirical admissibility diagnostics.

Built-in families (r = |x|):

    power(eps):        (1 + r^2)^(eps/2)
    logpower(a):       (1 + log(1 + r^2))^a
    exp(sign, beta):   exp(sign * r^beta), 0 < beta <= 1
    powerof(base, a):  base(r)^a
    product(parts):    pointwise product

A weight is admissible in the polynomial sense when
w(x) <= c * w(y) * (1 + |x-y|^2)^(alpha/2) for some finite c, alpha >= 0,
and in the exponential sense when w(x) <= C * w(x-y) * exp(d|y|).  The
probe estimates the constants from seeded random pairs and flags sample
pairs that no finite constant of the declared shape covers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import WienerLabError

_KINDS = ("power", "logpower", "exp", "product", "powerof", "one")


@dataclass(frozen=True)
class WeightSpec:
    kind: str
    params: tuple = ()
    parts: tuple = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise WienerLabError(f"unknown weight kind {self.kind!r}; known: {_KINDS}")
        if self.kind == "exp":
            sign, beta = self.params
            if sign not in (+1, -1, +1.0, -1.0):
                raise WienerLabError(f"exp weight sign must be +-1, got {sign}")
            if not (0 < beta <= 1):
                raise WienerLabError(f"exp weight needs 0 < beta <= 1, got {beta}")

    def to_json(self) -> dict:
        if self.kind == "product":
            return {"kind": "product", "parts": [p.to_json() for p in self.parts]}
        if self.kind == "powerof":
            base, a = self.parts[0], self.params[0]
            return {"kind": "powerof", "base": base.to_json(), "exponent": a}
        return {"kind": self.kind, "params": list(self.params)}

    @staticmethod
    def from_json(obj: dict) -> "WeightSpec":
        kind = obj["kind"]
        if kind == "product":
            return WeightSpec("product", parts=tuple(WeightSpec.from_json(p) for p in obj["parts"]))
        if kind == "powerof":
            return WeightSpec("powerof", params=(obj["exponent"],),
                              parts=(WeightSpec.from_json(obj["base"]),))
        return WeightSpec(kind, params=tuple(obj.get("params", ())))


def unit_weight() -> WeightSpec:
    return WeightSpec("one")


def power_weight(eps: float) -> WeightSpec:
    return WeightSpec("power", (float(eps),))


def logpower_weight(a: float) -> WeightSpec:
    return WeightSpec("logpower", (float(a),))


def exp_weight(sign: int, beta: float) -> WeightSpec:
    return WeightSpec("exp", (int(sign), float(beta)))


def product_weight(*parts: WeightSpec) -> WeightSpec:
    return WeightSpec("product", parts=tuple(parts))


def weight_eval(w: WeightSpec, r) -> np.ndarray | float:
    """Pointwise value at radius r = |x| (scalar or array)."""
    rr = np.asarray(r, dtype=float)
    if w.kind == "one":
        val = np.ones_like(rr)
    elif w.kind == "power":
        (eps,) = w.params
        val = (1.0 + rr**2) ** (eps / 2.0)
    elif w.kind == "logpower":
        (a,) = w.params
        val = (1.0 + np.log1p(rr**2)) ** a
    elif w.kind == "exp":
        sign, beta = w.params
        val = np.exp(sign * rr**beta)
    elif w.kind == "powerof":
        (a,) = w.params
        val = np.asarray(weight_eval(w.parts[0], rr)) ** a
    else:  # product
        val = np.ones_like(rr)
        for part in w.parts:
            val = val * weight_eval(part, rr)
    if np.ndim(r) == 0:
        return float(val)
    return val


def weight_pow(w: WeightSpec, a: float) -> WeightSpec:
    """Symbolic power; weight_eval(weight_pow(w,a), r) == weight_eval(w,r)**a."""
    a = float(a)
    if a == 0.0:
        return unit_weight()
    if w.kind == "one":
        return w
    if w.kind == "power":
        return power_weight(w.params[0] * a)
    if w.kind == "logpower":
        return logpower_weight(w.params[0] * a)
    if w.kind == "exp" and a == -1.0:
        return exp_weight(-w.params[0], w.params[1])
    if w.kind == "powerof":
        return weight_pow(w.parts[0], w.params[0] * a)
    if w.kind == "product":
        return product_weight(*(weight_pow(p, a) for p in w.parts))
    return WeightSpec("powerof", params=(a,), parts=(w,))


def weight_derivative_bound(w: WeightSpec, r_samples: np.ndarray) -> float:
    """max |w'(r)| / w(r) over the samples, from closed-form derivatives.

    Only the built-in families are differentiated; products use the sum of
    the factors' logarithmic derivatives.
    """
    rr = np.asarray(r_samples, dtype=float)
    rr = rr[rr > 0]

    def logderiv(spec: WeightSpec) -> np.ndarray:
        if spec.kind == "one":
            return np.zeros_like(rr)
        if spec.kind == "power":
            (eps,) = spec.params
            return eps * rr / (1.0 + rr**2)
        if spec.kind == "logpower":
            (a,) = spec.params
            return a * (2.0 * rr / (1.0 + rr**2)) / (1.0 + np.log1p(rr**2))
        if spec.kind == "exp":
            sign, beta = spec.params
            return sign * beta * rr ** (beta - 1.0)
        if spec.kind == "powerof":
            return spec.params[0] * logderiv(spec.parts[0])
        return sum(logderiv(p) for p in spec.parts)

    return float(np.max(np.abs(logderiv(w))))


@dataclass(frozen=True)
class AdmissibilityReport:
    mode: str
    c_est: float
    alpha_est: float
    violations: tuple = ()
    derivative_bound: float = float("nan")
    pair_count: int = 0


_ENVELOPE_SLACK = 0.5  # log-units a bin may exceed the fitted envelope


def admissibility_probe(
    w: WeightSpec,
    n: int = 1,
    L: float = 20.0,
    n_pairs: int = 10_000,
    seed: int = 7,
    mode: str = "polynomial",
) -> AdmissibilityReport:
    """Estimate (c, alpha) with w(x) <= c w(y) (1+|x-y|^2)^(alpha/2) over a
    seeded sample of pairs in [-L, L]^n, or (C, d) with
    w(x) <= C w(x-y) e^(d|y|) in exponential mode.

    The fitted envelope (binned by separation) must cover every bin within
    a fixed slack; pairs in bins exceeding it are returned as violations,
    signalling that no finite constant of the declared shape fits.
    """
    if mode not in ("polynomial", "exponential"):
        raise WienerLabError(f"unknown probe mode {mode!r}")
    rng = np.random.default_rng(seed)
    x = rng.uniform(-L, L, size=(n_pairs, n))
    y = rng.uniform(-L, L, size=(n_pairs, n))
    rx = np.linalg.norm(x, axis=1)
    ry = np.linalg.norm(y, axis=1)
    sep = np.linalg.norm(x - y, axis=1)
    wx = np.asarray(weight_eval(w, rx))
    wy = np.asarray(weight_eval(w, ry))
    if np.any(wx <= 0) or np.any(wy <= 0):
        raise WienerLabError("weight evaluates non-positive; spec bug")

    log_ratio = np.log(wx) - np.log(wy)
    if mode == "polynomial":
        predictor = 0.5 * np.log1p(sep**2)
    else:
        predictor = sep

    # Upper envelope per separation bin, then least squares on the envelope.
    order = np.argsort(predictor)
    nbins = 16
    bins = np.array_split(order, nbins)
    px = np.array([predictor[b].max() for b in bins if len(b)])
    py = np.array([log_ratio[b].max() for b in bins if len(b)])
    A = np.vstack([np.ones_like(px), px]).T
    coef, *_ = np.linalg.lstsq(A, py, rcond=None)
    logc, slope = coef
    resid = py - (logc + slope * px)
    bad_bins = np.where(resid > _ENVELOPE_SLACK)[0]
    violations = []
    for bi in bad_bins:
        b = bins[bi]
        worst = b[np.argmax(log_ratio[b] - (logc + slope * predictor[b]))]
        violations.append((tuple(x[worst]), tuple(y[worst])))
    slope = max(0.0, float(slope))
    # inflate c so the inequality holds on every sampled pair
    logc_cover = float(np.max(log_ratio - slope * predictor))
    c_est = float(np.exp(max(logc, logc_cover)))

    r_samples = np.linspace(1e-3, L, 512)
    dbound = weight_derivative_bound(w, r_samples)
    return AdmissibilityReport(
        mode=mode,
        c_est=c_est,
        alpha_est=float(slope),
        violations=tuple(violations),
        derivative_bound=dbound,
        pair_count=n_pairs,
    )
