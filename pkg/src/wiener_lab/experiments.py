"""Reproducible numerical experiments: decay-rate fits, divergence
classification of Wiener-mass profiles, interpolation-inequality audits,
counterexample demonstrations, and persisted parameter sweeps.

Divergence classifier
---------------------
``classify_profile`` decides CONVERGENT/DIVERGENT from two independent
prongs, both with named calibrated constants:

* mass prong: least-squares slope b of W(R) against a + b*log R over the
  top two octaves must stay below ``W_SLOPE_REL_TOL`` * W(R_max);
* tail prong: a log-log fit of the spectral magnitude (with and without
  the logarithmic correction) is compared against the integrability edge
  |xi|^-n; a fitted tail at or above the edge cannot have a finite
  absolute integral.

The tail prong is what detects borderline failures whose mass profile
grows only like log log R at desk-scale radii.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .calculus import (
    INF,
    BesovSpec,
    besov_norm,
    bessel_potential,
    lp_norm,
    riesz_laplacian,
    spectrum_magnitude_profile,
    wiener_profile,
)
from .criteria import CriterionCase, Verdict, evaluate, gamma as gamma_of
from .grid import Grid, SampledField, WienerLabError, fourier_transform, make_grid, pointwise
from .models import (
    ChirpParams,
    CutoffSpec,
    ModelField,
    adequate_chirp_box,
    chirp,
    field_from_model,
    nu,
)
from .partition import DyadicPartition, make_partition
from .weights import WeightSpec, power_weight, unit_weight, weight_eval, weight_pow

# --- calibrated classifier constants (see README for the calibration set) ---
W_SLOPE_REL_TOL = 0.12      # mass prong: b / W(R_max) above this is divergent
TAIL_POWER_MARGIN = 0.05    # raw tail within this of the |xi|^-n edge diverges
BOUNDARY_LOG_TOL = 0.07     # log-corrected tail within this of -n diverges
FIT_QUALITY_RMS_MAX = 0.25  # fits with worse residual RMS abstain
ALIASING_GUARD = np.sqrt(2.0)   # exclude the top half-octave below Nyquist
STATIONARY_SAFETY = 0.95        # stationary points must stay inside this box ratio

MIN_FIT_POINTS = 16


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    window: tuple[float, float]
    residual_rms: float
    count: int
    log_correction: bool = False

    def to_json(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "window": list(self.window),
            "residual_rms": self.residual_rms,
            "count": self.count,
            "log_correction": self.log_correction,
        }


def rate_fit(xi, magnitude, window, log_correction: bool = False) -> FitResult:
    """Least-squares slope of log(magnitude) against log|xi| in the window.

    With log_correction the magnitudes are premultiplied by log|xi| (or by
    log(1/|xi|) when the window sits below |xi| = 1), so a tail of the form
    |xi|^p / log|xi| fits with slope p.
    """
    xi = np.asarray(xi, dtype=float)
    mag = np.asarray(magnitude, dtype=float)
    lo, hi = float(window[0]), float(window[1])
    sel = (xi >= lo) & (xi <= hi)
    if not np.any(sel):
        raise WienerLabError(f"empty fit window [{lo}, {hi}]")
    x, m = xi[sel], mag[sel]
    if x.size < MIN_FIT_POINTS:
        raise WienerLabError(f"fit window holds {x.size} points; need >= {MIN_FIT_POINTS}")
    if np.any(m <= 0):
        raise WienerLabError("nonpositive magnitudes in the fit window")
    if log_correction:
        low_branch = np.sqrt(lo * hi) < 1.0
        corr = np.log(1.0 / x) if low_branch else np.log(x)
        if np.any(corr <= 0):
            raise WienerLabError("log correction needs the window on one side of |xi| = 1")
        m = m * corr
    lx, ly = np.log(x), np.log(m)
    A = np.vstack([np.ones_like(lx), lx]).T
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - A @ coef
    return FitResult(
        slope=float(coef[1]),
        intercept=float(coef[0]),
        window=(float(x.min()), float(x.max())),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        count=int(x.size),
        log_correction=log_correction,
    )


def fit_window(g: Grid, lo: float, hi: float, chirp_alpha: float | None = None,
               cutoff_outer: float = 2.0) -> tuple[float, float]:
    """Clip a requested window by the aliasing, truncation and (for chirp
    profiles) stationary-reach guards."""
    from .partition import resolvable_range

    k_lo, _ = resolvable_range(g)
    lo_eff = max(lo, 2.0 ** (k_lo + 1))
    hi_eff = min(hi, g.nyquist / ALIASING_GUARD)
    if chirp_alpha is not None and chirp_alpha > 1:
        reach = chirp_alpha * (STATIONARY_SAFETY * (g.L - cutoff_outer)) ** (chirp_alpha - 1.0)
        hi_eff = min(hi_eff, reach)
    if chirp_alpha is not None and chirp_alpha < 1:
        reach = chirp_alpha * (STATIONARY_SAFETY * (g.L - cutoff_outer)) ** (chirp_alpha - 1.0)
        lo_eff = max(lo_eff, reach / STATIONARY_SAFETY)
    if not lo_eff < hi_eff:
        raise WienerLabError(f"window [{lo}, {hi}] collapses after guards: [{lo_eff}, {hi_eff}]")
    return lo_eff, hi_eff


# ---------------------------------------------------------------------------
# Divergence classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DivergenceReport:
    verdict: str                      # CONVERGENT or DIVERGENT
    mass_slope: float
    mass_at_top: float
    fired: tuple                      # names of the prongs that fired
    tail_raw: FitResult | None = None
    tail_corrected: FitResult | None = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "mass_slope": self.mass_slope,
            "mass_at_top": self.mass_at_top,
            "fired": list(self.fired),
            "tail_raw": self.tail_raw.to_json() if self.tail_raw else None,
            "tail_corrected": self.tail_corrected.to_json() if self.tail_corrected else None,
        }


def _mass_slope(radii: np.ndarray, W: np.ndarray) -> float:
    """Slope of W against log R over the top two octaves of the radii."""
    sel = radii >= radii[-1] / 4.0
    if sel.sum() < 2:
        sel = np.ones_like(radii, dtype=bool)
    A = np.vstack([np.ones(int(sel.sum())), np.log(radii[sel])]).T
    coef, *_ = np.linalg.lstsq(A, W[sel], rcond=None)
    return float(coef[1])


def classify_profile(
    radii,
    W,
    n: int,
    tail_raw: FitResult | None = None,
    tail_corrected: FitResult | None = None,
    low_frequency: bool = False,
) -> DivergenceReport:
    """Two-pronged CONVERGENT/DIVERGENT decision for a Wiener-mass profile.

    ``low_frequency`` flips the tail comparison for profiles whose
    divergence candidate sits at |xi| -> 0 rather than at infinity.
    """
    radii = np.asarray(radii, dtype=float)
    W = np.asarray(W, dtype=float)
    if np.any(np.diff(radii) <= 0):
        raise WienerLabError("radii must be strictly increasing")
    if W[-1] == 0:
        return DivergenceReport("CONVERGENT", 0.0, 0.0, ())

    fired = []
    b = _mass_slope(radii, W)
    if b >= W_SLOPE_REL_TOL * W[-1]:
        fired.append("mass_slope")

    usable = [
        f for f in (tail_raw, tail_corrected)
        if f is not None and f.residual_rms <= FIT_QUALITY_RMS_MAX
    ]
    if usable:
        best = min(usable, key=lambda f: f.residual_rms)
        tol = BOUNDARY_LOG_TOL if best.log_correction else TAIL_POWER_MARGIN
        if low_frequency:
            nonintegrable = best.slope <= -n + tol
        else:
            nonintegrable = best.slope >= -n - tol
        if nonintegrable:
            fired.append("tail_fit")

    verdict = "DIVERGENT" if fired else "CONVERGENT"
    return DivergenceReport(
        verdict=verdict,
        mass_slope=b,
        mass_at_top=float(W[-1]),
        fired=tuple(fired),
        tail_raw=tail_raw,
        tail_corrected=tail_corrected,
    )


def default_radii(g: Grid, chirp_alpha: float | None = None) -> list[float]:
    """Dyadic radii 4, 8, ... up to the guarded top of the band."""
    top = g.nyquist / ALIASING_GUARD
    if chirp_alpha is not None and chirp_alpha > 1:
        top = min(top, chirp_alpha * (STATIONARY_SAFETY * (g.L - 2.0)) ** (chirp_alpha - 1.0))
    j_hi = int(np.floor(np.log2(top)))
    return [2.0**j for j in range(2, j_hi + 1)]


def _tail_fits(f: SampledField, window: tuple[float, float]) -> tuple[FitResult, FitResult]:
    xi, mag = spectrum_magnitude_profile(f)
    raw = rate_fit(xi, mag, window, log_correction=False)
    corr = rate_fit(xi, mag, window, log_correction=True)
    return raw, corr


@dataclass(frozen=True)
class ThresholdRow:
    alpha: float
    beta: float
    radii: tuple
    profile: tuple
    report: DivergenceReport
    predicted: str
    agree: bool


def wiener_threshold_sweep(
    alpha: float,
    n: int,
    betas,
    radii=None,
    g: Grid | None = None,
    cutoff: CutoffSpec | None = None,
) -> list[ThresholdRow]:
    """Wiener-mass profiles and divergence verdicts across a beta list,
    checked against the symbolic dichotomy at 2*beta = n*alpha."""
    cutoff = cutoff or CutoffSpec()
    if g is None:
        if n != 1:
            raise WienerLabError("provide a grid explicitly for n > 1 sweeps")
        g = make_grid(1, adequate_chirp_box(alpha, 1 << 20), 1 << 20)
    rows = []
    for beta in betas:
        f = chirp(ChirpParams(alpha=alpha, beta=float(beta), n=n), cutoff, g)
        rr = list(radii) if radii is not None else default_radii(g, chirp_alpha=alpha)
        W = wiener_profile(f, rr)
        tail_raw = tail_corr = None
        if n == 1:
            win = fit_window(g, 2.0 ** (np.log2(rr[-1]) - 4), rr[-1], chirp_alpha=alpha,
                             cutoff_outer=cutoff.outer)
            tail_raw, tail_corr = _tail_fits(f, win)
        report = classify_profile(rr, W, n, tail_raw, tail_corr)
        pred = evaluate(CriterionCase("CHIRP", n=n, alpha=alpha, beta=beta))
        predicted = "CONVERGENT" if pred.status == "SUFFICIENT" else (
            "DIVERGENT" if pred.status == "SHARP_FAIL_REGION" else "NOT_COVERED"
        )
        rows.append(
            ThresholdRow(
                alpha=float(alpha),
                beta=float(beta),
                radii=tuple(rr),
                profile=tuple(W),
                report=report,
                predicted=predicted,
                agree=(predicted == report.verdict),
            )
        )
    return rows


# ---------------------------------------------------------------------------
# Interpolation-inequality audits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GnParams:
    tau: float
    s: float
    p: float
    q: float
    r: float
    sigma: float = 0.0
    u: WeightSpec = field(default_factory=unit_weight)
    v: WeightSpec = field(default_factory=unit_weight)
    mode: str = "lebesgue"  # or "besov"
    eta: float = 2.0


@dataclass(frozen=True)
class GnReport:
    lhs: float
    rhs: float
    ratio: float
    delta: float
    gamma: float
    notes: tuple = ()

    def to_json(self) -> dict:
        return {
            "lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio,
            "delta": self.delta, "gamma": self.gamma, "notes": list(self.notes),
        }


def gn_delta(n: int, tau, sigma, s, p, q, r) -> float:
    num = tau - sigma + n * (_inv(q) - _inv(p))
    den = s - sigma + n * (_inv(q) - _inv(r))
    if den == 0:
        raise WienerLabError("degenerate interpolation: s - n/r == sigma - n/q")
    return num / den


def _inv(x) -> float:
    return 0.0 if x == INF else 1.0 / float(x)


def _weight_field(g: Grid, w: WeightSpec) -> SampledField:
    return SampledField(g, np.asarray(weight_eval(w, g.x_radius()), dtype=complex), label="weight")


def gn_ratio(f: SampledField, params: GnParams, P: DyadicPartition | None = None) -> GnReport:
    """Ratio of the interpolated derivative norm to the weighted product
    bound; for admissible parameter tuples the ratio stays below an
    ensemble constant."""
    n = f.grid.n
    gam = float(gamma_of(params.p, params.q, params.r))
    delta = float(gn_delta(n, params.tau, params.sigma, params.s, params.p, params.q, params.r))
    notes = []
    if params.mode == "lebesgue":
        lhs = lp_norm(riesz_laplacian(f, params.tau) if params.tau != 0 else f, params.p)
        u_w = weight_pow(params.u, 1.0 / (1.0 - gam)) if gam != 1.0 else params.u
        rhs1 = lp_norm(f, params.q, u_w)
        if params.v.kind == "one":
            inner = f
        else:
            v_w = weight_pow(params.v, 1.0 / (params.r * gam)) if gam != 0 else params.v
            inner = pointwise("mul", f, _weight_field(f.grid, v_w))
        rhs2 = lp_norm(riesz_laplacian(inner, params.s) if params.s != 0 else inner, params.r)
    elif params.mode == "besov":
        if P is None:
            P = make_partition(f.grid)
        lhs = besov_norm(f, BesovSpec(params.tau, params.p, params.eta, homogeneous=True), P).value
        u_w = weight_pow(params.u, 1.0 / (1.0 - gam)) if gam != 1.0 else params.u
        v_w = weight_pow(params.v, 1.0 / gam) if gam != 0 else params.v
        rhs1 = besov_norm(f, BesovSpec(params.sigma, params.q, INF, True, u_w), P).value
        rhs2 = besov_norm(f, BesovSpec(params.s, params.r, INF, True, v_w), P).value
    else:
        raise WienerLabError(f"unknown gn mode {params.mode!r}")

    rhs = rhs1 ** (1.0 - delta) * rhs2**delta
    if rhs == 0 and lhs > 0:
        notes.append("truncation artifact: zero right-hand side with nonzero left-hand side")
        ratio = INF
    else:
        ratio = lhs / rhs if rhs > 0 else 0.0
    return GnReport(lhs=lhs, rhs=rhs, ratio=ratio, delta=delta, gamma=gam, notes=tuple(notes))


def b21_bound_audit(fields, P: DyadicPartition | None = None) -> dict:
    """Max ratio of the full-band Wiener mass to the dyadic norm with
    smoothness n/2, integrability 2 and summation exponent 1."""
    out = []
    for f in fields:
        if float(np.max(np.abs(f.values))) == 0.0:
            continue  # 0/0 excluded from ensembles
        Pf = P or make_partition(f.grid)
        spec = BesovSpec(s=f.grid.n / 2.0, p=2.0, q_sum=1.0, homogeneous=True)
        denom = besov_norm(f, spec, Pf).value
        num = wiener_profile(f, [INF])[0]
        out.append({"label": f.label, "wiener": num, "dyadic": denom, "ratio": num / denom})
    if not out:
        raise WienerLabError("empty ensemble")
    return {"per_field": out, "max_ratio": max(r["ratio"] for r in out)}


# ---------------------------------------------------------------------------
# Sharpness demonstrations
# ---------------------------------------------------------------------------

ALPHA_SEARCH_CAP = 2.05  # largest chirp exponent resolvable on the default grids


@dataclass(frozen=True)
class NormCheck:
    name: str
    value: float
    out_of_band: float


@dataclass(frozen=True)
class DemoReport:
    prop_id: str
    status: str                       # NOT_COVERED on refusal else OK
    criterion: Verdict
    model: dict | None = None
    norms: tuple = ()
    divergence: DivergenceReport | None = None
    predicted: str | None = None
    agree: bool | None = None
    notes: tuple = ()

    def to_json(self) -> dict:
        return {
            "prop_id": self.prop_id,
            "status": self.status,
            "criterion": self.criterion.to_json(),
            "model": self.model,
            "norms": [{"name": c.name, "value": c.value, "oob": c.out_of_band} for c in self.norms],
            "divergence": self.divergence.to_json() if self.divergence else None,
            "predicted": self.predicted,
            "agree": self.agree,
            "notes": list(self.notes),
        }


def _field_oob(f: SampledField, P: DyadicPartition) -> float:
    from .calculus import _out_of_band_fraction

    return _out_of_band_fraction(fourier_transform(f), None, 2.0 ** (P.k_hi + 1))


def _choose_failing_chirp(n, q, r, s, eps, flipped: bool) -> tuple[float, float] | None:
    """Pick (alpha, beta) so the oscillating model lies in the demanded
    weighted spaces while 2*beta <= n*alpha keeps it outside the Wiener
    class.  Derived from exponent counting on the weighted integrals."""
    q, r, s, eps = float(q), float(r), float(s), float(eps)
    gam = (2.0 - q) / (r - q)
    margin = 0.05
    if flipped:
        beta_lb = n / q - eps / (q * (1.0 - gam))
        h_gain = -eps / (r * gam)
    else:
        beta_lb = n / q + eps / (q * (1.0 - gam))
        h_gain = eps / (r * gam)
    beta_lb = max(beta_lb, 0.05)
    for beta in np.arange(beta_lb + margin, beta_lb + 2.0, 0.01):
        alpha_mem = 1.0 + (beta + h_gain - n / r - margin) / s
        alpha_min = 2.0 * beta / n + margin
        alpha_hi = min(alpha_mem, ALPHA_SEARCH_CAP)
        if alpha_min <= alpha_hi:
            alpha = 0.5 * (alpha_min + alpha_hi)
            if abs(alpha - 1.0) > 0.05:
                return float(alpha), float(beta)
    return None


def _divergence_for(f: SampledField, g: Grid, alpha: float | None,
                    cutoff: CutoffSpec) -> DivergenceReport:
    radii = default_radii(g, chirp_alpha=alpha)
    W = wiener_profile(f, radii)
    tail_raw = tail_corr = None
    low = alpha is not None and alpha < 1
    if g.n == 1:
        if low:
            win = fit_window(g, 4.0 * np.pi / g.L, 0.9, chirp_alpha=alpha,
                             cutoff_outer=cutoff.outer)
        else:
            win = fit_window(g, radii[-1] / 16.0, radii[-1], chirp_alpha=alpha,
                             cutoff_outer=cutoff.outer)
        try:
            xi, mag = spectrum_magnitude_profile(f)
            tail_raw = rate_fit(xi, mag, win, log_correction=False)
            tail_corr = rate_fit(xi, mag, win, log_correction=True)
        except WienerLabError:
            pass
    return classify_profile(np.asarray(radii), np.asarray(W), g.n,
                            tail_raw, tail_corr, low_frequency=low)


def sharpness_demo(prop_id: str, params: dict, g: Grid | None = None,
                   N: int = 1 << 20) -> DemoReport:
    """Construct the counterexample field for a sharpness region, verify its
    weighted norms are finite on the grid (with resolvability diagnostics)
    and that its Wiener profile classifies as divergent."""
    if prop_id not in ("PROP63", "PROP64a", "PROP64b"):
        raise WienerLabError(f"unknown sharpness demo {prop_id!r}")
    n = int(params.get("n", 1))
    eps = float(params["epsilon"])
    cutoff = CutoffSpec(*params.get("cutoff", (1.0, 2.0)))

    case_kwargs = dict(n=n, epsilon=Fraction(str(eps)).limit_denominator(10**6))
    for key in ("q", "r", "s"):
        if key in params:
            case_kwargs[key] = params[key]
    verdict = evaluate(CriterionCase(prop_id, **case_kwargs))
    if verdict.status != "SHARP_FAIL_REGION":
        return DemoReport(prop_id=prop_id, status="NOT_COVERED", criterion=verdict,
                          notes=("hypotheses not satisfied; refusing the construction",))

    if prop_id == "PROP64b":
        alpha = 1.0 + 2.0 * eps / n
        if g is None:
            g = make_grid(n, adequate_chirp_box(alpha, N), N)
        f = nu(alpha, cutoff, g)
        P = make_partition(g)
        oob = _field_oob(f, P)
        norms = (
            NormCheck("L2(power(+eps))", lp_norm(f, 2.0, power_weight(eps)), oob),
            NormCheck("H^n_2(power(-eps))",
                      lp_norm(bessel_potential(f, n), 2.0, power_weight(-eps)), oob),
        )
        model = ModelField("nu", {"alpha": alpha, "cutoff": (cutoff.inner, cutoff.outer)}).to_json()
        div = _divergence_for(f, g, alpha, cutoff)
        return DemoReport(prop_id, "OK", verdict, model, norms, div,
                          predicted="DIVERGENT", agree=(div.verdict == "DIVERGENT"))

    q, r, s = float(params["q"]), float(params["r"]), float(params["s"])
    gam = (2.0 - q) / (r - q)
    flipped = prop_id == "PROP64a"
    lhs = (1 - n / (2 * s)) / q + (n / (2 * s)) / r
    equality = abs(lhs - 0.5) <= 1e-12
    if equality and not flipped:
        alpha = 2.0 / q
        if g is None:
            g = make_grid(n, adequate_chirp_box(max(alpha, 1.01), N), N)
        f = nu(alpha, cutoff, g)
        model = ModelField("nu", {"alpha": alpha, "cutoff": (cutoff.inner, cutoff.outer)}).to_json()
        beta = n * alpha / 2.0
    else:
        picked = _choose_failing_chirp(n, q, r, s, eps, flipped)
        if picked is None:
            return DemoReport(prop_id, "NOT_COVERED", verdict,
                              notes=("no resolvable oscillating model satisfies the "
                                     "membership and failure constraints",))
        alpha, beta = picked
        if g is None:
            g = make_grid(n, adequate_chirp_box(alpha, N), N)
        f = chirp(ChirpParams(alpha=alpha, beta=beta, n=n), cutoff, g)
        model = ModelField("chirp", {"alpha": alpha, "beta": beta,
                                     "cutoff": (cutoff.inner, cutoff.outer)}).to_json()

    sgn = -1.0 if flipped else 1.0
    wq = power_weight(sgn * eps / (1.0 - gam))
    wr = power_weight(-sgn * eps / gam)
    P = make_partition(g)
    oob = _field_oob(f, P)
    norms = (
        NormCheck(f"L{q:g}(w)", lp_norm(f, q, wq), oob),
        NormCheck(f"H^{s:g}_{r:g}(w)", lp_norm(bessel_potential(f, s), r, wr), oob),
    )
    div = _divergence_for(f, g, alpha, cutoff)
    return DemoReport(prop_id, "OK", verdict, model, norms, div,
                      predicted="DIVERGENT", agree=(div.verdict == "DIVERGENT"),
                      notes=(f"model decay beta={beta:g}, oscillation alpha={alpha:g}",))


# ---------------------------------------------------------------------------
# Persisted sweeps
# ---------------------------------------------------------------------------

SCHEMA_VERSION = "wlab-v1"

CLASSIFY_COLUMNS = (
    "criterion_id", "n", "p", "q", "r", "s", "sigma", "tau", "epsilon",
    "alpha", "beta", "status", "gamma", "theta", "delta", "lambda", "sigma1",
)

CHIRP_COLUMNS = ("alpha", "beta", "R", "W", "verdict", "predicted", "agree")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment_id: str
    kind: str                      # "classify" or "chirp_threshold"
    seed: int
    out: str
    lattice: dict = field(default_factory=dict)
    grid: dict | None = None
    criterion: str | None = None
    fixed: dict = field(default_factory=dict)
    radii_exponents: list | None = None

    @staticmethod
    def from_json(obj: dict) -> "ExperimentConfig":
        validate_config(obj)
        return ExperimentConfig(
            experiment_id=obj["experiment_id"],
            kind=obj["kind"],
            seed=int(obj["seed"]),
            out=obj["out"],
            lattice=dict(obj.get("lattice", {})),
            grid=obj.get("grid"),
            criterion=obj.get("criterion"),
            fixed=dict(obj.get("fixed", {})),
            radii_exponents=obj.get("radii_exponents"),
        )


def validate_config(obj: dict) -> None:
    import jsonschema

    schema_path = os.path.join(os.path.dirname(__file__), "schemas",
                               "experiment_config.schema.json")
    with open(schema_path, "r", encoding="utf-8") as fh:
        schema = json.load(fh)
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as exc:
        raise WienerLabError(f"invalid experiment config: {exc.message}") from exc


def _num(x) -> str:
    """Locale-independent scalar formatting for CSV cells."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        x = float(x)
    if isinstance(x, float) and x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x) if isinstance(x, float) else str(x)


def write_csv(path: str, columns, rows) -> None:
    """Atomic CSV write: header plus pre-formatted cell strings."""
    text = ",".join(columns) + "\n"
    for row in rows:
        text += ",".join(_num(c) for c in row) + "\n"
    _atomic_write(path, text)


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def classify_rows(criterion: str, lattice: dict, fixed: dict, n: int = 1) -> list[tuple]:
    """Verdict rows over the cartesian lattice, sorted by the lattice key."""
    keys = sorted(lattice.keys())
    rows = []

    def rec_walk(i, chosen):
        if i == len(keys):
            kwargs = {**fixed, **chosen}
            case = CriterionCase(criterion, n=int(kwargs.pop("n", n)), **kwargs)
            v = evaluate(case)
            rows.append(_classify_row(case, v))
            return
        for val in lattice[keys[i]]:
            rec_walk(i + 1, {**chosen, keys[i]: val})

    rec_walk(0, {})
    rows.sort(key=lambda r: tuple(str(c) for c in r))
    return rows


def _classify_row(case: CriterionCase, v: Verdict) -> tuple:
    d = v.derived
    return (
        case.criterion_id, case.n,
        _frac_str(case.p), _frac_str(case.q), _frac_str(case.r), _frac_str(case.s),
        _frac_str(case.sigma), _frac_str(case.tau), _frac_str(case.epsilon),
        _frac_str(case.alpha), _frac_str(case.beta),
        v.status,
        _maybe_float(d.get("gamma")), _maybe_float(d.get("theta")),
        _maybe_float(d.get("delta")), _maybe_float(d.get("lambda")),
        _maybe_float(d.get("sigma1")),
    )


def _frac_str(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if x == INF:
        return "inf"
    return _num(float(x))


def _maybe_float(x):
    return None if x is None else float(x)


def run_sweep(cfg: ExperimentConfig) -> dict:
    """Execute a config and persist CSV plus a JSON mirror; reruns with the
    same config are byte-identical."""
    if cfg.kind == "classify":
        if not cfg.criterion:
            raise WienerLabError("classify sweep needs a criterion")
        if not cfg.lattice:
            raise WienerLabError("empty lattice")
        rows = classify_rows(cfg.criterion, cfg.lattice, cfg.fixed)
        columns = CLASSIFY_COLUMNS
    elif cfg.kind == "chirp_threshold":
        gp = cfg.grid or {}
        alpha = float(cfg.fixed.get("alpha", 2.0))
        n = int(gp.get("n", 1))
        N = int(gp.get("N", 1 << 20))
        L = float(gp.get("L", adequate_chirp_box(alpha, N)))
        g = make_grid(n, L, N)
        betas = cfg.lattice.get("beta")
        if not betas:
            raise WienerLabError("chirp_threshold sweep needs a beta lattice")
        radii = [2.0**j for j in cfg.radii_exponents] if cfg.radii_exponents else None
        srows = wiener_threshold_sweep(alpha, n, betas, radii, g)
        rows = []
        for tr in sorted(srows, key=lambda t: t.beta):
            for R, Wv in zip(tr.radii, tr.profile):
                rows.append((tr.alpha, tr.beta, R, Wv, tr.report.verdict,
                             tr.predicted, tr.agree))
        columns = CHIRP_COLUMNS
    else:
        raise WienerLabError(f"unknown experiment kind {cfg.kind!r}")

    csv_path = cfg.out + ".csv"
    json_path = cfg.out + ".json"
    write_csv(csv_path, columns, rows)
    mirror = {
        "schema": SCHEMA_VERSION,
        "experiment_id": cfg.experiment_id,
        "kind": cfg.kind,
        "seed": cfg.seed,
        "columns": list(columns),
        "rows": [[(_num(c) if not isinstance(c, str) else c) for c in row] for row in rows],
    }
    _atomic_write(json_path, json.dumps(mirror, indent=1, sort_keys=True) + "\n")
    return {"rows": rows, "columns": columns, "csv": csv_path, "json": json_path}
