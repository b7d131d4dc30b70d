"""Symbolic membership criteria and their derived interpolation exponents.

Each criterion classifies a parameter tuple into

    SUFFICIENT        -- the criterion guarantees membership,
    SHARP_FAIL_REGION -- a counterexample family is known in this region,
    BOUNDARY          -- equality case: sufficiency is not guaranteed
                         (only the stated q = r = 2 carve-outs are exempt),
    NOT_COVERED       -- parameters outside the criterion's hypotheses.

Comparisons are exact when every input is rational (int, Fraction or a
string like "4/3"); float inputs fall back to a 1e-12 comparison margin,
recorded in the verdict notes.

Criterion identifiers: THM_A, THM_B, PQ_1D, THM_C, TH31, TH32, COR33,
COR34, COR35, PROP63, PROP64a, PROP64b, CHIRP.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .grid import WienerLabError

INF = float("inf")
FLOAT_MARGIN = 1e-12

CRITERION_IDS = (
    "THM_A", "THM_B", "PQ_1D", "THM_C", "TH31", "TH32",
    "COR33", "COR34", "COR35", "PROP63", "PROP64a", "PROP64b", "CHIRP",
)

DERIVED_KEYS = ("gamma", "theta", "delta", "lambda", "sigma1")


def as_number(v):
    """Normalise a parameter: rationals stay exact, floats stay floats."""
    if v is None:
        return None
    if isinstance(v, bool):
        raise WienerLabError("boolean is not a numeric parameter")
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("inf", "infinity", "oo"):
            return INF
        return Fraction(s)
    if isinstance(v, float):
        if v == INF:
            return INF
        if v == int(v) and abs(v) < 1e15:
            return Fraction(int(v))
        return v
    raise WienerLabError(f"cannot interpret parameter {v!r}")


def _is_exact(*vals) -> bool:
    return all(v is None or isinstance(v, Fraction) for v in vals)


def sign_of(x, exact: bool) -> int:
    """-1 / 0 / +1 with the float margin applied in inexact mode."""
    if isinstance(x, Fraction):
        return (x > 0) - (x < 0)
    if not exact and abs(x) <= FLOAT_MARGIN:
        return 0
    return (x > 0) - (x < 0)


def rec(x):
    """1/x with 1/inf = 0, exact for Fractions."""
    if x == INF:
        return Fraction(0)
    if isinstance(x, Fraction):
        return 1 / x
    return 1.0 / x


@dataclass(frozen=True)
class CriterionCase:
    criterion_id: str
    n: int = 1
    p: object = None
    q: object = None
    r: object = None
    s: object = None
    sigma: object = None
    tau: object = None
    epsilon: object = None
    alpha: object = None
    beta: object = None

    def __post_init__(self):
        if self.criterion_id not in CRITERION_IDS:
            raise WienerLabError(
                f"unknown criterion {self.criterion_id!r}; known: {CRITERION_IDS}"
            )
        for name in ("p", "q", "r", "s", "sigma", "tau", "epsilon", "alpha", "beta"):
            object.__setattr__(self, name, as_number(getattr(self, name)))
        if self.n not in (1, 2, 3):
            raise WienerLabError(f"dimension must be 1..3, got {self.n}")


@dataclass(frozen=True)
class Verdict:
    status: str
    derived: dict = field(default_factory=dict)
    notes: tuple = ()

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "derived": {k: (None if v is None else float(v)) for k, v in self.derived.items()},
            "notes": list(self.notes),
        }


def gamma(p, q, r):
    """Interpolation fraction: (p-q)/(r-q) for q<p, (q-p)/(q-r) for r<p."""
    p, q, r = as_number(p), as_number(q), as_number(r)
    exact = _is_exact(p, q, r)
    if sign_of(p - q, exact) > 0 and sign_of(r - p, exact) > 0:
        if r == INF:
            return Fraction(0) if exact else 0.0
        return (p - q) / (r - q)
    if sign_of(p - r, exact) > 0 and sign_of(q - p, exact) > 0:
        if q == INF:
            return Fraction(1) if exact else 1.0
        return (q - p) / (q - r)
    raise WienerLabError(f"gamma needs q < p < r or r < p < q, got p={p}, q={q}, r={r}")


def derived_exponents(case: CriterionCase) -> tuple[dict, tuple]:
    """All derivable exponents for the case; absent entries carry a reason.

    Defaults tau = n/2, p = 2, sigma = 0 apply when the criterion fixes
    them (the membership-in-Wiener specialisation).
    """
    notes: list[str] = []
    n = Fraction(case.n)
    p = case.p if case.p is not None else Fraction(2)
    tau = case.tau if case.tau is not None else n / 2
    sigma = case.sigma if case.sigma is not None else Fraction(0)
    q, r, s = case.q, case.r, case.s
    out: dict = {k: None for k in DERIVED_KEYS}
    exact = _is_exact(p, q, r, s, sigma, tau)

    if q is not None and r is not None:
        try:
            out["gamma"] = gamma(p, q, r)
        except WienerLabError:
            notes.append("gamma undefined: ordering q<p<r or r<p<q fails")
        if sign_of(rec(q) - rec(r), exact) != 0:
            out["lambda"] = (rec(q) - rec(p)) / (rec(q) - rec(r))
        else:
            notes.append("lambda undefined: 1/q == 1/r")
        out["sigma1"] = sigma - n * (rec(q) - rec(p))
    if s is not None:
        if sign_of(s - sigma, exact) != 0:
            out["theta"] = (tau - sigma) / (s - sigma)
        else:
            notes.append("theta undefined: s == sigma")
        if q is not None and r is not None:
            degenerate = sign_of((s - n * rec(r)) - (sigma - n * rec(q)), exact) == 0
            if degenerate:
                notes.append("delta degenerate: s - n/r == sigma - n/q")
            else:
                out["delta"] = (tau - sigma + n * (rec(q) - rec(p))) / (
                    s - sigma + n * (rec(q) - rec(r))
                )
    if not exact:
        notes.append(f"float comparison margin {FLOAT_MARGIN:g}")
    return out, tuple(notes)


def _verdict(case: CriterionCase, status: str, notes) -> Verdict:
    derived, dnotes = derived_exponents(case)
    return Verdict(status=status, derived=derived, notes=tuple(notes) + dnotes)


def _not_covered(case: CriterionCase, why: str) -> Verdict:
    return _verdict(case, "NOT_COVERED", (why,))


def _ordered(a, b, exact) -> bool:
    return sign_of(b - a, exact) > 0


def evaluate(case: CriterionCase) -> Verdict:
    """Classify the case; out-of-range parameters yield NOT_COVERED, never
    an exception."""
    try:
        return _EVALUATORS[case.criterion_id](case)
    except WienerLabError as exc:  # malformed inputs stay non-throwing
        return _verdict(case, "NOT_COVERED", (f"invalid parameters: {exc}",))


# -- individual criteria -----------------------------------------------------


def _eval_thm_a(case: CriterionCase) -> Verdict:
    s = case.s if case.s is not None else case.alpha
    if s is None:
        return _not_covered(case, "missing differentiation order s")
    exact = _is_exact(s)
    t = sign_of(s - Fraction(case.n, 2), exact)
    if t > 0:
        return _verdict(case, "SUFFICIENT", ("square-integrable route: s > n/2",))
    if t == 0:
        return _verdict(case, "BOUNDARY", ("s == n/2: no conclusion at equality",))
    return _not_covered(case, "s < n/2: criterion gives no conclusion")


def _eval_thm_b(case: CriterionCase) -> Verdict:
    p = case.p
    if p is None:
        return _not_covered(case, "missing integrability p")
    exact = _is_exact(p)
    if sign_of(p - 1, exact) > 0 and sign_of(Fraction(2) - p, exact) >= 0:
        return _verdict(case, "SUFFICIENT", ("mixed-derivative route: 1 < p <= 2",))
    return _not_covered(case, "needs 1 < p <= 2")


def _eval_pq_1d(case: CriterionCase) -> Verdict:
    p, q = case.p, case.q
    if case.n != 1:
        return _not_covered(case, "one-dimensional criterion")
    if p is None or q is None:
        return _not_covered(case, "missing p or q")
    exact = _is_exact(p, q)
    if not (sign_of(p - 1, exact) >= 0 and p != INF):
        return _not_covered(case, "needs 1 <= p < inf")
    if not (sign_of(q - 1, exact) > 0 and q != INF):
        return _not_covered(case, "needs 1 < q < inf")
    t = sign_of(rec(p) + rec(q) - 1, exact)
    if t > 0:
        return _verdict(case, "SUFFICIENT", ("1/p + 1/q > 1",))
    if t < 0:
        return _verdict(case, "SHARP_FAIL_REGION", ("1/p + 1/q < 1: counterexample exists",))
    if sign_of(p - 2, exact) == 0 and sign_of(q - 2, exact) == 0:
        return _verdict(case, "SUFFICIENT", ("equality line: unique special case p = q = 2",))
    return _verdict(case, "BOUNDARY", ("1/p + 1/q == 1: not sufficient away from p = q = 2",))


def _thmc_lhs(case: CriterionCase):
    n, q, r, s = Fraction(case.n), case.q, case.r, case.s
    return (1 - n / (2 * s)) * rec(q) + (n / (2 * s)) * rec(r) - Fraction(1, 2)


def _eval_thm_c(case: CriterionCase) -> Verdict:
    q, r, s = case.q, case.r, case.s
    if q is None or r is None or s is None:
        return _not_covered(case, "missing q, r or s")
    exact = _is_exact(q, r, s)
    if not sign_of(q, exact) > 0:
        return _not_covered(case, "needs 0 < q <= inf")
    if not (sign_of(r - 1, exact) > 0 and r != INF):
        return _not_covered(case, "needs 1 < r < inf")
    if not sign_of(s - Fraction(case.n) * rec(r), exact) > 0:
        return _not_covered(case, "needs s > n/r")
    if sign_of(q - 2, exact) == 0 and sign_of(r - 2, exact) == 0:
        return _verdict(case, "SUFFICIENT", ("carve-out q = r = 2",))
    t = sign_of(_thmc_lhs(case), exact)
    if t > 0:
        return _verdict(case, "SUFFICIENT", ("(1 - n/2s)/q + (n/2s)/r > 1/2",))
    if t < 0:
        return _verdict(
            case, "SHARP_FAIL_REGION",
            ("strict reverse inequality: counterexample region (integer s, 1 < q, r < inf)",),
        )
    return _verdict(case, "BOUNDARY", ("equality: fails off the q = r = 2 carve-out",))


def _eval_th31(case: CriterionCase) -> Verdict:
    p, q, r, s, sigma, tau = case.p, case.q, case.r, case.s, case.sigma, case.tau
    if None in (p, q, r, s, sigma, tau):
        return _not_covered(case, "missing one of p, q, r, s, sigma, tau")
    exact = _is_exact(p, q, r, s, sigma, tau)
    case_qp = _ordered(q, p, exact) and _ordered(p, r, exact)
    case_rp = _ordered(r, p, exact) and _ordered(p, q, exact)
    if not (sign_of(q, exact) > 0 and sign_of(r, exact) > 0 and (case_qp or case_rp)):
        return _not_covered(case, "needs 0 < q < p < r <= inf or 0 < r < p < q <= inf")
    if not _ordered(sigma, s, exact):
        return _not_covered(case, "needs sigma < s")
    signs = []
    notes = ["weights assumed: u*v >= 1 pointwise"]
    if case_qp:
        signs.append(sign_of(Fraction(case.n) * (rec(q) - rec(p)) - (sigma - tau), exact))
        notes.append("q < p branch: requires u >= 1")
    else:
        signs.append(sign_of((s - tau) - Fraction(case.n) * (rec(r) - rec(p)), exact))
        notes.append("r < p branch: requires v >= 1")
    theta = (tau - sigma) / (s - sigma)
    signs.append(sign_of((1 - theta) * rec(q) + theta * rec(r) - rec(p), exact))
    if all(t > 0 for t in signs):
        return _verdict(case, "SUFFICIENT", tuple(notes))
    if all(t >= 0 for t in signs):
        return _verdict(case, "BOUNDARY", tuple(notes) + ("an interpolation inequality is tight",))
    return _not_covered(case, "an interpolation hypothesis fails strictly")


def _eval_th32(case: CriterionCase) -> Verdict:
    n = Fraction(case.n)
    filled = CriterionCase(
        criterion_id="TH31", n=case.n, p=2, q=case.q, r=case.r,
        s=case.s, sigma=case.sigma if case.sigma is not None else 0, tau=n / 2,
        epsilon=case.epsilon,
    )
    inner = _eval_th31(filled)
    derived, dn = derived_exponents(filled)
    return Verdict(status=inner.status, derived=derived, notes=inner.notes + dn)


def _cor33_like(case: CriterionCase, cid: str) -> Verdict:
    q, r, s = case.q, case.r, case.s
    if q is None or r is None or s is None:
        return _not_covered(case, "missing q, r or s")
    exact = _is_exact(q, r, s)
    branch1 = _ordered(q, 2, exact) and _ordered(2, r, exact) and r != INF and sign_of(q, exact) > 0
    branch2 = (
        _ordered(1, r, exact) and _ordered(r, 2, exact) and _ordered(2, q, exact)
        if cid == "COR33" else False
    )
    if cid in ("COR34", "COR35") and not branch1:
        return _not_covered(case, "needs 0 < q < 2 < r < inf")
    if cid == "COR33" and not (branch1 or branch2):
        return _not_covered(case, "needs 0 < q < 2 < r < inf or 1 < r < 2 < q <= inf")
    if not sign_of(s, exact) > 0:
        return _not_covered(case, "needs s > 0")
    if branch2 and not sign_of(s - Fraction(case.n) * rec(r), exact) > 0:
        return _not_covered(case, "r < 2 branch needs s > n/r")
    if cid == "COR35":
        if not (isinstance(s, Fraction) and s.denominator == 1 and s.numerator % 2 == 0):
            return _not_covered(case, "radial route needs even integer s")
    t = sign_of(_thmc_lhs(case), exact)
    extra = ("radial form",) if cid == "COR35" else ()
    if t > 0:
        return _verdict(case, "SUFFICIENT", extra + ("(1 - n/2s)/q + (n/2s)/r > 1/2",))
    if t < 0:
        return _verdict(case, "SHARP_FAIL_REGION", extra + ("reverse inequality region",))
    return _verdict(case, "BOUNDARY", extra + ("equality case",))


def _eval_prop63(case: CriterionCase) -> Verdict:
    q, r, s = case.q, case.r, case.s
    if q is None or r is None or s is None:
        return _not_covered(case, "missing q, r or s")
    exact = _is_exact(q, r, s)
    b1 = sign_of(q - 1, exact) >= 0 and _ordered(q, 2, exact) and _ordered(2, r, exact) and r != INF
    b2 = sign_of(r - 1, exact) >= 0 and _ordered(r, 2, exact) and _ordered(2, q, exact) and q != INF
    if not (b1 or b2):
        return _not_covered(case, "needs 1 <= q < 2 < r < inf or 1 <= r < 2 < q < inf")
    if not (isinstance(s, Fraction) and s.denominator == 1 and sign_of(s - Fraction(case.n, 2), exact) > 0):
        return _not_covered(case, "needs integer s > n/2")
    t = sign_of(_thmc_lhs(case), exact)
    if t <= 0:
        word = "equality" if t == 0 else "strict"
        return _verdict(
            case, "SHARP_FAIL_REGION",
            (f"{word} case: counterexample family exists for every epsilon > 0",),
        )
    return _not_covered(case, "inside the sufficiency region")


def prop64a_epsilon_threshold(n, q, r):
    """Weight-sign sharpness threshold n(r-2)(2-q)/(2(r-q))."""
    n = Fraction(n)
    return n * (r - 2) * (2 - q) / (2 * (r - q))


def _eval_prop64a(case: CriterionCase) -> Verdict:
    q, r, s, eps = case.q, case.r, case.s, case.epsilon
    if None in (q, r, s, eps):
        return _not_covered(case, "missing q, r, s or epsilon")
    exact = _is_exact(q, r, s, eps)
    if not (sign_of(q - 1, exact) >= 0 and _ordered(q, 2, exact) and _ordered(2, r, exact) and r != INF):
        return _not_covered(case, "needs 1 <= q < 2 < r < inf")
    if not (isinstance(s, Fraction) and s.denominator == 1 and sign_of(s - Fraction(case.n, 2), exact) > 0):
        return _not_covered(case, "needs integer s > n/2")
    if not sign_of(_thmc_lhs(case), exact) > 0:
        return _not_covered(case, "needs the strict sufficiency inequality")
    thr = prop64a_epsilon_threshold(case.n, q, r)
    if sign_of(eps - thr, exact) > 0:
        return _verdict(
            case, "SHARP_FAIL_REGION",
            ("flipped weight signs admit a counterexample for this epsilon",),
        )
    return _not_covered(case, f"epsilon <= threshold {thr}")


def _eval_prop64b(case: CriterionCase) -> Verdict:
    eps = case.epsilon
    if eps is None:
        return _not_covered(case, "missing epsilon")
    exact = _is_exact(eps)
    if sign_of(eps + Fraction(case.n, 2), exact) > 0 and sign_of(eps, exact) != 0:
        return _verdict(
            case, "SHARP_FAIL_REGION",
            ("q = r = 2 with nontrivial power weights fails",),
        )
    return _not_covered(case, "needs epsilon > -n/2 and epsilon != 0")


def _eval_chirp(case: CriterionCase) -> Verdict:
    a, b = case.alpha, case.beta
    if a is None or b is None:
        return _not_covered(case, "missing alpha or beta")
    exact = _is_exact(a, b)
    if not (sign_of(a, exact) > 0 and sign_of(b, exact) > 0):
        return _not_covered(case, "needs alpha, beta > 0")
    if sign_of(a - 1, exact) == 0:
        return _not_covered(case, "alpha = 1 is outside the dichotomy")
    t = sign_of(2 * b - Fraction(case.n) * a, exact)
    if t > 0:
        return _verdict(case, "SUFFICIENT", ("in_w0: 2 beta > n alpha",))
    return _verdict(
        case, "SHARP_FAIL_REGION",
        ("not_in_w0: 2 beta <= n alpha (boundary included)",),
    )


_EVALUATORS = {
    "THM_A": _eval_thm_a,
    "THM_B": _eval_thm_b,
    "PQ_1D": _eval_pq_1d,
    "THM_C": _eval_thm_c,
    "TH31": _eval_th31,
    "TH32": _eval_th32,
    "COR33": lambda c: _cor33_like(c, "COR33"),
    "COR34": lambda c: _cor33_like(c, "COR34"),
    "COR35": lambda c: _cor33_like(c, "COR35"),
    "PROP63": _eval_prop63,
    "PROP64a": _eval_prop64a,
    "PROP64b": _eval_prop64b,
    "CHIRP": _eval_chirp,
}


def chirp_in_wiener_class(n: int, alpha, beta) -> bool | None:
    """Convenience dichotomy: True above 2 beta = n alpha, False at or
    below, None when alpha = 1."""
    v = evaluate(CriterionCase("CHIRP", n=n, alpha=alpha, beta=beta))
    if v.status == "SUFFICIENT":
        return True
    if v.status == "SHARP_FAIL_REGION":
        return False
    return None
