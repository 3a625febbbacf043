"""Scalar information-theoretic functions and closed-form security bounds.

Everything here is base-2: entropies, divergences, random-coding exponents,
and the decoding / key-security bound formulas used by the simulator.  All
1-D optimizations run over compact intervals with a coarse grid followed by
ternary refinement (the optimized functions are unimodal on these
intervals).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

__all__ = [
    "BoundReport",
    "binary_entropy",
    "divergence",
    "gallager_e0",
    "p_theta",
    "psi",
    "critical_rate",
    "reliability_e",
    "eta",
    "renyi_h",
    "weighted_decoding_bound",
    "gallager_family_bound",
    "qkd_bounds",
    "approach_ratio",
    "emit_csv",
]

GRID_STEP = 1e-3
ARG_TOL = 1e-9


@dataclass
class BoundReport:
    formula_id: str
    value: float
    inputs: dict
    dominated_quantity: float | None = None
    aux: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("bound value must be nonnegative")
        if self.dominated_quantity is not None:
            if self.dominated_quantity > self.value + 1e-9:
                raise ValueError(
                    f"{self.formula_id}: dominated quantity "
                    f"{self.dominated_quantity} exceeds bound {self.value}"
                )

    def to_record(self) -> dict:
        rec = {"formula_id": self.formula_id, "value": self.value}
        rec.update({f"input_{k}": v for k, v in sorted(self.inputs.items())})
        if self.dominated_quantity is not None:
            rec["dominated_quantity"] = self.dominated_quantity
        rec.update({f"aux_{k}": v for k, v in sorted(self.aux.items())})
        return rec


def binary_entropy(p: float) -> float:
    if not 0 <= p <= 1:
        raise ValueError("p must be in [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def divergence(q: float, p: float) -> float:
    """d(q||p) in bits; +inf when the supports are incompatible."""
    if not 0 <= q <= 1 or not 0 <= p <= 1:
        raise ValueError("q, p must be in [0, 1]")
    if (p == 0 and q > 0) or (p == 1 and q < 1):
        return math.inf
    acc = 0.0
    if q > 0:
        acc += q * math.log2(q / p)
    if q < 1:
        acc += (1 - q) * math.log2((1 - q) / (1 - p))
    return acc


def gallager_e0(s: float, p: float) -> float:
    """Random-coding exponent integrand for the binary symmetric channel."""
    if not 0 <= s <= 1:
        raise ValueError("s must be in [0, 1]")
    if not 0 <= p <= 1:
        raise ValueError("p must be in [0, 1]")
    e = 1.0 / (1.0 + s)
    bracket = p**e + (1 - p) ** e
    return s - (1 + s) * math.log2(bracket)


def p_theta(theta: float, p: float) -> float:
    """Tilted crossover probability p^θ / (p^θ + (1-p)^θ)."""
    a, b = p**theta, (1 - p) ** theta
    return a / (a + b)


def psi(theta: float, p: float) -> float:
    """log2(p^θ + (1-p)^θ); cumulant generating function of the tilt."""
    return math.log2(p**theta + (1 - p) ** theta)


def critical_rate(p: float) -> float:
    return 1 - binary_entropy(p_theta(0.5, p))


def _refine(f, lo, hi, tol):
    while hi - lo > tol:
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if f(m1) < f(m2):
            lo = m1
        else:
            hi = m2
    x = (lo + hi) / 2
    return x, f(x)


def maximize_scalar(f, lo: float, hi: float, grid_step=GRID_STEP, tol=ARG_TOL):
    """Grid scan plus ternary refinement; returns (argmax, max)."""
    steps = max(1, int(round((hi - lo) / grid_step)))
    xs = [lo + (hi - lo) * i / steps for i in range(steps + 1)]
    vals = [f(x) for x in xs]
    i = max(range(len(xs)), key=lambda j: vals[j])
    a = xs[max(0, i - 1)]
    b = xs[min(steps, i + 1)]
    x, v = _refine(f, a, b, tol)
    if vals[i] > v:
        return xs[i], vals[i]
    return x, v


def minimize_scalar(f, lo: float, hi: float, grid_step=GRID_STEP, tol=ARG_TOL):
    x, v = maximize_scalar(lambda t: -f(t), lo, hi, grid_step, tol)
    return x, -v


def reliability_e(R: float, p: float) -> tuple[float, float, float]:
    """Random-coding reliability function of the binary symmetric channel.

    Returns (E, s*, identity_residual) where E = max over s in [0,1] of
    -sR + E0(s,p) and the residual is the absolute difference against the
    independent divergence form min over q in [0,1/2] of
    [1-h(q)-R]_+ + d(q||p).
    """
    if not 0 <= R <= 1:
        raise ValueError("R must be in [0, 1]")
    if not 0 <= p <= 0.5:
        raise ValueError("p must be in [0, 1/2]")
    s_star, e_val = maximize_scalar(lambda s: -s * R + gallager_e0(s, p), 0.0, 1.0)
    e_val = max(e_val, 0.0)

    def type_exponent(q):
        d = divergence(q, p)
        if math.isinf(d):
            return math.inf
        return max(1 - binary_entropy(q) - R, 0.0) + d

    _, q_val = minimize_scalar(type_exponent, 0.0, 0.5)
    return e_val, s_star, abs(e_val - q_val)


def eta(l: float, x: float) -> float:
    """h(x) + l x for x <= 1/2, else 1 + l x; concave key-leakage envelope."""
    if l < 0 or x < 0:
        raise ValueError("need l >= 0 and x >= 0")
    if x <= 0.5:
        return binary_entropy(x) + l * x
    return 1 + l * x


def renyi_h(s: float, p: float) -> float:
    """Renyi entropy of order 1-s of a bit: (1/s) log2(p^(1-s)+(1-p)^(1-s))."""
    if not 0 < s <= 1:
        raise ValueError("s must be in (0, 1]")
    if not 0 <= p <= 1:
        raise ValueError("p must be in [0, 1]")
    return math.log2(p ** (1 - s) + (1 - p) ** (1 - s)) / s


def _weight_masses(W) -> list[float]:
    return [float(m) for m in W.mass]


def weighted_decoding_bound(
    W,
    R: float,
    epsilon: float,
    variant: str = "sum",
    k_start: int = 1,
    p: float | None = None,
) -> BoundReport:
    """Average decoding error bound from an error-weight distribution.

    sum variant: ε Σ_k W(k) 2^(-n[1-h(min(k/n,1/2))-R]_+), summing from
    k_start (1 for plain codes, 0 for coset decoding).
    type_method variant: floor(n/2+2) ε 2^(-n min_q [1-h(q)-R]_+ + d(q||p)),
    which needs the crossover probability p.
    Valid only for ε >= 1: the derivation clips per-weight terms at 1.
    """
    if epsilon < 1:
        raise ValueError("the clipped-exponent derivation needs epsilon >= 1")
    if not 0 <= R <= 1:
        raise ValueError("R must be in [0, 1]")
    n = W.n
    if variant == "sum":
        total = 0.0
        masses = _weight_masses(W)
        for k in range(k_start, n + 1):
            if masses[k] == 0:
                continue
            expo = max(1 - binary_entropy(min(k / n, 0.5)) - R, 0.0)
            total += masses[k] * 2.0 ** (-n * expo)
        value = epsilon * total
        return BoundReport(
            "weighted_sum",
            value,
            {"n": n, "R": R, "epsilon": epsilon, "k_start": k_start},
        )
    if variant == "type_method":
        if p is None:
            raise ValueError("type_method needs the crossover probability p")

        def expo(q):
            d = divergence(q, p)
            if math.isinf(d):
                return math.inf
            return max(1 - binary_entropy(q) - R, 0.0) + d

        _, emin = minimize_scalar(expo, 0.0, 0.5)
        value = math.floor(n / 2 + 2) * epsilon * 2.0 ** (-n * emin)
        return BoundReport(
            "type_method",
            value,
            {"n": n, "R": R, "epsilon": epsilon, "p": p},
            aux={"exponent": emin},
        )
    raise ValueError(f"unknown variant: {variant}")


def gallager_family_bound(n: int, R: float, p: float, epsilon: float) -> BoundReport:
    """Average decoding error of an ε-almost universal family on a BSC.

    value is the optimized min over s of ε^s 2^(-n(-sR+E0(s,p))); aux holds
    the looser closed form 2^(-nE(R,p)) max(ε,1).
    """
    if not 0 <= R <= 1 or not 0 <= p <= 1:
        raise ValueError("need R in [0,1] and p in [0,1]")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    log_eps = math.log2(epsilon)

    def log_val(s):
        return s * log_eps - n * (-s * R + gallager_e0(s, p))

    s_star, lv = minimize_scalar(log_val, 0.0, 1.0)
    value = 2.0**lv
    aux = {"s_star": s_star, "value_log2": lv}
    if p <= 0.5:
        e_val, _, _ = reliability_e(R, p)
        aux["loose_value"] = 2.0 ** (-n * e_val) * max(epsilon, 1.0)
        aux["reliability_e"] = e_val
    return BoundReport(
        "family_average", value, {"n": n, "R": R, "p": p, "epsilon": epsilon}, aux=aux
    )


def _log2_binom(n: int, k: int) -> float:
    return (
        math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    ) / math.log(2)


def _phase_sum_log2(n: int, S: float, epsilon: float, W=None, p_ph=None) -> float:
    """log2 of ε Σ_k W(k) 2^(-n[S-h(min(k/n,1/2))]_+).

    With p_ph given, the weights are the binomial distribution computed in
    the log domain, which stays exact enough far beyond exact-rational
    reach.
    """
    terms = []
    if W is not None:
        masses = _weight_masses(W)
        for k in range(n + 1):
            if masses[k] == 0:
                continue
            expo = max(S - binary_entropy(min(k / n, 0.5)), 0.0)
            terms.append(math.log2(masses[k]) - n * expo)
    else:
        if p_ph is None:
            raise ValueError("phase_sum needs a weight distribution or p_ph")
        if p_ph == 0:
            terms.append(-n * max(S, 0.0))
        elif p_ph == 1:
            terms.append(-n * max(S - binary_entropy(min(1.0, 0.5)), 0.0))
        else:
            lp, lq = math.log2(p_ph), math.log2(1 - p_ph)
            for k in range(n + 1):
                w = _log2_binom(n, k) + k * lp + (n - k) * lq
                expo = max(S - binary_entropy(min(k / n, 0.5)), 0.0)
                terms.append(w - n * expo)
    top = max(terms)
    total = top + math.log2(sum(2.0 ** (t - top) for t in terms))
    return total + math.log2(epsilon)


def qkd_bounds(
    n: int,
    approach: str,
    S: float | None = None,
    l: int | None = None,
    p_ph: float | None = None,
    W=None,
    epsilon: float = 1.0,
) -> BoundReport:
    """Closed-form key-security bounds, named by approach.

    phase_sum: trace-distance bound 2√2 √(ε Σ_k W(k) 2^(-n[S-h(k/n)]_+));
      aux carries the matching Holevo bound through η_l and the log2 of the
      inner sum for trend checks.
    phase_iid: 2^(-nE(1-S,p_ph)/2 + 3/2) max(√ε, 1); aux Holevo form
      η_l(2^(-nE) max(ε,1)).
    phase_deterministic: the permutation-orbit forms with ε = n+1.
    delta_biased_d1: (4 + √(n+1) √ε) 2^(-nE(1-S,p_ph)/2).
    delta_biased_chi_b: η_n of the delta_biased_d1 value.
    delta_biased_chi_c: 2 η_u(2^(1 - n max_s (s/(2-s))(S - H_{1-s}(p_ph))))
      with u = ε(n+1)/(4 ln 2) + n.
    """
    if S is None or not 0 <= S <= 1:
        raise ValueError("S must be given in [0, 1]")
    inputs = {"n": n, "S": S, "epsilon": epsilon}
    if l is not None:
        inputs["l"] = l
    if p_ph is not None:
        inputs["p_ph"] = p_ph

    if approach == "phase_sum":
        lg = _phase_sum_log2(n, S, epsilon, W=W, p_ph=p_ph)
        value = 2.0 ** (1.5 + 0.5 * lg)
        aux = {"sum_log2": lg, "value_log2": 1.5 + 0.5 * lg}
        if l is not None:
            aux["chi_value"] = eta(l, 2.0**lg)
        return BoundReport("phase_sum_trace", value, inputs, aux=aux)

    if approach in ("phase_iid", "phase_deterministic", "delta_biased_d1",
                    "delta_biased_chi_b"):
        if p_ph is None:
            raise ValueError(f"{approach} needs p_ph")
        e_val, _, _ = reliability_e(1 - S, p_ph)
        if approach == "phase_iid":
            value = 2.0 ** (-0.5 * n * e_val + 1.5) * max(math.sqrt(epsilon), 1.0)
            aux = {"reliability_e": e_val,
                   "value_log2": -0.5 * n * e_val + 1.5
                   + max(0.5 * math.log2(epsilon), 0.0)}
            if l is not None:
                aux["chi_value"] = eta(l, 2.0 ** (-n * e_val) * max(epsilon, 1.0))
            return BoundReport("phase_iid_trace", value, inputs, aux=aux)
        if approach == "phase_deterministic":
            value = math.sqrt(n + 1) * 2.0 ** (-0.5 * n * e_val + 1.5)
            aux = {"reliability_e": e_val}
            if l is not None:
                aux["chi_value"] = eta(l, (n + 1) * 2.0 ** (-n * e_val))
            return BoundReport("phase_deterministic_trace", value, inputs, aux=aux)
        d1 = (4 + math.sqrt(n + 1) * math.sqrt(epsilon)) * 2.0 ** (-0.5 * n * e_val)
        if approach == "delta_biased_d1":
            return BoundReport(
                "delta_biased_d1", d1, inputs, aux={"reliability_e": e_val}
            )
        return BoundReport(
            "delta_biased_chi_b", eta(n, d1), inputs,
            aux={"reliability_e": e_val, "d1_bound": d1},
        )

    if approach == "delta_biased_chi_c":
        if p_ph is None:
            raise ValueError("delta_biased_chi_c needs p_ph")

        def gain(s):
            if s == 0:
                return 0.0
            return (s / (2 - s)) * (S - renyi_h(s, p_ph))

        _, g = maximize_scalar(gain, 0.0, 1.0)
        u = epsilon * (n + 1) / (4 * math.log(2)) + n
        value = 2 * eta(u, 2.0 ** (1 - n * g))
        return BoundReport(
            "delta_biased_chi_c", value, inputs, aux={"exponent": g, "u": u}
        )

    raise ValueError(f"unknown approach: {approach}")


def approach_ratio(n: int, epsilon: float) -> float:
    """Ratio of the phase-error trace bound to the δ-biased one."""
    if n < 1 or epsilon < 1:
        raise ValueError("need n >= 1 and epsilon >= 1")
    return 2**1.5 * math.sqrt(epsilon) / (4 + math.sqrt(n + 1) * math.sqrt(epsilon))


def emit_csv(reports: list[BoundReport], stream) -> None:
    """Write reports as CSV: union of record keys, formula_id/value first."""
    records = [r.to_record() for r in reports]
    keys = ["formula_id", "value"]
    for rec in records:
        for k in rec:
            if k not in keys:
                keys.append(k)
    writer = csv.DictWriter(stream, fieldnames=keys)
    writer.writeheader()
    for rec in records:
        writer.writerow(rec)
