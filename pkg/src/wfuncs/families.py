"""Weight families on an interval: evaluation, derivatives, index predicates.

Four families are supported:

* ``laguerre``:        w(x) = x^alpha e^{-x}           on (0, inf),   alpha > 0
* ``ultraspherical``:  w(x) = (1 - x^2)^alpha          on (-1, 1),    alpha > 0
* ``genhermite``:      w(x) = |x|^{2 mu} e^{-x^2}      on (-inf, inf), mu > -1/2
* ``konoplev``:        w(x) = |x|^{2 gamma + 1} (1 - x^2)^alpha on (-1, 1),
                        alpha > -1, gamma > -1
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

__all__ = [
    "WeightFamily",
    "laguerre",
    "ultraspherical",
    "generalized_hermite",
    "konoplev",
    "weight_eval",
    "weight_derivative",
    "weight_second_derivative",
    "IndexBoundVerdict",
    "index_lower_bound_ok",
    "SignedMomentReport",
    "signed_weight_moments",
    "endpoint_exponents",
    "family_to_json",
    "family_from_json",
]

KINDS = ("laguerre", "ultraspherical", "genhermite", "konoplev")


@dataclass(frozen=True)
class WeightFamily:
    """Immutable descriptor of one of the four supported weight functions."""

    kind: str
    alpha: float = float("nan")
    mu: float = float("nan")
    gamma: float = float("nan")
    support: tuple[float, float] = field(default=(float("nan"), float("nan")))

    @property
    def symmetric(self) -> bool:
        return self.kind != "laguerre"

    def __str__(self) -> str:
        if self.kind == "laguerre":
            return f"laguerre(alpha={self.alpha})"
        if self.kind == "ultraspherical":
            return f"ultraspherical(alpha={self.alpha})"
        if self.kind == "genhermite":
            return f"genhermite(mu={self.mu})"
        return f"konoplev(alpha={self.alpha}, gamma={self.gamma})"


def laguerre(alpha: float) -> WeightFamily:
    """Laguerre weight x^alpha e^{-x}.  Requires alpha > 0 so that w(0) = 0."""
    if not alpha > 0:
        raise ValueError(f"laguerre requires alpha > 0, got alpha={alpha}")
    return WeightFamily("laguerre", alpha=alpha, support=(0.0, math.inf))


def ultraspherical(alpha: float) -> WeightFamily:
    """Ultraspherical (Gegenbauer) weight (1-x^2)^alpha.  Requires alpha > 0."""
    if not alpha > 0:
        raise ValueError(f"ultraspherical requires alpha > 0, got alpha={alpha}")
    return WeightFamily("ultraspherical", alpha=alpha, support=(-1.0, 1.0))


def generalized_hermite(mu: float) -> WeightFamily:
    """Generalized Hermite weight |x|^{2 mu} e^{-x^2}.  Requires mu > -1/2."""
    if not mu > -0.5:
        raise ValueError(f"genhermite requires mu > -1/2, got mu={mu}")
    return WeightFamily("genhermite", mu=mu, support=(-math.inf, math.inf))


def konoplev(alpha: float, gamma: float) -> WeightFamily:
    """Konoplev weight |x|^{2 gamma + 1} (1-x^2)^alpha.  Requires alpha, gamma > -1."""
    if not alpha > -1:
        raise ValueError(f"konoplev requires alpha > -1, got alpha={alpha}")
    if not gamma > -1:
        raise ValueError(f"konoplev requires gamma > -1, got gamma={gamma}")
    return WeightFamily("konoplev", alpha=alpha, gamma=gamma, support=(-1.0, 1.0))


def _check_interior(family: WeightFamily, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    a, b = family.support
    if np.any(x <= a) or np.any(x >= b):
        raise ValueError(
            f"x must lie strictly inside the support ({a}, {b}) of {family}"
        )
    return x


def weight_eval(family: WeightFamily, x):
    """Evaluate w(x) at points strictly inside the support."""
    x = _check_interior(family, x)
    if family.kind == "laguerre":
        out = x ** family.alpha * np.exp(-x)
    elif family.kind == "ultraspherical":
        out = (1.0 - x * x) ** family.alpha
    elif family.kind == "genhermite":
        out = np.abs(x) ** (2.0 * family.mu) * np.exp(-x * x)
    else:
        out = np.abs(x) ** (2.0 * family.gamma + 1.0) * (1.0 - x * x) ** family.alpha
    return out if out.ndim else float(out)


def _check_origin_ok(family: WeightFamily, x: np.ndarray) -> None:
    """Reject x = 0 where the |x|-type factor makes w non-differentiable."""
    if family.kind == "genhermite":
        p = 2.0 * family.mu
    elif family.kind == "konoplev":
        p = 2.0 * family.gamma + 1.0
    else:
        return
    # |x|^p is smooth at 0 only when p is an even integer
    smooth = p >= 0 and abs(p - 2 * round(p / 2)) < 1e-14
    if not smooth and np.any(x == 0.0):
        raise ValueError(
            f"w of {family} is not differentiable at x = 0 (|x|^{p} factor)"
        )


def _log_derivs(family: WeightFamily, x: np.ndarray):
    """Return (l', l'') where l = log w, valid for x inside the support, x != 0."""
    if family.kind == "laguerre":
        l1 = family.alpha / x - 1.0
        l2 = -family.alpha / (x * x)
    elif family.kind == "ultraspherical":
        om = 1.0 - x * x
        l1 = -2.0 * family.alpha * x / om
        l2 = -2.0 * family.alpha * (1.0 + x * x) / (om * om)
    elif family.kind == "genhermite":
        l1 = 2.0 * family.mu / x - 2.0 * x
        l2 = -2.0 * family.mu / (x * x) - 2.0
    else:
        om = 1.0 - x * x
        l1 = (2.0 * family.gamma + 1.0) / x - 2.0 * family.alpha * x / om
        l2 = -(2.0 * family.gamma + 1.0) / (x * x) - 2.0 * family.alpha * (
            1.0 + x * x
        ) / (om * om)
    return l1, l2


def weight_derivative(family: WeightFamily, x):
    """Evaluate w'(x) analytically; rejects x = 0 for non-smooth |x| factors."""
    x = _check_interior(family, x)
    _check_origin_ok(family, x)
    if family.kind in ("genhermite", "konoplev"):
        p = 2.0 * family.mu if family.kind == "genhermite" else 2.0 * family.gamma + 1.0
        if p == 0.0:
            # no |x| factor survives; use the smooth formula directly
            if family.kind == "genhermite":
                out = -2.0 * x * np.exp(-x * x)
            else:
                out = -2.0 * family.alpha * x * (1.0 - x * x) ** (family.alpha - 1.0)
            return out if np.ndim(out) else float(out)
    l1, _ = _log_derivs(family, _mask_origin(family, x))
    out = l1 * weight_eval(family, x)
    if family.kind in ("genhermite", "konoplev"):
        # symmetric smooth weights have w'(0) = 0; the log-derivative form is 0*inf there
        out = np.where(x == 0.0, 0.0, out)
    return out if np.ndim(out) else float(out)


def _mask_origin(family: WeightFamily, x: np.ndarray) -> np.ndarray:
    """Replace x = 0 by a safe interior dummy for the |x|-factor families."""
    if family.kind in ("genhermite", "konoplev"):
        return np.where(x == 0.0, 0.5, x)
    return x


def weight_second_derivative(family: WeightFamily, x):
    """Evaluate w''(x) via w'' = (l'' + l'^2) w with l = log w."""
    x = _check_interior(family, x)
    _check_origin_ok(family, x)
    l1, l2 = _log_derivs(family, _mask_origin(family, x))
    out = (l2 + l1 * l1) * weight_eval(family, x)
    if family.kind in ("genhermite", "konoplev") and np.any(x == 0.0):
        out = np.where(x == 0.0, _w2_at_origin(family), out)
    return out if np.ndim(out) else float(out)


def _w2_at_origin(family: WeightFamily) -> float:
    """w''(0) for the symmetric families when the |x|^p factor is smooth."""
    if family.kind == "ultraspherical":
        return -2.0 * family.alpha
    p = 2.0 * family.mu if family.kind == "genhermite" else 2.0 * family.gamma + 1.0
    if p == 0.0:
        return -2.0 if family.kind == "genhermite" else -2.0 * family.alpha
    return 2.0 if p == 2.0 else 0.0


def endpoint_exponents(family: WeightFamily) -> dict[float, float]:
    """Exponents of the algebraic factors of w at its finite vanishing points.

    The origin is included for the |x|-factor families: although interior, its
    exponent governs integrability of w'^s / w^{s-1} exactly like an endpoint.
    """
    if family.kind == "laguerre":
        return {0.0: family.alpha}
    if family.kind == "ultraspherical":
        return {-1.0: family.alpha, 1.0: family.alpha}
    if family.kind == "genhermite":
        return {0.0: 2.0 * family.mu}
    return {-1.0: family.alpha, 0.0: 2.0 * family.gamma + 1.0, 1.0: family.alpha}


@dataclass(frozen=True)
class IndexBoundVerdict:
    ok: bool
    exact: bool
    min_exponent: float
    threshold: float

    def __bool__(self) -> bool:
        return self.ok


def index_lower_bound_ok(family: WeightFamily, s: int) -> IndexBoundVerdict:
    """Whether every algebraic exponent of w exceeds s - 1.

    For Laguerre and ultraspherical this is an exact characterization of
    boundedness of D, ..., D^s; for the other two families it is only a
    necessary condition (``exact`` is False).
    """
    if s <= 0:
        raise ValueError(f"s must be >= 1, got {s}")
    min_exp = min(endpoint_exponents(family).values())
    exact = family.kind in ("laguerre", "ultraspherical")
    return IndexBoundVerdict(ok=min_exp > s - 1, exact=exact, min_exponent=min_exp, threshold=s - 1)


@dataclass(frozen=True)
class SignedMomentReport:
    moments: np.ndarray
    divergent: bool
    min_exponent: float


def signed_weight_moments(family: WeightFamily, s: int, k_max: int) -> SignedMomentReport:
    """Moments of the signed density w'^s / w^{s-1} for k = 0..k_max.

    Divergence at an endpoint (algebraic exponent <= -1 after subtracting s)
    is detected analytically and reported via the ``divergent`` flag; in that
    case the moment array is filled with NaN.
    """
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    min_exp = min(endpoint_exponents(family).values()) - s
    if min_exp <= -1:
        return SignedMomentReport(
            moments=np.full(k_max + 1, np.nan), divergent=True, min_exponent=min_exp
        )

    from .orthopoly import gauss_laguerre_general, gauss_jacobi_general

    mom = np.zeros(k_max + 1)
    if family.kind == "laguerre":
        # w~_s = x^(alpha-s) (alpha-x)^s e^(-x)
        a = family.alpha
        n_q = (k_max + s) // 2 + 4
        t, w = gauss_laguerre_general(a - s, n_q)
        for k in range(k_max + 1):
            mom[k] = np.sum(w * (a - t) ** s * t**k)
    elif family.kind == "ultraspherical":
        # w~_s = (-2 alpha x)^s (1-x^2)^(alpha-s)
        a = family.alpha
        n_q = (k_max + s) // 2 + 4
        t, w = gauss_jacobi_general(a - s, a - s, n_q)
        for k in range(k_max + 1):
            mom[k] = np.sum(w * (-2.0 * a * t) ** s * t**k)
    elif family.kind == "genhermite":
        # even k+s only; moment_k = int_0^inf t^((k-s+2mu-1)/2) (2mu-2t)^s e^(-t) dt
        mu = family.mu
        n_q = (k_max + s) // 2 + 4
        for k in range(k_max + 1):
            if (k + s) % 2 == 1:
                continue
            t, w = gauss_laguerre_general((k - s + 2.0 * mu - 1.0) / 2.0, n_q)
            mom[k] = np.sum(w * (2.0 * mu - 2.0 * t) ** s)
    else:
        # even k+s only; moment_k = int_0^1 u^((k-s+2gamma)/2) (1-u)^(alpha-s) R(u)^s du
        a, g = family.alpha, family.gamma
        n_q = (k_max + 3 * s) // 2 + 4
        for k in range(k_max + 1):
            if (k + s) % 2 == 1:
                continue
            p = (k - s + 2.0 * g) / 2.0
            t, w = gauss_jacobi_general(a - s, p, n_q)
            u = 0.5 * (1.0 + t)
            r = (2.0 * g + 1.0) * (1.0 - u) - 2.0 * a * u
            mom[k] = 2.0 ** (-(a - s) - p - 1.0) * np.sum(w * r**s)
    return SignedMomentReport(moments=mom, divergent=False, min_exponent=min_exp)


def family_to_json(family: WeightFamily) -> str:
    """Serialize to the {kind, alpha, mu, gamma} JSON object used by the CLI."""
    def _num(v: float):
        return None if math.isnan(v) else v

    return json.dumps(
        {
            "kind": family.kind,
            "alpha": _num(family.alpha),
            "mu": _num(family.mu),
            "gamma": _num(family.gamma),
        }
    )


def family_from_json(text: str) -> WeightFamily:
    obj = json.loads(text)
    kind = obj["kind"]
    if kind == "laguerre":
        return laguerre(obj["alpha"])
    if kind == "ultraspherical":
        return ultraspherical(obj["alpha"])
    if kind == "genhermite":
        return generalized_hermite(obj["mu"])
    if kind == "konoplev":
        return konoplev(obj["alpha"], obj["gamma"])
    raise ValueError(f"unknown weight kind {kind!r}")


def log_moment_zero(family: WeightFamily) -> float:
    """log of mu_0 = int w dx, used to normalize p_0 and quadrature weights."""
    if family.kind == "laguerre":
        return float(gammaln(1.0 + family.alpha))
    if family.kind == "ultraspherical":
        # int_{-1}^1 (1-x^2)^alpha dx = sqrt(pi) Gamma(alpha+1)/Gamma(alpha+3/2)
        a = family.alpha
        return float(0.5 * math.log(math.pi) + gammaln(a + 1.0) - gammaln(a + 1.5))
    if family.kind == "genhermite":
        return float(gammaln(family.mu + 0.5))
    a, g = family.alpha, family.gamma
    return float(gammaln(g + 1.0) + gammaln(a + 1.0) - gammaln(a + g + 2.0))
