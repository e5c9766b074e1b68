"""Density and Hausdorff-measure lower bounds from recurrence proxies.

If ``liminf n**(1/alpha) d(T^n x, x) <= g(x)**(1/alpha)`` then every
positive proxy value ``L`` yields ``g(x) >= L**alpha``; averaging over
``mu``-distributed points bounds ``H_alpha = int g dmu`` from below.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .errors import InsufficientData, InvalidArgument
from .recurrence import (
    DEFAULT_TAIL_START,
    PROXY_NOTE,
    Alpha,
    RecurrenceProfile,
    as_alpha,
    liminf_proxy,
    record_term,
)
from .systems import point_text


@dataclass(frozen=True)
class DensityBound:
    point: str
    alpha: Alpha
    proxy: object  # Fraction when exact, else float
    g_lower: float
    caveat: bool = True

    @property
    def exact_proxy(self) -> Optional[str]:
        return str(self.proxy) if isinstance(self.proxy, Fraction) else None


@dataclass(frozen=True)
class HausdorffBound:
    alpha: Alpha
    M: int
    g_lowers: Tuple[float, ...]
    H_lower: float
    horizon: Optional[int] = None
    tail_start: Optional[int] = None
    seed: Optional[int] = None
    points: Tuple[str, ...] = ()
    proxies: Tuple[object, ...] = ()


def g_lower_from_proxy(proxy, alpha) -> float:
    """``proxy ** alpha`` (zero stays zero)."""
    alpha = as_alpha(alpha)
    if proxy < 0:
        raise InvalidArgument("proxy must be nonnegative")
    if proxy == 0:
        return 0.0
    if isinstance(proxy, Fraction):
        # log domain keeps huge numerators/denominators out of float range
        return math.exp(alpha.value * (math.log(proxy.numerator) - math.log(proxy.denominator)))
    return float(proxy) ** alpha.value


def density_lower_bound(profile: RecurrenceProfile, alpha,
                        tail_start: int = DEFAULT_TAIL_START) -> DensityBound:
    alpha = as_alpha(alpha)
    proxy = liminf_proxy(profile, alpha, tail_start)
    return DensityBound(point_text(profile.point), alpha, proxy, g_lower_from_proxy(proxy, alpha))


def measure_lower_bound(bounds: Sequence[DensityBound], horizon=None, tail_start=None,
                        seed=None) -> HausdorffBound:
    """Equal-weight average of per-point density bounds."""
    bounds = list(bounds)
    if not bounds:
        raise InvalidArgument("no density bounds")
    alphas = {b.alpha.value for b in bounds}
    if len(alphas) != 1:
        raise InvalidArgument("density bounds use different alphas")
    g = tuple(b.g_lower for b in bounds)
    return HausdorffBound(
        alpha=bounds[0].alpha,
        M=len(g),
        g_lowers=g,
        H_lower=math.fsum(g) / len(g),
        horizon=horizon,
        tail_start=tail_start,
        seed=seed,
        points=tuple(b.point for b in bounds),
        proxies=tuple(b.proxy for b in bounds),
    )


def bound_document(hb: HausdorffBound, classification_params=None, extra=None) -> dict:
    """The JSON result document for a measure bound."""
    doc = {
        "alpha": hb.alpha.value,
        "alpha_spec": str(hb.alpha),
        "M": hb.M,
        "horizon": hb.horizon,
        "k0": hb.tail_start,
        "seed": hb.seed,
        "per_point": [
            {"point": p, "proxy": float(x), "proxy_exact": str(x) if isinstance(x, Fraction) else None,
             "g_lower": g}
            for p, x, g in zip(hb.points, hb.proxies, hb.g_lowers)
        ],
        "H_lower": hb.H_lower,
        "classification_params": classification_params or dict(DEFAULT_CLASSIFY),
        "note": PROXY_NOTE,
    }
    if extra:
        doc.update(extra)
    return doc


class Classification(str, enum.Enum):
    DIVERGES = "DIVERGES"
    FINITE = "FINITE"
    VANISHES = "VANISHES"


DEFAULT_CLASSIFY = {"run": 5, "factor": 10.0}


def boshernitzan_classify(profile: RecurrenceProfile, beta, tail_start: int = 0,
                          run: int = 5, factor: float = 10.0) -> Classification:
    """Trend of the record terms ``n**(1/beta) d`` along the tail.

    DIVERGES: the last ``run`` terms strictly increase and the final one is
    more than ``factor`` times the tail minimum.  VANISHES: the mirror image.
    Otherwise FINITE.  A heuristic reading of the tail, not a theorem.
    """
    beta = as_alpha(beta)
    terms = [float(record_term(r, beta)) for r in profile.records[tail_start:]]
    if len(terms) < max(3, run):
        raise InsufficientData(f"need at least {max(3, run)} tail records")
    last = terms[-run:]
    if all(a < b for a, b in zip(last, last[1:])) and last[-1] > factor * min(terms):
        return Classification.DIVERGES
    if all(a > b for a, b in zip(last, last[1:])) and last[-1] * factor < max(terms):
        return Classification.VANISHES
    return Classification.FINITE
