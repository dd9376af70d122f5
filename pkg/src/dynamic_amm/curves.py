"""Two-token AMM curves: static and market-tracking constant-sum / constant-product.

All four mechanisms share one parameterisation:

    sum kinds:      slope * (x - a) + y = c
    product kinds:  w * (x - a) * y = k

Static curves are the special case ``a = 0``, ``slope = 1``, ``w = 1``.  Dynamic
curves move ``a`` (and ``slope`` or ``w``) whenever the market price changes so
that the curve passes through the current reserves with a tangent slope equal
to the market price.

Prices are always quoted as Y per unit of X.  A positive ``delta_x`` means the
trader takes X out of the pool.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .errors import (
    DegeneratePool,
    DomainError,
    InsufficientPoolX,
    InsufficientPoolY,
    NonPositivePrice,
    StaleQuote,
)

# Multiplicative guard keeping product-curve buys strictly inside the domain.
EPS_GUARD = 1e-9

# Rounding slack when a sum-curve trade empties the Y reserve exactly.
_ZERO_SNAP = 1e-9


class CurveKind(str, Enum):
    STATIC_SUM = "static-sum"
    STATIC_PRODUCT = "static-product"
    DYNAMIC_SUM = "dynamic-sum"
    DYNAMIC_PRODUCT = "dynamic-product"

    @property
    def is_sum(self) -> bool:
        return self in (CurveKind.STATIC_SUM, CurveKind.DYNAMIC_SUM)

    @property
    def is_product(self) -> bool:
        return not self.is_sum

    @property
    def is_dynamic(self) -> bool:
        return self in (CurveKind.DYNAMIC_SUM, CurveKind.DYNAMIC_PRODUCT)


@dataclass(frozen=True)
class PoolState:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DegeneratePool(f"non-finite reserves ({self.x}, {self.y})")
        if self.x < 0 or self.y < 0:
            raise DegeneratePool(f"negative reserves ({self.x}, {self.y})")


@dataclass(frozen=True)
class CurveSpec:
    """Active curve mechanism and its live parameters.

    ``c`` is only meaningful for sum kinds and ``k`` for product kinds.
    ``slope`` is the price captured at the last retune of a dynamic sum curve
    (fixed at 1 for the static sum); ``w`` is the product-curve scale.
    """

    kind: CurveKind
    c: float | None = None
    k: float | None = None
    a: float = 0.0
    w: float = 1.0
    slope: float = 1.0

    def __post_init__(self):
        kind = CurveKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind.is_sum:
            if self.c is None or not self.c >= 0:
                raise ValueError("sum curves need a constant c >= 0")
            if not self.slope > 0:
                raise NonPositivePrice(f"sum-curve slope must be > 0, got {self.slope}")
        else:
            if self.k is None or not self.k > 0:
                raise ValueError("product curves need a constant k > 0")
            if not self.w > 0:
                raise ValueError(f"product-curve scale w must be > 0, got {self.w}")
        if not kind.is_dynamic and (self.a != 0.0 or self.w != 1.0 or self.slope != 1.0):
            raise ValueError("static curves carry no shift/scale parameters")

    @classmethod
    def static_sum(cls, c: float) -> CurveSpec:
        return cls(CurveKind.STATIC_SUM, c=c)

    @classmethod
    def static_product(cls, k: float) -> CurveSpec:
        return cls(CurveKind.STATIC_PRODUCT, k=k)

    @classmethod
    def dynamic_sum(cls, c: float, a: float = 0.0, slope: float = 1.0) -> CurveSpec:
        return cls(CurveKind.DYNAMIC_SUM, c=c, a=a, slope=slope)

    @classmethod
    def dynamic_product(cls, k: float, a: float = 0.0, w: float = 1.0) -> CurveSpec:
        return cls(CurveKind.DYNAMIC_PRODUCT, k=k, a=a, w=w)

    @classmethod
    def for_pool(cls, kind: CurveKind | str, pool: PoolState) -> CurveSpec:
        """Build the initial curve through ``pool`` at unit price (k = x*y, c = x+y)."""
        kind = CurveKind(kind)
        if kind.is_sum:
            return cls(kind, c=pool.x + pool.y)
        if pool.x <= 0 or pool.y <= 0:
            raise DegeneratePool("product curves need strictly positive reserves")
        return cls(kind, k=pool.x * pool.y)


@dataclass(frozen=True)
class SwapQuote:
    delta_x: float
    delta_y: float
    new_pool: PoolState
    spot_price_before: float
    pool_before: PoolState


def curve_y_at(curve: CurveSpec, x: float) -> float:
    if curve.kind.is_sum:
        y = curve.c - curve.slope * (x - curve.a)
        if y < 0:
            raise DomainError(f"x={x} lies beyond the sum curve's y=0 intercept")
        return y
    gap = x - curve.a
    if gap <= 0:
        raise DomainError(f"x={x} must exceed the curve shift a={curve.a}")
    return (curve.k / curve.w) / gap


def spot_price(curve: CurveSpec, pool: PoolState) -> float:
    """Marginal price -dy/dx of X at the pool's reserves."""
    if curve.kind.is_sum:
        return curve.slope
    gap = pool.x - curve.a
    if gap <= 0:
        raise DomainError(f"x={pool.x} must exceed the curve shift a={curve.a}")
    return (curve.k / curve.w) / (gap * gap)


def curve_residual(curve: CurveSpec, pool: PoolState) -> float:
    """Relative mismatch between the pool and the curve equation (0 when on-curve)."""
    if curve.kind.is_sum:
        lhs = curve.slope * (pool.x - curve.a) + pool.y
        return abs(lhs - curve.c) / max(1.0, abs(curve.c))
    lhs = curve.w * (pool.x - curve.a) * pool.y
    return abs(lhs - curve.k) / curve.k


def max_buyable_x(curve: CurveSpec, pool: PoolState) -> float:
    """Largest X amount a single buy may take out of the pool."""
    if curve.kind.is_sum:
        return pool.x
    # The hyperbola asymptote sits at x = a, but reserves must also stay positive.
    return min(pool.x, pool.x - curve.a) * (1.0 - EPS_GUARD)


def max_sellable_x(curve: CurveSpec, pool: PoolState) -> float:
    """Largest X amount the pool can absorb before its Y reserve runs dry."""
    if curve.kind.is_sum:
        return pool.y / curve.slope
    return math.inf


def quote(curve: CurveSpec, pool: PoolState, delta_x: float) -> SwapQuote:
    """Exact, fee-free quote for moving ``delta_x`` X out of the pool.

    Sum curves price every unit at the stored slope, so ``delta_y`` is computed
    as ``slope * delta_x`` directly rather than by differencing reserves.
    """
    if delta_x == 0 or not math.isfinite(delta_x):
        raise ValueError(f"delta_x must be finite and non-zero, got {delta_x}")
    p0 = spot_price(curve, pool)
    x_new = pool.x - delta_x

    if curve.kind.is_sum:
        if x_new < 0:
            raise InsufficientPoolX(f"buy of {delta_x} X exceeds pool reserve {pool.x}")
        delta_y = curve.slope * delta_x
        y_new = pool.y + delta_y
        if y_new < 0:
            if y_new < -_ZERO_SNAP * max(1.0, pool.y):
                raise InsufficientPoolY(
                    f"sale of {-delta_x} X needs {-delta_y} Y, pool holds {pool.y}"
                )
            y_new = 0.0
    else:
        if delta_x > 0 and x_new <= max(curve.a, 0.0):
            raise InsufficientPoolX(
                f"buy of {delta_x} X exceeds the reachable limit {min(pool.x, pool.x - curve.a)}"
            )
        y_new = (curve.k / curve.w) / (x_new - curve.a)
        delta_y = y_new - pool.y

    return SwapQuote(
        delta_x=delta_x,
        delta_y=delta_y,
        new_pool=PoolState(x_new, y_new),
        spot_price_before=p0,
        pool_before=pool,
    )


def execute_swap(pool: PoolState, q: SwapQuote) -> PoolState:
    if pool != q.pool_before:
        raise StaleQuote(f"quote was built on {q.pool_before}, pool is now {pool}")
    return q.new_pool


def retune_dynamic_sum(curve: CurveSpec, pool: PoolState, p_mkt: float) -> CurveSpec:
    """Shift the line so it passes through ``pool`` with slope ``p_mkt``."""
    if curve.kind is not CurveKind.DYNAMIC_SUM:
        raise ValueError(f"cannot retune a {curve.kind.value} curve as a dynamic sum")
    if not p_mkt > 0:
        raise NonPositivePrice(f"market price must be > 0, got {p_mkt}")
    a = pool.x - (curve.c - pool.y) / p_mkt
    return replace(curve, a=a, slope=p_mkt)


def retune_dynamic_product(curve: CurveSpec, pool: PoolState, p_mkt: float) -> CurveSpec:
    """Solve for (a, w) so the hyperbola passes through ``pool`` at price ``p_mkt``.

    From w(x - a)y = k and (k/w)/(x - a)^2 = p:  x - a = y/p and w = k*p/y^2.
    """
    if curve.kind is not CurveKind.DYNAMIC_PRODUCT:
        raise ValueError(f"cannot retune a {curve.kind.value} curve as a dynamic product")
    if not p_mkt > 0:
        raise NonPositivePrice(f"market price must be > 0, got {p_mkt}")
    if pool.x <= 0 or pool.y <= 0:
        raise DegeneratePool(f"reserves must be strictly positive, got ({pool.x}, {pool.y})")
    a = pool.x - pool.y / p_mkt
    w = curve.k * p_mkt / (pool.y * pool.y)
    return replace(curve, a=a, w=w)


def retune(curve: CurveSpec, pool: PoolState, p_mkt: float) -> CurveSpec:
    """Dispatch to the kind-specific retune; static curves come back unchanged."""
    if curve.kind is CurveKind.DYNAMIC_SUM:
        return retune_dynamic_sum(curve, pool, p_mkt)
    if curve.kind is CurveKind.DYNAMIC_PRODUCT:
        return retune_dynamic_product(curve, pool, p_mkt)
    return curve
