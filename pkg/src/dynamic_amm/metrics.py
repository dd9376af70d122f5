"""Pool value, trader slippage and divergence loss."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .curves import CurveSpec, PoolState, SwapQuote, quote
from .errors import NonPositiveRho, ZeroBaseValue


@dataclass(frozen=True)
class ValueSnapshot:
    holder: str
    x_value: float
    y_value: float
    total: float
    reference_price: float


def pool_value(x: float, y: float, p: float) -> float:
    """Value of ``x`` X and ``y`` Y in Y units at price ``p``."""
    return p * x + y


def value_snapshot(holder: str, x: float, y: float, p: float) -> ValueSnapshot:
    x_value = p * x
    return ValueSnapshot(holder, x_value, y, x_value + y, p)


def quote_slippage(q: SwapQuote) -> float:
    """Slippage of an already-computed quote.

    Buying pays ``delta_y`` against ``p0 * delta_x`` at the pre-trade price;
    selling receives ``-delta_y`` against ``p0 * |delta_x|``.  Both collapse
    to ``delta_y - p0 * delta_x`` under the signed convention.
    """
    return q.delta_y - q.spot_price_before * q.delta_x


def slippage(curve: CurveSpec, pool: PoolState, delta_x: float) -> float:
    return quote_slippage(quote(curve, pool, delta_x))


def divergence_loss_general(
    p_n: float, x_o: float, y_o: float, x_n: float, y_n: float
) -> float:
    """Relative change in value from (x_o, y_o) to (x_n, y_n), both priced at ``p_n``.

    Negative results are losses.
    """
    base = pool_value(x_o, y_o, p_n)
    if base == 0:
        raise ZeroBaseValue("original holdings are worthless at the new price")
    return (pool_value(x_n, y_n, p_n) - base) / base


def divergence_loss_constant_product(rho: float) -> float:
    """Closed-form divergence loss of an x*y=k pool after the price moves by ``rho``."""
    if not rho > 0:
        raise NonPositiveRho(f"price ratio must be > 0, got {rho}")
    return (2.0 * math.sqrt(rho) - 1.0 - rho) / (1.0 + rho)
