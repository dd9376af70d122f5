"""Trader and arbitrageur behaviour.

The trader replays a fixed sequence of standard-normal X amounts.  The
arbitrageur closes any gap between a static pool's price and the market
price in one trade, clipped by what its wallet can pay for.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .curves import (
    CurveKind,
    CurveSpec,
    PoolState,
    max_buyable_x,
    max_sellable_x,
    quote,
    spot_price,
)
from .errors import DomainError

# Trades smaller than this are treated as dust and skipped.
MIN_ARB_TRADE = 1e-9


class Role(str, Enum):
    TRADER = "trader"
    ARBITRAGEUR = "arbitrageur"


@dataclass(frozen=True)
class Wallet:
    x: float
    y: float

    def __post_init__(self):
        if self.x < 0 or self.y < 0:
            raise ValueError(f"wallet holdings must be non-negative, got ({self.x}, {self.y})")

    def value(self, p: float) -> float:
        return p * self.x + self.y


@dataclass(frozen=True)
class TradeRequest:
    agent: Role
    delta_x: float

    def __post_init__(self):
        if not math.isfinite(self.delta_x) or self.delta_x == 0:
            raise ValueError(f"trade size must be finite and non-zero, got {self.delta_x}")


@dataclass(frozen=True)
class TradeSequence:
    seed: int | None
    draws: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.draws)

    def to_text(self) -> str:
        # repr() round-trips doubles exactly, so a replayed file is bit-identical.
        return "".join(f"{d!r}\n" for d in self.draws)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path: str | Path) -> TradeSequence:
        draws = []
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                draws.append(float(line))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a trade amount: {raw!r}") from None
        return cls(seed=None, draws=tuple(draws))


def polar_normals(rng: np.random.Generator, n: int) -> list[float]:
    """Marsaglia polar method driven by ``rng.random()`` uniforms."""
    out: list[float] = []
    while len(out) < n:
        u = 2.0 * rng.random() - 1.0
        v = 2.0 * rng.random() - 1.0
        s = u * u + v * v
        if s == 0.0 or s >= 1.0:
            continue
        f = math.sqrt(-2.0 * math.log(s) / s)
        out.append(u * f)
        out.append(v * f)
    return out[:n]


def generate_trade_sequence(seed: int, steps: int) -> TradeSequence:
    """I.i.d. N(0, 1) trade sizes from PCG64 seeded with ``seed``."""
    if steps <= 0:
        raise ValueError(f"steps must be positive, got {steps}")
    rng = np.random.Generator(np.random.PCG64(seed))
    return TradeSequence(seed=seed, draws=tuple(polar_normals(rng, steps)))


def trade_cost(curve: CurveSpec, pool: PoolState, delta_x: float, fee_rate: float):
    """Return ``(delta_y, fee)`` for a trade; fee is charged on notional at pre-trade price."""
    q = quote(curve, pool, delta_x)
    return q.delta_y, fee_rate * abs(delta_x) * q.spot_price_before


def _affordable(curve, pool, delta_x, wallet, fee_rate) -> bool:
    try:
        delta_y, fee = trade_cost(curve, pool, delta_x, fee_rate)
    except DomainError:
        return False
    return wallet.x + delta_x >= 0 and wallet.y - delta_y - fee >= 0


def _shrink_to_budget(curve, pool, delta_x, wallet, fee_rate) -> float | None:
    # Closed-form clips can overshoot the budget by an ulp; back off slightly.
    for _ in range(8):
        if _affordable(curve, pool, delta_x, wallet, fee_rate):
            return delta_x
        delta_x *= 1.0 - 1e-12
    return None


def _product_buy_clip(curve: CurveSpec, pool: PoolState, budget: float, fee_rate: float) -> float:
    """Largest buy whose Y cost plus fee equals ``budget`` on x*y = k.

    Writing u for the post-trade X reserve, the budget line
    k/u - y + f*p0*(x - u) = B becomes f*p0*u^2 + (y + B - f*p0*x)*u - k = 0.
    """
    p0 = spot_price(curve, pool)
    qa = fee_rate * p0
    qb = pool.y + budget - qa * pool.x
    # Rationalised positive root; stays exact when qa == 0.
    u = 2.0 * curve.k / (qb + math.sqrt(qb * qb + 4.0 * qa * curve.k))
    return pool.x - u


def arbitrage_decide(
    curve: CurveSpec,
    pool: PoolState,
    p_mkt: float,
    wallet: Wallet,
    fee_rate: float,
) -> TradeRequest | None:
    """One gap-closing arbitrage trade against a static pool, or ``None``.

    Dynamic curves are retuned to the market price and never offer an
    opportunity, so calling this for them is a usage error.
    """
    if curve.kind.is_dynamic:
        raise ValueError("arbitrage is only defined against static curves")

    if curve.kind is CurveKind.STATIC_PRODUCT:
        target_x = math.sqrt(curve.k / p_mkt)
        if target_x < pool.x:
            delta_x = min(pool.x - target_x, max_buyable_x(curve, pool))
            if not _affordable(curve, pool, delta_x, wallet, fee_rate):
                delta_x = _product_buy_clip(curve, pool, wallet.y, fee_rate)
        else:
            delta_x = -min(target_x - pool.x, wallet.x)
    else:
        price = spot_price(curve, pool)
        markup = 1.0 + fee_rate
        if p_mkt > price * markup:
            delta_x = min(max_buyable_x(curve, pool), wallet.y / (price * markup))
        elif p_mkt < price / markup:
            delta_x = -min(wallet.x, max_sellable_x(curve, pool))
        else:
            return None

    if abs(delta_x) < MIN_ARB_TRADE:
        return None
    delta_x = _shrink_to_budget(curve, pool, delta_x, wallet, fee_rate)
    if delta_x is None:
        return None

    delta_y, fee = trade_cost(curve, pool, delta_x, fee_rate)
    profit = p_mkt * delta_x - delta_y - fee
    if profit <= 0:
        return None
    return TradeRequest(Role.ARBITRAGEUR, delta_x)
