"""Per-step simulation of a liquidity pool, a noise trader and an arbitrageur.

Each step runs, in order: oracle update, retune (dynamic curves), arbitrage
(static curves), the trader's request, a second retune, and a record.
Fees are charged in Y on the notional ``fee_rate * |dx| * p_pool`` and are
kept in a ledger outside the pool reserves, so the curve never sees them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

from .agents import (
    Role,
    TradeRequest,
    TradeSequence,
    Wallet,
    arbitrage_decide,
    generate_trade_sequence,
)
from .curves import (
    CurveKind,
    CurveSpec,
    PoolState,
    execute_swap,
    quote,
    retune,
    spot_price,
)
from .errors import DomainError, InsufficientPoolX, InsufficientPoolY
from .market import PriceSchedule, price_at
from .metrics import pool_value, quote_slippage

CSV_COLUMNS = (
    "t",
    "p_mkt",
    "p_pool",
    "pool_x",
    "pool_y",
    "trader_x",
    "trader_y",
    "arb_x",
    "arb_y",
    "lp_value",
    "trader_value",
    "arb_value",
    "fees_cum",
    "slippage_cum",
    "declined_cum",
)


class DeclineReason(str, Enum):
    POOL = "pool"
    BUDGET = "budget"
    DOMAIN = "domain"


@dataclass(frozen=True)
class SimConfig:
    amm_kind: CurveKind
    steps: int = 1000
    seed: int = 42
    fee_rate: float = 0.02
    initial_pool: tuple[float, float] = (1000.0, 1000.0)
    initial_trader: tuple[float, float] = (1000.0, 1000.0)
    initial_arbitrageur: tuple[float, float] = (1000.0, 1000.0)
    schedule: PriceSchedule = field(default_factory=lambda: PriceSchedule.linear(0.0, 10.0))

    def __post_init__(self):
        object.__setattr__(self, "amm_kind", CurveKind(self.amm_kind))
        if self.steps <= 0:
            raise ValueError(f"steps must be positive, got {self.steps}")
        if not 0.0 <= self.fee_rate < 1.0:
            raise ValueError(f"fee_rate must lie in [0, 1), got {self.fee_rate}")
        for name in ("initial_pool", "initial_trader", "initial_arbitrageur"):
            if any(v < 0 for v in getattr(self, name)):
                raise ValueError(f"{name} holdings must be non-negative")


@dataclass(frozen=True)
class TradeOutcome:
    t: int
    agent: Role
    delta_x: float
    filled: bool
    delta_y: float = 0.0
    fee: float = 0.0
    slippage: float = 0.0
    p_pool_before: float = math.nan
    reason: DeclineReason | None = None


@dataclass(frozen=True)
class SimState:
    t: int
    curve: CurveSpec
    pool: PoolState
    trader: Wallet
    arbitrageur: Wallet
    lp_fees: Wallet
    p_mkt: float
    fees_y: float = 0.0
    trader_slippage_y: float = 0.0
    declined_count: int = 0
    arb_trade_count: int = 0
    outcomes: tuple[TradeOutcome, ...] = ()

    @classmethod
    def initial(cls, config: SimConfig) -> SimState:
        pool = PoolState(*config.initial_pool)
        return cls(
            t=0,
            curve=CurveSpec.for_pool(config.amm_kind, pool),
            pool=pool,
            trader=Wallet(*config.initial_trader),
            arbitrageur=Wallet(*config.initial_arbitrageur),
            lp_fees=Wallet(0.0, 0.0),
            p_mkt=1.0,
        )

    def lp_value(self, p: float) -> float:
        return pool_value(self.pool.x, self.pool.y, p) + self.lp_fees.value(p)

    def totals(self) -> tuple[float, float]:
        """Total X and Y across pool, trader, arbitrageur and fee ledger."""
        holders = (self.pool, self.trader, self.arbitrageur, self.lp_fees)
        return sum(h.x for h in holders), sum(h.y for h in holders)


@dataclass(frozen=True)
class SimRecord:
    t: int
    p_mkt: float
    p_pool: float
    pool_x: float
    pool_y: float
    trader_x: float
    trader_y: float
    arb_x: float
    arb_y: float
    lp_value: float
    trader_value: float
    arb_value: float
    fees_cum: float
    slippage_cum: float
    declined_cum: int

    def as_row(self) -> tuple:
        return tuple(getattr(self, name) for name in CSV_COLUMNS)


@dataclass(frozen=True)
class SimSummary:
    amm_kind: CurveKind
    final_price: float
    lp_final_value: float
    trader_final_value: float
    arb_final_value: float
    initial_value_at_final_price: float
    total_fees: float
    total_slippage: float
    total_declined: int
    arb_trades: int
    min_pool_x_fraction: float
    min_pool_y_fraction: float


@dataclass(frozen=True)
class SimResult:
    config: SimConfig
    trades: TradeSequence
    records: tuple[SimRecord, ...]
    outcomes: tuple[TradeOutcome, ...]
    summary: SimSummary
    final_state: SimState


def _wallet_of(state: SimState, agent: Role) -> Wallet:
    return state.trader if agent is Role.TRADER else state.arbitrageur


def settle_trade(state: SimState, request: TradeRequest, config: SimConfig):
    """Fill or decline ``request``; returns ``(new_state, outcome)``.

    Declines are all-or-nothing and leave every balance untouched.  Only the
    trader's declines are counted.
    """
    wallet = _wallet_of(state, request.agent)

    def decline(reason: DeclineReason, p_before: float = math.nan):
        outcome = TradeOutcome(
            state.t, request.agent, request.delta_x, False, p_pool_before=p_before, reason=reason
        )
        new_state = state
        if request.agent is Role.TRADER:
            new_state = replace(state, declined_count=state.declined_count + 1)
        return new_state, outcome

    try:
        q = quote(state.curve, state.pool, request.delta_x)
    except (InsufficientPoolX, InsufficientPoolY):
        return decline(DeclineReason.POOL)
    except DomainError:
        return decline(DeclineReason.DOMAIN)

    fee = config.fee_rate * abs(q.delta_x) * q.spot_price_before
    new_x = wallet.x + q.delta_x
    new_y = wallet.y - q.delta_y - fee
    if new_x < 0 or new_y < 0:
        return decline(DeclineReason.BUDGET, q.spot_price_before)

    slip = quote_slippage(q)
    changes = dict(
        pool=execute_swap(state.pool, q),
        lp_fees=Wallet(state.lp_fees.x, state.lp_fees.y + fee),
        fees_y=state.fees_y + fee,
    )
    if request.agent is Role.TRADER:
        changes["trader"] = Wallet(new_x, new_y)
        changes["trader_slippage_y"] = state.trader_slippage_y + slip
    else:
        changes["arbitrageur"] = Wallet(new_x, new_y)
        changes["arb_trade_count"] = state.arb_trade_count + 1
    outcome = TradeOutcome(
        state.t, request.agent, q.delta_x, True, q.delta_y, fee, slip, q.spot_price_before
    )
    return replace(state, **changes), outcome


def _record(state: SimState) -> SimRecord:
    p = state.p_mkt
    return SimRecord(
        t=state.t,
        p_mkt=p,
        p_pool=spot_price(state.curve, state.pool),
        pool_x=state.pool.x,
        pool_y=state.pool.y,
        trader_x=state.trader.x,
        trader_y=state.trader.y,
        arb_x=state.arbitrageur.x,
        arb_y=state.arbitrageur.y,
        lp_value=state.lp_value(p),
        trader_value=state.trader.value(p),
        arb_value=state.arbitrageur.value(p),
        fees_cum=state.fees_y,
        slippage_cum=state.trader_slippage_y,
        declined_cum=state.declined_count,
    )


def step(state: SimState, schedule: PriceSchedule, trade: float, config: SimConfig):
    """Advance one time step; returns ``(next_state, record)``.

    ``next_state.outcomes`` lists the trades attempted during this step.
    """
    p_mkt = price_at(schedule, state.t, config.steps)
    state = replace(state, p_mkt=p_mkt, outcomes=())
    outcomes = []
    kind = state.curve.kind

    if kind.is_dynamic:
        state = replace(state, curve=retune(state.curve, state.pool, p_mkt))
    else:
        request = arbitrage_decide(
            state.curve, state.pool, p_mkt, state.arbitrageur, config.fee_rate
        )
        if request is not None:
            state, outcome = settle_trade(state, request, config)
            outcomes.append(outcome)

    if trade != 0:
        state, outcome = settle_trade(state, TradeRequest(Role.TRADER, trade), config)
        outcomes.append(outcome)

    if kind.is_dynamic:
        state = replace(state, curve=retune(state.curve, state.pool, p_mkt))

    state = replace(state, outcomes=tuple(outcomes))
    record = _record(state)
    return replace(state, t=state.t + 1), record


def _summarise(config: SimConfig, state: SimState, records) -> SimSummary:
    p_end = records[-1].p_mkt
    x0, y0 = config.initial_pool
    return SimSummary(
        amm_kind=config.amm_kind,
        final_price=p_end,
        lp_final_value=state.lp_value(p_end),
        trader_final_value=state.trader.value(p_end),
        arb_final_value=state.arbitrageur.value(p_end),
        initial_value_at_final_price=pool_value(x0, y0, p_end),
        total_fees=state.fees_y,
        total_slippage=state.trader_slippage_y,
        total_declined=state.declined_count,
        arb_trades=state.arb_trade_count,
        min_pool_x_fraction=min(r.pool_x for r in records) / x0 if x0 else math.nan,
        min_pool_y_fraction=min(r.pool_y for r in records) / y0 if y0 else math.nan,
    )


def run(config: SimConfig, trades: TradeSequence | None = None) -> SimResult:
    """Run one simulation; ``trades`` overrides generation from ``config.seed``."""
    if trades is None:
        trades = generate_trade_sequence(config.seed, config.steps)
    if len(trades) < config.steps:
        raise ValueError(f"trade sequence has {len(trades)} entries, need {config.steps}")

    state = SimState.initial(config)
    records = []
    outcomes = []
    for t in range(config.steps):
        state, record = step(state, config.schedule, trades.draws[t], config)
        records.append(record)
        outcomes.extend(state.outcomes)

    return SimResult(
        config=config,
        trades=trades,
        records=tuple(records),
        outcomes=tuple(outcomes),
        summary=_summarise(config, state, records),
        final_state=state,
    )


def run_comparison(
    base_config: SimConfig, trades: TradeSequence | None = None
) -> dict[CurveKind, SimResult]:
    """Run all four AMM kinds against one shared trade sequence."""
    if trades is None:
        trades = generate_trade_sequence(base_config.seed, base_config.steps)
    return {kind: run(replace(base_config, amm_kind=kind), trades) for kind in CurveKind}
