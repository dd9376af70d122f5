from dataclasses import replace

import pytest

from dynamic_amm.agents import Role, TradeRequest, TradeSequence, Wallet
from dynamic_amm.curves import CurveKind, CurveSpec, PoolState, spot_price
from dynamic_amm.engine import (
    DeclineReason,
    SimConfig,
    SimState,
    run,
    run_comparison,
    settle_trade,
    step,
)
from dynamic_amm.market import PriceSchedule


def state_for(kind, fee=0.02, **kw):
    config = SimConfig(kind, fee_rate=fee)
    return replace(SimState.initial(config), **kw), config


class TestSettle:
    def test_product_buy_with_fee(self):
        state, config = state_for(CurveKind.STATIC_PRODUCT)
        new, out = settle_trade(state, TradeRequest(Role.TRADER, 100.0), config)
        assert out.filled
        assert out.delta_y == pytest.approx(111.1111111111, rel=1e-9)
        assert out.fee == pytest.approx(2.0, rel=1e-12)
        assert out.slippage == pytest.approx(11.1111111111, rel=1e-9)
        assert new.trader.y == pytest.approx(1000 - 111.1111111111 - 2, rel=1e-9)
        assert new.trader.x == 1100.0
        assert new.lp_fees.y == out.fee
        assert new.pool.x == 900.0

    def test_sell_beyond_holdings_declined(self):
        state, config = state_for(CurveKind.STATIC_PRODUCT, trader=Wallet(50.0, 1000.0))
        new, out = settle_trade(state, TradeRequest(Role.TRADER, -100.0), config)
        assert not out.filled and out.reason is DeclineReason.BUDGET
        assert new.declined_count == 1
        assert (new.pool, new.trader, new.fees_y) == (state.pool, state.trader, 0.0)

    def test_buy_without_y_for_fee_declined(self):
        state, config = state_for(CurveKind.STATIC_SUM, trader=Wallet(0.0, 10.0))
        _, out = settle_trade(state, TradeRequest(Role.TRADER, 10.0), config)
        assert out.reason is DeclineReason.BUDGET

    def test_zero_fee(self):
        state, config = state_for(CurveKind.STATIC_PRODUCT, fee=0.0)
        new, out = settle_trade(state, TradeRequest(Role.TRADER, 10.0), config)
        assert out.fee == 0.0 and new.lp_fees == Wallet(0.0, 0.0)

    def test_arbitrageur_declines_not_counted(self):
        state, config = state_for(CurveKind.STATIC_SUM, arbitrageur=Wallet(0.0, 0.0))
        new, out = settle_trade(state, TradeRequest(Role.ARBITRAGEUR, 10.0), config)
        assert not out.filled and new.declined_count == 0


class TestStep:
    def test_static_sum_pool_short_declines(self):
        pool = PoolState(2.0, 1998.0)
        state, config = state_for(CurveKind.STATIC_SUM, pool=pool,
                                  curve=CurveSpec.static_sum(2000.0), arbitrageur=Wallet(0, 0))
        schedule = PriceSchedule.constant(1.0)
        new, record = step(state, schedule, 5.0, config)
        assert record.declined_cum == 1
        assert new.pool == pool and new.trader == state.trader
        assert [o.reason for o in new.outcomes] == [DeclineReason.POOL]

    def test_dynamic_product_tracks_price(self):
        state, config = state_for(CurveKind.DYNAMIC_PRODUCT)
        schedule = PriceSchedule.linear(0.0, 10.0)
        for trade in (0.7, -1.3, 2.2, -0.4):
            state, record = step(state, schedule, trade, config)
            assert abs(record.p_pool - record.p_mkt) <= 1e-9 * max(1, record.p_mkt)
            assert abs(spot_price(state.curve, state.pool) - record.p_mkt) <= 1e-9

    def test_ordering_arbitrage_before_trader(self):
        state, config = state_for(CurveKind.STATIC_PRODUCT)
        state, _ = step(state, PriceSchedule.constant(4.0), 1.0, config)
        assert [o.agent for o in state.outcomes] == [Role.ARBITRAGEUR, Role.TRADER]


def test_replay_override():
    config = SimConfig(CurveKind.DYNAMIC_SUM, steps=5)
    trades = TradeSequence(None, (1.0, -1.0, 0.5, 0.0, 2.0))
    result = run(config, trades)
    assert [o.delta_x for o in result.outcomes] == [1.0, -1.0, 0.5, 2.0]
    with pytest.raises(ValueError):
        run(replace(config, steps=6), trades)


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(CurveKind.STATIC_SUM, steps=0)
    with pytest.raises(ValueError):
        SimConfig(CurveKind.STATIC_SUM, fee_rate=1.0)
    with pytest.raises(ValueError):
        SimConfig("constant-ellipse")


@pytest.fixture(scope="module")
def comparison():
    return run_comparison(SimConfig(CurveKind.STATIC_SUM))


def test_conservation(comparison):
    for result in comparison.values():
        x0 = 1000.0 * 3
        state = result.final_state
        tx, ty = state.totals()
        assert tx == pytest.approx(x0, abs=1e-6)
        assert ty == pytest.approx(x0, abs=1e-6)


def test_shared_trades(comparison):
    texts = {r.trades.to_text() for r in comparison.values()}
    assert len(texts) == 1


def test_arbitrage_only_on_static(comparison):
    for kind, result in comparison.items():
        if kind.is_dynamic:
            assert result.summary.arb_trades == 0
        else:
            assert result.summary.arb_trades >= 1


def test_dynamic_sum_flat_value_at_fixed_price():
    config = SimConfig(CurveKind.DYNAMIC_SUM, fee_rate=0.0, schedule=PriceSchedule.constant(2.5))
    result = run(config)
    values = [r.lp_value for r in result.records]
    assert max(values) - min(values) <= 1e-9 * values[0]


def test_records_match_schedule(comparison):
    records = comparison[CurveKind.STATIC_PRODUCT].records
    assert len(records) == 1000
    assert records[0].p_mkt == 0.01 and records[-1].p_mkt == 10.0
    assert [r.t for r in records] == list(range(1000))
