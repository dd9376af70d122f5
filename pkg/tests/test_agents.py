import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats
from scipy.optimize import minimize_scalar

from dynamic_amm.agents import (
    Role,
    TradeSequence,
    Wallet,
    arbitrage_decide,
    generate_trade_sequence,
    trade_cost,
)
from dynamic_amm.curves import CurveKind, CurveSpec, PoolState, quote, retune, spot_price

K = 1e6
POOL = PoolState(1000.0, 1000.0)
RICH = Wallet(1e9, 1e9)


class TestTradeSequence:
    def test_statistics(self):
        draws = np.array(generate_trade_sequence(42, 1000).draws)
        assert len(draws) == 1000
        assert abs(draws.mean()) < 0.1
        assert abs(draws.std() - 1) < 0.1

    def test_deterministic_and_seeded(self):
        assert generate_trade_sequence(42, 1000) == generate_trade_sequence(42, 1000)
        assert generate_trade_sequence(43, 1000).draws != generate_trade_sequence(42, 1000).draws

    def test_normality(self):
        draws = generate_trade_sequence(5, 20000).draws
        assert stats.kstest(draws, "norm").pvalue > 1e-3

    def test_replay_round_trip(self, tmp_path):
        seq = generate_trade_sequence(42, 300)
        path = tmp_path / "trades.txt"
        seq.save(path)
        assert TradeSequence.load(path).draws == seq.draws

    def test_rejects_nonpositive_steps(self):
        with pytest.raises(ValueError):
            generate_trade_sequence(1, 0)


class TestArbitrageProduct:
    def test_buy_closes_gap(self):
        req = arbitrage_decide(CurveSpec.static_product(K), POOL, 4.0, RICH, 0.0)
        assert req.agent is Role.ARBITRAGEUR
        assert req.delta_x == pytest.approx(500.0, rel=1e-12)

    def test_matches_profit_maximiser(self):
        # Oracle: maximise mark-to-market profit directly over the trade size.
        curve = CurveSpec.static_product(K)
        for p in (0.3, 2.5, 7.0):
            def neg_profit(dx):
                return -(p * dx - quote(curve, POOL, dx).delta_y)
            best = minimize_scalar(neg_profit, bounds=(-5000, 999), method="bounded",
                                   options={"xatol": 1e-10})
            req = arbitrage_decide(curve, POOL, p, RICH, 0.0)
            assert req.delta_x == pytest.approx(best.x, abs=1e-4)

    def test_no_gap(self):
        assert arbitrage_decide(CurveSpec.static_product(K), POOL, 1.0, RICH, 0.0) is None

    def test_budget_clip_spends_wallet(self):
        curve = CurveSpec.static_product(K)
        wallet = Wallet(0.0, 300.0)
        req = arbitrage_decide(curve, POOL, 4.0, wallet, 0.02)
        dy, fee = trade_cost(curve, POOL, req.delta_x, 0.02)
        assert 0 <= wallet.y - dy - fee < 1e-6
        assert spot_price(curve, quote(curve, POOL, req.delta_x).new_pool) < 4.0

    def test_sell_clipped_to_wallet_x(self):
        req = arbitrage_decide(CurveSpec.static_product(K), POOL, 0.01, Wallet(50.0, 0.0), 0.02)
        assert req.delta_x == -50.0

    def test_fee_blocks_small_gap(self):
        assert arbitrage_decide(CurveSpec.static_product(K), POOL, 1.01, RICH, 0.02) is None


class TestArbitrageSum:
    def test_buys_out_pool(self):
        req = arbitrage_decide(CurveSpec.static_sum(2000.0), POOL, 5.0, Wallet(1000, 1000), 0.0)
        assert req.delta_x == 1000.0

    def test_band(self):
        curve = CurveSpec.static_sum(2000.0)
        assert arbitrage_decide(curve, POOL, 1.015, RICH, 0.02) is None
        assert arbitrage_decide(curve, POOL, 1 / 1.015, RICH, 0.02) is None
        assert arbitrage_decide(curve, POOL, 1.03, RICH, 0.02).delta_x > 0
        assert arbitrage_decide(curve, POOL, 0.9, RICH, 0.02).delta_x == -1000.0

    def test_fee_aware_budget(self):
        req = arbitrage_decide(CurveSpec.static_sum(4000.0), PoolState(3000, 1000), 5.0,
                               Wallet(0, 1020), 0.02)
        assert req.delta_x == pytest.approx(1000.0, rel=1e-9)
        assert req.delta_x * 1.02 <= 1020


def test_rejects_dynamic_curves():
    with pytest.raises(ValueError):
        arbitrage_decide(CurveSpec.dynamic_product(K), POOL, 2.0, RICH, 0.0)


pools = st.builds(PoolState, st.floats(10, 1e4), st.floats(10, 1e4))
wallets = st.builds(Wallet, st.floats(0, 5e3), st.floats(0, 5e3))


@settings(max_examples=300)
@given(pool=pools, p=st.floats(0.01, 100), wallet=wallets, fee=st.floats(0, 0.1),
       kind=st.sampled_from([CurveKind.STATIC_SUM, CurveKind.STATIC_PRODUCT]))
def test_budget_safety_and_profit(pool, p, wallet, fee, kind):
    curve = CurveSpec.for_pool(kind, pool)
    req = arbitrage_decide(curve, pool, p, wallet, fee)
    if req is None:
        return
    dy, fee_y = trade_cost(curve, pool, req.delta_x, fee)
    after = Wallet(wallet.x + req.delta_x, wallet.y - dy - fee_y)
    assert after.value(p) > wallet.value(p)


@settings(max_examples=200)
@given(pool=pools, p=st.floats(0.01, 100))
def test_unlimited_zero_fee_equalises_price(pool, p):
    curve = CurveSpec.for_pool(CurveKind.STATIC_PRODUCT, pool)
    req = arbitrage_decide(curve, pool, p, RICH, 0.0)
    if req is None:
        assert abs(spot_price(curve, pool) - p) <= 1e-9 * max(1, p)
        return
    after = quote(curve, pool, req.delta_x).new_pool
    assert abs(spot_price(curve, after) - p) <= 1e-9 * max(1, p)


@settings(max_examples=200)
@given(pool=pools, p=st.floats(0.01, 100), frac=st.floats(-0.9, 0.9), fee=st.floats(0, 0.05))
def test_no_profit_after_retune(pool, p, frac, fee):
    """Right after a retune, trading at the market price cannot beat holding."""
    for kind in (CurveKind.DYNAMIC_SUM, CurveKind.DYNAMIC_PRODUCT):
        curve = retune(CurveSpec.for_pool(kind, pool), pool, p)
        dx = frac * min(pool.x, pool.y / p) * 0.99
        if abs(dx) < 1e-6:
            continue
        q = quote(curve, pool, dx)
        profit = p * dx - q.delta_y - fee * abs(dx) * p
        if kind is CurveKind.DYNAMIC_SUM:
            assert profit <= 1e-9 * max(1.0, abs(q.delta_y))
        else:
            assert profit < 0 or math.isclose(profit, 0, abs_tol=1e-9)
