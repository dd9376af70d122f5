"""Static and market-tracking constant-sum / constant-product AMMs with an agent-based simulator."""
from .agents import TradeRequest, TradeSequence, Wallet, arbitrage_decide, generate_trade_sequence
from .curves import (
    CurveKind,
    CurveSpec,
    PoolState,
    SwapQuote,
    curve_y_at,
    execute_swap,
    max_buyable_x,
    quote,
    retune_dynamic_product,
    retune_dynamic_sum,
    spot_price,
)
from .engine import SimConfig, SimRecord, run, run_comparison, settle_trade, step
from .market import PriceSchedule, price_at
from .metrics import (
    divergence_loss_constant_product,
    divergence_loss_general,
    pool_value,
    slippage,
)

__version__ = "0.1.0"
