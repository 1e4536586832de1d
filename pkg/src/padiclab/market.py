"""Seeded Metropolis dynamics for the four-state trader ensemble.

Each agent occupies one of (empty, buy, sell, hold) with on-site energy
U * [hold] - mu * (particle count), matching the atomic spectrum
{0, -mu, -mu, U - 2 mu}.  Two proposal moves drive the chain:

  * a single-agent state flip (grand-canonical move, on-site energy only);
  * a paired trade transferring one position side from agent i to agent j,
    proposed with relative weight W against the unit flip weight.

The stochastic update rule itself is artifact plumbing: the states and the
couplings (W, U, mu) carry the model content, the proposal mixture and the
temperature are configuration, all declared here and in the output metadata.

The price signal is the buy/sell imbalance per step, accumulated into a
log-price walk.  Runs are deterministic for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EMPTY, BUY, SELL, HOLD = 0, 1, 2, 3
STATE_NAMES = ("empty", "buy", "sell", "hold")

# (up-side, down-side) occupation per state
_OCC = np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=np.int8)
_STATE_OF_OCC = {(0, 0): EMPTY, (1, 0): BUY, (0, 1): SELL, (1, 1): HOLD}


@dataclass(frozen=True)
class MarketConfig:
    n_agents: int
    w_pair: float = 1.0
    u_hold: float = 1.0
    mu: float = 0.0
    beta_temp: float = 1.0
    steps: int = 1000
    seed: int = 0
    init: str = "empty"  # "empty" or "random"

    def __post_init__(self) -> None:
        if self.n_agents < 2:
            raise ValueError("need at least 2 agents")
        if self.steps < 0:
            raise ValueError("steps must be >= 0")
        if self.w_pair < 0 or self.beta_temp < 0:
            raise ValueError("W and beta must be nonnegative")
        if self.init not in ("empty", "random"):
            raise ValueError("init must be 'empty' or 'random'")


@dataclass(frozen=True)
class MarketSeries:
    """Per-step occupation counts and the accumulated price walk."""

    steps: np.ndarray
    n_buy: np.ndarray
    n_sell: np.ndarray
    n_hold: np.ndarray
    price: np.ndarray
    config: MarketConfig

    @property
    def n_empty(self) -> np.ndarray:
        return self.config.n_agents - self.n_buy - self.n_sell - self.n_hold


def _site_energy(state: int, cfg: MarketConfig) -> float:
    occ = _OCC[state]
    return cfg.u_hold * (state == HOLD) - cfg.mu * int(occ[0] + occ[1])


def simulate_market(cfg: MarketConfig) -> MarketSeries:
    """Run the Metropolis chain and return the recorded series (step 0 included)."""
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n_agents
    if cfg.init == "empty":
        states = np.full(n, EMPTY, dtype=np.int8)
    else:
        states = rng.integers(0, 4, size=n).astype(np.int8)

    energy = np.array([_site_energy(s, cfg) for s in range(4)])
    p_pair = cfg.w_pair / (1.0 + cfg.w_pair)

    def accept(delta: float) -> bool:
        if delta <= 0.0:
            return True
        w = math.exp(-cfg.beta_temp * delta) if cfg.beta_temp * delta < 745.0 else 0.0
        return rng.random() < w

    counts = np.bincount(states, minlength=4).astype(np.int64)
    n_buy = np.empty(cfg.steps + 1, dtype=np.int64)
    n_sell = np.empty(cfg.steps + 1, dtype=np.int64)
    n_hold = np.empty(cfg.steps + 1, dtype=np.int64)
    price = np.empty(cfg.steps + 1)
    log_price = 0.0
    n_buy[0], n_sell[0], n_hold[0], price[0] = counts[BUY], counts[SELL], counts[HOLD], 1.0

    for t in range(1, cfg.steps + 1):
        if rng.random() < p_pair:
            i = int(rng.integers(n))
            j = int(rng.integers(n - 1))
            if j >= i:
                j += 1
            side = int(rng.integers(2))
            occ_i, occ_j = _OCC[states[i]].copy(), _OCC[states[j]].copy()
            if occ_i[side] == 1 and occ_j[side] == 0:
                occ_i[side], occ_j[side] = 0, 1
                new_i = _STATE_OF_OCC[tuple(occ_i)]
                new_j = _STATE_OF_OCC[tuple(occ_j)]
                delta = (
                    energy[new_i] + energy[new_j] - energy[states[i]] - energy[states[j]]
                )
                if accept(delta):
                    counts[states[i]] -= 1
                    counts[states[j]] -= 1
                    counts[new_i] += 1
                    counts[new_j] += 1
                    states[i], states[j] = new_i, new_j
        else:
            i = int(rng.integers(n))
            target = (int(states[i]) + 1 + int(rng.integers(3))) % 4
            delta = energy[target] - energy[states[i]]
            if accept(delta):
                counts[states[i]] -= 1
                counts[target] += 1
                states[i] = target

        log_price += (counts[BUY] - counts[SELL]) / n
        n_buy[t], n_sell[t], n_hold[t] = counts[BUY], counts[SELL], counts[HOLD]
        price[t] = math.exp(log_price)

    return MarketSeries(
        steps=np.arange(cfg.steps + 1),
        n_buy=n_buy,
        n_sell=n_sell,
        n_hold=n_hold,
        price=price,
        config=cfg,
    )
