"""
Empirical breakdown of a statistic by stochastic gradient descent / ascent on
the Lagrangian

    TV(p, softmax(z)) + lambda * (delta - rho(z))

where rho is the smoothed deviation. The attack distribution is the running
(ergodic) mean of the iterates; its deviation is then recomputed exactly.

The smoothed deviation has no slope on a plateau of H that lies further than a
few gamma from the next boundary, so the iterates start from the cheapest
single-ranking transfer that already reaches delta (found by exact bisection).
Every reported attack is shrunk back toward p while its exact deviation stays
at least delta.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import softmax

from ..buckets import BucketRanking, batch_hausdorff, hausdorff
from ..dists import RankingDistribution, total_variation
from ..perms import check_n
from .smoothing import AttackConfig, rho_smoothed

MAX_ATTACK_ITEMS = 6
DEVIATION_TOL = 1e-9
REFINE_ITERS = 40
TRACE_COLUMNS = ("step", "tv", "rho_hat", "lambda")


@dataclass(frozen=True, eq=False)
class AttackResult:
    eps_hat: Optional[float]
    achieved_deviation: float
    q_bar: RankingDistribution
    lambda_final: float
    trace: np.ndarray = field(repr=False)
    status: str = "ok"
    delta: float = 0.0

    @property
    def unbreakable(self) -> bool:
        return self.eps_hat is None

    @property
    def eps_hat_l1(self) -> Optional[float]:
        """The same budget as ||p - q_bar||_1, the unit of the exact bounds."""
        return None if self.eps_hat is None else 2.0 * self.eps_hat


def deviation_exact(t_p: BucketRanking, q: RankingDistribution, statistic, variant: str = "ns") -> float:
    """H_variant(T(p), T(q)) evaluated exactly."""
    if t_p.n != q.n:
        raise ValueError(f"mismatched item counts: {t_p.n} vs {q.n}")
    return hausdorff(t_p, statistic(q), variant)


def tv_gradient(p_probs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Subgradient of TV(p, softmax(z)) w.r.t. z through the softmax Jacobian."""
    q = softmax(z)
    g = 0.5 * np.sign(q - p_probs)
    return q * (g - q @ g)


def _initial_logits(p: RankingDistribution, floor: float) -> np.ndarray:
    w = p.probs + floor
    z = np.log(w / w.sum())
    return z - z.max()


def _as_distribution(n: int, probs: np.ndarray) -> RankingDistribution:
    return RankingDistribution.normalized(n, np.clip(probs, 0.0, None))


def _deviations(reference: np.ndarray, probs: np.ndarray, statistic, n: int, variant: str) -> np.ndarray:
    return batch_hausdorff(reference, statistic.positions(probs, n), variant)


def transfer_endpoints(p: RankingDistribution) -> np.ndarray:
    """Single-ranking attacks as rows: the whole mass of the mode moved onto one
    other ranking, then the point mass on every ranking."""
    size = p.probs.shape[0]
    mode = int(np.argmax(p.probs))
    moved = np.tile(p.probs, (size, 1))
    moved[:, mode] -= p.probs[mode]
    moved[np.arange(size), np.arange(size)] += p.probs[mode]
    return np.concatenate([np.delete(moved, mode, axis=0), np.eye(size)])


def shrink_toward(
    p: RankingDistribution,
    ends: np.ndarray,
    reference: np.ndarray,
    statistic,
    cfg: AttackConfig,
) -> np.ndarray:
    """Fraction f of each segment p -> end at which the exact deviation reaches delta.

    Bisection keeps the upper end feasible, so (1 - f) * p + f * end always
    moves the statistic by delta. NaN where the end itself falls short.
    """
    ends = np.atleast_2d(ends)
    target = cfg.delta - DEVIATION_TOL
    fractions = np.full(ends.shape[0], np.nan)
    ok = _deviations(reference, ends, statistic, p.n, cfg.variant) >= target
    if not np.any(ok):
        return fractions
    live = ends[ok]
    lo = np.zeros(live.shape[0])
    hi = np.ones(live.shape[0])
    for _ in range(REFINE_ITERS):
        mid = 0.5 * (lo + hi)
        probs = (1.0 - mid)[:, None] * p.probs[None, :] + mid[:, None] * live
        reached = _deviations(reference, probs, statistic, p.n, cfg.variant) >= target
        hi = np.where(reached, mid, hi)
        lo = np.where(reached, lo, mid)
    fractions[ok] = hi
    return fractions


def best_transfer(p: RankingDistribution, statistic, cfg: AttackConfig, reference: Optional[np.ndarray] = None) -> Optional[RankingDistribution]:
    """Cheapest single-ranking attack reaching delta, shrunk toward p; None if none does."""
    if reference is None:
        reference = statistic(p).positions()
    ends = transfer_endpoints(p)
    fractions = shrink_toward(p, ends, reference, statistic, cfg)
    if np.all(np.isnan(fractions)):
        return None
    cost = fractions * 0.5 * np.abs(ends - p.probs[None, :]).sum(axis=1)
    k = int(np.nanargmin(cost))
    return _as_distribution(p.n, (1.0 - fractions[k]) * p.probs + fractions[k] * ends[k])


def _cheapest(
    p: RankingDistribution,
    candidates: List[RankingDistribution],
    t_p: BucketRanking,
    statistic,
    cfg: AttackConfig,
) -> Optional[Tuple[float, float, RankingDistribution]]:
    """(tv, deviation, q) of the cheapest candidate whose exact deviation reaches delta."""
    reference = t_p.positions()
    best = None
    for q in candidates:
        if cfg.refine:
            f = shrink_toward(p, q.probs, reference, statistic, cfg)[0]
            if np.isnan(f):
                continue
            q = _as_distribution(p.n, (1.0 - f) * p.probs + f * q.probs)
        achieved = deviation_exact(t_p, q, statistic, cfg.variant)
        if achieved < cfg.delta - DEVIATION_TOL:
            continue
        tv = total_variation(p, q)
        if best is None or tv < best[0]:
            best = (tv, achieved, q)
    return best


def estimate_breakdown(p: RankingDistribution, statistic, cfg: AttackConfig, verbose: bool = False) -> AttackResult:
    """Run the smoothed saddle-point attack and report the budget of the cheapest feasible attack.

    `eps_hat` is the total variation TV(p, q_bar), where q_bar is the ergodic
    average or the warm start, whichever is cheaper once shrunk. It is None
    when neither moves the statistic by at least `cfg.delta`.
    """
    n = check_n(p.n, MAX_ATTACK_ITEMS)
    t_p = statistic(p)
    if cfg.delta <= 0:
        return AttackResult(0.0, 0.0, p, cfg.lambda_init, np.empty((0, len(TRACE_COLUMNS))), "ok", cfg.delta)

    rng = np.random.default_rng(cfg.seed)
    reference = t_p.positions()
    start = best_transfer(p, statistic, cfg, reference) if cfg.warm_start else None
    if verbose and start is not None:
        print(f"🎯 warm start: single-ranking transfer at tv={total_variation(p, start):.4f}")
    z = _initial_logits(p if start is None else start, cfg.init_floor)
    lam = float(cfg.lambda_init)
    q_bar = np.zeros_like(p.probs)
    trace = np.zeros((cfg.steps, len(TRACE_COLUMNS)))
    report_every = max(1, cfg.steps // 10)

    for s in range(1, cfg.steps + 1):
        q = softmax(z)
        rho_hat, g_rho = rho_smoothed(p, z, statistic, cfg, rng, reference)
        tv = 0.5 * float(np.abs(q - p.probs).sum())
        trace[s - 1] = (s, tv, rho_hat, lam)
        q_bar += (q - q_bar) / s

        step = cfg.lr_q / np.sqrt(s)
        z = z - step * (tv_gradient(p.probs, z) - lam * g_rho)
        z = z - z.max()
        lam = max(0.0, lam + cfg.lr_lambda / np.sqrt(s) * (cfg.delta - rho_hat))

        if not (np.all(np.isfinite(z)) and np.isfinite(lam)):
            if verbose:
                print(f"❌ attack diverged at step {s}")
            partial = _as_distribution(n, q_bar) if np.all(np.isfinite(q_bar)) else p
            return AttackResult(None, 0.0, partial, lam, trace[:s], "diverged", cfg.delta)
        if verbose and s % report_every == 0:
            print(f"🔄 step {s}/{cfg.steps}: tv={tv:.4f} rho={rho_hat:.4f} lambda={lam:.3f}")

    averaged = _as_distribution(n, q_bar)
    candidates = [averaged] if start is None else [averaged, start]
    best = _cheapest(p, candidates, t_p, statistic, cfg)
    if best is None:
        achieved = deviation_exact(t_p, averaged, statistic, cfg.variant)
        return AttackResult(None, achieved, averaged, lam, trace, "unbreakable", cfg.delta)
    tv, achieved, q_final = best
    return AttackResult(tv, achieved, q_final, lam, trace, "ok", cfg.delta)
