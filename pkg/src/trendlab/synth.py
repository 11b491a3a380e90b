"""Synthetic market generators with known statistical content.

Three ground-truth generators on a 5-minute bar grid:

- random walk (memoryless null model),
- fractional Brownian motion with tunable Hurst exponent (Davies-Harte
  exact sampling of fractional Gaussian noise),
- regime-switching drift series (positive control with engineered
  trend-following content).

All generators are deterministic per seed and emit valid Series.
"""
from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

import numpy as np

from .series import Series

__all__ = ["SynthSpec", "BadHurst", "generate", "gen_random_walk", "gen_fbm", "gen_regime_trend"]

BAR_SECONDS = 300
START_EPOCH = 946_857_600  # 2000-01-03T00:00:00Z

KINDS = ("random_walk", "fbm", "regime_trend")


class BadHurst(ValueError):
    pass


@dataclass(frozen=True)
class SynthSpec:
    """Parameters for one synthetic series.

    sigma_bp scales per-bar increments; hurst applies to fbm only;
    drift_bp and regime_len_mean apply to regime_trend only.
    """

    kind: str
    n: int
    sigma_bp: float = 5.0
    hurst: float = 0.5
    drift_bp: float = 0.0
    regime_len_mean: float = 500.0
    seed: int = 0
    start_price_bp: int = 1_000_000
    tick_size: Decimal = Decimal("0.0001")
    slippage_bp: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if self.sigma_bp <= 0:
            raise ValueError("sigma_bp must be positive")
        if self.kind == "fbm" and not 0.0 < self.hurst < 1.0:
            raise BadHurst(f"hurst must be in (0, 1), got {self.hurst}")
        if self.kind == "regime_trend" and self.regime_len_mean < 1:
            raise ValueError("regime_len_mean must be >= 1")
        if self.start_price_bp <= 0:
            raise ValueError("start_price_bp must be positive")


def _grid(n: int) -> np.ndarray:
    return START_EPOCH + BAR_SECONDS * np.arange(n, dtype=np.int64)


def _series(spec: SynthSpec, close_bp: np.ndarray) -> Series:
    return Series(_grid(close_bp.size), close_bp, spec.tick_size, spec.slippage_bp)


def _empty(spec: SynthSpec) -> Series:
    return _series(spec, np.empty(0, dtype=np.int64))


def gen_random_walk(spec: SynthSpec) -> Series:
    """Integer random walk: i.i.d. Gaussian increments rounded to bp."""
    if spec.kind != "random_walk":
        raise ValueError(f"spec.kind is {spec.kind!r}, expected 'random_walk'")
    if spec.n == 0:
        return _empty(spec)
    rng = np.random.default_rng(spec.seed)
    inc = np.round(rng.normal(0.0, spec.sigma_bp, spec.n - 1)).astype(np.int64)
    close = spec.start_price_bp + np.concatenate([[0], np.cumsum(inc)])
    return _series(spec, close)


def fractional_gaussian_noise(hurst: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Exact unit-variance fGn sample of length n via circulant embedding.

    The covariance of the output matches
    gamma(k) = 0.5 * (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) exactly
    (up to float rounding of the circulant eigenvalues).
    """
    if not 0.0 < hurst < 1.0:
        raise BadHurst(f"hurst must be in (0, 1), got {hurst}")
    if n == 0:
        return np.empty(0)
    if n == 1:
        return rng.standard_normal(1)
    k = np.arange(n, dtype=np.float64)
    gamma = 0.5 * ((k + 1) ** (2 * hurst) - 2 * k ** (2 * hurst) + np.abs(k - 1) ** (2 * hurst))
    circ = np.concatenate([gamma, gamma[-2:0:-1]])
    lam = np.fft.rfft(circ).real
    # tiny negative eigenvalues are float noise; clamp
    lam = np.maximum(lam, 0.0)
    m = circ.size
    w = rng.standard_normal(lam.size) + 1j * rng.standard_normal(lam.size)
    z = np.sqrt(lam * m / 2.0) * w
    return np.fft.irfft(z, n=m)[:n]


def gen_fbm(spec: SynthSpec) -> Series:
    """Fractional Brownian motion path, scaled by sigma_bp and rounded.

    The continuous path is generated first and rounded to the bp grid at
    the end, so increment covariances hold exactly before rounding.
    """
    if spec.kind != "fbm":
        raise ValueError(f"spec.kind is {spec.kind!r}, expected 'fbm'")
    if spec.n == 0:
        return _empty(spec)
    rng = np.random.default_rng(spec.seed)
    fgn = fractional_gaussian_noise(spec.hurst, spec.n - 1, rng)
    path = np.round(np.cumsum(spec.sigma_bp * fgn)).astype(np.int64)
    close = spec.start_price_bp + np.concatenate([[0], path])
    return _series(spec, close)


def gen_regime_trend(spec: SynthSpec) -> Series:
    """Alternating-drift regimes: geometric lengths, Gaussian noise.

    Within each regime increments are Gaussian(sign * drift_bp, sigma_bp)
    with the sign fixed per regime and alternating between regimes; the
    starting sign is drawn from the seed stream so the full-sample drift
    is symmetric around zero.
    """
    if spec.kind != "regime_trend":
        raise ValueError(f"spec.kind is {spec.kind!r}, expected 'regime_trend'")
    if spec.n == 0:
        return _empty(spec)
    rng = np.random.default_rng(spec.seed)
    n_inc = spec.n - 1
    sign = 1 if rng.random() < 0.5 else -1
    drift = np.empty(n_inc)
    filled = 0
    while filled < n_inc:
        length = int(rng.geometric(1.0 / spec.regime_len_mean))
        take = min(length, n_inc - filled)
        drift[filled : filled + take] = sign * spec.drift_bp
        sign = -sign
        filled += take
    inc = np.round(drift + rng.normal(0.0, spec.sigma_bp, n_inc)).astype(np.int64)
    close = spec.start_price_bp + np.concatenate([[0], np.cumsum(inc)])
    return _series(spec, close)


_GENERATORS = {
    "random_walk": gen_random_walk,
    "fbm": gen_fbm,
    "regime_trend": gen_regime_trend,
}


def generate(spec: SynthSpec) -> Series:
    """Dispatch to the generator named by spec.kind."""
    return _GENERATORS[spec.kind](spec)
