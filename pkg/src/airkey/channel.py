"""Wireless multiple-access channel simulation.

Reciprocal fading among N users, independent eavesdropper taps, additive
superposition at each receiver, optional AWGN, and channel-state estimation.
Gains are positive real scalars (Rayleigh magnitudes): the protocols divide
logarithms by gains and compare real-valued products, so complex phase has
no place here.  A channel is immutable once drawn (block fading within one
protocol execution) and all randomness flows through explicit generators.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from decimal import Decimal, localcontext

from .arith import BigReal, PrecisionContext, to_bigreal
from .errors import NonPositiveGain

_DEFAULT_CTX = PrecisionContext(50)


@dataclass(frozen=True)
class FadingModel:
    """How link gains are drawn.

    ``ideal`` sets every gain to 1; ``rayleigh`` draws Rayleigh magnitudes
    with the given scale; ``integer`` draws c uniformly from {1..c_max} and
    sets the gain to c * h_star exactly (constructed, never rounded), which
    is the premise the full-duplex scheme needs.
    """

    kind: str
    scale: Decimal = Decimal(1)
    c_max: int = 1

    def __post_init__(self):
        if self.kind not in ("ideal", "rayleigh", "integer"):
            raise ValueError(f"unknown fading model {self.kind!r}")

    @classmethod
    def ideal(cls) -> "FadingModel":
        return cls("ideal")

    @classmethod
    def rayleigh(cls, scale) -> "FadingModel":
        scale = to_bigreal(scale)
        if scale <= 0:
            raise ValueError("rayleigh scale must be positive")
        return cls("rayleigh", scale=scale)

    @classmethod
    def integer(cls, c_max: int) -> "FadingModel":
        if c_max < 1:
            raise ValueError("c_max must be >= 1")
        return cls("integer", c_max=c_max)


@dataclass(frozen=True)
class ChannelState:
    """One realization of the network's fading state.

    ``h`` is the reciprocal N x N gain matrix (diagonal unused, held at 0),
    ``h_eve`` the eavesdropper's independent taps, ``h_star`` the public
    reference gain and ``c`` the integer quotients h[i][j] / h_star when the
    channel was drawn in integer mode (None otherwise).
    """

    n_users: int
    h: tuple[tuple[BigReal, ...], ...]
    h_eve: tuple[BigReal, ...]
    h_star: BigReal
    noise_variance: BigReal
    model: FadingModel
    c: tuple[tuple[int, ...], ...] | None = None

    def with_eve_taps(self, taps) -> "ChannelState":
        """Same legitimate channel, different eavesdropper taps."""
        taps = tuple(to_bigreal(t) for t in taps)
        if len(taps) != self.n_users:
            raise ValueError("need one tap per user")
        return replace(self, h_eve=taps)

    def to_json(self, seed=None) -> str:
        doc = {
            "n": self.n_users,
            "model": self.model.kind,
            "h_star": str(self.h_star),
            "h": [[str(g) for g in row] for row in self.h],
            "h_eve": [str(g) for g in self.h_eve],
            "noise_variance": str(self.noise_variance),
            "seed": seed,
        }
        return json.dumps(doc, sort_keys=True)


def _rayleigh_gain(scale: BigReal, rng: random.Random, ctx: PrecisionContext) -> BigReal:
    """Rayleigh magnitude scale * sqrt(-2 ln U), U uniform on (0, 1)."""
    u = 1.0 - rng.random()
    while not 0.0 < u < 1.0:
        u = 1.0 - rng.random()
    with localcontext(ctx._context(ctx._working_prec())):
        return scale * (-2 * to_bigreal(u).ln()).sqrt()


def _draw_gain(model, h_star, rng, ctx):
    if model.kind == "ideal":
        return Decimal(1), None
    if model.kind == "rayleigh":
        return _rayleigh_gain(model.scale, rng, ctx), None
    c = rng.randint(1, model.c_max)
    with localcontext(ctx._context(ctx._working_prec())):
        return c * h_star, c


def draw_channel(
    n_users: int,
    model: FadingModel,
    h_star,
    noise_variance,
    rng: random.Random,
    ctx: PrecisionContext = _DEFAULT_CTX,
) -> ChannelState:
    """Draw a reciprocal channel plus independent eavesdropper taps.

    Eve's taps come from the same marginal distribution as the legitimate
    gains but are statistically independent of them (nodes sit more than
    half a wavelength apart).
    """
    if n_users < 2:
        raise ValueError("need at least two users")
    h_star = to_bigreal(h_star)
    if h_star <= 0:
        raise NonPositiveGain("h_star must be positive")
    noise_variance = to_bigreal(noise_variance)
    if noise_variance < 0:
        raise ValueError("noise variance cannot be negative")

    h = [[Decimal(0)] * n_users for _ in range(n_users)]
    c = [[0] * n_users for _ in range(n_users)] if model.kind == "integer" else None
    for i in range(n_users):
        for j in range(i + 1, n_users):
            gain, cij = _draw_gain(model, h_star, rng, ctx)
            h[i][j] = h[j][i] = gain
            if c is not None:
                c[i][j] = c[j][i] = cij
    h_eve = tuple(_draw_gain(model, h_star, rng, ctx)[0] for _ in range(n_users))
    return ChannelState(
        n_users=n_users,
        h=tuple(tuple(row) for row in h),
        h_eve=h_eve,
        h_star=h_star,
        noise_variance=noise_variance,
        model=model,
        c=tuple(tuple(row) for row in c) if c is not None else None,
    )


def rayleigh_taps(
    n: int, scale, rng: random.Random, ctx: PrecisionContext = _DEFAULT_CTX
) -> tuple[BigReal, ...]:
    """Continuous Rayleigh taps, e.g. for an eavesdropper of an integer-mode
    channel whose physical link is not integer-quantized."""
    scale = to_bigreal(scale)
    return tuple(_rayleigh_gain(scale, rng, ctx) for _ in range(n))


def _noise_sample(variance: BigReal, rng: random.Random) -> BigReal:
    if variance == 0:
        return Decimal(0)
    sigma = float(variance) ** 0.5
    return to_bigreal(rng.gauss(0.0, sigma))


def superpose(
    signals,
    receiver: int,
    exclude_self: bool,
    ch: ChannelState,
    rng: random.Random | None = None,
    ctx: PrecisionContext = _DEFAULT_CTX,
) -> BigReal:
    """Receiver-side observation: sum of h[i][receiver] * signal_i plus noise.

    ``exclude_self`` models both the half-duplex receiver (which stays
    silent) and ideal self-interference cancellation (own term removed).
    Entries of ``signals`` may be None for users that do not transmit.
    """
    if len(signals) != ch.n_users:
        raise ValueError("need one signal slot per user")
    with localcontext(ctx._context(ctx._working_prec())):
        total = Decimal(0)
        for i, s in enumerate(signals):
            if s is None or (exclude_self and i == receiver):
                continue
            total += ch.h[i][receiver] * s
        if ch.noise_variance > 0:
            if rng is None:
                raise ValueError("a noisy channel needs an rng")
            total += _noise_sample(ch.noise_variance, rng)
        return +total


def eve_observe(
    signals,
    ch: ChannelState,
    rng: random.Random | None = None,
    ctx: PrecisionContext = _DEFAULT_CTX,
) -> BigReal:
    """Eavesdropper observation: sum of h_eve[i] * signal_i plus noise.

    Eve hears the raw superposition; self-interference cancellation never
    helps her.
    """
    if len(signals) != ch.n_users:
        raise ValueError("need one signal slot per user")
    with localcontext(ctx._context(ctx._working_prec())):
        total = Decimal(0)
        for i, s in enumerate(signals):
            if s is None:
                continue
            total += ch.h_eve[i] * s
        if ch.noise_variance > 0:
            if rng is None:
                raise ValueError("a noisy channel needs an rng")
            total += _noise_sample(ch.noise_variance, rng)
        return +total


@dataclass(frozen=True)
class CsiEstimate:
    """Per-link gain estimates available to the transmitters."""

    h_hat: tuple[tuple[BigReal, ...], ...]
    kind: str  # "perfect" | "relative"
    epsilon: float = 0.0


def estimate_csi(
    ch: ChannelState,
    error_model: str = "perfect",
    epsilon: float = 0.0,
    rng: random.Random | None = None,
    ctx: PrecisionContext = _DEFAULT_CTX,
) -> CsiEstimate:
    """Channel estimates: exact, or with bounded relative error.

    ``relative`` perturbs each directed link independently by a uniform
    relative factor in [-epsilon, epsilon]; estimates are drawn once per
    channel realization and reused for every round.
    """
    if error_model not in ("perfect", "relative"):
        raise ValueError(f"unknown CSI error model {error_model!r}")
    if epsilon < 0:
        raise ValueError("epsilon cannot be negative")
    if error_model == "perfect" or epsilon == 0:
        return CsiEstimate(h_hat=ch.h, kind=error_model, epsilon=epsilon)
    if rng is None:
        raise ValueError("relative CSI error needs an rng")
    n = ch.n_users
    with localcontext(ctx._context(ctx._working_prec())):
        h_hat = tuple(
            tuple(
                ch.h[i][j] * (1 + to_bigreal(rng.uniform(-epsilon, epsilon)))
                if i != j
                else Decimal(0)
                for j in range(n)
            )
            for i in range(n)
        )
    return CsiEstimate(h_hat=h_hat, kind="relative", epsilon=epsilon)
