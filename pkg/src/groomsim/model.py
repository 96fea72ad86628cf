"""Trade-off model of social ties and its day-level simulator.

A groomer holds total cost C and aims for N ties whose mean strength is
m = (C/N)^(1/a).  Each day it may create new ties (Poisson, free) and spends
a daily budget G = alpha*C*(m^(1-a) - m^(-a))/T reinforcing existing ties,
picking partners with probability proportional to current strength and paying
v(w) = alpha*w + 1 per act, where w = d/t is the tie's grooming density.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import ValidationError
from .seeds import mix_seed


def grooming_cost(w: float, alpha: float) -> float:
    """Per-act grooming amount v(w) = alpha*w + 1 for density w = d/t."""
    if w < 0:
        raise ValidationError(f"density w must be >= 0, got {w}")
    if alpha < 0:
        raise ValidationError(f"alpha must be >= 0, got {alpha}")
    return alpha * w + 1.0


def target_mean_strength(C: float, N: float, a: float) -> float:
    """Mean strength m = (C/N)^(1/a) implied by cost C and tie count N."""
    if C <= 0:
        raise ValidationError(f"C must be > 0, got {C}")
    if N < 1:
        raise ValidationError(f"N must be >= 1, got {N}")
    if a <= 0:
        raise ValidationError(f"a must be > 0, got {a}")
    return (C / N) ** (1.0 / a)


@dataclass(frozen=True)
class ModelParams:
    """Simulation parameters: trade-off exponent a, grooming slope alpha,
    horizon T in days, and (data side only) the cost exponent b in C = u**b."""

    a: float
    alpha: float
    T: int
    b: float | None = None

    def __post_init__(self):
        if self.a <= 0:
            raise ValidationError(f"a must be > 0, got {self.a}")
        if self.alpha < 0:
            raise ValidationError(f"alpha must be >= 0, got {self.alpha}")
        # T == 0 is allowed so a zero-day run degenerates to the initial state.
        if int(self.T) != self.T or self.T < 0:
            raise ValidationError(f"T must be a non-negative integer, got {self.T}")


def grooming_budget(params: ModelParams, C: float, m: float) -> float:
    """Daily reinforcement budget G = alpha*C*(m^(1-a) - m^(-a))/T."""
    if C <= 0:
        raise ValidationError(f"C must be > 0, got {C}")
    if m < 1:
        raise ValidationError(f"mean strength below one day is impossible, got m={m}")
    if params.T < 1:
        raise ValidationError("budget is undefined for a zero-day horizon")
    a = params.a
    return params.alpha * C * (m ** (1.0 - a) - m ** (-a)) / params.T


@dataclass(frozen=True)
class GroomerSpec:
    """One groomer's settings: total cost C, intended tie count, and the
    implied mean strength (exact at construction via from_targets)."""

    id: str
    C: float
    N_target: int
    m_target: float

    def __post_init__(self):
        if self.C <= 0:
            raise ValidationError(f"C must be > 0, got {self.C}")
        if self.N_target < 1:
            raise ValidationError(f"N_target must be >= 1, got {self.N_target}")
        if self.m_target < 1:
            raise ValidationError(
                f"m_target must be >= 1, got {self.m_target} "
                f"(C={self.C} cannot support N={self.N_target})"
            )

    @classmethod
    def from_targets(cls, id: str, C: float, N_target: int, a: float) -> "GroomerSpec":
        return cls(str(id), float(C), int(N_target), target_mean_strength(C, N_target, a))


@dataclass
class SimLedger:
    """Per-groomer tie strengths (groomee identity = list index) plus
    per-day spend accounting used by the conservation checks."""

    strengths: list[float]
    day: int = 0
    daily_spent: list[float] = field(default_factory=list)
    daily_exhausted: list[bool] = field(default_factory=list)

    @classmethod
    def initial(cls) -> "SimLedger":
        return cls(strengths=[1.0])

    def tie_count(self) -> int:
        return len(self.strengths)

    def mean_strength(self) -> float:
        return sum(self.strengths) / len(self.strengths)


@dataclass(frozen=True)
class SimStreams:
    """Independent uniform streams for tie creation and reinforcement.

    Keeping them separate means the creation draws (one per day) sit at fixed
    stream positions, so realized tie counts do not depend on alpha; candidate
    alphas evaluated under the same seed then share common random numbers.
    """

    create: random.Random
    reinforce: random.Random

    @classmethod
    def for_groomer(cls, run_seed: int, index: int) -> "SimStreams":
        return cls(
            create=random.Random(mix_seed(run_seed, index, 0)),
            reinforce=random.Random(mix_seed(run_seed, index, 1)),
        )


def poisson_draw(lam: float, rng: random.Random) -> int:
    """Poisson sample by inversion with sequential search; exact for the
    small rates used here and consumes exactly one uniform."""
    if lam < 0:
        raise ValidationError(f"rate must be >= 0, got {lam}")
    if lam == 0:
        return 0
    u = rng.random()
    k = 0
    p = math.exp(-lam)
    cdf = p
    while u > cdf:
        k += 1
        p *= lam / k
        cdf += p
        if k > 1000:  # guard against float saturation with u ~ 1
            break
    return k


def pick_weighted(weights, r: float) -> int:
    """Index owning point r in the cumulative mass of `weights` (0 <= r < sum)."""
    acc = 0.0
    last = len(weights) - 1
    for k, w in enumerate(weights):
        acc += w
        if r < acc:
            return k
    return last


def simulate_day(ledger: SimLedger, spec: GroomerSpec, params: ModelParams,
                 t: int, streams: SimStreams) -> SimLedger:
    """Advance one day: Poisson tie creation, then budgeted reinforcement.

    Creation is free; each reinforcement act on partner j costs
    v = alpha*(d_j/t) + 1 priced on the pre-increment strength, adds 1 to d_j
    (or the fraction R/v if the remaining budget R falls short, ending the
    day), and removes j from the day's eligible set.
    """
    if not 1 <= t <= params.T:
        raise ValidationError(f"day index {t} outside [1, {params.T}]")
    if t != ledger.day + 1:
        raise ValidationError(f"days must be simulated in order; expected {ledger.day + 1}, got {t}")

    strengths = ledger.strengths
    for _ in range(poisson_draw((spec.N_target - 1) / params.T, streams.create)):
        strengths.append(1.0)

    budget = grooming_budget(params, spec.C, spec.m_target)
    R = budget
    alpha = params.alpha
    rand = streams.reinforce.random
    elig_idx = list(range(len(strengths)))
    elig_w = list(strengths)
    W = sum(elig_w)
    while R > 0.0 and elig_idx:
        pos = pick_weighted(elig_w, rand() * W)
        i = elig_idx[pos]
        d = strengths[i]
        v = alpha * (d / t) + 1.0
        if R >= v:
            strengths[i] = d + 1.0
            R -= v
        else:
            strengths[i] = d + R / v
            R = 0.0
        W -= elig_w[pos]
        elig_idx[pos] = elig_idx[-1]
        elig_w[pos] = elig_w[-1]
        elig_idx.pop()
        elig_w.pop()

    ledger.day = t
    ledger.daily_spent.append(budget - R)
    ledger.daily_exhausted.append(not elig_idx)
    return ledger


def run_simulation(specs: list[GroomerSpec], params: ModelParams, seed: int) -> list[SimLedger]:
    """Run every groomer for T days; each groomer owns substreams of `seed`,
    so output is identical however the groomers are scheduled."""
    if not specs:
        raise ValidationError("specs must be non-empty")
    ledgers = []
    for index, spec in enumerate(specs):
        streams = SimStreams.for_groomer(seed, index)
        ledger = SimLedger.initial()
        for t in range(1, params.T + 1):
            simulate_day(ledger, spec, params, t, streams)
        ledgers.append(ledger)
    return ledgers


def log_spaced_specs(C: float, a: float, T: int, M: int, prefix: str = "g") -> list[GroomerSpec]:
    """M groomer specs whose tie targets divide [1, T] evenly on a log scale."""
    if M < 1:
        raise ValidationError(f"M must be >= 1, got {M}")
    if T < 1:
        raise ValidationError(f"T must be >= 1, got {T}")
    specs = []
    for i in range(M):
        frac = i / (M - 1) if M > 1 else 0.0
        n = max(1, round(math.exp(math.log(T) * frac)))
        specs.append(GroomerSpec.from_targets(f"{prefix}{i}", C, n, a))
    return specs
