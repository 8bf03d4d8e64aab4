"""Executable state machines for the coin-flipping protocols.

A run is an ordered exchange:

1. Alice emits a quantum signal (a state, half an entangled pair, a
   multi-photon pulse, or nothing at all) which crosses the lossy channel.
2. Bob reacts to the delivery: measures immediately, stores it, or requests
   a restart (honestly on loss, or dishonestly).
3. Bob sends a random-looking bit b.
4. Alice reveals a basis bit a and a bit x.
5. Bob verifies if he can, and either accepts or calls Alice a cheater
   (or, in stored-measurement variants, claims loss and forces a restart).
6. On acceptance the coin is x xor b (loss-tolerant template) or a xor b
   (BB84/Ambainis templates).

Player behavior is injected through hooks so cheating strategies can replace
any step; the engine only moves messages, applies channel loss, enforces the
restart bound and records the transcript. Hooks are stateful within a single
run (restarts included) and must never be shared across runs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from . import catalog
from .catalog import Family, StateFamily
from .channel import ChannelParams, Pulse, transmit
from .errors import IncompatibleProtocol, RestartLimitExceeded
from .quantum import (MeasurementOutcome, ProjectiveMeasurement, QuantumState,
                      measure_projective, steer_epr)
from .rng import RandomStream


class ProtocolId(Enum):
    BB84_CF = "bb84"
    AMBAINIS_CF = "ambainis"
    AMBAINIS_CF_VARIANT = "ambainis_variant"
    LOSS_TOLERANT_CF = "loss_tolerant"
    MCQM_CONTRIVED_CF = "mcqm_contrived"


class LossPolicy(Enum):
    NONE = "none"
    BELIEVE_ON_FAITH = "believe_on_faith"
    RESTART_ON_LOSS = "restart_on_loss"


@dataclass(frozen=True)
class VariantFlags:
    loss_policy: LossPolicy = LossPolicy.NONE
    bob_measures_on_reception: bool = True


def default_flags(protocol: ProtocolId) -> VariantFlags:
    if protocol in (ProtocolId.BB84_CF, ProtocolId.LOSS_TOLERANT_CF,
                    ProtocolId.MCQM_CONTRIVED_CF):
        return VariantFlags(LossPolicy.RESTART_ON_LOSS, True)
    # Ambainis template: Bob stores and measures only after the reveal.
    return VariantFlags(LossPolicy.NONE, False)


def check_flags(protocol: ProtocolId, flags: VariantFlags) -> None:
    if protocol in (ProtocolId.BB84_CF, ProtocolId.LOSS_TOLERANT_CF,
                    ProtocolId.MCQM_CONTRIVED_CF):
        if not flags.bob_measures_on_reception:
            raise IncompatibleProtocol(
                f"{protocol.value} requires measurement on reception")
    elif protocol is ProtocolId.AMBAINIS_CF and flags.bob_measures_on_reception:
        raise IncompatibleProtocol("plain Ambainis protocol stores the qutrit")


def family_for(protocol: ProtocolId, alpha2: Optional[float] = None) -> StateFamily:
    if protocol is ProtocolId.BB84_CF:
        return StateFamily(Family.BB84)
    if protocol in (ProtocolId.AMBAINIS_CF, ProtocolId.AMBAINIS_CF_VARIANT):
        return StateFamily(Family.AMBAINIS)
    if protocol is ProtocolId.MCQM_CONTRIVED_CF:
        return StateFamily(Family.MCQM_EXAMPLE)
    return StateFamily(Family.LOSS_TOLERANT, alpha2)


class Verdict(Enum):
    ACCEPTED = "accepted"
    ABORT_CHEATER = "abort_cheater"


class Action(Enum):
    MEASURED = "measured"
    STORED = "stored"
    REQUEST_RESTART = "request_restart"
    CLAIM_LOSS_FALSELY = "claim_loss_falsely"


# ---------------------------------------------------------------------------
# emissions

@dataclass
class SingleState:
    state: QuantumState
    tag: str = "state"


@dataclass
class Vacuum:
    tag: str = "vacuum"


@dataclass
class MultiPhoton:
    pulse: Pulse

    @property
    def tag(self) -> str:
        return f"pulse:{self.pulse.photon_count}"


class EprLink:
    """One shared singlet; whichever party measures first steers the other."""

    ALICE = "alice"
    BOB = "bob"

    def __init__(self):
        self._collapsed: dict[str, Optional[QuantumState]] = {
            self.ALICE: None, self.BOB: None}
        self._measured: set[str] = set()

    def measure(self, side: str, m: ProjectiveMeasurement,
                rng: RandomStream) -> int:
        """Measure this side's half in basis m; returns the outcome index."""
        if side in self._measured:
            raise RuntimeError(f"{side} already measured its half")
        self._measured.add(side)
        other = self.ALICE if side == self.BOB else self.BOB
        local = self._collapsed[side]
        if local is None:
            i, far = steer_epr(m, rng)
            self._collapsed[other] = far
            return i
        return rng.choice(m.probabilities(local))


@dataclass
class EprHalf:
    link: EprLink
    tag: str = "epr_half"


Emission = Union[SingleState, Vacuum, MultiPhoton, EprHalf]
Delivery = Union[QuantumState, Pulse, EprLink, None]


def measure_delivery(delivery: Delivery, m: ProjectiveMeasurement,
                     rng: RandomStream, side: str = EprLink.BOB) -> str:
    """Measure whatever arrived in basis m and return the outcome label.

    A pulse is measured on its first photon only (remaining photons are the
    side channel, exploited explicitly by the pulse-aware strategies).
    """
    if isinstance(delivery, EprLink):
        return m.labels[delivery.measure(side, m, rng)]
    if isinstance(delivery, Pulse):
        delivery = delivery.state
    return measure_projective(delivery, m, rng).label


# ---------------------------------------------------------------------------
# transcripts

@dataclass
class QuantumRound:
    sent: str
    delivered: bool
    bob_basis: Optional[str] = None
    bob_outcome: Optional[str] = None
    restart_requested: bool = False
    false_claim: bool = False


@dataclass
class Transcript:
    rounds: list[QuantumRound]
    b: int
    revealed: tuple[int, int]
    verdict: Verdict
    outcome: Optional[int]
    restart_count: int

    def to_dict(self) -> dict:
        return {
            "rounds": [vars(r) for r in self.rounds],
            "b": self.b,
            "revealed": {"a": self.revealed[0], "x": self.revealed[1]},
            "verdict": self.verdict.value,
            "outcome": self.outcome,
            "restart_count": self.restart_count,
        }


# ---------------------------------------------------------------------------
# honest hooks

class HonestAlice:
    """Follows the numbered steps: fresh uniform a, family-weighted x."""

    def __init__(self, family: StateFamily, photon_count: int = 1):
        self.family = family
        self.photon_count = photon_count
        self.a: Optional[int] = None
        self.x: Optional[int] = None

    def prepare(self, rng: RandomStream) -> Emission:
        self.a = rng.bit()
        self.x = self.family.x_values[rng.choice(self.family.x_weights)]
        psi = catalog.state(self.family, catalog.StateLabel(self.a, self.x))
        if self.photon_count == 1:
            return SingleState(psi)
        from .channel import emit_pulse
        return MultiPhoton(emit_pulse(psi, self.photon_count))

    def reveal(self, b: int, rng: RandomStream) -> tuple[int, int]:
        return self.a, self.x


class HonestBob:
    """Measures per the variant flags, sends a fresh random b, verifies
    whenever the declared basis lets him."""

    def __init__(self, family: StateFamily, flags: VariantFlags):
        self.family = family
        self.flags = flags
        self.a_hat: Optional[int] = None
        self.x_hat_label: Optional[str] = None
        self.stored: Delivery = None
        self.last_basis: Optional[str] = None
        self.last_outcome: Optional[str] = None

    def receive(self, delivery: Delivery, rng: RandomStream) -> Action:
        self.last_basis = None
        self.last_outcome = None
        if not self.flags.bob_measures_on_reception:
            self.stored = delivery
            return Action.STORED
        if delivery is None:
            return Action.REQUEST_RESTART
        self.a_hat = rng.bit()
        m = catalog.basis(self.family, self.a_hat)
        self.x_hat_label = measure_delivery(delivery, m, rng)
        self.last_basis = str(self.a_hat)
        self.last_outcome = self.x_hat_label
        return Action.MEASURED

    def choose_b(self, rng: RandomStream) -> int:
        return rng.bit()

    def verify(self, a: int, x: int, rng: RandomStream):
        if self.flags.bob_measures_on_reception:
            if a == self.a_hat and self.x_hat_label != str(x):
                return Verdict.ABORT_CHEATER
            return Verdict.ACCEPTED
        if self.stored is None:
            if self.flags.loss_policy is LossPolicy.BELIEVE_ON_FAITH:
                return Verdict.ACCEPTED
            # no loss handling defined, or restart agreed: replay from step 1
            return Action.REQUEST_RESTART
        m = catalog.basis(self.family, a)
        label = measure_delivery(self.stored, m, rng)
        self.last_basis = str(a)
        self.last_outcome = label
        return Verdict.ABORT_CHEATER if label != str(x) else Verdict.ACCEPTED


@dataclass
class PlayerHooks:
    alice: object
    bob: object


def honest_hooks(protocol: ProtocolId, params: StateFamily,
                 flags: Optional[VariantFlags] = None,
                 photon_count: int = 1) -> PlayerHooks:
    flags = flags or default_flags(protocol)
    return PlayerHooks(HonestAlice(params, photon_count), HonestBob(params, flags))


# ---------------------------------------------------------------------------
# engine

def _outcome_bit(protocol: ProtocolId, a: int, x: int, b: int) -> int:
    if protocol is ProtocolId.LOSS_TOLERANT_CF:
        return x ^ b
    return a ^ b


def _resolve_transmission(emission: Emission, ch: ChannelParams,
                          rng: RandomStream) -> tuple[Delivery, str]:
    if isinstance(emission, Vacuum):
        return None, emission.tag
    if isinstance(emission, SingleState):
        return transmit(emission.state, ch, rng), emission.tag
    if isinstance(emission, MultiPhoton):
        if emission.pulse.photon_count == 0:
            return None, emission.tag
        return (emission.pulse if rng.bernoulli(ch.eta) else None), emission.tag
    if isinstance(emission, EprHalf):
        return (emission.link if rng.bernoulli(ch.eta) else None), emission.tag
    raise TypeError(f"unknown emission {emission!r}")


def run(protocol: ProtocolId, flags: VariantFlags, hooks: PlayerHooks,
        ch: ChannelParams, params: StateFamily, max_restarts: int,
        randomness: RandomStream) -> Transcript:
    """Execute one full protocol run, looping back to step 1 on restarts."""
    check_flags(protocol, flags)
    rounds: list[QuantumRound] = []
    restart_count = 0

    def restart(rnd: QuantumRound, false_claim: bool) -> None:
        nonlocal restart_count
        rnd.restart_requested = True
        rnd.false_claim = false_claim
        rounds.append(rnd)
        restart_count += 1
        if restart_count > max_restarts:
            raise RestartLimitExceeded(
                f"{protocol.value}: more than {max_restarts} restarts")

    while True:
        emission = hooks.alice.prepare(randomness)
        delivery, tag = _resolve_transmission(emission, ch, randomness)
        action = hooks.bob.receive(delivery, randomness)
        rnd = QuantumRound(
            sent=tag,
            delivered=delivery is not None,
            bob_basis=getattr(hooks.bob, "last_basis", None),
            bob_outcome=getattr(hooks.bob, "last_outcome", None),
        )
        if action in (Action.REQUEST_RESTART, Action.CLAIM_LOSS_FALSELY):
            restart(rnd, action is Action.CLAIM_LOSS_FALSELY)
            continue
        b = hooks.bob.choose_b(randomness)
        a, x = hooks.alice.reveal(b, randomness)
        decision = hooks.bob.verify(a, x, randomness)
        rnd.bob_basis = getattr(hooks.bob, "last_basis", None)
        rnd.bob_outcome = getattr(hooks.bob, "last_outcome", None)
        if decision in (Action.REQUEST_RESTART, Action.CLAIM_LOSS_FALSELY):
            restart(rnd, decision is Action.CLAIM_LOSS_FALSELY)
            continue
        rounds.append(rnd)
        verdict = decision
        outcome = (_outcome_bit(protocol, a, x, b)
                   if verdict is Verdict.ACCEPTED else None)
        return Transcript(rounds, b, (a, x), verdict, outcome, restart_count)
