"""End-to-end runs of the two one-step correction protocols.

Both protocols end in the same product state

    (|b> + |~b>)/sqrt(2)  x  (|PORT(b)> + s |PORT(~b)>)/sqrt(2)

so the port pattern is ``b`` or ``~b`` with probability 1/2 each, the sign
``s`` of the noise lives only in the discarded spatial factor, and an X on
every party whose port bit is 1 restores ``|Phi+_N>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .elements import (
    ElementKind,
    ElementOp,
    frequency_pipeline,
    run_pipeline,
    spatial_pipeline,
)
from .errors import StageOrderError
from .noise import FREQUENCY, SPATIAL, apply_noise_sample
from .state import (
    Bits,
    BitsLike,
    GhzPolState,
    PhotonLabel,
    Spatial,
    SparseKet,
    as_bits,
    bits_str,
    fidelity_to_ghz_plus,
)

SUCCESS_TOL = 1e-9


@dataclass(frozen=True)
class ProtocolOutcome:
    protocol: str
    input_state: GhzPolState
    pattern: Bits
    probability: float
    corrections: tuple[ElementOp, ...]
    pre_measurement: SparseKet = field(repr=False)
    final_pol_state: SparseKet = field(repr=False)
    fidelity: float

    @property
    def success(self) -> bool:
        return self.fidelity >= 1 - SUCCESS_TOL

    @property
    def pattern_str(self) -> str:
        return bits_str(self.pattern)

    @property
    def correction_parties(self) -> tuple[int, ...]:
        return tuple(op.party for op in self.corrections)


def _port_pattern(ket) -> Bits:
    pattern = []
    for party, label in enumerate(ket):
        if label.spatial is Spatial.PORT0:
            pattern.append(0)
        elif label.spatial is Spatial.PORT1:
            pattern.append(1)
        else:
            raise StageOrderError(f"photon {party} is at {label.spatial.name}, not at a PBS port")
    return tuple(pattern)


def port_distribution(state: SparseKet) -> dict[Bits, float]:
    """Probability of every port pattern with nonzero weight, sorted by pattern."""
    probs: dict[Bits, list] = {}
    for ket, amp in state:
        probs.setdefault(_port_pattern(ket), []).append(abs(amp) ** 2)
    return {p: math.fsum(v) for p, v in sorted(probs.items())}


def postselect(state: SparseKet, pattern: BitsLike) -> SparseKet:
    """Polarization state left after the photons are found at ``pattern``.

    The spatial labels are discarded (set back to ``FIBER``) and the result
    renormalized.
    """
    pattern = as_bits(pattern)
    kept = {}
    for ket, amp in state:
        if _port_pattern(ket) == pattern:
            kept[tuple(PhotonLabel(lab.pol) for lab in ket)] = amp
    if not kept:
        raise ValueError(f"port pattern {bits_str(pattern)} has zero probability")
    return SparseKet(kept, state.n_photons, normalize=True)


def measure_ports(state: SparseKet, rng: np.random.Generator) -> tuple[Bits, SparseKet]:
    """Sample a port pattern with the Born rule and collapse onto it."""
    dist = port_distribution(state)
    u = rng.random()
    acc = 0.0
    chosen = None
    for pattern, p in dist.items():
        acc += p
        chosen = pattern
        if u < acc:
            break
    return chosen, postselect(state, chosen)


def enumerate_ports(state: SparseKet) -> list[tuple[Bits, float, SparseKet]]:
    """Every outcome ``(pattern, probability, collapsed state)``."""
    return [(p, prob, postselect(state, p)) for p, prob in port_distribution(state).items()]


def infer_corrections(pattern: BitsLike) -> list[ElementOp]:
    """X on every party that saw port 1."""
    return [ElementOp(ElementKind.PAULI_X, party) for party, bit in enumerate(as_bits(pattern)) if bit]


def prepare(protocol: str, g: GhzPolState) -> SparseKet:
    """Noisy input pushed through the protocol's optics, right before detection."""
    state = apply_noise_sample(protocol, g)
    ops = spatial_pipeline(g.n) if protocol == SPATIAL else frequency_pipeline(g.n)
    return run_pipeline(state, ops)


def run_protocol(
    protocol: str,
    g: GhzPolState,
    rng: Optional[np.random.Generator] = None,
    *,
    pattern: Optional[BitsLike] = None,
) -> ProtocolOutcome:
    """One trial: optics, port detection, X corrections, fidelity.

    Either ``rng`` (sampled detection) or ``pattern`` (forced branch) must be
    given.
    """
    pre = prepare(protocol, g)
    if pattern is None:
        if rng is None:
            raise ValueError("pass an rng to sample the detection, or a pattern to force one")
        observed, collapsed = measure_ports(pre, rng)
    else:
        observed = as_bits(pattern)
        collapsed = postselect(pre, observed)
    return _finish(protocol, g, pre, observed, collapsed)


def _finish(protocol, g, pre, observed, collapsed) -> ProtocolOutcome:
    corrections = tuple(infer_corrections(observed))
    final = run_pipeline(collapsed, corrections)
    return ProtocolOutcome(
        protocol=protocol,
        input_state=g,
        pattern=observed,
        probability=port_distribution(pre)[observed],
        corrections=corrections,
        pre_measurement=pre,
        final_pol_state=final,
        fidelity=fidelity_to_ghz_plus(final),
    )


def run_spatial_protocol(g: GhzPolState, rng=None, *, pattern=None) -> ProtocolOutcome:
    return run_protocol(SPATIAL, g, rng, pattern=pattern)


def run_frequency_protocol(g: GhzPolState, rng=None, *, pattern=None) -> ProtocolOutcome:
    return run_protocol(FREQUENCY, g, rng, pattern=pattern)


def enumerate_protocol(protocol: str, g: GhzPolState) -> list[ProtocolOutcome]:
    """Run every detection branch with nonzero probability once."""
    pre = prepare(protocol, g)
    return [_finish(protocol, g, pre, p, collapsed) for p, _, collapsed in enumerate_ports(pre)]
