"""GHZ-diagonal polarization noise.

A per-photon Pauli channel maps a GHZ basis state to a mixture of GHZ basis
states: ``X`` on photon ``l`` flips bit ``l`` of the index string, ``Z`` flips
the relative sign and ``Y`` (taken as ``XZ`` up to global phase) does both.
:func:`pauli_to_ghz_mixture` computes that mixture exactly;
:func:`sample_pauli_string` plus :func:`apply_pauli_string` is the
Monte Carlo route used to cross-check it.
"""
from __future__ import annotations

import math
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .elements import apply_pauli_x, apply_pauli_z
from .errors import InvalidInputError, NotGhzBasisError, ShapeError
from .state import (
    Freq,
    GhzPolState,
    Sign,
    Spatial,
    SparseKet,
    all_ghz_states,
    attach_frequency_entanglement,
    attach_spatial_entanglement,
    complement,
    ghz_ket,
)

MIXTURE_TOL = 1e-9
CLASSIFY_TOL = 1e-12
PAULIS = "IXYZ"

SPATIAL = "spatial"
FREQUENCY = "frequency"
PROTOCOLS = (SPATIAL, FREQUENCY)


def _as_ghz(key) -> GhzPolState:
    if isinstance(key, GhzPolState):
        return key
    if isinstance(key, str):
        return GhzPolState.parse(key)
    bits, sign = key
    return GhzPolState(bits, sign)


class GhzMixture:
    """Probability distribution over canonical GHZ basis states.

    Keys may be given as :class:`GhzPolState`, ``"010-"`` labels or
    ``(bits, sign)`` pairs; non-canonical spellings are merged into their
    canonical key.
    """

    __slots__ = ("_weights", "n")

    def __init__(self, weights: Mapping):
        merged: dict[GhzPolState, float] = {}
        for key, p in weights.items():
            g = _as_ghz(key)
            p = float(p)
            if not math.isfinite(p) or p < 0:
                raise InvalidInputError(f"weight of {g.label} must be a nonnegative number, got {p!r}")
            merged[g] = merged.get(g, 0.0) + p
        if not merged:
            raise InvalidInputError("empty mixture")
        sizes = {g.n for g in merged}
        if len(sizes) != 1:
            raise ShapeError(f"mixture mixes photon numbers {sorted(sizes)}")
        total = math.fsum(merged.values())
        if abs(total - 1.0) > MIXTURE_TOL:
            raise InvalidInputError(f"mixture weights sum to {total!r}, expected 1")
        self._weights = MappingProxyType(dict(sorted(merged.items())))
        (self.n,) = sizes

    @classmethod
    def point(cls, g: GhzPolState) -> "GhzMixture":
        return cls({g: 1.0})

    @classmethod
    def uniform(cls, n: int) -> "GhzMixture":
        states = all_ghz_states(n)
        return cls({g: 1.0 / len(states) for g in states})

    @property
    def weights(self) -> Mapping[GhzPolState, float]:
        return self._weights

    def __getitem__(self, g) -> float:
        return self._weights.get(_as_ghz(g), 0.0)

    def __len__(self) -> int:
        return len(self._weights)

    def total(self) -> float:
        return math.fsum(self._weights.values())

    def to_dict(self) -> dict[str, float]:
        return {g.label: p for g, p in self._weights.items()}

    def __repr__(self) -> str:
        body = ", ".join(f"{g.label}: {p:.6g}" for g, p in self._weights.items())
        return f"GhzMixture({{{body}}})"


def sample_ghz(mix: GhzMixture, rng: np.random.Generator) -> GhzPolState:
    """Draw one GHZ basis state with its mixture weight."""
    if len(mix) == 0:
        raise InvalidInputError("cannot sample from an empty mixture")
    keys = list(mix.weights)
    p = np.fromiter(mix.weights.values(), dtype=float, count=len(keys))
    return keys[rng.choice(len(keys), p=p / p.sum())]


class PauliChannel:
    """Independent per-photon Pauli channel, one ``(pI, pX, pY, pZ)`` row per party."""

    __slots__ = ("probs",)

    def __init__(self, probs: Sequence[Sequence[float]]):
        arr = np.array(probs, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 4:
            raise ShapeError(f"expected an (N, 4) table of Pauli probabilities, got shape {arr.shape}")
        if arr.shape[0] < 2:
            raise ShapeError("a channel needs at least 2 parties")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise InvalidInputError("Pauli probabilities must be nonnegative")
        sums = arr.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > MIXTURE_TOL)
        if bad.size:
            raise InvalidInputError(f"party {int(bad[0])} probabilities sum to {sums[bad[0]]!r}")
        arr.setflags(write=False)
        self.probs = arr

    @classmethod
    def uniform(cls, n: int, p_x: float = 0.0, p_y: float = 0.0, p_z: float = 0.0) -> "PauliChannel":
        """Same channel on every photon."""
        return cls([[1.0 - p_x - p_y - p_z, p_x, p_y, p_z]] * n)

    @classmethod
    def depolarizing(cls, n: int, p: float) -> "PauliChannel":
        return cls.uniform(n, p / 3, p / 3, p / 3)

    @property
    def n(self) -> int:
        return self.probs.shape[0]

    def to_list(self) -> list[list[float]]:
        return self.probs.tolist()


def act_on_ghz(g: GhzPolState, paulis: str) -> GhzPolState:
    """GHZ basis state reached from ``g`` by the Pauli string, global phase dropped."""
    if len(paulis) != g.n:
        raise ShapeError(f"Pauli string of length {len(paulis)} on {g.n} photons")
    flips = tuple(int(p in "XY") for p in paulis)
    phase_flips = sum(p in "YZ" for p in paulis)
    bits = tuple(b ^ f for b, f in zip(g.bits, flips))
    sign = Sign(int(g.sign) * (-1) ** phase_flips)
    return GhzPolState(bits, sign)


def pauli_to_ghz_mixture(ch: PauliChannel, g: GhzPolState) -> GhzMixture:
    """Exact output mixture of the channel applied to ``g``.

    Accumulates (flip pattern, phase parity) party by party, so the cost is
    ``O(N 2**N)`` rather than ``O(4**N)``.
    """
    if ch.n != g.n:
        raise ShapeError(f"channel on {ch.n} photons, state has {g.n}")
    dist: dict[tuple, float] = {((), 0): 1.0}
    for p_i, p_x, p_y, p_z in ch.probs:
        nxt: dict[tuple, float] = {}
        for (flips, parity), w in dist.items():
            for flip, dz, p in ((0, 0, p_i), (1, 0, p_x), (1, 1, p_y), (0, 1, p_z)):
                if p == 0.0:
                    continue
                key = (flips + (flip,), parity ^ dz)
                nxt[key] = nxt.get(key, 0.0) + w * p
        dist = nxt
    out: dict[GhzPolState, float] = {}
    for (flips, parity), w in dist.items():
        bits = tuple(b ^ f for b, f in zip(g.bits, flips))
        key = GhzPolState(bits, Sign(int(g.sign) * (-1) ** parity))
        out[key] = out.get(key, 0.0) + w
    total = math.fsum(out.values())
    return GhzMixture({k: w / total for k, w in out.items()})


def pauli_mixture(ch: PauliChannel, mix: GhzMixture) -> GhzMixture:
    """Channel applied to every component of a mixture."""
    out: dict[GhzPolState, float] = {}
    for g, w in mix.weights.items():
        for h, p in pauli_to_ghz_mixture(ch, g).weights.items():
            out[h] = out.get(h, 0.0) + w * p
    return GhzMixture(out)


def sample_pauli_string(ch: PauliChannel, rng: np.random.Generator) -> str:
    u = rng.random(ch.n)
    cdf = np.cumsum(ch.probs, axis=1)
    idx = [min(int(np.searchsorted(row, x, side="right")), 3) for row, x in zip(cdf, u)]
    return "".join(PAULIS[i] for i in idx)


def apply_pauli_string(state: SparseKet, paulis: str) -> SparseKet:
    """Apply a Pauli string photon by photon; ``Y`` acts as ``X`` after ``Z``."""
    if len(paulis) != state.n_photons:
        raise ShapeError(f"Pauli string of length {len(paulis)} on {state.n_photons} photons")
    if not set(paulis) <= set(PAULIS):
        raise ValueError(f"unknown Pauli in {paulis!r}")
    for party, p in enumerate(paulis):
        if p in "YZ":
            state = apply_pauli_z(state, party)
        if p in "XY":
            state = apply_pauli_x(state, party)
    return state


def classify_ghz(state: SparseKet, tol: float = CLASSIFY_TOL) -> GhzPolState:
    """Identify a polarization-only state as a GHZ basis element.

    Diagnostic used by the Monte Carlo cross-check. Raises
    :class:`NotGhzBasisError` unless the support is ``{b, ~b}`` with equal
    weights and a real relative sign.
    """
    kets = list(state.terms)
    if len(kets) != 2:
        raise NotGhzBasisError(f"support has {len(kets)} terms, expected 2")
    k0, k1 = sorted(kets)
    if any(lab.spatial is not Spatial.FIBER or lab.freq is not Freq.ERASED for lab in k0 + k1):
        raise NotGhzBasisError("state carries spatial or frequency labels")
    b0 = tuple(lab.pol for lab in k0)
    b1 = tuple(lab.pol for lab in k1)
    if complement(b0) != b1:
        raise NotGhzBasisError("support is not a complementary pair")
    a0, a1 = state.amplitude(k0), state.amplitude(k1)
    ratio = a1 / a0
    if abs(ratio - 1) <= tol:
        sign = Sign.PLUS
    elif abs(ratio + 1) <= tol:
        sign = Sign.MINUS
    else:
        raise NotGhzBasisError(f"relative amplitude {ratio!r} is not +-1")
    return GhzPolState(b0, sign)


def apply_noise_sample(protocol: str, g: GhzPolState) -> SparseKet:
    """Post-channel pure state: noisy polarization times the intact second DOF."""
    pol = ghz_ket(g)
    if protocol == SPATIAL:
        return attach_spatial_entanglement(pol)
    if protocol == FREQUENCY:
        return attach_frequency_entanglement(pol)
    raise ValueError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")

