"""Sparse N-photon states over polarization, spatial-mode and frequency labels.

Every photon carries one :class:`PhotonLabel`; an N-photon basis ket is a
tuple of N labels (position ``l`` is party ``l``: 0 is Alice, 1 is Bob, ...).
A :class:`SparseKet` maps basis kets to complex amplitudes and is immutable:
all operations return new states.

Polarization-only states use ``spatial=FIBER`` and ``freq=ERASED`` for every
photon.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from types import MappingProxyType
from typing import Mapping, NamedTuple, Sequence, Union

from .errors import (
    FactorizationError,
    InvalidArityError,
    ShapeError,
    StageOrderError,
)

NORM_TOL = 1e-12
PRUNE_TOL = 1e-15
PHASE_TOL = 1e-12

H, V = 0, 1


class Spatial(IntEnum):
    FIBER = 0
    MODE1 = 1
    MODE2 = 2
    PORT0 = 3
    PORT1 = 4


class Freq(IntEnum):
    OMEGA1 = 0
    OMEGA2 = 1
    ERASED = 2


PORTS = (Spatial.PORT0, Spatial.PORT1)
MODES = (Spatial.MODE1, Spatial.MODE2)


class PhotonLabel(NamedTuple):
    pol: int
    spatial: Spatial = Spatial.FIBER
    freq: Freq = Freq.ERASED

    def __str__(self) -> str:
        spatial = {
            Spatial.FIBER: "f",
            Spatial.MODE1: "m1",
            Spatial.MODE2: "m2",
            Spatial.PORT0: "p0",
            Spatial.PORT1: "p1",
        }[self.spatial]
        freq = {Freq.OMEGA1: "w1", Freq.OMEGA2: "w2", Freq.ERASED: "-"}[self.freq]
        return f"{'HV'[self.pol]}:{spatial}:{freq}"


BasisKet = tuple  # tuple[PhotonLabel, ...]
Bits = tuple  # tuple[int, ...]
BitsLike = Union[str, Sequence[int]]


def as_bits(bits: BitsLike) -> Bits:
    """Normalize ``"0110"`` or ``[0, 1, 1, 0]`` to a tuple of ints."""
    if isinstance(bits, str):
        if not set(bits) <= {"0", "1"}:
            raise ShapeError(f"bitstring must contain only 0/1, got {bits!r}")
        return tuple(int(c) for c in bits)
    out = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in out):
        raise ShapeError(f"bitstring must contain only 0/1, got {bits!r}")
    return out


def complement(bits: Bits) -> Bits:
    return tuple(1 - b for b in bits)


def bits_str(bits: Bits) -> str:
    return "".join(str(b) for b in bits)


class Sign(IntEnum):
    PLUS = 1
    MINUS = -1

    @classmethod
    def coerce(cls, value) -> "Sign":
        if isinstance(value, Sign):
            return value
        if value in ("+", "plus", "Plus", 1):
            return cls.PLUS
        if value in ("-", "minus", "Minus", -1):
            return cls.MINUS
        raise ValueError(f"not a sign: {value!r}")

    @property
    def symbol(self) -> str:
        return "+" if self is Sign.PLUS else "-"


@dataclass(frozen=True, order=True)
class GhzPolState:
    """GHZ basis element ``(|bits> + sign |~bits>)/sqrt(2)``.

    The bitstring is stored in canonical form with ``bits[0] == 0``. Passing
    the complemented string yields the same key; for ``MINUS`` the two
    spellings differ by a global phase of -1, which is not recorded.
    """

    bits: Bits
    sign: Sign = Sign.PLUS

    def __post_init__(self):
        bits = as_bits(self.bits)
        if len(bits) < 2:
            raise InvalidArityError(f"GHZ states need at least 2 photons, got {len(bits)}")
        if bits[0] == 1:
            bits = complement(bits)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "sign", Sign.coerce(self.sign))

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def label(self) -> str:
        return bits_str(self.bits) + self.sign.symbol

    @classmethod
    def parse(cls, text: str) -> "GhzPolState":
        """Inverse of :attr:`label`, e.g. ``"0110-"``."""
        text = text.strip()
        if not text or text[-1] not in "+-":
            raise ValueError(f"GHZ label must end in '+' or '-', got {text!r}")
        return cls(as_bits(text[:-1]), Sign.coerce(text[-1]))

    def __str__(self) -> str:
        return self.label


def all_ghz_states(n: int) -> list[GhzPolState]:
    """All 2**n canonical GHZ basis elements, by bitstring, plus before minus."""
    if n < 2:
        raise InvalidArityError(f"need n >= 2, got {n}")
    out = []
    for k in range(2 ** (n - 1)):
        bits = tuple(int(c) for c in format(k, f"0{n}b"))
        for sign in (Sign.PLUS, Sign.MINUS):
            out.append(GhzPolState(bits, sign))
    return out


class SparseKet:
    """Normalized pure state stored as ``{basis ket: amplitude}``.

    Terms with ``|amplitude| < 1e-15`` are dropped and the norm is checked to
    1e-12 at construction. Pass ``normalize=True`` to rescale instead (used by
    post-selection).
    """

    __slots__ = ("_terms", "n_photons")

    def __init__(self, terms: Mapping, n_photons: int | None = None, *, normalize: bool = False):
        clean: dict = {}
        for ket, amp in terms.items():
            amp = complex(amp)
            if abs(amp) < PRUNE_TOL:
                continue
            clean[tuple(ket)] = amp
        if not clean:
            raise ShapeError("a state needs at least one nonzero term")
        lengths = {len(k) for k in clean}
        if len(lengths) != 1:
            raise ShapeError(f"basis kets of mixed length {sorted(lengths)}")
        (length,) = lengths
        if n_photons is not None and n_photons != length:
            raise ShapeError(f"expected {n_photons} photons, terms have {length}")
        norm2 = math.fsum(abs(a) ** 2 for a in clean.values())
        if normalize:
            scale = 1.0 / math.sqrt(norm2)
            clean = {k: a * scale for k, a in clean.items()}
        elif abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: norm^2 = {norm2!r}")
        self._terms = MappingProxyType(clean)
        self.n_photons = length

    @property
    def terms(self) -> Mapping:
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def amplitude(self, ket) -> complex:
        return self._terms.get(tuple(ket), 0j)

    def norm_squared(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self._terms.values())

    def __eq__(self, other):
        if not isinstance(other, SparseKet):
            return NotImplemented
        return dict(self._terms) == dict(other._terms)

    __hash__ = None

    def __repr__(self) -> str:
        parts = []
        for ket in sorted(self._terms):
            amp = self._terms[ket]
            parts.append(f"({amp.real:+.4g}{amp.imag:+.4g}j)|{' '.join(map(str, ket))}>")
        return f"SparseKet[{self.n_photons}](" + " ".join(parts) + ")"

    def map_terms(self, fn) -> "SparseKet":
        """Rewrite each term with ``fn(ket) -> iterable of (ket, factor)``.

        Images are accumulated, so non-injective maps interfere correctly.
        """
        out: dict = {}
        for ket, amp in self._terms.items():
            for new_ket, factor in fn(ket):
                out[new_ket] = out.get(new_ket, 0j) + amp * factor
        return SparseKet(out, self.n_photons)


def make_ghz(n: int, bits: BitsLike, sign=Sign.PLUS) -> SparseKet:
    """Polarization-only GHZ state ``(|bits> + sign |~bits>)/sqrt(2)``.

    The bitstring is canonicalized first, so ``make_ghz(n, b, s)`` and
    ``make_ghz(n, ~b, s)`` give the same object.
    """
    if n < 2:
        raise InvalidArityError(f"GHZ states need at least 2 photons, got {n}")
    bits = as_bits(bits)
    if len(bits) != n:
        raise ShapeError(f"bitstring has length {len(bits)}, expected {n}")
    return ghz_ket(GhzPolState(bits, sign))


def ghz_ket(g: GhzPolState) -> SparseKet:
    amp = 1 / math.sqrt(2)
    lo = tuple(PhotonLabel(b) for b in g.bits)
    hi = tuple(PhotonLabel(b) for b in complement(g.bits))
    return SparseKet({lo: amp, hi: int(g.sign) * amp}, g.n)


def _require_fiber(state: SparseKet, what: str) -> None:
    for ket, _ in state:
        for party, label in enumerate(ket):
            if label.spatial is not Spatial.FIBER:
                raise StageOrderError(f"{what}: photon {party} already routed to {label.spatial.name}")
            if label.freq is not Freq.ERASED:
                raise StageOrderError(f"{what}: photon {party} already carries frequency {label.freq.name}")


def _attach(state: SparseKet, branches) -> SparseKet:
    amp = 1 / math.sqrt(2)

    def fn(ket):
        for spatial, freq in branches:
            yield tuple(lab._replace(spatial=spatial, freq=freq) for lab in ket), amp

    return state.map_terms(fn)


def attach_spatial_entanglement(state: SparseKet) -> SparseKet:
    """Tensor in ``(|m1 m1 ... m1> + |m2 m2 ... m2>)/sqrt(2)`` on the spatial labels."""
    _require_fiber(state, "attach_spatial_entanglement")
    return _attach(state, [(Spatial.MODE1, Freq.ERASED), (Spatial.MODE2, Freq.ERASED)])


def attach_frequency_entanglement(state: SparseKet) -> SparseKet:
    """Tensor in ``(|w1 w1 ... w1> + |w2 w2 ... w2>)/sqrt(2)`` on the frequency labels."""
    _require_fiber(state, "attach_frequency_entanglement")
    return _attach(state, [(Spatial.FIBER, Freq.OMEGA1), (Spatial.FIBER, Freq.OMEGA2)])


def inner_product(x: SparseKet, y: SparseKet) -> complex:
    """``<x|y>``."""
    if x.n_photons != y.n_photons:
        raise ShapeError(f"arity mismatch: {x.n_photons} vs {y.n_photons}")
    if len(x) > len(y):
        return inner_product(y, x).conjugate()
    return sum((a.conjugate() * y.amplitude(k) for k, a in x), 0j)


def equal_up_to_phase(x: SparseKet, y: SparseKet, tol: float = PHASE_TOL) -> bool:
    """Amplitude-wise equality after removing the best global phase."""
    if x.n_photons != y.n_photons:
        return False
    overlap = inner_product(x, y)
    if abs(overlap) < 0.5:
        return False
    phase = overlap / abs(overlap)
    keys = set(x.terms) | set(y.terms)
    return all(abs(x.amplitude(k) * phase - y.amplitude(k)) <= tol for k in keys)


def polarization_factor(state: SparseKet) -> SparseKet:
    """Strip spatial and frequency labels when they are identical in every term.

    Raises :class:`FactorizationError` if the residual labels vary between
    terms (the caller has to measure them first).
    """
    rest = {tuple((lab.spatial, lab.freq) for lab in ket) for ket in state.terms}
    if len(rest) != 1:
        raise FactorizationError(
            f"state has {len(rest)} distinct spatial/frequency patterns; measure first"
        )
    return SparseKet({tuple(PhotonLabel(lab.pol) for lab in ket): a for ket, a in state}, state.n_photons)


def fidelity_to_ghz_plus(state: SparseKet) -> float:
    """``|<Phi+_N|state>|^2`` for a state whose non-polarization labels factor out."""
    pol = polarization_factor(state)
    n = pol.n_photons
    amp = (pol.amplitude((PhotonLabel(H),) * n) + pol.amplitude((PhotonLabel(V),) * n)) / math.sqrt(2)
    return min(1.0, abs(amp) ** 2)
