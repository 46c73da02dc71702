"""Optical elements as per-photon label rewrites on :class:`SparseKet`.

Geometry (only the evolution equations fix it):

* HWP sits in the mode-2 arm and flips H <-> V there; mode-1 passes.
* PBS merges the two arms: ``(MODE1, p) -> PORT(1-p)``, ``(MODE2, p) -> PORT(p)``.
* WDM routes by frequency: ``(FIBER, w1) -> MODE1``, ``(FIBER, w2) -> MODE2``.
* FS shifts the mode-1 arm from w1 to w2. Both arms then carry the same
  frequency, which is recorded as ``ERASED``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import MissingDOFError, ShapeError, StageOrderError
from .state import Freq, PhotonLabel, Spatial, SparseKet


class ElementKind(Enum):
    HWP = "HWP"
    PBS = "PBS"
    WDM = "WDM"
    FS = "FS"
    PAULI_X = "X"
    PAULI_Z = "Z"


def _check_party(state: SparseKet, party: int) -> None:
    if not 0 <= party < state.n_photons:
        raise ShapeError(f"party {party} out of range for {state.n_photons} photons")


def _rewrite(state: SparseKet, party: int, rule) -> SparseKet:
    """Apply ``rule(label) -> (label, phase)`` to one photon of every term."""
    _check_party(state, party)

    def fn(ket):
        label, phase = rule(ket[party])
        yield ket[:party] + (label,) + ket[party + 1:], phase

    return state.map_terms(fn)


def _hwp(label: PhotonLabel):
    if label.spatial not in (Spatial.MODE1, Spatial.MODE2):
        raise StageOrderError(f"HWP needs a photon in MODE1/MODE2, got {label.spatial.name}")
    if label.spatial is Spatial.MODE2:
        return label._replace(pol=1 - label.pol), 1
    return label, 1


def _pbs(label: PhotonLabel):
    if label.spatial is Spatial.MODE1:
        port = Spatial.PORT1 if label.pol == 0 else Spatial.PORT0
    elif label.spatial is Spatial.MODE2:
        port = Spatial.PORT0 if label.pol == 0 else Spatial.PORT1
    else:
        raise StageOrderError(f"PBS needs a photon in MODE1/MODE2, got {label.spatial.name}")
    return label._replace(spatial=port), 1


def _wdm(label: PhotonLabel):
    if label.spatial is not Spatial.FIBER:
        raise StageOrderError(f"WDM needs a photon in the fiber, got {label.spatial.name}")
    if label.freq is Freq.OMEGA1:
        return label._replace(spatial=Spatial.MODE1), 1
    if label.freq is Freq.OMEGA2:
        return label._replace(spatial=Spatial.MODE2), 1
    raise MissingDOFError("WDM needs a frequency label, photon carries none")


def _fs(label: PhotonLabel):
    if label.spatial not in (Spatial.MODE1, Spatial.MODE2):
        raise StageOrderError(f"FS needs a photon in MODE1/MODE2, got {label.spatial.name}")
    return label._replace(freq=Freq.ERASED), 1


def _x(label: PhotonLabel):
    return label._replace(pol=1 - label.pol), 1


def _z(label: PhotonLabel):
    return label, -1 if label.pol else 1


def apply_hwp(state: SparseKet, party: int) -> SparseKet:
    return _rewrite(state, party, _hwp)


def apply_pbs(state: SparseKet, party: int) -> SparseKet:
    return _rewrite(state, party, _pbs)


def apply_wdm(state: SparseKet, party: int) -> SparseKet:
    return _rewrite(state, party, _wdm)


def apply_fs(state: SparseKet, party: int) -> SparseKet:
    return _rewrite(state, party, _fs)


def apply_pauli_x(state: SparseKet, party: int) -> SparseKet:
    """Bit flip ``|V><H| + |H><V|`` on one photon's polarization."""
    return _rewrite(state, party, _x)


def apply_pauli_z(state: SparseKet, party: int) -> SparseKet:
    """Phase flip: multiply each term by ``(-1)**pol`` of the photon."""
    return _rewrite(state, party, _z)


_RULES = {
    ElementKind.HWP: _hwp,
    ElementKind.PBS: _pbs,
    ElementKind.WDM: _wdm,
    ElementKind.FS: _fs,
    ElementKind.PAULI_X: _x,
    ElementKind.PAULI_Z: _z,
}


@dataclass(frozen=True)
class ElementOp:
    kind: ElementKind
    party: int

    def __call__(self, state: SparseKet) -> SparseKet:
        return _rewrite(state, self.party, _RULES[self.kind])

    def __str__(self) -> str:
        return f"{self.kind.value}[{self.party}]"


def layer(kind: ElementKind, n: int) -> list[ElementOp]:
    """One element of ``kind`` per party."""
    return [ElementOp(kind, party) for party in range(n)]


def spatial_pipeline(n: int) -> list[ElementOp]:
    return layer(ElementKind.HWP, n) + layer(ElementKind.PBS, n)


def frequency_pipeline(n: int) -> list[ElementOp]:
    return layer(ElementKind.WDM, n) + layer(ElementKind.FS, n) + spatial_pipeline(n)


def run_pipeline(state: SparseKet, ops: Iterable[ElementOp]) -> SparseKet:
    for op in ops:
        state = op(state)
    return state
