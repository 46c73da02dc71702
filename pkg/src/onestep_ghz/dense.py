"""Dense state-vector oracle for the sparse engine.

Each photon lives in a 30-dimensional space ``pol(2) x spatial(5) x freq(3)``
and every optical element is an explicit local matrix built from Kronecker
products of projectors, applied with ``tensordot``. Nothing here calls the
sparse label-rewrite code, so agreement between the two is a real check.
Practical up to N = 4 (30**4 amplitudes).
"""
from __future__ import annotations

from functools import reduce
from itertools import product

import numpy as np

from .state import Freq, Spatial, SparseKet

D_POL, D_SP, D_FR = 2, 5, 3
D = D_POL * D_SP * D_FR
MAX_PARTIES = 4

FIBER, M1, M2, P0, P1 = 0, 1, 2, 3, 4
W1, W2, ERASED = 0, 1, 2


def _ket(dim: int, i: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[i] = 1.0
    return v


def _op(dim: int, out: int, inp: int) -> np.ndarray:
    """``|out><inp|``."""
    return np.outer(_ket(dim, out), _ket(dim, inp))


def local_index(pol: int, spatial: int, freq: int) -> int:
    return (pol * D_SP + spatial) * D_FR + freq


def local_vector(pol: int, spatial: int, freq: int) -> np.ndarray:
    return reduce(np.kron, [_ket(D_POL, pol), _ket(D_SP, spatial), _ket(D_FR, freq)])


I2, I5, I3 = np.eye(2), np.eye(5), np.eye(3)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


def _k(*ms) -> np.ndarray:
    return reduce(np.kron, ms)


HWP = _k(SX, _op(D_SP, M2, M2), I3) + _k(I2, I5 - _op(D_SP, M2, M2), I3)
PBS = sum(
    _k(_op(D_POL, p, p), _op(D_SP, P1 - p, M1) + _op(D_SP, P0 + p, M2), I3) for p in (0, 1)
)
WDM = _k(I2, _op(D_SP, M1, FIBER), _op(D_FR, W1, W1)) + _k(I2, _op(D_SP, M2, FIBER), _op(D_FR, W2, W2))
FS = _k(I2, _op(D_SP, M1, M1), _op(D_FR, ERASED, W1)) + _k(I2, _op(D_SP, M2, M2), _op(D_FR, ERASED, W2))
PAULI_X = _k(SX, I5, I3)
PAULI_Z = _k(SZ, I5, I3)


def apply_local(psi: np.ndarray, op: np.ndarray, party: int, n: int) -> np.ndarray:
    t = psi.reshape([D] * n)
    t = np.tensordot(op, t, axes=([1], [party]))
    return np.moveaxis(t, 0, party).reshape(-1)


def apply_layer(psi: np.ndarray, op: np.ndarray, n: int) -> np.ndarray:
    for party in range(n):
        psi = apply_local(psi, op, party, n)
    return psi


def initial_state(protocol: str, bits, sign: int) -> np.ndarray:
    """Expanded noisy input ``(|b> + s|~b>)/sqrt2 x (second-DOF Bell-like factor)``."""
    n = len(bits)
    if not 2 <= n <= MAX_PARTIES:
        raise ValueError(f"dense oracle supports 2..{MAX_PARTIES} parties, got {n}")
    flipped = [1 - b for b in bits]
    if protocol == "spatial":
        branches = [(M1, ERASED), (M2, ERASED)]
    elif protocol == "frequency":
        branches = [(FIBER, W1), (FIBER, W2)]
    else:
        raise ValueError(protocol)
    psi = np.zeros(D**n, dtype=complex)
    for pol, coef in ((bits, 1.0), (flipped, float(sign))):
        for sp, fr in branches:
            psi += 0.5 * coef * reduce(np.kron, [local_vector(p, sp, fr) for p in pol])
    return psi


def pre_measurement(protocol: str, bits, sign: int) -> np.ndarray:
    n = len(bits)
    psi = initial_state(protocol, bits, sign)
    if protocol == "frequency":
        psi = apply_layer(psi, WDM, n)
        psi = apply_layer(psi, FS, n)
    psi = apply_layer(psi, HWP, n)
    return apply_layer(psi, PBS, n)


def port_probabilities(psi: np.ndarray, n: int) -> dict[tuple, float]:
    """Probability of every port pattern (photons outside the ports count as 'other')."""
    t = np.abs(psi.reshape([D_POL, D_SP, D_FR] * n)) ** 2
    # sum over polarization and frequency axes
    sp = t.sum(axis=tuple(3 * l for l in range(n)) + tuple(3 * l + 2 for l in range(n)))
    out = {}
    for pattern in product((0, 1), repeat=n):
        out[pattern] = float(sp[tuple(P0 + b for b in pattern)])
    return out


def collapse(psi: np.ndarray, pattern, n: int) -> np.ndarray:
    """Renormalized 2**n polarization vector after detecting ``pattern``."""
    t = psi.reshape([D_POL, D_SP, D_FR] * n)
    idx = []
    for b in pattern:
        idx += [slice(None), P0 + b, ERASED]
    pol = t[tuple(idx)].reshape(-1)
    return pol / np.linalg.norm(pol)


def correct(pol: np.ndarray, pattern) -> np.ndarray:
    ops = [SX if b else I2 for b in pattern]
    return reduce(np.kron, ops) @ pol


def ghz_plus(n: int) -> np.ndarray:
    v = np.zeros(2**n, dtype=complex)
    v[0] = v[-1] = 1 / np.sqrt(2)
    return v


def fidelity(pol: np.ndarray) -> float:
    n = int(np.log2(pol.size))
    return float(abs(np.vdot(ghz_plus(n), pol)) ** 2)


def to_dense(state: SparseKet) -> np.ndarray:
    """Embed a sparse state in the full label space."""
    n = state.n_photons
    psi = np.zeros(D**n, dtype=complex)
    for ket, amp in state:
        i = 0
        for lab in ket:
            i = i * D + local_index(lab.pol, int(Spatial(lab.spatial)), int(Freq(lab.freq)))
        psi[i] += amp
    return psi


def pol_to_dense(state: SparseKet) -> np.ndarray:
    """2**n vector of a polarization-only sparse state."""
    n = state.n_photons
    v = np.zeros(2**n, dtype=complex)
    for ket, amp in state:
        i = 0
        for lab in ket:
            i = 2 * i + lab.pol
        v[i] += amp
    return v


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-12) -> bool:
    overlap = np.vdot(a, b)
    if abs(overlap) < 0.5:
        return False
    phase = overlap / abs(overlap)
    return bool(np.max(np.abs(a * phase - b)) <= tol)
