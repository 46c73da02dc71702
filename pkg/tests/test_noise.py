from collections import Counter
from functools import reduce
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onestep_ghz.errors import InvalidInputError, NotGhzBasisError, ShapeError
from onestep_ghz.noise import (
    GhzMixture,
    PauliChannel,
    act_on_ghz,
    apply_noise_sample,
    apply_pauli_string,
    classify_ghz,
    pauli_mixture,
    pauli_to_ghz_mixture,
    sample_ghz,
    sample_pauli_string,
)
from onestep_ghz.state import (
    Freq,
    GhzPolState,
    PhotonLabel,
    Sign,
    Spatial,
    SparseKet,
    all_ghz_states,
    attach_spatial_entanglement,
    complement,
    equal_up_to_phase,
    make_ghz,
)

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
}


def ghz_vector(g: GhzPolState) -> np.ndarray:
    n = g.n
    v = np.zeros(2**n, dtype=complex)
    v[int("".join(map(str, g.bits)), 2)] += 1
    v[int("".join(map(str, complement(g.bits))), 2)] += int(g.sign)
    return v / np.sqrt(2)


def brute_force_mixture(probs, g: GhzPolState) -> dict:
    """Density-matrix route: sum over all 4**n Pauli strings, then project on the GHZ basis."""
    n = g.n
    psi = ghz_vector(g)
    rho = np.zeros((2**n, 2**n), dtype=complex)
    for idx in product(range(4), repeat=n):
        p = np.prod([probs[l][i] for l, i in enumerate(idx)])
        if p == 0:
            continue
        op = reduce(np.kron, [PAULI["IXYZ"[i]] for i in idx])
        phi = op @ psi
        rho += p * np.outer(phi, phi.conj())
    return {h: float(np.real(ghz_vector(h).conj() @ rho @ ghz_vector(h))) for h in all_ghz_states(n)}


def four_sigma_ok(counts: Counter, expected: dict, trials: int) -> bool:
    for key in set(counts) | set(expected):
        p = expected.get(key, 0.0)
        c = counts.get(key, 0)
        if abs(c - trials * p) > 4 * np.sqrt(trials * p * (1 - p)) + 1e-9:
            return False
    return True


CHANNELS = {
    "bitflip-A": [[0.7, 0.3, 0, 0], [1, 0, 0, 0], [1, 0, 0, 0]],
    "depolarizing": PauliChannel.depolarizing(3, 0.3).to_list(),
    "asymmetric": [[0.6, 0.1, 0.1, 0.2], [0.5, 0.3, 0.0, 0.2], [0.85, 0.0, 0.15, 0.0]],
    "dephasing": PauliChannel.uniform(3, p_z=0.4).to_list(),
}


class TestMixture:
    def test_canonical_merge(self):
        mix = GhzMixture({"000+": 0.25, "111+": 0.25, "011-": 0.5})
        assert len(mix) == 2
        assert mix["000+"] == pytest.approx(0.5)
        assert mix[GhzPolState("100", "-")] == pytest.approx(0.5)

    def test_sum_must_be_one(self):
        with pytest.raises(InvalidInputError):
            GhzMixture({"000+": 0.9})
        with pytest.raises(InvalidInputError):
            GhzMixture({"000+": 1.2, "000-": -0.2})
        with pytest.raises(InvalidInputError):
            GhzMixture({})

    def test_mixed_sizes_rejected(self):
        with pytest.raises(ShapeError):
            GhzMixture({"00+": 0.5, "000+": 0.5})

    def test_point_mass_sampling(self):
        rng = np.random.default_rng(0)
        mix = GhzMixture.point(GhzPolState("000"))
        assert {sample_ghz(mix, rng) for _ in range(50)} == {GhzPolState("000")}

    def test_uniform_sampling_frequencies(self):
        # 16 spellings (b, s) at N=3 collapse onto 8 canonical states
        spellings = {"".join(b) + s: 1 / 16 for b in product("01", repeat=3) for s in "+-"}
        mix = GhzMixture(spellings)
        assert len(mix) == 8
        assert mix.to_dict() == GhzMixture.uniform(3).to_dict()
        rng = np.random.default_rng(2024)
        trials = 100_000
        counts = Counter(sample_ghz(mix, rng) for _ in range(trials))
        assert four_sigma_ok(counts, dict(mix.weights), trials)

    def test_sampling_is_seeded(self):
        mix = GhzMixture.uniform(4)
        a = [sample_ghz(mix, np.random.default_rng(5)) for _ in range(3)]
        b = [sample_ghz(mix, np.random.default_rng(5)) for _ in range(3)]
        assert a == b


class TestChannel:
    def test_validation(self):
        with pytest.raises(InvalidInputError):
            PauliChannel([[0.5, 0.5, 0.1, 0], [1, 0, 0, 0]])
        with pytest.raises(InvalidInputError):
            PauliChannel([[1.1, -0.1, 0, 0], [1, 0, 0, 0]])
        with pytest.raises(ShapeError):
            PauliChannel([[1, 0, 0]])

    def test_identity_channel(self):
        mix = pauli_to_ghz_mixture(PauliChannel.uniform(3), GhzPolState("000"))
        assert mix.to_dict() == {"000+": 1.0}

    def test_single_bit_flip_n2(self):
        q = 0.3
        mix = pauli_to_ghz_mixture(PauliChannel([[1 - q, q, 0, 0], [1, 0, 0, 0]]), GhzPolState("00"))
        assert mix.to_dict() == pytest.approx({"00+": 1 - q, "01+": q})
        ref = brute_force_mixture([[1 - q, q, 0, 0], [1, 0, 0, 0]], GhzPolState("00"))
        assert ref[GhzPolState("01")] == pytest.approx(q, abs=1e-12)
        assert ref[GhzPolState("00")] == pytest.approx(1 - q, abs=1e-12)

    @pytest.mark.parametrize("name", sorted(CHANNELS))
    @pytest.mark.parametrize("label", ["000+", "010-", "011+"])
    def test_matches_density_matrix(self, name, label):
        probs = CHANNELS[name]
        g = GhzPolState.parse(label)
        mix = pauli_to_ghz_mixture(PauliChannel(probs), g)
        ref = brute_force_mixture(probs, g)
        for h in all_ghz_states(3):
            assert mix[h] == pytest.approx(ref[h], abs=1e-12)
        assert abs(mix.total() - 1) <= 1e-12

    def test_mixture_of_mixture(self):
        ch = PauliChannel(CHANNELS["asymmetric"])
        mix = pauli_mixture(ch, GhzMixture.uniform(3))
        for p in mix.weights.values():
            assert p == pytest.approx(1 / 8)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4).flatmap(lambda n: st.tuples(
    st.lists(st.integers(0, 1), min_size=n, max_size=n),
    st.sampled_from([Sign.PLUS, Sign.MINUS]),
    st.text(alphabet="IXYZ", min_size=n, max_size=n),
)))
def test_pauli_closure(args):
    bits, sign, paulis = args
    g = GhzPolState(tuple(bits), sign)
    out = apply_pauli_string(make_ghz(g.n, g.bits, g.sign), paulis)
    h = classify_ghz(out)
    assert h == act_on_ghz(g, paulis)
    assert equal_up_to_phase(out, make_ghz(h.n, h.bits, h.sign))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_pauli_closure_exhaustive(n):
    for g in all_ghz_states(n):
        psi = make_ghz(n, g.bits, g.sign)
        for paulis in product("IXYZ", repeat=n):
            classify_ghz(apply_pauli_string(psi, "".join(paulis)))


def test_classify_rejects_non_ghz():
    r = 1 / np.sqrt(2)
    with pytest.raises(NotGhzBasisError):
        classify_ghz(SparseKet({(PhotonLabel(0), PhotonLabel(0)): r, (PhotonLabel(0), PhotonLabel(1)): r}))
    with pytest.raises(NotGhzBasisError):
        classify_ghz(SparseKet({(PhotonLabel(0), PhotonLabel(0)): r, (PhotonLabel(1), PhotonLabel(1)): 1j * r}))
    with pytest.raises(NotGhzBasisError):
        classify_ghz(attach_spatial_entanglement(make_ghz(2, "00")))


def monte_carlo_histogram(ch: PauliChannel, g: GhzPolState, trials: int, seed: int) -> Counter:
    rng = np.random.default_rng(seed)
    strings = Counter(sample_pauli_string(ch, rng) for _ in range(trials))
    psi = make_ghz(g.n, g.bits, g.sign)
    hist = Counter()
    # each distinct string is applied once and weighted by its count
    for paulis, count in strings.items():
        hist[classify_ghz(apply_pauli_string(psi, paulis))] += count
    return hist


@pytest.mark.parametrize("name", ["bitflip-A", "depolarizing", "asymmetric"])
def test_monte_carlo_matches_analytic(name):
    ch = PauliChannel(CHANNELS[name])
    g = GhzPolState("010", "+")
    trials = 100_000
    hist = monte_carlo_histogram(ch, g, trials, seed=11)
    assert sum(hist.values()) == trials
    assert four_sigma_ok(hist, dict(pauli_to_ghz_mixture(ch, g).weights), trials)


def test_sample_pauli_string_marginals():
    ch = PauliChannel([[0.1, 0.2, 0.3, 0.4], [0, 0, 0, 1]])
    rng = np.random.default_rng(3)
    strings = [sample_pauli_string(ch, rng) for _ in range(20_000)]
    assert {s[1] for s in strings} == {"Z"}
    counts = Counter(s[0] for s in strings)
    assert four_sigma_ok(counts, {"I": 0.1, "X": 0.2, "Y": 0.3, "Z": 0.4}, 20_000)


class TestApplyNoiseSample:
    def test_spatial_noiseless(self):
        s = apply_noise_sample("spatial", GhzPolState("000"))
        assert s == attach_spatial_entanglement(make_ghz(3, "000"))
        assert all(s.amplitude(k) == pytest.approx(0.5) for k in s.terms)

    def test_frequency_phase_flip(self):
        s = apply_noise_sample("frequency", GhzPolState("100", "-"))
        terms = {}
        for w in (Freq.OMEGA1, Freq.OMEGA2):
            for bits, a in (("100", 0.5), ("011", -0.5)):
                terms[tuple(PhotonLabel(int(b), Spatial.FIBER, w) for b in bits)] = a
        assert equal_up_to_phase(s, SparseKet(terms))
        assert abs(s.norm_squared() - 1) <= 1e-12

    def test_unknown_protocol(self):
        with pytest.raises(ValueError):
            apply_noise_sample("temporal", GhzPolState("00"))
