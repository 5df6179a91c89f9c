"""The 16 local channels: definitions, PTMs, and sampling programs.

Two independent oracles run here. The first recomputes every channel PTM
from the defining conjugation formulas with explicit trace loops. The second
takes each realization program, averages it analytically over all coin and
measurement branches, and checks that the expected map equals the channel.
"""

import numpy as np
import pytest

from quasicut.algebra import PAULIS, SIGMA_0, QuantumState
from quasicut.local_basis import (
    ALL_CHANNELS,
    BasisChannelId,
    ChannelKind,
    Coin,
    SignedMeasurement,
    Unitary,
    a_channel,
    b_channel,
    basis_ptm,
    channel_action,
    check_basis_completeness,
    pauli_channel,
    projector,
    realization_program,
    realize,
)


class FixedDraws:
    """rng stub feeding a fixed uniform sequence."""

    def __init__(self, draws):
        self._draws = list(draws)

    def random(self):
        return self._draws.pop(0)


def defining_action(channel, m):
    """The channel formulas written out directly."""
    if channel.kind is ChannelKind.PAULI:
        p = PAULIS[channel.alpha]
        return p @ m @ p
    a, b = PAULIS[channel.alpha], PAULIS[channel.alpha_prime]
    if channel.kind is ChannelKind.A:
        return 0.5 * (a @ m @ b + b @ m @ a)
    return (a @ m @ b - b @ m @ a) / 2j


def ptm_by_traces(apply):
    out = np.zeros((4, 4))
    for j in range(4):
        for k in range(4):
            val = np.trace(PAULIS[j] @ apply(PAULIS[k])) / 2.0
            assert abs(val.imag) < 1e-12
            out[j, k] = val.real
    return out


def expected_program_map(program):
    """Average a program over all its branches, as a map on 2x2 matrices.

    A signed measurement contributes c+ P m P + c- P' m P' in expectation
    (the branch probability cancels against the renormalization), a coin
    contributes the probability-weighted signed sum of its branch unitaries.
    """

    def run(m):
        out = m.astype(complex)
        for step in program:
            if isinstance(step, Unitary):
                out = step.matrix @ out @ step.matrix.conj().T
            elif isinstance(step, Coin):
                acc = np.zeros_like(out)
                for branch in step.branches:
                    piece = out
                    for sub in branch.steps:
                        piece = sub.matrix @ piece @ sub.matrix.conj().T
                    acc = acc + branch.probability * branch.sign * piece
                out = acc
            else:
                p_plus = projector(step.axis)
                p_minus = np.eye(2, dtype=complex) - p_plus
                out = (
                    complex(step.c_plus) * (p_plus @ out @ p_plus)
                    + complex(step.c_minus) * (p_minus @ out @ p_minus)
                )
        return out

    return run


# --- identifiers ----------------------------------------------------------


def test_channel_count_and_order():
    assert len(ALL_CHANNELS) == 16
    labels = [c.label() for c in ALL_CHANNELS]
    assert labels[:4] == ["s0", "s1", "s2", "s3"]
    assert len(set(labels)) == 16


def test_label_roundtrip():
    for channel in ALL_CHANNELS:
        assert BasisChannelId.from_label(channel.label()) == channel


def test_from_label_rejects_garbage():
    for bad in ["", "s4", "A00", "A10", "B33", "C01", "A0", "s01"]:
        with pytest.raises(ValueError):
            BasisChannelId.from_label(bad)


def test_id_validation():
    with pytest.raises(ValueError):
        pauli_channel(5)
    with pytest.raises(ValueError):
        a_channel(2, 2)  # indices must differ
    with pytest.raises(ValueError):
        b_channel(3, 1)  # stored with alpha < alpha_prime
    with pytest.raises(ValueError):
        BasisChannelId(ChannelKind.PAULI, 1, 2)  # no second index on a Pauli


# --- exact channel maps ---------------------------------------------------


def test_channel_action_matches_definitions():
    rng = np.random.default_rng(21)
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    for channel in ALL_CHANNELS:
        np.testing.assert_allclose(
            channel_action(channel, m), defining_action(channel, m), atol=1e-13
        )


def test_basis_ptm_against_trace_oracle():
    for channel in ALL_CHANNELS:
        oracle = ptm_by_traces(lambda m, c=channel: defining_action(c, m))
        np.testing.assert_allclose(basis_ptm(channel), oracle, atol=1e-13)


def test_frozen_ptms():
    np.testing.assert_allclose(basis_ptm(pauli_channel(0)), np.eye(4), atol=1e-15)
    np.testing.assert_allclose(
        basis_ptm(pauli_channel(3)), np.diag([1.0, -1.0, -1.0, 1.0]), atol=1e-15
    )
    # A(0,3) exchanges the identity and Z components and kills X, Y
    expected = np.zeros((4, 4))
    expected[0, 3] = expected[3, 0] = 1.0
    np.testing.assert_allclose(basis_ptm(a_channel(0, 3)), expected, atol=1e-15)


def test_b_channel_trace_rows():
    # Tr B_ab(rho) = Tr([s_b, s_a] rho)/2i: zero when a = 0, else -eps <s_c>
    levi = {(1, 2): (1, 3), (1, 3): (-1, 2), (2, 3): (1, 1)}
    for channel in ALL_CHANNELS:
        if channel.kind is not ChannelKind.B:
            continue
        row = basis_ptm(channel)[0]
        expected = np.zeros(4)
        if channel.alpha > 0:
            eps, c = levi[(channel.alpha, channel.alpha_prime)]
            expected[c] = -eps
        np.testing.assert_allclose(row, expected, atol=1e-14, err_msg=channel.label())


def test_completeness_rank():
    assert check_basis_completeness()
    stack = np.stack([basis_ptm(c).ravel() for c in ALL_CHANNELS])
    assert np.linalg.matrix_rank(stack, tol=1e-10) == 16
    # dropping any one channel loses a dimension: no redundancy
    for skip in range(16):
        sub = np.delete(stack, skip, axis=0)
        assert np.linalg.matrix_rank(sub, tol=1e-10) == 15


# --- realization programs -------------------------------------------------


def test_every_program_reproduces_its_channel_in_expectation():
    for channel in ALL_CHANNELS:
        run = expected_program_map(realization_program(channel))
        oracle = ptm_by_traces(run)
        np.testing.assert_allclose(
            oracle, basis_ptm(channel), atol=1e-12, err_msg=channel.label()
        )


def test_program_shapes():
    # Paulis are a single unitary; A(0,b) one signed measurement;
    # A(a,b) one coin; B(0,b) one coin; B(a,b) measurement then unitary
    assert [type(s) for s in realization_program(pauli_channel(2))] == [Unitary]
    assert [type(s) for s in realization_program(a_channel(0, 2))] == [SignedMeasurement]
    assert [type(s) for s in realization_program(a_channel(1, 3))] == [Coin]
    assert [type(s) for s in realization_program(b_channel(0, 1))] == [Coin]
    assert [type(s) for s in realization_program(b_channel(2, 3))] == [
        SignedMeasurement,
        Unitary,
    ]


def test_programs_are_cached():
    c = a_channel(1, 2)
    assert realization_program(c) is realization_program(c)


# --- single-sample realization --------------------------------------------


def ket(*amps):
    return QuantumState.pure(np.array(amps, dtype=complex))


def test_realize_pauli_flip():
    out = realize(pauli_channel(1), ket(1.0, 0.0), FixedDraws([]))
    assert out.weight == 1.0 + 0.0j
    np.testing.assert_allclose(out.state.vector, [0.0, 1.0], atol=0)


def test_realize_pauli_z_on_plus():
    r = np.sqrt(0.5)
    out = realize(pauli_channel(3), ket(r, r), FixedDraws([]))
    np.testing.assert_allclose(out.state.vector, [r, -r], atol=1e-15)


def test_realize_measurement_branches():
    r = np.sqrt(0.5)
    # A(0,3) on |+>: draw below 1/2 projects onto |0> with weight +1,
    # a high draw projects onto |1> with weight -1
    plus_branch = realize(a_channel(0, 3), ket(r, r), FixedDraws([0.2]))
    assert plus_branch.weight == 1.0 + 0.0j
    np.testing.assert_allclose(plus_branch.state.vector, [1.0, 0.0], atol=1e-12)
    minus_branch = realize(a_channel(0, 3), ket(r, r), FixedDraws([0.9]))
    assert minus_branch.weight == -1.0 + 0.0j
    np.testing.assert_allclose(minus_branch.state.vector, [0.0, 1.0], atol=1e-12)


def test_realize_measurement_on_eigenstates_is_deterministic():
    up = realize(a_channel(0, 3), ket(1.0, 0.0), FixedDraws([0.999999]))
    assert up.weight == 1.0 + 0.0j
    np.testing.assert_allclose(up.state.vector, [1.0, 0.0], atol=1e-12)
    down = realize(a_channel(0, 3), ket(0.0, 1.0), FixedDraws([0.0]))
    assert down.weight == -1.0 + 0.0j
    np.testing.assert_allclose(down.state.vector, [0.0, 1.0], atol=1e-12)


def test_realize_coin_branches():
    # A(1,2) tosses a fair coin between (X+Y)/sqrt(2) and (X-Y)/sqrt(2)
    program = realization_program(a_channel(1, 2))
    coin = program[0]
    assert [b.sign for b in coin.branches] == [1, -1]
    state = ket(1.0, 0.0)
    heads = realize(a_channel(1, 2), state, FixedDraws([0.1]))
    tails = realize(a_channel(1, 2), state, FixedDraws([0.9]))
    assert heads.weight == 1.0 + 0.0j and tails.weight == -1.0 + 0.0j
    u_plus = (PAULIS[1] + PAULIS[2]) / np.sqrt(2.0)
    u_minus = (PAULIS[1] - PAULIS[2]) / np.sqrt(2.0)
    np.testing.assert_allclose(heads.state.vector, u_plus @ [1.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(tails.state.vector, u_minus @ [1.0, 0.0], atol=1e-12)


def test_realize_b_mixed_channel():
    # B(1,2): measure along -z (signs +1/-1), then apply X
    out = realize(b_channel(1, 2), ket(1.0, 0.0), FixedDraws([0.5]))
    # |0> has zero overlap with the -z projector, so the minus branch fires
    assert out.weight == -1.0 + 0.0j
    np.testing.assert_allclose(out.state.vector, [0.0, 1.0], atol=1e-12)


def test_realize_passes_zero_state_through():
    z = QuantumState.zero_state(1)
    out = realize(a_channel(0, 1), z, FixedDraws([]))
    assert out.state.zero and out.weight == 1.0 + 0.0j


def test_realize_accepts_density_input():
    rho = 0.5 * np.eye(2, dtype=complex)
    out = realize(pauli_channel(1), QuantumState.density(rho), FixedDraws([]))
    assert not out.state.is_pure
    np.testing.assert_allclose(out.state.rho, rho, atol=1e-15)


def test_realize_rejects_multi_qubit_states():
    with pytest.raises(ValueError):
        realize(pauli_channel(0), QuantumState.pure(np.eye(4)[0]), FixedDraws([]))


def test_realize_monte_carlo_means_match_channels():
    """Empirical weight x density averages converge to the exact action."""
    rng = np.random.default_rng(33)
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    state = QuantumState.pure(v / np.linalg.norm(v))
    target_of = lambda c: channel_action(c, state.density_matrix())
    shots = 20000
    for channel in (a_channel(1, 2), b_channel(0, 2), b_channel(1, 3)):
        acc = np.zeros((2, 2), dtype=complex)
        for _ in range(shots):
            out = realize(channel, state, rng)
            acc += out.weight * out.state.density_matrix()
        np.testing.assert_allclose(
            acc / shots, target_of(channel), atol=0.05, err_msg=channel.label()
        )


def test_signed_measurement_validation():
    with pytest.raises(ValueError):
        SignedMeasurement((0.0, 0.0, 2.0), 1.0, -1.0)  # axis not unit
    with pytest.raises(ValueError):
        SignedMeasurement((0.0, 0.0, 1.0), 0.5, -1.0)  # weight neither 0 nor unit
    m = SignedMeasurement((0.0, 0.0, 1.0), 1.0, 0.0)
    np.testing.assert_allclose(m.projector_matrix, np.diag([1.0, 0.0]), atol=1e-15)


def test_projector_formula():
    np.testing.assert_allclose(projector((1.0, 0.0, 0.0)), 0.5 * (SIGMA_0 + PAULIS[1]), atol=0)
