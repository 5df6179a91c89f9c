"""The 16 local channels that span single-qubit maps, and how to run them.

The basis consists of, for alpha < alpha':

    sigma_alpha :  rho -> sigma_a rho sigma_a                      (4 channels)
    A_aa'       :  rho -> (sigma_a rho sigma_a' + sigma_a' rho sigma_a) / 2
    B_aa'       :  rho -> (sigma_a rho sigma_a' - sigma_a' rho sigma_a) / (2i)

These 16 maps are linearly independent (rank-16 completeness check below), so
any single-qubit linear map is a real combination of them. Under index swap,
A is symmetric and B is antisymmetric, so restricting to alpha < alpha' loses
nothing.

Each channel carries a realization program built from three primitive steps:

* UNITARY(V): apply a 2x2 unitary.
* SIGNED_MEASUREMENT(n, c+, c-): measure along axis n; on outcome +-
  (probability p+- = Tr[Pi(+-n) rho]) project, renormalize, and multiply the
  running weight by c+-. Each c is 0 or a unit-modulus phase; the expected
  weighted output is c+ Pi(n) rho Pi(n) + c- Pi(-n) rho Pi(-n).
* COIN(branches): pick a branch by its probability, multiply the weight by
  its +-1 sign, run its steps.

The programs (sigma_a sigma_a' = i eps sigma_a'', eps the Levi-Civita sign):

    sigma_a   -> UNITARY(sigma_a)
    A_0a'     -> SIGNED_MEASUREMENT(e_a', +1, -1)
    A_aa'     -> COIN(1/2: UNITARY((sigma_a + sigma_a')/sqrt2),
                      1/2: UNITARY((sigma_a - sigma_a')/sqrt2))  [sign +-1]
    B_0a'     -> COIN(1/2: UNITARY(exp(+i pi/4 sigma_a')),
                      1/2: UNITARY(exp(-i pi/4 sigma_a')))       [sign +-1]
    B_aa'     -> SIGNED_MEASUREMENT(-eps e_a'', +1, -1), then UNITARY(sigma_a)

Every program has total quasiprobability mass exactly 1: averaging
weight x (post state) over the program's randomness reproduces the channel.
A zero-probability branch with weight 0 yields the zero state, the sentinel
for a discarded sample.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import sqrt

import numpy as np

from .algebra import PAULIS, QuantumState, ptm_from_action

_PHASE_TOL = 1e-12

# (alpha, alpha') -> (eps, alpha'') with sigma_a sigma_a' = i eps sigma_a''
_LEVI_CIVITA = {(1, 2): (1, 3), (1, 3): (-1, 2), (2, 3): (1, 1)}

_AXES = (
    np.array([1.0, 0.0, 0.0]),
    np.array([0.0, 1.0, 0.0]),
    np.array([0.0, 0.0, 1.0]),
)


class ChannelKind(Enum):
    PAULI = "pauli"
    A = "A"
    B = "B"


@dataclass(frozen=True)
class BasisChannelId:
    """Identifier of one of the 16 basis channels.

    PAULI uses ``alpha`` in 0..3 only; A and B need 0 <= alpha < alpha_prime <= 3.
    """

    kind: ChannelKind
    alpha: int
    alpha_prime: int | None = None

    def __post_init__(self) -> None:
        if self.kind is ChannelKind.PAULI:
            if self.alpha not in range(4) or self.alpha_prime is not None:
                raise ValueError(f"bad Pauli channel id {self}")
        else:
            if self.alpha_prime is None or not 0 <= self.alpha < self.alpha_prime <= 3:
                raise ValueError(f"bad {self.kind.value} channel id: need alpha < alpha' in 0..3")

    def label(self) -> str:
        if self.kind is ChannelKind.PAULI:
            return f"s{self.alpha}"
        return f"{self.kind.value}{self.alpha}{self.alpha_prime}"

    @classmethod
    def from_label(cls, text: str) -> BasisChannelId:
        if len(text) == 2 and text[0] == "s" and text[1] in "0123":
            return cls(ChannelKind.PAULI, int(text[1]))
        if len(text) == 3 and text[0] in "AB" and text[1] in "0123" and text[2] in "0123":
            return cls(ChannelKind(text[0]), int(text[1]), int(text[2]))
        raise ValueError(f"unrecognized channel label {text!r}")

    def __str__(self) -> str:
        return self.label()


def pauli_channel(alpha: int) -> BasisChannelId:
    return BasisChannelId(ChannelKind.PAULI, alpha)


def a_channel(alpha: int, alpha_prime: int) -> BasisChannelId:
    return BasisChannelId(ChannelKind.A, alpha, alpha_prime)


def b_channel(alpha: int, alpha_prime: int) -> BasisChannelId:
    return BasisChannelId(ChannelKind.B, alpha, alpha_prime)


ALL_CHANNELS: tuple[BasisChannelId, ...] = tuple(
    [pauli_channel(a) for a in range(4)]
    + [a_channel(a, b) for a in range(4) for b in range(a + 1, 4)]
    + [b_channel(a, b) for a in range(4) for b in range(a + 1, 4)]
)


# --- realization steps ---------------------------------------------------


@dataclass(frozen=True)
class Unitary:
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2) or np.max(np.abs(m @ m.conj().T - np.eye(2))) > 1e-10:
            raise ValueError("realization step needs a 2x2 unitary")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class SignedMeasurement:
    """Measure along ``axis``; weight the +- outcomes by c_plus / c_minus."""

    axis: tuple[float, float, float]
    c_plus: complex
    c_minus: complex

    def __post_init__(self) -> None:
        ax = tuple(float(x) for x in self.axis)
        if len(ax) != 3 or abs(sum(x * x for x in ax) - 1.0) > _PHASE_TOL:
            raise ValueError("measurement axis must be a unit 3-vector")
        for c in (self.c_plus, self.c_minus):
            mag = abs(complex(c))
            if mag != 0.0 and abs(mag - 1.0) > _PHASE_TOL:
                raise ValueError(f"outcome weight {c} is neither 0 nor unit modulus")
        object.__setattr__(self, "axis", ax)
        # Pi(+n), precomputed once; sampling paths hit this every shot
        matrix = projector(ax)
        matrix.setflags(write=False)
        object.__setattr__(self, "projector_matrix", matrix)


@dataclass(frozen=True)
class CoinBranch:
    probability: float
    sign: int
    steps: tuple[Unitary, ...]

    def __post_init__(self) -> None:
        if not 0.0 < self.probability <= 1.0:
            raise ValueError(f"branch probability {self.probability} outside (0, 1]")
        if self.sign not in (1, -1):
            raise ValueError(f"branch sign must be +-1, got {self.sign}")


@dataclass(frozen=True)
class Coin:
    branches: tuple[CoinBranch, ...]

    def __post_init__(self) -> None:
        total = sum(b.probability for b in self.branches)
        if abs(total - 1.0) > _PHASE_TOL:
            raise ValueError(f"branch probabilities sum to {total}, not 1")


RealizationStep = Unitary | SignedMeasurement | Coin


@dataclass(frozen=True)
class RealizationOutcome:
    """One sampled run of a program: post state and accumulated weight."""

    state: QuantumState
    weight: complex


def projector(axis: tuple[float, float, float] | np.ndarray) -> np.ndarray:
    """Pi(n) = (I + n . sigma) / 2 for a unit Bloch vector n."""
    n = np.asarray(axis, dtype=float)
    return (PAULIS[0] + n[0] * PAULIS[1] + n[1] * PAULIS[2] + n[2] * PAULIS[3]) / 2.0


def channel_action(channel: BasisChannelId, matrix: np.ndarray) -> np.ndarray:
    """The exact linear action of a basis channel on a 2x2 matrix."""
    sa = PAULIS[channel.alpha]
    if channel.kind is ChannelKind.PAULI:
        return sa @ matrix @ sa
    sb = PAULIS[channel.alpha_prime]
    if channel.kind is ChannelKind.A:
        return (sa @ matrix @ sb + sb @ matrix @ sa) / 2.0
    return (sa @ matrix @ sb - sb @ matrix @ sa) / 2.0j


_PTM_CACHE: dict[BasisChannelId, np.ndarray] = {}


def basis_ptm(channel: BasisChannelId) -> np.ndarray:
    """4x4 real PTM of the channel's exact action (cached, read-only)."""
    cached = _PTM_CACHE.get(channel)
    if cached is None:
        cached = ptm_from_action(lambda m: channel_action(channel, m), 1)
        cached.setflags(write=False)
        _PTM_CACHE[channel] = cached
    return cached


_PROGRAM_CACHE: dict[BasisChannelId, tuple[RealizationStep, ...]] = {}


def realization_program(channel: BasisChannelId) -> tuple[RealizationStep, ...]:
    """The channel's realization as primitive steps (cached)."""
    cached = _PROGRAM_CACHE.get(channel)
    if cached is None:
        cached = _build_program(channel)
        _PROGRAM_CACHE[channel] = cached
    return cached


def _build_program(channel: BasisChannelId) -> tuple[RealizationStep, ...]:
    a = channel.alpha
    if channel.kind is ChannelKind.PAULI:
        return (Unitary(PAULIS[a]),)
    b = channel.alpha_prime
    if channel.kind is ChannelKind.A:
        if a == 0:
            # A_0b = Pi(n_b) - Pi(-n_b) as weighted projections
            return (SignedMeasurement(tuple(_AXES[b - 1]), 1.0, -1.0),)
        # (sigma_a +- sigma_b)/sqrt2 is Hermitian and squares to I: a unitary
        plus = Unitary((PAULIS[a] + PAULIS[b]) / sqrt(2.0))
        minus = Unitary((PAULIS[a] - PAULIS[b]) / sqrt(2.0))
        return (Coin((CoinBranch(0.5, 1, (plus,)), CoinBranch(0.5, -1, (minus,)))),)
    if a == 0:
        # (I +- i sigma_b)/sqrt2 = exp(+- i pi/4 sigma_b)
        plus = Unitary((PAULIS[0] + 1j * PAULIS[b]) / sqrt(2.0))
        minus = Unitary((PAULIS[0] - 1j * PAULIS[b]) / sqrt(2.0))
        return (Coin((CoinBranch(0.5, 1, (plus,)), CoinBranch(0.5, -1, (minus,)))),)
    # B_ab with a > 0: sigma_a (sigma_0 -+ eps sigma_c)/2 = B_ab,+-, so measure
    # along -eps e_c with weights (+1, -1), then flip with sigma_a.
    eps, c = _LEVI_CIVITA[(a, b)]
    axis = tuple(-eps * _AXES[c - 1])
    return (SignedMeasurement(axis, 1.0, -1.0), Unitary(PAULIS[a]))


def realize(channel: BasisChannelId, state: QuantumState, rng) -> RealizationOutcome:
    """Run one sample of the channel's program on a single-qubit state.

    ``rng`` needs a ``random()`` method returning uniforms in [0, 1). The
    output state stays normalized (pure inputs stay pure); averaging
    weight x density over many runs converges to the channel's exact action.
    Zero states pass through unchanged with weight 1.

    Args:
        channel: which basis channel to realize.
        state: normalized or zero single-qubit state.
        rng: uniform source for measurement outcomes and coin flips.

    Returns:
        RealizationOutcome with the post state and the accumulated weight
        (unit modulus, or 0 if a weight-0 outcome was drawn).
    """
    if state.num_qubits != 1:
        raise ValueError("realize acts on single-qubit states")
    if state.zero:
        return RealizationOutcome(state, 1.0 + 0.0j)
    weight = 1.0 + 0.0j
    pure = state.is_pure
    payload = state.vector if pure else state.rho
    for step in realization_program(channel):
        if isinstance(step, Coin):
            draw = rng.random()
            acc = 0.0
            branch = step.branches[-1]
            for candidate in step.branches:
                acc += candidate.probability
                if draw < acc:
                    branch = candidate
                    break
            weight *= branch.sign
            for sub in branch.steps:
                payload = _apply_unitary(sub.matrix, payload, pure)
        elif isinstance(step, Unitary):
            payload = _apply_unitary(step.matrix, payload, pure)
        else:
            payload, c = _apply_measurement(step, payload, pure, rng)
            if payload is None:
                # weight-0 outcome: the sample is discarded via the zero sentinel
                return RealizationOutcome(QuantumState.zero_state(1), 0.0 + 0.0j)
            weight *= c
    if pure:
        out = QuantumState(num_qubits=1, vector=payload, rho=None, norm_sq=1.0, zero=False)
    else:
        out = QuantumState.density(payload)
    return RealizationOutcome(out, weight)


def _apply_unitary(u: np.ndarray, payload: np.ndarray, pure: bool) -> np.ndarray:
    if pure:
        return u @ payload
    return u @ payload @ u.conj().T


def _apply_measurement(
    step: SignedMeasurement, payload: np.ndarray, pure: bool, rng
) -> tuple[np.ndarray | None, complex]:
    pi_plus = step.projector_matrix
    if pure:
        projected = pi_plus @ payload
        p_plus = float(np.real(np.vdot(projected, projected)))
    else:
        p_plus = float(np.real(np.trace(pi_plus @ payload)))
    plus = rng.random() < p_plus
    c = complex(step.c_plus if plus else step.c_minus)
    if c == 0.0:
        return None, c
    if plus:
        if pure:
            return projected / np.sqrt(p_plus), c
        return pi_plus @ payload @ pi_plus / p_plus, c
    pi_minus = np.eye(2, dtype=complex) - pi_plus
    if pure:
        return (pi_minus @ payload) / np.sqrt(1.0 - p_plus), c
    return pi_minus @ payload @ pi_minus / (1.0 - p_plus), c


def check_basis_completeness() -> bool:
    """True iff the 16 channel PTMs span all single-qubit linear maps."""
    stack = np.stack([basis_ptm(c).ravel() for c in ALL_CHANNELS])
    return int(np.linalg.matrix_rank(stack)) == 16
