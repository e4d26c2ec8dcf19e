"""Canonical measurement models used as fixtures.

All randomness comes from numpy's default_rng (PCG64, a portable 64-bit
generator): the same seed reproduces the same model matrices bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DimensionMismatchError, ValidationError
from .linalg import TOL_OP, dagger, identity, max_abs, tensor
from .measurement import MeasurementModel
from .quantum import DensityOperator, Observable, pure

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

KET_0 = np.array([1, 0], dtype=complex)
KET_1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class ZooEntry:
    name: str
    model: MeasurementModel
    expected_projective: bool
    notes: str


def cnot_qubit_model() -> ZooEntry:
    """Qubit indirect model: pointer at |0>, object-controlled NOT, Pauli-Z probe."""
    cnot = np.zeros((4, 4), dtype=complex)
    for s in range(2):
        for p in range(2):
            cnot[s * 2 + (p ^ s), s * 2 + p] = 1.0
    model = MeasurementModel(
        sigma=pure(KET_0),
        u=cnot,
        probe=Observable(PAULI_Z),
        measured=Observable(PAULI_Z),
    )
    return ZooEntry(
        name="cnot",
        model=model,
        expected_projective=True,
        notes="object-controlled NOT copies the Z basis onto the pointer; Lueders reduction",
    )


def swap_replace_model(sigma_out: DensityOperator, a_obs: Observable) -> ZooEntry:
    """Measure-and-replace: SWAP the object with a fresh apparatus state.

    The outcome statistics are exactly those of a_obs, but the object is
    left in sigma_out regardless of the outcome.
    """
    d = a_obs.dim
    if sigma_out.dim != d:
        raise DimensionMismatchError(
            f"sigma_out dim {sigma_out.dim} != observable dim {d}"
        )
    swap = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            swap[j * d + i, i * d + j] = 1.0
    model = MeasurementModel(
        sigma=sigma_out,
        u=swap,
        probe=Observable(a_obs.matrix),
        measured=a_obs,
    )
    projective = all(
        _is_normalized_eigenprojection(sigma_out, a_obs, a) for a in a_obs.eigenvalues
    )
    return ZooEntry(
        name="swap_replace",
        model=model,
        expected_projective=projective,
        notes="SWAP hands the object's state to the pointer and replaces it with sigma_out",
    )


def _is_normalized_eigenprojection(sigma: DensityOperator, obs: Observable, a: float) -> bool:
    proj = obs.projection(a)
    return max_abs(sigma.matrix - proj / np.trace(proj).real) <= TOL_OP


def _cyclic_shift(n: int) -> np.ndarray:
    s = np.zeros((n, n), dtype=complex)
    for j in range(n):
        s[(j + 1) % n, j] = 1.0
    return s


def controlled_shift_model(a_obs: Observable, apparatus_dim: int | None = None) -> ZooEntry:
    """Finite pointer model: eigenspace k of A shifts a rest pointer by k steps.

    The pointer observable copies A's sorted spectrum; surplus pointer
    levels (if apparatus_dim exceeds the outcome count) join the lowest
    outcome's eigenspace and are never populated.
    """
    spectrum = a_obs.spectrum
    n = len(spectrum)
    na = n if apparatus_dim is None else int(apparatus_dim)
    if na < n:
        raise DimensionMismatchError(
            f"apparatus dim {na} smaller than outcome count {n}"
        )
    shift = _cyclic_shift(na)
    u = np.zeros((a_obs.dim * na, a_obs.dim * na), dtype=complex)
    for k, (_, proj) in enumerate(spectrum):
        u += tensor(proj, np.linalg.matrix_power(shift, k))
    b = np.zeros((na, na), dtype=complex)
    values = [a for a, _ in spectrum]
    for j in range(na):
        b[j, j] = values[j] if j < n else values[0]
    model = MeasurementModel(
        sigma=pure(np.eye(na, dtype=complex)[:, 0]),
        u=u,
        probe=Observable(b),
        measured=a_obs,
    )
    return ZooEntry(
        name="controlled_shift",
        model=model,
        expected_projective=True,
        notes="von Neumann pointer on a finite dial; Lueders reduction on each eigenspace",
    )


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Gaussian with phase fixing."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_observable(rng: np.random.Generator, dim: int,
                      n_outcomes: int | None = None) -> Observable:
    """Random-basis observable with an integer-separated spectrum."""
    if n_outcomes is None:
        n_outcomes = int(rng.integers(2, dim + 1)) if dim > 1 else 1
    if not 1 <= n_outcomes <= dim:
        raise ValidationError(f"need 1 <= outcomes <= {dim}, got {n_outcomes}")
    values = np.arange(n_outcomes, dtype=float)
    # random multiplicities, each eigenvalue used at least once
    assignment = list(range(n_outcomes))
    assignment += [int(rng.integers(0, n_outcomes)) for _ in range(dim - n_outcomes)]
    diag = np.sort(np.array([values[k] for k in assignment]))
    v = haar_unitary(rng, dim)
    return Observable(v @ np.diag(diag).astype(complex) @ dagger(v))


def random_indirect_model(seed: int, object_dim: int, apparatus_dim: int,
                          a_obs: Observable | None = None) -> ZooEntry:
    """Seeded random model that provably measures its observable.

    Starts from the controlled-shift model and conjugates the apparatus
    side by a Haar-random unitary W: u -> (1 (x) W) u (1 (x) W^dag),
    sigma -> W sigma W^dag, B -> W B W^dag.  The effects (and reductions)
    are invariant under this substitution, so the measuring condition
    still holds and the model stays Lueders-projective.
    """
    rng = np.random.default_rng(seed)
    if a_obs is None:
        a_obs = random_observable(rng, object_dim)
    elif a_obs.dim != object_dim:
        raise DimensionMismatchError(f"a_obs dim {a_obs.dim} != object dim {object_dim}")
    n = len(a_obs.spectrum)
    if apparatus_dim < n:
        raise DimensionMismatchError(
            f"apparatus dim {apparatus_dim} smaller than outcome count {n}"
        )
    base = controlled_shift_model(a_obs, apparatus_dim).model
    w = haar_unitary(rng, apparatus_dim)
    one_w = tensor(identity(object_dim), w)
    model = MeasurementModel(
        sigma=DensityOperator(w @ base.sigma.matrix @ dagger(w)),
        u=one_w @ base.u @ dagger(one_w),
        probe=Observable(w @ base.probe.matrix @ dagger(w)),
        measured=a_obs,
    )
    return ZooEntry(
        name=f"random_indirect_{seed}",
        model=model,
        expected_projective=True,
        notes="controlled-shift conjugated by a seeded Haar unitary on the apparatus",
    )


def standard_entries() -> list[ZooEntry]:
    """The fixed fixtures exercised by the verification and CLI suites."""
    return [
        cnot_qubit_model(),
        swap_replace_model(pure(KET_PLUS), Observable(PAULI_Z)),
        controlled_shift_model(Observable(np.diag([0.0, 1.0, 2.0]).astype(complex))),
        replace(
            controlled_shift_model(Observable(np.diag([0.0, 0.0, 1.0]).astype(complex))),
            name="controlled_shift_degenerate",
        ),
        random_indirect_model(seed=42, object_dim=3, apparatus_dim=4),
    ]
