"""Physical-layer objects: observables, density operators, Born statistics,
unitary evolution, and reduced states."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, ValidationError
from .linalg import (
    TOL_EIG,
    TOL_OP,
    TOL_PROB,
    as_matrix,
    dagger,
    herm_expm,
    is_hermitian,
    max_abs,
    partial_trace,
    spectral_decompose,
)


class Observable:
    """Hermitian operator carrying its spectral decomposition eagerly."""

    def __init__(self, matrix):
        m = as_matrix(matrix)
        if not is_hermitian(m):
            raise ValidationError("observable matrix must be Hermitian")
        self.matrix = m
        self.spectrum = spectral_decompose(m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> list[float]:
        return [a for a, _ in self.spectrum]

    def projection(self, a: float) -> np.ndarray:
        """Spectral projection for the clustered eigenvalue nearest `a` (within TOL_EIG)."""
        for val, proj in self.spectrum:
            if abs(val - a) <= TOL_EIG:
                return proj
        raise KeyError(f"{a} is not an eigenvalue of this observable")


class DensityOperator:
    """Positive unit-trace operator, optionally annotated with tensor-factor dims."""

    def __init__(self, matrix, dims=None):
        m = as_matrix(matrix)
        if not is_hermitian(m):
            raise ValidationError("density operator must be Hermitian")
        lo = float(np.min(np.linalg.eigvalsh(m)))
        if lo < -TOL_OP:
            raise ValidationError(f"density operator has negative eigenvalue {lo}")
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > TOL_PROB:
            raise ValidationError(f"density operator trace is {tr}, expected 1")
        self.matrix = m
        self.dims = None if dims is None else tuple(int(d) for d in dims)
        if self.dims is not None and int(np.prod(self.dims)) != m.shape[0]:
            raise DimensionMismatchError(
                f"dims {self.dims} inconsistent with matrix dimension {m.shape[0]}"
            )

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


class OutcomeDistribution:
    """Map from outcome value to probability; normalized to 1 within TOL_PROB."""

    def __init__(self, entries: dict):
        total = 0.0
        clean: dict[float, float] = {}
        for a, p in entries.items():
            p = float(p)
            if p < -TOL_PROB or p > 1.0 + TOL_PROB:
                raise ValidationError(f"probability {p} for outcome {a} out of range")
            clean[float(a)] = p
            total += p
        if abs(total - 1.0) > TOL_PROB:
            raise ValidationError(f"probabilities sum to {total}, expected 1")
        self.entries = clean

    def probability(self, a: float) -> float:
        for val, p in self.entries.items():
            if abs(val - a) <= TOL_EIG:
                return p
        raise KeyError(f"no outcome {a} in distribution")

    def outcomes(self) -> list[float]:
        return sorted(self.entries)

    def max_deviation(self, other: "OutcomeDistribution") -> float:
        keys = sorted(self.entries)
        if keys != sorted(other.entries):
            raise DimensionMismatchError("distributions have different outcome sets")
        return max(abs(self.entries[k] - other.entries[k]) for k in keys)


def ket(*amplitudes) -> np.ndarray:
    """Normalized column vector from amplitudes."""
    v = np.asarray(amplitudes, dtype=complex).reshape(-1)
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise ValidationError("zero vector cannot be normalized")
    return v / n


def pure(vector) -> DensityOperator:
    """|v><v| for a (normalized) state vector."""
    v = ket(*np.asarray(vector, dtype=complex).reshape(-1))
    return DensityOperator(np.outer(v, v.conj()))


def born_distribution(a: Observable, rho: DensityOperator) -> OutcomeDistribution:
    """P(a) = Tr[E^A(a) rho]."""
    if a.dim != rho.dim:
        raise DimensionMismatchError(f"observable dim {a.dim} != state dim {rho.dim}")
    return OutcomeDistribution(
        {val: float(np.trace(proj @ rho.matrix).real) for val, proj in a.spectrum}
    )


def evolve(rho: DensityOperator, h, tau: float) -> DensityOperator:
    """Unitary evolution e^{-i h tau} rho e^{+i h tau}."""
    hm = as_matrix(h)
    if hm.shape[0] != rho.dim:
        raise DimensionMismatchError(f"hamiltonian dim {hm.shape[0]} != state dim {rho.dim}")
    u = herm_expm(hm, tau)
    return DensityOperator(u @ rho.matrix @ dagger(u), dims=rho.dims)


def rule1_distribution(rho: DensityOperator, h, x: Observable, tau: float) -> OutcomeDistribution:
    """Outcome distribution of measuring x after free evolution under h for time tau."""
    return born_distribution(x, evolve(rho, h, tau))


def reduced_state(rho: DensityOperator, keep, dims=None) -> DensityOperator:
    """Partial trace down to the kept tensor factors."""
    d = dims if dims is not None else rho.dims
    if d is None:
        raise DimensionMismatchError("reduced_state needs a tensor-factor annotation")
    keep = sorted(set(int(k) for k in keep))
    sub = partial_trace(rho.matrix, d, keep)
    return DensityOperator(sub, dims=tuple(d[k] for k in keep))


def operator_deviation(a, b) -> float:
    """Max-entry distance between two operators (or DensityOperators)."""
    ma = a.matrix if isinstance(a, DensityOperator) else as_matrix(a)
    mb = b.matrix if isinstance(b, DensityOperator) else as_matrix(b)
    if ma.shape != mb.shape:
        raise DimensionMismatchError(f"shape mismatch {ma.shape} vs {mb.shape}")
    return max_abs(ma - mb)


def random_density(rng: np.random.Generator, dim: int) -> DensityOperator:
    """Full-rank random state from a complex Wishart draw."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return DensityOperator(m / np.trace(m).real)


def spanning_states(dim: int) -> list[DensityOperator]:
    """dim^2 states whose span is all Hermitian matrices (symmetrized matrix units)."""
    out = []
    for j in range(dim):
        e = np.zeros((dim, dim), dtype=complex)
        e[j, j] = 1.0
        out.append(DensityOperator(e))
    for j in range(dim):
        for k in range(j + 1, dim):
            m = np.zeros((dim, dim), dtype=complex)
            m[j, j] = m[k, k] = 0.5
            m[j, k] = m[k, j] = 0.5
            out.append(DensityOperator(m))
            m = np.zeros((dim, dim), dtype=complex)
            m[j, j] = m[k, k] = 0.5
            m[j, k] = -0.5j
            m[k, j] = 0.5j
            out.append(DensityOperator(m))
    return out
