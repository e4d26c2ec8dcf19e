"""Local successive measurements on a noninteracting entangled pair.

Joint outcome statistics computed two ways: a closed-form expression in
Heisenberg-evolved spectral projections, and a brute-force apparatus-level
oracle that simulates the full object-apparatus-bystander dynamics and
reads two commuting projections jointly.  Plus Bayes prior/posterior
states of the distant subsystem.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, ValidationError, ZeroProbabilityError
from .linalg import (
    TOL_OP,
    TOL_PROB,
    as_matrix,
    dagger,
    herm_expm,
    identity,
    is_hermitian,
    partial_trace,
    permute_factors,
    tensor,
)
from .measurement import MeasurementModel, verify_measures
from .quantum import DensityOperator, Observable, OutcomeDistribution, operator_deviation


class EntangledScenario:
    """State rho12 on H1 (x) H2; A measured locally on subsystem 1 at time t,
    X measured on subsystem 2 at time t + tau; free Hamiltonians h1, h2."""

    def __init__(self, rho12: DensityOperator, a_obs: Observable, x_obs: Observable,
                 h1=None, h2=None, t: float = 0.0, tau: float = 0.0):
        if rho12.dims is None or len(rho12.dims) != 2:
            raise DimensionMismatchError("rho12 needs a two-factor dims annotation")
        d1, d2 = rho12.dims
        if a_obs.dim != d1:
            raise DimensionMismatchError(f"a_obs dim {a_obs.dim} != subsystem-1 dim {d1}")
        if x_obs.dim != d2:
            raise DimensionMismatchError(f"x_obs dim {x_obs.dim} != subsystem-2 dim {d2}")
        h1 = np.zeros((d1, d1), dtype=complex) if h1 is None else as_matrix(h1)
        h2 = np.zeros((d2, d2), dtype=complex) if h2 is None else as_matrix(h2)
        if h1.shape[0] != d1 or h2.shape[0] != d2:
            raise DimensionMismatchError("hamiltonian dimensions inconsistent with rho12")
        if not (is_hermitian(h1) and is_hermitian(h2)):
            raise ValidationError("h1 and h2 must be Hermitian")
        if t < 0 or tau < 0:
            raise ValidationError("times must be nonnegative")
        self.rho12 = rho12
        self.a_obs = a_obs
        self.x_obs = x_obs
        self.h1 = h1
        self.h2 = h2
        self.t = float(t)
        self.tau = float(tau)

    @property
    def dims(self) -> tuple[int, int]:
        return self.rho12.dims


class LocalApparatusSpec:
    """An apparatus model for the first subsystem's observable, used by the oracle.

    The model's interaction acts on H1 (x) HA only, so its extension to the
    full space commutes with every observable of subsystem 2.
    """

    def __init__(self, model: MeasurementModel, a_obs: Observable):
        if operator_deviation(model.measured.matrix, a_obs.matrix) > TOL_OP:
            raise ValidationError("apparatus model does not target the scenario's observable")
        report = verify_measures(model)
        if not report.passes:
            raise ValidationError(
                f"apparatus model fails the measuring condition (deviation {report.max_deviation})"
            )
        self.model = model


class JointDistribution:
    """Map from (a, x) outcome pairs to probability."""

    def __init__(self, entries: dict):
        total = 0.0
        clean: dict[tuple[float, float], float] = {}
        for (a, x), p in entries.items():
            p = float(p)
            if p < -TOL_PROB or p > 1.0 + TOL_PROB:
                raise ValidationError(f"probability {p} for outcome {(a, x)} out of range")
            clean[(float(a), float(x))] = p
            total += p
        if abs(total - 1.0) > TOL_PROB:
            raise ValidationError(f"joint probabilities sum to {total}, expected 1")
        self.entries = clean

    def marginal_a(self) -> OutcomeDistribution:
        out: dict[float, float] = {}
        for (a, _), p in self.entries.items():
            out[a] = out.get(a, 0.0) + p
        return OutcomeDistribution(out)

    def marginal_x(self) -> OutcomeDistribution:
        out: dict[float, float] = {}
        for (_, x), p in self.entries.items():
            out[x] = out.get(x, 0.0) + p
        return OutcomeDistribution(out)

    def max_deviation(self, other: "JointDistribution") -> float:
        keys = sorted(self.entries)
        if keys != sorted(other.entries):
            raise DimensionMismatchError("joint distributions have different outcome sets")
        return max(abs(self.entries[k] - other.entries[k]) for k in keys)

    def total_variation(self, other: "JointDistribution") -> float:
        keys = sorted(self.entries)
        if keys != sorted(other.entries):
            raise DimensionMismatchError("joint distributions have different outcome sets")
        return 0.5 * sum(abs(self.entries[k] - other.entries[k]) for k in keys)


def _heisenberg(proj: np.ndarray, h, time: float) -> np.ndarray:
    """e^{+iht} P e^{-iht}."""
    u = herm_expm(h, -time)
    return u @ proj @ dagger(u)


def joint_distribution_formula(s: EntangledScenario) -> JointDistribution:
    """Pr{A(t)=a, X(t+tau)=x} from Heisenberg-evolved projections on rho12."""
    entries = {}
    for a, ea in s.a_obs.spectrum:
        ea_t = _heisenberg(ea, s.h1, s.t)
        for x, ex in s.x_obs.spectrum:
            ex_t = _heisenberg(ex, s.h2, s.t + s.tau)
            p = float(np.trace(tensor(ea_t, ex_t) @ s.rho12.matrix).real)
            entries[(a, x)] = p
    return JointDistribution(entries)


def joint_distribution_oracle(s: EntangledScenario, app: LocalApparatusSpec) -> JointDistribution:
    """Brute-force joint distribution via the full three-factor dynamics.

    Builds rho12 (x) sigma on H1 (x) HA (x) H2, evolves freely to time t
    (apparatus Hamiltonian zero), applies the interaction unitary extended
    as U (x) 1, evolves freely by tau, then reads the commuting projections
    E^B(a) on the apparatus and E^X(x) on subsystem 2 jointly.  No
    projection postulate anywhere.
    """
    model = app.model
    d1, d2 = s.dims
    da = model.apparatus_dim
    if model.object_dim != d1:
        raise DimensionMismatchError(
            f"apparatus object dim {model.object_dim} != subsystem-1 dim {d1}"
        )
    # (S1, S2, A) -> (S1, A, S2)
    full = tensor(s.rho12.matrix, model.sigma.matrix)
    full = permute_factors(full, (d1, d2, da), (0, 2, 1))
    h_free = tensor(s.h1, identity(da), identity(d2)) + tensor(identity(d1), identity(da), s.h2)
    u_t = herm_expm(h_free, s.t)
    full = u_t @ full @ dagger(u_t)
    u_int = tensor(model.u, identity(d2))
    full = u_int @ full @ dagger(u_int)
    u_tau = herm_expm(h_free, s.tau)
    full = u_tau @ full @ dagger(u_tau)
    entries = {}
    for a in model.outcomes():
        eb = model.probe_projection(a)
        for x, ex in s.x_obs.spectrum:
            proj = tensor(identity(d1), eb, ex)
            entries[(a, x)] = float(np.trace(proj @ full).real)
    return JointDistribution(entries)


def prior_state(s: EntangledScenario) -> DensityOperator:
    """rho2(t) = e^{-i h2 t} Tr_1[rho12] e^{+i h2 t}."""
    rho2 = partial_trace(s.rho12.matrix, s.dims, [1])
    u = herm_expm(s.h2, s.t)
    return DensityOperator(u @ rho2 @ dagger(u))


def posterior_state(s: EntangledScenario, a: float) -> DensityOperator:
    """rho2(t | A(t)=a): the distant subsystem's state conditioned on the local outcome."""
    ea_t = _heisenberg(s.a_obs.projection(a), s.h1, s.t)
    selected = partial_trace(tensor(ea_t, identity(s.dims[1])) @ s.rho12.matrix, s.dims, [1])
    p = float(np.trace(selected).real)
    if p <= TOL_PROB:
        raise ZeroProbabilityError(f"outcome {a} has probability {p}; posterior undefined")
    u = herm_expm(s.h2, s.t)
    return DensityOperator(u @ selected @ dagger(u) / p)


def bayes_condition(j: JointDistribution, a: float) -> OutcomeDistribution:
    """Classical conditioning: P(x | a) = j[(a, x)] / sum_x j[(a, x)]."""
    row = {x: p for (aa, x), p in j.entries.items() if abs(aa - float(a)) <= 1e-8}
    if not row:
        raise KeyError(f"no outcome {a} in joint distribution")
    total = sum(row.values())
    if total <= TOL_PROB:
        raise ZeroProbabilityError(f"outcome {a} has marginal probability {total}")
    return OutcomeDistribution({x: p / total for x, p in row.items()})


def bayes_mixture_check(s: EntangledScenario) -> float:
    """Max-entry deviation of the prior from the P(a)-weighted posterior mixture."""
    joint = joint_distribution_formula(s)
    marg = joint.marginal_a()
    mix = np.zeros((s.dims[1], s.dims[1]), dtype=complex)
    for a in s.a_obs.eigenvalues:
        p = marg.probability(a)
        if p > TOL_PROB:
            mix += p * posterior_state(s, a).matrix
    return operator_deviation(prior_state(s), mix)
