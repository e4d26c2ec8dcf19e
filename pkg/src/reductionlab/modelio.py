"""JSON model and scenario files.

Format version "1": complex numbers are two-element [re, im] arrays,
matrices are flat row-major lists of such pairs.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .bayes import EntangledScenario, LocalApparatusSpec
from .errors import ParseError, ValidationError
from .measurement import MeasurementModel
from .quantum import DensityOperator, Observable

FORMAT_VERSION = "1"


def matrix_to_pairs(m) -> list[list[float]]:
    a = np.asarray(m, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in a.ravel(order="C")]


def pairs_to_matrix(pairs, field: str) -> np.ndarray:
    if not isinstance(pairs, list):
        raise ParseError(f"{field}: expected a list of [re, im] pairs")
    n = len(pairs)
    dim = math.isqrt(n)
    if dim * dim != n or dim == 0:
        raise ParseError(f"{field}: {n} entries is not a positive square")
    flat = np.empty(n, dtype=complex)
    for i, p in enumerate(pairs):
        if not (isinstance(p, list) and len(p) == 2
                and all(isinstance(v, (int, float)) for v in p)):
            raise ParseError(f"{field}: entry {i} is not a [re, im] pair")
        flat[i] = complex(p[0], p[1])
    return flat.reshape(dim, dim)


def _require(doc: dict, field: str):
    if field not in doc:
        raise ParseError(f"missing required field '{field}'")
    return doc[field]


def _check_version(doc: dict):
    version = _require(doc, "format_version")
    if version != FORMAT_VERSION:
        raise ParseError(f"format_version: expected '{FORMAT_VERSION}', got {version!r}")


def _int_field(doc: dict, field: str) -> int:
    v = _require(doc, field)
    if not isinstance(v, int) or v <= 0:
        raise ParseError(f"{field}: expected a positive integer, got {v!r}")
    return v


def model_to_dict(model: MeasurementModel) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "object_dim": model.object_dim,
        "apparatus_dim": model.apparatus_dim,
        "sigma": matrix_to_pairs(model.sigma.matrix),
        "u": matrix_to_pairs(model.u),
        "a_matrix": matrix_to_pairs(model.measured.matrix),
        "b_matrix": matrix_to_pairs(model.probe.matrix),
        "object_hamiltonian": matrix_to_pairs(model.object_hamiltonian),
    }


def model_from_dict(doc: dict) -> MeasurementModel:
    if not isinstance(doc, dict):
        raise ParseError("model document must be a JSON object")
    _check_version(doc)
    object_dim = _int_field(doc, "object_dim")
    apparatus_dim = _int_field(doc, "apparatus_dim")
    mats = {
        field: pairs_to_matrix(_require(doc, field), field)
        for field in ("sigma", "u", "a_matrix", "b_matrix", "object_hamiltonian")
    }
    expected = {
        "sigma": apparatus_dim,
        "u": object_dim * apparatus_dim,
        "a_matrix": object_dim,
        "b_matrix": apparatus_dim,
        "object_hamiltonian": object_dim,
    }
    for field, dim in expected.items():
        if mats[field].shape[0] != dim:
            raise ParseError(
                f"{field}: expected a {dim}x{dim} matrix, got {mats[field].shape[0]}x{mats[field].shape[0]}"
            )
    try:
        sigma = DensityOperator(mats["sigma"])
    except ValidationError as exc:
        raise ValidationError(f"sigma: {exc}") from exc
    try:
        probe = Observable(mats["b_matrix"])
    except ValidationError as exc:
        raise ValidationError(f"b_matrix: {exc}") from exc
    try:
        measured = Observable(mats["a_matrix"])
    except ValidationError as exc:
        raise ValidationError(f"a_matrix: {exc}") from exc
    return MeasurementModel(
        sigma=sigma, u=mats["u"], probe=probe, measured=measured,
        object_hamiltonian=mats["object_hamiltonian"],
    )


def scenario_to_dict(s: EntangledScenario, apparatus: MeasurementModel | None = None) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "dim1": s.dims[0],
        "dim2": s.dims[1],
        "rho12": matrix_to_pairs(s.rho12.matrix),
        "a_matrix": matrix_to_pairs(s.a_obs.matrix),
        "x_matrix": matrix_to_pairs(s.x_obs.matrix),
        "h1": matrix_to_pairs(s.h1),
        "h2": matrix_to_pairs(s.h2),
        "t": s.t,
        "tau": s.tau,
    }
    if apparatus is not None:
        doc["apparatus"] = model_to_dict(apparatus)
    return doc


def scenario_from_dict(doc: dict) -> tuple[EntangledScenario, LocalApparatusSpec | None]:
    if not isinstance(doc, dict):
        raise ParseError("scenario document must be a JSON object")
    _check_version(doc)
    d1 = _int_field(doc, "dim1")
    d2 = _int_field(doc, "dim2")
    rho12 = pairs_to_matrix(_require(doc, "rho12"), "rho12")
    if rho12.shape[0] != d1 * d2:
        raise ParseError(f"rho12: expected dimension {d1 * d2}, got {rho12.shape[0]}")
    try:
        rho = DensityOperator(rho12, dims=(d1, d2))
    except ValidationError as exc:
        raise ValidationError(f"rho12: {exc}") from exc
    try:
        a_obs = Observable(pairs_to_matrix(_require(doc, "a_matrix"), "a_matrix"))
    except ValidationError as exc:
        raise ValidationError(f"a_matrix: {exc}") from exc
    try:
        x_obs = Observable(pairs_to_matrix(_require(doc, "x_matrix"), "x_matrix"))
    except ValidationError as exc:
        raise ValidationError(f"x_matrix: {exc}") from exc
    h1 = pairs_to_matrix(_require(doc, "h1"), "h1")
    h2 = pairs_to_matrix(_require(doc, "h2"), "h2")
    t = _require(doc, "t")
    tau = _require(doc, "tau")
    if not isinstance(t, (int, float)) or not isinstance(tau, (int, float)):
        raise ParseError("t and tau must be numbers")
    scenario = EntangledScenario(rho, a_obs, x_obs, h1=h1, h2=h2, t=float(t), tau=float(tau))
    apparatus = None
    if "apparatus" in doc:
        apparatus = LocalApparatusSpec(model_from_dict(doc["apparatus"]), a_obs)
    return scenario, apparatus


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def save_json(path: str, doc: dict):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
