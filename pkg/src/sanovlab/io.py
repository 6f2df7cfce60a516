"""Serialization helpers: matrix JSON exchange format, distribution export,
and JSON-lines report streams."""

import json
from typing import Iterable, List

import numpy as np

from .errors import ValidationError
from .sanov import BoundReport
from .schur import JointOutcomeDistribution
from .spectral import DensityMatrix, HermitianOperator


def matrix_to_json(m, path=None) -> str:
    """Serialize a matrix as {"dim": n, "re": [[...]], "im": [[...]]}."""
    arr = np.asarray(m.mat if hasattr(m, "mat") else m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError("matrix_to_json expects a square matrix")
    payload = {
        "dim": arr.shape[0],
        "re": [[float(v) for v in row] for row in arr.real],
        "im": [[float(v) for v in row] for row in arr.imag],
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def _matrix_from_payload(payload: dict, source: str) -> np.ndarray:
    problems = []
    if not isinstance(payload, dict):
        raise ValidationError(f"{source}: expected a JSON object")
    for field in ("dim", "re"):
        if field not in payload:
            problems.append(f"missing field '{field}'")
    if problems:
        raise ValidationError(f"{source}: " + "; ".join(problems))
    dim = payload["dim"]
    re = np.asarray(payload["re"], dtype=float)
    im_raw = payload.get("im")
    im = np.zeros_like(re) if im_raw is None else np.asarray(im_raw, dtype=float)
    if not (isinstance(dim, int) and dim >= 1):
        problems.append("field 'dim' must be a positive integer")
    if re.ndim != 2 or re.shape != (dim, dim):
        problems.append(f"field 're' must be a {dim}x{dim} array")
    if im.shape != re.shape:
        problems.append("field 'im' must match the shape of 're'")
    if problems:
        raise ValidationError(f"{source}: " + "; ".join(problems))
    return re + 1j * im


def load_matrix(path) -> HermitianOperator:
    """Load {"dim", "re", "im"} JSON and validate Hermiticity."""
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: malformed JSON ({exc})") from exc
    return HermitianOperator(_matrix_from_payload(payload, str(path)))


def load_density(path) -> DensityMatrix:
    """Load a matrix file and validate the density-matrix invariants."""
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: malformed JSON ({exc})") from exc
    return DensityMatrix(_matrix_from_payload(payload, str(path)))


def distribution_to_json(dist: JointOutcomeDistribution, path=None) -> str:
    """Serialize a joint outcome distribution in canonical order."""
    payload = {
        "n": dist.n,
        "d": dist.d,
        "entries": dist.to_json_entries(),
    }
    text = json.dumps(payload, indent=2) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def write_reports(reports: Iterable[BoundReport], path) -> dict:
    """Write one BoundReport per JSON line plus a trailing summary object.

    Returns the summary dict {"total", "passed", "vacuous"}.
    """
    reports = list(reports)
    summary = {
        "total": len(reports),
        "passed": sum(1 for r in reports if r.passed),
        "vacuous": sum(1 for r in reports if r.vacuous),
    }
    with open(path, "w") as fh:
        for rep in reports:
            fh.write(rep.to_json() + "\n")
        fh.write(json.dumps({"summary": summary}, sort_keys=True) + "\n")
    return summary


def read_reports(path) -> List[dict]:
    """Read back a JSON-lines report stream (reports + summary objects)."""
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out
