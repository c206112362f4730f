"""Dense SDP instances, the interior-point solver front end, and instance files.

The primal problem is ``min C.X  s.t.  A_i.X = b_i, X >= 0`` and the dual is
``max b.y  s.t.  Z = C - sum_i y_i A_i >= 0``.

Instance files are JSON documents with keys ``n``, ``m``, ``C``, ``A`` and
``b``; every matrix is a row-major list of ``n*n`` numbers.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Union

import numpy as np

from . import kernels
from .linalg import RankReport, inner, numerical_rank, sym_matrix


class InstanceFormatError(ValueError):
    """An instance document is malformed."""


class SolveStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    MAX_ITER = "max_iter"
    NUMERICAL_FAILURE = "numerical_failure"
    INFEASIBLE_SUSPECTED = "infeasible_suspected"


_STATUS = {
    kernels.STATUS_OPTIMAL: SolveStatus.OPTIMAL,
    kernels.STATUS_MAX_ITER: SolveStatus.MAX_ITER,
    kernels.STATUS_NUMERICAL_FAILURE: SolveStatus.NUMERICAL_FAILURE,
    kernels.STATUS_INFEASIBLE: SolveStatus.INFEASIBLE_SUSPECTED,
}


@dataclass(frozen=True)
class SdpInstance:
    C: np.ndarray
    A: np.ndarray  # shape (m, n, n)
    b: np.ndarray

    def __post_init__(self):
        C = sym_matrix(self.C)
        A = np.array(self.A, dtype=float)
        if A.ndim == 2 and A.shape[0] == 0:
            A = A.reshape(0, *C.shape)
        if A.ndim != 3 or A.shape[1:] != C.shape:
            raise ValueError(f"A must have shape (m, {C.shape[0]}, {C.shape[0]}), got {A.shape}")
        A = np.array([sym_matrix(a) for a in A]).reshape(A.shape)
        b = np.array(self.b, dtype=float).reshape(-1)
        if b.shape[0] != A.shape[0]:
            raise ValueError(f"b has {b.shape[0]} entries but there are {A.shape[0]} constraints")
        for arr in (C, A, b):
            arr.setflags(write=False)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.C.shape[0]

    @property
    def m(self) -> int:
        return self.A.shape[0]

    def slack(self, y) -> np.ndarray:
        """``Z = C - sum_i y_i A_i``."""
        return self.C - np.tensordot(np.asarray(y, dtype=float), self.A, axes=1)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "C": self.C.ravel().tolist(),
            "A": [a.ravel().tolist() for a in self.A],
            "b": self.b.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SdpInstance":
        try:
            n, m = int(doc["n"]), int(doc["m"])
            C = np.asarray(doc["C"], dtype=float)
            A = np.asarray(doc["A"], dtype=float)
            b = np.asarray(doc["b"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceFormatError(f"bad instance document: {exc}") from exc
        if n < 1 or m < 0:
            raise InstanceFormatError(f"invalid sizes n={n}, m={m}")
        if C.size != n * n or A.size != m * n * n or b.size != m:
            raise InstanceFormatError("array sizes do not match n and m")
        try:
            return cls(C.reshape(n, n), A.reshape(m, n, n), b)
        except ValueError as exc:
            raise InstanceFormatError(str(exc)) from exc


def dumps_instance(inst: SdpInstance) -> str:
    return json.dumps(inst.to_dict(), indent=2)


def loads_instance(text: str) -> SdpInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InstanceFormatError("instance document must be a JSON object")
    return SdpInstance.from_dict(doc)


def load_instance(source: Union[str, Path]) -> SdpInstance:
    """Load an instance file, or a bundled instance by name (e.g. ``example22``)."""
    path = Path(source)
    if not path.exists() and str(source) in bundled_instances():
        text = resources.files("sdpdegree.data").joinpath(f"{source}.json").read_text()
    else:
        text = path.read_text()
    return loads_instance(text)


def save_instance(inst: SdpInstance, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_instance(inst) + "\n")


def bundled_instances() -> list[str]:
    root = resources.files("sdpdegree.data")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def example22() -> SdpInstance:
    """The 4x4, three-constraint LMI ``max y1+y2+y3 s.t. A(y) >= 0`` with ``C = I``."""
    return load_instance("example22")


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-8
    max_iter: int = 100
    step_factor: float = 0.98


@dataclass(frozen=True)
class SdpSolution:
    X: np.ndarray
    y: np.ndarray
    Z: np.ndarray
    gap: float
    primal_residual: float
    dual_residual: float
    iterations: int
    status: SolveStatus
    primal_objective: float
    dual_objective: float

    @property
    def optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL

    def ranks(self, rel_tol: float = 1e-6) -> tuple[RankReport, RankReport]:
        """Rank reports for ``(X, Z)``."""
        return numerical_rank(self.X, rel_tol), numerical_rank(self.Z, rel_tol)


def solve_sdp(inst: SdpInstance, opts: SolverOptions = SolverOptions()) -> SdpSolution:
    """Solve the primal-dual pair with HKM/Mehrotra path following.

    Never raises on numerical trouble; inspect ``status`` instead.
    """
    X, y, Z, it, code, gap, pres, dres = kernels.hkm_solve(
        inst.C, inst.A, inst.b, opts.tol, opts.max_iter, opts.step_factor
    )
    X, y = np.asarray(X), np.asarray(y)
    Z = inst.slack(y)
    return SdpSolution(
        X=X, y=y, Z=Z,
        gap=float(gap), primal_residual=float(pres), dual_residual=float(dres),
        iterations=int(it), status=_STATUS[int(code)],
        primal_objective=inner(inst.C, X), dual_objective=float(inst.b @ y),
    )
