"""Dense labeled nonnegative symmetric matrices and their spectral norms.

Every matrix in this package is square, symmetric, nonnegative, and carries
one opaque byte-string label per row/column identifying the problem instance
that row represents.  Entries live in one of two modes:

  * exact mode -- an object array of ``fractions.Fraction`` values, used for
    constructions and elementwise identity checks;
  * float mode -- a ``float64`` array, used for all spectral work.

Spectral norms are computed by shifted symmetric power iteration.  For a
nonnegative symmetric matrix the spectral radius equals the largest
eigenvalue (Perron-Frobenius), so any positive shift makes the top
eigenvalue of ``M + s*I`` strictly dominant in magnitude and the iteration
converges to a nonnegative principal eigenvector.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

FLOAT_SYMMETRY_TOL = 1e-12


class MatrixError(ValueError):
    """Invalid matrix construction or mismatched operands."""


class SpectralConvergenceError(RuntimeError):
    """Power iteration hit its iteration cap before reaching tolerance."""


def _as_entry_array(rows, exact: bool) -> np.ndarray:
    if exact:
        arr = np.empty((len(rows), len(rows[0]) if len(rows) else 0), dtype=object)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                arr[i, j] = Fraction(v)
        return arr
    return np.asarray(rows, dtype=np.float64)


@dataclass(frozen=True)
class LabeledMatrix:
    """Square symmetric nonnegative matrix with per-row instance labels."""

    labels: tuple[bytes, ...]
    entries: np.ndarray
    name: str = ""

    def __post_init__(self):
        d = len(self.labels)
        if self.entries.shape != (d, d):
            raise MatrixError(
                f"{self.name or 'matrix'}: entries shape {self.entries.shape} "
                f"does not match {d} labels"
            )
        if len(set(self.labels)) != d:
            raise MatrixError(f"{self.name or 'matrix'}: labels are not pairwise distinct")
        if self.is_exact:
            if d and any(self.entries[i, j] != self.entries[j, i]
                         for i in range(d) for j in range(i)):
                raise MatrixError(f"{self.name or 'matrix'}: not symmetric")
            if d and any(v < 0 for v in self.entries.flat):
                raise MatrixError(f"{self.name or 'matrix'}: negative entry")
        else:
            if d and not np.allclose(self.entries, self.entries.T,
                                     rtol=0.0, atol=FLOAT_SYMMETRY_TOL):
                raise MatrixError(f"{self.name or 'matrix'}: not symmetric")
            if d and float(self.entries.min()) < -FLOAT_SYMMETRY_TOL:
                raise MatrixError(f"{self.name or 'matrix'}: negative entry")
        self.entries.setflags(write=False)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def is_exact(self) -> bool:
        return self.entries.dtype == object

    def to_float(self) -> np.ndarray:
        """Entries as a writable float64 array (a copy)."""
        return np.array(self.entries, dtype=np.float64)

    def entry(self, i: int, j: int):
        return self.entries[i, j]

    @classmethod
    def from_rows(cls, labels: Iterable[bytes], rows, exact: bool = False,
                  name: str = "") -> "LabeledMatrix":
        return cls(tuple(labels), _as_entry_array(rows, exact), name)

    def to_json(self) -> str:
        """Dump as ``{"dim", "labels", "entries"}``.

        Exact entries are serialized as base-10 fraction strings so they
        round-trip without loss; float entries as JSON numbers.
        """
        if self.is_exact:
            ent = [[str(self.entries[i, j]) for j in range(self.dim)]
                   for i in range(self.dim)]
        else:
            ent = [[float(v) for v in row] for row in self.entries]
        return json.dumps(
            {
                "dim": self.dim,
                "labels": [lb.decode("latin-1") for lb in self.labels],
                "entries": ent,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "LabeledMatrix":
        obj = json.loads(text)
        labels = tuple(s.encode("latin-1") for s in obj["labels"])
        rows = obj["entries"]
        exact = bool(rows) and bool(rows[0]) and isinstance(rows[0][0], str)
        return cls.from_rows(labels, rows, exact=exact)


@dataclass(frozen=True)
class SpectralResult:
    """Largest eigenvalue of a nonnegative symmetric matrix, with witness."""

    norm: float
    eigenvector: np.ndarray
    iterations: int
    residual: float

    def __post_init__(self):
        self.eigenvector.setflags(write=False)


def int_labels(n: int) -> tuple[bytes, ...]:
    """Labels ``b"1" .. b"n"`` for matrices indexed by plain integers."""
    return tuple(str(i).encode() for i in range(1, n + 1))


def power_norm(A: np.ndarray, tol: float = 1e-9, v0: np.ndarray | None = None,
               max_iterations: int | None = None, name: str = "") -> SpectralResult:
    """Power iteration on a raw float array (see :func:`spectral_norm`)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    d = A.shape[0]
    if d == 0:
        return SpectralResult(0.0, np.zeros(0), 0, 0.0)
    start = np.ones(d)
    start[0] += 1e-6
    if v0 is not None:
        v = np.maximum(np.asarray(v0, dtype=np.float64), 0.0) + 1e-8 * start
    else:
        v = start
    v /= np.linalg.norm(v)
    cap = max_iterations if max_iterations is not None else 100 * d
    Mv = A @ v
    lam = float(v @ Mv)
    residual = float(np.linalg.norm(Mv - lam * v))
    it = 0
    while residual > tol * max(lam, 1e-30):
        if it >= cap:
            raise SpectralConvergenceError(
                f"power iteration on {name or f'{d}x{d} matrix'} did not reach "
                f"tol={tol:g} after {cap} iterations (residual {residual:.3e})"
            )
        it += 1
        # Any positive shift keeps the Perron eigenvalue strictly dominant;
        # shifting by the current Rayleigh estimate also speeds up the
        # lam_min = -lam_max corner.
        w = Mv + max(lam, 1e-30) * v
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            break
        v = w / nw
        Mv = A @ v
        lam = float(v @ Mv)
        residual = float(np.linalg.norm(Mv - lam * v))
    return SpectralResult(max(lam, 0.0), v, it, residual)


def spectral_norm(M: LabeledMatrix, tol: float = 1e-9, v0: np.ndarray | None = None,
                  max_iterations: int | None = None) -> SpectralResult:
    """Largest eigenvalue and Perron vector of ``M`` by power iteration.

    The start vector is the normalized all-ones vector with a small fixed
    perturbation on the first coordinate (so it overlaps every nonnegative
    Perron vector and breaks exact-orthogonality corner cases).  ``v0``
    optionally warm-starts the iteration; it is blended with the default
    start to keep the Perron overlap nonzero.

    Converges when ``||M v - lam v|| <= tol * max(lam, tiny)`` (relative
    tolerance).  Raises :class:`SpectralConvergenceError` after
    ``100 * dim`` iterations (or ``max_iterations``).
    """
    A = M.entries if (not M.is_exact and M.entries.dtype == np.float64) else M.to_float()
    return power_norm(A, tol=tol, v0=v0, max_iterations=max_iterations,
                      name=M.name or f"{M.dim}x{M.dim} matrix")


def _require_same_labels(A: LabeledMatrix, B: LabeledMatrix) -> None:
    if A.dim != B.dim:
        raise MatrixError(f"dimension mismatch: {A.dim} vs {B.dim}")
    for i, (la, lb) in enumerate(zip(A.labels, B.labels)):
        if la != lb:
            raise MatrixError(f"label mismatch at index {i}: {la!r} vs {lb!r}")


def hadamard(A: LabeledMatrix, B: LabeledMatrix) -> LabeledMatrix:
    """Elementwise product; operands must agree in dim and label order."""
    _require_same_labels(A, B)
    if A.is_exact and B.is_exact:
        ent = A.entries * B.entries
    else:
        a = A.entries if not A.is_exact else A.to_float()
        b = B.entries if not B.is_exact else B.to_float()
        ent = a * b
    return LabeledMatrix(A.labels, ent, name=f"({A.name or 'A'}∘{B.name or 'B'})")


def tensor(A: LabeledMatrix, B: LabeledMatrix) -> LabeledMatrix:
    """Kronecker product; output label (i, j) is concat(label_A[i], label_B[j])."""
    labels = tuple(la + lb for la in A.labels for lb in B.labels)
    if A.is_exact and B.is_exact:
        ent = np.kron(A.entries, B.entries)
    else:
        a = A.entries if not A.is_exact else A.to_float()
        b = B.entries if not B.is_exact else B.to_float()
        ent = np.kron(a, b)
    return LabeledMatrix(labels, ent, name=f"({A.name or 'A'}⊗{B.name or 'B'})")


def rayleigh_quotient(M: LabeledMatrix, v: Sequence[float]) -> float:
    """(v·Mv)/(v·v) — a lower bound on the spectral norm for any probe v."""
    x = np.asarray(v, dtype=np.float64)
    A = M.entries if not M.is_exact else M.to_float()
    return float(x @ (A @ x)) / float(x @ x)
