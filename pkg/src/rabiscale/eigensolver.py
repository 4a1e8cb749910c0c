"""Dense symmetric eigendecomposition with an accuracy contract."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .model import OperatorMatrix

MAX_DIM = 8192
RESIDUAL_BOUND = 1e-9
ORTHONORMALITY_TOL = 1e-10
DEGENERACY_TOL = 1e-10
# clusters of levels closer than this (relative to ||H||_F) get Rayleigh-Ritz refinement
CLUSTER_TOL = 1e-6
REFINE_LEVELS = 8
_SPLITTER = 2.0**27 + 1.0


class EigensolverError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues with orthonormal eigenvectors (columns).

    ``residual_bound`` is the measured ``max_k ||H v_k - E_k v_k|| / ||H||_F``.
    """

    values: np.ndarray
    vectors: np.ndarray
    residual_bound: float
    dim: int

    def __len__(self):
        return self.dim


class GroundState(NamedTuple):
    energy: float
    vector: np.ndarray
    near_degenerate: bool


def _as_array(H) -> np.ndarray:
    entries = H.entries if isinstance(H, OperatorMatrix) else np.asarray(H, dtype=np.float64)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise ValueError(f"matrix must be square, got shape {entries.shape}")
    if entries.shape[0] > MAX_DIM:
        raise ValueError(f"dimension {entries.shape[0]} exceeds cap {MAX_DIM}")
    if not np.array_equal(entries, entries.T):
        raise ValueError("matrix is not symmetric")
    return entries


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive.

    Ties between equal magnitudes go to the lowest row index.
    """
    vectors = np.array(vectors, dtype=np.float64, copy=True)
    if vectors.ndim == 1:
        return fix_signs(vectors[:, None])[:, 0]
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def _two_prod(a, b):
    """Error-free product: ``a * b == p + e`` exactly (Dekker)."""
    p = a * b
    c = _SPLITTER * a
    a_hi = c - (c - a)
    a_lo = a - a_hi
    c = _SPLITTER * b
    b_hi = c - (c - b)
    b_lo = b - b_hi
    e = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    return p, e


def _shifted_form(rows, cols, vals, shift, v, w) -> float:
    """Correctly rounded ``v^T (H - shift I) w`` for sparse-listed ``H``."""
    t, e1 = _two_prod(vals, w[cols])
    vi = v[rows]
    p1, e2 = _two_prod(vi, t)
    p2, e3 = _two_prod(vi, e1)
    d, e4 = _two_prod(v, w)
    q1, e5 = _two_prod(-shift * np.ones_like(d), d)
    q2, e6 = _two_prod(-shift * np.ones_like(e4), e4)
    return math.fsum(np.concatenate([p1, e2, p2, e3, q1, e5, q2, e6]))


def _refine_clusters(entries, values, vectors, scale):
    """Rayleigh-Ritz inside clusters of nearly degenerate low-lying levels.

    The eigenvectors of a tight cluster are only determined up to a rotation
    of size ``eps ||H|| / gap`` by a backward-stable solver; the subspace they
    span is accurate. Re-diagonalizing the exactly evaluated projection of
    ``H`` onto that subspace fixes the rotation and the Ritz values.
    """
    top = min(REFINE_LEVELS, len(values))
    if top < 2:
        return values, vectors
    rows, cols = np.nonzero(entries)
    vals = entries[rows, cols]
    start = 0
    for i in range(1, top + 1):
        closes = i == top or values[i] - values[i - 1] >= CLUSTER_TOL * scale
        if not closes:
            continue
        if i - start > 1:
            block = slice(start, i)
            V = vectors[:, block]
            shift = float(values[start])
            k = V.shape[1]
            P = np.empty((k, k))
            for a in range(k):
                for b in range(a, k):
                    P[a, b] = P[b, a] = _shifted_form(rows, cols, vals, shift, V[:, a], V[:, b])
            ritz, rotation = np.linalg.eigh(P)
            vectors[:, block] = V @ rotation
            values[block] = shift + ritz
        start = i
    order = np.argsort(values, kind="stable")
    return values[order], vectors[:, order]


def eigh(H, refine: bool = True) -> Spectrum:
    """Full spectrum of a real symmetric matrix.

    With ``refine`` (default) nearly degenerate clusters among the lowest
    levels are re-resolved by an exactly rounded Rayleigh-Ritz step.

    Raises
    ------
    ValueError
        If the matrix is not symmetric or is larger than ``MAX_DIM``.
    EigensolverError
        If the residual or orthonormality contract is violated.
    """
    entries = _as_array(H)
    dim = entries.shape[0]
    values, vectors = scipy.linalg.eigh(entries, driver="evd", check_finite=True)
    scale = float(np.linalg.norm(entries))
    if refine and scale > 0:
        values, vectors = _refine_clusters(entries, values, vectors, scale)
    vectors = fix_signs(vectors)

    if scale == 0.0:
        residual = 0.0
    else:
        residual = float(np.max(np.linalg.norm(entries @ vectors - vectors * values, axis=0)) / scale)
    gram_error = float(np.max(np.abs(vectors.T @ vectors - np.eye(dim)))) if dim else 0.0
    if residual > RESIDUAL_BOUND or gram_error > ORTHONORMALITY_TOL:
        raise EigensolverError(
            f"accuracy contract violated: residual {residual:.3g}, orthonormality {gram_error:.3g}")
    return Spectrum(values=values, vectors=vectors, residual_bound=residual, dim=dim)


def ground(H) -> GroundState:
    """Lowest eigenpair of ``H``.

    The returned vector is normalized with its largest-magnitude component
    positive. ``near_degenerate`` is set when the first gap is below
    ``1e-10 * ||H||_F``; the lower-index eigenvector is returned in that case.
    """
    spectrum = eigh(H)
    return ground_of(spectrum, H)


def ground_of(spectrum: Spectrum, H=None) -> GroundState:
    values = spectrum.values
    scale = 1.0
    if H is not None:
        entries = H.entries if isinstance(H, OperatorMatrix) else np.asarray(H)
        scale = float(np.linalg.norm(entries)) or 1.0
    near = len(values) > 1 and (values[1] - values[0]) < DEGENERACY_TOL * scale
    return GroundState(float(values[0]), spectrum.vectors[:, 0].copy(), bool(near))


def lowest(H, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Lowest ``count`` eigenpairs only (optional partial solve)."""
    entries = _as_array(H)
    count = min(count, entries.shape[0])
    values, vectors = scipy.linalg.eigh(entries, subset_by_index=(0, count - 1))
    return values, fix_signs(vectors)
