"""Orthogonal Procrustes alignment between two embedding spaces."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import matrix_values
from .errors import ShapeMismatch


@dataclass(frozen=True)
class ProcrustesAlignment:
    """Orthogonal map from one configuration's space onto another's.

    ``q`` is d x d orthogonal; ``residual`` is the Frobenius norm of
    source @ q - target. ``degenerate`` flags a rank-deficient cross
    matrix, where the optimum is non-unique and q is the deterministic
    choice made by the SVD's sign convention.
    """

    q: np.ndarray
    residual: float
    degenerate: bool = False


def procrustes_align(source, target) -> ProcrustesAlignment:
    """Solve argmin over orthogonal Q of ||source @ Q - target||_F.

    The optimum is U V^T from the SVD of the d x d cross matrix
    source^T @ target, which costs O(|V| d^2 + d^3) and never forms a
    |V| x |V| product.

    Parameters
    ----------
    source, target : matrix-like of identical shape (|V|, d)

    Raises
    ------
    ShapeMismatch
        If the two inputs differ in shape.
    """
    a = matrix_values(source)
    b = matrix_values(target)
    if a.shape != b.shape:
        raise ShapeMismatch(
            f"cannot align shapes {a.shape} and {b.shape}; equal rows and "
            "columns are required"
        )
    cross = a.T @ b
    u, s, vt = np.linalg.svd(cross)
    q = u @ vt
    residual = float(np.linalg.norm(a @ q - b))
    if s.size == 0 or s[0] == 0.0:
        degenerate = True
    else:
        # Same rank tolerance as numpy's matrix_rank default.
        degenerate = bool(s[-1] <= s[0] * max(cross.shape) * np.finfo(np.float64).eps)
    return ProcrustesAlignment(q=q, residual=residual, degenerate=degenerate)
