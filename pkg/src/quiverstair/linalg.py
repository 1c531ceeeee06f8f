"""Dense complex-matrix kernel: SVD-backed rank decisions and the unitary
compressions every reduction step in this package is built from.

All routines accept matrices with zero rows or zero columns.  A ``p x 0`` or
``0 x q`` matrix is the unique matrix of that size; it represents the linear
map ``0 -> C^p`` or ``C^q -> 0`` and counts as a zero matrix.  Degenerate
inputs yield empty/identity transforms and rank 0 without caller-side special
cases.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ValidationError

__all__ = [
    "TolerancePolicy",
    "DEFAULT_TOL",
    "VERTICAL",
    "HORIZONTAL",
    "as_matrix",
    "block_diag",
    "f_block",
    "g_block",
    "jordan_block",
    "svd",
    "svd_inverse",
    "singular_values",
    "numerical_rank",
    "row_compress",
    "col_compress",
    "two_sided_reduce",
    "staircase_reduce",
    "staircase_zero_mask",
    "unitarity_defect",
]

VERTICAL = "vertical"
HORIZONTAL = "horizontal"


def as_matrix(a, *, check_finite: bool = False) -> np.ndarray:
    """Coerce ``a`` to a 2-D complex128 ndarray."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValidationError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if check_finite and m.size and not np.all(np.isfinite(m)):
        raise ValidationError("matrix contains non-finite entries")
    return m


def block_diag(*mats: np.ndarray) -> np.ndarray:
    """Block-diagonal stack of complex matrices, degenerate sizes included."""
    mats = [as_matrix(m) for m in mats]
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = np.zeros((rows, cols), dtype=np.complex128)
    r = c = 0
    for m in mats:
        out[r : r + m.shape[0], c : c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def f_block(n: int) -> np.ndarray:
    """The ``(n-1) x n`` matrix with ones on the main diagonal.

    For ``n = 1`` this is the unique ``0 x 1`` matrix.
    """
    if n < 1:
        raise ValidationError(f"f_block needs n >= 1, got {n}")
    out = np.zeros((n - 1, n), dtype=np.complex128)
    for i in range(n - 1):
        out[i, i] = 1.0
    return out


def g_block(n: int) -> np.ndarray:
    """The ``(n-1) x n`` matrix with ones on the superdiagonal."""
    if n < 1:
        raise ValidationError(f"g_block needs n >= 1, got {n}")
    out = np.zeros((n - 1, n), dtype=np.complex128)
    for i in range(n - 1):
        out[i, i + 1] = 1.0
    return out


def jordan_block(n: int, lam: complex) -> np.ndarray:
    """The ``n x n`` upper Jordan block with eigenvalue ``lam``."""
    if n < 0:
        raise ValidationError(f"jordan_block needs n >= 0, got {n}")
    out = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        out[i, i] = lam
        if i + 1 < n:
            out[i, i + 1] = 1.0
    return out


@dataclass(frozen=True)
class TolerancePolicy:
    """Rank-decision thresholds.

    The threshold for a matrix ``A`` is ``max(abs_floor, rel_factor *
    sigma_max(A))`` with ``sigma_max`` of an empty matrix taken as 0.  Every
    reduction reports the threshold it used so borderline decisions can be
    audited.
    """

    abs_floor: float = 1e-12
    rel_factor: float = 1e-8

    def __post_init__(self):
        if self.abs_floor < 0 or self.rel_factor < 0:
            raise ValidationError("tolerance parameters must be nonnegative")

    def from_sigma(self, sigma_max: float) -> float:
        return max(self.abs_floor, self.rel_factor * float(sigma_max))

    def threshold(self, a) -> float:
        s = singular_values(a)
        return self.from_sigma(s[0] if s.size else 0.0)


DEFAULT_TOL = TolerancePolicy()


def svd(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full SVD ``a = u @ diag(s) @ vh`` with square unitary ``u`` and ``vh``.

    ``s`` has ``min(rows, cols)`` nonincreasing entries.  A convergence
    failure in the underlying solver is reported as :class:`NumericError`
    with the matrix norm attached.
    """
    m = as_matrix(a)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"SVD failed to converge on a {m.shape[0]}x{m.shape[1]} matrix "
            f"with Frobenius norm {np.linalg.norm(m):.6g}: {exc}"
        ) from exc
    return u, s, vh


def singular_values(a) -> np.ndarray:
    m = as_matrix(a)
    if min(m.shape) == 0:
        return np.zeros(0)
    try:
        return np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"SVD failed to converge on a {m.shape[0]}x{m.shape[1]} matrix "
            f"with Frobenius norm {np.linalg.norm(m):.6g}: {exc}"
        ) from exc


def svd_inverse(a, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Inverse of a square matrix via SVD, rejecting numerically singular input."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValidationError(f"cannot invert a {m.shape[0]}x{m.shape[1]} matrix")
    if m.shape[0] == 0:
        return m.copy()
    u, s, vh = svd(m)
    tau = tol.from_sigma(s[0])
    if s[-1] <= tau:
        raise ValidationError(
            f"matrix is numerically singular: sigma_min={s[-1]:.6g} <= tau={tau:.6g}"
        )
    return vh.conj().T @ np.diag(1.0 / s) @ u.conj().T


def _rank_from_sigma(s: np.ndarray, tol: TolerancePolicy, threshold) -> tuple[int, float]:
    tau = tol.from_sigma(s[0] if s.size else 0.0) if threshold is None else float(threshold)
    return int(np.sum(s > tau)), tau


def numerical_rank(a, tol: TolerancePolicy = DEFAULT_TOL, *, threshold: float | None = None) -> int:
    """Number of singular values above the rank threshold.

    ``threshold`` overrides the per-matrix threshold; callers reducing a
    strip of a larger matrix pass the enclosing matrix's threshold so that
    strip-local noise is not mistaken for signal.
    """
    k, _ = _rank_from_sigma(singular_values(a), tol, threshold)
    return k


def row_compress(
    a, tol: TolerancePolicy = DEFAULT_TOL, *, threshold: float | None = None
) -> tuple[np.ndarray, int]:
    """Unitary ``q`` with ``q @ a = [0; r]``, ``r`` of full row rank ``k``.

    The zero block sits on top and has ``rows - k`` rows.
    """
    m = as_matrix(a)
    u, s, _ = svd(m)
    k, _ = _rank_from_sigma(s, tol, threshold)
    order = list(range(k, m.shape[0])) + list(range(k))
    q = u[:, order].conj().T
    return q, k


def col_compress(
    a, tol: TolerancePolicy = DEFAULT_TOL, *, threshold: float | None = None
) -> tuple[np.ndarray, int]:
    """Unitary ``w`` with ``a @ w = [c | 0]``, ``c`` of full column rank ``k``."""
    m = as_matrix(a)
    _, s, vh = svd(m)
    k, _ = _rank_from_sigma(s, tol, threshold)
    return vh.conj().T, k


def two_sided_reduce(
    a, tol: TolerancePolicy = DEFAULT_TOL, *, threshold: float | None = None
) -> tuple[np.ndarray, np.ndarray, int]:
    """Unitary ``p``, ``s`` with ``p^H @ a @ s = [[0, h], [0, 0]]``.

    The ``k x k`` block ``h`` is nonsingular (its smallest singular value
    exceeds the threshold) and sits in the top-right corner.
    """
    m = as_matrix(a)
    u, sig, vh = svd(m)
    k, _ = _rank_from_sigma(sig, tol, threshold)
    n = m.shape[1]
    order = list(range(k, n)) + list(range(k))
    s_mat = vh.conj().T[:, order]
    return u, s_mat, k


def staircase_reduce(
    a,
    strip_sizes,
    strip_axis: str,
    tol: TolerancePolicy = DEFAULT_TOL,
    *,
    threshold: float | None = None,
) -> tuple[np.ndarray, list[np.ndarray], list[int]]:
    """Reduce ``a`` to echelon-of-nonsingular-blocks form, strip by strip.

    ``strip_sizes`` partitions the columns (``strip_axis="vertical"``) or the
    rows (``"horizontal"``).  Vertical strips are processed left to right and
    claim rows from the top; horizontal strips are processed bottom-up and
    claim columns from the right.  Each strip ``i`` receives a nonsingular
    ``l_i x l_i`` block positioned rightmost in the strip (vertical) or at
    the top of the strip (horizontal); zeros fill the rest of the pattern,
    see :func:`staircase_zero_mask`.

    Returns ``(outer, per_strip, block_sizes)``.  The reduced matrix is

    - vertical:   ``outer @ a @ block_diag(*per_strip)``
    - horizontal: ``block_diag(*per_strip) @ a @ outer``

    so ``per_strip`` transforms act only within their strip and ``outer``
    acts on the orthogonal axis.  One rank threshold, computed from the full
    matrix, is shared by all strips.
    """
    m = as_matrix(a)
    sizes = [int(x) for x in strip_sizes]
    if any(x < 0 for x in sizes):
        raise ValidationError("strip sizes must be nonnegative")
    if strip_axis not in (VERTICAL, HORIZONTAL):
        raise ValidationError(f"unknown strip axis {strip_axis!r}")
    along = m.shape[1] if strip_axis == VERTICAL else m.shape[0]
    if sum(sizes) != along:
        raise ValidationError(
            f"strip sizes sum to {sum(sizes)}, expected {along} for {strip_axis} strips"
        )
    tau = tol.threshold(m) if threshold is None else float(threshold)

    work = m.copy()
    ls = [0] * len(sizes)
    per_strip: list[np.ndarray] = [np.zeros((0, 0))] * len(sizes)
    bounds = np.concatenate([[0], np.cumsum(sizes)]).astype(int)

    if strip_axis == VERTICAL:
        outer = np.eye(m.shape[0], dtype=np.complex128)
        pinned = 0
        for i, sz in enumerate(sizes):
            c0, c1 = bounds[i], bounds[i + 1]
            p, s_mat, k = two_sided_reduce(work[pinned:, c0:c1], tol, threshold=tau)
            work[pinned:, :] = p.conj().T @ work[pinned:, :]
            work[:, c0:c1] = work[:, c0:c1] @ s_mat
            outer[pinned:, :] = p.conj().T @ outer[pinned:, :]
            per_strip[i] = s_mat
            ls[i] = k
            pinned += k
    else:
        outer = np.eye(m.shape[1], dtype=np.complex128)
        avail = m.shape[1]
        for i in range(len(sizes) - 1, -1, -1):
            r0, r1 = bounds[i], bounds[i + 1]
            p, s_mat, k = two_sided_reduce(work[r0:r1, :avail], tol, threshold=tau)
            work[r0:r1, :] = p.conj().T @ work[r0:r1, :]
            work[:, :avail] = work[:, :avail] @ s_mat
            outer[:, :avail] = outer[:, :avail] @ s_mat
            per_strip[i] = p.conj().T
            ls[i] = k
            avail -= k
    return outer, per_strip, ls


def staircase_zero_mask(shape, strip_sizes, block_sizes, strip_axis: str) -> np.ndarray:
    """Boolean mask of the entries the staircase form requires to be zero."""
    rows, cols = shape
    sizes = [int(x) for x in strip_sizes]
    ls = [int(x) for x in block_sizes]
    if len(sizes) != len(ls):
        raise ValidationError("strip_sizes and block_sizes must have equal length")
    mask = np.zeros((rows, cols), dtype=bool)
    bounds = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    if strip_axis == VERTICAL:
        band = np.concatenate([[0], np.cumsum(ls)]).astype(int)
        for i in range(len(sizes)):
            c0, c1 = bounds[i], bounds[i + 1]
            b0, b1 = band[i], band[i + 1]
            mask[b1:, c0:c1] = True
            mask[b0:b1, c0 : c1 - ls[i]] = True
    elif strip_axis == HORIZONTAL:
        tail = np.concatenate([np.cumsum(ls[::-1])[::-1], [0]]).astype(int)
        for i in range(len(sizes)):
            r0, r1 = bounds[i], bounds[i + 1]
            e_i = cols - tail[i + 1]
            mask[r0:r1, : e_i - ls[i]] = True
            mask[r0 + ls[i] : r1, :e_i] = True
    else:
        raise ValidationError(f"unknown strip axis {strip_axis!r}")
    return mask


def unitarity_defect(q) -> float:
    """Frobenius distance of ``q^H q`` from the identity."""
    m = as_matrix(q)
    n = m.shape[1]
    return float(np.linalg.norm(m.conj().T @ m - np.eye(n)))
