"""Chain and cycle quivers, their matrix representations, and the canonical
indecomposable building blocks.

Vertices are numbered ``1..t``.  Arrow ``i`` joins vertex ``i`` and vertex
``[i+1]``, where ``[n]`` is the unique value in ``1..t`` congruent to ``n``
mod ``t`` (chains have arrows ``1..t-1`` and no wraparound).  The orientation
flag ``">"`` (clockwise) means the arrow points ``i -> [i+1]``; ``"<"``
means ``[i+1] -> i``.  The matrix on an arrow ``u -> v`` has ``dims[v]``
rows and ``dims[u]`` columns, so degenerate ``p x 0`` / ``0 x q`` matrices
appear whenever a vertex has dimension zero.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import (
    DEFAULT_TOL,
    TolerancePolicy,
    as_matrix,
    singular_values,
    svd_inverse,
)

__all__ = [
    "CHAIN",
    "CYCLE",
    "CLOCKWISE",
    "COUNTERCLOCKWISE",
    "QuiverShape",
    "chain_shape",
    "cycle_shape",
    "Representation",
    "zero_representation",
    "representation_scale",
    "representation_threshold",
    "direct_sum",
    "transpose_rep",
    "apply_isomorphism",
    "iso_residual",
    "make_L",
    "make_G",
    "walk_positions",
    "g_label_dims",
    "is_regular",
]

CHAIN = "chain"
CYCLE = "cycle"
CLOCKWISE = ">"
COUNTERCLOCKWISE = "<"


@dataclass(frozen=True)
class QuiverShape:
    """A chain or cycle quiver: vertex count plus per-arrow orientations."""

    kind: str
    t: int
    orientations: str

    def __post_init__(self):
        if self.kind not in (CHAIN, CYCLE):
            raise ValidationError(f"unknown quiver kind {self.kind!r}")
        if self.kind == CHAIN and self.t < 1:
            raise ValidationError("a chain needs at least one vertex")
        if self.kind == CYCLE and self.t < 2:
            raise ValidationError("a cycle needs at least two vertices")
        if len(self.orientations) != self.arrow_count:
            raise ValidationError(
                f"expected {self.arrow_count} orientation flags, got {len(self.orientations)}"
            )
        if any(c not in (CLOCKWISE, COUNTERCLOCKWISE) for c in self.orientations):
            raise ValidationError("orientations must consist of '>' and '<'")

    @property
    def arrow_count(self) -> int:
        return self.t - 1 if self.kind == CHAIN else self.t

    def wrap(self, n: int) -> int:
        """The representative of ``n`` in ``1..t``."""
        return 1 + (n - 1) % self.t

    def is_clockwise(self, arrow: int) -> bool:
        self._check_arrow(arrow)
        return self.orientations[arrow - 1] == CLOCKWISE

    def arrow_ends(self, arrow: int) -> tuple[int, int]:
        """Source and target vertex of the given arrow (1-based)."""
        self._check_arrow(arrow)
        a, b = arrow, arrow + 1 if self.kind == CHAIN else self.wrap(arrow + 1)
        return (a, b) if self.orientations[arrow - 1] == CLOCKWISE else (b, a)

    def reversed(self) -> "QuiverShape":
        flipped = "".join(
            CLOCKWISE if c == COUNTERCLOCKWISE else COUNTERCLOCKWISE for c in self.orientations
        )
        return QuiverShape(self.kind, self.t, flipped)

    def _check_arrow(self, arrow: int):
        if not 1 <= arrow <= self.arrow_count:
            raise ValidationError(f"arrow index {arrow} out of range 1..{self.arrow_count}")


def chain_shape(t: int, orientations: str) -> QuiverShape:
    return QuiverShape(CHAIN, t, orientations)


def cycle_shape(t: int, orientations: str) -> QuiverShape:
    return QuiverShape(CYCLE, t, orientations)


@dataclass(frozen=True)
class Representation:
    """A matrix representation: one complex matrix per arrow.

    Matrices are stored read-only; operations return new representations.
    """

    shape: QuiverShape
    dims: tuple[int, ...]
    matrices: tuple[np.ndarray, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != self.shape.t or any(d < 0 for d in dims):
            raise ValidationError(
                f"need {self.shape.t} nonnegative dimensions, got {self.dims!r}"
            )
        if len(self.matrices) != self.shape.arrow_count:
            raise ValidationError(
                f"need {self.shape.arrow_count} matrices, got {len(self.matrices)}"
            )
        mats = []
        for i, raw in enumerate(self.matrices, start=1):
            m = as_matrix(raw, check_finite=True).copy()
            u, v = self.shape.arrow_ends(i)
            want = (dims[v - 1], dims[u - 1])
            if m.shape != want:
                raise ValidationError(
                    f"arrow {i} ({u}->{v}): matrix is {m.shape[0]}x{m.shape[1]}, "
                    f"expected {want[0]}x{want[1]}"
                )
            m.setflags(write=False)
            mats.append(m)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrices", tuple(mats))

    def matrix(self, arrow: int) -> np.ndarray:
        """Matrix on the given arrow (1-based)."""
        self.shape._check_arrow(arrow)
        return self.matrices[arrow - 1]


def zero_representation(shape: QuiverShape) -> Representation:
    dims = (0,) * shape.t
    mats = tuple(np.zeros((0, 0)) for _ in range(shape.arrow_count))
    return Representation(shape, dims, mats)


def representation_scale(rep: Representation) -> float:
    """Largest singular value over all matrices of the representation."""
    best = 0.0
    for m in rep.matrices:
        s = singular_values(m)
        if s.size:
            best = max(best, float(s[0]))
    return best


def representation_threshold(rep: Representation, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """One rank threshold for the whole representation.

    Computed from the largest singular value over all arrows, so that a strip
    consisting purely of noise is not promoted to full rank by its own tiny
    scale.
    """
    return tol.from_sigma(representation_scale(rep))


def direct_sum(a: Representation, b: Representation) -> Representation:
    """Vertexwise direct sum; matrices are stacked block-diagonally.

    Degenerate blocks follow the ``p x 0`` / ``0 x q`` stacking conventions,
    e.g. ``M ⊕ 0_{m x 0}`` appends ``m`` zero rows.
    """
    if a.shape != b.shape:
        raise ValidationError("direct_sum requires identical quiver shapes")
    dims = tuple(x + y for x, y in zip(a.dims, b.dims))
    mats = []
    for ma, mb in zip(a.matrices, b.matrices):
        out = np.zeros((ma.shape[0] + mb.shape[0], ma.shape[1] + mb.shape[1]), dtype=np.complex128)
        out[: ma.shape[0], : ma.shape[1]] = ma
        out[ma.shape[0] :, ma.shape[1] :] = mb
        mats.append(out)
    return Representation(a.shape, dims, tuple(mats))


def transpose_rep(a: Representation) -> Representation:
    """Transpose every matrix (no conjugation) and flip every arrow."""
    mats = tuple(m.T.copy() for m in a.matrices)
    return Representation(a.shape.reversed(), a.dims, mats)


def _check_transforms(a: Representation, transforms) -> list[np.ndarray]:
    if len(transforms) != a.shape.t:
        raise ValidationError(f"need {a.shape.t} vertex transforms, got {len(transforms)}")
    out = []
    for v, s in enumerate(transforms, start=1):
        m = as_matrix(s)
        if m.shape != (a.dims[v - 1], a.dims[v - 1]):
            raise ValidationError(
                f"vertex {v}: transform is {m.shape[0]}x{m.shape[1]}, "
                f"expected {a.dims[v - 1]}x{a.dims[v - 1]}"
            )
        out.append(m)
    return out


def apply_isomorphism(
    a: Representation, transforms, tol: TolerancePolicy = DEFAULT_TOL
) -> Representation:
    """Change basis at every vertex: arrow ``u -> v`` maps to ``S_v A S_u^{-1}``.

    Inverses are computed by SVD; a numerically singular transform is
    rejected.
    """
    mats_s = _check_transforms(a, transforms)
    inverses = [svd_inverse(s, tol) for s in mats_s]
    new = []
    for i in range(1, a.shape.arrow_count + 1):
        u, v = a.shape.arrow_ends(i)
        new.append(mats_s[v - 1] @ a.matrices[i - 1] @ inverses[u - 1])
    return Representation(a.shape, a.dims, tuple(new))


def iso_residual(a: Representation, b: Representation, transforms) -> float:
    """``max_arrows || S_v A_arrow - B_arrow S_u ||_F`` for the commuting squares."""
    if a.shape != b.shape or a.dims != b.dims:
        raise ValidationError("iso_residual requires equal shapes and dimensions")
    mats_s = _check_transforms(a, transforms)
    worst = 0.0
    for i in range(1, a.shape.arrow_count + 1):
        u, v = a.shape.arrow_ends(i)
        d = mats_s[v - 1] @ a.matrices[i - 1] - b.matrices[i - 1] @ mats_s[u - 1]
        worst = max(worst, float(np.linalg.norm(d)))
    return worst


def make_L(i: int, j: int, shape: QuiverShape) -> Representation:
    """Interval indecomposable of a chain: dimension 1 on vertices ``i..j``.

    Arrows strictly inside the interval carry ``I_1``; all other matrices are
    the degenerate ``0x0``, ``1x0`` or ``0x1`` zero maps the dimensions
    dictate.
    """
    if shape.kind != CHAIN:
        raise ValidationError("make_L needs a chain shape")
    if not 1 <= i <= j <= shape.t:
        raise ValidationError(f"need 1 <= i <= j <= {shape.t}, got ({i}, {j})")
    dims = tuple(1 if i <= v <= j else 0 for v in range(1, shape.t + 1))
    mats = []
    for a in range(1, shape.t):
        u, v = shape.arrow_ends(a)
        if i <= a and a + 1 <= j:
            mats.append(np.eye(1, dtype=np.complex128))
        else:
            mats.append(np.zeros((dims[v - 1], dims[u - 1]), dtype=np.complex128))
    return Representation(shape, dims, tuple(mats))


def walk_positions(shape: QuiverShape, l: int, r: int) -> dict[int, list[int]]:
    """Walk indices ``l..r`` grouped by the cycle vertex they land on.

    Within each vertex the indices appear in increasing order; that order is
    the basis order used by :func:`make_G`.
    """
    if shape.kind != CYCLE:
        raise ValidationError("walk_positions needs a cycle shape")
    if not 1 <= l <= shape.t:
        raise ValidationError(f"walk start {l} out of range 1..{shape.t}")
    if r < l:
        raise ValidationError(f"walk end {r} must be >= start {l}")
    pos: dict[int, list[int]] = {v: [] for v in range(1, shape.t + 1)}
    for q in range(l, r + 1):
        pos[shape.wrap(q)].append(q)
    return pos


def g_label_dims(shape: QuiverShape, l: int, r: int) -> tuple[int, ...]:
    pos = walk_positions(shape, l, r)
    return tuple(len(pos[v]) for v in range(1, shape.t + 1))


def make_G(l: int, r: int, shape: QuiverShape) -> Representation:
    """Cycle indecomposable built from the clockwise walk ``l -> l+1 -> ... -> r``.

    The space at vertex ``v`` is spanned by the walk indices lying over ``v``
    (increasing order); each walk step contributes a single 1 entry to the
    matrix of the arrow it traverses, in the direction that arrow points.
    Every matrix therefore has at most one 1 per row and per column.
    """
    pos = walk_positions(shape, l, r)
    index = {}
    for v in range(1, shape.t + 1):
        for k, q in enumerate(pos[v]):
            index[q] = k
    dims = tuple(len(pos[v]) for v in range(1, shape.t + 1))
    mats = []
    for a in range(1, shape.t + 1):
        u, v = shape.arrow_ends(a)
        mats.append(np.zeros((dims[v - 1], dims[u - 1]), dtype=np.complex128))
    for w in range(l, r):
        a = shape.wrap(w)
        if shape.is_clockwise(a):
            mats[a - 1][index[w + 1], index[w]] = 1.0
        else:
            mats[a - 1][index[w], index[w + 1]] = 1.0
    return Representation(shape, dims, tuple(mats))


def is_regular(a: Representation, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """True iff all vertex dimensions agree and every matrix is nonsingular."""
    if a.shape.kind != CYCLE:
        raise ValidationError("is_regular applies to cycle representations")
    if len(set(a.dims)) > 1:
        return False
    if a.dims[0] == 0:
        return True
    for m in a.matrices:
        s = singular_values(m)
        if s[-1] <= tol.from_sigma(s[0]):
            return False
    return True
