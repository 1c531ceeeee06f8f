"""Regularizing decomposition of cycle representations.

The shave walks around the cycle like a plane over wood.  Starting at the
first clockwise arrow whose matrix lacks full row rank, each step applies one
unitary change of basis at the vertex ahead of the current arrow, splitting
that vertex into a "shaved" part (which joins a growing chain living over the
cycle) and a reduced cycle part.  The walk stops once it has gone at least
all the way around and the newly shaved part receives only a zero block.
Gluing the chain back down onto the cycle (the push-down) and summing with
the remaining cycle representation recovers the input up to isomorphism.

Shaving the representation, then its transpose, leaves a regular part; the
two shaved chains decompose into intervals, and each interval pushes down to
a walk summand of the cycle.  That is the full decomposition: walk summands
plus a regular representation, whose isomorphism class is captured by the
eigenvalues of its monodromy.
"""

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .chain import canon_chain
from .errors import InconsistencyError, ValidationError
from .linalg import (
    DEFAULT_TOL,
    TolerancePolicy,
    block_diag,
    col_compress,
    numerical_rank,
    row_compress,
    singular_values,
    svd_inverse,
)
from .quiver import (
    CHAIN,
    CLOCKWISE,
    COUNTERCLOCKWISE,
    CYCLE,
    QuiverShape,
    Representation,
    apply_isomorphism,
    direct_sum,
    is_regular,
    representation_threshold,
    transpose_rep,
    zero_representation,
)

__all__ = [
    "ShaveStep",
    "ShaveResult",
    "shave",
    "push_down",
    "shave_glue_residual",
    "monodromy",
    "RegularizingDecomposition",
    "regularize",
]


@dataclass
class ShaveStep:
    """Audit record for one shave step."""

    step: int
    arrow: int
    vertex: int
    clockwise: bool
    shaved_dim: int
    kept_dim: int
    zeroed_norm: float


@dataclass
class ShaveResult:
    """Outcome of one full shave pass.

    ``a_prime`` is the shaved chain on the primed vertices ``(l+1)'..(n+1)'``
    (``None`` when nothing was shaved, i.e. ``l = t+1``); ``a_tilde`` is the
    reduced cycle representation, whose clockwise arrows all have full row
    rank.  ``trace`` holds the accumulated unitary applied at each cycle
    vertex; its leading block at every vertex corresponds to the shaved
    parts, in the order they were split off.  ``residual`` is the largest
    Frobenius norm among the blocks the pass declared zero.
    """

    a_prime: Representation | None
    a_tilde: Representation
    l: int
    n: int
    trace: list[np.ndarray]
    residual: float
    threshold: float
    steps: list[ShaveStep] = field(default_factory=list)


def _check_cycle(a: Representation, who: str):
    if a.shape.kind != CYCLE:
        raise ValidationError(f"{who} needs a cycle representation")


def shave(a: Representation, tol: TolerancePolicy = DEFAULT_TOL) -> ShaveResult:
    """Split a cycle representation into a shaved chain and a reduced cycle.

    Uses a single rank threshold computed from the whole representation so
    that strips consisting purely of noise compress to rank zero.  Raises
    :class:`InconsistencyError` if the walk exceeds its dimension-based step
    cap, which would indicate contradictory rank decisions.
    """
    _check_cycle(a, "shave")
    shape = a.shape
    t = shape.t
    tau = representation_threshold(a, tol)

    l = t + 1
    for i in range(1, t + 1):
        if shape.is_clockwise(i):
            m = a.matrices[i - 1]
            if numerical_rank(m, tol, threshold=tau) < m.shape[0]:
                l = i
                break

    trace = [np.eye(d, dtype=np.complex128) for d in a.dims]
    if l == t + 1:
        return ShaveResult(
            a_prime=None,
            a_tilde=Representation(shape, a.dims, a.matrices),
            l=l,
            n=t,
            trace=trace,
            residual=0.0,
            threshold=tau,
        )

    dims = list(a.dims)
    mats = [m.copy() for m in a.matrices]
    split_done = [0] * t  # dimensions already shaved off each vertex
    chain_dims: list[int] = []
    chain_mats: list[np.ndarray] = []
    chain_orients: list[str] = []
    steps_log: list[ShaveStep] = []
    residual = 0.0

    cap = t + 2 * sum(a.dims) + 2
    pending = None  # strip of the next arrow's matrix hanging over the shaved part
    r = l
    while True:
        if r > cap:
            raise InconsistencyError(
                f"shave exceeded its step cap ({cap}); rank decisions are inconsistent"
            )
        arrow = shape.wrap(r)
        nxt = shape.wrap(r + 1)
        vtx = shape.wrap(r + 1)
        cw = shape.is_clockwise(arrow)
        cur = mats[arrow - 1]
        if r == l:
            if not cw:
                raise InconsistencyError("shave started at a counterclockwise arrow")
            pending = np.zeros((cur.shape[0], 0), dtype=np.complex128)

        if cw:
            # cur: d[vtx] x d[src]; shave off the row-deficient top part of vtx
            q, k = row_compress(cur, tol, threshold=tau)
            moved = q @ cur
            shaved = cur.shape[0] - k
            zeroed = float(np.linalg.norm(moved[:shaved, :]))
            mats[arrow - 1] = moved[shaved:, :]
            lifted = q @ pending
            c_mat = lifted[:shaved, :]  # chain matrix (r)' -> (r+1)'
            s_new = q
        else:
            # cur: d[tgt] x d[vtx]; the pending strip sits above it (rows)
            w, k = col_compress(pending, tol, threshold=tau)
            lifted = pending @ w
            shaved = k
            zeroed = float(np.linalg.norm(lifted[:, shaved:]))
            c_mat = lifted[:, :shaved]  # chain matrix (r+1)' -> (r)'
            moved = cur @ w
            mats[arrow - 1] = moved[:, shaved:]
            s_new = w.conj().T

        residual = max(residual, zeroed)
        if r > l:
            chain_mats.append(c_mat)
            chain_orients.append(CLOCKWISE if cw else COUNTERCLOCKWISE)
        chain_dims.append(shaved)

        old_d = dims[vtx - 1]
        dims[vtx - 1] = old_d - shaved
        pre = split_done[vtx - 1]
        trace[vtx - 1] = block_diag(np.eye(pre, dtype=np.complex128), s_new) @ trace[vtx - 1]
        split_done[vtx - 1] += shaved

        nxt_mat = mats[nxt - 1]
        if shape.is_clockwise(nxt):
            moved_nxt = nxt_mat @ s_new.conj().T
            pending_next = moved_nxt[:, :shaved]
            mats[nxt - 1] = moved_nxt[:, shaved:]
        else:
            moved_nxt = s_new @ nxt_mat
            pending_next = moved_nxt[:shaved, :]
            mats[nxt - 1] = moved_nxt[shaved:, :]

        steps_log.append(
            ShaveStep(
                step=r,
                arrow=arrow,
                vertex=vtx,
                clockwise=cw,
                shaved_dim=shaved,
                kept_dim=dims[vtx - 1],
                zeroed_norm=zeroed,
            )
        )

        if r >= t:
            strip_sigma = singular_values(pending_next)
            if (strip_sigma[0] if strip_sigma.size else 0.0) <= tau:
                n = r
                residual = max(residual, float(np.linalg.norm(pending_next)))
                break
        pending = pending_next
        r += 1

    m_len = n + 1 - l
    prime_shape = QuiverShape(CHAIN, m_len, "".join(chain_orients))
    a_prime = Representation(prime_shape, tuple(chain_dims), tuple(chain_mats))
    a_tilde = Representation(shape, tuple(dims), tuple(mats))
    return ShaveResult(
        a_prime=a_prime,
        a_tilde=a_tilde,
        l=l,
        n=n,
        trace=trace,
        residual=residual,
        threshold=tau,
        steps=steps_log,
    )


def push_down(
    b: Representation | None, l: int, n: int, shape: QuiverShape
) -> Representation:
    """Glue a shaved chain back onto the cycle.

    The chain's vertex ``c`` (1-based) lives over cycle vertex ``[l + c]``;
    the matrix of every cycle arrow is the direct sum, in increasing walk
    order, of the chain matrices lying over it, padded with the degenerate
    boundary blocks at the two chain ends.
    """
    if shape.kind != CYCLE:
        raise ValidationError("push_down needs a cycle shape")
    m_len = n + 1 - l
    if m_len < 0:
        raise ValidationError(f"push_down got n={n} < l={l} - 1")
    if b is None:
        if m_len != 0:
            raise ValidationError(f"push_down got no chain but n-l+1={m_len} vertices")
        return zero_representation(shape)
    if b.shape.kind != CHAIN or b.shape.t != m_len:
        raise ValidationError(
            f"chain has {b.shape.t if b.shape.kind == CHAIN else 'non-chain'} vertices, "
            f"expected {m_len} from (l={l}, n={n})"
        )
    for j in range(1, m_len):
        want = shape.orientations[shape.wrap(l + j) - 1]
        if b.shape.orientations[j - 1] != want:
            raise ValidationError(
                f"chain arrow {j} is {b.shape.orientations[j - 1]!r} but cycle arrow "
                f"{shape.wrap(l + j)} is {want!r}"
            )

    t = shape.t
    pos = {v: [q for q in range(l + 1, n + 2) if shape.wrap(q) == v] for v in range(1, t + 1)}
    dim_at = {q: b.dims[q - l - 1] for q in range(l + 1, n + 2)}
    offsets = {}
    dims = []
    for v in range(1, t + 1):
        off = {}
        run = 0
        for q in pos[v]:
            off[q] = run
            run += dim_at[q]
        offsets[v] = off
        dims.append(run)

    mats = []
    for i in range(1, t + 1):
        u, v = shape.arrow_ends(i)
        mats.append(np.zeros((dims[v - 1], dims[u - 1]), dtype=np.complex128))
    for j in range(1, m_len):
        q = l + j
        i = shape.wrap(q)
        blockm = b.matrices[j - 1]
        if shape.is_clockwise(i):
            r0 = offsets[shape.wrap(q + 1)][q + 1]
            c0 = offsets[shape.wrap(q)][q]
        else:
            r0 = offsets[shape.wrap(q)][q]
            c0 = offsets[shape.wrap(q + 1)][q + 1]
        mats[i - 1][r0 : r0 + blockm.shape[0], c0 : c0 + blockm.shape[1]] = blockm
    return Representation(shape, tuple(dims), tuple(mats))


def shave_glue_residual(
    a: Representation, res: ShaveResult, tol: TolerancePolicy = DEFAULT_TOL
) -> float:
    """Verify the shave's split against the recorded transformations.

    Applies the accumulated unitaries to the input and compares, arrow by
    arrow, against ``push_down(a_prime) ⊕ a_tilde``.  The comparison covers
    every position whose value the algorithm pinned: the chain and cycle
    blocks themselves, the blocks zeroed by the compressions, and the strip
    dropped by the stopping rule.  Positions below the block diagonal are
    excluded; they carry couplings that the split removes exactly but only
    by non-unitary (triangular) changes of basis.

    Returns the largest Frobenius norm of the covered difference.
    """
    glued = direct_sum(push_down(res.a_prime, res.l, res.n, a.shape), res.a_tilde)
    moved = apply_isomorphism(a, res.trace, tol)
    t = a.shape.t
    inf = math.inf

    def parts(vertex: int) -> list[tuple[float, int]]:
        out = []
        if res.a_prime is not None:
            for q in range(res.l + 1, res.n + 2):
                if a.shape.wrap(q) == vertex:
                    out.append((float(q), res.a_prime.dims[q - res.l - 1]))
        out.append((inf, res.a_tilde.dims[vertex - 1]))
        return out

    worst = 0.0
    for i in range(1, t + 1):
        u, v = a.shape.arrow_ends(i)
        diff = moved.matrices[i - 1] - glued.matrices[i - 1]
        include = np.zeros(diff.shape, dtype=bool)
        r0 = 0
        for qr, dr in parts(v):
            c0 = 0
            for qc, dc in parts(u):
                if qr == inf and qc == inf:
                    keep = True
                elif qr == inf:
                    keep = qc == res.n + 1
                elif qc == inf:
                    keep = True
                else:
                    keep = qr <= qc + 1
                if keep:
                    include[r0 : r0 + dr, c0 : c0 + dc] = True
                c0 += dc
            r0 += dr
        if include.any():
            worst = max(worst, float(np.linalg.norm(diff[include])))
    return worst


def monodromy(
    p: Representation, tol: TolerancePolicy = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Basepoint product of a regular cycle and its eigenvalues.

    Multiplies around the cycle starting from vertex 1, using the matrix of
    each clockwise arrow and the inverse of each counterclockwise one.  The
    eigenvalues of the product classify the regular representation; they are
    reported as a multiset, with no claim about Jordan structure.
    """
    _check_cycle(p, "monodromy")
    if not is_regular(p, tol):
        raise ValidationError("monodromy needs a regular representation")
    d = p.dims[0]
    out = np.eye(d, dtype=np.complex128)
    for i in range(1, p.shape.t + 1):
        m = p.matrices[i - 1]
        out = (m if p.shape.is_clockwise(i) else svd_inverse(m, tol)) @ out
    eigs = np.linalg.eigvals(out) if d else np.zeros(0, dtype=np.complex128)
    return out, eigs


@dataclass
class RegularizingDecomposition:
    """Walk summands plus regular part of a cycle representation.

    ``summands`` maps walk labels ``(l, r)`` (start vertex in ``1..t``, walk
    length ``r - l + 1``) to multiplicities; ``summands_by_pass`` splits the
    count by the shave pass that produced each label (direct pass,
    transposed pass).  ``trace`` is the composed per-vertex unitary of both
    passes, acting on the original spaces.
    """

    shape: QuiverShape
    summands: Counter
    summands_by_pass: tuple[Counter, Counter]
    regular_part: Representation
    monodromy_matrix: np.ndarray
    monodromy_eigenvalues: np.ndarray
    trace: list[np.ndarray]
    residual: float
    threshold: float
    shaves: tuple[ShaveResult, ShaveResult]

    def summand_dims(self) -> tuple[int, ...]:
        d = [0] * self.shape.t
        for (l, r), m in self.summands.items():
            for q in range(l, r + 1):
                d[self.shape.wrap(q) - 1] += m
        return tuple(d)

    def regular_dim(self) -> int:
        return self.regular_part.dims[0] if self.regular_part.dims else 0


def _chain_labels_to_walks(shape: QuiverShape, l: int, form_counts: Counter) -> Counter:
    out: Counter = Counter()
    for (i, j), m in form_counts.items():
        start = shape.wrap(l + i)
        out[(start, start + (j - i))] += m
    return out


def regularize(
    a: Representation, tol: TolerancePolicy = DEFAULT_TOL
) -> RegularizingDecomposition:
    """Full regularizing decomposition of a cycle representation.

    Three stages: shave the input, shave the transpose of what remains, and
    decompose both shaved chains into intervals.  Each interval maps to the
    walk summand its push-down produces; what survives both shaves is the
    regular part, whose monodromy eigenvalues are reported.

    Raises :class:`InconsistencyError` if the surviving part fails the
    nonsingularity check, naming the offending arrow and its smallest
    singular value; that signals tolerance trouble rather than a silent
    misclassification.
    """
    _check_cycle(a, "regularize")
    first = shave(a, tol)
    second = shave(transpose_rep(first.a_tilde), tol)
    regular = transpose_rep(second.a_tilde)

    if len(set(regular.dims)) > 1:
        raise InconsistencyError(
            f"regular part has uneven dimensions {regular.dims}; rank decisions disagree"
        )
    if regular.dims and regular.dims[0]:
        for i, m in enumerate(regular.matrices, start=1):
            s = singular_values(m)
            smin = float(s[-1]) if s.size else 0.0
            if smin <= tol.from_sigma(s[0] if s.size else 0.0):
                raise InconsistencyError(
                    f"regular part is singular at arrow {i}: sigma_min={smin:.6g}"
                )

    by_pass = []
    for res in (first, second):
        if res.a_prime is None:
            by_pass.append(Counter())
        else:
            # The shaved chain inherits the cycle's scale; a chain matrix made
            # purely of noise must compress to rank zero, so the shave's
            # representation-level threshold governs here too.
            form, _ = canon_chain(res.a_prime, tol, threshold=res.threshold)
            by_pass.append(_chain_labels_to_walks(a.shape, res.l, form.counts))
    summands = by_pass[0] + by_pass[1]

    mono, eigs = monodromy(regular, tol)
    if eigs.size:
        tau_m = tol.threshold(mono)
        small = np.abs(eigs).min()
        if small <= tau_m:
            raise InconsistencyError(
                f"monodromy eigenvalue {small:.6g} below threshold {tau_m:.6g}"
            )

    trace = []
    for v in range(a.shape.t):
        shaved1 = a.dims[v] - first.a_tilde.dims[v]
        pad = np.eye(shaved1, dtype=np.complex128)
        trace.append(block_diag(pad, second.trace[v].conj()) @ first.trace[v])

    return RegularizingDecomposition(
        shape=a.shape,
        summands=summands,
        summands_by_pass=(by_pass[0], by_pass[1]),
        regular_part=regular,
        monodromy_matrix=mono,
        monodromy_eigenvalues=eigs,
        trace=trace,
        residual=max(first.residual, second.residual),
        threshold=max(first.threshold, second.threshold),
        shaves=(first, second),
    )
