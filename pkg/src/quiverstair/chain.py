"""Canonical decomposition of chain representations by unitary staircase steps.

The algorithm sweeps the chain left to right.  Entering step ``r`` the basis
of vertex ``r`` is partitioned into strips, one per interval start vertex
``p_i``, each strip holding ``k_i`` copies of a partial interval
``p_i -> ... -> r``.  The staircase reduction of the matrix on arrow ``r``
reveals how many of those copies extend across the arrow (``l_i``); the other
``k_i - l_i`` copies split off as finished summands ``L(p_i, r)``.  Vertical
strips (clockwise arrow) are processed left to right, horizontal strips
(counterclockwise) bottom-up, and the surviving strips inherit the basis
order the staircase form leaves at vertex ``r+1``: blocks first and the new
bare vertex last for vertical steps, the bare vertex first for horizontal
steps.  That ordering is load-bearing; it encodes the flag of subspaces the
remaining transformations must respect.
"""

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import QuiverError, ValidationError
from .linalg import (
    DEFAULT_TOL,
    HORIZONTAL,
    VERTICAL,
    TolerancePolicy,
    block_diag,
    staircase_reduce,
    staircase_zero_mask,
)
from .quiver import (
    CHAIN,
    CLOCKWISE,
    COUNTERCLOCKWISE,
    QuiverShape,
    Representation,
    make_L,
    direct_sum,
    zero_representation,
)

__all__ = [
    "ChainCanonicalForm",
    "ChainStep",
    "ChainTrace",
    "canon_chain",
    "assemble_canonical",
    "chain_pattern_residual",
]


@dataclass
class ChainCanonicalForm:
    """Multiset of interval labels ``(i, j)`` with multiplicities."""

    t: int
    counts: Counter

    def dims(self) -> tuple[int, ...]:
        """Vertexwise dimensions of the direct sum the form describes."""
        d = [0] * self.t
        for (i, j), m in self.counts.items():
            for v in range(i, j + 1):
                d[v - 1] += m
        return tuple(d)

    def sorted_labels(self) -> list[tuple[tuple[int, int], int]]:
        return sorted(self.counts.items())

    def total(self) -> int:
        return sum(self.counts.values())


@dataclass
class ChainStep:
    """Audit record for one staircase step."""

    r: int
    orientation: str
    strip_starts: list[int]
    strip_sizes: list[int]
    block_sizes: list[int]
    threshold: float


@dataclass
class ChainTrace:
    """Accumulated per-vertex unitaries plus per-step bookkeeping."""

    vertex_transforms: list[np.ndarray]
    steps: list[ChainStep] = field(default_factory=list)
    residual: float = 0.0


def canon_chain(
    a: Representation,
    tol: TolerancePolicy = DEFAULT_TOL,
    *,
    threshold: float | None = None,
) -> tuple[ChainCanonicalForm, ChainTrace]:
    """Canonical multiset of interval summands of a chain representation.

    Returns the multiset ``{(i, j): multiplicity}`` together with the trace:
    the accumulated unitary change of basis at every vertex, the strip/block
    sizes of every step, and the largest entry the staircase forms required
    to vanish (measured after transformation, so it reflects the rank
    decisions actually taken).

    By default each step derives its rank threshold from the matrix it is
    reducing; ``threshold`` overrides that for every step, which callers use
    when the chain is a piece of a larger problem whose scale should govern
    (a matrix consisting purely of noise must not count as full rank).

    Numeric failures propagate with the step index attached.
    """
    if a.shape.kind != CHAIN:
        raise ValidationError("canon_chain needs a chain representation")
    t = a.shape.t
    counts: Counter = Counter()
    trace = ChainTrace(
        vertex_transforms=[np.eye(d, dtype=np.complex128) for d in a.dims]
    )
    if t == 1:
        if a.dims[0]:
            counts[(1, 1)] = a.dims[0]
        return ChainCanonicalForm(t, counts), trace

    mats = [m.copy() for m in a.matrices]
    strips: list[tuple[int, int]] = [(1, a.dims[0])]

    for r in range(1, t):
        cur = mats[r - 1]
        clockwise = a.shape.is_clockwise(r)
        sizes = [k for _, k in strips]
        axis = VERTICAL if clockwise else HORIZONTAL
        try:
            tau = tol.threshold(cur) if threshold is None else float(threshold)
            outer, per_strip, ls = staircase_reduce(cur, sizes, axis, tol, threshold=tau)
        except QuiverError as exc:
            raise type(exc)(f"chain step {r}: {exc}") from exc
        if clockwise:
            reduced = outer @ cur @ block_diag(*per_strip)
            s_here = block_diag(*per_strip).conj().T
            s_next = outer
        else:
            reduced = block_diag(*per_strip) @ cur @ outer
            s_here = block_diag(*per_strip)
            s_next = outer.conj().T
        mats[r - 1] = reduced
        mask = staircase_zero_mask(reduced.shape, sizes, ls, axis)
        if mask.any():
            trace.residual = max(trace.residual, float(np.abs(reduced[mask]).max()))
        trace.vertex_transforms[r - 1] = s_here @ trace.vertex_transforms[r - 1]
        trace.vertex_transforms[r] = s_next @ trace.vertex_transforms[r]
        if r < t - 1:
            if a.shape.is_clockwise(r + 1):
                mats[r] = mats[r] @ s_next.conj().T
            else:
                mats[r] = s_next @ mats[r]

        for (p, k), l in zip(strips, ls):
            if k - l:
                counts[(p, r)] += k - l
        bare = a.dims[r] - sum(ls)
        survivors = [(p, l) for (p, _), l in zip(strips, ls)]
        strips = survivors + [(r + 1, bare)] if clockwise else [(r + 1, bare)] + survivors
        trace.steps.append(
            ChainStep(
                r=r,
                orientation=CLOCKWISE if clockwise else COUNTERCLOCKWISE,
                strip_starts=[p for p, _ in survivors],
                strip_sizes=sizes,
                block_sizes=ls,
                threshold=tau,
            )
        )

    for p, k in strips:
        if k:
            counts[(p, t)] += k
    return ChainCanonicalForm(t, counts), trace


def assemble_canonical(form: ChainCanonicalForm, shape: QuiverShape) -> Representation:
    """Direct sum of the form's interval summands, lexicographic label order."""
    if shape.kind != CHAIN or shape.t != form.t:
        raise ValidationError("shape does not match the canonical form")
    out = zero_representation(shape)
    for (i, j), m in form.sorted_labels():
        block = make_L(i, j, shape)
        for _ in range(m):
            out = direct_sum(out, block)
    return out


def chain_pattern_residual(a: Representation, trace: ChainTrace) -> float:
    """Re-verify the staircase patterns from the recorded transforms.

    Applies the accumulated unitaries to the input and measures the largest
    entry sitting where some step's staircase form demands a zero.  Equals
    ``trace.residual`` up to re-application roundoff.
    """
    worst = 0.0
    s = trace.vertex_transforms
    for step in trace.steps:
        r = step.r
        u, v = a.shape.arrow_ends(r)
        m = s[v - 1] @ a.matrices[r - 1] @ s[u - 1].conj().T
        axis = VERTICAL if step.orientation == CLOCKWISE else HORIZONTAL
        mask = staircase_zero_mask(m.shape, step.strip_sizes, step.block_sizes, axis)
        if mask.any():
            worst = max(worst, float(np.abs(m[mask]).max()))
    return worst
