"""Planted-instance generation and independent verification.

Build representations whose decomposition is known by construction, scramble
them with random changes of basis, run the decomposition, and compare.  The
random streams are seeded and documented: the basis change at vertex ``v``
draws from ``numpy.random.default_rng([seed, v])``, so plants are
reproducible bit for bit and vertices use independent substreams.
"""

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .chain import ChainCanonicalForm, ChainTrace
from .cycle import RegularizingDecomposition
from .errors import ValidationError
from .linalg import DEFAULT_TOL, TolerancePolicy, jordan_block, unitarity_defect
from .quiver import (
    CHAIN,
    CYCLE,
    QuiverShape,
    Representation,
    apply_isomorphism,
    direct_sum,
    make_G,
    make_L,
    representation_scale,
    zero_representation,
)

__all__ = [
    "PlantSpec",
    "random_unitary",
    "random_invertible",
    "plant",
    "CheckResult",
    "VerificationReport",
    "verify",
    "hausdorff_distance",
]

UNITARY = "unitary"
INVERTIBLE = "invertible"


@dataclass(frozen=True)
class PlantSpec:
    """Recipe for a planted instance with known ground truth.

    ``labels`` is a mapping from summand labels to multiplicities: ``(i, j)``
    intervals for chains, ``(l, r)`` walks for cycles.  ``regular_eigs`` adds
    one regular dimension per eigenvalue (cycles only).  ``scramble``
    selects unitary basis changes (default) or general invertible ones with
    condition number at most ``max_condition``.
    """

    shape: QuiverShape
    labels: tuple[tuple[tuple[int, int], int], ...]
    regular_eigs: tuple[complex, ...] = ()
    seed: int = 0
    scramble: str = UNITARY
    max_condition: float = 1e3

    def __post_init__(self):
        object.__setattr__(
            self, "labels", tuple(sorted(((a, b), int(m)) for (a, b), m in dict(self.labels).items()))
        )
        object.__setattr__(self, "regular_eigs", tuple(complex(z) for z in self.regular_eigs))
        if self.scramble not in (UNITARY, INVERTIBLE):
            raise ValidationError(f"unknown scramble mode {self.scramble!r}")
        if self.max_condition < 1:
            raise ValidationError("max_condition must be >= 1")
        t = self.shape.t
        for (a, b), m in self.labels:
            if m < 0:
                raise ValidationError("label multiplicities must be nonnegative")
            if self.shape.kind == CHAIN and not 1 <= a <= b <= t:
                raise ValidationError(f"interval label ({a}, {b}) out of range for t={t}")
            if self.shape.kind == CYCLE and not (1 <= a <= t and b >= a):
                raise ValidationError(f"walk label ({a}, {b}) out of range for t={t}")
        if self.shape.kind == CHAIN and self.regular_eigs:
            raise ValidationError("chains have no regular part")
        for z in self.regular_eigs:
            if abs(z) <= 1e-9:
                raise ValidationError(f"regular eigenvalue {z} too close to zero")

    def label_counts(self) -> Counter:
        return Counter({lab: m for lab, m in self.labels if m})


def _vertex_rng(seed: int, vertex: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(vertex)])


def random_unitary(n: int, seed) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary, deterministic per seed.

    ``seed`` may be an integer or a ``numpy.random.Generator``.  Implemented
    as QR of a complex Gaussian matrix with the R-diagonal phases divided
    out (Mezzadri's recipe).
    """
    if n < 0:
        raise ValidationError("random_unitary needs n >= 0")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if n == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r).copy()
    d[np.abs(d) == 0] = 1.0
    return q * (d / np.abs(d))


def random_invertible(n: int, seed, max_condition: float = 1e3) -> np.ndarray:
    """Random invertible matrix with condition number at most ``max_condition``."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if n == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    u = random_unitary(n, rng)
    v = random_unitary(n, rng)
    half = np.log(max_condition) / 2.0
    sig = np.exp(rng.uniform(-half, half, size=n))
    return (u * sig) @ v


def _regular_summand(shape: QuiverShape, eigs) -> Representation:
    nd = len(eigs)
    mats = [np.eye(nd, dtype=np.complex128) for _ in range(shape.t)]
    blocks = [jordan_block(1, z) for z in eigs]
    x = np.zeros((nd, nd), dtype=np.complex128)
    for i, b in enumerate(blocks):
        x[i, i] = b[0, 0]
    if not shape.is_clockwise(shape.t):
        x = np.diag(1.0 / np.diagonal(x))
    mats[shape.t - 1] = x
    return Representation(shape, (nd,) * shape.t, tuple(mats))


def plant(spec: PlantSpec) -> tuple[Representation, PlantSpec]:
    """Assemble the requested direct sum and scramble it; returns (instance, truth).

    Summands enter the direct sum in sorted label order; the regular summand
    (cycles only) comes last, carrying one 1x1 Jordan block per requested
    eigenvalue on arrow ``t``, inverted when that arrow points
    counterclockwise so the monodromy eigenvalues equal ``regular_eigs``.
    """
    shape = spec.shape
    rep = zero_representation(shape)
    for (a, b), mult in spec.labels:
        if not mult:
            continue
        summand = make_L(a, b, shape) if shape.kind == CHAIN else make_G(a, b, shape)
        for _ in range(mult):
            rep = direct_sum(rep, summand)
    if spec.regular_eigs:
        rep = direct_sum(rep, _regular_summand(shape, spec.regular_eigs))
    transforms = []
    for v in range(1, shape.t + 1):
        rng = _vertex_rng(spec.seed, v)
        d = rep.dims[v - 1]
        if spec.scramble == UNITARY:
            transforms.append(random_unitary(d, rng))
        else:
            transforms.append(random_invertible(d, rng, spec.max_condition))
    return apply_isomorphism(rep, transforms), spec


def hausdorff_distance(xs, ys) -> float:
    """Hausdorff distance between two finite point sets in the complex plane."""
    xs = np.asarray(list(xs), dtype=np.complex128)
    ys = np.asarray(list(ys), dtype=np.complex128)
    if xs.size == 0 and ys.size == 0:
        return 0.0
    if xs.size == 0 or ys.size == 0:
        return float("inf")
    d = np.abs(xs[:, None] - ys[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def _matched_distance(xs, ys) -> float:
    """Greedy closest-pair matching distance between equal-size multisets.

    Pairs the globally closest points first, so well-separated clusters are
    matched cluster-to-cluster regardless of how rounding perturbs any
    sorting key.  Multiplicity-aware, unlike the Hausdorff distance.
    """
    xs = np.asarray(list(xs), dtype=np.complex128)
    ys = np.asarray(list(ys), dtype=np.complex128)
    if xs.size != ys.size:
        return float("inf")
    if xs.size == 0:
        return 0.0
    d = np.abs(xs[:, None] - ys[None, :])
    worst = 0.0
    for _ in range(xs.size):
        i, j = np.unravel_index(np.argmin(d), d.shape)
        worst = max(worst, float(d[i, j]))
        d[i, :] = np.inf
        d[:, j] = np.inf
    return worst


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    threshold: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "measured": float(self.measured),
            "threshold": float(self.threshold),
        }


@dataclass
class VerificationReport:
    """Per-check outcomes; every threshold sits next to its measured value."""

    labels_match: bool
    residual: float
    unitarity_defect: float
    eigenvalue_distance: float
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "labels_match": self.labels_match,
            "residual": self.residual,
            "unitarity_defect": self.unitarity_defect,
            "eigenvalue_distance": self.eigenvalue_distance,
            "checks": [c.to_dict() for c in self.checks],
        }


def verify(
    a: Representation,
    result,
    truth: PlantSpec,
    tol: TolerancePolicy = DEFAULT_TOL,
    trace: ChainTrace | None = None,
) -> VerificationReport:
    """Compare a computed decomposition against planted ground truth.

    ``result`` is a :class:`ChainCanonicalForm` (pass the matching
    :class:`ChainTrace` for residual/unitarity checks) or a
    :class:`RegularizingDecomposition`.  Failures are report entries, not
    exceptions.
    """
    if a.shape != truth.shape:
        raise ValidationError("representation and truth have different shapes")
    checks: list[CheckResult] = []
    scale = representation_scale(a)
    truth_counts = truth.label_counts()

    if isinstance(result, ChainCanonicalForm):
        got = Counter({lab: m for lab, m in result.counts.items() if m})
        labels_ok = got == truth_counts
        mismatched = sum((got - truth_counts).values()) + sum((truth_counts - got).values())
        checks.append(CheckResult("labels_match", labels_ok, float(mismatched), 0.0))
        dim_gap = max(abs(x - y) for x, y in zip(result.dims(), a.dims))
        checks.append(CheckResult("dimension_conservation", dim_gap == 0, float(dim_gap), 0.0))
        residual = trace.residual if trace is not None else 0.0
        udef = 0.0
        if trace is not None:
            udef = max(unitarity_defect(s) for s in trace.vertex_transforms)
            checks.append(CheckResult("residual", residual <= 1e-8 * scale, residual, 1e-8 * scale))
            ubound = 1e-12 * max(a.dims, default=1)
            checks.append(CheckResult("unitarity", udef <= ubound, udef, ubound))
        return VerificationReport(
            labels_match=labels_ok,
            residual=residual,
            unitarity_defect=udef,
            eigenvalue_distance=0.0,
            checks=checks,
        )

    if isinstance(result, RegularizingDecomposition):
        got = Counter({lab: m for lab, m in result.summands.items() if m})
        labels_ok = got == truth_counts
        mismatched = sum((got - truth_counts).values()) + sum((truth_counts - got).values())
        checks.append(CheckResult("labels_match", labels_ok, float(mismatched), 0.0))

        want_reg = len(truth.regular_eigs)
        reg_gap = abs(result.regular_dim() - want_reg)
        checks.append(CheckResult("regular_dimension", reg_gap == 0, float(reg_gap), 0.0))

        total = np.asarray(result.summand_dims()) + result.regular_dim()
        dim_gap = int(np.abs(total - np.asarray(a.dims)).max()) if a.dims else 0
        checks.append(CheckResult("dimension_conservation", dim_gap == 0, float(dim_gap), 0.0))

        eig_scale = max([1.0] + [abs(z) for z in truth.regular_eigs])
        haus = hausdorff_distance(result.monodromy_eigenvalues, truth.regular_eigs)
        pair = _matched_distance(result.monodromy_eigenvalues, truth.regular_eigs)
        eig_bound = 1e-6 * eig_scale
        checks.append(CheckResult("eigenvalues", pair <= eig_bound, pair, eig_bound))

        res_bound = 1e-8 * scale
        checks.append(CheckResult("residual", result.residual <= res_bound, result.residual, res_bound))

        udef = max(unitarity_defect(s) for s in result.trace) if result.trace else 0.0
        ubound = 1e-12 * max(a.dims, default=1)
        checks.append(CheckResult("unitarity", udef <= ubound, udef, ubound))
        return VerificationReport(
            labels_match=labels_ok,
            residual=result.residual,
            unitarity_defect=udef,
            eigenvalue_distance=haus if np.isfinite(haus) else float("inf"),
            checks=checks,
        )

    raise ValidationError(f"cannot verify result of type {type(result).__name__}")
