"""JSON interchange format for representations and planted ground truth.

Matrices carry explicit ``rows``/``cols`` fields so the degenerate ``0 x n``
and ``n x 0`` cases are unambiguous; entries are row-major ``[re, im]``
pairs.  Round trips are bit-exact for float64 data.
"""

import json
from collections import Counter

import numpy as np

from .errors import ValidationError
from .oracle import PlantSpec
from .quiver import CHAIN, CYCLE, QuiverShape, Representation

__all__ = [
    "FORMAT_VERSION",
    "representation_to_dict",
    "representation_from_dict",
    "save_representation",
    "load_representation",
    "plant_spec_to_dict",
    "plant_spec_from_dict",
    "save_plant_spec",
    "load_plant_spec",
]

FORMAT_VERSION = 1


def _matrix_to_dict(m: np.ndarray) -> dict:
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel(order="C")],
    }


def _matrix_from_dict(d: dict, where: str) -> np.ndarray:
    try:
        rows, cols = int(d["rows"]), int(d["cols"])
        entries = d["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"{where}: missing or malformed rows/cols/entries") from exc
    if rows < 0 or cols < 0:
        raise ValidationError(f"{where}: negative matrix size {rows}x{cols}")
    if len(entries) != rows * cols:
        raise ValidationError(
            f"{where}: expected {rows * cols} entries for a {rows}x{cols} matrix, "
            f"got {len(entries)}"
        )
    out = np.zeros((rows, cols), dtype=np.complex128)
    flat = out.ravel()
    for k, pair in enumerate(entries):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValidationError(f"{where}: entry {k} is not a [re, im] pair")
        flat[k] = complex(float(pair[0]), float(pair[1]))
    if out.size and not np.all(np.isfinite(out)):
        raise ValidationError(f"{where}: non-finite entries")
    return out


def representation_to_dict(rep: Representation) -> dict:
    return {
        "version": FORMAT_VERSION,
        "kind": rep.shape.kind,
        "t": rep.shape.t,
        "orientations": rep.shape.orientations,
        "dims": list(rep.dims),
        "matrices": [_matrix_to_dict(m) for m in rep.matrices],
    }


def representation_from_dict(d: dict) -> Representation:
    if not isinstance(d, dict):
        raise ValidationError("representation file must hold a JSON object")
    version = d.get("version")
    if version != FORMAT_VERSION:
        raise ValidationError(f"unsupported format version {version!r}")
    kind = d.get("kind")
    if kind not in (CHAIN, CYCLE):
        raise ValidationError(f"field 'kind' must be 'chain' or 'cycle', got {kind!r}")
    try:
        t = int(d["t"])
        orientations = str(d["orientations"])
        dims = tuple(int(x) for x in d["dims"])
        raw_mats = d["matrices"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"missing or malformed field: {exc}") from exc
    shape = QuiverShape(kind, t, orientations)
    if len(raw_mats) != shape.arrow_count:
        raise ValidationError(
            f"field 'matrices': expected {shape.arrow_count} matrices, got {len(raw_mats)}"
        )
    mats = tuple(
        _matrix_from_dict(md, f"matrices[{k}]") for k, md in enumerate(raw_mats)
    )
    return Representation(shape, dims, mats)


def save_representation(path, rep: Representation):
    with open(path, "w", encoding="utf-8") as fp:
        json.dump(representation_to_dict(rep), fp, indent=1)
        fp.write("\n")


def load_representation(path) -> Representation:
    with open(path, "r", encoding="utf-8") as fp:
        try:
            data = json.load(fp)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON at line {exc.lineno}") from exc
    return representation_from_dict(data)


def plant_spec_to_dict(spec: PlantSpec) -> dict:
    kind_tag = "L" if spec.shape.kind == CHAIN else "G"
    return {
        "version": FORMAT_VERSION,
        "kind": spec.shape.kind,
        "t": spec.shape.t,
        "orientations": spec.shape.orientations,
        "labels": [[kind_tag, a, b, m] for (a, b), m in spec.labels if m],
        "regular_eigs": [[z.real, z.imag] for z in spec.regular_eigs],
        "seed": spec.seed,
        "scramble": spec.scramble,
        "max_condition": spec.max_condition,
    }


def plant_spec_from_dict(d: dict) -> PlantSpec:
    if not isinstance(d, dict):
        raise ValidationError("plant spec file must hold a JSON object")
    if d.get("version") != FORMAT_VERSION:
        raise ValidationError(f"unsupported format version {d.get('version')!r}")
    try:
        shape = QuiverShape(str(d["kind"]), int(d["t"]), str(d["orientations"]))
        raw_labels = d.get("labels", [])
        labels = Counter()
        want_tag = "L" if shape.kind == CHAIN else "G"
        for k, row in enumerate(raw_labels):
            tag, a, b, m = row
            if tag != want_tag:
                raise ValidationError(
                    f"labels[{k}]: tag {tag!r} does not match kind {shape.kind!r}"
                )
            labels[(int(a), int(b))] += int(m)
        eigs = tuple(complex(p[0], p[1]) for p in d.get("regular_eigs", []))
        return PlantSpec(
            shape=shape,
            labels=tuple(labels.items()),
            regular_eigs=eigs,
            seed=int(d.get("seed", 0)),
            scramble=str(d.get("scramble", "unitary")),
            max_condition=float(d.get("max_condition", 1e3)),
        )
    except ValidationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"missing or malformed field: {exc}") from exc


def save_plant_spec(path, spec: PlantSpec):
    with open(path, "w", encoding="utf-8") as fp:
        json.dump(plant_spec_to_dict(spec), fp, indent=1)
        fp.write("\n")


def load_plant_spec(path) -> PlantSpec:
    with open(path, "r", encoding="utf-8") as fp:
        try:
            data = json.load(fp)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON at line {exc.lineno}") from exc
    return plant_spec_from_dict(data)
