"""Surface models: built-in certified examples and the JSON schema and
loader for user-supplied abstract models.

A model bundles the intersection lattice, the polarization class, the
Euler-characteristic data, the point strata with their curve tables, and
per-stratum curve-generator sets on the one-point blow-up.  Built-ins
ship with correct generator lists and completeness thresholds; abstract
models carry their own responsibility for those assertions, and every
structural invariant that can be checked at load time is.
"""

from __future__ import annotations

import graphlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

import jsonschema

from .bounds import RRData, minimal_M
from .engine import CurveCandidate, PointStratum
from .lattice import (
    CurveGeneratorSet,
    DivisorClass,
    IntersectionLattice,
    extend_blowup,
    is_strictly_positive_against,
    pair,
    pushforward,
)
from .values import format_rational, parse_rational

SCHEMA_VERSION = 1

# fixed label of the exceptional class on the one-point blow-up lattice
EXCEPTIONAL_LABEL = "Ex"

_RATIONAL_PATTERN = r"^-?[0-9]+(/[0-9]+)?$"

MODEL_SCHEMA = {
    "type": "object",
    "required": [
        "schema_version",
        "name",
        "rank",
        "gram",
        "basis_labels",
        "polarization",
        "rr",
        "very_ample_multiplier",
        "strata",
        "blowup_gens",
    ],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string", "minLength": 1},
        "rank": {"type": "integer", "minimum": 1},
        "gram": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "integer"}},
        },
        "basis_labels": {"type": "array", "items": {"type": "string"}},
        "polarization": {"type": "array", "items": {"type": "integer"}},
        "rr": {
            "type": "object",
            "required": ["d", "c", "c_prime", "vanishing_multiplier"],
            "additionalProperties": False,
            "properties": {
                "d": {"type": "integer", "minimum": 1},
                "c": {"type": "integer"},
                "c_prime": {"type": "integer"},
                "vanishing_multiplier": {"type": "integer", "minimum": 1},
            },
        },
        "very_ample_multiplier": {"type": "integer", "minimum": 1},
        "strata": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": [
                    "label",
                    "closure_dim",
                    "specializes_from",
                    "oracle_complete_below",
                    "candidates",
                ],
                "additionalProperties": False,
                "properties": {
                    "label": {"type": "string", "minLength": 1},
                    "closure_dim": {"type": "integer", "minimum": 0, "maximum": 2},
                    "specializes_from": {"type": "array", "items": {"type": "string"}},
                    "oracle_complete_below": {
                        "anyOf": [
                            {"type": "string", "pattern": _RATIONAL_PATTERN},
                            {"type": "null"},
                        ]
                    },
                    "candidates": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["label", "class", "t", "m"],
                            "additionalProperties": False,
                            "properties": {
                                "label": {"type": "string", "minLength": 1},
                                "class": {
                                    "anyOf": [
                                        {"type": "array", "items": {"type": "integer"}},
                                        {"type": "null"},
                                    ]
                                },
                                "t": {"type": "integer", "minimum": 1},
                                "m": {"type": "integer", "minimum": 1},
                            },
                        },
                    },
                },
            },
        },
        "blowup_gens": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["label", "class"],
                    "additionalProperties": False,
                    "properties": {
                        "label": {"type": "string", "minLength": 1},
                        "class": {"type": "array", "items": {"type": "integer"}},
                    },
                },
            },
        },
    },
}


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class SurfaceModel:
    name: str
    lattice: IntersectionLattice
    polarization: DivisorClass
    rr: RRData
    very_ample_multiplier: int
    strata: Tuple[PointStratum, ...]
    blowup_gens: Dict[str, CurveGeneratorSet]

    def __post_init__(self):
        object.__setattr__(self, "strata", tuple(self.strata))
        _validate_model(self)

    @property
    def blowup_lattice(self) -> IntersectionLattice:
        return extend_blowup(self.lattice, EXCEPTIONAL_LABEL)

    @property
    def generic_stratum(self) -> PointStratum:
        for s in self.strata:
            if s.closure_dim == 2:
                return s
        raise ModelError(f"model {self.name!r} has no dense stratum")

    def stratum(self, label: str) -> PointStratum:
        for s in self.strata:
            if s.label == label:
                return s
        raise ModelError(f"model {self.name!r} has no stratum {label!r}")

    def to_document(self) -> dict:
        # canonical field order; round-trips byte-for-byte through to_json
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "rank": self.lattice.rank,
            "gram": [list(row) for row in self.lattice.gram],
            "basis_labels": list(self.lattice.basis_labels),
            "polarization": list(self.polarization.coords),
            "rr": {
                "d": self.rr.d,
                "c": self.rr.c,
                "c_prime": self.rr.c_prime,
                "vanishing_multiplier": self.rr.vanishing_multiplier,
            },
            "very_ample_multiplier": self.very_ample_multiplier,
            "strata": [
                {
                    "label": s.label,
                    "closure_dim": s.closure_dim,
                    "specializes_from": list(s.specializes_from),
                    "oracle_complete_below": (
                        None
                        if s.oracle_complete_below is None
                        else format_rational(s.oracle_complete_below)
                    ),
                    "candidates": [
                        {
                            "label": c.label,
                            "class": (
                                None
                                if c.curve_class is None
                                else list(c.curve_class.coords)
                            ),
                            "t": c.degree_t,
                            "m": c.mult_m,
                        }
                        for c in s.candidates
                    ],
                }
                for s in self.strata
            ],
            "blowup_gens": {
                label: [
                    {"label": gl, "class": list(cls.coords)}
                    for gl, cls in gens.generators
                ]
                for label, gens in self.blowup_gens.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_document(), indent=2) + "\n"


def _validate_model(model: SurfaceModel) -> None:
    lat = model.lattice
    if model.polarization.lattice != lat:
        raise ModelError("polarization does not live on the model lattice")
    d = pair(model.polarization, model.polarization)
    if d != model.rr.d:
        raise ModelError(
            f"degree mismatch: polarization self-intersection is {d} "
            f"but rr.d is {model.rr.d}"
        )
    if model.very_ample_multiplier < 1:
        raise ModelError("very_ample_multiplier must be a positive integer")
    if EXCEPTIONAL_LABEL in lat.basis_labels:
        raise ModelError(
            f"basis label {EXCEPTIONAL_LABEL!r} is reserved for the blow-up class"
        )

    labels = [s.label for s in model.strata]
    if len(set(labels)) != len(labels):
        raise ModelError("stratum labels are not distinct")
    dense = [s.label for s in model.strata if s.closure_dim == 2]
    if len(dense) != 1:
        raise ModelError(
            f"exactly one dense (closure_dim = 2) stratum required, got {dense or 'none'}"
        )

    # specialization relation must reference known strata and be acyclic
    sorter = graphlib.TopologicalSorter()
    known = set(labels)
    for s in model.strata:
        for general in s.specializes_from:
            if general not in known:
                raise ModelError(
                    f"stratum {s.label!r} specializes from unknown stratum {general!r}"
                )
        sorter.add(s.label, *s.specializes_from)
    try:
        sorter.prepare()
    except graphlib.CycleError as exc:
        raise ModelError(f"cyclic specialization relation: {exc.args[1]}") from exc

    ext = model.blowup_lattice
    for s in model.strata:
        _validate_stratum(model, s)
        gens = model.blowup_gens.get(s.label)
        if gens is not None:
            _validate_blowup_gens(model, s.label, gens, ext)
    for label in model.blowup_gens:
        if label not in known:
            raise ModelError(f"blow-up generators given for unknown stratum {label!r}")


def _validate_stratum(model: SurfaceModel, s: PointStratum) -> None:
    cap = None
    ocb = s.oracle_complete_below
    if ocb is not None:
        if ocb <= 0:
            raise ModelError(f"stratum {s.label!r}: completeness threshold must be positive")
        if ocb * ocb < model.rr.d:
            # keep certification honest: the table may not contain entries
            # beyond the degree bound implied by its own threshold
            cap = minimal_M(model.rr, ocb).B
    for c in s.candidates:
        if c.curve_class is not None:
            if c.curve_class.lattice != model.lattice:
                raise ModelError(
                    f"candidate {c.label!r} class does not live on the model lattice"
                )
            deg = pair(model.polarization, c.curve_class)
            if deg != c.degree_t:
                raise ModelError(
                    f"candidate {c.label!r}: declared degree {c.degree_t} differs "
                    f"from pairing {deg}"
                )
        if cap is not None and c.degree_t > cap:
            raise ModelError(
                f"candidate {c.label!r} has degree {c.degree_t} beyond the bound "
                f"{cap} implied by the completeness threshold {ocb}"
            )


def _validate_blowup_gens(
    model: SurfaceModel, label: str, gens: CurveGeneratorSet, ext: IntersectionLattice
) -> None:
    pushed = []
    for gl, cls in gens.generators:
        if cls.lattice != ext:
            raise ModelError(
                f"blow-up generator {gl!r} of stratum {label!r} does not live on "
                "the extended lattice"
            )
        pf = pushforward(model.lattice, cls)
        if not pf.is_zero():
            pushed.append(pf)
    if not is_strictly_positive_against(model.polarization, pushed):
        raise ModelError(
            f"polarization fails the plausible-ampleness gate against the "
            f"blow-up generators of stratum {label!r}"
        )


# ---------------------------------------------------------------------------
# JSON loading


def model_from_document(doc: dict) -> SurfaceModel:
    try:
        jsonschema.validate(doc, MODEL_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ModelError(f"schema violation: {exc.message}") from exc
    try:
        return _build_from_document(doc)
    except ModelError:
        raise
    except ValueError as exc:
        raise ModelError(str(exc)) from exc


def _build_from_document(doc: dict) -> SurfaceModel:
    lat = IntersectionLattice(
        rank=doc["rank"],
        gram=tuple(tuple(row) for row in doc["gram"]),
        basis_labels=tuple(doc["basis_labels"]),
    )
    polarization = lat.divisor(doc["polarization"])
    rr = RRData(
        d=doc["rr"]["d"],
        c=doc["rr"]["c"],
        c_prime=doc["rr"]["c_prime"],
        vanishing_multiplier=doc["rr"]["vanishing_multiplier"],
    )
    strata = []
    for sd in doc["strata"]:
        candidates = tuple(
            CurveCandidate(
                label=cd["label"],
                degree_t=cd["t"],
                mult_m=cd["m"],
                curve_class=None if cd["class"] is None else lat.divisor(cd["class"]),
            )
            for cd in sd["candidates"]
        )
        ocb = sd["oracle_complete_below"]
        strata.append(
            PointStratum(
                label=sd["label"],
                closure_dim=sd["closure_dim"],
                specializes_from=tuple(sd["specializes_from"]),
                candidates=candidates,
                oracle_complete_below=None if ocb is None else parse_rational(ocb),
            )
        )
    ext = extend_blowup(lat, EXCEPTIONAL_LABEL)
    blowup_gens = {
        label: CurveGeneratorSet(
            generators=tuple((gd["label"], ext.divisor(gd["class"])) for gd in gen_list),
            completeness_assertion=True,
        )
        for label, gen_list in doc["blowup_gens"].items()
    }
    return SurfaceModel(
        name=doc["name"],
        lattice=lat,
        polarization=polarization,
        rr=rr,
        very_ample_multiplier=doc["very_ample_multiplier"],
        strata=tuple(strata),
        blowup_gens=blowup_gens,
    )


def load_model(text: str) -> SurfaceModel:
    """Parse and fully validate a model document; every violated
    invariant is a load-time error naming what failed."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ModelError("model document must be a JSON object")
    return model_from_document(doc)


def load_model_file(path) -> SurfaceModel:
    with open(path, "r", encoding="utf-8") as fh:
        return load_model(fh.read())


# ---------------------------------------------------------------------------
# Built-in models

_PLANE_CURVE_CAP = 3


def projective_plane(e: int = 1) -> SurfaceModel:
    """The plane with the degree-e polarization: rank-1 lattice, d = e^2.

    The curve table encodes which (degree, multiplicity) pairs are
    realizable by irreducible plane curves: the line, and degree-k curves
    with a point of multiplicity up to k-1 (multiplicity k would force a
    cone of lines, reducible for k >= 2).  That rule is the completeness
    basis of the table: no irreducible curve beats the line's ratio e.
    """
    if e < 1:
        raise ModelError(f"polarization degree must be positive, got {e}")
    lat = IntersectionLattice(rank=1, gram=((1,),), basis_labels=("H",))
    H = lat.basis_vector("H")
    candidates = [CurveCandidate(label="line", degree_t=e, mult_m=1, curve_class=H)]
    for k in range(2, _PLANE_CURVE_CAP + 1):
        for m in range(1, k):
            candidates.append(
                CurveCandidate(
                    label=f"deg{k}_mult{m}",
                    degree_t=e * k,
                    mult_m=m,
                    curve_class=lat.divisor((k,)),
                )
            )
    ext = extend_blowup(lat, EXCEPTIONAL_LABEL)
    gens = CurveGeneratorSet(
        generators=(
            (EXCEPTIONAL_LABEL, ext.divisor((0, 1))),
            ("H-Ex", ext.divisor((1, -1))),
        )
    )
    return SurfaceModel(
        name=f"projective_plane({e})",
        lattice=lat,
        polarization=e * H,
        rr=RRData(d=e * e, c=3 * e, c_prime=1),
        very_ample_multiplier=1,
        strata=(
            PointStratum(
                label="generic",
                closure_dim=2,
                candidates=tuple(candidates),
                oracle_complete_below=Fraction(e),
            ),
        ),
        blowup_gens={"generic": gens},
    )


def quadric(a: int = 1, b: int = 1) -> SurfaceModel:
    """The smooth quadric (product of two lines) with the (a, b)
    polarization: hyperbolic rank-2 lattice, d = 2ab.  The local constant
    is min(a, b), cut out by the ruling of the larger degree."""
    if a < 1 or b < 1:
        raise ModelError(f"polarization bidegree must be positive, got ({a}, {b})")
    lat = IntersectionLattice(rank=2, gram=((0, 1), (1, 0)), basis_labels=("f1", "f2"))
    f1, f2 = lat.basis_vector("f1"), lat.basis_vector("f2")
    L = a * f1 + b * f2
    candidates = (
        # the f1 ruling meets L in b, the f2 ruling in a
        CurveCandidate(label="ruling_f1", degree_t=b, mult_m=1, curve_class=f1),
        CurveCandidate(label="ruling_f2", degree_t=a, mult_m=1, curve_class=f2),
        CurveCandidate(label="diagonal", degree_t=a + b, mult_m=1, curve_class=f1 + f2),
    )
    ext = extend_blowup(lat, EXCEPTIONAL_LABEL)
    gens = CurveGeneratorSet(
        generators=(
            (EXCEPTIONAL_LABEL, ext.divisor((0, 0, 1))),
            ("f1-Ex", ext.divisor((1, 0, -1))),
            ("f2-Ex", ext.divisor((0, 1, -1))),
        )
    )
    return SurfaceModel(
        name=f"quadric({a},{b})",
        lattice=lat,
        polarization=L,
        rr=RRData(d=2 * a * b, c=2 * a + 2 * b, c_prime=1),
        very_ample_multiplier=1,
        strata=(
            PointStratum(
                label="generic",
                closure_dim=2,
                candidates=candidates,
                oracle_complete_below=Fraction(min(a, b)),
            ),
        ),
        blowup_gens={"generic": gens},
    )


def f1_anticanonical() -> SurfaceModel:
    """The one-point blow-up of the plane with its anticanonical
    polarization 3H - E, d = 8.  The local constant is 2 at a general
    point (cut out by the fiber H - E) and drops to 1 on the exceptional
    curve E, which gives the two-stratum structure."""
    lat = IntersectionLattice(rank=2, gram=((1, 0), (0, -1)), basis_labels=("H", "E"))
    H, E = lat.basis_vector("H"), lat.basis_vector("E")
    L = 3 * H - E
    fiber = H - E
    generic_candidates = (
        CurveCandidate(label="fiber", degree_t=2, mult_m=1, curve_class=fiber),
        CurveCandidate(label="line", degree_t=3, mult_m=1, curve_class=H),
        CurveCandidate(label="conic_node", degree_t=5, mult_m=2, curve_class=2 * H - E),
    )
    on_E_candidates = (
        CurveCandidate(label="E", degree_t=1, mult_m=1, curve_class=E),
        CurveCandidate(label="fiber", degree_t=2, mult_m=1, curve_class=fiber),
        CurveCandidate(label="line", degree_t=3, mult_m=1, curve_class=H),
    )
    ext = extend_blowup(lat, EXCEPTIONAL_LABEL)
    generic_gens = CurveGeneratorSet(
        generators=(
            (EXCEPTIONAL_LABEL, ext.divisor((0, 0, 1))),
            ("E", ext.divisor((0, 1, 0))),
            ("H-E-Ex", ext.divisor((1, -1, -1))),
        )
    )
    on_E_gens = CurveGeneratorSet(
        generators=(
            (EXCEPTIONAL_LABEL, ext.divisor((0, 0, 1))),
            ("E-Ex", ext.divisor((0, 1, -1))),
            ("H-E-Ex", ext.divisor((1, -1, -1))),
        )
    )
    return SurfaceModel(
        name="f1_anticanonical",
        lattice=lat,
        polarization=L,
        rr=RRData(d=8, c=8, c_prime=1),
        very_ample_multiplier=1,
        strata=(
            PointStratum(
                label="generic",
                closure_dim=2,
                candidates=generic_candidates,
                oracle_complete_below=Fraction(2),
            ),
            PointStratum(
                label="on_E",
                closure_dim=1,
                specializes_from=("generic",),
                candidates=on_E_candidates,
                oracle_complete_below=Fraction(2),
            ),
        ),
        blowup_gens={"generic": generic_gens, "on_E": on_E_gens},
    )


_BUILTINS = {
    "projective_plane": projective_plane,
    "quadric": quadric,
    "f1_anticanonical": f1_anticanonical,
}


def builtin(name: str, **params) -> SurfaceModel:
    """Construct a certified built-in model by name."""
    try:
        ctor = _BUILTINS[name]
    except KeyError:
        raise ModelError(
            f"unknown built-in {name!r}; available: {sorted(_BUILTINS)}"
        ) from None
    try:
        return ctor(**params)
    except TypeError as exc:
        raise ModelError(f"invalid parameters for {name!r}: {exc}") from exc


def builtin_suite() -> Tuple[SurfaceModel, ...]:
    """The models every suite-wide invariant is checked against."""
    return (
        projective_plane(1),
        projective_plane(2),
        quadric(1, 1),
        quadric(2, 2),
        f1_anticanonical(),
    )
