"""Finite-family scans: the observed value set up to a threshold, its
containment in the enumerated candidate superset, semicontinuity across
declared specializations, and attainment of the family supremum.

The base of the family is a finite list of members with a declared
specialization partial order; all order-theoretic statements (values do
not increase under specialization, the supremum is attained) are checked
exactly on that finite structure.
"""

from __future__ import annotations

import csv
import graphlib
import io
import json
import os
from dataclasses import dataclass
from typing import List, Optional, Tuple

import jsonschema

from .bounds import RRData, candidate_ratios, minimal_M
from .engine import Certification, SeshadriResult, epsilon, global_epsilon, sigma_local
from .models import SurfaceModel, load_model_file, model_from_document
from .values import Rational, SeshadriValue, cmp_value, format_rational


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class Family:
    members: Tuple[Tuple[str, SurfaceModel], ...]
    degree: int
    member_specialization: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        object.__setattr__(
            self, "member_specialization", tuple(tuple(p) for p in self.member_specialization)
        )
        if not self.members:
            raise FamilyError("a family needs at least one member")
        labels = [label for label, _ in self.members]
        if len(set(labels)) != len(labels):
            raise FamilyError("member labels are not distinct")
        for label, model in self.members:
            if model.rr.d != self.degree:
                raise FamilyError(
                    f"member {label!r} has degree {model.rr.d}, family degree is "
                    f"{self.degree}; the degree is constant across a family"
                )
        known = set(labels)
        sorter = graphlib.TopologicalSorter()
        for general, special in self.member_specialization:
            if general not in known or special not in known:
                raise FamilyError(
                    f"specialization ({general!r}, {special!r}) references unknown members"
                )
            sorter.add(special, general)
        try:
            sorter.prepare()
        except graphlib.CycleError as exc:
            raise FamilyError(f"cyclic member specialization: {exc.args[1]}") from exc

    def member(self, label: str) -> SurfaceModel:
        for l, m in self.members:
            if l == label:
                return m
        raise FamilyError(f"no member {label!r}")


@dataclass(frozen=True)
class Verdict:
    kind: str  # "member" or "stratum"
    context: str  # family or member label
    general: str
    special: str
    general_value: SeshadriValue
    special_value: SeshadriValue
    passed: bool

    def to_document(self) -> dict:
        return {
            "kind": self.kind,
            "context": self.context,
            "general": self.general,
            "special": self.special,
            "general_value": self.general_value.serialize(),
            "special_value": self.special_value.serialize(),
            "passed": self.passed,
        }


@dataclass(frozen=True)
class FamilyScanReport:
    alpha: Rational
    degree: int
    sigma_family: SeshadriValue
    sigma_attained_at: Tuple[str, str]
    epsilon_table: Tuple[Tuple[str, str, SeshadriResult], ...]
    sigma_cap: Tuple[Rational, ...]
    candidate_superset: Tuple[Rational, ...]
    candidate_superset_raw: Tuple[Rational, ...]
    semicontinuity_verdicts: Tuple[Verdict, ...]
    jump_members: Tuple[str, ...]
    uncertified: Tuple[Tuple[str, str], ...]

    def to_document(self) -> dict:
        return {
            "alpha": format_rational(self.alpha),
            "degree": self.degree,
            "sigma_family": self.sigma_family.serialize(),
            "sigma_attained_at": {
                "member": self.sigma_attained_at[0],
                "stratum": self.sigma_attained_at[1],
            },
            "epsilon_table": [
                {"member": m, "stratum": s, **res.to_document()}
                for m, s, res in self.epsilon_table
            ],
            "sigma_cap": [format_rational(q) for q in self.sigma_cap],
            "sigma_cap_size": len(self.sigma_cap),
            "candidate_superset": [format_rational(q) for q in self.candidate_superset],
            "candidate_superset_raw": [
                format_rational(q) for q in self.candidate_superset_raw
            ],
            "semicontinuity_verdicts": [v.to_document() for v in self.semicontinuity_verdicts],
            "jump_members": list(self.jump_members),
            "uncertified": [{"member": m, "stratum": s} for m, s in self.uncertified],
        }

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["param_label", "stratum", "epsilon", "certification", "witness"])
        for member, stratum, res in self.epsilon_table:
            writer.writerow(
                [
                    member,
                    stratum,
                    res.value.serialize(),
                    res.certification.value,
                    res.witness.label if res.witness else "",
                ]
            )
        return out.getvalue()


def member_candidate_superset(
    model: SurfaceModel, alpha: Rational
) -> Tuple[List[Rational], List[Rational]]:
    """Candidate ratios for one member at threshold alpha, as (divided by
    the very-ampleness multiplier, raw for the scaled polarization).

    The degree bound argument requires a very ample polarization; when
    the model declares multiplier v, the enumeration runs for the v-th
    power (degree v^2*d, threshold v*alpha) and the ratios divide back by
    v.
    """
    v = model.very_ample_multiplier
    rr = model.rr
    scaled = RRData(
        d=v * v * rr.d,
        c=v * rr.c,
        c_prime=rr.c_prime,
        vanishing_multiplier=rr.vanishing_multiplier,
    )
    bound = minimal_M(scaled, v * alpha)
    raw = candidate_ratios(bound.B, v * alpha)
    return [q / v for q in raw], raw


def semicontinuity_check(family: Family) -> List[Verdict]:
    """Exact order checks on declared specializations: the global value
    of a special member never exceeds the general member's, and within
    each member a special stratum never exceeds the strata it
    specializes from."""
    verdicts: List[Verdict] = []
    global_values = {label: global_epsilon(model).value for label, model in family.members}
    for general, special in family.member_specialization:
        gv, sv = global_values[general], global_values[special]
        verdicts.append(
            Verdict(
                kind="member",
                context="family",
                general=general,
                special=special,
                general_value=gv,
                special_value=sv,
                passed=cmp_value(sv, gv) <= 0,
            )
        )
    for label, model in family.members:
        stratum_values = {s.label: epsilon(model, s).value for s in model.strata}
        for s in model.strata:
            for general in s.specializes_from:
                gv, sv = stratum_values[general], stratum_values[s.label]
                verdicts.append(
                    Verdict(
                        kind="stratum",
                        context=label,
                        general=general,
                        special=s.label,
                        general_value=gv,
                        special_value=sv,
                        passed=cmp_value(sv, gv) <= 0,
                    )
                )
    return verdicts


def scan(family: Family, alpha: Rational) -> FamilyScanReport:
    """Full family report at threshold alpha < sqrt(d): per-member
    per-stratum values, the finite observed value set up to alpha with
    its candidate-superset containment, semicontinuity verdicts, the
    attained supremum, and members whose global value jumps below the
    generic one."""
    d = family.degree
    if alpha <= 0 or alpha * alpha >= d:
        raise FamilyError(
            f"alpha must satisfy 0 < alpha^2 < d for a certified scan, got {alpha}"
        )

    rows: List[Tuple[str, str, SeshadriResult]] = []
    uncertified: List[Tuple[str, str]] = []
    sigma_cap_set = set()
    superset = set()
    superset_raw = set()
    alpha_value = SeshadriValue.exact(alpha)

    for label, model in sorted(family.members, key=lambda lm: lm[0]):
        divided, raw = member_candidate_superset(model, alpha)
        superset.update(divided)
        superset_raw.update(raw)
        for stratum in sorted(model.strata, key=lambda s: s.label):
            res = epsilon(model, stratum, alpha)
            rows.append((label, stratum.label, res))
            if res.certification is Certification.EXACT_CERTIFIED:
                if cmp_value(res.value, alpha_value) <= 0:
                    # below alpha < sqrt(d) every certified value is rational
                    sigma_cap_set.add(res.value.rational)
            else:
                uncertified.append((label, stratum.label))

    missing = sigma_cap_set - superset
    if missing:
        raise FamilyError(
            "observed values escape the candidate superset: "
            + ", ".join(format_rational(q) for q in sorted(missing))
        )

    sigma_family: Optional[SeshadriValue] = None
    attained = ("", "")
    for label, model in sorted(family.members, key=lambda lm: lm[0]):
        sig = sigma_local(model)
        if sigma_family is None or cmp_value(sig.value, sigma_family) > 0:
            sigma_family = sig.value
            attained = (label, sig.attained_at)
    assert sigma_family is not None

    global_values = {label: global_epsilon(model).value for label, model in family.members}
    specials = {special for _, special in family.member_specialization}
    generals = [label for label, _ in family.members if label not in specials]
    reference = None
    for label in generals or list(global_values):
        if reference is None or cmp_value(global_values[label], reference) > 0:
            reference = global_values[label]
    jump_members = tuple(
        label
        for label, _ in sorted(family.members, key=lambda lm: lm[0])
        if cmp_value(global_values[label], reference) < 0
    )

    return FamilyScanReport(
        alpha=alpha,
        degree=d,
        sigma_family=sigma_family,
        sigma_attained_at=attained,
        epsilon_table=tuple(rows),
        sigma_cap=tuple(sorted(sigma_cap_set)),
        candidate_superset=tuple(sorted(superset)),
        candidate_superset_raw=tuple(sorted(superset_raw)),
        semicontinuity_verdicts=tuple(semicontinuity_check(family)),
        jump_members=jump_members,
        uncertified=tuple(uncertified),
    )


FAMILY_SCHEMA = {
    "type": "object",
    "required": ["degree", "members"],
    "additionalProperties": False,
    "properties": {
        "degree": {"type": "integer", "minimum": 1},
        "members": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["param_label", "model"],
                "additionalProperties": False,
                "properties": {
                    "param_label": {"type": "string", "minLength": 1},
                    "model": {"anyOf": [{"type": "object"}, {"type": "string"}]},
                },
            },
        },
        "member_specialization": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "string"},
                "minItems": 2,
                "maxItems": 2,
            },
        },
    },
}


def load_family(text: str, base_dir: Optional[str] = None) -> Family:
    """Parse a family document; member models are inline objects or paths
    to model files (resolved relative to base_dir)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FamilyError(f"invalid JSON: {exc}") from exc
    try:
        jsonschema.validate(doc, FAMILY_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise FamilyError(f"schema violation: {exc.message}") from exc

    members = []
    for md in doc["members"]:
        spec = md["model"]
        if isinstance(spec, str):
            path = spec if base_dir is None else os.path.join(base_dir, spec)
            model = load_model_file(path)
        else:
            model = model_from_document(spec)
        members.append((md["param_label"], model))
    return Family(
        members=tuple(members),
        degree=doc["degree"],
        member_specialization=tuple(
            (g, s) for g, s in doc.get("member_specialization", [])
        ),
    )
