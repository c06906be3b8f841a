import json
from fractions import Fraction

import pytest

from seshadri.engine import (
    Certification,
    CurveCandidate,
    EngineError,
    PointStratum,
    cross_check,
    epsilon,
    epsilon_via_curves,
    epsilon_via_nef,
    global_epsilon,
    low_epsilon_strata,
    sigma_local,
    sublevel_set,
)
from seshadri.models import (
    SurfaceModel,
    builtin_suite,
    f1_anticanonical,
    load_model,
    projective_plane,
    quadric,
)
from seshadri.bounds import RRData
from seshadri.lattice import IntersectionLattice
from seshadri.values import SeshadriValue, cmp_value


def test_plane_epsilon_is_one():
    model = projective_plane(1)
    res = epsilon_via_curves(model, model.stratum("generic"))
    assert res.value == SeshadriValue.exact(1)
    assert res.witness.label == "line"
    assert res.certification is Certification.EXACT_CERTIFIED


def test_f1_on_E_witnessed_by_E():
    model = f1_anticanonical()
    res = epsilon_via_curves(model, model.stratum("on_E"), Fraction(2))
    assert res.value == SeshadriValue.exact(1)
    assert res.witness.label == "E"
    assert res.certification is Certification.EXACT_CERTIFIED


def test_f1_generic_is_two_with_fiber_witness():
    model = f1_anticanonical()
    res = epsilon_via_curves(model, model.stratum("generic"))
    assert res.value == SeshadriValue.exact(2)
    assert res.witness.label == "fiber"
    # independently via the two-point blow-up nef test
    nef = epsilon_via_nef(model, model.stratum("generic"))
    assert nef.value == res.value


def test_nef_plane():
    model = projective_plane(1)
    res = epsilon_via_nef(model, model.stratum("generic"))
    assert res.value == SeshadriValue.exact(1)


def test_nef_f1_on_E():
    model = f1_anticanonical()
    res = epsilon_via_nef(model, model.stratum("on_E"))
    assert res.value == SeshadriValue.exact(1)
    assert res.witness.label == "E-Ex"


def test_nef_missing_data_is_error():
    model = f1_anticanonical()
    orphan = PointStratum(label="nowhere", closure_dim=0)
    with pytest.raises(EngineError):
        epsilon_via_nef(model, orphan)


def test_cross_check_all_builtin_strata():
    for model in builtin_suite():
        for stratum in model.strata:
            assert cross_check(model, stratum)


def _doc_without_candidate(drop_label):
    doc = json.loads(f1_anticanonical().to_json())
    for sd in doc["strata"]:
        if sd["label"] == "on_E":
            sd["candidates"] = [c for c in sd["candidates"] if c["label"] != drop_label]
    return doc


def test_cross_check_detects_omitted_curve():
    model = load_model(json.dumps(_doc_without_candidate("E")))
    assert not cross_check(model, model.stratum("on_E"))


def test_epsilon_raises_on_path_disagreement():
    model = load_model(json.dumps(_doc_without_candidate("E")))
    with pytest.raises(EngineError, match="on_E"):
        epsilon(model, model.stratum("on_E"))


def _bare_model(d, c, candidates=(), ocb=None, rank1_degree=None):
    e = rank1_degree if rank1_degree is not None else 1
    lat = IntersectionLattice(rank=1, gram=((1,),), basis_labels=("H",))
    return SurfaceModel(
        name="bare",
        lattice=lat,
        polarization=lat.divisor((e,)),
        rr=RRData(d=d, c=c, c_prime=1),
        very_ample_multiplier=1,
        strata=(
            PointStratum(
                label="generic",
                closure_dim=2,
                candidates=tuple(candidates),
                oracle_complete_below=ocb,
            ),
        ),
        blowup_gens={},
    )


def test_empty_table_without_assertion_warns():
    model = _bare_model(d=4, c=6, rank1_degree=2)
    res = epsilon_via_curves(model, model.stratum("generic"))
    assert res.value == SeshadriValue.exact(2)  # sqrt(4)
    assert res.certification is Certification.UPPER_BOUND_ONLY
    assert "completeness" in res.warning


def test_empty_table_with_partial_assertion_gives_lower_bound():
    model = _bare_model(d=4, c=6, ocb=Fraction(3, 2), rank1_degree=2)
    res = epsilon_via_curves(model, model.stratum("generic"))
    assert res.certification is Certification.LOWER_BOUND_ONLY
    assert res.value == SeshadriValue.exact(Fraction(3, 2))
    assert res.certified_above == Fraction(3, 2)


def test_incomplete_table_gives_upper_bound():
    cand = CurveCandidate(label="c", degree_t=3, mult_m=2)
    model = _bare_model(d=4, c=6, candidates=(cand,), rank1_degree=2)
    res = epsilon_via_curves(model, model.stratum("generic"))
    assert res.value == SeshadriValue.exact(Fraction(3, 2))
    assert res.certification is Certification.UPPER_BOUND_ONLY


def test_sqrt_cap_certified_by_complete_oracle():
    # complete past sqrt(5) with nothing below: value is irrational sqrt(5)
    cand = CurveCandidate(label="c", degree_t=5, mult_m=2)
    lat = IntersectionLattice(rank=1, gram=((5,),), basis_labels=("H",))
    model = SurfaceModel(
        name="irr",
        lattice=lat,
        polarization=lat.divisor((1,)),
        rr=RRData(d=5, c=7, c_prime=1),
        very_ample_multiplier=1,
        strata=(
            PointStratum(
                label="generic",
                closure_dim=2,
                candidates=(cand,),
                oracle_complete_below=Fraction(5, 2),
            ),
        ),
        blowup_gens={},
    )
    res = epsilon_via_curves(model, model.stratum("generic"))
    assert not res.value.is_exact
    assert res.value.sqrt_of == 5
    assert res.certification is Certification.EXACT_CERTIFIED


def test_witness_tie_break_is_deterministic():
    cands = (
        CurveCandidate(label="b", degree_t=2, mult_m=1),
        CurveCandidate(label="a", degree_t=2, mult_m=1),
        CurveCandidate(label="big", degree_t=4, mult_m=2),
    )
    model = _bare_model(d=9, c=9, candidates=cands, ocb=Fraction(2), rank1_degree=3)
    res = epsilon_via_curves(model, model.stratum("generic"))
    assert res.witness.label == "a"


def test_global_epsilon_f1():
    res = global_epsilon(f1_anticanonical())
    assert res.value == SeshadriValue.exact(1)
    assert res.attained_at == "on_E"
    assert res.witness.label == "E"
    assert res.certification is Certification.EXACT_CERTIFIED


def test_global_epsilon_plane_two():
    res = global_epsilon(projective_plane(2))
    assert res.value == SeshadriValue.exact(2)


def test_sublevel_f1():
    model = f1_anticanonical()
    assert sublevel_set(model, Fraction(1)) == ["on_E"]
    assert sublevel_set(model, Fraction(2)) == ["generic", "on_E"]
    # anything >= sqrt(8) catches every stratum
    assert sublevel_set(model, Fraction(3)) == ["generic", "on_E"]


def test_sublevel_closure_violation_is_error():
    # doctor the table so the dense stratum dips below its specialization
    doc = json.loads(f1_anticanonical().to_json())
    for sd in doc["strata"]:
        if sd["label"] == "generic":
            sd["candidates"].append({"label": "cheat", "class": None, "t": 1, "m": 2})
            sd["oracle_complete_below"] = "1/2"
    model = load_model(json.dumps(doc))
    with pytest.raises(EngineError, match="closed under specialization"):
        sublevel_set(model, Fraction(1, 2))


def test_sublevel_requires_certification():
    model = _bare_model(d=4, c=6, rank1_degree=2)
    with pytest.raises(EngineError, match="certified"):
        sublevel_set(model, Fraction(1))


def test_sigma_f1():
    sig = sigma_local(f1_anticanonical())
    assert sig.value == SeshadriValue.exact(2)
    assert sig.attained_at == "generic"


def test_sigma_quadric22_ruling_witness():
    model = quadric(2, 2)
    sig = sigma_local(model)
    assert sig.value == SeshadriValue.exact(2)
    res = epsilon(model, model.stratum("generic"))
    assert res.witness.degree_t == 2 and res.witness.mult_m == 1


def test_low_epsilon_strata_empty_on_builtins():
    for model in builtin_suite():
        assert low_epsilon_strata(model, Fraction(1, 100)) == []


def test_steffens_bound_everywhere():
    for model in builtin_suite():
        ceiling = SeshadriValue.sqrt(model.rr.d)
        for stratum in model.strata:
            for res in (
                epsilon_via_curves(model, stratum),
                epsilon_via_nef(model, stratum),
            ):
                assert cmp_value(res.value, ceiling) <= 0
