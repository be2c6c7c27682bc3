import pytest

from fanohkr import bwb, pipeline, toric
from fanohkr.cohvector import CohVector
from fanohkr.errors import ConsistencyError, Infeasible, NoModel
from fanohkr.exactseq import koszul_restrict
from fanohkr.invariants import chi_wedge2_tangent
from fanohkr.pipeline import FamilyModel, HomogeneousModel


def m217():
    factors = bwb.parse_factors("Gr(2,4)xP(3)")
    return factors, bwb.parse_bundle("Udual#O(1)+O(1,1)+O(1,0)", factors)


def test_m217_ambient_anchors():
    factors, e = m217()
    w = pipeline.omega_x_dual(factors, e)
    ed = bwb.dual(e)
    first = bwb.tensor(ed, w)
    second = bwb.tensor(bwb.tensor(bwb.ambient_cotangent(factors), w), ed)
    h0 = bwb.cohomology(factors, first)
    h1 = bwb.cohomology(factors, second)
    assert h0[0] == 9 and sum(h0) == 9
    assert h1[1] == 14 and sum(h1) == 14


def test_m217_restricted_anchors():
    factors, e = m217()
    w = pipeline.omega_x_dual(factors, e)
    ed = bwb.dual(e)
    wedges = [bwb.exterior_power(ed, j) for j in range(5)]
    for g, expected in [(bwb.tensor(ed, w), 9), (bwb.tensor(bwb.ambient_cotangent(factors), w), 14)]:
        amb = [bwb.cohomology(factors, bwb.tensor(x, g)) for x in wedges]
        assert koszul_restrict(amb, 3) == (expected, 0, 0, 0)


def test_m217_result(dataset):
    factors, e = m217()
    rec = dataset.entry("2-17").record
    assert pipeline.homogeneous_ci(factors, e, rec) == (5, 0, 0, 0)


def test_special_recipe_traces():
    trace = []
    assert pipeline.special_case("M2-1", trace=trace) == (1, 2, 7, 0)
    labels = dict(trace)
    assert labels["h^*(F, Omega^1_F)"] == (0, 2, 21, 0, 0)
    assert labels["h^*(Z, restriction)"] == (4, 0, 0, 0)
    trace = []
    assert pipeline.special_case("M2-3", trace=trace) == (1, 3, 1, 0)
    assert dict(trace)["h^*(Z, restriction)"] == (8, 0, 0, 0)


@pytest.mark.parametrize("tag,expected", [
    ("M1-1", (0, 0, 35, 0)),
    ("M4-13", (4, 0, 0, 0)),
    ("M10-1", (2, 24, 0, 0)),
])
def test_other_special_recipes(tag, expected):
    assert pipeline.special_case(tag) == expected


def test_weighted_hilbert_series():
    # degree-1 part of P(1,1,1,2,3) cut by two linear forms: one section
    assert pipeline.weighted_ci_hilbert((1, 1, 1, 2, 3), (1, 1, 6), 1) == 1
    assert pipeline.weighted_ci_hilbert((1, 1, 1, 1), (), 2) == 10


def test_blowup_reduce_bounds_the_ideal_twist():
    # restriction to Z need not be onto on H^0, so only h^0 - h^1 is forced
    prob, res = pipeline.blowup_reduce(CohVector([5, 0, 0, 0]), CohVector([2, 0, 0, 0]))
    vec = prob.solve(res).vector(res)
    assert vec.bounds()[:2] == [(3, 5), (0, 2)]
    assert vec[2] == 0 and vec[3] == 0
    prob.add_equal(res[1], 0)
    assert prob.solve(res).vector(res) == (3, 0, 0, 0)


def test_surface_table_checks_riemann_roch():
    assert pipeline.surface_table("Bl_8 P^2") == (0, 8, 2)
    assert pipeline.surface_degree("P1xP1") == 8
    with pytest.raises(ValueError):
        pipeline.surface_table("Bl9")


@pytest.mark.parametrize("fid", ["1-13", "1-14", "1-16", "1-17", "2-32", "2-34", "3-27", "4-1"])
def test_engines_agree_on_shared_families(dataset, fid):
    entry = dataset.entry(fid)
    results = {m.kind: pipeline.compute(m, entry.record, keep_trace=False).entries for m in entry.models}
    assert results["toric"] == results["homogeneous"] == entry.expected.as_tuple()


def test_underdetermined_toric_model_brackets_the_answer(dataset):
    entry = dataset.entry("9-1")
    toric_model = pipeline.choose_model(entry.models, "toric")
    report = pipeline.compute(toric_model, entry.record)
    assert not report.determined
    assert {name for name, _, _ in report.underdetermined} == {"pv12", "pv22"}
    best = pipeline.compute_best(entry.models, entry.record)
    assert best.determined and best.engine == "homogeneous"
    for (lo, hi), x in zip(report.wedge2.bounds(), best.wedge2.values()):
        assert lo <= x and (hi is None or x <= hi)


def test_printed_m222_bundle_is_infeasible(dataset):
    rec = dataset.entry("2-22").record
    factors = tuple(bwb.parse_factors("Gr(2,5)xP(3)"))
    model = FamilyModel(rec.id, HomogeneousModel(factors, "Q(1)#O+O(0,1)^3"))
    with pytest.raises(Infeasible):
        pipeline.compute(model, rec)


def test_chi_pin_is_not_needed_for_smooth_toric_fanos(dataset):
    entry = dataset.entry("2-33")
    model = pipeline.choose_model(entry.models, "toric").data
    vec = pipeline.toric_ci(model.fan, model.lattice, model.sections, None)
    assert vec == (chi_wedge2_tangent(entry.record), 0, 0, 0)


def test_choose_model_order(dataset):
    entry = dataset.entry("1-17")
    assert pipeline.choose_model(entry.models).kind == "toric"
    assert pipeline.choose_model(entry.models, "homogeneous").kind == "homogeneous"
    with pytest.raises(NoModel):
        pipeline.choose_model(entry.models, "special")
    with pytest.raises(NoModel):
        pipeline.choose_model([])


def test_model_and_record_must_match(dataset):
    entry = dataset.entry("1-17")
    with pytest.raises(ValueError):
        pipeline.compute(entry.models[0], dataset.entry("2-8").record)


def test_wrong_chi_is_detected(dataset):
    from dataclasses import replace

    entry = dataset.entry("1-17")
    bad = replace(entry.record, h12=1)
    model = pipeline.choose_model(entry.models, "toric")
    with pytest.raises((ConsistencyError, Infeasible)):
        pipeline.compute(model, bad)


def test_toric_hypersurface_without_pins_is_still_sound():
    fan, lat = toric.fan_from_weights([[1, 1, 1, 1, 1]], [1])
    vec = pipeline.toric_ci(fan, lat, [(2,)], pins=False)
    for (lo, hi), x in zip(vec.bounds(), (35, 0, 0, 0)):
        assert lo <= x and (hi is None or x <= hi)
