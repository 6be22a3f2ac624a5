import hashlib
import json

import pytest

from linosc.corpus import CORPUS_NAMES, corpus_variety, random_variety
from linosc.errors import InvalidParameters, SingularOrExcessCodim
from linosc.osculation import osculation_order
from linosc.quadrics import (QuadricSystem, base_locus_contains, classify_pencil_with_hyperplane_base, prolongation,
                             second_fundamental_system)
from linosc.variety import chart_space, contains_linear_space, implicit_to_graph, validate_smooth_point
from linosc.verify import THEOREMS, TrialReport, replay_trial, trial_seed, verify_theorem


def test_corpus_examples():
    segre = corpus_variety("segre_quadric")
    assert segre.variety.ambient_dim == 4 and len(segre.variety.generators) == 1
    assert contains_linear_space(segre.variety, segre.space("ruling_e1_origin"))
    assert contains_linear_space(segre.variety, segre.space("ruling_e2_origin"))

    scroll = corpus_variety("scroll_codim2")
    plane = scroll.space("x3_zero")
    jet = implicit_to_graph(scroll.variety, plane.base_point, 2)
    hyper = chart_space(jet, plane).directions
    assert classify_pencil_with_hyperplane_base(second_fundamental_system(jet), hyper).case == 3
    assert contains_linear_space(scroll.variety, plane)

    cubic = corpus_variety("graph_cubic")
    axis = cubic.space("x1_axis")
    assert not contains_linear_space(cubic.variety, axis)
    assert osculation_order(implicit_to_graph(cubic.variety, axis.base_point, 4), axis).order_found == 2


def test_designated_points_are_smooth_except_vertex_rulings():
    for name in CORPUS_NAMES:
        entry = corpus_variety(name)
        for label, space in entry.spaces:
            if label.endswith("_origin"):
                # Rulings through a cone vertex: oracle examples only.
                with pytest.raises(SingularOrExcessCodim):
                    validate_smooth_point(entry.variety, space.base_point)
                assert contains_linear_space(entry.variety, space)
            else:
                validate_smooth_point(entry.variety, space.base_point)
        assert json.loads(json.dumps(entry.to_json()))["name"] == entry.name


def test_unknown_corpus_name():
    with pytest.raises(KeyError):
        corpus_variety("klein_bottle")


def test_random_variety_profiles():
    sv = random_variety(3, 2, 1, 6, "vanish_on_L", order=4)
    jet = implicit_to_graph(sv.variety, sv.point, 4)
    rep = osculation_order(jet, sv.space, 4)
    assert rep.order_found == "at_least_max"
    sv = random_variety(5, 4, 1, 3, "base_locus_W", k=2)
    jet = implicit_to_graph(sv.variety, sv.point, 2)
    assert base_locus_contains(second_fundamental_system(jet), chart_space(jet, sv.space).directions)


def test_trial_seed_is_stable():
    assert trial_seed(7, 0) == trial_seed(7, 0)
    assert trial_seed(7, 0) != trial_seed(7, 1) != trial_seed(8, 1)
    assert trial_seed(0, 0) == int.from_bytes(hashlib.sha256(b"0:0").digest()[:8], "big")


def test_spec_harness_examples():
    rep = verify_theorem("thm6_lemma", {"n": 3, "k": 2, "a": 1}, trials=200, seed=7)
    assert rep.status == "pass" and rep.passed == 200
    rep = verify_theorem("thm2", {"n": 3, "k": 2, "a": 1}, trials=200, seed=7)
    assert rep.status == "pass" and rep.failed == 0


def test_thm4_corpus_checks():
    rep = verify_theorem("thm4", trials=0, seed=0)
    names = {c["name"]: c for c in rep.checks}
    assert all(c["status"] == "pass" for c in rep.checks)
    for n in range(2, 7):
        assert names[f"case2_prolongation_empty_n{n}"]["detail"]["report"] == "case 2: impossible for nondegenerate X"
    assert prolongation(QuadricSystem.from_json({"n": 2, "quadrics": [[["0", "1/2"], ["1/2", "0"]]]})) == []


@pytest.mark.parametrize("theorem,params", [("thm2", {"n": 4, "k": 3}), ("thm5", None),
                                            ("thm6_lemma", {"n": 5, "k": 4, "a": 2})])
def test_serial_and_parallel_reports_are_identical(theorem, params):
    serial = verify_theorem(theorem, params, trials=24, seed=3, workers=1)
    parallel = verify_theorem(theorem, params, trials=24, seed=3, workers=3)
    assert serial.dumps() == parallel.dumps()


def test_lsv_threads_caps_workers(monkeypatch):
    from linosc.verify import default_workers
    monkeypatch.setenv("LSV_THREADS", "2")
    assert default_workers() == 2
    monkeypatch.setenv("LSV_THREADS", "many")
    with pytest.raises(InvalidParameters):
        default_workers()


def test_failure_records_replay_exactly():
    # The literal thm1 construction fails at special points; each record must replay bit-exactly.
    rep = verify_theorem("thm1", {"n": 2, "k": 1}, trials=4, seed=1)
    assert rep.failures
    for record in rep.failures:
        status, again = replay_trial("thm1", {"n": 2, "k": 1}, 1, record["trial_index"])
        assert status == "fail" and again == record


def test_report_schema():
    rep = verify_theorem("thm5", {"grid": [[2, 0]]}, trials=3, seed=0)
    data = json.loads(rep.dumps())
    assert set(data) == {"theorem", "params", "seed", "trials", "passed", "failed", "inconclusive",
                         "checks", "failures", "status"}
    assert isinstance(rep, TrialReport) and "thm5: pass" in rep.summary()


@pytest.mark.parametrize("theorem,params", [
    ("thm1", {"n": 3, "k": 3}),
    ("thm2", {"n": 4, "k": 1}),
    ("thm4", {"n": 4, "a": 1}),
    ("thm5", {"n": 5, "k": 2}),
    ("thm5", {"n": 4, "k": 2}),
    ("thm6_lemma", {"n": 4, "k": 2, "a": 1}),
    ("thm7", None),
])
def test_invalid_parameters_rejected(theorem, params):
    with pytest.raises(InvalidParameters):
        verify_theorem(theorem, params, trials=1)


def test_negative_trials_rejected():
    with pytest.raises(InvalidParameters):
        verify_theorem("thm5", trials=-1)


def test_theorem_ids():
    assert THEOREMS == ("thm1", "thm2", "thm3", "thm4", "thm5", "thm6_lemma")
