import json

import pytest

from charp.errors import (
    NotHomogeneousError,
    ParseError,
    UnknownCheckError,
)
from charp.harness import (
    CHECKS,
    dumps_report,
    jsonable,
    load_session,
    run_all,
    verify,
)
from charp.modcalc import AtLeast
from conftest import FIXTURES, fixture_path


def _write(tmp_path, payload, name="session.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


BASE = {
    "characteristic": 2,
    "variables": ["x", "y"],
    "ideal": [],
    "modules": {"M": {"presentation": [["x^2"]]}},
}


class TestLoadSession:
    def test_all_fixtures_load(self, sessions):
        for name in FIXTURES:
            s = sessions[name]
            assert s.qring.p in (2, 3)
            assert s.modules

    def test_fixture_fx1_shape(self, sessions):
        s = sessions["FX1"]
        assert set(s.modules) == {"M1"}
        assert set(s.sequences) == {"y"}
        assert set(s.ideals) == {"Jy"}
        assert set(s.primes) == {"px"}
        assert s.qring.equidimensional is True

    def test_inhomogeneous_generator_rejected(self, tmp_path):
        bad = dict(BASE, ideal=["x + x^2"])
        with pytest.raises(NotHomogeneousError):
            load_session(_write(tmp_path, bad))

    def test_inhomogeneous_module_entry_rejected(self, tmp_path):
        bad = dict(BASE, modules={"M": {"presentation": [["x + y^2"]]}})
        with pytest.raises(NotHomogeneousError):
            load_session(_write(tmp_path, bad))

    def test_unknown_variable_rejected(self, tmp_path):
        bad = dict(BASE, modules={"M": {"presentation": [["w^2"]]}})
        with pytest.raises(ParseError):
            load_session(_write(tmp_path, bad))

    def test_unknown_key_rejected(self, tmp_path):
        bad = dict(BASE, extra_key=1)
        with pytest.raises(ParseError):
            load_session(_write(tmp_path, bad))

    def test_composite_characteristic_rejected(self, tmp_path):
        bad = dict(BASE, characteristic=6)
        with pytest.raises(ParseError):
            load_session(_write(tmp_path, bad))

    def test_json_error_carries_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"characteristic": 2,\n  "variables": [}')
        with pytest.raises(ParseError) as err:
            load_session(path)
        assert "line" in str(err.value)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            load_session(tmp_path / "absent.json")

    def test_prime_lengths_validated(self, tmp_path):
        bad = dict(BASE, primes={"p": {"ideal": ["x"], "lengths": [1, -2]}})
        with pytest.raises(ParseError):
            load_session(_write(tmp_path, bad))

    def test_complex_loading_and_shift_inference(self, tmp_path):
        payload = dict(
            BASE,
            complexes={"K": [[["x", "y"]], [["y"], ["x"]]]},
        )
        s = load_session(_write(tmp_path, payload))
        K = s.complexes["K"]
        assert K.ranks == [1, 2, 1]
        assert K.shifts == [[0], [1, 1], [2]]

    def test_mixed_degree_complex_column_rejected(self, tmp_path):
        payload = dict(BASE, complexes={"K": [[["x", "y^2"]], [["y"], ["x"]]]})
        with pytest.raises(NotHomogeneousError):
            load_session(_write(tmp_path, payload))


class TestVerify:
    def test_grade_conj_fx1(self, sessions):
        result = verify(sessions["FX1"], "grade-conj", "M1")
        assert result["status"] == "pass"
        assert result["computed"] == {"grade": 1, "dim": 1, "d": 2}

    def test_lowpd_fx3(self, sessions):
        result = verify(sessions["FX3"], "lowpd", "M3", {"seq": "z"})
        assert result["status"] == "pass"
        assert result["computed"]["pd"] == 2
        assert result["computed"]["dim_ext"] == 1
        assert result["computed"]["verdict"] == "positive"
        assert result["computed"]["extends_to_sop_for_A"] is True

    def test_ht_grade_skipped_without_flag(self, tmp_path):
        payload = dict(BASE)  # no equidimensional key
        s = load_session(_write(tmp_path, payload))
        result = verify(s, "ht-grade", "M")
        assert result["status"] == "skipped"
        assert "equidimensionality not asserted" in result["reason"]

    def test_ht_grade_passes_with_flag(self, sessions):
        result = verify(sessions["FX1"], "ht-grade", "M1")
        assert result["status"] == "pass"
        assert result["computed"]["height_ann"] == 1

    def test_vanishing_fx4(self, sessions):
        result = verify(sessions["FX4"], "vanishing", "M4", {"ideal": "J", "nmax": 2})
        assert result["status"] == "pass"
        assert result["computed"]["chi_values"] == [0, 0, 0]
        assert result["computed"]["verdict"] == "zero"

    def test_vanishing_gate_on_dimensions(self, sessions):
        result = verify(sessions["FX1"], "vanishing", "M1", {"ideal": "Jy"})
        assert result["status"] == "skipped"

    def test_unknown_check(self, sessions):
        with pytest.raises(UnknownCheckError):
            verify(sessions["FX1"], "no-such-check", "M1")

    def test_unknown_module(self, sessions):
        with pytest.raises(ParseError):
            verify(sessions["FX1"], "ab", "nope")

    def test_zero_module_skips(self, tmp_path):
        payload = dict(BASE, modules={"Z": {"presentation": [["1"]]}})
        s = load_session(_write(tmp_path, payload))
        for check in sorted(CHECKS):
            result = verify(s, check, "Z")
            assert result["status"] == "skipped"

    def test_named_sequence_override(self, sessions):
        result = verify(sessions["FX1"], "mult-eq-chi", "M1", {"seq": "y"})
        assert result["status"] == "pass"
        assert result["computed"]["e"] == result["computed"]["chi"] == 2


class TestRunAll:
    def test_corpus_has_no_failures(self, sessions):
        for name in FIXTURES:
            report = run_all(sessions[name])
            assert report["counts"]["fail"] == 0, (name, report)

    def test_deterministic_bytes(self, sessions):
        a = dumps_report(run_all(sessions["FX1"], {"seed": 5}))
        b = dumps_report(run_all(sessions["FX1"], {"seed": 5}))
        assert a == b

    def test_fx5_gating(self, sessions):
        report = run_all(sessions["FX5"])
        by_check = {c["check"]: c for c in report["checks"]}
        gated = ["ab", "dim-one", "ext-dim-equiv", "grade-conj", "ht-grade",
                 "intersection", "lowpd", "perfect"]
        for check in gated:
            assert by_check[check]["status"] == "skipped", check
            assert "not finite under the cutoff" in by_check[check]["reason"]
        assert by_check["grade-bounds"]["status"] == "pass"

    def test_empty_session(self, tmp_path):
        payload = {"characteristic": 2, "variables": ["x", "y"]}
        s = load_session(_write(tmp_path, payload))
        report = run_all(s)
        assert report["checks"] == []
        assert report["counts"] == {"pass": 0, "fail": 0, "skipped": 0, "inconclusive": 0}

    def test_grade_conj_passes_on_whole_corpus(self, sessions):
        for name in FIXTURES:
            report = run_all(sessions[name])
            for c in report["checks"]:
                if c["check"] == "grade-conj":
                    assert c["status"] in ("pass", "skipped"), (name, c)

    def test_ext_dim_equiv_never_fails_on_corpus(self, sessions):
        for name in FIXTURES:
            report = run_all(sessions[name])
            for c in report["checks"]:
                if c["check"] == "ext-dim-equiv":
                    assert c["status"] != "fail", (name, c)


class TestJsonable:
    def test_fractions_and_sentinels(self):
        from fractions import Fraction

        assert jsonable(Fraction(3, 4)) == {"num": 3, "den": 4}
        assert jsonable(float("inf")) == "infinite"
        assert jsonable(float("-inf")) == "-infinity"
        assert jsonable(AtLeast(6)) == {"at_least": 6}
        assert jsonable({"a": [Fraction(1, 2)]}) == {"a": [{"num": 1, "den": 2}]}
