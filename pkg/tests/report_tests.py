""" Test report assembly and the report schema. """

import pytest

from floerveer import errors, fixtures
from floerveer.report import SCHEMA_VERSION, build_report, error_report, report_passed, validate_report

manifest = fixtures.manifest()


@pytest.fixture(scope="module")
def f8_report():
    return build_report(fixtures.surface("f8"), fixtures.path("f8"), "verify")


class TestReport:
    """ Test the full F8 report. """

    def test_schema(self, f8_report):
        assert validate_report(f8_report)
        assert f8_report["schema_version"] == SCHEMA_VERSION

    def test_surface(self, f8_report):
        surface = f8_report["surface"]
        assert surface["n"] == 2
        assert surface["branch_loops"] == manifest["f8"]["branch_loops"]
        assert surface["sector_kinds"] == manifest["f8"]["sector_kinds"]

    def test_homology(self, f8_report):
        homology = f8_report["homology"]
        assert homology["free_rank"] == 1
        assert homology["cocycle"] == manifest["f8"]["cocycle"]
        assert homology["branch_loop_classes"] == manifest["f8"]["branch_loop_classes"]

    def test_polynomials(self, f8_report):
        polynomials = f8_report["polynomials"]
        for key in ("taut", "veering", "antiveering", "statesum", "factorization_A", "factorization_V"):
            assert polynomials[key] == manifest["f8"][key]

    def test_states(self, f8_report):
        states = f8_report["states"]
        assert states["count"] == manifest["f8"]["state_count"]
        assert states["nu_histogram"] == manifest["f8"]["nu_histogram"]
        assert states["enumerators_agree"]
        assert [s["index"] for s in states["states"]] == list(range(states["count"]))

    def test_zeta_and_profile(self, f8_report):
        assert f8_report["zeta"]["functional"] == [1]
        assert f8_report["zeta"]["by_degree"] == manifest["f8"]["zeta"]
        assert f8_report["fibered_profile"]["histogram"] == manifest["f8"]["fibered_profile"]

    def test_diagram_and_domains(self, f8_report):
        diagram = f8_report["diagram"]
        for key in ("intersection_points", "empty_domains", "basepoint_domains", "euler_measure_sum",
                    "periodic_rank"):
            assert diagram[key] == manifest["f8"][key]
        assert f8_report["domains"]["nonzero_effective_domains"] == manifest["f8"]["nonzero_effective_domains"]

    def test_verdicts(self, f8_report):
        """ Every check passes; nonnegativity of zeta does not apply with one variable. """

        verdicts = f8_report["verdicts"]
        assert verdicts["zeta_nonnegative"] is None
        assert all(v is not False for v in verdicts.values()), verdicts
        assert report_passed(f8_report)


class TestModes:
    """ Test the reduced modes. """

    def test_validate(self):
        report = build_report(fixtures.surface("c2"), "c2.json", "validate")
        assert set(report) == {"schema_version", "input", "mode", "surface", "verdicts"}
        assert validate_report(report)

    def test_zeta(self):
        report = build_report(fixtures.surface("f8"), "f8.json", "zeta")
        assert "zeta" in report and "polynomials" in report
        assert "states" not in report and "domains" not in report
        assert validate_report(report)

    def test_timings(self):
        report = build_report(fixtures.surface("f8"), "f8.json", "zeta", timings=False)
        assert "timings" not in report
        report = build_report(fixtures.surface("f8"), "f8.json", "report", timings=True)
        assert "homology" in report["timings"]

    def test_fibered_class(self):
        """ A supplied functional replaces the computed one. """

        report = build_report(fixtures.surface("f8"), "f8.json", "report", fibered_class=(2,))
        assert report["fibered_profile"]["histogram"] == {"0": 1, "2": 4, "4": 4, "6": 1}

    def test_deterministic(self):
        surface = fixtures.surface("s1")
        assert build_report(surface, "s1.json", "zeta") == build_report(surface, "s1.json", "zeta")


class TestErrors:
    """ Test error reports and schema failures. """

    def test_error_report(self):
        report = error_report("bad.json", "verify", errors.MissingSection("edges"))
        assert report["error"] == {"type": "MissingSection", "message": "Missing section 'edges'"}
        assert validate_report(report)
        assert not report_passed(report)

    def test_schema_violation(self):
        with pytest.raises(errors.InternalInconsistency):
            validate_report({"schema_version": "2.0", "input": "x", "mode": "report"})
