""" Test relation matrices, the polynomials and their identities. """

import pytest

from floerveer import errors, fixtures, relations
from floerveer.groupring import GroupRingElement, determinant
from floerveer.homology import build_homology
from floerveer.relations import (Verdict, antitetrahedron_matrix, antiveering_polynomial, build_cocycle,
                                 check_categorification, check_factorization_A, check_factorization_V,
                                 cycle_classes, face_matrix, facereldiff_audit, positive_functional,
                                 require_positive_functional, taut_polynomial, tetrahedron_matrix, theta_divides,
                                 trivial_cocycle, veering_polynomial)
from floerveer.report import fibered_profile, zeta_section

manifest = fixtures.manifest()

t = GroupRingElement.monomial((1,))
one = GroupRingElement.one(1)


def _setup(name):
    vbs = fixtures.surface(name)
    hm = build_homology(vbs)
    return vbs, hm, build_cocycle(hm)


class TestMatrices:
    """ Test the lifted relation matrices of F8. """

    def test_face(self):
        vbs, _, cocycle = _setup("f8")
        assert face_matrix(vbs, cocycle) == [[t, t - 1, t, t - 1], [t - 1, one, t - 1, one]]

    def test_tetrahedron(self):
        vbs, _, cocycle = _setup("f8")
        assert tetrahedron_matrix(vbs, cocycle) == [[2 * t - 1, t ** 2], [t, 2 * t - 1]]

    def test_antitetrahedron(self):
        vbs, _, cocycle = _setup("f8")
        assert antitetrahedron_matrix(vbs, cocycle) == [[one, t ** 2 - 2 * t], [t - 2, one]]

    def test_unknown_rule(self):
        vbs, _, cocycle = _setup("f8")
        with pytest.raises(ValueError):
            face_matrix(vbs, cocycle, maw_rule="last_top")

    @pytest.mark.parametrize("name", fixtures.NAMES)
    def test_facereldiff(self, name):
        """ Face columns of a smooth pair differ by the anti-tetrahedron column. """

        vbs, _, cocycle = _setup(name)
        assert facereldiff_audit(vbs, cocycle)

    def test_facereldiff_wrong_rule(self):
        """ Putting the negative sign on the first top side breaks the identity. """

        vbs, _, cocycle = _setup("f8")
        assert not facereldiff_audit(vbs, cocycle, maw_rule="first_top")

    @pytest.mark.parametrize("name", fixtures.NAMES)
    def test_trivial_cocycle(self, name):
        """ Integer matrices are the specializations of the lifted ones. """

        vbs, _, cocycle = _setup(name)
        trivial = trivial_cocycle(len(vbs.edges))
        for build in (tetrahedron_matrix, antitetrahedron_matrix):
            assert determinant(build(vbs, trivial)).specialize() == determinant(build(vbs, cocycle)).specialize()


class TestPolynomials:
    """ Test the polynomials and the identities between them. """

    @pytest.mark.parametrize("name", ["f8", "s1"])
    def test_values(self, name):
        vbs, _, cocycle = _setup(name)
        assert taut_polynomial(vbs, cocycle).to_list() == manifest[name]["taut"]
        assert veering_polynomial(vbs, cocycle).to_list() == manifest[name]["veering"]
        assert antiveering_polynomial(vbs, cocycle).to_list() == manifest[name]["antiveering"]

    @pytest.mark.parametrize("name", fixtures.NAMES)
    def test_categorification(self, name):
        """ The anti-veering determinant equals the state sum up to units. """

        vbs, hm, cocycle = _setup(name)
        assert check_categorification(vbs, hm, cocycle)

    @pytest.mark.parametrize("name", ["f8", "c2"])
    def test_factorizations(self, name):
        """ One variable allows a unit factor; C2 has two and factors exactly. """

        vbs, _, cocycle = _setup(name)
        assert str(check_factorization_A(vbs, cocycle)) == manifest[name]["factorization_A"]
        assert str(check_factorization_V(vbs, cocycle)) == manifest[name]["factorization_V"]

    def test_s1_factorization(self):
        """ The single branch loop of S1 has class t^2. """

        vbs, _, cocycle = _setup("s1")
        assert str(check_factorization_A(vbs, cocycle)) == manifest["s1"]["factorization_A"]

    def test_f8_wrong_loop_class(self):
        """ Doubling a branch loop class breaks the A factorization. """

        vbs, _, cocycle = _setup("f8")
        assert check_factorization_A(vbs, cocycle, classes=[(2,), (1,)]).verdict == Verdict.FAIL

    def test_f8_wrong_parities(self):
        """ Treating both anti-branch loops as orientation-reversing breaks the V factorization. """

        vbs, _, cocycle = _setup("f8")
        assert check_factorization_V(vbs, cocycle, preserving=(False, False)).verdict == Verdict.FAIL

    @pytest.mark.parametrize("name", fixtures.NAMES)
    def test_factorizations_hold(self, name):
        vbs, _, cocycle = _setup(name)
        assert check_factorization_A(vbs, cocycle).verdict != Verdict.FAIL
        assert check_factorization_V(vbs, cocycle).verdict != Verdict.FAIL

    def test_trivial_not_applicable(self):
        vbs = fixtures.surface("f8")
        verdict = check_factorization_A(vbs, trivial_cocycle(len(vbs.edges)))
        assert verdict.verdict == Verdict.NOT_APPLICABLE
        assert not verdict.passed

    def test_theta_divides(self):
        vbs, _, cocycle = _setup("f8")
        theta = taut_polynomial(vbs, cocycle)
        assert theta_divides(theta, antiveering_polynomial(vbs, cocycle))
        assert theta_divides(theta, veering_polynomial(vbs, cocycle))
        assert not theta_divides(theta, 1 + t)


class TestFunctional:
    """ Test the positive functional and what uses it. """

    def test_f8_cycles(self):
        _, hm, cocycle = _setup("f8")
        assert cycle_classes(hm, cocycle) == [(1,), (2,)]
        assert positive_functional(hm) == (1,)

    def test_none(self):
        """ Opposite or zero classes admit no positive functional. """

        _, hm, _ = _setup("f8")
        assert positive_functional(hm, cycles=[(1,), (-1,)]) is None
        assert positive_functional(hm, cycles=[(0,)]) is None

    @pytest.mark.parametrize("name", ["f8", "c2", "s1"])
    def test_functional(self, name):
        """ The functional is recorded and positive on every cycle class. """

        _, hm, cocycle = _setup(name)
        functional = positive_functional(hm)
        assert list(functional) == manifest[name]["positive_functional"]
        assert all(sum(a * b for a, b in zip(functional, g)) > 0 for g in cycle_classes(hm, cocycle))

    @pytest.mark.parametrize("name", ["f8", "c2"])
    def test_rescaled_functional(self, name, monkeypatch):
        """ A rounding that loses positivity falls back to integer rescaling. """

        _, hm, cocycle = _setup(name)
        monkeypatch.setattr(relations, "_rational_guess", lambda values: [0] * len(values))
        functional = positive_functional(hm)
        assert all(sum(a * b for a, b in zip(functional, g)) > 0 for g in cycle_classes(hm, cocycle))

    def test_c2_zeta(self):
        """ In two variables the reciprocal series is nonnegative and inverts A. """

        vbs, _, cocycle = _setup("c2")
        functional = tuple(manifest["c2"]["positive_functional"])
        section = zeta_section(antiveering_polynomial(vbs, cocycle), functional, manifest["c2"]["zeta_degree"], 2)
        assert "skipped" not in section
        assert section["product_is_one"]
        assert section["nonnegative"] is True

    def test_s1_zeta(self):
        vbs, _, cocycle = _setup("s1")
        section = zeta_section(antiveering_polynomial(vbs, cocycle), (1,), 8, 1)
        assert section["by_degree"] == manifest["s1"]["zeta"]
        assert section["product_is_one"]

    def test_f8_zeta(self):
        """ Reciprocal of the normalized anti-veering polynomial of F8. """

        vbs, _, cocycle = _setup("f8")
        section = zeta_section(antiveering_polynomial(vbs, cocycle), (1,), 8, 1)
        assert section["by_degree"] == manifest["f8"]["zeta"]
        assert section["product_is_one"]
        assert section["nonnegative"] is None

    def test_zeta_skipped(self):
        """ A lowest term that is not a unit skips the expansion. """

        section = zeta_section(2 + t, (1,), 4, 1)
        assert "skipped" in section

    @pytest.mark.parametrize("name", ["f8", "s1"])
    def test_fibered_profile(self, name):
        vbs, hm, _ = _setup(name)
        profile = fibered_profile(vbs, hm, (1,))
        assert profile["histogram"] == manifest[name]["fibered_profile"]
        assert profile["bottom_value"] == 0
        assert profile["top_value"] == 3
        assert profile["passed"]

    def test_fibered_profile_errors(self):
        vbs, hm, _ = _setup("f8")
        with pytest.raises(errors.ConfigError):
            fibered_profile(vbs, hm, (1, 0))
        with pytest.raises(errors.NoPositiveFunctional):
            fibered_profile(vbs, hm, (-1,))
