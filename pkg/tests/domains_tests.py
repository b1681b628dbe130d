""" Test domains, their index and the subsurface quantities. """

import itertools

import pytest

from floerveer import errors, fixtures
from floerveer.domains import (Domain, brute_force_domains, check_admissibility, check_connecting,
                               check_top_bottom_isolation, connecting_domains, contains_full_curve, corner_rhs,
                               domain_context, domain_pairs, domain_table, lipshitz_index, mu_bar, nu_bar,
                               parity_audit, periodic_lattice, subsurface_audit)
from floerveer.states import bottom_state, enumerate_states, nu, spinc_class, top_state

manifest = fixtures.manifest()


@pytest.fixture(scope="module")
def f8():
    return domain_context(fixtures.surface("f8"))


class TestCornerSystem:
    """ Test the corner equations. """

    def test_f8_lattice(self, f8):
        assert len(periodic_lattice(f8.hc)) == manifest["f8"]["periodic_rank"]
        assert f8.system.domain_count == manifest["f8"]["empty_domains"]

    @pytest.mark.parametrize("name", fixtures.NAMES)
    def test_kernel_is_periodic(self, name):
        """ Kernel vectors have no corners. """

        ctx = domain_context(fixtures.surface(name))
        for vector in ctx.system.kernel():
            assert not any(ctx.system.residual(vector))

    def test_rhs(self, f8):
        """ +1 on coordinates of x only, -1 on coordinates of y only. """

        x, y = bottom_state(f8.vbs), top_state(f8.vbs)
        rhs = corner_rhs(f8.hc, x, y)
        assert [p for p, v in enumerate(rhs) if v == 1] == sorted(x.points())
        assert [p for p, v in enumerate(rhs) if v == -1] == sorted(y.points())
        assert not any(corner_rhs(f8.hc, x, x))

    def test_admissible(self, f8):
        assert check_admissibility(f8.hc)

    def test_not_admissible(self, f8):
        """ A quadrant map whose corners cancel has nonnegative periodic domains. """

        broken = f8.hc.with_quadrants({p: (0, 0, 1, 1) for p in f8.hc.quadrants})
        assert not check_admissibility(broken)


class TestEnumeration:
    """ Test connecting domain enumeration on F8. """

    def test_zero_domain(self, f8):
        """ A state is connected to itself by the zero domain only. """

        x = bottom_state(f8.vbs)
        domains = connecting_domains(f8, x, x)
        assert [d.coefficients for d in domains] == [(0, 0, 0, 0)]
        assert lipshitz_index(f8, domains[0]) == 0

    def test_spinc_mismatch(self, f8):
        assert connecting_domains(f8, bottom_state(f8.vbs), top_state(f8.vbs)) == []

    def test_total(self, f8):
        total = sum(len(domains) for _, _, domains in domain_pairs(f8))
        assert total == manifest["f8"]["nonzero_effective_domains"]

    def test_brute_force_agrees(self, f8):
        """ The lattice walk and the subset search find the same domains. """

        states = enumerate_states(f8.vbs)
        for x in states:
            for y in states:
                lattice = [d.coefficients for d in connecting_domains(f8, x, y)]
                subsets = [d.coefficients for d in brute_force_domains(f8, x, y)]
                assert lattice == subsets

    def test_brute_force_limit(self, f8):
        x = bottom_state(f8.vbs)
        with pytest.raises(errors.SearchBudgetExceeded):
            brute_force_domains(f8, x, x, limit=2)

    def test_pair_budget(self, f8):
        with pytest.raises(errors.SearchBudgetExceeded):
            domain_pairs(f8, budget=1)

    def test_not_connecting(self, f8):
        x = bottom_state(f8.vbs)
        domain = Domain((1, 0, 0, 0), x, x)
        with pytest.raises(errors.NotConnecting):
            check_connecting(f8, domain)
        with pytest.raises(errors.NotConnecting):
            lipshitz_index(f8, domain)


class TestAudits:
    """ Test the domain audits on F8. """

    def test_isolation(self, f8):
        assert check_top_bottom_isolation(f8)

    def test_parity(self, f8):
        assert parity_audit(f8)

    def test_subsurface(self, f8):
        assert subsurface_audit(f8)

    def test_table(self, f8):
        """ Every F8 domain has index zero and the records carry their pairs. """

        states = enumerate_states(f8.vbs)
        records = domain_table(f8, states)
        assert sum(r["count"] for r in records) == manifest["f8"]["nonzero_effective_domains"]
        for record in records:
            assert set(record["index_histogram"]) == {"0"}
            assert record["parity"]
            assert record["x"] != record["y"]

    def test_indices_match_nu(self, f8):
        """ Index zero domains join states of equal grading. """

        for _, _, domains in domain_pairs(f8):
            for domain in domains:
                assert nu(f8.vbs, domain.x) == nu(f8.vbs, domain.y)
                assert mu_bar(f8, domain) == 0
                assert not contains_full_curve(f8, domain)


class TestSubsurface:
    """ Test the subsurface quantities of single elementary domains. """

    @pytest.mark.parametrize("d", range(4))
    def test_elementary(self, f8, d):
        """ An elementary domain has odd mu bar and odd nu bar. """

        x = bottom_state(f8.vbs)
        coefficients = tuple(1 if i == d else 0 for i in range(4))
        domain = Domain(coefficients, x, x)
        assert mu_bar(f8, domain) % 2 == 1
        assert nu_bar(f8, domain) % 2 == 1

    def test_not_embedded(self, f8):
        x = bottom_state(f8.vbs)
        domain = Domain((2, 0, 0, 0), x, x)
        with pytest.raises(errors.NotEmbedded):
            mu_bar(f8, domain)
        with pytest.raises(errors.NotEmbedded):
            nu_bar(f8, domain)


@pytest.fixture(scope="module")
def c2():
    return domain_context(fixtures.surface("c2"))


@pytest.fixture(scope="module")
def c2_table(c2):
    return domain_pairs(c2)


class TestTwoVariables:
    """ Test the domain audits on C2. """

    def test_counts(self, c2, c2_table):
        assert c2.system.domain_count == manifest["c2"]["empty_domains"]
        assert sum(len(domains) for _, _, domains in c2_table) == manifest["c2"]["nonzero_effective_domains"]

    def test_admissible(self, c2):
        assert check_admissibility(c2.hc)

    def test_audits(self, c2, c2_table):
        assert check_top_bottom_isolation(c2, table=c2_table)
        assert parity_audit(c2, table=c2_table)
        assert subsurface_audit(c2, table=c2_table)

    def test_index_one(self, c2, c2_table):
        """ Some domain of C2 or S1 has index one and joins states of opposite grading. """

        found = [(c2, d) for _, _, domains in c2_table for d in domains if lipshitz_index(c2, d) == 1]
        if not found:
            s1 = domain_context(fixtures.surface("s1"))
            found = [(s1, d) for _, _, domains in domain_pairs(s1) for d in domains if lipshitz_index(s1, d) == 1]
        assert found
        for ctx, domain in found:
            assert (nu(ctx.vbs, domain.x) - nu(ctx.vbs, domain.y)) % 2 == 1

    def test_index_additive(self, c2):
        """ The index of a composite domain is the sum of the indices. """

        by_class = {}
        for x in enumerate_states(c2.vbs):
            by_class.setdefault(spinc_class(c2.vbs, c2.hm, x), []).append(x)
        checked = 0
        for states in by_class.values():
            for x, y, z in itertools.product(states[:4], repeat=3):
                first = c2.system.particular(corner_rhs(c2.hc, x, y))
                second = c2.system.particular(corner_rhs(c2.hc, y, z))
                if first is None or second is None:
                    continue
                phi, psi = Domain(first, x, y), Domain(second, y, z)
                composite = Domain(tuple(a + b for a, b in zip(first, second)), x, z)
                assert lipshitz_index(c2, composite) == lipshitz_index(c2, phi) + lipshitz_index(c2, psi)
                checked += 1
        assert checked
