""" Assembly of per-surface JSON reports and their verdicts """
import logging
import time
from collections import Counter

from jsonschema import Draft7Validator

from floerveer import errors
from floerveer.domains import (DEFAULT_DOMAIN_BUDGET, check_admissibility, check_top_bottom_isolation,
                               domain_context, domain_pairs, domain_table, parity_audit, periodic_lattice,
                               subsurface_audit)
from floerveer.groupring import (DEFAULT_MINOR_BUDGET, TruncatedSeries, cofactor_determinant, cone_normalized,
                                 determinant, linear_value, series_reciprocal)
from floerveer.heegaard import audit_diagram, build_diagram
from floerveer.homology import build_homology, class_of_cycle, spanning_tree_edges
from floerveer.ingest import load_schema
from floerveer.relations import (antiveering_polynomial, antitetrahedron_matrix, build_cocycle,
                                 check_factorization_A, check_factorization_V, cycle_classes, facereldiff_audit,
                                 positive_functional, taut_polynomial, tetrahedron_matrix, theta_divides,
                                 trivial_cocycle, veering_polynomial)
from floerveer.states import (DEFAULT_STATE_BUDGET, FILTER_LIMIT, bottom_state, enumerate_states,
                              enumerate_states_by_filter, nu, spinc_class, state_record, statesum_polynomial,
                              top_state)
from floerveer.vbs import (VeeringBranchedSurface, decompose_anti_branch_loops, decompose_branch_loops,
                           sector_kind)

log = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"
SCHEMA_FILE = "report-v1.json"
MODES = ("validate", "report", "verify", "zeta", "batch")
ORACLE_LIMIT = 4
DEFAULT_TRUNC_DEGREE = 8


class _Timer:
    """ Records section durations when enabled. """

    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.sections = {}

    def run(self, name: str, func, *args, **kwargs):
        start = time.perf_counter()
        result = func(*args, **kwargs)
        elapsed = time.perf_counter() - start
        log.debug("%s took %.3fs", name, elapsed)
        if self.enabled:
            self.sections[name] = round(elapsed, 6)
        return result


# SECTIONS
def surface_section(vbs: VeeringBranchedSurface):
    branch = decompose_branch_loops(vbs)
    anti = decompose_anti_branch_loops(vbs)
    kinds = Counter(sector_kind(vbs, s.id) for s in vbs.sectors)
    return {
        "name": vbs.name,
        "n": vbs.n,
        "edges": len(vbs.edges),
        "colors": [vbs.color(v).value for v in range(vbs.n)],
        "branch_loops": [list(loop) for loop in branch.loops],
        "anti_branch_loops": [list(loop) for loop in anti.loops],
        "anti_branch_orientation_preserving": list(anti.orientation_preserving),
        "sector_kinds": {"toggle": kinds["toggle"], "fan": kinds["fan"]},
    }


def homology_section(vbs, hm, cocycle):
    branch = decompose_branch_loops(vbs)
    return {
        "free_rank": hm.free_rank,
        "torsion": [int(d) for d in hm.torsion_invariants],
        "spanning_tree": list(spanning_tree_edges(vbs)),
        "cocycle": [list(value) for value in cocycle.values],
        "branch_loop_classes": [list(cocycle.total(loop)) for loop in branch.loops],
    }


def states_section(vbs, hm, states):
    return {
        "count": len(states),
        "nu_histogram": {str(k): c for k, c in sorted(Counter(nu(vbs, x) for x in states).items())},
        "states": [dict(index=i, **state_record(vbs, hm, x)) for i, x in enumerate(states)],
    }


def diagram_section(hc):
    return {
        "genus": hc.genus,
        "intersection_points": len(hc.points),
        "empty_domains": len(hc.empty_domains()),
        "basepoint_domains": len(hc.basepoint_domains()),
        "euler_measure_sum": int(sum(hc.euler_measure(d.id) for d in hc.domains)),
        "periodic_rank": len(periodic_lattice(hc)),
        "audit": audit_diagram(hc),
    }


def spinc_checks(vbs, hm, states):
    """ Bottom grading zero, the top grading identity and independence from the strum side. """

    branch = decompose_branch_loops(vbs)
    loops = hm.zero()
    for i in range(len(branch.loops)):
        loops = loops + class_of_cycle(hm, branch.edge_vector(i, len(vbs.edges)))
    top = spinc_class(vbs, hm, top_state(vbs))
    swapped = {s.id: "b" for s in vbs.sectors}
    return {
        "bottom_is_zero": spinc_class(vbs, hm, bottom_state(vbs)).is_zero(),
        "top_identity": 2 * top == 3 * loops,
        "strum_independent": all(spinc_class(vbs, hm, x) == spinc_class(vbs, hm, x, swapped) for x in states),
    }


def polynomial_section(vbs, hm, cocycle, states, minor_budget: int):
    theta = taut_polynomial(vbs, cocycle, minor_budget)
    veering = veering_polynomial(vbs, cocycle)
    anti = antiveering_polynomial(vbs, cocycle)
    statesum = statesum_polynomial(vbs, hm, states)
    raw_anti = determinant(antitetrahedron_matrix(vbs, cocycle))
    trivial = determinant(antitetrahedron_matrix(vbs, trivial_cocycle(len(vbs.edges))))

    section = {
        "taut": theta.to_list(),
        "veering": veering.to_list(),
        "antiveering": anti.to_list(),
        "statesum": statesum.to_list(),
        "factorization_A": str(check_factorization_A(vbs, cocycle, theta, anti)),
        "factorization_V": str(check_factorization_V(vbs, cocycle, theta, veering)),
        "facereldiff": facereldiff_audit(vbs, cocycle),
        "categorification": anti.equal_up_to_unit(statesum),
        "theta_divides": (not theta.is_zero() and theta_divides(theta, anti) and theta_divides(theta, veering)),
        "specialization": raw_anti.specialize() == trivial.specialize(),
    }
    if vbs.n <= ORACLE_LIMIT:
        section["determinant_oracle"] = all(
            determinant(matrix) == cofactor_determinant(matrix)
            for matrix in (antitetrahedron_matrix(vbs, cocycle), tetrahedron_matrix(vbs, cocycle)))
    return section, anti


def zeta_section(anti, functional, degree: int, free_rank: int):
    """ Truncated reciprocal of the anti-veering polynomial in the cone of a functional. """

    try:
        p = cone_normalized(anti, functional)
        series = series_reciprocal(p, functional, degree)
    except (errors.NotConeSupported, errors.NotUnitConstantTerm) as exc:
        log.warning("No zeta expansion: %s", exc)
        return {"functional": list(functional), "degree": degree, "skipped": str(exc)}
    product = TruncatedSeries.from_element(p, functional, degree) * series
    return {
        "functional": list(functional),
        "degree": degree,
        "coefficients": series.to_list(),
        "by_degree": series.by_degree(),
        "product_is_one": product.is_one(),
        "nonnegative": all(c >= 0 for c in series.coefficients.values()) if free_rank >= 2 else None,
    }


def fibered_profile(vbs, hm, functional, states=None, cocycle=None):
    """ Histogram of states by the functional value of their spin-c class.

    Args:
        functional (tuple): Integer functional on the free part of H1.
    Raises:
        errors.NoPositiveFunctional: The functional is not positive on every cycle class.
        errors.ConfigError: Wrong number of coordinates.
    Returns:
        dict: Histogram and the uniqueness verdicts at the two extremes. """

    if len(functional) != hm.free_rank:
        raise errors.ConfigError(f"functional has {len(functional)} coordinates, free rank is {hm.free_rank}")
    cocycle = cocycle or build_cocycle(hm)
    if not all(linear_value(functional, g) > 0 for g in cycle_classes(hm, cocycle)):
        raise errors.NoPositiveFunctional(f"{list(functional)} is not positive on every cycle class")

    states = states if states is not None else enumerate_states(vbs)
    values = {x: linear_value(functional, spinc_class(vbs, hm, x).free) for x in states}
    histogram = Counter(values.values())
    top_value = values[top_state(vbs)]
    low, high = min(histogram), max(histogram)
    between = all(0 < v < top_value for x, v in values.items() if x not in (top_state(vbs), bottom_state(vbs)))
    return {
        "functional": list(functional),
        "histogram": {str(k): c for k, c in sorted(histogram.items())},
        "bottom_value": values[bottom_state(vbs)],
        "top_value": top_value,
        "passed": (low == 0 and histogram[0] == 1 and values[bottom_state(vbs)] == 0
                   and high == top_value and histogram[high] == 1 and between),
    }


def domains_section(ctx, states, budget: int):
    table = domain_pairs(ctx, states, budget)
    return {
        "nonzero_effective_domains": sum(len(domains) for _, _, domains in table),
        "admissible": check_admissibility(ctx.hc),
        "isolation": check_top_bottom_isolation(ctx, states, table),
        "parity": parity_audit(ctx, states, table),
        "subsurface": subsurface_audit(ctx, states, table),
        "pairs": domain_table(ctx, states, table),
    }


# REPORT
def build_report(vbs: VeeringBranchedSurface, source: str, mode: str = "report",
                 trunc_degree: int = DEFAULT_TRUNC_DEGREE, budget_domains: int = DEFAULT_DOMAIN_BUDGET,
                 budget_states: int = DEFAULT_STATE_BUDGET, budget_minors: int = DEFAULT_MINOR_BUDGET,
                 fibered_class=None, timings: bool = False):
    """ Build the report of one validated surface.

    Args:
        vbs (VeeringBranchedSurface): Validated surface.
        source (str): Input path or signature, echoed in the report.
        mode (str, optional): One of MODES. validate stops after the surface
            section, zeta skips states tables and domains. Defaults to "report".
        fibered_class (tuple, optional): Functional for the fibered profile.
            Defaults to a computed positive functional.
        timings (bool, optional): Record section durations. Defaults to False.
    Returns:
        dict: Report; verdicts are collected under "verdicts". """

    timer = _Timer(timings)
    report = {"schema_version": SCHEMA_VERSION, "input": source, "mode": mode,
              "surface": surface_section(vbs)}
    if mode == "validate":
        report["verdicts"] = {"valid": True}
        return report

    hm = timer.run("homology", build_homology, vbs)
    cocycle = build_cocycle(hm)
    report["homology"] = homology_section(vbs, hm, cocycle)
    states = timer.run("states", enumerate_states, vbs, budget_states)
    polynomials, anti = timer.run("polynomials", polynomial_section, vbs, hm, cocycle, states, budget_minors)
    report["polynomials"] = polynomials

    functional = tuple(fibered_class) if fibered_class else positive_functional(hm, cocycle=cocycle)
    if functional is not None:
        report["zeta"] = timer.run("zeta", zeta_section, anti, functional, trunc_degree, hm.free_rank)
    if mode == "zeta":
        report["verdicts"] = _verdicts(report)
        return report

    report["states"] = states_section(vbs, hm, states)
    report["spinc"] = spinc_checks(vbs, hm, states)
    if vbs.n <= FILTER_LIMIT:
        report["states"]["enumerators_agree"] = enumerate_states_by_filter(vbs) == states
    if functional is not None:
        report["fibered_profile"] = fibered_profile(vbs, hm, functional, states, cocycle)

    hc = timer.run("diagram", build_diagram, vbs)
    report["diagram"] = diagram_section(hc)
    ctx = domain_context(vbs, hc, hm)
    report["domains"] = timer.run("domains", domains_section, ctx, states, budget_domains)

    report["verdicts"] = _verdicts(report)
    if timings:
        report["timings"] = timer.sections
    return report


def _verdicts(report: dict):
    """ Flat name -> True/False/None map; None means not applicable. """

    verdicts = {}
    poly = report.get("polynomials", {})
    for key in ("facereldiff", "categorification", "theta_divides", "specialization", "determinant_oracle"):
        if key in poly:
            verdicts[key] = poly[key]
    for key in ("factorization_A", "factorization_V"):
        if key in poly:
            verdicts[key] = None if poly[key] == "not_applicable" else poly[key] != "fail"
    if "zeta" in report:
        verdicts["zeta_product"] = report["zeta"].get("product_is_one")
        verdicts["zeta_nonnegative"] = report["zeta"].get("nonnegative")
    if "states" in report and "enumerators_agree" in report["states"]:
        verdicts["enumerators_agree"] = report["states"]["enumerators_agree"]
    for key, value in report.get("spinc", {}).items():
        verdicts[f"spinc_{key}"] = value
    if "fibered_profile" in report:
        verdicts["fibered_profile"] = report["fibered_profile"]["passed"]
    if "diagram" in report:
        verdicts["diagram_audit"] = all(report["diagram"]["audit"].values())
    for key in ("admissible", "isolation", "parity", "subsurface"):
        if key in report.get("domains", {}):
            verdicts[key] = report["domains"][key]
    return verdicts


def report_passed(report: dict):
    return "error" not in report and all(v is not False for v in report.get("verdicts", {}).values())


def error_report(source: str, mode: str, exc: Exception):
    return {"schema_version": SCHEMA_VERSION, "input": source, "mode": mode,
            "error": {"type": type(exc).__name__, "message": str(exc)}}


def validate_report(report: dict):
    """ Check a report against the bundled schema.

    Raises:
        errors.InternalInconsistency: The report does not match the schema. """

    validator = Draft7Validator(load_schema(SCHEMA_FILE))
    problems = sorted(validator.iter_errors(report), key=lambda err: list(err.absolute_path))
    if problems:
        where = "/".join(str(p) for p in problems[0].absolute_path) or "<root>"
        raise errors.InternalInconsistency(f"report schema violation at {where}: {problems[0].message}")
    return True
