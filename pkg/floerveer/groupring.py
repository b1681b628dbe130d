""" Exact arithmetic in the integral group ring of a free abelian group

Elements are finitely supported maps from Z^b to Z. Exponents may be negative
(Laurent monomials); polynomial algorithms that need nonnegative exponents
shift by a monomial first and shift back afterwards.
"""
import functools
import itertools
import logging
from math import comb, gcd

import sympy as sp
from sympy import Poly

from floerveer import errors

log = logging.getLogger(__name__)

DEFAULT_MINOR_BUDGET = 10_000


class GroupRingElement:
    """ Immutable element of Z[Z^nvars], stored as exponent tuple -> nonzero coefficient.

    Example:
        >>> t = GroupRingElement.monomial((1,))
        >>> (GroupRingElement.one(1) - t).to_list()
        [[[0], 1], [[1], -1]]
    """

    __slots__ = ("_terms", "nvars")

    def __init__(self, terms: dict = None, nvars: int = 1):
        clean = {}
        for exponent, coeff in (terms or {}).items():
            exponent = tuple(int(x) for x in exponent)
            if len(exponent) != nvars:
                raise ValueError(f"exponent {exponent} has {len(exponent)} entries, expected {nvars}")
            clean[exponent] = clean.get(exponent, 0) + int(coeff)
        object.__setattr__(self, "_terms", {e: c for e, c in clean.items() if c})
        object.__setattr__(self, "nvars", nvars)

    def __setattr__(self, name, value):
        raise AttributeError("GroupRingElement is immutable")

    @classmethod
    def zero(cls, nvars: int = 1):
        return cls({}, nvars)

    @classmethod
    def one(cls, nvars: int = 1):
        return cls({(0,) * nvars: 1}, nvars)

    @classmethod
    def monomial(cls, exponent, coeff: int = 1):
        exponent = tuple(exponent)
        return cls({exponent: coeff}, len(exponent))

    @classmethod
    def from_list(cls, entries, nvars: int):
        """ Inverse of to_list. """
        return cls({tuple(exponent): coeff for exponent, coeff in entries}, nvars)

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self):
        return not self._terms

    def is_monomial(self):
        return len(self._terms) == 1

    def is_unit(self):
        """ Units of the group ring are plus or minus a monomial. """
        return self.is_monomial() and abs(next(iter(self._terms.values()))) == 1

    def inverse(self):
        if not self.is_unit():
            raise ValueError(f"{self} is not a unit")
        (exponent, coeff), = self._terms.items()
        return GroupRingElement.monomial(tuple(-x for x in exponent), coeff)

    def coefficient(self, exponent):
        return self._terms.get(tuple(exponent), 0)

    def _check(self, other):
        if not isinstance(other, GroupRingElement):
            other = GroupRingElement({(0,) * self.nvars: int(other)}, self.nvars)
        if other.nvars != self.nvars:
            raise ValueError(f"mixing ring elements in {self.nvars} and {other.nvars} variables")
        return other

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self._terms)
        for exponent, coeff in other._terms.items():
            terms[exponent] = terms.get(exponent, 0) + coeff
        return GroupRingElement(terms, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement({e: -c for e, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        terms = {}
        for (e1, c1), (e2, c2) in itertools.product(self._terms.items(), other._terms.items()):
            exponent = tuple(a + b for a, b in zip(e1, e2))
            terms[exponent] = terms.get(exponent, 0) + c1 * c2
        return GroupRingElement(terms, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** -k
        result = GroupRingElement.one(self.nvars)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = GroupRingElement({(0,) * self.nvars: other}, self.nvars)
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    def __repr__(self):
        return f"GroupRingElement({self.to_list()}, nvars={self.nvars})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exponent, coeff in self.items():
            factors = [f"t{i}^{x}" if x != 1 else f"t{i}" for i, x in enumerate(exponent) if x]
            parts.append("*".join([str(coeff)] + factors) if factors else str(coeff))
        return " + ".join(parts)

    def shift(self, exponent):
        """ Multiply by the monomial with the given exponent. """

        return GroupRingElement({tuple(a + b for a, b in zip(e, exponent)): c
                                 for e, c in self._terms.items()}, self.nvars)

    def min_exponent(self):
        """ Variable-wise minimum exponent of the support. """

        if not self._terms:
            return (0,) * self.nvars
        return tuple(min(e[i] for e in self._terms) for i in range(self.nvars))

    def leading_term(self):
        """ Largest exponent in graded-lex order and its coefficient. """

        exponent = max(self._terms, key=lambda e: (sum(e), e))
        return exponent, self._terms[exponent]

    def canonical(self):
        """ Representative of the class up to units.

        The support is shifted so that every variable has minimum exponent 0,
        then the sign is fixed so that the graded-lex leading coefficient is
        positive. Idempotent. """

        if not self._terms:
            return self
        shifted = self.shift(tuple(-x for x in self.min_exponent()))
        if shifted.leading_term()[1] < 0:
            shifted = -shifted
        return shifted

    def equal_up_to_unit(self, other):
        return self.canonical() == other.canonical()

    def specialize(self):
        """ Image under the augmentation map (every variable set to 1). """
        return sum(self._terms.values())

    def degree(self, functional):
        """ Minimum and maximum of a linear functional over the support. """

        values = [sum(a * b for a, b in zip(e, functional)) for e in self._terms]
        return min(values), max(values)

    def to_list(self):
        """ JSON-ready [[exponent list, coefficient], ...] sorted by exponent. """
        return [[list(exponent), coeff] for exponent, coeff in self.items()]

    # sympy bridge; only valid for nonnegative exponents
    def to_sympy(self):
        gens = symbols_for(self.nvars)
        expr = sp.Integer(0)
        for exponent, coeff in self.items():
            if any(x < 0 for x in exponent):
                raise ValueError("negative exponent; shift before converting")
            term = sp.Integer(coeff)
            for g, x in zip(gens, exponent):
                term *= g ** x
            expr += term
        return expr

    @classmethod
    def from_sympy(cls, expr, nvars: int):
        expr = sp.expand(expr)
        if nvars == 0:
            return cls({(): int(expr)}, 0)
        if expr == 0:
            return cls.zero(nvars)
        poly = Poly(expr, *symbols_for(nvars))
        return cls({exponent: int(coeff) for exponent, coeff in poly.terms()}, nvars)


@functools.lru_cache(maxsize=None)
def symbols_for(nvars: int):
    """ The polynomial variables t0, ..., t{nvars-1}. """

    if nvars == 0:
        return ()
    return tuple(sp.symbols(f"t0:{nvars}", integer=True))


def linear_value(functional, exponent):
    return sum(a * b for a, b in zip(functional, exponent))


# MATRICES
def _matrix_nvars(matrix):
    for row in matrix:
        for entry in row:
            return entry.nvars
    return 0


def _shift_columns(matrix):
    """ Multiply each column by a monomial so that every entry has nonnegative exponents.

    Returns:
        tuple: Shifted matrix and the total exponent that was added. """

    nvars = _matrix_nvars(matrix)
    rows, cols = len(matrix), len(matrix[0]) if matrix else 0
    total = [0] * nvars
    shifted = [list(row) for row in matrix]
    for j in range(cols):
        low = [0] * nvars
        for i in range(rows):
            if not matrix[i][j].is_zero():
                low = [min(a, b) for a, b in zip(low, matrix[i][j].min_exponent())]
        for i in range(rows):
            shifted[i][j] = matrix[i][j].shift(tuple(-x for x in low))
        total = [a - b for a, b in zip(total, low)]
    return shifted, tuple(total)


def _sympy_determinant(matrix, nvars):
    if not matrix:
        return GroupRingElement.one(nvars)
    entries = [[entry.to_sympy() for entry in row] for row in matrix]
    return GroupRingElement.from_sympy(sp.Matrix(entries).det(method="bareiss"), nvars)


def determinant(matrix):
    """ Exact determinant of a square matrix of ring elements by fraction-free elimination.

    Args:
        matrix (list): Square list of rows of GroupRingElement.
    Returns:
        GroupRingElement: The determinant, not canonicalized. """

    if any(len(row) != len(matrix) for row in matrix):
        raise ValueError("determinant of a non-square matrix")
    nvars = _matrix_nvars(matrix)
    shifted, total = _shift_columns(matrix)
    det = _sympy_determinant(shifted, nvars)
    return det.shift(tuple(-x for x in total))


def cofactor_determinant(matrix):
    """ Determinant by expansion along the first row; exponential, for cross-checks. """

    size = len(matrix)
    nvars = _matrix_nvars(matrix)
    if size == 0:
        return GroupRingElement.one(nvars)
    if size == 1:
        return matrix[0][0]
    result = GroupRingElement.zero(nvars)
    for j in range(size):
        if matrix[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * cofactor_determinant(minor)
        result = result + term if j % 2 == 0 else result - term
    return result


def specialize_matrix(matrix):
    """ Integer matrix obtained by setting every variable to 1. """
    return [[entry.specialize() for entry in row] for row in matrix]


def maximal_minors(matrix):
    """ Column index sets of the maximal minors of a wide matrix. """

    rows, cols = len(matrix), len(matrix[0])
    return list(itertools.combinations(range(cols), rows))


def gcd_of_minors(matrix, budget: int = DEFAULT_MINOR_BUDGET):
    """ Greatest common divisor of the maximal minors of a wide matrix, up to units.

    Raises:
        errors.GcdBudgetExceeded: More minors than budget.
    Returns:
        GroupRingElement: Canonical gcd; zero when every minor vanishes. """

    rows, cols = len(matrix), len(matrix[0])
    count = comb(cols, rows)
    if count > budget:
        raise errors.GcdBudgetExceeded(count, budget)

    nvars = _matrix_nvars(matrix)
    shifted, _ = _shift_columns(matrix)
    minors = []
    for columns in maximal_minors(shifted):
        sub = [[row[j] for j in columns] for row in shifted]
        minor = _sympy_determinant(sub, nvars)
        if not minor.is_zero():
            minors.append(minor)
    log.debug("gcd of %d nonzero minors out of %d", len(minors), count)
    if not minors:
        return GroupRingElement.zero(nvars)
    return functools.reduce(polynomial_gcd, minors).canonical()


def polynomial_gcd(a: GroupRingElement, b: GroupRingElement):
    """ gcd of two ring elements up to units. """

    nvars = a.nvars
    a, b = a.canonical(), b.canonical()
    if nvars == 0:
        return GroupRingElement({(): gcd(a.specialize(), b.specialize())}, 0)
    gens = symbols_for(nvars)
    g = sp.gcd(Poly(a.to_sympy(), *gens), Poly(b.to_sympy(), *gens))
    return GroupRingElement.from_sympy(g.as_expr(), nvars).canonical()


def exquo(a: GroupRingElement, b: GroupRingElement):
    """ Exact quotient a / b in the group ring, or None when b does not divide a. """

    if b.is_zero():
        raise ZeroDivisionError("division by the zero ring element")
    if a.is_zero():
        return a
    nvars = a.nvars
    a_low, b_low = a.min_exponent(), b.min_exponent()
    a0 = a.shift(tuple(-x for x in a_low))
    b0 = b.shift(tuple(-x for x in b_low))
    if nvars == 0:
        q, r = divmod(a0.specialize(), b0.specialize())
        return None if r else GroupRingElement({(): q}, 0)
    gens = symbols_for(nvars)
    q, r = Poly(a0.to_sympy(), *gens, domain="QQ").div(Poly(b0.to_sympy(), *gens, domain="QQ"))
    if not r.is_zero or any(not c.is_integer for c in q.coeffs()):
        return None
    quotient = GroupRingElement({e: int(c) for e, c in q.terms()}, nvars)
    return quotient.shift(tuple(x - y for x, y in zip(a_low, b_low)))


def divides(b: GroupRingElement, a: GroupRingElement):
    return exquo(a, b) is not None


# TRUNCATED SERIES
class TruncatedSeries:
    """ Power series in the cone of a positive functional, kept up to a degree cap.

    Coefficients live on exponents g with 0 <= functional(g) <= degree. """

    def __init__(self, functional, degree: int, coefficients: dict):
        self.functional = tuple(functional)
        self.degree = degree
        self.coefficients = {e: c for e, c in coefficients.items()
                             if c and 0 <= linear_value(self.functional, e) <= degree}

    @classmethod
    def from_element(cls, p: GroupRingElement, functional, degree: int):
        """ Truncate a ring element, which must be supported in the nonnegative cone.

        Raises:
            errors.NotConeSupported: Some term has negative functional degree. """

        for exponent in p.terms:
            if linear_value(functional, exponent) < 0:
                raise errors.NotConeSupported(
                    f"term {list(exponent)} has degree {linear_value(functional, exponent)} < 0")
        return cls(functional, degree, p.terms)

    def __mul__(self, other):
        terms = {}
        for (e1, c1), (e2, c2) in itertools.product(self.coefficients.items(), other.coefficients.items()):
            if linear_value(self.functional, e1) + linear_value(self.functional, e2) > self.degree:
                continue
            exponent = tuple(a + b for a, b in zip(e1, e2))
            terms[exponent] = terms.get(exponent, 0) + c1 * c2
        return TruncatedSeries(self.functional, self.degree, terms)

    def __add__(self, other):
        terms = dict(self.coefficients)
        for exponent, coeff in other.coefficients.items():
            terms[exponent] = terms.get(exponent, 0) + coeff
        return TruncatedSeries(self.functional, self.degree, terms)

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries) and self.functional == other.functional
                and self.degree == other.degree and self.coefficients == other.coefficients)

    def is_one(self):
        return len(self.coefficients) == 1 and self.coefficients.get(self._origin()) == 1

    def _origin(self):
        return (0,) * len(self.functional)

    def by_degree(self):
        """ Sum of coefficients in each functional degree 0..degree. """

        totals = [0] * (self.degree + 1)
        for exponent, coeff in self.coefficients.items():
            totals[linear_value(self.functional, exponent)] += coeff
        return totals

    def to_list(self):
        return [[list(e), c] for e, c in sorted(self.coefficients.items(),
                                                key=lambda item: (linear_value(self.functional, item[0]), item[0]))]


def series_reciprocal(p: GroupRingElement, functional, degree: int):
    """ Inverse of p as a truncated series.

    Args:
        p (GroupRingElement): Supported in the nonnegative cone of functional,
            with degree-zero part equal to +1 or -1.
        functional (tuple): Integer linear functional on exponents.
        degree (int): Cap on the functional degree.
    Raises:
        errors.NotConeSupported: p has a term of negative degree.
        errors.NotUnitConstantTerm: Degree-zero part is not a constant unit.
    Returns:
        TruncatedSeries: q with p * q = 1 up to the degree cap. """

    series = TruncatedSeries.from_element(p, functional, degree)
    origin = (0,) * p.nvars
    flat = {e: c for e, c in p.terms.items() if linear_value(functional, e) == 0}
    if set(flat) != {origin} or abs(flat[origin]) != 1:
        raise errors.NotUnitConstantTerm(f"degree-zero part {GroupRingElement(flat, p.nvars)} is not a unit constant")
    unit = flat[origin]

    # q = unit * sum_k r^k with r = 1 - unit * p of degree >= 1
    rest = TruncatedSeries(functional, degree, {e: -unit * c for e, c in series.coefficients.items() if e != origin})
    power = TruncatedSeries(functional, degree, {origin: 1})
    total = power
    for _ in range(degree):
        power = power * rest
        if not power.coefficients:
            break
        total = total + power
    return TruncatedSeries(functional, degree, {e: unit * c for e, c in total.coefficients.items()})


def cone_normalized(p: GroupRingElement, functional):
    """ Shift p so that its unique lowest-degree term is the constant +1, when that term is a unit.

    Raises:
        errors.NotUnitConstantTerm: The lowest functional degree carries
            several terms or a non-unit coefficient. """

    if p.is_zero():
        raise errors.NotUnitConstantTerm("zero has no reciprocal")
    low, _ = p.degree(functional)
    bottom = [(e, c) for e, c in p.terms.items() if linear_value(functional, e) == low]
    if len(bottom) != 1 or abs(bottom[0][1]) != 1:
        raise errors.NotUnitConstantTerm(f"lowest-degree part of {p} is not a unit monomial")
    exponent, coeff = bottom[0]
    shifted = p.shift(tuple(-x for x in exponent))
    return shifted if coeff > 0 else -shifted
