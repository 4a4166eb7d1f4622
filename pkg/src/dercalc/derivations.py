"""Derivations on field towers.

A derivation is determined by its values on the transcendental generators;
it vanishes on Q, and on each algebraic generator s with minimal polynomial
p the value is forced to -p^d(s)/p'(s), where p^d applies the derivation to
the coefficients.  Evaluation recurses along the tower structure: the
coefficient rule on Q, the polynomial rule d(P(g)) = P^d(g) + d(g) P'(g) at
each generator, and the quotient rule at transcendental levels.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Union

from .exact import BudgetError, Rational, rational
from .towers import (
    DivisionByZeroElementError,
    FieldTower,
    TowerElement,
    TowerError,
    TowerMismatchError,
    element_eval,
)


class DerivationError(TowerError):
    """Invalid derivation construction or residual arguments."""


ElementLike = Union[TowerElement, int, Fraction, str]


def _coerce_element(tower: FieldTower, value: ElementLike) -> TowerElement:
    if isinstance(value, TowerElement):
        if value.tower is not tower:
            raise TowerMismatchError("value belongs to a different tower")
        return value
    if isinstance(value, str):
        return element_eval(tower, value)
    return tower.rational(rational(value))


def _eval_with_values(
    tower: FieldTower,
    values: Dict[str, TowerElement],
    level_index: int,
    rep,
) -> TowerElement:
    level = tower.levels[level_index]
    if level.kind == "rational":
        return tower.zero
    gen_value = values[level.name]
    gen_elem = tower.gen(level.name)
    below = level_index - 1

    def poly_parts(coeffs):
        """Element value of sum c_i g^i together with its derivation image."""
        val = tower.zero
        dval = tower.zero
        formal = tower.zero
        for i, c in enumerate(coeffs):
            ci = TowerElement(tower, tower.embed_rep(below, c))
            gi = gen_elem ** i
            val = val + ci * gi
            dci = _eval_with_values(tower, values, below, c)
            if not dci.is_zero():
                dval = dval + dci * gi
            if i >= 1 and not ci.is_zero():
                formal = formal + ci * (gen_elem ** (i - 1)) * i
        return val, dval + gen_value * formal

    if level.kind == "algebraic":
        return poly_parts(rep)[1]
    num_val, num_d = poly_parts(rep[0])
    den_val, den_d = poly_parts(rep[1])
    return (den_val * num_d - num_val * den_d) / (den_val * den_val)


def _forced_algebraic_value(
    tower: FieldTower,
    values: Dict[str, TowerElement],
    level_index: int,
) -> TowerElement:
    level = tower.levels[level_index]
    below = level_index - 1
    gen_elem = tower.gen(level.name)
    p_d = tower.zero
    p_prime = tower.zero
    for i, c in enumerate(level.minpoly):
        dci = _eval_with_values(tower, values, below, c)
        if not dci.is_zero():
            p_d = p_d + dci * gen_elem ** i
        if i >= 1:
            ci = TowerElement(tower, tower.embed_rep(below, c))
            if not ci.is_zero():
                p_prime = p_prime + ci * (gen_elem ** (i - 1)) * i
    return -p_d / p_prime


class Derivation:
    """Additive Leibniz map on a tower, stored by its generator values."""

    __slots__ = ("tower", "values")

    def __init__(self, tower: FieldTower, values: Dict[str, TowerElement]):
        self.tower = tower
        self.values = dict(values)

    def eval(self, x: ElementLike) -> TowerElement:
        elem = _coerce_element(self.tower, x)
        return _eval_with_values(self.tower, self.values, len(self.tower.levels) - 1, elem.rep)

    __call__ = eval

    def generator_values(self) -> Dict[str, TowerElement]:
        return dict(self.values)

    def describe(self, name: str = "d") -> str:
        lines = []
        for g in self.tower.gens:
            tag = "" if g.kind == "transcendental" else " (forced)"
            lines.append(f"{name}({g.name}) = {self.values[g.name]}{tag}")
        return "\n".join(lines) if lines else f"{name} = 0 on {self.tower}"


def derivation_define(tower: FieldTower, values: Dict[str, ElementLike]) -> Derivation:
    """Build the unique derivation with the given transcendental values.

    The value dict must bind exactly the transcendental generators; values on
    algebraic generators are forced and attempts to set them are rejected.
    """
    trans = set(tower.transcendental_names())
    given = set(values)
    forced_attempt = [n for n in given - trans if n in tower.variables]
    if forced_attempt:
        raise DerivationError(
            f"values on algebraic generators are forced, cannot set: {sorted(forced_attempt)}"
        )
    if given - trans:
        raise DerivationError(f"unknown generators in values: {sorted(given - trans)}")
    if trans - given:
        raise DerivationError(f"missing values for transcendental generators: {sorted(trans - given)}")
    out: Dict[str, TowerElement] = {}
    for idx, spec in enumerate(tower.gens, start=1):
        if spec.kind == "transcendental":
            out[spec.name] = _coerce_element(tower, values[spec.name])
        else:
            out[spec.name] = _forced_algebraic_value(tower, out, idx)
    return Derivation(tower, out)


def derivation_eval(d: Derivation, x: ElementLike) -> TowerElement:
    return d.eval(x)


def _same_tower(d1: Derivation, d2: Derivation) -> FieldTower:
    if d1.tower is not d2.tower:
        raise TowerMismatchError("derivations live on different towers")
    return d1.tower


def derivation_combine(
    alpha: ElementLike,
    d1: Derivation,
    beta: ElementLike,
    d2: Derivation,
) -> Derivation:
    """alpha*d1 + beta*d2 with tower-element coefficients."""
    tower = _same_tower(d1, d2)
    a = _coerce_element(tower, alpha)
    b = _coerce_element(tower, beta)
    values = {
        name: a * d1.values[name] + b * d2.values[name]
        for name in tower.transcendental_names()
    }
    return derivation_define(tower, values)


def derivation_bracket(d1: Derivation, d2: Derivation) -> Derivation:
    """Commutator [d1, d2] = d1 after d2 - d2 after d1, itself a derivation."""
    tower = _same_tower(d1, d2)
    values = {}
    for name in tower.transcendental_names():
        g = tower.gen(name)
        values[name] = d1(d2(g)) - d2(d1(g))
    return derivation_define(tower, values)


def leibniz_residual(d: Derivation, x: ElementLike, y: ElementLike) -> TowerElement:
    """d(xy) - x d(y) - y d(x); identically zero for a derivation."""
    xe = _coerce_element(d.tower, x)
    ye = _coerce_element(d.tower, y)
    return d(xe * ye) - xe * d(ye) - ye * d(xe)


class AffineDerivation:
    """f = chi + slope*id: a derivation plus a rational multiple of the
    identity.  These are exactly the maps the power-rule and substitution
    residuals classify, with slope = f(1)."""

    __slots__ = ("der", "slope")

    def __init__(self, der: Derivation, slope: Union[int, Fraction] = 0):
        self.der = der
        self.slope = rational(slope)

    @property
    def tower(self) -> FieldTower:
        return self.der.tower

    def eval(self, x: ElementLike) -> TowerElement:
        elem = _coerce_element(self.tower, x)
        return self.der(elem) + self.slope * elem

    __call__ = eval


AffineLike = Union[Derivation, AffineDerivation]


def _as_affine(f: AffineLike) -> AffineDerivation:
    if isinstance(f, AffineDerivation):
        return f
    if isinstance(f, Derivation):
        return AffineDerivation(f, 0)
    raise TypeError("expected a Derivation or AffineDerivation")


def power_rule_residual(f: AffineLike, k: int, x: ElementLike) -> TowerElement:
    """f(x^k) - k x^(k-1) f(x) for integer k != 0."""
    if not isinstance(k, int) or k == 0:
        raise DerivationError("power rule takes a nonzero integer exponent")
    f = _as_affine(f)
    xe = _coerce_element(f.tower, x)
    if k < 0 and xe.is_zero():
        raise DerivationError("negative power rule needs a nonzero point")
    return f(xe ** k) - k * (xe ** (k - 1)) * f(xe)


def monomial_residual(
    f: AffineLike,
    g: AffineLike,
    n: int,
    m: int,
    x: ElementLike,
) -> TowerElement:
    """f(x^n) - x^(n-m) g(x^m) for integers n != m."""
    if not isinstance(n, int) or not isinstance(m, int):
        raise DerivationError("monomial residual takes integer exponents")
    if n == m:
        raise DerivationError("monomial residual needs distinct exponents")
    f = _as_affine(f)
    g = _as_affine(g)
    if f.tower is not g.tower:
        raise TowerMismatchError("residual maps live on different towers")
    xe = _coerce_element(f.tower, x)
    if xe.is_zero() and (n < 0 or m < 0 or n - m < 0):
        raise DerivationError("negative exponents need a nonzero point")
    return f(xe ** n) - (xe ** (n - m)) * g(xe ** m)


def mobius_transform(
    tower: FieldTower,
    a: Union[int, Fraction],
    b: Union[int, Fraction],
    c: Union[int, Fraction],
    d: Union[int, Fraction],
    n: int,
    x: ElementLike,
):
    """xi(x) = (a x^n + b)/(c x^n + d) and its formal derivative at x."""
    a, b, c, d = (rational(v) for v in (a, b, c, d))
    if a * d - b * c == 0:
        raise DerivationError("singular coefficient matrix: a*d - b*c = 0")
    if not isinstance(n, int) or n == 0:
        raise DerivationError("substitution exponent must be a nonzero integer")
    xe = _coerce_element(tower, x)
    if n < 0 and xe.is_zero():
        raise DerivationError("negative exponent needs a nonzero point")
    xn = xe ** n
    den = c * xn + d
    if den.is_zero():
        raise DerivationError("substitution denominator vanishes at this point")
    xi = (a * xn + b) / den
    xi_prime = (a * d - b * c) * n * (xe ** (n - 1)) / (den * den)
    return xi, xi_prime


def mobius_residual(
    f: AffineLike,
    a: Union[int, Fraction],
    b: Union[int, Fraction],
    c: Union[int, Fraction],
    d: Union[int, Fraction],
    n: int,
    x: ElementLike,
) -> TowerElement:
    """f(xi(x)) - xi'(x) f(x) for the fractional-linear substitution in x^n."""
    f = _as_affine(f)
    xe = _coerce_element(f.tower, x)
    xi, xi_prime = mobius_transform(f.tower, a, b, c, d, n, xe)
    return f(xi) - xi_prime * f(xe)


def reflection_residual(f: AffineLike, x: ElementLike) -> TowerElement:
    """f(x) + x^2 f(1/x); zero exactly on derivations among additive maps."""
    f = _as_affine(f)
    xe = _coerce_element(f.tower, x)
    if xe.is_zero():
        raise DerivationError("reflection residual needs a nonzero point")
    return f(xe) + (xe * xe) * f(xe.inv())


def square_rule_residual(f: AffineLike, x: ElementLike) -> TowerElement:
    """f(x^2) - 2x f(x)."""
    f = _as_affine(f)
    xe = _coerce_element(f.tower, x)
    return f(xe * xe) - 2 * xe * f(xe)


def nth_power_hom_residual(f: AffineLike, n: int, x: ElementLike) -> TowerElement:
    """f(x^n) - f(x)^n, the defect of being multiplicative on n-th powers."""
    if not isinstance(n, int) or n < 2:
        raise DerivationError("n-th power residual needs an integer n >= 2")
    f = _as_affine(f)
    xe = _coerce_element(f.tower, x)
    return f(xe ** n) - f(xe) ** n


def iterate(d: Derivation, k: int, budget: int = 64) -> List[Callable[[ElementLike], TowerElement]]:
    """Evaluation maps for d^0, d^1, ..., d^k (d^0 is the identity)."""
    if not isinstance(k, int) or k < 0:
        raise DerivationError("iteration order must be a nonnegative integer")
    if k > budget:
        raise BudgetError(f"iteration order {k} exceeds budget {budget}")

    def identity(x: ElementLike) -> TowerElement:
        return _coerce_element(d.tower, x)

    maps: List[Callable[[ElementLike], TowerElement]] = [identity]
    for _ in range(k):
        prev = maps[-1]
        maps.append(lambda x, prev=prev: d(prev(x)))
    return maps


_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71]


def default_substitution(tower: FieldTower) -> Dict[str, Fraction]:
    """i-th transcendental generator maps to the i-th prime."""
    names = tower.transcendental_names()
    if len(names) > len(_PRIMES):
        raise DerivationError("too many transcendental generators for the default substitution")
    return {name: Fraction(_PRIMES[i]) for i, name in enumerate(names)}


def rational_image(elem: TowerElement, subst: Optional[Dict[str, Fraction]] = None) -> Fraction:
    """Value of an algebraic-generator-free element under a rational
    substitution of the transcendental generators."""
    tower = elem.tower
    if subst is None:
        subst = default_substitution(tower)
    rf = elem.as_ratfunc()
    algebraic = {g.name for g in tower.gens if g.kind == "algebraic"}
    for poly in (rf.num, rf.den):
        for exps in poly.terms:
            for name, e in zip(poly.variables, exps):
                if e > 0 and name in algebraic:
                    raise DerivationError(
                        f"algebraic generator {name!r} has no rational image"
                    )
    assignment = {name: Fraction(0) for name in tower.variables}
    for name, value in subst.items():
        if name not in assignment:
            raise DerivationError(f"substitution binds unknown generator {name!r}")
        assignment[name] = rational(value)
    den = rf.den.substitute(assignment)
    if den == 0:
        raise DerivationError("substitution hits a pole of the evaluated element")
    return rf.num.substitute(assignment) / den


def rational_rank(matrix: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q by exact Gaussian elimination."""
    rows = [list(map(rational, row)) for row in matrix]
    if not rows:
        return 0
    cols = len(rows[0])
    rank = 0
    col = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col] / pv
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def independence_rank(
    maps: Sequence[Callable[[TowerElement], TowerElement]],
    points: Sequence[TowerElement],
    subst: Optional[Dict[str, Fraction]] = None,
) -> int:
    """Rank of the matrix maps[j](points[i]) under a rational substitution.

    A full-rank answer certifies linear independence of the maps over Q; a
    rank drop is evidence only, since it may come from the chosen points."""
    if not maps or not points:
        raise DerivationError("independence rank needs maps and points")
    tower = points[0].tower
    for p in points:
        if p.tower is not tower:
            raise TowerMismatchError("points belong to different towers")
    matrix = [[rational_image(m(p), subst) for m in maps] for p in points]
    return rational_rank(matrix)
