"""Field towers Q(g1)(g2)... with exact canonical element arithmetic.

A tower is a chain of levels.  Level 0 is Q; each later level adjoins one
generator, either transcendental (elements are reduced fractions of
univariate polynomials over the level below, denominator monic) or algebraic
with a monic square-free minimal polynomial (elements are coefficient vectors
of length below the degree).  Each level's canonical form is unique, so
element equality is plain structural equality: sound and complete.

Inverses at algebraic levels come from the extended Euclidean algorithm in
the top generator, recursing downward through the chain.  When a minimal
polynomial is not irreducible the Euclid run can surface a zero divisor;
that raises ZeroDivisorError instead of silently producing garbage.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .exact import MultiPoly, RatFunc, rational
from .parser import Apply, Bin, Neg, Num, Pow, Sym, parse_expr


class TowerError(Exception):
    """Base error for tower construction and element arithmetic."""


class TowerMismatchError(TowerError):
    """Two elements from different towers met in one operation."""


class DivisionByZeroElementError(TowerError, ZeroDivisionError):
    """Division by an element that reduces to zero."""


class ZeroDivisorError(TowerError):
    """A zero divisor appeared while inverting; the minimal polynomial
    involved is likely reducible."""


class UnknownSymbolError(TowerError):
    """An expression referenced a symbol the tower does not declare."""


# -- univariate polynomial helpers over an abstract coefficient field -------
#
# Polynomials are tuples of level representations, lowest degree first, with
# no trailing zeros; () is the zero polynomial.


def _pstrip(level, coeffs) -> tuple:
    cs = list(coeffs)
    while cs and level.is_zero(cs[-1]):
        cs.pop()
    return tuple(cs)


def _padd(level, a, b) -> tuple:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else level.zero
        y = b[i] if i < len(b) else level.zero
        out.append(level.add(x, y))
    return _pstrip(level, out)


def _pneg(level, a) -> tuple:
    return tuple(level.neg(x) for x in a)


def _psub(level, a, b) -> tuple:
    return _padd(level, a, _pneg(level, b))


def _pmul(level, a, b) -> tuple:
    if not a or not b:
        return ()
    out = [level.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if level.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = level.add(out[i + j], level.mul(x, y))
    return _pstrip(level, out)


def _pscale(level, a, c) -> tuple:
    return _pstrip(level, tuple(level.mul(x, c) for x in a))


def _pdivmod(level, a, b) -> Tuple[tuple, tuple]:
    if not b:
        raise DivisionByZeroElementError("polynomial division by zero")
    lc_inv = level.inv(b[-1])
    rem = list(a)
    quo = [level.zero] * max(0, len(a) - len(b) + 1)
    while len(rem) >= len(b):
        if level.is_zero(rem[-1]):
            rem.pop()
            continue
        shift = len(rem) - len(b)
        q = level.mul(rem[-1], lc_inv)
        quo[shift] = q
        for i in range(len(b)):
            rem[shift + i] = level.sub(rem[shift + i], level.mul(q, b[i]))
        rem.pop()
    return _pstrip(level, quo), _pstrip(level, rem)


def _pmonic(level, a) -> tuple:
    if not a:
        return a
    return _pscale(level, a, level.inv(a[-1]))


def _pgcd(level, a, b) -> tuple:
    a, b = _pstrip(level, a), _pstrip(level, b)
    while b:
        a, b = b, _pdivmod(level, a, b)[1]
    return _pmonic(level, a)


def _pxgcd(level, a, m) -> Tuple[tuple, tuple, tuple]:
    """Extended Euclid: returns monic g and s, t with s*a + t*m = g."""
    r0, r1 = _pstrip(level, a), _pstrip(level, m)
    s0, s1 = (level.one,), ()
    t0, t1 = (), (level.one,)
    while r1:
        q, r = _pdivmod(level, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(level, s0, _pmul(level, q, s1))
        t0, t1 = t1, _psub(level, t0, _pmul(level, q, t1))
    if r0:
        c = level.inv(r0[-1])
        r0, s0, t0 = _pscale(level, r0, c), _pscale(level, s0, c), _pscale(level, t0, c)
    return r0, s0, t0


def _pderiv(level, a) -> tuple:
    out = []
    for i in range(1, len(a)):
        out.append(level.mul(a[i], level.from_rational(Fraction(i))))
    return _pstrip(level, out)


# -- levels ------------------------------------------------------------------


class _LevelQ:
    kind = "rational"
    name: Optional[str] = None
    below = None

    zero = Fraction(0)
    one = Fraction(1)

    def from_rational(self, q: Fraction):
        return q

    def is_zero(self, a) -> bool:
        return a == 0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DivisionByZeroElementError("division by zero")
        return 1 / a


class _LevelTrans:
    """Fraction field of below[name]; reps are (num, den) coefficient tuples
    with gcd(num, den) = 1 and den monic."""

    kind = "transcendental"

    def __init__(self, below, name: str):
        self.below = below
        self.name = name
        self.zero = ((), (below.one,))
        self.one = ((below.one,), (below.one,))

    def _normalize(self, num: tuple, den: tuple):
        K = self.below
        num, den = _pstrip(K, num), _pstrip(K, den)
        if not den:
            raise DivisionByZeroElementError("division by zero element")
        if not num:
            return ((), (K.one,))
        g = _pgcd(K, num, den)
        if len(g) > 1:
            num = _pdivmod(K, num, g)[0]
            den = _pdivmod(K, den, g)[0]
        c = K.inv(den[-1])
        return (_pscale(K, num, c), _pmonic(K, den))

    def from_rational(self, q: Fraction):
        return self.from_below(self.below.from_rational(q))

    def from_below(self, c):
        if self.below.is_zero(c):
            return self.zero
        return ((c,), (self.below.one,))

    def generator(self):
        return ((self.below.zero, self.below.one), (self.below.one,))

    def is_zero(self, a) -> bool:
        return not a[0]

    def add(self, a, b):
        K = self.below
        n = _padd(K, _pmul(K, a[0], b[1]), _pmul(K, b[0], a[1]))
        return self._normalize(n, _pmul(K, a[1], b[1]))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        return (_pneg(self.below, a[0]), a[1])

    def mul(self, a, b):
        K = self.below
        return self._normalize(_pmul(K, a[0], b[0]), _pmul(K, a[1], b[1]))

    def inv(self, a):
        if not a[0]:
            raise DivisionByZeroElementError("division by zero element")
        return self._normalize(a[1], a[0])


class _LevelAlg:
    """Quotient below[name]/(minpoly); reps are coefficient tuples of length
    under the degree.  minpoly is monic with coefficients from below."""

    kind = "algebraic"

    def __init__(self, below, name: str, minpoly: tuple):
        self.below = below
        self.name = name
        self.minpoly = minpoly
        self.degree = len(minpoly) - 1
        self.zero = ()
        self.one = (below.one,)

    def from_rational(self, q: Fraction):
        return self.from_below(self.below.from_rational(q))

    def from_below(self, c):
        if self.below.is_zero(c):
            return ()
        return (c,)

    def generator(self):
        return (self.below.zero, self.below.one)

    def is_zero(self, a) -> bool:
        return not a

    def _reduce(self, a):
        if len(a) <= self.degree:
            return _pstrip(self.below, a)
        return _pdivmod(self.below, a, self.minpoly)[1]

    def add(self, a, b):
        return _padd(self.below, a, b)

    def sub(self, a, b):
        return _psub(self.below, a, b)

    def neg(self, a):
        return _pneg(self.below, a)

    def mul(self, a, b):
        return self._reduce(_pmul(self.below, a, b))

    def inv(self, a):
        if not a:
            raise DivisionByZeroElementError("division by zero element")
        g, s, _ = _pxgcd(self.below, a, self.minpoly)
        if len(g) != 1:
            raise ZeroDivisorError(
                f"zero divisor while inverting modulo the minimal polynomial of "
                f"{self.name!r}; the minimal polynomial is likely reducible"
            )
        return self._reduce(s)


@dataclass(frozen=True)
class GeneratorSpec:
    """Declared generator: transcendental, or algebraic of the given degree
    with the displayed monic minimal polynomial."""

    name: str
    kind: str
    degree: int = 0
    minpoly_text: str = ""


class FieldTower:
    """Immutable chain of generators over Q.

    Towers are identified by construction: elements of two separately built
    towers never mix, even when the declarations look identical.
    """

    def __init__(self, levels: List, gens: Tuple[GeneratorSpec, ...]):
        self._levels = levels
        self.gens = gens

    @property
    def levels(self) -> List:
        return self._levels

    @property
    def top(self):
        return self._levels[-1]

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.gens)

    def transcendental_names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.gens if g.kind == "transcendental")

    def __str__(self) -> str:
        if not self.gens:
            return "Q"
        parts = ["Q"]
        for g in self.gens:
            parts.append(f"({g.name})")
        return "".join(parts)

    def describe(self) -> str:
        lines = [f"tower {self}"]
        for g in self.gens:
            if g.kind == "transcendental":
                lines.append(f"  {g.name}: transcendental")
            else:
                lines.append(f"  {g.name}: algebraic, minimal polynomial {g.minpoly_text}")
        return "\n".join(lines)

    def _check_name(self, name: str) -> None:
        if not name.isidentifier():
            raise TowerError(f"generator name {name!r} is not an identifier")
        if name in self.variables:
            raise TowerError(f"duplicate generator name {name!r}")

    def adjoin_transcendental(self, name: str) -> "FieldTower":
        self._check_name(name)
        level = _LevelTrans(self.top, name)
        spec = GeneratorSpec(name, "transcendental")
        return FieldTower(self._levels + [level], self.gens + (spec,))

    def adjoin_algebraic(self, name: str, minpoly: Union[str, Sequence]) -> "FieldTower":
        self._check_name(name)
        coeffs = self._minpoly_coeffs(name, minpoly)
        degree = len(coeffs) - 1
        if degree < 2:
            raise TowerError("algebraic generator needs a minimal polynomial of degree >= 2")
        top = self.top
        lc = coeffs[-1]
        if top.is_zero(lc):
            raise TowerError("minimal polynomial has zero leading coefficient")
        lc_inv = top.inv(lc)
        monic = tuple(top.mul(c, lc_inv) for c in coeffs)
        deriv = _pderiv(top, monic)
        g = _pgcd(top, monic, deriv)
        if len(g) != 1:
            raise TowerError(
                "minimal polynomial is not square-free: gcd with its derivative "
                "has positive degree"
            )
        level = _LevelAlg(top, name, monic)
        spec = GeneratorSpec(name, "algebraic", degree, _render_minpoly(self, name, monic))
        return FieldTower(self._levels + [level], self.gens + (spec,))

    def _minpoly_coeffs(self, name: str, minpoly: Union[str, Sequence]) -> tuple:
        if isinstance(minpoly, str):
            ast = parse_expr(minpoly)
            poly = _eval_minpoly_ast(self, name, ast)
            return _pstrip(self.top, tuple(c.rep for c in poly))
        coeffs = []
        for c in minpoly:
            elem = c if isinstance(c, TowerElement) else self.rational(rational(c))
            if elem.tower is not self:
                raise TowerMismatchError("minimal polynomial coefficient from another tower")
            coeffs.append(elem.rep)
        return _pstrip(self.top, tuple(coeffs))

    def rational(self, q: Union[int, Fraction, str]) -> "TowerElement":
        return TowerElement(self, self.top.from_rational(rational(q)))

    @property
    def zero(self) -> "TowerElement":
        return self.rational(0)

    @property
    def one(self) -> "TowerElement":
        return self.rational(1)

    def gen(self, name: str) -> "TowerElement":
        names = self.variables
        if name not in names:
            raise UnknownSymbolError(f"unknown generator {name!r}")
        idx = names.index(name) + 1
        rep = self._levels[idx].generator()
        return TowerElement(self, self.embed_rep(idx, rep))

    def embed_rep(self, level_index: int, rep):
        for level in self._levels[level_index + 1:]:
            rep = level.from_below(rep)
        return rep

    def level_of(self, name: str):
        return self._levels[self.variables.index(name) + 1]


def tower_new() -> FieldTower:
    return FieldTower([_LevelQ()], ())


class TowerElement:
    """Element of a tower in canonical form; arithmetic is exact."""

    __slots__ = ("tower", "rep")

    def __init__(self, tower: FieldTower, rep):
        self.tower = tower
        self.rep = rep

    def _coerce(self, other) -> "TowerElement":
        if isinstance(other, TowerElement):
            if other.tower is not self.tower:
                raise TowerMismatchError("elements belong to different towers")
            return other
        if isinstance(other, (int, Fraction)):
            return self.tower.rational(other)
        raise TypeError(f"cannot combine tower element with {other!r}")

    def __add__(self, other):
        other = self._coerce(other)
        return TowerElement(self.tower, self.tower.top.add(self.rep, other.rep))

    __radd__ = __add__

    def __neg__(self):
        return TowerElement(self.tower, self.tower.top.neg(self.rep))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return TowerElement(self.tower, self.tower.top.mul(self.rep, other.rep))

    __rmul__ = __mul__

    def inv(self) -> "TowerElement":
        return TowerElement(self.tower, self.tower.top.inv(self.rep))

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __pow__(self, k: int) -> "TowerElement":
        if not isinstance(k, int):
            raise ValueError("tower element powers take integer exponents")
        if k < 0:
            return self.inv() ** (-k)
        result = self.tower.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return self.tower.top.is_zero(self.rep)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.tower.rational(other)
        if not isinstance(other, TowerElement):
            return NotImplemented
        if other.tower is not self.tower:
            raise TowerMismatchError("elements belong to different towers")
        return self.rep == other.rep

    def __hash__(self) -> int:
        return hash((id(self.tower), self.rep))

    def as_ratfunc(self) -> RatFunc:
        num, den = _flatten(self.tower, len(self.tower.levels) - 1, self.rep)
        return RatFunc(num, den)

    def __str__(self) -> str:
        return str(self.as_ratfunc())

    def __repr__(self) -> str:
        return f"<{self} in {self.tower}>"


def element_eq(a: TowerElement, b: TowerElement) -> bool:
    """Exact equality; raises TowerMismatchError across towers."""
    if not isinstance(a, TowerElement) or not isinstance(b, TowerElement):
        raise TypeError("element_eq compares tower elements")
    if a.tower is not b.tower:
        raise TowerMismatchError("elements belong to different towers")
    return a.rep == b.rep


def _flatten(tower: FieldTower, level_index: int, rep) -> Tuple[MultiPoly, MultiPoly]:
    variables = tower.variables
    one = MultiPoly.const(variables, 1)
    if level_index == 0:
        return MultiPoly.const(variables, rep), one
    level = tower.levels[level_index]
    x = MultiPoly.var(variables, level.name)

    def flatten_poly(coeffs) -> Tuple[MultiPoly, MultiPoly]:
        num = MultiPoly.const(variables, 0)
        den = one
        for i, c in enumerate(coeffs):
            cn, cd = _flatten(tower, level_index - 1, c)
            num = num * cd + cn * (x ** i) * den
            den = den * cd
        return num, den

    if level.kind == "algebraic":
        return flatten_poly(rep)
    num_n, num_d = flatten_poly(rep[0])
    den_n, den_d = flatten_poly(rep[1])
    return num_n * den_d, num_d * den_n


def _render_minpoly(tower: FieldTower, name: str, coeffs: tuple) -> str:
    parts: List[str] = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if tower.top.is_zero(c):
            continue
        c_str = str(TowerElement(tower, c))
        if i == 0:
            piece = c_str if not _needs_parens(c_str) else f"({c_str})"
        else:
            power = name if i == 1 else f"{name}^{i}"
            if c_str == "1":
                piece = power
            elif c_str == "-1":
                piece = f"-{power}"
            elif _needs_parens(c_str):
                piece = f"({c_str})*{power}"
            else:
                piece = f"{c_str}*{power}"
        parts.append(piece)
    if not parts:
        return "0"
    out = parts[0]
    for piece in parts[1:]:
        if piece.startswith("-"):
            out += f" - {piece[1:]}"
        else:
            out += f" + {piece}"
    return out


def _needs_parens(s: str) -> bool:
    return " " in s or "/" in s or "*" in s


class _MinpolyPoly:
    """Polynomial in the new generator symbol with tower-element coefficients;
    only the arithmetic a minimal-polynomial expression needs."""

    __slots__ = ("tower", "coeffs")

    def __init__(self, tower: FieldTower, coeffs: List[TowerElement]):
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.tower = tower
        self.coeffs = coeffs

    @classmethod
    def const(cls, tower: FieldTower, value: TowerElement) -> "_MinpolyPoly":
        return cls(tower, [value])

    def add(self, other: "_MinpolyPoly") -> "_MinpolyPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        zero = self.tower.zero
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else zero
            b = other.coeffs[i] if i < len(other.coeffs) else zero
            out.append(a + b)
        return _MinpolyPoly(self.tower, out)

    def neg(self) -> "_MinpolyPoly":
        return _MinpolyPoly(self.tower, [-c for c in self.coeffs])

    def mul(self, other: "_MinpolyPoly") -> "_MinpolyPoly":
        if not self.coeffs or not other.coeffs:
            return _MinpolyPoly(self.tower, [])
        zero = self.tower.zero
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return _MinpolyPoly(self.tower, out)

    def pow(self, k: int) -> "_MinpolyPoly":
        if k < 0:
            raise TowerError("minimal polynomial expressions take nonnegative powers")
        result = _MinpolyPoly.const(self.tower, self.tower.one)
        base = self
        while k:
            if k & 1:
                result = result.mul(base)
            base = base.mul(base)
            k >>= 1
        return result


def _eval_minpoly_ast(tower: FieldTower, name: str, ast) -> List[TowerElement]:
    def walk(node) -> _MinpolyPoly:
        if isinstance(node, Num):
            return _MinpolyPoly.const(tower, tower.rational(node.value))
        if isinstance(node, Sym):
            if node.name == name:
                return _MinpolyPoly(tower, [tower.zero, tower.one])
            return _MinpolyPoly.const(tower, tower.gen(node.name))
        if isinstance(node, Neg):
            return walk(node.operand).neg()
        if isinstance(node, Pow):
            return walk(node.base).pow(node.exponent)
        if isinstance(node, Bin):
            left, right = walk(node.left), walk(node.right)
            if node.op == "+":
                return left.add(right)
            if node.op == "-":
                return left.add(right.neg())
            if node.op == "*":
                return left.mul(right)
            if node.op == "/":
                if len(right.coeffs) > 1:
                    raise TowerError(
                        "minimal polynomial must be polynomial in the new generator"
                    )
                if not right.coeffs:
                    raise DivisionByZeroElementError("division by zero element")
                inv = right.coeffs[0].inv()
                return _MinpolyPoly(tower, [c * inv for c in left.coeffs])
        if isinstance(node, Apply):
            raise TowerError("function applications are not allowed in minimal polynomials")
        raise TowerError(f"unsupported node in minimal polynomial: {node!r}")

    return walk(ast).coeffs


def element_eval(
    tower: FieldTower,
    source,
    derivations: Optional[Dict[str, Callable[[TowerElement], TowerElement]]] = None,
) -> TowerElement:
    """Evaluate an expression (string or parsed tree) to a tower element.

    Symbols must be declared generators; function applications resolve
    through the optional derivations map.
    """
    ast = parse_expr(source) if isinstance(source, str) else source
    derivations = derivations or {}

    def walk(node) -> TowerElement:
        if isinstance(node, Num):
            return tower.rational(node.value)
        if isinstance(node, Sym):
            return tower.gen(node.name)
        if isinstance(node, Neg):
            return -walk(node.operand)
        if isinstance(node, Pow):
            return walk(node.base) ** node.exponent
        if isinstance(node, Bin):
            left, right = walk(node.left), walk(node.right)
            if node.op == "+":
                return left + right
            if node.op == "-":
                return left - right
            if node.op == "*":
                return left * right
            if node.op == "/":
                if right.is_zero():
                    raise DivisionByZeroElementError("division by an element that reduces to zero")
                return left / right
        if isinstance(node, Apply):
            fn = derivations.get(node.func)
            if fn is None:
                raise UnknownSymbolError(f"unknown function {node.func!r}")
            return fn(walk(node.arg))
        raise TowerError(f"unsupported expression node: {node!r}")

    return walk(ast)
