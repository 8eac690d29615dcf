"""Split Cayley–Dickson algebras with polynomial coordinates.

Level 1 is the split algebra ``k x k`` with coordinatewise product and the
swap involution; level ``n+1`` is the double of level ``n`` with

    (a, b)(c, d) = (ac - gamma d* b, da + b c*),    (a, b)* = (a*, -b).

Coordinates are :class:`MultiPoly`, so the same code proves identities
symbolically and evaluates numerical witnesses.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .exact_poly import MultiPoly, rational
from .groebner import DEFAULT_MAX_PAIRS, Ideal, TermOrder, buchberger, reduce

__all__ = [
    "PROPERTIES",
    "AlgebraSpec",
    "CDElement",
    "LevelError",
    "Matrix2",
    "PropertyReport",
    "SPLIT",
    "check_property",
    "check_omega",
    "check_sl2_model",
    "check_theta",
    "conjugate",
    "cd_multiply",
    "mu_prime",
    "norm",
    "omega",
    "theta",
    "to_matrix",
    "trace",
]

WITNESS_VALUES = (0, 1, -1, 2, -2)
MAX_CHECK_LEVEL = 4


class LevelError(ValueError):
    """Operands live at incompatible or unsupported levels."""


@dataclass(frozen=True)
class AlgebraSpec:
    """Doubling constants above the split base.

    ``gamma[i]`` is used when doubling level ``i + 1`` to level ``i + 2``;
    levels beyond the given list double with gamma = 1, which is the split
    tower.
    """

    gamma: tuple = ()

    def __post_init__(self):
        gammas = tuple(rational(g) for g in self.gamma)
        if any(g == 0 for g in gammas):
            raise ValueError("doubling constants must be nonzero")
        object.__setattr__(self, "gamma", gammas)

    def gamma_at(self, level):
        """Constant used to build ``level`` from ``level - 1``."""
        i = level - 2
        return self.gamma[i] if 0 <= i < len(self.gamma) else Fraction(1)


SPLIT = AlgebraSpec()


class CDElement:
    """An element of the level-``n`` algebra: ``2**n`` polynomial coordinates."""

    __slots__ = ("level", "coords")

    def __init__(self, coords, level=None):
        coords = tuple(MultiPoly.coerce(c) for c in coords)
        n = len(coords)
        if n < 2 or n & (n - 1):
            raise LevelError(f"coordinate count {n} is not 2**level with level >= 1")
        lvl = n.bit_length() - 1
        if level is not None and level != lvl:
            raise LevelError(f"{n} coordinates do not match level {level}")
        self.level = lvl
        self.coords = coords

    @classmethod
    def symbolic(cls, level, prefix="x"):
        """Generic element with fresh coordinates ``prefix0 .. prefix{2^n-1}``."""
        if level < 1:
            raise LevelError("level 0 is not modelled; the base is the split level-1 algebra")
        names = [f"{prefix}{i}" for i in range(2 ** level)]
        return cls([MultiPoly.var(v, names) for v in names])

    @classmethod
    def unit(cls, level):
        if level < 1:
            raise LevelError("level must be at least 1")
        return cls([1, 1] + [0] * (2 ** level - 2))

    @classmethod
    def zero(cls, level):
        return cls([0] * 2 ** level)

    def halves(self):
        h = len(self.coords) // 2
        return CDElement(self.coords[:h]), CDElement(self.coords[h:])

    @staticmethod
    def join(a, b):
        if a.level != b.level:
            raise LevelError("halves must have equal level")
        return CDElement(a.coords + b.coords)

    def __add__(self, other):
        _check_same_level(self, other)
        return CDElement([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        _check_same_level(self, other)
        return CDElement([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return CDElement([-a for a in self.coords])

    def scale(self, c):
        c = MultiPoly.coerce(c)
        return CDElement([c * a for a in self.coords])

    def __mul__(self, other):
        return cd_multiply(self, other)

    def is_zero(self):
        return all(c.is_zero() for c in self.coords)

    def substitute(self, bindings):
        return CDElement([c.substitute(bindings) for c in self.coords])

    def evaluate(self, values):
        return tuple(c.evaluate(values) for c in self.coords)

    @property
    def variables(self):
        scope = []
        for c in self.coords:
            for v in c.variables:
                if v not in scope:
                    scope.append(v)
        return tuple(scope)

    def __eq__(self, other):
        return isinstance(other, CDElement) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.coords) + "]"

    def __repr__(self):
        return f"CDElement({self})"


def _check_same_level(x, y):
    if x.level != y.level:
        raise LevelError(f"level mismatch: {x.level} vs {y.level}")


def cd_multiply(x, y, spec=SPLIT):
    _check_same_level(x, y)
    if x.level == 1:
        return CDElement([x.coords[0] * y.coords[0], x.coords[1] * y.coords[1]])
    gamma = spec.gamma_at(x.level)
    a, b = x.halves()
    c, d = y.halves()
    ds_b = cd_multiply(conjugate(d), b, spec)
    first = cd_multiply(a, c, spec) - (ds_b if gamma == 1 else ds_b.scale(gamma))
    second = cd_multiply(d, a, spec) + cd_multiply(b, conjugate(c), spec)
    return CDElement.join(first, second)


def conjugate(x):
    if x.level == 1:
        return CDElement([x.coords[1], x.coords[0]])
    a, b = x.halves()
    return CDElement.join(conjugate(a), -b)


def norm(x, spec=SPLIT):
    """Norm form by recursion: ``n(a, b) = n(a) + gamma n(b)``, base ``n(a, b) = ab``."""
    if x.level == 1:
        return x.coords[0] * x.coords[1]
    a, b = x.halves()
    return norm(a, spec) + norm(b, spec) * spec.gamma_at(x.level)


def trace(x):
    """The ``t(x)`` with ``x + x* = 2 t(x) 1``; needs 2 invertible."""
    if x.level == 1:
        return (x.coords[0] + x.coords[1]) * Fraction(1, 2)
    a, _ = x.halves()
    return trace(a)


def theta(t, x, spec=SPLIT):
    """``theta_t(a, b) = (a, t b)`` for ``t`` one level below ``x``."""
    if x.level != t.level + 1:
        raise LevelError(f"theta needs x one level above t (got {t.level} and {x.level})")
    a, b = x.halves()
    return CDElement.join(a, cd_multiply(t, b, spec))


def omega(x):
    """``(a1, a2, b1, b2) -> (a1, b2)`` on the split quaternions."""
    if x.level != 2:
        raise LevelError("omega is defined on level 2")
    a1, _, _, b2 = x.coords
    return (a1, b2)


def mu_prime(u, v):
    """``(a1, a2, b1, b2) * (x, y) = (a1 x - y b1, y a2 + b2 x)``."""
    if u.level != 2:
        raise LevelError("mu_prime takes a level-2 element")
    a1, a2, b1, b2 = u.coords
    xv, yv = (MultiPoly.coerce(c) for c in v)
    return (a1 * xv - yv * b1, yv * a2 + b2 * xv)


@dataclass(frozen=True)
class Matrix2:
    a: MultiPoly
    b: MultiPoly
    c: MultiPoly
    d: MultiPoly

    def __mul__(self, o):
        return Matrix2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __sub__(self, o):
        return Matrix2(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def adjugate(self):
        return Matrix2(self.d, -self.b, -self.c, self.a)

    def is_zero(self):
        return all(e.is_zero() for e in (self.a, self.b, self.c, self.d))

    @classmethod
    def identity(cls):
        one, zero = MultiPoly.constant(1), MultiPoly.zero()
        return cls(one, zero, zero, one)

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def to_matrix(x):
    """``(a1, a2, b1, b2) -> [[a1, b1], [-b2, a2]]``."""
    if x.level != 2:
        raise LevelError("the matrix model is defined on level 2")
    a1, a2, b1, b2 = x.coords
    return Matrix2(a1, b1, -b2, a2)


# -- property checks ---------------------------------------------------------


@dataclass
class PropertyReport:
    property: str
    level: int
    holds: bool
    witness: tuple = None
    details: dict = field(default_factory=dict)

    def as_dict(self):
        out = {"property": self.property, "level": self.level, "holds": self.holds}
        if self.witness is not None:
            out["witness"] = [[str(c) for c in w] for w in self.witness]
        if self.details:
            out["details"] = {
                k: v if isinstance(v, (bool, int)) else str(v) for k, v in self.details.items()
            }
        return out


def _identity_difference(prop, level, spec):
    """Symbolic operands plus a polynomial-valued difference that vanishes iff ``prop`` holds."""
    x = CDElement.symbolic(level, "x")
    y = CDElement.symbolic(level, "y")
    if prop == "normed":
        return (x, y), [norm(cd_multiply(x, y, spec), spec) - norm(x, spec) * norm(y, spec)]
    if prop == "commutative":
        return (x, y), list((cd_multiply(x, y, spec) - cd_multiply(y, x, spec)).coords)
    if prop == "anti_automorphism":
        lhs = conjugate(cd_multiply(x, y, spec))
        rhs = cd_multiply(conjugate(y), conjugate(x), spec)
        return (x, y), list((lhs - rhs).coords)
    if prop == "associative":
        z = CDElement.symbolic(level, "z")
        lhs = cd_multiply(cd_multiply(x, y, spec), z, spec)
        rhs = cd_multiply(x, cd_multiply(y, z, spec), spec)
        return (x, y, z), list((lhs - rhs).coords)
    if prop == "alternative":
        lhs = cd_multiply(x, cd_multiply(x, y, spec), spec)
        rhs = cd_multiply(cd_multiply(x, x, spec), y, spec)
        return (x, y), list((lhs - rhs).coords)
    raise ValueError(f"unknown property {prop!r}")


PROPERTIES = ("normed", "associative", "commutative", "anti_automorphism", "alternative")


def find_witness(difference, operands):
    """Small-integer point where some difference polynomial is nonzero.

    Coordinates outside the first nonzero term's variables are held at 0; the
    remaining ones are scanned over {0, 1, -1, 2, -2} in lexicographic order.
    Every variable occurs with degree at most 2 in these identities, so a
    nonzero polynomial cannot vanish on the whole grid.
    """
    for poly in difference:
        if poly.is_zero():
            continue
        mono, _ = poly.sorted_terms()[0]
        names = [v for v in poly.variables if v in mono.variables]
        all_names = set()
        for op in operands:
            all_names.update(op.variables)
        for values in itertools.product(WITNESS_VALUES, repeat=len(names)):
            point = dict.fromkeys(all_names, 0)
            point.update(zip(names, values))
            if poly.evaluate(point) != 0:
                return tuple(
                    tuple(MultiPoly.constant(c) for c in op.evaluate(point)) for op in operands
                )
    return None


def check_property(spec, level, prop):
    """Decide an algebra identity at ``level`` by exact symbolic expansion."""
    if not 1 <= level <= MAX_CHECK_LEVEL:
        raise LevelError(f"property checks run at levels 1..{MAX_CHECK_LEVEL}")
    operands, diff = _identity_difference(prop, level, spec)
    holds = all(p.is_zero() for p in diff)
    report = PropertyReport(prop, level, holds)
    if not holds:
        witness = find_witness(diff, operands)
        report.witness = witness
        report.details["nonzero_components"] = sum(1 for p in diff if not p.is_zero())
        if witness is not None:
            report.details["witness_check"] = _numeric_failure(prop, witness, spec)
    return report


def _numeric_failure(prop, witness, spec):
    """Re-evaluate the failing identity on the numeric witness (independent of the search)."""
    els = [CDElement(list(w)) for w in witness]
    x, y = els[0], els[1]
    if prop == "normed":
        lhs, rhs = norm(cd_multiply(x, y, spec), spec), norm(x, spec) * norm(y, spec)
        return f"n(xy) = {lhs}, n(x)n(y) = {rhs}"
    if prop == "associative":
        z = els[2]
        lhs = cd_multiply(cd_multiply(x, y, spec), z, spec)
        rhs = cd_multiply(x, cd_multiply(y, z, spec), spec)
        return f"(xy)z = {lhs}, x(yz) = {rhs}"
    if prop == "commutative":
        return f"xy = {cd_multiply(x, y, spec)}, yx = {cd_multiply(y, x, spec)}"
    if prop == "anti_automorphism":
        return f"(xy)* = {conjugate(cd_multiply(x, y, spec))}, y*x* = {cd_multiply(conjugate(y), conjugate(x), spec)}"
    lhs = cd_multiply(x, cd_multiply(x, y, spec), spec)
    return f"x(xy) = {lhs}, (xx)y = {cd_multiply(cd_multiply(x, x, spec), y, spec)}"


def norm_ideal_reducer(t, spec=SPLIT, max_pairs=DEFAULT_MAX_PAIRS):
    """Reduction map modulo the ideal ``(n(t) - 1)``."""
    gb = buchberger(Ideal([norm(t, spec) - 1]), TermOrder("grevlex", t.variables), max_pairs=max_pairs)
    return lambda p: reduce(p, gb)


def check_theta(level, spec=SPLIT, max_pairs=DEFAULT_MAX_PAIRS):
    """``theta_t`` on level ``level`` (t at ``level - 1``) is multiplicative,
    involution- and norm-preserving, modulo ``n(t) - 1``."""
    if not 2 <= level <= MAX_CHECK_LEVEL:
        raise LevelError("theta needs a target level of at least 2")
    t = CDElement.symbolic(level - 1, "t")
    x = CDElement.symbolic(level, "x")
    y = CDElement.symbolic(level, "y")
    red = norm_ideal_reducer(t, spec, max_pairs)
    mult = theta(t, cd_multiply(x, y, spec), spec) - cd_multiply(theta(t, x, spec), theta(t, y, spec), spec)
    raw_nonzero = sum(1 for c in mult.coords if not c.is_zero())
    mult_ok = all(red(c).is_zero() for c in mult.coords)
    inv_ok = (theta(t, conjugate(x), spec) - conjugate(theta(t, x, spec))).is_zero()
    norm_ok = red(norm(theta(t, x, spec), spec) - norm(x, spec)).is_zero()
    holds = mult_ok and inv_ok and norm_ok
    return PropertyReport(
        "theta",
        level,
        holds,
        details={
            "multiplicative_mod_norm": mult_ok,
            "nonzero_before_reduction": raw_nonzero,
            "involution_preserving": inv_ok,
            "norm_preserving_mod_norm": norm_ok,
        },
    )


def check_omega():
    """``omega(u v) = mu'(u, omega(v))`` on split quaternions, plus ``mu'`` unit law."""
    u = CDElement.symbolic(2, "u")
    v = CDElement.symbolic(2, "v")
    lhs = omega(cd_multiply(u, v))
    rhs = mu_prime(u, omega(v))
    square = all((l - r).is_zero() for l, r in zip(lhs, rhs))
    pair = (MultiPoly.var("p"), MultiPoly.var("q"))
    unit_ok = mu_prime(CDElement.unit(2), pair) == pair
    return PropertyReport(
        "omega", 2, square and unit_ok,
        details={"square_commutes": square, "unit_acts_trivially": unit_ok},
    )


def check_sl2_model():
    """Matrix model: multiplicative, det = norm, adjugate = conjugate."""
    x = CDElement.symbolic(2, "x")
    y = CDElement.symbolic(2, "y")
    mult = (to_matrix(cd_multiply(x, y)) - to_matrix(x) * to_matrix(y)).is_zero()
    det = (to_matrix(x).det() - norm(x)).is_zero()
    adj = (to_matrix(conjugate(x)) - to_matrix(x).adjugate()).is_zero()
    unit = (to_matrix(CDElement.unit(2)) - Matrix2.identity()).is_zero()
    return PropertyReport(
        "sl2", 2, mult and det and adj and unit,
        details={
            "multiplicative": mult,
            "det_equals_norm": det,
            "adjugate_equals_conjugate": adj,
            "unit_to_identity": unit,
        },
    )
