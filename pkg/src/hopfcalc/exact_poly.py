"""Exact rational arithmetic and sparse multivariate polynomials.

Coefficients are :class:`fractions.Fraction` throughout; nothing here ever
touches floating point.  Variables are identified by name.  A polynomial also
carries an ordered *scope* of variable names, which only affects printing and
serves as the default variable order for Gröbner computations.
"""

from fractions import Fraction
from types import MappingProxyType

from ._lexer import ParseError, TokenStream

__all__ = [
    "Rational",
    "Monomial",
    "MultiPoly",
    "ParseError",
    "parse_poly",
    "poly_add",
    "poly_mul",
    "substitute",
    "rational",
]

Rational = Fraction


def rational(value):
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class Monomial:
    """A power product, stored as sorted ``(name, exponent)`` pairs.

    Zero exponents are never stored, so ``Monomial()`` is the constant
    monomial 1.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, exponents=None):
        if exponents is None:
            items = ()
        else:
            if isinstance(exponents, dict):
                exponents = exponents.items()
            acc = {}
            for name, e in exponents:
                if not isinstance(name, str) or not name:
                    raise ValueError(f"invalid variable name {name!r}")
                if e < 0:
                    raise ValueError(f"negative exponent for {name}")
                if e:
                    acc[name] = acc.get(name, 0) + e
            items = tuple(sorted(acc.items()))
        self._items = items
        self._hash = hash(items)

    @classmethod
    def _raw(cls, items):
        m = cls.__new__(cls)
        m._items = items
        m._hash = hash(items)
        return m

    @property
    def exponents(self):
        return dict(self._items)

    def items(self):
        return self._items

    def exponent(self, name):
        for v, e in self._items:
            if v == name:
                return e
        return 0

    @property
    def degree(self):
        return sum(e for _, e in self._items)

    @property
    def variables(self):
        return tuple(v for v, _ in self._items)

    def __mul__(self, other):
        a, b = self._items, other._items
        if not a:
            return other
        if not b:
            return self
        out = []
        i = j = 0
        while i < len(a) and j < len(b):
            if a[i][0] == b[j][0]:
                out.append((a[i][0], a[i][1] + b[j][1]))
                i += 1
                j += 1
            elif a[i][0] < b[j][0]:
                out.append(a[i])
                i += 1
            else:
                out.append(b[j])
                j += 1
        out.extend(a[i:])
        out.extend(b[j:])
        return Monomial._raw(tuple(out))

    def divides(self, other):
        mine = self._items
        theirs = dict(other._items)
        return all(theirs.get(v, 0) >= e for v, e in mine)

    def __truediv__(self, other):
        """Exact quotient; raises ValueError if ``other`` does not divide."""
        exps = dict(self._items)
        for v, e in other._items:
            r = exps.get(v, 0) - e
            if r < 0:
                raise ValueError(f"{other} does not divide {self}")
            exps[v] = r
        return Monomial(exps)

    def lcm(self, other):
        exps = dict(self._items)
        for v, e in other._items:
            exps[v] = max(exps.get(v, 0), e)
        return Monomial(exps)

    def is_coprime(self, other):
        mine = {v for v, _ in self._items}
        return not any(v in mine for v, _ in other._items)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self._items == other._items

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Monomial({dict(self._items)!r})"

    def format(self, order=None):
        if not self._items:
            return "1"
        items = self._items
        if order is not None:
            rank = {v: i for i, v in enumerate(order)}
            items = sorted(items, key=lambda it: (rank.get(it[0], len(rank)), it[0]))
        return "*".join(v if e == 1 else f"{v}^{e}" for v, e in items)

    def __str__(self):
        return self.format()


ONE_MONOMIAL = Monomial()


def _merge_scope(a, b):
    if not b:
        return a
    if not a:
        return b
    seen = set(a)
    extra = tuple(v for v in b if v not in seen)
    return a + extra if extra else a


class MultiPoly:
    """An immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("_terms", "variables", "_hash")

    def __init__(self, terms=None, variables=()):
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for mono, c in items:
                if not isinstance(mono, Monomial):
                    mono = Monomial(mono)
                c = rational(c)
                if c:
                    c = clean.get(mono, 0) + c
                    if c:
                        clean[mono] = c
                    else:
                        clean.pop(mono, None)
        self._init(clean, tuple(variables))

    def _init(self, terms, variables):
        present = []
        seen = set(variables)
        for mono in terms:
            for v, _ in mono.items():
                if v not in seen:
                    seen.add(v)
                    present.append(v)
        self._terms = terms
        self.variables = variables + tuple(sorted(present))
        self._hash = None

    @classmethod
    def _from_clean(cls, terms, variables=()):
        p = cls.__new__(cls)
        p._init(terms, tuple(variables))
        return p

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, variables=()):
        return cls._from_clean({}, variables)

    @classmethod
    def constant(cls, c, variables=()):
        c = rational(c)
        return cls._from_clean({ONE_MONOMIAL: c} if c else {}, variables)

    @classmethod
    def var(cls, name, variables=None):
        scope = (name,) if variables is None else tuple(variables)
        return cls._from_clean({Monomial(((name, 1),)): Fraction(1)}, scope)

    @classmethod
    def parse(cls, text, variables=()):
        return parse_poly(text, variables)

    @classmethod
    def coerce(cls, value):
        if isinstance(value, MultiPoly):
            return value
        if isinstance(value, str):
            return parse_poly(value)
        return cls.constant(value)

    # -- inspection -------------------------------------------------------

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return not self._terms or (len(self._terms) == 1 and ONE_MONOMIAL in self._terms)

    def constant_value(self):
        """The constant term (0 if absent)."""
        return self._terms.get(ONE_MONOMIAL, Fraction(0))

    def coefficient(self, monomial):
        if not isinstance(monomial, Monomial):
            monomial = Monomial(monomial)
        return self._terms.get(monomial, Fraction(0))

    @property
    def free_variables(self):
        out = set()
        for mono in self._terms:
            out.update(mono.variables)
        return out

    @property
    def total_degree(self):
        return max((m.degree for m in self._terms), default=0 if self._terms else -1)

    def degree_in(self, name):
        return max((m.exponent(name) for m in self._terms), default=0)

    def __len__(self):
        return len(self._terms)

    def with_scope(self, variables):
        return MultiPoly._from_clean(dict(self._terms), tuple(variables))

    # -- arithmetic -------------------------------------------------------

    def _coerce_other(self, other):
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return MultiPoly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return MultiPoly._from_clean(out, _merge_scope(self.variables, other.variables))

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._from_clean({m: -c for m, c in self._terms.items()}, self.variables)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return MultiPoly.zero(self.variables)
            return MultiPoly._from_clean(
                {m: c * other for m, c in self._terms.items()}, self.variables
            )
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return MultiPoly._from_clean(out, _merge_scope(self.variables, other.variables))

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero constant only."""
        if isinstance(other, MultiPoly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("can only divide by a nonzero constant")
            other = other.constant_value()
        other = rational(other)
        if not other:
            raise ZeroDivisionError("division by zero")
        return self * (1 / other)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MultiPoly.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == MultiPoly.constant(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- substitution and evaluation --------------------------------------

    def substitute(self, bindings):
        """Simultaneously replace variables by polynomials (or numbers)."""
        if not bindings:
            return self
        bindings = {k: MultiPoly.coerce(v) for k, v in bindings.items()}
        power_cache = {}

        def power(name, e):
            key = (name, e)
            if key not in power_cache:
                power_cache[key] = bindings[name] ** e
            return power_cache[key]

        scope = tuple(v for v in self.variables if v not in bindings)
        for b in bindings.values():
            scope = _merge_scope(scope, b.variables)
        acc = MultiPoly.zero(scope)
        for mono, c in self._terms.items():
            kept = []
            term = None
            for v, e in mono.items():
                if v in bindings:
                    factor = power(v, e)
                    term = factor if term is None else term * factor
                else:
                    kept.append((v, e))
            base = MultiPoly._from_clean({Monomial._raw(tuple(kept)): c})
            acc = acc + (base if term is None else base * term)
        return acc.with_scope(scope)

    def evaluate(self, values):
        """Evaluate at rational values; every free variable must be bound."""
        missing = self.free_variables - set(values)
        if missing:
            raise KeyError(f"unbound variables: {sorted(missing)}")
        vals = {k: rational(v) for k, v in values.items()}
        total = Fraction(0)
        for mono, c in self._terms.items():
            t = c
            for v, e in mono.items():
                t *= vals[v] ** e
            total += t
        return total

    def rename(self, mapping):
        out = {}
        for mono, c in self._terms.items():
            m = Monomial((mapping.get(v, v), e) for v, e in mono.items())
            out[m] = out.get(m, 0) + c
        out = {m: c for m, c in out.items() if c}
        scope = []
        for v in self.variables:
            w = mapping.get(v, v)
            if w not in scope:
                scope.append(w)
        return MultiPoly._from_clean(out, tuple(scope))

    # -- printing ---------------------------------------------------------

    def sorted_terms(self):
        """Terms in descending graded-reverse-lexicographic order over the scope."""
        order = self.variables
        rank = {v: i for i, v in enumerate(order)}

        def key(item):
            mono = item[0]
            exps = [0] * len(order)
            for v, e in mono.items():
                exps[rank[v]] = e
            return (mono.degree, tuple(-e for e in reversed(exps)))

        return sorted(self._terms.items(), key=key, reverse=True)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            body = mono.format(self.variables)
            if mono is ONE_MONOMIAL or not mono.items():
                text = str(a)
            elif a == 1:
                text = body
            else:
                text = f"{a}*{body}"
            parts.append((sign, text))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self):
        return f"MultiPoly({str(self)!r})"


# -- module-level operations ---------------------------------------------


def poly_add(a, b):
    return MultiPoly.coerce(a) + MultiPoly.coerce(b)


def poly_mul(a, b):
    return MultiPoly.coerce(a) * MultiPoly.coerce(b)


def substitute(p, bindings):
    return MultiPoly.coerce(p).substitute(bindings)


# -- parsing -------------------------------------------------------------


def parse_poly(text, variables=()):
    """Parse polynomial text such as ``(1-t)*x + t`` or ``1/2*x^2 - y``.

    Multiplication must be written with ``*``; juxtaposition is an error.
    Division is allowed only by nonzero constants.
    """
    ts = TokenStream(text)
    p = _parse_sum(ts)
    ts.expect_end()
    return p.with_scope(_merge_scope(tuple(variables), p.variables))


def _parse_sum(ts):
    if ts.peek.kind == "end":
        raise ParseError("empty expression", ts.peek.pos)
    acc = _parse_product(ts)
    while True:
        if ts.accept("+"):
            acc = acc + _parse_product(ts)
        elif ts.accept("-"):
            acc = acc - _parse_product(ts)
        else:
            return acc


def _parse_product(ts):
    acc = _parse_unary(ts)
    while True:
        tok = ts.peek
        if ts.accept("*"):
            acc = acc * _parse_unary(ts)
        elif ts.accept("/"):
            divisor = _parse_unary(ts)
            if not divisor.is_constant() or divisor.is_zero():
                raise ParseError("division only by a nonzero constant", tok.pos)
            acc = acc / divisor
        elif tok.kind in ("int", "name") or (tok.kind == "op" and tok.text == "("):
            raise ParseError("juxtaposition is not allowed; use '*'", tok.pos)
        else:
            return acc


def _parse_unary(ts):
    if ts.accept("-"):
        return -_parse_unary(ts)
    if ts.accept("+"):
        return _parse_unary(ts)
    return _parse_power(ts)


def _parse_power(ts):
    base = _parse_atom(ts)
    if ts.accept("^"):
        tok = ts.next()
        if tok.kind != "int":
            raise ParseError("exponent must be a nonnegative integer", tok.pos)
        base = base ** int(tok.text)
    return base


def _parse_atom(ts):
    tok = ts.next()
    if tok.kind == "int":
        return MultiPoly.constant(int(tok.text))
    if tok.kind == "name":
        return MultiPoly.var(tok.text)
    if tok.kind == "op" and tok.text == "(":
        inner = _parse_sum(ts)
        ts.expect(")")
        return inner
    raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.pos)
