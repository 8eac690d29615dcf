"""The degree-zero coefficient ring generated by eta and the rho_a.

Elements are integer combinations of words in the letters ``eta`` and
``rho[a]`` (a a nonzero rational).  The relations are

    (i)   eta rho_a = rho_a eta
    (ii)  rho_a rho_{1-a} = 0            (a != 0, 1)
    (iii) eta^2 rho + 2 eta = 0          (rho = rho[-1])
    (iv)  rho_{ab} = rho_a + rho_b + eta rho_a rho_b
    (v)   rho_1 = 0

together with ``eps = -1 - rho eta``.  On the subring generated by ``eta`` and
``rho`` the string rewrite system

    er -> re,    ree -> -2 e,    rre -> -2 r

(``r`` = rho, ``e`` = eta) is terminating and confluent, so :func:`normalize`
decides equality there.  The last rule is a consequence of (iv) and (v), see
:func:`rederive_rho_square_rule`.  Outside the subring only the best-effort
:func:`simplify_general` is offered.
"""

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from ._lexer import ParseError, TokenStream

__all__ = [
    "DomainError",
    "EPS",
    "ETA",
    "Gen",
    "MWElement",
    "ONE",
    "OutsideSubringError",
    "ParseError",
    "RHO",
    "ZERO",
    "diagonal_class",
    "equals",
    "normalize",
    "parse_expr",
    "power_map_class",
    "rederive_rho_square_rule",
    "rho",
    "simplify_general",
]

STRATEGIES = ("leftmost", "rightmost")


class OutsideSubringError(ValueError):
    """A word uses a rho subscript other than -1, so equality is not decidable."""


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class Gen:
    """A letter: ``Gen("eta")`` or ``Gen("rho", a)`` with ``a`` a nonzero rational."""

    kind: str
    sub: Fraction = None

    def __post_init__(self):
        if self.kind == "eta":
            if self.sub is not None:
                raise ValueError("eta takes no subscript")
        elif self.kind == "rho":
            sub = Fraction(self.sub)
            if sub == 0:
                raise ValueError("rho subscript must be nonzero")
            object.__setattr__(self, "sub", sub)
        else:
            raise ValueError(f"unknown generator kind {self.kind!r}")

    @property
    def is_eta(self):
        return self.kind == "eta"

    def sort_key(self):
        return (1, 0) if self.is_eta else (0, self.sub)

    def __str__(self):
        if self.is_eta:
            return "eta"
        return "rho" if self.sub == -1 else f"rho[{self.sub}]"


ETA_GEN = Gen("eta")
RHO_GEN = Gen("rho", -1)


class MWElement:
    """Integer combination of words; immutable.  ``==`` is structural, use :func:`equals`."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for word, c in (terms or {}).items():
            word = tuple(word)
            c = int(c)
            if c:
                v = clean.get(word, 0) + c
                if v:
                    clean[word] = v
                else:
                    del clean[word]
        self._terms = clean

    @property
    def terms(self):
        return dict(self._terms)

    @classmethod
    def integer(cls, n):
        return cls({(): n})

    @classmethod
    def letter(cls, gen):
        return cls({(gen,): 1})

    @classmethod
    def coerce(cls, value):
        if isinstance(value, MWElement):
            return value
        if isinstance(value, int):
            return cls.integer(value)
        if isinstance(value, Fraction) and value.denominator == 1:
            return cls.integer(value.numerator)
        if isinstance(value, str):
            return parse_expr(value)
        raise TypeError(f"cannot convert {value!r} to a ring element")

    def is_zero(self):
        return not self._terms

    def __add__(self, other):
        other = MWElement.coerce(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out.get(w, 0) + c
        return MWElement(out)

    __radd__ = __add__

    def __neg__(self):
        return MWElement({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-MWElement.coerce(other))

    def __rsub__(self, other):
        return MWElement.coerce(other) - self

    def __mul__(self, other):
        other = MWElement.coerce(other)
        out = {}
        for (w1, c1), (w2, c2) in itertools.product(self._terms.items(), other._terms.items()):
            w = w1 + w2
            out[w] = out.get(w, 0) + c1 * c2
        return MWElement(out)

    def __rmul__(self, other):
        return MWElement.coerce(other) * self

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = MWElement.coerce(other)
        except (TypeError, ParseError):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def letters(self):
        return {g for w in self._terms for g in w}

    def in_subring(self):
        return all(g.is_eta or g.sub in (-1, 1) for g in self.letters())

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"MWElement({self})"


ZERO = MWElement()
ONE = MWElement.integer(1)
ETA = MWElement.letter(ETA_GEN)
RHO = MWElement.letter(RHO_GEN)
EPS = -1 - RHO * ETA


def rho(a):
    """``rho_a``; ``rho(1)`` is zero by relation (v)."""
    a = Fraction(a)
    if a == 1:
        return ZERO
    return MWElement.letter(Gen("rho", a))


# -- subring normal form -----------------------------------------------------

_RULES = (("er", 1, "re"), ("ree", -2, "e"), ("rre", -2, "r"))


def _find_redex(s, strategy):
    best = None
    for lhs, c, rhs in _RULES:
        i = s.find(lhs) if strategy == "leftmost" else s.rfind(lhs)
        if i < 0:
            continue
        if best is None or (i < best[0] if strategy == "leftmost" else i > best[0]):
            best = (i, lhs, c, rhs)
    return best


def rewrite_word(s, strategy="leftmost"):
    """Rewrite a string over {r, e} to normal form; returns ``(coefficient, word)``."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    coef = 1
    while True:
        redex = _find_redex(s, strategy)
        if redex is None:
            return coef, s
        i, lhs, c, rhs = redex
        s = s[:i] + rhs + s[i + len(lhs):]
        coef *= c


def _word_to_string(word):
    out = []
    for g in word:
        if g.is_eta:
            out.append("e")
        elif g.sub == -1:
            out.append("r")
        elif g.sub == 1:
            return None
        else:
            raise OutsideSubringError(
                f"{g} lies outside the eta/rho subring; use simplify_general"
            )
    return "".join(out)


def _string_to_word(s):
    return tuple(ETA_GEN if ch == "e" else RHO_GEN for ch in s)


def normalize(e, strategy="leftmost"):
    """Normal form on the basis ``rho^i (i>=0)``, ``eta^j (j>=1)`` and ``rho*eta``."""
    e = MWElement.coerce(e)
    out = {}
    for word, c in e._terms.items():
        s = _word_to_string(word)
        if s is None:  # contains rho_1 = 0
            continue
        k, s = rewrite_word(s, strategy)
        w = _string_to_word(s)
        out[w] = out.get(w, 0) + c * k
    return MWElement(out)


def equals(a, b):
    return normalize(MWElement.coerce(a) - MWElement.coerce(b)).is_zero()


# -- general simplifier ------------------------------------------------------


def _int_split(n):
    """Deterministic factor pair ``(a, n/a)`` with ``a`` in {-1} or the smallest prime."""
    if n < 0 and n != -1:
        return -1, -n
    if n >= 2:
        for p in itertools.count(2):
            if p * p > n:
                return None
            if n % p == 0:
                return p, n // p
    return None


def _step_word(word, subring_rules):
    """One rewrite step on a word: ``None`` if irreducible, else ``[(coef, word), ...]``."""
    for g in word:
        if not g.is_eta and g.sub == 1:  # (v)
            return []
    for i in range(len(word) - 1):  # (ii)
        a, b = word[i], word[i + 1]
        if not a.is_eta and not b.is_eta and a.sub + b.sub == 1:
            return []
    for i in range(len(word) - 1):  # (i): move eta to the right
        if word[i].is_eta and not word[i + 1].is_eta:
            return [(1, word[:i] + (word[i + 1], word[i]) + word[i + 2:])]
    if subring_rules:
        n_eta = sum(1 for g in word if g.is_eta)
        if n_eta and RHO_GEN in word:
            # eta is central, so rho eta^2 = -2 eta and rho^2 eta = -2 rho act anywhere
            adjacent = any(word[i] == word[i + 1] == RHO_GEN for i in range(len(word) - 1))
            if n_eta >= 2 or adjacent:
                i = word.index(RHO_GEN)
                reduced = word[:i] + word[i + 1:]
                j = len(reduced) - 1 - reduced[::-1].index(ETA_GEN)
                return [(-2, reduced[:j] + reduced[j + 1:])]
    for i, g in enumerate(word):  # (iv) on integer subscripts
        if g.is_eta or g.sub.denominator != 1:
            continue
        split = _int_split(g.sub.numerator)
        if split is None:
            continue
        a, b = (Gen("rho", x) for x in split)
        pre, post = word[:i], word[i + 1:]
        return [(1, pre + (a,) + post), (1, pre + (b,) + post), (1, pre + (ETA_GEN, a, b) + post)]
    return None


def simplify_general(e, subring_rules=True, max_steps=100_000):
    """Best-effort reduct under relations (i)-(v); not a decision procedure.

    Rule order per word: (v) drop words with rho_1, (ii) kill adjacent
    rho_a rho_{1-a}, (i) move eta right, the two subring rules for rho = rho[-1]
    (unless ``subring_rules`` is false), then (iv) on integer subscripts with
    ``-1`` split off first and then the smallest prime.  Non-integer
    subscripts are never expanded.
    """
    e = MWElement.coerce(e)
    pending = dict(e._terms)
    done = {}
    steps = 0
    while pending:
        word, c = pending.popitem()
        if c == 0:
            continue
        steps += 1
        if steps > max_steps:
            raise RuntimeError("simplify_general exceeded its step budget")
        result = _step_word(word, subring_rules)
        if result is None:
            done[word] = done.get(word, 0) + c
            continue
        for k, w in result:
            pending[w] = pending.get(w, 0) + c * k
    return MWElement(done)


def rederive_rho_square_rule():
    """Re-derive ``rho^2 eta = -2 rho`` from relations (iv) and (v) alone.

    Expands ``rho_1 = rho_{(-1)(-1)}`` with (iv), simplifies with only
    (i), (ii), (v) available, and returns ``(expansion, consequence)`` where the
    expansion equals ``2 rho + rho^2 eta`` (which is 0 because rho_1 = 0) and the
    consequence ``rho^2 eta + 2 rho`` is confirmed to vanish under normalize.
    """
    a = RHO
    expansion = a + a + ETA * a * a  # (iv) with a = b = -1
    expansion = simplify_general(expansion, subring_rules=False)
    expected = 2 * RHO + RHO * RHO * ETA
    if expansion != expected:
        raise AssertionError(f"unexpected expansion {expansion}")
    consequence = RHO * RHO * ETA + 2 * RHO
    return expansion, normalize(consequence)


# -- power maps and diagonals ------------------------------------------------


def power_map_class(n):
    """Class of ``z -> z^n``: recursion from [P_0] = 0, checked against the closed form."""
    n = int(n)
    cls = ZERO
    if n > 0:
        for _ in range(n):
            cls = normalize(1 - EPS * cls)
    else:
        for _ in range(-n):
            cls = normalize(EPS - EPS * cls)
    if n % 2 == 0:
        closed = (n // 2) * (1 - EPS)
    else:
        closed = 1 + ((n - 1) // 2) * (1 - EPS)
    assert equals(cls, closed), f"power map recursion disagrees with closed form at n={n}"
    return cls


def diagonal_class(p, q):
    """Class of the diagonal on S^{p,q}: zero for p > q, eps^C(q,2) rho^q for p = q."""
    if q < 0 or p < q:
        raise DomainError(f"diagonal class needs p >= q >= 0 (got p={p}, q={q})")
    if p > q:
        return ZERO
    return normalize(EPS ** comb(q, 2) * RHO ** q)


# -- parsing and printing ------------------------------------------------------


def parse_expr(text):
    """Parse ``eta``, ``rho``, ``rho[a]``, ``eps``, integers, ``+ - * ^`` and parentheses.

    ``eps`` expands to ``-1 - rho*eta``; ``rho`` means ``rho[-1]`` and
    ``rho[1]`` parses to 0.  The result is not normalized.
    """
    ts = TokenStream(text)
    e = _sum(ts)
    ts.expect_end()
    return e


def _sum(ts):
    if ts.peek.kind == "end":
        raise ParseError("empty expression", ts.peek.pos)
    acc = _product(ts)
    while True:
        if ts.accept("+"):
            acc = acc + _product(ts)
        elif ts.accept("-"):
            acc = acc - _product(ts)
        else:
            return acc


def _product(ts):
    acc = _unary(ts)
    while True:
        tok = ts.peek
        if ts.accept("*"):
            acc = acc * _unary(ts)
        elif tok.kind in ("int", "name") or (tok.kind == "op" and tok.text == "("):
            raise ParseError("juxtaposition is not allowed; use '*'", tok.pos)
        elif tok.kind == "op" and tok.text == "/":
            raise ParseError("division is not supported", tok.pos)
        else:
            return acc


def _unary(ts):
    if ts.accept("-"):
        return -_unary(ts)
    if ts.accept("+"):
        return _unary(ts)
    base = _atom(ts)
    if ts.accept("^"):
        tok = ts.next()
        if tok.kind != "int":
            raise ParseError("exponent must be a nonnegative integer", tok.pos)
        base = base ** int(tok.text)
    return base


def _atom(ts):
    tok = ts.next()
    if tok.kind == "int":
        return MWElement.integer(int(tok.text))
    if tok.kind == "name":
        if tok.text == "eta":
            return ETA
        if tok.text == "eps":
            return EPS
        if tok.text == "rho":
            if ts.accept("["):
                sub = _subscript(ts)
                ts.expect("]")
                return rho(sub)
            return RHO
        raise ParseError(f"unknown identifier {tok.text!r}", tok.pos)
    if tok.kind == "op" and tok.text == "(":
        e = _sum(ts)
        ts.expect(")")
        return e
    raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.pos)


def _subscript(ts):
    start = ts.peek.pos
    sign = -1 if ts.accept("-") else 1
    if sign == 1:
        ts.accept("+")
    tok = ts.next()
    if tok.kind != "int":
        raise ParseError("rho subscript must be a rational number", tok.pos)
    value = Fraction(int(tok.text))
    if ts.accept("/"):
        den = ts.next()
        if den.kind != "int":
            raise ParseError("rho subscript must be a rational number", den.pos)
        if int(den.text) == 0:
            raise ParseError("zero denominator in rho subscript", den.pos)
        value /= int(den.text)
    if value == 0:
        raise ParseError("rho subscript must be nonzero", start)
    return sign * value


def _format_word(word):
    if not word:
        return "1"
    parts = []
    for g, run in itertools.groupby(word):
        k = len(list(run))
        parts.append(str(g) if k == 1 else f"{g}^{k}")
    return "*".join(parts)


def _word_sort_key(word):
    # rho powers (constant first), then eta powers, then everything else
    if all(g == RHO_GEN for g in word):
        return (0, len(word), ())
    if all(g == ETA_GEN for g in word):
        return (1, len(word), ())
    return (3, len(word), tuple(g.sort_key() for g in word))


_EPS_WORD = ("eps",)


def format_element(e):
    """Pretty-print; a ``rho*eta`` term is folded into ``eps`` via rho*eta = -1 - eps."""
    terms = dict(e._terms)
    fold = terms.pop((RHO_GEN, ETA_GEN), 0)
    if fold:
        terms[()] = terms.get((), 0) - fold
        if terms[()] == 0:
            del terms[()]
    items = sorted(terms.items(), key=lambda kv: _word_sort_key(kv[0]))
    if fold:
        idx = sum(1 for w, _ in items if _word_sort_key(w)[0] < 2)
        items.insert(idx, (_EPS_WORD, -fold))
    if not items:
        return "0"
    out = []
    for i, (word, c) in enumerate(items):
        body = "eps" if word is _EPS_WORD else _format_word(word)
        mag = abs(c)
        if body == "1":
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        if i == 0:
            out.append(text if c > 0 else f"-{text}")
        else:
            out.append(f" + {text}" if c > 0 else f" - {text}")
    return "".join(out)


# -- random subring expressions (for confluence checks) ----------------------


def random_subring_element(rng, max_terms=4, max_len=8):
    """Random unnormalized element over eta, rho and eps, for property tests."""
    letters = (ETA, RHO, EPS)
    out = ZERO
    for _ in range(rng.randint(1, max_terms)):
        term = MWElement.integer(rng.choice((-3, -2, -1, 1, 2, 3)))
        for _ in range(rng.randint(0, max_len)):
            term = term * rng.choice(letters)
        out = out + term
    return out


def confluence_check(samples=500, seed=0):
    """Normalize random elements under both strategies; returns the disagreements."""
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        e = random_subring_element(rng)
        left, right = normalize(e, "leftmost"), normalize(e, "rightmost")
        if left != right:
            bad.append((e, left, right))
    return bad
