"""Bidegrees, graded symbols and the tau sign calculus.

A :class:`GradedExpression` is an integer-linear combination of words of
named symbols, each term carrying a coefficient in the degree-zero part of the
coefficient ring (integers and multiples of ``eps``).  Words are never
reordered implicitly: swapping two letters is the explicit :func:`commute`,
which inserts the tau factor of their bidegrees.
"""

import itertools
from dataclasses import dataclass

from ..mw_ring import EPS, ETA_GEN, ONE, RHO_GEN, MWElement, diagonal_class, normalize

__all__ = [
    "Bidegree",
    "GradedExpression",
    "GradedSymbol",
    "SymbolTable",
    "commute",
    "diagonal_expression",
    "from_ring",
    "meld_hopf",
    "smash_class",
    "smash_product",
    "tau",
]


@dataclass(frozen=True, order=True)
class Bidegree:
    p: int
    q: int

    @classmethod
    def of(cls, value):
        if isinstance(value, Bidegree):
            return value
        p, q = value
        return cls(int(p), int(q))

    def __add__(self, other):
        other = Bidegree.of(other)
        return Bidegree(self.p + other.p, self.q + other.q)

    def __sub__(self, other):
        other = Bidegree.of(other)
        return Bidegree(self.p - other.p, self.q - other.q)

    def __neg__(self):
        return Bidegree(-self.p, -self.q)

    def __str__(self):
        return f"({self.p},{self.q})"


ZERO_DEG = Bidegree(0, 0)


def tau(v, w):
    """``(-1)^((a-b)(p-q)) * eps^(b*q)`` for ``v = (a,b)``, ``w = (p,q)``; normalized."""
    v, w = Bidegree.of(v), Bidegree.of(w)
    sign = -1 if ((v.p - v.q) * (w.p - w.q)) % 2 else 1
    value = EPS if (v.q * w.q) % 2 else ONE
    return normalize(sign * value)


@dataclass(frozen=True)
class GradedSymbol:
    """A named class with a bidegree; ``value`` is set when it lies in the eta/rho subring."""

    name: str
    bidegree: Bidegree
    value: MWElement = None

    def __post_init__(self):
        object.__setattr__(self, "bidegree", Bidegree.of(self.bidegree))


class SymbolTable:
    """Name -> :class:`GradedSymbol`, seeded with the built-in classes."""

    def __init__(self, symbols=()):
        self._symbols = {}
        for s in BUILTIN_SYMBOLS:
            self._symbols[s.name] = s
        for s in symbols:
            self.add(s)

    def add(self, symbol):
        old = self._symbols.get(symbol.name)
        if old is not None and old != symbol:
            raise ValueError(f"symbol {symbol.name!r} already declared as {old}")
        self._symbols[symbol.name] = symbol
        return symbol

    def declare(self, name, bidegree, value=None):
        return self.add(GradedSymbol(name, Bidegree.of(bidegree), value))

    def __getitem__(self, name):
        try:
            return self._symbols[name]
        except KeyError:
            raise KeyError(f"undeclared symbol {name!r}") from None

    def __contains__(self, name):
        return name in self._symbols

    def degree(self, word):
        total = ZERO_DEG
        for name in word:
            total = total + self[name].bidegree
        return total


BUILTIN_SYMBOLS = (
    GradedSymbol("eta", Bidegree(1, 1), MWElement.letter(ETA_GEN)),
    GradedSymbol("nu", Bidegree(3, 2)),
    GradedSymbol("sigma", Bidegree(7, 4)),
    GradedSymbol("rho", Bidegree(-1, -1), MWElement.letter(RHO_GEN)),
    GradedSymbol("eps", Bidegree(0, 0), EPS),
)

_MW_LETTER = {ETA_GEN: "eta", RHO_GEN: "rho"}


def _degree_zero(c):
    """Normalize a coefficient and check it lies in the span of 1 and eps."""
    c = normalize(c)
    for word in c.terms:
        if word not in ((), (RHO_GEN, ETA_GEN)):
            raise ValueError(f"coefficient {c} is not of bidegree (0,0)")
    return c


class GradedExpression:
    """Sum of ``coefficient * word``; words are tuples of symbol names."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for word, c in (terms or {}).items():
            c = _degree_zero(MWElement.coerce(c))
            if c.is_zero():
                continue
            word = tuple(word)
            total = _degree_zero(clean.get(word, MWElement()) + c)
            if total.is_zero():
                clean.pop(word, None)
            else:
                clean[word] = total
        self._terms = clean

    @classmethod
    def word(cls, *names, coef=1):
        return cls({tuple(names): coef})

    @classmethod
    def scalar(cls, c):
        return cls({(): c})

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def coerce(cls, value):
        if isinstance(value, GradedExpression):
            return value
        if isinstance(value, str):
            return cls.word(value)
        return cls.scalar(value)

    @property
    def terms(self):
        return dict(self._terms)

    def words(self):
        return sorted(self._terms, key=_word_key)

    def is_zero(self):
        return not self._terms

    def __add__(self, other):
        other = GradedExpression.coerce(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out[w] + c if w in out else c
        return GradedExpression(out)

    __radd__ = __add__

    def __neg__(self):
        return GradedExpression({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-GradedExpression.coerce(other))

    def __mul__(self, other):
        other = GradedExpression.coerce(other)
        out = {}
        for (w1, c1), (w2, c2) in itertools.product(self._terms.items(), other._terms.items()):
            w = w1 + w2
            c = c1 * c2
            out[w] = out[w] + c if w in out else c
        return GradedExpression(out)

    def __rmul__(self, other):
        return GradedExpression.coerce(other) * self

    def scale(self, c):
        return GradedExpression({w: MWElement.coerce(c) * k for w, k in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, GradedExpression):
            try:
                other = GradedExpression.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def symbols(self):
        return {name for w in self._terms for name in w}

    def replace_symbol(self, name, replacement):
        """Substitute ``replacement`` for every occurrence of the letter ``name``."""
        replacement = GradedExpression.coerce(replacement)
        out = GradedExpression()
        for word, c in self._terms.items():
            acc = GradedExpression.scalar(c)
            for letter in word:
                acc = acc * (replacement if letter == name else GradedExpression.word(letter))
            out = out + acc
        return out

    def replace_subword(self, pattern, replacement):
        """Replace each occurrence of the contiguous subword ``pattern`` (leftmost first)."""
        pattern = tuple(pattern)
        replacement = GradedExpression.coerce(replacement)
        out = GradedExpression()
        changed = False
        for word, c in self._terms.items():
            i = _find_subword(word, pattern)
            if i < 0:
                out = out + GradedExpression({word: c})
                continue
            changed = True
            head = GradedExpression({word[:i]: c})
            tail = GradedExpression.word(*word[i + len(pattern):])
            out = out + head * replacement * tail
        if changed:
            return out.replace_subword(pattern, replacement)
        return out

    def evaluate(self, table):
        """Collapse words made only of valued symbols into normal-form ring elements."""
        out = GradedExpression()
        for word, c in self._terms.items():
            if not all(table[n].value is not None for n in word):
                out = out + GradedExpression({word: c})
                continue
            value = c
            for n in word:
                value = value * table[n].value
            out = out + from_ring(normalize(value))
        return out

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for i, word in enumerate(self.words()):
            c = self._terms[word]
            body = _format_word(word)
            ctext = str(c)
            compound = " + " in ctext or " - " in ctext
            negative = not compound and ctext.startswith("-")
            if negative:
                ctext = ctext[1:]
            if compound and body != "1":
                ctext = f"({ctext})"
            if body == "1":
                text = ctext
            elif ctext == "1":
                text = body
            else:
                text = f"{ctext}*{body}"
            if i == 0:
                parts.append(f"-{text}" if negative else text)
            else:
                parts.append(f" - {text}" if negative else f" + {text}")
        return "".join(parts)

    def __repr__(self):
        return f"GradedExpression({self})"


def _find_subword(word, pattern):
    n = len(pattern)
    for i in range(len(word) - n + 1):
        if word[i:i + n] == pattern:
            return i
    return -1


def _word_key(word):
    return (len(word), word)


def _format_word(word):
    if not word:
        return "1"
    parts = []
    for name, run in itertools.groupby(word):
        k = len(list(run))
        parts.append(name if k == 1 else f"{name}^{k}")
    return "*".join(parts)


def from_ring(value):
    """A normal-form ring element as a graded expression over ``eta`` and ``rho`` letters."""
    out = GradedExpression()
    for word, c in value.terms.items():
        if word in ((), (RHO_GEN, ETA_GEN)):
            out = out + GradedExpression.scalar(MWElement({word: c}))
        else:
            out = out + GradedExpression({tuple(_MW_LETTER[g] for g in word): c})
    return out


def commute(expr, position, word=None, table=None):
    """Swap letters ``position`` and ``position + 1`` of ``word``, inserting tau.

    ``fg = gf * tau(|f|, |g|)``.  When ``word`` is omitted the expression must
    have exactly one term.
    """
    table = table or SymbolTable()
    expr = GradedExpression.coerce(expr)
    if word is None:
        if len(expr.terms) != 1:
            raise ValueError("commute needs an explicit word when the expression has several terms")
        (word,) = expr.terms
    word = tuple(word)
    if word not in expr.terms:
        raise KeyError(f"word {_format_word(word)} does not occur in {expr}")
    if not 0 <= position < len(word) - 1:
        raise IndexError(f"position {position} does not address an adjacent pair in {_format_word(word)}")
    f, g = word[position], word[position + 1]
    sign = tau(table[f].bidegree, table[g].bidegree)
    swapped = word[:position] + (g, f) + word[position + 2:]
    terms = expr.terms
    c = terms.pop(word)
    return GradedExpression(terms) + GradedExpression({swapped: c * sign})


def smash_class(f, side, id_bidegree):
    """Class of ``id ^ f`` (side ``"left"``) or ``f ^ id`` (side ``"right"``)."""
    if side == "left":
        return GradedExpression.word(f.name)
    if side == "right":
        return GradedExpression.word(f.name).scale(tau(f.bidegree, id_bidegree))
    raise ValueError("side must be 'left' or 'right'")


def smash_product(f, g, g_target):
    """``[f ^ g] = [f][g] tau(|f|, target of g)``."""
    return GradedExpression.word(f.name, g.name).scale(tau(f.bidegree, g_target))


def meld_hopf(Hf, f_star, Hg, g_star, delta_X, X, Y1, Y2, Z1, Z2):
    """Hopf construction of a melding, as a three-term graded expression.

    tau(X+Y1-Z1, Z2) [Hf][g*] + tau(X,Y1) tau(Y1-Z1, Z2) [f*][Hg]
      + tau(X,Y2) tau(X+Y1-Z1, Z2) [Hf][Hg][Delta_X]
    """
    X, Y1, Y2, Z1, Z2 = (Bidegree.of(b) for b in (X, Y1, Y2, Z1, Z2))
    Hf, f_star, Hg, g_star, delta_X = (
        GradedExpression.coerce(e) for e in (Hf, f_star, Hg, g_star, delta_X)
    )
    shift = X + Y1 - Z1
    first = (Hf * g_star).scale(tau(shift, Z2))
    second = (f_star * Hg).scale(normalize(tau(X, Y1) * tau(Y1 - Z1, Z2)))
    third = (Hf * Hg * delta_X).scale(normalize(tau(X, Y2) * tau(shift, Z2)))
    return first + second + third


def diagonal_expression(p, q):
    """The diagonal class on S^{p,q} as a graded expression."""
    return from_ring(diagonal_class(p, q))
