"""Buchberger's algorithm and ideal-theoretic decision procedures over Q.

All inputs are :class:`~hopfcalc.exact_poly.MultiPoly`; the arithmetic is
exact, so membership answers are proofs rather than numerical evidence.
"""

import itertools
from dataclasses import dataclass, field

from .exact_poly import Monomial, MultiPoly

__all__ = [
    "DEFAULT_MAX_PAIRS",
    "GroebnerBasis",
    "Ideal",
    "ResourceLimitError",
    "TermOrder",
    "buchberger",
    "ideal_membership",
    "is_unit_ideal",
    "radical_membership",
    "reduce",
    "s_polynomial",
]

DEFAULT_MAX_PAIRS = 10_000

GREVLEX = "grevlex"
LEX = "lex"


class ResourceLimitError(RuntimeError):
    """The Buchberger pair queue exceeded its configured bound."""


@dataclass(frozen=True)
class TermOrder:
    """A monomial order on named variables.

    ``kind`` is ``"grevlex"`` or ``"lex"``; ``variables`` lists names from
    largest to smallest.  Variables outside the list rank below all listed
    ones, in alphabetical order.
    """

    kind: str = GREVLEX
    variables: tuple = ()

    def __post_init__(self):
        if self.kind not in (GREVLEX, LEX):
            raise ValueError(f"unknown term order {self.kind!r}")
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable in term order")
        object.__setattr__(self, "_rank", {v: i for i, v in enumerate(self.variables)})

    def extended(self, names):
        extra = sorted(set(names) - set(self.variables))
        if not extra:
            return self
        return TermOrder(self.kind, self.variables + tuple(extra))

    def key(self, mono):
        rank = self._rank
        exps = [0] * len(rank)
        for v, e in mono.items():
            exps[rank[v]] = e
        if self.kind == LEX:
            return tuple(exps)
        return (mono.degree, tuple(-e for e in reversed(exps)))

    def leading(self, p):
        """Leading ``(monomial, coefficient)`` of a nonzero polynomial."""
        mono = max(p.terms, key=self.key)
        return mono, p.terms[mono]


@dataclass(frozen=True)
class Ideal:
    """An ideal of Q[vars] given by generators; zero generators are dropped."""

    generators: tuple

    def __init__(self, generators):
        gens = tuple(MultiPoly.coerce(g) for g in generators)
        object.__setattr__(self, "generators", tuple(g for g in gens if not g.is_zero()))

    @property
    def is_zero_ideal(self):
        return not self.generators

    @property
    def variables(self):
        scope = []
        for g in self.generators:
            for v in g.variables:
                if v not in scope:
                    scope.append(v)
        return tuple(scope)

    def default_order(self):
        return TermOrder(GREVLEX, self.variables)


@dataclass(frozen=True)
class GroebnerBasis:
    basis: tuple
    order: TermOrder
    pairs_processed: int = field(default=0, compare=False)

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)

    @property
    def is_unit(self):
        return len(self.basis) == 1 and self.basis[0] == 1

    def leading_monomials(self):
        return [self.order.leading(g)[0] for g in self.basis]

    def verify(self):
        """Re-check the Buchberger criterion: every S-polynomial reduces to 0."""
        for f, g in itertools.combinations(self.basis, 2):
            if not _reduce(s_polynomial(f, g, self.order), self.basis, self.order).is_zero():
                return False
        return True


def _monic(p, order):
    _, c = order.leading(p)
    return p if c == 1 else p * (1 / c)


def s_polynomial(f, g, order):
    mf, cf = order.leading(f)
    mg, cg = order.leading(g)
    l = mf.lcm(mg)
    left = MultiPoly._from_clean({l / mf: 1 / cf}) * f
    right = MultiPoly._from_clean({l / mg: 1 / cg}) * g
    return left - right


def _reduce(p, basis, order):
    """Full multivariate division remainder of ``p`` by ``basis``."""
    leads = [order.leading(g) for g in basis]
    remainder = {}
    current = dict(p.terms)
    key = order.key
    while current:
        mono = max(current, key=key)
        c = current[mono]
        for g, (lm, lc) in zip(basis, leads):
            if lm.divides(mono):
                q_mono = mono / lm
                q = c / lc
                for gm, gc in g.terms.items():
                    m = q_mono * gm
                    v = current.get(m, 0) - q * gc
                    if v:
                        current[m] = v
                    else:
                        current.pop(m, None)
                break
        else:
            remainder[mono] = c
            del current[mono]
    return MultiPoly._from_clean(remainder, p.variables)


def _autoreduce(basis, order):
    """Minimal, then fully reduced, monic basis sorted by leading monomial."""
    basis = [_monic(g, order) for g in basis if not g.is_zero()]
    leads = [order.leading(g)[0] for g in basis]
    minimal = []
    for i, g in enumerate(basis):
        lm = leads[i]
        dominated = False
        for j, h in enumerate(basis):
            if j == i:
                continue
            if leads[j].divides(lm) and (leads[j] != lm or j < i):
                dominated = True
                break
        if not dominated:
            minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        reduced.append(_monic(_reduce(g, others, order) if others else g, order))
    reduced.sort(key=lambda g: order.key(order.leading(g)[0]))
    return tuple(reduced)


def buchberger(ideal, order=None, max_pairs=DEFAULT_MAX_PAIRS):
    """Reduced Gröbner basis of ``ideal`` (an :class:`Ideal` or iterable).

    Raises :class:`ResourceLimitError` when more than ``max_pairs`` critical
    pairs would be processed.
    """
    if not isinstance(ideal, Ideal):
        ideal = Ideal(ideal)
    order = (order or ideal.default_order()).extended(ideal.variables)
    if ideal.is_zero_ideal:
        return GroebnerBasis((), order, 0)
    basis = [_monic(g, order) for g in ideal.generators]
    pairs = list(itertools.combinations(range(len(basis)), 2))
    processed = 0
    while pairs:
        processed += 1
        if processed > max_pairs:
            raise ResourceLimitError(
                f"Buchberger pair queue exceeded the bound of {max_pairs} pairs"
            )
        i, j = pairs.pop(0)
        f, g = basis[i], basis[j]
        lf, lg = order.leading(f)[0], order.leading(g)[0]
        if lf.is_coprime(lg):
            continue  # Buchberger's first criterion
        h = _reduce(s_polynomial(f, g, order), basis, order)
        if h.is_zero():
            continue
        h = _monic(h, order)
        if order.leading(h)[0] == Monomial():
            return GroebnerBasis((MultiPoly.constant(1, ideal.variables),), order, processed)
        basis.append(h)
        k = len(basis) - 1
        pairs.extend((m, k) for m in range(k))
    return GroebnerBasis(_autoreduce(basis, order), order, processed)


def reduce(p, gb):
    """Normal form of ``p`` modulo a Gröbner basis."""
    p = MultiPoly.coerce(p)
    if not gb.basis:
        return p
    order = gb.order.extended(p.variables)
    return _reduce(p, gb.basis, order)


def ideal_membership(p, ideal, order=None, max_pairs=DEFAULT_MAX_PAIRS):
    if not isinstance(ideal, Ideal):
        ideal = Ideal(ideal)
    p = MultiPoly.coerce(p)
    if p.is_zero():
        return True
    if ideal.is_zero_ideal:
        return False
    gb = buchberger(ideal, order, max_pairs=max_pairs)
    return reduce(p, gb).is_zero()


def is_unit_ideal(ideal, order=None, max_pairs=DEFAULT_MAX_PAIRS):
    if not isinstance(ideal, Ideal):
        ideal = Ideal(ideal)
    if ideal.is_zero_ideal:
        return False
    return buchberger(ideal, order, max_pairs=max_pairs).is_unit


def _gensym(taken, stem="_w"):
    for i in itertools.count():
        name = f"{stem}{i}"
        if name not in taken:
            return name


def radical_membership(p, ideal, order=None, max_pairs=DEFAULT_MAX_PAIRS):
    """Decide ``p in Rad(ideal)`` with the Rabinowitsch trick.

    A fresh variable ``w`` is adjoined (last in the order) and we test
    whether ``1`` lies in ``ideal + (1 - w*p)``.
    """
    if not isinstance(ideal, Ideal):
        ideal = Ideal(ideal)
    p = MultiPoly.coerce(p)
    if p.is_zero():
        return True
    names = set(ideal.variables) | set(p.variables)
    w = _gensym(names)
    base = order or TermOrder(GREVLEX, ideal.variables)
    base = base.extended(names)
    extended = TermOrder(base.kind, base.variables + (w,))
    aug = Ideal(ideal.generators + (1 - MultiPoly.var(w) * p,))
    return is_unit_ideal(aug, extended, max_pairs=max_pairs)


# convenience used by other modules

def reduce_modulo(p, generators, order=None, max_pairs=DEFAULT_MAX_PAIRS):
    """Normal form of ``p`` modulo the ideal generated by ``generators``."""
    ideal = Ideal(generators)
    gb = buchberger(ideal, order, max_pairs=max_pairs)
    return reduce(p, gb)

