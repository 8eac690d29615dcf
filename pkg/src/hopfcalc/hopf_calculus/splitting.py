"""Stable splitting of X x Y for finite pointed sets.

Stably a finite pointed set is the free abelian group on its non-base points
and a pointed map becomes its 0/1 incidence matrix.  The splitting chi is the
unique integer matrix X ^ Y -> X x Y with

    p chi = id,    pi_1 chi = 0,    pi_2 chi = 0,

found here by exact linear algebra over the rationals.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "ChiResult",
    "PointedSet",
    "S0",
    "finite_chi",
    "hopf_construction",
    "hopf_mu_s0",
    "incidence",
    "product_basis",
    "projection_checks",
    "rank",
    "smash_basis",
    "SplittingError",
    "splitting_system",
    "splitting_is_unique",
]


class SplittingError(RuntimeError):
    """The defining system for chi is singular or has a non-integral solution."""


@dataclass(frozen=True)
class PointedSet:
    points: tuple
    base: object

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if self.base not in self.points:
            raise ValueError("basepoint must be one of the points")
        if len(set(self.points)) != len(self.points):
            raise ValueError("points must be distinct")

    @classmethod
    def of_size(cls, n):
        """``{0, 1, ..., n}`` based at 0 (n non-base points)."""
        return cls(tuple(range(n + 1)), 0)

    @property
    def nonbase(self):
        return tuple(x for x in self.points if x != self.base)


S0 = PointedSet((1, -1), 1)


def product_basis(X, Y):
    """Non-base points of X x Y: (x,*) first, then (*,y), then (x,y)."""
    return (
        [(x, Y.base) for x in X.nonbase]
        + [(X.base, y) for y in Y.nonbase]
        + [(x, y) for x in X.nonbase for y in Y.nonbase]
    )


def smash_basis(X, Y):
    return [(x, y) for x in X.nonbase for y in Y.nonbase]


def incidence(fn, source, target, target_base):
    """0/1 matrix of a pointed map: rows ``target``, columns ``source``."""
    rows = {t: i for i, t in enumerate(target)}
    m = [[0] * len(source) for _ in target]
    for j, s in enumerate(source):
        image = fn(s)
        if image != target_base:
            m[rows[image]][j] = 1
    return m


def splitting_system(X, Y):
    """The stacked matrix [p; pi_1; pi_2] on the product basis and the right-hand side."""
    prod = product_basis(X, Y)
    smash = smash_basis(X, Y)
    smash_base = ("*", "*")

    def p(pt):
        x, y = pt
        return smash_base if x == X.base or y == Y.base else pt

    P = incidence(p, prod, smash, smash_base)
    P1 = incidence(lambda pt: pt[0], prod, X.nonbase, X.base)
    P2 = incidence(lambda pt: pt[1], prod, Y.nonbase, Y.base)
    A = P + P1 + P2
    k = len(smash)
    rhs = [[int(i == j) for j in range(k)] for i in range(k)]
    rhs += [[0] * k for _ in range(len(P1) + len(P2))]
    return A, rhs, prod, smash


def _solve(A, B):
    """Exact solution of the square system A X = B, or ``None`` if A is singular."""
    n = len(A)
    cols = len(B[0]) if B else 0
    M = [[Fraction(v) for v in A[i]] + [Fraction(v) for v in B[i]] for i in range(n)]
    for c in range(n):
        pivot = next((r for r in range(c, n) if M[r][c] != 0), None)
        if pivot is None:
            return None
        M[c], M[pivot] = M[pivot], M[c]
        inv = 1 / M[c][c]
        M[c] = [v * inv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:n + cols] for row in M]


def rank(A):
    M = [[Fraction(v) for v in row] for row in A]
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    return r


@dataclass(frozen=True)
class ChiResult:
    rows: tuple  # product basis
    cols: tuple  # smash basis
    matrix: tuple  # integer entries, rows x cols

    def column(self, j=0):
        return tuple(row[j] for row in self.matrix)


def finite_chi(X, Y):
    A, B, prod, smash = splitting_system(X, Y)
    if not prod:
        return ChiResult((), (), ())
    if not smash:
        if rank(A) != len(A):
            raise SplittingError("defining system for chi is singular")
        return ChiResult(tuple(prod), (), tuple(() for _ in prod))
    sol = _solve(A, B)
    if sol is None:
        raise SplittingError("defining system for chi is singular")
    if any(v.denominator != 1 for row in sol for v in row):
        raise SplittingError("chi has non-integral entries")
    matrix = tuple(tuple(int(v) for v in row) for row in sol)
    return ChiResult(tuple(prod), tuple(smash), matrix)


def splitting_is_unique(max_points=3):
    """Full rank of the defining system for all sizes up to ``max_points`` non-base points."""
    for m, n in itertools.product(range(max_points + 1), repeat=2):
        A, _, _, _ = splitting_system(PointedSet.of_size(m), PointedSet.of_size(n))
        if A and rank(A) != len(A):
            return False
    return True


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def hopf_construction(pairing, X, Y, Z):
    """Incidence matrix of ``pairing: X x Y -> Z`` composed with chi (rows Z, cols X ^ Y)."""
    chi = finite_chi(X, Y)
    mu = incidence(pairing, list(chi.rows), Z.nonbase, Z.base)
    return _matmul(mu, [list(r) for r in chi.matrix])


def _z2_product(pt):
    x, y = pt
    return x * y


def hopf_mu_s0():
    """Hopf construction on the group law of S^0 = Z/2 = {1, -1}; the 1x1 entry."""
    ((value,),) = hopf_construction(_z2_product, S0, S0, S0)
    return value


def projection_checks(X, Y):
    """``p chi``, ``pi_1 chi`` and ``pi_2 chi`` as integer matrices."""
    A, _, prod, smash = splitting_system(X, Y)
    chi = [list(r) for r in finite_chi(X, Y).matrix]
    k, m = len(smash), len(X.nonbase)
    return {
        "p": _matmul(A[:k], chi),
        "pi1": _matmul(A[k:k + m], chi),
        "pi2": _matmul(A[k + m:], chi),
    }
