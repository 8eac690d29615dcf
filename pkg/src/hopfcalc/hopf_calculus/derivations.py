"""Replayable derivations in the graded stable stems.

A derivation is a list of steps.  Each step applies one named rule to
earlier equations (referred to by label) and records the equation it
produced together with a short statement of the result it relies on.
:meth:`DerivationTrace.replay` re-runs every rule from its recorded inputs
and arguments and checks that it reproduces the recorded equation exactly.
"""

import threading
from dataclasses import dataclass, field
from math import comb

from ..mw_ring import EPS, ETA_GEN, RHO_GEN, DomainError, equals, normalize
from .graded import (
    Bidegree,
    GradedExpression,
    SymbolTable,
    commute,
    diagonal_expression,
    meld_hopf,
    smash_class,
)

__all__ = [
    "DerivationError",
    "DerivationTrace",
    "Equation",
    "FactStore",
    "PreconditionError",
    "ReplayError",
    "TraceStep",
    "derive",
    "derive_diagonal",
    "derive_epsilon_nu",
    "derive_eta_nu",
    "derive_nu_sigma",
    "derive_power_map",
    "derive_ring_square",
    "ring_spectrum_square",
]

E = GradedExpression


class DerivationError(ValueError):
    """A rule was applied to inputs that do not have the required shape."""


class PreconditionError(DerivationError):
    """A derivation needs a fact that has not been derived."""


class ReplayError(DerivationError):
    pass


@dataclass(frozen=True)
class Equation:
    lhs: GradedExpression
    rhs: GradedExpression

    @classmethod
    def of(cls, lhs, rhs):
        return cls(E.coerce(lhs), E.coerce(rhs))

    def side(self, which):
        return self.lhs if which == "lhs" else self.rhs

    def map(self, fn, side="both"):
        if side not in ("lhs", "rhs", "both"):
            raise DerivationError(f"unknown side {side!r}")
        lhs = fn(self.lhs) if side in ("lhs", "both") else self.lhs
        rhs = fn(self.rhs) if side in ("rhs", "both") else self.rhs
        return Equation(lhs, rhs)

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


class FactStore:
    """Derived equations by name; reads are concurrent, writes are serialized."""

    def __init__(self):
        self._facts = {}
        self._lock = threading.Lock()

    def add(self, equation, name=None):
        name = name or str(equation)
        with self._lock:
            old = self._facts.get(name)
            if old is not None and old != equation:
                raise DerivationError(f"fact {name!r} already recorded differently")
            self._facts[name] = equation
        return name

    def get(self, name):
        try:
            return self._facts[name]
        except KeyError:
            raise PreconditionError(f"fact {name!r} has not been derived") from None

    def __contains__(self, name):
        return name in self._facts

    def names(self):
        return sorted(self._facts)


# -- rules ------------------------------------------------------------------------
#
# Each rule takes (table, inputs, args, facts) and returns an Equation.


def _single_letter(expr):
    terms = expr.terms
    if len(terms) != 1:
        return None
    (word, c), = terms.items()
    if len(word) != 1 or c != 1:
        return None
    return word[0]


def _rule_premise(table, inputs, args, facts):
    return args["equation"]


def _rule_reflexivity(table, inputs, args, facts):
    x = E.coerce(args["expression"])
    return Equation(x, x)


def _meld_expression(args):
    delta = args.get("delta")
    if delta is None:
        sphere = Bidegree.of(args["delta_sphere"])
        delta = diagonal_expression(sphere.p, sphere.q)
    return meld_hopf(
        args["Hf"], args["f_star"], args["Hg"], args["g_star"], delta,
        args["X"], args["Y1"], args["Y2"], args["Z1"], args["Z2"],
    )


def _rule_meld(table, inputs, args, facts):
    return Equation(E.word(args["symbol"]), _meld_expression(args))


def _rule_evaluate(table, inputs, args, facts):
    return inputs[0].map(lambda x: x.evaluate(table), args.get("side", "both"))


def _rule_substitute(table, inputs, args, facts):
    target, source = inputs
    name = _single_letter(source.lhs)
    if name is None:
        raise DerivationError(f"cannot substitute with {source}: left side is not a single symbol")
    return target.map(lambda x: x.replace_symbol(name, source.rhs), args.get("side", "both"))


def _rule_smash(table, inputs, args, facts):
    f = table[args["symbol"]]
    cls = smash_class(f, args["side"], args["id_bidegree"])
    return inputs[0].map(lambda x: x.replace_symbol(args["placeholder"], cls), args.get("where", "both"))


def _rule_commute(table, inputs, args, facts):
    side = args["side"]
    return inputs[0].map(
        lambda x: commute(x, args["position"], tuple(args["word"]), table), side
    )


def _rule_equate(table, inputs, args, facts):
    a, b = inputs
    if a.lhs != b.lhs:
        raise DerivationError(f"cannot equate: left sides differ ({a.lhs} vs {b.lhs})")
    return Equation(a.rhs, b.rhs)


def _rule_cancel(table, inputs, args, facts):
    """x = n x  implies  x = 0, used only for n in {0, 2} where (n - 1) is a unit."""
    eq = inputs[0]
    n = int(args["n"])
    if n - 1 not in (1, -1):
        raise DerivationError(f"x = {n}x does not force x = 0 in an arbitrary abelian group")
    if eq.rhs != eq.lhs.scale(n):
        raise DerivationError(f"right side of {eq} is not {n} times the left side")
    return Equation(eq.lhs, E.zero())


_UNITS = (1, -1)


def _rule_scale(table, inputs, args, facts):
    factor = normalize(args["factor"])
    if not any(equals(factor, u) or equals(factor, u * EPS) for u in _UNITS):
        raise DerivationError(f"{factor} is not a unit of the form +-1 or +-eps")
    return inputs[0].map(lambda x: x.scale(factor))


def _rule_apply_fact(table, inputs, args, facts):
    fact = facts.get(args["fact"])
    pattern = fact.lhs.terms
    if len(pattern) != 1 or list(pattern.values())[0] != 1:
        raise DerivationError(f"fact {fact} cannot be used as a rewrite rule")
    (word,) = pattern
    return inputs[0].map(lambda x: x.replace_subword(word, fact.rhs), args.get("side", "both"))


def _value_as_words(value):
    out = E()
    names = {ETA_GEN: "eta", RHO_GEN: "rho"}
    for word, c in value.terms.items():
        out = out + E({tuple(names[g] for g in word): c})
    return out


def _rule_expand(table, inputs, args, facts):
    sym = table[args["symbol"]]
    if sym.value is None:
        raise DerivationError(f"{sym.name} has no ring value to expand")
    return inputs[0].map(
        lambda x: x.replace_symbol(sym.name, _value_as_words(sym.value)), args.get("side", "both")
    )


def _rule_power_recursion(table, inputs, args, facts):
    """[P_n] = 1 - eps [P_{n-1}] upward, [P_{n-1}] = eps - eps [P_n] downward."""
    prev = inputs[0].rhs
    eps = E.scalar(EPS)
    new = (E.scalar(1) - eps * prev) if args["direction"] == "up" else (eps - eps * prev)
    return Equation(E.word(args["symbol"]), new)


def _rule_closed_form(table, inputs, args, facts):
    eq = inputs[0]
    n = int(args["n"])
    if n % 2 == 0:
        closed = (n // 2) * (1 - EPS)
    else:
        closed = 1 + ((n - 1) // 2) * (1 - EPS)
    value = E.scalar(closed)
    if eq.rhs != value:
        raise DerivationError(f"recursion gives {eq.rhs}, closed form gives {value}")
    return eq


RULES = {
    "premise": _rule_premise,
    "reflexivity": _rule_reflexivity,
    "meld": _rule_meld,
    "evaluate": _rule_evaluate,
    "substitute": _rule_substitute,
    "smash": _rule_smash,
    "commute": _rule_commute,
    "equate": _rule_equate,
    "cancel": _rule_cancel,
    "scale": _rule_scale,
    "apply_fact": _rule_apply_fact,
    "expand": _rule_expand,
    "power_recursion": _rule_power_recursion,
    "closed_form": _rule_closed_form,
}


@dataclass
class TraceStep:
    label: str
    rule: str
    reference: str
    inputs: tuple
    args: dict
    before: Equation
    after: Equation

    def as_record(self):
        return {
            "label": self.label,
            "rule": self.rule,
            "reference": self.reference,
            "inputs": list(self.inputs),
            "args": {k: _show(v) for k, v in sorted(self.args.items())},
            "before": str(self.before) if self.before is not None else "",
            "after": str(self.after),
        }


def _show(v):
    if isinstance(v, (list, tuple)):
        return "(" + ",".join(_show(x) for x in v) + ")"
    return str(v)


@dataclass
class DerivationTrace:
    name: str
    table: SymbolTable = field(default_factory=SymbolTable)
    steps: list = field(default_factory=list)
    requires: tuple = ()
    conclusion_name: str = None

    def __post_init__(self):
        self._by_label = {}

    def add(self, label, rule, reference, inputs=(), facts=None, **args):
        if not reference:
            raise DerivationError("every step needs a reference")
        if label in self._by_label:
            raise DerivationError(f"duplicate label {label!r}")
        ins = [self[l] for l in inputs]
        after = RULES[rule](self.table, ins, args, facts or FactStore())
        self._check_homogeneous(after, label)
        step = TraceStep(label, rule, reference, tuple(inputs), args, ins[0] if ins else None, after)
        self.steps.append(step)
        self._by_label[label] = after
        return after

    def __getitem__(self, label):
        try:
            return self._by_label[label]
        except KeyError:
            raise DerivationError(f"unknown step label {label!r}") from None

    def step(self, label):
        for s in self.steps:
            if s.label == label:
                return s
        raise DerivationError(f"unknown step label {label!r}")

    def _check_homogeneous(self, eq, label):
        degrees = {self.table.degree(w) for side in (eq.lhs, eq.rhs) for w in side.terms}
        if len(degrees) > 1:
            shown = ", ".join(str(d) for d in sorted(degrees))
            raise DerivationError(f"step {label}: equation {eq} mixes bidegrees {shown}")

    @property
    def conclusion(self):
        return self.steps[-1].after

    def replay(self, facts=None):
        """Re-run every step; raises :class:`ReplayError` at the first mismatch."""
        facts = facts or FactStore()
        seen = {}
        for i, step in enumerate(self.steps):
            try:
                ins = [seen[l] for l in step.inputs]
                after = RULES[step.rule](self.table, ins, step.args, facts)
            except (DerivationError, KeyError) as exc:
                raise ReplayError(f"step {i} ({step.label}, {step.rule}) failed: {exc}") from exc
            if after != step.after:
                raise ReplayError(
                    f"step {i} ({step.label}, {step.rule}) produced {after}, recorded {step.after}"
                )
            if not step.reference:
                raise ReplayError(f"step {i} has no reference")
            seen[step.label] = after
        return True

    def as_records(self):
        return [s.as_record() for s in self.steps]


# -- the scripted derivations -------------------------------------------------

REF_MELD = "Hopf construction of a melding f # g: three-term formula with tau signs"
REF_TAU = "tau_{(a,b),(p,q)} = (-1)^((a-b)(p-q)) eps^(bq)"
REF_RING = "relations of the eta/rho subring: eps = -1 - rho*eta, eta^2*rho + 2*eta = 0"
REF_SMASH_LEFT = "[id ^ f] = [f]"
REF_SMASH_RIGHT = "[f ^ id_{r,s}] = tau_{|f|,(r,s)} [f]"
REF_COMMUTE = "graded commutativity: fg = gf tau_{|f|,|g|}"
REF_DIAGONAL = "diagonal of S^{p,q} is zero for p > q and eps^C(q,2) rho^q for p = q"


def _meld_args(Hf, f_star, Hg, g_star, X, Y, delta_sphere):
    return dict(Hf=Hf, f_star=f_star, Hg=Hg, g_star=g_star, delta_sphere=delta_sphere,
                X=X, Y1=Y, Y2=Y, Z1=Y, Z2=Y)


def derive_eta_nu(facts=None):
    """eta * nu = 0 from the two routes around the multiplicativity square of S_C acting on S_H."""
    t = DerivationTrace("eta-nu")
    tab = t.table
    tab.declare("H(pi2#mu)", (1, 1))
    tab.declare("Halpha", (1, 1))
    tab.declare("H(alpha#alpha)", (1, 1))
    tab.declare("id_smash_nu", (3, 2))
    tab.declare("C", (4, 3))

    t.add("a1", "meld", REF_MELD + "; H(pi2) is null, pi2* = 1 and H(mu) = eta on A^1-0",
          symbol="H(pi2#mu)", **_meld_args(0, 1, "eta", 1, (1, 1), (1, 1), (1, 1)))
    t.add("a2", "premise", "the pairing S_C x S_H -> S_H is the melding pi2 # mu under A^2-0 = (A^1-0)*(A^1-0)",
          equation=Equation.of("Halpha", "H(pi2#mu)"))
    t.add("a3", "substitute", "substitution of the melding value", inputs=("a2", "a1"))
    t.add("a4", "evaluate", "eps * eta = eta", inputs=("a3",), side="rhs")

    t.add("b1", "premise", "lower route: alpha(1 x mu) chi = [H(alpha)] . [1 ^ H(mu)], with H(mu) = nu",
          equation=Equation.of("C", E.word("Halpha", "id_smash_nu")))
    t.add("b2", "smash", REF_SMASH_LEFT, inputs=("b1",),
          placeholder="id_smash_nu", symbol="nu", side="left", id_bidegree=(1, 1))
    t.add("b3", "substitute", "Hopf construction on alpha represents eta", inputs=("b2", "a4"))

    t.add("m1", "meld", REF_MELD + "; tau_{(1,1),(3,2)} = 1, alpha* = 1",
          symbol="H(alpha#alpha)", **_meld_args("Halpha", 1, "Halpha", 1, (1, 1), (3, 2), (1, 1)))
    t.add("m2", "substitute", "Hopf construction on alpha represents eta; diagonal of S^{1,1} is rho",
          inputs=("m1", "a4"))
    t.add("m3", "evaluate", "relation eta^2*rho + 2*eta = 0", inputs=("m2",), side="rhs")

    t.add("c1", "premise", "upper route: the composite equals H(mu) o H(alpha # alpha)",
          equation=Equation.of("C", E.word("nu", "H(alpha#alpha)")))
    t.add("c2", "substitute", "substitution of the melding value", inputs=("c1", "m3"))
    t.add("d1", "equate", "both routes around the commutative square agree", inputs=("b3", "c2"))
    t.conclusion_name = str(t.conclusion)
    if facts is not None:
        facts.add(t.conclusion)
    return t


def derive_nu_sigma(facts=None):
    """nu * sigma = 0 from the analogous square for S_H acting on S_O."""
    t = DerivationTrace("nu-sigma")
    tab = t.table
    tab.declare("H(pi2#mu_H)", (3, 2))
    tab.declare("Hbeta", (3, 2))
    tab.declare("H(beta#beta)", (3, 2))
    tab.declare("C", (10, 6))

    t.add("h1", "meld", REF_MELD + "; H(pi2) is null, pi2* = 1, H(mu) = nu on S_H, tau_{(3,2),(3,2)} = -1",
          symbol="H(pi2#mu_H)", **_meld_args(0, 1, "nu", 1, (3, 2), (3, 2), (3, 2)))
    t.add("h2", "premise", "after splitting S_H, the pairing S_H x S_O -> S_O becomes the melding pi2 # mu",
          equation=Equation.of("Hbeta", "H(pi2#mu_H)"))
    t.add("h3", "substitute", "Hopf construction on beta represents -nu", inputs=("h2", "h1"))

    t.add("b1", "premise", "lower route: the composite equals [H(beta)] . sigma",
          equation=Equation.of("C", E.word("Hbeta", "sigma")))
    t.add("m1", "meld",
          REF_MELD + "; tau_{(3,2),(7,4)} = -1 and the diagonal of S^{3,2} vanishes (simplicial suspension)",
          symbol="H(beta#beta)", **_meld_args("Hbeta", 1, "Hbeta", 1, (3, 2), (7, 4), (3, 2)))
    t.add("c1", "premise", "upper route: the composite equals sigma . [H(beta # beta)]",
          equation=Equation.of("C", E.word("sigma", "H(beta#beta)")))
    t.add("c2", "substitute", "substitution of the melding value", inputs=("c1", "m1"))
    t.add("c3", "commute", REF_COMMUTE + " with tau_{(7,4),(3,2)} = -1", inputs=("c2",),
          side="rhs", word=("sigma", "Hbeta"), position=0)
    t.add("d1", "equate", "both routes around the commutative square agree", inputs=("b1", "c3"))
    t.add("d2", "cancel", "x = 2x implies x = 0 in an abelian group", inputs=("d1",), n=2)
    t.add("d3", "substitute", "Hopf construction on beta represents -nu", inputs=("d2", "h3"))
    t.add("d4", "scale", "multiplication by the unit -1", inputs=("d3",), factor=-1)
    t.conclusion_name = str(t.conclusion)
    if facts is not None:
        facts.add(t.conclusion)
    return t


ETA_NU = "eta*nu = 0"


def derive_epsilon_nu(facts):
    """eps * nu = -nu; needs the fact eta*nu = 0 in ``facts``."""
    if facts is None or ETA_NU not in facts:
        raise PreconditionError("eps*nu = -nu needs the fact eta*nu = 0; run derive_eta_nu first")
    t = DerivationTrace("epsilon-nu", requires=(ETA_NU,))
    t.add("e1", "reflexivity", "start from eps*nu", expression=E.word("eps", "nu"))
    t.add("e2", "expand", "eps = -1 - rho*eta", inputs=("e1",), symbol="eps", side="rhs")
    t.add("e3", "apply_fact", "eta*nu = 0 (derived)", inputs=("e2",), facts=facts,
          fact=ETA_NU, side="rhs")
    t.conclusion_name = str(t.conclusion)
    facts.add(t.conclusion)
    return t


def derive_ring_square(n):
    """x^2 = rho^n x in E^{*,*}(S^{n,n}): the class of f ^ id_{n,n} for f representing rho^n."""
    n = int(n)
    if n < 0:
        raise ValueError("n must be nonnegative")
    t = DerivationTrace(f"square {n}")
    tab = t.table
    tab.declare("f", (-n, -n))
    tab.declare("f_smash_id", (-n, -n))
    tab.declare("X2", (-n, -n))
    t.add("s1", "premise", "comparing x^2 with rho^n x reduces to the class of f ^ id_{n,n}",
          equation=Equation.of("X2", "f_smash_id"))
    t.add("s2", "smash", REF_SMASH_RIGHT + "; here tau = eps^n", inputs=("s1",),
          placeholder="f_smash_id", symbol="f", side="right", id_bidegree=(n, n))
    t.add("s3", "premise", "f represents rho^n",
          equation=Equation.of("f", E.word(*(["rho"] * n)) if n else E.scalar(1)))
    t.add("s4", "substitute", "substitution", inputs=("s2", "s3"))
    t.add("s5", "evaluate", "eps * rho = rho", inputs=("s4",), side="rhs")
    t.conclusion_name = str(t.conclusion)
    return t


def ring_spectrum_square(n):
    """Coefficient of x in x^2 for E^{*,*}(S^{n,n}); always ``rho^n``."""
    return derive_ring_square(n).conclusion.rhs


def derive_power_map(n):
    """[P_n] by recursion from [P_0] = 0, then checked against the closed form."""
    n = int(n)
    t = DerivationTrace(f"power {n}")
    step = 1 if n >= 0 else -1
    for k in range(0, n + step, step):
        t.table.declare(f"P{k}", (0, 0))
    t.add("p0", "premise", "the 0th power map is constant", equation=Equation.of("P0", 0))
    prev = "p0"
    for k in range(step, n + step, step):
        label = f"p{k}"
        direction = "up" if step == 1 else "down"
        ref = "[P_n] = 1 - eps [P_{n-1}]" if step == 1 else "[P_{n-1}] = eps - eps [P_n]"
        t.add(label, "power_recursion", ref, inputs=(prev,), symbol=f"P{k}", direction=direction)
        prev = label
    t.add("closed", "closed_form",
          "[P_n] = (n/2)(1 - eps) for n even, 1 + ((n-1)/2)(1 - eps) for n odd",
          inputs=(prev,), n=n)
    t.conclusion_name = str(t.conclusion)
    return t


def derive_diagonal(p, q):
    p, q = int(p), int(q)
    if q < 0 or p < q:
        raise DomainError(f"diagonal class needs p >= q >= 0 (got p={p}, q={q})")
    t = DerivationTrace(f"diagonal {p} {q}")
    t.table.declare("Delta", (-p, -q))
    if p > q:
        t.add("g1", "premise", "S^{p,q} with p > q is a simplicial suspension, so its diagonal is null",
              equation=Equation.of("Delta", 0))
        t.conclusion_name = str(t.conclusion)
        return t
    e = comb(q, 2)
    rhs = E.word(*(["eps"] * e + ["rho"] * q)) if (e or q) else E.scalar(1)
    t.add("g1", "premise", "[Delta_{q,q}] = eps^C(q,2) rho^q", equation=Equation.of("Delta", rhs))
    t.add("g2", "evaluate", "eps * rho = rho", inputs=("g1",), side="rhs")
    t.conclusion_name = str(t.conclusion)
    return t


def derive(name, *args, facts=None):
    """Dispatch by name; ``epsilon-nu`` first derives its ``eta*nu = 0`` dependency."""
    facts = facts if facts is not None else FactStore()
    if name == "eta-nu":
        return [derive_eta_nu(facts)]
    if name == "nu-sigma":
        return [derive_nu_sigma(facts)]
    if name == "epsilon-nu":
        pre = [] if ETA_NU in facts else [derive_eta_nu(facts)]
        return pre + [derive_epsilon_nu(facts)]
    if name == "power":
        return [derive_power_map(*args)]
    if name == "diagonal":
        return [derive_diagonal(*args)]
    if name == "square":
        return [derive_ring_square(*args)]
    raise KeyError(f"unknown derivation {name!r}")

