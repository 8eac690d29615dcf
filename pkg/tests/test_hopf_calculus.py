import itertools
import json
import random

import pytest

from hopfcalc.hopf_calculus import (
    Bidegree,
    Equation,
    FactStore,
    GradedExpression as G,
    PointedSet,
    PreconditionError,
    ReplayError,
    S0,
    SymbolTable,
    commute,
    derive,
    derive_epsilon_nu,
    derive_eta_nu,
    derive_nu_sigma,
    derive_power_map,
    derive_diagonal,
    finite_chi,
    hopf_mu_s0,
    meld_hopf,
    projection_checks,
    ring_spectrum_square,
    smash_class,
    smash_product,
    splitting_is_unique,
    splitting_system,
    tau,
)
from hopfcalc.mw_ring import EPS, ETA, ONE, RHO, DomainError, equals, normalize, power_map_class


# --- tau ------------------------------------------------------------------

@pytest.mark.parametrize(
    "v, w, expected",
    [((1, 0), (1, 0), -ONE), ((1, 1), (1, 1), EPS), ((1, 1), (3, 2), ONE),
     ((3, 2), (7, 4), -ONE), ((3, 2), (3, 2), -ONE), ((1, 1), (-1, -1), EPS),
     ((5, 3), (0, 0), ONE)],
)
def test_tau_examples(v, w, expected):
    assert tau(v, w) == normalize(expected)


def _rand_deg(rng):
    return Bidegree(rng.randint(-10, 10), rng.randint(-10, 10))


def test_tau_bilinear_and_squares_to_one():
    rng = random.Random(0)
    for _ in range(1000):
        u, v, w = _rand_deg(rng), _rand_deg(rng), _rand_deg(rng)
        assert tau(v + w, u) == normalize(tau(v, u) * tau(w, u))
        assert tau(u, v + w) == normalize(tau(u, v) * tau(u, w))
        assert normalize(tau(v, w) * tau(v, w)) == ONE


def test_tau_symmetric():
    rng = random.Random(1)
    for _ in range(200):
        v, w = _rand_deg(rng), _rand_deg(rng)
        assert tau(v, w) == tau(w, v)


# --- commute and smash ----------------------------------------------------

def test_commute_sigma_hbeta():
    tab = SymbolTable()
    tab.declare("Hbeta", (3, 2))
    assert commute(G.word("sigma", "Hbeta"), 0, table=tab) == -G.word("Hbeta", "sigma")


def test_commute_degree_zero_letter_keeps_sign():
    tab = SymbolTable()
    tab.declare("f", (4, 1))
    tab.declare("g", (0, 0))
    assert commute(G.word("f", "g"), 0, table=tab) == G.word("g", "f")


def test_commute_eta_rho_gives_eps():
    out = commute(G.word("eta", "rho"), 0)
    assert out == G.word("rho", "eta", coef=EPS)
    assert str(out) == "eps*rho*eta"


def test_commute_is_an_involution():
    tab = SymbolTable()
    rng = random.Random(2)
    for i in range(30):
        tab.declare(f"a{i}", (rng.randint(-5, 5), rng.randint(-5, 5)))
    for _ in range(100):
        names = [f"a{rng.randrange(30)}" for _ in range(rng.randint(2, 5))]
        expr = G.word(*names, coef=rng.choice([1, -3, EPS]))
        pos = rng.randrange(len(names) - 1)
        once = commute(expr, pos, table=tab)
        assert commute(once, pos, table=tab) == expr


def test_commute_errors():
    with pytest.raises(IndexError):
        commute(G.word("eta", "nu"), 1)
    with pytest.raises(KeyError):
        commute(G.word("eta", "nu"), 0, word=("nu", "eta"))
    with pytest.raises(KeyError):
        commute(G.word("eta", "mystery"), 0)


def test_smash_classes():
    tab = SymbolTable()
    f = tab.declare("f", (3, 2))
    z = tab.declare("z", (0, 0))
    assert smash_class(f, "left", (5, 3)) == G.word("f")
    assert smash_class(z, "right", (5, 3)) == G.word("z")
    # tau((3,2),(1,1)) = 1, tau((3,2),(1,0)) = -1
    assert smash_class(f, "right", (1, 1)) == G.word("f")
    assert smash_class(f, "right", (1, 0)) == -G.word("f")
    g = tab.declare("g", (1, 1))
    assert smash_product(f, g, (1, 0)) == -G.word("f", "g")
    with pytest.raises(ValueError):
        smash_class(f, "middle", (0, 0))


# --- melding --------------------------------------------------------------

def test_meld_eta_nu_instance():
    out = meld_hopf("eta", 1, "eta", 1, "rho", (1, 1), (3, 2), (3, 2), (3, 2), (3, 2))
    assert out == 2 * G.word("eta") + G.word("eta", "eta", "rho")
    assert str(out) == "2*eta + eta^2*rho"
    tab = SymbolTable()
    assert out.evaluate(tab).is_zero()


def test_meld_nu_sigma_instance():
    out = meld_hopf("Hbeta", 1, "Hbeta", 1, 0, (3, 2), (7, 4), (7, 4), (7, 4), (7, 4))
    assert out == -2 * G.word("Hbeta")


def test_meld_all_zero():
    assert meld_hopf(0, 0, 0, 0, 0, (1, 2), (3, 4), (5, 6), (7, 8), (9, 10)).is_zero()


def test_meld_null_first_factor_leaves_middle_term():
    # H(f) = 0 and f* = 1: only tau(X,Y1) tau(Y1-Z1,Z2) [H(g)] survives
    rng = random.Random(3)
    for _ in range(50):
        X, Y1, Y2, Z1, Z2 = (_rand_deg(rng) for _ in range(5))
        out = meld_hopf(0, 1, "Hg", "gs", "D", X, Y1, Y2, Z1, Z2)
        assert out == G.word("Hg").scale(normalize(tau(X, Y1) * tau(Y1 - Z1, Z2)))
    # the S_C instance: tau((1,1),(1,1)) [H(mu)] = eps*eta, which evaluates to eta
    out = meld_hopf(0, 1, "eta", 1, "rho", (1, 1), (1, 1), (1, 1), (1, 1), (1, 1))
    assert str(out) == "eps*eta"
    assert out.evaluate(SymbolTable()) == G.word("eta")


# --- derivations ----------------------------------------------------------

def _after(trace, label):
    return trace[label]


def test_derive_eta_nu():
    facts = FactStore()
    t = derive_eta_nu(facts)
    assert str(_after(t, "m2").rhs) == "2*eta + eta^2*rho"
    assert _after(t, "m3").rhs.is_zero()
    assert str(t.conclusion) == "eta*nu = 0"
    assert "eta*nu = 0" in facts
    assert t.replay()


def test_derive_nu_sigma():
    t = derive_nu_sigma()
    assert str(_after(t, "h3")) == "Hbeta = -nu"
    assert str(_after(t, "m1").rhs) == "-2*Hbeta"
    assert str(_after(t, "c3").rhs) == "2*Hbeta*sigma"
    assert str(_after(t, "d2")) == "Hbeta*sigma = 0"
    assert str(t.conclusion) == "nu*sigma = 0"
    refs = " ".join(s.reference for s in t.steps)
    assert "tau_{(3,2),(7,4)} = -1" in refs
    assert "diagonal of S^{3,2} vanishes" in refs
    assert t.replay()


def test_derive_epsilon_nu_needs_eta_nu():
    with pytest.raises(PreconditionError):
        derive_epsilon_nu(FactStore())
    facts = FactStore()
    derive_eta_nu(facts)
    t = derive_epsilon_nu(facts)
    assert str(_after(t, "e2").rhs) == "-nu - rho*eta*nu"
    assert str(t.conclusion) == "eps*nu = -nu"
    assert t.replay(facts)


def test_derive_dispatch_runs_dependency():
    facts = FactStore()
    traces = derive("epsilon-nu", facts=facts)
    assert [str(t.conclusion) for t in traces] == ["eta*nu = 0", "eps*nu = -nu"]
    assert sorted(facts.names()) == ["eps*nu = -nu", "eta*nu = 0"]
    with pytest.raises(KeyError):
        derive("nope")


def test_replay_detects_tampering():
    t = derive_nu_sigma()
    step = t.step("d3")
    forged = Equation.of(G.word("nu", "sigma"), G.word("nu"))
    t.steps[t.steps.index(step)] = type(step)(step.label, step.rule, step.reference,
                                              step.inputs, step.args, step.before, forged)
    with pytest.raises(ReplayError):
        t.replay()


def test_cancel_only_for_valid_factors():
    t = derive_nu_sigma()
    with pytest.raises(Exception):
        t.add("bad", "cancel", "x = x", inputs=("b1",), n=1)


def test_trace_records_are_strings():
    for rec in derive_eta_nu().as_records():
        assert set(rec) >= {"rule", "reference", "before", "after"}
        assert json.loads(json.dumps(rec)) == rec
        assert all(isinstance(rec[k], str) for k in ("rule", "reference", "before", "after"))


@pytest.mark.parametrize("n", range(7))
def test_ring_square(n):
    t = derive("square", n)[0]
    assert t.replay()
    expected = G.word(*(["rho"] * n)) if n else G.scalar(1)
    assert ring_spectrum_square(n) == expected
    # eps^n rho^n normalizes to rho^n
    assert normalize(EPS ** n * RHO ** n) == RHO ** n


@pytest.mark.parametrize("n", [-5, -1, 0, 1, 2, 3, 8])
def test_power_map_trace(n):
    t = derive_power_map(n)
    assert t.replay()
    rhs = t.conclusion.rhs.evaluate(SymbolTable())
    assert rhs == G.coerce(normalize(power_map_class(n))) or equals(
        power_map_class(n), sum((c for c in rhs.terms.values()), 0 * ONE))


def test_diagonal_trace():
    assert str(derive_diagonal(3, 3).conclusion) == "Delta = rho^3"
    assert derive_diagonal(4, 2).conclusion.rhs.is_zero()
    with pytest.raises(DomainError):
        derive_diagonal(1, 2)


# --- finite splitting -----------------------------------------------------

def test_chi_s0():
    chi = finite_chi(S0, S0)
    assert chi.rows == ((-1, 1), (1, -1), (-1, -1))
    assert chi.cols == ((-1, -1),)
    assert chi.column() == (-1, -1, 1)


def test_chi_with_a_point():
    pt = PointedSet.of_size(0)
    chi = finite_chi(pt, pt)
    assert chi.rows == () and chi.cols == () and chi.matrix == ()
    assert finite_chi(pt, S0).cols == ()


def _brute_force_columns(X, Y):
    A, rhs, prod, smash = splitting_system(X, Y)
    found = {j: [] for j in range(len(smash))}
    targets = {tuple(row[j] for row in rhs): j for j in range(len(smash))}
    for cand in itertools.product(range(-2, 3), repeat=len(prod)):
        image = tuple(sum(a * c for a, c in zip(row, cand)) for row in A)
        if image in targets:
            found[targets[image]].append(cand)
    return found


@pytest.mark.parametrize("X, Y", [(S0, S0), (PointedSet.of_size(2), PointedSet.of_size(2)),
                                  (S0, PointedSet.of_size(2))])
def test_chi_unique_by_brute_force(X, Y):
    chi = finite_chi(X, Y)
    found = _brute_force_columns(X, Y)
    for j, sols in found.items():
        assert sols == [chi.column(j)]


def test_projection_checks_and_hopf_mu():
    assert hopf_mu_s0() == -2
    checks = projection_checks(S0, S0)
    assert checks == {"p": [[1]], "pi1": [[0]], "pi2": [[0]]}
    big = projection_checks(PointedSet.of_size(2), PointedSet.of_size(3))
    assert big["p"] == [[int(i == j) for j in range(6)] for i in range(6)]
    assert all(v == 0 for row in big["pi1"] + big["pi2"] for v in row)


def test_splitting_full_rank_up_to_three_points():
    assert splitting_is_unique(3)
