"""Command-line front end: ``hopfcalc <command> [...] [--json]``.

Exit status is 0 when the verdict is ``pass``, 1 for ``fail`` and 2 for
``error`` (including usage errors).
"""

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import cayley_dickson as cd
from .acceptance import run_acceptance
from .groebner import DEFAULT_MAX_PAIRS, ResourceLimitError
from .hopf_calculus import (
    DerivationError,
    FactStore,
    S0,
    derive,
    finite_chi,
    hopf_mu_s0,
    projection_checks,
)
from .homotopy_verifier import (
    BASED_MAPS,
    CertificateError,
    ChainStructureError,
    builtin_chain,
    check_basepoint,
    dump_certificates,
    load_certificates,
    verify_chain,
    verify_dmap,
)
from .mw_ring import DomainError, OutsideSubringError, ParseError, normalize, parse_expr

EXIT_CODES = {"pass": 0, "fail": 1, "error": 2}


@dataclass
class Report:
    command: list
    verdict: str = "pass"
    details: list = field(default_factory=list)
    output: list = field(default_factory=list)
    trace: list = None

    def check(self, name, passed, detail=""):
        self.details.append({"name": name, "passed": bool(passed), "detail": str(detail)})
        if not passed and self.verdict == "pass":
            self.verdict = "fail"

    def error(self, message):
        self.verdict = "error"
        self.output.append(f"error: {message}")

    def as_dict(self):
        return {
            "command": list(self.command),
            "verdict": self.verdict,
            "details": self.details,
            "output": self.output,
            "trace": self.trace,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["command"], d["verdict"], d["details"], d["output"], d["trace"])

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_text(self):
        lines = []
        for rec in self.trace or ():
            lines.append(f"  {rec['label']:>6} [{rec['rule']}] {rec['after']}")
            lines.append(f"         by: {rec['reference']}")
        lines += self.output
        for d in self.details:
            mark = "ok  " if d["passed"] else "FAIL"
            lines.append(f"  {mark} {d['name']}: {d['detail']}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"

    @property
    def exit_code(self):
        return EXIT_CODES[self.verdict]


# -- commands -----------------------------------------------------------------

def cmd_normalize(expr, report):
    try:
        value = normalize(parse_expr(expr))
    except ParseError as exc:
        report.error(f"syntax error: {exc}")
        return report
    except OutsideSubringError as exc:
        report.error(str(exc))
        return report
    report.output.append(str(value))
    return report


def cmd_derive(name, args, report):
    try:
        numbers = [int(a) for a in args]
    except ValueError:
        report.error(f"derivation arguments must be integers, got {args}")
        return report
    arity = {"eta-nu": 0, "nu-sigma": 0, "epsilon-nu": 0, "power": 1, "diagonal": 2, "square": 1}
    if name not in arity:
        report.error(f"unknown derivation {name!r}; choose from {', '.join(arity)}")
        return report
    if len(numbers) != arity[name]:
        report.error(f"{name} takes {arity[name]} integer argument(s)")
        return report
    facts = FactStore()
    try:
        traces = derive(name, *numbers, facts=facts)
    except (DerivationError, DomainError, ValueError) as exc:
        report.error(str(exc))
        return report
    report.trace = []
    for t in traces:
        report.trace.extend(t.as_records())
        try:
            replayed = t.replay(facts)
        except DerivationError as exc:
            report.check(f"{t.name}.replay", False, exc)
            continue
        report.check(f"{t.name}.replay", replayed, "every step re-derived from its inputs")
        report.check(f"{t.name}.references", all(s.reference for s in t.steps),
                     f"{len(t.steps)} steps, each with a reference")
    final = traces[-1].conclusion
    report.output.append(str(final))
    if name in ("power", "diagonal", "square"):
        report.output.append(str(final.rhs))
    return report


SYMBOLIC = ("normed", "associative", "commutative", "anti_automorphism", "alternative")
ALGEBRA_PROPERTIES = SYMBOLIC + ("theta", "omega", "sl2")


def cmd_algebra(level, prop, max_pairs, report):
    try:
        if prop in SYMBOLIC:
            r = cd.check_property(cd.SPLIT, level, prop)
        elif prop == "theta":
            r = cd.check_theta(level, max_pairs=max_pairs)
        else:
            if level != 2:
                raise cd.LevelError(f"{prop} is a statement about level 2")
            r = cd.check_omega() if prop == "omega" else cd.check_sl2_model()
    except cd.LevelError as exc:
        report.error(f"invalid combination: {exc}")
        return report
    except ResourceLimitError as exc:
        report.error(str(exc))
        return report
    report.check(f"{prop}@{level}", r.holds, "holds" if r.holds else "fails")
    for key, value in r.details.items():
        if isinstance(value, bool):
            report.check(key, value, "holds" if value else "fails")
        else:
            report.output.append(f"{key}: {value}")
    if r.witness is not None:
        for name, w in zip("xyz", r.witness):
            report.output.append(f"witness {name} = [{', '.join(str(c) for c in w)}]")
    return report


def cmd_homotopy(builtin, path, max_pairs, export, report):
    try:
        if path:
            maps, homs, bases = load_certificates(path)
        else:
            maps, homs = builtin_chain()
            bases = {n: (1, 1) for n in BASED_MAPS}
        if homs:
            result = verify_chain(maps, homs, max_pairs=max_pairs)
        else:
            result = None
    except (CertificateError, ChainStructureError, ResourceLimitError) as exc:
        report.error(str(exc))
        return report
    if result is None:
        for m in maps:
            for c in verify_dmap(m, max_pairs).checks:
                report.check(f"{m.name}.{c.name}", c.passed, c.detail)
    else:
        for c in result.checks:
            report.check(c.name, c.passed, c.detail)
    by_name = {m.name: m for m in maps}
    for name, point in bases.items():
        c = check_basepoint(by_name[name], point)
        report.check(c.name, c.passed, c.detail)
    report.output.append(f"{len(maps)} maps, {len(homs)} homotopies")
    if export:
        with open(export, "w", encoding="utf-8") as fh:
            fh.write(dump_certificates(maps, homs, bases))
        report.output.append(f"certificates written to {export}")
    return report


def _chi_text(column):
    names = ["i", "j", "k"]  # (-1,*), (*,-1), (-1,-1)
    out = ""
    for c, n in sorted(zip(column, names), key=lambda p: -p[0]):
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else f"{abs(c)}"
        out += f"{sign} {mag}{n} " if out else f"{'-' if c < 0 else ''}{mag}{n} "
    return out.strip()


def cmd_chi_toy(report):
    chi = finite_chi(S0, S0)
    column = chi.column()
    report.output.append(f"chi = {_chi_text(column)}")
    report.output.append(
        "basis: i = (-1,*), j = (*,-1), k = (-1,-1); coefficients " + str(list(column)))
    mu = hopf_mu_s0()
    report.output.append(f"H(mu) = {mu}")
    checks = projection_checks(S0, S0)
    report.check("p chi = id", checks["p"] == [[1]], checks["p"])
    report.check("pi1 chi = 0", checks["pi1"] == [[0]], checks["pi1"])
    report.check("pi2 chi = 0", checks["pi2"] == [[0]], checks["pi2"])
    report.check("H(mu) = -2", mu == -2, mu)
    return report


def cmd_verify_all(seed, max_pairs, report):
    results = run_acceptance(seed=seed, max_pairs=max_pairs)
    width = max(len(r.title) for r in results)
    report.output.append(f"{'#':>2}  {'criterion':<{width}}  result")
    for r in results:
        report.output.append(f"{r.number:>2}  {r.title:<{width}}  {'PASS' if r.passed else 'FAIL'}")
        report.check(f"{r.number}. {r.title}", r.passed, r.detail)
    return report


# -- argument parsing -----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CODES["error"], f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="hopfcalc", description="Exact checks for motivic Hopf-element relations.")
    parser.add_argument("--json", action="store_true", dest="json_global", help="machine-readable report")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    bounded = argparse.ArgumentParser(add_help=False)
    bounded.add_argument("--max-pairs", type=int, default=DEFAULT_MAX_PAIRS,
                         help="bound on Buchberger critical pairs")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("normalize", parents=[common], help="normal form in the eta/rho ring")
    p.add_argument("expr")

    p = sub.add_parser("derive", parents=[common], help="run a scripted derivation")
    p.add_argument("name", help="eta-nu | nu-sigma | epsilon-nu | power N | diagonal P Q | square N")
    p.add_argument("args", nargs="*")

    p = sub.add_parser("algebra", parents=[common, bounded], help="split Cayley-Dickson properties")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--property", required=True, choices=ALGEBRA_PROPERTIES)

    p = sub.add_parser("homotopy", parents=[common, bounded], help="verify homotopy certificates")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", choices=["delta-R"])
    src.add_argument("path", nargs="?")
    p.add_argument("--export", metavar="FILE", help="write the certificates as JSON")

    sub.add_parser("chi-toy", parents=[common], help="stable splitting of S0 x S0")

    p = sub.add_parser("verify-all", parents=[common, bounded], help="run the acceptance suite")
    p.add_argument("--seed", type=int, default=0, help="seed for the sampled checks")
    return parser


def run(argv):
    args = build_parser().parse_args(argv)
    report = Report(list(argv))
    if args.command == "normalize":
        cmd_normalize(args.expr, report)
    elif args.command == "derive":
        cmd_derive(args.name, args.args, report)
    elif args.command == "algebra":
        cmd_algebra(args.level, args.property, args.max_pairs, report)
    elif args.command == "homotopy":
        cmd_homotopy(args.builtin, args.path, args.max_pairs, args.export, report)
    elif args.command == "chi-toy":
        cmd_chi_toy(report)
    else:
        cmd_verify_all(args.seed, args.max_pairs, report)
    return report, args.json or args.json_global


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    report, as_json = run(argv)
    sys.stdout.write(report.to_json() if as_json else report.to_text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
