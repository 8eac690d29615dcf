"""Polynomial certificates for maps D -> A^2 - 0 and A^1-homotopies between them.

The cone C is (A^1 - 0) x A^1 glued to A^1 x {1}; a polynomial pair
``f(x, t)`` defines a map C -> A^2 - 0 exactly when

    x lies in Rad(f1, f2)          (f avoids the origin away from x = 0)
    (f1, f2) at t = 1 is the unit ideal      (f avoids the origin on the lid)

and a map out of D = C u C is a pair of such pieces agreeing on t = s = 0
after identifying x with y.  A homotopy carries an extra variable u through
both conditions.  Endpoint and gluing comparisons are exact polynomial
equality, never equality modulo an ideal.
"""

import json
from dataclasses import dataclass, field

import jsonschema

from .exact_poly import MultiPoly, ParseError, parse_poly
from .groebner import DEFAULT_MAX_PAIRS, Ideal, is_unit_ideal, radical_membership

__all__ = [
    "CERTIFICATE_SCHEMA",
    "CertificateError",
    "CertificateLibrary",
    "CertificateNotFound",
    "ChainStructureError",
    "Check",
    "DMap",
    "HomotopyCertificate",
    "PieceMap",
    "VerificationReport",
    "builtin_certificates",
    "builtin_chain",
    "check_basepoint",
    "dump_certificates",
    "export_certificates",
    "load_certificates",
    "verify_chain",
    "verify_dmap",
    "verify_homotopy",
    "verify_piece",
]


class CertificateError(ValueError):
    """A certificate document is malformed; ``path`` names the offending field."""

    def __init__(self, msg, path=""):
        super().__init__(f"{path}: {msg}" if path else msg)
        self.path = path


class CertificateNotFound(KeyError):
    pass


class ChainStructureError(ValueError):
    """The chain does not have exactly one homotopy between consecutive maps."""


def _poly(value, scope):
    p = value if isinstance(value, MultiPoly) else parse_poly(str(value), scope)
    return p.with_scope(tuple(scope) + tuple(v for v in p.variables if v not in scope))


def _show_pair(pair):
    return f"({pair[0]}, {pair[1]})"


@dataclass(frozen=True)
class PieceMap:
    """``(main, cone[, homotopy]) -> (f1, f2)``; components may be given as strings."""

    main: str
    cone: str
    components: tuple
    homotopy: str = None

    def __post_init__(self):
        if len(self.components) != 2:
            raise CertificateError("a piece has exactly two components")
        scope = self.variables
        comps = tuple(_poly(c, scope) for c in self.components)
        for c in comps:
            stray = c.free_variables - set(scope)
            if stray:
                raise CertificateError(
                    f"component {c} uses undeclared variables {sorted(stray)}")
        object.__setattr__(self, "components", comps)

    @property
    def variables(self):
        return (self.main, self.cone) + ((self.homotopy,) if self.homotopy else ())

    def substitute(self, bindings):
        return tuple(c.substitute(bindings) for c in self.components)

    def at_homotopy(self, value):
        """The piece with the homotopy variable fixed (unchanged for a constant piece)."""
        if not self.homotopy:
            return self
        return PieceMap(self.main, self.cone, self.substitute({self.homotopy: value}))

    def reversed(self):
        """Run the homotopy backwards: u -> 1 - u."""
        if not self.homotopy:
            return self
        u = MultiPoly.var(self.homotopy)
        return PieceMap(self.main, self.cone, self.substitute({self.homotopy: 1 - u}), self.homotopy)

    def same_map(self, other):
        """Exact equality after renaming ``other``'s variables onto ours."""
        names = {other.main: self.main, other.cone: self.cone}
        if other.homotopy and self.homotopy:
            names[other.homotopy] = self.homotopy
        return all(a == b.rename(names) for a, b in zip(self.components, other.components))

    def __str__(self):
        return f"({', '.join(self.variables)}) -> {_show_pair(self.components)}"


@dataclass(frozen=True)
class DMap:
    """A map out of D: the (x,t) piece and the (y,s) piece."""

    piece_x: PieceMap
    piece_y: PieceMap
    name: str = ""
    basepoint_note: str = None

    @classmethod
    def of(cls, name, x_pair, y_pair, homotopy=None, basepoint_note=None):
        """Build from component pairs with the conventional variables x,t and y,s."""
        return cls(PieceMap("x", "t", tuple(x_pair), homotopy),
                   PieceMap("y", "s", tuple(y_pair), homotopy), name, basepoint_note)

    @property
    def homotopy(self):
        return self.piece_x.homotopy or self.piece_y.homotopy

    def at_homotopy(self, value, name=None):
        return DMap(self.piece_x.at_homotopy(value), self.piece_y.at_homotopy(value),
                    name or f"{self.name}|u={value}")

    def reversed(self):
        return DMap(self.piece_x.reversed(), self.piece_y.reversed(), f"{self.name}^-1")

    def same_map(self, other):
        return self.piece_x.same_map(other.piece_x) and self.piece_y.same_map(other.piece_y)

    def describe(self):
        return f"{_show_pair(self.piece_x.components)} / {_show_pair(self.piece_y.components)}"


@dataclass(frozen=True)
class HomotopyCertificate:
    name: str
    homotopy: DMap
    start: DMap
    end: DMap

    def reversed(self):
        """The same homotopy run backwards, with the endpoints swapped."""
        return HomotopyCertificate(f"{self.name}^-1", self.homotopy.reversed(), self.end, self.start)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def as_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class VerificationReport:
    subject: str
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, name, passed, detail=""):
        self.checks.append(Check(name, bool(passed), detail))

    def extend(self, other, prefix=""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.detail))

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def as_dict(self):
        return {"subject": self.subject, "passed": self.passed,
                "checks": [c.as_dict() for c in self.checks]}


def verify_piece(p, max_pairs=DEFAULT_MAX_PAIRS, label="piece"):
    """Radical condition and unit-ideal condition for one piece."""
    report = VerificationReport(label)
    f1, f2 = p.components
    main = MultiPoly.var(p.main)
    radical = radical_membership(main, Ideal([f1, f2]), max_pairs=max_pairs)
    report.add("radical", radical, f"{p.main} in Rad{_show_pair(p.components)}")
    lid = p.substitute({p.cone: 1})
    unit = is_unit_ideal(Ideal(lid), max_pairs=max_pairs)
    ring = ", ".join(v for v in p.variables if v != p.cone)
    report.add("unit_ideal", unit,
               f"{_show_pair(lid)} at {p.cone}=1 {'=' if unit else '!='} k[{ring}]")
    return report


def verify_dmap(m, max_pairs=DEFAULT_MAX_PAIRS):
    """Both pieces, plus agreement of the pieces on t = s = 0 with y renamed to x."""
    report = VerificationReport(m.name or "map")
    report.extend(verify_piece(m.piece_x, max_pairs), "piece_x.")
    report.extend(verify_piece(m.piece_y, max_pairs), "piece_y.")
    gx = m.piece_x.substitute({m.piece_x.cone: 0})
    rename = {m.piece_y.main: m.piece_x.main}
    if m.piece_y.homotopy and m.piece_x.homotopy:
        rename[m.piece_y.homotopy] = m.piece_x.homotopy
    gy = tuple(c.rename(rename) for c in m.piece_y.substitute({m.piece_y.cone: 0}))
    ok = gx == gy
    report.add("glue", ok, f"{_show_pair(gx)} {'==' if ok else '!='} {_show_pair(gy)}")
    return report


def verify_homotopy(c, max_pairs=DEFAULT_MAX_PAIRS):
    """The homotopy as a map out of D x A^1, and its values at u = 0 and u = 1."""
    report = VerificationReport(c.name)
    report.extend(verify_dmap(c.homotopy, max_pairs), "homotopy.")
    for value, target, label in ((0, c.start, "start"), (1, c.end, "end")):
        got = c.homotopy.at_homotopy(value)
        ok = got.same_map(target)
        report.add(f"endpoint_u{value}", ok,
                   f"{got.describe()} {'matches' if ok else 'differs from'} {label} {target.name}")
    return report


def verify_chain(maps, homotopies, max_pairs=DEFAULT_MAX_PAIRS):
    """Every map, every homotopy, and the homotopy endpoints against consecutive maps."""
    maps, homotopies = list(maps), list(homotopies)
    if len(homotopies) != len(maps) - 1:
        raise ChainStructureError(
            f"a chain of {len(maps)} maps needs {len(maps) - 1} homotopies, got {len(homotopies)}")
    report = VerificationReport(" ~ ".join(m.name for m in maps))
    for m in maps:
        report.extend(verify_dmap(m, max_pairs), f"{m.name}.")
    for i, h in enumerate(homotopies):
        report.extend(verify_homotopy(h, max_pairs), f"{h.name}.")
        for value, m in ((0, maps[i]), (1, maps[i + 1])):
            ok = h.homotopy.at_homotopy(value).same_map(m)
            report.add(f"{h.name}.chain_u{value}", ok,
                       f"{h.name} at u={value} {'is' if ok else 'is not'} {m.name}")
    return report


def check_basepoint(m, point=(1, 1)):
    """Evaluate the (x,t) piece at ``point`` and compare with ``point``."""
    px = m.piece_x
    values = {px.main: point[0], px.cone: point[1]}
    image = tuple(c.evaluate(values) for c in px.components)
    ok = image == tuple(point)
    return Check(f"{m.name}.basepoint", ok,
                 f"{m.name}{tuple(point)} = ({image[0]}, {image[1]})")


# -- the built-in library ---------------------------------------------------

_MAPS = {
    "delta": (("x", "(1-t)*x + t"), ("(1-s)*y + s", "y")),
    "f1": (("x", "x + t"), ("y + s", "y")),
    "f2": (("x", "x + t"), ("y", "y - s")),
    "f3": (("x", "t"), ("y", "-s")),
    "R": (("x", "-1 + 2*t"), ("y", "-1")),
}

_HOMOTOPIES = {
    "H1": ("delta", "f1", ("x", "(1 - t + u*t)*x + t"), ("(1 - s + u*s)*y + s", "y")),
    "H2": ("f1", "f2", ("x", "x + t"), ("y + (1-u)*s", "y - u*s")),
    "H3": ("f2", "f3", ("x", "x + t - u*x"), ("y", "y - s - u*y")),
    "H4": ("f3", "R", ("x", "(1-u)*t + u*(2*t - 1)"), ("y", "(u-1)*s - u")),
}

CHAIN = ("delta", "f1", "f2", "f3", "R")
BASED_MAPS = ("delta", "R")


class CertificateLibrary:
    """Name -> :class:`DMap` or :class:`HomotopyCertificate`."""

    def __init__(self, maps, homotopies):
        self.maps = dict(maps)
        self.homotopies = dict(homotopies)

    def __getitem__(self, name):
        if name in self.maps:
            return self.maps[name]
        if name in self.homotopies:
            return self.homotopies[name]
        raise CertificateNotFound(f"no certificate named {name!r}")

    def __contains__(self, name):
        return name in self.maps or name in self.homotopies

    def names(self):
        return list(self.maps) + list(self.homotopies)


def builtin_certificates():
    maps = {}
    for name, (px, py) in _MAPS.items():
        note = "based at (1,1)" if name in BASED_MAPS else None
        maps[name] = DMap.of(name, px, py, basepoint_note=note)
    homs = {}
    for name, (a, b, px, py) in _HOMOTOPIES.items():
        homs[name] = HomotopyCertificate(name, DMap.of(name, px, py, homotopy="u"), maps[a], maps[b])
    return CertificateLibrary(maps, homs)


def builtin_chain():
    """The maps delta, f1, f2, f3, R and the homotopies H1..H4 between them."""
    lib = builtin_certificates()
    return [lib[n] for n in CHAIN], [lib[f"H{i}"] for i in range(1, 5)]


# -- certificate files ------------------------------------------------------

_PAIR = {"type": "array", "items": {"type": "string", "minLength": 1}, "minItems": 2, "maxItems": 2}
_VARS = {"type": "array", "items": {"type": "string", "pattern": "^[A-Za-z_][A-Za-z0-9_]*$"},
         "minItems": 2, "maxItems": 2}

CERTIFICATE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["maps"],
    "additionalProperties": False,
    "properties": {
        "maps": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["name", "variables", "pieces"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "variables": {
                        "type": "object",
                        "required": ["x", "y"],
                        "additionalProperties": False,
                        "properties": {"x": _VARS, "y": _VARS},
                    },
                    "pieces": {"type": "array", "items": _PAIR, "minItems": 2, "maxItems": 2},
                    "basepoint": {"type": "array", "items": {"type": "integer"},
                                  "minItems": 2, "maxItems": 2},
                },
            },
        },
        "homotopies": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "variables", "pieces", "endpoints"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "variables": {
                        "type": "object",
                        "required": ["x", "y", "homotopy"],
                        "additionalProperties": False,
                        "properties": {"x": _VARS, "y": _VARS,
                                       "homotopy": {"type": "string", "minLength": 1}},
                    },
                    "pieces": {"type": "array", "items": _PAIR, "minItems": 2, "maxItems": 2},
                    "endpoints": {
                        "type": "object",
                        "required": ["start", "end"],
                        "additionalProperties": False,
                        "properties": {"start": {"type": "string"}, "end": {"type": "string"}},
                    },
                },
            },
        },
    },
}


def _path(parts):
    return "/".join(str(p) for p in parts)


def _piece(main_cone, comps, homotopy, path):
    main, cone = main_cone
    try:
        return PieceMap(main, cone, tuple(parse_poly(c) for c in comps), homotopy)
    except ParseError as exc:
        raise CertificateError(f"polynomial syntax error: {exc}", path) from exc
    except CertificateError as exc:
        raise CertificateError(str(exc), path) from exc


def load_certificates(source):
    """Parse a certificate document (dict, JSON text or file path).

    Returns ``(maps, homotopies, basepoints)``; ``basepoints`` maps names to the
    declared basepoint to check.  Schema violations raise
    :class:`CertificateError` with the field path.
    """
    if isinstance(source, dict):
        doc = source
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            try:
                with open(text, encoding="utf-8") as fh:
                    text = fh.read()
            except FileNotFoundError:
                raise CertificateError(f"file not found: {source}") from None
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
    errors = sorted(jsonschema.Draft202012Validator(CERTIFICATE_SCHEMA).iter_errors(doc),
                    key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        raise CertificateError(first.message, _path(first.absolute_path) or "(root)")

    maps, basepoints = {}, {}
    for i, entry in enumerate(doc["maps"]):
        path = f"maps/{i}"
        name = entry["name"]
        if name in maps:
            raise CertificateError(f"duplicate map name {name!r}", f"{path}/name")
        px = _piece(entry["variables"]["x"], entry["pieces"][0], None, f"{path}/pieces/0")
        py = _piece(entry["variables"]["y"], entry["pieces"][1], None, f"{path}/pieces/1")
        maps[name] = DMap(px, py, name)
        if "basepoint" in entry:
            basepoints[name] = tuple(entry["basepoint"])
    homotopies = []
    for i, entry in enumerate(doc.get("homotopies", [])):
        path = f"homotopies/{i}"
        var = entry["variables"]
        px = _piece(var["x"], entry["pieces"][0], var["homotopy"], f"{path}/pieces/0")
        py = _piece(var["y"], entry["pieces"][1], var["homotopy"], f"{path}/pieces/1")
        ends = []
        for key in ("start", "end"):
            ref = entry["endpoints"][key]
            if ref not in maps:
                raise CertificateError(f"unknown map {ref!r}", f"{path}/endpoints/{key}")
            ends.append(maps[ref])
        homotopies.append(HomotopyCertificate(entry["name"], DMap(px, py, entry["name"]), *ends))
    return list(maps.values()), homotopies, basepoints


def _pair_text(piece):
    return [str(c) for c in piece.components]


def export_certificates(maps, homotopies=(), basepoints=None):
    """The document form of ``maps`` and ``homotopies``; inverse of :func:`load_certificates`."""
    basepoints = basepoints or {}
    doc = {"maps": []}
    for m in maps:
        entry = {
            "name": m.name,
            "variables": {"x": [m.piece_x.main, m.piece_x.cone], "y": [m.piece_y.main, m.piece_y.cone]},
            "pieces": [_pair_text(m.piece_x), _pair_text(m.piece_y)],
        }
        if m.name in basepoints:
            entry["basepoint"] = list(basepoints[m.name])
        doc["maps"].append(entry)
    if homotopies:
        doc["homotopies"] = []
        for h in homotopies:
            hm = h.homotopy
            doc["homotopies"].append({
                "name": h.name,
                "variables": {"x": [hm.piece_x.main, hm.piece_x.cone],
                              "y": [hm.piece_y.main, hm.piece_y.cone],
                              "homotopy": hm.homotopy},
                "pieces": [_pair_text(hm.piece_x), _pair_text(hm.piece_y)],
                "endpoints": {"start": h.start.name, "end": h.end.name},
            })
    return doc


def dump_certificates(maps, homotopies=(), basepoints=None):
    return json.dumps(export_certificates(maps, homotopies, basepoints), indent=2) + "\n"
