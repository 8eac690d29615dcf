import json
import time

import pytest
from hypothesis import given, settings, strategies as st

from hopfcalc.exact_poly import parse_poly as P
from hopfcalc.groebner import ResourceLimitError
from hopfcalc.homotopy_verifier import (
    CertificateError,
    CertificateNotFound,
    ChainStructureError,
    DMap,
    HomotopyCertificate,
    PieceMap,
    builtin_certificates,
    builtin_chain,
    check_basepoint,
    dump_certificates,
    export_certificates,
    load_certificates,
    verify_chain,
    verify_dmap,
    verify_homotopy,
    verify_piece,
)


def _checks(report):
    return {c.name: c.passed for c in report.checks}


@pytest.mark.parametrize("comps", [("x", "(1-t)*x + t"), ("x", "-1 + 2*t")])
def test_good_pieces(comps):
    r = verify_piece(PieceMap("x", "t", comps))
    assert _checks(r) == {"radical": True, "unit_ideal": True}


def test_bad_piece_fails_unit_ideal():
    r = verify_piece(PieceMap("x", "t", ("x*t", "x^2")))
    assert _checks(r) == {"radical": True, "unit_ideal": False}


def test_piece_missing_radical():
    # (t, t) vanishes along t = 0 for every x
    r = verify_piece(PieceMap("x", "t", ("t", "t + t^2")))
    assert not _checks(r)["radical"]


def test_piece_rejects_undeclared_variable():
    with pytest.raises(CertificateError):
        PieceMap("x", "t", ("x", "z"))


def test_resource_errors_propagate():
    with pytest.raises(ResourceLimitError):
        verify_piece(PieceMap("x", "t", ("x^3 + t^2*x - 1", "x^2*t - t^3 + x")), max_pairs=0)


def test_dmap_glue_values():
    lib = builtin_certificates()
    r = verify_dmap(lib["delta"])
    assert r.passed
    glue = [c for c in r.checks if c.name == "glue"][0]
    assert glue.detail == "(x, x) == (x, x)"
    r = verify_dmap(lib["R"])
    assert r.passed
    assert [c.detail for c in r.checks if c.name == "glue"] == ["(x, -1) == (x, -1)"]


def test_dmap_mismatched_glue():
    r = verify_dmap(DMap.of("m", ("x", "x"), ("y", "-y")))
    assert not _checks(r)["glue"]


def test_homotopy_endpoints():
    lib = builtin_certificates()
    assert lib["H1"].homotopy.at_homotopy(1).describe() == "(x, x + t) / (y + s, y)"
    assert lib["H4"].homotopy.at_homotopy(1).describe() == "(x, 2*t - 1) / (y, -1)"
    for name in ("H1", "H2", "H3", "H4"):
        assert verify_homotopy(lib[name]).passed


def test_swapped_endpoints_fail():
    h = builtin_certificates()["H2"]
    swapped = HomotopyCertificate("H2", h.homotopy, h.end, h.start)
    checks = _checks(verify_homotopy(swapped))
    assert not checks["endpoint_u0"] and not checks["endpoint_u1"]


def test_lookup():
    lib = builtin_certificates()
    assert lib["delta"].piece_x.components == (P("x"), P("(1-t)*x + t"))
    h3 = lib["H3"].homotopy
    assert h3.piece_x.components == (P("x"), P("x + t - u*x"))
    assert h3.piece_y.components == (P("y"), P("y - s - u*y"))
    with pytest.raises(CertificateNotFound):
        lib["H5"]
    assert len(lib.names()) == 9


def test_builtin_chain_passes_quickly():
    maps, homs = builtin_chain()
    start = time.perf_counter()
    r = verify_chain(maps, homs)
    assert r.passed
    assert time.perf_counter() - start < 5
    assert [m.name for m in maps] == ["delta", "f1", "f2", "f3", "R"]


def test_chain_structure_error():
    maps, homs = builtin_chain()
    with pytest.raises(ChainStructureError):
        verify_chain(maps, homs[:2] + homs[3:])


def test_chain_with_f2_f3_swapped():
    maps, homs = builtin_chain()
    maps[2], maps[3] = maps[3], maps[2]
    r = verify_chain(maps, homs)
    failed = {c.name for c in r.failures()}
    assert failed == {"H2.chain_u1", "H3.chain_u0", "H3.chain_u1", "H4.chain_u0"}
    # each map and each homotopy is still fine on its own
    assert not any(".piece_" in n or "endpoint" in n for n in failed)


def test_basepoints():
    lib = builtin_certificates()
    assert check_basepoint(lib["delta"]).passed
    assert check_basepoint(lib["R"]).passed
    assert not check_basepoint(lib["f1"]).passed  # f1(1,1) = (1,2)


def test_constant_homotopy_passes():
    lib = builtin_certificates()
    for name in ("delta", "f1", "f2", "f3", "R"):
        m = lib[name]
        assert verify_homotopy(HomotopyCertificate("const", m, m, m)).passed


def test_reversed_homotopies_pass():
    lib = builtin_certificates()
    for name in ("H1", "H2", "H3", "H4"):
        rev = lib[name].reversed()
        assert rev.start is lib[name].end
        assert verify_homotopy(rev).passed


@settings(max_examples=30, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3).filter(bool))
def test_linear_family_pieces(a, b):
    # (x, a*x + b*t): x in Rad always; unit ideal at t=1 since b != 0
    r = verify_piece(PieceMap("x", "t", ("x", f"{a}*x + {b}*t")))
    assert r.passed


# -- files -------------------------------------------------------------------

def test_export_load_round_trip(tmp_path):
    maps, homs = builtin_chain()
    text = dump_certificates(maps, homs, {"delta": (1, 1), "R": (1, 1)})
    path = tmp_path / "chain.json"
    path.write_text(text)
    maps2, homs2, bases = load_certificates(str(path))
    assert bases == {"delta": (1, 1), "R": (1, 1)}
    assert all(a.same_map(b) for a, b in zip(maps, maps2))
    assert verify_chain(maps2, homs2).passed
    assert dump_certificates(maps2, homs2, bases) == text


def test_tampered_file_fails_at_named_endpoint():
    maps, homs = builtin_chain()
    doc = export_certificates(maps, homs)
    doc["homotopies"][1]["pieces"][1][1] = "y - u*s + u"
    maps2, homs2, _ = load_certificates(doc)
    failed = [c.name for c in verify_chain(maps2, homs2).failures()]
    assert "H2.endpoint_u1" in failed


@pytest.mark.parametrize(
    "mutate, path",
    [
        (lambda d: d["maps"][0].pop("pieces"), "maps/0"),
        (lambda d: d["maps"][1]["pieces"][0].append("x"), "maps/1/pieces/0"),
        (lambda d: d["homotopies"][0]["endpoints"].update(end="nowhere"), "homotopies/0/endpoints/end"),
        (lambda d: d["maps"][2]["pieces"][1].__setitem__(0, "y +"), "maps/2/pieces/1"),
        (lambda d: d["maps"][2]["pieces"][1].__setitem__(0, "y + z"), "maps/2/pieces/1"),
        (lambda d: d.update(extra=1), "(root)"),
    ],
)
def test_schema_errors_name_the_field(mutate, path):
    maps, homs = builtin_chain()
    doc = json.loads(dump_certificates(maps, homs))
    mutate(doc)
    with pytest.raises(CertificateError) as err:
        load_certificates(doc)
    assert err.value.path == path


def test_missing_file():
    with pytest.raises(CertificateError, match="file not found"):
        load_certificates("/nonexistent/missing.json")
