import json
import re

import pytest

from toric_ccc.bundles import TDivisor
from toric_ccc.cli import run
from toric_ccc.errors import IncompatibleFigureError, ParseError, UnknownFanError
from toric_ccc.fanio import SHIPPED, load_fan, parse_fan_spec, serialize_fan, shipped_fan_text
from toric_ccc.fans import LIBRARY_NAMES, library_fan
from toric_ccc.figures import FigureSpec, render_svg, tdual_graph_p1
from toric_ccc.lg import tropicalize


# --- fan documents ------------------------------------------------------------------

@pytest.mark.parametrize("name", LIBRARY_NAMES)
def test_library_fans_round_trip(name):
    fan = library_fan(name)
    text = serialize_fan(fan, name=name)
    doc = parse_fan_spec(text)
    assert doc.fan.rays == fan.rays and doc.fan.max_cones == fan.max_cones
    assert serialize_fan(doc.fan, name=doc.name) == text


@pytest.mark.parametrize("name", sorted(SHIPPED))
def test_shipped_documents_are_stable(name):
    doc = parse_fan_spec(shipped_fan_text(name))
    assert not doc.warnings
    again = parse_fan_spec(serialize_fan(doc.fan, doc.divisors, doc.name))
    assert again.fan.rays == doc.fan.rays and again.fan.max_cones == doc.fan.max_cones


def test_divisors_survive_the_round_trip():
    text = json.dumps({"rank": 1, "rays": [[1], [-1]], "max_cones": [[0], [1]],
                       "divisors": [[0, 3], ["4/2", 1]]})
    doc = parse_fan_spec(text)
    assert parse_fan_spec(serialize_fan(doc.fan, doc.divisors)).divisors == doc.divisors
    with pytest.raises(ParseError) as info:
        parse_fan_spec(text.replace("4/2", "1/2"))
    assert info.value.field == "divisors[1][0]"


@pytest.mark.parametrize("doc,field", [
    ({"rank": 2, "rays": [[1, 0], [0, 1]]}, "max_cones"),
    ({"rank": 2, "max_cones": []}, "rays"),
    ({"rank": 2, "rays": [[1, 0], [0]], "max_cones": [[0]]}, "rays[1]"),
    ({"rank": 2, "rays": [[1, 0], [0, 0]], "max_cones": [[0]]}, "rays[1]"),
    ({"rank": 2, "rays": [[1, "x"]], "max_cones": [[0]]}, "rays[0][1]"),
])
def test_parse_errors_name_the_field(doc, field):
    with pytest.raises(ParseError) as info:
        parse_fan_spec(json.dumps(doc))
    assert info.value.field == field


def test_json_syntax_errors_carry_a_position():
    with pytest.raises(ParseError, match=r"line 2, column \d+"):
        parse_fan_spec('{"rank": 1,\n "rays": [[1] [-1]]}')


def test_non_primitive_rays_are_rescaled_with_a_warning():
    doc = parse_fan_spec(json.dumps({"rank": 2, "rays": [[2, 0], [0, 1]], "max_cones": [[0, 1]]}))
    assert doc.fan.rays[0] == (1, 0)
    assert len(doc.warnings) == 1 and "rays[0]" in doc.warnings[0]


def test_example_paths_fall_back_to_shipped_documents():
    assert load_fan("examples/F1.json").fan.rays == library_fan("F1").rays
    with pytest.raises(UnknownFanError):
        load_fan("nowhere/Q7.json")


# --- subcommands --------------------------------------------------------------------

def test_fan_check_on_the_third_hirzebruch_surface():
    status, text = run(["fan-check", "examples/F3.json"])
    assert status == 0
    assert "smooth\ttrue" in text and "complete\ttrue" in text
    assert "anticanonical_nef\tfalse" in text
    assert "self_intersection\tD4\t-3" in text


def test_bundle_report():
    status, text = run(["bundle", "--fan", "P2", "--d", "0,0,2"])
    assert status == 0
    assert "lattice_points\t6" in text and "total\t6,0,0" in text and "euler\t6" in text


def test_ccc_verify_passes_and_counts_inclusions():
    status, text = run(["ccc-verify", "--fan", "P1", "--da", "0,1", "--db", "0,3"])
    assert status == 0
    assert text.rstrip().splitlines()[-1] == "total\t3,0\t3,0\tPASS"


def test_corrupted_polytope_is_reported():
    status, text = run(["ccc-verify", "--fan", "P1", "--da", "0,1", "--db", "0,3", "--corrupt-polytope"])
    assert status == 1
    assert "MISMATCH" in text and text.rstrip().endswith("FAIL")


def test_morelli_subcommand():
    status, text = run(["morelli", "--fan", "P2", "--term=1:0,0,2", "--term=-1:0,0,1"])
    assert status == 0
    assert "euler_integral\t3" in text and "coherent_euler\t3" in text
    assert "germs_certified\ttrue" in text


def test_cc_pairing_subcommand():
    status, text = run(["cc-pairing", "--fan", "P1", "--da", "0,1", "--db", "0,3"])
    assert status == 0 and "pairing\t3" in text and text.rstrip().endswith("PASS")
    status, text = run(["cc-pairing", "--fan", "P1", "--da", "0,1", "--db", "0,3", "--weight-zero"])
    assert status == 0 and "pairing\t1" in text


def test_lg_subcommands():
    status, text = run(["lg", "critical-points", "--m", "1"])
    assert status == 0 and text.startswith("count\t4")
    assert len([l for l in text.splitlines() if l.startswith("point")]) == 4
    status, text = run(["lg", "tropical", "--m", "3", "--t", "1,1,0,0"])
    assert status == 0
    assert "bounded_components\t2" in text and "balanced\ttrue" in text


@pytest.mark.parametrize("argv,code", [
    (["bundle", "--fan", "P2", "--d", "0,0"], 3),
    (["fan-check", "Q9"], 4),
    (["ccc-verify", "--fan", "P1", "--da", "0,0", "--db", "0,1"], 6),
    (["lg", "critical-points", "--m", "1", "--t", "1,1"], 3),
    (["plot", "polytope", "--fan", "P2"], 11),
    (["no-such-command"], 2),
])
def test_exit_codes(argv, code):
    status, text = run(argv)
    assert status == code
    if code > 2:
        assert text.startswith("error\t")


def test_invalid_fan_document(tmp_path):
    path = tmp_path / "overlap.json"
    path.write_text(json.dumps({"rank": 2, "rays": [[1, 0], [0, 1], [1, 1]],
                                "max_cones": [[0, 1], [0, 2]]}))
    status, text = run(["fan-check", str(path)])
    # overlapping cones surface as a parse error on the max_cones field
    assert status == 3 and text.startswith("error\tParseError") and "invalid fan" in text


# --- figures ------------------------------------------------------------------------

def test_svg_output_is_deterministic():
    spec = FigureSpec("fan", library_fan("B3"))
    assert render_svg(spec) == render_svg(spec)
    _, a = run(["plot", "lambda-square", "--fan", "F2"])
    _, b = run(["plot", "lambda-square", "--fan", "F2"])
    assert a == b


def test_fan_figure_draws_each_ray():
    svg = render_svg(FigureSpec("fan", library_fan("P2")))
    assert svg.startswith("<svg") or svg.startswith("<?xml")
    assert len(re.findall(r'data-ray="\d+"', svg)) == 3


def test_lambda_square_has_one_family_per_ray():
    svg = render_svg(FigureSpec("lambda-square", library_fan("F2")))
    assert len(re.findall(r'class="family"', svg)) == 4


def test_other_figures_render():
    assert "<polygon" in render_svg(FigureSpec("amoeba", tropicalize(1, (1, 1, 1, 1))))
    assert "<polyline" in render_svg(FigureSpec("tdual-graph", tdual_graph_p1(0, 1, 21)))
    assert "<polygon" in render_svg(FigureSpec("polytope", library_fan("F1"), divisor=TDivisor((0, 0, 2, 1))))


def test_incompatible_figures():
    with pytest.raises(IncompatibleFigureError):
        render_svg(FigureSpec("lambda-square", library_fan("P1")))
    with pytest.raises(IncompatibleFigureError):
        render_svg(FigureSpec("amoeba", library_fan("P2")))
    with pytest.raises(IncompatibleFigureError):
        render_svg(FigureSpec("fan", library_fan("P3")))
    with pytest.raises(IncompatibleFigureError):
        render_svg(FigureSpec("hexbin", library_fan("P2")))


def test_tdual_graph_shape():
    pts = tdual_graph_p1(0, 1, 101)
    ys = [v for _, v in pts]
    assert all(b > a for a, b in zip(ys, ys[1:]))
    assert abs(dict(pts)[0.0] - 0.5) < 1e-12
    assert all(v == 0 for _, v in tdual_graph_p1(0, 0, 11))
    far = tdual_graph_p1(2, 3, 3)
    assert abs(far[0][1] + 2) < 1e-3 and abs(far[-1][1] - 3) < 1e-3
    with pytest.raises(ValueError):
        tdual_graph_p1(0, 1, 1)


def test_plot_writes_the_file(tmp_path):
    out = tmp_path / "graph.svg"
    status, text = run(["plot", "tdual-graph", "--c", "0,1", "--samples", "31", "--out", str(out)])
    assert status == 0 and text.startswith("wrote")
    assert out.read_text() == render_svg(FigureSpec("tdual-graph", tdual_graph_p1(0, 1, 31)))
