"""Frozen regression fixtures.

The files under golden/ pin the byte-exact output of the reference
build environment; a mismatch means behavior changed and needs review.
"""

import pathlib

from carousel.cli import main
from carousel.constructions import scene_as_float
from carousel.rule import check_carousel_bruteforce
from carousel.sceneio import (
    canonical_dumps,
    certificate_to_doc,
    load_document,
    scene_from_doc,
)

GOLDEN = pathlib.Path(__file__).parent / "golden"


def _cli_bytes(tmp_path, args, name):
    out = tmp_path / name
    code = main(args + ["--out", str(out)])
    assert code == 0
    return out.read_bytes()


def test_fuzz_scene_golden(tmp_path):
    got = _cli_bytes(tmp_path, ["gen", "--kind", "fuzz", "--seed", "1"], "s.json")
    assert got == (GOLDEN / "fuzz_seed1.json").read_bytes()


def test_integer_scene_and_certificate_golden(tmp_path):
    got = _cli_bytes(tmp_path, ["gen", "--kind", "integer", "--seed", "3"], "i.json")
    assert got == (GOLDEN / "integer_seed3.json").read_bytes()
    cert = _cli_bytes(tmp_path, ["check", str(GOLDEN / "integer_seed3.json"),
                                 "--method", "brute"], "c.json")
    assert cert == (GOLDEN / "integer_seed3_cert.json").read_bytes()


def test_golden_witness_stable_across_modes():
    # the exact-mode witness in the golden certificate is reproduced by the
    # float twin of the same scene
    scene, _ = scene_from_doc(load_document(str(GOLDEN / "integer_seed3.json")))
    golden = load_document(str(GOLDEN / "integer_seed3_cert.json"))["certificate"]
    twin = check_carousel_bruteforce(scene_as_float(scene))
    assert (twin.verdict, twin.i, twin.j) == \
        (golden["verdict"], golden["i"], golden["j"])


def test_sharpness_svg_golden(tmp_path):
    got = _cli_bytes(tmp_path, ["gen", "--kind", "sharpness", "--n", "4"], "sh.json")
    assert got == (GOLDEN / "sharpness4.json").read_bytes()
    svg = _cli_bytes(tmp_path, ["render", str(GOLDEN / "sharpness4.json")], "sh.svg")
    assert svg == (GOLDEN / "sharpness4.svg").read_bytes()


def test_sector_demo_svg_golden(tmp_path):
    svg = _cli_bytes(tmp_path, ["render", str(GOLDEN / "sector_demo.json"),
                                "--layers", "sectors,container,sweeps,bodies,csl"],
                     "sec.svg")
    assert svg == (GOLDEN / "sector_demo.svg").read_bytes()
    text = svg.decode()
    assert text.count("stroke-dasharray") == 2  # dotted common supporting lines
    assert "#9e9e9e" in text and "#dddddd" in text  # dark base, light expansion


def test_goldens_parse_and_validate():
    for name in ("fuzz_seed1.json", "integer_seed3.json", "sector_demo.json",
                 "sharpness4.json"):
        doc = load_document(str(GOLDEN / name))
        scene, _ = scene_from_doc(doc)
        scene.validate()
        assert canonical_dumps(doc) + "\n" == (GOLDEN / name).read_text()
