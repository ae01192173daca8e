import json
import math
import subprocess
import sys
from fractions import Fraction

import pytest

from carousel.bodies import Disk, PolygonBody
from carousel.cli import main
from carousel.constructions import generate_integer_scene, sharpness_construct
from carousel.kernel import ConvexPolygon, Point
from carousel.rule import Scene
from carousel.sceneio import (
    canonical_dumps,
    load_document,
    save_document,
    scene_from_doc,
    scene_to_doc,
)

F = Fraction

TRIANGLE = ConvexPolygon((Point(-2.0, -1.0), Point(2.0, -1.0), Point(0.0, 2.0)))


@pytest.fixture
def disk_scene(tmp_path):
    scene = Scene(Disk(Point(-0.3, 0.0), 0.1), Disk(Point(0.3, 0.0), 0.1), TRIANGLE)
    path = tmp_path / "scene.json"
    save_document(str(path), scene_to_doc(scene))
    return str(path)


@pytest.fixture
def sharpness_scene(tmp_path):
    inst = sharpness_construct(6)
    scene = Scene(PolygonBody(inst.a0), PolygonBody(inst.a1), inst.container)
    path = tmp_path / "sharp6.json"
    save_document(str(path), scene_to_doc(scene))
    return str(path)


def test_roundtrip_float_scene(disk_scene):
    doc = load_document(disk_scene)
    scene, _ = scene_from_doc(doc)
    again = canonical_dumps(scene_to_doc(scene))
    assert again == canonical_dumps(doc)


def test_roundtrip_exact_scene(tmp_path):
    scene = generate_integer_scene(5)
    doc = scene_to_doc(scene)
    text = canonical_dumps(doc)
    parsed, _ = scene_from_doc(json.loads(text))
    assert parsed.mode == "exact"
    assert parsed.container.vertices == scene.container.vertices
    assert canonical_dumps(scene_to_doc(parsed)) == text
    # exact scalars travel as num/den strings
    assert '"vertices":[["' in text or '/' in text


def test_cmd_csl_two_disks(disk_scene, capsys):
    code = main(["csl", disk_scene])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["kind"] == "Finite"
    assert out["count"] == 2


def test_cmd_csl_identical_bodies(tmp_path, capsys):
    scene = Scene(Disk(Point(0.0, 0.0), 0.5), Disk(Point(0.0, 0.0), 0.5), TRIANGLE)
    path = tmp_path / "ident.json"
    save_document(str(path), scene_to_doc(scene))
    code = main(["csl", str(path)])
    out = json.loads(capsys.readouterr().out)
    assert code == 3
    assert out["kind"] == "IdenticalBodies"


def test_cmd_csl_malformed(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    code = main(["csl", str(path)])
    assert code == 64
    assert "error" in capsys.readouterr().err


def test_malformed_documents_fail_cleanly(tmp_path):
    # every malformed variant must exit 64 (bad document) or 65 (invariant),
    # never crash with a stray exception
    base = json.loads(canonical_dumps(scene_to_doc(
        Scene(Disk(Point(-0.3, 0.0), 0.1), Disk(Point(0.3, 0.0), 0.1), TRIANGLE))))
    variants = [
        {k: v for k, v in base.items() if k != "G"},
        {**base, "mode": "weird"},
        {**base, "tolerances": "zz"},
        {**base, "tolerances": {"eps": "x"}},
        {**base, "A0": {"kind": "blob"}},
        {**base, "A0": "x"},
        {**base, "A0": {"kind": "disk", "center": [0], "radius": 1}},
        {**base, "A1": {"kind": "ellipse", "center": [0, 0], "semi_major": 1,
                        "semi_minor": 2, "rotation": 0}},
        {**base, "G": {"vertices": [[0, 0]]}},
        {**base, "schema_version": "0"},
    ]
    for k, doc in enumerate(variants):
        path = tmp_path / f"bad{k}.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        code = main(["check", str(path)])
        assert code in (64, 65), (k, code)


def test_cmd_check_body_outside(tmp_path, capsys):
    scene = Scene(Disk(Point(0.0, 0.0), 0.2), Disk(Point(0.3, 0.0), 0.1), TRIANGLE)
    doc = scene_to_doc(scene)
    doc["A0"]["radius"] = 50.0
    path = tmp_path / "outside.json"
    save_document(str(path), doc)
    code = main(["check", str(path)])
    assert code == 65


def test_cmd_check_exit_codes(disk_scene, sharpness_scene, capsys):
    assert main(["check", disk_scene, "--method", "brute"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["certificate"]["verdict"] == "holds"

    assert main(["check", sharpness_scene, "--method", "brute"]) == 2
    out = json.loads(capsys.readouterr().out)
    assert out["certificate"]["verdict"] == "fails"
    assert len(out["certificate"]["refutations"]) == 12

    assert main(["check", sharpness_scene, "--method", "constructive"]) == 4
    assert "error" in capsys.readouterr().err

    assert main(["check", disk_scene, "--method", "both"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["agree"] is True
    assert out["trace"]["witness"] is not None


def test_cmd_gen_deterministic(tmp_path):
    p1 = tmp_path / "a.json"
    p2 = tmp_path / "b.json"
    assert main(["gen", "--kind", "fuzz", "--seed", "1", "--out", str(p1)]) == 0
    assert main(["gen", "--kind", "fuzz", "--seed", "1", "--out", str(p2)]) == 0
    assert p1.read_bytes() == p2.read_bytes()
    scene, _ = scene_from_doc(load_document(str(p1)))
    scene.validate()


def test_cmd_fuzz_small_campaign(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CAROUSEL_WORKERS", "1")
    out = tmp_path / "report.json"
    code = main(["fuzz", "--seeds", "12", "--seed", "5", "--out", str(out)])
    assert code == 0
    report = load_document(str(out))
    assert report["scenes"] == 12
    assert report["counts"]["fails"] == 0 or not report["theorem_violations"]
    code2 = main(["fuzz", "--seeds", "12", "--seed", "5", "--out", str(out)])
    report2 = load_document(str(out))
    assert report == report2


def test_summarize_campaign_flags_violations():
    from carousel.cli import summarize_campaign

    base = {"error": None, "degenerate": False, "fragile": False,
            "verdict": "holds", "s": 2, "n": 5, "cross_agree": True,
            "constructive_ok": True, "constructive_case": 0, "index": 0}
    records = [
        dict(base, index=0),
        dict(base, index=1, verdict="fails", s=2, n=5),          # violation
        dict(base, index=2, verdict="fails", s=7, n=5),          # allowed
        dict(base, index=3, degenerate=True, verdict="fails"),   # excluded
        dict(base, index=4, error="boom"),
        dict(base, index=5, constructive_case=-2),
        dict(base, index=6, s=5, n=5, verdict="fails"),          # tight even
    ]
    s = summarize_campaign(records)
    assert s["theorem_violations"] == [1]
    assert s["counts"]["errors"] == 1
    assert s["counts"]["toolkit_fallbacks"] == 1
    assert s["counts"]["degenerate"] == 1
    # only scene 6 is tight (s == n), with odd count and a failing verdict
    assert s["tight_scenes"] == {"odd_holds": 0, "odd_fails": 1,
                                 "even_holds": 0, "even_fails": 0}


def test_campaign_worker_count_invariance():
    from carousel.cli import run_campaign, summarize_campaign
    from carousel.constructions import FuzzConfig

    cfg = FuzzConfig(seed=21)
    seq = run_campaign(cfg, 40, workers=1)
    par = run_campaign(cfg, 40, workers=2)
    assert seq == par
    assert summarize_campaign(seq) == summarize_campaign(par)


def test_cmd_render_deterministic(disk_scene, tmp_path):
    s1 = tmp_path / "a.svg"
    s2 = tmp_path / "b.svg"
    assert main(["render", disk_scene, "--out", str(s1)]) == 0
    assert main(["render", disk_scene, "--out", str(s2)]) == 0
    b1, b2 = s1.read_bytes(), s2.read_bytes()
    assert b1 == b2
    text = b1.decode()
    assert text.startswith("<svg")
    assert "stroke-dasharray" in text  # common supporting lines drawn dotted
    assert "<polygon" in text


def test_cmd_render_no_compute(disk_scene, tmp_path, capsys):
    out = tmp_path / "x.svg"
    code = main(["render", disk_scene, "--out", str(out), "--no-compute"])
    assert code == 66


def test_cmd_render_uses_embedded_annotations(disk_scene, tmp_path):
    # precompute annotations into the document; --no-compute must then work
    from carousel.cli import compute_annotations

    doc = load_document(disk_scene)
    scene, _ = scene_from_doc(doc)
    doc["annotations"] = compute_annotations(scene, ("csl", "sweeps", "sectors"))
    annotated = tmp_path / "annotated.json"
    save_document(str(annotated), doc)
    out = tmp_path / "annotated.svg"
    assert main(["render", str(annotated), "--out", str(out), "--no-compute"]) == 0
    text = out.read_text()
    assert "stroke-dasharray" in text
    # and the annotated document round-trips canonically
    assert canonical_dumps(load_document(str(annotated))) == canonical_dumps(doc)


def test_cmd_render_layers_subset(disk_scene, tmp_path):
    out = tmp_path / "plain.svg"
    code = main(["render", disk_scene, "--out", str(out),
                 "--layers", "container,bodies"])
    assert code == 0
    text = out.read_text()
    assert "stroke-dasharray" not in text


def test_cmd_render_sharpness_has_layers(sharpness_scene, tmp_path):
    out = tmp_path / "sharp.svg"
    assert main(["render", sharpness_scene, "--out", str(out)]) == 0
    text = out.read_text()
    assert text.count("stroke-dasharray") == 6  # one dotted line per tangent


def test_module_entrypoint_subprocess(disk_scene, tmp_path):
    env = dict(**__import__("os").environ)
    env.setdefault("PYTHONPATH", "")
    r1 = subprocess.run([sys.executable, "-m", "carousel", "check", disk_scene],
                        capture_output=True, text=True, env=env)
    r2 = subprocess.run([sys.executable, "-m", "carousel", "check", disk_scene],
                        capture_output=True, text=True, env=env)
    assert r1.returncode == 0
    assert r1.stdout == r2.stdout
