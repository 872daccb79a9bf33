import csv
import io
import json
import math
from fractions import Fraction as F

import pytest

from mivolume.errors import BadParams
from mivolume.harness import report as rep
from mivolume.harness.cli import EXIT_ERROR, EXIT_OK, EXIT_VIOLATED, main
from mivolume.harness.experiments import ExperimentRecord, VerifyRow, sweep, verify_lemma
from mivolume.harness.families import FAMILIES, InstanceFamily, generate_instance, parse_params
from mivolume.harness.oracle import mc_mass_fraction, mc_volume
from mivolume.mixed_integer import total_volume
from mivolume.polytope import Halfspace, Polytope, same_set


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def records(n, seed=0):
    return [ExperimentRecord(f"fam[k={i}]", 1, 1, float(i), "worst_fraction", 0.5 - 1 / (i + 2), 1 / math.e,
                             None, None, seed) for i in range(n)]


# --- families ------------------------------------------------------------------------------


def test_parse_params():
    assert parse_params("k=8, n=1,d=2,shape=box") == {"k": 8, "n": 1, "d": 2, "shape": "box"}
    assert parse_params("k=5/2") == {"k": F(5, 2)}
    assert parse_params(None) == {} and parse_params("") == {}
    with pytest.raises(BadParams):
        parse_params("k8")


def test_unknown_family():
    with pytest.raises(BadParams):
        generate_instance(InstanceFamily("nope", {}))


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_families_deterministic_and_nonempty(name):
    fam = InstanceFamily(name, {"k": 4, "seed": 3})
    a, b = generate_instance(fam), generate_instance(fam)
    assert same_set(a.body, b.body)
    assert total_volume(a) > 0


def test_instance_id_is_canonical():
    fam = InstanceFamily("ball_prism", {"seed": 2, "k": 5, "n": 2, "shape": "box", "d": 1})
    assert fam.instance_id() == "ball_prism[n=2,d=1,k=5,shape=box,seed=2]"


# --- Monte-Carlo oracle ----------------------------------------------------------------------


def test_mc_volume_unit_cube():
    est, se = mc_volume(Polytope.cube(3), 10_000, 0)
    assert est == 1.0 and se == 0.0


def test_mc_volume_simplex():
    est, se = mc_volume(Polytope.standard_simplex(3), 100_000, 1)
    assert abs(est - 1 / 6) <= 3 * se


def test_mc_volume_rejects_few_samples():
    with pytest.raises(ValueError):
        mc_volume(Polytope.cube(2), 99)


def test_mc_mass_fraction_half_square():
    p, se = mc_mass_fraction(Polytope.cube(2), Halfspace((1, 0), F(1, 2)), 50_000, 2)
    assert abs(p - 0.5) <= 3 * se


# --- records and report ----------------------------------------------------------------------


def test_empty_report_is_header_only():
    assert rep.to_csv([]) == ",".join(ExperimentRecord.FIELDS) + "\n"


def test_hundred_records():
    rows = list(csv.DictReader(io.StringIO(rep.to_csv(records(100)))))
    assert len(rows) == 100
    assert list(rows[0]) == list(ExperimentRecord.FIELDS)


def test_report_sorted_independent_of_input_order():
    recs = records(12)
    assert rep.to_csv(recs) == rep.to_csv(recs[::-1])
    assert rep.to_json(recs) == rep.to_json(recs[::-1])


def test_satisfied_rendering_and_round_trip(tmp_path):
    recs = [ExperimentRecord("a", 1, 1, 8.0, "q", 0.4, 0.3, True, 1.5, 7),
            ExperimentRecord("b", 2, 1, 9.0, "q", 0.1, 0.3, False, None, 7),
            ExperimentRecord("c", 1, 2, 4.0, "q", 0.2, None, None, None, 7)]
    assert [r.row()["satisfied"] for r in recs] == ["yes", "no", "n/a"]
    for suffix, text in ((".csv", rep.to_csv(recs)), (".json", rep.to_json(recs))):
        path = tmp_path / ("r" + suffix)
        path.write_text(text)
        assert rep.read_records(path) == recs


def test_plot_data_blocks():
    text = rep.plot_data(records(3))
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    assert len(lines) == 3
    assert [float(ln.split()[0]) for ln in lines] == [0.0, 1.0, 2.0]


def test_plot_figure(tmp_path):
    pytest.importorskip("matplotlib")
    path = rep.plot_figure(records(4), tmp_path / "f.png")
    assert path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_render_rejects_unknown_format():
    with pytest.raises(ValueError):
        rep.render([], "xml")


# --- verification rows and sweeps -------------------------------------------------------------


def test_out_of_hypothesis_rows_are_kept():
    rows = verify_lemma("4.3", count=3, family="ball_prism", params={"n": 1, "d": 1, "k": 2})
    assert len(rows) == 3
    assert all(r.row()["satisfied"] == "n/a" for r in rows)
    assert all("hypothesis" in r.note for r in rows)


def test_verify_rows_render():
    rows = verify_lemma("4.1", count=4, seed=5)
    text = rep.render(rows, "csv", VerifyRow.FIELDS)
    assert text.splitlines()[0] == ",".join(VerifyRow.FIELDS)
    assert all(r.satisfied for r in rows)


def test_unknown_lemma():
    with pytest.raises(ValueError):
        verify_lemma("9.9")


def test_sweep_records():
    recs = sweep("product_box", {"n": 1, "d": 1}, [8, 16], "n1")
    names = {r.quantity_name for r in recs}
    assert {"worst_fraction", "fitted_a", "monotone_shortfall"} <= names
    summary = {r.quantity_name: r for r in recs if r.instance_id.endswith("[sweep]")}
    assert summary["fitted_a"].paper_bound == 10.0 and summary["fitted_a"].satisfied
    # below the size threshold the theorem does not apply
    assert all(r.satisfied is None for r in recs if r.quantity_name == "half_grunbaum_target")


def test_parallel_sweep_matches_sequential():
    a = sweep("cone_product", {"n": 1, "d": 1}, [8, 16], "n1", jobs=1)
    b = sweep("cone_product", {"n": 1, "d": 1}, [8, 16], "n1", jobs=2)
    assert rep.to_csv(a) == rep.to_csv(b)


def test_sweep_kind_checked():
    with pytest.raises(ValueError):
        sweep("product_box", {}, [8], "other")


# --- command line ----------------------------------------------------------------------------


def test_cli_volume(tmp_path, capsys):
    path = tmp_path / "tri.json"
    path.write_text(json.dumps(Polytope.standard_simplex(2).to_json()))
    code, out, _ = run(capsys, "volume", "--instance", str(path))
    assert code == EXIT_OK
    assert json.loads(out)["volume_float"] == 0.5


def test_cli_fibers_and_mu(capsys):
    code, out, _ = run(capsys, "fibers", "--family", "product_box", "--params", "k=2")
    assert code == EXIT_OK and out == "z,vol_d\n0,1\n1,1\n2,1\n"
    code, out, _ = run(capsys, "mu", "--family", "product_box", "--params", "k=2",
                       "--normal", "1,0", "--point", "1/2,0")
    assert code == EXIT_OK and json.loads(out)["mu_float"] == pytest.approx(2 / 3)


def test_cli_cbar(capsys):
    code, out, _ = run(capsys, "cbar")
    assert code == EXIT_OK
    assert 5.4668 <= json.loads(out)["cbar"] <= 5.4670


def test_cli_worst_case(capsys):
    code, out, _ = run(capsys, "worst-case", "--n", "1", "--d", "1", "--samples", "512")
    js = json.loads(out)
    assert code == EXIT_OK and js["exact_match"] and js["mu"] == "1/4"


def test_cli_error_exit(capsys, tmp_path):
    code, _, err = run(capsys, "volume", "--instance", str(tmp_path / "missing.json"))
    assert code == EXIT_ERROR and err.startswith("error:")
    code, _, err = run(capsys, "fibers")
    assert code == EXIT_ERROR
    code, _, _ = run(capsys, "fibers", "--family", "product_box", "--params", "oops")
    assert code == EXIT_ERROR


def test_cli_violation_exit(capsys, tmp_path):
    path = tmp_path / "r.csv"
    bad = [ExperimentRecord("x", 1, 1, 8.0, "worst_fraction", 0.1, 0.3, False, None, 0)]
    path.write_text(rep.to_csv(bad))
    code, out, _ = run(capsys, "report", str(path))
    assert code == EXIT_VIOLATED
    assert out == rep.to_csv(bad)


def test_cli_report_plot(capsys, tmp_path):
    pytest.importorskip("matplotlib")
    src = tmp_path / "r.json"
    src.write_text(rep.to_json(records(3)))
    code, _, _ = run(capsys, "report", str(src), "--plot-data", str(tmp_path / "d.txt"),
                     "--plot", str(tmp_path / "p.png"))
    assert code == EXIT_OK
    assert (tmp_path / "p.png").exists() and (tmp_path / "d.txt").read_text().startswith("# fam")


def test_cli_verify_marks_out_of_hypothesis(capsys):
    code, out, _ = run(capsys, "verify", "--lemma", "4.3", "--family", "ball_prism",
                       "--params", "n=1,d=1,k=2", "--count", "2")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK and len(rows) == 2
    assert {r["satisfied"] for r in rows} == {"n/a"}


@pytest.mark.parametrize("argv", [
    ("theorem-n1", "--family", "cone_product", "--params", "k=8", "--samples", "256"),
    ("oertel", "--family", "random_hull", "--params", "n=1,d=1,k=4", "--samples", "256"),
    ("mc-check", "--dims", "2,3", "--count", "2", "--samples", "2000"),
])
def test_cli_deterministic(capsys, tmp_path, argv):
    outs = []
    for i in range(2):
        path = tmp_path / f"o{i}"
        assert main([*argv, "--seed", "4", "--out", str(path)]) == EXIT_OK
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_cli_json_format(capsys):
    code, out, _ = run(capsys, "theorem-n1", "--family", "product_box", "--params", "k=8",
                       "--samples", "256", "--format", "json")
    rows = json.loads(out)
    assert code == EXIT_OK and {r["quantity_name"] for r in rows} >= {"worst_fraction"}
    assert all(r["seed"] == 0 for r in rows)


def test_cli_lattice_width_and_enlarge(capsys, tmp_path):
    path = tmp_path / "box.json"
    path.write_text(json.dumps(Polytope.box([0, 0], [4, 1]).to_json()))
    code, out, _ = run(capsys, "lattice-width", "--instance", str(path))
    assert code == EXIT_OK and json.loads(out)["width_float"] == 1.0
    code, out, _ = run(capsys, "enlarge", "--instance", str(path))
    js = json.loads(out)
    assert code == EXIT_OK and js["width"]["width_float"] == 1.0 and "matrix" in js["map"]
