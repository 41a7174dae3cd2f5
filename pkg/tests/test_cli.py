import json
from fractions import Fraction as F

import pytest

from hybridjac import HybridDivisor, TropicalDivisor, formats, surface_point, vertex_place
from hybridjac.cli import run_cli


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(formats.dump_canonical(payload))
    return str(path)


@pytest.fixture
def fig1_file(tmp_path, fig1_complex):
    return _write(tmp_path, "fig1.json", formats.instance_to_json(fig1_complex))


@pytest.fixture
def edge_file(tmp_path, edge_complex):
    return _write(tmp_path, "edge.json", formats.instance_to_json(edge_complex))


def test_genus_fig1(fig1_file, capsys):
    assert run_cli(["genus", "--instance", fig1_file]) == 0
    assert capsys.readouterr().out.strip() == "3"


def test_rank_fig1(fig1_file, capsys):
    assert run_cli(["rank", "--instance", fig1_file]) == 0
    assert capsys.readouterr().out.strip() == "5"


def test_validate_json(edge_file, capsys):
    assert run_cli(["validate", "--instance", edge_file, "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload == {"genus": 2, "ok": True}


def test_periods(fig1_file, capsys):
    assert run_cli(["periods", "--instance", fig1_file, "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["matrix"] == [["4"]]


def test_principal_exit_codes(tmp_path, edge_file, edge_complex, capsys):
    yes = _write(
        tmp_path,
        "lattice-translate.json",
        formats.hybrid_divisor_to_json(
            HybridDivisor(
                edge_complex,
                {surface_point("v1", "a"): 1, surface_point("v1", "p0"): -1},
            )
        ),
    )
    assert run_cli(["principal", "--instance", edge_file, "--divisor", yes,
                    "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["principal"] is True
    assert payload["surface_coords"]["v1"] == [0, 1]

    no = _write(
        tmp_path,
        "sixth.json",
        formats.hybrid_divisor_to_json(
            HybridDivisor(
                edge_complex,
                {surface_point("v1", "b"): 1, surface_point("v1", "p0"): -1},
            )
        ),
    )
    assert run_cli(["principal", "--instance", edge_file, "--divisor", no]) == 1
    assert "surface block v1 residue not in lattice" in capsys.readouterr().out


def test_lift_and_gamma_part(tmp_path, edge_file, edge_complex, capsys):
    dg = _write(
        tmp_path,
        "dg.json",
        formats.tropical_divisor_to_json(
            TropicalDivisor(
                edge_complex.graph,
                {vertex_place("v1"): 1, vertex_place("v2"): -1},
            )
        ),
    )
    assert run_cli(["lift", "--instance", edge_file, "--divisor", dg,
                    "--json"]) == 0
    lifted = json.loads(capsys.readouterr().out)
    assert {"place": {"point": "p0", "surface": "v1"}, "coeff": 1} in lifted

    hd = _write(tmp_path, "hd.json", lifted)
    assert run_cli(["gamma-part", "--instance", edge_file, "--divisor", hd,
                    "--json"]) == 0
    back = json.loads(capsys.readouterr().out)
    assert back == json.loads((tmp_path / "dg.json").read_text())


def test_aj_and_preimage(tmp_path, fig1_file, fig1_complex, capsys):
    d = HybridDivisor(
        fig1_complex,
        {fig1_complex.edge_point("e1", F(1, 5)): 1,
         surface_point("v1", "p0"): -1},
    )
    df = _write(tmp_path, "d.json", formats.hybrid_divisor_to_json(d))
    assert run_cli(["aj", "--instance", fig1_file, "--divisor", df,
                    "--json"]) == 0
    coords = json.loads(capsys.readouterr().out)
    tf = _write(tmp_path, "target.json", coords)
    assert run_cli(["preimage", "--instance", fig1_file, "--target", tf,
                    "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert "instance" in payload and "divisor" in payload


def test_decompose(tmp_path, edge_file, edge_complex, capsys):
    fn = _write(
        tmp_path,
        "f.json",
        [
            {"place": {"vertex": "v1"}, "value": "0"},
            {"place": {"vertex": "v2"}, "value": "1"},
        ],
    )
    assert run_cli(["decompose", "--instance", edge_file, "--function", fn,
                    "--json"]) == 0
    moves = json.loads(capsys.readouterr().out)
    assert len(moves) == 1
    assert moves[0]["low"] == "0" and moves[0]["high"] == "1"


def test_check_subcommand(capsys):
    assert run_cli(["check", "tree-theorem", "--seed", "5", "--cases", "5",
                    "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["results"][0]["suite"] == "tree-theorem"
    assert payload["results"][0]["ok"] is True


def test_input_errors(tmp_path, edge_file):
    assert run_cli(["genus", "--instance", str(tmp_path / "missing.json")]) == 2
    assert run_cli(["genus"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    assert run_cli(["genus", "--instance", str(bad)]) == 2
    assert run_cli(["principal", "--instance", edge_file]) == 2
    assert run_cli(["check", "no-such-suite"]) == 2


def test_mode_env_var(edge_file, capsys, monkeypatch):
    monkeypatch.setenv("HYBRID_JACOBI_MODE", "float")
    assert run_cli(["periods", "--instance", edge_file, "--json"]) == 0
    capsys.readouterr()
    monkeypatch.setenv("HYBRID_JACOBI_MODE", "bogus")
    assert run_cli(["genus", "--instance", edge_file]) == 2
