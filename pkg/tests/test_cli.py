import json
import subprocess
import sys


from dmball.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_int_exit_codes(capsys):
    assert run(capsys, "check-int", "--mu", "1/4x8")[0] == 0
    code, _, err = run(capsys, "check-int", "--mu", "1/6x12")
    assert code == 3 and "failing pair" in err
    assert run(capsys, "check-int", "--sigma", "--mu", "1/6x12")[0] == 0


def test_signature_json(capsys):
    code, out, _ = run(capsys, "signature", "--mu", "1/6x12", "--json")
    assert code == 0 and out.strip() == '{"p":1,"q":9}'


def test_psi_json_schema(capsys):
    code, out, _ = run(capsys, "psi", "--mu", "1/2x4", "--skew", "--json")
    data = json.loads(out)
    assert code == 0 and data["kind"] == "skew" and data["d"] == 2
    assert data["entries"][0][1]["coeffs"] == ["-1/2"]


def test_invalid_input_exit_2(capsys):
    assert run(capsys, "psi", "--mu", "1/2x")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "psi", "--mu", "1/2x4", "--bogus-flag")[0] == 2
    assert run(capsys, "cover-check", "--a", "2", "--b", "2", "--A", "1,0,0", "--B", "0,1,0")[0] == 2


def test_braid_commands(capsys):
    code, out, _ = run(capsys, "braid", "--mu", "1/4x8", "--gen", "1", "--power", "2", "--json")
    data = json.loads(out)
    assert code == 0 and data["order"] == 2
    assert run(capsys, "braid-check", "--mu", "1/6x12")[0] == 0
    assert run(capsys, "braid-check", "--mu", "1/4x8")[0] == 3


def test_enumerate_and_descend(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "7", "--max-den", "24", "--condition", "int", "--json")
    assert code == 0 and len(json.loads(out)) == 1
    code, out, _ = run(capsys, "descend", "--mu", "1/4x8", "--depth", "1", "--dot")
    assert code == 0 and out.startswith("digraph")


def test_property_g_commands(capsys):
    code, out, _ = run(capsys, "classify-g", "--json")
    assert json.loads(out) == [[3, 2, 12], [4, 2, 8], [6, 2, 6], [3, 3, 6], [4, 4, 4]]
    code, out, _ = run(capsys, "pullback", "--nu", "1/3,1/2,1/6", "--fibers", "3x4|2x6|1x12", "--json")
    data = json.loads(out)
    assert code == 0 and data["spi_codim"] == 1 and data["subball"]
    code, out, _ = run(capsys, "pullback", "--nu", "1/4,1/2,1/4", "--fibers", "2|1,1|2",
                       "--perms", "[[2,1],[1,2],[2,1]]", "--json")
    assert json.loads(out)["pairing"]["constant"] == "2"
    code, out, _ = run(capsys, "cover-check", "--a", "2", "--b", "2", "--A", "1,0", "--B", "0,1", "--json")
    assert code == 0 and json.loads(out)["cover"]["D"] == ["1", "0", "1"]


def test_pseudo_disc(capsys):
    code, out, _ = run(capsys, "pseudo-disc", "--a", "6", "--b", "2", "--d1", "1", "--d2", "3", "--witness", "--json")
    data = json.loads(out)
    assert code == 0 and data["orbit_count"] == 2 and data["witness"]["ok"]
    assert run(capsys, "pseudo-disc", "--a", "6", "--b", "2", "--d1", "1")[0] == 2


def test_lattice(capsys):
    code, out, _ = run(capsys, "lattice", "--ring", "gaussian", "--gram", "[[2]]", "--dual-quotient", "--json")
    assert code == 0 and json.loads(out) == {"dual_quotient": ["2"]}
    code, out, _ = run(capsys, "lattice", "--ring", "eisenstein", "--gram", "[[1,0],[0,1]]", "--ambiguity", "[1,0]", "--json")
    assert json.loads(out)["order"] == 6
    assert run(capsys, "lattice", "--ring", "gaussian", "--gram", "[[2,0],[0,1]]", "--ambiguity", "[0,1]")[0] == 3


def test_text_and_json_agree(capsys):
    _, text, _ = run(capsys, "signature", "--mu", "1/4x8")
    _, js, _ = run(capsys, "signature", "--mu", "1/4x8", "--json")
    d = json.loads(js)
    assert f"({d['p']}, {d['q']})" in text


def test_deterministic_output(capsys):
    a = run(capsys, "pseudo-disc", "--a", "4", "--b", "2", "--d1", "2", "--d2", "4", "--witness", "--seed", "3")
    b = run(capsys, "pseudo-disc", "--a", "4", "--b", "2", "--d1", "2", "--d2", "4", "--witness", "--seed", "3")
    assert a == b


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dmball", "classify-g"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.splitlines()[0] == "(3,2,12)"
