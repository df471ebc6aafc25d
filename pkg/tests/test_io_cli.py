import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blochlu.bloch import extract_tensors
from blochlu.cli import EXIT_ERROR, EXIT_USAGE, main
from blochlu.errors import BadDimension
from blochlu.invariants import compute_invariants
from blochlu.io import (
    StateFileError,
    dumps,
    format_number,
    read_local_unitary,
    read_state,
    state_from_dict,
    tensors_from_dict,
    tensors_to_dict,
    write_local_unitary,
    write_state,
)
from blochlu.qstate import LocalUnitary, random_density, random_local_unitary

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# --------------------------------------------------------------- formats

@settings(max_examples=300)
@given(st.floats(allow_nan=False, allow_infinity=False))
def test_format_number_round_trips(x):
    assert float(format_number(x)) == x


def test_dumps_keeps_arrays_compact():
    text = dumps({"T12": np.diag([0.25, -0.25, 0.25]), "entries": [["<T1,T1>", 0.0625]]})
    assert '"T12": [[0.25,0,0],[0,-0.25,0],[0,0,0.25]]' in text
    assert '["<T1,T1>", 0.0625]' in text
    assert json.loads(text)["entries"] == [["<T1,T1>", 0.0625]]


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**31 - 1))
def test_state_file_round_trip(tmp_path_factory, n, seed):
    path = tmp_path_factory.mktemp("rt") / "s.json"
    rho = random_density(n, rng=seed)
    write_state(path, rho)
    assert np.array_equal(read_state(path).matrix, rho.matrix)


def test_tensor_dump_round_trip(rng):
    t = extract_tensors(random_density(3, rng=rng))
    back = tensors_from_dict(json.loads(dumps(tensors_to_dict(t))))
    for s, arr in t.tensors.items():
        assert np.array_equal(back[s], arr)


def test_state_parse_errors(tmp_path):
    with pytest.raises(BadDimension, match="row 1"):
        read_state(DATA / "malformed.json")
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "n_qubits": 1,\n  "pure": {"re": [1, 0],}\n}\n')
    with pytest.raises(StateFileError, match=":3:"):
        read_state(bad)
    with pytest.raises(StateFileError):
        state_from_dict({"n_qubits": 1, "ensemble": {"weights": [0.7, 0.7],
                                                     "pures": [{"re": [1, 0]}, {"re": [0, 1]}]}})
    with pytest.raises(StateFileError):
        state_from_dict({"n_qubits": 1})


def test_ensemble_state():
    rho = read_state(DATA / "mixed-2.json")
    np.testing.assert_allclose(rho.matrix, np.eye(4) / 4)


def test_local_unitary_round_trip(tmp_path, rng):
    lu = random_local_unitary(3, rng)
    write_local_unitary(tmp_path / "u.json", lu, seed=4)
    back = read_local_unitary(tmp_path / "u.json")
    assert all(np.array_equal(a, b) for a, b in zip(lu.factors, back.factors))


# ------------------------------------------------------------------ CLI

def test_extract(capsys):
    code, out, _ = run(capsys, "extract", DATA / "bell.json")
    assert code == 0
    assert '"T12": [[0.25,0,0],[0,-0.25,0],[0,0,0.25]]' in out
    code, out, _ = run(capsys, "extract", DATA / "mixed-2.json")
    assert all(not np.any(v) for v in json.loads(out)["tensors"].values())
    code, _, err = run(capsys, "extract", DATA / "malformed.json")
    assert code == EXIT_ERROR and "BadDimension" in err and "row 1" in err


def test_invariants_command(capsys):
    code, out, _ = run(capsys, "invariants", DATA / "product-00.json")
    doc = json.loads(out)
    assert code == 0 and doc["scheme"] == "TwoQubit12"
    expected = [1 / 16, 1 / 256, 1 / 4096, 1 / 16, 1 / 256, 1 / 4096,
                1 / 64, 1 / 1024, 1 / 16384, 1 / 16, 1 / 256, 1 / 4096]
    np.testing.assert_allclose([v for _, v in doc["entries"]], expected, rtol=1e-14)
    assert doc["genericity"]["generic"] is False

    code, out, _ = run(capsys, "invariants", DATA / "ghz.json", "--scheme", "90")
    doc = json.loads(out)
    assert len(doc["entries"]) == 90
    assert dict(doc["entries"])["tr(T1|23' T1|23)"] == 0.0625

    code, _, err = run(capsys, "invariants", DATA / "bell.json", "--scheme", "90")
    assert code == EXIT_ERROR and "WrongQubitCount" in err


def test_invariants_print_full_precision(tmp_path, capsys, rng):
    rho = random_density(3, rng=rng)
    write_state(tmp_path / "r.json", rho)
    _, out, _ = run(capsys, "invariants", tmp_path / "r.json", "--extended")
    printed = np.array([v for _, v in json.loads(out)["entries"]])
    ref = compute_invariants(extract_tensors(read_state(tmp_path / "r.json")), extended=True)
    assert len(printed) == 144
    assert np.array_equal(printed, ref.values)


def test_compare_exit_codes(tmp_path, capsys):
    code, out, _ = run(capsys, "random", "--qubits", 2, "--seed", 3, "-o", tmp_path / "a.json")
    code, out, _ = run(capsys, "apply", tmp_path / "a.json", "--seed", 8, "-o", tmp_path / "b.json")
    assert code == 0 and (tmp_path / "b.lu.json").exists()
    code, out, _ = run(capsys, "compare", tmp_path / "a.json", tmp_path / "b.json", "--witness")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "Equivalent" and doc["residual"] <= 1e-7
    assert len(doc["witness"]) == 2

    code, out, _ = run(capsys, "compare", DATA / "product-00.json", DATA / "bell.json")
    assert code == 1 and json.loads(out)["separating"]["label"] == "tr(T12 T12')"

    code, out, _ = run(capsys, "compare", DATA / "bell.json", DATA / "bell-phi-minus.json")
    assert code == 0 and json.loads(out)["branch"] == "degenerate"

    code, out, _ = run(capsys, "compare", DATA / "product-00.json", DATA / "product-00.json",
                       "--rtol", "1e-6", "--atol", "1e-9")
    assert code == 0

    code, _, err = run(capsys, "compare", DATA / "bell.json", DATA / "ghz.json")
    assert code == EXIT_ERROR and "QubitMismatch" in err


def test_compare_inconclusive(tmp_path, capsys):
    run(capsys, "apply", DATA / "product-00.json", "--seed", 2, "-o", tmp_path / "p.json")
    code, out, _ = run(capsys, "compare", DATA / "product-00.json", tmp_path / "p.json")
    assert code == 2 and json.loads(out)["verdict"] == "Inconclusive"


def test_apply(tmp_path, capsys):
    src = DATA / "ghz.json"
    run(capsys, "apply", src, "--seed", 5, "-o", tmp_path / "x.json")
    run(capsys, "apply", src, "--seed", 5, "-o", tmp_path / "y.json")
    assert (tmp_path / "x.json").read_text() == (tmp_path / "y.json").read_text()

    write_local_unitary(tmp_path / "id.json", LocalUnitary.identity(3))
    run(capsys, "apply", src, "--unitary", tmp_path / "id.json", "-o", tmp_path / "z.json")
    assert np.array_equal(read_state(tmp_path / "z.json").matrix, read_state(src).matrix)

    write_local_unitary(tmp_path / "two.json", LocalUnitary.identity(2))
    code, _, err = run(capsys, "apply", src, "--unitary", tmp_path / "two.json", "-o", tmp_path / "w.json")
    assert code == EXIT_ERROR and "ArityMismatch" in err


def test_random(tmp_path, capsys, monkeypatch):
    run(capsys, "random", "--qubits", 2, "--rank", 4, "--seed", 9, "-o", tmp_path / "a.json")
    run(capsys, "random", "--qubits", 2, "--rank", 4, "--seed", 9, "-o", tmp_path / "b.json")
    assert (tmp_path / "a.json").read_text() == (tmp_path / "b.json").read_text()
    read_state(tmp_path / "a.json")
    code, _, err = run(capsys, "random", "--qubits", 2, "--rank", 5)
    assert code == EXIT_ERROR and "BadRank" in err

    monkeypatch.setenv("BLOCHLU_SEED", "9")
    _, out, _ = run(capsys, "random", "--qubits", 2, "--rank", 4)
    assert np.array_equal(state_from_dict(json.loads(out)).matrix, read_state(tmp_path / "a.json").matrix)


def test_words(capsys):
    code, out, _ = run(capsys, "words", "--qubits", 2, "--family", "O1")
    lines = out.splitlines()
    assert code == 0
    assert lines[1:] == ["T1", "T12 T2", "T12 T12' T1", "T12 T12' T12 T2",
                         "(T12 T12')^2 T1", "(T12 T12')^2 T12 T2"]
    code, out, _ = run(capsys, "words", "--qubits", 3, "--family", "O1|23")
    assert "T1|23 T1|23' T1" in out.splitlines()
    code, out, _ = run(capsys, "words", "--qubits", 3, "--target", "31")
    assert "T2|13' T12' T1" in out.splitlines()
    code, _, err = run(capsys, "words", "--qubits", 2, "--family", "O7")
    assert code == EXIT_ERROR and "unknown family" in err


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0 and out.count("PASS") == 7
    code, out, _ = run(capsys, "selftest", "--trials", 0)
    assert code == 0 and "PASS" not in out
    a = run(capsys, "selftest", "--trials", 2, "--seed", 4)[1]
    b = run(capsys, "selftest", "--trials", 2, "--seed", 4)[1]
    assert a == b


def test_usage_errors_do_not_collide_with_verdicts(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["compare", "only-one.json"])
    assert exc.value.code == EXIT_USAGE
    code, _, err = run(capsys, "extract", "/nonexistent/state.json")
    assert code == EXIT_ERROR


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "blochlu", "compare",
                           str(DATA / "product-00.json"), str(DATA / "bell.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["verdict"] == "Inequivalent"
