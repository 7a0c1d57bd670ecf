import json
import os
import subprocess
import sys

import pytest

from hypercomb import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_density(capsys):
    code, out, err = run(capsys, "density", "periodic p=2 r=0")
    assert code == 0 and "schnirelmann" in err
    res = out["result"]
    assert res["schnirelmann"] == {"value": {"num": 0, "den": 1}, "witness": 1, "method": "exact"}
    assert res["upper_density"]["value"] == {"num": 1, "den": 2}
    assert res["banach_density"]["value"] == {"num": 1, "den": 2}
    assert out["command"] == "density"
    assert out["limits"] == {"max_window": 10**7, "max_search_nodes": 10**8, "time_budget": None}


def test_density_window(capsys):
    code, out, _ = run(capsys, "density", "blocks pow4", "--window", "1..70", "--L", "3")
    assert code == 0
    assert out["result"]["window"]["best"] == {"x": 63, "interval": [64, 66],
                                               "value": {"num": 1, "den": 1}}
    assert out["result"]["schnirelmann"] is None
    code, out, _ = run(capsys, "density", "blocks pow4", "--window", "1..70")
    assert code == 2


def test_structure(capsys):
    code, out, _ = run(capsys, "structure", "classify", "periodic p=2 r=0")
    assert code == 0 and out["result"]["syndetic"] and not out["result"]["thick"]
    code, out, _ = run(capsys, "structure", "ps", "periodic p=2 r=0", "--window", "1..100",
                       "-k", "2", "-L", "50")
    assert out["result"]["witness"] == {"interval": [1, 100], "gap_bound": 2}
    code, out, _ = run(capsys, "structure", "classify", "explicit 1,2")
    assert code == 1 and out["error"]["kind"] == "domain"


@pytest.mark.parametrize("prefix", [["embed"], ["structure", "embed"]])
def test_embed(capsys, prefix):
    code, out, _ = run(capsys, *prefix, "--F", "1,3,5", "--Y", "periodic p=2 r=1", "--bound", "10")
    assert code == 0
    assert out["result"]["shift"] == 0 and out["result"]["decision"] is True
    code, out, _ = run(capsys, *prefix, "--F", "1,2", "--Y", "periodic p=2 r=0", "--bound", "100")
    assert out["result"]["shift"] is None and out["result"]["decision"] is False


def test_jin(capsys):
    code, out, _ = run(capsys, "jin", "--spec", "periodic p=3 r=0", "--M", "3000", "-k", "10",
                       "--beta", "1/3")
    assert code == 0
    assert out["result"]["certificate"]["xi"] == 3 and out["result"]["embed_check"] is True
    code, out, _ = run(capsys, "jin", "--spec", "periodic p=2 r=0", "--M", "1000", "-k", "5",
                       "--beta", "9/10")
    assert out["result"]["certificate"] is None and out["result"]["refutation"]["holds"]
    code, out, _ = run(capsys, "jin", "--spec", "periodic p=2 r=0", "--M", "100", "-k", "5",
                       "--beta", "3/2")
    assert code == 1
    code, _, _ = run(capsys, "jin", "--spec", "periodic p=2 r=0", "--M", "100", "-k", "5",
                     "--beta", "x")
    assert code == 2


def test_ramsey(capsys, tmp_path):
    pairs = tmp_path / "pairs.txt"
    pairs.write_text("".join(f"{i} {j} {(i + j) % 2 + 1}\n"
                             for i in range(1, 17) for j in range(i + 1, 17)))
    code, out, _ = run(capsys, "ramsey", "clique", "--coloring", str(pairs), "-r", "2")
    assert code == 0 and out["result"]["verified"] and out["result"]["size"] >= 2
    line = tmp_path / "line.txt"
    line.write_text("1\n2\n1\n2\n1\n2\n1\n2\n")
    code, out, _ = run(capsys, "ramsey", "ap3", "--coloring", str(line))
    assert out["result"]["ap"] == [1, 2]
    code, out, _ = run(capsys, "ramsey", "ap3", "--coloring", str(tmp_path / "missing"))
    assert code == 2


def test_pr(capsys):
    code, out, _ = run(capsys, "pr", "rado", "--c", "1,1,1")
    assert code == 0 and out["result"]["rado_subset"] is None
    code, out, _ = run(capsys, "pr", "rado", "--c=1,-2,1")
    assert out["result"]["rado_subset"] == [1, 2, 3]
    code, out, _ = run(capsys, "pr", "search", "--c=1,1,-1", "-r", "2", "-N", "4")
    assert out["result"]["coloring"] == [1, 2, 2, 1]
    code, out, _ = run(capsys, "pr", "search", "--c=1,-2,1", "-r", "2", "-N", "9", "--injective")
    assert out["result"]["coloring"] is None and out["result"]["exhausted"]
    code, out, _ = run(capsys, "pr", "search", "--square", "-r", "2", "-N", "20")
    assert out["result"]["coloring"] is None
    code, out, _ = run(capsys, "pr", "solve", "--square", "--coloring", "1,1,1")
    assert out["result"]["solution"] == [1, 3, 2]
    code, out, _ = run(capsys, "pr", "quintic", "-N", "100")
    assert out["result"]["monochromatic_count"] == 1
    assert out["result"]["examples"] == [[50, 50, 10]]
    code, out, _ = run(capsys, "pr", "coeffs", "--c=1,-2,1")
    assert out["result"]["solution"]["a"] == [1, 2]
    assert out["result"]["matrix"]["combination"] == [0, 0, 0]
    code, out, _ = run(capsys, "pr", "search", "-r", "2", "-N", "4")
    assert code == 2


def test_strings(capsys):
    code, out, _ = run(capsys, "strings", "eq", "2,0,1", "2,2,1")
    assert code == 0 and out["result"]["equivalent"] is True
    code, out, _ = run(capsys, "strings", "canon", "2,0,1")
    assert out["result"]["canonical"] == [2, 1]


def test_usage_errors(capsys):
    code, out, _ = run(capsys, "density", "periodic p=0 r=0")
    assert code == 2 and out["error"]["kind"] == "usage"
    assert run(capsys, "nosuch")[0] == 2
    assert run(capsys, "pr", "rado", "--c", "a,b")[0] == 2
    assert run(capsys, "density", "periodic p=2 r=0", "--window", "5..1", "--L", "2")[0] == 2


def test_resource_limits(capsys):
    code, out, _ = run(capsys, "--max-window", "100", "density", "periodic p=2 r=0",
                       "--window", "1..1000", "--L", "3")
    assert code == 3 and out["error"]["kind"] == "resource_limit"
    code, out, _ = run(capsys, "pr", "search", "--c=1,1,-1", "-r", "3", "-N", "14",
                       "--max-nodes", "100")
    assert code == 3 and out["limits"]["max_search_nodes"] == 100


def test_help_lists_every_subcommand(capsys):
    with pytest.raises(SystemExit):
        cli.build_parser().parse_args(["--help"])
    text = capsys.readouterr().out
    for name in ("density", "structure", "embed", "jin", "ramsey", "pr", "strings", "replay"):
        assert name in text


def test_manifest_and_replay(capsys, tmp_path):
    path = tmp_path / "run.json"
    code, out, _ = run(capsys, "--threads", "2", "pr", "search", "--c=1,1,-1", "-r", "3",
                       "-N", "13", "--manifest", str(path))
    manifest = json.loads(path.read_text())
    assert "threads" not in manifest["inputs"] and "--threads" not in manifest["argv"]
    assert manifest["result"] == out["result"] and "timing" in manifest
    for threads in ("1", "8"):
        code, again, _ = run(capsys, "replay", str(path), "--threads", threads)
        assert code == 0 and again == out
    manifest["result"]["nodes"] += 1
    path.write_text(json.dumps(manifest))
    assert run(capsys, "replay", str(path))[0] == 1


def test_env_threads(monkeypatch, capsys):
    monkeypatch.setenv("HYPERCOMB_THREADS", "3")
    code, out, _ = run(capsys, "pr", "search", "--c=1,1,-1", "-r", "2", "-N", "5")
    assert code == 0 and "threads" not in out["inputs"]


def test_console_script():
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "hypercomb", "strings", "eq", "2,0,1", "2,2,1"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["equivalent"] is True
    assert proc.stderr.startswith("hypercomb strings eq")
