import pytest

from househunt.cli import run


def out(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_house(capsys):
    code, text, _ = out(capsys, "house", "--half", "1 3")
    assert code == 0 and text.split()[0] == "2.61803398874989"
    code, text, _ = out(capsys, "house", "--tsv", "1 0 0 0 1 1 0 1 0 0 0 1", "--half", "x")
    assert code == 2


def test_house_rejects_repeated_factor(capsys):
    code, _, err = out(capsys, "house", "1 2 1")
    assert code == 2 and "repeated factor" in err


def test_measure_and_classify(capsys):
    code, text, _ = out(capsys, "measure", "--tsv", "1 0 -1 -1")
    assert code == 0 and text.split("\t")[1] == "1.32471795724475"
    code, text, _ = out(capsys, "classify", "1 1 1")
    assert text.strip() == "RootOfUnity\tPhi_3"
    code, text, _ = out(capsys, "classify", "--half", "1 0 1 1 0 1")
    assert text.strip() == "Candidate"


def test_bounds_row(capsys):
    code, text, _ = out(capsys, "bounds", "--degree", "10", "--reciprocal", "--tsv")
    cols = text.strip().split("\t")
    assert code == 0 and cols[0] == "10" and cols[3] == "1.12571482154239"
    assert out(capsys, "bounds", "--degree", "4", "--reciprocal")[0] == 2


def test_search(capsys):
    code, text, err = out(capsys, "search", "--degree", "4", "--height", "3", "--tsv")
    first = text.splitlines()[0].split("\t")
    assert code == 0 and first[3] == "1 1 3" and first[1] == "1.53922233842043"
    assert err == ""


def test_search_deterministic_across_shards(capsys):
    a = out(capsys, "search", "--degree", "8", "--height", "1", "--tsv")[1]
    b = out(capsys, "search", "--degree", "8", "--height", "1", "--tsv", "--jobs", "3")[1]
    c = out(capsys, "search", "--degree", "8", "--height", "1", "--tsv")[1]
    assert a == b == c


def test_search_usage(capsys):
    assert out(capsys, "search", "--degree", "5")[0] == 2
    assert out(capsys, "search", "--degree", "4", "--shard", "3/2")[0] == 2
    assert out(capsys, "search", "--degree", "2", "--height", "1")[0] == 1
    assert out(capsys, "frobnicate")[0] == 2
    assert out(capsys, "house", "--unknown-flag", "1 3")[0] == 2


def test_verify_exit_codes(capsys):
    code, text, _ = out(capsys, "verify", "--table", "T1", "--tsv")
    assert code == 0 and len([l for l in text.splitlines() if l.startswith("T1\t") and "PASS" in l]) >= 17
    assert out(capsys, "verify", "--table", "T3")[0] == 1


def test_predict_and_generate(capsys):
    code, text, _ = out(capsys, "predict", "--degree", "30", "--tsv")
    cols = text.split("\t")
    assert code == 0 and cols[1] == "1.04026214469874" and cols[2] == "10"
    code, text, _ = out(capsys, "generate", "--family", "prime5mod6", "--degree", "17")
    assert text.split("\t")[-1].strip() == "1 1 0 -1 -1 0 1 1 0 -1 -1 0 1 1 0 -1 -1 -1"
    assert out(capsys, "generate", "--family", "prime5mod6", "--degree", "8")[0] == 2
