"""Smoke tests for the Python surface.

The heavy verification lives in the C++ suites; here we only confirm that the
bindings expose the same documents the command line emits and that the basic
numbers survive the JSON round trip.
"""

import json

import pytest

import nonlocal_ot as nlot

EXPECTED_CATALOG = [
    "pr-from-ot",
    "ok-from-pr",
    "ok-from-ot",
    "ot-from-pr",
    "pr-from-ok",
    "ot-from-ok",
    "ot-from-to",
    "ok-from-ko",
]


def test_catalog_names():
    assert nlot.catalog_names() == EXPECTED_CATALOG


def test_primitive_tables_and_signaling():
    box = nlot.primitive("pr")
    assert box["name"] == "pr"
    assert "rows" in box
    assert nlot.is_non_signaling("pr")
    assert nlot.is_non_signaling("ok")
    assert not nlot.is_non_signaling("ot")
    with pytest.raises(Exception):
        nlot.primitive("teleporter")


def test_verify_single_and_all():
    report = nlot.verify("pr-from-ot")
    assert report["protocol"] == "pr-from-ot"
    assert report["allPass"] is True
    assert report["worlds"] == 8

    reports = nlot.verify_all()
    assert len(reports) == 8
    assert all(r["allPass"] for r in reports)
    # worker count is irrelevant to the result
    assert nlot.verify_all(workers=4) == reports


def test_run_trace_is_exact():
    # The documented example world: secrets (1,0), choice 1, shared coin 0.
    trace = nlot.run("ot-from-pr", res_tape="0", in_a=2, in_b=1)
    assert trace["world"]["inA"] == "10"
    assert trace["outB"] == "0"
    assert trace["transcript"] == [{"dir": "A->B", "bit": "1"}]
    assert trace["viewB"]["msgsIn"] == "1"
    with pytest.raises(Exception):
        nlot.run("ot-from-pr", res_tape="00")


def test_search_and_membership():
    empty = nlot.search_preset("ot-from-pr-0bit")
    assert empty["correctAndPrivate"] == 0
    assert empty["exhausted"] is True

    found = nlot.search("ot-from-pr", bits=1)
    assert found["correctAndPrivate"] == 8
    names = [w["matchesCatalog"] for w in found["witnesses"]]
    assert names.count("ot-from-pr") == 1

    member = nlot.search_preset("ot-from-ok-3bit")
    assert member["withinSpace"] is True
    assert member["report"]["allPass"] is True


def test_mutants_all_flip_something():
    mutants = nlot.mutants()
    assert len(mutants) == 16
    assert all(
        m["breaksCorrectness"] or m["breaksPrivacyA"] or m["breaksPrivacyB"]
        for m in mutants
    )
    assert len({m["id"] for m in mutants}) == 16


def test_chsh_matches_cli():
    doc = nlot.chsh("pr-variant")
    assert doc["p_value"] == "1/1"
    assert doc["correlator"] == "4/1"
    assert doc["violates_local"] is True
    assert doc["violates_quantum"] is True

    singlet = nlot.chsh()
    assert singlet["behavior"] == "singlet"
    assert abs(singlet["p_value"] - 0.25) < 1e-9

    code, out, _ = nlot.cli(["chsh", "pr-variant"])
    assert code == 0
    assert json.loads(out) == doc


def test_singlet_quarter_table():
    table = nlot.singlet_stats()["p"]
    flat = [table[0][0], table[0][1], table[1][0], table[1][1]]
    for got, want in zip(flat, [0.0, 0.25, 0.25, 0.75]):
        assert abs(got - want) < 1e-9


def test_cli_round_trip():
    code, out, err = nlot.cli(["list"])
    assert code == 0
    assert err == ""
    assert out.count("\n") == 8
    assert "ot-from-to: 1 bit" in out

    code, _, _ = nlot.cli(["verify", "--mutant", "ot-from-ok:no-mask"])
    assert code == 1
    code, _, err = nlot.cli(["run", "ot-from-nowhere"])
    assert code == 2
    assert "error" in err
