import json
from pathlib import Path

import pytest

import qacg

DATA = Path(__file__).resolve().parents[1] / "data"
ARTICLES = DATA / "articles.jsonl"
FIXTURES = DATA / "fixtures.json"


def test_generate_claims_is_sound_and_deterministic():
    claims = qacg.generate_claims(ARTICLES, FIXTURES, seed=3, window=2, stride=2)
    labels = {c.label for c in claims}
    assert labels == {qacg.Label.SUPPORTED, qacg.Label.REFUTED, qacg.Label.NEI}
    assert all(c.violation() is None for c in claims)
    again = qacg.generate_claims(ARTICLES, FIXTURES, seed=3, window=2, stride=2, workers=4)
    assert qacg.claims_to_jsonl(claims) == qacg.claims_to_jsonl(again)
    for c in claims:
        if c.label == qacg.Label.SUPPORTED:
            assert c.answer in c.evidence
        if c.label == qacg.Label.REFUTED:
            assert not qacg.overlaps(c.answer, c.replacement)


def test_round_trip_and_balance(tmp_path):
    claims = qacg.generate_claims(ARTICLES, FIXTURES, seed=1, window=2, stride=2)
    path = tmp_path / "claims.jsonl"
    qacg.write_claims(path, claims)
    assert qacg.read_claims(path) == claims
    first = json.loads(path.read_text().splitlines()[0])
    assert set(first) >= {"id", "claim", "label", "evidence", "provenance"}

    n = min(sum(c.label == l for c in claims) for l in qacg.Label.__members__.values())
    balanced = qacg.filter_balanced(claims, n, seed=42)
    assert len(balanced) == 3 * n
    with pytest.raises(qacg.DataError):
        qacg.filter_balanced(claims, len(claims) + 1)


def test_metrics():
    S, R = qacg.Label.SUPPORTED, qacg.Label.REFUTED
    report = qacg.macro_prf([S, S, R, R], [S, R, R, R])
    assert report["space"] == "SR"
    assert report["macro"][2] == pytest.approx(0.7333, abs=1e-3)
    assert qacg.bleu4([["a", "b", "c", "d", "e"]], [["a", "b", "c", "d", "f"]]) == pytest.approx(0.6687, abs=1e-3)
    assert qacg.rouge_l(["a", "b", "c", "d"], ["a", "c", "b", "d"]) == pytest.approx((0.75, 0.75, 0.75))
    bands = qacg.perplexity_bands([5.0, 1.0, 9.0, 3.0, 7.0, 2.0, 8.0, 4.0, 6.0])
    assert sorted(b.name for b in bands).count("NEI") == 3


def test_cli_entry_point(tmp_path):
    out = tmp_path / "claims.jsonl"
    code, stdout, stderr = qacg.run_cli(
        ["generate", "--articles", str(ARTICLES), "--fixtures", str(FIXTURES), "--out", str(out)]
    )
    assert code == 0, stderr
    assert "generated" in stdout
    assert (tmp_path / "claims.jsonl.manifest.json").exists()
    code, _, _ = qacg.run_cli([])
    assert code == 1
