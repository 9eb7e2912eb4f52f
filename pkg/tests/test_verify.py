"""Self-check harness tests, including a negative control for the gates."""
from chunkpair.lz_parse import Literal, ParseList
from chunkpair.verify import run_verification


def test_clean_run_passes():
    rep = run_verification(cases=40, seed=1, oracle_cap=30_000, max_length=20_000)
    assert rep.ok, rep.failures
    assert rep.cases == 40
    assert rep.roundtrips == 40
    assert rep.parse_checks > 0 and rep.formula_checks > 0


def test_gates_fire_on_a_broken_parser():
    def all_literal_parse(data, config=None, engine="auto"):
        # repeats characters as literals: invalid whenever any byte repeats
        phrases = [Literal(i + 1, ch) for i, ch in enumerate(data)]
        return ParseList(phrases, len(data))

    rep = run_verification(
        cases=25, seed=1, oracle_cap=10_000, max_length=5_000,
        rparse_fn=all_literal_parse,
    )
    assert not rep.ok
    assert any("parse" in f or "literal" in f or "valid" in f for f in rep.failures)


def test_progress_callback_sees_every_case():
    seen = []
    rep = run_verification(
        cases=8, seed=2, oracle_cap=5_000, max_length=4_000, progress=seen.append
    )
    assert rep.ok
    assert len(seen) >= 8
