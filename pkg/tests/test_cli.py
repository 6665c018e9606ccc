from duelhalt.cli import main
from duelhalt.trace import replay_trace


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_cards_listing(capsys):
    code, out = run_cli(capsys, "cards")
    assert code == 0
    assert "43 main" in out and "46 main" in out


def test_cards_lookup(capsys):
    code, out = run_cli(capsys, "cards", "yata garasu")
    assert code == 0 and "Yata-Garasu" in out


def test_setup_verify(capsys):
    code, out = run_cli(capsys, "setup", "--deck", "a", "--verify")
    assert code == 0
    assert out.strip().endswith("verdict=OK")


def test_setup_bad_deck_is_usage_error(capsys):
    assert main(["setup", "--deck", "c"]) == 2


def test_setup_trace_replays(tmp_path, capsys, board_a):
    path = tmp_path / "a.trace"
    code, _out = run_cli(capsys, "setup", "--deck", "a", "--trace", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert len(lines) == len(board_a.run.moves)
    replayed = replay_trace(lines, board_a.run.configs[0])
    assert replayed.last() == board_a.final


def test_counters_set(capsys):
    code, out = run_cli(capsys, "counters", "--deck", "a", "--set", "9")
    assert code == 0 and "counters=9" in out


def test_check_win_halting(capsys):
    code, out = run_cli(
        capsys, "check-win", "--reduce", "halting", "--machine", "empty",
        "--max-turns", "120",
    )
    assert code == 0
    assert out.strip().endswith("verdict=WIN")


def test_check_win_wo_undetermined(capsys):
    code, out = run_cli(
        capsys, "check-win", "--reduce", "wo", "--order", "omega-reverse",
        "--max-turns", "14", "--max-number", "3",
    )
    assert code == 0
    assert out.strip().endswith("verdict=UNDETERMINED")


def test_reduce_emits_valid_run(capsys, tmp_path):
    path = tmp_path / "nis.trace"
    code, out = run_cli(
        capsys, "reduce", "--reduce", "nis", "--machine", "successor",
        "--trace", str(path),
    )
    assert code == 0 and "valid=True" in out
    assert path.exists()


def test_tree_command(capsys):
    code, out = run_cli(
        capsys, "tree", "--reduce", "halting", "--machine", "empty",
        "--depth", "20", "--max-turns", "120",
    )
    assert code == 0
    assert "verdict=WELL-FOUNDED" in out


def test_compile_tm(tmp_path, capsys):
    prog = tmp_path / "succ.tm"
    prog.write_text("start a\nblank 0\nhalt h\na 1 -> a 0 R\na 0 -> h 1 S\n")
    code, out = run_cli(capsys, "compile-tm", str(prog))
    assert code == 0 and "index=2" in out


def test_duel_scripted_resign(tmp_path, capsys):
    script = tmp_path / "numbers.txt"
    script.write_text("q\n")
    code, out = run_cli(
        capsys, "duel", "--interactive", "--script", str(script),
        "--machine", "identity",
    )
    assert code == 0 and "resigns" in out


def test_duel_scripted_chain_then_mismatch(tmp_path, capsys):
    # the identity chain: triple (0,0,1) codes to 5, pairs (0,1) to 2;
    # then a wrong number triggers the sweep
    script = tmp_path / "numbers.txt"
    script.write_text("5\n2\n2\n1\n0\n0\n0\n0\n")
    code, out = run_cli(
        capsys, "duel", "--interactive", "--script", str(script),
        "--machine", "identity", "--max-rounds", "12",
    )
    assert code == 0
    assert "verdict=WIN" in out


def test_setup_verify_diffs_the_documented_board(capsys):
    code, out = run_cli(capsys, "setup", "--deck", "b", "--verify")
    assert code == 0 and "documented board" in out


def test_order_parse_failure_exits_2(tmp_path, capsys):
    bad = tmp_path / "order.txt"
    bad.write_text("finite 2\n1 1\n")
    assert main(["check-win", "--reduce", "wo", "--order-file", str(bad)]) == 2
