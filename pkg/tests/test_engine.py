import random

import pytest

from duelhalt.carddb import deck_a, filler_deck, lookup
from duelhalt.engine import (
    ActivateEffect,
    AdvancePhase,
    DrawCard,
    Pass,
    Phase,
    Run,
    apply,
    can_act,
    decode_configuration,
    encode_configuration,
    initial_configuration,
    is_winning_state,
    legal_moves,
    transition_ok,
    validate_run,
)
from duelhalt.engine.config import HAND, update_player
from duelhalt.engine.moves import decode_move, encode_move
from duelhalt.engine.rules import identity_order, is_initial
from duelhalt.errors import IllegalDeck, IllegalMove, MalformedCode
from duelhalt.scripts import increment_cycle


def fresh():
    a = deck_a()
    f = filler_deck()
    return initial_configuration(a, f, identity_order(a), identity_order(f))


def test_initial_configuration_shape():
    conf = fresh()
    assert is_initial(conf)
    assert conf.lp == (8000, 8000)
    assert len(conf.players[0].deck) == 43
    assert conf.players[0].gy == () and conf.players[1].gy == ()
    assert all(m is None for m in conf.players[0].monsters)


def test_initial_configuration_rejects_bad_permutation():
    a, f = deck_a(), filler_deck()
    with pytest.raises(IllegalDeck):
        initial_configuration(a, f, (0,) * len(a.main), identity_order(f))


def test_opening_draw_is_the_only_move():
    conf = fresh()
    assert legal_moves(conf, 0) == [DrawCard(0)]
    assert legal_moves(conf, 1) == []


def test_draw_phase_mandatory_draw():
    conf = fresh()
    for _ in range(5):
        conf = apply(conf, DrawCard(0))
    for _ in range(5):
        conf = apply(conf, DrawCard(1))
    conf = apply(conf, Pass(0))
    # the starting player skips the first draw entirely
    assert conf.turn == 1 and conf.draw_done
    conf = apply(conf, Pass(0))
    conf = apply(conf, Pass(0))
    assert conf.phase == Phase.MAIN1


def test_apply_rejects_illegal_move():
    conf = fresh()
    with pytest.raises(IllegalMove):
        apply(conf, DrawCard(1))


def test_apply_pass_cedes_priority_when_window_exists(board_a):
    # on the finished board it is our main phase with a set trap of ours;
    # passing hands the opponent nothing, so the phase advances
    conf = board_a.final
    nxt = apply(conf, Pass(0))
    assert nxt.phase == Phase.BATTLE


def test_transition_ok_definitional(board_a):
    conf = board_a.final
    mv = Pass(0)
    nxt = apply(conf, mv)
    assert transition_ok(conf, nxt, mv)
    assert not transition_ok(conf, conf, AdvancePhase(0))


def test_transition_ok_rejects_tampered_lp(board_a):
    conf = board_a.final
    mv = Pass(0)
    nxt = apply(conf, mv)
    tampered = update_player(nxt, 1, lp=nxt.players[1].lp - 100)
    assert not transition_ok(conf, tampered, mv)


def test_validate_run_single_initial():
    conf = fresh()
    assert validate_run(Run((conf,), ()))


def test_validate_run_full_setup(board_a):
    assert validate_run(board_a.run)


def test_validate_run_detects_swap(board_a):
    configs = list(board_a.run.configs)
    configs[100], configs[101] = configs[101], configs[100]
    assert not validate_run(Run(tuple(configs), board_a.run.moves))


def test_is_winning_state_lp():
    conf = fresh()
    conf = update_player(conf, 1, lp=0)
    assert is_winning_state(conf, 0)
    assert not is_winning_state(conf, 1)
    assert not is_winning_state(fresh(), 0)


def test_is_winning_state_deck_out():
    conf = fresh()
    # their mandatory draw with an empty deck loses on the spot
    conf = update_player(conf, 1, deck=())
    conf = conf.__class__(
        players=conf.players, turn=2, active=1, phase=Phase.DRAW,
        priority=1, draw_done=False,
    )
    assert is_winning_state(conf, 0)
    assert legal_moves(conf, 1) == []


def test_locked_board_opponent_can_only_pass(board_a):
    # after one sustaining macro turn the lock is armed: walk into their
    # turn and check every window offers nothing but Pass
    from duelhalt.scripts import turn_tick

    tick = turn_tick(board_a.final)
    seen_their_priority = 0
    for conf in tick.run.configs:
        if conf.active == 1 and conf.priority == 1:
            seen_their_priority += 1
            their_moves = legal_moves(conf, 1)
            assert their_moves == [] or all(isinstance(m, Pass) for m in their_moves)
    assert seen_their_priority > 0


def test_can_act_on_own_turn(board_a):
    assert can_act(Run((board_a.final,), ()))


def test_legal_moves_contains_loop_opener(board_a):
    moves = legal_moves(board_a.final, 0)
    boe = lookup("Book of Eclipse").id
    assert any(
        isinstance(m, ActivateEffect) and m.effect == "boe_flip_all"
        and m.source == (0, HAND, boe)
        for m in moves
    )
    assert any(isinstance(m, Pass) for m in moves)


def test_legal_moves_all_apply(board_a):
    conf = board_a.final
    moves = legal_moves(conf, 0)
    assert len(moves) == len(set(moves))
    assert len(moves) <= 10_000
    for mv in moves:
        apply(conf, mv)


def test_configuration_codec_roundtrip(board_a):
    conf = board_a.final
    code = encode_configuration(conf)
    assert decode_configuration(code) == conf
    assert encode_configuration(apply(conf, Pass(0))) != code


def test_counter_difference_changes_code(board_a):
    c1 = increment_cycle(board_a.final).final
    c2 = increment_cycle(c1).final
    assert encode_configuration(c1) != encode_configuration(c2)


def test_decode_rejects_random_codes():
    rng = random.Random(7)
    rejected = 0
    for _ in range(300):
        code = rng.randrange(1, 10**40)
        try:
            decode_configuration(code)
        except MalformedCode:
            rejected += 1
    assert rejected >= 295


def test_move_codec_roundtrip(board_a):
    for mv in board_a.run.moves:
        assert decode_move(encode_move(mv)) == mv


def test_apply_deterministic(board_a):
    conf = board_a.final
    for mv in legal_moves(conf, 0)[:20]:
        a, b = apply(conf, mv), apply(conf, mv)
        assert a == b
        assert encode_configuration(a) == encode_configuration(b)


def test_can_act_false_on_their_bare_turn():
    # their draw phase, nothing of ours set or summonable: we can only watch
    from duelhalt.engine.config import Phase as _P

    conf = fresh()
    for _ in range(5):
        conf = apply(conf, DrawCard(0))
    for _ in range(5):
        conf = apply(conf, DrawCard(1))
    conf = apply(conf, Pass(0))
    while conf.turn == 1:
        conf = apply(conf, Pass(conf.priority))
    assert conf.active == 1 and conf.phase == _P.DRAW
    assert not can_act(Run((conf,), ()))
