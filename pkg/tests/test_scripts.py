from collections import Counter

import pytest

from duelhalt.carddb import lookup
from duelhalt.engine import Phase, validate_run
from duelhalt.engine.rules import spell_counters
from duelhalt.errors import InsufficientCounters, NotLoopReady, ZeroTarget
from duelhalt.scripts import (
    decrement_cycle,
    flintlock_gain,
    increment_cycle,
    set_counters,
    turn_tick,
)


def _cid(name):
    return lookup(name).id


def names(cards):
    return sorted(lookup_name(c) for c in cards)


def lookup_name(cid):
    from duelhalt.carddb import card_name
    return card_name(cid)


HAND_A = sorted([
    "Yata-Garasu", "Bait Doll", "Upstart Goblin", "Book of Eclipse",
    "Desert Sunlight",
])


class TestSetupA:
    def test_validates(self, board_a):
        assert validate_run(board_a.run)

    def test_final_hand(self, board_a):
        assert names(board_a.final.players[0].hand) == HAND_A

    def test_decks_empty(self, board_a):
        p1 = board_a.final.players[0]
        assert p1.deck == () and p1.extra_deck == ()

    def test_field(self, board_a):
        p1 = board_a.final.players[0]
        monsters = sorted(m.name for m in p1.monsters if m is not None)
        assert monsters == ["Magician of Faith", "Magician of Faith",
                            "Mask of Darkness", "Vanity's Ruler"]
        assert all(m.face_up for m in p1.monsters if m is not None)
        assert p1.field_zone.name == "Magical Citadel of Endymion"
        assert p1.field_zone.counters == 0 and p1.field_zone.face_up
        sts = {(s.name, s.face_up) for s in p1.spelltraps if s is not None}
        assert sts == {("Temple of the Kings", True), ("Localized Tornado", False)}

    def test_graveyard_parks_the_loop_pair(self, board_a):
        gy = board_a.final.players[0].gy
        assert _cid("Endymion, the Master Magician") in gy
        assert _cid("Offerings to the Doomed") in gy

    def test_opponent_side(self, board_a):
        p2 = board_a.final.players[1]
        assert p2.hand == () and p2.gy == () and p2.banished == ()
        assert all(m is None for m in p2.monsters)
        sts = sorted(s.name for s in p2.spelltraps if s is not None)
        assert sts == ["Massivemorph", "Pole Position"]
        morph = next(s for s in p2.spelltraps if s is not None and s.name == "Massivemorph")
        target = board_a.final.instance_at(morph.equipped_to)
        assert target.name == "Vanity's Ruler"

    def test_conservation(self, board_a):
        first = board_a.run.configs[0].card_census()
        last = board_a.final.card_census()
        assert first == last


class TestSetupB:
    def test_validates(self, board_b):
        assert validate_run(board_b.run)

    def test_final_hand_adds_raigeki(self, board_b):
        assert names(board_b.final.players[0].hand) == sorted(HAND_A + ["Raigeki"])

    def test_extra_zone_dragon(self, board_b):
        ez = board_b.final.players[0].extra_zone
        assert ez is not None and ez.name == "Starving Venemy Dragon" and ez.face_up

    def test_attraffic_active(self, board_b):
        sts = [s.name for s in board_b.final.players[0].spelltraps if s is not None and s.face_up]
        assert "Attraffic Control" in sts

    def test_opponent_board(self, board_b):
        p2 = board_b.final.players[1]
        monsters = Counter(m.name for m in p2.monsters if m is not None)
        assert monsters == Counter({
            "Flint Lock": 2,
            "Protector of the Sanctuary": 1,
            "Clara & Rushka, the Ventriloduo": 1,
        })
        assert p2.extra_zone is None  # the pair sits in a main zone
        prot = next(m for m in p2.monsters if m is not None
                    and m.name == "Protector of the Sanctuary")
        assert prot.negated
        sts = sorted(s.name for s in p2.spelltraps if s is not None)
        assert sts == ["Flint", "Massivemorph", "Mist Body", "Morale Boost",
                       "Pole Position"]
        flint = next(s for s in p2.spelltraps if s is not None and s.name == "Flint")
        assert board_b.final.instance_at(flint.equipped_to).name == \
            "Clara & Rushka, the Ventriloduo"
        morph = next(s for s in p2.spelltraps if s is not None and s.name == "Massivemorph")
        assert board_b.final.instance_at(morph.equipped_to).name == \
            "Starving Venemy Dragon"
        assert p2.hand == () and p2.gy == () and p2.banished == ()

    def test_conservation(self, board_b):
        first = board_b.run.configs[0].card_census()
        last = board_b.final.card_census()
        assert first == last


class TestLoops:
    def test_increment_delta(self, board_a):
        res = increment_cycle(board_a.final)
        assert spell_counters(res.final) == 3
        res2 = increment_cycle(res.final)
        assert spell_counters(res2.final) == 6

    def test_two_cycles_same_non_counter_board(self, board_a):
        one = increment_cycle(increment_cycle(board_a.final).final).final
        two = increment_cycle(one).final
        assert names(one.players[0].hand) == names(two.players[0].hand)
        assert [m and m.name for m in one.players[0].monsters] == \
            [m and m.name for m in two.players[0].monsters]
        assert spell_counters(two) - spell_counters(one) == 3

    def test_decrement(self, board_a):
        six = set_counters(board_a.final, 6).final
        res = decrement_cycle(six)
        assert spell_counters(res.final) == 1
        assert res.final.skip_draw[0]

    def test_decrement_needs_six(self, board_a):
        five = set_counters(board_a.final, 5).final
        with pytest.raises(InsufficientCounters):
            decrement_cycle(five)

    def test_decrement_from_eleven(self, board_a):
        res = decrement_cycle(set_counters(board_a.final, 11).final)
        assert spell_counters(res.final) == 6

    def test_set_counters_exact(self, board_a):
        for n in (1, 2, 7, 17, 40):
            assert spell_counters(set_counters(board_a.final, n).final) == n

    def test_set_counters_zero_target(self, board_a):
        with pytest.raises(ZeroTarget):
            set_counters(board_a.final, 0)

    def test_set_counters_not_loop_ready(self, board_a):
        with pytest.raises(NotLoopReady):
            set_counters(board_a.run.configs[0], 3)

    def test_loop_fragment_transitions_validate(self, board_a):
        from duelhalt.engine.rules import transition_ok

        res = set_counters(board_a.final, 9)
        for i, mv in enumerate(res.run.moves):
            assert transition_ok(res.run.configs[i], res.run.configs[i + 1], mv)


class TestTurnTick:
    def test_counters_and_skip(self, board_a):
        res = turn_tick(board_a.final)
        assert spell_counters(res.final) == 1
        assert res.final.active == 0 and res.final.phase == Phase.MAIN1

    def test_opponent_never_draws(self, board_a):
        res = turn_tick(board_a.final)
        res2 = turn_tick(res.final)
        for conf in res2.run.configs:
            assert len(conf.players[1].hand) == 0
        assert spell_counters(res2.final) == 2

    def test_tick_on_second_board(self, board_b):
        res = turn_tick(board_b.final)
        assert spell_counters(res.final) == 1
        res2 = turn_tick(res.final)
        assert spell_counters(res2.final) == 2


class TestFlintlock:
    def _their_turn(self, board_b):
        from duelhalt.strategy import drive_to_choice
        from duelhalt.reductions import reduce_nis
        from duelhalt.tm import CURATED

        out = reduce_nis(CURATED["identity"])
        run = drive_to_choice(out.run, out.strategy)
        assert run is not None
        return run.last()

    def test_gain_exact(self, board_b):
        conf = self._their_turn(board_b)
        base_lp = conf.players[1].lp
        for k in (0, 1, 3, 7):
            res = flintlock_gain(conf, k)
            assert res.final.players[1].lp - base_lp == 1000 * k
            flint = next(s for s in res.final.players[1].spelltraps
                         if s is not None and s.name == "Flint")
            target = res.final.instance_at(flint.equipped_to)
            assert target.name == "Clara & Rushka, the Ventriloduo"
