"""Legal moves, the transition function, and the restricted card effects.

The fragment implements exactly the mechanics the constructions exercise:
draw with skip flags, normal/flip/special summons with tributes, sets,
activation of the construction cards' effects, equip retargeting, direct
and monster attacks with standard damage, the phase structure, the End
Phase hand limit, and resolution of the two specific chain shapes used by
the scripts (Desert Sunlight answered by Soul Drain; Give and Take copies
chained together).  Everything else is rejected as an illegal move.

Priority model: the turn player holds priority inside a phase.  A Pass
hands the window to the opponent when they have a usable quick effect
(set traps or set quick-play spells); otherwise, and after the opponent
passes, the phase advances.  ``AdvancePhase`` is accepted as an explicit
alias for a Pass that would advance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from ..carddb import FILLER, Kind, by_id, card_name
from ..errors import IllegalDeck, IllegalMove
from .config import fast_replace as replace
from .config import (
    ATK,
    DEF,
    EXTRA,
    EXTRADECK,
    FZONE,
    GY,
    HAND,
    HAND_LIMIT,
    MZONE,
    N_MZONES,
    N_SZONES,
    SZONE,
    CardInstance,
    Configuration,
    Loc,
    Phase,
    PlayerState,
    START_LP,
    update_player,
)
from .moves import (
    ActivateEffect,
    AdvancePhase,
    ChainLink,
    ChangeEquipTarget,
    DeclareAttack,
    DIRECT,
    DiscardToLimit,
    DrawCard,
    FlipSummon,
    Move,
    NormalSummon,
    Pass,
    SetSpellTrap,
)

_COMBO_CAP = 200  # enumeration cap for multi-target effects

from ..carddb import CARDS as _ALL_CARDS

_CID = {spec.name: spec.id for spec in _ALL_CARDS}

YATA = _CID["Yata-Garasu"]
PROTECTOR = _CID["Protector of the Sanctuary"]
MORPHING_JAR = _CID["Morphing Jar"]
VANITY = _CID["Vanity's Ruler"]
ENDYMION = _CID["Endymion, the Master Magician"]
MOF = _CID["Magician of Faith"]
MOD = _CID["Mask of Darkness"]
CITADEL = _CID["Magical Citadel of Endymion"]
TEMPLE = _CID["Temple of the Kings"]
BAIT_DOLL = _CID["Bait Doll"]
SOUL_DRAIN = _CID["Soul Drain"]
DESERT_SUNLIGHT = _CID["Desert Sunlight"]
MASSIVEMORPH = _CID["Massivemorph"]
POLE_POSITION = _CID["Pole Position"]
FLINT = _CID["Flint"]
FLINT_LOCK = _CID["Flint Lock"]
MIST_BODY = _CID["Mist Body"]
MORALE_BOOST = _CID["Morale Boost"]
ATTRAFFIC = _CID["Attraffic Control"]
CLARA = _CID["Clara & Rushka, the Ventriloduo"]
SVD = _CID["Starving Venemy Dragon"]
ODD_EYES = _CID["Odd-Eyes Pendulum Dragon"]
POLY = _CID["Polymerization"]
RAIGEKI = _CID["Raigeki"]


@dataclass(frozen=True)
class Run:
    configs: tuple[Configuration, ...]
    moves: tuple[Move, ...]

    def last(self) -> Configuration:
        return self.configs[-1]

    def extend(self, conf: Configuration, move: Move) -> "Run":
        return Run(self.configs + (conf,), self.moves + (move,))


# --- construction -------------------------------------------------------


def initial_configuration(deck1, deck2, order1, order2) -> Configuration:
    """Pre-game state: full decks in the given orders, nothing drawn."""
    deck1.validate()
    deck2.validate()
    piles = []
    extras = []
    for deck, order in ((deck1, order1), (deck2, order2)):
        if sorted(order) != list(range(len(deck.main))):
            raise IllegalDeck("order is not a permutation of the main deck")
        piles.append(tuple(deck.main[i] for i in order))
        extras.append(tuple(deck.extra))
    p0 = PlayerState(deck=piles[0], extra_deck=extras[0])
    p1 = PlayerState(deck=piles[1], extra_deck=extras[1])
    return Configuration(players=(p0, p1))


def identity_order(deck) -> tuple[int, ...]:
    return tuple(range(len(deck.main)))


# --- continuous-effect queries ------------------------------------------


def _controls_faceup(conf: Configuration, p: int, cid: int) -> Optional[Loc]:
    for loc, inst in conf.iter_spelltraps():
        if loc[0] == p and inst.card == cid and inst.face_up and not inst.negated:
            return loc
    for loc, inst in conf.iter_monsters():
        if loc[0] == p and inst.card == cid and inst.face_up and not inst.negated:
            return loc
    return None


def current_atk(conf: Configuration, loc: Loc, inst: CardInstance) -> int:
    spec = by_id(inst.card) if inst.card != FILLER else None
    atk = spec.stats.atk if spec is not None and spec.stats else 0
    for sloc, st in conf.iter_spelltraps():
        if st.equipped_to == loc and st.face_up:
            if st.card == MASSIVEMORPH:
                atk += 2000
            elif st.card == FLINT:
                atk -= 300
    return max(atk, 0)


def _pole_protected(conf: Configuration, loc: Loc, inst: CardInstance) -> bool:
    """Spell immunity for the highest-ATK face-up monsters under Pole Position."""
    if not inst.face_up:
        return False
    if not any(
        st.card == POLE_POSITION and st.face_up and not st.negated
        for _, st in conf.iter_spelltraps()
    ):
        return False
    best = max(
        (current_atk(conf, m_loc, m) for m_loc, m in conf.iter_monsters() if m.face_up),
        default=-1,
    )
    return current_atk(conf, loc, inst) == best


def _effect_draw_blocked(conf: Configuration, p: int) -> bool:
    """True when p cannot draw outside their own Draw Phase."""
    opp = 1 - p
    if _controls_faceup(conf, opp, PROTECTOR) is not None:
        return True
    if _controls_faceup(conf, opp, ATTRAFFIC) is not None:
        return True
    return False


def _special_summon_blocked(conf: Configuration, p: int) -> bool:
    return _controls_faceup(conf, 1 - p, VANITY) is not None


def _soul_drain_up(conf: Configuration) -> bool:
    return any(
        st.card == SOUL_DRAIN and st.face_up and not st.negated
        for _, st in conf.iter_spelltraps()
    )


def _citadel_loc(conf: Configuration) -> Optional[Loc]:
    for p in (0, 1):
        fz = conf.players[p].field_zone
        if fz is not None and fz.card == CITADEL and fz.face_up:
            return (p, FZONE, 0)
    return None


def spell_counters(conf: Configuration) -> int:
    loc = _citadel_loc(conf)
    if loc is None:
        return 0
    return conf.instance_at(loc).counters


def _temple_available(conf: Configuration, p: int) -> bool:
    # while the temple is up, traps may fire the turn they were set; the
    # counter loop leans on this several times per turn
    return _controls_faceup(conf, p, TEMPLE) is not None


# --- zone plumbing -------------------------------------------------------


def _set_slot(conf: Configuration, loc: Loc, inst: Optional[CardInstance]) -> Configuration:
    p, kind, idx = loc
    ps = conf.players[p]
    if kind == MZONE:
        zones = list(ps.monsters)
        zones[idx] = inst
        return update_player(conf, p, monsters=tuple(zones))
    if kind == SZONE:
        zones = list(ps.spelltraps)
        zones[idx] = inst
        return update_player(conf, p, spelltraps=tuple(zones))
    if kind == FZONE:
        return update_player(conf, p, field_zone=inst)
    if kind == EXTRA:
        return update_player(conf, p, extra_zone=inst)
    raise IllegalMove(f"bad zone in locator {loc}")


def _add_gy(conf: Configuration, p: int, cid: int) -> Configuration:
    ps = conf.players[p]
    return update_player(conf, p, gy=ps.gy + (cid,))


def _remove_hand(conf: Configuration, p: int, cid: int) -> Configuration:
    ps = conf.players[p]
    hand = list(ps.hand)
    if cid not in hand:
        raise IllegalMove(f"{card_name(cid)} is not in hand")
    hand.remove(cid)
    return update_player(conf, p, hand=tuple(hand))


def _add_hand(conf: Configuration, p: int, cid: int) -> Configuration:
    ps = conf.players[p]
    return update_player(conf, p, hand=tuple(sorted(ps.hand + (cid,))))


def _adjust_lp(conf: Configuration, p: int, delta: int) -> Configuration:
    ps = conf.players[p]
    return update_player(conf, p, lp=max(0, ps.lp + delta))


def _cleanup_dependents(conf: Configuration, gone: Loc) -> Configuration:
    """Destroy equips and targeted continuous traps watching a zone."""
    for sloc, st in list(conf.iter_spelltraps()):
        if st.equipped_to == gone:
            conf = _set_slot(conf, sloc, None)
            conf = _add_gy(conf, sloc[0], st.card)
    return conf


def _leave_field(conf: Configuration, loc: Loc, to: str) -> Configuration:
    """Move a monster off the field to its controller's gy/hand/deck."""
    inst = conf.instance_at(loc)
    conf = _set_slot(conf, loc, None)
    conf = _cleanup_dependents(conf, loc)
    p = loc[0]
    if to == "gy":
        conf = _add_gy(conf, p, inst.card)
    elif to == "hand":
        conf = _add_hand(conf, p, inst.card)
    elif to == "deck":
        ps = conf.players[p]
        conf = update_player(conf, p, deck=ps.deck + (inst.card,))
    return conf


def _flip_down(conf: Configuration, loc: Loc) -> Configuration:
    inst = conf.instance_at(loc)
    conf = _cleanup_dependents(conf, loc)
    return _set_slot(
        conf,
        loc,
        replace(inst, face_up=False, position=DEF, negated=False, face_since=conf.turn),
    )


def _flip_up(conf: Configuration, loc: Loc, position: int) -> Configuration:
    inst = conf.instance_at(loc)
    return _set_slot(
        conf,
        loc,
        replace(
            inst,
            face_up=True,
            position=position,
            face_since=conf.turn,
            summoned_turn=conf.turn,
        ),
    )


def _draw_cards(conf: Configuration, p: int, n: int, by_effect: bool) -> Configuration:
    if by_effect and _effect_draw_blocked(conf, p):
        return conf
    ps = conf.players[p]
    take = min(n, len(ps.deck))
    drawn, rest = ps.deck[:take], ps.deck[take:]
    return update_player(conf, p, deck=rest, hand=tuple(sorted(ps.hand + drawn)))


# --- flip effects --------------------------------------------------------


def _resolve_flip_trigger(
    conf: Configuration, loc: Loc, choice: Optional[Loc]
) -> Configuration:
    inst = conf.instance_at(loc)
    if inst is None or not inst.face_up or inst.negated or inst.card == FILLER:
        return conf
    p = loc[0]
    if inst.card == MORPHING_JAR:
        for q in (0, 1):
            ps = conf.players[q]
            gy = ps.gy + ps.hand
            conf = update_player(conf, q, hand=(), gy=gy)
        for q in (0, 1):
            conf = _draw_cards(conf, q, 5, by_effect=True)
        return conf
    if inst.card in (MOF, MOD):
        if choice is None:
            return conf
        cp, kind, idx = choice
        if cp != p or kind != GY:
            raise IllegalMove("flip recovery must target the controller's graveyard")
        ps = conf.players[p]
        if not 0 <= idx < len(ps.gy):
            raise IllegalMove("flip recovery index out of range")
        cid = ps.gy[idx]
        spec = by_id(cid) if cid != FILLER else None
        if spec is None:
            raise IllegalMove("cannot recover a filler card")
        if inst.card == MOF and not spec.is_spell:
            raise IllegalMove("Magician of Faith recovers spells only")
        if inst.card == MOD and not spec.is_trap:
            raise IllegalMove("Mask of Darkness recovers traps only")
        gy = ps.gy[:idx] + ps.gy[idx + 1 :]
        conf = update_player(conf, p, gy=gy)
        return _add_hand(conf, p, cid)
    return conf


def _flip_up_phase(conf: Configuration, p: int) -> tuple[Configuration, list[int]]:
    """Flip all of p's face-down monsters face-up in defense; no triggers yet."""
    flipped = []
    for i, inst in enumerate(conf.players[p].monsters):
        if inst is not None and not inst.face_up:
            conf = _flip_up(conf, (p, MZONE, i), DEF)
            flipped.append(i)
    return conf, flipped


def _run_flip_triggers(
    conf: Configuration, p: int, zones: list[int], choices: dict[int, Optional[Loc]]
) -> Configuration:
    for i in zones:
        conf = _resolve_flip_trigger(conf, (p, MZONE, i), choices.get(i))
    return conf


# --- effect handlers ------------------------------------------------------
#
# check(conf, p, source, targets, extras) raises IllegalMove;
# resolve(conf, p, source, targets, extras) -> Configuration.
# candidates(conf, p, source) yields (targets, extras) pairs for the
# enumerator (a bounded representative family for multi-choice effects).


def _gy_locs(conf: Configuration, p: int, pred) -> list[Loc]:
    out = []
    for idx, cid in enumerate(conf.players[p].gy):
        if pred(cid):
            out.append((p, GY, idx))
    return out


def _is_spell_cid(cid: int) -> bool:
    return cid != FILLER and by_id(cid).is_spell


def _is_trap_cid(cid: int) -> bool:
    return cid != FILLER and by_id(cid).is_trap


def _is_monster_cid(cid: int) -> bool:
    return cid == FILLER or by_id(cid).is_monster


def _own_empty_mzone(conf: Configuration, p: int) -> Optional[int]:
    for i, inst in enumerate(conf.players[p].monsters):
        if inst is None:
            return i
    return None


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise IllegalMove(msg)


def _chk_double_summon(conf, p, source, targets, extras):
    _require(not targets and not extras, "Double Summon takes no targets")


def _res_double_summon(conf, p, source, targets, extras):
    return replace(conf, normal_summon_allowance=conf.normal_summon_allowance + 1)


def _chk_pob(conf, p, source, targets, extras):
    _require(len(targets) == 2, "Pot of Benevolence returns exactly 2 cards")
    seen = set()
    for t in targets:
        _require(t[1] == GY, "targets must be graveyard cards")
        _require(0 <= t[2] < len(conf.players[t[0]].gy), "graveyard index out of range")
        _require(t not in seen, "duplicate target")
        seen.add(t)


def _res_pob(conf, p, source, targets, extras):
    by_player: dict[int, list[int]] = {0: [], 1: []}
    for t in targets:
        by_player[t[0]].append(t[2])
    for q, idxs in by_player.items():
        if not idxs:
            continue
        ps = conf.players[q]
        gy = list(ps.gy)
        cards = [gy[i] for i in sorted(idxs)]
        for i in sorted(idxs, reverse=True):
            del gy[i]
        conf = update_player(conf, q, gy=tuple(gy), deck=conf.players[q].deck + tuple(cards))
    return conf


def _cand_pob(conf, p, source):
    locs = _gy_locs(conf, 0, lambda c: True) + _gy_locs(conf, 1, lambda c: True)
    for combo in itertools.islice(itertools.combinations(locs, 2), _COMBO_CAP):
        yield combo, ()


def _chk_gmc(conf, p, source, targets, extras):
    _require(1 <= len(targets) <= 2, "Gold Moon Coin gives 1 or 2 cards")
    hand = list(conf.players[p].hand)
    if source[1] == HAND and source[2] in hand:
        hand.remove(source[2])  # the activated copy is already leaving
    for t in targets:
        _require(t[0] == p and t[1] == HAND, "targets must be your hand cards")
        cid = t[2]
        _require(cid in hand, "card not in hand")
        hand.remove(cid)
        spec = by_id(cid)
        _require(spec.is_spell or spec.is_trap, "only spells/traps can be given")


def _res_gmc(conf, p, source, targets, extras):
    for t in targets:
        conf = _remove_hand(conf, p, t[2])
        conf = _add_hand(conf, 1 - p, t[2])
    return conf


def _cand_gmc(conf, p, source):
    cards = sorted({c for c in conf.players[p].hand if c != FILLER and not by_id(c).is_monster})
    for c in cards:
        yield ((p, HAND, c),), ()
    for pair_ in itertools.islice(itertools.combinations(cards, 2), _COMBO_CAP):
        yield tuple((p, HAND, c) for c in pair_), ()


def _chk_soul_release(conf, p, source, targets, extras):
    _require(1 <= len(targets) <= 5, "Soul Release banishes 1-5 cards")
    seen = set()
    for t in targets:
        _require(t[1] == GY, "targets must be graveyard cards")
        _require(0 <= t[2] < len(conf.players[t[0]].gy), "graveyard index out of range")
        _require(t not in seen, "duplicate target")
        seen.add(t)


def _res_soul_release(conf, p, source, targets, extras):
    by_player: dict[int, list[int]] = {0: [], 1: []}
    for t in targets:
        by_player[t[0]].append(t[2])
    for q, idxs in by_player.items():
        if not idxs:
            continue
        ps = conf.players[q]
        gy = list(ps.gy)
        cards = [gy[i] for i in sorted(idxs)]
        for i in sorted(idxs, reverse=True):
            del gy[i]
        conf = update_player(
            conf, q, gy=tuple(gy), banished=tuple(sorted(conf.players[q].banished + tuple(cards)))
        )
    return conf


def _cand_soul_release(conf, p, source):
    locs = _gy_locs(conf, 0, lambda c: True) + _gy_locs(conf, 1, lambda c: True)
    count = 0
    for k in (1, 2, 3, 4, 5):
        for combo in itertools.combinations(locs, k):
            yield combo, ()
            count += 1
            if count >= _COMBO_CAP:
                return


def _chk_rain_of_mercy(conf, p, source, targets, extras):
    _require(not targets, "Rain of Mercy takes no targets")


def _res_rain_of_mercy(conf, p, source, targets, extras):
    conf = _adjust_lp(conf, 0, 1000)
    return _adjust_lp(conf, 1, 1000)


def _chk_upstart(conf, p, source, targets, extras):
    _require(not targets, "Upstart Goblin takes no targets")
    _require(len(conf.players[p].deck) >= 1, "no card to draw")
    _require(not _effect_draw_blocked(conf, p), "drawing outside the Draw Phase is blocked")


def _res_upstart(conf, p, source, targets, extras):
    conf = _draw_cards(conf, p, 1, by_effect=True)
    return _adjust_lp(conf, 1 - p, 1000)


def _chk_mst(conf, p, source, targets, extras):
    _require(len(targets) == 1, "Mystical Space Typhoon targets 1 spell/trap")
    t = targets[0]
    inst = conf.instance_at(t)
    _require(inst is not None and t[1] in (SZONE, FZONE), "target must be a spell/trap on the field")


def _res_mst(conf, p, source, targets, extras):
    t = targets[0]
    inst = conf.instance_at(t)
    if inst is None:
        return conf
    conf = _set_slot(conf, t, None)
    return _add_gy(conf, t[0], inst.card)


def _cand_mst(conf, p, source):
    for loc, _inst in conf.iter_spelltraps():
        yield (loc,), ()


def _chk_pot_desires(conf, p, source, targets, extras):
    _require(not targets, "Pot of Desires takes no targets")
    _require(len(conf.players[p].deck) >= 12, "need 10 to banish plus 2 to draw")
    _require(not _effect_draw_blocked(conf, p), "drawing outside the Draw Phase is blocked")


def _res_pot_desires(conf, p, source, targets, extras):
    ps = conf.players[p]
    banished, rest = ps.deck[:10], ps.deck[10:]
    conf = update_player(
        conf, p, deck=rest, banished=tuple(sorted(ps.banished + banished))
    )
    return _draw_cards(conf, p, 2, by_effect=True)


def _chk_pot_duality(conf, p, source, targets, extras):
    _require(len(extras) == 1 and 0 <= extras[0] < 3, "choose one of the top 3")
    _require(len(conf.players[p].deck) >= 3, "need 3 cards to excavate")


def _res_pot_duality(conf, p, source, targets, extras):
    ps = conf.players[p]
    top, rest = list(ps.deck[:3]), ps.deck[3:]
    chosen = top.pop(extras[0])
    conf = update_player(conf, p, deck=rest + tuple(top))
    return _add_hand(conf, p, chosen)


def _chk_offerings(conf, p, source, targets, extras):
    _require(len(targets) == 1, "Offerings to the Doomed targets 1 face-up monster")
    t = targets[0]
    inst = conf.instance_at(t)
    _require(inst is not None and t[1] in (MZONE, EXTRA) and inst.face_up,
             "target must be a face-up monster")
    _require(not _pole_protected(conf, t, inst), "target is protected from spells")


def _res_offerings(conf, p, source, targets, extras):
    t = targets[0]
    if conf.instance_at(t) is not None:
        conf = _leave_field(conf, t, "gy")
    skip = list(conf.skip_draw)
    skip[p] = True
    return replace(conf, skip_draw=tuple(skip))


def _cand_offerings(conf, p, source):
    for loc, inst in conf.iter_monsters():
        if inst.face_up and not _pole_protected(conf, loc, inst):
            yield (loc,), ()


def _chk_citadel(conf, p, source, targets, extras):
    _require(not targets, "field spell takes no targets")


def _res_citadel(conf, p, source, targets, extras):
    return conf  # placement handled by the activation wrapper


def _chk_temple(conf, p, source, targets, extras):
    _require(not targets, "Temple of the Kings takes no targets")


def _res_temple(conf, p, source, targets, extras):
    return conf


def _chk_bait_doll(conf, p, source, targets, extras):
    _require(len(targets) == 1, "Bait Doll targets 1 set card")
    t = targets[0]
    inst = conf.instance_at(t)
    _require(inst is not None and t[1] == SZONE and not inst.face_up,
             "target must be a set spell/trap")
    st_spec = by_id(inst.card)
    if st_spec.is_trap and inst.set_turn == conf.turn:
        _require(_temple_available(conf, t[0]), "trap was set this turn")


def _res_bait_doll(conf, p, source, targets, extras):
    t = targets[0]
    inst = conf.instance_at(t)
    if inst is not None and not inst.face_up:
        spec = by_id(inst.card)
        if spec.is_trap:
            conf = _set_slot(conf, t, replace(inst, face_up=True, face_since=conf.turn))
            eff = spec.effects[0]
            inner_targets, inner_extras = _unpack_forced(extras)
            if eff == "desert_sunlight_flip_up":
                # flips happen, the trap hits the graveyard, then triggers
                conf, zones = _flip_up_phase(conf, t[0])
                conf = _set_slot(conf, t, None)
                conf = _add_gy(conf, t[0], inst.card)
                choices = _decode_flip_choices(t[0], inner_extras)
                conf = _run_flip_triggers(conf, t[0], zones, choices)
            else:
                chk, res, _cand = EFFECTS[eff]
                chk(conf, t[0], t, inner_targets, inner_extras)
                conf = res(conf, t[0], t, inner_targets, inner_extras)
                if spec.kind == Kind.NORMAL_TRAP:
                    conf = _set_slot(conf, t, None)
                    conf = _add_gy(conf, t[0], inst.card)
    # Bait Doll shuffles itself into its owner's deck after resolving.
    ps = conf.players[p]
    conf = update_player(conf, p, deck=ps.deck + (BAIT_DOLL,))
    return conf


def _pack_forced(targets: tuple[Loc, ...], extras: tuple[int, ...]) -> tuple[int, ...]:
    flat = [len(targets)]
    for t in targets:
        flat.extend(t)
    flat.append(len(extras))
    flat.extend(extras)
    return tuple(flat)


def _unpack_forced(flat: tuple[int, ...]) -> tuple[tuple[Loc, ...], tuple[int, ...]]:
    if not flat:
        return (), ()
    i = 0
    n = flat[i]
    i += 1
    targets = []
    for _ in range(n):
        targets.append((flat[i], flat[i + 1], flat[i + 2]))
        i += 3
    m = flat[i]
    i += 1
    extras = tuple(flat[i : i + m])
    return tuple(targets), extras


def _chk_boe(conf, p, source, targets, extras):
    _require(not targets, "Book of Eclipse takes no targets")


def _res_boe(conf, p, source, targets, extras):
    for loc, inst in list(conf.iter_monsters()):
        if not inst.face_up:
            continue
        if inst.card != FILLER and by_id(inst.card).kind == Kind.LINK_MONSTER:
            continue
        if _pole_protected(conf, loc, inst):
            continue
        conf = _flip_down(conf, loc)
    return replace(conf, boe_pending=True)


def _chk_soul_drain(conf, p, source, targets, extras):
    _require(not targets, "Soul Drain takes no targets")
    _require(conf.players[p].lp >= 1000, "cannot pay 1000 LP")


def _res_soul_drain(conf, p, source, targets, extras):
    return conf  # the cost is paid at activation


def _chk_desert_sunlight(conf, p, source, targets, extras):
    _require(not targets, "Desert Sunlight takes no targets")


def _res_desert_sunlight(conf, p, source, targets, extras):
    # direct activation: flips and triggers; the activation wrapper routes
    # the card to the graveyard before this runs (see _resolve_activation)
    conf, zones = _flip_up_phase(conf, p)
    choices = _decode_flip_choices(p, extras)
    return _run_flip_triggers(conf, p, zones, choices)


def _decode_flip_choices(p: int, extras: tuple[int, ...]) -> dict[int, Optional[Loc]]:
    # extras: flat (zone, 1 + gy_index | 0) pairs
    choices: dict[int, Optional[Loc]] = {}
    for i in range(0, len(extras), 2):
        zone, enc = extras[i], extras[i + 1]
        choices[zone] = None if enc == 0 else (p, GY, enc - 1)
    return choices


def flip_choice_extras(pairs: Iterable[tuple[int, Optional[int]]]) -> tuple[int, ...]:
    """Helper for scripts: (zone, gy_index_or_None) pairs -> extras."""
    flat: list[int] = []
    for zone, gy_idx in pairs:
        flat.append(zone)
        flat.append(0 if gy_idx is None else gy_idx + 1)
    return tuple(flat)


def _chk_tornado(conf, p, source, targets, extras):
    _require(1 <= len(targets) <= 5, "Localized Tornado shuffles 1-5 cards")
    seen = set()
    for t in targets:
        _require(t[0] == p and t[1] == GY, "targets must be your graveyard cards")
        _require(0 <= t[2] < len(conf.players[p].gy), "graveyard index out of range")
        _require(t not in seen, "duplicate target")
        seen.add(t)


def _res_tornado(conf, p, source, targets, extras):
    ps = conf.players[p]
    gy = list(ps.gy)
    idxs = sorted((t[2] for t in targets), reverse=True)
    cards = [gy[i] for i in sorted(t[2] for t in targets)]
    for i in idxs:
        del gy[i]
    return update_player(conf, p, gy=tuple(gy), deck=conf.players[p].deck + tuple(cards))


def _cand_tornado(conf, p, source):
    locs = _gy_locs(conf, p, lambda c: True)
    for loc in locs[:_COMBO_CAP]:
        yield (loc,), ()


def _chk_massivemorph(conf, p, source, targets, extras):
    _require(len(targets) == 1, "Massivemorph targets 1 face-up monster")
    inst = conf.instance_at(targets[0])
    _require(inst is not None and inst.face_up and targets[0][1] in (MZONE, EXTRA),
             "target must be a face-up monster")


def _res_massivemorph(conf, p, source, targets, extras):
    inst = conf.instance_at(source)
    return _set_slot(conf, source, replace(inst, equipped_to=targets[0]))


def _cand_massivemorph(conf, p, source):
    for loc, inst in conf.iter_monsters():
        if inst.face_up:
            yield (loc,), ()


def _chk_pole_position(conf, p, source, targets, extras):
    _require(not targets, "Pole Position takes no targets")


def _res_pole_position(conf, p, source, targets, extras):
    return conf


def _chk_gift_card(conf, p, source, targets, extras):
    _require(not targets, "Gift Card takes no targets")


def _res_gift_card(conf, p, source, targets, extras):
    return _adjust_lp(conf, 1 - p, 3000)


def _chk_morale_boost(conf, p, source, targets, extras):
    _require(not targets, "Morale Boost takes no targets")


def _res_morale_boost(conf, p, source, targets, extras):
    return conf


def _chk_mist_body(conf, p, source, targets, extras):
    _require(len(targets) == 1, "Mist Body equips 1 face-up monster")
    inst = conf.instance_at(targets[0])
    _require(inst is not None and inst.face_up and targets[0][1] in (MZONE, EXTRA),
             "equip target must be a face-up monster")


def _res_mist_body(conf, p, source, targets, extras):
    inst = conf.instance_at(source)
    return _set_slot(conf, source, replace(inst, equipped_to=targets[0]))


_chk_flint = _chk_mist_body
_res_flint = _res_mist_body


def _cand_equip(conf, p, source):
    for loc, inst in conf.iter_monsters():
        if inst.face_up:
            yield (loc,), ()


def _chk_mse(conf, p, source, targets, extras):
    _require(len(targets) == 1, "Magical Stone Excavation recovers 1 spell")
    t = targets[0]
    _require(t[0] == p and t[1] == GY, "recover from your graveyard")
    gy = conf.players[p].gy
    _require(0 <= t[2] < len(gy) and _is_spell_cid(gy[t[2]]), "target must be a spell")
    _require(len(extras) == 2, "discard exactly 2 cards")
    hand = list(conf.players[p].hand)
    src_cid = source[2] if source[1] == HAND else None
    if src_cid is not None:
        hand.remove(src_cid)
    for cid in extras:
        _require(cid in hand, "discard cards must be in hand")
        hand.remove(cid)


def _res_mse(conf, p, source, targets, extras):
    for cid in extras:
        conf = _remove_hand(conf, p, cid)
        conf = _add_gy(conf, p, cid)
    # indices shift after the discards: the target index refers to the
    # graveyard as it was at activation, before this card's own discards.
    t = targets[0]
    cid = conf.players[p].gy[t[2]]
    gy = conf.players[p].gy
    conf = update_player(conf, p, gy=gy[: t[2]] + gy[t[2] + 1 :])
    return _add_hand(conf, p, cid)


def _chk_attraffic(conf, p, source, targets, extras):
    _require(not targets, "Attraffic Control takes no targets")


def _res_attraffic(conf, p, source, targets, extras):
    return conf


def _chk_creature_swap(conf, p, source, targets, extras):
    _require(len(targets) == 2, "Creature Swap takes one monster from each player")
    mine, theirs = targets
    _require(mine[0] == p and mine[1] in (MZONE, EXTRA), "first target must be yours")
    _require(theirs[0] == 1 - p and theirs[1] in (MZONE, EXTRA), "second target must be theirs")
    _require(conf.instance_at(mine) is not None, "no monster at your target")
    _require(conf.instance_at(theirs) is not None, "no monster at their target")


def _res_creature_swap(conf, p, source, targets, extras):
    mine, theirs = targets
    a = conf.instance_at(mine)
    b = conf.instance_at(theirs)
    # Swapped monsters land in main zones of the new controller.
    conf = _set_slot(conf, mine, None)
    conf = _set_slot(conf, theirs, None)
    za = _own_empty_mzone(conf, 1 - p)
    _require(za is not None, "opponent has no free main zone")
    conf = _set_slot(conf, (1 - p, MZONE, za), a)
    zb = _own_empty_mzone(conf, p)
    _require(zb is not None, "no free main zone")
    conf = _set_slot(conf, (p, MZONE, zb), b)
    for old, new in ((mine, (1 - p, MZONE, za)), (theirs, (p, MZONE, zb))):
        for sloc, st in list(conf.iter_spelltraps()):
            if st.equipped_to == old:
                conf = _set_slot(conf, sloc, replace(st, equipped_to=new))
    return conf


def _chk_poly(conf, p, source, targets, extras):
    _require(len(targets) == 2, "fusion uses the two listed materials")
    cids = []
    for t in targets:
        if t[1] == HAND:
            _require(t[0] == p and t[2] in conf.players[p].hand, "material not in hand")
            cids.append(t[2])
        else:
            inst = conf.instance_at(t)
            _require(inst is not None and t[0] == p, "material must be yours")
            cids.append(inst.card)
    _require(sorted(cids) == sorted([ODD_EYES, ENDYMION]),
             "Starving Venemy Dragon needs Odd-Eyes Pendulum Dragon and Endymion")
    _require(SVD in conf.players[p].extra_deck, "fusion monster not in the extra deck")
    _require(conf.players[p].extra_zone is None, "extra monster zone occupied")
    _require(not _special_summon_blocked(conf, p), "special summons are blocked")


def _res_poly(conf, p, source, targets, extras):
    for t in sorted(targets, key=lambda t: (t[1] != HAND, t)):
        if t[1] == HAND:
            conf = _remove_hand(conf, p, t[2])
            conf = _add_gy(conf, p, t[2])
        else:
            conf = _leave_field(conf, t, "gy")
    ed = list(conf.players[p].extra_deck)
    ed.remove(SVD)
    conf = update_player(conf, p, extra_deck=tuple(ed))
    inst = CardInstance(SVD, face_up=True, position=ATK, summoned_turn=conf.turn,
                        face_since=conf.turn)
    return _set_slot(conf, (p, EXTRA, 0), inst)


def _chk_raigeki(conf, p, source, targets, extras):
    _require(not targets, "Raigeki takes no targets")


def _res_raigeki(conf, p, source, targets, extras):
    opp = 1 - p
    for loc, inst in list(conf.iter_monsters()):
        if loc[0] != opp:
            continue
        if _pole_protected(conf, loc, inst):
            continue
        conf = _leave_field(conf, loc, "gy")
    return conf


def _chk_give_and_take(conf, p, source, targets, extras):
    _require(len(targets) == 1, "target 1 monster in your graveyard")
    t = targets[0]
    _require(t[0] == p and t[1] == GY, "target must be in your graveyard")
    gy = conf.players[p].gy
    _require(0 <= t[2] < len(gy) and _is_monster_cid(gy[t[2]]), "target must be a monster")
    _require(len(extras) == 1 and 0 <= extras[0] < N_MZONES, "pick an opponent zone")
    _require(conf.players[1 - p].monsters[extras[0]] is None, "opponent zone occupied")
    _require(not _special_summon_blocked(conf, p), "special summons are blocked")


def _summon_from_gy_to_opp(conf, p, t, zone, face_up):
    gy = conf.players[p].gy
    cid = gy[t[2]]
    conf = update_player(conf, p, gy=gy[: t[2]] + gy[t[2] + 1 :])
    inst = CardInstance(
        cid,
        face_up=face_up,
        position=DEF,
        set_turn=conf.turn,
        face_since=conf.turn,
        summoned_turn=conf.turn,
    )
    return _set_slot(conf, (1 - p, MZONE, zone), inst)


def _res_give_and_take(conf, p, source, targets, extras):
    return _summon_from_gy_to_opp(conf, p, targets[0], extras[0], face_up=True)


def _res_reverse_reuse(conf, p, source, targets, extras):
    return _summon_from_gy_to_opp(conf, p, targets[0], extras[0], face_up=False)


def _cand_gy_monster_to_opp(conf, p, source):
    zone = _own_empty_mzone(conf, 1 - p)
    if zone is None:
        return
    for loc in _gy_locs(conf, p, _is_monster_cid)[:20]:
        yield (loc,), (zone,)


def _chk_endymion_summon(conf, p, source, targets, extras):
    loc = _citadel_loc(conf)
    _require(loc is not None and loc[0] == p, "needs your face-up Magical Citadel")
    _require(conf.instance_at(loc).counters >= 6, "needs 6 spell counters")
    if source[1] == HAND:
        _require(ENDYMION in conf.players[p].hand, "Endymion not in hand")
    elif source[1] == GY:
        gy = conf.players[p].gy
        _require(0 <= source[2] < len(gy) and gy[source[2]] == ENDYMION,
                 "Endymion not at that graveyard position")
        _require(not _soul_drain_up(conf), "graveyard effects are locked")
    else:
        raise IllegalMove("Endymion is summoned from hand or graveyard")
    _require(len(extras) >= 1 and 0 <= extras[0] < N_MZONES, "pick a main zone")
    _require(conf.players[p].monsters[extras[0]] is None, "zone occupied")
    _require(not _special_summon_blocked(conf, p), "special summons are blocked")
    if len(extras) > 1 and extras[1] > 0:
        idx = extras[1] - 1
        gy = conf.players[p].gy
        shift = 1 if source[1] == GY and source[2] < idx else 0
        _require(0 <= idx < len(gy), "recycle index out of range")
        _require(_is_spell_cid(gy[idx]), "Endymion recycles a spell")


def _res_endymion_summon(conf, p, source, targets, extras):
    cloc = _citadel_loc(conf)
    citadel = conf.instance_at(cloc)
    conf = _set_slot(conf, cloc, replace(citadel, counters=citadel.counters - 6))
    if source[1] == HAND:
        conf = _remove_hand(conf, p, ENDYMION)
    else:
        gy = conf.players[p].gy
        conf = update_player(conf, p, gy=gy[: source[2]] + gy[source[2] + 1 :])
    inst = CardInstance(ENDYMION, face_up=True, position=ATK,
                        summoned_turn=conf.turn, face_since=conf.turn)
    conf = _set_slot(conf, (p, MZONE, extras[0]), inst)
    if len(extras) > 1 and extras[1] > 0:
        idx = extras[1] - 1
        if source[1] == GY and source[2] < idx:
            idx -= 1
        gy = conf.players[p].gy
        if 0 <= idx < len(gy) and _is_spell_cid(gy[idx]):
            cid = gy[idx]
            conf = update_player(conf, p, gy=gy[:idx] + gy[idx + 1 :])
            conf = _add_hand(conf, p, cid)
    return conf


def _cand_endymion(conf, p, source):
    zone = _own_empty_mzone(conf, p)
    if zone is None:
        return
    yield (), (zone, 0)
    for idx, cid in enumerate(conf.players[p].gy):
        if _is_spell_cid(cid):
            yield (), (zone, idx + 1)
            break


def _chk_clara_link(conf, p, source, targets, extras):
    _require(CLARA in conf.players[p].extra_deck, "link monster not in the extra deck")
    _require(conf.players[p].extra_zone is None, "extra monster zone occupied")
    _require(len(targets) == 1, "link summon uses 1 material")
    t = targets[0]
    inst = conf.instance_at(t)
    _require(inst is not None and t[0] == p and inst.face_up, "material must be your face-up monster")
    _require(inst.card != FILLER and by_id(inst.card).stats.level == 1,
             "material must be level 1")
    _require(not _special_summon_blocked(conf, p), "special summons are blocked")


def _res_clara_link(conf, p, source, targets, extras):
    conf = _leave_field(conf, targets[0], "gy")
    ed = list(conf.players[p].extra_deck)
    ed.remove(CLARA)
    conf = update_player(conf, p, extra_deck=tuple(ed))
    inst = CardInstance(CLARA, face_up=True, position=ATK,
                        summoned_turn=conf.turn, face_since=conf.turn)
    return _set_slot(conf, (p, EXTRA, 0), inst)


def _chk_svd_negate(conf, p, source, targets, extras):
    marker = "svd_negate"
    _require(marker not in conf.opt_used, "once per turn")
    inst = conf.instance_at(source)
    _require(inst is not None and inst.card == SVD and inst.face_up and not inst.negated,
             "Starving Venemy Dragon must be face-up")
    _require(len(targets) == 1, "negate 1 opponent monster")
    t = targets[0]
    tinst = conf.instance_at(t)
    _require(tinst is not None and t[0] == 1 - p and tinst.face_up,
             "target must be an opponent face-up monster")


def _res_svd_negate(conf, p, source, targets, extras):
    t = targets[0]
    tinst = conf.instance_at(t)
    conf = _set_slot(conf, t, replace(tinst, negated=True))
    return replace(conf, opt_used=conf.opt_used | {"svd_negate"})


def _cand_svd_negate(conf, p, source):
    for loc, inst in conf.iter_monsters():
        if loc[0] == 1 - p and inst.face_up:
            yield (loc,), ()


EFFECTS: dict[str, tuple[Callable, Callable, Optional[Callable]]] = {
    "double_summon_extra": (_chk_double_summon, _res_double_summon, None),
    "pob_return_two": (_chk_pob, _res_pob, _cand_pob),
    "gmc_gift": (_chk_gmc, _res_gmc, _cand_gmc),
    "soul_release_banish": (_chk_soul_release, _res_soul_release, _cand_soul_release),
    "rain_of_mercy_gain": (_chk_rain_of_mercy, _res_rain_of_mercy, None),
    "upstart_draw": (_chk_upstart, _res_upstart, None),
    "mst_destroy": (_chk_mst, _res_mst, _cand_mst),
    "pot_desires": (_chk_pot_desires, _res_pot_desires, None),
    "pot_duality": (_chk_pot_duality, _res_pot_duality, None),
    "offerings_destroy_skip": (_chk_offerings, _res_offerings, _cand_offerings),
    "citadel_counters": (_chk_citadel, _res_citadel, None),
    "temple_trap_allowance": (_chk_temple, _res_temple, None),
    "bait_doll_force": (_chk_bait_doll, _res_bait_doll, None),
    "boe_flip_all": (_chk_boe, _res_boe, None),
    "soul_drain_gy_lock": (_chk_soul_drain, _res_soul_drain, None),
    "desert_sunlight_flip_up": (_chk_desert_sunlight, _res_desert_sunlight, None),
    "tornado_recycle": (_chk_tornado, _res_tornado, _cand_tornado),
    "massivemorph_boost": (_chk_massivemorph, _res_massivemorph, _cand_massivemorph),
    "pole_position_immunity": (_chk_pole_position, _res_pole_position, None),
    "gift_card_gain": (_chk_gift_card, _res_gift_card, None),
    "morale_boost_gain": (_chk_morale_boost, _res_morale_boost, None),
    "mist_body_shield": (_chk_mist_body, _res_mist_body, _cand_equip),
    "mse_discard_recover": (_chk_mse, _res_mse, None),
    "attraffic_control": (_chk_attraffic, _res_attraffic, None),
    "creature_swap": (_chk_creature_swap, _res_creature_swap, None),
    "polymerization_fuse": (_chk_poly, _res_poly, None),
    "flint_lockdown": (_chk_flint, _res_flint, _cand_equip),
    "raigeki_wipe": (_chk_raigeki, _res_raigeki, None),
    "give_and_take": (_chk_give_and_take, _res_give_and_take, _cand_gy_monster_to_opp),
    "reverse_reuse": (_chk_give_and_take, _res_reverse_reuse, _cand_gy_monster_to_opp),
    "endymion_counter_summon": (_chk_endymion_summon, _res_endymion_summon, _cand_endymion),
    "clara_link_summon": (_chk_clara_link, _res_clara_link, None),
    "svd_negate": (_chk_svd_negate, _res_svd_negate, _cand_svd_negate),
}

_CHAIN_PATTERNS = (
    frozenset({"desert_sunlight_flip_up", "soul_drain_gy_lock"}),
    frozenset({"give_and_take"}),
)


def make_bait_doll_move(player, source, ds_loc, flip_extras):
    """Bait Doll activation carrying the forced trap's flip choices."""
    return ActivateEffect(
        player,
        "bait_doll_force",
        source,
        targets=(ds_loc,),
        extras=_pack_forced((), flip_extras),
    )


# --- activation wrapper ---------------------------------------------------


def _effect_card(conf: Configuration, p: int, effect: str, source: Loc) -> int:
    """Which card is being activated, validating the source locator."""
    if source[1] == HAND:
        cid = source[2]
        if cid == FILLER or cid not in conf.players[p].hand or source[0] != p:
            raise IllegalMove("source card not in hand")
        return cid
    if source[1] in (SZONE, FZONE, MZONE, EXTRA):
        inst = conf.instance_at(source)
        if inst is None:
            raise IllegalMove("no card at the source zone")
        return inst.card
    if source[1] == GY:
        gy = conf.players[source[0]].gy
        if not 0 <= source[2] < len(gy):
            raise IllegalMove("bad graveyard source")
        return gy[source[2]]
    if source[1] == EXTRADECK:
        if source[2] not in conf.players[p].extra_deck:
            raise IllegalMove("card not in the extra deck")
        return source[2]
    raise IllegalMove("bad source locator")


def _activation_timing_ok(conf: Configuration, p: int, effect: str, source: Loc) -> bool:
    cid = _effect_card(conf, p, effect, source)
    if cid == FILLER:
        return False
    spec = by_id(cid)
    if effect not in spec.effects:
        return False
    main = conf.phase in (Phase.MAIN1, Phase.MAIN2)
    own_turn = conf.active == p
    if effect in ("endymion_counter_summon", "clara_link_summon", "svd_negate",
                  "polymerization_fuse"):
        return own_turn and main
    if source[1] == HAND:
        if spec.kind == Kind.QUICKPLAY_SPELL:
            return own_turn and conf.phase != Phase.DRAW
        if spec.is_spell:
            return own_turn and main
        return False  # traps never activate from hand
    if source[1] == SZONE or source[1] == FZONE:
        inst = conf.instance_at(source)
        if inst is None:
            return False
        if inst.face_up:
            return False  # continuous cards do not re-activate
        if spec.is_trap:
            if inst.set_turn == conf.turn and not _temple_available(conf, p):
                return False
            return True  # any phase, any turn, at a priority window
        if spec.kind == Kind.QUICKPLAY_SPELL:
            if inst.set_turn == conf.turn:
                return False
            return conf.phase != Phase.DRAW
        if spec.is_spell:
            return own_turn and main
    return False


_NON_CARDPLAY = {"endymion_counter_summon", "clara_link_summon", "svd_negate"}


def _resolve_activation(
    conf: Configuration, p: int, effect: str, source: Loc,
    targets: tuple[Loc, ...], extras: tuple[int, ...],
) -> Configuration:
    cid = _effect_card(conf, p, effect, source)
    spec = by_id(cid)
    chk, res, _cand = EFFECTS[effect]
    if effect in _NON_CARDPLAY:
        # monster-effect activations move their own cards
        return res(conf, p, source, targets, extras)
    from_hand = source[1] == HAND

    # costs and placement at activation
    if effect == "soul_drain_gy_lock":
        conf = _adjust_lp(conf, p, -1000)
    placed_loc: Optional[Loc] = None
    if from_hand:
        conf = _remove_hand(conf, p, cid)
        if spec.kind in (Kind.CONTINUOUS_SPELL, Kind.EQUIP_SPELL):
            zone = _first_empty_szone(conf, p)
            if zone is None:
                raise IllegalMove("no free spell/trap zone")
            placed_loc = (p, SZONE, zone)
            conf = _set_slot(conf, placed_loc, CardInstance(
                cid, face_up=True, face_since=conf.turn))
        elif spec.kind == Kind.FIELD_SPELL:
            if conf.players[p].field_zone is not None:
                raise IllegalMove("field zone occupied")
            placed_loc = (p, FZONE, 0)
            conf = _set_slot(conf, placed_loc, CardInstance(
                cid, face_up=True, face_since=conf.turn))
    else:
        inst = conf.instance_at(source)
        if inst is not None and not inst.face_up:
            conf = _set_slot(conf, source, replace(inst, face_up=True, face_since=conf.turn))
            placed_loc = source

    src = placed_loc if placed_loc is not None else source
    if effect == "desert_sunlight_flip_up" and not from_hand:
        # the spent trap reaches the graveyard before its flip triggers
        conf = _set_slot(conf, src, None)
        conf = _add_gy(conf, src[0], cid)
        return res(conf, p, src, targets, extras)
    conf = res(conf, p, src, targets, extras)

    # normal/quick-play cards go to the graveyard after resolving
    if spec.kind in (Kind.NORMAL_SPELL, Kind.QUICKPLAY_SPELL, Kind.NORMAL_TRAP):
        if effect == "bait_doll_force":
            pass  # shuffles itself into the deck instead
        elif from_hand:
            conf = _add_gy(conf, p, cid)
        else:
            inst = conf.instance_at(src)
            if inst is not None and inst.card == cid:
                conf = _set_slot(conf, src, None)
                conf = _add_gy(conf, src[0], cid)
    return conf


def _first_empty_szone(conf: Configuration, p: int) -> Optional[int]:
    for i, inst in enumerate(conf.players[p].spelltraps):
        if inst is None:
            return i
    return None


def _count_spell_activations(conf: Configuration, move: ActivateEffect) -> int:
    n = 0
    for effect, source in [(move.effect, move.source)] + [
        (l.effect, l.source) for l in move.chain
    ]:
        try:
            cid = _effect_card(conf, move.player, effect, source)
        except IllegalMove:
            continue
        if cid != FILLER and by_id(cid).is_spell:
            n += 1
    return n


# --- terminality / win detection -----------------------------------------


def _deck_out_pending(conf: Configuration) -> bool:
    ps = conf.players[conf.active]
    return (
        conf.turn >= 1
        and conf.phase == Phase.DRAW
        and not conf.draw_done
        and len(ps.deck) == 0
    )


def _terminal(conf: Configuration) -> bool:
    return conf.players[0].lp == 0 or conf.players[1].lp == 0 or _deck_out_pending(conf)


def is_winning_state(conf: Configuration, p: int) -> bool:
    opp = 1 - p
    if conf.players[opp].lp == 0 and conf.players[p].lp > 0:
        return True
    return conf.active == opp and _deck_out_pending(conf)


# --- legality --------------------------------------------------------------


def _quick_moves(conf: Configuration, p: int) -> list[Move]:
    """Set-card activations available to p at a priority window."""
    out: list[Move] = []
    if conf.phase == Phase.DRAW and not conf.draw_done and conf.turn >= 1:
        return out
    for i, inst in enumerate(conf.players[p].spelltraps):
        if inst is None or inst.face_up:
            continue
        spec = by_id(inst.card)
        for effect in spec.effects:
            source = (p, SZONE, i)
            if not _activation_timing_ok(conf, p, effect, source):
                continue
            chk, _res, cand = EFFECTS[effect]
            combos = cand(conf, p, source) if cand else [((), ())]
            for targets, extras in combos:
                try:
                    chk(conf, p, source, tuple(targets), tuple(extras))
                except IllegalMove:
                    continue
                out.append(ActivateEffect(p, effect, source, tuple(targets), tuple(extras)))
    return out


def _tribute_requirement(level: int) -> int:
    if level <= 4:
        return 0
    if level <= 6:
        return 1
    return 2


def is_legal(conf: Configuration, move: Move) -> bool:
    try:
        check_legal(conf, move)
        return True
    except IllegalMove:
        return False


def check_legal(conf: Configuration, move: Move) -> None:
    if _terminal(conf):
        raise IllegalMove("game over")
    p = move.player
    if p not in (0, 1):
        raise IllegalMove("bad player")
    if conf.priority != p:
        raise IllegalMove("not this player's priority window")

    # pre-game opening draws
    if conf.turn == 0:
        want0 = len(conf.players[0].hand) < 5
        want1 = len(conf.players[1].hand) < 5
        if want0 or want1:
            need = 0 if want0 else 1
            if not (isinstance(move, DrawCard) and p == need):
                raise IllegalMove("opening hands are drawn first")
            return
        if isinstance(move, (Pass, AdvancePhase)) and p == 0:
            return
        raise IllegalMove("opening complete; advance to turn 1")

    active = conf.active
    hand_over = (
        conf.phase == Phase.END
        and p == active
        and len(conf.players[active].hand) > HAND_LIMIT
    )
    if hand_over and not isinstance(move, DiscardToLimit):
        raise IllegalMove("must discard down to the hand limit")

    if conf.phase == Phase.DRAW and not conf.draw_done:
        if not (isinstance(move, DrawCard) and p == active):
            raise IllegalMove("the draw is mandatory")
        if len(conf.players[active].deck) == 0:
            raise IllegalMove("cannot draw from an empty deck")
        return

    if isinstance(move, DrawCard):
        raise IllegalMove("no draw available now")

    if isinstance(move, Pass):
        return

    if isinstance(move, AdvancePhase):
        if p != active:
            raise IllegalMove("only the turn player advances phases")
        if _quick_moves(conf, 1 - p):
            raise IllegalMove("opponent has a response window; pass instead")
        return

    if isinstance(move, DiscardToLimit):
        if not hand_over:
            raise IllegalMove("hand is within the limit")
        hand = list(conf.players[p].hand)
        if len(move.cards) != len(hand) - HAND_LIMIT:
            raise IllegalMove("discard exactly down to six")
        for cid in move.cards:
            if cid not in hand:
                raise IllegalMove("discard cards must be in hand")
            hand.remove(cid)
        return

    if isinstance(move, NormalSummon):
        if p != active or conf.phase not in (Phase.MAIN1, Phase.MAIN2):
            raise IllegalMove("normal summons happen in your main phase")
        if conf.normal_summons_used >= conf.normal_summon_allowance:
            raise IllegalMove("no normal summons left this turn")
        if move.card == FILLER:
            raise IllegalMove("the opponent's proxy fillers are inert")
        spec = by_id(move.card)
        if not spec.is_monster or spec.kind in (Kind.LINK_MONSTER, Kind.FUSION_MONSTER):
            raise IllegalMove("not a normal-summonable monster")
        level = spec.stats.level
        if move.card not in conf.players[p].hand:
            raise IllegalMove("card not in hand")
        need = _tribute_requirement(level)
        if len(move.tributes) != need:
            raise IllegalMove(f"needs exactly {need} tribute(s)")
        if len(set(move.tributes)) != len(move.tributes):
            raise IllegalMove("duplicate tribute zones")
        for z in move.tributes:
            if not (0 <= z < N_MZONES) or conf.players[p].monsters[z] is None:
                raise IllegalMove("tribute zone is empty")
        if not (0 <= move.zone < N_MZONES):
            raise IllegalMove("bad summon zone")
        if conf.players[p].monsters[move.zone] is not None and move.zone not in move.tributes:
            raise IllegalMove("summon zone occupied")
        return

    if isinstance(move, SetSpellTrap):
        if p != active or conf.phase not in (Phase.MAIN1, Phase.MAIN2):
            raise IllegalMove("sets happen in your main phase")
        if move.card == FILLER or move.card not in conf.players[p].hand:
            raise IllegalMove("card not in hand")
        spec = by_id(move.card)
        if spec.is_monster:
            raise IllegalMove("monsters are set with NormalSummon")
        if spec.kind == Kind.FIELD_SPELL:
            if move.zone != -1 or conf.players[p].field_zone is not None:
                raise IllegalMove("field zone unavailable")
        else:
            if not (0 <= move.zone < N_SZONES):
                raise IllegalMove("bad spell/trap zone")
            if conf.players[p].spelltraps[move.zone] is not None:
                raise IllegalMove("zone occupied")
        return

    if isinstance(move, FlipSummon):
        if p != active or conf.phase not in (Phase.MAIN1, Phase.MAIN2):
            raise IllegalMove("flip summons happen in your main phase")
        inst = conf.players[p].monsters[move.zone] if 0 <= move.zone < N_MZONES else None
        if inst is None or inst.face_up:
            raise IllegalMove("no face-down monster there")
        if inst.face_since >= conf.turn or inst.set_turn == conf.turn:
            raise IllegalMove("cannot flip the turn it was set or turned face-down")
        if move.recover is not None and inst.card not in (MOF, MOD):
            raise IllegalMove("this monster has no recovery choice")
        if move.recover is not None:
            cp, kind, idx = move.recover
            gy = conf.players[p].gy
            if cp != p or kind != GY or not 0 <= idx < len(gy):
                raise IllegalMove("bad recovery target")
            if inst.card == MOF and not _is_spell_cid(gy[idx]):
                raise IllegalMove("Magician of Faith recovers spells only")
            if inst.card == MOD and not _is_trap_cid(gy[idx]):
                raise IllegalMove("Mask of Darkness recovers traps only")
        return

    if isinstance(move, ChangeEquipTarget):
        if p != active or conf.phase not in (Phase.MAIN1, Phase.MAIN2):
            raise IllegalMove("retargets happen in your main phase")
        eq = conf.instance_at(move.equip)
        if eq is None or eq.card != FLINT or not eq.face_up or move.equip[0] != p:
            raise IllegalMove("you must control the face-up Flint")
        if eq.equipped_to is None:
            raise IllegalMove("Flint is not equipped")
        tgt = conf.instance_at(move.new_target)
        if tgt is None or not tgt.face_up or move.new_target[0] != p:
            raise IllegalMove("new target must be your face-up monster")
        if move.new_target == eq.equipped_to:
            raise IllegalMove("already equipped there")
        cur = conf.instance_at(eq.equipped_to)
        involves_lock = tgt.card == FLINT_LOCK or (cur is not None and cur.card == FLINT_LOCK)
        if not involves_lock:
            raise IllegalMove("a Flint Lock must move the equip")
        return

    if isinstance(move, DeclareAttack):
        if p != active or conf.phase != Phase.BATTLE:
            raise IllegalMove("attacks happen in your battle phase")
        if conf.turn == 1:
            raise IllegalMove("the starting player cannot attack on turn 1")
        if _controls_faceup(conf, 1 - p, ATTRAFFIC) is not None:
            raise IllegalMove("your monsters cannot declare attacks")
        att = conf.instance_at(move.attacker)
        if att is None or move.attacker[0] != p or not att.face_up:
            raise IllegalMove("attacker must be your face-up monster")
        key = move.attacker[1] * 16 + move.attacker[2] + (256 if move.attacker[1] == EXTRA else 0)
        if key in conf.attacked:
            raise IllegalMove("this monster already attacked")
        for _sloc, st in conf.iter_spelltraps():
            if st.equipped_to == move.attacker and st.card == FLINT and st.face_up:
                raise IllegalMove("Flint stops the equipped monster from attacking")
        if move.target == DIRECT:
            opp_has = conf.players[1 - p].monster_count() > 0
            if opp_has and _controls_faceup(conf, p, ATTRAFFIC) is None:
                raise IllegalMove("opponent controls monsters")
            return
        tgt = conf.instance_at(move.target)
        if tgt is None or move.target[0] != 1 - p or move.target[1] not in (MZONE, EXTRA):
            raise IllegalMove("attack target must be an opponent monster")
        return

    if isinstance(move, ActivateEffect):
        if move.effect not in EFFECTS:
            raise IllegalMove(f"unknown effect {move.effect!r}")
        if not _activation_timing_ok(conf, p, move.effect, move.source):
            raise IllegalMove("activation timing is wrong")
        if move.chain:
            effects = frozenset({move.effect} | {l.effect for l in move.chain})
            if not any(effects <= pat for pat in _CHAIN_PATTERNS):
                raise IllegalMove("unsupported chain construction")
            for link in move.chain:
                if not _activation_timing_ok(conf, p, link.effect, link.source):
                    raise IllegalMove("chain link timing is wrong")
                chk, _res, _cand = EFFECTS[link.effect]
                chk(conf, p, link.source, link.targets, link.extras)
        chk, _res, _cand = EFFECTS[move.effect]
        chk(conf, p, move.source, move.targets, move.extras)
        return

    raise IllegalMove(f"unhandled move {move!r}")


# --- apply -----------------------------------------------------------------


def apply(conf: Configuration, move: Move) -> Configuration:
    """The transition function: deterministic, pure; raises IllegalMove."""
    check_legal(conf, move)
    p = move.player

    if isinstance(move, DrawCard):
        if conf.turn == 0:
            conf2 = _draw_cards(conf, p, 1, by_effect=False)
            if len(conf2.players[0].hand) == 5 and len(conf2.players[1].hand) < 5:
                conf2 = replace(conf2, priority=1)
            elif len(conf2.players[1].hand) == 5:
                conf2 = replace(conf2, priority=0)
            return conf2
        conf2 = _draw_cards(conf, p, 1, by_effect=False)
        return replace(conf2, draw_done=True)

    if isinstance(move, Pass):
        return _apply_pass(conf, p)

    if isinstance(move, AdvancePhase):
        return _advance_phase(conf)

    if isinstance(move, DiscardToLimit):
        conf2 = conf
        for cid in move.cards:
            conf2 = _remove_hand(conf2, p, cid)
            conf2 = _add_gy(conf2, p, cid)
        return conf2

    if isinstance(move, NormalSummon):
        conf2 = conf
        for z in move.tributes:
            conf2 = _leave_field(conf2, (p, MZONE, z), "gy")
        conf2 = _remove_hand(conf2, p, move.card)
        inst = CardInstance(
            move.card,
            face_up=move.face_up,
            position=ATK if move.face_up else DEF,
            set_turn=conf.turn if not move.face_up else -1,
            face_since=conf.turn,
            summoned_turn=conf.turn if move.face_up else -1,
        )
        conf2 = _set_slot(conf2, (p, MZONE, move.zone), inst)
        return replace(conf2, normal_summons_used=conf2.normal_summons_used + 1)

    if isinstance(move, SetSpellTrap):
        conf2 = _remove_hand(conf, p, move.card)
        inst = CardInstance(move.card, face_up=False, set_turn=conf.turn,
                            face_since=conf.turn)
        loc = (p, FZONE, 0) if move.zone == -1 else (p, SZONE, move.zone)
        return _set_slot(conf2, loc, inst)

    if isinstance(move, FlipSummon):
        conf2 = _flip_up(conf, (p, MZONE, move.zone), ATK)
        return _resolve_flip_trigger(conf2, (p, MZONE, move.zone), move.recover)

    if isinstance(move, ChangeEquipTarget):
        eq = conf.instance_at(move.equip)
        tgt = conf.instance_at(move.new_target)
        conf2 = _set_slot(conf, move.equip, replace(eq, equipped_to=move.new_target))
        # the gain fires when a Flint Lock pulls the equip onto itself;
        # parking it back on another monster is free
        if tgt.card == FLINT_LOCK and _controls_faceup(conf2, p, MORALE_BOOST) is not None:
            conf2 = _adjust_lp(conf2, p, 1000)
        return conf2

    if isinstance(move, DeclareAttack):
        return _apply_attack(conf, move)

    if isinstance(move, ActivateEffect):
        conf2 = conf
        # spell counters accrue per spell activation while the citadel is up
        n_spells = _count_spell_activations(conf2, move)
        cloc = _citadel_loc(conf2)
        if cloc is not None and n_spells:
            cit = conf2.instance_at(cloc)
            conf2 = _set_slot(conf2, cloc, replace(cit, counters=cit.counters + n_spells))
        links = list(move.chain)
        for link in reversed(links):
            conf2 = _resolve_activation(conf2, p, link.effect, link.source,
                                        link.targets, link.extras)
        conf2 = _resolve_activation(conf2, p, move.effect, move.source,
                                    move.targets, move.extras)
        if conf.priority != conf.active:
            conf2 = replace(conf2, priority=conf.active)
        return conf2

    raise IllegalMove(f"unhandled move {move!r}")


def _apply_pass(conf: Configuration, p: int) -> Configuration:
    if conf.turn == 0:
        return _advance_phase(conf)
    if p == conf.active:
        if _quick_moves(conf, 1 - p):
            return replace(conf, priority=1 - p)
        return _advance_phase(conf)
    return _advance_phase(replace(conf, priority=conf.active))


def _apply_attack(conf: Configuration, move: DeclareAttack) -> Configuration:
    p = move.player
    att_loc = move.attacker
    att = conf.instance_at(att_loc)
    key = att_loc[1] * 16 + att_loc[2] + (256 if att_loc[1] == EXTRA else 0)
    conf = replace(conf, attacked=conf.attacked | {key})
    atk = current_atk(conf, att_loc, att)

    if move.target == DIRECT:
        conf = _adjust_lp(conf, 1 - p, -atk)
        if att.card == YATA and atk > 0:
            skip = list(conf.skip_draw)
            skip[1 - p] = True
            conf = replace(conf, skip_draw=tuple(skip))
        return conf

    tgt_loc = move.target
    tgt = conf.instance_at(tgt_loc)
    if not tgt.face_up:
        conf = _flip_up(conf, tgt_loc, DEF)
        conf = _resolve_flip_trigger(conf, tgt_loc, None)
        tgt = conf.instance_at(tgt_loc)
        if tgt is None:
            return conf

    def_spec = by_id(tgt.card) if tgt.card != FILLER else None
    mist = any(
        st.equipped_to == tgt_loc and st.card == MIST_BODY and st.face_up
        for _l, st in conf.iter_spelltraps()
    )
    if tgt.position == ATK:
        tval = current_atk(conf, tgt_loc, tgt)
        if atk > tval:
            conf = _adjust_lp(conf, 1 - p, -(atk - tval))
            if not mist:
                conf = _leave_field(conf, tgt_loc, "gy")
            if att.card == YATA and atk - tval > 0:
                skip = list(conf.skip_draw)
                skip[1 - p] = True
                conf = replace(conf, skip_draw=tuple(skip))
        elif atk < tval:
            conf = _adjust_lp(conf, p, -(tval - atk))
            conf = _leave_field(conf, att_loc, "gy")
        else:
            if not mist:
                conf = _leave_field(conf, tgt_loc, "gy")
            conf = _leave_field(conf, att_loc, "gy")
    else:
        dval = def_spec.stats.def_ if def_spec is not None and def_spec.stats else 0
        if atk > dval:
            if not mist:
                conf = _leave_field(conf, tgt_loc, "gy")
        elif atk < dval:
            conf = _adjust_lp(conf, p, -(dval - atk))
    return conf


def _advance_phase(conf: Configuration) -> Configuration:
    if conf.turn == 0:
        return _start_turn(conf, 1)
    if conf.phase == Phase.END:
        return _start_turn(conf, conf.turn + 1)
    nxt = Phase(int(conf.phase) + 1)
    conf = replace(conf, phase=nxt, priority=conf.active)
    if nxt == Phase.END:
        conf = _end_phase_events(conf)
    return conf


def _start_turn(conf: Configuration, turn: int) -> Configuration:
    active = (turn + 1) % 2  # player 0 takes odd turns
    conf = replace(
        conf,
        turn=turn,
        active=active,
        phase=Phase.DRAW,
        priority=active,
        normal_summons_used=0,
        normal_summon_allowance=1,
        draw_done=False,
        temple_used=False,
        boe_pending=False,
        attacked=frozenset(),
        opt_used=frozenset(),
        end_resolved=False,
    )
    if turn == 1:
        return replace(conf, draw_done=True)  # the starting player skips the first draw
    if conf.skip_draw[active]:
        skip = list(conf.skip_draw)
        skip[active] = False
        return replace(conf, skip_draw=tuple(skip), draw_done=True)
    return conf


def _end_phase_events(conf: Configuration) -> Configuration:
    active = conf.active
    opp = 1 - active
    if conf.boe_pending:
        flipped = 0
        for i, inst in enumerate(conf.players[opp].monsters):
            if inst is not None and not inst.face_up:
                conf = _flip_up(conf, (opp, MZONE, i), DEF)
                conf = _resolve_flip_trigger(conf, (opp, MZONE, i), None)
                flipped += 1
        if flipped:
            conf = _draw_cards(conf, opp, flipped, by_effect=True)
        conf = replace(conf, boe_pending=False)
    # spirit bounce: Yata returns to hand if summoned or flipped up this turn
    for loc, inst in list(conf.iter_monsters()):
        if inst.card == YATA and inst.face_up and inst.summoned_turn == conf.turn:
            conf = _leave_field(conf, loc, "hand")
    return replace(conf, end_resolved=True)


# --- enumeration ------------------------------------------------------------


def legal_moves(conf: Configuration, p: int) -> list[Move]:
    """A finite, duplicate-free family of legal moves for p.

    Exhaustive for every move with at most one free choice; effects with
    subset-valued targets are enumerated through a bounded representative
    family (the validator accepts the full space).
    """
    if _terminal(conf):
        return []
    out: list[Move] = []
    if conf.priority != p:
        return out

    if conf.turn == 0:
        if len(conf.players[0].hand) < 5 or len(conf.players[1].hand) < 5:
            return [DrawCard(p)]
        return [Pass(p)]

    active = conf.active
    if conf.phase == Phase.DRAW and not conf.draw_done:
        if p == active and len(conf.players[p].deck) > 0:
            return [DrawCard(p)]
        return []

    hand_over = (
        conf.phase == Phase.END and p == active
        and len(conf.players[p].hand) > HAND_LIMIT
    )
    if hand_over:
        hand = sorted(set(conf.players[p].hand))
        n = len(conf.players[p].hand) - HAND_LIMIT
        combos = itertools.islice(
            itertools.combinations(sorted(conf.players[p].hand), n), _COMBO_CAP
        )
        seen = set()
        for combo in combos:
            if combo in seen:
                continue
            seen.add(combo)
            out.append(DiscardToLimit(p, combo))
        return out

    if p != active:
        out.extend(_quick_moves(conf, p))
        out.append(Pass(p))
        return _dedupe(out)

    main = conf.phase in (Phase.MAIN1, Phase.MAIN2)
    ps = conf.players[p]

    if main and conf.normal_summons_used < conf.normal_summon_allowance:
        empties = [i for i, m in enumerate(ps.monsters) if m is None]
        occupied = [i for i, m in enumerate(ps.monsters) if m is not None]
        for cid in sorted(set(ps.hand)):
            if cid == FILLER:
                continue
            spec = by_id(cid)
            if not spec.is_monster or spec.kind in (Kind.LINK_MONSTER, Kind.FUSION_MONSTER):
                continue
            level = spec.stats.level
            need = _tribute_requirement(level)
            if need == 0:
                for z in empties:
                    out.append(NormalSummon(p, cid, z, True))
                    out.append(NormalSummon(p, cid, z, False))
            else:
                for tribs in itertools.combinations(occupied, need):
                    zones = set(empties) | set(tribs)
                    for z in sorted(zones):
                        out.append(NormalSummon(p, cid, z, True, tribs))
                        out.append(NormalSummon(p, cid, z, False, tribs))

    if main:
        st_empties = [i for i, s in enumerate(ps.spelltraps) if s is None]
        for cid in sorted(set(ps.hand)):
            if cid == FILLER or by_id(cid).is_monster:
                continue
            if by_id(cid).kind == Kind.FIELD_SPELL:
                if ps.field_zone is None:
                    out.append(SetSpellTrap(p, cid, -1))
            elif st_empties:
                out.append(SetSpellTrap(p, cid, st_empties[0]))
        for i, inst in enumerate(ps.monsters):
            if inst is None or inst.face_up:
                continue
            if inst.face_since >= conf.turn or inst.set_turn == conf.turn:
                continue
            out.append(FlipSummon(p, i))
            if inst.card in (MOF, MOD):
                want = _is_spell_cid if inst.card == MOF else _is_trap_cid
                for idx, cid in enumerate(ps.gy):
                    if want(cid):
                        out.append(FlipSummon(p, i, (p, GY, idx)))
        # Flint retargets
        for sloc, st in conf.iter_spelltraps():
            if st.card == FLINT and st.face_up and sloc[0] == p and st.equipped_to:
                for mloc, m in conf.iter_monsters():
                    if mloc[0] == p and m.face_up and mloc != st.equipped_to:
                        mv = ChangeEquipTarget(p, sloc, mloc)
                        if is_legal(conf, mv):
                            out.append(mv)

    # activations (hand, set cards, graveyard, extra deck)
    sources: list[tuple[str, Loc]] = []
    for cid in sorted(set(ps.hand)):
        if cid == FILLER:
            continue
        for effect in by_id(cid).effects:
            sources.append((effect, (p, HAND, cid)))
    for i, inst in enumerate(ps.spelltraps):
        if inst is not None and not inst.face_up:
            for effect in by_id(inst.card).effects:
                sources.append((effect, (p, SZONE, i)))
    for idx, cid in enumerate(ps.gy):
        if cid == ENDYMION:
            sources.append(("endymion_counter_summon", (p, GY, idx)))
    for cid in set(ps.extra_deck):
        for effect in by_id(cid).effects:
            sources.append((effect, (p, EXTRADECK, cid)))
    if ps.extra_zone is not None and ps.extra_zone.card == SVD:
        sources.append(("svd_negate", (p, EXTRA, 0)))

    for effect, source in sources:
        if effect not in EFFECTS:
            continue
        if not _activation_timing_ok(conf, p, effect, source):
            continue
        chk, _res, cand = EFFECTS[effect]
        combos = cand(conf, p, source) if cand else [((), ())]
        for targets, extras in itertools.islice(combos, _COMBO_CAP):
            try:
                chk(conf, p, source, tuple(targets), tuple(extras))
            except IllegalMove:
                continue
            out.append(ActivateEffect(p, effect, source, tuple(targets), tuple(extras)))

    if conf.phase == Phase.BATTLE and conf.turn > 1 \
            and _controls_faceup(conf, 1 - p, ATTRAFFIC) is None:
        for mloc, m in conf.iter_monsters():
            if mloc[0] != p or not m.face_up:
                continue
            mv = DeclareAttack(p, mloc, DIRECT)
            if is_legal(conf, mv):
                out.append(mv)
            for tloc, _t in conf.iter_monsters():
                if tloc[0] == 1 - p:
                    mv = DeclareAttack(p, mloc, tloc)
                    if is_legal(conf, mv):
                        out.append(mv)

    out.append(Pass(p))
    return _dedupe(out)


def _dedupe(moves: list[Move]) -> list[Move]:
    seen = set()
    out = []
    for m in moves:
        if m not in seen:
            seen.add(m)
            out.append(m)
    return out


# --- run validation ----------------------------------------------------------


def transition_ok(conf: Configuration, nxt: Configuration, move: Move) -> bool:
    """The predicate t: the move is legal and produces exactly nxt."""
    try:
        return apply(conf, move) == nxt
    except IllegalMove:
        return False


def is_initial(conf: Configuration) -> bool:
    if conf.turn != 0 or conf.phase != Phase.DRAW or conf.lp != (START_LP, START_LP):
        return False
    for p in (0, 1):
        ps = conf.players[p]
        if ps.hand or ps.gy or ps.banished or ps.field_zone or ps.extra_zone:
            return False
        if any(m is not None for m in ps.monsters) or any(s is not None for s in ps.spelltraps):
            return False
        if not 40 <= len(ps.deck) <= 60:
            return False
    return True


def validate_run(run: Run) -> bool:
    if not run.configs:
        return False
    if len(run.moves) != len(run.configs) - 1:
        return False
    if not is_initial(run.configs[0]):
        return False
    for i, move in enumerate(run.moves):
        if not transition_ok(run.configs[i], run.configs[i + 1], move):
            return False
    return True


def can_act(run: Run) -> bool:
    """The predicate I: Player 1 has a real choice or it is their turn."""
    conf = run.last()
    if conf.active == 0:
        return True
    return any(not isinstance(m, Pass) for m in legal_moves(conf, 0))
