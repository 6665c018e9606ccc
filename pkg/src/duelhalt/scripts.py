"""The scripted legal lines: both board setups and the counter loops.

The deck orders are frozen constants.  Every step is validated by the
engine as it is recorded, so a ScriptBroken here always means an effect
encoding changed underneath the line, never a silent divergence.

All scripts speak from Player 1's side; the opponent's forced plays
(cards handed over mid-line) are recorded as ordinary legal moves for
Player 2, tagged only by their position in the line.
"""

from __future__ import annotations

from dataclasses import dataclass

from .carddb import DeckList, deck_a, deck_b, filler_deck, lookup
from .errors import (
    BoardNotReady,
    IllegalMove,
    InsufficientCounters,
    NotLoopReady,
    ScriptBroken,
    ZeroTarget,
)
from .engine import (
    ActivateEffect,
    ChangeEquipTarget,
    Configuration,
    DeclareAttack,
    DiscardToLimit,
    DrawCard,
    DIRECT,
    FlipSummon,
    Move,
    NormalSummon,
    Pass,
    Phase,
    Run,
    SetSpellTrap,
    apply,
    initial_configuration,
)
from .engine.config import EXTRA, FZONE, GY, HAND, MZONE, SZONE
from .engine.moves import ChainLink
from .engine.rules import (
    flip_choice_extras,
    identity_order,
    make_bait_doll_move,
    spell_counters,
)


def _cid(name: str) -> int:
    return lookup(name).id


DBLSUM = _cid("Double Summon")
PROTECTOR = _cid("Protector of the Sanctuary")
MORPHJAR = _cid("Morphing Jar")
SOULDRAIN = _cid("Soul Drain")
DESERTSUN = _cid("Desert Sunlight")
YATA = _cid("Yata-Garasu")
VANITY = _cid("Vanity's Ruler")
POB = _cid("Pot of Benevolence")
OFFERINGS = _cid("Offerings to the Doomed")
MOF = _cid("Magician of Faith")
MOD = _cid("Mask of Darkness")
MASSIVEMORPH = _cid("Massivemorph")
POLEPOS = _cid("Pole Position")
GMC = _cid("Gold Moon Coin")
ENDYMION = _cid("Endymion, the Master Magician")
BOE = _cid("Book of Eclipse")
MST = _cid("Mystical Space Typhoon")
SOULREL = _cid("Soul Release")
POD = _cid("Pot of Desires")
POTDUAL = _cid("Pot of Duality")
RAINMERCY = _cid("Rain of Mercy")
MCOE = _cid("Magical Citadel of Endymion")
TOTK = _cid("Temple of the Kings")
UPSTART = _cid("Upstart Goblin")
BAITDOLL = _cid("Bait Doll")
GIFTCARD = _cid("Gift Card")
TORNADO = _cid("Localized Tornado")
FLINTLOCK = _cid("Flint Lock")
ODDEYES = _cid("Odd-Eyes Pendulum Dragon")
MSE = _cid("Magical Stone Excavation")
MORALE = _cid("Morale Boost")
MISTBODY = _cid("Mist Body")
ATTRAFFIC = _cid("Attraffic Control")
CREATSWAP = _cid("Creature Swap")
POLY = _cid("Polymerization")
FLINT = _cid("Flint")
RAIGEKI = _cid("Raigeki")
GAT = _cid("Give and Take")
REVREUSE = _cid("Reverse Reuse")
CLARA = _cid("Clara & Rushka, the Ventriloduo")
SVD = _cid("Starving Venemy Dragon")


@dataclass(frozen=True)
class ScriptResult:
    run: Run
    final: Configuration


class Line:
    """Accumulates a validated move sequence from a start configuration."""

    def __init__(self, conf: Configuration):
        self.configs: list[Configuration] = [conf]
        self.moves: list[Move] = []

    @property
    def conf(self) -> Configuration:
        return self.configs[-1]

    def do(self, move: Move) -> None:
        try:
            nxt = apply(self.conf, move)
        except IllegalMove as exc:
            raise ScriptBroken(len(self.moves), f"{move!r}: {exc}") from exc
        self.configs.append(nxt)
        self.moves.append(move)

    def result(self) -> ScriptResult:
        return ScriptResult(Run(tuple(self.configs), tuple(self.moves)), self.conf)


# --- small locators ---------------------------------------------------------


def _gy_index(conf: Configuration, p: int, cid: int) -> int:
    gy = conf.players[p].gy
    for i in range(len(gy) - 1, -1, -1):
        if gy[i] == cid:
            return i
    raise ScriptBroken(-1, f"card {cid} not in graveyard of P{p+1}")


def _free_szone(conf: Configuration, p: int) -> int:
    for i, inst in enumerate(conf.players[p].spelltraps):
        if inst is None:
            return i
    raise ScriptBroken(-1, "no free spell/trap zone")


def _free_mzone(conf: Configuration, p: int) -> int:
    for i, inst in enumerate(conf.players[p].monsters):
        if inst is None:
            return i
    raise ScriptBroken(-1, "no free monster zone")


def _mzone_of(conf: Configuration, p: int, cid: int, face_up=None) -> int:
    for i, inst in enumerate(conf.players[p].monsters):
        if inst is not None and inst.card == cid:
            if face_up is None or inst.face_up == face_up:
                return i
    raise ScriptBroken(-1, f"monster {cid} not on P{p+1}'s field")


def _szone_of(conf: Configuration, p: int, cid: int) -> int:
    for i, inst in enumerate(conf.players[p].spelltraps):
        if inst is not None and inst.card == cid:
            return i
    raise ScriptBroken(-1, f"spell/trap {cid} not on P{p+1}'s field")


def _pass_until(line: Line, pred) -> None:
    guard = 0
    while not pred(line.conf):
        line.do(Pass(line.conf.priority))
        guard += 1
        if guard > 60:
            raise ScriptBroken(len(line.moves), "phase walk did not converge")


def _to_phase(line: Line, phase: Phase) -> None:
    _pass_until(line, lambda c: c.phase == phase)


def _p1_turn(line: Line, actions, *, attack: bool = True, discard: tuple[int, ...] = (),
             stop_in_main: bool = False) -> None:
    """One Player 1 turn: draw, main actions, optional Yata attack, end."""
    conf = line.conf
    if conf.phase == Phase.DRAW and not conf.draw_done and conf.players[0].deck:
        line.do(DrawCard(0))
    _to_phase(line, Phase.MAIN1)
    for act in actions:
        act(line)
    if stop_in_main:
        return
    if attack:
        if YATA in line.conf.players[0].hand:
            _summon_yata(line)
        _to_phase(line, Phase.BATTLE)
        zone = _mzone_of(line.conf, 0, YATA, face_up=True)
        line.do(DeclareAttack(0, (0, MZONE, zone), DIRECT))
    _to_phase(line, Phase.END)
    if discard:
        line.do(DiscardToLimit(0, discard))
    turn = line.conf.turn
    _pass_until(line, lambda c: c.turn > turn)


def _p2_turn(line: Line, actions=()) -> None:
    """The opponent's turn: scripted actions in their main phase, else passes."""
    conf = line.conf
    assert conf.active == 1, "not the opponent's turn"
    if conf.phase == Phase.DRAW and not conf.draw_done and conf.players[1].deck:
        line.do(DrawCard(1))
    if actions:
        _to_phase(line, Phase.MAIN1)
        for act in actions:
            act(line)
    turn = line.conf.turn
    _pass_until(line, lambda c: c.turn > turn)


# action helpers (each returns a callable on the line)


def _ns(cid, zone=None, face_up=True, tributes=()):
    def act(line: Line):
        z = zone if zone is not None else _free_mzone(line.conf, 0)
        line.do(NormalSummon(0, cid, z, face_up, tuple(tributes)))
    return act


def _summon_yata(line: Line) -> None:
    line.do(NormalSummon(0, YATA, _free_mzone(line.conf, 0), True))


def _set_st(cid, player=0):
    def act(line: Line):
        from .carddb import by_id
        zone = -1 if by_id(cid).kind.value == "field spell" else _free_szone(line.conf, player)
        line.do(SetSpellTrap(player, cid, zone))
    return act


def _activate_hand(cid, targets=(), extras=(), player=0, effect=None):
    def act(line: Line):
        from .carddb import by_id
        eff = effect or by_id(cid).effects[0]
        tg = targets(line.conf) if callable(targets) else targets
        ex = extras(line.conf) if callable(extras) else extras
        line.do(ActivateEffect(player, eff, (player, HAND, cid), tuple(tg), tuple(ex)))
    return act


def _activate_set(cid, targets=(), extras=(), player=0, effect=None):
    def act(line: Line):
        from .carddb import by_id
        eff = effect or by_id(cid).effects[0]
        zone = _szone_of(line.conf, player, cid)
        tg = targets(line.conf) if callable(targets) else targets
        ex = extras(line.conf) if callable(extras) else extras
        line.do(ActivateEffect(player, eff, (player, SZONE, zone), tuple(tg), tuple(ex)))
    return act


def _flip(zone_cid, recover_cid=None, player=0):
    def act(line: Line):
        zone = _mzone_of(line.conf, player, zone_cid, face_up=False)
        recover = None
        if recover_cid is not None:
            recover = (player, GY, _gy_index(line.conf, player, recover_cid))
        line.do(FlipSummon(player, zone, recover))
    return act


def _double_summon_from_hand(line: Line) -> None:
    line.do(ActivateEffect(0, "double_summon_extra", (0, HAND, DBLSUM)))


# --- deck A ------------------------------------------------------------------


def deck_a_order() -> tuple[int, ...]:
    """Frozen permutation of deck_a's main pile for the scripted line."""
    want = [
        # opening hand
        DBLSUM, PROTECTOR, MORPHJAR, SOULDRAIN, DESERTSUN,
        # Morphing Jar draw
        YATA, VANITY, DBLSUM, POB, POB,
        # singles
        POB,        # t3
        OFFERINGS,  # t5  (draws skip t7)
        DBLSUM,     # t9
        MOF,        # t11
        MOF,        # t13
        MOD,        # t15
        MASSIVEMORPH,  # t17
        POLEPOS,    # t19
        GMC,        # t21
        ENDYMION,   # t23
        BOE,        # t25
        MST,        # t27
        SOULREL,    # t29
        POD,        # t31
        # the ten cards Pot of Desires banishes face-down
        MOF, SOULREL, SOULREL, RAINMERCY, RAINMERCY, RAINMERCY,
        POTDUAL, TORNADO, TORNADO, GIFTCARD,
        # Pot of Desires' two draws
        MCOE, TOTK,
        # tail
        UPSTART,    # t33
        UPSTART,    # drawn by the first Upstart Goblin
        UPSTART,    # t35
        BAITDOLL,   # drawn by the second Upstart Goblin
        DESERTSUN,  # t37, held
        GIFTCARD,   # t39, held through the hand-limit discard
        TORNADO,    # t41 (the last card)
    ]
    return _order_for(deck_a(), want)


def _order_for(deck: DeckList, want: list[int]) -> tuple[int, ...]:
    pool = list(deck.main)
    used = [False] * len(pool)
    order = []
    for cid in want:
        for i, c in enumerate(pool):
            if c == cid and not used[i]:
                used[i] = True
                order.append(i)
                break
        else:
            raise ScriptBroken(-1, f"deck order wants a missing copy of {cid}")
    order.extend(i for i in range(len(pool)) if not used[i])
    if len(order) != len(pool):
        raise ScriptBroken(-1, "deck order is not a permutation")
    return tuple(order)


def _opening(line: Line) -> None:
    for _ in range(5):
        line.do(DrawCard(0))
    for _ in range(5):
        line.do(DrawCard(1))
    line.do(Pass(0))


def _turn1(line: Line) -> None:
    _to_phase(line, Phase.MAIN1)
    line.do(NormalSummon(0, PROTECTOR, 0, False))
    _double_summon_from_hand(line)
    line.do(NormalSummon(0, MORPHJAR, 1, False))
    line.do(SetSpellTrap(0, SOULDRAIN, 0))
    line.do(SetSpellTrap(0, DESERTSUN, 1))
    turn = line.conf.turn
    _pass_until(line, lambda c: c.turn > turn)


def _turn2_wipe(line: Line) -> None:
    # opponent's first turn: they draw; in their standby we spring the
    # Desert Sunlight + Soul Drain chain and Morphing Jar wipes the hands
    line.do(DrawCard(1))
    line.do(Pass(1))     # draw-phase window offered to us
    line.do(Pass(0))     # decline; standby begins
    line.do(Pass(1))     # opponent passes standby; our window
    ds_zone = _szone_of(line.conf, 0, DESERTSUN)
    sd_zone = _szone_of(line.conf, 0, SOULDRAIN)
    line.do(ActivateEffect(
        0, "desert_sunlight_flip_up", (0, SZONE, ds_zone),
        chain=(ChainLink("soul_drain_gy_lock", (0, SZONE, sd_zone)),),
    ))
    turn = line.conf.turn
    _pass_until(line, lambda c: c.turn > turn)


def _t3_lock(line: Line) -> None:
    prot = _mzone_of(line.conf, 0, PROTECTOR)
    line.do(NormalSummon(0, VANITY, prot, True, (prot,)))
    _double_summon_from_hand(line)
    _summon_yata(line)
    for _ in range(3):
        line.do(ActivateEffect(0, "pob_return_two", (0, HAND, POB),
                               targets=((1, GY, 0), (1, GY, 1))))


def setup_run_a() -> ScriptResult:
    """Replay of the first construction's whole setup line."""
    conf = initial_configuration(
        deck_a(), filler_deck(), deck_a_order(), identity_order(filler_deck())
    )
    line = Line(conf)
    _opening(line)
    _turn1(line)
    _turn2_wipe(line)
    _p1_turn(line, [_t3_lock])                       # t3
    _p2_turn(line)
    _p1_turn(line, [_activate_hand(OFFERINGS, targets=lambda c: (
        (0, MZONE, _mzone_of(c, 0, MORPHJAR)),))])   # t5; skips our t7 draw
    _p2_turn(line)
    _p1_turn(line, [_summon_yata], attack=True)      # t7 (no draw)
    _p2_turn(line)

    def hold(_line):
        pass

    def dbl_then(cid):
        def act(line: Line):
            _double_summon_from_hand(line)
            _summon_yata(line)
            line.do(NormalSummon(0, cid, _free_mzone(line.conf, 0), False))
        return act

    def flip_then(flip_cid, recover_cid, set_cid):
        def act(line: Line):
            _flip(flip_cid, recover_cid)(line)
            _double_summon_from_hand(line)
            _summon_yata(line)
            line.do(NormalSummon(0, set_cid, _free_mzone(line.conf, 0), False))
        return act

    # t9..t15: bank a Double Summon, then roll out the flip monsters,
    # recycling the same Double Summon through each Magician of Faith
    _p1_turn(line, [hold, _summon_yata])             # t9: hold Double Summon
    _p2_turn(line)
    _p1_turn(line, [dbl_then(MOF)], attack=True)     # t11
    _p2_turn(line)
    _p1_turn(line, [flip_then(MOF, DBLSUM, MOF)])    # t13
    _p2_turn(line)
    _p1_turn(line, [flip_then(MOF, DBLSUM, MOD)])    # t15
    _p2_turn(line)
    _p1_turn(line, [lambda l: _flip(MOD, None)(l), _summon_yata])  # t17: hold Massivemorph
    _p2_turn(line)
    _p1_turn(line, [_summon_yata])                   # t19: hold Pole Position
    _p2_turn(line)
    _p1_turn(line, [_activate_hand(GMC, targets=(
        (0, HAND, MASSIVEMORPH), (0, HAND, POLEPOS))), _summon_yata])  # t21
    _p2_turn(line, actions=[_set_st(MASSIVEMORPH, player=1), _set_st(POLEPOS, player=1)])
    _p1_turn(line, [_summon_yata])                   # t23: hold Endymion
    _p2_turn(line, actions=[
        _activate_set(MASSIVEMORPH, player=1,
                      targets=lambda c: ((0, MZONE, _mzone_of(c, 0, VANITY)),)),
        _activate_set(POLEPOS, player=1),
    ])
    _p1_turn(line, [_summon_yata])                   # t25: hold Book of Eclipse
    _p2_turn(line)
    _p1_turn(line, [_activate_hand(MST, targets=lambda c: (
        (0, SZONE, _szone_of(c, 0, SOULDRAIN)),)), _summon_yata])  # t27
    _p2_turn(line)

    def soul_release(line: Line) -> None:
        conf = line.conf
        targets = tuple(
            (0, GY, _gy_index(conf, 0, cid))
            for cid in (PROTECTOR, MORPHJAR, SOULDRAIN, DESERTSUN, MST)
        )
        line.do(ActivateEffect(0, "soul_release_banish", (0, HAND, SOULREL),
                               targets=targets))

    _p1_turn(line, [soul_release, _summon_yata])     # t29
    _p2_turn(line)

    def pot_of_desires(line: Line) -> None:
        line.do(ActivateEffect(0, "pot_desires", (0, HAND, POD)))
        line.do(SetSpellTrap(0, MCOE, -1))
        line.do(SetSpellTrap(0, TOTK, _free_szone(line.conf, 0)))

    _p1_turn(line, [pot_of_desires, _summon_yata])   # t31
    _p2_turn(line)
    _p1_turn(line, [_activate_hand(UPSTART), _summon_yata])  # t33: draws Upstart #1
    _p2_turn(line)
    _p1_turn(line, [_activate_hand(UPSTART), _summon_yata])  # t35: draws Bait Doll
    _p2_turn(line)
    _p1_turn(line, [_summon_yata])                   # t37: hold Desert Sunlight
    _p2_turn(line)
    _p1_turn(line, [_summon_yata], discard=(ENDYMION,))      # t39: hold Gift Card
    _p2_turn(line)

    def finale(line: Line) -> None:
        # the temple lets the freshly set Gift Card fire right away
        line.do(ActivateEffect(0, "temple_trap_allowance",
                               (0, SZONE, _szone_of(line.conf, 0, TOTK))))
        gc_zone = _free_szone(line.conf, 0)
        line.do(SetSpellTrap(0, GIFTCARD, gc_zone))
        line.do(ActivateEffect(0, "gift_card_gain", (0, SZONE, gc_zone)))
        line.do(SetSpellTrap(0, TORNADO, _free_szone(line.conf, 0)))
        line.do(ActivateEffect(0, "citadel_counters", (0, FZONE, 0)))

    _p1_turn(line, [finale], stop_in_main=True)      # t41: the board is reached
    return line.result()


# --- the counter loops -------------------------------------------------------


def _require_loop_ready(conf: Configuration, need_counters: int = 0) -> None:
    p1 = conf.players[0]
    if conf.active != 0 or conf.priority != 0 or conf.phase not in (Phase.MAIN1, Phase.MAIN2):
        raise NotLoopReady("needs Player 1's main phase")
    fz = p1.field_zone
    if fz is None or fz.card != MCOE or not fz.face_up:
        raise NotLoopReady("Magical Citadel is not active")
    if need_counters and fz.counters < need_counters:
        raise InsufficientCounters(f"needs {need_counters} counters, have {fz.counters}")
    if need_counters == 0:
        for cid in (BOE, BAITDOLL, DESERTSUN):
            if cid not in p1.hand:
                raise NotLoopReady(f"loop card {cid} not in hand")
        if UPSTART not in p1.hand and UPSTART not in p1.gy:
            raise NotLoopReady("Upstart Goblin is out of the loop orbit")
        faces = [m.card for m in p1.monsters if m is not None and m.face_up]
        if faces.count(MOF) < 2 or MOD not in faces:
            raise NotLoopReady("flip monsters are not face-up on the field")


def increment_cycle_moves(conf: Configuration) -> list[Move]:
    """The four-activation cycle worth +3 counters, as explicit moves."""
    moves: list[Move] = [ActivateEffect(0, "boe_flip_all", (0, HAND, BOE))]
    # after Book of Eclipse the flip monsters are face down; Desert
    # Sunlight (forced by Bait Doll) turns them back up and their flip
    # effects restock the hand from the graveyard
    sim = apply(conf, moves[0])
    ds_zone = None
    for i, inst in enumerate(sim.players[0].spelltraps):
        if inst is None:
            ds_zone = i
            break
    if ds_zone is None:
        raise NotLoopReady("no free spell/trap zone for Desert Sunlight")
    moves.append(SetSpellTrap(0, DESERTSUN, ds_zone))
    sim = apply(sim, moves[1])

    # plan the flip recoveries against the graveyard as it will stand when
    # the triggers resolve: Book of Eclipse and Bait Doll have been spent,
    # and Desert Sunlight reaches the graveyard before the triggers fire
    future_gy = list(sim.players[0].gy)
    future_gy.append(DESERTSUN)  # the spent trap lands before the triggers
    pairs = []
    zones = sorted(
        i for i, inst in enumerate(sim.players[0].monsters)
        if inst is not None and not inst.face_up and inst.card in (MOF, MOD)
    )
    mof_seen = 0
    for z in zones:
        inst = sim.players[0].monsters[z]
        if inst.card == MOF:
            want = BOE if mof_seen == 0 else (UPSTART if UPSTART in future_gy else None)
            mof_seen += 1
        else:
            want = DESERTSUN
        if want is None or want not in future_gy:
            pairs.append((z, None))
            continue
        idx = future_gy.index(want)
        pairs.append((z, idx))
        del future_gy[idx]
    extras = flip_choice_extras(pairs)
    moves.append(make_bait_doll_move(0, (0, HAND, BAITDOLL), (0, SZONE, ds_zone), extras))
    sim = apply(sim, moves[2])
    moves.append(ActivateEffect(0, "upstart_draw", (0, HAND, UPSTART)))
    return moves


def increment_cycle(conf: Configuration) -> ScriptResult:
    """One full cycle: counters +3, loop cards back in their orbits."""
    _require_loop_ready(conf)
    line = Line(conf)
    for mv in increment_cycle_moves(conf):
        line.do(mv)
    return line.result()


def decrement_cycle(conf: Configuration) -> ScriptResult:
    """Summon the magician from the graveyard (-6), destroy it (+1)."""
    _require_loop_ready(conf, need_counters=6)
    p1 = conf.players[0]
    if ENDYMION not in p1.gy:
        raise NotLoopReady("Endymion is not parked in the graveyard")
    if OFFERINGS not in p1.gy and OFFERINGS not in p1.hand:
        raise NotLoopReady("Offerings to the Doomed is out of the orbit")
    line = Line(conf)
    zone = _free_mzone(conf, 0)
    extras = [zone, 0]
    if OFFERINGS in p1.gy:
        extras[1] = 1 + _gy_index(conf, 0, OFFERINGS)
    line.do(ActivateEffect(
        0, "endymion_counter_summon", (0, GY, _gy_index(conf, 0, ENDYMION)),
        extras=tuple(extras),
    ))
    line.do(ActivateEffect(
        0, "offerings_destroy_skip", (0, HAND, OFFERINGS),
        targets=((0, MZONE, zone),),
    ))
    return line.result()


def set_counters(conf: Configuration, n: int) -> ScriptResult:
    """Reach exactly n counters via increment/decrement compositions."""
    if n == 0:
        raise ZeroTarget("counter value 0 is reserved for the empty string")
    if n < 0:
        raise ZeroTarget("counter targets are positive")
    _require_loop_ready(conf)
    cur = spell_counters(conf)
    delta = n - cur
    b = 0
    while (delta + 5 * b) % 3 != 0 or (delta + 5 * b) < 0:
        b += 1
        if b > 10000:
            raise NotLoopReady("no cycle composition found")
    a = (delta + 5 * b) // 3
    line = Line(conf)
    for _ in range(a):
        for mv in increment_cycle_moves(line.conf):
            line.do(mv)
    for _ in range(b):
        frag = decrement_cycle(line.conf)
        for mv in frag.run.moves:
            line.do(mv)
    if spell_counters(line.conf) != n:
        raise ScriptBroken(len(line.moves), "counter plan missed the target")
    return line.result()


def _negate_protector_if_needed(line: Line) -> None:
    """Second construction: silence their draw warden before the loops."""
    conf = line.conf
    ez = conf.players[0].extra_zone
    if ez is None or ez.card != SVD or not ez.face_up or "svd_negate" in conf.opt_used:
        return
    for i, m in enumerate(conf.players[1].monsters):
        if m is not None and m.card == PROTECTOR and m.face_up and not m.negated:
            line.do(ActivateEffect(0, "svd_negate", (0, EXTRA, 0),
                                   targets=((1, MZONE, i),)))
            return


def turn_tick(conf: Configuration) -> ScriptResult:
    """One sustaining macro turn: counters +1, both draw locks renewed.

    Runs two increment cycles and one decrement, summons and attacks with
    the spirit, and plays through the opponent's answering turn (they pass;
    their draw stays skipped).  Ends at the start of Player 1's next main
    phase.
    """
    line = Line(conf)
    if line.conf.phase == Phase.DRAW:
        _to_phase(line, Phase.MAIN1)
    _negate_protector_if_needed(line)
    _require_loop_ready(line.conf)
    for _ in range(2):
        for mv in increment_cycle_moves(line.conf):
            line.do(mv)
    for mv in decrement_cycle(line.conf).run.moves:
        line.do(mv)
    _summon_yata(line)
    _to_phase(line, Phase.BATTLE)
    zone = _mzone_of(line.conf, 0, YATA, face_up=True)
    line.do(DeclareAttack(0, (0, MZONE, zone), DIRECT))
    turn = line.conf.turn
    _pass_until(line, lambda c: c.turn > turn)
    _p2_turn(line)
    if line.conf.phase == Phase.DRAW:
        _to_phase(line, Phase.MAIN1)
    return line.result()


# --- deck B -------------------------------------------------------------------


def deck_b_order() -> tuple[int, ...]:
    want = [
        DBLSUM, PROTECTOR, MORPHJAR, SOULDRAIN, DESERTSUN,
        YATA, VANITY, DBLSUM, POB, POB,
        POB,        # t3
        OFFERINGS,  # t5 (skips t7)
        FLINTLOCK,  # t9
        FLINTLOCK,  # t11
        MST,        # t13: Soul Drain goes early to free its zone
        MSE,        # t15
        MOF,        # t17
        MASSIVEMORPH,  # t19
        MORALE,     # t21
        MISTBODY,   # t23
        GAT,        # t25
        GAT,        # t27
        GAT,        # t29
        REVREUSE,   # t31
        ATTRAFFIC,  # t33
        CREATSWAP,  # t35
        GMC,        # t37
        ENDYMION,   # t39
        ODDEYES,    # t41
        POLY,       # t43
        MASSIVEMORPH,  # t45
        FLINT,      # t47
        GMC,        # t49
        POLEPOS,    # t51
        GMC,        # t53
        RAIGEKI,    # t55
        MCOE,       # t57
        TOTK,       # t59
        MOF,        # t61
        MOD,        # t63
        UPSTART,    # t65
        BOE,        # t67
        BAITDOLL,   # t69
        TORNADO,    # t71
        TORNADO,    # t73
        TORNADO,    # t75 (the last card)
    ]
    return _order_for(deck_b(), want)


def setup_run_b() -> ScriptResult:
    """Replay of the second construction's whole setup line."""
    conf = initial_configuration(
        deck_b(), filler_deck(), deck_b_order(), identity_order(filler_deck())
    )
    line = Line(conf)
    _opening(line)
    _turn1(line)
    _turn2_wipe(line)
    _p1_turn(line, [_t3_lock])                        # t3
    _p2_turn(line)
    _p1_turn(line, [_activate_hand(OFFERINGS, targets=lambda c: (
        (0, MZONE, _mzone_of(c, 0, MORPHJAR)),))])    # t5
    _p2_turn(line)
    _p1_turn(line, [_summon_yata], attack=True)       # t7 (no draw)
    _p2_turn(line)
    _p1_turn(line, [_summon_yata])                    # t9: hold Flint Lock
    _p2_turn(line)
    _p1_turn(line, [_summon_yata])                    # t11: hold Flint Lock
    _p2_turn(line)
    _p1_turn(line, [_activate_hand(MST, targets=lambda c: (
        (0, SZONE, _szone_of(c, 0, SOULDRAIN)),)), _summon_yata])  # t13
    _p2_turn(line)

    def mse(line: Line) -> None:
        line.do(ActivateEffect(
            0, "mse_discard_recover", (0, HAND, MSE),
            targets=((0, GY, _gy_index(line.conf, 0, DBLSUM)),),
            extras=(FLINTLOCK, FLINTLOCK),
        ))

    _p1_turn(line, [mse, _summon_yata])               # t15
    _p2_turn(line)

    def dbl_set_mof(line: Line) -> None:
        _double_summon_from_hand(line)
        _summon_yata(line)
        line.do(NormalSummon(0, MOF, _free_mzone(line.conf, 0), False))

    _p1_turn(line, [dbl_set_mof])                     # t17
    _p2_turn(line)
    _p1_turn(line, [_set_st(MASSIVEMORPH), lambda l: _flip(MOF, DBLSUM)(l),
                    _summon_yata])                    # t19
    _p2_turn(line)
    _p1_turn(line, [_activate_set(MASSIVEMORPH, targets=lambda c: (
        (0, MZONE, _mzone_of(c, 0, MOF, face_up=True)),)), _summon_yata])  # t21
    _p2_turn(line)
    _p1_turn(line, [_summon_yata])                    # t23: hold Mist Body
    _p2_turn(line)
    _p1_turn(line, [_set_st(GAT), _summon_yata])      # t25
    _p2_turn(line)
    _p1_turn(line, [_set_st(GAT), _summon_yata])      # t27
    _p2_turn(line)
    _p1_turn(line, [_set_st(GAT), _summon_yata])      # t29
    _p2_turn(line)
    _p1_turn(line, [_set_st(REVREUSE), _summon_yata])  # t31
    _p2_turn(line)

    def attraffic_and_link(line: Line) -> None:
        # link first so the spent continuous trap frees its zone
        mof = _mzone_of(line.conf, 0, MOF, face_up=True)
        line.do(ActivateEffect(0, "clara_link_summon", (0, 8, CLARA),
                               targets=((0, MZONE, mof),)))
        line.do(ActivateEffect(0, "attraffic_control", (0, HAND, ATTRAFFIC)))
        _summon_yata(line)

    _p1_turn(line, [attraffic_and_link])              # t33
    _p2_turn(line)

    def board_give(line: Line) -> None:
        # Reverse Reuse plants our Magician on their side, Creature Swap
        # trades it for the ventriloquist pair, then all three Give and
        # Takes chain to rebuild their board from our graveyard
        conf = line.conf
        line.do(ActivateEffect(
            0, "reverse_reuse", (0, SZONE, _szone_of(conf, 0, REVREUSE)),
            targets=((0, GY, _gy_index(conf, 0, MOF)),), extras=(0,),
        ))
        conf = line.conf
        line.do(ActivateEffect(
            0, "creature_swap", (0, HAND, CREATSWAP),
            targets=((0, EXTRA, 0), (1, MZONE, 0)),
        ))
        conf = line.conf
        gy = conf.players[0].gy
        monsters = sorted(
            (i for i, c in enumerate(gy) if c in (PROTECTOR, FLINTLOCK)),
        )
        base, l1, l2 = monsters[0], monsters[1], monsters[2]
        z1, z2, z3 = [i for i in range(5) if conf.players[1].monsters[i] is None][:3]
        gat_zones = [_szone_of(conf, 0, GAT)]
        for i, inst in enumerate(conf.players[0].spelltraps):
            if inst is not None and inst.card == GAT and i not in gat_zones:
                gat_zones.append(i)
        line.do(ActivateEffect(
            0, "give_and_take", (0, SZONE, gat_zones[0]),
            targets=((0, GY, base),), extras=(z1,),
            chain=(
                ChainLink("give_and_take", (0, SZONE, gat_zones[1]),
                          ((0, GY, l1),), (z2,)),
                ChainLink("give_and_take", (0, SZONE, gat_zones[2]),
                          ((0, GY, l2),), (z3,)),
            ),
        ))
        _summon_yata(line)

    _p1_turn(line, [board_give])                      # t35
    _p2_turn(line)

    def gmc_morale_mist(line: Line) -> None:
        line.do(ActivateEffect(0, "gmc_gift", (0, HAND, GMC),
                               targets=((0, HAND, MORALE), (0, HAND, MISTBODY))))
        _flip(MOF, None)(line)   # the swapped-back Magician turns face-up
        _summon_yata(line)

    _p1_turn(line, [gmc_morale_mist])                 # t37
    _p2_turn(line, actions=[
        _activate_hand(MORALE, player=1),
        _activate_hand(MISTBODY, player=1, targets=lambda c: (
            (1, MZONE, _mzone_of(c, 1, CLARA)),)),
    ])
    _p1_turn(line, [_summon_yata])                    # t39: hold Endymion
    _p2_turn(line)
    _p1_turn(line, [_summon_yata])                    # t41: hold Odd-Eyes
    _p2_turn(line)

    def fuse(line: Line) -> None:
        line.do(ActivateEffect(
            0, "polymerization_fuse", (0, HAND, POLY),
            targets=((0, HAND, ODDEYES), (0, HAND, ENDYMION)),
        ))
        _summon_yata(line)

    _p1_turn(line, [fuse])                            # t43
    _p2_turn(line)
    _p1_turn(line, [_summon_yata])                    # t45: hold Massivemorph #2
    _p2_turn(line)
    _p1_turn(line, [_summon_yata])                    # t47: hold Flint
    _p2_turn(line)
    _p1_turn(line, [_activate_hand(GMC, targets=(
        (0, HAND, MASSIVEMORPH), (0, HAND, FLINT))), _summon_yata])  # t49
    _p2_turn(line, actions=[
        _activate_hand(FLINT, player=1, targets=lambda c: (
            (1, MZONE, _mzone_of(c, 1, CLARA)),)),
        _set_st(MASSIVEMORPH, player=1),
    ])
    _p1_turn(line, [_summon_yata])                    # t51: hold Pole Position
    _p2_turn(line, actions=[
        _activate_set(MASSIVEMORPH, player=1, targets=lambda c: ((0, EXTRA, 0),)),
    ])
    _p1_turn(line, [_activate_hand(GMC, targets=((0, HAND, POLEPOS),)),
                    _summon_yata])                    # t53
    _p2_turn(line, actions=[_set_st(POLEPOS, player=1)])
    _p1_turn(line, [_summon_yata])                    # t55: hold Raigeki
    _p2_turn(line, actions=[_activate_set(POLEPOS, player=1)])
    _p1_turn(line, [lambda l: l.do(SetSpellTrap(0, MCOE, -1)), _summon_yata])
    _p2_turn(line)
    _p1_turn(line, [lambda l: l.do(SetSpellTrap(0, TOTK, _free_szone(l.conf, 0))),
                    _summon_yata])
    _p2_turn(line)
    _p1_turn(line, [dbl_set_mof])                     # second Magician
    _p2_turn(line)
    _p1_turn(line, [flip_then_mod := (lambda l: (
        _flip(MOF, DBLSUM)(l),
        _double_summon_from_hand(l),
        _summon_yata(l),
        l.do(NormalSummon(0, MOD, _free_mzone(l.conf, 0), False)),
    ) and None)])                                     # Mask of Darkness
    _p2_turn(line)
    _p1_turn(line, [lambda l: _flip(MOD, DESERTSUN)(l), _summon_yata])  # recover DS
    _p2_turn(line)
    _p1_turn(line, [_summon_yata])                    # hold Book of Eclipse
    _p2_turn(line)
    _p1_turn(line, [_summon_yata])                    # hold Bait Doll
    _p2_turn(line)
    _p1_turn(line, [_summon_yata], discard=(TORNADO,))  # first stray Tornado
    _p2_turn(line)
    _p1_turn(line, [_summon_yata], discard=(TORNADO,))  # second stray Tornado
    _p2_turn(line)

    def finale_b(line: Line) -> None:
        line.do(SetSpellTrap(0, TORNADO, _free_szone(line.conf, 0)))
        line.do(ActivateEffect(0, "temple_trap_allowance",
                               (0, SZONE, _szone_of(line.conf, 0, TOTK))))
        line.do(ActivateEffect(0, "citadel_counters", (0, FZONE, 0)))
        prot = _mzone_of(line.conf, 1, PROTECTOR, face_up=True)
        line.do(ActivateEffect(0, "svd_negate", (0, EXTRA, 0),
                               targets=((1, MZONE, prot),)))

    _p1_turn(line, [finale_b], stop_in_main=True)
    return line.result()


def documented_final_board(deck: str) -> dict:
    """The target boards the setups must reach, field for field."""
    hand_a = sorted(["Yata-Garasu", "Bait Doll", "Upstart Goblin",
                     "Book of Eclipse", "Desert Sunlight"])
    base = {
        "monsters": sorted([("Magician of Faith", True), ("Magician of Faith", True),
                            ("Mask of Darkness", True), ("Vanity's Ruler", True)]),
        "field": ("Magical Citadel of Endymion", 0),
        "deck": 0,
        "opp_hand": 0,
        "opp_gy": 0,
        "opp_banished": 0,
    }
    if deck == "a":
        return {
            **base,
            "hand": hand_a,
            "extra": None,
            "st": sorted([("Temple of the Kings", True), ("Localized Tornado", False)]),
            "opp_monsters": [],
            "opp_st": sorted(["Massivemorph", "Pole Position"]),
        }
    if deck == "b":
        return {
            **base,
            "hand": sorted(hand_a + ["Raigeki"]),
            "extra": ("Starving Venemy Dragon", True),
            "st": sorted([("Attraffic Control", True), ("Temple of the Kings", True),
                          ("Localized Tornado", False)]),
            "opp_monsters": sorted(["Clara & Rushka, the Ventriloduo", "Flint Lock",
                                    "Flint Lock", "Protector of the Sanctuary"]),
            "opp_st": sorted(["Flint", "Massivemorph", "Mist Body", "Morale Boost",
                              "Pole Position"]),
        }
    raise ScriptBroken(-1, f"unknown deck {deck!r}")


def board_diff(conf: Configuration, deck: str) -> list[str]:
    """Differences between a configuration and the documented target."""
    from .carddb import card_name

    want = documented_final_board(deck)
    p1, p2 = conf.players
    got = {
        "monsters": sorted((m.name, m.face_up) for m in p1.monsters if m is not None),
        "field": p1.field_zone and (p1.field_zone.name, p1.field_zone.counters),
        "deck": len(p1.deck),
        "hand": sorted(card_name(c) for c in p1.hand),
        "extra": p1.extra_zone and (p1.extra_zone.name, p1.extra_zone.face_up),
        "st": sorted((s.name, s.face_up) for s in p1.spelltraps if s is not None),
        "opp_monsters": sorted(m.name for m in p2.monsters if m is not None),
        "opp_st": sorted(s.name for s in p2.spelltraps if s is not None),
        "opp_hand": len(p2.hand),
        "opp_gy": len(p2.gy),
        "opp_banished": len(p2.banished),
    }
    return [
        f"{key}: expected {want[key]!r}, got {got[key]!r}"
        for key in want
        if got[key] != want[key]
    ]


def flintlock_gain(conf: Configuration, k: int) -> ScriptResult:
    """The opponent chooses the number k: k lock pulls, then park the equip.

    Expects the second construction's board on the opponent's turn; the
    gain is 1000 per pull and the equip ends back on the ventriloquists.
    """
    if k < 0:
        raise BoardNotReady("k must be non-negative")
    if conf.active != 1:
        raise BoardNotReady("the number channel runs on the opponent's turn")
    line = Line(conf)
    if line.conf.phase == Phase.DRAW:
        _pass_until(line, lambda c: c.phase == Phase.MAIN1 or c.turn > conf.turn)
    p2 = line.conf.players[1]
    locks = [i for i, m in enumerate(p2.monsters)
             if m is not None and m.card == FLINTLOCK and m.face_up]
    clara = [i for i, m in enumerate(p2.monsters)
             if m is not None and m.card == CLARA]
    if len(locks) < 2 or not clara:
        raise BoardNotReady("the two Flint Locks and the ventriloquists are needed")
    flint_zone = None
    for i, st in enumerate(p2.spelltraps):
        if st is not None and st.card == FLINT and st.face_up:
            flint_zone = i
    if flint_zone is None:
        raise BoardNotReady("Flint is not on the opponent's field")
    eq = (1, SZONE, flint_zone)
    for i in range(k):
        line.do(ChangeEquipTarget(1, eq, (1, MZONE, locks[i % 2])))
    if k:
        line.do(ChangeEquipTarget(1, eq, (1, MZONE, clara[0])))
    return line.result()
