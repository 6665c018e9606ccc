"""Strategies, the budgeted winning checker, and strategy trees.

A strategy is a partial function from runs to Player 1's next
configuration.  The three families here plan one of their own turns at a
time and replay the plan move by move; outside their scripted prefixes
they are undefined, matching the localization picture.

The winning checker explores every opponent line inside a budget.  The
opponent's only real choices in these constructions are numbers spoken
through the equip-retarget channel, so a turn of theirs is canonicalized
to "pull the equip k times, then park it (or not)".  A budget can declare
its number cap exhaustive (the bounded-adversary reading used by the desk
tests); otherwise running into the cap yields an honest Undetermined.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .coding import pair, unpair, untriple
from .errors import (
    IllegalMove,
    InsufficientCounters,
    NotLoopReady,
    ScriptBroken,
    StrategyUndefinedAtRoot,
)
from .engine import (
    ActivateEffect,
    ChangeEquipTarget,
    Configuration,
    DeclareAttack,
    DIRECT,
    DiscardToLimit,
    DrawCard,
    Move,
    NormalSummon,
    Pass,
    Phase,
    Run,
    apply,
    is_winning_state,
)
from .errors import MalformedCode
from .engine.config import EXTRA, HAND, MZONE, SZONE
from .engine.rules import spell_counters
from .scripts import (
    CLARA,
    FLINT,
    FLINTLOCK,
    Line,
    RAIGEKI,
    YATA,
    _free_mzone,
    _mzone_of,
    _negate_protector_if_needed,
    _require_loop_ready,
    decrement_cycle,
    increment_cycle_moves,
)
from . import tm as tmmod


@dataclass(frozen=True)
class Budget:
    max_turns: int
    max_opponent_number: int
    cap_exhaustive: bool = False

    def __post_init__(self):
        if self.max_turns <= 0 or self.max_opponent_number <= 0:
            raise ValueError("budget components must be positive")


WIN = "win"
LOSS = "loss"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class WinVerdict:
    kind: str
    witness: tuple[Move, ...] = ()
    budget: Optional[Budget] = None

    @property
    def is_win(self) -> bool:
        return self.kind == WIN


class Strategy:
    """Deterministic turn planner with per-configuration move lookup."""

    descriptor: tuple

    def __init__(self, descriptor):
        self.descriptor = descriptor
        self._plan: dict[Configuration, Move] = {}

    # -- public surface -------------------------------------------------------

    def decide(self, run: Run) -> Optional[Configuration]:
        """The next configuration after Player 1's move, or None (undefined)."""
        move = self.next_move(run)
        if move is None:
            return None
        try:
            return apply(run.last(), move)
        except IllegalMove:
            return None

    def next_move(self, run: Run) -> Optional[Move]:
        if not isinstance(run, Run):
            raise TypeError("strategies take the whole run, not a configuration")
        conf = run.last()
        if conf.priority != 0:
            return None
        if conf.active == 1:
            return Pass(0)  # response windows during their turn: wave through
        if conf in self._plan:
            return self._plan[conf]
        planned = self._plan_turn(conf, run)
        if not planned:
            return None
        moves, configs = planned
        for c, mv in zip(configs, moves):
            self._plan[c] = mv
        return self._plan.get(conf)

    # -- subclass hook --------------------------------------------------------

    def _plan_turn(self, conf: Configuration, run: Run
                   ) -> Optional[tuple[list[Move], list[Configuration]]]:
        """Plan the turn from conf: (moves, the configs they apply from)."""
        raise NotImplementedError


class _PlanBuilder:
    """Simulates a turn plan with the scripts' vocabulary."""

    def __init__(self, conf: Configuration):
        self.line = Line(conf)

    @property
    def conf(self) -> Configuration:
        return self.line.conf

    def moves(self) -> list[Move]:
        return list(self.line.moves)

    def plan(self) -> tuple[list[Move], list]:
        return list(self.line.moves), list(self.line.configs[:-1])

    def to_phase(self, phase: Phase) -> None:
        guard = 0
        while self.conf.phase != phase and self.conf.turn == self.line.configs[0].turn:
            self.line.do(Pass(self.conf.priority))
            guard += 1
            if guard > 40:
                raise ScriptBroken(-1, "plan walk stuck")

    def end_turn(self) -> None:
        turn = self.conf.turn
        guard = 0
        while self.conf.turn == turn:
            self.line.do(Pass(self.conf.priority))
            guard += 1
            if guard > 40:
                raise ScriptBroken(-1, "plan walk stuck")

    def loops_to(self, target: int, min_decrements: int = 1) -> None:
        cur = spell_counters(self.conf)
        delta = target - cur
        b = min_decrements
        while (delta + 5 * b) % 3 != 0 or (delta + 5 * b) < 0:
            b += 1
            if b > 10000:
                raise ScriptBroken(-1, "no cycle composition")
        a = (delta + 5 * b) // 3
        for _ in range(a):
            for mv in increment_cycle_moves(self.conf):
                self.line.do(mv)
        for _ in range(b):
            for mv in decrement_cycle(self.conf).run.moves:
                self.line.do(mv)

    def summon_yata(self) -> None:
        if YATA in self.conf.players[0].hand:
            self.line.do(NormalSummon(0, YATA, _free_mzone(self.conf, 0), True))

    def battle_all(self) -> None:
        self.to_phase(Phase.BATTLE)
        conf = self.conf
        attackers: list[tuple] = []
        for i, m in enumerate(conf.players[0].monsters):
            if m is not None and m.face_up:
                attackers.append((0, MZONE, i))
        if conf.players[0].extra_zone is not None and conf.players[0].extra_zone.face_up:
            attackers.append((0, EXTRA, 0))
        for loc in attackers:
            if _won(self.conf):
                return
            mv = DeclareAttack(0, loc, DIRECT)
            if _attack_ok(self.conf, mv):
                self.line.do(mv)

    def battle_yata(self) -> None:
        self.to_phase(Phase.BATTLE)
        zone = _mzone_of(self.conf, 0, YATA, face_up=True)
        self.line.do(DeclareAttack(0, (0, MZONE, zone), DIRECT))


def _attack_ok(conf, mv) -> bool:
    from .engine.rules import is_legal

    return is_legal(conf, mv)


def _won(conf: Configuration) -> bool:
    return is_winning_state(conf, 0)


class TMStrategy(Strategy):
    """Simulate machine e on the spell counters; attack out when it halts."""

    def __init__(self, e: int):
        super().__init__(("tm", e))
        self.e = e
        m = tmmod.machine_from_index(e)
        if isinstance(m, tmmod.AppendixMachine):
            m = tmmod.EMPTY_MACHINE  # no tape semantics; treat as immediate halt
        self.machine = m

    def _plan_turn(self, conf, run):
        try:
            b = _PlanBuilder(conf)
            if b.conf.phase == Phase.DRAW:
                b.to_phase(Phase.MAIN1)
            if b.conf.phase not in (Phase.MAIN1, Phase.MAIN2):
                return None
            cur = spell_counters(b.conf)
            mconf = tmmod.decode_tmconf(cur)
            if tmmod.is_halted_any(self.machine, mconf):
                self._attack_turn(b, cur)
            else:
                nxt = tmmod.plain_step(self.machine, mconf)
                if isinstance(nxt, tmmod.Halted):
                    nxt = nxt.config
                b.loops_to(tmmod.encode_tmconf(nxt))
                b.summon_yata()
                b.battle_yata()
            if not _won(b.conf):
                b.end_turn()
            return b.plan()
        except (ScriptBroken, NotLoopReady, InsufficientCounters,
                IllegalMove, MalformedCode):
            return None

    def _attack_turn(self, b: "_PlanBuilder", cur: int) -> None:
        """Counters stand still while the board batters the opponent down.

        Five cycles and two full decrements, then the magician stays out
        to join the battle and is only offered up afterwards: +15 -10 -6 +1
        keeps the count exact and still arms our next draw skip.
        """
        from .scripts import ENDYMION, OFFERINGS, _gy_index
        from .engine.config import GY as GYK

        for _ in range(5):
            for mv in increment_cycle_moves(b.conf):
                b.line.do(mv)
        for _ in range(2):
            for mv in decrement_cycle(b.conf).run.moves:
                b.line.do(mv)
        conf = b.conf
        zone = _free_mzone(conf, 0)
        extras = [zone, 0]
        if OFFERINGS in conf.players[0].gy:
            extras[1] = 1 + _gy_index(conf, 0, OFFERINGS)
        b.line.do(ActivateEffect(
            0, "endymion_counter_summon", (0, GYK, _gy_index(conf, 0, ENDYMION)),
            extras=tuple(extras),
        ))
        b.battle_all()
        if not _won(b.conf):
            b.to_phase(Phase.MAIN2)
            b.line.do(ActivateEffect(
                0, "offerings_destroy_skip", (0, HAND, OFFERINGS),
                targets=((0, MZONE, zone),),
            ))


def _p2_turn_gains(run: Run, from_index: int) -> list[int]:
    """Numbers heard so far: +1000 steps of their LP per completed turn."""
    configs = run.configs
    gains: list[int] = []
    current: Optional[int] = None  # turn number of the opponent turn in progress
    count = 0
    for i in range(from_index, len(configs)):
        c = configs[i]
        if c.active == 1:
            if current is None or c.turn != current:
                if current is not None:
                    gains.append(count)
                current = c.turn
                count = 0
            if i + 1 < len(configs) and configs[i + 1].turn == c.turn:
                delta = configs[i + 1].players[1].lp - c.players[1].lp
                if delta == 1000:
                    count += 1
        elif current is not None:
            gains.append(count)
            current = None
            count = 0
    # an opponent turn still in progress has not produced its number yet
    return gains


class _ChannelStrategy(Strategy):
    """Shared skeleton for the number-channel strategies (second deck)."""

    def __init__(self, descriptor, base_run: Run):
        super().__init__(descriptor)
        self.base_run = base_run
        self.base_len = len(base_run.configs)

    def _on_base(self, run: Run) -> bool:
        if len(run.configs) < self.base_len:
            return False
        return run.configs[self.base_len - 1] == self.base_run.configs[-1]

    def _mode(self, run: Run) -> str:
        """'wait' while the chain holds, 'raigeki' once it breaks."""
        numbers = _p2_turn_gains(run, self.base_len - 1)
        return self._judge(numbers)

    def _judge(self, numbers: list[int]) -> str:
        raise NotImplementedError

    def _plan_turn(self, conf, run):
        if not self._on_base(run):
            return None
        try:
            b = _PlanBuilder(conf)
            if b.conf.phase == Phase.DRAW:
                b.to_phase(Phase.MAIN1)
            if b.conf.phase not in (Phase.MAIN1, Phase.MAIN2):
                return None
            _negate_protector_if_needed(b.line)
            mode = self._mode(run)
            cur = spell_counters(b.conf)
            b.loops_to(cur + 1)
            if mode == "raigeki":
                if RAIGEKI in b.conf.players[0].hand:
                    b.line.do(ActivateEffect(0, "raigeki_wipe", (0, HAND, RAIGEKI)))
                b.summon_yata()
                b.battle_all()
            else:
                b.summon_yata()
                b.battle_yata()
            if not _won(b.conf):
                b.end_turn()
            return b.plan()
        except (ScriptBroken, NotLoopReady, InsufficientCounters,
                IllegalMove, MalformedCode):
            return None


class NISStrategy(_ChannelStrategy):
    """First number is a triple (a1, a2, t1), later ones pairs (a_k+1, t_k)."""

    def __init__(self, e: int, base_run: Run):
        super().__init__(("nis", e), base_run)
        self.e = e

    def _judge(self, numbers):
        expect: Optional[int] = None
        for i, n in enumerate(numbers):
            if n == 0:
                return "raigeki"
            if i == 0:
                a1, a2, t1 = untriple(n)
                r = tmmod.run_bounded(self.e, a2, t1)
                if not isinstance(r, tmmod.Converged) or r.output != a1:
                    return "raigeki"
                expect = a2
            else:
                a_next, t = unpair(n)
                r = tmmod.run_bounded(self.e, a_next, t)
                if not isinstance(r, tmmod.Converged) or r.output != expect:
                    return "raigeki"
                expect = a_next
        return "wait"


class WOStrategy(_ChannelStrategy):
    """Numbers spell a strictly descending chain in the given order."""

    def __init__(self, order, base_run: Run):
        super().__init__(("wo", order.name), base_run)
        self.order = order

    def _judge(self, numbers):
        prev: Optional[int] = None
        for i, n in enumerate(numbers):
            if n == 0:
                return "raigeki"
            if i == 0:
                m, k = unpair(n)
                if not self.order.less(m, k):
                    return "raigeki"
                prev = m
            else:
                if not self.order.less(n, prev):
                    return "raigeki"
                prev = n
        return "wait"


def tm_strategy(e: int) -> Strategy:
    return TMStrategy(e)


def nis_strategy(e: int, base_run: Run) -> Strategy:
    return NISStrategy(e, base_run)


def wo_strategy(order, base_run: Run) -> Strategy:
    return WOStrategy(order, base_run)


# --- the budgeted winning checker ---------------------------------------------


def _p2_has_channel(conf: Configuration) -> bool:
    p2 = conf.players[1]
    flint = any(st is not None and st.card == FLINT and st.face_up for st in p2.spelltraps)
    locks = sum(1 for m in p2.monsters if m is not None and m.card == FLINTLOCK and m.face_up)
    return flint and locks >= 1


def _p2_turn_choices(conf: Configuration, budget: Budget) -> list[tuple[int, bool]]:
    """Canonical opponent turns: (pulls, parked).  Pass-only turns are (0, True)."""
    if not _p2_has_channel(conf):
        return [(0, True)]
    out: list[tuple[int, bool]] = [(0, True)]
    for k in range(1, budget.max_opponent_number + 1):
        out.append((k, True))
        out.append((k, False))
    return out


def _play_p2_turn(run: Run, choice: tuple[int, bool], s: Strategy) -> Optional[Run]:
    """Simulate one opponent turn (k pulls, optional parking) plus our windows."""
    k, park = choice
    pulls = 0
    parked = k == 0
    guard = 0
    limit = 400 + 3 * k
    while True:
        conf = run.last()
        if conf.active != 1 or _terminal_kind(conf) is not None:
            return run
        guard += 1
        if guard > limit:
            return None
        if conf.priority == 0:
            mv = s.next_move(run)
            if mv is None:
                return None
            run = run.extend(apply(conf, mv), mv)
            continue
        if conf.phase == Phase.DRAW and not conf.draw_done:
            if not conf.players[1].deck:
                return run  # they deck out at the mandatory draw
            mv: Move = DrawCard(1)
        elif conf.phase == Phase.END and len(conf.players[1].hand) > 6:
            excess = len(conf.players[1].hand) - 6
            mv = DiscardToLimit(1, conf.players[1].hand[:excess])
        elif conf.phase in (Phase.MAIN1, Phase.MAIN2) and (pulls < k or not parked):
            p2 = conf.players[1]
            flint_zone = next(
                (i for i, st in enumerate(p2.spelltraps)
                 if st is not None and st.card == FLINT and st.face_up),
                None,
            )
            if flint_zone is None:
                pulls, parked = k, True  # the channel is gone; nothing to say
                continue
            eq = (1, SZONE, flint_zone)
            cur = p2.spelltraps[flint_zone].equipped_to
            if pulls < k:
                locks = [i for i, m in enumerate(p2.monsters)
                         if m is not None and m.card == FLINTLOCK and m.face_up
                         and (1, MZONE, i) != cur]
                if not locks:
                    pulls, parked = k, True
                    continue
                mv = ChangeEquipTarget(1, eq, (1, MZONE, locks[0]))
                pulls += 1
                if pulls == k and not park:
                    parked = True  # deliberately leave it on the lock
            else:
                clara = next((i for i, m in enumerate(p2.monsters)
                              if m is not None and m.card == CLARA), None)
                if clara is None:
                    parked = True
                    continue
                mv = ChangeEquipTarget(1, eq, (1, MZONE, clara))
                parked = True
        else:
            mv = Pass(1)
        try:
            run = run.extend(apply(run.last(), mv), mv)
        except IllegalMove:
            return None


def _terminal_kind(conf: Configuration) -> Optional[str]:
    if is_winning_state(conf, 0):
        return WIN
    if is_winning_state(conf, 1):
        return LOSS
    return None


def check_winning(run: Run, s: Strategy, budget: Budget) -> WinVerdict:
    """Explore every opponent line within the budget.

    Win: every explored branch reaches Player 1's victory, and either the
    budget's number cap is declared exhaustive or the opponent never had a
    capped choice.  Loss: some branch defeats Player 1 or strands the
    strategy.  Anything cut off by the budget is Undetermined.
    """
    if s.next_move(run) is None and run.last().priority == 0 \
            and run.last().active == 0:
        raise StrategyUndefinedAtRoot(str(s.descriptor))
    start_turn = run.last().turn
    base_len = len(run.moves)

    def witness(r: Run) -> tuple[Move, ...]:
        return r.moves[base_len:]

    def explore(r: Run) -> WinVerdict:
        guard = 0
        while True:
            conf = r.last()
            tk = _terminal_kind(conf)
            if tk == WIN:
                return WinVerdict(WIN, witness(r), budget)
            if tk == LOSS:
                return WinVerdict(LOSS, witness(r), budget)
            if conf.turn - start_turn > budget.max_turns:
                return WinVerdict(UNDETERMINED, witness(r), budget)
            if conf.active == 1 and conf.phase == Phase.DRAW and conf.priority == 1:
                break  # an opponent decision point
            if conf.priority == 0:
                mv = s.next_move(r)
                if mv is None:
                    return WinVerdict(LOSS, witness(r), budget)
                r = r.extend(apply(conf, mv), mv)
            else:
                mv = Pass(1)
                try:
                    r = r.extend(apply(conf, mv), mv)
                except IllegalMove:
                    return WinVerdict(LOSS, witness(r), budget)
            guard += 1
            if guard > 500_000:
                return WinVerdict(UNDETERMINED, witness(r), budget)

        # branch over the opponent's canonical turns
        choices = _p2_turn_choices(r.last(), budget)
        capped = _p2_has_channel(r.last()) and not budget.cap_exhaustive
        first_win: Optional[WinVerdict] = None
        undetermined: Optional[WinVerdict] = None
        for choice in choices:
            r2 = _play_p2_turn(r, choice, s)
            if r2 is None:
                return WinVerdict(LOSS, witness(r), budget)
            sub = explore(r2)
            if sub.kind == LOSS:
                return sub
            if sub.kind == UNDETERMINED:
                undetermined = sub
            elif first_win is None:
                first_win = sub
        if undetermined is not None:
            return undetermined
        if capped:
            return WinVerdict(UNDETERMINED, witness(r), budget)
        return first_win if first_win is not None else WinVerdict(UNDETERMINED, witness(r), budget)

    return explore(run)


def replay_witness(run: Run, moves: Iterable[Move]) -> Run:
    r = run
    for mv in moves:
        r = r.extend(apply(r.last(), mv), mv)
    return r


def drive_to_choice(run: Run, s: Strategy, max_steps: int = 200_000) -> Optional[Run]:
    """Play the strategy (and window passes) up to the opponent's next
    decision point or a terminal state; None when the strategy strands."""
    for _ in range(max_steps):
        conf = run.last()
        if _terminal_kind(conf) is not None:
            return run
        if conf.active == 1 and conf.phase == Phase.DRAW and conf.priority == 1:
            return run
        if conf.priority == 0:
            mv = s.next_move(run)
            if mv is None:
                return None
        else:
            mv = Pass(1)
        try:
            run = run.extend(apply(conf, mv), mv)
        except IllegalMove:
            return None
    return None


def play_opponent_number(run: Run, s: Strategy, k: int, park: bool = True
                         ) -> Optional[Run]:
    """One opponent turn speaking the number k, then back to our side."""
    run = drive_to_choice(run, s)
    if run is None or _terminal_kind(run.last()) is not None:
        return run
    return _play_p2_turn(run, (k, park), s)


# --- strategy trees -----------------------------------------------------------


@dataclass(frozen=True)
class StrategyTree:
    code: int
    winning: Optional[bool]
    children: tuple[tuple[int, "StrategyTree"], ...] = ()

    def size(self) -> int:
        return 1 + sum(child.size() for _c, child in self.children)


def to_tree(s: Strategy, run: Run, depth: int, budget: Optional[Budget] = None) -> StrategyTree:
    """Depth-truncated localization of the strategy after the given run.

    Nodes sit at the opponent's decision points; edges carry the coded
    number choice; leaves are marked by the win check on their segment.
    """
    from .engine import encode_configuration

    budget = budget or Budget(max_turns=depth * 4 + 20, max_opponent_number=8)

    def drive(r: Run) -> tuple[Run, Optional[bool]]:
        guard = 0
        while True:
            conf = r.last()
            tk = _terminal_kind(conf)
            if tk is not None:
                return r, tk == WIN
            if conf.active == 1 and conf.phase == Phase.DRAW and conf.priority == 1:
                return r, None
            if conf.priority == 0:
                mv = s.next_move(r)
                if mv is None:
                    return r, False
            else:
                mv = Pass(1)
            try:
                r = r.extend(apply(conf, mv), mv)
            except IllegalMove:
                return r, False
            guard += 1
            if guard > 200_000:
                return r, None

    def build(r: Run, d: int) -> StrategyTree:
        r2, verdict = drive(r)
        code = encode_configuration(r2.last())
        if verdict is not None:
            return StrategyTree(code, verdict)
        if d == 0:
            return StrategyTree(code, None)
        kids = []
        for choice in _p2_turn_choices(r2.last(), budget):
            r3 = _play_p2_turn(r2, choice, s)
            if r3 is None:
                kids.append((pair(choice[0], int(choice[1])), StrategyTree(code, False)))
                continue
            kids.append((pair(choice[0], int(choice[1])), build(r3, d - 1)))
        return StrategyTree(code, None, tuple(kids))

    return build(run, depth)


WELL_FOUNDED = "all-branches-terminate-winning"


@dataclass(frozen=True)
class OpenBranch:
    path: tuple[int, ...]


def well_founded_to_depth(tree: StrategyTree, depth: int):
    """Every maximal branch within depth must end at a Winning leaf."""

    def walk(node: StrategyTree, path: tuple[int, ...], d: int):
        if node.winning is True:
            return None
        if node.winning is False:
            return OpenBranch(path)
        if not node.children or d == 0:
            return OpenBranch(path)  # unresolved frontier: not yet well-founded
        for code, child in node.children:
            bad = walk(child, path + (code,), d - 1)
            if bad is not None:
                return bad
        return None

    bad = walk(tree, (), depth)
    return WELL_FOUNDED if bad is None else bad
