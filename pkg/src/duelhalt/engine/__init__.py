from .config import (
    ATK,
    DEF,
    CardInstance,
    Configuration,
    Phase,
    PlayerState,
    decode_configuration,
    encode_configuration,
)
from .moves import (
    ActivateEffect,
    AdvancePhase,
    ChainLink,
    ChangeEquipTarget,
    DeclareAttack,
    DiscardToLimit,
    DrawCard,
    FlipSummon,
    Move,
    NormalSummon,
    Pass,
    SetSpellTrap,
    decode_move,
    DIRECT,
)
from .rules import (
    Run,
    apply,
    can_act,
    initial_configuration,
    is_winning_state,
    legal_moves,
    transition_ok,
    validate_run,
)

__all__ = [
    "ATK",
    "DEF",
    "ActivateEffect",
    "AdvancePhase",
    "CardInstance",
    "ChainLink",
    "ChangeEquipTarget",
    "Configuration",
    "DeclareAttack",
    "DiscardToLimit",
    "DrawCard",
    "DIRECT",
    "FlipSummon",
    "Move",
    "NormalSummon",
    "Pass",
    "Phase",
    "PlayerState",
    "Run",
    "SetSpellTrap",
    "apply",
    "can_act",
    "decode_configuration",
    "decode_move",
    "encode_configuration",
    "initial_configuration",
    "is_winning_state",
    "legal_moves",
    "transition_ok",
    "validate_run",
]
