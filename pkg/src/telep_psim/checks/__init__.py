"""Property suite behind ``telep-psim verify``."""

from .algebra import BornRuleCheck, GroupExactnessCheck, MagicSquareCheck
from .base import CheckResult, CompositeCheck, PropertyCheck
from .embedding import (
    CommutingIdentityCheck,
    FalsifierCheck,
    LightconeCountingCheck,
    ReductionSoundnessCheck,
)
from .learning import (
    AdversarialNonstabilizerCheck,
    StabilizerLearningCheck,
    UniformityCheck,
    WordProblemCheck,
)

__all__ = [
    "AdversarialNonstabilizerCheck",
    "BornRuleCheck",
    "CheckResult",
    "CommutingIdentityCheck",
    "CompositeCheck",
    "FalsifierCheck",
    "GroupExactnessCheck",
    "LightconeCountingCheck",
    "MagicSquareCheck",
    "PropertyCheck",
    "ReductionSoundnessCheck",
    "StabilizerLearningCheck",
    "UniformityCheck",
    "WordProblemCheck",
    "check_names",
    "default_checks",
]


def default_checks() -> list[PropertyCheck]:
    """Every property check, in suite order."""
    return [
        GroupExactnessCheck(),
        BornRuleCheck(),
        CommutingIdentityCheck(),
        ReductionSoundnessCheck(),
        LightconeCountingCheck(),
        MagicSquareCheck(),
        AdversarialNonstabilizerCheck(),
        UniformityCheck(),
        StabilizerLearningCheck(),
        WordProblemCheck(),
        FalsifierCheck(),
    ]


def check_names() -> list[str]:
    return [check.name for check in default_checks()]
