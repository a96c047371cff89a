"""Physicochemical properties from embedded contribution tables."""

from leadopt.properties.conditions import (
    ConditionSpec,
    check_conditions,
    overall_pass,
)
from leadopt.properties.logp import classify_atoms, crippen_logp
from leadopt.properties.profile import PropertyProfile, molecular_weight, property_profile
from leadopt.properties.sascore import raw_synthesis_score, sa_score
from leadopt.properties.tpsa import ertl_tpsa

__all__ = [
    "ConditionSpec",
    "PropertyProfile",
    "check_conditions",
    "classify_atoms",
    "crippen_logp",
    "ertl_tpsa",
    "molecular_weight",
    "overall_pass",
    "property_profile",
    "raw_synthesis_score",
    "sa_score",
]
