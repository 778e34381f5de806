"""Finite-grid verification of welfare-theorem conditions in economies with
autonomous AI entities, autonomy rights and institutional states."""

from .conditions import DiagnosticReport, diagnose
from .economy import (
    ActionChannel,
    Attribute,
    DelegateSpec,
    Economy,
    Entity,
    EquilibriumCandidate,
    FeasibilityData,
    FeasibilityMode,
    FeasibleState,
    InstitutionalState,
    RightsClassification,
    RightsTag,
    Status,
    validate_economy,
    welfare_bearing_set,
)
from .equilibrium import verify_equilibrium
from .errors import (
    AgiWelfareError,
    ConfigurationError,
    DomainError,
    FileSyntaxError,
    InputError,
    ResourceCapError,
)
from .grid import Grid
from .io import emit_economy, parse_economy, parse_economy_file
from .pareto import ParetoVerdict, autonomy_pareto_check
from .scenarios import generate_random_economy, scenario
from .welfare import LinearWelfare, LogLinearWelfare, ShiftedWelfare, TabulatedWelfare

__version__ = "0.1.0"

__all__ = [
    "ActionChannel", "AgiWelfareError", "Attribute", "ConfigurationError", "DelegateSpec",
    "DiagnosticReport", "DomainError", "Economy", "Entity", "EquilibriumCandidate",
    "FeasibilityData", "FeasibilityMode", "FeasibleState", "FileSyntaxError", "Grid",
    "InputError", "InstitutionalState", "LinearWelfare", "LogLinearWelfare", "ParetoVerdict",
    "ResourceCapError", "RightsClassification", "RightsTag", "ShiftedWelfare", "Status",
    "TabulatedWelfare", "autonomy_pareto_check", "diagnose", "emit_economy",
    "generate_random_economy", "parse_economy", "parse_economy_file", "scenario", "validate_economy", "verify_equilibrium", "welfare_bearing_set",
]
