"""Scenario language, runner and command line interface."""

from .ast import Scenario
from .parser import parse
from .printer import pretty
from .runner import Report, Runner, SemanticError

__all__ = ["Scenario", "parse", "pretty", "Report", "Runner", "SemanticError"]
