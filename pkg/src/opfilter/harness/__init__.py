"""Randomized inequality suites, runner and reports."""
from .config import SuiteConfig
from .runner import SuiteReport, TrialRecord, replay, run_suite, run_trial
from .suites import SUITES, Instance, get_suite

__all__ = ["SUITES", "Instance", "SuiteConfig", "SuiteReport", "TrialRecord",
           "get_suite", "replay", "run_suite", "run_trial"]
