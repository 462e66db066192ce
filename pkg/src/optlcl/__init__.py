"""Classification, synthesis and simulation of locally checkable optimization problems on directed cycles."""

from .catalog import builtin_examples, get_example
from .classifier import Classification, Strategy, classify, threshold_report
from .debruijn import build
from .parameters import ProblemParameters, compute_all
from .problem import BOT, OptLcl, parse_problem
from .synthesis import SynthesisPlan, synthesize
from .verify import evaluate, opt_bruteforce, opt_dp

__all__ = [
    "BOT", "OptLcl", "parse_problem", "builtin_examples", "get_example", "build",
    "ProblemParameters", "compute_all", "Classification", "Strategy", "classify",
    "threshold_report", "SynthesisPlan", "synthesize", "evaluate", "opt_dp", "opt_bruteforce",
]
