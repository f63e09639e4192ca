"""sneng: a propositional semantic-network reasoning and acting engine.

The store interns every expression as a unique term; beliefs carry
assumption-based supports; inference runs forward and backward over
set-oriented connectives; contradictions are detected structurally and
revised by source credibility or user choice; whendo/ifdo rules connect
beliefs to acts.  See README.md for the surface language and CLI.
"""

from .beliefs import AssertionStatus, BeliefStore, Context, SupportRecord
from .engine import Engine
from .inference import AskResult, Reasoner, unify
from .parser import ParseError, parse_command, parse_wff
from .revision import CredibilityOrdering, RevisionReport
from .session import Response, Session
from .terms import Pattern, TermStore, WILD

__version__ = "0.1.0"

__all__ = [
    "AssertionStatus", "AskResult", "BeliefStore", "Context", "CredibilityOrdering",
    "Engine", "ParseError", "Pattern", "Reasoner", "Response", "RevisionReport",
    "Session", "SupportRecord", "TermStore", "WILD", "parse_command", "parse_wff",
    "unify", "__version__",
]
