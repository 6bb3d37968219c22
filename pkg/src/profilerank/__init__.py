"""Rank modulation over substring-profile vectors.

Library layout:

* :mod:`profilerank.core` -- words, profiles, rank permutations, graph maps
* :mod:`profilerank.feasibility` -- exact LP decider and counting bounds
* :mod:`profilerank.synthesis` -- witness strings: Eulerian and random-walk
* :mod:`profilerank.encoder` -- the two recursive encoders and calculators
* :mod:`profilerank.codes` -- transposition distance and code composition
* :mod:`profilerank.oracle` -- brute-force census, repository, length search
* :mod:`profilerank.channel` -- noise models and rank recovery
* :mod:`profilerank.cli` -- command-line front end
"""

from .core import (
    Params,
    ProfileVector,
    RankPermutation,
    TieError,
    profile_of,
    rank_of,
    satisfies,
)
from .feasibility import FeasibleVector, Verdict, decide, matching_precheck

__all__ = [
    "Params",
    "ProfileVector",
    "RankPermutation",
    "TieError",
    "profile_of",
    "rank_of",
    "satisfies",
    "FeasibleVector",
    "Verdict",
    "decide",
    "matching_precheck",
]
