"""Class numbers of Shanks' simplest cubic fields: fields, cubic characters,
L(1, chi), the squarefree tuple sieve and the CRT tuple construction."""

from .characters import (
    CubicCharacter,
    SplittingType,
    build_character,
    char_eval,
    split_residues,
    splitting_type,
)
from .construct import TupleConstruction, build_construction, require_splitting_primes, validate_construction
from .errors import IntegralityError, InternalConsistencyError, UnderdeterminedError
from .experiments import CensusRow, TupleReport, gap_exponent, run_census, run_tuples
from .fields import SimplestCubicField, discriminant, g_eval, regulator, roots
from .lfunc import class_number, extremality_ratio, l1_direct_series, l1_euler_truncated, l1_exact
from .numcore import crt_combine, factorize, is_squarefree, primes_up_to
from .sieve import SieveResult, SieveSpec, brute_force_survivors, count_in_window, sieve_survivors

__version__ = "0.1.0"
