"""loopkit: a workbench for finite loop theory.

Loop tables, translation and inner mapping groups, nuclei and central
series, exhaustive small-order enumeration, the AIM goal suite, and
generation/orchestration of equational prover inputs.
"""

from .conjecture import (ConjectureReport, GoalReport, InconsistentLemma1,
                         InconsistentLemma2, NoTwoSidedInverses, QuotientOracle,
                         Variety, associator, check_conjecture, check_goals,
                         commutator, inner_fn, is_aim, is_uniquely_2_divisible,
                         lc_profile, quotient_oracle, variety_membership)
from .enumeration import (EnumSpec, are_isomorphic, count_loops, dedup_classes,
                          first_loop, loop_tables)
from .perms import (CapExceeded, Perm, PermGroup, closure, compose,
                    cycle_notation, identity_perm, inverse, is_abelian, orbit,
                    stabilizer)
from .prover import (AdapterResult, ExecAdapter, MockAdapter, P9LoopOutcome,
                     ProverProblem, RunLimits, eliminate_assumptions,
                     p9loop_run, parse_problem, render_problem)
from .structure import (FactorLoop, IllDefined, NotNormal, Nuclei, SeriesReport,
                        SubsetMask, all_subloops, center, commutant, factor_loop,
                        inn, is_normal, mlt, nilpotency_class, nuclei,
                        structure_report, subloop_generated,
                        upper_central_series)
from .tables import (LoopTable, ParseError, builtin_table, is_associative,
                     is_commutative, parse_loop_table)

__version__ = "0.1.0"
