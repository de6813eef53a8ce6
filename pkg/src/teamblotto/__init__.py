"""Security strategies for a two-battlefield team Colonel Blotto game.

The team's total budget B is split between two sub-colonels who randomize
independently, so the team's allocation to battlefield 1 is the convolution
of two independent strategies. The package computes exact security values of
such product strategies, checks the mass-placement conditions that
characterize centralized security strategies, builds explicit distributed
constructions, and bounds the distributed value of the integer game from
below with exact LPs.
"""

from .analytic import centralized_value, enemy_payoff_pure, payoff_pure, win_share
from .construct import Band, bands, comb_centralized, comb_distributed, sample_ss1_profile
from .core import (
    BadDivision,
    BlottoError,
    BoundaryCase,
    BudgetOrder,
    DimensionMismatch,
    GameConfig,
    InfeasibleDivision,
    InfeasibleGap,
    Interval,
    OutOfRange,
    PartitionInfo,
    TooLarge,
    UnsupportedValues,
    as_rational,
    format_rational,
    parse_rational,
    partition_of,
)
from .distributions import (
    AtomicStrategy,
    IntStrategy,
    StrategyError,
    cdf,
    cdf_left,
    convolve,
    convolve_int,
    dumps_strategy,
    loads_strategy,
)
from .intgame import (
    PayoffMatrix,
    SolveResult,
    best_response_lp,
    centralized_value_int,
    eval_value_int,
    oracle_grid,
    solve_distributed,
)
from .lp import LPResult, LPStatus, lp_solve
from .security import (
    SSCheckReport,
    ValueReport,
    check_ss1,
    check_ss2,
    enemy_payoff_cdf_form,
    is_security_strategy,
    team_payoff,
    value_of,
)

__version__ = "0.1.0"
