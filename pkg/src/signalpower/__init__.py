"""Power of signaling versus price of anarchy in Bayesian games.

The package computes optimal values of full-information, no-information,
public, private and ex-ante private signaling schemes, the ratios between
them, and the per-state price of anarchy, for finite normal-form games and
non-atomic routing games.
"""

from signalpower.kernels import BACKEND
from signalpower.game import (
    FiniteBayesianGame,
    GameFormatError,
    MixedProfile,
    ObjectiveSense,
    game_from_json,
    game_to_json,
    load_game,
    optimal_welfare,
    posterior_game,
    state_game,
    welfare,
)
from signalpower.lp import LinearProgram, LpStatus, linear_program, solve
from signalpower.equilibria import (
    enumerate_equilibria,
    poa_max,
    price_of_anarchy,
    worst_equilibrium_welfare,
)
from signalpower.signaling import (
    CLASSES,
    ExAnteScheme,
    PrivateScheme,
    PublicScheme,
    check_obedience,
    evaluate_full_information,
    evaluate_no_information,
    evaluate_public_scheme,
    optimal_ex_ante_value,
    optimal_private_value,
    optimal_public_value,
    pos_ratio,
    verify_pos_bound,
)
from signalpower.routing import (
    RoutingInstance,
    pigou_poa,
    solve_pigou_alpha,
    wardrop_equilibrium,
)
from signalpower.scenarios import build, scheme_for

__version__ = "0.1.0"
