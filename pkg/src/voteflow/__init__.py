"""voteflow: closed-form election outcome probabilities under noisy information flow.

Candidates sit at fixed points on a political spectrum; evidence about the
eventual "right" choice reaches the electorate as a signal-plus-noise
process whose single control parameter is the information flow rate. The
package computes, in closed form, the probability of every possible
election-day ranking of the candidates (and hence each candidate's chance
of winning), plus the strategy analytics built on top: dead zones for
centre-ground candidates, bounds on the information rate, peak attainable
support, parameter sweeps, source aggregation, seeded Monte Carlo
verification, and rate calibration from poll time series.
"""

from . import errors
from .aggregation import EffectiveChannel, SourceSet, aggregate_n, aggregate_two
from .calibration import (
    PollSeries,
    SigmaEstimate,
    estimate_sigma_historic,
    implied_sigma,
)
from .model import (
    ElectionModel,
    InfoSchedule,
    PosteriorDistribution,
    condition_on_history,
    effective_variance,
    posterior,
    posterior_support,
)
from .outcomes import (
    CrossingThreshold,
    OrderingPartition,
    OutcomeProbabilities,
    PartitionCell,
    crossing_threshold,
    interval_probability,
    ordering_partition,
    ordering_probability,
    two_candidate_win_probability,
    win_probabilities,
)
from .simulation import (
    MonteCarloOutcome,
    PathEnsemble,
    TrajectoryBundle,
    monte_carlo_win_probabilities,
    posterior_paths,
    simulate_paths,
    winprob_paths,
)
from .strategy import (
    DeadZoneReport,
    MaxSupportReport,
    SweepTable,
    dead_zone_sigma_bound,
    default_sigma_grid,
    is_dead_zone,
    max_support_curve,
    max_support_point,
    sweep_positions,
    sweep_priors,
    sweep_sigma,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "ElectionModel",
    "InfoSchedule",
    "PosteriorDistribution",
    "effective_variance",
    "posterior",
    "posterior_support",
    "condition_on_history",
    "CrossingThreshold",
    "PartitionCell",
    "OrderingPartition",
    "OutcomeProbabilities",
    "crossing_threshold",
    "ordering_partition",
    "interval_probability",
    "ordering_probability",
    "win_probabilities",
    "two_candidate_win_probability",
    "SourceSet",
    "EffectiveChannel",
    "aggregate_two",
    "aggregate_n",
    "DeadZoneReport",
    "MaxSupportReport",
    "SweepTable",
    "is_dead_zone",
    "dead_zone_sigma_bound",
    "max_support_point",
    "max_support_curve",
    "sweep_sigma",
    "sweep_positions",
    "sweep_priors",
    "default_sigma_grid",
    "PathEnsemble",
    "TrajectoryBundle",
    "MonteCarloOutcome",
    "simulate_paths",
    "posterior_paths",
    "winprob_paths",
    "monte_carlo_win_probabilities",
    "PollSeries",
    "SigmaEstimate",
    "estimate_sigma_historic",
    "implied_sigma",
]
