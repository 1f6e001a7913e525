"""Mistake dynamical balls, return times, and recurrence-rate estimators.

The package measures how fast orbits of symbolic and interval systems
return to dynamical balls that tolerate a sublinear number of mistakes,
and compares the observed rates against entropy, free energy, and
pressure values computed by independent transfer-operator routines.
"""

from ._backend import BACKEND
from .dynamics import (
    IntervalMap,
    MeasureSpec,
    SymbolicSystem,
    beta_orbit,
    code_orbit,
    sample_orbit_start,
    sample_seed,
    sample_word,
    sft_admissible,
)
from .estimators import (
    RateRow,
    RateTable,
    SampleRecord,
    IntervalSource,
    SymbolicSource,
    entropy_via_return,
    minreturn_linear_rate,
    pressure_rate_table,
    pressure_via_recurrence,
    weighted_rate_table,
    weighted_return_rate,
)
from .mistake import (
    MistakeFunction,
    in_mistake_ball,
    mismatch_count,
    mistake_budget,
    sup_birkhoff_over_ball,
)
from .oracles import SuiteResult, run_oracle_suite
from .recurrence import (
    AlmostSpecReport,
    CensoredReturnError,
    ReturnOutcome,
    almost_spec_check,
    concat_window_feasible,
    first_return,
    min_return_full_shift,
    min_return_metric_upper,
    min_return_sft,
)
from .suspension import (
    Roof,
    TauEstimate,
    abramov,
    flow_entropy_estimate,
    mean_roof_analytic,
    roof_birkhoff,
    tau_hat,
)
from .thermo import (
    Potential,
    PowerIterationError,
    PressureResult,
    ball_measure_bernoulli,
    entropy_analytic,
    equilibrium_markov,
    free_energy,
    integral_markov,
    pressure_transfer,
    smb_rate,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "IntervalMap",
    "MeasureSpec",
    "SymbolicSystem",
    "beta_orbit",
    "code_orbit",
    "sample_orbit_start",
    "sample_seed",
    "sample_word",
    "sft_admissible",
    "RateRow",
    "RateTable",
    "SampleRecord",
    "IntervalSource",
    "SymbolicSource",
    "entropy_via_return",
    "minreturn_linear_rate",
    "pressure_rate_table",
    "pressure_via_recurrence",
    "weighted_rate_table",
    "weighted_return_rate",
    "MistakeFunction",
    "in_mistake_ball",
    "mismatch_count",
    "mistake_budget",
    "sup_birkhoff_over_ball",
    "SuiteResult",
    "run_oracle_suite",
    "AlmostSpecReport",
    "CensoredReturnError",
    "ReturnOutcome",
    "almost_spec_check",
    "concat_window_feasible",
    "first_return",
    "min_return_full_shift",
    "min_return_metric_upper",
    "min_return_sft",
    "Roof",
    "TauEstimate",
    "abramov",
    "flow_entropy_estimate",
    "mean_roof_analytic",
    "roof_birkhoff",
    "tau_hat",
    "Potential",
    "PowerIterationError",
    "PressureResult",
    "ball_measure_bernoulli",
    "entropy_analytic",
    "equilibrium_markov",
    "free_energy",
    "integral_markov",
    "pressure_transfer",
    "smb_rate",
    "__version__",
]
