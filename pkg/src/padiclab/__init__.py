"""padiclab: p-adic price maps, q-calculus numerics, and a four-state trader market."""

__version__ = "0.1.0"

from .fit import FitResult, PriceSeries, fit_padic, load_series, rmse
from .grassmann import (
    GrassmannElement,
    OperatorSymbols,
    ScsBracket,
    SuperMatrix,
    coherent_ket,
    grassmann_exp,
    op_symbols,
    pseudospin_symbols,
    scs_bracket,
    scs_matrix,
    scs_structure_report,
)
from .jackson import (
    ConvergenceError,
    DqExpansionCoeffs,
    SeriesSpec,
    dq_expansion_coeffs,
    i_integral,
    jackson_integral,
    padic_correspondence_check,
    qq_series,
    shell_sum_oracle,
    small_q_series,
)
from .market import MarketConfig, MarketSeries, simulate_market
from .operators import (
    creation_annihilation,
    classify_operators,
    gamma5,
    hamiltonian_dense,
    x_operator,
)
from .padic import PAdicDigits, Prime, digits, from_digits, is_prime, padic_norm, valuation
from .qcalc import (
    AlgebraReport,
    FieldInvariants,
    QParams,
    check_algebra_relations,
    d_q,
    d_rq,
    f4,
    k_special,
    q_factorial,
    q_number,
    q_pochhammer,
)
from .waves import (
    PatternError,
    PatternKind,
    WaveSeries,
    WaveSpec,
    beta_digits,
    delay_embed,
    envelope_compose,
    f_b_map,
    monotone_segments,
    pattern,
    random_series,
    swing_amplitudes,
    wave_series,
)

__all__ = [name for name in dir() if not name.startswith("_")]
