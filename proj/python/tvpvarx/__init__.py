"""Time-varying-parameter VARX estimation with a time-invariant long-run
multiplier constraint: Gibbs sampling, impulse responses, long-run growth
bands, and rolling-origin forecast evaluation."""

from tvpvarx._core import (  # noqa: F401
    BenchmarkOptions,
    BenchmarkResult,
    Chain,
    ChainRecord,
    CoefLayout,
    ColumnMapping,
    ConstantVarx,
    Dataset,
    DgpSpec,
    ErrorTable,
    FilterOutput,
    ForecastSet,
    GrowthSummary,
    Hyperparams,
    IrfGrid,
    LinearGaussianSystem,
    McmcConfig,
    ModelConfig,
    PriorOverrides,
    PriorSpec,
    RngStream,
    SimulatedData,
    TruePaths,
    TvpvarxError,
    calibrate,
    cholesky_lower,
    cholesky_psd,
    companion_spectral_radius,
    condition_number,
    error_table,
    fit_constant_varx,
    forecast,
    forecast_constant_varx,
    impulse_response,
    implied_d0,
    ingest_csv,
    irf_grid,
    kalman_filter,
    long_run_growth,
    long_run_multiplier,
    mixture_table,
    read_chain,
    run_benchmark_suite,
    run_chain,
    sample_categorical,
    sample_inverse_wishart,
    sample_mvn,
    simulate_dgp,
    simulation_smoother,
    transform_observation,
    write_chain,
    write_csv,
    write_error_tables,
    write_irf_grid,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
