//! Classic control design automation: rational LTI models with optional
//! transport delay, frequency/time-domain analysis, loop-shaping and PID
//! synthesis, an iterative design loop with structured memory and feedback,
//! a seeded benchmark task generator, and multi-trial success-rate scoring.

pub mod analysis;
pub mod dataset;
pub mod design;
pub mod eval;
pub mod lti;
pub mod rng;
pub mod synthesis;

pub use analysis::{
    compute_margins, evaluate_closed_loop, freq_response, settling_time, steady_state_error,
    step_response, FrequencyPoint, MarginReport, PerformanceReport, StepMetrics, StepTrajectory,
};
pub use design::{
    classify_system, default_n_max, generate_feedback, run_design, DesignOutcome, DesignPolicy,
    DesignRecord, Feedback, HeuristicPolicy, MemoryBuffer, PolicyError, ResponseMode, SystemClass,
    TaskRequirement,
};
pub use lti::{
    poly_mul, poly_roots, routh_stable, tf_dc_gain, tf_feedback_unity, tf_series, LtiError,
    Polynomial, StabilityMethod, StabilityVerdict, TransferFunction,
};
pub use synthesis::{
    initial_params, loopshape_controller, pid_controller, ControllerDesign, ControllerFamily,
    ControllerParams, LoopShapeParams, PidParams,
};
