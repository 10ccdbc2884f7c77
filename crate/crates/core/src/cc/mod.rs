//! Programs whose bodies are cardinality constraints `l {X} u`.

mod semantics;
mod supports;
mod syntax;

pub use semantics::{
    cc_least_model, cc_satisfies, cc_stable_models_bruteforce, cc_tp_step, ccgl,
    check_cc_lower_half_continuity, is_cc_stable, nss_reduct,
};
pub use supports::{
    cc_all_supports, cc_equations, cc_gl_via_schemes, cc_minimal_supports, cc_rhs,
    cc_stable_models_via_equations, cc_stable_models_via_schemes, cc_support_formula,
    cc_support_preceq, cc_theory, CcDefiningEquation, CcSupport, CcSupportFamily,
};
pub use syntax::{
    cc_transform, CardConstraint, CcClause, CcProgram, CcRule, Lower, SplitProgram, Upper,
};
