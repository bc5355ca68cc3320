//! Exact infinitesimal period maps of filtered flat connections, orbit
//! analysis on flag varieties, and Hodge/conjugate filtrations read off
//! Frobenius matrices.

pub mod algebra;
pub mod analysis;
pub mod arithmetic;
pub mod chartfile;
pub mod connection;
pub mod error;
pub mod flags;
pub mod generate;
pub mod jets;
pub mod period;

pub use algebra::*;
pub use analysis::{
    ax_schanuel_gap, exceptionality_predicate, hypothesis_report, CriteriaInput, Report,
};
pub use arithmetic::{
    classify_eigvec, frobenius_eigvec_check, is_ordinary, mazur_filtrations, smith_form,
    EigvecVerdict, FrobeniusModule, MazurFiltrations, PrimePowerRing, SmithForm,
    CHAR_ZERO_IS_ORDINARY,
};
pub use chartfile::{parse_chart_file, ChartFile, CriteriaSpec, FieldKind, FrobeniusSpec};
pub use connection::{
    curvature_is_flat, curvature_matrix, pullback, solve_limp, solve_limp_with, verify_flat_frame,
    xi_eval, xi_eval_with, ConnectionChart, Curvature, DerivativeOrder, FlatTensor, FrameCheck,
    FramedLimp,
};
pub use error::{Error, Result};
pub use flags::{
    adjoint_hodge_numbers, check_form, conjugate_decomposition, coordinate_degrees, end_grading,
    find_polarization, flag_from_matrix, form_rank, induced_filtration_and_fmid, is_opposed,
    is_polarized, killing_form, killing_nondegenerate, mid_index, numeric_invariants,
    orbit_tangent, orbit_tangent_routes, period_dimension, proper_containment, stabilizer_algebra,
    ConjugatePair, EndGrading, Flag, GradedLieSubalgebra, InducedStep, KillingForm, LieAlgebra,
    NumericInvariants, OrbitTangent, Tensor, TensorIndex,
};
pub use jets::{
    flag_jet_equal, jet_classify, jet_compose_map, jet_compose_map_chain_rule, jet_reparametrize,
    reparametrize_flagjet, ChartMap, Constancy, Degeneracy, FlagJet, FlagShape, Jet,
};
pub use period::{
    equivariance_check, eval_eta, flat_tensors_at, orbit_membership_jet, reduce_chart_mod_p,
    reduce_chart_mod_p_at, reduce_flagjet, reduce_jet, reduce_matrix, reduce_scalar, reduce_series,
    transport_tensor, FrameAssignment,
};
