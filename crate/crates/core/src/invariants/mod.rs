//! Classical invariants, spectra and signatures.

mod bundle;
mod closed_form;
mod signature;
mod spectrum;
mod tau;

pub use bundle::{basic_invariants, InvariantBundle};
pub use closed_form::{
    closed_form_spectral_count, closed_form_spectral_count_unchecked, ClosedFormError, Family,
};
pub use signature::{signature_closed_form, signature_from_spectrum, signature_steenbrink, Signature};
pub use spectrum::{brieskorn_model, interval_count, spectrum, BrieskornModel, Rational, Spectrum};
pub use tau::{tau_es, tau_es_unshifted};
