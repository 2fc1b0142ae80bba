//! C ABI over `dpmoral`.
//!
//! Fallible calls return a [`DpmStatus`]; the message of the last failure is
//! available from [`dpm_last_error`] on the same thread. Handles are opaque
//! and owned by the caller once returned. Free each one with its `_free`
//! function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use dpmoral::cli::{
    fit_corpus, looks_preprocessed, release, BetaRow, ReleaseInput, ReleaseMeta, ReleaseRequest, ReleaseRow,
};
use dpmoral::datagen::{generate_corpus, ingest_csv, preprocess_scale, write_corpus_file, PersonalizedSpec, SocietySpec};
use dpmoral::evaluation::{Mechanism, PrivacySetting};
use dpmoral::inference::{aggregate_mean, SolverConfig};
use dpmoral::{Corpus, Error, PreferenceVector};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpmStatus {
    Ok = 0,
    NullPointer = 1,
    /// Bad parameter or configuration, including invalid ε and bounds.
    InvalidArgument = 2,
    Io = 3,
    Numerical = 4,
    /// rldp-fm was given alternatives outside the preprocessing cap.
    NotPreprocessed = 5,
    Parse = 6,
    Validation = 7,
    BufferTooSmall = 8,
    IndexOutOfRange = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpmMechanism {
    Vlcp = 0,
    Vldp = 1,
    RldpFm = 2,
}

impl From<DpmMechanism> for Mechanism {
    fn from(m: DpmMechanism) -> Self {
        match m {
            DpmMechanism::Vlcp => Mechanism::Vlcp,
            DpmMechanism::Vldp => Mechanism::Vldp,
            DpmMechanism::RldpFm => Mechanism::RldpFm,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpmPrivacyKind {
    /// No noise. The output is not private.
    None = 0,
    Uniform = 1,
    Personalized = 2,
}

/// Privacy request. `epsilon` is read for `Uniform`; the five group fields
/// for `Personalized`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpmPrivacy {
    pub kind: DpmPrivacyKind,
    pub epsilon: f64,
    pub f_c: f64,
    pub f_m: f64,
    pub eps_c: f64,
    pub eps_m: f64,
    pub eps_l: f64,
}

impl DpmPrivacy {
    fn setting(&self) -> Option<PrivacySetting> {
        match self.kind {
            DpmPrivacyKind::None => None,
            DpmPrivacyKind::Uniform => Some(PrivacySetting::Uniform(self.epsilon)),
            DpmPrivacyKind::Personalized => Some(PrivacySetting::Personalized(PersonalizedSpec {
                f_c: self.f_c,
                f_m: self.f_m,
                eps_c: self.eps_c,
                eps_m: self.eps_m,
                eps_l: self.eps_l,
            })),
        }
    }
}

/// Synthetic or ingested comparisons.
pub struct DpmCorpus(Corpus);

/// Per-voter MLE fits.
pub struct DpmBetas(Vec<BetaRow>);

/// Released vectors; the aggregate is always the last row.
pub struct DpmRelease {
    meta: ReleaseMeta,
    rows: Vec<ReleaseRow>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).expect("no interior nul"));
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(DpmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io(_) => DpmStatus::Io,
            Error::Numerical(_) => DpmStatus::Numerical,
            Error::NotPreprocessed => DpmStatus::NotPreprocessed,
            Error::Parse { .. } => DpmStatus::Parse,
            Error::Validation(_) => DpmStatus::Validation,
            _ => DpmStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn guard(f: impl FnOnce() -> Outcome) -> DpmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error(None);
            DpmStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(Some(msg));
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(Some(format!("internal panic: {msg}")));
            DpmStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(DpmStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn path_arg(p: *const c_char) -> Result<PathBuf, Failure> {
    if p.is_null() {
        return Err(null("path"));
    }
    let s = CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(DpmStatus::InvalidArgument, "path is not valid UTF-8".into()))?;
    Ok(PathBuf::from(s))
}

unsafe fn copy_out(values: &[f64], out: *mut f64, len: usize) -> Outcome {
    if out.is_null() {
        return Err(null("out"));
    }
    if len < values.len() {
        return Err(Failure(
            DpmStatus::BufferTooSmall,
            format!("buffer holds {len} values, need {}", values.len()),
        ));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

unsafe fn give<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

fn check_index(index: usize, len: usize) -> Outcome {
    if index < len {
        Ok(())
    } else {
        Err(Failure(
            DpmStatus::IndexOutOfRange,
            format!("index {index} out of range for {len} rows"),
        ))
    }
}

/// Message of the last failed call on this thread, or NULL after a
/// success. Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn dpm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn dpm_privacy_none() -> DpmPrivacy {
    DpmPrivacy {
        kind: DpmPrivacyKind::None,
        ..dpm_privacy_personalized_default()
    }
}

#[no_mangle]
pub extern "C" fn dpm_privacy_uniform(epsilon: f64) -> DpmPrivacy {
    DpmPrivacy {
        kind: DpmPrivacyKind::Uniform,
        epsilon,
        ..dpm_privacy_personalized_default()
    }
}

/// 54% conservative on [0.01, 0.2], 36% moderate on [0.2, 1], the rest at 1.
#[no_mangle]
pub extern "C" fn dpm_privacy_personalized_default() -> DpmPrivacy {
    let s = PersonalizedSpec::default();
    DpmPrivacy {
        kind: DpmPrivacyKind::Personalized,
        epsilon: f64::NAN,
        f_c: s.f_c,
        f_m: s.f_m,
        eps_c: s.eps_c,
        eps_m: s.eps_m,
        eps_l: s.eps_l,
    }
}

/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn dpm_corpus_generate(
    n_voters: usize,
    n_records: usize,
    d: usize,
    seed: u64,
    out: *mut *mut DpmCorpus,
) -> DpmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = SocietySpec {
            n_voters,
            n_records,
            d,
            seed,
        };
        let (_, corpus) = generate_corpus(&spec)?;
        give(out, DpmCorpus(corpus));
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` valid for one pointer.
#[no_mangle]
pub unsafe extern "C" fn dpm_corpus_read_csv(path: *const c_char, out: *mut *mut DpmCorpus) -> DpmStatus {
    guard(|| {
        let path = path_arg(path)?;
        if out.is_null() {
            return Err(null("out"));
        }
        give(out, DpmCorpus(ingest_csv(&path)?));
        Ok(())
    })
}

/// # Safety
/// `corpus` must come from this library; `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn dpm_corpus_write_csv(corpus: *const DpmCorpus, path: *const c_char) -> DpmStatus {
    guard(|| {
        let c = borrow(corpus, "corpus")?;
        write_corpus_file(&c.0, &path_arg(path)?)?;
        Ok(())
    })
}

/// Clips every alternative to ℓ2 norm 1/2, as rldp-fm requires.
///
/// # Safety
/// `corpus` must come from this library; `out` valid for one pointer.
#[no_mangle]
pub unsafe extern "C" fn dpm_corpus_preprocess(corpus: *const DpmCorpus, out: *mut *mut DpmCorpus) -> DpmStatus {
    guard(|| {
        let c = borrow(corpus, "corpus")?;
        if out.is_null() {
            return Err(null("out"));
        }
        give(out, DpmCorpus(preprocess_scale(&c.0)));
        Ok(())
    })
}

/// # Safety
/// `corpus` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn dpm_corpus_num_voters(corpus: *const DpmCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.0.voters.len())
}

/// # Safety
/// `corpus` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn dpm_corpus_dim(corpus: *const DpmCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.0.d)
}

/// # Safety
/// `corpus` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn dpm_corpus_is_preprocessed(corpus: *const DpmCorpus) -> bool {
    corpus
        .as_ref()
        .is_some_and(|c| c.0.preprocessed || looks_preprocessed(&c.0))
}

/// # Safety
/// `corpus` must be NULL or an unfreed handle from this library.
#[no_mangle]
pub unsafe extern "C" fn dpm_corpus_free(corpus: *mut DpmCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Fits every voter by ℓ1-constrained probit MLE with the default solver.
///
/// # Safety
/// `corpus` must come from this library; `out` valid for one pointer.
#[no_mangle]
pub unsafe extern "C" fn dpm_fit(corpus: *const DpmCorpus, bound: f64, out: *mut *mut DpmBetas) -> DpmStatus {
    guard(|| {
        let c = borrow(corpus, "corpus")?;
        if out.is_null() {
            return Err(null("out"));
        }
        give(out, DpmBetas(fit_corpus(&c.0, bound, &SolverConfig::default())?));
        Ok(())
    })
}

/// # Safety
/// `betas` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn dpm_betas_len(betas: *const DpmBetas) -> usize {
    betas.as_ref().map_or(0, |b| b.0.len())
}

/// # Safety
/// `betas` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn dpm_betas_dim(betas: *const DpmBetas) -> usize {
    betas
        .as_ref()
        .and_then(|b| b.0.first())
        .map_or(0, |r| r.beta.dim())
}

/// Copies voter `index`'s vector into `out[0..dim]`.
///
/// # Safety
/// `betas` must come from this library; `out` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn dpm_betas_get(betas: *const DpmBetas, index: usize, out: *mut f64, len: usize) -> DpmStatus {
    guard(|| {
        let b = borrow(betas, "betas")?;
        check_index(index, b.0.len())?;
        copy_out(&b.0[index].beta.beta, out, len)
    })
}

/// # Safety
/// `betas` must come from this library; `out` valid for one value.
#[no_mangle]
pub unsafe extern "C" fn dpm_betas_voter_id(betas: *const DpmBetas, index: usize, out: *mut u64) -> DpmStatus {
    guard(|| {
        let b = borrow(betas, "betas")?;
        check_index(index, b.0.len())?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = b.0[index].voter_id;
        Ok(())
    })
}

/// # Safety
/// `betas` must come from this library; `out` valid for one value.
#[no_mangle]
pub unsafe extern "C" fn dpm_betas_converged(betas: *const DpmBetas, index: usize, out: *mut bool) -> DpmStatus {
    guard(|| {
        let b = borrow(betas, "betas")?;
        check_index(index, b.0.len())?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = b.0[index].converged;
        Ok(())
    })
}

/// Non-private mean of the fits.
///
/// # Safety
/// `betas` must come from this library; `out` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn dpm_betas_mean(betas: *const DpmBetas, out: *mut f64, len: usize) -> DpmStatus {
    guard(|| {
        let b = borrow(betas, "betas")?;
        let vs: Vec<PreferenceVector> = b.0.iter().map(|r| r.beta.clone()).collect();
        copy_out(&aggregate_mean(&vs)?.beta, out, len)
    })
}

/// # Safety
/// `betas` must be NULL or an unfreed handle from this library.
#[no_mangle]
pub unsafe extern "C" fn dpm_betas_free(betas: *mut DpmBetas) {
    if !betas.is_null() {
        drop(Box::from_raw(betas));
    }
}

unsafe fn run_release(
    input: ReleaseInput,
    mechanism: DpmMechanism,
    privacy: *const DpmPrivacy,
    bound: f64,
    seed: u64,
    out: *mut *mut DpmRelease,
) -> Outcome {
    let privacy = borrow(privacy, "privacy")?;
    if out.is_null() {
        return Err(null("out"));
    }
    let req = ReleaseRequest {
        mechanism: mechanism.into(),
        privacy: privacy.setting(),
        seed,
        bound,
        solver: SolverConfig::default(),
    };
    let (meta, rows) = release(&input, &req)?;
    give(out, DpmRelease { meta, rows });
    Ok(())
}

/// vlcp or vldp over fitted vectors. Noise depends only on `seed`.
///
/// # Safety
/// `betas` must come from this library; `privacy` must point to a
/// `DpmPrivacy`; `out` valid for one pointer.
#[no_mangle]
pub unsafe extern "C" fn dpm_release_betas(
    betas: *const DpmBetas,
    mechanism: DpmMechanism,
    privacy: *const DpmPrivacy,
    bound: f64,
    seed: u64,
    out: *mut *mut DpmRelease,
) -> DpmStatus {
    guard(|| {
        let b = borrow(betas, "betas")?;
        run_release(ReleaseInput::Betas(b.0.clone()), mechanism, privacy, bound, seed, out)
    })
}

/// rldp-fm over a preprocessed corpus.
///
/// # Safety
/// As [`dpm_release_betas`], with a corpus handle.
#[no_mangle]
pub unsafe extern "C" fn dpm_release_corpus(
    corpus: *const DpmCorpus,
    mechanism: DpmMechanism,
    privacy: *const DpmPrivacy,
    bound: f64,
    seed: u64,
    out: *mut *mut DpmRelease,
) -> DpmStatus {
    guard(|| {
        let c = borrow(corpus, "corpus")?;
        run_release(ReleaseInput::Corpus(c.0.clone()), mechanism, privacy, bound, seed, out)
    })
}

/// Rows in the release, the aggregate included.
///
/// # Safety
/// `rel` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn dpm_release_len(rel: *const DpmRelease) -> usize {
    rel.as_ref().map_or(0, |r| r.rows.len())
}

/// # Safety
/// `rel` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn dpm_release_dim(rel: *const DpmRelease) -> usize {
    rel.as_ref()
        .and_then(|r| r.rows.last())
        .map_or(0, |row| row.beta.len())
}

/// Sensitivity Δ used for the noise scale; NaN for NULL.
///
/// # Safety
/// `rel` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn dpm_release_delta(rel: *const DpmRelease) -> f64 {
    rel.as_ref().map_or(f64::NAN, |r| r.meta.delta)
}

/// False for no-noise releases.
///
/// # Safety
/// `rel` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn dpm_release_is_private(rel: *const DpmRelease) -> bool {
    rel.as_ref().is_some_and(|r| r.meta.private)
}

/// # Safety
/// `rel` must come from this library; `out` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn dpm_release_row(rel: *const DpmRelease, index: usize, out: *mut f64, len: usize) -> DpmStatus {
    guard(|| {
        let r = borrow(rel, "release")?;
        check_index(index, r.rows.len())?;
        copy_out(&r.rows[index].beta, out, len)
    })
}

/// Budget of row `index`; NaN for the aggregate of a distributed release.
///
/// # Safety
/// `rel` must come from this library; `out` valid for one value.
#[no_mangle]
pub unsafe extern "C" fn dpm_release_epsilon(rel: *const DpmRelease, index: usize, out: *mut f64) -> DpmStatus {
    guard(|| {
        let r = borrow(rel, "release")?;
        check_index(index, r.rows.len())?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = r.rows[index].epsilon.unwrap_or(f64::NAN);
        Ok(())
    })
}

/// The released society vector.
///
/// # Safety
/// `rel` must come from this library; `out` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn dpm_release_mean(rel: *const DpmRelease, out: *mut f64, len: usize) -> DpmStatus {
    guard(|| {
        let r = borrow(rel, "release")?;
        let last = r
            .rows
            .last()
            .ok_or_else(|| Failure(DpmStatus::IndexOutOfRange, "empty release".into()))?;
        copy_out(&last.beta, out, len)
    })
}

/// # Safety
/// `rel` must be NULL or an unfreed handle from this library.
#[no_mangle]
pub unsafe extern "C" fn dpm_release_free(rel: *mut DpmRelease) {
    if !rel.is_null() {
        drop(Box::from_raw(rel));
    }
}
