//! C ABI for the verity news-credibility classifier.
//!
//! The entry point is an opaque [`Classifier`] handle loaded from a run
//! configuration file (the `effective.cfg` a `verity train` run echoes
//! works directly: it names the model, vocabulary and lexicon paths).
//! All functions return a [`VerityStatus`]; on failure a thread-local
//! message is available through [`verity_last_error_message`].
//!
//! Strings are NUL-terminated UTF-8. Out-parameters are written only on
//! `VERITY_STATUS_OK`. Handles must be released with
//! [`verity_classifier_free`]. A handle may be shared across threads
//! for concurrent prediction; loading and freeing are not synchronized.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use verity::config::{ResourceSet, RunConfig};
use verity::corpus::{Document, Label};
use verity::error::Error;
use verity::learner::Model;
use verity::lexfeatures::{
    credibility_features, FeatureGroups, Vocabulary, CREDIBILITY_FEATURE_COUNT,
};
use verity::textproc::tokenize;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerityStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// File system error (path in the error message).
    Io = 3,
    /// A file did not match its declared format.
    Parse = 4,
    /// Input data violated a contract (labels, finiteness, ...).
    Validation = 5,
    /// Bad or incomplete configuration.
    Config = 6,
    /// Dimension or layout mismatch.
    Shape = 7,
    /// An internal panic was caught at the boundary.
    Panic = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_last_error(message: &str) {
    LAST_ERROR.with(|slot| {
        let mut slot = slot.borrow_mut();
        slot.clear();
        slot.extend_from_slice(message.as_bytes());
    });
}

fn status_of(err: &Error) -> VerityStatus {
    match err {
        Error::Io { .. } => VerityStatus::Io,
        Error::Parse { .. } => VerityStatus::Parse,
        Error::Validation(_) => VerityStatus::Validation,
        Error::Config(_) => VerityStatus::Config,
        Error::Shape(_) => VerityStatus::Shape,
    }
}

fn fail(err: &Error) -> VerityStatus {
    set_last_error(&err.to_string());
    status_of(err)
}

/// Runs a fallible body behind a panic guard.
fn guarded<F>(body: F) -> VerityStatus
where
    F: FnOnce() -> VerityStatus,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic at the FFI boundary".to_string());
            set_last_error(&msg);
            VerityStatus::Panic
        }
    }
}

/// # Safety
/// `ptr` must be NULL or a valid NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, VerityStatus> {
    if ptr.is_null() {
        set_last_error("unexpected NULL string argument");
        return Err(VerityStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_last_error("string argument is not valid UTF-8");
        VerityStatus::InvalidUtf8
    })
}

/// A loaded model with everything needed to score raw documents.
pub struct Classifier {
    resources: ResourceSet,
    config: RunConfig,
    model: Model,
    vocabulary: Option<Vocabulary>,
    groups: FeatureGroups,
}

impl Classifier {
    fn load(config_path: &Path) -> Result<Self, Error> {
        let config = RunConfig::load(config_path)?;
        let resources = ResourceSet::load(&config)?;
        let model_path = config
            .paths
            .model
            .as_deref()
            .ok_or_else(|| Error::Config("run configuration has no [paths] model".into()))?;
        let model = Model::load(model_path)?;
        let groups = FeatureGroups {
            credibility: model.layout.credibility > 0,
            linguistic: model.layout.linguistic > 0,
            semantic: model.layout.semantic > 0,
        };
        let vocabulary = if groups.linguistic {
            let vpath = config.paths.vocabulary.as_deref().ok_or_else(|| {
                Error::Config("model has a linguistic block but no [paths] vocabulary".into())
            })?;
            let vocab = Vocabulary::load(vpath)?;
            if vocab.len() + 2 != model.layout.linguistic {
                return Err(Error::Shape(format!(
                    "vocabulary has {} entries but the model expects a linguistic block of {}",
                    vocab.len(),
                    model.layout.linguistic
                )));
            }
            Some(vocab)
        } else {
            None
        };
        if groups.credibility && config.features.mask.count() != model.layout.credibility {
            return Err(Error::Shape(format!(
                "mask selects {} features but the model expects {}",
                config.features.mask.count(),
                model.layout.credibility
            )));
        }
        if groups.semantic {
            match &resources.embeddings {
                Some(table) if table.dim() == model.layout.semantic => {}
                Some(table) => {
                    return Err(Error::Shape(format!(
                        "embedding table dimension {} does not match the model's semantic block {}",
                        table.dim(),
                        model.layout.semantic
                    )))
                }
                None => {
                    return Err(Error::Config(
                        "model has a semantic block but no [paths] embeddings".into(),
                    ))
                }
            }
        }
        Ok(Classifier {
            resources,
            config,
            model,
            vocabulary,
            groups,
        })
    }

    fn document(title: &str, body: &str) -> Document {
        Document {
            id: "ffi".into(),
            source: "ffi".into(),
            title: title.into(),
            body: body.into(),
            label: None,
        }
    }

    fn probability(&self, title: &str, body: &str) -> Result<f64, Error> {
        let pipeline = self.resources.pipeline(&self.config, self.groups);
        let fv = pipeline.extract(&Self::document(title, body), self.vocabulary.as_ref())?;
        self.model.predict_proba(&fv)
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn verity_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Copies the current thread's last error message into `buf` (up to
/// `cap - 1` bytes plus a NUL terminator) and returns the full message
/// length in bytes. With a NULL `buf` or zero `cap` nothing is written,
/// so the return value can size a buffer.
///
/// # Safety
/// `buf` must be NULL or point to at least `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn verity_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        if !buf.is_null() && cap > 0 {
            let n = message.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(message.as_ptr(), buf.cast(), n);
            *buf.add(n) = 0;
        }
        message.len()
    })
}

/// Loads a classifier from a run-configuration file naming the model,
/// vocabulary and lexicon paths. On success writes a handle to `out`;
/// release it with [`verity_classifier_free`].
///
/// # Safety
/// `config_path` must be a valid NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn verity_classifier_load(
    config_path: *const c_char,
    out: *mut *mut Classifier,
) -> VerityStatus {
    guarded(|| {
        if out.is_null() {
            set_last_error("out pointer is NULL");
            return VerityStatus::NullPointer;
        }
        let path = match read_str(config_path) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match Classifier::load(Path::new(path)) {
            Ok(classifier) => {
                *out = Box::into_raw(Box::new(classifier));
                VerityStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a classifier handle. NULL is a no-op.
///
/// # Safety
/// `classifier` must be NULL or a handle from
/// [`verity_classifier_load`] that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn verity_classifier_free(classifier: *mut Classifier) {
    if !classifier.is_null() {
        drop(Box::from_raw(classifier));
    }
}

/// Total feature dimension of the loaded model, 0 for NULL handles.
///
/// # Safety
/// `classifier` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn verity_classifier_feature_dim(classifier: *const Classifier) -> usize {
    if classifier.is_null() {
        return 0;
    }
    (*classifier).model.layout.total()
}

/// Probability that the document is fake, in [0, 1]. An empty title is
/// allowed (pass "" rather than NULL).
///
/// # Safety
/// `classifier` must be a live handle; `title` and `body` valid
/// NUL-terminated strings; `out_probability` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn verity_classifier_predict_proba(
    classifier: *const Classifier,
    title: *const c_char,
    body: *const c_char,
    out_probability: *mut f64,
) -> VerityStatus {
    guarded(|| {
        if classifier.is_null() || out_probability.is_null() {
            set_last_error("classifier or out pointer is NULL");
            return VerityStatus::NullPointer;
        }
        let title = match read_str(title) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let body = match read_str(body) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match (*classifier).probability(title, body) {
            Ok(p) => {
                *out_probability = p;
                VerityStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Predicted label: 1 for fake, 0 for credible (ties go to fake).
///
/// # Safety
/// As for [`verity_classifier_predict_proba`].
#[no_mangle]
pub unsafe extern "C" fn verity_classifier_predict(
    classifier: *const Classifier,
    title: *const c_char,
    body: *const c_char,
    out_label: *mut c_int,
) -> VerityStatus {
    guarded(|| {
        if out_label.is_null() {
            set_last_error("out pointer is NULL");
            return VerityStatus::NullPointer;
        }
        let mut probability = 0.0;
        let status = verity_classifier_predict_proba(classifier, title, body, &mut probability);
        if status == VerityStatus::Ok {
            *out_label = if probability >= 0.5 {
                Label::Fake.index() as c_int
            } else {
                Label::Credible.index() as c_int
            };
        }
        status
    })
}

/// Computes the 20 canonical credibility features of a document into
/// `out_features` (canonical order, length 20), using the classifier's
/// lexicons. Independent of the model's feature mask.
///
/// # Safety
/// `classifier` must be a live handle; `title` and `body` valid
/// NUL-terminated strings; `out_features` must point to 20 doubles.
#[no_mangle]
pub unsafe extern "C" fn verity_classifier_credibility_features(
    classifier: *const Classifier,
    title: *const c_char,
    body: *const c_char,
    out_features: *mut f64,
) -> VerityStatus {
    guarded(|| {
        if classifier.is_null() || out_features.is_null() {
            set_last_error("classifier or out pointer is NULL");
            return VerityStatus::NullPointer;
        }
        let title = match read_str(title) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let body = match read_str(body) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let c = &*classifier;
        let doc = Classifier::document(title, body);
        let tokens = tokenize(&doc.text(c.config.features.include_title));
        let block = credibility_features(&tokens, &c.resources.pronouns, &c.resources.sentiment);
        std::ptr::copy_nonoverlapping(
            block.values().as_ptr(),
            out_features,
            CREDIBILITY_FEATURE_COUNT,
        );
        VerityStatus::Ok
    })
}
