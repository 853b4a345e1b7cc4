//! Drives the C ABI end to end: trains a small model through the core
//! crate, writes a run configuration, then loads and scores documents
//! through the extern "C" surface.

use std::ffi::{c_char, CString};
use std::path::Path;

use verity::corpus::{Document, Label, LabeledCorpus};
use verity::learner::{fit, TrainConfig};
use verity::lexfeatures::{
    FeatureGroups, FeatureMask, FeaturePipeline, NgramOrders, PronounLexicon, SentimentLexicon,
    Weighting,
};
use verity::textproc::StopList;

use verity_ffi::{
    verity_classifier_credibility_features, verity_classifier_feature_dim, verity_classifier_free,
    verity_classifier_load, verity_classifier_predict, verity_classifier_predict_proba,
    verity_last_error_message, verity_version, Classifier, VerityStatus,
};

/// Varied style-separable corpus: fakes shout, credibles quote.
fn style_corpus(n_per_class: usize) -> LabeledCorpus {
    let mut rng = verity::rng::Rng::new(90210);
    let fake_pool = ["сензация", "измама", "шок", "скандал", "заговор", "чудо"];
    let cred_pool = [
        "комисията",
        "доклад",
        "бюджет",
        "заседание",
        "реформа",
        "данни",
    ];
    let mut docs = Vec::new();
    for i in 0..n_per_class {
        let mut words = vec!["ШОК".to_string()];
        for _ in 0..(5 + rng.next_below(6)) {
            let w = fake_pool[rng.next_below(fake_pool.len())];
            words.push(if rng.next_below(3) == 0 {
                format!("{}{}", w.to_uppercase(), "!".repeat(1 + rng.next_below(2)))
            } else {
                w.to_string()
            });
        }
        words.push("нечувано!!".into());
        docs.push(Document {
            id: format!("f{i}"),
            source: "s".into(),
            title: String::new(),
            body: words.join(" "),
            label: Some(Label::Fake),
        });

        let mut words = vec!["Комисията".to_string()];
        for _ in 0..(5 + rng.next_below(6)) {
            let w = cred_pool[rng.next_below(cred_pool.len())];
            words.push(if rng.next_below(3) == 0 {
                format!("„{w}“")
            } else {
                w.to_string()
            });
        }
        docs.push(Document {
            id: format!("c{i}"),
            source: "s".into(),
            title: String::new(),
            body: words.join(" "),
            label: Some(Label::Credible),
        });
    }
    LabeledCorpus::new(docs).unwrap()
}

/// Trains credibility+linguistic model artifacts and writes the run
/// config the C API consumes. Returns the config path.
fn train_fixture(dir: &Path) -> std::path::PathBuf {
    let corpus = style_corpus(40);
    let stops = StopList::builtin("bg").unwrap();
    let pronouns = PronounLexicon::builtin("bg").unwrap();
    let sentiment = SentimentLexicon::builtin("bg").unwrap();
    let pipeline = FeaturePipeline {
        groups: FeatureGroups::parse("credibility+linguistic").unwrap(),
        mask: FeatureMask::default_seven(),
        weighting: Weighting::TfIdf,
        orders: NgramOrders::default(),
        min_df: 2,
        include_title: true,
        stops: &stops,
        pronouns: &pronouns,
        sentiment: &sentiment,
        embeddings: None,
    };
    let vocab = pipeline.build_vocabulary(&corpus).unwrap().unwrap();
    let features = pipeline.extract_corpus(&corpus, Some(&vocab)).unwrap();
    let labels: Vec<Label> = corpus.iter().map(|d| d.label.unwrap()).collect();
    let model = fit(&features, &labels, &TrainConfig::default()).unwrap();

    let model_path = dir.join("model.txt");
    let vocab_path = dir.join("vocabulary.txt");
    model.save(&model_path).unwrap();
    vocab.save(&vocab_path).unwrap();

    let config_path = dir.join("run.cfg");
    std::fs::write(
        &config_path,
        format!(
            "language = bg\n[paths]\nmodel = {}\nvocabulary = {}\n[features]\nmin_df = 2\n",
            model_path.display(),
            vocab_path.display()
        ),
    )
    .unwrap();
    config_path
}

fn last_error() -> String {
    let mut buf = vec![0u8; 512];
    let n = unsafe { verity_last_error_message(buf.as_mut_ptr().cast::<c_char>(), buf.len()) };
    String::from_utf8_lossy(&buf[..n.min(buf.len() - 1)]).to_string()
}

fn load(config_path: &Path) -> *mut Classifier {
    let c_path = CString::new(config_path.to_str().unwrap()).unwrap();
    let mut handle: *mut Classifier = std::ptr::null_mut();
    let status = unsafe { verity_classifier_load(c_path.as_ptr(), &mut handle) };
    assert_eq!(status, VerityStatus::Ok, "load failed: {}", last_error());
    assert!(!handle.is_null());
    handle
}

#[test]
fn version_is_a_static_string() {
    let v = unsafe { std::ffi::CStr::from_ptr(verity_version()) };
    assert!(!v.to_str().unwrap().is_empty());
}

#[test]
fn load_predict_and_free() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = train_fixture(dir.path());
    let handle = load(&config_path);

    let dim = unsafe { verity_classifier_feature_dim(handle) };
    assert!(dim > 7, "dimension {dim} should include the sparse block");

    let title = CString::new("").unwrap();
    let fake_body = CString::new("ШОК сензация ИЗМАМА! заговор скандал нечувано!!").unwrap();
    let cred_body = CString::new("Комисията прие „доклад“ за бюджет на заседание данни").unwrap();

    let mut p_fake = 0.0;
    let status = unsafe {
        verity_classifier_predict_proba(handle, title.as_ptr(), fake_body.as_ptr(), &mut p_fake)
    };
    assert_eq!(status, VerityStatus::Ok, "{}", last_error());
    let mut p_cred = 0.0;
    let status = unsafe {
        verity_classifier_predict_proba(handle, title.as_ptr(), cred_body.as_ptr(), &mut p_cred)
    };
    assert_eq!(status, VerityStatus::Ok, "{}", last_error());
    assert!(p_fake > 0.5, "fake-style probability {p_fake}");
    assert!(p_cred < 0.5, "credible-style probability {p_cred}");

    let mut label = -1;
    let status = unsafe {
        verity_classifier_predict(handle, title.as_ptr(), fake_body.as_ptr(), &mut label)
    };
    assert_eq!(status, VerityStatus::Ok);
    assert_eq!(label, 1);
    let status = unsafe {
        verity_classifier_predict(handle, title.as_ptr(), cred_body.as_ptr(), &mut label)
    };
    assert_eq!(status, VerityStatus::Ok);
    assert_eq!(label, 0);

    unsafe { verity_classifier_free(handle) };
}

#[test]
fn credibility_features_through_the_abi() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = train_fixture(dir.path());
    let handle = load(&config_path);

    let title = CString::new("").unwrap();
    let body = CString::new(r#"NASA said "GO GO"! Really?"#).unwrap();
    let mut features = [0.0f64; 20];
    let status = unsafe {
        verity_classifier_credibility_features(
            handle,
            title.as_ptr(),
            body.as_ptr(),
            features.as_mut_ptr(),
        )
    };
    assert_eq!(status, VerityStatus::Ok, "{}", last_error());
    assert_eq!(features[0], 9.0); // tokensCount
    assert_eq!(features[1], 0.6); // allUpperCaseCount
    assert_eq!(features[11], 1.0); // exclMarks
    assert_eq!(features[15], 2.0); // doubleQuotes

    unsafe { verity_classifier_free(handle) };
}

#[test]
fn error_paths_set_status_and_message() {
    // Missing config file.
    let c_path = CString::new("/nonexistent/run.cfg").unwrap();
    let mut handle: *mut Classifier = std::ptr::null_mut();
    let status = unsafe { verity_classifier_load(c_path.as_ptr(), &mut handle) };
    assert_eq!(status, VerityStatus::Io);
    assert!(handle.is_null());
    assert!(last_error().contains("/nonexistent/run.cfg"));

    // NULL pointers.
    let status = unsafe { verity_classifier_load(std::ptr::null(), &mut handle) };
    assert_eq!(status, VerityStatus::NullPointer);
    let status = unsafe { verity_classifier_load(c_path.as_ptr(), std::ptr::null_mut()) };
    assert_eq!(status, VerityStatus::NullPointer);

    // Invalid UTF-8 in a string argument.
    let bad = [0xffu8, 0xfe, 0x00];
    let status = unsafe { verity_classifier_load(bad.as_ptr().cast::<c_char>(), &mut handle) };
    assert_eq!(status, VerityStatus::InvalidUtf8);

    // Config without a model path.
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("incomplete.cfg");
    std::fs::write(&cfg, "language = bg\n").unwrap();
    let c_path = CString::new(cfg.to_str().unwrap()).unwrap();
    let status = unsafe { verity_classifier_load(c_path.as_ptr(), &mut handle) };
    assert_eq!(status, VerityStatus::Config);
    assert!(last_error().contains("model"));

    // Prediction with a NULL handle.
    let title = CString::new("").unwrap();
    let mut p = 0.0;
    let status = unsafe {
        verity_classifier_predict_proba(std::ptr::null(), title.as_ptr(), title.as_ptr(), &mut p)
    };
    assert_eq!(status, VerityStatus::NullPointer);

    // Freeing NULL is a no-op.
    unsafe { verity_classifier_free(std::ptr::null_mut()) };
}

#[test]
fn last_error_message_reports_required_length() {
    let c_path = CString::new("/nonexistent/xyz.cfg").unwrap();
    let mut handle: *mut Classifier = std::ptr::null_mut();
    unsafe { verity_classifier_load(c_path.as_ptr(), &mut handle) };

    let needed = unsafe { verity_last_error_message(std::ptr::null_mut(), 0) };
    assert!(needed > 0);
    // A short buffer gets a truncated, NUL-terminated copy.
    let mut small = vec![0u8; 8];
    let reported =
        unsafe { verity_last_error_message(small.as_mut_ptr().cast::<c_char>(), small.len()) };
    assert_eq!(reported, needed);
    assert_eq!(small[7], 0);
    assert!(small[..7].iter().all(|&b| b != 0));
}

#[test]
fn generated_header_exists_and_declares_the_api() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/verity.h");
    let content = std::fs::read_to_string(&header).expect("cbindgen header generated");
    for symbol in [
        "VerityStatus",
        "VerityClassifier",
        "verity_classifier_load",
        "verity_classifier_predict_proba",
        "verity_classifier_credibility_features",
        "verity_last_error_message",
        "verity_version",
    ] {
        assert!(content.contains(symbol), "header missing {symbol}");
    }
}
