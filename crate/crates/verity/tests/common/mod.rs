//! Shared fixtures for integration tests: a seeded generator of
//! style-separable synthetic news corpora.
//!
//! Fake-style documents shout: ALL-CAPS words, stacked exclamation
//! marks, negative sentiment-lexicon vocabulary, hashtags. Credible
//! documents quote: Bulgarian „lower-upper“ quotes, neutral
//! institutional vocabulary. The two classes also use disjoint topical
//! word pools so linguistic and semantic features carry signal too.

use verity::corpus::{Document, Label, LabeledCorpus};
use verity::rng::Rng;

const FAKE_TOPIC: [&str; 12] = [
    "извънземни",
    "конспирация",
    "сензация",
    "чудо",
    "мистерия",
    "пришълци",
    "зомбита",
    "заговор",
    "пророчество",
    "хороскоп",
    "привидение",
    "магия",
];

const FAKE_NEGATIVE: [&str; 6] = ["шок", "скандал", "лъжа", "ужасно", "катастрофа", "провал"];

const CREDIBLE_TOPIC: [&str; 12] = [
    "парламент",
    "министър",
    "бюджет",
    "комисия",
    "доклад",
    "заседание",
    "реформа",
    "институция",
    "законопроект",
    "председател",
    "анализ",
    "икономика",
];

const CREDIBLE_QUOTED: [&str; 6] = [
    "позицията е ясна",
    "данните са проверени",
    "решението е прието",
    "обсъждането продължава",
    "докладът е публикуван",
    "процедурата е спазена",
];

const CONNECTORS: [&str; 8] = [
    "днес",
    "вчера",
    "съобщи",
    "относно",
    "според",
    "новина",
    "страната",
    "градът",
];

fn pick<'a>(rng: &mut Rng, pool: &[&'a str]) -> &'a str {
    pool[rng.next_below(pool.len())]
}

fn fake_body(rng: &mut Rng) -> String {
    let mut words = Vec::new();
    let n = 8 + rng.next_below(6);
    for _ in 0..n {
        match rng.next_below(5) {
            // Shouted topic word.
            0 => words.push(pick(rng, &FAKE_TOPIC).to_uppercase()),
            1 => words.push(format!(
                "{}{}",
                pick(rng, &FAKE_NEGATIVE),
                "!".repeat(1 + rng.next_below(3))
            )),
            2 => words.push(pick(rng, &FAKE_TOPIC).to_string()),
            3 => words.push(pick(rng, &CONNECTORS).to_string()),
            _ => words.push(format!("#{}", pick(rng, &FAKE_TOPIC))),
        }
    }
    words.push(format!("{}!!", pick(rng, &FAKE_NEGATIVE).to_uppercase()));
    words.join(" ")
}

fn credible_body(rng: &mut Rng) -> String {
    let mut words = Vec::new();
    let n = 8 + rng.next_below(6);
    for _ in 0..n {
        match rng.next_below(4) {
            0 => words.push(format!("„{}“", pick(rng, &CREDIBLE_QUOTED))),
            1 => words.push(pick(rng, &CONNECTORS).to_string()),
            _ => words.push(pick(rng, &CREDIBLE_TOPIC).to_string()),
        }
    }
    words.push(format!("„{}“", pick(rng, &CREDIBLE_QUOTED)));
    words.join(" ")
}

/// A balanced labeled corpus of `n_per_class` fake-style and
/// credible-style documents. Deterministic for a given seed.
pub fn synthetic_corpus(n_per_class: usize, seed: u64) -> LabeledCorpus {
    let mut rng = Rng::new(seed);
    let mut docs = Vec::with_capacity(2 * n_per_class);
    for i in 0..n_per_class {
        docs.push(Document {
            id: format!("fake-{i}"),
            source: "synthetic-fake".into(),
            title: String::new(),
            body: fake_body(&mut rng),
            label: Some(Label::Fake),
        });
        docs.push(Document {
            id: format!("cred-{i}"),
            source: "synthetic-credible".into(),
            title: String::new(),
            body: credible_body(&mut rng),
            label: Some(Label::Credible),
        });
    }
    LabeledCorpus::new(docs).expect("generated corpus is valid")
}

/// One pass/fail line per acceptance criterion, then the assert.
#[allow(dead_code)] // only the acceptance target uses it
pub fn report(criterion: &str, name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("[acceptance] criterion {criterion} ({name}): {status} — {detail}");
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}
