//! Corpus data model and the line-delimited corpus format.
//!
//! A corpus file is one JSON record per line. The first line is a header
//! declaring the preference-function names and an optional head-to-class
//! map; every following line is one sentence:
//!
//! ```text
//! {"function_names":["Low1","Low2"],"class_map":{}}
//! {"id":"s1","tokens":["do","i","get","dinner"],"gold":[[0,4,"P"]],"analyses":[...]}
//! ```
//!
//! Spans are `[start, end, label]` with a half-open token range and label
//! `"A"`, `"P"`, or `null`. Triples are `[h1, r, h2]`. Feature maps give raw
//! preference-function scores; a missing key reads as 0. Loading enforces
//! every structural invariant, so a corpus obtained from [`load_corpus`]
//! always passes [`validate`] cleanly.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Constituent category: argument or predication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    A,
    P,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::A => write!(f, "A"),
            Label::P => write!(f, "P"),
        }
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" => Ok(Label::A),
            "P" => Ok(Label::P),
            other => Err(format!("unknown constituent label {other:?}")),
        }
    }
}

/// A token span `[start, end)` with an optional category label.
///
/// Span comparisons throughout the crate are over the unlabeled
/// `(start, end)` pair; labels are retained for display.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "SpanRepr", into = "SpanRepr")]
pub struct Constituent {
    pub start: usize,
    pub end: usize,
    pub label: Option<Label>,
}

impl Constituent {
    pub fn new(start: usize, end: usize, label: Option<Label>) -> Self {
        Constituent { start, end, label }
    }

    /// The unlabeled segment this constituent covers.
    pub fn segment(&self) -> (usize, usize) {
        (self.start, self.end)
    }
}

/// Wire form of a span: `[start, end, label]`.
#[derive(Serialize, Deserialize)]
struct SpanRepr(usize, usize, Option<Label>);

impl From<SpanRepr> for Constituent {
    fn from(r: SpanRepr) -> Self {
        Constituent::new(r.0, r.1, r.2)
    }
}

impl From<Constituent> for SpanRepr {
    fn from(c: Constituent) -> Self {
        SpanRepr(c.start, c.end, c.label)
    }
}

/// A gold skeletal tree, stored flat as a set of constituent spans.
///
/// Nesting is checked, not represented: all downstream computations are set
/// operations on segments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct SkeletalTree {
    pub constituents: Vec<Constituent>,
}

impl SkeletalTree {
    pub fn new(mut constituents: Vec<Constituent>) -> Self {
        constituents.sort();
        SkeletalTree { constituents }
    }

    /// Unlabeled segment set of the tree.
    pub fn segments(&self) -> HashSet<(usize, usize)> {
        self.constituents.iter().map(|c| c.segment()).collect()
    }
}

/// A semantic collocation record: two head predicates and the relation
/// (a preposition name or an argument-position index) between them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "TripleRepr", into = "TripleRepr")]
pub struct Triple {
    pub h1: String,
    pub r: String,
    pub h2: String,
}

impl Triple {
    pub fn new(h1: impl Into<String>, r: impl Into<String>, h2: impl Into<String>) -> Self {
        Triple {
            h1: h1.into(),
            r: r.into(),
            h2: h2.into(),
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.h1, self.r, self.h2)
    }
}

#[derive(Serialize, Deserialize)]
struct TripleRepr(String, String, String);

impl From<TripleRepr> for Triple {
    fn from(r: TripleRepr) -> Self {
        Triple {
            h1: r.0,
            r: r.1,
            h2: r.2,
        }
    }
}

impl From<Triple> for TripleRepr {
    fn from(t: Triple) -> Self {
        TripleRepr(t.h1, t.r, t.h2)
    }
}

/// One candidate analysis of a sentence.
///
/// `spans` is the segment set the analysis induces; `triples` and `rules`
/// are multisets (repeated occurrences count in statistics). `features`
/// holds raw preference-function scores keyed by declared function name;
/// missing keys read as 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub id: String,
    #[serde(default)]
    pub spans: Vec<Constituent>,
    #[serde(default)]
    pub triples: Vec<Triple>,
    #[serde(default)]
    pub rules: Vec<String>,
    #[serde(default)]
    pub features: BTreeMap<String, f64>,
}

impl Analysis {
    /// Raw score of the named preference function (0 when absent).
    pub fn feature(&self, name: &str) -> f64 {
        self.features.get(name).copied().unwrap_or(0.0)
    }

    /// Unlabeled segment set induced by this analysis.
    pub fn segments(&self) -> HashSet<(usize, usize)> {
        self.spans.iter().map(|c| c.segment()).collect()
    }
}

/// A sentence with its gold skeletal tree and candidate analyses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sentence {
    pub id: String,
    pub tokens: Vec<String>,
    pub gold: SkeletalTree,
    pub analyses: Vec<Analysis>,
}

/// A full corpus: declared preference functions, sentences, and an optional
/// head-symbol class map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub function_names: Vec<String>,
    #[serde(default)]
    pub class_map: BTreeMap<String, String>,
    pub sentences: Vec<Sentence>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    function_names: Vec<String>,
    #[serde(default)]
    class_map: BTreeMap<String, String>,
}

/// Errors raised while reading or checking a corpus.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: malformed record: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {violation}")]
    Invalid { line: usize, violation: String },
    #[error("empty corpus file: missing header line")]
    MissingHeader,
    #[error("invalid corpus: {0}")]
    Violation(String),
}

impl Corpus {
    /// Index of a declared function name, if declared.
    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.function_names.iter().position(|n| n == name)
    }

    pub fn n_analyses(&self) -> usize {
        self.sentences.iter().map(|s| s.analyses.len()).sum()
    }
}

/// Loads and fully validates a corpus file.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
    let file = File::open(path.as_ref())?;
    read_corpus(BufReader::new(file))
}

/// Reads a corpus from any line-oriented source, enforcing all invariants.
pub fn read_corpus(reader: impl Read) -> Result<Corpus, CorpusError> {
    let reader = BufReader::new(reader);
    let mut lines = reader.lines().enumerate();

    let header: Header = loop {
        match lines.next() {
            None => return Err(CorpusError::MissingHeader),
            Some((lineno, line)) => {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                break serde_json::from_str(&line).map_err(|e| CorpusError::Malformed {
                    line: lineno + 1,
                    message: e.to_string(),
                })?;
            }
        }
    };

    let mut corpus = Corpus {
        function_names: header.function_names,
        class_map: header.class_map,
        sentences: Vec::new(),
    };

    for (lineno, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut sentence: Sentence =
            serde_json::from_str(&line).map_err(|e| CorpusError::Malformed {
                line: lineno + 1,
                message: e.to_string(),
            })?;
        normalize_sentence(&mut sentence);
        if let Some(violation) = check_sentence(&sentence, &corpus.function_names).into_iter().next()
        {
            return Err(CorpusError::Invalid {
                line: lineno + 1,
                violation,
            });
        }
        corpus.sentences.push(sentence);
    }

    let corpus_level = check_corpus_level(&corpus);
    if let Some(v) = corpus_level.into_iter().next() {
        return Err(CorpusError::Violation(v));
    }
    Ok(corpus)
}

/// Writes a corpus in the canonical line-delimited format.
///
/// Output is deterministic: one header line, then sentences in order, with
/// feature maps in sorted key order.
pub fn write_corpus(corpus: &Corpus, mut writer: impl Write) -> Result<(), CorpusError> {
    let header = Header {
        function_names: corpus.function_names.clone(),
        class_map: corpus.class_map.clone(),
    };
    serde_json::to_writer(&mut writer, &header).map_err(io_from_json)?;
    writer.write_all(b"\n")?;
    for sentence in &corpus.sentences {
        serde_json::to_writer(&mut writer, sentence).map_err(io_from_json)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Writes a corpus file at `path`.
pub fn save_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<(), CorpusError> {
    let file = File::create(path.as_ref())?;
    let mut writer = BufWriter::new(file);
    write_corpus(corpus, &mut writer)?;
    writer.flush()?;
    Ok(())
}

fn io_from_json(e: serde_json::Error) -> CorpusError {
    CorpusError::Io(std::io::Error::other(e))
}

fn normalize_sentence(sentence: &mut Sentence) {
    sentence.gold.constituents.sort();
    for analysis in &mut sentence.analyses {
        analysis.spans.sort();
    }
}

/// Replaces triple head symbols by their class symbols wherever the class
/// map has an entry; relations and everything else are untouched. Unmapped
/// symbols pass through.
pub fn apply_class_map(corpus: &Corpus) -> Corpus {
    let mut out = corpus.clone();
    if corpus.class_map.is_empty() {
        return out;
    }
    for sentence in &mut out.sentences {
        for analysis in &mut sentence.analyses {
            for triple in &mut analysis.triples {
                if let Some(class) = corpus.class_map.get(&triple.h1) {
                    triple.h1 = class.clone();
                }
                if let Some(class) = corpus.class_map.get(&triple.h2) {
                    triple.h2 = class.clone();
                }
            }
        }
    }
    out
}

/// Checks every type invariant and returns a description of each violation.
///
/// An empty result means the corpus is well-formed. `load_corpus` enforces
/// the same checks, so `validate(load_corpus(f))` is empty for any file the
/// loader accepts.
pub fn validate(corpus: &Corpus) -> Vec<String> {
    let mut violations = Vec::new();
    for sentence in &corpus.sentences {
        violations.extend(check_sentence(sentence, &corpus.function_names));
    }
    violations.extend(check_corpus_level(corpus));
    violations
}

fn check_corpus_level(corpus: &Corpus) -> Vec<String> {
    let mut violations = Vec::new();
    let mut seen = HashSet::new();
    for name in &corpus.function_names {
        if !seen.insert(name) {
            violations.push(format!("duplicate declared function name {name:?}"));
        }
    }
    let mut ids = HashSet::new();
    for sentence in &corpus.sentences {
        if !ids.insert(&sentence.id) {
            violations.push(format!("duplicate sentence id {:?}", sentence.id));
        }
    }
    violations
}

fn check_sentence(sentence: &Sentence, function_names: &[String]) -> Vec<String> {
    let mut violations = Vec::new();
    let sid = &sentence.id;
    let n = sentence.tokens.len();

    if sentence.tokens.is_empty() {
        violations.push(format!("sentence {sid}: no tokens"));
    }
    if sentence.analyses.is_empty() {
        violations.push(format!("sentence {sid}: no analyses"));
    }

    check_tree(&sentence.gold, n, &format!("sentence {sid}: gold"), &mut violations);

    let mut analysis_ids = HashSet::new();
    for analysis in &sentence.analyses {
        let aid = &analysis.id;
        if !analysis_ids.insert(aid) {
            violations.push(format!("sentence {sid}: duplicate analysis id {aid:?}"));
        }
        let mut segments = HashSet::new();
        for span in &analysis.spans {
            check_span(span, n, &format!("sentence {sid}, analysis {aid}"), &mut violations);
            if !segments.insert(span.segment()) {
                violations.push(format!(
                    "sentence {sid}, analysis {aid}: duplicate span ({},{})",
                    span.start, span.end
                ));
            }
        }
        for triple in &analysis.triples {
            if triple.h1.is_empty() || triple.r.is_empty() || triple.h2.is_empty() {
                violations.push(format!(
                    "sentence {sid}, analysis {aid}: triple {triple} has an empty field"
                ));
            }
        }
        for (name, value) in &analysis.features {
            if !function_names.iter().any(|f| f == name) {
                violations.push(format!(
                    "sentence {sid}, analysis {aid}: undeclared feature name {name:?}"
                ));
            }
            if !value.is_finite() {
                violations.push(format!(
                    "sentence {sid}, analysis {aid}: feature {name:?} is not finite"
                ));
            }
        }
    }
    violations
}

fn check_span(span: &Constituent, n_tokens: usize, context: &str, violations: &mut Vec<String>) {
    if span.start >= span.end {
        violations.push(format!(
            "{context}: span ({},{}) is empty or reversed",
            span.start, span.end
        ));
    }
    if span.end > n_tokens {
        violations.push(format!(
            "{context}: span ({},{}) exceeds sentence length {n_tokens}",
            span.start, span.end
        ));
    }
}

fn check_tree(tree: &SkeletalTree, n_tokens: usize, context: &str, violations: &mut Vec<String>) {
    let mut segments = HashSet::new();
    for span in &tree.constituents {
        check_span(span, n_tokens, context, violations);
        if !segments.insert(span.segment()) {
            violations.push(format!(
                "{context}: duplicate constituent ({},{})",
                span.start, span.end
            ));
        }
    }
    let spans = &tree.constituents;
    for (i, a) in spans.iter().enumerate() {
        for b in &spans[i + 1..] {
            if !nested_or_disjoint(a, b) {
                violations.push(format!(
                    "{context}: constituents ({},{}) and ({},{}) overlap without nesting",
                    a.start, a.end, b.start, b.end
                ));
            }
        }
    }
}

fn nested_or_disjoint(a: &Constituent, b: &Constituent) -> bool {
    let disjoint = a.end <= b.start || b.end <= a.start;
    let a_in_b = b.start <= a.start && a.end <= b.end;
    let b_in_a = a.start <= b.start && b.end <= a.end;
    disjoint || a_in_b || b_in_a
}

/// Parses a bracketed constituent tree such as
/// `(P do (A I) get (A dinner) (P on (A this flight)))` into its token list
/// and the equivalent flat skeletal tree.
///
/// Every parenthesized group becomes one constituent spanning its leaves;
/// the first atom after `(` must be a category label.
pub fn parse_bracketed_tree(text: &str) -> Result<(Vec<String>, SkeletalTree), CorpusError> {
    let mut tokens = Vec::new();
    let mut constituents = Vec::new();
    // Stack of (label, start token index) for currently open groups.
    let mut stack: Vec<(Label, usize)> = Vec::new();
    let mut expecting_label = false;

    for atom in lex_brackets(text) {
        match atom.as_str() {
            "(" => expecting_label = true,
            ")" => {
                let (label, start) = stack.pop().ok_or_else(|| {
                    CorpusError::Violation("unbalanced ')' in bracketed tree".into())
                })?;
                if tokens.len() == start {
                    return Err(CorpusError::Violation(
                        "empty constituent in bracketed tree".into(),
                    ));
                }
                constituents.push(Constituent::new(start, tokens.len(), Some(label)));
            }
            word => {
                if expecting_label {
                    let label = word.parse::<Label>().map_err(CorpusError::Violation)?;
                    stack.push((label, tokens.len()));
                    expecting_label = false;
                } else {
                    tokens.push(word.to_string());
                }
            }
        }
    }
    if !stack.is_empty() {
        return Err(CorpusError::Violation(
            "unbalanced '(' in bracketed tree".into(),
        ));
    }
    if tokens.is_empty() {
        return Err(CorpusError::Violation("bracketed tree has no tokens".into()));
    }
    Ok((tokens, SkeletalTree::new(constituents)))
}

fn lex_brackets(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut word = String::new();
    for ch in text.chars() {
        match ch {
            '(' | ')' => {
                if !word.is_empty() {
                    out.push(std::mem::take(&mut word));
                }
                out.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !word.is_empty() {
                    out.push(std::mem::take(&mut word));
                }
            }
            c => word.push(c),
        }
    }
    if !word.is_empty() {
        out.push(word);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(start: usize, end: usize) -> Constituent {
        Constituent::new(start, end, None)
    }

    fn minimal_corpus_text() -> String {
        [
            r#"{"function_names":["f1","f2"],"class_map":{}}"#,
            r#"{"id":"s1","tokens":["a","b","c"],"gold":[[0,3,"P"],[1,2,"A"]],"analyses":[{"id":"a1","spans":[[0,3,"P"],[1,2,"A"]],"triples":[["x","2","y"]],"rules":["r1","r1"],"features":{"f1":1.5,"f2":-2.0}},{"id":"a2","spans":[[0,3,"P"]],"triples":[],"rules":[],"features":{"f1":0.5}}]}"#,
        ]
        .join("\n")
    }

    #[test]
    fn load_round_trips_to_equal_corpus() {
        let corpus = read_corpus(minimal_corpus_text().as_bytes()).unwrap();
        assert_eq!(corpus.sentences.len(), 1);
        assert_eq!(corpus.sentences[0].analyses.len(), 2);

        let mut buf = Vec::new();
        write_corpus(&corpus, &mut buf).unwrap();
        let reloaded = read_corpus(buf.as_slice()).unwrap();
        assert_eq!(corpus, reloaded);
    }

    #[test]
    fn load_worked_example_declares_four_functions() {
        let text = [
            r#"{"function_names":["Low1","Low2","SynRules","SemColl"]}"#,
            r#"{"id":"dinner","tokens":["do","i","get","dinner","on","this","flight"],"gold":[[0,7,"P"],[1,2,"A"],[3,4,"A"],[4,7,"P"],[5,7,"A"]],"analyses":[{"id":"qh","spans":[[0,7,"P"],[1,2,"A"],[3,4,"A"],[4,7,"P"],[5,7,"A"]],"features":{"Low1":-9.08,"Low2":-2.80,"SynRules":-13.08,"SemColl":24.32}},{"id":"ql","spans":[[0,7,"P"],[1,2,"A"],[3,7,"A"],[4,7,"P"],[5,7,"A"]],"features":{"Low1":-4.03,"Low2":0.0,"SynRules":-12.78,"SemColl":3.38}}]}"#,
        ]
        .join("\n");
        let corpus = read_corpus(text.as_bytes()).unwrap();
        assert_eq!(corpus.function_names.len(), 4);
        assert_eq!(corpus.sentences[0].tokens.len(), 7);
    }

    #[test]
    fn span_past_token_count_is_rejected_naming_sentence() {
        let text = [
            r#"{"function_names":[]}"#,
            r#"{"id":"bad","tokens":["a","b"],"gold":[[0,3,"P"]],"analyses":[{"id":"a1","spans":[],"features":{}}]}"#,
        ]
        .join("\n");
        let err = read_corpus(text.as_bytes()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bad"), "error should name the sentence: {msg}");
        assert!(msg.contains("exceeds"), "unexpected message: {msg}");
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let text = format!("{}\nnot json\n", r#"{"function_names":[]}"#);
        let err = read_corpus(text.as_bytes()).unwrap_err();
        match err {
            CorpusError::Malformed { line, .. } => assert_eq!(line, 2),
            other => panic!("expected Malformed, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_analysis_id_is_rejected() {
        let text = [
            r#"{"function_names":[]}"#,
            r#"{"id":"s1","tokens":["a"],"gold":[],"analyses":[{"id":"a1"},{"id":"a1"}]}"#,
        ]
        .join("\n");
        assert!(read_corpus(text.as_bytes()).is_err());
    }

    #[test]
    fn undeclared_feature_is_rejected() {
        let text = [
            r#"{"function_names":["f1"]}"#,
            r#"{"id":"s1","tokens":["a"],"gold":[],"analyses":[{"id":"a1","features":{"f9":1.0}}]}"#,
        ]
        .join("\n");
        assert!(read_corpus(text.as_bytes()).is_err());
    }

    #[test]
    fn class_map_rewrites_triple_heads_only() {
        let mut corpus = read_corpus(minimal_corpus_text().as_bytes()).unwrap();
        corpus.class_map =
            BTreeMap::from([("y".to_string(), "cc_Thing".to_string())]);
        let mapped = apply_class_map(&corpus);
        let triple = &mapped.sentences[0].analyses[0].triples[0];
        assert_eq!(triple, &Triple::new("x", "2", "cc_Thing"));
        // Spans, rules, features, and counts are untouched.
        assert_eq!(mapped.sentences[0].analyses[0].spans, corpus.sentences[0].analyses[0].spans);
        assert_eq!(mapped.sentences[0].analyses[0].rules, corpus.sentences[0].analyses[0].rules);
        assert_eq!(
            mapped.sentences[0].analyses[0].features,
            corpus.sentences[0].analyses[0].features
        );
        assert_eq!(mapped.sentences.len(), corpus.sentences.len());
    }

    #[test]
    fn class_map_example_from_meal_predicates() {
        let mut corpus = read_corpus(minimal_corpus_text().as_bytes()).unwrap();
        corpus.sentences[0].analyses[0].triples =
            vec![Triple::new("get_Acquire", "3", "dinner_Meal")];
        corpus.class_map =
            BTreeMap::from([("dinner_Meal".to_string(), "cc_SpecificMeal".to_string())]);
        let mapped = apply_class_map(&corpus);
        assert_eq!(
            mapped.sentences[0].analyses[0].triples[0],
            Triple::new("get_Acquire", "3", "cc_SpecificMeal")
        );
    }

    #[test]
    fn empty_class_map_is_identity_and_mapping_is_idempotent() {
        let corpus = read_corpus(minimal_corpus_text().as_bytes()).unwrap();
        assert_eq!(apply_class_map(&corpus), corpus);

        let mut with_map = corpus.clone();
        with_map.class_map = BTreeMap::from([("x".to_string(), "cc_X".to_string())]);
        let once = apply_class_map(&with_map);
        let twice = apply_class_map(&once);
        assert_eq!(once, twice);
    }

    #[test]
    fn validate_flags_non_nested_gold() {
        let mut corpus = read_corpus(minimal_corpus_text().as_bytes()).unwrap();
        corpus.sentences[0].tokens = vec!["a".into(), "b".into(), "c".into(), "d".into(), "e".into()];
        corpus.sentences[0].gold = SkeletalTree::new(vec![span(0, 3), span(2, 5)]);
        let violations = validate(&corpus);
        assert_eq!(violations.len(), 1, "{violations:?}");
        assert!(violations[0].contains("overlap"));
    }

    #[test]
    fn validate_accepts_well_formed_corpus() {
        let corpus = read_corpus(minimal_corpus_text().as_bytes()).unwrap();
        assert!(validate(&corpus).is_empty());
    }

    #[test]
    fn validate_flags_reversed_span() {
        let mut corpus = read_corpus(minimal_corpus_text().as_bytes()).unwrap();
        corpus.sentences[0].analyses[0].spans = vec![span(2, 1)];
        let violations = validate(&corpus);
        assert_eq!(violations.len(), 1, "{violations:?}");
        assert!(violations[0].contains("reversed"));
    }

    #[test]
    fn bracketed_tree_parses_tokens_and_spans() {
        let (tokens, tree) = parse_bracketed_tree(
            "(P do (A I) get (A dinner) (P on (A this flight)))",
        )
        .unwrap();
        assert_eq!(tokens, ["do", "I", "get", "dinner", "on", "this", "flight"]);
        let segments: Vec<_> = tree.constituents.iter().map(|c| c.segment()).collect();
        assert_eq!(segments, [(0, 7), (1, 2), (3, 4), (4, 7), (5, 7)]);
    }

    #[test]
    fn bracketed_tree_rejects_unbalanced_input() {
        assert!(parse_bracketed_tree("(P a (A b)").is_err());
        assert!(parse_bracketed_tree("(Q a)").is_err());
    }
}
