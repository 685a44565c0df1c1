//! Learned-forest and score-table artifacts: JSON, CSV and Graphviz DOT.

use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use dendroid_core::{EdgeDecision, Forest, Rejection, ScoredEdge, VariableSchema};

/// A float that serializes as a JSON number when finite and as the string
/// `"inf"`, `"-inf"` or `"nan"` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let x = self.0;
        if x.is_finite() {
            s.serialize_f64(x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

/// Scoring settings echoed into artifacts.
#[derive(Debug, Clone, Serialize)]
pub struct ScoringInfo {
    /// Criterion name as given on the command line.
    pub criterion: String,
    /// Penalty scale.
    pub d_n: Real,
    /// Number of rows.
    pub n: usize,
    /// Base quadrature order.
    pub quad_order: usize,
}

#[derive(Serialize)]
struct PairRow<'a> {
    i: usize,
    j: usize,
    name_i: &'a str,
    name_j: &'a str,
    mi: Real,
    penalty: Real,
    score: Real,
    #[serde(skip_serializing_if = "Option::is_none")]
    accepted: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'static str>,
}

fn pair_row<'a>(schema: &'a VariableSchema, e: &ScoredEdge) -> PairRow<'a> {
    PairRow {
        i: e.i,
        j: e.j,
        name_i: schema.name(e.i),
        name_j: schema.name(e.j),
        mi: Real(e.mi),
        penalty: Real(e.penalty),
        score: Real(e.score),
        accepted: None,
        reason: None,
    }
}

/// Short name of a rejection reason.
pub fn reason(r: Rejection) -> &'static str {
    match r {
        Rejection::Loop => "loop",
        Rejection::Negative => "negative",
    }
}

#[derive(Serialize)]
struct ForestDoc<'a> {
    format: &'static str,
    version: u32,
    algorithm: &'static str,
    #[serde(flatten)]
    info: &'a ScoringInfo,
    variables: &'a [String],
    edges: Vec<PairRow<'a>>,
    candidates: Vec<PairRow<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    description_length: Option<Real>,
}

/// JSON for a learned forest: the selected edges, every candidate with its
/// fate (in visit order) and, when available, the description length.
pub fn forest_json(
    schema: &VariableSchema,
    info: &ScoringInfo,
    algorithm: &'static str,
    forest: &Forest,
    decisions: &[EdgeDecision],
    description_length: Option<f64>,
) -> String {
    let edges = forest
        .edges()
        .iter()
        .map(|&p| {
            let d = decisions
                .iter()
                .find(|d| d.edge.pair() == p)
                .expect("every forest edge was a candidate");
            pair_row(schema, &d.edge)
        })
        .collect();
    let candidates = decisions
        .iter()
        .map(|d| PairRow {
            accepted: Some(d.accepted()),
            reason: d.rejection.map(reason),
            ..pair_row(schema, &d.edge)
        })
        .collect();
    let doc = ForestDoc {
        format: "dendroid-forest",
        version: 1,
        algorithm,
        info,
        variables: schema.names(),
        edges,
        candidates,
        description_length: description_length.map(Real),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("forest documents serialize");
    s.push('\n');
    s
}

/// Graphviz rendering of a forest. Every variable is listed; edges carry
/// `I_n` and `J_n` rounded to four decimals.
pub fn forest_dot(schema: &VariableSchema, forest: &Forest, scored: &[ScoredEdge]) -> String {
    let quote = |s: &str| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
    let mut out = String::from("graph dendroid {\n");
    for name in schema.names() {
        let _ = writeln!(out, "  {};", quote(name));
    }
    for &(i, j) in forest.edges() {
        let e = scored.iter().find(|e| e.pair() == (i, j));
        let label = e.map_or(String::new(), |e| {
            format!(" [label=\"I={:.4}\\nJ={:.4}\"]", e.mi, e.score)
        });
        let _ = writeln!(out, "  {} -- {}{label};", quote(schema.name(i)), quote(schema.name(j)));
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct ScoreDoc<'a> {
    format: &'static str,
    version: u32,
    #[serde(flatten)]
    info: &'a ScoringInfo,
    pairs: Vec<PairRow<'a>>,
}

/// JSON score table in canonical pair order.
pub fn scores_json(schema: &VariableSchema, info: &ScoringInfo, scored: &[ScoredEdge]) -> String {
    let doc = ScoreDoc {
        format: "dendroid-scores",
        version: 1,
        info,
        pairs: scored.iter().map(|e| pair_row(schema, e)).collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("score documents serialize");
    s.push('\n');
    s
}

/// CSV score table: `i,j,name_i,name_j,mi,penalty,score`.
pub fn scores_csv(schema: &VariableSchema, scored: &[ScoredEdge]) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["i", "j", "name_i", "name_j", "mi", "penalty", "score"])
        .expect("writing to memory");
    for e in scored {
        wtr.write_record([
            e.i.to_string(),
            e.j.to_string(),
            schema.name(e.i).to_string(),
            schema.name(e.j).to_string(),
            format!("{:?}", e.mi),
            format!("{:?}", e.penalty),
            format!("{:?}", e.score),
        ])
        .expect("writing to memory");
    }
    String::from_utf8(wtr.into_inner().expect("writing to memory")).expect("CSV is UTF-8")
}

/// Human-readable per-edge report of a Kruskal run, one line per candidate in
/// visit order.
pub fn decision_report(schema: &VariableSchema, decisions: &[EdgeDecision]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:>14} {:>12} {:>14}  decision",
        "pair", "I_n", "penalty", "J_n"
    );
    for d in decisions {
        let e = &d.edge;
        let pair = format!("{}({}) - {}({})", schema.name(e.i), e.i, schema.name(e.j), e.j);
        let status = match d.rejection {
            None => "accepted".to_string(),
            Some(r) => format!("rejected ({})", reason(r)),
        };
        let _ = writeln!(
            out,
            "{pair:<24} {:>14.6} {:>12.6} {:>14.6}  {status}",
            e.mi, e.penalty, e.score
        );
    }
    out
}
