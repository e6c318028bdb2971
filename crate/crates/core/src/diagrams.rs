//! Coxeter matrices, Coxeter diagrams and the indexed diagram families
//! `Γ_n` built by attaching a path of new preferred vertices.
//!
//! Diagrams have a line-oriented text form:
//!
//! ```text
//! # B_2 with the right vertex preferred
//! vertices t s1
//! edge t s1 4
//! preferred s1
//! ```
//!
//! `;` separates declarations as well as newlines, `edge u v` without a
//! label means `m = 3`, and `inf` is accepted as a label.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("edge label {label} at {line}:{col} is below 3 (absent edges already mean m = 2)")]
    LabelTooSmall { line: usize, col: usize, label: u64 },
    #[error("duplicate edge {u} -- {v} at {line}:{col}")]
    DuplicateEdge { line: usize, col: usize, u: String, v: String },
    #[error("unknown vertex `{name}` at {line}:{col}")]
    UnknownVertex { line: usize, col: usize, name: String },
    #[error("duplicate vertex `{name}` at {line}:{col}")]
    DuplicateVertex { line: usize, col: usize, name: String },
    #[error("self-loop on `{name}` at {line}:{col}")]
    SelfLoop { line: usize, col: usize, name: String },
    #[error("invalid coxeter matrix: {0}")]
    Matrix(String),
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("family index must be at least -1, got {0}")]
    IndexTooSmall(i64),
    #[error("I(m) family needs m >= 3, got {0}")]
    DihedralTooSmall(u32),
    #[error("a family needs a preferred vertex")]
    MissingPreferred,
    #[error("json: {0}")]
    Json(String),
}

/// Entry of a Coxeter matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Finite(u32),
    Infinity,
}

impl Label {
    pub fn finite(self) -> Option<u32> {
        match self {
            Label::Finite(m) => Some(m),
            Label::Infinity => None,
        }
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Label::Finite(m) if m % 2 == 1)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Label::Finite(m) => s.serialize_u32(*m),
            Label::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(m) => Ok(Label::Finite(m)),
            Raw::Text(t) if t == "inf" || t == "infinity" => Ok(Label::Infinity),
            Raw::Text(t) => t
                .parse()
                .map(Label::Finite)
                .map_err(|_| serde::de::Error::custom(format!("bad label `{t}`"))),
        }
    }
}

/// Symmetric matrix `m_st` over an ordered generator list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterMatrix {
    generators: Vec<String>,
    entries: Vec<Label>,
}

impl CoxeterMatrix {
    pub fn new(generators: Vec<String>, entries: Vec<Label>) -> Result<Self, DiagramError> {
        let r = generators.len();
        if entries.len() != r * r {
            return Err(DiagramError::Matrix(format!(
                "expected {} entries, got {}",
                r * r,
                entries.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !seen.insert(g) {
                return Err(DiagramError::Matrix(format!("duplicate generator `{g}`")));
            }
        }
        for i in 0..r {
            for j in 0..r {
                let e = entries[i * r + j];
                if e != entries[j * r + i] {
                    return Err(DiagramError::Matrix(format!("not symmetric at ({i},{j})")));
                }
                match (i == j, e) {
                    (true, Label::Finite(1)) => {}
                    (true, _) => {
                        return Err(DiagramError::Matrix(format!("diagonal entry {i} is not 1")))
                    }
                    (false, Label::Finite(m)) if m < 2 => {
                        return Err(DiagramError::Matrix(format!(
                            "off-diagonal entry ({i},{j}) is {m}"
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(CoxeterMatrix { generators, entries })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn name(&self, i: usize) -> &str {
        &self.generators[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn entry(&self, i: usize, j: usize) -> Label {
        self.entries[i * self.rank() + j]
    }

    pub fn has_infinity(&self) -> bool {
        self.entries.iter().any(|e| *e == Label::Infinity)
    }

    /// Submatrix on the given generator indices, in the given order.
    pub fn restrict(&self, idx: &[usize]) -> CoxeterMatrix {
        let generators = idx.iter().map(|&i| self.generators[i].clone()).collect();
        let mut entries = Vec::with_capacity(idx.len() * idx.len());
        for &i in idx {
            for &j in idx {
                entries.push(self.entry(i, j));
            }
        }
        CoxeterMatrix { generators, entries }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: String,
    pub v: String,
    #[serde(default = "default_label")]
    pub label: Label,
}

fn default_label() -> Label {
    Label::Finite(3)
}

/// Coxeter diagram: an edge `{u, v}` exists iff `m_uv >= 3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preferred: Option<String>,
}

impl Diagram {
    pub fn empty() -> Self {
        Diagram { vertices: Vec::new(), edges: Vec::new(), preferred: None }
    }

    pub fn from_matrix(m: &CoxeterMatrix) -> Self {
        let mut edges = Vec::new();
        for i in 0..m.rank() {
            for j in i + 1..m.rank() {
                let e = m.entry(i, j);
                if e != Label::Finite(2) {
                    edges.push(Edge { u: m.name(i).to_string(), v: m.name(j).to_string(), label: e });
                }
            }
        }
        Diagram { vertices: m.generators().to_vec(), edges, preferred: None }
    }

    pub fn validate(&self) -> Result<(), DiagramError> {
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v.as_str()) {
                return Err(DiagramError::Invalid(format!("duplicate vertex `{v}`")));
            }
        }
        let mut pairs = BTreeSet::new();
        for e in &self.edges {
            for end in [&e.u, &e.v] {
                if !seen.contains(end.as_str()) {
                    return Err(DiagramError::Invalid(format!("unknown vertex `{end}`")));
                }
            }
            if e.u == e.v {
                return Err(DiagramError::Invalid(format!("self-loop on `{}`", e.u)));
            }
            if let Label::Finite(m) = e.label {
                if m < 3 {
                    return Err(DiagramError::Invalid(format!("edge label {m} below 3")));
                }
            }
            let key = if e.u < e.v { (&e.u, &e.v) } else { (&e.v, &e.u) };
            if !pairs.insert(key) {
                return Err(DiagramError::Invalid(format!("duplicate edge {} -- {}", e.u, e.v)));
            }
        }
        if let Some(p) = &self.preferred {
            if !seen.contains(p.as_str()) {
                return Err(DiagramError::Invalid(format!("preferred vertex `{p}` is not a vertex")));
            }
        }
        Ok(())
    }

    pub fn matrix(&self) -> CoxeterMatrix {
        let r = self.vertices.len();
        let pos: HashMap<&str, usize> =
            self.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut entries = vec![Label::Finite(2); r * r];
        for i in 0..r {
            entries[i * r + i] = Label::Finite(1);
        }
        for e in &self.edges {
            let (i, j) = (pos[e.u.as_str()], pos[e.v.as_str()]);
            entries[i * r + j] = e.label;
            entries[j * r + i] = e.label;
        }
        CoxeterMatrix { generators: self.vertices.clone(), entries }
    }

    pub fn neighbours(&self, v: &str) -> Vec<String> {
        self.edges
            .iter()
            .filter_map(|e| {
                if e.u == v {
                    Some(e.v.clone())
                } else if e.v == v {
                    Some(e.u.clone())
                } else {
                    None
                }
            })
            .collect()
    }

    /// Induced subdiagram on the vertices not in `drop`.
    pub fn without(&self, drop: &[String]) -> Diagram {
        let keep = |v: &String| !drop.contains(v);
        Diagram {
            vertices: self.vertices.iter().filter(|v| keep(v)).cloned().collect(),
            edges: self.edges.iter().filter(|e| keep(&e.u) && keep(&e.v)).cloned().collect(),
            preferred: self.preferred.clone().filter(|p| keep(p)),
        }
    }

    /// Text form accepted by [`parse_diagram`]. Label 3 is written as a bare edge.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.vertices.is_empty() {
            out.push_str("vertices ");
            out.push_str(&self.vertices.join(" "));
            out.push('\n');
        }
        for e in &self.edges {
            match e.label {
                Label::Finite(3) => out.push_str(&format!("edge {} {}\n", e.u, e.v)),
                l => out.push_str(&format!("edge {} {} {}\n", e.u, e.v, l)),
            }
        }
        if let Some(p) = &self.preferred {
            out.push_str(&format!("preferred {p}\n"));
        }
        out
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    s != "inf" && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// Parses the line-oriented diagram grammar.
pub fn parse_diagram(text: &str) -> Result<Diagram, DiagramError> {
    let mut d = Diagram::empty();
    let mut names: HashMap<String, ()> = HashMap::new();
    let mut pairs = BTreeSet::new();
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw_line.split('#').next().unwrap_or("");
        let mut offset = 0;
        for stmt in content.split(';') {
            let stmt_offset = offset;
            offset += stmt.len() + 1;
            // tokens with 1-based columns
            let mut tokens: Vec<(usize, &str)> = Vec::new();
            let mut start = None;
            for (i, c) in stmt.char_indices() {
                if c.is_whitespace() {
                    if let Some(s) = start.take() {
                        tokens.push((stmt_offset + s + 1, &stmt[s..i]));
                    }
                } else if start.is_none() {
                    start = Some(i);
                }
            }
            if let Some(s) = start {
                tokens.push((stmt_offset + s + 1, &stmt[s..]));
            }
            let Some(&(kw_col, kw)) = tokens.first() else { continue };
            let args = &tokens[1..];
            let check_name = |col: usize, name: &str| -> Result<(), DiagramError> {
                if valid_name(name) {
                    Ok(())
                } else {
                    Err(DiagramError::Syntax { line, col, msg: format!("invalid name `{name}`") })
                }
            };
            match kw {
                "vertices" => {
                    if args.is_empty() {
                        return Err(DiagramError::Syntax {
                            line,
                            col: kw_col,
                            msg: "`vertices` needs at least one name".into(),
                        });
                    }
                    for &(col, name) in args {
                        check_name(col, name)?;
                        if names.insert(name.to_string(), ()).is_some() {
                            return Err(DiagramError::DuplicateVertex {
                                line,
                                col,
                                name: name.to_string(),
                            });
                        }
                        d.vertices.push(name.to_string());
                    }
                }
                "edge" => {
                    if args.len() < 2 || args.len() > 3 {
                        return Err(DiagramError::Syntax {
                            line,
                            col: kw_col,
                            msg: "expected `edge <u> <v> [<label>]`".into(),
                        });
                    }
                    for &(col, name) in &args[..2] {
                        check_name(col, name)?;
                        if !names.contains_key(name) {
                            return Err(DiagramError::UnknownVertex {
                                line,
                                col,
                                name: name.to_string(),
                            });
                        }
                    }
                    let (u, v) = (args[0].1, args[1].1);
                    if u == v {
                        return Err(DiagramError::SelfLoop { line, col: args[1].0, name: u.into() });
                    }
                    let label = match args.get(2) {
                        None => Label::Finite(3),
                        Some(&(_, "inf")) => Label::Infinity,
                        Some(&(col, tok)) => {
                            let m: u64 = tok.parse().map_err(|_| DiagramError::Syntax {
                                line,
                                col,
                                msg: format!("bad label `{tok}`"),
                            })?;
                            if m < 3 {
                                return Err(DiagramError::LabelTooSmall { line, col, label: m });
                            }
                            let m = u32::try_from(m).map_err(|_| DiagramError::Syntax {
                                line,
                                col,
                                msg: format!("label `{tok}` too large"),
                            })?;
                            Label::Finite(m)
                        }
                    };
                    let key = if u < v { (u.to_string(), v.to_string()) } else { (v.to_string(), u.to_string()) };
                    if !pairs.insert(key) {
                        return Err(DiagramError::DuplicateEdge {
                            line,
                            col: kw_col,
                            u: u.into(),
                            v: v.into(),
                        });
                    }
                    d.edges.push(Edge { u: u.into(), v: v.into(), label });
                }
                "preferred" => {
                    if args.len() != 1 {
                        return Err(DiagramError::Syntax {
                            line,
                            col: kw_col,
                            msg: "expected `preferred <name>`".into(),
                        });
                    }
                    let (col, name) = args[0];
                    if !names.contains_key(name) {
                        return Err(DiagramError::UnknownVertex { line, col, name: name.into() });
                    }
                    d.preferred = Some(name.to_string());
                }
                other => {
                    return Err(DiagramError::Syntax {
                        line,
                        col: kw_col,
                        msg: format!("unknown declaration `{other}`"),
                    })
                }
            }
        }
    }
    Ok(d)
}

/// Parses the JSON encoding `{"vertices": [...], "edges": [{"u","v","label"}], "preferred": ...}`.
pub fn parse_diagram_json(text: &str) -> Result<Diagram, DiagramError> {
    let d: Diagram = serde_json::from_str(text).map_err(|e| DiagramError::Json(e.to_string()))?;
    d.validate()?;
    Ok(d)
}

/// Accepts either encoding; JSON is detected by a leading `{`.
pub fn parse_any(text: &str) -> Result<Diagram, DiagramError> {
    if text.trim_start().starts_with('{') {
        parse_diagram_json(text)
    } else {
        parse_diagram(text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Builtin {
    A,
    B,
    D,
    I(u32),
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::A => write!(f, "A"),
            Builtin::B => write!(f, "B"),
            Builtin::D => write!(f, "D"),
            Builtin::I(m) => write!(f, "I:{m}"),
        }
    }
}

/// `Γ_1` together with its preferred vertex; generates the whole sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub gamma1: Diagram,
    pub preferred: String,
    pub builtin: Option<Builtin>,
}

impl FamilySpec {
    pub fn from_diagram(d: Diagram) -> Result<Self, DiagramError> {
        d.validate()?;
        let preferred = d.preferred.clone().ok_or(DiagramError::MissingPreferred)?;
        Ok(FamilySpec { gamma1: d, preferred, builtin: None })
    }

    pub fn name(&self) -> String {
        match self.builtin {
            Some(b) => b.to_string(),
            None => "custom".to_string(),
        }
    }

    /// Name given to the preferred vertex `s_i` of `Γ_i`, `i >= 1`.
    pub fn preferred_name(&self, i: usize) -> String {
        if i <= 1 {
            return self.preferred.clone();
        }
        let mut name = format!("s{i}");
        while self.gamma1.vertices.contains(&name) && name != self.preferred {
            name.push('\'');
        }
        name
    }
}

pub fn builtin_family(tag: Builtin) -> Result<FamilySpec, DiagramError> {
    let v = |names: &[&str]| names.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let e = |u: &str, w: &str, label: Label| Edge { u: u.into(), v: w.into(), label };
    let gamma1 = match tag {
        Builtin::A => Diagram { vertices: v(&["s1"]), edges: vec![], preferred: None },
        Builtin::B => Diagram {
            vertices: v(&["t", "s1"]),
            edges: vec![e("t", "s1", Label::Finite(4))],
            preferred: None,
        },
        Builtin::D => Diagram {
            vertices: v(&["t", "u", "s1"]),
            edges: vec![e("t", "s1", Label::Finite(3)), e("u", "s1", Label::Finite(3))],
            preferred: None,
        },
        Builtin::I(m) => {
            if m < 3 {
                return Err(DiagramError::DihedralTooSmall(m));
            }
            Diagram {
                vertices: v(&["t", "s1"]),
                edges: vec![e("t", "s1", Label::Finite(m))],
                preferred: None,
            }
        }
    };
    let gamma1 = Diagram { preferred: Some("s1".into()), ..gamma1 };
    Ok(FamilySpec { gamma1, preferred: "s1".into(), builtin: Some(tag) })
}

/// `Γ_n` for `n >= -1`.
pub fn family_term(spec: &FamilySpec, n: i64) -> Result<Diagram, DiagramError> {
    match n {
        i64::MIN..=-2 => Err(DiagramError::IndexTooSmall(n)),
        -1 => {
            let mut drop = spec.gamma1.neighbours(&spec.preferred);
            drop.push(spec.preferred.clone());
            Ok(spec.gamma1.without(&drop))
        }
        0 => Ok(spec.gamma1.without(std::slice::from_ref(&spec.preferred))),
        _ => {
            let mut d = spec.gamma1.clone();
            let mut prev = spec.preferred.clone();
            for i in 2..=n as usize {
                let name = spec.preferred_name(i);
                d.vertices.push(name.clone());
                d.edges.push(Edge { u: prev, v: name.clone(), label: Label::Finite(3) });
                prev = name;
            }
            d.preferred = Some(prev);
            Ok(d)
        }
    }
}

/// Parses `A`, `B`, `D` or `I:<m>`.
pub fn parse_builtin(tag: &str) -> Option<Builtin> {
    match tag {
        "A" | "a" => Some(Builtin::A),
        "B" | "b" => Some(Builtin::B),
        "D" | "d" => Some(Builtin::D),
        _ => {
            let m = tag.strip_prefix("I:").or_else(|| tag.strip_prefix("i:"))?;
            m.parse().ok().map(Builtin::I)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labeled_edges(d: &Diagram) -> BTreeSet<(String, String, Label)> {
        d.edges
            .iter()
            .map(|e| {
                let (a, b) = if e.u < e.v { (&e.u, &e.v) } else { (&e.v, &e.u) };
                (a.clone(), b.clone(), e.label)
            })
            .collect()
    }

    #[test]
    fn parses_labeled_edge() {
        let d = parse_diagram("vertices a b; edge a b 4").unwrap();
        assert_eq!(d.vertices, vec!["a", "b"]);
        assert_eq!(d.edges.len(), 1);
        assert_eq!(d.edges[0].label, Label::Finite(4));
    }

    #[test]
    fn parses_single_vertex() {
        let d = parse_diagram("vertices a").unwrap();
        assert_eq!(d.vertices.len(), 1);
        assert!(d.edges.is_empty());
    }

    #[test]
    fn rejects_label_two() {
        let err = parse_diagram("vertices a b; edge a b 2").unwrap_err();
        assert!(matches!(err, DiagramError::LabelTooSmall { label: 2, line: 1, .. }));
    }

    #[test]
    fn reports_positions() {
        let err = parse_diagram("vertices a b\n# note\nedge a c").unwrap_err();
        assert_eq!(
            err,
            DiagramError::UnknownVertex { line: 3, col: 8, name: "c".into() }
        );
        let err = parse_diagram("vertices a b\nedge a b\nedge b a 5").unwrap_err();
        assert!(matches!(err, DiagramError::DuplicateEdge { line: 3, .. }));
        let err = parse_diagram("vertex a").unwrap_err();
        assert!(matches!(err, DiagramError::Syntax { line: 1, col: 1, .. }));
        let err = parse_diagram("vertices a b; edge a b x").unwrap_err();
        assert!(matches!(err, DiagramError::Syntax { line: 1, col: 24, .. }));
    }

    #[test]
    fn infinity_and_comments() {
        let d = parse_diagram("vertices a b c # three\nedge a b inf; edge b c\npreferred c").unwrap();
        assert_eq!(d.edges[0].label, Label::Infinity);
        assert_eq!(d.edges[1].label, Label::Finite(3));
        assert_eq!(d.preferred.as_deref(), Some("c"));
        assert!(d.matrix().has_infinity());
    }

    #[test]
    fn json_encoding() {
        let d = parse_any(r#"{"vertices":["a","b"],"edges":[{"u":"a","v":"b","label":"inf"}]}"#)
            .unwrap();
        assert_eq!(d.edges[0].label, Label::Infinity);
        let back = serde_json::to_string(&d).unwrap();
        assert_eq!(parse_any(&back).unwrap(), d);
        assert!(parse_any(r#"{"vertices":["a"],"edges":[{"u":"a","v":"z"}]}"#).is_err());
    }

    #[test]
    fn matrix_validation() {
        let g = vec!["a".to_string(), "b".to_string()];
        let ok = vec![Label::Finite(1), Label::Finite(3), Label::Finite(3), Label::Finite(1)];
        assert!(CoxeterMatrix::new(g.clone(), ok).is_ok());
        let asym = vec![Label::Finite(1), Label::Finite(3), Label::Finite(4), Label::Finite(1)];
        assert!(CoxeterMatrix::new(g.clone(), asym).is_err());
        let diag = vec![Label::Finite(2), Label::Finite(3), Label::Finite(3), Label::Finite(1)];
        assert!(CoxeterMatrix::new(g, diag).is_err());
    }

    #[test]
    fn builtin_gamma1_shapes() {
        let a = builtin_family(Builtin::A).unwrap();
        assert_eq!(a.gamma1.vertices, vec!["s1"]);
        let b = builtin_family(Builtin::B).unwrap();
        assert_eq!(b.gamma1.edges.len(), 1);
        assert_eq!(b.gamma1.edges[0].label, Label::Finite(4));
        assert_eq!(b.preferred, "s1");
        assert_eq!(b.gamma1.vertices.last().unwrap(), "s1");
        let i7 = family_term(&builtin_family(Builtin::I(7)).unwrap(), 1).unwrap();
        assert_eq!(i7.vertices.len(), 2);
        assert_eq!(i7.edges[0].label, Label::Finite(7));
        assert!(matches!(builtin_family(Builtin::I(2)), Err(DiagramError::DihedralTooSmall(2))));
    }

    #[test]
    fn a_family_terms() {
        let a = builtin_family(Builtin::A).unwrap();
        let g3 = family_term(&a, 3).unwrap();
        assert_eq!(g3.vertices, vec!["s1", "s2", "s3"]);
        assert_eq!(g3.edges.len(), 2);
        assert!(g3.edges.iter().all(|e| e.label == Label::Finite(3)));
        assert_eq!(g3.preferred.as_deref(), Some("s3"));
        assert!(family_term(&a, 0).unwrap().vertices.is_empty());
        assert!(family_term(&a, -1).unwrap().vertices.is_empty());
        assert!(matches!(family_term(&a, -2), Err(DiagramError::IndexTooSmall(-2))));
    }

    #[test]
    fn extension_to_the_left() {
        let d = builtin_family(Builtin::D).unwrap();
        let g0 = family_term(&d, 0).unwrap();
        assert_eq!(g0.vertices.len(), 2);
        assert!(g0.edges.is_empty());
        assert!(family_term(&d, -1).unwrap().vertices.is_empty());
        let b = builtin_family(Builtin::B).unwrap();
        assert_eq!(family_term(&b, 0).unwrap().vertices, vec!["t"]);
        assert!(family_term(&b, -1).unwrap().vertices.is_empty());
    }

    #[test]
    fn vertex_counts_follow_subscripts() {
        for n in 1..6 {
            let count = |b| family_term(&builtin_family(b).unwrap(), n).unwrap().vertices.len();
            assert_eq!(count(Builtin::A), n as usize);
            assert_eq!(count(Builtin::B), n as usize + 1);
            assert_eq!(count(Builtin::D), n as usize + 2);
        }
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let spec =
            FamilySpec::from_diagram(parse_diagram("vertices s2 x; edge s2 x 5; preferred x").unwrap())
                .unwrap();
        let g3 = family_term(&spec, 3).unwrap();
        assert_eq!(g3.vertices, vec!["s2", "x", "s2'", "s3"]);
        g3.validate().unwrap();
    }

    #[test]
    fn deleting_preferred_gives_predecessor() {
        let custom = FamilySpec::from_diagram(
            parse_diagram("vertices a b c\nedge a b 5\nedge b c\nedge a c inf\npreferred c").unwrap(),
        )
        .unwrap();
        let specs = [
            builtin_family(Builtin::A).unwrap(),
            builtin_family(Builtin::B).unwrap(),
            builtin_family(Builtin::D).unwrap(),
            builtin_family(Builtin::I(8)).unwrap(),
            custom,
        ];
        for spec in &specs {
            for n in 1..6 {
                let cur = family_term(spec, n).unwrap();
                let prev = family_term(spec, n - 1).unwrap();
                let cut = cur.without(std::slice::from_ref(cur.preferred.as_ref().unwrap()));
                assert_eq!(cut.vertices, prev.vertices);
                assert_eq!(labeled_edges(&cut), labeled_edges(&prev));
                assert_eq!(cur.vertices.len(), spec.gamma1.vertices.len() + n as usize - 1);
            }
        }
    }

    #[test]
    fn builtin_tags() {
        assert_eq!(parse_builtin("I:7"), Some(Builtin::I(7)));
        assert_eq!(parse_builtin("B"), Some(Builtin::B));
        assert_eq!(parse_builtin("E"), None);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_diagram() -> impl Strategy<Value = Diagram> {
            (1usize..6)
                .prop_flat_map(|r| {
                    let pairs = r * (r - 1) / 2;
                    (Just(r), proptest::collection::vec(0u32..6, pairs))
                })
                .prop_map(|(r, labels)| {
                    let vertices: Vec<String> = (0..r).map(|i| format!("v{i}")).collect();
                    let mut edges = Vec::new();
                    let mut k = 0;
                    for i in 0..r {
                        for j in i + 1..r {
                            let l = labels[k];
                            k += 1;
                            let label = match l {
                                0 | 1 => continue,
                                5 => Label::Infinity,
                                m => Label::Finite(m + 1),
                            };
                            edges.push(Edge { u: vertices[i].clone(), v: vertices[j].clone(), label });
                        }
                    }
                    Diagram { vertices, edges, preferred: None }
                })
        }

        proptest! {
            #[test]
            fn text_round_trip_preserves_matrix(d in arb_diagram()) {
                let back = parse_diagram(&d.to_text()).unwrap();
                prop_assert_eq!(back.matrix(), d.matrix());
                prop_assert_eq!(Diagram::from_matrix(&d.matrix()).matrix(), d.matrix());
            }
        }
    }
}
