//! The input document: a JSON file of named objects given by sparse
//! structure constants.
//!
//! ```json
//! {
//!   "field": {"kind": "fp", "p": 2},
//!   "max_degree": 4,
//!   "objects": {
//!     "S2": {"type": "coalgebra", "dims": [1, 0, 1],
//!            "maps": {"comul": [[0, 0, 0, 1], [2, 0, 0, 1], [2, 0, 1, 1]],
//!                     "counit": [[0, 0, 0, 1]], "unit": [[0, 0, 0, 1]]}}
//!   },
//!   "morphisms": {},
//!   "extensions": {}
//! }
//! ```
//!
//! An entry of a map of degree `s` is `[src_degree, src_index, tgt_index, num]`
//! over F_p and `[src_degree, src_index, tgt_index, num, den]` over Q, with
//! `den > 0` and the fraction in lowest terms. Indices into tensor products
//! refer to the lexicographic flat basis in that degree.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldDoc {
    Fp { p: u64 },
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectKind {
    Complex,
    Algebra,
    Coalgebra,
    Bimonoid,
    Comodule,
    ComoduleAlgebra,
    Module,
}

impl ObjectKind {
    /// Map keys allowed for this kind, with whether each is required.
    pub fn map_keys(self) -> &'static [(&'static str, bool)] {
        match self {
            ObjectKind::Complex => &[("d", false)],
            ObjectKind::Algebra => &[("d", false), ("mul", true), ("unit", true)],
            ObjectKind::Coalgebra => &[("d", false), ("comul", true), ("counit", true), ("unit", false)],
            ObjectKind::Bimonoid => &[
                ("d", false),
                ("mul", true),
                ("unit", true),
                ("comul", true),
                ("counit", true),
            ],
            ObjectKind::Comodule => &[("d", false), ("coaction", true)],
            ObjectKind::ComoduleAlgebra => &[("d", false), ("mul", true), ("unit", true), ("coaction", true)],
            ObjectKind::Module => &[("d", false), ("mul", true)],
        }
    }

    /// Kinds an `over` reference may name.
    pub fn over_kinds(self) -> &'static [ObjectKind] {
        match self {
            ObjectKind::Comodule => &[ObjectKind::Coalgebra, ObjectKind::Bimonoid],
            ObjectKind::ComoduleAlgebra => &[ObjectKind::Bimonoid],
            ObjectKind::Module => &[ObjectKind::Algebra, ObjectKind::Bimonoid, ObjectKind::ComoduleAlgebra],
            _ => &[],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ObjectKind::Complex => "complex",
            ObjectKind::Algebra => "algebra",
            ObjectKind::Coalgebra => "coalgebra",
            ObjectKind::Bimonoid => "bimonoid",
            ObjectKind::Comodule => "comodule",
            ObjectKind::ComoduleAlgebra => "comodule_algebra",
            ObjectKind::Module => "module",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideDoc {
    Left,
    Right,
}

/// One structure constant: the coefficient of target basis vector
/// `tgt_index` in the image of source basis vector `(src_degree, src_index)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Entry {
    pub src_degree: usize,
    pub src_index: usize,
    pub tgt_index: usize,
    pub num: BigInt,
    /// `None` over F_p.
    pub den: Option<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectDoc {
    pub kind: ObjectKind,
    pub dims: Vec<usize>,
    pub over: Option<String>,
    pub side: Option<SideDoc>,
    pub maps: BTreeMap<String, Vec<Entry>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismDoc {
    pub source: String,
    pub target: String,
    pub shift: i64,
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionDoc {
    pub phi: String,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "H")]
    pub h: String,
    #[serde(rename = "B")]
    pub b: String,
}

/// A parsed and normalized document. Entries are sorted and, over F_p,
/// reduced into `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub field: FieldDoc,
    pub max_degree: usize,
    pub objects: BTreeMap<String, ObjectDoc>,
    pub morphisms: BTreeMap<String, MorphismDoc>,
    pub extensions: BTreeMap<String, ExtensionDoc>,
}

/// An input error with its location in the document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    field: FieldDoc,
    max_degree: usize,
    #[serde(default)]
    objects: BTreeMap<String, RawObject>,
    #[serde(default)]
    morphisms: BTreeMap<String, RawMorphism>,
    #[serde(default)]
    extensions: BTreeMap<String, ExtensionDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObject {
    #[serde(rename = "type")]
    kind: ObjectKind,
    dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    over: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    side: Option<SideDoc>,
    #[serde(default)]
    maps: BTreeMap<String, Vec<Value>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMorphism {
    source: String,
    target: String,
    #[serde(default)]
    shift: i64,
    entries: Vec<Value>,
}

fn integer(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from)),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

fn index(v: &Value) -> Option<usize> {
    v.as_u64().and_then(|n| usize::try_from(n).ok())
}

fn parse_entry(v: &Value, field: &FieldDoc, loc: &str) -> Result<Entry, Diagnostic> {
    let arr = v
        .as_array()
        .ok_or_else(|| Diagnostic::new(loc, "entry must be an array"))?;
    let want = match field {
        FieldDoc::Fp { .. } => 4,
        FieldDoc::Q => 5,
    };
    if arr.len() != want {
        let form = match field {
            FieldDoc::Fp { .. } => "[src_degree, src_index, tgt_index, num]",
            FieldDoc::Q => "[src_degree, src_index, tgt_index, num, den]",
        };
        return Err(Diagnostic::new(loc, format!("entry must have the form {form}")));
    }
    let idx = |i: usize, what: &str| {
        index(&arr[i]).ok_or_else(|| Diagnostic::new(loc, format!("{what} must be a non-negative integer")))
    };
    let (src_degree, src_index, tgt_index) = (idx(0, "src_degree")?, idx(1, "src_index")?, idx(2, "tgt_index")?);
    let num = integer(&arr[3]).ok_or_else(|| Diagnostic::new(loc, "numerator must be an integer"))?;
    let den = match field {
        FieldDoc::Fp { p } => {
            let p = BigInt::from(*p);
            return Ok(Entry {
                src_degree,
                src_index,
                tgt_index,
                num: num.mod_floor(&p),
                den: None,
            });
        }
        FieldDoc::Q => integer(&arr[4]).ok_or_else(|| Diagnostic::new(loc, "denominator must be an integer"))?,
    };
    if !den.is_positive() {
        return Err(Diagnostic::new(loc, "denominator must be positive"));
    }
    if !num.gcd(&den).is_one() && !num.is_zero() {
        return Err(Diagnostic::new(loc, "fraction is not in lowest terms"));
    }
    if num.is_zero() && !den.is_one() {
        return Err(Diagnostic::new(loc, "zero must be written 0/1"));
    }
    Ok(Entry {
        src_degree,
        src_index,
        tgt_index,
        num,
        den: Some(den),
    })
}

fn parse_entries(vs: &[Value], field: &FieldDoc, loc: &str) -> Result<Vec<Entry>, Diagnostic> {
    let mut out: Vec<Entry> = Vec::with_capacity(vs.len());
    for (i, v) in vs.iter().enumerate() {
        out.push(parse_entry(v, field, &format!("{loc}[{i}]"))?);
    }
    out.sort();
    for w in out.windows(2) {
        if (w[0].src_degree, w[0].src_index, w[0].tgt_index) == (w[1].src_degree, w[1].src_index, w[1].tgt_index) {
            return Err(Diagnostic::new(
                loc,
                format!(
                    "duplicate entry for source ({}, {}) and target index {}",
                    w[0].src_degree, w[0].src_index, w[0].tgt_index
                ),
            ));
        }
    }
    Ok(out)
}

fn entry_value(e: &Entry) -> Value {
    let int = |n: &BigInt| match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(n.to_string()),
    };
    let mut v = vec![
        Value::from(e.src_degree),
        Value::from(e.src_index),
        Value::from(e.tgt_index),
        int(&e.num),
    ];
    if let Some(d) = &e.den {
        v.push(int(d));
    }
    Value::Array(v)
}

/// Pretty-print with arrays of scalars kept on one line, so that each
/// structure constant occupies one line.
fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(xs) if xs.iter().all(|x| !x.is_array() && !x.is_object()) => {
            out.push_str(&serde_json::to_string(v).expect("scalars serialize").replace(',', ", "));
        }
        Value::Array(xs) if xs.is_empty() => out.push_str("[]"),
        Value::Array(xs) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        _ => out.push_str(&serde_json::to_string(v).expect("scalars serialize")),
    }
}

fn is_prime(p: u64) -> bool {
    hgx_core::linalg::is_prime(p)
}

/// Parse a document, checking syntax, field, keys and references. Shapes of
/// structure constants are checked when the document is built.
pub fn parse(text: &str) -> Result<Document, Vec<Diagnostic>> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| {
        vec![Diagnostic::new(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )]
    })?;
    let mut diags = Vec::new();
    if let FieldDoc::Fp { p } = raw.field {
        if !is_prime(p) {
            diags.push(Diagnostic::new("field.p", format!("p not prime: {p}")));
            return Err(diags);
        }
        if p >= 1 << 32 {
            diags.push(Diagnostic::new("field.p", format!("p = {p} is too large (must be below 2^32)")));
            return Err(diags);
        }
    }
    let n = raw.max_degree;
    let mut objects = BTreeMap::new();
    for (name, o) in &raw.objects {
        let loc = format!("objects.{name}");
        if o.dims.len() > n + 1 {
            diags.push(Diagnostic::new(
                format!("{loc}.dims"),
                format!("{} degrees given but max_degree is {n}", o.dims.len()),
            ));
        }
        let allowed = o.kind.map_keys();
        for key in o.maps.keys() {
            if !allowed.iter().any(|(k, _)| k == key) {
                diags.push(Diagnostic::new(
                    format!("{loc}.maps.{key}"),
                    format!("unknown map for a {}", o.kind.name()),
                ));
            }
        }
        for (key, required) in allowed {
            if *required && !o.maps.contains_key(*key) {
                diags.push(Diagnostic::new(format!("{loc}.maps"), format!("missing required map `{key}`")));
            }
        }
        let over_kinds = o.kind.over_kinds();
        match (&o.over, over_kinds.is_empty()) {
            (Some(_), true) => diags.push(Diagnostic::new(
                format!("{loc}.over"),
                format!("a {} is not over anything", o.kind.name()),
            )),
            (None, false) => diags.push(Diagnostic::new(format!("{loc}.over"), "missing `over` reference")),
            (Some(r), false) => match raw.objects.get(r) {
                None => diags.push(Diagnostic::new(format!("{loc}.over"), format!("dangling reference `{r}`"))),
                Some(t) if !over_kinds.contains(&t.kind) => diags.push(Diagnostic::new(
                    format!("{loc}.over"),
                    format!("`{r}` is a {}, which a {} cannot be over", t.kind.name(), o.kind.name()),
                )),
                _ => {}
            },
            (None, true) => {}
        }
        if o.side.is_some() && !matches!(o.kind, ObjectKind::Comodule | ObjectKind::Module) {
            diags.push(Diagnostic::new(format!("{loc}.side"), "only comodules and modules have a side"));
        }
        let mut maps = BTreeMap::new();
        for (key, vs) in &o.maps {
            match parse_entries(vs, &raw.field, &format!("{loc}.maps.{key}")) {
                Ok(es) => {
                    maps.insert(key.clone(), es);
                }
                Err(d) => diags.push(d),
            }
        }
        objects.insert(
            name.clone(),
            ObjectDoc {
                kind: o.kind,
                dims: o.dims.clone(),
                over: o.over.clone(),
                side: o.side,
                maps,
            },
        );
    }
    let mut morphisms = BTreeMap::new();
    for (name, m) in &raw.morphisms {
        let loc = format!("morphisms.{name}");
        for (what, r) in [("source", &m.source), ("target", &m.target)] {
            if !raw.objects.contains_key(r) {
                diags.push(Diagnostic::new(format!("{loc}.{what}"), format!("dangling reference `{r}`")));
            }
        }
        match parse_entries(&m.entries, &raw.field, &format!("{loc}.entries")) {
            Ok(entries) => {
                morphisms.insert(
                    name.clone(),
                    MorphismDoc {
                        source: m.source.clone(),
                        target: m.target.clone(),
                        shift: m.shift,
                        entries,
                    },
                );
            }
            Err(d) => diags.push(d),
        }
    }
    for (name, e) in &raw.extensions {
        let loc = format!("extensions.{name}");
        let checks = [
            ("A", &e.a, raw.objects.get(&e.a).map(|o| o.kind == ObjectKind::ComoduleAlgebra), "comodule_algebra"),
            ("H", &e.h, raw.objects.get(&e.h).map(|o| o.kind == ObjectKind::Bimonoid), "bimonoid"),
            (
                "B",
                &e.b,
                raw.objects.get(&e.b).map(|o| matches!(o.kind, ObjectKind::Algebra | ObjectKind::Bimonoid)),
                "algebra",
            ),
        ];
        for (key, r, ok, want) in checks {
            match ok {
                None => diags.push(Diagnostic::new(format!("{loc}.{key}"), format!("dangling reference `{r}`"))),
                Some(false) => diags.push(Diagnostic::new(format!("{loc}.{key}"), format!("`{r}` is not a {want}"))),
                Some(true) => {}
            }
        }
        if !raw.morphisms.contains_key(&e.phi) {
            diags.push(Diagnostic::new(format!("{loc}.phi"), format!("dangling reference `{}`", e.phi)));
        }
        if let Some(a) = raw.objects.get(&e.a) {
            if a.over.as_deref() != Some(e.h.as_str()) {
                diags.push(Diagnostic::new(format!("{loc}.H"), format!("`{}` is not over `{}`", e.a, e.h)));
            }
        }
    }
    if diags.is_empty() {
        Ok(Document {
            field: raw.field,
            max_degree: n,
            objects,
            morphisms,
            extensions: raw.extensions,
        })
    } else {
        Err(diags)
    }
}

impl Document {
    /// Serialize in the input format.
    pub fn to_json(&self) -> String {
        let raw = RawDocument {
            field: self.field.clone(),
            max_degree: self.max_degree,
            objects: self
                .objects
                .iter()
                .map(|(k, o)| {
                    (
                        k.clone(),
                        RawObject {
                            kind: o.kind,
                            dims: o.dims.clone(),
                            over: o.over.clone(),
                            side: o.side,
                            maps: o
                                .maps
                                .iter()
                                .map(|(m, es)| (m.clone(), es.iter().map(entry_value).collect()))
                                .collect(),
                        },
                    )
                })
                .collect(),
            morphisms: self
                .morphisms
                .iter()
                .map(|(k, m)| {
                    (
                        k.clone(),
                        RawMorphism {
                            source: m.source.clone(),
                            target: m.target.clone(),
                            shift: m.shift,
                            entries: m.entries.iter().map(entry_value).collect(),
                        },
                    )
                })
                .collect(),
            extensions: self.extensions.clone(),
        };
        let v = serde_json::to_value(&raw).expect("documents serialize");
        let mut out = String::new();
        write_value(&v, 0, &mut out);
        out
    }

    pub fn object(&self, name: &str) -> Option<&ObjectDoc> {
        self.objects.get(name)
    }
}
