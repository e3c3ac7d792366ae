//! Sets of equal-dimension subspaces and the `grasscode v1` text format.
//!
//! ```text
//! grasscode v1
//! q=2 n=4 k=2
//! # free-form comment lines
//! 1000|0100
//! 1001|0111
//! ```
//!
//! Line 2 writes extension fields as `q=p^e;modulus=<digits>`, the modulus
//! over GF(p) constant term first. Each codeword is its RREF rows as base-`q`
//! digit strings (`0-9a-z`) joined by `|`; the zero subspace is written `-`.
//! Codeword lines are strictly increasing, which is the subspace order.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{digits_string, FieldSpec};
use crate::subspace::{Space, Subspace};

pub const FORMAT_HEADER: &str = "grasscode v1";

/// What a code has been checked to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeTag {
    /// Pairwise subspace distance at least this value.
    MinDistance(usize),
    /// Every `r`-subspace lies in some member.
    Covering { r: usize },
    /// Every `k`-subspace contains some member.
    Turan { k: usize },
}

/// A sorted, duplicate-free set of `k`-subspaces of F_q^n.
#[derive(Clone, Debug)]
pub struct SubspaceCode {
    space: Space,
    k: usize,
    members: Vec<Subspace>,
    tag: Option<CodeTag>,
    comments: Vec<String>,
}

impl PartialEq for SubspaceCode {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.k == other.k && self.members == other.members
    }
}

impl Eq for SubspaceCode {}

impl SubspaceCode {
    /// Collects members, sorting and removing duplicates.
    pub fn new(
        space: &Space,
        k: usize,
        members: impl IntoIterator<Item = Subspace>,
    ) -> Result<Self> {
        let mut members: Vec<Subspace> = members.into_iter().collect();
        for m in &members {
            if m.ambient() != space.n() || m.dim() != k {
                return Err(Error::DimensionMismatch(format!(
                    "member of dimension {} in F^{}, expected {} in F^{}",
                    m.dim(),
                    m.ambient(),
                    k,
                    space.n()
                )));
            }
        }
        members.sort();
        members.dedup();
        Ok(SubspaceCode {
            space: space.clone(),
            k,
            members,
            tag: None,
            comments: Vec::new(),
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.space.field()
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.space.q()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn contains(&self, s: &Subspace) -> bool {
        self.members.binary_search(s).is_ok()
    }

    pub fn tag(&self) -> Option<CodeTag> {
        self.tag
    }

    pub(crate) fn with_tag(mut self, tag: CodeTag) -> Self {
        self.tag = Some(tag);
        self
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    /// Appends a `# ...` line to the file header.
    pub fn push_comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    /// A copy with the given members removed.
    pub fn without(&self, drop: &[Subspace]) -> SubspaceCode {
        SubspaceCode {
            space: self.space.clone(),
            k: self.k,
            members: self
                .members
                .iter()
                .filter(|m| !drop.contains(m))
                .cloned()
                .collect(),
            tag: None,
            comments: Vec::new(),
        }
    }

    /// Serializes to the `grasscode v1` format.
    pub fn to_file_string(&self) -> Result<String> {
        let q = self.field().order();
        if q > 36 {
            return Err(Error::invalid(format!(
                "the code file format writes one digit per entry; GF({q}) needs more than 36 symbols"
            )));
        }
        let mut out = String::new();
        writeln!(out, "{FORMAT_HEADER}").unwrap();
        writeln!(
            out,
            "{} n={} k={}",
            field_token(self.field()),
            self.n(),
            self.k
        )
        .unwrap();
        for c in &self.comments {
            for line in c.lines() {
                writeln!(out, "# {line}").unwrap();
            }
        }
        for m in &self.members {
            out.push_str(&codeword_string(m));
            out.push('\n');
        }
        Ok(out)
    }

    /// Parses the `grasscode v1` format, rejecting non-canonical rows,
    /// duplicates, unsorted lines and wrong dimensions.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_cap(text, crate::subspace::DEFAULT_ENUMERATION_CAP)
    }

    pub fn parse_with_cap(text: &str, cap: u64) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let err = |line: usize, message: String| Error::Parse { line, message };

        match lines.next() {
            Some((_, l)) if l.trim_end() == FORMAT_HEADER => {}
            _ => return Err(err(1, format!("expected `{FORMAT_HEADER}`"))),
        }
        let (ln, params) = lines
            .next()
            .ok_or_else(|| err(2, "missing parameter line".into()))?;
        let (field, n, k) = parse_params(params).map_err(|m| err(ln, m))?;
        let space = Space::new(field, n).with_cap(cap);
        let q = space.field().order();

        let mut members: Vec<Subspace> = Vec::new();
        let mut comments = Vec::new();
        for (ln, raw) in lines {
            let (body, comment) = match raw.find('#') {
                Some(i) => (&raw[..i], Some(raw[i + 1..].trim())),
                None => (raw, None),
            };
            if let Some(c) = comment {
                if body.trim().is_empty() {
                    comments.push(c.to_string());
                }
            }
            let body = body.trim();
            if body.is_empty() {
                continue;
            }
            let s = parse_codeword(body, n, k, q).map_err(|m| err(ln, m))?;
            if let Some(prev) = members.last() {
                if *prev == s {
                    return Err(err(ln, "duplicate codeword".into()));
                }
                if *prev > s {
                    return Err(err(ln, "codewords are not in sorted order".into()));
                }
            }
            members.push(s);
        }
        Ok(SubspaceCode {
            space,
            k,
            members,
            tag: None,
            comments,
        })
    }
}

fn field_token(f: &FieldSpec) -> String {
    if f.is_prime_field() {
        format!("q={}", f.order())
    } else {
        format!(
            "q={};modulus={}",
            f.order_string(),
            digits_string(f.modulus())
        )
    }
}

fn codeword_string(s: &Subspace) -> String {
    if s.dim() == 0 {
        return "-".into();
    }
    let rows: Vec<String> = s.rows().map(digits_string).collect();
    rows.join("|")
}

fn parse_params(line: &str) -> std::result::Result<(Arc<FieldSpec>, usize, usize), String> {
    let mut q = None;
    let mut n = None;
    let mut k = None;
    for tok in line.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| format!("malformed token `{tok}`"))?;
        match key {
            "q" => q = Some(val.to_string()),
            "n" => n = Some(val.parse::<usize>().map_err(|_| format!("bad n `{val}`"))?),
            "k" => k = Some(val.parse::<usize>().map_err(|_| format!("bad k `{val}`"))?),
            _ => return Err(format!("unknown parameter `{key}`")),
        }
    }
    let (q, n, k) = match (q, n, k) {
        (Some(q), Some(n), Some(k)) => (q, n, k),
        _ => return Err("parameter line needs q, n and k".into()),
    };
    if k > n {
        return Err(format!("k = {k} exceeds n = {n}"));
    }
    let (order, modulus) = match q.split_once(";modulus=") {
        Some((o, m)) => (o.to_string(), Some(m.to_string())),
        None => (q, None),
    };
    let modulus: Option<Vec<u32>> = match modulus {
        Some(m) => Some(
            m.chars()
                .map(|c| {
                    c.to_digit(36)
                        .ok_or_else(|| format!("bad modulus digit `{c}`"))
                })
                .collect::<std::result::Result<_, _>>()?,
        ),
        None => None,
    };
    let field = FieldSpec::from_order_str(&order, modulus.as_deref()).map_err(|e| e.to_string())?;
    Ok((field, n, k))
}

fn parse_codeword(body: &str, n: usize, k: usize, q: u32) -> std::result::Result<Subspace, String> {
    if body == "-" {
        return if k == 0 {
            Ok(Subspace::zero(n))
        } else {
            Err(format!("zero subspace in a code of dimension {k}"))
        };
    }
    let rows: Vec<&str> = body.split('|').collect();
    if rows.len() != k {
        return Err(format!("codeword has {} rows, expected {k}", rows.len()));
    }
    let mut digits = Vec::with_capacity(n * k);
    for r in rows {
        if r.chars().count() != n {
            return Err(format!(
                "row `{r}` has length {}, expected {n}",
                r.chars().count()
            ));
        }
        for c in r.chars() {
            match c.to_digit(36) {
                Some(d) if d < q => digits.push(d),
                _ => return Err(format!("`{c}` is not a digit of GF({q})")),
            }
        }
    }
    let s = Subspace::from_digits(n, k, digits);
    if !s.is_rref() {
        return Err(format!("`{body}` is not in reduced row echelon form"));
    }
    Ok(s)
}
