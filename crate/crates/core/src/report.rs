//! Per-site inequality records and their JSON-lines / CSV rendering.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::WeightedGraph;

/// Slack tolerance: a check passes iff `slack >= -(abs + rel * |rhs|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-10, rel: 1e-9 }
    }
}

impl Tolerance {
    pub fn allows(&self, slack: f64, rhs: f64) -> bool {
        slack >= -(self.abs + self.rel * rhs.abs())
    }
}

/// Where a check was evaluated. Vertices are graph indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Site {
    Global,
    Vertex(usize),
    Pair(usize, usize),
    VertexTime(usize, f64),
    PairTime(usize, usize, f64),
    Spacetime { x: usize, t1: f64, y: usize, t2: f64 },
}

impl Site {
    fn rank(&self) -> u8 {
        match self {
            Site::Global => 0,
            Site::Vertex(_) => 1,
            Site::Pair(..) => 2,
            Site::VertexTime(..) => 3,
            Site::PairTime(..) => 4,
            Site::Spacetime { .. } => 5,
        }
    }

    fn key(&self) -> [f64; 4] {
        match *self {
            Site::Global => [0.0; 4],
            Site::Vertex(x) => [x as f64, 0.0, 0.0, 0.0],
            Site::Pair(x, y) => [x as f64, y as f64, 0.0, 0.0],
            Site::VertexTime(x, t) => [x as f64, t, 0.0, 0.0],
            Site::PairTime(x, y, t) => [x as f64, y as f64, t, 0.0],
            Site::Spacetime { x, t1, y, t2 } => [x as f64, y as f64, t1, t2],
        }
    }

    /// Total order used to merge reports deterministically.
    pub fn total_cmp(&self, other: &Site) -> Ordering {
        self.rank().cmp(&other.rank()).then_with(|| {
            self.key()
                .iter()
                .zip(other.key().iter())
                .map(|(a, b)| a.total_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }

    pub fn describe(&self, g: &WeightedGraph) -> String {
        match *self {
            Site::Global => "global".to_string(),
            Site::Vertex(x) => g.id(x).to_string(),
            Site::Pair(x, y) => format!("({},{})", g.id(x), g.id(y)),
            Site::VertexTime(x, t) => format!("({},t={t})", g.id(x)),
            Site::PairTime(x, y, t) => format!("({},{},t={t})", g.id(x), g.id(y)),
            Site::Spacetime { x, t1, y, t2 } => format!("({},{t1})->({},{t2})", g.id(x), g.id(y)),
        }
    }

    fn to_json<'g>(self, g: &'g WeightedGraph) -> SiteJson<'g> {
        let mut s = SiteJson::default();
        match self {
            Site::Global => {}
            Site::Vertex(x) => s.x = Some(g.id(x)),
            Site::Pair(x, y) => (s.x, s.y) = (Some(g.id(x)), Some(g.id(y))),
            Site::VertexTime(x, t) => (s.x, s.t) = (Some(g.id(x)), Some(t)),
            Site::PairTime(x, y, t) => (s.x, s.y, s.t) = (Some(g.id(x)), Some(g.id(y)), Some(t)),
            Site::Spacetime { x, t1, y, t2 } => {
                (s.x, s.y, s.t1, s.t2) = (Some(g.id(x)), Some(g.id(y)), Some(t1), Some(t2))
            }
        }
        s
    }
}

#[derive(Debug, Default, Serialize)]
struct SiteJson<'g> {
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<&'g str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    y: Option<&'g str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t2: Option<f64>,
}

/// One evaluated inequality `lhs <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub check: &'static str,
    pub site: Site,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
    pub tol: Tolerance,
}

impl BoundReport {
    pub fn new(check: &'static str, site: Site, lhs: f64, rhs: f64, tol: Tolerance) -> Self {
        let slack = rhs - lhs;
        Self { check, site, lhs, rhs, slack, pass: tol.allows(slack, rhs), tol }
    }

    /// Slack relative to `|rhs|`, used to compare how tight two checks are.
    pub fn relative_slack(&self) -> f64 {
        self.slack / self.rhs.abs()
    }

    pub fn to_json_line(&self, g: &WeightedGraph) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            check: &'a str,
            site: SiteJson<'a>,
            #[serde(serialize_with = "number_or_string")]
            lhs: f64,
            #[serde(serialize_with = "number_or_string")]
            rhs: f64,
            #[serde(serialize_with = "number_or_string")]
            slack: f64,
            pass: bool,
            abs_tol: f64,
            rel_tol: f64,
        }
        serde_json::to_string(&Line {
            check: self.check,
            site: self.site.to_json(g),
            lhs: self.lhs,
            rhs: self.rhs,
            slack: self.slack,
            pass: self.pass,
            abs_tol: self.tol.abs,
            rel_tol: self.tol.rel,
        })
        .expect("report line serializes")
    }

    pub const CSV_HEADER: &'static str = "check,site,lhs,rhs,slack,pass,abs_tol,rel_tol";

    pub fn to_csv_row(&self, g: &WeightedGraph) -> String {
        format!(
            "{},\"{}\",{},{},{},{},{},{}",
            self.check,
            self.site.describe(g).replace('"', "\"\""),
            self.lhs,
            self.rhs,
            self.slack,
            self.pass,
            self.tol.abs,
            self.tol.rel
        )
    }
}

/// JSON has no infinities; non-finite values are written as strings.
fn number_or_string<S: serde::Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(&v.to_string())
    }
}

/// Sorts by `(check, site)`.
pub fn sort_reports(reports: &mut [BoundReport]) {
    reports.sort_by(|a, b| a.check.cmp(b.check).then_with(|| a.site.total_cmp(&b.site)));
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckSummary {
    pub total: usize,
    pub passed: usize,
    pub min_slack: f64,
    #[serde(skip)]
    pub worst: Option<Site>,
}

impl Default for CheckSummary {
    fn default() -> Self {
        Self { total: 0, passed: 0, min_slack: f64::INFINITY, worst: None }
    }
}

/// Pass counts and minimum slack per check name.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub checks: BTreeMap<&'static str, CheckSummary>,
}

impl Summary {
    pub fn from_reports<'a>(reports: impl IntoIterator<Item = &'a BoundReport>) -> Self {
        let mut s = Self::default();
        for r in reports {
            s.add(r);
        }
        s
    }

    pub fn add(&mut self, r: &BoundReport) {
        let c = self.checks.entry(r.check).or_default();
        c.total += 1;
        c.passed += r.pass as usize;
        if r.slack < c.min_slack || c.worst.is_none() {
            c.min_slack = c.min_slack.min(r.slack);
            c.worst = Some(r.site);
        }
    }

    pub fn merge(&mut self, other: &Summary) {
        for (name, o) in &other.checks {
            let c = self.checks.entry(name).or_default();
            c.total += o.total;
            c.passed += o.passed;
            if o.min_slack < c.min_slack {
                c.min_slack = o.min_slack;
                c.worst = o.worst;
            }
        }
    }

    pub fn total(&self) -> usize {
        self.checks.values().map(|c| c.total).sum()
    }

    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|c| c.passed == c.total)
    }
}
