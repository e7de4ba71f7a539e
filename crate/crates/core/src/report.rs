//! Verification rows and reports shared by the scans and the CLI.

use serde::Serialize;

/// One checked case. Parameters that do not apply are left empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseRow {
    pub suite: String,
    /// Name of the property the row checks.
    pub citation: String,
    pub a: Option<f64>,
    pub nu: Option<f64>,
    pub z: Option<f64>,
    pub zeta: Option<f64>,
    pub t_or_r: Option<f64>,
    pub value_lhs: f64,
    pub value_rhs: f64,
    pub residual: f64,
    pub margin: f64,
    pub pass: bool,
    /// Reported only; never counted as a failure.
    #[serde(skip)]
    pub informational: bool,
}

impl CaseRow {
    pub fn new(suite: &str, citation: &str) -> Self {
        Self {
            suite: suite.to_string(),
            citation: citation.to_string(),
            a: None,
            nu: None,
            z: None,
            zeta: None,
            t_or_r: None,
            value_lhs: f64::NAN,
            value_rhs: f64::NAN,
            residual: f64::NAN,
            margin: f64::NAN,
            pass: false,
            informational: false,
        }
    }

    pub fn a(mut self, a: f64) -> Self {
        self.a = Some(a);
        self.nu = Some(0.5 * (a - 1.0));
        self
    }

    pub fn nu(mut self, nu: f64) -> Self {
        self.nu = Some(nu);
        self
    }

    pub fn z(mut self, z: f64) -> Self {
        self.z = Some(z);
        self
    }

    pub fn zeta(mut self, zeta: f64) -> Self {
        self.zeta = Some(zeta);
        self
    }

    pub fn t(mut self, t: f64) -> Self {
        self.t_or_r = Some(t);
        self
    }

    pub fn values(mut self, lhs: f64, rhs: f64) -> Self {
        self.value_lhs = lhs;
        self.value_rhs = rhs;
        self
    }

    /// Pass iff `residual <= tol`; margin is `tol - residual`.
    pub fn within(mut self, residual: f64, tol: f64) -> Self {
        self.residual = residual;
        self.margin = tol - residual;
        self.pass = residual <= tol;
        self
    }

    /// Pass iff `margin > 0` (or `>= 0` when not strict).
    pub fn margin(mut self, residual: f64, margin: f64, strict: bool) -> Self {
        self.residual = residual;
        self.margin = margin;
        self.pass = if strict { margin > 0.0 } else { margin >= 0.0 };
        self
    }

    /// Explicit verdict, for checks decided on a quantity other than `margin`
    /// (for instance a log-margin that stays finite where the margin underflows).
    pub fn verdict(mut self, residual: f64, margin: f64, pass: bool) -> Self {
        self.residual = residual;
        self.margin = margin;
        self.pass = pass;
        self
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub fn counts(&self) -> bool {
        !self.informational
    }

    fn sort_key(&self) -> [Option<f64>; 5] {
        [self.a, self.nu, self.z, self.zeta, self.t_or_r]
    }
}

fn cmp_opt(x: &Option<f64>, y: &Option<f64>) -> std::cmp::Ordering {
    match (x, y) {
        (None, None) => std::cmp::Ordering::Equal,
        (None, Some(_)) => std::cmp::Ordering::Less,
        (Some(_), None) => std::cmp::Ordering::Greater,
        (Some(a), Some(b)) => a.total_cmp(b),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: Vec<CaseRow>,
    /// Index of the counted case with the smallest margin.
    pub worst_case: Option<usize>,
    pub overall_pass: bool,
}

impl VerificationReport {
    /// Rows are put in a canonical order (property name, then parameters) so
    /// reports do not depend on evaluation order.
    pub fn new(suite: &str, mut cases: Vec<CaseRow>) -> Self {
        cases.sort_by(|x, y| {
            x.citation.cmp(&y.citation).then_with(|| {
                x.sort_key().iter().zip(y.sort_key().iter()).map(|(p, q)| cmp_opt(p, q)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
            })
        });
        for c in &mut cases {
            if !c.pass && !c.residual.is_nan() && c.margin.is_nan() {
                c.margin = f64::NEG_INFINITY;
            }
        }
        let worst_case = cases
            .iter()
            .enumerate()
            .filter(|(_, c)| c.counts())
            .min_by(|(_, x), (_, y)| key(x).total_cmp(&key(y)))
            .map(|(i, _)| i);
        let overall_pass = cases.iter().filter(|c| c.counts()).all(|c| c.pass);
        Self { suite: suite.to_string(), cases, worst_case, overall_pass }
    }

    pub fn worst(&self) -> Option<&CaseRow> {
        self.worst_case.map(|i| &self.cases[i])
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRow> {
        self.cases.iter().filter(|c| c.counts() && !c.pass)
    }

    pub fn merge(suite: &str, reports: Vec<VerificationReport>) -> Self {
        Self::new(suite, reports.into_iter().flat_map(|r| r.cases).collect())
    }
}

fn key(c: &CaseRow) -> f64 {
    if !c.pass {
        f64::NEG_INFINITY
    } else if c.margin.is_nan() {
        f64::INFINITY
    } else {
        c.margin
    }
}
