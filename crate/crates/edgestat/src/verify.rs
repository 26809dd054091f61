//! Identity checks behind `edgestat verify`.

use edgestat_core::dpp::von_koch_check;
use edgestat_core::kernels::{exp_airy_identity_lhs, exp_airy_identity_rhs, m_alpha, InterpolatingKernel, Kernel};
use edgestat_core::linalg::symmetric_eigenvalues;
use edgestat_core::quad::QuadratureRule;
use edgestat_core::specfun::{mehler_closed_form, mehler_partial_sum, HermiteBasis};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Check {
    AiryIdentity,
    Mehler,
    VonKoch,
    OperatorBounds,
    Orthonormality,
    All,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::AiryIdentity => "airy_identity",
            Check::Mehler => "mehler",
            Check::VonKoch => "von_koch",
            Check::OperatorBounds => "operator_bounds",
            Check::Orthonormality => "orthonormality",
            Check::All => "all",
        }
    }

    pub const EACH: [Check; 5] =
        [Check::AiryIdentity, Check::Mehler, Check::VonKoch, Check::OperatorBounds, Check::Orthonormality];
}

/// Result of one sub-case of a check.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub label: String,
    pub error: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub check: &'static str,
    pub tolerance: f64,
    pub cases: Vec<Case>,
}

impl Verdict {
    fn new(check: &'static str, tolerance: f64) -> Self {
        Verdict { check, tolerance, cases: Vec::new() }
    }

    fn case(&mut self, label: String, error: f64) {
        // NaN fails
        let passed = error <= self.tolerance;
        self.cases.push(Case { label, error, passed });
    }

    fn case_bool(&mut self, label: String, error: f64, passed: bool) {
        self.cases.push(Case { label, error, passed });
    }

    pub fn passed(&self) -> bool {
        !self.cases.is_empty() && self.cases.iter().all(|c| c.passed)
    }

    pub fn max_error(&self) -> f64 {
        self.cases.iter().map(|c| c.error).fold(0.0, |m, e| if e.is_nan() { f64::NAN } else { m.max(e) })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "check": self.check,
            "passed": self.passed(),
            "tolerance": self.tolerance,
            "max_error": finite_or_string(self.max_error()),
            "cases": self.cases.iter().map(|c| json!({
                "case": c.label,
                "error": finite_or_string(c.error),
                "passed": c.passed,
            })).collect::<Vec<_>>(),
        })
    }
}

fn finite_or_string(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn rel(got: f64, want: f64) -> f64 {
    if got == want {
        0.0
    } else {
        ((got - want) / want).abs()
    }
}

pub fn run(check: Check) -> Vec<Verdict> {
    match check {
        Check::AiryIdentity => vec![airy_identity()],
        Check::Mehler => vec![mehler()],
        Check::VonKoch => vec![von_koch()],
        Check::OperatorBounds => vec![operator_bounds()],
        Check::Orthonormality => vec![orthonormality()],
        Check::All => Check::EACH.iter().flat_map(|&c| run(c)).collect(),
    }
}

/// Quadrature side against the closed form of the exponential-Airy identity.
pub fn airy_identity() -> Verdict {
    let mut v = Verdict::new("airy_identity", 1e-8);
    for alpha in [0.5, 1.0, 2.0] {
        let mut worst: f64 = 0.0;
        for x in grid(-2.0, 2.0, 5) {
            for y in grid(-2.0, 2.0, 5) {
                let e = match (exp_airy_identity_lhs(alpha, x, y), exp_airy_identity_rhs(alpha, x, y)) {
                    (Ok(l), Ok(r)) => rel(l, r),
                    _ => f64::NAN,
                };
                worst = if e.is_nan() { f64::NAN } else { worst.max(e) };
            }
        }
        v.case(format!("alpha={alpha}"), worst);
    }
    v
}

/// 80-term Mehler partial sums against the closed form on [-2, 2]^2.
pub fn mehler() -> Verdict {
    let mut v = Verdict::new("mehler", 1e-10);
    for q in [0.1, 0.5, 0.9] {
        let mut worst: f64 = 0.0;
        for x in grid(-2.0, 2.0, 5) {
            for y in grid(-2.0, 2.0, 5) {
                let e = match (mehler_partial_sum(q, x, y, 80), mehler_closed_form(q, x, y)) {
                    (Ok(s), Ok(c)) => rel(s, c),
                    _ => f64::NAN,
                };
                worst = if e.is_nan() { f64::NAN } else { worst.max(e) };
            }
        }
        v.case(format!("q={q}"), worst);
    }
    v
}

/// det(I+A)det(I+B) = det(I+A+B+AB) at truncations 30 and 60.
pub fn von_koch() -> Verdict {
    let mut v = Verdict::new("von_koch", 1e-8);
    let sign = |i: usize, j: usize| if (i + j).is_multiple_of(2) { 1.0 } else { -1.0 };
    let cases: [(&str, f64, f64); 3] = [("c=0.8,-0.6", 0.8, -0.6), ("c=0.5,0.5", 0.5, 0.5), ("c=-0.3,0.9", -0.3, 0.9)];
    for (label, ca, cb) in cases {
        let r = von_koch_check(
            |i, j| ca * 2f64.powi(-((i + j) as i32)),
            |i, j| cb * 2f64.powi(-((i + j) as i32)) * sign(i, j),
            [30, 60],
            v.tolerance,
        );
        v.case_bool(label.into(), r.max_error, r.passed);
    }
    v
}

/// Nystrom spectra of M_alpha in [0, 1] and the diagonal bound M_1(x,x) <= e^{-x}.
pub fn operator_bounds() -> Verdict {
    let mut v = Verdict::new("operator_bounds", 1e-8);
    for alpha in [0.5, 1.0, 4.0] {
        let k = match InterpolatingKernel::new(alpha) {
            Ok(k) => k,
            Err(_) => {
                v.case(format!("alpha={alpha}"), f64::NAN);
                continue;
            }
        };
        for t in [-6.0, 0.0] {
            let rule = QuadratureRule::gauss_legendre(80).mapped(t, t + 30.0);
            let mut m = k.gram(&rule.nodes);
            let n = rule.len();
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] *= (rule.weights[i] * rule.weights[j]).sqrt();
                }
            }
            let excess = symmetric_eigenvalues(m)
                .into_iter()
                .map(|e| if e < 0.0 { -e } else { (e - 1.0).max(0.0) })
                .fold(0.0, f64::max);
            v.case(format!("spectrum alpha={alpha} t={t}"), excess);
        }
    }
    let mut excess: f64 = 0.0;
    for x in grid(-5.0, 10.0, 61) {
        match m_alpha(1.0, x, x) {
            Ok(d) => excess = excess.max(d - (-x).exp()),
            Err(_) => excess = f64::NAN,
        }
    }
    v.case_bool("diagonal alpha=1".into(), excess.max(0.0), excess <= 0.0);
    v
}

/// Gram matrix of the scaled Hermite functions psi_0..psi_40.
pub fn orthonormality() -> Verdict {
    let mut v = Verdict::new("orthonormality", 1e-8);
    let rule = QuadratureRule::gauss_legendre(400);
    for beta in [0.5, 1.0, 3.0] {
        let basis = match HermiteBasis::new(beta, 40) {
            Ok(b) => b,
            Err(_) => {
                v.case(format!("beta={beta}"), f64::NAN);
                continue;
            }
        };
        let half = (81f64.sqrt() + 7.0) / beta;
        let r = rule.mapped(-half, half);
        let mut vals = vec![[0.0; 41]; r.len()];
        let mut ok = true;
        for (i, &x) in r.nodes.iter().enumerate() {
            ok &= basis.psi_all(x, &mut vals[i]).is_ok();
        }
        let mut worst: f64 = if ok { 0.0 } else { f64::NAN };
        for n in 0..=40 {
            for m in 0..=n {
                let g: f64 = (0..r.len()).map(|i| r.weights[i] * vals[i][n] * vals[i][m]).sum();
                let target = if n == m { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        v.case(format!("beta={beta}"), worst);
    }
    v
}
