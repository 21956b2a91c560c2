//! Truncated integer power series in one variable `t`, used as graded
//! dimension counts.
//!
//! A [`PoincareSeries`] stores the coefficients of `t^0..=t^cap`. Binary
//! operations work to the smaller of the two caps. Overflow of the `i128`
//! coefficients is reported as [`Error::Series`] rather than wrapping.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::Prime;
use crate::lazard::{self, TheoremReading};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PoincareSeries {
    coefficients: Vec<i128>,
}

fn overflow() -> Error {
    Error::Series("coefficient overflow".into())
}

impl PoincareSeries {
    /// Coefficients for degrees `0..coefficients.len()`; the cap is the last
    /// degree. An empty vector is the zero series with cap 0.
    pub fn new(mut coefficients: Vec<i128>) -> Self {
        if coefficients.is_empty() {
            coefficients.push(0);
        }
        PoincareSeries { coefficients }
    }

    pub fn zero(cap: usize) -> Self {
        PoincareSeries {
            coefficients: vec![0; cap + 1],
        }
    }

    pub fn one(cap: usize) -> Self {
        Self::monomial(cap, 0, 1)
    }

    /// `c * t^degree`, which is zero if `degree > cap`.
    pub fn monomial(cap: usize, degree: usize, c: i128) -> Self {
        let mut s = Self::zero(cap);
        if degree <= cap {
            s.coefficients[degree] = c;
        }
        s
    }

    /// Dimension count of a graded space with `counts[d]` classes in degree `d`.
    pub fn from_counts(counts: &[u64]) -> Self {
        Self::new(counts.iter().map(|&c| c as i128).collect())
    }

    pub fn cap(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[i128] {
        &self.coefficients
    }

    /// Coefficient of `t^degree`; zero beyond the cap.
    pub fn coefficient(&self, degree: usize) -> i128 {
        self.coefficients.get(degree).copied().unwrap_or(0)
    }

    pub fn truncated(&self, cap: usize) -> Self {
        let mut c = self.coefficients.clone();
        c.resize(cap.min(self.cap()) + 1, 0);
        PoincareSeries { coefficients: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let cap = self.cap().min(other.cap());
        let coefficients = (0..=cap)
            .map(|d| {
                self.coefficients[d]
                    .checked_add(other.coefficients[d])
                    .ok_or_else(overflow)
            })
            .collect::<Result<_>>()?;
        Ok(PoincareSeries { coefficients })
    }

    pub fn neg(&self) -> Self {
        PoincareSeries {
            coefficients: self.coefficients.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let cap = self.cap().min(other.cap());
        let mut out = vec![0i128; cap + 1];
        for (i, &a) in self.coefficients.iter().enumerate().take(cap + 1) {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coefficients.iter().enumerate().take(cap + 1 - i) {
                let prod = a.checked_mul(b).ok_or_else(overflow)?;
                out[i + j] = out[i + j].checked_add(prod).ok_or_else(overflow)?;
            }
        }
        Ok(PoincareSeries { coefficients: out })
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one(self.cap());
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse; the constant term must be `1` or `-1`.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coefficients[0];
        if c0 != 1 && c0 != -1 {
            return Err(Error::Series(format!(
                "constant term {c0} is not invertible over the integers"
            )));
        }
        let cap = self.cap();
        let mut out = vec![0i128; cap + 1];
        out[0] = c0;
        for n in 1..=cap {
            let mut acc = 0i128;
            for k in 1..=n {
                let prod = self.coefficients[k]
                    .checked_mul(out[n - k])
                    .ok_or_else(overflow)?;
                acc = acc.checked_add(prod).ok_or_else(overflow)?;
            }
            out[n] = -acc * c0;
        }
        Ok(PoincareSeries { coefficients: out })
    }

    /// `t^n * self`, keeping the same cap.
    pub fn shift(&self, n: usize) -> Self {
        let cap = self.cap();
        let mut out = vec![0i128; cap + 1];
        if n <= cap {
            out[n..].copy_from_slice(&self.coefficients[..=cap - n]);
        }
        PoincareSeries { coefficients: out }
    }

    /// Multiply in place by `(1 - t^d)^{-m}` or `(1 + t^d)^m`.
    fn mul_binomial(&mut self, d: usize, m: i128, exterior: bool) -> Result<()> {
        let cap = self.cap();
        let mut factor = vec![0i128; cap + 1];
        // C(m + k - 1, k) for the polynomial part, C(m, k) for the exterior part
        let mut c = 1i128;
        let mut k = 0i128;
        let mut deg = 0;
        while deg <= cap {
            factor[deg] = c;
            let top = if exterior { m - k } else { m + k };
            if top == 0 {
                break;
            }
            c = c.checked_mul(top).ok_or_else(overflow)? / (k + 1);
            k += 1;
            deg += d;
        }
        *self = self.mul(&PoincareSeries {
            coefficients: factor,
        })?;
        Ok(())
    }
}

impl fmt::Display for PoincareSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, &c) in self.coefficients.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (d, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{a}t")?,
                (_, 1) => write!(f, "t^{d}")?,
                _ => write!(f, "{a}t^{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.cap() + 1)
    }
}

/// Dimension count of the free graded-commutative algebra on `module`:
/// `Π_{d even} (1 - t^d)^{-mult(d)} · Π_{d odd} (1 + t^d)^{mult(d)}`.
pub fn sym_algebra(module: &PoincareSeries) -> Result<PoincareSeries> {
    if module.coefficient(0) != 0 {
        return Err(Error::Series(
            "a free algebra needs generators in positive degrees only".into(),
        ));
    }
    let mut out = PoincareSeries::one(module.cap());
    for (d, &m) in module.coefficients.iter().enumerate().skip(1) {
        if m < 0 {
            return Err(Error::Series(format!(
                "negative multiplicity {m} in degree {d}"
            )));
        }
        if m > 0 {
            out.mul_binomial(d, m, d % 2 == 1)?;
        }
    }
    Ok(out)
}

/// Dimension count of `base ⊗ T(module)`, the free associative algebra over
/// `base`: `base · (1 - module)^{-1}`.
pub fn tensor_algebra(base: &PoincareSeries, module: &PoincareSeries) -> Result<PoincareSeries> {
    if module.coefficient(0) != 0 {
        return Err(Error::Series(
            "a free algebra needs generators in positive degrees only".into(),
        ));
    }
    if base.coefficient(0) != 1 {
        return Err(Error::Series(format!(
            "base algebra has constant term {}, expected 1",
            base.coefficient(0)
        )));
    }
    let one = PoincareSeries::one(module.cap());
    base.mul(&one.sub(module)?.inverse()?)
}

/// `Π_{i>=1} (1 - t^{2i})^{-1}`: polynomial generators in every even degree.
pub fn mu_homology_series(cap: usize) -> PoincareSeries {
    let mut c = vec![0i128; cap + 1];
    c[0] = 1;
    for d in (2..=cap).step_by(2) {
        for n in d..=cap {
            c[n] += c[n - d];
        }
    }
    PoincareSeries { coefficients: c }
}

/// One class in every degree `>= 0`.
pub fn bcp_series(cap: usize) -> PoincareSeries {
    PoincareSeries {
        coefficients: vec![1; cap + 1],
    }
}

pub fn shift(s: &PoincareSeries, n: usize) -> PoincareSeries {
    s.shift(n)
}

/// `Π_{i>=1} (1 - t^{2(p^i-1)})^{-1} · Π_{i>=0} (1 + t^{2p^i-1})`, from the
/// Milnor generators `ξ_i` and `τ_i`.
pub fn dual_steenrod_series(prime: Prime, cap: usize) -> PoincareSeries {
    let p = prime.get() as usize;
    let mut c = vec![0i128; cap + 1];
    c[0] = 1;
    let mut pi = p;
    while 2 * (pi - 1) <= cap {
        let d = 2 * (pi - 1);
        for n in d..=cap {
            c[n] += c[n - d];
        }
        pi *= p;
    }
    let mut pi = 1;
    while 2 * pi - 1 <= cap {
        let d = 2 * pi - 1;
        for n in (d..=cap).rev() {
            c[n] += c[n - d];
        }
        pi *= p;
    }
    PoincareSeries { coefficients: c }
}

/// Dimension count of `𝔽_p[a_p, b_r, s_r]` with a single `a_p`.
pub fn lp_series(prime: Prime, cap: usize) -> PoincareSeries {
    lp_series_with(prime, cap, TheoremReading::SingleA)
}

pub fn lp_series_with(prime: Prime, cap: usize, reading: TheoremReading) -> PoincareSeries {
    PoincareSeries::from_counts(&lazard::theorem_hilbert_function_with(
        prime, cap as u32, reading,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesRow {
    pub degree: usize,
    pub lhs: i128,
    pub rhs: i128,
    pub equal: bool,
}

/// Degreewise comparison of two series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub check: &'static str,
    pub prime: Prime,
    pub cap: usize,
    pub lhs: &'static str,
    pub rhs: &'static str,
    pub rows: Vec<SeriesRow>,
    pub equal: bool,
    pub first_discrepancy: Option<usize>,
}

impl IdentityReport {
    pub fn compare(
        check: &'static str,
        prime: Prime,
        (lhs_name, lhs): (&'static str, &PoincareSeries),
        (rhs_name, rhs): (&'static str, &PoincareSeries),
    ) -> Self {
        let cap = lhs.cap().min(rhs.cap());
        let rows: Vec<SeriesRow> = (0..=cap)
            .map(|d| SeriesRow {
                degree: d,
                lhs: lhs.coefficient(d),
                rhs: rhs.coefficient(d),
                equal: lhs.coefficient(d) == rhs.coefficient(d),
            })
            .collect();
        let first_discrepancy = rows.iter().find(|r| !r.equal).map(|r| r.degree);
        IdentityReport {
            check,
            prime,
            cap,
            lhs: lhs_name,
            rhs: rhs_name,
            equal: first_discrepancy.is_none(),
            rows,
            first_discrepancy,
        }
    }

    pub fn unequal_degrees(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| !r.equal)
            .map(|r| r.degree)
            .collect()
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (p = {}, cap = {})", self.check, self.prime, self.cap)?;
        writeln!(f, "  lhs = {}", self.lhs)?;
        writeln!(f, "  rhs = {}", self.rhs)?;
        writeln!(f, "  {:>6}  {:>12}  {:>12}", "degree", "lhs", "rhs")?;
        for r in &self.rows {
            let flag = if r.equal { "" } else { "  <- differs" };
            writeln!(f, "  {:>6}  {:>12}  {:>12}{flag}", r.degree, r.lhs, r.rhs)?;
        }
        Ok(())
    }
}

/// The free associative algebra `MU_* ⊗ T(Σ BC_p)` against the sum of its
/// filtration quotients `Σ_n Σ^n MU_* ⊗ BC_p^{⊗n}`.
pub fn check_v1_homology(prime: Prime, cap: usize) -> Result<IdentityReport> {
    let mu = mu_homology_series(cap);
    let bcp = bcp_series(cap);
    let lhs = tensor_algebra(&mu, &bcp.shift(1))?;
    let mut rhs = PoincareSeries::zero(cap);
    let mut power = mu.clone();
    for n in 0..=cap {
        rhs = rhs.add(&power.shift(n))?;
        power = power.mul(&bcp)?;
    }
    Ok(IdentityReport::compare(
        "v1-filtration",
        prime,
        ("MU * T(shift(BC_p, 1))", &lhs),
        ("sum_n shift(MU * BC_p^n, n)", &rhs),
    ))
}

/// `MU_* ⊗ Sym(Σ BC_p)` against `L_p ⊗ A_*`, with `L_p` read as
/// `𝔽_p[a_p, b_r, s_r]` with a single `a_p`. Report only.
pub fn check_rstar_diagnostic(prime: Prime, cap: usize) -> Result<IdentityReport> {
    let lhs = rstar_series(cap)?;
    let rhs = lp_series(prime, cap).mul(&dual_steenrod_series(prime, cap))?;
    Ok(IdentityReport::compare(
        "rstar-diagnostic",
        prime,
        ("MU * Sym(shift(BC_p, 1))", &lhs),
        ("L_p * A_* (single a_p)", &rhs),
    ))
}

/// As [`check_rstar_diagnostic`], with `L_p` replaced by the Hilbert function
/// of the ring computed from the axioms.
pub fn check_rstar_computed(prime: Prime, cap: usize) -> Result<IdentityReport> {
    let lhs = rstar_series(cap)?;
    let dims: Vec<u64> =
        lazard::lazard_hilbert_function(prime, cap as u32, lazard::default_truncation(cap as u32))?
            .iter()
            .map(|d| d.dimension as u64)
            .collect();
    let rhs = PoincareSeries::from_counts(&dims).mul(&dual_steenrod_series(prime, cap))?;
    Ok(IdentityReport::compare(
        "rstar-computed",
        prime,
        ("MU * Sym(shift(BC_p, 1))", &lhs),
        ("computed L_p * A_*", &rhs),
    ))
}

fn rstar_series(cap: usize) -> Result<PoincareSeries> {
    mu_homology_series(cap).mul(&sym_algebra(&bcp_series(cap).shift(1))?)
}
