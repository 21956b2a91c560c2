//! 𝔽_p-formal group laws and their axiom checks.
//!
//! A law is a pair `(F1, F2)` of truncated power series in `x1, x2` (degree 2)
//! and `e1, e2` (degree 1). `F1` is the odd component (the image of `e`) and
//! `F2` the even one (the image of `x`). A point is a pair `ξ = (x, e)`, and
//! `F(ξ1, ξ2)` substitutes the two points into both components.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::Prime;
use crate::graded::{
    GradedPolynomial, GradedVariable, Monomial, Ring, RingDescriptor, TruncationGrading,
};

/// Geometric variables of a law, in canonical order.
pub const LAW_VARIABLES: [(&str, u32); 4] = [("x1", 2), ("x2", 2), ("e1", 1), ("e2", 1)];

pub const UNIT_NOTICE: &str = "unit axiom checked as F(xi, 0) = F(0, xi) = xi";

/// The ring `R[[x1, x2, e1, e2]]` truncated at geometric degree `truncation`.
pub fn law_ring(prime: Prime, truncation: u32, symbols: Vec<GradedVariable>) -> Result<Ring> {
    ring_with(prime, truncation, symbols, &LAW_VARIABLES)
}

fn ring_with(
    prime: Prime,
    truncation: u32,
    symbols: Vec<GradedVariable>,
    variables: &[(&str, u32)],
) -> Result<Ring> {
    let variables = variables
        .iter()
        .map(|&(n, d)| GradedVariable::new(n, d))
        .collect::<Result<_>>()?;
    RingDescriptor::new(
        prime,
        symbols,
        variables,
        truncation,
        TruncationGrading::Geometric,
    )
}

/// An odd and an even series living in the same ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesPair {
    pub odd: GradedPolynomial,
    pub even: GradedPolynomial,
}

impl SeriesPair {
    pub fn new(odd: GradedPolynomial, even: GradedPolynomial) -> Self {
        SeriesPair { odd, even }
    }

    /// The point `(x, e)` given by two generator names of `ring`.
    pub fn point(ring: &Ring, x: &str, e: &str) -> Result<Self> {
        Ok(SeriesPair {
            odd: GradedPolynomial::var(ring, e)?,
            even: GradedPolynomial::var(ring, x)?,
        })
    }

    pub fn zero(ring: &Ring) -> Self {
        SeriesPair {
            odd: GradedPolynomial::zero(ring),
            even: GradedPolynomial::zero(ring),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.odd.is_zero() && self.even.is_zero()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(SeriesPair {
            odd: self.odd.sub(&other.odd)?,
            even: self.even.sub(&other.even)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Unit,
    Associativity,
    Commutativity,
    PSeries,
    EIndependence,
    Homogeneity,
}

impl Axiom {
    /// The five defining axioms; homogeneity is informational.
    pub const DEFINING: [Axiom; 5] = [
        Axiom::Unit,
        Axiom::Associativity,
        Axiom::Commutativity,
        Axiom::PSeries,
        Axiom::EIndependence,
    ];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Unit => "unit",
            Axiom::Associativity => "associativity",
            Axiom::Commutativity => "commutativity",
            Axiom::PSeries => "p-series",
            Axiom::EIndependence => "e-independence",
            Axiom::Homogeneity => "homogeneity",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    F1,
    F2,
}

/// Outcome of one axiom check. On failure, names the first offending
/// geometric monomial and the coefficient left over there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component: Option<Component>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monomial: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

impl AxiomCheck {
    fn pass(axiom: Axiom) -> Self {
        AxiomCheck {
            axiom,
            status: Status::Pass,
            component: None,
            monomial: None,
            residual: None,
        }
    }

    fn offending(
        axiom: Axiom,
        status: Status,
        component: Component,
        monomial: &Monomial,
        coefficient: &GradedPolynomial,
    ) -> Self {
        let ring = coefficient.ring();
        AxiomCheck {
            axiom,
            status,
            component: Some(component),
            monomial: Some(GradedPolynomial::from_monomial(ring, 1, monomial.clone()).to_string()),
            residual: Some(coefficient.to_string()),
        }
    }

    /// Pass if the defect vanishes, otherwise fail at its smallest monomial.
    fn from_defect(axiom: Axiom, defect: &SeriesPair) -> Self {
        let first = |p: &GradedPolynomial| p.geometric_coefficients().into_iter().next();
        let pick = match (first(&defect.odd), first(&defect.even)) {
            (None, None) => return Self::pass(axiom),
            (Some(a), None) => (Component::F1, a),
            (None, Some(b)) => (Component::F2, b),
            (Some(a), Some(b)) => {
                if b.0 < a.0 {
                    (Component::F2, b)
                } else {
                    (Component::F1, a)
                }
            }
        };
        let (component, (m, c)) = pick;
        Self::offending(axiom, Status::Fail, component, &m, &c)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for AxiomCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::NotApplicable => "n/a",
        };
        write!(f, "{:<15} {status}", self.axiom.to_string())?;
        if let (Some(c), Some(m), Some(r)) = (&self.component, &self.monomial, &self.residual) {
            write!(f, "  ({c:?} at {m}, residual {r})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub prime: Prime,
    pub truncation: u32,
    pub notice: &'static str,
    pub checks: Vec<AxiomCheck>,
    /// Whether the five defining axioms all pass.
    pub passed: bool,
}

/// A pair `(F1, F2)` satisfying the structural invariants of a law: both in
/// the same ring over `x1, x2, e1, e2`, no terms of geometric degree 0, `F1`
/// of odd total parity and `F2` of even total parity.
///
/// The axioms themselves are not enforced; use the `check_*` methods.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalGroupLaw {
    odd: GradedPolynomial,
    even: GradedPolynomial,
}

impl FormalGroupLaw {
    pub fn new(odd: GradedPolynomial, even: GradedPolynomial) -> Result<Self> {
        if odd.ring() != even.ring() {
            return Err(Error::RingMismatch(
                "F1 and F2 live in different rings".into(),
            ));
        }
        let ring = odd.ring();
        let vars: Vec<(&str, u32)> = ring
            .variables()
            .iter()
            .map(|v| (v.name(), v.degree()))
            .collect();
        if vars != LAW_VARIABLES {
            return Err(Error::InvalidInput(
                "a law needs geometric variables x1, x2 (degree 2) and e1, e2 (degree 1)".into(),
            ));
        }
        for (name, poly, want_odd) in [("F1", &odd, true), ("F2", &even, false)] {
            for (m, _) in poly.terms() {
                if geometric_degree(ring, m) == 0 {
                    return Err(Error::InvalidInput(format!(
                        "{name} has a nonzero constant term"
                    )));
                }
                if (m.degree() % 2 == 1) != want_odd {
                    return Err(Error::InvalidInput(format!(
                        "{name} contains a term of the wrong parity: {}",
                        GradedPolynomial::from_monomial(ring, 1, m.clone())
                    )));
                }
            }
        }
        Ok(FormalGroupLaw { odd, even })
    }

    /// Parses both components over `ring`.
    pub fn parse(odd: &str, even: &str, ring: &Ring) -> Result<Self> {
        Self::new(
            GradedPolynomial::parse(odd, ring)?,
            GradedPolynomial::parse(even, ring)?,
        )
    }

    /// `F1 = e1 + e2`, `F2 = x1 + x2` over plain 𝔽_p.
    pub fn additive(prime: Prime, truncation: u32) -> Result<Self> {
        let ring = law_ring(prime, truncation, vec![])?;
        Self::parse("e1 + e2", "x1 + x2", &ring)
    }

    /// `F1 = e1 + e2`, `F2 = x1 + x2 + x1*x2` over plain 𝔽_p.
    pub fn multiplicative_even(prime: Prime, truncation: u32) -> Result<Self> {
        let ring = law_ring(prime, truncation, vec![])?;
        Self::parse("e1 + e2", "x1 + x2 + x1*x2", &ring)
    }

    /// `F1`.
    pub fn odd(&self) -> &GradedPolynomial {
        &self.odd
    }

    /// `F2`.
    pub fn even(&self) -> &GradedPolynomial {
        &self.even
    }

    pub fn ring(&self) -> &Ring {
        self.odd.ring()
    }

    pub fn prime(&self) -> Prime {
        self.ring().prime()
    }

    pub fn truncation(&self) -> u32 {
        self.ring().truncation()
    }

    /// The same law viewed at another truncation.
    pub fn with_truncation(&self, truncation: u32) -> Result<Self> {
        let ring = self.ring().with_truncation(truncation)?;
        Self::new(self.odd.embed(&ring)?, self.even.embed(&ring)?)
    }

    /// A ring sharing this law's symbols, modulus, truncation and grading.
    pub fn companion_ring(&self, variables: &[(&str, u32)]) -> Result<Ring> {
        let ring = self.ring();
        let variables = variables
            .iter()
            .map(|&(n, d)| GradedVariable::new(n, d))
            .collect::<Result<_>>()?;
        RingDescriptor::new(
            ring.prime(),
            ring.symbols().to_vec(),
            variables,
            ring.truncation(),
            ring.grading(),
        )
    }

    /// `F(left, right)` computed in `target`.
    pub fn apply(
        &self,
        target: &Ring,
        left: &SeriesPair,
        right: &SeriesPair,
    ) -> Result<SeriesPair> {
        let images = [
            left.even.clone(),
            right.even.clone(),
            left.odd.clone(),
            right.odd.clone(),
        ];
        Ok(SeriesPair {
            odd: self.odd.substitute(target, &images)?,
            even: self.even.substitute(target, &images)?,
        })
    }

    fn components(&self) -> SeriesPair {
        SeriesPair::new(self.odd.clone(), self.even.clone())
    }

    /// `(F(ξ1, 0) - ξ1, F(0, ξ2) - ξ2)` in the law's ring.
    pub fn unit_defects(&self) -> Result<(SeriesPair, SeriesPair)> {
        let ring = self.ring();
        let zero = SeriesPair::zero(ring);
        let xi1 = SeriesPair::point(ring, "x1", "e1")?;
        let xi2 = SeriesPair::point(ring, "x2", "e2")?;
        let right = self.apply(ring, &xi1, &zero)?.sub(&xi1)?;
        let left = self.apply(ring, &zero, &xi2)?.sub(&xi2)?;
        Ok((right, left))
    }

    /// `F(ξ1, F(ξ2, ξ3)) - F(F(ξ1, ξ2), ξ3)` in `x1..x3, e1..e3`.
    pub fn associativity_defect(&self) -> Result<SeriesPair> {
        let ring = self.companion_ring(&[
            ("x1", 2),
            ("x2", 2),
            ("x3", 2),
            ("e1", 1),
            ("e2", 1),
            ("e3", 1),
        ])?;
        let xi1 = SeriesPair::point(&ring, "x1", "e1")?;
        let xi2 = SeriesPair::point(&ring, "x2", "e2")?;
        let xi3 = SeriesPair::point(&ring, "x3", "e3")?;
        let (inner_right, inner_left) = rayon::join(
            || self.apply(&ring, &xi2, &xi3),
            || self.apply(&ring, &xi1, &xi2),
        );
        let (lhs, rhs) = rayon::join(
            || self.apply(&ring, &xi1, &inner_right?),
            || self.apply(&ring, &inner_left?, &xi3),
        );
        lhs?.sub(&rhs?)
    }

    /// `F(ξ2, ξ1) - F(ξ1, ξ2)`.
    pub fn commutativity_defect(&self) -> Result<SeriesPair> {
        self.swapped()?.sub(&self.components())
    }

    /// `F(ξ2, ξ1)`: the swap `x1 <-> x2`, `e1 <-> e2`.
    pub fn swapped(&self) -> Result<SeriesPair> {
        let ring = self.ring();
        let xi1 = SeriesPair::point(ring, "x1", "e1")?;
        let xi2 = SeriesPair::point(ring, "x2", "e2")?;
        self.apply(ring, &xi2, &xi1)
    }

    /// `[k](ξ)` in the ring over a single point `(x, e)`, nesting to the
    /// right: `[1](ξ) = ξ` and `[k](ξ) = F(ξ, [k-1](ξ))`.
    pub fn multiple(&self, k: u32) -> Result<SeriesPair> {
        self.iterate(k, false)
    }

    /// `[k](ξ)` nested to the left: `[k](ξ) = F([k-1](ξ), ξ)`.
    pub fn multiple_left_nested(&self, k: u32) -> Result<SeriesPair> {
        self.iterate(k, true)
    }

    fn iterate(&self, k: u32, left_nested: bool) -> Result<SeriesPair> {
        let ring = self.point_ring()?;
        let xi = SeriesPair::point(&ring, "x", "e")?;
        if k == 0 {
            return Ok(SeriesPair::zero(&ring));
        }
        let mut acc = xi.clone();
        for _ in 1..k {
            acc = if left_nested {
                self.apply(&ring, &acc, &xi)?
            } else {
                self.apply(&ring, &xi, &acc)?
            };
        }
        Ok(acc)
    }

    /// The ring over one point `(x, e)` with this law's symbols.
    pub fn point_ring(&self) -> Result<Ring> {
        self.companion_ring(&[("x", 2), ("e", 1)])
    }

    /// `[p](ξ)`, the p-fold iterate.
    pub fn p_series(&self) -> SeriesPair {
        self.multiple(self.prime().get())
            .expect("a well-formed law substitutes into its own rings")
    }

    pub fn check_unit(&self) -> AxiomCheck {
        let (right, left) = self.unit_defects().expect("well-formed law");
        let check = AxiomCheck::from_defect(Axiom::Unit, &right);
        if check.passed() {
            AxiomCheck::from_defect(Axiom::Unit, &left)
        } else {
            check
        }
    }

    pub fn check_associativity(&self) -> AxiomCheck {
        AxiomCheck::from_defect(
            Axiom::Associativity,
            &self.associativity_defect().expect("well-formed law"),
        )
    }

    pub fn check_commutativity(&self) -> AxiomCheck {
        AxiomCheck::from_defect(
            Axiom::Commutativity,
            &self.commutativity_defect().expect("well-formed law"),
        )
    }

    pub fn check_p_series(&self) -> AxiomCheck {
        AxiomCheck::from_defect(Axiom::PSeries, &self.p_series())
    }

    /// `F2` must not involve `e1` or `e2`.
    pub fn check_e_independence(&self) -> AxiomCheck {
        let ring = self.ring();
        let e = [ring.index_of("e1"), ring.index_of("e2")].map(|i| i.expect("law variable"));
        let offending = self
            .even
            .geometric_coefficients()
            .into_iter()
            .find(|(m, _)| e.iter().any(|&i| m.exponents()[i] > 0));
        match offending {
            None => AxiomCheck::pass(Axiom::EIndependence),
            Some((m, c)) => {
                AxiomCheck::offending(Axiom::EIndependence, Status::Fail, Component::F2, &m, &c)
            }
        }
    }

    /// Every term of `F1` has geometric degree one above its symbol degree,
    /// and every term of `F2` two above. Over plain 𝔽_p a violation means the
    /// law is simply ungraded, reported as not applicable.
    pub fn check_homogeneity(&self) -> AxiomCheck {
        let ring = self.ring();
        for (component, poly, shift) in [
            (Component::F1, &self.odd, 1i64),
            (Component::F2, &self.even, 2i64),
        ] {
            for (m, c) in poly.terms() {
                let geo = geometric_degree(ring, m) as i64;
                let sym = m.degree() as i64 - geo;
                if geo - sym != shift {
                    let status = if ring.symbols().is_empty() {
                        Status::NotApplicable
                    } else {
                        Status::Fail
                    };
                    let (geo_m, coeff) = split_term(ring, m, c);
                    return AxiomCheck::offending(
                        Axiom::Homogeneity,
                        status,
                        component,
                        &geo_m,
                        &coeff,
                    );
                }
            }
        }
        AxiomCheck::pass(Axiom::Homogeneity)
    }

    pub fn check_all(&self) -> AxiomReport {
        let (assoc, rest) = rayon::join(
            || self.check_associativity(),
            || {
                [
                    self.check_unit(),
                    self.check_commutativity(),
                    self.check_p_series(),
                    self.check_e_independence(),
                    self.check_homogeneity(),
                ]
            },
        );
        let [unit, comm, pser, eind, homog] = rest;
        let checks = vec![unit, assoc, comm, pser, eind, homog];
        let passed = checks
            .iter()
            .filter(|c| Axiom::DEFINING.contains(&c.axiom))
            .all(AxiomCheck::passed);
        AxiomReport {
            prime: self.prime(),
            truncation: self.truncation(),
            notice: UNIT_NOTICE,
            checks,
            passed,
        }
    }

    /// Text in the `.fgl` law file format.
    pub fn to_law_file(&self) -> String {
        format!(
            "prime: {}\ntruncation: {}\nF1 = {}\nF2 = {}\n",
            self.prime(),
            self.truncation(),
            self.odd,
            self.even
        )
    }
}

fn geometric_degree(ring: &RingDescriptor, m: &Monomial) -> u32 {
    let k = ring.symbols().len();
    m.exponents()[k..]
        .iter()
        .zip(ring.variables())
        .map(|(&e, v)| e as u32 * v.degree())
        .sum()
}

/// Splits one canonical term into its geometric monomial and symbol coefficient.
fn split_term(ring: &Ring, m: &Monomial, c: u32) -> (Monomial, GradedPolynomial) {
    GradedPolynomial::from_monomial(ring, c as i64, m.clone())
        .geometric_coefficients()
        .into_iter()
        .next()
        .expect("single nonzero term")
}

/// Parses a `.fgl` law file.
///
/// ```text
/// prime: 3
/// truncation: 8
/// F1 = e1 + e2
/// F2 = x1 + x2 + x1*x2
/// ```
///
/// Blank lines and lines starting with `#` are ignored. `truncation`, when
/// given, replaces the header value.
pub fn parse_law_file(text: &str, truncation: Option<u32>) -> Result<FormalGroupLaw> {
    let mut prime = None;
    let mut header_truncation = None;
    let mut components: [Option<(usize, usize, String)>; 2] = [None, None];
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw.len() - raw.trim_start().len();
        if let Some((key, value)) = trimmed.split_once(':') {
            let key = key.trim();
            let col = indent + trimmed.find(':').unwrap() + 2;
            let parsed: u64 = value.trim().parse().map_err(|_| {
                Error::parse(line_no, col, format!("`{key}` needs a nonnegative integer"))
            })?;
            match key {
                "prime" => prime = Some((line_no, parsed)),
                "truncation" => {
                    let d = u32::try_from(parsed)
                        .map_err(|_| Error::parse(line_no, col, "truncation is too large"))?;
                    header_truncation = Some(d);
                }
                _ => {
                    return Err(Error::parse(
                        line_no,
                        indent + 1,
                        format!("unknown header `{key}`"),
                    ))
                }
            }
        } else if let Some((lhs, rhs)) = trimmed.split_once('=') {
            let slot = match lhs.trim() {
                "F1" => 0,
                "F2" => 1,
                other => {
                    return Err(Error::parse(
                        line_no,
                        indent + 1,
                        format!("expected `F1 =` or `F2 =`, found `{other}`"),
                    ))
                }
            };
            if components[slot].is_some() {
                return Err(Error::parse(
                    line_no,
                    indent + 1,
                    format!("F{} is defined twice", slot + 1),
                ));
            }
            let col = indent + trimmed.find('=').unwrap() + 2;
            components[slot] = Some((line_no, col, rhs.to_string()));
        } else {
            return Err(Error::parse(
                line_no,
                indent + 1,
                "expected `key: value` or `F1 = ...` / `F2 = ...`",
            ));
        }
    }
    let last_line = text.lines().count().max(1);
    let (prime_line, p) =
        prime.ok_or_else(|| Error::parse(last_line, 1, "missing `prime:` header"))?;
    let prime = Prime::new(p).map_err(|e| Error::parse(prime_line, 1, e.to_string()))?;
    let truncation = truncation
        .or(header_truncation)
        .ok_or_else(|| Error::parse(last_line, 1, "missing `truncation:` header"))?;
    let ring = law_ring(prime, truncation, vec![])?;
    let mut parsed = Vec::with_capacity(2);
    for (slot, entry) in components.into_iter().enumerate() {
        let (line, col, text) = entry
            .ok_or_else(|| Error::parse(last_line, 1, format!("missing `F{} =` line", slot + 1)))?;
        parsed.push(GradedPolynomial::parse_at(&text, &ring, line, col)?);
    }
    let even = parsed.pop().unwrap();
    let odd = parsed.pop().unwrap();
    FormalGroupLaw::new(odd, even)
}
