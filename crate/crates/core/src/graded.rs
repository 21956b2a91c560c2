//! Truncated graded-commutative polynomials over 𝔽_p.
//!
//! A ring is described by two ordered blocks of graded generators: the
//! coefficient *symbols* and the *geometric* variables. Monomials are stored in
//! canonical form, symbols first and then geometric variables, each block in
//! declaration order. Odd generators anticommute and square to zero, so every
//! reordering of a product picks up the Koszul sign `(-1)^t`, where `t` counts
//! transpositions of two odd factors.
//!
//! Terms whose degree exceeds the truncation bound are discarded. The degree
//! used for truncation is either the total degree or only the degree in the
//! geometric variables; see [`TruncationGrading`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fp::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedVariable {
    name: String,
    degree: u32,
}

impl GradedVariable {
    pub fn new(name: impl Into<String>, degree: u32) -> Result<Self> {
        let name = name.into();
        if degree == 0 {
            return Err(Error::InvalidInput(format!(
                "variable `{name}` must have positive degree"
            )));
        }
        if !is_identifier(&name) {
            return Err(Error::InvalidInput(format!(
                "`{name}` is not a valid identifier"
            )));
        }
        Ok(GradedVariable { name, degree })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Which degree is bounded by the truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TruncationGrading {
    /// Symbol degree plus geometric degree.
    Total,
    /// Degree in the geometric variables only; symbols count as degree 0.
    Geometric,
}

/// The ambient ring: symbols, geometric variables, modulus and truncation.
#[derive(Debug, Clone)]
pub struct RingDescriptor {
    prime: Prime,
    symbols: Vec<GradedVariable>,
    variables: Vec<GradedVariable>,
    truncation: u32,
    grading: TruncationGrading,
    degrees: Vec<u32>,
    weights: Vec<u32>,
    odd: Vec<bool>,
    index: HashMap<String, usize>,
}

pub type Ring = Arc<RingDescriptor>;

impl PartialEq for RingDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.prime == other.prime
            && self.truncation == other.truncation
            && self.grading == other.grading
            && self.symbols == other.symbols
            && self.variables == other.variables
    }
}

impl Eq for RingDescriptor {}

impl RingDescriptor {
    pub fn new(
        prime: Prime,
        symbols: Vec<GradedVariable>,
        variables: Vec<GradedVariable>,
        truncation: u32,
        grading: TruncationGrading,
    ) -> Result<Ring> {
        let mut index = HashMap::new();
        for (i, v) in symbols.iter().chain(&variables).enumerate() {
            if index.insert(v.name.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate variable name `{}`",
                    v.name
                )));
            }
        }
        if let Some(v) = variables.iter().find(|v| v.degree > truncation) {
            return Err(Error::InvalidInput(format!(
                "truncation {truncation} is below the degree of `{}`",
                v.name
            )));
        }
        let all = symbols.iter().chain(&variables);
        let degrees: Vec<u32> = all.clone().map(|v| v.degree).collect();
        let odd = all.map(GradedVariable::is_odd).collect();
        let weights = match grading {
            TruncationGrading::Total => degrees.clone(),
            TruncationGrading::Geometric => symbols
                .iter()
                .map(|_| 0)
                .chain(variables.iter().map(|v| v.degree))
                .collect(),
        };
        Ok(Arc::new(RingDescriptor {
            prime,
            symbols,
            variables,
            truncation,
            grading,
            degrees,
            weights,
            odd,
            index,
        }))
    }

    /// A ring with only geometric variables, truncated by total degree.
    pub fn plain(prime: Prime, variables: &[(&str, u32)], truncation: u32) -> Result<Ring> {
        let variables = variables
            .iter()
            .map(|&(n, d)| GradedVariable::new(n, d))
            .collect::<Result<_>>()?;
        Self::new(
            prime,
            vec![],
            variables,
            truncation,
            TruncationGrading::Total,
        )
    }

    /// Same generators and grading with a different truncation bound.
    pub fn with_truncation(&self, truncation: u32) -> Result<Ring> {
        Self::new(
            self.prime,
            self.symbols.clone(),
            self.variables.clone(),
            truncation,
            self.grading,
        )
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn symbols(&self) -> &[GradedVariable] {
        &self.symbols
    }

    pub fn variables(&self) -> &[GradedVariable] {
        &self.variables
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn grading(&self) -> TruncationGrading {
        self.grading
    }

    /// Number of generators (symbols and geometric variables together).
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Position of a generator in the canonical order.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn generator(&self, index: usize) -> &GradedVariable {
        let k = self.symbols.len();
        if index < k {
            &self.symbols[index]
        } else {
            &self.variables[index - k]
        }
    }

    pub fn is_symbol(&self, index: usize) -> bool {
        index < self.symbols.len()
    }

    /// Builds a monomial from an exponent vector in canonical order.
    ///
    /// Returns `Ok(None)` when the monomial vanishes: an odd generator with
    /// exponent above one, or a degree beyond the truncation.
    pub fn monomial(&self, exponents: Vec<u16>) -> Result<Option<Monomial>> {
        if exponents.len() != self.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} exponents, got {}",
                self.len(),
                exponents.len()
            )));
        }
        let m = self.raw_monomial(exponents.into_boxed_slice());
        if m.exps.iter().zip(&self.odd).any(|(&e, &o)| o && e > 1) {
            return Ok(None);
        }
        Ok((m.weight <= self.truncation).then_some(m))
    }

    /// Monomial given by `(name, exponent)` pairs, listed in any order.
    ///
    /// The factors are multiplied in the given order, so a listing that
    /// disagrees with canonical order yields a sign; it is returned alongside.
    pub fn monomial_by_names(&self, factors: &[(&str, u16)]) -> Result<Option<(Monomial, bool)>> {
        let mut acc = Some((
            self.raw_monomial(vec![0; self.len()].into_boxed_slice()),
            false,
        ));
        for &(name, e) in factors {
            let i = self
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            for _ in 0..e {
                let Some((m, neg)) = acc else { break };
                let mut exps = vec![0; self.len()];
                exps[i] = 1;
                let single = self.raw_monomial(exps.into_boxed_slice());
                acc = self.mul_monomials(&m, &single).map(|(p, s)| (p, s ^ neg));
            }
        }
        Ok(acc.filter(|(m, _)| m.weight <= self.truncation))
    }

    fn raw_monomial(&self, exps: Box<[u16]>) -> Monomial {
        let mut degree = 0;
        let mut weight = 0;
        for (i, &e) in exps.iter().enumerate() {
            degree += self.degrees[i] * e as u32;
            weight += self.weights[i] * e as u32;
        }
        Monomial {
            degree,
            weight,
            exps,
        }
    }

    /// Product of canonical monomials with its Koszul sign (`true` = negative).
    /// `None` if an odd generator repeats or the product is truncated.
    pub(crate) fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        let weight = a.weight + b.weight;
        if weight > self.truncation {
            return None;
        }
        let n = self.len();
        let mut exps = Vec::with_capacity(n);
        // Each odd factor of `b` moves left past the odd factors of `a` that
        // come later in canonical order.
        let mut odd_a_after = 0u32;
        let mut swaps = 0u32;
        for i in (0..n).rev() {
            if self.odd[i] {
                if a.exps[i] + b.exps[i] > 1 {
                    return None;
                }
                if b.exps[i] == 1 {
                    swaps += odd_a_after;
                }
                if a.exps[i] == 1 {
                    odd_a_after += 1;
                }
            }
        }
        exps.extend(a.exps.iter().zip(b.exps.iter()).map(|(x, y)| x + y));
        Some((
            Monomial {
                degree: a.degree + b.degree,
                weight,
                exps: exps.into_boxed_slice(),
            },
            swaps % 2 == 1,
        ))
    }

    fn check_same(&self, other: &RingDescriptor) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch(
                "operands live in different rings".into(),
            ))
        }
    }
}

/// Exponent vector over all generators of a ring, in canonical order.
///
/// Ordered by total degree, then by reverse lexicographic comparison of the
/// exponents, so `x1` sorts before `x2` and lower degrees come first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    weight: u32,
    exps: Box<[u16]>,
}

impl Monomial {
    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    /// Total degree.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Degree under the ring's truncation grading.
    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A truncated polynomial: canonical monomials with nonzero coefficients.
#[derive(Clone)]
pub struct GradedPolynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, u32>,
}

impl PartialEq for GradedPolynomial {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
            && self.terms == other.terms
    }
}

impl Eq for GradedPolynomial {}

impl fmt::Debug for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedPolynomial({self})")
    }
}

impl GradedPolynomial {
    pub fn zero(ring: &Ring) -> Self {
        GradedPolynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Ring, c: i64) -> Self {
        let mut out = Self::zero(ring);
        let m = ring.raw_monomial(vec![0; ring.len()].into_boxed_slice());
        out.add_term(m, ring.prime.reduce(c));
        out
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, 1)
    }

    /// The generator called `name`, or zero if it lies beyond the truncation.
    pub fn var(ring: &Ring, name: &str) -> Result<Self> {
        Self::term(ring, 1, &[(name, 1)])
    }

    /// `coeff` times the product of the listed factors, taken in the order given.
    pub fn term(ring: &Ring, coeff: i64, factors: &[(&str, u16)]) -> Result<Self> {
        let mut out = Self::zero(ring);
        if let Some((m, neg)) = ring.monomial_by_names(factors)? {
            let c = ring.prime.reduce(if neg { -coeff } else { coeff });
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn from_monomial(ring: &Ring, coeff: i64, monomial: Monomial) -> Self {
        let mut out = Self::zero(ring);
        if monomial.weight <= ring.truncation {
            out.add_term(monomial, ring.prime.reduce(coeff));
        }
        out
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, u32)> {
        self.terms.iter().next().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> u32 {
        self.terms
            .iter()
            .next()
            .filter(|(m, _)| m.is_one())
            .map_or(0, |(_, &c)| c)
    }

    fn add_term(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let p = self.ring.prime;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = p.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(self.ring.prime.get() - 1)
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.ring.prime;
        let c = c % p.get();
        if c == 0 {
            return Self::zero(&self.ring);
        }
        GradedPolynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, &v)| (m.clone(), p.mul(v, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let ring = &self.ring;
        let p = ring.prime;
        let mut acc: HashMap<Monomial, u32> = HashMap::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                if let Some((m, neg)) = ring.mul_monomials(a, b) {
                    let mut c = p.mul(ca, cb);
                    if neg {
                        c = p.neg(c);
                    }
                    let slot = acc.entry(m).or_insert(0);
                    *slot = p.add(*slot, c);
                }
            }
        }
        GradedPolynomial {
            ring: ring.clone(),
            terms: acc.into_iter().filter(|&(_, c)| c != 0).collect(),
        }
    }

    /// `c * m * self` for a single monomial `m` on the left.
    fn left_mul_monomial(&self, m: &Monomial, c: u32, into: &mut HashMap<Monomial, u32>) {
        let ring = &self.ring;
        let p = ring.prime;
        for (b, &cb) in &self.terms {
            if let Some((prod, neg)) = ring.mul_monomials(m, b) {
                let mut v = p.mul(c, cb);
                if neg {
                    v = p.neg(v);
                }
                let slot = into.entry(prod).or_insert(0);
                *slot = p.add(*slot, v);
            }
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..n {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Drops every term whose truncation degree exceeds `bound`.
    pub fn truncated(&self, bound: u32) -> Self {
        GradedPolynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight <= bound)
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }

    /// Re-expresses this polynomial in another ring, matching generators by
    /// name. Generators must keep their degree; factors are re-sorted into
    /// the target's canonical order (with Koszul sign) and terms beyond the
    /// target truncation are dropped.
    pub fn embed(&self, target: &Ring) -> Result<Self> {
        if self.ring.prime != target.prime {
            return Err(Error::RingMismatch("different primes".into()));
        }
        let map = generator_map(&self.ring, target, 0..self.ring.len(), false)?;
        let mut out = Self::zero(target);
        for (m, &c) in &self.terms {
            if let Some(i) = (0..m.exps.len()).find(|&i| m.exps[i] > 0 && map[i].is_none()) {
                return Err(Error::UnknownVariable(self.ring.generator(i).name.clone()));
            }
            if let Some((tm, neg)) = map_monomial(&self.ring, target, &map, m) {
                out.add_term(tm, if neg { target.prime.neg(c) } else { c });
            }
        }
        Ok(out)
    }

    /// Ring homomorphism that fixes the symbols and sends the `i`-th geometric
    /// variable to `images[i]`.
    ///
    /// Symbols are matched by name in the target ring. Every image must live
    /// in `target`, have no term of truncation degree zero, and consist of
    /// terms whose parity matches the variable it replaces.
    pub fn substitute(&self, target: &Ring, images: &[GradedPolynomial]) -> Result<Self> {
        let src = &self.ring;
        let k = src.symbols.len();
        if images.len() != src.variables.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} images, got {}",
                src.variables.len(),
                images.len()
            )));
        }
        if src.prime != target.prime {
            return Err(Error::RingMismatch("different primes".into()));
        }
        for (var, img) in src.variables.iter().zip(images) {
            let err = |reason: &str| Error::Substitution {
                variable: var.name.clone(),
                reason: reason.into(),
            };
            if *img.ring != **target {
                return Err(err("image is not in the target ring"));
            }
            if img.terms.keys().any(|m| m.weight == 0) {
                return Err(err("image has a nonzero constant term"));
            }
            if img
                .terms
                .keys()
                .any(|m| (m.degree % 2 == 1) != var.is_odd())
            {
                return Err(err("image parity differs from the variable's parity"));
            }
        }
        let symbol_map = generator_map(src, target, 0..k, true)?;

        // Group the terms by their geometric part so each product of powers
        // is computed once.
        let mut groups: BTreeMap<Vec<u16>, Vec<(Monomial, u32)>> = BTreeMap::new();
        for (m, &c) in &self.terms {
            groups
                .entry(m.exps[k..].to_vec())
                .or_default()
                .push((m.clone(), c));
        }

        let mut powers: Vec<Vec<GradedPolynomial>> = images
            .iter()
            .map(|img| vec![GradedPolynomial::one(target), img.clone()])
            .collect();
        let mut cache: HashMap<Vec<u16>, GradedPolynomial> = HashMap::new();
        let mut acc: HashMap<Monomial, u32> = HashMap::new();
        for (geo, terms) in groups {
            let image = geometric_image(&geo, &mut powers, &mut cache);
            for (m, c) in terms {
                let Some((sym, neg)) = map_monomial(
                    src,
                    target,
                    &symbol_map,
                    &src.raw_monomial(m.symbol_exponents(k)),
                ) else {
                    continue;
                };
                let c = if neg { target.prime.neg(c) } else { c };
                image.left_mul_monomial(&sym, c, &mut acc);
            }
        }
        Ok(GradedPolynomial {
            ring: target.clone(),
            terms: acc.into_iter().filter(|&(_, c)| c != 0).collect(),
        })
    }

    /// The symbol polynomial multiplying the geometric monomial `m`.
    ///
    /// `m` must involve geometric variables only. The result lives in the
    /// same ring and has no geometric factors.
    pub fn coefficient_of(&self, m: &Monomial) -> Result<Self> {
        let k = self.ring.symbols.len();
        if m.exps.len() != self.ring.len() {
            return Err(Error::RingMismatch("monomial from another ring".into()));
        }
        if m.exps[..k].iter().any(|&e| e != 0) {
            return Err(Error::InvalidInput(
                "coefficient_of expects a monomial in the geometric variables".into(),
            ));
        }
        let target = &m.exps[k..];
        let mut out = Self::zero(&self.ring);
        for (t, &c) in &self.terms {
            if &t.exps[k..] == target {
                // Canonical form already has every symbol to the left.
                out.add_term(self.ring.raw_monomial(t.symbol_exponents(k)), c);
            }
        }
        Ok(out)
    }

    /// All geometric monomials occurring in this polynomial, each with its
    /// symbol coefficient, in ascending order of the geometric monomial.
    pub fn geometric_coefficients(&self) -> Vec<(Monomial, GradedPolynomial)> {
        let k = self.ring.symbols.len();
        let mut groups: BTreeMap<Monomial, GradedPolynomial> = BTreeMap::new();
        for (t, &c) in &self.terms {
            let mut geo = vec![0; self.ring.len()];
            geo[k..].copy_from_slice(&t.exps[k..]);
            let geo = self.ring.raw_monomial(geo.into_boxed_slice());
            groups
                .entry(geo)
                .or_insert_with(|| Self::zero(&self.ring))
                .add_term(self.ring.raw_monomial(t.symbol_exponents(k)), c);
        }
        groups.into_iter().collect()
    }

    /// Parses the polynomial grammar:
    ///
    /// ```text
    /// expression := term ('+' term)*
    /// term       := coeff ('*' factor)* | factor ('*' factor)*
    /// factor     := ident ('^' posint)?
    /// ```
    ///
    /// Integer coefficients may be negative and are reduced mod p. A `-`
    /// between terms is read as `+ -1*`.
    pub fn parse(text: &str, ring: &Ring) -> Result<Self> {
        crate::parse::parse_polynomial(text, ring, 1, 1)
    }

    /// Like [`parse`](Self::parse), reporting positions relative to a line and
    /// column in a larger file.
    pub fn parse_at(text: &str, ring: &Ring, line: usize, column: usize) -> Result<Self> {
        crate::parse::parse_polynomial(text, ring, line, column)
    }

    /// Whether every term has the same total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|m| m.degree);
        match degrees.next() {
            Some(d) => degrees.all(|e| e == d),
            None => true,
        }
    }

    /// Evaluates every symbol at zero, keeping the symbol-free terms.
    pub fn symbols_to_zero(&self) -> Self {
        let k = self.ring.symbols.len();
        GradedPolynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exps[..k].iter().all(|&e| e == 0))
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }
}

impl Monomial {
    /// Exponents with every geometric slot (index `k` onwards) cleared.
    fn symbol_exponents(&self, k: usize) -> Box<[u16]> {
        let mut exps = self.exps.clone();
        exps[k..].fill(0);
        exps
    }
}

fn geometric_image(
    geo: &[u16],
    powers: &mut [Vec<GradedPolynomial>],
    cache: &mut HashMap<Vec<u16>, GradedPolynomial>,
) -> GradedPolynomial {
    if let Some(hit) = cache.get(geo) {
        return hit.clone();
    }
    // Product over variables in declaration order; reuse the image of the
    // monomial with the last nonzero exponent removed.
    let result = match geo.iter().rposition(|&e| e != 0) {
        None => GradedPolynomial::one(powers[0][0].ring()),
        Some(last) => {
            let mut prefix = geo.to_vec();
            let e = prefix[last] as usize;
            prefix[last] = 0;
            let head = geometric_image(&prefix, powers, cache);
            let pows = &mut powers[last];
            while pows.len() <= e {
                let next = pows[pows.len() - 1].mul_unchecked(&pows[1]);
                pows.push(next);
            }
            head.mul_unchecked(&pows[e])
        }
    };
    cache.insert(geo.to_vec(), result.clone());
    result
}

/// Target index of each source generator in `range`, matched by name.
/// Missing names are an error only when `required` is set.
fn generator_map(
    src: &RingDescriptor,
    target: &RingDescriptor,
    range: std::ops::Range<usize>,
    required: bool,
) -> Result<Vec<Option<usize>>> {
    let mut map = vec![None; src.len()];
    for i in range {
        let g = src.generator(i);
        let Some(j) = target.index_of(&g.name) else {
            if required {
                return Err(Error::UnknownVariable(g.name.clone()));
            }
            continue;
        };
        if target.generator(j).degree != g.degree {
            return Err(Error::RingMismatch(format!(
                "`{}` has degree {} in one ring and {} in the other",
                g.name,
                g.degree,
                target.generator(j).degree
            )));
        }
        map[i] = Some(j);
    }
    Ok(map)
}

/// Moves a monomial along `map`, returning it with the sign from re-sorting
/// its odd factors into the target order.
fn map_monomial(
    src: &RingDescriptor,
    target: &RingDescriptor,
    map: &[Option<usize>],
    m: &Monomial,
) -> Option<(Monomial, bool)> {
    let mut exps = vec![0u16; target.len()];
    let mut odd_positions = Vec::new();
    for (i, &e) in m.exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let j = map[i]?;
        exps[j] += e;
        if src.odd[i] {
            odd_positions.push(j);
        }
    }
    let mut inversions = 0usize;
    for a in 0..odd_positions.len() {
        for b in a + 1..odd_positions.len() {
            if odd_positions[a] > odd_positions[b] {
                inversions += 1;
            }
        }
    }
    let tm = target.raw_monomial(exps.into_boxed_slice());
    (tm.weight <= target.truncation).then_some((tm, inversions % 2 == 1))
}

impl fmt::Display for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, &c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let mut factors = Vec::new();
            for (i, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.generator(i).name.clone()),
                    _ => factors.push(format!("{}^{}", self.ring.generator(i).name, e)),
                }
            }
            if factors.is_empty() || c != 1 {
                factors.insert(0, c.to_string());
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law_ring(p: u64, d: u32) -> Ring {
        RingDescriptor::plain(
            Prime::new(p).unwrap(),
            &[("x1", 2), ("x2", 2), ("e1", 1), ("e2", 1)],
            d,
        )
        .unwrap()
    }

    fn poly(text: &str, ring: &Ring) -> GradedPolynomial {
        GradedPolynomial::parse(text, ring).unwrap()
    }

    #[test]
    fn add_examples() {
        let r = law_ring(3, 8);
        let zero = GradedPolynomial::zero(&r);
        let e1 = poly("e1", &r);
        assert_eq!(e1.add(&zero).unwrap(), e1);
        assert!(poly("2*x1", &r).add(&poly("x1", &r)).unwrap().is_zero());
        assert_eq!(poly("e1 + e2", &r).add(&e1).unwrap(), poly("2*e1 + e2", &r));
    }

    #[test]
    fn mul_examples() {
        let r = law_ring(3, 8);
        let e1 = poly("e1", &r);
        let e2 = poly("e2", &r);
        assert!(e1.mul(&e1).unwrap().is_zero());
        assert_eq!(e2.mul(&e1).unwrap(), poly("2*e1*e2", &r));
        assert_eq!(e2.mul(&e1).unwrap().to_string(), "2*e1*e2");
        let s = poly("x1 + x2", &r);
        assert_eq!(s.mul(&s).unwrap(), poly("x1^2 + 2*x1*x2 + x2^2", &r));
    }

    #[test]
    fn mul_truncates() {
        let r = law_ring(5, 4);
        let x = poly("x1 + e1", &r);
        // x1^2 has degree 4, x1*e1 degree 3; x1^3 would be 6.
        let sq = x.mul(&x).unwrap();
        assert_eq!(sq, poly("x1^2 + 2*x1*e1", &r));
        assert!(sq.mul(&x).unwrap().is_zero());
    }

    #[test]
    fn descriptor_mismatch() {
        let a = law_ring(3, 8);
        let b = law_ring(3, 6);
        let err = poly("x1", &a).add(&poly("x1", &b)).unwrap_err();
        assert!(matches!(err, Error::RingMismatch(_)));
        assert!(poly("x1", &a).mul(&poly("x1", &b)).is_err());
    }

    #[test]
    fn substitute_examples() {
        let p = Prime::new(3).unwrap();
        let src = law_ring(3, 3);
        let one = RingDescriptor::plain(p, &[("x", 2), ("e", 1)], 3).unwrap();
        let x = poly("x", &one);
        let e = poly("e", &one);
        let zero = GradedPolynomial::zero(&one);

        let f = poly("e1 + e2", &src);
        let got = f
            .substitute(&one, &[x.clone(), x, e.clone(), zero])
            .unwrap();
        assert_eq!(got, e);

        // x1*x2 with x1, x2 -> x, at a truncation that keeps x^2.
        let src6 = law_ring(3, 6);
        let one6 = RingDescriptor::plain(p, &[("x", 2), ("e", 1)], 6).unwrap();
        let x6 = poly("x", &one6);
        let got = poly("x1*x2", &src6)
            .substitute(
                &one6,
                &[
                    x6.clone(),
                    x6.clone(),
                    GradedPolynomial::zero(&one6),
                    GradedPolynomial::zero(&one6),
                ],
            )
            .unwrap();
        assert_eq!(got, poly("x^2", &one6));
    }

    #[test]
    fn substitute_single_variable_oracle() {
        // x1 + x2 + x1*x2 with x1 -> x, x2 -> x + x^2, truncated at x^3.
        // Degree-1 generators would be odd, so the variables sit in degree 2.
        let p = Prime::new(3).unwrap();
        let src = RingDescriptor::plain(p, &[("x1", 2), ("x2", 2)], 6).unwrap();
        let tgt = RingDescriptor::plain(p, &[("x", 2)], 6).unwrap();
        let f = poly("x1 + x2 + x1*x2", &src);
        let got = f
            .substitute(&tgt, &[poly("x", &tgt), poly("x + x^2", &tgt)])
            .unwrap();
        assert_eq!(got, poly("2*x + 2*x^2 + x^3", &tgt));
    }

    #[test]
    fn substitute_rejects_bad_images() {
        let src = law_ring(3, 6);
        let tgt = law_ring(3, 6);
        let vars = |s: &[&str]| s.iter().map(|t| poly(t, &tgt)).collect::<Vec<_>>();
        let f = poly("x1 + e1", &src);
        let err = f
            .substitute(&tgt, &vars(&["e1", "x2", "e1", "e2"]))
            .unwrap_err();
        assert!(matches!(err, Error::Substitution { .. }));
        let err = f
            .substitute(&tgt, &vars(&["1 + x1", "x2", "e1", "e2"]))
            .unwrap_err();
        assert!(matches!(err, Error::Substitution { .. }));
    }

    #[test]
    fn coefficient_of_examples() {
        let p = Prime::new(5).unwrap();
        let ring = RingDescriptor::new(
            p,
            vec![
                GradedVariable::new("s", 2).unwrap(),
                GradedVariable::new("c", 2).unwrap(),
                GradedVariable::new("d", 2).unwrap(),
            ],
            vec![
                GradedVariable::new("x1", 2).unwrap(),
                GradedVariable::new("x2", 2).unwrap(),
                GradedVariable::new("e1", 1).unwrap(),
            ],
            12,
            TruncationGrading::Total,
        )
        .unwrap();
        let mono = |f: &[(&str, u16)]| ring.monomial_by_names(f).unwrap().unwrap().0;
        let x1 = mono(&[("x1", 1)]);
        let f = poly("s*x1 + e1", &ring);
        assert_eq!(f.coefficient_of(&x1).unwrap(), poly("s", &ring));
        assert!(poly("e1", &ring).coefficient_of(&x1).unwrap().is_zero());
        let g = poly("c*x1*x2 + d*x1^2", &ring);
        assert_eq!(
            g.coefficient_of(&mono(&[("x1", 1), ("x2", 1)])).unwrap(),
            poly("c", &ring)
        );
        assert!(f.coefficient_of(&mono(&[("s", 1)])).is_err());
    }

    #[test]
    fn odd_symbols_anticommute_past_odd_variables() {
        let p = Prime::new(3).unwrap();
        let ring = RingDescriptor::new(
            p,
            vec![GradedVariable::new("t", 1).unwrap()],
            vec![GradedVariable::new("e1", 1).unwrap()],
            4,
            TruncationGrading::Total,
        )
        .unwrap();
        let t = poly("t", &ring);
        let e = poly("e1", &ring);
        assert_eq!(e.mul(&t).unwrap(), t.mul(&e).unwrap().neg());
        // e1*t written in that order is -t*e1 in canonical form.
        assert_eq!(poly("e1*t", &ring), poly("-1*t*e1", &ring));
    }

    #[test]
    fn embed_resorts_odd_factors() {
        let p = Prime::new(5).unwrap();
        let a = RingDescriptor::plain(p, &[("u", 1), ("v", 1)], 4).unwrap();
        let b = RingDescriptor::plain(p, &[("v", 1), ("u", 1)], 4).unwrap();
        let uv = poly("u*v", &a);
        assert_eq!(uv.embed(&b).unwrap(), poly("4*v*u", &b));
        assert_eq!(uv.embed(&b).unwrap().embed(&a).unwrap(), uv);
    }

    #[test]
    fn display_order() {
        let r = law_ring(3, 8);
        assert_eq!(poly("e1*e2 + x2 + x1", &r).to_string(), "x1 + x2 + e1*e2");
        assert_eq!(poly("2*x1^2*x2", &r).to_string(), "2*x1^2*x2");
        assert_eq!(GradedPolynomial::zero(&r).to_string(), "0");
    }
}
