//! The universal 𝔽_p-formal group law and the graded dimensions of its
//! coefficient ring.
//!
//! [`generic_fgl`] writes down a law whose coefficients are free graded
//! symbols. The unit axiom and the `e`-independence of `F2` are built in by
//! leaving out the monomials they forbid. The other axioms become equations
//! on the symbols: every coefficient of the commutativity, associativity and
//! p-series defects must vanish. Those coefficients generate a homogeneous
//! ideal, and the quotient of the free graded-commutative symbol algebra by it
//! is the mod-p Lazard ring. Its dimension in degree `d` is the number of
//! degree-`d` symbol monomials minus the rank of the span of
//! `{relation * monomial}` in that degree.
//!
//! A relation of symbol degree `s` comes from a geometric monomial of degree
//! `s + 1` (odd component) or `s + 2` (even component), so a geometric
//! truncation of `d_max + 2` captures every relation up to degree `d_max`.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fgl::{law_ring, Axiom, Component, FormalGroupLaw, SeriesPair};
use crate::fp::{Prime, SparseEchelon};
use crate::graded::{
    GradedPolynomial, GradedVariable, Monomial, Ring, RingDescriptor, TruncationGrading,
};

/// One indeterminate coefficient of the generic law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolEntry {
    pub name: String,
    pub component: Component,
    /// Exponents of `x1, x2, e1, e2` in the monomial this symbol multiplies.
    pub monomial: [u16; 4],
    pub degree: u32,
}

impl SymbolEntry {
    fn geometric_degree(&self) -> u32 {
        let [a, b, c, d] = self.monomial.map(u32::from);
        2 * a + 2 * b + c + d
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolTable {
    pub entries: Vec<SymbolEntry>,
}

impl SymbolTable {
    /// Every admissible coefficient up to geometric degree `truncation`.
    ///
    /// `F1` gets one symbol per monomial of degree `2..=truncation` that
    /// involves both points; `F2` one per `x1^i x2^j` with `i, j >= 1`.
    pub fn generic(truncation: u32) -> Self {
        let mut entries = Vec::new();
        let max_x = (truncation / 2) as u16;
        for a in 0..=max_x {
            for b in 0..=max_x {
                for c in 0..=1u16 {
                    for d in 0..=1u16 {
                        let geo = 2 * (a + b) as u32 + (c + d) as u32;
                        let mixed = (a > 0 || c > 0) && (b > 0 || d > 0);
                        if mixed && (2..=truncation).contains(&geo) {
                            entries.push(SymbolEntry {
                                name: format!("f1_{a}_{b}_{c}_{d}"),
                                component: Component::F1,
                                monomial: [a, b, c, d],
                                degree: geo - 1,
                            });
                        }
                        if c == 0 && d == 0 && a > 0 && b > 0 && geo <= truncation {
                            entries.push(SymbolEntry {
                                name: format!("f2_{a}_{b}"),
                                component: Component::F2,
                                monomial: [a, b, 0, 0],
                                degree: geo - 2,
                            });
                        }
                    }
                }
            }
        }
        entries.sort_by(|s, t| {
            (s.degree, s.component as u8, std::cmp::Reverse(s.monomial)).cmp(&(
                t.degree,
                t.component as u8,
                std::cmp::Reverse(t.monomial),
            ))
        });
        SymbolTable { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn variables(&self) -> Vec<GradedVariable> {
        self.entries
            .iter()
            .map(|s| {
                GradedVariable::new(s.name.clone(), s.degree).expect("symbol names are identifiers")
            })
            .collect()
    }
}

/// The law `F1 = e1 + e2 + Σ c·m`, `F2 = x1 + x2 + Σ d·x1^i x2^j` with one
/// free symbol per admissible monomial, truncated at geometric degree
/// `truncation`.
pub fn generic_fgl(prime: Prime, truncation: u32) -> Result<(FormalGroupLaw, SymbolTable)> {
    generic_fgl_from(prime, truncation, SymbolTable::generic(truncation))
}

/// As [`generic_fgl`], declaring the symbols in the order given by `table`.
pub fn generic_fgl_from(
    prime: Prime,
    truncation: u32,
    table: SymbolTable,
) -> Result<(FormalGroupLaw, SymbolTable)> {
    if truncation < 2 {
        return Err(Error::InvalidInput(
            "the generic law needs truncation at least 2".into(),
        ));
    }
    if let Some(s) = table
        .entries
        .iter()
        .find(|s| s.geometric_degree() > truncation)
    {
        return Err(Error::InvalidInput(format!(
            "symbol `{}` lies beyond truncation {truncation}",
            s.name
        )));
    }
    let ring = law_ring(prime, truncation, table.variables())?;
    let mut odd = GradedPolynomial::parse("e1 + e2", &ring)?;
    let mut even = GradedPolynomial::parse("x1 + x2", &ring)?;
    for s in &table.entries {
        let [a, b, c, d] = s.monomial;
        let factors = [
            (s.name.as_str(), 1),
            ("x1", a),
            ("x2", b),
            ("e1", c),
            ("e2", d),
        ];
        let term = GradedPolynomial::term(&ring, 1, &factors)?;
        match s.component {
            Component::F1 => odd = odd.add(&term)?,
            Component::F2 => even = even.add(&term)?,
        }
    }
    Ok((FormalGroupLaw::new(odd, even)?, table))
}

/// A homogeneous generator of the relation ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    /// Polynomial in the symbols only.
    pub poly: GradedPolynomial,
    pub axiom: Axiom,
    pub component: Component,
    /// The geometric monomial whose coefficient this is.
    pub source: String,
    pub degree: u32,
}

/// Generators of the ideal cut out by the axioms, living in the free
/// graded-commutative algebra on the symbols.
#[derive(Debug, Clone)]
pub struct RelationIdeal {
    symbol_ring: Ring,
    truncation: u32,
    relations: Vec<Relation>,
}

impl RelationIdeal {
    /// An ideal with explicitly given generators.
    pub fn new(symbol_ring: Ring, truncation: u32, relations: Vec<Relation>) -> Result<Self> {
        for r in &relations {
            if r.poly.ring() != &symbol_ring {
                return Err(Error::RingMismatch(
                    "relation outside the symbol ring".into(),
                ));
            }
            if !r.poly.is_homogeneous() {
                return Err(Error::InvalidInput(format!(
                    "relation from {} is not homogeneous",
                    r.source
                )));
            }
        }
        Ok(RelationIdeal {
            symbol_ring,
            truncation,
            relations,
        })
    }

    pub fn symbol_ring(&self) -> &Ring {
        &self.symbol_ring
    }

    /// Geometric truncation the relations were extracted at.
    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn push(&mut self, relation: Relation) -> Result<()> {
        if relation.poly.ring() != &self.symbol_ring || !relation.poly.is_homogeneous() {
            return Err(Error::InvalidInput(
                "relation must be a homogeneous symbol polynomial".into(),
            ));
        }
        self.relations.push(relation);
        Ok(())
    }

    /// Graded dimensions of the quotient ring in degrees `0..=max_degree`.
    pub fn hilbert_function(&self, max_degree: u32) -> Result<Vec<DegreeDimension>> {
        let required = max_degree + 2;
        if self.truncation < required {
            return Err(Error::InsufficientTruncation {
                truncation: self.truncation,
                max_degree,
                required,
            });
        }
        let monomials = MonomialBasis::new(&self.symbol_ring, max_degree);
        let generators = self.independent_generators(&monomials, max_degree);
        Ok((0..=max_degree)
            .into_par_iter()
            .map(|d| {
                let columns = monomials.degree(d);
                let mut echelon = SparseEchelon::new(self.symbol_ring.prime());
                for g in &generators {
                    let gd = g.degree();
                    if gd > d {
                        continue;
                    }
                    for m in monomials.degree(d - gd).monomials() {
                        let product = g
                            .mul(&GradedPolynomial::from_monomial(
                                &self.symbol_ring,
                                1,
                                m.clone(),
                            ))
                            .expect("same ring");
                        echelon.insert(columns.row(&product));
                        if echelon.rank() == columns.len() {
                            break;
                        }
                    }
                    if echelon.rank() == columns.len() {
                        break;
                    }
                }
                let rank = echelon.rank();
                DegreeDimension {
                    degree: d,
                    monomials: columns.len(),
                    rank,
                    dimension: columns.len() - rank,
                }
            })
            .collect())
    }

    /// A linearly independent subset of the generators of each degree.
    fn independent_generators(
        &self,
        monomials: &MonomialBasis,
        max_degree: u32,
    ) -> Vec<GradedPolynomial> {
        let mut by_degree: HashMap<u32, Vec<&GradedPolynomial>> = HashMap::new();
        for r in &self.relations {
            if r.degree <= max_degree && !r.poly.is_zero() {
                by_degree.entry(r.degree).or_default().push(&r.poly);
            }
        }
        let mut out = Vec::new();
        for d in 0..=max_degree {
            let Some(gens) = by_degree.get(&d) else {
                continue;
            };
            let columns = monomials.degree(d);
            let mut echelon = SparseEchelon::new(self.symbol_ring.prime());
            for g in gens {
                if echelon.insert(columns.row(g)) {
                    out.push((*g).clone());
                }
            }
        }
        out
    }
}

trait Degree {
    fn degree(&self) -> u32;
}

impl Degree for GradedPolynomial {
    fn degree(&self) -> u32 {
        self.leading_term().map_or(0, |(m, _)| m.degree())
    }
}

/// Symbol monomials of each degree, indexed for use as matrix columns.
struct MonomialBasis {
    by_degree: Vec<DegreeBasis>,
}

struct DegreeBasis {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    fn new(ring: &Ring, max_degree: u32) -> Self {
        let mut lists: Vec<Vec<Monomial>> = vec![Vec::new(); max_degree as usize + 1];
        let degrees: Vec<(u32, bool)> = ring
            .symbols()
            .iter()
            .map(|s| (s.degree(), s.is_odd()))
            .collect();
        let mut exps = vec![0u16; ring.len()];
        enumerate(ring, &degrees, 0, max_degree, &mut exps, &mut lists);
        MonomialBasis {
            by_degree: lists
                .into_iter()
                .map(|mut monomials| {
                    monomials.sort();
                    let index = monomials
                        .iter()
                        .cloned()
                        .enumerate()
                        .map(|(i, m)| (m, i))
                        .collect();
                    DegreeBasis { monomials, index }
                })
                .collect(),
        }
    }

    fn degree(&self, d: u32) -> &DegreeBasis {
        &self.by_degree[d as usize]
    }
}

fn enumerate(
    ring: &Ring,
    degrees: &[(u32, bool)],
    at: usize,
    budget: u32,
    exps: &mut Vec<u16>,
    out: &mut [Vec<Monomial>],
) {
    if at == degrees.len() {
        let m = ring
            .monomial(exps.clone())
            .expect("exponent vector has ring length")
            .expect("enumerated monomials are nonzero");
        out[m.degree() as usize].push(m);
        return;
    }
    let (deg, odd) = degrees[at];
    let max_exp = if odd { 1 } else { budget / deg };
    for e in 0..=max_exp.min(budget / deg) {
        exps[at] = e as u16;
        enumerate(ring, degrees, at + 1, budget - e * deg, exps, out);
    }
    exps[at] = 0;
}

impl DegreeBasis {
    fn len(&self) -> usize {
        self.monomials.len()
    }

    fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    fn row(&self, poly: &GradedPolynomial) -> Vec<(usize, u32)> {
        let mut row: Vec<(usize, u32)> = poly
            .terms()
            .map(|(m, c)| (*self.index.get(m).expect("homogeneous of this degree"), c))
            .collect();
        row.sort_unstable_by_key(|&(i, _)| i);
        row
    }
}

/// Graded dimension of the quotient in one degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeDimension {
    pub degree: u32,
    /// Number of symbol monomials in this degree.
    pub monomials: usize,
    /// Rank of the relation span in this degree.
    pub rank: usize,
    pub dimension: usize,
}

/// The free graded-commutative algebra on the symbols of `table`, truncated
/// by total degree.
fn symbol_ring(prime: Prime, table: &SymbolTable, truncation: u32) -> Result<Ring> {
    RingDescriptor::new(
        prime,
        table.variables(),
        vec![],
        truncation,
        TruncationGrading::Total,
    )
}

/// Every coefficient of the commutativity, associativity and p-series
/// defects of a law built by [`generic_fgl`], together with the (vanishing)
/// unit defects.
pub fn extract_relations(law: &FormalGroupLaw, table: &SymbolTable) -> Result<RelationIdeal> {
    let truncation = law.truncation();
    let target = symbol_ring(law.prime(), table, truncation)?;
    let (unit_right, unit_left) = law.unit_defects()?;
    let ((comm, assoc), pseries) = rayon::join(
        || rayon::join(|| law.commutativity_defect(), || law.associativity_defect()),
        || law.p_series(),
    );
    let mut relations = Vec::new();
    for (axiom, defect) in [
        (Axiom::Unit, unit_right),
        (Axiom::Unit, unit_left),
        (Axiom::Commutativity, comm?),
        (Axiom::Associativity, assoc?),
        (Axiom::PSeries, pseries),
    ] {
        collect_relations(axiom, &defect, &target, &mut relations)?;
    }
    RelationIdeal::new(target, truncation, relations)
}

fn collect_relations(
    axiom: Axiom,
    defect: &SeriesPair,
    target: &Ring,
    out: &mut Vec<Relation>,
) -> Result<()> {
    for (component, poly) in [(Component::F1, &defect.odd), (Component::F2, &defect.even)] {
        for (m, coeff) in poly.geometric_coefficients() {
            let embedded = coeff.embed(target)?;
            if embedded.is_zero() {
                continue;
            }
            out.push(Relation {
                degree: embedded.degree(),
                poly: embedded,
                axiom,
                component,
                source: GradedPolynomial::from_monomial(poly.ring(), 1, m).to_string(),
            });
        }
    }
    Ok(())
}

/// Geometric truncation used by default for dimensions up to `max_degree`.
pub fn default_truncation(max_degree: u32) -> u32 {
    (max_degree + 2).max(2)
}

/// Graded dimensions of the mod-p Lazard ring computed from the axioms.
pub fn lazard_hilbert_function(
    prime: Prime,
    max_degree: u32,
    truncation: u32,
) -> Result<Vec<DegreeDimension>> {
    check_margin(max_degree, truncation)?;
    let (law, table) = generic_fgl(prime, truncation)?;
    extract_relations(&law, &table)?.hilbert_function(max_degree)
}

fn check_margin(max_degree: u32, truncation: u32) -> Result<()> {
    let required = max_degree + 2;
    if truncation < required {
        return Err(Error::InsufficientTruncation {
            truncation,
            max_degree,
            required,
        });
    }
    Ok(())
}

/// A free generator of the ring `𝔽_p[a_p, b_r, s_r]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremGenerator {
    pub name: String,
    pub degree: u32,
}

/// How the subscript of `a` in `𝔽_p[a_p, b_r, s_r]` is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremReading {
    /// `p` is the prime: a single generator `a_p` of degree `2p`.
    SingleA,
    /// `p` is an index: one generator `a_i` of degree `2i` for every `i >= 1`.
    IndexedA,
}

impl TheoremReading {
    pub fn describe(self) -> &'static str {
        match self {
            TheoremReading::SingleA => "one generator a_p of degree 2p",
            TheoremReading::IndexedA => "a generator a_i of degree 2i for every i >= 1",
        }
    }
}

/// Generators up to `max_degree` under [`TheoremReading::SingleA`]: `a_p` in
/// degree `2p`, and for every `r >= 1` with `r != p^k - 1`, `b_r` in degree
/// `2r` and `s_r` in degree `2r + 1`.
pub fn theorem_generators(prime: Prime, max_degree: u32) -> Vec<TheoremGenerator> {
    theorem_generators_with(prime, max_degree, TheoremReading::SingleA)
}

pub fn theorem_generators_with(
    prime: Prime,
    max_degree: u32,
    reading: TheoremReading,
) -> Vec<TheoremGenerator> {
    let p = prime.get() as u64;
    let mut excluded = Vec::new();
    let mut pk = p;
    while pk - 1 <= max_degree as u64 {
        excluded.push(pk - 1);
        pk *= p;
    }
    let mut gens = Vec::new();
    match reading {
        TheoremReading::SingleA => {
            if 2 * p <= max_degree as u64 {
                gens.push(TheoremGenerator {
                    name: format!("a_{p}"),
                    degree: 2 * p as u32,
                });
            }
        }
        TheoremReading::IndexedA => {
            for i in 1..=max_degree / 2 {
                gens.push(TheoremGenerator {
                    name: format!("a_{i}"),
                    degree: 2 * i,
                });
            }
        }
    }
    for r in 1..=max_degree / 2 {
        if excluded.contains(&(r as u64)) {
            continue;
        }
        gens.push(TheoremGenerator {
            name: format!("b_{r}"),
            degree: 2 * r,
        });
        if 2 * r < max_degree {
            gens.push(TheoremGenerator {
                name: format!("s_{r}"),
                degree: 2 * r + 1,
            });
        }
    }
    gens.sort_by_key(|g| g.degree);
    gens
}

/// Graded dimensions of `𝔽_p[a_p, b_r, s_r]` (single `a_p`) in degrees
/// `0..=max_degree`, counting monomials one by one (odd generators square to
/// zero).
pub fn theorem_hilbert_function(prime: Prime, max_degree: u32) -> Vec<u64> {
    theorem_hilbert_function_with(prime, max_degree, TheoremReading::SingleA)
}

pub fn theorem_hilbert_function_with(
    prime: Prime,
    max_degree: u32,
    reading: TheoremReading,
) -> Vec<u64> {
    let degrees: Vec<u32> = theorem_generators_with(prime, max_degree, reading)
        .iter()
        .map(|g| g.degree)
        .collect();
    let mut counts = vec![0u64; max_degree as usize + 1];
    count_monomials(&degrees, 0, 0, max_degree, &mut counts);
    counts
}

fn count_monomials(degrees: &[u32], at: usize, current: u32, max: u32, counts: &mut [u64]) {
    if at == degrees.len() {
        counts[current as usize] += 1;
        return;
    }
    let d = degrees[at];
    let max_exp = if d % 2 == 1 { 1 } else { (max - current) / d };
    for e in 0..=max_exp {
        let next = current + e * d;
        if next > max {
            break;
        }
        count_monomials(degrees, at + 1, next, max, counts);
    }
}

/// Symbols for an ordinary one-dimensional law `x1 + x2 + Σ d_ij x1^i x2^j`.
fn ordinary_symbols(truncation: u32) -> Vec<(String, u16, u16, u32)> {
    let mut out = Vec::new();
    let max = (truncation / 2) as u16;
    for total in 2..=max {
        for i in (1..total).rev() {
            let j = total - i;
            out.push((format!("f2_{i}_{j}"), i, j, 2 * total as u32 - 2));
        }
    }
    out
}

/// Graded dimensions of the classical Lazard ring reduced mod p, computed by
/// the same pipeline: one even series in `x1, x2` subject to unit (built in),
/// commutativity and associativity.
pub fn ordinary_lazard_hilbert_function(
    prime: Prime,
    max_degree: u32,
    truncation: u32,
) -> Result<Vec<DegreeDimension>> {
    check_margin(max_degree, truncation)?;
    let symbols = ordinary_symbols(truncation);
    let vars: Vec<GradedVariable> = symbols
        .iter()
        .map(|(n, _, _, d)| GradedVariable::new(n.clone(), *d))
        .collect::<Result<_>>()?;
    let geometric = |names: &[&str]| -> Result<Ring> {
        RingDescriptor::new(
            prime,
            vars.clone(),
            names
                .iter()
                .map(|n| GradedVariable::new(*n, 2))
                .collect::<Result<_>>()?,
            truncation,
            TruncationGrading::Geometric,
        )
    };
    let ring = geometric(&["x1", "x2"])?;
    let ring3 = geometric(&["x1", "x2", "x3"])?;
    let mut law = GradedPolynomial::parse("x1 + x2", &ring)?;
    for (name, i, j, _) in &symbols {
        law = law.add(&GradedPolynomial::term(
            &ring,
            1,
            &[(name, 1), ("x1", *i), ("x2", *j)],
        )?)?;
    }
    let var = |r: &Ring, n: &str| GradedPolynomial::var(r, n);
    let swapped = law.substitute(&ring, &[var(&ring, "x2")?, var(&ring, "x1")?])?;
    let comm = swapped.sub(&law)?;
    let inner_right = law.substitute(&ring3, &[var(&ring3, "x2")?, var(&ring3, "x3")?])?;
    let inner_left = law.substitute(&ring3, &[var(&ring3, "x1")?, var(&ring3, "x2")?])?;
    let lhs = law.substitute(&ring3, &[var(&ring3, "x1")?, inner_right])?;
    let rhs = law.substitute(&ring3, &[inner_left, var(&ring3, "x3")?])?;
    let assoc = lhs.sub(&rhs)?;

    let target = RingDescriptor::new(prime, vars, vec![], truncation, TruncationGrading::Total)?;
    let mut relations = Vec::new();
    for (axiom, defect) in [(Axiom::Commutativity, comm), (Axiom::Associativity, assoc)] {
        let pair = SeriesPair::new(GradedPolynomial::zero(defect.ring()), defect);
        collect_relations(axiom, &pair, &target, &mut relations)?;
    }
    RelationIdeal::new(target, truncation, relations)?.hilbert_function(max_degree)
}

/// Partition counts in even degrees: the graded dimensions of a polynomial
/// ring with one generator in each positive even degree.
pub fn ordinary_expected(max_degree: u32) -> Vec<u64> {
    let half = (max_degree / 2) as usize;
    let mut partitions = vec![0u64; half + 1];
    partitions[0] = 1;
    for part in 1..=half {
        for n in part..=half {
            partitions[n] += partitions[n - part];
        }
    }
    (0..=max_degree)
        .map(|d| {
            if d % 2 == 0 {
                partitions[d as usize / 2]
            } else {
                0
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LazardMode {
    /// The mod-p Lazard ring, compared with `𝔽_p[a_p, b_r, s_r]`.
    Modp,
    /// The classical Lazard ring mod p, compared with partition counts.
    Ordinary,
}

impl fmt::Display for LazardMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LazardMode::Modp => "modp",
            LazardMode::Ordinary => "ordinary",
        })
    }
}

/// Computed dimensions compared against one set of expected values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub description: &'static str,
    pub expected: Vec<u64>,
    #[serde(rename = "match")]
    pub matches: Vec<bool>,
    pub all_match: bool,
    /// Degrees where the computed dimension differs from `expected`.
    pub mismatched_degrees: Vec<u32>,
}

impl Comparison {
    fn new(description: &'static str, computed: &[DegreeDimension], expected: Vec<u64>) -> Self {
        let matches: Vec<bool> = computed
            .iter()
            .zip(&expected)
            .map(|(d, &e)| d.dimension as u64 == e)
            .collect();
        let mismatched_degrees = computed
            .iter()
            .zip(&matches)
            .filter(|(_, &m)| !m)
            .map(|(d, _)| d.degree)
            .collect();
        Comparison {
            description,
            all_match: matches.iter().all(|&m| m),
            expected,
            matches,
            mismatched_degrees,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LazardReport {
    pub prime: Prime,
    pub mode: LazardMode,
    pub truncation: u32,
    pub degrees: Vec<DegreeDimension>,
    pub expected: Vec<u64>,
    #[serde(rename = "match")]
    pub matches: Vec<bool>,
    pub all_match: bool,
    pub mismatched_degrees: Vec<u32>,
    pub expected_description: &'static str,
    /// In `modp` mode, the comparison under [`TheoremReading::IndexedA`].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternative: Option<Comparison>,
}

impl LazardReport {
    pub fn compute(
        prime: Prime,
        max_degree: u32,
        mode: LazardMode,
        truncation: Option<u32>,
    ) -> Result<Self> {
        let truncation = truncation.unwrap_or_else(|| default_truncation(max_degree));
        let (degrees, primary, alternative) = match mode {
            LazardMode::Modp => {
                let degrees = lazard_hilbert_function(prime, max_degree, truncation)?;
                let primary = Comparison::new(
                    TheoremReading::SingleA.describe(),
                    &degrees,
                    theorem_hilbert_function(prime, max_degree),
                );
                let alternative = Comparison::new(
                    TheoremReading::IndexedA.describe(),
                    &degrees,
                    theorem_hilbert_function_with(prime, max_degree, TheoremReading::IndexedA),
                );
                (degrees, primary, Some(alternative))
            }
            LazardMode::Ordinary => {
                let degrees = ordinary_lazard_hilbert_function(prime, max_degree, truncation)?;
                let primary = Comparison::new(
                    "partition counts in even degrees",
                    &degrees,
                    ordinary_expected(max_degree),
                );
                (degrees, primary, None)
            }
        };
        Ok(LazardReport {
            prime,
            mode,
            truncation,
            degrees,
            expected: primary.expected,
            matches: primary.matches,
            all_match: primary.all_match,
            mismatched_degrees: primary.mismatched_degrees,
            expected_description: primary.description,
            alternative,
        })
    }

    pub fn dimensions(&self) -> Vec<u64> {
        self.degrees.iter().map(|d| d.dimension as u64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn generic_law_at_truncation_two() {
        let (law, table) = generic_fgl(prime(3), 2).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table.entries[0].monomial, [0, 0, 1, 1]);
        assert_eq!(table.entries[0].degree, 1);
        assert_eq!(law.odd().to_string(), "e1 + e2 + f1_0_0_1_1*e1*e2");
        assert_eq!(law.even().to_string(), "x1 + x2");
    }

    #[test]
    fn generic_law_at_truncation_four() {
        let (law, table) = generic_fgl(prime(3), 4).unwrap();
        let f2: Vec<_> = table
            .entries
            .iter()
            .filter(|s| s.component == Component::F2)
            .collect();
        assert_eq!(f2.len(), 1);
        assert_eq!((f2[0].monomial, f2[0].degree), ([1, 1, 0, 0], 2));
        assert_eq!(law.even().to_string(), "x1 + x2 + f2_1_1*x1*x2");
        let f1: Vec<([u16; 4], u32)> = table
            .entries
            .iter()
            .filter(|s| s.component == Component::F1)
            .map(|s| (s.monomial, s.degree))
            .collect();
        // Mixed monomials of degree 2..=4 in x1, x2, e1, e2.
        let mut expected = vec![
            ([0, 0, 1, 1], 1),
            ([1, 0, 0, 1], 2),
            ([0, 1, 1, 0], 2),
            ([1, 1, 0, 0], 3),
            ([1, 0, 1, 1], 3),
            ([0, 1, 1, 1], 3),
        ];
        expected.sort();
        let mut got = f1.clone();
        got.sort();
        assert_eq!(got, expected);
        for s in &table.entries {
            assert_eq!(s.degree % 2 == 1, s.is_odd());
        }
    }

    #[test]
    fn generic_law_is_unital_graded_and_e_free() {
        for d in [2, 5, 8] {
            let (law, _) = generic_fgl(prime(5), d).unwrap();
            assert!(law.check_unit().passed());
            assert!(law.check_e_independence().passed());
            assert!(law.check_homogeneity().passed());
        }
    }

    #[test]
    fn relations_vanish_on_the_additive_law() {
        let (law, table) = generic_fgl(prime(3), 6).unwrap();
        let ideal = extract_relations(&law, &table).unwrap();
        assert!(!ideal.relations().is_empty());
        for r in ideal.relations() {
            assert!(r.poly.symbols_to_zero().is_zero(), "{}", r.source);
            assert!(r.poly.is_homogeneous());
            assert!(r.axiom != Axiom::Unit);
        }
    }

    #[test]
    fn commutativity_relations_are_linear() {
        let (law, table) = generic_fgl(prime(3), 6).unwrap();
        let ideal = extract_relations(&law, &table).unwrap();
        let comm: Vec<_> = ideal
            .relations()
            .iter()
            .filter(|r| r.axiom == Axiom::Commutativity)
            .collect();
        assert!(!comm.is_empty());
        for r in comm {
            for (m, _) in r.poly.terms() {
                assert_eq!(m.exponents().iter().map(|&e| e as u32).sum::<u32>(), 1);
            }
        }
    }

    #[test]
    fn small_degrees() {
        // Degree 1: the e1*e2 coefficient is killed by commutativity.
        // Degree 2: commutativity identifies the x1*e2 and x2*e1 coefficients,
        // which stay independent of the x1*x2 coefficient of F2.
        let dims = lazard_hilbert_function(prime(3), 2, 4).unwrap();
        let values: Vec<usize> = dims.iter().map(|d| d.dimension).collect();
        assert_eq!(values, vec![1, 0, 2]);
    }

    #[test]
    fn margin_is_enforced() {
        let err = lazard_hilbert_function(prime(3), 5, 6).unwrap_err();
        assert_eq!(
            err,
            Error::InsufficientTruncation {
                truncation: 6,
                max_degree: 5,
                required: 7
            }
        );
        let (law, table) = generic_fgl(prime(3), 4).unwrap();
        let ideal = extract_relations(&law, &table).unwrap();
        assert!(ideal.hilbert_function(3).is_err());
    }

    #[test]
    fn theorem_generators_for_three() {
        let gens: Vec<(String, u32)> = theorem_generators(prime(3), 9)
            .into_iter()
            .map(|g| (g.name, g.degree))
            .collect();
        let names: Vec<&str> = gens.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["b_1", "s_1", "a_3", "b_3", "s_3", "b_4", "s_4"]);
    }

    #[test]
    fn theorem_values() {
        assert_eq!(
            theorem_hilbert_function(prime(3), 7),
            vec![1, 0, 1, 1, 1, 1, 3, 2]
        );
        let five = theorem_hilbert_function(prime(5), 6);
        assert_eq!(five[2], 1);
        assert_eq!(five[3], 1);
        // b_1^3, b_1*b_2, b_3.
        assert_eq!(five[6], 3);
    }

    #[test]
    fn indexed_reading_values() {
        // a_1, b_1 | s_1 | a_1^2, a_1 b_1, b_1^2, a_2 | a_1 s_1, b_1 s_1
        assert_eq!(
            theorem_hilbert_function_with(prime(3), 5, TheoremReading::IndexedA),
            vec![1, 0, 2, 1, 4, 2]
        );
    }

    #[test]
    fn ordinary_expected_partitions() {
        assert_eq!(ordinary_expected(8), vec![1, 0, 1, 0, 2, 0, 3, 0, 5]);
    }
}
