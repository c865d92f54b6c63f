//! Built-in scenarios and external lattice data.
//!
//! This module assembles the concrete (torus, group) pairs the rest of the
//! crate audits: the imprimitive monomial families `G(m,p,n)` acting on a
//! product of elliptic curves with an order-`m` lattice automorphism, the
//! symmetric-group action on a sum-zero sublattice, their translation
//! kernels (diagonal, hyperplanar, and incomplete-hyperplanar subgroups),
//! certified non-smoothness witness strata, root-lattice extraction with
//! the associated isogeny scenario, the endomorphism `S = n·I − ΣRᵢ` with
//! its intermediate-lattice enumeration, and a loader for crystallographic
//! reflection-group data shipped as checksummed JSON files whose matrix
//! entries are coefficient vectors over the power basis of a cyclotomic
//! field.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use indexmap::{IndexMap, IndexSet};
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::exact::{
    int, mod1, parse_rat, quotient_structure, rat, Int, LatticeBasis, MatQ, MatZ, Rat,
};
use crate::groups::{
    is_pseudoreflection, AffineElement, Caps, FiniteMatrixGroup, LinearElement,
};
use crate::torus::{isogeny_kernel, ComplexTorus, FiniteSubgroup, TorsionPoint};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

/// A complete audit input: a torus, a finite group of its automorphisms and,
/// optionally, a finite translation subgroup Δ extending the action to the
/// affine group Δ⋊G. The label is a stable string used by the command-line
/// surface and by golden baselines.
#[derive(Clone, Debug)]
pub struct Scenario {
    label: String,
    torus: ComplexTorus,
    group: FiniteMatrixGroup,
    delta: Option<FiniteSubgroup>,
    notes: String,
}

impl Scenario {
    /// Validate and assemble. Every generator must be C-linear for the
    /// torus (commute with the multiplication witness) and have finite
    /// order; Δ, when present, must be stable under every generator.
    pub fn new(
        label: impl Into<String>,
        torus: ComplexTorus,
        group: FiniteMatrixGroup,
        delta: Option<FiniteSubgroup>,
        notes: impl Into<String>,
    ) -> Result<Self> {
        if group.dim() != torus.real_rank() {
            return Err(Error::Mismatch("group dimension differs from torus rank".into()));
        }
        for g in group.generators() {
            if !torus.commutes_with(&g.to_matz()) {
                return Err(Error::InvalidParameter(
                    "a generator does not commute with the multiplication witness".into(),
                ));
            }
            if g.order().is_none() {
                return Err(Error::InvalidParameter("a generator has unbounded order".into()));
            }
        }
        if let Some(d) = &delta {
            if d.dim() != torus.real_rank() {
                return Err(Error::Mismatch(
                    "translation subgroup dimension differs from torus rank".into(),
                ));
            }
            for g in group.generators() {
                if !d.is_stable_under(&g.to_matz()) {
                    return Err(Error::InvalidParameter(
                        "the translation subgroup is not stable under the group".into(),
                    ));
                }
            }
        }
        Ok(Scenario { label: label.into(), torus, group, delta, notes: notes.into() })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn torus(&self) -> &ComplexTorus {
        &self.torus
    }

    pub fn group(&self) -> &FiniteMatrixGroup {
        &self.group
    }

    pub fn delta(&self) -> Option<&FiniteSubgroup> {
        self.delta.as_ref()
    }

    pub fn notes(&self) -> &str {
        &self.notes
    }

    /// The same linear data with a translation subgroup attached.
    pub fn with_delta(&self, delta: FiniteSubgroup, label: impl Into<String>) -> Result<Scenario> {
        Scenario::new(
            label,
            self.torus.clone(),
            self.group.clone(),
            Some(delta),
            self.notes.clone(),
        )
    }
}

// ---------------------------------------------------------------------------
// Realification helpers
// ---------------------------------------------------------------------------

/// Real `2n×2n` matrix of an integer `n×n` matrix acting C-linearly on a
/// product torus, with real coordinates interleaved per complex coordinate.
pub fn realify_int(m: &MatZ) -> MatZ {
    MatZ::from_fn(2 * m.rows(), 2 * m.cols(), |i, j| {
        if i % 2 == j % 2 { m.at(i / 2, j / 2).clone() } else { Int::zero() }
    })
}

/// 2×2 integer block of multiplication by a primitive m-th root of unity as
/// a lattice automorphism (for m = 2 this is −I; the complex-structure block
/// of the square lattice is a fourth root, not ζ₂).
pub fn multiplication_block(m: u8) -> Result<MatZ> {
    match m {
        2 => Ok(MatZ::from_i64_rows(&[vec![-1, 0], vec![0, -1]])),
        3 | 4 | 6 => Ok(crate::torus::root_of_unity_block(m)),
        _ => Err(Error::InvalidParameter(format!("unsupported multiplication order {m}"))),
    }
}

/// Monomial automorphism of an n-fold product torus: complex coordinate `j`
/// is sent to `ζ_m^{powers[j]}` times coordinate `perm[j]`.
pub fn monomial_element(m: u8, perm: &[usize], powers: &[u32]) -> Result<LinearElement> {
    let n = perm.len();
    if powers.len() != n {
        return Err(Error::Mismatch("permutation and power lists differ in length".into()));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidParameter("not a permutation".into()));
        }
        seen[p] = true;
    }
    let z = multiplication_block(m)?;
    let mut out = MatZ::zero(2 * n, 2 * n);
    for j in 0..n {
        let block = z.pow(u64::from(powers[j] % u32::from(m)));
        for r in 0..2 {
            for c in 0..2 {
                out.set(2 * perm[j] + r, 2 * j + c, block.at(r, c).clone());
            }
        }
    }
    LinearElement::from_matz(&out)
}

/// Torsion point of an n-fold product torus with complex coordinate `j`
/// equal to `re + im·τ` for each listed entry, zero elsewhere.
fn curve_point(n: usize, entries: &[(usize, Rat, Rat)]) -> TorsionPoint {
    let mut coords = vec![Rat::zero(); 2 * n];
    for (j, re, im) in entries {
        coords[2 * j] = re.clone();
        coords[2 * j + 1] = im.clone();
    }
    TorsionPoint::from_rats(&coords)
}

/// Coordinate sublattice spanned by the complex coordinates `from..n`.
fn tail_direction(n: usize, from: usize) -> LatticeBasis {
    let mut gens = Vec::new();
    for j in from..n {
        for k in [2 * j, 2 * j + 1] {
            let mut e = vec![Int::zero(); 2 * n];
            e[k] = Int::one();
            gens.push(e);
        }
    }
    LatticeBasis::from_generators(2 * n, &gens)
}

// ---------------------------------------------------------------------------
// Rebasing
// ---------------------------------------------------------------------------

/// Express a scenario in the basis of a new lattice, given by the columns of
/// `basis` in current coordinates. A global rational scale on the columns
/// cancels in conjugation, so scaled integral bases of rational lattices are
/// accepted. The input must not carry a translation subgroup (rebasing to a
/// sublattice does not act on Δ-classes).
pub fn rebase_scenario(scenario: &Scenario, basis: &MatQ, label: impl Into<String>) -> Result<Scenario> {
    let d = scenario.torus().real_rank();
    if basis.rows() != d || basis.cols() != d {
        return Err(Error::Mismatch("basis shape differs from torus rank".into()));
    }
    if scenario.delta().is_some() {
        return Err(Error::InvalidParameter(
            "rebasing a scenario with a translation subgroup is not defined".into(),
        ));
    }
    let label = label.into();
    if basis.is_identity() {
        return Scenario::new(
            label,
            scenario.torus().clone(),
            scenario.group().clone(),
            None,
            scenario.notes().to_string(),
        );
    }
    let inv = basis
        .inverse()
        .ok_or_else(|| Error::InvalidParameter("basis is not invertible".into()))?;
    let mut gens = Vec::with_capacity(scenario.group().generators().len());
    for g in scenario.group().generators() {
        let conj = inv.mul(&g.to_matz().to_q()).mul(basis);
        let as_int = MatZ::from_fn(d, d, |i, j| {
            if conj.at(i, j).is_integer() { conj.at(i, j).to_integer() } else { Int::zero() }
        });
        if as_int.to_q() != conj {
            return Err(Error::NotContained(
                "the new lattice is not stable under the group".into(),
            ));
        }
        gens.push(LinearElement::from_matz(&as_int)?);
    }
    let witness = inv.mul(scenario.torus().witness()).mul(basis);
    let torus = ComplexTorus::with_witness(scenario.torus().complex_dim(), witness, None)?;
    let mut group = FiniteMatrixGroup::new(d, gens)?;
    if let Some(o) = scenario.group().known_order() {
        group = group.with_known_order(o);
    }
    Scenario::new(label, torus, group, None, scenario.notes().to_string())
}

/// Absorb the translation subgroup into the period lattice: the result is
/// the isogenous quotient torus on which the same group acts linearly,
/// together with the change-of-coordinates matrix `C` whose columns express
/// the enlarged lattice in current coordinates. Points map from the covering
/// torus to the quotient through `C⁻¹` and back through `C`.
pub fn quotient_by_delta(scenario: &Scenario) -> Result<(Scenario, MatQ)> {
    let Some(delta) = scenario.delta() else {
        return Err(Error::InvalidParameter(
            "the scenario carries no translation subgroup".into(),
        ));
    };
    let d = scenario.torus().real_rank();
    let q = delta
        .generators()
        .iter()
        .fold(1i64, |acc, g| num::integer::lcm(acc, g.level()));
    // generators of q·(Z^d + Δ) as integer columns
    let mut cols: Vec<Vec<Int>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { int(q) } else { Int::zero() }).collect())
        .collect();
    for g in delta.generators() {
        cols.push(g.to_rats().iter().map(|r| (r * rat(q, 1)).to_integer()).collect());
    }
    let lq = LatticeBasis::from_generators(d, &cols);
    let c = lq.basis_matrix().to_q().scale(&rat(1, q));
    let stripped = Scenario {
        label: scenario.label.clone(),
        torus: scenario.torus.clone(),
        group: scenario.group.clone(),
        delta: None,
        notes: scenario.notes.clone(),
    };
    let rebased = rebase_scenario(&stripped, &c, format!("{}/isogenous", scenario.label))?;
    Ok((rebased, c))
}

// ---------------------------------------------------------------------------
// Monomial families G(m,p,n) and the two product examples
// ---------------------------------------------------------------------------

/// Order of `G(m,p,n)` = mⁿ·n!/p when it fits in a machine word.
fn gmpn_order(m: u8, p: u8, n: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(u64::from(m))?;
    }
    for k in 2..=n as u64 {
        acc = acc.checked_mul(k)?;
    }
    Some(acc / u64::from(p))
}

/// Number of pseudoreflections of `G(m,p,n)`: `C(n,2)·m` monomial
/// pair reflections plus `n·(m/p − 1)` diagonal root-of-unity powers.
pub fn gmpn_reflection_count(m: u8, p: u8, n: usize) -> u64 {
    let pairs = (n * (n - 1) / 2) as u64;
    pairs * u64::from(m) + (n as u64) * (u64::from(m / p) - 1)
}

fn validate_gmpn_params(m: u8, p: u8, n: usize) -> Result<()> {
    if !matches!(m, 2 | 3 | 4 | 6) {
        return Err(Error::InvalidParameter(format!("unsupported multiplication order {m}")));
    }
    if p == 0 || !m.is_multiple_of(p) {
        return Err(Error::InvalidParameter(format!("{p} does not divide {m}")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two coordinates".into()));
    }
    Ok(())
}

/// The imprimitive reflection group `G(m,p,n)` (diagonal m-th roots with
/// power sum divisible by p, semidirect with coordinate permutations),
/// acting on the n-fold product of the order-m curve.
pub fn build_gmpn(m: u8, p: u8, n: usize) -> Result<Scenario> {
    validate_gmpn_params(m, p, n)?;
    let torus = ComplexTorus::cyclotomic(m, n)?;
    let identity_perm: Vec<usize> = (0..n).collect();
    let mut gens = Vec::new();
    // diagonal part: ζ ⊕ ζ⁻¹ on adjacent pairs, plus ζ^p on the first
    // coordinate when p < m
    for j in 0..n - 1 {
        let mut powers = vec![0u32; n];
        powers[j] = 1;
        powers[j + 1] = u32::from(m) - 1;
        gens.push(monomial_element(m, &identity_perm, &powers)?);
    }
    if p < m {
        let mut powers = vec![0u32; n];
        powers[0] = u32::from(p);
        gens.push(monomial_element(m, &identity_perm, &powers)?);
    }
    // permutation part: adjacent transpositions
    for j in 0..n - 1 {
        let mut perm = identity_perm.clone();
        perm.swap(j, j + 1);
        gens.push(monomial_element(m, &perm, &vec![0u32; n])?);
    }
    let mut group = FiniteMatrixGroup::new(2 * n, gens)?;
    if let Some(o) = gmpn_order(m, p, n) {
        group = group.with_known_order(o);
    }
    Scenario::new(
        format!("gmpn-{m}-{p}-{n}"),
        torus,
        group,
        None,
        format!("G({m},{p},{n}) acting monomially on the {n}-fold product of the order-{m} curve"),
    )
}

/// Coordinatewise product action: the full monomial group `G(m,1,n)`.
pub fn build_example_a(m: u8, n: usize) -> Result<Scenario> {
    let base = build_gmpn(m, 1, n)?;
    Scenario::new(
        format!("example-a-{m}-{n}"),
        base.torus().clone(),
        base.group().clone(),
        None,
        base.notes().to_string(),
    )
}

/// The symmetric group on n+1 letters acting on the rank-2n sum-zero
/// sublattice of a product of n+1 copies of a curve, written in the basis
/// `f_j = e_j − e_{n+1}`, `τ·f_j`. The square lattice stands in for an
/// arbitrary curve: the construction is independent of the curve's moduli.
pub fn build_example_b(n: usize) -> Result<Scenario> {
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two coordinates".into()));
    }
    let torus = ComplexTorus::square(n);
    let mut gens = Vec::new();
    // adjacent transpositions of the first n letters act by coordinate swaps
    for j in 0..n - 1 {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(j, j + 1);
        gens.push(monomial_element(2, &perm, &vec![0u32; n])?);
    }
    // the transposition of the last two letters: f_j ↦ f_j − f_n for j < n
    // and f_n ↦ −f_n
    let special = MatZ::from_fn(n, n, |i, j| {
        if i == n - 1 {
            int(-1)
        } else if i == j {
            Int::one()
        } else {
            Int::zero()
        }
    });
    gens.push(LinearElement::from_matz(&realify_int(&special))?);
    let order: Option<u64> = (2..=(n as u64 + 1)).try_fold(1u64, |acc, k| acc.checked_mul(k));
    let mut group = FiniteMatrixGroup::new(2 * n, gens)?;
    if let Some(o) = order {
        group = group.with_known_order(o);
    }
    Scenario::new(
        format!("example-b-{n}"),
        torus,
        group,
        None,
        format!(
            "symmetric group on {} letters permuting a product of {} curves, \
             restricted to the sum-zero sublattice in the basis f_j = e_j − e_last",
            n + 1,
            n + 1
        ),
    )
}

// ---------------------------------------------------------------------------
// Translation subgroups
// ---------------------------------------------------------------------------

/// The diagonal (n+1)-torsion kernel of the sum-zero scenario: points with
/// every product coordinate equal to a common x with (n+1)·x = 0, expressed
/// in the f-basis as x·(1,…,1).
pub fn build_diagonal_delta_example_b(n: usize) -> Result<Scenario> {
    let base = build_example_b(n)?;
    let q = n as i64 + 1;
    let d = 2 * n;
    let mut g1 = vec![Rat::zero(); d];
    let mut g2 = vec![Rat::zero(); d];
    for j in 0..n {
        g1[2 * j] = rat(1, q);
        g2[2 * j + 1] = rat(1, q);
    }
    let delta = FiniteSubgroup::from_generators(
        d,
        &[TorsionPoint::from_rats(&g1), TorsionPoint::from_rats(&g2)],
    )?;
    base.with_delta(delta, format!("example-b-{n}-diagonal"))
}

/// Canonical nonzero point of the curve fixed by multiplication by ζ_m,
/// for m with a nonzero invariant point (all m except 6).
fn invariant_curve_point(m: u8) -> Result<(Rat, Rat)> {
    match m {
        2 => Ok((rat(0, 1), rat(1, 2))),
        3 => Ok((rat(1, 3), rat(2, 3))),
        4 => Ok((rat(1, 2), rat(1, 2))),
        6 => Err(Error::InvalidParameter(
            "the order-6 multiplication fixes no nonzero point".into(),
        )),
        _ => Err(Error::InvalidParameter(format!("unsupported multiplication order {m}"))),
    }
}

/// `G(m,p,n)` together with the diagonal translation subgroup generated by
/// `(s,…,s)` for the canonical nonzero ζ_m-invariant point s.
pub fn build_diagonal_delta_gmpn(m: u8, p: u8, n: usize) -> Result<Scenario> {
    let base = build_gmpn(m, p, n)?;
    let (re, im) = invariant_curve_point(m)?;
    let entries: Vec<(usize, Rat, Rat)> =
        (0..n).map(|j| (j, re.clone(), im.clone())).collect();
    let delta = FiniteSubgroup::from_generators(2 * n, &[curve_point(n, &entries)])?;
    base.with_delta(delta, format!("gmpn-{m}-{p}-{n}-diagonal"))
}

/// The ζ_m-invariant points of the curve, sorted canonically; their count is
/// 4, 3, 2, 1 for m = 2, 3, 4, 6.
pub fn e0_points(m: u8) -> Result<Vec<TorsionPoint>> {
    let block = multiplication_block(m)?;
    let zeta = LinearElement::from_matz(&block)?;
    let a = AffineElement::from_linear(zeta);
    let (mut reps, direction, count) =
        crate::groups::fixed_locus_data(&a, 16).expect("identity is always fixed");
    debug_assert!(direction.is_empty(), "invariant points are isolated");
    debug_assert!(count <= int(4), "at most four invariant points");
    reps.sort_unstable();
    Ok(reps)
}

/// The full hyperplanar translation subgroup: tuples of ζ_m-invariant curve
/// points summing to zero. Its order is |E₀|^{n−1}.
#[derive(Clone, Debug)]
pub struct HyperplanarDelta {
    pub m: u8,
    pub n: usize,
    pub subgroup: FiniteSubgroup,
}

/// Generators of the invariant-point group of the curve.
fn e0_generators(m: u8) -> Result<Vec<(Rat, Rat)>> {
    match m {
        2 => Ok(vec![(rat(1, 2), rat(0, 1)), (rat(0, 1), rat(1, 2))]),
        3 | 4 => Ok(vec![invariant_curve_point(m)?]),
        6 => Err(Error::InvalidParameter(
            "nontrivial translation kernels require an invariant point; \
             the order-6 multiplication has none"
                .into(),
        )),
        _ => Err(Error::InvalidParameter(format!("unsupported multiplication order {m}"))),
    }
}

/// Build the full hyperplanar subgroup for m ∈ {2, 3, 4}; errors for m = 6.
pub fn build_hyperplanar_delta(m: u8, n: usize) -> Result<HyperplanarDelta> {
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two coordinates".into()));
    }
    let gens = e0_generators(m)?;
    let mut points = Vec::new();
    // differences u ⊕ (−u) on adjacent coordinate pairs generate the
    // sum-zero subgroup of E₀ⁿ
    for (re, im) in &gens {
        for j in 0..n - 1 {
            let neg = TorsionPoint::from_rats(&[re.clone(), im.clone()]).neg();
            let nr = neg.to_rats();
            points.push(curve_point(
                n,
                &[(j, re.clone(), im.clone()), (j + 1, nr[0].clone(), nr[1].clone())],
            ));
        }
    }
    let subgroup = FiniteSubgroup::from_generators(2 * n, &points)?;
    Ok(HyperplanarDelta { m, n, subgroup })
}

/// `G(m,p,n)` together with the full hyperplanar translation subgroup.
pub fn build_hyperplanar_scenario(m: u8, p: u8, n: usize) -> Result<Scenario> {
    let base = build_gmpn(m, p, n)?;
    let delta = build_hyperplanar_delta(m, n)?;
    base.with_delta(delta.subgroup, format!("hyperplanar-{m}-{p}-{n}"))
}

/// `G(2,p,n)` with the translation subgroup generated by one hyperplanar
/// two-torsion element `(t,t,0,…,0)`: its stable closure is the group of
/// even-weight {0,t}-tuples, a proper subgroup of the full hyperplane.
pub fn build_incomplete_hyperplanar_scenario(p: u8, n: usize) -> Result<Scenario> {
    let base = build_gmpn(2, p, n)?;
    let (re, im) = invariant_curve_point(2)?;
    let mut points = Vec::new();
    for j in 0..n - 1 {
        points.push(curve_point(
            n,
            &[(j, re.clone(), im.clone()), (j + 1, re.clone(), im.clone())],
        ));
    }
    let delta = FiniteSubgroup::from_generators(2 * n, &points)?;
    base.with_delta(delta, format!("incomplete-hyperplanar-2-{p}-{n}"))
}

// ---------------------------------------------------------------------------
// Witness strata
// ---------------------------------------------------------------------------

/// Which family of certified non-smoothness witnesses to construct.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WitnessKind {
    /// Strata of the plain `G(m,p,n)` action, p ≥ 2: a special invariant
    /// value at the first coordinate, zero at the second, generic tail.
    LinearStratum,
    /// Affine witness when the translation subgroup misses part of the
    /// hyperplanar two-torsion (m = 2).
    IncompleteHyperplanar,
    /// Affine witnesses over the full hyperplanar translation subgroup.
    FullHyperplanar,
}

/// A certified witness stratum: base point, direction lattice (empty for an
/// isolated point), and the elements expected to generate the stabilizer of
/// a generic point of the stratum.
#[derive(Clone, Debug)]
pub struct WitnessData {
    pub scenario: Scenario,
    pub base: TorsionPoint,
    pub direction: LatticeBasis,
    pub listed: Vec<AffineElement>,
    pub label: String,
}

/// Construct the witness strata for the requested parameters. Errors when
/// the parameters admit no witness (the corresponding quotient is smooth or
/// outside the family's hypotheses).
pub fn witness_points(m: u8, p: u8, n: usize, which: WitnessKind) -> Result<Vec<WitnessData>> {
    match which {
        WitnessKind::LinearStratum => linear_stratum_witness(m, p, n),
        WitnessKind::IncompleteHyperplanar => incomplete_hyperplanar_witness(m, p, n),
        WitnessKind::FullHyperplanar => full_hyperplanar_witness(m, p, n),
    }
}

/// Diagonal linear element with the given root-of-unity exponents on the
/// leading coordinates, identity beyond them.
fn diagonal_element(m: u8, n: usize, leading: &[u32]) -> Result<AffineElement> {
    let mut powers = vec![0u32; n];
    powers[..leading.len()].copy_from_slice(leading);
    let perm: Vec<usize> = (0..n).collect();
    Ok(AffineElement::from_linear(monomial_element(m, &perm, &powers)?))
}

fn linear_stratum_witness(m: u8, p: u8, n: usize) -> Result<Vec<WitnessData>> {
    validate_gmpn_params(m, p, n)?;
    if p < 2 {
        return Err(Error::NotFound(
            "the coordinatewise product action has no non-reflection stabilizers".into(),
        ));
    }
    let scenario = build_gmpn(m, p, n)?;
    // special invariant value at the first coordinate and the diagonal
    // exponent pairs generating the expected stabilizer
    let (t, exps): ((Rat, Rat), Vec<[u32; 2]>) = match (m, p) {
        (2, 2) => ((rat(0, 1), rat(1, 2)), vec![[1, 1]]),
        (3, 3) => ((rat(1, 3), rat(2, 3)), vec![[1, 2]]),
        (4, 2) => ((rat(1, 2), rat(1, 2)), vec![[1, 1], [2, 0], [0, 2]]),
        (4, 4) => ((rat(1, 2), rat(1, 2)), vec![[1, 3]]),
        (6, 2) => ((rat(0, 1), rat(1, 2)), vec![[3, 3], [0, 2]]),
        (6, 3) => ((rat(1, 3), rat(1, 3)), vec![[2, 4], [0, 3]]),
        (6, 6) => ((rat(1, 3), rat(1, 3)), vec![[2, 4]]),
        _ => unreachable!("validated above"),
    };
    let base = curve_point(n, &[(0, t.0, t.1)]);
    let listed: Result<Vec<AffineElement>> =
        exps.iter().map(|e| diagonal_element(m, n, e)).collect();
    Ok(vec![WitnessData {
        scenario,
        base,
        direction: tail_direction(n, 2),
        listed: listed?,
        label: format!("linear-stratum-{m}-{p}-{n}"),
    }])
}

fn incomplete_hyperplanar_witness(m: u8, p: u8, n: usize) -> Result<Vec<WitnessData>> {
    if m != 2 {
        return Err(Error::InvalidParameter(
            "incomplete hyperplanar subgroups exist only for two-torsion kernels".into(),
        ));
    }
    validate_gmpn_params(m, p, n)?;
    let scenario = build_incomplete_hyperplanar_scenario(p, n)?;
    // t = (0,1/2) generates the kernel entries; s = (1/2,0) is a two-torsion
    // value whose hyperplanar pair is missing; the base uses a quarter
    // period t1 with 2·t1 = t and its shift t2 = t1 + s
    let t1 = (rat(0, 1), rat(1, 4));
    let t2 = (rat(1, 2), rat(1, 4));
    let base = curve_point(n, &[(0, t1.0, t1.1), (1, t2.0, t2.1)]);
    let translation = curve_point(n, &[(0, rat(0, 1), rat(1, 2)), (1, rat(0, 1), rat(1, 2))]);
    let rho = diagonal_element(2, n, &[1, 1])?;
    let listed = vec![AffineElement::new(translation, rho.linear().clone())?];
    Ok(vec![WitnessData {
        scenario,
        base,
        direction: tail_direction(n, 2),
        listed,
        label: format!("incomplete-hyperplanar-2-{p}-{n}"),
    }])
}

fn full_hyperplanar_witness(m: u8, p: u8, n: usize) -> Result<Vec<WitnessData>> {
    validate_gmpn_params(m, p, n)?;
    if m == 6 {
        return Err(Error::InvalidParameter(
            "the order-6 multiplication admits no nontrivial translation kernel".into(),
        ));
    }
    let scenario = build_hyperplanar_scenario(m, p, n)?;
    let dim = 2 * n;
    let zero = TorsionPoint::zero(dim);
    let half = rat(1, 2);
    let quarter = rat(1, 4);
    let (base, translation, linear, conditionals, tail_from): (
        TorsionPoint,
        TorsionPoint,
        AffineElement,
        Vec<AffineElement>,
        usize,
    ) = match m {
        2 if n == 3 => {
            if p != 1 {
                return Err(Error::NotFound(
                    "the three-coordinate two-torsion quotient with p = 2 is smooth".into(),
                ));
            }
            // quarter periods at all three coordinates; translation by the
            // three nonzero two-torsion values
            let base = curve_point(
                n,
                &[
                    (0, rat(0, 1), quarter.clone()),
                    (1, quarter.clone(), rat(0, 1)),
                    (2, quarter.clone(), quarter.clone()),
                ],
            );
            let translation = curve_point(
                n,
                &[
                    (0, rat(0, 1), half.clone()),
                    (1, half.clone(), rat(0, 1)),
                    (2, half.clone(), half.clone()),
                ],
            );
            (base, translation, diagonal_element(2, n, &[1, 1, 1])?, Vec::new(), 3)
        }
        2 => {
            if n < 4 {
                return Err(Error::NotFound(
                    "two-torsion witnesses need at least four coordinates \
                     (or the special three-coordinate form with p = 1)"
                        .into(),
                ));
            }
            let base = curve_point(
                n,
                &[
                    (1, rat(0, 1), quarter.clone()),
                    (2, quarter.clone(), rat(0, 1)),
                    (3, quarter.clone(), quarter.clone()),
                ],
            );
            let translation = curve_point(
                n,
                &[
                    (1, rat(0, 1), half.clone()),
                    (2, half.clone(), rat(0, 1)),
                    (3, half.clone(), half.clone()),
                ],
            );
            let mut conditionals = Vec::new();
            if p == 1 {
                conditionals.push(diagonal_element(2, n, &[1])?);
            }
            (base, translation, diagonal_element(2, n, &[1, 1, 1, 1])?, conditionals, 4)
        }
        3 => {
            if n < 3 {
                return Err(Error::NotFound(
                    "order-3 witnesses need at least three coordinates".into(),
                ));
            }
            // d is a three-torsion value moved by the multiplication;
            // e = ζ₃·d − d is invariant, and the translation is (0, 2e, e)
            let third = rat(1, 3);
            let two_thirds = rat(2, 3);
            let base = curve_point(
                n,
                &[(1, rat(0, 1), third.clone()), (2, rat(0, 1), two_thirds.clone())],
            );
            let translation = curve_point(
                n,
                &[(1, third.clone(), two_thirds.clone()), (2, two_thirds.clone(), third.clone())],
            );
            let mut conditionals = Vec::new();
            if p == 1 {
                conditionals.push(diagonal_element(3, n, &[1])?);
            }
            (base, translation, diagonal_element(3, n, &[1, 1, 1])?, conditionals, 3)
        }
        4 => {
            if n < 3 {
                return Err(Error::NotFound(
                    "order-4 witnesses need at least three coordinates".into(),
                ));
            }
            // d is two-torsion moved by the multiplication; e' is a quarter
            // period whose double e is invariant; translation (0, e, e)
            let base = curve_point(
                n,
                &[(1, rat(0, 1), half.clone()), (2, quarter.clone(), quarter.clone())],
            );
            let translation = curve_point(
                n,
                &[(1, half.clone(), half.clone()), (2, half.clone(), half.clone())],
            );
            let mut conditionals = Vec::new();
            if p <= 2 {
                conditionals.push(diagonal_element(4, n, &[2])?);
            }
            if p == 1 {
                conditionals.push(diagonal_element(4, n, &[1])?);
            }
            (base, translation, diagonal_element(4, n, &[1, 1, 2])?, conditionals, 3)
        }
        _ => unreachable!("validated above"),
    };
    debug_assert!(translation != zero);
    let mut listed = vec![AffineElement::new(translation, linear.linear().clone())?];
    listed.extend(conditionals);
    Ok(vec![WitnessData {
        scenario,
        base,
        direction: tail_direction(n, tail_from),
        listed,
        label: format!("hyperplanar-{m}-{p}-{n}"),
    }])
}

// ---------------------------------------------------------------------------
// Root lattices
// ---------------------------------------------------------------------------

/// The sublattice generated by the root lines of every pseudoreflection of
/// the closed group, together with the scenario rebased onto it. The rebased
/// scenario carries the isogeny kernel (the quotient of the two lattices) as
/// its translation subgroup.
pub fn root_lattice(scenario: &Scenario, caps: &Caps) -> Result<(LatticeBasis, Scenario)> {
    if scenario.delta().is_some() {
        return Err(Error::InvalidParameter(
            "input already carries a translation subgroup".into(),
        ));
    }
    let d = scenario.torus().real_rank();
    let mut gens: Vec<Vec<Int>> = Vec::new();
    let mut any = false;
    for g in scenario.group().close(caps)? {
        let report = is_pseudoreflection(g);
        if report.is_pseudoreflection {
            any = true;
            gens.extend(report.root_line.expect("pseudoreflection has a root line").vectors());
        }
    }
    if !any {
        return Err(Error::NotFound("the group contains no pseudoreflections".into()));
    }
    let lattice = LatticeBasis::from_generators(d, &gens);
    if lattice.rank() < d {
        return Err(Error::InvalidParameter(
            "root lines span a proper subspace; the reflection action is reducible".into(),
        ));
    }
    let rebased = rebase_scenario(
        scenario,
        &lattice.basis_matrix().to_q(),
        format!("{}-root", scenario.label()),
    )?;
    let kernel = isogeny_kernel(&LatticeBasis::standard(d), &lattice)?;
    let with_kernel = Scenario::new(
        rebased.label().to_string(),
        rebased.torus().clone(),
        rebased.group().clone(),
        Some(kernel),
        rebased.notes().to_string(),
    )?;
    Ok((lattice, with_kernel))
}

// ---------------------------------------------------------------------------
// The S endomorphism and intermediate lattices
// ---------------------------------------------------------------------------

/// One lattice between the root lattice and its S-preimage.
#[derive(Clone, Debug)]
pub struct LatticeMember {
    /// Deterministic label: "L0" for the root lattice, "Sinv" for the full
    /// preimage, "L1", "L2", … for the intermediate lattices named by the
    /// shipped extra vectors, "M1", … for unnamed ones.
    pub label: String,
    /// Basis of the lattice scaled by det so the entries are integers
    /// (columns in root-lattice coordinates times the real determinant).
    pub scaled_basis: LatticeBasis,
    /// Index over the root lattice.
    pub index_over_root: Int,
}

/// The S endomorphism and every group-stable lattice between the root
/// lattice and its S-preimage.
#[derive(Clone, Debug)]
pub struct LatticeFamily {
    /// `S = n·I − ΣRᵢ` as a real matrix in root-lattice coordinates.
    pub s_real: MatZ,
    /// `|det_R S|`, the squared modulus of the complex determinant; the
    /// family is just the root lattice exactly when this is 1.
    pub det_real: Int,
    pub members: Vec<LatticeMember>,
}

impl LatticeFamily {
    pub fn member(&self, label: &str) -> Option<&LatticeMember> {
        self.members.iter().find(|m| m.label == label)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.members.iter().map(|m| m.label.as_str()).collect()
    }

    /// Scenario rebased onto a member lattice (the scale cancels in
    /// conjugation). The label gains a "/member" suffix.
    pub fn member_scenario(&self, base: &Scenario, label: &str) -> Result<Scenario> {
        let member = self
            .member(label)
            .ok_or_else(|| Error::NotFound(format!("no lattice labeled {label}")))?;
        rebase_scenario(
            base,
            &member.scaled_basis.basis_matrix().to_q(),
            format!("{}/{}", base.label(), label),
        )
    }

    /// Torsion point of the member torus from coordinates in the root basis.
    pub fn member_point(&self, label: &str, root_coords: &[Rat]) -> Result<TorsionPoint> {
        let member = self
            .member(label)
            .ok_or_else(|| Error::NotFound(format!("no lattice labeled {label}")))?;
        let inv = member
            .scaled_basis
            .basis_matrix()
            .to_q()
            .inverse()
            .expect("member bases are invertible");
        let q = Rat::from_integer(self.det_real.clone());
        let coords: Vec<Rat> = inv.mul_vec(root_coords).iter().map(|c| mod1(&(c * &q))).collect();
        Ok(TorsionPoint::from_rats(&coords))
    }
}

/// Closure of torsion points under addition (tiny groups only).
fn subgroup_closure(dim: usize, gens: &[TorsionPoint]) -> Vec<TorsionPoint> {
    let mut set: IndexSet<TorsionPoint> = IndexSet::new();
    set.insert(TorsionPoint::zero(dim));
    let mut i = 0;
    while i < set.len() {
        let x = set.get_index(i).expect("index in range").clone();
        for g in gens {
            set.insert(x.add(g));
        }
        i += 1;
    }
    let mut out: Vec<TorsionPoint> = set.into_iter().collect();
    out.sort_unstable();
    out
}

/// Every subgroup of a finite abelian group given by its full element list.
fn all_subgroups(dim: usize, elements: &[TorsionPoint]) -> Vec<Vec<TorsionPoint>> {
    let zero_group = vec![TorsionPoint::zero(dim)];
    let mut seen: BTreeSet<Vec<TorsionPoint>> = BTreeSet::new();
    seen.insert(zero_group.clone());
    let mut queue = vec![zero_group];
    while let Some(h) = queue.pop() {
        for g in elements {
            if h.binary_search(g).is_ok() {
                continue;
            }
            let mut gens = h.clone();
            gens.push(g.clone());
            let bigger = subgroup_closure(dim, &gens);
            if seen.insert(bigger.clone()) {
                queue.push(bigger);
            }
        }
    }
    seen.into_iter().collect()
}

/// Compute `S = n·I − ΣRᵢ` from n designated pseudoreflections, its real
/// determinant, and every group-stable lattice `Λ` with
/// `Λ⁰ ⊆ Λ ⊆ S⁻¹Λ⁰` (in the scenario's own coordinates, where the root
/// lattice is the standard one). Errors when a designated element is not a
/// pseudoreflection or the designated root lines do not span.
pub fn s_matrix_and_intermediate_lattices(
    scenario: &Scenario,
    designated: &[LinearElement],
) -> Result<LatticeFamily> {
    let n = scenario.torus().complex_dim();
    let d = 2 * n;
    if designated.len() != n {
        return Err(Error::InvalidParameter(format!(
            "need exactly {n} designated pseudoreflections, got {}",
            designated.len()
        )));
    }
    let mut stacked: Option<MatZ> = None;
    for r in designated {
        if r.dim() != d {
            return Err(Error::Mismatch("designated element dimension mismatch".into()));
        }
        let report = is_pseudoreflection(r);
        if !report.is_pseudoreflection {
            return Err(Error::InvalidParameter(
                "a designated element is not a pseudoreflection".into(),
            ));
        }
        let one_minus = MatZ::identity(d).sub(&r.to_matz());
        stacked = Some(match stacked {
            None => one_minus,
            Some(s) => s.vstack(&one_minus),
        });
    }
    // the root lines must span: otherwise the designated set fixes a
    // subspace pointwise and cannot generate a reflection group acting
    // without nonzero fixed vectors
    if stacked.expect("designated set is nonempty").rank() < d {
        return Err(Error::InvalidParameter(
            "designated root lines do not span; the set is not generating".into(),
        ));
    }
    let mut s_real = MatZ::identity(d).scale(&int(n as i64));
    for r in designated {
        s_real = s_real.sub(&r.to_matz());
    }
    debug_assert!(
        scenario.torus().commutes_with(&s_real),
        "sums of C-linear maps are C-linear"
    );
    let det = s_real.det().abs();
    if det.is_zero() {
        return Err(Error::InvalidParameter("the S endomorphism is singular".into()));
    }
    // scaled picture: every lattice between the root lattice and S⁻¹ of it
    // is represented by det·Λ, which is integral
    let q = det.clone();
    let small = LatticeBasis::standard(d).scaled(&q);
    let s_inv = s_real.to_q().inverse().expect("nonzero determinant");
    let (scaled_preimage, rem) = s_inv.scale(&Rat::from_integer(q.clone())).clear_denominators();
    debug_assert!(rem.is_one(), "det·S⁻¹ is integral");
    let big = LatticeBasis::from_cols_matrix(&scaled_preimage);
    let (_, reps) = quotient_structure(&big, &small)?;
    let points: Vec<TorsionPoint> = reps.iter().map(|r| TorsionPoint::from_rats(r)).collect();
    let mut members = Vec::new();
    for subgroup in all_subgroups(d, &points) {
        // lattice spanned by det·Z^d and the lifts of the subgroup elements
        let mut gens = small.vectors();
        for p in &subgroup {
            let lift: Vec<Int> = p
                .to_rats()
                .iter()
                .map(|c| {
                    let scaled = c * Rat::from_integer(q.clone());
                    debug_assert!(scaled.is_integer());
                    scaled.to_integer()
                })
                .collect();
            gens.push(lift);
        }
        let lattice = LatticeBasis::from_generators(d, &gens);
        let stable = scenario.group().generators().iter().all(|g| {
            let gm = g.to_matz();
            lattice.vectors().iter().all(|v| lattice.contains_int(&gm.mul_vec(v)))
        });
        if stable {
            members.push((subgroup.len(), lattice));
        }
    }
    members.sort();
    // deterministic labels: root lattice, named combinations of the extra
    // vectors (assigned by the caller via label_members), preimage, rest
    let mut out = Vec::new();
    for (order, lattice) in members {
        let label = if lattice == small {
            "L0".to_string()
        } else if lattice == big {
            "Sinv".to_string()
        } else {
            String::new()
        };
        out.push(LatticeMember {
            label,
            scaled_basis: lattice,
            index_over_root: int(order as i64),
        });
    }
    let mut unnamed = 0;
    for m in &mut out {
        if m.label.is_empty() {
            unnamed += 1;
            m.label = format!("M{unnamed}");
        }
    }
    out.sort_by_key(|m| member_rank(&m.label));
    Ok(LatticeFamily { s_real, det_real: det, members: out })
}

/// Sort key placing L0 first, numbered lattices next, the preimage last.
fn member_rank(label: &str) -> (u8, u64) {
    if label == "L0" {
        (0, 0)
    } else if label == "Sinv" {
        (3, 0)
    } else if let Some(k) = label.strip_prefix('L').and_then(|s| s.parse::<u64>().ok()) {
        (1, k)
    } else if let Some(k) = label.strip_prefix('M').and_then(|s| s.parse::<u64>().ok()) {
        (2, k)
    } else {
        (4, 0)
    }
}

/// Rename the unnamed members of a family by matching them against the
/// lattices generated over the root lattice by small integer combinations
/// of the given vectors (coordinates in the root basis). Combinations are
/// tried in a fixed order so the resulting labels are stable.
pub fn label_members_by_vectors(family: &mut LatticeFamily, vectors: &[Vec<Rat>]) {
    if vectors.is_empty() {
        return;
    }
    let d = family.s_real.rows();
    let q = family.det_real.clone();
    let combos: Vec<Vec<i64>> = match vectors.len() {
        1 => vec![vec![1]],
        _ => vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]],
    };
    let mut next = 1;
    for combo in combos {
        // target lattice generated by the combination over the root lattice
        let mut target: Vec<Rat> = vec![Rat::zero(); d];
        for (c, v) in combo.iter().zip(vectors) {
            for (t, x) in target.iter_mut().zip(v) {
                *t += Rat::from_integer(int(*c)) * x;
            }
        }
        let lift: Vec<Int> = target
            .iter()
            .map(|c| {
                let scaled = c * Rat::from_integer(q.clone());
                if scaled.is_integer() { scaled.to_integer() } else { Int::zero() }
            })
            .collect();
        let exact = target
            .iter()
            .all(|c| (c * Rat::from_integer(q.clone())).is_integer());
        if !exact {
            continue;
        }
        let mut gens: Vec<Vec<Int>> = LatticeBasis::standard(d).scaled(&q).vectors();
        gens.push(lift);
        let lattice = LatticeBasis::from_generators(d, &gens);
        if let Some(m) = family
            .members
            .iter_mut()
            .find(|m| m.scaled_basis == lattice && m.label.starts_with('M'))
        {
            m.label = format!("L{next}");
            next += 1;
        }
    }
    family.members.sort_by_key(|m| member_rank(&m.label));
}

// ---------------------------------------------------------------------------
// Cyclotomic coefficient arithmetic
// ---------------------------------------------------------------------------

/// Arithmetic in the cyclotomic field of conductor k ∈ {3, 4, 7, 8}:
/// elements are rational coefficient vectors over the power basis
/// `1, ζ, …, ζ^{φ(k)−1}`, reduced modulo the cyclotomic polynomial.
#[derive(Clone, Debug)]
pub struct CycloField {
    conductor: u8,
    // cyclotomic polynomial coefficients, constant term first, monic
    modulus: Vec<i64>,
}

impl CycloField {
    pub fn new(conductor: u8) -> Result<Self> {
        let modulus: Vec<i64> = match conductor {
            3 => vec![1, 1, 1],
            4 => vec![1, 0, 1],
            7 => vec![1; 7],
            8 => vec![1, 0, 0, 0, 1],
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unsupported cyclotomic conductor {conductor}"
                )))
            }
        };
        Ok(CycloField { conductor, modulus })
    }

    pub fn conductor(&self) -> u8 {
        self.conductor
    }

    /// Degree of the field (length of coefficient vectors).
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn zero(&self) -> Vec<Rat> {
        vec![Rat::zero(); self.degree()]
    }

    pub fn one(&self) -> Vec<Rat> {
        let mut v = self.zero();
        v[0] = Rat::one();
        v
    }

    pub fn add(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn mul(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let phi = self.degree();
        let mut prod = vec![Rat::zero(); 2 * phi - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        // fold degrees ≥ φ down via ζ^φ = −(m₀ + m₁ζ + ⋯ + m_{φ−1}ζ^{φ−1})
        for dtop in (phi..prod.len()).rev() {
            let c = std::mem::replace(&mut prod[dtop], Rat::zero());
            if c.is_zero() {
                continue;
            }
            for i in 0..phi {
                let m = Rat::from_integer(int(self.modulus[i]));
                prod[dtop - phi + i] -= &c * m;
            }
        }
        prod.truncate(phi);
        prod
    }

    /// The distinguished imaginary quadratic generator θ whose lattice
    /// multiplication serves as the torus witness: ζ for conductors 3 and 4,
    /// ζ + ζ² + ζ⁴ (a square root of −7 shifted) for 7, ζ + ζ³ (a square
    /// root of −2) for 8.
    pub fn theta(&self) -> Vec<Rat> {
        let mut v = self.zero();
        match self.conductor {
            3 | 4 => v[1] = Rat::one(),
            7 => {
                v[1] = Rat::one();
                v[2] = Rat::one();
                v[4] = Rat::one();
            }
            8 => {
                v[1] = Rat::one();
                v[3] = Rat::one();
            }
            _ => unreachable!("constructor validates the conductor"),
        }
        v
    }
}

// ---------------------------------------------------------------------------
// Sporadic data files
// ---------------------------------------------------------------------------

/// One published stabilizer computation attached to a data file: the lattice
/// it runs on, the point in root-basis coordinates, and the expected orders.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SporadicTableRow {
    /// Lattice label within the family ("L0", "L1", …, "Sinv").
    pub lattice: String,
    /// Human-readable lattice name for table output.
    pub display_lattice: String,
    /// Point coordinates over the root-lattice basis, as "p/q" strings.
    pub v0: Vec<String>,
    /// Published coordinate string for table output.
    pub v0_display: String,
    /// Expected stabilizer order.
    pub stabilizer_order: u64,
    /// Expected order of the reflection subgroup of the stabilizer.
    pub reflection_order: u64,
    /// Whether the row is gated behind the opt-in large-computation flag.
    pub large: bool,
    /// Whether the row is excluded even from the large tier (hours-scale).
    pub huge: bool,
}

/// A crystallographic reflection-group data file: generators and lattice
/// basis encoded as coefficient vectors over the power basis of a
/// cyclotomic field, named extra lattice vectors, designated reflections
/// for the S endomorphism, and published stabilizer rows.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SporadicData {
    /// Shephard–Todd number of the group.
    pub st_number: u32,
    /// Stable scenario label (also the file stem).
    pub label: String,
    /// Human-readable group name for table output.
    pub display_name: String,
    /// Complex dimension.
    pub n: usize,
    /// Cyclotomic conductor of the entry field.
    pub conductor: u8,
    /// Group order.
    pub known_order: u64,
    /// Pseudoreflection count, verified when the closure is feasible.
    pub known_reflections: Option<u64>,
    /// Generator matrices, row-major, each entry a coefficient vector.
    pub generators: Vec<Vec<Vec<Vec<String>>>>,
    /// 2n lattice basis vectors, each with n coefficient-vector components.
    pub lattice: Vec<Vec<Vec<String>>>,
    /// Named rational vectors over the lattice basis (extra lattice
    /// generators for the intermediate-lattice naming).
    pub extra_vectors: IndexMap<String, Vec<String>>,
    /// Indices into `generators` of the designated reflections for S.
    pub designated_reflections: Vec<usize>,
    /// Published stabilizer computations.
    pub table_rows: Vec<SporadicTableRow>,
    /// Hex SHA-256 of the canonical serialization with this field empty.
    pub checksum: String,
}

/// Checksum over the canonical JSON serialization with the checksum field
/// cleared.
pub fn compute_checksum(data: &SporadicData) -> String {
    let mut shadow = data.clone();
    shadow.checksum = String::new();
    let bytes = serde_json::to_vec(&shadow).expect("data structs always serialize");
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    format!("{:x}", hasher.finalize())
}

/// A loaded data file: the raw data, the scenario on the shipped lattice,
/// and the realified designated reflections.
#[derive(Clone, Debug)]
pub struct SporadicBundle {
    pub data: SporadicData,
    pub scenario: Scenario,
    pub designated: Vec<LinearElement>,
}

impl SporadicBundle {
    /// The lattice family computed from the designated reflections.
    pub fn lattice_family(&self) -> Result<LatticeFamily> {
        let mut family = s_matrix_and_intermediate_lattices(&self.scenario, &self.designated)?;
        let vectors: Result<Vec<Vec<Rat>>> = self
            .data
            .extra_vectors
            .values()
            .map(|v| v.iter().map(|s| parse_rat(s)).collect())
            .collect();
        label_members_by_vectors(&mut family, &vectors?);
        Ok(family)
    }
}

fn reject(what: impl std::fmt::Display) -> Error {
    Error::DataValidation(what.to_string())
}

fn parse_k_elem(field: &CycloField, coeffs: &[String]) -> Result<Vec<Rat>> {
    if coeffs.len() != field.degree() {
        return Err(reject(format!(
            "coefficient vector has length {}, expected {}",
            coeffs.len(),
            field.degree()
        )));
    }
    coeffs.iter().map(|s| parse_rat(s).map_err(reject)).collect()
}

/// Closure-verification threshold: groups at most this large are fully
/// enumerated at load time and checked against the declared order.
const CLOSURE_VERIFY_LIMIT: u64 = 2000;

/// Load and validate a data file, realify its generators over the shipped
/// lattice basis, and build the scenario. Every rejection names the violated
/// invariant.
pub fn load_sporadic(path: &Path) -> Result<SporadicBundle> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| reject(format!("cannot read {}: {e}", path.display())))?;
    let data: SporadicData =
        serde_json::from_str(&text).map_err(|e| reject(format!("malformed file: {e}")))?;
    load_sporadic_data(data)
}

/// Validate an in-memory data record (the file loader after parsing).
pub fn load_sporadic_data(data: SporadicData) -> Result<SporadicBundle> {
    if data.checksum != compute_checksum(&data) {
        return Err(reject("checksum mismatch"));
    }
    let field = CycloField::new(data.conductor).map_err(reject)?;
    let n = data.n;
    let d = 2 * n;
    let phi = field.degree();
    if data.lattice.len() != d {
        return Err(reject(format!("lattice must have {d} basis vectors")));
    }
    // parse the lattice basis and flatten each vector to Q^{n·φ}
    let mut basis_k: Vec<Vec<Vec<Rat>>> = Vec::with_capacity(d);
    for vec in &data.lattice {
        if vec.len() != n {
            return Err(reject(format!("lattice vectors must have {n} components")));
        }
        let parsed: Result<Vec<Vec<Rat>>> =
            vec.iter().map(|c| parse_k_elem(&field, c)).collect();
        basis_k.push(parsed?);
    }
    let flatten = |v: &[Vec<Rat>]| -> Vec<Rat> {
        v.iter().flat_map(|c| c.iter().cloned()).collect()
    };
    let b_flat = MatQ::from_fn(n * phi, d, |r, c| basis_k[c][r / phi][r % phi].clone());
    if b_flat.rank() < d {
        return Err(reject("lattice basis vectors are linearly dependent"));
    }
    // multiplication witness: the matrix of θ-multiplication in the basis
    let theta = field.theta();
    let mut witness = MatQ::zero(d, d);
    for (j, basis_j) in basis_k.iter().enumerate() {
        let image: Vec<Vec<Rat>> = basis_j.iter().map(|c| field.mul(&theta, c)).collect();
        let coords = b_flat
            .solve(&flatten(&image))
            .ok_or_else(|| reject("lattice span is not stable under the field action"))?;
        for (i, coord) in coords.iter().enumerate() {
            witness.set(i, j, coord.clone());
        }
    }
    let torus = ComplexTorus::with_witness(n, witness, None)
        .map_err(|e| reject(format!("multiplication witness rejected: {e}")))?;
    // realify each generator over the lattice basis
    let mut realified = Vec::with_capacity(data.generators.len());
    for (gi, gen) in data.generators.iter().enumerate() {
        if gen.len() != n || gen.iter().any(|row| row.len() != n) {
            return Err(reject(format!("generator {gi} is not an {n}×{n} matrix")));
        }
        let mut rows_k: Vec<Vec<Vec<Rat>>> = Vec::with_capacity(n);
        for row in gen {
            let parsed: Result<Vec<Vec<Rat>>> =
                row.iter().map(|c| parse_k_elem(&field, c)).collect();
            rows_k.push(parsed?);
        }
        let mut m = MatZ::zero(d, d);
        for (j, basis_j) in basis_k.iter().enumerate() {
            // A·b_j computed in the field, then solved over the basis
            let image: Vec<Vec<Rat>> = (0..n)
                .map(|i| {
                    let mut acc = field.zero();
                    for k in 0..n {
                        acc = field.add(&acc, &field.mul(&rows_k[i][k], &basis_j[k]));
                    }
                    acc
                })
                .collect();
            let coords = b_flat.solve(&flatten(&image)).ok_or_else(|| {
                reject(format!("generator {gi} does not preserve the lattice span"))
            })?;
            for (i, c) in coords.iter().enumerate() {
                if !c.is_integer() {
                    return Err(reject(format!("generator {gi} does not preserve the lattice")));
                }
                m.set(i, j, c.to_integer());
            }
        }
        let elem = LinearElement::from_matz(&m)
            .map_err(|e| reject(format!("generator {gi} rejected: {e}")))?;
        if elem.order().is_none() {
            return Err(reject(format!("generator {gi} has unbounded order")));
        }
        realified.push(elem);
    }
    let group = FiniteMatrixGroup::new(d, realified.clone())?.with_known_order(data.known_order);
    let caps = Caps::default();
    if data.known_order <= CLOSURE_VERIFY_LIMIT {
        group
            .close(&caps)
            .map_err(|e| reject(format!("declared order not confirmed by closure: {e}")))?;
        if let Some(expected) = data.known_reflections {
            let found = crate::groups::pseudoreflections(&group, &caps)?.len() as u64;
            if found != expected {
                return Err(reject(format!(
                    "declared {expected} pseudoreflections but found {found}"
                )));
            }
        }
    }
    let scenario = Scenario::new(
        data.label.clone(),
        torus,
        group,
        None,
        data.display_name.clone(),
    )
    .map_err(|e| reject(format!("scenario rejected: {e}")))?;
    // designated reflections for the S endomorphism
    let mut designated = Vec::with_capacity(data.designated_reflections.len());
    for &i in &data.designated_reflections {
        let elem = realified
            .get(i)
            .ok_or_else(|| reject(format!("designated index {i} out of range")))?;
        if !is_pseudoreflection(elem).is_pseudoreflection {
            return Err(reject(format!("designated generator {i} is not a pseudoreflection")));
        }
        designated.push(elem.clone());
    }
    for (name, coords) in &data.extra_vectors {
        if coords.len() != d {
            return Err(reject(format!("extra vector {name} must have {d} coordinates")));
        }
        for c in coords {
            parse_rat(c).map_err(reject)?;
        }
    }
    for row in &data.table_rows {
        if row.v0.len() != d {
            return Err(reject(format!(
                "table row on {} must have {d} coordinates",
                row.lattice
            )));
        }
        for c in &row.v0 {
            parse_rat(c).map_err(reject)?;
        }
    }
    let bundle = SporadicBundle { data, scenario, designated };
    // when the preimage lattice is strictly larger, the shipped cases have a
    // trivial induced action on the quotient; verify it on the scaled
    // preimage basis directly
    if !bundle.designated.is_empty() {
        let family = bundle.lattice_family()?;
        if !family.det_real.is_one() {
            let q = &family.det_real;
            let (scaled_preimage, _) = family
                .s_real
                .to_q()
                .inverse()
                .expect("S is nonsingular")
                .scale(&Rat::from_integer(q.clone()))
                .clear_denominators();
            for g in bundle.scenario.group().generators() {
                let gm = g.to_matz();
                for j in 0..scaled_preimage.cols() {
                    let v = scaled_preimage.col_vec(j);
                    let moved = gm.mul_vec(&v);
                    let diff: Vec<Int> =
                        moved.iter().zip(&v).map(|(a, b)| a.clone() - b.clone()).collect();
                    if diff.iter().any(|c| !(c.clone() % q.clone()).is_zero()) {
                        return Err(reject(
                            "the group acts nontrivially on the preimage quotient",
                        ));
                    }
                }
            }
        }
        // every published row must name a lattice of the family
        for row in &bundle.data.table_rows {
            if family.member(&row.lattice).is_none() {
                return Err(reject(format!("table row names unknown lattice {}", row.lattice)));
            }
        }
    }
    Ok(bundle)
}

/// Environment variable overriding the data directory.
pub const DATA_DIR_ENV: &str = "CST_DATA_DIR";

/// Directory holding the shipped data files: the override variable when
/// set, else the `data/sporadic` tree next to the workspace crates.
pub fn default_data_dir() -> PathBuf {
    if let Ok(dir) = std::env::var(DATA_DIR_ENV) {
        return PathBuf::from(dir);
    }
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/sporadic")
}

/// File stems of the shipped data files.
pub fn builtin_data_stems() -> &'static [&'static str] {
    &[
        "st04", "st05", "st08", "st12", "st24", "st25", "st26-1", "st26-2", "st28-1",
        "st28-2", "st28-3", "st29", "st31", "st32", "st33", "st34", "st35", "st36", "st37",
    ]
}

/// Load a shipped data file by stem from the given directory (or the
/// default one).
pub fn load_builtin_sporadic(stem: &str, data_dir: Option<&Path>) -> Result<SporadicBundle> {
    let dir = data_dir.map(Path::to_path_buf).unwrap_or_else(default_data_dir);
    load_sporadic(&dir.join(format!("{stem}.json")))
}

// ---------------------------------------------------------------------------
// Label resolution
// ---------------------------------------------------------------------------

/// Resolve a stable scenario label. Data-file scenarios use their stem,
/// optionally suffixed with "/label" to select a lattice of the family.
pub fn builtin(label: &str, data_dir: Option<&Path>) -> Result<Scenario> {
    if label.starts_with("st") {
        let (stem, member) = match label.split_once('/') {
            Some((s, m)) => (s, Some(m)),
            None => (label, None),
        };
        let bundle = load_builtin_sporadic(stem, data_dir)?;
        return match member {
            None => Ok(bundle.scenario),
            Some(m) => {
                let family = bundle.lattice_family()?;
                family.member_scenario(&bundle.scenario, m)
            }
        };
    }
    let parts: Vec<&str> = label.split('-').collect();
    let parse = |s: &str| -> Result<u64> {
        s.parse::<u64>()
            .map_err(|_| Error::InvalidParameter(format!("unknown scenario label `{label}`")))
    };
    match parts.as_slice() {
        ["gmpn", m, p, n] => build_gmpn(parse(m)? as u8, parse(p)? as u8, parse(n)? as usize),
        ["gmpn", m, p, n, "diagonal"] => {
            build_diagonal_delta_gmpn(parse(m)? as u8, parse(p)? as u8, parse(n)? as usize)
        }
        ["example", "a", m, n] => build_example_a(parse(m)? as u8, parse(n)? as usize),
        ["example", "b", n] => build_example_b(parse(n)? as usize),
        ["example", "b", n, "diagonal"] => build_diagonal_delta_example_b(parse(n)? as usize),
        ["hyperplanar", m, p, n] => {
            build_hyperplanar_scenario(parse(m)? as u8, parse(p)? as u8, parse(n)? as usize)
        }
        ["incomplete", "hyperplanar", "2", p, n] => {
            build_incomplete_hyperplanar_scenario(parse(p)? as u8, parse(n)? as usize)
        }
        _ => Err(Error::InvalidParameter(format!("unknown scenario label `{label}`"))),
    }
}

/// A representative list of resolvable labels (the families accept any
/// valid parameters; this list drives help output and smoke tests).
pub fn builtin_labels() -> Vec<String> {
    let mut out = Vec::new();
    for (m, ps) in [(2u8, &[1u8, 2][..]), (3, &[1, 3][..]), (4, &[1, 2, 4][..]), (6, &[1, 2, 3, 6][..])] {
        for &p in ps {
            out.push(format!("gmpn-{m}-{p}-3"));
        }
        out.push(format!("example-a-{m}-3"));
    }
    for n in [2usize, 3, 4] {
        out.push(format!("example-b-{n}"));
    }
    out.push("example-b-3-diagonal".into());
    for m in [2u8, 3, 4] {
        out.push(format!("gmpn-{m}-{m}-3-diagonal"));
        out.push(format!("hyperplanar-{m}-{m}-3"));
    }
    out.push("incomplete-hyperplanar-2-2-3".into());
    out.extend(builtin_data_stems().iter().map(|s| s.to_string()));
    out
}

// ---------------------------------------------------------------------------
