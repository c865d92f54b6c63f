//! Complex tori in the integral picture and their geometry.
//!
//! A torus of complex dimension `n` is modeled as `R^{2n}/Z^{2n}` together
//! with a rational matrix `W` (the *multiplication witness*) whose minimal
//! polynomial is quadratic with negative discriminant. `W` generates an
//! imaginary quadratic field inside the rational endomorphism algebra, so a
//! rational matrix is C-linear for the underlying complex structure exactly
//! when it commutes with `W`, and a rational subspace is a complex subspace
//! exactly when it is `W`-stable. For square and Gaussian lattices `W` is a
//! genuine complex structure (`W² = −I`); for the Eisenstein/sixth-root
//! lattices it is multiplication by a primitive cube or sixth root of unity,
//! which generates the same field action (a rational `J` with `J² = −I`
//! commuting with the group does not exist there).
//!
//! The module provides the geometric constructions attached to group
//! elements: images of endomorphisms as subtori, finite intersections of
//! subtori, averaged invariant forms, orthogonal complements, isogeny
//! kernels, and decomposition along reflection orbits.

use num::{Integer, One, Signed, Zero};

use crate::exact::{
    denominator_lcm, int, kernel_lattice, lattice_meet_join, mod1, quotient_structure, snf, Int,
    LatticeBasis, MatQ, MatZ, Rat,
};
use crate::groups::{Caps, FiniteMatrixGroup, LinearElement};
use crate::{Error, Result};

/// Element lists of finite subgroups are cached only below this size.
pub const SUBGROUP_ELEMENT_CAP: usize = 1_000_000;

// ---------------------------------------------------------------------------
// Torsion points
// ---------------------------------------------------------------------------

/// A torsion point of `R^d/Z^d`: rational coordinates reduced into `[0, 1)`,
/// stored over the least common denominator. Canonical: the denominator is
/// minimal, so it equals the order of the point, and the derived ordering is
/// lexicographic on (torsion level, coordinate encoding).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionPoint {
    den: i64,
    nums: Vec<i64>,
}

impl std::fmt::Debug for TorsionPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

impl std::fmt::Display for TorsionPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, &n) in self.nums.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if n == 0 {
                write!(f, "0")?;
            } else {
                let g = n.gcd(&self.den);
                write!(f, "{}/{}", n / g, self.den / g)?;
            }
        }
        write!(f, ")")
    }
}

impl TorsionPoint {
    /// The origin.
    pub fn zero(dim: usize) -> Self {
        TorsionPoint { den: 1, nums: vec![0; dim] }
    }

    /// Canonicalize numerators over a common denominator.
    pub fn from_i64(den: i64, nums: &[i64]) -> Self {
        assert!(den > 0, "denominator must be positive");
        let mut nums: Vec<i64> = nums.iter().map(|&n| n.rem_euclid(den)).collect();
        let mut g = den;
        for &n in &nums {
            g = g.gcd(&n);
        }
        if g > 1 {
            for n in &mut nums {
                *n /= g;
            }
        }
        TorsionPoint { den: den / g.max(1), nums }
    }

    /// Canonicalize a rational coordinate vector.
    pub fn from_rats(coords: &[Rat]) -> Self {
        let den_big = denominator_lcm(coords);
        let den = i64::try_from(&den_big).expect("torsion denominator exceeds i64");
        let nums: Vec<i64> = coords
            .iter()
            .map(|c| {
                let scaled = c * Rat::from_integer(den_big.clone());
                debug_assert!(scaled.is_integer());
                i64::try_from(&scaled.to_integer()).expect("torsion numerator exceeds i64")
            })
            .collect();
        TorsionPoint::from_i64(den, &nums)
    }

    pub fn dim(&self) -> usize {
        self.nums.len()
    }

    /// The order of the point in the torus (equals the canonical denominator).
    pub fn level(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.nums.iter().all(|&n| n == 0)
    }

    pub fn to_rats(&self) -> Vec<Rat> {
        self.nums.iter().map(|&n| Rat::new(int(n), int(self.den))).collect()
    }

    /// Image under an integer matrix (same denominator; the matrix acts on
    /// numerators mod den).
    pub fn apply(&self, g: &LinearElement) -> TorsionPoint {
        assert_eq!(g.dim(), self.dim(), "dimension mismatch");
        let d = self.dim();
        let mut nums = vec![0i64; d];
        for (i, out) in nums.iter_mut().enumerate() {
            let mut acc: i64 = 0;
            for (j, &x) in self.nums.iter().enumerate() {
                acc += i64::from(g.at(i, j)) * x;
            }
            *out = acc.rem_euclid(self.den);
        }
        TorsionPoint::from_i64(self.den, &nums)
    }

    /// Image under an arbitrary integer matrix (slow exact path).
    pub fn apply_matz(&self, m: &MatZ) -> TorsionPoint {
        let image = m.mul_vec_rat(&self.to_rats());
        let reduced: Vec<Rat> = image.iter().map(mod1).collect();
        TorsionPoint::from_rats(&reduced)
    }

    pub fn add(&self, other: &TorsionPoint) -> TorsionPoint {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let den = self.den.lcm(&other.den);
        let (a, b) = (den / self.den, den / other.den);
        let nums: Vec<i64> = self
            .nums
            .iter()
            .zip(&other.nums)
            .map(|(&x, &y)| (x * a + y * b).rem_euclid(den))
            .collect();
        TorsionPoint::from_i64(den, &nums)
    }

    pub fn neg(&self) -> TorsionPoint {
        let nums: Vec<i64> = self.nums.iter().map(|&n| (-n).rem_euclid(self.den)).collect();
        TorsionPoint::from_i64(self.den, &nums)
    }

    pub fn sub(&self, other: &TorsionPoint) -> TorsionPoint {
        self.add(&other.neg())
    }

    pub fn scaled(&self, k: i64) -> TorsionPoint {
        let nums: Vec<i64> = self.nums.iter().map(|&n| (n * k).rem_euclid(self.den)).collect();
        TorsionPoint::from_i64(self.den, &nums)
    }
}

// ---------------------------------------------------------------------------
// Complex tori
// ---------------------------------------------------------------------------

/// A complex torus `C^n / Λ` with `Λ = Z^{2n}` in a fixed basis and a
/// rational multiplication witness `W` satisfying `W² + bW + cI = 0` with
/// `b² − 4c < 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComplexTorus {
    dim_c: usize,
    witness: MatQ,
    rel_b: Rat,
    rel_c: Rat,
    cm_tag: Option<u8>,
}

/// 2×2 block realizing multiplication by a primitive m-th root of unity on
/// the lattice `Z[ζ_m]` in the power basis `{1, ζ_m}` (square lattice for m = 2).
pub fn root_of_unity_block(m: u8) -> MatZ {
    match m {
        // the m = 2 family is curve-independent; the square lattice stands in
        2 | 4 => MatZ::from_i64_rows(&[vec![0, -1], vec![1, 0]]),
        3 => MatZ::from_i64_rows(&[vec![0, -1], vec![1, -1]]),
        6 => MatZ::from_i64_rows(&[vec![0, -1], vec![1, 1]]),
        _ => panic!("no lattice root-of-unity block for m = {m}"),
    }
}

impl ComplexTorus {
    /// Build from an explicit witness; validates the quadratic relation and
    /// its negative discriminant.
    pub fn with_witness(dim_c: usize, witness: MatQ, cm_tag: Option<u8>) -> Result<Self> {
        let d = 2 * dim_c;
        if witness.rows() != d || witness.cols() != d {
            return Err(Error::Mismatch(format!(
                "witness must be {d}×{d} for complex dimension {dim_c}"
            )));
        }
        // express W² in the basis {W, I}: W² = −b·W − c·I
        let w2 = witness.mul(&witness);
        let system = MatQ::from_fn(d * d, 2, |k, col| {
            let (i, j) = (k / d, k % d);
            if col == 0 {
                witness.at(i, j).clone()
            } else if i == j {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        let rhs: Vec<Rat> = (0..d * d).map(|k| w2.at(k / d, k % d).clone()).collect();
        let sol = system
            .solve(&rhs)
            .ok_or_else(|| Error::InvalidParameter("witness has no quadratic relation".into()))?;
        // verify (solve returns a least-constrained solution; re-check exactly)
        let recombined = witness.scale(&sol[0]).add(&MatQ::identity(d).scale(&sol[1]));
        if recombined != w2 {
            return Err(Error::InvalidParameter("witness has no quadratic relation".into()));
        }
        let (rel_b, rel_c) = (-sol[0].clone(), -sol[1].clone());
        let disc = &rel_b * &rel_b - Rat::from_integer(int(4)) * &rel_c;
        if !disc.is_negative() {
            return Err(Error::InvalidParameter(
                "witness discriminant must be negative (imaginary quadratic)".into(),
            ));
        }
        Ok(ComplexTorus { dim_c, witness, rel_b, rel_c, cm_tag })
    }

    /// `E_m^n` for `m ∈ {2, 3, 4, 6}`: block-diagonal root-of-unity witness.
    pub fn cyclotomic(m: u8, n: usize) -> Result<Self> {
        if !matches!(m, 2 | 3 | 4 | 6) {
            return Err(Error::InvalidParameter(format!("unsupported multiplication order {m}")));
        }
        let block = root_of_unity_block(m);
        let w = MatZ::from_fn(2 * n, 2 * n, |i, j| {
            if i / 2 == j / 2 { block.at(i % 2, j % 2).clone() } else { Int::zero() }
        });
        ComplexTorus::with_witness(n, w.to_q(), Some(m))
    }

    /// Square-lattice torus without a CM tag (curve-independent modeling).
    pub fn square(n: usize) -> Self {
        let block = root_of_unity_block(2);
        let w = MatZ::from_fn(2 * n, 2 * n, |i, j| {
            if i / 2 == j / 2 { block.at(i % 2, j % 2).clone() } else { Int::zero() }
        });
        ComplexTorus::with_witness(n, w.to_q(), None).expect("square witness is valid")
    }

    pub fn complex_dim(&self) -> usize {
        self.dim_c
    }

    pub fn real_rank(&self) -> usize {
        2 * self.dim_c
    }

    pub fn witness(&self) -> &MatQ {
        &self.witness
    }

    /// CM tag `m` when the torus was built as `E_m^n`.
    pub fn cm_tag(&self) -> Option<u8> {
        self.cm_tag
    }

    /// Whether an integer matrix is C-linear (commutes with the witness).
    pub fn commutes_with(&self, m: &MatZ) -> bool {
        let mq = m.to_q();
        mq.mul(&self.witness) == self.witness.mul(&mq)
    }

    /// Whether the Q-span of a lattice is a complex subspace (W-stable).
    pub fn is_complex_span(&self, l: &LatticeBasis) -> bool {
        l.vectors().iter().all(|v| {
            let as_rat: Vec<Rat> = v.iter().map(|x| Rat::from_integer(x.clone())).collect();
            let image = self.witness.mul_vec(&as_rat);
            l.solve_coords_rat(&image).is_some()
        })
    }
}

// ---------------------------------------------------------------------------
// Subtori
// ---------------------------------------------------------------------------

/// A subtorus: a saturated sublattice whose Q-span is a complex subspace.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subtorus {
    lattice: LatticeBasis,
}

impl Subtorus {
    /// Saturate the generating lattice and verify complex stability.
    pub fn new(torus: &ComplexTorus, generated_by: &LatticeBasis) -> Result<Self> {
        if generated_by.ambient() != torus.real_rank() {
            return Err(Error::Mismatch("lattice ambient differs from torus rank".into()));
        }
        let lattice = generated_by.saturate();
        if !torus.is_complex_span(&lattice) {
            return Err(Error::InvalidParameter("span is not a complex subspace".into()));
        }
        Ok(Subtorus { lattice })
    }

    pub fn trivial(torus: &ComplexTorus) -> Self {
        Subtorus { lattice: LatticeBasis::empty(torus.real_rank()) }
    }

    pub fn full(torus: &ComplexTorus) -> Self {
        Subtorus { lattice: LatticeBasis::standard(torus.real_rank()) }
    }

    pub fn lattice(&self) -> &LatticeBasis {
        &self.lattice
    }

    pub fn real_rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Complex dimension (half the real rank; real rank is even for subtori).
    pub fn complex_dim(&self) -> usize {
        debug_assert!(self.lattice.rank().is_multiple_of(2));
        self.lattice.rank() / 2
    }

    pub fn is_trivial(&self) -> bool {
        self.lattice.is_empty()
    }

    /// Whether a torsion point lies on the subtorus (its class meets span + Z^d).
    pub fn contains_point(&self, x: &TorsionPoint) -> bool {
        if self.lattice.is_empty() {
            return x.is_zero();
        }
        solve_on_torus(self.lattice.basis_matrix(), &x.to_rats()).is_some()
    }
}

/// Subtorus spanned by a subset of the complex coordinates of a product torus.
pub fn coordinate_subtorus(torus: &ComplexTorus, coords: &[usize]) -> Result<Subtorus> {
    let d = torus.real_rank();
    let mut gens = Vec::with_capacity(2 * coords.len());
    for &j in coords {
        if 2 * j + 1 >= d {
            return Err(Error::InvalidParameter(format!("coordinate {j} out of range")));
        }
        for k in [2 * j, 2 * j + 1] {
            let mut e = vec![Int::from(0); d];
            e[k] = Int::from(1);
            gens.push(e);
        }
    }
    Subtorus::new(torus, &LatticeBasis::from_generators(d, &gens))
}

/// Solve `M·y ≡ t (mod Z^rows)` for a rational `y`; returns one solution
/// reduced componentwise into `[0, 1)^cols`, or `None` when unsolvable.
pub fn solve_on_torus(m: &MatZ, t: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(m.rows(), t.len(), "shape mismatch");
    let (d, u, v) = snf(m);
    let k = m.rows().min(m.cols());
    let rank = (0..k).filter(|&i| !d.at(i, i).is_zero()).count();
    let ut = u.mul_vec_rat(t);
    // rows past the rank must be integral for solvability
    if ut.iter().skip(rank).any(|c| !c.is_integer()) {
        return None;
    }
    let mut y = vec![Rat::zero(); m.cols()];
    for (i, yi) in y.iter_mut().enumerate().take(rank) {
        *yi = &ut[i] / Rat::from_integer(d.at(i, i).clone());
    }
    Some(v.mul_vec_rat(&y).iter().map(mod1).collect())
}

// ---------------------------------------------------------------------------
// Finite subgroups of torsion points
// ---------------------------------------------------------------------------

/// A finite subgroup of the torsion points of `R^d/Z^d`, with invariant
/// factors; the full element list is cached below [`SUBGROUP_ELEMENT_CAP`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteSubgroup {
    dim: usize,
    generators: Vec<TorsionPoint>,
    invariant_factors: Vec<Int>,
    elements: Option<Vec<TorsionPoint>>,
}

impl FiniteSubgroup {
    pub fn trivial(dim: usize) -> Self {
        FiniteSubgroup {
            dim,
            generators: Vec::new(),
            invariant_factors: Vec::new(),
            elements: Some(vec![TorsionPoint::zero(dim)]),
        }
    }

    /// Subgroup generated by torsion points; computes invariant factors via
    /// the Smith form of the generated lattice over `Z^d`.
    pub fn from_generators(dim: usize, generators: &[TorsionPoint]) -> Result<Self> {
        if generators.iter().any(|g| g.dim() != dim) {
            return Err(Error::Mismatch("generator dimension mismatch".into()));
        }
        let gens: Vec<TorsionPoint> =
            generators.iter().filter(|g| !g.is_zero()).cloned().collect();
        if gens.is_empty() {
            return Ok(FiniteSubgroup::trivial(dim));
        }
        // scale by the common denominator: the subgroup is (Z^d + Σ Z·t_i)/Z^d
        // ≅ L/qZ^d for L generated by {q·e_i} ∪ {q·t_i}
        let q = gens.iter().fold(1i64, |acc, g| acc.lcm(&g.level()));
        let mut cols: Vec<Vec<Int>> = Vec::new();
        for i in 0..dim {
            let mut e = vec![Int::zero(); dim];
            e[i] = int(q);
            cols.push(e);
        }
        for g in &gens {
            let col: Vec<Int> = g
                .to_rats()
                .iter()
                .map(|c| {
                    let scaled = c * Rat::from_integer(int(q));
                    debug_assert!(scaled.is_integer());
                    scaled.to_integer()
                })
                .collect();
            cols.push(col);
        }
        let l_big = LatticeBasis::from_generators(dim, &cols);
        let l_small = LatticeBasis::standard(dim).scaled(&int(q));
        let (factors, reps) = quotient_structure(&l_big, &l_small)?;
        // representatives w.r.t. the basis q·I of L_small are literally the
        // torsion coordinates of the subgroup elements
        let order: Int = factors.iter().fold(Int::one(), |acc, f| acc * f);
        let elements = if order <= int(SUBGROUP_ELEMENT_CAP as i64) {
            let mut pts: Vec<TorsionPoint> =
                reps.iter().map(|r| TorsionPoint::from_rats(r)).collect();
            pts.sort_unstable();
            Some(pts)
        } else {
            None
        };
        Ok(FiniteSubgroup { dim, generators: gens, invariant_factors: factors, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[TorsionPoint] {
        &self.generators
    }

    /// Invariant factors greater than 1.
    pub fn invariant_factors(&self) -> &[Int] {
        &self.invariant_factors
    }

    pub fn order(&self) -> Int {
        self.invariant_factors.iter().fold(Int::one(), |acc, f| acc * f)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Sorted element list (`None` above the cache cap).
    pub fn elements(&self) -> Option<&[TorsionPoint]> {
        self.elements.as_deref()
    }

    pub fn contains(&self, x: &TorsionPoint) -> bool {
        match &self.elements {
            Some(els) => els.binary_search(x).is_ok(),
            None => {
                // membership via the generated lattice, without enumeration
                let q = self
                    .generators
                    .iter()
                    .fold(x.level(), |acc, g| acc.lcm(&g.level()));
                let dim = self.dim;
                let mut cols: Vec<Vec<Int>> = Vec::new();
                for i in 0..dim {
                    let mut e = vec![Int::zero(); dim];
                    e[i] = int(q);
                    cols.push(e);
                }
                for g in &self.generators {
                    cols.push(scaled_int_vec(&g.to_rats(), q));
                }
                let l = LatticeBasis::from_generators(dim, &cols);
                l.contains_int(&scaled_int_vec(&x.to_rats(), q))
            }
        }
    }

    /// Whether the subgroup is stable under an integer matrix.
    pub fn is_stable_under(&self, g: &MatZ) -> bool {
        self.generators.iter().all(|t| self.contains(&t.apply_matz(g)))
    }
}

fn scaled_int_vec(v: &[Rat], q: i64) -> Vec<Int> {
    v.iter()
        .map(|c| {
            let scaled = c * Rat::from_integer(int(q));
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Endomorphism helpers
// ---------------------------------------------------------------------------

/// `I − g` as an integer matrix.
pub fn one_minus(g: &LinearElement) -> MatZ {
    MatZ::identity(g.dim()).sub(&g.to_matz())
}

/// Norm map `I + g + g² + ⋯ + g^{r−1}`.
pub fn norm_map(g: &LinearElement, r: u64) -> MatZ {
    let gm = g.to_matz();
    let mut acc = MatZ::identity(g.dim());
    let mut power = MatZ::identity(g.dim());
    for _ in 1..r {
        power = power.mul(&gm);
        acc = acc.add(&power);
    }
    acc
}

// ---------------------------------------------------------------------------
// Geometric operations
// ---------------------------------------------------------------------------

/// Subtorus generated by the image of an endomorphism: the saturation of
/// `f(Z^{2n})`. The zero map yields the trivial subtorus.
pub fn endo_image_subtorus(torus: &ComplexTorus, f: &MatZ) -> Result<Subtorus> {
    if f.rows() != torus.real_rank() || f.cols() != torus.real_rank() {
        return Err(Error::Mismatch("endomorphism shape differs from torus rank".into()));
    }
    if !torus.commutes_with(f) {
        return Err(Error::InvalidParameter("endomorphism does not commute with the witness".into()));
    }
    let image = LatticeBasis::from_cols_matrix(f);
    Subtorus::new(torus, &image)
}

/// The finite group `T1 ∩ T2` for subtori with independent spans, realized
/// as torsion points lying on both subtori.
pub fn subtorus_intersection_group(
    torus: &ComplexTorus,
    t1: &Subtorus,
    t2: &Subtorus,
) -> Result<FiniteSubgroup> {
    let d = torus.real_rank();
    if t1.lattice().ambient() != d || t2.lattice().ambient() != d {
        return Err(Error::Mismatch("subtorus ambient differs from torus rank".into()));
    }
    if t1.is_trivial() || t2.is_trivial() {
        return Ok(FiniteSubgroup::trivial(d));
    }
    let (sum, meet) = lattice_meet_join(t1.lattice(), t2.lattice())?;
    if !meet.is_empty() {
        return Err(Error::InvalidParameter("subtorus spans intersect nontrivially".into()));
    }
    // T1 ∩ T2 ≅ N/(Λ1 ⊕ Λ2) with N = Z^d ∩ (V1 ⊕ V2); a class w ∈ N maps to
    // the point w1 mod Z^d where w = w1 + w2 is the span decomposition
    let n_lattice = sum.saturate();
    let (_, reps) = quotient_structure(&n_lattice, &sum)?;
    let stacked = t1.lattice().basis_matrix().hstack(t2.lattice().basis_matrix()).to_q();
    let r1 = t1.lattice().rank();
    let mut points = Vec::with_capacity(reps.len());
    for rep in &reps {
        let w = sum.basis_matrix().mul_vec_rat(rep);
        debug_assert!(w.iter().all(Rat::is_integer), "class representative must be integral");
        let coords = stacked.solve(&w).expect("w lies in V1 ⊕ V2 by construction");
        let w1 = t1.lattice().basis_matrix().mul_vec_rat(&coords[..r1]);
        let reduced: Vec<Rat> = w1.iter().map(mod1).collect();
        points.push(TorsionPoint::from_rats(&reduced));
    }
    FiniteSubgroup::from_generators(d, &points)
}

/// Averaged positive-definite invariant form `Q = Σ_{g∈G} gᵀ·g`.
pub fn invariant_form(group: &FiniteMatrixGroup, caps: &Caps) -> Result<MatQ> {
    let elements = group.close(caps)?;
    let d = group.dim();
    let mut q = MatZ::zero(d, d);
    for g in elements {
        let m = g.to_matz();
        q = q.add(&m.transpose().mul(&m));
    }
    Ok(q.to_q())
}

/// Saturation of `{v ∈ Z^{2n} : vᵀQw = 0 for all w ∈ T}`, the Q-orthogonal
/// complementary subtorus.
pub fn complementary_subtorus(
    torus: &ComplexTorus,
    t: &Subtorus,
    q: &MatQ,
) -> Result<Subtorus> {
    let d = torus.real_rank();
    if t.is_trivial() {
        return Ok(Subtorus::full(torus));
    }
    if t.real_rank() == d {
        return Ok(Subtorus::trivial(torus));
    }
    // orthogonality conditions: rows of Bᵀ·Q, denominators cleared
    let conditions = t.lattice().basis_matrix().to_q().transpose().mul(q);
    let (cleared, _) = conditions.clear_denominators();
    let kernel = kernel_lattice(&cleared);
    let complement = Subtorus::new(torus, &kernel)?;
    debug_assert_eq!(complement.real_rank() + t.real_rank(), d, "ranks must add up");
    Ok(complement)
}

/// Kernel `Δ = Λ_A/Λ_B` of the isogeny `B → A`, as torsion points of `B`
/// (coordinates with respect to the basis of `Λ_B`).
pub fn isogeny_kernel(l_a: &LatticeBasis, l_b: &LatticeBasis) -> Result<FiniteSubgroup> {
    let (_, reps) = quotient_structure(l_a, l_b)?;
    let points: Vec<TorsionPoint> = reps.iter().map(|r| TorsionPoint::from_rats(r)).collect();
    FiniteSubgroup::from_generators(l_a.ambient(), &points)
}

/// Decomposition of the torus along reflection orbits: groups the
/// pseudoreflections by the G-orbits of their root lines (orbits with
/// overlapping spans merged), returns the subtori `A_i` spanned by each
/// family and the index of `⊕Λ_{A_i}` in `Λ` (the order of the kernel of
/// `∏A_i → A`).
///
/// Errors when a nonzero G-fixed rational vector exists; split that part off
/// first via [`complementary_subtorus`].
pub fn decompose_by_reflection_orbits(
    torus: &ComplexTorus,
    group: &FiniteMatrixGroup,
    caps: &Caps,
) -> Result<(Vec<Subtorus>, Int)> {
    let d = torus.real_rank();
    // reject a nonzero fixed vector: the stacked (g − I) over the generators
    // must have full column rank
    let gens = group.generators();
    if gens.is_empty() {
        return Err(Error::InvalidParameter("the trivial group fixes everything".into()));
    }
    let mut stacked = one_minus(&gens[0]);
    for g in &gens[1..] {
        stacked = stacked.vstack(&one_minus(g));
    }
    if stacked.rank() < d {
        return Err(Error::InvalidParameter(
            "the action has nonzero fixed vectors; split off the fixed part first".into(),
        ));
    }
    // collect root lines of all pseudoreflections
    let mut lines: Vec<LatticeBasis> = Vec::new();
    for g in group.close(caps)? {
        let report = crate::groups::is_pseudoreflection(g);
        if report.is_pseudoreflection {
            lines.push(report.root_line.expect("pseudoreflection has a root line"));
        }
    }
    lines.sort_unstable();
    lines.dedup();
    if lines.is_empty() {
        return Err(Error::NotFound("the group contains no pseudoreflections".into()));
    }
    // orbit partition of the lines under the generator action
    let mut orbit_of: Vec<Option<usize>> = vec![None; lines.len()];
    let mut orbit_count = 0;
    for start in 0..lines.len() {
        if orbit_of[start].is_some() {
            continue;
        }
        let id = orbit_count;
        orbit_count += 1;
        let mut queue = vec![start];
        orbit_of[start] = Some(id);
        while let Some(i) = queue.pop() {
            for g in group.generators() {
                let gm = g.to_matz();
                let image_gens: Vec<Vec<Int>> =
                    lines[i].vectors().iter().map(|v| gm.mul_vec(v)).collect();
                let image = LatticeBasis::from_generators(d, &image_gens);
                let j = lines.binary_search(&image).expect("orbit left the line set");
                if orbit_of[j].is_none() {
                    orbit_of[j] = Some(id);
                    queue.push(j);
                }
            }
        }
    }
    // span lattice of each orbit
    let mut spans: Vec<LatticeBasis> = Vec::new();
    for id in 0..orbit_count {
        let mut gens: Vec<Vec<Int>> = Vec::new();
        for (i, line) in lines.iter().enumerate() {
            if orbit_of[i] == Some(id) {
                gens.extend(line.vectors());
            }
        }
        spans.push(LatticeBasis::from_generators(d, &gens));
    }
    // merge orbits whose spans overlap (the decomposition theorem predicts
    // none for a fixed-point-free action; merging keeps the output honest)
    let mut family: Vec<usize> = (0..spans.len()).collect();
    loop {
        let mut merged = false;
        'search: for a in 0..spans.len() {
            for b in (a + 1)..spans.len() {
                if family[a] != family[b] {
                    let (_, meet) = lattice_meet_join(&spans[a], &spans[b])?;
                    if !meet.is_empty() {
                        let (fa, fb) = (family[a], family[b]);
                        for f in family.iter_mut() {
                            if *f == fb {
                                *f = fa;
                            }
                        }
                        merged = true;
                        break 'search;
                    }
                }
            }
        }
        if !merged {
            break;
        }
    }
    let family_ids: Vec<usize> = {
        let mut ids: Vec<usize> = family.clone();
        ids.sort_unstable();
        ids.dedup();
        ids
    };
    let mut subtori = Vec::new();
    let mut all_gens: Vec<Vec<Int>> = Vec::new();
    for id in family_ids {
        let mut gens: Vec<Vec<Int>> = Vec::new();
        for (k, span) in spans.iter().enumerate() {
            if family[k] == id {
                gens.extend(span.vectors());
            }
        }
        let sub = Subtorus::new(torus, &LatticeBasis::from_generators(d, &gens))?;
        all_gens.extend(sub.lattice().vectors());
        subtori.push(sub);
    }
    subtori.sort_unstable_by(|a, b| a.lattice().cmp(b.lattice()));
    let direct_sum = LatticeBasis::from_generators(d, &all_gens);
    if direct_sum.rank() != d {
        return Err(Error::InvalidParameter(
            "reflection orbits do not span; the action has a fixed part".into(),
        ));
    }
    let index = direct_sum.index_in(&LatticeBasis::standard(d))?;
    Ok((subtori, index))
}
