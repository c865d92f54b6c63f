//! Finite integer matrix groups and their affine extensions.
//!
//! Elements are unimodular integer matrices stored compactly (i32 entries
//! with checked i64 accumulation); all arithmetic is exact. The module
//! provides closure under multiplication, pseudoreflection detection,
//! orbit–stabilizer enumeration on torsion points (Schreier generators with
//! incremental closure), reflection subgroups, and affine elements `(t, g)`
//! acting by `x ↦ g·x + t` on the torus.

use indexmap::IndexSet;
use num::{Signed, Zero};

use crate::exact::{mod1, Int, LatticeBasis, MatZ, Rat};
use crate::torus::{solve_on_torus, TorsionPoint};
use crate::{Error, Result};

/// Enumeration caps; `Default` matches the documented limits.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    /// Maximum number of elements in a group closure.
    pub closure: usize,
    /// Maximum orbit length in orbit–stabilizer runs.
    pub orbit: usize,
    /// Maximum stabilizer closure size.
    pub stabilizer: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { closure: 10_000_000, orbit: 1_000_000, stabilizer: 1_000_000 }
    }
}

/// Search bound for element orders (far above any order arising in a
/// finite unimodular group of the sizes treated here).
const ORDER_SEARCH_CAP: u64 = 100_000;

// ---------------------------------------------------------------------------
// Linear elements
// ---------------------------------------------------------------------------

/// A unimodular integer matrix, the linear part of a torus automorphism.
/// The derived ordering (dimension, then row-major entries) is the canonical
/// encoding used everywhere for deterministic element lists.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearElement {
    n: usize,
    data: Box<[i32]>,
}

impl std::fmt::Debug for LinearElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl LinearElement {
    /// Validate shape, entry size, and unimodularity.
    pub fn from_matz(m: &MatZ) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::Mismatch("group elements must be square".into()));
        }
        let n = m.rows();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = i32::try_from(m.at(i, j)).map_err(|_| {
                    Error::InvalidParameter("matrix entry exceeds the compact range".into())
                })?;
                data.push(e);
            }
        }
        let det = m.det();
        if det != Int::from(1) && det != Int::from(-1) {
            return Err(Error::InvalidParameter(format!(
                "group elements must be unimodular (det = {det})"
            )));
        }
        Ok(LinearElement { n, data: data.into_boxed_slice() })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        LinearElement::from_matz(&MatZ::from_i64_rows(rows))
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0i32; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        LinearElement { n, data: data.into_boxed_slice() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> i32 {
        self.data[i * self.n + j]
    }

    pub fn to_matz(&self) -> MatZ {
        MatZ::from_fn(self.n, self.n, |i, j| Int::from(self.at(i, j)))
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.at(i, j) == i32::from(i == j)))
    }

    /// Product with checked accumulation; `None` on entry overflow (which
    /// cannot happen inside a finite group).
    pub fn checked_mul(&self, other: &LinearElement) -> Option<LinearElement> {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: i64 = 0;
                for k in 0..n {
                    acc = acc
                        .checked_add(i64::from(self.at(i, k)) * i64::from(other.at(k, j)))?;
                }
                data.push(i32::try_from(acc).ok()?);
            }
        }
        Some(LinearElement { n, data: data.into_boxed_slice() })
    }

    /// Product; panics on overflow (use [`Self::checked_mul`] for untrusted
    /// input).
    pub fn mul(&self, other: &LinearElement) -> LinearElement {
        self.checked_mul(other).expect("entry overflow: not a finite matrix group")
    }

    pub fn inverse(&self) -> LinearElement {
        let inv = self.to_matz().inv_unimodular();
        LinearElement::from_matz(&inv).expect("inverse of a unimodular matrix is unimodular")
    }

    pub fn pow(&self, k: u64) -> LinearElement {
        let mut acc = LinearElement::identity(self.n);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative order, or `None` if the search cap is exceeded.
    pub fn order(&self) -> Option<u64> {
        let mut power = self.clone();
        for k in 1..=ORDER_SEARCH_CAP {
            if power.is_identity() {
                return Some(k);
            }
            power = power.checked_mul(self)?;
        }
        None
    }

    /// Exact action on rational coordinates (no reduction).
    pub fn apply_rats(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.n, "dimension mismatch");
        (0..self.n)
            .map(|i| {
                let mut acc = Rat::from_integer(Int::from(0));
                for (j, xj) in x.iter().enumerate() {
                    acc += xj * Rat::from_integer(Int::from(self.at(i, j)));
                }
                acc
            })
            .collect()
    }
}

/// Multiplicative order of an element.
pub fn element_order(g: &LinearElement) -> Option<u64> {
    g.order()
}

// ---------------------------------------------------------------------------
// Pseudoreflections
// ---------------------------------------------------------------------------

/// Outcome of a pseudoreflection test.
#[derive(Clone, Debug)]
pub struct ReflectionReport {
    pub element: LinearElement,
    /// Whether `rank_Q(g − I) = 2`.
    pub is_pseudoreflection: bool,
    /// Multiplicative order (`None` only for non-finite-order input).
    pub order: Option<u64>,
    /// Saturated rank-2 image lattice of `g − I` for pseudoreflections.
    pub root_line: Option<LatticeBasis>,
}

/// Test whether `rank_Q(g − I) = 2` and report order and root line.
pub fn is_pseudoreflection(g: &LinearElement) -> ReflectionReport {
    let m = g.to_matz().sub(&MatZ::identity(g.dim()));
    let rank = m.rank();
    let is = rank == 2;
    let root_line = if is { Some(LatticeBasis::from_cols_matrix(&m).saturate()) } else { None };
    ReflectionReport { element: g.clone(), is_pseudoreflection: is, order: g.order(), root_line }
}

// ---------------------------------------------------------------------------
// Finite matrix groups
// ---------------------------------------------------------------------------

/// A finite group of unimodular integer matrices, given by generators; the
/// closure is computed on demand and cached, sorted by canonical encoding.
/// For groups too large to enumerate, a known order can be attached and
/// orbit–stabilizer runs work from the generators alone.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    dim: usize,
    generators: Vec<LinearElement>,
    known_order: Option<u64>,
    closure: std::sync::OnceLock<Vec<LinearElement>>,
}

impl FiniteMatrixGroup {
    pub fn new(dim: usize, generators: Vec<LinearElement>) -> Result<Self> {
        if generators.iter().any(|g| g.dim() != dim) {
            return Err(Error::Mismatch("generator dimension mismatch".into()));
        }
        let generators: Vec<LinearElement> =
            generators.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(FiniteMatrixGroup {
            dim,
            generators,
            known_order: None,
            closure: std::sync::OnceLock::new(),
        })
    }

    pub fn trivial(dim: usize) -> Self {
        FiniteMatrixGroup::new(dim, Vec::new()).expect("trivial group is valid")
    }

    /// Attach an externally known order (used for groups kept unenumerated).
    pub fn with_known_order(mut self, order: u64) -> Self {
        self.known_order = Some(order);
        self
    }

    /// Wrap an already-closed, sorted element list.
    fn from_closed(dim: usize, generators: Vec<LinearElement>, closed: Vec<LinearElement>) -> Self {
        debug_assert!(closed.windows(2).all(|w| w[0] < w[1]), "closure must be sorted");
        let order = closed.len() as u64;
        let group = FiniteMatrixGroup {
            dim,
            generators,
            known_order: Some(order),
            closure: std::sync::OnceLock::new(),
        };
        group.closure.set(closed).expect("fresh cell");
        group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[LinearElement] {
        &self.generators
    }

    pub fn known_order(&self) -> Option<u64> {
        self.known_order
    }

    /// The full element list, sorted by canonical encoding; cached.
    pub fn close(&self, caps: &Caps) -> Result<&[LinearElement]> {
        if let Some(c) = self.closure.get() {
            return Ok(c);
        }
        let closed = bfs_closure(self.dim, &self.generators, caps.closure)?;
        if let Some(expected) = self.known_order {
            if closed.len() as u64 != expected {
                return Err(Error::Mismatch(format!(
                    "declared order {expected} but closure has {} elements",
                    closed.len()
                )));
            }
        }
        Ok(self.closure.get_or_init(|| closed))
    }

    /// Group order: the known order if attached, else by closure.
    pub fn order(&self, caps: &Caps) -> Result<u64> {
        if let Some(o) = self.known_order {
            return Ok(o);
        }
        Ok(self.close(caps)?.len() as u64)
    }

    pub fn contains(&self, g: &LinearElement, caps: &Caps) -> Result<bool> {
        Ok(self.close(caps)?.binary_search(g).is_ok())
    }

    /// Whether two groups have the same closure.
    pub fn same_group(&self, other: &FiniteMatrixGroup, caps: &Caps) -> Result<bool> {
        Ok(self.close(caps)? == other.close(caps)?)
    }

    /// Orbit of a torsion point and its stabilizer, via Schreier generators
    /// closed incrementally. Needs only the generators, never the closure of
    /// the ambient group, so it applies to groups kept unenumerated.
    pub fn orbit_stabilizer(
        &self,
        x: &TorsionPoint,
        caps: &Caps,
    ) -> Result<(usize, FiniteMatrixGroup)> {
        if x.dim() != self.dim {
            return Err(Error::Mismatch("point dimension differs from group dimension".into()));
        }
        let mut orbit: IndexSet<TorsionPoint> = IndexSet::new();
        orbit.insert(x.clone());
        let mut transversal: Vec<LinearElement> = vec![LinearElement::identity(self.dim)];
        // edges (source index, generator index, target index) deferred so the
        // transversal inverses can be batch-computed first
        let mut edges: Vec<(usize, usize, usize)> = Vec::new();
        let mut i = 0;
        while i < orbit.len() {
            let y = orbit.get_index(i).expect("index in range").clone();
            for (gi, g) in self.generators.iter().enumerate() {
                let z = y.apply(g);
                let (j, fresh) = orbit.insert_full(z);
                if fresh {
                    if orbit.len() > caps.orbit {
                        return Err(Error::CapExceeded { what: "orbit", cap: caps.orbit });
                    }
                    transversal.push(g.mul(&transversal[i]));
                } else {
                    edges.push((i, gi, j));
                }
            }
            i += 1;
        }
        let inverses: Vec<LinearElement> = transversal.iter().map(LinearElement::inverse).collect();
        // Schreier generators: t_j⁻¹ · g · t_i stabilizes x for each edge
        let mut schreier: IndexSet<LinearElement> = IndexSet::new();
        for &(i, gi, j) in &edges {
            let s = inverses[j].mul(&self.generators[gi]).mul(&transversal[i]);
            if !s.is_identity() {
                schreier.insert(s);
            }
        }
        let (gens, closed) = incremental_closure(self.dim, schreier, caps.stabilizer)?;
        let stabilizer = FiniteMatrixGroup::from_closed(self.dim, gens, closed);
        Ok((orbit.len(), stabilizer))
    }

    /// Stabilizer by scanning the full closure (oracle for the Schreier path).
    pub fn brute_force_stabilizer(
        &self,
        x: &TorsionPoint,
        caps: &Caps,
    ) -> Result<FiniteMatrixGroup> {
        let fixers: Vec<LinearElement> = self
            .close(caps)?
            .iter()
            .filter(|g| &x.apply(g) == x)
            .cloned()
            .collect();
        let gens = fixers.iter().filter(|g| !g.is_identity()).cloned().collect();
        Ok(FiniteMatrixGroup::from_closed(self.dim, gens, fixers))
    }
}

/// The closure of a group under multiplication, sorted canonically.
pub fn close_group<'a>(group: &'a FiniteMatrixGroup, caps: &Caps) -> Result<&'a [LinearElement]> {
    group.close(caps)
}

fn bfs_closure(dim: usize, gens: &[LinearElement], cap: usize) -> Result<Vec<LinearElement>> {
    let mut set: IndexSet<LinearElement> = IndexSet::new();
    set.insert(LinearElement::identity(dim));
    let mut i = 0;
    while i < set.len() {
        let e = set.get_index(i).expect("index in range").clone();
        for g in gens {
            let p = e.checked_mul(g).ok_or_else(|| {
                Error::InvalidParameter(
                    "entry overflow during closure: not a finite matrix group".into(),
                )
            })?;
            set.insert(p);
            if set.len() > cap {
                return Err(Error::CapExceeded { what: "group closure", cap });
            }
        }
        i += 1;
    }
    let mut elements: Vec<LinearElement> = set.into_iter().collect();
    elements.sort_unstable();
    Ok(elements)
}

/// Close a candidate generator stream incrementally: candidates already in
/// the running closure are skipped, so re-closures happen at most once per
/// strict subgroup step. Returns the retained generators and the closure.
fn incremental_closure(
    dim: usize,
    candidates: impl IntoIterator<Item = LinearElement>,
    cap: usize,
) -> Result<(Vec<LinearElement>, Vec<LinearElement>)> {
    let mut gens: Vec<LinearElement> = Vec::new();
    let mut closed = vec![LinearElement::identity(dim)];
    for c in candidates {
        if closed.binary_search(&c).is_err() {
            gens.push(c);
            closed = bfs_closure(dim, &gens, cap)?;
        }
    }
    Ok((gens, closed))
}

/// The subgroup generated by all pseudoreflections of a closed group,
/// together with its order.
pub fn reflection_subgroup(group: &FiniteMatrixGroup, caps: &Caps) -> Result<FiniteMatrixGroup> {
    let reflections: Vec<LinearElement> = group
        .close(caps)?
        .iter()
        .filter(|g| is_pseudoreflection(g).is_pseudoreflection)
        .cloned()
        .collect();
    let (gens, closed) = incremental_closure(group.dim(), reflections, caps.closure)?;
    Ok(FiniteMatrixGroup::from_closed(group.dim(), gens, closed))
}

/// All pseudoreflection reports of a closed group, in canonical order.
pub fn pseudoreflections(group: &FiniteMatrixGroup, caps: &Caps) -> Result<Vec<ReflectionReport>> {
    Ok(group
        .close(caps)?
        .iter()
        .map(is_pseudoreflection)
        .filter(|r| r.is_pseudoreflection)
        .collect())
}

/// First element (in canonical closure order) with no eigenvalue 1, i.e.
/// with `det(I − g) ≠ 0`; errors when every element fixes a vector.
pub fn element_without_eigenvalue_one(
    group: &FiniteMatrixGroup,
    caps: &Caps,
) -> Result<LinearElement> {
    for g in group.close(caps)? {
        let det = MatZ::identity(g.dim()).sub(&g.to_matz()).det();
        if det != Int::from(0) {
            return Ok(g.clone());
        }
    }
    Err(Error::NotFound("every element has eigenvalue 1".into()))
}

// ---------------------------------------------------------------------------
// Affine elements
// ---------------------------------------------------------------------------

/// An affine torus automorphism `x ↦ g·x + t` with torsion translation part.
/// The derived ordering (translation first) matches the deterministic
/// reporting order for witnesses.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AffineElement {
    translation: TorsionPoint,
    linear: LinearElement,
}

impl AffineElement {
    pub fn new(translation: TorsionPoint, linear: LinearElement) -> Result<Self> {
        if translation.dim() != linear.dim() {
            return Err(Error::Mismatch("translation dimension differs from matrix".into()));
        }
        Ok(AffineElement { translation, linear })
    }

    pub fn from_linear(linear: LinearElement) -> Self {
        AffineElement { translation: TorsionPoint::zero(linear.dim()), linear }
    }

    pub fn identity(dim: usize) -> Self {
        AffineElement::from_linear(LinearElement::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.linear.dim()
    }

    pub fn translation(&self) -> &TorsionPoint {
        &self.translation
    }

    pub fn linear(&self) -> &LinearElement {
        &self.linear
    }

    pub fn is_identity(&self) -> bool {
        self.translation.is_zero() && self.linear.is_identity()
    }

    pub fn apply(&self, x: &TorsionPoint) -> TorsionPoint {
        x.apply(&self.linear).add(&self.translation)
    }

    /// `self ∘ other`: `(t1, g1)(t2, g2) = (t1 + g1·t2, g1·g2)`.
    pub fn compose(&self, other: &AffineElement) -> AffineElement {
        AffineElement {
            translation: other.translation.apply(&self.linear).add(&self.translation),
            linear: self.linear.mul(&other.linear),
        }
    }

    pub fn inverse(&self) -> AffineElement {
        let ginv = self.linear.inverse();
        AffineElement { translation: self.translation.apply(&ginv).neg(), linear: ginv }
    }

    /// Multiplicative order in the affine group, or `None` above the cap.
    pub fn order(&self) -> Option<u64> {
        let mut power = self.clone();
        for k in 1..=ORDER_SEARCH_CAP {
            if power.is_identity() {
                return Some(k);
            }
            power = power.compose(self);
        }
        None
    }
}

/// An affine element is a pseudoreflection when its linear part is one and
/// it has a fixed point on the torus, i.e. `t ∈ im(1 − τ)` modulo the
/// lattice.
pub fn is_affine_pseudoreflection(a: &AffineElement) -> bool {
    let report = is_pseudoreflection(a.linear());
    if !report.is_pseudoreflection {
        return false;
    }
    let m = LinearElement::identity(a.dim()).to_matz().sub(&a.linear().to_matz());
    solve_on_torus(&m, &a.translation().to_rats()).is_some()
}

/// Closure of affine elements under composition, including the identity,
/// sorted canonically. The group is finite because the linear parts form a
/// finite group and the translation levels divide a fixed integer, but the
/// cap still guards against explosive inputs.
pub fn affine_closure(dim: usize, gens: &[AffineElement], cap: usize) -> Result<Vec<AffineElement>> {
    for g in gens {
        if g.dim() != dim {
            return Err(Error::Mismatch("affine generator dimension differs".into()));
        }
    }
    let mut set: IndexSet<AffineElement> = IndexSet::new();
    set.insert(AffineElement::identity(dim));
    let mut cursor = 0;
    while cursor < set.len() {
        let current = set[cursor].clone();
        cursor += 1;
        for g in gens {
            let next = current.compose(g);
            set.insert(next);
            if set.len() > cap {
                return Err(Error::CapExceeded { what: "affine closure", cap });
            }
        }
    }
    let mut out: Vec<AffineElement> = set.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// The fixed locus of an affine element on the torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFixedLocus {
    /// One fixed point, reduced into `[0, 1)`.
    pub particular: TorsionPoint,
    /// Saturated direction lattice (the eigenvalue-1 kernel of the linear
    /// part); empty for isolated fixed points.
    pub direction: LatticeBasis,
    /// Number of connected components of the fixed locus.
    pub component_count: Int,
}

/// Solve `(1 − g)x ≡ t (mod Z^d)`; `None` when the element acts freely.
pub fn affine_fixed_points(a: &AffineElement) -> Option<AffineFixedLocus> {
    let (reps, direction, count) = fixed_locus_data(a, 1)?;
    Some(AffineFixedLocus {
        particular: reps.into_iter().next().expect("at least one representative"),
        direction,
        component_count: count,
    })
}

/// Shared solver for `{x : (1 − g)x ≡ t (mod Z^d)}`: up to `max_reps`
/// component representatives (at least one when the locus is nonempty), the
/// saturated direction lattice, and the exact component count. `None` when
/// the affine element acts freely.
#[allow(clippy::type_complexity)]
pub fn fixed_locus_data(
    a: &AffineElement,
    max_reps: usize,
) -> Option<(Vec<TorsionPoint>, LatticeBasis, Int)> {
    let d = a.dim();
    let m = MatZ::identity(d).sub(&a.linear().to_matz());
    let t = a.translation().to_rats();
    let (diag, u, v) = crate::exact::snf(&m);
    let rank = (0..d).filter(|&i| !diag.at(i, i).is_zero()).count();
    let ut = u.mul_vec_rat(&t);
    if ut.iter().skip(rank).any(|c| !c.is_integer()) {
        return None;
    }
    // direction lattice: the kernel columns of V complete to a basis, so the
    // sublattice they span is already saturated
    let kernel_cols: Vec<Vec<Int>> = (rank..d).map(|j| v.col_vec(j)).collect();
    let direction = LatticeBasis::from_generators(d, &kernel_cols);
    let count: Int = (0..rank).map(|i| diag.at(i, i).abs()).product();
    // enumerate component representatives in mixed radix over the invariant
    // factors (first index slowest), capped
    let total = count.clone().min(Int::from(max_reps.max(1) as u64));
    let total: u64 = u64::try_from(&total).expect("capped count fits u64");
    let radices: Vec<u64> = (0..rank)
        .map(|i| u64::try_from(&diag.at(i, i).abs()).expect("invariant factor fits u64"))
        .collect();
    let mut digits = vec![0u64; rank];
    let mut reps: Vec<TorsionPoint> = Vec::with_capacity(total as usize);
    for _ in 0..total {
        let mut y = vec![Rat::from_integer(Int::from(0)); d];
        for i in 0..rank {
            let num = &ut[i] + Rat::from_integer(Int::from(digits[i]));
            y[i] = num / Rat::from_integer(diag.at(i, i).clone());
        }
        let x: Vec<Rat> = v.mul_vec_rat(&y).iter().map(mod1).collect();
        reps.push(TorsionPoint::from_rats(&x));
        // increment the mixed-radix counter, last digit fastest
        for i in (0..rank).rev() {
            digits[i] += 1;
            if digits[i] < radices[i] {
                break;
            }
            digits[i] = 0;
        }
    }
    Some((reps, direction, count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn perm4(sigma: [usize; 4]) -> LinearElement {
        let mut rows = vec![vec![0i64; 4]; 4];
        for (j, &i) in sigma.iter().enumerate() {
            rows[i][j] = 1;
        }
        LinearElement::from_i64_rows(&rows).unwrap()
    }

    /// Block matrix g ⊗ I₂ for a small integer matrix acting on E^n.
    fn blocks(rows: &[Vec<i64>]) -> LinearElement {
        let n = rows.len();
        let mut big = vec![vec![0i64; 2 * n]; 2 * n];
        for (i, r) in rows.iter().enumerate() {
            for (j, &e) in r.iter().enumerate() {
                big[2 * i][2 * j] = e;
                big[2 * i + 1][2 * j + 1] = e;
            }
        }
        LinearElement::from_i64_rows(&big).unwrap()
    }

    #[test]
    fn rejects_non_unimodular_and_oversized() {
        assert!(LinearElement::from_i64_rows(&[vec![2, 0], vec![0, 1]]).is_err());
        assert!(LinearElement::from_i64_rows(&[vec![1, 0], vec![0, 1]]).is_ok());
        let huge = MatZ::from_fn(1, 1, |_, _| Int::from(i64::from(i32::MAX)) + 1);
        assert!(LinearElement::from_matz(&huge).is_err());
    }

    #[test]
    fn element_orders() {
        assert_eq!(LinearElement::identity(3).order(), Some(1));
        let neg = blocks(&[vec![-1]]);
        assert_eq!(neg.order(), Some(2));
        let zeta6 = LinearElement::from_i64_rows(&[vec![0, -1], vec![1, 1]]).unwrap();
        assert_eq!(zeta6.order(), Some(6));
        let shear = LinearElement::from_i64_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(shear.order(), None);
    }

    #[test]
    fn inverse_and_compose() {
        let zeta3 = LinearElement::from_i64_rows(&[vec![0, -1], vec![1, -1]]).unwrap();
        assert!(zeta3.inverse().mul(&zeta3).is_identity());
        assert_eq!(zeta3.inverse(), zeta3.pow(2));
    }

    #[test]
    fn closure_of_sign_swap_group_has_order_eight() {
        // G(2,1,2) on E²: signs and the swap, 4×4 blocks
        let s1 = blocks(&[vec![-1, 0], vec![0, 1]]);
        let swap = blocks(&[vec![0, 1], vec![1, 0]]);
        let g = FiniteMatrixGroup::new(4, vec![s1, swap]).unwrap();
        assert_eq!(g.order(&Caps::default()).unwrap(), 8);
    }

    #[test]
    fn closure_of_s4_has_order_24() {
        let g = FiniteMatrixGroup::new(
            4,
            vec![perm4([1, 0, 2, 3]), perm4([0, 2, 1, 3]), perm4([0, 1, 3, 2])],
        )
        .unwrap();
        assert_eq!(g.order(&Caps::default()).unwrap(), 24);
    }

    #[test]
    fn closure_is_independent_of_generator_order() {
        let a = perm4([1, 0, 2, 3]);
        let b = perm4([1, 2, 3, 0]);
        let g1 = FiniteMatrixGroup::new(4, vec![a.clone(), b.clone()]).unwrap();
        let g2 = FiniteMatrixGroup::new(4, vec![b, a]).unwrap();
        assert_eq!(g1.close(&Caps::default()).unwrap(), g2.close(&Caps::default()).unwrap());
    }

    #[test]
    fn closure_cap_is_enforced() {
        let g = FiniteMatrixGroup::new(
            4,
            vec![perm4([1, 0, 2, 3]), perm4([1, 2, 3, 0])],
        )
        .unwrap();
        let caps = Caps { closure: 10, ..Caps::default() };
        assert!(matches!(g.close(&caps), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn infinite_group_hits_cap_not_overflow() {
        let shear = LinearElement::from_i64_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let g = FiniteMatrixGroup::new(2, vec![shear]).unwrap();
        let caps = Caps { closure: 1000, ..Caps::default() };
        assert!(g.close(&caps).is_err());
    }

    #[test]
    fn pseudoreflection_detection_matches_rank() {
        // one sign flip on E³: rank(g − I) = 2, order 2
        let r = is_pseudoreflection(&blocks(&[vec![-1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]));
        assert!(r.is_pseudoreflection);
        assert_eq!(r.order, Some(2));
        assert_eq!(r.root_line.as_ref().unwrap().rank(), 2);
        // two sign flips: rank 4
        let r2 = is_pseudoreflection(&blocks(&[vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]]));
        assert!(!r2.is_pseudoreflection);
        // transposition: rank 2
        let r3 = is_pseudoreflection(&blocks(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]));
        assert!(r3.is_pseudoreflection);
        assert_eq!(r3.order, Some(2));
        // identity is not a pseudoreflection
        assert!(!is_pseudoreflection(&LinearElement::identity(6)).is_pseudoreflection);
    }

    #[test]
    fn order_three_and_six_root_lines() {
        // ζ₃ on the first of two coordinates
        let z3 = LinearElement::from_i64_rows(&[
            vec![0, -1, 0, 0],
            vec![1, -1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ])
        .unwrap();
        let r = is_pseudoreflection(&z3);
        assert!(r.is_pseudoreflection);
        assert_eq!(r.order, Some(3));
        // root line = the first coordinate plane
        let line = r.root_line.unwrap();
        assert!(line.contains_int(&[int(1), int(0), int(0), int(0)]));
        assert!(line.contains_int(&[int(0), int(1), int(0), int(0)]));
        let z6 = LinearElement::from_i64_rows(&[
            vec![0, -1, 0, 0],
            vec![1, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ])
        .unwrap();
        assert_eq!(is_pseudoreflection(&z6).order, Some(6));
    }

    #[test]
    fn reflection_subgroup_of_sign_group() {
        // ⟨diag(−1,−1)⟩ on E² has no pseudoreflections; ⟨one sign⟩ is all of them
        let minus = blocks(&[vec![-1, 0], vec![0, -1]]);
        let g = FiniteMatrixGroup::new(4, vec![minus]).unwrap();
        let p = reflection_subgroup(&g, &Caps::default()).unwrap();
        assert_eq!(p.order(&Caps::default()).unwrap(), 1);
        let s1 = blocks(&[vec![-1, 0], vec![0, 1]]);
        let swap = blocks(&[vec![0, 1], vec![1, 0]]);
        let g2 = FiniteMatrixGroup::new(4, vec![s1, swap]).unwrap();
        let p2 = reflection_subgroup(&g2, &Caps::default()).unwrap();
        assert_eq!(p2.order(&Caps::default()).unwrap(), 8, "G(2,1,2) is a reflection group");
    }

    #[test]
    fn orbit_stabilizer_matches_brute_force() {
        let g = FiniteMatrixGroup::new(
            4,
            vec![perm4([1, 0, 2, 3]), perm4([0, 2, 1, 3]), perm4([0, 1, 3, 2])],
        )
        .unwrap();
        let caps = Caps::default();
        let x = TorsionPoint::from_i64(2, &[1, 0, 0, 0]);
        let (orbit_len, stab) = g.orbit_stabilizer(&x, &caps).unwrap();
        assert_eq!(orbit_len, 4);
        assert_eq!(stab.order(&caps).unwrap(), 6);
        assert_eq!(orbit_len as u64 * stab.order(&caps).unwrap(), g.order(&caps).unwrap());
        let brute = g.brute_force_stabilizer(&x, &caps).unwrap();
        assert_eq!(stab.close(&caps).unwrap(), brute.close(&caps).unwrap());
        // every stabilizer element fixes x
        for s in stab.close(&caps).unwrap() {
            assert_eq!(x.apply(s), x);
        }
    }

    #[test]
    fn orbit_of_fixed_point_is_singleton() {
        let g = FiniteMatrixGroup::new(4, vec![perm4([1, 0, 2, 3])]).unwrap();
        let caps = Caps::default();
        let (orbit_len, stab) = g.orbit_stabilizer(&TorsionPoint::zero(4), &caps).unwrap();
        assert_eq!(orbit_len, 1);
        assert!(stab.same_group(&g, &caps).unwrap());
    }

    #[test]
    fn element_without_eigenvalue_one_examples() {
        // {±I}: −I has no eigenvalue 1
        let minus = blocks(&[vec![-1, 0], vec![0, -1]]);
        let g = FiniteMatrixGroup::new(4, vec![minus.clone()]).unwrap();
        assert_eq!(element_without_eigenvalue_one(&g, &Caps::default()).unwrap(), minus);
        // plain permutation group: every element fixes (1,…,1)
        let s4 = FiniteMatrixGroup::new(
            4,
            vec![perm4([1, 0, 2, 3]), perm4([1, 2, 3, 0])],
        )
        .unwrap();
        assert!(element_without_eigenvalue_one(&s4, &Caps::default()).is_err());
    }

    #[test]
    fn affine_compose_and_inverse() {
        let swap = blocks(&[vec![0, 1], vec![1, 0]]);
        let t = TorsionPoint::from_i64(4, &[1, 0, 0, 0]);
        let a = AffineElement::new(t, swap).unwrap();
        let both = a.compose(&a.inverse());
        assert!(both.is_identity());
        // (t, g)² = (t + g·t, g²)
        let sq = a.compose(&a);
        assert!(sq.linear().is_identity());
        assert_eq!(sq.translation(), &TorsionPoint::from_i64(4, &[1, 0, 1, 0]));
        assert_eq!(a.order(), Some(8));
    }

    #[test]
    fn affine_closure_enumerates_translation_extension() {
        // a half-period pure translation generates Z/2
        let half = AffineElement::new(
            TorsionPoint::from_i64(2, &[1, 0]),
            LinearElement::identity(2),
        )
        .unwrap();
        let pure = affine_closure(2, &[half], 100).unwrap();
        assert_eq!(pure.len(), 2);
        assert!(pure[0].is_identity());

        // a quarter-period glide along the swap has order 8
        let swap = blocks(&[vec![0, 1], vec![1, 0]]);
        let glide =
            AffineElement::new(TorsionPoint::from_i64(4, &[1, 0, 0, 0]), swap).unwrap();
        let closure = affine_closure(4, &[glide.clone()], 100).unwrap();
        assert_eq!(closure.len(), 8);
        assert!(closure.contains(&glide));
        assert!(closure.contains(&AffineElement::identity(4)));
        // caps are enforced
        assert!(matches!(
            affine_closure(4, &[glide], 3),
            Err(Error::CapExceeded { .. })
        ));
        // the empty generating set closes to the identity alone
        assert_eq!(affine_closure(2, &[], 10).unwrap().len(), 1);
    }

    #[test]
    fn affine_pseudoreflection_needs_translation_in_image() {
        let swap = blocks(&[vec![0, 1], vec![1, 0]]);
        // translation along the antidiagonal lies in im(1 − swap)
        let good = AffineElement::new(
            TorsionPoint::from_i64(2, &[1, 0, 1, 0]),
            swap.clone(),
        )
        .unwrap();
        assert!(is_affine_pseudoreflection(&good));
        // a one-sided half-period does not
        let bad = AffineElement::new(TorsionPoint::from_i64(2, &[1, 0, 0, 0]), swap).unwrap();
        assert!(!is_affine_pseudoreflection(&bad));
        // linear part must itself be a pseudoreflection
        let id = AffineElement::identity(4);
        assert!(!is_affine_pseudoreflection(&id));
    }

    #[test]
    fn fixed_points_of_negation_with_shift() {
        // (1 − (−I))x = 2x ≡ (1/2, 0): four isolated fixed points
        let minus = LinearElement::from_i64_rows(&[vec![-1, 0], vec![0, -1]]).unwrap();
        let a = AffineElement::new(TorsionPoint::from_i64(2, &[1, 0]), minus).unwrap();
        let locus = affine_fixed_points(&a).unwrap();
        assert_eq!(locus.component_count, int(4));
        assert!(locus.direction.is_empty());
        // the particular solution is fixed
        assert_eq!(a.apply(&locus.particular), locus.particular);
        let (reps, _, count) = fixed_locus_data(&a, 100).unwrap();
        assert_eq!(count, int(4));
        assert_eq!(reps.len(), 4);
        for r in &reps {
            assert_eq!(a.apply(r), *r);
        }
        // all four distinct
        let mut sorted = reps.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 4);
    }

    #[test]
    fn free_affine_action_has_no_fixed_points() {
        // swap with a diagonal quarter shift: (1−g)x ≡ t unsolvable
        let swap = LinearElement::from_i64_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        let a = AffineElement::new(TorsionPoint::from_i64(4, &[1, 1]), swap).unwrap();
        assert!(affine_fixed_points(&a).is_none());
        // pure translation likewise
        let shift = AffineElement::new(
            TorsionPoint::from_i64(2, &[1, 0]),
            LinearElement::identity(2),
        )
        .unwrap();
        assert!(affine_fixed_points(&shift).is_none());
    }

    #[test]
    fn fixed_locus_of_transposition_is_the_connected_diagonal() {
        let swap = blocks(&[vec![0, 1], vec![1, 0]]);
        let a = AffineElement::from_linear(swap);
        let locus = affine_fixed_points(&a).unwrap();
        assert_eq!(locus.direction.rank(), 2, "diagonal curve direction");
        assert_eq!(locus.component_count, int(1));
        assert!(locus.particular.is_zero());
        // the direction is the diagonal {(x, x)}
        assert!(locus.direction.contains_int(&[int(1), int(0), int(1), int(0)]));
        assert!(locus.direction.contains_int(&[int(0), int(1), int(0), int(1)]));
    }

    #[test]
    fn apply_rats_matches_torsion_apply() {
        let zeta3 = LinearElement::from_i64_rows(&[vec![0, -1], vec![1, -1]]).unwrap();
        let x = TorsionPoint::from_i64(3, &[1, 2]);
        let via_rats: Vec<Rat> = zeta3.apply_rats(&x.to_rats()).iter().map(mod1).collect();
        assert_eq!(TorsionPoint::from_rats(&via_rats), x.apply(&zeta3));
    }
}
