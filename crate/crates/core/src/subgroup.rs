//! Subgroups and congruences.
//!
//! A congruence (internal equivalence relation compatible with the group
//! structure) is stored as its normal subgroup together with the coset
//! partition; the two determine each other, which keeps storage linear in
//! the group order. A monomorphism `u : U ↣ X` is *normal to* a
//! congruence `R` when all of `U` sits inside one `R`-class and the class
//! of any `U`-element never leaves `U`; in that case `U` is exactly the
//! class of the identity.

use std::sync::Arc;

use thiserror::Error;

use crate::group::{same_group, FiniteGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelError {
    #[error("operands live in different ambient groups")]
    AmbientMismatch,
    #[error("element set is not a subgroup of the ambient group")]
    NotSubgroup,
    #[error("relation is not reflexive")]
    NotReflexive,
}

/// A subgroup of an ambient group, stored as a sorted element set.
#[derive(Clone)]
pub struct Subgroup {
    ambient: Arc<FiniteGroup>,
    elements: Vec<usize>,
}

impl Subgroup {
    /// Checks closure under product and inverse (identity is implied).
    pub fn new(ambient: &Arc<FiniteGroup>, mut elements: Vec<usize>) -> Result<Self, RelError> {
        elements.sort_unstable();
        elements.dedup();
        if elements.iter().any(|&e| e >= ambient.order()) {
            return Err(RelError::NotSubgroup);
        }
        let member = |x: usize| elements.binary_search(&x).is_ok();
        if !member(0) {
            return Err(RelError::NotSubgroup);
        }
        for &a in &elements {
            if !member(ambient.inv(a)) {
                return Err(RelError::NotSubgroup);
            }
            for &b in &elements {
                if !member(ambient.mul(a, b)) {
                    return Err(RelError::NotSubgroup);
                }
            }
        }
        Ok(Subgroup { ambient: Arc::clone(ambient), elements })
    }

    pub(crate) fn from_sorted_unchecked(ambient: &Arc<FiniteGroup>, elements: Vec<usize>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Subgroup { ambient: Arc::clone(ambient), elements }
    }

    pub fn trivial(ambient: &Arc<FiniteGroup>) -> Self {
        Subgroup { ambient: Arc::clone(ambient), elements: vec![0] }
    }

    pub fn full(ambient: &Arc<FiniteGroup>) -> Self {
        Subgroup { ambient: Arc::clone(ambient), elements: ambient.elements().collect() }
    }

    /// Closure of a generating set.
    pub fn generated(ambient: &Arc<FiniteGroup>, generators: &[usize]) -> Self {
        let mut seen = vec![false; ambient.order()];
        seen[0] = true;
        let mut elements = vec![0usize];
        let mut queue = vec![0usize];
        while let Some(x) = queue.pop() {
            for &g in generators {
                for y in [ambient.mul(x, g), ambient.mul(g, x)] {
                    if !seen[y] {
                        seen[y] = true;
                        elements.push(y);
                        queue.push(y);
                    }
                }
            }
        }
        // Generators of order 1.. closure above misses inverses only if a
        // generator has infinite order, which cannot happen here: powers of
        // each generator cycle back through the identity.
        elements.sort_unstable();
        Subgroup { ambient: Arc::clone(ambient), elements }
    }

    pub fn ambient(&self) -> &Arc<FiniteGroup> {
        &self.ambient
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_full(&self) -> bool {
        self.elements.len() == self.ambient.order()
    }

    pub fn subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&e| other.contains(e))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let elements = self.elements.iter().copied().filter(|&e| other.contains(e)).collect();
        Subgroup { ambient: Arc::clone(&self.ambient), elements }
    }

    /// Closed under conjugation by every ambient element.
    pub fn is_normal(&self) -> bool {
        self.ambient
            .elements()
            .all(|t| self.elements.iter().all(|&a| self.contains(self.ambient.conj(t, a))))
    }

    /// The subgroup as a group in its own right (local indices), together
    /// with the inclusion stored implicitly by `elements()`.
    pub fn as_group(&self) -> Arc<FiniteGroup> {
        FiniteGroup::embedded(&self.ambient, self.elements.clone())
    }

    /// Local index of an ambient element, if present.
    pub fn index_of(&self, ambient_element: usize) -> Option<usize> {
        self.elements.binary_search(&ambient_element).ok()
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && same_group(&self.ambient, &other.ambient)
    }
}

impl Eq for Subgroup {}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup{:?} of {:?}", self.elements, self.ambient)
    }
}

/// All subgroups, by closure growth from smaller subgroups: every subgroup
/// is reached by repeatedly adjoining one new generator, so the scan never
/// touches the full powerset.
pub fn subgroups(g: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let mut found: Vec<Vec<usize>> = vec![vec![0]];
    let mut frontier: Vec<Vec<usize>> = vec![vec![0]];
    while let Some(current) = frontier.pop() {
        for x in 1..g.order() {
            if current.binary_search(&x).is_ok() {
                continue;
            }
            let mut gens = current.clone();
            gens.push(x);
            let grown = Subgroup::generated(g, &gens).elements;
            if !found.contains(&grown) {
                found.push(grown.clone());
                frontier.push(grown);
            }
        }
    }
    found.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
    found.into_iter().map(|elements| Subgroup::from_sorted_unchecked(g, elements)).collect()
}

/// Subgroups closed under conjugation.
pub fn normal_subgroups(g: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    subgroups(g).into_iter().filter(Subgroup::is_normal).collect()
}

/// An internal equivalence relation on a group: the coset partition of a
/// normal subgroup.
#[derive(Clone, PartialEq, Eq)]
pub struct Congruence {
    ambient: Arc<FiniteGroup>,
    normal_subgroup: Subgroup,
    class_of: Vec<usize>,
}

impl Congruence {
    pub fn from_normal(normal: Subgroup) -> Result<Self, RelError> {
        if !normal.is_normal() {
            return Err(RelError::NotSubgroup);
        }
        let g = Arc::clone(normal.ambient());
        let mut class_of = vec![usize::MAX; g.order()];
        let mut next = 0;
        for x in g.elements() {
            if class_of[x] == usize::MAX {
                for &m in normal.elements() {
                    class_of[g.mul(x, m)] = next;
                }
                next += 1;
            }
        }
        Ok(Congruence { ambient: g, normal_subgroup: normal, class_of })
    }

    pub fn diagonal(g: &Arc<FiniteGroup>) -> Self {
        Congruence::from_normal(Subgroup::trivial(g)).expect("trivial subgroup is normal")
    }

    pub fn indiscrete(g: &Arc<FiniteGroup>) -> Self {
        Congruence::from_normal(Subgroup::full(g)).expect("full subgroup is normal")
    }

    pub fn ambient(&self) -> &Arc<FiniteGroup> {
        &self.ambient
    }

    pub fn normal_subgroup(&self) -> &Subgroup {
        &self.normal_subgroup
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn class_count(&self) -> usize {
        self.ambient.order() / self.normal_subgroup.order()
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.class_count()];
        for x in self.ambient.elements() {
            classes[self.class_of[x]].push(x);
        }
        classes
    }

    pub fn is_diagonal(&self) -> bool {
        self.normal_subgroup.is_trivial()
    }

    pub fn is_indiscrete(&self) -> bool {
        self.normal_subgroup.is_full()
    }

    /// The relation as a subgroup of `ambient × ambient` (pairs `(a, b)`
    /// with `a·b⁻¹` in the normal subgroup).
    pub fn as_relation_subgroup(&self, product: &Arc<FiniteGroup>) -> Subgroup {
        let n = self.ambient.order();
        let mut pairs = Vec::with_capacity(n * self.normal_subgroup.order());
        for a in 0..n {
            for b in 0..n {
                if self.related(a, b) {
                    pairs.push(a * n + b);
                }
            }
        }
        Subgroup::from_sorted_unchecked(product, pairs)
    }
}

impl std::fmt::Debug for Congruence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Congruence(normal {:?})", self.normal_subgroup.elements())
    }
}

/// All congruences, one per normal subgroup.
pub fn congruences(g: &Arc<FiniteGroup>) -> Vec<Congruence> {
    normal_subgroups(g)
        .into_iter()
        .map(|n| Congruence::from_normal(n).expect("normal by construction"))
        .collect()
}

/// Is `u` normal to `r`? Checked element-wise: (i) all pairs of
/// `u`-elements are related, (ii) any element related to a `u`-element is
/// itself in `u` (the discrete-fibration condition).
pub fn is_normal_to(u: &Subgroup, r: &Congruence) -> Result<bool, RelError> {
    if !same_group(u.ambient(), r.ambient()) {
        return Err(RelError::AmbientMismatch);
    }
    for &a in u.elements() {
        for &b in u.elements() {
            if !r.related(a, b) {
                return Ok(false);
            }
        }
    }
    for &a in u.elements() {
        for x in r.ambient().elements() {
            if r.related(a, x) && !u.contains(x) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The normalization of a congruence: the class of the identity, as a
/// subgroup. It is always normal to the congruence.
pub fn normalization(r: &Congruence) -> Subgroup {
    let id_class = r.class_of(0);
    let elements = r.ambient().elements().filter(|&x| r.class_of(x) == id_class).collect();
    Subgroup::from_sorted_unchecked(r.ambient(), elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    /// Independent oracle: powerset scan for subgroups (small orders only).
    fn brute_force_subgroups(g: &Arc<FiniteGroup>) -> Vec<Vec<usize>> {
        let n = g.order();
        assert!(n <= 12, "powerset oracle only runs at toy sizes");
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let elems: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let member = |x: usize| mask >> x & 1 == 1;
            let closed = elems
                .iter()
                .all(|&a| member(g.inv(a)) && elems.iter().all(|&b| member(g.mul(a, b))));
            if closed {
                out.push(elems);
            }
        }
        out.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
        out
    }

    #[test]
    fn trivial_group_has_one_subgroup() {
        let g = catalog::cyclic(1);
        assert_eq!(subgroups(&g).len(), 1);
    }

    #[test]
    fn s3_has_six_subgroups_matching_powerset_oracle() {
        let s3 = catalog::symmetric3();
        let got: Vec<_> = subgroups(&s3).iter().map(|s| s.elements().to_vec()).collect();
        assert_eq!(got.len(), 6);
        assert_eq!(got, brute_force_subgroups(&s3));
    }

    #[test]
    fn z4_has_three_subgroups_matching_powerset_oracle() {
        let z4 = catalog::cyclic(4);
        let got: Vec<_> = subgroups(&z4).iter().map(|s| s.elements().to_vec()).collect();
        assert_eq!(got.len(), 3);
        assert_eq!(got, brute_force_subgroups(&z4));
    }

    #[test]
    fn s3_normal_subgroups_are_trivial_a3_full() {
        let s3 = catalog::symmetric3();
        let normals = normal_subgroups(&s3);
        assert_eq!(normals.len(), 3);
        assert_eq!(normals[0].order(), 1);
        assert_eq!(normals[1].order(), 3); // A3 = the rotations
        assert_eq!(normals[2].order(), 6);
        assert_eq!(congruences(&s3).len(), 3);
    }

    #[test]
    fn abelian_groups_have_all_subgroups_normal() {
        let z4 = catalog::cyclic(4);
        assert_eq!(normal_subgroups(&z4).len(), subgroups(&z4).len());
    }

    #[test]
    fn trivial_group_has_delta_equals_nabla() {
        let g = catalog::cyclic(1);
        let cs = congruences(&g);
        assert_eq!(cs.len(), 1);
        assert!(cs[0].is_diagonal() && cs[0].is_indiscrete());
    }

    #[test]
    fn normal_to_examples() {
        let s3 = catalog::symmetric3();
        let delta = Congruence::diagonal(&s3);
        let nabla = Congruence::indiscrete(&s3);
        let a3 = Subgroup::new(&s3, vec![0, 1, 2]).unwrap();
        let r_a3 = Congruence::from_normal(a3.clone()).unwrap();

        assert!(is_normal_to(&Subgroup::trivial(&s3), &delta).unwrap());
        assert!(is_normal_to(&a3, &r_a3).unwrap());
        // ⟨(12)⟩: the class of a reflection under ∇ leaves the subgroup.
        let refl = Subgroup::new(&s3, vec![0, 3]).unwrap();
        assert!(!is_normal_to(&refl, &nabla).unwrap());
    }

    #[test]
    fn ambient_mismatch_is_reported() {
        let s3 = catalog::symmetric3();
        let z4 = catalog::cyclic(4);
        let u = Subgroup::trivial(&s3);
        let r = Congruence::diagonal(&z4);
        assert_eq!(is_normal_to(&u, &r), Err(RelError::AmbientMismatch));
    }

    #[test]
    fn normalization_reads_off_identity_class() {
        let s3 = catalog::symmetric3();
        assert!(normalization(&Congruence::diagonal(&s3)).is_trivial());
        assert!(normalization(&Congruence::indiscrete(&s3)).is_full());
        let a3 = Subgroup::new(&s3, vec![0, 1, 2]).unwrap();
        let r = Congruence::from_normal(a3.clone()).unwrap();
        assert_eq!(normalization(&r), a3);
    }

    #[test]
    fn normalization_is_always_normal_to_its_congruence() {
        for g in [catalog::symmetric3(), catalog::cyclic(8), catalog::dihedral(4)] {
            for r in congruences(&g) {
                assert!(is_normal_to(&normalization(&r), &r).unwrap());
            }
        }
    }

    #[test]
    fn normal_subgroup_congruence_roundtrip() {
        for g in [catalog::symmetric3(), catalog::quaternion8(), catalog::cyclic(12)] {
            for n in normal_subgroups(&g) {
                let r = Congruence::from_normal(n.clone()).unwrap();
                assert_eq!(r.normal_subgroup(), &n);
                assert_eq!(normalization(&r), n);
            }
        }
    }

    #[test]
    fn subgroup_lattice_closed_under_intersection() {
        for g in [catalog::symmetric3(), catalog::dihedral(4), catalog::alternating4()] {
            let subs = subgroups(&g);
            assert!(subs.iter().any(Subgroup::is_trivial));
            assert!(subs.iter().any(Subgroup::is_full));
            for a in &subs {
                for b in &subs {
                    let i = a.intersect(b);
                    assert!(subs.contains(&i));
                }
            }
        }
    }
}
