//! Finite groups given by total multiplication tables.
//!
//! Elements are the indices `0..order` and the identity is always element
//! `0` (validation relabels if necessary), so equality of subobjects is
//! plain set equality. Besides explicit tables, a group can be backed by
//! a direct product or by a subgroup of another group; those variants
//! compute products on demand, which keeps constructions like `T × T` for
//! a large `T` affordable when only a small part of them is ever touched.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use thiserror::Error;

/// Validation failures for raw multiplication tables and derived data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("table is not square or contains out-of-range entries")]
    MalformedTable,
    #[error("table has no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
}

static NEXT_UID: AtomicU64 = AtomicU64::new(1);

fn fresh_uid() -> u64 {
    NEXT_UID.fetch_add(1, Ordering::Relaxed)
}

#[derive(Clone)]
enum Repr {
    /// Row-major table, `table[a * order + b] = a·b`.
    Table { table: Vec<usize>, inverse: Vec<usize> },
    /// Direct product with pair index `a * right.order() + b`.
    Product { left: Arc<FiniteGroup>, right: Arc<FiniteGroup> },
    /// Subgroup of `ambient`, elements listed ascending (so identity is 0);
    /// local indices resolve by binary search, keeping memory independent
    /// of the ambient order.
    Embedded { ambient: Arc<FiniteGroup>, elements: Arc<Vec<usize>> },
}

/// A finite group on elements `0..order` with identity `0`.
pub struct FiniteGroup {
    order: usize,
    repr: Repr,
    name: Option<String>,
    uid: u64,
}

impl FiniteGroup {
    /// Validates a raw table and canonicalizes the identity to index 0.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Arc<Self>, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::MalformedTable);
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &table {
            if row.len() != n {
                return Err(GroupError::MalformedTable);
            }
            for &v in row {
                if v >= n {
                    return Err(GroupError::MalformedTable);
                }
                flat.push(v);
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| flat[e * n + a] == a && flat[a * n + e] == a))
            .ok_or(GroupError::NoIdentity)?;
        if identity != 0 {
            // Relabel by swapping 0 and the identity.
            let relab = |x: usize| {
                if x == identity {
                    0
                } else if x == 0 {
                    identity
                } else {
                    x
                }
            };
            let mut swapped = vec![0usize; n * n];
            for a in 0..n {
                for b in 0..n {
                    swapped[relab(a) * n + relab(b)] = relab(flat[a * n + b]);
                }
            }
            flat = swapped;
        }
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            let mut found = None;
            for b in 0..n {
                if flat[a * n + b] == 0 && flat[b * n + a] == 0 {
                    found = Some(b);
                    break;
                }
            }
            inverse[a] = found.ok_or(GroupError::NoInverse(a))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = flat[a * n + b];
                for c in 0..n {
                    if flat[ab * n + c] != flat[a * n + flat[b * n + c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(Arc::new(FiniteGroup {
            order: n,
            repr: Repr::Table { table: flat, inverse },
            name: None,
            uid: fresh_uid(),
        }))
    }

    /// Table constructor for internally derived groups whose laws hold by
    /// construction (semidirect products, quotients, relabelings).
    pub(crate) fn from_table_unchecked(order: usize, table: Vec<usize>) -> Arc<Self> {
        debug_assert_eq!(table.len(), order * order);
        let mut inverse = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverse[a] = b;
                    break;
                }
            }
        }
        debug_assert!(inverse.iter().all(|&b| b != usize::MAX));
        Arc::new(FiniteGroup {
            order,
            repr: Repr::Table { table, inverse },
            name: None,
            uid: fresh_uid(),
        })
    }

    /// Direct product `left × right` with pair index `a·|right| + b`.
    /// The table is never materialized; products are computed per call.
    pub fn product(left: &Arc<FiniteGroup>, right: &Arc<FiniteGroup>) -> Arc<Self> {
        Arc::new(FiniteGroup {
            order: left.order * right.order,
            repr: Repr::Product { left: Arc::clone(left), right: Arc::clone(right) },
            name: None,
            uid: fresh_uid(),
        })
    }

    /// The group structure induced on a set of ambient elements that is
    /// closed under product and inverse. Elements must be sorted ascending
    /// and contain the ambient identity 0.
    pub(crate) fn embedded(ambient: &Arc<FiniteGroup>, elements: Vec<usize>) -> Arc<Self> {
        debug_assert!(elements.first() == Some(&0));
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Arc::new(FiniteGroup {
            order: elements.len(),
            repr: Repr::Embedded { ambient: Arc::clone(ambient), elements: Arc::new(elements) },
            name: None,
            uid: fresh_uid(),
        })
    }

    pub fn with_name(self: &Arc<Self>, name: &str) -> Arc<Self> {
        Arc::new(FiniteGroup {
            order: self.order,
            repr: self.repr.clone(),
            name: Some(name.to_string()),
            uid: self.uid,
        })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Stable identifier used for memoization keys.
    pub(crate) fn uid(&self) -> u64 {
        self.uid
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.repr {
            Repr::Table { table, .. } => table[a * self.order + b],
            Repr::Product { left, right } => {
                let rn = right.order;
                left.mul(a / rn, b / rn) * rn + right.mul(a % rn, b % rn)
            }
            Repr::Embedded { ambient, elements } => elements
                .binary_search(&ambient.mul(elements[a], elements[b]))
                .expect("embedded element set not closed under product"),
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        match &self.repr {
            Repr::Table { inverse, .. } => inverse[a],
            Repr::Product { left, right } => {
                let rn = right.order;
                left.inv(a / rn) * rn + right.inv(a % rn)
            }
            Repr::Embedded { ambient, elements } => elements
                .binary_search(&ambient.inv(elements[a]))
                .expect("embedded element set not closed under inverse"),
        }
    }

    /// `t · a · t⁻¹`.
    pub fn conj(&self, t: usize, a: usize) -> usize {
        self.mul(self.mul(t, a), self.inv(t))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// For a product-backed group, the pair index decomposition.
    pub fn pair(&self, idx: usize) -> Option<(usize, usize)> {
        match &self.repr {
            Repr::Product { right, .. } => Some((idx / right.order, idx % right.order)),
            _ => None,
        }
    }

    pub fn pair_index(&self, a: usize, b: usize) -> Option<usize> {
        match &self.repr {
            Repr::Product { right, .. } => Some(a * right.order + b),
            _ => None,
        }
    }

    /// For an embedded group, the ambient element list.
    pub(crate) fn embedded_elements(&self) -> Option<(&Arc<FiniteGroup>, &[usize])> {
        match &self.repr {
            Repr::Embedded { ambient, elements, .. } => Some((ambient, elements)),
            _ => None,
        }
    }

    /// A table-backed copy; identity stays at 0, element order is kept.
    pub fn tabled(self: &Arc<Self>) -> Arc<Self> {
        if matches!(self.repr, Repr::Table { .. }) {
            return Arc::clone(self);
        }
        let n = self.order;
        let mut table = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = self.mul(a, b);
            }
        }
        let g = FiniteGroup::from_table_unchecked(n, table);
        match &self.name {
            Some(name) => g.with_name(name),
            None => g,
        }
    }

    /// Full table rows, materializing if necessary.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Multiset of element orders; an isomorphism invariant used as a
    /// cheap pre-filter.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut profile: Vec<usize> = self.elements().map(|a| self.element_order(a)).collect();
        profile.sort_unstable();
        profile
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        if self.uid == other.uid {
            return true;
        }
        if self.order != other.order {
            return false;
        }
        (0..self.order)
            .all(|a| (0..self.order).all(|b| self.mul(a, b) == other.mul(a, b)))
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(name) => write!(f, "FiniteGroup({name}, order {})", self.order),
            None => write!(f, "FiniteGroup(order {})", self.order),
        }
    }
}

/// Pointer-or-structure equality for ambient checks.
pub fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    #[test]
    fn trivial_group_validates() {
        let g = FiniteGroup::from_table(vec![vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.identity(), 0);
    }

    #[test]
    fn z4_validates() {
        let g = FiniteGroup::from_table(z(4)).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.inv(1), 3);
        assert_eq!(g.element_order(1), 4);
        assert_eq!(g.element_order(2), 2);
    }

    #[test]
    fn degenerate_two_element_table_rejected() {
        // table[1][1] = 1, table[1][0] = 1 on {0, 1}: 1 has no inverse.
        let err = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(matches!(err, GroupError::NoInverse(_) | GroupError::NotAssociative(..)));
    }

    #[test]
    fn missing_identity_rejected() {
        let err = FiniteGroup::from_table(vec![vec![1, 0], vec![1, 0]]).unwrap_err();
        assert_eq!(err, GroupError::NoIdentity);
    }

    #[test]
    fn non_square_rejected() {
        let err = FiniteGroup::from_table(vec![vec![0, 1], vec![1]]).unwrap_err();
        assert_eq!(err, GroupError::MalformedTable);
    }

    #[test]
    fn identity_is_relabeled_to_zero() {
        // Z2 with the identity sitting at index 1.
        let g = FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.identity(), 0);
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.mul(1, 1), 0);
        // A 3-element table with identity at index 2: relabel must fix it.
        let raw = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = FiniteGroup::from_table(raw).unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.mul(0, 2), 2);
        assert_eq!(g.order_profile(), vec![1, 3, 3]);
    }

    #[test]
    fn product_matches_componentwise_table() {
        let a = FiniteGroup::from_table(z(2)).unwrap();
        let b = FiniteGroup::from_table(z(3)).unwrap();
        let p = FiniteGroup::product(&a, &b);
        assert_eq!(p.order(), 6);
        let t = p.tabled();
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(p.mul(x, y), t.mul(x, y));
            }
        }
        // Z2 × Z3 is cyclic of order 6.
        assert_eq!(p.order_profile(), FiniteGroup::from_table(z(6)).unwrap().order_profile());
    }

    #[test]
    fn embedded_subgroup_multiplies_in_local_indices() {
        let z6 = FiniteGroup::from_table(z(6)).unwrap();
        let h = FiniteGroup::embedded(&z6, vec![0, 2, 4]);
        assert_eq!(h.order(), 3);
        assert_eq!(h.mul(1, 1), 2); // 2 + 2 = 4
        assert_eq!(h.mul(1, 2), 0); // 2 + 4 = 0
        assert_eq!(h.inv(1), 2);
    }
}
