//! Group homomorphisms and their exhaustive enumeration.
//!
//! Enumeration assigns images to a fixed generating sequence and grows the
//! induced partial map by closure, pruning on the first conflict; the
//! `|B|^|A|` scan this replaces is infeasible past toy orders. The closure
//! construction multiplies every pair of already-mapped elements, so a
//! completed assignment is a verified homomorphism by construction.

use std::sync::Arc;

use thiserror::Error;

use crate::group::{same_group, FiniteGroup};
use crate::subgroup::Subgroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomError {
    #[error("map has wrong length for its source")]
    WrongLength,
    #[error("map image out of range")]
    OutOfRange,
    #[error("map is not a homomorphism at ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("source/target groups do not match")]
    Mismatch,
}

/// A homomorphism between explicit finite groups, stored pointwise.
#[derive(Clone)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<usize>,
}

impl GroupHom {
    pub fn new(
        source: &Arc<FiniteGroup>,
        target: &Arc<FiniteGroup>,
        map: Vec<usize>,
    ) -> Result<Self, HomError> {
        if map.len() != source.order() {
            return Err(HomError::WrongLength);
        }
        if map.iter().any(|&y| y >= target.order()) {
            return Err(HomError::OutOfRange);
        }
        for a in source.elements() {
            for b in source.elements() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(HomError::NotHomomorphism(a, b));
                }
            }
        }
        Ok(GroupHom { source: Arc::clone(source), target: Arc::clone(target), map })
    }

    /// For maps that are homomorphisms by construction; full validation is
    /// quadratic in the source order and pointless on engine-built maps.
    pub(crate) fn new_unchecked(
        source: &Arc<FiniteGroup>,
        target: &Arc<FiniteGroup>,
        map: Vec<usize>,
    ) -> Self {
        debug_assert_eq!(map.len(), source.order());
        debug_assert_eq!(map[0], 0);
        GroupHom { source: Arc::clone(source), target: Arc::clone(target), map }
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> Self {
        GroupHom::new_unchecked(g, g, g.elements().collect())
    }

    pub fn zero(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Self {
        GroupHom::new_unchecked(source, target, vec![0; source.order()])
    }

    /// The inclusion of a subgroup, from its local-index group.
    pub fn inclusion(sub: &Subgroup) -> Self {
        GroupHom::new_unchecked(&sub.as_group(), sub.ambient(), sub.elements().to_vec())
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom, HomError> {
        if !same_group(&inner.target, &self.source) {
            return Err(HomError::Mismatch);
        }
        let map = inner.map.iter().map(|&x| self.map[x]).collect();
        Ok(GroupHom::new_unchecked(&inner.source, &self.target, map))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        for &y in &self.map {
            if seen[y] {
                return false;
            }
            seen[y] = true;
        }
        true
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        let mut count = 0;
        for &y in &self.map {
            if !seen[y] {
                seen[y] = true;
                count += 1;
            }
        }
        count == self.target.order()
    }

    pub fn is_bijective(&self) -> bool {
        self.source.order() == self.target.order() && self.is_injective()
    }

    /// Image as a subgroup of the target.
    pub fn image(&self) -> Subgroup {
        let mut elements: Vec<usize> = self.map.clone();
        elements.sort_unstable();
        elements.dedup();
        Subgroup::from_sorted_unchecked(&self.target, elements)
    }

    /// Kernel as a subgroup of the source.
    pub fn kernel(&self) -> Subgroup {
        let elements = self.source.elements().filter(|&x| self.map[x] == 0).collect();
        Subgroup::from_sorted_unchecked(&self.source, elements)
    }

    /// Preimage through an injective hom, if the element is hit.
    pub fn preimage_of(&self, y: usize) -> Option<usize> {
        self.map.iter().position(|&v| v == y)
    }
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
            && same_group(&self.source, &other.source)
            && same_group(&self.target, &other.target)
    }
}

impl Eq for GroupHom {}

impl std::fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupHom{:?}: {:?} -> {:?}", self.map, self.source, self.target)
    }
}

/// A greedy generating sequence: repeatedly adjoin the smallest element
/// outside the current span. The span at least doubles each step, so the
/// sequence has logarithmic length.
pub fn generating_sequence(g: &Arc<FiniteGroup>) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = Subgroup::trivial(g);
    while span.order() < g.order() {
        let next = g.elements().find(|&x| !span.contains(x)).unwrap();
        gens.push(next);
        span = Subgroup::generated(g, &gens);
    }
    gens
}

/// Grows the partial map determined by generator/image pairs to the span
/// of the generators. Returns `None` on conflict; otherwise the map is a
/// homomorphism on the span (every product of mapped elements was checked).
fn close_partial(
    a: &Arc<FiniteGroup>,
    b: &Arc<FiniteGroup>,
    pairs: &[(usize, usize)],
) -> Option<(Vec<usize>, Vec<Option<usize>>)> {
    let mut map: Vec<Option<usize>> = vec![None; a.order()];
    map[0] = Some(0);
    let mut span = vec![0usize];
    let mut queue = vec![0usize];
    let push = |x: usize,
                    y: usize,
                    map: &mut Vec<Option<usize>>,
                    span: &mut Vec<usize>,
                    queue: &mut Vec<usize>| {
        match map[x] {
            Some(prev) => prev == y,
            None => {
                map[x] = Some(y);
                span.push(x);
                queue.push(x);
                true
            }
        }
    };
    for &(g, h) in pairs {
        if !push(g, h, &mut map, &mut span, &mut queue) {
            return None;
        }
    }
    while let Some(x) = queue.pop() {
        let fx = map[x].unwrap();
        // multiply against a snapshot of the current span, both sides
        let snapshot: Vec<usize> = span.clone();
        for s in snapshot {
            let fs = map[s].unwrap();
            if !push(a.mul(x, s), b.mul(fx, fs), &mut map, &mut span, &mut queue) {
                return None;
            }
            if !push(a.mul(s, x), b.mul(fs, fx), &mut map, &mut span, &mut queue) {
                return None;
            }
        }
    }
    Some((span, map))
}

fn enumerate_homs(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>, bijective: bool) -> Vec<GroupHom> {
    if bijective && a.order() != b.order() {
        return Vec::new();
    }
    let gens = generating_sequence(a);
    let a_orders: Vec<usize> = a.elements().map(|x| a.element_order(x)).collect();
    let b_orders: Vec<usize> = b.elements().map(|x| b.element_order(x)).collect();
    let mut out = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    search(a, b, &gens, &a_orders, &b_orders, bijective, &mut pairs, &mut out);
    out.sort_by(|l, r| l.map.cmp(&r.map));
    out
}

#[allow(clippy::too_many_arguments)]
fn search(
    a: &Arc<FiniteGroup>,
    b: &Arc<FiniteGroup>,
    gens: &[usize],
    a_orders: &[usize],
    b_orders: &[usize],
    bijective: bool,
    pairs: &mut Vec<(usize, usize)>,
    out: &mut Vec<GroupHom>,
) {
    if pairs.len() == gens.len() {
        if let Some((span, map)) = close_partial(a, b, pairs) {
            debug_assert_eq!(span.len(), a.order());
            let map: Vec<usize> = map.into_iter().map(Option::unwrap).collect();
            let hom = GroupHom::new_unchecked(a, b, map);
            if !bijective || hom.is_bijective() {
                out.push(hom);
            }
        }
        return;
    }
    let g = gens[pairs.len()];
    for h in b.elements() {
        // the image order must divide the generator order; for
        // isomorphisms it must match exactly
        if bijective {
            if b_orders[h] != a_orders[g] {
                continue;
            }
        } else if a_orders[g] % b_orders[h] != 0 {
            continue;
        }
        pairs.push((g, h));
        if close_partial(a, b, pairs).is_some() {
            search(a, b, gens, a_orders, b_orders, bijective, pairs, out);
        }
        pairs.pop();
    }
}

/// Complete list of homomorphisms `a → b`, in lexicographic map order.
pub fn homs(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> Vec<GroupHom> {
    enumerate_homs(a, b, false)
}

/// Complete list of isomorphisms `a → b`.
pub fn isomorphisms(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> Vec<GroupHom> {
    enumerate_homs(a, b, true)
}

pub fn is_isomorphic(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    a.order() == b.order()
        && a.order_profile() == b.order_profile()
        && !isomorphisms(a, b).is_empty()
}

/// The automorphism group: a table whose elements index the bijective
/// endomorphisms, with `table[i][j]` the index of `maps[i] ∘ maps[j]`.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    pub group: Arc<FiniteGroup>,
    pub maps: Vec<GroupHom>,
}

impl AutomorphismGroup {
    pub fn index_of(&self, map: &[usize]) -> Option<usize> {
        self.maps.iter().position(|m| m.map() == map)
    }

    pub fn apply(&self, aut_index: usize, x: usize) -> usize {
        self.maps[aut_index].apply(x)
    }
}

pub fn automorphism_group(g: &Arc<FiniteGroup>) -> AutomorphismGroup {
    let mut maps = isomorphisms(g, g);
    // identity first so the composition table has identity at index 0
    let id_pos = maps.iter().position(|m| m.map().iter().enumerate().all(|(i, &v)| i == v));
    maps.swap(0, id_pos.expect("identity automorphism exists"));
    let n = maps.len();
    let mut table = vec![0usize; n * n];
    for (i, f) in maps.iter().enumerate() {
        for (j, h) in maps.iter().enumerate() {
            let comp: Vec<usize> = h.map().iter().map(|&x| f.apply(x)).collect();
            let k = maps.iter().position(|m| m.map() == comp).expect("closed under composition");
            table[i * n + j] = k;
        }
    }
    let group = FiniteGroup::from_table_unchecked(n, table);
    let named = match g.name() {
        Some(name) => group.with_name(&format!("Aut({name})")),
        None => group,
    };
    AutomorphismGroup { group: named, maps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    /// Independent oracle: scan all |B|^|A| maps (tiny sizes only).
    fn brute_force_homs(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> Vec<Vec<usize>> {
        let (n, m) = (a.order(), b.order());
        assert!(m.pow(n as u32) <= 1 << 24);
        let mut out = Vec::new();
        let total = m.pow(n as u32);
        'next: for code in 0..total {
            let mut map = Vec::with_capacity(n);
            let mut c = code;
            for _ in 0..n {
                map.push(c % m);
                c /= m;
            }
            for x in 0..n {
                for y in 0..n {
                    if map[a.mul(x, y)] != b.mul(map[x], map[y]) {
                        continue 'next;
                    }
                }
            }
            out.push(map);
        }
        out.sort();
        out
    }

    #[test]
    fn homs_z2_to_z3_is_only_zero() {
        let got = homs(&catalog::cyclic(2), &catalog::cyclic(3));
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].map(), &[0, 0]);
    }

    #[test]
    fn homs_into_trivial_group_is_single() {
        let s3 = catalog::symmetric3();
        assert_eq!(homs(&s3, &catalog::cyclic(1)).len(), 1);
    }

    #[test]
    fn homs_z2_to_z4_matches_brute_force() {
        let a = catalog::cyclic(2);
        let b = catalog::cyclic(4);
        let got: Vec<_> = homs(&a, &b).iter().map(|h| h.map().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 0], vec![0, 2]]);
        assert_eq!(got, brute_force_homs(&a, &b));
    }

    #[test]
    fn homs_match_brute_force_on_mixed_pairs() {
        let cases = [
            (catalog::symmetric3(), catalog::cyclic(2)),
            (catalog::cyclic(4), catalog::cyclic(2)),
            (catalog::cyclic(6), catalog::symmetric3()),
            (catalog::symmetric3(), catalog::symmetric3()),
        ];
        for (a, b) in cases {
            let got: Vec<_> = homs(&a, &b).iter().map(|h| h.map().to_vec()).collect();
            assert_eq!(got, brute_force_homs(&a, &b), "{a:?} -> {b:?}");
        }
    }

    #[test]
    fn hom_composition_lands_in_homs() {
        let a = catalog::cyclic(4);
        let b = catalog::dihedral(4);
        let c = catalog::cyclic(2);
        let ab = homs(&a, &b);
        let bc = homs(&b, &c);
        let ac = homs(&a, &c);
        for f in &ab {
            for g in &bc {
                let gf = g.compose(f).unwrap();
                assert!(ac.contains(&gf));
            }
        }
    }

    #[test]
    fn aut_of_trivial_is_trivial() {
        assert_eq!(automorphism_group(&catalog::cyclic(1)).group.order(), 1);
    }

    #[test]
    fn aut_z3_has_order_two() {
        let aut = automorphism_group(&catalog::cyclic(3));
        assert_eq!(aut.group.order(), 2);
        assert!(aut.maps.iter().any(|m| m.map() == [0, 2, 1]));
    }

    #[test]
    fn aut_klein_four_is_s3() {
        let v4 = catalog::direct("V4", &[catalog::cyclic(2), catalog::cyclic(2)]);
        let aut = automorphism_group(&v4);
        assert_eq!(aut.group.order(), 6);
        assert!(is_isomorphic(&aut.group, &catalog::symmetric3()));
    }

    #[test]
    fn aut_group_table_matches_composition() {
        let aut = automorphism_group(&catalog::cyclic(8));
        assert_eq!(aut.group.order(), 4);
        for i in 0..aut.group.order() {
            for j in 0..aut.group.order() {
                let composite: Vec<usize> =
                    aut.maps[j].map().iter().map(|&x| aut.maps[i].apply(x)).collect();
                assert_eq!(aut.maps[aut.group.mul(i, j)].map(), composite.as_slice());
            }
        }
    }

    #[test]
    fn kernel_and_image_are_subgroups() {
        let s3 = catalog::symmetric3();
        let z2 = catalog::cyclic(2);
        let sign = homs(&s3, &z2).into_iter().find(|h| h.is_surjective()).unwrap();
        assert_eq!(sign.kernel().elements(), &[0, 1, 2]);
        assert!(sign.image().is_full());
    }
}
