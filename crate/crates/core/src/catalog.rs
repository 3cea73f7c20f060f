//! The built-in group catalog.
//!
//! Universal properties quantify over a proper class; every certification
//! in this crate is relative to an explicit, versioned family of small
//! groups. The family covers abelian and non-abelian groups, trivial and
//! full centers and several action types, for all orders up to 16, but is
//! not an exhaustive classification.

use std::sync::Arc;

use crate::group::FiniteGroup;

pub fn cyclic(n: usize) -> Arc<FiniteGroup> {
    assert!(n >= 1);
    let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    FiniteGroup::from_table_unchecked(n, table).with_name(&format!("Z{n}"))
}

/// Dihedral group of order 2n. Indices `0..n` are rotations `r^i`,
/// indices `n..2n` are reflections `r^(i-n)·s`.
pub fn dihedral(n: usize) -> Arc<FiniteGroup> {
    assert!(n >= 2);
    let ord = 2 * n;
    let mut table = vec![0usize; ord * ord];
    for a in 0..ord {
        for b in 0..ord {
            let (i, ra) = (a % n, a >= n);
            let (j, rb) = (b % n, b >= n);
            // r^i s^e · r^j s^f with s r^j = r^(-j) s
            let k = if ra { (i + n - j % n) % n } else { (i + j) % n };
            table[a * ord + b] = if ra ^ rb { k + n } else { k };
        }
    }
    FiniteGroup::from_table_unchecked(ord, table).with_name(&format!("D{n}"))
}

/// S3 presented as the dihedral group on three letters: elements 0..3 are
/// the rotations (A3), elements 3..6 the transpositions.
pub fn symmetric3() -> Arc<FiniteGroup> {
    dihedral(3).with_name("S3")
}

/// Quaternion group: 0..8 encode 1, i, j, k, -1, -i, -j, -k.
pub fn quaternion8() -> Arc<FiniteGroup> {
    let unit_mul = |a: usize, b: usize| -> (usize, bool) {
        // unit indices 0=1, 1=i, 2=j, 3=k; returns (unit, negated)
        match (a, b) {
            (0, x) => (x, false),
            (x, 0) => (x, false),
            (1, 1) | (2, 2) | (3, 3) => (0, true),
            (1, 2) => (3, false),
            (2, 1) => (3, true),
            (2, 3) => (1, false),
            (3, 2) => (1, true),
            (3, 1) => (2, false),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    };
    let mut table = vec![0usize; 64];
    for a in 0..8 {
        for b in 0..8 {
            let (u, neg) = unit_mul(a % 4, b % 4);
            let sign = (a >= 4) ^ (b >= 4) ^ neg;
            table[a * 8 + b] = if sign { u + 4 } else { u };
        }
    }
    FiniteGroup::from_table_unchecked(8, table).with_name("Q8")
}

/// Dicyclic group of order 4n: ⟨a, b | a^{2n} = 1, b² = aⁿ, b⁻¹ab = a⁻¹⟩.
/// Indices `0..2n` are `a^i`, indices `2n..4n` are `a^(i-2n)·b`.
pub fn dicyclic(n: usize) -> Arc<FiniteGroup> {
    assert!(n >= 2);
    let m = 2 * n;
    let ord = 4 * n;
    let mut table = vec![0usize; ord * ord];
    for x in 0..ord {
        for y in 0..ord {
            let (i, bx) = (x % m, x >= m);
            let (j, by) = (y % m, y >= m);
            table[x * ord + y] = match (bx, by) {
                (false, false) => (i + j) % m,
                (false, true) => (i + j) % m + m,
                (true, false) => (i + m - j) % m + m,
                // (a^i b)(a^j b) = a^{i-j} b² = a^{i-j+n}
                (true, true) => (i + m - j + n) % m,
            };
        }
    }
    FiniteGroup::from_table_unchecked(ord, table).with_name(&format!("Dic{n}"))
}

/// Alternating group on four letters, built from permutation composition.
pub fn alternating4() -> Arc<FiniteGroup> {
    let mut perms: Vec<[usize; 4]> = Vec::new();
    let mut items = [0usize, 1, 2, 3];
    permute(&mut items, 0, &mut perms);
    perms.retain(|p| parity(p) == 0);
    perms.sort();
    debug_assert_eq!(perms[0], [0, 1, 2, 3]);
    let idx = |p: &[usize; 4]| perms.iter().position(|q| q == p).unwrap();
    let mut table = vec![0usize; 144];
    for (i, p) in perms.iter().enumerate() {
        for (j, q) in perms.iter().enumerate() {
            // composition p∘q, acting on points from the right: (p·q)(x) = p(q(x))
            let comp = [p[q[0]], p[q[1]], p[q[2]], p[q[3]]];
            table[i * 12 + j] = idx(&comp);
        }
    }
    FiniteGroup::from_table_unchecked(12, table).with_name("A4")
}

fn permute(items: &mut [usize; 4], k: usize, out: &mut Vec<[usize; 4]>) {
    if k == 4 {
        out.push(*items);
        return;
    }
    for i in k..4 {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

fn parity(p: &[usize; 4]) -> usize {
    let mut inv = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2
}

pub fn direct(name: &str, factors: &[Arc<FiniteGroup>]) -> Arc<FiniteGroup> {
    let mut acc = Arc::clone(&factors[0]);
    for f in &factors[1..] {
        acc = FiniteGroup::product(&acc, f);
    }
    acc.tabled().with_name(name)
}

/// The explicit group family all bounded certifications quantify over.
#[derive(Clone)]
pub struct Catalog {
    groups: Vec<Arc<FiniteGroup>>,
}

impl Catalog {
    /// Z1..Z16, Z2×Z2, Z2×Z4, Z2×Z2×Z2, S3, D4, Q8, D5, D6, A4, Dic3.
    pub fn builtin() -> Self {
        let z2 = cyclic(2);
        let z4 = cyclic(4);
        let mut groups: Vec<Arc<FiniteGroup>> = (1..=16).map(cyclic).collect();
        groups.push(direct("Z2xZ2", &[z2.clone(), z2.clone()]));
        groups.push(direct("Z2xZ4", &[z2.clone(), z4]));
        groups.push(direct("Z2xZ2xZ2", &[z2.clone(), z2.clone(), z2]));
        groups.push(symmetric3());
        groups.push(dihedral(4));
        groups.push(quaternion8());
        groups.push(dihedral(5));
        groups.push(dihedral(6));
        groups.push(alternating4());
        groups.push(dicyclic(3));
        Catalog { groups }
    }

    /// Restriction to groups of order at most `max_order`, catalog order
    /// preserved.
    pub fn restricted(&self, max_order: usize) -> Self {
        Catalog {
            groups: self.groups.iter().filter(|g| g.order() <= max_order).cloned().collect(),
        }
    }

    pub fn groups(&self) -> &[Arc<FiniteGroup>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every built-in table passes full validation (the unchecked
    /// constructors are only trusted because of this test).
    #[test]
    fn all_builtin_tables_validate() {
        for g in Catalog::builtin().groups() {
            let revalidated = FiniteGroup::from_table(g.table_rows());
            assert!(revalidated.is_ok(), "{:?}: {:?}", g, revalidated.err());
        }
    }

    #[test]
    fn expected_orders_and_shapes() {
        assert_eq!(symmetric3().order(), 6);
        assert!(!symmetric3().is_abelian());
        assert_eq!(dihedral(4).order(), 8);
        assert_eq!(quaternion8().order(), 8);
        // Q8 has a unique involution.
        assert_eq!(quaternion8().order_profile().iter().filter(|&&o| o == 2).count(), 1);
        assert_eq!(dicyclic(3).order(), 12);
        assert_eq!(dicyclic(3).order_profile().iter().filter(|&&o| o == 2).count(), 1);
        assert_eq!(alternating4().order(), 12);
        assert!(cyclic(16).is_abelian());
    }

    #[test]
    fn s3_matches_independent_permutation_model() {
        // Build S3 from scratch on permutations of three letters and
        // compare order profiles and the center.
        let mut perms: Vec<[usize; 3]> = vec![];
        for a in 0..3usize {
            for b in 0..3usize {
                for c in 0..3usize {
                    if a != b && b != c && a != c {
                        perms.push([a, b, c]);
                    }
                }
            }
        }
        perms.sort();
        let idx = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
        let mut rows = vec![vec![0usize; 6]; 6];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                rows[i][j] = idx(&[p[q[0]], p[q[1]], p[q[2]]]);
            }
        }
        let model = FiniteGroup::from_table(rows).unwrap();
        assert_eq!(model.order_profile(), symmetric3().order_profile());
        let center = |g: &Arc<FiniteGroup>| {
            g.elements()
                .filter(|&a| g.elements().all(|b| g.mul(a, b) == g.mul(b, a)))
                .count()
        };
        assert_eq!(center(&model), 1);
        assert_eq!(center(&symmetric3()), 1);
    }

    #[test]
    fn builtin_catalog_has_documented_membership() {
        let cat = Catalog::builtin();
        assert_eq!(cat.len(), 26);
        assert!(cat.groups().iter().all(|g| g.order() <= 16));
        let names: Vec<_> = cat.groups().iter().map(|g| g.name().unwrap().to_string()).collect();
        assert!(names.contains(&"Z16".to_string()));
        assert!(names.contains(&"Dic3".to_string()));
        assert_eq!(cat.restricted(12).groups().iter().filter(|g| g.order() > 12).count(), 0);
    }
}
