//! Finite groups by multiplication table, with the subgroup machinery
//! needed for ramification filtrations: generated subgroups, normality,
//! quotients, and conjugacy classes.
//!
//! Groups here are desk-scale (tables of a few hundred elements at most),
//! so every axiom is verified by brute force at construction time.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

/// Errors from group construction and subgroup operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("multiplication table is not square: row {row} has length {len}, expected {size}")]
    NotSquare { row: usize, len: usize, size: usize },
    #[error("table entry out of range at ({row}, {col}): {value} >= {size}")]
    EntryOutOfRange { row: usize, col: usize, value: usize, size: usize },
    #[error("no two-sided identity element")]
    MissingIdentity,
    #[error("element {element} has no inverse")]
    MissingInverse { element: usize },
    #[error("non-associative triple ({a}, {b}, {c}): (ab)c != a(bc)")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("element index {element} out of range for group of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("subgroup does not belong to this group")]
    ForeignSubgroup,
    #[error("element set is not closed: {a} * {b} falls outside")]
    NotClosed { a: usize, b: usize },
    #[error("element set does not contain the identity")]
    NoIdentityInSubgroup,
    #[error("quotient by a non-normal subgroup")]
    NotNormal,
    #[error("modulus must be at least 2")]
    BadModulus,
}

/// A finite group presented by its full multiplication table.
///
/// `mul` is row-major: `mul[a * size + b]` is the index of `a * b`.
/// Inverses and conjugacy classes are precomputed at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    size: usize,
    mul: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
    labels: Option<Vec<String>>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

/// A subgroup stored as a strictly sorted vector of element indices of its
/// parent group. Built only through [`FiniteGroup`] methods, which verify
/// closure, identity, and inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent_size: usize,
    elems: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn parent_size(&self) -> usize {
        self.parent_size
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elems.binary_search(&g).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.parent_size == other.parent_size && self.elems.iter().all(|&g| other.contains(g))
    }
}

impl FiniteGroup {
    /// Validate a multiplication table and build the group, or report the
    /// first violated axiom.
    pub fn from_table(mul: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self, GroupError> {
        let size = mul.len();
        for (row, r) in mul.iter().enumerate() {
            if r.len() != size {
                return Err(GroupError::NotSquare { row, len: r.len(), size });
            }
            for (col, &value) in r.iter().enumerate() {
                if value >= size {
                    return Err(GroupError::EntryOutOfRange { row, col, value, size });
                }
            }
        }
        if size == 0 {
            return Err(GroupError::MissingIdentity);
        }
        let flat: Vec<usize> = mul.iter().flatten().copied().collect();
        let at = |a: usize, b: usize| flat[a * size + b];
        let identity = (0..size)
            .find(|&e| (0..size).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(GroupError::MissingIdentity)?;
        let mut inv = vec![usize::MAX; size];
        for a in 0..size {
            let b = (0..size)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or(GroupError::MissingInverse { element: a })?;
            inv[a] = b;
        }
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(GroupError::NonAssociative { a, b, c });
                    }
                }
            }
        }
        if let Some(ref l) = labels {
            debug_assert_eq!(l.len(), size);
        }
        let (classes, class_of) = conjugacy_partition(size, &flat, &inv);
        Ok(FiniteGroup { size, mul: flat, identity, inv, labels, classes, class_of })
    }

    /// Cyclic group of order `n`, elements labeled by exponents.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let labels = (0..n).map(|i| format!("g^{i}")).collect();
        FiniteGroup::from_table(mul, Some(labels)).expect("cyclic table is a group")
    }

    /// The multiplicative group of units modulo `m`, elements sorted by
    /// residue and labeled by the residues.
    pub fn unit_group_mod(m: u64) -> Result<Self, GroupError> {
        if m < 2 {
            return Err(GroupError::BadModulus);
        }
        let units = units_mod(m);
        let index_of = |r: u64| units.binary_search(&r).expect("product of units is a unit");
        let mul = units
            .iter()
            .map(|&a| units.iter().map(|&b| index_of(a * b % m)).collect())
            .collect();
        let labels = units.iter().map(|r| r.to_string()).collect();
        Ok(FiniteGroup::from_table(mul, Some(labels)).expect("unit table is a group"))
    }

    /// Direct product; element `(a, b)` gets index `a * other.size() + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Self {
        let n = self.size * other.size;
        let mut mul = Vec::with_capacity(n);
        for a1 in 0..self.size {
            for b1 in 0..other.size {
                let mut row = Vec::with_capacity(n);
                for a2 in 0..self.size {
                    for b2 in 0..other.size {
                        row.push(self.mul(a1, a2) * other.size + other.mul(b1, b2));
                    }
                }
                mul.push(row);
            }
        }
        let labels = (0..self.size)
            .flat_map(|a| {
                (0..other.size).map(move |b| format!("({},{})", self.label(a), other.label(b)))
            })
            .collect();
        FiniteGroup::from_table(mul, Some(labels)).expect("product table is a group")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.size)
            .map(|a| self.mul[a * self.size..(a + 1) * self.size].to_vec())
            .collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Exponent of the group (lcm of element orders).
    pub fn exponent(&self) -> u64 {
        (0..self.size).fold(1u64, |acc, g| {
            num_integer::lcm(acc, self.element_order(g) as u64)
        })
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.size).all(|a| (a..self.size).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn power(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv[a] } else { a };
        let mut out = self.identity;
        for _ in 0..k.unsigned_abs() {
            out = self.mul(out, base);
        }
        out
    }

    /// Conjugacy classes as a partition of the element indices; classes are
    /// sorted internally and ordered by smallest member, so the identity
    /// class comes first.
    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { parent_size: self.size, elems: vec![self.identity] }
    }

    pub fn full_subgroup(&self) -> Subgroup {
        Subgroup { parent_size: self.size, elems: (0..self.size).collect() }
    }

    /// Validate an element set as a subgroup (identity, closure, inverses).
    pub fn subgroup_from_elements(&self, elems: &[usize]) -> Result<Subgroup, GroupError> {
        let mut sorted: Vec<usize> = elems.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &g in &sorted {
            if g >= self.size {
                return Err(GroupError::ElementOutOfRange { element: g, size: self.size });
            }
        }
        let sg = Subgroup { parent_size: self.size, elems: sorted };
        if !sg.contains(self.identity) {
            return Err(GroupError::NoIdentityInSubgroup);
        }
        for &a in &sg.elems {
            for &b in &sg.elems {
                if !sg.contains(self.mul(a, b)) {
                    return Err(GroupError::NotClosed { a, b });
                }
            }
            if !sg.contains(self.inv[a]) {
                return Err(GroupError::NotClosed { a, b: self.inv[a] });
            }
        }
        Ok(sg)
    }

    /// Closure of a generating set under products and inverses.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Result<Subgroup, GroupError> {
        for &g in gens {
            if g >= self.size {
                return Err(GroupError::ElementOutOfRange { element: g, size: self.size });
            }
        }
        let mut seen = vec![false; self.size];
        seen[self.identity] = true;
        let mut stack: Vec<usize> = vec![self.identity];
        for &g in gens {
            if !seen[g] {
                seen[g] = true;
                stack.push(g);
            }
        }
        while let Some(x) = stack.pop() {
            for &g in gens {
                for y in [self.mul(x, g), self.mul(x, self.inv[g])] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        let elems = (0..self.size).filter(|&i| seen[i]).collect();
        Ok(Subgroup { parent_size: self.size, elems })
    }

    fn check_owns(&self, h: &Subgroup) -> Result<(), GroupError> {
        if h.parent_size != self.size {
            return Err(GroupError::ForeignSubgroup);
        }
        Ok(())
    }

    pub fn is_normal(&self, h: &Subgroup) -> Result<bool, GroupError> {
        self.check_owns(h)?;
        for g in 0..self.size {
            for &x in &h.elems {
                if !h.contains(self.mul(self.mul(g, x), self.inv[g])) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Quotient by a normal subgroup. Returns the quotient group (cosets
    /// indexed in order of their smallest member) and the projection map
    /// from parent element index to coset index.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
        if !self.is_normal(n)? {
            return Err(GroupError::NotNormal);
        }
        let mut coset_min_of = vec![usize::MAX; self.size];
        let mut reps: Vec<usize> = Vec::new();
        for g in 0..self.size {
            if coset_min_of[g] == usize::MAX {
                let mut members: Vec<usize> = n.elems.iter().map(|&x| self.mul(g, x)).collect();
                members.sort_unstable();
                let min = members[0];
                for m in members {
                    coset_min_of[m] = min;
                }
                reps.push(min);
            }
        }
        reps.sort_unstable();
        let index_of = |min: usize| reps.binary_search(&min).expect("coset representative");
        let proj: Vec<usize> = (0..self.size).map(|g| index_of(coset_min_of[g])).collect();
        let k = reps.len();
        let mut mul = vec![vec![0usize; k]; k];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                mul[i][j] = proj[self.mul(a, b)];
            }
        }
        let labels = reps.iter().map(|&r| format!("[{}]", self.label(r))).collect();
        let q = FiniteGroup::from_table(mul, Some(labels)).expect("quotient table is a group");
        Ok((q, proj))
    }

    /// A subgroup repackaged as a group in its own right; also returns the
    /// embedding from new indices back to parent element indices.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
        self.check_owns(h)?;
        let embed = h.elems.clone();
        let index_of = |g: usize| h.elems.binary_search(&g).expect("closed subgroup");
        let mul = embed
            .iter()
            .map(|&a| embed.iter().map(|&b| index_of(self.mul(a, b))).collect())
            .collect();
        let labels = embed.iter().map(|&g| self.label(g)).collect();
        let g = FiniteGroup::from_table(mul, Some(labels)).expect("subgroup table is a group");
        Ok((g, embed))
    }

    /// Subgroup generated by all commutators.
    pub fn commutator_subgroup(&self) -> Subgroup {
        let mut gens = Vec::new();
        for a in 0..self.size {
            for b in 0..self.size {
                let c = self.mul(self.mul(a, b), self.mul(self.inv[a], self.inv[b]));
                if c != self.identity {
                    gens.push(c);
                }
            }
        }
        self.subgroup_generated(&gens).expect("generators in range")
    }
}

fn conjugacy_partition(size: usize, flat: &[usize], inv: &[usize]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let at = |a: usize, b: usize| flat[a * size + b];
    let mut class_of = vec![usize::MAX; size];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for g in 0..size {
        if class_of[g] != usize::MAX {
            continue;
        }
        let idx = classes.len();
        let mut members: Vec<usize> = (0..size).map(|x| at(at(x, g), inv[x])).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            class_of[m] = idx;
        }
        classes.push(members);
    }
    (classes, class_of)
}

/// Units modulo `m`, ascending.
pub fn units_mod(m: u64) -> Vec<u64> {
    (1..m).filter(|&a| num_integer::gcd(a, m) == 1).collect()
}

/// The symmetric group on three letters, as explicit permutations of
/// `{0,1,2}`. Element 0 is the identity; elements 1..=3 are the
/// transpositions; 4 and 5 are the 3-cycles.
pub fn symmetric_3() -> FiniteGroup {
    // Permutations listed as images (p[0], p[1], p[2]).
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2], // e
        [1, 0, 2], // (01)
        [2, 1, 0], // (02)
        [0, 2, 1], // (12)
        [1, 2, 0], // (012)
        [2, 0, 1], // (021)
    ];
    let compose = |p: &[usize; 3], q: &[usize; 3]| [p[q[0]], p[q[1]], p[q[2]]];
    let index_of = |r: [usize; 3]| perms.iter().position(|&p| p == r).unwrap();
    let mul = perms
        .iter()
        .map(|p| perms.iter().map(|q| index_of(compose(p, q))).collect())
        .collect();
    let labels = ["e", "(01)", "(02)", "(12)", "(012)", "(021)"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_table(mul, Some(labels)).expect("S3 table is a group")
}
