//! Ramification filtrations in lower numbering, the Herbrand functions
//! `phi`/`psi` as exact piecewise-linear maps, upper numbering, and
//! quotient filtrations.
//!
//! The canonical stored form is the lower-numbering chain
//! `G_0 ⊇ G_1 ⊇ ... ⊇ G_M = 1` (the whole group plays `G_{-1}`); upper
//! numbering is always derived through `phi`. Real indices use the
//! ceiling convention `G_r = G_{⌈r⌉}`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use crate::exactnum::{rat_int, Rational};
use crate::groups::{FiniteGroup, GroupError, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RamError {
    #[error("chain entry {index} is not contained in entry {}", index.saturating_sub(1))]
    ChainNotDescending { index: usize },
    #[error("chain entry {index} is not normal in the group")]
    ChainNotNormal { index: usize },
    #[error("ramification index {value} is below -1")]
    IndexBelowMinusOne { value: Rational },
    #[error("upper-indexed chain: breaks are not strictly ascending at position {position}")]
    BreaksNotAscending { position: usize },
    #[error("upper-indexed chain: first break is negative")]
    FirstBreakNegative,
    #[error("upper-indexed chain: groups are not strictly descending at position {position}")]
    StepsNotDescending { position: usize },
    #[error("upper-indexed chain: step {position} is the trivial group (the trivial tail is implicit)")]
    TrivialStep { position: usize },
    #[error("chain not realizable as a step function of psi: break {position} maps to the non-integral lower index {lower_index}")]
    NonIntegralLowerBreak { position: usize, lower_index: Rational },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A continuous piecewise-linear bijection of `[-1, ∞)` with positive
/// slopes, stored as its vertices plus the slope that applies from each
/// vertex to the next (the last slope extends to infinity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HerbrandFunction {
    vertices: Vec<(Rational, Rational)>,
    slopes: Vec<Rational>,
}

impl HerbrandFunction {
    fn new(vertices: Vec<(Rational, Rational)>, slopes: Vec<Rational>) -> Self {
        debug_assert_eq!(vertices.len(), slopes.len());
        debug_assert!(!vertices.is_empty());
        HerbrandFunction { vertices, slopes }
    }

    /// Graph vertices, starting at `(-1, -1)`; there is one per slope
    /// change.
    pub fn vertices(&self) -> &[(Rational, Rational)] {
        &self.vertices
    }

    /// Segment slopes; `slopes()[i]` applies on
    /// `[vertices()[i].0, vertices()[i+1].0)`, and the last slope extends
    /// to infinity.
    pub fn slopes(&self) -> &[Rational] {
        &self.slopes
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, RamError> {
        if *x < -Rational::one() {
            return Err(RamError::IndexBelowMinusOne { value: x.clone() });
        }
        let i = self
            .vertices
            .iter()
            .rposition(|(vx, _)| vx <= x)
            .expect("first vertex is at -1");
        let (vx, vy) = &self.vertices[i];
        Ok(vy + &self.slopes[i] * (x - vx))
    }

    /// The inverse bijection: swap vertex coordinates and invert slopes.
    pub fn inverse(&self) -> HerbrandFunction {
        HerbrandFunction::new(
            self.vertices.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
            self.slopes.iter().map(Rational::recip).collect(),
        )
    }
}

/// A finite group together with a lower-numbering ramification chain
/// `G_0 ⊇ G_1 ⊇ ... ⊇ G_M = 1`. Every entry must be normal in the group;
/// a trailing trivial entry is appended if absent.
///
/// `realizable` marks chains produced from genuine local-field arithmetic,
/// for which conductor integrality is asserted downstream; abstract chains
/// carry no such guarantee.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamifiedGroup {
    group: FiniteGroup,
    chain: Vec<Subgroup>,
    realizable: bool,
}

impl RamifiedGroup {
    pub fn new(group: FiniteGroup, mut chain: Vec<Subgroup>, realizable: bool) -> Result<Self, RamError> {
        if chain.last().map(|h| !h.is_trivial()).unwrap_or(true) {
            chain.push(group.trivial_subgroup());
        }
        for (index, h) in chain.iter().enumerate() {
            if h.parent_size() != group.size() {
                return Err(GroupError::ForeignSubgroup.into());
            }
            if !group.is_normal(h)? {
                return Err(RamError::ChainNotNormal { index });
            }
            if index > 0 && !h.is_subset_of(&chain[index - 1]) {
                return Err(RamError::ChainNotDescending { index });
            }
        }
        Ok(RamifiedGroup { group, chain, realizable })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// The stored chain `G_0, ..., G_M` (last entry trivial).
    pub fn chain(&self) -> &[Subgroup] {
        &self.chain
    }

    pub fn realizable(&self) -> bool {
        self.realizable
    }

    pub fn inertia(&self) -> &Subgroup {
        &self.chain[0]
    }

    /// `G_r` with the convention `G_r = G_i` for `i` the smallest integer
    /// `>= r`; `G_{-1}` is the whole group and the chain is extended by
    /// trivial groups beyond its last entry.
    pub fn lower_group(&self, r: &Rational) -> Result<Subgroup, RamError> {
        if *r < -Rational::one() {
            return Err(RamError::IndexBelowMinusOne { value: r.clone() });
        }
        let i = r.ceil().to_integer();
        if i.is_negative() {
            return Ok(self.group.full_subgroup());
        }
        let i: usize = match TryInto::<usize>::try_into(&i) {
            Ok(v) => v,
            Err(_) => return Ok(self.group.trivial_subgroup()),
        };
        Ok(self
            .chain
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.group.trivial_subgroup()))
    }

    /// The Herbrand function: slope 1 on `[-1, 0]` and `1/[G_0 : G_i]` on
    /// `(i-1, i)`, with equal-slope segments merged.
    pub fn phi(&self) -> HerbrandFunction {
        let g0 = rat_int(self.chain[0].order() as i64);
        let mut vertices = vec![(rat_int(-1), rat_int(-1))];
        let mut slopes = vec![Rational::one()];
        let mut x = rat_int(-1);
        let mut y = rat_int(-1);
        for h in &self.chain {
            let slope = rat_int(h.order() as i64) / &g0;
            if slope != *slopes.last().expect("nonempty") {
                vertices.push((x.clone(), y.clone()));
                slopes.push(slope.clone());
            }
            y += &slope;
            x += Rational::one();
        }
        HerbrandFunction::new(vertices, slopes)
    }

    /// The inverse Herbrand function `psi = phi^{-1}`.
    pub fn psi(&self) -> HerbrandFunction {
        self.phi().inverse()
    }

    /// `G^s = G_{psi(s)}`.
    pub fn upper_group(&self, s: &Rational) -> Result<Subgroup, RamError> {
        self.lower_group(&self.psi().eval(s)?)
    }

    /// Integer indices `i >= 0` at which the lower chain strictly drops.
    fn lower_breaks(&self) -> Vec<usize> {
        (0..self.chain.len() - 1)
            .filter(|&i| self.chain[i] != self.chain[i + 1])
            .collect()
    }

    /// All `s` with `G^{s+eps} != G^s` for every `eps > 0`, ascending.
    /// (The drop from `G_{-1} = G` to `G_0` at `s = -1` is excluded by
    /// convention.)
    pub fn upper_breaks(&self) -> Vec<Rational> {
        let phi = self.phi();
        self.lower_breaks()
            .into_iter()
            .map(|i| phi.eval(&rat_int(i as i64)).expect("break index >= 0"))
            .collect()
    }

    /// The upper filtration as a step function: pairs `(s_j, H_j)` meaning
    /// `G^s = H_j` on `(s_{j-1}, s_j]` (with `s_0 = -1`), trivial after the
    /// last break. Inverse of [`upper_to_lower`].
    pub fn upper_steps(&self) -> Vec<(Rational, Subgroup)> {
        let phi = self.phi();
        self.lower_breaks()
            .into_iter()
            .map(|i| {
                (
                    phi.eval(&rat_int(i as i64)).expect("break index >= 0"),
                    self.chain[i].clone(),
                )
            })
            .collect()
    }

    /// Quotient filtration: images of the upper-numbering groups under the
    /// projection, converted back to lower numbering. Also returns the
    /// projection map from parent elements to quotient elements.
    ///
    /// For chains arising from genuine arithmetic this always succeeds
    /// (Herbrand); abstract chains may fail to be reconstructible, in
    /// which case `NonIntegralLowerBreak` is reported.
    pub fn quotient_filtration(&self, n: &Subgroup) -> Result<(RamifiedGroup, Vec<usize>), RamError> {
        let (qgroup, proj) = self.group.quotient(n)?;
        let mut steps: Vec<(Rational, Subgroup)> = Vec::new();
        for (s, h) in self.upper_steps() {
            let mut image: Vec<usize> = h.elements().iter().map(|&g| proj[g]).collect();
            image.sort_unstable();
            image.dedup();
            let image = qgroup.subgroup_from_elements(&image)?;
            if image.is_trivial() {
                break;
            }
            if let Some(last) = steps.last_mut() {
                if last.1 == image {
                    // same image further in: extend the segment
                    last.0 = s;
                    continue;
                }
            }
            steps.push((s, image));
        }
        let rg = upper_to_lower(qgroup, &steps, self.realizable)?;
        Ok((rg, proj))
    }
}

/// Reconstruct the unique lower-numbering chain whose upper numbering is
/// the given step function. `steps[j] = (s_j, H_j)` means `G^s = H_j` on
/// `(s_{j-1}, s_j]` with `s_0 = -1`, and `G^s` trivial for `s` past the
/// last break; so `H_0` is the inertia group `G_0` and the `H_j` are
/// strictly descending and nontrivial.
pub fn upper_to_lower(
    group: FiniteGroup,
    steps: &[(Rational, Subgroup)],
    realizable: bool,
) -> Result<RamifiedGroup, RamError> {
    if steps.is_empty() {
        return RamifiedGroup::new(group, Vec::new(), realizable);
    }
    if steps[0].0.is_negative() {
        return Err(RamError::FirstBreakNegative);
    }
    for (position, (s, h)) in steps.iter().enumerate() {
        if h.is_trivial() {
            return Err(RamError::TrivialStep { position });
        }
        if position > 0 {
            if *s <= steps[position - 1].0 {
                return Err(RamError::BreaksNotAscending { position });
            }
            let prev = &steps[position - 1].1;
            if !(h.is_subset_of(prev) && h != prev) {
                return Err(RamError::StepsNotDescending { position });
            }
        }
    }
    let g0_order = rat_int(steps[0].1.order() as i64);
    // Lower break r_j = r_{j-1} + (s_j - s_{j-1}) * [G_0 : H_j]; each must
    // be a nonnegative integer for a lower chain to exist.
    let mut chain: Vec<Subgroup> = Vec::new();
    let mut prev_r = rat_int(-1);
    let mut prev_s = rat_int(-1);
    for (position, (s, h)) in steps.iter().enumerate() {
        let index = &g0_order / rat_int(h.order() as i64);
        let r = &prev_r + (s - &prev_s) * index;
        if !r.is_integer() {
            return Err(RamError::NonIntegralLowerBreak { position, lower_index: r });
        }
        let r_int: i64 = TryInto::<i64>::try_into(&r.to_integer()).expect("desk-scale chain");
        for _ in chain.len()..=(r_int as usize) {
            chain.push(h.clone());
        }
        prev_r = r;
        prev_s = s.clone();
    }
    RamifiedGroup::new(group, chain, realizable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::groups::units_mod;

    /// Chain with orders (2, 2, 1) on C2: the `Q_2(zeta_4)` shape.
    fn chain_2_2_1() -> RamifiedGroup {
        let g = FiniteGroup::cyclic(2);
        let full = g.full_subgroup();
        let triv = g.trivial_subgroup();
        RamifiedGroup::new(g.clone(), vec![full.clone(), full, triv], false).unwrap()
    }

    /// Chain with orders (4, 4, 2, 2, 1) on the units mod 8: the
    /// `Q_2(zeta_8)` shape, with `G_2 = G_3 = {1, 5}`.
    fn chain_q2_zeta8() -> RamifiedGroup {
        let g = FiniteGroup::unit_group_mod(8).unwrap();
        let five = units_mod(8).iter().position(|&u| u == 5).unwrap();
        let full = g.full_subgroup();
        let mid = g.subgroup_generated(&[five]).unwrap();
        let triv = g.trivial_subgroup();
        RamifiedGroup::new(
            g.clone(),
            vec![full.clone(), full, mid.clone(), mid, triv],
            false,
        )
        .unwrap()
    }

    fn tame(e: usize) -> RamifiedGroup {
        let g = FiniteGroup::cyclic(e);
        let chain = vec![g.full_subgroup()];
        RamifiedGroup::new(g.clone(), chain, false).unwrap()
    }

    fn unramified(n: usize) -> RamifiedGroup {
        let g = FiniteGroup::cyclic(n);
        let chain = vec![g.trivial_subgroup()];
        RamifiedGroup::new(g.clone(), chain, false).unwrap()
    }

    #[test]
    fn lower_group_at_minus_one_is_the_whole_group() {
        let rg = chain_q2_zeta8();
        assert_eq!(rg.lower_group(&rat_int(-1)).unwrap().order(), 4);
    }

    #[test]
    fn lower_group_uses_ceiling() {
        let rg = chain_q2_zeta8();
        // ceil(-1/2) = 0 -> G_0
        assert_eq!(rg.lower_group(&rat(-1, 2)).unwrap(), rg.chain()[0]);
        // ceil(3/2) = 2 -> G_2
        assert_eq!(rg.lower_group(&rat(3, 2)).unwrap(), rg.chain()[2]);
    }

    #[test]
    fn lower_group_beyond_the_chain_is_trivial() {
        let rg = chain_q2_zeta8();
        assert!(rg.lower_group(&rat_int(11)).unwrap().is_trivial());
    }

    #[test]
    fn lower_group_rejects_below_minus_one() {
        let rg = tame(3);
        assert!(matches!(
            rg.lower_group(&rat(-3, 2)),
            Err(RamError::IndexBelowMinusOne { .. })
        ));
    }

    #[test]
    fn phi_piecewise_evaluation() {
        // Orders (2, 2, 1): slope 1 up to r = 1, then slope 1/2, so
        // phi(2) = 3/2.
        let rg = chain_2_2_1();
        let phi = rg.phi();
        assert_eq!(phi.eval(&rat_int(2)).unwrap(), rat(3, 2));
        assert_eq!(phi.eval(&rat_int(0)).unwrap(), rat_int(0));
        assert_eq!(phi.eval(&rat_int(-1)).unwrap(), rat_int(-1));
    }

    #[test]
    fn phi_of_unramified_chain_is_the_identity() {
        let rg = unramified(5);
        let phi = rg.phi();
        assert_eq!(phi.vertices(), &[(rat_int(-1), rat_int(-1))]);
        assert_eq!(phi.slopes(), &[rat_int(1)]);
        for r in [rat(-1, 3), rat_int(0), rat(7, 2), rat_int(40)] {
            assert_eq!(phi.eval(&r).unwrap(), r);
        }
    }

    #[test]
    fn psi_inverts_phi_on_the_q2_zeta8_chain() {
        let rg = chain_q2_zeta8();
        let phi = rg.phi();
        let psi = rg.psi();
        for r in [rat_int(-1), rat(-1, 2), rat_int(1), rat(5, 2), rat_int(3), rat(17, 3)] {
            let s = phi.eval(&r).unwrap();
            assert_eq!(psi.eval(&s).unwrap(), r);
        }
    }

    #[test]
    fn upper_group_examples() {
        let rg = chain_2_2_1();
        // s in (-1, 0] gives G_0.
        assert_eq!(rg.upper_group(&rat(-1, 2)).unwrap(), rg.chain()[0]);
        assert_eq!(rg.upper_group(&rat_int(0)).unwrap(), rg.chain()[0]);
        // Break at s = 1: the group at the break is still G_1, trivial after.
        assert_eq!(rg.upper_group(&rat_int(1)).unwrap().order(), 2);
        assert!(rg.upper_group(&rat(3, 2)).unwrap().is_trivial());
        // s = -1 gives the whole group.
        assert_eq!(rg.upper_group(&rat_int(-1)).unwrap().order(), 2);
    }

    #[test]
    fn upper_breaks_of_a_tame_chain() {
        assert_eq!(tame(5).upper_breaks(), vec![rat_int(0)]);
    }

    #[test]
    fn upper_breaks_of_q2_zeta8_are_1_and_2() {
        // phi evaluation on the oracle-derived chain: drops at lower
        // indices 1 and 3 map to s = 1 and s = 2.
        assert_eq!(chain_q2_zeta8().upper_breaks(), vec![rat_int(1), rat_int(2)]);
    }

    #[test]
    fn unramified_chain_has_no_upper_breaks() {
        assert!(unramified(4).upper_breaks().is_empty());
    }

    #[test]
    fn upper_breaks_match_phi_vertices() {
        for rg in [chain_2_2_1(), chain_q2_zeta8(), tame(6)] {
            let from_vertices: Vec<Rational> = rg
                .phi()
                .vertices()
                .iter()
                .skip(1)
                .map(|(_, s)| s.clone())
                .collect();
            assert_eq!(rg.upper_breaks(), from_vertices);
        }
    }

    #[test]
    fn upper_to_lower_roundtrip() {
        for rg in [chain_2_2_1(), chain_q2_zeta8(), tame(7), unramified(3)] {
            let steps = rg.upper_steps();
            let back = upper_to_lower(rg.group().clone(), &steps, rg.realizable()).unwrap();
            assert_eq!(back, rg);
        }
    }

    #[test]
    fn upper_to_lower_single_tame_break() {
        let g = FiniteGroup::cyclic(6);
        let steps = vec![(rat_int(0), g.full_subgroup())];
        let rg = upper_to_lower(g.clone(), &steps, false).unwrap();
        let orders: Vec<usize> = rg.chain().iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![6, 1]);
    }

    #[test]
    fn upper_to_lower_inverts_the_q2_zeta8_computation() {
        // Breaks {1, 2} with groups (whole, {1,5}) reconstruct the lower
        // chain orders (4, 4, 2, 2, 1).
        let g = FiniteGroup::unit_group_mod(8).unwrap();
        let five = units_mod(8).iter().position(|&u| u == 5).unwrap();
        let steps = vec![
            (rat_int(1), g.full_subgroup()),
            (rat_int(2), g.subgroup_generated(&[five]).unwrap()),
        ];
        let rg = upper_to_lower(g, &steps, false).unwrap();
        let orders: Vec<usize> = rg.chain().iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![4, 4, 2, 2, 1]);
    }

    #[test]
    fn upper_to_lower_rejects_non_integral_breaks() {
        // G^s = C2 on (-1, 1/2], trivial after: psi(1/2) = 1/2 is not an
        // integer, so no lower chain produces this step function.
        let g = FiniteGroup::cyclic(2);
        let steps = vec![(rat(1, 2), g.full_subgroup())];
        assert!(matches!(
            upper_to_lower(g, &steps, false),
            Err(RamError::NonIntegralLowerBreak { position: 0, .. })
        ));
    }

    #[test]
    fn quotient_filtration_by_trivial_keeps_the_filtration() {
        let rg = chain_q2_zeta8();
        let (q, _) = rg.quotient_filtration(&rg.group().trivial_subgroup()).unwrap();
        let orders: Vec<usize> = q.chain().iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![4, 4, 2, 2, 1]);
    }

    #[test]
    fn quotient_filtration_by_everything_is_trivial() {
        let rg = chain_q2_zeta8();
        let (q, _) = rg.quotient_filtration(&rg.group().full_subgroup()).unwrap();
        assert_eq!(q.group().size(), 1);
        let orders: Vec<usize> = q.chain().iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![1]);
    }

    #[test]
    fn quotient_of_q2_zeta8_by_15_matches_q2_zeta4() {
        // Collapsing {1, 5} inside the mod-8 chain leaves the mod-4 shape
        // (2, 2, 1), matching the valuation oracle run at level 4.
        let rg = chain_q2_zeta8();
        let five = units_mod(8).iter().position(|&u| u == 5).unwrap();
        let n = rg.group().subgroup_generated(&[five]).unwrap();
        let (q, _) = rg.quotient_filtration(&n).unwrap();
        let orders: Vec<usize> = q.chain().iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![2, 2, 1]);
    }

    #[test]
    fn abstract_quotient_can_be_unreconstructible() {
        // Klein four-group, chain G_0 = G, G_1 = <a>, G_2 = 1; the image
        // filtration modulo <b> drops at upper index 1/2.
        let t = vec![
            vec![0, 1, 2, 3],
            vec![1, 0, 3, 2],
            vec![2, 3, 0, 1],
            vec![3, 2, 1, 0],
        ];
        let g = FiniteGroup::from_table(t, None).unwrap();
        let a = g.subgroup_generated(&[1]).unwrap();
        let b = g.subgroup_generated(&[2]).unwrap();
        let rg = RamifiedGroup::new(g.clone(), vec![g.full_subgroup(), a], false).unwrap();
        assert!(matches!(
            rg.quotient_filtration(&b),
            Err(RamError::NonIntegralLowerBreak { .. })
        ));
    }

    #[test]
    fn chain_must_be_descending() {
        let g = FiniteGroup::cyclic(4);
        let small = g.subgroup_generated(&[2]).unwrap();
        let err = RamifiedGroup::new(g.clone(), vec![small, g.full_subgroup()], false);
        assert!(matches!(err, Err(RamError::ChainNotDescending { index: 1 })));
    }

    #[test]
    fn chain_entries_must_be_normal() {
        let g = crate::groups::symmetric_3();
        let stab = g.subgroup_generated(&[1]).unwrap();
        let err = RamifiedGroup::new(g.clone(), vec![g.full_subgroup(), stab], false);
        assert!(matches!(err, Err(RamError::ChainNotNormal { index: 1 })));
    }

    #[test]
    fn trailing_trivial_entry_is_appended() {
        let rg = tame(4);
        assert_eq!(rg.chain().len(), 2);
        assert!(rg.chain().last().unwrap().is_trivial());
    }

    #[test]
    fn upper_equals_lower_at_integer_points_via_phi() {
        // G^{phi(r)} = G_r at the integers.
        for rg in [chain_2_2_1(), chain_q2_zeta8(), tame(5)] {
            let phi = rg.phi();
            for r in -1..=6 {
                let r = rat_int(r);
                let s = phi.eval(&r).unwrap();
                assert_eq!(rg.upper_group(&s).unwrap(), rg.lower_group(&r).unwrap());
            }
        }
    }
}
