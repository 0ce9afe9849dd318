//! Cyclotomic-valued class functions and characters on a ramified group;
//! the Artin conductor by Artin's sum and by the lower and upper integral
//! forms; tame and Swan parts; the Artin and Swan class functions and the
//! inner-product realization of the conductor; tensor products, depth and
//! the twisting law.
//!
//! Representations are carried entirely by their characters here: every
//! quantity involved depends only on dimensions of fixed spaces, which the
//! character average computes. Explicit matrices appear only in
//! [`crate::weildeligne`], where the monodromy operator forces them.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::exactnum::{lcm_order, rat_int, Cyclotomic, NumError, Rational};
use crate::groups::{GroupError, Subgroup};
use crate::ramification::{RamError, RamifiedGroup};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharError {
    #[error("class functions live on different ramified groups")]
    DomainMismatch,
    #[error("expected {expected} values, got {got}")]
    WrongValueCount { expected: usize, got: usize },
    #[error("values are not constant on conjugacy class {class}")]
    NotClassConstant { class: usize },
    #[error("degree {degree} is not a positive rational integer")]
    DegreeNotPositiveInteger { degree: Rational },
    #[error("subgroup average {value} is not a dimension between 0 and {degree}: not a character")]
    FixedSpaceOutOfRange { value: Rational, degree: u64 },
    #[error("conductor {value} of a character on a realizable instance is not a nonnegative integer")]
    IntegralityViolation { value: Rational },
    #[error("character has degree {degree}, expected degree 1")]
    NotDegreeOne { degree: u64 },
    #[error("twisting precondition violated: chi (depth {chi:?}) is not more deeply ramified than rho (depth {rho:?})")]
    NotMoreDeeplyRamified { rho: Option<Rational>, chi: Option<Rational> },
    #[error("irreducible depth formula fails: a = {conductor} but degree * (depth + 1) = {expected}")]
    DepthFormulaViolation { conductor: Rational, expected: Rational },
    #[error("character is ramified but no upper break detects it: corrupted input")]
    InconsistentDepth,
    #[error("values do not factor through the quotient: elements {a} and {b} share a coset")]
    NotConstantOnCosets { a: usize, b: usize },
    #[error("homomorphism count {got} does not match the abelianization order {expected}")]
    CharacterCountMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ram(#[from] RamError),
}

/// A cyclotomic-valued function constant on conjugacy classes, attached to
/// a ramified group. Values are stored per conjugacy class in a single
/// declared cyclotomic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    rg: Arc<RamifiedGroup>,
    order: u64,
    values: Vec<Cyclotomic>,
}

impl ClassFunction {
    /// Build from one value per conjugacy class (classes ordered as in
    /// [`crate::groups::FiniteGroup::conjugacy_classes`]). Values of mixed
    /// cyclotomic orders are promoted to their lcm.
    pub fn from_class_values(
        rg: Arc<RamifiedGroup>,
        values: Vec<Cyclotomic>,
    ) -> Result<Self, CharError> {
        let expected = rg.group().conjugacy_classes().len();
        if values.len() != expected {
            return Err(CharError::WrongValueCount { expected, got: values.len() });
        }
        let order = values.iter().fold(1, |o, v| lcm_order(o, v.order()));
        let values = values
            .into_iter()
            .map(|v| v.embed(order))
            .collect::<Result<_, NumError>>()?;
        Ok(ClassFunction { rg, order, values })
    }

    /// Build from one value per group element, verifying constancy on
    /// conjugacy classes.
    pub fn from_element_values(
        rg: Arc<RamifiedGroup>,
        values: Vec<Cyclotomic>,
    ) -> Result<Self, CharError> {
        let group = rg.group();
        if values.len() != group.size() {
            return Err(CharError::WrongValueCount { expected: group.size(), got: values.len() });
        }
        let order = values.iter().fold(1, |o, v| lcm_order(o, v.order()));
        let values: Vec<Cyclotomic> = values
            .into_iter()
            .map(|v| v.embed(order))
            .collect::<Result<_, NumError>>()?;
        let mut per_class = Vec::with_capacity(group.conjugacy_classes().len());
        for (ci, class) in group.conjugacy_classes().iter().enumerate() {
            let v = &values[class[0]];
            if class.iter().any(|&g| &values[g] != v) {
                return Err(CharError::NotClassConstant { class: ci });
            }
            per_class.push(v.clone());
        }
        Ok(ClassFunction { rg, order, values: per_class })
    }

    pub fn trivial(rg: Arc<RamifiedGroup>) -> Self {
        let n = rg.group().conjugacy_classes().len();
        ClassFunction {
            rg,
            order: 1,
            values: alloc::vec![Cyclotomic::one(1); n],
        }
    }

    /// The regular character: group order at the identity, zero elsewhere.
    pub fn regular(rg: Arc<RamifiedGroup>) -> Self {
        let group = rg.group();
        let values = group
            .conjugacy_classes()
            .iter()
            .map(|class| {
                if class.contains(&group.identity()) {
                    Cyclotomic::from_rational(1, rat_int(group.size() as i64))
                } else {
                    Cyclotomic::zero(1)
                }
            })
            .collect();
        ClassFunction { rg, order: 1, values }
    }

    pub fn rg(&self) -> &Arc<RamifiedGroup> {
        &self.rg
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn class_values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value_at_class(&self, class: usize) -> &Cyclotomic {
        &self.values[class]
    }

    pub fn value_at(&self, g: usize) -> &Cyclotomic {
        &self.values[self.rg.group().class_of(g)]
    }

    /// Value at the identity.
    pub fn degree_value(&self) -> &Cyclotomic {
        self.value_at(self.rg.group().identity())
    }

    pub fn same_domain(&self, other: &ClassFunction) -> bool {
        Arc::ptr_eq(&self.rg, &other.rg) || self.rg == other.rg
    }

    /// Pointwise sum.
    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction, CharError> {
        if !self.same_domain(other) {
            return Err(CharError::DomainMismatch);
        }
        let order = lcm_order(self.order, other.order);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.embed(order)?.add(&b.embed(order)?))
            .collect::<Result<_, NumError>>()?;
        Ok(ClassFunction { rg: self.rg.clone(), order, values })
    }

    /// Pointwise product.
    pub fn mul(&self, other: &ClassFunction) -> Result<ClassFunction, CharError> {
        if !self.same_domain(other) {
            return Err(CharError::DomainMismatch);
        }
        let order = lcm_order(self.order, other.order);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.embed(order)?.mul(&b.embed(order)?))
            .collect::<Result<_, NumError>>()?;
        Ok(ClassFunction { rg: self.rg.clone(), order, values })
    }
}

/// Exact inner product `(1/|G|) * sum_g f(g) * g(g^-1)`; for characters
/// this is the usual hermitian pairing, since the value at the inverse is
/// the complex conjugate.
pub fn inner_product(f: &ClassFunction, g: &ClassFunction) -> Result<Rational, CharError> {
    if !f.same_domain(g) {
        return Err(CharError::DomainMismatch);
    }
    let group = f.rg.group();
    let order = lcm_order(f.order, g.order);
    let mut acc = Cyclotomic::zero(order);
    for (ci, class) in group.conjugacy_classes().iter().enumerate() {
        let inv_class = group.class_of(group.inverse(class[0]));
        let term = f.values[ci]
            .embed(order)?
            .mul(&g.values[inv_class].embed(order)?)?
            .scale(&rat_int(class.len() as i64));
        acc = acc.add(&term)?;
    }
    Ok(acc.scale(&rat_int(group.size() as i64).recip()).as_rational()?)
}

/// A class function that claims to be the trace of a genuine
/// representation: its degree is a positive rational integer, and every
/// subgroup average must come out a dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    cf: ClassFunction,
    degree: u64,
}

impl Character {
    pub fn new(cf: ClassFunction) -> Result<Self, CharError> {
        let degree = cf.degree_value().as_rational()?;
        if !degree.is_integer() || !degree.is_positive() {
            return Err(CharError::DegreeNotPositiveInteger { degree });
        }
        let deg_int = TryInto::<u64>::try_into(&degree.to_integer())
            .map_err(|_| CharError::DegreeNotPositiveInteger { degree: degree.clone() })?;
        Ok(Character { cf, degree: deg_int })
    }

    pub fn trivial(rg: Arc<RamifiedGroup>) -> Self {
        Character { cf: ClassFunction::trivial(rg), degree: 1 }
    }

    pub fn class_function(&self) -> &ClassFunction {
        &self.cf
    }

    pub fn rg(&self) -> &Arc<RamifiedGroup> {
        &self.cf.rg
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn value_at(&self, g: usize) -> &Cyclotomic {
        self.cf.value_at(g)
    }

    /// `dim V^H` computed as the exact average `(1/|H|) sum_{h in H} chi(h)`,
    /// verified to be a rational integer between 0 and the degree.
    pub fn fixed_dim(&self, h: &Subgroup) -> Result<u64, CharError> {
        if h.parent_size() != self.cf.rg.group().size() {
            return Err(GroupError::ForeignSubgroup.into());
        }
        let mut acc = Cyclotomic::zero(self.cf.order);
        for &x in h.elements() {
            acc = acc.add(self.cf.value_at(x))?;
        }
        let avg = acc.scale(&rat_int(h.order() as i64).recip()).as_rational()?;
        if !avg.is_integer() || avg.is_negative() || avg > rat_int(self.degree as i64) {
            return Err(CharError::FixedSpaceOutOfRange { value: avg, degree: self.degree });
        }
        Ok(TryInto::<u64>::try_into(&avg.to_integer()).expect("bounded by degree"))
    }

    /// `codim V^H = degree - dim V^H`.
    pub fn fixed_codim(&self, h: &Subgroup) -> Result<u64, CharError> {
        Ok(self.degree - self.fixed_dim(h)?)
    }

    fn assert_integral_if_realizable(&self, value: Rational) -> Result<Rational, CharError> {
        if self.cf.rg.realizable() && (!value.is_integer() || value.is_negative()) {
            return Err(CharError::IntegralityViolation { value });
        }
        Ok(value)
    }

    /// The Artin conductor by Artin's sum
    /// `a = sum_{i >= 0} codim V^{G_i} / [G_0 : G_i]`.
    ///
    /// On instances flagged realizable the result is additionally asserted
    /// to be a nonnegative integer; a violation signals corrupted input.
    pub fn artin_conductor_sum(&self) -> Result<Rational, CharError> {
        let chain = self.cf.rg.chain();
        let g0 = rat_int(chain[0].order() as i64);
        let mut total = Rational::zero();
        for h in chain {
            let codim = self.fixed_codim(h)?;
            total += rat_int(codim as i64) * rat_int(h.order() as i64) / &g0;
        }
        self.assert_integral_if_realizable(total)
    }

    /// The conductor as the lower-numbering integral
    /// `int_{-1}^inf codim V^{G_r} / [G_0 : G_r] dr`, evaluated exactly as
    /// a finite sum of (segment length) x (constant integrand) over the
    /// integer partition, sampling each open segment at its midpoint.
    pub fn conductor_lower_integral(&self) -> Result<Rational, CharError> {
        let rg = &self.cf.rg;
        let g0 = rat_int(rg.chain()[0].order() as i64);
        let half = Rational::new(1.into(), 2.into());
        let mut total = Rational::zero();
        for i in 0..rg.chain().len() {
            // the integrand is constant on (i-1, i)
            let sample = rat_int(i as i64) - &half;
            let h = rg.lower_group(&sample)?;
            let codim = self.fixed_codim(&h)?;
            total += rat_int(codim as i64) * rat_int(h.order() as i64) / &g0;
        }
        self.assert_integral_if_realizable(total)
    }

    /// The conductor as the upper-numbering integral
    /// `int_{-1}^inf codim V^{G^s} ds`, evaluated exactly over the
    /// partition cut at the upper breaks, sampling each segment at its
    /// midpoint.
    pub fn conductor_upper_integral(&self) -> Result<Rational, CharError> {
        let rg = &self.cf.rg;
        let half = Rational::new(1.into(), 2.into());
        let mut total = Rational::zero();
        let mut prev = rat_int(-1);
        for b in rg.upper_breaks() {
            let mid = (&prev + &b) * &half;
            let h = rg.upper_group(&mid)?;
            let codim = self.fixed_codim(&h)?;
            total += rat_int(codim as i64) * (&b - &prev);
            prev = b;
        }
        self.assert_integral_if_realizable(total)
    }

    /// The tame conductor `epsilon = codim V^{G_0}`.
    pub fn tame_part(&self) -> Result<u64, CharError> {
        self.fixed_codim(self.cf.rg.inertia())
    }

    /// The Swan (wild) conductor
    /// `delta = sum_{i >= 1} codim V^{G_i} / [G_0 : G_i]`, so that
    /// `epsilon + delta = a` exactly.
    pub fn swan_part(&self) -> Result<Rational, CharError> {
        let chain = self.cf.rg.chain();
        let g0 = rat_int(chain[0].order() as i64);
        let mut total = Rational::zero();
        for h in &chain[1..] {
            let codim = self.fixed_codim(h)?;
            total += rat_int(codim as i64) * rat_int(h.order() as i64) / &g0;
        }
        self.assert_integral_if_realizable(total)
    }

    /// Pointwise (tensor) product of characters; degrees multiply.
    pub fn tensor(&self, other: &Character) -> Result<Character, CharError> {
        Character::new(self.cf.mul(&other.cf)?)
    }

    /// Pointwise sum (direct sum of representations); degrees add.
    pub fn direct_sum(&self, other: &Character) -> Result<Character, CharError> {
        Character::new(self.cf.add(&other.cf)?)
    }

    /// The depth `m = sup { s : chi nontrivial on G^s }`, i.e. the largest
    /// upper break at which the fixed space is proper. `None` stands for
    /// "negative infinity" and is returned exactly when the character is
    /// unramified (trivial on `G_0`).
    pub fn depth(&self) -> Result<Option<Rational>, CharError> {
        let rg = &self.cf.rg;
        if self.fixed_dim(rg.inertia())? == self.degree {
            return Ok(None);
        }
        for b in rg.upper_breaks().into_iter().rev() {
            let h = rg.upper_group(&b)?;
            if self.fixed_dim(&h)? < self.degree {
                return Ok(Some(b));
            }
        }
        Err(CharError::InconsistentDepth)
    }

    /// `true` iff `<chi, chi> = 1`.
    pub fn is_irreducible(&self) -> Result<bool, CharError> {
        Ok(inner_product(&self.cf, &self.cf)? == Rational::one())
    }

    /// For an irreducible ramified character, assert the exact identity
    /// `a(chi) = degree * (depth + 1)`; vacuous otherwise. The report
    /// carries all computed quantities.
    pub fn check_irreducible_depth_formula(&self) -> Result<DepthFormulaReport, CharError> {
        let irreducible = self.is_irreducible()?;
        let conductor = self.artin_conductor_sum()?;
        let depth = self.depth()?;
        if irreducible {
            if let Some(m) = &depth {
                let expected = rat_int(self.degree as i64) * (m + Rational::one());
                if conductor != expected {
                    return Err(CharError::DepthFormulaViolation { conductor, expected });
                }
            }
        }
        Ok(DepthFormulaReport { irreducible, degree: self.degree, depth, conductor })
    }

    /// The kernel `{ g : chi(g) = deg chi }` as a subgroup.
    pub fn kernel(&self) -> Result<Subgroup, CharError> {
        let group = self.cf.rg.group();
        let deg = Cyclotomic::from_rational(self.cf.order, rat_int(self.degree as i64));
        let elems: Vec<usize> = (0..group.size())
            .filter(|&g| *self.cf.value_at(g) == deg)
            .collect();
        Ok(group.subgroup_from_elements(&elems)?)
    }

    /// Transport the character along a quotient projection it factors
    /// through (for example the one returned by
    /// [`RamifiedGroup::quotient_filtration`] applied to its kernel).
    pub fn factor_through(
        &self,
        quotient: Arc<RamifiedGroup>,
        proj: &[usize],
    ) -> Result<Character, CharError> {
        let group = self.cf.rg.group();
        let qsize = quotient.group().size();
        let mut values: Vec<Option<Cyclotomic>> = alloc::vec![None; qsize];
        let mut witness: Vec<usize> = alloc::vec![0; qsize];
        for g in 0..group.size() {
            let v = self.cf.value_at(g);
            match &values[proj[g]] {
                None => {
                    values[proj[g]] = Some(v.clone());
                    witness[proj[g]] = g;
                }
                Some(w) if w == v => {}
                Some(_) => {
                    return Err(CharError::NotConstantOnCosets { a: witness[proj[g]], b: g });
                }
            }
        }
        let values: Vec<Cyclotomic> = values
            .into_iter()
            .map(|v| v.expect("projection is surjective"))
            .collect();
        Character::new(ClassFunction::from_element_values(quotient, values)?)
    }
}

/// Result of [`Character::check_irreducible_depth_formula`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthFormulaReport {
    pub irreducible: bool,
    pub degree: u64,
    pub depth: Option<Rational>,
    pub conductor: Rational,
}

/// Result of [`check_twisting`]: both sides of
/// `a(rho tensor chi) = deg(rho) * a(chi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistingReport {
    pub depth_rho: Option<Rational>,
    pub depth_chi: Option<Rational>,
    pub twisted_conductor: Rational,
    pub expected: Rational,
    pub agree: bool,
}

/// Verify the twisting law for a degree-1 character `chi` more deeply
/// ramified than `rho`: `a(rho tensor chi) = deg(rho) * a(chi)`. The depth
/// precondition is checked and a violation is an error, not a computation.
pub fn check_twisting(rho: &Character, chi: &Character) -> Result<TwistingReport, CharError> {
    if chi.degree() != 1 {
        return Err(CharError::NotDegreeOne { degree: chi.degree() });
    }
    if !rho.cf.same_domain(&chi.cf) {
        return Err(CharError::DomainMismatch);
    }
    let depth_rho = rho.depth()?;
    let depth_chi = chi.depth()?;
    if depth_chi <= depth_rho {
        return Err(CharError::NotMoreDeeplyRamified { rho: depth_rho, chi: depth_chi });
    }
    let twisted = rho.tensor(chi)?;
    let twisted_conductor = twisted.artin_conductor_sum()?;
    let expected = rat_int(rho.degree() as i64) * chi.artin_conductor_sum()?;
    let agree = twisted_conductor == expected;
    Ok(TwistingReport { depth_rho, depth_chi, twisted_conductor, expected, agree })
}

/// The Artin class function
/// `a_G = sum_{i >= 0} (1/[G_0:G_i]) Ind_{G_i}^G (r_{G_i} - 1_{G_i})`,
/// built from regular and trivial characters by expanding the induction
/// formula; it satisfies `<chi, a_G> = a(chi)` for every character.
pub fn artin_class_function(rg: &Arc<RamifiedGroup>) -> ClassFunction {
    weighted_induction_sum(rg, 0)
}

/// The Swan class function: the Artin class function minus its `i = 0`
/// term, pairing to the Swan conductor.
pub fn swan_class_function(rg: &Arc<RamifiedGroup>) -> ClassFunction {
    weighted_induction_sum(rg, 1)
}

fn weighted_induction_sum(rg: &Arc<RamifiedGroup>, from_index: usize) -> ClassFunction {
    let group = rg.group();
    let chain = rg.chain();
    let g0 = rat_int(chain[0].order() as i64);
    let classes = group.conjugacy_classes();
    let mut per_class = alloc::vec![Rational::zero(); classes.len()];
    for h in chain.iter().skip(from_index) {
        let weight = rat_int(h.order() as i64) / &g0;
        for (ci, class) in classes.iter().enumerate() {
            let rep = class[0];
            // Ind_H^G (r_H - 1_H) at rep: (1/|H|) * sum over x with
            // x^-1 rep x in H of (|H| - 1 at the identity, -1 otherwise).
            let mut acc = Rational::zero();
            for x in 0..group.size() {
                let conj = group.mul(group.mul(group.inverse(x), rep), x);
                if h.contains(conj) {
                    if conj == group.identity() {
                        acc += rat_int(h.order() as i64 - 1);
                    } else {
                        acc += rat_int(-1);
                    }
                }
            }
            per_class[ci] += &weight * acc / rat_int(h.order() as i64);
        }
    }
    let values = per_class
        .into_iter()
        .map(|v| Cyclotomic::from_rational(1, v))
        .collect();
    ClassFunction::from_class_values(rg.clone(), values).expect("one value per class")
}

/// All degree-1 characters of the group (the characters of its
/// abelianization, pulled back), in a deterministic order with the
/// trivial character first. The count always equals the order of the
/// abelianization.
pub fn degree_one_characters(rg: &Arc<RamifiedGroup>) -> Result<Vec<Character>, CharError> {
    let group = rg.group();
    let commutator = group.commutator_subgroup();
    let (ab, proj) = group.quotient(&commutator)?;
    let exponent = ab.exponent();

    // Greedy minimal generating set of the abelianization.
    let mut gens: Vec<usize> = Vec::new();
    let mut span = ab.subgroup_generated(&[])?;
    for g in 0..ab.size() {
        if !span.contains(g) {
            gens.push(g);
            span = ab.subgroup_generated(&gens)?;
        }
    }

    // Candidate exponents per generator: t with t * ord(gen) = 0 mod e.
    let candidates: Vec<Vec<u64>> = gens
        .iter()
        .map(|&g| {
            let ord = ab.element_order(g) as u64;
            (0..ord).map(|j| j * (exponent / ord)).collect()
        })
        .collect();

    let mut chars: Vec<Character> = Vec::new();
    let mut tuple: Vec<usize> = alloc::vec![0; gens.len()];
    'tuples: loop {
        if let Some(exps) = assign_exponents(&ab, &gens, &tuple, &candidates, exponent) {
            let values: Vec<Cyclotomic> = (0..group.size())
                .map(|g| Cyclotomic::root_of_unity(exponent, exps[proj[g]] as i64))
                .collect();
            chars.push(Character::new(ClassFunction::from_element_values(
                rg.clone(),
                values,
            )?)?);
        }
        // advance the mixed-radix tuple; done when it wraps around
        for i in 0..=tuple.len() {
            if i == tuple.len() {
                break 'tuples;
            }
            tuple[i] += 1;
            if tuple[i] < candidates[i].len() {
                continue 'tuples;
            }
            tuple[i] = 0;
        }
        break;
    }
    let expected = ab.size();
    if chars.len() != expected {
        return Err(CharError::CharacterCountMismatch { expected, got: chars.len() });
    }
    Ok(chars)
}

/// Extend generator exponents to the whole abelian group, or detect that
/// the assignment is inconsistent with the relations.
fn assign_exponents(
    ab: &crate::groups::FiniteGroup,
    gens: &[usize],
    tuple: &[usize],
    candidates: &[Vec<u64>],
    exponent: u64,
) -> Option<Vec<u64>> {
    let gen_exp: Vec<u64> = tuple.iter().zip(candidates).map(|(&t, c)| c[t]).collect();
    let mut exps: Vec<Option<u64>> = alloc::vec![None; ab.size()];
    exps[ab.identity()] = Some(0);
    let mut stack = alloc::vec![ab.identity()];
    while let Some(x) = stack.pop() {
        let tx = exps[x].expect("on stack means assigned");
        for (i, &g) in gens.iter().enumerate() {
            let y = ab.mul(x, g);
            let ty = (tx + gen_exp[i]) % exponent;
            match exps[y] {
                None => {
                    exps[y] = Some(ty);
                    stack.push(y);
                }
                Some(known) if known != ty => return None,
                Some(_) => {}
            }
        }
    }
    Some(exps.into_iter().map(|e| e.expect("generators generate")).collect())
}

/// Induce a degree-1 character of the subgroup `h` (given by one value per
/// element of `h`, in element order) up to the whole group.
pub fn induced_character(
    rg: &Arc<RamifiedGroup>,
    h: &Subgroup,
    values_on_h: &[Cyclotomic],
) -> Result<Character, CharError> {
    let group = rg.group();
    if h.parent_size() != group.size() {
        return Err(GroupError::ForeignSubgroup.into());
    }
    if values_on_h.len() != h.order() {
        return Err(CharError::WrongValueCount { expected: h.order(), got: values_on_h.len() });
    }
    let order = values_on_h.iter().fold(1, |o, v| lcm_order(o, v.order()));
    let classes = group.conjugacy_classes();
    let mut values = Vec::with_capacity(classes.len());
    for class in classes {
        let rep = class[0];
        let mut acc = Cyclotomic::zero(order);
        for x in 0..group.size() {
            let conj = group.mul(group.mul(group.inverse(x), rep), x);
            if let Ok(pos) = h.elements().binary_search(&conj) {
                acc = acc.add(&values_on_h[pos].embed(order)?)?;
            }
        }
        values.push(acc.scale(&rat_int(h.order() as i64).recip()));
    }
    Character::new(ClassFunction::from_class_values(rg.clone(), values)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::groups::{symmetric_3, units_mod, FiniteGroup};
    use crate::ramification::RamifiedGroup;

    fn tame(e: usize) -> Arc<RamifiedGroup> {
        let g = FiniteGroup::cyclic(e);
        let chain = alloc::vec![g.full_subgroup()];
        Arc::new(RamifiedGroup::new(g, chain, true).unwrap())
    }

    fn unramified(n: usize) -> Arc<RamifiedGroup> {
        let g = FiniteGroup::cyclic(n);
        let chain = alloc::vec![g.trivial_subgroup()];
        Arc::new(RamifiedGroup::new(g, chain, true).unwrap())
    }

    /// The `Q_2(zeta_4)` chain: orders (2, 2, 1) on the units mod 4.
    fn q2_zeta4() -> Arc<RamifiedGroup> {
        let g = FiniteGroup::unit_group_mod(4).unwrap();
        let full = g.full_subgroup();
        Arc::new(RamifiedGroup::new(g, alloc::vec![full.clone(), full], true).unwrap())
    }

    /// The `Q_2(zeta_8)` chain: orders (4, 4, 2, 2, 1) on the units mod 8.
    fn q2_zeta8() -> Arc<RamifiedGroup> {
        let g = FiniteGroup::unit_group_mod(8).unwrap();
        let five = units_mod(8).iter().position(|&u| u == 5).unwrap();
        let full = g.full_subgroup();
        let mid = g.subgroup_generated(&[five]).unwrap();
        Arc::new(
            RamifiedGroup::new(g, alloc::vec![full.clone(), full, mid.clone(), mid], true).unwrap(),
        )
    }

    /// Degree-1 character of the mod-8 group with the prescribed kernel
    /// residues.
    fn char_mod8_with_kernel(rg: &Arc<RamifiedGroup>, kernel: &[u64]) -> Character {
        let units = units_mod(8);
        degree_one_characters(rg)
            .unwrap()
            .into_iter()
            .find(|chi| {
                let ker = chi.kernel().unwrap();
                let res: Vec<u64> = ker.elements().iter().map(|&i| units[i]).collect();
                res == kernel
            })
            .expect("kernel realized by some character")
    }

    #[test]
    fn fixed_dim_of_trivial_character_is_degree() {
        let rg = tame(6);
        let chi = Character::trivial(rg.clone());
        assert_eq!(chi.fixed_dim(&rg.group().full_subgroup()).unwrap(), 1);
        assert_eq!(chi.fixed_dim(&rg.group().trivial_subgroup()).unwrap(), 1);
    }

    #[test]
    fn fixed_dim_of_faithful_character_on_c2() {
        // (1 + (-1)) / 2 = 0.
        let rg = tame(2);
        let chi = &degree_one_characters(&rg).unwrap()[1];
        assert_eq!(chi.fixed_dim(&rg.group().full_subgroup()).unwrap(), 0);
    }

    #[test]
    fn fixed_dim_of_regular_character_of_c3() {
        // Brute-force oracle: the average over C3 is (3 + 0 + 0)/3 = 1.
        let rg = tame(3);
        let reg = Character::new(ClassFunction::regular(rg.clone())).unwrap();
        let brute: Rational = (0..3)
            .map(|g| reg.value_at(g).as_rational().unwrap())
            .fold(Rational::zero(), |a, b| a + b)
            / rat_int(3);
        assert_eq!(brute, rat_int(1));
        assert_eq!(reg.fixed_dim(&rg.group().full_subgroup()).unwrap(), 1);
    }

    #[test]
    fn trivial_character_has_conductor_zero() {
        let chi = Character::trivial(q2_zeta8());
        assert_eq!(chi.artin_conductor_sum().unwrap(), rat_int(0));
        assert_eq!(chi.conductor_lower_integral().unwrap(), rat_int(0));
        assert_eq!(chi.conductor_upper_integral().unwrap(), rat_int(0));
    }

    #[test]
    fn tame_faithful_character_has_conductor_one() {
        let rg = tame(5);
        for chi in &degree_one_characters(&rg).unwrap()[1..] {
            assert_eq!(chi.artin_conductor_sum().unwrap(), rat_int(1));
        }
    }

    #[test]
    fn faithful_character_on_q2_zeta4_has_conductor_two() {
        // G_0 = G_1 = G, so the sum is 1 + 1.
        let rg = q2_zeta4();
        let chi = &degree_one_characters(&rg).unwrap()[1];
        assert_eq!(chi.degree(), 1);
        assert_eq!(chi.artin_conductor_sum().unwrap(), rat_int(2));
    }

    #[test]
    fn mod8_character_with_kernel_15_has_conductor_two_by_both_integrals() {
        let rg = q2_zeta8();
        let chi = char_mod8_with_kernel(&rg, &[1, 5]);
        assert_eq!(chi.conductor_lower_integral().unwrap(), rat_int(2));
        assert_eq!(chi.conductor_upper_integral().unwrap(), rat_int(2));
        assert_eq!(chi.artin_conductor_sum().unwrap(), rat_int(2));
    }

    #[test]
    fn primitive_mod8_character_has_conductor_three_by_both_integrals() {
        let rg = q2_zeta8();
        let chi = char_mod8_with_kernel(&rg, &[1, 7]);
        assert_eq!(chi.artin_conductor_sum().unwrap(), rat_int(3));
        assert_eq!(chi.conductor_lower_integral().unwrap(), rat_int(3));
        assert_eq!(chi.conductor_upper_integral().unwrap(), rat_int(3));
    }

    #[test]
    fn tame_and_swan_parts() {
        // Unramified: (0, 0). Tame faithful: (1, 0). Primitive mod 8: (1, 2).
        let chi = Character::trivial(unramified(4));
        assert_eq!(chi.tame_part().unwrap(), 0);
        assert_eq!(chi.swan_part().unwrap(), rat_int(0));

        let rg = tame(4);
        let chi = &degree_one_characters(&rg).unwrap()[1];
        assert_eq!(chi.tame_part().unwrap(), 1);
        assert_eq!(chi.swan_part().unwrap(), rat_int(0));

        let rg = q2_zeta8();
        let chi = char_mod8_with_kernel(&rg, &[1, 7]);
        assert_eq!(chi.tame_part().unwrap(), 1);
        assert_eq!(chi.swan_part().unwrap(), rat_int(2));
        let a = chi.artin_conductor_sum().unwrap();
        assert_eq!(rat_int(chi.tame_part().unwrap() as i64) + chi.swan_part().unwrap(), a);
    }

    #[test]
    fn artin_class_function_of_unramified_chain_is_zero() {
        let rg = unramified(5);
        let a_g = artin_class_function(&rg);
        assert!(a_g.class_values().iter().all(Cyclotomic::is_zero));
    }

    #[test]
    fn artin_class_function_of_tame_chain() {
        // Expanding the induction: a_G(1) = e - 1 and a_G(g) = -1 otherwise.
        let e = 5;
        let rg = tame(e);
        let a_g = artin_class_function(&rg);
        for g in 0..e {
            let expected = if g == 0 { rat_int(e as i64 - 1) } else { rat_int(-1) };
            assert_eq!(a_g.value_at(g).as_rational().unwrap(), expected);
        }
    }

    #[test]
    fn pairing_with_artin_class_function_gives_the_conductor() {
        let rg = q2_zeta4();
        let chi = &degree_one_characters(&rg).unwrap()[1];
        let a_g = artin_class_function(&rg);
        assert_eq!(inner_product(chi.class_function(), &a_g).unwrap(), rat_int(2));
        let sw = swan_class_function(&rg);
        assert_eq!(inner_product(chi.class_function(), &sw).unwrap(), rat_int(1));
    }

    #[test]
    fn inner_product_values() {
        let rg = tame(3);
        let triv = Character::trivial(rg.clone());
        assert_eq!(
            inner_product(triv.class_function(), triv.class_function()).unwrap(),
            rat_int(1)
        );
        for chi in &degree_one_characters(&rg).unwrap() {
            assert_eq!(
                inner_product(chi.class_function(), chi.class_function()).unwrap(),
                rat_int(1)
            );
        }
        let reg = ClassFunction::regular(rg.clone());
        assert_eq!(inner_product(&reg, triv.class_function()).unwrap(), rat_int(1));
    }

    #[test]
    fn tensor_with_trivial_is_identity() {
        let rg = q2_zeta8();
        let chi = char_mod8_with_kernel(&rg, &[1, 7]);
        let triv = Character::trivial(rg.clone());
        let t = chi.tensor(&triv).unwrap();
        for g in 0..4 {
            assert_eq!(
                t.value_at(g).embed(chi.class_function().order()).unwrap(),
                *chi.value_at(g)
            );
        }
    }

    #[test]
    fn tensor_with_inverse_character_is_trivial() {
        let rg = q2_zeta8();
        let chi = char_mod8_with_kernel(&rg, &[1, 3]);
        // order-2 values, so chi is its own inverse
        let t = chi.tensor(&chi).unwrap();
        assert_eq!(t.degree(), 1);
        assert_eq!(t.kernel().unwrap().order(), 4);
    }

    #[test]
    fn tensor_of_mod4_and_mod8_characters() {
        // Pointwise product: kernels {1,5} x {1,7} -> {1,3}.
        let rg = q2_zeta8();
        let a = char_mod8_with_kernel(&rg, &[1, 5]);
        let b = char_mod8_with_kernel(&rg, &[1, 7]);
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.degree(), 1);
        let ker: Vec<u64> = t
            .kernel()
            .unwrap()
            .elements()
            .iter()
            .map(|&i| units_mod(8)[i])
            .collect();
        assert_eq!(ker, alloc::vec![1, 3]);
    }

    #[test]
    fn depth_of_unramified_character_is_negative_infinity() {
        let chi = Character::trivial(q2_zeta8());
        assert_eq!(chi.depth().unwrap(), None);
    }

    #[test]
    fn depth_of_tame_faithful_character_is_zero() {
        let rg = tame(3);
        let chi = &degree_one_characters(&rg).unwrap()[1];
        assert_eq!(chi.depth().unwrap(), Some(rat_int(0)));
        assert_eq!(chi.artin_conductor_sum().unwrap(), rat_int(1));
    }

    #[test]
    fn depth_of_primitive_mod8_character_is_two() {
        // Upper breaks are {1, 2}; a primitive character is nontrivial on
        // G^2 = {1, 5}, so m = 2 and a = m + 1 = 3.
        let rg = q2_zeta8();
        let chi = char_mod8_with_kernel(&rg, &[1, 7]);
        assert_eq!(chi.depth().unwrap(), Some(rat_int(2)));
        assert_eq!(chi.artin_conductor_sum().unwrap(), rat_int(3));
        // The mod-4 character stops earlier: depth 1, conductor 2.
        let chi = char_mod8_with_kernel(&rg, &[1, 5]);
        assert_eq!(chi.depth().unwrap(), Some(rat_int(1)));
    }

    #[test]
    fn s3_standard_character_satisfies_the_depth_formula() {
        // Tame chain G_0 = A3, G_1 = 1 on S3; the standard 2-dimensional
        // character has a = 2, depth 0, and 2 * (0 + 1) = 2.
        let g = symmetric_3();
        let a3 = g.subgroup_generated(&[4]).unwrap();
        let rg = Arc::new(RamifiedGroup::new(g, alloc::vec![a3], true).unwrap());
        // classes: [e], transpositions, 3-cycles
        let values = alloc::vec![
            Cyclotomic::from_rational(1, rat_int(2)),
            Cyclotomic::zero(1),
            Cyclotomic::from_rational(1, rat_int(-1)),
        ];
        let chi =
            Character::new(ClassFunction::from_class_values(rg.clone(), values).unwrap()).unwrap();
        assert!(chi.is_irreducible().unwrap());
        assert_eq!(chi.artin_conductor_sum().unwrap(), rat_int(2));
        assert_eq!(chi.depth().unwrap(), Some(rat_int(0)));
        let report = chi.check_irreducible_depth_formula().unwrap();
        assert!(report.irreducible);
        assert_eq!(report.conductor, rat_int(2));
    }

    #[test]
    fn twisting_by_a_deeper_character() {
        // rho factors through the mod-4 quotient (depth 1), chi is
        // primitive mod 8 (depth 2): a(rho x chi) = 3 = 1 * 3.
        let rg = q2_zeta8();
        let rho = char_mod8_with_kernel(&rg, &[1, 5]);
        let chi = char_mod8_with_kernel(&rg, &[1, 7]);
        let report = check_twisting(&rho, &chi).unwrap();
        assert!(report.agree);
        assert_eq!(report.twisted_conductor, rat_int(3));
        assert_eq!(report.expected, rat_int(3));
    }

    #[test]
    fn twisting_trivial_rho_by_anything_ramified() {
        let rg = q2_zeta8();
        let rho = Character::trivial(rg.clone());
        let chi = char_mod8_with_kernel(&rg, &[1, 7]);
        let report = check_twisting(&rho, &chi).unwrap();
        assert!(report.agree);
        assert_eq!(report.twisted_conductor, rat_int(3));
    }

    #[test]
    fn twisting_precondition_is_enforced() {
        let rg = q2_zeta8();
        let rho = char_mod8_with_kernel(&rg, &[1, 7]);
        let chi = char_mod8_with_kernel(&rg, &[1, 5]);
        assert!(matches!(
            check_twisting(&rho, &chi),
            Err(CharError::NotMoreDeeplyRamified { .. })
        ));
        // Equal depths violate it too.
        let other = char_mod8_with_kernel(&rg, &[1, 3]);
        assert!(matches!(
            check_twisting(&rho, &other),
            Err(CharError::NotMoreDeeplyRamified { .. })
        ));
    }

    #[test]
    fn quotient_stability_of_the_conductor() {
        // Conductor computed on G equals the conductor computed on
        // G / ker(chi) with the quotient filtration.
        let rg = q2_zeta8();
        let chi = char_mod8_with_kernel(&rg, &[1, 5]);
        let a_on_g = chi.artin_conductor_sum().unwrap();
        let (qrg, proj) = rg.quotient_filtration(&chi.kernel().unwrap()).unwrap();
        let pushed = chi.factor_through(Arc::new(qrg), &proj).unwrap();
        assert_eq!(pushed.artin_conductor_sum().unwrap(), a_on_g);
    }

    #[test]
    fn degree_one_characters_count_and_order() {
        let rg = q2_zeta8();
        let chars = degree_one_characters(&rg).unwrap();
        assert_eq!(chars.len(), 4);
        // Deterministic: the first is trivial (kernel is everything).
        assert_eq!(chars[0].degree(), 1);
        assert_eq!(chars[0].kernel().unwrap().order(), 4);
        // S3 has two degree-1 characters (through the abelianization).
        let g = symmetric_3();
        let a3 = g.subgroup_generated(&[4]).unwrap();
        let s3 = Arc::new(RamifiedGroup::new(g, alloc::vec![a3], true).unwrap());
        assert_eq!(degree_one_characters(&s3).unwrap().len(), 2);
    }

    #[test]
    fn induced_character_from_a3_is_the_standard_character() {
        // Inducing a faithful degree-1 character of A3 up to S3 yields the
        // 2-dimensional irreducible character.
        let g = symmetric_3();
        let a3 = g.subgroup_generated(&[4]).unwrap();
        let rg = Arc::new(RamifiedGroup::new(g, alloc::vec![a3.clone()], true).unwrap());
        let omega = Cyclotomic::root_of_unity(3, 1);
        // elements of A3 ascending: e, (012), (021) = indices 0, 4, 5
        let values = alloc::vec![Cyclotomic::one(3), omega.clone(), omega.mul(&omega).unwrap()];
        let ind = induced_character(&rg, &a3, &values).unwrap();
        assert_eq!(ind.degree(), 2);
        assert!(ind.is_irreducible().unwrap());
        assert_eq!(ind.value_at(1).as_rational().unwrap(), rat_int(0));
        assert_eq!(ind.value_at(4).as_rational().unwrap(), rat_int(-1));
    }

    #[test]
    fn integrality_is_enforced_on_realizable_instances() {
        // An abstract non-integral chain flagged realizable trips the
        // integrality assertion: orders (4, 2) give a = 1 + 1/2 for a
        // primitive character.
        let g = FiniteGroup::unit_group_mod(8).unwrap();
        let five = units_mod(8).iter().position(|&u| u == 5).unwrap();
        let mid = g.subgroup_generated(&[five]).unwrap();
        let full = g.full_subgroup();
        let bad = Arc::new(RamifiedGroup::new(g, alloc::vec![full, mid], true).unwrap());
        let chi = degree_one_characters(&bad)
            .unwrap()
            .into_iter()
            .find(|c| {
                let ker: Vec<u64> = c
                    .kernel()
                    .unwrap()
                    .elements()
                    .iter()
                    .map(|&i| units_mod(8)[i])
                    .collect();
                ker == alloc::vec![1, 7]
            })
            .unwrap();
        assert!(matches!(
            chi.artin_conductor_sum(),
            Err(CharError::IntegralityViolation { .. })
        ));
    }

    #[test]
    fn non_character_values_are_rejected() {
        // Degree 0 is not a character.
        let rg = tame(2);
        let cf = ClassFunction::from_class_values(
            rg,
            alloc::vec![Cyclotomic::zero(1), Cyclotomic::one(1)],
        )
        .unwrap();
        assert!(matches!(
            Character::new(cf),
            Err(CharError::DegreeNotPositiveInteger { .. })
        ));
        // A fixed-space average outside [0, degree] is rejected.
        let rg = tame(2);
        let cf = ClassFunction::from_class_values(
            rg.clone(),
            alloc::vec![Cyclotomic::one(1), Cyclotomic::from_rational(1, rat(3, 1))],
        )
        .unwrap();
        let fake = Character::new(cf).unwrap();
        assert!(matches!(
            fake.fixed_dim(&rg.group().full_subgroup()),
            Err(CharError::FixedSpaceOutOfRange { .. })
        ));
    }
}
