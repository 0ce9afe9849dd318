//! Weil-Deligne representations in exact arithmetic: a matrix action of a
//! finite inertia quotient, a commuting nilpotent monodromy operator `N`,
//! and an optional Frobenius. The conductor is computed three independent
//! ways and the results are compared exactly:
//!
//! * `serre_conductor` — `eps + delta(ss)`, with `eps` from the kernel of
//!   `N` inside the inertia invariants and `delta` from the trace
//!   character of the finite part;
//! * `deligne_conductor` — `a(rho) + dim V^I - dim V_N^I`;
//! * `integral_conductor` — the upper-numbering integral, evaluated
//!   piecewise with matrix-rank integrands.
//!
//! The three always agree; `theorem_check` asserts it per instance.
//!
//! The per-element scaling map of inertia is never materialized: the
//! conductor formulas only consume `ker N` and the finite-quotient
//! filtration, so the sampling parameter of [`WeilDeligneRep::ell_adic_sample`]
//! is a free rational used by property tests alone.
//!
//! `dim V_ss^{I_F}` is computed as the character average of the trace of
//! the finite part over inertia. This is justified because the trace of a
//! matrix equals the trace of its semisimple part, and the finite part is
//! the semisimple part of the full action on inertia (the monodromy
//! commutes with it).

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::characters::{CharError, Character, ClassFunction};
use crate::exactnum::{lcm_order, rat_int, Rational};
use crate::linalg::{is_nilpotent, LinAlgError, Matrix, Subspace};
use crate::ramification::RamifiedGroup;

pub use crate::linalg::exp_nilpotent;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WdError {
    #[error("expected one matrix per group element ({expected}), got {got}")]
    WrongMatrixCount { expected: usize, got: usize },
    #[error("matrix for element {element} is {rows}x{cols}, expected {dim}x{dim}")]
    WrongMatrixShape { element: usize, rows: usize, cols: usize, dim: usize },
    #[error("matrix at the identity is not the identity matrix")]
    NotIdentityAtIdentity,
    #[error("matrices are not a homomorphism at the pair ({g}, {h})")]
    NotHomomorphism { g: usize, h: usize },
    #[error("monodromy operator is not nilpotent")]
    NotNilpotent,
    #[error("monodromy operator does not commute with the matrix of element {element}")]
    MonodromyNotEquivariant { element: usize },
    #[error("q = {q} is not a prime power")]
    QNotPrimePower { q: u64 },
    #[error("theta is not an automorphism of the group")]
    ThetaNotAutomorphism,
    #[error("Frobenius matrix is not invertible")]
    FrobeniusNotInvertible,
    #[error("Frobenius conjugation fails on element {element}: F rho(g) != rho(theta g) F")]
    FrobeniusConjugationFails { element: usize },
    #[error("Frobenius does not scale the monodromy operator by 1/q")]
    FrobeniusScalingFails,
    #[error("operation requires Frobenius data, which this instance does not carry")]
    MissingFrobenius,
    #[error("element index {element} out of range for group of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("twisting precondition violated: chi (depth {chi:?}) is not more deeply ramified than the representation (depth {wd:?})")]
    NotMoreDeeplyRamified { wd: Option<Rational>, chi: Option<Rational> },
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Lin(#[from] LinAlgError),
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut m = q;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            return m == 1;
        }
        p += 1;
    }
    true
}

/// A matrix action of the finite inertia quotient carried by a ramified
/// group: one invertible matrix per group element over a common cyclotomic
/// field, verified to be a homomorphism on all pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixRep {
    rg: Arc<RamifiedGroup>,
    dim: usize,
    mats: Vec<Matrix>,
}

impl MatrixRep {
    pub fn new(rg: Arc<RamifiedGroup>, mats: Vec<Matrix>) -> Result<Self, WdError> {
        let group = rg.group();
        if mats.len() != group.size() {
            return Err(WdError::WrongMatrixCount { expected: group.size(), got: mats.len() });
        }
        let dim = mats[0].rows();
        let order = mats.iter().fold(1, |o, m| lcm_order(o, m.order()));
        let mut promoted = Vec::with_capacity(mats.len());
        for (element, m) in mats.into_iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(WdError::WrongMatrixShape {
                    element,
                    rows: m.rows(),
                    cols: m.cols(),
                    dim,
                });
            }
            promoted.push(m.promote(order)?);
        }
        if !promoted[group.identity()].is_identity() {
            return Err(WdError::NotIdentityAtIdentity);
        }
        for g in 0..group.size() {
            for h in 0..group.size() {
                if promoted[g].mul(&promoted[h])? != promoted[group.mul(g, h)] {
                    return Err(WdError::NotHomomorphism { g, h });
                }
            }
        }
        Ok(MatrixRep { rg, dim, mats: promoted })
    }

    /// Scalar matrices `chi(g) * 1` of the given dimension; with `dim = 1`
    /// this is the matrix form of a degree-1 character.
    pub fn from_degree_one_character(chi: &Character, dim: usize) -> Result<Self, WdError> {
        if chi.degree() != 1 {
            return Err(CharError::NotDegreeOne { degree: chi.degree() }.into());
        }
        let rg = chi.rg().clone();
        let mats = (0..rg.group().size())
            .map(|g| Matrix::identity(dim, chi.value_at(g).order()).scale(chi.value_at(g)))
            .collect::<Result<_, _>>()?;
        MatrixRep::new(rg, mats)
    }

    pub fn rg(&self) -> &Arc<RamifiedGroup> {
        &self.rg
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u64 {
        self.mats[0].order()
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.mats[g]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    /// The trace character `g -> tr rho(g)`.
    pub fn trace_character(&self) -> Result<Character, WdError> {
        let values = self.mats.iter().map(Matrix::trace).collect();
        Ok(Character::new(ClassFunction::from_element_values(self.rg.clone(), values)?)?)
    }

    /// `V^H`: the joint kernel of `rho(h) - 1` over `h in H`, by exact
    /// Gaussian elimination. Its dimension always equals the character
    /// average [`Character::fixed_dim`] of the trace character.
    pub fn invariant_subspace(&self, h: &crate::groups::Subgroup) -> Result<Subspace, WdError> {
        let id = Matrix::identity(self.dim, self.order());
        let blocks: Vec<Matrix> = h
            .elements()
            .iter()
            .map(|&g| self.mats[g].sub(&id))
            .collect::<Result<_, _>>()?;
        let refs: Vec<&Matrix> = blocks.iter().collect();
        Ok(Matrix::stack(&refs)?.kernel())
    }

    /// Conjugate every matrix by `p` (a basis change); used to check basis
    /// independence of the conductors.
    pub fn conjugate(&self, p: &Matrix) -> Result<MatrixRep, WdError> {
        let p_inv = p.inverse()?;
        let mats = self
            .mats
            .iter()
            .map(|m| p.mul(m)?.mul(&p_inv))
            .collect::<Result<_, _>>()?;
        MatrixRep::new(self.rg.clone(), mats)
    }
}

/// Optional Frobenius data: an invertible matrix together with the
/// automorphism (as an index permutation) it induces on the inertia image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frobenius {
    pub matrix: Matrix,
    pub theta: Vec<usize>,
}

/// A Weil-Deligne representation: the finite inertia action, a nilpotent
/// monodromy operator commuting with it, the residue cardinality `q`, and
/// optional Frobenius data satisfying `F rho(g) F^-1 = rho(theta g)` and
/// `F N F^-1 = q^-1 N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilDeligneRep {
    rep: MatrixRep,
    monodromy: Matrix,
    q: u64,
    frobenius: Option<Frobenius>,
}

impl WeilDeligneRep {
    pub fn new(
        rep: MatrixRep,
        monodromy: Matrix,
        q: u64,
        frobenius: Option<Frobenius>,
    ) -> Result<Self, WdError> {
        if !is_prime_power(q) {
            return Err(WdError::QNotPrimePower { q });
        }
        let dim = rep.dim();
        if monodromy.rows() != dim || monodromy.cols() != dim {
            return Err(WdError::WrongMatrixShape {
                element: usize::MAX,
                rows: monodromy.rows(),
                cols: monodromy.cols(),
                dim,
            });
        }
        let order = lcm_order(rep.order(), monodromy.order());
        let rep = MatrixRep {
            rg: rep.rg,
            dim: rep.dim,
            mats: rep
                .mats
                .into_iter()
                .map(|m| m.promote(order))
                .collect::<Result<_, _>>()?,
        };
        let monodromy = monodromy.promote(order)?;
        if !is_nilpotent(&monodromy) {
            return Err(WdError::NotNilpotent);
        }
        for (element, m) in rep.mats.iter().enumerate() {
            if m.mul(&monodromy)? != monodromy.mul(m)? {
                return Err(WdError::MonodromyNotEquivariant { element });
            }
        }
        let frobenius = match frobenius {
            None => None,
            Some(f) => {
                let group = rep.rg.group();
                let fmat = f.matrix.promote(lcm_order(order, f.matrix.order()))?;
                if fmat.rows() != dim || fmat.cols() != dim {
                    return Err(WdError::WrongMatrixShape {
                        element: usize::MAX,
                        rows: fmat.rows(),
                        cols: fmat.cols(),
                        dim,
                    });
                }
                if fmat.inverse().is_err() {
                    return Err(WdError::FrobeniusNotInvertible);
                }
                let theta = f.theta;
                let is_permutation = theta.len() == group.size() && {
                    let mut seen = alloc::vec![false; group.size()];
                    theta
                        .iter()
                        .all(|&t| t < group.size() && !core::mem::replace(&mut seen[t], true))
                };
                let is_automorphism = is_permutation
                    && theta[group.identity()] == group.identity()
                    && (0..group.size()).all(|g| {
                        (0..group.size())
                            .all(|h| theta[group.mul(g, h)] == group.mul(theta[g], theta[h]))
                    });
                if !is_automorphism {
                    return Err(WdError::ThetaNotAutomorphism);
                }
                for g in 0..group.size() {
                    if fmat.mul(rep.matrix(g))? != rep.matrix(theta[g]).mul(&fmat)? {
                        return Err(WdError::FrobeniusConjugationFails { element: g });
                    }
                }
                let scaled = monodromy.scale_rational(&rat_int(q as i64).recip());
                if fmat.mul(&monodromy)? != scaled.mul(&fmat)? {
                    return Err(WdError::FrobeniusScalingFails);
                }
                Some(Frobenius { matrix: fmat, theta })
            }
        };
        Ok(WeilDeligneRep { rep, monodromy, q, frobenius })
    }

    pub fn rep(&self) -> &MatrixRep {
        &self.rep
    }

    pub fn rg(&self) -> &Arc<RamifiedGroup> {
        &self.rep.rg
    }

    pub fn dim(&self) -> usize {
        self.rep.dim
    }

    pub fn monodromy(&self) -> &Matrix {
        &self.monodromy
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn frobenius(&self) -> Option<&Frobenius> {
        self.frobenius.as_ref()
    }

    /// `V_N = ker N`.
    pub fn kernel_of_monodromy(&self) -> Subspace {
        self.monodromy.kernel()
    }

    /// `V^{I_F}`: invariants of the finite part under `G_0`.
    pub fn inertia_invariants(&self) -> Result<Subspace, WdError> {
        self.rep.invariant_subspace(self.rep.rg.inertia())
    }

    /// `V_N^{I_F} = ker N ∩ V^{I_F}`, computed as one joint kernel.
    pub fn monodromy_fixed_inertia_invariants(&self) -> Result<Subspace, WdError> {
        let id = Matrix::identity(self.rep.dim, self.rep.order());
        let mut blocks: Vec<Matrix> = self
            .rep
            .rg
            .inertia()
            .elements()
            .iter()
            .map(|&g| self.rep.matrix(g).sub(&id))
            .collect::<Result<_, _>>()?;
        blocks.push(self.monodromy.clone());
        let refs: Vec<&Matrix> = blocks.iter().collect();
        Ok(Matrix::stack(&refs)?.kernel())
    }

    /// Deligne's conductor `a(rho, N) = a(rho) + dim V^{I_F} - dim V_N^{I_F}`.
    pub fn deligne_conductor(&self) -> Result<Rational, WdError> {
        let a_rho = self.rep.trace_character()?.artin_conductor_sum()?;
        let v_inertia = self.inertia_invariants()?.dim() as i64;
        let v_n_inertia = self.monodromy_fixed_inertia_invariants()?.dim() as i64;
        Ok(a_rho + rat_int(v_inertia) - rat_int(v_n_inertia))
    }

    /// Serre's conductor `eps + delta(ss)`: the tame part is the
    /// codimension of `V_N^{I_F}` (which equals the invariants of the full
    /// action on inertia), and the wild part is the Swan conductor of the
    /// trace character of the finite part (the semisimplification agrees
    /// with it on wild inertia).
    pub fn serre_conductor(&self) -> Result<Rational, WdError> {
        let eps = self.dim() as i64 - self.monodromy_fixed_inertia_invariants()?.dim() as i64;
        let delta = self.rep.trace_character()?.swan_part()?;
        Ok(rat_int(eps) + delta)
    }

    /// The conductor as the upper-numbering integral: on `(-1, 0]` the
    /// integrand is `codim V_N^{I_F}`, and past 0 it is the codimension of
    /// the invariants of the finite part under `G^s`, summed exactly over
    /// the upper-break segments.
    pub fn integral_conductor(&self) -> Result<Rational, WdError> {
        let dim = self.dim() as i64;
        let mut total = rat_int(dim - self.monodromy_fixed_inertia_invariants()?.dim() as i64);
        let rg = &self.rep.rg;
        let mut prev = Rational::zero();
        for b in rg.upper_breaks() {
            if b <= Rational::zero() {
                continue;
            }
            let h = rg.upper_group(&b).map_err(CharError::from)?;
            let codim = dim - self.rep.invariant_subspace(&h)?.dim() as i64;
            total += rat_int(codim) * (&b - &prev);
            prev = b;
        }
        Ok(total)
    }

    /// Compute all three conductors independently and compare them, also
    /// cross-checking the matrix-rank invariant dimensions against the
    /// character averages along the whole chain.
    pub fn theorem_check(&self) -> Result<TheoremReport, WdError> {
        let integral = self.integral_conductor()?;
        let serre = self.serre_conductor()?;
        let deligne = self.deligne_conductor()?;
        let trace = self.rep.trace_character()?;
        let mut dims_consistent = true;
        for h in self.rep.rg.chain() {
            let by_matrix = self.rep.invariant_subspace(h)?.dim() as u64;
            let by_character = trace.fixed_dim(h)?;
            if by_matrix != by_character {
                dims_consistent = false;
            }
        }
        let agree = integral == serre && serre == deligne;
        Ok(TheoremReport { integral, serre, deligne, agree, dims_consistent })
    }

    /// Check the corrected Tate 4.2.4 identity
    /// `a = dim V_ss^{I_F} - dim V_N^{I_F} + a(ss)` exactly, and also
    /// evaluate the uncorrected variant (with `dim V` in place of
    /// `dim V_N^{I_F}`), which fails whenever the fixed space is proper.
    pub fn tate_424_check(&self) -> Result<TateReport, WdError> {
        let trace = self.rep.trace_character()?;
        let conductor = self.serre_conductor()?;
        let dim_ss_inertia = trace.fixed_dim(self.rep.rg.inertia())?;
        let dim_ell_inertia = self.monodromy_fixed_inertia_invariants()?.dim() as u64;
        let a_ss = trace.artin_conductor_sum()?;
        let corrected = rat_int(dim_ss_inertia as i64) - rat_int(dim_ell_inertia as i64) + &a_ss;
        let uncorrected = rat_int(dim_ss_inertia as i64) - rat_int(self.dim() as i64) + &a_ss;
        Ok(TateReport {
            corrected_holds: conductor == corrected,
            uncorrected_holds: conductor == uncorrected,
            conductor,
            dim_ss_inertia,
            dim_ell_inertia,
            a_ss,
            corrected,
            uncorrected,
        })
    }

    /// A sample value `F^m rho(sigma) exp(t N)` of the associated ell-adic
    /// representation; `t` is a free rational parameter standing in for the
    /// scaling map of inertia. Property-test fuel, not a conductor input.
    pub fn ell_adic_sample(&self, sigma: usize, m: i64, t: &Rational) -> Result<Matrix, WdError> {
        let group = self.rep.rg.group();
        if sigma >= group.size() {
            return Err(WdError::ElementOutOfRange { element: sigma, size: group.size() });
        }
        let frob_power = if m == 0 {
            Matrix::identity(self.rep.dim, self.rep.order())
        } else {
            let f = self.frobenius.as_ref().ok_or(WdError::MissingFrobenius)?;
            if m > 0 {
                f.matrix.pow(m as u32)?
            } else {
                f.matrix.inverse()?.pow(m.unsigned_abs() as u32)?
            }
        };
        let exp = exp_nilpotent(&self.monodromy, t)?;
        Ok(frob_power.mul(self.rep.matrix(sigma))?.mul(&exp)?)
    }

    /// Depth of the full action: the largest `s` at which the ell-adic
    /// action on `G^s` is nontrivial. A nonzero monodromy operator forces
    /// nontriviality throughout `(-1, 0]`, hence depth at least 0.
    pub fn depth(&self) -> Result<Option<Rational>, WdError> {
        let finite_depth = self.rep.trace_character()?.depth()?;
        if self.monodromy.is_zero() {
            Ok(finite_depth)
        } else {
            Ok(Some(finite_depth.unwrap_or_else(Rational::zero)))
        }
    }

    /// Twist by a degree-1 character on the same ramified group: matrices
    /// are scaled pointwise, the monodromy operator is unchanged.
    /// Frobenius data does not survive a twist (the character only lives
    /// on the inertia quotient), and the conductors do not consult it.
    pub fn twist(&self, chi: &Character) -> Result<WeilDeligneRep, WdError> {
        if chi.degree() != 1 {
            return Err(CharError::NotDegreeOne { degree: chi.degree() }.into());
        }
        if !(Arc::ptr_eq(&self.rep.rg, chi.rg()) || self.rep.rg == *chi.rg()) {
            return Err(CharError::DomainMismatch.into());
        }
        let mats = (0..self.rep.rg.group().size())
            .map(|g| self.rep.matrix(g).scale(chi.value_at(g)))
            .collect::<Result<Vec<_>, _>>()?;
        let rep = MatrixRep::new(self.rep.rg.clone(), mats)?;
        WeilDeligneRep::new(rep, self.monodromy.clone(), self.q, None)
    }

    /// Verify the twisting law `a(rho_ell tensor chi) = dim * a(chi)` via
    /// the integral conductor, for `chi` more deeply ramified than the
    /// representation. The depth precondition is an error when violated.
    pub fn check_twisting(&self, chi: &Character) -> Result<WdTwistReport, WdError> {
        if chi.degree() != 1 {
            return Err(CharError::NotDegreeOne { degree: chi.degree() }.into());
        }
        let depth_wd = self.depth()?;
        let depth_chi = chi.depth()?;
        if depth_chi <= depth_wd {
            return Err(WdError::NotMoreDeeplyRamified { wd: depth_wd, chi: depth_chi });
        }
        let twisted = self.twist(chi)?;
        let twisted_conductor = twisted.integral_conductor()?;
        let expected = rat_int(self.dim() as i64) * chi.artin_conductor_sum()?;
        let agree = twisted_conductor == expected;
        Ok(WdTwistReport { depth_wd, depth_chi, twisted_conductor, expected, agree })
    }

    /// Simultaneous basis change of the finite part and the monodromy
    /// operator; the conductors are invariant under this.
    pub fn conjugate(&self, p: &Matrix) -> Result<WeilDeligneRep, WdError> {
        let rep = self.rep.conjugate(p)?;
        let n = p.mul(&self.monodromy)?.mul(&p.inverse()?)?;
        let frobenius = match &self.frobenius {
            None => None,
            Some(f) => Some(Frobenius {
                matrix: p.mul(&f.matrix)?.mul(&p.inverse()?)?,
                theta: f.theta.clone(),
            }),
        };
        WeilDeligneRep::new(rep, n, self.q, frobenius)
    }
}

/// Result of [`WeilDeligneRep::theorem_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub integral: Rational,
    pub serre: Rational,
    pub deligne: Rational,
    pub agree: bool,
    pub dims_consistent: bool,
}

/// Result of [`WeilDeligneRep::tate_424_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateReport {
    pub conductor: Rational,
    pub dim_ss_inertia: u64,
    pub dim_ell_inertia: u64,
    pub a_ss: Rational,
    pub corrected: Rational,
    pub corrected_holds: bool,
    pub uncorrected: Rational,
    pub uncorrected_holds: bool,
}

/// Result of [`WeilDeligneRep::check_twisting`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WdTwistReport {
    pub depth_wd: Option<Rational>,
    pub depth_chi: Option<Rational>,
    pub twisted_conductor: Rational,
    pub expected: Rational,
    pub agree: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::degree_one_characters;
    use crate::exactnum::{rat, rat_int};
    use crate::groups::{units_mod, FiniteGroup};
    use crate::ramification::RamifiedGroup;

    fn rmat(rows: usize, cols: usize, v: &[i64]) -> Matrix {
        Matrix::from_rationals(rows, cols, v.iter().map(|&x| rat_int(x)).collect()).unwrap()
    }

    fn trivial_rg() -> Arc<RamifiedGroup> {
        let g = FiniteGroup::cyclic(1);
        Arc::new(RamifiedGroup::new(g.clone(), alloc::vec![g.trivial_subgroup()], true).unwrap())
    }

    fn q2_zeta8() -> Arc<RamifiedGroup> {
        let g = FiniteGroup::unit_group_mod(8).unwrap();
        let five = units_mod(8).iter().position(|&u| u == 5).unwrap();
        let full = g.full_subgroup();
        let mid = g.subgroup_generated(&[five]).unwrap();
        Arc::new(
            RamifiedGroup::new(g, alloc::vec![full.clone(), full, mid.clone(), mid], true).unwrap(),
        )
    }

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

    /// The split-multiplicative shape: trivial 2-dimensional inertia
    /// action, N = [[0,1],[0,0]], F = diag(1, q).
    fn split_multiplicative(q: u64) -> WeilDeligneRep {
        let rg = trivial_rg();
        let rep = MatrixRep::new(rg, alloc::vec![Matrix::identity(2, 1)]).unwrap();
        let n = rmat(2, 2, &[0, 1, 0, 0]);
        let f = rmat(2, 2, &[1, 0, 0, q as i64]);
        WeilDeligneRep::new(rep, n, q, Some(Frobenius { matrix: f, theta: alloc::vec![0] }))
            .unwrap()
    }

    /// Trivial inertia matrices of dimension 2 over the mod-8 chain with
    /// the same N: the twisting fixture.
    fn split_multiplicative_on_mod8() -> WeilDeligneRep {
        let rg = q2_zeta8();
        let mats = alloc::vec![Matrix::identity(2, 1); 4];
        let rep = MatrixRep::new(rg, mats).unwrap();
        WeilDeligneRep::new(rep, rmat(2, 2, &[0, 1, 0, 0]), 2, None).unwrap()
    }

    /// A degree-1 character of the mod-8 chain as a 1x1 representation
    /// with N = 0.
    fn one_dimensional_wd(kernel: &[u64]) -> WeilDeligneRep {
        let rg = q2_zeta8();
        let chi = char_mod8_with_kernel(&rg, kernel);
        let rep = MatrixRep::from_degree_one_character(&chi, 1).unwrap();
        let n = Matrix::zero(1, 1, 1);
        WeilDeligneRep::new(rep, n, 2, None).unwrap()
    }

    #[test]
    fn invariant_subspace_under_trivial_subgroup_is_everything() {
        let wd = split_multiplicative_on_mod8();
        let triv = wd.rg().group().trivial_subgroup();
        assert_eq!(wd.rep().invariant_subspace(&triv).unwrap().dim(), 2);
    }

    #[test]
    fn invariant_subspace_of_regular_rep_of_c2() {
        // The regular representation of C2 acts by the swap matrix; the
        // invariants solve (rho(s) - 1)v = 0, spanned by (1, 1).
        let g = FiniteGroup::cyclic(2);
        let rg =
            Arc::new(RamifiedGroup::new(g.clone(), alloc::vec![g.full_subgroup()], true).unwrap());
        let mats = alloc::vec![Matrix::identity(2, 1), rmat(2, 2, &[0, 1, 1, 0])];
        let rep = MatrixRep::new(rg.clone(), mats).unwrap();
        let inv = rep.invariant_subspace(&rg.group().full_subgroup()).unwrap();
        assert_eq!(inv.dim(), 1);
        let b = &inv.basis()[0];
        assert_eq!(b[0], b[1]);
    }

    #[test]
    fn invariant_subspace_of_faithful_degree_one_rep_is_zero() {
        let g = FiniteGroup::cyclic(2);
        let rg =
            Arc::new(RamifiedGroup::new(g.clone(), alloc::vec![g.full_subgroup()], true).unwrap());
        let mats = alloc::vec![Matrix::identity(1, 1), rmat(1, 1, &[-1])];
        let rep = MatrixRep::new(rg.clone(), mats).unwrap();
        assert_eq!(rep.invariant_subspace(&rg.group().full_subgroup()).unwrap().dim(), 0);
    }

    #[test]
    fn invertible_monodromy_is_rejected_at_construction() {
        let rg = trivial_rg();
        let rep = MatrixRep::new(rg, alloc::vec![Matrix::identity(2, 1)]).unwrap();
        let invertible = rmat(2, 2, &[0, 1, 1, 0]);
        assert!(matches!(
            WeilDeligneRep::new(rep, invertible, 2, None),
            Err(WdError::NotNilpotent)
        ));
    }

    #[test]
    fn non_commuting_monodromy_is_rejected() {
        // A diagonal action with distinct characters does not commute with
        // an off-diagonal nilpotent.
        let g = FiniteGroup::cyclic(2);
        let rg =
            Arc::new(RamifiedGroup::new(g.clone(), alloc::vec![g.full_subgroup()], true).unwrap());
        let mats = alloc::vec![Matrix::identity(2, 1), rmat(2, 2, &[1, 0, 0, -1])];
        let rep = MatrixRep::new(rg, mats).unwrap();
        assert!(matches!(
            WeilDeligneRep::new(rep, rmat(2, 2, &[0, 1, 0, 0]), 2, None),
            Err(WdError::MonodromyNotEquivariant { .. })
        ));
    }

    #[test]
    fn deligne_conductor_of_split_multiplicative_is_one() {
        // a(rho) + dim V^I - dim V_N^I = 0 + 2 - 1 = 1.
        let wd = split_multiplicative(2);
        assert_eq!(wd.deligne_conductor().unwrap(), rat_int(1));
        assert_eq!(wd.inertia_invariants().unwrap().dim(), 2);
        assert_eq!(wd.monodromy_fixed_inertia_invariants().unwrap().dim(), 1);
    }

    #[test]
    fn serre_conductor_of_split_multiplicative_is_one() {
        // eps = 1 (ker N meets the invariants in one dimension), delta = 0.
        let wd = split_multiplicative(2);
        assert_eq!(wd.serre_conductor().unwrap(), rat_int(1));
    }

    #[test]
    fn integral_conductor_of_split_multiplicative_is_one() {
        // Integrand 1 on (-1, 0], zero afterwards.
        let wd = split_multiplicative(2);
        assert_eq!(wd.integral_conductor().unwrap(), rat_int(1));
    }

    #[test]
    fn zero_monodromy_reduces_to_the_character_conductor() {
        let wd = one_dimensional_wd(&[1, 7]);
        assert_eq!(wd.deligne_conductor().unwrap(), rat_int(3));
        assert_eq!(wd.serre_conductor().unwrap(), rat_int(3));
        assert_eq!(wd.integral_conductor().unwrap(), rat_int(3));
        let unram = one_dimensional_wd(&[1, 3, 5, 7]);
        assert_eq!(unram.deligne_conductor().unwrap(), rat_int(0));
    }

    #[test]
    fn theorem_check_on_the_fixtures() {
        for wd in [
            split_multiplicative(2),
            split_multiplicative(3),
            split_multiplicative_on_mod8(),
            one_dimensional_wd(&[1, 7]),
            one_dimensional_wd(&[1, 5]),
        ] {
            let report = wd.theorem_check().unwrap();
            assert!(report.agree, "three conductors differ: {report:?}");
            assert!(report.dims_consistent);
        }
        let report = split_multiplicative(2).theorem_check().unwrap();
        assert_eq!(report.integral, rat_int(1));
        assert_eq!(report.serre, rat_int(1));
        assert_eq!(report.deligne, rat_int(1));
    }

    #[test]
    fn tate_424_corrected_holds_and_uncorrected_fails_on_split_multiplicative() {
        // Corrected: 2 - 1 + 0 = 1. Uncorrected drops the exponent and
        // reads 2 - 2 + 0 = 0, which is wrong.
        let wd = split_multiplicative(2);
        let report = wd.tate_424_check().unwrap();
        assert!(report.corrected_holds);
        assert_eq!(report.corrected, rat_int(1));
        assert_eq!(report.dim_ss_inertia, 2);
        assert_eq!(report.dim_ell_inertia, 1);
        assert_eq!(report.a_ss, rat_int(0));
        assert!(!report.uncorrected_holds);
        assert_eq!(report.uncorrected, rat_int(0));
    }

    #[test]
    fn tate_424_with_zero_monodromy() {
        // With N = 0 the corrected identity reduces to a = a; the
        // uncorrected one still fails when the fixed space is proper.
        let wd = one_dimensional_wd(&[1, 5]);
        let report = wd.tate_424_check().unwrap();
        assert!(report.corrected_holds);
        assert!(!report.uncorrected_holds);
    }

    #[test]
    fn ell_adic_sample_degenerate_cases() {
        let wd = split_multiplicative(2);
        assert_eq!(wd.ell_adic_sample(0, 0, &rat_int(0)).unwrap(), Matrix::identity(2, 1));
        // sigma = identity, m = 0: exp(tN).
        let t = rat(3, 2);
        assert_eq!(
            wd.ell_adic_sample(0, 0, &t).unwrap(),
            exp_nilpotent(wd.monodromy(), &t).unwrap()
        );
        // Frobenius powers compose with the inverse.
        let f1 = wd.ell_adic_sample(0, 1, &rat_int(0)).unwrap();
        let fm1 = wd.ell_adic_sample(0, -1, &rat_int(0)).unwrap();
        assert!(f1.mul(&fm1).unwrap().is_identity());
    }

    #[test]
    fn ell_adic_sample_requires_frobenius_for_nonzero_m() {
        let wd = split_multiplicative_on_mod8();
        assert!(matches!(
            wd.ell_adic_sample(0, 1, &rat_int(0)),
            Err(WdError::MissingFrobenius)
        ));
    }

    #[test]
    fn frobenius_scaling_axiom_is_validated() {
        // F = identity does not satisfy F N F^-1 = q^-1 N when N != 0.
        let rg = trivial_rg();
        let rep = MatrixRep::new(rg, alloc::vec![Matrix::identity(2, 1)]).unwrap();
        let n = rmat(2, 2, &[0, 1, 0, 0]);
        let bad = Frobenius { matrix: Matrix::identity(2, 1), theta: alloc::vec![0] };
        assert!(matches!(
            WeilDeligneRep::new(rep, n, 2, Some(bad)),
            Err(WdError::FrobeniusScalingFails)
        ));
    }

    #[test]
    fn twist_of_split_multiplicative_shape_by_primitive_mod8() {
        // Depth of the representation is 0 (trivial finite part, N != 0);
        // the primitive character has depth 2. Expected conductor:
        // 2 * a(chi) = 2 * 3 = 6.
        let wd = split_multiplicative_on_mod8();
        let chi = char_mod8_with_kernel(wd.rg(), &[1, 7]);
        let report = wd.check_twisting(&chi).unwrap();
        assert!(report.agree);
        assert_eq!(report.twisted_conductor, rat_int(6));
        assert_eq!(report.expected, rat_int(6));
        assert_eq!(report.depth_wd, Some(rat_int(0)));
        assert_eq!(report.depth_chi, Some(rat_int(2)));
    }

    #[test]
    fn twist_of_trivial_one_dimensional_wd() {
        let rg = q2_zeta8();
        let rep = MatrixRep::new(rg.clone(), alloc::vec![Matrix::identity(1, 1); 4]).unwrap();
        let wd = WeilDeligneRep::new(rep, Matrix::zero(1, 1, 1), 2, None).unwrap();
        let chi = char_mod8_with_kernel(&rg, &[1, 7]);
        let report = wd.check_twisting(&chi).unwrap();
        assert!(report.agree);
        assert_eq!(report.twisted_conductor, rat_int(3));
    }

    #[test]
    fn twist_precondition_is_enforced() {
        // The 1x1 primitive-character representation has depth 2 already.
        let wd = one_dimensional_wd(&[1, 7]);
        let chi = char_mod8_with_kernel(wd.rg(), &[1, 5]);
        assert!(matches!(
            wd.check_twisting(&chi),
            Err(WdError::NotMoreDeeplyRamified { .. })
        ));
    }

    #[test]
    fn conductors_are_invariant_under_conjugation() {
        let wd = split_multiplicative(2);
        let p = rmat(2, 2, &[1, 2, 1, 3]); // determinant 1
        let conj = wd.conjugate(&p).unwrap();
        assert_eq!(conj.deligne_conductor().unwrap(), wd.deligne_conductor().unwrap());
        assert_eq!(conj.serre_conductor().unwrap(), wd.serre_conductor().unwrap());
        assert_eq!(conj.integral_conductor().unwrap(), wd.integral_conductor().unwrap());
    }

    #[test]
    fn kernel_of_exp_minus_identity_equals_kernel_of_n() {
        let wd = split_multiplicative(2);
        let exp = exp_nilpotent(wd.monodromy(), &rat_int(1)).unwrap();
        let diff = exp.sub(&Matrix::identity(2, 1)).unwrap();
        assert_eq!(diff.kernel(), wd.kernel_of_monodromy());
    }
}
