//! Instance generators and independent oracles.
//!
//! Realizable instances come from genuine local-field arithmetic whose
//! valuations have closed forms: cyclotomic extensions `Q_p(zeta_{p^n})`
//! (via the exact valuation oracle below), totally tamely ramified cyclic
//! extensions, and a tame `S_3` fixture. Conductor integrality is a
//! theorem for these, and downstream code asserts it.
//!
//! Random abstract instances (groups, chains, characters, Weil-Deligne
//! data) are deterministic in the seed and are labeled non-realizable, so
//! no integrality claims attach to them. They fuel the differential test
//! suites.

use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::characters::{degree_one_characters, induced_character, CharError, Character};
use crate::exactnum::{euler_phi, rat_int, Cyclotomic};
use crate::groups::{symmetric_3, units_mod, FiniteGroup, GroupError};
use crate::linalg::Matrix;
use crate::ramification::{RamError, RamifiedGroup};
use crate::weildeligne::{Frobenius, MatrixRep, WdError, WeilDeligneRep};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("{p} is not prime")]
    NotPrime { p: u64 },
    #[error("level must be at least 1")]
    ZeroLevel,
    #[error("phi({modulus}) = {phi} exceeds the size budget {budget}")]
    TooLarge { modulus: u64, phi: u64, budget: u64 },
    #[error("character does not live on the units mod {modulus}")]
    WrongGroup { modulus: u64 },
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ram(#[from] RamError),
    #[error(transparent)]
    Wd(#[from] WdError),
}

/// Group-order budget for generated instances.
const PHI_BUDGET: u64 = 512;

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The ramification filtration of `Gal(Q_p(zeta_{p^n}) / Q_p)` on the
/// group `(Z/p^n)^*`, flagged realizable.
///
/// Valuation oracle: with uniformizer `pi = zeta - 1`, an automorphism
/// `sigma_a` moves `pi` by `zeta (zeta^{a-1} - 1)`, and for
/// `a - 1 = p^k u` with `p` not dividing `u` the valuation of
/// `zeta^{a-1} - 1` is `i(sigma_a) = phi(p^n) / phi(p^{n-k})`. Then
/// `sigma_a` lies in `G_i` exactly when `i(sigma_a) >= i + 1`.
pub fn cyclotomic_extension(p: u64, n: u32) -> Result<Arc<RamifiedGroup>, InstanceError> {
    if !is_prime(p) {
        return Err(InstanceError::NotPrime { p });
    }
    if n == 0 {
        return Err(InstanceError::ZeroLevel);
    }
    let modulus = p.pow(n);
    let phi = euler_phi(modulus);
    if phi > PHI_BUDGET {
        return Err(InstanceError::TooLarge { modulus, phi, budget: PHI_BUDGET });
    }
    let units = units_mod(modulus);
    let group = FiniteGroup::unit_group_mod(modulus)?;
    // i(sigma_a) per element; the identity never leaves the chain.
    let displacement = |a: u64| -> u64 {
        let mut k = 0;
        let mut d = a - 1;
        while d % p == 0 {
            d /= p;
            k += 1;
        }
        phi / euler_phi(p.pow(n - k))
    };
    let max_i = units
        .iter()
        .filter(|&&a| a != 1)
        .map(|&a| displacement(a))
        .max()
        .unwrap_or(0);
    let mut chain = Vec::new();
    for i in 0..max_i {
        let elems: Vec<usize> = units
            .iter()
            .enumerate()
            .filter(|&(_, &a)| a == 1 || displacement(a) >= i + 1)
            .map(|(idx, _)| idx)
            .collect();
        chain.push(group.subgroup_from_elements(&elems)?);
    }
    Ok(Arc::new(RamifiedGroup::new(group, chain, true)?))
}

/// A totally tamely ramified cyclic extension of degree `e`: the chain
/// `G_0 = C_e`, `G_1 = 1`. Realizable.
pub fn tame_cyclic(e: usize) -> Arc<RamifiedGroup> {
    let group = FiniteGroup::cyclic(e);
    let chain = if e == 1 {
        alloc::vec![group.trivial_subgroup()]
    } else {
        alloc::vec![group.full_subgroup()]
    };
    Arc::new(RamifiedGroup::new(group, chain, true).expect("cyclic chain is valid"))
}

/// `S_3` with the tame chain `G_0 = A_3`, `G_1 = 1` (the Galois closure of
/// a tame non-abelian cubic). Realizable.
pub fn s3_with_tame_chain() -> Arc<RamifiedGroup> {
    let group = symmetric_3();
    let a3 = group.subgroup_generated(&[4]).expect("3-cycle index");
    Arc::new(RamifiedGroup::new(group, alloc::vec![a3], true).expect("A3 is normal"))
}

/// The standard 2-dimensional irreducible character of the `S_3` fixture.
pub fn s3_standard_character(rg: &Arc<RamifiedGroup>) -> Result<Character, InstanceError> {
    let group = rg.group();
    let values = group
        .conjugacy_classes()
        .iter()
        .map(|class| {
            let v = match group.element_order(class[0]) {
                1 => 2,
                2 => 0,
                _ => -1,
            };
            Cyclotomic::from_rational(1, rat_int(v))
        })
        .collect();
    Ok(Character::new(crate::characters::ClassFunction::from_class_values(
        rg.clone(),
        values,
    )?)?)
}

/// The independent Dirichlet oracle: the exponent `m` of the conductor
/// `p^m` of a degree-1 character of `(Z/p^n)^*`, found as the smallest `m`
/// for which the character is trivial on the kernel of reduction to level
/// `m`. Cross-check target: the Artin conductor on
/// [`cyclotomic_extension`]`(p, n)` equals `m`.
pub fn dirichlet_conductor_oracle(p: u64, n: u32, chi: &Character) -> Result<u32, InstanceError> {
    if !is_prime(p) {
        return Err(InstanceError::NotPrime { p });
    }
    let modulus = p.pow(n);
    let units = units_mod(modulus);
    if chi.rg().group().size() != units.len() || chi.degree() != 1 {
        return Err(InstanceError::WrongGroup { modulus });
    }
    for m in 0..=n {
        let level = p.pow(m);
        let trivial_on_kernel = units
            .iter()
            .enumerate()
            .filter(|&(_, &a)| (a - 1) % level == 0)
            .all(|(idx, _)| chi.value_at(idx).is_one());
        if trivial_on_kernel {
            return Ok(m);
        }
    }
    unreachable!("the kernel at level n is trivial")
}

/// The split-multiplicative fixture: trivial inertia action on a
/// 2-dimensional space, `N = [[0,1],[0,0]]`, and Frobenius `diag(1, q)`
/// satisfying `F N F^-1 = q^-1 N`. Its conductor is 1 by every definition.
pub fn split_multiplicative(q: u64) -> Result<WeilDeligneRep, InstanceError> {
    let group = FiniteGroup::cyclic(1);
    let chain = alloc::vec![group.trivial_subgroup()];
    let rg = Arc::new(RamifiedGroup::new(group, chain, true)?);
    split_multiplicative_shape(rg, q, true)
}

/// The split-multiplicative shape (trivial matrices, elementary nilpotent
/// `N`) over an arbitrary ramified group; Frobenius data only attaches
/// over the trivial group.
pub fn split_multiplicative_shape(
    rg: Arc<RamifiedGroup>,
    q: u64,
    with_frobenius: bool,
) -> Result<WeilDeligneRep, InstanceError> {
    let size = rg.group().size();
    let rep = MatrixRep::new(rg, alloc::vec![Matrix::identity(2, 1); size])?;
    let n = Matrix::from_rationals(
        2,
        2,
        alloc::vec![rat_int(0), rat_int(1), rat_int(0), rat_int(0)],
    )
    .expect("entry count");
    let frobenius = if with_frobenius {
        let f = Matrix::from_rationals(
            2,
            2,
            alloc::vec![rat_int(1), rat_int(0), rat_int(0), rat_int(q as i64)],
        )
        .expect("entry count");
        Some(Frobenius { matrix: f, theta: (0..size).collect() })
    } else {
        None
    };
    Ok(WeilDeligneRep::new(rep, n, q, frobenius)?)
}

/// An abstract product instance carrying a tame 2-dimensional character
/// and a more deeply ramified degree-1 character on the same group:
/// `S_3 x (Z/4)^*` with the chain `A_3 x K ⊇ 1 x K ⊇ 1`. Here
/// `a(chi) = 4/3` and `a(rho ⊗ chi) = 2 * 4/3 = 8/3` exactly. Not
/// realizable (the chain is a product artifact), so no integrality claims.
pub fn tame_wild_product() -> Result<(Arc<RamifiedGroup>, Character, Character), InstanceError> {
    let s3 = symmetric_3();
    let k = FiniteGroup::unit_group_mod(4)?;
    let product = s3.direct_product(&k);
    // element (a, b) has index a * |K| + b
    let g0: Vec<usize> = [0usize, 4, 5]
        .iter()
        .flat_map(|&a| (0..2).map(move |b| a * 2 + b))
        .collect();
    let g1: Vec<usize> = (0..2).collect();
    let chain = alloc::vec![
        product.subgroup_from_elements(&g0)?,
        product.subgroup_from_elements(&g1)?,
    ];
    let rg = Arc::new(RamifiedGroup::new(product, chain, false)?);

    let group = rg.group();
    let std_values: Vec<Cyclotomic> = (0..group.size())
        .map(|idx| {
            let a = idx / 2;
            let v = match s3.element_order(a) {
                1 => 2,
                2 => 0,
                _ => -1,
            };
            Cyclotomic::from_rational(1, rat_int(v))
        })
        .collect();
    let rho = Character::new(crate::characters::ClassFunction::from_element_values(
        rg.clone(),
        std_values,
    )?)?;

    let chi_values: Vec<Cyclotomic> = (0..group.size())
        .map(|idx| {
            let b = idx % 2; // b = 1 is the residue 3 in the units mod 4
            Cyclotomic::from_rational(1, rat_int(if b == 1 { -1 } else { 1 }))
        })
        .collect();
    let chi = Character::new(crate::characters::ClassFunction::from_element_values(
        rg.clone(),
        chi_values,
    )?)?;
    Ok((rg, rho, chi))
}

/// Size bounds for random instance generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceBounds {
    pub max_group: usize,
    pub max_chain: usize,
}

impl Default for InstanceBounds {
    fn default() -> Self {
        InstanceBounds { max_group: 24, max_chain: 5 }
    }
}

fn random_subgroup_of(
    rng: &mut ChaCha8Rng,
    group: &FiniteGroup,
    within: &crate::groups::Subgroup,
) -> crate::groups::Subgroup {
    let pool = within.elements();
    let count = rng.gen_range(1..=2.min(pool.len()));
    let gens: Vec<usize> = (0..count).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
    group.subgroup_generated(&gens).expect("generators in range")
}

/// A random abelian group with a random descending normal chain ending
/// trivial; deterministic in the provided generator state. Abstract, never
/// flagged realizable.
fn random_ramified_group(rng: &mut ChaCha8Rng, bounds: &InstanceBounds) -> Arc<RamifiedGroup> {
    let mut group = FiniteGroup::cyclic(rng.gen_range(2..=6));
    for _ in 0..2 {
        if rng.gen_bool(0.5) {
            let factor = rng.gen_range(2..=6);
            if group.size() * factor <= bounds.max_group {
                group = group.direct_product(&FiniteGroup::cyclic(factor));
            }
        }
    }
    let mut chain = Vec::new();
    let mut current = if rng.gen_bool(0.5) {
        group.full_subgroup()
    } else {
        random_subgroup_of(rng, &group, &group.full_subgroup())
    };
    let length = rng.gen_range(1..=bounds.max_chain);
    for _ in 0..length {
        chain.push(current.clone());
        if !rng.gen_bool(0.3) {
            current = random_subgroup_of(rng, &group, &current);
        }
    }
    Arc::new(RamifiedGroup::new(group, chain, false).expect("descending abelian chain"))
}

/// A random abstract `(RamifiedGroup, Character)` pair, deterministic in
/// the seed: a random degree-1 character, a sum of two, or an induced
/// character from a random subgroup.
pub fn random_instance(
    seed: u64,
    bounds: &InstanceBounds,
) -> Result<(Arc<RamifiedGroup>, Character), InstanceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rg = random_ramified_group(&mut rng, bounds);
    let chars = degree_one_characters(&rg)?;
    let chi = match rng.gen_range(0..4u8) {
        0 | 1 => chars[rng.gen_range(0..chars.len())].clone(),
        2 => {
            let a = &chars[rng.gen_range(0..chars.len())];
            let b = &chars[rng.gen_range(0..chars.len())];
            a.direct_sum(b)?
        }
        _ => {
            let group = rg.group();
            let h = random_subgroup_of(&mut rng, group, &group.full_subgroup());
            let (hg, _) = group.subgroup_as_group(&h)?;
            let hrg = Arc::new(RamifiedGroup::new(hg, Vec::new(), false)?);
            let hchars = degree_one_characters(&hrg)?;
            let pick = &hchars[rng.gen_range(0..hchars.len())];
            let values: Vec<Cyclotomic> =
                (0..h.order()).map(|i| pick.value_at(i).clone()).collect();
            induced_character(&rg, &h, &values)?
        }
    };
    Ok((rg, chi))
}

/// A random abstract Weil-Deligne instance, deterministic in the seed:
/// block-diagonal inertia matrices assembled from degree-1 characters,
/// with a random nilpotent built inside the commutant (entries only
/// between equal characters).
pub fn random_wd_instance(seed: u64) -> Result<WeilDeligneRep, InstanceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bounds = InstanceBounds::default();
    let rg = random_ramified_group(&mut rng, &bounds);
    let chars = degree_one_characters(&rg)?;
    // A small pool makes repeated characters (hence a nontrivial
    // commutant) likely.
    let pool: Vec<Character> = (0..2)
        .map(|_| chars[rng.gen_range(0..chars.len())].clone())
        .collect();
    let dim = rng.gen_range(1..=3usize);
    let slots: Vec<&Character> =
        (0..dim).map(|_| &pool[rng.gen_range(0..pool.len())]).collect();

    let group_size = rg.group().size();
    let mut mats = Vec::with_capacity(group_size);
    for g in 0..group_size {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                if i == j {
                    entries.push(slots[i].value_at(g).clone());
                } else {
                    entries.push(Cyclotomic::zero(1));
                }
            }
        }
        mats.push(Matrix::new(dim, dim, entries).expect("entry count"));
    }

    let mut n_entries = alloc::vec![rat_int(0); dim * dim];
    for i in 0..dim {
        for j in (i + 1)..dim {
            if slots[i] == slots[j] && rng.gen_bool(0.5) {
                n_entries[i * dim + j] = rat_int(rng.gen_range(-2..=2));
            }
        }
    }
    let n = Matrix::from_rationals(dim, dim, n_entries).expect("entry count");
    let q = [2u64, 3, 4, 5, 7, 8, 9][rng.gen_range(0..7)];
    let rep = MatrixRep::new(rg, mats)?;
    Ok(WeilDeligneRep::new(rep, n, q, None)?)
}

/// Every realizable ramified group in the corpus: cyclotomic extensions
/// for `p in {2, 3, 5}` and `n <= 3`, tame cyclic extensions of degree up
/// to 12, and the `S_3` fixture.
pub fn realizable_corpus() -> Vec<Arc<RamifiedGroup>> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        for n in 1..=3u32 {
            out.push(cyclotomic_extension(p, n).expect("corpus parameters are in budget"));
        }
    }
    for e in 1..=12 {
        out.push(tame_cyclic(e));
    }
    out.push(s3_with_tame_chain());
    out
}

/// Deterministic Weil-Deligne fixtures used alongside the random sweeps.
pub fn wd_corpus() -> Result<Vec<WeilDeligneRep>, InstanceError> {
    let mut out = Vec::new();
    out.push(split_multiplicative(2)?);
    out.push(split_multiplicative(3)?);
    out.push(split_multiplicative_shape(cyclotomic_extension(2, 3)?, 2, false)?);

    // Degree-1 characters of the mod-8 chain as 1x1 representations.
    let rg8 = cyclotomic_extension(2, 3)?;
    for chi in degree_one_characters(&rg8)? {
        let rep = MatrixRep::from_degree_one_character(&chi, 1)?;
        out.push(WeilDeligneRep::new(rep, Matrix::zero(1, 1, 1), 2, None)?);
    }

    // diag(chi, chi) with an elementary nilpotent inside the isotypic
    // block, over the mod-4 chain.
    let rg4 = cyclotomic_extension(2, 2)?;
    let chi = degree_one_characters(&rg4)?
        .into_iter()
        .find(|c| c.kernel().map(|k| k.is_trivial()).unwrap_or(false))
        .expect("faithful character mod 4");
    let rep = MatrixRep::from_degree_one_character(&chi, 2)?;
    let n = Matrix::from_rationals(
        2,
        2,
        alloc::vec![rat_int(0), rat_int(1), rat_int(0), rat_int(0)],
    )
    .expect("entry count");
    out.push(WeilDeligneRep::new(rep, n, 2, None)?);
    Ok(out)
}
