//! Fixed points of an automorphism on the unitary dual of a finite group,
//! counted through mod-p central characters of the class algebra.
//!
//! For p ≡ 1 (mod exp(G)) with p ∤ |G|, the class algebra over F_p is split
//! commutative semisimple, so its simultaneous eigen-rows (the central
//! characters) are in canonical bijection with the irreducible unitary
//! representations. The dual map ρ ↦ ρ∘φ permutes rows by the class
//! permutation of φ, so the fixed-point count S_f(φ) is computable without
//! ever lifting character values to characteristic zero. The headline check
//! is R(φ) = S_f(φ), with the count of φ-invariant ordinary classes as an
//! independent third route.

use crate::group::{Automorphism, FiniteGroup};
use crate::modp::{
    char_poly_mod_p, fnv1a64, kernel_basis, roots_mod_p, solve_in_basis, Fp, FpMat,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Largest group order the dual computations accept.
pub const DUAL_ORDER_CAP: usize = 256;
/// Admissible primes are searched strictly below this bound.
pub const PRIME_SEARCH_BOUND: u64 = 1_000_000;
/// Rounds of random-combination splitting before the sequential fallback.
const RANDOM_SPLIT_ROUNDS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualError {
    OrderCap { order: usize, cap: usize },
    NoAdmissiblePrime { bound: u64 },
    PrimeNotAdmissible { p: u64 },
    SplittingFailed { detail: String },
    TableMismatch,
}

impl fmt::Display for DualError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualError::OrderCap { order, cap } => {
                write!(f, "group order {} exceeds the dual-module cap {}", order, cap)
            }
            DualError::NoAdmissiblePrime { bound } => {
                write!(f, "no admissible prime below {}", bound)
            }
            DualError::PrimeNotAdmissible { p } => write!(
                f,
                "{} is not an admissible prime (needs p prime, p ∤ |G|, p ≡ 1 mod exp(G))",
                p
            ),
            DualError::SplittingFailed { detail } => {
                write!(f, "eigenspace splitting failed: {}", detail)
            }
            DualError::TableMismatch => {
                write!(f, "character table does not belong to this group")
            }
        }
    }
}

impl std::error::Error for DualError {}

/// Ordinary conjugacy classes plus the class-algebra structure constants
/// a[i][j][k] = #{(u,v) ∈ C_i×C_j : u·v = z_k} for the fixed representative
/// z_k of C_k.
#[derive(Clone, Debug)]
pub struct ClassData {
    pub classes: Vec<Vec<usize>>,
    pub class_sizes: Vec<usize>,
    pub class_of: Vec<usize>,
    pub representatives: Vec<usize>,
    pub inverse_class: Vec<usize>,
    pub structure_constants: Vec<Vec<Vec<u64>>>,
}

impl ClassData {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

/// Conjugacy classes and structure constants of a group of order ≤ 256.
/// Classes are ordered by smallest element index.
pub fn class_data(g: &FiniteGroup) -> Result<ClassData, DualError> {
    let n = g.order();
    if n > DUAL_ORDER_CAP {
        return Err(DualError::OrderCap { order: n, cap: DUAL_ORDER_CAP });
    }
    let part = g.conjugacy_classes();
    let r = part.class_count;
    let classes = part.classes();
    let class_sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
    let inverse_class: Vec<usize> = (0..r)
        .map(|j| part.class_of[g.inv(part.representatives[j])])
        .collect();
    // a[i][j][k]: for each k fix z_k; every u determines v = u^{-1}·z_k
    let mut a = vec![vec![vec![0u64; r]; r]; r];
    for k in 0..r {
        let z = part.representatives[k];
        for u in 0..n {
            let i = part.class_of[u];
            let j = part.class_of[g.mul(g.inv(u), z)];
            a[i][j][k] += 1;
        }
    }
    Ok(ClassData {
        classes,
        class_sizes,
        class_of: part.class_of,
        representatives: part.representatives,
        inverse_class,
        structure_constants: a,
    })
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime p < 10^6 with p ∤ |G| and p ≡ 1 (mod exp(G)).
pub fn admissible_prime(g: &FiniteGroup) -> Result<u64, DualError> {
    admissible_prime_after(g, 1)
}

/// Smallest admissible prime strictly greater than `after`.
pub fn admissible_prime_after(g: &FiniteGroup, after: u64) -> Result<u64, DualError> {
    let e = g.exponent() as u64;
    let order = g.order() as u64;
    let mut p = after / e * e + 1;
    loop {
        if p > after && is_prime(p) && order % p != 0 {
            return Ok(p);
        }
        p += e;
        if p >= PRIME_SEARCH_BOUND {
            return Err(DualError::NoAdmissiblePrime { bound: PRIME_SEARCH_BOUND });
        }
    }
}

pub fn is_admissible_prime(g: &FiniteGroup, p: u64) -> bool {
    is_prime(p)
        && p < PRIME_SEARCH_BOUND
        && g.order() as u64 % p != 0
        && (p - 1) % g.exponent() as u64 == 0
}

/// One row per irreducible: the simultaneous eigenvalues of the class
/// matrices mod p, indexed by class. Rows are sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralCharacterTable {
    pub prime: u64,
    pub seed: u64,
    pub rows: Vec<Vec<u64>>,
}

/// Central characters with the default (smallest) admissible prime.
pub fn central_characters(
    g: &FiniteGroup,
    cd: &ClassData,
) -> Result<CentralCharacterTable, DualError> {
    let p = admissible_prime(g)?;
    central_characters_with_prime(g, cd, p)
}

/// Central characters over a caller-chosen admissible prime.
///
/// Splitting strategy: joint eigenspaces are refined first with a few
/// deterministic pseudo-random linear combinations of the class matrices
/// (seeded from a hash of the group table), then — if anything is still not
/// one-dimensional — with each class matrix in turn. The class matrices span
/// the whole (split semisimple, commutative) class algebra, so the sequential
/// pass is guaranteed to finish; a remaining higher-dimensional space is a
/// bug and fails loudly.
pub fn central_characters_with_prime(
    g: &FiniteGroup,
    cd: &ClassData,
    p: u64,
) -> Result<CentralCharacterTable, DualError> {
    if !is_admissible_prime(g, p) {
        return Err(DualError::PrimeNotAdmissible { p });
    }
    let fp = Fp::new(p);
    let r = cd.class_count();
    // class matrix M_i: multiplication by the class sum K_i in basis {K_j}:
    // K_i·K_j = Σ_k a[i][j][k] K_k, so column j of M_i holds a[i][j][·]
    let mats: Vec<FpMat> = (0..r)
        .map(|i| {
            let mut m = FpMat::zero(r, r);
            for j in 0..r {
                for k in 0..r {
                    m.set(k, j, cd.structure_constants[i][j][k] % p);
                }
            }
            m
        })
        .collect();

    let seed = fnv1a64(
        (0..g.order())
            .flat_map(|a| (0..g.order()).map(move |b| (a, b)))
            .flat_map(|(a, b)| (g.mul(a, b) as u32).to_le_bytes()),
    );

    let mut spaces: Vec<FpMat> = vec![FpMat::identity(r)];
    let split_all = |spaces: &mut Vec<FpMat>, op: &FpMat| -> Result<(), DualError> {
        let mut next = Vec::with_capacity(spaces.len());
        for basis in spaces.drain(..) {
            if basis.cols == 1 {
                next.push(basis);
                continue;
            }
            let image = op.mul(&basis, fp);
            let restricted = solve_in_basis(&basis, &image, fp).ok_or_else(|| {
                DualError::SplittingFailed {
                    detail: "subspace is not invariant under a class matrix".into(),
                }
            })?;
            let cp = char_poly_mod_p(&restricted, fp);
            let roots = roots_mod_p(&cp, fp);
            let mut carved = 0;
            for lambda in roots {
                let shifted = restricted.sub_scalar_identity(lambda, fp);
                let ker = kernel_basis(&shifted, fp);
                if ker.is_empty() {
                    continue;
                }
                let mut sub = FpMat::zero(basis.cols, ker.len());
                for (c, v) in ker.iter().enumerate() {
                    for (row, &val) in v.iter().enumerate() {
                        sub.set(row, c, val);
                    }
                }
                carved += ker.len();
                next.push(basis.mul(&sub, fp));
            }
            if carved != basis.cols {
                return Err(DualError::SplittingFailed {
                    detail: format!(
                        "eigenspaces covered {} of {} dimensions (operator not diagonalizable?)",
                        carved, basis.cols
                    ),
                });
            }
        }
        *spaces = next;
        Ok(())
    };

    let done = |spaces: &Vec<FpMat>| spaces.iter().all(|b| b.cols == 1);

    for round in 0..RANDOM_SPLIT_ROUNDS {
        if done(&spaces) {
            break;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (round as u64).wrapping_mul(0x9e37_79b9));
        let mut combo = FpMat::zero(r, r);
        for m in &mats {
            let c = rng.gen_range(0..p);
            if c == 0 {
                continue;
            }
            for idx in 0..r * r {
                combo.e[idx] = fp.add(combo.e[idx], fp.mul(c, m.e[idx]));
            }
        }
        split_all(&mut spaces, &combo)?;
    }
    if !done(&spaces) {
        for m in &mats {
            split_all(&mut spaces, m)?;
            if done(&spaces) {
                break;
            }
        }
    }
    if !done(&spaces) {
        return Err(DualError::SplittingFailed {
            detail: format!(
                "joint eigenspaces of dimensions {:?} remain after all class matrices",
                spaces.iter().map(|b| b.cols).collect::<Vec<_>>()
            ),
        });
    }
    if spaces.len() != r {
        return Err(DualError::SplittingFailed {
            detail: format!("found {} joint eigenspaces, expected {}", spaces.len(), r),
        });
    }

    let identity_class = cd.class_of[g.identity()];
    let mut rows = Vec::with_capacity(r);
    for basis in &spaces {
        let w: Vec<u64> = (0..r).map(|i| basis.at(i, 0)).collect();
        let pivot = w.iter().position(|&v| v != 0).expect("basis vector is nonzero");
        let piv_inv = fp.inv(w[pivot]);
        let mut row = Vec::with_capacity(r);
        for m in &mats {
            let u = m.mul_vec(&w, fp);
            let lambda = fp.mul(u[pivot], piv_inv);
            // the vector really is an eigenvector of every class matrix
            for i in 0..r {
                if u[i] != fp.mul(lambda, w[i]) {
                    return Err(DualError::SplittingFailed {
                        detail: "joint eigenvector failed verification".into(),
                    });
                }
            }
            row.push(lambda);
        }
        if row[identity_class] != 1 {
            return Err(DualError::SplittingFailed {
                detail: "identity-class eigenvalue is not 1".into(),
            });
        }
        rows.push(row);
    }
    rows.sort_unstable();
    for i in 1..rows.len() {
        if rows[i] == rows[i - 1] {
            return Err(DualError::SplittingFailed {
                detail: "central character rows are not pairwise distinct".into(),
            });
        }
    }
    Ok(CentralCharacterTable { prime: p, seed, rows })
}

/// The permutation induced by φ on conjugacy classes.
pub fn class_permutation(cd: &ClassData, phi: &Automorphism) -> Vec<usize> {
    (0..cd.class_count())
        .map(|j| cd.class_of[phi.apply(cd.representatives[j])])
        .collect()
}

/// S_f(φ): the number of irreducibles fixed by ρ ↦ ρ∘φ. A row is fixed
/// exactly when it is constant on the σ-orbits of classes.
pub fn fixed_dual_count(
    cd: &ClassData,
    table: &CentralCharacterTable,
    phi: &Automorphism,
) -> Result<usize, DualError> {
    let r = cd.class_count();
    if table.rows.len() != r || table.rows.iter().any(|row| row.len() != r) {
        return Err(DualError::TableMismatch);
    }
    let sigma = class_permutation(cd, phi);
    Ok(table
        .rows
        .iter()
        .filter(|row| (0..r).all(|j| row[j] == row[sigma[j]]))
        .count())
}

/// The permutation φ̂ induces on the rows of the character table:
/// row i maps to the row equal to j ↦ row_i[σ(j)].
pub fn dual_permutation(
    cd: &ClassData,
    table: &CentralCharacterTable,
    phi: &Automorphism,
) -> Result<Vec<usize>, DualError> {
    let r = cd.class_count();
    if table.rows.len() != r {
        return Err(DualError::TableMismatch);
    }
    let sigma = class_permutation(cd, phi);
    let mut out = Vec::with_capacity(r);
    for row in &table.rows {
        let moved: Vec<u64> = (0..r).map(|j| row[sigma[j]]).collect();
        let target = table
            .rows
            .iter()
            .position(|cand| *cand == moved)
            .ok_or_else(|| DualError::SplittingFailed {
                detail: "dual map left the character table".into(),
            })?;
        out.push(target);
    }
    Ok(out)
}

/// The three-way comparison R(φ) = S_f(φ) = #(φ-invariant classes).
#[derive(Clone, Debug)]
pub struct TbftReport {
    pub group: String,
    pub automorphism: Vec<usize>,
    pub prime: u64,
    pub seed: u64,
    pub reidemeister: usize,
    pub fixed_dual: usize,
    pub invariant_classes: usize,
    /// pass ⇔ R = S_f (the theorem under test)
    pub pass: bool,
    /// whether the Brauer route agrees with both counts
    pub brauer_agrees: bool,
}

pub fn verify_tbft(g: &FiniteGroup, phi: &Automorphism) -> Result<TbftReport, DualError> {
    verify_tbft_with_prime(g, phi, None)
}

/// As `verify_tbft` but with an optional prime override (used by the CLI's
/// environment hook and by prime-independence tests).
pub fn verify_tbft_with_prime(
    g: &FiniteGroup,
    phi: &Automorphism,
    prime: Option<u64>,
) -> Result<TbftReport, DualError> {
    let cd = class_data(g)?;
    let table = match prime {
        Some(p) => central_characters_with_prime(g, &cd, p)?,
        None => central_characters(g, &cd)?,
    };
    let s_f = fixed_dual_count(&cd, &table, phi)?;
    let r = g.reidemeister_number(phi);
    let invariant = g.invariant_class_count(phi);
    Ok(TbftReport {
        group: g.name().to_string(),
        automorphism: phi.images(),
        prime: table.prime,
        seed: table.seed,
        reidemeister: r,
        fixed_dual: s_f,
        invariant_classes: invariant,
        pass: r == s_f,
        brauer_agrees: invariant == r && invariant == s_f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn inversion(g: &FiniteGroup) -> Automorphism {
        g.automorphism_from_full_images(&(0..g.order()).map(|x| g.inv(x)).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn admissible_primes_frozen() {
        assert_eq!(admissible_prime(&FiniteGroup::cyclic(1).unwrap()).unwrap(), 2);
        assert_eq!(admissible_prime(&FiniteGroup::cyclic(2).unwrap()).unwrap(), 3);
        assert_eq!(admissible_prime(&FiniteGroup::cyclic(3).unwrap()).unwrap(), 7);
        assert_eq!(admissible_prime(&FiniteGroup::cyclic(4).unwrap()).unwrap(), 5);
        assert_eq!(admissible_prime(&FiniteGroup::symmetric(3).unwrap()).unwrap(), 7);
        // next ones
        let z3 = FiniteGroup::cyclic(3).unwrap();
        assert_eq!(admissible_prime_after(&z3, 7).unwrap(), 13);
    }

    #[test]
    fn trivial_group_class_data() {
        let g = FiniteGroup::cyclic(1).unwrap();
        let cd = class_data(&g).unwrap();
        assert_eq!(cd.class_count(), 1);
        assert_eq!(cd.structure_constants[0][0][0], 1);
        let table = central_characters(&g, &cd).unwrap();
        assert_eq!(table.rows, vec![vec![1]]);
        let rep = verify_tbft(&g, &Automorphism::identity(1)).unwrap();
        assert!(rep.pass && rep.brauer_agrees);
        assert_eq!(rep.reidemeister, 1);
    }

    #[test]
    fn abelian_structure_constants_are_indicator() {
        // in an abelian group every class is a singleton and
        // a[i][j][k] = [i + j = k] in the group's own addition
        let g = FiniteGroup::cyclic(4).unwrap();
        let cd = class_data(&g).unwrap();
        assert_eq!(cd.class_count(), 4);
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let want = if g.mul(i, j) == k { 1 } else { 0 };
                    assert_eq!(cd.structure_constants[i][j][k], want);
                }
            }
        }
    }

    #[test]
    fn cyclic3_rows_are_cube_roots_of_unity_mod_7() {
        let g = FiniteGroup::cyclic(3).unwrap();
        let cd = class_data(&g).unwrap();
        let table = central_characters(&g, &cd).unwrap();
        assert_eq!(table.prime, 7);
        assert_eq!(
            table.rows,
            vec![vec![1, 1, 1], vec![1, 2, 4], vec![1, 4, 2]]
        );
    }

    #[test]
    fn s3_central_characters_match_hand_computation() {
        // S3 mod 7: classes ordered e, transpositions, 3-cycles. The class
        // algebra relations K1² = 3K0 + 3K2, K1K2 = 2K1, K2² = 2K0 + K2 give
        // eigenvalue rows (1,3,2), (1,-3,2), (1,0,-1) — i.e. sorted mod 7:
        // (1,0,6), (1,3,2), (1,4,2).
        let g = FiniteGroup::symmetric(3).unwrap();
        let cd = class_data(&g).unwrap();
        assert_eq!(cd.class_sizes, vec![1, 3, 2]);
        let table = central_characters(&g, &cd).unwrap();
        assert_eq!(table.prime, 7);
        assert_eq!(
            table.rows,
            vec![vec![1, 0, 6], vec![1, 3, 2], vec![1, 4, 2]]
        );
    }

    #[test]
    fn structure_constants_ignore_representative_choice() {
        // recompute a[i][j][k] against the largest element of C_k instead of
        // the smallest: counts must agree
        let g = FiniteGroup::dihedral(4).unwrap();
        let cd = class_data(&g).unwrap();
        let r = cd.class_count();
        for k in 0..r {
            let z_alt = *cd.classes[k].last().unwrap();
            for i in 0..r {
                for j in 0..r {
                    let count = (0..g.order())
                        .filter(|&u| {
                            cd.class_of[u] == i
                                && cd.class_of[g.mul(g.inv(u), z_alt)] == j
                        })
                        .count() as u64;
                    assert_eq!(count, cd.structure_constants[i][j][k]);
                }
            }
        }
    }

    #[test]
    fn class_matrices_commute() {
        let g = FiniteGroup::symmetric(4).unwrap();
        let cd = class_data(&g).unwrap();
        let r = cd.class_count();
        let p = admissible_prime(&g).unwrap();
        let fp = Fp::new(p);
        let mats: Vec<FpMat> = (0..r)
            .map(|i| {
                let mut m = FpMat::zero(r, r);
                for j in 0..r {
                    for k in 0..r {
                        m.set(k, j, cd.structure_constants[i][j][k] % p);
                    }
                }
                m
            })
            .collect();
        for a in &mats {
            for b in &mats {
                assert_eq!(a.mul(b, fp), b.mul(a, fp));
            }
        }
    }

    #[test]
    fn fixed_dual_frozen_cases() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let cd = class_data(&z3).unwrap();
        let table = central_characters(&z3, &cd).unwrap();
        assert_eq!(fixed_dual_count(&cd, &table, &inversion(&z3)).unwrap(), 1);
        assert_eq!(
            fixed_dual_count(&cd, &table, &Automorphism::identity(3)).unwrap(),
            3
        );

        let z4 = FiniteGroup::cyclic(4).unwrap();
        let cd = class_data(&z4).unwrap();
        let table = central_characters(&z4, &cd).unwrap();
        assert_eq!(fixed_dual_count(&cd, &table, &inversion(&z4)).unwrap(), 2);
    }

    #[test]
    fn tbft_frozen_cases() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        for h in 0..6 {
            let rep = verify_tbft(&s3, &s3.inner_automorphism(h).unwrap()).unwrap();
            assert!(rep.pass && rep.brauer_agrees);
            assert_eq!((rep.reidemeister, rep.fixed_dual), (3, 3));
        }
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let rep = verify_tbft(&z4, &inversion(&z4)).unwrap();
        assert!(rep.pass);
        assert_eq!((rep.reidemeister, rep.fixed_dual), (2, 2));
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let rep = verify_tbft(&z3, &inversion(&z3)).unwrap();
        assert!(rep.pass);
        assert_eq!((rep.reidemeister, rep.fixed_dual), (1, 1));
    }

    #[test]
    fn three_way_equality_small_sweep() {
        // a miniature of the acceptance sweep: every automorphism of a few
        // structurally different groups
        let groups = vec![
            FiniteGroup::cyclic(12).unwrap(),
            FiniteGroup::dihedral(5).unwrap(),
            FiniteGroup::symmetric(4).unwrap(),
            FiniteGroup::direct_product(
                &FiniteGroup::cyclic(2).unwrap(),
                &FiniteGroup::cyclic(6).unwrap(),
            )
            .unwrap(),
        ];
        for g in &groups {
            for phi in g.enumerate_automorphisms().unwrap() {
                let rep = verify_tbft(g, &phi).unwrap();
                assert!(rep.pass, "{}: R={} S_f={}", g.name(), rep.reidemeister, rep.fixed_dual);
                assert!(rep.brauer_agrees, "{}: Brauer {}", g.name(), rep.invariant_classes);
            }
        }
    }

    #[test]
    fn fixed_count_is_prime_independent() {
        let groups = vec![
            FiniteGroup::cyclic(5).unwrap(),
            FiniteGroup::dihedral(6).unwrap(),
            FiniteGroup::symmetric(3).unwrap(),
        ];
        for g in &groups {
            let cd = class_data(g).unwrap();
            let p1 = admissible_prime(g).unwrap();
            let p2 = admissible_prime_after(g, p1).unwrap();
            let t1 = central_characters_with_prime(g, &cd, p1).unwrap();
            let t2 = central_characters_with_prime(g, &cd, p2).unwrap();
            for phi in g.enumerate_automorphisms().unwrap() {
                assert_eq!(
                    fixed_dual_count(&cd, &t1, &phi).unwrap(),
                    fixed_dual_count(&cd, &t2, &phi).unwrap(),
                    "{} with primes {} and {}",
                    g.name(),
                    p1,
                    p2
                );
            }
        }
    }

    #[test]
    fn dual_permutation_matches_class_cycle_type() {
        let groups = vec![
            FiniteGroup::cyclic(5).unwrap(),
            FiniteGroup::cyclic(8).unwrap(),
            FiniteGroup::dihedral(4).unwrap(),
        ];
        for g in &groups {
            let cd = class_data(g).unwrap();
            let table = central_characters(g, &cd).unwrap();
            for phi in g.enumerate_automorphisms().unwrap() {
                let sigma = class_permutation(&cd, &phi);
                let pi = dual_permutation(&cd, &table, &phi).unwrap();
                assert_eq!(cycle_type(&sigma), cycle_type(&pi), "{}", g.name());
                // fixed points of every power agree as well
                let r = cd.class_count();
                for k in 1..=6usize {
                    let fixed_sigma = (0..r)
                        .filter(|&j| iterate(&sigma, j, k) == j)
                        .count();
                    let fixed_pi = (0..r).filter(|&j| iterate(&pi, j, k) == j).count();
                    assert_eq!(fixed_sigma, fixed_pi);
                }
            }
        }
    }

    fn iterate(p: &[usize], start: usize, k: usize) -> usize {
        let mut x = start;
        for _ in 0..k {
            x = p[x];
        }
        x
    }

    fn cycle_type(p: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; p.len()];
        let mut lens = Vec::new();
        for s in 0..p.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = p[x];
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable();
        lens
    }

    #[test]
    fn bad_prime_is_rejected() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let cd = class_data(&z3).unwrap();
        assert!(matches!(
            central_characters_with_prime(&z3, &cd, 5),
            Err(DualError::PrimeNotAdmissible { p: 5 })
        ));
        assert!(matches!(
            central_characters_with_prime(&z3, &cd, 9),
            Err(DualError::PrimeNotAdmissible { p: 9 })
        ));
    }

    #[test]
    fn order_cap_is_enforced() {
        let g = FiniteGroup::cyclic(300).unwrap();
        assert!(matches!(
            class_data(&g),
            Err(DualError::OrderCap { order: 300, cap: 256 })
        ));
    }
}
