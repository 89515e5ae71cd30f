//! Linear algebra over a prime field F_p for p < 2^32-ish (products are
//! taken through u128, so any p below 2^63 is safe; the dual module only ever
//! uses p < 10^6).
//!
//! Everything here is deterministic: elimination pivots are chosen by
//! position and root lists are returned sorted.

/// The field F_p. Cheap copyable handle around the modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Fp {
        assert!(p >= 2);
        Fp { p }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse by Fermat; requires a != 0 and p prime.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "division by zero mod {}", self.p);
        self.pow(a, self.p - 2)
    }
}

/// Dense matrix over F_p, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMat {
    pub rows: usize,
    pub cols: usize,
    pub e: Vec<u64>,
}

impl FpMat {
    pub fn zero(rows: usize, cols: usize) -> FpMat {
        FpMat { rows, cols, e: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> FpMat {
        let mut m = FpMat::zero(n, n);
        for i in 0..n {
            m.e[i * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.e[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.e[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &FpMat, fp: Fp) -> FpMat {
        assert_eq!(self.cols, other.rows);
        let mut out = FpMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = fp.add(out.at(i, j), fp.mul(a, other.at(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64], fp: Fp) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for j in 0..self.cols {
                    acc = fp.add(acc, fp.mul(self.at(i, j), v[j]));
                }
                acc
            })
            .collect()
    }

    /// self - λI (square only).
    pub fn sub_scalar_identity(&self, lambda: u64, fp: Fp) -> FpMat {
        assert_eq!(self.rows, self.cols);
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = fp.sub(out.at(i, i), lambda);
            out.set(i, i, v);
        }
        out
    }
}

/// Reduced row echelon form in place; returns the pivot column of each pivot
/// row in order.
pub fn rref(m: &mut FpMat, fp: Fp) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&i| m.at(i, col) != 0) else {
            continue;
        };
        if p != row {
            for j in 0..m.cols {
                let (a, b) = (m.at(row, j), m.at(p, j));
                m.set(row, j, b);
                m.set(p, j, a);
            }
        }
        let inv = fp.inv(m.at(row, col));
        for j in 0..m.cols {
            let v = fp.mul(m.at(row, j), inv);
            m.set(row, j, v);
        }
        for i in 0..m.rows {
            if i != row && m.at(i, col) != 0 {
                let f = m.at(i, col);
                for j in 0..m.cols {
                    let v = fp.sub(m.at(i, j), fp.mul(f, m.at(row, j)));
                    m.set(i, j, v);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Basis of the null space {v : M v = 0} as column vectors.
pub fn kernel_basis(m: &FpMat, fp: Fp) -> Vec<Vec<u64>> {
    let mut r = m.clone();
    let pivots = rref(&mut r, fp);
    let pivot_set: Vec<Option<usize>> = {
        let mut v = vec![None; m.cols];
        for (row, &col) in pivots.iter().enumerate() {
            v[col] = Some(row);
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..m.cols {
        if pivot_set[free].is_some() {
            continue;
        }
        let mut v = vec![0u64; m.cols];
        v[free] = 1;
        for col in 0..m.cols {
            if let Some(row) = pivot_set[col] {
                v[col] = fp.neg(r.at(row, free));
            }
        }
        basis.push(v);
    }
    basis
}

/// Solve B·X = Y where B (r×d) has full column rank; Y is r×k. Returns the
/// d×k coordinate matrix, or None if the system is inconsistent (Y has a
/// column outside the column space of B).
pub fn solve_in_basis(b: &FpMat, y: &FpMat, fp: Fp) -> Option<FpMat> {
    assert_eq!(b.rows, y.rows);
    let (r, d, k) = (b.rows, b.cols, y.cols);
    let mut aug = FpMat::zero(r, d + k);
    for i in 0..r {
        for j in 0..d {
            aug.set(i, j, b.at(i, j));
        }
        for j in 0..k {
            aug.set(i, d + j, y.at(i, j));
        }
    }
    let pivots = rref(&mut aug, fp);
    // full column rank demanded: pivots must be exactly 0..d
    if pivots.len() < d || pivots[..d] != (0..d).collect::<Vec<_>>()[..] {
        return None;
    }
    // consistency: no pivot beyond column d
    if pivots.len() > d {
        return None;
    }
    let mut x = FpMat::zero(d, k);
    for i in 0..d {
        for j in 0..k {
            x.set(i, j, aug.at(i, d + j));
        }
    }
    Some(x)
}

/// Characteristic polynomial det(xI - M) over F_p, ascending coefficients,
/// monic. Hessenberg reduction followed by the leading-minor recurrence;
/// only field inversions are used, so any prime works.
pub fn char_poly_mod_p(m: &FpMat, fp: Fp) -> Vec<u64> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    if n == 0 {
        return vec![1];
    }
    let mut h = m.clone();
    // reduce to upper Hessenberg by similarity transforms
    for col in 0..n.saturating_sub(2) {
        let Some(piv) = (col + 1..n).find(|&i| h.at(i, col) != 0) else {
            continue;
        };
        if piv != col + 1 {
            for j in 0..n {
                let (a, b) = (h.at(col + 1, j), h.at(piv, j));
                h.set(col + 1, j, b);
                h.set(piv, j, a);
            }
            for i in 0..n {
                let (a, b) = (h.at(i, col + 1), h.at(i, piv));
                h.set(i, col + 1, b);
                h.set(i, piv, a);
            }
        }
        let inv = fp.inv(h.at(col + 1, col));
        for i in col + 2..n {
            let f = fp.mul(h.at(i, col), inv);
            if f == 0 {
                continue;
            }
            for j in 0..n {
                let v = fp.sub(h.at(i, j), fp.mul(f, h.at(col + 1, j)));
                h.set(i, j, v);
            }
            for i2 in 0..n {
                let v = fp.add(h.at(i2, col + 1), fp.mul(f, h.at(i2, i)));
                h.set(i2, col + 1, v);
            }
        }
    }
    // p_m(x) = (x - H[m][m]) p_{m-1}(x) - Σ_i H[i][m] (Π_{j=i+1..=m} H[j][j-1]) p_{i-1}(x)
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for mi in 0..n {
        let prev = &polys[mi];
        let mut cur = vec![0u64; prev.len() + 1];
        for (i, &c) in prev.iter().enumerate() {
            cur[i + 1] = fp.add(cur[i + 1], c);
            cur[i] = fp.sub(cur[i], fp.mul(h.at(mi, mi), c));
        }
        let mut subdiag = 1u64;
        for i in (0..mi).rev() {
            subdiag = fp.mul(subdiag, h.at(i + 1, i));
            if subdiag == 0 {
                break;
            }
            let coeff = fp.mul(h.at(i, mi), subdiag);
            if coeff == 0 {
                continue;
            }
            for (t, &c) in polys[i].iter().enumerate() {
                cur[t] = fp.sub(cur[t], fp.mul(coeff, c));
            }
        }
        polys.push(cur);
    }
    polys.pop().unwrap()
}

fn poly_trim(f: &mut Vec<u64>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], fp: Fp) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = fp.inv(m[dm]);
    while r.len() > dm {
        let k = r.len() - 1 - dm;
        let f = fp.mul(*r.last().unwrap(), lead_inv);
        for i in 0..=dm {
            let v = fp.sub(r[k + i], fp.mul(f, m[i]));
            r[k + i] = v;
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], fp: Fp) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = fp.add(prod[i + j], fp.mul(x, y));
        }
    }
    poly_rem(&prod, m, fp)
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], fp: Fp) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, fp);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, fp);
        }
        b = poly_mulmod(&b, &b, m, fp);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], fp: Fp) -> Vec<u64> {
    let mut x: Vec<u64> = a.to_vec();
    let mut y: Vec<u64> = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, fp);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let inv = fp.inv(lead);
        for c in &mut x {
            *c = fp.mul(*c, inv);
        }
    }
    x
}

/// All roots of f in F_p, each listed once, sorted ascending.
///
/// gcd with x^p - x isolates the distinct linear factors; they are then split
/// by the usual (x+a)^{(p-1)/2} - 1 trick with a deterministic sequence of
/// shifts a = 1, 2, 3, ..., so results are reproducible.
pub fn roots_mod_p(f: &[u64], fp: Fp) -> Vec<u64> {
    let mut f: Vec<u64> = f.to_vec();
    poly_trim(&mut f);
    assert!(!f.is_empty(), "zero polynomial has every root");
    // strip roots at 0 first so the shift trick can assume f(0) != 0
    let mut roots = Vec::new();
    while f.len() > 1 && f[0] == 0 {
        if roots.is_empty() {
            roots.push(0);
        }
        f.remove(0);
    }
    if f.len() == 1 {
        roots.sort_unstable();
        return roots;
    }
    // x^p mod f, then gcd(x^p - x, f): product of distinct linear factors
    let xp = poly_powmod(&[0, 1], fp.p, &f, fp);
    let mut xp_minus_x = xp;
    while xp_minus_x.len() < 2 {
        xp_minus_x.push(0);
    }
    xp_minus_x[1] = fp.sub(xp_minus_x[1], 1);
    let linear_part = poly_gcd(&xp_minus_x, &f, fp);
    // each stack entry carries its own next shift to try: for a squarefree
    // product of >= 2 distinct linear factors some a in 0..p always splits
    // (a = -r isolates the root r when the others are not all non-residues,
    // and distinct roots disagree on some quadratic character otherwise), so
    // running out of residues for one factor is a genuine bug
    let mut stack = vec![(linear_part, 1u64)];
    while let Some((g, shift)) = stack.pop() {
        if g.len() <= 1 {
            continue;
        }
        if g.len() == 2 {
            // g = c0 + c1 x, monic after gcd: root = -c0
            roots.push(fp.neg(g[0]));
            continue;
        }
        if fp.p == 2 {
            // tiny field: test both elements directly
            for a in 0..2u64 {
                let mut acc = 0u64;
                for &c in g.iter().rev() {
                    acc = fp.add(fp.mul(acc, a), c);
                }
                if acc == 0 {
                    roots.push(a);
                }
            }
            continue;
        }
        // split g by gcd(g, (x+a)^{(p-1)/2} - 1); a = p plays the role of 0
        let a = shift % fp.p;
        assert!(
            shift <= fp.p,
            "quadratic-character splitting exhausted all shifts"
        );
        let half = poly_powmod(&[a, 1], (fp.p - 1) / 2, &g, fp);
        let mut half_minus_one = half;
        if half_minus_one.is_empty() {
            half_minus_one.push(0);
        }
        half_minus_one[0] = fp.sub(half_minus_one[0], 1);
        let h = poly_gcd(&half_minus_one, &g, fp);
        if h.len() <= 1 || h.len() == g.len() {
            // unlucky shift: push back unchanged, next shift differs
            stack.push((g, shift + 1));
            continue;
        }
        let mut quotient = poly_divide_exact(&g, &h, fp);
        poly_trim(&mut quotient);
        stack.push((h, 1));
        stack.push((quotient, 1));
    }
    roots.sort_unstable();
    roots.dedup();
    roots
}

fn poly_divide_exact(a: &[u64], b: &[u64], fp: Fp) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let mut q = vec![0u64; r.len().saturating_sub(db)];
    let lead_inv = fp.inv(b[db]);
    while r.len() > db {
        let k = r.len() - 1 - db;
        let f = fp.mul(*r.last().unwrap(), lead_inv);
        q[k] = f;
        for i in 0..=db {
            let v = fp.sub(r[k + i], fp.mul(f, b[i]));
            r[k + i] = v;
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    debug_assert!(r.is_empty(), "division was not exact");
    q
}

/// FNV-1a over arbitrary bytes; used to derive deterministic seeds from
/// group tables.
pub fn fnv1a64(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
