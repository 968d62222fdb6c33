//! Sparse rational matrices, exact rank, and the per-weight dimension
//! report for the Int-Ser relations.
//!
//! Two exact rank routes are provided. [`QMatrix::rank_rational`] is plain
//! sparse Gaussian elimination over `Q`. [`QMatrix::certified_rank`] runs
//! dense elimination modulo word-sized primes (after a random row
//! compression) and then proves the result over `Q`: the modular rank is a
//! lower bound for the rational rank, and kernel vectors lifted by rational
//! reconstruction and checked exactly against every row give the matching
//! upper bound.

use std::io::{self, Write};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{MzvError, Result};
use crate::lincomb::Q;
use crate::relations::{basis_size, enumerate_relations, RelationRecord};
use crate::word::Word;

type SparseRow = Vec<(usize, Q)>;

/// A matrix over `Q` stored as sparse rows with increasing column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    cols: usize,
    rows: Vec<SparseRow>,
}

impl QMatrix {
    pub fn new(cols: usize) -> Self {
        QMatrix { cols, rows: Vec::new() }
    }

    /// Builds from dense rows; every row must have the same length.
    pub fn from_dense(rows: &[Vec<Q>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = QMatrix::new(cols);
        for r in rows {
            m.push_dense(r)?;
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        let q: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect();
        QMatrix::from_dense(&q)
    }

    pub fn push_dense(&mut self, row: &[Q]) -> Result<()> {
        if row.len() != self.cols {
            return Err(MzvError::RaggedRow { row: self.rows.len(), got: row.len(), expected: self.cols });
        }
        self.rows.push(row.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (c, x.clone())).collect());
        Ok(())
    }

    /// Pushes a sparse row; entries may come in any order, zeros are dropped.
    pub fn push_sparse(&mut self, mut row: SparseRow) -> Result<()> {
        if let Some((c, _)) = row.iter().find(|(c, _)| *c >= self.cols) {
            return Err(MzvError::RaggedRow { row: self.rows.len(), got: c + 1, expected: self.cols });
        }
        row.retain(|(_, x)| !x.is_zero());
        row.sort_by_key(|(c, _)| *c);
        if row.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(MzvError::InvalidArgument("repeated column in sparse row".into()));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn row_dense(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.cols];
        for (c, x) in &self.rows[i] {
            v[*c] = x.clone();
        }
        v
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Exact rank. Uses the certified modular route and falls back to
    /// rational elimination if no certificate is found.
    pub fn rank(&self) -> usize {
        match self.certified_rank(DEFAULT_MAX_PRIMES) {
            Some(c) => c.rank,
            None => self.rank_rational(),
        }
    }

    /// Exact rank by sparse Gaussian elimination over `Q`. Rows are taken in
    /// order of increasing support (ties by position) and each is reduced
    /// against the pivots found so far.
    pub fn rank_rational(&self) -> usize {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| (self.rows[i].len(), i));
        let mut pivots: Vec<Option<SparseRow>> = vec![None; self.cols];
        let mut rank = 0;
        for i in order {
            let mut row = self.rows[i].clone();
            while let Some((lead, coeff)) = row.first().cloned() {
                match &pivots[lead] {
                    Some(p) => row = axpy(&row, &-coeff, p),
                    None => {
                        let inv = coeff.recip();
                        for (_, x) in row.iter_mut() {
                            *x *= &inv;
                        }
                        pivots[lead] = Some(row);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        rank
    }

    /// Rank modulo `p`, or `None` if some denominator vanishes mod `p`.
    pub fn rank_mod_p(&self, p: u64) -> Option<usize> {
        let f = Fp::new(p);
        let rows = self.reduce_mod(&f)?;
        Some(rref_mod(&f, rows, self.cols).pivots.len())
    }

    fn reduce_mod(&self, f: &Fp) -> Option<Vec<Vec<(usize, u64)>>> {
        self.rows.iter().map(|r| r.iter().map(|(c, x)| Some((*c, f.from_q(x)?))).collect()).collect()
    }

    /// Rank over `Q` with a proof: see the module documentation. Tries up to
    /// `max_primes` primes and returns `None` if no certificate was found.
    pub fn certified_rank(&self, max_primes: usize) -> Option<RankCertificate> {
        let n = self.cols;
        if n == 0 || self.rows.is_empty() {
            return Some(RankCertificate { rank: 0, primes_used: 0, kernel: Vec::new() });
        }
        let mut best: Option<ModularKernel> = None;
        let mut modulus = BigInt::one();
        let mut crt: Vec<Vec<BigInt>> = Vec::new();
        let mut tried = 0;
        let mut candidate = PRIME_START;
        while tried < max_primes {
            candidate = prev_prime(candidate - 2);
            let f = Fp::new(candidate);
            let Some(rows) = self.reduce_mod(&f) else { continue };
            tried += 1;
            let compressed = compress(&f, &rows, n, candidate);
            let ech = rref_dense(&f, compressed, n);
            let kern = ModularKernel::from_rref(&f, &ech, n);
            let restart = match &best {
                None => true,
                Some(b) if kern.pivots.len() > b.pivots.len() => true,
                Some(b) if kern.pivots != b.pivots => continue,
                Some(_) => false,
            };
            let p = BigInt::from(candidate);
            if restart {
                modulus = p.clone();
                crt = kern.vectors.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
                best = Some(kern);
            } else {
                for (acc, v) in crt.iter_mut().zip(&kern.vectors) {
                    for (a, &x) in acc.iter_mut().zip(v) {
                        *a = crt_combine(a, &modulus, x, candidate);
                    }
                }
                modulus *= &p;
            }
            let best_ref = best.as_ref().unwrap();
            if let Some(kernel) = reconstruct_all(&crt, &modulus) {
                if self.annihilates(&kernel) {
                    return Some(RankCertificate { rank: best_ref.pivots.len(), primes_used: tried, kernel });
                }
            }
        }
        None
    }

    /// Every row is orthogonal to every vector.
    fn annihilates(&self, vectors: &[Vec<Q>]) -> bool {
        vectors.iter().all(|v| {
            self.rows.iter().all(|r| {
                let mut acc = Q::zero();
                for (c, x) in r {
                    if !v[*c].is_zero() {
                        acc += x * &v[*c];
                    }
                }
                acc.is_zero()
            })
        })
    }

    /// Writes `header` (if non-empty) and one line per row, entries as
    /// `p/q` or integers.
    pub fn write_csv(&self, out: &mut impl Write, header: &[String]) -> io::Result<()> {
        if !header.is_empty() {
            writeln!(out, "{}", header.join(","))?;
        }
        for i in 0..self.rows.len() {
            write_csv_row(out, &self.row_dense(i))?;
        }
        Ok(())
    }
}

pub fn write_csv_row<W: Write + ?Sized>(out: &mut W, row: &[Q]) -> io::Result<()> {
    let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
    writeln!(out, "{}", cells.join(","))
}

/// CSV header for the basis of `weight`: the words as 0/1 strings.
pub fn basis_header(weight: usize) -> Vec<String> {
    Word::admissible_basis(weight).iter().map(|w| w.to_string()).collect()
}

fn axpy(row: &[(usize, Q)], a: &Q, p: &[(usize, Q)]) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < p.len() {
        let ci = row.get(i).map_or(usize::MAX, |x| x.0);
        let cj = p.get(j).map_or(usize::MAX, |x| x.0);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, a * &p[j].1));
            j += 1;
        } else {
            let x = &row[i].1 + a * &p[j].1;
            if !x.is_zero() {
                out.push((ci, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Proof data for [`QMatrix::certified_rank`]: `ncols - rank` rational
/// kernel vectors, each with a 1 in its own free column and 0 in the others.
#[derive(Debug, Clone)]
pub struct RankCertificate {
    pub rank: usize,
    pub primes_used: usize,
    pub kernel: Vec<Vec<Q>>,
}

const DEFAULT_MAX_PRIMES: usize = 24;
const PRIME_START: u64 = (1 << 62) + 1;

/// Arithmetic modulo an odd prime below `2^62`, with Montgomery
/// multiplication for the elimination inner loop.
struct Fp {
    p: u64,
    /// `-p^{-1} mod 2^64`
    pinv_neg: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl Fp {
    fn new(p: u64) -> Self {
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Fp { p, pinv_neg: inv.wrapping_neg(), r2 }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pinv_neg);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    /// `x·2^64 mod p`, so that `mont_mul(to_mont(a), b) = a·b`.
    fn to_mont(&self, x: u64) -> u64 {
        self.redc(x as u128 * self.r2 as u128)
    }

    #[inline]
    fn mont_mul(&self, a_mont: u64, b: u64) -> u64 {
        self.redc(a_mont as u128 * b as u128)
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn from_big(&self, x: &BigInt) -> u64 {
        let r = x.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("reduced")
    }

    fn from_q(&self, x: &Q) -> Option<u64> {
        let d = self.from_big(x.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(self.from_big(x.numer()), self.inv(d)))
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = 1u64;
        let (mut base, mut e) = (a, d);
        while e > 0 {
            if e & 1 == 1 {
                x = mulmod(x, base);
            }
            base = mulmod(base, base);
            e >>= 1;
        }
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest prime `≤ n` (for odd `n`).
fn prev_prime(mut n: u64) -> u64 {
    while !is_prime(n) {
        n -= 2;
    }
    n
}

/// Replaces a tall matrix by `ncols + 16` random combinations of its rows.
/// The rank can only drop, and the kernel can only grow.
fn compress(f: &Fp, rows: &[Vec<(usize, u64)>], n: usize, seed: u64) -> Vec<Vec<u64>> {
    let dense = |r: &Vec<(usize, u64)>| {
        let mut v = vec![0u64; n];
        for &(c, x) in r {
            v[c] = x;
        }
        v
    };
    let target = n + 16;
    if rows.len() <= target {
        return rows.iter().map(dense).collect();
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = vec![vec![0u64; n]; target];
    for r in rows {
        for acc in out.iter_mut() {
            let c = f.to_mont(rng.gen_range(1..f.p));
            for &(col, x) in r {
                let t = acc[col] + f.mont_mul(c, x);
                acc[col] = if t >= f.p { t - f.p } else { t };
            }
        }
    }
    out
}

struct Echelon {
    /// Reduced rows; row `i` has a 1 in column `pivots[i]` and 0 in every
    /// other pivot column.
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

/// Gauss-Jordan elimination modulo `p`, pivoting on the leftmost nonzero
/// column of each incoming row.
fn rref_mod(f: &Fp, input: Vec<Vec<(usize, u64)>>, n: usize) -> Echelon {
    let dense: Vec<Vec<u64>> = input
        .into_iter()
        .map(|r| {
            let mut v = vec![0u64; n];
            for (c, x) in r {
                v[c] = x;
            }
            v
        })
        .collect();
    rref_dense(f, dense, n)
}

fn eliminate(f: &Fp, target: &mut [u64], pivot_row: &[u64], coeff: u64, from: usize) {
    let c = f.to_mont(f.neg(coeff));
    for (t, &x) in target[from..].iter_mut().zip(&pivot_row[from..]) {
        if x != 0 {
            let s = *t + f.mont_mul(c, x);
            *t = if s >= f.p { s - f.p } else { s };
        }
    }
}

fn rref_dense(f: &Fp, input: Vec<Vec<u64>>, n: usize) -> Echelon {
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut row in input {
        for (idx, &pc) in pivots.iter().enumerate() {
            let c = row[pc];
            if c != 0 {
                eliminate(f, &mut row, &rows[idx], c, 0);
            }
        }
        let Some(lead) = row.iter().position(|&x| x != 0) else { continue };
        let inv = f.to_mont(f.inv(row[lead]));
        for x in row.iter_mut() {
            if *x != 0 {
                *x = f.mont_mul(inv, *x);
            }
        }
        for existing in rows.iter_mut() {
            let c = existing[lead];
            if c != 0 {
                eliminate(f, existing, &row, c, 0);
            }
        }
        rows.push(row);
        pivots.push(lead);
        if rows.len() == n {
            break;
        }
    }
    Echelon { rows, pivots }
}

struct ModularKernel {
    pivots: Vec<usize>,
    vectors: Vec<Vec<u64>>,
}

impl ModularKernel {
    fn from_rref(f: &Fp, e: &Echelon, n: usize) -> Self {
        let mut is_pivot = vec![false; n];
        for &c in &e.pivots {
            is_pivot[c] = true;
        }
        let mut sorted_pivots = e.pivots.clone();
        sorted_pivots.sort_unstable();
        let mut vectors = Vec::new();
        for free in (0..n).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; n];
            v[free] = 1;
            for (row, &pc) in e.rows.iter().zip(&e.pivots) {
                v[pc] = f.neg(row[free]);
            }
            vectors.push(v);
        }
        ModularKernel { pivots: sorted_pivots, vectors }
    }
}

fn crt_combine(a: &BigInt, m: &BigInt, x: u64, p: u64) -> BigInt {
    // find t with a + m·t ≡ x (mod p)
    let f = Fp::new(p);
    let am = f.from_big(a);
    let mm = f.from_big(m);
    let diff = (x + p - am) % p;
    let t = f.mul(diff, f.inv(mm));
    a + m * BigInt::from(t)
}

/// `a/b` with `a ≡ b·x (mod m)` and `|a|, b ≤ sqrt(m/2)`, if one exists.
fn rational_reconstruct(x: &BigInt, m: &BigInt) -> Option<Q> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let q = Q::new(r1, t1);
    if q.denom().gcd(m) != BigInt::one() {
        return None;
    }
    Some(q)
}

fn reconstruct_all(residues: &[Vec<BigInt>], m: &BigInt) -> Option<Vec<Vec<Q>>> {
    residues
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| if x.sign() == Sign::NoSign { Some(Q::zero()) } else { rational_reconstruct(x, m) })
                .collect()
        })
        .collect()
}

/// `d_w` from `d_w = d_{w-2} + d_{w-3}`, `d_0 = 1`, `d_1 = 0`, `d_2 = 1`.
pub fn conjectural_dim(weight: usize) -> u64 {
    let mut d = vec![1u64, 0, 1];
    while d.len() <= weight {
        let k = d.len();
        d.push(d[k - 2] + d[k - 3]);
    }
    d[weight]
}

/// Stacks the coefficient vectors of `records`, all of weight `weight`.
pub fn relation_matrix(weight: usize, records: &[RelationRecord]) -> Result<QMatrix> {
    let mut m = QMatrix::new(basis_size(weight));
    for r in records {
        if r.weight() != weight {
            return Err(MzvError::InvalidArgument(format!("relation of weight {} in a weight-{weight} matrix", r.weight())));
        }
        m.push_sparse(r.vector.clone())?;
    }
    Ok(m)
}

/// One line of the dimension table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionRow {
    pub weight: usize,
    pub basis_size: usize,
    pub relations: usize,
    pub rank: usize,
    pub dim: usize,
    pub expected: u64,
}

impl DimensionRow {
    pub fn matches(&self) -> bool {
        self.dim as u64 == self.expected
    }
}

/// Basis size, rank of all Int-Ser relations, and the resulting dimension.
pub fn dimension_report(weight: u32) -> Result<DimensionRow> {
    if weight < 2 {
        return Err(MzvError::WeightTooSmall { min: 2, got: weight });
    }
    let w = weight as usize;
    let records = enumerate_relations(weight, true)?;
    let m = relation_matrix(w, &records)?;
    let rank = m.rank();
    let basis = basis_size(w);
    Ok(DimensionRow { weight: w, basis_size: basis, relations: records.len(), rank, dim: basis - rank, expected: conjectural_dim(w) })
}
