//! An independent oracle for `R = k[X,Y]/(X,Y)^2`.
//!
//! Modules are rebuilt here from scratch as pairs of dense action matrices
//! over `Z/p`, with `Hom` and `(x)` computed by plain elimination. Because
//! `m^2 = 0`, every first syzygy is semisimple, which gives closed forms for
//! all `Tor` and `Ext` dimensions from `Hom`/tensor dimensions alone. The
//! engine's values are compared against these.

use reltor::corpus::Corpus;
use reltor::homalg::{betti_numbers, ext_dims, tor_dims};
use reltor::linalg::PrimeField;
use reltor::relative::{rel_ext_dims, rel_tor_dims, ExtFlavor, Flavor, Strategy};

const MAX: usize = 6;

type Mat = Vec<Vec<u64>>;

/// Row reduction mod `p`; returns the reduced nonzero rows and their pivots.
fn rref(p: u64, mut rows: Mat) -> (Mat, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] % p != 0) else { continue };
        rows.swap(r, k);
        let inv = pow(rows[r][c], p - 2, p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for k in 0..rows.len() {
            if k != r && rows[k][c] != 0 {
                let t = rows[k][c];
                for j in 0..ncols {
                    rows[k][j] = (rows[k][j] + p * p - t * rows[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn rank(p: u64, rows: Mat) -> usize {
    rref(p, rows).1.len()
}

/// Reduces `v` against a reduced row basis and reads off the coordinates at
/// the non-pivot positions.
fn quotient_coords(p: u64, basis: &(Mat, Vec<usize>), v: &[u64]) -> Vec<u64> {
    let mut v = v.to_vec();
    for (row, &c) in basis.0.iter().zip(&basis.1) {
        let t = v[c];
        if t != 0 {
            for j in 0..v.len() {
                v[j] = (v[j] + p * p - t * row[j] % p) % p;
            }
        }
    }
    (0..v.len()).filter(|j| !basis.1.contains(j)).map(|j| v[j]).collect()
}

/// A module over `R`: `acts[g][i][j]` is the `e_i` coefficient of `g e_j`
/// for `g` in `x, y`.
#[derive(Clone, Debug)]
struct Dense {
    dim: usize,
    acts: [Mat; 2],
}

impl Dense {
    fn zero_action(dim: usize) -> Self {
        Dense { dim, acts: [vec![vec![0; dim]; dim], vec![vec![0; dim]; dim]] }
    }

    fn free_rank_one() -> Self {
        let mut r = Self::zero_action(3);
        r.acts[0][1][0] = 1;
        r.acts[1][2][0] = 1;
        r
    }

    fn dual(&self) -> Self {
        let t = |a: &Mat| (0..self.dim).map(|i| (0..self.dim).map(|j| a[j][i]).collect()).collect();
        Dense { dim: self.dim, acts: [t(&self.acts[0]), t(&self.acts[1])] }
    }

    /// `dim m M`
    fn radical(&self, p: u64) -> usize {
        let cols: Mat = (0..2).flat_map(|g| (0..self.dim).map(move |j| (0..self.dim).map(|i| self.acts[g][i][j]).collect())).collect();
        if cols.is_empty() {
            0
        } else {
            rank(p, cols)
        }
    }

    /// `dim soc M = dim {v : x v = y v = 0}`
    fn socle(&self, p: u64) -> usize {
        let rows: Mat = self.acts.iter().flat_map(|a| a.iter().cloned()).collect();
        self.dim - if self.dim == 0 { 0 } else { rank(p, rows) }
    }

    fn beta0(&self, p: u64) -> usize {
        self.dim - self.radical(p)
    }

    /// The first syzygy sits in `m F`, hence is `k^{3 b_0 - dim}`.
    fn beta(&self, p: u64, i: usize) -> usize {
        let b0 = self.beta0(p);
        match i {
            0 => b0,
            _ => (3 * b0 - self.dim) << (i - 1),
        }
    }
}

fn hom(p: u64, a: &Dense, b: &Dense) -> Dense {
    let (da, db) = (a.dim, b.dim);
    let nvars = da * db;
    if nvars == 0 {
        return Dense::zero_action(0);
    }
    let var = |r: usize, s: usize| r * da + s;
    // phi a_g - b_g phi = 0
    let mut eqs = Vec::new();
    for g in 0..2 {
        for r in 0..db {
            for c in 0..da {
                let mut row = vec![0; nvars];
                for s in 0..da {
                    row[var(r, s)] = (row[var(r, s)] + a.acts[g][s][c]) % p;
                }
                for s in 0..db {
                    row[var(s, c)] = (row[var(s, c)] + p - b.acts[g][r][s] % p) % p;
                }
                eqs.push(row);
            }
        }
    }
    let (red, pivots) = rref(p, eqs);
    let free: Vec<usize> = (0..nvars).filter(|v| !pivots.contains(v)).collect();
    let basis: Vec<Vec<u64>> = free
        .iter()
        .map(|&fv| {
            let mut v = vec![0; nvars];
            v[fv] = 1;
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = (p - row[fv]) % p;
            }
            v
        })
        .collect();
    let h = basis.len();
    let mut out = Dense::zero_action(h);
    for g in 0..2 {
        for (j, phi) in basis.iter().enumerate() {
            // (g phi)(e_c) = phi(g e_c)
            let mut gphi = vec![0; nvars];
            for r in 0..db {
                for c in 0..da {
                    gphi[var(r, c)] = (0..da).map(|s| phi[var(r, s)] * a.acts[g][s][c]).sum::<u64>() % p;
                }
            }
            for (i, &fv) in free.iter().enumerate() {
                out.acts[g][i][j] = gphi[fv];
            }
        }
    }
    out
}

fn tensor(p: u64, a: &Dense, b: &Dense) -> Dense {
    let (da, db) = (a.dim, b.dim);
    let n = da * db;
    if n == 0 {
        return Dense::zero_action(0);
    }
    let idx = |u: usize, v: usize| u * db + v;
    let mut rels = Vec::new();
    for g in 0..2 {
        for u in 0..da {
            for v in 0..db {
                let mut row = vec![0; n];
                for u2 in 0..da {
                    row[idx(u2, v)] = (row[idx(u2, v)] + a.acts[g][u2][u]) % p;
                }
                for v2 in 0..db {
                    row[idx(u, v2)] = (row[idx(u, v2)] + p - b.acts[g][v2][v] % p) % p;
                }
                rels.push(row);
            }
        }
    }
    let basis = rref(p, rels);
    let reps: Vec<usize> = (0..n).filter(|j| !basis.1.contains(j)).collect();
    let mut out = Dense::zero_action(reps.len());
    for g in 0..2 {
        for (j, &q) in reps.iter().enumerate() {
            let (u, v) = (q / db, q % db);
            let mut w = vec![0; n];
            for u2 in 0..da {
                w[idx(u2, v)] = a.acts[g][u2][u] % p;
            }
            for (i, c) in quotient_coords(p, &basis, &w).into_iter().enumerate() {
                out.acts[g][i][j] = c;
            }
        }
    }
    out
}

/// `dim Tor_i(X, Y)` from `0 -> k^{b_1} -> R^{b_0} -> X -> 0`.
fn tor_oracle(p: u64, x: &Dense, y: &Dense, i: usize) -> usize {
    let (b0, b1) = (x.beta(p, 0), x.beta(p, 1));
    match i {
        0 => tensor(p, x, y).dim,
        1 => b1 * y.beta0(p) + tensor(p, x, y).dim - b0 * y.dim,
        _ => b1 * y.beta(p, i - 1),
    }
}

/// `dim Ext^i(k, Y)`, from `0 -> k^2 -> R -> k -> 0`.
fn ext_k(p: u64, y: &Dense, i: usize) -> usize {
    let s = y.socle(p);
    match i {
        0 => s,
        1 => 3 * s - y.dim,
        _ => (3 * s - y.dim) << (i - 1),
    }
}

fn ext_oracle(p: u64, x: &Dense, y: &Dense, i: usize) -> usize {
    let (b0, b1) = (x.beta(p, 0), x.beta(p, 1));
    let h = hom(p, x, y).dim;
    match i {
        0 => h,
        1 => b1 * y.socle(p) + h - b0 * y.dim,
        _ => b1 * ext_k(p, y, i - 1),
    }
}

/// The corpus, rebuilt independently, in the engine's order.
fn oracle_corpus(p: u64) -> Vec<(&'static str, Dense)> {
    let r = Dense::free_rank_one();
    let w = r.dual();
    let ww = tensor(p, &w, &w);
    vec![("R", r), ("k", Dense::zero_action(1)), ("m", Dense::zero_action(2)), ("omega", w), ("omega_tensor_omega", ww)]
}

fn engine(p: u32) -> Corpus<PrimeField> {
    Corpus::preset(PrimeField::new(p).unwrap(), "square_zero_2vars").unwrap()
}

#[test]
fn oracle_reproduces_hand_values() {
    let p = 5;
    let c = oracle_corpus(p);
    let w = &c[3].1;
    assert_eq!((w.dim, w.beta0(p)), (3, 2));
    assert_eq!(c[4].1.dim, 4);
    assert_eq!(c[4].1.radical(p), 0);
    assert_eq!(hom(p, w, w).dim, 3);
    assert_eq!(hom(p, &c[1].1, w).dim, 1);
    let k = &c[1].1;
    assert_eq!((0..4).map(|i| tor_oracle(p, k, k, i)).collect::<Vec<_>>(), vec![1, 2, 4, 8]);
    assert_eq!((0..4).map(|i| ext_oracle(p, k, k, i)).collect::<Vec<_>>(), vec![1, 2, 4, 8]);
    // Bass numbers of R agree with the Betti numbers of omega
    assert_eq!((0..3).map(|i| ext_oracle(p, k, &c[0].1, i)).collect::<Vec<_>>(), vec![2, 3, 6]);
}

#[test]
fn betti_numbers_match_oracle() {
    for p in [2u32, 5] {
        let e = engine(p);
        for (name, m) in oracle_corpus(p as u64) {
            let want: Vec<usize> = (0..=MAX).map(|i| m.beta(p as u64, i)).collect();
            assert_eq!(betti_numbers(&e.get(name).unwrap(), MAX), want, "{name} over F_{p}");
        }
    }
}

#[test]
fn absolute_tor_and_ext_match_oracle() {
    for p in [2u32, 5] {
        let e = engine(p);
        let o = oracle_corpus(p as u64);
        for (a, x) in &o {
            for (b, y) in &o {
                let (m, n) = (e.get(a).unwrap(), e.get(b).unwrap());
                let tor: Vec<usize> = (0..=MAX).map(|i| tor_oracle(p as u64, x, y, i)).collect();
                assert_eq!(tor_dims(&m, &n, MAX).unwrap(), tor, "Tor({a},{b}) over F_{p}");
                let ext: Vec<usize> = (0..=4).map(|i| ext_oracle(p as u64, x, y, i)).collect();
                assert_eq!(ext_dims(&m, &n, 4).unwrap(), ext, "Ext({a},{b}) over F_{p}");
            }
        }
    }
}

#[test]
fn relative_tor_matches_oracle() {
    for p in [2u32, 5] {
        let q = p as u64;
        let e = engine(p);
        let o = oracle_corpus(q);
        let w = &o[3].1;
        for (a, x) in &o {
            for (b, y) in &o {
                let first: Vec<usize> = (0..=MAX).map(|i| tor_oracle(q, &hom(q, w, x), &tensor(q, w, y), i)).collect();
                let second: Vec<usize> = (0..=MAX).map(|i| tor_oracle(q, &hom(q, w, y), &tensor(q, w, x), i)).collect();
                let (m, n) = (e.get(a).unwrap(), e.get(b).unwrap());
                for flavor in Flavor::ALL {
                    let want = if flavor.resolves_first() { &first } else { &second };
                    let got = rel_tor_dims(&e.omega(), flavor, &m, &n, MAX, Strategy::Direct).unwrap();
                    assert_eq!(&got, want, "{flavor} ({a},{b}) over F_{p}");
                }
            }
        }
    }
}

#[test]
fn relative_ext_matches_oracle() {
    let p = 5u64;
    let e = engine(5);
    let o = oracle_corpus(p);
    let w = &o[3].1;
    for (a, x) in &o {
        for (b, y) in &o {
            let (m, n) = (e.get(a).unwrap(), e.get(b).unwrap());
            let (hx, hy) = (hom(p, w, x), hom(p, w, y));
            let pc: Vec<usize> = (0..=3).map(|i| ext_oracle(p, &hx, &hy, i)).collect();
            assert_eq!(rel_ext_dims(ExtFlavor::PcM, &e.omega(), &m, &n, 3, Strategy::Direct).unwrap(), pc, "Ext_PC({a},{b})");
            let (tx, ty) = (tensor(p, w, x), tensor(p, w, y));
            let mic: Vec<usize> = (0..=3).map(|i| ext_oracle(p, &tx, &ty, i)).collect();
            assert_eq!(rel_ext_dims(ExtFlavor::MIc, &e.omega(), &m, &n, 3, Strategy::Direct).unwrap(), mic, "Ext_MIC({a},{b})");
        }
    }
}
