use super::field::Field;

/// A sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseVec<E> {
    entries: Vec<(usize, E)>,
}

impl<E> Default for SparseVec<E> {
    fn default() -> Self {
        SparseVec { entries: Vec::new() }
    }
}

impl<E: Clone> SparseVec<E> {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    /// Builds from entries that are already sorted, distinct and nonzero.
    pub fn from_sorted_unchecked(entries: Vec<(usize, E)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        SparseVec { entries }
    }

    /// Builds from arbitrary `(index, value)` pairs, summing duplicates.
    pub fn from_pairs<F: Field<Elem = E>>(f: &F, mut pairs: Vec<(usize, E)>) -> Self {
        pairs.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, E)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match entries.last_mut() {
                Some((j, acc)) if *j == i => *acc = f.add(acc, &v),
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|(_, v)| !f.is_zero(v));
        SparseVec { entries }
    }

    pub fn from_dense<F: Field<Elem = E>>(f: &F, dense: &[E]) -> Self {
        SparseVec {
            entries: dense
                .iter()
                .enumerate()
                .filter(|(_, v)| !f.is_zero(v))
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn unit<F: Field<Elem = E>>(f: &F, i: usize) -> Self {
        SparseVec { entries: vec![(i, f.one())] }
    }

    pub fn to_dense<F: Field<Elem = E>>(&self, f: &F, len: usize) -> Vec<E> {
        let mut out = vec![f.zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, E)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, E)> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, E)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading(&self) -> Option<&(usize, E)> {
        self.entries.first()
    }

    pub fn get(&self, i: usize) -> Option<&E> {
        self.entries
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, a: &E) -> Self {
        if f.is_zero(a) {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, f.mul(a, v))).collect(),
        }
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, f.neg(v))).collect(),
        }
    }

    /// `self + a * other`
    pub fn add_scaled<F: Field<Elem = E>>(&self, f: &F, a: &E, other: &Self) -> Self {
        if f.is_zero(a) || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut x, mut y) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (x.peek(), y.peek()) {
                (Some((i, u)), Some((j, v))) => {
                    if i < j {
                        out.push((*i, u.clone()));
                        x.next();
                    } else if j < i {
                        out.push((*j, f.mul(a, v)));
                        y.next();
                    } else {
                        let mut s = u.clone();
                        f.mul_add_assign(&mut s, a, v);
                        if !f.is_zero(&s) {
                            out.push((*i, s));
                        }
                        x.next();
                        y.next();
                    }
                }
                (Some((i, u)), None) => {
                    out.push((*i, u.clone()));
                    x.next();
                }
                (None, Some((j, v))) => {
                    out.push((*j, f.mul(a, v)));
                    y.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.add_scaled(f, &f.one(), other)
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.add_scaled(f, &f.neg(&f.one()), other)
    }

    /// Re-indexes entries by `offset` (used for block placement).
    pub fn shifted(&self, offset: usize) -> Self {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (i + offset, v.clone())).collect(),
        }
    }

    /// Entries with index in `[start, start + len)`, re-indexed from zero.
    pub fn window(&self, start: usize, len: usize) -> Self {
        let lo = self.entries.partition_point(|(i, _)| *i < start);
        let hi = self.entries.partition_point(|(i, _)| *i < start + len);
        SparseVec {
            entries: self.entries[lo..hi].iter().map(|(i, v)| (i - start, v.clone())).collect(),
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }
}

/// Dense scratch accumulator with a touched-index list, reused across
/// reductions so that each one costs time proportional to its support.
pub(crate) struct Accumulator<E> {
    vals: Vec<E>,
    touched: Vec<usize>,
    flags: Vec<bool>,
}

impl<E: Clone> Accumulator<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, len: usize) -> Self {
        Accumulator { vals: vec![f.zero(); len], touched: Vec::new(), flags: vec![false; len] }
    }

    /// Returns true when `i` was not touched before.
    #[inline]
    pub fn add_mul<F: Field<Elem = E>>(&mut self, f: &F, i: usize, a: &E, b: &E) -> bool {
        f.mul_add_assign(&mut self.vals[i], a, b);
        self.mark(i)
    }

    #[inline]
    pub fn add<F: Field<Elem = E>>(&mut self, f: &F, i: usize, a: &E) -> bool {
        self.vals[i] = f.add(&self.vals[i], a);
        self.mark(i)
    }

    #[inline]
    fn mark(&mut self, i: usize) -> bool {
        if self.flags[i] {
            false
        } else {
            self.flags[i] = true;
            self.touched.push(i);
            true
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> &E {
        &self.vals[i]
    }

    #[inline]
    pub fn set_zero<F: Field<Elem = E>>(&mut self, f: &F, i: usize) {
        self.vals[i] = f.zero();
    }

    /// Collects the nonzero entries in index order and resets the scratch.
    pub fn drain<F: Field<Elem = E>>(&mut self, f: &F) -> SparseVec<E> {
        self.touched.sort_unstable();
        let mut entries = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            self.flags[i] = false;
            let v = std::mem::replace(&mut self.vals[i], f.zero());
            if !f.is_zero(&v) {
                entries.push((i, v));
            }
        }
        self.touched.clear();
        SparseVec { entries }
    }
}
