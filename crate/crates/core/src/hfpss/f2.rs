//! Subspaces of `F_2^n` in reduced row echelon form.

#![cfg_attr(not(test), allow(dead_code))]

pub type Vector = Vec<u64>;

pub fn zero(n: usize) -> Vector {
    vec![0; n.div_ceil(64)]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zero(n);
    set(&mut v, i);
    v
}

pub fn set(v: &mut Vector, i: usize) {
    v[i / 64] ^= 1 << (i % 64);
}

pub fn get(v: &Vector, i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

pub fn is_zero(v: &Vector) -> bool {
    v.iter().all(|&w| w == 0)
}

pub fn xor(a: &mut Vector, b: &Vector) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

/// Lowest set index.
pub fn leading(v: &Vector) -> Option<usize> {
    v.iter().enumerate().find(|(_, &w)| w != 0).map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
}

pub fn ones(v: &Vector) -> impl Iterator<Item = usize> + '_ {
    v.iter().enumerate().flat_map(|(k, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            (w != 0).then(|| {
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                k * 64 + t
            })
        })
    })
}

/// Each row's lowest set bit is a pivot, and no other row has that bit set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    n: usize,
    rows: Vec<(usize, Vector)>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Self { n, rows: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self { n, rows: (0..n).map(|i| (i, unit(n, i))).collect() }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = &Vector> {
        self.rows.iter().map(|(_, r)| r)
    }

    /// Canonical representative of `v` modulo the subspace.
    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut v = v.clone();
        for (p, r) in &self.rows {
            if get(&v, *p) {
                xor(&mut v, r);
            }
        }
        v
    }

    pub fn contains(&self, v: &Vector) -> bool {
        is_zero(&self.reduce(v))
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &Vector) -> bool {
        let v = self.reduce(v);
        let Some(p) = leading(&v) else { return false };
        for (_, r) in &mut self.rows {
            if get(r, p) {
                xor(r, &v);
            }
        }
        self.rows.push((p, v));
        true
    }

    /// Dimension of the intersection with the span of the coordinates `>= k`.
    pub fn dim_in_tail(&self, k: usize) -> usize {
        self.rows.iter().filter(|(p, _)| *p >= k).count()
    }

    pub fn tail_basis(&self, k: usize) -> impl Iterator<Item = &Vector> {
        self.rows.iter().filter(move |(p, _)| *p >= k).map(|(_, r)| r)
    }
}

/// Kernel of `x -> f(x) mod target` restricted to `domain`.
///
/// `images[i]` is the image of the `i`-th basis vector of `domain`.
pub fn restricted_kernel(domain: &Subspace, images: &[Vector], target: &Subspace) -> Subspace {
    let mut kernel = Subspace::zero(domain.ambient());
    let mut pivots: Vec<(usize, Vector, Vector)> = Vec::new();
    for (x, fx) in domain.basis().zip(images) {
        let mut y = target.reduce(fx);
        let mut x = x.clone();
        for (p, py, px) in &pivots {
            if get(&y, *p) {
                xor(&mut y, py);
                xor(&mut x, px);
            }
        }
        match leading(&y) {
            None => {
                kernel.insert(&x);
            }
            Some(p) => pivots.push((p, y, x)),
        }
    }
    kernel
}
