//! Independent oracles. Nothing here calls into the library's algorithms;
//! polynomials in one variable are dense `Vec<i64>` coefficient lists.

#![allow(dead_code)]

use lawrence_core::ring::{Coeff, GroupRingElement};

/// All permutations of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

pub fn inversion_count(p: &[usize]) -> usize {
    let mut k = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                k += 1;
            }
        }
    }
    k
}

/// `Σ_{σ ∈ S_r} u^{inv(σ)}` as a dense coefficient list.
pub fn inversion_polynomial(r: usize) -> Vec<i64> {
    let mut out = vec![0i64; r * r.saturating_sub(1) / 2 + 1];
    for p in permutations(r) {
        out[inversion_count(&p)] += 1;
    }
    out
}

pub fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `Π_i [e_i]_u!` from the closed form `[n]! = Π_{k<=n} (1 + u + ... + u^{k-1})`.
pub fn factorial_product(parts: &[u32]) -> Vec<i64> {
    let mut acc = vec![1i64];
    for &p in parts {
        for k in 1..=p as usize {
            acc = poly_mul(&acc, &vec![1i64; k]);
        }
    }
    acc
}

/// Reads a library element that only involves variable `var` as a dense
/// coefficient list (`None` if other variables or negative powers occur).
pub fn to_dense(a: &GroupRingElement, var: usize) -> Option<Vec<i64>> {
    let mut out = Vec::new();
    for (e, c) in a.terms() {
        if e.iter().enumerate().any(|(i, v)| i != var && *v != 0) || e[var] < 0 {
            return None;
        }
        let k = e[var] as usize;
        if out.len() <= k {
            out.resize(k + 1, 0);
        }
        out[k] = coeff_i64(c)?;
    }
    if out.is_empty() {
        out.push(0);
    }
    Some(out)
}

pub fn coeff_i64(c: &Coeff) -> Option<i64> {
    match c {
        Coeff::Int(v) => v.try_into().ok(),
        _ => None,
    }
}

pub fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

/// Pascal's triangle.
pub fn binomial(n: usize, k: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![1u64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

/// Every `l`-tuple over `0..=m` with sum `m`, sorted by the reversed tuple.
pub fn brute_compositions(l: usize, m: u32) -> Vec<Vec<u32>> {
    let mut all = vec![vec![]];
    for _ in 0..l {
        let mut next = Vec::new();
        for t in &all {
            let used: u32 = t.iter().sum();
            for v in 0..=m - used {
                let mut t2: Vec<u32> = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        all = next;
    }
    let mut out: Vec<Vec<u32>> = all.into_iter().filter(|t| t.iter().sum::<u32>() == m).collect();
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    out
}

/// Simple deterministic generator so oracles do not share the library's RNG.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 { lo + (self.next() % ((hi - lo + 1) as u64)) as i64 }
}
