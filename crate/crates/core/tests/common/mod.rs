//! Enumeration oracles built from free graded algebras, independent of the engine.

#![allow(dead_code)]

/// A generator of a free algebra: degree, weight, and whether it squares to zero.
#[derive(Copy, Clone, Debug)]
pub struct FreeGen {
    pub degree: u32,
    pub weight: usize,
    pub exterior: bool,
}

pub const fn poly(degree: u32, weight: usize) -> FreeGen {
    FreeGen { degree, weight, exterior: false }
}

pub const fn ext(degree: u32, weight: usize) -> FreeGen {
    FreeGen { degree, weight, exterior: true }
}

/// counts[n][p]: monomials of degree n and weight p, for n ≤ top.
pub fn free_bigraded(gens: &[FreeGen], top: u32) -> Vec<Vec<usize>> {
    let top = top as usize;
    let mut t = vec![vec![0usize; 1]; top + 1];
    t[0][0] = 1;
    for g in gens {
        let deg = g.degree as usize;
        let max_power = if g.exterior { 1 } else { top / deg.max(1) };
        let mut next = vec![Vec::new(); top + 1];
        for n in 0..=top {
            for (p, &c) in t[n].iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for k in 0..=max_power {
                    let m = n + k * deg;
                    if m > top {
                        break;
                    }
                    let q = p + k * g.weight;
                    if next[m].len() <= q {
                        next[m].resize(q + 1, 0);
                    }
                    next[m][q] += c;
                }
            }
        }
        t = next;
    }
    t
}

pub fn free_series(gens: &[FreeGen], top: u32) -> Vec<usize> {
    free_bigraded(gens, top).iter().map(|r| r.iter().sum()).collect()
}

/// x26 ⊗ Z3[a4,a8,a10] ⊗ Λ(a9) ⊗ Z3[b12,b16,b18] with x26 in weight 3.
pub fn may_e1_bigraded(top: u32) -> Vec<Vec<usize>> {
    free_bigraded(
        &[
            poly(26, 3),
            poly(4, 1),
            poly(8, 1),
            poly(10, 1),
            ext(9, 1),
            poly(12, 1),
            poly(16, 1),
            poly(18, 1),
        ],
        top,
    )
}

fn gen_degree(symbol: &str) -> u32 {
    symbol[1..].parse().expect("symbol like y20 or a9")
}

/// Degree of a product such as "a9 b12^2 b18".
pub fn monomial_degree(src: &str) -> u32 {
    src.split_whitespace()
        .map(|f| match f.split_once('^') {
            Some((s, e)) => gen_degree(s) * e.parse::<u32>().unwrap(),
            None => gen_degree(f),
        })
        .sum()
}

/// Σ over summands of (polynomial ring on `ring`) ⊗ span(`module`), times Z3[x36, x48, x54].
pub fn direct_sum_series(summands: &[(&[u32], &[&str])], top: u32) -> Vec<usize> {
    let outer = free_series(&[poly(36, 0), poly(48, 0), poly(54, 0)], top);
    let mut total = vec![0usize; top as usize + 1];
    for (ring, module) in summands {
        let gens: Vec<FreeGen> = ring.iter().map(|&d| poly(d, 0)).collect();
        let r = free_series(&gens, top);
        for m in module.iter() {
            let shift = if *m == "1" { 0 } else { monomial_degree(m) } as usize;
            for n in shift..=top as usize {
                total[n] += r[n - shift];
            }
        }
    }
    let mut out = vec![0usize; top as usize + 1];
    for (i, &a) in total.iter().enumerate() {
        for (j, &b) in outer.iter().enumerate() {
            if i + j <= top as usize {
                out[i + j] += a * b;
            }
        }
    }
    out
}

/// The seven summands describing E4 of the weight spectral sequence.
pub fn weight_e4_series(top: u32) -> Vec<usize> {
    const A: u32 = 4;
    const B: u32 = 8;
    const C: u32 = 10;
    const X: u32 = 26;
    let summands: Vec<(&[u32], &[&str])> = vec![
        (
            &[A, B, C, X],
            &["1", "y20", "y20^2", "y22", "y22^2", "y20 y22", "y58", "y60", "y76"],
        ),
        (&[B, C, X], &["y26", "y26^2", "y20 y26", "y22 y26", "y64"]),
        (
            &[X],
            &["a9", "y21", "y25", "y27", "y21 a8", "y21 a10", "y25 a10", "y21 y26"],
        ),
        (
            &[C, X],
            &["a9 b16 b18", "a9 b16 b18^2", "a9 b12 b18", "a9 b18^2"],
        ),
        (&[B, C, X], &["a9 b16^2", "a9 b16^2 b18", "a9 b16^2 b18^2"]),
        (
            &[A, B, C, X],
            &[
                "a9 b12^2",
                "a9 b12^2 b18",
                "a9 b12^2 b18^2",
                "a9 b12^2 b16",
                "a9 b12^2 b16 b18",
                "a9 b12^2 b16 b18^2",
                "a9 b12^2 b16^2",
                "a9 b12^2 b16^2 b18",
                "a9 b12^2 b16^2 b18^2",
            ],
        ),
        (&[C, X], &["a9 b12 b18^2", "a8 a9 b12 b18^2"]),
        (
            &[B, C, X],
            &[
                "a9 b12 b16",
                "a9 b12 b16 b18",
                "a9 b12 b16 b18^2",
                "a9 b12 b16^2",
                "a9 b12 b16^2 b18",
                "a9 b12 b16^2 b18^2",
            ],
        ),
    ];
    direct_sum_series(&summands, top)
}
