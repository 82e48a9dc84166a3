//! Cross-module invariants: orthonormality of both bases under their inner
//! products, layout and metric properties under random inputs.

use anova_svm::basis::{eval_cosine, eval_haar, BasisIndex, CosineNormalization};
use anova_svm::data::{parse_delimited, split, Dataset, DelimitedOptions, SplitSpec};
use anova_svm::indexsets::{enumerate_subsets, per_order_bandwidths, GroupedIndexSet};
use anova_svm::solver::soft_threshold;
use proptest::prelude::*;

/// Composite trapezoidal quadrature of `f` over `[0, 1/2]` with `n`
/// intervals, normalized by the interval length (tau = 1/2).
fn trapezoid_inner_1d(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    let h = 0.5 / n as f64;
    let mut s = 0.5 * (f(0.0) + f(0.5));
    for j in 1..n {
        s += f(j as f64 * h);
    }
    s * h / 0.5
}

#[test]
fn cosine_orthonormality_1d() {
    // all pairs with frequency <= 8, 1024 intervals
    for a in 0u32..=8 {
        for b in a..=8 {
            let fa = |x: f64| {
                let idx = if a == 0 {
                    BasisIndex::cosine(vec![]).unwrap()
                } else {
                    BasisIndex::cosine(vec![(1, a)]).unwrap()
                };
                eval_cosine(&idx, &[x], CosineNormalization::Orthonormal).unwrap()
            };
            let fb = |x: f64| {
                let idx = if b == 0 {
                    BasisIndex::cosine(vec![]).unwrap()
                } else {
                    BasisIndex::cosine(vec![(1, b)]).unwrap()
                };
                eval_cosine(&idx, &[x], CosineNormalization::Orthonormal).unwrap()
            };
            let inner = trapezoid_inner_1d(|x| fa(x) * fb(x), 1024);
            let expected = if a == b { 1.0 } else { 0.0 };
            assert!(
                (inner - expected).abs() < 1e-10,
                "<phi_{a}, phi_{b}> = {inner}"
            );
        }
    }
}

#[test]
fn cosine_orthonormality_2d() {
    // a representative set of 2-D frequencies up to 8 per axis
    let freqs: [(u32, u32); 8] = [
        (0, 0),
        (1, 0),
        (0, 1),
        (1, 1),
        (2, 1),
        (5, 5),
        (8, 3),
        (8, 8),
    ];
    let n = 1024usize;
    let h = 0.5 / n as f64;
    // tabulate each basis function on the product grid once
    let tables: Vec<Vec<f64>> = freqs
        .iter()
        .map(|&(k1, k2)| {
            let mut pairs = Vec::new();
            if k1 > 0 {
                pairs.push((1, k1));
            }
            if k2 > 0 {
                pairs.push((2, k2));
            }
            let idx = BasisIndex::cosine(pairs).unwrap();
            let mut grid = Vec::with_capacity((n + 1) * (n + 1));
            for i in 0..=n {
                for j in 0..=n {
                    let x = [i as f64 * h, j as f64 * h];
                    grid.push(
                        eval_cosine(&idx, &x, CosineNormalization::Orthonormal).unwrap(),
                    );
                }
            }
            grid
        })
        .collect();
    let weight = |i: usize| if i == 0 || i == n { 0.5 } else { 1.0 };
    for a in 0..freqs.len() {
        for b in a..freqs.len() {
            let mut s = 0.0;
            for i in 0..=n {
                for j in 0..=n {
                    let w = weight(i) * weight(j);
                    s += w * tables[a][i * (n + 1) + j] * tables[b][i * (n + 1) + j];
                }
            }
            // normalize: (1/tau^2) * h^2 with tau = 1/2
            let inner = s * h * h / 0.25;
            let expected = if a == b { 1.0 } else { 0.0 };
            assert!(
                (inner - expected).abs() < 1e-10,
                "freqs {:?} vs {:?}: {inner}",
                freqs[a],
                freqs[b]
            );
        }
    }
}

#[test]
fn haar_orthonormality_exact_dyadic() {
    // all indices with level <= 4 (plus the constant); products are
    // piecewise constant on the 2^-5 grid, so cell midpoint sums are exact
    let mut indices = vec![BasisIndex::haar(vec![]).unwrap()];
    for j in 0..=4u32 {
        for k in 0..(1u32 << j) {
            indices.push(BasisIndex::haar(vec![(1, j, k)]).unwrap());
        }
    }
    let cells = 1usize << 5;
    let width = 1.0 / cells as f64;
    for (a, ia) in indices.iter().enumerate() {
        for (b, ib) in indices.iter().enumerate().skip(a) {
            let mut inner = 0.0;
            for c in 0..cells {
                // cell midpoints on the torus [-1/2, 1/2)
                let x = -0.5 + (c as f64 + 0.5) * width;
                inner += eval_haar(ia, &[x]).unwrap() * eval_haar(ib, &[x]).unwrap() * width;
            }
            let expected = if a == b { 1.0 } else { 0.0 };
            assert!(
                (inner - expected).abs() < 1e-12,
                "pair ({a}, {b}): {inner}"
            );
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

proptest! {
    #[test]
    fn family_size_follows_binomials(d in 1usize..=9, d_s in 1usize..=4) {
        prop_assume!(d_s <= d);
        let family = enumerate_subsets(d, d_s).unwrap();
        let expected: usize = (0..=d_s).map(|s| binomial(d, s)).sum();
        prop_assert_eq!(family.len(), expected);
        // monotone in d_s
        if d_s > 1 {
            let smaller = enumerate_subsets(d, d_s - 1).unwrap();
            prop_assert!(smaller.len() <= family.len());
        }
    }

    #[test]
    fn blocks_partition_layout(d in 1usize..=5, n1 in 1u32..=3, n2 in 1u32..=2) {
        let d_s = d.min(2);
        let family = enumerate_subsets(d, d_s).unwrap();
        let bw = per_order_bandwidths(&family, &[2 * n1, 2 * n2]).unwrap();
        let set = GroupedIndexSet::cosine(&family, &bw).unwrap();
        let mut covered = vec![false; set.cardinality()];
        for term in set.terms() {
            let (off, len) = set.block_of(term.subset()).unwrap();
            for slot in &mut covered[off..off + len] {
                prop_assert!(!*slot, "block overlap");
                *slot = true;
            }
        }
        prop_assert!(covered.iter().all(|&c| c));
    }

    #[test]
    fn soft_threshold_contracts(a in -50.0f64..50.0, thr in 0.0f64..10.0) {
        let out = soft_threshold(a, thr);
        prop_assert!(out.abs() <= a.abs());
        prop_assert!(out == 0.0 || out.signum() == a.signum());
        if a.abs() > thr {
            prop_assert!((out.abs() - (a.abs() - thr)).abs() < 1e-12);
        } else {
            prop_assert_eq!(out, 0.0);
        }
    }

    #[test]
    fn split_partitions_rows(m in 4usize..200, seed in 0u64..1000) {
        let x: Vec<f64> = (0..m).map(|i| i as f64).collect();
        let y: Vec<f64> = (0..m).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let ds = Dataset::new(x, 1, y, None).unwrap();
        let count = 1 + m / 3;
        let (train, test) = split(&ds, SplitSpec::Count(count), seed).unwrap();
        prop_assert_eq!(train.m() + test.m(), m);
        let mut ids: Vec<i64> = train.x().iter().chain(test.x()).map(|&v| v as i64).collect();
        ids.sort_unstable();
        prop_assert_eq!(ids, (0..m as i64).collect::<Vec<_>>());
    }

    #[test]
    fn label_alphabets_round_trip(labels in proptest::collection::vec(0u8..2, 1..60), flip in any::<bool>()) {
        // encode as {0,1} or {-1,+1} source text; parsing maps onto one
        // consistent sign alphabet that restores the source bijectively
        let src: String = labels
            .iter()
            .map(|&b| {
                let lab = if flip {
                    if b == 0 { "-1" } else { "1" }
                } else if b == 0 { "0" } else { "1" };
                format!("{lab},0.5\n")
            })
            .collect();
        let ds = parse_delimited(std::io::Cursor::new(src), &DelimitedOptions::default()).unwrap();
        for (&orig, &mapped) in labels.iter().zip(ds.y()) {
            let back = if flip {
                if mapped < 0.0 { 0u8 } else { 1 }
            } else if mapped < 0.0 { 0 } else { 1 };
            prop_assert_eq!(orig, back);
        }
    }
}
