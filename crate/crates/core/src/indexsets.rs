//! ANOVA subsets and the grouped cosine/wavelet index sets that define the
//! coefficient-vector layout.
//!
//! A [`GroupedIndexSet`] is a disjoint union of per-subset blocks. Within a
//! block, cosine frequencies run lexicographically over the active dims with
//! every entry >= 1; wavelet blocks enumerate level vectors ordered by total
//! level then lexicographically, with shifts lexicographic inside a level.
//! Two builds from identical inputs always produce identical layouts.

use std::cmp::Ordering;
use std::fmt;

use crate::basis::{BasisIndex, BasisKind};
use crate::error::{Error, Result};

/// An ordered set of coordinate indices in `{1, ..., d}`; may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnovaSubset {
    dims: Vec<u32>,
}

impl AnovaSubset {
    pub fn new(dims: Vec<u32>) -> Result<Self> {
        if dims.first() == Some(&0) {
            return Err(Error::invalid("subset dims are 1-based"));
        }
        if dims.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(
                "subset dims must be strictly increasing and distinct",
            ));
        }
        Ok(Self { dims })
    }

    pub fn empty() -> Self {
        Self { dims: Vec::new() }
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn max_dim(&self) -> u32 {
        self.dims.last().copied().unwrap_or(0)
    }

    /// Machine-readable label: dims joined by `+`, `-` for the empty subset.
    pub fn label(&self) -> String {
        if self.dims.is_empty() {
            "-".to_string()
        } else {
            self.dims
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join("+")
        }
    }

    pub fn parse_label(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Self::empty());
        }
        let dims = s
            .split('+')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::invalid(format!("bad subset label {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dims)
    }
}

impl fmt::Display for AnovaSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, d) in self.dims.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "}}")
    }
}

/// Canonical order: by cardinality, then lexicographically by dims.
impl Ord for AnovaSubset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dims
            .len()
            .cmp(&other.dims.len())
            .then_with(|| self.dims.cmp(&other.dims))
    }
}

impl PartialOrd for AnovaSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A deterministic list of pairwise distinct subsets of `{1, ..., d}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetFamily {
    d: usize,
    subsets: Vec<AnovaSubset>,
    superposition: Option<usize>,
}

impl SubsetFamily {
    /// Builds a family from explicit subsets, normalizing to canonical order.
    pub fn new(d: usize, mut subsets: Vec<AnovaSubset>) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        for s in &subsets {
            if s.max_dim() as usize > d {
                return Err(Error::invalid(format!(
                    "subset {s} exceeds dimension {d}"
                )));
            }
        }
        subsets.sort();
        if subsets.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("subsets must be pairwise distinct"));
        }
        Ok(Self {
            d,
            subsets,
            superposition: None,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[AnovaSubset] {
        &self.subsets
    }

    pub fn superposition(&self) -> Option<usize> {
        self.superposition
    }

    pub fn contains(&self, subset: &AnovaSubset) -> bool {
        self.subsets.binary_search(subset).is_ok()
    }

    pub fn position(&self, subset: &AnovaSubset) -> Option<usize> {
        self.subsets.binary_search(subset).ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, AnovaSubset> {
        self.subsets.iter()
    }
}

/// Enumerates the empty set plus all subsets of cardinality `<= d_s`, in
/// canonical order.
pub fn enumerate_subsets(d: usize, d_s: usize) -> Result<SubsetFamily> {
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if d_s == 0 || d_s > d {
        return Err(Error::invalid(format!(
            "superposition dimension {d_s} must satisfy 1 <= d_s <= {d}"
        )));
    }
    let mut subsets = vec![AnovaSubset::empty()];
    let mut current = Vec::new();
    for size in 1..=d_s {
        combinations(d as u32, size, 1, &mut current, &mut subsets);
    }
    let mut family = SubsetFamily::new(d, subsets)?;
    family.superposition = Some(d_s);
    Ok(family)
}

fn combinations(d: u32, size: usize, start: u32, current: &mut Vec<u32>, out: &mut Vec<AnovaSubset>) {
    if current.len() == size {
        out.push(AnovaSubset {
            dims: current.clone(),
        });
        return;
    }
    for v in start..=d {
        current.push(v);
        combinations(d, size, v + 1, current, out);
        current.pop();
    }
}

/// Cosine frequency block: multi-indices `k` with `supp k = subset` and
/// `k_i` in `{1, ..., N_i - 1}` for active dims.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosineTermIndexSet {
    subset: AnovaSubset,
    bandwidth: Vec<u32>,
}

impl CosineTermIndexSet {
    pub fn new(subset: AnovaSubset, bandwidth: Vec<u32>) -> Result<Self> {
        if bandwidth.len() != subset.order() {
            return Err(Error::invalid(format!(
                "subset {subset} needs {} bandwidth entries, got {}",
                subset.order(),
                bandwidth.len()
            )));
        }
        for &n in &bandwidth {
            if n < 2 || n % 2 != 0 {
                return Err(Error::invalid(format!(
                    "cosine bandwidth {n} must be an even integer >= 2"
                )));
            }
            if n > 1 << 20 {
                return Err(Error::invalid(format!(
                    "cosine bandwidth {n} exceeds the supported maximum"
                )));
            }
        }
        Ok(Self { subset, bandwidth })
    }

    pub fn subset(&self) -> &AnovaSubset {
        &self.subset
    }

    pub fn bandwidth(&self) -> &[u32] {
        &self.bandwidth
    }

    pub fn cardinality(&self) -> usize {
        self.bandwidth.iter().map(|&n| (n - 1) as usize).product()
    }

    /// Frequencies (restricted to the subset dims) at block-local position.
    pub fn frequency_at(&self, local: usize) -> Vec<u32> {
        let mut digits = vec![0u32; self.bandwidth.len()];
        let mut rem = local;
        for i in (0..self.bandwidth.len()).rev() {
            let radix = (self.bandwidth[i] - 1) as usize;
            digits[i] = (rem % radix) as u32 + 1;
            rem /= radix;
        }
        digits
    }
}

/// Wavelet block: `(j, k)` pairs with `supp j = subset` and the hyperbolic
/// condition `sum_i j_i / N_i <= 1` (dims with `N_i = 0` admit only level 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveletTermIndexSet {
    subset: AnovaSubset,
    bandwidth: Vec<u32>,
    levels: Vec<Vec<u32>>,
    level_offsets: Vec<usize>,
    total: usize,
}

impl WaveletTermIndexSet {
    pub fn new(subset: AnovaSubset, bandwidth: Vec<u32>) -> Result<Self> {
        if bandwidth.len() != subset.order() {
            return Err(Error::invalid(format!(
                "subset {subset} needs {} bandwidth entries, got {}",
                subset.order(),
                bandwidth.len()
            )));
        }
        if let Some(&n) = bandwidth.iter().find(|&&n| n > 32) {
            return Err(Error::invalid(format!(
                "wavelet bandwidth {n} exceeds the supported maximum level 32"
            )));
        }
        let mut levels = Vec::new();
        let mut current = vec![0u32; bandwidth.len()];
        enumerate_levels(&bandwidth, 0, &mut current, &mut levels);
        levels.sort_by(|a, b| {
            let sa: u32 = a.iter().sum();
            let sb: u32 = b.iter().sum();
            sa.cmp(&sb).then_with(|| a.cmp(b))
        });
        let mut level_offsets = Vec::with_capacity(levels.len());
        let mut total = 0usize;
        for j in &levels {
            level_offsets.push(total);
            total += shifts_of(j);
        }
        Ok(Self {
            subset,
            bandwidth,
            levels,
            level_offsets,
            total,
        })
    }

    pub fn subset(&self) -> &AnovaSubset {
        &self.subset
    }

    pub fn bandwidth(&self) -> &[u32] {
        &self.bandwidth
    }

    pub fn cardinality(&self) -> usize {
        self.total
    }

    /// Level vectors (restricted to subset dims), in layout order.
    pub fn levels(&self) -> &[Vec<u32>] {
        &self.levels
    }

    pub fn level_offsets(&self) -> &[usize] {
        &self.level_offsets
    }

    /// Level and shifts (restricted to subset dims) at block-local position.
    pub fn pair_at(&self, local: usize) -> (&[u32], Vec<u32>) {
        let li = match self.level_offsets.binary_search(&local) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let j = &self.levels[li];
        let mut rem = local - self.level_offsets[li];
        let mut shifts = vec![0u32; j.len()];
        for i in (0..j.len()).rev() {
            let radix = 1usize << j[i];
            shifts[i] = (rem % radix) as u32;
            rem /= radix;
        }
        (j, shifts)
    }
}

fn shifts_of(level: &[u32]) -> usize {
    level.iter().map(|&j| 1usize << j).product()
}

fn enumerate_levels(bandwidth: &[u32], dim: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if dim == bandwidth.len() {
        out.push(current.clone());
        return;
    }
    // the hyperbolic budget shrinks monotonically in j, so walk up until the
    // exact rational check fails
    for j in 0.. {
        current[dim] = j;
        if !admissible(bandwidth, &current[..=dim]) {
            break;
        }
        enumerate_levels(bandwidth, dim + 1, current, out);
        if bandwidth[dim] == 0 {
            break;
        }
    }
    current[dim] = 0;
}

/// Exact check of `sum_i j_i / N_i <= 1` using integer arithmetic.
fn admissible(bandwidth: &[u32], levels: &[u32]) -> bool {
    let mut lcm = 1u64;
    for &n in bandwidth.iter().take(levels.len()).filter(|&&n| n > 0) {
        lcm = lcm / gcd(lcm, u64::from(n)) * u64::from(n);
    }
    let mut s = 0u64;
    for (i, &j) in levels.iter().enumerate() {
        if bandwidth[i] == 0 {
            if j != 0 {
                return false;
            }
        } else {
            s += u64::from(j) * (lcm / u64::from(bandwidth[i]));
        }
    }
    s <= lcm
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One block of a grouped set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermSet {
    Cosine(CosineTermIndexSet),
    Wavelet(WaveletTermIndexSet),
}

impl TermSet {
    pub fn subset(&self) -> &AnovaSubset {
        match self {
            TermSet::Cosine(t) => t.subset(),
            TermSet::Wavelet(t) => t.subset(),
        }
    }

    pub fn bandwidth(&self) -> &[u32] {
        match self {
            TermSet::Cosine(t) => t.bandwidth(),
            TermSet::Wavelet(t) => t.bandwidth(),
        }
    }

    pub fn cardinality(&self) -> usize {
        match self {
            TermSet::Cosine(t) => t.cardinality(),
            TermSet::Wavelet(t) => t.cardinality(),
        }
    }
}

/// The full description of a feature map: one term index set per subset with
/// a deterministic, contiguous coefficient layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupedIndexSet {
    d: usize,
    basis: BasisKind,
    terms: Vec<TermSet>,
    offsets: Vec<usize>,
    total: usize,
}

impl GroupedIndexSet {
    pub fn cosine(family: &SubsetFamily, bandwidths: &[Vec<u32>]) -> Result<Self> {
        let terms = zip_bandwidths(family, bandwidths)?
            .into_iter()
            .map(|(s, bw)| CosineTermIndexSet::new(s, bw).map(TermSet::Cosine))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(family.d(), BasisKind::Cosine, terms))
    }

    pub fn wavelet(family: &SubsetFamily, bandwidths: &[Vec<u32>]) -> Result<Self> {
        let terms = zip_bandwidths(family, bandwidths)?
            .into_iter()
            .map(|(s, bw)| WaveletTermIndexSet::new(s, bw).map(TermSet::Wavelet))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(family.d(), BasisKind::Haar, terms))
    }

    fn from_terms(d: usize, basis: BasisKind, terms: Vec<TermSet>) -> Self {
        let mut offsets = Vec::with_capacity(terms.len());
        let mut total = 0usize;
        for t in &terms {
            offsets.push(total);
            total += t.cardinality();
        }
        Self {
            d,
            basis,
            terms,
            offsets,
            total,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    pub fn terms(&self) -> &[TermSet] {
        &self.terms
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Total number of coefficients across all blocks.
    pub fn cardinality(&self) -> usize {
        self.total
    }

    /// The family of subsets this set was built over, in layout order.
    pub fn family(&self) -> SubsetFamily {
        SubsetFamily::new(
            self.d,
            self.terms.iter().map(|t| t.subset().clone()).collect(),
        )
        .expect("terms hold validated subsets")
    }

    /// Contiguous coefficient range `(offset, length)` of one subset's block.
    pub fn block_of(&self, subset: &AnovaSubset) -> Result<(usize, usize)> {
        let pos = self
            .terms
            .binary_search_by(|t| t.subset().cmp(subset))
            .map_err(|_| Error::SubsetNotFound(subset.to_string()))?;
        Ok((self.offsets[pos], self.terms[pos].cardinality()))
    }

    /// Block index and local offset of a layout position.
    pub fn locate(&self, position: usize) -> Result<(usize, usize)> {
        if position >= self.total {
            return Err(Error::IndexOutOfRange {
                position,
                len: self.total,
            });
        }
        let block = match self.offsets.binary_search(&position) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        Ok((block, position - self.offsets[block]))
    }

    /// The basis index stored at a layout position.
    pub fn index_at(&self, position: usize) -> Result<BasisIndex> {
        let (block, local) = self.locate(position)?;
        match &self.terms[block] {
            TermSet::Cosine(t) => {
                let k = t.frequency_at(local);
                let freq = t
                    .subset()
                    .dims()
                    .iter()
                    .zip(k)
                    .map(|(&dim, ki)| (dim, ki))
                    .collect();
                BasisIndex::cosine(freq)
            }
            TermSet::Wavelet(t) => {
                let (j, k) = t.pair_at(local);
                let pairs = t
                    .subset()
                    .dims()
                    .iter()
                    .zip(j.iter().zip(k))
                    .map(|(&dim, (&ji, ki))| (dim, ji, ki))
                    .collect();
                BasisIndex::haar(pairs)
            }
        }
    }

    /// Restricts the set to the subsets of `family`, keeping bandwidths.
    pub fn restrict(&self, family: &SubsetFamily) -> Result<Self> {
        let mut terms = Vec::with_capacity(family.len());
        for s in family.iter() {
            let pos = self
                .terms
                .binary_search_by(|t| t.subset().cmp(s))
                .map_err(|_| Error::SubsetNotFound(s.to_string()))?;
            terms.push(self.terms[pos].clone());
        }
        Ok(Self::from_terms(self.d, self.basis, terms))
    }
}

fn zip_bandwidths(
    family: &SubsetFamily,
    bandwidths: &[Vec<u32>],
) -> Result<Vec<(AnovaSubset, Vec<u32>)>> {
    if bandwidths.len() != family.len() {
        return Err(Error::invalid(format!(
            "family has {} subsets but {} bandwidth vectors were given",
            family.len(),
            bandwidths.len()
        )));
    }
    Ok(family
        .iter()
        .cloned()
        .zip(bandwidths.iter().cloned())
        .collect())
}

/// Assigns the same bandwidth `per_order[s-1]` to every dim of every subset
/// of cardinality `s`; the empty subset gets an empty vector.
pub fn per_order_bandwidths(family: &SubsetFamily, per_order: &[u32]) -> Result<Vec<Vec<u32>>> {
    family
        .iter()
        .map(|s| {
            if s.is_empty() {
                Ok(Vec::new())
            } else {
                let n = per_order.get(s.order() - 1).copied().ok_or_else(|| {
                    Error::invalid(format!(
                        "no bandwidth given for subsets of cardinality {}",
                        s.order()
                    ))
                })?;
                Ok(vec![n; s.order()])
            }
        })
        .collect()
}
