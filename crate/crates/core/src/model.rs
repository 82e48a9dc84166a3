//! Fitted-model persistence: a versioned, human-diffable text format with a
//! base-16 coefficient payload and an FNV-1a content checksum.
//!
//! Layout (line oriented, `key = value`):
//!
//! ```text
//! anova-svm-model v1
//! basis = cosine
//! cosine_normalization = orthonormal
//! d = 6
//! terms = 22
//! term 0 = - : -
//! term 1 = 1 : 6
//! ...
//! scaling = cosine            (or: none)
//! scale 1 = 0,10
//! ...
//! seed = 42
//! lambda = 0.015625
//! reg = l1
//! iterations = 531
//! objective = 0.123456
//! stop = objective-change
//! coeffs = 166
//! 3fe0000000000000 bff0000000000000 ...   (8 per line, f64 bits, hex)
//! checksum = 0123456789abcdef
//! ```
//!
//! Term enumerations are re-derived on load from subset and bandwidth, never
//! stored. The checksum covers every byte before its own line; loading
//! verifies it and the version before anything else is trusted.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::basis::{BasisKind, CosineNormalization};
use crate::data::{apply_scaling, Dataset, ScalingRecord};
use crate::error::{Error, Result};
use crate::indexsets::{AnovaSubset, GroupedIndexSet, SubsetFamily};
use crate::solver::RegKind;
use crate::transform::FeatureTransform;

pub const MODEL_VERSION: u32 = 1;
const MAGIC: &str = "anova-svm-model";

/// How a model was fitted.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub seed: u64,
    pub lambda: f64,
    pub reg: RegKind,
    pub iterations: usize,
    pub objective: f64,
    pub stop: String,
}

impl Default for Provenance {
    fn default() -> Self {
        Self {
            seed: 0,
            lambda: 0.0,
            reg: RegKind::L1,
            iterations: 0,
            objective: f64::NAN,
            stop: "none".to_string(),
        }
    }
}

/// A fitted classifier: basis, index set, coefficients and the scaling that
/// maps raw data into the basis domain (absent for native-domain data).
#[derive(Debug, Clone)]
pub struct Model {
    pub basis: BasisKind,
    pub norm: CosineNormalization,
    pub set: GroupedIndexSet,
    pub coeffs: Vec<f64>,
    pub scaling: Option<ScalingRecord>,
    pub provenance: Provenance,
}

impl Model {
    pub fn new(
        set: GroupedIndexSet,
        norm: CosineNormalization,
        coeffs: Vec<f64>,
        scaling: Option<ScalingRecord>,
        provenance: Provenance,
    ) -> Result<Self> {
        if coeffs.len() != set.cardinality() {
            return Err(Error::invalid(format!(
                "coefficient vector has length {}, index set has cardinality {}",
                coeffs.len(),
                set.cardinality()
            )));
        }
        Ok(Self {
            basis: set.basis(),
            norm,
            set,
            coeffs,
            scaling,
            provenance,
        })
    }

    pub fn d(&self) -> usize {
        self.set.d()
    }

    /// Scores a raw dataset: applies the stored scaling (clamping unseen
    /// values) and evaluates the classifying function on every row.
    /// Returns the scores and the number of clamped entries.
    pub fn score_dataset(&self, data: &Dataset) -> Result<(Vec<f64>, usize)> {
        if data.d() != self.d() {
            return Err(Error::invalid(format!(
                "model expects dimension {}, data has {}",
                self.d(),
                data.d()
            )));
        }
        let (scaled, clamps);
        let input = match &self.scaling {
            Some(rec) => {
                (scaled, clamps) = apply_scaling(rec, data)?;
                &scaled
            }
            None => {
                clamps = 0;
                data
            }
        };
        let t = FeatureTransform::build(input.x(), input.m(), &self.set, self.norm)?;
        Ok((t.apply(&self.coeffs)?, clamps))
    }

    pub fn serialize(&self) -> String {
        let mut body = String::new();
        let _ = writeln!(body, "{MAGIC} v{MODEL_VERSION}");
        let _ = writeln!(body, "basis = {}", self.basis);
        let _ = writeln!(body, "cosine_normalization = {}", self.norm);
        let _ = writeln!(body, "d = {}", self.d());
        let _ = writeln!(body, "terms = {}", self.set.terms().len());
        for (i, term) in self.set.terms().iter().enumerate() {
            let bw = if term.bandwidth().is_empty() {
                "-".to_string()
            } else {
                term.bandwidth()
                    .iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            let _ = writeln!(body, "term {i} = {} : {}", term.subset().label(), bw);
        }
        match &self.scaling {
            None => {
                let _ = writeln!(body, "scaling = none");
            }
            Some(rec) => {
                let _ = writeln!(body, "scaling = {}", rec.basis());
                for (i, (lo, hi)) in rec.per_dim().iter().enumerate() {
                    let _ = writeln!(
                        body,
                        "scale {} = {:x},{:x}",
                        i + 1,
                        lo.to_bits(),
                        hi.to_bits()
                    );
                }
            }
        }
        let p = &self.provenance;
        let _ = writeln!(body, "seed = {}", p.seed);
        let _ = writeln!(body, "lambda = {}", p.lambda);
        let _ = writeln!(body, "reg = {}", p.reg);
        let _ = writeln!(body, "iterations = {}", p.iterations);
        let _ = writeln!(body, "objective = {}", p.objective);
        let _ = writeln!(body, "stop = {}", p.stop);
        let _ = writeln!(body, "coeffs = {}", self.coeffs.len());
        for chunk in self.coeffs.chunks(8) {
            let line = chunk
                .iter()
                .map(|c| format!("{:016x}", c.to_bits()))
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(body, "{line}");
        }
        let checksum = fnv1a64(body.as_bytes());
        let _ = writeln!(body, "checksum = {checksum:016x}");
        body
    }

    pub fn deserialize(text: &str) -> Result<Model> {
        // split off and verify the checksum first
        let trimmed = text.trim_end_matches('\n');
        let (body_end, checksum_line) = match trimmed.rfind('\n') {
            Some(pos) => (pos + 1, &trimmed[pos + 1..]),
            None => return Err(Error::format("file too short")),
        };
        let expected = checksum_line
            .strip_prefix("checksum = ")
            .ok_or_else(|| Error::format("missing checksum line (file truncated?)"))?;
        let expected = u64::from_str_radix(expected.trim(), 16)
            .map_err(|_| Error::format("malformed checksum"))?;
        let actual = fnv1a64(&text.as_bytes()[..body_end]);
        if actual != expected {
            return Err(Error::format(format!(
                "checksum mismatch: file says {expected:016x}, content hashes to {actual:016x}"
            )));
        }

        let mut lines = text[..body_end].lines();
        let header = lines.next().ok_or_else(|| Error::format("empty file"))?;
        let version = header
            .strip_prefix(MAGIC)
            .map(str::trim)
            .and_then(|v| v.strip_prefix('v'))
            .and_then(|v| v.parse::<u32>().ok())
            .ok_or_else(|| Error::format(format!("not a model file: {header:?}")))?;
        if version != MODEL_VERSION {
            return Err(Error::format(format!(
                "unsupported model version {version} (this build reads v{MODEL_VERSION})"
            )));
        }

        let mut kv = |expected_key: &str| -> Result<String> {
            let line = lines
                .next()
                .ok_or_else(|| Error::format(format!("missing field {expected_key}")))?;
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::format(format!("malformed line {line:?}")))?;
            if k.trim() != expected_key {
                return Err(Error::format(format!(
                    "expected field {expected_key}, found {}",
                    k.trim()
                )));
            }
            Ok(v.trim().to_string())
        };

        let basis: BasisKind = kv("basis")?.parse()?;
        let norm: CosineNormalization = kv("cosine_normalization")?.parse()?;
        let d: usize = kv("d")?
            .parse()
            .map_err(|_| Error::format("bad dimension"))?;
        let n_terms: usize = kv("terms")?
            .parse()
            .map_err(|_| Error::format("bad term count"))?;

        let mut pairs: Vec<(AnovaSubset, Vec<u32>)> = Vec::with_capacity(n_terms);
        for i in 0..n_terms {
            let val = kv(&format!("term {i}"))?;
            let (subset_str, bw_str) = val
                .split_once(':')
                .ok_or_else(|| Error::format(format!("malformed term line {val:?}")))?;
            let subset = AnovaSubset::parse_label(subset_str.trim())?;
            let bw: Vec<u32> = if bw_str.trim() == "-" {
                Vec::new()
            } else {
                bw_str
                    .trim()
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::format(format!("bad bandwidth {t:?}")))
                    })
                    .collect::<Result<_>>()?
            };
            pairs.push((subset, bw));
        }
        // keep bandwidths attached to their subsets: the family constructor
        // sorts canonically, so sort the pairs the same way first
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let (subsets, bandwidths): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        let family = SubsetFamily::new(d, subsets)?;
        let set = match basis {
            BasisKind::Cosine => GroupedIndexSet::cosine(&family, &bandwidths)?,
            BasisKind::Haar => GroupedIndexSet::wavelet(&family, &bandwidths)?,
        };

        let scaling = match kv("scaling")?.as_str() {
            "none" => None,
            s => {
                let sbasis: BasisKind = s.parse()?;
                let mut per_dim = Vec::with_capacity(d);
                for i in 0..d {
                    let val = kv(&format!("scale {}", i + 1))?;
                    let (lo, hi) = val
                        .split_once(',')
                        .ok_or_else(|| Error::format("malformed scale line"))?;
                    let lo = u64::from_str_radix(lo.trim(), 16)
                        .map_err(|_| Error::format("bad scale bits"))?;
                    let hi = u64::from_str_radix(hi.trim(), 16)
                        .map_err(|_| Error::format("bad scale bits"))?;
                    per_dim.push((f64::from_bits(lo), f64::from_bits(hi)));
                }
                Some(ScalingRecord::from_parts(sbasis, per_dim)?)
            }
        };

        let provenance = Provenance {
            seed: kv("seed")?
                .parse()
                .map_err(|_| Error::format("bad seed"))?,
            lambda: kv("lambda")?
                .parse()
                .map_err(|_| Error::format("bad lambda"))?,
            reg: kv("reg")?.parse()?,
            iterations: kv("iterations")?
                .parse()
                .map_err(|_| Error::format("bad iteration count"))?,
            objective: kv("objective")?
                .parse()
                .map_err(|_| Error::format("bad objective"))?,
            stop: kv("stop")?,
        };

        let n_coeffs: usize = kv("coeffs")?
            .parse()
            .map_err(|_| Error::format("bad coefficient count"))?;
        if n_coeffs != set.cardinality() {
            return Err(Error::format(format!(
                "file declares {n_coeffs} coefficients but the index set has cardinality {}",
                set.cardinality()
            )));
        }
        let mut coeffs = Vec::with_capacity(n_coeffs);
        for line in lines {
            for tok in line.split_whitespace() {
                let bits = u64::from_str_radix(tok, 16)
                    .map_err(|_| Error::format(format!("bad coefficient hex {tok:?}")))?;
                coeffs.push(f64::from_bits(bits));
            }
        }
        if coeffs.len() != n_coeffs {
            return Err(Error::format(format!(
                "expected {n_coeffs} coefficients, payload holds {}",
                coeffs.len()
            )));
        }

        Model::new(set, norm, coeffs, scaling, provenance)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.serialize())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Model> {
        let text = fs::read_to_string(path)?;
        Model::deserialize(&text)
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::fit_scaling;
    use crate::indexsets::{enumerate_subsets, per_order_bandwidths};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample_model(with_scaling: bool) -> Model {
        let family = enumerate_subsets(3, 2).unwrap();
        let bw = per_order_bandwidths(&family, &[6, 4]).unwrap();
        let set = GroupedIndexSet::cosine(&family, &bw).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let coeffs: Vec<f64> = (0..set.cardinality())
            .map(|_| rng.gen::<f64>() * 2.0 - 1.0)
            .collect();
        let scaling = with_scaling.then(|| {
            let ds = Dataset::new(
                vec![0.0, 1.0, 2.0, 10.0, -3.0, 4.5],
                3,
                vec![1.0, -1.0],
                None,
            )
            .unwrap();
            fit_scaling(&ds, BasisKind::Cosine)
        });
        Model::new(
            set,
            CosineNormalization::Orthonormal,
            coeffs,
            scaling,
            Provenance {
                seed: 42,
                lambda: 0.015625,
                reg: RegKind::L1,
                iterations: 37,
                objective: 0.25,
                stop: "objective-change".to_string(),
            },
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        for with_scaling in [false, true] {
            let m = sample_model(with_scaling);
            let text = m.serialize();
            let back = Model::deserialize(&text).unwrap();
            assert_eq!(m.coeffs.len(), back.coeffs.len());
            assert!(m
                .coeffs
                .iter()
                .zip(&back.coeffs)
                .all(|(a, b)| a.to_bits() == b.to_bits()));
            assert_eq!(m.set, back.set);
            assert_eq!(m.scaling, back.scaling);
            assert_eq!(m.provenance, back.provenance);
            // serialization is stable
            assert_eq!(text, back.serialize());
        }
    }

    #[test]
    fn truncated_file_is_rejected() {
        let m = sample_model(false);
        let text = m.serialize();
        let cut = &text[..text.len() * 2 / 3];
        let err = Model::deserialize(cut).unwrap_err();
        assert!(matches!(err, Error::Format(_)), "{err}");
    }

    #[test]
    fn corrupted_payload_is_rejected() {
        let m = sample_model(false);
        let text = m.serialize().replace("lambda = 0.015625", "lambda = 0.25");
        let err = Model::deserialize(&text).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
        assert!(err.to_string().contains("checksum"));
    }

    #[test]
    fn version_bump_is_rejected() {
        let m = sample_model(false);
        let mut text = m.serialize().replace("anova-svm-model v1", "anova-svm-model v2");
        // fix up the checksum so only the version differs
        let body_end = text.trim_end_matches('\n').rfind('\n').unwrap() + 1;
        let checksum = fnv1a64(&text.as_bytes()[..body_end]);
        text = format!("{}checksum = {checksum:016x}\n", &text[..body_end]);
        let err = Model::deserialize(&text).unwrap_err();
        assert!(err.to_string().contains("version"), "{err}");
    }

    #[test]
    fn reordered_terms_keep_their_bandwidths() {
        // term lines may be shuffled by hand; bandwidths must follow their
        // subsets (the checksum is recomputed to isolate the reorder)
        let family = SubsetFamily::new(
            2,
            vec![
                AnovaSubset::empty(),
                AnovaSubset::new(vec![1]).unwrap(),
                AnovaSubset::new(vec![2]).unwrap(),
            ],
        )
        .unwrap();
        let set = GroupedIndexSet::cosine(&family, &[vec![], vec![4], vec![6]]).unwrap();
        let m = Model::new(
            set,
            CosineNormalization::Orthonormal,
            vec![0.0; 1 + 3 + 5],
            None,
            Provenance::default(),
        )
        .unwrap();
        let text = m
            .serialize()
            .replace("term 1 = 1 : 4", "term 1 = 2 : 6")
            .replace("term 2 = 2 : 6", "term 2 = 1 : 4");
        let body_end = text.trim_end_matches('\n').rfind('\n').unwrap() + 1;
        let checksum = fnv1a64(&text.as_bytes()[..body_end]);
        let text = format!("{}checksum = {checksum:016x}\n", &text[..body_end]);
        let back = Model::deserialize(&text).unwrap();
        assert_eq!(back.set, m.set);
    }

    #[test]
    fn save_and_load_file() {
        let dir = std::env::temp_dir().join("anova-svm-model-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("model.txt");
        let m = sample_model(true);
        m.save(&path).unwrap();
        let back = Model::load(&path).unwrap();
        assert!(m
            .coeffs
            .iter()
            .zip(&back.coeffs)
            .all(|(a, b)| a.to_bits() == b.to_bits()));
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn score_checks_dimension() {
        let m = sample_model(false);
        let ds = Dataset::new(vec![0.1, 0.2], 2, vec![1.0], None).unwrap();
        let err = m.score_dataset(&ds).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains('3') && msg.contains('2'), "{msg}");
    }

    #[test]
    fn zero_model_predicts_positive() {
        let m = {
            let mut m = sample_model(false);
            m.coeffs.iter_mut().for_each(|c| *c = 0.0);
            m
        };
        let ds = Dataset::new(vec![0.1, 0.2, 0.3, 0.4, 0.0, 0.5], 3, vec![1.0, -1.0], None)
            .unwrap();
        let (scores, _) = m.score_dataset(&ds).unwrap();
        let labels = crate::solver::predict_labels(&scores);
        assert_eq!(labels, vec![1.0, 1.0]);
    }
}
