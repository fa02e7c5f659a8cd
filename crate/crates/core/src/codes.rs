//! The tetron code family `C_d`: stabilizer labels, detection intervals,
//! even-parity distance and error weights.
//!
//! Stabilizers are described by their Majorana support in the tetron's
//! WQP (`c'`) ordering: chain `p` occupies indices `(p−1)·2n .. p·2n`, and
//! within a chain index 0 is `γ_L`, `2l−1, 2l` belong to WQP `l`, and
//! `2n−1` is `γ_R` (all 0-based). The same supports are the site Majoranas
//! at the fixed point, where the WQP basis coincides with the site basis.

use std::fmt;

use crate::error::{Error, Result};
use crate::noise::ErrorSample;

/// Parameters of one code `C_d` on a tetron with `n` sites per chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeSpec {
    pub n: usize,
    pub d: usize,
    /// Detector inverse resolution.
    pub lambda: usize,
}

impl CodeSpec {
    pub fn new(n: usize, d: usize, lambda: usize) -> Result<Self> {
        let spec = CodeSpec { n, d, lambda };
        spec.validate()?;
        Ok(spec)
    }

    /// Code with `λ = max(d, 1)`, the coarsest detector that implements it.
    pub fn coarsest(n: usize, d: usize) -> Result<Self> {
        Self::new(n, d, d.max(1))
    }

    /// Checks `n ≥ 2`, `2d < n` and `λ ≥ 1`. Detector feasibility (`λ ≤ d`)
    /// is enforced by [`detection_intervals`].
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidInput(format!("n = {} < 2", self.n)));
        }
        if 2 * self.d >= self.n {
            return Err(Error::InvalidInput(format!(
                "code distance parameter d = {} must satisfy d < n/2 = {}",
                self.d,
                self.n as f64 / 2.0
            )));
        }
        if self.lambda == 0 {
            return Err(Error::InvalidInput("lambda must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StabilizerLabel {
    Parity,
    /// WQP parity `Q_{p,l}` on chain `p ∈ {1, 2}`, `l ∈ 1..n−1`.
    Qp { chain: u8, l: usize },
}

impl fmt::Display for StabilizerLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabilizerLabel::Parity => write!(f, "parity"),
            StabilizerLabel::Qp { chain, l } => write!(f, "({chain},{l})"),
        }
    }
}

/// `S_d`: the parity stabilizer plus the WQP parities within `d` of each chain end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerSet {
    pub n: usize,
    pub d: usize,
    /// `Parity` first, then QP labels in ascending `(p, l)`.
    pub labels: Vec<StabilizerLabel>,
}

impl StabilizerSet {
    pub fn qp_labels(&self) -> impl Iterator<Item = (u8, usize)> + '_ {
        self.labels.iter().filter_map(|l| match *l {
            StabilizerLabel::Qp { chain, l } => Some((chain, l)),
            StabilizerLabel::Parity => None,
        })
    }

    pub fn num_qp(&self) -> usize {
        self.labels.len() - 1
    }

    /// The pair `(c'_{p,2l}, c'_{p,2l+1})` as tetron indices.
    pub fn qp_support(&self, chain: u8, l: usize) -> (usize, usize) {
        let off = (chain as usize - 1) * 2 * self.n;
        (off + 2 * l - 1, off + 2 * l)
    }

    /// `(γ_1, γ_2, γ_3, γ_4)` as tetron indices.
    pub fn mzm_support(&self) -> [usize; 4] {
        let m = 2 * self.n;
        [0, m - 1, m, 2 * m - 1]
    }

    pub fn support(&self, label: StabilizerLabel) -> Vec<usize> {
        match label {
            StabilizerLabel::Parity => self.mzm_support().to_vec(),
            StabilizerLabel::Qp { chain, l } => {
                let (a, b) = self.qp_support(chain, l);
                vec![a, b]
            }
        }
    }

    /// Stabilizers anticommuting with `E(J_1, J_2)` at the fixed point, where
    /// an elementary error on site `j` flips the sign of `c_{2j−1}` and `c_{2j}`.
    pub fn fixed_point_syndrome(&self, sample: &ErrorSample) -> Vec<StabilizerLabel> {
        let flipped = sample.flip_mask(self.n);
        self.labels
            .iter()
            .copied()
            .filter(|&label| self.support(label).iter().filter(|&&i| flipped[i]).count() % 2 == 1)
            .collect()
    }

    /// Whether `E(J_1, J_2)` anticommutes with `Z̄ = −iγ_1γ_2` at the fixed point.
    pub fn fixed_point_flips_logical_z(&self, sample: &ErrorSample) -> bool {
        let flipped = sample.flip_mask(self.n);
        let [g1, g2, _, _] = self.mzm_support();
        flipped[g1] ^ flipped[g2]
    }
}

pub fn stabilizer_set(spec: &CodeSpec) -> Result<StabilizerSet> {
    spec.validate()?;
    let (n, d) = (spec.n, spec.d);
    let mut labels = vec![StabilizerLabel::Parity];
    for chain in 1..=2u8 {
        labels.extend((1..=d).map(|l| StabilizerLabel::Qp { chain, l }));
        labels.extend((n - d..n).filter(|&l| d > 0 && l >= 1).map(|l| StabilizerLabel::Qp { chain, l }));
    }
    Ok(StabilizerSet { n, d, labels })
}

/// Discrete interval `[[l_min, l_max]]_p` of WQP labels on one chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub chain: u8,
    pub l_min: usize,
    pub l_max: usize,
}

impl Interval {
    pub fn len(&self) -> usize {
        self.l_max + 1 - self.l_min
    }

    pub fn is_empty(&self) -> bool {
        self.l_max < self.l_min
    }

    pub fn labels(&self) -> impl Iterator<Item = StabilizerLabel> + '_ {
        (self.l_min..=self.l_max).map(|l| StabilizerLabel::Qp { chain: self.chain, l })
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.chain == other.chain && self.l_min <= other.l_max && other.l_min <= self.l_max
    }
}

/// The detector regions `I_{p,1} = {1..d}_p`, `I_{p,2} = {n−d..n−1}_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionIntervals {
    pub lambda: usize,
    pub intervals: Vec<Interval>,
}

impl DetectionIntervals {
    pub fn labels(&self) -> Vec<StabilizerLabel> {
        self.intervals.iter().flat_map(|i| i.labels().collect::<Vec<_>>()).collect()
    }
}

/// Detection intervals for `C_d`; empty for `d = 0`. Fails when the detector
/// resolution cannot implement the code (`λ > d`).
pub fn detection_intervals(spec: &CodeSpec) -> Result<DetectionIntervals> {
    spec.validate()?;
    let (n, d) = (spec.n, spec.d);
    if d == 0 {
        return Ok(DetectionIntervals {
            lambda: spec.lambda,
            intervals: Vec::new(),
        });
    }
    if spec.lambda > d {
        return Err(Error::InvalidInput(format!(
            "C_{d} is not error-detecting for a detector with inverse resolution {} > d",
            spec.lambda
        )));
    }
    let intervals = (1..=2u8)
        .flat_map(|chain| {
            [
                Interval { chain, l_min: 1, l_max: d },
                Interval { chain, l_min: n - d, l_max: n - 1 },
            ]
        })
        .collect();
    Ok(DetectionIntervals {
        lambda: spec.lambda,
        intervals,
    })
}

/// `l_even(C_d) = 4d + 4`.
pub fn even_distance(spec: &CodeSpec) -> usize {
    4 * spec.d + 4
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ErrorWeight(pub usize);

/// `wt(E) = 2 · max(|J_1|, |J_2|)`.
pub fn weight(sample: &ErrorSample) -> ErrorWeight {
    ErrorWeight(2 * sample.j1().len().max(sample.j2().len()))
}

/// Number of Majorana operators in `E(J_1, J_2)`, `2(|J_1| + |J_2|)`; the
/// length that the even-parity distance bounds.
pub fn majorana_length(sample: &ErrorSample) -> usize {
    2 * (sample.j1().len() + sample.j2().len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn qp(chain: u8, l: usize) -> StabilizerLabel {
        StabilizerLabel::Qp { chain, l }
    }

    #[test]
    fn d_zero_is_parity_only() {
        let s = stabilizer_set(&CodeSpec::new(8, 0, 1).unwrap()).unwrap();
        assert_eq!(s.labels, vec![StabilizerLabel::Parity]);
        assert!(detection_intervals(&CodeSpec::new(8, 0, 1).unwrap()).unwrap().intervals.is_empty());
    }

    #[test]
    fn n8_d2_labels() {
        let s = stabilizer_set(&CodeSpec::new(8, 2, 2).unwrap()).unwrap();
        assert_eq!(s.labels.len(), 9);
        let expect: Vec<_> = std::iter::once(StabilizerLabel::Parity)
            .chain([1, 2, 6, 7].iter().map(|&l| qp(1, l)))
            .chain([1, 2, 6, 7].iter().map(|&l| qp(2, l)))
            .collect();
        assert_eq!(s.labels, expect);
    }

    #[test]
    fn d_at_half_length_rejected() {
        assert!(CodeSpec::new(8, 4, 1).is_err());
        assert!(CodeSpec::new(9, 4, 1).is_ok());
        assert!(CodeSpec::new(8, 1, 0).is_err());
    }

    #[test]
    fn n8_d2_intervals() {
        let iv = detection_intervals(&CodeSpec::new(8, 2, 2).unwrap()).unwrap();
        let expect = vec![
            Interval { chain: 1, l_min: 1, l_max: 2 },
            Interval { chain: 1, l_min: 6, l_max: 7 },
            Interval { chain: 2, l_min: 1, l_max: 2 },
            Interval { chain: 2, l_min: 6, l_max: 7 },
        ];
        assert_eq!(iv.intervals, expect);
    }

    #[test]
    fn coarse_detector_rejected() {
        let spec = CodeSpec::new(8, 2, 3).unwrap();
        assert!(detection_intervals(&spec).is_err());
    }

    #[test]
    fn intervals_cover_stabilizers_and_are_disjoint() {
        for n in 2usize..20 {
            for d in 0..n.div_ceil(2) {
                let spec = CodeSpec::new(n, d, d.max(1)).unwrap();
                let iv = detection_intervals(&spec).unwrap();
                for (a, x) in iv.intervals.iter().enumerate() {
                    assert_eq!(x.len(), d);
                    assert!(x.len() >= spec.lambda);
                    for y in &iv.intervals[a + 1..] {
                        assert!(!x.overlaps(y));
                    }
                }
                let mut from_iv: BTreeSet<_> = iv.labels().into_iter().collect();
                from_iv.insert(StabilizerLabel::Parity);
                let from_s: BTreeSet<_> = stabilizer_set(&spec).unwrap().labels.into_iter().collect();
                assert_eq!(from_iv, from_s, "n={n} d={d}");
                assert_eq!(stabilizer_set(&spec).unwrap().labels.len(), 4 * d + 1);
            }
        }
    }

    #[test]
    fn distance_values() {
        let dist = |d| even_distance(&CodeSpec::new(20, d, d.max(1)).unwrap());
        assert_eq!(dist(0), 4);
        assert_eq!(dist(2), 12);
        assert!((0..9).all(|d| dist(d + 1) > dist(d)));
    }

    #[test]
    fn weights() {
        let n = 5;
        assert_eq!(weight(&ErrorSample::new(n, vec![], vec![]).unwrap()), ErrorWeight(0));
        assert_eq!(weight(&ErrorSample::new(n, vec![1, 3], vec![2]).unwrap()), ErrorWeight(4));
        let full: Vec<usize> = (1..=n).collect();
        assert_eq!(weight(&ErrorSample::new(n, full.clone(), full).unwrap()), ErrorWeight(2 * n));
    }

    #[test]
    fn max_chain_weight_does_not_bound_logical_errors() {
        // E_{1,1} E_{2,1} flips Z̄, commutes with the parity stabilizer and has
        // wt = 2 < 4, yet carries 4 Majorana operators.
        let s = stabilizer_set(&CodeSpec::new(4, 0, 1).unwrap()).unwrap();
        let e = ErrorSample::new(4, vec![1], vec![1]).unwrap();
        assert!(s.fixed_point_flips_logical_z(&e));
        assert!(s.fixed_point_syndrome(&e).is_empty());
        assert_eq!(weight(&e), ErrorWeight(2));
        assert_eq!(majorana_length(&e), 4);
    }

    #[test]
    fn undetectable_logical_errors_are_heavy() {
        // Every fixed-point error that flips Z̄ and commutes with all of S_d
        // contains at least 4d + 4 Majorana operators.
        for n in 2..=6 {
            for d in 0..=2usize.min((n - 1) / 2) {
                let spec = CodeSpec::new(n, d, d.max(1)).unwrap();
                let s = stabilizer_set(&spec).unwrap();
                for m1 in 0u64..1 << n {
                    for m2 in 0u64..1 << n {
                        let sample = ErrorSample::from_masks(n, m1, m2);
                        if s.fixed_point_flips_logical_z(&sample)
                            && majorana_length(&sample) < even_distance(&spec)
                        {
                            assert!(
                                !s.fixed_point_syndrome(&sample).is_empty(),
                                "undetected logical error {sample:?} for n={n} d={d}"
                            );
                        }
                    }
                }
            }
        }
    }
}
