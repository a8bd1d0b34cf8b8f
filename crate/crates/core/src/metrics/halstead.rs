use num_traits::Float;
use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HalsteadCounts {
    /// Distinct operators.
    pub eta1: u64,
    /// Distinct operands.
    pub eta2: u64,
    pub n1: u64,
    pub n2: u64,
    pub loc: u64,
    pub bytes: u64,
}

impl HalsteadCounts {
    pub fn new(eta1: u64, eta2: u64, n1: u64, n2: u64) -> Self {
        HalsteadCounts {
            eta1,
            eta2,
            n1,
            n2,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("degenerate counts {0:?}: {1}")]
    Degenerate(HalsteadCounts, &'static str),
    #[error("inconsistent counts {0:?}: {1}")]
    Invalid(HalsteadCounts, &'static str),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalsteadReport<F: Float> {
    pub counts: HalsteadCounts,
    /// N1 + N2.
    pub length: u64,
    /// η1 + η2.
    pub vocabulary: u64,
    pub volume: F,
    pub estimated_length: F,
    /// Length deviation in percent.
    pub delta_n: F,
    pub level: F,
    pub lambda: F,
    pub bugs: F,
    /// N1 / N2, absent when N2 is zero.
    pub ratio: Option<F>,
}

/// Volume of the ideal program: two operators and two operands.
pub fn ideal_volume<F: Float>() -> F {
    let four = F::from(4.0).unwrap();
    four * four.log2()
}

fn ld<F: Float>(x: u64) -> F {
    if x == 0 {
        F::zero()
    } else {
        let x = F::from(x).unwrap();
        x * x.log2()
    }
}

pub fn halstead<F: Float>(counts: HalsteadCounts) -> Result<HalsteadReport<F>, MetricsError> {
    let c = counts;
    if (c.eta1 > 0 && c.n1 < c.eta1) || (c.eta2 > 0 && c.n2 < c.eta2) {
        return Err(MetricsError::Invalid(c, "total occurrences below distinct count"));
    }
    if (c.eta1 == 0 && c.n1 > 0) || (c.eta2 == 0 && c.n2 > 0) {
        return Err(MetricsError::Invalid(c, "occurrences without distinct symbols"));
    }
    let length = c.n1 + c.n2;
    let vocabulary = c.eta1 + c.eta2;
    if length == 0 {
        return Err(MetricsError::Degenerate(c, "N = 0"));
    }
    if vocabulary < 2 {
        return Err(MetricsError::Degenerate(c, "vocabulary below 2 gives zero volume"));
    }
    let estimated_length = ld::<F>(c.eta1) + ld::<F>(c.eta2);
    if estimated_length <= F::zero() {
        return Err(MetricsError::Degenerate(c, "N_T = 0"));
    }
    let n = F::from(length).unwrap();
    let volume = n * F::from(vocabulary).unwrap().log2();
    let (hi, lo) = if estimated_length > n { (estimated_length, n) } else { (n, estimated_length) };
    let hundred = F::from(100.0).unwrap();
    let v_star = ideal_volume::<F>();
    let level = v_star / volume;
    Ok(HalsteadReport {
        counts: c,
        length,
        vocabulary,
        volume,
        estimated_length,
        delta_n: hundred * (hi - lo) / hi,
        level,
        lambda: v_star * level,
        bugs: volume / F::from(300.0).unwrap(),
        ratio: (c.n2 > 0).then(|| F::from(c.n1).unwrap() / F::from(c.n2).unwrap()),
    })
}
