//! Check-node mixtures, the two ensemble families and their derived parameters.
//!
//! Edge-perspective fractions are held as exact rationals so that finite
//! instantiation can check divisibility without rounding; the analytic
//! routines read them as `f64`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{GldpcError, Result};
use crate::gf2::BitMatrix;
use crate::polywef::{Wef, DEFAULT_ENUMERATION_LIMIT};

pub type Rational = Ratio<i64>;

/// Tolerance on the sum of an edge-perspective distribution.
pub const DISTRIBUTION_SUM_TOL: f64 = 1e-12;

pub(crate) fn ratio_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// The local code placed at a check node: its exact WEF and, when known, a
/// parity-check matrix used to instantiate finite Tanner graphs.
#[derive(Clone, PartialEq, Eq)]
pub struct CheckNodeType {
    label: String,
    wef: Wef,
    parity: Option<BitMatrix>,
}

impl CheckNodeType {
    /// Single parity-check code of length `s` with the all-ones parity row.
    pub fn spc(s: usize) -> Result<Self> {
        let wef = Wef::spc(s)?;
        let parity = BitMatrix::from_rows(&[vec![1u8; s]])?;
        Self::build(format!("spc({s})"), wef, Some(parity))
    }

    /// Hamming code of length `s = 2^m - 1`; column `j` of the parity matrix
    /// is the binary representation of `j + 1`.
    pub fn hamming(s: usize) -> Result<Self> {
        let wef = Wef::hamming(s)?;
        let m = (s + 1).trailing_zeros() as usize;
        let mut h = BitMatrix::zeros(m, s);
        for col in 0..s {
            for bit in 0..m {
                h.set(bit, col, ((col + 1) >> bit) & 1 == 1);
            }
        }
        Self::build(format!("hamming({s})"), wef, Some(h))
    }

    /// The code defined by an explicit parity-check matrix; the WEF is enumerated.
    pub fn from_parity(parity: BitMatrix) -> Result<Self> {
        let wef = Wef::from_parity_matrix(&parity, DEFAULT_ENUMERATION_LIMIT)?;
        let label = format!("explicit({},{})", wef.length(), wef.dimension());
        Self::build(label, wef, Some(parity))
    }

    /// A check-node type known only through its WEF. Such types support the
    /// analytic routines but cannot be sampled.
    pub fn from_wef(wef: Wef) -> Result<Self> {
        let label = format!("wef({},{})", wef.length(), wef.dimension());
        Self::build(label, wef, None)
    }

    fn build(label: String, wef: Wef, parity: Option<BitMatrix>) -> Result<Self> {
        if wef.min_distance().is_some_and(|r| r < 2) {
            return Err(GldpcError::InvalidMixture(format!(
                "{label}: check-node codes need minimum distance >= 2, got {}",
                wef.min_distance().unwrap()
            )));
        }
        if let Some(h) = &parity {
            if h.cols() != wef.length() {
                return Err(GldpcError::InvalidParityMatrix(format!(
                    "{label}: parity matrix has {} columns, code length is {}",
                    h.cols(),
                    wef.length()
                )));
            }
            let rank = h.rank();
            if rank != wef.length() - wef.dimension() {
                return Err(GldpcError::InvalidParityMatrix(format!(
                    "{label}: parity matrix has rank {rank}, expected {}",
                    wef.length() - wef.dimension()
                )));
            }
        }
        Ok(Self { label, wef, parity })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn wef(&self) -> &Wef {
        &self.wef
    }

    pub fn parity(&self) -> Option<&BitMatrix> {
        self.parity.as_ref()
    }

    /// Code length `s`.
    pub fn length(&self) -> usize {
        self.wef.length()
    }

    /// Code dimension `k`.
    pub fn dimension(&self) -> usize {
        self.wef.dimension()
    }

    /// Minimum distance `r`; `None` for the zero code.
    pub fn min_distance(&self) -> Option<usize> {
        self.wef.min_distance()
    }

    /// Number of weight-2 codewords.
    pub fn a2(&self) -> u64 {
        self.wef.coef(2).to_u64().expect("A_2 <= C(s, 2) fits in u64")
    }
}

impl fmt::Debug for CheckNodeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CheckNodeType({})", self.label)
    }
}

/// Check-node types with their edge-perspective fractions `rho_t`.
#[derive(Clone, Debug, PartialEq)]
pub struct CnMixture {
    types: Vec<CheckNodeType>,
    rho: Vec<Rational>,
}

impl CnMixture {
    /// `rho` must be positive and sum to one within [`DISTRIBUTION_SUM_TOL`];
    /// it is renormalized to sum to exactly one.
    pub fn new(types: Vec<CheckNodeType>, rho: Vec<Rational>) -> Result<Self> {
        if types.is_empty() {
            return Err(GldpcError::InvalidMixture("no check-node types".into()));
        }
        if types.len() != rho.len() {
            return Err(GldpcError::InvalidMixture(format!(
                "{} check-node types but {} rho entries",
                types.len(),
                rho.len()
            )));
        }
        if let Some(t) = rho.iter().position(|r| !r.is_positive()) {
            return Err(GldpcError::InvalidMixture(format!(
                "rho[{t}] = {} must be positive",
                rho[t]
            )));
        }
        let rho = normalize("rho", rho)?;
        Ok(Self { types, rho })
    }

    /// Builds the mixture from node-perspective fractions `gamma_t` using
    /// `rho_t = gamma_t s_t / sum_u gamma_u s_u`.
    pub fn from_gamma(types: Vec<CheckNodeType>, gamma: Vec<Rational>) -> Result<Self> {
        if types.len() != gamma.len() {
            return Err(GldpcError::InvalidMixture(format!(
                "{} check-node types but {} gamma entries",
                types.len(),
                gamma.len()
            )));
        }
        let weighted: Vec<Rational> = types
            .iter()
            .zip(&gamma)
            .map(|(t, g)| g * Rational::from_integer(t.length() as i64))
            .collect();
        let total: Rational = weighted.iter().sum();
        if !total.is_positive() {
            return Err(GldpcError::InvalidMixture("gamma has no positive entry".into()));
        }
        Self::new(types, weighted.into_iter().map(|w| w / total).collect())
    }

    pub fn types(&self) -> &[CheckNodeType] {
        &self.types
    }

    pub fn rho(&self) -> &[Rational] {
        &self.rho
    }

    pub fn rho_f64(&self) -> Vec<f64> {
        self.rho.iter().map(ratio_to_f64).collect()
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    /// `rho_t / s_t`, which equals `gamma_t * int_rho`.
    pub fn edge_weights(&self) -> Vec<f64> {
        self.types
            .iter()
            .zip(&self.rho)
            .map(|(t, r)| ratio_to_f64(r) / t.length() as f64)
            .collect()
    }

    pub fn int_rho_exact(&self) -> Rational {
        self.types
            .iter()
            .zip(&self.rho)
            .map(|(t, r)| r / Rational::from_integer(t.length() as i64))
            .sum()
    }

    /// `int_0^1 rho(x) dx = sum_t rho_t / s_t`.
    pub fn int_rho(&self) -> f64 {
        ratio_to_f64(&self.int_rho_exact())
    }

    pub fn gamma_exact(&self) -> Vec<Rational> {
        let int_rho = self.int_rho_exact();
        self.types
            .iter()
            .zip(&self.rho)
            .map(|(t, r)| r / (Rational::from_integer(t.length() as i64) * int_rho))
            .collect()
    }

    /// Fraction of check nodes of each type, `gamma_t = rho_t / (s_t int_rho)`.
    pub fn gamma(&self) -> Vec<f64> {
        self.gamma_exact().iter().map(ratio_to_f64).collect()
    }

    pub fn param_c_exact(&self) -> Rational {
        self.types
            .iter()
            .zip(&self.rho)
            .filter(|(t, _)| t.min_distance() == Some(2))
            .map(|(t, r)| {
                Rational::from_integer(2 * t.a2() as i64) * r
                    / Rational::from_integer(t.length() as i64)
            })
            .sum()
    }

    /// `C = 2 sum_{t: r_t = 2} rho_t A_2 / s_t`; zero without distance-2 types.
    pub fn param_c(&self) -> f64 {
        ratio_to_f64(&self.param_c_exact())
    }

    /// Upper end of the relative-weight domain of the growth rate,
    /// `int_rho * sum_t gamma_t deg A_t`.
    pub fn alpha_max(&self) -> f64 {
        self.types
            .iter()
            .zip(self.edge_weights())
            .map(|(t, w)| w * t.wef().degree() as f64)
            .sum()
    }
}

/// VN-regular ensemble: `q` stacked block rows, the first block-diagonal and
/// the others column-permuted copies of it.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble1Spec {
    mixture: CnMixture,
    q: usize,
}

impl Ensemble1Spec {
    pub fn new(mixture: CnMixture, q: usize) -> Result<Self> {
        if q < 2 {
            return Err(GldpcError::InvalidEnsemble(format!(
                "variable-node degree q = {q}, need q >= 2"
            )));
        }
        Ok(Self { mixture, q })
    }

    pub fn mixture(&self) -> &CnMixture {
        &self.mixture
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn design_rate_exact(&self) -> Rational {
        let local_rate: Rational = self
            .mixture
            .types
            .iter()
            .zip(&self.mixture.rho)
            .map(|(t, r)| {
                r * Rational::new(t.dimension() as i64, t.length() as i64)
            })
            .sum();
        Rational::one() - Rational::from_integer(self.q as i64) * (Rational::one() - local_rate)
    }

    /// `R = 1 - q (1 - sum_t rho_t k_t / s_t)`. May be negative; see
    /// [`Ensemble1Spec::design_rate_is_negative`].
    pub fn design_rate(&self) -> f64 {
        ratio_to_f64(&self.design_rate_exact())
    }

    pub fn design_rate_is_negative(&self) -> bool {
        self.design_rate_exact().is_negative()
    }

    pub fn instance_plan(&self, n: usize) -> Result<InstancePlan> {
        require_positive_n(n)?;
        let per_row_factors: Vec<(String, Rational)> = self
            .mixture
            .types
            .iter()
            .zip(&self.mixture.rho)
            .enumerate()
            .map(|(t, (ty, r))| {
                (
                    format!("check nodes of type {t} per block row (N rho_t / s_t)"),
                    r / Rational::from_integer(ty.length() as i64),
                )
            })
            .collect();
        let per_row = integer_counts(n, &per_row_factors)?;
        let cn_counts: Vec<usize> = per_row.iter().map(|c| c * self.q).collect();
        Ok(InstancePlan {
            n,
            edges: n * self.q,
            check_nodes: cn_counts.iter().sum(),
            cn_counts,
            vn_counts: BTreeMap::from([(self.q, n)]),
            cn_counts_per_row: Some(per_row),
        })
    }
}

/// Unstructured ensemble: one uniform matching of all edge sockets, with
/// variable-node degrees drawn from the edge-perspective distribution `lambda`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble2Spec {
    mixture: CnMixture,
    lambda: BTreeMap<usize, Rational>,
}

impl Ensemble2Spec {
    pub fn new(mixture: CnMixture, lambda: BTreeMap<usize, Rational>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(GldpcError::InvalidEnsemble("lambda is empty".into()));
        }
        if let Some(&d) = lambda.keys().find(|&&d| d < 2) {
            return Err(GldpcError::InvalidEnsemble(format!(
                "lambda has degree {d}; variable-node degrees must be >= 2"
            )));
        }
        if let Some((d, v)) = lambda.iter().find(|(_, v)| v.is_negative()) {
            return Err(GldpcError::InvalidEnsemble(format!("lambda[{d}] = {v} is negative")));
        }
        let (degrees, values): (Vec<usize>, Vec<Rational>) = lambda.into_iter().unzip();
        let values = normalize("lambda", values)?;
        Ok(Self {
            mixture,
            lambda: degrees.into_iter().zip(values).collect(),
        })
    }

    pub fn mixture(&self) -> &CnMixture {
        &self.mixture
    }

    pub fn lambda(&self) -> &BTreeMap<usize, Rational> {
        &self.lambda
    }

    pub fn max_degree(&self) -> usize {
        *self.lambda.keys().next_back().unwrap()
    }

    pub fn int_lambda_exact(&self) -> Rational {
        self.lambda
            .iter()
            .map(|(&d, l)| l / Rational::from_integer(d as i64))
            .sum()
    }

    pub fn int_lambda(&self) -> f64 {
        ratio_to_f64(&self.int_lambda_exact())
    }

    pub fn lambda_prime_zero_exact(&self) -> Rational {
        self.lambda.get(&2).copied().unwrap_or_else(Rational::zero)
    }

    /// `lambda'(0) = lambda_2`.
    pub fn lambda_prime_zero(&self) -> f64 {
        ratio_to_f64(&self.lambda_prime_zero_exact())
    }

    /// Node-perspective degree fractions `lambda_d / (d int_lambda)`.
    pub fn node_perspective_lambda(&self) -> BTreeMap<usize, f64> {
        let int_lambda = self.int_lambda_exact();
        self.lambda
            .iter()
            .map(|(&d, l)| {
                (d, ratio_to_f64(&(l / (Rational::from_integer(d as i64) * int_lambda))))
            })
            .collect()
    }

    pub fn instance_plan(&self, n: usize) -> Result<InstancePlan> {
        require_positive_n(n)?;
        let inv_int_lambda = self.int_lambda_exact().recip();
        let mut factors = vec![("edges (N / int_lambda)".to_string(), inv_int_lambda)];
        for (&d, l) in &self.lambda {
            factors.push((
                format!("variable nodes of degree {d} (N lambda_d / (d int_lambda))"),
                l / Rational::from_integer(d as i64) * inv_int_lambda,
            ));
        }
        for (t, (ty, r)) in self.mixture.types.iter().zip(&self.mixture.rho).enumerate() {
            factors.push((
                format!("check nodes of type {t} (E rho_t / s_t)"),
                r / Rational::from_integer(ty.length() as i64) * inv_int_lambda,
            ));
        }
        let counts = integer_counts(n, &factors)?;
        let nd = self.lambda.len();
        let vn_counts = self.lambda.keys().copied().zip(counts[1..=nd].iter().copied()).collect();
        let cn_counts = counts[nd + 1..].to_vec();
        Ok(InstancePlan {
            n,
            edges: counts[0],
            check_nodes: cn_counts.iter().sum(),
            cn_counts,
            vn_counts,
            cn_counts_per_row: None,
        })
    }
}

/// Either ensemble family.
#[derive(Clone, Debug, PartialEq)]
pub enum Ensemble {
    One(Ensemble1Spec),
    Two(Ensemble2Spec),
}

impl Ensemble {
    pub fn mixture(&self) -> &CnMixture {
        match self {
            Ensemble::One(s) => s.mixture(),
            Ensemble::Two(s) => s.mixture(),
        }
    }

    pub fn tag(&self) -> EnsembleTag {
        match self {
            Ensemble::One(_) => EnsembleTag::E1,
            Ensemble::Two(_) => EnsembleTag::E2,
        }
    }

    pub fn instance_plan(&self, n: usize) -> Result<InstancePlan> {
        validate_finite_instance(self, n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EnsembleTag {
    E1,
    E2,
}

/// Exact node and edge counts of a finite instance of an ensemble.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstancePlan {
    pub n: usize,
    pub edges: usize,
    pub check_nodes: usize,
    /// Check nodes of each type, indexed like the mixture.
    pub cn_counts: Vec<usize>,
    /// Variable nodes of each degree.
    pub vn_counts: BTreeMap<usize, usize>,
    /// Ensemble 1 only: check nodes of each type in every block row.
    pub cn_counts_per_row: Option<Vec<usize>>,
}

/// Checks that every node count of a length-`n` instance is an integer and
/// returns the counts, or a divisibility error naming the offending quantity
/// and the smallest feasible `N' >= n`.
pub fn validate_finite_instance(spec: &Ensemble, n: usize) -> Result<InstancePlan> {
    match spec {
        Ensemble::One(s) => s.instance_plan(n),
        Ensemble::Two(s) => s.instance_plan(n),
    }
}

fn require_positive_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(GldpcError::InvalidArgument("block length N must be >= 1".into()));
    }
    Ok(())
}

/// Evaluates `n * factor` for each factor, failing on the first non-integer.
fn integer_counts(n: usize, factors: &[(String, Rational)]) -> Result<Vec<usize>> {
    let step = factors.iter().fold(1i64, |acc, (_, f)| acc.lcm(f.denom()));
    let n_r = Rational::from_integer(n as i64);
    factors
        .iter()
        .map(|(name, f)| {
            let value = n_r * f;
            if value.is_integer() {
                Ok(value.to_integer() as usize)
            } else {
                let step = step as usize;
                Err(GldpcError::Divisibility {
                    n,
                    quantity: name.clone(),
                    value: value.to_string(),
                    suggested_n: n.div_ceil(step) * step,
                })
            }
        })
        .collect()
}

fn normalize(name: &str, values: Vec<Rational>) -> Result<Vec<Rational>> {
    let total: Rational = values.iter().sum();
    if (ratio_to_f64(&total) - 1.0).abs() > DISTRIBUTION_SUM_TOL {
        return Err(GldpcError::InvalidMixture(format!(
            "{name} sums to {} (= {total}), must sum to 1",
            ratio_to_f64(&total)
        )));
    }
    Ok(values.into_iter().map(|v| v / total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn spc(s: usize) -> CheckNodeType {
        CheckNodeType::spc(s).unwrap()
    }

    fn ham(s: usize) -> CheckNodeType {
        CheckNodeType::hamming(s).unwrap()
    }

    fn single(t: CheckNodeType) -> CnMixture {
        CnMixture::new(vec![t], vec![Rational::one()]).unwrap()
    }

    #[test]
    fn int_rho_examples() {
        assert!((single(spc(3)).int_rho() - 1.0 / 3.0).abs() < 1e-15);
        let mix = CnMixture::new(vec![spc(3), ham(7)], vec![r(1, 2), r(1, 2)]).unwrap();
        assert_eq!(mix.int_rho_exact(), r(5, 21));
        for s in 2..20 {
            assert_eq!(single(spc(s)).int_rho_exact(), r(1, s as i64));
        }
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(single(spc(5)).gamma(), vec![1.0]);
        let mix = CnMixture::new(vec![spc(3), ham(7)], vec![r(1, 2), r(1, 2)]).unwrap();
        assert_eq!(mix.gamma_exact(), vec![r(7, 10), r(3, 10)]);
    }

    #[test]
    fn param_c_examples() {
        assert_eq!(single(spc(3)).param_c(), 2.0);
        assert_eq!(single(ham(15)).param_c(), 0.0);
        let mix = CnMixture::new(vec![spc(3), ham(7)], vec![r(1, 5), r(4, 5)]).unwrap();
        assert_eq!(mix.param_c_exact(), r(2, 5));
    }

    #[test]
    fn design_rate_examples() {
        let e = |t, q| Ensemble1Spec::new(single(t), q).unwrap();
        assert_eq!(e(ham(15), 2).design_rate_exact(), r(7, 15));
        assert!((e(ham(63), 2).design_rate() - (1.0 - 12.0 / 63.0)).abs() < 1e-15);
        assert_eq!(e(spc(6), 3).design_rate_exact(), r(1, 2));
        assert!(e(ham(7), 3).design_rate_is_negative());
        for s in 3..12 {
            for q in 2..5 {
                assert_eq!(
                    e(spc(s), q).design_rate_exact(),
                    Rational::one() - r(q as i64, s as i64)
                );
            }
        }
    }

    #[test]
    fn lambda_examples() {
        let mk = |pairs: &[(usize, Rational)]| {
            Ensemble2Spec::new(single(spc(3)), pairs.iter().copied().collect()).unwrap()
        };
        assert_eq!(mk(&[(2, Rational::one())]).lambda_prime_zero(), 1.0);
        assert_eq!(mk(&[(3, Rational::one())]).lambda_prime_zero(), 0.0);
        assert_eq!(mk(&[(2, r(1, 10)), (3, r(9, 10))]).lambda_prime_zero(), 0.1);

        let np = mk(&[(2, Rational::one())]).node_perspective_lambda();
        assert_eq!(np, BTreeMap::from([(2, 1.0)]));
        let np = mk(&[(2, r(1, 2)), (4, r(1, 2))]).node_perspective_lambda();
        assert!((np[&2] - 2.0 / 3.0).abs() < 1e-15);
        assert!((np[&4] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_distributions() {
        let err = CnMixture::new(vec![spc(3), ham(7)], vec![r(1, 2), r(2, 5)]).unwrap_err();
        assert!(err.to_string().contains("rho sums to 0.9"), "{err}");
        assert!(CnMixture::new(vec![spc(3)], vec![]).is_err());
        assert!(CnMixture::new(vec![spc(3), spc(4)], vec![Rational::one(), Rational::zero()]).is_err());
        assert!(Ensemble1Spec::new(single(spc(3)), 1).is_err());
        assert!(Ensemble2Spec::new(single(spc(3)), BTreeMap::from([(1, Rational::one())])).is_err());
        assert!(Ensemble2Spec::new(single(spc(3)), BTreeMap::from([(2, r(1, 2))])).is_err());
    }

    #[test]
    fn parity_rank_is_checked() {
        // rank-1 matrix claimed for a code the WEF says has dimension 4 of 7
        let h = BitMatrix::from_bitstrings(&["1111111"]).unwrap();
        let bad = CheckNodeType::build("bad".into(), Wef::hamming(7).unwrap(), Some(h));
        assert!(matches!(bad, Err(GldpcError::InvalidParityMatrix(_))));
        let explicit = CheckNodeType::from_parity(
            BitMatrix::from_bitstrings(&["1010101", "0110011", "0001111"]).unwrap(),
        )
        .unwrap();
        assert_eq!(explicit.wef(), ham(7).wef());
    }

    #[test]
    fn rejects_distance_one_codes() {
        let h = BitMatrix::from_bitstrings(&["110"]).unwrap();
        assert!(CheckNodeType::from_parity(h).is_err());
    }

    #[test]
    fn instance_plan_ensemble1() {
        let spec = Ensemble1Spec::new(single(spc(3)), 2).unwrap();
        let plan = spec.instance_plan(3).unwrap();
        assert_eq!(plan.edges, 6);
        assert_eq!(plan.check_nodes, 2);
        assert_eq!(plan.cn_counts_per_row, Some(vec![1]));
        match spec.instance_plan(4).unwrap_err() {
            GldpcError::Divisibility { n, suggested_n, value, .. } => {
                assert_eq!((n, suggested_n), (4, 6));
                assert_eq!(value, "4/3");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn instance_plan_ensemble2() {
        let spec = Ensemble2Spec::new(single(spc(3)), BTreeMap::from([(2, Rational::one())])).unwrap();
        let plan = spec.instance_plan(3).unwrap();
        assert_eq!(plan.edges, 6);
        assert_eq!(plan.cn_counts, vec![2]);
        assert_eq!(plan.vn_counts, BTreeMap::from([(2, 3)]));

        let mixed = Ensemble2Spec::new(
            CnMixture::new(vec![spc(3), ham(7)], vec![r(1, 5), r(4, 5)]).unwrap(),
            BTreeMap::from([(2, r(1, 10)), (3, r(9, 10))]),
        )
        .unwrap();
        let err = mixed.instance_plan(200).unwrap_err();
        assert!(matches!(err, GldpcError::Divisibility { suggested_n: 294, .. }), "{err}");
        let plan = mixed.instance_plan(147).unwrap();
        assert_eq!(plan.edges, 420);
        assert_eq!(plan.vn_counts, BTreeMap::from([(2, 21), (3, 126)]));
        assert_eq!(plan.cn_counts, vec![28, 48]);
    }

    #[test]
    fn zero_n_is_rejected() {
        let spec = Ensemble1Spec::new(single(spc(3)), 2).unwrap();
        assert!(matches!(spec.instance_plan(0), Err(GldpcError::InvalidArgument(_))));
    }

    fn arb_mixture() -> impl Strategy<Value = CnMixture> {
        let kinds = prop::collection::vec((0usize..6, 1i64..20), 1..5);
        kinds.prop_map(|v| {
            let types: Vec<_> = v
                .iter()
                .map(|&(k, _)| match k {
                    0 => spc(3),
                    1 => spc(6),
                    2 => ham(7),
                    3 => ham(15),
                    4 => spc(4),
                    _ => ham(31),
                })
                .collect();
            let total: i64 = v.iter().map(|&(_, w)| w).sum();
            let rho = v.iter().map(|&(_, w)| r(w, total)).collect();
            CnMixture::new(types, rho).unwrap()
        })
    }

    proptest! {
        #[test]
        fn gamma_sums_to_one_and_round_trips(mix in arb_mixture()) {
            let gamma = mix.gamma();
            prop_assert!((gamma.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let int_rho = mix.int_rho();
            for ((g, t), rho) in gamma.iter().zip(mix.types()).zip(mix.rho_f64()) {
                prop_assert!((g * t.length() as f64 * int_rho - rho).abs() < 1e-12);
            }
        }

        #[test]
        fn param_c_is_linear_under_splitting(mix in arb_mixture(), idx in 0usize..4) {
            let idx = idx % mix.len();
            let mut types = mix.types().to_vec();
            let mut rho = mix.rho().to_vec();
            let half = rho[idx] / Rational::from_integer(2);
            rho[idx] = half;
            types.push(types[idx].clone());
            rho.push(half);
            let split = CnMixture::new(types, rho).unwrap();
            prop_assert_eq!(split.param_c_exact(), mix.param_c_exact());
        }

        #[test]
        fn instance_counts_are_consistent(mix in arb_mixture(), q in 2usize..5, mult in 1usize..4) {
            let spec = Ensemble1Spec::new(mix.clone(), q).unwrap();
            let step = mix.rho().iter().zip(mix.types())
                .map(|(r, t)| (r / Rational::from_integer(t.length() as i64)).denom().to_owned())
                .fold(1i64, |a, d| a.lcm(&d)) as usize;
            let plan = spec.instance_plan(step * mult).unwrap();
            let cn_edges: usize = plan.cn_counts.iter().zip(mix.types()).map(|(c, t)| c * t.length()).sum();
            let vn_edges: usize = plan.vn_counts.iter().map(|(d, c)| d * c).sum();
            prop_assert_eq!(cn_edges, plan.edges);
            prop_assert_eq!(vn_edges, plan.edges);
        }
    }
}
