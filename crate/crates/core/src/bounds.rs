//! Small-weight results for the unstructured ensemble and the finite-length
//! probability bound of the VN-regular ensemble.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::ensemble::{Ensemble1Spec, Ensemble2Spec, Rational};
use crate::error::{GldpcError, Result};
use crate::growth::g_eval;
use crate::numfmt::csv_num;
use crate::polywef::IntPoly;

/// Exact and limiting value of the coefficient of `x^(2j)` in
/// `prod_t A_t(x)^(count_t)` for one finite instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma1Report {
    pub n: Option<usize>,
    pub m: u64,
    pub edges: Option<usize>,
    pub j: usize,
    #[serde(serialize_with = "ser_display")]
    pub exact_coef: BigUint,
    /// `(E C / 2)^j / j!`
    pub limit_value: f64,
    pub ratio: f64,
    #[serde(skip)]
    pub ratio_exact: Option<BigRational>,
}

fn ser_display<S: Serializer, T: std::fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Coefficient of `x^(2j)` in `prod_t polys[t]^counts[t]`, computed with every
/// intermediate product truncated at degree `2j`.
pub fn lemma1_exact(polys: &[IntPoly], counts: &[u64], j: usize) -> BigInt {
    assert_eq!(polys.len(), counts.len());
    let max_deg = 2 * j;
    polys
        .iter()
        .zip(counts)
        .fold(IntPoly::one(), |acc, (p, &c)| {
            acc.mul_truncated(&p.pow_truncated(c, max_deg), max_deg)
        })
        .coef(max_deg)
}

/// `(E C / 2)^j / j!` in floating point.
pub fn lemma1_limit(edges: f64, c: f64, j: usize) -> f64 {
    let base = edges * c / 2.0;
    if base == 0.0 {
        return 0.0;
    }
    (j as f64 * base.ln() - ln_factorial(j)).exp()
}

/// `(E C / 2)^j / j!` exactly.
pub fn lemma1_limit_exact(edges: u64, c: Rational, j: usize) -> BigRational {
    let base = BigRational::new(BigInt::from(edges) * BigInt::from(*c.numer()), BigInt::from(2 * *c.denom()));
    let factorial: BigInt = (1..=j).map(BigInt::from).product();
    num_traits::pow(base, j) / BigRational::from_integer(factorial)
}

fn ln_factorial(j: usize) -> f64 {
    (2..=j).map(|i| (i as f64).ln()).sum()
}

fn report(
    n: Option<usize>,
    edges: Option<usize>,
    counts: &[u64],
    j: usize,
    exact: BigInt,
    limit: BigRational,
) -> Lemma1Report {
    let exact_coef = exact.to_biguint().expect("products of nonnegative polynomials");
    let limit_value = limit.to_f64().unwrap_or(f64::INFINITY);
    let ratio_exact = (!limit.is_zero())
        .then(|| BigRational::from_integer(BigInt::from(exact_coef.clone())) / &limit);
    let ratio = ratio_exact
        .as_ref()
        .map_or(f64::NAN, |r| r.to_f64().unwrap_or(f64::NAN));
    Lemma1Report {
        n,
        m: counts.iter().sum(),
        edges,
        j,
        exact_coef,
        limit_value,
        ratio,
        ratio_exact,
    }
}

/// Coefficient limit for arbitrary enumerator-like polynomials with
/// `p(0) = 1` and no linear term: the limit is `(sum_t count_t p_t[2])^j / j!`,
/// i.e. only the weight-2 terms survive.
pub fn lemma1_report(polys: &[IntPoly], counts: &[u64], j: usize) -> Result<Lemma1Report> {
    if j == 0 {
        return Err(GldpcError::InvalidArgument("j must be >= 1".into()));
    }
    if polys.len() != counts.len() {
        return Err(GldpcError::InvalidArgument(format!(
            "{} polynomials but {} counts",
            polys.len(),
            counts.len()
        )));
    }
    for (t, p) in polys.iter().enumerate() {
        if !p.coef(0).is_one() || !p.coef(1).is_zero() || p.coeffs().iter().any(Signed::is_negative) {
            return Err(GldpcError::InvalidArgument(format!(
                "polynomial {t} must have nonnegative coefficients, constant term 1 and no linear term"
            )));
        }
    }
    let weight2: BigInt = polys
        .iter()
        .zip(counts)
        .map(|(p, &c)| p.coef(2) * BigInt::from(c))
        .sum();
    let factorial: BigInt = (1..=j).map(BigInt::from).product();
    let limit = BigRational::new(num_traits::pow(weight2, j), factorial);
    Ok(report(None, None, counts, j, lemma1_exact(polys, counts, j), limit))
}

/// Exact coefficient versus its limit for each block length in `ns`.
pub fn lemma1_convergence(spec: &Ensemble2Spec, j: usize, ns: &[usize]) -> Result<Vec<Lemma1Report>> {
    if j == 0 {
        return Err(GldpcError::InvalidArgument("j must be >= 1".into()));
    }
    let mix = spec.mixture();
    let polys: Vec<IntPoly> = mix.types().iter().map(|t| t.wef().to_poly()).collect();
    let c = mix.param_c_exact();
    ns.par_iter()
        .map(|&n| {
            let plan = spec.instance_plan(n)?;
            let counts: Vec<u64> = plan.cn_counts.iter().map(|&c| c as u64).collect();
            let exact = lemma1_exact(&polys, &counts, j);
            let limit = lemma1_limit_exact(plan.edges as u64, c, j);
            Ok(report(Some(n), Some(plan.edges), &counts, j, exact, limit))
        })
        .collect()
}

pub const LEMMA1_CSV_HEADER: &str = "N,m,E,j,exact_coef,limit_value,ratio";

/// CSV with columns `N,m,E,j,exact_coef,limit_value,ratio`; the exact
/// coefficient is written as a decimal integer.
pub fn lemma1_csv(reports: &[Lemma1Report]) -> String {
    let mut out = String::from(LEMMA1_CSV_HEADER);
    out.push('\n');
    for r in reports {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            opt(r.n),
            r.m,
            opt(r.edges),
            r.j,
            r.exact_coef,
            csv_num(r.limit_value),
            csv_num(r.ratio),
        ));
    }
    out
}

/// `lim Pr(d_min = 1) = 1 - exp(-lambda'(0) C / 2)`.
pub fn prob_dmin_one(spec: &Ensemble2Spec) -> f64 {
    let x = spec.lambda_prime_zero() * spec.mixture().param_c();
    -(-x / 2.0).exp_m1()
}

/// Outcome of the union bound on `Pr(d_min <= alpha N)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundOutcome {
    Finite { value: f64 },
    /// `lambda'(0) C >= 1`: the series diverges and the bound says nothing.
    Vacuous { lambda_prime_c: f64 },
}

impl BoundOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            BoundOutcome::Finite { value } => Some(*value),
            BoundOutcome::Vacuous { .. } => None,
        }
    }
}

/// `Pr(d_min <= alpha* N) <= 1 / sqrt(1 - lambda'(0) C) - 1`, the closed form
/// of `sum_{j>=1} C(2j, j) (lambda'(0) C / 4)^j`.
pub fn prob_dmin_bound(spec: &Ensemble2Spec) -> BoundOutcome {
    let x = spec.lambda_prime_zero() * spec.mixture().param_c();
    central_binomial_closed_form(x)
}

fn central_binomial_closed_form(x: f64) -> BoundOutcome {
    if x >= 1.0 {
        BoundOutcome::Vacuous { lambda_prime_c: x }
    } else {
        BoundOutcome::Finite {
            value: 1.0 / (1.0 - x).sqrt() - 1.0,
        }
    }
}

/// Partial sums of `sum_{j>=1} C(2j, j) (x/4)^j`, stopped once the geometric
/// tail estimate drops below `tol`. Returns the sum and the number of terms.
/// Requires `0 <= x < 1`.
pub fn central_binomial_series(x: f64, tol: f64) -> (f64, usize) {
    assert!((0.0..1.0).contains(&x), "series converges only for 0 <= x < 1");
    let mut term = x / 2.0; // C(2,1) x/4
    let mut sum = 0.0;
    let mut j = 1usize;
    loop {
        sum += term;
        // ratio of consecutive terms is x (2j+1) / (2j+2) < x
        let next = term * x * (2 * j + 1) as f64 / (2 * j + 2) as f64;
        if next * 1.0 / (1.0 - x) < tol || next == 0.0 {
            return (sum, j);
        }
        term = next;
        j += 1;
    }
}

/// The finite-length bound `max_{1<=d<=d0} exp[N G(d/N) + o(N)]` with
/// `o(N) = ln[d0 (8 N alpha (1 - alpha))^((q-1)/2)]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FiniteNBound {
    /// Natural log of the unclamped maximum.
    pub log_bound: f64,
    /// `min(1, exp(log_bound))`.
    pub bound: f64,
    pub argmax_d: usize,
}

pub fn finite_n_prob_bound(spec: &Ensemble1Spec, n: usize, d0: usize) -> Result<FiniteNBound> {
    if d0 < 1 || d0 >= n {
        return Err(GldpcError::InvalidArgument(format!(
            "need 1 <= d0 < N, got d0 = {d0}, N = {n}"
        )));
    }
    spec.instance_plan(n)?;
    let q = spec.q() as f64;
    let nf = n as f64;
    let terms: Vec<(usize, f64)> = (1..=d0)
        .into_par_iter()
        .map(|d| {
            let alpha = d as f64 / nf;
            let g = g_eval(spec, alpha)?;
            let o_n = (d0 as f64).ln() + 0.5 * (q - 1.0) * (8.0 * nf * alpha * (1.0 - alpha)).ln();
            Ok((d, nf * g + o_n))
        })
        .collect::<Result<_>>()?;
    let (argmax_d, log_bound) = terms
        .into_iter()
        .fold((0, f64::NEG_INFINITY), |best, t| if t.1 > best.1 { t } else { best });
    Ok(FiniteNBound {
        log_bound,
        bound: log_bound.exp().min(1.0),
        argmax_d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{CheckNodeType, CnMixture};
    use std::collections::BTreeMap;

    fn e2(types: Vec<CheckNodeType>, rho: Vec<Rational>, lambda: &[(usize, Rational)]) -> Ensemble2Spec {
        Ensemble2Spec::new(CnMixture::new(types, rho).unwrap(), lambda.iter().copied().collect()).unwrap()
    }

    fn spc3_e2() -> Ensemble2Spec {
        e2(
            vec![CheckNodeType::spc(3).unwrap()],
            vec![Rational::one()],
            &[(2, Rational::one())],
        )
    }

    #[test]
    fn lemma1_exact_examples() {
        let p = vec![IntPoly::from_i64(&[1, 0, 3, 0])];
        for m in [1u64, 2, 5, 17, 1000] {
            assert_eq!(lemma1_exact(&p, &[m], 1), BigInt::from(3 * m));
            assert_eq!(lemma1_exact(&p, &[m], 2), BigInt::from(9 * m * (m - 1) / 2));
        }
        assert_eq!(lemma1_exact(&p, &[0], 1), BigInt::zero());
        assert_eq!(lemma1_exact(&[], &[], 3), BigInt::zero());
    }

    #[test]
    fn lemma1_exact_matches_untruncated_expansion() {
        let polys = vec![IntPoly::from_i64(&[1, 0, 3, 1]), IntPoly::from_i64(&[1, 0, 2, 0, 1])];
        for m1 in 0..=10u64 {
            for m2 in 0..=10u64 {
                let full = &polys[0].pow(m1) * &polys[1].pow(m2);
                for j in 1..=3 {
                    assert_eq!(lemma1_exact(&polys, &[m1, m2], j), full.coef(2 * j));
                }
            }
        }
    }

    #[test]
    fn lemma1_limit_examples() {
        assert!((lemma1_limit(30.0, 2.0, 1) - 30.0).abs() < 1e-12);
        assert_eq!(lemma1_limit(30.0, 0.0, 3), 0.0);
        let m = 50.0;
        assert!((lemma1_limit(3.0 * m, 2.0, 2) - 9.0 * m * m / 2.0).abs() < 1e-8);
        assert_eq!(
            lemma1_limit_exact(150, Rational::from_integer(2), 2),
            BigRational::from_integer(BigInt::from(11250))
        );
    }

    #[test]
    fn lemma1_convergence_spc3() {
        let spec = spc3_e2();
        let reports = lemma1_convergence(&spec, 1, &[3, 30, 300]).unwrap();
        for r in &reports {
            assert_eq!(r.ratio_exact, Some(BigRational::one()));
        }
        let reports = lemma1_convergence(&spec, 2, &[1500]).unwrap();
        let r = &reports[0];
        assert_eq!(r.m, 1000);
        assert_eq!(r.ratio_exact, Some(BigRational::new(BigInt::from(999), BigInt::from(1000))));
        assert!((r.ratio - 0.999).abs() < 1e-15);
        assert!(lemma1_convergence(&spec, 0, &[3]).is_err());
        assert!(matches!(lemma1_convergence(&spec, 1, &[4]), Err(GldpcError::Divisibility { .. })));
    }

    #[test]
    fn lemma1_report_rejects_linear_terms() {
        assert!(lemma1_report(&[IntPoly::from_i64(&[1, 1])], &[3], 1).is_err());
        assert!(lemma1_report(&[IntPoly::from_i64(&[1, 0, 1])], &[3], 0).is_err());
    }

    #[test]
    fn lemma1_csv_schema() {
        let reports = lemma1_convergence(&spc3_e2(), 2, &[30, 300]).unwrap();
        let csv = lemma1_csv(&reports);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(LEMMA1_CSV_HEADER));
        assert_eq!(lines.next(), Some("30,20,60,2,1710,1800,0.95"));
    }

    #[test]
    fn prob_dmin_one_examples() {
        assert!((prob_dmin_one(&spc3_e2()) - 0.632_120_558_828_557_7).abs() < 1e-15);
        let no_deg2 = e2(
            vec![CheckNodeType::spc(3).unwrap()],
            vec![Rational::one()],
            &[(3, Rational::one())],
        );
        assert_eq!(prob_dmin_one(&no_deg2), 0.0);
        let hamming_only = e2(
            vec![CheckNodeType::hamming(7).unwrap()],
            vec![Rational::one()],
            &[(2, Rational::one())],
        );
        assert_eq!(prob_dmin_one(&hamming_only), 0.0);
    }

    #[test]
    fn prob_dmin_bound_examples() {
        let mixed = e2(
            vec![CheckNodeType::spc(3).unwrap(), CheckNodeType::hamming(7).unwrap()],
            vec![Rational::new(1, 5), Rational::new(4, 5)],
            &[(2, Rational::new(1, 10)), (3, Rational::new(9, 10))],
        );
        let v = prob_dmin_bound(&mixed).value().unwrap();
        assert!((v - 0.020_620_726_159_657_54).abs() < 1e-15);
        assert_eq!(
            prob_dmin_bound(&spc3_e2()),
            BoundOutcome::Vacuous { lambda_prime_c: 2.0 }
        );
        let zero = e2(
            vec![CheckNodeType::hamming(7).unwrap()],
            vec![Rational::one()],
            &[(2, Rational::one())],
        );
        assert_eq!(prob_dmin_bound(&zero), BoundOutcome::Finite { value: 0.0 });
    }

    #[test]
    fn series_matches_closed_form() {
        for &x in &[0.0, 0.01, 0.04, 0.3, 0.7, 0.95] {
            let (sum, _) = central_binomial_series(x, 1e-13);
            let closed = central_binomial_closed_form(x).value().unwrap();
            assert!((sum - closed).abs() < 1e-10, "x = {x}: {sum} vs {closed}");
        }
    }

    #[test]
    fn finite_n_bound_guards() {
        let spec = Ensemble1Spec::new(
            CnMixture::new(vec![CheckNodeType::spc(6).unwrap()], vec![Rational::one()]).unwrap(),
            3,
        )
        .unwrap();
        assert!(finite_n_prob_bound(&spec, 600, 0).is_err());
        assert!(finite_n_prob_bound(&spec, 600, 600).is_err());
        assert!(matches!(
            finite_n_prob_bound(&spec, 601, 6),
            Err(GldpcError::Divisibility { .. })
        ));
        let b = finite_n_prob_bound(&spec, 600, 6).unwrap();
        assert!(b.bound <= 1.0 && b.bound > 0.0);
        assert!((1..=6).contains(&b.argmax_d));
        let _ = BTreeMap::<usize, usize>::new();
    }
}
