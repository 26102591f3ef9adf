use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ensemble::{CnMixture, Ensemble, Ensemble1Spec, Ensemble2Spec, EnsembleTag};
use crate::error::{GldpcError, Result};
use crate::gf2::{popcount, words_for, xor_into, BitMatrix};

/// Default cap on the code dimension for exhaustive minimum-distance search.
pub const DEFAULT_K_LIMIT: usize = 28;

/// One check node: its type index and the variable node on each socket, in
/// socket order. Repeated entries are multi-edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckNode {
    pub type_index: usize,
    pub sockets: Vec<usize>,
}

/// A concrete Tanner graph drawn from one of the ensembles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampledCode {
    n: usize,
    cns: Vec<CheckNode>,
    vn_degrees: Vec<usize>,
    seed: u64,
    ensemble_tag: EnsembleTag,
    #[serde(skip)]
    local_parity: Vec<BitMatrix>,
}

fn local_parity(mix: &CnMixture) -> Result<Vec<BitMatrix>> {
    mix.types()
        .iter()
        .enumerate()
        .map(|(t, ty)| ty.parity().cloned().ok_or(GldpcError::MissingParity(t)))
        .collect()
}

/// Ensemble 1: block row 1 is block-diagonal (types in index order), rows
/// `2..q` are independent uniform column permutations of it.
pub fn sample_e1(spec: &Ensemble1Spec, n: usize, seed: u64) -> Result<SampledCode> {
    let plan = spec.instance_plan(n)?;
    let local = local_parity(spec.mixture())?;
    let per_row = plan.cn_counts_per_row.expect("ensemble 1 plans carry per-row counts");
    let lengths: Vec<usize> = spec.mixture().types().iter().map(|t| t.length()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut cns = Vec::with_capacity(plan.check_nodes);
    for row in 0..spec.q() {
        if row > 0 {
            perm = (0..n).collect();
            perm.shuffle(&mut rng);
        }
        let mut offset = 0;
        for (t, (&count, &s)) in per_row.iter().zip(&lengths).enumerate() {
            for _ in 0..count {
                cns.push(CheckNode {
                    type_index: t,
                    sockets: perm[offset..offset + s].to_vec(),
                });
                offset += s;
            }
        }
        debug_assert_eq!(offset, n);
    }
    SampledCode::new(n, cns, local, seed, EnsembleTag::E1)
}

/// Ensemble 2: configuration model. Variable-node sockets are laid out by
/// degree, check-node sockets by type, and one uniform permutation of the `E`
/// edges joins them.
pub fn sample_e2(spec: &Ensemble2Spec, n: usize, seed: u64) -> Result<SampledCode> {
    let plan = spec.instance_plan(n)?;
    let local = local_parity(spec.mixture())?;

    let mut vn_of_socket = Vec::with_capacity(plan.edges);
    let mut vn = 0;
    for (&d, &count) in &plan.vn_counts {
        for _ in 0..count {
            vn_of_socket.extend(std::iter::repeat_n(vn, d));
            vn += 1;
        }
    }
    debug_assert_eq!(vn, n);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vn_of_socket.shuffle(&mut rng);

    let mut cns = Vec::with_capacity(plan.check_nodes);
    let mut offset = 0;
    for (t, (ty, &count)) in spec.mixture().types().iter().zip(&plan.cn_counts).enumerate() {
        let s = ty.length();
        for _ in 0..count {
            cns.push(CheckNode {
                type_index: t,
                sockets: vn_of_socket[offset..offset + s].to_vec(),
            });
            offset += s;
        }
    }
    debug_assert_eq!(offset, plan.edges);
    SampledCode::new(n, cns, local, seed, EnsembleTag::E2)
}

/// Samples from either ensemble.
pub fn sample(ensemble: &Ensemble, n: usize, seed: u64) -> Result<SampledCode> {
    match ensemble {
        Ensemble::One(s) => sample_e1(s, n, seed),
        Ensemble::Two(s) => sample_e2(s, n, seed),
    }
}

impl SampledCode {
    /// Builds a code from explicit check nodes. Each socket list must match
    /// the column count of its type's parity matrix.
    pub fn new(
        n: usize,
        cns: Vec<CheckNode>,
        local_parity: Vec<BitMatrix>,
        seed: u64,
        ensemble_tag: EnsembleTag,
    ) -> Result<Self> {
        let mut vn_degrees = vec![0usize; n];
        for (c, cn) in cns.iter().enumerate() {
            let h = local_parity.get(cn.type_index).ok_or_else(|| {
                GldpcError::InvalidArgument(format!("check node {c} has unknown type {}", cn.type_index))
            })?;
            if cn.sockets.len() != h.cols() {
                return Err(GldpcError::InvalidArgument(format!(
                    "check node {c} has {} sockets but its type has length {}",
                    cn.sockets.len(),
                    h.cols()
                )));
            }
            for &v in &cn.sockets {
                *vn_degrees.get_mut(v).ok_or_else(|| {
                    GldpcError::InvalidArgument(format!("check node {c} references variable node {v} >= N = {n}"))
                })? += 1;
            }
        }
        Ok(Self {
            n,
            cns,
            vn_degrees,
            seed,
            ensemble_tag,
            local_parity,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn check_nodes(&self) -> &[CheckNode] {
        &self.cns
    }

    pub fn vn_degrees(&self) -> &[usize] {
        &self.vn_degrees
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn ensemble_tag(&self) -> EnsembleTag {
        self.ensemble_tag
    }

    pub fn local_parity(&self) -> &[BitMatrix] {
        &self.local_parity
    }

    pub fn edges(&self) -> usize {
        self.vn_degrees.iter().sum()
    }

    /// Variable-node count for each degree.
    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for &d in &self.vn_degrees {
            *hist.entry(d).or_insert(0) += 1;
        }
        hist
    }

    fn local_ok(&self, cn: &CheckNode, bit: impl Fn(usize) -> bool) -> bool {
        let s = cn.sockets.len();
        let mut word = vec![0u64; words_for(s)];
        for (j, &v) in cn.sockets.iter().enumerate() {
            if bit(v) {
                word[j / 64] |= 1 << (j % 64);
            }
        }
        self.local_parity[cn.type_index].annihilates(&word)
    }

    /// True iff every check node sees a local codeword of its type when `v`
    /// is read along its sockets.
    pub fn is_codeword(&self, v: &[bool]) -> Result<bool> {
        if v.len() != self.n {
            return Err(GldpcError::InvalidArgument(format!(
                "word has length {} but N = {}",
                v.len(),
                self.n
            )));
        }
        Ok(self.cns.iter().all(|cn| self.local_ok(cn, |i| v[i])))
    }

    /// True iff some weight-1 word is a codeword, checked node by node on the
    /// check nodes incident to each variable node.
    pub fn has_weight_one_codeword(&self) -> bool {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (c, cn) in self.cns.iter().enumerate() {
            for &v in &cn.sockets {
                if incident[v].last() != Some(&c) {
                    incident[v].push(c);
                }
            }
        }
        incident
            .iter()
            .enumerate()
            .any(|(v, cs)| cs.iter().all(|&c| self.local_ok(&self.cns[c], |i| i == v)))
    }

    /// Global parity-check matrix: the rows of each local matrix mapped
    /// through the sockets, with multi-edges cancelling mod 2.
    pub fn parity_check_matrix(&self) -> BitMatrix {
        let total: usize = self.cns.iter().map(|cn| self.local_parity[cn.type_index].rows()).sum();
        let mut h = BitMatrix::zeros(total, self.n);
        let mut row = 0;
        for cn in &self.cns {
            let local = &self.local_parity[cn.type_index];
            for i in 0..local.rows() {
                for (j, &v) in cn.sockets.iter().enumerate() {
                    if local.get(i, j) {
                        let cur = h.get(row, v);
                        h.set(row, v, !cur);
                    }
                }
                row += 1;
            }
        }
        h
    }

    /// Code dimension `N - rank(H)`.
    pub fn dimension(&self) -> usize {
        self.n - self.parity_check_matrix().rank()
    }

    /// Exact minimum distance by Gray-code enumeration of all nonzero
    /// codewords; `None` for the zero code.
    pub fn min_distance(&self, k_limit: usize) -> Result<Option<usize>> {
        let basis = self.code_basis(k_limit)?;
        Ok(min_weight(&basis, words_for(self.n), 0))
    }

    /// True iff a nonzero codeword of weight `<= w` exists. Stops at the first
    /// hit, so it is never slower than [`Self::min_distance`].
    pub fn has_codeword_of_weight_at_most(&self, w: usize, k_limit: usize) -> Result<bool> {
        if w == 0 {
            return Ok(false);
        }
        if self.has_weight_one_codeword() {
            return Ok(true);
        }
        if w == 1 {
            return Ok(false);
        }
        let basis = self.code_basis(k_limit)?;
        Ok(min_weight(&basis, words_for(self.n), w).is_some_and(|d| d <= w))
    }

    fn code_basis(&self, k_limit: usize) -> Result<Vec<Vec<u64>>> {
        let basis = self.parity_check_matrix().null_space_basis();
        if basis.len() > k_limit {
            return Err(GldpcError::DimensionLimit {
                dimension: basis.len(),
                limit: k_limit,
            });
        }
        Ok(basis)
    }
}

/// Minimum weight over the nonzero span of `basis`, stopping early once a
/// weight `<= stop_at` is seen.
fn min_weight(basis: &[Vec<u64>], width: usize, stop_at: usize) -> Option<usize> {
    let k = basis.len();
    assert!(k < 64, "dimension {k} is too large to enumerate");
    let mut best: Option<usize> = None;
    let mut cur = vec![0u64; width];
    for i in 1u64..(1u64 << k) {
        xor_into(&mut cur, &basis[i.trailing_zeros() as usize]);
        let w = popcount(&cur);
        if best.is_none_or(|b| w < b) {
            best = Some(w);
            if w <= stop_at.max(1) {
                break;
            }
        }
    }
    best
}
