//! The evaluation map `L : R_d -> F_q^N`, `N = q^2 + q + 1`, sending a form
//! to its values at the canonical lifts of the rational points, together
//! with its kernel, the plane-filling ideal in fixed degree, and the exact
//! distribution of point counts when `L` is onto.

use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::field::{Field, FieldElement};
use crate::forms::{
    basis_len, decode_index, enumerate_points, filling_generators, lemma32_form, MonomialBasis,
    TernaryForm,
};
use crate::linalg::{self, Matrix};
use crate::par;

/// Largest form count the brute-force oracle will enumerate.
pub const BRUTE_FORCE_CAP: u64 = 1 << 27;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("L is not surjective for q={q}, d={d}; the binomial formula does not apply")]
    NotSurjective { q: u32, d: u32 },
    #[error("d={d} is below 2q-1={min}; refusing to extrapolate the binomial formula")]
    DegreeTooSmall { d: u32, min: u32 },
    #[error("{q}^{dim} forms exceed the brute-force cap of 2^27")]
    TooLarge { q: u32, dim: usize },
}

/// Rows are rational points in enumeration order, columns are monomials in
/// basis order; entry `(r, c)` is monomial `c` at the lift of point `r`.
#[derive(Debug, Clone)]
pub struct EvalMatrix {
    pub field: Arc<Field>,
    pub d: u32,
    pub matrix: Matrix,
}

impl EvalMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.rows
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols
    }

    /// `L(f)` as a value vector.
    pub fn apply(&self, f: &TernaryForm) -> Vec<FieldElement> {
        self.matrix.mul_vec(&self.field, f.coeffs())
    }
}

pub fn build_matrix(field: &Arc<Field>, d: u32) -> EvalMatrix {
    let points = enumerate_points(field);
    let basis = MonomialBasis::new(d);
    let mut matrix = Matrix::zeros(points.len(), basis.len());
    for pt in &points {
        for (c, e) in basis.exponents.iter().enumerate() {
            let v = (0..3).fold(FieldElement::ONE, |acc, i| {
                field.mul(acc, field.pow(pt.coords[i], e[i] as u64))
            });
            matrix.set(pt.index, c, v);
        }
    }
    EvalMatrix { field: field.clone(), d, matrix }
}

/// Rank of `L` and a kernel basis read off the reduced echelon form.
pub fn rank_kernel(m: &EvalMatrix) -> (usize, Vec<Vec<FieldElement>>) {
    linalg::rank_kernel(&m.field, &m.matrix)
}

/// The degree-`d` part of the ideal generated by the plane-filling forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JPart {
    pub dimension: usize,
    /// Rows of the reduced echelon form of the spanning set.
    pub basis: Vec<Vec<FieldElement>>,
}

pub fn j_degree_part(field: &Arc<Field>, d: u32) -> JPart {
    let q = field.q();
    if d < q + 1 {
        return JPart { dimension: 0, basis: Vec::new() };
    }
    let gens = filling_generators(field);
    let mut rows = Vec::new();
    for e in MonomialBasis::new(d - q - 1).exponents {
        let m = TernaryForm::monomial(field.clone(), e, FieldElement::ONE);
        for g in &gens {
            rows.push(m.mul(g).expect("same field").coeffs().to_vec());
        }
    }
    let mut span = Matrix::from_rows(&rows, basis_len(d));
    let pivots = linalg::rref(field, &mut span);
    let basis: Vec<_> = (0..pivots.len()).map(|r| span.row(r).to_vec()).collect();
    JPart { dimension: basis.len(), basis }
}

/// Whether `rank L = N`. When `d >= 2q - 1` the explicit delta forms are
/// also checked at every point, and both certificates must agree.
pub fn verify_surjective(field: &Arc<Field>, d: u32) -> bool {
    let m = build_matrix(field, d);
    let (rank, _) = rank_kernel(&m);
    let full = rank == m.rows();
    if d + 1 >= 2 * field.q() {
        let deltas_ok = enumerate_points(field).iter().all(|target| {
            let f = lemma32_form(field, d, target).expect("degree checked");
            m.apply(&f)
                .iter()
                .enumerate()
                .all(|(r, v)| v.is_zero() != (r == target.index))
        });
        return full && deltas_ok;
    }
    full
}

/// Whether `ker L` equals the degree-`d` part of the plane-filling ideal:
/// equal dimensions and every spanning vector of the latter killed by `L`.
pub fn verify_kernel_is_j(field: &Arc<Field>, d: u32) -> bool {
    let m = build_matrix(field, d);
    let (rank, _) = rank_kernel(&m);
    let j = j_degree_part(field, d);
    m.cols() - rank == j.dimension
        && j.basis.iter().all(|v| m.matrix.mul_vec(field, v).iter().all(|x| x.is_zero()))
}

/// Number of forms `f` with `#C_f(F_q) = n`, indexed by `n = 0..=N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionExact {
    pub field: Arc<Field>,
    pub d: u32,
    pub counts: Vec<BigUint>,
}

impl DistributionExact {
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn count(&self, n: usize) -> BigUint {
        self.counts.get(n).cloned().unwrap_or_default()
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

/// `q^nullity * C(N, n) * (q-1)^(N-n)`, valid when `L` is onto.
pub fn exact_distribution(field: &Arc<Field>, d: u32) -> Result<DistributionExact, EvalError> {
    let q = field.q();
    if d + 1 < 2 * q {
        return Err(EvalError::DegreeTooSmall { d, min: 2 * q - 1 });
    }
    let m = build_matrix(field, d);
    let (rank, _) = rank_kernel(&m);
    let n_pts = m.rows();
    if rank != n_pts {
        return Err(EvalError::NotSurjective { q, d });
    }
    let nullity = (m.cols() - rank) as u32;
    let kernel = BigUint::from(q).pow(nullity);
    let counts = (0..=n_pts as u64)
        .map(|n| {
            &kernel * binomial(n_pts as u64, n) * BigUint::from(q - 1).pow((n_pts as u64 - n) as u32)
        })
        .collect();
    Ok(DistributionExact { field: field.clone(), d, counts })
}

/// Tallies the zero count of every form by direct evaluation.
pub fn brute_force_distribution(
    field: &Arc<Field>,
    d: u32,
    workers: usize,
) -> Result<DistributionExact, EvalError> {
    let q = field.q();
    let dim = basis_len(d);
    let total = (q as u64).checked_pow(dim as u32).filter(|&t| t <= BRUTE_FORCE_CAP);
    let Some(total) = total else {
        return Err(EvalError::TooLarge { q, dim });
    };
    let m = build_matrix(field, d);
    let n_pts = m.rows();
    let chunks = 64u64.min(total);
    let per = total.div_ceil(chunks);
    let parts = par::run_indexed(chunks as usize, workers, |c| {
        let mut tally = vec![0u64; n_pts + 1];
        let coeff_of = |code: u16| FieldElement(code);
        for idx in c as u64 * per..((c as u64 + 1) * per).min(total) {
            let coeffs: Vec<_> = decode_index(idx, q, dim).into_iter().map(coeff_of).collect();
            let zeros = m.matrix.mul_vec(field, &coeffs).iter().filter(|v| v.is_zero()).count();
            tally[zeros] += 1;
        }
        tally
    });
    let mut counts = vec![BigUint::default(); n_pts + 1];
    for tally in parts {
        for (acc, t) in counts.iter_mut().zip(tally) {
            *acc += t;
        }
    }
    Ok(DistributionExact { field: field.clone(), d, counts })
}
