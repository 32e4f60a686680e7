//! Homogeneous ternary forms over `F_q`, rational points of the plane, and
//! the `GL_3` substitution action.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{Field, FieldElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("forms are defined over different fields")]
    MixedFields,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("expected {expected} coefficients, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("coefficient code {0} is out of range")]
    BadCoefficient(u32),
    #[error("operation needs degree >= 1")]
    DegreeZero,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("shard index {index} out of range for {count} shards")]
    BadShard { index: usize, count: usize },
    #[error("degree {d} is below 2q-1 = {min}")]
    DegreeTooSmall { d: u32, min: u32 },
}

/// Number of monomials of degree `d` in three variables.
#[inline]
pub const fn basis_len(d: u32) -> usize {
    ((d + 1) * (d + 2) / 2) as usize
}

/// Position of `x^i y^j z^(d-i-j)` in the graded-lex basis (`x > y > z`).
#[inline]
pub const fn monomial_index(d: u32, i: u32, j: u32) -> usize {
    let a = d - i;
    (a * (a + 1) / 2 + (a - j)) as usize
}

/// The degree-`d` monomials, descending `x` exponent then descending `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    pub d: u32,
    pub exponents: Vec<[u32; 3]>,
}

impl MonomialBasis {
    pub fn new(d: u32) -> MonomialBasis {
        let mut exponents = Vec::with_capacity(basis_len(d));
        for i in (0..=d).rev() {
            for j in (0..=d - i).rev() {
                exponents.push([i, j, d - i - j]);
            }
        }
        MonomialBasis { d, exponents }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn index_of(&self, e: [u32; 3]) -> usize {
        monomial_index(self.d, e[0], e[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    fn slot(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::Z => 2,
        }
    }
}

/// A rational point of the projective plane in canonical form: the first
/// nonzero coordinate is 1. The coordinates double as the affine lift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    pub coords: [FieldElement; 3],
    pub index: usize,
}

/// Rational points in canonical order: `(1:a:b)` with `(a, b)`
/// lexicographic, then `(0:1:c)`, then `(0:0:1)`.
pub fn enumerate_points(field: &Field) -> Vec<ProjPoint> {
    let one = FieldElement::ONE;
    let zero = FieldElement::ZERO;
    let mut pts = Vec::with_capacity((field.q() * field.q() + field.q() + 1) as usize);
    for a in field.elements() {
        for b in field.elements() {
            pts.push([one, a, b]);
        }
    }
    for c in field.elements() {
        pts.push([zero, one, c]);
    }
    pts.push([zero, zero, one]);
    pts.into_iter()
        .enumerate()
        .map(|(index, coords)| ProjPoint { coords, index })
        .collect()
}

/// Scales a nonzero vector so its first nonzero coordinate is 1 and returns
/// its position in [`enumerate_points`] order.
pub fn point_index(field: &Field, v: [FieldElement; 3]) -> Option<usize> {
    let lead = v.iter().position(|c| !c.is_zero())?;
    let s = field.inv(v[lead]).ok()?;
    let w: Vec<u32> = v.iter().map(|&c| field.mul(c, s).0 as u32).collect();
    let q = field.q() as usize;
    Some(match lead {
        0 => w[1] as usize * q + w[2] as usize,
        1 => q * q + w[2] as usize,
        _ => q * q + q,
    })
}

/// A degree-`d` ternary form with coefficients aligned to [`MonomialBasis`].
#[derive(Clone, PartialEq, Eq)]
pub struct TernaryForm {
    field: Arc<Field>,
    d: u32,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TernaryForm(q={}, d={}, {:?})", self.field.q(), self.d, self.codes())
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let basis = MonomialBasis::new(self.d);
        let mut first = true;
        for (c, e) in self.coeffs.iter().zip(&basis.exponents) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut mono = String::new();
            for (name, &k) in ["x", "y", "z"].iter().zip(e) {
                match k {
                    0 => {}
                    1 => mono.push_str(name),
                    _ => mono.push_str(&format!("{name}^{k}")),
                }
            }
            match (c.0, mono.is_empty()) {
                (1, false) => write!(f, "{mono}")?,
                (_, true) => write!(f, "{c}")?,
                _ => write!(f, "{c}*{mono}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn same_field(a: &Arc<Field>, b: &Arc<Field>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl TernaryForm {
    pub fn zero(field: Arc<Field>, d: u32) -> TernaryForm {
        TernaryForm { field, d, coeffs: vec![FieldElement::ZERO; basis_len(d)] }
    }

    pub fn new(field: Arc<Field>, d: u32, coeffs: Vec<FieldElement>) -> Result<TernaryForm, FormError> {
        if coeffs.len() != basis_len(d) {
            return Err(FormError::WrongLength { expected: basis_len(d), got: coeffs.len() });
        }
        if let Some(bad) = coeffs.iter().find(|c| c.0 as u32 >= field.q()) {
            return Err(FormError::BadCoefficient(bad.0 as u32));
        }
        Ok(TernaryForm { field, d, coeffs })
    }

    pub fn from_codes(field: Arc<Field>, d: u32, codes: &[u16]) -> Result<TernaryForm, FormError> {
        TernaryForm::new(field, d, codes.iter().map(|&c| FieldElement(c)).collect())
    }

    /// The form `c * x^i y^j z^k`.
    pub fn monomial(field: Arc<Field>, e: [u32; 3], c: FieldElement) -> TernaryForm {
        let d = e[0] + e[1] + e[2];
        let mut f = TernaryForm::zero(field, d);
        f.coeffs[monomial_index(d, e[0], e[1])] = c;
        f
    }

    /// Builds a form from `(coefficient, exponents)` terms, summing repeats.
    pub fn from_terms(field: Arc<Field>, d: u32, terms: &[(i64, [u32; 3])]) -> TernaryForm {
        let mut f = TernaryForm::zero(field, d);
        for &(c, e) in terms {
            assert_eq!(e[0] + e[1] + e[2], d, "term degree");
            let idx = monomial_index(d, e[0], e[1]);
            f.coeffs[idx] = f.field.add(f.coeffs[idx], f.field.from_int(c));
        }
        f
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient codes in basis order; the debug-dump serialization.
    pub fn codes(&self) -> Vec<u16> {
        self.coeffs.iter().map(|c| c.0).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn coeff(&self, e: [u32; 3]) -> FieldElement {
        self.coeffs[monomial_index(self.d, e[0], e[1])]
    }

    fn check_compatible(&self, other: &TernaryForm) -> Result<(), FormError> {
        if !same_field(&self.field, &other.field) {
            return Err(FormError::MixedFields);
        }
        if self.d != other.d {
            return Err(FormError::DegreeMismatch(self.d, other.d));
        }
        Ok(())
    }

    pub fn add(&self, other: &TernaryForm) -> Result<TernaryForm, FormError> {
        self.check_compatible(other)?;
        let f = &self.field;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(TernaryForm { field: self.field.clone(), d: self.d, coeffs })
    }

    pub fn sub(&self, other: &TernaryForm) -> Result<TernaryForm, FormError> {
        self.check_compatible(other)?;
        let f = &self.field;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(TernaryForm { field: self.field.clone(), d: self.d, coeffs })
    }

    pub fn scale(&self, s: FieldElement) -> TernaryForm {
        let f = &self.field;
        TernaryForm {
            field: self.field.clone(),
            d: self.d,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, s)).collect(),
        }
    }

    pub fn mul(&self, other: &TernaryForm) -> Result<TernaryForm, FormError> {
        if !same_field(&self.field, &other.field) {
            return Err(FormError::MixedFields);
        }
        let f = &self.field;
        let d = self.d + other.d;
        let (ba, bb) = (MonomialBasis::new(self.d), MonomialBasis::new(other.d));
        let mut out = TernaryForm::zero(self.field.clone(), d);
        for (&ca, ea) in self.coeffs.iter().zip(&ba.exponents) {
            if ca.is_zero() {
                continue;
            }
            for (&cb, eb) in other.coeffs.iter().zip(&bb.exponents) {
                if cb.is_zero() {
                    continue;
                }
                let idx = monomial_index(d, ea[0] + eb[0], ea[1] + eb[1]);
                out.coeffs[idx] = f.add(out.coeffs[idx], f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> TernaryForm {
        let mut acc = TernaryForm::monomial(self.field.clone(), [0, 0, 0], FieldElement::ONE);
        for _ in 0..e {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }

    /// Value at an affine vector.
    pub fn eval(&self, v: [FieldElement; 3]) -> FieldElement {
        let f = &self.field;
        let d = self.d as usize;
        let mut powers = [[FieldElement::ONE; 64]; 3];
        assert!(d < 64, "degree too large for evaluation buffer");
        for (axis, row) in powers.iter_mut().enumerate() {
            for e in 1..=d {
                row[e] = f.mul(row[e - 1], v[axis]);
            }
        }
        let mut acc = FieldElement::ZERO;
        let mut idx = 0;
        for i in (0..=d).rev() {
            for j in (0..=d - i).rev() {
                let c = self.coeffs[idx];
                idx += 1;
                if c.is_zero() {
                    continue;
                }
                let m = f.mul(f.mul(powers[0][i], powers[1][j]), powers[2][d - i - j]);
                acc = f.add(acc, f.mul(c, m));
            }
        }
        acc
    }

    /// Value at the canonical lift of a rational point.
    pub fn evaluate(&self, pt: &ProjPoint) -> FieldElement {
        self.eval(pt.coords)
    }

    /// Formal partial derivative.
    pub fn partial(&self, var: Var) -> Result<TernaryForm, FormError> {
        if self.d == 0 {
            return Err(FormError::DegreeZero);
        }
        let f = &self.field;
        let slot = var.slot();
        let mut out = TernaryForm::zero(self.field.clone(), self.d - 1);
        for (i, e) in MonomialBasis::new(self.d - 1).exponents.iter().enumerate() {
            let mut src = *e;
            src[slot] += 1;
            let c = self.coeff(src);
            out.coeffs[i] = f.mul(c, f.from_int(src[slot] as i64));
        }
        Ok(out)
    }

    /// The substitution `f o M`: `(f o M)(v) = f(M v)`.
    pub fn act(&self, m: &Gl3Matrix) -> TernaryForm {
        let f = &self.field;
        let d = self.d;
        // Linear forms L_r = sum_s M[r][s] x_s and their powers.
        let lin: Vec<TernaryForm> = (0..3)
            .map(|r| {
                let mut l = TernaryForm::zero(self.field.clone(), 1);
                l.coeffs = vec![m.entries[r][0], m.entries[r][1], m.entries[r][2]];
                l
            })
            .collect();
        let pows: Vec<Vec<TernaryForm>> = lin
            .iter()
            .map(|l| {
                let mut v = vec![TernaryForm::monomial(self.field.clone(), [0, 0, 0], FieldElement::ONE)];
                for e in 1..=d as usize {
                    let next = v[e - 1].mul(l).expect("same field");
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = TernaryForm::zero(self.field.clone(), d);
        for (c, e) in self.coeffs.iter().zip(MonomialBasis::new(d).exponents) {
            if c.is_zero() {
                continue;
            }
            let term = pows[0][e[0] as usize]
                .mul(&pows[1][e[1] as usize])
                .and_then(|t| t.mul(&pows[2][e[2] as usize]))
                .expect("same field");
            for (o, t) in out.coeffs.iter_mut().zip(&term.coeffs) {
                *o = f.add(*o, f.mul(*c, *t));
            }
        }
        out
    }
}

/// An invertible 3x3 matrix over `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gl3Matrix {
    pub entries: [[FieldElement; 3]; 3],
}

fn det3(f: &Field, m: &[[FieldElement; 3]; 3]) -> FieldElement {
    let t = |a: FieldElement, b: FieldElement, c: FieldElement| f.mul(f.mul(a, b), c);
    let pos = f.add(
        f.add(t(m[0][0], m[1][1], m[2][2]), t(m[0][1], m[1][2], m[2][0])),
        t(m[0][2], m[1][0], m[2][1]),
    );
    let neg = f.add(
        f.add(t(m[0][2], m[1][1], m[2][0]), t(m[0][0], m[1][2], m[2][1])),
        t(m[0][1], m[1][0], m[2][2]),
    );
    f.sub(pos, neg)
}

impl Gl3Matrix {
    pub fn new(field: &Field, entries: [[FieldElement; 3]; 3]) -> Result<Gl3Matrix, FormError> {
        if det3(field, &entries).is_zero() {
            return Err(FormError::SingularMatrix);
        }
        Ok(Gl3Matrix { entries })
    }

    pub fn from_codes(field: &Field, codes: [[u16; 3]; 3]) -> Result<Gl3Matrix, FormError> {
        Gl3Matrix::new(field, codes.map(|r| r.map(FieldElement)))
    }

    pub fn identity() -> Gl3Matrix {
        let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
        Gl3Matrix { entries: [[o, z, z], [z, o, z], [z, z, o]] }
    }

    pub fn scalar(field: &Field, s: FieldElement) -> Result<Gl3Matrix, FormError> {
        let z = FieldElement::ZERO;
        Gl3Matrix::new(field, [[s, z, z], [z, s, z], [z, z, s]])
    }

    pub fn det(&self, field: &Field) -> FieldElement {
        det3(field, &self.entries)
    }

    pub fn mul(&self, field: &Field, other: &Gl3Matrix) -> Gl3Matrix {
        let mut out = [[FieldElement::ZERO; 3]; 3];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).fold(FieldElement::ZERO, |acc, k| {
                    field.add(acc, field.mul(self.entries[r][k], other.entries[k][c]))
                });
            }
        }
        Gl3Matrix { entries: out }
    }

    pub fn apply(&self, field: &Field, v: [FieldElement; 3]) -> [FieldElement; 3] {
        let mut out = [FieldElement::ZERO; 3];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..3).fold(FieldElement::ZERO, |acc, k| {
                field.add(acc, field.mul(self.entries[r][k], v[k]))
            });
        }
        out
    }

    pub fn inverse(&self, field: &Field) -> Gl3Matrix {
        let m = &self.entries;
        let dinv = field.inv(self.det(field)).expect("invertible by construction");
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            field.sub(field.mul(m[r0][c0], m[r1][c1]), field.mul(m[r0][c1], m[r1][c0]))
        };
        // Adjugate: inverse[i][j] = cofactor(j, i) / det.
        let adj = [
            [cof(1, 2, 1, 2), field.neg(cof(0, 2, 1, 2)), cof(0, 1, 1, 2)],
            [field.neg(cof(1, 2, 0, 2)), cof(0, 2, 0, 2), field.neg(cof(0, 1, 0, 2))],
            [cof(1, 2, 0, 1), field.neg(cof(0, 2, 0, 1)), cof(0, 1, 0, 1)],
        ];
        Gl3Matrix { entries: adj.map(|row| row.map(|a| field.mul(a, dinv))) }
    }
}

/// Every invertible 3x3 matrix, in odometer order over the nine entries.
pub fn all_gl3(field: &Field) -> Vec<Gl3Matrix> {
    let q = field.q() as usize;
    let total = q.pow(9);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut v = idx;
        let mut e = [[FieldElement::ZERO; 3]; 3];
        for r in (0..3).rev() {
            for c in (0..3).rev() {
                e[r][c] = FieldElement((v % q) as u16);
                v /= q;
            }
        }
        if !det3(field, &e).is_zero() {
            out.push(Gl3Matrix { entries: e });
        }
    }
    out
}

/// A small generating set of `GL_3(F_q)`: a diagonal matrix with a
/// primitive element, a transposition, a 3-cycle and an elementary
/// transvection.
pub fn gl3_generators(field: &Field) -> Vec<Gl3Matrix> {
    let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
    let g = field.primitive_element();
    vec![
        Gl3Matrix { entries: [[g, z, z], [z, o, z], [z, z, o]] },
        Gl3Matrix { entries: [[z, o, z], [o, z, z], [z, z, o]] },
        Gl3Matrix { entries: [[z, o, z], [z, z, o], [o, z, z]] },
        Gl3Matrix { entries: [[o, o, z], [z, o, z], [z, z, o]] },
    ]
}

/// The linear map on coefficient vectors induced by `f -> f o M`, stored
/// column-major: column `c` holds the coefficients of `monomial_c o M`.
pub fn action_matrix(field: &Arc<Field>, d: u32, m: &Gl3Matrix) -> Vec<u16> {
    let n = basis_len(d);
    let mut out = vec![0u16; n * n];
    for (c, e) in MonomialBasis::new(d).exponents.iter().enumerate() {
        let img = TernaryForm::monomial(field.clone(), *e, FieldElement::ONE).act(m);
        for (r, v) in img.coeffs.iter().enumerate() {
            out[c * n + r] = v.0;
        }
    }
    out
}

/// Forms of degree `d` enumerated in odometer order (last coefficient
/// fastest). A shard takes the forms whose leading block, the first
/// [`lead_len`] coefficients read as a base-`q` integer, is congruent to the
/// shard index modulo the shard count.
pub fn iterate_forms(
    field: Arc<Field>,
    d: u32,
    shard: (usize, usize),
) -> Result<impl Iterator<Item = TernaryForm>, FormError> {
    let (index, count) = shard;
    if count == 0 || index >= count {
        return Err(FormError::BadShard { index, count });
    }
    let n = basis_len(d);
    let q = field.q() as u64;
    let lead = lead_len(n);
    let tail = (n - lead) as u32;
    let blocks = q.pow(lead as u32);
    let per_block = q.pow(tail);
    Ok((index as u64..blocks)
        .step_by(count)
        .flat_map(move |b| b * per_block..(b + 1) * per_block)
        .map(move |idx| {
            let codes = decode_index(idx, field.q(), n);
            TernaryForm::from_codes(field.clone(), d, &codes).expect("codes in range")
        }))
}

/// Length of the leading coefficient block used for sharding.
pub fn lead_len(n: usize) -> usize {
    n.min(3)
}

/// Coefficient codes of the form at odometer position `idx`.
pub fn decode_index(mut idx: u64, q: u32, n: usize) -> Vec<u16> {
    let mut codes = vec![0u16; n];
    for c in codes.iter_mut().rev() {
        *c = (idx % q as u64) as u16;
        idx /= q as u64;
    }
    codes
}

pub fn encode_index(codes: &[u16], q: u32) -> u64 {
    codes.iter().fold(0u64, |acc, &c| acc * q as u64 + c as u64)
}

/// Uniform random forms. Draw `i` of seed `s` uses a ChaCha8 stream seeded
/// with `s` at stream number `i`, so a draw depends only on `(s, i)`.
#[derive(Debug, Clone)]
pub struct FormSampler {
    field: Arc<Field>,
    d: u32,
    seed: u64,
}

impl FormSampler {
    pub fn new(field: Arc<Field>, d: u32, seed: u64) -> FormSampler {
        FormSampler { field, d, seed }
    }

    pub fn fill(&self, draw: u64, out: &mut [u16]) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(draw);
        let q = self.field.q();
        for c in out.iter_mut() {
            *c = rng.random_range(0..q) as u16;
        }
    }

    pub fn draw(&self, draw: u64) -> TernaryForm {
        let mut codes = vec![0u16; basis_len(self.d)];
        self.fill(draw, &mut codes);
        TernaryForm::from_codes(self.field.clone(), self.d, &codes).expect("codes in range")
    }
}

/// `sample_form`: the `draw`-th uniform form for `seed`.
pub fn sample_form(field: Arc<Field>, d: u32, seed: u64, draw: u64) -> TernaryForm {
    FormSampler::new(field, d, seed).draw(draw)
}

/// The generators `x^q y - y^q x`, `y^q z - z^q y`, `z^q x - x^q z` of the
/// ideal of plane-filling curves.
pub fn filling_generators(field: &Arc<Field>) -> [TernaryForm; 3] {
    let q = field.q();
    let d = q + 1;
    let g = |a: usize, b: usize| {
        let mut e1 = [0u32; 3];
        e1[a] = q;
        e1[b] = 1;
        let mut e2 = [0u32; 3];
        e2[b] = q;
        e2[a] = 1;
        TernaryForm::from_terms(field.clone(), d, &[(1, e1), (-1, e2)])
    };
    [g(0, 1), g(1, 2), g(2, 0)]
}

/// A deterministic matrix sending `(1:0:0)` to `target`: its first column is
/// the target lift, completed by standard basis vectors.
pub fn transport_matrix(field: &Field, target: &ProjPoint) -> Gl3Matrix {
    let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
    let [a, b, c] = target.coords;
    let cols: [[FieldElement; 3]; 3] = if !a.is_zero() {
        [[a, b, c], [z, o, z], [z, z, o]]
    } else if !b.is_zero() {
        [[a, b, c], [o, z, z], [z, z, o]]
    } else {
        [[a, b, c], [o, z, z], [z, o, z]]
    };
    let mut entries = [[z; 3]; 3];
    for (ci, col) in cols.iter().enumerate() {
        for r in 0..3 {
            entries[r][ci] = col[r];
        }
    }
    Gl3Matrix::new(field, entries).expect("columns are independent")
}

/// A degree-`d` form that is nonzero at `target` and vanishes at every other
/// rational point: `x^(d-2q+2) (y^(q-1) - x^(q-1)) (z^(q-1) - x^(q-1))`
/// pulled back along [`transport_matrix`].
pub fn lemma32_form(field: &Arc<Field>, d: u32, target: &ProjPoint) -> Result<TernaryForm, FormError> {
    let q = field.q();
    if d < 2 * q - 1 {
        return Err(FormError::DegreeTooSmall { d, min: 2 * q - 1 });
    }
    let e = q - 1;
    let lead = TernaryForm::monomial(field.clone(), [d + 2 - 2 * q, 0, 0], FieldElement::ONE);
    let fy = TernaryForm::from_terms(field.clone(), e, &[(1, [0, e, 0]), (-1, [e, 0, 0])]);
    let fz = TernaryForm::from_terms(field.clone(), e, &[(1, [0, 0, e]), (-1, [e, 0, 0])]);
    let base = lead.mul(&fy)?.mul(&fz)?;
    let m = transport_matrix(field, target);
    Ok(base.act(&m.inverse(field)))
}
