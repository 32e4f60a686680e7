//! The `GL_3` mass formula for plane quartics over `F_2` and `F_3`.
//!
//! Every quartic form is placed in its orbit under `f -> f o M`, found by a
//! closure walk with a generating set of `GL_3`. For each nonsingular orbit
//! the stabilizer is found independently by brute force over the whole
//! group, and the weighted count of curves by trace is computed two ways:
//! raw form count over `#GL_3`, and the sum of `(q - 1) / #Stab([f])` over
//! curve classes, where a class merges the orbits of the scalar multiples
//! of a form and `Stab([f]) = { M : f o M = c f for some c }`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::census::{gl3_order, PointTable, TraceHistogram};
use crate::field::{Field, FieldElement};
use crate::forms::{action_matrix, all_gl3, basis_len, decode_index, encode_index, gl3_generators};
use crate::par;
use crate::smooth::{SmoothScratch, SmoothnessTester};

const DEGREE: u32 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MassError {
    #[error("mass check is only feasible for q in {{2, 3}}, got q={0}")]
    UnsupportedField(u32),
    #[error("histogram is not an exhaustive smooth quartic census over the same field")]
    WrongHistogram,
}

/// A linear map on coefficient vectors, applied to odometer indices through
/// two half tables: the image of a form is the sum of the images of its
/// leading and trailing halves.
struct IndexMap {
    field: Arc<Field>,
    n: usize,
    tail_base: u64,
    head: Vec<u16>,
    tail: Vec<u16>,
}

impl IndexMap {
    /// `cols` is column-major: column `c` is the image of basis vector `c`.
    fn new(field: &Arc<Field>, n: usize, cols: &[u16]) -> IndexMap {
        let q = field.q();
        let head_len = n / 2;
        let tail_len = n - head_len;
        let image = |codes: &[u16], offset: usize| -> Vec<u16> {
            let mut out = vec![FieldElement::ZERO; n];
            for (i, &c) in codes.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let col = &cols[(offset + i) * n..(offset + i + 1) * n];
                for (o, &a) in out.iter_mut().zip(col) {
                    *o = field.add(*o, field.mul(FieldElement(c), FieldElement(a)));
                }
            }
            out.into_iter().map(|e| e.0).collect()
        };
        let build = |len: usize, offset: usize| -> Vec<u16> {
            (0..(q as u64).pow(len as u32))
                .flat_map(|v| image(&decode_index(v, q, len), offset))
                .collect()
        };
        IndexMap {
            field: field.clone(),
            n,
            tail_base: (q as u64).pow(tail_len as u32),
            head: build(head_len, 0),
            tail: build(tail_len, head_len),
        }
    }

    #[inline]
    fn apply(&self, idx: u64) -> u64 {
        let (h, t) = ((idx / self.tail_base) as usize, (idx % self.tail_base) as usize);
        let a = &self.head[h * self.n..(h + 1) * self.n];
        let b = &self.tail[t * self.n..(t + 1) * self.n];
        let q = self.field.q() as u64;
        a.iter().zip(b).fold(0u64, |acc, (&x, &y)| {
            acc * q + self.field.add(FieldElement(x), FieldElement(y)).0 as u64
        })
    }
}

/// Applies a column-major action matrix to a coefficient vector.
fn act_codes(field: &Field, n: usize, cols: &[u16], f: &[u16], out: &mut [u16]) {
    out.iter_mut().for_each(|o| *o = 0);
    for (c, &fc) in f.iter().enumerate() {
        if fc == 0 {
            continue;
        }
        for (o, &a) in out.iter_mut().zip(&cols[c * n..(c + 1) * n]) {
            *o = field.add(FieldElement(*o), field.mul(FieldElement(fc), FieldElement(a))).0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitInfo {
    /// Odometer index of the first form reached in the orbit.
    pub representative: u64,
    pub size: u64,
    pub stabilizer: u64,
    pub trace: i64,
    /// Index into [`MassReport::classes`].
    pub class: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClass {
    pub orbits: Vec<usize>,
    /// Matrices fixing the form up to a nonzero scalar.
    pub projective_stabilizer: u64,
    pub trace: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassRow {
    pub t: i64,
    pub form_count: u64,
    pub orbit_form_count: u64,
    /// `form_count / #GL_3`.
    pub by_forms: BigRational,
    /// Sum over curve classes of `(q - 1) / #Stab([f])`.
    pub by_orbits: BigRational,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassReport {
    pub q: u32,
    pub gl3: u64,
    pub orbits: Vec<OrbitInfo>,
    pub classes: Vec<CurveClass>,
    /// Every smooth orbit has `size * stabilizer = #GL_3`, and every class
    /// has `(q - 1) #GL_3 / projective_stabilizer` forms.
    pub orbit_stabilizer_ok: bool,
    pub rows: Vec<MassRow>,
    /// `sum_t by_orbits`, reported next to `q^6 + 1` without asserting.
    pub total_mass: BigRational,
}

impl MassReport {
    pub fn all_equal(&self) -> bool {
        self.orbit_stabilizer_ok && self.rows.iter().all(|r| r.equal)
    }

    pub fn q6_plus_1(&self) -> u64 {
        (self.q as u64).pow(6) + 1
    }
}

/// Runs the orbit decomposition and compares it with `hist`, which must be
/// the exhaustive smooth quartic census over `field`.
pub fn mass_check(
    field: &Arc<Field>,
    hist: &TraceHistogram,
    workers: usize,
) -> Result<MassReport, MassError> {
    let q = field.q();
    if q != 2 && q != 3 {
        return Err(MassError::UnsupportedField(q));
    }
    if hist.q() != q
        || hist.d != DEGREE
        || !hist.smooth_only
        || hist.mode != crate::census::CensusMode::Exhaustive
    {
        return Err(MassError::WrongHistogram);
    }
    let n = basis_len(DEGREE);
    let total = (q as u64).pow(n as u32);
    let gens: Vec<IndexMap> = gl3_generators(field)
        .iter()
        .map(|g| IndexMap::new(field, n, &action_matrix(field, DEGREE, g)))
        .collect();
    let tester = SmoothnessTester::new(field.clone(), DEGREE).expect("degree 4 is valid");
    let table = PointTable::new(field, DEGREE);
    let mut scratch = SmoothScratch::default();

    // Orbit walk; smoothness and trace are read off the first form reached.
    const UNSEEN: u32 = u32::MAX;
    let mut orbit_of = vec![UNSEEN; total as usize];
    let mut smooth_orbits: Vec<(u32, u64, u64, i64)> = Vec::new();
    let mut next_id = 0u32;
    let mut stack = Vec::new();
    for start in 0..total {
        if orbit_of[start as usize] != UNSEEN {
            continue;
        }
        let id = next_id;
        next_id += 1;
        orbit_of[start as usize] = id;
        stack.push(start);
        let mut size = 0u64;
        while let Some(f) = stack.pop() {
            size += 1;
            for g in &gens {
                let h = g.apply(f);
                if orbit_of[h as usize] == UNSEEN {
                    orbit_of[h as usize] = id;
                    stack.push(h);
                }
            }
        }
        let codes = decode_index(start, q, n);
        if tester.is_smooth_codes(&codes, &mut scratch) {
            let trace = q as i64 + 1 - table.count_zeros(&codes) as i64;
            smooth_orbits.push((id, start, size, trace));
        }
    }

    let group = all_gl3(field);
    let actions: Vec<u16> = group.iter().flat_map(|m| action_matrix(field, DEGREE, m)).collect();
    let stride = n * n;
    let stabilizers = par::run_indexed(smooth_orbits.len(), workers, |i| {
        let f = decode_index(smooth_orbits[i].1, q, n);
        let lead = f.iter().position(|&c| c != 0).expect("smooth forms are nonzero");
        let lead_inv = field.inv(FieldElement(f[lead])).expect("nonzero");
        let mut img = vec![0u16; n];
        let (mut exact, mut projective) = (0u64, 0u64);
        for m in 0..group.len() {
            act_codes(field, n, &actions[m * stride..(m + 1) * stride], &f, &mut img);
            if img == f {
                exact += 1;
                projective += 1;
                continue;
            }
            let c = field.mul(FieldElement(img[lead]), lead_inv);
            if !c.is_zero() && img.iter().zip(&f).all(|(&a, &b)| a == field.mul(c, FieldElement(b)).0)
            {
                projective += 1;
            }
        }
        (exact, projective)
    });

    let gl3: u64 = gl3_order(q).try_into().expect("small group");
    let mut orbit_stabilizer_ok = true;
    let position: BTreeMap<u32, usize> =
        smooth_orbits.iter().enumerate().map(|(i, o)| (o.0, i)).collect();
    let mut orbits: Vec<OrbitInfo> = smooth_orbits
        .iter()
        .zip(&stabilizers)
        .map(|(&(_, representative, size, trace), &(stabilizer, _))| {
            orbit_stabilizer_ok &= size * stabilizer == gl3;
            OrbitInfo { representative, size, stabilizer, trace, class: usize::MAX }
        })
        .collect();

    // A class is the set of orbits met by the scalar multiples of a form.
    let mut classes: Vec<CurveClass> = Vec::new();
    for i in 0..orbits.len() {
        if orbits[i].class != usize::MAX {
            continue;
        }
        let f = decode_index(orbits[i].representative, q, n);
        let mut members: Vec<usize> = (1..q as u16)
            .map(|s| {
                let g: Vec<u16> = f.iter().map(|&c| field.mul(FieldElement(s), FieldElement(c)).0).collect();
                position[&orbit_of[encode_index(&g, q) as usize]]
            })
            .collect();
        members.sort_unstable();
        members.dedup();
        let class = classes.len();
        for &m in &members {
            orbits[m].class = class;
        }
        let projective_stabilizer = stabilizers[i].1;
        let class_forms: u64 = members.iter().map(|&m| orbits[m].size).sum();
        orbit_stabilizer_ok &= class_forms * projective_stabilizer == (q as u64 - 1) * gl3;
        classes.push(CurveClass { orbits: members, projective_stabilizer, trace: orbits[i].trace });
    }

    let ratio = |a: u64, b: u64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let mut orbit_counts: BTreeMap<i64, u64> = BTreeMap::new();
    for o in &orbits {
        *orbit_counts.entry(o.trace).or_default() += o.size;
    }
    let mut class_mass: BTreeMap<i64, BigRational> = BTreeMap::new();
    for c in &classes {
        *class_mass.entry(c.trace).or_insert_with(|| ratio(0, 1)) +=
            ratio(q as u64 - 1, c.projective_stabilizer);
    }
    let mut ts: Vec<i64> = hist.counts.keys().chain(orbit_counts.keys()).copied().collect();
    ts.sort_unstable();
    ts.dedup();
    let rows: Vec<MassRow> = ts
        .into_iter()
        .map(|t| {
            let form_count = hist.count(t);
            let orbit_form_count = orbit_counts.get(&t).copied().unwrap_or(0);
            let by_forms = ratio(form_count, gl3);
            let by_orbits = class_mass.get(&t).cloned().unwrap_or_else(|| ratio(0, 1));
            let equal = form_count == orbit_form_count && by_forms == by_orbits;
            MassRow { t, form_count, orbit_form_count, by_forms, by_orbits, equal }
        })
        .collect();
    let total_mass = rows.iter().fold(ratio(0, 1), |acc, r| acc + &r.by_orbits);
    Ok(MassReport { q, gl3, orbits, classes, orbit_stabilizer_ok, rows, total_mass })
}
