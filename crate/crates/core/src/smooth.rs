//! Nonsingularity of plane curves over the algebraic closure.
//!
//! The production test is a Macaulay-matrix rank criterion. Write `I` for
//! the ideal generated by `f` and its partials. `C_f` is smooth iff `I` has
//! no projective zero over the algebraic closure, iff `I_D` is all of the
//! degree-`D` forms for the bound below:
//!
//! * `p` does not divide `d`: Euler's relation puts `f` in the ideal of the
//!   partials, three forms of degree `d-1`; with no common zero they form a
//!   regular sequence and `I_D` is everything once `D >= 3d-5`.
//! * `p` divides `d`: three general members of the base-point-free system
//!   `I_d` form a regular sequence of degree `d` forms, so `D = 3d-2`.
//!
//! A common zero keeps every element of `I` from being a unit at that point,
//! so a rank deficit in any degree certifies a singular point. Rank is
//! invariant under field extension, which is why a computation over `F_q`
//! decides smoothness over the closure.
//!
//! The point searches over extension fields below are the slow oracles the
//! criterion is tested against.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::field::{embedding, Field, FieldElement};
use crate::forms::{basis_len, enumerate_points, monomial_index, FormError, MonomialBasis, TernaryForm, Var};
use crate::linalg::{rank_codes, rank_gf2, rank_gf3, Gf3Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Engine {
    Gf2,
    Gf3,
    Generic,
}

/// One Macaulay row: a generator times a fixed multiplier monomial.
#[derive(Debug, Clone)]
struct RowSpec {
    /// 0..3 are the partials in x, y, z; 3 is f itself.
    generator: usize,
    /// Column hit by each coefficient of the generator.
    targets: Vec<u16>,
}

/// Reusable buffers for [`SmoothnessTester::is_smooth_codes`].
#[derive(Debug, Default, Clone)]
pub struct SmoothScratch {
    partials: [Vec<u16>; 3],
    gf2: Vec<u128>,
    gf3: Vec<Gf3Row>,
    generic: Vec<u16>,
}

/// Precomputed Macaulay layout for forms of one degree over one field.
#[derive(Debug, Clone)]
pub struct SmoothnessTester {
    field: Arc<Field>,
    d: u32,
    /// For each variable and each coefficient of the partial: the source
    /// coefficient index and the exponent factor reduced mod p.
    partial_src: [Vec<(usize, u16)>; 3],
    rows: Vec<RowSpec>,
    cols: usize,
    engine: Engine,
}

impl SmoothnessTester {
    pub fn new(field: Arc<Field>, d: u32) -> Result<SmoothnessTester, FormError> {
        if d == 0 {
            return Err(FormError::DegreeZero);
        }
        let p = field.p();
        let partial_src = [0usize, 1, 2].map(|slot| {
            MonomialBasis::new(d - 1)
                .exponents
                .iter()
                .map(|e| {
                    let mut src = *e;
                    src[slot] += 1;
                    (monomial_index(d, src[0], src[1]), (src[slot] % p) as u16)
                })
                .collect::<Vec<_>>()
        });
        let with_f = d.is_multiple_of(p);
        let big_d = if d == 1 {
            0
        } else if with_f {
            3 * d - 2
        } else {
            3 * d - 5
        };
        let cols = basis_len(big_d);
        let mut rows = Vec::new();
        if d > 1 {
            let mut push_rows = |generator: usize, gdeg: u32| {
                let gbasis = MonomialBasis::new(gdeg);
                for m in MonomialBasis::new(big_d - gdeg).exponents {
                    let targets = gbasis
                        .exponents
                        .iter()
                        .map(|e| monomial_index(big_d, e[0] + m[0], e[1] + m[1]) as u16)
                        .collect();
                    rows.push(RowSpec { generator, targets });
                }
            };
            for g in 0..3 {
                push_rows(g, d - 1);
            }
            if with_f {
                push_rows(3, d);
            }
        }
        let engine = match field.q() {
            2 if cols <= 128 => Engine::Gf2,
            3 if cols <= 128 => Engine::Gf3,
            _ => Engine::Generic,
        };
        Ok(SmoothnessTester { field, d, partial_src, rows, cols, engine })
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// Number of Macaulay rows and columns.
    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols)
    }

    pub fn is_smooth(&self, f: &TernaryForm) -> bool {
        assert_eq!(f.degree(), self.d);
        let codes = f.codes();
        self.is_smooth_codes(&codes, &mut SmoothScratch::default())
    }

    /// Smoothness of the form with the given coefficient codes.
    pub fn is_smooth_codes(&self, coeffs: &[u16], scratch: &mut SmoothScratch) -> bool {
        let field = &*self.field;
        if self.d == 1 {
            return coeffs.iter().any(|&c| c != 0);
        }
        let mut any_nonzero = false;
        for (slot, src) in self.partial_src.iter().enumerate() {
            let out = &mut scratch.partials[slot];
            out.clear();
            out.extend(src.iter().map(|&(i, k)| {
                let v = field.mul(FieldElement(coeffs[i]), FieldElement(k)).0;
                any_nonzero |= v != 0;
                v
            }));
        }
        // All partials vanishing means f is a p-th power (or zero).
        if !any_nonzero {
            return false;
        }
        let generator = |g: usize| -> &[u16] {
            if g == 3 {
                coeffs
            } else {
                &scratch.partials[g]
            }
        };
        let rank = match self.engine {
            Engine::Gf2 => {
                let mut rows = std::mem::take(&mut scratch.gf2);
                rows.clear();
                for spec in &self.rows {
                    let g = generator(spec.generator);
                    let mut bits = 0u128;
                    for (&c, &t) in g.iter().zip(&spec.targets) {
                        bits |= (c as u128 & 1) << t;
                    }
                    if bits != 0 {
                        rows.push(bits);
                    }
                }
                let r = rank_gf2(&mut rows);
                scratch.gf2 = rows;
                r
            }
            Engine::Gf3 => {
                let mut rows = std::mem::take(&mut scratch.gf3);
                rows.clear();
                for spec in &self.rows {
                    let g = generator(spec.generator);
                    let mut row = Gf3Row::default();
                    for (&c, &t) in g.iter().zip(&spec.targets) {
                        if c != 0 {
                            let bit = 1u128 << t;
                            row.nz |= bit;
                            if c == 2 {
                                row.two |= bit;
                            }
                        }
                    }
                    if row.nz != 0 {
                        rows.push(row);
                    }
                }
                let r = rank_gf3(&mut rows);
                scratch.gf3 = rows;
                r
            }
            Engine::Generic => {
                let mut data = std::mem::take(&mut scratch.generic);
                data.clear();
                let mut nrows = 0;
                for spec in &self.rows {
                    let g = generator(spec.generator);
                    if g.iter().all(|&c| c == 0) {
                        continue;
                    }
                    let start = data.len();
                    data.resize(start + self.cols, 0);
                    for (&c, &t) in g.iter().zip(&spec.targets) {
                        data[start + t as usize] = c;
                    }
                    nrows += 1;
                }
                let r = if nrows < self.cols {
                    0
                } else {
                    rank_codes(field, &mut data, nrows, self.cols)
                };
                scratch.generic = data;
                r
            }
        };
        rank == self.cols
    }
}

/// Whether `C_f` is nonsingular over the algebraic closure.
pub fn is_smooth(f: &TernaryForm) -> Result<bool, FormError> {
    Ok(SmoothnessTester::new(f.field().clone(), f.degree())?.is_smooth(f))
}

fn map_form(f: &TernaryForm, big: &Arc<Field>, emb: &[FieldElement]) -> TernaryForm {
    let coeffs = f.coeffs().iter().map(|c| emb[c.0 as usize]).collect();
    TernaryForm::new(big.clone(), f.degree(), coeffs).expect("embedded coefficients are in range")
}

/// Extension fields are costly to build; the oracles reuse them.
fn extension(p: u32, k: u32) -> Arc<Field> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap();
    guard
        .entry((p, k))
        .or_insert_with(|| Arc::new(Field::new(p, k).expect("extension within size cap")))
        .clone()
}

/// `f` and its three partials, carried into `F_{q^e}`.
fn singular_system(f: &TernaryForm, e: u32) -> (Arc<Field>, Vec<TernaryForm>) {
    let small = f.field();
    let big = extension(small.p(), small.k() * e);
    let emb = embedding(small, &big).expect("subfield embeds");
    let mut system = vec![map_form(f, &big, &emb)];
    for v in [Var::X, Var::Y, Var::Z] {
        system.push(map_form(&f.partial(v).expect("degree >= 1"), &big, &emb));
    }
    (big, system)
}

/// Exhaustive search for a singular point of `C_f` defined over `F_{q^e}`.
/// Returns its coordinates in `F_{q^e}`.
pub fn find_singular_point(f: &TernaryForm, e: u32) -> Option<[FieldElement; 3]> {
    let (big, system) = singular_system(f, e);
    enumerate_points(&big)
        .into_iter()
        .find(|p| system.iter().all(|g| g.evaluate(p).is_zero()))
        .map(|p| p.coords)
}

/// Smoothness by direct search for singular points over `F_{q^e}`,
/// `e = 1..=max_ext`.
pub fn is_smooth_by_search(f: &TernaryForm, max_ext: u32) -> Result<bool, FormError> {
    if f.degree() == 0 {
        return Err(FormError::DegreeZero);
    }
    if f.is_zero() {
        return Ok(false);
    }
    if [Var::X, Var::Y, Var::Z].iter().all(|&v| f.partial(v).unwrap().is_zero()) {
        return Ok(false);
    }
    Ok((1..=max_ext).all(|e| find_singular_point(f, e).is_none()))
}

/// Univariate polynomials over a field, low degree first, trimmed.
fn trim(mut p: Vec<FieldElement>) -> Vec<FieldElement> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_rem(field: &Field, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = field.inv(b[db]).unwrap();
    while r.len() > db {
        let top = *r.last().unwrap();
        if !top.is_zero() {
            let c = field.mul(top, lead_inv);
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = field.sub(r[shift + i], field.mul(c, bi));
            }
        }
        r.pop();
    }
    trim(r)
}

fn poly_gcd(field: &Field, a: Vec<FieldElement>, b: Vec<FieldElement>) -> Vec<FieldElement> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = poly_rem(field, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn poly_mulmod(field: &Field, a: &[FieldElement], b: &[FieldElement], m: &[FieldElement]) -> Vec<FieldElement> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElement::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(x, y));
        }
    }
    poly_rem(field, &out, m)
}

/// Whether the nonzero polynomial `g` has a root in its coefficient field of
/// order `big_q`: `gcd(g, y^Q - y)` is nontrivial.
fn has_rational_root(field: &Field, g: &[FieldElement], big_q: u64) -> bool {
    if g.len() <= 1 {
        return false;
    }
    let y = vec![FieldElement::ZERO, FieldElement::ONE];
    let mut acc = vec![FieldElement::ONE];
    let mut base = poly_rem(field, &y, g);
    let mut e = big_q;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(field, &acc, &base, g);
        }
        base = poly_mulmod(field, &base, &base, g);
        e >>= 1;
    }
    acc.resize(acc.len().max(2), FieldElement::ZERO);
    acc[1] = field.sub(acc[1], FieldElement::ONE);
    poly_gcd(field, g.to_vec(), acc).len() > 1
}

/// Restriction of a form to a line through a parametrized point, as a
/// polynomial in the parameter: coefficient of y^j collects `c * weight(i, k)`.
fn restrict(g: &TernaryForm, weight: impl Fn(u32, u32) -> FieldElement) -> Vec<FieldElement> {
    let field = g.field();
    let mut out = vec![FieldElement::ZERO; g.degree() as usize + 1];
    for (c, e) in g.coeffs().iter().zip(MonomialBasis::new(g.degree()).exponents) {
        if c.is_zero() {
            continue;
        }
        let w = weight(e[0], e[2]);
        out[e[1] as usize] = field.add(out[e[1] as usize], field.mul(*c, w));
    }
    out
}

/// Whether `C_f` has a singular point over `F_{q^e}`, by sweeping the lines
/// `x = a z` and `z = 0` and testing each restricted system for a common
/// `F_{q^e}`-rational root with univariate gcds.
pub fn has_singular_point_over(f: &TernaryForm, e: u32) -> bool {
    let (big, system) = singular_system(f, e);
    let bq = big.q() as u64;
    let common = |polys: Vec<Vec<FieldElement>>| -> bool {
        let g = polys.into_iter().fold(Vec::new(), |acc, p| poly_gcd(&big, acc, p));
        g.is_empty() || has_rational_root(&big, &g, bq)
    };
    for a in big.elements() {
        // Points (a : y : 1).
        let polys = system
            .iter()
            .map(|g| restrict(g, |i, _| big.pow(a, i as u64)))
            .collect();
        if common(polys) {
            return true;
        }
    }
    // Points (1 : y : 0).
    let polys = system
        .iter()
        .map(|g| restrict(g, |_, k| if k == 0 { FieldElement::ONE } else { FieldElement::ZERO }))
        .collect();
    if common(polys) {
        return true;
    }
    let pt = [FieldElement::ZERO, FieldElement::ONE, FieldElement::ZERO];
    system.iter().all(|g| g.eval(pt).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{iterate_forms, FormSampler};

    fn fld(q: u32) -> Arc<Field> {
        Arc::new(Field::of_order(q).unwrap())
    }

    fn klein(f: &Arc<Field>) -> TernaryForm {
        TernaryForm::from_terms(f.clone(), 4, &[(1, [3, 1, 0]), (1, [0, 3, 1]), (1, [1, 0, 3])])
    }

    #[test]
    fn examples() {
        for q in [2, 3, 5, 7, 53] {
            let f = fld(q);
            let x2y2 = TernaryForm::monomial(f.clone(), [2, 2, 0], FieldElement::ONE);
            assert!(!is_smooth(&x2y2).unwrap());
            assert!(!is_smooth(&TernaryForm::zero(f.clone(), 4)).unwrap());
        }
        assert!(is_smooth(&klein(&fld(2))).unwrap());
        let f3 = fld(3);
        let fermat = TernaryForm::from_terms(f3.clone(), 4, &[(1, [4, 0, 0]), (1, [0, 4, 0]), (1, [0, 0, 4])]);
        assert!(is_smooth(&fermat).unwrap());
        assert_eq!(is_smooth(&TernaryForm::zero(f3, 0)), Err(FormError::DegreeZero));
    }

    #[test]
    fn klein_by_search_to_depth_nine() {
        assert!(is_smooth_by_search(&klein(&fld(2)), 9).unwrap());
    }

    #[test]
    fn lines_and_conics() {
        let f = fld(5);
        let line = TernaryForm::monomial(f.clone(), [0, 1, 0], FieldElement::ONE);
        assert!(is_smooth(&line).unwrap());
        assert!(!is_smooth(&TernaryForm::zero(f.clone(), 1)).unwrap());
        let conic = TernaryForm::from_terms(f.clone(), 2, &[(1, [2, 0, 0]), (1, [0, 2, 0]), (1, [0, 0, 2])]);
        assert!(is_smooth(&conic).unwrap());
        let pair = TernaryForm::from_terms(f, 2, &[(1, [2, 0, 0]), (-1, [0, 2, 0])]);
        assert!(!is_smooth(&pair).unwrap());
        // Over F_2 the conic x^2 + yz is smooth although p divides d.
        let f2 = fld(2);
        let c2 = TernaryForm::from_terms(f2.clone(), 2, &[(1, [2, 0, 0]), (1, [0, 1, 1])]);
        assert!(is_smooth(&c2).unwrap());
        let sq = TernaryForm::from_terms(f2, 2, &[(1, [2, 0, 0]), (1, [0, 2, 0])]);
        assert!(!is_smooth(&sq).unwrap());
    }

    #[test]
    fn singular_only_over_extension() {
        // x^2 + y^2 + z^2 ... over F_3: the conjugate lines x^2 + y^2 = 0 meet
        // at (0:0:1), which is rational; instead take a quartic that is the
        // product of two conjugate conics over F_9, singular at points that
        // are not F_3-rational.
        let f3 = fld(3);
        let a = TernaryForm::from_terms(f3.clone(), 2, &[(1, [2, 0, 0]), (1, [0, 2, 0]), (1, [0, 0, 2])]);
        let b = TernaryForm::from_terms(f3.clone(), 2, &[(1, [2, 0, 0]), (-1, [0, 2, 0]), (1, [1, 1, 0]), (1, [0, 0, 2])]);
        let quartic = a.mul(&b).unwrap();
        assert!(!is_smooth(&quartic).unwrap());
        assert!(!is_smooth_by_search(&quartic, 4).unwrap());
    }

    /// The production criterion, the spec-depth point search, and the
    /// F_{2^12} line sweep all agree on every conic and cubic over F_2.
    #[test]
    fn agrees_with_search_oracles_q2() {
        let f2 = fld(2);
        for d in [2u32, 3] {
            let tester = SmoothnessTester::new(f2.clone(), d).unwrap();
            let depth = (d - 1) * (d - 1);
            for g in iterate_forms(f2.clone(), d, (0, 1)).unwrap() {
                let fast = tester.is_smooth(&g);
                assert_eq!(fast, is_smooth_by_search(&g, depth).unwrap(), "{g}");
                if g.is_zero() || [Var::X, Var::Y, Var::Z].iter().all(|&v| g.partial(v).unwrap().is_zero()) {
                    assert!(!fast);
                    continue;
                }
                assert_eq!(fast, !has_singular_point_over(&g, 12), "{g}");
            }
        }
    }

    #[test]
    fn quartics_agree_with_search_q2() {
        let f2 = fld(2);
        let tester = SmoothnessTester::new(f2.clone(), 4).unwrap();
        let sampler = FormSampler::new(f2.clone(), 4, 11);
        let mut smooth = 0;
        for i in 0..60 {
            let g = sampler.draw(i);
            let fast = tester.is_smooth(&g);
            smooth += fast as usize;
            assert_eq!(fast, is_smooth_by_search(&g, 9).unwrap(), "{g}");
        }
        assert!(smooth > 0);
    }

    #[test]
    fn quartics_agree_with_sweep_q3() {
        let f3 = fld(3);
        let tester = SmoothnessTester::new(f3.clone(), 4).unwrap();
        let sampler = FormSampler::new(f3.clone(), 4, 5);
        let (mut smooth, mut singular) = (0, 0);
        for i in 0..150 {
            let g = sampler.draw(i);
            let fast = tester.is_smooth(&g);
            // Singular points of a reduced quartic come in Frobenius orbits
            // of size at most 6; a non-reduced one has a singular component.
            let slow = (1..=6).all(|e| !has_singular_point_over(&g, e));
            assert_eq!(fast, slow, "{g}");
            if fast {
                smooth += 1;
            } else {
                singular += 1;
            }
        }
        assert!(smooth > 0 && singular > 0);
    }

    #[test]
    fn generic_engine_matches_packed_engines() {
        // Same forms, read over F_2 and F_3 with the table-driven engine.
        for q in [2u32, 3] {
            let f = fld(q);
            let packed = SmoothnessTester::new(f.clone(), 4).unwrap();
            let mut generic = packed.clone();
            generic.engine = Engine::Generic;
            let sampler = FormSampler::new(f.clone(), 4, 3);
            let mut scratch = SmoothScratch::default();
            for i in 0..500 {
                let codes = sampler.draw(i).codes();
                assert_eq!(
                    packed.is_smooth_codes(&codes, &mut scratch),
                    generic.is_smooth_codes(&codes, &mut scratch)
                );
            }
        }
    }

    #[test]
    fn quartics_over_f4_agree_with_search() {
        let f4 = fld(4);
        let tester = SmoothnessTester::new(f4.clone(), 4).unwrap();
        let sampler = FormSampler::new(f4.clone(), 4, 8);
        for i in 0..40 {
            let g = sampler.draw(i);
            let slow = (1..=6).all(|e| !has_singular_point_over(&g, e));
            assert_eq!(tester.is_smooth(&g), slow, "{g}");
        }
    }

    #[test]
    fn macaulay_shapes() {
        assert_eq!(SmoothnessTester::new(fld(3), 4).unwrap().shape(), (45, 36));
        assert_eq!(SmoothnessTester::new(fld(2), 4).unwrap().shape(), (136, 66));
        assert_eq!(SmoothnessTester::new(fld(53), 4).unwrap().shape(), (45, 36));
    }
}
