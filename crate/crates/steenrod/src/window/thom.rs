//! The Thom-class window: an eight-degree window of a free rank-one
//! module over the polynomial ring on the universal classes of degree
//! 2, 4, 6, 7, 8.
//!
//! The structure group kills the universal classes of degree 1, 3, 5, so
//! through degree 8 the base ring is polynomial on `w2, w4, w6, w7, w8`
//! and the module is spanned by monomials times the generator `U`.  The
//! action is assembled from three ingredients: `Sq^i U = w_i U`, the
//! Cartan rule, and Wu's formula
//!
//! ```text
//! Sq^i(w_j) = sum_t binom(j + t - i - 1, t) w_{i-t} w_{j+t},   i < j,
//! ```
//!
//! with the killed classes replaced by zero.  The window stops at 8 on
//! purpose: every class index appearing in an in-window instance of the
//! formula is at most 8, so the degree-9 universal class (which is
//! decomposable here, not zero) never has to be substituted.

use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::{binom_mod2, SqMonomial};
use crate::error::{Error, Result};
use crate::f2::BitMat;
use crate::window::{AffineMatrix, AffineVec, ModuleWindow};

/// Degrees of the base-ring generators.
pub const GENS: [u32; 5] = [2, 4, 6, 7, 8];

/// Top degree of the window.
pub const WINDOW: u32 = 8;

/// A base-ring monomial, stored as exponents of `w2, w4, w6, w7, w8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct WMonomial(pub [u16; 5]);

impl WMonomial {
    pub fn one() -> Self {
        WMonomial([0; 5])
    }

    /// The generator of the given degree, if there is one.
    pub fn generator(deg: u32) -> Option<Self> {
        let idx = GENS.iter().position(|&g| g == deg)?;
        let mut e = [0; 5];
        e[idx] = 1;
        Some(WMonomial(e))
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; 5]
    }

    pub fn degree(&self) -> u32 {
        self.0
            .iter()
            .zip(GENS)
            .map(|(&e, g)| e as u32 * g)
            .sum()
    }

    pub fn mul(&self, other: &WMonomial) -> WMonomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        WMonomial(e)
    }

    pub fn square(&self) -> WMonomial {
        self.mul(self)
    }
}

impl fmt::Display for WMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (e, g) in self.0.iter().zip(GENS) {
            match e {
                0 => {}
                1 => parts.push(format!("w{g}")),
                _ => parts.push(format!("w{g}^{e}")),
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// An F_2 sum of base-ring monomials.
pub type WPoly = BTreeSet<WMonomial>;

fn toggle(p: &mut WPoly, m: WMonomial) {
    if !p.remove(&m) {
        p.insert(m);
    }
}

fn add_poly(a: &mut WPoly, b: &WPoly) {
    for m in b {
        toggle(a, *m);
    }
}

fn mul_poly(a: &WPoly, b: &WPoly) -> WPoly {
    let mut out = WPoly::new();
    for x in a {
        for y in b {
            toggle(&mut out, x.mul(y));
        }
    }
    out
}

fn poly_one() -> WPoly {
    WPoly::from([WMonomial::one()])
}

/// The degree-`d` universal class in this ring: 1 in degree 0, a
/// generator in degrees 2, 4, 6, 7, 8, zero in degrees 1, 3, 5.  Nothing
/// in the window ever asks for a higher degree.
pub fn universal_class(d: u32) -> WPoly {
    match d {
        0 => poly_one(),
        1 | 3 | 5 => WPoly::new(),
        2 | 4 | 6 | 7 | 8 => WPoly::from([WMonomial::generator(d).expect("listed degree")]),
        _ => panic!("universal class of degree {d} requested outside the window"),
    }
}

/// Wu's formula for `Sq^i` on the degree-`j` universal class, with the
/// killed classes substituted by zero.  Valid for any `j <= 8`, including
/// the killed degrees themselves (where the result must come out zero for
/// the substitution to be consistent; the tests confirm it does).
pub fn sq_universal_class(i: u32, j: u32) -> WPoly {
    if i == 0 {
        return universal_class(j);
    }
    if i > j {
        return WPoly::new();
    }
    if i == j {
        let mut out = WPoly::new();
        for m in universal_class(j) {
            toggle(&mut out, m.square());
        }
        return out;
    }
    let mut out = WPoly::new();
    for t in 0..=i {
        if binom_mod2((j + t - i - 1) as i64, t as i64) {
            let term = mul_poly(&universal_class(i - t), &universal_class(j + t));
            add_poly(&mut out, &term);
        }
    }
    out
}

/// `Sq^i` on a base-ring monomial, by the Cartan rule over its factors.
pub fn sq_monomial(i: u32, m: &WMonomial) -> WPoly {
    if i == 0 {
        return WPoly::from([*m]);
    }
    let Some(idx) = m.0.iter().position(|&e| e > 0) else {
        return WPoly::new(); // Sq^i(1) = 0 for i > 0
    };
    let mut rest = *m;
    rest.0[idx] -= 1;
    let g = GENS[idx];
    let mut out = WPoly::new();
    for a in 0..=i.min(g) {
        let left = sq_universal_class(a, g);
        if left.is_empty() {
            continue;
        }
        let right = sq_monomial(i - a, &rest);
        if right.is_empty() {
            continue;
        }
        add_poly(&mut out, &mul_poly(&left, &right));
    }
    out
}

/// `Sq^i` on a base-ring polynomial.
pub fn sq_ring(i: u32, p: &WPoly) -> WPoly {
    let mut out = WPoly::new();
    for m in p {
        add_poly(&mut out, &sq_monomial(i, m));
    }
    out
}

/// The degree-`k` universal Wu class of this ring, from the defining
/// recursion `v_k = w_k + sum_{i=1..k} Sq^i(v_{k-i})`.
pub fn universal_v(k: u32) -> WPoly {
    let mut v: Vec<WPoly> = Vec::with_capacity(k as usize + 1);
    for d in 0..=k {
        let mut vd = universal_class(d);
        for i in 1..=d {
            add_poly(&mut vd, &sq_ring(i, &v[(d - i) as usize]));
        }
        v.push(vd);
    }
    v.pop().expect("at least one degree computed")
}

/// All base-ring monomials of the given degree, canonical order.
pub fn monomials_of_degree(d: u32) -> Vec<WMonomial> {
    let mut out = Vec::new();
    let bound = |g: u32| (d / g) as u16;
    for e8 in 0..=bound(8) {
        for e7 in 0..=bound(7) {
            for e6 in 0..=bound(6) {
                for e4 in 0..=bound(4) {
                    for e2 in 0..=bound(2) {
                        let m = WMonomial([e2, e4, e6, e7, e8]);
                        if m.degree() == d {
                            out.push(m);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// The four tabulated module generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    U,
    U4,
    U81,
    U82,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::U, Gen::U4, Gen::U81, Gen::U82];

    /// The base-ring monomial multiplying `U`.
    pub fn monomial(self) -> WMonomial {
        match self {
            Gen::U => WMonomial::one(),
            Gen::U4 => WMonomial([2, 0, 0, 0, 0]),
            Gen::U81 => WMonomial([4, 0, 0, 0, 0]),
            Gen::U82 => WMonomial([0, 2, 0, 0, 0]),
        }
    }

    pub fn degree(self) -> u32 {
        self.monomial().degree()
    }

    pub fn label(self) -> &'static str {
        match self {
            Gen::U => "U",
            Gen::U4 => "U4",
            Gen::U81 => "U81",
            Gen::U82 => "U82",
        }
    }
}

/// The tabulated additive generators per row: a word applied to one of
/// the four module generators.
pub fn tabulated_rows() -> Vec<(u32, Vec<(Vec<u32>, Gen)>)> {
    vec![
        (0, vec![(vec![], Gen::U)]),
        (1, vec![]),
        (2, vec![(vec![2], Gen::U)]),
        (3, vec![]),
        (4, vec![(vec![4], Gen::U), (vec![], Gen::U4)]),
        (5, vec![]),
        (
            6,
            vec![
                (vec![6], Gen::U),
                (vec![4, 2], Gen::U),
                (vec![2], Gen::U4),
            ],
        ),
        (7, vec![(vec![7], Gen::U)]),
        (
            8,
            vec![
                (vec![8], Gen::U),
                (vec![6, 2], Gen::U),
                (vec![4], Gen::U4),
                (vec![], Gen::U81),
                (vec![], Gen::U82),
            ],
        ),
    ]
}

/// Display label for a tabulated entry, e.g. `"Sq4 Sq2 U"` or `"U4"`.
pub fn tabulated_label(word: &[u32], gen: Gen) -> String {
    if word.is_empty() {
        gen.label().to_string()
    } else {
        let sqs: Vec<String> = word.iter().map(|i| format!("Sq{i}")).collect();
        format!("{} {}", sqs.join(" "), gen.label())
    }
}

/// The assembled window.
pub struct Thom {
    pub window: ModuleWindow,
    basis: Vec<Vec<WMonomial>>,
}

impl Thom {
    pub fn basis_row(&self, j: u32) -> &[WMonomial] {
        &self.basis[j as usize]
    }

    /// Coordinates of a monomial times `U`, at the monomial's degree.
    pub fn monomial_vector(&self, m: &WMonomial) -> Result<(u32, AffineVec)> {
        let j = m.degree();
        if j > WINDOW {
            return Err(Error::WindowExceeded {
                deg: j,
                window: WINDOW,
            });
        }
        let idx = self.basis[j as usize]
            .iter()
            .position(|x| x == m)
            .expect("every in-window monomial is enumerated");
        Ok((j, self.window.basis_vector(j, idx)))
    }

    /// Coordinates of a base-ring polynomial times `U` (must be
    /// homogeneous of the given degree).
    pub fn poly_vector(&self, j: u32, p: &WPoly) -> Result<AffineVec> {
        let mut v = AffineVec::zero(self.window.dim(j), 0);
        for m in p {
            if m.degree() != j {
                return Err(Error::Invalid(format!(
                    "monomial {m} is not of degree {j}"
                )));
            }
            let (_, unit) = self.monomial_vector(m)?;
            v.xor_assign(&unit);
        }
        Ok(v)
    }

    pub fn gen_vector(&self, g: Gen) -> (u32, AffineVec) {
        self.monomial_vector(&g.monomial())
            .expect("generators sit inside the window")
    }

    /// A tabulated entry (word on a generator) as a vector.
    pub fn tabulated_vector(&self, word: &[u32], g: Gen) -> Result<(u32, AffineVec)> {
        let (j, v) = self.gen_vector(g);
        let w = SqMonomial::new(word.to_vec())?;
        self.window.act_word(&w, j, &v)
    }

    pub fn act(&self, i: u32, j: u32, v: &AffineVec) -> Result<AffineVec> {
        self.window.act(i, j, v)
    }
}

/// Build the window: enumerate the monomial bases and assemble every
/// in-window `Sq^i` from the Cartan rule, Wu's formula, and
/// `Sq^i U = w_i U`.
pub fn build_thom() -> Result<Thom> {
    let basis: Vec<Vec<WMonomial>> = (0..=WINDOW).map(monomials_of_degree).collect();
    let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
    let labels: Vec<Vec<String>> = basis
        .iter()
        .map(|row| {
            row.iter()
                .map(|m| {
                    if m.is_one() {
                        "U".to_string()
                    } else {
                        format!("{m} U")
                    }
                })
                .collect()
        })
        .collect();
    let mut window = ModuleWindow::new("thom", WINDOW, 0, dims, labels);
    for j in 0..WINDOW {
        for i in 1..=WINDOW - j {
            let src = &basis[j as usize];
            let dst = &basis[(j + i) as usize];
            let mut mat = BitMat::zero(dst.len(), src.len());
            for (c, m) in src.iter().enumerate() {
                // Sq^i(m U) = sum_b Sq^{i-b}(m) * (universal class b) U
                let mut image = WPoly::new();
                for b in 0..=i {
                    let through = universal_class(b);
                    if through.is_empty() {
                        continue;
                    }
                    add_poly(&mut image, &mul_poly(&sq_monomial(i - b, m), &through));
                }
                for term in image {
                    let r = dst
                        .iter()
                        .position(|x| x == &term)
                        .expect("image stays in the enumerated window");
                    if mat.get(r, c) {
                        mat.set(r, c, false);
                    } else {
                        mat.set(r, c, true);
                    }
                }
            }
            window.insert_sq(i, j, AffineMatrix::exact(mat, 0));
        }
    }
    let failures = window.adem_failures();
    if !failures.is_empty() {
        return Err(Error::Invalid(format!(
            "composition identities fail in the Thom window: {}",
            failures.join("; ")
        )));
    }
    Ok(Thom { window, basis })
}
