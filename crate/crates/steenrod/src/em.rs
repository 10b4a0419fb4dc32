//! Unstable mod-2 cohomology of Eilenberg-MacLane spaces in a degree window.
//!
//! `H^*(K(Z/2, n); F_2)` is the polynomial ring on generators `Sq^J l_n`
//! where `J` runs over admissible words with excess `e(J) < n` (the empty
//! word gives the fundamental class `l_n`).  This module implements:
//!
//! * the unstable action of the squares on that ring (`unstable_act`),
//!   using `Sq^i x = x^2` when `i = |x|`, `Sq^i x = 0` when `i > |x|`, and
//!   the Cartan product rule;
//! * graded basis enumeration (`em_basis`);
//! * the comparison map `psi_star` from the stable range of a high
//!   `K(Z/2, r)` down to `K(Z/2, 4m)`, whose kernel (`kernel_basis`) and
//!   cokernel (`coker_basis`, `coker_act`) carry named generators
//!   `a1, a2, a4, a8` and `g2..g9, g71, g81, g91`.

use crate::algebra::{admissible_monomials, normalize_monomial, SqMonomial};
use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

/// Degrees above the base class handled by default; the dimension tables
/// and named generators stop here.
pub const DEFAULT_WINDOW: u32 = 9;

fn generator_degree(label: &SqMonomial, n: u32) -> u32 {
    n + label.degree()
}

fn show_generator(label: &SqMonomial) -> String {
    if label.is_unit() {
        "l".to_string()
    } else {
        format!("{label} l")
    }
}

/// Product monomial in the polynomial generators: a sorted multiset of
/// generator words.  Empty means the constant 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct EmMonomial(Vec<SqMonomial>);

impl EmMonomial {
    pub fn one() -> Self {
        EmMonomial(Vec::new())
    }

    pub fn generator(label: SqMonomial) -> Self {
        EmMonomial(vec![label])
    }

    pub fn from_factors(mut factors: Vec<SqMonomial>) -> Self {
        factors.sort();
        EmMonomial(factors)
    }

    pub fn factors(&self) -> &[SqMonomial] {
        &self.0
    }

    /// Number of generator factors, with multiplicity.
    pub fn poly_degree(&self) -> usize {
        self.0.len()
    }

    /// Cohomological degree in `H^*(K(Z/2, n))`.
    pub fn degree(&self, n: u32) -> u32 {
        self.0.iter().map(|j| generator_degree(j, n)).sum()
    }

    pub fn mul(&self, other: &EmMonomial) -> EmMonomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        EmMonomial::from_factors(v)
    }

    pub fn square(&self) -> EmMonomial {
        let mut v = Vec::with_capacity(2 * self.0.len());
        for f in &self.0 {
            v.push(f.clone());
            v.push(f.clone());
        }
        EmMonomial(v) // doubling a sorted list keeps it sorted
    }
}

impl fmt::Display for EmMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let mut idx = 0;
        while idx < self.0.len() {
            let mut run = 1;
            while idx + run < self.0.len() && self.0[idx + run] == self.0[idx] {
                run += 1;
            }
            let label = show_generator(&self.0[idx]);
            if run == 1 {
                parts.push(label);
            } else if label.contains(' ') {
                parts.push(format!("({label})^{run}"));
            } else {
                parts.push(format!("{label}^{run}"));
            }
            idx += run;
        }
        write!(f, "{}", parts.join(" * "))
    }
}

/// F_2 sum of product monomials; the set holds monomials with coefficient 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EmPolynomial(BTreeSet<EmMonomial>);

impl EmPolynomial {
    pub fn zero() -> Self {
        EmPolynomial(BTreeSet::new())
    }

    pub fn one() -> Self {
        EmPolynomial::from_monomial(EmMonomial::one())
    }

    pub fn generator(label: SqMonomial) -> Self {
        EmPolynomial::from_monomial(EmMonomial::generator(label))
    }

    pub fn from_monomial(m: EmMonomial) -> Self {
        let mut s = BTreeSet::new();
        s.insert(m);
        EmPolynomial(s)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &EmMonomial> {
        self.0.iter()
    }

    pub fn contains(&self, m: &EmMonomial) -> bool {
        self.0.contains(m)
    }

    pub fn toggle(&mut self, m: EmMonomial) {
        if !self.0.remove(&m) {
            self.0.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &EmPolynomial) {
        for m in &other.0 {
            self.toggle(m.clone());
        }
    }

    pub fn mul(&self, other: &EmPolynomial) -> EmPolynomial {
        let mut out = EmPolynomial::zero();
        for a in &self.0 {
            for b in &other.0 {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    /// Frobenius: squaring is additive mod 2, so square each monomial.
    pub fn square(&self) -> EmPolynomial {
        EmPolynomial(self.0.iter().map(EmMonomial::square).collect())
    }
}

impl fmt::Display for EmPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Value of `Sq^I l_n` for an admissible word `I`: zero above the unstable
/// range, a polynomial generator below it, and a perfect square on the
/// boundary (where the leading entry equals the degree of the rest).
pub fn eval_admissible(word: &SqMonomial, n: u32) -> Result<EmPolynomial> {
    let e = word.excess()?;
    Ok(match e.cmp(&n) {
        std::cmp::Ordering::Greater => EmPolynomial::zero(),
        std::cmp::Ordering::Less => EmPolynomial::generator(word.clone()),
        std::cmp::Ordering::Equal => eval_admissible(&word.tail(), n)?.square(),
    })
}

/// `Sq^a` on one polynomial generator.
fn sq_on_generator(a: u32, label: &SqMonomial, n: u32) -> EmPolynomial {
    let deg = generator_degree(label, n);
    if a == 0 {
        return EmPolynomial::generator(label.clone());
    }
    if a > deg {
        return EmPolynomial::zero();
    }
    if a == deg {
        return EmPolynomial::generator(label.clone()).square();
    }
    let mut out = EmPolynomial::zero();
    for term in normalize_monomial(&label.prepend(a)).terms() {
        let v = eval_admissible(term, n).expect("normal forms are admissible");
        out.add_assign(&v);
    }
    out
}

/// Cartan expansion of `Sq^i` over the factors of a product monomial.
/// Repeated factors are handled by plain F_2 cancellation of the cross
/// terms, so no special casing of squares is needed.
fn sq_on_monomial(i: u32, factors: &[SqMonomial], n: u32) -> EmPolynomial {
    let Some((first, rest)) = factors.split_first() else {
        return if i == 0 {
            EmPolynomial::one()
        } else {
            EmPolynomial::zero()
        };
    };
    let mut acc = EmPolynomial::zero();
    for a in 0..=i {
        let fa = sq_on_generator(a, first, n);
        if fa.is_zero() {
            continue;
        }
        let rb = sq_on_monomial(i - a, rest, n);
        if rb.is_zero() {
            continue;
        }
        acc.add_assign(&fa.mul(&rb));
    }
    acc
}

/// Unstable action of `Sq^i` on a class in `H^*(K(Z/2, n))`.
pub fn unstable_act(i: u32, x: &EmPolynomial, n: u32) -> EmPolynomial {
    let mut out = EmPolynomial::zero();
    for m in x.terms() {
        out.add_assign(&sq_on_monomial(i, m.factors(), n));
    }
    out
}

/// All degree-`d` monomials in the polynomial generators of
/// `H^*(K(Z/2, n))`, in the default window.
pub fn em_basis(n: u32, d: u32) -> Result<Vec<EmMonomial>> {
    em_basis_windowed(n, d, DEFAULT_WINDOW)
}

/// Same as [`em_basis`] with an explicit ceiling on `d - n`.
pub fn em_basis_windowed(n: u32, d: u32, window: u32) -> Result<Vec<EmMonomial>> {
    if n == 0 {
        return Err(Error::Invalid("the space index n must be positive".into()));
    }
    if d == 0 {
        return Ok(vec![EmMonomial::one()]);
    }
    if d < n {
        return Ok(Vec::new());
    }
    if d - n > window {
        return Err(Error::WindowExceeded {
            deg: d - n,
            window,
        });
    }
    let mut gens: Vec<SqMonomial> = Vec::new();
    for internal in 0..=(d - n) {
        for word in admissible_monomials(internal) {
            if word.excess()? < n {
                gens.push(word);
            }
        }
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    multisets(&gens, 0, d, n, &mut stack, &mut out);
    out.sort();
    Ok(out)
}

fn multisets(
    gens: &[SqMonomial],
    from: usize,
    remaining: u32,
    n: u32,
    stack: &mut Vec<SqMonomial>,
    out: &mut Vec<EmMonomial>,
) {
    if remaining == 0 {
        out.push(EmMonomial::from_factors(stack.clone()));
        return;
    }
    for idx in from..gens.len() {
        let gd = generator_degree(&gens[idx], n);
        if gd > remaining {
            continue;
        }
        stack.push(gens[idx].clone());
        multisets(gens, idx, remaining - gd, n, stack, out);
        stack.pop();
    }
}

/// Restriction of `Sq^I l_r` (a stable class on a high Eilenberg-MacLane
/// space) to `H^*(K(Z/2, 4m))` along the comparison map.  In the stable
/// range the class desuspends, and the value is the unstable evaluation of
/// `Sq^I` on the degree-`4m` fundamental class.
pub fn psi_star(word: &SqMonomial, m: u32, r: u32) -> Result<EmPolynomial> {
    if m < 2 {
        return Err(Error::UnsupportedM(m));
    }
    if !word.admissible() {
        return Err(Error::NonAdmissible(word.to_string()));
    }
    let needed = word.degree().max(4 * m) + 1;
    if r < needed {
        return Err(Error::StabilityViolation { r, needed });
    }
    eval_admissible(word, 4 * m)
}

/// One kernel basis element: an admissible word of degree `4m + j` with
/// excess above `4m`.  The four one-entry words `Sq^{4m+k}` for
/// `k in {1, 2, 4, 8}` are the module generators and carry the short names
/// `a1, a2, a4, a8`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct KernelBasisElement {
    pub monomial: SqMonomial,
    /// `Some(k)` when the word is the generator `Sq^{4m+k}`, `k` a power of
    /// two at most 8.
    pub alpha: Option<u32>,
}

impl KernelBasisElement {
    pub fn label(&self) -> String {
        match self.alpha {
            Some(k) => format!("a{k}"),
            None => self.monomial.to_string(),
        }
    }
}

/// Basis of the degree-`4m+j` kernel of `psi_star`: admissible words `I`
/// with `d(I) = 4m + j` and `e(I) > 4m`.  Row sizes for `j = 1..=9` are
/// `1, 1, 2, 2, 3, 3, 5, 5, 7`, independent of `m >= 2`.
pub fn kernel_basis(m: u32, j: u32) -> Result<Vec<KernelBasisElement>> {
    if m < 2 {
        return Err(Error::UnsupportedM(m));
    }
    if !(1..=DEFAULT_WINDOW).contains(&j) {
        return Err(Error::Invalid(format!(
            "kernel rows are tabulated for 1 <= j <= {DEFAULT_WINDOW}, got {j}"
        )));
    }
    let d = 4 * m + j;
    let out = admissible_monomials(d)
        .into_iter()
        .filter(|i| i.excess().expect("enumeration is admissible") > 4 * m)
        .map(|i| {
            let alpha = match i.exponents() {
                [single] => {
                    let k = single - 4 * m;
                    [1, 2, 4, 8].contains(&k).then_some(k)
                }
                _ => None,
            };
            KernelBasisElement { monomial: i, alpha }
        })
        .collect();
    Ok(out)
}

/// One cokernel basis element.  `Pair(I1, I2)` stands for the boundary of
/// the suspended product `Sq^{I1} l * Sq^{I2} l` with `I1 < I2`, both
/// admissible of excess below `4m`.  `Cube` stands for the boundary of the
/// suspended `l^3`, which lands in the window only when `4m + 1 <= 9`,
/// i.e. at `m = 2` in row 9; it is excluded by default and appended only
/// on request (see [`coker_basis`]).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum CokerBasisElement {
    Pair(SqMonomial, SqMonomial),
    Cube,
}

impl CokerBasisElement {
    /// Build a pair in canonical (sorted) order; the two words must differ.
    pub fn pair(a: SqMonomial, b: SqMonomial) -> CokerBasisElement {
        assert!(a != b, "squares vanish; pair words must differ");
        if a < b {
            CokerBasisElement::Pair(a, b)
        } else {
            CokerBasisElement::Pair(b, a)
        }
    }

    /// Degree above the base row: pairs sit at `d(I1) + d(I2) + 1`, the
    /// cube at `4m + 1`.
    pub fn internal_degree(&self, m: u32) -> u32 {
        match self {
            CokerBasisElement::Pair(a, b) => a.degree() + b.degree() + 1,
            CokerBasisElement::Cube => 4 * m + 1,
        }
    }

    /// Short name when the element is one of the named generators:
    /// `g{j}` for `{1, Sq^{j-1}}` and `g{j}1` for `{1, Sq^{j-2} Sq^1}`.
    pub fn gamma(&self) -> Option<String> {
        let CokerBasisElement::Pair(a, b) = self else {
            return None;
        };
        if !a.is_unit() {
            return None;
        }
        match b.exponents() {
            [x] => Some(format!("g{}", x + 1)),
            [x, 1] => Some(format!("g{}1", x + 2)),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        if let Some(g) = self.gamma() {
            return g;
        }
        self.to_string()
    }
}

impl fmt::Display for CokerBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CokerBasisElement::Pair(a, b) => {
                write!(f, "d({}, {})", show_generator(a), show_generator(b))
            }
            CokerBasisElement::Cube => write!(f, "d(l^3)"),
        }
    }
}

/// The named cokernel generator `g{j}` (`with_sq1 = false`) or `g{j}1`
/// (`with_sq1 = true`) as a basis element.
pub fn gamma_element(j: u32, with_sq1: bool) -> Result<CokerBasisElement> {
    let word = if with_sq1 {
        if j < 7 || j > 9 {
            return Err(Error::Invalid(format!("g{j}1 is only named for 7 <= j <= 9")));
        }
        SqMonomial::new(vec![j - 2, 1])?
    } else {
        if j < 2 || j > 9 {
            return Err(Error::Invalid(format!("g{j} is only named for 2 <= j <= 9")));
        }
        SqMonomial::new(vec![j - 1])?
    };
    Ok(CokerBasisElement::pair(SqMonomial::unit(), word))
}

/// Basis of the row-`j` cokernel of `psi_star`: unordered pairs of distinct
/// admissible words, each of excess below `4m`, with degrees summing to
/// `j - 1`.  Row sizes for `j = 2..=9` are `1, 1, 3, 4, 6, 8, 13, 16` for
/// `m >= 3`.  At `m = 2` the row-9 pair count drops to 15 (the excess bound
/// kills the pair `{1, Sq^8}`) and the cube class enters the window; it is
/// appended only when `include_cube` is set, giving 16.
pub fn coker_basis(m: u32, j: u32, include_cube: bool) -> Result<Vec<CokerBasisElement>> {
    if m < 2 {
        return Err(Error::UnsupportedM(m));
    }
    if !(1..=DEFAULT_WINDOW).contains(&j) {
        return Err(Error::Invalid(format!(
            "cokernel rows are tabulated for 1 <= j <= {DEFAULT_WINDOW}, got {j}"
        )));
    }
    let mut out = Vec::new();
    if j >= 2 {
        let total = j - 1;
        for d1 in 0..=total / 2 {
            let d2 = total - d1;
            let lhs = admissible_below_excess(d1, 4 * m);
            let rhs = admissible_below_excess(d2, 4 * m);
            for a in &lhs {
                for b in &rhs {
                    if d1 == d2 && a >= b {
                        continue;
                    }
                    out.push(CokerBasisElement::pair(a.clone(), b.clone()));
                }
            }
        }
    }
    if include_cube && j == 4 * m + 1 {
        out.push(CokerBasisElement::Cube);
    }
    out.sort();
    Ok(out)
}

fn admissible_below_excess(d: u32, bound: u32) -> Vec<SqMonomial> {
    admissible_monomials(d)
        .into_iter()
        .filter(|i| i.excess().expect("enumeration is admissible") < bound)
        .collect()
}

/// `Sq^i` on an F_2 sum of cokernel elements.  The boundary construction
/// commutes with the squares, so the action is computed upstairs on the
/// product class in `H^*(K(Z/2, 4m))` and then projected: single-generator
/// monomials and perfect squares map to zero there, distinct two-factor
/// monomials map to their pair, and the only three-factor monomial the
/// window admits is the cube (kept only when `include_cube` is set).
pub fn coker_act(
    i: u32,
    elems: &BTreeSet<CokerBasisElement>,
    m: u32,
    include_cube: bool,
) -> Result<BTreeSet<CokerBasisElement>> {
    let mut out: BTreeSet<CokerBasisElement> = BTreeSet::new();
    let n = 4 * m;
    for e in elems {
        let target = e.internal_degree(m) + i;
        if target > DEFAULT_WINDOW {
            return Err(Error::WindowExceeded {
                deg: target,
                window: DEFAULT_WINDOW,
            });
        }
        let upstairs = match e {
            CokerBasisElement::Pair(a, b) => {
                EmPolynomial::from_monomial(EmMonomial::from_factors(vec![a.clone(), b.clone()]))
            }
            CokerBasisElement::Cube => EmPolynomial::from_monomial(EmMonomial::from_factors(
                vec![SqMonomial::unit(), SqMonomial::unit(), SqMonomial::unit()],
            )),
        };
        let image = unstable_act(i, &upstairs, n);
        for mono in image.terms() {
            let projected = match mono.factors() {
                [_] => None,
                [a, b] if a == b => None,
                [a, b] => Some(CokerBasisElement::pair(a.clone(), b.clone())),
                [a, b, c] if a.is_unit() && b.is_unit() && c.is_unit() => {
                    include_cube.then_some(CokerBasisElement::Cube)
                }
                other => unreachable!(
                    "monomial with {} factors cannot land in the window",
                    other.len()
                ),
            };
            if let Some(p) = projected {
                if !out.remove(&p) {
                    out.insert(p);
                }
            }
        }
    }
    Ok(out)
}

/// Word presentations of the kernel rows: each row-`j` entry is a prefix
/// word applied to one of the generators `a1, a2, a4, a8`.  Normalizing
/// `prefix ++ (4m + k)` expresses the entry in the admissible basis; the
/// rows are bases (verified by rank in the tests).
pub fn kernel_word_rows() -> Vec<(u32, Vec<(Vec<u32>, u32)>)> {
    vec![
        (1, vec![(vec![], 1)]),
        (2, vec![(vec![], 2)]),
        (3, vec![(vec![2], 1), (vec![1], 2)]),
        (4, vec![(vec![3], 1), (vec![], 4)]),
        (5, vec![(vec![4], 1), (vec![2, 1], 2), (vec![1], 4)]),
        (6, vec![(vec![5], 1), (vec![4], 2), (vec![2], 4)]),
        (
            7,
            vec![
                (vec![6], 1),
                (vec![4, 2], 1),
                (vec![5], 2),
                (vec![3], 4),
                (vec![2, 1], 4),
            ],
        ),
        (
            8,
            vec![
                (vec![7], 1),
                (vec![5, 2], 1),
                (vec![6], 2),
                (vec![3, 1], 4),
                (vec![], 8),
            ],
        ),
        (
            9,
            vec![
                (vec![8], 1),
                (vec![6, 2], 1),
                (vec![7], 2),
                (vec![6, 1], 2),
                (vec![4, 2, 1], 2),
                (vec![4, 1], 4),
                (vec![1], 8),
            ],
        ),
    ]
}

/// Word presentations of the cokernel rows: each row-`j` entry is a prefix
/// word applied to a named generator `(base, with_sq1)` meaning `g{base}`
/// or `g{base}1`.
pub fn coker_word_rows() -> Vec<(u32, Vec<(Vec<u32>, (u32, bool))>)> {
    vec![
        (2, vec![(vec![], (2, false))]),
        (3, vec![(vec![], (3, false))]),
        (
            4,
            vec![
                (vec![2], (2, false)),
                (vec![1], (3, false)),
                (vec![], (4, false)),
            ],
        ),
        (
            5,
            vec![
                (vec![3], (2, false)),
                (vec![2], (3, false)),
                (vec![1], (4, false)),
                (vec![], (5, false)),
            ],
        ),
        (
            6,
            vec![
                (vec![4], (2, false)),
                (vec![3], (3, false)),
                (vec![2, 1], (3, false)),
                (vec![2], (4, false)),
                (vec![1], (5, false)),
                (vec![], (6, false)),
            ],
        ),
        (
            7,
            vec![
                (vec![5], (2, false)),
                (vec![4], (3, false)),
                (vec![3], (4, false)),
                (vec![2, 1], (4, false)),
                (vec![2], (5, false)),
                (vec![1], (6, false)),
                (vec![], (7, false)),
                (vec![], (7, true)),
            ],
        ),
        (
            8,
            vec![
                (vec![6], (2, false)),
                (vec![4, 2], (2, false)),
                (vec![5], (3, false)),
                (vec![4, 1], (3, false)),
                (vec![4], (4, false)),
                (vec![3, 1], (4, false)),
                (vec![3], (5, false)),
                (vec![2, 1], (5, false)),
                (vec![2], (6, false)),
                (vec![1], (7, false)),
                (vec![1], (7, true)),
                (vec![], (8, false)),
                (vec![], (8, true)),
            ],
        ),
        (
            9,
            vec![
                (vec![7], (2, false)),
                (vec![5, 2], (2, false)),
                (vec![6], (3, false)),
                (vec![4, 2], (3, false)),
                (vec![5], (4, false)),
                (vec![4, 1], (4, false)),
                (vec![4], (5, false)),
                (vec![3, 1], (5, false)),
                (vec![3], (6, false)),
                (vec![2, 1], (6, false)),
                (vec![2], (7, false)),
                (vec![2], (7, true)),
                (vec![1], (8, false)),
                (vec![1], (8, true)),
                (vec![], (9, false)),
                (vec![], (9, true)),
            ],
        ),
    ]
}
