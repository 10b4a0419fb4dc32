//! The mod 2 Steenrod algebra in the Serre-Cartan basis.
//!
//! An element is an F_2 sum of composites `Sq^{i_1} ... Sq^{i_k}` with every
//! `i_j >= 1`.  A composite is *admissible* when `i_j >= 2 i_{j+1}` for each
//! adjacent pair; admissible composites form a vector space basis.  Every
//! inadmissible pair `Sq^a Sq^b` (that is, `a < 2b`) rewrites by the Adem
//! relation
//!
//! ```text
//! Sq^a Sq^b = sum_{c=0}^{floor(a/2)} C(b-1-c, a-2c) Sq^{a+b-c} Sq^c   (mod 2)
//! ```
//!
//! and repeated rewriting reaches the admissible normal form regardless of
//! which inadmissible pair is expanded at each step.  `normalize` uses the
//! leftmost pair with a memo cache; `normalize_with` takes a pair-picking
//! strategy so the confluence claim can be tested.

use crate::error::{Error, Result};
use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// Largest exponent accepted when building monomials.  Keeps rewriting and
/// caching bounded on adversarial input.
pub const MAX_EXPONENT: u32 = 1 << 16;

/// Parity of the binomial coefficient `C(x, y)`, with `C(x, y) = 0` whenever
/// `x < 0`, `y < 0` or `y > x`, and `C(x, 0) = 1` for `x >= 0`.
///
/// For `0 <= y <= x` this is Lucas' theorem: `C(x, y)` is odd exactly when
/// every base-2 digit of `y` is at most the matching digit of `x`.
pub fn binom_mod2(x: i64, y: i64) -> bool {
    if x < 0 || y < 0 || y > x {
        return false;
    }
    x & y == y
}

/// A composite `Sq^{i_1} ... Sq^{i_k}`; the empty composite is the unit.
///
/// Invariant: every entry is in `1..=MAX_EXPONENT`.  Entries are *not*
/// required to be admissible; admissibility is a property checked by callers
/// that need it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SqMonomial(Vec<u32>);

impl SqMonomial {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        for &e in &exponents {
            if e == 0 {
                return Err(Error::Invalid("Sq0 is not a basis factor".into()));
            }
            if e > MAX_EXPONENT {
                return Err(Error::ExponentCeiling {
                    got: e as u64,
                    ceiling: MAX_EXPONENT as u64,
                });
            }
        }
        Ok(SqMonomial(exponents))
    }

    /// The unit composite (no factors).
    pub fn unit() -> Self {
        SqMonomial(Vec::new())
    }

    pub fn single(i: u32) -> Result<Self> {
        SqMonomial::new(vec![i])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn admissible(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= 2 * w[1])
    }

    /// Excess `2 i_1 - degree` of an admissible composite; zero for the unit.
    pub fn excess(&self) -> Result<u32> {
        if !self.admissible() {
            return Err(Error::NonAdmissible(self.to_string()));
        }
        match self.0.first() {
            None => Ok(0),
            // 2 i_1 >= i_1 + i_2 + ... for admissible words, so this cannot
            // underflow.
            Some(&i1) => Ok(2 * i1 - self.degree()),
        }
    }

    /// `Sq^i * self` as a composite (no rewriting).
    pub fn prepend(&self, i: u32) -> SqMonomial {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(i);
        v.extend_from_slice(&self.0);
        SqMonomial(v)
    }

    /// `self * other` as a composite (no rewriting).
    pub fn concat(&self, other: &SqMonomial) -> SqMonomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        SqMonomial(v)
    }

    pub fn tail(&self) -> SqMonomial {
        SqMonomial(self.0[1..].to_vec())
    }
}

impl fmt::Display for SqMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("Sq{i}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// F_2 sum of composites.  The set holds the composites with coefficient 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SteenrodElement(BTreeSet<SqMonomial>);

impl SteenrodElement {
    pub fn zero() -> Self {
        SteenrodElement(BTreeSet::new())
    }

    pub fn from_monomial(m: SqMonomial) -> Self {
        let mut s = BTreeSet::new();
        s.insert(m);
        SteenrodElement(s)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &SqMonomial> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, m: &SqMonomial) -> bool {
        self.0.contains(m)
    }

    /// Add `m` mod 2: insert it, or cancel an existing copy.
    pub fn toggle(&mut self, m: SqMonomial) {
        if !self.0.remove(&m) {
            self.0.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &SteenrodElement) {
        for m in &other.0 {
            self.toggle(m.clone());
        }
    }

    pub fn sum(mut self, other: &SteenrodElement) -> SteenrodElement {
        self.add_assign(other);
        self
    }

    /// Terms ordered for display: by degree, then by descending lexicographic
    /// exponent order within a degree (`Sq5` prints before `Sq4 Sq1`).
    pub fn display_terms(&self) -> Vec<&SqMonomial> {
        let mut terms: Vec<&SqMonomial> = self.0.iter().collect();
        terms.sort_by(|a, b| {
            (a.degree(), b.exponents()).cmp(&(b.degree(), a.exponents()))
        });
        terms
    }
}

impl fmt::Display for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.display_terms().iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Single Adem expansion of `Sq^a Sq^b` for an inadmissible in-range pair
/// (`0 < a < 2b`).  Every composite in the output is admissible, so the
/// expansion is its own normal form.
pub fn adem_pair(a: u32, b: u32) -> Result<SteenrodElement> {
    if a == 0 || a >= 2 * b {
        return Err(Error::OutOfAdemRange { a, b });
    }
    let mut out = SteenrodElement::zero();
    for c in 0..=a / 2 {
        if !binom_mod2(b as i64 - 1 - c as i64, a as i64 - 2 * c as i64) {
            continue;
        }
        let m = if c == 0 {
            SqMonomial(vec![a + b])
        } else {
            SqMonomial(vec![a + b - c, c])
        };
        out.toggle(m);
    }
    Ok(out)
}

/// Which inadmissible pair to expand at each rewriting step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteStrategy {
    /// Always the leftmost inadmissible pair (the default; memoized).
    Leftmost,
    /// A pair chosen by a deterministic PRNG seeded with the given value.
    /// Used to exercise confluence; not memoized.
    Seeded(u64),
}

// SplitMix64: tiny deterministic generator for the seeded strategy.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}

thread_local! {
    // Leftmost-strategy normal forms, keyed by exponent sequence.  Per-thread
    // so concurrent callers never contend; results are identical either way.
    static NORM_CACHE: RefCell<HashMap<Vec<u32>, BTreeSet<Vec<u32>>>> =
        RefCell::new(HashMap::new());
}

/// Admissible normal form of one composite.
pub fn normalize_monomial(m: &SqMonomial) -> SteenrodElement {
    let terms = norm_leftmost(&m.0);
    SteenrodElement(terms.into_iter().map(SqMonomial).collect())
}

/// Admissible normal form of an element (termwise, sums collected mod 2).
pub fn normalize(e: &SteenrodElement) -> SteenrodElement {
    let mut out = SteenrodElement::zero();
    for m in e.terms() {
        out.add_assign(&normalize_monomial(m));
    }
    out
}

/// Normal form computed with an explicit pair-picking strategy.  Confluence
/// of the Adem rewriting system means the result never depends on the
/// strategy; tests compare this against `normalize`.
pub fn normalize_with(e: &SteenrodElement, strategy: RewriteStrategy) -> SteenrodElement {
    match strategy {
        RewriteStrategy::Leftmost => normalize(e),
        RewriteStrategy::Seeded(seed) => {
            let mut rng = SplitMix64(seed);
            let mut out = SteenrodElement::zero();
            for m in e.terms() {
                let terms = norm_random(m.0.clone(), &mut rng);
                out.add_assign(&SteenrodElement(
                    terms.into_iter().map(SqMonomial).collect(),
                ));
            }
            out
        }
    }
}

fn inadmissible_positions(word: &[u32]) -> Vec<usize> {
    (0..word.len().saturating_sub(1))
        .filter(|&p| word[p] < 2 * word[p + 1])
        .collect()
}

fn splice(word: &[u32], p: usize, replacement: &[u32]) -> Vec<u32> {
    let mut w = Vec::with_capacity(word.len() + replacement.len());
    w.extend_from_slice(&word[..p]);
    w.extend_from_slice(replacement);
    w.extend_from_slice(&word[p + 2..]);
    w
}

fn expand_at(word: &[u32], p: usize) -> Vec<Vec<u32>> {
    let expansion = adem_pair(word[p], word[p + 1]).expect("position was inadmissible");
    expansion
        .terms()
        .map(|t| splice(word, p, t.exponents()))
        .collect()
}

fn norm_leftmost(word: &[u32]) -> BTreeSet<Vec<u32>> {
    let positions = inadmissible_positions(word);
    let Some(&p) = positions.first() else {
        return BTreeSet::from([word.to_vec()]);
    };
    if let Some(hit) = NORM_CACHE.with(|c| c.borrow().get(word).cloned()) {
        return hit;
    }
    let mut acc: BTreeSet<Vec<u32>> = BTreeSet::new();
    for w in expand_at(word, p) {
        for t in norm_leftmost(&w) {
            if !acc.remove(&t) {
                acc.insert(t);
            }
        }
    }
    NORM_CACHE.with(|c| c.borrow_mut().insert(word.to_vec(), acc.clone()));
    acc
}

fn norm_random(word: Vec<u32>, rng: &mut SplitMix64) -> BTreeSet<Vec<u32>> {
    let positions = inadmissible_positions(&word);
    if positions.is_empty() {
        return BTreeSet::from([word]);
    }
    let p = positions[rng.below(positions.len())];
    let mut acc: BTreeSet<Vec<u32>> = BTreeSet::new();
    for w in expand_at(&word, p) {
        for t in norm_random(w, rng) {
            if !acc.remove(&t) {
                acc.insert(t);
            }
        }
    }
    acc
}

/// All admissible composites of total degree `d`, ascending lexicographic
/// order.  Degree 0 yields the unit composite alone.
pub fn admissible_monomials(d: u32) -> Vec<SqMonomial> {
    let mut out = Vec::new();
    admissible_rec(d, d, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn admissible_rec(remaining: u32, max_first: u32, prefix: &mut Vec<u32>, out: &mut Vec<SqMonomial>) {
    if remaining == 0 {
        out.push(SqMonomial(prefix.clone()));
        return;
    }
    // Admissibility forces i >= 2 * (next entry), i.e. the next entry is at
    // most i/2; a first entry below half the remaining degree can never
    // complete to an admissible word.
    let lo = remaining.div_ceil(2);
    for i in lo..=remaining.min(max_first) {
        prefix.push(i);
        admissible_rec(remaining - i, i / 2, prefix, out);
        prefix.pop();
    }
}

/// Parse the plain-text element syntax: `+`-separated terms, each a
/// whitespace-separated list of `Sq<k>` factors with `k >= 1`.  `0` denotes
/// the zero element and `1` the unit composite.
pub fn parse_element(input: &str) -> Result<SteenrodElement> {
    let mut out = SteenrodElement::zero();
    let mut any = false;
    let mut term_start = 0usize;
    for (term, next_start) in split_keeping_offsets(input, '+') {
        let term_off = term_start;
        term_start = next_start;
        let trimmed = term.trim();
        if trimmed.is_empty() {
            return Err(Error::Parse {
                pos: term_off,
                token: "+".into(),
                msg: "empty term".into(),
            });
        }
        any = true;
        if trimmed == "0" {
            continue;
        }
        if trimmed == "1" {
            out.toggle(SqMonomial::unit());
            continue;
        }
        let mut exps = Vec::new();
        for (tok, tok_off) in tokens_with_offsets(term, term_off) {
            let Some(num) = tok.strip_prefix("Sq") else {
                return Err(Error::Parse {
                    pos: tok_off,
                    token: tok.to_string(),
                    msg: "expected Sq<k>".into(),
                });
            };
            let k: u64 = num.parse().map_err(|_| Error::Parse {
                pos: tok_off,
                token: tok.to_string(),
                msg: "expected Sq<k> with a decimal k".into(),
            })?;
            if k == 0 {
                return Err(Error::Parse {
                    pos: tok_off,
                    token: tok.to_string(),
                    msg: "Sq0 is not a basis factor; the unit is written 1".into(),
                });
            }
            if k > MAX_EXPONENT as u64 {
                return Err(Error::Parse {
                    pos: tok_off,
                    token: tok.to_string(),
                    msg: format!("exponent exceeds the ceiling {MAX_EXPONENT}"),
                });
            }
            exps.push(k as u32);
        }
        out.toggle(SqMonomial(exps));
    }
    if !any {
        return Err(Error::Parse {
            pos: 0,
            token: String::new(),
            msg: "empty input".into(),
        });
    }
    Ok(out)
}

fn split_keeping_offsets(s: &str, sep: char) -> Vec<(&str, usize)> {
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if ch == sep {
            parts.push((&s[start..i], i + ch.len_utf8()));
            start = i + ch.len_utf8();
        }
    }
    parts.push((&s[start..], s.len()));
    parts
}

fn tokens_with_offsets(term: &str, base: usize) -> Vec<(&str, usize)> {
    let mut toks = Vec::new();
    let mut idx = 0;
    for piece in term.split_whitespace() {
        let found = term[idx..].find(piece).expect("piece comes from term") + idx;
        toks.push((piece, base + found));
        idx = found + piece.len();
    }
    toks
}
