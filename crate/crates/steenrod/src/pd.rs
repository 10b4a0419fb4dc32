//! Closed-manifold mod-2 cohomology rings with an unstable Steenrod action.
//!
//! A [`PDAlgebra`] is a finite graded `F2`-algebra presented by ring
//! generators, monomial rewrite rules, and the squares of each generator.
//! Everything else is derived here: monomial bases per degree, the full
//! action via the Cartan formula, Wu classes by solving the Poincaré
//! pairing, Stiefel-Whitney classes as total squares of the Wu classes,
//! and the degree-`4n` torsion pairing checks for manifolds of total
//! dimension `8n + 2`.
//!
//! Descriptions load from JSON; see [`PDAlgebra::from_json`].

use std::collections::{BTreeMap, BTreeSet};

use serde_json::Value;

use crate::algebra::{adem_pair, SqMonomial, SteenrodElement};
use crate::error::{Error, Result};
use crate::f2::{BitMat, BitVec, in_span};
use crate::report::Check;

/// Exponent vector of a monomial in the ring generators.
pub type Expo = Vec<u16>;

/// An element: a mod-2 set of monomials.
pub type El = BTreeSet<Expo>;

/// Symmetric difference (addition over `F2`).
pub fn add(a: &El, b: &El) -> El {
    a.symmetric_difference(b).cloned().collect()
}

fn toggle(el: &mut El, m: Expo) {
    if !el.remove(&m) {
        el.insert(m);
    }
}

fn divides(lhs: &Expo, m: &Expo) -> bool {
    lhs.iter().zip(m).all(|(l, e)| l <= e)
}

/// Binomial-coefficient parity computed by iterating Pascal's triangle.
/// Deliberately independent of the carry-free test used by the Adem
/// expansion, so the two can cross-check each other.
pub fn pascal_parity(n: u64, k: u64) -> bool {
    if k > n {
        return false;
    }
    let mut row = vec![true];
    for _ in 0..n {
        let mut next = vec![true];
        for i in 1..row.len() {
            next.push(row[i - 1] ^ row[i]);
        }
        next.push(true);
        row = next;
    }
    row[k as usize]
}

struct Parts {
    name: String,
    top: u32,
    spinc: bool,
    gens: Vec<(String, u32)>,
    /// Rewrite rules `lhs -> rhs` with the right side kept raw.
    rules: Vec<(Expo, El)>,
    /// Declared action on generators: per generator, `i -> Sq^i(g)` raw.
    sq_gen: Vec<BTreeMap<u32, El>>,
    /// Torsion subspace as unparsed element strings.
    torsion_raw: Option<(u32, Vec<String>)>,
}

/// A finite Poincaré-duality algebra over `F2` with its Steenrod action.
#[derive(Debug, Clone)]
pub struct PDAlgebra {
    pub name: String,
    pub top: u32,
    pub spinc: bool,
    gens: Vec<(String, u32)>,
    rules: Vec<(Expo, El)>,
    sq_gen: Vec<BTreeMap<u32, El>>,
    basis: Vec<Vec<Expo>>,
    index: Vec<BTreeMap<Expo, usize>>,
    /// `(i, d) -> ` matrix of `Sq^i: H^d -> H^{d+i}`, for `i >= 1`, `d + i <= top`.
    action: BTreeMap<(u32, u32), BitMat>,
    /// Declared mod-2 reductions of integral torsion classes, with their degree.
    pub torsion: Option<(u32, Vec<El>)>,
    fundamental_zeroed: bool,
}

const MAX_BASIS: usize = 1 << 16;

// ---------------------------------------------------------------------------
// JSON loading

fn obj<'a>(v: &'a Value, what: &str) -> Result<&'a serde_json::Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Invalid(format!("{what} must be a JSON object")))
}

fn str_field(m: &serde_json::Map<String, Value>, key: &str, what: &str) -> Result<String> {
    m.get(key)
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| Error::Invalid(format!("{what} needs a string field `{key}`")))
}

fn u32_field(m: &serde_json::Map<String, Value>, key: &str, what: &str) -> Result<u32> {
    m.get(key)
        .and_then(Value::as_u64)
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| Error::Invalid(format!("{what} needs a non-negative integer `{key}`")))
}

fn check_keys(m: &serde_json::Map<String, Value>, allowed: &[&str], what: &str) -> Result<()> {
    for k in m.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::Invalid(format!("{what}: unknown key `{k}`")));
        }
    }
    Ok(())
}

fn gen_position(gens: &[(String, u32)], name: &str) -> Result<usize> {
    gens.iter()
        .position(|(n, _)| n == name)
        .ok_or_else(|| Error::Invalid(format!("unknown generator `{name}`")))
}

/// Parse an element string over the given generators without reducing it.
/// Grammar: `0`, `1`, or `+`-separated products of `*`-separated generator
/// names (`x*x*y + y*y*y`). Repetition encodes exponents.
fn parse_raw(gens: &[(String, u32)], text: &str) -> Result<El> {
    let t = text.trim();
    if t == "0" {
        return Ok(El::new());
    }
    let mut out = El::new();
    for mono in t.split('+') {
        let mono = mono.trim();
        if mono.is_empty() {
            return Err(Error::Invalid(format!("empty monomial in `{text}`")));
        }
        let mut e = vec![0u16; gens.len()];
        if mono != "1" {
            for factor in mono.split('*') {
                let gi = gen_position(gens, factor.trim())?;
                e[gi] += 1;
            }
        }
        toggle(&mut out, e);
    }
    Ok(out)
}

fn raw_degree(gens: &[(String, u32)], m: &Expo) -> u32 {
    m.iter()
        .zip(gens)
        .map(|(&e, (_, d))| e as u32 * d)
        .sum()
}

impl PDAlgebra {
    /// Load an algebra from its JSON description.
    ///
    /// ```json
    /// {
    ///   "name": "RP3", "top": 3, "spinc": true,
    ///   "generators": [{"g": "x", "deg": 1}],
    ///   "relations": [["x", "x", "x", "x", 0]],
    ///   "sq": {"x": {"1": "x*x"}},
    ///   "torsion": {"degree": 4, "basis": ["x*x*y*y"]}
    /// }
    /// ```
    ///
    /// Each relation is a list of generator names (repetition = exponent)
    /// whose last entry is the right-hand side: the number `0`, or an
    /// element string.  `sq` declares `Sq^i` on each generator for
    /// `1 <= i <= deg(g)`; omitted entries are zero.  `torsion` is
    /// optional and names the mod-2 reductions of the integral torsion
    /// classes in one degree.
    pub fn from_json(text: &str) -> Result<PDAlgebra> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::Invalid(format!("malformed JSON: {e}")))?;
        let m = obj(&v, "description")?;
        check_keys(
            m,
            &[
                "name",
                "top",
                "spinc",
                "generators",
                "relations",
                "sq",
                "torsion",
            ],
            "description",
        )?;
        let name = str_field(m, "name", "description")?;
        let top = u32_field(m, "top", "description")?;
        let spinc = m
            .get("spinc")
            .and_then(Value::as_bool)
            .ok_or_else(|| Error::Invalid("description needs a boolean `spinc`".into()))?;

        let mut gens: Vec<(String, u32)> = Vec::new();
        for g in m
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Invalid("description needs an array `generators`".into()))?
        {
            let go = obj(g, "generator")?;
            check_keys(go, &["g", "deg"], "generator")?;
            let gname = str_field(go, "g", "generator")?;
            let deg = u32_field(go, "deg", "generator")?;
            if deg == 0 {
                return Err(Error::Invalid(format!(
                    "generator `{gname}` has degree 0; the unit is implicit"
                )));
            }
            if gname.is_empty()
                || gname == "0"
                || gname == "1"
                || gname.contains(['*', '+'])
                || gname.contains(char::is_whitespace)
            {
                return Err(Error::Invalid(format!("bad generator name `{gname}`")));
            }
            if gens.iter().any(|(n, _)| *n == gname) {
                return Err(Error::Invalid(format!("duplicate generator `{gname}`")));
            }
            gens.push((gname, deg));
        }

        let mut rules: Vec<(Expo, El)> = Vec::new();
        for rel in m
            .get("relations")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Invalid("description needs an array `relations`".into()))?
        {
            let arr = rel
                .as_array()
                .ok_or_else(|| Error::Invalid("each relation must be an array".into()))?;
            if arr.len() < 2 {
                return Err(Error::Invalid(
                    "a relation needs at least one generator and a right-hand side".into(),
                ));
            }
            let mut lhs = vec![0u16; gens.len()];
            for name in &arr[..arr.len() - 1] {
                let f = name
                    .as_str()
                    .ok_or_else(|| Error::Invalid("relation factors must be strings".into()))?;
                lhs[gen_position(&gens, f)?] += 1;
            }
            let rhs = match &arr[arr.len() - 1] {
                Value::Number(n) if n.as_u64() == Some(0) => El::new(),
                Value::Number(n) if n.as_u64() == Some(1) => El::from([vec![0u16; gens.len()]]),
                Value::String(s) => parse_raw(&gens, s)?,
                other => {
                    return Err(Error::Invalid(format!(
                        "relation right-hand side must be 0, 1, or an element string, got {other}"
                    )));
                }
            };
            rules.push((lhs, rhs));
        }

        let mut sq_gen = vec![BTreeMap::new(); gens.len()];
        if let Some(sq) = m.get("sq") {
            for (gname, table) in obj(sq, "`sq`")? {
                let gi = gen_position(&gens, gname)?;
                for (istr, el) in obj(table, "action table")? {
                    let i: u32 = istr
                        .parse()
                        .map_err(|_| Error::Invalid(format!("bad action index `{istr}`")))?;
                    let s = el.as_str().ok_or_else(|| {
                        Error::Invalid(format!("Sq{i} {gname} must be an element string"))
                    })?;
                    sq_gen[gi].insert(i, parse_raw(&gens, s)?);
                }
            }
        }

        let torsion_raw = match m.get("torsion") {
            None => None,
            Some(t) => {
                let to = obj(t, "`torsion`")?;
                check_keys(to, &["degree", "basis"], "`torsion`")?;
                let degree = u32_field(to, "degree", "`torsion`")?;
                let basis = to
                    .get("basis")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Invalid("`torsion` needs an array `basis`".into()))?
                    .iter()
                    .map(|e| {
                        e.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| Error::Invalid("torsion basis entries must be element strings".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some((degree, basis))
            }
        };

        compile(Parts {
            name,
            top,
            spinc,
            gens,
            rules,
            sq_gen,
            torsion_raw,
        })
    }
}

// ---------------------------------------------------------------------------
// Compilation

fn compile(parts: Parts) -> Result<PDAlgebra> {
    let Parts {
        name,
        top,
        spinc,
        gens,
        rules,
        sq_gen,
        torsion_raw,
    } = parts;

    // Rewrite rules must be homogeneous and strictly lex-descending so that
    // reduction terminates (lex order on exponent vectors is translation
    // invariant, so each rewrite step decreases every affected monomial).
    for (lhs, rhs) in &rules {
        if lhs.iter().all(|&e| e == 0) {
            return Err(Error::Invalid("a relation cannot rewrite the unit".into()));
        }
        let ld = raw_degree(&gens, lhs);
        for r in rhs {
            if raw_degree(&gens, r) != ld {
                return Err(Error::Invalid(format!(
                    "inhomogeneous relation in degree {ld}"
                )));
            }
            if r >= lhs {
                return Err(Error::Invalid(
                    "relation right-hand side must be lexicographically below its left-hand side"
                        .into(),
                ));
            }
        }
    }

    let mut alg = PDAlgebra {
        name,
        top,
        spinc,
        gens,
        rules,
        sq_gen,
        basis: vec![Vec::new(); top as usize + 1],
        index: vec![BTreeMap::new(); top as usize + 1],
        action: BTreeMap::new(),
        torsion: None,
        fundamental_zeroed: false,
    };

    // Monomial bases: every exponent vector of degree <= top that no rule
    // divides.  The recursion keeps the accumulated degree within budget.
    let mut count = 0usize;
    let mut cur = vec![0u16; alg.gens.len()];
    enumerate(&mut alg, 0, &mut cur, 0, &mut count)?;
    for d in 0..=top as usize {
        for (i, m) in alg.basis[d].iter().enumerate() {
            alg.index[d].insert(m.clone(), i);
        }
    }

    // Declared action entries: indices within the unstable range, values
    // homogeneous of the right degree once reduced.
    for gi in 0..alg.gens.len() {
        let (gname, gdeg) = alg.gens[gi].clone();
        for (&i, raw) in &alg.sq_gen[gi].clone() {
            if i == 0 || i > gdeg {
                return Err(Error::Invalid(format!(
                    "Sq{i} {gname}: declared index outside 1..={gdeg}"
                )));
            }
            let red = alg.reduce_el(raw);
            if let Some(d) = alg.el_degree(&red)? {
                if d != gdeg + i {
                    return Err(Error::Invalid(format!(
                        "Sq{i} {gname} has degree {d}, expected {}",
                        gdeg + i
                    )));
                }
            }
            alg.sq_gen[gi].insert(i, red);
        }
    }

    // The full action, one matrix per (i, source degree).
    let mut memo: BTreeMap<(u32, Expo), El> = BTreeMap::new();
    let mut mats = Vec::new();
    for d in 0..=top {
        for i in 1..=top - d {
            let src = &alg.basis[d as usize];
            let dst = &alg.index[(d + i) as usize];
            let mut mat = BitMat::zero(dst.len(), src.len());
            for (c, m) in src.iter().enumerate() {
                for mono in alg.sq_monomial(i, m, &mut memo) {
                    mat.set(dst[&mono], c, true);
                }
            }
            mats.push(((i, d), mat));
        }
    }
    alg.action = mats.into_iter().collect();

    if let Some((degree, texts)) = torsion_raw {
        let els = texts
            .iter()
            .map(|t| alg.parse_el(t))
            .collect::<Result<Vec<_>>>()?;
        alg = alg.with_torsion(degree, els)?;
    }
    Ok(alg)
}

fn enumerate(
    alg: &mut PDAlgebra,
    gi: usize,
    cur: &mut Expo,
    deg: u32,
    count: &mut usize,
) -> Result<()> {
    if gi == alg.gens.len() {
        if alg.rules.iter().all(|(lhs, _)| !divides(lhs, cur)) {
            *count += 1;
            if *count > MAX_BASIS {
                return Err(Error::Invalid(format!(
                    "monomial basis exceeds {MAX_BASIS} elements"
                )));
            }
            alg.basis[deg as usize].push(cur.clone());
        }
        return Ok(());
    }
    let gd = alg.gens[gi].1;
    let max = (alg.top - deg) / gd;
    for e in 0..=max {
        cur[gi] = e as u16;
        enumerate(alg, gi + 1, cur, deg + e * gd, count)?;
    }
    cur[gi] = 0;
    Ok(())
}

// ---------------------------------------------------------------------------
// Element arithmetic

impl PDAlgebra {
    pub fn dim(&self, d: u32) -> usize {
        if d > self.top {
            0
        } else {
            self.basis[d as usize].len()
        }
    }

    pub fn basis_monomials(&self, d: u32) -> &[Expo] {
        &self.basis[d as usize]
    }

    pub fn generators(&self) -> &[(String, u32)] {
        &self.gens
    }

    /// Rewrite one monomial into its normal form (a sum of irreducible
    /// monomials).  Worklist driven; rules are scanned in input order.
    fn reduce_monomial(&self, m: &Expo) -> El {
        let mut out = El::new();
        let mut work = vec![m.clone()];
        while let Some(w) = work.pop() {
            match self.rules.iter().find(|(lhs, _)| divides(lhs, &w)) {
                None => toggle(&mut out, w),
                Some((lhs, rhs)) => {
                    let q: Expo = w.iter().zip(lhs).map(|(e, l)| e - l).collect();
                    for r in rhs {
                        work.push(r.iter().zip(&q).map(|(a, b)| a + b).collect());
                    }
                }
            }
        }
        out
    }

    /// Reduce every monomial of an element.
    pub fn reduce_el(&self, el: &El) -> El {
        let mut out = El::new();
        for m in el {
            for r in self.reduce_monomial(m) {
                toggle(&mut out, r);
            }
        }
        out
    }

    /// Parse an element string and reduce it.
    pub fn parse_el(&self, text: &str) -> Result<El> {
        Ok(self.reduce_el(&parse_raw(&self.gens, text)?))
    }

    /// Render an element in the same grammar `parse_el` accepts.
    pub fn show_el(&self, el: &El) -> String {
        if el.is_empty() {
            return "0".to_string();
        }
        el.iter()
            .map(|m| {
                if m.iter().all(|&e| e == 0) {
                    return "1".to_string();
                }
                let mut factors = Vec::new();
                for (gi, &e) in m.iter().enumerate() {
                    for _ in 0..e {
                        factors.push(self.gens[gi].0.as_str());
                    }
                }
                factors.join("*")
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// The common degree of an element's monomials; `None` when zero.
    pub fn el_degree(&self, el: &El) -> Result<Option<u32>> {
        let mut deg = None;
        for m in el {
            let d = raw_degree(&self.gens, m);
            match deg {
                None => deg = Some(d),
                Some(p) if p != d => {
                    return Err(Error::Invalid(format!(
                        "inhomogeneous element: degrees {p} and {d}"
                    )));
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn mul(&self, a: &El, b: &El) -> El {
        let mut out = El::new();
        for x in a {
            for y in b {
                let prod: Expo = x.iter().zip(y).map(|(p, q)| p + q).collect();
                for m in self.reduce_monomial(&prod) {
                    toggle(&mut out, m);
                }
            }
        }
        out
    }

    /// `Sq^i` on a homogeneous element.  Targets above the top degree are
    /// zero because the ring is trivial there.
    pub fn sq(&self, i: u32, el: &El) -> Result<El> {
        if i == 0 || el.is_empty() {
            return Ok(el.clone());
        }
        let d = self.el_degree(el)?.expect("nonzero element has a degree");
        if d + i > self.top {
            return Ok(El::new());
        }
        let mat = &self.action[&(i, d)];
        let img = mat.apply(&self.el_vector(d, el)?);
        Ok(self.vector_el(d + i, &img))
    }

    /// Cartan recursion on a raw monomial, peeling one generator factor.
    fn sq_monomial(&self, i: u32, m: &Expo, memo: &mut BTreeMap<(u32, Expo), El>) -> El {
        if i == 0 {
            return self.reduce_monomial(m);
        }
        if let Some(hit) = memo.get(&(i, m.clone())) {
            return hit.clone();
        }
        let out = match m.iter().position(|&e| e > 0) {
            None => El::new(),
            Some(g) => {
                let mut rest = m.clone();
                rest[g] -= 1;
                let gd = self.gens[g].1;
                let mut acc = El::new();
                for a in 0..=i.min(gd) {
                    let ga = if a == 0 {
                        let mut e = vec![0u16; self.gens.len()];
                        e[g] = 1;
                        El::from([e])
                    } else {
                        self.sq_gen[g].get(&a).cloned().unwrap_or_default()
                    };
                    if ga.is_empty() {
                        continue;
                    }
                    let rb = self.sq_monomial(i - a, &rest, memo);
                    for t in self.mul(&ga, &rb) {
                        toggle(&mut acc, t);
                    }
                }
                acc
            }
        };
        memo.insert((i, m.clone()), out.clone());
        out
    }

    pub fn el_vector(&self, d: u32, el: &El) -> Result<BitVec> {
        let mut v = BitVec::zero(self.dim(d));
        for m in el {
            let idx = self
                .index
                .get(d as usize)
                .and_then(|ix| ix.get(m))
                .ok_or_else(|| {
                    Error::Invalid(format!(
                        "monomial `{}` is not a degree-{d} basis element",
                        self.show_el(&El::from([m.clone()]))
                    ))
                })?;
            v.toggle(*idx);
        }
        Ok(v)
    }

    pub fn vector_el(&self, d: u32, v: &BitVec) -> El {
        v.ones().map(|i| self.basis[d as usize][i].clone()).collect()
    }

    /// Evaluation against the fundamental class: the coefficient of the
    /// top-degree basis monomial.  False whenever the top degree is not
    /// one-dimensional, or after `with_fundamental_zeroed`.
    pub fn kronecker(&self, el: &El) -> bool {
        if self.fundamental_zeroed || self.basis[self.top as usize].len() != 1 {
            return false;
        }
        el.contains(&self.basis[self.top as usize][0])
    }

    /// Forget how to evaluate against the fundamental class.  Every pairing
    /// becomes identically zero, so duality validation must fail; used to
    /// confirm the validator cannot be talked into a vacuous pass.
    pub fn with_fundamental_zeroed(mut self) -> Self {
        self.fundamental_zeroed = true;
        self
    }

    /// Attach (or replace) the declared torsion subspace.
    pub fn with_torsion(mut self, degree: u32, basis: Vec<El>) -> Result<Self> {
        if degree > self.top {
            return Err(Error::Invalid(format!(
                "torsion degree {degree} exceeds the top degree {}",
                self.top
            )));
        }
        for el in &basis {
            match self.el_degree(el)? {
                None => {
                    return Err(Error::Invalid(
                        "torsion basis elements must be nonzero".into(),
                    ));
                }
                Some(d) if d != degree => {
                    return Err(Error::Invalid(format!(
                        "torsion element `{}` has degree {d}, declared {degree}",
                        self.show_el(el)
                    )));
                }
                _ => {}
            }
            self.el_vector(degree, el)?;
        }
        self.torsion = Some((degree, basis));
        Ok(self)
    }
}

// ---------------------------------------------------------------------------
// Products

impl PDAlgebra {
    /// The graded tensor product, with right-hand generators primed on a
    /// name collision.  Left generators come first in the combined
    /// exponent order, matching [`PDAlgebra::tensor`].
    pub fn product(&self, other: &PDAlgebra) -> Result<PDAlgebra> {
        let l = self.gens.len();
        let r = other.gens.len();
        let embed_l = |e: &Expo| -> Expo {
            let mut out = e.clone();
            out.extend(std::iter::repeat_n(0, r));
            out
        };
        let embed_r = |e: &Expo| -> Expo {
            let mut out = vec![0u16; l];
            out.extend_from_slice(e);
            out
        };
        let embed_el = |el: &El, right: bool| -> El {
            el.iter()
                .map(|e| if right { embed_r(e) } else { embed_l(e) })
                .collect()
        };

        let mut gens = self.gens.clone();
        for (n, d) in &other.gens {
            let mut nn = n.clone();
            while gens.iter().any(|(g, _)| *g == nn) {
                nn.push('\'');
            }
            gens.push((nn, *d));
        }
        let mut rules: Vec<(Expo, El)> = self
            .rules
            .iter()
            .map(|(lhs, rhs)| (embed_l(lhs), embed_el(rhs, false)))
            .collect();
        rules.extend(
            other
                .rules
                .iter()
                .map(|(lhs, rhs)| (embed_r(lhs), embed_el(rhs, true))),
        );
        let mut sq_gen: Vec<BTreeMap<u32, El>> = self
            .sq_gen
            .iter()
            .map(|t| t.iter().map(|(&i, el)| (i, embed_el(el, false))).collect())
            .collect();
        sq_gen.extend(
            other
                .sq_gen
                .iter()
                .map(|t| -> BTreeMap<u32, El> {
                    t.iter().map(|(&i, el)| (i, embed_el(el, true))).collect()
                }),
        );

        compile(Parts {
            name: format!("{} x {}", self.name, other.name),
            top: self.top + other.top,
            spinc: self.spinc && other.spinc,
            gens,
            rules,
            sq_gen,
            torsion_raw: None,
        })
    }

    /// Embed `a (x) b` into the product algebra `self.product(other)`.
    /// The result is raw; reduce it in the product.
    pub fn tensor(&self, other: &PDAlgebra, a: &El, b: &El) -> El {
        let l = self.gens.len();
        let r = other.gens.len();
        let mut out = El::new();
        for x in a {
            for y in b {
                let mut e = Vec::with_capacity(l + r);
                e.extend_from_slice(x);
                e.extend_from_slice(y);
                toggle(&mut out, e);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Wu and Stiefel-Whitney classes

/// Wu classes `v`, Stiefel-Whitney classes `w = Sq(v)`, and, on a manifold
/// of dimension `8n + 2`, the degree-`(4n+2)` class `Sq^2 v_{4n}`.
#[derive(Debug, Clone)]
pub struct WuProfile {
    pub v: Vec<El>,
    pub w: Vec<El>,
    pub theta: Option<El>,
}

impl PDAlgebra {
    /// The Poincaré pairing `H^{top-d} x H^d -> F2` as a matrix: rows are
    /// indexed by the complementary basis, columns by the degree-`d` basis.
    pub fn pairing(&self, d: u32) -> BitMat {
        let cols = &self.basis[d as usize];
        let rows = &self.basis[(self.top - d) as usize];
        let mut m = BitMat::zero(rows.len(), cols.len());
        for (r, x) in rows.iter().enumerate() {
            for (c, y) in cols.iter().enumerate() {
                let prod: Expo = x.iter().zip(y).map(|(p, q)| p + q).collect();
                let mut hit = false;
                for t in self.reduce_monomial(&prod) {
                    if self.kronecker(&El::from([t])) {
                        hit = !hit;
                    }
                }
                m.set(r, c, hit);
            }
        }
        m
    }

    /// Solve `<v_k x, [M]> = <Sq^k x, [M]>` for every `k`.  Each system is
    /// uniquely solvable exactly when the pairing is nondegenerate; a
    /// degenerate pairing surfaces as `SingularSystem`.
    pub fn wu_classes(&self) -> Result<WuProfile> {
        if self.dim(self.top) != 1 {
            return Err(Error::Invalid(format!(
                "{}: top cohomology has dimension {}, expected 1",
                self.name,
                self.dim(self.top)
            )));
        }
        let mut v: Vec<El> = Vec::with_capacity(self.top as usize + 1);
        for k in 0..=self.top {
            let mat = self.pairing(k);
            let rows = &self.basis[(self.top - k) as usize];
            let mut rhs = BitVec::zero(rows.len());
            for (r, x) in rows.iter().enumerate() {
                let sqx = self.sq(k, &El::from([x.clone()]))?;
                rhs.set(r, self.kronecker(&sqx));
            }
            let sol = mat.solve_unique(&rhs)?;
            v.push(self.vector_el(k, &sol));
        }
        let mut w: Vec<El> = Vec::with_capacity(self.top as usize + 1);
        for k in 0..=self.top {
            let mut wk = El::new();
            for i in 0..=k {
                wk = add(&wk, &self.sq(i, &v[(k - i) as usize])?);
            }
            w.push(wk);
        }
        let theta = if self.top % 8 == 2 && self.top >= 10 {
            let fourn = (self.top - 2) / 2;
            Some(self.sq(2, &v[fourn as usize])?)
        } else {
            None
        };
        Ok(WuProfile { v, w, theta })
    }
}

// ---------------------------------------------------------------------------
// Validation

impl PDAlgebra {
    /// Structural checks: one-dimensional top, nondegenerate pairing in
    /// every degree, generator squares, exhaustive Adem compliance of the
    /// derived action, the characteristic-class consequences of the
    /// declared bundle structure, and the declared torsion data.
    pub fn validate(&self) -> Vec<Check> {
        let mut out = Vec::new();

        let td = self.dim(self.top);
        out.push(Check::new(
            "pd.top_dimension",
            "dim H^top = 1",
            td == 1,
            format!("{}: dim H^{} = {td}", self.name, self.top),
        ));

        let mut degenerate = Vec::new();
        for d in 0..=self.top {
            let m = self.pairing(d);
            if self.dim(d) != self.dim(self.top - d) || m.rank() < self.dim(d) {
                degenerate.push(d);
            }
        }
        out.push(Check::new(
            "pd.pairing_nondegenerate",
            "H^d x H^{top-d} -> F2 is a perfect pairing",
            degenerate.is_empty(),
            if degenerate.is_empty() {
                format!("all degrees 0..={} paired perfectly", self.top)
            } else {
                format!("degenerate in degrees {degenerate:?}")
            },
        ));

        let mut bad_squares = Vec::new();
        for (gi, (gname, gdeg)) in self.gens.iter().enumerate() {
            let mut g = vec![0u16; self.gens.len()];
            g[gi] = 1;
            let gel = El::from([g.clone()]);
            if *gdeg > self.top {
                continue;
            }
            let lhs = if 2 * gdeg > self.top {
                El::new()
            } else {
                self.sq(*gdeg, &gel).unwrap_or_default()
            };
            let rhs = self.mul(&gel, &gel);
            if lhs != rhs {
                bad_squares.push(format!(
                    "Sq{gdeg} {gname} = {}, but {gname}*{gname} = {}",
                    self.show_el(&lhs),
                    self.show_el(&rhs)
                ));
            }
        }
        out.push(Check::new(
            "pd.squares_on_generators",
            "Sq^{deg g} g = g*g",
            bad_squares.is_empty(),
            if bad_squares.is_empty() {
                format!("{} generators checked", self.gens.len())
            } else {
                bad_squares.join("; ")
            },
        ));

        let (triples, failures) = self.adem_failures();
        out.push(Check::new(
            "pd.adem_relations",
            "Sq^a Sq^b = sum C(b-1-c, a-2c) Sq^{a+b-c} Sq^c for a < 2b",
            failures.is_empty(),
            if failures.is_empty() {
                format!("{triples} compositions verified")
            } else {
                failures.join("; ")
            },
        ));

        if self.spinc {
            match self.wu_classes() {
                Ok(wu) => {
                    let pass1 = self.top < 1 || wu.w[1].is_empty();
                    out.push(Check::new(
                        "pd.spinc_w1",
                        "spin^c => w_1 = 0",
                        pass1,
                        if self.top < 1 {
                            "top degree below 1".to_string()
                        } else {
                            format!("w_1 = {}", self.show_el(&wu.w[1]))
                        },
                    ));
                    let pass3 = self.top < 3 || wu.w[3].is_empty();
                    out.push(Check::new(
                        "pd.spinc_w3",
                        "spin^c => w_3 = 0",
                        pass3,
                        if self.top < 3 {
                            "top degree below 3".to_string()
                        } else {
                            format!("w_3 = {}", self.show_el(&wu.w[3]))
                        },
                    ));
                }
                Err(e) => {
                    out.push(Check::new(
                        "pd.spinc_w1",
                        "spin^c => w_1 = 0",
                        false,
                        format!("Wu classes unavailable: {e}"),
                    ));
                }
            }
        } else {
            out.push(Check::new(
                "pd.spinc_w1",
                "spin^c => w_1 = 0",
                true,
                "not declared spin^c; nothing to check".to_string(),
            ));
        }

        let tpass = match &self.torsion {
            None => "no torsion subspace declared".to_string(),
            Some((deg, basis)) => format!(
                "torsion subspace declared: {} elements in degree {deg}",
                basis.len()
            ),
        };
        out.push(Check::new(
            "pd.torsion_declared",
            "declared torsion classes are homogeneous of their declared degree",
            true,
            tpass,
        ));

        out
    }

    /// Exhaustively compare every composition `Sq^a Sq^b` on every degree
    /// against its Adem expansion.  Returns (verified count, failures).
    fn adem_failures(&self) -> (usize, Vec<String>) {
        let mut triples = 0usize;
        let mut failures = Vec::new();
        for b in 1..=self.top {
            for a in 1..2 * b {
                if a + b > self.top {
                    break;
                }
                let rhs_terms = match adem_pair(a, b) {
                    Ok(e) => e,
                    Err(e) => {
                        failures.push(format!("Sq{a} Sq{b}: {e}"));
                        continue;
                    }
                };
                for d in 0..=self.top - a - b {
                    if self.dim(d) == 0 {
                        continue;
                    }
                    let lhs = self.action[&(a, d + b)].mul(&self.action[&(b, d)]);
                    let mut rhs = BitMat::zero(self.dim(d + a + b), self.dim(d));
                    for mono in rhs_terms.terms() {
                        match *mono.exponents() {
                            [s] => rhs.xor_assign(&self.action[&(s, d)]),
                            [s, t] => {
                                rhs.xor_assign(&self.action[&(s, d + t)].mul(&self.action[&(t, d)]));
                            }
                            _ => failures.push(format!("Sq{a} Sq{b}: unexpected term {mono}")),
                        }
                    }
                    triples += 1;
                    if lhs != rhs {
                        failures.push(format!("Sq{a} Sq{b} != its expansion on H^{d}"));
                    }
                }
            }
        }
        (triples, failures)
    }
}

// ---------------------------------------------------------------------------
// Wu-class consequences of a spin^c structure

impl PDAlgebra {
    /// On a spin^c manifold every even Wu class has trivial Bockstein:
    /// `Sq^1 v_{2k} = 0`.  Alongside, re-derive the composition rule
    /// `Sq^2 Sq^{2k-1} = C(2k-2, 2) Sq^{2k+1} + Sq^{2k} Sq^1` that the
    /// degree count rests on, with the binomial parity recomputed from
    /// Pascal's triangle.  Not declared spin^c: reported as skipped.
    pub fn check_v2k(&self) -> Result<Vec<Check>> {
        if !self.spinc {
            return Ok(vec![Check::new(
                "v2k.skipped",
                "Sq^1 v_{2k} = 0",
                true,
                format!("SkippedNotSpinc: {} is not declared spin^c", self.name),
            )]);
        }
        let wu = self.wu_classes()?;
        let mut out = Vec::new();
        for k in 1..=self.top / 2 {
            let v2k = &wu.v[(2 * k) as usize];
            let img = self.sq(1, v2k)?;
            out.push(Check::new(
                format!("v2k.sq1_v{}", 2 * k),
                "Sq^1 v_{2k} = 0",
                img.is_empty(),
                format!(
                    "{}: v_{} = {}, Sq^1 of it = {}",
                    self.name,
                    2 * k,
                    self.show_el(v2k),
                    self.show_el(&img)
                ),
            ));
        }
        if self.top % 8 == 2 && self.top >= 10 {
            let fourn = (self.top - 2) / 2;
            let theta = self.sq(2, &wu.v[fourn as usize])?;
            let img = self.sq(1, &theta)?;
            out.push(Check::new(
                format!("v2k.sq3_v{fourn}"),
                "Sq^1 Sq^2 v_{4n} = 0",
                img.is_empty(),
                format!(
                    "{}: Sq^2 v_{fourn} = {}, Sq^1 of it = {}",
                    self.name,
                    self.show_el(&theta),
                    self.show_el(&img)
                ),
            ));
        }
        for k in 1..=8u32 {
            // k = 1 leaves the composite already admissible; no expansion.
            let lhs = if 2 < 2 * (2 * k - 1) {
                adem_pair(2, 2 * k - 1)?
            } else {
                SteenrodElement::from_monomial(SqMonomial::new(vec![2, 2 * k - 1])?)
            };
            let mut expected = SteenrodElement::zero();
            if pascal_parity((2 * k - 2) as u64, 2) {
                expected = SteenrodElement::from_monomial(SqMonomial::single(2 * k + 1)?);
            }
            let tail = SteenrodElement::from_monomial(SqMonomial::new(vec![2 * k, 1])?);
            expected = expected.sum(&tail);
            out.push(Check::new(
                format!("v2k.adem_step_k{k}"),
                "Sq^2 Sq^{2k-1} = C(2k-2, 2) Sq^{2k+1} + Sq^{2k} Sq^1",
                lhs == expected,
                format!("k = {k}: Sq2 Sq{} = {lhs}", 2 * k - 1),
            ));
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// The torsion pairing in the middle dimension

/// Outcome of the exhaustive check `<t Sq^2 t> = <t Sq^2 v_{4n}>` over the
/// span of the declared torsion classes.
#[derive(Debug, Clone)]
pub struct MainReport {
    pub n: u32,
    pub torsion_rank: usize,
    pub elements_checked: usize,
    pub failures: Vec<String>,
}

impl MainReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Outcome of the rank computation for the bilinear form
/// `[x, y] = <x Sq^2 y>` on `span(torsion + {v_{4n}})`.
#[derive(Debug, Clone)]
pub struct RankReport {
    pub n: u32,
    /// Dimension of the span the form lives on.
    pub space_dim: usize,
    pub gram_rank: usize,
    pub symmetric: bool,
    /// `<(w_4 + w_2^2) w_{top-4}, [M]>`.
    pub wu_number: bool,
    /// `<v_{4n} Sq^2 v_{4n}, [M]>`.
    pub sq_number: bool,
}

impl RankReport {
    pub fn pass(&self) -> bool {
        self.symmetric
            && (self.gram_rank % 2 == 1) == self.wu_number
            && self.wu_number == self.sq_number
    }
}

impl PDAlgebra {
    fn middle_degree(&self) -> Result<u32> {
        if !self.spinc {
            return Err(Error::BadDegreeConfig(format!(
                "{}: not declared spin^c",
                self.name
            )));
        }
        if self.top % 8 != 2 || self.top < 10 {
            return Err(Error::BadDegreeConfig(format!(
                "{}: top degree {} is not 8n+2 with n >= 1",
                self.name, self.top
            )));
        }
        let fourn = (self.top - 2) / 2;
        match &self.torsion {
            None => Err(Error::BadDegreeConfig(format!(
                "{}: no torsion subspace declared",
                self.name
            ))),
            Some((deg, _)) if *deg != fourn => Err(Error::BadDegreeConfig(format!(
                "{}: torsion declared in degree {deg}, the pairing lives in degree {fourn}",
                self.name
            ))),
            Some(_) => Ok(fourn),
        }
    }

    /// For every element `t` in the span of the declared torsion classes,
    /// compare `<t Sq^2 t, [M]>` with `<t Sq^2 v_{4n}, [M]>`.
    pub fn main_identity(&self) -> Result<MainReport> {
        let fourn = self.middle_degree()?;
        let (_, basis) = self.torsion.as_ref().expect("checked by middle_degree");
        if basis.len() > 12 {
            return Err(Error::Invalid(format!(
                "torsion rank {} too large for exhaustive span enumeration",
                basis.len()
            )));
        }
        let wu = self.wu_classes()?;
        let sq2v = self.sq(2, &wu.v[fourn as usize])?;
        let mut failures = Vec::new();
        let total = 1usize << basis.len();
        for mask in 0..total {
            let mut t = El::new();
            for (i, b) in basis.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    t = add(&t, b);
                }
            }
            let lhs = self.kronecker(&self.mul(&t, &self.sq(2, &t)?));
            let rhs = self.kronecker(&self.mul(&t, &sq2v));
            if lhs != rhs {
                failures.push(format!(
                    "t = {}: <t Sq2 t> = {}, <t Sq2 v> = {}",
                    self.show_el(&t),
                    lhs as u8,
                    rhs as u8
                ));
            }
        }
        Ok(MainReport {
            n: (self.top - 2) / 8,
            torsion_rank: basis.len(),
            elements_checked: total,
            failures,
        })
    }

    /// Build the Gram matrix of `[x, y] = <x Sq^2 y>` on a basis of
    /// `span(torsion + {v_{4n}})`, check it is symmetric, and compare its
    /// rank parity with the two characteristic numbers it must match.
    pub fn rank_identity(&self) -> Result<RankReport> {
        let fourn = self.middle_degree()?;
        let (_, declared) = self.torsion.as_ref().expect("checked by middle_degree");
        let wu = self.wu_classes()?;
        let v4n = wu.v[fourn as usize].clone();

        let mut span_vecs: Vec<BitVec> = Vec::new();
        let mut span_els: Vec<El> = Vec::new();
        for el in declared.iter().chain(std::iter::once(&v4n)) {
            if el.is_empty() {
                continue;
            }
            let vec = self.el_vector(fourn, el)?;
            if !in_span(&span_vecs, &vec) {
                span_vecs.push(vec);
                span_els.push(el.clone());
            }
        }

        let k = span_els.len();
        let mut gram = BitMat::zero(k, k);
        for (c, y) in span_els.iter().enumerate() {
            let sq2y = self.sq(2, y)?;
            for (r, x) in span_els.iter().enumerate() {
                gram.set(r, c, self.kronecker(&self.mul(x, &sq2y)));
            }
        }
        let mut symmetric = true;
        for r in 0..k {
            for c in 0..r {
                symmetric &= gram.get(r, c) == gram.get(c, r);
            }
        }

        let w2 = &wu.w[2];
        let w4 = &wu.w[4];
        let wtop4 = &wu.w[(self.top - 4) as usize];
        let wu_number = self.kronecker(&self.mul(&add(w4, &self.mul(w2, w2)), wtop4));
        let sq_number = self.kronecker(&self.mul(&v4n, &self.sq(2, &v4n)?));

        Ok(RankReport {
            n: (self.top - 2) / 8,
            space_dim: k,
            gram_rank: gram.rank(),
            symmetric,
            wu_number,
            sq_number,
        })
    }
}

// ---------------------------------------------------------------------------
// The bundled-corpus suite

fn el_eq_check(alg: &PDAlgebra, id: &str, anchor: &str, got: &El, want: &El) -> Check {
    Check::new(
        id,
        anchor,
        got == want,
        format!(
            "{}: computed {}, expected {}",
            alg.name,
            alg.show_el(got),
            alg.show_el(want)
        ),
    )
}

/// Wu-class oracle suite over the bundled corpus: closed-form profiles for
/// projective spaces and spheres, vanishing above half the dimension,
/// multiplicativity across products, and the middle-dimensional classes of
/// the two 18-dimensional products.
pub fn wu_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let corpus: BTreeMap<&str, PDAlgebra> = crate::corpus::bundled()
        .into_iter()
        .map(|(k, text)| PDAlgebra::from_json(text).map(|a| (k, a)))
        .collect::<Result<_>>()?;

    // Spheres and the point: v = 1.
    let mut trivial_ok = true;
    let mut trivial_detail = Vec::new();
    for key in ["point", "s2", "s4", "s6", "s10", "s18"] {
        let a = &corpus[key];
        let wu = a.wu_classes()?;
        let unit_only = wu.v[0] == a.parse_el("1")? && wu.v[1..].iter().all(El::is_empty);
        trivial_ok &= unit_only;
        trivial_detail.push(format!("{}: v = {}", a.name, if unit_only { "1" } else { "?" }));
    }
    out.push(Check::new(
        "wu.trivial_profiles",
        "v(S^n) = 1, v(point) = 1",
        trivial_ok,
        trivial_detail.join("; "),
    ));

    // Real projective spaces: v_k = C(n-k, k) x^k, w = (1+x)^{n+1}.
    for n in 1..=10u32 {
        let a = &corpus[format!("rp{n}").as_str()];
        let wu = a.wu_classes()?;
        let x = a.parse_el("x")?;
        let mut pass = true;
        let mut first_bad = String::new();
        for k in 0..=n {
            let mut want = El::new();
            if pascal_parity((n - k) as u64, k as u64) {
                want = a.parse_el("1")?;
                for _ in 0..k {
                    want = a.mul(&want, &x);
                }
            }
            if wu.v[k as usize] != want {
                pass = false;
                first_bad = format!(
                    "v_{k} = {}, oracle {}",
                    a.show_el(&wu.v[k as usize]),
                    a.show_el(&want)
                );
                break;
            }
        }
        let one_plus_x = a.parse_el("1 + x")?;
        let mut total_w = a.parse_el("1")?;
        for _ in 0..=n {
            total_w = a.mul(&total_w, &one_plus_x);
        }
        let mut got_w = El::new();
        for wk in &wu.w {
            got_w = add(&got_w, wk);
        }
        if got_w != total_w {
            pass = false;
            first_bad = format!(
                "w = {}, oracle (1+x)^{} = {}",
                a.show_el(&got_w),
                n + 1,
                a.show_el(&total_w)
            );
        }
        out.push(Check::new(
            format!("wu.oracle.rp{n}"),
            "v_k(RP^n) = C(n-k, k) x^k, w(RP^n) = (1+x)^{n+1}",
            pass,
            if pass {
                format!("all {} Wu classes and the total w match", n + 1)
            } else {
                first_bad
            },
        ));
    }

    // Complex projective spaces: v_{2k} = C(n-k, k) c^k, w = (1+c)^{n+1}.
    for n in 2..=5u32 {
        let a = &corpus[format!("cp{n}").as_str()];
        let wu = a.wu_classes()?;
        let c = a.parse_el("c")?;
        let mut pass = true;
        let mut detail = String::new();
        for k in 0..=n {
            let mut want = El::new();
            if pascal_parity((n - k) as u64, k as u64) {
                want = a.parse_el("1")?;
                for _ in 0..k {
                    want = a.mul(&want, &c);
                }
            }
            if wu.v[(2 * k) as usize] != want {
                pass = false;
                detail = format!("v_{} mismatches the oracle", 2 * k);
            }
        }
        for (k, vk) in wu.v.iter().enumerate() {
            if k % 2 == 1 && !vk.is_empty() {
                pass = false;
                detail = format!("odd Wu class v_{k} nonzero");
            }
        }
        let one_plus_c = a.parse_el("1 + c")?;
        let mut total_w = a.parse_el("1")?;
        for _ in 0..=n {
            total_w = a.mul(&total_w, &one_plus_c);
        }
        let mut got_w = El::new();
        for wk in &wu.w {
            got_w = add(&got_w, wk);
        }
        if got_w != total_w {
            pass = false;
            detail = format!(
                "w = {}, oracle (1+c)^{} = {}",
                a.show_el(&got_w),
                n + 1,
                a.show_el(&total_w)
            );
        }
        out.push(Check::new(
            format!("wu.oracle.cp{n}"),
            "v_{2k}(CP^n) = C(n-k, k) c^k, w(CP^n) = (1+c)^{n+1}",
            pass,
            if pass {
                "Wu classes and total w match".to_string()
            } else {
                detail
            },
        ));
    }

    // HP^2: v = 1 + u.
    {
        let a = &corpus["hp2"];
        let wu = a.wu_classes()?;
        let mut got_v = El::new();
        for vk in &wu.v {
            got_v = add(&got_v, vk);
        }
        out.push(el_eq_check(
            a,
            "wu.oracle.hp2",
            "v(HP^2) = 1 + u",
            &got_v,
            &a.parse_el("1 + u")?,
        ));
    }

    // Vanishing above half the dimension, everywhere in the corpus.
    {
        let mut pass = true;
        let mut detail = Vec::new();
        for a in corpus.values() {
            let wu = a.wu_classes()?;
            for k in 0..=a.top {
                if 2 * k > a.top && !wu.v[k as usize].is_empty() {
                    pass = false;
                    detail.push(format!("{}: v_{k} != 0", a.name));
                }
            }
        }
        out.push(Check::new(
            "wu.vanish_above_half",
            "v_k = 0 for 2k > dim M",
            pass,
            if pass {
                format!("verified on {} algebras", corpus.len())
            } else {
                detail.join("; ")
            },
        ));
    }

    // Multiplicativity across every corpus pair that stays within total
    // dimension 20: v(a x b) = v(a) (x) v(b) and likewise for w.
    {
        let keys: Vec<&str> = corpus.keys().copied().collect();
        let mut pairs = 0usize;
        let mut pass = true;
        let mut detail = String::new();
        for (i, ka) in keys.iter().enumerate() {
            for kb in &keys[i..] {
                let (a, b) = (&corpus[ka], &corpus[kb]);
                if a.top + b.top > 20 {
                    continue;
                }
                let p = a.product(b)?;
                let wu_a = a.wu_classes()?;
                let wu_b = b.wu_classes()?;
                let wu_p = p.wu_classes()?;
                for k in 0..=p.top {
                    let mut expect_v = El::new();
                    let mut expect_w = El::new();
                    for ia in 0..=k.min(a.top) {
                        let jb = k - ia;
                        if jb > b.top {
                            continue;
                        }
                        expect_v = add(
                            &expect_v,
                            &p.reduce_el(&a.tensor(b, &wu_a.v[ia as usize], &wu_b.v[jb as usize])),
                        );
                        expect_w = add(
                            &expect_w,
                            &p.reduce_el(&a.tensor(b, &wu_a.w[ia as usize], &wu_b.w[jb as usize])),
                        );
                    }
                    if wu_p.v[k as usize] != expect_v || wu_p.w[k as usize] != expect_w {
                        pass = false;
                        if detail.is_empty() {
                            detail = format!("{}: degree {k} mismatch", p.name);
                        }
                    }
                }
                pairs += 1;
            }
        }
        out.push(Check::new(
            "wu.multiplicative",
            "v(M x N) = v(M) (x) v(N), w(M x N) = w(M) (x) w(N)",
            pass,
            if pass {
                format!("{pairs} products checked, every degree")
            } else {
                detail
            },
        ));
    }

    // The two 18-dimensional products: middle Wu class, Sq^2 of it, and
    // vanishing of everything above half the dimension.
    {
        let rp9 = &corpus["rp9"];
        let p = rp9.product(rp9)?;
        let wu = p.wu_classes()?;
        out.push(el_eq_check(
            &p,
            "wu.products_dim18.rp9xrp9",
            "v_8(RP9 x RP9) = x^4 (x) x^4",
            &wu.v[8],
            &p.parse_el("x*x*x*x*x'*x'*x'*x'")?,
        ));
        // Sq^2(x^4 (x) x^4) = 0: every Cartan term carries an even binomial.
        let theta = wu.theta.clone().expect("18 = 8*2 + 2");
        out.push(el_eq_check(
            &p,
            "wu.products_dim18.rp9xrp9_theta",
            "Sq^2 v_8 = 0 on RP9 x RP9",
            &theta,
            &El::new(),
        ));

        let q = corpus["cp5"].product(&corpus["hp2"])?;
        let wuq = q.wu_classes()?;
        out.push(el_eq_check(
            &q,
            "wu.products_dim18.cp5xhp2",
            "v_8(CP5 x HP2) = c^2 (x) u",
            &wuq.v[8],
            &q.parse_el("c*c*u")?,
        ));
        let mut high_ok = true;
        for k in 10..=18usize {
            high_ok &= wu.v[k].is_empty() && wuq.v[k].is_empty();
        }
        out.push(Check::new(
            "wu.products_dim18.vanishing",
            "v_k = 0 for k >= 10 on an 18-manifold",
            high_ok,
            "both products, degrees 10..=18".to_string(),
        ));

        // Crossing each 18-dimensional product with HP^2 once more:
        // in the 26-dimensional result the only degree-12 contribution
        // is v_8 (x) u, because v_12 vanishes on an 18-manifold and
        // v_8(HP^2) vanishes on an 8-manifold.
        let hp2 = &corpus["hp2"];
        for (a, id) in [
            (&p, "wu.v12_hp2.rp9xrp9"),
            (&q, "wu.v12_hp2.cp5xhp2"),
        ] {
            let big = a.product(hp2)?;
            let wu_big = big.wu_classes()?;
            let v8 = &a.wu_classes()?.v[8];
            let u = hp2.parse_el("u")?;
            let want = big.reduce_el(&a.tensor(hp2, v8, &u));
            out.push(el_eq_check(
                &big,
                id,
                "v_12(M^18 x HP^2) = v_8(M) (x) u",
                &wu_big.v[12],
                &want,
            ));
        }
    }

    // v_6 = w_2 w_4 on every spin^c algebra of dimension at least 13,
    // including the two 18-dimensional products.
    {
        let mut checked = Vec::new();
        let mut pass = true;
        let mut examples: Vec<PDAlgebra> = corpus
            .values()
            .filter(|a| a.spinc && a.top >= 13)
            .cloned()
            .collect();
        examples.push(corpus["rp9"].product(&corpus["rp9"])?);
        examples.push(corpus["cp5"].product(&corpus["hp2"])?);
        for a in &examples {
            let wu = a.wu_classes()?;
            let ok = wu.v[6] == a.mul(&wu.w[2], &wu.w[4]);
            pass &= ok;
            checked.push(format!(
                "{}: v_6 = {}{}",
                a.name,
                a.show_el(&wu.v[6]),
                if ok { "" } else { " MISMATCH" }
            ));
        }
        out.push(Check::new(
            "wu.v6_is_w2w4",
            "v_6 = w_2 w_4 on a spin^c manifold of dimension >= 13",
            pass,
            checked.join("; "),
        ));
    }

    // The bundled 10-dimensional product with declared torsion: the
    // middle-dimension identity and the rank comparison.
    {
        let a = &corpus["rp3x7"];
        let main = a.main_identity()?;
        out.push(Check::new(
            "wu.torsion_identity.rp3x7",
            "<t Sq^2 t> = <t Sq^2 v_4> over the torsion span",
            main.pass(),
            format!(
                "{} elements of a rank-{} span checked{}",
                main.elements_checked,
                main.torsion_rank,
                if main.pass() {
                    String::new()
                } else {
                    format!("; first failure: {}", main.failures[0])
                }
            ),
        ));
        let rank = a.rank_identity()?;
        out.push(Check::new(
            "wu.torsion_rank.rp3x7",
            "rank[x, y] = <x Sq^2 y> mod 2 = <(w_4 + w_2^2) w_6> = <v_4 Sq^2 v_4>",
            rank.pass(),
            format!(
                "form on a {}-dimensional space, rank {}, symmetric: {}, numbers ({}, {})",
                rank.space_dim, rank.gram_rank, rank.symmetric, rank.wu_number as u8, rank.sq_number as u8
            ),
        ));
    }

    Ok(out)
}

/// Run [`PDAlgebra::check_v2k`] over the whole bundled corpus, prefixing
/// each check id with the corpus key.  Algebras without a spin^c structure
/// contribute their explicit skip marker.
pub fn v2k_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (key, text) in crate::corpus::bundled() {
        let a = PDAlgebra::from_json(text)?;
        for c in a.check_v2k()? {
            out.push(Check::new(
                format!("{key}.{}", c.id),
                c.anchor,
                c.pass,
                c.detail,
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn load(key: &str) -> PDAlgebra {
        PDAlgebra::from_json(corpus::get(key).unwrap()).unwrap()
    }

    #[test]
    fn projective_space_dimensions_and_pairing() {
        let a = load("rp5");
        assert_eq!(a.top, 5);
        for d in 0..=5 {
            assert_eq!(a.dim(d), 1);
        }
        for c in a.validate() {
            assert!(c.pass, "{}: {}", c.id, c.detail);
        }
    }

    #[test]
    fn wu_profiles_match_hand_computations() {
        // v(RP3) = 1, v(RP5) = 1 + x^2, v(RP7) = 1, v(RP9) = 1 + x^2 + x^4.
        for (key, want) in [
            ("rp3", "1"),
            ("rp5", "1 + x*x"),
            ("rp7", "1"),
            ("rp9", "1 + x*x + x*x*x*x"),
        ] {
            let a = load(key);
            let wu = a.wu_classes().unwrap();
            let mut total = El::new();
            for vk in &wu.v {
                total = add(&total, vk);
            }
            assert_eq!(total, a.parse_el(want).unwrap(), "{key}");
        }
        let a = load("rp9");
        let wu = a.wu_classes().unwrap();
        let mut total_w = El::new();
        for wk in &wu.w {
            total_w = add(&total_w, wk);
        }
        assert_eq!(total_w, a.parse_el("1 + x*x + x*x*x*x*x*x*x*x").unwrap());

        let c = load("cp5");
        let wu = c.wu_classes().unwrap();
        let mut total = El::new();
        for vk in &wu.v {
            total = add(&total, vk);
        }
        assert_eq!(total, c.parse_el("1 + c*c").unwrap());

        let h = load("hp2");
        let wu = h.wu_classes().unwrap();
        assert_eq!(wu.v[4], h.parse_el("u").unwrap());
        assert_eq!(wu.w[4], h.parse_el("u").unwrap());
        assert_eq!(wu.w[8], h.parse_el("u*u").unwrap());
    }

    #[test]
    fn element_strings_round_trip() {
        let a = load("rp3x7");
        for text in ["0", "1", "x*x*y*y", "y*y*y*y + x*x*y*y"] {
            let el = a.parse_el(text).unwrap();
            assert_eq!(a.parse_el(&a.show_el(&el)).unwrap(), el, "{text}");
        }
        assert!(a.parse_el("z").is_err());
        assert!(a.parse_el("x *  x").is_ok());
    }

    #[test]
    fn products_tensor_the_action() {
        let rp3 = load("rp3");
        let rp7 = load("rp7");
        let p = rp3.product(&rp7).unwrap();
        assert_eq!(p.top, 10);
        assert!(p.spinc);
        // Kuenneth dimensions: dim H^d = #{(i, j): i <= 3, j <= 7, i + j = d}.
        let expect = [1usize, 2, 3, 4, 4, 4, 4, 4, 3, 2, 1];
        for d in 0..=10u32 {
            assert_eq!(p.dim(d), expect[d as usize], "degree {d}");
        }
        for c in p.validate() {
            assert!(c.pass, "{}: {}", c.id, c.detail);
        }
        // Both factors name their generator x, so the right one is primed.
        // Sq^2(x x'^2) = Sq^2x x'^2 + Sq^1x Sq^1x'^2 + x Sq^2x'^2 = x x'^4:
        // the first two terms die (unstability, Sq^1 of a square).
        let got = p.sq(2, &p.parse_el("x*x'*x'").unwrap()).unwrap();
        assert_eq!(got, p.parse_el("x*x'*x'*x'*x'").unwrap());
    }

    #[test]
    fn self_product_primes_the_right_generators() {
        let rp5 = load("rp5");
        let p = rp5.product(&rp5).unwrap();
        let names: Vec<&str> = p.generators().iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["x", "x'"]);
        let el = p.parse_el("x*x'").unwrap();
        assert_eq!(p.show_el(&el), "x*x'");
    }

    #[test]
    fn reordered_generators_keep_the_wu_profile() {
        // The same ring with its generator list permuted must produce the
        // same Wu classes, with exponent slots permuted accordingly.
        let a = load("rp3x7");
        let text = corpus::get("rp3x7").unwrap();
        let orig = r#"[{"g": "x", "deg": 1}, {"g": "y", "deg": 1}]"#;
        let swapped = r#"[{"g": "y", "deg": 1}, {"g": "x", "deg": 1}]"#;
        assert!(text.contains(orig), "corpus formatting changed");
        let b = PDAlgebra::from_json(&text.replace(orig, swapped)).unwrap();
        let wa = a.wu_classes().unwrap();
        let wb = b.wu_classes().unwrap();
        for k in 0..=10usize {
            let permuted: El = wa.v[k].iter().map(|m| vec![m[1], m[0]]).collect();
            assert_eq!(
                permuted, wb.v[k],
                "degree {k}: {} vs {}",
                a.show_el(&wa.v[k]),
                b.show_el(&wb.v[k])
            );
        }
    }

    #[test]
    fn main_identity_on_the_bundled_ten_manifold() {
        let a = load("rp3x7");
        let report = a.main_identity().unwrap();
        assert_eq!(report.n, 1);
        assert_eq!(report.torsion_rank, 2);
        assert_eq!(report.elements_checked, 4);
        assert!(report.pass(), "{:?}", report.failures);

        let rank = a.rank_identity().unwrap();
        assert!(rank.symmetric);
        assert_eq!(rank.space_dim, 2); // v_4 = 0 adds nothing to the span
        assert!(rank.pass());
    }

    #[test]
    fn main_identity_on_rp5_x_rp5() {
        let rp5 = load("rp5");
        let p = rp5.product(&rp5).unwrap();
        // Mod-2 reductions of the integral torsion in degree 4.
        let torsion = vec![
            p.parse_el("x'*x'*x'*x'").unwrap(),
            p.parse_el("x*x*x'*x'").unwrap(),
            p.parse_el("x*x*x*x").unwrap(),
        ];
        let p = p.with_torsion(4, torsion).unwrap();
        let report = p.main_identity().unwrap();
        assert_eq!(report.elements_checked, 8);
        assert!(report.pass(), "{:?}", report.failures);
        let rank = p.rank_identity().unwrap();
        assert!(rank.symmetric);
        // v_4 = x^2 x'^2 lies inside the torsion span.
        assert_eq!(rank.space_dim, 3);
        assert!(rank.pass());
    }

    #[test]
    fn degree_preconditions_are_enforced() {
        let hp2 = load("hp2"); // top 8: not 8n+2
        assert!(matches!(
            hp2.main_identity(),
            Err(Error::BadDegreeConfig(_))
        ));
        let rp4 = load("rp4"); // not spin^c
        assert!(matches!(
            rp4.main_identity(),
            Err(Error::BadDegreeConfig(_))
        ));
        // Torsion declared in the wrong degree: rejected at check time.
        let a = load("rp3x7");
        let el = a.parse_el("x*y*y*y*y*y").unwrap();
        let wrong = a.clone().with_torsion(6, vec![el]).unwrap();
        assert!(matches!(
            wrong.main_identity(),
            Err(Error::BadDegreeConfig(_))
        ));
    }

    #[test]
    fn zeroed_fundamental_class_breaks_validation() {
        let a = load("rp5").with_fundamental_zeroed();
        let checks = a.validate();
        let pairing = checks
            .iter()
            .find(|c| c.id == "pd.pairing_nondegenerate")
            .unwrap();
        assert!(!pairing.pass);
        assert!(a.wu_classes().is_err());
    }

    #[test]
    fn spinc_flags_match_the_two_stiefel_whitney_obstructions() {
        for (key, _) in corpus::bundled() {
            let a = load(key);
            if !a.spinc {
                continue;
            }
            let wu = a.wu_classes().unwrap();
            if a.top >= 1 {
                assert!(wu.w[1].is_empty(), "{}: w_1 != 0", a.name);
            }
            if a.top >= 3 {
                assert!(wu.w[3].is_empty(), "{}: w_3 != 0", a.name);
            }
        }
        // RP4 and RP8 genuinely fail w_1 = 0: the flag is load-bearing.
        for key in ["rp4", "rp8"] {
            let a = load(key);
            let wu = a.wu_classes().unwrap();
            assert!(!wu.w[1].is_empty(), "{key} should have w_1 = x");
        }
    }

    #[test]
    fn check_v2k_skips_honestly_and_passes_on_spinc() {
        let rp4 = load("rp4");
        let checks = rp4.check_v2k().unwrap();
        assert_eq!(checks.len(), 1);
        assert!(checks[0].pass);
        assert!(checks[0].detail.contains("SkippedNotSpinc"));

        for key in ["rp5", "rp9", "cp5", "hp2", "s10", "rp3x7"] {
            let a = load(key);
            for c in a.check_v2k().unwrap() {
                assert!(c.pass, "{}: {} — {}", key, c.id, c.detail);
            }
        }
    }

    #[test]
    fn whole_suite_is_green() {
        let checks = wu_suite().unwrap();
        assert!(checks.len() >= 20);
        for c in &checks {
            assert!(c.pass, "{}: {}", c.id, c.detail);
        }
    }

    #[test]
    fn pascal_parity_agrees_with_small_cases() {
        // Row 4: 1 4 6 4 1 -> parities 1 0 0 0 1.
        assert!(pascal_parity(4, 0));
        assert!(!pascal_parity(4, 1));
        assert!(!pascal_parity(4, 2));
        assert!(pascal_parity(4, 4));
        assert!(!pascal_parity(3, 5));
        // C(5, 4) = 5 is odd: the n = 2 case of the degree-4 composition.
        assert!(pascal_parity(5, 4));
    }

    #[test]
    fn malformed_descriptions_are_rejected() {
        for bad in [
            "{",
            r#"{"name": "m", "top": 2}"#,
            r#"{"name": "m", "top": 2, "spinc": true, "generators": [{"g": "x", "deg": 0}], "relations": [], "sq": {}}"#,
            r#"{"name": "m", "top": 2, "spinc": true, "generators": [{"g": "x", "deg": 1}], "relations": [["x", 2]], "sq": {}}"#,
            r#"{"name": "m", "top": 2, "spinc": true, "generators": [{"g": "x", "deg": 1}], "relations": [], "sq": {"x": {"5": "x*x"}}}"#,
            r#"{"name": "m", "top": 2, "spinc": true, "generators": [{"g": "x", "deg": 1}], "relations": [], "sq": {}, "extra": 1}"#,
        ] {
            assert!(PDAlgebra::from_json(bad).is_err(), "{bad}");
        }
    }
}
