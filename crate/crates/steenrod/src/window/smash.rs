//! The smash-product window and the verification of the detecting map.
//!
//! The window is the tensor product of the Thom window with the
//! mapping-cone module, truncated nine degrees above the base.  The map
//! under test is defined on a free module over thirty-two generators
//! (one per product factor of its target); its value on each generator
//! is a tensor `thom part · cone part`.  The verification recomputes,
//! degree by degree and affinely in the thirteen correction parameters:
//!
//! * that the distinguished class `xi` (a fixed sum of words on seven of
//!   the generators) maps to zero,
//! * that the map is onto through degree `+8` and has the expected rank
//!   at `+9`,
//! * that the kernel through `+9` is exactly the span of the words on
//!   `xi`, with every statement checked against every reachable
//!   parameter assignment.

use std::collections::BTreeSet;

use crate::algebra::{admissible_monomials, normalize_monomial, SqMonomial};
use crate::error::{Error, Result};
use crate::f2::{span_rank, BitVec};
use crate::report::Check;
use crate::window::cofiber::{build_cofiber, Cofiber, NPARAMS};
use crate::window::thom::{build_thom, Gen, Thom};
use crate::window::{AffineMatrix, AffineVec, ModuleWindow};

pub const WINDOW: u32 = 9;

/// One tensor block inside a row: every pair of a degree-`a` Thom basis
/// element with a row-`(j-a)` cone basis element, stored contiguously.
struct Block {
    a: u32,
    offset: usize,
    tdim: usize,
    cdim: usize,
}

pub struct Smash {
    pub window: ModuleWindow,
    blocks: Vec<Vec<Block>>,
}

impl Smash {
    fn position(&self, j: u32, a: u32, t: usize, c: usize) -> usize {
        let block = self.blocks[j as usize]
            .iter()
            .find(|b| b.a == a)
            .unwrap_or_else(|| panic!("row {j} has no block with Thom degree {a}"));
        debug_assert!(t < block.tdim && c < block.cdim);
        block.offset + t * block.cdim + c
    }

    /// `thom part ⊗ cone part` as a vector in row `a + s`.
    pub fn tensor(
        &self,
        a: u32,
        thom_part: &BitVec,
        s: u32,
        cone_part: &AffineVec,
    ) -> AffineVec {
        let j = a + s;
        let mut out = AffineVec::zero(self.window.dim(j), NPARAMS);
        for t in thom_part.ones() {
            for c in cone_part.base.ones() {
                out.base.toggle(self.position(j, a, t, c));
            }
            for (k, e) in cone_part.eps.iter().enumerate() {
                for c in e.ones() {
                    out.eps[k].toggle(self.position(j, a, t, c));
                }
            }
        }
        out
    }
}

/// Assemble the tensor window: bases ordered by Thom degree, then Thom
/// index, then cone index, and the action given by the Cartan rule.
pub fn build_smash(thom: &Thom, cone: &Cofiber) -> Result<Smash> {
    let mut blocks: Vec<Vec<Block>> = Vec::with_capacity(WINDOW as usize + 1);
    let mut dims = Vec::with_capacity(WINDOW as usize + 1);
    let mut labels: Vec<Vec<String>> = Vec::with_capacity(WINDOW as usize + 1);
    for j in 0..=WINDOW {
        let mut row_blocks = Vec::new();
        let mut row_labels = Vec::new();
        let mut offset = 0;
        for a in 0..j.min(thom.window.window + 1) {
            let s = j - a;
            if s > cone.window.window {
                continue;
            }
            let tdim = thom.window.dim(a);
            let cdim = cone.window.dim(s);
            if tdim == 0 || cdim == 0 {
                continue;
            }
            for t in 0..tdim {
                for c in 0..cdim {
                    row_labels.push(format!(
                        "{} (x) {}",
                        thom.window.row_labels(a)[t],
                        cone.window.row_labels(s)[c]
                    ));
                }
            }
            row_blocks.push(Block {
                a,
                offset,
                tdim,
                cdim,
            });
            offset += tdim * cdim;
        }
        blocks.push(row_blocks);
        dims.push(offset);
        labels.push(row_labels);
    }

    let mut window = ModuleWindow::new(
        format!("smash[m={}]", cone.m),
        WINDOW,
        NPARAMS,
        dims,
        labels,
    );
    let smash_dims: Vec<usize> = (0..=WINDOW)
        .map(|j| {
            blocks[j as usize]
                .iter()
                .map(|b| b.tdim * b.cdim)
                .sum()
        })
        .collect();
    for j in 1..WINDOW {
        for i in 1..=WINDOW - j {
            let mut mat = AffineMatrix::zero(smash_dims[(j + i) as usize], smash_dims[j as usize], NPARAMS);
            for block in &blocks[j as usize] {
                let a = block.a;
                let s = j - a;
                for t_src in 0..block.tdim {
                    for c_src in 0..block.cdim {
                        let col = block.offset + t_src * block.cdim + c_src;
                        let mut img = AffineVec::zero(smash_dims[(j + i) as usize], NPARAMS);
                        for p in 0..=i {
                            let q = i - p;
                            if a + p > thom.window.window {
                                continue;
                            }
                            let tcol = if p == 0 {
                                let mut v = BitVec::zero(thom.window.dim(a));
                                v.set(t_src, true);
                                v
                            } else {
                                thom.window
                                    .sq_matrix(p, a)
                                    .expect("thom matrices cover the window")
                                    .base
                                    .column(t_src)
                            };
                            if tcol.is_zero() {
                                continue;
                            }
                            let ccol = if q == 0 {
                                AffineVec::unit(cone.window.dim(s), NPARAMS, c_src)
                            } else {
                                cone.window
                                    .sq_matrix(q, s)
                                    .expect("cone matrices cover the window")
                                    .column(c_src)
                            };
                            if ccol.is_zero() {
                                continue;
                            }
                            let dst_row = j + i;
                            let dst_block = blocks[dst_row as usize]
                                .iter()
                                .find(|b| b.a == a + p)
                                .expect("target block exists for nonzero images");
                            for t in tcol.ones() {
                                for c in ccol.base.ones() {
                                    img.base
                                        .toggle(dst_block.offset + t * dst_block.cdim + c);
                                }
                                for (k, e) in ccol.eps.iter().enumerate() {
                                    for c in e.ones() {
                                        img.eps[k]
                                            .toggle(dst_block.offset + t * dst_block.cdim + c);
                                    }
                                }
                            }
                        }
                        mat.set_column(col, &img);
                    }
                }
            }
            window.insert_sq(i, j, mat);
        }
    }
    Ok(Smash { window, blocks })
}

/// One generator of the free source module, with its image in the tensor
/// window.
pub struct SourceGen {
    pub name: String,
    pub degree: u32,
    pub image: AffineVec,
}

/// The verification context: the tensor window, the thirty-two source
/// generators with their images, the source bases, and the matrix of the
/// map in every degree.
pub struct Fxi {
    pub m: u32,
    pub include_cube: bool,
    pub smash: Smash,
    pub gens: Vec<SourceGen>,
    /// Per degree: the free-module basis, a generator index with a word.
    source_basis: Vec<Vec<(usize, SqMonomial)>>,
    /// Per degree: the matrix of the map, source basis → tensor basis.
    fstar: Vec<AffineMatrix>,
}

fn word(v: &[u32]) -> SqMonomial {
    SqMonomial::new(v.to_vec()).expect("fixed positive exponents")
}

fn generator_images(
    thom: &Thom,
    cone: &Cofiber,
    smash: &Smash,
) -> Result<Vec<(u32, AffineVec)>> {
    let (_, u) = thom.gen_vector(Gen::U);
    let (_, u4) = thom.gen_vector(Gen::U4);
    let sq2u = thom.act(2, 0, &u)?;
    let sq4u = thom.act(4, 0, &u)?;

    let a1 = cone.alpha(1)?;
    let a2 = cone.alpha(2)?;
    let a4 = cone.alpha(4)?;
    let a8 = cone.alpha(8)?;
    let g = |j: u32, with_sq1: bool| cone.gamma(j, with_sq1);
    let cw = |w: &[u32], s: u32, v: &AffineVec| -> Result<AffineVec> {
        Ok(cone.act_word(&word(w), s, v)?.1)
    };

    // (thom degree, thom part, cone row, cone part), in degree order
    let entries: Vec<(u32, &BitVec, u32, AffineVec)> = vec![
        (0, &u.base, 1, a1.clone()),
        (0, &u.base, 2, a2.clone()),
        (2, &sq2u.base, 1, a1.clone()),
        (0, &u.base, 3, g(3, false)?),
        (0, &u.base, 4, a4.clone()),
        (0, &u.base, 4, g(4, false)?),
        (4, &sq4u.base, 1, a1.clone()),
        (4, &u4.base, 1, a1.clone()),
        (0, &u.base, 5, g(5, false)?),
        (2, &sq2u.base, 3, g(3, false)?),
        (4, &sq4u.base, 2, a2.clone()),
        (4, &u4.base, 2, a2.clone()),
        (2, &sq2u.base, 4, a4.clone()),
        (0, &u.base, 6, g(6, false)?),
        (2, &sq2u.base, 4, g(4, false)?),
        (0, &u.base, 7, cw(&[6], 1, &a1)?),
        (0, &u.base, 7, cw(&[4, 2], 1, &a1)?),
        (4, &u4.base, 3, cw(&[2], 1, &a1)?),
        (0, &u.base, 7, cw(&[4], 3, &g(3, false)?)?),
        (0, &u.base, 7, cw(&[2], 5, &g(5, false)?)?),
        (0, &u.base, 7, g(7, false)?),
        (0, &u.base, 7, g(7, true)?),
        (4, &u4.base, 3, g(3, false)?),
        (0, &u.base, 8, cw(&[6], 2, &a2)?),
        (0, &u.base, 8, a8.clone()),
        (4, &u4.base, 4, a4.clone()),
        (0, &u.base, 8, cw(&[4, 2], 2, &g(2, false)?)?),
        (0, &u.base, 8, cw(&[4], 4, &g(4, false)?)?),
        (0, &u.base, 8, cw(&[2], 6, &g(6, false)?)?),
        (0, &u.base, 8, g(8, false)?),
        (0, &u.base, 8, g(8, true)?),
        (4, &u4.base, 4, g(4, false)?),
    ];
    Ok(entries
        .into_iter()
        .map(|(a, tp, s, cp)| (a + s, smash.tensor(a, tp, s, &cp)))
        .collect())
}

/// Build the whole verification context at one base parameter.
pub fn build_fxi(m: u32, include_cube: bool) -> Result<Fxi> {
    let thom = build_thom()?;
    let cone = build_cofiber(m, include_cube)?;
    let smash = build_smash(&thom, &cone)?;

    let images = generator_images(&thom, &cone, &smash)?;
    if images.len() != 32 {
        return Err(Error::Invalid(format!(
            "expected 32 source generators, found {}",
            images.len()
        )));
    }
    let mut per_degree = vec![0u32; WINDOW as usize + 1];
    let mut named: Vec<(u32, u32)> = Vec::new(); // (degree, index within degree)
    for (deg, _) in &images {
        per_degree[*deg as usize] += 1;
        named.push((*deg, per_degree[*deg as usize]));
    }
    let gens: Vec<SourceGen> = images
        .into_iter()
        .zip(named)
        .map(|((degree, image), (deg, idx))| {
            let name = if per_degree[deg as usize] == 1 {
                format!("l{deg}")
            } else {
                format!("l{deg}_{idx}")
            };
            SourceGen {
                name,
                degree,
                image,
            }
        })
        .collect();

    let source_basis: Vec<Vec<(usize, SqMonomial)>> = (0..=WINDOW)
        .map(|j| {
            let mut row = Vec::new();
            for (gi, g) in gens.iter().enumerate() {
                if g.degree > j {
                    continue;
                }
                for l in admissible_monomials(j - g.degree) {
                    row.push((gi, l));
                }
            }
            row
        })
        .collect();

    let mut fstar = Vec::with_capacity(WINDOW as usize + 1);
    for j in 0..=WINDOW {
        let basis = &source_basis[j as usize];
        let mut mat = AffineMatrix::zero(smash.window.dim(j), basis.len(), NPARAMS);
        for (col, (gi, l)) in basis.iter().enumerate() {
            let g = &gens[*gi];
            let (deg, img) = smash.window.act_word(l, g.degree, &g.image)?;
            debug_assert_eq!(deg, j);
            mat.set_column(col, &img);
        }
        fstar.push(mat);
    }

    Ok(Fxi {
        m,
        include_cube,
        smash,
        gens,
        source_basis,
        fstar,
    })
}

impl Fxi {
    pub fn source_dim(&self, j: u32) -> usize {
        self.source_basis[j as usize].len()
    }

    pub fn fstar(&self, j: u32) -> &AffineMatrix {
        &self.fstar[j as usize]
    }

    fn gen_index(&self, name: &str) -> usize {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .unwrap_or_else(|| panic!("no source generator named {name}"))
    }

    fn basis_index(&self, j: u32, gi: usize, l: &SqMonomial) -> usize {
        self.source_basis[j as usize]
            .iter()
            .position(|(g, w)| *g == gi && w == l)
            .unwrap_or_else(|| panic!("({gi}, {l}) missing from the degree-{j} source basis"))
    }

    /// The distinguished degree-6 class, in source coordinates.
    pub fn xi(&self) -> BitVec {
        let mut v = BitVec::zero(self.source_dim(6));
        for (w, name) in xi_terms() {
            let gi = self.gen_index(name);
            v.toggle(self.basis_index(6, gi, &word(&w)));
        }
        v
    }

    /// `Sq^L xi` in source coordinates: each summand's word is rewritten
    /// to the admissible basis of the free module.
    pub fn xi_word(&self, l: &SqMonomial) -> BitVec {
        let j = 6 + l.degree();
        let mut v = BitVec::zero(self.source_dim(j));
        for (w, name) in xi_terms() {
            let gi = self.gen_index(name);
            for term in normalize_monomial(&l.concat(&word(&w))).terms() {
                v.toggle(self.basis_index(j, gi, term));
            }
        }
        v
    }

    /// Apply the map to an exact source vector.
    pub fn apply(&self, j: u32, v: &BitVec) -> AffineVec {
        self.fstar[j as usize].apply(&AffineVec::exact(v.clone(), NPARAMS))
    }
}

/// The seven summands of `xi`: a word applied to a named generator.
fn xi_terms() -> Vec<(Vec<u32>, &'static str)> {
    vec![
        (vec![5], "l1"),
        (vec![4, 1], "l1"),
        (vec![3, 1], "l2"),
        (vec![3], "l3_1"),
        (vec![2, 1], "l3_1"),
        (vec![2, 1], "l3_2"),
        (vec![1], "l5_4"),
    ]
}

/// The words whose values on `xi` must exhaust the kernel, per degree
/// past 6: the admissible words of the complementary degree.
fn kernel_words(j: u32) -> Vec<Vec<u32>> {
    match j {
        6 => vec![vec![]],
        7 => vec![vec![1]],
        8 => vec![vec![2]],
        9 => vec![vec![3], vec![2, 1]],
        _ => vec![],
    }
}

fn scatter(bits: u32, used: &[usize]) -> u32 {
    let mut out = 0;
    for (i, &k) in used.iter().enumerate() {
        if bits >> i & 1 == 1 {
            out |= 1 << k;
        }
    }
    out
}

/// Run the whole verification and report each statement.
pub fn verify_fxi(m: u32, include_cube: bool) -> Result<Vec<Check>> {
    let fxi = build_fxi(m, include_cube)?;
    let mut checks = Vec::new();

    // the distinguished class dies, identically in the parameters
    {
        let img = fxi.apply(6, &fxi.xi());
        checks.push(
            Check::new(
                "fxi.xi_vanishes",
                "f*(xi) = 0",
                img.is_zero(),
                format!(
                    "m = {m}; image of xi in the tensor window is {}",
                    if img.is_zero() { "zero" } else { "nonzero" }
                ),
            )
            .with_parameter_independent(img.is_exact()),
        );
    }

    // every word on xi up to degree +9 dies, and the words span the
    // expected dimensions in the free module
    let expected_span = [(6u32, 1usize), (7, 1), (8, 1), (9, 2)];
    for (j, expected) in expected_span {
        let vecs: Vec<BitVec> = kernel_words(j)
            .into_iter()
            .map(|w| {
                if w.is_empty() {
                    fxi.xi()
                } else {
                    fxi.xi_word(&word(&w))
                }
            })
            .collect();
        let span = span_rank(&vecs, fxi.source_dim(j));
        let mut all_die = true;
        let mut exact = true;
        for v in &vecs {
            let img = fxi.apply(j, v);
            all_die &= img.is_zero();
            exact &= img.is_exact();
        }
        checks.push(
            Check::new(
                format!("fxi.xi_span.plus{j}"),
                format!("words on xi at +{j}: dimension {expected}, all in the kernel"),
                span == expected && all_die,
                format!(
                    "m = {m}; span dimension {span} (expected {expected}); images {}",
                    if all_die { "all vanish" } else { "do not all vanish" }
                ),
            )
            .with_parameter_independent(exact),
        );
    }

    // rank of the map per degree, swept over every reachable parameter
    // assignment
    let source_dims: Vec<usize> = (1..=WINDOW).map(|j| fxi.source_dim(j)).collect();
    let mut kernel_dims = Vec::new();
    let mut sweep_ok = true;
    for j in 1..=WINDOW {
        let mat = fxi.fstar(j);
        let used: Vec<usize> = (0..NPARAMS).filter(|&k| !mat.eps[k].is_zero()).collect();
        let mut ranks = BTreeSet::new();
        for bits in 0..1u32 << used.len() {
            ranks.insert(mat.specialize(scatter(bits, &used)).rank());
        }
        let rank_min = *ranks.iter().next().expect("at least one assignment");
        let independent = ranks.len() == 1;
        sweep_ok &= independent;
        let target = fxi.smash.window.dim(j);
        if j <= 8 {
            checks.push(
                Check::new(
                    format!("fxi.surjective.plus{j}"),
                    format!("f* is onto at +{j}"),
                    ranks.iter().all(|&r| r == target),
                    format!(
                        "m = {m}; rank {rank_min} of target {target}, {} parameters swept ({} assignments)",
                        used.len(),
                        1u32 << used.len()
                    ),
                )
                .with_parameter_independent(independent),
            );
        } else {
            let expected = fxi.source_dim(j) - 2;
            checks.push(
                Check::new(
                    "fxi.rank.plus9",
                    "f* at +9 has corank 2 in the source (not onto the target)",
                    ranks.iter().all(|&r| r == expected) && expected < target,
                    format!(
                        "m = {m}; rank {rank_min} of source {} (target {target}), {} parameters swept",
                        fxi.source_dim(j),
                        used.len()
                    ),
                )
                .with_parameter_independent(independent),
            );
        }
        kernel_dims.push(source_dims[j as usize - 1] - rank_min);
    }

    // kernel dimensions must match the span of the words on xi exactly
    {
        let expected = vec![0usize, 0, 0, 0, 0, 1, 1, 1, 2];
        let pass = kernel_dims == expected;
        checks.push(
            Check::new(
                "fxi.kernel_is_xi_span",
                "kernel of f* through +9 is generated by xi",
                pass,
                format!(
                    "m = {m}; kernel dimensions per degree {kernel_dims:?} (expected {expected:?}); \
                     the words on xi span those dimensions and all die"
                ),
            )
            .with_parameter_independent(sweep_ok),
        );
    }

    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_row_dimensions() {
        let thom = build_thom().unwrap();
        let cone = build_cofiber(3, false).unwrap();
        let smash = build_smash(&thom, &cone).unwrap();
        let dims: Vec<usize> = (1..=9).map(|j| smash.window.dim(j)).collect();
        assert_eq!(dims, vec![1, 2, 4, 7, 12, 18, 29, 44, 66]);
    }

    #[test]
    fn tensor_row_nine_tracks_the_cube_convention() {
        let thom = build_thom().unwrap();
        let without = build_smash(&thom, &build_cofiber(2, false).unwrap()).unwrap();
        assert_eq!(without.window.dim(9), 65);
        let with = build_smash(&thom, &build_cofiber(2, true).unwrap()).unwrap();
        assert_eq!(with.window.dim(9), 66);
    }

    #[test]
    fn tensor_window_satisfies_the_composition_identities() {
        let thom = build_thom().unwrap();
        let cone = build_cofiber(3, false).unwrap();
        let smash = build_smash(&thom, &cone).unwrap();
        assert!(smash.window.adem_failures().is_empty());
    }

    #[test]
    fn source_dimensions() {
        let fxi = build_fxi(3, false).unwrap();
        let dims: Vec<usize> = (1..=9).map(|j| fxi.source_dim(j)).collect();
        assert_eq!(dims, vec![1, 2, 4, 7, 12, 19, 30, 45, 53]);
        assert_eq!(fxi.gens.len(), 32);
    }

    #[test]
    fn full_verification_passes() {
        let checks = verify_fxi(3, false).unwrap();
        assert_eq!(checks.len(), 15);
        for c in &checks {
            assert!(c.pass, "{} failed: {}", c.id, c.detail);
            if let Some(pi) = c.parameter_independent {
                assert!(pi, "{} depends on the parameters", c.id);
            }
        }
    }

    #[test]
    fn first_generator_alone_is_not_enough() {
        // Restricting the map to the single degree-1 generator loses
        // surjectivity immediately at +2: its only value there is the
        // image of Sq1, one line inside a two-dimensional target.
        let fxi = build_fxi(3, false).unwrap();
        let cols: Vec<BitVec> = fxi.source_basis[2]
            .iter()
            .enumerate()
            .filter(|(_, (gi, _))| *gi == 0)
            .map(|(c, _)| fxi.fstar(2).base.column(c))
            .collect();
        assert_eq!(cols.len(), 1);
        let rank = span_rank(&cols, fxi.smash.window.dim(2));
        assert_eq!(rank, 1);
        assert!(rank < fxi.smash.window.dim(2));
    }
}
