//! Rees-algebra machinery for bounding the regularity of ideal powers.
//!
//! The Rees ring `S[It] ⊆ S[t]` of a monomial ideal `I = ⟨f₁,…,f_s⟩` is
//! presented as `R/J` where `R = S[T₁,…,T_s]` carries the `Pic(X)×Z`
//! grading `deg Tᵢ = (deg fᵢ, 1)` and `J` is obtained by eliminating `t`
//! from `⟨Tᵢ − t·fᵢ⟩`. A Gröbner engine over the rationals computes `J`,
//! a Schreyer free resolution of `R/J` records the graded Betti shifts,
//! and those shifts feed the inner bound `n·q₁ + a + reg S ⊆ reg(Iⁿ)`, a
//! sharper resolution-based inner bound, and the outer bound
//! `reg(Iⁿ) ⊆ n·q₂ + Nef X`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};

use num_traits::{One, Zero};

use crate::cohomology::{DimsOracle, OraclePath};
use crate::error::{Error, Result};
use crate::lattice::{
    maximal_lower_bounds, minimal_elements, minimal_upper_bounds, Cone, PicVector,
};
use crate::regularity::{
    lambda_shifts, reg_region_within, RegularityRegion, Window,
};
use crate::ring::{ideal_power, monomials_of_degree, MonomialIdeal, MonomialModule};
use crate::scalar::{Field, Rat};
use crate::toric::ToricVariety;

/// Ceiling on processed S-pairs per Gröbner run.
const PAIR_BUDGET: usize = 20_000;
/// Ceiling on resolution length beyond the variable count.
const LEVEL_SLACK: usize = 2;

// ---------------------------------------------------------------------------
// Ambient polynomial ring
// ---------------------------------------------------------------------------

/// Polynomial ring `S[T₁..T_s]`, optionally extended by the elimination
/// variable `t`. Exponent vectors are laid out `[x.., t?, T..]`.
///
/// The monomial order compares the `t` exponent first (so `t` is heaviest
/// and the order eliminates it), then uses degree-reverse-lexicographic
/// order on the remaining variables.
#[derive(Clone, Debug)]
pub struct ReesRing {
    x_degrees: Vec<PicVector>,
    has_t: bool,
    aux_degrees: Vec<(PicVector, i64)>,
}

impl ReesRing {
    pub fn for_ideal(x: &ToricVariety, ideal: &MonomialIdeal, with_t: bool) -> ReesRing {
        ReesRing {
            x_degrees: x.var_degrees(),
            has_t: with_t,
            aux_degrees: ideal
                .gens()
                .iter()
                .map(|g| (g.degree(x), 1))
                .collect(),
        }
    }

    pub fn num_x(&self) -> usize {
        self.x_degrees.len()
    }

    pub fn num_aux(&self) -> usize {
        self.aux_degrees.len()
    }

    pub fn num_vars(&self) -> usize {
        self.num_x() + usize::from(self.has_t) + self.num_aux()
    }

    fn t_index(&self) -> Option<usize> {
        self.has_t.then(|| self.num_x())
    }

    fn without_t(&self) -> ReesRing {
        ReesRing {
            x_degrees: self.x_degrees.clone(),
            has_t: false,
            aux_degrees: self.aux_degrees.clone(),
        }
    }

    /// `Pic(X)×Z` degree of a monomial exponent (`t` has degree `(0, 1)`).
    pub fn bidegree(&self, exp: &[i64]) -> (PicVector, i64) {
        let rho = self.x_degrees.first().map_or(0, |d| d.len());
        let mut pic = PicVector::zero(rho);
        for (i, d) in self.x_degrees.iter().enumerate() {
            pic = &pic + &d.scaled(exp[i]);
        }
        let mut aux = 0i64;
        if let Some(ti) = self.t_index() {
            aux += exp[ti];
        }
        let base = self.num_x() + usize::from(self.has_t);
        for (j, (p, w)) in self.aux_degrees.iter().enumerate() {
            let e = exp[base + j];
            pic = &pic + &p.scaled(e);
            aux += w * e;
        }
        (pic, aux)
    }

    /// Monomial order: `t` exponent first, then graded reverse
    /// lexicographic on the remaining variables.
    pub fn cmp_exp(&self, a: &[i64], b: &[i64]) -> Ordering {
        let ti = self.t_index();
        if let Some(ti) = ti {
            match a[ti].cmp(&b[ti]) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        let rest = |e: &[i64]| -> i64 {
            e.iter()
                .enumerate()
                .filter(|(i, _)| Some(*i) != ti)
                .map(|(_, v)| v)
                .sum()
        };
        match rest(a).cmp(&rest(b)) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for i in (0..a.len()).rev() {
            if Some(i) == ti {
                continue;
            }
            match a[i].cmp(&b[i]) {
                Ordering::Equal => {}
                // last differing exponent smaller => monomial larger
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// Polynomial with rational coefficients; terms are kept sorted in strictly
/// descending monomial order with no zero coefficients, so `terms[0]` is
/// the leading term.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    pub terms: Vec<(Vec<i64>, Rat)>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial { terms: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_terms(ring: &ReesRing, terms: Vec<(Vec<i64>, Rat)>) -> Polynomial {
        let mut p = Polynomial { terms };
        p.normalize(ring);
        p
    }

    fn normalize(&mut self, ring: &ReesRing) {
        self.terms
            .sort_by(|a, b| ring.cmp_exp(&b.0, &a.0));
        let mut out: Vec<(Vec<i64>, Rat)> = vec![];
        for (e, c) in self.terms.drain(..) {
            if let Some(last) = out.last_mut() {
                if last.0 == e {
                    last.1 = &last.1 + &c;
                    continue;
                }
            }
            out.push((e, c));
        }
        out.retain(|(_, c)| !c.is_zero());
        self.terms = out;
    }

    fn lead(&self) -> &(Vec<i64>, Rat) {
        &self.terms[0]
    }

    /// Divide through by the leading coefficient.
    fn make_monic(&mut self) {
        if self.is_zero() {
            return;
        }
        let lc = self.terms[0].1.clone();
        for (_, c) in &mut self.terms {
            *c = &*c / &lc;
        }
    }

    /// Degree of a homogeneous polynomial; `None` for zero or mixed terms.
    pub fn bidegree(&self, ring: &ReesRing) -> Option<(PicVector, i64)> {
        let mut it = self.terms.iter().map(|(e, _)| ring.bidegree(e));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// `self − c·x^e·g`.
    fn sub_mul(&self, ring: &ReesRing, e: &[i64], c: &Rat, g: &Polynomial) -> Polynomial {
        let mut terms = self.terms.clone();
        for (ge, gc) in &g.terms {
            let exp: Vec<i64> = ge.iter().zip(e).map(|(a, b)| a + b).collect();
            terms.push((exp, -(c * gc)));
        }
        Polynomial::from_terms(ring, terms)
    }
}

fn exp_divides(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn exp_lcm(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn exp_sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn exp_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn p_mul(ring: &ReesRing, a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut terms = vec![];
    for (ea, ca) in &a.terms {
        for (eb, cb) in &b.terms {
            terms.push((exp_add(ea, eb), ca * cb));
        }
    }
    Polynomial::from_terms(ring, terms)
}

fn p_sub(ring: &ReesRing, a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut terms = a.terms.clone();
    for (e, c) in &b.terms {
        terms.push((e.clone(), -c));
    }
    Polynomial::from_terms(ring, terms)
}

fn p_scale(a: &Polynomial, s: &Rat) -> Polynomial {
    if s.is_zero() {
        return Polynomial::zero();
    }
    Polynomial {
        terms: a.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
    }
}

/// Remainder of `f` under multivariate division by `basis`.
fn reduce(ring: &ReesRing, f: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let mut work = f.clone();
    let mut rem: Vec<(Vec<i64>, Rat)> = vec![];
    'outer: while !work.is_zero() {
        let (e, c) = work.lead().clone();
        for g in basis {
            if g.is_zero() {
                continue;
            }
            let (ge, gc) = g.lead();
            if exp_divides(ge, &e) {
                work = work.sub_mul(ring, &exp_sub(&e, ge), &(&c / gc), g);
                continue 'outer;
            }
        }
        rem.push((e, c));
        work.terms.remove(0);
    }
    Polynomial { terms: rem }
}

/// S-polynomial of two nonzero polynomials.
fn s_polynomial(ring: &ReesRing, f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (ef, cf) = f.lead();
    let (eg, cg) = g.lead();
    let l = exp_lcm(ef, eg);
    let left = p_scale(f, &cf.inv());
    let left = Polynomial::from_terms(
        ring,
        left.terms
            .iter()
            .map(|(e, c)| (exp_add(e, &exp_sub(&l, ef)), c.clone()))
            .collect(),
    );
    let right = p_scale(g, &cg.inv());
    let right = Polynomial::from_terms(
        ring,
        right
            .terms
            .iter()
            .map(|(e, c)| (exp_add(e, &exp_sub(&l, eg)), c.clone()))
            .collect(),
    );
    p_sub(ring, &left, &right)
}

/// Buchberger's algorithm; returns a reduced, monic Gröbner basis sorted
/// by descending leading monomial.
pub fn buchberger(ring: &ReesRing, gens: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let mut basis: Vec<Polynomial> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .cloned()
        .map(|mut g| {
            g.make_monic();
            g
        })
        .collect();
    let mut pairs: VecDeque<(usize, usize)> = VecDeque::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pairs.push_back((i, j));
        }
    }
    let mut processed = 0usize;
    while let Some((i, j)) = pairs.pop_front() {
        processed += 1;
        if processed > PAIR_BUDGET {
            return Err(Error::BudgetExceeded("Groebner S-pair budget"));
        }
        let s = s_polynomial(ring, &basis[i], &basis[j]);
        let mut r = reduce(ring, &s, &basis);
        if r.is_zero() {
            continue;
        }
        r.make_monic();
        for k in 0..basis.len() {
            pairs.push_back((k, basis.len()));
        }
        basis.push(r);
    }
    // Inter-reduce: drop redundant leading terms, then tail-reduce.
    let mut keep: Vec<Polynomial> = vec![];
    for (i, g) in basis.iter().enumerate() {
        let (ge, _) = g.lead();
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            if i == j || h.is_zero() {
                return false;
            }
            let (he, _) = h.lead();
            exp_divides(he, ge) && (he != ge || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut reduced: Vec<Polynomial> = vec![];
    for i in 0..keep.len() {
        let others: Vec<Polynomial> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, h)| h.clone())
            .collect();
        let mut r = reduce(ring, &keep[i], &others);
        if !r.is_zero() {
            r.make_monic();
            reduced.push(r);
        }
    }
    reduced.sort_by(|a, b| ring.cmp_exp(&b.lead().0, &a.lead().0));
    Ok(reduced)
}

/// Check the Buchberger postcondition: every S-pair reduces to zero.
pub fn spairs_reduce_to_zero(ring: &ReesRing, basis: &[Polynomial]) -> bool {
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let s = s_polynomial(ring, &basis[i], &basis[j]);
            if !reduce(ring, &s, basis).is_zero() {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Rees ideal
// ---------------------------------------------------------------------------

/// Defining ideal `J = ker(R → S[It])`, computed by eliminating `t` from
/// `⟨Tᵢ − t·fᵢ⟩` with a `t`-heaviest order. The returned generators are a
/// Gröbner basis of `J` in the `t`-free ring, which is also returned.
pub fn rees_ideal(x: &ToricVariety, ideal: &MonomialIdeal) -> Result<(ReesRing, Vec<Polynomial>)> {
    let ring_t = ReesRing::for_ideal(x, ideal, true);
    let nx = ring_t.num_x();
    let nv = ring_t.num_vars();
    let ti = nx; // index of t
    let mut gens = vec![];
    for (i, f) in ideal.gens().iter().enumerate() {
        let mut t_exp = vec![0i64; nv];
        t_exp[nx + 1 + i] = 1;
        let mut f_exp = vec![0i64; nv];
        f_exp[..nx].copy_from_slice(&f.0 .0);
        f_exp[ti] = 1;
        gens.push(Polynomial::from_terms(
            &ring_t,
            vec![(t_exp, Rat::one()), (f_exp, -Rat::one())],
        ));
    }
    let gb = buchberger(&ring_t, &gens)?;
    let ring = ring_t.without_t();
    let mut out = vec![];
    for g in gb {
        if g.terms.iter().all(|(e, _)| e[ti] == 0) {
            let terms = g
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e[..nx].to_vec();
                    e2.extend_from_slice(&e[nx + 1..]);
                    (e2, c.clone())
                })
                .collect();
            out.push(Polynomial::from_terms(&ring, terms));
        }
    }
    Ok((ring, out))
}

// ---------------------------------------------------------------------------
// Module Gröbner bases and Schreyer resolutions
// ---------------------------------------------------------------------------

/// Term `c · x^e · e_pos` of an element of a free module.
#[derive(Clone, Debug)]
struct ModTerm {
    pos: usize,
    exp: Vec<i64>,
    coeff: Rat,
}

/// Element of a free module `R^r`, terms sorted descending in the
/// Schreyer order of the ambient free module.
#[derive(Clone, Debug)]
struct ModPoly {
    terms: Vec<ModTerm>,
}

/// Schreyer data for a free module: for each position, the ring exponent
/// and position path accumulated along leading terms down the resolution
/// tower. Module monomials compare by total ring monomial first, then by
/// position path (bottom level first, smaller position wins), then by
/// position.
#[derive(Clone, Debug)]
struct Context {
    lead_exp: Vec<Vec<i64>>,
    lead_path: Vec<Vec<usize>>,
}

impl Context {
    fn trivial(num_vars: usize) -> Context {
        Context {
            lead_exp: vec![vec![0; num_vars]],
            lead_path: vec![vec![]],
        }
    }
}

fn cmp_mod(ring: &ReesRing, ctx: &Context, a: &ModTerm, b: &ModTerm) -> Ordering {
    let ea = exp_add(&a.exp, &ctx.lead_exp[a.pos]);
    let eb = exp_add(&b.exp, &ctx.lead_exp[b.pos]);
    match ring.cmp_exp(&ea, &eb) {
        Ordering::Equal => {}
        ord => return ord,
    }
    match ctx.lead_path[a.pos].cmp(&ctx.lead_path[b.pos]) {
        Ordering::Equal => {}
        Ordering::Less => return Ordering::Greater,
        Ordering::Greater => return Ordering::Less,
    }
    match a.pos.cmp(&b.pos) {
        Ordering::Equal => Ordering::Equal,
        Ordering::Less => Ordering::Greater,
        Ordering::Greater => Ordering::Less,
    }
}

impl ModPoly {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn from_terms(ring: &ReesRing, ctx: &Context, mut terms: Vec<ModTerm>) -> ModPoly {
        terms.sort_by(|a, b| cmp_mod(ring, ctx, b, a));
        let mut out: Vec<ModTerm> = vec![];
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.pos == t.pos && last.exp == t.exp {
                    last.coeff = &last.coeff + &t.coeff;
                    continue;
                }
            }
            out.push(t);
        }
        out.retain(|t| !t.coeff.is_zero());
        ModPoly { terms: out }
    }

    fn lead(&self) -> &ModTerm {
        &self.terms[0]
    }

    fn make_monic(&mut self) {
        if self.is_zero() {
            return;
        }
        let lc = self.terms[0].coeff.clone();
        for t in &mut self.terms {
            t.coeff = &t.coeff / &lc;
        }
    }

    /// `self − c·x^e·g`.
    fn sub_mul(
        &self,
        ring: &ReesRing,
        ctx: &Context,
        e: &[i64],
        c: &Rat,
        g: &ModPoly,
    ) -> ModPoly {
        let mut terms = self.terms.clone();
        for t in &g.terms {
            terms.push(ModTerm {
                pos: t.pos,
                exp: exp_add(&t.exp, e),
                coeff: -(c * &t.coeff),
            });
        }
        ModPoly::from_terms(ring, ctx, terms)
    }
}

/// Divide `f` by `basis`, recording the quotient polynomial applied to
/// each basis element. Returns `(remainder, quotients)` with
/// `f = Σ qᵢ·basisᵢ + remainder`.
fn reduce_mod(
    ring: &ReesRing,
    ctx: &Context,
    f: &ModPoly,
    basis: &[ModPoly],
) -> (ModPoly, Vec<Polynomial>) {
    let mut work = f.clone();
    let mut rem: Vec<ModTerm> = vec![];
    let mut quots: Vec<Vec<(Vec<i64>, Rat)>> = vec![vec![]; basis.len()];
    'outer: while !work.is_zero() {
        let lead = work.lead().clone();
        for (gi, g) in basis.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let gl = g.lead();
            if gl.pos == lead.pos && exp_divides(&gl.exp, &lead.exp) {
                let e = exp_sub(&lead.exp, &gl.exp);
                let c = &lead.coeff / &gl.coeff;
                quots[gi].push((e.clone(), c.clone()));
                work = work.sub_mul(ring, ctx, &e, &c, g);
                continue 'outer;
            }
        }
        rem.push(lead);
        work.terms.remove(0);
    }
    let quotients = quots
        .into_iter()
        .map(|q| Polynomial::from_terms(ring, q))
        .collect();
    (ModPoly { terms: rem }, quotients)
}

/// Module Buchberger over a free module with Schreyer context `ctx`.
fn mod_buchberger(ring: &ReesRing, ctx: &Context, gens: &[ModPoly]) -> Result<Vec<ModPoly>> {
    let mut basis: Vec<ModPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .cloned()
        .map(|mut g| {
            g.make_monic();
            g
        })
        .collect();
    let mut pairs: VecDeque<(usize, usize)> = VecDeque::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pairs.push_back((i, j));
        }
    }
    let mut processed = 0usize;
    while let Some((i, j)) = pairs.pop_front() {
        processed += 1;
        if processed > PAIR_BUDGET {
            return Err(Error::BudgetExceeded("module Groebner S-pair budget"));
        }
        let (li, lj) = (basis[i].lead(), basis[j].lead());
        if li.pos != lj.pos {
            continue;
        }
        let l = exp_lcm(&li.exp, &lj.exp);
        let left = shift_mod(ring, ctx, &basis[i], &exp_sub(&l, &li.exp), &li.coeff.inv());
        let right = shift_mod(ring, ctx, &basis[j], &exp_sub(&l, &lj.exp), &lj.coeff.inv());
        let spair = sub_modpoly(ring, ctx, &left, &right);
        let (mut r, _) = reduce_mod(ring, ctx, &spair, &basis);
        if r.is_zero() {
            continue;
        }
        r.make_monic();
        for k in 0..basis.len() {
            pairs.push_back((k, basis.len()));
        }
        basis.push(r);
    }
    Ok(basis)
}

fn shift_mod(ring: &ReesRing, ctx: &Context, f: &ModPoly, e: &[i64], s: &Rat) -> ModPoly {
    ModPoly::from_terms(
        ring,
        ctx,
        f.terms
            .iter()
            .map(|t| ModTerm {
                pos: t.pos,
                exp: exp_add(&t.exp, e),
                coeff: &t.coeff * s,
            })
            .collect(),
    )
}

fn sub_modpoly(ring: &ReesRing, ctx: &Context, a: &ModPoly, b: &ModPoly) -> ModPoly {
    let mut terms = a.terms.clone();
    for t in &b.terms {
        terms.push(ModTerm {
            pos: t.pos,
            exp: t.exp.clone(),
            coeff: -&t.coeff,
        });
    }
    ModPoly::from_terms(ring, ctx, terms)
}

/// Syzygies of a Gröbner basis `gb` (Schreyer): S-pair reductions have
/// zero remainder and the recorded quotients assemble into generators of
/// the syzygy module, which are themselves a Gröbner basis for the
/// induced Schreyer order of the new free module.
fn syzygies(
    ring: &ReesRing,
    ctx: &Context,
    gb: &[ModPoly],
) -> Result<(Vec<ModPoly>, Context)> {
    let mut new_ctx = Context {
        lead_exp: vec![],
        lead_path: vec![],
    };
    for g in gb {
        let l = g.lead();
        new_ctx
            .lead_exp
            .push(exp_add(&l.exp, &ctx.lead_exp[l.pos]));
        let mut path = ctx.lead_path[l.pos].clone();
        path.push(l.pos);
        new_ctx.lead_path.push(path);
    }
    let mut out = vec![];
    for i in 0..gb.len() {
        for j in i + 1..gb.len() {
            let (li, lj) = (gb[i].lead(), gb[j].lead());
            if li.pos != lj.pos {
                continue;
            }
            let l = exp_lcm(&li.exp, &lj.exp);
            let (ei, ci) = (exp_sub(&l, &li.exp), li.coeff.inv());
            let (ej, cj) = (exp_sub(&l, &lj.exp), lj.coeff.inv());
            let left = shift_mod(ring, ctx, &gb[i], &ei, &ci);
            let right = shift_mod(ring, ctx, &gb[j], &ej, &cj);
            let spair = sub_modpoly(ring, ctx, &left, &right);
            let (rem, quots) = reduce_mod(ring, ctx, &spair, gb);
            if !rem.is_zero() {
                return Err(Error::InvalidInput(
                    "S-pair of a Groebner basis failed to reduce to zero".into(),
                ));
            }
            let mut terms = vec![
                ModTerm {
                    pos: i,
                    exp: ei,
                    coeff: ci,
                },
                ModTerm {
                    pos: j,
                    exp: ej,
                    coeff: -cj,
                },
            ];
            for (w, q) in quots.iter().enumerate() {
                for (e, c) in &q.terms {
                    terms.push(ModTerm {
                        pos: w,
                        exp: e.clone(),
                        coeff: -c,
                    });
                }
            }
            let syz = ModPoly::from_terms(ring, &new_ctx, terms);
            if !syz.is_zero() {
                out.push(syz);
            }
        }
    }
    Ok((out, new_ctx))
}

// ---------------------------------------------------------------------------
// Graded free complexes
// ---------------------------------------------------------------------------

/// Finite complex of graded free `R`-modules. `shifts[k][i]` is the
/// `Pic(X)×Z` degree of the `i`-th generator of `F_k` (so
/// `F_k = ⊕ᵢ R(−shifts[k][i])`), and `maps[k]` is the matrix of
/// `d_{k+1}: F_{k+1} → F_k` with rows indexed by `F_k` generators.
#[derive(Clone, Debug)]
pub struct GradedFreeComplex {
    pub ring: ReesRing,
    pub shifts: Vec<Vec<(PicVector, i64)>>,
    pub maps: Vec<Vec<Vec<Polynomial>>>,
}

impl GradedFreeComplex {
    pub fn length(&self) -> usize {
        self.maps.len()
    }
}

fn modpolys_to_matrix(rank_prev: usize, gb: &[ModPoly]) -> Vec<Vec<Polynomial>> {
    let mut mat = vec![vec![Polynomial::zero(); gb.len()]; rank_prev];
    for (col, g) in gb.iter().enumerate() {
        for t in &g.terms {
            mat[t.pos][col]
                .terms
                .push((t.exp.clone(), t.coeff.clone()));
        }
    }
    mat
}

/// Free resolution of `R/⟨gens⟩` via iterated Schreyer syzygies, with a
/// pruning pass that cancels unit entries so the shifts approach the
/// minimal Betti degrees.
pub fn schreyer_resolution(ring: &ReesRing, gens: &[Polynomial]) -> Result<GradedFreeComplex> {
    let rho = ring.x_degrees.first().map_or(0, |d| d.len());
    let mut complex = GradedFreeComplex {
        ring: ring.clone(),
        shifts: vec![vec![(PicVector::zero(rho), 0)]],
        maps: vec![],
    };
    let live: Vec<&Polynomial> = gens.iter().filter(|g| !g.is_zero()).collect();
    if live.is_empty() {
        return Ok(complex);
    }
    let mut ctx = Context::trivial(ring.num_vars());
    let level0: Vec<ModPoly> = live
        .iter()
        .map(|g| {
            ModPoly::from_terms(
                ring,
                &ctx,
                g.terms
                    .iter()
                    .map(|(e, c)| ModTerm {
                        pos: 0,
                        exp: e.clone(),
                        coeff: c.clone(),
                    })
                    .collect(),
            )
        })
        .collect();
    let mut gb = mod_buchberger(ring, &ctx, &level0)?;
    let max_levels = ring.num_vars() + LEVEL_SLACK;
    for level in 0.. {
        if gb.is_empty() {
            break;
        }
        if level >= max_levels {
            return Err(Error::BudgetExceeded("resolution length"));
        }
        // determinism: sort the basis by leading term
        gb.sort_by(|a, b| cmp_mod(ring, &ctx, b.lead(), a.lead()));
        let prev_shifts = complex.shifts.last().unwrap().clone();
        let rank_prev = prev_shifts.len();
        let mut shifts = vec![];
        for g in &gb {
            let l = g.lead();
            let (pic, aux) = ring.bidegree(&l.exp);
            let (sp, sa) = &prev_shifts[l.pos];
            shifts.push((&pic + sp, aux + sa));
        }
        complex.maps.push(modpolys_to_matrix(rank_prev, &gb));
        complex.shifts.push(shifts);
        let (syz, new_ctx) = syzygies(ring, &ctx, &gb)?;
        gb = syz;
        ctx = new_ctx;
    }
    prune(&mut complex);
    Ok(complex)
}

fn is_unit_constant(p: &Polynomial) -> bool {
    p.terms.len() == 1 && p.terms[0].0.iter().all(|e| *e == 0)
}

/// Cancel unit (degree-0 scalar) entries of the differentials, shrinking
/// the complex toward a minimal resolution. Each cancellation removes one
/// generator from two consecutive levels while preserving the
/// quasi-isomorphism type.
fn prune(complex: &mut GradedFreeComplex) {
    let ring = complex.ring.clone();
    loop {
        let mut target = None;
        'search: for k in 0..complex.maps.len() {
            for (r, row) in complex.maps[k].iter().enumerate() {
                for (c, p) in row.iter().enumerate() {
                    if is_unit_constant(p) {
                        target = Some((k, r, c));
                        break 'search;
                    }
                }
            }
        }
        let Some((k, r, c)) = target else { break };
        let u = complex.maps[k][r][c].terms[0].1.clone();
        let rows = complex.maps[k].len();
        let cols = complex.maps[k][0].len();
        // clear row r in the other columns (basis change on F_{k+1})
        for c2 in 0..cols {
            if c2 == c || complex.maps[k][r][c2].is_zero() {
                continue;
            }
            let factor = p_scale(&complex.maps[k][r][c2], &u.inv());
            for r2 in 0..rows {
                let delta = p_mul(&ring, &factor, &complex.maps[k][r2][c]);
                complex.maps[k][r2][c2] = p_sub(&ring, &complex.maps[k][r2][c2], &delta);
            }
            if k + 1 < complex.maps.len() {
                let next_cols = complex.maps[k + 1][0].len();
                for c3 in 0..next_cols {
                    let delta = p_mul(&ring, &factor, &complex.maps[k + 1][c2][c3]);
                    let cur = complex.maps[k + 1][c][c3].clone();
                    complex.maps[k + 1][c][c3] = p_sub(
                        &ring,
                        &cur,
                        &p_scale(&delta, &(-Rat::one())),
                    );
                }
            }
        }
        // clear column c in the other rows (basis change on F_k)
        for r2 in 0..rows {
            if r2 == r || complex.maps[k][r2][c].is_zero() {
                continue;
            }
            let factor = p_scale(&complex.maps[k][r2][c], &u.inv());
            for c2 in 0..cols {
                let delta = p_mul(&ring, &factor, &complex.maps[k][r][c2]);
                complex.maps[k][r2][c2] = p_sub(&ring, &complex.maps[k][r2][c2], &delta);
            }
            if k > 0 {
                let prev_rows = complex.maps[k - 1].len();
                for r3 in 0..prev_rows {
                    let delta = p_mul(&ring, &factor, &complex.maps[k - 1][r3][r2]);
                    let cur = complex.maps[k - 1][r3][r].clone();
                    complex.maps[k - 1][r3][r] =
                        p_sub(&ring, &cur, &p_scale(&delta, &(-Rat::one())));
                }
            }
        }
        // delete row r (a generator of F_k) and column c (of F_{k+1})
        for row in &mut complex.maps[k] {
            row.remove(c);
        }
        complex.maps[k].remove(r);
        complex.shifts[k].remove(r);
        complex.shifts[k + 1].remove(c);
        if k > 0 {
            for row in &mut complex.maps[k - 1] {
                row.remove(r);
            }
        }
        if k + 1 < complex.maps.len() {
            complex.maps[k + 1].remove(c);
        }
        // drop empty trailing levels
        while complex
            .shifts
            .last()
            .map_or(false, |s| s.is_empty())
        {
            complex.shifts.pop();
            complex.maps.pop();
        }
        while complex
            .maps
            .last()
            .map_or(false, |m| m.is_empty() || m[0].is_empty())
        {
            complex.maps.pop();
            if complex.shifts.len() > complex.maps.len() + 1 {
                complex.shifts.pop();
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Graded pieces (Hilbert slices and exactness checks)
// ---------------------------------------------------------------------------

/// Monomial exponents of `R` in a given `Pic(X)×Z` degree.
pub fn monomials_of_bidegree(
    x: &ToricVariety,
    ring: &ReesRing,
    pic: &PicVector,
    aux: i64,
) -> Vec<Vec<i64>> {
    assert!(!ring.has_t, "slice enumeration expects the t-free ring");
    if aux < 0 {
        return vec![];
    }
    let s = ring.num_aux();
    let nx = ring.num_x();
    let mut out = vec![];
    for e_aux in compositions(aux, s) {
        let mut residual = pic.clone();
        for (j, (p, _)) in ring.aux_degrees.iter().enumerate() {
            residual = &residual - &p.scaled(e_aux[j]);
        }
        for m in monomials_of_degree(x, &residual) {
            let mut exp = vec![0i64; nx + s];
            exp[..nx].copy_from_slice(&m.0 .0);
            exp[nx..].copy_from_slice(&e_aux);
            out.push(exp);
        }
    }
    out
}

fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = vec![];
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// Hilbert function of `R/⟨gb⟩` in one `Pic(X)×Z` degree, counted by
/// standard monomials with respect to the Gröbner basis `gb`.
pub fn quotient_slice_dim(
    x: &ToricVariety,
    ring: &ReesRing,
    gb: &[Polynomial],
    pic: &PicVector,
    aux: i64,
) -> usize {
    monomials_of_bidegree(x, ring, pic, aux)
        .iter()
        .filter(|m| !gb.iter().any(|g| exp_divides(&g.lead().0, m)))
        .count()
}

/// Dimensions of the graded pieces of the complex and ranks of its
/// differentials in one `Pic(X)×Z` degree; used for exactness checks.
pub fn graded_piece_ranks(
    x: &ToricVariety,
    complex: &GradedFreeComplex,
    pic: &PicVector,
    aux: i64,
) -> (Vec<usize>, Vec<usize>) {
    let ring = &complex.ring;
    let bases: Vec<Vec<(usize, Vec<i64>)>> = complex
        .shifts
        .iter()
        .map(|level| {
            let mut basis = vec![];
            for (u, (sp, sa)) in level.iter().enumerate() {
                for m in monomials_of_bidegree(x, ring, &(pic - sp), aux - sa) {
                    basis.push((u, m));
                }
            }
            basis
        })
        .collect();
    let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let mut ranks = vec![];
    for (k, map) in complex.maps.iter().enumerate() {
        let source = &bases[k + 1];
        let target = &bases[k];
        let index: std::collections::HashMap<(usize, Vec<i64>), usize> = target
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i))
            .collect();
        let mut mat = vec![vec![Rat::zero(); source.len()]; target.len()];
        for (col, (u, m)) in source.iter().enumerate() {
            for (row_gen, row) in map.iter().enumerate() {
                for (e, c) in &row[*u].terms {
                    let key = (row_gen, exp_add(e, m));
                    let i = *index
                        .get(&key)
                        .expect("homogeneous entry lands in the target basis");
                    mat[i][col] = &mat[i][col] + c;
                }
            }
        }
        ranks.push(crate::matrix::rank(mat));
    }
    (dims, ranks)
}

// ---------------------------------------------------------------------------
// Shifts and degree bounds
// ---------------------------------------------------------------------------

/// Nef-minimal upper bound `a` of all Pic shifts of the resolution
/// (lex-least among the minimal bounds found).
pub fn shift_a(x: &ToricVariety, f: &GradedFreeComplex) -> PicVector {
    let pts: Vec<PicVector> = f
        .shifts
        .iter()
        .flatten()
        .map(|(a, _)| a.clone())
        .collect();
    minimal_upper_bounds(&pts, &x.nef, &x.nef_gens)
        .first()
        .cloned()
        .unwrap_or_else(|| PicVector::zero(x.picard_rank()))
}

/// Minimal common upper bounds `q₁` and maximal common lower bounds `q₂`
/// of the generator degrees under the nef order. Any candidate from each
/// list validates the power bounds; callers use the lex-least.
pub fn degree_bounds_q(
    degrees: &[PicVector],
    nef: &Cone,
    nef_gens: &[PicVector],
) -> (Vec<PicVector>, Vec<PicVector>) {
    (
        minimal_upper_bounds(degrees, nef, nef_gens),
        maximal_lower_bounds(degrees, nef, nef_gens),
    )
}

// ---------------------------------------------------------------------------
// Bound regions
// ---------------------------------------------------------------------------

/// Upward-closed degree region evaluated inside a window, described by
/// its points and minimal elements.
#[derive(Clone, Debug)]
pub struct RegionDescriptor {
    pub window: Window,
    pub points: Vec<PicVector>,
    pub minima: Vec<PicVector>,
}

fn region_from<F: Fn(&PicVector) -> bool>(
    x: &ToricVariety,
    window: &Window,
    member: F,
) -> RegionDescriptor {
    let points: Vec<PicVector> = window.points().into_iter().filter(|p| member(p)).collect();
    let minima = minimal_elements(&points, &x.nef);
    RegionDescriptor {
        window: window.clone(),
        points,
        minima,
    }
}

/// `p` lies in `shift + reg S`, tested against the minima of `reg S`.
fn in_shifted_reg(x: &ToricVariety, reg_minima: &[PicVector], shift: &PicVector, p: &PicVector) -> bool {
    reg_minima
        .iter()
        .any(|m| x.nef.contains(&(&(p - shift) - m)))
}

/// Coarse inner bound `n·q₁ + a + reg S`.
pub fn inner_bound(
    x: &ToricVariety,
    n: usize,
    q1: &PicVector,
    a: &PicVector,
    reg_s: &RegularityRegion,
    window: &Window,
) -> RegionDescriptor {
    let shift = &q1.scaled(n as i64) + a;
    region_from(x, window, |p| in_shifted_reg(x, &reg_s.minima, &shift, p))
}

/// Resolution-based inner bound: the intersection over all resolution
/// summands `R(−a_{i,j}, −b_{i,j})` and all `ν` with `|ν| = n − b_{i,j}`
/// of the unions over `|λ| = j` of `ν·P + a_{i,j} − λ·C + reg S`, where
/// `P` lists the generator degrees and `C` the nef Hilbert basis. Always
/// contains the coarse bound.
pub fn sharp_inner_bound(
    x: &ToricVariety,
    ideal: &MonomialIdeal,
    n: usize,
    f: &GradedFreeComplex,
    reg_s: &RegularityRegion,
    window: &Window,
) -> RegionDescriptor {
    let gen_degrees: Vec<PicVector> = ideal.gens().iter().map(|g| g.degree(x)).collect();
    // (translate list for ν, λ options) per resolution summand
    let mut constraints: Vec<(Vec<PicVector>, Vec<PicVector>)> = vec![];
    for (j, level) in f.shifts.iter().enumerate() {
        let lambdas = lambda_shifts(&x.nef_gens, j);
        for (a_ij, b_ij) in level {
            let left = n as i64 - b_ij;
            if left < 0 {
                continue;
            }
            let nus = lambda_shifts(&gen_degrees, left as usize);
            for nu in nus {
                constraints.push((vec![&nu + a_ij], lambdas.clone()));
            }
        }
    }
    region_from(x, window, |p| {
        constraints.iter().all(|(translates, lambdas)| {
            translates.iter().all(|t| {
                lambdas
                    .iter()
                    .any(|l| in_shifted_reg(x, &reg_s.minima, &(t - l), p))
            })
        })
    })
}

/// Outer bound `n·q₂ + Nef X`.
pub fn outer_bound(
    x: &ToricVariety,
    n: usize,
    q2: &PicVector,
    window: &Window,
) -> RegionDescriptor {
    let shift = q2.scaled(n as i64);
    region_from(x, window, |p| x.nef.contains(&(p - &shift)))
}

// ---------------------------------------------------------------------------
// Theorem verification
// ---------------------------------------------------------------------------

/// Verified bound data for one power `Iⁿ`.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub n: usize,
    pub q1: PicVector,
    pub q2: PicVector,
    pub a: PicVector,
    pub reg: RegularityRegion,
    pub inner: RegionDescriptor,
    pub sharp_inner: RegionDescriptor,
    pub outer: RegionDescriptor,
    /// coarse inner bound ⊆ reg(Iⁿ)
    pub inner_ok: bool,
    /// sharp inner bound ⊆ reg(Iⁿ)
    pub sharp_ok: bool,
    /// reg(Iⁿ) ⊆ outer bound
    pub outer_ok: bool,
    /// coarse inner ⊆ sharp inner (monotone sharpness)
    pub sharp_contains_inner: bool,
    /// first point violating any containment, if one exists
    pub witness: Option<PicVector>,
}

/// Witness-scan window: the reporting window merged with the module's
/// default window, so nonregularity witnesses in negative degrees are
/// still reachable from degrees near the reporting window's lower corner.
fn check_window(x: &ToricVariety, m: &MonomialModule, report: &Window) -> Window {
    let dflt = Window::default_for(x, m);
    let lower = PicVector(
        report
            .lower
            .0
            .iter()
            .zip(&dflt.lower.0)
            .map(|(a, b)| *a.min(b))
            .collect(),
    );
    let upper = PicVector(
        report
            .upper
            .0
            .iter()
            .zip(&dflt.upper.0)
            .map(|(a, b)| *a.max(b))
            .collect(),
    );
    Window::new(lower, upper).expect("merged window is valid")
}

fn subset_witness(smaller: &[PicVector], larger: &[PicVector]) -> Option<PicVector> {
    let set: BTreeSet<&PicVector> = larger.iter().collect();
    smaller.iter().find(|p| !set.contains(p)).cloned()
}

/// For each `n ≤ n_max`: compute `reg(Iⁿ)` with the exact cohomology
/// oracle and check the inner and outer bounds inside the window.
pub fn verify_powers_theorem(
    x: &ToricVariety,
    ideal: &MonomialIdeal,
    n_max: usize,
    window: &Window,
) -> Result<Vec<BoundReport>> {
    let (ring, gens) = rees_ideal(x, ideal)?;
    let f = schreyer_resolution(&ring, &gens)?;
    let a = shift_a(x, &f);
    let gen_degrees: Vec<PicVector> = ideal.gens().iter().map(|g| g.degree(x)).collect();
    let (q1s, q2s) = degree_bounds_q(&gen_degrees, &x.nef, &x.nef_gens);
    let q1 = q1s[0].clone();
    let q2 = q2s[0].clone();
    let cox = MonomialModule::cox_ring(x.picard_rank());
    let mut s_oracle = DimsOracle::<Rat>::new(x, &cox, OraclePath::Pattern, 0, Rat::one())?;
    let reg_s = reg_region_within(x, &mut s_oracle, window, &check_window(x, &cox, window))?;

    let report_for = |n: usize| -> Result<BoundReport> {
        let power = MonomialModule::Ideal {
            ideal: ideal_power(ideal, n),
        };
        let check = check_window(x, &power, window);
        let mut oracle = DimsOracle::<Rat>::new(x, &power, OraclePath::Pattern, 0, Rat::one())?;
        let reg = reg_region_within(x, &mut oracle, window, &check)?;
        let inner = inner_bound(x, n, &q1, &a, &reg_s, window);
        let sharp = sharp_inner_bound(x, ideal, n, &f, &reg_s, window);
        let outer = outer_bound(x, n, &q2, window);
        let w_inner = subset_witness(&inner.points, &reg.points);
        let w_sharp = subset_witness(&sharp.points, &reg.points);
        let w_outer = subset_witness(&reg.points, &outer.points);
        let w_mono = subset_witness(&inner.points, &sharp.points);
        let witness = w_inner
            .clone()
            .or_else(|| w_sharp.clone())
            .or_else(|| w_outer.clone())
            .or_else(|| w_mono.clone());
        Ok(BoundReport {
            n,
            q1: q1.clone(),
            q2: q2.clone(),
            a: a.clone(),
            reg,
            inner,
            sharp_inner: sharp,
            outer,
            inner_ok: w_inner.is_none(),
            sharp_ok: w_sharp.is_none(),
            outer_ok: w_outer.is_none(),
            sharp_contains_inner: w_mono.is_none(),
            witness,
        })
    };

    // powers are independent; evaluate them on scoped worker threads,
    // capped by TORREG_THREADS when set
    let threads = std::env::var("TORREG_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|t| *t >= 1)
        .unwrap_or(n_max.max(1));
    let mut reports: Vec<Option<Result<BoundReport>>> = (0..n_max).map(|_| None).collect();
    for chunk_start in (1..=n_max).step_by(threads) {
        let chunk_end = (chunk_start + threads - 1).min(n_max);
        std::thread::scope(|scope| {
            let mut handles = vec![];
            for n in chunk_start..=chunk_end {
                let report_for = &report_for;
                handles.push((n, scope.spawn(move || report_for(n))));
            }
            for (n, h) in handles {
                reports[n - 1] = Some(h.join().expect("power verification thread panicked"));
            }
        });
    }
    reports.into_iter().map(|r| r.unwrap()).collect()
}
