//! Graded pieces of local cohomology `H^i_B(M)`.
//!
//! Two independent computation paths:
//! * the Čech complex on the irrelevant ideal's generators, evaluated one
//!   fine degree at a time and aggregated over the fiber of the degree map —
//!   exactly, by slicing the fiber into cells on which the complex is
//!   constant, or over a finite window;
//! * hypercohomology of Čech applied to a finite free resolution with fine
//!   twists (the Taylor complex for monomial ideals), also fiberwise.
//!
//! Dimensions depend on the coefficient field in principle (simplicial-type
//! complexes can carry torsion), so every entry point takes a field sample.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{constrained_directions_trivial, FineVector, PicVector};
use crate::matrix;
use crate::ring::{Monomial, MonomialIdeal, MonomialModule, Term};
use crate::scalar::{Field, Rat};
use crate::toric::ToricVariety;

/// Provenance of a computed dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certification {
    Exact,
    Window,
}

#[derive(Clone, Copy, Debug)]
pub enum Mode {
    Exact,
    /// fine-degree box `[-cap, cap]^n` intersected with the fiber
    Window { cap: i64 },
}

/// Map a small rational coefficient into the field, using `one` to carry
/// runtime field data (the prime-field modulus).
fn scalar_from_rat<F: Field>(c: &Rat, one: &F) -> F {
    let n = i64::try_from(c.numer()).expect("coefficient exceeds i64");
    let d = i64::try_from(c.denom()).expect("coefficient exceeds i64");
    let num = if n < 0 {
        -(F::from_int(-n) * one.clone())
    } else {
        F::from_int(n) * one.clone()
    };
    num / (F::from_int(d.abs()) * one.clone()) * if d < 0 { -one.clone() } else { one.clone() }
}

// ---------------------------------------------------------------------------
// Čech combinatorics

/// Bitmask of variables inverted by a set of Čech indices.
fn inverted_vars(x: &ToricVariety, cone_set: u32) -> u32 {
    let mut mask = 0u32;
    for (k, comp) in x.irrelevant_complements.iter().enumerate() {
        if cone_set & (1 << k) != 0 {
            for &i in comp {
                mask |= 1 << i;
            }
        }
    }
    mask
}

fn neg_mask(alpha: &FineVector) -> u32 {
    alpha
        .0
        .iter()
        .enumerate()
        .filter(|&(_, &a)| a < 0)
        .map(|(i, _)| 1u32 << i)
        .fold(0, |m, b| m | b)
}

fn mask_to_bools(mask: u32, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask & (1 << i) != 0).collect()
}

/// Does the localized graded piece `(M_{x^T})_α` survive? Valid for the
/// module shapes with a fine monomial basis.
fn piece_nonzero(x: &ToricVariety, m: &MonomialModule, alpha: &FineVector, vmask: u32) -> bool {
    let n = x.num_vars();
    if neg_mask(alpha) & !vmask != 0 {
        return false;
    }
    match m {
        MonomialModule::Free { twists } => {
            debug_assert!(twists.len() == 1 && twists[0].is_zero(), "use pic layer");
            true
        }
        MonomialModule::Ideal { ideal } => {
            let inv = mask_to_bools(vmask, n);
            ideal.gens().iter().any(|g| g.divides_outside(alpha, &inv))
        }
        MonomialModule::Quotient { ideal } => {
            let inv = mask_to_bools(vmask, n);
            !ideal.gens().iter().any(|g| g.divides_outside(alpha, &inv))
        }
        MonomialModule::Presented { .. } => unreachable!("no fine monomial basis"),
    }
}

/// Čech sign: parity of the number of elements of `set` below `new`.
fn cech_sign(set: u32, new: u32) -> i64 {
    let below = set & (new - 1);
    if below.count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `dim H^i_B(M)_α` for all `i`, for modules with a fine monomial basis
/// (the Cox ring, monomial ideals, cyclic monomial quotients).
pub fn fine_cech_dims<F: Field>(
    x: &ToricVariety,
    m: &MonomialModule,
    alpha: &FineVector,
    one: &F,
) -> Result<Vec<usize>> {
    match m {
        MonomialModule::Free { twists } if twists.len() == 1 && twists[0].is_zero() => {}
        MonomialModule::Ideal { .. } | MonomialModule::Quotient { .. } => {}
        _ => {
            return Err(Error::UnsupportedModuleShape(
                "fine Čech slices need a monomial basis; use the hypercohomology path",
            ))
        }
    }
    let cones = x.irrelevant_complements.len();
    // admitted Čech index sets, grouped by cardinality
    let mut levels: Vec<Vec<u32>> = vec![vec![]; cones + 1];
    for t in 0u32..(1 << cones) {
        if piece_nonzero(x, m, alpha, inverted_vars(x, t)) {
            levels[t.count_ones() as usize].push(t);
        }
    }
    let mut ranks = vec![0usize; cones + 1];
    for p in 0..cones {
        let index: HashMap<u32, usize> = levels[p + 1]
            .iter()
            .enumerate()
            .map(|(i, &t)| (t, i))
            .collect();
        let mut rows: Vec<Vec<F>> = vec![];
        for &t in &levels[p] {
            let mut row = vec![F::zero(); levels[p + 1].len()];
            for k in 0..cones {
                let bit = 1u32 << k;
                if t & bit != 0 {
                    continue;
                }
                if let Some(&j) = index.get(&(t | bit)) {
                    let s = cech_sign(t, bit);
                    row[j] = if s > 0 { one.clone() } else { -one.clone() };
                }
            }
            rows.push(row);
        }
        ranks[p] = matrix::rank::<F>(rows);
    }
    let mut dims = vec![0usize; cones + 1];
    for i in 0..=cones {
        let above = ranks[i];
        let below = if i > 0 { ranks[i - 1] } else { 0 };
        dims[i] = levels[i].len() - above - below;
    }
    Ok(dims)
}

/// Fine cohomology of the Cox ring as a function of the sign pattern alone.
pub fn pattern_cohomology<F: Field>(
    x: &ToricVariety,
    negatives: &[usize],
    one: &F,
) -> Vec<usize> {
    let mut alpha = vec![0i64; x.num_vars()];
    for &i in negatives {
        alpha[i] = -1;
    }
    fine_cech_dims(x, &MonomialModule::cox_ring(x.picard_rank()), &FineVector(alpha), one)
        .expect("cox ring always supported")
}

// ---------------------------------------------------------------------------
// fiber enumeration

/// Integer points `α` with `deg α = b` and `lo_ρ <= α_ρ <= hi_ρ` (open sides
/// allowed). Errors when the slice is unbounded.
pub fn fiber_points(
    x: &ToricVariety,
    b: &PicVector,
    lo: &[Option<i64>],
    hi: &[Option<i64>],
) -> Result<Vec<FineVector>> {
    let n = x.num_vars();
    let d = x.fan.dim();
    let r = x.grading.fiber_point(b);
    let rows = &x.grading.kernel_basis; // α = r + rows · v

    // recession cone of the slice polyhedron must be trivial
    let mut ineqs = vec![];
    let mut eqs = vec![];
    for rho in 0..n {
        let row = PicVector(rows[rho].clone());
        match (lo[rho], hi[rho]) {
            (Some(_), Some(_)) => eqs.push(row),
            (Some(_), None) => ineqs.push(row),
            (None, Some(_)) => ineqs.push(-&row),
            (None, None) => {}
        }
    }
    if !constrained_directions_trivial(d, &ineqs, &eqs)? {
        return Err(Error::UnboundedActiveSlice);
    }

    // bounded: vertices of {v : normal·v >= c} give a bounding box
    let mut constraints: Vec<(Vec<i64>, i64)> = vec![];
    for rho in 0..n {
        if let Some(l) = lo[rho] {
            constraints.push((rows[rho].clone(), l - r.0[rho]));
        }
        if let Some(h) = hi[rho] {
            constraints.push((rows[rho].iter().map(|&x| -x).collect(), r.0[rho] - h));
        }
    }
    let feasible = |v: &[Rat]| {
        constraints.iter().all(|(normal, c)| {
            let lhs: Rat = normal
                .iter()
                .zip(v)
                .map(|(&a, x)| Rat::from_int(a) * x.clone())
                .fold(Rat::zero(), |acc, t| acc + t);
            lhs >= Rat::from_int(*c)
        })
    };
    let mut lo_box = vec![i64::MAX; d];
    let mut hi_box = vec![i64::MIN; d];
    let mut any_vertex = false;
    for subset in subsets(constraints.len(), d) {
        let a: Vec<Vec<Rat>> = subset
            .iter()
            .map(|&k| constraints[k].0.iter().map(|&x| Rat::from_int(x)).collect())
            .collect();
        if matrix::rank::<Rat>(a.clone()) < d {
            continue;
        }
        let rhs: Vec<Rat> = subset
            .iter()
            .map(|&k| Rat::from_int(constraints[k].1))
            .collect();
        let Some(v) = matrix::solve(&a, &rhs) else {
            continue;
        };
        if !feasible(&v) {
            continue;
        }
        any_vertex = true;
        for k in 0..d {
            let f = v[k].floor().to_integer();
            let c = v[k].ceil().to_integer();
            let f = i64::try_from(&f).expect("vertex exceeds i64");
            let c = i64::try_from(&c).expect("vertex exceeds i64");
            lo_box[k] = lo_box[k].min(f);
            hi_box[k] = hi_box[k].max(c);
        }
    }
    if !any_vertex {
        return Ok(vec![]);
    }

    let mut out = vec![];
    let mut v = vec![0i64; d];
    enumerate_box(&lo_box, &hi_box, 0, &mut v, &mut |v: &[i64]| {
        let alpha: Vec<i64> = (0..n)
            .map(|rho| r.0[rho] + rows[rho].iter().zip(v).map(|(a, b)| a * b).sum::<i64>())
            .collect();
        let ok = (0..n).all(|rho| {
            lo[rho].map_or(true, |l| alpha[rho] >= l) && hi[rho].map_or(true, |h| alpha[rho] <= h)
        });
        if ok {
            out.push(FineVector(alpha));
        }
    });
    out.sort();
    Ok(out)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = vec![];
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        if n - start < k - cur.len() {
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn enumerate_box(
    lower: &[i64],
    upper: &[i64],
    i: usize,
    point: &mut Vec<i64>,
    f: &mut impl FnMut(&[i64]),
) {
    if i == lower.len() {
        f(point);
        return;
    }
    for x in lower[i]..=upper[i] {
        point[i] = x;
        enumerate_box(lower, upper, i + 1, point, f);
    }
}

// ---------------------------------------------------------------------------
// exact Pic-degree aggregation

/// The Čech complex of a monomial-basis module at fine degree `α` depends on
/// `α` only through, per coordinate, which thresholds `{0} ∪ {g_ρ}` it has
/// reached. A cell is a product of threshold intervals; fine cohomology is
/// constant on each cell, so the Pic-degree dimension is a weighted count of
/// fiber points per cell.
#[derive(Clone, Debug)]
pub struct ExactTable {
    cells: Vec<Cell>,
    levels: usize,
}

#[derive(Clone, Debug)]
struct Cell {
    lo: Vec<Option<i64>>,
    hi: Vec<Option<i64>>,
    dims: Vec<usize>,
}

pub fn exact_table<F: Field>(
    x: &ToricVariety,
    m: &MonomialModule,
    one: &F,
) -> Result<ExactTable> {
    let n = x.num_vars();
    let gens: &[Monomial] = match m {
        MonomialModule::Free { twists } if twists.len() == 1 && twists[0].is_zero() => &[],
        MonomialModule::Ideal { ideal } | MonomialModule::Quotient { ideal } => ideal.gens(),
        _ => {
            return Err(Error::UnsupportedModuleShape(
                "exact aggregation needs a monomial basis",
            ))
        }
    };
    // per-coordinate threshold intervals, each with a representative value
    let mut axis: Vec<Vec<(Option<i64>, Option<i64>, i64)>> = vec![];
    for rho in 0..n {
        let mut ts: Vec<i64> = std::iter::once(0)
            .chain(gens.iter().map(|g| g.0 .0[rho]))
            .collect();
        ts.sort();
        ts.dedup();
        let mut intervals = vec![(None, Some(ts[0] - 1), ts[0] - 1)];
        for w in 0..ts.len() {
            let hi = if w + 1 < ts.len() { Some(ts[w + 1] - 1) } else { None };
            intervals.push((Some(ts[w]), hi, ts[w]));
        }
        axis.push(intervals);
    }
    let mut cells = vec![];
    let mut pick = vec![0usize; n];
    loop {
        let rep = FineVector((0..n).map(|rho| axis[rho][pick[rho]].2).collect());
        let dims = fine_cech_dims(x, m, &rep, one)?;
        if dims.iter().any(|&d| d > 0) {
            cells.push(Cell {
                lo: (0..n).map(|rho| axis[rho][pick[rho]].0).collect(),
                hi: (0..n).map(|rho| axis[rho][pick[rho]].1).collect(),
                dims,
            });
        }
        // odometer
        let mut k = 0;
        loop {
            if k == n {
                let levels = x.irrelevant_complements.len() + 1;
                return Ok(ExactTable { cells, levels });
            }
            pick[k] += 1;
            if pick[k] < axis[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

impl ExactTable {
    /// `dim H^i_B(M)_b`, exactly.
    pub fn query(&self, x: &ToricVariety, b: &PicVector, i: usize) -> Result<usize> {
        if i >= self.levels {
            return Ok(0);
        }
        let mut total = 0usize;
        for cell in &self.cells {
            if cell.dims[i] == 0 {
                continue;
            }
            let points = fiber_points(x, b, &cell.lo, &cell.hi)?;
            total += cell.dims[i] * points.len();
        }
        Ok(total)
    }
}

/// `dim H^i_B(M)_b` with its certification. Free modules reduce to shifted
/// copies of the Cox ring; ideals and quotients go through the threshold
/// cells (exact) or a fiber window.
pub fn pic_local_cohomology<F: Field>(
    x: &ToricVariety,
    m: &MonomialModule,
    b: &PicVector,
    i: usize,
    mode: Mode,
    one: &F,
) -> Result<(usize, Certification)> {
    match m {
        MonomialModule::Free { twists }
            if !(twists.len() == 1 && twists[0].is_zero()) =>
        {
            let s = MonomialModule::cox_ring(x.picard_rank());
            let mut total = 0;
            let mut cert = Certification::Exact;
            for a in twists {
                let (v, c) = pic_local_cohomology(x, &s, &(b + a), i, mode, one)?;
                total += v;
                if c == Certification::Window {
                    cert = Certification::Window;
                }
            }
            Ok((total, cert))
        }
        MonomialModule::Free { .. }
        | MonomialModule::Ideal { .. }
        | MonomialModule::Quotient { .. } => match mode {
            Mode::Exact => {
                let table = exact_table(x, m, one)?;
                Ok((table.query(x, b, i)?, Certification::Exact))
            }
            Mode::Window { cap } => {
                let lo = vec![Some(-cap); x.num_vars()];
                let hi = vec![Some(cap); x.num_vars()];
                let mut total = 0;
                for alpha in fiber_points(x, b, &lo, &hi)? {
                    total += fine_cech_dims(x, m, &alpha, one)?[i.min(self_levels(x))];
                }
                Ok((total, Certification::Window))
            }
        },
        MonomialModule::Presented { .. } => Err(Error::UnsupportedModuleShape(
            "use the hypercohomology path for presented modules",
        )),
    }
}

fn self_levels(x: &ToricVariety) -> usize {
    x.irrelevant_complements.len()
}

// ---------------------------------------------------------------------------
// hypercohomology of a fine-twisted free complex

/// Complex of fine-twisted free modules `F_p = ⊕_s S(-A_{p,s})`, quasi-
/// isomorphic to the module it resolves. `maps[p]` sends `F_{p+1}` to `F_p`;
/// entry `(row s, col t)` is a scalar multiple of a monomial.
#[derive(Clone, Debug)]
pub struct FineFreeComplex {
    pub levels: Vec<Vec<FineVector>>,
    pub maps: Vec<Vec<Vec<Term>>>,
}

/// Taylor complex of a monomial ideal. With `resolve_quotient` it resolves
/// `S/I` (level 0 is `S`); otherwise it resolves `I` (level 0 is the free
/// module on the generators).
pub fn taylor_complex(ideal: &MonomialIdeal, n: usize, resolve_quotient: bool) -> FineFreeComplex {
    let gens = ideal.gens();
    let s = gens.len();
    let lcm_of = |set: &[usize]| -> FineVector {
        let mut l = vec![0i64; n];
        for &g in set {
            for k in 0..n {
                l[k] = l[k].max(gens[g].0 .0[k]);
            }
        }
        FineVector(l)
    };
    // subsets of generators by size
    let mut by_size: Vec<Vec<Vec<usize>>> = vec![vec![]; s + 1];
    for mask in 0u32..(1 << s) {
        let set: Vec<usize> = (0..s).filter(|&g| mask & (1 << g) != 0).collect();
        by_size[set.len()].push(set);
    }
    for level in &mut by_size {
        level.sort();
    }
    let min_size = if resolve_quotient { 0 } else { 1 };
    let mut levels: Vec<Vec<FineVector>> = vec![];
    let mut maps: Vec<Vec<Vec<Term>>> = vec![];
    for size in min_size..=s {
        levels.push(by_size[size].iter().map(|set| lcm_of(set)).collect());
    }
    for (p, size) in (min_size..s).enumerate() {
        let src = &by_size[size + 1];
        let dst = &by_size[size];
        let dst_index: HashMap<&Vec<usize>, usize> =
            dst.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut mat = vec![vec![Term { coeff: Rat::zero(), exp: FineVector::zero(n) }; src.len()]; dst.len()];
        for (t, set) in src.iter().enumerate() {
            let lcm_src = lcm_of(set);
            for (pos, &drop) in set.iter().enumerate() {
                let sub: Vec<usize> = set.iter().copied().filter(|&g| g != drop).collect();
                let srow = dst_index[&sub];
                let lcm_dst = lcm_of(&sub);
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                mat[srow][t] = Term {
                    coeff: Rat::from_int(sign),
                    exp: &lcm_src - &lcm_dst,
                };
            }
        }
        maps.push(mat);
        let _ = p;
    }
    FineFreeComplex { levels, maps }
}

/// Fine lift of a presented module's two-term presentation, together with
/// the Pic shift `δ` such that querying the lifted complex at `b + δ` gives
/// the module's cohomology at `b`. Fails when the presentation is not
/// `Z^n`-gradable; restricted to presentations that are injective (a single
/// nonzero column), since hypercohomology needs a genuine resolution.
pub fn presented_fine_complex(
    x: &ToricVariety,
    m: &MonomialModule,
) -> Result<(FineFreeComplex, PicVector)> {
    let MonomialModule::Presented { twists, relations, .. } = m else {
        return Err(Error::UnsupportedModuleShape("expected a presented module"));
    };
    let n = x.num_vars();
    let nonzero_cols: Vec<&Vec<Term>> = relations
        .iter()
        .filter(|col| col.iter().any(|t| !t.coeff.is_zero()))
        .collect();
    if nonzero_cols.is_empty() {
        // free module: trivial complex
        let a: Vec<FineVector> = twists
            .iter()
            .map(|tw| x.grading.fiber_point(&-tw))
            .collect();
        // δ chosen so that deg A_j = δ - a_j for all j; here deg A_j = -a_j
        return Ok((
            FineFreeComplex { levels: vec![a], maps: vec![] },
            PicVector::zero(x.picard_rank()),
        ));
    }
    if nonzero_cols.len() > 1 {
        return Err(Error::UnsupportedModuleShape(
            "multi-column presentations need a computed resolution",
        ));
    }
    let col = nonzero_cols[0];
    // fine twists: pick C = 0 for the relation source, A_j = -e_j for the
    // generators hit by the column; unused generators get a fiber lift
    let mut a_twists: Vec<Option<FineVector>> = vec![None; twists.len()];
    for (j, t) in col.iter().enumerate() {
        if !t.coeff.is_zero() {
            a_twists[j] = Some(-&t.exp);
        }
    }
    // uniform Pic shift δ = deg A_j + a_j, the same for every lifted j by
    // column homogeneity
    let (j0, _) = col
        .iter()
        .enumerate()
        .find(|(_, t)| !t.coeff.is_zero())
        .expect("nonzero column");
    let delta = &x
        .grading
        .degree(a_twists[j0].as_ref().expect("lifted"))
        + &twists[j0];
    for (j, slot) in a_twists.iter_mut().enumerate() {
        if slot.is_none() {
            *slot = Some(x.grading.fiber_point(&(&delta - &twists[j])));
        }
    }
    let level0: Vec<FineVector> = a_twists.into_iter().map(|s| s.expect("filled")).collect();
    // sanity: every lifted twist coarsens to δ - a_j
    for (j, a) in level0.iter().enumerate() {
        debug_assert_eq!(x.grading.degree(a), &delta - &twists[j]);
    }
    let level1 = vec![FineVector::zero(n)];
    let map: Vec<Vec<Term>> = col.iter().map(|t| vec![t.clone()]).collect();
    Ok((
        FineFreeComplex { levels: vec![level0, level1], maps: vec![map] },
        delta,
    ))
}

/// `dim H^i_B` of the module resolved by the complex, at Pic degree `b`,
/// summed over fiber points in the box `[-cap, cap]^n`; entry `i` of the
/// result. Window-certified.
pub fn hypercohomology_dims<F: Field>(
    x: &ToricVariety,
    cx: &FineFreeComplex,
    b: &PicVector,
    cap: i64,
    one: &F,
) -> Result<Vec<usize>> {
    let n = x.num_vars();
    let cones = self_levels(x);
    let lo = vec![Some(-cap); n];
    let hi = vec![Some(cap); n];
    let mut totals = vec![0usize; cones + 1];
    let mut memo: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    for alpha in fiber_points(x, b, &lo, &hi)? {
        // the slice complex depends on α only through the sign patterns of
        // α - A over all summands
        let key: Vec<u32> = cx
            .levels
            .iter()
            .flat_map(|level| level.iter().map(|a| neg_mask(&(&alpha - a))))
            .collect();
        let dims = match memo.get(&key) {
            Some(d) => d.clone(),
            None => {
                let d = slice_hypercohomology(x, cx, &alpha, one);
                memo.insert(key, d.clone());
                d
            }
        };
        for i in 0..=cones {
            totals[i] += dims.get(i).copied().unwrap_or(0);
        }
    }
    Ok(totals)
}

/// Cohomology of the total complex `Tot^m = ⊕_p Čech^{m+p}(F_p)` at one
/// fine degree; entry `m` for `m >= 0`.
fn slice_hypercohomology<F: Field>(
    x: &ToricVariety,
    cx: &FineFreeComplex,
    alpha: &FineVector,
    one: &F,
) -> Vec<usize> {
    let cones = self_levels(x);
    let depth = cx.levels.len();
    // basis: (p, summand, cone-set) when the localized piece survives
    type Item = (usize, usize, u32);
    // grade by total degree m = |T| - p, offset by depth to stay nonnegative
    let span = cones + depth + 1;
    let mut graded: Vec<Vec<Item>> = vec![vec![]; span];
    for (p, level) in cx.levels.iter().enumerate() {
        for (s, a) in level.iter().enumerate() {
            let shifted = alpha - a;
            let nm = neg_mask(&shifted);
            for t in 0u32..(1 << cones) {
                if nm & !inverted_vars(x, t) == 0 {
                    let m = t.count_ones() as usize + depth - p;
                    graded[m].push((p, s, t));
                }
            }
        }
    }
    let mut ranks = vec![0usize; span];
    for m in 0..span - 1 {
        let index: HashMap<Item, usize> = graded[m + 1]
            .iter()
            .enumerate()
            .map(|(i, &it)| (it, i))
            .collect();
        let mut rows: Vec<Vec<F>> = vec![];
        for &(p, s, t) in &graded[m] {
            let mut row = vec![F::zero(); graded[m + 1].len()];
            // Čech differential: grow the cone set
            for k in 0..cones {
                let bit = 1u32 << k;
                if t & bit != 0 {
                    continue;
                }
                if let Some(&j) = index.get(&(p, s, t | bit)) {
                    let sg = cech_sign(t, bit);
                    row[j] = if sg > 0 { one.clone() } else { -one.clone() };
                }
            }
            // resolution differential, with the sign making D square to zero
            if p > 0 {
                let mat = &cx.maps[p - 1];
                for (srow, terms) in mat.iter().enumerate() {
                    let term = &terms[s];
                    if term.coeff.is_zero() {
                        continue;
                    }
                    if let Some(&j) = index.get(&(p - 1, srow, t)) {
                        let sgn = if t.count_ones() % 2 == 0 { 1 } else { -1 };
                        let c = scalar_from_rat(&(&term.coeff * Rat::from_int(sgn)), one);
                        row[j] = row[j].clone() + c;
                    }
                }
            }
            rows.push(row);
        }
        ranks[m] = matrix::rank::<F>(rows);
    }
    // report H^i for i >= 0, i.e. total index depth + i
    let mut out = vec![0usize; cones + 1];
    for i in 0..=cones {
        let m = depth + i;
        if m >= span {
            break;
        }
        let above = ranks[m];
        let below = if m > 0 { ranks[m - 1] } else { 0 };
        out[i] = graded[m].len() - above - below;
    }
    out
}

/// Independent oracle: `dim H^i_B(M)_b` for all `i`, via the Taylor complex
/// (ideals, quotients) or the lifted presentation. Window-certified on the
/// fine box `[-cap, cap]^n`.
pub fn taylor_hypercohomology<F: Field>(
    x: &ToricVariety,
    m: &MonomialModule,
    b: &PicVector,
    cap: i64,
    one: &F,
) -> Result<Vec<usize>> {
    let n = x.num_vars();
    match m {
        MonomialModule::Ideal { ideal } => {
            if ideal.is_zero() {
                return Ok(vec![0; self_levels(x) + 1]);
            }
            let cx = taylor_complex(ideal, n, false);
            hypercohomology_dims(x, &cx, b, cap, one)
        }
        MonomialModule::Quotient { ideal } => {
            let cx = taylor_complex(ideal, n, true);
            hypercohomology_dims(x, &cx, b, cap, one)
        }
        MonomialModule::Free { .. } | MonomialModule::Presented { .. } => {
            let (cx, delta) = match m {
                MonomialModule::Presented { .. } => presented_fine_complex(x, m)?,
                MonomialModule::Free { twists } => {
                    // ⊕ S(a): fine lifts of the twists
                    let a: Vec<FineVector> =
                        twists.iter().map(|tw| x.grading.fiber_point(&-tw)).collect();
                    (
                        FineFreeComplex { levels: vec![a], maps: vec![] },
                        PicVector::zero(x.picard_rank()),
                    )
                }
                _ => unreachable!("handled above"),
            };
            hypercohomology_dims(x, &cx, &(b + &delta), cap, one)
        }
    }
}

/// Which computation path a query should take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OraclePath {
    /// threshold-cell Čech aggregation (exact); presented modules fall
    /// through to the resolution path
    Pattern,
    /// Čech of a free resolution over a fine window (independent oracle)
    Taylor,
}

/// Memoized `b -> (dim H^i_B(M)_b)_i` queries against a fixed module.
pub struct DimsOracle<F: Field> {
    kind: OracleKind,
    one: F,
    certification: Certification,
    memo: HashMap<PicVector, Vec<usize>>,
}

enum OracleKind {
    Exact {
        table: ExactTable,
        /// Pic twists `a` of the summands `S(a)`; `None` queries the table
        /// at `b` directly
        twists: Option<Vec<PicVector>>,
    },
    Hyper {
        cx: FineFreeComplex,
        delta: PicVector,
        cap: i64,
    },
}

/// Fine-box half-width that safely covers the cohomology contributions for
/// queries in the given Pic window: the fiber representatives of the window
/// corners plus the spread of the resolution twists, with slack. Heuristic —
/// results through it stay window-certified.
pub fn suggested_cap(
    x: &ToricVariety,
    m: &MonomialModule,
    lower: &PicVector,
    upper: &PicVector,
) -> i64 {
    let (cx, delta) = resolve(x, m).unwrap_or_else(|_| {
        (
            FineFreeComplex {
                levels: vec![vec![FineVector::zero(x.num_vars())]],
                maps: vec![],
            },
            PicVector::zero(x.picard_rank()),
        )
    });
    let twist_spread = cx
        .levels
        .iter()
        .flatten()
        .flat_map(|a| a.0.iter().map(|v| v.abs()))
        .max()
        .unwrap_or(0);
    let rho = lower.len();
    let mut corner_spread = 0i64;
    for mask in 0u32..(1 << rho) {
        let corner = PicVector(
            (0..rho)
                .map(|k| if mask & (1 << k) != 0 { upper.0[k] } else { lower.0[k] })
                .collect(),
        );
        let r = x.grading.fiber_point(&(&corner + &delta));
        corner_spread = corner_spread.max(r.0.iter().map(|v| v.abs()).max().unwrap_or(0));
    }
    4 + 2 * twist_spread + corner_spread
}

/// Free resolution with fine twists for any supported module shape.
fn resolve(x: &ToricVariety, m: &MonomialModule) -> Result<(FineFreeComplex, PicVector)> {
    let n = x.num_vars();
    let rho = x.picard_rank();
    match m {
        MonomialModule::Ideal { ideal } => {
            if ideal.is_zero() {
                return Err(Error::ZeroSheaf);
            }
            Ok((taylor_complex(ideal, n, false), PicVector::zero(rho)))
        }
        MonomialModule::Quotient { ideal } => {
            Ok((taylor_complex(ideal, n, true), PicVector::zero(rho)))
        }
        MonomialModule::Free { twists } => {
            let a: Vec<FineVector> =
                twists.iter().map(|tw| x.grading.fiber_point(&-tw)).collect();
            Ok((
                FineFreeComplex { levels: vec![a], maps: vec![] },
                PicVector::zero(rho),
            ))
        }
        MonomialModule::Presented { .. } => presented_fine_complex(x, m),
    }
}

impl<F: Field> DimsOracle<F> {
    pub fn new(
        x: &ToricVariety,
        m: &MonomialModule,
        path: OraclePath,
        cap: i64,
        one: F,
    ) -> Result<DimsOracle<F>> {
        let kind = match (path, m) {
            (OraclePath::Pattern, MonomialModule::Free { twists }) => OracleKind::Exact {
                table: exact_table(x, &MonomialModule::cox_ring(x.picard_rank()), &one)?,
                twists: Some(twists.clone()),
            },
            (
                OraclePath::Pattern,
                MonomialModule::Ideal { .. } | MonomialModule::Quotient { .. },
            ) => OracleKind::Exact {
                table: exact_table(x, m, &one)?,
                twists: None,
            },
            _ => {
                let (cx, delta) = resolve(x, m)?;
                OracleKind::Hyper { cx, delta, cap }
            }
        };
        let certification = match kind {
            OracleKind::Exact { .. } => Certification::Exact,
            OracleKind::Hyper { .. } => Certification::Window,
        };
        Ok(DimsOracle {
            kind,
            one,
            certification,
            memo: HashMap::new(),
        })
    }

    pub fn certification(&self) -> Certification {
        self.certification
    }

    /// All cohomology dimensions at `b`, indexed by `i`.
    pub fn dims(&mut self, x: &ToricVariety, b: &PicVector) -> Result<Vec<usize>> {
        if let Some(d) = self.memo.get(b) {
            return Ok(d.clone());
        }
        let levels = self_levels(x) + 1;
        let d = match &self.kind {
            OracleKind::Exact { table, twists } => {
                let mut out = vec![0usize; levels];
                match twists {
                    None => {
                        for (i, slot) in out.iter_mut().enumerate() {
                            *slot = table.query(x, b, i)?;
                        }
                    }
                    Some(tw) => {
                        for a in tw {
                            let shifted = b + a;
                            for (i, slot) in out.iter_mut().enumerate() {
                                *slot += table.query(x, &shifted, i)?;
                            }
                        }
                    }
                }
                out
            }
            OracleKind::Hyper { cx, delta, cap } => {
                hypercohomology_dims(x, cx, &(b + delta), *cap, &self.one)?
            }
        };
        self.memo.insert(b.clone(), d.clone());
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::window_points;
    use crate::scalar::Fp;
    use crate::toric::{build_variety, hirzebruch_fan};

    fn h2() -> ToricVariety {
        build_variety(hirzebruch_fan(2)).unwrap()
    }

    fn one() -> Rat {
        Rat::from_int(1)
    }

    fn pv(v: &[i64]) -> PicVector {
        PicVector(v.to_vec())
    }

    fn fv(v: &[i64]) -> FineVector {
        FineVector(v.to_vec())
    }

    fn s() -> MonomialModule {
        MonomialModule::cox_ring(2)
    }

    #[test]
    fn pattern_fixtures() {
        let x = h2();
        let d = pattern_cohomology(&x, &[0, 2], &one());
        assert_eq!(d[2], 1);
        assert!(d.iter().enumerate().all(|(i, &v)| i == 2 || v == 0));

        assert!(pattern_cohomology(&x, &[0], &one()).iter().all(|&v| v == 0));
        assert!(pattern_cohomology(&x, &[], &one()).iter().all(|&v| v == 0));
        // all four rays negative: the whole-space pattern, top cohomology
        let d = pattern_cohomology(&x, &[0, 1, 2, 3], &one());
        assert_eq!(d[3], 1);
    }

    #[test]
    fn fine_slices_of_quotient() {
        let x = h2();
        let q = MonomialModule::Quotient {
            ideal: MonomialIdeal::new(vec![
                Monomial(fv(&[0, 0, 1, 0])),
                Monomial(fv(&[0, 0, 0, 1])),
            ]),
        };
        let d = fine_cech_dims(&x, &q, &fv(&[-1, 0, 0, 0]), &one()).unwrap();
        assert_eq!(d[1], 1);
        assert!(d.iter().enumerate().all(|(i, &v)| i == 1 || v == 0));

        let d0 = fine_cech_dims(&x, &s(), &fv(&[0, 0, 0, 0]), &one()).unwrap();
        assert!(d0.iter().all(|&v| v == 0));
    }

    #[test]
    fn exact_cox_ring_values() {
        let x = h2();
        let table = exact_table(&x, &s(), &one()).unwrap();
        assert_eq!(table.query(&x, &pv(&[-2, 0]), 2).unwrap(), 1);
        assert_eq!(table.query(&x, &pv(&[-3, 0]), 2).unwrap(), 2);
        // canonical degree: top cohomology is one-dimensional
        assert_eq!(table.query(&x, &pv(&[0, -2]), 3).unwrap(), 1);
        // nef degrees have no higher cohomology
        for b in window_points(&pv(&[0, 0]), &pv(&[3, 3])) {
            for i in 1..=4 {
                assert_eq!(table.query(&x, &b, i).unwrap(), 0, "b={b:?} i={i}");
            }
        }
    }

    #[test]
    fn shift_equivariance() {
        let x = h2();
        let free = MonomialModule::Free { twists: vec![pv(&[-1, -1])] };
        for b in window_points(&pv(&[-3, -3]), &pv(&[1, 1])) {
            for i in 0..=4 {
                let (lhs, _) =
                    pic_local_cohomology(&x, &free, &b, i, Mode::Exact, &one()).unwrap();
                let (rhs, _) = pic_local_cohomology(
                    &x,
                    &s(),
                    &(&b - &pv(&[1, 1])),
                    i,
                    Mode::Exact,
                    &one(),
                )
                .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn window_matches_exact_for_free() {
        let x = h2();
        for b in window_points(&pv(&[-4, -3]), &pv(&[2, 2])) {
            for i in 0..=4 {
                let (e, ce) = pic_local_cohomology(&x, &s(), &b, i, Mode::Exact, &one()).unwrap();
                let lo = vec![Some(-12); 4];
                let hi = vec![Some(12); 4];
                let w: usize = fiber_points(&x, &b, &lo, &hi)
                    .unwrap()
                    .iter()
                    .map(|a| fine_cech_dims(&x, &s(), a, &one()).unwrap()[i])
                    .sum();
                assert_eq!(e, w, "b={b:?} i={i}");
                assert_eq!(ce, Certification::Exact);
            }
        }
    }

    #[test]
    fn quotient_not_fg_cohomology() {
        let x = h2();
        let q = MonomialModule::Quotient {
            ideal: MonomialIdeal::new(vec![
                Monomial(fv(&[0, 0, 1, 0])),
                Monomial(fv(&[0, 0, 0, 1])),
            ]),
        };
        let table = exact_table(&x, &q, &one()).unwrap();
        // H^1 detects the missing degree just outside Eff
        assert_eq!(table.query(&x, &pv(&[-1, 0]), 1).unwrap(), 1);
        // taylor oracle agrees (Koszul resolution of the complete intersection)
        let t = taylor_hypercohomology(&x, &q, &pv(&[-1, 0]), 12, &one()).unwrap();
        assert_eq!(t[1], 1);
    }

    #[test]
    fn taylor_agrees_with_pattern_path() {
        let x = h2();
        let ideal = MonomialIdeal::new(vec![
            Monomial(fv(&[1, 0, 0, 1])),
            Monomial(fv(&[1, 0, 1, 0])),
            Monomial(fv(&[0, 1, 1, 0])),
        ]);
        for m in [
            MonomialModule::Ideal { ideal: ideal.clone() },
            MonomialModule::Quotient { ideal: ideal.clone() },
        ] {
            for b in window_points(&pv(&[-2, -2]), &pv(&[2, 2])) {
                let t = taylor_hypercohomology(&x, &m, &b, 10, &one()).unwrap();
                for i in 0..=4 {
                    let (e, _) =
                        pic_local_cohomology(&x, &m, &b, i, Mode::Exact, &one()).unwrap();
                    assert_eq!(e, t[i], "b={b:?} i={i}");
                }
            }
        }
    }

    #[test]
    fn prime_field_path() {
        let x = h2();
        let one_p = Fp::new(1, 7);
        let d = pattern_cohomology(&x, &[0, 2], &one_p);
        assert_eq!(d[2], 1);
        let table = exact_table(&x, &s(), &one_p).unwrap();
        assert_eq!(table.query(&x, &pv(&[-3, 0]), 2).unwrap(), 2);
    }

    #[test]
    fn h0_of_torsion_module() {
        let x = h2();
        // S/B has pure B-torsion: H^0 is everything, computed fiberwise
        let b_ideal = MonomialIdeal::new(
            x.irrelevant_generators().into_iter().map(Monomial).collect(),
        );
        let q = MonomialModule::Quotient { ideal: b_ideal };
        let table = exact_table(&x, &q, &one()).unwrap();
        let hf = crate::ring::hilbert_function(&x, &q, &pv(&[0, 0]));
        assert_eq!(table.query(&x, &pv(&[0, 0]), 0).unwrap(), hf);
    }
}
