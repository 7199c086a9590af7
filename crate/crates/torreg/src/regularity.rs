//! Multigraded regularity: d-regularity verdicts, regularity regions and
//! their minimal elements, chamber-based non-regularity certificates, and
//! containment checks against the effective/nef outer bounds.
//!
//! A degree `d` is regular for `M` when `H^i_B(M)` vanishes on prescribed
//! nef-translated regions. Those regions are unbounded, so verdicts of
//! "regular" are certified only within a finite window; "not regular"
//! verdicts carry a replayable witness and are definitive.

use serde::Serialize;

use crate::cohomology::{Certification, DimsOracle};
use crate::error::{Error, Result};
use crate::lattice::{
    maximal_lower_bounds, minimal_elements, ChamberComplex, Cone, PicVector,
};
use crate::ring::{
    extra_monomials_witness, window_points, Monomial, MonomialModule, DEFAULT_EXTRA_MONOMIAL_CAP,
};
use crate::scalar::Field;
use crate::toric::ToricVariety;

/// Finite box of Pic degrees over which verdicts are checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lower: PicVector,
    pub upper: PicVector,
}

impl Window {
    pub fn new(lower: PicVector, upper: PicVector) -> Result<Window> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.0.iter().zip(&upper.0).any(|(l, u)| l > u) {
            return Err(Error::InvalidInput("window lower bound exceeds upper".into()));
        }
        Ok(Window { lower, upper })
    }

    /// Bounding box of the generator degrees, padded by twice the sum of
    /// the nef Hilbert-basis vectors.
    pub fn default_for(x: &ToricVariety, m: &MonomialModule) -> Window {
        let degs = m.generator_degrees(x);
        let rho = x.picard_rank();
        let mut lower = vec![i64::MAX; rho];
        let mut upper = vec![i64::MIN; rho];
        for d in &degs {
            for k in 0..rho {
                lower[k] = lower[k].min(d.0[k]);
                upper[k] = upper[k].max(d.0[k]);
            }
        }
        let mut pad = PicVector::zero(rho);
        for c in &x.nef_gens {
            pad = &pad + c;
        }
        let pad = pad.scaled(2);
        Window {
            lower: PicVector((0..rho).map(|k| lower[k] - pad.0[k]).collect()),
            upper: PicVector((0..rho).map(|k| upper[k] + pad.0[k]).collect()),
        }
    }

    pub fn contains(&self, p: &PicVector) -> bool {
        p.0.iter()
            .zip(&self.lower.0)
            .zip(&self.upper.0)
            .all(|((v, l), u)| l <= v && v <= u)
    }

    pub fn points(&self) -> Vec<PicVector> {
        window_points(&self.lower, &self.upper)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegularityVerdict {
    /// no violation found inside the window
    Regular,
    /// `H^i_B(M)_b` is nonzero at a degree required to vanish
    NotRegular { i: usize, b: PicVector, dim: usize },
}

/// Checks the vanishing conditions for `d`: `H^i` for `i > 0` on the union
/// over `|λ| = i-1` of `d - λ·C + Nef`, and `H^0` on the union over nef
/// generators `c_j` of `d + c_j + Nef`, all clipped to the window.
pub fn is_d_regular<F: Field>(
    x: &ToricVariety,
    oracle: &mut DimsOracle<F>,
    d: &PicVector,
    window: &Window,
) -> Result<RegularityVerdict> {
    let candidates = window.points();
    let i_max = x.num_vars().min(x.irrelevant_complements.len());
    for i in 0..=i_max {
        let shifts: Vec<PicVector> = if i == 0 {
            x.nef_gens.iter().map(|c| d + c).collect()
        } else {
            lambda_shifts(&x.nef_gens, i - 1)
                .into_iter()
                .map(|lc| d - &lc)
                .collect()
        };
        for b in &candidates {
            if !shifts.iter().any(|s| x.nef.contains(&(b - s))) {
                continue;
            }
            let dim = oracle.dims(x, b)?.get(i).copied().unwrap_or(0);
            if dim > 0 {
                return Ok(RegularityVerdict::NotRegular {
                    i,
                    b: b.clone(),
                    dim,
                });
            }
        }
    }
    Ok(RegularityVerdict::Regular)
}

/// All `λ·C` for `λ ∈ N^r` with `|λ| = total`.
pub(crate) fn lambda_shifts(gens: &[PicVector], total: usize) -> Vec<PicVector> {
    let rho = gens.first().map_or(0, |c| c.len());
    let mut out = vec![];
    fn rec(
        gens: &[PicVector],
        k: usize,
        left: usize,
        acc: PicVector,
        out: &mut Vec<PicVector>,
    ) {
        if k == gens.len() {
            if left == 0 {
                out.push(acc);
            }
            return;
        }
        for take in 0..=left {
            rec(gens, k + 1, left - take, &acc + &gens[k].scaled(take as i64), out);
        }
    }
    rec(gens, 0, total, PicVector::zero(rho), &mut out);
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug)]
pub struct RegularityRegion {
    pub window: Window,
    pub points: Vec<PicVector>,
    pub minima: Vec<PicVector>,
    pub certification: Certification,
}

pub fn reg_region<F: Field>(
    x: &ToricVariety,
    oracle: &mut DimsOracle<F>,
    window: &Window,
) -> Result<RegularityRegion> {
    reg_region_within(x, oracle, window, window)
}

/// Like [`reg_region`], but scans cohomology witnesses over a separate
/// (typically larger) `check` window while reporting degrees from
/// `window`. Needed when the reporting window does not reach the negative
/// degrees where nonvanishing cohomology lives.
pub fn reg_region_within<F: Field>(
    x: &ToricVariety,
    oracle: &mut DimsOracle<F>,
    window: &Window,
    check: &Window,
) -> Result<RegularityRegion> {
    let mut points = vec![];
    for d in window.points() {
        if is_d_regular(x, oracle, &d, check)? == RegularityVerdict::Regular {
            points.push(d);
        }
    }
    let minima = minimal_elements(&points, &x.nef);
    Ok(RegularityRegion {
        window: window.clone(),
        points,
        minima,
        certification: oracle.certification(),
    })
}

/// Chamber-based proof that `d` is not regular for a torsion-free module:
/// all differences `d - deg f_i` land in one chamber `Γ ≠ Nef` outside the
/// nef cone, and witness monomials replay the membership failure. Requires
/// no cohomology computation.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub d: PicVector,
    pub chamber_index: usize,
    pub chamber: Cone,
    /// wall between the chamber and the nef chamber, when they are adjacent
    pub wall: Option<Cone>,
    pub differences: Vec<PicVector>,
    pub witnesses: Vec<Monomial>,
}

pub fn nonregularity_certificate(
    x: &ToricVariety,
    m: &MonomialModule,
    d: &PicVector,
    complex: &ChamberComplex,
) -> Result<Certificate> {
    if !m.torsion_free_assertion() {
        return Err(Error::NotTorsionFree);
    }
    if let MonomialModule::Ideal { ideal } = m {
        if ideal.is_zero() {
            return Err(Error::ZeroSheaf);
        }
    }
    let differences: Vec<PicVector> = m
        .generator_degrees(x)
        .iter()
        .map(|f| d - f)
        .collect();
    if differences.iter().any(|a| x.nef.contains(a)) {
        return Err(Error::CertificateInapplicable);
    }
    let nef_index = complex.nef_index();
    let chamber_index = complex
        .chambers()
        .iter()
        .enumerate()
        .filter(|&(k, _)| Some(k) != nef_index)
        .find(|(_, gamma)| differences.iter().all(|a| gamma.contains(a)))
        .map(|(k, _)| k)
        .ok_or(Error::CertificateInapplicable)?;
    let chamber = complex.chambers()[chamber_index].clone();
    let witnesses =
        extra_monomials_witness(x, &chamber, &differences, DEFAULT_EXTRA_MONOMIAL_CAP)?;
    let wall = nef_index.and_then(|nk| {
        complex
            .walls()
            .iter()
            .find(|(_, (a, b))| {
                (*a == nk && *b == chamber_index) || (*a == chamber_index && *b == nk)
            })
            .map(|(w, _)| w.clone())
    });
    Ok(Certificate {
        d: d.clone(),
        chamber_index,
        chamber,
        wall,
        differences,
        witnesses,
    })
}

/// Outcome of replaying the outer bounds against a computed region.
#[derive(Clone, Debug)]
pub struct ContainmentReport {
    /// tightest effective-cone lower bound of the generator degrees
    pub eff_translate: Option<PicVector>,
    pub eff_violations: Vec<PicVector>,
    /// tightest nef-cone lower bound of the generator degrees
    pub nef_translate: Option<PicVector>,
    pub nef_violations: Vec<PicVector>,
    /// the nef containment is only asserted by theory for torsion-free M
    pub torsion_free: bool,
}

impl ContainmentReport {
    pub fn eff_ok(&self) -> bool {
        self.eff_violations.is_empty()
    }

    pub fn nef_ok(&self) -> bool {
        self.nef_violations.is_empty()
    }
}

pub fn check_containment_bounds(
    x: &ToricVariety,
    m: &MonomialModule,
    region: &RegularityRegion,
) -> Result<ContainmentReport> {
    let degs = m.generator_degrees(x);
    let eff_translate = tightest_lower_bound(&degs, &x.eff, &x.eff.hilbert_basis()?);
    let nef_translate = tightest_lower_bound(&degs, &x.nef, &x.nef_gens);
    let violations = |t: &Option<PicVector>, cone: &Cone| -> Vec<PicVector> {
        match t {
            None => region.points.clone(),
            Some(t) => region
                .points
                .iter()
                .filter(|p| !cone.contains(&(*p - t)))
                .cloned()
                .collect(),
        }
    };
    Ok(ContainmentReport {
        eff_violations: violations(&eff_translate, &x.eff),
        eff_translate,
        nef_violations: violations(&nef_translate, &x.nef),
        nef_translate,
        torsion_free: m.torsion_free_assertion(),
    })
}

/// Lex-greatest maximal common lower bound of `points` in the cone order.
fn tightest_lower_bound(
    points: &[PicVector],
    cone: &Cone,
    basis: &[PicVector],
) -> Option<PicVector> {
    maximal_lower_bounds(points, cone, basis).pop()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::OraclePath;
    use crate::lattice::chamber_complex;
    use crate::ring::MonomialIdeal;
    use crate::scalar::Rat;
    use crate::toric::{build_variety, hirzebruch_fan};
    use crate::lattice::FineVector;

    fn h(t: i64) -> ToricVariety {
        build_variety(hirzebruch_fan(t)).unwrap()
    }

    fn pv(v: &[i64]) -> PicVector {
        PicVector(v.to_vec())
    }

    fn oracle(x: &ToricVariety, m: &MonomialModule) -> DimsOracle<Rat> {
        DimsOracle::new(x, m, OraclePath::Pattern, 0, Rat::from_int(1)).unwrap()
    }

    #[test]
    fn cox_ring_verdicts() {
        let x = h(2);
        let s = MonomialModule::cox_ring(2);
        let mut o = oracle(&x, &s);
        let w = Window::new(pv(&[-4, -4]), pv(&[4, 4])).unwrap();
        assert_eq!(
            is_d_regular(&x, &mut o, &pv(&[0, 0]), &w).unwrap(),
            RegularityVerdict::NotRegular {
                i: 3,
                b: pv(&[0, -2]),
                dim: 1
            }
        );
        assert_eq!(
            is_d_regular(&x, &mut o, &pv(&[1, 0]), &w).unwrap(),
            RegularityVerdict::Regular
        );
    }

    #[test]
    fn cox_ring_region_h2() {
        let x = h(2);
        let s = MonomialModule::cox_ring(2);
        let mut o = oracle(&x, &s);
        let w = Window::new(pv(&[-3, -3]), pv(&[3, 3])).unwrap();
        let region = reg_region(&x, &mut o, &w).unwrap();
        let expected: Vec<PicVector> = w
            .points()
            .into_iter()
            .filter(|p| x.nef.contains(p) && !p.is_zero())
            .collect();
        assert_eq!(region.points, expected);
        assert_eq!(region.minima, vec![pv(&[0, 1]), pv(&[1, 0])]);
    }

    #[test]
    fn cox_ring_region_equals_nef_on_h1() {
        let x = h(1);
        let s = MonomialModule::cox_ring(2);
        let mut o = oracle(&x, &s);
        let w = Window::new(pv(&[-2, -2]), pv(&[2, 2])).unwrap();
        let region = reg_region(&x, &mut o, &w).unwrap();
        let expected: Vec<PicVector> = w
            .points()
            .into_iter()
            .filter(|p| x.nef.contains(p))
            .collect();
        assert_eq!(region.points, expected);
    }

    #[test]
    fn degs_dont_bound_ideal_is_11_regular() {
        let x = h(2);
        let i = MonomialModule::Ideal {
            ideal: MonomialIdeal::new(vec![
                Monomial(FineVector(vec![1, 0, 0, 1])),
                Monomial(FineVector(vec![1, 0, 1, 0])),
                Monomial(FineVector(vec![0, 1, 1, 0])),
            ]),
        };
        let mut o = oracle(&x, &i);
        let w = Window::new(pv(&[-4, -4]), pv(&[4, 4])).unwrap();
        assert_eq!(
            is_d_regular(&x, &mut o, &pv(&[1, 1]), &w).unwrap(),
            RegularityVerdict::Regular
        );
        // the generator degree (2,0) is not nef-below (1,1)
        assert!(!x.nef.contains(&(&pv(&[1, 1]) - &pv(&[2, 0]))));
    }

    #[test]
    fn torsion_region_is_effective_cone() {
        let x = h(2);
        let m = MonomialModule::Quotient {
            ideal: MonomialIdeal::new(vec![
                Monomial(FineVector(vec![0, 0, 1, 0])),
                Monomial(FineVector(vec![0, 0, 0, 1])),
            ]),
        };
        let mut o = oracle(&x, &m);
        let w = Window::new(pv(&[-7, -1]), pv(&[7, 7])).unwrap();
        let region = reg_region(&x, &mut o, &w).unwrap();
        let expected: Vec<PicVector> = w
            .points()
            .into_iter()
            .filter(|p| x.eff.contains(p))
            .collect();
        assert_eq!(region.points, expected);
        assert!(region.minima.len() >= 4);

        let report = check_containment_bounds(&x, &m, &region).unwrap();
        assert!(report.eff_ok());
        assert_eq!(report.eff_translate, Some(pv(&[0, 0])));
        assert!(!report.nef_ok());
        assert!(!report.torsion_free);
    }

    #[test]
    fn certificate_for_cox_ring() {
        let x = h(2);
        let complex = chamber_complex(&x.var_degrees(), Some(&x.nef)).unwrap();
        let s = MonomialModule::cox_ring(2);
        let cert = nonregularity_certificate(&x, &s, &pv(&[-1, 1]), &complex).unwrap();
        assert_eq!(
            cert.chamber,
            Cone::from_rays(2, &[pv(&[0, 1]), pv(&[-2, 1])]).unwrap()
        );
        assert_eq!(cert.witnesses, vec![Monomial(FineVector(vec![0, 0, 0, 1]))]);
        assert!(cert.wall.is_some());

        // inapplicable inside the nef cone
        assert!(matches!(
            nonregularity_certificate(&x, &s, &pv(&[1, 1]), &complex),
            Err(Error::CertificateInapplicable)
        ));
        // torsion module rejected
        let q = MonomialModule::Quotient {
            ideal: MonomialIdeal::new(vec![Monomial(FineVector(vec![0, 0, 1, 0]))]),
        };
        assert!(matches!(
            nonregularity_certificate(&x, &q, &pv(&[-1, 1]), &complex),
            Err(Error::NotTorsionFree)
        ));
    }

    #[test]
    fn certificates_match_verdicts() {
        let x = h(2);
        let complex = chamber_complex(&x.var_degrees(), Some(&x.nef)).unwrap();
        let s = MonomialModule::cox_ring(2);
        let mut o = oracle(&x, &s);
        let w = Window::new(pv(&[-4, -4]), pv(&[4, 4])).unwrap();
        for d in Window::new(pv(&[-2, -2]), pv(&[2, 2])).unwrap().points() {
            if let Ok(cert) = nonregularity_certificate(&x, &s, &d, &complex) {
                assert_eq!(cert.d, d);
                assert!(matches!(
                    is_d_regular(&x, &mut o, &d, &w).unwrap(),
                    RegularityVerdict::NotRegular { .. }
                ));
            }
        }
    }

    #[test]
    fn region_upward_closed_with_antichain_minima() {
        let x = h(2);
        let i = MonomialModule::Ideal {
            ideal: MonomialIdeal::new(vec![
                Monomial(FineVector(vec![1, 0, 0, 1])),
                Monomial(FineVector(vec![0, 2, 4, 0])),
            ]),
        };
        let mut o = oracle(&x, &i);
        let w = Window::new(pv(&[-1, -1]), pv(&[5, 5])).unwrap();
        let region = reg_region(&x, &mut o, &w).unwrap();
        assert!(!region.points.is_empty());
        for p in &region.points {
            for c in &x.nef_gens {
                let q = p + c;
                if w.contains(&q) {
                    assert!(region.points.contains(&q), "not upward closed at {q:?}");
                }
            }
        }
        for a in &region.minima {
            for b in &region.minima {
                if a != b {
                    assert!(!x.nef.contains(&(b - a)));
                }
            }
        }
        for p in &region.points {
            assert!(region.minima.iter().any(|m| x.nef.contains(&(p - m))));
        }
    }

    #[test]
    fn presented_module_region() {
        let x = h(2);
        let text = r#"{
            "shifts": [[3,-3],[2,-2],[1,-2]],
            "relations": [[
                {"coeff": "1", "exp": [5,1,0,0]},
                {"coeff": "1", "exp": [0,2,6,0]},
                {"coeff": "1", "exp": [0,2,5,0]}
            ]],
            "torsion_free": true
        }"#;
        let m = MonomialModule::from_json(text, &x).unwrap();
        let w = Window::new(pv(&[-7, -1]), pv(&[7, 7])).unwrap();
        let cap = crate::cohomology::suggested_cap(&x, &m, &w.lower, &w.upper);
        let mut o = DimsOracle::new(&x, &m, OraclePath::Taylor, cap, Rat::from_int(1)).unwrap();
        let region = reg_region(&x, &mut o, &w).unwrap();
        assert_eq!(region.minima, vec![pv(&[-1, 4]), pv(&[1, 3])]);
        for p in &region.points {
            assert!(x.nef.contains(&(p - &pv(&[-3, 2]))));
        }
        let report = check_containment_bounds(&x, &m, &region).unwrap();
        assert!(report.nef_ok());
        assert_eq!(report.nef_translate, Some(pv(&[-3, 2])));
        assert!(report.torsion_free);

        // chamber certificate at a degree excluded by the region
        let complex = chamber_complex(&x.var_degrees(), Some(&x.nef)).unwrap();
        let cert = nonregularity_certificate(&x, &m, &pv(&[-4, 4]), &complex).unwrap();
        assert_eq!(
            cert.differences,
            vec![pv(&[-1, 1]), pv(&[-2, 2]), pv(&[-3, 2])]
        );
        assert!(!region.points.contains(&pv(&[-4, 4])));
    }

    #[test]
    fn default_window_covers_generators() {
        let x = h(2);
        let i = MonomialModule::Ideal {
            ideal: MonomialIdeal::new(vec![Monomial(FineVector(vec![1, 0, 0, 1]))]),
        };
        let w = Window::default_for(&x, &i);
        for d in i.generator_degrees(&x) {
            assert!(w.contains(&d));
        }
        assert!(w.contains(&pv(&[1, 1])));
    }

    #[test]
    fn lower_bound_search() {
        let nef = Cone::positive_quadrant(2);
        let basis = vec![pv(&[0, 1]), pv(&[1, 0])];
        assert_eq!(
            tightest_lower_bound(&[pv(&[-3, 3]), pv(&[-2, 2]), pv(&[-1, 2])], &nef, &basis),
            Some(pv(&[-3, 2]))
        );
        assert_eq!(
            tightest_lower_bound(&[pv(&[2, 1])], &nef, &basis),
            Some(pv(&[2, 1]))
        );
    }
}
