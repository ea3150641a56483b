//! Seeded random sampling of evaluation points and the randomized
//! numeric-equality oracle used for reconciliation.

use std::collections::BTreeMap;

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::eval::{eval, NumPoint};
use crate::expr::{CoordRole, CoordSym, Expr, Sym};
use crate::scalar::Real;

/// Where sample points come from and which loci they must avoid.
///
/// Positions, velocities and accelerations are drawn uniformly from the
/// given rectangles; by default the barred channel is the conjugate of the
/// unbarred one (the physical slice), which is also the slice on which the
/// structural conjugation rules are value-faithful.
#[derive(Clone, Debug)]
pub struct SampleDomain {
    pub z_re: (f64, f64),
    pub z_im: (f64, f64),
    pub zd_re: (f64, f64),
    pub zd_im: (f64, f64),
    pub zdd_re: (f64, f64),
    pub zdd_im: (f64, f64),
    pub t_range: (f64, f64),
    pub params: BTreeMap<String, f64>,
    /// Singular loci: samples where any of these has magnitude below
    /// `avoid_min` are rejected and redrawn.
    pub avoid: Vec<Expr>,
    pub avoid_min: f64,
    /// Bind barred symbols to conjugates of the unbarred samples.
    pub conjugate_slice: bool,
    /// Redraw budget per requested sample.
    pub max_rejects: usize,
}

impl Default for SampleDomain {
    fn default() -> Self {
        SampleDomain {
            z_re: (0.5, 2.0),
            z_im: (-0.5, 0.5),
            zd_re: (-1.0, 1.0),
            zd_im: (-1.0, 1.0),
            zdd_re: (-1.0, 1.0),
            zdd_im: (-1.0, 1.0),
            t_range: (0.0, 1.0),
            params: BTreeMap::new(),
            avoid: Vec::new(),
            avoid_min: 1e-3,
            conjugate_slice: true,
            max_rejects: 200,
        }
    }
}

impl SampleDomain {
    pub fn with_param(mut self, name: impl Into<String>, value: f64) -> Self {
        self.params.insert(name.into(), value);
        self
    }

    pub fn with_avoid(mut self, locus: Expr) -> Self {
        self.avoid.push(locus);
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SampleError {
    #[error("all samples rejected after {attempts} attempts (domain overlaps singular loci or evaluation keeps failing)")]
    AllSamplesRejected { attempts: usize },
    #[error("sampling domain provides no value for parameter `{0}`")]
    MissingParameter(String),
}

/// Outcome of a randomized numeric comparison.
#[derive(Clone, Debug)]
pub struct EqualityReport<R: Real = f64> {
    pub pass: bool,
    pub max_rel_dev: R,
    /// Values of both sides at the worst sample.
    pub argmax_lhs: Complex<R>,
    pub argmax_rhs: Complex<R>,
    pub argmax: Option<NumPoint<R>>,
    pub samples: usize,
    pub rejected: usize,
    pub tol: R,
}

fn uniform<R: Real>(rng: &mut ChaCha8Rng, range: (f64, f64)) -> R {
    let x: f64 = rng.gen::<f64>();
    R::from_f64(range.0 + x * (range.1 - range.0)).unwrap()
}

/// Draws one point binding every coordinate index mentioned by `syms`.
fn draw_point<R: Real>(
    domain: &SampleDomain,
    rng: &mut ChaCha8Rng,
    indices: &[u32],
) -> NumPoint<R> {
    let mut point = NumPoint::new();
    for &i in indices {
        let z = Complex::new(uniform::<R>(rng, domain.z_re), uniform::<R>(rng, domain.z_im));
        let zd = Complex::new(
            uniform::<R>(rng, domain.zd_re),
            uniform::<R>(rng, domain.zd_im),
        );
        let zdd = Complex::new(
            uniform::<R>(rng, domain.zdd_re),
            uniform::<R>(rng, domain.zdd_im),
        );
        let (zb, zbd, zbdd) = if domain.conjugate_slice {
            (z.conj(), zd.conj(), zdd.conj())
        } else {
            (
                Complex::new(uniform::<R>(rng, domain.z_re), uniform::<R>(rng, domain.z_im)),
                Complex::new(
                    uniform::<R>(rng, domain.zd_re),
                    uniform::<R>(rng, domain.zd_im),
                ),
                Complex::new(
                    uniform::<R>(rng, domain.zdd_re),
                    uniform::<R>(rng, domain.zdd_im),
                ),
            )
        };
        point.insert(Sym::Coord(CoordSym::new(CoordRole::Z, i)), z);
        point.insert(Sym::Coord(CoordSym::new(CoordRole::ZBar, i)), zb);
        point.insert(Sym::Coord(CoordSym::new(CoordRole::ZDot, i)), zd);
        point.insert(Sym::Coord(CoordSym::new(CoordRole::ZBarDot, i)), zbd);
        point.insert(Sym::Coord(CoordSym::new(CoordRole::ZDdot, i)), zdd);
        point.insert(Sym::Coord(CoordSym::new(CoordRole::ZBarDdot, i)), zbdd);
    }
    point.insert(Sym::Time, Complex::new(uniform::<R>(rng, domain.t_range), R::zero()));
    for (name, value) in &domain.params {
        point.insert(
            Sym::Param(name.clone()),
            Complex::new(R::from_f64(*value).unwrap(), R::zero()),
        );
    }
    point
}

fn coordinate_indices(exprs: &[&Expr]) -> Vec<u32> {
    let mut indices: Vec<u32> = Vec::new();
    for e in exprs {
        e.visit(&mut |node| {
            if let Expr::Coord(c) = node {
                if !indices.contains(&c.index) {
                    indices.push(c.index);
                }
            }
        });
    }
    if indices.is_empty() {
        indices.push(1);
    }
    indices.sort_unstable();
    indices
}

fn check_params(exprs: &[&Expr], domain: &SampleDomain) -> Result<(), SampleError> {
    for e in exprs {
        for sym in e.free_symbols() {
            if let Sym::Param(name) = sym {
                if !domain.params.contains_key(&name) {
                    return Err(SampleError::MissingParameter(name));
                }
            }
        }
    }
    Ok(())
}

fn point_is_admissible<R: Real>(domain: &SampleDomain, point: &NumPoint<R>) -> bool {
    for locus in &domain.avoid {
        match eval(locus, point) {
            Ok(v) => {
                let min = R::from_f64(domain.avoid_min).unwrap();
                if !v.re.is_finite() || !v.im.is_finite() || v.norm() < min {
                    return false;
                }
            }
            Err(_) => return false,
        }
    }
    true
}

/// Draws admissible points, retrying up to the domain's reject budget.
pub fn sample_points<R: Real>(
    exprs: &[&Expr],
    domain: &SampleDomain,
    count: usize,
    seed: u64,
) -> Result<Vec<NumPoint<R>>, SampleError> {
    check_params(exprs, domain)?;
    let indices = coordinate_indices(exprs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        if attempts > domain.max_rejects * count.max(1) + count {
            return Err(SampleError::AllSamplesRejected { attempts });
        }
        attempts += 1;
        let p = draw_point::<R>(domain, &mut rng, &indices);
        if point_is_admissible(domain, &p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Relative deviation |a-b| / (1+|a|).
pub fn rel_dev<R: Real>(a: Complex<R>, b: Complex<R>) -> R {
    (a - b).norm() / (R::one() + a.norm())
}

/// Compares two expressions numerically at seeded random points.
///
/// Samples where either side fails to evaluate or is non-finite are
/// rejected and redrawn (bounded). Passes iff the relative deviation stays
/// within `tol` at every accepted sample; the report carries the worst one.
pub fn equal_numeric<R: Real>(
    e1: &Expr,
    e2: &Expr,
    trials: usize,
    tol: f64,
    domain: &SampleDomain,
    seed: u64,
) -> Result<EqualityReport<R>, SampleError> {
    check_params(&[e1, e2], domain)?;
    let indices = coordinate_indices(&[e1, e2]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol_r = R::from_f64(tol).unwrap();

    let mut max_dev = R::zero();
    let mut argmax: Option<NumPoint<R>> = None;
    let mut argmax_vals = (Complex::<R>::new(R::zero(), R::zero()), Complex::new(R::zero(), R::zero()));
    let mut accepted = 0usize;
    let mut rejected = 0usize;

    while accepted < trials {
        if rejected > domain.max_rejects * trials.max(1) + trials {
            return Err(SampleError::AllSamplesRejected {
                attempts: accepted + rejected,
            });
        }
        let p = draw_point::<R>(domain, &mut rng, &indices);
        if !point_is_admissible(domain, &p) {
            rejected += 1;
            continue;
        }
        let (v1, v2) = match (eval(e1, &p), eval(e2, &p)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                rejected += 1;
                continue;
            }
        };
        let finite = v1.re.is_finite() && v1.im.is_finite() && v2.re.is_finite() && v2.im.is_finite();
        if !finite {
            rejected += 1;
            continue;
        }
        accepted += 1;
        let dev = rel_dev(v1, v2);
        if dev > max_dev || argmax.is_none() {
            max_dev = dev;
            argmax = Some(p);
            argmax_vals = (v1, v2);
        }
    }

    Ok(EqualityReport {
        pass: max_dev <= tol_r,
        max_rel_dev: max_dev,
        argmax_lhs: argmax_vals.0,
        argmax_rhs: argmax_vals.1,
        argmax,
        samples: accepted,
        rejected,
        tol: tol_r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_trees_match_exactly() {
        let e = Expr::z(1) * Expr::zb(1) + Expr::param("m");
        let domain = SampleDomain::default().with_param("m", 1.5);
        let r: EqualityReport = equal_numeric(&e, &e, 50, 1e-15, &domain, 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_rel_dev, 0.0);
    }

    #[test]
    fn doubled_term_matches_scaled() {
        let lhs = Expr::z(1) + Expr::z(1);
        let rhs = Expr::int(2) * Expr::z(1);
        let r: EqualityReport =
            equal_numeric(&lhs, &rhs, 100, 1e-12, &SampleDomain::default(), 7).unwrap();
        assert!(r.pass, "max dev {}", r.max_rel_dev);
    }

    #[test]
    fn sqrt_square_on_cut_free_domain() {
        // sqrt(z)^2 = z on the right half-plane
        let lhs = Expr::pow(Expr::sqrt(Expr::z(1)), Expr::int(2));
        let rhs = Expr::z(1);
        let r: EqualityReport =
            equal_numeric(&lhs, &rhs, 100, 1e-12, &SampleDomain::default(), 11).unwrap();
        assert!(r.pass, "max dev {}", r.max_rel_dev);
    }

    #[test]
    fn genuinely_different_trees_fail() {
        let r: EqualityReport = equal_numeric(
            &Expr::z(1),
            &(Expr::z(1) + Expr::ratio(1, 10)),
            20,
            1e-9,
            &SampleDomain::default(),
            3,
        )
        .unwrap();
        assert!(!r.pass);
        assert!(r.max_rel_dev > 1e-3);
        assert!(r.argmax.is_some());
    }

    #[test]
    fn missing_parameter_is_reported() {
        let e = Expr::param("mass") * Expr::z(1);
        let err =
            equal_numeric::<f64>(&e, &e, 5, 1e-9, &SampleDomain::default(), 1).unwrap_err();
        assert_eq!(err, SampleError::MissingParameter("mass".into()));
    }

    #[test]
    fn hostile_domain_rejects_everything() {
        // locus |z1| can never clear a sky-high floor
        let mut domain = SampleDomain::default().with_avoid(Expr::z(1));
        domain.avoid_min = 1e9;
        domain.max_rejects = 5;
        let err = equal_numeric::<f64>(&Expr::z(1), &Expr::z(1), 3, 1e-9, &domain, 1).unwrap_err();
        assert!(matches!(err, SampleError::AllSamplesRejected { .. }));
    }

    #[test]
    fn determinism_under_fixed_seed() {
        let lhs = Expr::sin(Expr::z(1)) * Expr::zb(1);
        let rhs = Expr::sin(Expr::z(1)) * Expr::zb(1) + Expr::ratio(1, 1000);
        let a: EqualityReport =
            equal_numeric(&lhs, &rhs, 40, 1e-9, &SampleDomain::default(), 99).unwrap();
        let b: EqualityReport =
            equal_numeric(&lhs, &rhs, 40, 1e-9, &SampleDomain::default(), 99).unwrap();
        assert_eq!(a.max_rel_dev, b.max_rel_dev);
    }
}
