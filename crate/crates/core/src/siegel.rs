//! Degree-two Siegel cusp forms as Fourier coefficient tables.
//!
//! Coefficients are stored under Gauss-reduced keys, so `a(F, A^T T A) = a(F, T)`
//! holds by construction. Tables come from the Maass lift of an index-one Jacobi
//! cusp form:
//! `a(F, [n, r/2; r/2, m]) = sum_{d | gcd(n, r, m)} d^{k-1} c*((4nm - r^2) / d^2)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{divisors, gcd, is_squarefree, primes_up_to, Rational};
use crate::error::{Error, Result};
use crate::jacobi::JacobiForm;
use crate::qforms::{reduced, reduced_forms, QuadForm};

/// Coefficients `a(F, T)` for every reduced `T` with `4 det T <= 4 det_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiegelCoefficientTable {
    weight: i64,
    source: String,
    det_bound: u64,
    coeffs: BTreeMap<QuadForm, Rational>,
}

impl SiegelCoefficientTable {
    /// A table with every coefficient zero.
    pub fn zero(weight: i64, det_bound: u64) -> Self {
        let coeffs = keys_up_to(det_bound)
            .into_iter()
            .map(|k| (k, Rational::zero()))
            .collect();
        Self {
            weight,
            source: "zero".into(),
            det_bound,
            coeffs,
        }
    }

    /// Rebuilds a table from stored records, checking that every key is reduced,
    /// within the bound, and that no key is missing.
    pub fn from_records(
        weight: i64,
        source: impl Into<String>,
        det_bound: u64,
        records: impl IntoIterator<Item = (QuadForm, Rational)>,
    ) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (k, v) in records {
            let k = QuadForm::new(k.a, k.b, k.c)?;
            if !k.is_reduced() {
                return Err(Error::InconsistentTable(format!("key {k} is not reduced")));
            }
            if k.disc() as u64 > 4 * det_bound {
                return Err(Error::InconsistentTable(format!("key {k} exceeds det bound {det_bound}")));
            }
            coeffs.insert(k, v);
        }
        let expected = keys_up_to(det_bound);
        if let Some(k) = expected.iter().find(|k| !coeffs.contains_key(k)) {
            return Err(Error::MissingCoefficient { a: k.a, b: k.b, c: k.c });
        }
        Ok(Self {
            weight,
            source: source.into(),
            det_bound,
            coeffs,
        })
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// Description of the construction, e.g. `maass_lift(phi_10_1)`.
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Largest admissible `det T`; keys satisfy `4ac - b^2 <= 4 det_bound`.
    pub fn det_bound(&self) -> u64 {
        self.det_bound
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Stored `(reduced key, value)` pairs in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&QuadForm, &Rational)> {
        self.coeffs.iter()
    }

    /// `a(F, T)` for any positive definite `T` within the bound.
    pub fn coefficient(&self, t: &QuadForm) -> Result<Rational> {
        let t = QuadForm::new(t.a, t.b, t.c)?;
        let d = t.disc() as u64;
        if d > 4 * self.det_bound {
            return Err(Error::OutOfPrecision {
                needed: d.div_ceil(4),
                available: self.det_bound,
            });
        }
        let key = reduced(&t)?;
        self.coeffs
            .get(&key)
            .cloned()
            .ok_or(Error::MissingCoefficient { a: t.a, b: t.b, c: t.c })
    }

    /// The index-`m` Fourier–Jacobi coefficient `φ_m` with `c(n, r) = a(F, [n, r/2; r/2, m])`,
    /// for `0 <= n <= n_bound`.
    pub fn fj_slice(&self, m: u64, n_bound: u64) -> Result<JacobiForm> {
        if m == 0 {
            return Err(Error::InvalidArgument("slice index must be positive".into()));
        }
        if n_bound * m > self.det_bound {
            return Err(Error::OutOfPrecision {
                needed: n_bound * m,
                available: self.det_bound,
            });
        }
        let mut pairs = Vec::new();
        for n in 1..=n_bound as i64 {
            let rmax = crate::arith::isqrt(4 * n as u64 * m) as i64;
            for r in -rmax..=rmax {
                if 4 * n * m as i64 - r * r <= 0 {
                    continue;
                }
                let v = self.coefficient(&QuadForm { a: n, b: r, c: m as i64 })?;
                pairs.push(((n, r), v));
            }
        }
        JacobiForm::from_pairs(self.weight, m, n_bound, pairs)
    }

    /// Every `(D, reduced form, a(F, T))` with `D = 4 det T` odd and squarefree, `D <= d_bound`,
    /// and `a(F, T) != 0`, ordered by `D` then form.
    pub fn scan_fundamental(&self, d_bound: u64) -> Result<Vec<(u64, QuadForm, Rational)>> {
        if d_bound > 4 * self.det_bound {
            return Err(Error::OutOfPrecision {
                needed: d_bound.div_ceil(4),
                available: self.det_bound,
            });
        }
        let mut out = Vec::new();
        for d in (3..=d_bound).step_by(4) {
            if !is_squarefree(d) {
                continue;
            }
            for f in reduced_forms(d) {
                let v = self.coefficient(&f)?;
                if !v.is_zero() {
                    out.push((d, f, v));
                }
            }
        }
        Ok(out)
    }

    /// Smallest odd prime `p` whose slice `φ_p` has a nonzero coefficient within precision.
    pub fn first_nonzero_odd_prime_slice(&self) -> Result<u64> {
        for p in primes_up_to(self.det_bound).into_iter().filter(|&p| p > 2) {
            let slice = self.fj_slice(p, self.det_bound / p)?;
            if !slice.is_zero() {
                return Ok(p);
            }
        }
        Err(Error::NotFoundWithinPrecision)
    }

    /// For primitive keys, `a(F, T)` depends on `det T` only (a property of Maass lifts).
    pub fn primitive_values_depend_only_on_disc(&self) -> bool {
        let mut by_disc: BTreeMap<i64, &Rational> = BTreeMap::new();
        for (k, v) in &self.coeffs {
            if !k.is_primitive() {
                continue;
            }
            match by_disc.get(&k.disc()) {
                Some(w) if *w != v => return false,
                Some(_) => {}
                None => {
                    by_disc.insert(k.disc(), v);
                }
            }
        }
        true
    }
}

/// All reduced forms with `0 < D <= 4 det_bound`, in key order.
fn keys_up_to(det_bound: u64) -> Vec<QuadForm> {
    let mut keys: Vec<QuadForm> = (3..=4 * det_bound)
        .filter(|d| matches!(d % 4, 0 | 3))
        .flat_map(reduced_forms)
        .collect();
    keys.sort();
    keys
}

/// The Maass lift of an index-one Jacobi cusp form, tabulated for `det T <= det_bound`.
pub fn maass_lift(phi: &JacobiForm, det_bound: u64) -> Result<SiegelCoefficientTable> {
    if phi.index() != 1 {
        return Err(Error::InvalidArgument(format!("Maass lift needs index 1, not {}", phi.index())));
    }
    if !phi.is_cuspidal() {
        return Err(Error::InvalidArgument("Maass lift input must be a cusp form".into()));
    }
    if phi.d_max() < 4 * det_bound {
        return Err(Error::OutOfPrecision {
            needed: 4 * det_bound,
            available: phi.d_max(),
        });
    }
    let k = phi.weight();
    if k < 1 {
        return Err(Error::InvalidArgument(format!("weight {k} must be positive")));
    }
    let keys = keys_up_to(det_bound);
    let coeffs: Vec<(QuadForm, Rational)> = keys
        .into_par_iter()
        .map(|key| {
            let d = key.disc() as u64;
            let g = gcd(gcd(key.a, key.b), key.c) as u64;
            let mut v = Rational::zero();
            for e in divisors(g) {
                let c = phi.c_star(d / (e * e))?;
                if !c.is_zero() {
                    v += c * Rational::from_integer(BigInt::from(e).pow(k as u32 - 1));
                }
            }
            Ok((key, v))
        })
        .collect::<Result<_>>()?;
    Ok(SiegelCoefficientTable {
        weight: k,
        source: format!("maass_lift(phi_{k}_1)"),
        det_bound,
        coeffs: coeffs.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::jacobi::cusp_generator;
    use crate::qforms::UnimodularTransform;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f10(det_bound: u64) -> (JacobiForm, SiegelCoefficientTable) {
        let phi = cusp_generator(10, det_bound + 1).unwrap();
        let table = maass_lift(&phi, det_bound).unwrap();
        (phi, table)
    }

    #[test]
    fn lift_named_values() {
        let (phi, f) = f10(60);
        let q = |a, b, c| QuadForm { a, b, c };
        assert_eq!(f.coefficient(&q(1, 1, 1)).unwrap(), rat(1));
        assert_eq!(f.coefficient(&q(1, 0, 1)).unwrap(), rat(-2));
        let expected = phi.c_star(12).unwrap() + rat(512) * phi.c_star(3).unwrap();
        assert_eq!(f.coefficient(&q(2, 2, 2)).unwrap(), expected);
        assert_eq!(f.coefficient(&q(1, 4, 5)).unwrap(), rat(-2));
        assert!(matches!(
            f.coefficient(&q(100, 0, 100)),
            Err(Error::OutOfPrecision { .. })
        ));
        assert_eq!(f.weight(), 10);
        assert!(f.iter().all(|(k, _)| k.disc() > 0));
    }

    #[test]
    fn lift_checks_precision() {
        let phi = cusp_generator(10, 10).unwrap();
        assert!(matches!(maass_lift(&phi, 20), Err(Error::OutOfPrecision { .. })));
        let e = crate::jacobi::jacobi_eisenstein(4, 10).unwrap();
        assert!(maass_lift(&e, 5).is_err());
    }

    #[test]
    fn sl2_invariance_random() {
        let (_, f) = f10(150);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let keys: Vec<QuadForm> = f.iter().map(|(k, _)| *k).collect();
        for _ in 0..200 {
            let t = keys[rng.gen_range(0..keys.len())];
            let mut a = UnimodularTransform::IDENTITY;
            for _ in 0..5 {
                a = a.compose(&UnimodularTransform::translation(rng.gen_range(-3..=3)));
                a = a.compose(&UnimodularTransform::SWAP);
            }
            assert_eq!(f.coefficient(&t).unwrap(), f.coefficient(&t.transform(&a)).unwrap());
        }
    }

    #[test]
    fn slices() {
        let (_, f) = f10(60);
        let s1 = f.fj_slice(1, 60).unwrap();
        assert_eq!(s1.coeff(1, 1).unwrap(), rat(1));
        assert_eq!(s1.coeff(1, 2).unwrap(), rat(0));
        let s3 = f.fj_slice(3, 20).unwrap();
        assert_eq!(s3.coeff(1, 3).unwrap(), rat(1));
        assert_eq!(s3.coeff(1, 4).unwrap(), rat(0));
        assert!(s3.verify_elliptic());
        assert!(s3.verify_discriminant_dependence());
        assert!(s3.verify_symmetry());
        for (n, r) in s3.pairs() {
            if 12 * n - r * r > 0 {
                let t = QuadForm { a: n, b: r, c: 3 };
                assert_eq!(s3.coeff(n, r).unwrap(), f.coefficient(&t).unwrap());
            }
        }
        assert!(matches!(f.fj_slice(3, 21), Err(Error::OutOfPrecision { .. })));
    }

    #[test]
    fn scans() {
        let (_, f) = f10(60);
        let scan = f.scan_fundamental(200).unwrap();
        assert_eq!(scan[0], (3, QuadForm { a: 1, b: 1, c: 1 }, rat(1)));
        assert!(scan.iter().all(|(d, _, _)| is_squarefree(*d) && d % 2 == 1));
        assert!(scan.iter().all(|(d, _, _)| *d != 9));
        assert!(scan.len() > 10);
        assert_eq!(f.first_nonzero_odd_prime_slice().unwrap(), 3);
        let z = SiegelCoefficientTable::zero(10, 20);
        assert_eq!(z.first_nonzero_odd_prime_slice(), Err(Error::NotFoundWithinPrecision));
    }

    #[test]
    fn weight_twelve_lift() {
        let phi = cusp_generator(12, 41).unwrap();
        let f = maass_lift(&phi, 40).unwrap();
        assert_eq!(f.coefficient(&QuadForm { a: 1, b: 1, c: 1 }).unwrap(), rat(1));
        assert_eq!(f.first_nonzero_odd_prime_slice().unwrap(), 3);
        assert!(f.primitive_values_depend_only_on_disc());
    }

    #[test]
    fn records_round_trip() {
        let (_, f) = f10(30);
        let records: Vec<_> = f.iter().map(|(k, v)| (*k, v.clone())).collect();
        let g = SiegelCoefficientTable::from_records(10, f.source(), 30, records.clone()).unwrap();
        assert_eq!(f, g);
        let short = records[1..].to_vec();
        assert!(matches!(
            SiegelCoefficientTable::from_records(10, "x", 30, short),
            Err(Error::MissingCoefficient { .. })
        ));
    }
}
