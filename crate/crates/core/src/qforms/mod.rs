//! Positive definite binary quadratic forms.
//!
//! A form `(a, b, c)` stands for the semi-integral matrix
//! `S = [[a, b/2], [b/2, c]]` and the polynomial `a x^2 + b x y + c y^2`.
//! Its discriminant is written positively, `D = 4ac - b^2`.
//! Unimodular matrices act by `S ↦ A^T S A`.

mod class_group;

use std::fmt;

use crate::arith::{ext_gcd, gcd, is_fundamental_discriminant, is_prime};
use crate::error::{Error, Result};

pub use class_group::{class_sum, compose, ClassGroup};

/// The form `a x^2 + b x y + c y^2`, i.e. the matrix `[[a, b/2], [b/2, c]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    /// Builds a form, rejecting anything that is not positive definite.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let f = Self { a, b, c };
        if a <= 0 || f.disc_i128() <= 0 {
            return Err(Error::NotPositiveDefinite { a, b, c });
        }
        Ok(f)
    }

    fn disc_i128(&self) -> i128 {
        4 * self.a as i128 * self.c as i128 - self.b as i128 * self.b as i128
    }

    /// `D = 4ac - b^2`, which is `4 det S`.
    pub fn disc(&self) -> i64 {
        self.disc_i128() as i64
    }

    /// `gcd(a, b, c)`.
    pub fn content(&self) -> i64 {
        gcd(gcd(self.a, self.b), self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// `-D` is a fundamental discriminant.
    pub fn is_fundamental(&self) -> bool {
        is_fundamental_discriminant(-self.disc())
    }

    /// `|b| <= a <= c`, with `b >= 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        if !(b.abs() <= a && a <= c) {
            return false;
        }
        !((b.abs() == a || a == c) && b < 0)
    }

    /// Value `a x^2 + b x y + c y^2`.
    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    /// `A^T S A`.
    pub fn transform(&self, t: &UnimodularTransform) -> QuadForm {
        let [[p, q], [r, s]] = t.m.map(|row| row.map(|x| x as i128));
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let na = a * p * p + b * p * r + c * r * r;
        let nb = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s;
        let nc = a * q * q + b * q * s + c * s * s;
        let narrow = |v: i128| i64::try_from(v).expect("transformed form exceeds i64");
        QuadForm {
            a: narrow(na),
            b: narrow(nb),
            c: narrow(nc),
        }
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// An integer matrix `[[m00, m01], [m10, m11]]` of determinant one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularTransform {
    m: [[i64; 2]; 2],
}

impl UnimodularTransform {
    pub const IDENTITY: Self = Self {
        m: [[1, 0], [0, 1]],
    };

    /// `[[0, -1], [1, 0]]`, which sends `(a, b, c)` to `(c, -b, a)`.
    pub const SWAP: Self = Self {
        m: [[0, -1], [1, 0]],
    };

    /// Returns `None` unless the determinant is one.
    pub fn new(m: [[i64; 2]; 2]) -> Option<Self> {
        let det = m[0][0] as i128 * m[1][1] as i128 - m[0][1] as i128 * m[1][0] as i128;
        (det == 1).then_some(Self { m })
    }

    /// `[[1, k], [0, 1]]`, which sends `(a, b, c)` to `(a, b + 2ak, ak^2 + bk + c)`.
    pub fn translation(k: i64) -> Self {
        Self {
            m: [[1, k], [0, 1]],
        }
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.m
    }

    /// Matrix product `self * rhs`; acting by the product means acting by `self` first.
    pub fn compose(&self, rhs: &Self) -> Self {
        let a = self.m.map(|r| r.map(|x| x as i128));
        let b = rhs.m.map(|r| r.map(|x| x as i128));
        let mut out = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
                out[i][j] = i64::try_from(v).expect("transform entries exceed i64");
            }
        }
        Self { m: out }
    }

    pub fn det(&self) -> i64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }
}

/// Gauss reduction. Returns the reduced form `g` and `A` with `A^T S_f A = S_g`.
pub fn reduce(f: &QuadForm) -> Result<(QuadForm, UnimodularTransform)> {
    let mut g = QuadForm::new(f.a, f.b, f.c)?;
    let mut acc = UnimodularTransform::IDENTITY;
    loop {
        // Bring b into (-a, a].
        let k = (g.a - g.b).div_euclid(2 * g.a);
        if k != 0 {
            let t = UnimodularTransform::translation(k);
            g = g.transform(&t);
            acc = acc.compose(&t);
        }
        if g.a > g.c || (g.a == g.c && g.b < 0) {
            g = g.transform(&UnimodularTransform::SWAP);
            acc = acc.compose(&UnimodularTransform::SWAP);
            continue;
        }
        return Ok((g, acc));
    }
}

/// The reduced representative of `f`'s class.
pub fn reduced(f: &QuadForm) -> Result<QuadForm> {
    reduce(f).map(|(g, _)| g)
}

/// Finds `A ∈ SL_2(Z)` such that `A^T S A` has an odd prime in its bottom-right entry.
///
/// Coprime pairs `(x0, y0)` are scanned by increasing `max(|x0|, |y0|)`; the first
/// pair with `a y0^2 + b x0 y0 + c x0^2` an odd prime is completed to
/// `A = [[y1, y0], [x1, x0]]` by the extended Euclidean algorithm.
pub fn represent_odd_prime(
    f: &QuadForm,
    search_bound: i64,
) -> Result<(UnimodularTransform, QuadForm, u64)> {
    let f = QuadForm::new(f.a, f.b, f.c)?;
    if !f.is_primitive() {
        return Err(Error::InvalidArgument(format!("form {f} is not primitive")));
    }
    for s in 1..=search_bound {
        for x0 in 0..=s {
            for y0 in (-s..=s).rev() {
                if x0.abs().max(y0.abs()) != s || gcd(x0, y0) != 1 || (x0 == 0 && y0 < 0) {
                    continue;
                }
                let value = f.eval(y0, x0);
                if value <= 2 || value % 2 == 0 || value > u64::MAX as i128 {
                    continue;
                }
                if !is_prime(value as u64) {
                    continue;
                }
                let (_, u, v) = ext_gcd(x0, y0);
                let t = UnimodularTransform::new([[u, y0], [-v, x0]])
                    .expect("extended gcd completes a primitive column");
                let g = f.transform(&t);
                debug_assert_eq!(g.c as i128, value);
                return Ok((t, g, value as u64));
            }
        }
    }
    Err(Error::BoundExhausted {
        bound: search_bound,
    })
}

/// All reduced forms of discriminant `-disc`, primitive or not, ordered by `(a, b)`.
pub fn reduced_forms(disc: u64) -> Vec<QuadForm> {
    let d = disc as i64;
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= d {
        for b in -a..=a {
            let num = d + b * b;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QuadForm { a, b, c: num / (4 * a) };
            if f.is_reduced() {
                out.push(f);
            }
        }
        a += 1;
    }
    out
}
