//! Class groups of positive definite forms under Gauss composition.

use std::collections::HashMap;

use num_traits::Zero;

use super::{reduced, reduced_forms, QuadForm};
use crate::arith::{ext_gcd, lcm_u64, Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::siegel::SiegelCoefficientTable;

/// The form class group of discriminant `-D`, with composition and character tables.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    disc: u64,
    classes: Vec<QuadForm>,
    index: HashMap<QuadForm, usize>,
    table: Vec<Vec<usize>>,
    identity: usize,
    exponent: u32,
    /// `characters[j][c]` is the exponent `e` with `Λ_j(c) = exp(2πi e / exponent)`.
    characters: Vec<Vec<u32>>,
}

/// Composition of two primitive forms of the same discriminant, before reduction.
///
/// Follows the classical algorithm on united forms: two extended Euclidean
/// steps produce `a3 = a1 a2 / d^2` and `b3` with `b3 ≡ b2 (mod 2 a2 / d)`.
pub fn compose(f1: &QuadForm, f2: &QuadForm) -> QuadForm {
    let disc = f1.disc();
    debug_assert_eq!(disc, f2.disc());
    let (f1, f2) = if f1.a > f2.a { (f2, f1) } else { (f1, f2) };
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (y1, d) = if a2 % a1 == 0 {
        (0i128, a1)
    } else {
        let (d, u, _) = ext_gcd(a2 as i64, a1 as i64);
        (u as i128, d as i128)
    };
    let (x2, y2, d1) = if s % d == 0 {
        (0i128, -1i128, d)
    } else {
        let (d1, u, v) = ext_gcd(s as i64, d as i64);
        (u as i128, -(v as i128), d1 as i128)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (b3 * b3 + disc as i128) / (4 * a3);
    debug_assert_eq!(4 * a3 * c3 - b3 * b3, disc as i128);
    QuadForm {
        a: a3 as i64,
        b: b3 as i64,
        c: c3 as i64,
    }
}

impl ClassGroup {
    /// Builds `Cl_D` for `-D ≡ 0, 1 (mod 4)`.
    pub fn new(disc: u64) -> Result<Self> {
        if disc == 0 || !matches!(disc % 4, 0 | 3) {
            return Err(Error::InvalidDiscriminant(disc));
        }
        let classes: Vec<QuadForm> = reduced_forms(disc)
            .into_iter()
            .filter(QuadForm::is_primitive)
            .collect();
        let index: HashMap<QuadForm, usize> =
            classes.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let h = classes.len();
        let mut table = vec![vec![0usize; h]; h];
        for i in 0..h {
            for j in i..h {
                let g = reduced(&compose(&classes[i], &classes[j]))?;
                let k = *index
                    .get(&g)
                    .ok_or_else(|| Error::InconsistentTable(format!("composite {g} is not a class")))?;
                table[i][j] = k;
                table[j][i] = k;
            }
        }
        let principal = if disc.is_multiple_of(4) {
            QuadForm { a: 1, b: 0, c: disc as i64 / 4 }
        } else {
            QuadForm { a: 1, b: 1, c: (disc as i64 + 1) / 4 }
        };
        let identity = index[&principal];
        let mut group = Self {
            disc,
            classes,
            index,
            table,
            identity,
            exponent: 1,
            characters: Vec::new(),
        };
        group.exponent = (0..h).map(|c| group.order_of(c) as u64).fold(1, lcm_u64) as u32;
        group.characters = group.build_characters();
        Ok(group)
    }

    pub fn disc(&self) -> u64 {
        self.disc
    }

    /// Class number.
    pub fn order(&self) -> usize {
        self.classes.len()
    }

    /// Reduced primitive representatives, ordered by `(a, b)`.
    pub fn classes(&self) -> &[QuadForm] {
        &self.classes
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Index of the class of any primitive form of this discriminant.
    pub fn class_of(&self, f: &QuadForm) -> Result<usize> {
        if f.disc() as u64 != self.disc {
            return Err(Error::InvalidArgument(format!(
                "form {f} does not have discriminant -{}",
                self.disc
            )));
        }
        let g = reduced(f)?;
        self.index
            .get(&g)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("form {f} is not primitive")))
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        let f = self.classes[i];
        self.index[&reduced(&QuadForm { a: f.a, b: -f.b, c: f.c }).expect("positive definite")]
    }

    pub fn pow(&self, i: usize, e: u64) -> usize {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, i))
    }

    pub fn order_of(&self, i: usize) -> u32 {
        let mut x = i;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, i);
            n += 1;
        }
        n
    }

    /// Group exponent; every character value is a power of `exp(2πi / exponent)`.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Number of characters; always equals the class number.
    pub fn num_characters(&self) -> usize {
        self.characters.len()
    }

    /// Exponent `e` with `Λ_j(class) = exp(2πi e / exponent())`. Character `0` is trivial.
    pub fn character_exponent(&self, j: usize, class: usize) -> u32 {
        self.characters[j][class]
    }

    pub fn character_value(&self, j: usize, class: usize) -> Cyclotomic {
        Cyclotomic::root_of_unity(self.exponent, self.characters[j][class])
    }

    /// Extends characters one generator at a time.
    ///
    /// When `g` is adjoined to a subgroup `H` and `t` is least with `g^t ∈ H`, each
    /// character of `H` has exactly `t` extensions, given by the `t`-th roots of `χ(g^t)`.
    fn build_characters(&self) -> Vec<Vec<u32>> {
        let h = self.order();
        let e = self.exponent;
        let mut members = vec![self.identity];
        let mut in_sub = vec![false; h];
        in_sub[self.identity] = true;
        let mut chars: Vec<Vec<Option<u32>>> = vec![{
            let mut v = vec![None; h];
            v[self.identity] = Some(0);
            v
        }];
        for g in 0..h {
            if in_sub[g] {
                continue;
            }
            let mut t = 1u32;
            let mut gt = g;
            while !in_sub[gt] {
                gt = self.mul(gt, g);
                t += 1;
            }
            let mut new_members = Vec::with_capacity(members.len() * t as usize);
            let mut extended = Vec::with_capacity(chars.len() * t as usize);
            for chi in &chars {
                let base = chi[gt].expect("g^t lies in the subgroup") / t;
                for choice in 0..t {
                    let x = (base + choice * (e / t)) % e;
                    let mut next = vec![None; h];
                    let mut gi = self.identity;
                    for i in 0..t {
                        for &m in &members {
                            let elt = self.mul(gi, m);
                            next[elt] = Some((i * x + chi[m].unwrap()) % e);
                        }
                        gi = self.mul(gi, g);
                    }
                    extended.push(next);
                }
            }
            let mut gi = self.identity;
            for _ in 0..t {
                for &m in &members {
                    new_members.push(self.mul(gi, m));
                }
                gi = self.mul(gi, g);
            }
            for &m in &new_members {
                in_sub[m] = true;
            }
            members = new_members;
            chars = extended;
        }
        chars
            .into_iter()
            .map(|c| c.into_iter().map(|v| v.expect("characters are total")).collect())
            .collect()
    }

    /// `sum_c conj(Λ_j(c)) · value(c)` over the class representatives.
    pub fn character_sum<F>(&self, j: usize, mut value: F) -> Result<Cyclotomic>
    where
        F: FnMut(&QuadForm) -> Result<Rational>,
    {
        let e = self.exponent;
        let mut weights = vec![Rational::zero(); e as usize];
        for (c, f) in self.classes.iter().enumerate() {
            let v = value(f)?;
            let conj = (e - self.characters[j][c]) % e;
            weights[conj as usize] += v;
        }
        Ok(Cyclotomic::from_exponent_weights(e, weights))
    }

    /// Checks closure, identity, inverses, commutativity and associativity on the table.
    pub fn verify_axioms(&self) -> bool {
        let h = self.order();
        let id = self.identity;
        for i in 0..h {
            if self.mul(i, id) != i || self.mul(id, i) != i {
                return false;
            }
            if self.mul(i, self.inverse(i)) != id {
                return false;
            }
            for j in 0..h {
                if self.mul(i, j) != self.mul(j, i) {
                    return false;
                }
                for k in 0..h {
                    if self.mul(self.mul(i, j), k) != self.mul(i, self.mul(j, k)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Checks that every character is a homomorphism and that the rows and columns
    /// of the character table are orthogonal, exactly.
    pub fn verify_characters(&self) -> bool {
        let h = self.order();
        let e = self.exponent;
        if self.characters.len() != h {
            return false;
        }
        for chi in &self.characters {
            for i in 0..h {
                for j in 0..h {
                    if chi[self.mul(i, j)] != (chi[i] + chi[j]) % e {
                        return false;
                    }
                }
            }
        }
        let hq = Cyclotomic::from_integer(h as i64);
        let zero = Cyclotomic::zero();
        let sum_of = |pairs: &mut dyn Iterator<Item = (u32, u32)>| {
            let mut w = vec![Rational::zero(); e as usize];
            for (x, y) in pairs {
                w[((x + e - y) % e) as usize] += Rational::from_integer(1.into());
            }
            Cyclotomic::from_exponent_weights(e, w)
        };
        for a in 0..h {
            for b in 0..h {
                let rows = sum_of(&mut (0..h).map(|c| (self.characters[a][c], self.characters[b][c])));
                let cols = sum_of(&mut (0..h).map(|j| (self.characters[j][a], self.characters[j][b])));
                let expected = if a == b { &hq } else { &zero };
                if &rows != expected || &cols != expected {
                    return false;
                }
            }
        }
        true
    }
}

/// The class sum `a(D, Λ_j; F) = sum_{c ∈ Cl_D} conj(Λ_j(c)) a(F, c)`.
pub fn class_sum(
    table: &SiegelCoefficientTable,
    group: &ClassGroup,
    character: usize,
) -> Result<Cyclotomic> {
    if character >= group.num_characters() {
        return Err(Error::InvalidArgument(format!(
            "character index {character} out of range 0..{}",
            group.num_characters()
        )));
    }
    group.character_sum(character, |f| {
        table.coefficient(f).map_err(|e| match e {
            Error::OutOfPrecision { .. } => Error::MissingCoefficient { a: f.a, b: f.b, c: f.c },
            other => other,
        })
    })
}
